//! Persisted sets of speed tuples.
//!
//! File format (bit-exact): UTF-8 text, LF line endings. Line 1 is the
//! header `# lrc k=<k> p=<p> l=<l> stage=<label> count=<n>`; every further
//! line is one tuple, coordinates as decimal integers joined by commas.
//! Lines are sorted strictly ascending lexicographically by the integer
//! vectors, with a trailing newline. The content digest is the SHA-256 of
//! the full file bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::canonical::Canonicalizer;
use crate::error::{Error, Result};
use crate::params::AnsatzParams;

/// A deduplicated, lexicographically sorted set of speed tuples plus its
/// ansatz and stage provenance. Coordinates are stored flat, `k` per tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSet {
    params: AnsatzParams,
    label: String,
    data: Vec<u32>,
}

impl TupleSet {
    /// Wrap possibly unsorted, possibly duplicated flat data.
    pub fn from_flat(params: AnsatzParams, label: impl Into<String>, data: Vec<u32>) -> Self {
        let data = sort_dedup_flat(data, params.k_usize());
        Self {
            params,
            label: label.into(),
            data,
        }
    }

    pub fn empty(params: AnsatzParams, label: impl Into<String>) -> Self {
        Self {
            params,
            label: label.into(),
            data: Vec::new(),
        }
    }

    pub fn params(&self) -> &AnsatzParams {
        &self.params
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        if self.data.is_empty() {
            0
        } else {
            self.data.len() / self.params.k_usize()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.params.k_usize())
    }

    pub fn tuple(&self, i: usize) -> &[u32] {
        let k = self.params.k_usize();
        &self.data[i * k..(i + 1) * k]
    }

    /// Serialized file bytes (header, rows, trailing newline).
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = String::with_capacity(64 + self.data.len() * 4);
        let _ = writeln!(
            out,
            "# lrc k={} p={} l={} stage={} count={}",
            self.params.k(),
            self.params.p(),
            self.params.l(),
            self.label,
            self.len()
        );
        let mut row = String::new();
        for t in self.iter() {
            row.clear();
            for (i, c) in t.iter().enumerate() {
                if i > 0 {
                    row.push(',');
                }
                let _ = write!(row, "{c}");
            }
            out.push_str(&row);
            out.push('\n');
        }
        out.into_bytes()
    }

    pub fn digest(&self) -> String {
        digest_hex(&self.serialize())
    }

    /// Atomically write the set (temp file + rename); returns the digest.
    pub fn write_to(&self, path: &Path) -> Result<String> {
        let bytes = self.serialize();
        let digest = digest_hex(&bytes);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, path)?;
        Ok(digest)
    }

    /// Read and fully validate a set; returns the set and the file digest.
    pub fn read_from(path: &Path) -> Result<(Self, String)> {
        let bytes = fs::read(path)?;
        let digest = digest_hex(&bytes);
        let text = std::str::from_utf8(&bytes).map_err(|_| malformed(path, "not UTF-8"))?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| malformed(path, "empty file"))?;
        let mut k = None;
        let mut p = None;
        let mut l = None;
        let mut label = None;
        let mut count = None;
        if !header.starts_with("# lrc ") {
            return Err(malformed(path, "missing `# lrc` header"));
        }
        for token in header.trim_start_matches("# lrc ").split(' ') {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| malformed(path, &format!("bad header token `{token}`")))?;
            match key {
                "k" => k = Some(parse_u64(path, value)?),
                "p" => p = Some(parse_u64(path, value)?),
                "l" => l = Some(parse_u64(path, value)?),
                "stage" => label = Some(value.to_string()),
                "count" => count = Some(parse_u64(path, value)?),
                other => return Err(malformed(path, &format!("unknown header key `{other}`"))),
            }
        }
        let (k, p, l, label, count) = match (k, p, l, label, count) {
            (Some(k), Some(p), Some(l), Some(label), Some(count)) => (k, p, l, label, count),
            _ => return Err(malformed(path, "incomplete header")),
        };
        let params = AnsatzParams::new(k as u32, p, l)?;
        let ku = params.k_usize();
        let mut data: Vec<u32> = Vec::with_capacity(count as usize * ku);
        let mut prev_start: Option<usize> = None;
        for line in lines {
            let start = data.len();
            for field in line.split(',') {
                let c = parse_u64(path, field)?;
                if c >= params.lp() || c % params.p() == 0 {
                    return Err(malformed(path, &format!("coordinate {c} outside Z_{{p,l}}")));
                }
                data.push(c as u32);
            }
            if data.len() - start != ku {
                return Err(malformed(path, &format!("row `{line}` is not length {ku}")));
            }
            if let Some(ps) = prev_start {
                if data[ps..ps + ku] >= data[start..start + ku] {
                    return Err(malformed(path, "rows not strictly ascending"));
                }
            }
            prev_start = Some(start);
        }
        if data.len() != count as usize * ku {
            return Err(malformed(path, "count does not match row total"));
        }
        Ok((
            Self {
                params,
                label,
                data,
            },
            digest,
        ))
    }

    /// The set of canonical classes mod p covered by this set.
    pub fn canonical_classes(&self) -> Result<BTreeSet<Vec<u64>>> {
        let p = self.params.p();
        let mut ctx = Canonicalizer::new(p);
        let mut classes = BTreeSet::new();
        let mut reduced = Vec::with_capacity(self.params.k_usize());
        let mut out = Vec::with_capacity(self.params.k_usize());
        for t in self.iter() {
            reduced.clear();
            reduced.extend(t.iter().map(|&c| u64::from(c) % p));
            ctx.canonical_into(&reduced, &mut out)?;
            classes.insert(out.clone());
        }
        Ok(classes)
    }
}

fn malformed(path: &Path, reason: &str) -> Error {
    Error::MalformedFile {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

fn parse_u64(path: &Path, s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| malformed(path, &format!("expected integer, got `{s}`")))
}

pub fn digest_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Sort flat tuple data lexicographically and drop duplicates.
fn sort_dedup_flat(data: Vec<u32>, k: usize) -> Vec<u32> {
    if data.is_empty() {
        return data;
    }
    debug_assert_eq!(data.len() % k, 0);
    let n = data.len() / k;
    let chunk = |i: usize| &data[i * k..(i + 1) * k];
    let mut idx: Vec<u32> = (0..n as u32).collect();
    idx.par_sort_unstable_by(|&a, &b| chunk(a as usize).cmp(chunk(b as usize)));
    let mut out = Vec::with_capacity(data.len());
    for (pos, &i) in idx.iter().enumerate() {
        let t = chunk(i as usize);
        if pos > 0 {
            let prev_len = out.len();
            if &out[prev_len - k..] == t {
                continue;
            }
        }
        out.extend_from_slice(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: u32, p: u64, l: u64) -> AnsatzParams {
        AnsatzParams::new(k, p, l).unwrap()
    }

    #[test]
    fn sorts_and_dedups() {
        let s = TupleSet::from_flat(
            params(2, 5, 1),
            "S1",
            vec![2, 3, 1, 2, 2, 3, 1, 1],
        );
        let tuples: Vec<&[u32]> = s.iter().collect();
        assert_eq!(tuples, vec![&[1u32, 1][..], &[1, 2], &[2, 3]]);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn serialization_is_bit_exact() {
        let s = TupleSet::from_flat(params(3, 5, 1), "S1", vec![1, 1, 2]);
        let text = String::from_utf8(s.serialize()).unwrap();
        assert_eq!(text, "# lrc k=3 p=5 l=1 stage=S1 count=1\n1,1,2\n");
        let empty = TupleSet::empty(params(3, 5, 1), "S1");
        assert_eq!(
            String::from_utf8(empty.serialize()).unwrap(),
            "# lrc k=3 p=5 l=1 stage=S1 count=0\n"
        );
    }

    #[test]
    fn roundtrip_with_digest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.tuples");
        let s = TupleSet::from_flat(params(3, 5, 2), "S2=x2(S1)", vec![1, 6, 7, 6, 1, 7]);
        let d1 = s.write_to(&path).unwrap();
        let (back, d2) = TupleSet::read_from(&path).unwrap();
        assert_eq!(s, back);
        assert_eq!(d1, d2);
        assert_eq!(d1, s.digest());
    }

    #[test]
    fn read_rejects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.tuples");
        fs::write(&path, "# lrc k=3 p=5 l=1 stage=S1 count=2\n1,1,2\n").unwrap();
        assert!(TupleSet::read_from(&path).is_err()); // count mismatch
        fs::write(&path, "# lrc k=3 p=5 l=1 stage=S1 count=2\n1,2,2\n1,1,2\n").unwrap();
        assert!(TupleSet::read_from(&path).is_err()); // out of order
        fs::write(&path, "# lrc k=3 p=5 l=1 stage=S1 count=1\n1,1,5\n").unwrap();
        assert!(TupleSet::read_from(&path).is_err()); // 5 divisible by p
    }

    #[test]
    fn canonical_classes_at_p5() {
        let s = TupleSet::from_flat(params(3, 5, 2), "S2", vec![1, 6, 7, 6, 1, 7]);
        let classes = s.canonical_classes().unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes.contains(&vec![1u64, 1, 2]));
    }
}
