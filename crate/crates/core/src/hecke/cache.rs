//! On-disk store for Kazhdan–Lusztig columns.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! header : "PKLC" | u32 version | 32 bytes datum hash
//! record : u32 n | n bytes payload | first 8 bytes of sha256(payload)
//! payload: key | u32 terms | terms × (key | poly)
//! key    : u16 len | utf-8 element text
//! poly   : u32 terms | terms × (i32 exponent | u16 len | signed LE bytes)
//! ```
//!
//! A record whose checksum or payload does not verify is skipped. A file
//! with the wrong header is replaced.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::lincomb::LinComb;
use crate::weyl::{ExtElem, Weyl};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"PKLC";

#[derive(Debug)]
pub struct CacheFile {
    path: PathBuf,
    written: HashSet<ExtElem>,
    skipped: usize,
}

type Entries = Vec<(ExtElem, LinComb<ExtElem>)>;

impl CacheFile {
    pub fn path_for(weyl: &Weyl, dir: &Path) -> PathBuf {
        let h = weyl.datum().hash();
        dir.join(format!("kl-{}.pklc", &h[..16]))
    }

    pub fn open(weyl: &Weyl, dir: &Path) -> Result<(CacheFile, Entries)> {
        fs::create_dir_all(dir)?;
        let path = Self::path_for(weyl, dir);
        let header = header(weyl)?;
        let mut entries = vec![];
        let mut skipped = 0;
        let mut valid_header = false;
        if path.exists() {
            let mut bytes = vec![];
            File::open(&path)?.read_to_end(&mut bytes)?;
            if bytes.len() >= header.len() && bytes[..header.len()] == header[..] {
                valid_header = true;
                let (e, s) = read_records(weyl, &bytes[header.len()..]);
                entries = e;
                skipped = s;
            }
        }
        if !valid_header {
            let mut f = File::create(&path)?;
            f.write_all(&header)?;
        }
        let written = entries.iter().map(|(k, _)| k.clone()).collect();
        Ok((
            CacheFile {
                path,
                written,
                skipped,
            },
            entries,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Records dropped while loading.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Writes each column whose key is not yet on disk. Returns the number
    /// of records appended.
    pub fn append<'a>(
        &mut self,
        weyl: &Weyl,
        cols: impl Iterator<Item = (&'a ExtElem, &'a LinComb<ExtElem>)>,
    ) -> Result<usize> {
        let mut fresh: Vec<(&ExtElem, &LinComb<ExtElem>)> =
            cols.filter(|(k, _)| !self.written.contains(*k)).collect();
        fresh.sort_by_key(|(k, _)| weyl.bfs_key(k));
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut buf = vec![];
        for (k, col) in &fresh {
            let payload = encode(weyl, k, col)?;
            buf.extend_from_slice(&(payload.len() as u32).to_le_bytes());
            buf.extend_from_slice(&payload);
            buf.extend_from_slice(&Sha256::digest(&payload)[..8]);
        }
        let mut f = OpenOptions::new().append(true).open(&self.path)?;
        f.write_all(&buf)?;
        for (k, _) in &fresh {
            self.written.insert((*k).clone());
        }
        Ok(fresh.len())
    }
}

fn header(weyl: &Weyl) -> Result<Vec<u8>> {
    let mut h = MAGIC.to_vec();
    h.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    let hash = hex::decode(weyl.datum().hash()).map_err(|e| Error::Io(e.to_string()))?;
    h.extend_from_slice(&hash);
    Ok(h)
}

fn put_key(buf: &mut Vec<u8>, text: &str) -> Result<()> {
    let n = u16::try_from(text.len()).map_err(|_| Error::Io("element text too long".into()))?;
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(text.as_bytes());
    Ok(())
}

fn encode(weyl: &Weyl, k: &ExtElem, col: &LinComb<ExtElem>) -> Result<Vec<u8>> {
    let mut buf = vec![];
    put_key(&mut buf, &weyl.format(k))?;
    buf.extend_from_slice(&(col.len() as u32).to_le_bytes());
    for (y, p) in col.iter() {
        put_key(&mut buf, &weyl.format(y))?;
        buf.extend_from_slice(&(p.num_terms() as u32).to_le_bytes());
        for (e, c) in p.terms() {
            buf.extend_from_slice(&e.to_le_bytes());
            let bytes = c.to_signed_bytes_le();
            let n = u16::try_from(bytes.len()).map_err(|_| Error::Io("coefficient too large".into()))?;
            buf.extend_from_slice(&n.to_le_bytes());
            buf.extend_from_slice(&bytes);
        }
    }
    Ok(buf)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let s = self.data.get(self.pos..end)?;
        self.pos = end;
        Some(s)
    }

    fn u16(&mut self) -> Option<u16> {
        Some(u16::from_le_bytes(self.take(2)?.try_into().ok()?))
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }

    fn i32(&mut self) -> Option<i32> {
        Some(i32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }

    fn key(&mut self, weyl: &Weyl) -> Option<ExtElem> {
        let n = self.u16()? as usize;
        let text = std::str::from_utf8(self.take(n)?).ok()?;
        weyl.parse(text).ok()
    }
}

fn decode(weyl: &Weyl, payload: &[u8]) -> Option<(ExtElem, LinComb<ExtElem>)> {
    let mut c = Cursor {
        data: payload,
        pos: 0,
    };
    let k = c.key(weyl)?;
    let n = c.u32()?;
    let mut col = LinComb::new();
    for _ in 0..n {
        let y = c.key(weyl)?;
        let m = c.u32()?;
        let mut terms = vec![];
        for _ in 0..m {
            let e = c.i32()?;
            let len = c.u16()? as usize;
            terms.push((e, BigInt::from_signed_bytes_le(c.take(len)?)));
        }
        col.add_term(y, &LaurentPoly::from_terms(terms));
    }
    (c.pos == payload.len()).then_some((k, col))
}

fn read_records(weyl: &Weyl, data: &[u8]) -> (Entries, usize) {
    let mut out = vec![];
    let mut skipped = 0;
    let mut c = Cursor { data, pos: 0 };
    while c.pos < data.len() {
        let Some(n) = c.u32() else {
            skipped += 1;
            break;
        };
        let (Some(payload), Some(sum)) = (c.take(n as usize), c.take(8)) else {
            skipped += 1;
            break;
        };
        if Sha256::digest(payload)[..8] != *sum {
            skipped += 1;
            continue;
        }
        match decode(weyl, payload) {
            Some(e) => out.push(e),
            None => skipped += 1,
        }
    }
    (out, skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::Hecke;
    use std::sync::Arc;

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let g = Arc::new(Weyl::from_type("B2").unwrap());
        let h = Hecke::with_cache_dir(g.clone(), dir.path()).unwrap();
        let ws = g.enumerate_w(5);
        for w in &ws {
            h.kl_basis(w);
        }
        let n = h.flush_cache().unwrap();
        assert_eq!(n, h.cached_len());
        assert_eq!(h.flush_cache().unwrap(), 0);

        let h2 = Hecke::with_cache_dir(g.clone(), dir.path()).unwrap();
        assert_eq!(h2.cached_len(), n);
        let fresh = Hecke::new(g.clone());
        for w in &ws {
            assert_eq!(h2.kl_basis(w), fresh.kl_basis(w));
        }

        // Flip a byte inside the first record's payload.
        let path = CacheFile::path_for(&g, dir.path());
        let mut bytes = fs::read(&path).unwrap();
        bytes[40 + 4 + 3] ^= 0xff;
        fs::write(&path, &bytes).unwrap();
        let (file, entries) = CacheFile::open(&g, dir.path()).unwrap();
        assert_eq!(file.skipped(), 1);
        assert_eq!(entries.len(), n - 1);
        let h3 = Hecke::with_cache_dir(g.clone(), dir.path()).unwrap();
        for w in &ws {
            assert_eq!(h3.kl_basis(w), fresh.kl_basis(w));
        }
    }

    #[test]
    fn foreign_header_is_replaced() {
        let dir = tempfile::tempdir().unwrap();
        let g = Weyl::from_type("A1").unwrap();
        let path = CacheFile::path_for(&g, dir.path());
        fs::write(&path, b"garbage").unwrap();
        let (_, entries) = CacheFile::open(&g, dir.path()).unwrap();
        assert!(entries.is_empty());
        assert_eq!(&fs::read(&path).unwrap()[..4], MAGIC);
    }
}
