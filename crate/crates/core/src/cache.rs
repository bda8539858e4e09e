//! On-disk memo for Weingarten elements, enabled by `HEATWG_CACHE_DIR`.
//!
//! Layout (little endian): magic `HWGCACHE`, u32 version, u8 kind, u32 size,
//! z as two length-prefixed decimal strings, u32 degree, u32 term count, then
//! per term the 0-based images and the coefficient as two decimal strings.
//! Unreadable or stale files are ignored and rewritten.

use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_bigint::BigInt;

use crate::coeff::Q;
use crate::error::{Error, Result};
use crate::perm::{GroupAlgebraElement, Permutation};

pub const MAGIC: &[u8; 8] = b"HWGCACHE";
pub const VERSION: u32 = 1;
pub const ENV_VAR: &str = "HEATWG_CACHE_DIR";

/// Which element a cache entry holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    W = 0,
    Wg = 1,
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR).filter(|s| !s.is_empty()).map(PathBuf::from)
}

fn file_name(kind: Kind, size: usize, z: &Q) -> String {
    let z = format!("{}_{}", z.numer(), z.denom()).replace('-', "m");
    format!("{}-{size}-{z}.hwg", kind as u8)
}

fn put_str(buf: &mut Vec<u8>, s: &str) -> Result<()> {
    buf.write_u32::<LittleEndian>(s.len() as u32).map_err(io)?;
    buf.extend_from_slice(s.as_bytes());
    Ok(())
}

fn get_str(c: &mut Cursor<&[u8]>) -> Result<String> {
    let len = c.read_u32::<LittleEndian>().map_err(io)? as usize;
    if len > 1 << 20 {
        return Err(Error::Cache("string too long".into()));
    }
    let mut b = vec![0u8; len];
    c.read_exact(&mut b).map_err(io)?;
    String::from_utf8(b).map_err(|e| Error::Cache(e.to_string()))
}

fn put_q(buf: &mut Vec<u8>, q: &Q) -> Result<()> {
    put_str(buf, &q.numer().to_string())?;
    put_str(buf, &q.denom().to_string())
}

fn get_q(c: &mut Cursor<&[u8]>) -> Result<Q> {
    let parse = |s: String| s.parse::<BigInt>().map_err(|e| Error::Cache(e.to_string()));
    let n = parse(get_str(c)?)?;
    let d = parse(get_str(c)?)?;
    if d == BigInt::from(0) {
        return Err(Error::Cache("zero denominator".into()));
    }
    Ok(Q::new(n, d))
}

fn io(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

pub fn encode(kind: Kind, size: usize, z: &Q, e: &GroupAlgebraElement) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.write_u32::<LittleEndian>(VERSION).map_err(io)?;
    buf.write_u8(kind as u8).map_err(io)?;
    buf.write_u32::<LittleEndian>(size as u32).map_err(io)?;
    put_q(&mut buf, z)?;
    buf.write_u32::<LittleEndian>(e.degree() as u32).map_err(io)?;
    let terms: Vec<_> = e.terms().collect();
    buf.write_u32::<LittleEndian>(terms.len() as u32).map_err(io)?;
    for (p, c) in terms {
        for i in p.images() {
            buf.write_u8((i - 1) as u8).map_err(io)?;
        }
        put_q(&mut buf, c)?;
    }
    Ok(buf)
}

/// Decodes an entry, checking that its header matches the request.
pub fn decode(bytes: &[u8], kind: Kind, size: usize, z: &Q) -> Result<GroupAlgebraElement> {
    let mut c = Cursor::new(bytes);
    let mut magic = [0u8; 8];
    c.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let v = c.read_u32::<LittleEndian>().map_err(io)?;
    if v != VERSION {
        return Err(Error::Cache(format!("version {v}, expected {VERSION}")));
    }
    let k = c.read_u8().map_err(io)?;
    let s = c.read_u32::<LittleEndian>().map_err(io)? as usize;
    let zz = get_q(&mut c)?;
    if k != kind as u8 || s != size || &zz != z {
        return Err(Error::Cache("key mismatch".into()));
    }
    let degree = c.read_u32::<LittleEndian>().map_err(io)? as usize;
    let count = c.read_u32::<LittleEndian>().map_err(io)? as usize;
    let mut terms = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let mut img = vec![0u8; degree];
        c.read_exact(&mut img).map_err(io)?;
        let images: Vec<usize> = img.iter().map(|&x| x as usize + 1).collect();
        let p = Permutation::from_images(&images).map_err(|e| Error::Cache(e.to_string()))?;
        terms.push((p, get_q(&mut c)?));
    }
    if (c.position() as usize) != bytes.len() {
        return Err(Error::Cache("trailing bytes".into()));
    }
    GroupAlgebraElement::from_terms(degree, terms)
}

pub fn load(dir: &Path, kind: Kind, size: usize, z: &Q) -> Option<GroupAlgebraElement> {
    let bytes = fs::read(dir.join(file_name(kind, size, z))).ok()?;
    decode(&bytes, kind, size, z).ok()
}

/// Writes atomically through a temporary file.
pub fn store(dir: &Path, kind: Kind, size: usize, z: &Q, e: &GroupAlgebraElement) -> Result<()> {
    fs::create_dir_all(dir).map_err(io)?;
    let bytes = encode(kind, size, z, e)?;
    let path = dir.join(file_name(kind, size, z));
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(&bytes).map_err(io)?;
    drop(f);
    fs::rename(&tmp, &path).map_err(io)
}
