//! On-disk prime table: the magic `MAPL1`, the sieve limit as a little-endian
//! `u64`, then the gaps between consecutive primes (starting from 0) as
//! LEB128 varints.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use mapl_core::primes::PrimeTable;

use crate::sieve::build_prime_table;
use crate::{Error, Result};

pub const MAGIC: &[u8; 5] = b"MAPL1";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn encode(table: &PrimeTable, out: &mut impl Write) -> std::io::Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&table.limit().to_le_bytes())?;
    let mut prev = 0u64;
    let mut buf = [0u8; 10];
    for &p in table.primes() {
        let mut gap = p - prev;
        prev = p;
        let mut n = 0;
        loop {
            let byte = (gap & 0x7f) as u8;
            gap >>= 7;
            if gap == 0 {
                buf[n] = byte;
                n += 1;
                break;
            }
            buf[n] = byte | 0x80;
            n += 1;
        }
        out.write_all(&buf[..n])?;
    }
    Ok(())
}

pub fn decode(bytes: &[u8]) -> std::result::Result<PrimeTable, &'static str> {
    let rest = bytes.strip_prefix(MAGIC.as_slice()).ok_or("bad magic")?;
    if rest.len() < 8 {
        return Err("truncated header");
    }
    let (head, body) = rest.split_at(8);
    let limit = u64::from_le_bytes(head.try_into().expect("eight bytes"));
    let mut primes = Vec::with_capacity(body.len());
    let mut prev = 0u64;
    let mut gap = 0u64;
    let mut shift = 0u32;
    for &b in body {
        if shift > 56 {
            return Err("varint overflow");
        }
        gap |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            prev = prev.checked_add(gap).ok_or("prime overflow")?;
            primes.push(prev);
            gap = 0;
            shift = 0;
        } else {
            shift += 7;
        }
    }
    if shift != 0 {
        return Err("truncated varint");
    }
    primes.shrink_to_fit();
    PrimeTable::from_primes(limit, primes).map_err(|_| "inconsistent prime list")
}

pub fn write_cache(path: &Path, table: &PrimeTable) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    encode(table, &mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_cache(path: &Path) -> Result<PrimeTable> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path).map_err(io_err(path))?)
        .read_to_end(&mut bytes)
        .map_err(io_err(path))?;
    decode(&bytes).map_err(|reason| Error::BadCache {
        path: path.to_path_buf(),
        reason,
    })
}

/// Table up to `limit`, served from `cache` when the file covers it. A missing,
/// short or unreadable cache is rebuilt by sieving and rewritten.
pub fn load_or_build(limit: u64, cache: Option<&Path>) -> Result<PrimeTable> {
    let Some(path) = cache else {
        return build_prime_table(limit);
    };
    if path.exists() {
        match read_cache(path) {
            Ok(t) if t.limit() == limit => return Ok(t),
            Ok(t) if t.limit() > limit => return Ok(t.truncated(limit)?),
            Ok(_) => {}
            Err(e) => eprintln!("warning: {e}; sieving instead"),
        }
    }
    let table = build_prime_table(limit)?;
    write_cache(path, &table)?;
    Ok(table)
}
