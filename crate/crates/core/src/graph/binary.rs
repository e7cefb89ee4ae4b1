//! On-disk CSR container.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic   "CBCS"       4 bytes
//! version u32 = 1
//! reserved u32 = 0
//! nv      u64
//! ne      u64
//! offsets (nv+1) x u64
//! adjacency ne x u32
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Csr;

pub const MAGIC: [u8; 4] = *b"CBCS";
pub const VERSION: u32 = 1;

pub fn write_csr_binary(g: &Csr, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    w.write_all(&(g.nv as u64).to_le_bytes())?;
    w.write_all(&g.ne.to_le_bytes())?;
    for &o in &g.offsets {
        w.write_all(&o.to_le_bytes())?;
    }
    for &a in &g.adjacency {
        w.write_all(&a.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated file".into()))?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated file".into()))?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_csr_binary(path: impl AsRef<Path>) -> Result<Csr> {
    let mut r = BufReader::new(File::open(path.as_ref())?);

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format("truncated file".into()))?;
    if magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {magic:02x?}, expected {MAGIC:02x?}"
        )));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    let reserved = read_u32(&mut r)?;
    if reserved != 0 {
        return Err(Error::Format(format!("reserved field is {reserved}, expected 0")));
    }
    let nv = read_u64(&mut r)?;
    if nv == 0 || nv > u32::MAX as u64 {
        return Err(Error::Format(format!("vertex count {nv} out of range")));
    }
    let ne = read_u64(&mut r)?;
    if ne > usize::MAX as u64 {
        return Err(Error::Format(format!("edge count {ne} out of range")));
    }

    let mut offsets = Vec::new();
    offsets
        .try_reserve_exact(nv as usize + 1)
        .map_err(|_| Error::Alloc((nv + 1) * 8))?;
    for _ in 0..=nv {
        offsets.push(read_u64(&mut r)?);
    }

    let mut adjacency = Vec::new();
    adjacency
        .try_reserve_exact(ne as usize)
        .map_err(|_| Error::Alloc(ne * 4))?;
    for _ in 0..ne {
        adjacency.push(read_u32(&mut r)?);
    }

    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after adjacency".into()));
    }

    let csr = Csr {
        nv: nv as u32,
        ne,
        offsets,
        adjacency,
    };
    csr.validate()?;
    Ok(csr)
}
