//! Binary side-file cache for eigenbases, keyed by
//! (section kind, dimensions, resolution, mode count).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::eigen::EigenBasis;
use crate::num::Scalar;

const MAGIC: &[u8; 8] = b"DFBASIS1";

pub fn save_eigenbasis<F: Scalar>(path: &Path, basis: &EigenBasis<F>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    let key = basis.section_key.as_bytes();
    w.write_all(&(key.len() as u64).to_le_bytes())?;
    w.write_all(key)?;
    let n_modes = basis.len() as u64;
    let n_nodes = basis.modes[0].len() as u64;
    w.write_all(&n_modes.to_le_bytes())?;
    w.write_all(&n_nodes.to_le_bytes())?;
    let write_vec = |v: &[F], w: &mut BufWriter<File>| -> Result<()> {
        for x in v {
            w.write_all(&x.as_f64().to_le_bytes())?;
        }
        Ok(())
    };
    write_vec(&basis.eigenvalues, &mut w)?;
    write_vec(&basis.neumann_residual, &mut w)?;
    for group in [&basis.modes, &basis.grad2, &basis.grad3] {
        for m in group.iter() {
            write_vec(m, &mut w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Load a cached basis; the stored key must match `expected_key` and the
/// stored mode count must be exactly `n_modes`.
pub fn load_eigenbasis<F: Scalar>(
    path: &Path,
    expected_key: &str,
    n_modes: usize,
) -> Result<EigenBasis<F>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Config(format!(
            "{} is not an eigenbasis cache file",
            path.display()
        )));
    }
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf)?;
    let key_len = u64::from_le_bytes(u64buf) as usize;
    let mut key = vec![0u8; key_len];
    r.read_exact(&mut key)?;
    let key = String::from_utf8(key)
        .map_err(|_| Error::Config("eigenbasis cache key is not UTF-8".into()))?;
    if key != expected_key {
        return Err(Error::Config(format!(
            "eigenbasis cache key mismatch: cached for {key}, requested {expected_key}"
        )));
    }
    r.read_exact(&mut u64buf)?;
    let stored_modes = u64::from_le_bytes(u64buf) as usize;
    r.read_exact(&mut u64buf)?;
    let n_nodes = u64::from_le_bytes(u64buf) as usize;
    if stored_modes != n_modes {
        return Err(Error::Config(format!(
            "eigenbasis cache holds {stored_modes} modes, run needs {n_modes}"
        )));
    }
    let read_vec = |len: usize, r: &mut BufReader<File>| -> Result<Vec<F>> {
        let mut out = Vec::with_capacity(len);
        let mut buf = [0u8; 8];
        for _ in 0..len {
            r.read_exact(&mut buf)?;
            out.push(F::cst(f64::from_le_bytes(buf)));
        }
        Ok(out)
    };
    let eigenvalues = read_vec(stored_modes, &mut r)?;
    let neumann_residual = read_vec(stored_modes, &mut r)?;
    let mut groups = Vec::new();
    for _ in 0..3 {
        let mut g = Vec::with_capacity(stored_modes);
        for _ in 0..stored_modes {
            g.push(read_vec(n_nodes, &mut r)?);
        }
        groups.push(g);
    }
    let grad3 = groups.pop().unwrap();
    let grad2 = groups.pop().unwrap();
    let modes = groups.pop().unwrap();
    Ok(EigenBasis {
        section_key: key,
        eigenvalues,
        modes,
        grad2,
        grad3,
        neumann_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cross_section, build_eigenbasis, SectionSpec};

    #[test]
    fn cache_roundtrip() {
        let s = build_cross_section(&SectionSpec::Rectangle {
            width: 1.0,
            height: 1.0,
            n2: 9,
            n3: 9,
        })
        .unwrap();
        let b = build_eigenbasis::<f64>(&s, 6).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("basis.bin");
        save_eigenbasis(&path, &b).unwrap();
        let loaded = load_eigenbasis::<f64>(&path, &s.key(), 6).unwrap();
        assert_eq!(loaded.eigenvalues, b.eigenvalues);
        assert_eq!(loaded.modes, b.modes);
        assert_eq!(loaded.grad2, b.grad2);
        // key mismatch rejected
        assert!(load_eigenbasis::<f64>(&path, "other", 6).is_err());
        assert!(load_eigenbasis::<f64>(&path, &s.key(), 7).is_err());
    }
}
