//! Binary field dumps.
//!
//! Layout (little-endian): magic "EP2D", version u32, N u32, L f64, a f64,
//! b f64, representation u8 (0 = physical, 1 = frequency), then N^2 complex
//! values as (f64 re, f64 im), row-major.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::field::{Representation, SpectralField};
use crate::grid::Grid;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"EP2D";
const VERSION: u32 = 1;

pub fn write_field(path: &Path, field: &SpectralField) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(g.n() as u32).to_le_bytes())?;
    w.write_all(&g.domain_length().to_le_bytes())?;
    w.write_all(&g.a().to_le_bytes())?;
    w.write_all(&g.b().to_le_bytes())?;
    let repr: u8 = match field.representation() {
        Representation::Physical => 0,
        Representation::Frequency => 1,
    };
    w.write_all(&[repr])?;
    for v in field.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?} in {}",
            magic,
            path.display()
        )));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported dump version {version}")));
    }
    let n = read_u32(&mut r)? as usize;
    let l = read_f64(&mut r)?;
    let a = read_f64(&mut r)?;
    let b = read_f64(&mut r)?;
    let mut repr = [0u8; 1];
    r.read_exact(&mut repr)?;
    let repr = match repr[0] {
        0 => Representation::Physical,
        1 => Representation::Frequency,
        other => return Err(Error::Format(format!("bad representation tag {other}"))),
    };
    let grid = Grid::new(n, l, a, b)?;
    let mut values = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        values.push(Complex64::new(re, im));
    }
    SpectralField::from_values(&grid, values, repr)
}

/// Read a dump onto an existing grid, checking compatibility.
pub fn read_field_on(path: &Path, grid: &Arc<Grid>) -> Result<SpectralField> {
    let f = read_field(path)?;
    if f.grid().as_ref() != grid.as_ref() {
        return Err(Error::InvalidInput(format!(
            "dump grid {:?} does not match run grid {:?}",
            f.grid(),
            grid
        )));
    }
    SpectralField::from_values(grid, f.values().to_vec(), f.representation())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dump_round_trip() {
        let g = Grid::new(16, 8.0, 1.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let values: Vec<Complex64> = (0..g.len())
            .map(|_| Complex64::new(rng.gen(), rng.gen()))
            .collect();
        let f = SpectralField::from_values(&g, values, Representation::Frequency).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.ep2d");
        write_field(&path, &f).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.representation(), Representation::Frequency);
        assert_eq!(back.grid().n(), 16);
        assert_eq!(back.grid().b(), 2.0);
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.ep2d");
        std::fs::write(&path, b"NOPE1234").unwrap();
        assert!(read_field(&path).is_err());
    }
}
