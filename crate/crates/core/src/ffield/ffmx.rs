//! FFMX binary matrix format.
//!
//! Header: `b"FFMX"`, u16 version (1), u16 e, u64 rows, u64 cols, all
//! little-endian. Payload is row-major: for e = 1 each row is padded to
//! whole little-endian 64-bit words (bit i of word w is column 64w+i); for
//! 2 <= e <= 8 one byte per entry; otherwise two little-endian bytes.

use std::io::{Read, Write};

use super::field::{Fe, Field};
use super::matrix::FieldMatrix;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"FFMX";
pub const VERSION: u16 = 1;

pub fn write_ffmx<W: Write>(m: &FieldMatrix, mut w: W) -> Result<()> {
    let e = m.field().degree();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(e as u16).to_le_bytes())?;
    w.write_all(&(m.rows() as u64).to_le_bytes())?;
    w.write_all(&(m.cols() as u64).to_le_bytes())?;
    let mut buf = Vec::new();
    if let Some(words) = m.words() {
        for x in words {
            buf.extend_from_slice(&x.to_le_bytes());
        }
    } else {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if e <= 8 {
                    buf.push(v as u8);
                } else {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_ffmx<R: Read>(mut r: R) -> Result<FieldMatrix> {
    let mut head = [0u8; 24];
    r.read_exact(&mut head)?;
    if &head[0..4] != MAGIC {
        return Err(Error::Format("bad FFMX magic".into()));
    }
    let version = u16::from_le_bytes([head[4], head[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported FFMX version {version}")));
    }
    let e = u16::from_le_bytes([head[6], head[7]]) as u32;
    let rows = u64::from_le_bytes(head[8..16].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(head[16..24].try_into().unwrap()) as usize;
    let field = Field::gf(e)?;
    let mut m = FieldMatrix::zeros(&field, rows, cols);
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    let expected = if e == 1 {
        rows * cols.div_ceil(64) * 8
    } else if e <= 8 {
        rows * cols
    } else {
        rows * cols * 2
    };
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "FFMX payload is {} bytes, expected {expected}",
            payload.len()
        )));
    }
    if let Some(words) = m.words_mut() {
        for (w, chunk) in words.iter_mut().zip(payload.chunks_exact(8)) {
            *w = u64::from_le_bytes(chunk.try_into().unwrap());
        }
        let tail = cols % 64;
        let stride = cols.div_ceil(64);
        if tail != 0 {
            for row in 0..rows {
                if words[row * stride + stride - 1] >> tail != 0 {
                    return Err(Error::Format("nonzero FFMX padding bits".into()));
                }
            }
        }
    } else {
        let order = field.order();
        for row in 0..rows {
            for c in 0..cols {
                let i = row * cols + c;
                let v: Fe = if e <= 8 {
                    payload[i] as Fe
                } else {
                    u16::from_le_bytes([payload[2 * i], payload[2 * i + 1]])
                };
                if v as usize >= order {
                    return Err(Error::Format(format!("entry {v} outside GF(2^{e})")));
                }
                m.set(row, c, v);
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let f = Field::gf(1).unwrap();
        let mut m = FieldMatrix::zeros(&f, 2, 65);
        m.set(1, 64, 1);
        let mut buf = Vec::new();
        write_ffmx(&m, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"FFMX");
        assert_eq!(buf.len(), 24 + 2 * 2 * 8);
        // row 1, word 1, bit 0
        assert_eq!(buf[24 + 24], 1);
        assert_eq!(read_ffmx(&buf[..]).unwrap(), m);
    }

    #[test]
    fn rejects_truncated_payload() {
        let f = Field::gf(4).unwrap();
        let m = FieldMatrix::identity(&f, 3);
        let mut buf = Vec::new();
        write_ffmx(&m, &mut buf).unwrap();
        buf.pop();
        assert!(read_ffmx(&buf[..]).is_err());
    }
}
