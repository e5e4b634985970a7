//! The `TNSR` binary tensor container.
//!
//! ```text
//! offset  size       field
//! 0       4          magic "TNSR"
//! 4       1          version (1)
//! 5       1          dtype (0 = f32, 1 = f64)
//! 6       1          ndim
//! 7       3          reserved, zero
//! 10      8 * ndim   dims, u64 little-endian
//! ...     payload    row-major little-endian values
//! ```

use std::fs;
use std::path::Path;

use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"TNSR";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F32,
    F64,
}

impl Dtype {
    pub fn code(self) -> u8 {
        match self {
            Dtype::F32 => 0,
            Dtype::F64 => 1,
        }
    }

    pub fn size(self) -> usize {
        match self {
            Dtype::F32 => 4,
            Dtype::F64 => 8,
        }
    }

    fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Dtype::F32),
            1 => Some(Dtype::F64),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum TnsrError {
    #[error("magic: expected \"TNSR\", found {0:?}")]
    Magic(Vec<u8>),
    #[error("version: expected {VERSION}, found {0}")]
    Version(u8),
    #[error("dtype: unknown code {0}")]
    Dtype(u8),
    #[error("reserved: bytes must be zero, found {0:?}")]
    Reserved([u8; 3]),
    #[error("header: file has {0} bytes, shorter than the fixed header")]
    Header(usize),
    #[error("dims: need {expected} bytes for {ndim} dims, found {actual}")]
    Dims {
        ndim: usize,
        expected: usize,
        actual: usize,
    },
    #[error("dims: zero or overflowing dimension in {0:?}")]
    Shape(Vec<u64>),
    #[error("payload: expected {expected} bytes, found {actual}")]
    Payload { expected: usize, actual: usize },
    #[error("ndim: {0} dims do not fit in one byte")]
    Ndim(usize),
    #[error("data: {len} values do not match shape {shape:?}")]
    DataLength { shape: Vec<usize>, len: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A decoded tensor. Values are always held as f64; `dtype` remembers the
/// on-disk width so outputs can be written back the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct TnsrFile {
    pub dtype: Dtype,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl TnsrFile {
    pub fn new(dtype: Dtype, shape: Vec<usize>, data: Vec<f64>) -> Result<Self, TnsrError> {
        if shape.len() > u8::MAX as usize {
            return Err(TnsrError::Ndim(shape.len()));
        }
        if shape.iter().product::<usize>() != data.len() {
            return Err(TnsrError::DataLength {
                shape,
                len: data.len(),
            });
        }
        Ok(Self { dtype, shape, data })
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, TnsrError> {
        if bytes.len() < HEADER_LEN {
            if bytes.len() >= 4 && &bytes[..4] != MAGIC {
                return Err(TnsrError::Magic(bytes[..4].to_vec()));
            }
            return Err(TnsrError::Header(bytes.len()));
        }
        if &bytes[..4] != MAGIC {
            return Err(TnsrError::Magic(bytes[..4].to_vec()));
        }
        if bytes[4] != VERSION {
            return Err(TnsrError::Version(bytes[4]));
        }
        let dtype = Dtype::from_code(bytes[5]).ok_or(TnsrError::Dtype(bytes[5]))?;
        let ndim = bytes[6] as usize;
        let reserved = [bytes[7], bytes[8], bytes[9]];
        if reserved != [0; 3] {
            return Err(TnsrError::Reserved(reserved));
        }

        let dims_end = HEADER_LEN + 8 * ndim;
        if bytes.len() < dims_end {
            return Err(TnsrError::Dims {
                ndim,
                expected: 8 * ndim,
                actual: bytes.len() - HEADER_LEN,
            });
        }
        let raw_dims: Vec<u64> = bytes[HEADER_LEN..dims_end]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let shape = checked_shape(&raw_dims).ok_or_else(|| TnsrError::Shape(raw_dims.clone()))?;
        let count: usize = shape.iter().product();

        let payload = &bytes[dims_end..];
        let expected = count
            .checked_mul(dtype.size())
            .ok_or_else(|| TnsrError::Shape(raw_dims.clone()))?;
        if payload.len() != expected {
            return Err(TnsrError::Payload {
                expected,
                actual: payload.len(),
            });
        }
        let data = match dtype {
            Dtype::F32 => payload
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
                .collect(),
            Dtype::F64 => payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect(),
        };
        Ok(Self { dtype, shape, data })
    }

    /// f32 outputs round each value to the nearest f32.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(
            HEADER_LEN + 8 * self.shape.len() + self.data.len() * self.dtype.size(),
        );
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&[VERSION, self.dtype.code(), self.shape.len() as u8, 0, 0, 0]);
        for &d in &self.shape {
            out.extend_from_slice(&(d as u64).to_le_bytes());
        }
        match self.dtype {
            Dtype::F32 => self
                .data
                .iter()
                .for_each(|&v| out.extend_from_slice(&(v as f32).to_le_bytes())),
            Dtype::F64 => self
                .data
                .iter()
                .for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, TnsrError> {
        let bytes = fs::read(path).map_err(|source| TnsrError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::decode(&bytes)
    }
}

fn checked_shape(raw: &[u64]) -> Option<Vec<usize>> {
    let mut total: usize = 1;
    let mut shape = Vec::with_capacity(raw.len());
    for &d in raw {
        let d = usize::try_from(d).ok().filter(|&d| d > 0)?;
        total = total.checked_mul(d)?;
        shape.push(d);
    }
    Some(shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_both_dtypes() {
        for dtype in [Dtype::F32, Dtype::F64] {
            let t =
                TnsrFile::new(dtype, vec![2, 3], vec![0.5, -1.25, 3.0, 0.0, 7.75, -2.5]).unwrap();
            assert_eq!(TnsrFile::decode(&t.encode()).unwrap(), t);
        }
    }

    #[test]
    fn scalar_has_no_dims() {
        let t = TnsrFile::new(Dtype::F64, vec![], vec![4.5]).unwrap();
        let bytes = t.encode();
        assert_eq!(bytes.len(), 10 + 8);
        assert_eq!(TnsrFile::decode(&bytes).unwrap(), t);
    }

    #[test]
    fn header_layout() {
        let t = TnsrFile::new(Dtype::F32, vec![3], vec![1.0, 2.0, 3.0]).unwrap();
        let b = t.encode();
        assert_eq!(&b[..10], b"TNSR\x01\x00\x01\x00\x00\x00");
        assert_eq!(&b[10..18], &3u64.to_le_bytes());
        assert_eq!(&b[18..22], &1.0f32.to_le_bytes());
    }

    #[test]
    fn rejects_corruption() {
        let good = TnsrFile::new(Dtype::F64, vec![2], vec![1.0, 2.0])
            .unwrap()
            .encode();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(TnsrFile::decode(&bad), Err(TnsrError::Magic(_))));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(TnsrFile::decode(&bad), Err(TnsrError::Version(2))));
        let mut bad = good.clone();
        bad[5] = 9;
        assert!(matches!(TnsrFile::decode(&bad), Err(TnsrError::Dtype(9))));
        let mut bad = good.clone();
        bad[8] = 1;
        assert!(matches!(
            TnsrFile::decode(&bad),
            Err(TnsrError::Reserved(_))
        ));
        assert!(matches!(
            TnsrFile::decode(&good[..good.len() - 1]),
            Err(TnsrError::Payload {
                expected: 16,
                actual: 15
            })
        ));
        assert!(matches!(
            TnsrFile::decode(&good[..12]),
            Err(TnsrError::Dims { .. })
        ));
        assert!(matches!(
            TnsrFile::decode(&good[..5]),
            Err(TnsrError::Header(5))
        ));
        let mut zero_dim = good.clone();
        zero_dim[10..18].copy_from_slice(&0u64.to_le_bytes());
        assert!(matches!(
            TnsrFile::decode(&zero_dim),
            Err(TnsrError::Shape(_))
        ));
    }
}
