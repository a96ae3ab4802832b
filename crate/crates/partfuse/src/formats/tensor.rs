//! PPT1 tensor container.
//!
//! ```text
//! 0..4   "PPT1"
//! 4      dtype: 1 = f32 LE, 2 = u16 LE, 3 = u8
//! 5      rank, 0..=8
//! 6..8   zero
//! 8..    rank x u32 LE dims, then the row-major payload
//! ```

use std::path::Path;

use crate::error::{read_file, write_file, Error, Result};

const MAGIC: &[u8; 4] = b"PPT1";
const MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum TensorData {
    F32(Vec<f32>),
    U16(Vec<u16>),
    U8(Vec<u8>),
}

impl TensorData {
    fn dtype(&self) -> u8 {
        match self {
            TensorData::F32(_) => 1,
            TensorData::U16(_) => 2,
            TensorData::U8(_) => 3,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TensorData::F32(v) => v.len(),
            TensorData::U16(v) => v.len(),
            TensorData::U8(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<u32>,
    data: TensorData,
}

/// Decoding failures, independent of where the bytes came from.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("bad magic {0:?}, expected \"PPT1\"")]
    BadMagic([u8; 4]),
    #[error("unknown dtype code {0}")]
    BadDtype(u8),
    #[error("rank {0} exceeds 8")]
    BadRank(u8),
    #[error("reserved header bytes must be zero")]
    Reserved,
    #[error("truncated: need {needed} bytes, have {have}")]
    Truncated { needed: usize, have: usize },
    #[error("{0} trailing bytes after payload")]
    Trailing(usize),
    #[error("dimension product overflows")]
    Overflow,
    #[error("shape {shape:?} needs {expected} elements, data has {found}")]
    ShapeMismatch {
        shape: Vec<u32>,
        expected: usize,
        found: usize,
    },
}

fn element_count(shape: &[u32]) -> Option<usize> {
    shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
}

impl Tensor {
    pub fn new(shape: Vec<u32>, data: TensorData) -> Result<Self, TensorError> {
        if shape.len() > MAX_RANK {
            return Err(TensorError::BadRank(shape.len() as u8));
        }
        let expected = element_count(&shape).ok_or(TensorError::Overflow)?;
        if expected != data.len() {
            return Err(TensorError::ShapeMismatch {
                shape,
                expected,
                found: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    pub fn shape(&self) -> &[u32] {
        &self.shape
    }

    pub fn data(&self) -> &TensorData {
        &self.data
    }

    pub fn into_data(self) -> TensorData {
        self.data
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 4 * self.shape.len() + 4 * self.data.len());
        out.extend_from_slice(MAGIC);
        out.push(self.data.dtype());
        out.push(self.shape.len() as u8);
        out.extend_from_slice(&[0, 0]);
        for d in &self.shape {
            out.extend_from_slice(&d.to_le_bytes());
        }
        match &self.data {
            TensorData::F32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            TensorData::U16(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            TensorData::U8(v) => out.extend_from_slice(v),
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, TensorError> {
        let need = |needed: usize| {
            if bytes.len() < needed {
                Err(TensorError::Truncated {
                    needed,
                    have: bytes.len(),
                })
            } else {
                Ok(())
            }
        };
        need(4)?;
        let magic: [u8; 4] = bytes[..4].try_into().expect("4 bytes");
        if &magic != MAGIC {
            return Err(TensorError::BadMagic(magic));
        }
        need(8)?;
        let dtype = bytes[4];
        let width = match dtype {
            1 => 4,
            2 => 2,
            3 => 1,
            other => return Err(TensorError::BadDtype(other)),
        };
        let rank = bytes[5];
        if rank as usize > MAX_RANK {
            return Err(TensorError::BadRank(rank));
        }
        if bytes[6] != 0 || bytes[7] != 0 {
            return Err(TensorError::Reserved);
        }
        let header = 8 + 4 * rank as usize;
        need(header)?;
        let shape: Vec<u32> = bytes[8..header]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect();
        let count = element_count(&shape).ok_or(TensorError::Overflow)?;
        let payload = count.checked_mul(width).ok_or(TensorError::Overflow)?;
        let total = header.checked_add(payload).ok_or(TensorError::Overflow)?;
        need(total)?;
        if bytes.len() > total {
            return Err(TensorError::Trailing(bytes.len() - total));
        }
        let body = &bytes[header..total];
        let data = match dtype {
            1 => TensorData::F32(
                body.chunks_exact(4)
                    .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
                    .collect(),
            ),
            2 => TensorData::U16(
                body.chunks_exact(2)
                    .map(|c| u16::from_le_bytes(c.try_into().expect("2 bytes")))
                    .collect(),
            ),
            _ => TensorData::U8(body.to_vec()),
        };
        Ok(Self { shape, data })
    }
}

pub fn read_tensor(path: &Path) -> Result<Tensor> {
    let bytes = read_file(path)?;
    Tensor::decode(&bytes).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_tensor(tensor: &Tensor, path: &Path) -> Result<()> {
    write_file(path, &tensor.encode())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_real_round_trip() {
        let t = Tensor::new(
            vec![2, 3],
            TensorData::F32(vec![0.5, -1.0, 2.25, 1e-30, f32::MAX, -0.0]),
        )
        .unwrap();
        let bytes = t.encode();
        assert_eq!(&bytes[..8], b"PPT1\x01\x02\x00\x00");
        assert_eq!(bytes.len(), 8 + 8 + 24);
        let back = Tensor::decode(&bytes).unwrap();
        assert_eq!(back.encode(), bytes);
        assert_eq!(back, t);
    }

    #[test]
    fn scalar_round_trip() {
        let t = Tensor::new(vec![], TensorData::U16(vec![4242])).unwrap();
        let bytes = t.encode();
        assert_eq!(bytes.len(), 10);
        assert_eq!(Tensor::decode(&bytes).unwrap(), t);
    }

    #[test]
    fn rejects_malformed() {
        let good = Tensor::new(vec![2], TensorData::U8(vec![1, 2])).unwrap().encode();
        let mut bad = good.clone();
        bad[..4].copy_from_slice(b"XXXX");
        assert_eq!(Tensor::decode(&bad), Err(TensorError::BadMagic(*b"XXXX")));
        let mut bad = good.clone();
        bad[4] = 7;
        assert_eq!(Tensor::decode(&bad), Err(TensorError::BadDtype(7)));
        let mut bad = good.clone();
        bad[5] = 9;
        assert_eq!(Tensor::decode(&bad), Err(TensorError::BadRank(9)));
        let mut bad = good.clone();
        bad[6] = 1;
        assert_eq!(Tensor::decode(&bad), Err(TensorError::Reserved));
        assert!(matches!(
            Tensor::decode(&good[..good.len() - 1]),
            Err(TensorError::Truncated { .. })
        ));
        let mut long = good.clone();
        long.push(0);
        assert_eq!(Tensor::decode(&long), Err(TensorError::Trailing(1)));
        let mut huge = b"PPT1\x01\x08\x00\x00".to_vec();
        for _ in 0..8 {
            huge.extend_from_slice(&u32::MAX.to_le_bytes());
        }
        assert_eq!(Tensor::decode(&huge), Err(TensorError::Overflow));
    }

    fn tensors() -> impl Strategy<Value = Tensor> {
        prop::collection::vec(0u32..4, 0..4).prop_flat_map(|shape| {
            let n: usize = shape.iter().map(|&d| d as usize).product();
            let s1 = shape.clone();
            let s2 = shape.clone();
            prop_oneof![
                prop::collection::vec(any::<u32>(), n).prop_map(move |v| Tensor::new(
                    s1.clone(),
                    TensorData::F32(v.into_iter().map(f32::from_bits).collect())
                )
                .unwrap()),
                prop::collection::vec(any::<u16>(), n).prop_map(move |v| Tensor::new(
                    s2.clone(),
                    TensorData::U16(v)
                )
                .unwrap()),
                prop::collection::vec(any::<u8>(), n).prop_map(move |v| Tensor::new(
                    shape.clone(),
                    TensorData::U8(v)
                )
                .unwrap()),
            ]
        })
    }

    proptest! {
        // bit-level comparison: NaN payloads must survive too
        #[test]
        fn encode_decode_is_bit_exact(t in tensors()) {
            let bytes = t.encode();
            let back = Tensor::decode(&bytes).unwrap();
            prop_assert_eq!(back.encode(), bytes);
            prop_assert_eq!(back.shape(), t.shape());
        }
    }
}
