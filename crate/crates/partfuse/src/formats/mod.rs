//! On-disk formats: PPT1 tensors, PNM images and label maps, ASCII PLY.

pub mod ply;
pub mod pnm;
pub mod tensor;

pub use ply::{read_ply, write_ply};
pub use pnm::{read_label_triple, read_pnm, with_suffix, write_label_triple, write_mask, write_pnm};
pub use tensor::{read_tensor, write_tensor, Tensor, TensorData};
