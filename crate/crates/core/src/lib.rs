//! Exact computations with based augmented directed chain complexes, Steiner tables,
//! Roberts–Street nerves and the comparison between suspension of nerves and nerves of suspensions.

pub mod complex;
pub mod filtration;
pub mod hom;
pub mod lp;
pub mod matrix;
pub mod msset;
pub mod mutation;
pub mod nerve;
pub mod nu;
pub mod oriental;
pub mod suite;
pub mod suspect;
pub mod theta;
