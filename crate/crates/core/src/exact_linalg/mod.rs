//! Exact dense linear algebra over Q and the prime fields F2, F3.

mod intmat;
mod matrix;
mod scalar;
mod tu;

pub use matrix::{anon_labels, ExactMatrix, QMatrix};
pub use scalar::{is_signed_unit_or_zero, rat, rat_int, Field, FieldTag, Gf, Gf2, Gf3, Rat, Ring};
pub use tu::{is_totally_unimodular, TuVerdict};

pub(crate) use intmat::{rank as int_rank, sub_det as int_sub_det};
