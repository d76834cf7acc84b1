//! Exact computations with rigid local systems on the punctured projective
//! line, encoded as monodromy tuples of matrices over cyclotomic fields.

pub mod error;
pub mod field;

pub use error::{Error, Result};
pub use field::{CycNumber, ExactMatrix, Rational, RootOfUnity};
pub mod monodromy;

pub use monodromy::{JordanType, MonodromyTuple, Puncture, RegularityCertificate};
pub mod convolution;

pub use convolution::{
    build_f, katz_reduce, middle_convolution, tensor_rank_one, RankOneData, ReductionTrace,
};
pub mod hypergeometric;
pub use hypergeometric::{from_multiplicity_function, hypergeometric_tuple, MultiplicityFunction};
pub mod purity;
pub use purity::{
    functional_equation_check, hodge_conjugate_dual, hodge_is_regular, magnitude_check, weil_check,
    HodgeMultiset, WeilPolynomial, WeilVerdict,
};
pub mod json;
pub use json::Json;
