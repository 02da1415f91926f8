//! Exact symbolic computation for corank-1 polynomial map germs
//! f: (C^n, 0) -> (C^p, 0), n < p, given in prenormal form
//! f(x, z) = (x, h_1(x, z), ..., h_{p-n+1}(x, z)).
//!
//! The library enumerates stable multiple-point types by partition, computes
//! the defining ideals of the associated multiple-point schemes via divided
//! differences, and counts scheme points two independent ways: an exact
//! jet-truncation colength engine over arbitrary-precision rationals, and a
//! closed form for weighted-homogeneous germs. On top of that it evaluates
//! an A-finiteness invariant from the restricted presentation matrix and its
//! Jacobian minors.
//!
//! All arithmetic is exact (`BigRational` coefficients, `BigInt` elimination)
//! and all iteration orders are deterministic, so every run of every
//! operation produces byte-identical output.

pub mod afinite;
pub mod colength;
pub mod counting;
pub mod divdiff;
pub mod germ;
pub mod par;
pub mod parse;
pub mod partition;
pub mod poly;
pub mod report;
pub mod schemes;
