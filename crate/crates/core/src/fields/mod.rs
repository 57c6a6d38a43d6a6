//! Binary fields GF(2^m) and the quadratic tower GF(q^2) = GF(q)[i], i^2 = i + k.

mod base;
mod ext;

pub use base::{
    is_irreducible, parse_hex, poly_degree, poly_rem, FieldCtx, FqElem, MAX_DEGREE,
    MAX_TABLE_DEGREE, MIN_DEGREE,
};
pub use ext::{ExtCtx, Fq2Elem, ProjPoint, MAX_EXT_TABLE_DEGREE};

