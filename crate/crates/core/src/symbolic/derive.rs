//! Curve derivation: the cross-difference of the fractional map's numerator
//! and denominator, cleared of denominators and divided by `x + y`.

use std::collections::BTreeMap;

use super::monomial::{Monomial, Var};
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Coefficient table keyed by the exponents of two variables.
pub type CoeffTable = BTreeMap<(u32, u32), MultiPoly>;

pub(crate) fn p(s: &str) -> MultiPoly {
    MultiPoly::parse(s).expect("built-in polynomial literal parses")
}

/// The index pairs `(j, l)` of `x^j y^l` appearing in the curve.
pub const GAMMA_INDICES: [(u32, u32); 9] = [
    (2, 2),
    (2, 1),
    (1, 2),
    (2, 0),
    (1, 1),
    (0, 2),
    (1, 0),
    (0, 1),
    (0, 0),
];

/// The nine closed-form coefficients of `L(x, y)` in `A, B, C, D, k`.
pub fn gamma_reference() -> CoeffTable {
    let g22 = "A^2 + A*B + B^2*k + C^2 + C*D + D^2*k + D + 1";
    let g21 = "A^2 + A*B + B^2*k + B + C^2 + C*D + D^2*k + 1";
    let g20 = "A^2*k + A^2 + A*B*k + A*B + A + B^2*k^2 + B^2*k + C^2*k \
               + C^2 + C*D*k + C*D + C + D^2*k^2 + D^2*k + D*k + D + k";
    let g11 = "A^2 + A*B + B^2*k + C^2 + C*D + D^2*k + 1";
    let g10 = "A^2*k + A*B*k + A + B^2*k^2 + B*k + C^2*k + C*D*k + D^2*k^2 + k";
    let g00 = "A^2*k^2 + A*B*k^2 + B^2*k^3 + C^2*k^2 + C*D*k^2 + C + D^2*k^3 + D*k^2 + D*k + D + k^2";
    [
        ((2, 2), g22),
        ((2, 1), g21),
        ((1, 2), g21),
        ((2, 0), g20),
        ((1, 1), g11),
        ((0, 2), g20),
        ((1, 0), g10),
        ((0, 1), g10),
        ((0, 0), g00),
    ]
    .into_iter()
    .map(|(key, s)| (key, p(s)))
    .collect()
}

/// `L(x, y)` assembled from [`gamma_reference`].
pub fn curve_reference() -> MultiPoly {
    assemble(&gamma_reference(), Var::X, Var::Y)
}

/// Splits `pol` by the exponent pair of `(v1, v2)`; zero coefficients are omitted.
pub fn coefficients2(pol: &MultiPoly, v1: Var, v2: Var) -> CoeffTable {
    let mut buckets: BTreeMap<(u32, u32), Vec<Monomial>> = BTreeMap::new();
    for &t in pol.terms() {
        let (rest, e1) = t.split_var(v1);
        let (rest, e2) = rest.split_var(v2);
        buckets.entry((e1, e2)).or_default().push(rest);
    }
    buckets
        .into_iter()
        .map(|(key, terms)| (key, MultiPoly::from_terms(terms)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Inverse of [`coefficients2`].
pub fn assemble(table: &CoeffTable, v1: Var, v2: Var) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for (&(e1, e2), c) in table {
        let mono = Monomial::var_pow(v1, e1)
            .and_then(|m1| Ok(m1.mul(Monomial::var_pow(v2, e2)?)))
            .expect("small exponents");
        acc = &acc + &c.mul_monomial(mono);
    }
    acc
}

/// `i^2 -> i + k` to a fixpoint.
pub fn reduce_i(pol: &MultiPoly) -> MultiPoly {
    let i2 = Monomial::var_pow(Var::I, 2).expect("fits");
    pol.substitute(i2, &p("i + k"))
        .expect("i^2 -> i + k terminates")
}

/// Exact quotient of `pol` by `(var + root)` via synthetic division in `var`.
pub fn divide_by_linear(pol: &MultiPoly, var: Var, root: &MultiPoly) -> Result<MultiPoly> {
    let coeffs = pol.coeffs_in(var);
    if coeffs.len() < 2 {
        return if pol.is_zero() {
            Ok(MultiPoly::zero())
        } else {
            Err(Error::InexactDivision)
        };
    }
    let n = coeffs.len() - 1;
    let mut quot = vec![MultiPoly::zero(); n];
    quot[n - 1] = coeffs[n].clone();
    for j in (1..n).rev() {
        quot[j - 1] = &coeffs[j] + &(root * &quot[j]);
    }
    let rem = &coeffs[0] + &(root * &quot[0]);
    if !rem.is_zero() {
        return Err(Error::InexactDivision);
    }
    Ok(MultiPoly::from_coeffs(var, &quot))
}

/// `(x+i+1)^3 (y+i+1)^3 h(x, y)` before division by `x + y`, with `i^2`
/// reduced. Here `h` is the cross-difference
/// `N(X) M(Y) + N(Y) M(X)` of numerator `N(t) = a^q t^3 + t^2 + b^q` and
/// denominator `M(t) = b t^3 + t + a`, `X = (x+i)/(x+i+1)`.
pub fn cleared_cross_difference() -> MultiPoly {
    let alpha = p("A + i*B");
    let alpha_q = p("A + (i + 1)*B");
    let beta = p("C + i*D");
    let beta_q = p("C + (i + 1)*D");
    let side = |t: Var| {
        let tv = MultiPoly::var(t);
        let num = &tv + &p("i");
        let den = &num + &MultiPoly::one();
        let num2 = num.square();
        let num3 = &num2 * &num;
        let den2 = den.square();
        let den3 = &den2 * &den;
        // Numerator and denominator of g, each multiplied by (t+i+1)^3.
        let top = &(&(&alpha_q * &num3) + &(&num2 * &den)) + &(&beta_q * &den3);
        let bottom = &(&(&beta * &num3) + &(&num * &den2)) + &(&alpha * &den3);
        (top, bottom)
    };
    let (nx, mx) = side(Var::X);
    let (ny, my) = side(Var::Y);
    reduce_i(&(&(&nx * &my) + &(&ny * &mx)))
}

/// The curve polynomial and its `(x, y)` coefficient table.
pub fn derive_curve_poly() -> Result<MultiPoly> {
    let cleared = cleared_cross_difference();
    divide_by_linear(&cleared, Var::X, &MultiPoly::var(Var::Y))
}

pub fn derive_curve() -> Result<CoeffTable> {
    Ok(coefficients2(&derive_curve_poly()?, Var::X, Var::Y))
}
