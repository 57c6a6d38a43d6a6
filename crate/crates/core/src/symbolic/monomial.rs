use std::fmt;

use crate::error::{Error, Result};

/// Number of indeterminates in the ring.
pub const NVARS: usize = 13;

const FIELD_BITS: u32 = 9;
const FIELD_MASK: u128 = (1 << FIELD_BITS) - 1;
/// Largest exponent a single variable may carry.
pub const MAX_EXPONENT: u32 = (1 << FIELD_BITS) - 1;
const DEGREE_SHIFT: u32 = FIELD_BITS * NVARS as u32;
/// Bit positions where a carry (or borrow) leaves one exponent field.
const CARRY_MASK: u128 = {
    let mut m = 0u128;
    let mut j = 1;
    while j <= NVARS as u32 {
        m |= 1u128 << (FIELD_BITS * j);
        j += 1;
    }
    m
};

/// One of the thirteen indeterminates `x, y, A, B, C, D, i, k, a, b, c, d, e`,
/// in that (descending) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u8);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);
    pub const A: Var = Var(2);
    pub const B: Var = Var(3);
    pub const C: Var = Var(4);
    pub const D: Var = Var(5);
    pub const I: Var = Var(6);
    pub const K: Var = Var(7);
    pub const SA: Var = Var(8);
    pub const SB: Var = Var(9);
    pub const SC: Var = Var(10);
    pub const SD: Var = Var(11);
    /// Reserved; no computation uses it.
    pub const SE: Var = Var(12);

    pub const NAMES: [&'static str; NVARS] =
        ["x", "y", "A", "B", "C", "D", "i", "k", "a", "b", "c", "d", "e"];

    pub fn all() -> impl Iterator<Item = Var> {
        (0..NVARS as u8).map(Var)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Result<Var> {
        Self::NAMES
            .iter()
            .position(|&n| n == name)
            .map(|p| Var(p as u8))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    #[inline]
    fn shift(self) -> u32 {
        FIELD_BITS * (NVARS as u32 - 1 - self.0 as u32)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector packed into one `u128`: total degree in the top bits,
/// then the exponents of `x, y, A, ..., e` in nine-bit fields. Integer
/// comparison of the packed words is graded lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: Var) -> Monomial {
        Monomial::var_pow(v, 1).expect("exponent 1 fits")
    }

    pub fn var_pow(v: Var, e: u32) -> Result<Monomial> {
        if e > MAX_EXPONENT {
            return Err(Error::ExponentOverflow);
        }
        Ok(Monomial(((e as u128) << v.shift()) | ((e as u128) << DEGREE_SHIFT)))
    }

    pub fn from_exponents(exps: &[u32; NVARS]) -> Result<Monomial> {
        Var::all().try_fold(Monomial::ONE, |acc, v| {
            acc.checked_mul(Monomial::var_pow(v, exps[v.index()])?)
        })
    }

    #[inline]
    pub fn raw(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEGREE_SHIFT) as u32
    }

    #[inline]
    pub fn exponent(self, v: Var) -> u32 {
        ((self.0 >> v.shift()) & FIELD_MASK) as u32
    }

    pub fn exponents(self) -> [u32; NVARS] {
        let mut out = [0; NVARS];
        for v in Var::all() {
            out[v.index()] = self.exponent(v);
        }
        out
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Product, failing if any exponent would exceed [`MAX_EXPONENT`].
    #[inline]
    pub fn checked_mul(self, rhs: Monomial) -> Result<Monomial> {
        let sum = self.0.checked_add(rhs.0).ok_or(Error::ExponentOverflow)?;
        if (self.0 ^ rhs.0 ^ sum) & CARRY_MASK != 0 {
            return Err(Error::ExponentOverflow);
        }
        Ok(Monomial(sum))
    }

    /// Product; panics on exponent overflow.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Monomial) -> Monomial {
        self.checked_mul(rhs)
            .expect("monomial exponent overflow (limit 511 per variable)")
    }

    /// `self / rhs` when `rhs` divides `self`.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Monomial) -> Option<Monomial> {
        let diff = self.0.checked_sub(rhs.0)?;
        if (self.0 ^ rhs.0 ^ diff) & CARRY_MASK != 0 {
            return None;
        }
        Some(Monomial(diff))
    }

    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Drops variable `v`, returning the remaining monomial and the removed exponent.
    #[inline]
    pub fn split_var(self, v: Var) -> (Monomial, u32) {
        let e = self.exponent(v);
        let removed = ((e as u128) << v.shift()) | ((e as u128) << DEGREE_SHIFT);
        (Monomial(self.0 - removed), e)
    }

    /// Total degree restricted to the variables present in `vars`.
    pub fn degree_in(self, vars: Monomial) -> u32 {
        Var::all()
            .filter(|&v| vars.exponent(v) > 0)
            .map(|v| self.exponent(v))
            .sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::all() {
            let e = self.exponent(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x = Monomial::var(Var::X);
        let y = Monomial::var(Var::Y);
        let a2 = Monomial::var_pow(Var::A, 2).unwrap();
        assert!(x > y);
        assert!(a2 > x, "higher total degree wins");
        assert!(x.mul(y) > Monomial::var_pow(Var::Y, 2).unwrap());
        assert!(Monomial::ONE < Monomial::var(Var::SE));
    }

    #[test]
    fn overflow_detected() {
        let big = Monomial::var_pow(Var::K, 300).unwrap();
        assert!(big.checked_mul(big).is_err());
        assert!(Monomial::var_pow(Var::K, 512).is_err());
        let ok = Monomial::var_pow(Var::K, 255).unwrap();
        assert_eq!(ok.checked_mul(ok).unwrap().exponent(Var::K), 510);
    }

    #[test]
    fn division() {
        let m = Monomial::from_exponents(&[1, 2, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0]).unwrap();
        let d = Monomial::var_pow(Var::I, 2).unwrap();
        let q = m.div(d).unwrap();
        assert_eq!(q.exponent(Var::I), 1);
        assert_eq!(q.degree(), 4);
        assert!(d.div(m).is_none());
        assert!(Monomial::var(Var::A).div(Monomial::var(Var::B)).is_none());
        assert_eq!(m.split_var(Var::Y).1, 2);
        assert_eq!(m.split_var(Var::Y).0.degree(), 4);
    }

    #[test]
    fn display() {
        let m = Monomial::from_exponents(&[0, 0, 2, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(m.to_string(), "A^2*B*k");
        assert_eq!(Monomial::ONE.to_string(), "1");
    }
}
