use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::base::{FieldCtx, FqElem};
use crate::error::{Error, Result};

/// Largest base degree for which GF(q^2) log tables are built (q^2 <= 2^16).
pub const MAX_EXT_TABLE_DEGREE: u32 = 8;

/// `a + i*b` with `a, b` in GF(q) and `i^2 = i + k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq2Elem {
    pub a: FqElem,
    pub b: FqElem,
}

impl Fq2Elem {
    pub const ZERO: Fq2Elem = Fq2Elem {
        a: FqElem::ZERO,
        b: FqElem::ZERO,
    };
    pub const ONE: Fq2Elem = Fq2Elem {
        a: FqElem::ONE,
        b: FqElem::ZERO,
    };
    pub const I: Fq2Elem = Fq2Elem {
        a: FqElem::ZERO,
        b: FqElem::ONE,
    };

    #[inline]
    pub fn new(a: u32, b: u32) -> Fq2Elem {
        Fq2Elem {
            a: FqElem(a),
            b: FqElem(b),
        }
    }

    #[inline]
    pub fn from_base(a: FqElem) -> Fq2Elem {
        Fq2Elem { a, b: FqElem::ZERO }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element lies in the subfield GF(q).
    #[inline]
    pub fn in_base(self) -> bool {
        self.b.is_zero()
    }

    /// Packs the coordinates as `a | b << m`.
    #[inline]
    pub fn index(self, m: u32) -> usize {
        (self.a.0 | (self.b.0 << m)) as usize
    }

    #[inline]
    pub fn from_index(idx: usize, m: u32) -> Fq2Elem {
        let mask = (1u32 << m) - 1;
        Fq2Elem::new(idx as u32 & mask, (idx as u32) >> m)
    }

    /// `HEX:HEX`, the command-line form.
    pub fn parse_pair(s: &str) -> Result<Fq2Elem> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected HEX:HEX, got {s:?}")))?;
        Ok(Fq2Elem {
            a: a.parse()?,
            b: b.parse()?,
        })
    }
}

impl std::ops::Add for Fq2Elem {
    type Output = Fq2Elem;
    #[inline]
    fn add(self, rhs: Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl fmt::Display for Fq2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+i*{}", self.a, self.b)
    }
}

impl FromStr for Fq2Elem {
    type Err = Error;
    /// Accepts the serialized form `a+i*b`.
    fn from_str(s: &str) -> Result<Fq2Elem> {
        let (a, b) = s
            .split_once("+i*")
            .ok_or_else(|| Error::Parse(format!("expected a+i*b, got {s:?}")))?;
        Ok(Fq2Elem {
            a: a.parse()?,
            b: b.parse()?,
        })
    }
}

impl Serialize for Fq2Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Fq2Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Fq2Elem, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the projective line over GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(FqElem),
    Infinity,
}

#[derive(Debug, Clone)]
pub(crate) struct ExtTables {
    /// Indexed by `Fq2Elem::index`; entry for zero unused.
    pub(crate) log: Vec<u32>,
    /// Doubled antilog table of length `2(q^2 - 1)`.
    pub(crate) exp: Vec<u32>,
}

/// GF(q^2) = GF(q)[i] / (i^2 + i + k) with Tr(k) = 1.
#[derive(Debug, Clone)]
pub struct ExtCtx {
    base: FieldCtx,
    k: FqElem,
    tables: Option<ExtTables>,
}

impl ExtCtx {
    /// With `k == None` the trace-1 element of smallest encoding is chosen.
    pub fn new(base: FieldCtx, k: Option<FqElem>) -> Result<ExtCtx> {
        let k = match k {
            Some(k) => {
                base.check(k)?;
                if base.trace(k) != 1 {
                    return Err(Error::BadTrace(k.0));
                }
                k
            }
            None => base
                .elements()
                .find(|&z| base.trace(z) == 1)
                .expect("the trace is onto GF(2)"),
        };
        let mut ext = ExtCtx {
            base,
            k,
            tables: None,
        };
        if ext.base.m() <= MAX_EXT_TABLE_DEGREE {
            ext.tables = Some(ext.build_tables());
        }
        Ok(ext)
    }

    /// Shorthand for `ExtCtx::new(FieldCtx::new(m, None)?, None)`.
    pub fn with_degree(m: u32) -> Result<ExtCtx> {
        ExtCtx::new(FieldCtx::new(m, None)?, None)
    }

    #[inline]
    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    #[inline]
    pub fn k(&self) -> FqElem {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.base.q()
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.base.m()
    }

    /// Number of elements of GF(q^2).
    #[inline]
    pub fn order(&self) -> usize {
        1usize << (2 * self.m())
    }

    pub(crate) fn tables(&self) -> Option<&ExtTables> {
        self.tables.as_ref()
    }

    pub fn contains(&self, z: Fq2Elem) -> bool {
        self.base.contains(z.a) && self.base.contains(z.b)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq2Elem> + '_ {
        let m = self.m();
        (0..self.order()).map(move |j| Fq2Elem::from_index(j, m))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq2Elem> + '_ {
        let m = self.m();
        (1..self.order()).map(move |j| Fq2Elem::from_index(j, m))
    }

    #[inline]
    pub fn add(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        x + y
    }

    /// `(a1 + i b1)(a2 + i b2) = (a1 a2 + k b1 b2) + i(a1 b2 + a2 b1 + b1 b2)`,
    /// always through base-field arithmetic.
    #[inline]
    pub fn mul_coords(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        let f = &self.base;
        let aa = f.mul(x.a, y.a);
        let bb = f.mul(x.b, y.b);
        let cross = f.mul(x.a + x.b, y.a + y.b);
        Fq2Elem {
            a: aa + f.mul(self.k, bb),
            b: cross + aa,
        }
    }

    #[inline]
    pub fn mul(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        match &self.tables {
            Some(t) if !x.is_zero() && !y.is_zero() => {
                let m = self.m();
                let l = t.log[x.index(m)] + t.log[y.index(m)];
                Fq2Elem::from_index(t.exp[l as usize] as usize, m)
            }
            Some(_) => Fq2Elem::ZERO,
            None => self.mul_coords(x, y),
        }
    }

    #[inline]
    pub fn square(&self, x: Fq2Elem) -> Fq2Elem {
        self.mul(x, x)
    }

    pub fn pow(&self, base: Fq2Elem, mut e: u64) -> Fq2Elem {
        let mut acc = Fq2Elem::ONE;
        let mut b = base;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, b);
            }
            b = self.square(b);
            e >>= 1;
        }
        acc
    }

    /// `z^q`: `(A + iB) -> (A + B) + iB`.
    #[inline]
    pub fn frobenius(&self, z: Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: z.a + z.b,
            b: z.b,
        }
    }

    /// `z^(q+1) = A^2 + AB + kB^2`.
    #[inline]
    pub fn norm(&self, z: Fq2Elem) -> FqElem {
        let f = &self.base;
        f.mul(z.a, z.a + z.b) + f.mul(self.k, f.square(z.b))
    }

    pub fn inv(&self, z: Fq2Elem) -> Result<Fq2Elem> {
        let n = self.norm(z);
        let ninv = self.base.inv(n)?;
        let c = self.frobenius(z);
        Ok(Fq2Elem {
            a: self.base.mul(c.a, ninv),
            b: self.base.mul(c.b, ninv),
        })
    }

    pub fn div(&self, x: Fq2Elem, y: Fq2Elem) -> Result<Fq2Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Multiplies by a base-field scalar.
    #[inline]
    pub fn scale(&self, c: FqElem, z: Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: self.base.mul(c, z.a),
            b: self.base.mul(c, z.b),
        }
    }

    /// `x -> (x + i)/(x + i + 1)`, `Infinity -> 1`.
    pub fn phi_map(&self, x: ProjPoint) -> Fq2Elem {
        match x {
            ProjPoint::Infinity => Fq2Elem::ONE,
            ProjPoint::Finite(x) => {
                let num = Fq2Elem { a: x, b: FqElem::ONE };
                let den = Fq2Elem {
                    a: x + FqElem::ONE,
                    b: FqElem::ONE,
                };
                self.div(num, den).expect("x + i + 1 is never zero for x in GF(q)")
            }
        }
    }

    /// Inverse of [`ExtCtx::phi_map`] on the norm-1 subgroup.
    pub fn phi_inverse(&self, u: Fq2Elem) -> Result<ProjPoint> {
        if self.norm(u) != FqElem::ONE {
            return Err(Error::NotOnMu);
        }
        if u == Fq2Elem::ONE {
            return Ok(ProjPoint::Infinity);
        }
        // u(x + i + 1) = x + i  =>  x (u + 1) = i + u(i + 1)
        let rhs = Fq2Elem::I + self.mul(u, Fq2Elem { a: FqElem::ONE, b: FqElem::ONE });
        let x = self.div(rhs, u + Fq2Elem::ONE)?;
        debug_assert!(x.in_base());
        Ok(ProjPoint::Finite(x.a))
    }

    /// The q+1 elements of norm 1: `phi_map(0), ..., phi_map(q-1)`, then 1.
    pub fn mu_enumerate(&self) -> Vec<Fq2Elem> {
        self.base
            .elements()
            .map(ProjPoint::Finite)
            .chain(std::iter::once(ProjPoint::Infinity))
            .map(|x| self.phi_map(x))
            .collect()
    }

    #[inline]
    pub fn on_mu(&self, u: Fq2Elem) -> bool {
        self.norm(u) == FqElem::ONE
    }

    fn build_tables(&self) -> ExtTables {
        let n = self.order() - 1;
        let m = self.m();
        let order = n as u64;
        let mut factors = Vec::new();
        let mut rest = order;
        let mut p = 2;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                factors.push(p);
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
            }
            p += 1;
        }
        if rest > 1 {
            factors.push(rest);
        }
        let pow_coords = |z: Fq2Elem, mut e: u64| {
            let mut acc = Fq2Elem::ONE;
            let mut b = z;
            while e != 0 {
                if e & 1 != 0 {
                    acc = self.mul_coords(acc, b);
                }
                b = self.mul_coords(b, b);
                e >>= 1;
            }
            acc
        };
        let gen = (2..=n)
            .map(|j| Fq2Elem::from_index(j, m))
            .find(|&g| factors.iter().all(|&p| pow_coords(g, order / p) != Fq2Elem::ONE))
            .expect("GF(q^2)* is cyclic");
        let mut log = vec![0u32; n + 1];
        let mut exp = vec![0u32; 2 * n];
        let mut cur = Fq2Elem::ONE;
        for j in 0..n {
            let idx = cur.index(m) as u32;
            exp[j] = idx;
            exp[j + n] = idx;
            log[idx as usize] = j as u32;
            cur = self.mul_coords(cur, gen);
        }
        ExtTables { log, exp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf64() -> ExtCtx {
        ExtCtx::with_degree(3).unwrap()
    }

    #[test]
    fn default_k() {
        assert_eq!(gf64().k(), FqElem(1));
        let e16 = ExtCtx::with_degree(4).unwrap();
        assert_eq!(e16.base().trace(e16.k()), 1);
        let f = FieldCtx::new(3, None).unwrap();
        assert_eq!(ExtCtx::new(f, Some(FqElem(2))).unwrap_err(), Error::BadTrace(2));
    }

    #[test]
    fn tower_relation() {
        let e = gf64();
        assert_eq!(e.mul(Fq2Elem::I, Fq2Elem::I), Fq2Elem { a: e.k(), b: FqElem::ONE });
        assert_eq!(e.pow(Fq2Elem::I, e.q() as u64), Fq2Elem::new(1, 1));
        assert_eq!(e.frobenius(Fq2Elem::I), Fq2Elem::new(1, 1));
    }

    #[test]
    fn table_mul_matches_coordinates() {
        for m in [2, 3, 4, 5] {
            let e = ExtCtx::with_degree(m).unwrap();
            for x in e.elements() {
                for y in e.elements().step_by(7) {
                    assert_eq!(e.mul(x, y), e.mul_coords(x, y));
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let e = gf64();
        assert_eq!(e.norm(Fq2Elem::I), e.k());
        assert_eq!(e.norm(Fq2Elem::new(5, 0)), e.base().square(FqElem(5)));
    }

    #[test]
    fn mu_set() {
        let e = gf64();
        let mu = e.mu_enumerate();
        assert_eq!(mu.len(), 9);
        let set: std::collections::HashSet<_> = mu.iter().copied().collect();
        assert_eq!(set.len(), 9);
        for &u in &mu {
            assert_eq!(e.mul(u, e.frobenius(u)), Fq2Elem::ONE);
        }
        let base: Vec<_> = mu.iter().filter(|u| u.in_base()).collect();
        assert_eq!(base, vec![&Fq2Elem::ONE]);
        assert_eq!(e.phi_map(ProjPoint::Infinity), Fq2Elem::ONE);
        let p0 = e.phi_map(ProjPoint::Finite(FqElem::ZERO));
        let expect = e
            .div(Fq2Elem::I, Fq2Elem::new(1, 1))
            .unwrap();
        assert_eq!(p0, expect);
        assert_eq!(e.pow(p0, (e.q() + 1) as u64), Fq2Elem::ONE);
        for (j, &u) in mu.iter().enumerate() {
            let back = e.phi_inverse(u).unwrap();
            if j < 8 {
                assert_eq!(back, ProjPoint::Finite(FqElem(j as u32)));
            } else {
                assert_eq!(back, ProjPoint::Infinity);
            }
        }
    }

    #[test]
    fn serialization() {
        let z = Fq2Elem::new(6, 5);
        assert_eq!(z.to_string(), "0x6+i*0x5");
        assert_eq!("0x6+i*0x5".parse::<Fq2Elem>().unwrap(), z);
        assert_eq!(Fq2Elem::parse_pair("6:5").unwrap(), z);
        assert!(Fq2Elem::parse_pair("65").is_err());
        assert_eq!(serde_json::to_string(&z).unwrap(), "\"0x6+i*0x5\"");
    }

    #[test]
    fn inverse_of_zero() {
        assert_eq!(gf64().inv(Fq2Elem::ZERO), Err(Error::DivisionByZero));
    }
}
