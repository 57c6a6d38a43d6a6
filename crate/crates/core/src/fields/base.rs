use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 24;
/// Largest degree for which log/antilog tables are built.
pub const MAX_TABLE_DEGREE: u32 = 16;

/// Element of GF(2^m): bit `j` is the coefficient of `t^j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase hexadecimal with `0x` prefix, e.g. `0xb`.
    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }
}

// Addition in characteristic 2 is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FqElem {
    type Output = FqElem;
    #[inline]
    fn add(self, rhs: FqElem) -> FqElem {
        FqElem(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FqElem {
    #[inline]
    fn add_assign(&mut self, rhs: FqElem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Parses `0x1f`, `1f` or `0X1F` style hexadecimal bitmasks.
pub fn parse_hex(s: &str) -> Result<u64> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if digits.is_empty() {
        return Err(Error::Parse(format!("empty hex literal {s:?}")));
    }
    u64::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

impl FromStr for FqElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<FqElem> {
        let v = parse_hex(s)?;
        u32::try_from(v)
            .map(FqElem)
            .map_err(|_| Error::Parse(format!("{s:?} does not fit in 32 bits")))
    }
}

impl Serialize for FqElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FqElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FqElem, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Degree of a GF(2)[x] polynomial given as a bitmask; `None` for zero.
#[inline]
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `b` in GF(2)[x].
pub fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division against every polynomial of
/// degree 1..=deg/2.
pub fn is_irreducible(p: u64) -> bool {
    let Some(d) = poly_degree(p) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for dd in 1..=d / 2 {
        for low in 0..(1u64 << dd) {
            if poly_rem(p, (1u64 << dd) | low) == 0 {
                return false;
            }
        }
    }
    true
}

/// Carryless product of two polynomials of degree < 32.
#[inline]
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone)]
struct LogTables {
    /// `log[z]` for z != 0.
    log: Vec<u32>,
    /// `exp[j] = g^j` for j in 0..2(q-1), doubled to skip one reduction.
    exp: Vec<u32>,
}

/// GF(2^m) defined by an irreducible modulus.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    m: u32,
    modulus: u64,
    q: u32,
    trace_mask: u32,
    generator: FqElem,
    tables: Option<LogTables>,
}

impl FieldCtx {
    /// Builds GF(2^m). With `modulus == None` the irreducible polynomial of
    /// degree `m` with the smallest integer encoding is used.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<FieldCtx> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let modulus = match modulus {
            Some(p) => {
                let found = poly_degree(p).unwrap_or(0);
                if found != m || p == 0 {
                    return Err(Error::DegreeMismatch {
                        expected: m,
                        found,
                        modulus: p,
                    });
                }
                if !is_irreducible(p) {
                    return Err(Error::ReducibleModulus(p));
                }
                p
            }
            None => ((1u64 << m)..(1u64 << (m + 1)))
                .find(|&p| is_irreducible(p))
                .expect("an irreducible polynomial exists in every degree"),
        };
        let mut ctx = FieldCtx {
            m,
            modulus,
            q: 1 << m,
            trace_mask: 0,
            generator: FqElem::ONE,
            tables: None,
        };
        ctx.trace_mask = (0..m)
            .filter(|&j| ctx.trace_by_definition(FqElem(1 << j)) == 1)
            .fold(0, |acc, j| acc | (1 << j));
        ctx.generator = ctx.find_generator();
        if m <= MAX_TABLE_DEGREE {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:#x}", self.modulus)
    }

    /// A generator of the multiplicative group GF(q)*.
    #[inline]
    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + Clone {
        (0..self.q).map(FqElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> + Clone {
        (1..self.q).map(FqElem)
    }

    #[inline]
    pub fn contains(&self, z: FqElem) -> bool {
        z.0 < self.q
    }

    pub fn check(&self, z: FqElem) -> Result<FqElem> {
        if self.contains(z) {
            Ok(z)
        } else {
            Err(Error::NotInField(z.0))
        }
    }

    #[inline]
    fn reduce(&self, mut p: u64) -> u32 {
        let m = self.m;
        while p >> m != 0 {
            let d = 63 - p.leading_zeros();
            p ^= self.modulus << (d - m);
        }
        p as u32
    }

    /// Shift-xor multiplication with modular reduction; the reference path.
    #[inline]
    pub fn mul_clmul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.reduce(clmul(a.0, b.0)))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FqElem::ZERO
                } else {
                    FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_clmul(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn pow(&self, base: FqElem, mut e: u64) -> FqElem {
        let mut acc = FqElem::ONE;
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

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                FqElem(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Discrete logarithm to base [`FieldCtx::generator`], when tables exist.
    #[inline]
    pub fn log(&self, a: FqElem) -> Option<u32> {
        match (&self.tables, a.0) {
            (_, 0) => None,
            (Some(t), v) => Some(t.log[v as usize]),
            (None, _) => None,
        }
    }

    /// The unique square root, `z^(2^(m-1))`.
    pub fn sqrt(&self, z: FqElem) -> FqElem {
        (1..self.m).fold(z, |acc, _| self.square(acc))
    }

    /// The unique fourth root.
    pub fn quartic_root(&self, z: FqElem) -> FqElem {
        self.sqrt(self.sqrt(z))
    }

    /// Absolute trace `z + z^2 + ... + z^(2^(m-1))`, computed term by term.
    pub fn trace_by_definition(&self, z: FqElem) -> u8 {
        let mut acc = FqElem::ZERO;
        let mut t = z;
        for _ in 0..self.m {
            acc += t;
            t = self.mul_clmul(t, t);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// Absolute trace via the precomputed linear functional.
    #[inline]
    pub fn trace(&self, z: FqElem) -> u8 {
        ((z.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Half-trace `sum z^(4^j)`, j = 0..=(m-1)/2; solves `T^2 + T = z` when
    /// m is odd and Tr(z) = 0.
    pub fn half_trace(&self, z: FqElem) -> FqElem {
        let mut acc = FqElem::ZERO;
        let mut t = z;
        for _ in 0..=(self.m - 1) / 2 {
            acc += t;
            t = self.square(self.square(t));
        }
        acc
    }

    /// One root of `T^2 + T = c` (the other is that root plus 1), or `None`
    /// when Tr(c) = 1.
    pub fn artin_schreier_root(&self, c: FqElem) -> Option<FqElem> {
        if self.trace(c) == 1 {
            return None;
        }
        if self.m % 2 == 1 {
            return Some(self.half_trace(c));
        }
        // Gaussian elimination on the GF(2)-linear map T -> T^2 + T.
        // Column j is the image of t^j.
        let m = self.m as usize;
        let mut rows: Vec<(u32, u32)> = Vec::with_capacity(m);
        // Row-reduce [M | c] where M is stored by rows; build M by rows from columns.
        let cols: Vec<u32> = (0..m)
            .map(|j| {
                let b = FqElem(1 << j);
                (self.square(b) + b).0
            })
            .collect();
        for r in 0..m {
            let row = (0..m).fold(0u32, |acc, j| acc | (((cols[j] >> r) & 1) << j));
            rows.push((row, (c.0 >> r) & 1));
        }
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for col in 0..m {
            let Some(p) = (rank..m).find(|&r| (rows[r].0 >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let (pr, pb) = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && (row.0 >> col) & 1 == 1 {
                    row.0 ^= pr;
                    row.1 ^= pb;
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        if rows[rank..].iter().any(|&(_, b)| b == 1) {
            return None;
        }
        // Free variables set to 0.
        let mut sol = 0u32;
        for (r, &col) in pivot_cols.iter().enumerate() {
            sol |= rows[r].1 << col;
        }
        Some(FqElem(sol))
    }

    /// All roots in GF(q) of `a T^2 + b T + c`, sorted ascending.
    pub fn solve_quadratic(&self, a: FqElem, b: FqElem, c: FqElem) -> Result<Vec<FqElem>> {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => Err(Error::DegenerateEquation),
            (true, false) => Ok(vec![self.div(c, b)?]),
            (false, true) => Ok(vec![self.sqrt(self.div(c, a)?)]),
            (false, false) => {
                // T = (b/a) S turns the equation into S^2 + S = ac/b^2.
                let rhs = self.div(self.mul(a, c), self.square(b))?;
                let Some(s) = self.artin_schreier_root(rhs) else {
                    return Ok(Vec::new());
                };
                let scale = self.div(b, a)?;
                let mut roots = vec![self.mul(scale, s), self.mul(scale, s + FqElem::ONE)];
                roots.sort();
                Ok(roots)
            }
        }
    }

    fn find_generator(&self) -> FqElem {
        let order = (self.q - 1) as u64;
        if order == 1 {
            return FqElem::ONE;
        }
        let factors = prime_factors(order);
        (2..self.q)
            .map(FqElem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&p| self.pow_clmul(g, order / p) != FqElem::ONE)
            })
            .expect("GF(q)* is cyclic")
    }

    fn pow_clmul(&self, base: FqElem, mut e: u64) -> FqElem {
        let mut acc = FqElem::ONE;
        let mut b = base;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul_clmul(acc, b);
            }
            b = self.mul_clmul(b, b);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let mut log = vec![0u32; self.q as usize];
        let mut exp = vec![0u32; 2 * n];
        let mut cur = FqElem::ONE;
        for j in 0..n {
            exp[j] = cur.0;
            exp[j + n] = cur.0;
            log[cur.0 as usize] = j as u32;
            cur = self.mul_clmul(cur, self.generator);
        }
        LogTables { log, exp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldCtx {
        FieldCtx::new(3, None).unwrap()
    }

    #[test]
    fn default_modulus_m3() {
        assert_eq!(gf8().modulus(), 0b1011);
        assert_eq!(FieldCtx::new(3, Some(0b1011)).unwrap().q(), 8);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(
            FieldCtx::new(3, Some(0b1111)).unwrap_err(),
            Error::ReducibleModulus(0b1111)
        );
        assert!(matches!(
            FieldCtx::new(4, Some(0b1011)),
            Err(Error::DegreeMismatch { expected: 4, found: 3, .. })
        ));
        assert_eq!(FieldCtx::new(1, None).unwrap_err(), Error::UnsupportedDegree(1));
        assert_eq!(FieldCtx::new(25, None).unwrap_err(), Error::UnsupportedDegree(25));
    }

    #[test]
    fn gf8_products() {
        let f = gf8();
        assert_eq!(f.mul(FqElem(2), FqElem(4)), FqElem(3));
        assert_eq!(f.inv(FqElem(2)).unwrap(), FqElem(5));
        assert_eq!(f.inv(FqElem(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gf8_traces() {
        let f = gf8();
        assert_eq!(f.trace(FqElem(0)), 0);
        assert_eq!(f.trace(FqElem(1)), 1);
        assert_eq!(f.trace(FqElem(2)), 0);
    }

    #[test]
    fn quadratic_examples() {
        let f = gf8();
        assert_eq!(
            f.solve_quadratic(FqElem(1), FqElem(1), FqElem(0)).unwrap(),
            vec![FqElem(0), FqElem(1)]
        );
        assert_eq!(
            f.solve_quadratic(FqElem(0), FqElem(1), FqElem(5)).unwrap(),
            vec![FqElem(5)]
        );
        assert!(f
            .solve_quadratic(FqElem(1), FqElem(1), FqElem(1))
            .unwrap()
            .is_empty());
        assert_eq!(
            f.solve_quadratic(FqElem(0), FqElem(0), FqElem(1)),
            Err(Error::DegenerateEquation)
        );
    }

    #[test]
    fn table_path_matches_clmul() {
        for m in [3, 4, 7, 8, 11] {
            let f = FieldCtx::new(m, None).unwrap();
            for a in f.elements().step_by(if m > 8 { 37 } else { 1 }) {
                for b in f.elements().step_by(if m > 8 { 41 } else { 1 }) {
                    assert_eq!(f.mul(a, b), f.mul_clmul(a, b));
                }
            }
        }
    }

    #[test]
    fn trace_mask_matches_definition() {
        for m in [2, 3, 4, 5, 6, 9, 10] {
            let f = FieldCtx::new(m, None).unwrap();
            for z in f.elements() {
                assert_eq!(f.trace(z), f.trace_by_definition(z));
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for m in 2..=10 {
            let f = FieldCtx::new(m, None).unwrap();
            let g = f.generator();
            let mut seen = std::collections::HashSet::new();
            let mut cur = FqElem::ONE;
            for _ in 0..f.q() - 1 {
                seen.insert(cur);
                cur = f.mul(cur, g);
            }
            assert_eq!(seen.len() as u32, f.q() - 1);
        }
    }

    #[test]
    fn large_degree_without_tables() {
        let f = FieldCtx::new(20, None).unwrap();
        assert!(!f.has_tables());
        let z = FqElem(0x9_1234);
        assert_eq!(f.mul(z, f.inv(z).unwrap()), FqElem::ONE);
        assert_eq!(f.square(f.sqrt(z)), z);
    }

    #[test]
    fn hex_round_trip() {
        assert_eq!(FqElem(11).to_hex(), "0xb");
        assert_eq!("0xb".parse::<FqElem>().unwrap(), FqElem(11));
        assert_eq!("B".parse::<FqElem>().unwrap(), FqElem(11));
        assert!("0x".parse::<FqElem>().is_err());
        assert!("zz".parse::<FqElem>().is_err());
    }
}
