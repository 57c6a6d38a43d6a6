use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::monomial::{Monomial, Var, NVARS};
use crate::error::{Error, Result};
use crate::fields::{FieldCtx, FqElem};

/// Polynomial over GF(2) in the thirteen variables of [`Var`]: a strictly
/// decreasing (graded lex) list of the monomials with coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<Monomial>,
}

/// Sorts descending and cancels repeated monomials in pairs.
fn canonicalize(mut terms: Vec<Monomial>) -> Vec<Monomial> {
    terms.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::with_capacity(terms.len());
    let mut j = 0;
    while j < terms.len() {
        let t = terms[j];
        let mut run = 1;
        while j + run < terms.len() && terms[j + run] == t {
            run += 1;
        }
        if run % 2 == 1 {
            out.push(t);
        }
        j += run;
    }
    out
}

/// Symmetric difference of two descending lists.
fn merge_xor(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn mul_terms(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    match a.len() {
        0 => Vec::new(),
        1 => b.iter().map(|&t| t.mul(a[0])).collect(),
        n if n * b.len() <= 512 => {
            canonicalize(a.iter().flat_map(|&s| b.iter().map(move |&t| s.mul(t))).collect())
        }
        n => {
            let (lo, hi) = a.split_at(n / 2);
            merge_xor(&mul_terms(lo, b), &mul_terms(hi, b))
        }
    }
}

#[derive(PartialEq, Eq)]
struct HeapEntry {
    mono: Monomial,
    /// Index into the divisor (from 1).
    i: usize,
    /// Index into the quotient.
    j: usize,
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mono.cmp(&other.mono)
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> MultiPoly {
        MultiPoly::monomial(Monomial::ONE)
    }

    pub fn var(v: Var) -> MultiPoly {
        MultiPoly::monomial(Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> MultiPoly {
        MultiPoly { terms: vec![m] }
    }

    /// Sum of the given monomials, with repeated monomials cancelling in pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> MultiPoly {
        MultiPoly {
            terms: canonicalize(terms.into_iter().collect()),
        }
    }

    /// Caller guarantees `terms` is strictly decreasing.
    fn from_sorted(terms: Vec<Monomial>) -> MultiPoly {
        debug_assert!(terms.windows(2).all(|w| w[0] > w[1]));
        MultiPoly { terms }
    }

    pub fn parse(s: &str) -> Result<MultiPoly> {
        Parser::new(s).parse_all()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    /// Number of terms.
    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn leading(&self) -> Option<Monomial> {
        self.terms.first().copied()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.degree()).max()
    }

    /// Degree in `v`, `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.iter().map(|t| t.exponent(v)).max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|t| t.exponent(v) > 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::all().filter(|&v| self.contains_var(v)).collect()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        MultiPoly::from_sorted(merge_xor(&self.terms, &other.terms))
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        MultiPoly::from_sorted(mul_terms(&self.terms, &other.terms))
    }

    pub fn mul_monomial(&self, m: Monomial) -> MultiPoly {
        MultiPoly::from_sorted(self.terms.iter().map(|&t| t.mul(m)).collect())
    }

    /// Squaring is additive in characteristic 2: every exponent doubles.
    pub fn square(&self) -> MultiPoly {
        MultiPoly::from_sorted(self.terms.iter().map(|&t| t.mul(t)).collect())
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        while e != 0 {
            if e & 1 != 0 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e != 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Coefficients as a polynomial in `v`: entry `j` multiplies `v^j` and is free of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MultiPoly> {
        let deg = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut buckets = vec![Vec::new(); deg + 1];
        for &t in &self.terms {
            let (rest, e) = t.split_var(v);
            buckets[e as usize].push(rest);
        }
        buckets.into_iter().map(MultiPoly::from_sorted).collect()
    }

    /// Inverse of [`MultiPoly::coeffs_in`].
    pub fn from_coeffs(v: Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut terms = Vec::new();
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let vj = Monomial::var_pow(v, j as u32).expect("degree within exponent range");
            terms.extend(c.terms.iter().map(|&t| t.mul(vj)));
        }
        MultiPoly::from_terms(terms)
    }

    /// Replaces every occurrence of `mono` by `rep` until no term is divisible
    /// by `mono`. Requires the degree of `rep` in the variables of `mono` to be
    /// below the degree of `mono`.
    pub fn substitute(&self, mono: Monomial, rep: &MultiPoly) -> Result<MultiPoly> {
        let rep_deg = rep.terms.iter().map(|t| t.degree_in(mono)).max().unwrap_or(0);
        if mono.is_one() || rep_deg >= mono.degree() {
            return Err(Error::NonTerminating {
                mono: mono.degree(),
                rep: rep_deg,
            });
        }
        let mut cur = self.clone();
        loop {
            let mut keep = Vec::new();
            let mut quot = Vec::new();
            for &t in &cur.terms {
                match t.div(mono) {
                    Some(qt) => quot.push(qt),
                    None => keep.push(t),
                }
            }
            if quot.is_empty() {
                return Ok(cur);
            }
            let keep = MultiPoly::from_sorted(keep);
            let quot = MultiPoly::from_sorted(quot);
            cur = keep.add(&quot.mul(rep));
        }
    }

    /// Composition: replaces the variable `v` by `value`.
    pub fn substitute_var(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in(v);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// `den^deg_v(self) * self(v = num/den)`, a polynomial.
    pub fn substitute_fraction(&self, v: Var, num: &MultiPoly, den: &MultiPoly) -> (MultiPoly, u32) {
        let coeffs = self.coeffs_in(v);
        let n = coeffs.len().saturating_sub(1) as u32;
        let mut acc = MultiPoly::zero();
        let mut den_pow = MultiPoly::one();
        // Horner from the top: sum c_j num^j den^(n-j).
        for c in coeffs.iter().rev() {
            acc = acc.mul(num).add(&c.mul(&den_pow));
            den_pow = den_pow.mul(den);
        }
        (acc, n)
    }

    /// Exact quotient `self / d`; [`Error::InexactDivision`] if a remainder appears.
    pub fn exact_div(&self, d: &MultiPoly) -> Result<MultiPoly> {
        let (q, r) = self.div_rem_heap(d, true)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Whether `d` divides `self` exactly.
    pub fn is_divisible_by(&self, d: &MultiPoly) -> bool {
        self.exact_div(d).is_ok()
    }

    /// Multivariate division with respect to graded lex order; remainder terms
    /// are those not divisible by the leading monomial of `d`.
    pub fn div_rem(&self, d: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.div_rem_heap(d, false)
    }

    /// Heap-based division: products `d_i * q_j` are generated lazily in
    /// decreasing order, so each step costs a heap operation rather than a
    /// pass over the running remainder.
    fn div_rem_heap(&self, d: &MultiPoly, stop_on_remainder: bool) -> Result<(MultiPoly, MultiPoly)> {
        let Some(lead) = d.leading() else {
            return Err(Error::DivisionByZero);
        };
        let f = &self.terms;
        let g = &d.terms;
        let mut quot: Vec<Monomial> = Vec::new();
        let mut rem: Vec<Monomial> = Vec::new();
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        let mut k = 0;
        loop {
            let top = heap.peek().map(|e| e.mono);
            let t = match (f.get(k).copied(), top) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.max(b),
            };
            let mut parity = false;
            if f.get(k) == Some(&t) {
                parity = !parity;
                k += 1;
            }
            while heap.peek().map(|e| e.mono) == Some(t) {
                let e = heap.pop().expect("peeked");
                parity = !parity;
                if e.i + 1 < g.len() {
                    heap.push(HeapEntry {
                        mono: g[e.i + 1].mul(quot[e.j]),
                        i: e.i + 1,
                        j: e.j,
                    });
                }
            }
            if !parity {
                continue;
            }
            match t.div(lead) {
                Some(qt) => {
                    quot.push(qt);
                    if g.len() > 1 {
                        heap.push(HeapEntry {
                            mono: g[1].mul(qt),
                            i: 1,
                            j: quot.len() - 1,
                        });
                    }
                }
                None => {
                    rem.push(t);
                    if stop_on_remainder {
                        break;
                    }
                }
            }
        }
        Ok((MultiPoly::from_sorted(quot), MultiPoly::from_sorted(rem)))
    }

    /// Divides out `factor` as many times as it goes; returns the cofactor and the count.
    pub fn strip_factor(&self, factor: &MultiPoly) -> (MultiPoly, u32) {
        let mut cur = self.clone();
        let mut count = 0;
        if factor.is_one() || factor.is_zero() || cur.is_zero() {
            return (cur, 0);
        }
        while let Ok(q) = cur.exact_div(factor) {
            cur = q;
            count += 1;
        }
        (cur, count)
    }

    /// Evaluates at a point of GF(2^m)^13.
    pub fn eval(&self, field: &FieldCtx, point: &[FqElem; NVARS]) -> FqElem {
        let mut acc = FqElem::ZERO;
        for &t in &self.terms {
            let mut prod = FqElem::ONE;
            for v in Var::all() {
                let e = t.exponent(v);
                if e > 0 {
                    prod = field.mul(prod, field.pow(point[v.index()], e as u64));
                }
            }
            acc += prod;
        }
        acc
    }

    /// SHA-256 of the canonical string form, lowercase hex.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_string().as_bytes()))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (j, t) in self.terms.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.len() > 40 {
            write!(f, "MultiPoly({} terms, lead {})", self.terms.len(), self.terms[0])
        } else {
            write!(f, "MultiPoly({self})")
        }
    }
}

impl FromStr for MultiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<MultiPoly> {
        MultiPoly::parse(s)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                MultiPoly::$inner(self, rhs)
            }
        }
        impl std::ops::$tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                MultiPoly::$inner(&self, &rhs)
            }
        }
        impl std::ops::$tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                MultiPoly::$inner(&self, rhs)
            }
        }
        impl std::ops::$tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                MultiPoly::$inner(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, add);
forward_binop!(Mul, mul, mul);

/// Recursive-descent parser for `+ - * ^ ( )`, integer literals (taken mod 2)
/// and the thirteen variable names.
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn parse_all(mut self) -> Result<MultiPoly> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            if c == '+' || c == '-' {
                self.bump();
                acc = acc.add(&self.term()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("expected integer"))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(if n % 2 == 1 {
                    MultiPoly::one()
                } else {
                    MultiPoly::zero()
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(MultiPoly::var(Var::from_name(&self.src[start..self.pos])?))
            }
            _ => Err(self.err("expected '(', a number or a variable")),
        }
    }
}
