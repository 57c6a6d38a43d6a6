//! The trinomial `f(x) = x + a x^(q(q-1)+1) + b x^(2(q-1)+1)` on GF(q^2), its
//! fractional map `g(u) = (a^q u^3 + u^2 + b^q) / (b u^3 + u + a)` on the
//! (q+1)-st roots of unity, and bijectivity tests for both.
//!
//! The general criterion behind the reduction: `x^r h(x^((Q-1)/d))` permutes
//! GF(Q) iff `gcd(r, (Q-1)/d) = 1` and `x^r h(x)^((Q-1)/d)` permutes the d-th
//! roots of unity. The trinomial is the instance `r = 1`, `d = q + 1` over
//! GF(q^2); note that it does not satisfy `r < (Q-1)/d` read literally, so
//! [`GeneralTrinomialSpec`] accepts any `r >= 1`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{ExtCtx, FieldCtx, Fq2Elem, FqElem};

/// Coefficients `(alpha, beta)`, both nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairAB {
    pub alpha: Fq2Elem,
    pub beta: Fq2Elem,
}

impl PairAB {
    pub fn new(alpha: Fq2Elem, beta: Fq2Elem) -> Result<PairAB> {
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        Ok(PairAB { alpha, beta })
    }

    /// `alpha = A + iB`, `beta = C + iD`.
    pub fn from_coords(a: FqElem, b: FqElem, c: FqElem, d: FqElem) -> Result<PairAB> {
        PairAB::new(Fq2Elem { a, b }, Fq2Elem { a: c, b: d })
    }

    /// `[A, B, C, D]`.
    pub fn coords(&self) -> [FqElem; 4] {
        [self.alpha.a, self.alpha.b, self.beta.a, self.beta.b]
    }
}

/// Precomputed per-field data for evaluating and testing trinomials.
#[derive(Debug)]
pub struct TrinomialCtx {
    ext: ExtCtx,
    e_alpha: u64,
    e_beta: u64,
    mu: Vec<Fq2Elem>,
    /// For table-backed fields: position in `mu` of each GF(q^2) index, or `NOT_MU`.
    mu_pos: Option<Vec<u16>>,
    /// Logs of `x^e_alpha` and `x^e_beta` for every nonzero `x`, built on first use.
    power_logs: OnceLock<Vec<(u32, u32)>>,
}

const NOT_MU: u16 = u16::MAX;

impl TrinomialCtx {
    pub fn new(ext: ExtCtx) -> TrinomialCtx {
        let q = ext.q() as u64;
        let mu = ext.mu_enumerate();
        let mu_pos = ext.tables().map(|_| {
            let m = ext.m();
            let mut pos = vec![NOT_MU; ext.order()];
            for (j, u) in mu.iter().enumerate() {
                pos[u.index(m)] = j as u16;
            }
            pos
        });
        TrinomialCtx {
            e_alpha: q * (q - 1) + 1,
            e_beta: 2 * (q - 1) + 1,
            ext,
            mu,
            mu_pos,
            power_logs: OnceLock::new(),
        }
    }

    pub fn with_degree(m: u32) -> Result<TrinomialCtx> {
        Ok(TrinomialCtx::new(ExtCtx::with_degree(m)?))
    }

    #[inline]
    pub fn ext(&self) -> &ExtCtx {
        &self.ext
    }

    /// `(q(q-1) + 1, 2(q-1) + 1)`.
    pub fn exponents(&self) -> (u64, u64) {
        (self.e_alpha, self.e_beta)
    }

    /// The (q+1)-st roots of unity in [`ExtCtx::mu_enumerate`] order.
    pub fn mu(&self) -> &[Fq2Elem] {
        &self.mu
    }

    /// Number of pairs with both coefficients nonzero.
    pub fn pair_count(&self) -> u64 {
        let n = self.ext.order() as u64 - 1;
        n * n
    }

    /// Every pair, ordered by `(alpha, beta)` index.
    pub fn pairs(&self) -> impl Iterator<Item = PairAB> + '_ {
        self.ext.nonzero_elements().flat_map(move |alpha| {
            self.ext
                .nonzero_elements()
                .map(move |beta| PairAB { alpha, beta })
        })
    }

    /// `f(x)` by square-and-multiply.
    pub fn eval_f(&self, pair: &PairAB, x: Fq2Elem) -> Fq2Elem {
        let e = &self.ext;
        x + e.mul(pair.alpha, e.pow(x, self.e_alpha)) + e.mul(pair.beta, e.pow(x, self.e_beta))
    }

    fn power_logs(&self) -> Option<&[(u32, u32)]> {
        let t = self.ext.tables()?;
        Some(self.power_logs.get_or_init(|| {
            let n = (self.ext.order() - 1) as u64;
            (0..self.ext.order())
                .map(|idx| {
                    if idx == 0 {
                        return (0, 0);
                    }
                    let l = t.log[idx] as u64;
                    ((l * self.e_alpha % n) as u32, (l * self.e_beta % n) as u32)
                })
                .collect()
        }))
    }

    /// Whether `f` is injective on GF(q^2), scanning the whole field with a
    /// presence bitmap and stopping at the first collision.
    pub fn is_pp_bruteforce(&self, pair: &PairAB) -> bool {
        let order = self.ext.order();
        let mut seen = vec![0u64; order.div_ceil(64)];
        let mut mark = |idx: usize| {
            let (w, bit) = (idx / 64, 1u64 << (idx % 64));
            let fresh = seen[w] & bit == 0;
            seen[w] |= bit;
            fresh
        };
        match (self.ext.tables(), self.power_logs()) {
            (Some(t), Some(logs)) => {
                let m = self.ext.m();
                let la = t.log[pair.alpha.index(m)] as usize;
                let lb = t.log[pair.beta.index(m)] as usize;
                mark(0);
                (1..order).all(|x| {
                    let (l1, l2) = logs[x];
                    let fx = x as u32 ^ t.exp[la + l1 as usize] ^ t.exp[lb + l2 as usize];
                    mark(fx as usize)
                })
            }
            _ => {
                let m = self.ext.m();
                self.ext.elements().all(|x| mark(self.eval_f(pair, x).index(m)))
            }
        }
    }

    /// `g(u)`, or `None` where the denominator `b u^3 + u + a` vanishes.
    pub fn eval_g(&self, pair: &PairAB, u: Fq2Elem) -> Result<Option<Fq2Elem>> {
        let e = &self.ext;
        if !e.contains(u) || !e.on_mu(u) {
            return Err(Error::NotOnMu);
        }
        Ok(self.g_unchecked(pair, u))
    }

    fn g_unchecked(&self, pair: &PairAB, u: Fq2Elem) -> Option<Fq2Elem> {
        let e = &self.ext;
        let u2 = e.square(u);
        let u3 = e.mul(u2, u);
        let den = e.mul(pair.beta, u3) + u + pair.alpha;
        if den.is_zero() {
            return None;
        }
        let num = e.mul(e.frobenius(pair.alpha), u3) + u2 + e.frobenius(pair.beta);
        Some(e.div(num, den).expect("nonzero denominator"))
    }

    /// Whether `g` has a pole on the roots of unity.
    pub fn has_mu_pole(&self, pair: &PairAB) -> bool {
        let e = &self.ext;
        self.mu
            .iter()
            .any(|&u| (e.mul(pair.beta, e.mul(e.square(u), u)) + u + pair.alpha).is_zero())
    }

    /// Whether `g` is defined everywhere on the (q+1)-st roots of unity and
    /// permutes them.
    pub fn is_perm_mu(&self, pair: &PairAB) -> bool {
        if let Some(sweep) = self.sweep(pair.alpha) {
            return sweep.permutes(pair.beta);
        }
        let m = self.ext.m();
        let mut images = Vec::with_capacity(self.mu.len());
        for &u in &self.mu {
            match self.g_unchecked(pair, u) {
                Some(v) => images.push(v.index(m)),
                None => return false,
            }
        }
        images.sort_unstable();
        images.windows(2).all(|w| w[0] != w[1])
    }

    /// Per-`alpha` precomputation for fast tests over all `beta`; needs log
    /// tables for GF(q^2).
    pub fn sweep(&self, alpha: Fq2Elem) -> Option<MuSweep<'_>> {
        let t = self.ext.tables()?;
        let mu_pos = self.mu_pos.as_deref()?;
        if alpha.is_zero() {
            return None;
        }
        let e = &self.ext;
        let m = e.m();
        let alpha_q = e.frobenius(alpha);
        let mut log_u3 = Vec::with_capacity(self.mu.len());
        let mut lin = Vec::with_capacity(self.mu.len());
        let mut top = Vec::with_capacity(self.mu.len());
        for &u in &self.mu {
            let u2 = e.square(u);
            let u3 = e.mul(u2, u);
            log_u3.push(t.log[u3.index(m)]);
            lin.push((u + alpha).index(m) as u32);
            top.push((e.mul(alpha_q, u3) + u2).index(m) as u32);
        }
        Some(MuSweep {
            m,
            n: (e.order() - 1) as u32,
            log: &t.log,
            exp: &t.exp,
            mu_pos,
            log_u3,
            lin,
            top,
        })
    }
}

/// Table-driven evaluation of `g` for a fixed `alpha`:
/// denominator `b u^3 + (u + a)`, numerator `(a^q u^3 + u^2) + b^q`.
pub struct MuSweep<'a> {
    m: u32,
    n: u32,
    log: &'a [u32],
    exp: &'a [u32],
    mu_pos: &'a [u16],
    log_u3: Vec<u32>,
    lin: Vec<u32>,
    top: Vec<u32>,
}

impl MuSweep<'_> {
    pub fn permutes(&self, beta: Fq2Elem) -> bool {
        if beta.is_zero() {
            return false;
        }
        let lb = self.log[beta.index(self.m)] as usize;
        let beta_q = (beta.a.0 ^ beta.b.0) | (beta.b.0 << self.m);
        let mut seen = [0u64; 5];
        for j in 0..self.lin.len() {
            let den = self.exp[lb + self.log_u3[j] as usize] ^ self.lin[j];
            if den == 0 {
                return false;
            }
            // The numerator is u^3 times the conjugate of the denominator, hence nonzero.
            let num = self.top[j] ^ beta_q;
            let l = self.log[num as usize] + self.n - self.log[den as usize];
            let pos = self.mu_pos[self.exp[l as usize] as usize] as usize;
            debug_assert!(pos != NOT_MU as usize);
            let bit = 1u64 << (pos % 64);
            if seen[pos / 64] & bit != 0 {
                return false;
            }
            seen[pos / 64] |= bit;
        }
        true
    }
}

/// `x^r h(x^((q-1)/d))` over GF(q), `h(x) = sum h_j x^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralTrinomialSpec {
    pub r: u64,
    pub d: u64,
    pub h_coeffs: Vec<FqElem>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn horner(field: &FieldCtx, coeffs: &[FqElem], x: FqElem) -> FqElem {
    coeffs
        .iter()
        .rev()
        .fold(FqElem::ZERO, |acc, &c| field.mul(acc, x) + c)
}

fn check_divisor(field: &FieldCtx, d: u64) -> Result<u64> {
    let order = field.q() as u64 - 1;
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::BadDivisor { d, order });
    }
    Ok(order / d)
}

/// Decides bijectivity of `x^r h(x^s)`, `s = (q-1)/d`, by the roots-of-unity
/// criterion, with the d-th roots generated as powers of `g^s`.
pub fn plz_check_general(field: &FieldCtx, spec: &GeneralTrinomialSpec) -> Result<bool> {
    let s = check_divisor(field, spec.d)?;
    if spec.r == 0 || gcd(spec.r, s) != 1 {
        return Ok(false);
    }
    let zeta = field.pow(field.generator(), s);
    let roots: Vec<FqElem> = std::iter::successors(Some(FqElem::ONE), |&z| Some(field.mul(z, zeta)))
        .take(spec.d as usize)
        .collect();
    let mut images = Vec::with_capacity(roots.len());
    for &z in &roots {
        let v = field.mul(field.pow(z, spec.r), field.pow(horner(field, &spec.h_coeffs, z), s));
        images.push(v);
    }
    let mut sorted_roots = roots;
    sorted_roots.sort_unstable();
    images.sort_unstable();
    Ok(images == sorted_roots)
}

/// Bijectivity of `x^r h(x^s)` by evaluating it everywhere.
pub fn is_pp_general_bruteforce(field: &FieldCtx, spec: &GeneralTrinomialSpec) -> Result<bool> {
    let s = check_divisor(field, spec.d)?;
    let mut seen = vec![false; field.q() as usize];
    for x in field.elements() {
        let v = field.mul(field.pow(x, spec.r), horner(field, &spec.h_coeffs, field.pow(x, s)));
        if std::mem::replace(&mut seen[v.0 as usize], true) {
            return Ok(false);
        }
    }
    Ok(true)
}
