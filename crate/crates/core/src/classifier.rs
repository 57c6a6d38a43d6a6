//! The two trace conditions for `(alpha, beta)`, the five coordinate
//! families `(A, B, C, D)` they correspond to, and exhaustive enumeration.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{ExtCtx, Fq2Elem, FqElem};
use crate::trinomial::{PairAB, TrinomialCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "COND1")]
    Cond1,
    #[serde(rename = "COND2")]
    Cond2,
    #[serde(rename = "NONE")]
    None,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Cond1 => "COND1",
            Condition::Cond2 => "COND2",
            Condition::None => "NONE",
        })
    }
}

/// Label of one of the five coordinate families, `1..=5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct CaseId(u8);

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId(1), CaseId(2), CaseId(3), CaseId(4), CaseId(5)];

    pub fn new(id: u8) -> Result<CaseId> {
        if (1..=5).contains(&id) {
            Ok(CaseId(id))
        } else {
            Err(Error::BadCase(id))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for CaseId {
    type Error = Error;
    fn try_from(id: u8) -> Result<CaseId> {
        CaseId::new(id)
    }
}

impl From<CaseId> for u8 {
    fn from(c: CaseId) -> u8 {
        c.0
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coordinates of a pair in one of the families, with the recovered
/// parameters: `xi`, `eta` where the family has them, and `kbar^4 = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseParams {
    pub case_id: CaseId,
    pub xi: Option<FqElem>,
    pub eta: Option<FqElem>,
    pub kbar: FqElem,
    #[serde(rename = "A")]
    pub a: FqElem,
    #[serde(rename = "B")]
    pub b: FqElem,
    #[serde(rename = "C")]
    pub c: FqElem,
    #[serde(rename = "D")]
    pub d: FqElem,
}

/// `beta = alpha^(q-1)` and `Tr(1 + 1/N(alpha)) = 0`.
pub fn cond1(ext: &ExtCtx, pair: &PairAB) -> bool {
    let f = ext.base();
    if ext.mul(pair.beta, pair.alpha) != ext.frobenius(pair.alpha) {
        return false;
    }
    let inv = f.inv(ext.norm(pair.alpha)).expect("alpha is nonzero");
    f.trace(FqElem::ONE + inv) == 0
}

/// `beta (1 + N(alpha) + N(beta)) + alpha^(2q) = 0`, `N(beta) != 1` and
/// `Tr(N(beta) / N(alpha)) = 0`.
pub fn cond2(ext: &ExtCtx, pair: &PairAB) -> bool {
    let f = ext.base();
    let na = ext.norm(pair.alpha);
    let nb = ext.norm(pair.beta);
    if nb == FqElem::ONE {
        return false;
    }
    let lhs = ext.scale(FqElem::ONE + na + nb, pair.beta) + ext.square(ext.frobenius(pair.alpha));
    if !lhs.is_zero() {
        return false;
    }
    f.trace(f.div(nb, na).expect("alpha is nonzero")) == 0
}

fn in_family(ext: &ExtCtx, case: CaseId, [a, b, c, d]: [FqElem; 4]) -> Option<CaseParams> {
    let f = ext.base();
    let k = ext.k();
    let zero = FqElem::ZERO;
    let one = FqElem::ONE;
    if (a.is_zero() && b.is_zero()) || (c.is_zero() && d.is_zero()) {
        return None;
    }
    let params = |xi, eta| CaseParams {
        case_id: case,
        xi,
        eta,
        kbar: f.quartic_root(k),
        a,
        b,
        c,
        d,
    };
    match case.get() {
        1 => {
            if b != zero || d != zero {
                return None;
            }
            let roots = f.solve_quadratic(one, one, a).ok()?;
            let xi = roots.into_iter().find(|&x| f.square(x) == c)?;
            let ok = xi != zero && xi != one && f.trace(f.div(xi, xi + one).ok()?) == 0;
            ok.then(|| params(Some(xi), None))
        }
        2 => {
            let xi = f.quartic_root(c);
            let eta = f.quartic_root(d);
            if eta.is_zero() {
                return None;
            }
            let (a2, b2, side) = case2_coords(ext, xi, eta);
            if a2 != a || b2 != b || side.is_zero() || side == f.square(eta) {
                return None;
            }
            // side != 0 and side != eta^2 give B != 0 and B != D.
            let t = f.div(b, d).ok()? + one + f.inv(f.square(d)).ok()? + f.div(d, f.square(b)).ok()?;
            (f.trace(t) == 1).then(|| params(Some(xi), Some(eta)))
        }
        3 => {
            let ok = a != zero
                && b == zero
                && d == zero
                && c == one
                && f.trace(one + f.inv(a).ok()?) == 0;
            ok.then(|| params(None, None))
        }
        4 => {
            let ok = !d.is_zero()
                && !b.is_zero()
                && b != d
                && f.mul(a, d) == f.mul(b, c + d + one)
                && f.mul(k, f.square(d)) + f.square(c) + f.mul(c, d) + one == zero
                && f.trace(one + f.div(d, f.square(b)).ok()?) == 0;
            ok.then(|| params(None, None))
        }
        5 => {
            let ok = f.m() % 2 == 1
                && !b.is_zero()
                && d == b
                && c == a + b + one
                && f.square(a) + f.mul(a, b) + f.mul(f.square(b), k) + b == zero;
            ok.then(|| params(None, None))
        }
        _ => unreachable!("CaseId is validated"),
    }
}

/// `A`, `B` of the second family and the factor `eta^2 kbar + xi^2 + xi eta + 1`.
fn case2_coords(ext: &ExtCtx, xi: FqElem, eta: FqElem) -> (FqElem, FqElem, FqElem) {
    let f = ext.base();
    let kbar = f.quartic_root(ext.k());
    let eta2 = f.square(eta);
    let side = f.mul(eta2, kbar) + f.square(xi) + f.mul(xi, eta) + FqElem::ONE;
    let first = f.square(f.mul(eta, kbar) + eta + xi);
    let second = f.mul(eta2, kbar) + f.mul(eta, xi) + f.square(xi) + FqElem::ONE;
    (f.mul(first, second), f.mul(eta2, side), side)
}

/// Whether `(A, B, C, D)` belongs to the given family.
pub fn case_predicate(ext: &ExtCtx, case: CaseId, coords: [FqElem; 4]) -> bool {
    in_family(ext, case, coords).is_some()
}

/// The family membership with recovered parameters.
pub fn case_witness(ext: &ExtCtx, case: CaseId, coords: [FqElem; 4]) -> Option<CaseParams> {
    in_family(ext, case, coords)
}

/// All tuples of a family, produced from its parameterization over every
/// value of the free parameters, sorted.
pub fn case_generate(ext: &ExtCtx, case: CaseId) -> Vec<[FqElem; 4]> {
    let f = ext.base();
    let k = ext.k();
    let one = FqElem::ONE;
    let zero = FqElem::ZERO;
    let mut out = Vec::new();
    match case.get() {
        1 => {
            for xi in f.elements().filter(|&x| x != zero && x != one) {
                if f.trace(f.div(xi, xi + one).expect("xi != 1")) == 0 {
                    let c = f.square(xi);
                    out.push([c + xi, zero, c, zero]);
                }
            }
        }
        2 => {
            for xi in f.elements() {
                for eta in f.nonzero_elements() {
                    let (a, b, side) = case2_coords(ext, xi, eta);
                    if side.is_zero() || side == f.square(eta) {
                        continue;
                    }
                    let c = f.square(f.square(xi));
                    let d = f.square(f.square(eta));
                    let t = f.div(b, d).expect("d != 0")
                        + one
                        + f.inv(f.square(d)).expect("d != 0")
                        + f.div(d, f.square(b)).expect("b != 0");
                    if f.trace(t) == 1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        3 => {
            for a in f.nonzero_elements() {
                if f.trace(one + f.inv(a).expect("a != 0")) == 0 {
                    out.push([a, zero, one, zero]);
                }
            }
        }
        4 => {
            for b in f.nonzero_elements() {
                for d in f.nonzero_elements().filter(|&d| d != b) {
                    if f.trace(one + f.div(d, f.square(b)).expect("b != 0")) != 0 {
                        continue;
                    }
                    // C^2 + D C + (k D^2 + 1) = 0
                    let roots = f
                        .solve_quadratic(one, d, f.mul(k, f.square(d)) + one)
                        .expect("leading coefficient is 1");
                    for c in roots {
                        let a = f.div(f.mul(b, c + d + one), d).expect("d != 0");
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        5 => {
            if f.m() % 2 == 1 {
                for b in f.nonzero_elements() {
                    let roots = f
                        .solve_quadratic(one, b, f.mul(f.square(b), k) + b)
                        .expect("leading coefficient is 1");
                    for a in roots {
                        out.push([a, b, a + b + one, b]);
                    }
                }
            }
        }
        _ => unreachable!("CaseId is validated"),
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Condition tag, the family that tag points to, and the family's
/// parameters when the coordinates really satisfy it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub condition: Condition,
    pub case_id: Option<CaseId>,
    pub witness: Option<CaseParams>,
}

impl Classification {
    pub fn is_positive(&self) -> bool {
        self.condition != Condition::None
    }

    /// The tag's family and the coordinates agree.
    pub fn is_consistent(&self) -> bool {
        match self.case_id {
            None => self.condition == Condition::None && self.witness.is_none(),
            Some(c) => self.witness.is_some_and(|w| w.case_id == c),
        }
    }
}

/// Condition verdict and family. The family is read off the tag: under the
/// second condition by whether `beta` lies in GF(q) (families 1, 2); under the
/// first by `beta` in GF(q) (family 3), else by `alpha + alpha^q` against
/// `beta + beta^q` (families 4, 5).
pub fn classify(ext: &ExtCtx, pair: &PairAB) -> Result<Classification> {
    if pair.alpha.is_zero() || pair.beta.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let condition = if cond1(ext, pair) {
        Condition::Cond1
    } else if cond2(ext, pair) {
        Condition::Cond2
    } else {
        Condition::None
    };
    let in_base = pair.beta.in_base();
    let trace_alpha = pair.alpha + ext.frobenius(pair.alpha);
    let trace_beta = pair.beta + ext.frobenius(pair.beta);
    let case = match condition {
        Condition::None => None,
        Condition::Cond2 => Some(if in_base { 1 } else { 2 }),
        Condition::Cond1 if in_base => Some(3),
        Condition::Cond1 if trace_alpha != trace_beta => Some(4),
        Condition::Cond1 => Some(5),
    }
    .map(|c| CaseId::new(c).expect("1..=5"));
    let witness = case.and_then(|c| case_witness(ext, c, pair.coords()));
    Ok(Classification {
        condition,
        case_id: case,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Injectivity of the trinomial on all of GF(q^2).
    Bruteforce,
    /// Bijectivity of the fractional map on the (q+1)-st roots of unity.
    Mu,
    /// Either trace condition.
    Condition,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Bruteforce => "bruteforce",
            Mode::Mu => "mu",
            Mode::Condition => "condition",
        })
    }
}

/// Applies `test` to every `beta` for each `alpha`, in parallel over `alpha`.
/// Results come back ordered by `(alpha, beta)` index.
fn sweep<T: Send>(
    ctx: &TrinomialCtx,
    per_pair: impl Fn(&TrinomialCtx, &PairAB, Option<&crate::trinomial::MuSweep<'_>>) -> Option<T> + Sync,
) -> Vec<T> {
    let ext = ctx.ext();
    let m = ext.m();
    let chunks: Vec<Vec<T>> = (1..ext.order())
        .into_par_iter()
        .map(|ai| {
            let alpha = Fq2Elem::from_index(ai, m);
            let mu = ctx.sweep(alpha);
            ext.nonzero_elements()
                .filter_map(|beta| per_pair(ctx, &PairAB { alpha, beta }, mu.as_ref()))
                .collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

fn mu_test(ctx: &TrinomialCtx, pair: &PairAB, fast: Option<&crate::trinomial::MuSweep<'_>>) -> bool {
    match fast {
        Some(s) => s.permutes(pair.beta),
        None => ctx.is_perm_mu(pair),
    }
}

fn mode_test(ctx: &TrinomialCtx, mode: Mode, pair: &PairAB, fast: Option<&crate::trinomial::MuSweep<'_>>) -> bool {
    match mode {
        Mode::Bruteforce => ctx.is_pp_bruteforce(pair),
        Mode::Mu => mu_test(ctx, pair, fast),
        Mode::Condition => cond1(ctx.ext(), pair) || cond2(ctx.ext(), pair),
    }
}

/// All pairs passing the selected test, ordered by `(alpha, beta)` index.
pub fn enumerate_pp_pairs(ctx: &TrinomialCtx, mode: Mode) -> Vec<PairAB> {
    sweep(ctx, |ctx, pair, fast| mode_test(ctx, mode, pair, fast).then_some(*pair))
}

/// One pair of an enumeration run with its verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair: PairAB,
    pub permutes: bool,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub q: u32,
    pub mode: Mode,
    pub total_pairs_checked: u64,
    pub pp_count: u64,
    pub cond1_count: u64,
    pub cond2_count: u64,
    /// Pairs where the selected test and its reference disagree: the trace
    /// conditions for `bruteforce` and `mu`, the roots-of-unity test for
    /// `condition`.
    pub mismatches: u64,
    /// Pairs whose condition tag is not matched by the family predicate.
    pub inconsistent_cases: u64,
}

/// Full cross-checked sweep: every pair that passes either the selected test
/// or its reference is recorded.
pub fn enumerate_with_summary(ctx: &TrinomialCtx, mode: Mode) -> (Vec<PairRecord>, EnumerationSummary) {
    let ext = ctx.ext();
    let records = sweep(ctx, |ctx, pair, fast| {
        let permutes = mode_test(ctx, mode, pair, fast);
        let reference = match mode {
            Mode::Condition => mu_test(ctx, pair, fast),
            _ => cond1(ext, pair) || cond2(ext, pair),
        };
        if !permutes && !reference {
            return None;
        }
        let classification = classify(ext, pair).expect("pairs are nonzero");
        Some((
            PairRecord {
                pair: *pair,
                permutes,
                classification,
            },
            permutes != reference,
        ))
    });
    let mut summary = EnumerationSummary {
        q: ext.q(),
        mode,
        total_pairs_checked: ctx.pair_count(),
        pp_count: 0,
        cond1_count: 0,
        cond2_count: 0,
        mismatches: 0,
        inconsistent_cases: 0,
    };
    for (r, mismatch) in &records {
        summary.pp_count += r.permutes as u64;
        summary.mismatches += *mismatch as u64;
        match r.classification.condition {
            Condition::Cond1 => summary.cond1_count += 1,
            Condition::Cond2 => summary.cond2_count += 1,
            Condition::None => {}
        }
        summary.inconsistent_cases += !r.classification.is_consistent() as u64;
    }
    (records.into_iter().map(|(r, _)| r).collect(), summary)
}

/// CSV with columns `q, alpha_hex_a, alpha_hex_b, beta_hex_a, beta_hex_b,
/// condition, case_id`.
pub fn write_csv<W: Write>(out: W, q: u32, rows: &[(PairAB, Classification)]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "alpha_hex_a", "alpha_hex_b", "beta_hex_a", "beta_hex_b", "condition", "case_id"])?;
    for (pair, cls) in rows {
        w.write_record([
            q.to_string(),
            pair.alpha.a.to_hex(),
            pair.alpha.b.to_hex(),
            pair.beta.a.to_hex(),
            pair.beta.b.to_hex(),
            cls.condition.to_string(),
            cls.case_id.map(|c| c.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()
}
