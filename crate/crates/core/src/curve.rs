//! The quartic `L(x, y) = sum gamma[j][l] x^j y^l` whose zeros off `x = y`
//! are collisions of the fractional map, with point counts and the
//! closed-form splitting analysis.

use serde::{Deserialize, Serialize};

use crate::classifier::{case_witness, CaseId, CaseParams};
use crate::error::{Error, Result};
use crate::fields::{ExtCtx, FieldCtx, FqElem};

/// `gamma[j][l]` is the coefficient of `x^j y^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCoeffs {
    pub gamma: [[FqElem; 3]; 3],
}

impl CurveCoeffs {
    #[inline]
    pub fn get(&self, j: usize, l: usize) -> FqElem {
        self.gamma[j][l]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|j| (0..3).all(|l| self.gamma[j][l] == self.gamma[l][j]))
    }

    pub fn eval(&self, f: &FieldCtx, x: FqElem, y: FqElem) -> FqElem {
        let row = |j: usize| {
            let g = &self.gamma[j];
            f.mul(f.mul(g[2], y) + g[1], y) + g[0]
        };
        f.mul(f.mul(row(2), x) + row(1), x) + row(0)
    }
}

/// The nine coefficients at `alpha = A + iB`, `beta = C + iD`. With
/// `n = A^2 + AB + B^2 k + C^2 + CD + D^2 k`:
/// `g22 = n + D + 1`, `g21 = n + B + 1`, `g11 = n + 1`,
/// `g20 = (k + 1) n + A + C + (k + 1) D + k`, `g10 = k n + A + kB + k`,
/// `g00 = k^2 n + C + (k^2 + k + 1) D + k^2`.
pub fn gamma_coeffs(ext: &ExtCtx, a: FqElem, b: FqElem, c: FqElem, d: FqElem) -> CurveCoeffs {
    let f = ext.base();
    let k = ext.k();
    let one = FqElem::ONE;
    let k2 = f.square(k);
    let n = f.mul(a, a + b) + f.mul(k, f.square(b)) + f.mul(c, c + d) + f.mul(k, f.square(d));
    let g22 = n + d + one;
    let g21 = n + b + one;
    let g11 = n + one;
    let g20 = f.mul(k + one, n) + a + c + f.mul(k + one, d) + k;
    let g10 = f.mul(k, n) + a + f.mul(k, b) + k;
    let g00 = f.mul(k2, n) + c + f.mul(k2 + k + one, d) + k2;
    CurveCoeffs {
        gamma: [[g00, g10, g20], [g10, g11, g21], [g20, g21, g22]],
    }
}

/// `|{(x, y) in GF(q)^2 : L(x, y) = 0, x != y}|`, row by row with the
/// coefficients in `y` evaluated once per row.
pub fn count_points_off_diagonal(f: &FieldCtx, coeffs: &CurveCoeffs) -> u64 {
    let mut count = 0;
    scan_rows(f, coeffs, |_, _| {
        count += 1;
        true
    });
    count
}

/// Whether any off-diagonal zero exists; stops at the first one.
pub fn has_points_off_diagonal(f: &FieldCtx, coeffs: &CurveCoeffs) -> bool {
    let mut found = false;
    scan_rows(f, coeffs, |_, _| {
        found = true;
        false
    });
    found
}

/// Calls `hit(x, y)` on off-diagonal zeros until it returns false.
fn scan_rows(f: &FieldCtx, coeffs: &CurveCoeffs, mut hit: impl FnMut(FqElem, FqElem) -> bool) {
    let g = &coeffs.gamma;
    for x in f.elements() {
        let x2 = f.square(x);
        let c = |l: usize| f.mul(g[2][l], x2) + f.mul(g[1][l], x) + g[0][l];
        let (c2, c1, c0) = (c(2), c(1), c(0));
        for y in f.elements() {
            if y != x && (f.mul(f.mul(c2, y) + c1, y) + c0).is_zero() && !hit(x, y) {
                return;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SplitType {
    FourLines,
    TwoConicsSwapped,
    CubicHasRationalComponent,
    DegenerateConicPair,
    NotSplitNonrational,
    HasRationalComponent,
}

/// The verdict is one of `NotSplitNonrational` (every component is defined
/// only over an extension), `CubicHasRationalComponent` or
/// `HasRationalComponent`. `shape` names the factorization pattern when the
/// curve was recognised as a product of lines or conics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub split_type: SplitType,
    pub shape: Option<SplitType>,
    pub case_id: Option<CaseId>,
    pub witness_params: Option<CaseParams>,
}

impl SplitReport {
    fn rational(shape: Option<SplitType>) -> SplitReport {
        SplitReport {
            split_type: SplitType::HasRationalComponent,
            shape,
            case_id: None,
            witness_params: None,
        }
    }

    fn nonrational(ext: &ExtCtx, shape: SplitType, case: u8, coords: [FqElem; 4]) -> SplitReport {
        let case = CaseId::new(case).expect("1..=5");
        SplitReport {
            split_type: SplitType::NotSplitNonrational,
            shape: Some(shape),
            case_id: Some(case),
            witness_params: case_witness(ext, case, coords),
        }
    }

    pub fn is_nonrational(&self) -> bool {
        self.split_type == SplitType::NotSplitNonrational
    }
}

/// Decides whether every component of the curve is defined only over an
/// extension of GF(q), following the closed-form splitting conditions.
pub fn split_analysis(ext: &ExtCtx, a: FqElem, b: FqElem, c: FqElem, d: FqElem) -> Result<SplitReport> {
    if (a.is_zero() && b.is_zero()) || (c.is_zero() && d.is_zero()) {
        return Err(Error::ZeroCoefficient);
    }
    let f = ext.base();
    let k = ext.k();
    let one = FqElem::ONE;
    let coords = [a, b, c, d];
    let has_root = |qa: FqElem, qb: FqElem, qc: FqElem| {
        f.solve_quadratic(qa, qb, qc).map_or(qc.is_zero(), |r| !r.is_empty())
    };
    let g22 = gamma_coeffs(ext, a, b, c, d).get(2, 2);

    if g22.is_zero() {
        if b != d {
            return Ok(SplitReport {
                split_type: SplitType::CubicHasRationalComponent,
                shape: None,
                case_id: None,
                witness_params: None,
            });
        }
        // Here (A + C + 1)(A + B + C + 1) = 0. Only the conic branch with
        // B != 0 can split, into two lines through a point with slopes the
        // primitive cube roots of unity: conjugate exactly when m is odd.
        let splits = !b.is_zero()
            && c == a + b + one
            && f.square(a) + f.mul(a, b) + f.mul(f.square(b), k) + b == FqElem::ZERO;
        return Ok(match (splits, f.m() % 2 == 1) {
            (true, true) => SplitReport::nonrational(ext, SplitType::DegenerateConicPair, 5, coords),
            (true, false) => SplitReport::rational(Some(SplitType::DegenerateConicPair)),
            (false, _) => SplitReport::rational(None),
        });
    }

    if b == d {
        if b.is_zero() {
            // Four lines: A = s^2 + s, C = s^2.
            let s = f.sqrt(c);
            if a == c + s {
                let s1 = s + one;
                let lines_rational = has_root(s1, s1, f.mul(s, k) + s + k);
                return Ok(if lines_rational {
                    SplitReport::rational(Some(SplitType::FourLines))
                } else {
                    SplitReport::nonrational(ext, SplitType::FourLines, 1, coords)
                });
            }
            // Two swapped conics: C = 1 and A s^2 + A s + A + 1 = 0 with s in GF(q).
            if c == one {
                return Ok(if has_root(a, a, a + one) {
                    SplitReport::nonrational(ext, SplitType::TwoConicsSwapped, 3, coords)
                } else {
                    SplitReport::rational(None)
                });
            }
        }
        return Ok(SplitReport::rational(None));
    }

    if d.is_zero() || b.is_zero() {
        return Ok(SplitReport::rational(None));
    }
    let d2 = f.square(d);
    let d4 = f.square(d2);
    let b2 = f.square(b);
    // Four lines: A D^2 = B^3 + BCD + BD^2 + BD, k D^4 = B^4 + C^2 D^2 + C D^3 + D^2.
    let four_a = f.mul(a, d2) == f.mul(b, b2 + f.mul(c, d) + d2 + d);
    let four_k = f.mul(k, d4) == f.square(b2) + f.mul(f.square(c), d2) + f.mul(c, f.mul(d2, d)) + d2;
    if four_a && four_k {
        let b4 = f.square(b2);
        let r = f.mul(b4, b + d)
            + f.mul(b2, f.mul(d2, d))
            + f.mul(b, f.mul(f.square(c), d2))
            + f.mul(b, f.mul(c, f.mul(d2, d)))
            + f.mul(b, d2)
            + f.mul(f.square(c), f.mul(d2, d))
            + f.mul(d4, d)
            + d4
            + f.mul(d2, d);
        let lead = f.mul(d4, d + b);
        return Ok(if has_root(lead, f.mul(b, d4), r) {
            SplitReport::rational(Some(SplitType::FourLines))
        } else {
            SplitReport::nonrational(ext, SplitType::FourLines, 2, coords)
        });
    }
    // Two swapped conics: A D = BC + BD + B, k D^2 = C^2 + CD + 1, and
    // (B^2 + D^2) s^2 + (B^2 + BD) s + (B^2 + BC + BD + B + C^2 + D^2 + D + 1) = 0 solvable.
    let conic_a = f.mul(a, d) == f.mul(b, c + d + one);
    let conic_k = f.mul(k, d2) == f.square(c) + f.mul(c, d) + one;
    if conic_a && conic_k {
        let q0 = b2 + f.mul(b, c) + f.mul(b, d) + b + f.square(c) + d2 + d + one;
        return Ok(if has_root(b2 + d2, b2 + f.mul(b, d), q0) {
            SplitReport::nonrational(ext, SplitType::TwoConicsSwapped, 4, coords)
        } else {
            SplitReport::rational(None)
        });
    }
    Ok(SplitReport::rational(None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: u32) -> FqElem {
        FqElem(v)
    }

    #[test]
    fn identity_pair_curve() {
        let ext = ExtCtx::with_degree(3).unwrap();
        let g = gamma_coeffs(&ext, e(1), e(0), e(1), e(0));
        assert_eq!(g.get(2, 2), e(1));
        assert!(g.is_symmetric());
        assert_eq!(count_points_off_diagonal(ext.base(), &g), 0);
        let r = split_analysis(&ext, e(1), e(0), e(1), e(0)).unwrap();
        assert_eq!(r.split_type, SplitType::NotSplitNonrational);
        assert_eq!(r.case_id.map(|c| c.get()), Some(3));
        assert!(r.witness_params.is_some());
    }

    #[test]
    fn symmetry_and_gamma_relation() {
        let ext = ExtCtx::with_degree(4).unwrap();
        let f = ext.base();
        for a in f.elements().step_by(3) {
            for b in f.elements().step_by(5) {
                for c in f.elements().step_by(2) {
                    for d in f.elements().step_by(7) {
                        let g = gamma_coeffs(&ext, a, b, c, d);
                        assert!(g.is_symmetric());
                        assert_eq!(g.get(2, 2) + g.get(2, 1), b + d);
                    }
                }
            }
        }
    }

    #[test]
    fn count_is_symmetric_and_matches_eval() {
        let ext = ExtCtx::with_degree(3).unwrap();
        let f = ext.base();
        let g = gamma_coeffs(&ext, e(3), e(5), e(2), e(6));
        let direct = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| x != y && g.eval(f, x, y).is_zero())
            .count() as u64;
        let swapped = f
            .elements()
            .flat_map(|y| f.elements().map(move |x| (x, y)))
            .filter(|&(x, y)| x != y && g.eval(f, y, x).is_zero())
            .count() as u64;
        assert_eq!(count_points_off_diagonal(f, &g), direct);
        assert_eq!(direct, swapped);
        assert_eq!(has_points_off_diagonal(f, &g), direct > 0);
    }

    #[test]
    fn degenerate_pair_depends_on_parity() {
        for (m, nonrational) in [(3, true), (4, false), (5, true)] {
            let ext = ExtCtx::with_degree(m).unwrap();
            let f = ext.base();
            let k = ext.k();
            let mut seen = 0;
            for b in f.nonzero_elements() {
                for a in f.solve_quadratic(FqElem::ONE, b, f.mul(f.square(b), k) + b).unwrap() {
                    let r = split_analysis(&ext, a, b, a + b + FqElem::ONE, b).unwrap();
                    assert_eq!(r.shape, Some(SplitType::DegenerateConicPair));
                    assert_eq!(r.is_nonrational(), nonrational, "m = {m}");
                    seen += 1;
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn nonrational_split_matches_conditions() {
        for m in [3, 4, 5] {
            let ext = ExtCtx::with_degree(m).unwrap();
            let f = ext.base();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        for d in f.elements() {
                            let Ok(pair) = crate::trinomial::PairAB::from_coords(a, b, c, d) else {
                                continue;
                            };
                            let cls = crate::classifier::classify(&ext, &pair).unwrap();
                            let r = split_analysis(&ext, a, b, c, d).unwrap();
                            assert_eq!(r.is_nonrational(), cls.is_positive(), "m={m} {a} {b} {c} {d}");
                            if cls.is_positive() && cls.condition == crate::classifier::Condition::Cond2 {
                                assert_eq!(r.case_id, cls.case_id, "m={m} {a} {b} {c} {d}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_coefficient() {
        let ext = ExtCtx::with_degree(3).unwrap();
        assert_eq!(
            split_analysis(&ext, e(0), e(0), e(1), e(0)),
            Err(Error::ZeroCoefficient)
        );
    }

    #[test]
    fn report_json() {
        let ext = ExtCtx::with_degree(3).unwrap();
        let r = split_analysis(&ext, e(1), e(0), e(1), e(0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        assert_eq!(v["split_type"], "NOT_SPLIT_NONRATIONAL");
        assert_eq!(v["shape"], "TWO_CONICS_SWAPPED");
        assert_eq!(v["case_id"], 3);
        assert_eq!(v["witness_params"]["A"], "0x1");
    }
}
