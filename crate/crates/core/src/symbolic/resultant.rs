//! Sylvester resultants over the ring GF(2)[x, y, A, ..., e].

use super::monomial::Var;
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// How [`resultant_with`] evaluates the Sylvester determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultantMethod {
    /// Closed form when either input is linear in the variable, reduction
    /// otherwise. On the obstruction chains this is orders of magnitude faster
    /// than elimination on the full Sylvester matrix.
    Auto,
    /// Fraction-free (Bareiss) elimination on the Sylvester matrix.
    Bareiss,
    /// Cofactor expansion of the Sylvester matrix; only for small sizes.
    Cofactor,
    /// Euclidean reduction by pseudo-remainders with exact division by
    /// powers of the leading coefficient.
    Reduction,
}

/// Largest matrix size accepted by cofactor expansion.
pub const MAX_COFACTOR_SIZE: usize = 6;

/// The `(deg u + deg v)`-square Sylvester matrix of `u` and `v` in `var`.
pub fn sylvester_matrix(u: &MultiPoly, v: &MultiPoly, var: Var) -> Result<Vec<Vec<MultiPoly>>> {
    let cu = positive_degree_coeffs(u, var)?;
    let cv = positive_degree_coeffs(v, var)?;
    let n = cu.len() - 1;
    let m = cv.len() - 1;
    let size = n + m;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..m {
        let mut row = vec![MultiPoly::zero(); size];
        for (j, c) in cu.iter().rev().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..n {
        let mut row = vec![MultiPoly::zero(); size];
        for (j, c) in cv.iter().rev().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

fn positive_degree_coeffs(p: &MultiPoly, var: Var) -> Result<Vec<MultiPoly>> {
    match p.degree_in(var) {
        Some(d) if d > 0 => Ok(p.coeffs_in(var)),
        _ => Err(Error::ZeroDegree(var.name().to_string())),
    }
}

/// Determinant by fraction-free elimination: every division is exact.
pub fn det_bareiss(mut mat: Vec<Vec<MultiPoly>>) -> Result<MultiPoly> {
    let n = mat.len();
    if n == 0 {
        return Ok(MultiPoly::one());
    }
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            // Row swaps only flip the sign, which is invisible in characteristic 2.
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => mat.swap(k, r),
                None => return Ok(MultiPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&mat[k][k] * &mat[i][j]) + &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = if prev.is_one() { t } else { t.exact_div(&prev)? };
            }
        }
        prev = mat[k][k].clone();
    }
    Ok(mat[n - 1][n - 1].clone())
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(mat: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = mat.len();
    match n {
        0 => MultiPoly::one(),
        1 => mat[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero();
            for col in 0..n {
                if mat[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = mat[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, c)| c.clone())
                            .collect()
                    })
                    .collect();
                acc = &acc + &(&mat[0][col] * &det_cofactor(&minor));
            }
            acc
        }
    }
}

/// `Res(u, v)` with respect to `var`; both inputs need positive degree in `var`.
pub fn resultant(u: &MultiPoly, v: &MultiPoly, var: Var) -> Result<MultiPoly> {
    resultant_with(u, v, var, ResultantMethod::Auto)
}

pub fn resultant_with(u: &MultiPoly, v: &MultiPoly, var: Var, method: ResultantMethod) -> Result<MultiPoly> {
    let cu = positive_degree_coeffs(u, var)?;
    let cv = positive_degree_coeffs(v, var)?;
    match method {
        ResultantMethod::Bareiss => det_bareiss(sylvester_matrix(u, v, var)?),
        ResultantMethod::Cofactor => {
            let size = cu.len() + cv.len() - 2;
            if size > MAX_COFACTOR_SIZE {
                det_bareiss(sylvester_matrix(u, v, var)?)
            } else {
                Ok(det_cofactor(&sylvester_matrix(u, v, var)?))
            }
        }
        ResultantMethod::Reduction => reduce(cu, cv),
        ResultantMethod::Auto => {
            if cv.len() == 2 {
                Ok(linear_resultant(&cu, &cv))
            } else if cu.len() == 2 {
                Ok(linear_resultant(&cv, &cu))
            } else {
                reduce(cu, cv)
            }
        }
    }
}

/// Resultant following the convention that a polynomial of degree 0 in
/// `var` contributes its `deg`-th power: `Res(c, v) = c^deg(v)`.
pub fn eliminate(u: &MultiPoly, v: &MultiPoly, var: Var) -> Result<MultiPoly> {
    let du = u.degree_in(var);
    let dv = v.degree_in(var);
    match (du, dv) {
        (None, _) | (_, None) => Ok(MultiPoly::zero()),
        (Some(0), Some(0)) => Ok(MultiPoly::one()),
        (Some(0), Some(d)) => Ok(u.pow(d)),
        (Some(d), Some(0)) => Ok(v.pow(d)),
        _ => resultant(u, v, var),
    }
}

/// `Res(u, v)` for `v = v1 X + v0`: the sum of `u_j v0^j v1^(n-j)`.
fn linear_resultant(cu: &[MultiPoly], cv: &[MultiPoly]) -> MultiPoly {
    let n = cu.len() - 1;
    let (v0, v1) = (&cv[0], &cv[1]);
    let mut v1_pows = vec![MultiPoly::one()];
    for _ in 0..n {
        let next = v1_pows.last().expect("nonempty").mul(v1);
        v1_pows.push(next);
    }
    let mut acc = cu[n].clone();
    for j in (0..n).rev() {
        acc = &(&acc * v0) + &(&cu[j] * &v1_pows[n - j]);
    }
    acc
}

fn degree(c: &[MultiPoly]) -> Option<usize> {
    c.iter().rposition(|p| !p.is_zero())
}

/// `g^s f = Q G + R` by repeated leading-term cancellation; returns `R` and `s`.
fn pseudo_remainder(f: &[MultiPoly], g: &[MultiPoly]) -> (Vec<MultiPoly>, u32) {
    let m = degree(g).expect("nonzero divisor");
    let lc = &g[m];
    let mut r: Vec<MultiPoly> = f.to_vec();
    let mut steps = 0;
    while let Some(d) = degree(&r) {
        if d < m {
            break;
        }
        let top = r[d].clone();
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c = &*c * lc;
            }
        }
        for (j, gj) in g.iter().enumerate() {
            if !gj.is_zero() {
                r[d - m + j] = &r[d - m + j] + &(&top * gj);
            }
        }
        debug_assert!(r[d].is_zero());
        r.truncate(d);
        steps += 1;
    }
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    (r, steps)
}

/// Euclidean evaluation. With `deg F = n >= deg G = m`, `lc(G) = g` and
/// `g^s F = Q G + R`, `deg R = r`:  `Res(G, F) = Res(G, R) g^(n - r - s m)`.
fn reduce(f: Vec<MultiPoly>, g: Vec<MultiPoly>) -> Result<MultiPoly> {
    let (Some(n0), Some(m0)) = (degree(&f), degree(&g)) else {
        return Ok(MultiPoly::zero());
    };
    let (f, g, n, m) = if n0 >= m0 { (f, g, n0, m0) } else { (g, f, m0, n0) };
    if m == 0 {
        return Ok(g[0].pow(n as u32));
    }
    if m == 1 {
        return Ok(linear_resultant(&f[..=n], &g[..=1]));
    }
    let (r, s) = pseudo_remainder(&f[..=n], &g[..=m]);
    let Some(rdeg) = degree(&r) else {
        return Ok(MultiPoly::zero());
    };
    let sub = reduce(g[..=m].to_vec(), r)?;
    let lc = &g[m];
    let exp = n as i64 - rdeg as i64 - (s as i64) * (m as i64);
    if exp >= 0 {
        Ok(&sub * &lc.pow(exp as u32))
    } else {
        let mut out = sub;
        // Divide one factor at a time to keep divisors small.
        for _ in 0..(-exp) {
            out = out.exact_div(lc)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn textbook_examples() {
        assert!(resultant(&p("x^2 + x"), &p("x + 1"), Var::X).unwrap().is_zero());
        assert_eq!(resultant(&p("x^2 + x + 1"), &p("x + 1"), Var::X).unwrap(), p("1"));
        assert_eq!(resultant(&p("x + a"), &p("x + b"), Var::X).unwrap(), p("a + b"));
    }

    #[test]
    fn degree_zero_rejected() {
        assert_eq!(
            resultant(&p("A + 1"), &p("x + 1"), Var::X),
            Err(Error::ZeroDegree("x".into()))
        );
        assert_eq!(eliminate(&p("A + 1"), &p("x^2 + 1"), Var::X).unwrap(), p("A^2 + 1"));
        assert_eq!(eliminate(&p("A*x + B"), &p("x"), Var::X).unwrap(), p("B"));
    }

    #[test]
    fn methods_agree() {
        let cases = [
            ("x^3 + A*x + B", "x^2 + C*x + D"),
            ("A*x^2 + B*x + k", "C*x^3 + x + D"),
            ("x^4 + A", "x^2 + B*x + 1"),
            ("(x + A)*(x + B)*(x+C)", "(x + A)*(x + D)"),
            ("k*x^5 + A*x^2 + 1", "B*x^2 + C"),
        ];
        for (u, v) in cases {
            let (u, v) = (p(u), p(v));
            let reference = det_cofactor(&sylvester_matrix(&u, &v, Var::X).unwrap());
            for method in [
                ResultantMethod::Auto,
                ResultantMethod::Bareiss,
                ResultantMethod::Cofactor,
                ResultantMethod::Reduction,
            ] {
                assert_eq!(resultant_with(&u, &v, Var::X, method).unwrap(), reference, "{method:?}");
            }
        }
    }

    #[test]
    fn common_root_forces_zero() {
        let u = p("(x + A)*(x^2 + B*x + C)");
        let v = p("(x + A)*(x + k)");
        assert!(resultant(&u, &v, Var::X).unwrap().is_zero());
    }
}
