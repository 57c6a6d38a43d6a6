use proptest::prelude::*;

use permtri::classifier::{classify, cond1, cond2};
use permtri::curve::{count_points_off_diagonal, gamma_coeffs, split_analysis};
use permtri::fields::{ExtCtx, FieldCtx, Fq2Elem, FqElem};
use permtri::symbolic::{resultant_with, MultiPoly, ResultantMethod, Var};
use permtri::trinomial::{PairAB, TrinomialCtx};

const CASES: u32 = 1000;

fn field() -> impl Strategy<Value = FieldCtx> {
    (2u32..=24).prop_map(|m| FieldCtx::new(m, None).unwrap())
}

fn field_with<const N: usize>() -> impl Strategy<Value = (FieldCtx, [FqElem; N])> {
    field().prop_flat_map(|f| {
        let q = f.q();
        (Just(f), prop::array::uniform::<_, N>((0..q).prop_map(FqElem)))
    })
}

fn ext_with<const N: usize>() -> impl Strategy<Value = (ExtCtx, [Fq2Elem; N])> {
    (2u32..=12).prop_flat_map(|m| {
        let q = 1u32 << m;
        let elem = (0..q, 0..q).prop_map(|(a, b)| Fq2Elem::new(a, b));
        (Just(ExtCtx::with_degree(m).unwrap()), prop::array::uniform::<_, N>(elem))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn field_axioms((f, [x, y, z]) in field_with::<3>()) {
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, y + z), f.mul(x, y) + f.mul(x, z));
        prop_assert_eq!(f.square(x + y), f.square(x) + f.square(y));
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), FqElem::ONE);
            prop_assert_eq!(f.mul(f.div(y, x).unwrap(), x), y);
        }
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant((f, [x, y]) in field_with::<2>()) {
        prop_assert_eq!(f.trace(x + y), f.trace(x) ^ f.trace(y));
        prop_assert_eq!(f.trace(f.square(x)), f.trace(x));
    }

    #[test]
    fn roots_of_quadratics((f, [a, b, c]) in field_with::<3>()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let roots = f.solve_quadratic(a, b, c).unwrap();
        let t = f.trace(f.div(f.mul(a, c), f.square(b)).unwrap());
        prop_assert_eq!(roots.len(), if t == 0 { 2 } else { 0 });
        for r in roots {
            prop_assert!((f.mul(a, f.square(r)) + f.mul(b, r) + c).is_zero());
        }
    }

    #[test]
    fn square_and_quartic_roots((f, [x]) in field_with::<1>()) {
        prop_assert_eq!(f.square(f.sqrt(x)), x);
        prop_assert_eq!(f.square(f.square(f.quartic_root(x))), x);
    }

    #[test]
    fn frobenius_and_norm((ext, [u, v]) in ext_with::<2>()) {
        prop_assert_eq!(ext.frobenius(ext.frobenius(u)), u);
        prop_assert_eq!(ext.frobenius(u), ext.pow(u, ext.q() as u64));
        prop_assert_eq!(ext.norm(ext.mul(u, v)), ext.base().mul(ext.norm(u), ext.norm(v)));
        prop_assert!(ext.mul(u, ext.frobenius(u)).in_base());
    }

    #[test]
    fn phi_lands_on_roots_of_unity((ext, [u]) in ext_with::<1>()) {
        if ext.on_mu(u) {
            let x = ext.phi_inverse(u).unwrap();
            prop_assert_eq!(ext.phi_map(x), u);
        }
        let w = ext.pow(u, ext.q() as u64 - 1);
        prop_assert!(u.is_zero() || ext.on_mu(w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn curve_is_symmetric_and_split_agrees(m in 3u32..=5, seed in any::<[u32; 4]>()) {
        let ext = ExtCtx::with_degree(m).unwrap();
        let mask = ext.q() - 1;
        let [a, b, c, d] = seed.map(|s| FqElem(s & mask));
        let g = gamma_coeffs(&ext, a, b, c, d);
        prop_assert!(g.is_symmetric());
        prop_assert_eq!(g.get(2, 2) + g.get(2, 1), b + d);
        if let Ok(pair) = PairAB::from_coords(a, b, c, d) {
            let cls = classify(&ext, &pair).unwrap();
            let split = split_analysis(&ext, a, b, c, d).unwrap();
            prop_assert_eq!(split.is_nonrational(), cls.is_positive());
            prop_assert!(!(cond1(&ext, &pair) && cond2(&ext, &pair)));
            let ctx = TrinomialCtx::new(ext.clone());
            if !ctx.has_mu_pole(&pair) {
                let n = count_points_off_diagonal(ext.base(), &g);
                prop_assert_eq!(n == 0, cls.is_positive());
            }
        }
    }

    #[test]
    fn resultant_methods_agree(u in small_poly(), v in small_poly()) {
        prop_assume!(u.degree_in(Var::X).unwrap_or(0) > 0 && v.degree_in(Var::X).unwrap_or(0) > 0);
        let bareiss = resultant_with(&u, &v, Var::X, ResultantMethod::Bareiss).unwrap();
        let auto = resultant_with(&u, &v, Var::X, ResultantMethod::Auto).unwrap();
        prop_assert_eq!(bareiss, auto);
    }

    #[test]
    fn polynomial_ring(u in small_poly(), v in small_poly(), w in small_poly()) {
        prop_assert_eq!(&u * &v, &v * &u);
        prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
        prop_assert_eq!(&u * &(&v + &w), &(&u * &v) + &(&u * &w));
        prop_assert!((&u + &u).is_zero());
        prop_assert_eq!(u.square(), &u * &u);
        if !v.is_zero() {
            let (q, r) = (&u * &v).div_rem(&v).unwrap();
            prop_assert_eq!(q, u.clone());
            prop_assert!(r.is_zero());
        }
    }
}

/// Random polynomials in x, A, k with exponents at most 3 and up to 5 terms.
fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..=3, 0u32..=2, 0u32..=2), 0..=5).prop_map(|terms| {
        let s: Vec<String> = terms
            .into_iter()
            .map(|(x, a, k)| format!("x^{x}*A^{a}*k^{k}"))
            .collect();
        if s.is_empty() {
            MultiPoly::zero()
        } else {
            MultiPoly::parse(&s.join(" + ")).unwrap()
        }
    })
}
