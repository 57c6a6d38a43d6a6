//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use permtri::classifier::{case_generate, case_predicate, classify, cond1, cond2, enumerate_pp_pairs, CaseId, Mode};
use permtri::curve::{count_points_off_diagonal, gamma_coeffs};
use permtri::fields::{ExtCtx, FieldCtx, Fq2Elem, FqElem};
use permtri::symbolic::{derive_curve, gamma_reference, verify_case_chains, verify_curve_identity, verify_two_conics_obstruction, Var, NVARS};
use permtri::trinomial::{is_pp_general_bruteforce, plz_check_general, GeneralTrinomialSpec, PairAB, TrinomialCtx};

const SEED: u64 = 0x5eed_2024;
const LIMIT_Q8: Duration = Duration::from_secs(1);
const LIMIT_Q64: Duration = Duration::from_secs(60);
const LIMIT_OBSTRUCTION: Duration = Duration::from_secs(300);
const RANDOM_SPECS_PER_FIELD: usize = 100;
const RANDOM_TUPLES_PER_FIELD: usize = 1000;
const PROPERTY_INSTANCES: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn condition_set(ctx: &TrinomialCtx) -> BTreeSet<PairAB> {
    let ext = ctx.ext();
    ctx.pairs().filter(|p| cond1(ext, p) || cond2(ext, p)).collect()
}

fn criterion_1() -> Outcome {
    let ctx = TrinomialCtx::with_degree(3).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let brute: BTreeSet<_> = enumerate_pp_pairs(&ctx, Mode::Bruteforce).into_iter().collect();
    let elapsed = start.elapsed();
    let cond = condition_set(&ctx);
    ensure(ctx.pair_count() == 3969, || format!("{} pairs", ctx.pair_count()))?;
    ensure(brute == cond, || format!("brute {} vs condition {}", brute.len(), cond.len()))?;
    ensure(elapsed < LIMIT_Q8, || format!("took {elapsed:?}"))?;
    Ok(format!("3969 pairs, {} permutations, {elapsed:.2?}", brute.len()))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for m in [4, 5, 6] {
        let ctx = TrinomialCtx::with_degree(m).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let mu: BTreeSet<_> = enumerate_pp_pairs(&ctx, Mode::Mu).into_iter().collect();
        let elapsed = start.elapsed();
        let cond = condition_set(&ctx);
        ensure(mu == cond, || format!("m={m}: mu {} vs condition {}", mu.len(), cond.len()))?;
        if m == 6 {
            ensure(elapsed < LIMIT_Q64, || format!("q=64 took {elapsed:?}"))?;
        }
        notes.push(format!("q={} {} in {elapsed:.2?}", ctx.ext().q(), mu.len()));
    }
    Ok(notes.join(", "))
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn random_spec(f: &FieldCtx, rng: &mut ChaCha8Rng) -> GeneralTrinomialSpec {
    let q = f.q() as u64;
    let divs = divisors(q - 1);
    let d = divs[rng.gen_range(0..divs.len())];
    let r = rng.gen_range(1..q);
    // Half monomial h (more likely to permute), half random of length 1..=4.
    let h_coeffs = if rng.gen_bool(0.5) {
        let mut h = vec![FqElem::ZERO; rng.gen_range(1..=4)];
        let last = h.len() - 1;
        h[last] = FqElem(rng.gen_range(1..q as u32));
        h
    } else {
        (0..rng.gen_range(1..=4)).map(|_| FqElem(rng.gen_range(0..q as u32))).collect()
    };
    GeneralTrinomialSpec { r, d, h_coeffs }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut notes = Vec::new();
    for m in [3, 4, 5] {
        let ctx = TrinomialCtx::with_degree(m).map_err(|e| e.to_string())?;
        let disagree: Vec<PairAB> = ctx
            .pairs()
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|p| ctx.is_pp_bruteforce(p) != ctx.is_perm_mu(p))
            .collect();
        ensure(disagree.is_empty(), || format!("m={m}: {} disagreements, first {:?}", disagree.len(), disagree[0]))?;
        let f = ctx.ext().base();
        let mut positives = 0;
        for _ in 0..RANDOM_SPECS_PER_FIELD {
            let spec = random_spec(f, &mut rng);
            let fast = plz_check_general(f, &spec).map_err(|e| e.to_string())?;
            let slow = is_pp_general_bruteforce(f, &spec).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("m={m}: {spec:?} criterion {fast}, brute force {slow}"))?;
            positives += fast as u32;
        }
        notes.push(format!("q={} ok ({positives}/{RANDOM_SPECS_PER_FIELD} random specs permute)", f.q()));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for m in [3, 4, 5] {
        let ctx = TrinomialCtx::with_degree(m).map_err(|e| e.to_string())?;
        let ext = ctx.ext();
        let pairs: Vec<PairAB> = ctx.pairs().filter(|p| !ctx.has_mu_pole(p)).collect();
        let bad: Vec<PairAB> = pairs
            .par_iter()
            .filter(|p| {
                let [a, b, c, d] = p.coords();
                let n = count_points_off_diagonal(ext.base(), &gamma_coeffs(ext, a, b, c, d));
                (n == 0) != ctx.is_perm_mu(p)
            })
            .copied()
            .collect();
        ensure(bad.is_empty(), || format!("m={m}: {} pairs disagree, first {:?}", bad.len(), bad[0]))?;
        notes.push(format!("q={} {} pole-free pairs", ext.q(), pairs.len()));
    }
    Ok(notes.join(", "))
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for m in [3, 4, 5] {
        let ctx = TrinomialCtx::with_degree(m).map_err(|e| e.to_string())?;
        let ext = ctx.ext();
        let sets: Vec<(CaseId, BTreeSet<PairAB>)> = CaseId::ALL
            .iter()
            .map(|&c| {
                let set = case_generate(ext, c)
                    .into_iter()
                    .map(|[a, b, cc, d]| PairAB::from_coords(a, b, cc, d).expect("families avoid zero"))
                    .collect();
                (c, set)
            })
            .collect();
        for (i, (ci, si)) in sets.iter().enumerate() {
            for (cj, sj) in &sets[i + 1..] {
                ensure(si.is_disjoint(sj), || format!("m={m}: cases {ci} and {cj} overlap"))?;
            }
        }
        let union: BTreeSet<PairAB> = sets.iter().flat_map(|(_, s)| s.iter().copied()).collect();
        let cond = condition_set(&ctx);
        ensure(union == cond, || format!("m={m}: union {} vs condition {}", union.len(), cond.len()))?;
        for (c, set) in &sets {
            for p in set {
                let cls = classify(ext, p).map_err(|e| e.to_string())?;
                ensure(cls.case_id == Some(*c) && cls.is_consistent(), || format!("m={m}: {p:?} tagged {:?}, generated by {c}", cls.case_id))?;
            }
        }
        let predicate_hits = ctx
            .pairs()
            .filter(|p| CaseId::ALL.iter().any(|&c| case_predicate(ext, c, p.coords())))
            .count();
        ensure(predicate_hits == cond.len(), || format!("m={m}: predicates accept {predicate_hits}"))?;
        let sizes: Vec<String> = sets.iter().map(|(_, s)| s.len().to_string()).collect();
        notes.push(format!("q={} [{}]", ext.q(), sizes.join(",")));
    }
    Ok(notes.join(", "))
}

fn criterion_6() -> Outcome {
    let derived = derive_curve().map_err(|e| e.to_string())?;
    let reference = gamma_reference();
    ensure(derived == reference, || "derived coefficients differ from the closed forms".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for m in [3, 4, 5, 6, 7, 8] {
        let ext = ExtCtx::with_degree(m).map_err(|e| e.to_string())?;
        let f = ext.base();
        for _ in 0..RANDOM_TUPLES_PER_FIELD {
            let [a, b, c, d] = std::array::from_fn(|_| FqElem(rng.gen_range(0..f.q())));
            let mut point = [FqElem::ZERO; NVARS];
            for (v, x) in [(Var::A, a), (Var::B, b), (Var::C, c), (Var::D, d), (Var::K, ext.k())] {
                point[v.index()] = x;
            }
            let numeric = gamma_coeffs(&ext, a, b, c, d);
            for (&(j, l), poly) in &derived {
                let want = poly.eval(f, &point);
                let got = numeric.get(j as usize, l as usize);
                ensure(want == got, || format!("m={m} ({a},{b},{c},{d}) gamma{j}{l}: {got} vs {want}"))?;
            }
        }
    }
    Ok(format!("9 coefficients equal; {RANDOM_TUPLES_PER_FIELD} tuples x 6 fields agree"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let report = verify_two_conics_obstruction();
    let elapsed = start.elapsed();
    if let Some(s) = report.failed_steps().next() {
        return Err(format!("failed step: {}", s.operation));
    }
    ensure(report.passed(), || "report did not pass".into())?;
    let last = report.steps.last().map(|s| s.operation.as_str()).unwrap_or("");
    ensure(last.contains("R4 and H") && last.contains("vanishes"), || format!("last step is {last:?}"))?;
    ensure(report.steps.iter().any(|s| s.operation.contains("reduced condition")), || "no condition identity".into())?;
    ensure(elapsed < LIMIT_OBSTRUCTION, || format!("took {elapsed:?}"))?;
    Ok(format!("{} steps, {elapsed:.2?}", report.steps.len()))
}

fn criterion_8() -> Outcome {
    let mut reports = verify_case_chains();
    reports.push(verify_curve_identity());
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
    ensure(failed.is_empty(), || format!("failed: {}", failed.join(", ")))?;
    Ok(format!("{} reports pass", reports.len()))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let fields: Vec<FieldCtx> = (2..=24).map(|m| FieldCtx::new(m, None)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for _ in 0..PROPERTY_INSTANCES {
        let f = &fields[rng.gen_range(0..fields.len())];
        let [x, y, z] = std::array::from_fn(|_| FqElem(rng.gen_range(0..f.q())));
        ensure(f.mul(x, y) == f.mul(y, x), || "commutativity".into())?;
        ensure(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)), || "associativity".into())?;
        ensure(f.mul(x, y + z) == f.mul(x, y) + f.mul(x, z), || "distributivity".into())?;
        ensure(f.mul(x, FqElem::ONE) == x, || "identity".into())?;
        if !x.is_zero() {
            ensure(f.mul(x, f.inv(x).unwrap()) == FqElem::ONE, || format!("inverse of {x} in m={}", f.m()))?;
        }
        ensure(f.square(f.sqrt(x)) == x, || "square root".into())?;
    }
    for f in fields.iter().filter(|f| f.m() <= 16) {
        let zeros = f.elements().filter(|&x| f.trace(x) == 0).count() as u32;
        ensure(zeros == f.q() / 2, || format!("m={}: {zeros} trace-zero elements", f.m()))?;
    }
    let exts: Vec<ExtCtx> = (2..=12).map(ExtCtx::with_degree).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for _ in 0..PROPERTY_INSTANCES {
        let ext = &exts[rng.gen_range(0..exts.len())];
        let q = ext.q();
        let mut r = || Fq2Elem { a: FqElem(rng.gen_range(0..q)), b: FqElem(rng.gen_range(0..q)) };
        let (u, v) = (r(), r());
        ensure(ext.frobenius(ext.frobenius(u)) == u, || "Frobenius is not an involution".into())?;
        ensure(ext.frobenius(ext.mul(u, v)) == ext.mul(ext.frobenius(u), ext.frobenius(v)), || "Frobenius not multiplicative".into())?;
        ensure(ext.norm(ext.mul(u, v)) == ext.base().mul(ext.norm(u), ext.norm(v)), || "norm not multiplicative".into())?;
    }
    for _ in 0..PROPERTY_INSTANCES {
        let f = &fields[rng.gen_range(0..fields.len())];
        let b = FqElem(rng.gen_range(1..f.q()));
        let c = FqElem(rng.gen_range(0..f.q()));
        let roots = f.solve_quadratic(FqElem::ONE, b, c).map_err(|e| e.to_string())?;
        let t = f.trace(f.div(c, f.square(b)).unwrap());
        ensure(roots.len() == if t == 0 { 2 } else { 0 }, || format!("m={}: {} roots with trace {t}", f.m(), roots.len()))?;
        for root in roots {
            ensure((f.square(root) + f.mul(b, root) + c).is_zero(), || "root does not satisfy".into())?;
        }
    }
    Ok(format!("{PROPERTY_INSTANCES} instances per property"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("q=8 brute force equals the conditions", criterion_1),
        ("q=16,32,64 roots-of-unity test equals the conditions", criterion_2),
        ("brute force equals roots-of-unity test; general criterion", criterion_3),
        ("no off-diagonal points iff permutation", criterion_4),
        ("five families partition the condition set", criterion_5),
        ("curve coefficients derived symbolically", criterion_6),
        ("two-conics obstruction chain", criterion_7),
        ("case chains", criterion_8),
        ("field property suites", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
