//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, followed by
//! a short summary. All comparisons are exact (zero tolerance).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilhopf::coalgebra::{
    cobar_cohomology, conil_filtration, conil_filtration_annihilator, conil_intersection_check,
    primitives,
};
use nilhopf::comodule::{
    coinvariants, depth, dual_comodule, iterated_tower, universal_property_fuzz,
    verify_conil_factorization, verify_tower_product, Factorization,
};
use nilhopf::exactlin::{rat, Matrix, Rational, Subspace};
use nilhopf::hopfcore::{
    build_free_shuffle_hopf, build_free_shuffle_hopf_with, build_heisenberg_hopf, check_hopf_axioms,
    AntipodeSign, Axiom, GradedHopf, HopfReport,
};
use nilhopf::quadpresent::{
    build_quad_hopf, build_quad_hopf_with_embedding, graded_dims, preset_abelian, preset_curve,
    random_quadratic, tn_tower, GradingContext, QuadraticData, XiTarget,
};
use nilhopf::Exec;

const N: usize = 4;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: nilhopf::Error) -> String {
    e.to_string()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn geometric(d: usize, n: usize) -> usize {
    (0..=n).map(|i| d.pow(i as u32)).sum()
}

/// Seeded random valid quadratic data with `d1 ≤ 3`.
fn random_instances(count: usize, salt: u64) -> Vec<QuadraticData> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ salt);
    (0..count)
        .map(|_| {
            let d1 = rng.gen_range(1..=3);
            let d2 = rng.gen_range(0..=3);
            random_quadratic(d1, d2, &mut rng)
        })
        .collect()
}

fn quad_hopf(q: &QuadraticData, n: usize) -> Result<GradedHopf, String> {
    build_quad_hopf(&tn_tower(q, n).map_err(err)?, n).map_err(err)
}

fn hopf_axioms() -> Outcome {
    let mut cases = Vec::new();
    for d in 1..=3 {
        cases.push((format!("H(V) d={d}"), build_free_shuffle_hopf(d, N)));
    }
    cases.push(("Heisenberg".into(), build_heisenberg_hopf(N)));
    for (name, h) in &cases {
        let seq = nilhopf::hopfcore::check_hopf_axioms_with(h, Exec::Sequential);
        ensure(seq.passed(), || format!("{name}: {seq:?}"))?;
        ensure(check_hopf_axioms(h) == seq, || format!("{name}: execution paths disagree"))?;
    }
    let unsigned = build_free_shuffle_hopf_with(2, N, AntipodeSign::Unsigned);
    match check_hopf_axioms(&unsigned) {
        HopfReport::Fail(f) if f.axiom == Axiom::Antipode && f.weight == 1 => Ok(format!(
            "{} Hopf algebras pass; unsigned reversal fails the antipode axiom at weight 1 on {}",
            cases.len(),
            f.witness.join(",")
        )),
        other => Err(format!("unsigned antipode: expected weight-1 failure, got {other:?}")),
    }
}

fn free_conilpotency() -> Outcome {
    for d in 0..=3 {
        let h = build_free_shuffle_hopf(d, N);
        let main = conil_filtration(&h, N);
        let expected: Vec<usize> = (0..=N).map(|n| geometric(d, n)).collect();
        ensure(main.dims() == expected, || format!("d={d}: {:?} != {expected:?}", main.dims()))?;
        let oracle = conil_filtration_annihilator(&h, N);
        ensure(main == oracle, || format!("d={d}: algorithms disagree"))?;
    }
    Ok("dim C_n = Σ_{i≤n} d^i for d ≤ 3, n ≤ 4; both algorithms agree".into())
}

fn cohomology_vanishing() -> Outcome {
    for d in 1..=3 {
        let h = build_free_shuffle_hopf(d, N);
        let h2 = cobar_cohomology(&h, 2, N).map_err(err)?;
        ensure(h2.dims() == vec![0; N + 1], || format!("d={d}: H² dims {:?}", h2.dims()))?;
        let h1 = cobar_cohomology(&h, 1, N).map_err(err)?;
        let mut expected = vec![0; N + 1];
        expected[1] = d;
        ensure(h1.dims() == expected, || format!("d={d}: H¹ dims {:?}", h1.dims()))?;
        let letters = Subspace::span(h.dim(), &h.weight_range(1).map(|i| h.basis_element(i)).collect::<Vec<_>>())
            .map_err(err)?;
        ensure(primitives(&h) == letters, || format!("d={d}: primitives differ from V"))?;
    }
    Ok("H² = 0 in weights ≤ 4 and H¹ = V, d ≤ 3".into())
}

fn subhopf_closure() -> Outcome {
    let mut instances: Vec<(String, QuadraticData)> =
        (1..=3).map(|g| (format!("abelian g={g}"), preset_abelian(g))).collect();
    for (k, q) in random_instances(20, 4).into_iter().enumerate() {
        instances.push((format!("random #{k} (d1={}, d2={})", q.d1(), q.d2()), q));
    }
    let results = Exec::default().map(&instances, |(name, q)| {
        let h = quad_hopf(q, N).map_err(|e| format!("{name}: {e}"))?;
        let report = check_hopf_axioms(&h);
        ensure(report.passed(), || format!("{name}: {report:?}"))
    });
    for r in results {
        r?;
    }
    Ok(format!(
        "{} instances closed under product, coproduct and antipode through weight 4",
        instances.len()
    ))
}

fn quadratic_presets() -> Outcome {
    for g in 0..=3 {
        let curve = graded_dims(&quad_hopf(&preset_curve(g), N)?);
        let expected: Vec<usize> = (0..=N).map(|n| g.pow(n as u32)).collect();
        ensure(curve == expected, || format!("curve g={g}: {curve:?}"))?;
        let ab = graded_dims(&quad_hopf(&preset_abelian(g), N)?);
        let expected: Vec<usize> = (0..=N).map(|n| if g == 0 { usize::from(n == 0) } else { binom(g + n - 1, n) }).collect();
        ensure(ab == expected, || format!("abelian g={g}: {ab:?}"))?;
    }
    Ok("curve(g) gives g^n and abelian(g) gives C(g+n-1,n), g ≤ 3, n ≤ 4".into())
}

fn conilpotency_intersection() -> Outcome {
    let mut instances: Vec<QuadraticData> = (1..=3).map(preset_abelian).collect();
    instances.extend(random_instances(10, 6));
    let count = instances.len();
    let results = Exec::default().map(&instances, |q| -> Result<(), String> {
        let tower = tn_tower(q, N).map_err(err)?;
        let quad = build_quad_hopf_with_embedding(&tower, N).map_err(err)?;
        let levels = conil_intersection_check(&quad.hopf, &quad.ambient, &quad.embedding, N).map_err(err)?;
        ensure(levels.iter().all(|l| l.equal), || format!("d1={}: {levels:?}", q.d1()))?;
        let c = conil_filtration(&quad.hopf, N);
        for n in 0..=N {
            let graded: Vec<Vec<Rational>> = (0..quad.hopf.dim())
                .filter(|&i| quad.hopf.weight(i) <= n)
                .map(|i| quad.hopf.basis_element(i))
                .collect();
            let direct = Subspace::span(quad.hopf.dim(), &graded).map_err(err)?;
            ensure(c.level(n) == Some(&direct), || format!("d1={}: C_{n} differs from ⊕ T_i", q.d1()))?;
            let expected: usize = tower.dims()[..=n].iter().sum();
            ensure(direct.dim() == expected, || "dimension bookkeeping".into())?;
        }
        Ok(())
    });
    for r in results {
        r?;
    }
    Ok(format!("{count} instances: C_n(H(V,J)) = C_n(H(V)) ∩ H(V,J) = ⊕_{{i≤n}} T_i, n ≤ 4"))
}

fn tower_identity() -> Outcome {
    let mut cases: Vec<(String, GradedHopf)> = Vec::new();
    for d in 1..=2 {
        cases.push((format!("H(V) d={d}"), build_free_shuffle_hopf(d, N)));
    }
    for g in 1..=2 {
        cases.push((format!("abelian g={g}"), quad_hopf(&preset_abelian(g), N)?));
    }
    cases.push(("Heisenberg".into(), build_heisenberg_hopf(N)));
    let mut summary = Vec::new();
    for (name, h) in cases {
        let h = Arc::new(h);
        let c = conil_filtration(&h, N);
        let tower = iterated_tower(h.clone(), N).map_err(err)?;
        let mut hom_dims = Vec::new();
        for n in 1..=N {
            let e = &tower.level(n).map_err(err)?.module;
            let cdim = c.dims()[n - 1];
            ensure(e.dim() == cdim, || format!("{name}: dim E_{n} = {} but dim C_{} = {cdim}", e.dim(), n - 1))?;
            let dep = depth(e).map_err(err)?;
            ensure(dep == n, || format!("{name}: depth E_{n} = {dep}"))?;
            let fact = verify_conil_factorization(e, &c, n).map_err(err)?;
            ensure(fact == Factorization::Holds, || format!("{name}: E_{n} factorization {fact:?}"))?;
            let hom = coinvariants(&dual_comodule(e)).dim();
            ensure(hom == hom_by_equations(e), || format!("{name}: Hom(E_{n},1) routes disagree"))?;
            hom_dims.push(hom);
        }
        ensure(hom_dims.windows(2).all(|w| w[0] == w[1]), || format!("{name}: Hom dims {hom_dims:?}"))?;
        summary.push(format!("{name} {:?}", tower.dims()));
    }
    Ok(format!("dim E_n = dim C_(n-1), depth n, factorization, Hom(U(E),1) = Hom(E,1): {}", summary.join("; ")))
}

/// `Hom(E,1)` as `{φ : Σ_i φ_i C_ij = φ_j · 1}`, solved directly.
fn hom_by_equations(e: &nilhopf::Comodule) -> usize {
    let n = e.dim();
    let hd = e.hopf().dim();
    let mut m = Matrix::zeros(n * hd, n);
    for j in 0..n {
        for i in 0..n {
            for (h, c) in e.coefficient(i, j) {
                let v = m.get(j * hd + h, i) + c;
                m.set(j * hd + h, i, v);
            }
        }
        let v = m.get(j * hd, j) - rat(1);
        m.set(j * hd, j, v);
    }
    nilhopf::exactlin::kernel(&m).dim()
}

fn universal_property() -> Outcome {
    let h = Arc::new(build_free_shuffle_hopf(2, N));
    let tower = iterated_tower(h, 3).map_err(err)?;
    let mut counts = Vec::new();
    for n in 1..=3 {
        let outcomes = universal_property_fuzz(&tower, n, 25, SEED, Exec::default()).map_err(err)?;
        for o in &outcomes {
            ensure(o.depth <= n, || format!("level {n}: sample of depth {}", o.depth))?;
            ensure(o.unique, || format!("level {n}: seed {} not unique", o.seed))?;
        }
        counts.push(outcomes.len());
    }
    Ok(format!("unique pointed morphism from (E_n, e_n) for {counts:?} samples at n = 1, 2, 3"))
}

fn hopf_reconstruction() -> Outcome {
    let h = Arc::new(build_free_shuffle_hopf(2, N));
    let tower = iterated_tower(h, 4).map_err(err)?;
    let mut total = 0;
    for m in 1..=3 {
        for n in 1..=4 - m {
            total += verify_tower_product(&tower, m, n).map_err(err)?;
        }
    }
    Ok(format!("tower products unique for m+n ≤ 4; {total} shuffle table entries reproduced"))
}

fn xi_maps() -> Outcome {
    let mut presets: Vec<(String, QuadraticData)> = Vec::new();
    for g in 1..=3 {
        presets.push((format!("curve g={g}"), preset_curve(g)));
        presets.push((format!("abelian g={g}"), preset_abelian(g)));
    }
    for (name, q) in &presets {
        let h = Arc::new(quad_hopf(q, 3)?);
        let ctx = GradingContext::new(h, 3).map_err(err)?;
        for n in 1..=3 {
            let xi = ctx.xi(n, XiTarget::Tn).map_err(|e| format!("{name}, n={n}: {e}"))?;
            ensure(xi.rank() == xi.cols(), || format!("{name}: ξ_{n} not injective"))?;
            ensure(xi.rows() == xi.cols(), || format!("{name}: ξ_{n} not onto T_{n}"))?;
        }
    }
    Ok(format!("ξ_1..ξ_3 injective into T_n and bijective on {} presets", presets.len()))
}

fn heisenberg_non_tightness() -> Outcome {
    let h = build_heisenberg_hopf(N);
    let h1 = cobar_cohomology(&h, 1, N).map_err(err)?;
    ensure(h1.total_dim() == 2, || format!("H¹ dims {:?}", h1.dims()))?;
    let h2 = cobar_cohomology(&h, 2, N).map_err(err)?;
    ensure(h2.total_dim() > 0, || "H² vanishes".into())?;
    let levels = conil_filtration(&h, N).dims();
    let graded: Vec<usize> = (0..=N).map(|n| levels[n] - if n == 0 { 0 } else { levels[n - 1] }).collect();
    let (q, _) = QuadraticData::from_hopf(&h).map_err(err)?;
    let approx = graded_dims(&quad_hopf(&q, N)?);
    let first = (0..=N).find(|&w| graded[w] != approx[w]);
    match first {
        Some(w) => Ok(format!(
            "H¹ dim 2, H² dims {:?}; graded conilpotency {graded:?} vs H(V,J) {approx:?}, first divergence at weight {w}",
            h2.dims()
        )),
        None => Err(format!("no divergence: {graded:?} vs {approx:?}")),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("hopf axioms", hopf_axioms),
        ("free conilpotency dims", free_conilpotency),
        ("cohomology vanishing", cohomology_vanishing),
        ("sub-Hopf closure", subhopf_closure),
        ("quadratic presets", quadratic_presets),
        ("conilpotency intersection", conilpotency_intersection),
        ("tower identity", tower_identity),
        ("universal property fuzz", universal_property),
        ("Hopf reconstruction", hopf_reconstruction),
        ("xi maps", xi_maps),
        ("Heisenberg non-tightness", heisenberg_non_tightness),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
