//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctxrep_core::prob::round_to;
use ctxrep_core::real::DEFAULT_TIE_TOLERANCE;
use ctxrep_core::*;

type Check = std::result::Result<String, String>;

fn ctx(measurement: &str) -> ContextId {
    ContextId::new("entity", "p", measurement).unwrap()
}

fn rounded(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&x| round_to(x, 2)).collect()
}

fn expect_eq(what: &str, got: Vec<f64>, want: &[f64]) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn within(limit: Duration, start: Instant) -> std::result::Result<(), String> {
    let elapsed = start.elapsed();
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn animal_acts_marginals() -> Check {
    let start = Instant::now();
    let data = AnimalActsDataset::default();
    let e = probabilities_from_counts(&data.animal);
    let f = probabilities_from_counts(&data.acts);
    expect_eq("animal", e.rounded(2), &[0.53, 0.47])?;
    expect_eq("acts", f.rounded(2), &[0.48, 0.52])?;
    let we = build_complex_context_default(&e, ctx("e")).map_err(|x| x.to_string())?;
    let wf = build_complex_context_default(&f, ctx("f")).map_err(|x| x.to_string())?;
    expect_eq("animal moduli", rounded(&we.moduli()), &[0.73, 0.68])?;
    expect_eq("acts moduli", rounded(&wf.moduli()), &[0.69, 0.72])?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("(0.53, 0.47) (0.48, 0.52), moduli (0.73, 0.68) (0.69, 0.72) in {:?}", start.elapsed()))
}

fn animal_acts_joint() -> Check {
    let (_, _, g) = animal_acts_tables();
    expect_eq("joint", rounded(g.probs()), &[0.05, 0.63, 0.26, 0.06])?;
    let (_, w) = build_joint_vectors(&g, &PhaseAssignment::zeros(4)).map_err(|x| x.to_string())?;
    expect_eq("joint moduli", rounded(&w.moduli()), &[0.22, 0.79, 0.51, 0.25])?;
    Ok("(0.05, 0.63, 0.26, 0.06), moduli (0.22, 0.79, 0.51, 0.25)".into())
}

fn animal_acts_entangled() -> Check {
    let start = Instant::now();
    let (_, _, g) = animal_acts_tables();
    let report = is_product_with(&g, 0.0, Arithmetic::Exact).map_err(|x| x.to_string())?;
    if report.verdict != Verdict::Entangled {
        return Err("verdict is Product".into());
    }
    let minor = report
        .witness
        .and_then(|w| w.minor_exact)
        .ok_or("no exact witness")?;
    if minor.is_zero() {
        return Err("witness minor is zero".into());
    }
    let m = g.matrix();
    let best = common::grid_min_residual([[m[0][0], m[0][1]], [m[1][0], m[1][1]]], 1e-3);
    if best <= 0.1 {
        return Err(format!("grid minimum residual {best}"));
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("Entangled, minor {minor}, grid minimum residual {best:.4} in {:?}", start.elapsed()))
}

fn ideal_vessels_entangled() -> Check {
    let ml = OutcomeSet::new(["M", "L"]).unwrap();
    let t = JointTable::from_floats(ml.clone(), ml, vec![vec![0.0, 0.5], vec![0.5, 0.0]])
        .map_err(|x| x.to_string())?;
    let report = is_product_default(&t);
    if report.verdict != Verdict::Entangled {
        return Err("verdict is Product".into());
    }
    let minor = report.witness.ok_or("no witness")?.minor;
    if minor != -0.25 {
        return Err(format!("witness minor {minor}"));
    }
    Ok("Entangled, witness minor -0.25".into())
}

fn vessels_simulation() -> Check {
    let start = Instant::now();
    let trials = 1_000_000;
    let sep = simulate_vessels(&VesselsConfig::new(VesselsMode::Separate, trials, 1)).map_err(|x| x.to_string())?;
    let bound = common::three_sigma(0.25, trials);
    for (label, c) in [("MM", sep.mm), ("ML", sep.ml), ("LM", sep.lm), ("LL", sep.ll)] {
        let f = c as f64 / trials as f64;
        if (f - 0.25).abs() > bound {
            return Err(format!("separate {label} frequency {f}, bound {bound}"));
        }
    }
    let con = simulate_vessels(&VesselsConfig::new(VesselsMode::Connected, trials, 2)).map_err(|x| x.to_string())?;
    if con.mm != 0 || con.ll != 0 {
        return Err(format!("connected MM={} LL={}", con.mm, con.ll));
    }
    let half = common::three_sigma(0.5, trials);
    for (label, c) in [("ML", con.ml), ("LM", con.lm)] {
        let f = c as f64 / trials as f64;
        if (f - 0.5).abs() > half {
            return Err(format!("connected {label} frequency {f}, bound {half}"));
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("separate within {bound:.4} of 1/4, connected MM = LL = 0 in {:?}", start.elapsed()))
}

fn measure_frequency_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 100_000;
    for case in 0..20u64 {
        let n = rng.random_range(2..=5);
        let p = probabilities_from_counts(&common::random_counts(&mut rng, n, 40));
        let v = build_real_context(&p, ctx("e"));
        let mc = monte_carlo_measurement(&v, trials, case).map_err(|x| x.to_string())?;
        for j in 0..n {
            let ratio = region_measure_ratio(&v, j).map_err(|x| x.to_string())?;
            if (ratio - p.get(j)).abs() > 1e-12 {
                return Err(format!("case {case}: ratio {ratio} vs probability {}", p.get(j)));
            }
            let bound = common::three_sigma(ratio, mc.resolved());
            if (mc.frequencies[j] - ratio).abs() > bound {
                return Err(format!(
                    "case {case} outcome {j}: frequency {} vs ratio {ratio}, bound {bound}",
                    mc.frequencies[j]
                ));
            }
        }
    }
    Ok("20 distributions, 1e5 trials each, all outcomes within 3 standard errors".into())
}

fn born_rule_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let n = rng.random_range(1..=6);
        let p = probabilities_from_counts(&common::random_counts(&mut rng, n, 50));
        let family = common::random_family(&mut rng, n);
        let m = family.dim();
        if !(n <= m && m <= n * n) {
            return Err(format!("case {case}: ambient dimension {m} for n = {n}"));
        }
        let angles = (0..m).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let w = build_complex_context(&p, family, PhaseAssignment::new(angles).unwrap(), ctx("e"))
            .map_err(|x| x.to_string())?;
        let mut total = 0.0;
        for k in 0..n {
            let born = born_probability(&w, k).map_err(|x| x.to_string())?;
            if (born - p.get(k)).abs() > 1e-12 {
                return Err(format!("case {case} outcome {k}: born {born} vs {}", p.get(k)));
            }
            total += born;
            let mk = apply_projector(&w, k).map_err(|x| x.to_string())?;
            for l in (0..n).filter(|&l| l != k) {
                let mlk = ctxrep_core::complex::project(&mk, w.family(), l).map_err(|x| x.to_string())?;
                if mlk.iter().any(|a| !a.norm_sqr().is_zero()) {
                    return Err(format!("case {case}: M_{l} M_{k} w is nonzero"));
                }
            }
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("case {case}: born probabilities sum to {total}"));
        }
    }
    Ok("50 (distribution, partition) pairs round-trip, sum to 1, projectors orthogonal".into())
}

fn product_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        let (n, nn) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let p1 = probabilities_from_counts(&common::random_counts(&mut rng, n, 30));
        let p2 = probabilities_from_counts(&common::random_counts(&mut rng, nn, 30));
        let t = tensor_product_real(&build_real_context(&p1, ctx("e")), &build_real_context(&p2, ctx("f")));
        let report = is_product_default(&t);
        if report.verdict != Verdict::Product || report.residual > 1e-12 {
            return Err(format!("case {case}: {:?} with residual {}", report.verdict, report.residual));
        }
        let (row, col) = factorization_certificate(&t).ok_or(format!("case {case}: no certificate"))?;
        if row.exact() != p1.exact() || col.exact() != p2.exact() {
            return Err(format!("case {case}: certificate does not recover the factors"));
        }
    }
    Ok("100 exact marginal pairs: Product, residual 0, factors recovered exactly".into())
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lambda = [0.0; 4];
    for case in 0..10_000 {
        let n = rng.random_range(2..=4);
        let v: Vec<f64> = {
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|x| x / s).collect()
        };
        ctxrep_core::sampling::fill_uniform_simplex(&mut rng, &mut lambda[..n]);
        let l = &lambda[..n];
        let loose = common::containing_regions(&v, l, 1e-9);
        let strict: Vec<usize> = (0..n)
            .filter(|&j| common::hull_coefficients(&v, l, j).is_some_and(|c| c.iter().all(|&x| x > 1e-9)))
            .collect();
        let agrees = match ctxrep_core::real::classify_coords(&v, l, DEFAULT_TIE_TOLERANCE) {
            OutcomeResolution::Deterministic(j) => loose.contains(&j) && strict.iter().all(|&k| k == j),
            OutcomeResolution::Boundary(set) => strict.is_empty() && set.iter().all(|k| loose.contains(k)),
        };
        if !agrees {
            return Err(format!("case {case}: v {v:?} λ {l:?} oracle {loose:?}"));
        }
    }
    let tables = common::all_two_by_two(12);
    for counts in &tables {
        let rows = OutcomeSet::indexed(2).unwrap();
        let t = JointTable::from_counts(
            rows.clone(),
            rows,
            counts.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect(),
        )
        .map_err(|x| x.to_string())?;
        let minors_vanish = ctxrep_core::joint::largest_minor(&t, Arithmetic::Exact)
            .and_then(|w| w.minor_exact)
            .is_some_and(|m| m.is_zero());
        let brute = common::brute_force_factorizable(*counts);
        let certificate = factorization_certificate(&t).is_some();
        if minors_vanish != brute || certificate != brute {
            return Err(format!("{counts:?}: minors vanish {minors_vanish}, brute force {brute}"));
        }
    }
    Ok(format!("1e4 (v, λ) pairs agree with the hull oracle; {} 2×2 tables agree with brute force", tables.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("animal-acts marginals and moduli", animal_acts_marginals),
        ("animal-acts joint probabilities and moduli", animal_acts_joint),
        ("animal-acts joint is entangled", animal_acts_entangled),
        ("ideal connected vessels are entangled", ideal_vessels_entangled),
        ("vessels simulation", vessels_simulation),
        ("measure/frequency agreement", measure_frequency_agreement),
        ("born-rule suite", born_rule_suite),
        ("product soundness", product_soundness),
        ("oracle equivalence", oracle_equivalence),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
