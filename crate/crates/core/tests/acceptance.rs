//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
//! failure. Tolerances and time limits are pinned below.

mod support;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bsw::closure::{
    bs_verify_monomial, germ_bs_exponent, germ_closure_member, germ_ideal_member, huneke_mu,
    ExponentMode, MonomialIdeal, NumericalSemigroup, SemigroupIdeal,
};
use bsw::groebner::{ideal_member, Ideal};
use bsw::loja::{geometric_radii, loja_exponent_estimate, sample_variety, VarietySampler};
use bsw::poly::{ExponentVector, MonomialOrder, Polynomial, RingContext};
use bsw::resolution::{check_acyclicity, koszul_complex, Codim, FreeComplex};
use bsw::session::strip_timestamp;
use bsw::strata::{check_cm_depth, check_normality_condition, strata_of_ideal, StrataReport};
use bsw::Budget;

use support::{dense_member, mul, random_homogeneous, render, Dense};

/// Slope tolerance for the estimator.
const SLOPE_TOL: f64 = 0.1;
/// Minimum sample count for the estimator.
const MIN_POINTS: usize = 60;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ring(names: &[&str], weights: &[u32]) -> Arc<RingContext> {
    let order = if weights.iter().all(|&w| w == 1) {
        MonomialOrder::Degrevlex
    } else {
        MonomialOrder::WeightedDegrevlex
    };
    let names = names.iter().map(|s| s.to_string()).collect();
    Arc::new(RingContext::new(names, weights.to_vec(), order).expect("valid ring"))
}

fn ideal(r: &Arc<RingContext>, gens: &[&str]) -> Ideal {
    Ideal::parse(r, gens).expect("valid ideal")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strata_for(i: &Ideal) -> Result<(FreeComplex, StrataReport), String> {
    strata_of_ideal(i, &mut Budget::default()).map_err(|e| e.to_string())
}

fn cusp_suite() -> Outcome {
    for p in [3u64, 5, 7] {
        let s = NumericalSemigroup::new(&[2, p]).map_err(|e| e.to_string())?;
        let z = SemigroupIdeal::new(&[2], &s).map_err(|e| e.to_string())?;
        let half = (p / 2) as u32;
        let not_member = !germ_ideal_member(p, &z, &s).map_err(|e| e.to_string())?;
        let integral = germ_closure_member(p, &z.power(half, &s), &s).map_err(|e| e.to_string())?;
        let exp = germ_bs_exponent(&z, 1, &s, ExponentMode::Power).map_err(|e| e.to_string())?;
        ensure(not_member, || format!("p = {p}: w reported in (z)"))?;
        ensure(integral, || {
            format!("p = {p}: w not in closure((z)^{half})")
        })?;
        ensure(exp.exponent as u64 == p.div_ceil(2), || {
            format!("p = {p}: exponent {} != {}", exp.exponent, p.div_ceil(2))
        })?;
    }
    Ok("p = 3, 5, 7: exponents 2, 3, 4".into())
}

fn classical_bs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=3usize);
        let ngens = rng.gen_range(1..=4usize);
        let gens: Vec<ExponentVector> = (0..ngens)
            .map(|_| {
                let deg = rng.gen_range(1..=5u32);
                let mut e = vec![0u32; n];
                for _ in 0..deg {
                    e[rng.gen_range(0..n)] += 1;
                }
                ExponentVector::new(e)
            })
            .collect();
        let m = MonomialIdeal::new(n, gens).map_err(|e| e.to_string())?;
        for ell in 1..=3 {
            let r = bs_verify_monomial(&m, ell, n).map_err(|e| e.to_string())?;
            ensure(r.holds, || {
                format!("{m}, ell {ell}: counterexample {:?}", r.counterexample)
            })?;
            checks += 1;
        }
    }
    // Sharpness: with exponent min(m, d) + ℓ − 2 = 1 the containment fails at xy.
    let m = MonomialIdeal::from_exponents(2, &[&[2, 0], &[0, 2]]).map_err(|e| e.to_string())?;
    let r = bsw::closure::bs_containment(&m, 1, 1).map_err(|e| e.to_string())?;
    ensure(r.counterexample.as_deref() == Some(&[1, 1][..]), || {
        format!("sharpness witness {:?}", r.counterexample)
    })?;
    ensure(
        support::integral_by_powers(&[vec![2, 0], vec![0, 2]], &[1, 1], 2),
        || "oracle rejects xy in closure(x^2, y^2)".into(),
    )?;
    Ok(format!("{checks} containments hold, witness xy"))
}

fn strata_criteria() -> Outcome {
    let r3 = ring(&["x", "y", "z"], &[1, 1, 1]);
    let r4 = ring(&["x", "y", "z", "w"], &[1, 1, 1, 1]);
    let cusp = ideal(&ring(&["z", "w"], &[2, 5]), &["z^5 - w^2"]);
    let cone = ideal(&r3, &["x*z - y^2"]);
    let planes = ideal(&r4, &["x*z", "x*w", "y*z", "y*w"]);
    let cubic = ideal(&r4, &["x*z - y^2", "x*w - y*z", "y*w - z^2"]);
    let smooth = ideal(&ring(&["z", "w"], &[1, 2]), &["w - z^2"]);

    for (name, i) in [("cusp", &cusp), ("cone", &cone)] {
        let (_, s) = strata_for(i)?;
        let higher_empty = s
            .strata
            .iter()
            .filter(|st| st.r > 0)
            .all(|st| st.is_empty());
        ensure(check_cm_depth(&s).is_cm && higher_empty, || {
            format!("{name} not reported CM")
        })?;
    }

    let (c, s) = strata_for(&planes)?;
    ensure(c.ranks() == vec![1, 4, 4, 1], || {
        format!("two planes ranks {:?}", c.ranks())
    })?;
    let z1 = s.stratum(1).ok_or("two planes: no Z^1")?;
    ensure(z1.dim == 0 && z1.codim_in_z == Codim::Finite(2), || {
        format!("two planes Z^1 dim {} codim {}", z1.dim, z1.codim_in_z)
    })?;
    let depth = check_cm_depth(&s);
    ensure(!depth.is_cm && depth.depth_exact == Some(1), || {
        format!(
            "two planes depth {:?}, cm {}",
            depth.depth_exact, depth.is_cm
        )
    })?;

    let suite = [
        ("cusp", &cusp),
        ("cone", &cone),
        ("planes", &planes),
        ("cubic", &cubic),
        ("smooth", &smooth),
    ];
    for (name, i) in suite {
        let (_, s) = strata_for(i)?;
        for st in s.strata.iter().filter(|st| st.r > 0) {
            ensure(st.codim_in_z >= Codim::Finite(st.r as i64 + 1), || {
                format!("{name}: codim Z^{} = {}", st.r, st.codim_in_z)
            })?;
        }
    }
    Ok("cusp, cone CM; planes [1,4,4,1], depth 1; purity on 5 varieties".into())
}

fn normality() -> Outcome {
    let cusp = ideal(&ring(&["z", "w"], &[2, 5]), &["z^5 - w^2"]);
    let cone = ideal(&ring(&["x", "y", "z"], &[1, 1, 1]), &["x*z - y^2"]);
    let smooth = [
        ideal(&ring(&["z", "w"], &[1, 2]), &["w - z^2"]),
        ideal(&ring(&["x", "y", "z"], &[1, 1, 1]), &["x + y^2"]),
    ];
    ensure(
        !check_normality_condition(&strata_for(&cusp)?.1).holds,
        || "cusp reported normal".into(),
    )?;
    ensure(
        check_normality_condition(&strata_for(&cone)?.1).holds,
        || "cone reported not normal".into(),
    )?;
    for i in &smooth {
        ensure(check_normality_condition(&strata_for(i)?.1).holds, || {
            "smooth hypersurface not normal".into()
        })?;
    }
    Ok("cusp false, cone true, smooth true".into())
}

fn huneke() -> Outcome {
    let mut details = Vec::new();
    for (gens, expected) in [([2u64, 5], 3u32), ([2, 3], 2)] {
        let s = NumericalSemigroup::new(&gens).map_err(|e| e.to_string())?;
        let h = huneke_mu(&s, 12, 4).map_err(|e| e.to_string())?;
        ensure(h.mu == expected, || {
            format!("{s}: mu {} != {expected}", h.mu)
        })?;
        // Independent recomputation over every ideal of order at most 12.
        let brute = support::BruteSemigroup::new(&gens, 200);
        let oracle = brute.mu(12, 4);
        ensure(oracle == h.mu, || {
            format!("{s}: oracle mu {oracle} != {}", h.mu)
        })?;
        ensure(brute.ideals(12).len() == h.ideals, || {
            format!(
                "{s}: {} ideals enumerated, oracle {}",
                h.ideals,
                brute.ideals(12).len()
            )
        })?;
        if gens == [2, 5] {
            ensure(
                h.witness_ideal.shifts() == [2] && h.witness_ell == 1,
                || format!("witness {} ell {}", h.witness_ideal, h.witness_ell),
            )?;
        }
        details.push(format!("{s} mu {}", h.mu));
    }
    Ok(details.join(", "))
}

fn groebner_oracle() -> Outcome {
    const MAX_DEG: u32 = 6;
    let names = ["x", "y", "z"];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut agree, mut members) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3usize);
        let r = ring(&names[..n], &vec![1; n]);
        let ngens = rng.gen_range(1..=3usize);
        let gens: Vec<Dense> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=4u32);
                random_homogeneous(&mut rng, n, d, 3)
            })
            .collect();
        let rendered: Vec<String> = gens.iter().map(|g| render(g, &names)).collect();
        let refs: Vec<&str> = rendered.iter().map(String::as_str).collect();
        let i = ideal(&r, &refs);
        // Half the candidates are built as members, half are random.
        let mut candidate = Dense::new();
        if rng.gen_bool(0.5) {
            for g in &gens {
                let gd: u32 = g.keys().next().unwrap().iter().sum();
                let d = rng.gen_range(gd..=MAX_DEG) - gd;
                candidate =
                    support::add(&candidate, &mul(g, &random_homogeneous(&mut rng, n, d, 2)));
            }
        } else {
            for _ in 0..2 {
                let d = rng.gen_range(0..=MAX_DEG);
                candidate = support::add(&candidate, &random_homogeneous(&mut rng, n, d, 3));
            }
        }
        let p = Polynomial::parse(&render(&candidate, &names), &r).map_err(|e| e.to_string())?;
        let ours = ideal_member(&p, &i, &mut Budget::default()).map_err(|e| e.to_string())?;
        let oracle =
            dense_member(&candidate, &gens, n, MAX_DEG).ok_or("candidate past degree cap")?;
        ensure(ours == oracle, || {
            format!("disagree on {p} in {:?}: ours {ours}", rendered)
        })?;
        agree += 1;
        members += ours as usize;
    }
    Ok(format!("{agree}/100 agree ({members} members)"))
}

fn complex_soundness() -> Outcome {
    let r3 = ring(&["x", "y", "z"], &[1, 1, 1]);
    let r4 = ring(&["x", "y", "z", "w"], &[1, 1, 1, 1]);
    let mut produced: Vec<FreeComplex> = Vec::new();
    for i in [
        ideal(&ring(&["z", "w"], &[2, 5]), &["z^5 - w^2"]),
        ideal(&r3, &["x*z - y^2"]),
        ideal(&r3, &["x", "y", "z"]),
        ideal(&r4, &["x*z", "x*w", "y*z", "y*w"]),
        ideal(&r4, &["x*z - y^2", "x*w - y*z", "y*w - z^2"]),
    ] {
        produced.push(strata_for(&i)?.0);
    }
    let xyz = ideal(&r3, &["x", "y", "z"]);
    let koszul = koszul_complex(xyz.generators()).map_err(|e| e.to_string())?;
    let bad = koszul_complex(ideal(&r3, &["x", "x*y"]).generators()).map_err(|e| e.to_string())?;
    produced.push(koszul.clone());
    produced.push(bad.clone());
    for c in &produced {
        ensure(c.is_complex(), || {
            format!("maps do not compose to zero, ranks {:?}", c.ranks())
        })?;
        let rho = c.expected_ranks();
        let ranks = c.ranks();
        // rho[j] is ρ_{j+1}; ρ_{N+1} = 0.
        let rho_at = |k: usize| if k > c.len() { 0 } else { rho[k - 1] };
        for k in 1..=c.len() {
            ensure(
                rho_at(k) + rho_at(k + 1) == ranks[k] as i64 && rho_at(k) >= 0,
                || format!("ranks {ranks:?}, rho {rho:?} inconsistent at {k}"),
            )?;
        }
    }
    let acyclic = check_acyclicity(&koszul, &mut Budget::default()).map_err(|e| e.to_string())?;
    let failing = check_acyclicity(&bad, &mut Budget::default()).map_err(|e| e.to_string())?;
    ensure(acyclic.acyclic, || "Koszul(x,y,z) not certified".into())?;
    ensure(!failing.acyclic, || "Koszul(x,xy) certified acyclic".into())?;
    Ok(format!(
        "{} complexes sound; K(x,y,z) acyclic, K(x,xy) fails at {:?}",
        produced.len(),
        failing.failure
    ))
}

fn lojasiewicz() -> Outcome {
    let r = ring(&["z", "w"], &[2, 5]);
    let radii = geometric_radii(1e-1, 1e-3, 5);
    let sampler = VarietySampler::monomial_curve(&[2, 5], radii, MIN_POINTS / 5, 7);
    let pts = sample_variety(&sampler).map_err(|e| e.to_string())?;
    ensure(pts.len() >= MIN_POINTS, || format!("{} points", pts.len()))?;
    let p = |s: &str| Polynomial::parse(s, &r).expect("valid polynomial");
    let first = loja_exponent_estimate(&p("w"), &[p("z")], &pts).map_err(|e| e.to_string())?;
    let second =
        loja_exponent_estimate(&p("z^3"), &[p("z"), p("w")], &pts).map_err(|e| e.to_string())?;
    ensure((first.slope - 2.5).abs() <= SLOPE_TOL, || {
        format!("slope w/z {}", first.slope)
    })?;
    ensure((second.slope - 3.0).abs() <= SLOPE_TOL, || {
        format!("slope z^3/(z,w) {}", second.slope)
    })?;
    Ok(format!(
        "slopes {:.4} and {:.4} on {} points",
        first.slope,
        second.slope,
        pts.len()
    ))
}

fn reproducibility() -> Outcome {
    let session = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("sessions/acceptance.bsw");
    let run = || -> Result<serde_json::Value, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_bsw"))
            .arg("run")
            .arg(&session)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("bsw exited with {}", out.status)
        })?;
        let mut doc: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        ensure(doc["provenance"]["timestamp"].is_u64(), || {
            "report has no timestamp".into()
        })?;
        strip_timestamp(&mut doc);
        Ok(doc)
    };
    let (a, b) = (run()?, run()?);
    let (a, b) = (
        serde_json::to_string_pretty(&a).unwrap(),
        serde_json::to_string_pretty(&b).unwrap(),
    );
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("identical reports, {} bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("cusp suite", cusp_suite, Duration::from_secs(1)),
        (
            "classical containment",
            classical_bs,
            Duration::from_secs(60),
        ),
        ("strata and depth", strata_criteria, Duration::from_secs(30)),
        ("normality", normality, Duration::from_secs(30)),
        ("uniform exponent search", huneke, Duration::from_secs(60)),
        (
            "membership oracle",
            groebner_oracle,
            Duration::from_secs(60),
        ),
        (
            "complex soundness",
            complex_soundness,
            Duration::from_secs(30),
        ),
        ("exponent estimator", lojasiewicz, Duration::from_secs(5)),
        ("reproducibility", reproducibility, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > *limit => Err(format!("{d}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(d) => println!("PASS criterion {} ({name}): {d} [{took:.2?}]", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {e} [{took:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
