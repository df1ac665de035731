mod support;

use std::sync::Arc;

use proptest::prelude::*;

use bsw::closure::{
    bs_verify_monomial, germ_bs_exponent, huneke_mu, ExponentMode, MonomialIdeal,
    NumericalSemigroup, SemigroupIdeal,
};
use bsw::groebner::Ideal;
use bsw::loja::{geometric_radii, loja_exponent_estimate, sample_variety, VarietySampler};
use bsw::poly::{ExponentVector, MonomialOrder, Polynomial, RingContext};
use bsw::resolution::{free_resolution, koszul_complex, FreeComplex, ResolutionMode};
use bsw::strata::strata;
use bsw::Budget;

fn ring(names: &[&str]) -> Arc<RingContext> {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let w = vec![1; names.len()];
    Arc::new(RingContext::new(names, w, MonomialOrder::Degrevlex).unwrap())
}

fn monomial_ideal(n: usize, max_gens: usize, max_deg: u32) -> impl Strategy<Value = MonomialIdeal> {
    prop::collection::vec(prop::collection::vec(0..=max_deg, n), 1..=max_gens)
        .prop_filter("no unit generator", |g| {
            g.iter().all(|e| e.iter().any(|&x| x > 0))
        })
        .prop_map(move |g| {
            MonomialIdeal::new(n, g.into_iter().map(ExponentVector::new).collect()).unwrap()
        })
}

fn to_raw(m: &MonomialIdeal) -> Vec<Vec<u32>> {
    m.generators()
        .iter()
        .map(|g| g.as_slice().to_vec())
        .collect()
}

fn monomial_string(e: &[u32], names: &[&str]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| format!("{}^{k}", names[i]))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn check_complex(c: &FreeComplex) -> Result<(), TestCaseError> {
    prop_assert!(c.is_complex());
    let rho = c.expected_ranks();
    let ranks = c.ranks();
    for k in 1..=c.len() {
        let next = if k < c.len() { rho[k] } else { 0 };
        prop_assert!(rho[k - 1] >= 0);
        prop_assert_eq!(rho[k - 1] + next, ranks[k] as i64);
    }
    Ok(())
}

const SEMIGROUPS: &[&[u64]] = &[&[2, 3], &[2, 5], &[3, 4], &[3, 5], &[2, 7]];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closure_is_an_idempotent_extension(m in monomial_ideal(2, 3, 5)) {
        let c = m.newton_closure().unwrap();
        prop_assert!(m.is_contained_in(&c));
        prop_assert_eq!(c.newton_closure().unwrap(), c.clone());
        prop_assert!(c.is_integrally_closed().unwrap());
    }

    #[test]
    fn closure_contains_power_witnesses(m in monomial_ideal(2, 3, 4)) {
        let c = m.newton_closure().unwrap();
        let raw = to_raw(&m);
        let corner = m.corner();
        for a in 0..=corner[0] {
            for b in 0..=corner[1] {
                if support::integral_by_powers(&raw, &[a, b], 4) {
                    prop_assert!(c.contains(&ExponentVector::new(vec![a, b])));
                }
            }
        }
    }

    #[test]
    fn closure_is_submultiplicative(m in monomial_ideal(2, 2, 3), n in monomial_ideal(2, 2, 3)) {
        let lhs = m.newton_closure().unwrap().product(&n.newton_closure().unwrap());
        let rhs = m.product(&n).newton_closure().unwrap();
        prop_assert!(lhs.is_contained_in(&rhs));
    }

    #[test]
    fn containment_chain_in_three_variables(m in monomial_ideal(3, 3, 3), ell in 1u32..=2) {
        let r = bs_verify_monomial(&m, ell, 3).unwrap();
        prop_assert!(r.holds, "counterexample {:?}", r.counterexample);
        // Raising the exponent keeps the containment.
        let more = bsw::closure::bs_containment(&m, r.exponent + 1, ell).unwrap();
        prop_assert!(more.holds);
    }

    #[test]
    fn germ_closure_power_never_exceeds_power(g in 0..SEMIGROUPS.len(), v in 2u64..9, ell in 1u32..=3) {
        let s = NumericalSemigroup::new(SEMIGROUPS[g]).unwrap();
        prop_assume!(s.contains(v));
        let a = SemigroupIdeal::new(&[v], &s).unwrap();
        let p = germ_bs_exponent(&a, ell, &s, ExponentMode::Power).unwrap();
        let c = germ_bs_exponent(&a, ell, &s, ExponentMode::ClosurePower).unwrap();
        prop_assert!(c.exponent <= p.exponent);
        prop_assert!(p.exponent >= ell);
    }

    #[test]
    fn loja_slope_is_scale_invariant(num in 1u32..1000, den in 1u32..1000, seed in 0u64..1000) {
        let r = ring(&["z", "w"]);
        let pts = sample_variety(&VarietySampler::monomial_curve(&[2, 5], geometric_radii(1e-1, 1e-3, 4), 6, seed)).unwrap();
        let p = |s: &str| Polynomial::parse(s, &r).unwrap();
        let base = loja_exponent_estimate(&p("w"), &[p("z")], &pts).unwrap();
        let scaled = loja_exponent_estimate(&p(&format!("{num}/{den} * w")), &[p("z")], &pts).unwrap();
        let scale = num as f64 / den as f64;
        prop_assert!((base.slope - scaled.slope).abs() <= 1e-12);
        prop_assert!((scaled.intercept - base.intercept - scale.ln()).abs() <= 1e-9);
    }

    #[test]
    fn loja_slope_matches_order_ratio(a in 1u32..5, b in 1u32..7) {
        // On t ↦ (t^2, t^3), |z^a| / |w|^b-type ratios are exact powers of |t|.
        let r = ring(&["z", "w"]);
        let pts = sample_variety(&VarietySampler::monomial_curve(&[2, 3], geometric_radii(1e-1, 1e-3, 4), 6, 1)).unwrap();
        let phi = Polynomial::parse(&format!("z^{a}"), &r).unwrap();
        let den = Polynomial::parse(&format!("w^{b}"), &r).unwrap();
        let est = loja_exponent_estimate(&phi, &[den], &pts).unwrap();
        let expected = (2 * a) as f64 / (3 * b) as f64;
        prop_assert!((est.slope - expected).abs() <= 1e-9, "slope {} vs {}", est.slope, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn resolutions_of_monomial_ideals_are_sound(m in monomial_ideal(3, 3, 2)) {
        let names = ["x", "y", "z"];
        let r = ring(&names);
        let gens: Vec<String> = m.generators().iter().map(|g| monomial_string(g.as_slice(), &names)).collect();
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        let i = Ideal::parse(&r, &refs).unwrap();
        let c = free_resolution(&i, None, ResolutionMode::Graded, &mut Budget::default()).unwrap();
        check_complex(&c)?;
        prop_assert_eq!(c.ranks()[0], 1);
        prop_assert!(c.len() <= 3);
        // Minimal: no unit entries survive.
        for f in c.maps() {
            prop_assert!(f.entries().all(|e| e.as_nonzero_constant().is_none()));
        }
    }

    #[test]
    fn complete_intersection_strata_do_not_depend_on_the_resolution(a in 1u32..4, b in 1u32..4, c in 1u32..4) {
        let r = ring(&["x", "y", "z"]);
        let gens = [format!("x^{a}"), format!("y^{b} + x*y^{}", b.saturating_sub(1)), format!("z^{c}")];
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        let i = Ideal::parse(&r, &refs).unwrap();
        prop_assume!(i.is_quasi_homogeneous());
        let mut budget = Budget::default();
        let koszul = koszul_complex(i.generators()).unwrap();
        let resolved = free_resolution(&i, None, ResolutionMode::Graded, &mut budget).unwrap();
        prop_assert_eq!(koszul.ranks(), resolved.ranks());
        let sk = strata(&koszul, &i, &mut budget).unwrap();
        let sr = strata(&resolved, &i, &mut budget).unwrap();
        let dims = |s: &bsw::strata::StrataReport| s.strata.iter().map(|st| (st.r, st.dim)).collect::<Vec<_>>();
        prop_assert_eq!(dims(&sk), dims(&sr));
    }

    #[test]
    fn huneke_mu_is_monotone_in_the_search_bounds(g in 0..SEMIGROUPS.len(), v in 3u64..8, l in 1u32..3) {
        let s = NumericalSemigroup::new(SEMIGROUPS[g]).unwrap();
        let small = huneke_mu(&s, v, l).unwrap().mu;
        prop_assert!(small <= huneke_mu(&s, v + 1, l).unwrap().mu);
        prop_assert!(small <= huneke_mu(&s, v, l + 1).unwrap().mu);
        let brute = support::BruteSemigroup::new(SEMIGROUPS[g], 120);
        prop_assert_eq!(small, brute.mu(v as usize, l));
    }
}
