use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of candidate ideals [`huneke_mu`] will enumerate.
pub const SEARCH_CAP: usize = 200_000;

/// Additively closed subset of `ℕ` with finite complement, given by
/// generators with `gcd = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// `member[s]` for `s < conductor`.
    member: Vec<bool>,
    conductor: u64,
}

impl NumericalSemigroup {
    pub fn new(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() || gens.contains(&0) {
            return Err(Error::Validation(
                "semigroup generators must be positive and nonempty".into(),
            ));
        }
        let g = gens.iter().fold(0u64, |a, &b| a.gcd(&b));
        if g != 1 {
            return Err(Error::Validation(format!(
                "semigroup generators have gcd {g}"
            )));
        }
        let mut generators: Vec<u64> = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        let smallest = generators[0];
        // Once `smallest` consecutive integers are members, all later ones are.
        let mut member = vec![true];
        let mut run = 1u64;
        let mut s = 0u64;
        while run < smallest {
            s += 1;
            let m = generators
                .iter()
                .any(|&g| g <= s && member[(s - g) as usize]);
            member.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let mut conductor = member.len() as u64;
        while conductor > 0 && member[conductor as usize - 1] {
            conductor -= 1;
        }
        member.truncate(conductor as usize);
        let minimal = generators
            .iter()
            .copied()
            .filter(|&g| {
                !(1..g).any(|a| {
                    Self::member_in(&member, conductor, a)
                        && Self::member_in(&member, conductor, g - a)
                })
            })
            .collect();
        Ok(NumericalSemigroup {
            generators: minimal,
            member,
            conductor,
        })
    }

    fn member_in(member: &[bool], conductor: u64, s: u64) -> bool {
        s >= conductor || member[s as usize]
    }

    /// Minimal generators.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Least `c` with `[c, ∞) ⊆ S`.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn contains(&self, s: u64) -> bool {
        Self::member_in(&self.member, self.conductor, s)
    }

    pub fn contains_signed(&self, s: i64) -> bool {
        s >= 0 && self.contains(s as u64)
    }

    pub fn gaps(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&s| !self.contains(s)).collect()
    }

    /// Members in `[lo, hi)`.
    pub fn elements_in(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        (lo..hi).filter(move |&s| self.contains(s))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        write!(f, "<{}>", g.join(","))
    }
}

/// Monomial ideal `(t^{s_1}, …, t^{s_k})` of the semigroup ring, stored by
/// its minimal shifts: no `s_j − s_i` lies in `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SemigroupIdeal {
    shifts: Vec<u64>,
}

impl SemigroupIdeal {
    pub fn new(shifts: &[u64], s: &NumericalSemigroup) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::Validation("ideal needs a generator".into()));
        }
        if let Some(&bad) = shifts.iter().find(|&&x| x == 0 || !s.contains(x)) {
            return Err(Error::Validation(format!(
                "t^{bad} is not a generator of the maximal ideal of the ring"
            )));
        }
        Ok(SemigroupIdeal::minimal(shifts.iter().copied(), s))
    }

    fn minimal(shifts: impl IntoIterator<Item = u64>, s: &NumericalSemigroup) -> Self {
        let sorted: BTreeSet<u64> = shifts.into_iter().collect();
        let mut out: Vec<u64> = Vec::new();
        for x in sorted {
            if !out.iter().any(|&y| s.contains(x - y)) {
                out.push(x);
            }
        }
        SemigroupIdeal { shifts: out }
    }

    pub fn shifts(&self) -> &[u64] {
        &self.shifts
    }

    /// `v(A) = min shifts`, the order of the ideal.
    pub fn order(&self) -> u64 {
        self.shifts[0]
    }

    /// Whether `t^x` lies in the ideal; `x` need not be in `S`.
    pub fn contains(&self, x: u64, s: &NumericalSemigroup) -> bool {
        self.shifts.iter().any(|&a| x >= a && s.contains(x - a))
    }

    pub fn product(&self, other: &SemigroupIdeal, s: &NumericalSemigroup) -> SemigroupIdeal {
        SemigroupIdeal::minimal(
            self.shifts
                .iter()
                .flat_map(|a| other.shifts.iter().map(move |b| a + b)),
            s,
        )
    }

    /// `A^k` for `k ≥ 1`.
    pub fn power(&self, k: u32, s: &NumericalSemigroup) -> SemigroupIdeal {
        let mut acc = self.clone();
        for _ in 1..k.max(1) {
            acc = acc.product(self, s);
        }
        acc
    }

    /// Integral closure `{t^x : x ∈ S, x ≥ v(A)}`, generated by the members
    /// of `S` in `[v, v + c)`.
    pub fn closure(&self, s: &NumericalSemigroup) -> SemigroupIdeal {
        let v = self.order();
        SemigroupIdeal::minimal(s.elements_in(v, v + s.conductor().max(1)), s)
    }

    pub fn is_contained_in(&self, other: &SemigroupIdeal, s: &NumericalSemigroup) -> bool {
        self.shifts.iter().all(|&x| other.contains(x, s))
    }
}

impl fmt::Display for SemigroupIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.shifts.iter().map(|x| format!("t^{x}")).collect();
        write!(f, "({})", g.join(", "))
    }
}

fn require_member(x: u64, s: &NumericalSemigroup) -> Result<()> {
    if s.contains(x) {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "t^{x} is not an element of the ring: {x} is a gap of {s}"
        )))
    }
}

/// Whether `t^x ∈ A`.
pub fn germ_ideal_member(x: u64, a: &SemigroupIdeal, s: &NumericalSemigroup) -> Result<bool> {
    require_member(x, s)?;
    Ok(a.contains(x, s))
}

/// Whether `t^x` is integral over `A`: on an irreducible curve germ this is
/// the order test `x ≥ v(A)`.
pub fn germ_closure_member(x: u64, a: &SemigroupIdeal, s: &NumericalSemigroup) -> Result<bool> {
    require_member(x, s)?;
    Ok(x >= a.order())
}

/// Which side of the containment is raised to the power `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMode {
    /// `closure(A^N) ⊆ A^ℓ`.
    Power,
    /// `closure(A)^N ⊆ A^ℓ`.
    ClosurePower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermExponent {
    /// Least `N ≥ 1` for which the containment holds.
    pub exponent: u32,
    /// An element of the `N − 1` side outside `A^ℓ`, certifying that `N` is
    /// minimal; absent when `N = 1`.
    pub witness: Option<u64>,
}

/// Least `N ≥ 1` with `closure(A^N) ⊆ A^ℓ` (or `closure(A)^N ⊆ A^ℓ`).
///
/// `A^ℓ` contains `t^{ℓ v}·S ⊇ [ℓ v + c, ∞)`, so only orders below
/// `ℓ v + c` can fail; beyond `N = ℓ + ⌈c / v⌉` the test is vacuous.
pub fn germ_bs_exponent(
    a: &SemigroupIdeal,
    ell: u32,
    s: &NumericalSemigroup,
    mode: ExponentMode,
) -> Result<GermExponent> {
    if ell == 0 {
        return Err(Error::Validation("ell must be at least 1".into()));
    }
    let v = a.order();
    let target = a.power(ell, s);
    let bound = ell as u64 * v + s.conductor();
    let closure = a.closure(s);
    let failure = |n: u32| -> Option<u64> {
        match mode {
            ExponentMode::Power => s
                .elements_in(n as u64 * v, bound)
                .find(|&x| !target.contains(x, s)),
            ExponentMode::ClosurePower => {
                let p = closure.power(n, s);
                s.elements_in(n as u64 * v, bound)
                    .find(|&x| p.contains(x, s) && !target.contains(x, s))
            }
        }
    };
    let mut witness = None;
    let mut n = 1u32;
    while let Some(w) = failure(n) {
        witness = Some(w);
        n += 1;
    }
    Ok(GermExponent {
        exponent: n,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HunekeSearch {
    /// `max (N(A, ℓ) − ℓ + 1)` over the searched ideals: an empirical lower
    /// bound for the uniform exponent of the ring.
    pub mu: u32,
    pub witness_ideal: SemigroupIdeal,
    pub witness_ell: u32,
    /// Number of ideals enumerated.
    pub ideals: usize,
}

/// Every monomial ideal of the semigroup ring with `v(A) ≤ v_max`, by its
/// minimal shifts, in a fixed order: by order `v`, then by the extra
/// generators chosen in increasing position from `(v, v + c)`.
///
/// Members of `S` at or beyond `v + c` already lie in `t^v·S`, so no minimal
/// generator can sit there.
pub fn enumerate_ideals(s: &NumericalSemigroup, v_max: u64) -> Result<Vec<SemigroupIdeal>> {
    let mut out = Vec::new();
    for v in s.elements_in(1, v_max + 1) {
        let extras: Vec<u64> = s
            .elements_in(v + 1, v + s.conductor().max(1))
            .filter(|&x| !s.contains(x - v))
            .collect();
        let mut chosen = vec![v];
        backtrack(s, &extras, 0, &mut chosen, &mut out)?;
    }
    Ok(out)
}

fn backtrack(
    s: &NumericalSemigroup,
    extras: &[u64],
    from: usize,
    chosen: &mut Vec<u64>,
    out: &mut Vec<SemigroupIdeal>,
) -> Result<()> {
    if out.len() >= SEARCH_CAP {
        return Err(Error::Cap(format!(
            "more than {SEARCH_CAP} candidate ideals"
        )));
    }
    out.push(SemigroupIdeal {
        shifts: chosen.clone(),
    });
    for k in from..extras.len() {
        let x = extras[k];
        if chosen.iter().all(|&y| !s.contains(x - y)) {
            chosen.push(x);
            backtrack(s, extras, k + 1, chosen, out)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Exhaustive search for the largest `N(A, ℓ) − ℓ + 1` over monomial
/// ideals with `v(A) ≤ v_max` and `1 ≤ ℓ ≤ ℓ_max`. Ties keep the first
/// witness in enumeration order.
pub fn huneke_mu(s: &NumericalSemigroup, v_max: u64, ell_max: u32) -> Result<HunekeSearch> {
    if v_max == 0 || ell_max == 0 {
        return Err(Error::Validation("search bounds must be positive".into()));
    }
    let ideals = enumerate_ideals(s, v_max)?;
    let mut best: Option<(u32, usize, u32)> = None;
    for (idx, a) in ideals.iter().enumerate() {
        for ell in 1..=ell_max {
            let n = germ_bs_exponent(a, ell, s, ExponentMode::Power)?.exponent;
            let mu = n + 1 - ell;
            if best.is_none_or(|(m, _, _)| mu > m) {
                best = Some((mu, idx, ell));
            }
        }
    }
    match best {
        Some((mu, idx, ell)) => Ok(HunekeSearch {
            mu,
            witness_ideal: ideals[idx].clone(),
            witness_ell: ell,
            ideals: ideals.len(),
        }),
        None => Err(Error::Validation(format!(
            "no ideal of {s} has order at most {v_max}"
        ))),
    }
}
