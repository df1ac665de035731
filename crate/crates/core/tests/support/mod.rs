//! Independent oracles for the integration tests. Nothing here calls into
//! the Gröbner, closure or semigroup code it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;
/// Sparse polynomial as exponent vector → coefficient.
pub type Dense = BTreeMap<Vec<u32>, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Every exponent vector in `n` variables of total degree `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

pub fn shift(p: &Dense, m: &[u32]) -> Dense {
    p.iter()
        .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
        .collect()
}

/// Membership of `p` in the ideal of homogeneous `gens` (unit weights),
/// by Gaussian elimination in each degree up to `max_deg`.
///
/// For homogeneous ideals the degree-`D` part of `I` is spanned by the
/// products `m · g` with `deg m + deg g = D`, so the test is exact for
/// polynomials of degree at most `max_deg`. Returns `None` past that.
pub fn dense_member(p: &Dense, gens: &[Dense], n: usize, max_deg: u32) -> Option<bool> {
    let mut by_degree: BTreeMap<u32, Dense> = BTreeMap::new();
    for (e, c) in p {
        by_degree
            .entry(degree(e))
            .or_default()
            .insert(e.clone(), c.clone());
    }
    for (&d, part) in &by_degree {
        if d > max_deg {
            return None;
        }
        let mut rows: Vec<Dense> = Vec::new();
        for g in gens {
            let gd = degree(g.keys().next().expect("nonzero generator"));
            if gd > d {
                continue;
            }
            for m in monomials_of_degree(n, d - gd) {
                rows.push(shift(g, &m));
            }
        }
        if !in_span(part, rows) {
            return Some(false);
        }
    }
    Some(true)
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span(v: &Dense, rows: Vec<Dense>) -> bool {
    // Echelon form keyed by pivot monomial.
    let mut pivots: BTreeMap<Vec<u32>, Dense> = BTreeMap::new();
    for r in rows {
        if let Some(r) = reduce(r, &pivots) {
            let (lead, c) = r
                .iter()
                .next_back()
                .map(|(e, c)| (e.clone(), c.clone()))
                .unwrap();
            let inv = Q::one() / c;
            let r: Dense = r.into_iter().map(|(e, x)| (e, x * &inv)).collect();
            pivots.insert(lead, r);
        }
    }
    reduce(v.clone(), &pivots).is_none()
}

fn reduce(mut r: Dense, pivots: &BTreeMap<Vec<u32>, Dense>) -> Option<Dense> {
    loop {
        r.retain(|_, c| !c.is_zero());
        let target = r
            .iter()
            .rev()
            .find(|(e, _)| pivots.contains_key(*e))
            .map(|(e, c)| (e.clone(), c.clone()));
        match target {
            None => return if r.is_empty() { None } else { Some(r) },
            Some((e, c)) => {
                for (k, x) in &pivots[&e] {
                    let entry = r.entry(k.clone()).or_insert_with(Q::zero);
                    *entry -= &c * x;
                }
            }
        }
    }
}

/// Random homogeneous polynomial of degree `d` with up to `terms` terms and
/// coefficients in `[-3, 3]`.
pub fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, d: u32, terms: usize) -> Dense {
    let monos = monomials_of_degree(n, d);
    let mut p = Dense::new();
    for _ in 0..terms.max(1) {
        let m = monos[rng.gen_range(0..monos.len())].clone();
        let c = rng.gen_range(-3i64..=3);
        *p.entry(m).or_insert_with(Q::zero) += q(c);
    }
    p.retain(|_, c| !c.is_zero());
    if p.is_empty() {
        p.insert(monos[0].clone(), q(1));
    }
    p
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert_with(Q::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Renders in the library's input syntax with the given variable names.
pub fn render(p: &Dense, names: &[&str]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = p
        .iter()
        .map(|(e, c)| {
            let mut s = format!("({c})");
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    s.push_str(&format!("*{}^{k}", names[i]));
                }
            }
            s
        })
        .collect();
    parts.join(" + ")
}

/// Numerical semigroup membership by direct search, `gens` with gcd 1.
pub struct BruteSemigroup {
    member: Vec<bool>,
}

impl BruteSemigroup {
    pub fn new(gens: &[u64], limit: usize) -> Self {
        let mut member = vec![false; limit + 1];
        member[0] = true;
        for s in 1..=limit {
            member[s] = gens
                .iter()
                .any(|&g| g as usize <= s && member[s - g as usize]);
        }
        BruteSemigroup { member }
    }

    pub fn limit(&self) -> usize {
        self.member.len() - 1
    }

    pub fn has(&self, s: usize) -> bool {
        self.member[s]
    }

    /// Last gap plus one, within the limit.
    pub fn conductor(&self) -> usize {
        (0..=self.limit())
            .rev()
            .find(|&s| !self.member[s])
            .map_or(0, |g| g + 1)
    }

    /// The ideal generated by `t^{shifts}`, as a set of orders up to the limit.
    pub fn ideal(&self, shifts: &[usize]) -> BTreeSet<usize> {
        (0..=self.limit())
            .filter(|&s| shifts.iter().any(|&a| s >= a && self.member[s - a]))
            .collect()
    }

    /// Product of ideals given as sets, truncated at the limit.
    pub fn product(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &x in a {
            for &y in b {
                if x + y <= self.limit() {
                    out.insert(x + y);
                }
            }
        }
        out
    }

    pub fn power(&self, a: &BTreeSet<usize>, k: u32) -> BTreeSet<usize> {
        let mut acc = a.clone();
        for _ in 1..k {
            acc = self.product(&acc, a);
        }
        acc
    }

    /// Least `N` with every member of order `≥ N v` inside `A^ℓ`, checked
    /// below `safe`, a bound past which `A^ℓ` contains every member.
    pub fn exponent(&self, a: &BTreeSet<usize>, ell: u32, safe: usize) -> u32 {
        let v = *a.iter().next().unwrap();
        let target = self.power(a, ell);
        let mut n = 1u32;
        while (n as usize * v..safe).any(|s| self.member[s] && !target.contains(&s)) {
            n += 1;
        }
        n
    }

    /// Every ideal of order `v ≤ v_max`, as its set of orders below the
    /// window end `v + c`, enumerated as ideal-closed subsets of the window.
    pub fn ideals(&self, v_max: usize) -> Vec<Vec<usize>> {
        let c = self.conductor();
        let mut out = Vec::new();
        for v in 1..=v_max {
            if !self.member[v] {
                continue;
            }
            let window: Vec<usize> = (v + 1..v + c.max(1)).filter(|&s| self.member[s]).collect();
            for mask in 0u64..(1 << window.len()) {
                let mut set: Vec<usize> = vec![v];
                set.extend(
                    window
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &s)| s),
                );
                let closed = set.iter().all(|&x| {
                    (0..v + c.max(1) - x)
                        .all(|y| !self.member[y] || set.contains(&(x + y)) || x + y >= v + c.max(1))
                });
                if closed {
                    out.push(set);
                }
            }
        }
        out
    }

    /// `max N(A, ℓ) − ℓ + 1` by exhaustive search over [`Self::ideals`].
    pub fn mu(&self, v_max: usize, ell_max: u32) -> u32 {
        let c = self.conductor();
        let mut best = 0;
        for gens in self.ideals(v_max) {
            let a = self.ideal(&gens);
            for ell in 1..=ell_max {
                let safe = ell as usize * gens[0] + c + 1;
                best = best.max(self.exponent(&a, ell, safe) + 1 - ell);
            }
        }
        best
    }
}

/// Monomial ideal membership and powers on raw exponent vectors.
pub fn mono_contains(gens: &[Vec<u32>], v: &[u32]) -> bool {
    gens.iter().any(|g| g.iter().zip(v).all(|(a, b)| a <= b))
}

pub fn mono_power(gens: &[Vec<u32>], k: u32) -> Vec<Vec<u32>> {
    let mut acc = vec![vec![0; gens[0].len()]];
    for _ in 0..k {
        let mut next = Vec::new();
        for a in &acc {
            for g in gens {
                next.push(a.iter().zip(g).map(|(x, y)| x + y).collect::<Vec<u32>>());
            }
        }
        next.sort();
        next.dedup();
        acc = next;
    }
    acc
}

/// Sufficient test for integral dependence: `k v ∈ M^k` for some `k ≤ k_max`.
pub fn integral_by_powers(gens: &[Vec<u32>], v: &[u32], k_max: u32) -> bool {
    (1..=k_max).any(|k| {
        let kv: Vec<u32> = v.iter().map(|x| x * k).collect();
        mono_contains(&mono_power(gens, k), &kv)
    })
}
