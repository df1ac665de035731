use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::engine::{self, ModMono, ModVec, Quotients, TermOrder};
use crate::error::{Budget, Error, Result};
use crate::poly::{same_ring, Coeff, ExponentVector, MonomialOrder, Polynomial, RingContext};

/// The ring's own monomial order, lifted to rank-one modules.
pub(crate) struct RingOrder<'a>(pub &'a RingContext);

impl TermOrder for RingOrder<'_> {
    #[inline]
    fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering {
        self.0.cmp(&a.exps, &b.exps)
    }

    fn var_names(&self) -> &[String] {
        self.0.names()
    }
}

pub(crate) fn to_modvec(p: &Polynomial) -> ModVec {
    ModVec {
        terms: p
            .terms()
            .iter()
            .map(|(e, c)| (ModMono::new(0, e.clone()), c.clone()))
            .collect(),
    }
}

pub(crate) fn from_modvec(ring: &Arc<RingContext>, v: ModVec) -> Polynomial {
    Polynomial::from_sorted(
        ring,
        v.terms.into_iter().map(|(m, c)| (m.exps, c)).collect(),
    )
}

/// Reduced Gröbner basis of an ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<RingContext>,
    elements: Vec<Polynomial>,
    /// `transform[k][i]`: coefficient of input generator `i` in element `k`.
    transform: Option<Vec<Vec<Polynomial>>>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    /// Always true: the engine returns the monic, interreduced basis.
    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<ExponentVector> {
        self.elements
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect()
    }

    /// Expresses each basis element in the generators the basis was built from.
    pub fn transform(&self) -> Option<&[Vec<Polynomial>]> {
        self.transform.as_deref()
    }

    /// Checks that every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let v: Vec<ModVec> = self.elements.iter().map(to_modvec).collect();
        engine::satisfies_buchberger_criterion(&v, &RingOrder(&self.ring))
    }
}

/// Reduced Gröbner basis of `gens` under the ring's order.
pub fn groebner_basis(
    gens: &[Polynomial],
    ring: &Arc<RingContext>,
    budget: &mut Budget,
) -> Result<GroebnerBasis> {
    compute_gb(gens, ring, budget, false)
}

fn compute_gb(
    gens: &[Polynomial],
    ring: &Arc<RingContext>,
    budget: &mut Budget,
    track: bool,
) -> Result<GroebnerBasis> {
    for g in gens {
        if !same_ring(g.ring(), ring) {
            return Err(Error::Structural("generator from a different ring".into()));
        }
    }
    let vecs: Vec<ModVec> = gens.iter().map(to_modvec).collect();
    let out = engine::buchberger(&vecs, &RingOrder(ring), budget, track, true)?;
    let elements = out
        .basis
        .into_iter()
        .map(|v| from_modvec(ring, v))
        .collect();
    let transform = out.reps.map(|reps| {
        reps.into_iter()
            .map(|rep| {
                let mut row = vec![Polynomial::zero(ring); gens.len()];
                let mut per: Vec<Vec<(ExponentVector, Coeff)>> = vec![Vec::new(); gens.len()];
                for (m, c) in rep.terms {
                    per[m.comp].push((m.exps, c));
                }
                for (i, terms) in per.into_iter().enumerate() {
                    row[i] = Polynomial::from_terms(ring, terms).expect("same ring");
                }
                row
            })
            .collect()
    });
    Ok(GroebnerBasis {
        ring: ring.clone(),
        elements,
        transform,
    })
}

/// Remainder of `p` on division by `g`: no term is divisible by a leading
/// monomial of the basis.
pub fn normal_form(p: &Polynomial, g: &GroebnerBasis) -> Result<Polynomial> {
    if !same_ring(p.ring(), &g.ring) {
        return Err(Error::Structural(
            "polynomial and basis use different rings or orders".into(),
        ));
    }
    let basis: Vec<ModVec> = g.elements.iter().map(to_modvec).collect();
    let r = engine::reduce(
        &to_modvec(p),
        &basis,
        None,
        &RingOrder(&g.ring),
        &mut Budget::unlimited(),
        None,
    )?;
    Ok(from_modvec(&g.ring, r))
}

/// Division record: remainder plus one quotient per basis element.
pub fn divide(p: &Polynomial, g: &GroebnerBasis) -> Result<(Vec<Polynomial>, Polynomial)> {
    if !same_ring(p.ring(), &g.ring) {
        return Err(Error::Structural(
            "polynomial and basis use different rings or orders".into(),
        ));
    }
    let basis: Vec<ModVec> = g.elements.iter().map(to_modvec).collect();
    let mut q: Quotients = vec![Vec::new(); basis.len()];
    let r = engine::reduce(
        &to_modvec(p),
        &basis,
        None,
        &RingOrder(&g.ring),
        &mut Budget::unlimited(),
        Some(&mut q),
    )?;
    let quotients = q
        .into_iter()
        .map(|terms| Polynomial::from_terms(&g.ring, terms).expect("same ring"))
        .collect();
    Ok((quotients, from_modvec(&g.ring, r)))
}

/// Ideal of a polynomial ring given by generators, with a lazily computed
/// Gröbner basis.
///
/// The cached basis is published at most once; concurrent callers may both
/// compute it, and both observe the same value afterwards.
pub struct Ideal {
    ring: Arc<RingContext>,
    generators: Vec<Polynomial>,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            gb,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// How [`ideal_combine`] joins two ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineKind {
    Sum,
    Product,
    Intersection,
}

impl Ideal {
    /// Zero generators are dropped; an empty list is the zero ideal.
    pub fn new(ring: &Arc<RingContext>, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            if !same_ring(g.ring(), ring) {
                return Err(Error::Structural("generator from a different ring".into()));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
        })
    }

    pub fn parse(ring: &Arc<RingContext>, gens: &[&str]) -> Result<Self> {
        let g = gens
            .iter()
            .map(|s| Polynomial::parse(s, ring))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, g)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn groebner_basis(&self, budget: &mut Budget) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = groebner_basis(&self.generators, &self.ring, budget)?;
        let _ = self.gb.set(g);
        Ok(self.gb.get().expect("just set"))
    }

    pub fn cached_groebner_basis(&self) -> Option<&GroebnerBasis> {
        self.gb.get()
    }

    pub fn is_unit(&self, budget: &mut Budget) -> Result<bool> {
        Ok(self.groebner_basis(budget)?.is_unit())
    }

    pub fn contains(&self, p: &Polynomial, budget: &mut Budget) -> Result<bool> {
        ideal_member(p, self, budget)
    }

    /// Cofactors `h_i` with `p = Σ h_i g_i` over the generators, or `None`
    /// when `p` is not in the ideal.
    pub fn membership_certificate(
        &self,
        p: &Polynomial,
        budget: &mut Budget,
    ) -> Result<Option<Vec<Polynomial>>> {
        if !same_ring(p.ring(), &self.ring) {
            return Err(Error::Structural("polynomial from a different ring".into()));
        }
        if p.is_zero() {
            return Ok(Some(vec![
                Polynomial::zero(&self.ring);
                self.generators.len()
            ]));
        }
        let gb = compute_gb(&self.generators, &self.ring, budget, true)?;
        let (q, r) = divide(p, &gb)?;
        if !r.is_zero() {
            return Ok(None);
        }
        let transform = gb.transform.as_ref().expect("tracked");
        let mut h = vec![Polynomial::zero(&self.ring); self.generators.len()];
        for (k, qk) in q.iter().enumerate() {
            if qk.is_zero() {
                continue;
            }
            for (i, t) in transform[k].iter().enumerate() {
                h[i] = &h[i] + &(qk * t);
            }
        }
        Ok(Some(h))
    }

    pub fn power(&self, l: u32, cap: u64) -> Result<Ideal> {
        ideal_power(self, l, cap)
    }

    pub fn dimension(&self, budget: &mut Budget) -> Result<i64> {
        krull_dimension(self, budget)
    }

    /// Same ideal with every generator quasi-homogeneous under the ring weights.
    pub fn is_quasi_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_quasi_homogeneous())
    }

    /// True iff both ideals have the same reduced Gröbner basis.
    pub fn same_ideal(&self, other: &Ideal, budget: &mut Budget) -> Result<bool> {
        let a = self.groebner_basis(budget)?.elements().to_vec();
        let b = other.groebner_basis(budget)?.elements().to_vec();
        Ok(a == b)
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &Ideal, budget: &mut Budget) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `p ∈ I`, decided by reduction against the reduced Gröbner basis.
pub fn ideal_member(p: &Polynomial, i: &Ideal, budget: &mut Budget) -> Result<bool> {
    if !same_ring(p.ring(), &i.ring) {
        return Err(Error::Structural("polynomial from a different ring".into()));
    }
    if p.is_zero() {
        return Ok(true);
    }
    let gb = i.groebner_basis(budget)?;
    Ok(normal_form(p, gb)?.is_zero())
}

/// Sum, product or intersection of two ideals.
///
/// The intersection eliminates an auxiliary variable `t` from
/// `t·I + (1 − t)·J` under a block order with `t` first.
pub fn ideal_combine(
    i: &Ideal,
    j: &Ideal,
    kind: CombineKind,
    budget: &mut Budget,
) -> Result<Ideal> {
    if !same_ring(&i.ring, &j.ring) {
        return Err(Error::Structural("ideals live in different rings".into()));
    }
    let ring = &i.ring;
    match kind {
        CombineKind::Sum => Ideal::new(
            ring,
            i.generators.iter().chain(&j.generators).cloned().collect(),
        ),
        CombineKind::Product => {
            let mut gens = Vec::new();
            for a in &i.generators {
                for b in &j.generators {
                    gens.push(a * b);
                }
            }
            Ideal::new(ring, gens)
        }
        CombineKind::Intersection => {
            if i.is_zero_ideal() || j.is_zero_ideal() {
                return Ideal::new(ring, vec![]);
            }
            let mut names = vec![fresh_name(ring)];
            names.extend(ring.names().iter().cloned());
            let mut weights = vec![1];
            weights.extend_from_slice(ring.weights());
            let ext = Arc::new(RingContext::new(
                names,
                weights,
                MonomialOrder::Elimination {
                    block: 1,
                    rest: Box::new(ring.order().clone()),
                },
            )?);
            let map: Vec<usize> = (1..=ring.nvars()).collect();
            let t = Polynomial::var(&ext, 0);
            let one_minus_t = &Polynomial::one(&ext) - &t;
            let mut gens = Vec::new();
            for g in &i.generators {
                gens.push(&t * &g.embed(&ext, &map));
            }
            for g in &j.generators {
                gens.push(&one_minus_t * &g.embed(&ext, &map));
            }
            let gb = groebner_basis(&gens, &ext, budget)?;
            let mut out = Vec::new();
            for g in gb.elements() {
                if g.terms().iter().all(|(e, _)| e[0] == 0) {
                    let terms = g
                        .terms()
                        .iter()
                        .map(|(e, c)| (ExponentVector::new(e.as_slice()[1..].to_vec()), c.clone()));
                    out.push(Polynomial::from_terms(ring, terms)?);
                }
            }
            Ideal::new(ring, out)
        }
    }
}

fn fresh_name(ring: &RingContext) -> String {
    let mut name = "_t".to_string();
    while ring.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// `I^l`, generated by all `l`-fold products of generators.
///
/// Fails when `m^l` exceeds `cap`, where `m` is the generator count.
pub fn ideal_power(i: &Ideal, l: u32, cap: u64) -> Result<Ideal> {
    if l == 0 {
        return Err(Error::Validation("ideal power must be at least 1".into()));
    }
    let m = i.generators.len() as u64;
    match m.checked_pow(l) {
        Some(n) if n <= cap => {}
        _ => {
            return Err(Error::Cap(format!(
                "{m}^{l} generator products exceed the cap of {cap}"
            )))
        }
    }
    // Multisets of generator indices, nondecreasing.
    let mut gens = Vec::new();
    let mut idx = vec![0usize; l as usize];
    if m == 0 {
        return Ideal::new(&i.ring, vec![]);
    }
    loop {
        let mut p = Polynomial::one(&i.ring);
        for &k in &idx {
            p = &p * &i.generators[k];
        }
        if !gens.contains(&p) {
            gens.push(p);
        }
        // next multiset
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return Ideal::new(&i.ring, gens);
            }
            pos -= 1;
            if idx[pos] + 1 < m as usize {
                let v = idx[pos] + 1;
                for slot in &mut idx[pos..] {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Dimension of `V(I)`: the largest set of variables supporting no leading
/// monomial of the Gröbner basis. The unit ideal gives −1.
pub fn krull_dimension(i: &Ideal, budget: &mut Budget) -> Result<i64> {
    let n = i.ring.nvars();
    if i.is_zero_ideal() {
        return Ok(n as i64);
    }
    let gb = i.groebner_basis(budget)?;
    if gb.is_unit() {
        return Ok(-1);
    }
    let masks: Vec<u64> = gb
        .leading_monomials()
        .iter()
        .map(|e| e.support_mask())
        .collect();
    Ok(max_independent_set(n, &masks) as i64)
}

/// Largest `S ⊆ {0..n}` such that no mask is a subset of `S`.
pub(crate) fn max_independent_set(n: usize, masks: &[u64]) -> usize {
    let mut best = 0;
    for s in 0u64..(1u64 << n) {
        let size = s.count_ones() as usize;
        if size <= best {
            continue;
        }
        if masks.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    best
}
