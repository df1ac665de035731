//! Buchberger's algorithm over free modules `R^s`.
//!
//! Ideals are the rank-one case. Elements are sparse vectors whose terms are
//! `(component, monomial)` pairs sorted under a [`TermOrder`]. The same kernel
//! serves ideal bases, membership certificates and syzygy computations.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Budget, Error, Result};
use crate::poly::{format_coeff, format_monomial, Coeff, ExponentVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ModMono {
    pub comp: usize,
    pub exps: ExponentVector,
}

impl ModMono {
    pub fn new(comp: usize, exps: ExponentVector) -> Self {
        ModMono { comp, exps }
    }

    #[inline]
    pub fn divides(&self, other: &ModMono) -> bool {
        self.comp == other.comp && self.exps.divides(&other.exps)
    }
}

/// A multiplicative total order on module monomials.
pub(crate) trait TermOrder {
    fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering;
    fn var_names(&self) -> &[String];
}

/// Position-over-term lex order, used only to keep certificate vectors sorted.
pub(crate) struct CertOrder<'a> {
    pub names: &'a [String],
}

impl TermOrder for CertOrder<'_> {
    fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering {
        b.comp
            .cmp(&a.comp)
            .then_with(|| a.exps.as_slice().cmp(b.exps.as_slice()))
    }

    fn var_names(&self) -> &[String] {
        self.names
    }
}

/// Sparse module element, terms sorted descending, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModVec {
    pub terms: Vec<(ModMono, Coeff)>,
}

impl ModVec {
    pub fn zero() -> Self {
        ModVec { terms: Vec::new() }
    }

    pub fn from_unsorted(mut terms: Vec<(ModMono, Coeff)>, ord: &dyn TermOrder) -> Self {
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<(ModMono, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        ModVec { terms: out }
    }

    pub fn unit(comp: usize, nvars: usize) -> Self {
        ModVec {
            terms: vec![(ModMono::new(comp, ExponentVector::one(nvars)), Coeff::one())],
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn lm(&self) -> &ModMono {
        &self.terms[0].0
    }

    #[inline]
    pub fn lc(&self) -> &Coeff {
        &self.terms[0].1
    }

    pub fn scale(&self, c: &Coeff) -> ModVec {
        ModVec {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `self + c * x^shift * other`.
    pub fn add_scaled(
        &self,
        other: &ModVec,
        c: &Coeff,
        shift: &ExponentVector,
        ord: &dyn TermOrder,
    ) -> ModVec {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|(m, k)| (ModMono::new(m.comp, m.exps.mul(shift)), k * c))
            .peekable();
        loop {
            let step = match (a.peek(), b.peek()) {
                (Some((ma, _)), Some((mb, _))) => ord.cmp(ma, mb),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match step {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let (ma, ca) = a.next().unwrap();
                    let (_, cb) = b.next().unwrap();
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                }
            }
        }
        ModVec { terms: out }
    }

    pub fn monic(&self) -> (ModVec, Coeff) {
        let inv = self.lc().recip();
        (self.scale(&inv), inv)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let mono = format_monomial(&m.exps, names);
            let _ = write!(s, "({})", format_coeff(c));
            if !mono.is_empty() {
                let _ = write!(s, "*{mono}");
            }
            let _ = write!(s, "*e{}", m.comp);
        }
        s
    }
}

/// Quotient record of a division: `quotients[k]` multiplies basis element `k`.
pub(crate) type Quotients = Vec<Vec<(ExponentVector, Coeff)>>;

fn find_divisor(m: &ModMono, basis: &[ModVec], skip: Option<usize>) -> Option<usize> {
    basis
        .iter()
        .enumerate()
        .find(|(k, g)| Some(*k) != skip && g.lm().divides(m))
        .map(|(k, _)| k)
}

fn budget_error(budget: &Budget, basis: &[ModVec], pending: usize, names: &[String]) -> Error {
    Error::Budget {
        limit: budget.limit(),
        basis_len: basis.len(),
        pending_pairs: pending,
        partial_basis: basis.iter().map(|g| g.render(names)).collect(),
    }
}

/// Full reduction of `f` by `basis`. When `quotients` is given, records the
/// multipliers so that `f = Σ q_k g_k + remainder`.
pub(crate) fn reduce(
    f: &ModVec,
    basis: &[ModVec],
    skip: Option<usize>,
    ord: &dyn TermOrder,
    budget: &mut Budget,
    mut quotients: Option<&mut Quotients>,
) -> Result<ModVec> {
    // Terms before `head` are irreducible and final; subtraction only ever
    // touches the tail, so `p` ends up holding exactly the remainder.
    let mut p = f.clone();
    let mut head = 0;
    while head < p.terms.len() {
        let (m, c) = &p.terms[head];
        match find_divisor(m, basis, skip) {
            Some(k) => {
                if !budget.tick() {
                    return Err(budget_error(budget, basis, 0, ord.var_names()));
                }
                let g = &basis[k];
                let shift = m.exps.div(&g.lm().exps).expect("divisor");
                let factor = c / g.lc();
                if let Some(q) = quotients.as_deref_mut() {
                    q[k].push((shift.clone(), factor.clone()));
                }
                let tail = ModVec {
                    terms: p.terms.split_off(head),
                };
                p.terms
                    .extend(tail.add_scaled(g, &-factor, &shift, ord).terms);
            }
            None => head += 1,
        }
    }
    Ok(p)
}

fn spoly(f: &ModVec, g: &ModVec, ord: &dyn TermOrder) -> ModVec {
    let l = f.lm().exps.lcm(&g.lm().exps);
    let sf = l.div(&f.lm().exps).unwrap();
    let sg = l.div(&g.lm().exps).unwrap();
    let a = ModVec::zero().add_scaled(f, &f.lc().recip(), &sf, ord);
    a.add_scaled(g, &-g.lc().recip(), &sg, ord)
}

/// Output of [`buchberger`]: a reduced basis and, optionally, each element
/// written in terms of the input generators.
pub(crate) struct GbOutput {
    pub basis: Vec<ModVec>,
    pub reps: Option<Vec<ModVec>>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: ModMono,
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
///
/// Pair selection follows the normal strategy (smallest lcm first, ties by
/// index). Pairs are discarded by Buchberger's chain criterion and, when
/// `product_criterion` is set (rank-one input only), by the coprime-leading-
/// monomial criterion.
pub(crate) fn buchberger(
    gens: &[ModVec],
    ord: &dyn TermOrder,
    budget: &mut Budget,
    track: bool,
    product_criterion: bool,
) -> Result<GbOutput> {
    let nvars = ord.var_names().len();
    let names = ord.var_names();
    let cert_ord = CertOrder { names };
    let mut basis: Vec<ModVec> = Vec::new();
    let mut reps: Vec<ModVec> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let insert = |v: ModVec,
                  rep: ModVec,
                  basis: &mut Vec<ModVec>,
                  reps: &mut Vec<ModVec>,
                  pairs: &mut Vec<Pair>,
                  pending: &mut HashSet<(usize, usize)>| {
        let (v, inv) = v.monic();
        let rep = if track { rep.scale(&inv) } else { rep };
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            if g.lm().comp == v.lm().comp {
                let lcm = ModMono::new(v.lm().comp, g.lm().exps.lcm(&v.lm().exps));
                pairs.push(Pair { i, j, lcm });
                pending.insert((i, j));
            }
        }
        basis.push(v);
        reps.push(rep);
    };

    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let rep = if track {
            ModVec::unit(k, nvars)
        } else {
            ModVec::zero()
        };
        insert(
            g.clone(),
            rep,
            &mut basis,
            &mut reps,
            &mut pairs,
            &mut pending,
        );
    }

    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                ord.cmp(&pairs[a].lcm, &pairs[b].lcm)
                    .then_with(|| (pairs[a].j, pairs[a].i).cmp(&(pairs[b].j, pairs[b].i)))
            })
            .unwrap();
        let Pair { i, j, lcm } = pairs.swap_remove(pick);
        pending.remove(&(i, j));
        if !budget.tick() {
            return Err(budget_error(budget, &basis, pairs.len(), names));
        }

        if product_criterion && basis[i].lm().exps.is_coprime(&basis[j].lm().exps) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let s = spoly(&basis[i], &basis[j], ord);
        let mut quotients: Quotients = vec![Vec::new(); basis.len()];
        let r = reduce(
            &s,
            &basis,
            None,
            ord,
            budget,
            if track { Some(&mut quotients) } else { None },
        )
        .map_err(|e| match e {
            Error::Budget { .. } => budget_error(budget, &basis, pairs.len(), names),
            e => e,
        })?;
        if r.is_zero() {
            continue;
        }
        let rep = if track {
            // s = lc_i^{-1} m_i g_i - lc_j^{-1} m_j g_j; r = s - Σ q_k g_k.
            let l = lcm.exps;
            let mi = l.div(&basis[i].lm().exps).unwrap();
            let mj = l.div(&basis[j].lm().exps).unwrap();
            let mut rep = ModVec::zero()
                .add_scaled(&reps[i], &basis[i].lc().recip(), &mi, &cert_ord)
                .add_scaled(&reps[j], &-basis[j].lc().recip(), &mj, &cert_ord);
            for (k, q) in quotients.iter().enumerate() {
                for (e, c) in q {
                    rep = rep.add_scaled(&reps[k], &-c, e, &cert_ord);
                }
            }
            rep
        } else {
            ModVec::zero()
        };
        insert(r, rep, &mut basis, &mut reps, &mut pairs, &mut pending);
    }

    // Minimalize: drop elements whose leading monomial is divisible by an
    // earlier-kept or any other element's leading monomial.
    let mut keep: Vec<usize> = Vec::new();
    for k in 0..basis.len() {
        let redundant = (0..basis.len()).any(|o| {
            o != k
                && basis[o].lm().divides(basis[k].lm())
                && (basis[o].lm() != basis[k].lm() || o < k)
        });
        if !redundant {
            keep.push(k);
        }
    }
    let mut min_basis: Vec<ModVec> = keep.iter().map(|&k| basis[k].clone()).collect();
    let mut min_reps: Vec<ModVec> = keep.iter().map(|&k| reps[k].clone()).collect();

    // Interreduce tails.
    for k in 0..min_basis.len() {
        let mut quotients: Quotients = vec![Vec::new(); min_basis.len()];
        let r = reduce(
            &min_basis[k],
            &min_basis,
            Some(k),
            ord,
            budget,
            if track { Some(&mut quotients) } else { None },
        )
        .map_err(|e| match e {
            Error::Budget { .. } => budget_error(budget, &min_basis, 0, names),
            e => e,
        })?;
        if track {
            let mut rep = min_reps[k].clone();
            for (o, q) in quotients.iter().enumerate() {
                for (e, c) in q {
                    rep = rep.add_scaled(&min_reps[o], &-c, e, &cert_ord);
                }
            }
            min_reps[k] = rep;
        }
        let (r, inv) = r.monic();
        if track && !inv.is_one() {
            min_reps[k] = min_reps[k].scale(&inv);
        }
        min_basis[k] = r;
    }

    let mut idx: Vec<usize> = (0..min_basis.len()).collect();
    idx.sort_by(|&a, &b| ord.cmp(min_basis[b].lm(), min_basis[a].lm()));
    let basis_sorted = idx.iter().map(|&k| min_basis[k].clone()).collect();
    let reps_sorted = if track {
        Some(idx.iter().map(|&k| min_reps[k].clone()).collect())
    } else {
        None
    };
    Ok(GbOutput {
        basis: basis_sorted,
        reps: reps_sorted,
    })
}

/// Buchberger criterion: every S-vector reduces to zero.
pub(crate) fn satisfies_buchberger_criterion(basis: &[ModVec], ord: &dyn TermOrder) -> bool {
    let mut budget = Budget::unlimited();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if basis[i].lm().comp != basis[j].lm().comp {
                continue;
            }
            let s = spoly(&basis[i], &basis[j], ord);
            match reduce(&s, basis, None, ord, &mut budget, None) {
                Ok(r) if r.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}
