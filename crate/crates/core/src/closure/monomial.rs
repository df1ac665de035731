use std::fmt;

use serde::Serialize;

use super::lp;
use crate::error::{Error, Result};
use crate::poly::{int, Coeff, ExponentVector};

/// Largest number of lattice points a single box enumeration may visit.
pub const BOX_CAP: u64 = 4_000_000;

/// Monomial ideal of `k[x_1, …, x_n]`, stored by its minimal generators in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<ExponentVector>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<ExponentVector>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Validation("monomial ideal needs a generator".into()));
        }
        if gens.iter().any(|g| g.len() != nvars) {
            return Err(Error::Structural(
                "generator length differs from nvars".into(),
            ));
        }
        Ok(MonomialIdeal {
            nvars,
            gens: minimalize(gens),
        })
    }

    pub fn from_exponents(nvars: usize, gens: &[&[u32]]) -> Result<Self> {
        MonomialIdeal::new(
            nvars,
            gens.iter()
                .map(|g| ExponentVector::new(g.to_vec()))
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.gens
    }

    /// Number of minimal generators.
    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        self.gens.iter().any(|g| g.divides(e))
    }

    pub fn is_contained_in(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.mul(b)))
            .collect();
        MonomialIdeal {
            nvars: self.nvars,
            gens: minimalize(gens),
        }
    }

    /// `M^k`, with `M^0` the unit ideal.
    pub fn power(&self, k: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal {
            nvars: self.nvars,
            gens: vec![ExponentVector::one(self.nvars)],
        };
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    /// Componentwise maximum of the generators.
    pub fn corner(&self) -> Vec<u32> {
        (0..self.nvars)
            .map(|i| self.gens.iter().map(|g| g[i]).max().unwrap_or(0))
            .collect()
    }

    /// Whether `v` lies in `scale · NP(M)`, where `NP(M)` is the convex hull
    /// of the generators plus the nonnegative orthant. Equivalently `x^v`
    /// is integral over `M^scale`.
    pub fn in_newton_polyhedron(&self, v: &ExponentVector, scale: u32) -> bool {
        if scale == 0 {
            return true;
        }
        if self.gens.iter().any(|g| g.scale(scale).divides(v)) {
            return true;
        }
        // Σ μ_j g_j + s = v, Σ μ_j = scale, μ, s ≥ 0.
        let m = self.gens.len();
        let mut a: Vec<Vec<Coeff>> = Vec::with_capacity(self.nvars + 1);
        let mut b = Vec::with_capacity(self.nvars + 1);
        for i in 0..self.nvars {
            let mut row: Vec<Coeff> = self.gens.iter().map(|g| int(g[i] as i64)).collect();
            row.extend((0..self.nvars).map(|k| int((k == i) as i64)));
            a.push(row);
            b.push(int(v[i] as i64));
        }
        let mut row = vec![int(1); m];
        row.extend((0..self.nvars).map(|_| int(0)));
        a.push(row);
        b.push(int(scale as i64));
        lp::feasible(&a, &b)
    }

    /// Integral closure: the ideal of lattice points of the Newton
    /// polyhedron.
    ///
    /// Minimal generators lie in the box `[0, corner]`: past the corner in
    /// coordinate `i` the slack in that coordinate is positive, so one can
    /// step back.
    pub fn newton_closure(&self) -> Result<MonomialIdeal> {
        let corner = self.corner();
        let mut found = Vec::new();
        for_each_in_box(&corner, |v| {
            if self.in_newton_polyhedron(v, 1) {
                found.push(v.clone());
            }
        })?;
        MonomialIdeal::new(self.nvars, found)
    }

    /// Whether `M` equals its integral closure.
    pub fn is_integrally_closed(&self) -> Result<bool> {
        Ok(self.newton_closure()? == *self)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| format!("{:?}", g.as_slice()))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn minimalize(mut gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    gens.sort_by(|a, b| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| a.as_slice().cmp(b.as_slice()))
    });
    gens.dedup();
    let mut out: Vec<ExponentVector> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out.sort_by(|a, b| b.as_slice().cmp(a.as_slice()));
    out
}

fn for_each_in_box(corner: &[u32], mut f: impl FnMut(&ExponentVector)) -> Result<()> {
    let size: u64 = corner
        .iter()
        .try_fold(1u64, |acc, &c| acc.checked_mul(c as u64 + 1))
        .unwrap_or(u64::MAX);
    if size > BOX_CAP {
        return Err(Error::Cap(format!(
            "lattice box of {size} points exceeds {BOX_CAP}"
        )));
    }
    let n = corner.len();
    let mut v = vec![0u32; n];
    loop {
        f(&ExponentVector::new(v.clone()));
        let mut i = 0;
        loop {
            if i == n {
                return Ok(());
            }
            if v[i] < corner[i] {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Result of testing `closure(M^e) ⊆ M^ℓ`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BsMonomialReport {
    pub holds: bool,
    /// Exponent `e` of the power whose closure was tested.
    pub exponent: u32,
    pub ell: u32,
    /// Exponent vector in `closure(M^e)` but outside `M^ℓ`.
    pub counterexample: Option<Vec<u32>>,
    /// Number of maximal non-members of `M^ℓ` tested against the polyhedron.
    pub candidates: usize,
}

/// Tests `closure(M^e) ⊆ M^ℓ`.
///
/// A violation can be pushed up to a maximal monomial outside `M^ℓ` inside
/// the box `[0, e · corner(M)]` (the closure is an up-set and the cut-off
/// at the box keeps both properties), so only those corners are tested.
pub fn bs_containment(m: &MonomialIdeal, e: u32, ell: u32) -> Result<BsMonomialReport> {
    if ell == 0 {
        return Err(Error::Validation("ell must be at least 1".into()));
    }
    let target = m.power(ell);
    let bound: Vec<u32> = m.corner().iter().map(|&c| c * e).collect();
    let n = m.nvars();
    let mut maximal = Vec::new();
    for_each_in_box(&bound, |v| {
        if target.contains(v) {
            return;
        }
        let is_max = (0..n).all(|i| {
            v[i] == bound[i] || {
                let mut w = v.clone().into_vec();
                w[i] += 1;
                target.contains(&ExponentVector::new(w))
            }
        });
        if is_max {
            maximal.push(v.clone());
        }
    })?;
    let counterexample = maximal
        .iter()
        .find(|v| m.in_newton_polyhedron(v, e))
        .map(|v| shrink(m, &target, v, e).into_vec());
    Ok(BsMonomialReport {
        holds: counterexample.is_none(),
        exponent: e,
        ell,
        counterexample,
        candidates: maximal.len(),
    })
}

/// Walks a violating point down to a minimal one, for a readable witness.
fn shrink(m: &MonomialIdeal, target: &MonomialIdeal, v: &ExponentVector, e: u32) -> ExponentVector {
    let mut cur = v.clone().into_vec();
    loop {
        let step = (0..cur.len()).find(|&i| {
            cur[i] > 0 && {
                let mut w = cur.clone();
                w[i] -= 1;
                let w = ExponentVector::new(w);
                m.in_newton_polyhedron(&w, e) && !target.contains(&w)
            }
        });
        match step {
            Some(i) => cur[i] -= 1,
            None => return ExponentVector::new(cur),
        }
    }
}

/// The classical statement `closure(M^{min(m,d)+ℓ−1}) ⊆ M^ℓ`, with `m` the
/// number of minimal generators and `d` the dimension of the ring.
pub fn bs_verify_monomial(m: &MonomialIdeal, ell: u32, d: usize) -> Result<BsMonomialReport> {
    if ell == 0 {
        return Err(Error::Validation("ell must be at least 1".into()));
    }
    let e = m.num_generators().min(d) as u32 + ell - 1;
    bs_containment(m, e, ell)
}
