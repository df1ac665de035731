//! Singular locus, intrinsic strata `Z^r` and the conditions read off from
//! their codimensions.
//!
//! For `Z = V(I) ⊂ C^n` of dimension `d` and codimension `p = n − d`, with a
//! free resolution of `R/I`, the strata are `Z^0 = Z_sing` and
//! `Z^r = Z_{p+r}` for `r ≥ 1`, where `Z_k` is where `f_k` drops below its
//! optimal rank. All codimensions here are taken inside `Z`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::groebner::Ideal;
use crate::poly::{Polynomial, RingContext};
use crate::resolution::{
    free_resolution, rank_locus_ideal, Codim, FreeComplex, PolyMatrix, ResolutionMode,
};

/// Note attached to every report.
pub const CODIM_NOTE: &str = "codimensions are measured inside Z (codim = dim Z - dim)";

/// One stratum `Z^r` with its dimension and codimension in `Z`.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub r: usize,
    pub ideal: Ideal,
    /// Krull dimension, `-1` when empty.
    pub dim: i64,
    pub codim_in_z: Codim,
}

impl Stratum {
    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }
}

#[derive(Clone, Debug)]
pub struct StrataReport {
    pub ring: Arc<RingContext>,
    pub ambient: Ideal,
    /// Codimension of `Z` in `C^n`.
    pub p: usize,
    /// `dim Z`.
    pub d: i64,
    pub expected_ranks: Vec<i64>,
    /// `(k, ρ_k-minors of f_k + I)` for `k = 1..=N`.
    pub zk_ideals: Vec<(usize, Ideal)>,
    pub zsing_ideal: Ideal,
    /// `Z^0, Z^1, …`; every stratum past the last entry is empty.
    pub strata: Vec<Stratum>,
    /// Whether `I` is quasi-homogeneous, so that every stratum is a cone
    /// through the origin and global emptiness agrees with the germ at 0.
    pub conical: bool,
}

impl StrataReport {
    /// `Z^r`, or `None` when it is empty by length of the resolution.
    pub fn stratum(&self, r: usize) -> Option<&Stratum> {
        self.strata.get(r)
    }

    pub fn is_stratum_empty(&self, r: usize) -> bool {
        self.strata.get(r).is_none_or(|s| s.is_empty())
    }

    pub fn to_document(&self) -> StrataDocument {
        StrataDocument {
            n: self.ring.nvars(),
            p: self.p,
            d: self.d,
            expected_ranks: self.expected_ranks.clone(),
            zk_ideals: self
                .zk_ideals
                .iter()
                .map(|(k, i)| ZkEntry {
                    k: *k,
                    generators: gens(i),
                })
                .collect(),
            zsing_ideal: gens(&self.zsing_ideal),
            strata: self
                .strata
                .iter()
                .map(|s| StratumEntry {
                    r: s.r,
                    generators: gens(&s.ideal),
                    dim: s.dim,
                    codim_in_z: s.codim_in_z,
                })
                .collect(),
            note: CODIM_NOTE,
        }
    }
}

fn gens(i: &Ideal) -> Vec<String> {
    i.generators().iter().map(|g| g.to_string()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ZkEntry {
    pub k: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumEntry {
    pub r: usize,
    pub generators: Vec<String>,
    pub dim: i64,
    pub codim_in_z: Codim,
}

/// Serializable form of a [`StrataReport`].
#[derive(Clone, Debug, Serialize)]
pub struct StrataDocument {
    pub n: usize,
    pub p: usize,
    pub d: i64,
    pub expected_ranks: Vec<i64>,
    pub zk_ideals: Vec<ZkEntry>,
    pub zsing_ideal: Vec<String>,
    pub strata: Vec<StratumEntry>,
    pub note: &'static str,
}

/// `p × p` minors of the Jacobian of the generators of `i`, plus `i`.
pub fn singular_locus_ideal(i: &Ideal, p: usize) -> Result<Ideal> {
    let ring = i.ring();
    let rows: Vec<Vec<Polynomial>> = i
        .generators()
        .iter()
        .map(|g| (0..ring.nvars()).map(|v| g.derivative(v)).collect())
        .collect();
    let mut out = i.generators().to_vec();
    if rows.is_empty() {
        if p == 0 {
            out.push(Polynomial::one(ring));
        }
    } else {
        out.extend(PolyMatrix::from_rows(ring, rows)?.minors(p)?);
    }
    Ideal::new(ring, out)
}

/// Strata of `Z = V(I)` read off a free resolution `c` of `R/I`.
pub fn strata(c: &FreeComplex, i: &Ideal, budget: &mut Budget) -> Result<StrataReport> {
    let ring = i.ring().clone();
    let n = ring.nvars() as i64;
    let d = i.dimension(budget)?;
    if d < 0 {
        return Err(Error::Validation(
            "Z is empty: the ideal is the unit ideal".into(),
        ));
    }
    let p = (n - d) as usize;
    let zk_ideals = (1..=c.len())
        .map(|k| Ok((k, rank_locus_ideal(c, k, i)?.ideal)))
        .collect::<Result<Vec<_>>>()?;
    let zsing_ideal = singular_locus_ideal(i, p)?;
    let measure = |r: usize, ideal: Ideal, budget: &mut Budget| -> Result<Stratum> {
        let dim = ideal.dimension(budget)?;
        Ok(Stratum {
            r,
            ideal,
            dim,
            codim_in_z: Codim::from_dimension(d, dim),
        })
    };
    let mut strata = vec![measure(0, zsing_ideal.clone(), budget)?];
    for (k, ideal) in &zk_ideals {
        if *k > p {
            strata.push(measure(k - p, ideal.clone(), budget)?);
        }
    }
    Ok(StrataReport {
        ring,
        ambient: i.clone(),
        p,
        d,
        expected_ranks: c.expected_ranks(),
        zk_ideals,
        zsing_ideal,
        strata,
        conical: i.is_quasi_homogeneous(),
    })
}

/// Resolves `R/I` (graded when possible) and computes its strata.
pub fn strata_of_ideal(i: &Ideal, budget: &mut Budget) -> Result<(FreeComplex, StrataReport)> {
    let mode = if i.is_quasi_homogeneous() {
        ResolutionMode::Graded
    } else {
        ResolutionMode::Raw
    };
    let c = free_resolution(i, None, mode, budget)?;
    let s = strata(&c, i, budget)?;
    Ok((c, s))
}

/// Cohen–Macaulay and depth information from the strata.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DepthReport {
    pub is_cm: bool,
    /// Largest `ν ≤ d` with `Z^r = ∅` for every `r > d − ν`.
    pub depth_lower: i64,
    /// Equal to `depth_lower` when every stratum is a cone through the
    /// origin, where emptiness of the global stratum and of its germ agree.
    pub depth_exact: Option<i64>,
}

/// `Z` is Cohen–Macaulay iff `Z^r = ∅` for all `r > 0`, and
/// `depth ≥ ν` iff `Z^r = ∅` for all `r > d − ν`.
pub fn check_cm_depth(s: &StrataReport) -> DepthReport {
    let nonempty_top = (1..s.strata.len())
        .rev()
        .find(|&r| !s.is_stratum_empty(r))
        .unwrap_or(0) as i64;
    let depth = s.d - nonempty_top;
    DepthReport {
        is_cm: nonempty_top == 0,
        depth_lower: depth,
        depth_exact: s.conical.then_some(depth),
    }
}

/// A stratum index with the codimension found there.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct StratumCodim {
    pub r: usize,
    pub codim: Codim,
    /// The bound the codimension was tested against.
    pub required: i64,
}

/// Outcome of a codimension test on the strata.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConditionReport {
    pub holds: bool,
    /// First stratum below the required bound.
    pub witness: Option<StratumCodim>,
    /// Every nonempty stratum (or intersection) checked.
    pub checked: Vec<StratumCodim>,
}

/// `codim_Z (Z^r ∩ V(a)) ≥ m + 1 + r` for every `r ≥ 0`.
///
/// `a` is given by representatives in the ambient ring and `m` is its number
/// of generators in the local ring.
pub fn check_bs_condition(
    s: &StrataReport,
    a: &Ideal,
    m: usize,
    budget: &mut Budget,
) -> Result<ConditionReport> {
    let mut checked = Vec::new();
    let mut witness = None;
    for st in &s.strata {
        if st.is_empty() {
            continue;
        }
        let mut g = st.ideal.generators().to_vec();
        g.extend(a.generators().iter().cloned());
        let dim = Ideal::new(&s.ring, g)?.dimension(budget)?;
        if dim < 0 {
            continue;
        }
        let codim = Codim::from_dimension(s.d, dim);
        let c = StratumCodim {
            r: st.r,
            codim,
            required: (m + 1 + st.r) as i64,
        };
        checked.push(c);
        if codim < Codim::Finite(c.required) && witness.is_none() {
            witness = Some(c);
        }
    }
    Ok(ConditionReport {
        holds: witness.is_none(),
        witness,
        checked,
    })
}

/// `codim_Z Z^r ≥ 2 + r` for every `r ≥ 0`: the Serre-type normality
/// criterion, i.e. the codimension condition with `m = 1` and no `a`.
pub fn check_normality_condition(s: &StrataReport) -> ConditionReport {
    let mut checked = Vec::new();
    let mut witness = None;
    for st in s.strata.iter().filter(|st| !st.is_empty()) {
        let c = StratumCodim {
            r: st.r,
            codim: st.codim_in_z,
            required: (2 + st.r) as i64,
        };
        checked.push(c);
        if st.codim_in_z < Codim::Finite(c.required) && witness.is_none() {
            witness = Some(c);
        }
    }
    ConditionReport {
        holds: witness.is_none(),
        witness,
        checked,
    }
}
