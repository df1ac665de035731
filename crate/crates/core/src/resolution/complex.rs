use std::sync::Arc;

use serde::Serialize;

use super::matrix::{combinations, PolyMatrix};
use super::Codim;
use crate::error::{Budget, Error, Result};
use crate::groebner::Ideal;
use crate::poly::{Polynomial, RingContext};

/// A chain `E_N → … → E_1 → E_0` of free modules with polynomial maps.
///
/// `maps[k-1]` is `f_k : E_k → E_{k-1}`, a `rank E_{k-1} × rank E_k`
/// matrix. For graded complexes `shifts[k]` holds the degree of each basis
/// element of `E_k`, and every nonzero entry of `f_k` at `(i, j)` is
/// quasi-homogeneous of degree `shifts[k][j] − shifts[k-1][i]`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: Arc<RingContext>,
    rank0: usize,
    maps: Vec<PolyMatrix>,
    shifts: Option<Vec<Vec<i64>>>,
}

/// JSON shape of a complex.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ComplexDocument {
    pub ranks: Vec<usize>,
    pub maps: Vec<Vec<Vec<String>>>,
    pub graded: bool,
    pub shifts: Option<Vec<Vec<i64>>>,
}

impl FreeComplex {
    pub fn new(
        ring: &Arc<RingContext>,
        rank0: usize,
        maps: Vec<PolyMatrix>,
        shifts: Option<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let mut prev = rank0;
        for (k, f) in maps.iter().enumerate() {
            if f.rows() != prev {
                return Err(Error::Structural(format!(
                    "f_{} has {} rows but rank E_{} = {}",
                    k + 1,
                    f.rows(),
                    k,
                    prev
                )));
            }
            prev = f.cols();
        }
        let c = FreeComplex {
            ring: ring.clone(),
            rank0,
            maps,
            shifts,
        };
        if let Some(s) = &c.shifts {
            let ranks = c.ranks();
            if s.len() != ranks.len() || s.iter().zip(&ranks).any(|(v, &r)| v.len() != r) {
                return Err(Error::Structural("shift vectors do not match ranks".into()));
            }
        }
        Ok(c)
    }

    /// Graded complex with shifts inferred from the entries, starting from
    /// `E_0` in degree 0. Fails with a validation error when the entries
    /// are not consistently quasi-homogeneous.
    pub fn graded(ring: &Arc<RingContext>, rank0: usize, maps: Vec<PolyMatrix>) -> Result<Self> {
        let mut c = FreeComplex::new(ring, rank0, maps, None)?;
        c.shifts = Some(c.infer_shifts()?);
        Ok(c)
    }

    fn infer_shifts(&self) -> Result<Vec<Vec<i64>>> {
        let mut shifts = vec![vec![0i64; self.rank0]];
        for (k, f) in self.maps.iter().enumerate() {
            let prev = &shifts[k];
            let mut cur = Vec::with_capacity(f.cols());
            for j in 0..f.cols() {
                let mut deg: Option<i64> = None;
                for (i, &shift) in prev.iter().enumerate() {
                    let p = f.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let d = p.homogeneous_degree().ok_or_else(|| {
                        Error::Validation(format!(
                            "entry ({i},{j}) of f_{} is not quasi-homogeneous",
                            k + 1
                        ))
                    })? as i64
                        + shift;
                    match deg {
                        None => deg = Some(d),
                        Some(e) if e == d => {}
                        Some(_) => {
                            return Err(Error::Validation(format!(
                                "column {j} of f_{} mixes degrees",
                                k + 1
                            )))
                        }
                    }
                }
                cur.push(deg.unwrap_or(0));
            }
            shifts.push(cur);
        }
        Ok(shifts)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    /// `[rank E_0, …, rank E_N]`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![self.rank0];
        r.extend(self.maps.iter().map(|f| f.cols()));
        r
    }

    /// Number of maps `N`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[PolyMatrix] {
        &self.maps
    }

    /// `f_k`, 1-based.
    pub fn map(&self, k: usize) -> Option<&PolyMatrix> {
        k.checked_sub(1).and_then(|i| self.maps.get(i))
    }

    pub fn is_graded(&self) -> bool {
        self.shifts.is_some()
    }

    pub fn shifts(&self) -> Option<&[Vec<i64>]> {
        self.shifts.as_deref()
    }

    /// `f_k ∘ f_{k+1} = 0` for all `k`.
    pub fn is_complex(&self) -> bool {
        self.maps
            .windows(2)
            .all(|w| w[0].mul(&w[1]).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// Optimal ranks `ρ_k = Σ_{i≥k} (−1)^{i−k} rank E_i`, for `k = 1..=N`.
    pub fn expected_ranks(&self) -> Vec<i64> {
        expected_ranks(&self.ranks())
    }

    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            ranks: self.ranks(),
            maps: self.maps.iter().map(|f| f.to_string_rows()).collect(),
            graded: self.is_graded(),
            shifts: self.shifts.clone(),
        }
    }

    /// Parses the JSON document written by [`FreeComplex::to_document`].
    pub fn from_json(ring: &Arc<RingContext>, json: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Validation(format!("complex document: {m}"));
        let ranks: Vec<usize> = json
            .get("ranks")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing ranks"))?
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| bad("rank")))
            .collect::<Result<_>>()?;
        let maps_json = json
            .get("maps")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing maps"))?;
        if ranks.is_empty() || maps_json.len() + 1 != ranks.len() {
            return Err(bad("ranks and maps disagree"));
        }
        let mut maps = Vec::new();
        for (k, m) in maps_json.iter().enumerate() {
            let rows = m.as_array().ok_or_else(|| bad("map"))?;
            let mut mat = PolyMatrix::zeros(ring, ranks[k], ranks[k + 1]);
            if rows.len() != ranks[k] {
                return Err(bad("row count"));
            }
            for (i, row) in rows.iter().enumerate() {
                let row = row.as_array().ok_or_else(|| bad("row"))?;
                if row.len() != ranks[k + 1] {
                    return Err(bad("column count"));
                }
                for (j, e) in row.iter().enumerate() {
                    let s = e.as_str().ok_or_else(|| bad("entry"))?;
                    mat.set(i, j, Polynomial::parse(s, ring)?);
                }
            }
            maps.push(mat);
        }
        let shifts = match json.get("shifts") {
            Some(serde_json::Value::Array(a)) => Some(
                a.iter()
                    .map(|v| {
                        v.as_array()
                            .ok_or_else(|| bad("shifts"))?
                            .iter()
                            .map(|x| x.as_i64().ok_or_else(|| bad("shift")))
                            .collect::<Result<Vec<i64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => None,
        };
        FreeComplex::new(ring, ranks[0], maps, shifts)
    }

    /// Splits off trivial summands `0 → R → R → 0` by pivoting on nonzero
    /// constant entries until none remain.
    ///
    /// Pivots are taken map by map, row-major, first unit entry first. Only
    /// graded complexes are accepted: there a complex without unit entries
    /// is minimal and its ranks are the graded Betti numbers.
    pub fn minimalize(&self) -> Result<FreeComplex> {
        let shifts = match &self.shifts {
            Some(_) => self.infer_shifts()?,
            None => {
                return Err(Error::Validation(
                    "minimalization needs a graded complex".into(),
                ))
            }
        };
        let mut out = FreeComplex {
            ring: self.ring.clone(),
            rank0: self.rank0,
            maps: self.maps.clone(),
            shifts: Some(shifts),
        };
        while let Some((t, i, j)) = out.first_unit_entry() {
            out.cancel(t, i, j);
        }
        while out.maps.last().is_some_and(|f| f.cols() == 0) {
            out.maps.pop();
            if let Some(s) = out.shifts.as_mut() {
                s.pop();
            }
        }
        Ok(out)
    }

    fn first_unit_entry(&self) -> Option<(usize, usize, usize)> {
        for (t, f) in self.maps.iter().enumerate() {
            for i in 0..f.rows() {
                for j in 0..f.cols() {
                    if f.get(i, j).as_nonzero_constant().is_some() {
                        return Some((t, i, j));
                    }
                }
            }
        }
        None
    }

    /// Cancels the unit entry `(i, j)` of `maps[t]`.
    pub(crate) fn cancel(&mut self, t: usize, i: usize, j: usize) {
        let f = &self.maps[t];
        let u_inv = f
            .get(i, j)
            .as_nonzero_constant()
            .expect("unit pivot")
            .recip();
        let mut g = f.clone();
        for a in 0..f.rows() {
            if a == i || f.get(a, j).is_zero() {
                continue;
            }
            let factor = f.get(a, j).scale(&u_inv);
            for b in 0..f.cols() {
                if b == j || f.get(i, b).is_zero() {
                    continue;
                }
                let v = g.get(a, b) - &(&factor * f.get(i, b));
                g.set(a, b, v);
            }
        }
        g.remove_row(i);
        g.remove_col(j);
        self.maps[t] = g;
        if t > 0 {
            self.maps[t - 1].remove_col(i);
        } else {
            self.rank0 -= 1;
        }
        if t + 1 < self.maps.len() {
            self.maps[t + 1].remove_row(j);
        }
        if let Some(s) = self.shifts.as_mut() {
            s[t].remove(i);
            s[t + 1].remove(j);
        }
    }

    pub(crate) fn push_map(&mut self, f: PolyMatrix, shifts: Option<Vec<i64>>) {
        self.maps.push(f);
        if let (Some(s), Some(n)) = (self.shifts.as_mut(), shifts) {
            s.push(n);
        }
    }

    /// Zero-based shift vector of `E_k`, or zeros for ungraded complexes.
    pub(crate) fn module_shifts(&self, k: usize) -> Vec<i64> {
        match &self.shifts {
            Some(s) => s[k].clone(),
            None => vec![0; self.ranks()[k]],
        }
    }
}

/// `ρ_k = Σ_{i≥k} (−1)^{i−k} rank E_i` for `k = 1..=N`, so that
/// `ρ_k + ρ_{k+1} = rank E_k` with `ρ_{N+1} = 0`.
pub fn expected_ranks(ranks: &[usize]) -> Vec<i64> {
    let n = ranks.len().saturating_sub(1);
    let mut rho = vec![0i64; n + 2];
    for k in (1..=n).rev() {
        rho[k] = ranks[k] as i64 - rho[k + 1];
    }
    rho[1..=n].to_vec()
}

/// Koszul complex of `a = (a_1, …, a_m)`: `E_k = Λ^k R^m`, and `f_k` is
/// interior multiplication by `a`,
/// `e_{i_1}∧…∧e_{i_k} ↦ Σ_j (−1)^{j−1} a_{i_j} e_{i_1}∧…ê_{i_j}…∧e_{i_k}`.
///
/// Basis elements of `E_k` are the `k`-subsets in lexicographic order. The
/// complex is graded when every `a_i` is quasi-homogeneous.
pub fn koszul_complex(a: &[Polynomial]) -> Result<FreeComplex> {
    let Some(first) = a.first() else {
        return Err(Error::Validation(
            "Koszul complex needs at least one element".into(),
        ));
    };
    let ring = first.ring().clone();
    let m = a.len();
    let mut maps = Vec::with_capacity(m);
    for k in 1..=m {
        let rows = combinations(m, k - 1);
        let cols = combinations(m, k);
        let mut f = PolyMatrix::zeros(&ring, rows.len(), cols.len());
        for (c, s) in cols.iter().enumerate() {
            for (pos, &drop) in s.iter().enumerate() {
                let face: Vec<usize> = s.iter().copied().filter(|&x| x != drop).collect();
                let r = rows
                    .iter()
                    .position(|t| *t == face)
                    .expect("face is a subset");
                let entry = if pos % 2 == 0 {
                    a[drop].clone()
                } else {
                    a[drop].neg()
                };
                f.set(r, c, entry);
            }
        }
        maps.push(f);
    }
    if a.iter().all(|p| !p.is_zero() && p.is_quasi_homogeneous()) {
        FreeComplex::graded(&ring, 1, maps)
    } else {
        FreeComplex::new(&ring, 1, maps, None)
    }
}

/// Ideal of `ρ_k × ρ_k` minors of `f_k` plus an ambient ideal: its variety
/// is the locus `Z_k ∩ Z` where `f_k` drops below optimal rank.
#[derive(Clone, Debug)]
pub struct RankLocus {
    pub k: usize,
    pub rho: i64,
    pub ideal: Ideal,
    /// Set when `ρ_k` exceeds the matrix size, so no minors exist and the
    /// locus is all of `V(I_ambient)`.
    pub degenerate: bool,
}

pub fn rank_locus_ideal(c: &FreeComplex, k: usize, ambient: &Ideal) -> Result<RankLocus> {
    let f = c.map(k).ok_or_else(|| {
        Error::Validation(format!("rank locus index {k} outside 1..={}", c.len()))
    })?;
    let rho = c.expected_ranks()[k - 1];
    let mut gens: Vec<Polynomial> = ambient.generators().to_vec();
    let degenerate = rho < 0 || rho as usize > f.rows().min(f.cols());
    if !degenerate {
        gens.extend(f.minors(rho as usize)?);
    }
    Ok(RankLocus {
        k,
        rho,
        ideal: Ideal::new(c.ring(), gens)?,
        degenerate,
    })
}

/// Per-map data of the Buchsbaum–Eisenbud exactness test.
#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityEntry {
    pub k: usize,
    pub rho: i64,
    /// Codimension in the ambient affine space of the `ρ_k`-minor ideal.
    pub codim: Codim,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    pub entries: Vec<AcyclicityEntry>,
    /// First `k` with `codim < k`, if any.
    pub failure: Option<usize>,
}

/// Exactness of a graded free complex by the Buchsbaum–Eisenbud criterion:
/// the complex is acyclic iff the ranks are consistent (`ρ_k ≥ 0`, with
/// `ρ_k` not exceeding the matrix size) and the ideal of `ρ_k`-minors of
/// `f_k` has codimension at least `k` for every `k`.
pub fn check_acyclicity(c: &FreeComplex, budget: &mut Budget) -> Result<AcyclicityReport> {
    let n = c.ring().nvars() as i64;
    let zero = Ideal::new(c.ring(), vec![])?;
    let mut entries = Vec::new();
    let mut failure = None;
    for k in 1..=c.len() {
        let locus = rank_locus_ideal(c, k, &zero)?;
        let codim = if locus.degenerate {
            Codim::Finite(0)
        } else {
            Codim::from_dimension(n, locus.ideal.dimension(budget)?)
        };
        if codim < Codim::Finite(k as i64) && failure.is_none() {
            failure = Some(k);
        }
        entries.push(AcyclicityEntry {
            k,
            rho: locus.rho,
            codim,
        });
    }
    Ok(AcyclicityReport {
        acyclic: failure.is_none(),
        entries,
        failure,
    })
}
