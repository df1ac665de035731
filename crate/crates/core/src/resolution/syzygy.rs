use std::cmp::Ordering;

use super::complex::FreeComplex;
use super::matrix::PolyMatrix;
use crate::error::{Budget, Error, Result};
use crate::groebner::{buchberger, reduce, Ideal, ModMono, ModVec, TermOrder};
use crate::poly::{Polynomial, RingContext};

/// Module order on `R^{rows + cols}` that eliminates the first `rows`
/// components: any term there beats any term in the tail block. Inside a
/// block terms compare by shifted weighted degree, then the ring order, then
/// position (lower component first).
struct SyzOrder<'a> {
    ring: &'a RingContext,
    rows: usize,
    shifts: Vec<i64>,
}

impl SyzOrder<'_> {
    fn degree(&self, m: &ModMono) -> i64 {
        self.ring.weighted_degree(&m.exps) as i64 + self.shifts[m.comp]
    }
}

impl TermOrder for SyzOrder<'_> {
    fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering {
        let head_a = a.comp < self.rows;
        let head_b = b.comp < self.rows;
        head_a
            .cmp(&head_b)
            .then_with(|| self.degree(a).cmp(&self.degree(b)))
            .then_with(|| self.ring.cmp(&a.exps, &b.exps))
            .then_with(|| b.comp.cmp(&a.comp))
    }

    fn var_names(&self) -> &[String] {
        self.ring.names()
    }
}

/// Generators of the kernel of `m`, as the columns of a matrix.
pub fn syzygies(m: &PolyMatrix, budget: &mut Budget) -> Result<PolyMatrix> {
    Ok(syzygies_graded(m, &vec![0; m.rows()], budget)?.0)
}

/// Kernel of `m` together with the degree of each generator, given degrees
/// for the rows of `m`. Column `j` of `m` sits in degree
/// `row_shifts[i] + deg m[i][j]` for any nonzero entry.
///
/// Columns `(m_j, e_j)` of the stacked matrix are reduced to a Gröbner basis
/// under an order eliminating the first block; the basis elements living
/// entirely in the second block are the syzygies.
pub fn syzygies_graded(
    m: &PolyMatrix,
    row_shifts: &[i64],
    budget: &mut Budget,
) -> Result<(PolyMatrix, Vec<i64>)> {
    let ring = m.ring().clone();
    let (rows, cols) = (m.rows(), m.cols());
    if row_shifts.len() != rows {
        return Err(Error::Structural(
            "row shift count differs from row count".into(),
        ));
    }
    let mut shifts = row_shifts.to_vec();
    for j in 0..cols {
        let d = (0..rows)
            .find(|&i| !m.get(i, j).is_zero())
            .map(|i| {
                row_shifts[i]
                    + m.get(i, j)
                        .weighted_degree_info()
                        .map(|(top, _, _)| top as i64)
                        .unwrap_or(0)
            })
            .unwrap_or(0);
        shifts.push(d);
    }
    let ord = SyzOrder {
        ring: &ring,
        rows,
        shifts,
    };
    let nvars = ring.nvars();
    let gens: Vec<ModVec> = (0..cols)
        .map(|j| {
            let mut terms = Vec::new();
            for i in 0..rows {
                for (e, c) in m.get(i, j).terms() {
                    terms.push((ModMono::new(i, e.clone()), c.clone()));
                }
            }
            terms.extend(ModVec::unit(rows + j, nvars).terms);
            ModVec::from_unsorted(terms, &ord)
        })
        .collect();
    let gb = buchberger(&gens, &ord, budget, false, false)?;
    let mut found: Vec<(i64, Vec<Polynomial>)> = Vec::new();
    for v in gb.basis {
        if v.lm().comp < rows {
            continue;
        }
        let deg = ord.degree(v.lm());
        let mut col = vec![Vec::new(); cols];
        for (mm, c) in v.terms {
            col[mm.comp - rows].push((mm.exps, c));
        }
        let col = col
            .into_iter()
            .map(|t| Polynomial::from_terms(&ring, t))
            .collect::<Result<Vec<_>>>()?;
        found.push((deg, col));
    }
    found.sort_by_key(|(d, _)| *d);
    let degs = found.iter().map(|(d, _)| *d).collect();
    let out = PolyMatrix::from_columns(&ring, cols, found.into_iter().map(|(_, c)| c).collect())?;
    Ok((out, degs))
}

/// Drops every column lying in the submodule spanned by the columns kept
/// before it, scanning in order of degree. For graded input this leaves a
/// minimal generating set.
fn prune_columns(
    m: PolyMatrix,
    degs: Vec<i64>,
    budget: &mut Budget,
) -> Result<(PolyMatrix, Vec<i64>)> {
    let ring = m.ring().clone();
    let ord = SyzOrder {
        ring: &ring,
        rows: 0,
        shifts: vec![0; m.rows()],
    };
    let as_vec = |col: &[Polynomial]| {
        let mut terms = Vec::new();
        for (i, p) in col.iter().enumerate() {
            for (e, c) in p.terms() {
                terms.push((ModMono::new(i, e.clone()), c.clone()));
            }
        }
        ModVec::from_unsorted(terms, &ord)
    };
    let mut kept: Vec<Vec<Polynomial>> = Vec::new();
    let mut kept_degs = Vec::new();
    for (j, d) in degs.into_iter().enumerate() {
        let col = m.column(j);
        if !kept.is_empty() {
            let gens: Vec<ModVec> = kept.iter().map(|c| as_vec(c)).collect();
            let gb = buchberger(&gens, &ord, budget, false, false)?;
            if reduce(&as_vec(&col), &gb.basis, None, &ord, budget, None)?.is_zero() {
                continue;
            }
        }
        kept.push(col);
        kept_degs.push(d);
    }
    Ok((PolyMatrix::from_columns(&ring, m.rows(), kept)?, kept_degs))
}

/// Whether the resolution is minimalized as it is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionMode {
    /// Quasi-homogeneous input; unit entries are cancelled after each step,
    /// so the ranks are the graded Betti numbers.
    Graded,
    /// Iterated syzygies with no cancellation.
    Raw,
}

/// Free resolution of `R/I`, starting from `f_1` = the row of generators.
///
/// Stops when the syzygy module vanishes. More than `max_len` maps (default:
/// the number of variables) raises a cap error.
pub fn free_resolution(
    i: &Ideal,
    max_len: Option<usize>,
    mode: ResolutionMode,
    budget: &mut Budget,
) -> Result<FreeComplex> {
    let ring = i.ring().clone();
    if i.is_zero_ideal() {
        return FreeComplex::new(&ring, 1, vec![], Some(vec![vec![0]]));
    }
    if i.is_unit(budget)? {
        return Err(Error::Validation(
            "cannot resolve the quotient by the unit ideal".into(),
        ));
    }
    let graded = i.is_quasi_homogeneous();
    if mode == ResolutionMode::Graded && !graded {
        return Err(Error::Validation(
            "graded resolution needs quasi-homogeneous generators".into(),
        ));
    }
    let cap = match mode {
        ResolutionMode::Graded => max_len.unwrap_or(ring.nvars()),
        ResolutionMode::Raw => max_len.unwrap_or(2 * ring.nvars() + 2),
    };
    let f1 = PolyMatrix::from_rows(&ring, vec![i.generators().to_vec()])?;
    let mut c = if graded {
        FreeComplex::graded(&ring, 1, vec![f1])?
    } else {
        FreeComplex::new(&ring, 1, vec![f1], None)?
    };
    if mode == ResolutionMode::Graded {
        c = c.minimalize()?;
    }
    while let Some(last) = c.maps().last() {
        let (mut syz, mut degs) = syzygies_graded(last, &c.module_shifts(c.len() - 1), budget)?;
        if mode == ResolutionMode::Graded {
            (syz, degs) = prune_columns(syz, degs, budget)?;
        }
        if syz.cols() == 0 {
            break;
        }
        if c.len() + 1 > cap {
            return Err(Error::Cap(format!("resolution longer than {cap} maps")));
        }
        c.push_map(syz, graded.then_some(degs));
        if mode == ResolutionMode::Graded {
            c = c.minimalize()?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::resolution::koszul_complex;

    fn ring(names: &[&str]) -> Arc<RingContext> {
        Arc::new(RingContext::with_names(names).unwrap())
    }

    #[test]
    fn koszul_syzygy_of_two_variables() {
        let r = ring(&["x", "y"]);
        let m = PolyMatrix::parse(&r, &[&["x", "y"]]).unwrap();
        let s = syzygies(&m, &mut Budget::default()).unwrap();
        assert_eq!(s.cols(), 1);
        assert!(m.mul(&s).unwrap().is_zero());
        let col: Vec<String> = s.column(0).iter().map(|p| p.to_string()).collect();
        assert!(col == ["-y", "x"] || col == ["y", "-x"], "{col:?}");
    }

    #[test]
    fn syzygy_with_a_unit_entry() {
        let r = ring(&["x"]);
        let m = PolyMatrix::parse(&r, &[&["x^2", "x"]]).unwrap();
        let s = syzygies(&m, &mut Budget::default()).unwrap();
        assert_eq!(s.cols(), 1);
        let col: Vec<String> = s.column(0).iter().map(|p| p.to_string()).collect();
        assert!(col == ["-1", "x"] || col == ["1", "-x"], "{col:?}");
    }

    #[test]
    fn injective_map_has_no_syzygies() {
        let r = ring(&["x"]);
        let m = PolyMatrix::parse(&r, &[&["1"]]).unwrap();
        assert_eq!(syzygies(&m, &mut Budget::default()).unwrap().cols(), 0);
    }

    fn betti(r: &Arc<RingContext>, gens: &[&str]) -> FreeComplex {
        let i = Ideal::parse(r, gens).unwrap();
        free_resolution(&i, None, ResolutionMode::Graded, &mut Budget::default()).unwrap()
    }

    #[test]
    fn resolutions_of_small_ideals() {
        let r = ring(&["z", "w"]);
        let r5 = Arc::new(
            RingContext::new(
                vec!["z".into(), "w".into()],
                vec![2, 5],
                crate::poly::MonomialOrder::WeightedDegrevlex,
            )
            .unwrap(),
        );
        assert_eq!(betti(&r5, &["z^5 - w^2"]).ranks(), [1, 1]);
        assert_eq!(betti(&r, &["z", "w"]).ranks(), [1, 2, 1]);

        let r4 = ring(&["x", "y", "z", "w"]);
        let c = betti(&r4, &["x*z", "x*w", "y*z", "y*w"]);
        assert_eq!(c.ranks(), [1, 4, 4, 1]);
        assert!(c.is_complex());
        assert!(c
            .maps()
            .iter()
            .all(|f| f.entries().all(|p| p.as_nonzero_constant().is_none())));
    }

    #[test]
    fn redundant_generators_are_cancelled() {
        let r = ring(&["x", "y"]);
        assert_eq!(betti(&r, &["x", "y", "x + y"]).ranks(), [1, 2, 1]);
    }

    #[test]
    fn raw_resolution_of_a_repeated_generator() {
        let r = ring(&["x"]);
        let i = Ideal::parse(&r, &["x", "x"]).unwrap();
        let raw = free_resolution(&i, None, ResolutionMode::Raw, &mut Budget::default()).unwrap();
        assert_eq!(raw.ranks(), [1, 2, 1]);
        assert_eq!(raw.minimalize().unwrap().ranks(), [1, 1]);
    }

    #[test]
    fn koszul_matches_resolution_ranks() {
        let r = ring(&["x", "y", "z"]);
        let k = koszul_complex(&[
            Polynomial::parse("x", &r).unwrap(),
            Polynomial::parse("y", &r).unwrap(),
            Polynomial::parse("z", &r).unwrap(),
        ])
        .unwrap();
        assert_eq!(k.ranks(), betti(&r, &["x", "y", "z"]).ranks());
    }

    #[test]
    fn non_homogeneous_input_rejected_in_graded_mode() {
        let r = ring(&["x", "y"]);
        let i = Ideal::parse(&r, &["x - y^2"]).unwrap();
        let e = free_resolution(&i, None, ResolutionMode::Graded, &mut Budget::default());
        assert!(matches!(e, Err(Error::Validation(_))));
        let raw = free_resolution(&i, None, ResolutionMode::Raw, &mut Budget::default()).unwrap();
        assert_eq!(raw.ranks(), [1, 1]);
    }

    #[test]
    fn redundant_syzygies_are_pruned_within_the_length_bound() {
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::parse(&r, &["x^2", "y^2 + x*y", "z"]).unwrap();
        let c = free_resolution(&i, None, ResolutionMode::Graded, &mut Budget::default()).unwrap();
        assert_eq!(c.ranks(), [1, 3, 3, 1]);
        assert!(c.is_complex());
    }
}
