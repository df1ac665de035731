use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The monomial `x_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    /// `self | other` componentwise.
    #[inline]
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &ExponentVector) -> Option<ExponentVector> {
        if !other.divides(self) {
            return None;
        }
        Some(ExponentVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bitmask of the variables occurring in the monomial (n ≤ 64).
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1 << i))
    }

    pub fn scale(&self, k: u32) -> ExponentVector {
        ExponentVector(self.0.iter().map(|e| e * k).collect())
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// Monomial orders on a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    Lex,
    /// Degree reverse lexicographic with unit weights.
    Degrevlex,
    /// Degree reverse lexicographic where the degree uses the ring's weights.
    WeightedDegrevlex,
    /// Block order: the first `block` variables are compared first by their
    /// total degree, then degrevlex among themselves; ties go to `rest` on the
    /// remaining variables. Any monomial involving the block beats any
    /// monomial free of it, so this eliminates the block.
    Elimination {
        block: usize,
        rest: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Degrevlex => "degrevlex".into(),
            MonomialOrder::WeightedDegrevlex => "weighted-degrevlex".into(),
            MonomialOrder::Elimination { block, rest } => {
                format!("elimination({block};{})", rest.name())
            }
        }
    }

    pub(crate) fn compare(&self, a: &[u32], b: &[u32], weights: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Degrevlex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::WeightedDegrevlex => {
                let da = weighted(a, weights);
                let db = weighted(b, weights);
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::Elimination { block, rest } => {
                let (ha, ta) = a.split_at(*block);
                let (hb, tb) = b.split_at(*block);
                MonomialOrder::Degrevlex
                    .compare(ha, hb, weights)
                    .then_with(|| rest.compare(ta, tb, &weights[*block..]))
            }
        }
    }
}

fn weighted(a: &[u32], w: &[u32]) -> u64 {
    a.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum()
}

// Smaller exponent in the last differing variable wins.
fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Variable names, quasi-homogeneous weights and the monomial order of a
/// polynomial ring over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingContext {
    names: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
}

impl RingContext {
    pub fn new(names: Vec<String>, weights: Vec<u32>, order: MonomialOrder) -> Result<Self> {
        if names.len() != weights.len() {
            return Err(Error::Validation(format!(
                "{} variables but {} weights",
                names.len(),
                weights.len()
            )));
        }
        if names.len() > 64 {
            return Err(Error::Validation(
                "at most 64 variables are supported".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|&&w| w == 0) {
            return Err(Error::Validation(format!("weight {w} is not positive")));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Validation(format!("variable `{n}` declared twice")));
            }
        }
        if let MonomialOrder::Elimination { block, .. } = &order {
            if *block > names.len() {
                return Err(Error::Validation(
                    "elimination block exceeds variable count".into(),
                ));
            }
        }
        Ok(RingContext {
            names,
            weights,
            order,
        })
    }

    /// Ring with unit weights and the weighted degrevlex order.
    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let w = vec![1; names.len()];
        RingContext::new(names, w, MonomialOrder::WeightedDegrevlex)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same variables and weights under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Self> {
        RingContext::new(self.names.clone(), self.weights.clone(), order)
    }

    /// Total order on monomials of this ring; callers guarantee the lengths.
    #[inline]
    pub fn cmp(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        self.order
            .compare(a.as_slice(), b.as_slice(), &self.weights)
    }

    pub fn weighted_degree(&self, e: &ExponentVector) -> u64 {
        e.weighted_degree(&self.weights)
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QQ[{}] weights ({}) order {}",
            self.names.join(","),
            self.weights
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(","),
            self.order.name()
        )
    }
}

/// Compares two monomials of `ctx`, checking their lengths first.
pub fn cmp_monomials(
    m1: &ExponentVector,
    m2: &ExponentVector,
    ctx: &RingContext,
) -> Result<Ordering> {
    if m1.len() != ctx.nvars() || m2.len() != ctx.nvars() {
        return Err(Error::Structural(format!(
            "exponent vectors of length {} and {} in a ring with {} variables",
            m1.len(),
            m2.len(),
            ctx.nvars()
        )));
    }
    Ok(ctx.cmp(m1, m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn one_is_minimal() {
        let r = RingContext::with_names(&["x", "y"]).unwrap();
        assert_eq!(
            cmp_monomials(&ev(&[0, 0]), &ev(&[1, 0]), &r).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn degrevlex_degree_two_matches_textbook() {
        // Textbook degrevlex on degree-2 monomials with x > y > z:
        // x^2 > xy > y^2 > xz > yz > z^2.
        let r = RingContext::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![1, 1, 1],
            MonomialOrder::Degrevlex,
        )
        .unwrap();
        let expected = [
            ev(&[2, 0, 0]),
            ev(&[1, 1, 0]),
            ev(&[0, 2, 0]),
            ev(&[1, 0, 1]),
            ev(&[0, 1, 1]),
            ev(&[0, 0, 2]),
        ];
        let mut sorted = expected.to_vec();
        sorted.sort_by(|a, b| r.cmp(b, a));
        assert_eq!(sorted, expected);

        let r2 = RingContext::with_names(&["x", "y"]).unwrap();
        assert_eq!(
            cmp_monomials(&ev(&[1, 1]), &ev(&[2, 0]), &r2).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn reflexive() {
        let r = RingContext::with_names(&["x", "y"]).unwrap();
        assert_eq!(
            cmp_monomials(&ev(&[3, 1]), &ev(&[3, 1]), &r).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn length_mismatch_is_structural() {
        let r = RingContext::with_names(&["x", "y"]).unwrap();
        assert!(matches!(
            cmp_monomials(&ev(&[1]), &ev(&[1, 0]), &r),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn weighted_order_grades_the_cusp() {
        let r = RingContext::new(
            vec!["z".into(), "w".into()],
            vec![2, 5],
            MonomialOrder::WeightedDegrevlex,
        )
        .unwrap();
        // z^5 and w^2 both have weight 10; revlex puts z^5 first.
        assert_eq!(r.cmp(&ev(&[5, 0]), &ev(&[0, 2])), Ordering::Greater);
        assert_eq!(r.cmp(&ev(&[0, 1]), &ev(&[2, 0])), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let r = RingContext::new(
            vec!["t".into(), "x".into()],
            vec![1, 1],
            MonomialOrder::Elimination {
                block: 1,
                rest: Box::new(MonomialOrder::WeightedDegrevlex),
            },
        )
        .unwrap();
        assert_eq!(r.cmp(&ev(&[1, 0]), &ev(&[0, 9])), Ordering::Greater);
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(
            RingContext::new(vec!["x".into(), "x".into()], vec![1, 1], MonomialOrder::Lex).is_err()
        );
        assert!(RingContext::new(vec!["x".into()], vec![0], MonomialOrder::Lex).is_err());
    }
}
