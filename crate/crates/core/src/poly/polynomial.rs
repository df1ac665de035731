use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{ExponentVector, RingContext};
use crate::error::{Error, Result};

pub type Coeff = BigRational;

/// Integer as an exact coefficient.
pub fn int(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending order under the ring's monomial order
/// and never carry a zero coefficient, so structural equality is equality of
/// polynomials.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<RingContext>,
    terms: Vec<(ExponentVector, Coeff)>,
}

/// Which arithmetic operation [`poly_arith`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub(crate) fn same_ring(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingContext>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<RingContext>, c: Coeff) -> Self {
        let n = ring.nvars();
        Polynomial::monomial(ring, ExponentVector::one(n), c)
    }

    pub fn from_int(ring: &Arc<RingContext>, c: i64) -> Self {
        Polynomial::constant(ring, Coeff::from_integer(BigInt::from(c)))
    }

    pub fn one(ring: &Arc<RingContext>) -> Self {
        Polynomial::from_int(ring, 1)
    }

    pub fn var(ring: &Arc<RingContext>, i: usize) -> Self {
        Polynomial::monomial(ring, ExponentVector::var(ring.nvars(), i), Coeff::one())
    }

    pub fn monomial(ring: &Arc<RingContext>, e: ExponentVector, c: Coeff) -> Self {
        assert_eq!(e.len(), ring.nvars(), "exponent length must match the ring");
        let terms = if c.is_zero() { vec![] } else { vec![(e, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(ring: &Arc<RingContext>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Coeff)>,
    {
        let mut acc: HashMap<ExponentVector, Coeff> = HashMap::new();
        for (e, c) in terms {
            if e.len() != ring.nvars() {
                return Err(Error::Structural(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    e.len(),
                    ring.nvars()
                )));
            }
            *acc.entry(e).or_insert_with(Coeff::zero) += c;
        }
        Ok(Polynomial::from_map(ring, acc))
    }

    fn from_map(ring: &Arc<RingContext>, acc: HashMap<ExponentVector, Coeff>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusted constructor: terms already sorted descending and nonzero.
    pub(crate) fn from_sorted(
        ring: &Arc<RingContext>,
        terms: Vec<(ExponentVector, Coeff)>,
    ) -> Self {
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn terms(&self) -> &[(ExponentVector, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(ExponentVector, Coeff)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_one())
    }

    /// The constant value, if the polynomial is a nonzero constant.
    pub fn as_nonzero_constant(&self) -> Option<&Coeff> {
        match self.terms.as_slice() {
            [(e, c)] if e.is_one() => Some(c),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(ExponentVector, Coeff)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&ExponentVector> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|(_, c)| c)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "polynomials live in different rings: {} vs {}",
                self.ring, other.ring
            )))
        }
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ea, ca)), Some((eb, cb))) => match ring.cmp(ea, eb) {
                    Ordering::Greater => {
                        out.push((ea.clone(), ca.clone()));
                        a.next();
                    }
                    Ordering::Less => {
                        let c = if negate_other { -cb } else { cb.clone() };
                        out.push((eb.clone(), c));
                        b.next();
                    }
                    Ordering::Equal => {
                        let c = if negate_other { ca - cb } else { ca + cb };
                        if !c.is_zero() {
                            out.push((ea.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((ea, ca)), None) => {
                    out.push((ea.clone(), ca.clone()));
                    a.next();
                }
                (None, Some((eb, cb))) => {
                    let c = if negate_other { -cb } else { cb.clone() };
                    out.push((eb.clone(), c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<ExponentVector, Coeff> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(ea.mul(eb)).or_insert_with(Coeff::zero) += ca * cb;
            }
        }
        Ok(Polynomial::from_map(&self.ring, acc))
    }

    /// Multiplies by the term `c * x^e`. Monomial orders are multiplicative,
    /// so the term order is preserved.
    pub fn mul_term(&self, e: &ExponentVector, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(ea, ca)| (ea.mul(e), ca * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        self.mul_term(&ExponentVector::one(self.ring.nvars()), c)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut v = e.as_slice().to_vec();
            v[var] -= 1;
            terms.push((
                ExponentVector::new(v),
                c * Coeff::from_integer(BigInt::from(k)),
            ));
        }
        // Differentiation can reorder terms, so resort.
        Polynomial::from_terms(&self.ring, terms).expect("same ring")
    }

    /// `(min, max, quasi-homogeneous)` weighted degrees under the ring weights.
    pub fn weighted_degree_info(&self) -> Result<(u64, u64, bool)> {
        if self.is_zero() {
            return Err(Error::UndefinedDegree);
        }
        let degs = self.terms.iter().map(|(e, _)| self.ring.weighted_degree(e));
        let (lo, hi) = degs.fold((u64::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
        Ok((lo, hi, lo == hi))
    }

    /// Weighted degree of a quasi-homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        match self.weighted_degree_info() {
            Ok((lo, _, true)) => Some(lo),
            _ => None,
        }
    }

    pub fn is_quasi_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// variable `map[i]` of the target ring.
    pub fn embed(&self, target: &Arc<RingContext>, map: &[usize]) -> Polynomial {
        let n = target.nvars();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut v = vec![0; n];
            for (i, &k) in e.as_slice().iter().enumerate() {
                v[map[i]] += k;
            }
            (ExponentVector::new(v), c.clone())
        });
        Polynomial::from_terms(target, terms).expect("embedding preserves lengths")
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        let mut acc = Coeff::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.as_slice()) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

/// Exact `p ± q` or `p · q`, rejecting operands from different rings.
pub fn poly_arith(p: &Polynomial, q: &Polynomial, kind: ArithKind) -> Result<Polynomial> {
    match kind {
        ArithKind::Add => p.checked_add(q),
        ArithKind::Sub => p.checked_sub(q),
        ArithKind::Mul => p.checked_mul(q),
    }
}

/// Weighted-degree bookkeeping as a free function.
pub fn weighted_degree_info(p: &Polynomial) -> Result<(u64, u64, bool)> {
    p.weighted_degree_info()
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

// Operator impls panic on ring mismatch; the checked_* methods report it.
impl<'a> std::ops::Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl<'a> std::ops::Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl<'a> std::ops::Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

pub(crate) fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn format_monomial(e: &ExponentVector, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.as_slice().iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.ring.names();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if e.is_one() {
                f.write_str(&format_coeff(&a))?;
            } else if a.is_one() {
                f.write_str(&format_monomial(e, names))?;
            } else {
                write!(f, "{}*{}", format_coeff(&a), format_monomial(e, names))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn ring(names: &[&str], weights: &[u32]) -> Arc<RingContext> {
        Arc::new(
            RingContext::new(
                names.iter().map(|s| s.to_string()).collect(),
                weights.to_vec(),
                MonomialOrder::WeightedDegrevlex,
            )
            .unwrap(),
        )
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(&["x", "y"], &[1, 1]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = poly_arith(&(&x + &y), &(&x - &y), ArithKind::Mul).unwrap();
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn identities() {
        let r = ring(&["z", "w"], &[2, 5]);
        let p = Polynomial::parse("z^5 - w^2", &r).unwrap();
        assert_eq!(
            poly_arith(&p, &Polynomial::zero(&r), ArithKind::Add).unwrap(),
            p
        );
        assert_eq!(
            poly_arith(&p, &Polynomial::one(&r), ArithKind::Mul).unwrap(),
            p
        );
    }

    #[test]
    fn ring_mismatch_is_structural() {
        let r1 = ring(&["x"], &[1]);
        let r2 = ring(&["y"], &[1]);
        let e = poly_arith(
            &Polynomial::var(&r1, 0),
            &Polynomial::var(&r2, 0),
            ArithKind::Add,
        );
        assert!(matches!(e, Err(Error::Structural(_))));
    }

    #[test]
    fn weighted_degrees() {
        let cusp = ring(&["z", "w"], &[2, 5]);
        let p = Polynomial::parse("z^5 - w^2", &cusp).unwrap();
        assert_eq!(p.weighted_degree_info().unwrap(), (10, 10, true));

        let r = ring(&["x", "y"], &[1, 1]);
        let q = Polynomial::parse("x + y^2", &r).unwrap();
        assert_eq!(q.weighted_degree_info().unwrap(), (1, 2, false));
        assert_eq!(
            Polynomial::from_int(&r, 3).weighted_degree_info().unwrap(),
            (0, 0, true)
        );
        assert_eq!(
            Polynomial::zero(&r).weighted_degree_info(),
            Err(Error::UndefinedDegree)
        );
    }

    #[test]
    fn derivative_of_cusp() {
        let r = ring(&["z", "w"], &[2, 5]);
        let p = Polynomial::parse("z^5 - w^2", &r).unwrap();
        assert_eq!(p.derivative(0).to_string(), "5*z^4");
        assert_eq!(p.derivative(1).to_string(), "-2*w");
    }

    #[test]
    fn printing_is_canonical() {
        let r = ring(&["x", "y", "z"], &[1, 1, 1]);
        let p = Polynomial::parse("- z + 3/2*y*x^2 + 6/4", &r).unwrap();
        assert_eq!(p.to_string(), "3/2*x^2*y - z + 3/2");
    }
}
