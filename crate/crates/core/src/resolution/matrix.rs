use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{same_ring, Polynomial, RingContext};

/// Dense matrix of polynomials over one ring.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    ring: Arc<RingContext>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<RingContext>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    /// Row-major construction.
    pub fn from_rows(ring: &Arc<RingContext>, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Structural("ragged matrix rows".into()));
            }
            for p in row {
                if !same_ring(p.ring(), ring) {
                    return Err(Error::Structural(
                        "matrix entry from a different ring".into(),
                    ));
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_columns(
        ring: &Arc<RingContext>,
        rows: usize,
        columns: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let mut m = PolyMatrix::zeros(ring, rows, columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Structural("column length mismatch".into()));
            }
            for (i, p) in col.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    /// Parses a matrix from rows of polynomial strings.
    pub fn parse(ring: &Arc<RingContext>, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|s| Polynomial::parse(s, ring)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        PolyMatrix::from_rows(ring, rows)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::Structural("matrices over different rings".into()));
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(&self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Submatrix keeping the listed rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by Laplace expansion along rows, memoized on the set of
    /// remaining columns.
    pub fn determinant(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::Structural(
                "determinant of a non-square matrix".into(),
            ));
        }
        if self.rows > 20 {
            return Err(Error::Cap("determinant larger than 20x20".into()));
        }
        let mut memo = HashMap::new();
        Ok(self.det_rec(0, (1u32 << self.cols) - 1, &mut memo))
    }

    fn det_rec(&self, row: usize, mask: u32, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
        if row == self.rows {
            return Polynomial::one(&self.ring);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let mut acc = Polynomial::zero(&self.ring);
        let mut sign_pos = 0;
        for j in 0..self.cols {
            if mask & (1 << j) == 0 {
                continue;
            }
            let a = self.get(row, j);
            if !a.is_zero() {
                let sub = self.det_rec(row + 1, mask & !(1 << j), memo);
                if !sub.is_zero() {
                    let term = a * &sub;
                    acc = if sign_pos % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
            }
            sign_pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// All nonzero `k × k` minors, deduplicated, in a fixed order.
    ///
    /// The empty minor (`k = 0`) is `1`; for `k` beyond the matrix size there
    /// are none.
    pub fn minors(&self, k: usize) -> Result<Vec<Polynomial>> {
        if k == 0 {
            return Ok(vec![Polynomial::one(&self.ring)]);
        }
        if k > self.rows || k > self.cols {
            return Ok(vec![]);
        }
        let mut out: Vec<Polynomial> = Vec::new();
        for rs in combinations(self.rows, k) {
            for cs in combinations(self.cols, k) {
                let d = self.select(&rs, &cs).determinant()?;
                if !d.is_zero() && !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        Ok(out)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub(crate) fn remove_row(&mut self, r: usize) {
        let mut entries = Vec::with_capacity((self.rows - 1) * self.cols);
        for i in 0..self.rows {
            if i != r {
                for j in 0..self.cols {
                    entries.push(self.get(i, j).clone());
                }
            }
        }
        self.rows -= 1;
        self.entries = entries;
    }

    pub(crate) fn remove_col(&mut self, c: usize) {
        let mut entries = Vec::with_capacity(self.rows * (self.cols - 1));
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j != c {
                    entries.push(self.get(i, j).clone());
                }
            }
        }
        self.cols -= 1;
        self.entries = entries;
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for row in self.to_string_rows() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingContext> {
        Arc::new(RingContext::with_names(&["x", "y", "z"]).unwrap())
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn determinant_of_a_3x3() {
        let r = ring();
        let m =
            PolyMatrix::parse(&r, &[&["x", "y", "0"], &["0", "x", "y"], &["z", "0", "x"]]).unwrap();
        // x(x^2) - y(0 - yz) = x^3 + y^2 z
        assert_eq!(m.determinant().unwrap().to_string(), "x^3 + y^2*z");
    }

    #[test]
    fn minors_of_the_koszul_map() {
        let r = ring();
        let m = PolyMatrix::parse(&r, &[&["-y"], &["x"]]).unwrap();
        let ms: Vec<String> = m.minors(1).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(ms, ["-y", "x"]);
        assert_eq!(m.minors(0).unwrap().len(), 1);
        assert!(m.minors(2).unwrap().is_empty());
    }

    #[test]
    fn product_shape_checked() {
        let r = ring();
        let a = PolyMatrix::parse(&r, &[&["x", "y"]]).unwrap();
        let b = PolyMatrix::parse(&r, &[&["-y"], &["x"]]).unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        assert!(a.mul(&a).is_err());
    }
}
