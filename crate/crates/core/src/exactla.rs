//! Exact linear algebra over a [`Field`]: reduced echelon forms, kernels and
//! canonical subspaces.

use std::fmt;

use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

fn check_dim(expected: usize, found: usize) -> Result<(), LinAlgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinAlgError::DimensionMismatch { expected, found })
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, LinAlgError> {
        check_dim(rows * cols, data.len())?;
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Result<Self, LinAlgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            check_dim(cols, r.len())?;
            data.extend(r);
        }
        Ok(Mat {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat<F>) -> Result<Mat<F>, LinAlgError> {
        check_dim(self.cols, o.rows)?;
        let mut out = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let v = out.get(r, c).add(&a.mul(o.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinAlgError> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut rows = self.row_vecs();
        let pivots = reduce_rows(&mut rows, self.cols);
        let m = Mat::from_rows(self.cols, rows).expect("rows keep their width");
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// `{v : M v = 0}` in canonical form.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = r.get(row, free).neg();
            }
            basis.push(v);
        }
        Subspace::from_independent(self.cols, basis)
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat {}x{}\n{}", self.rows, self.cols, self)
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Gauss–Jordan elimination in place. Zero rows are dropped; the remaining
/// rows are in reduced echelon form. Returns the pivot columns.
pub fn reduce_rows<F: Field>(rows: &mut Vec<Vec<F>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[next][col..].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..cols {
                if !pivot_row[c].is_zero() {
                    row[c] = row[c].sub(&factor.mul(&pivot_row[c]));
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    pivots
}

/// A linear subspace of `F^ambient`, stored as its unique reduced echelon basis:
/// each basis vector's first nonzero coordinate is 1, pivots strictly increase,
/// and every basis vector vanishes at the other vectors' pivots.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::<F>::identity(ambient).row_vecs(),
        }
    }

    /// Canonical basis of the span of `vectors`.
    pub fn span(ambient: usize, vectors: Vec<Vec<F>>) -> Result<Self, LinAlgError> {
        for v in &vectors {
            check_dim(ambient, v.len())?;
        }
        Ok(Self::from_independent(ambient, vectors))
    }

    // Callers guarantee every vector has length `ambient`.
    fn from_independent(ambient: usize, mut vectors: Vec<Vec<F>>) -> Self {
        reduce_rows(&mut vectors, ambient);
        Subspace {
            ambient,
            basis: vectors,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Mat<F> {
        Mat::from_rows(self.ambient, self.basis.clone()).expect("basis vectors share the ambient")
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|v| v.iter().position(|x| !x.is_zero()).expect("nonzero basis vector"))
            .collect()
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains(&self, v: &[F]) -> Result<bool, LinAlgError> {
        check_dim(self.ambient, v.len())?;
        let mut w = v.to_vec();
        for (b, p) in self.basis.iter().zip(self.pivots()) {
            if w[p].is_zero() {
                continue;
            }
            let c = w[p].clone();
            for (wi, bi) in w.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *wi = wi.sub(&c.mul(bi));
                }
            }
        }
        Ok(w.iter().all(Field::is_zero))
    }

    pub fn equals(&self, other: &Subspace<F>) -> Result<bool, LinAlgError> {
        check_dim(self.ambient, other.ambient)?;
        Ok(self.basis == other.basis)
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> Result<bool, LinAlgError> {
        check_dim(self.ambient, other.ambient)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The constraint form: all `c` with `c · v = 0` for every `v` in the subspace.
    pub fn annihilator(&self) -> Subspace<F> {
        self.basis_matrix().kernel()
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinAlgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Self::from_independent(self.ambient, vs))
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinAlgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut constraints = self.annihilator().basis;
        constraints.extend(other.annihilator().basis);
        Ok(Mat::from_rows(self.ambient, constraints)?.kernel())
    }

    /// Image under the coordinate projection onto `coords` (in that order).
    pub fn project(&self, coords: &[usize]) -> Subspace<F> {
        let vs = self
            .basis
            .iter()
            .map(|v| coords.iter().map(|&c| v[c].clone()).collect())
            .collect();
        Self::from_independent(coords.len(), vs)
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, map: &Mat<F>) -> Result<Subspace<F>, LinAlgError> {
        check_dim(self.ambient, map.cols())?;
        let mut vs = Vec::with_capacity(self.basis.len());
        for v in &self.basis {
            vs.push(map.mul_vec(v)?);
        }
        Ok(Self::from_independent(map.rows(), vs))
    }
}

impl<F: Field> fmt::Display for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return writeln!(f, "(zero subspace of dimension {})", self.ambient);
        }
        for v in &self.basis {
            let cells: Vec<String> = v.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient {}, dim {})\n{}", self.ambient, self.dim(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rat, RatFunc};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from(x)).collect()
    }

    fn m(cols: usize, rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(cols, rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn canonical_basis_examples() {
        let s = Subspace::span(2, vec![v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 1])]);
        let s = Subspace::span(2, vec![v(&[0, 1]), v(&[1, 0])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 0]), v(&[0, 1])]);
        let z = Subspace::<Rat>::span(3, vec![]).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(matches!(
            Subspace::span(2, vec![v(&[1, 2, 3])]),
            Err(LinAlgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m(2, &[&[1, 1]]).kernel().basis(), &[v(&[1, -1])]);
        assert_eq!(Mat::<Rat>::identity(3).kernel().dim(), 0);
        assert_eq!(m(2, &[&[0, 0]]).kernel(), Subspace::full(2));
        assert_eq!(Mat::<Rat>::zeros(0, 2).kernel(), Subspace::full(2));
    }

    #[test]
    fn subspace_equality_examples() {
        let a = Subspace::span(2, vec![v(&[1, 1])]).unwrap();
        let b = Subspace::span(2, vec![v(&[2, 2])]).unwrap();
        assert!(a.equals(&b).unwrap());
        let c = Subspace::span(2, vec![v(&[1, 0])]).unwrap();
        let d = Subspace::span(2, vec![v(&[0, 1])]).unwrap();
        assert!(!c.equals(&d).unwrap());
        assert!(Subspace::<Rat>::zero(2).equals(&Subspace::zero(2)).unwrap());
        assert!(Subspace::<Rat>::zero(2).equals(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn annihilator_and_intersection() {
        let a = Subspace::span(3, vec![v(&[1, 1, 0])]).unwrap();
        let ann = a.annihilator();
        assert_eq!(ann.dim(), 2);
        for c in ann.basis() {
            assert!(dot(c, &v(&[1, 1, 0])).is_zero());
        }
        let b = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let c = Subspace::span(3, vec![v(&[0, 1, 1]), v(&[1, 0, 0])]).unwrap();
        assert_eq!(b.intersect(&c).unwrap().basis(), &[v(&[1, 0, 0])]);
        assert_eq!(b.sum(&c).unwrap(), Subspace::full(3));
    }

    #[test]
    fn works_over_rational_functions() {
        let s = RatFunc::s();
        let one = RatFunc::one();
        let mat = Mat::from_rows(2, vec![vec![s.clone(), one.clone()]]).unwrap();
        let k = mat.kernel();
        assert_eq!(k.dim(), 1);
        assert!(dot(&[s, one], &k.basis()[0]).is_zero());
    }

    #[test]
    fn display_prints_one_row_per_line() {
        let a = m(2, &[&[1, 2], &[3, 4]]);
        assert_eq!(a.to_string(), "1 2\n3 4\n");
    }
}
