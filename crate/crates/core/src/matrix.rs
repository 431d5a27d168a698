//! Dense complex matrices over the two scalar backends, with the handful
//! of linear-algebra routines the rest of the crate needs: dagger,
//! composition, Kronecker product, row reduction, null spaces and
//! orthogonal projections. The exact backend never leaves the Gaussian
//! rationals; projections onto rational subspaces use the Gram formula
//! M(M†M)⁻¹M† instead of orthonormalization.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    backend: Backend,
    entries: Vec<Scalar>, // row-major
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let backend = entries
            .first()
            .map(Scalar::backend)
            .ok_or_else(|| Error::InvalidMatrix("empty matrix needs explicit backend".into()))?;
        for e in &entries {
            if e.backend() != backend {
                return Err(Error::BackendMismatch(backend, e.backend()));
            }
        }
        Ok(Matrix {
            rows,
            cols,
            backend,
            entries,
        })
    }

    /// Zero-sized or zero-filled matrices need the backend spelled out.
    pub fn zero(backend: Backend, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            backend,
            entries: vec![Scalar::zero(backend); rows * cols],
        }
    }

    pub fn identity(backend: Backend, n: usize) -> Self {
        let mut m = Matrix::zero(backend, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(backend));
        }
        m
    }

    pub fn from_fn(backend: Backend, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                debug_assert_eq!(e.backend(), backend);
                entries.push(e);
            }
        }
        Matrix {
            rows,
            cols,
            backend,
            entries,
        }
    }

    /// Exact matrix from integer entries, row-major.
    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            rows,
            cols,
            backend: Backend::Exact,
            entries: data.iter().map(|&n| Scalar::from_int(n)).collect(),
        }
    }

    pub fn column(entries: Vec<Scalar>) -> Result<Self> {
        let n = entries.len();
        Matrix::new(n, 1, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.backend(), self.backend);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn to_approx(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            backend: Backend::Approx,
            entries: self.entries.iter().map(Scalar::to_approx).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix {
        Matrix::from_fn(self.backend, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Matrix product `self · rhs` (categorical composition g ∘ f with
    /// g = self, f = rhs).
    pub fn compose(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.backend != rhs.backend {
            return Err(Error::BackendMismatch(self.backend, rhs.backend));
        }
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zero(self.backend, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Scalar::zero(self.backend);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Kronecker product with row-major pair ordering: block (i,j) of the
    /// result is a_{ij}·b.
    pub fn tensor(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.backend != rhs.backend {
            return Err(Error::BackendMismatch(self.backend, rhs.backend));
        }
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Matrix::zero(self.backend, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a.mul(rhs.get(k, l)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.backend != rhs.backend {
            return Err(Error::BackendMismatch(self.backend, rhs.backend));
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            backend: self.backend,
            entries,
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.add(&rhs.scale(&Scalar::one(self.backend).neg()))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            backend: self.backend,
            entries: self.entries.iter().map(|e| e.mul(s)).collect(),
        }
    }

    pub fn equals(&self, rhs: &Matrix, tol: &Tolerance) -> Result<bool> {
        if self.backend != rhs.backend {
            return Err(Error::BackendMismatch(self.backend, rhs.backend));
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .all(|(a, b)| a.approx_eq(b, tol)))
    }

    /// Max entrywise modulus of the difference, for verdict reporting.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b).abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        self.entries.iter().all(|e| e.is_zero(tol))
    }

    /// ⟨self, rhs⟩ = self† · rhs for column vectors.
    pub fn inner(&self, rhs: &Matrix) -> Result<Scalar> {
        let p = self.dagger().compose(rhs)?;
        Ok(p.get(0, 0).clone())
    }

    /// The dim²×dim² symmetry X⊗X → X⊗X swapping the tensor legs.
    pub fn swap(backend: Backend, dim: usize) -> Matrix {
        let mut m = Matrix::zero(backend, dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(j * dim + i, i * dim + j, Scalar::one(backend));
            }
        }
        m
    }

    /// Stable textual key; exact entries print exactly, approx entries are
    /// rounded so eps-close matrices share a key in fixtures.
    pub fn canonical_key(&self) -> String {
        let mut s = format!("{}x{}:", self.rows, self.cols);
        for e in &self.entries {
            match e {
                Scalar::Exact { .. } => s.push_str(&e.to_string()),
                Scalar::Approx { re, im } => {
                    // round to 6 decimals, normalizing -0.0
                    let r = (re * 1e6).round() / 1e6 + 0.0;
                    let i = (im * 1e6).round() / 1e6 + 0.0;
                    s.push_str(&format!("{r}{i:+}i"));
                }
            }
            s.push(',');
        }
        s
    }

    // ---- row reduction and friends ----

    /// Pivot threshold for rank decisions: eps scaled by the largest row
    /// norm of the input (0 on the exact backend).
    fn pivot_threshold(&self, tol: &Tolerance) -> f64 {
        match self.backend {
            Backend::Exact => 0.0,
            Backend::Approx => {
                let max_row = (0..self.rows)
                    .map(|i| {
                        (0..self.cols)
                            .map(|j| self.get(i, j).abs_f64().powi(2))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .fold(0.0, f64::max);
                if max_row == 0.0 {
                    tol.eps
                } else {
                    tol.eps * max_row
                }
            }
        }
    }

    /// Reduced row echelon form; returns (rref, pivot column per pivot row).
    pub fn rref(&self, tol: &Tolerance) -> (Matrix, Vec<usize>) {
        let thr = self.pivot_threshold(tol);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // exact: first usable pivot; approx: largest modulus
            let mut best = None;
            let mut best_abs = thr;
            for r in row..m.rows {
                let a = m.get(r, col).abs_f64();
                match m.backend {
                    Backend::Exact => {
                        if a > 0.0 {
                            best = Some(r);
                            break;
                        }
                    }
                    Backend::Approx => {
                        if a > best_abs {
                            best_abs = a;
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(p) = best else { continue };
            if p != row {
                for j in 0..m.cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot nonzero");
            for j in 0..m.cols {
                let v = m.get(row, j).mul(&inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero(&Tolerance::exact()) {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(r, j).sub(&factor.mul(m.get(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of ker(self) as columns of a cols×k matrix (k = nullity).
    pub fn null_space_basis(&self, tol: &Tolerance) -> Matrix {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zero(self.backend, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, Scalar::one(self.backend));
            for (prow, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, r.get(prow, fc).neg());
            }
        }
        basis
    }

    /// Inverse of a square matrix by Gauss–Jordan.
    pub fn inverse(&self, tol: &Tolerance) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.backend, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one(self.backend));
        }
        let (r, pivots) = aug.rref(tol);
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zero(self.backend, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// One solution of `self · x = b`, or None when inconsistent.
    pub fn solve(&self, b: &Matrix, tol: &Tolerance) -> Option<Matrix> {
        assert_eq!(b.cols, 1);
        assert_eq!(b.rows, self.rows);
        let mut aug = Matrix::zero(self.backend, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b.get(i, 0).clone());
        }
        let (r, pivots) = aug.rref(tol);
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = Matrix::zero(self.backend, self.cols, 1);
        for (prow, &pc) in pivots.iter().enumerate() {
            x.set(pc, 0, r.get(prow, self.cols).clone());
        }
        Some(x)
    }

    /// Orthogonal projection onto the column span of `self`.
    ///
    /// Exact backend: Gram formula M(M†M)⁻¹M†, which stays rational.
    /// Approx backend: modified Gram–Schmidt with tolerance-based drops.
    pub fn column_span_projection(&self, tol: &Tolerance) -> Result<Matrix> {
        let d = self.rows;
        if self.cols == 0 {
            return Ok(Matrix::zero(self.backend, d, d));
        }
        match self.backend {
            Backend::Exact => {
                // Reduce to an independent subset of columns first.
                let (_, pivots) = self.rref(tol);
                let m = self.select_columns(&pivots);
                if m.cols == 0 {
                    return Ok(Matrix::zero(self.backend, d, d));
                }
                let gram = m.dagger().compose(&m)?;
                let inv = gram.inverse(tol)?;
                m.compose(&inv)?.compose(&m.dagger())
            }
            Backend::Approx => {
                let cols = self.orthonormal_columns(tol);
                let mut p = Matrix::zero(self.backend, d, d);
                for v in &cols {
                    p = p.add(&v.compose(&v.dagger())?)?;
                }
                Ok(p)
            }
        }
    }

    /// Orthogonal projection onto ker(self). Zero matrix maps to the
    /// identity projection, identities to the zero projection.
    pub fn null_space_projection(&self, tol: &Tolerance) -> Result<Matrix> {
        self.null_space_basis(tol).column_span_projection(tol)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.backend, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    pub fn column_at(&self, j: usize) -> Matrix {
        self.select_columns(&[j])
    }

    /// Concatenate columns of several matrices with equal row counts.
    pub fn hcat(parts: &[Matrix]) -> Result<Matrix> {
        let rows = parts[0].rows;
        let backend = parts[0].backend;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(backend, rows, cols);
        let mut off = 0;
        for m in parts {
            if m.rows != rows {
                return Err(Error::ShapeMismatch("hcat row mismatch".into()));
            }
            if m.backend != backend {
                return Err(Error::BackendMismatch(backend, m.backend));
            }
            for i in 0..rows {
                for j in 0..m.cols {
                    out.set(i, off + j, m.get(i, j).clone());
                }
            }
            off += m.cols;
        }
        Ok(out)
    }

    /// Stack rows of several matrices with equal column counts.
    pub fn vcat(parts: &[Matrix]) -> Result<Matrix> {
        let cols = parts[0].cols;
        let backend = parts[0].backend;
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zero(backend, rows, cols);
        let mut off = 0;
        for m in parts {
            if m.cols != cols {
                return Err(Error::ShapeMismatch("vcat col mismatch".into()));
            }
            for i in 0..m.rows {
                for j in 0..cols {
                    out.set(off + i, j, m.get(i, j).clone());
                }
            }
            off += m.rows;
        }
        Ok(out)
    }

    /// Modified Gram–Schmidt over the columns (approx backend).
    fn orthonormal_columns(&self, tol: &Tolerance) -> Vec<Matrix> {
        let thr = self.pivot_threshold(tol).max(tol.eps);
        let mut out: Vec<Matrix> = Vec::new();
        for j in 0..self.cols {
            let mut v = self.column_at(j);
            for u in &out {
                let c = u.inner(&v).unwrap();
                v = v.sub(&u.scale(&c)).unwrap();
            }
            let n = v.inner(&v).unwrap().re_f64().max(0.0).sqrt();
            if n > thr {
                out.push(v.scale(&Scalar::approx(1.0 / n, 0.0)));
            }
        }
        out
    }

    /// Column-major vectorization as a rows·cols × 1 matrix.
    pub fn vectorize(&self) -> Matrix {
        let mut out = Matrix::zero(self.backend, self.rows * self.cols, 1);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(j * self.rows + i, 0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero(self.backend);
        for i in 0..self.rows.min(self.cols) {
            t = t.add(self.get(i, i));
        }
        t
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---- JSON wire format ----
//
// {"rows":R,"cols":C,"backend":"exact"|"approx","entries":[[...row...],...]}
// exact entry: string "a/b+c/d i"; approx entry: [re, im].

pub(crate) fn entry_to_json(s: &Scalar) -> serde_json::Value {
    match s {
        e @ Scalar::Exact { .. } => serde_json::Value::String(e.to_string()),
        Scalar::Approx { re, im } => serde_json::json!([re, im]),
    }
}

pub(crate) fn entry_from_json(backend: Backend, v: &serde_json::Value) -> Result<Scalar> {
    match (backend, v) {
        (Backend::Exact, serde_json::Value::String(s)) => Scalar::parse_exact(s),
        (Backend::Approx, serde_json::Value::Array(a)) if a.len() == 2 => {
            let re = a[0]
                .as_f64()
                .ok_or_else(|| Error::Json("non-numeric approx entry".into()))?;
            let im = a[1]
                .as_f64()
                .ok_or_else(|| Error::Json("non-numeric approx entry".into()))?;
            Ok(Scalar::approx(re, im))
        }
        _ => Err(Error::Json("entry does not match declared backend".into())),
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    backend: Backend,
    entries: Vec<Vec<serde_json::Value>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| entry_to_json(self.get(i, j))).collect())
            .collect();
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            backend: self.backend,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(wire.rows * wire.cols);
        if wire.entries.len() != wire.rows {
            return Err(D::Error::custom("entry row count does not match rows"));
        }
        for row in &wire.entries {
            if row.len() != wire.cols {
                return Err(D::Error::custom("entry column count does not match cols"));
            }
            for v in row {
                entries.push(
                    entry_from_json(wire.backend, v).map_err(|e| D::Error::custom(e.to_string()))?,
                );
            }
        }
        if wire.rows * wire.cols == 0 {
            return Ok(Matrix::zero(wire.backend, wire.rows, wire.cols));
        }
        Matrix::new(wire.rows, wire.cols, entries).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::exact()
    }

    #[test]
    fn dagger_examples() {
        let m = Matrix::from_ints(2, 2, &[0, 1, 0, 0]);
        assert_eq!(m.dagger(), Matrix::from_ints(2, 2, &[0, 0, 1, 0]));
        let i = Matrix::new(1, 1, vec![Scalar::i(Backend::Exact)]).unwrap();
        assert_eq!(i.dagger(), Matrix::new(1, 1, vec![Scalar::i(Backend::Exact).neg()]).unwrap());
    }

    #[test]
    fn tensor_examples() {
        let id2 = Matrix::identity(Backend::Exact, 2);
        assert_eq!(id2.tensor(&id2).unwrap(), Matrix::identity(Backend::Exact, 4));
        let a = Matrix::from_ints(1, 1, &[2]);
        let b = Matrix::from_ints(1, 1, &[3]);
        assert_eq!(a.tensor(&b).unwrap(), Matrix::from_ints(1, 1, &[6]));
        let d10 = Matrix::from_ints(2, 2, &[1, 0, 0, 0]);
        let d01 = Matrix::from_ints(2, 2, &[0, 0, 0, 1]);
        let t = d10.tensor(&d01).unwrap();
        let expected = Matrix::from_fn(Backend::Exact, 4, 4, |i, j| {
            if i == j && i == 1 {
                Scalar::one(Backend::Exact)
            } else {
                Scalar::zero(Backend::Exact)
            }
        });
        assert_eq!(t, expected);
    }

    #[test]
    fn tensor_backend_mismatch_is_error() {
        let a = Matrix::identity(Backend::Exact, 2);
        let b = Matrix::identity(Backend::Approx, 2);
        assert!(matches!(a.tensor(&b), Err(Error::BackendMismatch(_, _))));
    }

    #[test]
    fn compose_examples() {
        let f = Matrix::from_ints(2, 2, &[1, 2, 3, 4]);
        let id = Matrix::identity(Backend::Exact, 2);
        assert_eq!(id.compose(&f).unwrap(), f);
        let z = Matrix::zero(Backend::Exact, 2, 2);
        assert!(z.compose(&f).unwrap().is_zero(&tol()));
        let row = Matrix::from_ints(1, 2, &[1, 1]);
        let col = Matrix::from_ints(2, 1, &[1, 1]);
        assert_eq!(row.compose(&col).unwrap(), Matrix::from_ints(1, 1, &[2]));
        assert!(f.compose(&Matrix::identity(Backend::Exact, 3)).is_err());
    }

    #[test]
    fn equals_tolerance_semantics() {
        let a = Matrix::zero(Backend::Approx, 1, 1);
        let mut b = Matrix::zero(Backend::Approx, 1, 1);
        b.set(0, 0, Scalar::approx(1e-12, 0.0));
        assert!(a.equals(&b, &Tolerance::approx(1e-9)).unwrap());
        assert!(!a.equals(&b, &Tolerance::approx(1e-13)).unwrap());
        let e = Matrix::identity(Backend::Exact, 1);
        assert!(matches!(
            e.equals(&a, &Tolerance::approx(1e-9)),
            Err(Error::BackendMismatch(_, _))
        ));
    }

    #[test]
    fn null_space_projection_examples() {
        let z = Matrix::zero(Backend::Exact, 2, 2);
        assert_eq!(
            z.null_space_projection(&tol()).unwrap(),
            Matrix::identity(Backend::Exact, 2)
        );
        let id = Matrix::identity(Backend::Exact, 2);
        assert!(id.null_space_projection(&tol()).unwrap().is_zero(&tol()));
        // ker [[1,1],[0,0]] = span{(1,-1)}; projection (1/2)[[1,-1],[-1,1]]
        let f = Matrix::from_ints(2, 2, &[1, 1, 0, 0]);
        let p = f.null_space_projection(&tol()).unwrap();
        let h = Scalar::from_ratio(1, 2);
        let expected = Matrix::new(
            2,
            2,
            vec![h.clone(), h.neg(), h.neg(), h],
        )
        .unwrap();
        assert_eq!(p, expected);
        // P = P† = P², fP = 0
        assert_eq!(p, p.dagger());
        assert_eq!(p.compose(&p).unwrap(), p);
        assert!(f.compose(&p).unwrap().is_zero(&tol()));
    }

    #[test]
    fn null_space_projection_grid_oracle() {
        // independent oracle: over a small rational grid, f·v = 0 ⟺ P·v = v
        let f = Matrix::from_ints(2, 2, &[1, 1, 0, 0]);
        let p = f.null_space_projection(&tol()).unwrap();
        let vals = [-2i64, -1, 0, 1, 2];
        for &a in &vals {
            for &b in &vals {
                let v = Matrix::from_ints(2, 1, &[a, b]);
                let in_ker = f.compose(&v).unwrap().is_zero(&tol());
                let fixed = p.compose(&v).unwrap() == v;
                assert_eq!(in_ker, fixed, "grid point ({a},{b})");
            }
        }
    }

    #[test]
    fn approx_null_space_projection() {
        let f = Matrix::new(
            2,
            2,
            vec![
                Scalar::approx(1.0, 0.0),
                Scalar::approx(1.0, 0.0),
                Scalar::approx(0.0, 0.0),
                Scalar::approx(0.0, 0.0),
            ],
        )
        .unwrap();
        let t = Tolerance::approx(1e-9);
        let p = f.null_space_projection(&t).unwrap();
        assert!(p.equals(&p.dagger(), &t).unwrap());
        assert!(p.compose(&p).unwrap().equals(&p, &t).unwrap());
        assert!(f.compose(&p).unwrap().is_zero(&t));
        assert!((p.get(0, 0).re_f64() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_ints(2, 2, &[1, 2, 3, 4]);
        let inv = m.inverse(&tol()).unwrap();
        assert_eq!(m.compose(&inv).unwrap(), Matrix::identity(Backend::Exact, 2));
        let b = Matrix::from_ints(2, 1, &[1, 1]);
        let x = m.solve(&b, &tol()).unwrap();
        assert_eq!(m.compose(&x).unwrap(), b);
        let sing = Matrix::from_ints(2, 2, &[1, 1, 1, 1]);
        assert!(matches!(sing.inverse(&tol()), Err(Error::Singular)));
        let inconsistent = Matrix::from_ints(2, 1, &[0, 1]);
        assert!(Matrix::from_ints(2, 2, &[1, 1, 0, 0])
            .solve(&inconsistent, &tol())
            .is_none());
    }

    #[test]
    fn json_round_trip_exact_and_approx() {
        let m = Matrix::new(
            2,
            2,
            vec![
                Scalar::exact_ratio(3, 5, -4, 5),
                Scalar::from_int(0),
                Scalar::i(Backend::Exact),
                Scalar::from_ratio(1, 3),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);

        let a = Matrix::new(1, 2, vec![Scalar::approx(0.5, -0.25), Scalar::approx(0.0, 1.0)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("approx"));
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn json_rejects_mixed_entry_kinds() {
        let bad = r#"{"rows":1,"cols":1,"backend":"exact","entries":[[[1.0,0.0]]]}"#;
        assert!(serde_json::from_str::<Matrix>(bad).is_err());
    }
}
