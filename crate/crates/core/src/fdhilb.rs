//! Finite-dimensional Hilbert spaces as a dagger symmetric monoidal
//! kernel category. Kernel subobjects are carried canonically as
//! projections, classical structures come from orthonormal bases via
//! δ = (U⊗U) ∘ δ₀ ∘ U†, and every axiom (dagger monic, commutative,
//! associative, the involution axiom, plus the Frobenius equation as an
//! extra hygiene check) is independently verifiable.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{entry_from_json, entry_to_json, Matrix};
use crate::scalar::{rational_sqrt, Backend, Scalar, Tolerance};

/// An object of the category: just a dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbObject {
    pub dim: usize,
}

/// A self-adjoint idempotent, the canonical representative of a kernel
/// subobject.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    mat: Matrix,
}

impl Projection {
    pub fn new(mat: Matrix, tol: &Tolerance) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::ShapeMismatch("projection must be square".into()));
        }
        if !mat.equals(&mat.dagger(), tol)? {
            return Err(Error::InvalidMatrix("projection not self-adjoint".into()));
        }
        if !mat.compose(&mat)?.equals(&mat, tol)? {
            return Err(Error::InvalidMatrix("projection not idempotent".into()));
        }
        Ok(Projection { mat })
    }

    /// Skips validation; for internally constructed values.
    pub(crate) fn trusted(mat: Matrix) -> Self {
        Projection { mat }
    }

    pub fn zero(backend: Backend, dim: usize) -> Self {
        Projection {
            mat: Matrix::zero(backend, dim, dim),
        }
    }

    pub fn identity(backend: Backend, dim: usize) -> Self {
        Projection {
            mat: Matrix::identity(backend, dim),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn backend(&self) -> Backend {
        self.mat.backend()
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        self.mat.rank(tol)
    }

    pub fn to_approx(&self) -> Projection {
        Projection {
            mat: self.mat.to_approx(),
        }
    }

    /// Projection onto the line spanned by a nonzero vector.
    pub fn onto_line(v: &Matrix, tol: &Tolerance) -> Result<Self> {
        Ok(Projection {
            mat: v.column_span_projection(tol)?,
        })
    }
}

/// ker(f) as a projection onto the null space of f.
pub fn kernel(f: &Matrix, tol: &Tolerance) -> Result<Projection> {
    Ok(Projection::trusted(f.null_space_projection(tol)?))
}

/// coker(f) = ker(f†), a subobject of the codomain.
pub fn cokernel(f: &Matrix, tol: &Tolerance) -> Result<Projection> {
    kernel(&f.dagger(), tol)
}

/// Orthocomplement id − P.
pub fn ortho(p: &Projection) -> Projection {
    let id = Matrix::identity(p.backend(), p.dim());
    Projection::trusted(id.sub(p.matrix()).expect("same shape"))
}

// ---- orthonormal bases ----

#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    dim: usize,
    backend: Backend,
    vectors: Vec<Matrix>, // dim×1 columns
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<Matrix>, tol: &Tolerance) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(Error::NotOrthonormal("empty basis".into()));
        }
        let backend = vectors[0].backend();
        for v in &vectors {
            if v.rows() != dim || v.cols() != 1 {
                return Err(Error::NotOrthonormal(format!(
                    "expected {dim} column vectors of length {dim}"
                )));
            }
            if v.backend() != backend {
                return Err(Error::BackendMismatch(backend, v.backend()));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ip = vectors[i].inner(&vectors[j])?;
                let expected = if i == j {
                    Scalar::one(backend)
                } else {
                    Scalar::zero(backend)
                };
                if !ip.approx_eq(&expected, tol) {
                    return Err(Error::NotOrthonormal(format!(
                        "⟨v{i},v{j}⟩ = {ip}, expected {expected}"
                    )));
                }
            }
        }
        Ok(OrthonormalBasis {
            dim,
            backend,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn vectors(&self) -> &[Matrix] {
        &self.vectors
    }

    /// The unitary with the basis vectors as columns.
    pub fn unitary(&self) -> Matrix {
        Matrix::hcat(&self.vectors).expect("uniform shapes")
    }

    pub fn to_approx(&self) -> OrthonormalBasis {
        OrthonormalBasis {
            dim: self.dim,
            backend: Backend::Approx,
            vectors: self.vectors.iter().map(Matrix::to_approx).collect(),
        }
    }

    /// Computational basis of C^d, exact.
    pub fn computational(dim: usize) -> Self {
        let id = Matrix::identity(Backend::Exact, dim);
        OrthonormalBasis {
            dim,
            backend: Backend::Exact,
            vectors: (0..dim).map(|j| id.column_at(j)).collect(),
        }
    }

    /// The rational rotation basis {(3/5,4/5), (−4/5,3/5)} of C², exact.
    pub fn rotation_3_4_5() -> Self {
        let v0 = Matrix::new(
            2,
            1,
            vec![Scalar::from_ratio(3, 5), Scalar::from_ratio(4, 5)],
        )
        .unwrap();
        let v1 = Matrix::new(
            2,
            1,
            vec![Scalar::from_ratio(-4, 5), Scalar::from_ratio(3, 5)],
        )
        .unwrap();
        OrthonormalBasis {
            dim: 2,
            backend: Backend::Exact,
            vectors: vec![v0, v1],
        }
    }

    /// Hadamard basis {(1,1)/√2, (1,−1)/√2} of C², approx.
    pub fn hadamard2() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = Matrix::new(2, 1, vec![Scalar::approx(s, 0.0), Scalar::approx(s, 0.0)]).unwrap();
        let v1 = Matrix::new(2, 1, vec![Scalar::approx(s, 0.0), Scalar::approx(-s, 0.0)]).unwrap();
        OrthonormalBasis {
            dim: 2,
            backend: Backend::Approx,
            vectors: vec![v0, v1],
        }
    }

    /// Circular basis {(1,i)/√2, (1,−i)/√2} of C², approx.
    pub fn circular2() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = Matrix::new(2, 1, vec![Scalar::approx(s, 0.0), Scalar::approx(0.0, s)]).unwrap();
        let v1 = Matrix::new(2, 1, vec![Scalar::approx(s, 0.0), Scalar::approx(0.0, -s)]).unwrap();
        OrthonormalBasis {
            dim: 2,
            backend: Backend::Approx,
            vectors: vec![v0, v1],
        }
    }
}

/// A dagger-monic inclusion k: K → X with k∘k† = P, built from a
/// projection. Exact backend only succeeds when the range admits a
/// rational orthonormal basis (norms must be rational squares);
/// otherwise `NoRationalBasis` is returned so the caller can fall back
/// to the approx backend.
pub fn inclusion_of(p: &Projection, tol: &Tolerance) -> Result<Matrix> {
    let mat = p.matrix();
    let (_, pivots) = mat.rref(tol);
    // columns of P at the pivot positions of its row space span range(P)
    let (_, col_pivots) = mat.dagger().rref(tol);
    let raw = mat.select_columns(&col_pivots);
    let _ = pivots;
    match p.backend() {
        Backend::Approx => {
            let mut cols = Vec::new();
            let mut acc: Vec<Matrix> = Vec::new();
            for j in 0..raw.cols() {
                let mut v = raw.column_at(j);
                for u in &acc {
                    let c = u.inner(&v)?;
                    v = v.sub(&u.scale(&c))?;
                }
                let n = v.inner(&v)?.re_f64().max(0.0).sqrt();
                if n > tol.eps {
                    let u = v.scale(&Scalar::approx(1.0 / n, 0.0));
                    acc.push(u.clone());
                    cols.push(u);
                }
            }
            if cols.is_empty() {
                return Ok(Matrix::zero(Backend::Approx, p.dim(), 0));
            }
            Matrix::hcat(&cols)
        }
        Backend::Exact => {
            let mut acc: Vec<Matrix> = Vec::new();
            for j in 0..raw.cols() {
                let mut v = raw.column_at(j);
                for u in &acc {
                    // u unnormalized: subtract (⟨u,v⟩/⟨u,u⟩)·u
                    let c = u.inner(&v)?.div(&u.inner(u)?)?;
                    v = v.sub(&u.scale(&c))?;
                }
                if !v.is_zero(tol) {
                    acc.push(v);
                }
            }
            let mut cols = Vec::new();
            for v in acc {
                let nsq = v.inner(&v)?;
                let r = nsq
                    .as_rational()
                    .ok_or_else(|| Error::NoRationalBasis("complex norm".into()))?;
                let root = rational_sqrt(r)
                    .ok_or_else(|| Error::NoRationalBasis(format!("norm² = {r} is not a rational square")))?;
                let inv = Scalar::exact(root, num_rational::BigRational::from_integer(0.into()))
                    .inv()?;
                cols.push(v.scale(&inv));
            }
            if cols.is_empty() {
                return Ok(Matrix::zero(Backend::Exact, p.dim(), 0));
            }
            Matrix::hcat(&cols)
        }
    }
}

/// Extend a set of orthonormal columns (d×k) to a full orthonormal basis
/// of C^d. Exact backend fails with `NoRationalBasis` when the
/// complement has no rational orthonormal basis.
pub fn complete_basis(cols: &Matrix, tol: &Tolerance) -> Result<OrthonormalBasis> {
    let d = cols.rows();
    let backend = cols.backend();
    let span_p = if cols.cols() == 0 {
        Matrix::zero(backend, d, d)
    } else {
        cols.column_span_projection(tol)?
    };
    let comp = Projection::trusted(Matrix::identity(backend, d).sub(&span_p)?);
    let extra = inclusion_of(&comp, tol)?;
    let mut vectors: Vec<Matrix> = (0..cols.cols()).map(|j| cols.column_at(j)).collect();
    vectors.extend((0..extra.cols()).map(|j| extra.column_at(j)));
    OrthonormalBasis::new(vectors, tol)
}

// ---- classical structures ----

/// The computational-basis copier δ₀: eᵢ ↦ eᵢ⊗eᵢ as a d²×d matrix.
pub fn copier(backend: Backend, dim: usize) -> Matrix {
    let mut m = Matrix::zero(backend, dim * dim, dim);
    for i in 0..dim {
        m.set(i * dim + i, i, Scalar::one(backend));
    }
    m
}

#[derive(Clone, Debug)]
pub struct ClassicalStructure {
    dim: usize,
    delta: Matrix, // dim² × dim
    basis: Option<OrthonormalBasis>,
}

/// Per-axiom verification outcome for a candidate classical structure.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub dagger_monic: bool,
    pub commutative: bool,
    pub associative: bool,
    pub hstar: bool,
    /// Informational: not part of the defining axioms here, checked for
    /// fixture hygiene.
    pub frobenius: bool,
}

impl StructureReport {
    /// The defining axioms only (Frobenius is informational).
    pub fn passes(&self) -> bool {
        self.dagger_monic && self.commutative && self.associative && self.hstar
    }
}

impl ClassicalStructure {
    /// δ = (U⊗U) ∘ δ₀ ∘ U† for the unitary U with the basis as columns.
    pub fn from_basis(basis: &OrthonormalBasis) -> Result<Self> {
        let u = basis.unitary();
        let delta = u
            .tensor(&u)?
            .compose(&copier(basis.backend(), basis.dim()))?
            .compose(&u.dagger())?;
        Ok(ClassicalStructure {
            dim: basis.dim(),
            delta,
            basis: Some(basis.clone()),
        })
    }

    /// Wrap a raw dim²×dim morphism without provenance. Axioms are not
    /// checked here; run `verify` to audit.
    pub fn from_delta(delta: Matrix) -> Result<Self> {
        let dim = delta.cols();
        if delta.rows() != dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "delta must be {}x{}, got {}x{}",
                dim * dim,
                dim,
                delta.rows(),
                delta.cols()
            )));
        }
        Ok(ClassicalStructure {
            dim,
            delta,
            basis: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn backend(&self) -> Backend {
        self.delta.backend()
    }

    pub fn delta(&self) -> &Matrix {
        &self.delta
    }

    pub fn basis(&self) -> Option<&OrthonormalBasis> {
        self.basis.as_ref()
    }

    pub fn to_approx(&self) -> ClassicalStructure {
        ClassicalStructure {
            dim: self.dim,
            delta: self.delta.to_approx(),
            basis: self.basis.as_ref().map(OrthonormalBasis::to_approx),
        }
    }

    pub fn verify(&self, tol: &Tolerance) -> Result<StructureReport> {
        let d = self.dim;
        let backend = self.backend();
        let id = Matrix::identity(backend, d);
        let dagger_monic = self.delta.dagger().compose(&self.delta)?.equals(&id, tol)?;
        let swap = Matrix::swap(backend, d);
        let commutative = swap.compose(&self.delta)?.equals(&self.delta, tol)?;
        let lhs = self.delta.tensor(&id)?.compose(&self.delta)?;
        let rhs = id.tensor(&self.delta)?.compose(&self.delta)?;
        let associative = lhs.equals(&rhs, tol)?;
        let hstar = self.check_hstar(tol)?;
        let frobenius = self.check_frobenius(tol)?;
        Ok(StructureReport {
            dagger_monic,
            commutative,
            associative,
            hstar,
            frobenius,
        })
    }

    /// Both sides of the involution equation are conjugate-linear in x,
    /// so checking on the standard basis of the carrier suffices.
    fn check_hstar(&self, tol: &Tolerance) -> Result<bool> {
        let backend = self.backend();
        let id = Matrix::identity(backend, self.dim);
        for j in 0..self.dim {
            let x = id.column_at(j);
            let xs = match self.involution(&x, tol) {
                Ok(v) => v,
                Err(Error::HStarViolated) => return Ok(false),
                Err(e) => return Err(e),
            };
            if !self.hstar_holds(&x, &xs, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// δ† ∘ (x*⊗id) = (x†⊗id) ∘ δ as dim×dim matrices.
    pub fn hstar_holds(&self, x: &Matrix, x_star: &Matrix, tol: &Tolerance) -> Result<bool> {
        let id = Matrix::identity(self.backend(), self.dim);
        let lhs = self.delta.dagger().compose(&x_star.tensor(&id)?)?;
        let rhs = x.dagger().tensor(&id)?.compose(&self.delta)?;
        lhs.equals(&rhs, tol)
    }

    /// (id⊗δ†) ∘ (δ⊗id) = δ ∘ δ†.
    fn check_frobenius(&self, tol: &Tolerance) -> Result<bool> {
        let id = Matrix::identity(self.backend(), self.dim);
        let lhs = id
            .tensor(&self.delta.dagger())?
            .compose(&self.delta.tensor(&id)?)?;
        let rhs = self.delta.compose(&self.delta.dagger())?;
        lhs.equals(&rhs, tol)
    }

    /// The involution x ↦ x* of the carrier's points. With basis
    /// provenance: conjugate the coordinates in that basis. Without:
    /// solve the defining linear system; no solution means the
    /// involution axiom fails for this structure.
    pub fn involution(&self, x: &Matrix, tol: &Tolerance) -> Result<Matrix> {
        if x.rows() != self.dim || x.cols() != 1 {
            return Err(Error::ShapeMismatch("involution expects a point".into()));
        }
        if let Some(basis) = &self.basis {
            let backend = self.backend();
            let mut out = Matrix::zero(backend, self.dim, 1);
            for v in basis.vectors() {
                let c = v.inner(x)?;
                out = out.add(&v.scale(&c.conj()))?;
            }
            return Ok(out);
        }
        // Unknown y: δ†∘(y⊗id) = (x†⊗id)∘δ, linear in y. Vectorize both
        // sides over the standard basis of the unknown.
        let backend = self.backend();
        let id = Matrix::identity(backend, self.dim);
        let eye = Matrix::identity(backend, self.dim);
        let mut cols = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let ej = eye.column_at(j);
            let mj = self.delta.dagger().compose(&ej.tensor(&id)?)?;
            cols.push(mj.vectorize());
        }
        let a = Matrix::hcat(&cols)?;
        let rhs = x.dagger().tensor(&id)?.compose(&self.delta)?.vectorize();
        let y = a.solve(&rhs, tol).ok_or(Error::HStarViolated)?;
        // rref picks one solution; verify it actually satisfies the equation
        if !self.hstar_holds(x, &y, tol)? {
            return Err(Error::HStarViolated);
        }
        Ok(y)
    }

    /// The phase z with δ(x) = z·(x⊗x) for a unit vector x, when one
    /// exists. Presence is equivalent to copyability of the point 1↦x.
    pub fn vector_copyable_phase(&self, x: &Matrix, tol: &Tolerance) -> Result<Option<Scalar>> {
        let norm = x.inner(x)?;
        if !norm.approx_eq(&Scalar::one(self.backend()), tol) {
            return Err(Error::NonUnit);
        }
        let dx = self.delta.compose(x)?;
        let xx = x.tensor(x)?;
        // pick the largest-modulus entry of x⊗x as reference
        let mut best = 0;
        let mut best_abs = 0.0;
        for k in 0..xx.rows() {
            let a = xx.get(k, 0).abs_f64();
            if a > best_abs {
                best_abs = a;
                best = k;
            }
        }
        let z = match dx.get(best, 0).div(xx.get(best, 0)) {
            Ok(z) => z,
            Err(_) => return Ok(None),
        };
        if !dx.equals(&xx.scale(&z), tol)? {
            return Ok(None);
        }
        if !z.norm_sq().approx_eq(&Scalar::one(self.backend()), tol) {
            return Ok(None);
        }
        Ok(Some(z))
    }
}

// ---- JSON wire formats ----
//
// Basis: {"dim":d,"backend":...,"vectors":[[entry,...],...]}
// ClassicalStructure: {"dim":d,"delta":Matrix,"basis":Basis|null}

#[derive(Serialize, Deserialize)]
struct BasisWire {
    dim: usize,
    backend: Backend,
    vectors: Vec<Vec<serde_json::Value>>,
}

impl Serialize for OrthonormalBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BasisWire {
            dim: self.dim,
            backend: self.backend,
            vectors: self
                .vectors
                .iter()
                .map(|v| (0..v.rows()).map(|i| entry_to_json(v.get(i, 0))).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OrthonormalBasis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = BasisWire::deserialize(deserializer)?;
        let mut vectors = Vec::with_capacity(wire.vectors.len());
        for v in &wire.vectors {
            let entries = v
                .iter()
                .map(|e| entry_from_json(wire.backend, e))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| D::Error::custom(e.to_string()))?;
            vectors.push(Matrix::column(entries).map_err(|e| D::Error::custom(e.to_string()))?);
        }
        if wire.vectors.len() != wire.dim {
            return Err(D::Error::custom("vector count does not match dim"));
        }
        let tol = Tolerance::for_backend(wire.backend);
        OrthonormalBasis::new(vectors, &tol).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct StructureWire {
    dim: usize,
    delta: Matrix,
    basis: Option<OrthonormalBasis>,
}

impl Serialize for ClassicalStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StructureWire {
            dim: self.dim,
            delta: self.delta.clone(),
            basis: self.basis.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClassicalStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = StructureWire::deserialize(deserializer)?;
        let mut cs =
            ClassicalStructure::from_delta(wire.delta).map_err(|e| D::Error::custom(e.to_string()))?;
        if cs.dim != wire.dim {
            return Err(D::Error::custom("dim does not match delta shape"));
        }
        cs.basis = wire.basis;
        Ok(cs)
    }
}
