//! Finite-dimensional matrix *-algebras given by spanning sets:
//! closure of generating sets, commutants, the correspondence between
//! Boolean lattices of projections and commutative subalgebras, and
//! acceptance checks for families of disjoint kernels and of cocones
//! of classical structures.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::complementarity;
use crate::copyability::{self, Morphism, Structure};
use crate::error::{Error, Result};
use crate::fdhilb::{self, ClassicalStructure, OrthonormalBasis, Projection};
use crate::lattice::{KSubElement, KSubLattice, DEFAULT_MAX_LATTICE};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Tolerance};

/// A unital *-closed subalgebra of d×d matrices, stored as a linearly
/// independent spanning set. The closure flags are certified at
/// construction, never assumed.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    dim: usize,
    span_basis: Vec<Matrix>,
    /// Commuting projections the algebra was generated from, when that
    /// provenance exists; required for projection-lattice extraction.
    projections: Option<Vec<Projection>>,
    contains_id: bool,
    star_closed: bool,
    mult_closed: bool,
}

fn in_span(basis: &[Matrix], m: &Matrix, tol: &Tolerance) -> Result<bool> {
    if basis.is_empty() {
        return Ok(m.is_zero(tol));
    }
    let cols: Vec<Matrix> = basis.iter().map(|b| b.vectorize()).collect();
    let stacked = Matrix::hcat(&cols)?;
    Ok(stacked.solve(&m.vectorize(), tol).is_some())
}

impl MatrixAlgebra {
    /// Wraps a spanning set after certifying the algebra laws; the
    /// spanning set is reduced to a linearly independent one.
    pub fn new(
        dim: usize,
        span: Vec<Matrix>,
        projections: Option<Vec<Projection>>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let backend = span
            .first()
            .map(|m| m.backend())
            .ok_or_else(|| Error::ShapeMismatch("empty spanning set".into()))?;
        let mut basis: Vec<Matrix> = Vec::new();
        for m in &span {
            if !(m.is_square() && m.rows() == dim) {
                return Err(Error::ShapeMismatch(format!("span member must be {dim}x{dim}")));
            }
            if !in_span(&basis, m, tol)? {
                basis.push(m.clone());
            }
        }
        let id = Matrix::identity(backend, dim);
        let contains_id = in_span(&basis, &id, tol)?;
        let mut star_closed = true;
        let mut mult_closed = true;
        for a in &basis {
            if !in_span(&basis, &a.dagger(), tol)? {
                star_closed = false;
            }
            for b in &basis {
                if !in_span(&basis, &a.compose(b)?, tol)? {
                    mult_closed = false;
                }
            }
        }
        if !(contains_id && star_closed && mult_closed) {
            return Err(Error::Unsupported(format!(
                "not an algebra: id {contains_id}, star {star_closed}, mult {mult_closed}"
            )));
        }
        Ok(MatrixAlgebra {
            dim,
            span_basis: basis,
            projections,
            contains_id,
            star_closed,
            mult_closed,
        })
    }

    pub fn scalars(backend: Backend, dim: usize) -> Self {
        MatrixAlgebra {
            dim,
            span_basis: vec![Matrix::identity(backend, dim)],
            projections: Some(Vec::new()),
            contains_id: true,
            star_closed: true,
            mult_closed: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn backend(&self) -> Backend {
        self.span_basis[0].backend()
    }

    pub fn span_dim(&self) -> usize {
        self.span_basis.len()
    }

    pub fn span_basis(&self) -> &[Matrix] {
        &self.span_basis
    }

    pub fn projections(&self) -> Option<&[Projection]> {
        self.projections.as_deref()
    }

    pub fn certified(&self) -> (bool, bool, bool) {
        (self.contains_id, self.star_closed, self.mult_closed)
    }

    pub fn contains(&self, m: &Matrix, tol: &Tolerance) -> Result<bool> {
        in_span(&self.span_basis, m, tol)
    }

    pub fn is_commutative(&self, tol: &Tolerance) -> Result<bool> {
        for a in &self.span_basis {
            for b in &self.span_basis {
                if !a.compose(b)?.equals(&b.compose(a)?, tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Same span: mutual inclusion of spanning sets.
    pub fn equals(&self, other: &MatrixAlgebra, tol: &Tolerance) -> Result<bool> {
        if self.dim != other.dim || self.span_dim() != other.span_dim() {
            return Ok(false);
        }
        for m in &self.span_basis {
            if !other.contains(m, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for MatrixAlgebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Provenance<'a> {
            projections: Vec<&'a Matrix>,
        }
        let mut st = serializer.serialize_struct("MatrixAlgebra", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("span", &self.span_basis)?;
        st.serialize_field(
            "provenance",
            &self.projections.as_ref().map(|ps| Provenance {
                projections: ps.iter().map(|p| p.matrix()).collect(),
            }),
        )?;
        st.end()
    }
}

/// Smallest unital *-closed multiplicatively closed span containing
/// the generators; fixpoint iteration on the span dimension, bounded
/// by d².
pub fn algebra_closure(
    backend: Backend,
    dim: usize,
    gens: &[Matrix],
    tol: &Tolerance,
) -> Result<MatrixAlgebra> {
    let mut basis: Vec<Matrix> = vec![Matrix::identity(backend, dim)];
    for g in gens {
        if !(g.is_square() && g.rows() == dim) {
            return Err(Error::ShapeMismatch(format!("generator must be {dim}x{dim}")));
        }
        if !in_span(&basis, g, tol)? {
            basis.push(g.clone());
        }
    }
    loop {
        let mut fresh: Vec<Matrix> = Vec::new();
        let consider = |m: Matrix, basis: &[Matrix], fresh: &mut Vec<Matrix>| -> Result<()> {
            let mut all: Vec<Matrix> = basis.to_vec();
            all.extend(fresh.iter().cloned());
            if !in_span(&all, &m, tol)? {
                fresh.push(m);
            }
            Ok(())
        };
        for i in 0..basis.len() {
            consider(basis[i].dagger(), &basis, &mut fresh)?;
            for j in 0..basis.len() {
                consider(basis[i].compose(&basis[j])?, &basis, &mut fresh)?;
            }
        }
        if fresh.is_empty() {
            break;
        }
        basis.extend(fresh);
        if basis.len() > dim * dim {
            return Err(Error::Unsupported("span exceeded full matrix algebra".into()));
        }
    }
    MatrixAlgebra::new(dim, basis, None, tol)
}

fn transpose(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.backend(), m.cols(), m.rows(), |i, j| m.get(j, i).clone())
}

/// All matrices commuting with every span element, computed as the
/// null space of the stacked commutator maps b⊗id − id⊗bᵀ acting on
/// vectorized matrices.
pub fn commutant(a: &MatrixAlgebra, tol: &Tolerance) -> Result<MatrixAlgebra> {
    let d = a.dim;
    let backend = a.backend();
    let id = Matrix::identity(backend, d);
    let mut blocks: Vec<Matrix> = Vec::new();
    for b in &a.span_basis {
        blocks.push(b.tensor(&id)?.sub(&id.tensor(&transpose(b))?)?);
    }
    let constraint = Matrix::vcat(&blocks)?;
    let null = constraint.null_space_basis(tol);
    let mut span: Vec<Matrix> = Vec::new();
    for c in 0..null.cols() {
        let col = null.column_at(c);
        span.push(Matrix::from_fn(backend, d, d, |i, j| {
            col.get(i * d + j, 0).clone()
        }));
    }
    if span.is_empty() {
        span.push(Matrix::identity(backend, d));
    }
    MatrixAlgebra::new(d, span, None, tol)
}

/// The commutative subalgebra generated by a Boolean lattice of
/// projections; keeps the lattice elements as provenance.
pub fn algebra_from_boolean(b: &KSubLattice, tol: &Tolerance) -> Result<MatrixAlgebra> {
    let (boolean, _) = b.is_boolean()?;
    if !boolean {
        return Err(Error::Unsupported("lattice is not Boolean".into()));
    }
    let mut projections = Vec::new();
    for e in b.elements() {
        let KSubElement::Hilb(p) = e else {
            return Err(Error::ModelMismatch);
        };
        projections.push(p.clone());
    }
    let gens: Vec<Matrix> = projections.iter().map(|p| p.matrix().clone()).collect();
    let dim = projections[0].dim();
    let closed = algebra_closure(projections[0].backend(), dim, &gens, tol)?;
    if !closed.is_commutative(tol)? {
        return Err(Error::Unsupported("generated algebra not commutative".into()));
    }
    Ok(MatrixAlgebra {
        projections: Some(projections),
        ..closed
    })
}

/// The Boolean lattice of projections of a commutative algebra with
/// projection provenance; membership of every lattice element in the
/// algebra is certified by a linear solve.
pub fn boolean_from_algebra(c: &MatrixAlgebra, tol: &Tolerance) -> Result<KSubLattice> {
    if !c.is_commutative(tol)? {
        return Err(Error::Unsupported("algebra is not commutative".into()));
    }
    let Some(projections) = c.projections() else {
        return Err(Error::Unsupported(
            "no projection provenance; spectral extraction of minimal idempotents is not supported".into(),
        ));
    };
    let mut gens: Vec<KSubElement> = projections
        .iter()
        .map(|p| KSubElement::Hilb(p.clone()))
        .collect();
    if gens.is_empty() {
        gens.push(KSubElement::Hilb(Projection::zero(c.backend(), c.dim)));
    }
    let lat = KSubLattice::closure(&gens, tol, DEFAULT_MAX_LATTICE)?;
    for e in lat.elements() {
        let KSubElement::Hilb(p) = e else { unreachable!() };
        if !c.contains(p.matrix(), tol)? {
            return Err(Error::Unsupported(
                "lattice closure escaped the algebra".into(),
            ));
        }
    }
    let (boolean, _) = lat.is_boolean()?;
    if !boolean {
        return Err(Error::Unsupported("projection lattice is not Boolean".into()));
    }
    Ok(lat)
}

/// B ↦ Proj(B″) = B, starting from a Boolean lattice.
pub fn round_trip_boolean(b: &KSubLattice, tol: &Tolerance) -> Result<bool> {
    let alg = algebra_from_boolean(b, tol)?;
    let back = boolean_from_algebra(&alg, tol)?;
    Ok(back.len() == b.len() && b.elements().iter().all(|e| back.index_of(e).is_some()))
}

/// C ↦ Proj(C)″ = C, starting from a commutative algebra with
/// projection provenance.
pub fn round_trip_algebra(c: &MatrixAlgebra, tol: &Tolerance) -> Result<bool> {
    let b = boolean_from_algebra(c, tol)?;
    let back = algebra_from_boolean(&b, tol)?;
    back.equals(c, tol)
}

/// Partial complementarity of subalgebras: the span intersection is
/// exactly the scalar multiples of the identity. The intersection
/// dimension is k₁ + k₂ − rank of the joined span.
pub fn pc_algebras(c1: &MatrixAlgebra, c2: &MatrixAlgebra, tol: &Tolerance) -> Result<bool> {
    if c1.dim != c2.dim {
        return Err(Error::ShapeMismatch("ambient dimensions differ".into()));
    }
    let cols: Vec<Matrix> = c1
        .span_basis
        .iter()
        .chain(c2.span_basis.iter())
        .map(|m| m.vectorize())
        .collect();
    let joined_rank = Matrix::hcat(&cols)?.rank(tol);
    Ok(c1.span_dim() + c2.span_dim() - joined_rank == 1)
}

/// Outcome of checking a family of kernels for a common classical
/// structure along which all members are copyable.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub all_nonzero: bool,
    pub pairwise_meets_zero: bool,
    /// Pairwise products vanish; this is what the construction of a
    /// refining basis actually needs, and it follows from meets-zero
    /// exactly when the family sits inside a Boolean sublattice.
    pub pairwise_orthogonal: bool,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
    #[serde(skip)]
    pub structure: Option<ClassicalStructure>,
    #[serde(skip)]
    pub algebra: Option<MatrixAlgebra>,
}

fn inclusion_any(p: &Projection, tol: &Tolerance) -> Result<(Matrix, bool)> {
    match fdhilb::inclusion_of(p, tol) {
        Ok(m) => Ok((m, false)),
        Err(Error::NoRationalBasis(_)) => {
            let approx = p.to_approx();
            let atol = Tolerance::approx(crate::scalar::DEFAULT_EPS);
            Ok((fdhilb::inclusion_of(&approx, &atol)?, true))
        }
        Err(e) => Err(e),
    }
}

/// Checks that a family of nonzero kernels with pairwise zero meets
/// admits a classical structure along which every member is copyable,
/// by constructing an orthonormal basis refining the family. Families
/// whose meets vanish but whose products do not are rejected with the
/// offending pair.
pub fn fdcaker_family_check(family: &[Projection], tol: &Tolerance) -> Result<FamilyReport> {
    if family.is_empty() {
        return Err(Error::ShapeMismatch("empty family".into()));
    }
    let dim = family[0].dim();
    let backend = family[0].backend();
    let mut report = FamilyReport {
        all_nonzero: true,
        pairwise_meets_zero: true,
        pairwise_orthogonal: true,
        accepted: false,
        witness: None,
        structure: None,
        algebra: None,
    };
    for p in family {
        if p.matrix().is_zero(tol) {
            report.all_nonzero = false;
        }
    }
    'pairs: for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let a = KSubElement::Hilb(family[i].clone());
            let b = KSubElement::Hilb(family[j].clone());
            let m = a.meet(&b, tol)?;
            if !m.is_zero(tol) {
                report.pairwise_meets_zero = false;
                report.witness = Some((i, j));
                break 'pairs;
            }
            let prod = family[i].matrix().compose(family[j].matrix())?;
            if !prod.is_zero(tol) {
                report.pairwise_orthogonal = false;
                report.witness = Some((i, j));
                break 'pairs;
            }
        }
    }
    if !(report.all_nonzero && report.pairwise_meets_zero && report.pairwise_orthogonal) {
        return Ok(report);
    }
    // refine: an orthonormal basis of each range, completed on the
    // joint orthocomplement
    let mut cols: Vec<Matrix> = Vec::new();
    let mut fell_back = false;
    for p in family {
        let (incl, fb) = inclusion_any(p, tol)?;
        fell_back |= fb;
        cols.push(incl);
    }
    let mut rest = Matrix::identity(backend, dim);
    for p in family {
        rest = rest.sub(p.matrix())?;
    }
    let complement = Projection::new(rest, tol)?;
    if complement.rank(tol) > 0 {
        let (incl, fb) = inclusion_any(&complement, tol)?;
        fell_back |= fb;
        cols.push(incl);
    }
    let (cols, work_tol) = if fell_back {
        (
            cols.iter().map(|c| c.to_approx()).collect::<Vec<_>>(),
            Tolerance::approx(crate::scalar::DEFAULT_EPS),
        )
    } else {
        (cols, tol.clone())
    };
    let unitary = Matrix::hcat(&cols)?;
    let vectors: Vec<Matrix> = (0..dim).map(|c| unitary.column_at(c)).collect();
    let basis = OrthonormalBasis::new(vectors, &work_tol)?;
    let cs = ClassicalStructure::from_basis(&basis)?;
    let d = Structure::Hilb(cs.clone());
    for p in family {
        let member = if fell_back {
            KSubElement::Hilb(p.to_approx())
        } else {
            KSubElement::Hilb(p.clone())
        };
        if !copyability::is_copyable_kernel(&member, &d, &work_tol)?.copyable {
            return Err(Error::NotCopyable);
        }
    }
    let gens: Vec<Matrix> = family.iter().map(|p| p.matrix().clone()).collect();
    let gens = if fell_back {
        gens.iter().map(|g| g.to_approx()).collect()
    } else {
        gens
    };
    let algebra = algebra_closure(basis.backend(), dim, &gens, &work_tol)?;
    report.accepted = true;
    report.structure = Some(cs);
    report.algebra = Some(algebra);
    Ok(report)
}

/// Outcome of checking a family of structures with embeddings into a
/// common ambient structure.
#[derive(Clone, Debug, Serialize)]
pub struct CoconeReport {
    /// Indices of embeddings that fail the structure-morphism
    /// equations.
    pub bad_embeddings: Vec<usize>,
    /// Image pairs sharing a nonzero copyable kernel.
    pub pc_failures: Vec<(usize, usize)>,
    pub accepted: bool,
}

/// Each member must embed by a structure morphism, and the members'
/// copyable kernels, transported along their embeddings, must be
/// pairwise disjoint except for zero.
pub fn fdca_cocone_check(
    members: &[(Structure, Morphism)],
    ambient: &Structure,
    tol: &Tolerance,
) -> Result<CoconeReport> {
    let mut bad = Vec::new();
    for (i, (sub, emb)) in members.iter().enumerate() {
        if !copyability::check_cs_morphism(emb, sub, ambient, tol)?.holds() {
            bad.push(i);
        }
    }
    if !bad.is_empty() {
        return Ok(CoconeReport {
            bad_embeddings: bad,
            pc_failures: Vec::new(),
            accepted: false,
        });
    }
    // transport each member's copyable kernels into the ambient object
    let mut transported: Vec<Vec<KSubElement>> = Vec::new();
    for (sub, emb) in members {
        let (lat, _) = copyability::copyable_lattice(sub, &[], tol)?;
        let mut images = Vec::new();
        for e in lat.elements() {
            let img = match (e, emb) {
                (KSubElement::Hilb(p), Morphism::Hilb(f)) => {
                    let m = f.compose(p.matrix())?.compose(&f.dagger())?;
                    KSubElement::Hilb(Projection::new(m, tol)?)
                }
                (KSubElement::Rel(s), Morphism::Rel(f)) => {
                    let pk = crate::finrel::Relation::partial_identity(s);
                    let m = f.compose(&pk)?.compose(&f.dagger())?;
                    KSubElement::Rel(m.dagger().kernel().complement())
                }
                _ => return Err(Error::ModelMismatch),
            };
            if !img.is_zero(tol) {
                images.push(img);
            }
        }
        transported.push(images);
    }
    let mut pc_failures = Vec::new();
    for i in 0..transported.len() {
        for j in (i + 1)..transported.len() {
            let shared = transported[i]
                .iter()
                .any(|a| transported[j].iter().any(|b| a.equals(b, tol)));
            if shared {
                pc_failures.push((i, j));
            }
        }
    }
    Ok(CoconeReport {
        bad_embeddings: Vec::new(),
        accepted: pc_failures.is_empty(),
        pc_failures,
    })
}

/// Bridge consistency: partial complementarity of two structures
/// agrees with partial complementarity of their induced commutative
/// subalgebras.
pub fn bridge_check(d1: &Structure, d2: &Structure, tol: &Tolerance) -> Result<(bool, bool)> {
    let pc_structures =
        complementarity::partially_complementary(d1, d2, tol)?.partially_complementary;
    let a1 = induced_algebra(d1, tol)?;
    let a2 = induced_algebra(d2, tol)?;
    let pc_subalgebras = pc_algebras(&a1, &a2, tol)?;
    Ok((pc_structures, pc_subalgebras))
}

/// The commutative subalgebra generated by a structure's copyable
/// kernels.
pub fn induced_algebra(d: &Structure, tol: &Tolerance) -> Result<MatrixAlgebra> {
    let (lat, _) = copyability::copyable_lattice(d, &[], tol)?;
    algebra_from_boolean(&lat, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Scalar, DEFAULT_EPS};

    fn tol() -> Tolerance {
        Tolerance::exact()
    }

    fn diag(entries: &[i64]) -> Matrix {
        let d = entries.len();
        let mut m = Matrix::zero(Backend::Exact, d, d);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, Scalar::from_int(e));
        }
        m
    }

    fn comp(dim: usize) -> Structure {
        Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::computational(dim)).unwrap(),
        )
    }

    #[test]
    fn closure_examples() {
        let a = algebra_closure(Backend::Exact, 2, &[], &tol()).unwrap();
        assert_eq!(a.span_dim(), 1);
        let a = algebra_closure(Backend::Exact, 2, &[diag(&[1, 0])], &tol()).unwrap();
        assert_eq!(a.span_dim(), 2);
        let nilpotent = Matrix::from_ints(2, 2, &[0, 1, 0, 0]);
        let a = algebra_closure(Backend::Exact, 2, &[nilpotent], &tol()).unwrap();
        assert_eq!(a.span_dim(), 4);
    }

    #[test]
    fn certification_rejects_non_algebras() {
        let nilpotent = Matrix::from_ints(2, 2, &[0, 1, 0, 0]);
        let id = Matrix::identity(Backend::Exact, 2);
        assert!(MatrixAlgebra::new(2, vec![id, nilpotent], None, &tol()).is_err());
    }

    #[test]
    fn commutant_examples() {
        let scalars = MatrixAlgebra::scalars(Backend::Exact, 2);
        let full = commutant(&scalars, &tol()).unwrap();
        assert_eq!(full.span_dim(), 4);
        let back = commutant(&full, &tol()).unwrap();
        assert!(back.equals(&scalars, &tol()).unwrap());
        let diag_alg = algebra_closure(Backend::Exact, 2, &[diag(&[1, 0])], &tol()).unwrap();
        let c = commutant(&diag_alg, &tol()).unwrap();
        assert!(c.equals(&diag_alg, &tol()).unwrap());
    }

    #[test]
    fn double_commutant_fixes_fixtures() {
        let fixtures = vec![
            MatrixAlgebra::scalars(Backend::Exact, 3),
            algebra_closure(Backend::Exact, 2, &[diag(&[1, 0])], &tol()).unwrap(),
            algebra_closure(Backend::Exact, 3, &[diag(&[1, 0, 0]), diag(&[0, 1, 0])], &tol())
                .unwrap(),
            algebra_closure(Backend::Exact, 2, &[Matrix::from_ints(2, 2, &[0, 1, 0, 0])], &tol())
                .unwrap(),
        ];
        for a in fixtures {
            let cc = commutant(&commutant(&a, &tol()).unwrap(), &tol()).unwrap();
            assert!(cc.equals(&a, &tol()).unwrap());
        }
    }

    #[test]
    fn commutativity_examples() {
        assert!(MatrixAlgebra::scalars(Backend::Exact, 2).is_commutative(&tol()).unwrap());
        let diag_alg = algebra_closure(Backend::Exact, 2, &[diag(&[1, 0])], &tol()).unwrap();
        assert!(diag_alg.is_commutative(&tol()).unwrap());
        let full = commutant(&MatrixAlgebra::scalars(Backend::Exact, 2), &tol()).unwrap();
        assert!(!full.is_commutative(&tol()).unwrap());
    }

    #[test]
    fn boolean_algebra_round_trips() {
        for dim in 2..=4 {
            let (lat, _) = copyability::copyable_lattice(&comp(dim), &[], &tol()).unwrap();
            let alg = algebra_from_boolean(&lat, &tol()).unwrap();
            assert_eq!(alg.span_dim(), dim);
            assert!(round_trip_boolean(&lat, &tol()).unwrap());
            assert!(round_trip_algebra(&alg, &tol()).unwrap());
            let back = boolean_from_algebra(&alg, &tol()).unwrap();
            assert_eq!(back.len(), 1 << dim);
        }
    }

    #[test]
    fn trivial_lattice_gives_scalars() {
        let elems = vec![
            KSubElement::Hilb(Projection::zero(Backend::Exact, 2)),
            KSubElement::Hilb(Projection::identity(Backend::Exact, 2)),
        ];
        let lat = KSubLattice::from_elements(elems, &tol()).unwrap();
        let alg = algebra_from_boolean(&lat, &tol()).unwrap();
        assert_eq!(alg.span_dim(), 1);
        assert_eq!(boolean_from_algebra(&alg, &tol()).unwrap().len(), 2);
    }

    #[test]
    fn pc_algebra_examples() {
        let diag_alg = algebra_closure(Backend::Exact, 2, &[diag(&[1, 0])], &tol()).unwrap();
        assert!(!pc_algebras(&diag_alg, &diag_alg, &tol()).unwrap());
        let scalars = MatrixAlgebra::scalars(Backend::Exact, 2);
        assert!(pc_algebras(&scalars, &diag_alg, &tol()).unwrap());
        // rotation-conjugated diagonal algebra meets the diagonal one
        // only in scalars
        let u = OrthonormalBasis::rotation_3_4_5().unitary();
        let p = u.column_at(0).compose(&u.column_at(0).dagger()).unwrap();
        let rot_alg = algebra_closure(Backend::Exact, 2, &[p], &tol()).unwrap();
        assert!(pc_algebras(&diag_alg, &rot_alg, &tol()).unwrap());
    }

    #[test]
    fn bridge_agrees_with_structure_level() {
        let rot = Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::rotation_3_4_5()).unwrap(),
        );
        let (pc_s, pc_a) = bridge_check(&comp(2), &rot, &tol()).unwrap();
        assert!(pc_s && pc_a);
        let (pc_s, pc_a) = bridge_check(&comp(2), &comp(2), &tol()).unwrap();
        assert!(!pc_s && !pc_a);
    }

    #[test]
    fn family_check_accepts_coordinate_projections() {
        let family = vec![
            Projection::new(diag(&[1, 0]), &tol()).unwrap(),
            Projection::new(diag(&[0, 1]), &tol()).unwrap(),
        ];
        let r = fdcaker_family_check(&family, &tol()).unwrap();
        assert!(r.accepted);
        let cs = r.structure.unwrap();
        assert!(cs
            .delta()
            .equals(&fdhilb::copier(Backend::Exact, 2), &tol())
            .unwrap());
        assert_eq!(r.algebra.unwrap().span_dim(), 2);
    }

    #[test]
    fn family_check_rejects_skew_pair() {
        let v = Matrix::column(vec![Scalar::from_ratio(1, 1), Scalar::from_ratio(1, 1)]).unwrap();
        let skew = Projection::onto_line(&v, &tol()).unwrap();
        let family = vec![Projection::new(diag(&[1, 0]), &tol()).unwrap(), skew];
        let r = fdcaker_family_check(&family, &tol()).unwrap();
        assert!(!r.accepted);
        assert!(r.pairwise_meets_zero);
        assert!(!r.pairwise_orthogonal);
        assert_eq!(r.witness, Some((0, 1)));
    }

    #[test]
    fn family_check_identity_alone() {
        let family = vec![Projection::identity(Backend::Exact, 2)];
        let r = fdcaker_family_check(&family, &tol()).unwrap();
        assert!(r.accepted);
        assert_eq!(r.algebra.unwrap().span_dim(), 1);
    }

    #[test]
    fn family_check_irrational_range_falls_back_to_approx() {
        let v = Matrix::column(vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 2)]).unwrap();
        // projection onto span(1,1): rational entries, no rational
        // orthonormal basis of the range
        let p = Projection::onto_line(&v, &tol()).unwrap();
        let r = fdcaker_family_check(&[p], &tol()).unwrap();
        assert!(r.accepted);
        assert_eq!(r.structure.unwrap().backend(), Backend::Approx);
    }

    #[test]
    fn cocone_examples() {
        let t = tol();
        let d3 = comp(3);
        // identity embedding of the ambient structure
        let Structure::Hilb(cs3) = d3.clone() else { panic!() };
        let idm = Morphism::Hilb(Matrix::identity(Backend::Exact, 3));
        let r = fdca_cocone_check(&[(Structure::Hilb(cs3), idm)], &d3, &t).unwrap();
        assert!(r.accepted);

        // coordinate embeddings of C² and C¹ with disjoint images
        let f1 = Morphism::Hilb(Matrix::from_ints(3, 2, &[1, 0, 0, 1, 0, 0]));
        let f2 = Morphism::Hilb(Matrix::from_ints(3, 1, &[0, 0, 1]));
        let r = fdca_cocone_check(&[(comp(2), f1), (comp(1), f2)], &d3, &t).unwrap();
        assert!(r.accepted);

        // overlapping images share transported copyables
        let g1 = Morphism::Hilb(Matrix::from_ints(3, 2, &[1, 0, 0, 1, 0, 0]));
        let g2 = Morphism::Hilb(Matrix::from_ints(3, 1, &[1, 0, 0]));
        let r = fdca_cocone_check(&[(comp(2), g1), (comp(1), g2)], &d3, &t).unwrap();
        assert!(!r.accepted);
        assert_eq!(r.pc_failures, vec![(0, 1)]);

        // a basis change is not a structure morphism
        let atol = Tolerance::approx(DEFAULT_EPS);
        let Structure::Hilb(c2) = comp(2) else { panic!() };
        let da = Structure::Hilb(c2.to_approx());
        let had = Morphism::Hilb(OrthonormalBasis::hadamard2().unitary());
        let r = fdca_cocone_check(&[(da.clone(), had)], &da, &atol).unwrap();
        assert!(!r.accepted);
        assert_eq!(r.bad_embeddings, vec![0]);
    }

    #[test]
    fn algebra_json_shape() {
        let a = algebra_closure(Backend::Exact, 2, &[diag(&[1, 0])], &tol()).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["span"].as_array().unwrap().len(), 2);
        assert!(v.get("provenance").is_some());
    }
}
