//! Complementarity of classical structures: trivial intersection of
//! copyable lattices, unbiasedness of morphisms relative to a
//! structure, mutual unbiasedness, and the complete-complementarity
//! predicate for families. The quantifier scope of the unbiasedness
//! definition is configurable because the literal reading degenerates;
//! the atom scope recovers the usual mutually-unbiased-bases notion.

use serde::{Deserialize, Serialize};

use crate::copyability::{self, Morphism, Structure};
use crate::error::{Error, Result};
use crate::fdhilb;
use crate::finrel::Relation;
use crate::lattice::{KSubElement, KSubLattice};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Scalar, Tolerance};

/// Which copyable kernels quantify in the unbiasedness comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnbiasedScope {
    /// Atoms of the copyable lattice; the default, matching the
    /// |⟨eᵢ,fⱼ⟩|² = 1/d notion for bases.
    Atoms,
    /// Every copyable kernel except 0.
    Nonzero,
    /// Every copyable kernel except 0 and 1.
    Nontrivial,
    /// Every copyable kernel, including 0 and 1. Degenerate: no
    /// nonzero morphism passes, since 0 and id give different
    /// projections.
    All,
}

impl std::str::FromStr for UnbiasedScope {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "atoms" => Ok(UnbiasedScope::Atoms),
            "nonzero" => Ok(UnbiasedScope::Nonzero),
            "nontrivial" => Ok(UnbiasedScope::Nontrivial),
            "all" => Ok(UnbiasedScope::All),
            other => Err(format!("unknown scope '{other}'")),
        }
    }
}

/// How "jointly epic" is evaluated for a family of structures. The
/// choice is mandatory: neither reading is privileged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointlyEpic {
    /// The rank-one copyable projections of all members (plus the
    /// identity) span the real vector space of self-adjoint operators.
    InfoComplete,
    /// The union of the members' copyable lattices generates, under
    /// meet/join/ortho closure, the same finite sublattice as the
    /// members' atoms do.
    LatticeGen,
}

impl std::str::FromStr for JointlyEpic {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "info-complete" => Ok(JointlyEpic::InfoComplete),
            "lattice-gen" => Ok(JointlyEpic::LatticeGen),
            other => Err(format!("unknown interpretation '{other}'")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplementarityReport {
    pub partially_complementary: bool,
    /// The shared copyable kernels, as a closed lattice.
    pub intersection: KSubLattice,
    /// Canonical keys of shared nontrivial kernels (empty iff
    /// partially complementary).
    pub witnesses: Vec<String>,
}

/// Two structures are partially complementary when no nontrivial
/// kernel is copyable along both. Computed as the intersection of the
/// two copyable lattices, cross-checked against per-element
/// re-evaluation of copyability along the other structure.
pub fn partially_complementary(
    d1: &Structure,
    d2: &Structure,
    tol: &Tolerance,
) -> Result<ComplementarityReport> {
    if d1.size() != d2.size() {
        return Err(Error::ModelMismatch);
    }
    let (lat1, _) = copyability::copyable_lattice(d1, &[], tol)?;
    let (lat2, _) = copyability::copyable_lattice(d2, &[], tol)?;
    let shared: Vec<KSubElement> = lat1
        .elements()
        .iter()
        .filter(|e| lat2.index_of(e).is_some())
        .cloned()
        .collect();
    // independent route: re-check copyability along d2 directly
    for e in lat1.elements() {
        let direct = copyability::is_copyable_kernel(e, d2, tol)?.copyable;
        let via_set = shared.iter().any(|s| s.equals(e, tol));
        if direct != via_set {
            return Err(Error::Unsupported(
                "intersection and re-evaluation disagree".into(),
            ));
        }
    }
    let witnesses: Vec<String> = shared
        .iter()
        .filter(|e| !e.is_zero(tol) && !e.is_one(tol))
        .map(|e| e.canonical_key())
        .collect();
    let intersection = KSubLattice::from_elements(shared, tol)?;
    Ok(ComplementarityReport {
        partially_complementary: witnesses.is_empty(),
        intersection,
        witnesses,
    })
}

/// Dagger-monic inclusion of a kernel element, as a morphism K → X.
fn element_inclusion(e: &KSubElement, tol: &Tolerance) -> Result<Morphism> {
    match e {
        KSubElement::Hilb(p) => Ok(Morphism::Hilb(fdhilb::inclusion_of(p, tol)?)),
        KSubElement::Rel(s) => {
            let elems = s.elements();
            let mut r = Relation::empty(elems.len(), s.size);
            for (i, &x) in elems.iter().enumerate() {
                r.insert(i, x);
            }
            Ok(Morphism::Rel(r))
        }
    }
}

fn scope_filter<'a>(lat: &'a KSubLattice, scope: UnbiasedScope, tol: &Tolerance) -> Vec<&'a KSubElement> {
    match scope {
        UnbiasedScope::Atoms => lat.atoms(),
        UnbiasedScope::Nonzero => lat.elements().iter().filter(|e| !e.is_zero(tol)).collect(),
        UnbiasedScope::Nontrivial => lat
            .elements()
            .iter()
            .filter(|e| !e.is_zero(tol) && !e.is_one(tol))
            .collect(),
        UnbiasedScope::All => lat.elements().iter().collect(),
    }
}

/// P(x†∘k) for a kernel inclusion k, an endomorphism of the domain of x.
fn probe_projection(x: &Morphism, k: &Morphism) -> Result<Morphism> {
    match (x, k) {
        (Morphism::Hilb(x), Morphism::Hilb(k)) => {
            let xk = x.dagger().compose(k)?;
            Ok(Morphism::Hilb(xk.compose(&xk.dagger())?))
        }
        (Morphism::Rel(x), Morphism::Rel(k)) => {
            let xk = x.dagger().compose(k)?;
            Ok(Morphism::Rel(xk.compose(&xk.dagger())?))
        }
        _ => Err(Error::ModelMismatch),
    }
}

fn morphism_eq(a: &Morphism, b: &Morphism, tol: &Tolerance) -> Result<bool> {
    match (a, b) {
        (Morphism::Hilb(a), Morphism::Hilb(b)) => a.equals(b, tol),
        (Morphism::Rel(a), Morphism::Rel(b)) => Ok(a == b),
        _ => Err(Error::ModelMismatch),
    }
}

/// A morphism x: U → X is unbiased relative to a structure when
/// P(x†∘k) is the same for every copyable kernel k in scope. Exact
/// structures whose kernel inclusions have no rational orthonormal
/// basis are retried on the approximate backend.
pub fn is_unbiased(
    x: &Morphism,
    d: &Structure,
    scope: UnbiasedScope,
    tol: &Tolerance,
) -> Result<bool> {
    match is_unbiased_inner(x, d, scope, tol) {
        Err(Error::NoRationalBasis(why)) => {
            let (Morphism::Hilb(xm), Structure::Hilb(cs)) = (x, d) else {
                return Err(Error::NoRationalBasis(why));
            };
            is_unbiased_inner(
                &Morphism::Hilb(xm.to_approx()),
                &Structure::Hilb(cs.to_approx()),
                scope,
                &Tolerance::approx(crate::scalar::DEFAULT_EPS),
            )
        }
        other => other,
    }
}

fn is_unbiased_inner(
    x: &Morphism,
    d: &Structure,
    scope: UnbiasedScope,
    tol: &Tolerance,
) -> Result<bool> {
    let (lat, _) = copyability::copyable_lattice(d, &[], tol)?;
    let kernels = scope_filter(&lat, scope, tol);
    let mut first: Option<Morphism> = None;
    for k in kernels {
        let incl = element_inclusion(k, tol)?;
        let p = probe_projection(x, &incl)?;
        match &first {
            None => first = Some(p),
            Some(f) => {
                if !morphism_eq(f, &p, tol)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Mutual unbiasedness: every nontrivial kernel copyable along one
/// structure, taken as a morphism K → X, is unbiased relative to the
/// other, in both directions.
pub fn mutually_unbiased(
    d1: &Structure,
    d2: &Structure,
    scope: UnbiasedScope,
    tol: &Tolerance,
) -> Result<bool> {
    for (a, b) in [(d1, d2), (d2, d1)] {
        let (lat, _) = copyability::copyable_lattice(a, &[], tol)?;
        for k in scope_filter(&lat, UnbiasedScope::Nontrivial, tol) {
            let incl = element_inclusion(k, tol)?;
            if !is_unbiased(&incl, b, scope, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct MuPcReport {
    pub mutually_unbiased: bool,
    pub partially_complementary: bool,
    /// Set when mutual unbiasedness holds but partial complementarity
    /// fails; must never happen.
    pub implication_violated: bool,
}

/// Audits the implication "mutually unbiased ⟹ partially
/// complementary" on a concrete pair.
pub fn mu_implies_pc_audit(
    d1: &Structure,
    d2: &Structure,
    scope: UnbiasedScope,
    tol: &Tolerance,
) -> Result<MuPcReport> {
    let mu = mutually_unbiased(d1, d2, scope, tol)?;
    let pc = partially_complementary(d1, d2, tol)?.partially_complementary;
    Ok(MuPcReport {
        mutually_unbiased: mu,
        partially_complementary: pc,
        implication_violated: mu && !pc,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CompleteComplementarityReport {
    pub interpretation: JointlyEpic,
    pub pairwise_partially_complementary: bool,
    /// Index pairs that failed the pairwise check.
    pub pc_failures: Vec<(usize, usize)>,
    pub jointly_epic: bool,
    pub completely_complementary: bool,
}

/// A family is completely complementary when it is pairwise partially
/// complementary and jointly epic under the chosen interpretation.
pub fn completely_complementary(
    ds: &[Structure],
    interpretation: JointlyEpic,
    tol: &Tolerance,
) -> Result<CompleteComplementarityReport> {
    if ds.is_empty() {
        return Err(Error::ShapeMismatch("empty structure family".into()));
    }
    let mut pc_failures = Vec::new();
    for i in 0..ds.len() {
        for j in (i + 1)..ds.len() {
            if !partially_complementary(&ds[i], &ds[j], tol)?.partially_complementary {
                pc_failures.push((i, j));
            }
        }
    }
    let jointly_epic = match interpretation {
        JointlyEpic::InfoComplete => info_complete(ds, tol)?,
        JointlyEpic::LatticeGen => lattice_gen(ds, tol)?,
    };
    Ok(CompleteComplementarityReport {
        interpretation,
        pairwise_partially_complementary: pc_failures.is_empty(),
        pc_failures: pc_failures.clone(),
        jointly_epic,
        completely_complementary: pc_failures.is_empty() && jointly_epic,
    })
}

fn reim(s: &Scalar) -> (f64, f64) {
    match s.to_approx() {
        Scalar::Approx { re, im } => (re, im),
        Scalar::Exact { .. } => unreachable!(),
    }
}

/// Do the rank-one copyable projections of all members, together with
/// the identity, span the d²-dimensional real space of self-adjoint
/// operators? Computed as a real rank over the 2d² coordinates.
fn info_complete(ds: &[Structure], tol: &Tolerance) -> Result<bool> {
    let dim = ds[0].size();
    let mut rows: Vec<Matrix> = Vec::new();
    let mut add_row = |m: &Matrix| {
        let flat: Vec<Scalar> = m
            .entries()
            .iter()
            .flat_map(|s| {
                let (re, im) = reim(s);
                [Scalar::approx(re, 0.0), Scalar::approx(im, 0.0)]
            })
            .collect();
        rows.push(Matrix::new(1, 2 * dim * dim, flat).expect("row shape"));
    };
    for d in ds {
        let Structure::Hilb(_) = d else {
            return Err(Error::Unsupported(
                "information completeness is a Hilbert-model notion".into(),
            ));
        };
        let (lat, _) = copyability::copyable_lattice(d, &[], tol)?;
        for a in lat.atoms() {
            let KSubElement::Hilb(p) = a else { unreachable!() };
            if p.rank(tol) == 1 {
                add_row(p.matrix());
            }
        }
    }
    add_row(&Matrix::identity(ds[0].hilb_backend()?, dim));
    let stacked = Matrix::vcat(&rows)?;
    Ok(stacked.rank(&Tolerance::approx(crate::scalar::DEFAULT_EPS)) == dim * dim)
}

/// Does the union of the members' copyable lattices close to the same
/// finite sublattice as the members' atoms do?
fn lattice_gen(ds: &[Structure], tol: &Tolerance) -> Result<bool> {
    let mut all: Vec<KSubElement> = Vec::new();
    let mut atoms: Vec<KSubElement> = Vec::new();
    for d in ds {
        let (lat, _) = copyability::copyable_lattice(d, &[], tol)?;
        all.extend(lat.elements().iter().cloned());
        atoms.extend(lat.atoms().into_iter().cloned());
    }
    if atoms.is_empty() {
        // zero-dimensional degenerate family
        return Ok(true);
    }
    let from_union = KSubLattice::closure(&all, tol, crate::lattice::DEFAULT_MAX_LATTICE)?;
    let from_atoms = KSubLattice::closure(&atoms, tol, crate::lattice::DEFAULT_MAX_LATTICE)?;
    Ok(from_union.len() == from_atoms.len()
        && from_union
            .elements()
            .iter()
            .all(|e| from_atoms.index_of(e).is_some()))
}

impl Structure {
    fn hilb_backend(&self) -> Result<Backend> {
        match self {
            Structure::Hilb(cs) => Ok(cs.backend()),
            Structure::Rel(_) => Err(Error::ModelMismatch),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdhilb::{ClassicalStructure, OrthonormalBasis};
    use crate::finrel::AbelianGroupoid;
    use crate::scalar::DEFAULT_EPS;

    fn comp(dim: usize) -> Structure {
        Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::computational(dim)).unwrap(),
        )
    }

    fn comp_approx(dim: usize) -> Structure {
        let Structure::Hilb(cs) = comp(dim) else { panic!() };
        Structure::Hilb(cs.to_approx())
    }

    fn hadamard() -> Structure {
        Structure::Hilb(ClassicalStructure::from_basis(&OrthonormalBasis::hadamard2()).unwrap())
    }

    fn circular() -> Structure {
        Structure::Hilb(ClassicalStructure::from_basis(&OrthonormalBasis::circular2()).unwrap())
    }

    fn rotation() -> Structure {
        Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::rotation_3_4_5()).unwrap(),
        )
    }

    fn atol() -> Tolerance {
        Tolerance::approx(DEFAULT_EPS)
    }

    #[test]
    fn same_structure_is_not_partially_complementary() {
        let tol = Tolerance::exact();
        let d = comp(2);
        let r = partially_complementary(&d, &d, &tol).unwrap();
        assert!(!r.partially_complementary);
        assert_eq!(r.witnesses.len(), 2);
        assert_eq!(r.intersection.len(), 4);
    }

    #[test]
    fn computational_vs_hadamard_is_partially_complementary() {
        let r = partially_complementary(&comp_approx(2), &hadamard(), &atol()).unwrap();
        assert!(r.partially_complementary);
        assert_eq!(r.intersection.len(), 2);
    }

    #[test]
    fn computational_vs_rotation_is_partially_complementary_exact() {
        let r = partially_complementary(&comp(2), &rotation(), &Tolerance::exact()).unwrap();
        assert!(r.partially_complementary);
    }

    #[test]
    fn partial_complementarity_is_symmetric() {
        let tol = Tolerance::exact();
        for (a, b) in [(comp(2), rotation()), (comp(2), comp(2))] {
            let ab = partially_complementary(&a, &b, &tol).unwrap();
            let ba = partially_complementary(&b, &a, &tol).unwrap();
            assert_eq!(ab.partially_complementary, ba.partially_complementary);
        }
    }

    #[test]
    fn rel_groups_on_same_carrier() {
        let tol = Tolerance::exact();
        let z4 = Structure::Rel(AbelianGroupoid::cyclic(4));
        let k4 = Structure::Rel(AbelianGroupoid::klein4());
        // both have only trivial copyables, so trivially complementary
        let r = partially_complementary(&z4, &k4, &tol).unwrap();
        assert!(r.partially_complementary);
    }

    #[test]
    fn scope_all_rejects_every_nonzero_morphism() {
        let x = Morphism::Hilb(Matrix::from_ints(2, 1, &[1, 0]));
        assert!(!is_unbiased(&x, &comp(2), UnbiasedScope::All, &Tolerance::exact()).unwrap());
    }

    #[test]
    fn atom_scope_unbiasedness_examples() {
        // uniform-superposition unit vector is unbiased for the
        // computational atoms
        let s = 1.0 / 2f64.sqrt();
        let x = Morphism::Hilb(Matrix::new(2, 1, vec![
            Scalar::approx(s, 0.0),
            Scalar::approx(s, 0.0),
        ]).unwrap());
        assert!(is_unbiased(&x, &comp_approx(2), UnbiasedScope::Atoms, &atol()).unwrap());

        let y = Morphism::Hilb(Matrix::new(2, 1, vec![
            Scalar::from_ratio(3, 5),
            Scalar::from_ratio(4, 5),
        ]).unwrap());
        assert!(!is_unbiased(&y, &comp(2), UnbiasedScope::Atoms, &Tolerance::exact()).unwrap());
    }

    #[test]
    fn mutual_unbiasedness_examples() {
        assert!(mutually_unbiased(&comp_approx(2), &hadamard(), UnbiasedScope::Atoms, &atol())
            .unwrap());
        assert!(!mutually_unbiased(&comp(2), &rotation(), UnbiasedScope::Atoms, &Tolerance::exact())
            .unwrap());
        assert!(!mutually_unbiased(&comp(2), &comp(2), UnbiasedScope::Atoms, &Tolerance::exact())
            .unwrap());
    }

    #[test]
    fn mu_pc_audit_cases() {
        let r = mu_implies_pc_audit(&comp_approx(2), &hadamard(), UnbiasedScope::Atoms, &atol())
            .unwrap();
        assert!(r.mutually_unbiased && r.partially_complementary && !r.implication_violated);

        let r =
            mu_implies_pc_audit(&comp(2), &rotation(), UnbiasedScope::Atoms, &Tolerance::exact())
                .unwrap();
        assert!(!r.mutually_unbiased && r.partially_complementary && !r.implication_violated);

        let r = mu_implies_pc_audit(&comp(2), &comp(2), UnbiasedScope::Atoms, &Tolerance::exact())
            .unwrap();
        assert!(!r.mutually_unbiased && !r.partially_complementary && !r.implication_violated);
    }

    #[test]
    fn copyable_kernels_are_never_unbiased_for_their_own_structure() {
        for dim in 2..=3 {
            let d = comp(dim);
            let tol = Tolerance::exact();
            let (lat, _) = copyability::copyable_lattice(&d, &[], &tol).unwrap();
            for k in scope_filter(&lat, UnbiasedScope::Nonzero, &tol) {
                let incl = element_inclusion(k, &tol).unwrap();
                assert!(!is_unbiased(&incl, &d, UnbiasedScope::Nonzero, &tol).unwrap());
            }
        }
    }

    #[test]
    fn three_qubit_mubs_are_completely_complementary() {
        let ds = vec![comp_approx(2), hadamard(), circular()];
        let r = completely_complementary(&ds, JointlyEpic::InfoComplete, &atol()).unwrap();
        assert!(r.pairwise_partially_complementary);
        assert!(r.jointly_epic);
        assert!(r.completely_complementary);
        let r = completely_complementary(&ds, JointlyEpic::LatticeGen, &atol()).unwrap();
        assert!(r.jointly_epic);
    }

    #[test]
    fn single_structure_is_not_informationally_complete() {
        let r = completely_complementary(&[comp_approx(2)], JointlyEpic::InfoComplete, &atol())
            .unwrap();
        assert!(r.pairwise_partially_complementary); // vacuous
        assert!(!r.jointly_epic);
    }

    #[test]
    fn dimension_one_is_trivially_complete() {
        let r = completely_complementary(&[comp_approx(1)], JointlyEpic::InfoComplete, &atol())
            .unwrap();
        assert!(r.completely_complementary);
    }

    #[test]
    fn scope_parsing() {
        assert_eq!("atoms".parse::<UnbiasedScope>().unwrap(), UnbiasedScope::Atoms);
        assert_eq!("all".parse::<UnbiasedScope>().unwrap(), UnbiasedScope::All);
        assert!("x".parse::<UnbiasedScope>().is_err());
        assert_eq!(
            "info-complete".parse::<JointlyEpic>().unwrap(),
            JointlyEpic::InfoComplete
        );
        assert_eq!(
            "lattice-gen".parse::<JointlyEpic>().unwrap(),
            JointlyEpic::LatticeGen
        );
    }
}
