//! Copyability along a classical structure, in both models: the
//! defining equation δ∘p = (p⊗p)∘δ for endomorphisms and kernels,
//! restriction of δ to a copyable subobject, extraction of the Boolean
//! lattice of copyable kernels, and morphisms/kernels of classical
//! structures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdhilb::{self, ClassicalStructure, Projection};
use crate::finrel::{AbelianGroupoid, Relation};
use crate::lattice::{KSubElement, KSubLattice};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Tolerance};

/// Upper bound on the dimension for candidate-family enumeration
/// (2^dim subset sums).
pub const MAX_ENUM_DIM: usize = 12;

/// A classical structure in either model.
#[derive(Clone, Debug)]
pub enum Structure {
    Hilb(ClassicalStructure),
    Rel(AbelianGroupoid),
}

impl Structure {
    pub fn size(&self) -> usize {
        match self {
            Structure::Hilb(d) => d.dim(),
            Structure::Rel(g) => g.carrier(),
        }
    }
}

/// An endomorphism of the structure's underlying object.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Morphism {
    Hilb(Matrix),
    Rel(Relation),
}

/// Both evaluated sides of the defining equation are kept for audit;
/// the deviation field is populated on the approximate backend.
#[derive(Clone, Debug, Serialize)]
pub struct CopyabilityVerdict {
    pub copyable: bool,
    pub lhs: Morphism,
    pub rhs: Morphism,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

pub fn is_copyable_endo(
    p: &Morphism,
    d: &Structure,
    tol: &Tolerance,
) -> Result<CopyabilityVerdict> {
    match (p, d) {
        (Morphism::Hilb(p), Structure::Hilb(d)) => {
            if !(p.is_square() && p.rows() == d.dim()) {
                return Err(Error::ShapeMismatch(format!(
                    "endomorphism must be {0}x{0}",
                    d.dim()
                )));
            }
            let lhs = d.delta().compose(p)?;
            let rhs = p.tensor(p)?.compose(d.delta())?;
            let copyable = lhs.equals(&rhs, tol)?;
            let max_deviation = match p.backend() {
                Backend::Exact => None,
                Backend::Approx => Some(lhs.max_abs_diff(&rhs)),
            };
            Ok(CopyabilityVerdict {
                copyable,
                lhs: Morphism::Hilb(lhs),
                rhs: Morphism::Hilb(rhs),
                max_deviation,
            })
        }
        (Morphism::Rel(p), Structure::Rel(g)) => {
            if p.src() != g.carrier() || p.dst() != g.carrier() {
                return Err(Error::ShapeMismatch(format!(
                    "endorelation must live on {} elements",
                    g.carrier()
                )));
            }
            let delta = g.delta();
            let lhs = delta.compose(p)?;
            let rhs = p.tensor(p).compose(&delta)?;
            Ok(CopyabilityVerdict {
                copyable: lhs == rhs,
                lhs: Morphism::Rel(lhs),
                rhs: Morphism::Rel(rhs),
                max_deviation: None,
            })
        }
        _ => Err(Error::ModelMismatch),
    }
}

/// A kernel is copyable when its associated projection k∘k† is.
pub fn is_copyable_kernel(
    k: &KSubElement,
    d: &Structure,
    tol: &Tolerance,
) -> Result<CopyabilityVerdict> {
    let p = match k {
        KSubElement::Hilb(p) => Morphism::Hilb(p.matrix().clone()),
        KSubElement::Rel(s) => Morphism::Rel(Relation::partial_identity(s)),
    };
    is_copyable_endo(&p, d, tol)
}

/// Restriction of δ to a copyable subobject: δ_k = (k†⊗k†)∘δ∘k for a
/// dagger-monic inclusion k. Verifies copyability, the commuting
/// square (k⊗k)∘δ_k = δ∘k, and the classical-structure axioms of the
/// result.
pub fn restrict_delta(k: &KSubElement, d: &Structure, tol: &Tolerance) -> Result<Structure> {
    if !is_copyable_kernel(k, d, tol)?.copyable {
        return Err(Error::NotCopyable);
    }
    match (k, d) {
        (KSubElement::Hilb(p), Structure::Hilb(d)) => {
            let incl = fdhilb::inclusion_of(p, tol)?;
            let restricted = incl
                .dagger()
                .tensor(&incl.dagger())?
                .compose(d.delta())?
                .compose(&incl)?;
            // fill-in square: including back recovers δ on the range
            let via_sub = incl.tensor(&incl)?.compose(&restricted)?;
            let direct = d.delta().compose(&incl)?;
            if !via_sub.equals(&direct, tol)? {
                return Err(Error::NotCopyable);
            }
            let sub = ClassicalStructure::from_delta(restricted)?;
            let report = sub.verify(tol)?;
            if !report.passes() {
                return Err(Error::HStarViolated);
            }
            Ok(Structure::Hilb(sub))
        }
        (KSubElement::Rel(s), Structure::Rel(g)) => {
            let elems = s.elements();
            let m = elems.len();
            let mut table = vec![None; m * m];
            for (i, &x) in elems.iter().enumerate() {
                for (j, &y) in elems.iter().enumerate() {
                    if let Some(z) = g.op(x, y) {
                        // copyability puts z back inside the subset
                        let zi = elems.iter().position(|&e| e == z).ok_or(Error::NotCopyable)?;
                        table[i * m + j] = Some(zi);
                    }
                }
            }
            Ok(Structure::Rel(AbelianGroupoid::from_table(m, table)?))
        }
        _ => Err(Error::ModelMismatch),
    }
}

/// Certification attached to a copyable lattice: how it was obtained
/// and what was refuted.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeCertification {
    /// Elements certified copyable by direct evaluation.
    pub certified_members: usize,
    /// User probes outside the family certified not copyable.
    pub refuted_probes: usize,
    /// Probes that turned out copyable yet are not in the candidate
    /// family; must stay empty for a sound enumeration.
    pub probe_anomalies: Vec<String>,
    /// True when the family was an exhaustive scan (Rel) rather than a
    /// certified candidate family plus refuted probes (Hilb).
    pub exhaustive: bool,
}

/// The lattice of copyable kernels. In Rel this is an exhaustive scan
/// over subsets; in Hilb the candidate family consists of the 2^dim
/// subset-sum projections of the defining basis, each certified, and
/// any probes outside the family are certified non-copyable.
pub fn copyable_lattice(
    d: &Structure,
    probes: &[KSubElement],
    tol: &Tolerance,
) -> Result<(KSubLattice, LatticeCertification)> {
    match d {
        Structure::Hilb(cs) => {
            let dim = cs.dim();
            if dim > MAX_ENUM_DIM {
                return Err(Error::Unsupported(format!(
                    "candidate enumeration bounded at dim {MAX_ENUM_DIM}"
                )));
            }
            let basis = cs.basis().ok_or(Error::MissingProvenance)?;
            let rank1: Vec<Matrix> = (0..dim)
                .map(|i| {
                    let v = basis.unitary().column_at(i);
                    v.compose(&v.dagger())
                })
                .collect::<Result<Vec<_>>>()?;
            let mut elements = Vec::with_capacity(1 << dim);
            for mask in 0u64..(1 << dim) {
                let mut sum = Matrix::zero(cs.backend(), dim, dim);
                for (i, r) in rank1.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        sum = sum.add(r)?;
                    }
                }
                elements.push(KSubElement::Hilb(Projection::new(sum, tol)?));
            }
            let verdicts = crate::par::map_slice(&elements, |e| {
                is_copyable_kernel(e, d, tol).map(|v| v.copyable)
            });
            for v in verdicts {
                if !v? {
                    return Err(Error::NotCopyable);
                }
            }
            let certified = elements.len();
            let lat = KSubLattice::from_elements(elements, tol)?;
            let mut refuted = 0usize;
            let mut anomalies = Vec::new();
            for probe in probes {
                if lat.index_of(probe).is_some() {
                    continue;
                }
                if is_copyable_kernel(probe, d, tol)?.copyable {
                    anomalies.push(probe.canonical_key());
                } else {
                    refuted += 1;
                }
            }
            Ok((
                lat,
                LatticeCertification {
                    certified_members: certified,
                    refuted_probes: refuted,
                    probe_anomalies: anomalies,
                    exhaustive: false,
                },
            ))
        }
        Structure::Rel(g) => {
            let subsets = g.copyable_subsets();
            let certified = subsets.len();
            let elements: Vec<KSubElement> = subsets.into_iter().map(KSubElement::Rel).collect();
            let lat = KSubLattice::from_elements(elements, tol)?;
            Ok((
                lat,
                LatticeCertification {
                    certified_members: certified,
                    refuted_probes: 0,
                    probe_anomalies: Vec::new(),
                    exhaustive: true,
                },
            ))
        }
    }
}

/// Outcome of the two structure-morphism equations: the comonoid half
/// δ_Y∘f = (f⊗f)∘δ_X and the monoid half δ_Y†∘(f⊗f) = f∘δ_X†.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CSMorphismCheck {
    pub comonoid: bool,
    pub monoid: bool,
}

impl CSMorphismCheck {
    pub fn holds(&self) -> bool {
        self.comonoid && self.monoid
    }
}

pub fn check_cs_morphism(
    f: &Morphism,
    dx: &Structure,
    dy: &Structure,
    tol: &Tolerance,
) -> Result<CSMorphismCheck> {
    match (f, dx, dy) {
        (Morphism::Hilb(f), Structure::Hilb(dx), Structure::Hilb(dy)) => {
            if f.cols() != dx.dim() || f.rows() != dy.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "morphism must be {}x{}",
                    dy.dim(),
                    dx.dim()
                )));
            }
            let ff = f.tensor(f)?;
            let comonoid = dy.delta().compose(f)?.equals(&ff.compose(dx.delta())?, tol)?;
            let monoid = dy
                .delta()
                .dagger()
                .compose(&ff)?
                .equals(&f.compose(&dx.delta().dagger())?, tol)?;
            Ok(CSMorphismCheck { comonoid, monoid })
        }
        (Morphism::Rel(f), Structure::Rel(gx), Structure::Rel(gy)) => {
            if f.src() != gx.carrier() || f.dst() != gy.carrier() {
                return Err(Error::ShapeMismatch("relation endpoints".into()));
            }
            let (dx, dy) = (gx.delta(), gy.delta());
            let ff = f.tensor(f);
            let comonoid = dy.compose(f)? == ff.compose(&dx)?;
            let monoid = dy.dagger().compose(&ff)? == f.compose(&dx.dagger())?;
            Ok(CSMorphismCheck { comonoid, monoid })
        }
        _ => Err(Error::ModelMismatch),
    }
}

/// Kernel of a structure morphism together with its copyability
/// certificate along the source structure.
#[derive(Clone, Debug)]
pub struct CSKernel {
    pub kernel: KSubElement,
    pub verdict: CopyabilityVerdict,
    /// The restriction of the source δ to the kernel exists and
    /// satisfies all axioms (the fill-in squares commute).
    pub restriction_ok: bool,
}

pub fn cs_kernel(
    f: &Morphism,
    dx: &Structure,
    dy: &Structure,
    tol: &Tolerance,
) -> Result<CSKernel> {
    let check = check_cs_morphism(f, dx, dy, tol)?;
    if !check.holds() {
        return Err(Error::Unsupported(
            "not a morphism of classical structures".into(),
        ));
    }
    let kernel = match f {
        Morphism::Hilb(f) => KSubElement::Hilb(fdhilb::kernel(f, tol)?),
        Morphism::Rel(r) => KSubElement::Rel(r.kernel()),
    };
    let verdict = is_copyable_kernel(&kernel, dx, tol)?;
    let restriction_ok = verdict.copyable && restrict_delta(&kernel, dx, tol).is_ok();
    Ok(CSKernel {
        kernel,
        verdict,
        restriction_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdhilb::OrthonormalBasis;
    use crate::finrel::Subset;
    use crate::scalar::Scalar;

    fn comp(dim: usize) -> Structure {
        Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::computational(dim)).unwrap(),
        )
    }

    fn diag(entries: &[i64]) -> Matrix {
        let d = entries.len();
        let mut m = Matrix::zero(Backend::Exact, d, d);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, Scalar::from_int(e));
        }
        m
    }

    #[test]
    fn zero_and_identity_are_copyable() {
        let tol = Tolerance::exact();
        let d = comp(2);
        for p in [diag(&[0, 0]), diag(&[1, 1])] {
            assert!(is_copyable_endo(&Morphism::Hilb(p), &d, &tol).unwrap().copyable);
        }
        let g = Structure::Rel(AbelianGroupoid::cyclic(3));
        for r in [Relation::empty(3, 3), Relation::identity(3)] {
            assert!(is_copyable_endo(&Morphism::Rel(r), &g, &tol).unwrap().copyable);
        }
    }

    #[test]
    fn basis_projection_copyable_uniform_not() {
        let tol = Tolerance::exact();
        let d = comp(2);
        assert!(is_copyable_endo(&Morphism::Hilb(diag(&[1, 0])), &d, &tol)
            .unwrap()
            .copyable);
        let half = Matrix::from_fn(Backend::Exact, 2, 2, |_, _| Scalar::from_ratio(1, 2));
        let v = is_copyable_endo(&Morphism::Hilb(half), &d, &tol).unwrap();
        assert!(!v.copyable);
    }

    #[test]
    fn rel_singleton_kernel_not_copyable() {
        let tol = Tolerance::exact();
        let g = Structure::Rel(AbelianGroupoid::cyclic(2));
        let k = KSubElement::Rel(Subset::from_elements(2, &[0]));
        assert!(!is_copyable_kernel(&k, &g, &tol).unwrap().copyable);
    }

    #[test]
    fn rotation_basis_line_is_copyable_exact() {
        let tol = Tolerance::exact();
        let basis = OrthonormalBasis::rotation_3_4_5();
        let d = Structure::Hilb(ClassicalStructure::from_basis(&basis).unwrap());
        let v = basis.unitary().column_at(0);
        let p = Projection::onto_line(&v, &tol).unwrap();
        assert!(is_copyable_kernel(&KSubElement::Hilb(p), &d, &tol)
            .unwrap()
            .copyable);
    }

    #[test]
    fn restrict_identity_gives_same_delta() {
        let tol = Tolerance::exact();
        let Structure::Hilb(cs) = comp(2) else { panic!() };
        let id = KSubElement::Hilb(Projection::identity(Backend::Exact, 2));
        let Structure::Hilb(sub) = restrict_delta(&id, &Structure::Hilb(cs.clone()), &tol).unwrap()
        else {
            panic!()
        };
        assert!(sub.delta().equals(cs.delta(), &tol).unwrap());
    }

    #[test]
    fn restrict_coordinate_plane_gives_smaller_copier() {
        let tol = Tolerance::exact();
        let d3 = comp(3);
        let k = KSubElement::Hilb(Projection::new(diag(&[1, 1, 0]), &tol).unwrap());
        let Structure::Hilb(sub) = restrict_delta(&k, &d3, &tol).unwrap() else {
            panic!()
        };
        assert_eq!(sub.dim(), 2);
        let expected = fdhilb::copier(Backend::Exact, 2);
        assert!(sub.delta().equals(&expected, &tol).unwrap());
        assert!(sub.verify(&tol).unwrap().passes());
    }

    #[test]
    fn restrict_rejects_non_copyable() {
        let tol = Tolerance::exact();
        let d = comp(2);
        let v = Matrix::column(vec![Scalar::from_ratio(3, 5), Scalar::from_ratio(4, 5)]).unwrap();
        let k = KSubElement::Hilb(Projection::onto_line(&v, &tol).unwrap());
        assert!(matches!(
            restrict_delta(&k, &d, &tol),
            Err(Error::NotCopyable)
        ));
    }

    #[test]
    fn restrict_groupoid_to_component() {
        let tol = Tolerance::exact();
        let g = AbelianGroupoid::disjoint_union(
            &AbelianGroupoid::cyclic(2),
            &AbelianGroupoid::cyclic(3),
        );
        let k = KSubElement::Rel(Subset::from_elements(5, &[2, 3, 4]));
        let Structure::Rel(sub) = restrict_delta(&k, &Structure::Rel(g), &tol).unwrap() else {
            panic!()
        };
        assert_eq!(sub.carrier(), 3);
        assert_eq!(sub, AbelianGroupoid::cyclic(3));
    }

    #[test]
    fn copyable_lattice_sizes_hilb() {
        let tol = Tolerance::exact();
        for (dim, expect) in [(2usize, 4usize), (3, 8)] {
            let (lat, cert) = copyable_lattice(&comp(dim), &[], &tol).unwrap();
            assert_eq!(lat.len(), expect);
            assert_eq!(cert.certified_members, expect);
            assert!(lat.is_boolean().unwrap().0);
            assert!(lat.orthomodular_check().0);
        }
    }

    #[test]
    fn copyable_lattice_rel_group_is_trivial() {
        let tol = Tolerance::exact();
        let (lat, cert) = copyable_lattice(&Structure::Rel(AbelianGroupoid::cyclic(2)), &[], &tol)
            .unwrap();
        assert_eq!(lat.len(), 2);
        assert!(cert.exhaustive);
        assert!(lat.is_boolean().unwrap().0);
    }

    #[test]
    fn probes_outside_family_are_refuted() {
        let tol = Tolerance::exact();
        let v = Matrix::column(vec![Scalar::from_ratio(3, 5), Scalar::from_ratio(4, 5)]).unwrap();
        let probe = KSubElement::Hilb(Projection::onto_line(&v, &tol).unwrap());
        let (_, cert) = copyable_lattice(&comp(2), &[probe], &tol).unwrap();
        assert_eq!(cert.refuted_probes, 1);
        assert!(cert.probe_anomalies.is_empty());
    }

    #[test]
    fn meet_and_ortho_of_copyables_are_copyable() {
        let tol = Tolerance::exact();
        let d = comp(3);
        let (lat, _) = copyable_lattice(&d, &[], &tol).unwrap();
        for a in lat.elements() {
            assert!(is_copyable_kernel(&a.ortho(), &d, &tol).unwrap().copyable);
            for b in lat.elements() {
                let m = a.meet(b, &tol).unwrap();
                assert!(is_copyable_kernel(&m, &d, &tol).unwrap().copyable);
            }
        }
    }

    #[test]
    fn missing_provenance_is_an_error() {
        let tol = Tolerance::exact();
        let cs = ClassicalStructure::from_delta(fdhilb::copier(Backend::Exact, 2)).unwrap();
        assert!(matches!(
            copyable_lattice(&Structure::Hilb(cs), &[], &tol),
            Err(Error::MissingProvenance)
        ));
    }

    #[test]
    fn cs_morphism_examples() {
        let tol = Tolerance::exact();
        let d2 = comp(2);
        let d3 = comp(3);
        let id = Morphism::Hilb(Matrix::identity(Backend::Exact, 2));
        assert!(check_cs_morphism(&id, &d2, &d2, &tol).unwrap().holds());
        let zero = Morphism::Hilb(Matrix::zero(Backend::Exact, 2, 2));
        assert!(check_cs_morphism(&zero, &d2, &d2, &tol).unwrap().holds());
        // coordinate inclusion C² → C³
        let incl = Morphism::Hilb(Matrix::from_ints(3, 2, &[1, 0, 0, 1, 0, 0]));
        assert!(check_cs_morphism(&incl, &d2, &d3, &tol).unwrap().holds());
        // a change of basis is not a structure morphism
        let had = Morphism::Hilb(OrthonormalBasis::hadamard2().unitary());
        let da = Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::computational(2))
                .unwrap()
                .to_approx(),
        );
        let atol = Tolerance::approx(crate::scalar::DEFAULT_EPS);
        assert!(!check_cs_morphism(&had, &da, &da, &atol).unwrap().holds());
    }

    #[test]
    fn cs_kernel_examples() {
        let tol = Tolerance::exact();
        let d2 = comp(2);
        let d3 = comp(3);
        let d1 = comp(1);

        let id = Morphism::Hilb(Matrix::identity(Backend::Exact, 2));
        let k = cs_kernel(&id, &d2, &d2, &tol).unwrap();
        assert!(k.kernel.is_zero(&tol) && k.verdict.copyable);

        let zero = Morphism::Hilb(Matrix::zero(Backend::Exact, 2, 2));
        let k = cs_kernel(&zero, &d2, &d2, &tol).unwrap();
        assert!(k.kernel.is_one(&tol) && k.verdict.copyable && k.restriction_ok);

        // coordinate projection C³ → C¹ kills e₁, e₂
        let proj = Morphism::Hilb(Matrix::from_ints(1, 3, &[1, 0, 0]));
        let k = cs_kernel(&proj, &d3, &d1, &tol).unwrap();
        let expected = KSubElement::Hilb(Projection::new(diag(&[0, 1, 1]), &tol).unwrap());
        assert!(k.kernel.equals(&expected, &tol));
        assert!(k.verdict.copyable && k.restriction_ok);
    }

    #[test]
    fn cs_kernel_rejects_non_morphism() {
        let tol = Tolerance::approx(crate::scalar::DEFAULT_EPS);
        let da = Structure::Hilb(
            ClassicalStructure::from_basis(&OrthonormalBasis::computational(2))
                .unwrap()
                .to_approx(),
        );
        let had = Morphism::Hilb(OrthonormalBasis::hadamard2().unitary());
        assert!(cs_kernel(&had, &da, &da, &tol).is_err());
    }

    #[test]
    fn rel_cs_kernel() {
        let tol = Tolerance::exact();
        let g2 = Structure::Rel(AbelianGroupoid::cyclic(2));
        let id = Morphism::Rel(Relation::identity(2));
        let k = cs_kernel(&id, &g2, &g2, &tol).unwrap();
        assert!(k.kernel.is_zero(&tol) && k.verdict.copyable);
    }
}
