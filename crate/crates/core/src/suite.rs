//! The built-in verification battery: every top-level claim the
//! toolkit is meant to certify, run end to end on fixture data with
//! per-criterion time budgets. Used both by the acceptance test and by
//! the command-line `suite` subcommand.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complementarity::{self, JointlyEpic, UnbiasedScope};
use crate::copyability::{self, Morphism, Structure};
use crate::fdhilb::{self, ClassicalStructure, OrthonormalBasis, Projection};
use crate::finrel::{self, AbelianGroupoid, Relation, Subset};
use crate::lattice::{KSubElement, KSubLattice, DEFAULT_MAX_LATTICE};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Scalar, Tolerance, DEFAULT_EPS};
use crate::vnalg;

/// One battery entry after execution.
pub struct CriterionOutcome {
    pub anchor: &'static str,
    pub budget: Duration,
    pub elapsed: Duration,
    pub result: Result<String, String>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok() && self.elapsed <= self.budget
    }

    /// The scoreboard line for this criterion.
    pub fn line(&self) -> String {
        match (&self.result, self.elapsed <= self.budget) {
            (Ok(detail), true) => {
                format!("[PASS] {} ({} ms) {detail}", self.anchor, self.elapsed.as_millis())
            }
            (Ok(detail), false) => format!(
                "[FAIL] {} ({} ms) over budget of {} ms; {detail}",
                self.anchor,
                self.elapsed.as_millis(),
                self.budget.as_millis()
            ),
            (Err(why), _) => {
                format!("[FAIL] {} ({} ms) {why}", self.anchor, self.elapsed.as_millis())
            }
        }
    }
}

/// Runs the whole battery in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    let criteria: Vec<(&'static str, Duration, fn() -> Result<String, String>)> = vec![
        ("copyable-lattice-sizes", Duration::from_secs(1), c01_copyable_lattice_sizes),
        ("rel-triviality", Duration::from_secs(6), c02_rel_triviality),
        ("per-congruence", Duration::from_secs(5), c03_per_congruence),
        ("tensor-kernel-coherence", Duration::from_secs(10), c04_tensor_kernel_coherence),
        ("boolean-criterion-equivalence", Duration::from_secs(5), c05_boolean_criterion_equivalence),
        ("delta-restriction", Duration::from_secs(1), c06_restriction),
        ("cs-kernels", Duration::from_secs(1), c07_cs_kernels),
        ("mub-battery", Duration::from_secs(1), c08_mub_battery),
        ("copyable-never-unbiased", Duration::from_secs(1), c09_copyable_never_unbiased),
        ("vn-round-trip", Duration::from_secs(5), c10_vn_round_trip),
        ("level-bridge", Duration::from_secs(2), c11_level_bridge),
        ("kernel-family-check", Duration::from_secs(1), c12_family_check),
    ];
    criteria
        .into_iter()
        .map(|(anchor, budget, run)| {
            let start = Instant::now();
            let result = run();
            CriterionOutcome {
                anchor,
                budget,
                elapsed: start.elapsed(),
                result,
            }
        })
        .collect()
}

fn exact() -> Tolerance {
    Tolerance::exact()
}

fn approx() -> Tolerance {
    Tolerance::approx(DEFAULT_EPS)
}

fn comp(dim: usize) -> Structure {
    Structure::Hilb(ClassicalStructure::from_basis(&OrthonormalBasis::computational(dim)).unwrap())
}

fn comp_approx(dim: usize) -> Structure {
    let Structure::Hilb(cs) = comp(dim) else { unreachable!() };
    Structure::Hilb(cs.to_approx())
}

fn rotation() -> Structure {
    Structure::Hilb(ClassicalStructure::from_basis(&OrthonormalBasis::rotation_3_4_5()).unwrap())
}

fn diag(entries: &[i64]) -> Matrix {
    let d = entries.len();
    let mut m = Matrix::zero(Backend::Exact, d, d);
    for (i, &e) in entries.iter().enumerate() {
        m.set(i, i, Scalar::from_int(e));
    }
    m
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols)
        .map(|_| {
            Scalar::exact_ratio(
                rng.gen_range(-3i64..=3),
                rng.gen_range(1i64..=3),
                rng.gen_range(-3i64..=3),
                rng.gen_range(1i64..=3),
            )
        })
        .collect();
    Matrix::new(rows, cols, entries).unwrap()
}

fn random_relation(rng: &mut ChaCha8Rng, src: usize, dst: usize) -> Relation {
    let mut r = Relation::empty(src, dst);
    for x in 0..src {
        for y in 0..dst {
            if rng.gen_bool(0.4) {
                r.insert(x, y);
            }
        }
    }
    r
}

fn c01_copyable_lattice_sizes() -> Result<String, String> {
    let t = exact();
    for d in 2..=4usize {
        let (lat, _) = copyability::copyable_lattice(&comp(d), &[], &t).map_err(|e| e.to_string())?;
        if lat.len() != 1 << d {
            return Err(format!("dim {d}: got {} elements, want {}", lat.len(), 1 << d));
        }
        if !lat.is_boolean().map_err(|e| e.to_string())?.0 {
            return Err(format!("dim {d}: lattice not Boolean"));
        }
        if !lat.orthomodular_check().0 {
            return Err(format!("dim {d}: lattice not orthomodular"));
        }
    }
    Ok("dims 2-4: 2^d copyable kernels, Boolean, orthomodular".into())
}

fn c02_rel_triviality() -> Result<String, String> {
    let groups = vec![
        AbelianGroupoid::cyclic(2),
        AbelianGroupoid::cyclic(3),
        AbelianGroupoid::cyclic(4),
        AbelianGroupoid::klein4(),
        AbelianGroupoid::cyclic(5),
        AbelianGroupoid::cyclic(6),
    ];
    for g in groups {
        let n = g.carrier();
        let copyables = g.copyable_subsets();
        if copyables != vec![Subset::empty(n), Subset::full(n)] {
            return Err(format!("group of order {n}: {} copyable subsets", copyables.len()));
        }
    }
    Ok("all abelian groups of order 2-6 have only trivial copyable subsets".into())
}

fn c03_per_congruence() -> Result<String, String> {
    let z4 = AbelianGroupoid::cyclic(4);
    let mut copyable_count = 0usize;
    for q in finrel::all_pers(4) {
        let congruence = z4.per_copyable(&q).map_err(|e| e.to_string())?;
        let direct = z4.per_copyable_via_delta(&q).map_err(|e| e.to_string())?;
        if congruence != direct {
            return Err(format!("routes disagree on {:?}", q.pairs()));
        }
        if congruence {
            copyable_count += 1;
        }
    }
    Ok(format!(
        "both routes agree on all {} PERs over Z4 ({} copyable)",
        finrel::all_pers(4).len(),
        copyable_count
    ))
}

fn c04_tensor_kernel_coherence() -> Result<String, String> {
    let t = exact();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let meet_hilb = |a: Projection, b: Projection| -> Result<Matrix, String> {
        let m = KSubElement::Hilb(a)
            .meet(&KSubElement::Hilb(b), &t)
            .map_err(|e| e.to_string())?;
        let KSubElement::Hilb(p) = m else { unreachable!() };
        Ok(p.matrix().clone())
    };
    for i in 0..100 {
        let (rf, cf) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (rg, cg) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = random_matrix(&mut rng, rf, cf);
        let g = random_matrix(&mut rng, rg, cg);
        let kf = fdhilb::kernel(&f, &t).map_err(|e| e.to_string())?;
        let kg = fdhilb::kernel(&g, &t).map_err(|e| e.to_string())?;
        let product = kf.matrix().tensor(kg.matrix()).map_err(|e| e.to_string())?;
        let left = fdhilb::kernel(&f.tensor(&Matrix::identity(Backend::Exact, cg)).unwrap(), &t)
            .map_err(|e| e.to_string())?;
        let right = fdhilb::kernel(&Matrix::identity(Backend::Exact, cf).tensor(&g).unwrap(), &t)
            .map_err(|e| e.to_string())?;
        let met = meet_hilb(left, right)?;
        if !product.equals(&met, &t).map_err(|e| e.to_string())? {
            return Err(format!("pair coherence failed at sample {i}"));
        }
        // diagonal form: ker(f)⊗ker(f) = ker(f⊗id) ∧ ker(id⊗f)
        let a = fdhilb::kernel(&f.tensor(&Matrix::identity(Backend::Exact, cf)).unwrap(), &t)
            .map_err(|e| e.to_string())?;
        let b = fdhilb::kernel(&Matrix::identity(Backend::Exact, cf).tensor(&f).unwrap(), &t)
            .map_err(|e| e.to_string())?;
        let met = meet_hilb(a, b)?;
        let square = kf.matrix().tensor(kf.matrix()).unwrap();
        if !square.equals(&met, &t).map_err(|e| e.to_string())? {
            return Err(format!("diagonal coherence failed at sample {i}"));
        }
    }
    for i in 0..100 {
        let (rs, rd) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (ss, sd) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let r = random_relation(&mut rng, rs, rd);
        let s = random_relation(&mut rng, ss, sd);
        let product = subset_tensor(&r.kernel(), &s.kernel());
        let left = r.tensor(&Relation::identity(ss)).kernel();
        let right = Relation::identity(rs).tensor(&s).kernel();
        if product != left.intersect(&right) {
            return Err(format!("relational pair coherence failed at sample {i}"));
        }
        let a = r.tensor(&Relation::identity(rs)).kernel();
        let b = Relation::identity(rs).tensor(&r).kernel();
        if subset_tensor(&r.kernel(), &r.kernel()) != a.intersect(&b) {
            return Err(format!("relational diagonal coherence failed at sample {i}"));
        }
    }
    Ok("100 exact matrix pairs + diagonal form, and the same battery on relations".into())
}

fn subset_tensor(a: &Subset, b: &Subset) -> Subset {
    let mut out = Subset::empty(a.size * b.size);
    for x in a.elements() {
        for y in b.elements() {
            out.mask |= 1 << (x * b.size + y);
        }
    }
    out
}

fn c05_boolean_criterion_equivalence() -> Result<String, String> {
    let t = exact();
    let line = |a: i64, b: i64| {
        let v = Matrix::column(vec![Scalar::from_ratio(a, 2), Scalar::from_ratio(b, 2)]).unwrap();
        KSubElement::Hilb(Projection::onto_line(&v, &t).unwrap())
    };
    let d = |e: &[i64]| KSubElement::Hilb(Projection::new(diag(e), &t).unwrap());
    let lattices = vec![
        KSubLattice::closure(&[d(&[1, 0])], &t, DEFAULT_MAX_LATTICE),
        KSubLattice::closure(&[d(&[1, 0, 0]), d(&[0, 1, 0])], &t, DEFAULT_MAX_LATTICE),
        KSubLattice::closure(&[d(&[1, 0]), line(1, 1)], &t, DEFAULT_MAX_LATTICE),
        KSubLattice::closure(&[d(&[1, 0]), line(1, -1)], &t, DEFAULT_MAX_LATTICE),
        KSubLattice::closure(
            &[
                KSubElement::Rel(Subset::from_elements(4, &[0, 1])),
                KSubElement::Rel(Subset::from_elements(4, &[1, 2])),
            ],
            &t,
            DEFAULT_MAX_LATTICE,
        ),
    ];
    let mut checked = 0usize;
    for lat in lattices {
        let lat = lat.map_err(|e| e.to_string())?;
        if lat.len() > 64 {
            continue;
        }
        let criterion = lat.is_boolean().map_err(|e| e.to_string())?.0;
        let distributive = lat.is_distributive().0;
        if criterion != distributive {
            return Err(format!(
                "criterion {criterion} vs distributivity {distributive} on a {}-element lattice",
                lat.len()
            ));
        }
        checked += 1;
    }
    // the mixed-line fixture must fail both
    let mixed = KSubLattice::closure(&[d(&[1, 0]), line(1, 1)], &t, DEFAULT_MAX_LATTICE)
        .map_err(|e| e.to_string())?;
    if mixed.is_boolean().map_err(|e| e.to_string())?.0 || mixed.is_distributive().0 {
        return Err("mixed-line fixture unexpectedly Boolean".into());
    }
    Ok(format!("criterion = distributivity on {checked} closed lattices; mixed-line fixture fails both"))
}

fn c06_restriction() -> Result<String, String> {
    let t = exact();
    let mut restricted = 0usize;
    for dim in 2..=3usize {
        let d = comp(dim);
        let (lat, _) = copyability::copyable_lattice(&d, &[], &t).map_err(|e| e.to_string())?;
        for k in lat.elements() {
            if k.is_zero(&t) {
                continue; // degenerate zero object carries no axioms
            }
            let sub = copyability::restrict_delta(k, &d, &t).map_err(|e| e.to_string())?;
            let Structure::Hilb(cs) = sub else { unreachable!() };
            let report = cs.verify(&t).map_err(|e| e.to_string())?;
            if !report.passes() {
                return Err(format!("restriction to {} fails axioms", k.canonical_key()));
            }
            restricted += 1;
        }
    }
    Ok(format!("{restricted} restricted structures pass all axioms including the involution law"))
}

fn c07_cs_kernels() -> Result<String, String> {
    let t = exact();
    let mut checked = 0usize;
    for dim in 2..=3usize {
        for keep in 1..dim {
            // coordinate projection C^dim → C^keep
            let mut f = Matrix::zero(Backend::Exact, keep, dim);
            for i in 0..keep {
                f.set(i, i, Scalar::from_int(1));
            }
            let k = copyability::cs_kernel(&Morphism::Hilb(f), &comp(dim), &comp(keep), &t)
                .map_err(|e| e.to_string())?;
            if !k.verdict.copyable || !k.restriction_ok {
                return Err(format!("kernel of C^{dim}→C^{keep} not certified copyable"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} coordinate-projection kernels certified copyable"))
}

fn c08_mub_battery() -> Result<String, String> {
    let t = approx();
    let bases = vec![
        comp_approx(2),
        Structure::Hilb(ClassicalStructure::from_basis(&OrthonormalBasis::hadamard2()).unwrap()),
        Structure::Hilb(ClassicalStructure::from_basis(&OrthonormalBasis::circular2()).unwrap()),
    ];
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            if !complementarity::mutually_unbiased(&bases[i], &bases[j], UnbiasedScope::Atoms, &t)
                .map_err(|e| e.to_string())?
            {
                return Err(format!("bases {i},{j} not mutually unbiased"));
            }
            if !complementarity::partially_complementary(&bases[i], &bases[j], &t)
                .map_err(|e| e.to_string())?
                .partially_complementary
            {
                return Err(format!("bases {i},{j} not partially complementary"));
            }
        }
    }
    let te = exact();
    let pc = complementarity::partially_complementary(&comp(2), &rotation(), &te)
        .map_err(|e| e.to_string())?
        .partially_complementary;
    let mu = complementarity::mutually_unbiased(&comp(2), &rotation(), UnbiasedScope::Atoms, &te)
        .map_err(|e| e.to_string())?;
    if !(pc && !mu) {
        return Err(format!("rotation pair: pc={pc} mu={mu}, want pc=true mu=false"));
    }
    let r = complementarity::completely_complementary(&bases, JointlyEpic::InfoComplete, &t)
        .map_err(|e| e.to_string())?;
    if !r.completely_complementary {
        return Err("three-basis family not completely complementary".into());
    }
    Ok("3 bases pairwise MU+PC and informationally complete; rotated pair PC but not MU".into())
}

fn c09_copyable_never_unbiased() -> Result<String, String> {
    let mut checked = 0usize;
    for (d, t) in [
        (comp(2), exact()),
        (comp(3), exact()),
        (rotation(), exact()),
    ] {
        let (lat, _) = copyability::copyable_lattice(&d, &[], &t).map_err(|e| e.to_string())?;
        for k in lat.elements() {
            if k.is_zero(&t) {
                continue;
            }
            let KSubElement::Hilb(p) = k else { unreachable!() };
            let incl = fdhilb::inclusion_of(p, &t).map_err(|e| e.to_string())?;
            if complementarity::is_unbiased(&Morphism::Hilb(incl), &d, UnbiasedScope::Nonzero, &t)
                .map_err(|e| e.to_string())?
            {
                return Err(format!("copyable kernel {} is unbiased", k.canonical_key()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} nonzero copyable kernels all fail unbiasedness for their own structure"))
}

fn c10_vn_round_trip() -> Result<String, String> {
    let t = exact();
    for dim in 2..=4usize {
        let (lat, _) = copyability::copyable_lattice(&comp(dim), &[], &t).map_err(|e| e.to_string())?;
        if !vnalg::round_trip_boolean(&lat, &t).map_err(|e| e.to_string())? {
            return Err(format!("lattice round trip failed in dim {dim}"));
        }
        let alg = vnalg::algebra_from_boolean(&lat, &t).map_err(|e| e.to_string())?;
        if !vnalg::round_trip_algebra(&alg, &t).map_err(|e| e.to_string())? {
            return Err(format!("algebra round trip failed in dim {dim}"));
        }
        let cc = vnalg::commutant(&vnalg::commutant(&alg, &t).map_err(|e| e.to_string())?, &t)
            .map_err(|e| e.to_string())?;
        if !cc.equals(&alg, &t).map_err(|e| e.to_string())? {
            return Err(format!("double commutant moved the dim-{dim} algebra"));
        }
    }
    Ok("projection lattices and commutative algebras round trip in dims 2-4; double commutant fixes them".into())
}

fn c11_level_bridge() -> Result<String, String> {
    let t = exact();
    let pairs = vec![
        (comp(2), rotation()),
        (comp(2), comp(2)),
        (comp(3), comp(3)),
    ];
    for (d1, d2) in pairs {
        let (pc_s, pc_a) = vnalg::bridge_check(&d1, &d2, &t).map_err(|e| e.to_string())?;
        if pc_s != pc_a {
            return Err(format!("structure-level {pc_s} vs algebra-level {pc_a}"));
        }
        // lattice-intersection route is cross-checked against direct
        // per-kernel re-evaluation inside partially_complementary
        let r = complementarity::partially_complementary(&d1, &d2, &t).map_err(|e| e.to_string())?;
        if r.partially_complementary != r.witnesses.is_empty() {
            return Err("witness list inconsistent with verdict".into());
        }
    }
    Ok("subalgebra and structure verdicts agree on all fixture pairs".into())
}

fn c12_family_check() -> Result<String, String> {
    let t = exact();
    let family = vec![
        Projection::new(diag(&[1, 0]), &t).unwrap(),
        Projection::new(diag(&[0, 1]), &t).unwrap(),
    ];
    let r = vnalg::fdcaker_family_check(&family, &t).map_err(|e| e.to_string())?;
    if !r.accepted {
        return Err("disjoint coordinate family rejected".into());
    }
    let cs = r.structure.ok_or("no structure constructed")?;
    if !cs
        .delta()
        .equals(&fdhilb::copier(Backend::Exact, 2), &t)
        .map_err(|e| e.to_string())?
    {
        return Err("constructed structure is not the computational copier".into());
    }
    if r.algebra.ok_or("no algebra")?.span_dim() != 2 {
        return Err("expected the diagonal algebra".into());
    }
    let v = Matrix::column(vec![Scalar::from_int(1), Scalar::from_int(1)]).unwrap();
    let skew = vec![
        Projection::new(diag(&[1, 0]), &t).unwrap(),
        Projection::onto_line(&v, &t).unwrap(),
    ];
    let r = vnalg::fdcaker_family_check(&skew, &t).map_err(|e| e.to_string())?;
    if r.accepted || r.witness != Some((0, 1)) || r.pairwise_orthogonal {
        return Err("skew family should be rejected with the offending pair".into());
    }
    Ok("disjoint family accepted with copier + diagonal algebra; skew family rejected with witness".into())
}

