//! Lattices of kernel subobjects. Elements are projections (Hilbert
//! model) or subsets (relational model); finite sublattices are
//! materialized explicitly and every law is checked by exhaustive
//! enumeration over the materialized elements. An abstract order-table
//! core backs the checks so that hand-built counterexample orders can
//! be audited with the same code.

use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fdhilb::Projection;
use crate::finrel::Subset;
use crate::matrix::Matrix;
use crate::scalar::Tolerance;

/// Element bound for closure iteration; inputs that blow past this are
/// not desk-scale and get an error instead of an endless loop.
pub const DEFAULT_MAX_LATTICE: usize = 4096;

#[derive(Clone, Debug)]
pub enum KSubElement {
    Hilb(Projection),
    Rel(Subset),
}

impl KSubElement {
    pub fn zero_like(&self) -> KSubElement {
        match self {
            KSubElement::Hilb(p) => KSubElement::Hilb(Projection::zero(p.backend(), p.dim())),
            KSubElement::Rel(s) => KSubElement::Rel(Subset::empty(s.size)),
        }
    }

    pub fn one_like(&self) -> KSubElement {
        match self {
            KSubElement::Hilb(p) => KSubElement::Hilb(Projection::identity(p.backend(), p.dim())),
            KSubElement::Rel(s) => KSubElement::Rel(Subset::full(s.size)),
        }
    }

    fn same_ambient(&self, other: &KSubElement) -> Result<()> {
        match (self, other) {
            (KSubElement::Hilb(p), KSubElement::Hilb(q))
                if p.dim() == q.dim() && p.backend() == q.backend() =>
            {
                Ok(())
            }
            (KSubElement::Rel(a), KSubElement::Rel(b)) if a.size == b.size => Ok(()),
            _ => Err(Error::ModelMismatch),
        }
    }

    pub fn leq(&self, other: &KSubElement, tol: &Tolerance) -> Result<bool> {
        self.same_ambient(other)?;
        match (self, other) {
            (KSubElement::Hilb(p), KSubElement::Hilb(q)) => {
                let comp = q.matrix().compose(p.matrix())?;
                comp.equals(p.matrix(), tol)
            }
            (KSubElement::Rel(a), KSubElement::Rel(b)) => Ok(a.subset_of(b)),
            _ => unreachable!(),
        }
    }

    pub fn meet(&self, other: &KSubElement, tol: &Tolerance) -> Result<KSubElement> {
        self.same_ambient(other)?;
        match (self, other) {
            (KSubElement::Hilb(p), KSubElement::Hilb(q)) => {
                // range(P) ∩ range(Q) is the joint null space of id−P
                // and id−Q
                let id = Matrix::identity(p.backend(), p.dim());
                let stacked = Matrix::vcat(&[id.sub(p.matrix())?, id.sub(q.matrix())?])?;
                let m = stacked.null_space_projection(tol)?;
                Ok(KSubElement::Hilb(Projection::trusted(m)))
            }
            (KSubElement::Rel(a), KSubElement::Rel(b)) => Ok(KSubElement::Rel(a.intersect(b))),
            _ => unreachable!(),
        }
    }

    pub fn ortho(&self) -> KSubElement {
        match self {
            KSubElement::Hilb(p) => KSubElement::Hilb(crate::fdhilb::ortho(p)),
            KSubElement::Rel(s) => KSubElement::Rel(s.complement()),
        }
    }

    pub fn join(&self, other: &KSubElement, tol: &Tolerance) -> Result<KSubElement> {
        Ok(self.ortho().meet(&other.ortho(), tol)?.ortho())
    }

    pub fn equals(&self, other: &KSubElement, tol: &Tolerance) -> bool {
        match (self, other) {
            (KSubElement::Hilb(p), KSubElement::Hilb(q)) => {
                p.matrix().equals(q.matrix(), tol).unwrap_or(false)
            }
            (KSubElement::Rel(a), KSubElement::Rel(b)) => a == b,
            _ => false,
        }
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        self.equals(&self.zero_like(), tol)
    }

    pub fn is_one(&self, tol: &Tolerance) -> bool {
        self.equals(&self.one_like(), tol)
    }

    /// Stable encoding for deduplication order and DOT node names.
    pub fn canonical_key(&self) -> String {
        match self {
            KSubElement::Hilb(p) => p.matrix().canonical_key(),
            KSubElement::Rel(s) => format!(
                "{{{}}}",
                s.elements()
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }

    fn payload_json(&self) -> serde_json::Value {
        match self {
            KSubElement::Hilb(p) => serde_json::to_value(p.matrix()).unwrap(),
            KSubElement::Rel(s) => serde_json::to_value(s.elements()).unwrap(),
        }
    }
}

/// Order table of a finite orthocomplemented poset: the common core
/// behind both model-backed lattices and hand-built fixtures.
#[derive(Clone, Debug)]
pub struct FiniteOrtholattice {
    n: usize,
    leq: Vec<bool>, // leq[i*n+j] ⟺ element i ≤ element j
    ortho: Vec<usize>,
    zero: usize,
    one: usize,
}

impl FiniteOrtholattice {
    pub fn new(n: usize, leq: Vec<bool>, ortho: Vec<usize>) -> Result<Self> {
        if leq.len() != n * n || ortho.len() != n {
            return Err(Error::ShapeMismatch("order table dimensions".into()));
        }
        let at = |i: usize, j: usize| leq[i * n + j];
        for i in 0..n {
            if !at(i, i) {
                return Err(Error::ShapeMismatch("order not reflexive".into()));
            }
            for j in 0..n {
                if i != j && at(i, j) && at(j, i) {
                    return Err(Error::ShapeMismatch("order not antisymmetric".into()));
                }
                for k in 0..n {
                    if at(i, j) && at(j, k) && !at(i, k) {
                        return Err(Error::ShapeMismatch("order not transitive".into()));
                    }
                }
            }
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|j| at(z, j)))
            .ok_or_else(|| Error::ShapeMismatch("no bottom element".into()))?;
        let one = (0..n)
            .find(|&o| (0..n).all(|j| at(j, o)))
            .ok_or_else(|| Error::ShapeMismatch("no top element".into()))?;
        let l = FiniteOrtholattice {
            n,
            leq,
            ortho,
            zero,
            one,
        };
        // orthocomplement laws: involutive, order-reversing, complement
        for i in 0..n {
            if l.ortho[l.ortho[i]] != i {
                return Err(Error::ShapeMismatch("ortho not involutive".into()));
            }
            for j in 0..n {
                if l.le(i, j) && !l.le(l.ortho[j], l.ortho[i]) {
                    return Err(Error::ShapeMismatch("ortho not order-reversing".into()));
                }
            }
            if l.meet(i, l.ortho[i]) != Some(l.zero) || l.join(i, l.ortho[i]) != Some(l.one) {
                return Err(Error::ShapeMismatch("complement law fails".into()));
            }
        }
        Ok(l)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn ortho(&self, i: usize) -> usize {
        self.ortho[i]
    }

    /// Greatest lower bound from the order table, when it exists.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.n)
            .filter(|&k| self.le(k, i) && self.le(k, j))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&k| self.le(k, m)))
    }

    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.n)
            .filter(|&k| self.le(i, k) && self.le(j, k))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&m| upper.iter().all(|&k| self.le(m, k)))
    }

    pub fn is_lattice(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.meet(i, j).is_some() && self.join(i, j).is_some())
        })
    }

    /// a ≤ b ⟹ b = a ∨ (b ∧ a⊥), with a witness pair on failure.
    pub fn orthomodular(&self) -> (bool, Option<(usize, usize)>) {
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.le(a, b) {
                    continue;
                }
                let inner = self.meet(b, self.ortho[a]);
                let rejoined = inner.and_then(|m| self.join(a, m));
                if rejoined != Some(b) {
                    return (false, Some((a, b)));
                }
            }
        }
        (true, None)
    }

    /// Textbook distributivity a∧(b∨c) = (a∧b)∨(a∧c) over all triples.
    pub fn distributive(&self) -> (bool, Option<(usize, usize, usize)>) {
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    let lhs = self.join(b, c).and_then(|bc| self.meet(a, bc));
                    let rhs = match (self.meet(a, b), self.meet(a, c)) {
                        (Some(ab), Some(ac)) => self.join(ab, ac),
                        _ => None,
                    };
                    if lhs != rhs || lhs.is_none() {
                        return (false, Some((a, b, c)));
                    }
                }
            }
        }
        (true, None)
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| {
                a != self.zero
                    && (0..self.n).all(|b| b == self.zero || b == a || !self.le(b, a))
            })
            .collect()
    }

    /// Covering pairs (i, j): i < j with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j || !self.le(i, j) {
                    continue;
                }
                let strict_between = (0..self.n)
                    .any(|k| k != i && k != j && self.le(i, k) && self.le(k, j));
                if !strict_between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The hexagon: 0 < a < b⊥ < 1 and 0 < b < a⊥ < 1. A lattice with
    /// a valid orthocomplement that is not orthomodular; used as the
    /// negative control for the orthomodularity check.
    pub fn hexagon() -> Self {
        // indices: 0, a=1, b=2, a⊥=3, b⊥=4, 1=5
        let n = 6;
        let mut leq = vec![false; n * n];
        let mut set = |i: usize, j: usize| leq[i * n + j] = true;
        for i in 0..n {
            set(i, i);
            set(0, i);
            set(i, 5);
        }
        set(1, 4);
        set(2, 3);
        FiniteOrtholattice::new(n, leq, vec![5, 3, 4, 1, 2, 0]).expect("valid hexagon")
    }
}

/// A finite, deduplicated set of kernel subobjects with its cached
/// order table.
#[derive(Clone, Debug)]
pub struct KSubLattice {
    elements: Vec<KSubElement>,
    core: FiniteOrtholattice,
    tol: Tolerance,
}

impl KSubLattice {
    /// Deduplicate, sort by canonical key, and build the order table.
    /// The element set must already contain 0 and 1 and be closed
    /// under ortho, meet and join.
    pub fn from_elements(elements: Vec<KSubElement>, tol: &Tolerance) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::ShapeMismatch("empty element list".into()));
        }
        let mut dedup: Vec<KSubElement> = Vec::new();
        for e in elements {
            if !dedup.iter().any(|d| d.equals(&e, tol)) {
                dedup.push(e);
            }
        }
        dedup.sort_by_key(|e| e.canonical_key());
        let n = dedup.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = dedup[i].leq(&dedup[j], tol)?;
            }
        }
        let mut ortho = vec![usize::MAX; n];
        for (i, e) in dedup.iter().enumerate() {
            let oe = e.ortho();
            ortho[i] = dedup
                .iter()
                .position(|d| d.equals(&oe, tol))
                .ok_or_else(|| Error::ShapeMismatch("not closed under ortho".into()))?;
        }
        let core = FiniteOrtholattice::new(n, leq, ortho)?;
        let lat = KSubLattice {
            elements: dedup,
            core,
            tol: tol.clone(),
        };
        lat.check_closed()?;
        Ok(lat)
    }

    fn check_closed(&self) -> Result<()> {
        let n = self.len();
        if !self.elements[self.core.zero()].is_zero(&self.tol)
            || !self.elements[self.core.one()].is_one(&self.tol)
        {
            return Err(Error::ShapeMismatch("0 or 1 missing".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let m = self.elements[i].meet(&self.elements[j], &self.tol)?;
                let jn = self.elements[i].join(&self.elements[j], &self.tol)?;
                if self.index_of(&m).is_none() || self.index_of(&jn).is_none() {
                    return Err(Error::ShapeMismatch("not closed under meet/join".into()));
                }
            }
        }
        Ok(())
    }

    /// Smallest closed lattice containing the generators, 0 and 1;
    /// iterates ortho/meet/join to a fixpoint.
    pub fn closure(gens: &[KSubElement], tol: &Tolerance, max: usize) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::ShapeMismatch("closure needs at least one generator to fix the ambient object".into()));
        }
        let mut elems: Vec<KSubElement> = vec![gens[0].zero_like(), gens[0].one_like()];
        for g in gens {
            gens[0].same_ambient(g)?;
            if !elems.iter().any(|e| e.equals(g, tol)) {
                elems.push(g.clone());
            }
        }
        loop {
            let mut fresh: Vec<KSubElement> = Vec::new();
            let push = |e: KSubElement, elems: &[KSubElement], fresh: &mut Vec<KSubElement>| {
                if !elems.iter().chain(fresh.iter()).any(|d| d.equals(&e, tol)) {
                    fresh.push(e);
                }
            };
            for i in 0..elems.len() {
                push(elems[i].ortho(), &elems, &mut fresh);
                for j in 0..i {
                    push(elems[i].meet(&elems[j], tol)?, &elems, &mut fresh);
                    push(elems[i].join(&elems[j], tol)?, &elems, &mut fresh);
                }
                if elems.len() + fresh.len() > max {
                    return Err(Error::ClosureBound(max));
                }
            }
            if fresh.is_empty() {
                break;
            }
            elems.extend(fresh);
        }
        KSubLattice::from_elements(elems, tol)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[KSubElement] {
        &self.elements
    }

    pub fn core(&self) -> &FiniteOrtholattice {
        &self.core
    }

    pub fn index_of(&self, e: &KSubElement) -> Option<usize> {
        self.elements.iter().position(|d| d.equals(e, &self.tol))
    }

    /// The composition criterion for Booleanness: every pair with meet
    /// zero must satisfy P_l∘P_k = 0 (disjoint subsets compose to the
    /// empty relation automatically). Witness pair on failure.
    pub fn is_boolean(&self) -> Result<(bool, Option<(usize, usize)>)> {
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.core.meet(i, j) != Some(self.core.zero()) {
                    continue;
                }
                let orthogonal = match (&self.elements[i], &self.elements[j]) {
                    (KSubElement::Hilb(p), KSubElement::Hilb(q)) => {
                        let prod = q.matrix().compose(p.matrix())?;
                        prod.is_zero(&self.tol)
                    }
                    (KSubElement::Rel(a), KSubElement::Rel(b)) => a.intersect(b).is_empty(),
                    _ => return Err(Error::ModelMismatch),
                };
                if !orthogonal {
                    return Ok((false, Some((i, j))));
                }
            }
        }
        Ok((true, None))
    }

    pub fn orthomodular_check(&self) -> (bool, Option<(usize, usize)>) {
        self.core.orthomodular()
    }

    pub fn is_distributive(&self) -> (bool, Option<(usize, usize, usize)>) {
        self.core.distributive()
    }

    pub fn atoms(&self) -> Vec<&KSubElement> {
        self.core.atoms().into_iter().map(|i| &self.elements[i]).collect()
    }

    /// Hasse diagram as DOT; node names follow the sorted canonical
    /// element order, so identical inputs give byte-identical output.
    pub fn hasse(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", i, e.canonical_key());
        }
        for (i, j) in self.core.covers() {
            let _ = writeln!(out, "  n{} -> n{};", i, j);
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for KSubLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut order = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.core.le(i, j) {
                    order.push((i, j));
                }
            }
        }
        let mut st = serializer.serialize_struct("KSubLattice", 2)?;
        st.serialize_field(
            "elements",
            &self.elements.iter().map(|e| e.payload_json()).collect::<Vec<_>>(),
        )?;
        st.serialize_field("order", &order)?;
        st.end()
    }
}
