//! The category Rel of finite sets and relations: converse as dagger,
//! cartesian product as tensor, kernels as subsets, and classical
//! structures induced by abelian groupoids (disjoint unions of abelian
//! groups with a partial multiplication). Copyability of subsets and of
//! partial equivalence relations is decided by brute force; element
//! pairs of X×Y are encoded as x·|Y|+y throughout.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSet {
    pub size: usize,
}

/// A subset of 0..size−1 as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    pub size: usize,
    pub mask: u64,
}

impl Subset {
    pub fn empty(size: usize) -> Self {
        Subset { size, mask: 0 }
    }

    pub fn full(size: usize) -> Self {
        Subset {
            size,
            mask: if size == 64 { u64::MAX } else { (1u64 << size) - 1 },
        }
    }

    pub fn from_elements(size: usize, elems: &[usize]) -> Self {
        let mut mask = 0;
        for &e in elems {
            assert!(e < size);
            mask |= 1 << e;
        }
        Subset { size, mask }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask >> x & 1 == 1
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.contains(x)).collect()
    }

    pub fn complement(&self) -> Subset {
        Subset {
            size: self.size,
            mask: Subset::full(self.size).mask & !self.mask,
        }
    }

    pub fn intersect(&self, other: &Subset) -> Subset {
        assert_eq!(self.size, other.size);
        Subset {
            size: self.size,
            mask: self.mask & other.mask,
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert_eq!(self.size, other.size);
        Subset {
            size: self.size,
            mask: self.mask | other.mask,
        }
    }

    pub fn subset_of(&self, other: &Subset) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == Subset::full(self.size).mask
    }

    pub fn count(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

/// A relation X → Y as a boolean matrix, `true` at (x,y) when x relates
/// to y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    src: usize,
    dst: usize,
    pairs: Vec<bool>, // index y*src + x
}

impl Relation {
    pub fn empty(src: usize, dst: usize) -> Self {
        Relation {
            src,
            dst,
            pairs: vec![false; src * dst],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n, n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    pub fn full(src: usize, dst: usize) -> Self {
        Relation {
            src,
            dst,
            pairs: vec![true; src * dst],
        }
    }

    pub fn from_pairs(src: usize, dst: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Relation::empty(src, dst);
        for &(x, y) in pairs {
            if x >= src || y >= dst {
                return Err(Error::ShapeMismatch(format!(
                    "pair ({x},{y}) outside {src}x{dst}"
                )));
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// Endorelation from the low src·src bits of a mask (bit y·src+x).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Relation {
            src: n,
            dst: n,
            pairs: (0..n * n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// The partial identity on a subset: x relates to x iff x ∈ K.
    pub fn partial_identity(k: &Subset) -> Self {
        let mut r = Relation::empty(k.size, k.size);
        for x in 0..k.size {
            if k.contains(x) {
                r.insert(x, x);
            }
        }
        r
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.dst
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs[y * self.src + x]
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.pairs[y * self.src + x] = true;
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.src {
            for y in 0..self.dst {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Converse relation (the dagger of Rel).
    pub fn dagger(&self) -> Relation {
        let mut r = Relation::empty(self.dst, self.src);
        for x in 0..self.src {
            for y in 0..self.dst {
                if self.contains(x, y) {
                    r.insert(y, x);
                }
            }
        }
        r
    }

    /// self ∘ rhs: first rhs, then self.
    pub fn compose(&self, rhs: &Relation) -> Result<Relation> {
        if rhs.dst != self.src {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                self.src, self.dst, rhs.src, rhs.dst
            )));
        }
        let mut out = Relation::empty(rhs.src, self.dst);
        for x in 0..rhs.src {
            for m in 0..rhs.dst {
                if !rhs.contains(x, m) {
                    continue;
                }
                for y in 0..self.dst {
                    if self.contains(m, y) {
                        out.insert(x, y);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product relation on cartesian products; (x₁,x₂) ↦ x₁·|X₂|+x₂.
    pub fn tensor(&self, rhs: &Relation) -> Relation {
        let src = self.src * rhs.src;
        let dst = self.dst * rhs.dst;
        let mut out = Relation::empty(src, dst);
        for x1 in 0..self.src {
            for y1 in 0..self.dst {
                if !self.contains(x1, y1) {
                    continue;
                }
                for x2 in 0..rhs.src {
                    for y2 in 0..rhs.dst {
                        if rhs.contains(x2, y2) {
                            out.insert(x1 * rhs.src + x2, y1 * rhs.dst + y2);
                        }
                    }
                }
            }
        }
        out
    }

    /// ker(R): the elements of the source related to nothing.
    pub fn kernel(&self) -> Subset {
        let mut mask = 0u64;
        for x in 0..self.src {
            if (0..self.dst).all(|y| !self.contains(x, y)) {
                mask |= 1 << x;
            }
        }
        Subset {
            size: self.src,
            mask,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.src == self.dst && *self == self.dagger()
    }

    pub fn is_transitive(&self) -> bool {
        if self.src != self.dst {
            return false;
        }
        let comp = self.compose(self).unwrap();
        comp.pairs
            .iter()
            .zip(&self.pairs)
            .all(|(&c, &s)| !c || s)
    }

    /// The symmetry X⊗X → X⊗X swapping components (X of size n).
    pub fn swap(n: usize) -> Relation {
        let mut r = Relation::empty(n * n, n * n);
        for x in 0..n {
            for y in 0..n {
                r.insert(x * n + y, y * n + x);
            }
        }
        r
    }
}

// ---- abelian groupoids ----

/// A disjoint union of abelian groups with partial multiplication:
/// within a component the table is a total abelian group, across
/// components it is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupoid {
    n: usize,
    table: Vec<Option<usize>>, // index x*n + y
    component: Vec<usize>,
}

impl AbelianGroupoid {
    pub fn from_table(n: usize, table: Vec<Option<usize>>) -> Result<Self> {
        if table.len() != n * n {
            return Err(Error::InvalidGroupoid(format!(
                "table must have {} entries, got {}",
                n * n,
                table.len()
            )));
        }
        if n > 64 {
            return Err(Error::InvalidGroupoid("carrier larger than 64".into()));
        }
        for (i, e) in table.iter().enumerate() {
            if let Some(z) = e {
                if *z >= n {
                    return Err(Error::InvalidGroupoid(format!(
                        "entry {z} at ({},{}) out of range",
                        i / n,
                        i % n
                    )));
                }
            }
        }
        // components: union-find over defined products
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = table[x * n + y] {
                    let (a, b, c) = (find(&mut parent, x), find(&mut parent, y), find(&mut parent, z));
                    parent[a] = b;
                    let b2 = find(&mut parent, b);
                    parent[c] = b2;
                }
            }
        }
        let mut component = vec![0usize; n];
        let mut next = 0;
        let mut label = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            component[x] = label[r];
        }
        let g = AbelianGroupoid {
            n,
            table,
            component,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let same = self.component[x] == self.component[y];
                match self.op(x, y) {
                    Some(z) => {
                        if !same {
                            // cannot happen given how components are built
                            return Err(Error::InvalidGroupoid(
                                "cross-component product defined".into(),
                            ));
                        }
                        if self.component[z] != self.component[x] {
                            return Err(Error::InvalidGroupoid("product escapes component".into()));
                        }
                    }
                    None => {
                        if same {
                            return Err(Error::InvalidGroupoid(format!(
                                "{x}·{y} undefined within a component"
                            )));
                        }
                    }
                }
            }
        }
        // commutativity and associativity
        for x in 0..n {
            for y in 0..n {
                if self.op(x, y) != self.op(y, x) {
                    return Err(Error::InvalidGroupoid(format!("{x}·{y} ≠ {y}·{x}")));
                }
                for z in 0..n {
                    let lhs = self.op(x, y).and_then(|xy| self.op(xy, z));
                    let rhs = self.op(y, z).and_then(|yz| self.op(x, yz));
                    if lhs != rhs {
                        return Err(Error::InvalidGroupoid(format!(
                            "associativity fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        // identity and inverses per component
        let ncomp = self.component.iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..ncomp {
            let members: Vec<usize> = (0..n).filter(|&x| self.component[x] == c).collect();
            let e = members.iter().copied().find(|&e| {
                members.iter().all(|&x| self.op(e, x) == Some(x))
            });
            let Some(e) = e else {
                return Err(Error::InvalidGroupoid(format!("component {c} has no identity")));
            };
            for &x in &members {
                if !members.iter().any(|&y| self.op(x, y) == Some(e)) {
                    return Err(Error::InvalidGroupoid(format!("{x} has no inverse")));
                }
            }
        }
        Ok(())
    }

    pub fn cyclic(n: usize) -> Self {
        let mut table = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = Some((x + y) % n);
            }
        }
        AbelianGroupoid {
            n,
            table,
            component: vec![0; n],
        }
    }

    /// Direct product of two total abelian groups.
    pub fn direct_product(a: &AbelianGroupoid, b: &AbelianGroupoid) -> Result<Self> {
        let n = a.n * b.n;
        let mut table = vec![None; n * n];
        for x1 in 0..a.n {
            for x2 in 0..b.n {
                for y1 in 0..a.n {
                    for y2 in 0..b.n {
                        let (Some(z1), Some(z2)) = (a.op(x1, y1), b.op(x2, y2)) else {
                            return Err(Error::InvalidGroupoid(
                                "direct product needs total groups".into(),
                            ));
                        };
                        let x = x1 * b.n + x2;
                        let y = y1 * b.n + y2;
                        table[x * n + y] = Some(z1 * b.n + z2);
                    }
                }
            }
        }
        AbelianGroupoid::from_table(n, table)
    }

    pub fn klein4() -> Self {
        let z2 = AbelianGroupoid::cyclic(2);
        AbelianGroupoid::direct_product(&z2, &z2).expect("total")
    }

    /// Disjoint union, relabelling the second carrier after the first.
    pub fn disjoint_union(a: &AbelianGroupoid, b: &AbelianGroupoid) -> Self {
        let n = a.n + b.n;
        let mut table = vec![None; n * n];
        for x in 0..a.n {
            for y in 0..a.n {
                table[x * n + y] = a.op(x, y);
            }
        }
        for x in 0..b.n {
            for y in 0..b.n {
                table[(a.n + x) * n + (a.n + y)] = b.op(x, y).map(|z| a.n + z);
            }
        }
        let ac = a.component.iter().copied().max().map_or(0, |m| m + 1);
        let mut component = a.component.clone();
        component.extend(b.component.iter().map(|c| c + ac));
        AbelianGroupoid {
            n,
            table,
            component,
        }
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn op(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x * self.n + y]
    }

    pub fn components(&self) -> &[usize] {
        &self.component
    }

    /// δ = {(z,(x,y)) | x·y defined and x·y = z}: X → X⊗X.
    pub fn delta(&self) -> Relation {
        let n = self.n;
        let mut r = Relation::empty(n, n * n);
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = self.op(x, y) {
                    r.insert(z, x * n + y);
                }
            }
        }
        r
    }

    /// Rel-level classical-structure audit of δ: dagger monic,
    /// commutative, associative.
    pub fn verify_delta(&self) -> Result<(bool, bool, bool)> {
        let n = self.n;
        let delta = self.delta();
        let dagger_monic = delta.dagger().compose(&delta)? == Relation::identity(n);
        let commutative = Relation::swap(n).compose(&delta)? == delta;
        let id = Relation::identity(n);
        let assoc_l = delta.tensor(&id).compose(&delta)?;
        let assoc_r = id.tensor(&delta).compose(&delta)?;
        Ok((dagger_monic, commutative, assoc_l == assoc_r))
    }

    /// Copyability of a subset kernel: for all defined x·y,
    /// (x∈K ∧ y∈K) ⟺ x·y∈K.
    pub fn subset_copyable(&self, k: &Subset) -> bool {
        assert_eq!(k.size, self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if let Some(z) = self.op(x, y) {
                    if (k.contains(x) && k.contains(y)) != k.contains(z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Same verdict computed directly in Rel: δ∘P(k) = P(k⊗k)∘δ.
    pub fn subset_copyable_via_delta(&self, k: &Subset) -> Result<bool> {
        let delta = self.delta();
        let pk = Relation::partial_identity(k);
        let lhs = delta.compose(&pk)?;
        let rhs = pk.tensor(&pk).compose(&delta)?;
        Ok(lhs == rhs)
    }

    /// Brute force over all 2^n subsets; returns copyable masks sorted.
    /// Runs on the thread pool when the `parallel` feature is on.
    pub fn copyable_subsets(&self) -> Vec<Subset> {
        let n = self.n;
        let masks = par::filter_range(1u64 << n, |mask| {
            self.subset_copyable(&Subset { size: n, mask })
        });
        masks.into_iter().map(|mask| Subset { size: n, mask }).collect()
    }

    /// Single-threaded variant of the same enumeration, for baseline
    /// comparisons.
    pub fn copyable_subsets_seq(&self) -> Vec<Subset> {
        let n = self.n;
        let masks = par::filter_range_seq(1u64 << n, |mask| {
            self.subset_copyable(&Subset { size: n, mask })
        });
        masks.into_iter().map(|mask| Subset { size: n, mask }).collect()
    }

    /// The groupoid-congruence condition for a PER q:
    /// (x·y defined ∧ x·y ∼ z) ⟺ ∃x′,y′ [x ∼ x′, y ∼ y′, x′·y′ = z].
    pub fn per_copyable(&self, q: &Relation) -> Result<bool> {
        if !(q.src() == self.n && q.is_symmetric() && q.is_transitive()) {
            return Err(Error::NotPer);
        }
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.op(x, y).is_some_and(|xy| q.contains(xy, z));
                    let rhs = (0..n).any(|xp| {
                        q.contains(x, xp)
                            && (0..n).any(|yp| q.contains(y, yp) && self.op(xp, yp) == Some(z))
                    });
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// The same verdict via the defining equation δ∘q = (q⊗q)∘δ in Rel.
    pub fn per_copyable_via_delta(&self, q: &Relation) -> Result<bool> {
        if !(q.src() == self.n && q.is_symmetric() && q.is_transitive()) {
            return Err(Error::NotPer);
        }
        let delta = self.delta();
        let lhs = delta.compose(q)?;
        let rhs = q.tensor(q).compose(&delta)?;
        Ok(lhs == rhs)
    }
}

/// All partial equivalence relations on an n-element carrier (n ≤ 5).
pub fn all_pers(n: usize) -> Vec<Relation> {
    assert!(n <= 5, "PER enumeration is desk-scale only");
    let masks = par::filter_range(1u64 << (n * n), |mask| {
        let r = Relation::from_mask(n, mask);
        r.is_symmetric() && r.is_transitive()
    });
    masks.into_iter().map(|m| Relation::from_mask(n, m)).collect()
}

/// Single-threaded variant of the PER enumeration.
pub fn all_pers_seq(n: usize) -> Vec<Relation> {
    assert!(n <= 5, "PER enumeration is desk-scale only");
    let masks = par::filter_range_seq(1u64 << (n * n), |mask| {
        let r = Relation::from_mask(n, mask);
        r.is_symmetric() && r.is_transitive()
    });
    masks.into_iter().map(|m| Relation::from_mask(n, m)).collect()
}

// ---- JSON wire formats ----
//
// Relation: {"src":n,"dst":m,"pairs":[[x,y],...]}
// Groupoid: {"carrier":n,"table":[[entry|-1,...],...]}

#[derive(Serialize, Deserialize)]
struct RelationWire {
    src: usize,
    dst: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RelationWire {
            src: self.src,
            dst: self.dst,
            pairs: self.pairs(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = RelationWire::deserialize(deserializer)?;
        Relation::from_pairs(wire.src, wire.dst, &wire.pairs)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupoidWire {
    carrier: usize,
    table: Vec<Vec<i64>>,
}

impl Serialize for AbelianGroupoid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupoidWire {
            carrier: self.n,
            table: (0..self.n)
                .map(|x| {
                    (0..self.n)
                        .map(|y| self.op(x, y).map_or(-1, |z| z as i64))
                        .collect()
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AbelianGroupoid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = GroupoidWire::deserialize(deserializer)?;
        let n = wire.carrier;
        if wire.table.len() != n || wire.table.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("table must be carrier×carrier"));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in &wire.table {
            for &e in row {
                table.push(if e < 0 { None } else { Some(e as usize) });
            }
        }
        AbelianGroupoid::from_table(n, table).map_err(|e| D::Error::custom(e.to_string()))
    }
}
