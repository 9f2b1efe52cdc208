//! Finite permutation groups: elements, subgroups, cosets, conjugation and
//! homomorphisms defined on generators.
//!
//! Everything here is exhaustive by design: groups are stored as full element
//! lists (closure under multiplication, capped), and homomorphisms are
//! verified against the whole multiplication structure at construction time.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// Default cap on the number of elements enumerated for one group.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// A permutation of `{0..degree-1}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(GroupError::NotAPermutation { images });
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds the permutation sending `points[k]` to `points[k+1]` (cyclically).
    pub fn from_cycle(degree: usize, points: &[usize]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for (k, &p) in points.iter().enumerate() {
            let q = points[(k + 1) % points.len()];
            if p >= degree || q >= degree {
                return Err(GroupError::NotAPermutation { images });
            }
            images[p] = q;
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(a.mul(b))(x) = a(b(x))`: `b` acts first.  All juxtaposed products in
    /// this crate are read left to right with this convention.
    pub fn mul(&self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: rhs.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Perm { images }
    }

    /// Conjugate `self` by `x`: `x * self * x^-1`.
    pub fn conjugate_by(&self, x: &Perm) -> Perm {
        x.mul(self).mul(&x.inverse())
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.mul(self);
            n += 1;
        }
        n
    }
}

/// A finite group of permutations with a cached, canonically ordered element
/// list.  Canonical element order is lexicographic on image arrays; all coset
/// representatives and search tie-breaks derive from it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
        }
    }

    /// Closes the generator set under multiplication.  Fails with
    /// `CapExceeded` if more than `cap` elements appear.
    pub fn generated(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let elements = close_under_product(degree, &generators, cap)?;
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn generated_default_cap(degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        Self::generated(degree, generators, DEFAULT_ELEMENT_CAP)
    }

    /// Wraps an explicit element list as a group, verifying closure.
    pub fn from_elements(degree: usize, elements: Vec<Perm>) -> Result<Self, GroupError> {
        let set: BTreeSet<Perm> = elements.into_iter().collect();
        if !set.contains(&Perm::identity(degree)) {
            return Err(GroupError::NotClosed);
        }
        for a in &set {
            if a.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: a.degree(),
                });
            }
            if !set.contains(&a.inverse()) {
                return Err(GroupError::NotClosed);
            }
            for b in &set {
                if !set.contains(&a.mul(b)) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        let generators: Vec<Perm> = set.iter().filter(|p| !p.is_identity()).cloned().collect();
        Ok(PermGroup {
            degree,
            generators,
            elements: set.into_iter().collect(),
        })
    }

    /// The full symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycle(degree, &[0, 1]).unwrap());
            gens.push(Perm::from_cycle(degree, &(0..degree).collect::<Vec<_>>()).unwrap());
        }
        PermGroup::generated(degree, gens, factorial_capped(degree)).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in canonical (lexicographic) order.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Elements in breadth-first order over generator words (identity first,
    /// then words of length 1 in generator order, and so on).  This is the
    /// deterministic search order used whenever "the first element such
    /// that..." is required.
    pub fn bfs_order(&self) -> Vec<Perm> {
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        let mut out = Vec::with_capacity(self.order());
        let mut queue = VecDeque::new();
        let id = self.identity();
        seen.insert(id.clone());
        out.push(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.mul(&g);
                if seen.insert(h.clone()) {
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        debug_assert_eq!(out.len(), self.order());
        out
    }

    /// Checks that `candidate` is a subgroup: a subset closed under product
    /// and inverse, containing the identity.
    pub fn is_subgroup(&self, candidate: &[Perm]) -> bool {
        let set: BTreeSet<&Perm> = candidate.iter().collect();
        if !set.contains(&self.identity()) {
            return false;
        }
        for a in &set {
            if !self.contains(a) || !set.contains(&a.inverse()) {
                return false;
            }
            for b in &set {
                if !set.contains(&a.mul(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Left cosets `gH` of the subgroup with the given elements, as a
    /// partition of this group.  Each coset is sorted; the representative is
    /// its lexicographically least element; cosets are ordered by
    /// representative.
    pub fn left_cosets(&self, subgroup: &[Perm]) -> Result<Vec<Vec<Perm>>, GroupError> {
        if !self.is_subgroup(subgroup) {
            return Err(GroupError::NotSubgroup);
        }
        let sub: Vec<Perm> = subgroup.to_vec();
        let mut assigned: BTreeSet<Perm> = BTreeSet::new();
        let mut cosets = Vec::new();
        for g in &self.elements {
            if assigned.contains(g) {
                continue;
            }
            let mut coset: Vec<Perm> = sub.iter().map(|h| g.mul(h)).collect();
            coset.sort();
            for x in &coset {
                assigned.insert(x.clone());
            }
            cosets.push(coset);
        }
        cosets.sort_by(|a, b| a[0].cmp(&b[0]));
        Ok(cosets)
    }

    /// Canonical representative of the left coset `p * subgroup`.
    pub fn coset_rep(p: &Perm, subgroup: &[Perm]) -> Perm {
        subgroup
            .iter()
            .map(|h| p.mul(h))
            .min()
            .expect("subgroup is nonempty")
    }

    pub fn is_normal(&self, subgroup: &[Perm]) -> Result<bool, GroupError> {
        if !self.is_subgroup(subgroup) {
            return Err(GroupError::NotSubgroup);
        }
        let set: BTreeSet<&Perm> = subgroup.iter().collect();
        for g in &self.elements {
            for h in subgroup {
                if !set.contains(&h.conjugate_by(g)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The subgroup `x * H * x^-1`, sorted canonically.
    pub fn conjugate_subgroup(subgroup: &[Perm], x: &Perm) -> Vec<Perm> {
        let mut out: Vec<Perm> = subgroup.iter().map(|h| h.conjugate_by(x)).collect();
        out.sort();
        out
    }

    /// All subgroups, as sorted element lists in canonical order.  Exhaustive
    /// closure over single-element extensions, pruned by Lagrange.
    pub fn all_subgroups(&self) -> Vec<Vec<Perm>> {
        let order = self.order();
        let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
        let trivial = vec![self.identity()];
        let mut queue = VecDeque::new();
        found.insert(trivial.clone());
        queue.push_back(trivial);
        while let Some(h) = queue.pop_front() {
            for g in &self.elements {
                if h.binary_search(g).is_ok() {
                    continue;
                }
                let mut gens: Vec<Perm> = h.iter().filter(|p| !p.is_identity()).cloned().collect();
                gens.push(g.clone());
                let ext = close_under_product(self.degree, &gens, order)
                    .expect("subgroup closure stays within the parent group");
                if !order.is_multiple_of(ext.len()) {
                    // cannot happen for genuine subgroups; keep as a guard
                    continue;
                }
                if found.insert(ext.clone()) {
                    queue.push_back(ext);
                }
            }
        }
        found.into_iter().collect()
    }

    /// The subgroup of elements fixing the given predicate-selected behaviour
    /// is not expressible generically; this helper just filters elements.
    pub fn filter_elements<F: Fn(&Perm) -> bool>(&self, keep: F) -> Vec<Perm> {
        self.elements.iter().filter(|p| keep(p)).cloned().collect()
    }

    /// Intersection of this group's elements with another sorted element list.
    pub fn intersect(a: &[Perm], b: &[Perm]) -> Vec<Perm> {
        let set: BTreeSet<&Perm> = b.iter().collect();
        a.iter().filter(|p| set.contains(p)).cloned().collect()
    }
}

fn factorial_capped(n: usize) -> usize {
    let mut f: usize = 1;
    for k in 2..=n {
        f = f.saturating_mul(k);
        if f > DEFAULT_ELEMENT_CAP {
            return f;
        }
    }
    f
}

/// Closure of a generator set under multiplication, in canonical order.
fn close_under_product(
    degree: usize,
    generators: &[Perm],
    cap: usize,
) -> Result<Vec<Perm>, GroupError> {
    let mut set: BTreeSet<Perm> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(degree);
    set.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = s.mul(&g);
            if set.insert(h.clone()) {
                if set.len() > cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                queue.push_back(h);
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// A homomorphism between permutation groups, defined by generator images and
/// validated on the whole source group at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    source: PermGroup,
    target: PermGroup,
    map: BTreeMap<Perm, Perm>,
    injective: bool,
}

impl GroupHom {
    /// Builds the homomorphism sending `source.generators()[k]` to
    /// `images[k]`.  Fails with `NotWellDefined` if no homomorphism does so,
    /// or if some image falls outside the target.
    pub fn from_generator_images(
        source: &PermGroup,
        target: &PermGroup,
        images: &[Perm],
    ) -> Result<Self, GroupError> {
        if images.len() != source.generators().len() {
            return Err(GroupError::GeneratorCountMismatch {
                expected: source.generators().len(),
                found: images.len(),
            });
        }
        for im in images {
            if !target.contains(im) {
                return Err(GroupError::ImageOutsideTarget);
            }
        }
        // Build the full element map by breadth-first extension, then check
        // consistency over every (generator, element) product.  Together with
        // f(1) = 1 this pins down f(xy) = f(x)f(y) for all pairs.
        let mut map: BTreeMap<Perm, Perm> = BTreeMap::new();
        map.insert(source.identity(), target.identity());
        let mut queue = VecDeque::new();
        queue.push_back(source.identity());
        while let Some(g) = queue.pop_front() {
            let fg = map[&g].clone();
            for (s, fs) in source.generators().iter().zip(images.iter()) {
                let h = s.mul(&g);
                let fh = fs.mul(&fg);
                match map.get(&h) {
                    None => {
                        map.insert(h.clone(), fh);
                        queue.push_back(h);
                    }
                    Some(existing) => {
                        if *existing != fh {
                            return Err(GroupError::NotWellDefined);
                        }
                    }
                }
            }
        }
        let image_set: BTreeSet<&Perm> = map.values().collect();
        let injective = image_set.len() == source.order();
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            map,
            injective,
        })
    }

    /// The hom determined by an explicit function on all elements.  The map is
    /// verified to be multiplicative over every (generator, element) pair.
    pub fn from_full_map<F: Fn(&Perm) -> Perm>(
        source: &PermGroup,
        target: &PermGroup,
        f: F,
    ) -> Result<Self, GroupError> {
        let images: Vec<Perm> = source.generators().iter().map(&f).collect();
        let hom = Self::from_generator_images(source, target, &images)?;
        // the explicit function must agree with the generated hom
        for g in source.elements() {
            if hom.apply(g) != f(g) {
                return Err(GroupError::NotWellDefined);
            }
        }
        Ok(hom)
    }

    /// Identity hom of a group onto itself.
    pub fn identity(group: &PermGroup) -> Self {
        Self::from_full_map(group, group, |g| g.clone()).expect("identity is a homomorphism")
    }

    /// Inclusion of a subgroup (same degree) into a supergroup.
    pub fn inclusion(sub: &PermGroup, sup: &PermGroup) -> Result<Self, GroupError> {
        Self::from_full_map(sub, sup, |g| g.clone())
    }

    /// Conjugation `g -> x g x^-1` as a hom from `source` into `target`.
    pub fn conjugation(
        source: &PermGroup,
        target: &PermGroup,
        x: &Perm,
    ) -> Result<Self, GroupError> {
        Self::from_full_map(source, target, |g| g.conjugate_by(x))
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn apply(&self, g: &Perm) -> Perm {
        self.map[g].clone()
    }

    /// Image of the whole source, sorted.
    pub fn image_elements(&self) -> Vec<Perm> {
        let set: BTreeSet<Perm> = self.map.values().cloned().collect();
        set.into_iter().collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_elements().len() == self.target.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.injective && self.is_surjective()
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, GroupError> {
        GroupHom::from_full_map(inner.source(), self.target(), |g| {
            self.apply(&inner.apply(g))
        })
    }

    /// Inverse of a bijective hom.
    pub fn inverse(&self) -> Result<GroupHom, GroupError> {
        if !self.is_bijective() {
            return Err(GroupError::NotBijective);
        }
        let inv: BTreeMap<Perm, Perm> = self
            .map
            .iter()
            .map(|(k, v)| (v.clone(), k.clone()))
            .collect();
        GroupHom::from_full_map(&self.target, &self.source, |g| inv[g].clone())
    }
}
