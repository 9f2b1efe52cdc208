//! Complexes of groups over scwols: local groups, injective edge
//! homomorphisms and twisting elements, their morphisms, homotopies,
//! composition, and the covering predicate with sheet count.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::error::CogError;
use crate::perm::{GroupHom, Perm, PermGroup};
use crate::report::ValidationReport;
use crate::scwol::{Scwol, ScwolMorphism};

/// A complex of groups `(G_sigma, psi_a, g_{a,b})` over a scwol.
///
/// Axioms:
///   (i)  `Ad(g_{a,b}) . psi_{ab} = psi_a . psi_b` over composable pairs;
///   (ii) `psi_a(g_{b,c}) g_{a,bc} = g_{a,b} g_{ab,c}` over composable
///        triples.
#[derive(Clone, Debug)]
pub struct ComplexOfGroups {
    base: Scwol,
    local: BTreeMap<String, PermGroup>,
    edge_homs: BTreeMap<String, GroupHom>,
    twists: BTreeMap<(String, String), Perm>,
}

impl ComplexOfGroups {
    pub fn new(
        base: Scwol,
        local: BTreeMap<String, PermGroup>,
        edge_homs: BTreeMap<String, GroupHom>,
        twists: BTreeMap<(String, String), Perm>,
    ) -> Result<Self, CogError> {
        for v in &base.vertices {
            if !local.contains_key(v) {
                return Err(CogError::MissingLocalGroup(v.clone()));
            }
        }
        for a in base.edges.keys() {
            let hom = edge_homs
                .get(a)
                .ok_or_else(|| CogError::MissingEdgeHom(a.clone()))?;
            if !hom.is_injective() {
                return Err(CogError::EdgeHomNotInjective(a.clone()));
            }
        }
        for ((a, b), g) in &twists {
            let t = base.terminal(a).to_string();
            if !local[&t].contains(g) {
                return Err(CogError::TwistOutsideGroup(a.clone(), b.clone()));
            }
        }
        Ok(ComplexOfGroups {
            base,
            local,
            edge_homs,
            twists,
        })
    }

    /// A simple complex of groups: identity edge maps wherever the groups
    /// coincide (otherwise inclusion-style maps must exist), identity
    /// twists.  Local groups must make every `psi_a` an inclusion of element
    /// sets.
    pub fn simple(base: Scwol, local: BTreeMap<String, PermGroup>) -> Result<Self, CogError> {
        let mut edge_homs = BTreeMap::new();
        for (id, e) in &base.edges {
            let src = &local[&e.i];
            let tgt = &local[&e.t];
            let hom = if src.is_trivial() {
                GroupHom::from_generator_images(src, tgt, &[])?
            } else {
                GroupHom::inclusion(src, tgt)?
            };
            edge_homs.insert(id.clone(), hom);
        }
        ComplexOfGroups::new(base, local, edge_homs, BTreeMap::new())
    }

    /// Trivial groups everywhere.
    pub fn trivial_over(base: Scwol) -> Self {
        let local: BTreeMap<String, PermGroup> = base
            .vertices
            .iter()
            .map(|v| (v.clone(), PermGroup::trivial(1)))
            .collect();
        ComplexOfGroups::simple(base, local).expect("trivial groups always include")
    }

    pub fn base(&self) -> &Scwol {
        &self.base
    }

    pub fn local_group(&self, vertex: &str) -> &PermGroup {
        &self.local[vertex]
    }

    pub fn local_groups(&self) -> &BTreeMap<String, PermGroup> {
        &self.local
    }

    pub fn edge_hom(&self, edge: &str) -> &GroupHom {
        &self.edge_homs[edge]
    }

    /// The twisting element for a composable pair (identity by default, so
    /// hand-entered simple complexes need not list them).
    pub fn twist(&self, a: &str, b: &str) -> Perm {
        self.twists
            .get(&(a.to_string(), b.to_string()))
            .cloned()
            .unwrap_or_else(|| self.local[self.base.terminal(a)].identity())
    }

    /// Returns a copy with one twist replaced (used by mutation tests).
    pub fn with_twist(&self, a: &str, b: &str, g: Perm) -> ComplexOfGroups {
        let mut twists = self.twists.clone();
        twists.insert((a.to_string(), b.to_string()), g);
        ComplexOfGroups {
            base: self.base.clone(),
            local: self.local.clone(),
            edge_homs: self.edge_homs.clone(),
            twists,
        }
    }

    /// Exhaustive check of the two axioms; witnesses reported.  Axiom (i) is
    /// checked on generators of each `G_{i(b)}`, which suffices since both
    /// sides are homomorphisms.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for ((a, b), _) in self
            .base
            .compositions
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect::<Vec<_>>()
        {
            let ab = self.base.compose(&a, &b).unwrap().clone();
            let g_ab = self.twist(&a, &b);
            let psi_a = &self.edge_homs[&a];
            let psi_b = &self.edge_homs[&b];
            let psi_comp = &self.edge_homs[&ab];
            let src = self.local_group(self.base.initial(&b));
            for x in src.generators().iter().chain([src.identity()].iter()) {
                let lhs = psi_comp.apply(x).conjugate_by(&g_ab);
                let rhs = psi_a.apply(&psi_b.apply(x));
                if lhs != rhs {
                    report.fail(format!(
                        "axiom (i) fails at pair ({a}, {b}) on element {:?}",
                        x.images()
                    ));
                }
            }
        }
        for triple in self.composable_triples() {
            let (a, b, c) = (&triple[0], &triple[1], &triple[2]);
            let ab = self.base.compose(a, b).unwrap().clone();
            let bc = self.base.compose(b, c).unwrap().clone();
            let lhs = self.edge_homs[a]
                .apply(&self.twist(b, c))
                .mul(&self.twist(a, &bc));
            let rhs = self.twist(a, b).mul(&self.twist(&ab, c));
            if lhs != rhs {
                report.fail(format!("axiom (ii) fails at triple ({a}, {b}, {c})"));
            }
        }
        report
    }

    fn composable_triples(&self) -> Vec<[String; 3]> {
        self.base
            .chains(3)
            .into_iter()
            .map(|c| [c.edges[0].clone(), c.edges[1].clone(), c.edges[2].clone()])
            .collect()
    }

    /// Structural equality through an identification of local groups: `phi`
    /// gives, per vertex, an isomorphism onto the other complex's local
    /// group, and the edge maps and twists must correspond.  The base scwols
    /// must be equal.
    pub fn equal_via(
        &self,
        other: &ComplexOfGroups,
        phi: &BTreeMap<String, GroupHom>,
    ) -> Result<(), String> {
        if self.base != other.base {
            return Err("base scwols differ".to_string());
        }
        for v in &self.base.vertices {
            let f = phi
                .get(v)
                .ok_or_else(|| format!("no identification at {v}"))?;
            if !f.is_bijective() {
                return Err(format!("identification at {v} is not bijective"));
            }
            if f.target() != other.local_group(v) {
                return Err(format!("identification at {v} has the wrong target"));
            }
        }
        for (id, e) in &self.base.edges {
            let f_i = &phi[&e.i];
            let f_t = &phi[&e.t];
            let psi = &self.edge_homs[id];
            let psi_o = &other.edge_homs[id];
            for g in self.local_group(&e.i).elements() {
                if f_t.apply(&psi.apply(g)) != psi_o.apply(&f_i.apply(g)) {
                    return Err(format!("edge map at {id} does not correspond"));
                }
            }
        }
        for (a, b) in self.base.compositions.keys() {
            let t = self.base.terminal(a);
            if phi[t].apply(&self.twist(a, b)) != other.twist(a, b) {
                return Err(format!("twist at ({a}, {b}) does not correspond"));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Morphisms of complexes of groups
// ---------------------------------------------------------------------------

/// A morphism `(phi_sigma, phi(a))` of complexes of groups over a scwol
/// morphism `l`.
///
/// Axioms:
///   (i)  `Ad(phi(a)) . psi_{l(a)} . phi_{i(a)} = phi_{t(a)} . psi_a`;
///   (ii) `phi_{t(a)}(g_{a,b}) phi(ab) = phi(a) psi_{l(a)}(phi(b)) g_{l(a),l(b)}`.
#[derive(Clone, Debug)]
pub struct CogMorphism {
    pub source: ComplexOfGroups,
    pub target: ComplexOfGroups,
    pub l: ScwolMorphism,
    pub local_maps: BTreeMap<String, GroupHom>,
    pub edge_elements: BTreeMap<String, Perm>,
}

impl CogMorphism {
    pub fn new(
        source: ComplexOfGroups,
        target: ComplexOfGroups,
        l: ScwolMorphism,
        local_maps: BTreeMap<String, GroupHom>,
        edge_elements: BTreeMap<String, Perm>,
    ) -> Result<Self, CogError> {
        if l.source != *source.base() || l.target != *target.base() {
            return Err(CogError::Mismatch(
                "underlying scwol morphism does not connect the two bases".into(),
            ));
        }
        for v in &source.base().vertices {
            let f = local_maps
                .get(v)
                .ok_or_else(|| CogError::MissingLocalGroup(v.clone()))?;
            if f.source() != source.local_group(v)
                || f.target() != target.local_group(l.vertex_image(v))
            {
                return Err(CogError::Mismatch(format!(
                    "local map at {v} has wrong source or target"
                )));
            }
        }
        for a in source.base().edges.keys() {
            let e = edge_elements
                .get(a)
                .ok_or_else(|| CogError::MissingEdgeHom(a.clone()))?;
            let t_la = target.base().terminal(l.edge_image(a)).to_string();
            if !target.local_group(&t_la).contains(e) {
                return Err(CogError::Mismatch(format!(
                    "edge element at {a} lies outside the local group at {t_la}"
                )));
            }
        }
        Ok(CogMorphism {
            source,
            target,
            l,
            local_maps,
            edge_elements,
        })
    }

    pub fn identity(cog: &ComplexOfGroups) -> Self {
        CogMorphism {
            source: cog.clone(),
            target: cog.clone(),
            l: ScwolMorphism::identity(cog.base()),
            local_maps: cog
                .base()
                .vertices
                .iter()
                .map(|v| (v.clone(), GroupHom::identity(cog.local_group(v))))
                .collect(),
            edge_elements: cog
                .base()
                .edges
                .keys()
                .map(|a| {
                    (
                        a.clone(),
                        cog.local_group(cog.base().terminal(a)).identity(),
                    )
                })
                .collect(),
        }
    }

    pub fn local_map(&self, vertex: &str) -> &GroupHom {
        &self.local_maps[vertex]
    }

    pub fn edge_element(&self, edge: &str) -> &Perm {
        &self.edge_elements[edge]
    }

    /// Exhaustive check of the morphism axioms, with witnesses.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.merge_scwol(&self.l);
        for (id, e) in &self.source.base().edges {
            let la = self.l.edge_image(id);
            let phi_a = &self.edge_elements[id];
            let psi_la = self.target.edge_hom(la);
            let phi_i = &self.local_maps[&e.i];
            let phi_t = &self.local_maps[&e.t];
            let psi_a = self.source.edge_hom(id);
            for g in self.source.local_group(&e.i).elements() {
                let lhs = psi_la.apply(&phi_i.apply(g)).conjugate_by(phi_a);
                let rhs = phi_t.apply(&psi_a.apply(g));
                if lhs != rhs {
                    report.fail(format!(
                        "morphism axiom (i) fails at edge {id} on {:?}",
                        g.images()
                    ));
                }
            }
        }
        for ((a, b), ab) in &self.source.base().compositions {
            let la = self.l.edge_image(a).to_string();
            let lb = self.l.edge_image(b).to_string();
            let t_a = self.source.base().terminal(a);
            let lhs = self.local_maps[t_a]
                .apply(&self.source.twist(a, b))
                .mul(&self.edge_elements[ab]);
            let rhs = self.edge_elements[a]
                .mul(&self.target.edge_hom(&la).apply(&self.edge_elements[b]))
                .mul(&self.target.twist(&la, &lb));
            if lhs != rhs {
                report.fail(format!("morphism axiom (ii) fails at pair ({a}, {b})"));
            }
        }
        report
    }

    /// Composition `outer . self` over `l_outer . l_self`:
    /// `(phi' . phi)_sigma = phi'_{l(sigma)} . phi_sigma` and
    /// `(phi' . phi)(a) = phi'_{l(t(a))}(phi(a)) phi'(l(a))`.
    pub fn compose(outer: &CogMorphism, inner: &CogMorphism) -> Result<CogMorphism, CogError> {
        let l = outer.l.compose(&inner.l);
        let mut local_maps = BTreeMap::new();
        for v in &inner.source.base().vertices {
            let lv = inner.l.vertex_image(v);
            local_maps.insert(
                v.clone(),
                outer.local_maps[lv].compose(&inner.local_maps[v])?,
            );
        }
        let mut edge_elements = BTreeMap::new();
        for a in inner.source.base().edges.keys() {
            let la = inner.l.edge_image(a);
            let lt = inner.l.vertex_image(inner.source.base().terminal(a));
            let val = outer.local_maps[lt]
                .apply(&inner.edge_elements[a])
                .mul(&outer.edge_elements[la]);
            edge_elements.insert(a.clone(), val);
        }
        CogMorphism::new(
            inner.source.clone(),
            outer.target.clone(),
            l,
            local_maps,
            edge_elements,
        )
    }

    /// Whether this morphism is an isomorphism in the direct sense: the
    /// scwol morphism is bijective and every local map is bijective.
    pub fn is_isomorphism_direct(&self) -> bool {
        self.l.is_bijective()
            && self.validate().passed()
            && self.local_maps.values().all(|f| f.is_bijective())
    }

    /// Inverse of an isomorphism: `xi_{l(sigma)} = phi_sigma^-1` and
    /// `xi(l(a)) = phi_{t(a)}^-1(phi(a)^-1)`.
    pub fn inverse(&self) -> Result<CogMorphism, CogError> {
        if !self.is_isomorphism_direct() {
            return Err(CogError::Mismatch("morphism is not an isomorphism".into()));
        }
        let l_inv = self.l.inverse().expect("bijective scwol morphism inverts");
        let mut local_maps = BTreeMap::new();
        for v in &self.source.base().vertices {
            let lv = self.l.vertex_image(v).to_string();
            local_maps.insert(lv, self.local_maps[v].inverse()?);
        }
        let mut edge_elements = BTreeMap::new();
        for a in self.source.base().edges.keys() {
            let la = self.l.edge_image(a).to_string();
            let t_a = self.source.base().terminal(a);
            let val = self.local_maps[t_a]
                .inverse()?
                .apply(&self.edge_elements[a].inverse());
            edge_elements.insert(la, val);
        }
        CogMorphism::new(
            self.target.clone(),
            self.source.clone(),
            l_inv,
            local_maps,
            edge_elements,
        )
    }

    /// The coset-bijection clause of the covering definition at one source
    /// vertex: for every target edge `a'` with `t(a') = l(sigma)`, the map
    /// `g |-> phi_sigma(g) phi(a)` induces a bijection
    /// from the disjoint union of `G_sigma / psi_a(G_{i(a)})` over edges
    /// `a` in `l^-1(a')` with `t(a) = sigma`, onto
    /// `G'_{sigma'} / psi_{a'}(G'_{i(a')})`.
    pub fn coset_condition_at(&self, sigma: &str) -> bool {
        let l_sigma = self.l.vertex_image(sigma).to_string();
        for a_prime in self.target.base().edge_ids() {
            if self.target.base().terminal(&a_prime) != l_sigma {
                continue;
            }
            if !self.coset_map_bijective(sigma, &a_prime) {
                return false;
            }
        }
        true
    }

    fn coset_map_bijective(&self, sigma: &str, a_prime: &str) -> bool {
        let g_sigma = self.source.local_group(sigma);
        let phi_sigma = &self.local_maps[sigma];
        let target_vertex = self.target.base().terminal(a_prime);
        let g_target = self.target.local_group(target_vertex);
        let sub_target: Vec<Perm> = self.target.edge_hom(a_prime).image_elements();
        let want: BTreeSet<Perm> = g_target
            .left_cosets(&sub_target)
            .expect("edge hom image is a subgroup")
            .into_iter()
            .map(|c| c[0].clone())
            .collect();
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        let mut total = 0usize;
        for a in self.source.base().edge_ids() {
            if self.l.edge_image(&a) != a_prime || self.source.base().terminal(&a) != sigma {
                continue;
            }
            let sub_src: Vec<Perm> = self.source.edge_hom(&a).image_elements();
            let cosets = g_sigma
                .left_cosets(&sub_src)
                .expect("edge hom image is a subgroup");
            for coset in cosets {
                total += 1;
                // well-definedness: all members land in one target coset
                let mut reps: BTreeSet<Perm> = BTreeSet::new();
                for g in &coset {
                    let image = phi_sigma.apply(g).mul(&self.edge_elements[&a]);
                    reps.insert(PermGroup::coset_rep(&image, &sub_target));
                }
                if reps.len() != 1 {
                    return false;
                }
                seen.insert(reps.into_iter().next().unwrap());
            }
        }
        seen.len() == total && seen == want
    }

    /// Full covering check per the definition: `l` nondegenerate onto a
    /// connected base, every local map injective, and the coset condition at
    /// every source vertex.  Sheet counts are computed by both formulas
    /// (vertex fibers and edge fibers) and must agree and be constant.
    pub fn is_covering(&self) -> CoveringCheck {
        let mut witnesses = Vec::new();
        let flags = self.l.check();
        if !self.validate().passed() {
            witnesses.push("morphism axioms fail".to_string());
        }
        if !flags.valid || !flags.nondegenerate {
            witnesses.push("underlying scwol morphism is not nondegenerate".to_string());
        }
        if !self.target.base().is_connected() {
            witnesses.push("target base is not connected".to_string());
        }
        for v in &self.source.base().vertices {
            if !self.local_maps[v].is_injective() {
                witnesses.push(format!("local map at {v} is not injective"));
            }
        }
        if witnesses.is_empty() {
            for v in &self.source.base().vertices {
                if !self.coset_condition_at(v) {
                    witnesses.push(format!("coset map not bijective over vertex {v}"));
                }
            }
        }
        if !witnesses.is_empty() {
            return CoveringCheck {
                covering: false,
                sheets: None,
                witnesses,
            };
        }
        // sheet count over vertex fibers and over edge fibers
        let mut sheet_values: BTreeSet<Ratio<i64>> = BTreeSet::new();
        for sigma_p in &self.target.base().vertices {
            let order_p = self.target.local_group(sigma_p).order() as i64;
            let mut n = Ratio::new(0, 1);
            for v in &self.source.base().vertices {
                if self.l.vertex_image(v) == sigma_p {
                    n += Ratio::new(order_p, self.source.local_group(v).order() as i64);
                }
            }
            sheet_values.insert(n);
        }
        for a_p in self.target.base().edge_ids() {
            let i_p = self.target.base().initial(&a_p).to_string();
            let order_p = self.target.local_group(&i_p).order() as i64;
            let mut n = Ratio::new(0, 1);
            for a in self.source.base().edge_ids() {
                if self.l.edge_image(&a) == a_p {
                    let i_v = self.source.base().initial(&a).to_string();
                    n += Ratio::new(order_p, self.source.local_group(&i_v).order() as i64);
                }
            }
            sheet_values.insert(n);
        }
        if sheet_values.len() != 1 {
            return CoveringCheck {
                covering: false,
                sheets: None,
                witnesses: vec![format!(
                    "sheet count not constant across fibers: {sheet_values:?}"
                )],
            };
        }
        CoveringCheck {
            covering: true,
            sheets: sheet_values.into_iter().next(),
            witnesses: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoveringCheck {
    pub covering: bool,
    pub sheets: Option<Ratio<i64>>,
    pub witnesses: Vec<String>,
}

impl ValidationReport {
    fn merge_scwol(&mut self, l: &ScwolMorphism) {
        for f in l.respects_structure() {
            self.fail(f);
        }
    }
}

// ---------------------------------------------------------------------------
// Morphisms to a group
// ---------------------------------------------------------------------------

/// A morphism from a complex of groups to a group (the degenerate case of a
/// morphism whose target lives over a single vertex):
///   (i)  `Ad(phi(a)) . phi_{i(a)} = phi_{t(a)} . psi_a`;
///   (ii) `phi_{t(a)}(g_{a,b}) phi(ab) = phi(a) phi(b)`.
#[derive(Clone, Debug)]
pub struct MorphismToGroup {
    pub source: ComplexOfGroups,
    pub group: PermGroup,
    pub local_maps: BTreeMap<String, GroupHom>,
    pub edge_elements: BTreeMap<String, Perm>,
}

impl MorphismToGroup {
    pub fn new(
        source: ComplexOfGroups,
        group: PermGroup,
        local_maps: BTreeMap<String, GroupHom>,
        edge_elements: BTreeMap<String, Perm>,
    ) -> Result<Self, CogError> {
        for v in &source.base().vertices {
            let f = local_maps
                .get(v)
                .ok_or_else(|| CogError::MissingLocalGroup(v.clone()))?;
            if f.source() != source.local_group(v) || f.target() != &group {
                return Err(CogError::Mismatch(format!(
                    "local map at {v} has wrong source or target"
                )));
            }
        }
        for a in source.base().edges.keys() {
            let e = edge_elements
                .get(a)
                .ok_or_else(|| CogError::MissingEdgeHom(a.clone()))?;
            if !group.contains(e) {
                return Err(CogError::Mismatch(format!(
                    "edge element at {a} lies outside the group"
                )));
            }
        }
        Ok(MorphismToGroup {
            source,
            group,
            local_maps,
            edge_elements,
        })
    }

    pub fn local_map(&self, vertex: &str) -> &GroupHom {
        &self.local_maps[vertex]
    }

    pub fn edge_element(&self, edge: &str) -> &Perm {
        &self.edge_elements[edge]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (id, e) in &self.source.base().edges {
            let phi_a = &self.edge_elements[id];
            let psi_a = self.source.edge_hom(id);
            for g in self.source.local_group(&e.i).elements() {
                let lhs = self.local_maps[&e.i].apply(g).conjugate_by(phi_a);
                let rhs = self.local_maps[&e.t].apply(&psi_a.apply(g));
                if lhs != rhs {
                    report.fail(format!("axiom (i) fails at edge {id} on {:?}", g.images()));
                }
            }
        }
        for ((a, b), ab) in &self.source.base().compositions {
            let t_a = self.source.base().terminal(a);
            let lhs = self.local_maps[t_a]
                .apply(&self.source.twist(a, b))
                .mul(&self.edge_elements[ab]);
            let rhs = self.edge_elements[a].mul(&self.edge_elements[b]);
            if lhs != rhs {
                report.fail(format!("axiom (ii) fails at pair ({a}, {b})"));
            }
        }
        report
    }

    pub fn injective_on_local_groups(&self) -> bool {
        self.local_maps.values().all(|f| f.is_injective())
    }

    /// First vertex whose local map is not injective, if any.
    pub fn non_injective_vertex(&self) -> Option<String> {
        self.source
            .base()
            .vertices
            .iter()
            .find(|v| !self.local_maps[*v].is_injective())
            .cloned()
    }

    /// Precomposition with a morphism of complexes of groups:
    /// `(phi . lambda)_sigma = phi_{l(sigma)} . lambda_sigma` and
    /// `(phi . lambda)(a) = phi_{l(t(a))}(lambda(a)) phi(l(a))`.
    pub fn precompose(&self, lambda: &CogMorphism) -> Result<MorphismToGroup, CogError> {
        let mut local_maps = BTreeMap::new();
        for v in &lambda.source.base().vertices {
            let lv = lambda.l.vertex_image(v);
            local_maps.insert(
                v.clone(),
                self.local_maps[lv].compose(&lambda.local_maps[v])?,
            );
        }
        let mut edge_elements = BTreeMap::new();
        for a in lambda.source.base().edges.keys() {
            let la = lambda.l.edge_image(a);
            let lt = lambda.l.vertex_image(lambda.source.base().terminal(a));
            edge_elements.insert(
                a.clone(),
                self.local_maps[lt]
                    .apply(&lambda.edge_elements[a])
                    .mul(&self.edge_elements[la]),
            );
        }
        MorphismToGroup::new(
            lambda.source.clone(),
            self.group.clone(),
            local_maps,
            edge_elements,
        )
    }
}

/// Is `k` a homotopy from `phi` to `phi_prime` (both morphisms to the same
/// group)?  Requires `phi'_sigma = Ad(k_sigma) phi_sigma` and
/// `phi'(a) = k_{t(a)} phi(a) k_{i(a)}^-1`.
pub fn check_homotopy(
    phi: &MorphismToGroup,
    phi_prime: &MorphismToGroup,
    k: &BTreeMap<String, Perm>,
) -> bool {
    if phi.source.base() != phi_prime.source.base() || phi.group != phi_prime.group {
        return false;
    }
    for v in &phi.source.base().vertices {
        let Some(k_v) = k.get(v) else { return false };
        for g in phi.source.local_group(v).elements() {
            if phi_prime.local_maps[v].apply(g) != phi.local_maps[v].apply(g).conjugate_by(k_v) {
                return false;
            }
        }
    }
    for (id, e) in &phi.source.base().edges {
        let expected = k[&e.t].mul(&phi.edge_elements[id]).mul(&k[&e.i].inverse());
        if phi_prime.edge_elements[id] != expected {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::perm::Perm;

    #[test]
    fn trivial_complexes_validate() {
        for s in [fixtures::seg(), fixtures::tri(), fixtures::tet()] {
            let cog = ComplexOfGroups::trivial_over(s);
            assert!(cog.validate().passed());
        }
        assert!(fixtures::d3seg().validate().passed());
        assert!(fixtures::z2_tet().validate().passed());
    }

    #[test]
    fn twist_mutation_detected_with_witness() {
        let cog = fixtures::z2_tet();
        let (a, b) = cog.base().compositions.keys().next().unwrap().clone();
        let flipped = Perm::from_cycle(2, &[0, 1]).unwrap();
        let mutated = cog.with_twist(&a, &b, flipped);
        let report = mutated.validate();
        assert!(!report.passed());
        assert!(report
            .failures()
            .iter()
            .any(|f| f.contains("axiom (ii)") && f.contains("triple")));
    }

    #[test]
    fn identity_morphism_and_covering() {
        let cog = fixtures::d3seg();
        let id = CogMorphism::identity(&cog);
        assert!(id.validate().passed());
        let check = id.is_covering();
        assert!(check.covering);
        assert_eq!(check.sheets, Some(num_rational::Ratio::new(1, 1)));
    }

    #[test]
    fn identity_homotopy() {
        let cog = fixtures::d3seg();
        // morphism to S3 with inclusions
        let phi = fixtures_d3seg_to_s3();
        assert!(phi.validate().passed());
        let k: BTreeMap<String, Perm> = cog
            .base()
            .vertices
            .iter()
            .map(|v| (v.clone(), Perm::identity(3)))
            .collect();
        assert!(check_homotopy(&phi, &phi, &k));
        let mut wrong = k.clone();
        wrong.insert("v1".to_string(), Perm::from_cycle(3, &[0, 1]).unwrap());
        assert!(!check_homotopy(&phi, &phi, &wrong));
    }

    /// The inclusion morphism from the d3seg complex into S3 sending the two
    /// vertex involutions to adjacent transpositions.
    pub fn fixtures_d3seg_to_s3() -> MorphismToGroup {
        let cog = fixtures::d3seg();
        let s3 = PermGroup::symmetric(3);
        let mut local_maps = BTreeMap::new();
        local_maps.insert(
            "v1".to_string(),
            GroupHom::from_generator_images(
                cog.local_group("v1"),
                &s3,
                &[Perm::from_cycle(3, &[0, 1]).unwrap()],
            )
            .unwrap(),
        );
        local_maps.insert(
            "v2".to_string(),
            GroupHom::from_generator_images(
                cog.local_group("v2"),
                &s3,
                &[Perm::from_cycle(3, &[1, 2]).unwrap()],
            )
            .unwrap(),
        );
        local_maps.insert(
            "e".to_string(),
            GroupHom::from_generator_images(cog.local_group("e"), &s3, &[]).unwrap(),
        );
        let edge_elements: BTreeMap<String, Perm> = cog
            .base()
            .edges
            .keys()
            .map(|a| (a.clone(), Perm::identity(3)))
            .collect();
        MorphismToGroup::new(cog, s3, local_maps, edge_elements).unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let cog = fixtures::d3seg();
        let id = CogMorphism::identity(&cog);
        let c = CogMorphism::compose(&id, &id).unwrap();
        assert!(c.validate().passed());
        assert!(c.is_isomorphism_direct());
    }
}
