//! Developments of complexes of groups, the group action on them, universal
//! covers in the finite case, local stars, faithfulness kernels, and
//! developability certificates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::action::{self, ChoiceData, ScwolAction};
use crate::cog::{CogMorphism, ComplexOfGroups, MorphismToGroup};
use crate::error::DevError;
use crate::fp::{self, GenLabel, Presentation, SimplifiedPresentation, Word};
use crate::perm::{GroupHom, Perm, PermGroup};
use crate::scwol::{Chain, Scwol, ScwolMorphism};

fn perm_token(p: &Perm) -> String {
    p.images()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

fn dev_id(rep: &Perm, base: &str) -> String {
    format!("[{}]{}", perm_token(rep), base)
}

/// The development of a complex of groups with respect to a morphism to a
/// group: vertices `([g], sigma)` over cosets of the local images, edges
/// `([g], a)` with `t([g], a) = ([g phi(a)^-1], t(a))`, carrying the left
/// action of the group.
#[derive(Clone, Debug)]
pub struct Development {
    pub scwol: Scwol,
    pub action: ScwolAction,
    pub projection: ScwolMorphism,
    pub morphism: MorphismToGroup,
    /// dev vertex id -> (coset representative, base vertex)
    pub vertex_info: BTreeMap<String, (Perm, String)>,
    /// dev edge id -> (coset representative, base edge)
    pub edge_info: BTreeMap<String, (Perm, String)>,
    /// base vertex -> subgroup elements of the local image
    vertex_subgroups: BTreeMap<String, Vec<Perm>>,
}

impl Development {
    /// The dev vertex containing `(g, sigma)` after coset reduction.
    pub fn vertex_of(&self, g: &Perm, sigma: &str) -> String {
        let rep = PermGroup::coset_rep(g, &self.vertex_subgroups[sigma]);
        dev_id(&rep, sigma)
    }

    /// The dev edge containing `(g, a)` after coset reduction (cosets taken
    /// at the initial vertex of `a`).
    pub fn edge_of(&self, g: &Perm, a: &str) -> String {
        let i_v = self.morphism.source.base().initial(a);
        let rep = PermGroup::coset_rep(g, &self.vertex_subgroups[i_v]);
        dev_id(&rep, a)
    }

    pub fn base(&self) -> &Scwol {
        self.morphism.source.base()
    }

    pub fn group(&self) -> &PermGroup {
        &self.morphism.group
    }
}

/// Builds the development `D(Y, phi)`.  Injectivity on local groups is not
/// required; callers that need it check the flag themselves.
pub fn develop(phi: &MorphismToGroup) -> Result<Development, DevError> {
    let report = phi.validate();
    if !report.passed() {
        return Err(DevError::BadMorphism(report.failures()[0].clone()));
    }
    let base = phi.source.base().clone();
    let group = phi.group.clone();
    let mut vertex_subgroups: BTreeMap<String, Vec<Perm>> = BTreeMap::new();
    for v in &base.vertices {
        vertex_subgroups.insert(v.clone(), phi.local_map(v).image_elements());
    }
    let mut vertices = Vec::new();
    let mut vertex_info = BTreeMap::new();
    for v in &base.vertices {
        for coset in group.left_cosets(&vertex_subgroups[v])? {
            let id = dev_id(&coset[0], v);
            vertices.push(id.clone());
            vertex_info.insert(id, (coset[0].clone(), v.clone()));
        }
    }
    let mut edges = Vec::new();
    let mut edge_info = BTreeMap::new();
    for (a, e) in &base.edges {
        let sub_i = &vertex_subgroups[&e.i];
        for coset in group.left_cosets(sub_i)? {
            let g = coset[0].clone();
            let id = dev_id(&g, a);
            let i_id = dev_id(&g, &e.i);
            let t_rep = PermGroup::coset_rep(
                &g.mul(&phi.edge_element(a).inverse()),
                &vertex_subgroups[&e.t],
            );
            let t_id = dev_id(&t_rep, &e.t);
            edges.push((id.clone(), i_id, t_id));
            edge_info.insert(id, (g, a.clone()));
        }
    }
    // composition ([g], a)([h], b) = ([h], ab), defined exactly when
    // g^-1 h phi(b)^-1 lies in the image at i(a)
    let mut comps = Vec::new();
    for ((a, b), ab) in &base.compositions {
        let sub_ia: BTreeSet<&Perm> = vertex_subgroups[base.initial(a)].iter().collect();
        for (ea, (g, abase)) in &edge_info {
            if abase != a {
                continue;
            }
            for (eb, (h, bbase)) in &edge_info {
                if bbase != b {
                    continue;
                }
                let d = g.inverse().mul(h).mul(&phi.edge_element(b).inverse());
                if sub_ia.contains(&d) {
                    let e_ab = dev_id(
                        &PermGroup::coset_rep(h, &vertex_subgroups[base.initial(ab)]),
                        ab,
                    );
                    comps.push((ea.clone(), eb.clone(), e_ab));
                }
            }
        }
    }
    let scwol = Scwol::new(vertices, edges, comps).map_err(crate::error::CogError::Scwol)?;
    debug_assert!(scwol.validate().passed());
    // the action by left multiplication, one automorphism per generator
    let mut gen_vmaps = Vec::new();
    let mut gen_emaps = Vec::new();
    for u in group.generators() {
        let mut vmap = BTreeMap::new();
        for (id, (g, v)) in &vertex_info {
            let rep = PermGroup::coset_rep(&u.mul(g), &vertex_subgroups[v]);
            vmap.insert(id.clone(), dev_id(&rep, v));
        }
        let mut emap = BTreeMap::new();
        for (id, (g, a)) in &edge_info {
            let rep = PermGroup::coset_rep(&u.mul(g), &vertex_subgroups[base.initial(a)]);
            emap.insert(id.clone(), dev_id(&rep, a));
        }
        gen_vmaps.push(vmap);
        gen_emaps.push(emap);
    }
    let action = ScwolAction::from_generator_maps(scwol.clone(), group, gen_vmaps, gen_emaps)?;
    let projection = ScwolMorphism {
        source: scwol,
        target: base,
        vertex_map: vertex_info
            .iter()
            .map(|(id, (_, v))| (id.clone(), v.clone()))
            .collect(),
        edge_map: edge_info
            .iter()
            .map(|(id, (_, a))| (id.clone(), a.clone()))
            .collect(),
    };
    Ok(Development {
        scwol: projection.source.clone(),
        action,
        projection,
        morphism: phi.clone(),
        vertex_info,
        edge_info,
        vertex_subgroups,
    })
}

// ---------------------------------------------------------------------------
// Recovering the complex from its development
// ---------------------------------------------------------------------------

/// The complex of groups induced by the group action on a development, with
/// the canonical choices (`lift = ([1], sigma)`, `h_a = phi(a)`), together
/// with the identification of the original local groups with the new
/// stabilizers.
#[derive(Clone, Debug)]
pub struct RecoveredCog {
    pub cog: ComplexOfGroups,
    /// base scwol identification: original base -> quotient of the development
    pub base_iso: ScwolMorphism,
    /// per original vertex, the isomorphism onto the recovered local group
    pub local_isos: BTreeMap<String, GroupHom>,
    pub choices: ChoiceData,
}

/// Rebuilds the complex of groups from a development (the morphism must be
/// injective on the local groups) and checks that it reproduces the input
/// complex and that the development's morphism is the canonical one.
pub fn recover_cog(dev: &Development) -> Result<RecoveredCog, DevError> {
    if let Some(v) = dev.morphism.non_injective_vertex() {
        return Err(DevError::NotInjectiveOnLocalGroups(v));
    }
    let source = &dev.morphism.source;
    let base = source.base();
    let (quotient, projection) = dev.action.quotient();
    // the quotient vertex containing ([1], sigma)
    let id = dev.group().identity();
    let mut base_vmap = BTreeMap::new();
    for v in &base.vertices {
        let lift = dev.vertex_of(&id, v);
        base_vmap.insert(v.clone(), projection.vertex_image(&lift).to_string());
    }
    let mut base_emap = BTreeMap::new();
    for a in base.edge_ids() {
        let lift = dev.edge_of(&id, &a);
        base_emap.insert(a.clone(), projection.edge_image(&lift).to_string());
    }
    let base_iso = ScwolMorphism::new(base.clone(), quotient.clone(), base_vmap, base_emap)
        .map_err(crate::error::CogError::Scwol)?;
    if !(base_iso.respects_structure().is_empty() && base_iso.is_bijective()) {
        return Err(DevError::BadMorphism(
            "development quotient is not isomorphic to the base".into(),
        ));
    }
    // canonical choices
    let mut lifts = BTreeMap::new();
    for v in &base.vertices {
        lifts.insert(base_iso.vertex_image(v).to_string(), dev.vertex_of(&id, v));
    }
    let mut h = BTreeMap::new();
    for a in base.edge_ids() {
        h.insert(
            base_iso.edge_image(&a).to_string(),
            dev.morphism.edge_element(&a).clone(),
        );
    }
    let choices = ChoiceData { lifts, h };
    let cog = action::induced_cog(&dev.action, &choices)?;
    // identification of local groups with the stabilizers of ([1], sigma)
    let mut local_isos = BTreeMap::new();
    for v in &base.vertices {
        let q_v = base_iso.vertex_image(v).to_string();
        let iso = GroupHom::from_full_map(source.local_group(v), cog.local_group(&q_v), |g| {
            dev.morphism.local_map(v).apply(g)
        })
        .map_err(crate::error::CogError::Group)?;
        if !iso.is_bijective() {
            return Err(DevError::BadMorphism(format!(
                "stabilizer at {q_v} differs from the local image"
            )));
        }
        local_isos.insert(v.clone(), iso);
    }
    // the recovered complex equals the input through the identification
    let pulled = pull_back_along(&cog, &base_iso)?;
    source
        .equal_via(&pulled, &local_isos)
        .map_err(DevError::BadMorphism)?;
    // and the development's morphism is the canonical one: edge elements are
    // the carriers of the canonical choices
    for a in base.edge_ids() {
        let qa = base_iso.edge_image(&a).to_string();
        if choices.h[&qa] != *dev.morphism.edge_element(&a) {
            return Err(DevError::BadMorphism(format!(
                "morphism differs from the canonical one at edge {a}"
            )));
        }
    }
    Ok(RecoveredCog {
        cog,
        base_iso,
        local_isos,
        choices,
    })
}

/// Transports a complex of groups along a base isomorphism
/// `f: B -> base(cog)` read backwards, so that it lives over `f`'s source.
pub fn pull_back_along(
    cog: &ComplexOfGroups,
    f: &ScwolMorphism,
) -> Result<ComplexOfGroups, DevError> {
    let b = f.source.clone();
    let local: BTreeMap<String, PermGroup> = b
        .vertices
        .iter()
        .map(|v| (v.clone(), cog.local_group(f.vertex_image(v)).clone()))
        .collect();
    let mut edge_homs = BTreeMap::new();
    for a in b.edge_ids() {
        edge_homs.insert(a.clone(), cog.edge_hom(f.edge_image(&a)).clone());
    }
    let mut twists = BTreeMap::new();
    for (a, bb) in b.compositions.keys() {
        twists.insert(
            (a.clone(), bb.clone()),
            cog.twist(f.edge_image(a), f.edge_image(bb)),
        );
    }
    ComplexOfGroups::new(b, local, edge_homs, twists).map_err(DevError::Cog)
}

/// The compatibility isomorphism `D(Y, phi_1) -> X`, `([g], alpha) |-> g .
/// lift(alpha)`, for a complex induced by an action.
pub fn phi1_compatibility(
    act: &ScwolAction,
    choices: &ChoiceData,
) -> Result<ScwolMorphism, DevError> {
    let phi1 = action::canonical_morphism(act, choices)?;
    let dev = develop(&phi1)?;
    let (_, projection) = act.quotient();
    let mut vmap = BTreeMap::new();
    for (id, (g, q_v)) in &dev.vertex_info {
        vmap.insert(id.clone(), act.act_vertex(g, &choices.lifts[q_v]));
    }
    let mut emap = BTreeMap::new();
    for (id, (g, q_a)) in &dev.edge_info {
        let lift = action::edge_lift(act, &projection, &choices.lifts, q_a)?;
        emap.insert(id.clone(), act.act_edge(g, &lift));
    }
    let m = ScwolMorphism::new(dev.scwol.clone(), act.scwol().clone(), vmap, emap)
        .map_err(crate::error::CogError::Scwol)?;
    if !(m.respects_structure().is_empty() && m.is_bijective()) {
        return Err(DevError::BadMorphism(
            "development of the canonical morphism is not isomorphic to the space".into(),
        ));
    }
    // equivariance
    for g in act.group().elements() {
        for id in dev.vertex_info.keys() {
            let moved = dev.action.act_vertex(g, id);
            if m.vertex_map[&moved] != act.act_vertex(g, &m.vertex_map[id]) {
                return Err(DevError::BadMorphism(format!(
                    "compatibility map is not equivariant at {id}"
                )));
            }
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Universal covers
// ---------------------------------------------------------------------------

/// A fundamental group realized concretely: the presentation (raw and
/// simplified), a completed coset table over the trivial subgroup, the
/// regular permutation representation, the canonical morphism into it, and
/// the universal cover it develops.
#[derive(Clone, Debug)]
pub struct Pi1Realization {
    pub cog: ComplexOfGroups,
    pub tree: Vec<String>,
    pub raw: Presentation,
    pub simplified: SimplifiedPresentation,
    pub table: fp::CosetTable,
    pub group: PermGroup,
    pub gen_images: Vec<Perm>,
    pub iota: MorphismToGroup,
    pub dev: Development,
}

impl Pi1Realization {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Evaluates a word over the simplified generators.
    pub fn eval(&self, w: &Word) -> Perm {
        fp::eval_word(&self.gen_images, self.group.degree(), w)
    }

    /// Evaluates a word over the original (unsimplified) symbols.
    pub fn eval_original(&self, w: &Word) -> Perm {
        self.eval(&self.simplified.rewrite(&self.raw, w))
    }

    /// The concrete image of one original symbol.
    pub fn symbol_image(&self, label: &GenLabel) -> Perm {
        self.eval(self.simplified.expression(label))
    }

    /// A canonical word (over the simplified generators) for a group
    /// element, via the coset table's representative words.
    pub fn word_for(&self, p: &Perm) -> Word {
        let c = p.inverse().apply(0);
        self.table.rep_word(c).clone()
    }
}

#[derive(Clone, Debug)]
pub struct PartialBall {
    pub scwol: Scwol,
    pub center: String,
    pub radius: usize,
    /// always true; the ball makes no completeness claim
    pub partial: bool,
    pub raw: Presentation,
    pub simplified: SimplifiedPresentation,
    pub table: fp::PartialCosetTable,
    /// ball vertex id -> (coset class representative, base vertex)
    pub vertex_info: BTreeMap<String, (usize, String)>,
    /// ball edge id -> (coset class representative, base edge)
    pub edge_info: BTreeMap<String, (usize, String)>,
}

#[derive(Clone, Debug)]
pub enum UniversalCover {
    Finite(Box<Pi1Realization>),
    Partial(Box<PartialBall>),
}

/// Materializes the universal cover `D(Y, T)` when the fundamental group is
/// finite within budget; otherwise returns a breadth-bounded ball around
/// `([1], sigma0)` flagged partial.
pub fn universal_cover(
    cog: &ComplexOfGroups,
    tree: &[String],
    budget: usize,
) -> Result<UniversalCover, DevError> {
    let (raw, simplified) = fp::pi1_presentation(cog, tree)?;
    match fp::todd_coxeter(&simplified.pres, &[], budget) {
        Ok(table) => {
            let group = table.perm_group();
            let gen_images: Vec<Perm> = (0..simplified.pres.generator_count())
                .map(|g| table.generator_perm(g))
                .collect();
            let eval = |label: &GenLabel| -> Perm {
                fp::eval_word(&gen_images, group.degree(), simplified.expression(label))
            };
            let mut local_maps = BTreeMap::new();
            for v in &cog.base().vertices {
                let hom = GroupHom::from_full_map(cog.local_group(v), &group, |g| {
                    if g.is_identity() {
                        group.identity()
                    } else {
                        eval(&GenLabel::Vertex {
                            vertex: v.clone(),
                            element: g.images().to_vec(),
                        })
                    }
                })
                .map_err(crate::error::CogError::Group)?;
                local_maps.insert(v.clone(), hom);
            }
            let edge_elements: BTreeMap<String, Perm> = cog
                .base()
                .edge_ids()
                .into_iter()
                .map(|a| {
                    let img = eval(&GenLabel::Edge { edge: a.clone() });
                    (a, img)
                })
                .collect();
            let iota = MorphismToGroup::new(cog.clone(), group.clone(), local_maps, edge_elements)
                .map_err(DevError::Cog)?;
            debug_assert!(iota.validate().passed());
            let dev = develop(&iota)?;
            Ok(UniversalCover::Finite(Box::new(Pi1Realization {
                cog: cog.clone(),
                tree: tree.to_vec(),
                raw,
                simplified,
                table,
                group,
                gen_images,
                iota,
                dev,
            })))
        }
        Err(_) => {
            let ball = partial_ball(cog, raw, simplified, budget)?;
            Ok(UniversalCover::Partial(Box::new(ball)))
        }
    }
}

/// Builds a radius-bounded ball of the (possibly infinite) universal cover
/// from a partial coset enumeration over the trivial subgroup.  Vertices are
/// classes of table cosets modulo local-group words; the ball stops at the
/// first depth where a class can no longer be traced, and is flagged
/// partial: no completeness claim is made about cosets the enumeration had
/// not yet separated.
fn partial_ball(
    cog: &ComplexOfGroups,
    raw: Presentation,
    simplified: SimplifiedPresentation,
    budget: usize,
) -> Result<PartialBall, DevError> {
    let partial = fp::todd_coxeter_partial(&simplified.pres, &[], budget);
    let base = cog.base();
    // words for local elements and edge carriers, over simplified generators
    let vertex_words: BTreeMap<String, Vec<Word>> = base
        .vertices
        .iter()
        .map(|v| {
            let words = cog
                .local_group(v)
                .elements()
                .iter()
                .map(|g| {
                    if g.is_identity() {
                        Vec::new()
                    } else {
                        simplified
                            .expression(&GenLabel::Vertex {
                                vertex: v.clone(),
                                element: g.images().to_vec(),
                            })
                            .clone()
                    }
                })
                .collect();
            (v.clone(), words)
        })
        .collect();
    let edge_words: BTreeMap<String, Word> = base
        .edge_ids()
        .into_iter()
        .map(|a| {
            let w = simplified
                .expression(&GenLabel::Edge { edge: a.clone() })
                .clone();
            (a, w)
        })
        .collect();
    // class of a table coset modulo a vertex subgroup: all right translates
    let class_of = |c: usize, v: &str| -> Option<usize> {
        let mut min = usize::MAX;
        for w in &vertex_words[v] {
            let d = partial.trace(c, w)?;
            min = min.min(d);
        }
        Some(min)
    };
    let sigma0 = base.vertices.iter().next().cloned().unwrap_or_default();
    let center_class = class_of(0, &sigma0).ok_or(DevError::RequiresFiniteCover)?;
    // breadth-first over dev vertices (class, base vertex)
    let mut depth: BTreeMap<(usize, String), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut failure_depth = usize::MAX;
    depth.insert((center_class, sigma0.clone()), 0);
    queue.push_back((center_class, sigma0.clone()));
    // collected dev edges: (edge class at i(a), base edge, i-class, t-class)
    let mut dev_edges: BTreeSet<(usize, String, usize, usize)> = BTreeSet::new();
    while let Some((c, v)) = queue.pop_front() {
        let d = depth[&(c, v.clone())];
        if d >= failure_depth {
            continue;
        }
        let mut neighbors: Vec<(usize, String, usize, usize)> = Vec::new();
        let mut incomplete = false;
        for (a, e) in &base.edges {
            if e.i == v {
                // the unique edge ([c], a) out of this vertex
                let t_coset = partial.trace(c, &fp::word_inverse(&edge_words[a]));
                match t_coset.and_then(|tc| class_of(tc, &e.t)) {
                    Some(tclass) => neighbors.push((c, a.clone(), c, tclass)),
                    None => incomplete = true,
                }
            }
            if e.t == v {
                // arriving edges ([h], a) with h in (class members) . phi(a)
                let mut seen_h: BTreeSet<usize> = BTreeSet::new();
                let mut ok = true;
                for w in &vertex_words[&v] {
                    let m = partial.trace(c, w);
                    let h = m.and_then(|m| partial.trace(m, &edge_words[a]));
                    match h.and_then(|h| class_of(h, &e.i)) {
                        Some(hclass) => {
                            seen_h.insert(hclass);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    for h in seen_h {
                        neighbors.push((h, a.clone(), h, c));
                    }
                } else {
                    incomplete = true;
                }
            }
        }
        if incomplete {
            failure_depth = failure_depth.min(d);
            continue;
        }
        for (eclass, a, iclass, tclass) in neighbors {
            dev_edges.insert((eclass, a.clone(), iclass, tclass));
            for (nclass, nv) in [
                (iclass, base.initial(&a).to_string()),
                (tclass, base.terminal(&a).to_string()),
            ] {
                let key = (nclass, nv.clone());
                if !depth.contains_key(&key) {
                    depth.insert(key.clone(), d + 1);
                    queue.push_back(key);
                }
            }
        }
    }
    let radius = if failure_depth == usize::MAX {
        depth.values().copied().max().unwrap_or(0)
    } else {
        failure_depth
    };
    let keep: BTreeSet<(usize, String)> = depth
        .iter()
        .filter(|(_, &d)| d <= radius)
        .map(|(k, _)| k.clone())
        .collect();
    let vid = |c: usize, v: &str| format!("[c{c}]{v}");
    let eid = |c: usize, a: &str| format!("[c{c}]{a}");
    let vertices: Vec<String> = keep.iter().map(|(c, v)| vid(*c, v)).collect();
    let vertex_info: BTreeMap<String, (usize, String)> = keep
        .iter()
        .map(|(c, v)| (vid(*c, v), (*c, v.clone())))
        .collect();
    let mut edges = Vec::new();
    let mut edge_index: BTreeMap<(usize, String), (usize, usize)> = BTreeMap::new();
    for (eclass, a, iclass, tclass) in &dev_edges {
        let i_key = (*iclass, base.initial(a).to_string());
        let t_key = (*tclass, base.terminal(a).to_string());
        if keep.contains(&i_key) && keep.contains(&t_key) {
            edges.push((
                eid(*eclass, a),
                vid(i_key.0, &i_key.1),
                vid(t_key.0, &t_key.1),
            ));
            edge_index.insert((*eclass, a.clone()), (*iclass, *tclass));
        }
    }
    // compositions present in the ball: ([g],a)([h],b) = ([h],ab) when
    // t([h],b) equals the initial vertex of ([g],a)
    let mut comps = Vec::new();
    for ((a, b), ab) in &base.compositions {
        for ((ca, ea), (ia, _)) in &edge_index {
            if ea != a {
                continue;
            }
            for ((cb, eb), (_, tb)) in &edge_index {
                if eb != b || tb != ia {
                    continue;
                }
                if edge_index.contains_key(&(*cb, ab.clone())) {
                    comps.push((eid(*ca, a), eid(*cb, b), eid(*cb, ab)));
                }
            }
        }
    }
    let edge_info: BTreeMap<String, (usize, String)> = edge_index
        .keys()
        .map(|(c, a)| (eid(*c, a), (*c, a.clone())))
        .collect();
    let scwol = Scwol::new(vertices, edges, comps).map_err(crate::error::CogError::Scwol)?;
    Ok(PartialBall {
        scwol,
        center: vid(center_class, &sigma0),
        radius,
        partial: true,
        raw,
        simplified,
        table: partial,
        vertex_info,
        edge_info,
    })
}

// ---------------------------------------------------------------------------
// Stars and local developments
// ---------------------------------------------------------------------------

/// Chains of the development passing through a vertex.
pub fn star(dev: &Development, vertex: &str) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let level = dev.scwol.chains(k);
        if level.is_empty() {
            break;
        }
        for c in level {
            if c.vertex_set(&dev.scwol).iter().any(|v| v == vertex) {
                out.push(c);
            }
        }
        k += 1;
    }
    out
}

/// One simplex of the intrinsic local development at a vertex: a descending
/// chain out of the vertex, an ascending chain into it, and a coset of the
/// composite's image in the local group (a single identity coset when the
/// ascending part is empty).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalStarSimplex {
    pub down: Vec<String>,
    pub up: Vec<String>,
    pub coset_rep: Perm,
}

/// The intrinsic local development (star of a lift) at a vertex of a complex
/// of groups.  Defined without reference to any global development; for
/// developable complexes it matches the star of `([1], sigma)` in a
/// development.
pub fn local_star(cog: &ComplexOfGroups, sigma: &str) -> Vec<LocalStarSimplex> {
    let base = cog.base();
    let g_sigma = cog.local_group(sigma);
    let down_chains = grow_chains(base, sigma, false);
    let up_chains = grow_chains(base, sigma, true);
    let mut simplices = Vec::new();
    for down in &down_chains {
        for up in &up_chains {
            if up.is_empty() {
                simplices.push(LocalStarSimplex {
                    down: down.clone(),
                    up: Vec::new(),
                    coset_rep: g_sigma.identity(),
                });
                continue;
            }
            let composite = composite_up(base, up);
            let sub = cog.edge_hom(&composite).image_elements();
            for coset in g_sigma
                .left_cosets(&sub)
                .expect("edge hom images are subgroups")
            {
                simplices.push(LocalStarSimplex {
                    down: down.clone(),
                    up: up.clone(),
                    coset_rep: coset[0].clone(),
                });
            }
        }
    }
    simplices.sort();
    simplices
}

/// Chains hanging off a vertex: ascending (`t(b_1) = sigma`, extended at the
/// top) or descending (`i(d_q) = sigma`, extended at the bottom).  Includes
/// the empty chain.
fn grow_chains(base: &Scwol, sigma: &str, ascending: bool) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<String>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            let attach = match c.last() {
                Some(last) => {
                    if ascending {
                        base.initial(last).to_string()
                    } else {
                        base.terminal(last).to_string()
                    }
                }
                None => sigma.to_string(),
            };
            for (id, e) in &base.edges {
                let hit = if ascending { &e.t } else { &e.i };
                if *hit == attach {
                    let mut ext = c.clone();
                    ext.push(id.clone());
                    next.push(ext);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Composite edge of an ascending chain `(b_1 ... b_p)`, composed from the
/// vertex outward.
fn composite_up(base: &Scwol, up: &[String]) -> String {
    let mut acc = up[0].clone();
    for b in &up[1..] {
        acc = base
            .compose(&acc, b)
            .expect("ascending chain edges compose")
            .clone();
    }
    acc
}

/// Tests the star clause of the covering definition at one vertex: the map
/// induced by the morphism between intrinsic local developments —
/// `(down, up, [g])` to `(l(down), l(up), [lambda_sigma(g) lambda(B)])` —
/// must be well defined, `lambda_sigma`-equivariant and bijective.
pub fn local_star_bijection(m: &CogMorphism, sigma: &str) -> bool {
    let source_star = local_star(&m.source, sigma);
    let l_sigma = m.l.vertex_image(sigma).to_string();
    let target_star = local_star(&m.target, &l_sigma);
    let g_sigma = m.source.local_group(sigma);
    let lambda_sigma = m.local_map(sigma);

    let image_of = |s: &LocalStarSimplex| -> Option<LocalStarSimplex> {
        let down: Vec<String> = s
            .down
            .iter()
            .map(|d| m.l.edge_image(d).to_string())
            .collect();
        let up: Vec<String> = s.up.iter().map(|b| m.l.edge_image(b).to_string()).collect();
        if up.is_empty() {
            return Some(LocalStarSimplex {
                down,
                up,
                coset_rep: m.target.local_group(&l_sigma).identity(),
            });
        }
        let b_comp = composite_up(m.source.base(), &s.up);
        let b_comp_target = composite_up(m.target.base(), &up);
        let sub_src = m.source.edge_hom(&b_comp).image_elements();
        let sub_tgt = m.target.edge_hom(&b_comp_target).image_elements();
        let lambda_b = m.edge_element(&b_comp);
        // well-definedness over the whole source coset
        let mut reps: BTreeSet<Perm> = BTreeSet::new();
        for s_elt in &sub_src {
            let g = s.coset_rep.mul(s_elt);
            let img = lambda_sigma.apply(&g).mul(lambda_b);
            reps.insert(PermGroup::coset_rep(&img, &sub_tgt));
        }
        if reps.len() != 1 {
            return None;
        }
        Some(LocalStarSimplex {
            down,
            up,
            coset_rep: reps.into_iter().next().unwrap(),
        })
    };

    let mut images = Vec::new();
    for s in &source_star {
        match image_of(s) {
            Some(img) => images.push(img),
            None => return false,
        }
    }
    // equivariance of the natural map under the local group
    for s in &source_star {
        for g in g_sigma.generators() {
            let moved = LocalStarSimplex {
                down: s.down.clone(),
                up: s.up.clone(),
                coset_rep: if s.up.is_empty() {
                    s.coset_rep.clone()
                } else {
                    let b_comp = composite_up(m.source.base(), &s.up);
                    let sub = m.source.edge_hom(&b_comp).image_elements();
                    PermGroup::coset_rep(&g.mul(&s.coset_rep), &sub)
                },
            };
            let lhs = image_of(&moved);
            let rhs = image_of(s).map(|img| {
                let coset_rep = if img.up.is_empty() {
                    img.coset_rep.clone()
                } else {
                    let b_comp_target = composite_up(m.target.base(), &img.up);
                    let sub = m.target.edge_hom(&b_comp_target).image_elements();
                    PermGroup::coset_rep(&lambda_sigma.apply(g).mul(&img.coset_rep), &sub)
                };
                LocalStarSimplex { coset_rep, ..img }
            });
            if lhs != rhs {
                return false;
            }
        }
    }
    // bijectivity onto the target star
    let mut sorted = images;
    sorted.sort();
    let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
    distinct && sorted == target_star
}

// ---------------------------------------------------------------------------
// Faithfulness
// ---------------------------------------------------------------------------

/// The kernel of the fundamental group's action on its universal cover,
/// computed two independent ways: directly on the finite development, and as
/// the unique maximal invariant normal vertex subgroup.
#[derive(Clone, Debug)]
pub struct CoverKernel {
    /// elements of the kernel inside the concrete fundamental group
    pub elements: Vec<Perm>,
    /// the vertex whose local group hosts the kernel preimage
    pub vertex: String,
    /// preimage in the local group at `vertex` (injective case)
    pub preimage_in_vertex_group: Option<Vec<Perm>>,
}

impl CoverKernel {
    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Computes the kernel of `pi_1 -> Aut(D(Y, T))` on a finite cover and
/// cross-checks it against the maximal invariant normal vertex subgroup.
pub fn cover_action_kernel(real: &Pi1Realization) -> Result<CoverKernel, DevError> {
    let dev = &real.dev;
    let direct: Vec<Perm> = real.group.filter_elements(|g| {
        dev.scwol
            .vertices
            .iter()
            .all(|v| dev.action.act_vertex(g, v) == *v)
            && dev
                .scwol
                .edges
                .keys()
                .all(|a| dev.action.act_edge(g, a) == *a)
    });
    // second route: subgroups of the intersection of all vertex groups,
    // invariant under every edge conjugation and normal in every vertex
    // group; the maximal one must be unique
    let base = real.cog.base();
    let mut meet: Option<Vec<Perm>> = None;
    for v in &base.vertices {
        let img = real.iota.local_map(v).image_elements();
        meet = Some(match meet {
            None => img,
            Some(m) => PermGroup::intersect(&m, &img),
        });
    }
    let meet = meet.unwrap_or_else(|| vec![real.group.identity()]);
    let meet_group =
        PermGroup::from_elements(real.group.degree(), meet).map_err(DevError::Group)?;
    let mut candidates: Vec<Vec<Perm>> = Vec::new();
    'next: for n in meet_group.all_subgroups() {
        let n_set: BTreeSet<&Perm> = n.iter().collect();
        for a in base.edge_ids() {
            let conj = real.symbol_image(&GenLabel::Edge { edge: a.clone() });
            for x in &n {
                if !n_set.contains(&x.conjugate_by(&conj)) {
                    continue 'next;
                }
            }
        }
        for v in &base.vertices {
            for g in real.iota.local_map(v).image_elements() {
                for x in &n {
                    if !n_set.contains(&x.conjugate_by(&g)) {
                        continue 'next;
                    }
                }
            }
        }
        candidates.push(n);
    }
    let maximal = candidates
        .iter()
        .max_by_key(|n| n.len())
        .cloned()
        .unwrap_or_else(|| vec![real.group.identity()]);
    for n in &candidates {
        let max_set: BTreeSet<&Perm> = maximal.iter().collect();
        if !n.iter().all(|x| max_set.contains(x)) {
            return Err(DevError::BadMorphism(
                "invariant normal vertex subgroups have no unique maximum".into(),
            ));
        }
    }
    if maximal != direct {
        return Err(DevError::BadMorphism(
            "kernel on the development disagrees with the maximal invariant subgroup".into(),
        ));
    }
    let vertex = base.vertices.iter().next().cloned().unwrap_or_default();
    let preimage = if real.iota.local_map(&vertex).is_injective() {
        let direct_set: BTreeSet<&Perm> = direct.iter().collect();
        Some(
            real.cog
                .local_group(&vertex)
                .filter_elements(|g| direct_set.contains(&real.iota.local_map(&vertex).apply(g))),
        )
    } else {
        None
    };
    Ok(CoverKernel {
        elements: direct,
        vertex,
        preimage_in_vertex_group: preimage,
    })
}

// ---------------------------------------------------------------------------
// Developability
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum Developability {
    Yes(Box<MorphismToGroup>),
    Unknown,
}

/// Budget for the complete-enumeration route inside `is_developable`.
const DEVELOPABILITY_TC_BUDGET: usize = 20_000;

/// Searches for a morphism to a group injective on the local groups.  First
/// tries the fundamental group's permutation representation from a completed
/// coset enumeration; then an exhaustive search over symmetric groups of
/// degree up to `cap`.  Returns `Unknown` rather than `No`: developability
/// is only semi-decided here.
pub fn is_developable(cog: &ComplexOfGroups, cap: usize) -> Result<Developability, DevError> {
    if cap == 0 {
        return Ok(Developability::Unknown);
    }
    if !cog.base().is_connected() {
        return Ok(Developability::Unknown);
    }
    let tree = crate::scwol::spanning_tree(cog.base());
    if let Ok(UniversalCover::Finite(real)) = universal_cover(cog, &tree, DEVELOPABILITY_TC_BUDGET)
    {
        if real.iota.injective_on_local_groups() {
            return Ok(Developability::Yes(Box::new(real.iota.clone())));
        }
    }
    let (_, simplified) = fp::pi1_presentation(cog, &tree)?;
    // a hom is injective on a local group exactly when no non-identity
    // element maps to the identity
    let injective_on_locals = |images: &[Perm], degree: usize| -> bool {
        cog.base().vertices.iter().all(|v| {
            cog.local_group(v).elements().iter().all(|g| {
                g.is_identity()
                    || !fp::eval_word(
                        images,
                        degree,
                        simplified.expression(&GenLabel::Vertex {
                            vertex: v.clone(),
                            element: g.images().to_vec(),
                        }),
                    )
                    .is_identity()
            })
        })
    };
    for degree in 1..=cap {
        let sym = PermGroup::symmetric(degree);
        let mut assignment: Vec<Perm> = Vec::with_capacity(simplified.pres.generator_count());
        let Some(images) = assign_generators(&simplified.pres, &sym, &mut assignment, 0, &|a| {
            injective_on_locals(a, degree)
        }) else {
            continue;
        };
        let group = PermGroup::generated(
            degree,
            images
                .iter()
                .filter(|p| !p.is_identity())
                .cloned()
                .collect(),
            sym.order(),
        )
        .map_err(DevError::Group)?;
        let eval = |label: &GenLabel| -> Perm {
            fp::eval_word(&images, degree, simplified.expression(label))
        };
        let mut local_maps = BTreeMap::new();
        for v in &cog.base().vertices {
            let hom = GroupHom::from_full_map(cog.local_group(v), &group, |g| {
                if g.is_identity() {
                    group.identity()
                } else {
                    eval(&GenLabel::Vertex {
                        vertex: v.clone(),
                        element: g.images().to_vec(),
                    })
                }
            })
            .map_err(crate::error::CogError::Group)?;
            debug_assert!(hom.is_injective());
            local_maps.insert(v.clone(), hom);
        }
        let edge_elements: BTreeMap<String, Perm> = cog
            .base()
            .edge_ids()
            .into_iter()
            .map(|a| {
                let img = eval(&GenLabel::Edge { edge: a.clone() });
                (a, img)
            })
            .collect();
        let phi = MorphismToGroup::new(cog.clone(), group, local_maps, edge_elements)
            .map_err(DevError::Cog)?;
        if phi.validate().passed() {
            return Ok(Developability::Yes(Box::new(phi)));
        }
    }
    Ok(Developability::Unknown)
}

/// Backtracking assignment of generator images satisfying every relator
/// whose support is already assigned, continuing until a full assignment
/// passes `accept`.  Images are tried in canonical element order, so the
/// first solution found is deterministic.
fn assign_generators(
    p: &Presentation,
    sym: &PermGroup,
    assignment: &mut Vec<Perm>,
    k: usize,
    accept: &dyn Fn(&[Perm]) -> bool,
) -> Option<Vec<Perm>> {
    if k == p.generator_count() {
        if accept(assignment) {
            return Some(assignment.clone());
        }
        return None;
    }
    'candidates: for cand in sym.elements() {
        assignment.push(cand.clone());
        for w in p.relators() {
            let support_ok = w
                .iter()
                .all(|&s| (s.unsigned_abs() as usize) <= assignment.len());
            if support_ok && !fp::eval_word(assignment, sym.degree(), w).is_identity() {
                assignment.pop();
                continue 'candidates;
            }
        }
        if let Some(done) = assign_generators(p, sym, assignment, k + 1, accept) {
            return Some(done);
        }
        assignment.pop();
    }
    None
}

/// Developability transfers down a covering: composing the witness for the
/// target with the covering gives a witness for the source.
pub fn developability_through_covering(
    covering: &CogMorphism,
    target_witness: &MorphismToGroup,
) -> Result<MorphismToGroup, DevError> {
    let composed = target_witness.precompose(covering).map_err(DevError::Cog)?;
    if let Some(v) = composed.non_injective_vertex() {
        return Err(DevError::NotInjectiveOnLocalGroups(v));
    }
    Ok(composed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scwol::{find_isomorphism, simple_connectivity, SimpleConnectivity};

    fn d3seg_to_s3() -> MorphismToGroup {
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
    fn trivial_development_is_the_base() {
        let cog = ComplexOfGroups::trivial_over(fixtures::seg());
        let trivial = PermGroup::trivial(1);
        let phi = MorphismToGroup::new(
            cog.clone(),
            trivial.clone(),
            cog.base()
                .vertices
                .iter()
                .map(|v| (v.clone(), GroupHom::identity(&trivial)))
                .collect(),
            cog.base()
                .edges
                .keys()
                .map(|a| (a.clone(), Perm::identity(1)))
                .collect(),
        )
        .unwrap();
        let dev = develop(&phi).unwrap();
        let seg = fixtures::seg();
        assert!(find_isomorphism(&dev.scwol, &seg).is_some());
    }

    #[test]
    fn d3seg_development_over_s3() {
        let phi = d3seg_to_s3();
        let dev = develop(&phi).unwrap();
        assert_eq!(dev.scwol.vertices.len(), 12);
        assert_eq!(dev.scwol.edges.len(), 12);
        assert!(dev.scwol.is_connected());
        assert!(dev.scwol.validate().passed());
        assert!(dev.action.validate().passed());
        assert_eq!(
            simple_connectivity(&dev.scwol, 10_000).unwrap(),
            SimpleConnectivity::No
        );
        // the development is the subdivided hexagonal cycle
        assert!(find_isomorphism(&dev.scwol, &fixtures::hexagon()).is_some());
        let rec = recover_cog(&dev).unwrap();
        assert!(rec.cog.validate().passed());
    }

    #[test]
    fn flip_universal_cover_is_path2() {
        let act = fixtures::flip_action();
        let choices = action::default_choices(&act);
        let cog = action::induced_cog(&act, &choices).unwrap();
        let tree = crate::scwol::spanning_tree(cog.base());
        match universal_cover(&cog, &tree, 10_000).unwrap() {
            UniversalCover::Finite(real) => {
                assert_eq!(real.order(), 2);
                assert!(find_isomorphism(&real.dev.scwol, &fixtures::path2()).is_some());
                assert!(real.iota.injective_on_local_groups());
                let kernel = cover_action_kernel(&real).unwrap();
                assert!(kernel.is_trivial());
            }
            UniversalCover::Partial(_) => panic!("expected a finite cover"),
        }
    }

    #[test]
    fn trivial_tri_cover_is_tri() {
        let cog = ComplexOfGroups::trivial_over(fixtures::tri());
        let tree = crate::scwol::spanning_tree(cog.base());
        match universal_cover(&cog, &tree, 10_000).unwrap() {
            UniversalCover::Finite(real) => {
                assert_eq!(real.order(), 1);
                assert!(find_isomorphism(&real.dev.scwol, &fixtures::tri()).is_some());
            }
            UniversalCover::Partial(_) => panic!("expected a finite cover"),
        }
    }

    #[test]
    fn d3seg_cover_is_partial() {
        let cog = fixtures::d3seg();
        let tree = vec!["a1".to_string(), "a2".to_string()];
        match universal_cover(&cog, &tree, 300).unwrap() {
            UniversalCover::Finite(_) => panic!("infinite group must not complete"),
            UniversalCover::Partial(ball) => {
                assert!(ball.partial);
                assert!(ball.radius >= 1);
                assert!(ball.scwol.validate().passed());
                assert!(ball.scwol.is_connected());
                assert!(ball.scwol.vertices.contains(&ball.center));
            }
        }
    }

    #[test]
    fn pi1_collapses_to_group_order_for_induced_complexes() {
        let acts = [
            fixtures::flip_action(),
            action::automorphism_group(&fixtures::tripod()).1,
        ];
        for act in acts {
            let choices = action::default_choices(&act);
            let cog = action::induced_cog(&act, &choices).unwrap();
            let tree = crate::scwol::spanning_tree(cog.base());
            let (_, simplified) = fp::pi1_presentation(&cog, &tree).unwrap();
            let table = fp::todd_coxeter(&simplified.pres, &[], 100_000).unwrap();
            assert_eq!(table.coset_count(), act.group().order());
        }
    }

    #[test]
    fn recover_roundtrip_families() {
        let phis: Vec<MorphismToGroup> = vec![
            {
                let act = fixtures::flip_action();
                let c = action::default_choices(&act);
                action::canonical_morphism(&act, &c).unwrap()
            },
            {
                let (_, act) = action::automorphism_group(&fixtures::tripod());
                let c = action::default_choices(&act);
                action::canonical_morphism(&act, &c).unwrap()
            },
            d3seg_to_s3(),
        ];
        for phi in phis {
            let dev = develop(&phi).unwrap();
            let rec = recover_cog(&dev).unwrap();
            assert!(rec.cog.validate().passed());
        }
    }

    #[test]
    fn phi1_compatibility_on_fixtures() {
        for act in [
            fixtures::flip_action(),
            action::automorphism_group(&fixtures::tripod()).1,
        ] {
            let choices = action::default_choices(&act);
            let m = phi1_compatibility(&act, &choices).unwrap();
            assert!(m.is_bijective());
        }
    }

    #[test]
    fn star_quotient_matches_base_star() {
        let act = fixtures::flip_action();
        let choices = action::default_choices(&act);
        let cog = action::induced_cog(&act, &choices).unwrap();
        let tree = crate::scwol::spanning_tree(cog.base());
        let UniversalCover::Finite(real) = universal_cover(&cog, &tree, 10_000).unwrap() else {
            panic!("finite cover expected");
        };
        for sigma in &cog.base().vertices {
            let lift = real.dev.vertex_of(&real.group.identity(), sigma);
            let dev_star = star(&real.dev, &lift);
            let intrinsic = local_star(&cog, sigma);
            assert_eq!(dev_star.len(), intrinsic.len());
        }
    }

    #[test]
    fn single_vertex_z2_kernel_is_everything() {
        let z2 = PermGroup::generated_default_cap(2, vec![Perm::from_cycle(2, &[0, 1]).unwrap()])
            .unwrap();
        let point = Scwol::new(["pt".to_string()], [], []).unwrap();
        let mut local = BTreeMap::new();
        local.insert("pt".to_string(), z2);
        let cog = ComplexOfGroups::simple(point, local).unwrap();
        let UniversalCover::Finite(real) = universal_cover(&cog, &[], 100).unwrap() else {
            panic!("finite cover expected");
        };
        let kernel = cover_action_kernel(&real).unwrap();
        assert_eq!(kernel.elements.len(), 2);
        assert_eq!(
            kernel.preimage_in_vertex_group.as_ref().map(|p| p.len()),
            Some(2)
        );
    }

    #[test]
    fn d3seg_is_developable_by_search() {
        let cog = fixtures::d3seg();
        match is_developable(&cog, 3).unwrap() {
            Developability::Yes(phi) => {
                assert!(phi.injective_on_local_groups());
                assert!(phi.validate().passed());
            }
            Developability::Unknown => panic!("search should find a witness"),
        }
        assert!(matches!(
            is_developable(&cog, 0).unwrap(),
            Developability::Unknown
        ));
        // the morphism into the symmetric group on three points is a valid
        // witness as well
        let phi = d3seg_to_s3();
        assert!(phi.validate().passed());
        assert!(phi.injective_on_local_groups());
    }

    #[test]
    fn induced_complexes_are_developable() {
        let act = fixtures::flip_action();
        let choices = action::default_choices(&act);
        let cog = action::induced_cog(&act, &choices).unwrap();
        assert!(matches!(
            is_developable(&cog, 2).unwrap(),
            Developability::Yes(_)
        ));
        let phi1 = action::canonical_morphism(&act, &choices).unwrap();
        assert!(phi1.injective_on_local_groups());
    }
}
