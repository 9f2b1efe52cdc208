//! Group actions on scwols without inversions: quotient scwols, choice data,
//! the induced complex of groups, covolume, scwol automorphism groups, and
//! the orbit-preserving overgroup used by the conjugacy machinery.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::cog::{CogMorphism, ComplexOfGroups, MorphismToGroup};
use crate::error::ActionError;
use crate::perm::{GroupHom, Perm, PermGroup};
use crate::report::ValidationReport;
use crate::scwol::{automorphisms, barycentric_subdivision, chain_id, Chain, Scwol, ScwolMorphism};

/// One group element's effect on a scwol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScwolAut {
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
}

impl ScwolAut {
    pub fn identity(s: &Scwol) -> Self {
        ScwolAut {
            vmap: s.vertices.iter().map(|v| (v.clone(), v.clone())).collect(),
            emap: s.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    /// `outer . inner` (apply `inner` first).
    pub fn compose(outer: &ScwolAut, inner: &ScwolAut) -> ScwolAut {
        ScwolAut {
            vmap: inner
                .vmap
                .iter()
                .map(|(v, w)| (v.clone(), outer.vmap[w].clone()))
                .collect(),
            emap: inner
                .emap
                .iter()
                .map(|(a, b)| (a.clone(), outer.emap[b].clone()))
                .collect(),
        }
    }

    fn as_morphism(&self, s: &Scwol) -> ScwolMorphism {
        ScwolMorphism {
            source: s.clone(),
            target: s.clone(),
            vertex_map: self.vmap.clone(),
            edge_map: self.emap.clone(),
        }
    }

    fn is_automorphism(&self, s: &Scwol) -> bool {
        let m = self.as_morphism(s);
        m.respects_structure().is_empty() && m.is_bijective()
    }
}

/// An action of a finite permutation group on a scwol, stored as the full
/// map from elements to automorphisms.  Built either from generator data
/// (closed by breadth-first search, with every (generator, element) product
/// checked for consistency) or from a permutation group on the cell set
/// itself.
#[derive(Clone, Debug)]
pub struct ScwolAction {
    scwol: Scwol,
    group: PermGroup,
    auts: BTreeMap<Perm, ScwolAut>,
    // the quotient is derived data but heavily used; built once up front
    quotient_scwol: Scwol,
    projection: ScwolMorphism,
}

impl ScwolAction {
    pub fn trivial(scwol: Scwol, group: PermGroup) -> Self {
        let auts = group
            .elements()
            .iter()
            .map(|g| (g.clone(), ScwolAut::identity(&scwol)))
            .collect();
        Self::finish(scwol, group, auts)
    }

    fn finish(scwol: Scwol, group: PermGroup, auts: BTreeMap<Perm, ScwolAut>) -> Self {
        let (quotient_scwol, projection) = build_quotient(&scwol, &group, &auts);
        ScwolAction {
            scwol,
            group,
            auts,
            quotient_scwol,
            projection,
        }
    }

    /// Builds the action from one automorphism per generator, extending over
    /// the whole group and verifying consistency exhaustively.
    pub fn from_generator_maps(
        scwol: Scwol,
        group: PermGroup,
        gen_vmaps: Vec<BTreeMap<String, String>>,
        gen_emaps: Vec<BTreeMap<String, String>>,
    ) -> Result<Self, ActionError> {
        if gen_vmaps.len() != group.generators().len() || gen_emaps.len() != gen_vmaps.len() {
            return Err(ActionError::Inconsistent(
                "one automorphism required per generator".into(),
            ));
        }
        let gen_auts: Vec<ScwolAut> = gen_vmaps
            .into_iter()
            .zip(gen_emaps)
            .map(|(vmap, emap)| ScwolAut { vmap, emap })
            .collect();
        for (k, aut) in gen_auts.iter().enumerate() {
            if !aut.is_automorphism(&scwol) {
                return Err(ActionError::NotAutomorphism(format!(
                    "generator {k} does not act by a scwol automorphism"
                )));
            }
        }
        let mut auts: BTreeMap<Perm, ScwolAut> = BTreeMap::new();
        auts.insert(group.identity(), ScwolAut::identity(&scwol));
        let mut queue = vec![group.identity()];
        while let Some(g) = queue.pop() {
            let ag = auts[&g].clone();
            for (s, a_s) in group.generators().iter().zip(gen_auts.iter()) {
                let h = s.mul(&g);
                let ah = ScwolAut::compose(a_s, &ag);
                match auts.get(&h) {
                    None => {
                        auts.insert(h.clone(), ah);
                        queue.push(h);
                    }
                    Some(existing) => {
                        if *existing != ah {
                            return Err(ActionError::Inconsistent(format!("{:?}", h.images())));
                        }
                    }
                }
            }
        }
        if auts.len() != group.order() {
            return Err(ActionError::Inconsistent(
                "generator closure did not reach the whole group".into(),
            ));
        }
        Ok(Self::finish(scwol, group, auts))
    }

    /// Interprets a permutation group on the cell set (vertices in id order,
    /// then edges in id order) as a scwol action.
    pub fn from_cell_perm_group(scwol: Scwol, group: PermGroup) -> Result<Self, ActionError> {
        let n_v = scwol.vertices.len();
        let vs = scwol.vertex_ids();
        let es = scwol.edge_ids();
        if group.degree() != n_v + es.len() {
            return Err(ActionError::Inconsistent(format!(
                "degree {} does not match |V|+|E| = {}",
                group.degree(),
                n_v + es.len()
            )));
        }
        let decode = |p: &Perm| -> Result<ScwolAut, ActionError> {
            let mut vmap = BTreeMap::new();
            for (k, v) in vs.iter().enumerate() {
                let img = p.apply(k);
                if img >= n_v {
                    return Err(ActionError::NotAutomorphism(format!(
                        "element maps vertex {v} to an edge index"
                    )));
                }
                vmap.insert(v.clone(), vs[img].clone());
            }
            let mut emap = BTreeMap::new();
            for (k, e) in es.iter().enumerate() {
                let img = p.apply(n_v + k);
                if img < n_v {
                    return Err(ActionError::NotAutomorphism(format!(
                        "element maps edge {e} to a vertex index"
                    )));
                }
                emap.insert(e.clone(), es[img - n_v].clone());
            }
            Ok(ScwolAut { vmap, emap })
        };
        let mut auts = BTreeMap::new();
        for g in group.elements() {
            let aut = decode(g)?;
            if !aut.is_automorphism(&scwol) {
                return Err(ActionError::NotAutomorphism(format!("{:?}", g.images())));
            }
            auts.insert(g.clone(), aut);
        }
        Ok(Self::finish(scwol, group, auts))
    }

    /// Restriction of the action to a subgroup given by its elements.
    pub fn sub_action(&self, elements: &[Perm]) -> Result<ScwolAction, ActionError> {
        if !self.group.is_subgroup(elements) {
            return Err(ActionError::Group(crate::error::GroupError::NotSubgroup));
        }
        let group = PermGroup::from_elements(self.group.degree(), elements.to_vec())?;
        let auts = group
            .elements()
            .iter()
            .map(|g| (g.clone(), self.auts[g].clone()))
            .collect();
        Ok(Self::finish(self.scwol.clone(), group, auts))
    }

    pub fn scwol(&self) -> &Scwol {
        &self.scwol
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn act_vertex(&self, g: &Perm, v: &str) -> String {
        self.auts[g].vmap[v].clone()
    }

    pub fn act_edge(&self, g: &Perm, a: &str) -> String {
        self.auts[g].emap[a].clone()
    }

    pub fn aut_of(&self, g: &Perm) -> &ScwolAut {
        &self.auts[g]
    }

    /// Checks the two action conditions, with witnesses:
    /// (1) `g . i(a) != t(a)` for all `g`, `a`;
    /// (2) `g . i(a) = i(a)` implies `g . a = a` (no inversions).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for g in self.group.elements() {
            for (id, e) in &self.scwol.edges {
                let gi = &self.auts[g].vmap[&e.i];
                if *gi == e.t {
                    report.fail(format!(
                        "condition (1) fails: g={:?} sends i({id}) to t({id})",
                        g.images()
                    ));
                }
                if *gi == e.i && self.auts[g].emap[id] != *id {
                    report.fail(format!(
                        "inversion at {id}: g={:?} fixes i({id}) but moves the edge; \
                         pass the barycentric subdivision instead",
                        g.images()
                    ));
                }
            }
        }
        report
    }

    /// Orbits on vertices, each sorted, listed by least member (which is
    /// also the quotient vertex id).
    pub fn vertex_orbits(&self) -> Vec<Vec<String>> {
        let mut orbits: BTreeMap<&String, Vec<String>> = BTreeMap::new();
        for v in &self.scwol.vertices {
            orbits
                .entry(&self.projection.vertex_map[v])
                .or_default()
                .push(v.clone());
        }
        orbits.into_values().collect()
    }

    pub fn edge_orbits(&self) -> Vec<Vec<String>> {
        let mut orbits: BTreeMap<&String, Vec<String>> = BTreeMap::new();
        for a in self.scwol.edges.keys() {
            orbits
                .entry(&self.projection.edge_map[a])
                .or_default()
                .push(a.clone());
        }
        orbits.into_values().collect()
    }

    pub fn vertex_orbit_rep(&self, v: &str) -> String {
        self.projection.vertex_map[v].clone()
    }

    pub fn edge_orbit_rep(&self, a: &str) -> String {
        self.projection.edge_map[a].clone()
    }

    /// Stabilizer of a vertex, as a subgroup of the acting group.
    pub fn vertex_stabilizer(&self, v: &str) -> PermGroup {
        let elems = self.group.filter_elements(|g| self.act_vertex(g, v) == v);
        PermGroup::from_elements(self.group.degree(), elems)
            .expect("stabilizers are closed under the group operations")
    }

    /// The quotient scwol (orbit ids are the least member ids) and the
    /// natural projection.
    pub fn quotient(&self) -> (Scwol, ScwolMorphism) {
        (self.quotient_scwol.clone(), self.projection.clone())
    }

    /// Pushes the action forward to the barycentric subdivision.  Any group
    /// of automorphisms acts on the subdivision without inversions.
    pub fn on_subdivision(&self) -> ScwolAction {
        let sub = barycentric_subdivision(&self.scwol);
        let act_chain = |g: &Perm, c: &Chain| -> Chain {
            Chain {
                vertex: self.act_vertex(g, &c.vertex),
                edges: c.edges.iter().map(|a| self.act_edge(g, a)).collect(),
            }
        };
        let mut chains: Vec<Chain> = Vec::new();
        let mut k = 0;
        loop {
            let level = self.scwol.chains(k);
            if level.is_empty() {
                break;
            }
            chains.extend(level);
            k += 1;
        }
        let mut gen_vmaps = Vec::new();
        let mut gen_emaps = Vec::new();
        for g in self.group.generators() {
            let mut vmap = BTreeMap::new();
            for c in &chains {
                vmap.insert(chain_id(c), chain_id(&act_chain(g, c)));
            }
            let emap = sub
                .edges
                .values()
                .map(|e| {
                    (
                        e.id.clone(),
                        crate::scwol::face_edge_id(&vmap[&e.t], &vmap[&e.i]),
                    )
                })
                .collect();
            gen_vmaps.push(vmap);
            gen_emaps.push(emap);
        }
        ScwolAction::from_generator_maps(sub, self.group.clone(), gen_vmaps, gen_emaps)
            .expect("automorphisms act on the subdivision without inversions")
    }
}

/// Quotient construction: vertices and edges are orbits named by their least
/// member; the composite of two orbit edges is the orbit of any composable
/// pair of lifts, which the no-inversion conditions make independent of the
/// witness.
fn build_quotient(
    scwol: &Scwol,
    group: &PermGroup,
    auts: &BTreeMap<Perm, ScwolAut>,
) -> (Scwol, ScwolMorphism) {
    let orbit_rep = |maps: &dyn Fn(&ScwolAut) -> &BTreeMap<String, String>, x: &String| -> String {
        group
            .elements()
            .iter()
            .map(|g| maps(&auts[g])[x].clone())
            .min()
            .expect("groups are nonempty")
    };
    let mut v_rep: BTreeMap<String, String> = BTreeMap::new();
    for v in &scwol.vertices {
        if v_rep.contains_key(v) {
            continue;
        }
        let rep = orbit_rep(&|a| &a.vmap, v);
        for g in group.elements() {
            v_rep.insert(auts[g].vmap[v].clone(), rep.clone());
        }
    }
    let mut e_rep: BTreeMap<String, String> = BTreeMap::new();
    for a in scwol.edges.keys() {
        if e_rep.contains_key(a) {
            continue;
        }
        let rep = orbit_rep(&|au| &au.emap, a);
        for g in group.elements() {
            e_rep.insert(auts[g].emap[a].clone(), rep.clone());
        }
    }
    let vertices: BTreeSet<String> = v_rep.values().cloned().collect();
    let edge_reps: BTreeSet<String> = e_rep.values().cloned().collect();
    let edges: Vec<(String, String, String)> = edge_reps
        .iter()
        .map(|a| {
            let e = &scwol.edges[a];
            (a.clone(), v_rep[&e.i].clone(), v_rep[&e.t].clone())
        })
        .collect();
    let mut comps: BTreeMap<(String, String), String> = BTreeMap::new();
    for ((a, b), ab) in &scwol.compositions {
        let prev = comps.insert((e_rep[a].clone(), e_rep[b].clone()), e_rep[ab].clone());
        debug_assert!(
            prev.is_none() || prev.as_deref() == Some(e_rep[ab].as_str()),
            "orbit composite depends on the witness pair"
        );
    }
    let quotient = Scwol::new(
        vertices,
        edges,
        comps.into_iter().map(|((a, b), ab)| (a, b, ab)),
    )
    .expect("quotient of a valid inversion-free action is a scwol");
    let projection = ScwolMorphism {
        source: scwol.clone(),
        target: quotient.clone(),
        vertex_map: v_rep,
        edge_map: e_rep,
    };
    (quotient, projection)
}

// ---------------------------------------------------------------------------
// Choice data and the induced complex of groups
// ---------------------------------------------------------------------------

/// The choices behind a quotient complex of groups: a lift per quotient
/// vertex and, per quotient edge `a`, an element `h_a` carrying the terminal
/// vertex of the canonical lift of `a` to the chosen lift of `t(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceData {
    /// quotient vertex -> lift in the total scwol
    pub lifts: BTreeMap<String, String>,
    /// quotient edge -> carrier element
    pub h: BTreeMap<String, Perm>,
}

impl ChoiceData {
    /// Validates against an action and its quotient: lifts project
    /// correctly and each `h_a` satisfies its defining equation.
    pub fn validate(
        &self,
        act: &ScwolAction,
        quotient: &Scwol,
        projection: &ScwolMorphism,
    ) -> Result<(), ActionError> {
        for v in &quotient.vertices {
            let lift = self
                .lifts
                .get(v)
                .ok_or_else(|| ActionError::BadChoices(format!("no lift for vertex {v}")))?;
            if projection.vertex_image(lift) != v {
                return Err(ActionError::BadChoices(format!(
                    "lift of {v} projects elsewhere"
                )));
            }
        }
        for a in quotient.edge_ids() {
            let h_a = self
                .h
                .get(&a)
                .ok_or_else(|| ActionError::BadChoices(format!("no carrier for edge {a}")))?;
            let lift = edge_lift(act, projection, &self.lifts, &a)?;
            let t_lift = act.scwol().terminal(&lift).to_string();
            let target = &self.lifts[quotient.terminal(&a)];
            if act.act_vertex(h_a, &t_lift) != *target {
                return Err(ActionError::BadChoices(format!(
                    "carrier for edge {a} misses the chosen lift"
                )));
            }
        }
        Ok(())
    }
}

/// The unique lift of quotient edge `a` whose initial vertex is the chosen
/// lift of `i(a)`.
pub fn edge_lift(
    act: &ScwolAction,
    projection: &ScwolMorphism,
    lifts: &BTreeMap<String, String>,
    a: &str,
) -> Result<String, ActionError> {
    let i_lift = &lifts[projection.target.initial(a)];
    let mut found = Vec::new();
    for (id, e) in &act.scwol().edges {
        if e.i == *i_lift && projection.edge_image(id) == a {
            found.push(id.clone());
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        _ => Err(ActionError::BadChoices(format!(
            "edge {a} should have exactly one lift at the chosen initial vertex, found {}",
            found.len()
        ))),
    }
}

/// Deterministic choices: lifts are the least orbit members; each `h_a` is
/// the first element in breadth-first generator-word order satisfying its
/// defining equation (so the identity is chosen whenever it qualifies).
pub fn default_choices(act: &ScwolAction) -> ChoiceData {
    choices_with(act, 0)
}

/// Choice data with a deterministic perturbation knob: `variant` rotates the
/// lift picked inside each orbit and reverses the search order for the
/// carriers.  `variant = 0` is `default_choices`.
pub fn choices_with(act: &ScwolAction, variant: usize) -> ChoiceData {
    let (quotient, projection) = act.quotient();
    let mut lifts = BTreeMap::new();
    for orbit in act.vertex_orbits() {
        let rep = orbit[0].clone(); // quotient vertex id
        let lift = orbit[variant % orbit.len()].clone();
        lifts.insert(rep, lift);
    }
    let mut order = act.group.bfs_order();
    if variant % 2 == 1 {
        order.reverse();
    }
    let mut h = BTreeMap::new();
    for a in quotient.edge_ids() {
        let lift = edge_lift(act, &projection, &lifts, &a)
            .expect("nondegenerate projections always have a unique lift");
        let t_lift = act.scwol().terminal(&lift).to_string();
        let target = lifts[quotient.terminal(&a)].clone();
        let h_a = order
            .iter()
            .find(|g| act.act_vertex(g, &t_lift) == target)
            .expect("orbit members are connected by the group")
            .clone();
        h.insert(a, h_a);
    }
    ChoiceData { lifts, h }
}

/// The complex of groups induced by an action and choices: local groups are
/// lift stabilizers, edge maps conjugate by the carriers, and the twists are
/// `g_{a,b} = h_a h_b h_{ab}^-1`.
pub fn induced_cog(
    act: &ScwolAction,
    choices: &ChoiceData,
) -> Result<ComplexOfGroups, ActionError> {
    let report = act.validate();
    if !report.passed() {
        let first = report.failures()[0].clone();
        return Err(ActionError::BadChoices(first));
    }
    let (quotient, projection) = act.quotient();
    choices.validate(act, &quotient, &projection)?;
    let mut local = BTreeMap::new();
    for v in &quotient.vertices {
        local.insert(v.clone(), act.vertex_stabilizer(&choices.lifts[v]));
    }
    let mut edge_homs = BTreeMap::new();
    for a in quotient.edge_ids() {
        let i_v = quotient.initial(&a).to_string();
        let t_v = quotient.terminal(&a).to_string();
        let hom = GroupHom::conjugation(&local[&i_v], &local[&t_v], &choices.h[&a])
            .map_err(ActionError::Group)?;
        edge_homs.insert(a, hom);
    }
    let mut twists = BTreeMap::new();
    for ((a, b), ab) in &quotient.compositions {
        let g = choices.h[a]
            .mul(&choices.h[b])
            .mul(&choices.h[ab].inverse());
        twists.insert((a.clone(), b.clone()), g);
    }
    ComplexOfGroups::new(quotient, local, edge_homs, twists)
        .map_err(|e| ActionError::BadChoices(e.to_string()))
}

/// The canonical morphism from the induced complex to the acting group:
/// inclusions on local groups and `phi(a) = h_a`.
pub fn canonical_morphism(
    act: &ScwolAction,
    choices: &ChoiceData,
) -> Result<MorphismToGroup, ActionError> {
    let cog = induced_cog(act, choices)?;
    let mut local_maps = BTreeMap::new();
    for v in &cog.base().vertices {
        local_maps.insert(
            v.clone(),
            GroupHom::inclusion(cog.local_group(v), act.group()).map_err(ActionError::Group)?,
        );
    }
    let edge_elements: BTreeMap<String, Perm> = cog
        .base()
        .edge_ids()
        .into_iter()
        .map(|a| {
            let h = choices.h[&a].clone();
            (a, h)
        })
        .collect();
    MorphismToGroup::new(cog, act.group().clone(), local_maps, edge_elements)
        .map_err(|e| ActionError::BadChoices(e.to_string()))
}

/// The isomorphism between the complexes induced by two different choice
/// sets for the same action: `phi_sigma = Ad(k_sigma)` with
/// `k_sigma` carrying one lift to the other, and
/// `phi(a) = k_{t(a)} h_a k_{i(a)}^-1 h'_a^-1`.
pub fn change_of_choices(
    act: &ScwolAction,
    c1: &ChoiceData,
    c2: &ChoiceData,
) -> Result<CogMorphism, ActionError> {
    let cog1 = induced_cog(act, c1)?;
    let cog2 = induced_cog(act, c2)?;
    let order = act.group.bfs_order();
    let mut k: BTreeMap<String, Perm> = BTreeMap::new();
    for v in &cog1.base().vertices {
        let from = &c1.lifts[v];
        let to = &c2.lifts[v];
        let k_v = order
            .iter()
            .find(|g| act.act_vertex(g, from) == *to)
            .ok_or_else(|| ActionError::NoCarrier {
                from: from.clone(),
                to: to.clone(),
            })?
            .clone();
        k.insert(v.clone(), k_v);
    }
    let mut local_maps = BTreeMap::new();
    for v in &cog1.base().vertices {
        local_maps.insert(
            v.clone(),
            GroupHom::conjugation(cog1.local_group(v), cog2.local_group(v), &k[v])
                .map_err(ActionError::Group)?,
        );
    }
    let mut edge_elements = BTreeMap::new();
    for a in cog1.base().edge_ids() {
        let t_v = cog1.base().terminal(&a).to_string();
        let i_v = cog1.base().initial(&a).to_string();
        let val = k[&t_v]
            .mul(&c1.h[&a])
            .mul(&k[&i_v].inverse())
            .mul(&c2.h[&a].inverse());
        edge_elements.insert(a, val);
    }
    CogMorphism::new(
        cog1.clone(),
        cog2,
        ScwolMorphism::identity(cog1.base()),
        local_maps,
        edge_elements,
    )
    .map_err(|e| ActionError::BadChoices(e.to_string()))
}

// ---------------------------------------------------------------------------
// Covolume
// ---------------------------------------------------------------------------

/// The vertex-set covolume of a subgroup: the sum over orbit representatives
/// of the reciprocals of stabilizer orders, as an exact rational.
pub fn covolume(act: &ScwolAction, subgroup: &[Perm]) -> Result<Ratio<i64>, ActionError> {
    let sub = act.sub_action(subgroup)?;
    let mut total = Ratio::new(0, 1);
    for orbit in sub.vertex_orbits() {
        let stab = sub.vertex_stabilizer(&orbit[0]);
        total += Ratio::new(1, stab.order() as i64);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Automorphism groups of scwols
// ---------------------------------------------------------------------------

/// All scwol automorphisms, as a permutation group on the cell set
/// (vertices in id order, then edges), together with the action.
pub fn automorphism_group(s: &Scwol) -> (PermGroup, ScwolAction) {
    let vs = s.vertex_ids();
    let es = s.edge_ids();
    let v_index: BTreeMap<&String, usize> = vs.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let e_index: BTreeMap<&String, usize> = es.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut elements = Vec::new();
    for m in automorphisms(s) {
        let mut images = vec![0usize; vs.len() + es.len()];
        for v in &vs {
            images[v_index[v]] = v_index[&m.vertex_map[v]];
        }
        for e in &es {
            images[vs.len() + e_index[e]] = vs.len() + e_index[&m.edge_map[e]];
        }
        elements.push(Perm::from_images(images).expect("automorphisms are bijections"));
    }
    let group = PermGroup::from_elements(vs.len() + es.len(), elements)
        .expect("automorphisms form a group");
    let action = ScwolAction::from_cell_perm_group(s.clone(), group.clone())
        .expect("the automorphism group acts by construction");
    (group, action)
}

/// Subgroups of the acting group whose restricted action has no inversions,
/// as element lists.  The inversion-free elements need not form a subgroup,
/// hence the filter over the subgroup lattice.
pub fn inversion_free_subgroups(act: &ScwolAction) -> Vec<Vec<Perm>> {
    act.group()
        .all_subgroups()
        .into_iter()
        .filter(|h| {
            act.sub_action(h)
                .map(|sub| sub.validate().passed())
                .unwrap_or(false)
        })
        .collect()
}

/// The canonically first largest inversion-free subgroup.  When several
/// maximal ones exist the tie is broken lexicographically.
pub fn max_inversion_free_subgroup(act: &ScwolAction) -> Vec<Perm> {
    let mut best: Vec<Perm> = vec![act.group().identity()];
    for h in inversion_free_subgroups(act) {
        if h.len() > best.len() {
            best = h;
        }
    }
    best
}

/// The orbit-preserving overgroup of `H` inside the ambient action: all
/// elements `g` with `g . sigma` in `H . sigma` for every vertex.  Verified
/// to be a subgroup containing `H` with the same orbit partition on
/// vertices and edges.
pub fn orbit_preserving_overgroup(
    ambient: &ScwolAction,
    h_elems: &[Perm],
) -> Result<Vec<Perm>, ActionError> {
    let h_act = ambient.sub_action(h_elems)?;
    let mut h_vertex_orbit: BTreeMap<String, String> = BTreeMap::new();
    for orbit in h_act.vertex_orbits() {
        for v in &orbit {
            h_vertex_orbit.insert(v.clone(), orbit[0].clone());
        }
    }
    let candidates = ambient.group().filter_elements(|g| {
        ambient
            .scwol()
            .vertices
            .iter()
            .all(|v| h_vertex_orbit[&ambient.act_vertex(g, v)] == h_vertex_orbit[v])
    });
    if !ambient.group().is_subgroup(&candidates) {
        return Err(ActionError::Inconsistent(
            "orbit-preserving elements failed to form a subgroup".into(),
        ));
    }
    for h in h_elems {
        if candidates.binary_search(h).is_err() {
            return Err(ActionError::Inconsistent(
                "orbit-preserving overgroup does not contain H".into(),
            ));
        }
    }
    // same orbit partition on vertices and on edges
    let gh_act = ambient.sub_action(&candidates)?;
    if gh_act.vertex_orbits() != h_act.vertex_orbits()
        || gh_act.edge_orbits() != h_act.edge_orbits()
    {
        return Err(ActionError::Inconsistent(
            "orbit partitions of H and its overgroup differ".into(),
        ));
    }
    Ok(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn flip_has_no_inversions() {
        let act = fixtures::flip_action();
        assert!(act.validate().passed());
    }

    #[test]
    fn seg_swap_has_inversion() {
        let seg = fixtures::seg();
        let (_, act) = automorphism_group(&seg);
        assert_eq!(act.group().order(), 2);
        let report = act.validate();
        assert!(!report.passed());
        assert!(report.failures().iter().any(|f| f.contains("inversion")));
        // the maximal inversion-free subgroup is trivial
        assert_eq!(max_inversion_free_subgroup(&act).len(), 1);
    }

    #[test]
    fn trivial_action_quotient_is_isomorphic_copy() {
        let s = fixtures::tripod();
        let act = ScwolAction::trivial(s.clone(), PermGroup::trivial(1));
        let (q, p) = act.quotient();
        assert_eq!(q, s);
        assert!(p.check().nondegenerate);
    }

    #[test]
    fn flip_quotient_is_seg_shaped() {
        let act = fixtures::flip_action();
        let (q, p) = act.quotient();
        assert_eq!(q.vertices.len(), 3);
        assert_eq!(q.edges.len(), 2);
        assert!(p.check().nondegenerate);
        assert!(crate::scwol::find_isomorphism(&q, &fixtures::seg()).is_some());
    }

    #[test]
    fn tripod_automorphisms_and_quotient() {
        let tripod = fixtures::tripod();
        let (group, act) = automorphism_group(&tripod);
        assert_eq!(group.order(), 6);
        assert!(act.validate().passed());
        let (q, _) = act.quotient();
        assert_eq!(q.vertices.len(), 3);
        assert_eq!(q.edges.len(), 2);
    }

    #[test]
    fn default_choices_prefer_identity() {
        let act = fixtures::flip_action();
        let choices = default_choices(&act);
        for h in choices.h.values() {
            assert!(h.is_identity());
        }
        let act2 = ScwolAction::trivial(fixtures::seg(), PermGroup::trivial(1));
        for h in default_choices(&act2).h.values() {
            assert!(h.is_identity());
        }
    }

    #[test]
    fn flip_induced_cog_local_groups() {
        let act = fixtures::flip_action();
        let choices = default_choices(&act);
        let cog = induced_cog(&act, &choices).unwrap();
        assert!(cog.validate().passed());
        let mut orders: Vec<usize> = cog
            .base()
            .vertices
            .iter()
            .map(|v| cog.local_group(v).order())
            .collect();
        orders.sort();
        assert_eq!(orders, vec![1, 1, 2]);
        // canonical morphism is valid
        let phi1 = canonical_morphism(&act, &choices).unwrap();
        assert!(phi1.validate().passed());
    }

    #[test]
    fn inversion_rejected_with_witness() {
        let seg = fixtures::seg();
        let (_, act) = automorphism_group(&seg);
        let err = induced_cog(&act, &default_choices_unchecked(&act)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("inversion") || msg.contains("condition"));
    }

    // default_choices panics on degenerate projections; build the raw data
    fn default_choices_unchecked(act: &ScwolAction) -> ChoiceData {
        let (quotient, _projection) = act.quotient();
        let mut lifts = BTreeMap::new();
        for orbit in act.vertex_orbits() {
            lifts.insert(orbit[0].clone(), orbit[0].clone());
        }
        let h = quotient
            .edge_ids()
            .into_iter()
            .map(|a| (a, act.group().identity()))
            .collect();
        ChoiceData { lifts, h }
    }

    #[test]
    fn covolume_values() {
        let path2_trivial = ScwolAction::trivial(fixtures::path2(), PermGroup::trivial(1));
        assert_eq!(
            covolume(&path2_trivial, &[Perm::identity(1)]).unwrap(),
            Ratio::new(5, 1)
        );
        let flip = fixtures::flip_action();
        let all: Vec<Perm> = flip.group().elements().to_vec();
        assert_eq!(covolume(&flip, &all).unwrap(), Ratio::new(5, 2));
        let (_, tripod_act) = automorphism_group(&fixtures::tripod());
        let s3: Vec<Perm> = tripod_act.group().elements().to_vec();
        assert_eq!(covolume(&tripod_act, &s3).unwrap(), Ratio::new(7, 6));
    }

    #[test]
    fn covolume_ratio_is_index() {
        let (_, act) = automorphism_group(&fixtures::tripod());
        let subs = act.group().all_subgroups();
        for h in &subs {
            for k in &subs {
                if k.len() % h.len() != 0 || !PermGroup::intersect(h, k).eq(h.as_slice()) {
                    continue;
                }
                let vol_h = covolume(&act, h).unwrap();
                let vol_k = covolume(&act, k).unwrap();
                assert_eq!(vol_h / vol_k, Ratio::new((k.len() / h.len()) as i64, 1));
            }
        }
    }

    #[test]
    fn change_of_choices_is_isomorphism() {
        let act = fixtures::flip_action();
        let c1 = default_choices(&act);
        let c2 = choices_with(&act, 1);
        assert_ne!(c1, c2);
        let m = change_of_choices(&act, &c1, &c2).unwrap();
        assert!(m.validate().passed());
        assert!(m.is_isomorphism_direct());
    }

    #[test]
    fn tripod_orbit_preserving_overgroup() {
        let (group, act) = automorphism_group(&fixtures::tripod());
        // H = the rotation subgroup of order 3
        let rot = group
            .elements()
            .iter()
            .find(|g| !g.is_identity() && g.order() == 3)
            .unwrap()
            .clone();
        let h = PermGroup::generated_default_cap(group.degree(), vec![rot]).unwrap();
        let gh = orbit_preserving_overgroup(&act, h.elements()).unwrap();
        assert_eq!(gh.len(), 6);
        // H = 1 on an asymmetric scwol gives the trivial overgroup
        let (_, spider_act) = automorphism_group(&fixtures::spider123());
        let gh = orbit_preserving_overgroup(&spider_act, &[spider_act.group().identity()]).unwrap();
        assert_eq!(gh.len(), 1);
    }

    #[test]
    fn subdivision_action_is_inversion_free() {
        let (_, tet_act) = automorphism_group(&fixtures::tet());
        assert_eq!(tet_act.group().order(), 24);
        assert!(!tet_act.validate().passed());
        let sub_act = tet_act.on_subdivision();
        assert!(sub_act.validate().passed());
        assert_eq!(sub_act.group().order(), 24);
    }

    #[test]
    fn induced_cog_axioms_on_subdivided_triangle() {
        let (_, tri_act) = automorphism_group(&fixtures::tri());
        let sub_act = tri_act.on_subdivision();
        assert!(sub_act.validate().passed());
        let cog = induced_cog(&sub_act, &default_choices(&sub_act)).unwrap();
        assert!(cog.validate().passed());
    }
}
