//! The correspondence between overgroups of a fixed group acting on a
//! simply connected scwol and isomorphism classes of coverings of faithful
//! developable complexes of groups, together with a constructive conjugacy
//! solver for groups acting freely.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::action::{
    self, automorphism_group, orbit_preserving_overgroup, ChoiceData, ScwolAction,
};
use crate::cog::CogMorphism;
use crate::dev::{self, UniversalCover};
use crate::error::BijError;
use crate::functor::{
    self, find_carriers, identify_pi1_with_group, induced_maps, induced_morphism,
    quotient_morphism, InducedPair, TreeData,
};
use crate::perm::{GroupHom, Perm, PermGroup};
use crate::scwol::{self, Scwol, ScwolMorphism, SimpleConnectivity};

/// The fixed data of the correspondence: a finite simply connected scwol,
/// its full automorphism group, a base group acting without inversions, one
/// choice set, a basepoint and a maximal tree.
#[derive(Clone, Debug)]
pub struct OvergroupContext {
    pub ambient: ScwolAction,
    pub gamma: Vec<Perm>,
    pub gamma_action: ScwolAction,
    pub choices: ChoiceData,
    pub cog: crate::cog::ComplexOfGroups,
    pub tree_data: TreeData,
    pub budget: usize,
}

impl OvergroupContext {
    /// Builds the context from a scwol and a subgroup of its automorphism
    /// group (given as cell permutations).  Requires a positive
    /// simple-connectivity certificate and an inversion-free base action.
    pub fn new(x: &Scwol, gamma: Vec<Perm>, budget: usize) -> Result<Self, BijError> {
        match scwol::simple_connectivity(x, budget)? {
            SimpleConnectivity::Yes => {}
            other => {
                return Err(BijError::Dev(
                    crate::error::DevError::NotCertifiedSimplyConnected(format!("{other:?}")),
                ))
            }
        }
        let (_, ambient) = automorphism_group(x);
        let gamma_action = ambient.sub_action(&gamma)?;
        let report = gamma_action.validate();
        if !report.passed() {
            return Err(BijError::Action(crate::error::ActionError::BadChoices(
                report.failures()[0].clone(),
            )));
        }
        let choices = action::default_choices(&gamma_action);
        let cog = action::induced_cog(&gamma_action, &choices)?;
        let tree_data = TreeData::canonical(cog.base());
        Ok(OvergroupContext {
            ambient,
            gamma,
            gamma_action,
            choices,
            cog,
            tree_data,
            budget,
        })
    }

    /// A context over the same space with explicit choices and tree data,
    /// used to chain coverings along nested overgroups.
    pub fn from_parts(
        ambient: &ScwolAction,
        gamma: Vec<Perm>,
        choices: ChoiceData,
        tree_data: TreeData,
        budget: usize,
    ) -> Result<Self, BijError> {
        let gamma_action = ambient.sub_action(&gamma)?;
        let cog = action::induced_cog(&gamma_action, &choices)?;
        Ok(OvergroupContext {
            ambient: ambient.clone(),
            gamma,
            gamma_action,
            choices,
            cog,
            tree_data,
            budget,
        })
    }
}

/// A covering of a faithful developable complex of groups by the context's
/// complex, with the tree data needed for its induced pair.
#[derive(Clone, Debug)]
pub struct CoveringClass {
    pub morphism: CogMorphism,
    pub src_td: TreeData,
    pub tgt_td: TreeData,
    pub sheets: Ratio<i64>,
}

impl CoveringClass {
    /// Wraps a covering, verifying the covering property, the target's
    /// developability with a finite cover, and faithfulness.
    pub fn new(
        morphism: CogMorphism,
        src_td: TreeData,
        tgt_td: TreeData,
        budget: usize,
    ) -> Result<Self, BijError> {
        let check = morphism.is_covering();
        if !check.covering {
            return Err(BijError::Cog(crate::error::CogError::Mismatch(
                check.witnesses.join("; "),
            )));
        }
        let UniversalCover::Finite(real) =
            dev::universal_cover(&morphism.target, &tgt_td.tree, budget)?
        else {
            return Err(BijError::Dev(crate::error::DevError::RequiresFiniteCover));
        };
        if !real.iota.injective_on_local_groups() {
            return Err(BijError::Dev(
                crate::error::DevError::NotInjectiveOnLocalGroups(
                    real.iota.non_injective_vertex().unwrap_or_default(),
                ),
            ));
        }
        let kernel = dev::cover_action_kernel(&real)?;
        if !kernel.is_trivial() {
            return Err(BijError::NotFaithful);
        }
        Ok(CoveringClass {
            morphism,
            src_td,
            tgt_td,
            sheets: check.sheets.expect("covering check reports sheets"),
        })
    }

    pub fn induced_pair(&self, budget: usize) -> Result<InducedPair, BijError> {
        Ok(induced_maps(
            &self.morphism,
            &self.src_td,
            &self.tgt_td.tree,
            budget,
        )?)
    }
}

// ---------------------------------------------------------------------------
// From overgroups to coverings
// ---------------------------------------------------------------------------

/// The covering induced by an overgroup, normalized so the commuting-square
/// hypotheses hold: the overgroup's choices pin the basepoint lift, and the
/// carriers come from a section of the quotient map, making the basepoint
/// carrier the identity.
pub fn covering_from_overgroup(
    ctx: &OvergroupContext,
    overgroup: &[Perm],
) -> Result<CoveringClass, BijError> {
    covering_from_overgroup_with(ctx, overgroup, 0)
}

/// Same construction with a deterministic perturbation of the choices, used
/// to exercise independence of the covering class from the choice data.
/// `variant = 0` is the normalized construction.
pub fn covering_from_overgroup_with(
    ctx: &OvergroupContext,
    overgroup: &[Perm],
    variant: usize,
) -> Result<CoveringClass, BijError> {
    covering_from_overgroup_parts(ctx, overgroup, variant).map(|(class, _, _)| class)
}

/// The full construction, also returning the overgroup's choice data and the
/// carrier elements, for callers that re-verify the commuting squares.
pub fn covering_from_overgroup_parts(
    ctx: &OvergroupContext,
    overgroup: &[Perm],
    variant: usize,
) -> Result<(CoveringClass, ChoiceData, BTreeMap<String, Perm>), BijError> {
    for g in &ctx.gamma {
        if overgroup.binary_search(g).is_err() {
            return Err(BijError::NotOvergroup);
        }
    }
    let over_action = ctx.ambient.sub_action(overgroup)?;
    let report = over_action.validate();
    if !report.passed() {
        return Err(BijError::Action(crate::error::ActionError::BadChoices(
            report.failures()[0].clone(),
        )));
    }
    let id_map = ScwolMorphism::identity(ctx.ambient.scwol());
    let inclusion = GroupHom::inclusion(ctx.gamma_action.group(), over_action.group())
        .map_err(BijError::Group)?;
    let sigma0 = ctx.tree_data.basepoint.clone();
    let sigma0_lift = ctx.choices.lifts[&sigma0].clone();

    let (over_choices, carriers) = if variant == 0 {
        // choices for the overgroup with the basepoint lift pinned
        let over_choices = pinned_choices(&over_action, &sigma0_lift)?;
        // section-based carriers:
        // k'_sigma = k'_{s(l(sigma))} k_{s(l(sigma))}^-1 k_sigma
        let l = quotient_morphism(&ctx.gamma_action, &over_action, &id_map)?;
        let initial_k = find_carriers(
            &ctx.gamma_action,
            &ctx.choices,
            &over_action,
            &over_choices,
            &id_map,
        )?;
        let mut section: BTreeMap<String, String> = BTreeMap::new();
        for v in l.source.vertex_ids() {
            let lv = l.vertex_image(&v).to_string();
            section.entry(lv).or_insert(v);
        }
        section.insert(l.vertex_image(&sigma0).to_string(), sigma0.clone());
        let order = over_action.group().bfs_order();
        let mut section_k: BTreeMap<String, Perm> = BTreeMap::new();
        for (lv, s_lv) in &section {
            let from = ctx.choices.lifts[s_lv].clone();
            let to = over_choices.lifts[lv].clone();
            let k = order
                .iter()
                .find(|g| over_action.act_vertex(g, &from) == to)
                .ok_or(BijError::Action(crate::error::ActionError::NoCarrier {
                    from,
                    to,
                }))?
                .clone();
            section_k.insert(lv.clone(), k);
        }
        let mut carriers = BTreeMap::new();
        for v in l.source.vertex_ids() {
            let lv = l.vertex_image(&v).to_string();
            let k_v = section_k[&lv]
                .mul(&initial_k[&section[&lv]].inverse())
                .mul(&initial_k[&v]);
            carriers.insert(v, k_v);
        }
        debug_assert!(carriers[&sigma0].is_identity());
        (over_choices, carriers)
    } else {
        let over_choices = action::choices_with(&over_action, variant);
        let carriers = find_carriers(
            &ctx.gamma_action,
            &ctx.choices,
            &over_action,
            &over_choices,
            &id_map,
        )?;
        (over_choices, carriers)
    };

    let lambda = induced_morphism(
        &ctx.gamma_action,
        &ctx.choices,
        &over_action,
        &over_choices,
        &id_map,
        &inclusion,
        &carriers,
    )?;
    let tgt_tree = scwol::spanning_tree(lambda.target.base());
    let tgt_basepoint = lambda.l.vertex_image(&sigma0).to_string();
    let tgt_td = TreeData::new(lambda.target.base(), tgt_tree, tgt_basepoint)?;
    let class = CoveringClass::new(lambda, ctx.tree_data.clone(), tgt_td, ctx.budget)?;
    Ok((class, over_choices, carriers))
}

/// Choices whose basepoint-orbit lift is pinned to a given cell; all other
/// lifts and carriers are the defaults.
fn pinned_choices(act: &ScwolAction, pinned_lift: &str) -> Result<ChoiceData, BijError> {
    let (quotient, projection) = act.quotient();
    let pinned_orbit = projection.vertex_image(pinned_lift).to_string();
    let mut lifts = BTreeMap::new();
    for orbit in act.vertex_orbits() {
        let rep = orbit[0].clone();
        let lift = if rep == pinned_orbit {
            pinned_lift.to_string()
        } else {
            orbit[0].clone()
        };
        lifts.insert(rep, lift);
    }
    let order = act.group().bfs_order();
    let mut h = BTreeMap::new();
    for a in quotient.edge_ids() {
        let lift = action::edge_lift(act, &projection, &lifts, &a)?;
        let t_lift = act.scwol().terminal(&lift).to_string();
        let target = lifts[quotient.terminal(&a)].clone();
        let h_a = order
            .iter()
            .find(|g| act.act_vertex(g, &t_lift) == target)
            .ok_or(BijError::Action(crate::error::ActionError::NoCarrier {
                from: t_lift.clone(),
                to: target.clone(),
            }))?
            .clone();
        h.insert(a, h_a);
    }
    Ok(ChoiceData { lifts, h })
}

// ---------------------------------------------------------------------------
// From coverings to overgroups
// ---------------------------------------------------------------------------

/// The overgroup determined by a covering: conjugate the target fundamental
/// group's action on its universal cover back to the space through
/// `(induced cover map) . (cover-to-space iso)^-1`, and read the resulting
/// automorphisms off inside the ambient group.
pub fn overgroup_from_covering(
    ctx: &OvergroupContext,
    class: &CoveringClass,
) -> Result<Vec<Perm>, BijError> {
    let pair = class.induced_pair(ctx.budget)?;
    let ident =
        identify_pi1_with_group(&ctx.gamma_action, &ctx.choices, &ctx.tree_data, ctx.budget)?;
    if !pair.cover_map_bijective {
        return Err(BijError::Functor(
            crate::error::FunctorError::VerificationFailed(
                "covering did not induce an isomorphism of covers".into(),
            ),
        ));
    }
    // X -> D(Y', T')
    let into_cover = pair.cover_map.compose(
        &ident
            .cover_iso
            .inverse()
            .expect("cover-to-space maps are isomorphisms"),
    );
    let out_of_cover = into_cover
        .inverse()
        .expect("composition of isomorphisms inverts");
    let x = ctx.ambient.scwol();
    let vs = x.vertex_ids();
    let es = x.edge_ids();
    let n_v = vs.len();
    let v_index: BTreeMap<&String, usize> = vs.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let e_index: BTreeMap<&String, usize> = es.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut elements = Vec::new();
    for p in pair.target.group.elements() {
        let mut images = vec![0usize; n_v + es.len()];
        for v in &vs {
            let through = out_of_cover.vertex_map[&pair
                .target
                .dev
                .action
                .act_vertex(p, &into_cover.vertex_map[v])]
                .clone();
            images[v_index[v]] = v_index[&through];
        }
        for a in &es {
            let through = out_of_cover.edge_map
                [&pair.target.dev.action.act_edge(p, &into_cover.edge_map[a])]
                .clone();
            images[n_v + e_index[a]] = n_v + e_index[&through];
        }
        let perm = Perm::from_images(images).map_err(BijError::Group)?;
        if !ctx.ambient.group().contains(&perm) {
            return Err(BijError::Functor(
                crate::error::FunctorError::VerificationFailed(
                    "conjugated deck transformation is not an automorphism of the space".into(),
                ),
            ));
        }
        elements.push(perm);
    }
    elements.sort();
    if !ctx.ambient.group().is_subgroup(&elements) {
        return Err(BijError::Functor(
            crate::error::FunctorError::VerificationFailed(
                "conjugated fundamental group is not a subgroup".into(),
            ),
        ));
    }
    for g in &ctx.gamma {
        if elements.binary_search(g).is_err() {
            return Err(BijError::NotOvergroup);
        }
    }
    let sub = ctx.ambient.sub_action(&elements)?;
    let report = sub.validate();
    if !report.passed() {
        return Err(BijError::Action(crate::error::ActionError::BadChoices(
            report.failures()[0].clone(),
        )));
    }
    Ok(elements)
}

// ---------------------------------------------------------------------------
// Isomorphism of coverings
// ---------------------------------------------------------------------------

/// Whether two coverings out of the context's complex are isomorphic.  The
/// primary criterion is equality of their overgroups; the secondary direct
/// criterion reconstructs the connecting isomorphism and checks the
/// commuting triangle of cover maps.  Both criteria are computed and must
/// agree.
pub fn isomorphic_coverings(
    ctx: &OvergroupContext,
    class1: &CoveringClass,
    class2: &CoveringClass,
) -> Result<bool, BijError> {
    let b1 = overgroup_from_covering(ctx, class1)?;
    let b2 = overgroup_from_covering(ctx, class2)?;
    let primary = b1 == b2;
    let secondary = direct_isomorphism_check(ctx, class1, class2)?;
    if primary != secondary {
        return Err(BijError::Functor(
            crate::error::FunctorError::VerificationFailed(format!(
                "isomorphism criteria disagree: overgroups {primary}, triangle {secondary}"
            )),
        ));
    }
    Ok(primary)
}

/// The direct criterion: try to build an isomorphism between the two
/// targets whose induced cover map closes the triangle.
fn direct_isomorphism_check(
    ctx: &OvergroupContext,
    class1: &CoveringClass,
    class2: &CoveringClass,
) -> Result<bool, BijError> {
    let pair1 = class1.induced_pair(ctx.budget)?;
    let pair2 = class2.induced_pair(ctx.budget)?;
    if !(pair1.cover_map_bijective && pair2.cover_map_bijective) {
        return Ok(false);
    }
    // the connecting map of covers
    let m = pair2.cover_map.compose(
        &pair1
            .cover_map
            .inverse()
            .expect("induced cover maps of coverings invert"),
    );
    // the connecting group map: transport each deck transformation through
    // the connecting map and find which element of the other group acts
    // that way
    let mut phi: BTreeMap<Perm, Perm> = BTreeMap::new();
    for p in pair1.target.group.elements() {
        let mut found: Option<Perm> = None;
        'search: for q in pair2.target.group.elements() {
            for v in pair1.target.dev.scwol.vertex_ids() {
                let lhs = m.vertex_map[&pair1.target.dev.action.act_vertex(p, &v)].clone();
                let rhs = pair2.target.dev.action.act_vertex(q, &m.vertex_map[&v]);
                if lhs != rhs {
                    continue 'search;
                }
            }
            for a in pair1.target.dev.scwol.edge_ids() {
                let lhs = m.edge_map[&pair1.target.dev.action.act_edge(p, &a)].clone();
                let rhs = pair2.target.dev.action.act_edge(q, &m.edge_map[&a]);
                if lhs != rhs {
                    continue 'search;
                }
            }
            found = Some(q.clone());
            break;
        }
        match found {
            Some(q) => {
                phi.insert(p.clone(), q);
            }
            None => return Ok(false),
        }
    }
    let image: BTreeSet<&Perm> = phi.values().collect();
    if image.len() != pair2.target.group.order() {
        return Ok(false);
    }
    // reconstruct the connecting morphism and check it is an isomorphism
    let iso1 = functor::cover_quotient_iso(&class1.morphism.target, &class1.tgt_td, ctx.budget)?;
    let iso2 = functor::cover_quotient_iso(&class2.morphism.target, &class2.tgt_td, ctx.budget)?;
    let connecting = match functor::reconstruct_morphism(
        &m,
        &phi,
        &iso1,
        &iso2,
        &class1.tgt_td,
        &class2.tgt_td,
        ctx.budget,
    ) {
        Ok(c) => c,
        Err(crate::error::FunctorError::BasepointConditionFailed(_)) => return Ok(false),
        Err(e) => return Err(BijError::Functor(e)),
    };
    if !connecting.is_isomorphism_direct() {
        return Ok(false);
    }
    // commuting triangle of cover maps
    let through = induced_maps(&connecting, &class1.tgt_td, &class2.tgt_td.tree, ctx.budget)?;
    for v in pair1.source.dev.scwol.vertex_ids() {
        if through.cover_map.vertex_map[&pair1.cover_map.vertex_map[&v]]
            != pair2.cover_map.vertex_map[&v]
        {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Enumeration and audit
// ---------------------------------------------------------------------------

/// All overgroups of the context's group inside the full automorphism group
/// that act without inversions, sorted by (order, elements).
pub fn enumerate_overgroups(ctx: &OvergroupContext) -> Vec<Vec<Perm>> {
    let mut out: Vec<Vec<Perm>> = ctx
        .ambient
        .group()
        .all_subgroups()
        .into_iter()
        .filter(|h| ctx.gamma.iter().all(|g| h.binary_search(g).is_ok()))
        .filter(|h| {
            ctx.ambient
                .sub_action(h)
                .map(|sub| sub.validate().passed())
                .unwrap_or(false)
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct AuditEntry {
    pub order: usize,
    pub index: String,
    pub sheets: String,
    pub covolume_ratio: String,
    pub roundtrip_ok: bool,
    pub choice_independent: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct AuditReport {
    pub overgroups: usize,
    pub entries: Vec<AuditEntry>,
    pub pairwise_distinct: bool,
    pub all_consistent: bool,
}

/// Runs the whole correspondence on a context: enumerates overgroups, maps
/// each to a covering and back, and checks that sheets, index and covolume
/// ratio agree exactly, that the roundtrip is the identity, that different
/// choice sets give isomorphic coverings, and that distinct overgroups give
/// non-isomorphic coverings.
pub fn bijection_audit(ctx: &OvergroupContext) -> Result<AuditReport, BijError> {
    let overgroups = enumerate_overgroups(ctx);
    let mut entries = Vec::new();
    let mut classes = Vec::new();
    let gamma_len = ctx.gamma.len() as i64;
    let vol_gamma = action::covolume(&ctx.ambient, &ctx.gamma)?;
    let mut all_consistent = true;
    for h in &overgroups {
        let class = covering_from_overgroup(ctx, h)?;
        let index = Ratio::new(h.len() as i64, gamma_len);
        let vol_h = action::covolume(&ctx.ambient, h)?;
        let covolume_ratio = vol_gamma / vol_h;
        let recovered = overgroup_from_covering(ctx, &class)?;
        let roundtrip_ok = recovered == *h;
        let perturbed = covering_from_overgroup_with(ctx, h, 1)?;
        let choice_independent = isomorphic_coverings(ctx, &class, &perturbed)?;
        let consistent =
            class.sheets == index && index == covolume_ratio && roundtrip_ok && choice_independent;
        all_consistent &= consistent;
        entries.push(AuditEntry {
            order: h.len(),
            index: index.to_string(),
            sheets: class.sheets.to_string(),
            covolume_ratio: covolume_ratio.to_string(),
            roundtrip_ok,
            choice_independent,
        });
        classes.push(class);
    }
    let mut pairwise_distinct = true;
    for i in 0..classes.len() {
        for j in 0..classes.len() {
            let isomorphic = isomorphic_coverings(ctx, &classes[i], &classes[j])?;
            if isomorphic != (i == j) {
                pairwise_distinct = false;
            }
        }
    }
    Ok(AuditReport {
        overgroups: overgroups.len(),
        entries,
        pairwise_distinct,
        all_consistent: all_consistent && pairwise_distinct,
    })
}

// ---------------------------------------------------------------------------
// The conjugacy solver
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct ConjugacyReport {
    /// the conjugating automorphism, as a permutation of the cell set
    pub conjugator: Vec<usize>,
    pub in_orbit_overgroup: bool,
    pub conjugates_into_h: bool,
    pub oracle_found: bool,
    /// scope note carried in every report
    pub note: &'static str,
}

/// Free actions on finite simply connected scwols are typically trivial, so
/// the solver's interesting exercise is its internal covering machinery;
/// the exhaustive oracle cross-checks every run.
pub const CONJUGACY_SCOPE_NOTE: &str =
    "free subgroups of finite simply connected scwols are typically trivial; \
     the covering pipeline and the exhaustive oracle are both checked on every run";

/// Constructive conjugacy: for `gamma` acting freely inside the
/// orbit-preserving overgroup of `h`, produces a conjugator `g` with
/// `g gamma g^-1` inside `h`, by composing the cover identifications of the
/// two quotient complexes through an induced covering.  Both postconditions
/// are re-checked on the result, independently of the construction.
pub fn conjugacy_solve(
    x: &Scwol,
    h_elems: &[Perm],
    gamma_elems: &[Perm],
    budget: usize,
) -> Result<ConjugacyReport, BijError> {
    match scwol::simple_connectivity(x, budget)? {
        SimpleConnectivity::Yes => {}
        other => {
            return Err(BijError::Dev(
                crate::error::DevError::NotCertifiedSimplyConnected(format!("{other:?}")),
            ))
        }
    }
    let (_, ambient) = automorphism_group(x);
    let h_action = ambient.sub_action(h_elems)?;
    let report = h_action.validate();
    if !report.passed() {
        return Err(BijError::Action(crate::error::ActionError::BadChoices(
            report.failures()[0].clone(),
        )));
    }
    let g_h = orbit_preserving_overgroup(&ambient, h_elems)?;
    let gh_action = ambient.sub_action(&g_h)?;
    let gh_report = gh_action.validate();
    if !gh_report.passed() {
        return Err(BijError::Action(crate::error::ActionError::BadChoices(
            gh_report.failures()[0].clone(),
        )));
    }
    for g in gamma_elems {
        if g_h.binary_search(g).is_err() {
            return Err(BijError::NotInGH);
        }
    }
    let gamma_action = ambient.sub_action(gamma_elems)?;
    // freeness on vertices and edges
    for g in gamma_elems {
        if g.is_identity() {
            continue;
        }
        for v in x.vertex_ids() {
            if gamma_action.act_vertex(g, &v) == v {
                return Err(BijError::NotFree {
                    witness_g: g.images().to_vec(),
                    witness_cell: v,
                });
            }
        }
        for a in x.edge_ids() {
            if gamma_action.act_edge(g, &a) == a {
                return Err(BijError::NotFree {
                    witness_g: g.images().to_vec(),
                    witness_cell: a,
                });
            }
        }
    }
    // shared quotient of H and its orbit overgroup, with shared choices
    let c_a = action::default_choices(&h_action);
    let c_a_gh = ChoiceData {
        lifts: c_a.lifts.clone(),
        h: c_a.h.clone(),
    };
    let id_map = ScwolMorphism::identity(x);
    // the inclusion covering between the two quotient complexes
    let inclusion_h =
        GroupHom::inclusion(h_action.group(), gh_action.group()).map_err(BijError::Group)?;
    let k_identity: BTreeMap<String, Perm> = h_action
        .quotient()
        .0
        .vertex_ids()
        .into_iter()
        .map(|v| (v, gh_action.group().identity()))
        .collect();
    let lambda = induced_morphism(
        &h_action,
        &c_a,
        &gh_action,
        &c_a_gh,
        &id_map,
        &inclusion_h,
        &k_identity,
    )?;
    let lambda_check = lambda.is_covering();
    if !lambda_check.covering {
        return Err(BijError::Cog(crate::error::CogError::Mismatch(
            lambda_check.witnesses.join("; "),
        )));
    }
    // the trivial-groups complex over the free quotient, and its covering
    // into the orbit-overgroup complex
    let c_b = action::default_choices(&gamma_action);
    let inclusion_gamma =
        GroupHom::inclusion(gamma_action.group(), gh_action.group()).map_err(BijError::Group)?;
    let k_b = find_carriers(&gamma_action, &c_b, &gh_action, &c_a_gh, &id_map)?;
    let phi = induced_morphism(
        &gamma_action,
        &c_b,
        &gh_action,
        &c_a_gh,
        &id_map,
        &inclusion_gamma,
        &k_b,
    )?;
    let phi_check = phi.is_covering();
    if !phi_check.covering {
        return Err(BijError::Cog(crate::error::CogError::Mismatch(
            phi_check.witnesses.join("; "),
        )));
    }
    // pick elements of the smaller local groups representing the same
    // cosets as the covering's edge elements
    let f = quotient_morphism(&gamma_action, &gh_action, &id_map)?;
    let cog_a = action::induced_cog(&h_action, &c_a)?;
    let cog_b = action::induced_cog(&gamma_action, &c_b)?;
    let mut rep_elements: BTreeMap<String, Perm> = BTreeMap::new();
    for b in cog_b.base().edge_ids() {
        let a = f.edge_image(&b).to_string();
        let t_a = cog_a.base().terminal(&a).to_string();
        let target_sub = phi.target.edge_hom(&a).image_elements();
        let phi_b = phi.edge_element(&b);
        let g_b = cog_a
            .local_group(&t_a)
            .elements()
            .iter()
            .find(|g| PermGroup::coset_rep(&g.inverse().mul(phi_b), &target_sub).is_identity())
            .cloned()
            .ok_or_else(|| {
                BijError::Functor(crate::error::FunctorError::VerificationFailed(
                    "no coset representative inside the smaller local group".into(),
                ))
            })?;
        rep_elements.insert(b, g_b);
    }
    // the covering into the subgroup complex
    let mut local_maps = BTreeMap::new();
    for v in &cog_b.base().vertices {
        let tgt = cog_a.local_group(f.vertex_image(v)).clone();
        let hom = GroupHom::from_generator_images(cog_b.local_group(v), &tgt, &[])
            .map_err(BijError::Group)?;
        local_maps.insert(v.clone(), hom);
    }
    let phi_prime = CogMorphism::new(cog_b.clone(), cog_a.clone(), f, local_maps, rep_elements)
        .map_err(BijError::Cog)?;
    let phi_prime_check = phi_prime.is_covering();
    if !phi_prime_check.covering {
        return Err(BijError::Cog(crate::error::CogError::Mismatch(
            phi_prime_check.witnesses.join("; "),
        )));
    }
    // identify both covers with the space and push the induced cover map
    // through
    let td_b = TreeData::canonical(cog_b.base());
    let td_a_tree = scwol::spanning_tree(cog_a.base());
    let pair = induced_maps(&phi_prime, &td_b, &td_a_tree, budget)?;
    let ident_b = identify_pi1_with_group(&gamma_action, &c_b, &td_b, budget)?;
    let td_a = TreeData::new(
        cog_a.base(),
        td_a_tree,
        phi_prime.l.vertex_image(&td_b.basepoint).to_string(),
    )?;
    let ident_a = identify_pi1_with_group(&h_action, &c_a, &td_a, budget)?;
    let from_space = ident_b
        .cover_iso
        .inverse()
        .expect("cover-to-space maps invert");
    let composed = ident_a
        .cover_iso
        .compose(&pair.cover_map)
        .compose(&from_space);
    // encode as a cell permutation and locate it in the ambient group
    let vs = x.vertex_ids();
    let es = x.edge_ids();
    let n_v = vs.len();
    let v_index: BTreeMap<&String, usize> = vs.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let e_index: BTreeMap<&String, usize> = es.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut images = vec![0usize; n_v + es.len()];
    for v in &vs {
        images[v_index[v]] = v_index[&composed.vertex_map[v]];
    }
    for a in &es {
        images[n_v + e_index[a]] = n_v + e_index[&composed.edge_map[a]];
    }
    let conjugator = Perm::from_images(images).map_err(BijError::Group)?;
    // postconditions, independent of the construction
    let in_gh = g_h.binary_search(&conjugator).is_ok();
    let h_set: BTreeSet<&Perm> = h_elems.iter().collect();
    let conjugates = gamma_elems
        .iter()
        .all(|g| h_set.contains(&g.conjugate_by(&conjugator)));
    let oracle = conjugacy_oracle(x, h_elems, gamma_elems)?;
    Ok(ConjugacyReport {
        conjugator: conjugator.images().to_vec(),
        in_orbit_overgroup: in_gh,
        conjugates_into_h: conjugates,
        oracle_found: oracle.is_some(),
        note: CONJUGACY_SCOPE_NOTE,
    })
}

/// Exhaustive search over the orbit-preserving overgroup for a conjugator.
pub fn conjugacy_oracle(
    x: &Scwol,
    h_elems: &[Perm],
    gamma_elems: &[Perm],
) -> Result<Option<Perm>, BijError> {
    let (_, ambient) = automorphism_group(x);
    let g_h = orbit_preserving_overgroup(&ambient, h_elems)?;
    for g in gamma_elems {
        if g_h.binary_search(g).is_err() {
            return Err(BijError::NotInGH);
        }
    }
    let h_set: BTreeSet<&Perm> = h_elems.iter().collect();
    for g in &g_h {
        if gamma_elems
            .iter()
            .all(|x| h_set.contains(&x.conjugate_by(g)))
        {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn path2_ctx() -> OvergroupContext {
        let x = fixtures::path2();
        let (group, _) = automorphism_group(&x);
        let trivial = vec![group.identity()];
        OvergroupContext::new(&x, trivial, 100_000).unwrap()
    }

    fn tripod_ctx() -> OvergroupContext {
        let x = fixtures::tripod();
        let (group, _) = automorphism_group(&x);
        let trivial = vec![group.identity()];
        OvergroupContext::new(&x, trivial, 100_000).unwrap()
    }

    #[test]
    fn path2_overgroups_and_sheets() {
        let ctx = path2_ctx();
        let overgroups = enumerate_overgroups(&ctx);
        assert_eq!(overgroups.len(), 2);
        let mut sheets: Vec<i64> = Vec::new();
        for h in &overgroups {
            let class = covering_from_overgroup(&ctx, h).unwrap();
            assert_eq!(class.sheets.denom(), &1);
            sheets.push(*class.sheets.numer());
        }
        sheets.sort();
        assert_eq!(sheets, vec![1, 2]);
    }

    #[test]
    fn path2_roundtrip() {
        let ctx = path2_ctx();
        for h in enumerate_overgroups(&ctx) {
            let class = covering_from_overgroup(&ctx, &h).unwrap();
            let back = overgroup_from_covering(&ctx, &class).unwrap();
            assert_eq!(back, h);
        }
    }

    #[test]
    fn identity_covering_is_one_sheeted() {
        let ctx = path2_ctx();
        let class = covering_from_overgroup(&ctx, &ctx.gamma.clone()).unwrap();
        assert_eq!(class.sheets, Ratio::new(1, 1));
        let back = overgroup_from_covering(&ctx, &class).unwrap();
        assert_eq!(back, ctx.gamma);
    }

    #[test]
    fn tripod_two_sheeted_coverings_differ() {
        let ctx = tripod_ctx();
        let overgroups = enumerate_overgroups(&ctx);
        assert_eq!(overgroups.len(), 6);
        let z2s: Vec<&Vec<Perm>> = overgroups.iter().filter(|h| h.len() == 2).collect();
        assert_eq!(z2s.len(), 3);
        let c1 = covering_from_overgroup(&ctx, z2s[0]).unwrap();
        let c2 = covering_from_overgroup(&ctx, z2s[1]).unwrap();
        assert!(!isomorphic_coverings(&ctx, &c1, &c2).unwrap());
        assert!(isomorphic_coverings(&ctx, &c1, &c1).unwrap());
    }

    #[test]
    fn spider_has_single_overgroup() {
        let x = fixtures::spider123();
        let (group, _) = automorphism_group(&x);
        let ctx = OvergroupContext::new(&x, vec![group.identity()], 100_000).unwrap();
        assert_eq!(enumerate_overgroups(&ctx).len(), 1);
    }

    #[test]
    fn conjugacy_on_tripod_rotation() {
        let x = fixtures::tripod();
        let (group, ambient) = automorphism_group(&x);
        let rotation = group
            .elements()
            .iter()
            .find(|g| g.order() == 3)
            .unwrap()
            .clone();
        let h = PermGroup::generated_default_cap(group.degree(), vec![rotation]).unwrap();
        let g_h = orbit_preserving_overgroup(&ambient, h.elements()).unwrap();
        assert_eq!(g_h.len(), 6);
        let gamma = vec![group.identity()];
        let report = conjugacy_solve(&x, h.elements(), &gamma, 100_000).unwrap();
        assert!(report.in_orbit_overgroup);
        assert!(report.conjugates_into_h);
        assert!(report.oracle_found);
        let oracle = conjugacy_oracle(&x, h.elements(), &gamma).unwrap();
        assert!(oracle.is_some());
    }

    #[test]
    fn conjugacy_rejects_bad_gamma() {
        let x = fixtures::tripod();
        let (group, _) = automorphism_group(&x);
        // H = 1 forces the orbit overgroup to be trivial
        let trivial = vec![group.identity()];
        let rotation = group
            .elements()
            .iter()
            .find(|g| g.order() == 3)
            .unwrap()
            .clone();
        let z3 = PermGroup::generated_default_cap(group.degree(), vec![rotation]).unwrap();
        let err = conjugacy_solve(&x, &trivial, z3.elements(), 100_000).unwrap_err();
        assert!(matches!(err, BijError::NotInGH));
        // a reflection fixes a leg: not free
        let refl = group
            .elements()
            .iter()
            .find(|g| g.order() == 2)
            .unwrap()
            .clone();
        let z2 = PermGroup::generated_default_cap(group.degree(), vec![refl]).unwrap();
        let err = conjugacy_solve(&x, group.elements(), z2.elements(), 100_000).unwrap_err();
        assert!(matches!(err, BijError::NotFree { .. }));
    }

    #[test]
    fn conjugacy_on_flip() {
        let x = fixtures::path2();
        let (group, _) = automorphism_group(&x);
        let flip = group.elements().iter().find(|g| !g.is_identity()).unwrap();
        let h = PermGroup::generated_default_cap(group.degree(), vec![flip.clone()]).unwrap();
        let gamma = vec![group.identity()];
        let report = conjugacy_solve(&x, h.elements(), &gamma, 100_000).unwrap();
        assert!(report.in_orbit_overgroup);
        assert!(report.conjugates_into_h);
    }
}
