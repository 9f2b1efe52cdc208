//! Property and invariant tests beyond the acceptance criteria: randomized
//! structural invariants and the transfer lemmas for coverings.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use cog_core::action::{self, automorphism_group};
use cog_core::bij::{covering_from_overgroup_parts, enumerate_overgroups, OvergroupContext};
use cog_core::cog::{CogMorphism, ComplexOfGroups};
use cog_core::dev::{self, develop};
use cog_core::fixtures;
use cog_core::fp;
use cog_core::perm::Perm;
use cog_core::scwol::{barycentric_subdivision, scwol_from_complex, CellComplexDescription, Scwol};

const BUDGET: usize = 100_000;

/// A random abstract simplicial complex on up to five vertices, presented as
/// a face poset closed under subsets.
fn simplicial_complex_strategy() -> impl Strategy<Value = CellComplexDescription> {
    proptest::collection::vec(proptest::collection::btree_set(0u8..5, 1..4), 1..6).prop_map(
        |facets| {
            let mut cells: BTreeSet<BTreeSet<u8>> = BTreeSet::new();
            for f in facets {
                // close under nonempty subsets
                let members: Vec<u8> = f.iter().copied().collect();
                for mask in 1u32..(1 << members.len()) {
                    let sub: BTreeSet<u8> = members
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask & (1 << k) != 0)
                        .map(|(_, v)| *v)
                        .collect();
                    cells.insert(sub);
                }
            }
            let name = |c: &BTreeSet<u8>| -> String {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                format!("s{}", parts.join("_"))
            };
            let described: BTreeMap<String, Vec<String>> = cells
                .iter()
                .map(|c| {
                    let faces: Vec<String> = c
                        .iter()
                        .map(|drop| {
                            let mut f = c.clone();
                            f.remove(drop);
                            f
                        })
                        .filter(|f| !f.is_empty())
                        .map(|f| name(&f))
                        .collect();
                    (name(c), faces)
                })
                .collect();
            CellComplexDescription { cells: described }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]

    /// Scwols built from genuine face posets always validate, their
    /// length-two chains coincide with the composition table, and the
    /// subdivision has one vertex per chain.
    #[test]
    fn random_complexes_give_valid_scwols(desc in simplicial_complex_strategy()) {
        let s = scwol_from_complex(&desc).unwrap();
        prop_assert!(s.validate().passed());
        let from_chains: BTreeSet<(String, String)> = s
            .chains(2)
            .iter()
            .map(|c| (c.edges[0].clone(), c.edges[1].clone()))
            .collect();
        let from_table: BTreeSet<(String, String)> = s.compositions.keys().cloned().collect();
        prop_assert_eq!(from_chains, from_table);
        let sub = barycentric_subdivision(&s);
        prop_assert!(sub.validate().passed());
        let chain_total: usize = (0..10).map(|k| s.chains(k).len()).sum();
        prop_assert_eq!(sub.vertices.len(), chain_total);
    }

    /// Bounded simplification preserves the abelianization.
    #[test]
    fn tietze_preserves_abelianization(
        n_gens in 1usize..5,
        relator_data in proptest::collection::vec(
            proptest::collection::vec((-4i64..=4).prop_filter("nonzero", |s| *s != 0), 0..6),
            0..6,
        ),
    ) {
        let labels: Vec<&str> = ["x", "y", "z", "w"][..n_gens.min(4)].to_vec();
        let n = labels.len() as i64;
        let relators: Vec<Vec<i64>> = relator_data
            .into_iter()
            .map(|w| {
                w.into_iter()
                    .map(|s| {
                        let idx = (s.unsigned_abs() as i64 - 1) % n + 1;
                        idx * s.signum()
                    })
                    .collect()
            })
            .collect();
        let p = fp::Presentation::named(&labels, relators);
        let simplified = fp::tietze_simplify(&p, 10);
        prop_assert_eq!(fp::abelianization(&p), fp::abelianization(&simplified.pres));
    }
}

/// Developments always validate as scwols and carry inversion-free actions.
#[test]
fn developments_validate_over_fixture_actions() {
    let (_, tripod_act) = automorphism_group(&fixtures::tripod());
    let mut count = 0;
    for h in tripod_act.group().all_subgroups() {
        let sub = tripod_act.sub_action(&h).unwrap();
        if !sub.validate().passed() {
            continue;
        }
        let choices = action::default_choices(&sub);
        let phi = action::canonical_morphism(&sub, &choices).unwrap();
        let dv = develop(&phi).unwrap();
        assert!(dv.scwol.validate().passed());
        assert!(dv.action.validate().passed());
        count += 1;
    }
    assert!(count >= 6);
}

/// Composing the coverings along an overgroup chain is again a covering and
/// the sheet counts multiply.
#[test]
fn covering_composition_multiplies_sheets() {
    let x = fixtures::tripod();
    let (group, _) = automorphism_group(&x);
    let ctx = OvergroupContext::new(&x, vec![group.identity()], BUDGET).unwrap();
    let overgroups = enumerate_overgroups(&ctx);
    let mut checked = 0;
    for h in &overgroups {
        if h.len() == 1 {
            continue;
        }
        for k in &overgroups {
            if k.len() <= h.len() || !h.iter().all(|g| k.binary_search(g).is_ok()) {
                continue;
            }
            let (class_h, choices_h, _) = covering_from_overgroup_parts(&ctx, h, 0).unwrap();
            let ctx_h = OvergroupContext::from_parts(
                &ctx.ambient,
                h.clone(),
                choices_h,
                class_h.tgt_td.clone(),
                BUDGET,
            )
            .unwrap();
            let (class_hk, _, _) = covering_from_overgroup_parts(&ctx_h, k, 0).unwrap();
            let composed = CogMorphism::compose(&class_hk.morphism, &class_h.morphism).unwrap();
            let check = composed.is_covering();
            assert!(check.covering);
            assert_eq!(check.sheets.unwrap(), class_h.sheets * class_hk.sheets);
            checked += 1;
        }
    }
    assert!(checked >= 1);
}

/// A covering transfers developability down: composing the target's witness
/// with the covering is injective on the source's local groups.  The
/// underlying scwol morphism of every covering also surjects onto the target
/// vertices.
#[test]
fn covering_transfer_and_vertex_surjectivity() {
    let x = fixtures::tripod();
    let (group, _) = automorphism_group(&x);
    let ctx = OvergroupContext::new(&x, vec![group.identity()], BUDGET).unwrap();
    for h in enumerate_overgroups(&ctx) {
        let (class, _, _) = covering_from_overgroup_parts(&ctx, &h, 0).unwrap();
        // target witness from its own finite cover
        let tree = class.tgt_td.tree.clone();
        let dev::UniversalCover::Finite(real) =
            dev::universal_cover(&class.morphism.target, &tree, BUDGET).unwrap()
        else {
            panic!("finite cover expected");
        };
        let witness = dev::developability_through_covering(&class.morphism, &real.iota).unwrap();
        assert!(witness.injective_on_local_groups());
        // vertex surjectivity of the base morphism
        let images: BTreeSet<&String> = class.morphism.l.vertex_map.values().collect();
        assert_eq!(images.len(), class.morphism.target.base().vertices.len());
    }
}

/// The nondegeneracy and covering flags on scwol morphisms agree with a
/// direct re-check of the star restrictions.
#[test]
fn scwol_covering_flags_match_direct_bijection_check() {
    let act = fixtures::flip_action();
    let (_, projection) = act.quotient();
    let flags = projection.check();
    assert!(flags.valid && flags.nondegenerate);
    // direct re-check: the restriction to initial stars is a bijection
    for v in projection.source.vertex_ids() {
        let lv = projection.vertex_image(&v);
        let outgoing: Vec<&String> = projection
            .source
            .edges
            .values()
            .filter(|e| e.i == v)
            .map(|e| &e.id)
            .collect();
        let image_set: BTreeSet<&String> =
            outgoing.iter().map(|a| &projection.edge_map[*a]).collect();
        let target_out: BTreeSet<&String> = projection
            .target
            .edges
            .values()
            .filter(|e| e.i == lv)
            .map(|e| &e.id)
            .collect();
        assert_eq!(image_set.len(), outgoing.len());
        assert_eq!(image_set, target_out);
    }
}

/// The exported canonical serialization reparses to an equal value.
#[test]
fn canonical_serialization_roundtrip() {
    for s in [
        fixtures::seg(),
        fixtures::tri(),
        fixtures::tripod(),
        fixtures::hexagon(),
        barycentric_subdivision(&fixtures::seg()),
    ] {
        let j = s.to_json();
        let text = serde_json::to_string_pretty(&j).unwrap();
        let back = Scwol::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(s, back);
    }
}

/// Stabilizer conjugation: carriers conjugate initial stabilizers into
/// terminal stabilizers, so the induced edge maps always land correctly even
/// with nontrivial twists present.
#[test]
fn induced_cog_twists_on_subdivided_square() {
    let (_, sq) = automorphism_group(&fixtures::square());
    let act = sq.on_subdivision();
    assert!(act.validate().passed());
    let choices = action::default_choices(&act);
    let cog = action::induced_cog(&act, &choices).unwrap();
    assert!(cog.validate().passed());
    // at least one nontrivial stabilizer exists on the subdivision
    let has_nontrivial = cog
        .base()
        .vertices
        .iter()
        .any(|v| cog.local_group(v).order() > 1);
    assert!(has_nontrivial);
}

/// Complexes entered by hand without twists default them to the identity
/// and still validate.
#[test]
fn default_twists_are_identity() {
    let cog = fixtures::z2_tet();
    for (a, b) in cog.base().compositions.keys() {
        assert!(cog.twist(a, b).is_identity());
    }
    assert!(cog.validate().passed());
}

/// The folded-segment complex (order-two local group over the segment
/// shape) has fundamental group of order two by enumeration, matching the
/// quotient construction it came from.
#[test]
fn flip_complex_pi1_order_two() {
    let act = fixtures::flip_action();
    let choices = action::default_choices(&act);
    let cog = action::induced_cog(&act, &choices).unwrap();
    let tree = cog_core::scwol::spanning_tree(cog.base());
    let (_, simplified) = fp::pi1_presentation(&cog, &tree).unwrap();
    let table = fp::todd_coxeter(&simplified.pres, &[], 1_000).unwrap();
    assert_eq!(table.coset_count(), 2);
}

/// Reflection subgroups of the hexagonal cycle act with inversions through
/// edge midpoints but not through vertices; the filter over the subgroup
/// lattice sees exactly the inversion-free ones.
#[test]
fn hexagon_inversion_free_subgroups() {
    let (group, act) = automorphism_group(&fixtures::hexagon());
    assert_eq!(group.order(), 12);
    let free = action::inversion_free_subgroups(&act);
    // 1, three vertex reflections, the antipode, the rotation subgroups of
    // order 3 and 6, and the vertex-reflection triangle group
    assert_eq!(free.len(), 8);
    let max = action::max_inversion_free_subgroup(&act);
    assert_eq!(max.len(), 6);
}

/// A deliberately wrong twist is caught by the axioms with a witness naming
/// the offending pair or triple.
#[test]
fn broken_twist_has_witness() {
    let cog = fixtures::z2_tet();
    let (a, b) = cog.base().compositions.keys().next().unwrap().clone();
    let mutated = cog.with_twist(&a, &b, Perm::from_cycle(2, &[0, 1]).unwrap());
    let report = mutated.validate();
    assert!(!report.passed());
    assert!(report.failures()[0].contains('('));
}

/// The identification of the fundamental group with the acting group is
/// homotopic to the canonical morphism through the inverse carrier products.
#[test]
fn carrier_homotopy_between_identification_and_canonical() {
    use cog_core::cog::MorphismToGroup;
    use cog_core::fp::GenLabel;
    use cog_core::functor::TreeData;
    use cog_core::perm::GroupHom;

    let act = fixtures::flip_action();
    let choices = action::default_choices(&act);
    let cog = action::induced_cog(&act, &choices).unwrap();
    let td = TreeData::canonical(cog.base());
    let ident = cog_core::functor::identify_pi1_with_group(&act, &choices, &td, BUDGET).unwrap();
    let phi1 = action::canonical_morphism(&act, &choices).unwrap();
    // the composite morphism sending g at sigma to the identified image of
    // its symbol
    let real = &ident.real;
    let degree = act.group().degree();
    let mut local_maps = BTreeMap::new();
    for v in &cog.base().vertices {
        let hom = GroupHom::from_full_map(cog.local_group(v), act.group(), |g| {
            if g.is_identity() {
                Perm::identity(degree)
            } else {
                ident.apply(&real.symbol_image(&GenLabel::Vertex {
                    vertex: v.clone(),
                    element: g.images().to_vec(),
                }))
            }
        })
        .unwrap();
        local_maps.insert(v.clone(), hom);
    }
    let edge_elements: BTreeMap<String, Perm> = cog
        .base()
        .edge_ids()
        .into_iter()
        .map(|a| {
            let img = ident.apply(&real.symbol_image(&GenLabel::Edge { edge: a.clone() }));
            (a, img)
        })
        .collect();
    let composite =
        MorphismToGroup::new(cog.clone(), act.group().clone(), local_maps, edge_elements).unwrap();
    assert!(composite.validate().passed());
    // homotopy given by the inverse carrier products
    let k: BTreeMap<String, Perm> = cog
        .base()
        .vertices
        .iter()
        .map(|v| {
            let h = td.carrier_product(cog.base(), &choices, degree, v);
            (v.clone(), h.inverse())
        })
        .collect();
    assert!(cog_core::cog::check_homotopy(&composite, &phi1, &k));
}

/// The quotient projection of a free action is a covering of scwols, and
/// the flag agrees with a direct star-bijection re-check on the terminal
/// side.
#[test]
fn free_quotient_projection_is_scwol_covering() {
    let (group, act) = automorphism_group(&fixtures::hexagon());
    // the antipodal rotation acts freely
    let antipode = group
        .elements()
        .iter()
        .filter(|g| g.order() == 2)
        .find(|g| {
            let sub = act.sub_action(&[group.identity(), (*g).clone()]).unwrap();
            sub.validate().passed()
                && act
                    .scwol()
                    .vertex_ids()
                    .iter()
                    .all(|v| sub.act_vertex(g, v) != *v)
        })
        .unwrap()
        .clone();
    let sub = act.sub_action(&[group.identity(), antipode]).unwrap();
    let (_, projection) = sub.quotient();
    let flags = projection.check();
    assert!(flags.valid && flags.nondegenerate && flags.covering);
    // direct re-check of the terminal-side star bijections
    for v in projection.source.vertex_ids() {
        let lv = projection.vertex_image(&v);
        let incoming: Vec<&String> = projection
            .source
            .edges
            .values()
            .filter(|e| e.t == v)
            .map(|e| &e.id)
            .collect();
        let image_set: BTreeSet<&String> =
            incoming.iter().map(|a| &projection.edge_map[*a]).collect();
        let target_in: BTreeSet<&String> = projection
            .target
            .edges
            .values()
            .filter(|e| e.t == lv)
            .map(|e| &e.id)
            .collect();
        assert_eq!(image_set.len(), incoming.len());
        assert_eq!(image_set, target_in);
    }
}

/// Trivial complexes over every fixture validate and develop trivially.
#[test]
fn trivial_complexes_develop() {
    for s in [fixtures::seg(), fixtures::tripod(), fixtures::hexagon()] {
        let cog = ComplexOfGroups::trivial_over(s.clone());
        assert!(cog.validate().passed());
        let tree = cog_core::scwol::spanning_tree(&s);
        let (_, simplified) = fp::pi1_presentation(&cog, &tree).unwrap();
        // free group of rank |E| - |tree|
        assert_eq!(
            simplified.pres.generator_count(),
            s.edges.len() - tree.len()
        );
    }
}
