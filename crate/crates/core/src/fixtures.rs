//! Desk-scale fixtures shared by tests, the CLI examples and documentation.
//!
//! Naming: `seg` is the scwol of a segment (two endpoints and one edge cell),
//! `path2` the scwol of a two-segment path, `tripod` the cone on three
//! points, `tri`/`tet` the solid triangle/tetrahedron, `hexagon` a six-cycle
//! graph.  `flip_*` is the order-two action folding `path2` in half.

use std::collections::BTreeMap;

use crate::action::ScwolAction;
use crate::cog::ComplexOfGroups;
use crate::perm::{Perm, PermGroup};
use crate::scwol::{scwol_from_complex, CellComplexDescription, Scwol};

/// Two vertices `v1`, `v2` and an edge cell `e`; scwol edges `a1: e -> v1`
/// and `a2: e -> v2`.
pub fn seg() -> Scwol {
    Scwol::new(
        ["v1".into(), "v2".into(), "e".into()],
        [
            ("a1".into(), "e".into(), "v1".into()),
            ("a2".into(), "e".into(), "v2".into()),
        ],
        [],
    )
    .unwrap()
}

pub fn segment_complex() -> CellComplexDescription {
    CellComplexDescription::new([
        ("p1".to_string(), vec![]),
        ("p2".to_string(), vec![]),
        ("e12".to_string(), vec!["p1".to_string(), "p2".to_string()]),
    ])
}

pub fn seg_from_complex() -> Scwol {
    scwol_from_complex(&segment_complex()).unwrap()
}

pub fn triangle_complex() -> CellComplexDescription {
    CellComplexDescription::new([
        ("p1".to_string(), vec![]),
        ("p2".to_string(), vec![]),
        ("p3".to_string(), vec![]),
        ("e12".to_string(), vec!["p1".to_string(), "p2".to_string()]),
        ("e13".to_string(), vec!["p1".to_string(), "p3".to_string()]),
        ("e23".to_string(), vec!["p2".to_string(), "p3".to_string()]),
        (
            "f".to_string(),
            vec!["e12".to_string(), "e13".to_string(), "e23".to_string()],
        ),
    ])
}

/// Scwol of the filled triangle: 7 vertices, 12 edges, 6 composable pairs.
pub fn tri() -> Scwol {
    scwol_from_complex(&triangle_complex()).unwrap()
}

pub fn tetrahedron_complex() -> CellComplexDescription {
    let mut cells: Vec<(String, Vec<String>)> = Vec::new();
    for v in 1..=4 {
        cells.push((format!("p{v}"), vec![]));
    }
    let edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
    for (a, b) in edges {
        cells.push((format!("e{a}{b}"), vec![format!("p{a}"), format!("p{b}")]));
    }
    let faces = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)];
    for (a, b, c) in faces {
        cells.push((
            format!("f{a}{b}{c}"),
            vec![format!("e{a}{b}"), format!("e{a}{c}"), format!("e{b}{c}")],
        ));
    }
    cells.push((
        "s".to_string(),
        faces
            .iter()
            .map(|(a, b, c)| format!("f{a}{b}{c}"))
            .collect(),
    ));
    CellComplexDescription::new(cells)
}

/// Scwol of the solid tetrahedron: 15 vertices, 50 edges, 24 maximal flags.
pub fn tet() -> Scwol {
    scwol_from_complex(&tetrahedron_complex()).unwrap()
}

pub fn path2_complex() -> CellComplexDescription {
    CellComplexDescription::new([
        ("p1".to_string(), vec![]),
        ("p2".to_string(), vec![]),
        ("p3".to_string(), vec![]),
        ("q1".to_string(), vec!["p1".to_string(), "p2".to_string()]),
        ("q2".to_string(), vec!["p2".to_string(), "p3".to_string()]),
    ])
}

/// Scwol of a two-segment path: 5 vertices, 4 edges.
pub fn path2() -> Scwol {
    scwol_from_complex(&path2_complex()).unwrap()
}

pub fn tripod_complex() -> CellComplexDescription {
    CellComplexDescription::new([
        ("c".to_string(), vec![]),
        ("l1".to_string(), vec![]),
        ("l2".to_string(), vec![]),
        ("l3".to_string(), vec![]),
        ("e1".to_string(), vec!["c".to_string(), "l1".to_string()]),
        ("e2".to_string(), vec!["c".to_string(), "l2".to_string()]),
        ("e3".to_string(), vec!["c".to_string(), "l3".to_string()]),
    ])
}

/// Scwol of the cone on three points: 7 vertices, 6 edges; its automorphism
/// group is the symmetric group on the three legs and acts without
/// inversions.
pub fn tripod() -> Scwol {
    scwol_from_complex(&tripod_complex()).unwrap()
}

/// Scwol of a hexagonal 6-cycle graph (no 2-cells): 12 vertices, 12 edges.
pub fn hexagon() -> Scwol {
    let mut cells: Vec<(String, Vec<String>)> = Vec::new();
    for k in 0..6 {
        cells.push((format!("h{k}"), vec![]));
    }
    for k in 0..6 {
        let a = k;
        let b = (k + 1) % 6;
        cells.push((format!("g{a}{b}"), vec![format!("h{a}"), format!("h{b}")]));
    }
    scwol_from_complex(&CellComplexDescription::new(cells)).unwrap()
}

/// A tree with legs of lengths 1, 2 and 3: no nontrivial automorphisms.
pub fn spider123() -> Scwol {
    let mut cells: Vec<(String, Vec<String>)> = vec![("c".to_string(), vec![])];
    let legs: [&[&str]; 3] = [&["a1"], &["b1", "b2"], &["d1", "d2", "d3"]];
    for leg in legs {
        let mut prev = "c".to_string();
        for v in leg {
            cells.push((v.to_string(), vec![]));
            cells.push((format!("E{prev}_{v}"), vec![prev.clone(), v.to_string()]));
            prev = v.to_string();
        }
    }
    scwol_from_complex(&CellComplexDescription::new(cells)).unwrap()
}

/// Square complex (4 vertices, 4 edges, 1 face) as a scwol.
pub fn square() -> Scwol {
    let mut cells: Vec<(String, Vec<String>)> = Vec::new();
    for k in 0..4 {
        cells.push((format!("s{k}"), vec![]));
    }
    for k in 0..4usize {
        let a = k;
        let b = (k + 1) % 4;
        cells.push((format!("q{a}{b}"), vec![format!("s{a}"), format!("s{b}")]));
    }
    cells.push((
        "F".to_string(),
        vec!["q01".into(), "q12".into(), "q23".into(), "q30".into()],
    ));
    scwol_from_complex(&CellComplexDescription::new(cells)).unwrap()
}

/// The order-two action on `path2` swapping the two segments and fixing the
/// middle vertex; it has no inversions.
pub fn flip_action() -> ScwolAction {
    let s = path2();
    let group =
        PermGroup::generated_default_cap(2, vec![Perm::from_cycle(2, &[0, 1]).unwrap()]).unwrap();
    let mut vmap = BTreeMap::new();
    for (a, b) in [
        ("p1", "p3"),
        ("p3", "p1"),
        ("p2", "p2"),
        ("q1", "q2"),
        ("q2", "q1"),
    ] {
        vmap.insert(a.to_string(), b.to_string());
    }
    // edge ids come from face_edge_id: "<face><<cell>"
    let mut emap = BTreeMap::new();
    for (a, b) in [
        ("p1<q1", "p3<q2"),
        ("p3<q2", "p1<q1"),
        ("p2<q1", "p2<q2"),
        ("p2<q2", "p2<q1"),
    ] {
        emap.insert(a.to_string(), b.to_string());
    }
    ScwolAction::from_generator_maps(s, group, vec![vmap], vec![emap]).unwrap()
}

/// The complex with local groups Z/2, Z/2 at the endpoints of `seg` and a
/// trivial group on the edge cell; its fundamental group is the infinite
/// dihedral group.
pub fn d3seg() -> ComplexOfGroups {
    let z2 =
        PermGroup::generated_default_cap(2, vec![Perm::from_cycle(2, &[0, 1]).unwrap()]).unwrap();
    let trivial = PermGroup::trivial(1);
    let mut local = BTreeMap::new();
    local.insert("v1".to_string(), z2.clone());
    local.insert("v2".to_string(), z2);
    local.insert("e".to_string(), trivial);
    ComplexOfGroups::simple(seg(), local).unwrap()
}

/// A complex over `tet` with Z/2 everywhere, identity edge maps and identity
/// twists; its 24 flag triples make the cocycle condition nonvacuous.
pub fn z2_tet() -> ComplexOfGroups {
    let z2 =
        PermGroup::generated_default_cap(2, vec![Perm::from_cycle(2, &[0, 1]).unwrap()]).unwrap();
    let s = tet();
    let local: BTreeMap<String, PermGroup> =
        s.vertices.iter().map(|v| (v.clone(), z2.clone())).collect();
    ComplexOfGroups::simple(s, local).unwrap()
}
