//! Wire formats: JSON schemas for scwols, groups, actions, complexes of
//! groups and their morphisms.  Arrays are emitted in canonical (sorted)
//! order so exports are byte-stable and diffable.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cog_core::action::ScwolAction;
use cog_core::cog::{CogMorphism, ComplexOfGroups, MorphismToGroup};
use cog_core::perm::{GroupHom, Perm, PermGroup};
use cog_core::scwol::{Scwol, ScwolMorphism};

#[derive(Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn to_group(&self) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|im| Perm::from_images(im.clone()).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
        Ok(PermGroup::generated_default_cap(self.degree, gens)?)
    }

    pub fn from_group(g: &PermGroup) -> Self {
        GroupFile {
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }
}

/// A group given inline or by file reference.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupFile),
}

impl GroupRef {
    pub fn load(&self, base: &Path) -> Result<PermGroup> {
        match self {
            GroupRef::Inline(f) => f.to_group(),
            GroupRef::Path(p) => load_group(&resolve(base, p)),
        }
    }
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

pub fn load_scwol(path: &Path) -> Result<Scwol> {
    let v = read_json(path)?;
    Ok(Scwol::from_json(&v)?)
}

pub fn load_group(path: &Path) -> Result<PermGroup> {
    let f: GroupFile = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("invalid group file {}", path.display()))?;
    f.to_group()
}

#[derive(Serialize, Deserialize)]
pub struct ActionFile {
    pub scwol: String,
    pub group: GroupRef,
    /// generator index (as a string key) -> vertex map
    pub vertex_action: BTreeMap<String, BTreeMap<String, String>>,
    pub edge_action: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn load_action(path: &Path) -> Result<ScwolAction> {
    let f: ActionFile = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("invalid action file {}", path.display()))?;
    let scwol = load_scwol(&resolve(path, &f.scwol))?;
    let group = f.group.load(path)?;
    let n = group.generators().len();
    let mut gen_vmaps = Vec::with_capacity(n);
    let mut gen_emaps = Vec::with_capacity(n);
    for k in 0..n {
        let key = k.to_string();
        let vm = f
            .vertex_action
            .get(&key)
            .with_context(|| format!("missing vertex action for generator {k}"))?;
        let em = f
            .edge_action
            .get(&key)
            .with_context(|| format!("missing edge action for generator {k}"))?;
        gen_vmaps.push(vm.clone());
        gen_emaps.push(em.clone());
    }
    Ok(ScwolAction::from_generator_maps(
        scwol, group, gen_vmaps, gen_emaps,
    )?)
}

pub fn action_json(act: &ScwolAction) -> serde_json::Value {
    let mut vertex_action = BTreeMap::new();
    let mut edge_action = BTreeMap::new();
    for (k, g) in act.group().generators().iter().enumerate() {
        let aut = act.aut_of(g);
        vertex_action.insert(k.to_string(), aut.vmap.clone());
        edge_action.insert(k.to_string(), aut.emap.clone());
    }
    serde_json::json!({
        "group": GroupFile::from_group(act.group()),
        "vertex_action": vertex_action,
        "edge_action": edge_action,
    })
}

#[derive(Serialize, Deserialize)]
pub struct EdgeHomFile {
    pub gen_images: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
pub struct TwistFile {
    pub a: String,
    pub b: String,
    pub element: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct ComplexFile {
    pub scwol: String,
    pub local_groups: BTreeMap<String, GroupRef>,
    pub edge_homs: BTreeMap<String, EdgeHomFile>,
    #[serde(default)]
    pub twists: Vec<TwistFile>,
}

pub fn load_complex(path: &Path) -> Result<ComplexOfGroups> {
    let f: ComplexFile = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("invalid complex file {}", path.display()))?;
    let scwol = load_scwol(&resolve(path, &f.scwol))?;
    let mut local = BTreeMap::new();
    for (v, g) in &f.local_groups {
        local.insert(v.clone(), g.load(path)?);
    }
    let mut edge_homs = BTreeMap::new();
    for (a, hom) in &f.edge_homs {
        let e = scwol
            .edges
            .get(a)
            .with_context(|| format!("edge hom for unknown edge {a}"))?;
        let src = local
            .get(&e.i)
            .with_context(|| format!("no local group at {}", e.i))?;
        let tgt = local
            .get(&e.t)
            .with_context(|| format!("no local group at {}", e.t))?;
        let images = hom
            .gen_images
            .iter()
            .map(|im| Perm::from_images(im.clone()).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
        edge_homs.insert(
            a.clone(),
            GroupHom::from_generator_images(src, tgt, &images)?,
        );
    }
    let mut twists = BTreeMap::new();
    for t in &f.twists {
        twists.insert(
            (t.a.clone(), t.b.clone()),
            Perm::from_images(t.element.clone())?,
        );
    }
    Ok(ComplexOfGroups::new(scwol, local, edge_homs, twists)?)
}

#[derive(Serialize, Deserialize)]
pub struct CogMorphismFile {
    pub source: String,
    pub target: String,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
    /// generator images of each local map
    pub local_maps: BTreeMap<String, Vec<Vec<usize>>>,
    pub edge_elements: BTreeMap<String, Vec<usize>>,
}

pub fn load_cog_morphism(path: &Path) -> Result<CogMorphism> {
    let f: CogMorphismFile = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("invalid morphism file {}", path.display()))?;
    let source = load_complex(&resolve(path, &f.source))?;
    let target = load_complex(&resolve(path, &f.target))?;
    let l = ScwolMorphism::new(
        source.base().clone(),
        target.base().clone(),
        f.vertex_map.clone(),
        f.edge_map.clone(),
    )?;
    let mut local_maps = BTreeMap::new();
    for v in &source.base().vertices {
        let images = f
            .local_maps
            .get(v)
            .with_context(|| format!("missing local map at {v}"))?
            .iter()
            .map(|im| Perm::from_images(im.clone()).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
        let tgt = target.local_group(l.vertex_image(v));
        local_maps.insert(
            v.clone(),
            GroupHom::from_generator_images(source.local_group(v), tgt, &images)?,
        );
    }
    let mut edge_elements = BTreeMap::new();
    for (a, im) in &f.edge_elements {
        edge_elements.insert(a.clone(), Perm::from_images(im.clone())?);
    }
    Ok(CogMorphism::new(
        source,
        target,
        l,
        local_maps,
        edge_elements,
    )?)
}

#[derive(Serialize, Deserialize)]
pub struct MorphismToGroupFile {
    pub complex: String,
    pub group: GroupRef,
    pub local_maps: BTreeMap<String, Vec<Vec<usize>>>,
    pub edge_elements: BTreeMap<String, Vec<usize>>,
}

pub fn load_morphism_to_group(path: &Path) -> Result<MorphismToGroup> {
    let f: MorphismToGroupFile = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("invalid morphism file {}", path.display()))?;
    let complex = load_complex(&resolve(path, &f.complex))?;
    let group = f.group.load(path)?;
    let mut local_maps = BTreeMap::new();
    for v in &complex.base().vertices {
        let images = f
            .local_maps
            .get(v)
            .with_context(|| format!("missing local map at {v}"))?
            .iter()
            .map(|im| Perm::from_images(im.clone()).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
        local_maps.insert(
            v.clone(),
            GroupHom::from_generator_images(complex.local_group(v), &group, &images)?,
        );
    }
    let mut edge_elements = BTreeMap::new();
    for (a, im) in &f.edge_elements {
        edge_elements.insert(a.clone(), Perm::from_images(im.clone())?);
    }
    Ok(MorphismToGroup::new(
        complex,
        group,
        local_maps,
        edge_elements,
    )?)
}

/// A group of cell permutations over a scwol (vertices in id order, then
/// edges), used for the overgroup and conjugacy commands.
pub fn load_cell_group(path: &Path, scwol: &Scwol) -> Result<Vec<Perm>> {
    let group = load_group(path)?;
    let want = scwol.vertices.len() + scwol.edges.len();
    if group.degree() != want {
        bail!(
            "cell group degree {} does not match |V|+|E| = {want}",
            group.degree()
        );
    }
    Ok(group.elements().to_vec())
}
