//! Command-line surface for the scwol / complexes-of-groups toolkit.
//!
//! Exit codes: 0 on success or a passing check, 1 on a failing validation
//! (the JSON report still goes to standard output), 2 on usage errors.
//! All output is deterministic byte-for-byte for identical inputs.

mod files;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use cog_core::action::{self, automorphism_group, max_inversion_free_subgroup};
use cog_core::bij::{bijection_audit, conjugacy_solve, enumerate_overgroups, OvergroupContext};
use cog_core::dev::{self, UniversalCover};
use cog_core::fp;
use cog_core::functor::{induced_maps, TreeData};
use cog_core::perm::Perm;
use cog_core::scwol::{barycentric_subdivision, Scwol};

#[derive(Parser)]
#[command(
    name = "cog",
    about = "Scwols, complexes of groups, developments and covering theory",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scwol, complex, action or morphism file
    Validate {
        file: PathBuf,
        /// what the file contains: scwol | complex | action | morphism
        #[arg(long, default_value = "scwol")]
        kind: String,
    },
    /// Barycentric subdivision of a scwol
    Subdivide { file: PathBuf },
    /// Automorphism group of a scwol, with inversion information
    Aut { file: PathBuf },
    /// Quotient scwol and projection of an action
    Quotient {
        #[arg(long)]
        action: PathBuf,
    },
    /// Exact covolume of the acting group or of a subgroup
    Covolume {
        #[arg(long)]
        action: PathBuf,
        /// optional subgroup (group file on the acting group's domain)
        #[arg(long)]
        subgroup: Option<PathBuf>,
    },
    /// Development of a morphism to a group, or the universal cover of a
    /// complex over a tree
    Develop {
        /// morphism-to-group file
        #[arg(long, conflicts_with = "complex")]
        morphism: Option<PathBuf>,
        /// complex file (universal cover mode; requires --tree)
        #[arg(long, requires = "tree")]
        complex: Option<PathBuf>,
        /// comma-separated maximal tree edges
        #[arg(long)]
        tree: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Fundamental group presentation with respect to a maximal tree
    Pi1 {
        #[arg(long)]
        complex: PathBuf,
        /// comma-separated maximal tree edges
        #[arg(long)]
        tree: String,
        /// also report invariant factors and free rank
        #[arg(long)]
        abelianization: bool,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Covering check for a morphism of complexes of groups
    CoverCheck {
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Induced maps on fundamental groups and universal covers
    InducedMaps {
        #[arg(long)]
        morphism: PathBuf,
        /// comma-separated source tree edges
        #[arg(long)]
        tree: String,
        /// comma-separated target tree edges
        #[arg(long)]
        target_tree: String,
        /// source basepoint (least vertex when omitted)
        #[arg(long)]
        basepoint: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Overgroups of a cell group acting without inversions
    Overgroups {
        #[arg(long)]
        scwol: PathBuf,
        /// group file over the cell set (vertices then edges, id order)
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Full overgroup/covering correspondence audit
    BijectionAudit {
        #[arg(long)]
        scwol: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Constructive conjugacy for a free subgroup of the orbit overgroup
    Conjugacy {
        #[arg(long)]
        scwol: PathBuf,
        /// the target subgroup H (cell group file)
        #[arg(long)]
        h: PathBuf,
        /// the free subgroup to conjugate (cell group file)
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// DOT export of the 1-skeleton
    ExportDot { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable reports")
    );
}

fn parse_tree(arg: &str) -> Vec<String> {
    arg.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Validate { file, kind } => {
            let failures: Vec<String> = match kind.as_str() {
                "scwol" => files::load_scwol(&file)?.validate().failures().to_vec(),
                "complex" => files::load_complex(&file)?.validate().failures().to_vec(),
                "action" => files::load_action(&file)?.validate().failures().to_vec(),
                "morphism" => files::load_cog_morphism(&file)?
                    .validate()
                    .failures()
                    .to_vec(),
                other => return Err(anyhow!("unknown kind {other:?}")),
            };
            let pass = failures.is_empty();
            emit(&serde_json::json!({"pass": pass, "failures": failures}));
            Ok(pass)
        }
        Command::Subdivide { file } => {
            let s = files::load_scwol(&file)?;
            emit(&barycentric_subdivision(&s).to_json());
            Ok(true)
        }
        Command::Aut { file } => {
            let s = files::load_scwol(&file)?;
            let (group, act) = automorphism_group(&s);
            let inversion_report = act.validate();
            let max_free = max_inversion_free_subgroup(&act);
            emit(&serde_json::json!({
                "order": group.order(),
                "generators": group
                    .generators()
                    .iter()
                    .map(|p| p.images().to_vec())
                    .collect::<Vec<_>>(),
                "acts_without_inversions": inversion_report.passed(),
                "inversion_witnesses": inversion_report.failures(),
                "max_inversion_free_order": max_free.len(),
            }));
            Ok(true)
        }
        Command::Quotient { action } => {
            let act = files::load_action(&action)?;
            let report = act.validate();
            if !report.passed() {
                emit(&serde_json::json!({"pass": false, "failures": report.failures()}));
                return Ok(false);
            }
            let (q, p) = act.quotient();
            emit(&serde_json::json!({
                "scwol": q.to_json(),
                "projection": {
                    "vertex_map": p.vertex_map,
                    "edge_map": p.edge_map,
                    "nondegenerate": p.check().nondegenerate,
                }
            }));
            Ok(true)
        }
        Command::Covolume { action, subgroup } => {
            let act = files::load_action(&action)?;
            let elems: Vec<Perm> = match subgroup {
                None => act.group().elements().to_vec(),
                Some(path) => files::load_group(&path)?.elements().to_vec(),
            };
            let vol = action::covolume(&act, &elems)?;
            emit(&serde_json::json!({"covolume": vol.to_string()}));
            Ok(true)
        }
        Command::Develop {
            morphism,
            complex,
            tree,
            budget,
        } => match (morphism, complex) {
            (Some(path), None) => {
                let phi = files::load_morphism_to_group(&path)?;
                let report = phi.validate();
                if !report.passed() {
                    emit(&serde_json::json!({"pass": false, "failures": report.failures()}));
                    return Ok(false);
                }
                let dv = dev::develop(&phi)?;
                emit(&serde_json::json!({
                    "scwol": dv.scwol.to_json(),
                    "action": files::action_json(&dv.action),
                    "injective_on_local_groups": phi.injective_on_local_groups(),
                }));
                Ok(true)
            }
            (None, Some(path)) => {
                let cog = files::load_complex(&path)?;
                let tree = parse_tree(&tree.expect("clap enforces the tree argument"));
                match dev::universal_cover(&cog, &tree, budget)? {
                    UniversalCover::Finite(real) => {
                        emit(&serde_json::json!({
                            "scwol": real.dev.scwol.to_json(),
                            "action": files::action_json(&real.dev.action),
                            "fundamental_group_order": real.order(),
                        }));
                        Ok(true)
                    }
                    UniversalCover::Partial(ball) => {
                        emit(&serde_json::json!({
                            "partial": true,
                            "radius": ball.radius,
                            "center": ball.center,
                            "scwol": ball.scwol.to_json(),
                        }));
                        Ok(true)
                    }
                }
            }
            _ => Err(anyhow!("pass exactly one of --morphism or --complex")),
        },
        Command::Pi1 {
            complex,
            tree,
            abelianization,
            budget,
        } => {
            let cog = files::load_complex(&complex)?;
            let tree = parse_tree(&tree);
            let (_, simplified) = fp::pi1_presentation(&cog, &tree)?;
            let enumeration = match fp::todd_coxeter(&simplified.pres, &[], budget) {
                Ok(t) => serde_json::json!({"cosets": t.coset_count()}),
                Err(_) => serde_json::json!({"exceeded": budget}),
            };
            let mut out = simplified.pres.to_json();
            out["enumeration"] = enumeration;
            if abelianization {
                let ab = fp::abelianization(&simplified.pres);
                out["abelianization"] = serde_json::json!({
                    "torsion": ab.torsion,
                    "free_rank": ab.free_rank,
                });
            }
            emit(&out);
            Ok(true)
        }
        Command::CoverCheck { morphism } => {
            let m = files::load_cog_morphism(&morphism)?;
            let check = m.is_covering();
            emit(&serde_json::json!({
                "covering": check.covering,
                "sheets": check.sheets.map(|s| s.to_string()),
                "witnesses": check.witnesses,
            }));
            Ok(check.covering)
        }
        Command::InducedMaps {
            morphism,
            tree,
            target_tree,
            basepoint,
            budget,
        } => {
            let m = files::load_cog_morphism(&morphism)?;
            let basepoint = basepoint.unwrap_or_else(|| {
                m.source
                    .base()
                    .vertices
                    .iter()
                    .next()
                    .cloned()
                    .unwrap_or_default()
            });
            let src_td = TreeData::new(m.source.base(), parse_tree(&tree), basepoint)?;
            let pair = induced_maps(&m, &src_td, &parse_tree(&target_tree), budget)?;
            let lambda_table: BTreeMap<String, Vec<usize>> = pair
                .lambda
                .iter()
                .map(|(p, q)| (format!("{:?}", p.images()), q.images().to_vec()))
                .collect();
            let u: BTreeMap<String, Vec<usize>> = pair
                .u
                .iter()
                .map(|(v, p)| (v.clone(), p.images().to_vec()))
                .collect();
            emit(&serde_json::json!({
                "group_map": lambda_table,
                "u": u,
                "vertex_map": pair.cover_map.vertex_map,
                "edge_map": pair.cover_map.edge_map,
                "group_map_injective": pair.lambda_injective,
                "cover_map_isomorphism": pair.cover_map_bijective,
            }));
            Ok(true)
        }
        Command::Overgroups {
            scwol,
            gamma,
            budget,
        } => {
            let x = files::load_scwol(&scwol)?;
            let gamma = files::load_cell_group(&gamma, &x)?;
            let ctx = OvergroupContext::new(&x, gamma, budget)?;
            let overgroups = enumerate_overgroups(&ctx);
            let listed: Vec<serde_json::Value> = overgroups
                .iter()
                .map(|h| {
                    serde_json::json!({
                        "order": h.len(),
                        "elements": h.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            emit(&serde_json::json!({"count": overgroups.len(), "overgroups": listed}));
            Ok(true)
        }
        Command::BijectionAudit {
            scwol,
            gamma,
            budget,
        } => {
            let x = files::load_scwol(&scwol)?;
            let gamma = files::load_cell_group(&gamma, &x)?;
            let ctx = OvergroupContext::new(&x, gamma, budget)?;
            let report = bijection_audit(&ctx)?;
            let pass = report.all_consistent;
            emit(&serde_json::to_value(&report).context("serializing audit")?);
            Ok(pass)
        }
        Command::Conjugacy {
            scwol,
            h,
            gamma,
            budget,
        } => {
            let x = files::load_scwol(&scwol)?;
            let h = files::load_cell_group(&h, &x)?;
            let gamma = files::load_cell_group(&gamma, &x)?;
            let report = conjugacy_solve(&x, &h, &gamma, budget)?;
            let pass = report.in_orbit_overgroup && report.conjugates_into_h;
            emit(&serde_json::to_value(&report).context("serializing report")?);
            Ok(pass)
        }
        Command::ExportDot { file } => {
            let s: Scwol = files::load_scwol(&file)?;
            print!("{}", s.to_dot());
            Ok(true)
        }
    }
}
