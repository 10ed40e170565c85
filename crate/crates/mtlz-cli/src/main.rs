use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use mtlz_core::catalog::{
    check_catalog, export_catalog, orientation_dot, prove_report, run_pipeline,
    ExportFormat, GeneratorMode, StageSet,
};
use mtlz_core::family::numeric_family_search;
use mtlz_core::generate::{known_graph_names, resolve_graph};
use mtlz_core::orient::{bipartite_cycle_count, valid_orientations};
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "mtlz", version, about = "Classification toolkit for commuting Landau-Zener families")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List connected triangle-free candidate graphs as graph6 lines.
    Enumerate {
        /// Maximum vertex count (2..=12).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "exhaustive")]
        mode: GeneratorMode,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the staged pipeline and print the JSON catalog.
    Classify {
        #[arg(long)]
        n: usize,
        /// Deepest stage to run: properties, rules, orient, signs.
        #[arg(long, default_value = "signs")]
        stages: StageSet,
        #[arg(long, default_value = "exhaustive")]
        mode: GeneratorMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify milestone counts; exit code 2 on any mismatch.
        #[arg(long)]
        check: bool,
    },
    /// List orientation classes of one graph (registry name or graph6).
    Orient {
        graph: String,
        /// Emit DOT digraphs, one per class, instead of the text table.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sign-level solvability report for one graph.
    Prove {
        graph: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric family search over the sign-feasible orientation classes.
    Family {
        graph: String,
        /// Number of commuting Hamiltonians.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a catalog as json, graph6, or dot.
    Export {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "signs")]
        stages: StageSet,
        #[arg(long, default_value = "exhaustive")]
        mode: GeneratorMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "json")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List graph registry names usable wherever a graph is expected.
    Names,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Enumerate { n, mode, out } => {
            if !(2..=12).contains(&n) {
                bail!("--n must be in 2..=12");
            }
            let catalog = run_pipeline(n, "properties".parse().unwrap(), mode, 0);
            let mut text = String::new();
            for e in &catalog.entries {
                text.push_str(&e.graph6);
                text.push('\n');
            }
            emit(&out, &text)?;
        }
        Cmd::Classify {
            n,
            stages,
            mode,
            seed,
            out,
            check,
        } => {
            if !(2..=12).contains(&n) {
                bail!("--n must be in 2..=12");
            }
            let catalog = run_pipeline(n, stages, mode, seed);
            let mut text = serde_json::to_string_pretty(&catalog)?;
            text.push('\n');
            emit(&out, &text)?;
            if check {
                let issues = check_catalog(&catalog);
                if !issues.is_empty() {
                    for issue in &issues {
                        eprintln!("check: {issue}");
                    }
                    std::process::exit(2);
                }
                eprintln!("check: all milestone counts match");
            }
        }
        Cmd::Orient { graph, dot, out } => {
            let g = resolve_graph(&graph)?;
            let classes = valid_orientations(&g);
            let mut text = String::new();
            if dot {
                for (i, o) in classes.iter().enumerate() {
                    text.push_str(&orientation_dot(&g, o, &format!("class{i}")));
                    text.push('\n');
                }
            } else {
                text.push_str(&format!(
                    "{}: {} orientation classes up to symmetry\n",
                    graph,
                    classes.len()
                ));
                for (i, o) in classes.iter().enumerate() {
                    let arrows: Vec<String> = o
                        .edges
                        .iter()
                        .map(|&(u, v)| match o.arrow_from(u, v) {
                            true => format!("{}->{}", u + 1, v + 1),
                            false => format!("{}->{}", v + 1, u + 1),
                        })
                        .collect();
                    text.push_str(&format!(
                        "class {i}: bipartite 4-cycles {} | {}\n",
                        bipartite_cycle_count(&g, o)
                            .map(|c| c.to_string())
                            .unwrap_or_else(|e| format!("({e})")),
                        arrows.join(" ")
                    ));
                }
            }
            emit(&out, &text)?;
        }
        Cmd::Prove { graph, out } => {
            let g = resolve_graph(&graph)?;
            emit(&out, &prove_report(&g))?;
        }
        Cmd::Family {
            graph,
            m,
            seed,
            starts,
            out,
        } => {
            let g = resolve_graph(&graph)?;
            let classes = valid_orientations(&g);
            let mut results = Vec::new();
            for (i, o) in classes.iter().enumerate() {
                let feasible = mtlz_core::signs::SignSystem::build(&g, o)
                    .map(|sys| matches!(sys.solve(), mtlz_core::signs::SignVerdict::Feasible(_)))
                    .unwrap_or(false);
                if !feasible {
                    continue;
                }
                let outcome = numeric_family_search::<f64>(&g, o, m, seed, starts);
                results.push(serde_json::json!({
                    "class": i,
                    "residual": outcome.residual,
                    "good_family_margin": outcome.good_family_margin,
                    "success": outcome.success,
                    "starts": outcome.starts,
                    "family": if outcome.success { Some(outcome.family.to_json()) } else { None },
                }));
            }
            let mut text = serde_json::to_string_pretty(&serde_json::json!({
                "graph": graph,
                "m": m,
                "orientation_classes": classes.len(),
                "sign_feasible_classes": results.len(),
                "searches": results,
            }))?;
            text.push('\n');
            emit(&out, &text)?;
        }
        Cmd::Export {
            n,
            stages,
            mode,
            seed,
            format,
            out,
        } => {
            if !(2..=12).contains(&n) {
                bail!("--n must be in 2..=12");
            }
            let catalog = run_pipeline(n, stages, mode, seed);
            emit(&out, &export_catalog(&catalog, format))?;
        }
        Cmd::Names => {
            for name in known_graph_names() {
                let g = resolve_graph(&name)?;
                println!("{name}\tn={}\tedges={}", g.n(), g.edge_count());
            }
        }
    }
    Ok(())
}
