//! Pipeline driver: enumerate candidates, classify them, solve signs,
//! and persist everything as a versioned catalog. Also renders the
//! per-graph proof reports and the DOT/graph6 exports.

use crate::canon::canonical_form;
use crate::generate::{enumerate_connected_triangle_free, enumerate_layer_scheme, LayerPruning};
use crate::graph::Graph;
use crate::orient::{bipartite_cycle_count, cycle_type, valid_orientations, CycleType, Orientation};
use crate::rules::{classify, Verdict};
use crate::signs::{Certificate, EquationSource, SignSystem, SignVerdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorMode {
    Exhaustive,
    Layer,
}

impl std::str::FromStr for GeneratorMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(GeneratorMode::Exhaustive),
            "layer" => Ok(GeneratorMode::Layer),
            other => Err(format!("unknown mode {other:?} (exhaustive|layer)")),
        }
    }
}

/// Which pipeline stages to run. Later stages imply the earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Properties,
    Rules,
    Orient,
    Signs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSet {
    pub deepest: Stage,
}

impl StageSet {
    pub fn includes(&self, s: Stage) -> bool {
        self.deepest >= s
    }
}

impl std::str::FromStr for StageSet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut deepest = None;
        for part in s.split(',') {
            let stage = match part.trim() {
                "properties" => Stage::Properties,
                "rules" => Stage::Rules,
                "orient" => Stage::Orient,
                "signs" => Stage::Signs,
                other => {
                    return Err(format!(
                        "unknown stage {other:?} (properties|rules|orient|signs)"
                    ))
                }
            };
            deepest = Some(deepest.map_or(stage, |d: Stage| d.max(stage)));
        }
        deepest
            .map(|deepest| StageSet { deepest })
            .ok_or_else(|| "empty stage set".to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignStatus {
    Feasible,
    InfeasibleParity,
    InfeasibleAllEqual,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub graph6: String,
    pub n: usize,
    pub verdict: Verdict,
    /// Number of valid orientations up to symmetry; present only past
    /// the rules stage and when the graph is allowed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation_classes: Option<usize>,
    /// One status per orientation class, in representative order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_verdicts: Option<Vec<SignStatus>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_success: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub tool_version: String,
    pub mode: GeneratorMode,
    pub stages: StageSet,
    pub seed: u64,
    pub n_max: usize,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Graphs passing the basic properties, per vertex count.
    pub fn property_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            if e.verdict.passes_properties() {
                *out.entry(e.n).or_insert(0) += 1;
            }
        }
        out
    }

    /// Graphs allowed by both no-go rules, per vertex count.
    pub fn allowed(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.verdict.is_allowed())
            .collect()
    }

    pub fn allowed_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for e in self.allowed() {
            *out.entry(e.n).or_insert(0) += 1;
        }
        out
    }
}

fn classify_graph(g: &Graph, stages: StageSet) -> CatalogEntry {
    let (form, perm) = canonical_form(g);
    let canon = g.relabel(&perm);
    let verdict = if stages.includes(Stage::Rules) {
        classify(&canon)
    } else {
        // property stages only; report the first failing property
        match classify(&canon) {
            v @ (Verdict::RejectedDisconnected
            | Verdict::Rejected3Cycle(_)
            | Verdict::RejectedLength2Path { .. }) => v,
            _ => Verdict::Allowed,
        }
    };
    let mut entry = CatalogEntry {
        graph6: form.to_string(),
        n: canon.n(),
        verdict,
        orientation_classes: None,
        sign_verdicts: None,
        sign_feasible: None,
        family_residual: None,
        family_success: None,
    };
    if entry.verdict.is_allowed()
        && stages.includes(Stage::Orient)
        && canon.edge_count() <= 32
    {
        let classes = valid_orientations(&canon);
        entry.orientation_classes = Some(classes.len());
        if stages.includes(Stage::Signs) {
            let statuses: Vec<SignStatus> = classes
                .iter()
                .map(|o| match SignSystem::build(&canon, o) {
                    Ok(sys) => match sys.solve() {
                        SignVerdict::Feasible(_) => SignStatus::Feasible,
                        SignVerdict::Infeasible(Certificate::Parity { .. }) => {
                            SignStatus::InfeasibleParity
                        }
                        SignVerdict::Infeasible(Certificate::AllEqual { .. }) => {
                            SignStatus::InfeasibleAllEqual
                        }
                    },
                    Err(_) => SignStatus::InfeasibleParity,
                })
                .collect();
            entry.sign_feasible = Some(statuses.iter().any(|s| *s == SignStatus::Feasible));
            entry.sign_verdicts = Some(statuses);
        }
    }
    entry
}

/// Runs the staged pipeline over every candidate graph with up to
/// `n_max` vertices. Deterministic: entries sorted by (n, graph6).
pub fn run_pipeline(n_max: usize, stages: StageSet, mode: GeneratorMode, seed: u64) -> Catalog {
    assert!((2..=12).contains(&n_max), "n_max must be in 2..=12");
    let mut graphs = Vec::new();
    for n in 2..=n_max {
        match mode {
            GeneratorMode::Exhaustive => graphs.extend(enumerate_connected_triangle_free(n)),
            GeneratorMode::Layer => graphs.extend(enumerate_layer_scheme(n, LayerPruning::all())),
        }
    }
    let mut entries: Vec<CatalogEntry> = graphs
        .par_iter()
        .map(|g| classify_graph(g, stages))
        .collect();
    entries.sort_by(|a, b| (a.n, &a.graph6).cmp(&(b.n, &b.graph6)));
    entries.dedup_by(|a, b| a.graph6 == b.graph6);
    Catalog {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        mode,
        stages,
        seed,
        n_max,
        entries,
    }
}

fn label(v: usize) -> usize {
    // reports use 1-based labels to match the usual figure labeling
    v + 1
}

fn describe_source(src: &EquationSource) -> String {
    match src {
        EquationSource::Cycle(q) => {
            let [a, b, c, d] = q.corners;
            format!(
                "cycle ({}, {}, {}, {})",
                label(a),
                label(b),
                label(c),
                label(d)
            )
        }
        EquationSource::PairSplit { ends: (u, v) } => {
            format!("two-path split of pair ({}, {})", label(*u), label(*v))
        }
    }
}

/// Human-readable solvability report for one graph: rule verdict, then
/// per orientation class the cycle-type table and the sign outcome.
pub fn prove_report(g: &Graph) -> String {
    let mut out = String::new();
    let verdict = classify(g);
    let (form, _) = canonical_form(g);
    let _ = writeln!(
        out,
        "graph: {} vertices, {} edges, canonical graph6 {}",
        g.n(),
        g.edge_count(),
        form
    );
    let _ = writeln!(out, "rule verdict: {}", verdict.stage_name());
    match &verdict {
        Verdict::RejectedDisconnected
        | Verdict::Rejected3Cycle(_)
        | Verdict::RejectedLength2Path { .. } => {
            let _ = writeln!(out, "basic properties fail; no orientation analysis");
            return out;
        }
        Verdict::RejectedK33 { triple, common } => {
            let _ = writeln!(
                out,
                "contains K3,3 on {:?} x {:?}",
                triple.map(label),
                common.map(label)
            );
        }
        Verdict::Rejected1221(emb) => {
            let _ = writeln!(
                out,
                "contains a forbidden ladder: apex {}, middle ({}, {}) x ({}, {}), tail {}",
                label(emb.a),
                label(emb.bc.0),
                label(emb.bc.1),
                label(emb.de.0),
                label(emb.de.1),
                label(emb.f)
            );
        }
        Verdict::Allowed => {}
    }
    let classes = valid_orientations(g);
    let _ = writeln!(out, "valid orientation classes: {}", classes.len());
    let mut any_feasible = false;
    for (i, o) in classes.iter().enumerate() {
        let _ = writeln!(out, "-- class {} (edge direction mask {:#b})", i + 1, o.dirs);
        for q in g.four_cycles() {
            let ty = match cycle_type(o, &q) {
                CycleType::NonBipartite => "non-bipartite",
                CycleType::Bipartite => "bipartite",
                CycleType::Forbidden => "forbidden",
            };
            let [a, b, c, d] = q.corners;
            let _ = writeln!(
                out,
                "   cycle ({}, {}, {}, {}): {}",
                label(a),
                label(b),
                label(c),
                label(d),
                ty
            );
        }
        if let Ok(count) = bipartite_cycle_count(g, o) {
            let _ = writeln!(out, "   bipartite cycles: {count}");
        }
        match SignSystem::build(g, o) {
            Err(e) => {
                let _ = writeln!(out, "   sign system: {e}");
            }
            Ok(sys) => match sys.solve() {
                SignVerdict::Feasible(w) => {
                    any_feasible = true;
                    let _ = writeln!(out, "   sign assignment exists:");
                    for (pair, signs) in sys.pairs.iter().zip(&w.signs) {
                        let terms: Vec<String> = pair
                            .vias
                            .iter()
                            .zip(signs)
                            .map(|(&m, &s)| {
                                format!("via {}: {}", label(m), if s > 0 { "+1" } else { "-1" })
                            })
                            .collect();
                        let _ = writeln!(
                            out,
                            "     pair ({}, {}): {}",
                            label(pair.ends.0),
                            label(pair.ends.1),
                            terms.join(", ")
                        );
                    }
                }
                SignVerdict::Infeasible(Certificate::Parity { sources }) => {
                    let _ = writeln!(
                        out,
                        "   infeasible: these equations sum to the contradiction 0 = 1:"
                    );
                    for s in &sources {
                        let _ = writeln!(out, "     {}", describe_source(s));
                    }
                }
                SignVerdict::Infeasible(Certificate::AllEqual { pairs }) => {
                    let _ = writeln!(
                        out,
                        "   infeasible: interference terms forced to all agree on pairs {:?}",
                        pairs
                            .iter()
                            .map(|&(u, v)| (label(u), label(v)))
                            .collect::<Vec<_>>()
                    );
                }
            },
        }
    }
    let _ = writeln!(
        out,
        "summary: sign-level {}",
        if any_feasible { "feasible" } else { "infeasible" }
    );
    out
}

/// DOT rendering of one oriented graph.
pub fn orientation_dot(g: &Graph, o: &Orientation, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{name}\" {{");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {};", label(v));
    }
    for &(u, v) in &o.edges {
        let (from, to) = if o.arrow_from(u, v) { (u, v) } else { (v, u) };
        let _ = writeln!(out, "  {} -> {};", label(from), label(to));
    }
    let _ = writeln!(out, "}}");
    out
}

/// DOT rendering of an undirected graph.
pub fn graph_dot(g: &Graph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{name}\" {{");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {};", label(v));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", label(u), label(v));
    }
    let _ = writeln!(out, "}}");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Graph6,
    Dot,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "graph6" => Ok(ExportFormat::Graph6),
            "dot" => Ok(ExportFormat::Dot),
            other => Err(format!("unknown format {other:?} (json|graph6|dot)")),
        }
    }
}

/// Serializes a catalog in the requested format.
pub fn export_catalog(catalog: &Catalog, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => serde_json::to_string_pretty(catalog).unwrap(),
        ExportFormat::Graph6 => {
            let mut out = String::new();
            for e in &catalog.entries {
                let _ = writeln!(out, "{}", e.graph6);
            }
            out
        }
        ExportFormat::Dot => {
            let mut out = String::new();
            for e in &catalog.entries {
                let g = crate::graph6::decode(&e.graph6).unwrap();
                out.push_str(&graph_dot(&g, &e.graph6));
            }
            out
        }
    }
}

/// Expected milestone values; returns a list of mismatch descriptions,
/// empty when everything agrees.
pub fn check_catalog(catalog: &Catalog) -> Vec<String> {
    let mut issues = Vec::new();
    let props = catalog.property_counts();
    let expected_props: &[(usize, usize)] = &[
        (2, 1),
        (3, 0),
        (4, 1),
        (5, 1),
        (6, 3),
        (7, 4),
        (8, 14),
    ];
    for &(n, want) in expected_props {
        if n > catalog.n_max {
            continue;
        }
        let got = props.get(&n).copied().unwrap_or(0);
        if got != want {
            issues.push(format!(
                "property-stage count at n={n}: got {got}, expected {want}"
            ));
        }
    }
    if !catalog.stages.includes(Stage::Rules) {
        return issues;
    }
    if catalog.n_max >= 8 {
        let mut allowed8: Vec<String> = catalog
            .allowed()
            .iter()
            .filter(|e| e.n <= 8)
            .map(|e| e.graph6.clone())
            .collect();
        allowed8.sort();
        let mut expected: Vec<String> = ["K1,1", "K2,2", "K2,3", "K2,4", "K2,5", "K2,6", "cube", "cube+1"]
            .iter()
            .map(|name| {
                let g = crate::generate::known_graph(name).unwrap();
                canonical_form(&g).0.to_string()
            })
            .collect();
        expected.sort();
        if allowed8 != expected {
            issues.push(format!(
                "rule survivors at n<=8: got {allowed8:?}, expected {expected:?}"
            ));
        }
    }
    let allowed_counts = catalog.allowed_counts();
    if catalog.n_max >= 9 {
        let got = allowed_counts.get(&9).copied().unwrap_or(0);
        if got != 3 {
            issues.push(format!("rule survivors at n=9: got {got}, expected 3"));
        }
        // the only n=9 survivors besides the fan K2,7
        let mut nonfan: Vec<String> = catalog
            .allowed()
            .iter()
            .filter(|e| e.n == 9)
            .map(|e| e.graph6.clone())
            .collect();
        let fan = canonical_form(&crate::generate::known_graph("K2,7").unwrap())
            .0
            .to_string();
        nonfan.retain(|g| *g != fan);
        nonfan.sort();
        let mut want: Vec<String> = ["fig5a", "fig5b"]
            .iter()
            .map(|name| {
                let g = crate::generate::known_graph(name).unwrap();
                canonical_form(&g).0.to_string()
            })
            .collect();
        want.sort();
        if nonfan != want {
            issues.push(format!(
                "non-fan survivors at n=9: got {nonfan:?}, expected {want:?}"
            ));
        }
    }
    if catalog.n_max >= 10 {
        let got = allowed_counts.get(&10).copied().unwrap_or(0);
        if got != 9 {
            issues.push(format!("rule survivors at n=10: got {got}, expected 9"));
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::known_graph;

    fn stages(s: &str) -> StageSet {
        s.parse().unwrap()
    }

    #[test]
    fn property_counts_to_8() {
        let catalog = run_pipeline(8, stages("properties"), GeneratorMode::Exhaustive, 0);
        let counts = catalog.property_counts();
        let expect: BTreeMap<usize, usize> =
            [(2, 1), (4, 1), (5, 1), (6, 3), (7, 4), (8, 14)].into();
        assert_eq!(counts, expect);
        assert!(check_catalog(&catalog).is_empty());
    }

    #[test]
    fn survivors_to_8() {
        let catalog = run_pipeline(8, stages("properties,rules"), GeneratorMode::Exhaustive, 0);
        assert!(check_catalog(&catalog).is_empty());
        assert_eq!(catalog.allowed().len(), 8);
    }

    #[test]
    fn json_round_trip() {
        let catalog = run_pipeline(6, stages("signs"), GeneratorMode::Exhaustive, 0);
        let json = export_catalog(&catalog, ExportFormat::Json);
        let back: Catalog = serde_json::from_str(&json).unwrap();
        assert_eq!(export_catalog(&back, ExportFormat::Json), json);
    }

    #[test]
    fn layer_mode_keeps_bipartite_survivors() {
        let ex = run_pipeline(7, stages("rules"), GeneratorMode::Exhaustive, 0);
        let lay = run_pipeline(7, stages("rules"), GeneratorMode::Layer, 0);
        let ex_allowed: Vec<&String> = ex
            .allowed()
            .iter()
            .filter(|e| crate::graph6::decode(&e.graph6).unwrap().is_bipartite())
            .map(|e| &e.graph6)
            .collect();
        let lay_allowed: Vec<&String> = lay.allowed().iter().map(|e| &e.graph6).collect();
        assert_eq!(ex_allowed, lay_allowed);
    }

    #[test]
    fn prove_square_mentions_both_classes() {
        let report = prove_report(&known_graph("square").unwrap());
        assert!(report.contains("valid orientation classes: 2"));
        assert!(report.contains("sign assignment exists"));
        assert!(report.contains("contradiction"));
        assert!(report.contains("sign-level feasible"));
    }

    #[test]
    fn prove_k33_infeasible() {
        let report = prove_report(&known_graph("K3,3").unwrap());
        assert!(report.contains("rejected-k33"));
        assert!(report.contains("sign-level infeasible"));
    }

    #[test]
    fn dot_arrows_match_orientation() {
        let g = crate::family::square_graph();
        let o = crate::family::square_orientation();
        let dot = orientation_dot(&g, &o, "square");
        assert!(dot.contains("1 -> 3;"));
        assert!(dot.contains("3 -> 2;"));
        assert!(!dot.contains("2 -> 3;"));
    }
}
