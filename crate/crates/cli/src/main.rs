//! `stablenet`: command-line front end for the stablenet library.
//!
//! Exit codes: 0 the property holds (or the operation succeeded), 1 it fails,
//! 2 input error, 3 a search or size budget was exceeded, 4 the decider and
//! the oracle disagreed under `--both`.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stablenet::canonical::{multree_isomorphic, xnetwork_isomorphic};
use stablenet::foldup::{fold_up_ordered, is_sound, is_sound_by_folding, isomorphic_siblings, stabilize_with_cap, FoldOrder};
use stablenet::io::{multree_to_dot, network_to_dot, parse_enewick, parse_mulnewick, print_enewick, print_mulnewick, DotStyle};
use stablenet::model::{Arc, Label, MulTree, PhyloTree, XNetwork};
use stablenet::oracles::{
    oracle_base_tree, oracle_display_embeddings, oracle_subtrees_isomorphic, oracle_tree_based, oracle_vertex_stable_ancestor,
    oracle_visible, oracle_xnetwork_isomorphic, Budget, BudgetExceeded, DEFAULT_BUDGET,
};
use stablenet::properties::{
    base_tree_of, displays_stable, is_base_tree, is_compressed, is_reticulation_visible_on_path, is_reticulation_visible_stable,
    is_reticulation_visible_structural, is_tree_based_stable, is_tree_child_by_ancestry, is_tree_child_compressed_form,
    is_tree_child_on_path, is_tree_child_stable, is_tree_child_structural, stable_ancestry, strongly_displays, DeciderOptions,
    Evidence, PropertyError, PropertyVerdict, StableNetwork,
};
use stablenet::subnetworks::{displays_mul_triplet, induced_subnetwork, mul_triplets, restrict_multree, trinets, triplets, SubnetError};
use stablenet::unfold::{unfold_with_cap, UnfoldError, DEFAULT_PATH_CAP};
use stablenet::validate::{validate, Claim};
use stablenet::xsets::{xset_count, XSetError};

use report::{InputRecord, Item, Report, ResultRecord, Timings, VerdictRecord, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "stablenet", version, about = "Un-fold, fold-up and decide properties of phylogenetic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Enewick, global = true)]
    format: Format,
    /// Use the brute-force oracle instead of the decider.
    #[arg(long, global = true, conflicts_with = "both")]
    oracle: bool,
    /// Run decider and oracle and compare.
    #[arg(long, global = true)]
    both: bool,
    /// Maximum number of root paths to enumerate (also STABLENET_PATH_CAP).
    #[arg(long, global = true)]
    path_cap: Option<usize>,
    /// Seed for the fold-up order.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Refuse un-folds with more X-sets than this.
    #[arg(long, global = true)]
    limit_xsets: Option<usize>,
    /// Step budget of the brute-force oracles.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Let deciders accept X-networks with parallel arcs.
    #[arg(long, global = true)]
    allow_xnetwork: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Enewick,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Network,
    Multree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClaimArg {
    XNetwork,
    PhyloNetwork,
    BinaryPhyloNetwork,
    PhyloTree,
    Multree,
}

impl From<ClaimArg> for Claim {
    fn from(c: ClaimArg) -> Claim {
        match c {
            ClaimArg::XNetwork => Claim::XNetwork,
            ClaimArg::PhyloNetwork => Claim::PhyloNetwork,
            ClaimArg::BinaryPhyloNetwork => Claim::BinaryPhyloNetwork,
            ClaimArg::PhyloTree => Claim::PhyloTree,
            ClaimArg::Multree => Claim::MulTree,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TreeChildMethod {
    /// Every interior vertex has a tree-vertex child.
    Structural,
    /// Every vertex is a vertex-stable ancestor of some leaf.
    Ancestry,
    /// Compressed and every tree vertex is a vertex-stable ancestor.
    Compressed,
    /// Image of every X-set equals `V(M)^C` modulo isomorphism.
    Image,
    /// Image plus the classes above `r_C` cover everything.
    ImageOnPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VisibleMethod {
    Structural,
    /// Through class sizes of the X-set images.
    Size,
    SizeOnPath,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a file and check it against a claimed type.
    Validate {
        file: String,
        #[arg(long, value_enum)]
        claim: Option<ClaimArg>,
    },
    /// Print the un-fold U(N) of a network.
    Unfold { file: String },
    /// Print the fold-up F(M) of a MUL-tree.
    Foldup { file: String },
    IsStable { file: String },
    IsSound { file: String },
    Displays { network: String, tree: String },
    IsBaseTree { network: String, tree: String },
    IsTreeBased { network: String },
    IsTreeChild {
        network: String,
        #[arg(long, value_enum, default_value_t = TreeChildMethod::Structural)]
        method: TreeChildMethod,
    },
    IsReticulationVisible {
        network: String,
        #[arg(long, value_enum, default_value_t = VisibleMethod::Structural)]
        method: VisibleMethod,
    },
    /// Induced subnetworks on every three taxa.
    Trinets { network: String },
    /// Displayed triplets.
    Triplets { network: String },
    /// MUL-triplets of a MUL-tree, or whether it displays a given one.
    MulTriplets {
        file: String,
        #[arg(long)]
        contains: Option<String>,
    },
    /// Restrict a network or MUL-tree to a set of taxa.
    Restrict {
        file: String,
        /// Comma-separated taxa to keep.
        #[arg(long, value_delimiter = ',', required = true)]
        taxa: Vec<String>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Isomorphism of two networks or two MUL-trees.
    Compare {
        left: String,
        right: String,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// All properties of a network, and of some trees against it.
    Report {
        network: String,
        #[arg(long = "tree")]
        trees: Vec<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
    Disagreement(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Disagreement(_) => 4,
        }
    }
}

impl From<UnfoldError> for Failure {
    fn from(e: UnfoldError) -> Self {
        match e {
            UnfoldError::PathCapExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BudgetExceeded> for Failure {
    fn from(e: BudgetExceeded) -> Self {
        Failure::Budget(e.to_string())
    }
}

impl From<PropertyError> for Failure {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::NotStable => {
                Failure::Input("network is not stable; the deciders need a stable network (try --oracle)".into())
            }
            PropertyError::Unfold(u) => u.into(),
            PropertyError::XSet(e @ XSetError::LimitExceeded { .. }) => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<SubnetError> for Failure {
    fn from(e: SubnetError) -> Self {
        match e {
            SubnetError::Unfold(u) => u.into(),
            SubnetError::Budget(b) => b.into(),
            e => Failure::Input(e.to_string()),
        }
    }
}

enum Graph {
    Net(XNetwork),
    Mul(MulTree),
}

struct Ctx {
    format: Format,
    oracle: bool,
    both: bool,
    path_cap: usize,
    seed: Option<u64>,
    limit_xsets: Option<usize>,
    budget: u64,
    allow_xnetwork: bool,
    inputs: Vec<InputRecord>,
    parse_ms: f64,
}

#[derive(Default)]
struct Outcome {
    verdicts: Vec<VerdictRecord>,
    result: Option<Graph>,
    subject: Option<Graph>,
    highlight: BTreeSet<Arc>,
    items: Vec<Item>,
    /// Commands that report on several properties exit 0 regardless.
    informational: bool,
}

impl Ctx {
    fn options(&self) -> DeciderOptions {
        DeciderOptions {
            allow_xnetwork: self.allow_xnetwork,
            path_cap: self.path_cap,
            xset_limit: self.limit_xsets,
        }
    }

    fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }

    fn read(&mut self, path: &str, kind: &'static str) -> Result<String, Failure> {
        let t = Instant::now();
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
        };
        self.inputs.push(InputRecord::new(path, kind, &text));
        self.parse_ms += t.elapsed().as_secs_f64() * 1e3;
        Ok(text)
    }

    fn network(&mut self, path: &str) -> Result<XNetwork, Failure> {
        let text = self.read(path, "network")?;
        parse_enewick(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }

    fn tree(&mut self, path: &str) -> Result<PhyloTree, Failure> {
        let text = self.read(path, "tree")?;
        let n = parse_enewick(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        PhyloTree::try_from(n).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }

    fn multree(&mut self, path: &str) -> Result<MulTree, Failure> {
        let text = self.read(path, "multree")?;
        parse_mulnewick(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }

    fn any(&mut self, path: &str, kind: Option<Kind>) -> Result<Graph, Failure> {
        match kind.unwrap_or_else(|| guess_kind(path)) {
            Kind::Network => Ok(Graph::Net(self.network(path)?)),
            Kind::Multree => Ok(Graph::Mul(self.multree(path)?)),
        }
    }

    fn stable(&self, n: &XNetwork) -> Result<StableNetwork, Failure> {
        Ok(StableNetwork::with_options(n, &self.options())?)
    }

    /// Runs the decider, the oracle, or both, as the flags ask.
    fn decide<D, O>(&self, property: &str, decider: D, oracle: O) -> Result<VerdictRecord, Failure>
    where
        D: FnOnce() -> Result<PropertyVerdict, Failure>,
        O: FnOnce() -> Result<bool, Failure>,
    {
        if self.oracle {
            let holds = oracle()?;
            return Ok(record(property, "oracle", PropertyVerdict { holds, witness: None, counterexample: None }));
        }
        let v = decider()?;
        if !self.both {
            return Ok(record(property, "decider", v));
        }
        let o = oracle()?;
        if o != v.holds {
            return Err(Failure::Disagreement(format!("{property}: decider says {}, oracle says {o}", v.holds)));
        }
        let mut r = record(property, "both", v);
        r.oracle_holds = Some(o);
        Ok(r)
    }
}

fn guess_kind(path: &str) -> Kind {
    if path.ends_with(".mnwk") {
        Kind::Multree
    } else {
        Kind::Network
    }
}

fn evidence(e: &Evidence) -> Value {
    serde_json::to_value(e).expect("evidence serializes")
}

fn evidence_text(e: &Evidence) -> String {
    match e {
        Evidence::XSet(c) => format!("X-set {c}"),
        Evidence::XSetVertex { xset, vertex } => format!("X-set {xset} at {vertex}"),
        Evidence::Vertex(v) => format!("vertex {v}"),
        Evidence::Vertices(vs) => {
            let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            format!("vertices {}", vs.join(", "))
        }
        Evidence::Arc(a) => format!("arc {a}"),
    }
}

fn record(property: &str, method: &str, v: PropertyVerdict) -> VerdictRecord {
    let mut notes = BTreeMap::new();
    if let Some(w) = &v.witness {
        notes.insert("witness_text".into(), json!(evidence_text(w)));
    }
    if let Some(c) = &v.counterexample {
        notes.insert("counterexample_text".into(), json!(evidence_text(c)));
    }
    VerdictRecord {
        property: property.to_string(),
        method: method.to_string(),
        holds: v.holds,
        witness: v.witness.as_ref().map(evidence),
        counterexample: v.counterexample.as_ref().map(evidence),
        oracle_holds: None,
        notes,
    }
}

fn plain(property: &str, holds: bool) -> VerdictRecord {
    record(property, "decider", PropertyVerdict { holds, witness: None, counterexample: None })
}

/// Tree-child iff every vertex is a vertex-stable ancestor of some leaf;
/// only for networks without parallel arcs.
fn tree_child_oracle(n: &XNetwork) -> bool {
    let g = n.graph();
    g.vertices().all(|v| n.taxa().any(|x| oracle_vertex_stable_ancestor(n, v, x)))
}

fn visible_oracle(n: &XNetwork) -> bool {
    n.hybrids().into_iter().all(|h| oracle_visible(n, h))
}

fn run(cli: Cli) -> Result<(Ctx, Outcome, String), Failure> {
    let path_cap = match cli.path_cap {
        Some(c) => c,
        None => match std::env::var("STABLENET_PATH_CAP") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::Input(format!("STABLENET_PATH_CAP={s:?} is not a number")))?,
            Err(_) => DEFAULT_PATH_CAP,
        },
    };
    let mut ctx = Ctx {
        format: cli.format,
        oracle: cli.oracle,
        both: cli.both,
        path_cap,
        seed: cli.seed,
        limit_xsets: cli.limit_xsets,
        budget: cli.budget,
        allow_xnetwork: cli.allow_xnetwork,
        inputs: Vec::new(),
        parse_ms: 0.0,
    };
    let mut out = Outcome::default();
    let name = command_name(&cli.command);
    match cli.command {
        Command::Validate { file, claim } => {
            let kind = match claim {
                Some(ClaimArg::Multree) => Some(Kind::Multree),
                Some(_) => Some(Kind::Network),
                None => None,
            };
            let g = ctx.any(&file, kind)?;
            let (graph, labels, default_claim) = match &g {
                Graph::Net(n) => (n.graph(), n.labels(), Claim::XNetwork),
                Graph::Mul(m) => (m.tree(), m.labels(), Claim::MulTree),
            };
            let claim = claim.map(Claim::from).unwrap_or(default_claim);
            let report = validate(graph, labels, claim);
            let mut r = plain(&format!("valid {claim}"), report.is_valid());
            if !report.is_valid() {
                r.counterexample = Some(serde_json::to_value(&report.violations).expect("serializes"));
                r.notes.insert("counterexample_text".into(), json!(report.to_string()));
            }
            r.notes.insert("vertices".into(), json!(graph.vertex_count()));
            r.notes.insert("arcs".into(), json!(graph.arc_count()));
            r.notes.insert("leaves".into(), json!(labels.len()));
            if let Graph::Net(n) = &g {
                r.notes.insert("hybrids".into(), json!(n.hybrids().len()));
                r.notes.insert("taxa".into(), json!(n.taxon_count()));
            }
            out.verdicts.push(r);
            out.subject = Some(g);
        }
        Command::Unfold { file } => {
            let n = ctx.network(&file)?;
            let u = unfold_with_cap(&n, ctx.path_cap)?;
            out.result = Some(Graph::Mul(u.multree));
        }
        Command::Foldup { file } => {
            let m = ctx.multree(&file)?;
            let order = ctx.seed.map(FoldOrder::Seeded).unwrap_or_default();
            let (f, _) = fold_up_ordered(&m, order).map_err(|e| Failure::Input(e.to_string()))?;
            out.result = Some(Graph::Net(f));
        }
        Command::IsStable { file } => {
            let n = ctx.network(&file)?;
            let cap = ctx.path_cap;
            let folded = stabilize_with_cap(&n, cap)?;
            let mut budget = ctx.budget();
            let r = ctx.decide(
                "stable",
                || Ok(PropertyVerdict { holds: xnetwork_isomorphic(&n, &folded), witness: None, counterexample: None }),
                || Ok(oracle_xnetwork_isomorphic(&n, &folded, &mut budget)?),
            )?;
            out.verdicts.push(r);
            out.subject = Some(Graph::Net(n));
        }
        Command::IsSound { file } => {
            let m = ctx.multree(&file)?;
            let r = ctx.decide(
                "sound",
                || {
                    Ok(match isomorphic_siblings(&m) {
                        None => PropertyVerdict::yes(None),
                        Some((a, b)) => PropertyVerdict::no(Some(Evidence::Vertices([a, b].into_iter().collect()))),
                    })
                },
                || Ok(is_sound_by_folding(&m)),
            )?;
            debug_assert_eq!(r.holds, is_sound(&m));
            out.verdicts.push(r);
            out.subject = Some(Graph::Mul(m));
        }
        Command::Displays { network, tree } => {
            let n = ctx.network(&network)?;
            let t = ctx.tree(&tree)?;
            let mut budget = ctx.budget();
            let mut embeddings = None;
            let mut r = ctx.decide(
                "displays",
                || Ok(displays_stable(&ctx.stable(&n)?, &t)?),
                || {
                    let es = oracle_display_embeddings(&n, &t, false, 64, &mut budget)?;
                    let holds = !es.is_empty();
                    embeddings = Some(es);
                    Ok(holds)
                },
            )?;
            if let Some(es) = embeddings {
                r.notes.insert("embeddings".into(), json!(es.len()));
                if let Some(e) = es.first() {
                    out.highlight = e.arcs();
                }
            }
            out.verdicts.push(r);
            out.subject = Some(Graph::Net(n));
        }
        Command::IsBaseTree { network, tree } => {
            let n = ctx.network(&network)?;
            let t = ctx.tree(&tree)?;
            let mut budget = ctx.budget();
            let r = ctx.decide(
                "base tree",
                || Ok(is_base_tree(&ctx.stable(&n)?, &t)?),
                || Ok(oracle_base_tree(&n, &t, &mut budget)?),
            )?;
            out.verdicts.push(r);
            out.subject = Some(Graph::Net(n));
        }
        Command::IsTreeBased { network } => {
            let n = ctx.network(&network)?;
            let mut budget = ctx.budget();
            let mut base = None;
            let r = ctx.decide(
                "tree-based",
                || {
                    let s = ctx.stable(&n)?;
                    base = base_tree_of(&s)?;
                    Ok(is_tree_based_stable(&s)?)
                },
                || Ok(oracle_tree_based(&n, &mut budget)?),
            )?;
            let mut r = r;
            if let Some(t) = base {
                r.notes.insert("base_tree".into(), json!(print_enewick(&t)));
            }
            out.verdicts.push(r);
            out.subject = Some(Graph::Net(n));
        }
        Command::IsTreeChild { network, method } => {
            let n = ctx.network(&network)?;
            let r = ctx.decide(
                "tree-child",
                || {
                    Ok(match method {
                        TreeChildMethod::Structural => is_tree_child_structural(&n),
                        TreeChildMethod::Ancestry => is_tree_child_by_ancestry(&n),
                        TreeChildMethod::Compressed => is_tree_child_compressed_form(&n),
                        TreeChildMethod::Image => is_tree_child_stable(&ctx.stable(&n)?)?,
                        TreeChildMethod::ImageOnPath => is_tree_child_on_path(&ctx.stable(&n)?)?,
                    })
                },
                || {
                    if n.graph().has_parallel_arcs() {
                        return Err(Failure::Input(
                            "the tree-child oracle needs a network without parallel arcs".into(),
                        ));
                    }
                    Ok(tree_child_oracle(&n))
                },
            )?;
            out.verdicts.push(r);
            out.subject = Some(Graph::Net(n));
        }
        Command::IsReticulationVisible { network, method } => {
            let n = ctx.network(&network)?;
            let r = ctx.decide(
                "reticulation-visible",
                || {
                    Ok(match method {
                        VisibleMethod::Structural => is_reticulation_visible_structural(&n),
                        VisibleMethod::Size => is_reticulation_visible_stable(&ctx.stable(&n)?)?,
                        VisibleMethod::SizeOnPath => is_reticulation_visible_on_path(&ctx.stable(&n)?)?,
                    })
                },
                || Ok(visible_oracle(&n)),
            )?;
            out.verdicts.push(r);
            out.subject = Some(Graph::Net(n));
        }
        Command::Trinets { network } => {
            let n = ctx.network(&network)?;
            for (ys, t) in trinets(&n)? {
                let key: Vec<&str> = ys.iter().map(|s| s.as_str()).collect();
                out.items.push(Item { key: key.join(","), value: Some(print_enewick(&t)) });
            }
            out.subject = Some(Graph::Net(n));
        }
        Command::Triplets { network } => {
            let n = ctx.network(&network)?;
            let mut budget = ctx.budget();
            for t in triplets(&n, &mut budget)? {
                out.items.push(Item { key: t.to_string(), value: Some(print_enewick(&t.tree())) });
            }
            out.subject = Some(Graph::Net(n));
        }
        Command::MulTriplets { file, contains } => {
            let m = ctx.multree(&file)?;
            match contains {
                Some(path) => {
                    let tau = ctx.multree(&path)?;
                    out.verdicts.push(plain("displays MUL-triplet", displays_mul_triplet(&m, &tau)));
                }
                None => {
                    for c in mul_triplets(&m) {
                        out.items.push(Item { key: c.to_newick(), value: None });
                    }
                }
            }
            out.subject = Some(Graph::Mul(m));
        }
        Command::Restrict { file, taxa, kind } => {
            let ys: BTreeSet<Label> = taxa.into_iter().map(|s| s.trim().to_string()).collect();
            out.result = Some(match ctx.any(&file, kind)? {
                Graph::Net(n) => Graph::Net(induced_subnetwork(&n, &ys)?),
                Graph::Mul(m) => Graph::Mul(restrict_multree(&m, &ys)?),
            });
        }
        Command::Compare { left, right, kind } => {
            let kind = kind.unwrap_or_else(|| guess_kind(&left));
            let a = ctx.any(&left, Some(kind))?;
            let b = ctx.any(&right, Some(kind))?;
            let mut budget = ctx.budget();
            let r = match (&a, &b) {
                (Graph::Net(a), Graph::Net(b)) => ctx.decide(
                    "isomorphic",
                    || Ok(PropertyVerdict { holds: xnetwork_isomorphic(a, b), witness: None, counterexample: None }),
                    || Ok(oracle_xnetwork_isomorphic(a, b, &mut budget)?),
                )?,
                (Graph::Mul(a), Graph::Mul(b)) => ctx.decide(
                    "isomorphic",
                    || Ok(PropertyVerdict { holds: multree_isomorphic(a, b).holds(), witness: None, counterexample: None }),
                    || Ok(oracle_subtrees_isomorphic(a, a.root(), b, b.root())),
                )?,
                _ => unreachable!("both inputs read with the same kind"),
            };
            out.verdicts.push(r);
        }
        Command::Report { network, trees } => {
            let n = ctx.network(&network)?;
            let ts = trees.iter().map(|p| ctx.tree(p)).collect::<Result<Vec<_>, _>>()?;
            full_report(&ctx, &n, &ts, &mut out)?;
            out.informational = true;
            out.subject = Some(Graph::Net(n));
        }
    }
    Ok((ctx, out, name))
}

fn full_report(ctx: &Ctx, n: &XNetwork, ts: &[PhyloTree], out: &mut Outcome) -> Result<(), Failure> {
    let folded = stabilize_with_cap(n, ctx.path_cap)?;
    let stable = xnetwork_isomorphic(n, &folded);
    out.verdicts.push(plain("stable", stable));
    out.verdicts.push(record("compressed", "decider", is_compressed(n)));
    out.verdicts.push(record("tree-child", "decider", is_tree_child_structural(n)));
    out.verdicts.push(record("reticulation-visible", "decider", is_reticulation_visible_structural(n)));
    for (v, xs) in stable_ancestry(n) {
        let xs: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
        out.items.push(Item { key: format!("stable ancestor {v}"), value: Some(xs.join(",")) });
    }
    if !stable || (n.graph().has_parallel_arcs() && !ctx.allow_xnetwork) {
        return Ok(());
    }
    let s = ctx.stable(n)?;
    let mut r = record("tree-based", "decider", is_tree_based_stable(&s)?);
    if let Some(t) = base_tree_of(&s)? {
        r.notes.insert("base_tree".into(), json!(print_enewick(&t)));
    }
    r.notes.insert("xsets".into(), json!(xset_count(s.multree()).to_string()));
    r.notes.insert("classes".into(), json!(s.partition().class_count()));
    out.verdicts.push(r);
    for t in ts {
        let nw = print_enewick(t);
        for (prop, v) in [
            ("displays", displays_stable(&s, t)?),
            ("base tree", is_base_tree(&s, t)?),
            ("strongly displays", strongly_displays(&s, t)?),
        ] {
            let mut r = record(prop, "decider", v);
            r.notes.insert("tree".into(), json!(nw));
            out.verdicts.push(r);
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Validate { .. } => "validate",
        Command::Unfold { .. } => "unfold",
        Command::Foldup { .. } => "foldup",
        Command::IsStable { .. } => "is-stable",
        Command::IsSound { .. } => "is-sound",
        Command::Displays { .. } => "displays",
        Command::IsBaseTree { .. } => "is-base-tree",
        Command::IsTreeBased { .. } => "is-tree-based",
        Command::IsTreeChild { .. } => "is-tree-child",
        Command::IsReticulationVisible { .. } => "is-reticulation-visible",
        Command::Trinets { .. } => "trinets",
        Command::Triplets { .. } => "triplets",
        Command::MulTriplets { .. } => "mul-triplets",
        Command::Restrict { .. } => "restrict",
        Command::Compare { .. } => "compare",
        Command::Report { .. } => "report",
    }
    .to_string()
}

fn graph_text(g: &Graph) -> ResultRecord {
    match g {
        Graph::Net(n) => ResultRecord { format: "enewick", text: print_enewick(n) },
        Graph::Mul(m) => ResultRecord { format: "mulnewick", text: print_mulnewick(m) },
    }
}

fn emit(ctx: Ctx, out: &Outcome, command: String, analysis_ms: f64) {
    match ctx.format {
        Format::Json => {
            let options = BTreeMap::from([
                ("oracle".to_string(), json!(ctx.oracle)),
                ("both".to_string(), json!(ctx.both)),
                ("path_cap".to_string(), json!(ctx.path_cap)),
                ("seed".to_string(), json!(ctx.seed)),
                ("limit_xsets".to_string(), json!(ctx.limit_xsets)),
                ("budget".to_string(), json!(ctx.budget)),
                ("allow_xnetwork".to_string(), json!(ctx.allow_xnetwork)),
            ]);
            let report = Report {
                schema_version: SCHEMA_VERSION,
                command,
                inputs: ctx.inputs,
                options,
                verdicts: out.verdicts.clone(),
                result: out.result.as_ref().map(graph_text),
                items: out.items.clone(),
                timings: Timings { parse_ms: ctx.parse_ms, analysis_ms },
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Format::Dot => {
            let style = DotStyle { name: Some(command), highlight: out.highlight.clone() };
            match out.result.as_ref().or(out.subject.as_ref()) {
                Some(Graph::Net(n)) => print!("{}", network_to_dot(n, &style)),
                Some(Graph::Mul(m)) => print!("{}", multree_to_dot(m, &style)),
                None => {}
            }
        }
        Format::Enewick => {
            for v in &out.verdicts {
                println!("{}: {}", v.property, if v.holds { "holds" } else { "fails" });
                for (k, val) in &v.notes {
                    let key = k.strip_suffix("_text").unwrap_or(k);
                    match val {
                        Value::String(s) => println!("  {key}: {s}"),
                        other => println!("  {key}: {other}"),
                    }
                }
                if let Some(o) = v.oracle_holds {
                    println!("  oracle: {} (agrees)", if o { "holds" } else { "fails" });
                }
            }
            for it in &out.items {
                match &it.value {
                    Some(val) => println!("{}\t{}", it.key, val),
                    None => println!("{}", it.key),
                }
            }
            if let Some(g) = &out.result {
                println!("{}", graph_text(g).text);
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let t = Instant::now();
    match run(cli) {
        Ok((ctx, out, name)) => {
            let ms = t.elapsed().as_secs_f64() * 1e3 - ctx.parse_ms;
            let code = if out.informational || out.verdicts.iter().all(|v| v.holds) { 0 } else { 1 };
            emit(ctx, &out, name, ms.max(0.0));
            ExitCode::from(code)
        }
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Budget(m) => eprintln!("budget exceeded: {m}"),
                Failure::Disagreement(m) => eprintln!("decider and oracle disagree: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
