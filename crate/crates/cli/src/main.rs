//! `dgs`: command-line front end to dgs-core.
//!
//! Exit codes: 0 success, 1 bad input or arguments, 2 hypothesis not met
//! (inconclusive), 3 internal invariant violated.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use dgs_core::cert::{
    certify_main_with, certify_wang_with, level_divisibility_check, verify_generalized_cospectral, CertError,
    CertifyOptions, DgsCertificate, Verdict,
};
use dgs_core::exact::factor::DEFAULT_BIT_BUDGET;
use dgs_core::exact::{char_poly, parse_rational_matrix, smith_normal_form, BigIntMatrix, SmithNormalForm};
use dgs_core::gf2::{check_annihilation, F2Error};
use dgs_core::graph::{detect_format, parse_graph, random_even_graph, write_graph};
use dgs_core::oracle::{exhaustive_mate_search, property_harness, Bucketing, Suite};
use dgs_core::ortho::{is_orthogonal, is_permutation, is_regular, level};
use dgs_core::walk::{walk_matrices, WalkError};
use dgs_core::{Format, Graph};

const EXIT_INPUT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "dgs", version, about = "Certify graphs determined by their generalized spectrum")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Graph format for input and output; `auto` detects input format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    /// Bit budget for factoring odd parts of determinants.
    #[arg(long, global = true, default_value_t = DEFAULT_BIT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for `mates` and `oracle`.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Auto,
    Graph6,
    EdgeList,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    /// General test first, then the even-degree test.
    Best,
    Wang,
    Eulerian,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Thm4,
    Thm9,
    Remark2,
    Eq2,
    Valuation,
    SnfShape,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Thm4 => Suite::Thm4,
            SuiteArg::Thm9 => Suite::Thm9,
            SuiteArg::Remark2 => Suite::Remark2,
            SuiteArg::Eq2 => Suite::Eq2,
            SuiteArg::Valuation => Suite::Valuation,
            SuiteArg::SnfShape => Suite::SnfShape,
        }
    }
}

/// A graph given as a file path, `-` for standard input, or inline graph6.
#[derive(Clone)]
struct GraphArg(String);

impl std::str::FromStr for GraphArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(GraphArg(s.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify a graph as DGS or DGS among Eulerian graphs.
    Certify {
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = TheoremArg::Best)]
        theorem: TheoremArg,
    },
    /// Characteristic polynomial of the adjacency matrix.
    Charpoly {
        graph: GraphArg,
        /// Use the complement graph.
        #[arg(long)]
        complement: bool,
    },
    /// Walk matrices W, W̄ and Ŵ with determinants and Smith normal forms.
    Walkmatrix { graph: GraphArg },
    /// GF(2) annihilation checks for a graph with all degrees even.
    Annihilate { graph: GraphArg },
    /// Whether two graphs are generalized cospectral.
    Cospectral { g: GraphArg, h: GraphArg },
    /// Level of Q = W(G) W(H)^-1, or of a matrix file given with --matrix.
    Level {
        #[arg(required_unless_present = "matrix", requires = "h")]
        g: Option<GraphArg>,
        h: Option<GraphArg>,
        /// Rational matrix file (rows of num/den tokens).
        #[arg(long, conflicts_with_all = ["g", "h"])]
        matrix: Option<PathBuf>,
    },
    /// Exhaustive search for generalized cospectral mates on n <= 7 vertices.
    Mates {
        n: usize,
        /// Bucket on the graph's polynomial only.
        #[arg(long)]
        cospectral_only: bool,
    },
    /// Random graph with all degrees even.
    Gen {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        connected: bool,
    },
    /// Seeded property suite.
    Oracle {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure carrying its exit code.
struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, e.to_string())
}

fn read_graph(arg: &GraphArg, format: FormatArg) -> Result<Graph, Failure> {
    let text = if arg.0 == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input_error)?;
        s
    } else if std::path::Path::new(&arg.0).exists() {
        std::fs::read_to_string(&arg.0).map_err(|e| input_error(format!("{}: {e}", arg.0)))?
    } else {
        arg.0.clone()
    };
    let format = match format {
        FormatArg::Auto => detect_format(&text),
        FormatArg::Graph6 => Format::Graph6,
        FormatArg::EdgeList => Format::EdgeList,
    };
    parse_graph(&text, format).map_err(|e| input_error(format!("{}: {e}", arg.0)))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn snf_text(s: &SmithNormalForm) -> String {
    let f: Vec<String> = s.invariant_factors.iter().map(ToString::to_string).collect();
    format!("({})", f.join(", "))
}

fn certificate_text(c: &DgsCertificate) -> String {
    fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
        x.as_ref().map_or("-".to_string(), ToString::to_string)
    }
    let mut out = format!(
        "verdict: {}\ntheorem: {}\nn: {}\nall degrees even: {}\nEulerian: {}\ndet W: {}\nv2: {}\nodd part: {}\nsquare-free: {}\nSNF(W): {}\n",
        serde_json::to_value(c.verdict).expect("enum").as_str().unwrap_or_default(),
        serde_json::to_value(c.theorem).expect("enum").as_str().unwrap_or_default(),
        c.n,
        c.all_degrees_even,
        c.is_eulerian,
        c.det_w,
        c.v2.map_or("-".to_string(), |v| v.to_string()),
        opt(&c.odd_part),
        c.squarefree.map_or("-".to_string(), |s| format!("{s:?}").to_lowercase()),
        snf_text(&c.snf_w),
    );
    if let Some(s) = &c.snf_wbar {
        out += &format!("SNF(W̄): {}\n", snf_text(s));
    }
    if c.b.is_some() {
        out += &format!("b: {}\n", opt(&c.b));
    }
    for r in &c.reasons {
        out += &format!("reason: {r}\n");
    }
    out
}

fn certify(g: &Graph, theorem: TheoremArg, opts: &CertifyOptions, json: bool) -> Outcome {
    let cert = match theorem {
        TheoremArg::Wang => certify_wang_with(g, opts),
        TheoremArg::Eulerian => certify_main_with(g, opts),
        TheoremArg::Best => {
            let wang = certify_wang_with(g, opts);
            if wang.verdict == Verdict::Dgs {
                wang
            } else {
                let mut main = certify_main_with(g, opts);
                let skipped = wang.reasons.iter().map(|r| format!("general test: {r}"));
                main.reasons.extend(skipped);
                main
            }
        }
    };
    emit(json, &cert, || certificate_text(&cert));
    Ok(if cert.snf_shape_matches == Some(false) {
        EXIT_INVARIANT
    } else if cert.is_certified() {
        0
    } else {
        EXIT_INCONCLUSIVE
    })
}

fn walk(g: &Graph, json: bool) -> Outcome {
    let m = match walk_matrices(g) {
        Ok(m) => m,
        Err(e @ (WalkError::DeterminantRelation { .. } | WalkError::NonIntegralColumn { .. })) => {
            return Err(Failure(EXIT_INVARIANT, e.to_string()))
        }
        Err(e) => return Err(input_error(e)),
    };
    let snf = |x: &BigIntMatrix| smith_normal_form(x).expect("square");
    let rows = |x: &BigIntMatrix| -> Vec<Vec<String>> {
        x.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    };
    let value = json!({
        "n": g.n(),
        "W": rows(&m.w),
        "Wbar": m.wbar.as_ref().map(rows),
        "What": m.what.as_ref().map(rows),
        "detW": m.det_w.to_string(),
        "detWbar": m.det_wbar.as_ref().map(ToString::to_string),
        "detWhat": m.det_what.as_ref().map(ToString::to_string),
        "snf_W": snf(&m.w),
        "snf_Wbar": m.wbar.as_ref().map(snf),
        "snf_What": m.what.as_ref().map(snf),
    });
    emit(json, &value, || {
        let mut out = format!("W =\n{}det W = {}\nSNF(W) = {}\n", m.w, m.det_w, snf_text(&snf(&m.w)));
        for (name, mat, det) in [("W̄", &m.wbar, &m.det_wbar), ("Ŵ", &m.what, &m.det_what)] {
            if let (Some(mat), Some(det)) = (mat, det) {
                out += &format!("{name} =\n{mat}det {name} = {det}\nSNF({name}) = {}\n", snf_text(&snf(mat)));
            }
        }
        out
    });
    Ok(0)
}

fn annihilate(g: &Graph, json: bool) -> Outcome {
    let r = match check_annihilation(g) {
        Ok(r) => r,
        Err(e @ F2Error::OddDegree { .. }) => {
            eprintln!("{e}");
            return Ok(EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(Failure(EXIT_INVARIANT, e.to_string())),
    };
    emit(json, &r, || {
        let opt = |x: Option<bool>| x.map_or("n/a".to_string(), |b| b.to_string());
        format!(
            "n: {}\nvarphi: {}\nk: {}\nphi1: {}\nvarphi(A) = 0: {}\nminimal polynomial: {}\nminimal polynomial divides varphi: {}\nodd-order k >= 3 check: {}\nodd-order k = 1 check: {}\n",
            r.n,
            r.varphi,
            r.k,
            r.phi1,
            r.varphi_at_a_is_zero,
            r.minpoly,
            r.minpoly_divides_varphi,
            opt(r.theorem9_holds),
            opt(r.remark2_holds),
        )
    });
    Ok(if r.all_hold() { 0 } else { EXIT_INVARIANT })
}

fn level_of_matrix(path: &PathBuf, json: bool) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let q = parse_rational_matrix(&text).map_err(input_error)?;
    let r = level(&q);
    let value = json!({
        "level": r.level.to_string(),
        "orthogonal": is_orthogonal(&q),
        "regular": is_regular(&q),
        "permutation": is_permutation(&q),
    });
    emit(json, &value, || {
        format!(
            "level: {}\northogonal: {}\nregular: {}\npermutation: {}\n",
            r.level,
            is_orthogonal(&q),
            is_regular(&q),
            is_permutation(&q)
        )
    });
    Ok(0)
}

fn level_of_pair(g: &Graph, h: &Graph, json: bool) -> Outcome {
    let r = match level_divisibility_check(g, h) {
        Ok(r) => r,
        Err(e @ (CertError::HypothesesUnmet(_) | CertError::OrderMismatch(..))) => {
            eprintln!("{e}");
            return Ok(EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(Failure(EXIT_INVARIANT, e.to_string())),
    };
    emit(json, &r, || {
        let opt = |x: Option<bool>| x.map_or("n/a".to_string(), |b| b.to_string());
        format!(
            "level: {}\nd_n(W(G)): {}\nlevel divides d_n: {}\nlevel divides 4: {}\nlevel is 1: {}\nisomorphic: {}\n",
            r.level,
            r.d_n,
            r.level_divides_d_n,
            opt(r.level_divides_4),
            opt(r.level_is_one),
            opt(r.isomorphic)
        )
    });
    Ok(if r.all_hold() { 0 } else { EXIT_INVARIANT })
}

fn run(cli: Cli) -> Outcome {
    let Global { json, format, budget, workers } = cli.global;
    let workers = workers as usize;
    let opts = CertifyOptions { factor_bit_budget: budget };
    match cli.command {
        Command::Certify { graph, theorem } => certify(&read_graph(&graph, format)?, theorem, &opts, json),
        Command::Charpoly { graph, complement } => {
            let mut g = read_graph(&graph, format)?;
            if complement {
                g = g.complement();
            }
            let p = char_poly(&BigIntMatrix::adjacency(&g)).expect("square");
            emit(json, &json!({ "n": g.n(), "charpoly": p.to_string(), "coefficients": p }), || format!("{p}\n"));
            Ok(0)
        }
        Command::Walkmatrix { graph } => walk(&read_graph(&graph, format)?, json),
        Command::Annihilate { graph } => annihilate(&read_graph(&graph, format)?, json),
        Command::Cospectral { g, h } => {
            let (g, h) = (read_graph(&g, format)?, read_graph(&h, format)?);
            let same = verify_generalized_cospectral(&g, &h);
            emit(json, &json!({ "generalized_cospectral": same }), || format!("{same}\n"));
            Ok(0)
        }
        Command::Level { g, h, matrix } => match (g, h, matrix) {
            (_, _, Some(path)) => level_of_matrix(&path, json),
            (Some(g), Some(h), None) => level_of_pair(&read_graph(&g, format)?, &read_graph(&h, format)?, json),
            _ => Err(input_error("level needs two graphs or --matrix")),
        },
        Command::Mates { n, cospectral_only } => {
            let bucketing = if cospectral_only { Bucketing::CospectralOnly } else { Bucketing::Generalized };
            let r = exhaustive_mate_search(n, bucketing, workers).map_err(input_error)?;
            emit(json, &r, || {
                let mut out = format!(
                    "n: {}\nlabelled graphs: {}\nisomorphism classes: {}\npairs: {}\ncertified DGS classes: {}\n",
                    r.n,
                    r.graphs_enumerated,
                    r.isomorphism_classes,
                    r.pairs.len(),
                    r.dgs_certified_classes
                );
                for p in &r.pairs {
                    out += &format!("{} {}\n", p.first, p.second);
                }
                out
            });
            Ok(if r.is_partition() && r.dgs_certified_in_pairs.is_empty() { 0 } else { EXIT_INVARIANT })
        }
        Command::Gen { n, seed, connected } => {
            let g = random_even_graph(n, seed, connected).map_err(input_error)?;
            let out_format = if format == FormatArg::EdgeList { Format::EdgeList } else { Format::Graph6 };
            let text = write_graph(&g, out_format).map_err(input_error)?;
            emit(json, &json!({ "n": n, "seed": seed, "graph": text.trim_end() }), || {
                if text.ends_with('\n') {
                    text.clone()
                } else {
                    format!("{text}\n")
                }
            });
            Ok(0)
        }
        Command::Oracle { suite, samples, seed } => {
            let r = property_harness(suite.into(), samples, seed, workers);
            emit(json, &r, || {
                let mut out = format!(
                    "suite: {}\nseed: {}\ndrawn: {}\napplicable: {}\npassed: {}\nfailed: {}\n",
                    r.suite, r.seed, r.drawn, r.applicable, r.passed, r.failed
                );
                for (k, v) in &r.tallies {
                    out += &format!("{k}: {v}\n");
                }
                for c in &r.counterexamples {
                    out += &format!("counterexample {}: {}\n", c.graph6, c.detail);
                }
                out
            });
            Ok(if r.all_passed() { 0 } else { EXIT_INVARIANT })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
