//! Acceptance criteria for the library, one line of output per criterion.
//!
//! Runs without the libtest harness so the report is printed even when every
//! criterion passes. Exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use dgs_core::cert::{certify_main, snf_templates, verify_generalized_cospectral, Verdict};
use dgs_core::exact::{
    char_poly, determinant, parse_rational_matrix, smith_normal_form, BigIntMatrix, IntPolynomial, SquareFree,
};
use dgs_core::fixtures::{example1_g, example1_h, EXAMPLE1_CHARPOLY, EXAMPLE1_COMPLEMENT_CHARPOLY};
use dgs_core::graph::{detect_format, is_isomorphic_bruteforce, parse_graph, parse_graph6};
use dgs_core::oracle::{
    charpoly_via_sachs, exhaustive_mate_search, odd_index_parity_check, property_harness, Bucketing, Suite,
};
use dgs_core::ortho::{check_conjugation, is_orthogonal, is_regular, level, regular_orthogonal_from_walks};
use dgs_core::walk::{reduced_walk_matrix, walk_matrix};
use dgs_core::Graph;

const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const THM4_LIMIT: Duration = Duration::from_secs(60);
const SACHS_LIMIT: Duration = Duration::from_secs(300);
const MATES_LIMIT: Duration = Duration::from_secs(600);

const HARNESS_SEED: u64 = 7;
const THM4_SAMPLES: usize = 500;
const ODD_SAMPLES: usize = 200;
const VALUATION_SAMPLES: usize = 500;
const MATE_WORKERS: usize = 4;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < limit, format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn cp(g: &Graph) -> IntPolynomial {
    char_poly(&BigIntMatrix::adjacency(g)).expect("square")
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let text = fixture("example1-G.g6");
    let g = parse_graph(&text, detect_format(&text)).map_err(|e| e.to_string())?;
    let c = certify_main(&g);
    let t = within(start, EXAMPLE_LIMIT)?;
    check(c.det_w == int(-352256), format!("det W = {}", c.det_w))?;
    check(c.v2 == Some(13), format!("v2 = {:?}", c.v2))?;
    check(c.odd_part == Some(int(-43)), format!("odd part = {:?}", c.odd_part))?;
    check(c.squarefree == Some(SquareFree::True), "odd part not square-free")?;
    check(c.verdict == Verdict::DgsAmongEulerian, format!("verdict {:?}", c.verdict))?;
    Ok(format!("det W = -352256, v2 = 13, odd part -43 square-free, DGS-among-Eulerian in {t:.2?}"))
}

fn criterion2() -> Outcome {
    let (g, h) = (example1_g(), example1_h());
    let phi = IntPolynomial::from_i64(&EXAMPLE1_CHARPOLY);
    let phi_bar = IntPolynomial::from_i64(&EXAMPLE1_COMPLEMENT_CHARPOLY);
    check(cp(&g) == phi && cp(&h) == phi, "characteristic polynomial of G or H differs")?;
    check(cp(&g.complement()) == phi_bar && cp(&h.complement()) == phi_bar, "complement polynomial differs")?;
    check(verify_generalized_cospectral(&g, &h), "not generalized cospectral")?;
    check(g.is_eulerian() && !h.is_eulerian(), "Eulerian flags wrong")?;
    Ok(format!("phi = {phi}; complement phi = {phi_bar}; H not Eulerian"))
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let (g, h) = (example1_g(), example1_h());
    let q = regular_orthogonal_from_walks(&g, &h).map_err(|e| e.to_string())?;
    check(is_orthogonal(&q), "QᵀQ ≠ I")?;
    check(is_regular(&q), "Qe ≠ e")?;
    check(check_conjugation(&q, &g, &h), "QᵀAQ ≠ B")?;
    let l = level(&q).level;
    let d_n = smith_normal_form(&walk_matrix(&g)).map_err(|e| e.to_string())?.last().cloned().unwrap_or_default();
    let t = within(start, EXAMPLE_LIMIT)?;
    check(l == int(2) || l == int(4), format!("level {l}"))?;
    check(d_n == int(172) && d_n.is_multiple_of(&l), format!("level {l} vs d_n {d_n}"))?;
    Ok(format!("orthogonal, regular, conjugating; level {l} divides d_n = 172; {t:.2?}"))
}

fn criterion4() -> Outcome {
    let mut levels = Vec::new();
    for (name, expected) in [("q1.txt", 2), ("q2.txt", 3)] {
        let q = parse_rational_matrix(&fixture(name)).map_err(|e| e.to_string())?;
        check(is_orthogonal(&q) && is_regular(&q), format!("{name} not regular orthogonal"))?;
        let l = level(&q).level;
        check(l == int(expected), format!("{name}: level {l}"))?;
        levels.push(l.to_string());
    }
    Ok(format!("levels {}", levels.join(", ")))
}

fn harness_line(r: &dgs_core::oracle::HarnessReport) -> String {
    let tallies: Vec<String> = r.tallies.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{}/{} passed over {} draws [{}]", r.passed, r.applicable, r.drawn, tallies.join(", "))
}

fn criterion5() -> Outcome {
    let start = Instant::now();
    let r = property_harness(Suite::Thm4, THM4_SAMPLES, HARNESS_SEED, MATE_WORKERS);
    let t = within(start, THM4_LIMIT)?;
    check(r.applicable == THM4_SAMPLES && r.passed == THM4_SAMPLES, format!("{:?}", r.counterexamples))?;
    let parities = ["n even", "n odd"].iter().all(|k| r.tallies.get(*k).is_some_and(|&c| c > 0));
    check(parities, "both parities of n must occur")?;
    Ok(format!("{} in {t:.2?}", harness_line(&r)))
}

fn criterion6() -> Outcome {
    let thm9 = property_harness(Suite::Thm9, ODD_SAMPLES, HARNESS_SEED, MATE_WORKERS);
    let remark2 = property_harness(Suite::Remark2, ODD_SAMPLES, HARNESS_SEED, MATE_WORKERS);
    check(thm9.drawn >= 100 && remark2.drawn >= 100, "fewer than 100 odd-order samples")?;
    check(thm9.all_passed(), format!("k >= 3 failures: {:?}", thm9.counterexamples))?;
    check(remark2.all_passed(), format!("k = 1 failures: {:?}", remark2.counterexamples))?;
    check(thm9.applicable > 0 && remark2.applicable > 0, "one of the branches was never exercised")?;
    Ok(format!(
        "{} odd-order samples; k >= 3: {}/{} hold; k = 1: {}/{} hold",
        thm9.drawn, thm9.passed, thm9.applicable, remark2.passed, remark2.applicable
    ))
}

fn criterion7() -> Outcome {
    let r = property_harness(Suite::Valuation, VALUATION_SAMPLES, HARNESS_SEED, MATE_WORKERS);
    check(r.applicable == VALUATION_SAMPLES, format!("only {} graphs with det W ≠ 0", r.applicable))?;
    check(r.all_passed(), format!("{:?}", r.counterexamples))?;
    Ok(harness_line(&r))
}

fn criterion8() -> Outcome {
    let g = example1_g();
    let w = walk_matrix(&g);
    let wbar = reduced_walk_matrix(&g).map_err(|e| e.to_string())?;
    let (sw, swbar) = (smith_normal_form(&w).unwrap(), smith_normal_form(&wbar).unwrap());
    check(sw.matches(&[1, 2, 2, 2, 2, 2, 4, 4, 4, 172]), format!("SNF(W) = {:?}", sw.invariant_factors))?;
    check(swbar.matches(&[1, 1, 1, 1, 1, 1, 2, 2, 2, 86]), format!("SNF(W̄) = {:?}", swbar.invariant_factors))?;
    let (tw, twbar) = snf_templates(10, &int(43)).ok_or("no template for b = 43")?;
    check(sw.invariant_factors == tw && swbar.invariant_factors == twbar, "templates with b = 43 differ")?;
    check(sw.product() == determinant(&w).unwrap().abs(), "product of SNF(W) ≠ |det W|")?;
    check(swbar.product() == determinant(&wbar).unwrap().abs(), "product of SNF(W̄) ≠ |det W̄|")?;
    Ok("SNF(W) = (1,2^5,4^3,172), SNF(W̄) = (1^6,2^3,86), b = 43, products equal |det|".into())
}

fn criterion9() -> Outcome {
    let start = Instant::now();
    let mut graphs = 0;
    for mask in 0..1u64 << 15 {
        let g = Graph::from_upper_mask(6, mask).unwrap();
        let sachs = charpoly_via_sachs(&g).unwrap();
        check(sachs == cp(&g), format!("mask {mask}: Sachs {sachs} vs {}", cp(&g)))?;
        check(odd_index_parity_check(&g).unwrap(), format!("mask {mask}: odd coefficient"))?;
        graphs += 1;
    }
    let g = example1_g();
    check(charpoly_via_sachs(&g).unwrap() == IntPolynomial::from_i64(&EXAMPLE1_CHARPOLY), "Example 1 G differs")?;
    check(odd_index_parity_check(&g).unwrap(), "Example 1 G odd coefficient")?;
    let t = within(start, SACHS_LIMIT)?;
    Ok(format!("{graphs} six-vertex graphs and Example 1 G agree, odd-index coefficients even; {t:.2?}"))
}

fn criterion10() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for n in 1..=7 {
        let r = exhaustive_mate_search(n, Bucketing::Generalized, MATE_WORKERS).map_err(|e| e.to_string())?;
        check(r.is_partition(), format!("n = {n}: bucketing is not a partition"))?;
        check(r.dgs_certified_in_pairs.is_empty(), format!("n = {n}: certified graphs {:?} have mates", r.dgs_certified_in_pairs))?;
        summary.push(format!("n={n}: {} pairs, {} certified", r.pairs.len(), r.dgs_certified_classes));
    }
    let r = exhaustive_mate_search(5, Bucketing::CospectralOnly, MATE_WORKERS).map_err(|e| e.to_string())?;
    let star = Graph::star(5).unwrap();
    let c4k1 = Graph::cycle(4).unwrap().disjoint_union(&Graph::empty(1).unwrap()).unwrap();
    let iso = |a: &str, b: &Graph| {
        is_isomorphic_bruteforce(&parse_graph6(a).unwrap(), b).unwrap()
    };
    let found = r
        .pairs
        .iter()
        .any(|p| (iso(&p.first, &star) && iso(&p.second, &c4k1)) || (iso(&p.first, &c4k1) && iso(&p.second, &star)));
    check(found, "pair {C4 ∪ K1, K_{1,4}} not recovered")?;
    let t = within(start, MATES_LIMIT)?;
    Ok(format!("{}; cospectral pair at n=5 recovered; {t:.2?}", summary.join("; ")))
}

fn main() {
    // The harness-free target still receives libtest flags such as --list.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Example 1 certificate", criterion1),
        ("Example 1 characteristic polynomials", criterion2),
        ("Example 1 orthogonal matrix and level", criterion3),
        ("levels of the reference matrices", criterion4),
        ("GF(2) annihilation suite", criterion5),
        ("odd-order annihilation suite", criterion6),
        ("valuation suite", criterion7),
        ("Smith normal forms of Example 1", criterion8),
        ("Sachs oracle", criterion9),
        ("exhaustive mate oracle", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
