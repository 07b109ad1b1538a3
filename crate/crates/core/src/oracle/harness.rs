//! Seeded property suites over random even-degree graphs.
//!
//! Each suite draws `(n, graph seed)` pairs from one ChaCha stream, so a
//! report depends only on the suite, the sample count and the seed; the
//! worker count only changes how the work is split.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cert::{certify_main, eulerian_exponent};
use crate::exact::two_adic_valuation;
use crate::gf2::check_annihilation;
use crate::graph::{random_even_graph, write_graph6, Graph};
use crate::walk::{hat_walk_matrix, mod4_congruence_check, walk_matrices};

/// Suites that keep drawing until `samples` instances meet their hypothesis
/// give up after this many draws per requested sample.
pub const MAX_DRAWS_PER_SAMPLE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    /// `varphi(A) = 0` over GF(2) and the minimal polynomial divides it.
    #[serde(rename = "thm4")]
    Thm4,
    /// Odd `n`, `k >= 3` odd: `x^{(k-1)/2} phi1` annihilates `A`.
    #[serde(rename = "thm9")]
    Thm9,
    /// Odd `n`, `k = 1`: `phi1(A) = J` and `rank_2 A = n - 1`.
    #[serde(rename = "remark2")]
    Remark2,
    /// The mod-4 congruence, and integrality of `Ŵ` for even `n`.
    #[serde(rename = "eq2")]
    Eq2,
    /// `2^{floor((3n-3)/2)} | det W` and the determinant relations.
    #[serde(rename = "valuation")]
    Valuation,
    /// SNF templates for members of `Σ_n`.
    #[serde(rename = "snf-shape")]
    SnfShape,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Thm4, Suite::Thm9, Suite::Remark2, Suite::Eq2, Suite::Valuation, Suite::SnfShape];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm4 => "thm4",
            Suite::Thm9 => "thm9",
            Suite::Remark2 => "remark2",
            Suite::Eq2 => "eq2",
            Suite::Valuation => "valuation",
            Suite::SnfShape => "snf-shape",
        }
    }

    /// Inclusive order range and whether only odd orders are drawn.
    fn orders(self) -> (usize, usize, bool) {
        match self {
            Suite::Thm4 => (2, 64, false),
            Suite::Thm9 | Suite::Remark2 => (3, 63, true),
            Suite::Eq2 => (2, 40, false),
            Suite::Valuation => (3, 24, false),
            Suite::SnfShape => (4, 16, false),
        }
    }

    /// Whether `samples` counts instances meeting the hypothesis rather
    /// than draws.
    fn counts_applicable(self) -> bool {
        matches!(self, Suite::Valuation | Suite::SnfShape)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub graph6: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessReport {
    pub suite: Suite,
    pub seed: u64,
    pub requested: usize,
    pub drawn: usize,
    /// Draws meeting the suite's hypothesis.
    pub applicable: usize,
    pub passed: usize,
    pub failed: usize,
    /// Counts keyed by a short label, e.g. `n even` or `k = 1`.
    pub tallies: BTreeMap<String, usize>,
    pub counterexamples: Vec<Counterexample>,
}

impl HarnessReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

enum Outcome {
    NotApplicable,
    Pass,
    Fail(String),
}

struct Checked {
    graph6: String,
    tags: Vec<String>,
    outcome: Outcome,
}

fn parity_tag(n: usize) -> String {
    if n % 2 == 0 { "n even" } else { "n odd" }.to_string()
}

fn evaluate(suite: Suite, g: &Graph) -> Checked {
    let n = g.n();
    let mut tags = vec![parity_tag(n)];
    let outcome = match suite {
        Suite::Thm4 => match check_annihilation(g) {
            Ok(r) if r.varphi_at_a_is_zero && r.minpoly_divides_varphi => Outcome::Pass,
            Ok(r) => Outcome::Fail(format!(
                "varphi(A) = 0: {}, minpoly {} divides varphi {}: {}",
                r.varphi_at_a_is_zero, r.minpoly, r.varphi, r.minpoly_divides_varphi
            )),
            Err(e) => Outcome::Fail(e.to_string()),
        },
        Suite::Thm9 | Suite::Remark2 => match check_annihilation(g) {
            Ok(r) => {
                tags.push(format!("k = {}", r.k));
                let held = if suite == Suite::Thm9 { r.theorem9_holds } else { r.remark2_holds };
                match held {
                    None => Outcome::NotApplicable,
                    Some(true) => Outcome::Pass,
                    Some(false) => Outcome::Fail(format!(
                        "k = {}, phi1 = {}, phi1(A) = J: {:?}, rank_2 A = {:?}",
                        r.k, r.phi1, r.phi1_at_a_is_all_ones, r.rank2_a
                    )),
                }
            }
            Err(e) => Outcome::Fail(e.to_string()),
        },
        Suite::Eq2 => match mod4_congruence_check(g) {
            Ok(false) => Outcome::Fail("congruence fails mod 4".into()),
            Err(e) => Outcome::Fail(e.to_string()),
            Ok(true) if n % 2 == 1 => Outcome::Pass,
            Ok(true) => match hat_walk_matrix(g) {
                Ok(_) => Outcome::Pass,
                Err(e) => Outcome::Fail(e.to_string()),
            },
        },
        Suite::Valuation => valuation(g),
        Suite::SnfShape => {
            let c = certify_main(g);
            if !c.sigma_member {
                Outcome::NotApplicable
            } else if c.snf_shape_matches != Some(true) {
                Outcome::Fail(format!("SNF(W) = {:?}, b = {:?}", c.snf_w.invariant_factors, c.b))
            } else if c.snf_w.product() != c.det_w.abs() {
                Outcome::Fail("invariant factors of W do not multiply to |det W|".into())
            } else {
                Outcome::Pass
            }
        }
    };
    Checked { graph6: write_graph6(g).expect("order within graph6 range"), tags, outcome }
}

fn valuation(g: &Graph) -> Outcome {
    let n = g.n();
    // A non-integral Ŵ or a broken determinant relation surfaces as an error.
    let m = match walk_matrices(g) {
        Ok(m) => m,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    if m.det_w.is_zero() {
        return Outcome::NotApplicable;
    }
    let v2 = two_adic_valuation(&m.det_w).expect("nonzero");
    if v2 < eulerian_exponent(n) {
        return Outcome::Fail(format!("v2(det W) = {v2} < {}", eulerian_exponent(n)));
    }
    if n % 2 == 0 && !m.det_what.as_ref().is_some_and(|d| (d << (3 * n / 2 - 2)) == m.det_w) {
        return Outcome::Fail("det Ŵ relation".into());
    }
    Outcome::Pass
}

fn plan(suite: Suite, seed: u64, count: usize, skip: usize) -> Vec<(usize, u64)> {
    let (lo, hi, odd_only) = suite.orders();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut drawn = 0;
    while out.len() < count {
        let n = if odd_only { lo + 2 * rng.gen_range(0..=(hi - lo) / 2) } else { rng.gen_range(lo..=hi) };
        let graph_seed: u64 = rng.gen();
        if drawn >= skip {
            out.push((n, graph_seed));
        }
        drawn += 1;
    }
    out
}

fn run_batch(suite: Suite, batch: &[(usize, u64)], workers: usize) -> Vec<Checked> {
    let workers = workers.max(1).min(batch.len().max(1));
    let chunk = batch.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = batch
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&(n, gs)| {
                            let g = random_even_graph(n, gs, false).expect("even-degree generation without connectivity");
                            evaluate(suite, &g)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn property_harness(suite: Suite, samples: usize, seed: u64, workers: usize) -> HarnessReport {
    let mut report = HarnessReport {
        suite,
        seed,
        requested: samples,
        drawn: 0,
        applicable: 0,
        passed: 0,
        failed: 0,
        tallies: BTreeMap::new(),
        counterexamples: Vec::new(),
    };
    let max_draws = if suite.counts_applicable() { samples * MAX_DRAWS_PER_SAMPLE } else { samples };
    while report.drawn < max_draws {
        if suite.counts_applicable() && report.applicable >= samples {
            break;
        }
        let want = if suite.counts_applicable() { samples - report.applicable } else { samples };
        let batch = plan(suite, seed, want.min(max_draws - report.drawn), report.drawn);
        for checked in run_batch(suite, &batch, workers) {
            if suite.counts_applicable() && report.applicable >= samples {
                break;
            }
            report.drawn += 1;
            for t in checked.tags {
                *report.tallies.entry(t).or_default() += 1;
            }
            match checked.outcome {
                Outcome::NotApplicable => continue,
                Outcome::Pass => report.passed += 1,
                Outcome::Fail(detail) => {
                    report.failed += 1;
                    report.counterexamples.push(Counterexample { graph6: checked.graph6, detail });
                }
            }
            report.applicable += 1;
        }
    }
    report
}
