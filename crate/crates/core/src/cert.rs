//! DGS certificates from the 2-adic valuation and odd part of `det W`.
//!
//! Two tests are implemented. The general one fires when
//! `2^{-floor(n/2)} det W` is odd and square-free and proves the graph DGS.
//! For graphs whose degrees are all even, `det W` is always divisible by
//! `2^{floor((3n-3)/2)}`; when the quotient is odd and square-free the graph
//! is DGS among Eulerian graphs, and such graphs form the set `Σ_n`. Graphs
//! whose degrees are all odd are certified through their complement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::factor::DEFAULT_BIT_BUDGET;
use crate::exact::{
    char_poly, determinant, odd_part, smith_normal_form, squarefree_status, two_adic_valuation, BigIntMatrix,
    SmithNormalForm, SquareFree,
};
use crate::graph::{isomorphic_unchecked, Graph};
use crate::ortho::{check_conjugation, is_orthogonal, is_regular, level, regular_orthogonal_from_walks, OrthoError};
use crate::walk::{reduced_walk_matrix, walk_matrix};

/// Largest order for which the level report runs a brute-force isomorphism test.
pub const LEVEL_ISOMORPHISM_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("graph is not a member of Σ_n")]
    NotSigmaMember,
    #[error("graphs have different orders {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("hypotheses unmet: {}", .0.join("; "))]
    HypothesesUnmet(Vec<String>),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

pub type Result<T> = std::result::Result<T, CertError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "wang")]
    Wang,
    #[serde(rename = "eulerian-main")]
    EulerianMain,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "DGS")]
    Dgs,
    #[serde(rename = "DGS-among-Eulerian")]
    DgsAmongEulerian,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Outcome of a certification attempt. Failure paths still fill in every
/// quantity that could be computed and explain themselves in `reasons`.
///
/// When `via_complement` is set, the determinant and SNF fields describe
/// the complement of the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgsCertificate {
    pub n: usize,
    pub is_eulerian: bool,
    pub all_degrees_even: bool,
    #[serde(rename = "detW", with = "crate::serde_bigint")]
    pub det_w: BigInt,
    pub v2: Option<u64>,
    #[serde(with = "crate::serde_bigint::option")]
    pub odd_part: Option<BigInt>,
    pub squarefree: Option<SquareFree>,
    pub sigma_member: bool,
    pub theorem: Theorem,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    #[serde(rename = "snf_W")]
    pub snf_w: SmithNormalForm,
    #[serde(rename = "snf_Wbar")]
    pub snf_wbar: Option<SmithNormalForm>,
    #[serde(with = "crate::serde_bigint::option")]
    pub b: Option<BigInt>,
    pub via_complement: bool,
    pub snf_shape_matches: Option<bool>,
}

impl DgsCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict != Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Width limit for cofactors handed to Pollard rho.
    pub factor_bit_budget: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { factor_bit_budget: DEFAULT_BIT_BUDGET }
    }
}

/// Valuation exponent required by the test for graphs with even degrees.
pub fn eulerian_exponent(n: usize) -> u64 {
    ((3 * n).saturating_sub(3) / 2) as u64
}

/// Valuation exponent required by the general test.
pub fn wang_exponent(n: usize) -> u64 {
    (n / 2) as u64
}

/// Fills in the determinant fields and the square-free status of the odd
/// part; returns the certificate with verdict inconclusive.
fn base_certificate(g: &Graph, opts: &CertifyOptions) -> DgsCertificate {
    let w = walk_matrix(g);
    let det_w = determinant(&w).expect("walk matrix is square");
    let snf_w = smith_normal_form(&w).expect("walk matrix is square");
    let mut cert = DgsCertificate {
        n: g.n(),
        is_eulerian: g.is_eulerian(),
        all_degrees_even: g.all_degrees_even(),
        det_w: det_w.clone(),
        v2: None,
        odd_part: None,
        squarefree: None,
        sigma_member: false,
        theorem: Theorem::None,
        verdict: Verdict::Inconclusive,
        reasons: Vec::new(),
        snf_w,
        snf_wbar: None,
        b: None,
        via_complement: false,
        snf_shape_matches: None,
    };
    if det_w.is_zero() {
        cert.reasons.push("det W = 0 (non-controllable)".into());
        return cert;
    }
    let odd = odd_part(&det_w).expect("nonzero");
    cert.v2 = Some(two_adic_valuation(&det_w).expect("nonzero"));
    cert.squarefree = Some(squarefree_status(&odd, opts.factor_bit_budget).expect("nonzero"));
    cert.odd_part = Some(odd);
    cert
}

/// Appends the reasons a valuation test failed; true when it passed.
fn valuation_test(cert: &mut DgsCertificate, exponent: u64) -> bool {
    let Some(v2) = cert.v2 else {
        return false;
    };
    let mut ok = true;
    if v2 != exponent {
        cert.reasons.push(format!("v2(det W) = {v2}, expected {exponent}"));
        ok = false;
    }
    match cert.squarefree {
        Some(SquareFree::True) => {}
        Some(SquareFree::False) => {
            cert.reasons.push("odd part of det W is not square-free".into());
            ok = false;
        }
        _ => {
            cert.reasons.push("factorization budget exceeded".into());
            ok = false;
        }
    }
    ok
}

/// The general test: `2^{-floor(n/2)} det W` odd and square-free.
pub fn certify_wang(g: &Graph) -> DgsCertificate {
    certify_wang_with(g, &CertifyOptions::default())
}

pub fn certify_wang_with(g: &Graph, opts: &CertifyOptions) -> DgsCertificate {
    let mut cert = base_certificate(g, opts);
    if valuation_test(&mut cert, wang_exponent(g.n())) {
        cert.theorem = Theorem::Wang;
        cert.verdict = Verdict::Dgs;
    }
    cert
}

/// The test for graphs with all degrees even (or, through the complement,
/// all degrees odd).
pub fn certify_main(g: &Graph) -> DgsCertificate {
    certify_main_with(g, &CertifyOptions::default())
}

pub fn certify_main_with(g: &Graph, opts: &CertifyOptions) -> DgsCertificate {
    if !g.all_degrees_even() && g.all_degrees_odd() {
        let mut cert = certify_main_with(&g.complement(), opts);
        cert.via_complement = true;
        cert.is_eulerian = g.is_eulerian();
        cert.all_degrees_even = false;
        cert.reasons.insert(0, "all degrees odd; certified through the complement".into());
        return cert;
    }
    let mut cert = base_certificate(g, opts);
    if !g.all_degrees_even() {
        cert.reasons.push(format!("odd-degree vertex {:?}", g.odd_vertices()));
        return cert;
    }
    let wbar = reduced_walk_matrix(g).expect("degrees are even");
    cert.snf_wbar = Some(smith_normal_form(&wbar).expect("square"));
    if !valuation_test(&mut cert, eulerian_exponent(g.n())) {
        return cert;
    }
    cert.sigma_member = true;
    cert.b = cert.odd_part.as_ref().map(|x| x.abs());
    let shape = snf_shape_check(&cert).expect("certificate marks a member of Σ_n");
    cert.snf_shape_matches = Some(shape);
    if !shape {
        cert.reasons.push("SNF shape does not match the predicted template".into());
    }
    if !g.is_connected() {
        cert.reasons.push("graph is disconnected; all degrees even suffices".into());
    }
    cert.theorem = Theorem::EulerianMain;
    cert.verdict = Verdict::DgsAmongEulerian;
    cert
}

fn repeat(x: i64, count: usize) -> impl Iterator<Item = BigInt> {
    std::iter::repeat_n(BigInt::from(x), count)
}

/// Predicted invariant factors of `W` and `W̄` for a member of `Σ_n` with
/// odd square-free cofactor `b`:
/// `W ~ (1, 2^{r-1}, 4^{s-1}, 4b)` and `W̄ ~ (1^r, 2^{s-1}, 2b)` with
/// `r = ceil((n+1)/2)`, `s = floor((n-1)/2)`. When `s = 0` there is no
/// final entry and `b` must be 1.
pub fn snf_templates(n: usize, b: &BigInt) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let r = (n + 2) / 2;
    let s = n.saturating_sub(1) / 2;
    if s == 0 {
        if !b.is_one() {
            return None;
        }
        let w = repeat(1, 1).chain(repeat(2, r - 1)).collect();
        return Some((w, repeat(1, r).collect()));
    }
    let w = repeat(1, 1).chain(repeat(2, r - 1)).chain(repeat(4, s - 1)).chain([b * 4]).collect();
    let wbar = repeat(1, r).chain(repeat(2, s - 1)).chain([b * 2]).collect();
    Some((w, wbar))
}

/// Whether the recorded SNFs match the templates of [`snf_templates`].
pub fn snf_shape_check(cert: &DgsCertificate) -> Result<bool> {
    if !cert.sigma_member {
        return Err(CertError::NotSigmaMember);
    }
    let (Some(b), Some(wbar)) = (&cert.b, &cert.snf_wbar) else {
        return Err(CertError::NotSigmaMember);
    };
    Ok(match snf_templates(cert.n, b) {
        Some((tw, twbar)) => cert.snf_w.invariant_factors == tw && wbar.invariant_factors == twbar,
        None => false,
    })
}

/// Equal characteristic polynomials for the graphs and for their complements.
pub fn verify_generalized_cospectral(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() {
        return false;
    }
    let cp = |x: &Graph| char_poly(&BigIntMatrix::adjacency(x)).expect("square");
    cp(g) == cp(h) && cp(&g.complement()) == cp(&h.complement())
}

/// Level of `Q = W(G) W(H)^{-1}` checked against the divisibility the
/// certification theory predicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    #[serde(with = "crate::serde_bigint")]
    pub level: BigInt,
    /// Last invariant factor of `W(G)`.
    #[serde(with = "crate::serde_bigint")]
    pub d_n: BigInt,
    pub level_divides_d_n: bool,
    pub sigma_member: bool,
    /// Checked when `G` is in `Σ_n`.
    pub level_divides_4: Option<bool>,
    pub h_all_degrees_even: bool,
    /// Checked when `G` is in `Σ_n` and `H` has all degrees even.
    pub level_is_one: Option<bool>,
    /// Brute-force isomorphism, run when `level_is_one` is checked and
    /// `n <= LEVEL_ISOMORPHISM_LIMIT`.
    pub isomorphic: Option<bool>,
}

impl LevelReport {
    pub fn all_hold(&self) -> bool {
        self.level_divides_d_n
            && self.level_divides_4 != Some(false)
            && self.level_is_one != Some(false)
            && self.isomorphic != Some(false)
    }
}

pub fn level_divisibility_check(g: &Graph, h: &Graph) -> Result<LevelReport> {
    if g.n() != h.n() {
        return Err(CertError::OrderMismatch(g.n(), h.n()));
    }
    let mut unmet = Vec::new();
    if !verify_generalized_cospectral(g, h) {
        unmet.push("graphs are not generalized cospectral".to_string());
    }
    let cert = certify_main(g);
    if cert.det_w.is_zero() {
        unmet.push("W(G) is singular".to_string());
    }
    if !unmet.is_empty() {
        return Err(CertError::HypothesesUnmet(unmet));
    }
    let q = regular_orthogonal_from_walks(g, h)?;
    if !(is_orthogonal(&q) && is_regular(&q) && check_conjugation(&q, g, h)) {
        return Err(CertError::Ortho(OrthoError::IdentityFailed("regular orthogonal conjugation")));
    }
    let level = level(&q).level;
    let d_n = cert.snf_w.last().cloned().unwrap_or_else(BigInt::zero);
    let sigma_member = cert.sigma_member && !cert.via_complement;
    let h_all_degrees_even = h.all_degrees_even();
    let level_is_one = (sigma_member && h_all_degrees_even).then(|| level.is_one());
    let isomorphic = (level_is_one.is_some() && g.n() <= LEVEL_ISOMORPHISM_LIMIT).then(|| isomorphic_unchecked(g, h));
    Ok(LevelReport {
        level_divides_d_n: d_n.is_multiple_of(&level),
        level_divides_4: sigma_member.then(|| BigInt::from(4).is_multiple_of(&level)),
        level,
        d_n,
        sigma_member,
        h_all_degrees_even,
        level_is_one,
        isomorphic,
    })
}
