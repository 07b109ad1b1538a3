//! Exhaustive search for non-isomorphic graphs sharing the characteristic
//! polynomials of both the graph and its complement.
//!
//! Every labelled graph on `n <= 7` vertices is enumerated by its
//! upper-triangle mask. Graphs are bucketed by polynomial key and, within a
//! bucket, grouped into isomorphism classes represented by their smallest
//! mask. Contiguous mask ranges go to worker threads whose bucket maps are
//! merged in range order, so the output does not depend on the worker count.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::cert::{certify_wang, Verdict};
use crate::graph::{isomorphic_unchecked, write_graph6, Graph};

use super::{OracleError, Result};

/// Largest order accepted by the search (`2^21` labelled graphs).
pub const MATE_SEARCH_MAX_ORDER: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bucketing {
    /// Key on the polynomials of the graph and of its complement.
    Generalized,
    /// Key on the polynomial of the graph alone.
    CospectralOnly,
}

type Key = ([i64; 8], [i64; 8]);

#[derive(Debug, Clone)]
struct Class {
    mask: u64,
    graph: Graph,
    count: u64,
}

type Buckets = HashMap<Key, Vec<Class>>;

/// A pair of non-isomorphic graphs in the same bucket, smaller mask first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatePair {
    pub first: String,
    pub second: String,
    #[serde(skip)]
    pub masks: (u64, u64),
}

#[derive(Debug, Clone, Serialize)]
pub struct MateSearchReport {
    pub n: usize,
    pub bucketing: Bucketing,
    pub workers: usize,
    /// Labelled graphs passing the filter.
    pub graphs_enumerated: u64,
    /// Sum of class sizes over all buckets; equals `graphs_enumerated`.
    pub graphs_bucketed: u64,
    pub buckets: usize,
    pub isomorphism_classes: usize,
    pub pairs: Vec<MatePair>,
    /// Classes whose representative passes the general DGS test.
    pub dgs_certified_classes: usize,
    /// Certified graphs found inside some pair; must be empty.
    pub dgs_certified_in_pairs: Vec<String>,
}

impl MateSearchReport {
    /// Every enumerated graph was bucketed exactly once.
    pub fn is_partition(&self) -> bool {
        self.graphs_enumerated == self.graphs_bucketed
    }
}

/// Characteristic polynomial of a graph on at most seven vertices,
/// Faddeev-LeVerrier in fixed arrays. Lowest degree first, zero padded.
fn small_char_poly(adj: &[u8; 8], n: usize) -> [i64; 8] {
    let mut coeffs = [0i64; 8];
    coeffs[n] = 1;
    let mut m = [[0i64; 7]; 7];
    for (i, row) in m.iter_mut().enumerate().take(n) {
        row[i] = 1;
    }
    for k in 1..=n {
        let mut am = [[0i64; 7]; 7];
        for i in 0..n {
            let mut bits = adj[i];
            while bits != 0 {
                let l = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for j in 0..n {
                    am[i][j] += m[l][j];
                }
            }
        }
        let trace: i64 = (0..n).map(|i| am[i][i]).sum();
        let c = -trace / k as i64;
        for i in 0..n {
            am[i][i] += c;
        }
        m = am;
        coeffs[n - k] = c;
    }
    coeffs
}

fn key_of(mask: u64, n: usize, bucketing: Bucketing) -> Key {
    let mut adj = [0u8; 8];
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if mask >> bit & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            bit += 1;
        }
    }
    let cp = small_char_poly(&adj, n);
    let comp = match bucketing {
        Bucketing::Generalized => {
            let full = (1u8 << n) - 1;
            let mut cadj = [0u8; 8];
            for v in 0..n {
                cadj[v] = !adj[v] & full & !(1 << v);
            }
            small_char_poly(&cadj, n)
        }
        Bucketing::CospectralOnly => [0; 8],
    };
    (cp, comp)
}

fn insert(buckets: &mut Buckets, key: Key, class: Class) {
    let classes = buckets.entry(key).or_default();
    match classes.iter_mut().find(|c| isomorphic_unchecked(&c.graph, &class.graph)) {
        Some(c) => {
            c.count += class.count;
            if class.mask < c.mask {
                c.mask = class.mask;
                c.graph = class.graph;
            }
        }
        None => classes.push(class),
    }
}

fn scan<F: Fn(&Graph) -> bool>(n: usize, range: std::ops::Range<u64>, bucketing: Bucketing, filter: &F) -> (Buckets, u64) {
    let mut buckets = Buckets::new();
    let mut seen = 0;
    for mask in range {
        let graph = Graph::from_upper_mask(n, mask).expect("order within bounds");
        if !filter(&graph) {
            continue;
        }
        seen += 1;
        insert(&mut buckets, key_of(mask, n, bucketing), Class { mask, graph, count: 1 });
    }
    (buckets, seen)
}

pub fn exhaustive_mate_search(n: usize, bucketing: Bucketing, workers: usize) -> Result<MateSearchReport> {
    exhaustive_mate_search_filtered(n, bucketing, workers, |_| true)
}

/// As [`exhaustive_mate_search`], restricted to graphs accepted by `filter`.
pub fn exhaustive_mate_search_filtered<F>(
    n: usize,
    bucketing: Bucketing,
    workers: usize,
    filter: F,
) -> Result<MateSearchReport>
where
    F: Fn(&Graph) -> bool + Sync,
{
    if n == 0 || n > MATE_SEARCH_MAX_ORDER {
        return Err(OracleError::SizeGuard { n, max: MATE_SEARCH_MAX_ORDER });
    }
    let workers = workers.max(1);
    let total = 1u64 << (n * (n - 1) / 2);
    let chunk = total.div_ceil(workers as u64);
    let ranges: Vec<_> = (0..workers as u64).map(|w| (w * chunk).min(total)..((w + 1) * chunk).min(total)).collect();

    let parts: Vec<(Buckets, u64)> = std::thread::scope(|s| {
        let handles: Vec<_> =
            ranges.iter().map(|r| s.spawn(|| scan(n, r.clone(), bucketing, &filter))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    // Merge in range order; within a part, classes keep insertion order.
    let mut merged = Buckets::new();
    let mut enumerated = 0;
    for (part, seen) in parts {
        enumerated += seen;
        let mut keys: Vec<_> = part.into_iter().collect();
        keys.sort_by_key(|(_, classes)| classes[0].mask);
        for (key, classes) in keys {
            for c in classes {
                insert(&mut merged, key, c);
            }
        }
    }

    let ordered: BTreeMap<Key, Vec<Class>> = merged
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by_key(|c| c.mask);
            (k, v)
        })
        .collect();

    let mut pairs = Vec::new();
    let mut certified = 0;
    let mut certified_in_pairs = Vec::new();
    let mut bucketed = 0;
    let mut classes_total = 0;
    for classes in ordered.values() {
        classes_total += classes.len();
        for c in classes {
            bucketed += c.count;
            if certify_wang(&c.graph).verdict == Verdict::Dgs {
                certified += 1;
                if classes.len() > 1 {
                    certified_in_pairs.push(write_graph6(&c.graph).expect("small graph"));
                }
            }
        }
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                pairs.push(MatePair {
                    first: write_graph6(&a.graph).expect("small graph"),
                    second: write_graph6(&b.graph).expect("small graph"),
                    masks: (a.mask, b.mask),
                });
            }
        }
    }
    pairs.sort_by_key(|p| p.masks);

    Ok(MateSearchReport {
        n,
        bucketing,
        workers,
        graphs_enumerated: enumerated,
        graphs_bucketed: bucketed,
        buckets: ordered.len(),
        isomorphism_classes: classes_total,
        pairs,
        dgs_certified_classes: certified,
        dgs_certified_in_pairs: certified_in_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::char_poly_i64;
    use crate::graph::parse_graph6;

    #[test]
    fn small_char_poly_matches_general_route() {
        for mask in (0..1u64 << 21).step_by(9973) {
            let g = Graph::from_upper_mask(7, mask).unwrap();
            let a: Vec<Vec<i64>> = g.adjacency().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
            let (cp, comp) = key_of(mask, 7, Bucketing::Generalized);
            assert_eq!(cp.to_vec(), char_poly_i64(&a).unwrap());
            let ca: Vec<Vec<i64>> =
                g.complement().adjacency().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
            assert_eq!(comp.to_vec(), char_poly_i64(&ca).unwrap());
        }
    }

    #[test]
    fn class_counts_for_small_orders() {
        // Unlabelled graph counts on 1..=5 vertices.
        for (n, classes) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)] {
            let r = exhaustive_mate_search(n, Bucketing::Generalized, 2).unwrap();
            assert_eq!(r.isomorphism_classes, classes, "n = {n}");
            assert!(r.is_partition());
        }
    }

    #[test]
    fn star_and_square_plus_point_are_cospectral() {
        let r = exhaustive_mate_search(5, Bucketing::CospectralOnly, 3).unwrap();
        let star = write_graph6(&Graph::star(5).unwrap()).unwrap();
        let c4k1 = write_graph6(&Graph::cycle(4).unwrap().disjoint_union(&Graph::empty(1).unwrap()).unwrap()).unwrap();
        let (star, c4k1) = (parse_graph6(&star).unwrap(), parse_graph6(&c4k1).unwrap());
        let found = r.pairs.iter().any(|p| {
            let (a, b) = (parse_graph6(&p.first).unwrap(), parse_graph6(&p.second).unwrap());
            (isomorphic_unchecked(&a, &star) && isomorphic_unchecked(&b, &c4k1))
                || (isomorphic_unchecked(&a, &c4k1) && isomorphic_unchecked(&b, &star))
        });
        assert!(found, "{:?}", r.pairs);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let a = exhaustive_mate_search(5, Bucketing::CospectralOnly, 1).unwrap();
        let b = exhaustive_mate_search(5, Bucketing::CospectralOnly, 4).unwrap();
        assert_eq!(a.pairs, b.pairs);
        assert_eq!(a.isomorphism_classes, b.isomorphism_classes);
    }

    #[test]
    fn guard() {
        assert!(exhaustive_mate_search(8, Bucketing::Generalized, 1).is_err());
    }
}
