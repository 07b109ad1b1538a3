//! Characteristic polynomial coefficients from elementary subgraphs:
//! `c_i = sum (-1)^p 2^c` over spanning unions of disjoint edges and cycles
//! on exactly `i` vertices, with `p` components of which `c` are cycles.

use crate::exact::IntPolynomial;
use crate::graph::Graph;

use super::{OracleError, Result};

/// Largest order accepted by the enumeration.
pub const SACHS_MAX_ORDER: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Edge(usize, usize),
    /// Vertices in cyclic order, starting at the smallest; at least three.
    Cycle(Vec<usize>),
}

impl Component {
    pub fn vertices(&self) -> usize {
        match self {
            Component::Edge(..) => 2,
            Component::Cycle(c) => c.len(),
        }
    }
}

/// A disjoint union of edges and cycles, borrowed from the enumerator.
#[derive(Debug, Clone, Copy)]
pub struct ElementarySubgraph<'a> {
    /// Bit `v` set when vertex `v` is covered.
    pub vertex_set: u32,
    pub components: &'a [Component],
}

impl ElementarySubgraph<'_> {
    pub fn order(&self) -> usize {
        self.vertex_set.count_ones() as usize
    }

    /// Number of components.
    pub fn p(&self) -> usize {
        self.components.len()
    }

    /// Number of cycle components.
    pub fn c(&self) -> usize {
        self.components.iter().filter(|x| matches!(x, Component::Cycle(_))).count()
    }

    /// `(-1)^p 2^c`.
    pub fn weight(&self) -> i64 {
        let w = 1i64 << self.c();
        if self.p() % 2 == 0 {
            w
        } else {
            -w
        }
    }
}

fn guard(g: &Graph) -> Result<()> {
    if g.n() > SACHS_MAX_ORDER {
        return Err(OracleError::SizeGuard { n: g.n(), max: SACHS_MAX_ORDER });
    }
    Ok(())
}

struct Enumerator<'g, F> {
    g: &'g Graph,
    nbr: Vec<u32>,
    components: Vec<Component>,
    visit: F,
}

impl<F: FnMut(&ElementarySubgraph)> Enumerator<'_, F> {
    /// `decided` holds vertices already excluded or covered; `covered` the
    /// covered ones. The lowest undecided vertex is excluded, paired with a
    /// later neighbour, or made the smallest vertex of a cycle.
    fn run(&mut self, decided: u32, covered: u32) {
        let n = self.g.n();
        if decided.count_ones() as usize == n {
            (self.visit)(&ElementarySubgraph { vertex_set: covered, components: &self.components });
            return;
        }
        let v = (!decided).trailing_zeros() as usize;
        let bit = 1u32 << v;
        self.run(decided | bit, covered);

        let free = self.nbr[v] & !decided;
        let mut later = free;
        while later != 0 {
            let u = later.trailing_zeros() as usize;
            later &= later - 1;
            let ub = 1u32 << u;
            self.components.push(Component::Edge(v, u));
            self.run(decided | bit | ub, covered | bit | ub);
            self.components.pop();
        }

        let mut path = vec![v];
        self.extend_cycle(&mut path, decided | bit, decided, covered);
    }

    /// Grows a path from `path[0]` through undecided vertices; closes a
    /// cycle whenever the tip is adjacent to the start, counting each cycle
    /// once by requiring the second vertex to be smaller than the last.
    fn extend_cycle(&mut self, path: &mut Vec<usize>, on_path: u32, decided: u32, covered: u32) {
        let start = path[0];
        let tip = *path.last().expect("path starts non-empty");
        let mut next = self.nbr[tip] & !on_path & !decided;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            path.push(w);
            let mask = on_path | (1 << w);
            if path.len() >= 3 && self.nbr[w] & (1 << start) != 0 && path[1] < w {
                self.components.push(Component::Cycle(path.clone()));
                let cycle_bits = mask & !decided;
                self.run(decided | cycle_bits, covered | cycle_bits);
                self.components.pop();
            }
            self.extend_cycle(path, mask, decided, covered);
            path.pop();
        }
    }
}

/// Calls `visit` once for every elementary subgraph of `g`, including the
/// empty one.
pub fn for_each_elementary_subgraph<F: FnMut(&ElementarySubgraph)>(g: &Graph, visit: F) -> Result<()> {
    guard(g)?;
    let nbr = (0..g.n()).map(|v| g.row(v).first().copied().unwrap_or(0) as u32).collect();
    let mut e = Enumerator { g, nbr, components: Vec::new(), visit };
    e.run(0, 0);
    Ok(())
}

/// All coefficients `c_0 = 1, c_1, ..., c_n`.
fn sachs_coefficients(g: &Graph) -> Result<Vec<i64>> {
    let mut c = vec![0i64; g.n() + 1];
    for_each_elementary_subgraph(g, |s| c[s.order()] += s.weight())?;
    Ok(c)
}

/// `c_i` of `det(xI - A) = x^n + c_1 x^{n-1} + ... + c_n`.
pub fn sachs_coefficient(g: &Graph, i: usize) -> Result<i64> {
    if i == 0 || i > g.n() {
        return Err(OracleError::IndexOutOfRange { i, n: g.n() });
    }
    Ok(sachs_coefficients(g)?[i])
}

pub fn charpoly_via_sachs(g: &Graph) -> Result<IntPolynomial> {
    let mut c = sachs_coefficients(g)?;
    c.reverse();
    Ok(IntPolynomial::from_i64(&c))
}

/// Whether every `c_i` with `i` odd is even.
pub fn odd_index_parity_check(g: &Graph) -> Result<bool> {
    Ok(sachs_coefficients(g)?.iter().skip(1).step_by(2).all(|c| c % 2 == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::char_poly;
    use crate::exact::BigIntMatrix;
    use crate::fixtures::{example1_g, EXAMPLE1_CHARPOLY};

    #[test]
    fn triangle() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(sachs_coefficient(&k3, 1).unwrap(), 0);
        assert_eq!(sachs_coefficient(&k3, 2).unwrap(), -3);
        assert_eq!(sachs_coefficient(&k3, 3).unwrap(), -2);
        assert_eq!(charpoly_via_sachs(&k3).unwrap(), IntPolynomial::from_i64(&[-2, -3, 0, 1]));
        assert!(odd_index_parity_check(&k3).unwrap());
        assert!(odd_index_parity_check(&Graph::path(3).unwrap()).unwrap());
        assert!(sachs_coefficient(&k3, 0).is_err());
    }

    #[test]
    fn two_vertex_subgraphs_of_complete_graphs_are_edges() {
        for n in 2..=8 {
            let mut count = 0;
            for_each_elementary_subgraph(&Graph::complete(n).unwrap(), |s| {
                if s.order() == 2 {
                    assert_eq!((s.p(), s.c()), (1, 0));
                    count += 1;
                }
            })
            .unwrap();
            assert_eq!(count, n * (n - 1) / 2);
        }
    }

    #[test]
    fn components_are_disjoint_and_well_formed() {
        for_each_elementary_subgraph(&Graph::complete(6).unwrap(), |s| {
            let mut seen = 0u32;
            for comp in s.components {
                let vs: Vec<usize> = match comp {
                    Component::Edge(u, v) => vec![*u, *v],
                    Component::Cycle(c) => {
                        assert!(c.len() >= 3 && c[0] == *c.iter().min().unwrap());
                        c.clone()
                    }
                };
                for v in vs {
                    assert_eq!(seen & (1 << v), 0);
                    seen |= 1 << v;
                }
            }
            assert_eq!(seen, s.vertex_set);
        })
        .unwrap();
    }

    #[test]
    fn cycles_of_k4_are_counted_once() {
        // K4 has four triangles and three 4-cycles.
        let mut by_len = [0; 5];
        for_each_elementary_subgraph(&Graph::complete(4).unwrap(), |s| {
            if let [Component::Cycle(c)] = s.components {
                by_len[c.len()] += 1;
            }
        })
        .unwrap();
        assert_eq!(by_len[3..], [4, 3]);
    }

    #[test]
    fn example1_and_exact_route_agree() {
        let g = example1_g();
        assert_eq!(charpoly_via_sachs(&g).unwrap(), IntPolynomial::from_i64(&EXAMPLE1_CHARPOLY));
        let h = Graph::cycle(7).unwrap().disjoint_union(&Graph::star(5).unwrap()).unwrap();
        assert_eq!(charpoly_via_sachs(&h).unwrap(), char_poly(&BigIntMatrix::adjacency(&h)).unwrap());
    }

    #[test]
    fn guard() {
        assert!(charpoly_via_sachs(&Graph::empty(15).unwrap()).is_err());
    }
}
