//! Reference objects shipped with the crate: a generalized cospectral pair
//! on ten vertices (the first Eulerian, the second not) and two regular
//! rational orthogonal matrices of levels 2 and 3.

use crate::exact::RationalMatrix;
use crate::graph::Graph;

const EXAMPLE1_G: [[u8; 10]; 10] = [
    [0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [1, 1, 0, 1, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [1, 1, 1, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 1, 1, 0, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 1, 0, 0, 1, 0],
];

const EXAMPLE1_H: [[u8; 10]; 10] = [
    [0, 0, 1, 1, 1, 1, 0, 0, 1, 1],
    [0, 0, 1, 0, 0, 1, 0, 1, 0, 1],
    [1, 1, 0, 0, 0, 0, 0, 1, 1, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 1, 1, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 1, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 1, 0, 0, 0, 0],
];

/// Characteristic polynomial shared by both graphs of the pair, lowest
/// degree first.
pub const EXAMPLE1_CHARPOLY: [i64; 11] = [-4, 32, 48, -88, -108, 62, 73, -12, -17, 0, 1];

/// Characteristic polynomial shared by both complements.
pub const EXAMPLE1_COMPLEMENT_CHARPOLY: [i64; 11] = [3, 20, 0, -142, -31, 176, 67, -54, -28, 0, 1];

/// The Eulerian member of the pair.
pub fn example1_g() -> Graph {
    Graph::from_adjacency(&EXAMPLE1_G).expect("fixture is a valid graph")
}

/// Its non-Eulerian generalized cospectral mate.
pub fn example1_h() -> Graph {
    Graph::from_adjacency(&EXAMPLE1_H).expect("fixture is a valid graph")
}

/// Level-2 regular orthogonal matrix: `(J - 2I) / 2` on four points.
pub fn q1() -> RationalMatrix {
    RationalMatrix::scaled(
        &[&[-1, 1, 1, 1], &[1, -1, 1, 1], &[1, 1, -1, 1], &[1, 1, 1, -1]],
        2,
    )
    .expect("fixture is rectangular")
}

/// Level-3 regular orthogonal matrix on six points.
pub fn q2() -> RationalMatrix {
    RationalMatrix::scaled(
        &[
            &[2, -1, -1, 1, 1, 1],
            &[-1, 2, -1, 1, 1, 1],
            &[-1, -1, 2, 1, 1, 1],
            &[1, 1, 1, 2, -1, -1],
            &[1, 1, 1, -1, 2, -1],
            &[1, 1, 1, -1, -1, 2],
        ],
        3,
    )
    .expect("fixture is rectangular")
}
