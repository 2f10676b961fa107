//! Canonical example graphs and matrices used by the CLI docs and the test
//! suites: the dunce's cap, the three-loop box ladder whose tensor numerator
//! needs one coextension, and K_{3,3}.

use crate::exact_linalg::QMatrix;
use crate::graph::FeynGraph;

fn lbl(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Dunce's cap: edges a: v1->v3, b: v1->v2, c, d: v3->v2, with momentum q1
/// entering at v1, q2 at v2 and q3 at v3.
pub fn dunce_cap() -> FeynGraph {
    FeynGraph::build(
        &["v1", "v2", "v3"],
        &[
            ("a", "v1", "v3"),
            ("b", "v1", "v2"),
            ("c", "v3", "v2"),
            ("d", "v3", "v2"),
        ],
        &[("e1", "v1", "q1"), ("e2", "v2", "q2"), ("e3", "v3", "q3")],
    )
    .expect("valid fixture")
}

/// The full 3x4 incidence matrix of the dunce's cap.
pub fn dunce_cap_incidence() -> QMatrix {
    QMatrix::from_integer_rows(
        vec![vec![-1, -1, 0, 0], vec![0, 1, 1, 1], vec![1, 0, -1, -1]],
        lbl(&["a", "b", "c", "d"]),
    )
    .expect("valid fixture")
}

/// The three-loop ladder with ten internal edges a1..a10 and external
/// momenta q1, q2 entering on one side and q3, q4 on the other. Edge
/// momenta under the conventional routing are
/// a1: l, a2: l-s, a3: s, a4: s-r, a5: r, a6: q1-l, a7: q-l, a8: q-s,
/// a9: q-r, a10: r-q3 with q = q1+q2. The numerator l.r pairs a1 with a5.
pub fn big_graph() -> FeynGraph {
    FeynGraph::build(
        &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"],
        &[
            ("a1", "v5", "v1"),
            ("a2", "v1", "v3"),
            ("a3", "v1", "v2"),
            ("a4", "v2", "v4"),
            ("a5", "v2", "v7"),
            ("a6", "v5", "v6"),
            ("a7", "v6", "v3"),
            ("a8", "v3", "v4"),
            ("a9", "v4", "v8"),
            ("a10", "v7", "v8"),
        ],
        &[
            ("e1", "v5", "q1"),
            ("e2", "v6", "q2"),
            ("e3", "v7", "q3"),
            ("e4", "v8", "q4"),
        ],
    )
    .expect("valid fixture")
}

/// The 9x15 momentum-conservation matrix for the ladder with the extra
/// (l - r) element: columns a1..a10, the four external columns, then a11.
pub fn big_matrix() -> QMatrix {
    QMatrix::from_integer_rows(
        vec![
            vec![1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 0, 1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 1, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0],
            vec![-1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 1, 0, 0, 0],
            vec![0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1, 0, 0],
            vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, -1, 0],
            vec![-1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        ],
        lbl(&[
            "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "e1", "e2", "e3", "e4",
            "a11",
        ]),
    )
    .expect("valid fixture")
}

/// The circuits of the coextended ladder matroid on the internal columns:
/// six cycles that pick up a11 where l - r flows, plus the joined circuit.
pub fn big_expected_internal_circuits() -> Vec<Vec<&'static str>> {
    vec![
        vec!["a1", "a2", "a6", "a7", "a11"],
        vec!["a2", "a3", "a4", "a8"],
        vec!["a4", "a5", "a9", "a10", "a11"],
        vec!["a1", "a3", "a4", "a6", "a7", "a8", "a11"],
        vec!["a2", "a3", "a5", "a8", "a9", "a10", "a11"],
        vec!["a1", "a3", "a5", "a6", "a7", "a8", "a9", "a10"],
        vec!["a1", "a2", "a6", "a7", "a4", "a5", "a9", "a10"],
    ]
}

/// The circuits of the ten-edge ladder itself.
pub fn big_expected_graph_circuits() -> Vec<Vec<&'static str>> {
    vec![
        vec!["a1", "a2", "a6", "a7"],
        vec!["a2", "a3", "a4", "a8"],
        vec!["a4", "a5", "a9", "a10"],
        vec!["a1", "a3", "a4", "a6", "a7", "a8"],
        vec!["a2", "a3", "a5", "a8", "a9", "a10"],
        vec!["a1", "a3", "a5", "a6", "a7", "a8", "a9", "a10"],
    ]
}

/// K_{3,3} directed from one part to the other, vertex order chosen so that
/// removing the last row of the incidence matrix gives the conventional
/// 5x9 representing matrix.
pub fn k33_graph() -> FeynGraph {
    FeynGraph::build(
        &["w1", "w2", "w3", "u2", "u3", "u1"],
        &[
            ("e1", "u1", "w1"),
            ("e2", "u1", "w2"),
            ("e3", "u1", "w3"),
            ("e4", "u2", "w1"),
            ("e5", "u3", "w1"),
            ("e6", "u2", "w2"),
            ("e7", "u3", "w2"),
            ("e8", "u2", "w3"),
            ("e9", "u3", "w3"),
        ],
        &[],
    )
    .expect("valid fixture")
}

/// The row-reduced 5x9 representing matrix of K_{3,3}.
pub fn k33_row_reduced() -> QMatrix {
    QMatrix::from_integer_rows(
        vec![
            vec![1, 0, 0, 0, 0, -1, -1, -1, -1],
            vec![0, 1, 0, 0, 0, 1, 1, 0, 0],
            vec![0, 0, 1, 0, 0, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 0, 1, 0, 1, 0],
            vec![0, 0, 0, 0, 1, 0, 1, 0, 1],
        ],
        lbl(&["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9"]),
    )
    .expect("valid fixture")
}

/// The two admissible coextensions of K_{3,3} on edges 7 and 8: 6x10
/// matrices that differ in one sign of the new bottom row.
pub fn k33_coextensions() -> (QMatrix, QMatrix) {
    let labels = lbl(&["e1", "e2", "e3", "e4", "e5", "x1", "e6", "e7", "e8", "e9"]);
    let top = vec![
        vec![1, 0, 0, 0, 0, 0, -1, -1, -1, -1],
        vec![0, 1, 0, 0, 0, 0, 1, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 0, 0, 1, 1],
        vec![0, 0, 0, 1, 0, 0, 1, 0, 1, 0],
        vec![0, 0, 0, 0, 1, 0, 0, 1, 0, 1],
    ];
    let mut first = top.clone();
    first.push(vec![0, 0, 0, 0, 0, 1, 0, 1, 1, 0]);
    let mut second = top;
    second.push(vec![0, 0, 0, 0, 0, 1, 0, 1, -1, 0]);
    (
        QMatrix::from_integer_rows(first, labels.clone()).expect("valid fixture"),
        QMatrix::from_integer_rows(second, labels).expect("valid fixture"),
    )
}

/// The rank-2 four-element matroid with every 3-subset a circuit; the
/// obstruction to binary representability.
pub fn u24_matrix() -> QMatrix {
    QMatrix::from_integer_rows(
        vec![vec![1, 0, 1, 1], vec![0, 1, 1, -1]],
        lbl(&["p1", "p2", "p3", "p4"]),
    )
    .expect("valid fixture")
}

/// Triangle with one external momentum per vertex.
pub fn triangle() -> FeynGraph {
    FeynGraph::build(
        &["v1", "v2", "v3"],
        &[("a", "v1", "v2"), ("b", "v2", "v3"), ("c", "v3", "v1")],
        &[("e1", "v1", "q1"), ("e2", "v2", "q2"), ("e3", "v3", "q3")],
    )
    .expect("valid fixture")
}

/// Two parallel edges with momentum q1 in, q2 out.
pub fn bubble() -> FeynGraph {
    FeynGraph::build(
        &["v1", "v2"],
        &[("a", "v1", "v2"), ("b", "v1", "v2")],
        &[("e1", "v1", "q1"), ("e2", "v2", "q2")],
    )
    .expect("valid fixture")
}

/// Two-edge path; no circuits at all.
pub fn path_graph() -> FeynGraph {
    FeynGraph::build(
        &["v1", "v2", "v3"],
        &[("a", "v1", "v2"), ("b", "v2", "v3")],
        &[("e1", "v1", "q1"), ("e3", "v3", "q3")],
    )
    .expect("valid fixture")
}
