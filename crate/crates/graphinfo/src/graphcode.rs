//! Additive graph codes: a graph plus a coding group of Z-type operators,
//! the Smith-normal-form reduction of the coding group to a trivial code, and
//! the synthesized encoding circuit W followed by U.

use std::collections::BTreeSet;

use crate::pauli::{build_symplectic, GateSpec, SymplecticClifford};
use crate::zdlinalg::{smith_normal_form, ColOp, SmithDecomposition, ZdError, ZdMatrix};

/// A multigraph on `n` vertices with edge multiplicities mod D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: ZdMatrix,
}

impl Graph {
    pub fn empty(n: usize, d: i64) -> Self {
        Graph {
            n,
            adjacency: ZdMatrix::zeros(n, n, d),
        }
    }

    /// Build from an edge list with 0-based endpoints; multiplicities add up
    /// mod D if an edge is listed twice.
    pub fn from_edges(n: usize, d: i64, edges: &[(usize, usize, i64)]) -> Result<Self, ZdError> {
        let mut adjacency = ZdMatrix::zeros(n, n, d);
        for &(a, b, mult) in edges {
            if a >= n || b >= n || a == b {
                return Err(ZdError::DegenerateInput(format!(
                    "edge ({a},{b}) is not a valid vertex pair"
                )));
            }
            let v = (adjacency.get(a, b) + mult).rem_euclid(d);
            adjacency.set(a, b, v);
            adjacency.set(b, a, v);
        }
        Ok(Graph { n, adjacency })
    }

    pub fn from_adjacency(adjacency: ZdMatrix) -> Result<Self, ZdError> {
        let n = adjacency.rows();
        if adjacency.cols() != n {
            return Err(ZdError::DimensionMismatch(
                "adjacency matrix must be square".into(),
            ));
        }
        for a in 0..n {
            if adjacency.get(a, a) != 0 {
                return Err(ZdError::DegenerateInput(format!(
                    "adjacency matrix has a loop at vertex {a}"
                )));
            }
            for b in 0..a {
                if adjacency.get(a, b) != adjacency.get(b, a) {
                    return Err(ZdError::DegenerateInput(
                        "adjacency matrix is not symmetric".into(),
                    ));
                }
            }
        }
        Ok(Graph { n, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> i64 {
        self.adjacency.modulus()
    }

    pub fn adjacency(&self) -> &ZdMatrix {
        &self.adjacency
    }

    /// Edges `(a, b, multiplicity)` with `a < b`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let m = self.adjacency.get(a, b);
                if m != 0 {
                    out.push((a, b, m));
                }
            }
        }
        out
    }
}

/// Generators of the coding group: each row is the Z-exponent tuple of one
/// generator. Rows may be redundant or dependent; the reduction canonicalizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingGroup {
    f: ZdMatrix,
}

impl CodingGroup {
    pub fn new(f: ZdMatrix) -> Self {
        CodingGroup { f }
    }

    pub fn trivial(n: usize, d: i64) -> Self {
        CodingGroup {
            f: ZdMatrix::zeros(1, n, d),
        }
    }

    pub fn generators(&self) -> &ZdMatrix {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.f.cols()
    }

    pub fn modulus(&self) -> i64 {
        self.f.modulus()
    }

    /// Brute-force closure of the row group, sorted. Returns `None` if the
    /// closure exceeds `limit` elements.
    pub fn row_group(&self, limit: usize) -> Option<Vec<Vec<i64>>> {
        row_closure(&self.f, limit)
    }
}

/// Closure of the additive group generated by the rows of `f`, sorted.
pub fn row_closure(f: &ZdMatrix, limit: usize) -> Option<Vec<Vec<i64>>> {
    let d = f.modulus();
    let n = f.cols();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    seen.insert(vec![0; n]);
    let mut frontier: Vec<Vec<i64>> = vec![vec![0; n]];
    while let Some(v) = frontier.pop() {
        for r in 0..f.rows() {
            let next: Vec<i64> = (0..n)
                .map(|c| (v[c] + f.get(r, c)).rem_euclid(d))
                .collect();
            if seen.insert(next.clone()) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(next);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// The trivial form C_0 = <Z_1^{m_1}, ..., Z_k^{m_k}> of a coding group,
/// together with the gate list realizing the recorded column operations.
#[derive(Debug, Clone)]
pub struct TrivialForm {
    /// Number of nontrivial logical factors.
    pub k: usize,
    /// Exponents m_j, each a divisor of D.
    pub m: Vec<i64>,
    /// Logical dimensions d_j = D / m_j, each > 1.
    pub d: Vec<i64>,
    /// Group order K = prod d_j.
    pub order: u128,
    /// The full Smith decomposition of the generator matrix.
    pub smith: SmithDecomposition,
    /// Gates whose conjugation maps C_0 onto the input coding group.
    pub gates_w: Vec<GateSpec>,
    /// Original generator rows expressed over the reduced ones (v inverse).
    pub row_map: ZdMatrix,
    /// Diagonal entries equal to D (stored 0) dropped as trivial factors.
    pub dropped: usize,
}

fn col_op_gate(op: ColOp) -> Option<GateSpec> {
    match op {
        ColOp::Swap { a, b } => Some(GateSpec::Swap { a, b }),
        ColOp::Scale { a, q } => Some(GateSpec::Smult { q: a, scale: q }),
        ColOp::AddMul { dest, src, m } => {
            if m == 0 {
                None
            } else {
                Some(GateSpec::Cnot {
                    control: dest,
                    target: src,
                    power: m,
                })
            }
        }
    }
}

/// Reduce a coding group to trivial form (Smith normal form over Z_D).
///
/// The conjugation action of `gates_w` equals multiplying Z-exponent rows by
/// the inverse of the recorded column transform, which carries the reduced
/// generators back onto the row group of the input. The column operations are
/// therefore inverted and emitted in reverse order.
pub fn reduce_to_trivial(coding: &CodingGroup) -> TrivialForm {
    let d = coding.modulus();
    let smith = smith_normal_form(coding.generators());
    let k = smith.diag.iter().filter(|&&g| g != 0).count();
    let m: Vec<i64> = smith.diag[..k].to_vec();
    let dims: Vec<i64> = m.iter().map(|&mj| d / mj).collect();
    let order = dims
        .iter()
        .try_fold(1u128, |acc, &dj| acc.checked_mul(dj as u128))
        .expect("group order fits in u128");
    let gates_w: Vec<GateSpec> = smith
        .col_ops
        .iter()
        .rev()
        .filter_map(|&op| col_op_gate(op.inverse(d)))
        .collect();
    let row_map = smith.v_inv.clone();
    let dropped = smith.diag.len() - k;
    TrivialForm {
        k,
        m,
        d: dims,
        order,
        smith,
        gates_w,
        row_map,
        dropped,
    }
}

impl TrivialForm {
    /// The n x k membership matrix M with M_jj = m_j: x is in the lattice
    /// X_0 of stabilizer X-exponents iff x * M = 0 mod D.
    pub fn membership_matrix(&self, n: usize, d: i64) -> ZdMatrix {
        let mut mm = ZdMatrix::zeros(n, self.k, d);
        for (j, &mj) in self.m.iter().enumerate() {
            mm.set(j, j, mj % d);
        }
        mm
    }

    /// |X_0| = D^{n-k} * prod m_j, which equals |S| = D^n / K.
    pub fn lattice_size(&self, n: usize, d: i64) -> u128 {
        let mut size = 1u128;
        for _ in 0..n - self.k {
            size = size.checked_mul(d as u128).expect("lattice size fits u128");
        }
        for &mj in &self.m {
            size = size
                .checked_mul(mj as u128)
                .expect("lattice size fits u128");
        }
        size
    }
}

/// CP gates realizing the graph entangler U, one per edge, lexicographic.
pub fn gates_u(graph: &Graph) -> Vec<GateSpec> {
    graph
        .edges()
        .into_iter()
        .map(|(a, b, power)| GateSpec::Cp { a, b, power })
        .collect()
}

/// The full encoding gate list: W first, then U.
pub fn synthesize_encoding(trivial: &TrivialForm, graph: &Graph) -> Vec<GateSpec> {
    let mut gates = trivial.gates_w.clone();
    gates.extend(gates_u(graph));
    gates
}

/// A fully prepared additive graph code: reduction, encoding circuit, the
/// symplectic conjugation map Q of the whole circuit, and stabilizer sizes.
#[derive(Debug, Clone)]
pub struct EncodedCode {
    pub graph: Graph,
    pub coding: CodingGroup,
    pub trivial: TrivialForm,
    pub gates_u: Vec<GateSpec>,
    pub clifford: SymplecticClifford,
    /// |S| = D^n / K.
    pub stabilizer_size: u128,
}

impl EncodedCode {
    pub fn new(graph: Graph, coding: CodingGroup) -> Result<Self, ZdError> {
        if graph.modulus() != coding.modulus() {
            return Err(ZdError::ModulusMismatch(graph.modulus(), coding.modulus()));
        }
        if graph.n() != coding.n() {
            return Err(ZdError::DimensionMismatch(format!(
                "graph has {} vertices but coding rows have length {}",
                graph.n(),
                coding.n()
            )));
        }
        let n = graph.n();
        let d = graph.modulus();
        let trivial = reduce_to_trivial(&coding);
        let ugates = gates_u(&graph);
        let mut all = trivial.gates_w.clone();
        all.extend(ugates.iter().copied());
        let clifford = build_symplectic(&all, n, d)?;
        let stabilizer_size = trivial.lattice_size(n, d);
        Ok(EncodedCode {
            graph,
            coding,
            trivial,
            gates_u: ugates,
            clifford,
            stabilizer_size,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn modulus(&self) -> i64 {
        self.graph.modulus()
    }

    /// The encoding gate list W ++ U.
    pub fn encoding_gates(&self) -> &[GateSpec] {
        &self.clifford.gates
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::conjugate_pair;
    use crate::zdlinalg::solve_right;

    fn golden_coding() -> CodingGroup {
        CodingGroup::new(ZdMatrix::from_rows(&[vec![4, 3, 3], vec![0, 3, 3]], 6).unwrap())
    }

    #[test]
    fn golden_reduction_mod6() {
        let trivial = reduce_to_trivial(&golden_coding());
        assert_eq!(trivial.k, 2);
        assert_eq!(trivial.m, vec![2, 3]);
        assert_eq!(trivial.d, vec![3, 2]);
        assert_eq!(trivial.order, 6);
        assert_eq!(
            trivial.gates_w,
            vec![GateSpec::Cnot {
                control: 2,
                target: 1,
                power: 1
            }]
        );
    }

    #[test]
    fn identity_reduction() {
        let coding = CodingGroup::new(ZdMatrix::identity(2, 5));
        let trivial = reduce_to_trivial(&coding);
        assert_eq!(trivial.m, vec![1, 1]);
        assert_eq!(trivial.d, vec![5, 5]);
        assert_eq!(trivial.order, 25);
        assert!(trivial.gates_w.is_empty());
    }

    #[test]
    fn steane_row_reduction() {
        let coding =
            CodingGroup::new(ZdMatrix::from_rows(&[vec![0, 0, 1, 0, 1, 0, 1]], 2).unwrap());
        let trivial = reduce_to_trivial(&coding);
        assert_eq!(trivial.k, 1);
        assert_eq!(trivial.m, vec![1]);
        assert_eq!(trivial.d, vec![2]);
        assert_eq!(trivial.order, 2);
        assert_eq!(coding.row_group(16).unwrap().len(), 2);
    }

    #[test]
    fn order_matches_closure() {
        let cases: Vec<(i64, Vec<Vec<i64>>)> = vec![
            (6, vec![vec![4, 3, 3], vec![0, 3, 3]]),
            (4, vec![vec![2, 2], vec![0, 2]]),
            (6, vec![vec![1, 1, 1]]),
            (8, vec![vec![2, 4, 0], vec![0, 2, 4], vec![4, 0, 2]]),
            (12, vec![vec![3, 0], vec![0, 4]]),
        ];
        for (d, rows) in cases {
            let coding = CodingGroup::new(ZdMatrix::from_rows(&rows, d).unwrap());
            let trivial = reduce_to_trivial(&coding);
            let closure = coding.row_group(10_000).unwrap();
            assert_eq!(
                trivial.order,
                closure.len() as u128,
                "order mismatch for rows {rows:?} mod {d}"
            );
        }
    }

    /// Conjugating each trivial generator Z_j^{m_j} through gatesW must land
    /// in the row group of f, and the images must generate all of it.
    #[test]
    fn gates_w_carry_trivial_onto_coding_group() {
        let cases: Vec<(i64, Vec<Vec<i64>>)> = vec![
            (6, vec![vec![4, 3, 3], vec![0, 3, 3]]),
            (2, vec![vec![0, 0, 1, 0, 1, 0, 1]]),
            (4, vec![vec![1, 1]]),
            (9, vec![vec![3, 6, 0], vec![0, 3, 3]]),
            (10, vec![vec![2, 5], vec![5, 0]]),
        ];
        for (d, rows) in cases {
            let coding = CodingGroup::new(ZdMatrix::from_rows(&rows, d).unwrap());
            let n = coding.n();
            let trivial = reduce_to_trivial(&coding);
            let mut images = Vec::new();
            for (j, &mj) in trivial.m.iter().enumerate() {
                let mut pair = vec![0i64; 2 * n];
                pair[n + j] = mj;
                for &g in &trivial.gates_w {
                    pair = conjugate_pair(&pair, g, n, d);
                }
                assert!(
                    pair[..n].iter().all(|&x| x == 0),
                    "W image of a Z generator must stay Z-type"
                );
                let z: Vec<i64> = pair[n..].to_vec();
                let sol = solve_right(coding.generators(), &z).unwrap();
                assert!(sol.solvable, "image {z:?} not in row group ({rows:?} mod {d})");
                images.push(z);
            }
            let image_matrix = ZdMatrix::from_rows(&images, d).unwrap();
            let expect = row_closure(coding.generators(), 10_000).unwrap();
            let got = row_closure(&image_matrix, 10_000).unwrap();
            assert_eq!(expect, got, "images must generate the full row group");
        }
    }

    #[test]
    fn lattice_size_matches_stabilizer_order() {
        let coding = golden_coding();
        let trivial = reduce_to_trivial(&coding);
        assert_eq!(trivial.lattice_size(3, 6), 36); // 6^3 / 6
        let mm = trivial.membership_matrix(3, 6);
        assert_eq!(mm.get(0, 0), 2); // m_1
        assert_eq!(mm.get(1, 1), 3); // m_2
        assert_eq!(mm.get(2, 0), 0);
        // Count x with x*M = 0 directly and compare.
        let mut count = 0u128;
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let u = mm.row_vec_mul(&[a, b, c]).unwrap();
                    if u.iter().all(|&e| e == 0) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 36);
    }

    #[test]
    fn graph_construction_and_edges() {
        let g = Graph::from_edges(4, 3, &[(0, 1, 1), (2, 3, 2), (0, 1, 1)]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1, 2), (2, 3, 2)]);
        assert_eq!(
            gates_u(&g),
            vec![
                GateSpec::Cp { a: 0, b: 1, power: 2 },
                GateSpec::Cp { a: 2, b: 3, power: 2 }
            ]
        );
        assert!(Graph::from_edges(2, 3, &[(0, 0, 1)]).is_err());
        let mut bad = ZdMatrix::zeros(2, 2, 3);
        bad.set(0, 1, 1);
        assert!(Graph::from_adjacency(bad).is_err());
    }

    #[test]
    fn encoded_code_basics() {
        let graph = Graph::from_edges(3, 6, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let code = EncodedCode::new(graph, golden_coding()).unwrap();
        assert_eq!(code.stabilizer_size, 36);
        assert_eq!(code.stabilizer_size * code.trivial.order, 6u128.pow(3));
        assert!(code.clifford.preserves_symplectic_form());
        assert_eq!(code.encoding_gates().len(), 3); // CNOT32 + two CP gates
    }

    #[test]
    fn empty_graph_identity_coding_has_no_gates() {
        let graph = Graph::empty(2, 5);
        let coding = CodingGroup::new(ZdMatrix::identity(2, 5));
        let trivial = reduce_to_trivial(&coding);
        assert!(synthesize_encoding(&trivial, &graph).is_empty());
    }
}
