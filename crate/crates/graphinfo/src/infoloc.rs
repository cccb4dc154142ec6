//! Location of information among carrier subsets: the subset information
//! group, membership tests through one Smith reduction per subset, and the
//! perfectly-present / absent / partially-present classification.

use std::collections::BTreeSet;

use crate::graphcode::{EncodedCode, TrivialForm};
use crate::zdlinalg::{
    count_homogeneous_with, smith_normal_form, solve_right_with, SmithDecomposition, ZdMatrix,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One representative (xi | zeta) of a coset of the information group, in
/// input coordinates: 0 <= xi_j, zeta_j < d_j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetRep {
    pub xi: Vec<i64>,
    pub zeta: Vec<i64>,
}

impl CosetRep {
    pub fn identity(k: usize) -> Self {
        CosetRep {
            xi: vec![0; k],
            zeta: vec![0; k],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.xi.iter().all(|&v| v == 0) && self.zeta.iter().all(|&v| v == 0)
    }

    /// Componentwise composition mod d_j.
    pub fn compose(&self, other: &CosetRep, dims: &[i64]) -> CosetRep {
        CosetRep {
            xi: (0..dims.len())
                .map(|j| (self.xi[j] + other.xi[j]).rem_euclid(dims[j]))
                .collect(),
            zeta: (0..dims.len())
                .map(|j| (self.zeta[j] + other.zeta[j]).rem_euclid(dims[j]))
                .collect(),
        }
    }

    pub fn inverse(&self, dims: &[i64]) -> CosetRep {
        CosetRep {
            xi: (0..dims.len())
                .map(|j| (-self.xi[j]).rem_euclid(dims[j]))
                .collect(),
            zeta: (0..dims.len())
                .map(|j| (-self.zeta[j]).rem_euclid(dims[j]))
                .collect(),
        }
    }

    pub fn power(&self, e: i64, dims: &[i64]) -> CosetRep {
        CosetRep {
            xi: (0..dims.len())
                .map(|j| (self.xi[j] * e).rem_euclid(dims[j]))
                .collect(),
            zeta: (0..dims.len())
                .map(|j| (self.zeta[j] * e).rem_euclid(dims[j]))
                .collect(),
        }
    }

    /// The exponent pair (x0 | z0) of length 2n in trivial-code coordinates:
    /// x0_j = xi_j and z0_j = zeta_j * m_j for j < k, zero elsewhere.
    pub fn to_pair(&self, trivial: &TrivialForm, n: usize, d: i64) -> Vec<i64> {
        let mut pair = vec![0i64; 2 * n];
        for j in 0..trivial.k {
            pair[j] = self.xi[j].rem_euclid(d);
            pair[n + j] = (self.zeta[j] * trivial.m[j]).rem_euclid(d);
        }
        pair
    }
}

/// All K^2 coset representatives, zeta varying fastest, in a fixed order.
pub fn all_reps(trivial: &TrivialForm) -> Vec<CosetRep> {
    let dims = &trivial.d;
    let k = trivial.k;
    let mut out = Vec::new();
    let mut xi = vec![0i64; k];
    loop {
        let mut zeta = vec![0i64; k];
        loop {
            out.push(CosetRep {
                xi: xi.clone(),
                zeta: zeta.clone(),
            });
            if !increment(&mut zeta, dims) {
                break;
            }
        }
        if !increment(&mut xi, dims) {
            break;
        }
    }
    out
}

fn increment(digits: &mut [i64], dims: &[i64]) -> bool {
    for j in (0..digits.len()).rev() {
        digits[j] += 1;
        if digits[j] < dims[j] {
            return true;
        }
        digits[j] = 0;
    }
    false
}

/// Everything needed to answer membership queries for one carrier subset B:
/// the selection matrix J, the test matrix T with its Smith decomposition,
/// the stabilizer-in-B count, the normalization N, and rank(P_B).
#[derive(Debug, Clone)]
pub struct SubsetContext {
    /// Sorted 0-based carrier indices of B.
    pub b: Vec<usize>,
    /// 2n x 2n diagonal selector of the complement coordinates.
    pub j: ZdMatrix,
    /// Q*J, used to form right-hand sides.
    pub qj: ZdMatrix,
    /// The n x (2n + k) test matrix [top rows of Q*J | M].
    pub t: ZdMatrix,
    smith_t: SmithDecomposition,
    /// |S intersect B| - stabilizer elements based in B.
    pub stab_in_b: u128,
    /// Normalization N of the partial-trace isomorphism, as a reduced
    /// fraction. N need not be an integer (pentagon code, |B| = 2: N = 1/2).
    pub n_const: Ratio,
    /// rank(P_B) = K / N, always a positive integer.
    pub rank_pb: u128,
}

/// An exact nonnegative rational, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0);
        let g = gcd_u128(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `num * base^e / den` as a reduced fraction, cancelling gcds along the way
/// so intermediates stay within u128.
fn scaled_ratio(num: u128, base: u128, e: usize, den: u128) -> Ratio {
    let g = gcd_u128(num, den);
    let mut num = num / g;
    let mut den = den / g;
    for _ in 0..e {
        let g = gcd_u128(base, den);
        den /= g;
        num = num
            .checked_mul(base / g)
            .expect("ratio numerator fits in u128");
    }
    Ratio::new(num, den)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Build the subset context: one Smith reduction of T per (code, B).
pub fn build_context(code: &EncodedCode, b: &[usize]) -> SubsetContext {
    let n = code.n();
    let d = code.modulus();
    let k = code.trivial.k;
    let mut b: Vec<usize> = b.to_vec();
    b.sort_unstable();
    b.dedup();
    assert!(b.iter().all(|&q| q < n), "subset index out of range");

    let in_b = {
        let mut mask = vec![false; n];
        for &q in &b {
            mask[q] = true;
        }
        mask
    };
    let mut j = ZdMatrix::zeros(2 * n, 2 * n, d);
    for q in 0..n {
        if !in_b[q] {
            j.set(q, q, 1);
            j.set(n + q, n + q, 1);
        }
    }
    let qj = code.clifford.q.mul(&j).expect("dimensions agree");

    let mm = code.trivial.membership_matrix(n, d);
    let mut t = ZdMatrix::zeros(n, 2 * n + k, d);
    for r in 0..n {
        for c in 0..2 * n {
            t.set(r, c, qj.get(r, c));
        }
        for c in 0..k {
            t.set(r, 2 * n + c, mm.get(r, c));
        }
    }
    let smith_t = smith_normal_form(&t);
    let stab_in_b = count_homogeneous_with(&smith_t);

    let bc = n - b.len();
    let n_const = scaled_ratio(stab_in_b, d as u128, bc, code.stabilizer_size);
    let order = code.trivial.order;
    // K/N = K * den / num.
    let scaled = order
        .checked_mul(n_const.den)
        .expect("rank numerator fits in u128");
    assert_eq!(scaled % n_const.num, 0, "K/N must be an integer");
    let rank_pb = scaled / n_const.num;

    SubsetContext {
        b,
        j,
        qj,
        t,
        smith_t,
        stab_in_b,
        n_const,
        rank_pb,
    }
}

/// Membership in the subset information group: the linear system x*T = u0 is
/// solvable, with u0 = (-(x0|z0)*Q*J | 0^k).
pub fn is_member(rep: &CosetRep, ctx: &SubsetContext, code: &EncodedCode) -> bool {
    let n = code.n();
    let d = code.modulus();
    let pair = rep.to_pair(&code.trivial, n, d);
    let image = ctx.qj.row_vec_mul(&pair).expect("pair length matches");
    let mut u = vec![0i64; 2 * n + code.trivial.k];
    for (c, &e) in image.iter().enumerate() {
        u[c] = (-e).rem_euclid(d);
    }
    solve_right_with(&ctx.smith_t, &u)
        .expect("dimensions agree")
        .solvable
}

/// Presence classification of one information type on a carrier subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Presence {
    PerfectlyPresent,
    Absent,
    /// Smallest power 1 < k' < D whose image is a nonidentity member.
    PartiallyPresent { power: i64 },
}

/// The subset information group and classification of every coset rep.
#[derive(Debug, Clone)]
pub struct SubsetReport {
    pub b: Vec<usize>,
    pub members: Vec<CosetRep>,
    pub all_present: bool,
    pub all_absent: bool,
    pub per_element: Vec<(CosetRep, Presence)>,
    pub is_abelian: bool,
    pub n_const: Ratio,
    pub rank_pb: u128,
}

/// Classify every representative for subset B by membership of its powers.
///
/// A nonmember is absent when no power 1..D-1 maps to a nonidentity member;
/// identity powers are excluded because the subgroup generated by a power
/// that collapses to the identity carries no information.
pub fn subset_info_group(code: &EncodedCode, b: &[usize]) -> SubsetReport {
    let ctx = build_context(code, b);
    let d = code.modulus();
    let dims = code.trivial.d.clone();
    let reps = all_reps(&code.trivial);

    let mut members = Vec::new();
    let mut member_set: BTreeSet<CosetRep> = BTreeSet::new();
    for rep in &reps {
        if is_member(rep, &ctx, code) {
            members.push(rep.clone());
            member_set.insert(rep.clone());
        }
    }

    let mut per_element = Vec::with_capacity(reps.len());
    for rep in &reps {
        let presence = if member_set.contains(rep) {
            Presence::PerfectlyPresent
        } else {
            let mut witness = None;
            for e in 2..d {
                let p = rep.power(e, &dims);
                if !p.is_identity() && member_set.contains(&p) {
                    witness = Some(e);
                    break;
                }
            }
            match witness {
                Some(power) => Presence::PartiallyPresent { power },
                None => Presence::Absent,
            }
        };
        per_element.push((rep.clone(), presence));
    }

    let total = reps.len();
    let all_present = members.len() == total;
    let all_absent = members.len() == 1;
    let is_abelian = is_abelian(&members, &code.trivial);

    SubsetReport {
        b: ctx.b.clone(),
        members,
        all_present,
        all_absent,
        per_element,
        is_abelian,
        n_const: ctx.n_const,
        rank_pb: ctx.rank_pb,
    }
}

/// Commutation in input coordinates: the exponent of the commutator phase is
/// sum_j m_j (xi_j zeta'_j - zeta_j xi'_j) mod D.
pub fn commutation_exponent(a: &CosetRep, b: &CosetRep, trivial: &TrivialForm, d: i64) -> i64 {
    let mut acc = 0i64;
    for j in 0..trivial.k {
        acc = (acc + trivial.m[j] * (a.xi[j] * b.zeta[j] - a.zeta[j] * b.xi[j])).rem_euclid(d);
    }
    acc
}

/// True iff every pair of members commutes.
pub fn is_abelian(members: &[CosetRep], trivial: &TrivialForm) -> bool {
    let modulus = trivial.smith.s.modulus();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if commutation_exponent(a, b, trivial, modulus) != 0 {
                return false;
            }
        }
    }
    true
}

/// Greedy generating set: closure of the returned reps equals `members`.
pub fn generating_set(members: &[CosetRep], trivial: &TrivialForm) -> Vec<CosetRep> {
    let dims = &trivial.d;
    let mut gens: Vec<CosetRep> = Vec::new();
    let mut closure: BTreeSet<CosetRep> = BTreeSet::new();
    if let Some(first) = members.first() {
        closure.insert(CosetRep::identity(first.xi.len()));
    } else {
        return gens;
    }
    for rep in members {
        if closure.contains(rep) {
            continue;
        }
        gens.push(rep.clone());
        // Regrow the closure with the new generator.
        let mut frontier: Vec<CosetRep> = closure.iter().cloned().collect();
        while let Some(v) = frontier.pop() {
            for g in &gens {
                let next = v.compose(g, dims);
                if closure.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    gens
}

fn masks_for(n: usize, size: Option<usize>) -> Vec<u64> {
    (0u64..(1u64 << n))
        .filter(|m| size.map_or(true, |s| m.count_ones() as usize == s))
        .collect()
}

fn mask_subset(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&q| mask >> q & 1 == 1).collect()
}

/// Analyze every subset (optionally only those of a given size), in mask
/// order, distributing subsets across threads.
#[cfg(feature = "parallel")]
pub fn subset_sweep(code: &EncodedCode, size: Option<usize>) -> Vec<SubsetReport> {
    let n = code.n();
    masks_for(n, size)
        .into_par_iter()
        .map(|m| subset_info_group(code, &mask_subset(m, n)))
        .collect()
}

/// Sequential fallback when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn subset_sweep(code: &EncodedCode, size: Option<usize>) -> Vec<SubsetReport> {
    subset_sweep_seq(code, size)
}

/// Single-threaded sweep, always available (benchmark baseline).
pub fn subset_sweep_seq(code: &EncodedCode, size: Option<usize>) -> Vec<SubsetReport> {
    let n = code.n();
    masks_for(n, size)
        .into_iter()
        .map(|m| subset_info_group(code, &mask_subset(m, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcode::{CodingGroup, EncodedCode, Graph};
    use crate::zdlinalg::ZdMatrix;

    fn code(n: usize, d: i64, edges: &[(usize, usize, i64)], rows: &[Vec<i64>]) -> EncodedCode {
        let graph = Graph::from_edges(n, d, edges).unwrap();
        let coding = CodingGroup::new(ZdMatrix::from_rows(rows, d).unwrap());
        EncodedCode::new(graph, coding).unwrap()
    }

    fn pentagon(d: i64) -> EncodedCode {
        code(
            5,
            d,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)],
            &[vec![1, 1, 1, 1, 1]],
        )
    }

    fn complete(n: usize, d: i64) -> EncodedCode {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b, 1));
            }
        }
        code(n, d, &edges, &[vec![1; n]])
    }

    #[test]
    fn full_subset_everything_present() {
        let c = pentagon(2);
        let report = subset_info_group(&c, &[0, 1, 2, 3, 4]);
        assert!(report.all_present);
        assert!(report.n_const.is_one());
        assert_eq!(report.rank_pb, c.trivial.order);
    }

    #[test]
    fn empty_subset_everything_absent() {
        let c = pentagon(2);
        let report = subset_info_group(&c, &[]);
        assert!(report.all_absent);
        assert_eq!(report.members.len(), 1);
        assert!(report.members[0].is_identity());
    }

    #[test]
    fn pentagon_qubit_presence_by_size() {
        let c = pentagon(2);
        for report in subset_sweep_seq(&c, None) {
            let size = report.b.len();
            if size <= 2 {
                assert!(report.all_absent, "B = {:?} should be all-absent", report.b);
            } else {
                assert!(report.all_present, "B = {:?} should be all-present", report.b);
            }
        }
    }

    #[test]
    fn composite_d_refinement() {
        // D = 4, two carriers, no edges, coding group <Z1 Z2^2>: the logical
        // X input is absent as such from carrier 2, but its square is
        // present there.
        let c = code(2, 4, &[], &[vec![1, 2]]);
        assert_eq!(c.trivial.order, 4);
        let ctx = build_context(&c, &[1]);
        let x1 = CosetRep {
            xi: vec![1],
            zeta: vec![0],
        };
        assert!(!is_member(&x1, &ctx, &c));
        assert!(is_member(&x1.power(2, &c.trivial.d), &ctx, &c));
        let report = subset_info_group(&c, &[1]);
        let entry = report
            .per_element
            .iter()
            .find(|(r, _)| *r == x1)
            .unwrap();
        assert_eq!(entry.1, Presence::PartiallyPresent { power: 2 });
    }

    #[test]
    fn complete_graph_single_vertex_members() {
        for d in [2i64, 3] {
            let c = complete(3, d);
            let report = subset_info_group(&c, &[0]);
            // Members are exactly the powers of the X01 Z01 representative.
            let gen = CosetRep {
                xi: vec![1],
                zeta: vec![1],
            };
            let mut expect: Vec<CosetRep> =
                (0..d).map(|e| gen.power(e, &c.trivial.d)).collect();
            expect.sort();
            expect.dedup();
            let mut got = report.members.clone();
            got.sort();
            assert_eq!(got, expect);
            assert!(report.is_abelian);
        }
    }

    #[test]
    fn members_form_a_group() {
        let c = pentagon(3);
        for report in subset_sweep_seq(&c, Some(3)) {
            let dims = &c.trivial.d;
            let set: BTreeSet<&CosetRep> = report.members.iter().collect();
            for a in &report.members {
                assert!(set.contains(&a.inverse(dims)));
                for b in &report.members {
                    assert!(set.contains(&a.compose(b, dims)));
                }
            }
        }
    }

    #[test]
    fn monotonicity_under_subset_growth() {
        let c = code(3, 6, &[(0, 1, 2), (1, 2, 3)], &[vec![4, 3, 3], vec![0, 3, 3]]);
        let reports = subset_sweep_seq(&c, None);
        for ra in &reports {
            for rb in &reports {
                if ra.b.iter().all(|q| rb.b.contains(q)) {
                    let sb: BTreeSet<&CosetRep> = rb.members.iter().collect();
                    for m in &ra.members {
                        assert!(
                            sb.contains(m),
                            "member {m:?} of B={:?} missing from B'={:?}",
                            ra.b,
                            rb.b
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn duality_of_all_flags() {
        for c in [pentagon(2), complete(4, 3)] {
            let n = c.n();
            let reports = subset_sweep_seq(&c, None);
            for r in &reports {
                let comp: Vec<usize> = (0..n).filter(|q| !r.b.contains(q)).collect();
                let rc = reports
                    .iter()
                    .find(|x| x.b == comp)
                    .expect("complement report exists");
                assert_eq!(r.all_present, rc.all_absent, "duality fails at {:?}", r.b);
            }
        }
    }

    #[test]
    fn prime_d_has_no_partial_presence() {
        let c = pentagon(3);
        for report in subset_sweep_seq(&c, None) {
            for (_, p) in &report.per_element {
                assert!(!matches!(p, Presence::PartiallyPresent { .. }));
            }
        }
    }

    #[test]
    fn generating_set_closure_matches() {
        let c = complete(4, 2);
        for report in subset_sweep_seq(&c, None) {
            let gens = generating_set(&report.members, &c.trivial);
            // Regrow and compare.
            let dims = &c.trivial.d;
            let mut closure: BTreeSet<CosetRep> = BTreeSet::new();
            closure.insert(CosetRep::identity(c.trivial.k));
            let mut frontier: Vec<CosetRep> = closure.iter().cloned().collect();
            while let Some(v) = frontier.pop() {
                for g in &gens {
                    let next = v.compose(g, dims);
                    if closure.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
            let mut members = report.members.clone();
            members.sort();
            let closed: Vec<CosetRep> = closure.into_iter().collect();
            assert_eq!(members, closed);
        }
    }

    #[test]
    fn parallel_and_sequential_sweeps_agree() {
        let c = pentagon(2);
        let par = subset_sweep(&c, None);
        let seq = subset_sweep_seq(&c, None);
        assert_eq!(par.len(), seq.len());
        for (a, b) in par.iter().zip(seq.iter()) {
            assert_eq!(a.b, b.b);
            assert_eq!(a.members, b.members);
            assert_eq!(a.n_const, b.n_const);
        }
    }

    #[test]
    fn rep_arithmetic() {
        let dims = [3i64, 2];
        let a = CosetRep {
            xi: vec![2, 1],
            zeta: vec![1, 0],
        };
        assert!(a.compose(&a.inverse(&dims), &dims).is_identity());
        assert_eq!(a.power(0, &dims), CosetRep::identity(2));
        assert_eq!(a.power(3, &dims).xi, vec![0, 1]);
    }
}
