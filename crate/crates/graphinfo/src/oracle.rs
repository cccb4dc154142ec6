//! Dense complex-matrix ground truth: graph states, codewords, the coding
//! space projector, information operators, partial traces, and the
//! correctable-algebra commutant. Everything here is built directly from the
//! operator definitions, independent of the symbolic pipeline it checks.

use num_complex::Complex64;
use thiserror::Error;

use crate::graphcode::{row_closure, EncodedCode};
use crate::infoloc::CosetRep;
use crate::pauli::GateSpec;

pub const DEFAULT_DENSE_BUDGET: u128 = 1024;
pub const TOL: f64 = 1e-9;

type C64 = Complex64;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("dense dimension {dim} exceeds budget {budget}")]
    BudgetExceeded { dim: u128, budget: u128 },
    #[error("coding group too large for dense enumeration")]
    GroupTooLarge,
}

fn omega_pow(d: i64, e: i64) -> C64 {
    let t = 2.0 * std::f64::consts::PI * (e.rem_euclid(d) as f64) / (d as f64);
    C64::from_polar(1.0, t)
}

/// Minimal dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            a: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.a[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(i, k);
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.a[i * rhs.cols + j] += v * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(C64::new(s, 0.0))
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&rhs.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&rhs.a).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn approx_eq(&self, rhs: &CMat, tol: f64) -> bool {
        self.sub(rhs).frob_norm() <= tol
    }

    /// Matrix power by repeated multiplication (small exponents only).
    pub fn pow(&self, e: u32) -> CMat {
        let mut out = CMat::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

/// Index arithmetic for n qudits of dimension D, qudit 0 most significant.
#[derive(Debug, Clone, Copy)]
pub struct Digits {
    pub n: usize,
    pub d: i64,
    pub dim: usize,
}

impl Digits {
    pub fn new(n: usize, d: i64) -> Self {
        let dim = (d as usize).pow(n as u32);
        Digits { n, d, dim }
    }

    #[inline]
    pub fn stride(&self, q: usize) -> usize {
        (self.d as usize).pow((self.n - 1 - q) as u32)
    }

    #[inline]
    pub fn digit(&self, idx: usize, q: usize) -> i64 {
        ((idx / self.stride(q)) % self.d as usize) as i64
    }

    /// Replace digit `q` of `idx` with `v`.
    #[inline]
    pub fn with_digit(&self, idx: usize, q: usize, v: i64) -> usize {
        let s = self.stride(q);
        idx - (self.digit(idx, q) as usize) * s + (v.rem_euclid(self.d) as usize) * s
    }
}

pub fn plus_state(n: usize, d: i64) -> Vec<C64> {
    let dg = Digits::new(n, d);
    let amp = 1.0 / (dg.dim as f64).sqrt();
    vec![C64::new(amp, 0.0); dg.dim]
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Two unit vectors equal up to a global phase.
pub fn equal_up_to_phase(a: &[C64], b: &[C64], tol: f64) -> bool {
    let ip = inner(a, b);
    (ip.norm() - 1.0).abs() <= tol
}

/// A Pauli product as a monomial matrix: row r has its only entry at
/// `col[r]` with value `phase[r]`.
#[derive(Debug, Clone)]
pub struct PauliDense {
    pub col: Vec<usize>,
    pub phase: Vec<C64>,
}

impl PauliDense {
    /// omega^lambda X^x Z^z per the component definition: the single-qudit
    /// entry is M[j, j+x] = omega^{z(j+x)}.
    pub fn new(lambda: i64, x: &[i64], z: &[i64], d: i64) -> Self {
        let n = x.len();
        let dg = Digits::new(n, d);
        let mut col = vec![0usize; dg.dim];
        let mut phase = vec![C64::new(0.0, 0.0); dg.dim];
        for r in 0..dg.dim {
            let mut c = r;
            let mut e = lambda;
            for q in 0..n {
                let cj = (dg.digit(r, q) + x[q]).rem_euclid(d);
                c = dg.with_digit(c, q, cj);
                e += z[q] * cj;
            }
            col[r] = c;
            phase[r] = omega_pow(d, e);
        }
        PauliDense { col, phase }
    }

    pub fn from_pair(pair: &[i64], d: i64) -> Self {
        let n = pair.len() / 2;
        PauliDense::new(0, &pair[..n], &pair[n..], d)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..v.len()).map(|r| self.phase[r] * v[self.col[r]]).collect()
    }

    pub fn to_cmat(&self) -> CMat {
        let dim = self.col.len();
        let mut m = CMat::zeros(dim, dim);
        for r in 0..dim {
            m.set(r, self.col[r], self.phase[r]);
        }
        m
    }
}

/// Apply one Clifford gate to a state vector, using the matrix definitions
/// directly (Fourier, S_q, CNOT, SWAP, CP).
pub fn apply_gate(v: &[C64], gate: GateSpec, n: usize, d: i64) -> Vec<C64> {
    let dg = Digits::new(n, d);
    match gate {
        GateSpec::Fourier { q } => {
            let mut out = vec![C64::new(0.0, 0.0); dg.dim];
            let s = 1.0 / (d as f64).sqrt();
            for idx in 0..dg.dim {
                let j = dg.digit(idx, q);
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    acc += omega_pow(d, j * k) * v[dg.with_digit(idx, q, k)];
                }
                out[idx] = acc * s;
            }
            out
        }
        GateSpec::Smult { q, scale } => {
            // S_q = sum_j |j><jq|
            (0..dg.dim)
                .map(|idx| {
                    let j = dg.digit(idx, q);
                    v[dg.with_digit(idx, q, (j * scale).rem_euclid(d))]
                })
                .collect()
        }
        GateSpec::Cnot { control, target, power } => {
            // CNOT^p = sum_j |j><j|_a (X_b)^{jp}
            (0..dg.dim)
                .map(|idx| {
                    let j = dg.digit(idx, control);
                    let k = dg.digit(idx, target);
                    v[dg.with_digit(idx, target, (k + j * power).rem_euclid(d))]
                })
                .collect()
        }
        GateSpec::Swap { a, b } => (0..dg.dim)
            .map(|idx| {
                let ja = dg.digit(idx, a);
                let jb = dg.digit(idx, b);
                v[dg.with_digit(dg.with_digit(idx, a, jb), b, ja)]
            })
            .collect(),
        GateSpec::Cp { a, b, power } => (0..dg.dim)
            .map(|idx| omega_pow(d, power * dg.digit(idx, a) * dg.digit(idx, b)) * v[idx])
            .collect(),
    }
}

/// Apply a gate list, earliest gate first.
pub fn apply_circuit(v: &[C64], gates: &[GateSpec], n: usize, d: i64) -> Vec<C64> {
    let mut out = v.to_vec();
    for &g in gates {
        out = apply_gate(&out, g, n, d);
    }
    out
}

/// Full dense matrix of one gate (column-by-column application).
pub fn gate_matrix(gate: GateSpec, n: usize, d: i64) -> CMat {
    let dg = Digits::new(n, d);
    let mut m = CMat::zeros(dg.dim, dg.dim);
    for c in 0..dg.dim {
        let mut e = vec![C64::new(0.0, 0.0); dg.dim];
        e[c] = C64::new(1.0, 0.0);
        let col = apply_gate(&e, gate, n, d);
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m
}

pub fn circuit_matrix(gates: &[GateSpec], n: usize, d: i64) -> CMat {
    let dg = Digits::new(n, d);
    let mut m = CMat::zeros(dg.dim, dg.dim);
    for c in 0..dg.dim {
        let mut e = vec![C64::new(0.0, 0.0); dg.dim];
        e[c] = C64::new(1.0, 0.0);
        let col = apply_circuit(&e, gates, n, d);
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m
}

/// The graph state U|+>^n with U the CP product over edges.
pub fn graph_state(graph: &crate::graphcode::Graph) -> Vec<C64> {
    let n = graph.n();
    let d = graph.modulus();
    let gates: Vec<GateSpec> = graph
        .edges()
        .into_iter()
        .map(|(a, b, power)| GateSpec::Cp { a, b, power })
        .collect();
    apply_circuit(&plus_state(n, d), &gates, n, d)
}

/// Standard partial trace over the complement of `keep` (sorted 0-based).
pub fn partial_trace(m: &CMat, keep: &[usize], n: usize, d: i64) -> CMat {
    let (off_b, off_c) = subsystem_offsets(keep, n, d);
    let kb = off_b.len();
    let mut out = CMat::zeros(kb, kb);
    for (br, &or) in off_b.iter().enumerate() {
        for (bc, &oc) in off_b.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &og in &off_c {
                acc += m.get(or + og, oc + og);
            }
            out.set(br, bc, acc);
        }
    }
    out
}

/// Base-index offsets for the kept subsystem and its complement: the full
/// index of (beta, gamma) is off_b[beta] + off_c[gamma].
fn subsystem_offsets(keep: &[usize], n: usize, d: i64) -> (Vec<usize>, Vec<usize>) {
    let dg = Digits::new(n, d);
    let mask = {
        let mut m = vec![false; n];
        for &q in keep {
            m[q] = true;
        }
        m
    };
    let b_qudits: Vec<usize> = (0..n).filter(|&q| mask[q]).collect();
    let c_qudits: Vec<usize> = (0..n).filter(|&q| !mask[q]).collect();
    let offsets = |quds: &[usize]| -> Vec<usize> {
        let count = (d as usize).pow(quds.len() as u32);
        (0..count)
            .map(|mut i| {
                let mut off = 0;
                for &q in quds.iter().rev() {
                    off += (i % d as usize) * dg.stride(q);
                    i /= d as usize;
                }
                off
            })
            .collect()
    };
    (offsets(&b_qudits), offsets(&c_qudits))
}

/// Partial trace of a dyad sum sum_c |u_c><v_c| without forming the full
/// matrix.
pub fn partial_trace_dyads(
    us: &[Vec<C64>],
    vs: &[Vec<C64>],
    keep: &[usize],
    n: usize,
    d: i64,
) -> CMat {
    let (off_b, off_c) = subsystem_offsets(keep, n, d);
    let kb = off_b.len();
    let mut out = CMat::zeros(kb, kb);
    for (u, v) in us.iter().zip(vs) {
        for &og in &off_c {
            for (br, &or) in off_b.iter().enumerate() {
                let uv = u[or + og];
                if uv.norm_sqr() == 0.0 {
                    continue;
                }
                for (bc, &oc) in off_b.iter().enumerate() {
                    out.a[br * kb + bc] += uv * v[oc + og].conj();
                }
            }
        }
    }
    out
}

/// Dense ground truth for one code: graph state, codewords (enumerated from
/// the row group directly), trivial codewords, and their encodings.
pub struct Oracle<'a> {
    pub code: &'a EncodedCode,
    pub dim: usize,
    /// |G>
    pub graph: Vec<C64>,
    /// Sorted closure of the generator rows.
    pub code_rows: Vec<Vec<i64>>,
    /// Z^c |G> in `code_rows` order.
    pub codewords: Vec<Vec<C64>>,
    /// Z-exponent rows of the trivial codewords (zeta odometer order).
    pub trivial_rows: Vec<Vec<i64>>,
    /// Z^{c0} |G0>
    pub trivial_words: Vec<Vec<C64>>,
    /// UW applied to the trivial codewords.
    pub encoded_words: Vec<Vec<C64>>,
    pub k_dim: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(code: &'a EncodedCode, budget: u128) -> Result<Self, OracleError> {
        let n = code.n();
        let d = code.modulus();
        let dim_big = (d as u128)
            .checked_pow(n as u32)
            .ok_or(OracleError::BudgetExceeded {
                dim: u128::MAX,
                budget,
            })?;
        if dim_big > budget {
            return Err(OracleError::BudgetExceeded {
                dim: dim_big,
                budget,
            });
        }
        let dim = dim_big as usize;

        let code_rows = row_closure(code.coding.generators(), dim)
            .ok_or(OracleError::GroupTooLarge)?;
        let graph = graph_state(&code.graph);
        let codewords: Vec<Vec<C64>> = code_rows
            .iter()
            .map(|c| {
                let zeros = vec![0i64; n];
                PauliDense::new(0, &zeros, c, d).apply(&graph)
            })
            .collect();

        // Trivial codewords: Z^{c0}|G0> with c0_j = zeta_j m_j.
        let plus = plus_state(n, d);
        let mut trivial_rows = Vec::new();
        let mut zeta = vec![0i64; code.trivial.k];
        loop {
            let mut c0 = vec![0i64; n];
            for j in 0..code.trivial.k {
                c0[j] = (zeta[j] * code.trivial.m[j]).rem_euclid(d);
            }
            trivial_rows.push(c0);
            if !bump(&mut zeta, &code.trivial.d) {
                break;
            }
        }
        let zeros = vec![0i64; n];
        let trivial_words: Vec<Vec<C64>> = trivial_rows
            .iter()
            .map(|c0| PauliDense::new(0, &zeros, c0, d).apply(&plus))
            .collect();
        let encoded_words: Vec<Vec<C64>> = trivial_words
            .iter()
            .map(|t| apply_circuit(t, code.encoding_gates(), n, d))
            .collect();
        let k_dim = codewords.len();
        assert_eq!(k_dim as u128, code.trivial.order);

        Ok(Oracle {
            code,
            dim,
            graph,
            code_rows,
            codewords,
            trivial_rows,
            trivial_words,
            encoded_words,
            k_dim,
        })
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn d(&self) -> i64 {
        self.code.modulus()
    }

    /// P = sum_j |c_j><c_j| from the codeword dyads.
    pub fn projector_p(&self) -> CMat {
        let mut p = CMat::zeros(self.dim, self.dim);
        for w in &self.codewords {
            for r in 0..self.dim {
                let wr = w[r];
                if wr.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..self.dim {
                    p.a[r * self.dim + c] += wr * w[c].conj();
                }
            }
        }
        p
    }

    /// |S|^{-1} sum over the encoded stabilizer, via conjugating the trivial
    /// X-lattice sum through the dense encoding circuit.
    pub fn stabilizer_sum_projector(&self) -> CMat {
        let n = self.n();
        let d = self.d();
        let trivial = &self.code.trivial;
        // P0 = |S|^{-1} sum_{x in X0} X^x.
        let mut p0 = CMat::zeros(self.dim, self.dim);
        let mut count = 0u64;
        let mut x = vec![0i64; n];
        loop {
            // x_j runs over multiples of d_j for j < k, all values beyond.
            let zeros = vec![0i64; n];
            let xp = PauliDense::new(0, &x, &zeros, d);
            for r in 0..self.dim {
                p0.a[r * self.dim + xp.col[r]] += xp.phase[r];
            }
            count += 1;
            if !bump_lattice(&mut x, trivial, n, d) {
                break;
            }
        }
        let p0 = p0.scale(C64::new(1.0 / count as f64, 0.0));
        // Conjugate through the encoding circuit column by column.
        let u = circuit_matrix(self.code.encoding_gates(), n, d);
        u.mul(&p0).mul(&u.dagger())
    }

    /// The dyad factors of the information operator of `rep`:
    /// g_hat = sum_c |u_c><w_c| with u_c = UW E |t_c>, w_c = UW |t_c>.
    pub fn info_dyads(&self, rep: &CosetRep) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        let n = self.n();
        let d = self.d();
        let pair = rep.to_pair(&self.code.trivial, n, d);
        let e = PauliDense::from_pair(&pair, d);
        let us: Vec<Vec<C64>> = self
            .trivial_words
            .iter()
            .map(|t| apply_circuit(&e.apply(t), self.code.encoding_gates(), n, d))
            .collect();
        (us, self.encoded_words.clone())
    }

    /// Full dense information operator (small dims only).
    pub fn info_operator(&self, rep: &CosetRep) -> CMat {
        let (us, vs) = self.info_dyads(rep);
        let mut m = CMat::zeros(self.dim, self.dim);
        for (u, v) in us.iter().zip(&vs) {
            for r in 0..self.dim {
                if u[r].norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..self.dim {
                    m.a[r * self.dim + c] += u[r] * v[c].conj();
                }
            }
        }
        m
    }

    /// Tr_{B^c}[g_hat] for subset `keep`.
    pub fn traced_info(&self, rep: &CosetRep, keep: &[usize]) -> CMat {
        let (us, vs) = self.info_dyads(rep);
        partial_trace_dyads(&us, &vs, keep, self.n(), self.d())
    }

    /// The dense membership bit: ||Tr_{B^c}[g_hat]|| / K > tol.
    pub fn member_dense(&self, rep: &CosetRep, keep: &[usize]) -> bool {
        self.traced_info(rep, keep).frob_norm() / self.k_dim as f64 > TOL
    }

    /// Tr_{B^c}[g_hat h_hat]: the operator product of two information
    /// operators, traced down to `keep`. Uses g_hat h_hat = sum_d |y_d><w_d|
    /// with y_d = sum_c <t_c| E_h |t_d> u_c and u_c = UW E_g |t_c>.
    pub fn traced_product(&self, g: &CosetRep, h: &CosetRep, keep: &[usize]) -> CMat {
        let (us, _) = self.info_dyads(g);
        let a_h = self.restricted_info(h);
        let k = us.len();
        let ys: Vec<Vec<C64>> = (0..k)
            .map(|dcol| {
                let mut y = vec![C64::new(0.0, 0.0); self.dim];
                for (c, u) in us.iter().enumerate() {
                    let coef = a_h.get(c, dcol);
                    if coef.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (yv, uv) in y.iter_mut().zip(u) {
                        *yv += coef * uv;
                    }
                }
                y
            })
            .collect();
        partial_trace_dyads(&ys, &self.encoded_words, keep, self.n(), self.d())
    }

    /// The K x K restriction of the information operator to the encoded
    /// basis: A[a,b] = <t_a| E |t_b> (the encoding unitary cancels).
    pub fn restricted_info(&self, rep: &CosetRep) -> CMat {
        let d = self.d();
        let n = self.n();
        let pair = rep.to_pair(&self.code.trivial, n, d);
        let e = PauliDense::from_pair(&pair, d);
        let k = self.trivial_words.len();
        let mut a = CMat::zeros(k, k);
        for b in 0..k {
            let w = e.apply(&self.trivial_words[b]);
            for r in 0..k {
                a.set(r, b, inner(&self.trivial_words[r], &w));
            }
        }
        a
    }

    /// Smallest r >= 1 with A^r proportional to the identity, plus the
    /// proportionality phase.
    pub fn restricted_order(&self, a: &CMat) -> (u32, C64) {
        let k = a.rows;
        let mut p = a.clone();
        let d = self.d() as u32;
        for r in 1..=d {
            let lead = p.get(0, 0);
            if lead.norm() > 0.5 && p.approx_eq(&CMat::identity(k).scale(lead), 1e-6) {
                return (r, lead);
            }
            p = p.mul(a);
        }
        panic!("restricted information operator has order beyond D");
    }

    /// Spectral projectors of the restricted operator: J_s with eigenvalue
    /// phi^{1/r} * zeta_r^s, returned as K x K matrices in the encoded basis.
    pub fn spectral_projectors(&self, a: &CMat) -> Vec<CMat> {
        let (r, phase) = self.restricted_order(a);
        let k = a.rows;
        // Normalize so the order-r power is exactly I.
        let root = C64::from_polar(1.0, -phase.arg() / r as f64);
        let an = a.scale(root);
        let mut powers = vec![CMat::identity(k)];
        for _ in 1..r {
            powers.push(powers.last().unwrap().mul(&an));
        }
        (0..r)
            .map(|s| {
                let mut j = CMat::zeros(k, k);
                for (m, p) in powers.iter().enumerate() {
                    let w = C64::from_polar(
                        1.0 / r as f64,
                        -2.0 * std::f64::consts::PI * (s as f64) * (m as f64) / r as f64,
                    );
                    j = j.add(&p.scale(w));
                }
                j
            })
            .collect()
    }

    /// Partial traces of the encoded-basis dyads |w_a><w_b| down to `keep`.
    pub fn traced_dyad_table(&self, keep: &[usize]) -> Vec<Vec<CMat>> {
        let k = self.encoded_words.len();
        (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        partial_trace_dyads(
                            &[self.encoded_words[a].clone()],
                            &[self.encoded_words[b].clone()],
                            keep,
                            self.n(),
                            self.d(),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// Embed a K x K coding-space matrix and trace it down to `keep` using a
    /// precomputed dyad table.
    pub fn trace_embedded(&self, m: &CMat, table: &[Vec<CMat>]) -> CMat {
        let k = m.rows;
        let mut out = CMat::zeros(table[0][0].rows, table[0][0].cols);
        for a in 0..k {
            for b in 0..k {
                let v = m.get(a, b);
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                out = out.add(&table[a][b].scale(v));
            }
        }
        out
    }

    /// Commutant dimension of the span of the Kraus-pair compressions
    /// P E_i^dagger E_j P for the partial-trace channel onto `keep`.
    pub fn correctable_algebra_dim(&self, keep: &[usize]) -> usize {
        let k = self.k_dim;
        let (off_b, off_c) = subsystem_offsets(keep, self.n(), self.d());
        let kb = off_b.len();
        let kc = off_c.len();
        // Reshaped encoded codewords: c_mat[a][beta * kc + gamma].
        let resh: Vec<Vec<C64>> = self
            .encoded_words
            .iter()
            .map(|w| {
                let mut out = vec![C64::new(0.0, 0.0); kb * kc];
                for (bi, &ob) in off_b.iter().enumerate() {
                    for (gi, &og) in off_c.iter().enumerate() {
                        out[bi * kc + gi] = w[ob + og];
                    }
                }
                out
            })
            .collect();

        // Candidates B_ij[a,b] = sum_beta conj(C_a[beta,i]) C_b[beta,j],
        // Gram-Schmidt into an orthonormal basis of the span.
        let mut basis: Vec<Vec<C64>> = Vec::new();
        'cand: for i in 0..kc {
            for j in 0..kc {
                let mut cand = vec![C64::new(0.0, 0.0); k * k];
                for a in 0..k {
                    for b in 0..k {
                        let mut acc = C64::new(0.0, 0.0);
                        for beta in 0..kb {
                            acc += resh[a][beta * kc + i].conj() * resh[b][beta * kc + j];
                        }
                        cand[a * k + b] = acc;
                    }
                }
                let norm0 = vec_norm(&cand);
                if norm0 <= 1e-12 {
                    continue;
                }
                for bv in &basis {
                    let ip = inner(bv, &cand);
                    for (c, b) in cand.iter_mut().zip(bv) {
                        *c -= ip * b;
                    }
                }
                let norm1 = vec_norm(&cand);
                if norm1 > 1e-7 * norm0.max(1.0) {
                    let inv = C64::new(1.0 / norm1, 0.0);
                    basis.push(cand.iter().map(|v| v * inv).collect());
                    if basis.len() == k * k {
                        break 'cand; // full matrix algebra
                    }
                }
            }
        }
        if basis.len() == k * k {
            return 1; // commutant of the full algebra is the scalars
        }

        // G = sum_t M_t^dagger M_t with M_t the commutator map of basis
        // element B_t; the commutant is the null space of G.
        let kk = k * k;
        let mut g = CMat::zeros(kk, kk);
        for bflat in &basis {
            let b = CMat {
                rows: k,
                cols: k,
                a: bflat.clone(),
            };
            let bd = b.dagger();
            let bdb = bd.mul(&b);
            let bbd = b.mul(&bd);
            // M = I (x) B^T - B (x) I on row-major vec(A);
            // M^dagger M = I (x) conj(B)B^T + (B^dagger B) (x) I
            //              - B (x) conj(B) - B^dagger (x) B^T.
            kron_acc(&mut g, &CMat::identity(k), &bbd.conjugate(), C64::new(1.0, 0.0));
            kron_acc(&mut g, &bdb, &CMat::identity(k), C64::new(1.0, 0.0));
            kron_acc(&mut g, &b, &b.conjugate(), C64::new(-1.0, 0.0));
            kron_acc(&mut g, &bd, &b.transpose(), C64::new(-1.0, 0.0));
        }
        kk - rank_hermitian(g, 1e-7)
    }
}

impl CMat {
    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn conjugate(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|v| v.conj()).collect(),
        }
    }
}

/// G += sign * (L (x) R).
fn kron_acc(g: &mut CMat, l: &CMat, r: &CMat, sign: C64) {
    let k = l.rows;
    let kk = g.rows;
    debug_assert_eq!(kk, k * r.rows);
    for lr in 0..k {
        for lc in 0..k {
            let lv = l.get(lr, lc) * sign;
            if lv.norm_sqr() == 0.0 {
                continue;
            }
            for rr in 0..r.rows {
                for rc in 0..r.cols {
                    let gi = (lr * r.rows + rr) * kk + (lc * r.cols + rc);
                    g.a[gi] += lv * r.get(rr, rc);
                }
            }
        }
    }
}

/// Rank of a Hermitian PSD matrix by greedy pivoted elimination.
pub fn rank_hermitian(mut g: CMat, tol: f64) -> usize {
    let n = g.rows;
    let scale = (0..n)
        .map(|i| g.get(i, i).re.abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut rank = 0;
    loop {
        let (mut piv, mut best) = (0usize, 0.0f64);
        for i in 0..n {
            let v = g.get(i, i).re;
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best <= tol * scale {
            return rank;
        }
        rank += 1;
        let col: Vec<C64> = (0..n).map(|i| g.get(i, piv)).collect();
        for r in 0..n {
            for c in 0..n {
                let upd = col[r] * col[c].conj() / best;
                g.a[r * n + c] -= upd;
            }
        }
    }
}

fn bump(digits: &mut [i64], dims: &[i64]) -> bool {
    for j in (0..digits.len()).rev() {
        digits[j] += 1;
        if digits[j] < dims[j] {
            return true;
        }
        digits[j] = 0;
    }
    false
}

/// Odometer over the stabilizer X-lattice: x_j multiples of d_j for j < k,
/// free beyond.
fn bump_lattice(x: &mut [i64], trivial: &crate::graphcode::TrivialForm, n: usize, d: i64) -> bool {
    for j in (0..n).rev() {
        let step = if j < trivial.k { trivial.d[j] } else { 1 };
        x[j] += step;
        if x[j] < d {
            return true;
        }
        x[j] = 0;
    }
    false
}
