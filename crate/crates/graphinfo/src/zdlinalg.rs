//! Exact linear algebra over the ring Z_D of integers mod D.
//!
//! Everything here works on machine integers with reduction after every
//! operation. The modulus is capped at 2^15 so all intermediate products fit
//! comfortably in an `i64`. The central routine is [`smith_normal_form`],
//! which diagonalizes a matrix by elementary row and column operations and
//! normalizes each diagonal entry to a divisor of D. Linear systems of the
//! row-vector form `x * T = u` are then solved through the Smith data.

use thiserror::Error;

/// Largest supported modulus.
pub const MAX_MODULUS: i64 = 1 << 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZdError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(i64, i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid modulus {0}: must satisfy 2 <= D <= {MAX_MODULUS}")]
    InvalidModulus(i64),
}

/// Extended gcd: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`.
///
/// Both inputs must be nonnegative and not both zero.
pub fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64), ZdError> {
    if a < 0 || b < 0 {
        return Err(ZdError::DegenerateInput("negative input to ext_gcd".into()));
    }
    if a == 0 && b == 0 {
        return Err(ZdError::DegenerateInput("ext_gcd(0, 0)".into()));
    }
    let (mut r0, mut r1) = (a, b);
    let (mut u0, mut u1) = (1i64, 0i64);
    let (mut v0, mut v1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (u0, u1) = (u1, u0 - q * u1);
        (v0, v1) = (v1, v0 - q * v1);
    }
    Ok((r0, u0, v0))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Multiplicative inverse of `a` mod `m`, when it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let a = a.rem_euclid(m);
    if m == 1 {
        return Some(0);
    }
    let (g, u, _) = ext_gcd(a, m).ok()?;
    if g != 1 {
        return None;
    }
    Some(u.rem_euclid(m))
}

/// A unit `u` of Z_D with `u * a == gcd(a, D) (mod D)`.
///
/// Every element of Z_D is a unit multiple of a divisor of D; this finds the
/// unit. `a` must be nonzero mod D.
pub fn unit_to_divisor(a: i64, d: i64) -> i64 {
    let a = a.rem_euclid(d);
    assert!(a != 0, "unit_to_divisor requires a nonzero element");
    let g = gcd(a, d);
    let a0 = a / g;
    let step = d / g;
    let u0 = mod_inverse(a0.rem_euclid(step), step).expect("a0 is invertible mod D/g");
    let mut u = if u0 == 0 { step } else { u0 };
    while gcd(u, d) != 1 {
        u += step;
    }
    debug_assert_eq!((u * a).rem_euclid(d), g);
    u % d
}

/// Dense matrix over Z_D, row-major, entries reduced into `[0, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZdMatrix {
    modulus: i64,
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl ZdMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: i64) -> Self {
        assert!(
            (2..=MAX_MODULUS).contains(&modulus),
            "modulus {modulus} out of range"
        );
        ZdMatrix {
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: i64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], modulus: i64) -> Result<Self, ZdError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(ZdError::DimensionMismatch("empty matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ZdError::DimensionMismatch("ragged rows".into()));
        }
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(ZdError::InvalidModulus(modulus));
        }
        let mut m = Self::zeros(rows.len(), cols, modulus);
        for (i, r) in rows.iter().enumerate() {
            for (j, &e) in r.iter().enumerate() {
                m.set(i, j, e);
            }
        }
        Ok(m)
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v.rem_euclid(self.modulus);
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ZdMatrix {
        let mut t = ZdMatrix::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ZdMatrix) -> Result<ZdMatrix, ZdError> {
        if self.modulus != rhs.modulus {
            return Err(ZdError::ModulusMismatch(self.modulus, rhs.modulus));
        }
        if self.cols != rhs.rows {
            return Err(ZdError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ZdMatrix::zeros(self.rows, rhs.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.entries[i * rhs.cols + j] + a * rhs.get(k, j);
                    out.entries[i * rhs.cols + j] = v % self.modulus;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `x * self`, reduced mod D.
    pub fn row_vec_mul(&self, x: &[i64]) -> Result<Vec<i64>, ZdError> {
        if x.len() != self.rows {
            return Err(ZdError::DimensionMismatch(format!(
                "vector length {} vs {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut out = vec![0i64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            let xi = xi.rem_euclid(self.modulus);
            if xi == 0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] = (out[j] + xi * self.get(i, j)) % self.modulus;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn scale_row(&mut self, i: usize, q: i64) {
        for c in 0..self.cols {
            let v = self.get(i, c) * q;
            self.set(i, c, v);
        }
    }

    fn scale_col(&mut self, a: usize, q: i64) {
        for r in 0..self.rows {
            let v = self.get(r, a) * q;
            self.set(r, a, v);
        }
    }

    /// row_dest += m * row_src
    fn add_row(&mut self, dest: usize, src: usize, m: i64) {
        for c in 0..self.cols {
            let v = self.get(dest, c) + m * self.get(src, c);
            self.set(dest, c, v);
        }
    }

    /// col_dest += m * col_src
    fn add_col(&mut self, dest: usize, src: usize, m: i64) {
        for r in 0..self.rows {
            let v = self.get(r, dest) + m * self.get(r, src);
            self.set(r, dest, v);
        }
    }
}

/// Elementary column operation, recorded during Smith reduction so that the
/// encoding circuit can later be synthesized from it. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColOp {
    /// Interchange columns `a` and `b`.
    Swap { a: usize, b: usize },
    /// Multiply column `a` by the unit `q`.
    Scale { a: usize, q: i64 },
    /// Add `m` times column `src` to column `dest`.
    AddMul { dest: usize, src: usize, m: i64 },
}

impl ColOp {
    /// The inverse operation, with coefficients reduced mod `d`.
    pub fn inverse(self, d: i64) -> ColOp {
        match self {
            ColOp::Swap { a, b } => ColOp::Swap { a, b },
            ColOp::Scale { a, q } => ColOp::Scale {
                a,
                q: mod_inverse(q, d).expect("recorded scale factor is a unit"),
            },
            ColOp::AddMul { dest, src, m } => ColOp::AddMul {
                dest,
                src,
                m: (-m).rem_euclid(d),
            },
        }
    }
}

/// Smith normal form `s = v * f * w` over Z_D.
///
/// Diagonal entries are normalized to divisors of D, with 0 standing for the
/// divisor D itself. No divisibility chain between successive entries is
/// enforced; each entry individually divides D.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub s: ZdMatrix,
    pub v: ZdMatrix,
    pub w: ZdMatrix,
    pub v_inv: ZdMatrix,
    pub w_inv: ZdMatrix,
    /// Diagonal of `s`, length `min(rows, cols)`.
    pub diag: Vec<i64>,
    /// Column operations applied to `f`, in application order (`w` is their
    /// product).
    pub col_ops: Vec<ColOp>,
}

struct Reducer {
    s: ZdMatrix,
    v: ZdMatrix,
    w: ZdMatrix,
    v_inv: ZdMatrix,
    w_inv: ZdMatrix,
    col_ops: Vec<ColOp>,
    d: i64,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.s.swap_rows(i, j);
        self.v.swap_rows(i, j);
        self.v_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.s.swap_cols(a, b);
        self.w.swap_cols(a, b);
        self.w_inv.swap_rows(a, b);
        self.col_ops.push(ColOp::Swap { a, b });
    }

    fn scale_row(&mut self, i: usize, q: i64) {
        let q = q.rem_euclid(self.d);
        if q == 1 {
            return;
        }
        let qi = mod_inverse(q, self.d).expect("row scale factor must be a unit");
        self.s.scale_row(i, q);
        self.v.scale_row(i, q);
        self.v_inv.scale_col(i, qi);
    }

    /// row_dest -= q * row_src
    fn sub_row(&mut self, dest: usize, src: usize, q: i64) {
        let m = (-q).rem_euclid(self.d);
        if m == 0 {
            return;
        }
        self.s.add_row(dest, src, m);
        self.v.add_row(dest, src, m);
        self.v_inv.add_col(src, dest, q.rem_euclid(self.d));
    }

    /// col_dest -= q * col_src
    fn sub_col(&mut self, dest: usize, src: usize, q: i64) {
        let m = (-q).rem_euclid(self.d);
        if m == 0 {
            return;
        }
        self.s.add_col(dest, src, m);
        self.w.add_col(dest, src, m);
        self.w_inv.add_row(src, dest, q.rem_euclid(self.d));
        self.col_ops.push(ColOp::AddMul { dest, src, m });
    }
}

/// `q` with `q * p == e (mod d)`; requires `gcd(p, d) | e`.
fn congruence_factor(p: i64, e: i64, d: i64) -> i64 {
    let g = gcd(p, d);
    debug_assert_eq!(e % g, 0);
    let inv = mod_inverse(p / g, d / g).expect("p/g is a unit mod d/g");
    (e / g) % (d / g) * inv % (d / g)
}

/// Compute the Smith normal form of `f` over Z_D by elementary operations.
///
/// The pivot strategy prefers structure-preserving eliminations: pivots with
/// the smallest gcd against D, entries cleared by solving `q*p = e (mod D)`,
/// and stuck entries rescued through other rows or columns before any
/// gcd-mixing happens. This keeps independent generators on separate diagonal
/// positions (diag(2,3) mod 6 stays split instead of collapsing to a single
/// Z_6 factor). A plain Euclidean fallback guarantees termination.
pub fn smith_normal_form(f: &ZdMatrix) -> SmithDecomposition {
    let d = f.modulus();
    let (rows, cols) = (f.rows(), f.cols());
    let mut r = Reducer {
        s: f.clone(),
        v: ZdMatrix::identity(rows, d),
        w: ZdMatrix::identity(cols, d),
        v_inv: ZdMatrix::identity(rows, d),
        w_inv: ZdMatrix::identity(cols, d),
        col_ops: Vec::new(),
        d,
    };

    let steps = rows.min(cols);
    'outer: for t in 0..steps {
        let mut attempts = 0usize;
        loop {
            // Pivot: minimize (gcd(e, D), e), row-major tie break.
            let mut pivot: Option<(usize, usize, i64, i64)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = r.s.get(i, j);
                    if e == 0 {
                        continue;
                    }
                    let ge = gcd(e, d);
                    if pivot.map_or(true, |(_, _, pe, pg)| (ge, e) < (pg, pe)) {
                        pivot = Some((i, j, e, ge));
                    }
                }
            }
            let Some((pi, pj, _, _)) = pivot else {
                break 'outer; // trailing submatrix is zero
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            let p = r.s.get(t, t);
            let gp = gcd(p, d);

            // Clear every entry the pivot can reach exactly.
            for i in t + 1..rows {
                let e = r.s.get(i, t);
                if e != 0 && e % gp == 0 {
                    r.sub_row(i, t, congruence_factor(p, e, d));
                }
            }
            for j in t + 1..cols {
                let e = r.s.get(t, j);
                if e != 0 && e % gp == 0 {
                    r.sub_col(j, t, congruence_factor(p, e, d));
                }
            }
            let col_stuck: Vec<usize> = (t + 1..rows).filter(|&i| r.s.get(i, t) != 0).collect();
            let row_stuck: Vec<usize> = (t + 1..cols).filter(|&j| r.s.get(t, j) != 0).collect();
            if col_stuck.is_empty() && row_stuck.is_empty() {
                break; // position t is done
            }

            attempts += 1;
            if attempts <= rows + cols + 2 {
                // Rescue a stuck entry through a different row or column.
                let mut progressed = false;
                'rescue_row: for &j in &row_stuck {
                    let e = r.s.get(t, j);
                    for rr in t + 1..rows {
                        let h = r.s.get(rr, j);
                        if h != 0 && r.s.get(rr, t) == 0 && e % gcd(h, d) == 0 {
                            r.sub_row(t, rr, congruence_factor(h, e, d));
                            progressed = true;
                            break 'rescue_row;
                        }
                    }
                }
                if !progressed {
                    'rescue_col: for &i in &col_stuck {
                        let e = r.s.get(i, t);
                        for cc in t + 1..cols {
                            let h = r.s.get(i, cc);
                            if h != 0 && r.s.get(t, cc) == 0 && e % gcd(h, d) == 0 {
                                r.sub_col(t, cc, congruence_factor(h, e, d));
                                progressed = true;
                                break 'rescue_col;
                            }
                        }
                    }
                }
                if progressed {
                    continue;
                }
            }

            // Euclidean step on a stuck pair; the smaller representative
            // strictly decreases, so this terminates.
            if let Some(&i) = col_stuck.first() {
                let e = r.s.get(i, t);
                if p >= e {
                    r.sub_row(t, i, p / e);
                } else {
                    r.sub_row(i, t, e / p);
                }
            } else if let Some(&j) = row_stuck.first() {
                let e = r.s.get(t, j);
                if p >= e {
                    r.sub_col(t, j, p / e);
                } else {
                    r.sub_col(j, t, e / p);
                }
            }
        }
    }

    // Normalize each diagonal entry to gcd(entry, D) by a unit row scaling.
    for t in 0..steps {
        let a = r.s.get(t, t);
        if a == 0 {
            continue;
        }
        let g = gcd(a, d);
        if g != a {
            r.scale_row(t, unit_to_divisor(a, d));
        } else if g == d {
            unreachable!("entries are reduced below D");
        }
    }

    let diag = (0..steps).map(|t| r.s.get(t, t)).collect();
    SmithDecomposition {
        s: r.s,
        v: r.v,
        w: r.w,
        v_inv: r.v_inv,
        w_inv: r.w_inv,
        diag,
        col_ops: r.col_ops,
    }
}

/// Solutions of the row-vector system `x * T = u (mod D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub solvable: bool,
    /// One solution when solvable.
    pub particular: Option<Vec<i64>>,
    /// Number of solutions `x` in Z_D^rows.
    pub count: u128,
}

impl SolutionSet {
    fn empty() -> Self {
        SolutionSet {
            solvable: false,
            particular: None,
            count: 0,
        }
    }
}

/// Describe all `x` with `x * T = u (mod D)`, via a precomputed Smith form of `T`.
///
/// After `s = v*T*w` the system decouples into independent congruences
/// `y_j * s_jj = (u*w)_j`; coordinates of `y` beyond the diagonal are free and
/// columns beyond the diagonal require the right-hand side to vanish.
pub fn solve_right_with(smith: &SmithDecomposition, u: &[i64]) -> Result<SolutionSet, ZdError> {
    let d = smith.s.modulus();
    let (rows, cols) = (smith.s.rows(), smith.s.cols());
    if u.len() != cols {
        return Err(ZdError::DimensionMismatch(format!(
            "rhs length {} vs {} columns",
            u.len(),
            cols
        )));
    }
    let b = smith.w.row_vec_mul(u)?; // (u * w)_j
    let steps = rows.min(cols);
    let mut y = vec![0i64; rows];
    let mut count: u128 = 1;
    for j in 0..cols {
        let bj = b[j];
        if j >= steps {
            if bj != 0 {
                return Ok(SolutionSet::empty());
            }
            continue;
        }
        let a = smith.s.get(j, j);
        if a == 0 {
            if bj != 0 {
                return Ok(SolutionSet::empty());
            }
            count *= d as u128; // y_j free
            continue;
        }
        let g = gcd(a, d);
        if bj % g != 0 {
            return Ok(SolutionSet::empty());
        }
        let inv = mod_inverse(a / g, d / g).expect("a/g is a unit mod D/g");
        y[j] = ((bj / g) * inv).rem_euclid(d / g);
        count *= g as u128;
    }
    for _ in cols..rows {
        count *= d as u128; // free coordinates past the diagonal
    }
    let x = smith.v.row_vec_mul(&y)?; // x = y * v
    Ok(SolutionSet {
        solvable: true,
        particular: Some(x),
        count,
    })
}

pub fn solve_right(t: &ZdMatrix, u: &[i64]) -> Result<SolutionSet, ZdError> {
    solve_right_with(&smith_normal_form(t), u)
}

/// Number of solutions of the homogeneous system `x * T = 0 (mod D)`.
pub fn count_homogeneous(t: &ZdMatrix) -> u128 {
    let smith = smith_normal_form(t);
    count_homogeneous_with(&smith)
}

pub fn count_homogeneous_with(smith: &SmithDecomposition) -> u128 {
    let zero = vec![0i64; smith.s.cols()];
    solve_right_with(smith, &zero)
        .expect("homogeneous system is well formed")
        .count
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, d: i64) -> ZdMatrix {
        let rows: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0..d)).collect())
            .collect();
        ZdMatrix::from_rows(&rows, d).unwrap()
    }

    /// Exhaustive solution set of x*T = u, for oracle comparisons.
    fn enumerate_solutions(t: &ZdMatrix, u: &[i64]) -> Vec<Vec<i64>> {
        let d = t.modulus();
        let n = t.rows();
        let total = (d as u64).pow(n as u32);
        let mut found = Vec::new();
        for idx in 0..total {
            let mut x = vec![0i64; n];
            let mut rem = idx;
            for xi in x.iter_mut() {
                *xi = (rem % d as u64) as i64;
                rem /= d as u64;
            }
            if t.row_vec_mul(&x).unwrap() == u {
                found.push(x);
            }
        }
        found
    }

    #[test]
    fn ext_gcd_identities() {
        let (g, u, v) = ext_gcd(4, 6).unwrap();
        assert_eq!(g, 2);
        assert_eq!(4 * u + 6 * v, 2);
        let (g, _, _) = ext_gcd(1, 6).unwrap();
        assert_eq!(g, 1);
        let (g, u, v) = ext_gcd(0, 5).unwrap();
        assert_eq!((g, u, v), (5, 0, 1));
        assert!(ext_gcd(0, 0).is_err());
    }

    #[test]
    fn unit_to_divisor_covers_zd() {
        for d in 2..=36i64 {
            for a in 1..d {
                let u = unit_to_divisor(a, d);
                assert_eq!(gcd(u, d), 1, "a={a} d={d}");
                assert_eq!((u * a).rem_euclid(d), gcd(a, d), "a={a} d={d}");
            }
        }
    }

    #[test]
    fn smith_golden_mod6() {
        // [[4,3,3],[0,3,3]] mod 6 reduces to diagonal (2, 3).
        let f = ZdMatrix::from_rows(&[vec![4, 3, 3], vec![0, 3, 3]], 6).unwrap();
        let smith = smith_normal_form(&f);
        assert_eq!(smith.diag, vec![2, 3]);
        for r in 0..2 {
            for c in 0..3 {
                if r != c {
                    assert_eq!(smith.s.get(r, c), 0);
                }
            }
        }
        let vfw = smith.v.mul(&f).unwrap().mul(&smith.w).unwrap();
        assert_eq!(vfw, smith.s);
        // The only column operation is subtracting column 1 from column 2.
        assert_eq!(
            smith.col_ops,
            vec![ColOp::AddMul { dest: 2, src: 1, m: 5 }]
        );
    }

    #[test]
    fn smith_identity() {
        let f = ZdMatrix::identity(4, 10);
        let smith = smith_normal_form(&f);
        assert_eq!(smith.s, f);
        assert_eq!(smith.v, ZdMatrix::identity(4, 10));
        assert_eq!(smith.w, ZdMatrix::identity(4, 10));
    }

    #[test]
    fn smith_reconstruction_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [2i64, 3, 4, 6, 8, 12] {
            for _ in 0..40 {
                let rows = rng.gen_range(1..=4);
                let cols = rng.gen_range(1..=5);
                let f = random_matrix(&mut rng, rows, cols, d);
                let smith = smith_normal_form(&f);
                // v*f*w = s
                let vfw = smith.v.mul(&f).unwrap().mul(&smith.w).unwrap();
                assert_eq!(vfw, smith.s, "d={d} f={f:?}");
                // transforms invertible
                assert_eq!(
                    smith.v.mul(&smith.v_inv).unwrap(),
                    ZdMatrix::identity(rows, d)
                );
                assert_eq!(
                    smith.w.mul(&smith.w_inv).unwrap(),
                    ZdMatrix::identity(cols, d)
                );
                // reconstruct f = v_inv * s * w_inv
                let back = smith.v_inv.mul(&smith.s).unwrap().mul(&smith.w_inv).unwrap();
                assert_eq!(back, f);
                // diagonal entries divide D, off-diagonal zero
                for (t, &g) in smith.diag.iter().enumerate() {
                    if g != 0 {
                        assert_eq!(d % g, 0);
                    }
                    for c in 0..cols {
                        if c != t {
                            assert_eq!(smith.s.get(t, c), 0);
                        }
                    }
                }
                // w is exactly the product of the recorded column operations
                let mut wprod = ZdMatrix::identity(cols, d);
                for op in &smith.col_ops {
                    match *op {
                        ColOp::Swap { a, b } => wprod.swap_cols(a, b),
                        ColOp::Scale { a, q } => wprod.scale_col(a, q),
                        ColOp::AddMul { dest, src, m } => wprod.add_col(dest, src, m),
                    }
                }
                assert_eq!(wprod, smith.w);
            }
        }
    }

    #[test]
    fn solve_identity_unique() {
        let t = ZdMatrix::identity(3, 7);
        let sol = solve_right(&t, &[2, 5, 6]).unwrap();
        assert!(sol.solvable);
        assert_eq!(sol.count, 1);
        assert_eq!(sol.particular.unwrap(), vec![2, 5, 6]);
    }

    #[test]
    fn count_homogeneous_extremes() {
        let d = 5i64;
        assert_eq!(count_homogeneous(&ZdMatrix::identity(3, d)), 1);
        assert_eq!(
            count_homogeneous(&ZdMatrix::zeros(4, 2, d)),
            (d as u128).pow(4)
        );
    }

    #[test]
    fn solver_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2i64, 4, 6] {
            for _ in 0..30 {
                let rows = rng.gen_range(1..=3);
                let cols = rng.gen_range(1..=5);
                let t = random_matrix(&mut rng, rows, cols, d);
                let u: Vec<i64> = if rng.gen_bool(0.5) {
                    vec![0; cols]
                } else {
                    // pick a solvable rhs half the time
                    let x: Vec<i64> = (0..rows).map(|_| rng.gen_range(0..d)).collect();
                    t.row_vec_mul(&x).unwrap()
                };
                let sol = solve_right(&t, &u).unwrap();
                let brute = enumerate_solutions(&t, &u);
                assert_eq!(sol.solvable, !brute.is_empty(), "d={d} t={t:?} u={u:?}");
                assert_eq!(sol.count, brute.len() as u128, "d={d} t={t:?} u={u:?}");
                if let Some(x) = sol.particular {
                    assert_eq!(t.row_vec_mul(&x).unwrap(), u);
                }
            }
        }
    }
}
