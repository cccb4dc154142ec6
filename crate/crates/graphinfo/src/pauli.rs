//! Symbolic Pauli products on n qudits of dimension D and their conjugation
//! by the elementary Clifford gates.
//!
//! A Pauli product is `w^lambda X^x Z^z` with `lambda` in Z_D and `x`, `z`
//! exponent vectors in Z_D^n. Multiplication and commutation phases are exact;
//! Clifford conjugation is tracked on the exponent pair only, with the scalar
//! phase left to the dense oracle.

use crate::zdlinalg::{mod_inverse, ZdError, ZdMatrix};

/// `w^lambda X^x Z^z` on `n` qudits of dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliProduct {
    pub d: i64,
    pub lambda: i64,
    pub x: Vec<i64>,
    pub z: Vec<i64>,
}

impl PauliProduct {
    pub fn identity(n: usize, d: i64) -> Self {
        PauliProduct {
            d,
            lambda: 0,
            x: vec![0; n],
            z: vec![0; n],
        }
    }

    pub fn new(d: i64, lambda: i64, x: Vec<i64>, z: Vec<i64>) -> Result<Self, ZdError> {
        if x.len() != z.len() {
            return Err(ZdError::DimensionMismatch(
                "x and z exponent vectors differ in length".into(),
            ));
        }
        Ok(PauliProduct {
            d,
            lambda: lambda.rem_euclid(d),
            x: x.into_iter().map(|e| e.rem_euclid(d)).collect(),
            z: z.into_iter().map(|e| e.rem_euclid(d)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&e| e == 0) && self.z.iter().all(|&e| e == 0)
    }

    /// The exponent pair as a `2n`-vector `(x | z)`.
    pub fn pair(&self) -> Vec<i64> {
        let mut p = self.x.clone();
        p.extend_from_slice(&self.z);
        p
    }

    fn check_compatible(&self, other: &PauliProduct) -> Result<(), ZdError> {
        if self.d != other.d {
            return Err(ZdError::ModulusMismatch(self.d, other.d));
        }
        if self.n() != other.n() {
            return Err(ZdError::DimensionMismatch(format!(
                "{} vs {} qudits",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Normal-form product: `(X^x Z^z)(X^x' Z^z') = w^{-z.x'} X^{x+x'} Z^{z+z'}`.
    pub fn multiply(&self, other: &PauliProduct) -> Result<PauliProduct, ZdError> {
        self.check_compatible(other)?;
        let d = self.d;
        let cross: i64 = self
            .z
            .iter()
            .zip(&other.x)
            .map(|(&a, &b)| a * b % d)
            .sum::<i64>()
            % d;
        let lambda = (self.lambda + other.lambda - cross).rem_euclid(d);
        let x = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(&a, &b)| (a + b) % d)
            .collect();
        let z = self
            .z
            .iter()
            .zip(&other.z)
            .map(|(&a, &b)| (a + b) % d)
            .collect();
        Ok(PauliProduct {
            d,
            lambda,
            x,
            z,
        })
    }

    /// `lambda_12` with `p q = w^{lambda_12} q p`, i.e. `x_p.z_q - z_p.x_q`.
    pub fn commutation_exponent(&self, other: &PauliProduct) -> Result<i64, ZdError> {
        self.check_compatible(other)?;
        let d = self.d;
        let mut acc = 0i64;
        for j in 0..self.n() {
            acc = (acc + self.x[j] * other.z[j] - self.z[j] * other.x[j]).rem_euclid(d);
        }
        Ok(acc)
    }

    pub fn inverse_pair(&self) -> PauliProduct {
        PauliProduct {
            d: self.d,
            lambda: 0,
            x: self.x.iter().map(|&e| (-e).rem_euclid(self.d)).collect(),
            z: self.z.iter().map(|&e| (-e).rem_euclid(self.d)).collect(),
        }
    }
}

/// Symplectic form `<(x|z), (x'|z')> = x.z' - z.x' mod D` on 2n-vectors.
pub fn symplectic_form(a: &[i64], b: &[i64], d: i64) -> i64 {
    let n = a.len() / 2;
    let mut acc = 0i64;
    for j in 0..n {
        acc = (acc + a[j] * b[n + j] - a[n + j] * b[j]).rem_euclid(d);
    }
    acc
}

/// One of the elementary qudit Clifford gates. Qudit indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSpec {
    /// Fourier gate on one qudit (Z -> X, X -> Z^{D-1}).
    Fourier { q: usize },
    /// Multiplicative gate `S_q` on one qudit; `scale` must be a unit of Z_D.
    Smult { q: usize, scale: i64 },
    /// `CNOT_ab^m` with control `a`, target `b`.
    Cnot { control: usize, target: usize, power: i64 },
    /// Exchange qudits `a` and `b`.
    Swap { a: usize, b: usize },
    /// `CP_ab^m`; symmetric in `a`, `b`.
    Cp { a: usize, b: usize, power: i64 },
}

impl GateSpec {
    pub fn validate(&self, n: usize, d: i64) -> Result<(), ZdError> {
        let bad = |msg: String| Err(ZdError::DegenerateInput(msg));
        match *self {
            GateSpec::Fourier { q } => {
                if q >= n {
                    return bad(format!("Fourier qudit {q} out of range"));
                }
            }
            GateSpec::Smult { q, scale } => {
                if q >= n {
                    return bad(format!("Smult qudit {q} out of range"));
                }
                if mod_inverse(scale, d).is_none() {
                    return bad(format!("Smult factor {scale} is not a unit mod {d}"));
                }
            }
            GateSpec::Cnot { control, target, power } => {
                if control >= n || target >= n || control == target {
                    return bad("invalid CNOT qudit indices".into());
                }
                if !(1..d).contains(&power) {
                    return bad(format!("CNOT power {power} out of range"));
                }
            }
            GateSpec::Swap { a, b } => {
                if a >= n || b >= n || a == b {
                    return bad("invalid SWAP qudit indices".into());
                }
            }
            GateSpec::Cp { a, b, power } => {
                if a >= n || b >= n || a == b {
                    return bad("invalid CP qudit indices".into());
                }
                if !(1..d).contains(&power) {
                    return bad(format!("CP power {power} out of range"));
                }
            }
        }
        Ok(())
    }
}

/// Conjugate an exponent pair `(x|z)` through one gate, phase discarded.
///
/// Implements the one- and two-qudit conjugation tables extended linearly to
/// powers and tensor factors.
pub fn conjugate_pair(pair: &[i64], gate: GateSpec, n: usize, d: i64) -> Vec<i64> {
    debug_assert_eq!(pair.len(), 2 * n);
    let mut out = pair.to_vec();
    match gate {
        GateSpec::Fourier { q } => {
            // Z -> X, X -> Z^{-1}: (x_q, z_q) -> (z_q, -x_q)
            let (xq, zq) = (out[q], out[n + q]);
            out[q] = zq;
            out[n + q] = (-xq).rem_euclid(d);
        }
        GateSpec::Smult { q, scale } => {
            // Z -> Z^q, X -> X^{q^{-1}}
            let inv = mod_inverse(scale, d).expect("validated unit");
            out[q] = out[q] * inv % d;
            out[n + q] = out[n + q] * scale % d;
        }
        GateSpec::Cnot { control: a, target: b, power } => {
            // X_a -> X_a X_b^{-1}, Z_b -> Z_a Z_b
            out[b] = (out[b] - power * out[a]).rem_euclid(d);
            out[n + a] = (out[n + a] + power * out[n + b]).rem_euclid(d);
        }
        GateSpec::Swap { a, b } => {
            out.swap(a, b);
            out.swap(n + a, n + b);
        }
        GateSpec::Cp { a, b, power } => {
            // X_a -> X_a Z_b^{-1}, X_b -> Z_a^{-1} X_b
            let (xa, xb) = (out[a], out[b]);
            out[n + b] = (out[n + b] - power * xa).rem_euclid(d);
            out[n + a] = (out[n + a] - power * xb).rem_euclid(d);
        }
    }
    out
}

/// The 2n x 2n symplectic matrix of a gate list over Z_D.
#[derive(Debug, Clone)]
pub struct SymplecticClifford {
    pub q: ZdMatrix,
    pub gates: Vec<GateSpec>,
}

/// Build `Q` with `e_i * Q` equal to conjugating the basis pair `e_i` through
/// the whole gate list, earliest gate applied innermost.
pub fn build_symplectic(gates: &[GateSpec], n: usize, d: i64) -> Result<SymplecticClifford, ZdError> {
    for g in gates {
        g.validate(n, d)?;
    }
    let mut q = ZdMatrix::zeros(2 * n, 2 * n, d);
    for i in 0..2 * n {
        let mut pair = vec![0i64; 2 * n];
        pair[i] = 1;
        for &g in gates {
            pair = conjugate_pair(&pair, g, n, d);
        }
        for (j, &e) in pair.iter().enumerate() {
            q.set(i, j, e);
        }
    }
    Ok(SymplecticClifford {
        q,
        gates: gates.to_vec(),
    })
}

impl SymplecticClifford {
    /// Conjugate an exponent pair: `(x|z) -> (x|z) * Q`.
    pub fn apply(&self, pair: &[i64]) -> Vec<i64> {
        self.q.row_vec_mul(pair).expect("pair length matches Q")
    }

    /// The symplectic form is preserved on all basis pairs.
    pub fn preserves_symplectic_form(&self) -> bool {
        let d = self.q.modulus();
        let m = self.q.rows();
        for i in 0..m {
            for j in 0..m {
                let mut ei = vec![0i64; m];
                let mut ej = vec![0i64; m];
                ei[i] = 1;
                ej[j] = 1;
                let before = symplectic_form(&ei, &ej, d);
                let after = symplectic_form(&self.apply(&ei), &self.apply(&ej), d);
                if before != after {
                    return false;
                }
            }
        }
        true
    }
}

/// True iff the pair acts as the identity outside `keep` (0-based indices).
pub fn is_based_in(pair: &[i64], keep: &[usize], n: usize) -> bool {
    let in_b = {
        let mut mask = vec![false; n];
        for &j in keep {
            mask[j] = true;
        }
        mask
    };
    (0..n).all(|j| in_b[j] || (pair[j] == 0 && pair[n + j] == 0))
}
