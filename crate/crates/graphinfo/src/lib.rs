//! Exact analysis of additive graph codes on collections of qudits with a
//! common dimension D, and of where encoded information lives among subsets
//! of the carriers.
//!
//! The crate is organized bottom-up:
//!
//! * [`zdlinalg`]: matrices over Z_D, Smith normal form by elementary
//!   operations, and linear solvers for row-vector systems.
//! * [`pauli`]: generalized Pauli products in symplectic representation and
//!   Clifford gates acting on them by conjugation.

pub mod graphcode;
pub mod infoloc;
pub mod oracle;
pub mod pauli;
pub mod zdlinalg;
