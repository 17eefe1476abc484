//! Exact algebra for qudit stabilizer groups over Z_D, for any D >= 2.
//!
//! * [`pauli`]: generalized Pauli products and their group law.
//! * [`checkmatrix`]: parity-check presentations, group order and code
//!   dimension, validity and membership.
//! * [`snf`]: Smith normal form over Z_D from elementary operations.
//! * [`clifford`]: the F, S_q, CNOT, SWAP, CP gate catalog and conjugation.
//! * [`standard_form`]: Clifford reduction of a stabilizer to block standard
//!   form, with the gate sequence that realizes it.
//! * [`oracle`]: dense complex-matrix ground truth for small instances.

pub mod checkmatrix;
pub mod clifford;
pub mod error;
pub mod matrix;
pub mod modring;
pub mod oracle;
pub mod pauli;
pub mod sample;
pub mod snf;
pub mod standard_form;
pub mod textfmt;

pub use checkmatrix::{StabilizerPresentation, ValidityReport};
pub use clifford::GateOp;
pub use error::{Error, Result};
pub use matrix::ZdMatrix;
pub use modring::{Modulus, Residue};
pub use pauli::PauliProduct;
pub use snf::{ElementaryOp, SnfDecomposition};
pub use standard_form::StandardForm;

/// Outcome of a self-check: empty `problems` means everything held.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub problems: Vec<String>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }

    pub(crate) fn fail(&mut self, problem: impl Into<String>) {
        self.problems.push(problem.into());
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.problems.join("; "))
        }
    }
}
