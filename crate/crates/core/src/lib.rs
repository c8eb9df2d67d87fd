//! Parity-check matrices of additive codes over `Z_{p^s}`.
//!
//! Generator matrices are reduced to standard form ([`stdform`]); a
//! parity-check matrix is then obtained either from block minors of the
//! reduced associated matrix ([`paritycheck::parity_check_minors`]) or by
//! back-substitution ([`paritycheck::parity_check_iterative`]). Brute-force
//! oracles, exact block-operation counters and a benchmark harness sit
//! alongside.
//!
//! ```
//! use zps_parity::{parity_check_iterative, standard_form, verify_parity, Matrix, RingSpec};
//!
//! let g = Matrix::from_rows(RingSpec::z4(), &[[1, 1, 2], [0, 2, 2]]).unwrap();
//! let sf = standard_form(&g);
//! assert_eq!(sf.layout().types(), &[1, 1]);
//! let result = parity_check_iterative(&sf);
//! assert_eq!(result.h.to_rows(), vec![vec![3, 3, 1], vec![2, 2, 0]]);
//! assert!(verify_parity(&g, &result.h_original).unwrap().holds);
//! ```

pub mod bench;
pub mod cli;
pub mod codemodel;
pub mod counters;
pub mod error;
pub mod matrix;
pub mod minors;
pub mod paritycheck;
pub mod stdform;
pub mod textfmt;
pub mod zring;

pub use codemodel::{codes_equal, is_member, CodeSpec};
pub use counters::{OpCounters, OpRole, OpShape};
pub use error::{Error, Result};
pub use matrix::{BlockLayout, Matrix, Permutation};
pub use paritycheck::{
    parity_check_bruteforce, parity_check_iterative, parity_check_minors, verify_parity,
    z4_parity_check, Method, ParityCheckResult,
};
pub use stdform::{standard_form, BlockMap, StandardForm};
pub use zring::{Residue, RingSpec};
