//! Workbench for fixed-template promise constraint satisfaction.
//!
//! The crate is organized bottom-up:
//! - [`core`]: finite relational structures, powers, quotients, the text format
//! - [`homsearch`]: homomorphism search with propagation, (k,l)-consistency
//! - [`minionlab`]: function tables, minors, polymorphism enumeration
//! - [`conditions`]: minor conditions, triviality, robustness, label cover
//! - [`indicator`]: the instance/condition reductions and condition checking
//! - [`freestruct`]: free structures, width-1 test, LP/IP truncations
//! - [`relax`]: exact BLP and affine integer relaxations
//! - [`experiments`]: named reproducibility experiments used by the CLI

pub mod conditions;
pub mod core;
pub mod experiments;
pub mod freestruct;
pub mod homsearch;
pub mod indicator;
pub mod minionlab;
pub mod relax;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCap { what: String, needed: u128, cap: u128 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("search budget exceeded after {nodes} nodes")]
    Budget { nodes: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Global guard against exponential blow-up in powers and indicator instances.
#[derive(Debug, Clone, Copy)]
pub struct SizeCap {
    pub max_elements: u64,
    pub max_tuples: u64,
}

impl Default for SizeCap {
    fn default() -> Self {
        SizeCap { max_elements: 2_000_000, max_tuples: 10_000_000 }
    }
}

impl SizeCap {
    pub fn check_elements(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_elements as u128 {
            return Err(Error::SizeCap {
                what: what.to_string(),
                needed,
                cap: self.max_elements as u128,
            });
        }
        Ok(())
    }

    pub fn check_tuples(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_tuples as u128 {
            return Err(Error::SizeCap {
                what: what.to_string(),
                needed,
                cap: self.max_tuples as u128,
            });
        }
        Ok(())
    }
}
