//! Subordinators, non-local operators and time-changed Brownian motion on
//! smooth and Koch-type planar domains.

pub mod cli;
pub mod error;
pub mod koch;
pub mod subordinate;
pub mod nonlocal_ops;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod walker;
pub mod stats;
pub mod symbols;

pub use error::{Error, Result};
pub use symbols::{BernsteinSymbol, ExtReal, JumpLaw, SurvivalFn, SymbolKind};
