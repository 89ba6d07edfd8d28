//! Simulation of the textbook protocols at the interface of quantum
//! information and gravity: Mach-Zehnder and Stern-Gerlach experiments,
//! CHSH games, gravitationally induced entanglement, the quantum switch and
//! a Bell test for temporal order.

#![allow(clippy::needless_range_loop)]

pub mod causal;
pub mod constants;
mod error;
pub mod gates;
pub mod gie;
pub mod interferometry;
pub mod nonlocality;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
