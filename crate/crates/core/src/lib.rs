//! Noise-aware simulation and error mitigation for small quantum circuits.

pub mod circuit;
pub mod cutting;
pub mod device;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod mitigation;
pub mod reliability;
pub mod sim;

pub use circuit::{Benchmark, BenchmarkFamily, Circuit, Gate, GateKind, Pauli, PauliString};
pub use device::DeviceModel;
pub use error::{Error, Result};
pub use reliability::{compute_esp, Reliability};
pub use sim::{simulate, Distribution, NoiseConfig};
