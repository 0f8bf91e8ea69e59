//! Global optimization with the Hoopoe Heuristic (HH).
//!
//! HH is a single-agent metaheuristic that balances the two classic search
//! components explicitly: it *diversifies* with Lévy-flight moves while its
//! archive of visited regions is mostly unexplored, and switches to
//! *intensification* once the closed fraction of the archive exceeds a
//! threshold. Intensification is ground probing: sample neighbors uniformly
//! in a ball around the current point, estimate the success probability of
//! finding an improvement, and dig (a contracting local search) wherever
//! that probability clears a threshold.
//!
//! The crate ships:
//!
//! - [`hoopoe`] — the HH engine itself,
//! - [`cuckoo`] — a cuckoo-search baseline sharing the same Lévy sampler,
//!   repair policy, RNG construction and termination rules, so comparisons
//!   isolate the algorithmic difference,
//! - [`benchfns`] — the De Jong, Rosenbrock, Ackley and Rastrigin test
//!   functions with registered default domains and optima,
//! - [`levy`] — Mantegna-style heavy-tailed step generation,
//! - [`probing`] — ball probing and digging primitives,
//! - [`harness`] — a seeded, reproducible experiment runner with CSV output
//!   and a CLI (`hoopoe` binary).
//!
//! Every run is a pure function of its configuration: the same seed and
//! settings produce a bit-identical [`core::RunResult`], including the trace.

pub mod benchfns;
pub mod core;
pub mod cuckoo;
pub mod harness;
pub mod hoopoe;
pub mod levy;
pub mod probing;

pub use crate::core::{Bounds, Candidate, Objective, RunResult};
pub use crate::cuckoo::CuckooConfig;
pub use crate::hoopoe::HoopoeConfig;
