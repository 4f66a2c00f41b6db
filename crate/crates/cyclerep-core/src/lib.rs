#![cfg_attr(not(test), no_std)]
//! Persistent homology over exact rationals with LP/MIP-optimized
//! dimension-1 cycle representatives.
//!
//! The crate is `no_std` + `alloc`: everything here is pure computation.
//! File formats, random generators, and the command-line front end live in
//! the companion `cyclerep-cli` crate.
//!
//! Pipeline shape: build a filtered Vietoris-Rips complex ([`complex`]),
//! reduce its boundary matrices and read off the barcode and an initial
//! cycle basis ([`persistence`]), then shrink representatives by solving
//! exact rational linear or integer programs ([`edge_opt`], [`tri_opt`],
//! [`lp`]) and evaluate the results ([`metrics`]).

extern crate alloc;

pub mod complex;
pub mod edge_opt;
pub mod lp;
pub mod metrics;
pub mod persistence;
pub mod rational;
pub mod tri_opt;
