//! Discrete-time quantum walks on qudit registers.
//!
//! A walker's position is stored as a digit string on `d`-level wires and its
//! coin on qubits. [`mapping`] fixes the position encodings, [`synth`] turns
//! them into step circuits over the gate set in [`gates`], and [`oracle`]
//! evolves the same walks directly so the two can be compared with
//! [`compare`].

pub mod coins;
pub mod compare;
pub mod distribution;
pub mod error;
pub mod gates;
pub mod golden;
pub mod mapping;
pub mod matrix;
pub mod oracle;
pub mod resources;
pub mod state;
pub mod synth;

pub use error::{Error, Result};
