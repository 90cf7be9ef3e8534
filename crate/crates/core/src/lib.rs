//! Persistence of periodic traveling waves under small perturbations.
//!
//! A traveling wave `u = U(x − ct)` of a PDE reduces to a planar system
//! near a Hamiltonian one. The simple zeros of its Melnikov function
//! `M(h)`, an Abelian integral over the ovals `H = h`, mark the periodic
//! waves that survive a small perturbation. This crate evaluates `M`,
//! certifies its simple zeros, designs perturbations with prescribed zeros,
//! and checks each prediction by integrating the perturbed flow.

pub mod abelian;
pub mod catalog;
pub mod cli;
pub mod designer;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod scenario;
pub mod zerofind;

pub use error::{Error, Result};
