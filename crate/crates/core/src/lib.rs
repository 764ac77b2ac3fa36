//! Classification data of tall complexity-one Hamiltonian torus actions.

pub mod cli;
pub mod exactla;
pub mod model;
pub mod painting;
pub mod polyhedra;
pub mod pwaffine;
pub mod serde_util;
pub mod skeleton;
pub mod toricproj;
