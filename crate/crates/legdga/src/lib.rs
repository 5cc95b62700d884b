//! Legendrian fronts, Morse complex sequences, and the Chekanov-Eliashberg DGA.

pub mod cedga;
pub mod chordpath;
pub mod cli;
pub mod corpus;
pub mod dga;
pub mod diagram;
pub mod mcs;
pub mod moves;
pub mod render;
pub mod verify;
pub mod z2linalg;
