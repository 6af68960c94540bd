pub mod characters;
pub mod gog;
pub mod lattice;
pub mod equitable;
pub mod random;
pub mod covers;
pub mod alexander;
pub mod classify;
pub mod cli;
