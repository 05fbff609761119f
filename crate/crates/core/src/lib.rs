pub mod builtin;
pub mod cli;
pub mod error;
pub mod field;
pub mod group;
pub mod lattice;
pub mod poly;
pub mod pseudo;
pub mod semigroup;
pub mod series;
pub mod toric;
pub mod torific;
pub mod tower;
