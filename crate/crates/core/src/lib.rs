pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod embedding;
pub mod harness;
