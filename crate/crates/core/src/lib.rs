pub mod centering;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod edm;
pub mod representations;
pub mod oracle;
pub mod cli;
