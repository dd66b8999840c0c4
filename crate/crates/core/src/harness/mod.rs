//! File formats, generators, oracles and the named example suite.

pub mod builders;
pub mod campaign;
pub mod enumerate;
pub mod examples;
pub mod generator;
pub mod oracle;
