//! Small numerical building blocks shared across the engines.

pub mod fit;
pub mod golden;
pub mod interp;
pub mod quad;
