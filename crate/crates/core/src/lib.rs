pub mod field;
pub mod hn;
pub mod invariants;
pub mod milnor;
pub mod newton;
pub mod poly;
pub mod tree;
