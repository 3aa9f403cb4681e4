pub mod algebra;
pub mod complex;
pub mod conjugacy;
pub mod dynamics;
pub mod elemset;
pub mod harness;
pub mod proximity;
pub mod scalar;
