pub mod circuit;
pub mod density;
pub mod diagram;
pub mod experiment;
pub mod grammar;
pub mod rng;
pub mod sim;
pub mod train;
pub mod zx;
