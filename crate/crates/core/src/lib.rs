pub mod expr;
pub mod scalar;
pub mod exactla;
pub mod term;
pub mod setprops;
pub mod circuit;
pub mod linrel;
pub mod afflag;
pub mod sigflow;
pub mod bondgraph;
pub mod random;
pub mod laws;
pub mod cli;
