//! Laurent expansions of arcs and loops on triangulated surfaces, computed both
//! from perfect matchings of snake and band graphs and from 2x2 matrix products.

pub mod algebra;
pub mod generate;
pub mod mpath;
pub mod selftest;
pub mod skein;
pub mod snakecore;
pub mod surface;
