//! Text formats: extended Newick, MUL-Newick and DOT.

pub mod dot;
pub mod newick;

pub use dot::{multree_to_dot, network_to_dot, DotStyle};
pub use newick::{parse_enewick, parse_mulnewick, print_enewick, print_mulnewick, ParseError, Position};
