//! Quadrature and root-finding primitives shared by the solvers.
//!
//! Everything here is pure and deterministic: no randomized nodes, no shared
//! state, so identical inputs give bit-identical outputs.

pub mod grid;
pub mod quadrature;
pub mod roots;

pub use grid::RadialGrid;
pub use quadrature::{
    integrate, integrate_estimate, integrate_semi_infinite, integrate_semi_infinite_estimate, Estimate, QuadratureSpec,
};
pub use roots::{
    bisect_predicate_boundary, bisect_predicate_bracket, find_roots_on_interval, maximize_on_interval, refine_bracket,
    BoundaryBracket, Bracket, Root,
};
