//! Exact computations around totally nonnegative matrices, Cauchon (Le)
//! diagrams, restricted permutations and quantum / Poisson matrices.
//!
//! The three families of vanishing minors studied here (nonempty TNN cells,
//! closures of torus-orbits of symplectic leaves, torus-invariant primes of
//! quantum matrices) are all indexed by `m x p` Cauchon diagrams. The crate
//! computes each family independently and checks that they coincide.
//!
//! Module map:
//!
//! * [`exactmat`]: rational matrices, minors, TP / TNN predicates.
//! * [`diagram`]: Cauchon diagrams.
//! * [`symfun`]: polynomials, rational functions, Laurent polynomials in `q`,
//!   prime-field evaluation and the expression parser.
//! * [`derivations`]: deleting derivations, restoration, the TNN test and `T_C`.
//! * [`network`]: planar networks, path matrices, Lindström counts.
//! * [`perm`]: restricted permutations, pipe dreams, Bruhat order, `M(w)`.
//! * [`cells`]: admissible families and the three-way cross check.
//! * [`quantum`]: normal forms in quantum matrices.
//! * [`poisson`]: the standard Poisson bracket and Hamiltonian flows.

pub mod cells;
pub mod derivations;
pub mod diagram;
mod error;
pub mod exactmat;
pub mod guard;
pub mod network;
pub mod perm;
pub mod poisson;
pub mod quantum;
pub mod symfun;

pub use error::{Error, Result};
pub use exactmat::{MinorFamily, MinorIndex, Rat, RatMatrix};
pub use diagram::CauchonDiagram;
pub use perm::RestrictedPermutation;
