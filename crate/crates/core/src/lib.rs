//! The bubble-sort graph `BS_n`: the Cayley graph of the symmetric group
//! generated by the adjacent transpositions `b_i = (i i+1)`.
//!
//! * [`perm`]: permutations, generators, parity, ranking and the SJT cycle.
//! * [`graph`]: the implicit graph, brute-force small-cycle oracle and validators.
//! * [`small_cycles`]: the canonical 4-/6-cycle families and their census.
//! * [`prisms`]: 6-prisms, generalized prisms `2-BS_{n-2}` and paths through them.
//! * [`ham`]: Hamiltonian cycles lifted through the prism factor graph.
//! * [`dot`]: Graphviz export.

pub mod dot;
pub mod error;
pub mod graph;
pub mod ham;
pub mod perm;
pub mod prisms;
pub mod small_cycles;

pub use error::{Error, Result};
pub use perm::{factorial, sjt_cycle, Form, Parity, Permutation, DEFAULT_N_CAP, MAX_N};
