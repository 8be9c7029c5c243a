//! Exact combinatorics of Thompson's group F.
//!
//! Coordinates are exact rationals ([`exactnum`]). On top of them sit marked
//! sets and standard dyadic partitions ([`partition`]), group elements as
//! piecewise-linear maps ([`felement`]), Følner-defect audits and the
//! mesh-bounded reduction from marked families to element sets ([`folner`]),
//! tower-growth and monotonicity diagnostics ([`diagnostics`]), and seeded
//! property suites ([`verify`]).
//!
//! Batch work (families, balls, suites) runs on rayon when the default
//! `parallel` feature is on; results are identical either way.

pub mod diagnostics;
pub mod error;
pub mod exactnum;
pub mod felement;
pub mod folner;
pub mod io;
pub mod par;
pub mod partition;
pub mod random;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{parse_number, DyadicForm, ExactNumber};
pub use felement::{
    act_marked, act_marked_side, act_partition, canonical_key, compose, f_of_partition, from_pair,
    generators, invert, to_minimal_pair, CanonicalKey, FElement, Generator, PartitionPair, Side,
    Word,
};
pub use folner::{ElementSet, FolnerReport, MarkedFamily};
pub use partition::{common_refinement, i_n, is_standard, mesh, t_of, DyadicPartition, MarkedSet};
