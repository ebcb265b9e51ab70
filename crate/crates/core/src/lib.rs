//! Exact Khovanov homology of links from planar diagrams.
//!
//! The crate is `no_std` (it needs `alloc`). It covers parsing PD codes,
//! resolving Kauffman states, assembling the bigraded chain complex with its
//! auxiliary maps (`nu`, the Turner differential and `delta = d nu + nu d`),
//! exact linear algebra over Z, Q, Z/2 and Z/2^r, homology tables, the
//! Jones polynomial, and the induced maps on mod-2 homology used to relate
//! the Bockstein and Turner spectral sequences.
#![no_std]

extern crate alloc;

pub mod complex;
pub mod diagram;
pub mod diffops;
pub mod homology;
pub mod jones;
pub mod linalg;
pub mod ring;
pub mod statecube;
mod unionfind;

pub use complex::{build_complex, BigradedComplex, Generator, GradedMap, PairType};
pub use diagram::{parse_pd, DiagramError, PlanarDiagram};
pub use homology::{khovanov_homology, HomologyTable, ThinnessReport};
pub use jones::LaurentPolynomial;
pub use linalg::{GroupDescription, SparseMatrix};
pub use ring::Ring;
pub use statecube::{CubeLimits, KauffmanState};

/// Bigrading `(i, j)`: homological degree and internal (quantum) degree.
pub type Bigrade = (i32, i32);
