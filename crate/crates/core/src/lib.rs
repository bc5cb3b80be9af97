//! Invariants of multi-linkoids: Kauffman-type bracket polynomials, the
//! Kauffman bracket skein module reduction over the sphere and the plane,
//! and the coloured Θ-graph link sets.

pub mod bracket;
pub mod corpus;
pub mod diagram;
pub mod kbsm;
pub mod laurent;
pub mod oracle;
pub mod tcol;
pub mod theta;

pub use diagram::{Diagram, DiagramError, Surface};
pub use laurent::LaurentPoly;
