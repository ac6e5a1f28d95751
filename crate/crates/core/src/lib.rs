//! Exact computational engine for bounded complexes of cellular sheaves
//! on finite cell complexes: derived-category calculus, Verdier duality,
//! the perversity test, intersection cohomology via iterated truncated
//! pushforward, the quiver model of perverse sheaves on curve germs, and
//! stalk-level vanishing-cycle bookkeeping.
//!
//! All arithmetic is exact, over the rationals or a prime field.

pub mod complex;
pub mod field;
pub mod linsys;
pub mod matrix;
pub mod octahedron;
pub mod poly;
pub mod roof;
pub mod tensor;
pub mod truncate;
