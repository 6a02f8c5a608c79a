//! Numerical toolkit for the triangle Cayley condition of the Poncelet porism.
//!
//! The crate is `no_std` (it needs `alloc`). Pairs of complex conics are
//! handled through their 3×3 symmetric matrices:
//!
//! * [`numeric`]: complex scalars, 3×3 matrices, projective points, the
//!   companion-matrix root finder and the tolerance policy.
//! * [`conic`]: pencil coefficients, discriminant, transversality,
//!   intersection points and dual conics.
//! * [`cayley`]: the square-root series of det(tC + D), the Cayley
//!   determinants for n-gons, the triangle equation γ and the fiber map ψ_D.
//! * [`moduli`]: the congruence action, normal forms, isotropy groups and the
//!   projection to weighted projective space ℙ(1,2,3).
//! * [`elliptic`]: j-invariants, the critical locus, the Cayley moduli curve
//!   and the degree-24 j-fibers.
//! * [`gradients`]: root gradients along pencil deformations.
//! * [`poncelet`]: the inscribe/circumscribe step map and closure checks.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod cayley;
pub mod conic;
pub mod elliptic;
pub mod error;
pub mod gradients;
pub mod moduli;
pub mod numeric;
pub mod poncelet;
pub mod random;

pub use error::{Error, Result};
pub use numeric::{cx, Cx, Mat3, Point1, Point2, ProjPoint, Tolerance};
