//! Construction and verification toolkit for shear-flow automorphism
//! programs: exact 2x2 matrix flows on SL2(C), descended flows on the
//! Danielewski surface, conjugation flows on the spectral ball, finite
//! quotient descent, and a symbolic vector-field engine that certifies the
//! underlying Lie-algebra identities.

pub mod danielewski;
pub mod error;
pub mod flows;
pub mod interp;
pub mod mat2;
pub mod quadext;
pub mod quotients;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod spanning;
pub mod spectral;
pub mod tame_sl2;
pub mod vector_field;

pub use error::{Error, Result};
pub use scalar::{Backend, GaussRat, Scalar};
