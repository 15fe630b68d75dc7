//! Bent functions over Z_p via the Vilenkin-Chrestenson transform.

pub mod appendix;
pub mod bentlab;
pub mod cases;
pub mod cyclotomic;
pub mod error;
pub mod generator;
pub mod genperm;
pub mod matrix;
pub mod mvfunction;
pub mod oracle;
pub mod vctransform;

pub use bentlab::{BentVerdict, NotBentSpectrum, Stage};
pub use cyclotomic::{CycInt, Radix, RootScalar};
pub use error::{Error, Result};
pub use genperm::{GammaName, GenPerm, PermExpr, PermOperator, Route};
pub use matrix::{DenseCycMatrix, ScaledCycMatrix};
pub use mvfunction::{MvFunction, Polynomial, SignVector};
pub use vctransform::{Limits, Spectrum};
