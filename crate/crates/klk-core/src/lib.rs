//! Exact-arithmetic engine for the algebra of hermitian integral geometry:
//! double forms on C^n, the Gray algebra, the unitary valuation algebra, the
//! canonical space-form isomorphisms, and the curvature-measure calculus.
//!
//! Every computation is exact: rational coefficients, formal pi (Laurent
//! powers) and a formal curvature parameter lambda (nonnegative powers).
//! There is no floating-point mode.

pub mod error;
pub mod forms;
pub mod gray;
pub mod json;
pub mod kahler;
pub mod linalg;
pub mod quotient;
pub mod scalar;
pub mod series;
pub mod space_forms;
pub mod curv;
pub mod valuations;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};

// Concrete type aliases at the crate root.
pub type Rational = scalar::Rational;
pub type PiLambdaScalar = scalar::PiLambda;
pub type HalfPiScalar = scalar::HalfPi;
pub type PowerSeries2 = series::PowerSeries2;
pub type DoubleForm = forms::DoubleForm;
pub type SymBilinear = kahler::SymBilinear;
pub type KahlerTensor = kahler::KahlerTensor;
pub type EvenFormMatrix = kahler::EvenFormMatrix;
pub type GradedPoly = gray::GradedPoly;
pub type GrayElement = gray::GrayElement;
pub type FlatValuation = valuations::FlatValuation;
pub type PairingForm = valuations::PairingForm;
pub type CurvedValuation = space_forms::CurvedValuation;
pub type TransferMatrix = space_forms::TransferMatrix;
pub type CurvIndexSet = curv::CurvIndexSet;
pub type CurvElement = curv::CurvElement;
pub type ModuleTable = curv::ModuleTable;
pub type VolumeConstant = weyl::VolumeConstant;
pub type MomentKey = weyl::MomentKey;
