//! Exact computations with toric and semitoric fans: words in the lift of
//! SL2(Z), fan transformations and normalization, semitoric polygons and the
//! metric on ingredient lists.

pub mod error;
pub mod groupcore;
pub mod moduli;
pub mod oracle;
pub mod polygeom;
pub mod rational;
pub mod semitoric;
pub mod toricfan;

pub use error::{Error, Result};
pub use groupcore::{LatticeVector, LiftedElement, UniModMatrix};
pub use moduli::{CapSequence, IngredientList, TruncatedSeries};
pub use polygeom::{DensitySpec, Marker, Point, PrimitiveSemitoricPolygon, RationalPolygon};
pub use semitoric::{CornerLabel, FanMove, SemitoricFan};
pub use toricfan::{FanWord, MinimalModel, ToricFan};
