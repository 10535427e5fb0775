//! Exact arithmetic kernel shared by every other module.

pub mod jet;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod series;

pub use jet::Jet1;
pub use linalg::{quotient_dim, Classifier, LinSpace, Matrix, Quotient, SparseVec};
pub use poly::Poly;
pub use quad::QuadNumber;
pub use series::{series_compose, series_mul, TruncSeries};
