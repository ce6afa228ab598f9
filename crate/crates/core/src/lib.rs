pub mod error;
pub mod geometry;
pub mod multiindex;
pub mod wirtinger;
pub mod kernels;
pub mod linalg;
pub mod shifts;
pub mod curvature;
pub mod polynomial;
pub mod random_fields;
pub mod diagnostics;
pub mod export;
