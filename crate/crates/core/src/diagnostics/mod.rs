//! Similarity and contractivity diagnostics and the example gallery.

pub mod examples;
pub mod gallery;
pub mod noncontraction;
pub mod scans;
pub mod similarity;

pub use examples::{det_curvature_inequality_check, reproduce_fb_example, DetInequalityReport, FbReport};
pub use gallery::{reproduce, GalleryReport, GALLERY_IDS};
pub use noncontraction::{noncontraction_experiment, NoncontractionReport};
pub use scans::{curvature_ratio_scan, psh_check, section_sup_ratio, PshReport, RatioScan, SupRatioReport};
pub use similarity::{shift_similarity, SimilarityOptions, SimilarityOutcome, SimilarityVerdict};
