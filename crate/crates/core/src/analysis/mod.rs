//! Self-intersections, density, closed geodesics, co-face angle spectra and
//! direction scans over traced geodesics.

use thiserror::Error;

mod closed;
mod density;
mod grid;
mod intersect;
mod lap;
mod scan;
mod spectrum;

pub use closed::{closed_geodesic_detect, recurrences};
pub use density::{density_estimate, DensityReport};
pub use intersect::{self_intersections, IntersectionEvent, PROPER_ANGLE};
pub use lap::{lap_criterion, random_conforming_pair, segments_intersect, SegmentPair};
pub use scan::{default_scan_start, direction_scan, scan_csv, ScanOptions, ScanRow, ScanVerdict};
pub use spectrum::{coface_angle_spectrum, subset_sum_angles, AngleSpectrum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("segment midpoints coincide")]
    CoincidentMidpoints,
    #[error("surface is not convex: {0}")]
    NotConvex(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl AnalysisError {
    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisError::CoincidentMidpoints => "CoincidentMidpoints",
            AnalysisError::NotConvex(_) => "NotConvex",
            AnalysisError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
