//! Exact computations in the cluster-tilted quotient of the continuous cluster
//! category, with all coordinates dyadic multiples of pi.

pub mod band;
pub mod cluster;
pub mod config;
pub mod dyadic;
pub mod equiv;
pub mod error;
pub mod linalg;
pub mod quotient;
pub mod render;
pub mod strings;
pub mod suite;
pub mod walk;

pub use band::{Obj, Rect, Rep};
pub use cluster::{ClusterOverlay, ClusterPt};
pub use dyadic::{CircleAngle, Dyadic};
pub use error::{Error, Result};
