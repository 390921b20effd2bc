//! Chip-firing divisor theory on finite simple graphs.
//!
//! - [`graph`]: graphs, G(n, p) sampling and the edge-list format.
//! - [`divisor`]: firing, reduction, linear equivalence and rank.
//! - [`gonality`]: exact gonality with certificates, and the Clifford index.
//! - [`bounds`]: treewidth and independence number, the two sides of the
//!   gonality sandwich `tw(G) <= gon(G) <= n - α(G)`.
//! - [`experiments`]: reproducible Monte Carlo runs with CSV output.

pub mod bounds;
pub mod divisor;
pub mod experiments;
pub mod gonality;
pub mod graph;

pub use divisor::{Divisor, DivisorError, FiringScript};
pub use gonality::{GonalityError, GonalityResult, PositiveRankCertificate, SearchBudget};
pub use graph::{GnpParams, Graph, GraphError, Vertex};
