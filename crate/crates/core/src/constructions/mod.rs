//! Constructions from categories, 2-categories and graphs, extraction back
//! to categories, and mutation of presentations for negative testing.

pub mod category;
pub mod extract;
pub mod graph;
pub mod mutate;
pub mod two_category;

pub use category::{from_category, BaseCategory, CategoryPresentation, FiniteCategory, TowerOracle};
pub use extract::extract_category;
pub use graph::{free_strict_on_graph, GraphData};
pub use mutate::{mutate_presentation, Mutation};
pub use two_category::{from_strict_2category, TwoCategoryOracle, TwoCategoryPresentation};
