//! Structures derived from a presentation: the arrow category, iterated
//! boundaries, the power structures `C^[n]`, functors and cell levels.

pub mod arrow;
pub mod cells;
pub mod functor;
pub mod globular;
pub mod power;

pub use arrow::{arrow_category, ArrowCategory};
pub use cells::{cell_levels, classify_shape, discreteness, CellLevelMap, Classification, Shape, TriState};
pub use functor::{validate_functor, FunctorData};
pub use globular::{check_globular, is_globular, iterated_boundary, Side};
pub use power::{
    check_inclusion, parse_tuple, point_structure, power_structure, product_view, tuple_token, PointMode,
    PointStructure, PowerStructure, ProductView, Tuple,
};
