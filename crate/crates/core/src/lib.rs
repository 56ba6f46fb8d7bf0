//! Weak folded categories: finite presentations, validators, a coinductive
//! equivalence engine with checkable certificates, and the standard
//! constructions from categories, strict 2-categories and graphs.

pub mod constructions;
pub mod derived;
pub mod equiv;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod ids;
pub mod oracle;
pub mod presentation;
pub mod report;
pub mod validate;
pub mod weak;

pub use error::{FcatError, Result};
pub use ids::{ArrowId, ObjectId, Path};
pub use oracle::{truncate_oracle, Generative, Oracle, TruncateOptions, Window};
pub use presentation::{parse_presentation, Presentation};
pub use report::{Finding, Report, Status};
pub use validate::validate_presentation;
