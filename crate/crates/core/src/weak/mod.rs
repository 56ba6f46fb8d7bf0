//! Horizontal composition and coherence equivalences.

use std::borrow::Cow;

use crate::presentation::Presentation;

pub mod coherence;
pub mod mu;
mod structure;

pub use coherence::{check_coherence, check_theta_table, theta_lookup, Axiom, CoherenceBounds};
pub use mu::{hcomp, mu_apply, mu_object, mu_tuple, mu_unit, validate_mu, MuBounds};
pub(crate) use structure::object_at;
pub use structure::{ThetaKey, WeakStructure};

/// The weak section of `p`, or an empty one (derived rules only).
pub fn weak_of(p: &Presentation) -> Cow<'_, WeakStructure> {
    p.weak().map(Cow::Borrowed).unwrap_or_default()
}
