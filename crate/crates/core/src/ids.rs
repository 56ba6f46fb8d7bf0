//! Identifiers and paths.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! text_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(token: impl AsRef<str>) -> Self {
                Self(Arc::from(token.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(Arc::from(s))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                if s.is_empty() {
                    return Err(serde::de::Error::custom("identifiers must be nonempty"));
                }
                Ok(Self::from(s))
            }
        }
    };
}

text_id!(
    /// An object of the quiver.
    ObjectId
);
text_id!(
    /// An arrow of the quiver.
    ArrowId
);

/// A path `<base, f_1, ..., f_n>`, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub base: ObjectId,
    pub arrows: Vec<ArrowId>,
}

impl Path {
    pub fn new(base: impl Into<ObjectId>, arrows: impl IntoIterator<Item = ArrowId>) -> Self {
        Self {
            base: base.into(),
            arrows: arrows.into_iter().collect(),
        }
    }

    pub fn empty(base: ObjectId) -> Self {
        Self {
            base,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}", self.base)?;
        for a in &self.arrows {
            write!(f, ",{a}")?;
        }
        f.write_str(">")
    }
}

/// Shorthand used throughout the tests and fixtures.
pub fn obj(s: &str) -> ObjectId {
    ObjectId::new(s)
}

pub fn arr(s: &str) -> ArrowId {
    ArrowId::new(s)
}
