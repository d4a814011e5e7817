use serde::{Deserialize, Serialize};

/// How the values of an event space relate to each other. Drives the color
/// arrangement: categorical values get contrasting colors, ordered values a ramp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Categorical,
    Ordered,
}

/// A finite set of named values with a fixed presentation order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventSpace {
    pub id: String,
    pub kind: SpaceKind,
    pub values: Vec<String>,
}

impl EventSpace {
    pub fn new(id: impl Into<String>, kind: SpaceKind, values: Vec<String>) -> Self {
        EventSpace {
            id: id.into(),
            kind,
            values,
        }
    }

    pub fn categorical<S: AsRef<str>>(id: impl Into<String>, values: &[S]) -> Self {
        Self::new(
            id,
            SpaceKind::Categorical,
            values.iter().map(|v| v.as_ref().to_owned()).collect(),
        )
    }

    pub fn ordered<S: AsRef<str>>(id: impl Into<String>, values: &[S]) -> Self {
        Self::new(
            id,
            SpaceKind::Ordered,
            values.iter().map(|v| v.as_ref().to_owned()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ordinal of a value name, if present.
    pub fn ordinal(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    pub fn value(&self, ordinal: usize) -> Option<&str> {
        self.values.get(ordinal).map(String::as_str)
    }

    /// Same kind and same values in the same order; the id is ignored.
    pub fn same_shape(&self, other: &EventSpace) -> bool {
        self.kind == other.kind && self.values == other.values
    }
}
