//! Typed attribute columns attached to a graph, its vertices or its edges.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Level an attribute column is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Graph,
    Vertex,
    Edge,
}

impl Scope {
    pub const ALL: [Scope; 3] = [Scope::Graph, Scope::Vertex, Scope::Edge];

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Graph => "graph",
            Scope::Vertex => "vertex",
            Scope::Edge => "edge",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Value type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttrType {
    Numeric,
    Text,
    Boolean,
}

impl AttrType {
    pub fn tag(self) -> &'static str {
        match self {
            AttrType::Numeric => "numeric",
            AttrType::Text => "text",
            AttrType::Boolean => "boolean",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "numeric" => Some(AttrType::Numeric),
            "text" => Some(AttrType::Text),
            "boolean" => Some(AttrType::Boolean),
            _ => None,
        }
    }
}

/// A homogeneous column of attribute values.
///
/// Equality on numeric columns is bitwise (with all NaNs equal), so a
/// serialization round-trip can be checked exactly.
#[derive(Debug, Clone)]
pub enum Column {
    Numeric(Vec<f64>),
    Text(Vec<String>),
    Boolean(Vec<bool>),
}

impl PartialEq for Column {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Column::Numeric(a), Column::Numeric(b)) => {
                a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
            }
            (Column::Text(a), Column::Text(b)) => a == b,
            (Column::Boolean(a), Column::Boolean(b)) => a == b,
            _ => false,
        }
    }
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Text(v) => v.len(),
            Column::Boolean(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn attr_type(&self) -> AttrType {
        match self {
            Column::Numeric(_) => AttrType::Numeric,
            Column::Text(_) => AttrType::Text,
            Column::Boolean(_) => AttrType::Boolean,
        }
    }

    pub fn as_numeric(&self) -> Option<&[f64]> {
        match self {
            Column::Numeric(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&[String]> {
        match self {
            Column::Text(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_boolean(&self) -> Option<&[bool]> {
        match self {
            Column::Boolean(v) => Some(v),
            _ => None,
        }
    }

    /// Keeps entries whose `keep` flag is set.
    pub(crate) fn retain_mask(&mut self, keep: &[bool]) {
        fn filter<T>(v: &mut Vec<T>, keep: &[bool]) {
            let mut i = 0;
            v.retain(|_| {
                let k = keep[i];
                i += 1;
                k
            });
        }
        match self {
            Column::Numeric(v) => filter(v, keep),
            Column::Text(v) => filter(v, keep),
            Column::Boolean(v) => filter(v, keep),
        }
    }

    /// Pads the column with the type's missing value (NaN, "", false).
    pub(crate) fn extend_missing(&mut self, extra: usize) {
        match self {
            Column::Numeric(v) => v.resize(v.len() + extra, f64::NAN),
            Column::Text(v) => v.resize(v.len() + extra, String::new()),
            Column::Boolean(v) => v.resize(v.len() + extra, false),
        }
    }
}

impl From<Vec<f64>> for Column {
    fn from(v: Vec<f64>) -> Self {
        Column::Numeric(v)
    }
}

impl From<Vec<String>> for Column {
    fn from(v: Vec<String>) -> Self {
        Column::Text(v)
    }
}

impl From<Vec<&str>> for Column {
    fn from(v: Vec<&str>) -> Self {
        Column::Text(v.into_iter().map(str::to_owned).collect())
    }
}

impl From<Vec<bool>> for Column {
    fn from(v: Vec<bool>) -> Self {
        Column::Boolean(v)
    }
}

/// Named columns for each of the three scopes. Names are unique per scope.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AttributeTable {
    graph: BTreeMap<String, Column>,
    vertex: BTreeMap<String, Column>,
    edge: BTreeMap<String, Column>,
}

impl AttributeTable {
    pub(crate) fn scope(&self, scope: Scope) -> &BTreeMap<String, Column> {
        match scope {
            Scope::Graph => &self.graph,
            Scope::Vertex => &self.vertex,
            Scope::Edge => &self.edge,
        }
    }

    pub(crate) fn scope_mut(&mut self, scope: Scope) -> &mut BTreeMap<String, Column> {
        match scope {
            Scope::Graph => &mut self.graph,
            Scope::Vertex => &mut self.vertex,
            Scope::Edge => &mut self.edge,
        }
    }

    pub fn get(&self, scope: Scope, name: &str) -> Result<&Column> {
        self.scope(scope)
            .get(name)
            .ok_or_else(|| Error::AttributeNotFound {
                scope,
                name: name.to_owned(),
            })
    }

    /// Column names for `scope`, in sorted order.
    pub fn names(&self, scope: Scope) -> impl Iterator<Item = &str> {
        self.scope(scope).keys().map(String::as_str)
    }

    pub fn iter(&self, scope: Scope) -> impl Iterator<Item = (&str, &Column)> {
        self.scope(scope).iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty() && self.vertex.is_empty() && self.edge.is_empty()
    }
}
