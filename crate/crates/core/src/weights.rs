use std::borrow::Cow;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Validated per-edge weights; unit weights when none are given.
pub(crate) fn resolve<'a>(
    g: &Graph,
    weights: Option<&'a [f64]>,
    allow_zero: bool,
) -> Result<Cow<'a, [f64]>> {
    match weights {
        None => Ok(Cow::Owned(vec![1.0; g.edge_count() as usize])),
        Some(w) => {
            if w.len() as u64 != g.edge_count() {
                return Err(Error::WeightLength {
                    expected: g.edge_count(),
                    actual: w.len() as u64,
                });
            }
            for (e, &x) in w.iter().enumerate() {
                let reason = if x.is_nan() {
                    Some("not a number")
                } else if x < 0.0 {
                    Some("negative")
                } else if x == 0.0 && !allow_zero {
                    Some("must be positive")
                } else if x.is_infinite() {
                    Some("infinite")
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(Error::InvalidWeight {
                        edge: e as u64,
                        weight: x,
                        reason,
                    });
                }
            }
            Ok(Cow::Borrowed(w))
        }
    }
}

/// Totally ordered float for heap keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Total(pub f64);

impl Eq for Total {}

impl PartialOrd for Total {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Total {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}
