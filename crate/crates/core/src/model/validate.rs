use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::abbrev::abbreviate;
use super::network::{topological_order, NetworkParts};

/// Absolute tolerance for probability rows summing to one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// One broken invariant, naming the variable (and row) at fault.
#[derive(Clone, Debug, PartialEq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Violation {
    #[error("event space {space:?} has no values")]
    EmptySpace { space: String },
    #[error("event space {space:?} lists value {value:?} more than once")]
    DuplicateValue { space: String, value: String },
    #[error("event space id {space:?} is declared more than once")]
    DuplicateSpace { space: String },
    #[error("variable {variable:?} refers to missing event space #{space}")]
    UnknownSpace { variable: String, space: usize },
    #[error("variable name {name:?} is used more than once")]
    DuplicateName { name: String },
    #[error("variable name {name:?} cannot be abbreviated: {reason}")]
    InvalidName { name: String, reason: String },
    #[error("edge ({parent}, {child}) refers to a missing variable")]
    EdgeOutOfRange { parent: usize, child: usize },
    #[error("edge {parent:?} -> {child:?} is declared more than once")]
    DuplicateEdge { parent: String, child: String },
    #[error("structure has a directed cycle through {variables:?}")]
    Cycle { variables: Vec<String> },
    #[error("variable {variable:?} has no CPT")]
    MissingCpt { variable: String },
    #[error("CPT of {variable:?} lists parents {cpt:?} but the structure gives {structure:?}")]
    ParentMismatch {
        variable: String,
        cpt: Vec<String>,
        structure: Vec<String>,
    },
    #[error("CPT of {variable:?} has {found} rows, expected {expected}")]
    RowCount {
        variable: String,
        expected: usize,
        found: usize,
    },
    #[error("CPT of {variable:?} row {row} has {found} entries, expected {expected}")]
    RowLength {
        variable: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("CPT of {variable:?} row {row} has a negative or non-finite entry {value}")]
    BadEntry {
        variable: String,
        row: usize,
        value: f64,
    },
    #[error("CPT of {variable:?} row {row} sums to {sum}, not 1")]
    NotNormalized {
        variable: String,
        row: usize,
        sum: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural and numerical invariant of a network description.
/// Violations are collected, not raised.
pub fn validate_network(parts: &NetworkParts) -> ValidationReport {
    let mut out = Vec::new();
    let n = parts.variables.len();
    let name = |i: usize| parts.variables[i].name.clone();

    let mut space_ids = HashSet::new();
    for space in &parts.spaces {
        if !space_ids.insert(space.id.as_str()) {
            out.push(Violation::DuplicateSpace {
                space: space.id.clone(),
            });
        }
        if space.values.is_empty() {
            out.push(Violation::EmptySpace {
                space: space.id.clone(),
            });
        }
        let mut seen = HashSet::new();
        for value in &space.values {
            if !seen.insert(value.as_str()) {
                out.push(Violation::DuplicateValue {
                    space: space.id.clone(),
                    value: value.clone(),
                });
            }
        }
    }

    let mut names = HashSet::new();
    for var in &parts.variables {
        if !names.insert(var.name.as_str()) {
            out.push(Violation::DuplicateName {
                name: var.name.clone(),
            });
        }
        if var.space >= parts.spaces.len() {
            out.push(Violation::UnknownSpace {
                variable: var.name.clone(),
                space: var.space,
            });
        }
        if let Err(e) = abbreviate(&[var.name.as_str()]) {
            out.push(Violation::InvalidName {
                name: var.name.clone(),
                reason: e.to_string(),
            });
        }
    }

    let mut structure: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(p, c) in &parts.edges {
        if p >= n || c >= n {
            out.push(Violation::EdgeOutOfRange {
                parent: p,
                child: c,
            });
            continue;
        }
        if !structure[c].insert(p) {
            out.push(Violation::DuplicateEdge {
                parent: name(p),
                child: name(c),
            });
        }
    }
    let parent_lists: Vec<Vec<usize>> = structure.iter().map(|s| s.iter().copied().collect()).collect();
    if topological_order(&parent_lists).is_none() {
        out.push(Violation::Cycle {
            variables: cyclic_core(&parent_lists).into_iter().map(name).collect(),
        });
    }

    let card = |i: usize| {
        parts
            .variables
            .get(i)
            .and_then(|v| parts.spaces.get(v.space))
            .map(|s| s.values.len())
    };

    for (i, var) in parts.variables.iter().enumerate() {
        let Some(cpt) = parts.cpts.get(i).and_then(Option::as_ref) else {
            out.push(Violation::MissingCpt {
                variable: var.name.clone(),
            });
            continue;
        };
        let cpt_set: BTreeSet<usize> = cpt.parents.iter().copied().collect();
        if cpt_set != structure[i] || cpt_set.len() != cpt.parents.len() {
            let label = |idx: &usize| {
                parts
                    .variables
                    .get(*idx)
                    .map(|v| v.name.clone())
                    .unwrap_or_else(|| format!("#{idx}"))
            };
            out.push(Violation::ParentMismatch {
                variable: var.name.clone(),
                cpt: cpt.parents.iter().map(label).collect(),
                structure: structure[i].iter().map(label).collect(),
            });
            continue;
        }
        let (Some(own), Some(parent_cards)) = (
            card(i),
            cpt.parents.iter().map(|&p| card(p)).collect::<Option<Vec<_>>>(),
        ) else {
            // unknown space already reported
            continue;
        };
        let expected_rows: usize = parent_cards.iter().product();
        if cpt.rows.len() != expected_rows {
            out.push(Violation::RowCount {
                variable: var.name.clone(),
                expected: expected_rows,
                found: cpt.rows.len(),
            });
        }
        for (r, row) in cpt.rows.iter().enumerate() {
            if row.len() != own {
                out.push(Violation::RowLength {
                    variable: var.name.clone(),
                    row: r,
                    expected: own,
                    found: row.len(),
                });
                continue;
            }
            if let Some(&bad) = row.iter().find(|x| !x.is_finite() || **x < 0.0) {
                out.push(Violation::BadEntry {
                    variable: var.name.clone(),
                    row: r,
                    value: bad,
                });
                continue;
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
                out.push(Violation::NotNormalized {
                    variable: var.name.clone(),
                    row: r,
                    sum,
                });
            }
        }
    }

    ValidationReport { violations: out }
}

/// Variables left after repeatedly stripping sources and sinks: every one of
/// them lies on, or between, directed cycles.
fn cyclic_core(parents: &[Vec<usize>]) -> Vec<usize> {
    let n = parents.len();
    let mut alive = vec![true; n];
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let has_in = parents[v].iter().any(|&p| alive[p]);
            let has_out = children[v].iter().any(|&c| alive[c]);
            if !has_in || !has_out {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}
