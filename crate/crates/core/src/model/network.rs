use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::abbrev::{abbreviate, Abbreviation};
use super::space::EventSpace;
use super::validate::{validate_network, ValidationReport};
use super::ModelError;

/// Position of a variable in its network (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub id: VarId,
    pub name: String,
    pub abbreviation: Abbreviation,
    pub space: Arc<EventSpace>,
}

impl Variable {
    pub fn cardinality(&self) -> usize {
        self.space.len()
    }
}

/// Mixed-radix index of a parent-value permutation, last position fastest.
pub fn mixed_radix_index(ordinals: &[usize], cards: &[usize]) -> Result<usize, ModelError> {
    if ordinals.len() != cards.len() {
        return Err(ModelError::ArityMismatch {
            expected: cards.len(),
            found: ordinals.len(),
        });
    }
    let mut index = 0;
    for (&o, &c) in ordinals.iter().zip(cards) {
        if o >= c {
            return Err(ModelError::OrdinalOutOfRange {
                ordinal: o,
                size: c,
            });
        }
        index = index * c + o;
    }
    Ok(index)
}

/// Inverse of [`mixed_radix_index`].
pub fn decode_mixed_radix(mut index: usize, cards: &[usize]) -> Vec<usize> {
    let mut ordinals = vec![0; cards.len()];
    for (slot, &c) in ordinals.iter_mut().zip(cards).rev() {
        *slot = index % c;
        index /= c;
    }
    ordinals
}

/// Canonical CPT row for the given parent value names.
pub fn row_index<S: AsRef<str>>(parent_values: &[S], parents: &[&Variable]) -> Result<usize, ModelError> {
    if parent_values.len() != parents.len() {
        return Err(ModelError::ArityMismatch {
            expected: parents.len(),
            found: parent_values.len(),
        });
    }
    let ordinals = parent_values
        .iter()
        .zip(parents)
        .map(|(value, parent)| {
            parent
                .space
                .ordinal(value.as_ref())
                .ok_or_else(|| ModelError::ValueNotInSpace {
                    variable: parent.name.clone(),
                    value: value.as_ref().to_owned(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cards: Vec<usize> = parents.iter().map(|p| p.cardinality()).collect();
    mixed_radix_index(&ordinals, &cards)
}

/// Local distribution of one variable given its parents.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    pub variable: VarId,
    pub parents: Vec<VarId>,
    parent_cards: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl Cpt {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    /// Row for a parent permutation given as ordinals (parent order).
    pub fn row(&self, parent_ordinals: &[usize]) -> Result<&[f64], ModelError> {
        let i = mixed_radix_index(parent_ordinals, &self.parent_cards)?;
        Ok(&self.rows[i])
    }

    /// P(variable = value | parents = parent_ordinals).
    pub fn prob(&self, value: usize, parent_ordinals: &[usize]) -> Result<f64, ModelError> {
        let row = self.row(parent_ordinals)?;
        row.get(value).copied().ok_or(ModelError::OrdinalOutOfRange {
            ordinal: value,
            size: row.len(),
        })
    }
}

/// Declaration of a variable in [`NetworkParts`]; `space` indexes `NetworkParts::spaces`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableDecl {
    pub name: String,
    pub space: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CptDecl {
    pub parents: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

/// Unvalidated description of a network. Everything is addressed by index;
/// [`validate_network`] reports every broken invariant and
/// [`BayesianNetwork::from_parts`] refuses to build from a non-empty report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NetworkParts {
    pub spaces: Vec<EventSpace>,
    pub variables: Vec<VariableDecl>,
    /// (parent, child)
    pub edges: Vec<(usize, usize)>,
    /// One slot per variable.
    pub cpts: Vec<Option<CptDecl>>,
}

/// A validated, immutable discrete Bayesian network.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesianNetwork {
    spaces: Vec<Arc<EventSpace>>,
    variables: Vec<Variable>,
    children: Vec<Vec<VarId>>,
    cpts: Vec<Cpt>,
    topological: Vec<VarId>,
    by_name: HashMap<String, VarId>,
}

impl BayesianNetwork {
    pub fn from_parts(parts: NetworkParts) -> Result<Self, ModelError> {
        let report = validate_network(&parts);
        if !report.is_empty() {
            return Err(ModelError::Invalid(report));
        }

        let spaces: Vec<Arc<EventSpace>> = parts.spaces.into_iter().map(Arc::new).collect();
        let abbreviations = abbreviate(
            &parts
                .variables
                .iter()
                .map(|v| v.name.as_str())
                .collect::<Vec<_>>(),
        )?;
        let variables: Vec<Variable> = parts
            .variables
            .into_iter()
            .zip(abbreviations)
            .enumerate()
            .map(|(i, (decl, abbreviation))| Variable {
                id: VarId(i),
                name: decl.name,
                abbreviation,
                space: Arc::clone(&spaces[decl.space]),
            })
            .collect();

        let cpts: Vec<Cpt> = parts
            .cpts
            .into_iter()
            .enumerate()
            .map(|(i, decl)| {
                let decl = decl.expect("validated: every variable has a CPT");
                Cpt {
                    variable: VarId(i),
                    parent_cards: decl.parents.iter().map(|&p| variables[p].cardinality()).collect(),
                    parents: decl.parents.into_iter().map(VarId).collect(),
                    rows: decl.rows,
                }
            })
            .collect();

        let mut children = vec![Vec::new(); variables.len()];
        for cpt in &cpts {
            for &p in &cpt.parents {
                children[p.0].push(cpt.variable);
            }
        }
        let parents: Vec<Vec<usize>> = cpts
            .iter()
            .map(|c| c.parents.iter().map(|p| p.0).collect())
            .collect();
        let topological = topological_order(&parents)
            .expect("validated: structure is acyclic")
            .into_iter()
            .map(VarId)
            .collect();
        let by_name = variables.iter().map(|v| (v.name.clone(), v.id)).collect();

        Ok(BayesianNetwork {
            spaces,
            variables,
            children,
            cpts,
            topological,
            by_name,
        })
    }

    /// Inverse of [`BayesianNetwork::from_parts`].
    pub fn to_parts(&self) -> NetworkParts {
        let space_index = |s: &Arc<EventSpace>| {
            self.spaces
                .iter()
                .position(|t| Arc::ptr_eq(s, t))
                .expect("variable space belongs to the network")
        };
        NetworkParts {
            spaces: self.spaces.iter().map(|s| (**s).clone()).collect(),
            variables: self
                .variables
                .iter()
                .map(|v| VariableDecl {
                    name: v.name.clone(),
                    space: space_index(&v.space),
                })
                .collect(),
            edges: self.edges().map(|(p, c)| (p.0, c.0)).collect(),
            cpts: self
                .cpts
                .iter()
                .map(|c| {
                    Some(CptDecl {
                        parents: c.parents.iter().map(|p| p.0).collect(),
                        rows: c.rows.clone(),
                    })
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn spaces(&self) -> &[Arc<EventSpace>] {
        &self.spaces
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<&Variable, ModelError> {
        self.var_id(name)
            .map(|id| self.variable(id))
            .ok_or_else(|| ModelError::UnknownVariable(name.to_owned()))
    }

    pub fn cpt(&self, id: VarId) -> &Cpt {
        &self.cpts[id.0]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn parents(&self, id: VarId) -> &[VarId] {
        &self.cpts[id.0].parents
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id.0]
    }

    /// Edges as (parent, child), grouped by child in variable order and by
    /// CPT parent order within a child.
    pub fn edges(&self) -> impl Iterator<Item = (VarId, VarId)> + '_ {
        self.cpts
            .iter()
            .flat_map(|c| c.parents.iter().map(move |&p| (p, c.variable)))
    }

    /// Parents before children; ties by variable index.
    pub fn topological_order(&self) -> &[VarId] {
        &self.topological
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::cardinality).collect()
    }

    /// Always empty for a constructed network; kept for symmetry with
    /// [`validate_network`] on raw parts.
    pub fn validate(&self) -> ValidationReport {
        validate_network(&self.to_parts())
    }
}

/// Kahn's algorithm with a smallest-index-first frontier. `None` on a cycle.
pub(crate) fn topological_order(parents: &[Vec<usize>]) -> Option<Vec<usize>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (child, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(child);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    (order.len() == n).then_some(order)
}
