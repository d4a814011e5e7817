use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::score::{estimate_cpts, family_score};
use super::LearnError;
use crate::model::{BayesianNetwork, CptDecl, EventSpace, NetworkParts, VariableDecl};

/// Minimum score gain for a move to count as an improvement.
pub const MIN_IMPROVEMENT: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct LearnConfig {
    pub max_indegree: usize,
    pub dirichlet_alpha: f64,
    pub max_passes: usize,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            max_indegree: 2,
            dirichlet_alpha: 1.0,
            max_passes: 10_000,
        }
    }
}

impl LearnConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        if self.max_indegree < 1 {
            return Err(LearnError::Config("max_indegree must be at least 1".into()));
        }
        if self.dirichlet_alpha <= 0.0 || !self.dirichlet_alpha.is_finite() {
            return Err(LearnError::Config("dirichlet_alpha must be positive".into()));
        }
        if self.max_passes < 1 {
            return Err(LearnError::Config("max_passes must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Add,
    Delete,
    Reverse,
}

/// An accepted hill-climbing step and the total score after it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptedMove {
    pub kind: MoveKind,
    pub parent: usize,
    pub child: usize,
    pub score: f64,
}

#[derive(Clone, Debug)]
pub struct LearnOutcome {
    pub network: BayesianNetwork,
    /// Column parents, sorted ascending.
    pub parents: Vec<Vec<usize>>,
    pub initial_score: f64,
    pub score: f64,
    pub moves: Vec<AcceptedMove>,
}

/// Cached family scores of one child: the current family plus the family with
/// each other column toggled in or out.
struct ChildScores {
    current: f64,
    toggled: Vec<f64>,
}

struct Search<'a> {
    data: &'a Dataset,
    alpha: f64,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    scores: Vec<ChildScores>,
}

impl<'a> Search<'a> {
    fn new(data: &'a Dataset, alpha: f64) -> Self {
        let n = data.n_columns();
        let mut search = Search {
            data,
            alpha,
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
            scores: Vec::new(),
        };
        search.scores = (0..n).into_par_iter().map(|c| search.score_child(c)).collect();
        search
    }

    fn score_child(&self, child: usize) -> ChildScores {
        let parents = &self.parents[child];
        let current = family_score(self.data, child, parents, self.alpha);
        let toggled = (0..self.data.n_columns())
            .map(|p| {
                if p == child {
                    return f64::NEG_INFINITY;
                }
                let mut family = parents.clone();
                match family.binary_search(&p) {
                    Ok(i) => {
                        family.remove(i);
                    }
                    Err(i) => family.insert(i, p),
                }
                family_score(self.data, child, &family, self.alpha)
            })
            .collect();
        ChildScores { current, toggled }
    }

    fn total(&self) -> f64 {
        self.scores.iter().map(|s| s.current).sum()
    }

    fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.parents[child].binary_search(&parent).is_ok()
    }

    /// Whether `to` is reachable from `from` along directed edges, optionally
    /// ignoring one edge.
    fn reaches(&self, from: usize, to: usize, skip: Option<(usize, usize)>) -> bool {
        let mut seen = vec![false; self.parents.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for &c in &self.children[v] {
                if Some((v, c)) == skip || seen[c] {
                    continue;
                }
                seen[c] = true;
                stack.push(c);
            }
        }
        false
    }

    fn delta(&self, kind: MoveKind, parent: usize, child: usize) -> f64 {
        let toggle = |c: usize, p: usize| self.scores[c].toggled[p] - self.scores[c].current;
        match kind {
            MoveKind::Add | MoveKind::Delete => toggle(child, parent),
            MoveKind::Reverse => toggle(child, parent) + toggle(parent, child),
        }
    }

    fn legal(&self, kind: MoveKind, parent: usize, child: usize, max_indegree: usize) -> bool {
        match kind {
            MoveKind::Add => {
                !self.has_edge(parent, child)
                    && self.parents[child].len() < max_indegree
                    && !self.reaches(child, parent, None)
            }
            MoveKind::Delete => self.has_edge(parent, child),
            MoveKind::Reverse => {
                self.has_edge(parent, child)
                    && self.parents[parent].len() < max_indegree
                    && !self.reaches(parent, child, Some((parent, child)))
            }
        }
    }

    /// Best legal move in scan order (child, parent, kind); ties keep the first.
    fn best_move(&self, max_indegree: usize) -> Option<(MoveKind, usize, usize, f64)> {
        let n = self.parents.len();
        let mut best: Option<(MoveKind, usize, usize, f64)> = None;
        for child in 0..n {
            for parent in 0..n {
                if parent == child {
                    continue;
                }
                for kind in [MoveKind::Add, MoveKind::Delete, MoveKind::Reverse] {
                    let d = self.delta(kind, parent, child);
                    if d <= MIN_IMPROVEMENT || best.is_some_and(|b| d <= b.3) {
                        continue;
                    }
                    if self.legal(kind, parent, child, max_indegree) {
                        best = Some((kind, parent, child, d));
                    }
                }
            }
        }
        best
    }

    fn toggle_edge(&mut self, parent: usize, child: usize) {
        match self.parents[child].binary_search(&parent) {
            Ok(i) => {
                self.parents[child].remove(i);
                self.children[parent].retain(|&c| c != child);
            }
            Err(i) => {
                self.parents[child].insert(i, parent);
                self.children[parent].push(child);
            }
        }
    }

    fn apply(&mut self, kind: MoveKind, parent: usize, child: usize) {
        self.toggle_edge(parent, child);
        let mut dirty = vec![child];
        if kind == MoveKind::Reverse {
            self.toggle_edge(child, parent);
            dirty.push(parent);
        }
        let fresh: Vec<ChildScores> = dirty.par_iter().map(|&c| self.score_child(c)).collect();
        for (c, s) in dirty.into_iter().zip(fresh) {
            self.scores[c] = s;
        }
    }
}

/// Greedy hill climbing from the empty graph over single-edge additions,
/// deletions and reversals, then CPT estimation on the final structure.
pub fn learn_structure(data: &Dataset, config: &LearnConfig) -> Result<LearnOutcome, LearnError> {
    config.validate()?;
    if data.n_rows() == 0 {
        return Err(LearnError::EmptyDataset);
    }
    let mut search = Search::new(data, config.dirichlet_alpha);
    let initial_score = search.total();
    let mut moves = Vec::new();
    for _ in 0..config.max_passes {
        let Some((kind, parent, child, _)) = search.best_move(config.max_indegree) else {
            break;
        };
        search.apply(kind, parent, child);
        moves.push(AcceptedMove {
            kind,
            parent,
            child,
            score: search.total(),
        });
    }
    let score = search.total();
    let network = fit_network(data, &search.parents, config.dirichlet_alpha)?;
    Ok(LearnOutcome {
        network,
        parents: search.parents,
        initial_score,
        score,
        moves,
    })
}

/// Builds a network over the dataset's columns with the given structure and
/// Dirichlet-estimated CPTs. Columns whose spaces have the same kind and
/// values share one space.
pub fn fit_network(data: &Dataset, parents: &[Vec<usize>], alpha: f64) -> Result<BayesianNetwork, LearnError> {
    let mut spaces: Vec<EventSpace> = Vec::new();
    let mut variables = Vec::with_capacity(data.n_columns());
    for col in data.columns() {
        let space = match spaces.iter().position(|s| s.same_shape(&col.space)) {
            Some(i) => i,
            None => {
                let mut space = (*col.space).clone();
                while spaces.iter().any(|s| s.id == space.id) {
                    space.id.push('_');
                }
                spaces.push(space);
                spaces.len() - 1
            }
        };
        variables.push(VariableDecl {
            name: col.name.clone(),
            space,
        });
    }
    let edges = parents
        .iter()
        .enumerate()
        .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
        .collect();
    let cpts = estimate_cpts(data, parents, alpha)
        .into_iter()
        .zip(parents)
        .map(|(rows, ps)| {
            Some(CptDecl {
                parents: ps.clone(),
                rows,
            })
        })
        .collect();
    Ok(BayesianNetwork::from_parts(NetworkParts {
        spaces,
        variables,
        edges,
        cpts,
    })?)
}
