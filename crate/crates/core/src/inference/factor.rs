use crate::model::{BayesianNetwork, Cpt, EvidenceSet, VarId};

/// Entries below this trigger a rescale of the whole table.
pub(crate) const UNDERFLOW_GUARD: f64 = 1e-300;

/// A nonnegative table over a set of variables. The scope is kept sorted by
/// variable index and the table is laid out mixed-radix, last variable fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<VarId>,
    cards: Vec<usize>,
    table: Vec<f64>,
}

impl Factor {
    pub fn scalar(value: f64) -> Self {
        Factor {
            scope: Vec::new(),
            cards: Vec::new(),
            table: vec![value],
        }
    }

    pub fn new(scope: Vec<VarId>, cards: Vec<usize>, table: Vec<f64>) -> Self {
        debug_assert!(scope.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(cards.iter().product::<usize>(), table.len());
        Factor { scope, cards, table }
    }

    /// The CPT of one variable restricted to the evidence: observed family
    /// members are fixed and drop out of the scope.
    pub fn from_cpt(net: &BayesianNetwork, cpt: &Cpt, evidence: &EvidenceSet) -> Self {
        let mut family: Vec<VarId> = cpt.parents.clone();
        family.push(cpt.variable);

        let mut scope: Vec<VarId> = family
            .iter()
            .copied()
            .filter(|&v| !evidence.is_observed(v))
            .collect();
        scope.sort_unstable();
        scope.dedup();
        let cards: Vec<usize> = scope.iter().map(|&v| net.variable(v).cardinality()).collect();
        let size: usize = cards.iter().product();

        // where each family member's ordinal comes from
        let source: Vec<Result<usize, usize>> = family
            .iter()
            .map(|&v| match evidence.get(v) {
                Some(o) => Err(o),
                None => Ok(scope.binary_search(&v).expect("unobserved member in scope")),
            })
            .collect();

        let mut assignment = vec![0usize; scope.len()];
        let mut parent_ordinals = vec![0usize; cpt.parents.len()];
        let mut table = Vec::with_capacity(size);
        for _ in 0..size {
            for (slot, src) in parent_ordinals.iter_mut().zip(&source) {
                *slot = match *src {
                    Ok(pos) => assignment[pos],
                    Err(o) => o,
                };
            }
            let value = match source[source.len() - 1] {
                Ok(pos) => assignment[pos],
                Err(o) => o,
            };
            table.push(cpt.prob(value, &parent_ordinals).expect("ordinals in range"));
            increment(&mut assignment, &cards);
        }
        Factor { scope, cards, table }
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.scope.binary_search(&var).is_ok()
    }

    pub fn product(&self, other: &Factor) -> Factor {
        let mut scope = self.scope.clone();
        scope.extend_from_slice(&other.scope);
        scope.sort_unstable();
        scope.dedup();
        let cards: Vec<usize> = scope
            .iter()
            .map(|v| {
                self.card_of(*v)
                    .or_else(|| other.card_of(*v))
                    .expect("variable in one operand")
            })
            .collect();

        let left = self.strides_over(&scope);
        let right = other.strides_over(&scope);
        let size: usize = cards.iter().product();
        let mut table = Vec::with_capacity(size);
        let mut assignment = vec![0usize; scope.len()];
        // operands that would underflow together are brought up to max 1 first
        let (ma, mb) = (self.max(), other.max());
        let (sa, sb) = if ma > 0.0 && mb > 0.0 && ma * mb < UNDERFLOW_GUARD {
            (1.0 / ma, 1.0 / mb)
        } else {
            (1.0, 1.0)
        };
        let (mut li, mut ri) = (0usize, 0usize);
        for _ in 0..size {
            table.push((self.table[li] * sa) * (other.table[ri] * sb));
            // odometer step, keeping both operand indices in sync
            for k in (0..scope.len()).rev() {
                assignment[k] += 1;
                li += left[k];
                ri += right[k];
                if assignment[k] < cards[k] {
                    break;
                }
                li -= left[k] * cards[k];
                ri -= right[k] * cards[k];
                assignment[k] = 0;
            }
        }
        let mut out = Factor { scope, cards, table };
        out.guard_underflow();
        out
    }

    /// Marginalizes `var` away. Returns a clone when `var` is not in scope.
    pub fn sum_out(&self, var: VarId) -> Factor {
        let Ok(pos) = self.scope.binary_search(&var) else {
            return self.clone();
        };
        let card = self.cards[pos];
        let inner: usize = self.cards[pos + 1..].iter().product();
        let mut scope = self.scope.clone();
        scope.remove(pos);
        let mut cards = self.cards.clone();
        cards.remove(pos);
        let mut table = vec![0.0; self.table.len() / card];
        for (i, &x) in self.table.iter().enumerate() {
            let outer = i / (inner * card);
            table[outer * inner + i % inner] += x;
        }
        let mut out = Factor { scope, cards, table };
        out.guard_underflow();
        out
    }

    pub fn total(&self) -> f64 {
        self.table.iter().sum()
    }

    fn card_of(&self, var: VarId) -> Option<usize> {
        self.scope.binary_search(&var).ok().map(|i| self.cards[i])
    }

    /// Stride of each `union` variable inside this factor's table (0 if absent).
    fn strides_over(&self, union: &[VarId]) -> Vec<usize> {
        let mut own = vec![0usize; self.scope.len()];
        let mut s = 1;
        for k in (0..self.scope.len()).rev() {
            own[k] = s;
            s *= self.cards[k];
        }
        union
            .iter()
            .map(|v| self.scope.binary_search(v).map(|i| own[i]).unwrap_or(0))
            .collect()
    }

    /// Rescales so the largest entry is 1 when every entry has become tiny.
    /// Only ratios matter downstream; zero tables stay zero.
    fn max(&self) -> f64 {
        self.table.iter().copied().fold(0.0, f64::max)
    }

    fn guard_underflow(&mut self) {
        let max = self.max();
        if max > 0.0 && max < UNDERFLOW_GUARD {
            for x in &mut self.table {
                *x /= max;
            }
        }
    }
}

/// Advances a mixed-radix counter, last position fastest.
pub(crate) fn increment(assignment: &mut [usize], cards: &[usize]) {
    for k in (0..assignment.len()).rev() {
        assignment[k] += 1;
        if assignment[k] < cards[k] {
            return;
        }
        assignment[k] = 0;
    }
}
