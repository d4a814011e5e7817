//! Learning networks from complete discrete data: Dirichlet-smoothed CPT
//! estimation and greedy, in-degree-limited structure search.

mod dataset;
mod score;
mod search;

use thiserror::Error;

pub use dataset::{Column, Dataset, SpaceDeclarations};
pub use score::{estimate_cpt, estimate_cpts, family_counts, family_score, network_score};
pub use search::{
    fit_network, learn_structure, AcceptedMove, LearnConfig, LearnOutcome, MoveKind, MIN_IMPROVEMENT,
};

use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("invalid learning configuration: {0}")]
    Config(String),
    #[error("malformed dataset: {0}")]
    Shape(String),
    #[error("row {row} has no value for column {column:?}")]
    MissingCell { row: usize, column: String },
    #[error("value {value:?} in column {column:?} is not in its declared space")]
    ValueNotInSpace { column: String, value: String },
    #[error("column refers to undeclared space {0:?}")]
    UnknownSpace(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EventSpace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn pair_dataset(n: usize, agree: f64, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = Arc::new(EventSpace::categorical("b", &["t", "f"]));
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for _ in 0..n {
            let x: u32 = rng.gen_range(0..2);
            let same = rng.gen_bool(agree);
            a.push(x);
            b.push(if same { x } else { 1 - x });
        }
        let col = |name: &str| Column {
            name: name.into(),
            space: space.clone(),
        };
        Dataset::new(vec![col("A"), col("B")], vec![a, b]).unwrap()
    }

    #[test]
    fn independent_columns_stay_disconnected() {
        let data = pair_dataset(1000, 0.5, 11);
        // oracle: scoring both candidate structures directly
        let empty = network_score(&data, &[vec![], vec![]], 1.0);
        let a_to_b = network_score(&data, &[vec![], vec![0]], 1.0);
        let b_to_a = network_score(&data, &[vec![1], vec![]], 1.0);
        assert!(empty > a_to_b && empty > b_to_a);

        let outcome = learn_structure(&data, &LearnConfig::default()).unwrap();
        assert_eq!(outcome.parents, vec![Vec::<usize>::new(), vec![]]);
        assert!(outcome.moves.is_empty());
        assert!((outcome.score - empty).abs() < 1e-9);
    }

    #[test]
    fn dependent_pair_gets_one_edge() {
        let data = pair_dataset(1000, 0.95, 5);
        let empty = network_score(&data, &[vec![], vec![]], 1.0);
        let a_to_b = network_score(&data, &[vec![], vec![0]], 1.0);
        assert!(a_to_b > empty);

        let outcome = learn_structure(&data, &LearnConfig::default()).unwrap();
        let edges: usize = outcome.parents.iter().map(Vec::len).sum();
        assert_eq!(edges, 1);
        assert_eq!(outcome.moves.len(), 1);
        let net = &outcome.network;
        assert_eq!(net.edges().count(), 1);
        assert!(net.validate().is_empty());
    }

    #[test]
    fn config_and_input_errors() {
        let data = pair_dataset(10, 0.5, 1);
        let bad = LearnConfig {
            max_indegree: 0,
            ..LearnConfig::default()
        };
        assert!(matches!(learn_structure(&data, &bad), Err(LearnError::Config(_))));
        let bad_alpha = LearnConfig {
            dirichlet_alpha: 0.0,
            ..LearnConfig::default()
        };
        assert!(learn_structure(&data, &bad_alpha).is_err());
        assert!(matches!(
            learn_structure(&data.empty_like(), &LearnConfig::default()),
            Err(LearnError::EmptyDataset)
        ));
    }

    #[test]
    fn learned_cpts_are_strictly_positive() {
        let data = pair_dataset(50, 1.0, 3);
        let outcome = learn_structure(&data, &LearnConfig::default()).unwrap();
        for cpt in outcome.network.cpts() {
            for row in cpt.rows() {
                assert!(row.iter().all(|&p| p > 0.0));
                assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            }
        }
    }
}
