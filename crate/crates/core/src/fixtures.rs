//! Small hand-built networks used by tests, examples and the CLI demo.

use crate::model::{BayesianNetwork, CptDecl, EventSpace, NetworkParts, VariableDecl};

fn build(spaces: Vec<EventSpace>, vars: &[(&str, usize)], cpts: Vec<(Vec<usize>, Vec<Vec<f64>>)>) -> BayesianNetwork {
    let edges = cpts
        .iter()
        .enumerate()
        .flat_map(|(child, (parents, _))| parents.iter().map(move |&p| (p, child)))
        .collect();
    BayesianNetwork::from_parts(NetworkParts {
        spaces,
        variables: vars
            .iter()
            .map(|&(name, space)| VariableDecl {
                name: name.to_owned(),
                space,
            })
            .collect(),
        edges,
        cpts: cpts
            .into_iter()
            .map(|(parents, rows)| Some(CptDecl { parents, rows }))
            .collect(),
    })
    .expect("fixture networks are valid")
}

fn boolean() -> EventSpace {
    EventSpace::categorical("bool", &["True", "False"])
}

/// A→B with P(A=t)=0.3, P(B=t|A=t)=0.9, P(B=t|A=f)=0.2.
pub fn two_var() -> BayesianNetwork {
    build(
        vec![boolean()],
        &[("A", 0), ("B", 0)],
        vec![
            (vec![], vec![vec![0.3, 0.7]]),
            (vec![0], vec![vec![0.9, 0.1], vec![0.2, 0.8]]),
        ],
    )
}

/// Chain X→Y→Z over {x0,x1}, {y0,y1,y2}, {z,notz}; strictly positive CPTs.
pub fn chain3() -> BayesianNetwork {
    build(
        vec![
            EventSpace::categorical("xs", &["x0", "x1"]),
            EventSpace::ordered("ys", &["low", "mid", "high"]),
            EventSpace::categorical("zs", &["z", "notz"]),
        ],
        &[("X", 0), ("Y", 1), ("Z", 2)],
        vec![
            (vec![], vec![vec![0.35, 0.65]]),
            (vec![0], vec![vec![0.6, 0.3, 0.1], vec![0.15, 0.25, 0.6]]),
            (vec![1], vec![vec![0.8, 0.2], vec![0.45, 0.55], vec![0.1, 0.9]]),
        ],
    )
}

/// Four-variable excerpt of the classic chest-clinic network:
/// Age→Smoker, Age→Cancer, Smoker→Cancer, VisitAsia isolated.
pub fn asia4() -> BayesianNetwork {
    build(
        vec![EventSpace::ordered("age", &["Young", "Old"]), boolean()],
        &[("Age", 0), ("VisitAsia", 1), ("Smoker", 1), ("Cancer", 1)],
        vec![
            (vec![], vec![vec![0.6, 0.4]]),
            (vec![], vec![vec![0.01, 0.99]]),
            (vec![0], vec![vec![0.3, 0.7], vec![0.5, 0.5]]),
            (
                vec![0, 2],
                vec![
                    vec![0.02, 0.98],
                    vec![0.005, 0.995],
                    vec![0.15, 0.85],
                    vec![0.03, 0.97],
                ],
            ),
        ],
    )
}

/// The eight-variable chest-clinic network (Asia).
pub fn asia8() -> BayesianNetwork {
    build(
        vec![EventSpace::categorical("yesno", &["yes", "no"])],
        &[
            ("Asia", 0),
            ("Tuberculosis", 0),
            ("Smoking", 0),
            ("LungCancer", 0),
            ("TbOrCancer", 0),
            ("Xray", 0),
            ("Bronchitis", 0),
            ("Dyspnoea", 0),
        ],
        vec![
            (vec![], vec![vec![0.01, 0.99]]),
            (vec![0], vec![vec![0.05, 0.95], vec![0.01, 0.99]]),
            (vec![], vec![vec![0.5, 0.5]]),
            (vec![2], vec![vec![0.1, 0.9], vec![0.01, 0.99]]),
            (
                vec![1, 3],
                vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            ),
            (vec![4], vec![vec![0.98, 0.02], vec![0.05, 0.95]]),
            (vec![2], vec![vec![0.6, 0.4], vec![0.3, 0.7]]),
            (
                vec![4, 6],
                vec![vec![0.9, 0.1], vec![0.7, 0.3], vec![0.8, 0.2], vec![0.1, 0.9]],
            ),
        ],
    )
}
