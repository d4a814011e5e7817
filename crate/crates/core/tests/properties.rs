mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use approx::assert_abs_diff_eq;
use evidiff_core::diff::{filter_top, inference_diff, kl, rank, relevance, FilterConfig};
use evidiff_core::inference::{posterior_all, Engine};
use evidiff_core::layout::{LayeredLayout, LayoutConfig};
use evidiff_core::learning::Dataset;
use evidiff_core::model::{abbreviate, parse_network, serialize_network, EventSpace};
use evidiff_core::synth::{forward_sample, random_network, SynthConfig};
use evidiff_core::view::{assign_colors, hue_distance, Palette};
use evidiff_core::{BayesianNetwork, Distribution, EvidenceSet, VarId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn network(seed: u64, max_vars: usize) -> BayesianNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_network(
        &SynthConfig {
            variables: rng.gen_range(1..=max_vars),
            edge_probability: rng.gen_range(0.1..0.7),
            ..SynthConfig::default()
        },
        &mut rng,
    )
}

fn evidence(net: &BayesianNetwork, seed: u64) -> EvidenceSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = EvidenceSet::empty(net.len());
    for i in 0..net.len() {
        if rng.gen_bool(0.25) {
            e = e.with(VarId(i), Some(rng.gen_range(0..net.variable(VarId(i)).cardinality())));
        }
    }
    e
}

fn dist_pair() -> impl Strategy<Value = (Distribution, Distribution)> {
    (2usize..6).prop_flat_map(|k| {
        let m = prop::collection::vec(0.0..1.0f64, k);
        (m.clone(), m).prop_filter_map("all zero", move |(a, b)| {
            let space = Arc::new(EventSpace::categorical(
                "s",
                &(0..k).map(|i| format!("v{i}")).collect::<Vec<_>>(),
            ));
            let norm = |w: Vec<f64>| {
                let t: f64 = w.iter().sum();
                (t > 0.0).then(|| w.iter().map(|x| x / t).collect::<Vec<_>>())
            };
            Some((
                Distribution::new(space.clone(), norm(a)?).ok()?,
                Distribution::new(space, norm(b)?).ok()?,
            ))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posteriors_match_enumeration(seed in any::<u64>(), eseed in any::<u64>()) {
        let net = network(seed, 7);
        let e = evidence(&net, eseed);
        let expected = common::enumerate(&net, &e).unwrap();
        let got = posterior_all(&net, &e).unwrap();
        for (i, (p, q)) in got.posteriors.iter().zip(&expected).enumerate() {
            let sum: f64 = p.masses().iter().sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
            for (a, b) in p.masses().iter().zip(q) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-9);
            }
            if let Some(o) = e.get(VarId(i)) {
                prop_assert_eq!(p.mass(o), 1.0);
            }
        }
    }

    #[test]
    fn elimination_order_does_not_change_posteriors(seed in any::<u64>(), eseed in any::<u64>(), shuffle in any::<u64>()) {
        let net = network(seed, 7);
        let e = evidence(&net, eseed);
        let engine = Engine::new(&net, &e).unwrap();
        let mut order = engine.order().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        for v in 0..net.len() {
            let a = engine.posterior(VarId(v)).unwrap();
            let without: Vec<VarId> = order.iter().copied().filter(|&u| u != VarId(v)).collect();
            let b = engine.posterior_with_order(VarId(v), &without).unwrap();
            for (x, y) in a.masses().iter().zip(b.masses()) {
                assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn kl_is_nonnegative_and_zero_on_itself((p, q) in dist_pair()) {
        prop_assert!(kl(&p, &q).unwrap() >= 0.0);
        prop_assert_eq!(kl(&p, &p).unwrap(), 0.0);
        prop_assert_eq!(relevance(&p, &q).unwrap(), relevance(&q, &p).unwrap());
        prop_assert!(relevance(&p, &q).unwrap().is_finite());
    }

    #[test]
    fn swapping_sets_keeps_relevances(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let net = network(seed, 8);
        let (e1, e2) = (evidence(&net, a), evidence(&net, b));
        let (Ok(d), Ok(s)) = (inference_diff(&net, &e1, &e2), inference_diff(&net, &e2, &e1)) else {
            return Ok(());
        };
        let (r1, r2) = (rank(&d), rank(&s));
        prop_assert_eq!(r1.entries, r2.entries);
        prop_assert_eq!(d.swapped(), s);
    }

    #[test]
    fn filtering_nests_and_keeps_evidence(seed in any::<u64>(), c1 in 0.0..=100.0f64, c2 in 0.0..=100.0f64) {
        let net = network(seed, 12);
        let e2 = evidence(&net, seed ^ 1);
        let diff = inference_diff(&net, &EvidenceSet::empty(net.len()), &e2).unwrap();
        let ranking = rank(&diff);
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let small = filter_top(&ranking, &FilterConfig::new(lo).unwrap());
        let large = filter_top(&ranking, &FilterConfig::new(hi).unwrap());
        prop_assert!(small.retained.is_subset(&large.retained));
        for (v, _) in e2.observed() {
            prop_assert!(small.contains(v));
        }
        let expected = ((lo / 100.0) * ranking.eligible_count as f64).floor() as usize;
        prop_assert_eq!(small.top.len(), expected);
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let net = network(seed, 10);
        let text = serialize_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(serialize_network(&back), text);
        prop_assert_eq!(back.len(), net.len());
    }

    #[test]
    fn csv_round_trips(seed in any::<u64>()) {
        let net = network(seed, 6);
        let data = forward_sample(&net, 40, &mut ChaCha8Rng::seed_from_u64(seed));
        let text = data.to_csv().unwrap();
        let back = Dataset::from_csv(text.as_bytes(), None).unwrap();
        prop_assert_eq!(back.n_rows(), 40);
        prop_assert_eq!(back.to_csv().unwrap(), text);
    }

    #[test]
    fn styling_is_idempotent_and_keeps_order(seed in any::<u64>(), keep in prop::collection::vec(any::<bool>(), 20)) {
        let net = network(seed, 20);
        let layout = LayeredLayout::new(&net, LayoutConfig::default()).unwrap();
        let relevant: BTreeSet<VarId> = (0..net.len()).filter(|&i| keep[i]).map(VarId).collect();
        let once = layout.apply_relevance_styling(&relevant, &[]);
        let twice = once.apply_relevance_styling(&relevant, &[]);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.reading_order(), layout.reading_order());
        for n in once.nodes() {
            let base = layout.node(n.var);
            prop_assert_eq!((n.layer, n.order), (base.layer, base.order));
            prop_assert_eq!(n.dimmed, !relevant.contains(&n.var));
        }
    }

    #[test]
    fn abbreviations_are_unique(names in prop::collection::btree_set("[A-Za-z][a-z]{0,6}", 1..30)) {
        let names: Vec<String> = names.into_iter().collect();
        let abbrevs = abbreviate(&names).unwrap();
        let unique: BTreeSet<String> = abbrevs.iter().map(|a| a.ascii()).collect();
        prop_assert_eq!(unique.len(), names.len());
        for (a, n) in abbrevs.iter().zip(&names) {
            prop_assert_eq!(a.letter, n.chars().next().unwrap().to_ascii_uppercase());
        }
    }

    #[test]
    fn categorical_neighbours_are_far_apart(k in 1usize..12) {
        let values: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        let colors = assign_colors(&EventSpace::categorical("c", &values), &Palette::default());
        prop_assert_eq!(colors.len(), k);
        for w in colors.windows(2) {
            prop_assert!(hue_distance(w[0].hue(), w[1].hue()) >= 100.0);
        }
    }
}
