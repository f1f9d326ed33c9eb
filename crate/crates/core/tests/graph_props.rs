mod common;

use proptest::prelude::*;

use pebble_core::constructions::{
    cc_alpha_crossover, composite_binary_tree, counts, cylinder, layer_transform, pyramid, time_optimal, Exponent,
};
use pebble_core::graph::Dag;

use common::small_dag;

fn check_basic(d: &Dag) {
    d.to_parts().validate().unwrap();
    assert!(d.max_in_degree() <= 2);
    for v in 0..d.node_count() {
        assert!(d.preds(v).windows(2).all(|w| w[0] < w[1]), "preds of {v} not ascending");
    }
    let bytes = d.serialize();
    assert_eq!(&Dag::deserialize(&bytes).unwrap(), d);
}

proptest! {
    #[test]
    fn random_dags_round_trip(d in small_dag(24)) {
        check_basic(&d);
        prop_assert_eq!(Dag::deserialize(&d.serialize()).unwrap().serialize(), d.serialize());
    }

    #[test]
    fn preds_are_ascending_after_parsing(d in small_dag(16)) {
        // edges written in reverse still come back ascending
        let mut text = String::from_utf8(d.serialize()).unwrap();
        let (head, body) = text.split_at(text.match_indices('\n').nth(2).map_or(text.len(), |(i, _)| i + 1));
        let mut lines: Vec<&str> = body.lines().collect();
        lines.reverse();
        text = format!("{head}{}", lines.iter().map(|l| format!("{l}\n")).collect::<String>());
        let back = Dag::deserialize(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &d);
        for v in 0..back.node_count() {
            prop_assert!(back.preds(v).windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn pyramids_and_cylinders(h in 1usize..9) {
        let p = pyramid(h).unwrap();
        check_basic(&p);
        prop_assert_eq!(p.node_count(), counts::pyramid(h));
        prop_assert_eq!(p.targets(), &[p.node_count() - 1]);
        prop_assert_eq!(p.serialize(), pyramid(h).unwrap().serialize());

        let c = cylinder(h).unwrap();
        prop_assert_eq!(c.node_count(), counts::cylinder(h));
        prop_assert_eq!(c.targets().len(), h);
        prop_assert_eq!(c.serialize(), cylinder(h).unwrap().serialize());
        if h >= 2 {
            check_basic(&c);
            // every target tops a height-h pyramid: h ancestors on row h
            for &t in c.targets() {
                let base = c.ancestors(t).into_iter().filter(|&v| v / h == h).count();
                prop_assert_eq!(base, h);
            }
        }
    }

    #[test]
    fn composite_trees(h in 2usize..6, s in 1usize..6) {
        let d = composite_binary_tree(h, s).unwrap();
        check_basic(&d);
        prop_assert_eq!(d.node_count(), counts::composite_binary_tree(h, s));
        prop_assert_eq!(d.targets().len(), s);
    }

    #[test]
    fn time_optimal_and_layers(s in 2usize..7, c1 in 1usize..5, copies in 1usize..5) {
        let t = time_optimal(s, c1.max(2)).unwrap();
        check_basic(&t.dag);
        prop_assert_eq!(t.dag.targets().len(), 1);
        let g = layer_transform(&t.dag, copies, &t.shortcut_set).unwrap();
        check_basic(&g);
        let x = &t.shortcut_set;
        let closure = t.dag.descendants_of(x).into_iter().filter(|v| !x.contains(v)).count() + x.len();
        prop_assert_eq!(g.node_count(), t.dag.node_count() + (copies - 1) * closure);
        prop_assert_eq!(g.targets().len(), copies);
    }

    #[test]
    fn crossover_family(n in 16u64..400) {
        let third = Exponent::new(2, 3);
        if let Ok(x) = cc_alpha_crossover(n, Exponent::new(1, 4), third, third) {
            check_basic(&x.dag);
            prop_assert!(x.dag.node_count() as u64 <= n);
            prop_assert_eq!(x.a_len + x.c_len, x.dag.node_count());
            prop_assert_eq!(x.dag.targets(), &[x.dag.node_count() - 1]);
        }
    }
}
