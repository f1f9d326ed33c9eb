mod common;

use proptest::prelude::*;

use pebble_core::constructions::pyramid;
use pebble_core::engine::{measure, validate, Mode, Rules};
use pebble_core::graph::Dag;
use pebble_core::par::Exec;
use pebble_core::solver::{min_space_magic, min_space_standard, SearchBudget};

use common::{random_dag, small_dag};

fn std_space(d: &Dag, mode: Mode) -> usize {
    min_space_standard(d, d.targets(), Rules::new(mode), &SearchBudget::default(), Exec::default()).unwrap().space
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_agree_with_reported_space(d in small_dag(8), par: bool) {
        let mode = if par { Mode::Parallel } else { Mode::Sequential };
        let rules = Rules::new(mode);
        let s = min_space_standard(&d, d.targets(), rules, &SearchBudget::default(), Exec::default()).unwrap();
        prop_assert_eq!(validate(&d, &s.witness, d.targets(), rules), Ok(()));
        prop_assert_eq!(measure(&d, &s.witness, d.targets(), &[], None).unwrap().space, s.space);

        let t = d.targets().len();
        let m = min_space_magic(&d, d.targets(), t, rules, &SearchBudget::default(), Exec::default()).unwrap();
        prop_assert_eq!(validate(&d, &m.witness, d.targets(), rules), Ok(()));
        prop_assert!(m.witness.magic_used() <= t);
        prop_assert_eq!(measure(&d, &m.witness, d.targets(), &[], None).unwrap().magic_space, m.space);
        prop_assert!(m.space <= s.space.min(t));
    }

    #[test]
    fn adding_an_edge_never_helps(n in 3usize..8, seed: u64, pick: (usize, usize)) {
        let d = random_dag(n, seed);
        let (u, v) = {
            let v = 1 + pick.1 % (n - 1);
            (pick.0 % v, v)
        };
        let mut edges = d.edges();
        prop_assume!(!edges.contains(&(u, v)));
        edges.push((u, v));
        let bigger = Dag::from_edges(n, &edges, d.targets().to_vec()).unwrap();
        for mode in [Mode::Sequential, Mode::Parallel] {
            prop_assert!(std_space(&bigger, mode) >= std_space(&d, mode));
        }
    }

    #[test]
    fn search_is_deterministic(d in small_dag(8)) {
        let run = |exec| min_space_standard(&d, d.targets(), Rules::new(Mode::Parallel), &SearchBudget::default(), exec).unwrap();
        let (a, b, c) = (run(Exec::Parallel), run(Exec::Parallel), run(Exec::Sequential));
        prop_assert_eq!(&a.witness, &b.witness);
        prop_assert_eq!(a.space, c.space);
        prop_assert_eq!(&a.witness, &c.witness);
    }
}

#[test]
fn sequential_and_parallel_agree_on_pyramids() {
    for h in 1..=4 {
        let d = pyramid(h).unwrap();
        assert_eq!(std_space(&d, Mode::Sequential), std_space(&d, Mode::Parallel));
        let magic = |mode| {
            min_space_magic(&d, d.targets(), 1, Rules::new(mode), &SearchBudget::default(), Exec::default()).unwrap().space
        };
        assert_eq!(magic(Mode::Sequential), magic(Mode::Parallel));
    }
}
