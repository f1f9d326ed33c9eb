//! Locating the α where two strategies swap cumulative-cost order.

use crate::engine::{pcc_from_histogram, size_histogram, Alpha, Pcc, PebblingStrategy};

#[derive(Debug, Clone)]
pub struct CrossoverReport {
    /// Exact pcc at α = 1 for (first, second).
    pub at_one: (Pcc, Pcc),
    /// Smallest integer α where the exact order is reversed.
    pub first_reversed_int: Option<u32>,
    /// Bisected sign change of pcc(first) − pcc(second), if any.
    pub alpha: Option<f64>,
}

/// Compares `first` and `second` at integer α = 1..=`max_alpha` with exact
/// arithmetic. If `first` costs more at α = 1 and less at some later
/// integer, the sign change is then bisected in floating point to 1e-9.
pub fn crossover_alpha(first: &PebblingStrategy, second: &PebblingStrategy, max_alpha: u32) -> CrossoverReport {
    let (h1, h2) = (size_histogram(first), size_histogram(second));
    let exact = |h: &[usize], a: u32| match pcc_from_histogram(h, Alpha::Int(a), None) {
        Pcc::Exact(v) => v,
        Pcc::Approx(_) => unreachable!("integer alpha is exact"),
    };
    let at_one = (Pcc::Exact(exact(&h1, 1)), Pcc::Exact(exact(&h2, 1)));
    let starts_above = exact(&h1, 1) > exact(&h2, 1);
    let first_reversed_int =
        (2..=max_alpha).find(|&a| (exact(&h1, a) > exact(&h2, a)) != starts_above && exact(&h1, a) != exact(&h2, a));
    let diff = |a: f64| {
        let f = |h: &[usize]| pcc_from_histogram(h, Alpha::Real(a), None).to_f64();
        f(&h1) - f(&h2)
    };
    let alpha = first_reversed_int.map(|hi| {
        let (mut lo, mut hi) = (f64::from(hi - 1), f64::from(hi));
        if diff(lo) == 0.0 {
            return lo;
        }
        let sign_lo = diff(lo) > 0.0;
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if (diff(mid) > 0.0) == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    });
    CrossoverReport { at_one, first_reversed_int, alpha }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_crossover() {
        // first: eight steps of one pebble; second: two steps of two pebbles
        let first = PebblingStrategy::standard(1, &vec![vec![0]; 8]);
        let second = PebblingStrategy::standard(2, &[vec![0, 1], vec![0, 1]]);
        let r = crossover_alpha(&first, &second, 10);
        // 8 vs 2·2^α: equal at α = 2
        assert_eq!(r.first_reversed_int, Some(3));
        assert!((r.alpha.unwrap() - 2.0).abs() < 1e-6);
    }
}
