use egodyn_core::balancer::{balance, max_deviation, BalanceState, PoolClip, Source, SourceCaps, Targets};
use proptest::prelude::*;

fn optimal(pool: &[PoolClip], n: usize, layout: &[usize], targets: &Targets) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << pool.len()) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let chosen: Vec<usize> = (0..pool.len()).filter(|i| mask & (1 << i) != 0).collect();
        let state = BalanceState::from_selection(pool, &chosen, layout);
        best = best.min(max_deviation(&state, targets));
    }
    best
}

/// Columns of `n` balanced classes, shuffled by `perm`, padded with `extra`.
fn pool(layout: &[usize], n: usize, perms: &[Vec<usize>], extra: &[Vec<usize>]) -> Vec<PoolClip> {
    let size = n + extra.len();
    (0..size)
        .map(|i| PoolClip {
            clip_id: format!("c{i}"),
            source: Source::Real,
            answers: layout
                .iter()
                .enumerate()
                .map(|(q, &k)| if i < n { perms[q][i] % k } else { extra[i - n][q] % k })
                .collect(),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn greedy_is_within_one_clip_of_optimal(
        half in 1usize..=3,
        perms in prop::collection::vec(Just((0..6).collect::<Vec<usize>>()).prop_shuffle(), 3),
        extra in prop::collection::vec(prop::collection::vec(0usize..4, 3), 0..=6),
    ) {
        let layout = [2, 2, 2];
        let n = 2 * half;
        let perms: Vec<Vec<usize>> = perms.into_iter().map(|p| p.into_iter().filter(|&i| i < n).collect()).collect();
        let pool = pool(&layout, n, &perms, &extra);
        let targets = Targets::uniform(&layout);
        let best = optimal(&pool, n, &layout, &targets);
        prop_assert!(best < 1e-12);
        let got = balance(&pool, n, SourceCaps::default(), &targets).unwrap();
        prop_assert!(max_deviation(&got.state, &targets) <= best + 1.0 / n as f64 + 1e-12);
    }
}
