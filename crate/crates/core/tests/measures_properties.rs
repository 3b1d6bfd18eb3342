use approx::assert_abs_diff_eq;
use gwtsallis::grids;
use gwtsallis::measures::{
    concurrence_pure, f_q, gw_tangle, gw_tsallis, tsallis_entanglement_pure, tsallis_entropy, Q_WINDOW_MAX,
    Q_WINDOW_MIN,
};
use gwtsallis::sweep::{enumerate_partitions, random_gw};
use gwtsallis::{Bipartition, GwState};
use proptest::prelude::*;

fn gw_strategy() -> impl Strategy<Value = GwState> {
    (3usize..=5, 2usize..=4, any::<u64>()).prop_map(|(n, d, seed)| random_gw(n, d, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pure_tsallis_matches_closed_form(g in gw_strategy(), q in Q_WINDOW_MIN..Q_WINDOW_MAX) {
        let s = g.to_sparse();
        let all: Vec<usize> = (0..g.n()).collect();
        for p in 0..g.n() {
            let cut = Bipartition::split_off(vec![p], g.n()).unwrap();
            let direct = tsallis_entanglement_pure(&s, &cut, q).unwrap();
            let closed = gw_tsallis(&g, &all, &[p], q, false).unwrap();
            prop_assert!((direct - closed).abs() < 1e-9, "p={p} q={q}: {direct} vs {closed}");
        }
    }

    #[test]
    fn pure_concurrence_squares_to_tangle(g in gw_strategy()) {
        let s = g.to_sparse();
        let all: Vec<usize> = (0..g.n()).collect();
        for p in 0..g.n() {
            let c = concurrence_pure(&s, &Bipartition::split_off(vec![p], g.n()).unwrap()).unwrap();
            prop_assert!((c * c - gw_tangle(&g, &all, &[p]).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn tangle_is_additive_over_any_partition_of_the_rest(g in gw_strategy()) {
        let all: Vec<usize> = (0..g.n()).collect();
        let rest: Vec<usize> = all[1..].to_vec();
        let whole = gw_tangle(&g, &all, &[0]).unwrap();
        for part in enumerate_partitions(&rest, None).unwrap() {
            let sum: f64 = part
                .blocks()
                .iter()
                .map(|b| {
                    let mut pair = vec![0];
                    pair.extend(b);
                    gw_tangle(&g, &pair, &[0]).unwrap()
                })
                .sum();
            prop_assert!((whole - sum).abs() < 1e-12, "{part}: {whole} vs {sum}");
        }
    }

    #[test]
    fn tsallis_is_continuous_through_q_one(g in gw_strategy()) {
        let eps = 1e-4;
        let s = g.to_sparse();
        let rho = s.reduced_density(&[0, 1]).unwrap();
        let at_one = tsallis_entropy(&rho, 1.0).unwrap();
        let near = tsallis_entropy(&rho, 1.0 + eps).unwrap();
        prop_assert!((near - at_one).abs() <= 10.0 * eps * rho.dim() as f64);
    }
}

#[test]
fn linear_identities_on_fine_grid() {
    let check = grids::linear_identities(1001).unwrap();
    assert_eq!(check.points, 2002);
    assert!(check.passed(), "{check}");
}

#[test]
fn monotone_concave_grid() {
    let (mono, concave) = grids::monotone_and_concave(50, 200).unwrap();
    assert!(mono.passed(), "{mono}");
    assert!(concave.passed(), "{concave}");
}

#[test]
fn square_argument_grid() {
    let (convex, mono) = grids::square_argument(50, 200).unwrap();
    assert!(convex.passed(), "{convex}");
    assert!(mono.passed(), "{mono}");
}

#[test]
fn f_q_endpoints() {
    for q in [0.7, 1.0, 2.0, 3.0, 4.3] {
        assert_abs_diff_eq!(f_q(0.0, q).unwrap(), 0.0, epsilon = 1e-15);
    }
    // A maximally entangled qubit pair has T_q = (1 - 2^{1-q}) / (q - 1).
    for q in [0.7, 2.0, 3.5] {
        assert_abs_diff_eq!(
            f_q(1.0, q).unwrap(),
            (1.0 - 2f64.powf(1.0 - q)) / (q - 1.0),
            epsilon = 1e-14
        );
    }
    assert_abs_diff_eq!(f_q(1.0, 1.0).unwrap(), std::f64::consts::LN_2, epsilon = 1e-15);
}

#[test]
fn closed_form_rejects_out_of_window_q() {
    let g = GwState::uniform_w(3).unwrap();
    assert!(gw_tsallis(&g, &[0, 1, 2], &[0], 5.0, false).is_err());
    assert!(gw_tsallis(&g, &[0, 1, 2], &[0], 5.0, true).is_ok());
    assert!(gw_tangle(&g, &[0, 1], &[2]).is_err());
    assert_eq!(gw_tangle(&g, &[0, 1], &[0, 1]).unwrap(), 0.0);
}
