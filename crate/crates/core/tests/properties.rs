mod common;

use proptest::prelude::*;
use rand::Rng;
use qpe_core::bayes::{classical_solve_evidence, classical_update, fls_update, random_agreeing_effect, reconstruct_effect};
use qpe_core::channel::channel_qpe_leq;
use qpe_core::divergence::{max_divergence, renyi_divergence, renyi_entropy, von_neumann_entropy};
use qpe_core::domain::depolarize;
use qpe_core::io::MatrixDocument;
use qpe_core::oracle::{diagonal_order_oracle, psd_probe};
use qpe_core::orders::classical_pe_leq;
use qpe_core::random::{random_channel, random_hermitian, random_probability_vector, random_state, seeded};
use qpe_core::{qpe_leq, Alpha, Channel, DensityMatrix, HermitianMatrix, ProbabilityVector, Subsystem, ToleranceConfig};

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn dim_seed() -> impl Strategy<Value = (usize, u64)> {
    (2usize..=5, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn order_is_reflexive_and_has_bottom((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rank = 1 + (seed as usize) % dim;
        let rho = random_state(dim, rank, &mut rng).unwrap();
        prop_assert!(qpe_leq(&rho, &rho, &cfg).unwrap().holds());
        prop_assert!(qpe_leq(&DensityMatrix::maximally_mixed(dim), &rho, &cfg).unwrap().holds());
    }

    #[test]
    fn order_matches_cholesky_oracle((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rho = random_state(dim, dim, &mut rng).unwrap();
        let sigma = if seed % 2 == 0 {
            fls_update(&rho, &random_agreeing_effect(&rho, &mut rng, &cfg), &cfg).unwrap()
        } else {
            random_state(dim, dim, &mut rng).unwrap()
        };
        let v = qpe_leq(&rho, &sigma, &cfg).unwrap();
        if !v.is_marginal() {
            prop_assert_eq!(v.holds(), common::qpe_holds(&rho, &sigma, 1e-9));
        }
    }

    #[test]
    fn clear_verdicts_survive_small_perturbations((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rho = random_state(dim, dim, &mut rng).unwrap();
        let sigma = random_state(dim, dim, &mut rng).unwrap();
        let v = qpe_leq(&rho, &sigma, &cfg).unwrap();
        prop_assume!(v.slack.abs() > 1e-6);
        let nudge = |s: &DensityMatrix, rng: &mut _| {
            let m = s.matrix() + &random_hermitian(dim, rng).scale(1e-10);
            DensityMatrix::normalized(m, &cfg).unwrap()
        };
        let (a, b) = (nudge(&rho, &mut rng), nudge(&sigma, &mut rng));
        prop_assert_eq!(qpe_leq(&a, &b, &cfg).unwrap().relation, v.relation);
    }

    #[test]
    fn updates_chain_transitively((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let a = random_state(dim, dim, &mut rng).unwrap();
        let b = fls_update(&a, &random_agreeing_effect(&a, &mut rng, &cfg), &cfg).unwrap();
        let c = fls_update(&b, &random_agreeing_effect(&b, &mut rng, &cfg), &cfg).unwrap();
        prop_assert!(qpe_leq(&a, &b, &cfg).unwrap().holds());
        prop_assert!(qpe_leq(&b, &c, &cfg).unwrap().holds());
        prop_assert!(qpe_leq(&a, &c, &cfg).unwrap().holds());
        let e = reconstruct_effect(&a, &c, &cfg).unwrap();
        prop_assert!(fls_update(&a, &e, &cfg).unwrap().distance(&c) < 1e-8);
    }

    #[test]
    fn diagonal_order_matches_ratio_oracle(dim in 2usize..=6, seed in any::<u64>()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let x = random_probability_vector(dim, &mut rng);
        let y = random_probability_vector(dim, &mut rng);
        let slack = common::diagonal_qpe_slack(x.as_slice(), y.as_slice());
        let v = qpe_leq(&x.to_state(&cfg).unwrap(), &y.to_state(&cfg).unwrap(), &cfg).unwrap();
        if !v.is_marginal() {
            prop_assert_eq!(v.holds(), slack >= 0.0);
        }
        prop_assert_eq!(diagonal_order_oracle(x.as_slice(), y.as_slice()).unwrap().holds(1e-12), slack >= -1e-12);
    }

    #[test]
    fn classical_evidence_round_trip(dim in 2usize..=6, seed in any::<u64>()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let x = random_probability_vector(dim, &mut rng);
        let mut p: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..1.0)).collect();
        p[x.argmax()] = 1.0;
        let y = classical_update(&x, &p).unwrap();
        prop_assert!(classical_pe_leq(&x, &y, &cfg).unwrap().holds());
        let q = classical_solve_evidence(&x, &y, &cfg).unwrap();
        let back = classical_update(&x, &q).unwrap();
        for (a, b) in back.as_slice().iter().zip(y.as_slice()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn max_divergence_matches_bisection((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rho = random_state(dim, dim, &mut rng).unwrap();
        let sigma = random_state(dim, 1 + (seed as usize) % dim, &mut rng).unwrap();
        let d = max_divergence(&sigma, &rho, &cfg).unwrap().value;
        prop_assert!(d >= 0.0);
        prop_assert!((d - common::max_divergence(&sigma, &rho)).abs() < 1e-8);
    }

    #[test]
    fn renyi_divergence_increases_with_order((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rho = random_state(dim, dim, &mut rng).unwrap();
        let sigma = random_state(dim, dim, &mut rng).unwrap();
        let orders = [0.5, 0.8, 1.0, 1.5, 2.0, 5.0];
        let values: Vec<f64> = orders
            .iter()
            .map(|&a| renyi_divergence(&sigma, &rho, Alpha::Finite(a), &cfg).unwrap().value)
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-9);
        }
        let dmax = renyi_divergence(&sigma, &rho, Alpha::Infinite, &cfg).unwrap().value;
        prop_assert!(values[values.len() - 1] <= dmax + 1e-9);
    }

    #[test]
    fn entropies_are_ordered((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rho = random_state(dim, 1 + (seed as usize) % dim, &mut rng).unwrap();
        let h_min = renyi_entropy(&rho, Alpha::Infinite, &cfg);
        let h2 = renyi_entropy(&rho, Alpha::Finite(2.0), &cfg);
        let h1 = von_neumann_entropy(&rho, &cfg);
        let h_half = renyi_entropy(&rho, Alpha::Finite(0.5), &cfg);
        prop_assert!(h_min <= h2 + 1e-12 && h2 <= h1 + 1e-12 && h1 <= h_half + 1e-12);
        prop_assert!(h_half <= (dim as f64).ln() + 1e-12);
        prop_assert!((h1 - common::shannon(rho.eigenvalues())).abs() < 1e-10);
    }

    #[test]
    fn depolarizing_preserves_order((dim, seed) in dim_seed(), t in 0.0f64..=1.0) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rho = random_state(dim, dim, &mut rng).unwrap();
        let sigma = fls_update(&rho, &random_agreeing_effect(&rho, &mut rng, &cfg), &cfg).unwrap();
        let (a, b) = (depolarize(&rho, t).unwrap(), depolarize(&sigma, t).unwrap());
        prop_assert!(qpe_leq(&a, &b, &cfg).unwrap().holds());
        prop_assert!(qpe_leq(&a, &sigma, &cfg).unwrap().holds());
    }

    #[test]
    fn partial_trace_of_product((m, seed) in dim_seed(), n in 2usize..=3) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let x = random_hermitian(m, &mut rng);
        let y = random_hermitian(n, &mut rng);
        let xy = x.tensor(&y);
        let first = xy.partial_trace((m, n), Subsystem::Second).unwrap();
        prop_assert!(first.distance(&x.scale(y.trace())) < 1e-12);
        let second = xy.partial_trace((m, n), Subsystem::First).unwrap();
        prop_assert!(second.distance(&y.scale(x.trace())) < 1e-12);
        let _ = cfg;
    }

    #[test]
    fn probe_never_beats_eigensolver(dim in 2usize..=5, seed in any::<u64>()) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let a = random_hermitian(dim, &mut rng);
        let probe = psd_probe(&a, 200, &mut rng, &cfg);
        let eig = a.is_psd(&cfg);
        prop_assert!(probe.min_quotient >= eig.slack - 1e-12);
        if probe.relation == qpe_core::Relation::Fails {
            prop_assert!(eig.fails());
        }
    }

    #[test]
    fn kraus_and_choi_actions_agree((n, seed) in (2usize..=3, any::<u64>()), k in 2usize..=3) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let rank = rng.random_range(n.div_ceil(k)..=n * k);
        let phi = random_channel(n, k, rank, &mut rng).unwrap();
        let rho = random_state(n, n, &mut rng).unwrap();
        let via_choi = phi.apply(&rho, &cfg).unwrap();
        let via_kraus = phi.apply_kraus(&rho, &cfg).unwrap();
        prop_assert!(via_choi.distance(&via_kraus) < 1e-12);
        let reduced = phi.choi().matrix().partial_trace((n, k), Subsystem::Second).unwrap();
        prop_assert!(reduced.distance(&HermitianMatrix::identity(n).scale(1.0 / n as f64)) < 1e-12);
        let rebuilt = Channel::from_choi(n, k, phi.choi().matrix().clone(), &cfg).unwrap();
        prop_assert!(rebuilt.apply(&rho, &cfg).unwrap().distance(&via_kraus) < 1e-12);
    }

    #[test]
    fn channel_order_bottom_and_reflexive(seed in any::<u64>(), rank in 1usize..=4) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let phi = random_channel(2, 2, rank, &mut rng).unwrap();
        prop_assert!(channel_qpe_leq(&phi, &phi, &cfg).unwrap().holds());
        let bottom = Channel::depolarizing(2, 1.0).unwrap();
        prop_assert!(channel_qpe_leq(&bottom, &phi, &cfg).unwrap().holds());
    }

    #[test]
    fn isometries_are_maximal(seed in any::<u64>(), rank in 1usize..=4) {
        let cfg = cfg();
        let mut rng = seeded(seed);
        let iso = random_channel(2, 2, 1, &mut rng).unwrap();
        let psi = random_channel(2, 2, rank, &mut rng).unwrap();
        if channel_qpe_leq(&iso, &psi, &cfg).unwrap().holds() {
            prop_assert!(iso.choi().distance(psi.choi()) < 1e-8);
        }
        prop_assert!(channel_qpe_leq(&iso, &Channel::identity(2), &cfg).unwrap().fails());
        prop_assert!(channel_qpe_leq(&Channel::identity(2), &iso, &cfg).unwrap().fails());
    }

    #[test]
    fn documents_round_trip((dim, seed) in dim_seed()) {
        let cfg = cfg();
        let rho = random_state(dim, 1 + (seed as usize) % dim, &mut seeded(seed)).unwrap();
        let text = MatrixDocument::from_state(&rho).to_json();
        let back = MatrixDocument::parse(&text).unwrap().to_state(&cfg).unwrap();
        prop_assert_eq!(back.matrix().as_matrix(), rho.matrix().as_matrix());
    }
}

#[test]
fn uniform_vector_is_bottom_of_classical_order() {
    let cfg = cfg();
    let mut rng = seeded(1);
    for dim in 2..=6 {
        let u = ProbabilityVector::uniform(dim);
        let x = random_probability_vector(dim, &mut rng);
        assert!(classical_pe_leq(&u, &x, &cfg).unwrap().holds());
    }
}
