//! Checks against implementations that share no code with the library: a dense
//! walk operator, numerical eigenvalues, brute power averages and hand results.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use qwalk_core::asymptotics::{
    asymptotic_matrix, asymptotic_reduced_state, closed_form_asymptotic_schmidt, hf_limit_projector,
    momentum_space_evolution, Superoperator4,
};
use qwalk_core::entanglement::bloch_vector;
use qwalk_core::entanglement::reduced_coin_density;
use qwalk_core::rl::{
    brute_force_search, sample_initial_states, train, train_many, Action, History, StateDistribution, TrainConfig,
};
use qwalk_core::sequences::{evaluate_sequence, CoinLabel, CoinSequence};
use qwalk_core::walk::InitialStateParams;
use qwalk_core::BlochState;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hadamard() -> [[Complex64; 2]; 2] {
    let r = c(1.0 / SQRT_2, 0.0);
    [[r, r], [r, -r]]
}

fn fourier() -> [[Complex64; 2]; 2] {
    let r = c(1.0 / SQRT_2, 0.0);
    let i = c(0.0, 1.0 / SQRT_2);
    [[r, i], [i, r]]
}

/// Dense position-space walk on sites −l..=l, index 2(x + l) + coin with up = 0.
struct DenseWalk {
    l: i64,
    psi: DVector<Complex64>,
}

impl DenseWalk {
    fn new(theta: f64, phi: f64, l: i64) -> Self {
        let dim = 2 * (2 * l + 1) as usize;
        let mut psi = DVector::from_element(dim, c(0.0, 0.0));
        psi[2 * l as usize] = c((theta / 2.0).cos(), 0.0);
        psi[2 * l as usize + 1] = Complex64::from_polar((theta / 2.0).sin(), phi);
        DenseWalk { l, psi }
    }

    fn idx(&self, x: i64, coin: usize) -> usize {
        2 * (x + self.l) as usize + coin
    }

    fn step(&mut self, coin: [[Complex64; 2]; 2]) {
        let dim = self.psi.len();
        let mut cm = DMatrix::from_element(dim, dim, c(0.0, 0.0));
        let mut sm = DMatrix::from_element(dim, dim, c(0.0, 0.0));
        for x in -self.l..=self.l {
            for r in 0..2 {
                for col in 0..2 {
                    cm[(self.idx(x, r), self.idx(x, col))] = coin[r][col];
                }
            }
            // (x, down) -> (x-1, up), (x, up) -> (x+1, down)
            if x > -self.l {
                sm[(self.idx(x - 1, 0), self.idx(x, 1))] = c(1.0, 0.0);
            }
            if x < self.l {
                sm[(self.idx(x + 1, 1), self.idx(x, 0))] = c(1.0, 0.0);
            }
        }
        self.psi = &sm * &cm * &self.psi;
    }

    /// (a1, a2, a3) with ρ = ½I + a1 σx + ... where a1 = Re ρ↑↓, a2 = Im ρ↑↓.
    fn bloch(&self) -> [f64; 3] {
        let mut rho = [[c(0.0, 0.0); 2]; 2];
        for x in -self.l..=self.l {
            for a in 0..2 {
                for b in 0..2 {
                    rho[a][b] += self.psi[self.idx(x, a)] * self.psi[self.idx(x, b)].conj();
                }
            }
        }
        [rho[0][1].re, rho[0][1].im, (rho[0][0].re - rho[1][1].re) / 2.0]
    }
}

fn dense_bloch(theta: f64, phi: f64, coins: &[[[Complex64; 2]; 2]]) -> [f64; 3] {
    let mut w = DenseWalk::new(theta, phi, coins.len() as i64 + 1);
    for &coin in coins {
        w.step(coin);
    }
    w.bloch()
}

fn library_bloch(theta: f64, phi: f64, seq: &str) -> BlochState {
    let p = InitialStateParams::new(theta, phi).unwrap();
    let s = CoinSequence::parse(seq).unwrap().run(p).unwrap();
    bloch_vector(&reduced_coin_density(&s))
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect()
}

fn assert_vec(got: [f64; 3], want: [f64; 3], tol: f64, what: &str) {
    for i in 0..3 {
        assert!((got[i] - want[i]).abs() < tol, "{what}: got {got:?}, want {want:?}");
    }
}

#[test]
fn dense_walk_reproduces_five_step_bloch_vector() {
    let (h, f) = (hadamard(), fourier());
    for theta in grid(20) {
        let want = [theta.cos() / 16.0, theta.sin() / 16.0, 0.0];
        assert_vec(dense_bloch(theta, 0.0, &[h, f, h, f, f]), want, 1e-12, "dense");
        let b = library_bloch(theta, 0.0, "HFHFF");
        assert_vec([b.a1, b.a2, b.a3], want, 1e-12, "library");
    }
}

#[test]
fn dense_walk_pins_three_and_four_step_bloch_vectors() {
    // The simulated values, frozen; both routes must agree on them.
    let (h, f) = (hadamard(), fourier());
    for theta in grid(20) {
        let (s, co) = theta.sin_cos();
        let a3 = [0.0, -(co + s) / 4.0, -co / 4.0];
        let a4 = [(-co + 4.0 * s) / 16.0, 0.0, (co + s) / 4.0];
        assert_vec(dense_bloch(theta, 0.0, &[h, f, h]), a3, 1e-12, "dense HFH");
        assert_vec(dense_bloch(theta, 0.0, &[h, f, h, f]), a4, 1e-12, "dense HFHF");
        let b = library_bloch(theta, 0.0, "HFH");
        assert_vec([b.a1, b.a2, b.a3], a3, 1e-12, "library HFH");
        let b = library_bloch(theta, 0.0, "HFHF");
        assert_vec([b.a1, b.a2, b.a3], a4, 1e-12, "library HFHF");
    }
}

#[test]
fn dense_walk_agrees_with_library_for_mixed_coins() {
    let gh = |w: f64| {
        let (s, co) = w.sin_cos();
        [[c(co, 0.0), c(s, 0.0)], [c(s, 0.0), c(-co, 0.0)]]
    };
    let cases = [
        ("FHHHFHH", 0.3, 1.1),
        ("GH(0.2),F,GH(1.3),F,F", 2.0, 0.0),
        ("H^3,F^2,H", 0.9, 4.0),
    ];
    for (text, theta, phi) in cases {
        let seq = CoinSequence::parse(text).unwrap();
        let coins: Vec<_> = seq
            .labels()
            .iter()
            .map(|l| match l {
                CoinLabel::H => hadamard(),
                CoinLabel::F => fourier(),
                CoinLabel::GeneralizedHadamard(w) => gh(*w),
                _ => unreachable!(),
            })
            .collect();
        let b = library_bloch(theta, phi, text);
        assert_vec([b.a1, b.a2, b.a3], dense_bloch(theta, phi, &coins), 1e-12, text);
    }
}

#[test]
fn momentum_route_reproduces_five_step_vector() {
    let theta = PI / 5.0;
    let b = momentum_space_evolution(&CoinSequence::universal(2).unwrap(), theta, 0.0, 64).unwrap();
    assert_vec(
        [b.a1, b.a2, b.a3],
        [theta.cos() / 16.0, theta.sin() / 16.0, 0.0],
        1e-8,
        "momentum",
    );
    assert!((b.a0 - 0.5).abs() < 1e-12);
}

#[test]
fn momentum_route_single_hadamard() {
    for theta in grid(7) {
        let b = momentum_space_evolution(&CoinSequence::parse("H").unwrap(), theta, 0.7, 16).unwrap();
        let d = dense_bloch(theta, 0.7, &[hadamard()]);
        assert_vec([b.a1, b.a2, b.a3], d, 1e-10, "single H");
    }
}

#[test]
fn hadamard_fourier_spectrum() {
    // Orthogonal on the Bloch block with two unit eigenvalues and a rotation pair
    // whose angle satisfies cos γ = −(1 + sin² 2k)/2, so it never
    // approaches the fixed eigenvalues.
    for j in 0..25 {
        let k = -PI + 0.2513 * j as f64;
        let l = Superoperator4::hadamard_fourier(k);
        let m = Matrix4::from_fn(|r, col| l.entries[r][col]);
        let eig = m.complex_eigenvalues();
        for z in eig.iter() {
            assert!((z.norm() - 1.0).abs() < 1e-12, "k = {k}: {z}");
        }
        let cos_gamma = -(1.0 + (2.0 * k).sin().powi(2)) / 2.0;
        let top = eig.iter().max_by(|a, b| a.im.total_cmp(&b.im)).unwrap();
        assert!((top.re - cos_gamma).abs() < 1e-12, "k = {k}: {top} vs {cos_gamma}");
        let ones = eig.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 1e-6).count();
        assert!(ones >= 2);
    }
}

#[test]
fn limit_projector_matches_power_average() {
    let n = 20_000;
    for k in [0.0, 0.3, 1.0, 2.0, -0.5, -2.6] {
        let l = Superoperator4::hadamard_fourier(k);
        let mut power = Superoperator4::identity(k);
        let mut sum = [[0.0; 4]; 4];
        for _ in 0..n {
            for r in 0..4 {
                for col in 0..4 {
                    sum[r][col] += power.entries[r][col];
                }
            }
            power = l * power;
        }
        let p = hf_limit_projector(k);
        for r in 0..4 {
            for col in 0..4 {
                let avg = sum[r][col] / n as f64;
                assert!((avg - p.entries[r][col]).abs() < 1e-3, "k = {k} ({r},{col}): {avg}");
            }
        }
    }
}

#[test]
fn integrated_matrix_matches_closed_form() {
    let r3 = 3f64.sqrt();
    let want = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0 + 2.0 / r3, 2.0 - r3],
        [0.0, -2.0 + r3, 1.0 - 2.0 / r3, 0.0],
        [0.0, 0.0, -1.0 + 2.0 / r3, 0.0],
    ];
    let got = asymptotic_matrix(512).unwrap();
    for r in 0..4 {
        for col in 0..4 {
            assert!((got[r][col] - want[r][col]).abs() < 1e-8, "({r},{col}) = {}", got[r][col]);
        }
    }
}

#[test]
fn asymptotic_state_lies_in_plane_with_fixed_length() {
    let len = (2.0 - 3f64.sqrt()) / 2.0;
    let at_zero = asymptotic_reduced_state(0.0, 0.0, 512).unwrap().bloch;
    assert!(at_zero.max_abs_diff(&BlochState::new(0.5, len, 0.0, 0.0)) < 1e-8);
    for theta in grid(11) {
        let r = asymptotic_reduced_state(theta, 0.0, 512).unwrap();
        assert!(r.bloch.a3.abs() < 1e-8);
        assert!((r.bloch.vector_norm() - len).abs() < 1e-8);
        assert!((r.schmidt - closed_form_asymptotic_schmidt()).abs() < 1e-8);
    }
    assert!((closed_form_asymptotic_schmidt() / SQRT_2 - 0.9908).abs() < 5e-5);
}

#[test]
fn universal_sequence_approaches_asymptote() {
    // Oscillates rather than decreasing monotonically, but the distance shrinks.
    let limit = closed_form_asymptotic_schmidt();
    let p = InitialStateParams::new(0.5, 0.0).unwrap();
    let dist = |m| (CoinSequence::universal(m).unwrap().schmidt_norm_from(p).unwrap() - limit).abs();
    let (d5, d20, d100) = (dist(5), dist(20), dist(100));
    assert!(d20 < d5 && d100 < d20, "{d5} {d20} {d100}");
    assert!(d100 < 1e-3 * SQRT_2);
}

#[test]
fn generalized_hadamard_keeps_theta_independence_and_can_improve() {
    let thetas: Vec<f64> = (0..200).map(|i| PI * (i as f64 + 0.5) / 200.0).collect();
    let at = |m, w| {
        let e = evaluate_sequence(&CoinSequence::generalized_universal(m, w).unwrap(), &thetas, 0.0).unwrap();
        assert!(e.variance < 1e-18, "m = {m}, ω = {w}: {}", e.variance);
        e.mean
    };
    let plain = at(3, FRAC_PI_4);
    let h = CoinSequence::universal(3).unwrap().schmidt_norm_from(InitialStateParams::new(1.0, 0.0).unwrap());
    assert!((plain - h.unwrap()).abs() < 1e-12);
    let best = (0..51).map(|i| at(7, FRAC_PI_4 * 2.0 * i as f64 / 50.0)).fold(0.0, f64::max);
    assert!(best > at(7, FRAC_PI_4) + 1e-3);
}

#[test]
fn single_step_brute_force_by_hand() {
    // One step from (θ, 0): H leaves S = √((1+sin θ)/2) + √((1−sin θ)/2); F gives √2.
    let zero = StateDistribution::Fixed(InitialStateParams::new(0.0, 0.0).unwrap());
    for r in brute_force_search(1, 10, zero, 1).unwrap() {
        assert!((r.mean - SQRT_2).abs() < 1e-14, "{}", r.sequence);
    }
    let samples = sample_initial_states(500, StateDistribution::FixedPhiZero, 9);
    let hand_h = samples
        .iter()
        .map(|p| {
            let s = p.theta().sin();
            ((1.0 + s) / 2.0).sqrt() + ((1.0 - s) / 2.0).sqrt()
        })
        .sum::<f64>()
        / samples.len() as f64;
    let ranked = brute_force_search(1, 500, StateDistribution::FixedPhiZero, 9).unwrap();
    assert_eq!(ranked[0].sequence.to_string(), "F");
    assert!((ranked[0].mean - SQRT_2).abs() < 1e-14);
    assert!(ranked[0].variance < 1e-28);
    assert_eq!(ranked[1].sequence.to_string(), "H");
    assert!((ranked[1].mean - hand_h).abs() < 1e-13);
}

#[test]
fn full_backup_learns_exact_values() {
    // With ε = 1, lr = 1 and a fixed state every entry converges to its exact return.
    let p = InitialStateParams::new(0.8, 0.0).unwrap();
    let mut cfg = TrainConfig::new(2);
    cfg.n_episodes = 400;
    cfg.learning_rate = 1.0;
    cfg.eps_init = 1.0;
    cfg.eps_fin = 1.0;
    cfg.state_distribution = StateDistribution::Fixed(p);
    let q = train(&cfg).unwrap().q_table;
    let value = |s: &str| CoinSequence::from_plain(s).unwrap().schmidt_norm_from(p).unwrap();
    for first in Action::ALL {
        let h = History::empty().push(first);
        for second in Action::ALL {
            let want = value(&h.push(second).to_string());
            assert!((q.get(&h, second) - want).abs() < 1e-9);
        }
        let best = Action::ALL.map(|a| value(&h.push(a).to_string())).into_iter().fold(0.0, f64::max);
        assert!((q.get(&History::empty(), first) - best).abs() < 1e-9);
    }
}

#[test]
fn training_is_deterministic_and_rewards_bounded() {
    let mut cfg = TrainConfig::new(4);
    cfg.n_episodes = 2000;
    cfg.seed = 17;
    let a = train_many(&cfg, 3).unwrap();
    let b = train_many(&cfg, 3).unwrap();
    assert_eq!(a, b);
    assert_ne!(a[0].per_episode_reward, a[1].per_episode_reward);
    for r in a.iter().flat_map(|r| &r.per_episode_reward) {
        assert!(*r >= 1.0 - 1e-12 && *r <= SQRT_2 + 1e-12);
    }
}

#[test]
fn searched_sequences_dominate_universal_of_same_length() {
    for (found, m) in [("FHHHFHH", 3), ("F,H^7,F,H^6", 7)] {
        let found = CoinSequence::parse(found).unwrap();
        let uni = CoinSequence::universal(m).unwrap();
        assert_eq!(found.len(), uni.len());
        for theta in grid(101) {
            let p = InitialStateParams::new(theta, 0.0).unwrap();
            assert!(found.schmidt_norm_from(p).unwrap() > uni.schmidt_norm_from(p).unwrap());
        }
    }
}
