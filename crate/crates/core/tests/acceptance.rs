//! Exit criteria. Each test prints one `PASS`/`FAIL` line and then asserts.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use qwalk_core::asymptotics::{asymptotic_matrix, closed_form_asymptotic_schmidt, momentum_space_evolution};
use qwalk_core::entanglement::{bloch_vector, reduced_coin_density, schmidt_coefficients, schmidt_norm};
use qwalk_core::rl::{brute_force_search, sample_initial_states, train_many, StateDistribution, TrainConfig};
use qwalk_core::sequences::{evaluate_sequence, mean_and_variance, CoinLabel, CoinSequence};
use qwalk_core::walk::{CoinMatrix, InitialStateParams, WalkerCoinState};

fn report(id: u32, name: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{tag}] {name}: {detail}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn grid(n: usize, hi: f64) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

fn uniform_thetas(n: usize, seed: u64) -> Vec<f64> {
    sample_initial_states(n, StateDistribution::FixedPhiZero, seed)
        .iter()
        .map(|p| p.theta())
        .collect()
}

fn random_plain_sequence(rng: &mut ChaCha8Rng, max_len: usize) -> CoinSequence {
    let n = rng.gen_range(1..=max_len);
    CoinSequence::new(
        (0..n)
            .map(|_| if rng.gen::<bool>() { CoinLabel::H } else { CoinLabel::F })
            .collect(),
    )
}

fn bloch_after(seq: &str, theta: f64) -> [f64; 3] {
    let p = InitialStateParams::new(theta, 0.0).unwrap();
    let s = CoinSequence::from_plain(seq).unwrap().run(p).unwrap();
    let b = bloch_vector(&reduced_coin_density(&s));
    [b.a1, b.a2, b.a3]
}

fn max_dev(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn criterion_01_worked_bloch_vectors() {
    let start = Instant::now();
    let (mut d3, mut d4, mut d5) = (0.0f64, 0.0f64, 0.0f64);
    for theta in grid(20, PI) {
        let (s, c) = theta.sin_cos();
        d3 = d3.max(max_dev(bloch_after("HFH", theta), [(c + s) / 4.0, 0.0, 0.0]));
        d4 = d4.max(max_dev(bloch_after("HFHF", theta), [0.0, (-c + 4.0 * s) / 16.0, 0.0]));
        d5 = d5.max(max_dev(bloch_after("HFHFF", theta), [c / 16.0, s / 16.0, 0.0]));
    }
    let elapsed = start.elapsed();
    let ok = d3 < 1e-12 && d4 < 1e-12 && d5 < 1e-12 && elapsed < Duration::from_secs(1);
    report(
        1,
        "worked Bloch vectors",
        ok,
        format!("max deviation HFH {d3:.3e}, HFHF {d4:.3e}, HFHFF {d5:.3e}; {elapsed:?}"),
    );
}

#[test]
fn criterion_02_universal_value() {
    let start = Instant::now();
    let thetas = uniform_thetas(1000, 2);
    let eval = evaluate_sequence(&CoinSequence::universal(2).unwrap(), &thetas, 0.0).unwrap();
    let sample_var = eval.variance * 1000.0 / 999.0;
    let all_round = eval.per_theta.iter().all(|&(_, s)| format!("{s:.4}") == "1.4114");
    let elapsed = start.elapsed();
    let ok = all_round && sample_var < 1e-20 && elapsed < Duration::from_secs(5);
    report(
        2,
        "seq*(5) Schmidt norm",
        ok,
        format!("mean {:.10}, variance {sample_var:.3e}; {elapsed:?}", eval.mean),
    );
}

#[test]
fn criterion_03_asymptotics() {
    let start = Instant::now();
    let closed = closed_form_asymptotic_schmidt() / SQRT_2;
    let r3 = 3f64.sqrt();
    let printed = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0 + 2.0 / r3, 2.0 - r3],
        [0.0, -2.0 + r3, 1.0 - 2.0 / r3, 0.0],
        [0.0, 0.0, -1.0 + 2.0 / r3, 0.0],
    ];
    let m = asymptotic_matrix(512).unwrap();
    let matrix_dev = (0..16).map(|i| (m[i / 4][i % 4] - printed[i / 4][i % 4]).abs()).fold(0.0, f64::max);
    let long = CoinSequence::universal(100).unwrap();
    let sim_dev = [0.0, 0.7, 1.9, 3.0]
        .iter()
        .map(|&t| {
            let s = long.schmidt_norm_from(InitialStateParams::new(t, 0.0).unwrap()).unwrap();
            (s / SQRT_2 - closed).abs()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let ok = format!("{closed:.4}") == "0.9908"
        && matrix_dev < 1e-8
        && sim_dev < 1e-3
        && elapsed < Duration::from_secs(30);
    report(
        3,
        "asymptotic limit",
        ok,
        format!("S/√2 = {closed:.6}, matrix deviation {matrix_dev:.3e}, seq*(201) deviation {sim_dev:.3e}; {elapsed:?}"),
    );
}

#[test]
fn criterion_04_momentum_equals_position() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let seq = random_plain_sequence(&mut rng, 9);
        let theta = rng.gen_range(0.0..=PI);
        let phi = rng.gen_range(0.0..=2.0 * PI);
        let s = seq.run(InitialStateParams::new(theta, phi).unwrap()).unwrap();
        let pos = bloch_vector(&reduced_coin_density(&s));
        let mom = momentum_space_evolution(&seq, theta, phi, 64).unwrap();
        worst = worst.max(pos.max_abs_diff(&mom));
    }
    report(
        4,
        "momentum vs position",
        worst < 1e-8,
        format!("max Bloch deviation {worst:.3e} over 50 cases"),
    );
}

#[test]
fn criterion_05_brute_force() {
    let start = Instant::now();
    let ranked = brute_force_search(5, 1000, StateDistribution::FixedPhiZero, 5).unwrap();
    let elapsed = start.elapsed();
    let top = ranked[0].sequence.compact().unwrap();
    let ok = ranked.len() == 32 && top == "HFHFF" && elapsed < Duration::from_secs(30);
    report(
        5,
        "brute force n = 5",
        ok,
        format!(
            "top {top} ({:.6}), runner-up {} ({:.6}); {elapsed:?}",
            ranked[0].mean,
            ranked[1].sequence.compact().unwrap(),
            ranked[1].mean
        ),
    );
}

#[test]
fn criterion_06_rl_recovery() {
    let mut cfg = TrainConfig::new(5);
    cfg.n_episodes = 20_000;
    cfg.learning_rate = 0.7;
    cfg.eps_init = 0.9;
    cfg.eps_fin = 0.01;
    cfg.state_distribution = StateDistribution::FixedPhiZero;
    cfg.seed = 6;
    let records = train_many(&cfg, 50).unwrap();
    let hits = records
        .iter()
        .filter(|r| r.final_greedy_sequence.compact().as_deref() == Some("HFHFF"))
        .count();
    let mut others: Vec<String> = records
        .iter()
        .filter_map(|r| r.final_greedy_sequence.compact())
        .filter(|s| s != "HFHFF")
        .collect();
    others.sort();
    others.dedup();
    report(
        6,
        "RL recovers HFHFF",
        hits * 100 >= 80 * records.len(),
        format!("{hits}/50 runs; other greedy sequences {others:?}"),
    );
}

#[test]
fn criterion_07_dominance() {
    let mut margins = Vec::new();
    let mut ok = true;
    for (found, m) in [("FHHHFHH", 3), ("F,H^7,F,H^6", 7)] {
        let found = CoinSequence::parse(found).unwrap();
        let uni = CoinSequence::universal(m).unwrap();
        ok &= found.len() == uni.len();
        let mut min_margin = f64::INFINITY;
        for theta in grid(101, PI) {
            let p = InitialStateParams::new(theta, 0.0).unwrap();
            let d = found.schmidt_norm_from(p).unwrap() - uni.schmidt_norm_from(p).unwrap();
            min_margin = min_margin.min(d);
        }
        ok &= min_margin > 0.0;
        margins.push(format!("{found}: {min_margin:.4e}"));
    }
    report(7, "searched sequences dominate", ok, format!("minimum margins {}", margins.join(", ")));
}

#[test]
fn criterion_08_generalized_hadamard() {
    let thetas = uniform_thetas(1000, 8);
    let mut worst_var = 0.0f64;
    let mut best_m7 = (f64::NEG_INFINITY, 0.0);
    let mut at_quarter = f64::NAN;
    for m in [2, 3, 7] {
        for omega in grid(51, FRAC_PI_2) {
            let seq = CoinSequence::generalized_universal(m, omega).unwrap();
            let eval = evaluate_sequence(&seq, &thetas, 0.0).unwrap();
            let sample_var = eval.variance * 1000.0 / 999.0;
            worst_var = worst_var.max(sample_var);
            if m == 7 {
                if eval.mean > best_m7.0 {
                    best_m7 = (eval.mean, omega);
                }
                if (omega - FRAC_PI_4).abs() < 1e-12 {
                    at_quarter = eval.mean;
                }
            }
        }
    }
    let ok = worst_var < 1e-18 && best_m7.0 > at_quarter;
    report(
        8,
        "generalized Hadamard",
        ok,
        format!(
            "max variance {worst_var:.3e}; m = 7 best {:.6} at ω = {:.4} vs {at_quarter:.6} at π/4",
            best_m7.0, best_m7.1
        ),
    );
}

#[test]
fn criterion_09_phase_compensation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let seq = random_plain_sequence(&mut rng, 15);
        let theta = rng.gen_range(0.0..=PI);
        let phi = rng.gen_range(0.0..=2.0 * PI);
        let a = seq
            .phase_compensated(phi)
            .unwrap()
            .schmidt_norm_from(InitialStateParams::new(theta, phi).unwrap())
            .unwrap();
        let b = seq.schmidt_norm_from(InitialStateParams::new(theta, 0.0).unwrap()).unwrap();
        worst = worst.max((a - b).abs());
    }
    report(9, "phase compensation", worst < 1e-12, format!("max deviation {worst:.3e} over 100 cases"));
}

#[test]
fn criterion_10_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();
    for case in 0..500 {
        let n = rng.gen_range(1..=12);
        let coins: Vec<CoinMatrix> = (0..n)
            .map(|_| {
                CoinMatrix::general(
                    rng.gen_range(0.0..FRAC_PI_2),
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                )
            })
            .collect();
        let p = InitialStateParams::new(rng.gen_range(0.0..=PI), rng.gen_range(0.0..=2.0 * PI)).unwrap();
        let mut s = WalkerCoinState::initial(p, n + 2);
        for c in &coins {
            s.step(c).unwrap();
            if (s.norm_sqr() - 1.0).abs() > 1e-12 {
                failures.push(format!("norm, case {case}"));
            }
        }
        let v = schmidt_norm(&s);
        if !(1.0 - 1e-12..=SQRT_2 + 1e-12).contains(&v) {
            failures.push(format!("bounds, case {case}: {v}"));
        }
        if (schmidt_coefficients(&s).sum() - v).abs() > 1e-10 {
            failures.push(format!("two-path, case {case}"));
        }
        let parity_ok = s.sites().all(|(x, u, d)| {
            let allowed = x.abs() <= n as i64 && (x - n as i64).rem_euclid(2) == 0;
            allowed || (u.norm_sqr() == 0.0 && d.norm_sqr() == 0.0)
        });
        if !parity_ok {
            failures.push(format!("parity, case {case}"));
        }
    }
    let mut cfg = TrainConfig::new(5);
    cfg.n_episodes = 3000;
    cfg.seed = 10;
    let (a, b) = (train_many(&cfg, 4).unwrap(), train_many(&cfg, 4).unwrap());
    if a.iter().zip(&b).any(|(x, y)| x.q_table != y.q_table) {
        failures.push("q-table determinism".into());
    }
    let (mean, _) = mean_and_variance(a[0].per_episode_reward.iter().copied());
    report(
        10,
        "property suite",
        failures.is_empty(),
        format!("500 random walks, 4 repeated trainings (mean reward {mean:.4}); failures {failures:?}"),
    );
}
