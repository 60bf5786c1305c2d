//! Experiment runners. Each returns a [`Report`] held in memory; nothing here
//! touches the filesystem.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use serde_json::{json, Map, Value as Json};

use qwalk_core::asymptotics::{
    asymptotic_matrix, asymptotic_reduced_state, closed_form_asymptotic_schmidt, DEFAULT_QUADRATURE_NODES,
};
use qwalk_core::entanglement::{bloch_vector, reduced_coin_density};
use qwalk_core::rl::{
    brute_force_search, learning_curve, sample_initial_states, train_many, StateDistribution, TrainConfig,
};
use qwalk_core::sequences::{evaluate_sequence, CoinSequence};
use qwalk_core::walk::InitialStateParams;

use crate::error::{config, CliError, CliResult};
use crate::output::{Dataset, Report, Table};
use crate::plot::Plot;

pub const DEFAULT_THETA_POINTS: usize = 101;
pub const DEFAULT_OMEGA_POINTS: usize = 101;
pub const DEFAULT_SAMPLES: usize = 1000;

/// Tolerance for the planarity and θ-independence checks on the asymptotic state.
const ASYMPTOTIC_CHECK_TOL: f64 = 1e-10;

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> CliResult<Vec<f64>> {
    if n < 2 {
        return Err(config(format!("a grid needs at least 2 points, got {n}")));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

pub fn theta_grid(n: usize) -> CliResult<Vec<f64>> {
    linspace(0.0, PI, n)
}

fn positive(name: &str, v: usize) -> CliResult<()> {
    if v == 0 {
        return Err(config(format!("--{name} must be positive")));
    }
    Ok(())
}

fn thetas_from_samples(samples: usize, seed: u64) -> Vec<f64> {
    sample_initial_states(samples, StateDistribution::FixedPhiZero, seed)
        .iter()
        .map(|p| p.theta())
        .collect()
}

fn reference_lines() -> Vec<(String, f64)> {
    vec![
        ("√2".into(), SQRT_2),
        ("asymptotic".into(), closed_form_asymptotic_schmidt()),
    ]
}

fn reference_meta() -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("sqrt2".into(), json!(SQRT_2));
    m.insert("asymptotic_schmidt".into(), json!(closed_form_asymptotic_schmidt()));
    m.insert(
        "asymptotic_schmidt_over_sqrt2".into(),
        json!(closed_form_asymptotic_schmidt() / SQRT_2),
    );
    m
}

/// Schmidt norm and Bloch vector of one sequence over a θ grid at fixed φ.
pub fn eval_seq(sequence: &str, thetas: &[f64], phi: f64) -> CliResult<Report> {
    let seq = CoinSequence::parse(sequence)?;
    if seq.is_empty() {
        return Err(config("--seq must contain at least one coin"));
    }
    for &t in thetas {
        InitialStateParams::new(t, phi)?;
    }
    let eval = evaluate_sequence(&seq, thetas, phi)?;
    let mut table = Table::new(&["theta", "phi", "schmidt", "a1", "a2", "a3"]);
    for &(theta, schmidt) in &eval.per_theta {
        let state = seq.run(InitialStateParams::new(theta, phi)?)?;
        let b = bloch_vector(&reduced_coin_density(&state));
        table.push(vec![
            theta.into(),
            phi.into(),
            schmidt.into(),
            b.a1.into(),
            b.a2.into(),
            b.a3.into(),
        ]);
    }
    let mut meta = reference_meta();
    meta.insert("sequence".into(), json!(seq.to_string()));
    meta.insert("steps".into(), json!(seq.len()));
    meta.insert("mean".into(), json!(eval.mean));
    meta.insert("variance".into(), json!(eval.variance));
    Ok(Report {
        datasets: vec![Dataset {
            name: "eval_seq",
            table,
            plot: Plot::Lines {
                x: "theta",
                y: "schmidt",
                series: None,
                reference: reference_lines(),
            },
            meta,
        }],
        texts: Vec::new(),
    })
}

/// Schmidt norm of `[(H,F)^m, F]` over θ for each `m`, rows ordered by `(m, theta)`.
pub fn universal(m_list: &[usize], theta_points: usize) -> CliResult<Report> {
    if m_list.is_empty() {
        return Err(config("--m-list must not be empty"));
    }
    let thetas = theta_grid(theta_points)?;
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut table = Table::new(&["m", "n", "theta", "schmidt"]);
    for &m in &ms {
        let seq = CoinSequence::universal(m)?;
        let eval = evaluate_sequence(&seq, &thetas, 0.0)?;
        for (theta, s) in eval.per_theta {
            table.push(vec![m.into(), seq.len().into(), theta.into(), s.into()]);
        }
    }
    Ok(Report {
        datasets: vec![Dataset {
            name: "universal",
            table,
            plot: Plot::Lines {
                x: "theta",
                y: "schmidt",
                series: Some("m"),
                reference: reference_lines(),
            },
            meta: reference_meta(),
        }],
        texts: Vec::new(),
    })
}

/// Mean and variance over `samples` random θ for `m = 1..=m_max`.
pub fn converge(m_max: usize, samples: usize, seed: u64) -> CliResult<Report> {
    positive("m-max", m_max)?;
    positive("samples", samples)?;
    let thetas = thetas_from_samples(samples, seed);
    let mut table = Table::new(&["m", "n", "mean", "variance", "mean_over_sqrt2"]);
    for m in 1..=m_max {
        let seq = CoinSequence::universal(m)?;
        let eval = evaluate_sequence(&seq, &thetas, 0.0)?;
        table.push(vec![
            m.into(),
            seq.len().into(),
            eval.mean.into(),
            eval.variance.into(),
            (eval.mean / SQRT_2).into(),
        ]);
    }
    Ok(Report {
        datasets: vec![Dataset {
            name: "convergence",
            table,
            plot: Plot::Lines {
                x: "n",
                y: "mean",
                series: None,
                reference: reference_lines(),
            },
            meta: reference_meta(),
        }],
        texts: Vec::new(),
    })
}

/// `[(H̃(ω),F)^m, F]` averaged over random θ, for ω on `[0, π/2]`.
pub fn omega_sweep(m_list: &[usize], grid: usize, samples: usize, seed: u64) -> CliResult<Report> {
    if m_list.is_empty() {
        return Err(config("--m-list must not be empty"));
    }
    positive("samples", samples)?;
    let omegas = linspace(0.0, FRAC_PI_2, grid)?;
    let thetas = thetas_from_samples(samples, seed);
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut table = Table::new(&["m", "n", "omega", "mean", "variance"]);
    let mut meta = reference_meta();
    for &m in &ms {
        for &omega in &omegas {
            let seq = CoinSequence::generalized_universal(m, omega)?;
            let eval = evaluate_sequence(&seq, &thetas, 0.0)?;
            table.push(vec![
                m.into(),
                seq.len().into(),
                omega.into(),
                eval.mean.into(),
                eval.variance.into(),
            ]);
        }
        let plain = evaluate_sequence(&CoinSequence::universal(m)?, &thetas, 0.0)?;
        meta.insert(format!("hadamard_mean_m{m}"), json!(plain.mean));
    }
    meta.insert("hadamard_omega".into(), json!(FRAC_PI_4));
    Ok(Report {
        datasets: vec![Dataset {
            name: "omega_sweep",
            table,
            plot: Plot::Lines {
                x: "omega",
                y: "mean",
                series: Some("m"),
                reference: vec![("√2".into(), SQRT_2)],
            },
            meta,
        }],
        texts: Vec::new(),
    })
}

/// Long-time limit of the reduced coin state over a θ grid. Fails if the result
/// leaves the x–y plane or depends on θ.
pub fn asymptotic(theta_points: usize, quadrature: usize) -> CliResult<Report> {
    let thetas = theta_grid(theta_points)?;
    let closed = closed_form_asymptotic_schmidt();
    let mut table = Table::new(&["theta", "a0", "a1", "a2", "a3", "schmidt", "schmidt_over_sqrt2"]);
    for &theta in &thetas {
        let r = asymptotic_reduced_state(theta, 0.0, quadrature)?;
        let b = r.bloch;
        if b.a3.abs() > ASYMPTOTIC_CHECK_TOL || (r.schmidt - closed).abs() > ASYMPTOTIC_CHECK_TOL {
            return Err(CliError::Runtime(anyhow::anyhow!(
                "asymptotic state at θ = {theta} is off the expected plane or norm: a3 = {}, S = {}",
                b.a3,
                r.schmidt
            )));
        }
        table.push(vec![
            theta.into(),
            b.a0.into(),
            b.a1.into(),
            b.a2.into(),
            b.a3.into(),
            r.schmidt.into(),
            (r.schmidt / SQRT_2).into(),
        ]);
    }
    let mut meta = reference_meta();
    meta.insert("quadrature_nodes".into(), json!(quadrature));
    meta.insert("matrix".into(), json!(asymptotic_matrix(quadrature)?));
    Ok(Report {
        datasets: vec![Dataset {
            name: "asymptotic",
            table,
            plot: Plot::Lines {
                x: "theta",
                y: "schmidt",
                series: None,
                reference: reference_lines(),
            },
            meta,
        }],
        texts: Vec::new(),
    })
}

pub fn default_quadrature() -> usize {
    DEFAULT_QUADRATURE_NODES
}

/// All `2^n` H/F sequences ranked on a common sample of initial states.
pub fn brute_force(steps: usize, samples: usize, dist: StateDistribution, seed: u64) -> CliResult<Report> {
    let ranked = brute_force_search(steps, samples, dist, seed)?;
    let mut table = Table::new(&["rank", "sequence", "mean", "variance"]);
    for (i, r) in ranked.iter().enumerate() {
        table.push(vec![
            (i + 1).into(),
            r.sequence.compact().unwrap_or_default().into(),
            r.mean.into(),
            r.variance.into(),
        ]);
    }
    let mut meta = reference_meta();
    meta.insert("steps".into(), json!(steps));
    meta.insert("samples".into(), json!(samples));
    meta.insert("distribution".into(), json!(distribution_name(&dist)));
    Ok(Report {
        datasets: vec![Dataset {
            name: "brute_force",
            table,
            plot: Plot::Lines {
                x: "rank",
                y: "mean",
                series: None,
                reference: vec![("√2".into(), SQRT_2)],
            },
            meta,
        }],
        texts: Vec::new(),
    })
}

pub fn distribution_name(d: &StateDistribution) -> &'static str {
    match d {
        StateDistribution::FixedPhiZero => "phi0",
        StateDistribution::FullyRandom => "random",
        StateDistribution::Fixed(_) => "fixed",
    }
}

/// Settings for [`train`] beyond the core training configuration.
#[derive(Debug, Clone)]
pub struct TrainSettings {
    pub config: TrainConfig,
    pub runs: usize,
    /// Points per axis of the (θ, φ) surface for the modal sequence.
    pub surface_points: usize,
    /// Initial states used to score each greedy sequence.
    pub eval_samples: usize,
}

/// Trains `runs` agents. Emits the learning curve, the tally of greedy sequences,
/// the modal sequence, and its Schmidt norm over a (θ, φ) grid.
pub fn train(settings: &TrainSettings) -> CliResult<Report> {
    positive("runs", settings.runs)?;
    positive("samples", settings.eval_samples)?;
    let cfg = &settings.config;
    let thetas = theta_grid(settings.surface_points)?;
    let phis = linspace(0.0, 2.0 * PI, settings.surface_points)?;
    let records = train_many(cfg, settings.runs)?;

    let mut curve = Table::new(&["episode", "mean_reward", "stderr"]);
    for (ep, (mean, se)) in learning_curve(&records).into_iter().enumerate() {
        curve.push(vec![ep.into(), mean.into(), se.into()]);
    }

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &records {
        let key = r.final_greedy_sequence.compact().unwrap_or_default();
        *counts.entry(key).or_default() += 1;
    }
    let mut tally: Vec<(String, usize)> = counts.into_iter().collect();
    // Most frequent first; equal counts keep alphabetical order.
    tally.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let modal = CoinSequence::from_plain(&tally[0].0)?;

    let scoring = sample_initial_states(settings.eval_samples, cfg.state_distribution, cfg.seed);
    let mut greedy = Table::new(&["sequence", "count", "mean_schmidt"]);
    for (seq, count) in &tally {
        let s = CoinSequence::from_plain(seq)?;
        let total: f64 = scoring
            .iter()
            .map(|&p| s.schmidt_norm_from(p))
            .sum::<qwalk_core::Result<f64>>()?;
        greedy.push(vec![
            seq.clone().into(),
            (*count).into(),
            (total / scoring.len() as f64).into(),
        ]);
    }

    let mut surface = Table::new(&["theta", "phi", "schmidt"]);
    for &phi in &phis {
        for (theta, s) in evaluate_sequence(&modal, &thetas, phi)?.per_theta {
            surface.push(vec![theta.into(), phi.into(), s.into()]);
        }
    }

    let mut meta = reference_meta();
    meta.insert("steps".into(), json!(cfg.n_steps));
    meta.insert("episodes".into(), json!(cfg.n_episodes));
    meta.insert("runs".into(), json!(settings.runs));
    meta.insert("learning_rate".into(), json!(cfg.learning_rate));
    meta.insert("eps_init".into(), json!(cfg.eps_init));
    meta.insert("eps_fin".into(), json!(cfg.eps_fin));
    meta.insert("distribution".into(), json!(distribution_name(&cfg.state_distribution)));
    meta.insert("modal_sequence".into(), json!(modal.compact()));

    let compact = modal.compact().unwrap_or_default();
    let mut surface_meta = meta.clone();
    surface_meta.insert("sequence".into(), json!(compact));
    Ok(Report {
        datasets: vec![
            Dataset {
                name: "learning_curve",
                table: curve,
                plot: Plot::Lines {
                    x: "episode",
                    y: "mean_reward",
                    series: None,
                    reference: vec![("√2".into(), SQRT_2)],
                },
                meta: meta.clone(),
            },
            Dataset {
                name: "greedy_sequences",
                table: greedy,
                plot: Plot::Bars {
                    label: "sequence",
                    value: "count",
                },
                meta,
            },
            Dataset {
                name: "surface",
                table: surface,
                plot: Plot::Heatmap {
                    x: "theta",
                    y: "phi",
                    z: "schmidt",
                },
                meta: surface_meta,
            },
        ],
        texts: vec![("modal_sequence.txt".into(), format!("{compact}\n"))],
    })
}
