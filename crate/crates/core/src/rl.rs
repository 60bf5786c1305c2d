//! Tabular Q-learning over coin sequences, plus exhaustive search as a reference.
//!
//! The environment is deterministic once the initial state is drawn, so the agent's
//! state is simply the history of coins applied so far. Only the last step is
//! rewarded, with the final Schmidt norm.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entanglement::schmidt_norm;
use crate::error::{invalid, QwalkError, Result};
use crate::sequences::{mean_and_variance, CoinLabel, CoinSequence};
use crate::walk::{CoinMatrix, InitialStateParams, WalkerCoinState};

/// Longest episode a Q-table is built for.
pub const MAX_RL_STEPS: usize = 24;

/// Longest sequence length accepted by [`brute_force_search`].
pub const MAX_BRUTE_FORCE_STEPS: usize = 22;

/// Seeded generator used for every stochastic component.
pub type Rng64 = ChaCha8Rng;

/// Generator for run `index` derived from `seed`; each index gets its own stream.
pub fn run_rng(seed: u64, index: u64) -> Rng64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    H,
    F,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::H, Action::F];

    fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> CoinLabel {
        match self {
            Action::H => CoinLabel::H,
            Action::F => CoinLabel::F,
        }
    }

    pub fn matrix(self) -> CoinMatrix {
        self.label().matrix()
    }

    pub fn symbol(self) -> char {
        match self {
            Action::H => 'H',
            Action::F => 'F',
        }
    }
}

/// Sequence of actions taken so far in an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct History {
    bits: u32,
    len: u8,
}

impl History {
    pub fn empty() -> Self {
        History::default()
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(self, action: Action) -> History {
        debug_assert!((self.len as usize) < 32);
        History {
            bits: (self.bits << 1) | action.index() as u32,
            len: self.len + 1,
        }
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        (0..self.len).rev().map(move |i| {
            if (self.bits >> i) & 1 == 0 {
                Action::H
            } else {
                Action::F
            }
        })
    }

    pub fn parse(text: &str) -> Result<History> {
        let mut h = History::empty();
        for (i, ch) in text.chars().enumerate() {
            let a = match ch {
                'H' => Action::H,
                'F' => Action::F,
                _ => {
                    return Err(QwalkError::Parse {
                        position: i,
                        message: format!("history may only contain H and F, found '{ch}'"),
                    })
                }
            };
            if h.len() >= 31 {
                return Err(QwalkError::Parse {
                    position: i,
                    message: "history too long".into(),
                });
            }
            h = h.push(a);
        }
        Ok(h)
    }

    fn slot(&self) -> usize {
        (1usize << self.len) - 1 + self.bits as usize
    }

    pub fn to_sequence(&self) -> CoinSequence {
        CoinSequence::new(self.actions().map(Action::label).collect())
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("init");
        }
        for a in self.actions() {
            write!(f, "{}", a.symbol())?;
        }
        Ok(())
    }
}

/// Action values for every non-terminal history, all starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    n_steps: usize,
    values: Vec<[f64; 2]>,
}

impl QTable {
    pub fn new(n_steps: usize) -> Result<Self> {
        if n_steps == 0 || n_steps > MAX_RL_STEPS {
            return Err(invalid("n_steps", n_steps as f64, "must lie in 1..=24"));
        }
        Ok(QTable {
            n_steps,
            values: vec![[0.0; 2]; (1 << n_steps) - 1],
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of (history, action) entries: `2·(2^n − 1)`.
    pub fn len(&self) -> usize {
        2 * self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, history: &History) {
        assert!(
            history.len() < self.n_steps,
            "history {history} has no entry in a {}-step table",
            self.n_steps
        );
    }

    pub fn get(&self, history: &History, action: Action) -> f64 {
        self.check(history);
        self.values[history.slot()][action.index()]
    }

    pub fn set(&mut self, history: &History, action: Action, value: f64) {
        self.check(history);
        self.values[history.slot()][action.index()] = value;
    }

    /// `max_A Q(history, A)`; zero for terminal histories.
    pub fn max_value(&self, history: &History) -> f64 {
        if history.len() >= self.n_steps {
            return 0.0;
        }
        let [h, f] = self.values[history.slot()];
        h.max(f)
    }

    /// Iterates `(history, action, value)` in breadth-first order.
    pub fn entries(&self) -> impl Iterator<Item = (History, Action, f64)> + '_ {
        (0..self.n_steps).flat_map(move |len| {
            (0..1u32 << len).flat_map(move |bits| {
                let h = History { bits, len: len as u8 };
                Action::ALL.into_iter().map(move |a| (h, a, self.get(&h, a)))
            })
        })
    }
}

/// Distribution of initial states drawn at the start of every episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateDistribution {
    /// θ uniform on [0, π], φ = 0.
    FixedPhiZero,
    /// θ uniform on [0, π], φ uniform on [0, 2π].
    FullyRandom,
    /// Always the same initial state.
    Fixed(InitialStateParams),
}

impl StateDistribution {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> InitialStateParams {
        let (theta, phi) = match self {
            StateDistribution::FixedPhiZero => (rng.gen_range(0.0..PI), 0.0),
            StateDistribution::FullyRandom => (rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)),
            StateDistribution::Fixed(p) => return *p,
        };
        InitialStateParams::new(theta, phi).expect("sampled angles lie in range")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub n_steps: usize,
    pub n_episodes: usize,
    pub learning_rate: f64,
    pub eps_init: f64,
    pub eps_fin: f64,
    pub seed: u64,
    pub state_distribution: StateDistribution,
}

impl TrainConfig {
    /// Default hyperparameters: learning rate 0.7, ε decaying 0.9 → 0.01,
    /// 20 000 episodes up to 7 steps and 100 000 beyond.
    pub fn new(n_steps: usize) -> Self {
        TrainConfig {
            n_steps,
            n_episodes: default_episodes(n_steps),
            learning_rate: 0.7,
            eps_init: 0.9,
            eps_fin: 0.01,
            seed: 0,
            state_distribution: StateDistribution::FixedPhiZero,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 || self.n_steps > MAX_RL_STEPS {
            return Err(invalid("n_steps", self.n_steps as f64, "must lie in 1..=24"));
        }
        if self.n_episodes == 0 {
            return Err(invalid("n_episodes", 0.0, "must be positive"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(invalid("learning_rate", self.learning_rate, "must lie in (0, 1]"));
        }
        for (name, v) in [("eps_init", self.eps_init), ("eps_fin", self.eps_fin)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(name, v, "must lie in [0, 1]"));
            }
        }
        if self.eps_init < self.eps_fin {
            return Err(invalid("eps_init", self.eps_init, "must not be below eps_fin"));
        }
        Ok(())
    }
}

pub fn default_episodes(n_steps: usize) -> usize {
    if n_steps <= 7 {
        20_000
    } else {
        100_000
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRecord {
    pub per_episode_reward: Vec<f64>,
    pub final_greedy_sequence: CoinSequence,
    pub q_table: QTable,
}

/// `(ε_init − ε_fin)·exp(−8·episode/N) + ε_fin`
pub fn epsilon_schedule(episode: usize, config: &TrainConfig) -> f64 {
    let decay = (-8.0 * episode as f64 / config.n_episodes as f64).exp();
    (config.eps_init - config.eps_fin) * decay + config.eps_fin
}

/// ε-greedy choice. Exploration draws uniformly from both actions; exploitation
/// breaks exact ties uniformly at random.
pub fn select_action<R: Rng + ?Sized>(q: &QTable, history: &History, eps: f64, rng: &mut R) -> Action {
    if rng.gen::<f64>() < eps {
        return if rng.gen::<bool>() { Action::H } else { Action::F };
    }
    let h = q.get(history, Action::H);
    let f = q.get(history, Action::F);
    if h > f {
        Action::H
    } else if f > h {
        Action::F
    } else if rng.gen::<bool>() {
        Action::H
    } else {
        Action::F
    }
}

/// `Q(s,a) ← Q(s,a) + lr·(reward + max_A Q(s', A) − Q(s,a))`, undiscounted, with
/// `max Q = 0` when `next` is `None` (terminal).
pub fn td_update(q: &mut QTable, s: &History, a: Action, reward: f64, next: Option<&History>, lr: f64) {
    let bootstrap = next.map_or(0.0, |n| q.max_value(n));
    let old = q.get(s, a);
    q.set(s, a, old + lr * (reward + bootstrap - old));
}

/// Greedy rollout from the empty history; ties go to H.
pub fn greedy_policy(q: &QTable) -> CoinSequence {
    let mut h = History::empty();
    for _ in 0..q.n_steps() {
        let a = if q.get(&h, Action::F) > q.get(&h, Action::H) {
            Action::F
        } else {
            Action::H
        };
        h = h.push(a);
    }
    h.to_sequence()
}

/// One training run on stream 0 of `config.seed`.
pub fn train(config: &TrainConfig) -> Result<TrainingRecord> {
    train_run(config, 0)
}

/// One training run on stream `run_index` of `config.seed`.
pub fn train_run(config: &TrainConfig, run_index: u64) -> Result<TrainingRecord> {
    config.validate()?;
    let mut rng = run_rng(config.seed, run_index);
    let mut q = QTable::new(config.n_steps)?;
    let coins = [Action::H.matrix(), Action::F.matrix()];
    let mut rewards = Vec::with_capacity(config.n_episodes);

    for episode in 0..config.n_episodes {
        let eps = epsilon_schedule(episode, config);
        let params = config.state_distribution.sample(&mut rng);
        let mut state = WalkerCoinState::initial(params, config.n_steps);
        let mut history = History::empty();
        let mut reward = 0.0;
        for t in 0..config.n_steps {
            let action = select_action(&q, &history, eps, &mut rng);
            state.step(&coins[action.index()])?;
            let next = history.push(action);
            if t + 1 == config.n_steps {
                reward = schmidt_norm(&state);
                td_update(&mut q, &history, action, reward, None, config.learning_rate);
            } else {
                td_update(&mut q, &history, action, 0.0, Some(&next), config.learning_rate);
            }
            history = next;
        }
        rewards.push(reward);
    }

    Ok(TrainingRecord {
        per_episode_reward: rewards,
        final_greedy_sequence: greedy_policy(&q),
        q_table: q,
    })
}

/// `runs` independent trainings in parallel, returned in run order.
pub fn train_many(config: &TrainConfig, runs: usize) -> Result<Vec<TrainingRecord>> {
    config.validate()?;
    (0..runs as u64)
        .into_par_iter()
        .map(|r| train_run(config, r))
        .collect()
}

/// Per-episode mean reward across runs and its standard error.
pub fn learning_curve(records: &[TrainingRecord]) -> Vec<(f64, f64)> {
    let Some(first) = records.first() else {
        return Vec::new();
    };
    let runs = records.len() as f64;
    (0..first.per_episode_reward.len())
        .map(|ep| {
            let vals = records.iter().map(move |r| r.per_episode_reward[ep]);
            let (mean, pop_var) = mean_and_variance(vals);
            let stderr = if records.len() > 1 {
                (pop_var * runs / (runs - 1.0)).sqrt() / runs.sqrt()
            } else {
                0.0
            };
            (mean, stderr)
        })
        .collect()
}

/// One row of the exhaustive ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSequence {
    pub sequence: CoinSequence,
    pub mean: f64,
    pub variance: f64,
}

/// Draws `n_samples` initial states from stream 0 of `seed`.
pub fn sample_initial_states(n_samples: usize, distribution: StateDistribution, seed: u64) -> Vec<InitialStateParams> {
    let mut rng = run_rng(seed, 0);
    (0..n_samples).map(|_| distribution.sample(&mut rng)).collect()
}

/// Scores all `2^n` H/F sequences on one shared sample of initial states and ranks
/// them by mean Schmidt norm, best first.
pub fn brute_force_search(
    n_steps: usize,
    n_samples: usize,
    distribution: StateDistribution,
    seed: u64,
) -> Result<Vec<RankedSequence>> {
    if n_steps > MAX_BRUTE_FORCE_STEPS {
        return Err(QwalkError::EnumerationTooLarge {
            n_steps,
            max: MAX_BRUTE_FORCE_STEPS,
        });
    }
    if n_steps == 0 {
        return Err(invalid("n_steps", 0.0, "must be positive"));
    }
    if n_samples == 0 {
        return Err(invalid("n_samples", 0.0, "must be positive"));
    }
    let samples = sample_initial_states(n_samples, distribution, seed);
    let coins = [Action::H.matrix(), Action::F.matrix()];

    let mut ranked: Vec<(u32, RankedSequence)> = (0..1u32 << n_steps)
        .into_par_iter()
        .map(|bits| {
            let history = History { bits, len: n_steps as u8 };
            let matrices: Vec<CoinMatrix> = history.actions().map(|a| coins[a.index()]).collect();
            let values: Vec<f64> = samples
                .iter()
                .map(|&p| {
                    let mut state = WalkerCoinState::initial(p, n_steps);
                    state
                        .evolve_matrices(&matrices)
                        .expect("lattice sized to the walk length");
                    schmidt_norm(&state)
                })
                .collect();
            let (mean, variance) = mean_and_variance(values.iter().copied());
            (
                bits,
                RankedSequence {
                    sequence: history.to_sequence(),
                    mean,
                    variance,
                },
            )
        })
        .collect();
    ranked.sort_by(|a, b| b.1.mean.total_cmp(&a.1.mean).then(a.0.cmp(&b.0)));
    Ok(ranked.into_iter().map(|(_, r)| r).collect())
}
