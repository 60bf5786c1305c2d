//! Coin sequences: construction, text form and θ-averaged evaluation.
//!
//! Text grammar (whitespace ignored, commas optional between tokens):
//!
//! ```text
//! sequence := item ((',')? item)*
//! item     := coin ('^' count)?
//! coin     := 'H' | 'F' | 'GH(' float ')' | 'HZ(' float ')' | 'FZ(' float ')'
//! ```
//!
//! `GH(ω)` is the generalized Hadamard coin, `HZ(φ)`/`FZ(φ)` are `H·Z(φ)`/`F·Z(φ)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::schmidt_norm;
use crate::error::{invalid, QwalkError, Result};
use crate::walk::{CoinMatrix, InitialStateParams, WalkerCoinState};

/// One step of a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoinLabel {
    H,
    F,
    /// Generalized Hadamard `H̃(ω)`.
    GeneralizedHadamard(f64),
    /// `H·Z(φ)`
    PhasedH(f64),
    /// `F·Z(φ)`
    PhasedF(f64),
    Custom(CoinMatrix),
}

impl CoinLabel {
    pub fn matrix(&self) -> CoinMatrix {
        match *self {
            CoinLabel::H => CoinMatrix::hadamard(),
            CoinLabel::F => CoinMatrix::fourier(),
            CoinLabel::GeneralizedHadamard(w) => CoinMatrix::generalized_hadamard(w),
            CoinLabel::PhasedH(p) => CoinMatrix::hadamard() * CoinMatrix::phase(p),
            CoinLabel::PhasedF(p) => CoinMatrix::fourier() * CoinMatrix::phase(p),
            CoinLabel::Custom(m) => m,
        }
    }

    pub fn is_plain(&self) -> bool {
        matches!(self, CoinLabel::H | CoinLabel::F)
    }
}

impl fmt::Display for CoinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinLabel::H => f.write_str("H"),
            CoinLabel::F => f.write_str("F"),
            CoinLabel::GeneralizedHadamard(w) => write!(f, "GH({w:?})"),
            CoinLabel::PhasedH(p) => write!(f, "HZ({p:?})"),
            CoinLabel::PhasedF(p) => write!(f, "FZ({p:?})"),
            CoinLabel::Custom(m) => write!(f, "U{m}"),
        }
    }
}

/// Ordered coins, applied first to last.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoinSequence(Vec<CoinLabel>);

impl CoinSequence {
    pub fn new(coins: Vec<CoinLabel>) -> Self {
        CoinSequence(coins)
    }

    /// `[(H, F)^m, F]`, length `2m + 1`.
    pub fn universal(m: usize) -> Result<Self> {
        Self::alternating(m, CoinLabel::H)
    }

    /// `[(H̃(ω), F)^m, F]`.
    pub fn generalized_universal(m: usize, omega: f64) -> Result<Self> {
        Self::alternating(m, CoinLabel::GeneralizedHadamard(omega))
    }

    fn alternating(m: usize, first: CoinLabel) -> Result<Self> {
        if m < 1 {
            return Err(invalid("m", m as f64, "must be at least 1"));
        }
        let mut coins = Vec::with_capacity(2 * m + 1);
        for _ in 0..m {
            coins.push(first);
            coins.push(CoinLabel::F);
        }
        coins.push(CoinLabel::F);
        Ok(CoinSequence(coins))
    }

    /// Replaces every H/F by `H·Z(φ)`/`F·Z(φ)`, which cancels a relative phase φ of the
    /// initial coin state.
    pub fn phase_compensated(&self, phi: f64) -> Result<Self> {
        self.0
            .iter()
            .map(|c| match c {
                CoinLabel::H => Ok(CoinLabel::PhasedH(phi)),
                CoinLabel::F => Ok(CoinLabel::PhasedF(phi)),
                other => Err(QwalkError::UnsupportedCoin {
                    label: other.to_string(),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(CoinSequence)
    }

    /// Parses the text grammar described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        Parser { text, pos: 0 }.sequence()
    }

    pub fn from_plain(actions: &str) -> Result<Self> {
        Self::parse(actions)
    }

    pub fn labels(&self) -> &[CoinLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, label: CoinLabel) {
        self.0.push(label);
    }

    pub fn matrices(&self) -> Vec<CoinMatrix> {
        self.0.iter().map(CoinLabel::matrix).collect()
    }

    /// `"HFHFF"`-style string when every coin is H or F.
    pub fn compact(&self) -> Option<String> {
        self.0
            .iter()
            .map(|c| match c {
                CoinLabel::H => Some('H'),
                CoinLabel::F => Some('F'),
                _ => None,
            })
            .collect()
    }

    /// Runs the sequence from the localized state `(θ, φ)`.
    pub fn run(&self, params: InitialStateParams) -> Result<WalkerCoinState> {
        if self.is_empty() {
            return Err(QwalkError::Empty("coin sequence"));
        }
        let mut state = WalkerCoinState::initial(params, self.len());
        state.evolve(self)?;
        Ok(state)
    }

    /// Final Schmidt norm from the localized state `(θ, φ)`.
    pub fn schmidt_norm_from(&self, params: InitialStateParams) -> Result<f64> {
        Ok(schmidt_norm(&self.run(params)?))
    }
}

/// Comma-separated tokens, with runs of identical coins folded into `X^k`.
impl fmt::Display for CoinSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{}", self.0[i])?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for CoinSequence {
    type Err = QwalkError;

    fn from_str(s: &str) -> Result<Self> {
        CoinSequence::parse(s)
    }
}

pub fn format_sequence(seq: &CoinSequence) -> String {
    seq.to_string()
}

pub fn parse_sequence(text: &str) -> Result<CoinSequence> {
    CoinSequence::parse(text)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(QwalkError::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn sequence(mut self) -> Result<CoinSequence> {
        let mut coins = Vec::new();
        self.skip_ws();
        while self.pos < self.text.len() {
            let (label, count) = self.item()?;
            coins.extend(std::iter::repeat_n(label, count));
            self.skip_ws();
            if self.eat(",") {
                self.skip_ws();
                if self.pos == self.text.len() {
                    return self.error("trailing comma");
                }
            }
        }
        if coins.is_empty() {
            return self.error("empty sequence");
        }
        Ok(CoinSequence(coins))
    }

    fn item(&mut self) -> Result<(CoinLabel, usize)> {
        let label = if self.eat("GH(") {
            CoinLabel::GeneralizedHadamard(self.argument()?)
        } else if self.eat("HZ(") {
            CoinLabel::PhasedH(self.argument()?)
        } else if self.eat("FZ(") {
            CoinLabel::PhasedF(self.argument()?)
        } else if self.eat("H") {
            CoinLabel::H
        } else if self.eat("F") {
            CoinLabel::F
        } else {
            let found = self.rest().chars().next().unwrap_or(' ');
            return self.error(format!("expected H, F, GH(..), HZ(..) or FZ(..), found '{found}'"));
        };
        self.skip_ws();
        let count = if self.eat("^") {
            self.skip_ws();
            let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
            if digits == 0 {
                return self.error("expected repeat count after '^'");
            }
            let n: usize = match self.rest()[..digits].parse() {
                Ok(n) => n,
                Err(_) => return self.error("repeat count out of range"),
            };
            if n == 0 {
                return self.error("repeat count must be positive");
            }
            self.pos += digits;
            n
        } else {
            1
        };
        Ok((label, count))
    }

    fn argument(&mut self) -> Result<f64> {
        let Some(close) = self.rest().find(')') else {
            return self.error("missing ')'");
        };
        let raw = &self.rest()[..close];
        match raw.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos += close + 1;
                Ok(v)
            }
            _ => self.error(format!("invalid number '{raw}'")),
        }
    }
}

/// Schmidt norms of a sequence over a set of initial angles θ at fixed φ.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceEvaluation {
    pub per_theta: Vec<(f64, f64)>,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub samples: usize,
}

impl SequenceEvaluation {
    pub fn from_values(per_theta: Vec<(f64, f64)>) -> Self {
        let (mean, variance) = mean_and_variance(per_theta.iter().map(|p| p.1));
        SequenceEvaluation {
            samples: per_theta.len(),
            per_theta,
            mean,
            variance,
        }
    }
}

/// Two-pass mean and population variance.
pub fn mean_and_variance(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (sum, n) = values.clone().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = sum / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    (mean, var)
}

/// Evaluates `seq` from every `(θ, φ)` initial state. Runs in parallel; results keep
/// the order of `thetas`.
pub fn evaluate_sequence(seq: &CoinSequence, thetas: &[f64], phi: f64) -> Result<SequenceEvaluation> {
    if thetas.is_empty() {
        return Err(QwalkError::Empty("theta list"));
    }
    if seq.is_empty() {
        return Err(QwalkError::Empty("coin sequence"));
    }
    let coins = seq.matrices();
    let per_theta = thetas
        .par_iter()
        .map(|&theta| {
            let params = InitialStateParams::new(theta, phi)?;
            let mut state = WalkerCoinState::initial(params, coins.len());
            state.evolve_matrices(&coins)?;
            Ok((theta, schmidt_norm(&state)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceEvaluation::from_values(per_theta))
}
