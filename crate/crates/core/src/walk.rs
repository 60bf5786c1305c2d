//! Joint walker–coin state and the single-step evolution `U = S·C`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{invalid, QwalkError, Result};
use crate::sequences::CoinSequence;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Internal two-level degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coin {
    Up,
    Down,
}

/// A 2×2 unitary acting on the coin index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix([[Complex64; 2]; 2]);

impl CoinMatrix {
    /// Wraps explicit entries, rejecting matrices that are not unitary to 1e-10.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let m = CoinMatrix(entries);
        let dev = m.unitarity_deviation();
        if dev > 1e-10 {
            return Err(invalid("coin matrix", dev, "matrix is not unitary"));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        CoinMatrix([[ONE, ZERO], [ZERO, ONE]])
    }

    /// General U(2) coin `e^{iβ} [[e^{iξ}cos α, e^{iζ}sin α], [−e^{−iζ}sin α, e^{−iξ}cos α]]`.
    ///
    /// All angles enter through periodic functions, so any real input is accepted.
    pub fn general(alpha: f64, beta: f64, xi: f64, zeta: f64) -> Self {
        let g = Complex64::from_polar(1.0, beta);
        let (s, c) = alpha.sin_cos();
        CoinMatrix([
            [
                g * Complex64::from_polar(c, xi),
                g * Complex64::from_polar(s, zeta),
            ],
            [
                -g * Complex64::from_polar(s, -zeta),
                g * Complex64::from_polar(c, -xi),
            ],
        ])
    }

    /// `(1/√2)[[1, 1], [1, −1]]`
    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        CoinMatrix([[h, h], [h, -h]])
    }

    /// `(1/√2)[[1, i], [i, 1]]`
    pub fn fourier() -> Self {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, FRAC_1_SQRT_2);
        CoinMatrix([[r, i], [i, r]])
    }

    /// Real rotation-reflection `[[cos ω, sin ω], [sin ω, −cos ω]]`; equals H at ω = π/4.
    pub fn generalized_hadamard(omega: f64) -> Self {
        let (s, c) = omega.sin_cos();
        CoinMatrix([
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-c, 0.0)],
        ])
    }

    /// Phase operator `Z(φ) = diag(1, e^{−iφ})`.
    pub fn phase(phi: f64) -> Self {
        CoinMatrix([[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, -phi)]])
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        CoinMatrix([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Largest elementwise deviation of `M·M†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = *self * self.dagger();
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { ONE } else { ZERO };
                dev = dev.max((p.0[r][c] - target).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Largest elementwise distance to `other`.
    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        d
    }

    #[inline]
    fn apply(&self, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        let m = &self.0;
        (m[0][0] * up + m[0][1] * down, m[1][0] * up + m[1][1] * down)
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        CoinMatrix(out)
    }
}

impl fmt::Display for CoinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

/// Coin state angles of the localized initial state
/// `cos(θ/2)|0,↑⟩ + e^{iφ} sin(θ/2)|0,↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateParams {
    theta: f64,
    phi: f64,
}

impl InitialStateParams {
    /// `theta ∈ [0, π]`, `phi ∈ [0, 2π]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid("theta", theta, "must lie in [0, pi]"));
        }
        if !(0.0..=2.0 * PI).contains(&phi) {
            return Err(invalid("phi", phi, "must lie in [0, 2pi]"));
        }
        Ok(InitialStateParams { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Amplitudes `ψ(x, c)` on a dense lattice `x ∈ [−L, L]`.
///
/// The lattice is sized up front for the planned number of steps, so the walk never
/// reaches the edge and no boundary condition is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerCoinState {
    up: Vec<Complex64>,
    down: Vec<Complex64>,
    half_width: usize,
    steps: usize,
}

impl WalkerCoinState {
    /// Localized state at the origin on a lattice of half-width `half_width`.
    pub fn initial(params: InitialStateParams, half_width: usize) -> Self {
        let mut state = Self::zeros(half_width);
        let (s, c) = (params.theta / 2.0).sin_cos();
        state.up[half_width] = Complex64::new(c, 0.0);
        state.down[half_width] = Complex64::from_polar(s, params.phi);
        state
    }

    /// Builds a state from explicit site amplitudes. The step count is set to the
    /// largest occupied `|x|`, and the amplitudes must already be normalized.
    pub fn from_sites(half_width: usize, sites: &[(i64, Coin, Complex64)]) -> Result<Self> {
        let mut state = Self::zeros(half_width);
        let mut reach = 0usize;
        for &(x, coin, amp) in sites {
            let idx = state
                .index(x)
                .ok_or(invalid("position", x as f64, "outside the lattice"))?;
            match coin {
                Coin::Up => state.up[idx] += amp,
                Coin::Down => state.down[idx] += amp,
            }
            if amp != ZERO {
                reach = reach.max(x.unsigned_abs() as usize);
            }
        }
        let dev = (state.norm_sqr() - 1.0).abs();
        if dev > 1e-12 {
            return Err(invalid("state norm", state.norm_sqr(), "state is not normalized"));
        }
        state.steps = reach;
        Ok(state)
    }

    fn zeros(half_width: usize) -> Self {
        let n = 2 * half_width + 1;
        WalkerCoinState {
            up: vec![ZERO; n],
            down: vec![ZERO; n],
            half_width,
            steps: 0,
        }
    }

    fn index(&self, x: i64) -> Option<usize> {
        let i = x + self.half_width as i64;
        (0..self.up.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn step_count(&self) -> usize {
        self.steps
    }

    /// Steps that still fit on the lattice.
    pub fn remaining_capacity(&self) -> usize {
        self.half_width - self.steps
    }

    /// `ψ(x, c)`; zero off the lattice.
    pub fn amplitude(&self, x: i64, coin: Coin) -> Complex64 {
        match self.index(x) {
            Some(i) => match coin {
                Coin::Up => self.up[i],
                Coin::Down => self.down[i],
            },
            None => ZERO,
        }
    }

    /// Iterates `(x, ψ(x,↑), ψ(x,↓))` over the whole lattice.
    pub fn sites(&self) -> impl Iterator<Item = (i64, Complex64, Complex64)> + '_ {
        let l = self.half_width as i64;
        self.up
            .iter()
            .zip(&self.down)
            .enumerate()
            .map(move |(i, (&u, &d))| (i as i64 - l, u, d))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up
            .iter()
            .chain(&self.down)
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Range of lattice indices that can hold amplitude.
    fn support(&self) -> std::ops::Range<usize> {
        let lo = self.half_width - self.steps.min(self.half_width);
        let hi = (self.half_width + self.steps + 1).min(self.up.len());
        lo..hi
    }

    /// Applies `coin` to the coin index at every site without shifting.
    pub fn apply_coin(&mut self, coin: &CoinMatrix) {
        for i in self.support() {
            let (u, d) = coin.apply(self.up[i], self.down[i]);
            self.up[i] = u;
            self.down[i] = d;
        }
    }

    /// One step `U = S·C`: the coin acts first, then the shift moves
    /// `(x, ↓) → (x−1, ↑)` and `(x, ↑) → (x+1, ↓)`.
    pub fn step(&mut self, coin: &CoinMatrix) -> Result<()> {
        if self.steps >= self.half_width {
            return Err(QwalkError::LatticeExhausted {
                requested: self.steps + 1,
                half_width: self.half_width,
            });
        }
        self.apply_coin(coin);
        // The outermost sites are empty while steps < half_width, so rotating
        // wraps zeros around the ends.
        std::mem::swap(&mut self.up, &mut self.down);
        self.up.rotate_left(1);
        self.down.rotate_right(1);
        self.steps += 1;
        Ok(())
    }

    /// Applies every coin of `sequence` in order. The lattice capacity is checked
    /// before anything is mutated.
    pub fn evolve(&mut self, sequence: &CoinSequence) -> Result<()> {
        let coins = sequence.matrices();
        self.evolve_matrices(&coins)
    }

    pub fn evolve_matrices(&mut self, coins: &[CoinMatrix]) -> Result<()> {
        if coins.len() > self.remaining_capacity() {
            return Err(QwalkError::LatticeExhausted {
                requested: self.steps + coins.len(),
                half_width: self.half_width,
            });
        }
        for c in coins {
            self.step(c)?;
        }
        Ok(())
    }
}

/// Runs `coins` from the localized initial state on a lattice just large enough.
pub fn run_walk(params: InitialStateParams, coins: &[CoinMatrix]) -> WalkerCoinState {
    let mut state = WalkerCoinState::initial(params, coins.len());
    state
        .evolve_matrices(coins)
        .expect("lattice sized to the walk length");
    state
}
