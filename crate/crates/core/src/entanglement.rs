//! Reduced coin density matrix, Bloch vector and Schmidt coefficients.
//!
//! Bloch components are taken against `(I, σx, σyᵀ, σz)`, i.e. `a2 = Im ρ↑↓`.
//! With this sign the initial coin state `cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩` has Bloch
//! vector `½(1, cos φ sin θ, −sin φ sin θ, cos θ)`.

use num_complex::Complex64;

use crate::walk::WalkerCoinState;

/// Tolerance under which a negative eigenvalue of ρ is treated as rounding noise.
const EIGEN_CLAMP: f64 = 1e-12;

/// 2×2 reduced density matrix of the coin, `ρ[c][c'] = Σ_x ψ(x,c) ψ*(x,c')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensity(pub [[Complex64; 2]; 2]);

impl CoinDensity {
    pub fn of_state(state: &WalkerCoinState) -> Self {
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (_, u, d) in state.sites() {
            rho[0][0] += u * u.conj();
            rho[0][1] += u * d.conj();
            rho[1][1] += d * d.conj();
        }
        rho[1][0] = rho[0][1].conj();
        CoinDensity(rho)
    }

    pub fn trace(&self) -> f64 {
        (self.0[0][0] + self.0[1][1]).re
    }

    /// Eigenvalues in descending order from the 2×2 closed form, tiny negatives clamped.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let p = self.0[0][0].re;
        let q = self.0[1][1].re;
        let half_gap = 0.5 * (p - q);
        let r = (half_gap * half_gap + self.0[0][1].norm_sqr()).sqrt();
        let mid = 0.5 * (p + q);
        let clamp = |v: f64| {
            debug_assert!(v >= -EIGEN_CLAMP, "density matrix has eigenvalue {v}");
            v.max(0.0)
        };
        [clamp(mid + r), clamp(mid - r)]
    }

    pub fn bloch(&self) -> BlochState {
        BlochState::from_density(self)
    }
}

/// `(a0, a1, a2, a3)` with `ρ = a0·I + a1·σx + a2·σyᵀ + a3·σz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl BlochState {
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        BlochState { a0, a1, a2, a3 }
    }

    /// `a_j = Re Tr(ρ σ_j) / 2`.
    pub fn from_density(rho: &CoinDensity) -> Self {
        let m = &rho.0;
        BlochState {
            a0: 0.5 * (m[0][0] + m[1][1]).re,
            a1: 0.5 * (m[0][1] + m[1][0]).re,
            a2: 0.5 * (m[0][1] - m[1][0]).im,
            a3: 0.5 * (m[0][0] - m[1][1]).re,
        }
    }

    /// Closed-form Bloch vector of the localized initial state.
    pub fn of_initial(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        BlochState::new(0.5, 0.5 * cp * st, -0.5 * sp * st, 0.5 * ct)
    }

    pub fn to_density(&self) -> CoinDensity {
        let off = Complex64::new(self.a1, self.a2);
        CoinDensity([
            [Complex64::new(self.a0 + self.a3, 0.0), off],
            [off.conj(), Complex64::new(self.a0 - self.a3, 0.0)],
        ])
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        BlochState::new(v[0], v[1], v[2], v[3])
    }

    /// `|ᾱ| = √(a1² + a2² + a3²)`
    pub fn vector_norm(&self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3).sqrt()
    }

    /// `√(½ + |ᾱ|) + √(½ − |ᾱ|)`, for a unit-trace state.
    pub fn schmidt_norm(&self) -> f64 {
        schmidt_norm_from_bloch_norm(self.vector_norm())
    }

    /// Largest componentwise distance.
    pub fn max_abs_diff(&self, other: &BlochState) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Schmidt norm as a function of the Bloch vector length `|ᾱ| ∈ [0, ½]`.
pub fn schmidt_norm_from_bloch_norm(norm: f64) -> f64 {
    let n = norm.clamp(0.0, 0.5);
    (0.5 + n).sqrt() + (0.5 - n).sqrt()
}

/// Schmidt coefficients of the coin–walker bipartition, `λ₁ ≥ λ₂ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SchmidtPair {
    pub fn sum(&self) -> f64 {
        self.lambda1 + self.lambda2
    }
}

pub fn reduced_coin_density(state: &WalkerCoinState) -> CoinDensity {
    CoinDensity::of_state(state)
}

pub fn bloch_vector(rho: &CoinDensity) -> BlochState {
    BlochState::from_density(rho)
}

/// Entanglement measure and RL reward, computed from the Bloch vector length.
pub fn schmidt_norm(state: &WalkerCoinState) -> f64 {
    CoinDensity::of_state(state).bloch().schmidt_norm()
}

/// Square roots of the eigenvalues of the reduced coin density matrix.
pub fn schmidt_coefficients(state: &WalkerCoinState) -> SchmidtPair {
    let [hi, lo] = CoinDensity::of_state(state).eigenvalues();
    SchmidtPair {
        lambda1: hi.sqrt(),
        lambda2: lo.sqrt(),
    }
}
