//! Momentum-space evolution of the coin state and the long-time limit of the
//! universal sequence.
//!
//! A walk started from a single site is uniform over momentum `k`, and at fixed `k`
//! one step acts on the coin alone through `S_k·C` with
//! `S_k = e^{−ik}|↓⟩⟨↑| + e^{ik}|↑⟩⟨↓|`. Conjugation by that 2×2 unitary is a real
//! 4×4 map on Pauli coordinates, so after `n` steps
//! `ρ_n = (1/2π) ∫ L_{k,n} ⋯ L_{k,1} ρ₀ dk`.
//!
//! The superoperators here use the standard Pauli basis `(I, σx, σy, σz)` with
//! `σy = [[0, −i], [i, 0]]`. [`BlochState`] stores the y coordinate with the opposite
//! sign, and the conversion happens in [`Superoperator4::apply_bloch`].

use std::ops::Mul;

use num_complex::Complex64;

use crate::entanglement::{schmidt_norm_from_bloch_norm, BlochState};
use crate::error::{invalid, QwalkError, Result};
use crate::quadrature::periodic_nodes;
use crate::sequences::{CoinLabel, CoinSequence};
use crate::walk::CoinMatrix;

/// Smallest node count accepted for the asymptotic integrals.
pub const MIN_ASYMPTOTIC_NODES: usize = 64;

pub const DEFAULT_QUADRATURE_NODES: usize = 512;

/// Real 4×4 map on Pauli coordinates `(a0, a1, a2, a3)` at momentum `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator4 {
    pub entries: [[f64; 4]; 4],
    pub k: f64,
}

impl Superoperator4 {
    pub fn identity(k: f64) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Superoperator4 { entries, k }
    }

    /// Hadamard step `S_k·H`.
    pub fn hadamard(k: f64) -> Self {
        let (s, c) = (2.0 * k).sin_cos();
        Superoperator4 {
            entries: [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, s, c],
                [0.0, 0.0, c, -s],
                [0.0, -1.0, 0.0, 0.0],
            ],
            k,
        }
    }

    /// Fourier step `S_k·F`.
    pub fn fourier(k: f64) -> Self {
        let (s, c) = (2.0 * k).sin_cos();
        Superoperator4 {
            entries: [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, c, 0.0, -s],
                [0.0, -s, 0.0, -c],
                [0.0, 0.0, 1.0, 0.0],
            ],
            k,
        }
    }

    /// Two steps, Hadamard then Fourier, in closed form.
    pub fn hadamard_fourier(k: f64) -> Self {
        let (s, c) = (2.0 * k).sin_cos();
        Superoperator4 {
            entries: [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, s, s * c, c * c],
                [0.0, c, -s * s, -s * c],
                [0.0, 0.0, c, -s],
            ],
            k,
        }
    }

    /// Superoperator of `S_k·C` for an arbitrary coin, built from the 2×2 unitary:
    /// `L[i][j] = ½ Re Tr(σ_i U σ_j U†)`.
    pub fn from_coin(coin: &CoinMatrix, k: f64) -> Self {
        let shift = [
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, k)],
            [Complex64::from_polar(1.0, -k), Complex64::new(0.0, 0.0)],
        ];
        let u = mat_mul(&shift, coin.entries());
        let u_dag = adjoint(&u);
        let paulis = pauli_basis();
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let m = mat_mul(&mat_mul(&paulis[i], &mat_mul(&u, &paulis[j])), &u_dag);
                *v = 0.5 * (m[0][0] + m[1][1]).re;
            }
        }
        Superoperator4 { entries, k }
    }

    /// Per-step superoperator for a plain H or F label.
    pub fn for_label(label: &CoinLabel, k: f64) -> Result<Self> {
        match label {
            CoinLabel::H => Ok(Self::hadamard(k)),
            CoinLabel::F => Ok(Self::fourier(k)),
            other => Err(QwalkError::UnsupportedCoin {
                label: other.to_string(),
            }),
        }
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.entries) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Applies the map to a Bloch state, converting the y coordinate in and out.
    pub fn apply_bloch(&self, b: &BlochState) -> BlochState {
        from_pauli_coords(self.apply(to_pauli_coords(b)))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entries[j][i];
            }
        }
        Superoperator4 { entries, k: self.k }
    }

    pub fn max_abs_diff(&self, other: &Superoperator4) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Matrix product `self · rhs`: `rhs` acts first.
impl Mul for Superoperator4 {
    type Output = Superoperator4;

    fn mul(self, rhs: Superoperator4) -> Superoperator4 {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|l| self.entries[i][l] * rhs.entries[l][j]).sum();
            }
        }
        Superoperator4 { entries, k: self.k }
    }
}

type C2 = [[Complex64; 2]; 2];

fn mat_mul(a: &C2, b: &C2) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn adjoint(a: &C2) -> C2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn pauli_basis() -> [C2; 4] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        [[one, o], [o, one]],
        [[o, one], [one, o]],
        [[o, -i], [i, o]],
        [[one, o], [o, -one]],
    ]
}

pub fn to_pauli_coords(b: &BlochState) -> [f64; 4] {
    [b.a0, b.a1, -b.a2, b.a3]
}

pub fn from_pauli_coords(v: [f64; 4]) -> BlochState {
    BlochState::new(v[0], v[1], -v[2], v[3])
}

pub fn superoperator_h(k: f64) -> Superoperator4 {
    Superoperator4::hadamard(k)
}

pub fn superoperator_f(k: f64) -> Superoperator4 {
    Superoperator4::fourier(k)
}

/// Unit vector spanning the nontrivial fixed axis of the Hadamard–Fourier block,
/// `(1 + sin 2k, cos 2k, 1 − sin 2k) / √(3 + sin² 2k)`.
pub fn hf_fixed_axis(k: f64) -> [f64; 3] {
    let (s, c) = (2.0 * k).sin_cos();
    let scale = 1.0 / (3.0 + s * s).sqrt();
    [(1.0 + s) * scale, c * scale, (1.0 - s) * scale]
}

/// Long-time average of `(L_k^{HF})^m`: identity on the trace direction and the
/// projector `v vᵀ` onto the fixed axis in the Bloch block. The rotating
/// components average out.
pub fn hf_limit_projector(k: f64) -> Superoperator4 {
    let v = hf_fixed_axis(k);
    let mut entries = [[0.0; 4]; 4];
    entries[0][0] = 1.0;
    for i in 0..3 {
        for j in 0..3 {
            entries[i + 1][j + 1] = v[i] * v[j];
        }
    }
    Superoperator4 { entries, k }
}

/// `(1/2π) ∫ L_k^F · P_k dk` in Pauli coordinates.
pub fn asymptotic_matrix(n_quadrature: usize) -> Result<[[f64; 4]; 4]> {
    check_nodes(n_quadrature)?;
    let mut acc = [[0.0; 4]; 4];
    for k in periodic_nodes(n_quadrature) {
        let m = Superoperator4::fourier(k) * hf_limit_projector(k);
        for (a, r) in acc.iter_mut().flatten().zip(m.entries.iter().flatten()) {
            *a += r;
        }
    }
    for a in acc.iter_mut().flatten() {
        *a /= n_quadrature as f64;
    }
    Ok(acc)
}

fn check_nodes(n: usize) -> Result<()> {
    if n < MIN_ASYMPTOTIC_NODES {
        return Err(invalid(
            "n_quadrature",
            n as f64,
            "at least 64 quadrature nodes are required",
        ));
    }
    Ok(())
}

/// Schmidt norm of the `m → ∞` universal-sequence state, with Bloch length `(2 − √3)/2`.
pub fn closed_form_asymptotic_schmidt() -> f64 {
    schmidt_norm_from_bloch_norm((2.0 - 3f64.sqrt()) / 2.0)
}

/// Limit of the reduced coin state under `[(H,F)^m, F]` as `m → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticResult {
    pub bloch: BlochState,
    pub schmidt: f64,
    pub closed_form_schmidt: f64,
}

pub fn asymptotic_reduced_state(theta: f64, phi: f64, n_quadrature: usize) -> Result<AsymptoticResult> {
    let m = asymptotic_matrix(n_quadrature)?;
    let op = Superoperator4 { entries: m, k: 0.0 };
    let bloch = op.apply_bloch(&BlochState::of_initial(theta, phi));
    Ok(AsymptoticResult {
        bloch,
        schmidt: bloch.schmidt_norm(),
        closed_form_schmidt: closed_form_asymptotic_schmidt(),
    })
}

/// Reduced coin state after `sequence` from `(θ, φ)`, integrated over momentum.
/// Exact whenever `n_quadrature > 2·len`, because the integrand is then a
/// trigonometric polynomial of lower degree.
pub fn momentum_space_evolution(
    sequence: &CoinSequence,
    theta: f64,
    phi: f64,
    n_quadrature: usize,
) -> Result<BlochState> {
    if n_quadrature == 0 {
        return Err(invalid("n_quadrature", 0.0, "must be positive"));
    }
    if let Some(bad) = sequence.labels().iter().find(|l| !l.is_plain()) {
        return Err(QwalkError::UnsupportedCoin {
            label: bad.to_string(),
        });
    }
    let start = to_pauli_coords(&BlochState::of_initial(theta, phi));
    let mut acc = [0.0; 4];
    for k in periodic_nodes(n_quadrature) {
        let (h, f) = (Superoperator4::hadamard(k), Superoperator4::fourier(k));
        let v = sequence.labels().iter().fold(start, |v, label| match label {
            CoinLabel::H => h.apply(v),
            _ => f.apply(v),
        });
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    Ok(from_pauli_coords(acc.map(|a| a / n_quadrature as f64)))
}
