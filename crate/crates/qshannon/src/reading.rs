//! Quantum reading of a binary phase memory: a cell imprints a phase shift
//! U(θ) = exp(iθ·a†a) on mode B (bit 1) or leaves it alone (bit 0), and the
//! reader distinguishes the two channel outputs. With the entangled
//! quasi-Bell probe Ψ₂ the two outputs are exactly orthogonal at θ = π, so
//! the bit is read without error at any signal energy.

use std::f64::consts::PI;

use serde::Serialize;

use crate::detection;
use crate::error::{Error, Result};
use crate::states::Amplitude;
use crate::{tol, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadingSource {
    Coherent,
    QuasiBell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadingReceiver {
    Homodyne,
    Quantum,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReadingScenario {
    pub alpha: Amplitude,
    pub theta: f64,
    pub source: ReadingSource,
    pub receiver: ReadingReceiver,
    pub priors: (f64, f64),
}

impl ReadingScenario {
    pub fn new(
        alpha: Amplitude,
        theta: f64,
        source: ReadingSource,
        receiver: ReadingReceiver,
        priors: (f64, f64),
    ) -> Result<Self> {
        if !(alpha.photon_number() > 0.0) || !alpha.photon_number().is_finite() {
            return Err(Error::InvalidParameter(
                "reading needs a nonzero probe amplitude".into(),
            ));
        }
        if !(0.0..2.0 * PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "phase shift must lie in [0, 2π), got {theta}"
            )));
        }
        let (x0, x1) = priors;
        if !(x0 > 0.0 && x1 > 0.0 && (x0 + x1 - 1.0).abs() <= tol::STRUCTURE) {
            return Err(Error::InvalidParameter(format!(
                "priors must be positive and sum to 1, got ({x0}, {x1})"
            )));
        }
        Ok(ReadingScenario {
            alpha,
            theta,
            source,
            receiver,
            priors,
        })
    }

    pub fn uniform(
        alpha: Amplitude,
        source: ReadingSource,
        receiver: ReadingReceiver,
    ) -> Result<Self> {
        ReadingScenario::new(alpha, PI, source, receiver, (0.5, 0.5))
    }
}

/// |⟨Ψ₂(0)|I ⊗ U_B(θ)|Ψ₂(0)⟩| in closed form, expanding the four coherent
/// product terms:
///
///   [exp(N(e^{iθ}−1)) − κ·exp(−N(1+e^{iθ}))] / (1 − κ²),   N = |α|².
///
/// The two terms cancel identically at θ = π (both equal κ), independent of
/// the energy — that point is snapped to an exact zero.
pub fn reading_overlap(alpha: Amplitude, theta: f64) -> Result<f64> {
    let n = alpha.photon_number();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(
            "reading needs a nonzero probe amplitude".into(),
        ));
    }
    if (theta - PI).abs() < 1e-15 {
        return Ok(0.0);
    }
    let kappa = (-2.0 * n).exp();
    let eit = C64::new(theta.cos(), theta.sin());
    let one = C64::new(1.0, 0.0);
    let direct = (n * (eit - one)).exp();
    let cross = (-n * (one + eit)).exp() * kappa;
    Ok((direct - cross).norm() / (1.0 - kappa * kappa))
}

fn binary_entropy_bits(p: f64) -> f64 {
    use crate::linalg::xlnx;
    (-xlnx(p) - xlnx(1.0 - p)) / std::f64::consts::LN_2
}

/// Entanglement of formation of the quasi-Bell state Ψ_index built on the
/// ±α pair with overlap κ = ⟨α|−α⟩. Ψ₂ and Ψ₄ are maximally entangled for
/// every κ < 1; Ψ₁ and Ψ₃ carry H₂((1+D)/2) ebits, D = 2κ/(1+κ²) — the
/// spectrum of the reduced single-mode state.
pub fn entanglement_of_formation(pair_index: usize, kappa: f64) -> Result<f64> {
    if !(1..=4).contains(&pair_index) {
        return Err(Error::InvalidParameter(format!(
            "quasi-Bell index must be 1..=4, got {pair_index}"
        )));
    }
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::InvalidParameter(format!(
            "overlap must satisfy 0 ≤ κ < 1, got {kappa}"
        )));
    }
    Ok(match pair_index {
        2 | 4 => 1.0,
        _ => {
            let d = 2.0 * kappa / (1.0 + kappa * kappa);
            binary_entropy_bits(0.5 * (1.0 + d))
        }
    })
}

/// Average error probability of reading the π-shift binary memory.
///
/// - coherent probe, homodyne: likelihood-ratio threshold between N(±|α|, ¼),
///   x₀ = (σ²/2|α|)·ln(ξ₁/ξ₀); reduces to Q(2|α|) at uniform priors.
/// - coherent probe, quantum optimum: ½[1 − √(1 − 4ξ₀ξ₁e^{−4|α|²})].
/// - quasi-Bell probe, quantum optimum: exactly 0 — the two outputs are
///   orthogonal, so a projective measurement reads the bit perfectly.
pub fn reading_error(s: &ReadingScenario) -> Result<f64> {
    if (s.theta - PI).abs() > 1e-12 {
        return Err(Error::Unsupported(format!(
            "reading error formulas assume the π-shift memory, got θ = {}",
            s.theta
        )));
    }
    let n = s.alpha.photon_number();
    let a = n.sqrt();
    let (x0, x1) = s.priors;
    match (s.source, s.receiver) {
        (ReadingSource::Coherent, ReadingReceiver::Homodyne) => {
            let sigma = 0.5;
            let t = sigma * sigma / (2.0 * a) * (x1 / x0).ln();
            Ok(x0 * detection::qfunc((a - t) / sigma) + x1 * detection::qfunc((a + t) / sigma))
        }
        (ReadingSource::Coherent, ReadingReceiver::Quantum) => {
            Ok(0.5 * (1.0 - (1.0 - 4.0 * x0 * x1 * (-4.0 * n).exp()).sqrt()))
        }
        (ReadingSource::QuasiBell, ReadingReceiver::Quantum) => Ok(0.0),
        (ReadingSource::QuasiBell, ReadingReceiver::Homodyne) => Err(Error::Unsupported(
            "no homodyne rule is defined for the quasi-Bell probe".into(),
        )),
    }
}
