//! Truncated-Fock-space brute force.
//!
//! Everything in this module deliberately avoids the closed forms used by the
//! rest of the crate: states are expanded as number-basis coefficient vectors,
//! density operators as dense matrices, and the answers come out of an
//! eigensolver. Slow and memoryless on purpose — this is the oracle the fast
//! paths are tested against.

use crate::linalg;
use crate::states::{Amplitude, Constellation, QuasiBellPair};
use crate::{tol, C64, CMat, Error, RMat, Result};

/// A pure single-mode state as number-basis coefficients c_0..c_{n_max}.
#[derive(Debug, Clone)]
pub struct FockVector {
    coeffs: Vec<C64>,
}

impl FockVector {
    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        FockVector { coeffs }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// ⟨self|other⟩ over the shared truncation.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// exp(iθ·a†a): multiplies c_n by e^{inθ}. Exact in this basis — used to
    /// cross-check the analytic amplitude-rotation route.
    pub fn phase_shifted(&self, theta: f64) -> FockVector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * C64::new(0.0, theta * n as f64).exp())
            .collect();
        FockVector { coeffs }
    }
}

/// Truncation size that keeps the Poisson tail of |α|² = ns far below
/// [`tol::FOCK_TAIL`].
pub fn auto_n_max(ns: f64) -> usize {
    (ns + 10.0 * ns.sqrt() + 20.0).ceil() as usize
}

/// Number-basis expansion of |α⟩: c_n = e^{−|α|²/2} αⁿ/√n!.
///
/// `n_max = None` sizes the truncation automatically. The whole oracle refuses
/// |α|² beyond [`tol::FOCK_SCALE_LIMIT`].
pub fn coherent_fock(alpha: Amplitude, n_max: Option<usize>) -> Result<FockVector> {
    let ns = alpha.photon_number();
    if ns > tol::FOCK_SCALE_LIMIT {
        return Err(Error::FockScale {
            got: ns,
            limit: tol::FOCK_SCALE_LIMIT,
        });
    }
    let n_max = n_max.unwrap_or_else(|| auto_n_max(ns));
    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut c = C64::new((-0.5 * ns).exp(), 0.0);
    coeffs.push(c);
    for n in 1..=n_max {
        c *= alpha.0 / (n as f64).sqrt();
        coeffs.push(c);
    }
    let v = FockVector { coeffs };
    let tail = 1.0 - v.norm_sqr();
    if tail > tol::FOCK_TAIL {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} truncates |α|² = {ns} with tail {tail:.3e} > {:.0e}",
            tol::FOCK_TAIL
        )));
    }
    Ok(v)
}

fn outer(v: &FockVector) -> CMat {
    let d = v.coeffs.len();
    CMat::from_fn(d, d, |i, j| v.coeffs[i] * v.coeffs[j].conj())
}

/// Common truncation for a set of amplitudes.
fn common_n_max(amps: &[Amplitude], n_max: Option<usize>) -> usize {
    n_max.unwrap_or_else(|| {
        amps.iter()
            .map(|a| auto_n_max(a.photon_number()))
            .max()
            .unwrap_or(20)
    })
}

/// Minimum binary error probability by brute force: eigendecompose
/// ξ₁ρ₁ − ξ₀ρ₀ and take P_e = ½(1 − Σ|λ|) (equivalently ξ₁ minus the positive
/// part of the spectrum).
pub fn helstrom_binary_oracle(
    a0: Amplitude,
    a1: Amplitude,
    xi0: f64,
    n_max: Option<usize>,
) -> Result<f64> {
    if !(xi0 > 0.0 && xi0 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "prior ξ₀ must lie in (0,1), got {xi0}"
        )));
    }
    let dim = common_n_max(&[a0, a1], n_max);
    let psi0 = coherent_fock(a0, Some(dim))?;
    let psi1 = coherent_fock(a1, Some(dim))?;
    let delta = outer(&psi1) * C64::new(1.0 - xi0, 0.0) - outer(&psi0) * C64::new(xi0, 0.0);
    let eig = linalg::hermitian_eigen(&delta)?;
    let trace_norm: f64 = eig.values.iter().map(|l| l.abs()).sum();
    Ok(0.5 * (1.0 - trace_norm))
}

/// Von Neumann entropy (nats) of ρ = Σ ξ_i |α_i⟩⟨α_i| by dense
/// eigendecomposition in the number basis.
pub fn von_neumann_entropy_oracle(
    amps: &[Amplitude],
    priors: &[f64],
    n_max: Option<usize>,
) -> Result<f64> {
    if amps.len() != priors.len() || amps.is_empty() {
        return Err(Error::InvalidParameter(
            "need matching, nonempty amplitude/prior lists".into(),
        ));
    }
    let dim = common_n_max(amps, n_max);
    let mut rho = CMat::zeros(dim + 1, dim + 1);
    for (a, &p) in amps.iter().zip(priors) {
        let v = coherent_fock(*a, Some(dim))?;
        rho += outer(&v) * C64::new(p, 0.0);
    }
    let eig = linalg::hermitian_eigen(&rho)?;
    Ok(-eig
        .values
        .iter()
        .map(|&l| linalg::xlnx(l.max(0.0)))
        .sum::<f64>())
}

/// Square-root-measurement channel by brute force: Γ = Σ_m |α_m⟩⟨α_m| in the
/// number basis, |μ_l⟩ = Γ^{−1/2}|α_l⟩ (pseudo-inverse on the null space),
/// P(j|i) = |⟨μ_j|α_i⟩|². Row i is the outcome distribution for input i.
pub fn srm_channel_oracle(c: &Constellation, n_max: Option<usize>) -> Result<RMat> {
    let m = c.len();
    let dim = common_n_max(c.amplitudes(), n_max);
    let states: Vec<FockVector> = c
        .amplitudes()
        .iter()
        .map(|&a| coherent_fock(a, Some(dim)))
        .collect::<Result<_>>()?;
    let mut gamma = CMat::zeros(dim + 1, dim + 1);
    for v in &states {
        gamma += outer(v);
    }
    let inv_sqrt = linalg::psd_pinv_sqrt(&gamma, 1e-12)?;
    let mus: Vec<CMat> = states
        .iter()
        .map(|v| &inv_sqrt * CMat::from_fn(dim + 1, 1, |i, _| v.coeffs()[i]))
        .collect();
    Ok(RMat::from_fn(m, m, |i, j| {
        let mut ip = C64::new(0.0, 0.0);
        for n in 0..=dim {
            ip += mus[j][(n, 0)].conj() * states[i].coeffs()[n];
        }
        ip.norm_sqr()
    }))
}

/// A two-mode pure state as a weighted sum of product terms
/// Σ w_k |x_k⟩⊗|y_k⟩ — enough structure for quasi-Bell states.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    terms: Vec<(C64, FockVector, FockVector)>,
}

impl TwoModeState {
    pub fn new(terms: Vec<(C64, FockVector, FockVector)>) -> Self {
        TwoModeState { terms }
    }

    /// ⟨self|other⟩ by linear extension of ⟨x⊗y|x'⊗y'⟩ = ⟨x|x'⟩⟨y|y'⟩.
    pub fn overlap(&self, other: &TwoModeState) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (wa, xa, ya) in &self.terms {
            for (wb, xb, yb) in &other.terms {
                acc += wa.conj() * wb * xa.inner(xb) * ya.inner(yb);
            }
        }
        acc
    }

    /// Apply exp(iθ·a†a) to the second mode.
    pub fn phase_shift_b(&self, theta: f64) -> TwoModeState {
        TwoModeState {
            terms: self
                .terms
                .iter()
                .map(|(w, x, y)| (*w, x.clone(), y.phase_shifted(theta)))
                .collect(),
        }
    }

    /// Reduced density operator of mode A:
    /// ρ_A = Σ_ab w_a w̄_b ⟨y_b|y_a⟩ |x_a⟩⟨x_b|.
    pub fn reduced_a(&self) -> CMat {
        let dim = self
            .terms
            .iter()
            .map(|(_, x, _)| x.coeffs().len())
            .max()
            .unwrap_or(1);
        let mut rho = CMat::zeros(dim, dim);
        for (wa, xa, ya) in &self.terms {
            for (wb, xb, yb) in &self.terms {
                let scale = wa * wb.conj() * yb.inner(ya);
                for i in 0..xa.coeffs().len() {
                    for j in 0..xb.coeffs().len() {
                        rho[(i, j)] += scale * xa.coeffs()[i] * xb.coeffs()[j].conj();
                    }
                }
            }
        }
        rho
    }
}

/// Overlap of two product states ⟨x₀⊗x₁|y₀⊗y₁⟩.
pub fn two_mode_overlap(x: (&FockVector, &FockVector), y: (&FockVector, &FockVector)) -> C64 {
    x.0.inner(y.0) * x.1.inner(y.1)
}

/// Quasi-Bell state Ψ_index (1-based) as a two-mode Fock expansion.
pub fn quasi_bell_fock(pair: &QuasiBellPair, index: usize, n_max: Option<usize>) -> Result<TwoModeState> {
    if !(1..=4).contains(&index) {
        return Err(Error::InvalidParameter(format!(
            "quasi-Bell index must be 1..=4, got {index}"
        )));
    }
    let dim = common_n_max(&[pair.alpha], n_max);
    let plus = coherent_fock(pair.alpha, Some(dim))?;
    let minus = coherent_fock(Amplitude(-pair.alpha.0), Some(dim))?;
    let h = C64::new(pair.h[index - 1], 0.0);
    let sign = if index == 2 || index == 4 { -1.0 } else { 1.0 };
    let terms = match index {
        1 | 2 => vec![
            (h, plus.clone(), plus.clone()),
            (h * sign, minus.clone(), minus),
        ],
        _ => vec![
            (h, plus.clone(), minus.clone()),
            (h * sign, minus, plus),
        ],
    };
    Ok(TwoModeState::new(terms))
}

/// Entropy (nats) of a density matrix given as a dense Hermitian PSD matrix.
pub fn matrix_entropy(rho: &CMat) -> Result<f64> {
    let eig = linalg::hermitian_eigen(rho)?;
    Ok(-eig
        .values
        .iter()
        .map(|&l| linalg::xlnx(l.max(0.0)))
        .sum::<f64>())
}
