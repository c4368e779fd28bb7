//! Estimation bounds and SNR formulas for quadrature receivers. Quadrature
//! convention throughout: X_c = (a + a†)/2, so the vacuum variance is ¼ —
//! every ¼ and N+1 below assumes it.

use serde::Serialize;

use crate::error::{Error, Result};

/// Bogoliubov pair (μ, ν) with μ² − ν² = 1, μ ≥ 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SqueezeParams {
    mu: f64,
    nu: f64,
}

impl SqueezeParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu >= 1.0) || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need μ ≥ 1 and finite ν, got μ={mu}, ν={nu}"
            )));
        }
        // Factored form (μ−ν)(μ+ν) avoids the worst of the cancellation in
        // μ² − ν² for moderately large parameters.
        let defect = ((mu - nu) * (mu + nu) - 1.0).abs();
        if defect > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "(μ, ν) must satisfy μ² − ν² = 1, defect {defect:.3e}"
            )));
        }
        Ok(SqueezeParams { mu, nu })
    }

    /// (cosh r, sinh r).
    pub fn from_squeeze_factor(r: f64) -> Result<Self> {
        SqueezeParams::new(r.cosh(), r.sinh())
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimationReport {
    pub variance: f64,
    pub snr: f64,
    pub receiver: String,
    /// The squeezing that realizes the bound, when one does.
    pub squeeze: Option<SqueezeParams>,
}

/// Single-quadrature Cramér–Rao bound with N added noise photons:
/// Var x̂_c = N/2 + ¼.
pub fn crb_single_quadrature(n: f64) -> Result<f64> {
    check_photons(n)?;
    Ok(n / 2.0 + 0.25)
}

/// Simultaneous two-quadrature (heterodyne) bound: Var α̂ = N + 1. The extra
/// ½ + ½ over the two single-quadrature floors is the price of measuring
/// both quadratures at once.
pub fn yuen_lax_heterodyne_var(n: f64) -> Result<f64> {
    check_photons(n)?;
    Ok(n + 1.0)
}

fn check_photons(n: f64) -> Result<()> {
    if !(n >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "photon number must be ≥ 0, got {n}"
        )));
    }
    Ok(())
}

/// Variance pair of the generalized heterodyne receiver with squeezing
/// (μ, ν): (¼ + ¼(μ+ν)², ¼ + ¼(μ−ν)²). The sum is minimized, at 1, by no
/// squeezing at all — improving one quadrature always costs the other more.
pub fn generalized_heterodyne_vars(p: SqueezeParams) -> (f64, f64) {
    let plus = p.mu + p.nu;
    let minus = p.mu - p.nu;
    (0.25 + 0.25 * plus * plus, 0.25 + 0.25 * minus * minus)
}

fn check_transmissivity(eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "transmissivity must lie in [0, 1], got {eps}"
        )));
    }
    Ok(())
}

/// SNR of the optimally squeezed probe at energy Ns through a channel with
/// transmissivity ε: 4εNs(Ns+1)/(ε + (1−ε)(2Ns+1)), achieved by
/// μ_s = (Ns+1)/√(2Ns+1), ν_s = Ns/√(2Ns+1). At ε = 1 this is 4Ns(Ns+1);
/// strong loss erases the advantage over a coherent probe.
pub fn squeezed_snr(ns: f64, eps: f64) -> Result<EstimationReport> {
    check_photons(ns)?;
    check_transmissivity(eps)?;
    let denom = eps + (1.0 - eps) * (2.0 * ns + 1.0);
    let snr = 4.0 * eps * ns * (ns + 1.0) / denom;
    let variance = eps / (4.0 * (2.0 * ns + 1.0)) + (1.0 - eps) / 4.0;
    let root = (2.0 * ns + 1.0).sqrt();
    let squeeze = SqueezeParams::new((ns + 1.0) / root, ns / root)?;
    Ok(EstimationReport {
        variance,
        snr,
        receiver: "squeezed_homodyne".into(),
        squeeze: Some(squeeze),
    })
}

/// Coherent-probe reference: SNR = 4εNs at the vacuum-floor variance ¼.
pub fn coherent_snr(ns: f64, eps: f64) -> Result<EstimationReport> {
    check_photons(ns)?;
    check_transmissivity(eps)?;
    Ok(EstimationReport {
        variance: 0.25,
        snr: 4.0 * eps * ns,
        receiver: "coherent_homodyne".into(),
        squeeze: None,
    })
}

/// Phase readout from the two quadrature estimates. No variance bound is
/// attached; this is a convenience for reporting.
pub fn phase_estimate(x_c: f64, x_s: f64) -> f64 {
    x_s.atan2(x_c)
}
