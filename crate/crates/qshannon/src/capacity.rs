//! Information measures for measurement channels and coherent-state sources:
//! Shannon mutual information, Holevo information, the stationarity residual
//! for accessible information, and lossy Gaussian-channel capacities.

use serde::Serialize;

use crate::detection::{channel_from_povm, ChannelMatrix, Povm, SignalBasis};
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::{gram, gram_eigenvalues, Constellation, GramKind};
use crate::{C64, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityKind {
    MutualInfo,
    HolevoInfo,
    GaussianHolevo,
    GaussianShannon,
}

/// An information quantity in both unit systems. `value_nats` is canonical;
/// `value_bits` is always `value_nats / ln 2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CapacityReport {
    pub value_nats: f64,
    pub value_bits: f64,
    pub kind: CapacityKind,
}

impl CapacityReport {
    fn new(value_nats: f64, kind: CapacityKind) -> Self {
        CapacityReport {
            value_nats,
            value_bits: value_nats / std::f64::consts::LN_2,
            kind,
        }
    }
}

/// Discrete mutual information of a measurement channel under its stored
/// priors, in nats. Terms with P(j|i) = 0 contribute nothing.
pub fn mutual_information(ch: &ChannelMatrix) -> Result<CapacityReport> {
    let xi = ch.priors();
    let n_out = ch.n_outcomes();
    let mut q = vec![0.0f64; n_out];
    for (i, &w) in xi.iter().enumerate() {
        for (qj, j) in q.iter_mut().zip(0..n_out) {
            *qj += w * ch.prob(i, j);
        }
    }
    let mut info = 0.0;
    for (i, &w) in xi.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (j, &qj) in q.iter().enumerate() {
            let p = ch.prob(i, j);
            if p > 0.0 {
                info += w * p * (p / qj).ln();
            }
        }
    }
    Ok(CapacityReport::new(info.max(0.0), CapacityKind::MutualInfo))
}

/// Holevo information of a pure-state constellation: the von Neumann entropy
/// of the prior-weighted mixture, which for pure signals is the entropy of
/// the modified Gram spectrum.
pub fn holevo_information(c: &Constellation) -> Result<CapacityReport> {
    let lam = gram_eigenvalues(&gram(c, GramKind::Modified))?;
    let s: f64 = lam.iter().map(|&l| -linalg::xlnx(l)).sum();
    Ok(CapacityReport::new(s.max(0.0), CapacityKind::HolevoInfo))
}

/// Stationarity residual for accessible information. Builds the operators
/// F_j = Σ_i ξ_iρ_i ln[P(j|i)/q_j] on the signal span and returns the largest
/// ‖Π_j(F_j − F_l)Π_l‖_F over outcome pairs. A measurement maximizing the
/// mutual information must drive this to zero; the converse is open, so a
/// small residual is evidence, not proof, of optimality.
pub fn holevo_condition_residual(c: &Constellation, povm: &Povm) -> Result<f64> {
    let ch = channel_from_povm(c, povm)?;
    let xi = c.priors();
    let m = c.len();
    let n_out = povm.n_outcomes();

    let mut q = vec![0.0f64; n_out];
    for (i, &w) in xi.iter().enumerate() {
        for (qj, j) in q.iter_mut().zip(0..n_out) {
            *qj += w * ch.prob(i, j);
        }
    }
    if let Some(j) = q.iter().position(|&qj| qj <= 0.0) {
        return Err(Error::ZeroColumn { outcome: j });
    }

    let basis = SignalBasis::new(c)?;
    let rho: Vec<CMat> = (0..m)
        .map(|i| {
            let a = basis.state(i);
            &a * a.adjoint()
        })
        .collect();
    let vecs = basis.povm_vectors(povm);
    let pi: Vec<CMat> = (0..n_out)
        .map(|l| {
            let v = CMat::from_fn(m, 1, |k, _| vecs[(k, l)]);
            &v * v.adjoint()
        })
        .collect();

    let f: Vec<CMat> = (0..n_out)
        .map(|j| {
            let mut fj = CMat::zeros(m, m);
            for (i, &w) in xi.iter().enumerate() {
                let p = ch.prob(i, j);
                if w > 0.0 && p > 0.0 {
                    fj += &rho[i] * C64::new(w * (p / q[j]).ln(), 0.0);
                }
            }
            fj
        })
        .collect();

    let mut residual = 0.0f64;
    for j in 0..n_out {
        for l in 0..n_out {
            if j == l {
                continue;
            }
            let sandwich = &pi[j] * (&f[j] - &f[l]) * &pi[l];
            let norm = sandwich.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            residual = residual.max(norm);
        }
    }
    Ok(residual)
}

/// g(x) = (x+1)ln(x+1) − x ln x, the entropy of a thermal state with mean
/// photon number x, in nats.
fn thermal_entropy(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).ln() - x * x.ln()
    }
}

fn check_photon_pair(ns: f64, nth: f64) -> Result<()> {
    if !(ns >= 0.0) || !(nth >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "photon numbers must be nonnegative, got Ns={ns}, Nth={nth}"
        )));
    }
    Ok(())
}

/// Capacity of the lossy Gaussian noise channel with an optimal collective
/// receiver: g(Ns + Nth) − g(Nth).
pub fn gaussian_capacity_holevo(ns: f64, nth: f64) -> Result<CapacityReport> {
    check_photon_pair(ns, nth)?;
    let v = thermal_entropy(ns + nth) - thermal_entropy(nth);
    Ok(CapacityReport::new(v, CapacityKind::GaussianHolevo))
}

/// Capacity of the same channel with a heterodyne receiver:
/// ln(1 + Ns/(1 + Nth)).
pub fn gaussian_capacity_shannon(ns: f64, nth: f64) -> Result<CapacityReport> {
    check_photon_pair(ns, nth)?;
    let v = (1.0 + ns / (1.0 + nth)).ln();
    Ok(CapacityReport::new(v, CapacityKind::GaussianShannon))
}

/// C_holevo − C_shannon in nats, clamped at zero (the difference is
/// nonnegative up to rounding noise).
pub fn quantum_advantage_gap(ns: f64, nth: f64) -> Result<f64> {
    let gap = gaussian_capacity_holevo(ns, nth)?.value_nats
        - gaussian_capacity_shannon(ns, nth)?.value_nats;
    debug_assert!(gap >= -1e-12);
    Ok(gap.max(0.0))
}
