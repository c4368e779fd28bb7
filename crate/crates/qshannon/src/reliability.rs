//! Reliability functions and cutoff rates: error exponents for collective
//! (entangled) decoding and for symbol-by-symbol measurement channels, the
//! discrete and Gaussian cutoff-rate closed forms, and the code-length
//! planner built on P_e ≤ 2·exp[−n(R_Q − R)].

use serde::Serialize;

use crate::detection::ChannelMatrix;
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::{gram, Constellation, GramKind};
use crate::{tol, C64, CMat, RMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Quantum,
    Semi,
}

/// E(R) sampled on a rate grid, for plotting and for the CLI sweep output.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentCurve {
    pub rate_grid: Vec<f64>,
    pub exponent: Vec<f64>,
    pub kind: CurveKind,
}

impl ExponentCurve {
    pub fn quantum(c: &Constellation, rates: &[f64]) -> Result<Self> {
        let exponent = rates
            .iter()
            .map(|&r| reliability_quantum(c, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentCurve {
            rate_grid: rates.to_vec(),
            exponent,
            kind: CurveKind::Quantum,
        })
    }

    pub fn semi(ch: &ChannelMatrix, rates: &[f64]) -> Result<Self> {
        let exponent = rates
            .iter()
            .map(|&r| reliability_semi(ch, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentCurve {
            rate_grid: rates.to_vec(),
            exponent,
            kind: CurveKind::Semi,
        })
    }
}

/// Cutoff rates of a signal set. `r_q` minimizes ξᵀΓξ over the simplex for
/// the modulus-squared Gram Γ; `r_semi_upper` does the same for the modulus
/// Gram, which bounds it from below since |⟨ψ_i|ψ_j⟩| ≥ |⟨ψ_i|ψ_j⟩|².
/// `r_q_uniform` is the uniform-prior shortcut −ln[(1/M²)ΣΣ(Γ)_{ij}], which
/// equals `r_q` for symmetric sets.
#[derive(Debug, Clone, Serialize)]
pub struct CutoffReport {
    pub r_q: f64,
    pub r_semi_upper: f64,
    pub r_q_uniform: f64,
    pub optimal_priors: Vec<f64>,
}

fn modified_gram_with(c: &Constellation, xi: &[f64]) -> CMat {
    let g = gram(c, GramKind::Plain);
    let m = c.len();
    CMat::from_fn(m, m, |i, j| {
        g.entries()[(i, j)] * C64::new((xi[i] * xi[j]).sqrt(), 0.0)
    })
}

fn spectrum_with(c: &Constellation, xi: &[f64]) -> Result<Vec<f64>> {
    let eig = linalg::hermitian_eigen(&modified_gram_with(c, xi))?;
    linalg::clamp_psd_spectrum(&eig.values)
}

/// μ_Q(ρ_ξ, s) = −ln Tr ρ_ξ^{1+s} = −ln Σ_j λ_j^{1+s} over the modified-Gram
/// spectrum, using the constellation's stored priors. μ_Q(·, 0) = 0.
pub fn mu_q(c: &Constellation, s: f64) -> Result<f64> {
    check_s(s)?;
    let lam = spectrum_with(c, c.priors())?;
    Ok(mu_from_spectrum(&lam, s))
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!(
            "s must lie in [0, 1], got {s}"
        )));
    }
    Ok(())
}

fn mu_from_spectrum(lam: &[f64], s: f64) -> f64 {
    -lam.iter().map(|&l| l.powf(1.0 + s)).sum::<f64>().ln()
}

/// dμ_Q/ds = −Σ λ^{1+s} ln λ / Σ λ^{1+s}; equals the Holevo information at
/// s = 0, which is why the exponent vanishes exactly beyond capacity.
pub fn mu_q_derivative(c: &Constellation, s: f64) -> Result<f64> {
    check_s(s)?;
    let lam = spectrum_with(c, c.priors())?;
    let mut num = 0.0;
    let mut den = 0.0;
    for &l in &lam {
        if l > 0.0 {
            let p = l.powf(1.0 + s);
            num -= p * l.ln();
            den += p;
        }
    }
    Ok(num / den)
}

fn max_over_s(f: impl Fn(f64) -> f64) -> f64 {
    let (_, best) = linalg::golden_max(0.0, 1.0, tol::SCALAR_SEARCH, &f);
    // The golden bracket never lands exactly on the right boundary, which is
    // the maximizer whenever the objective is still increasing at s = 1
    // (always the case at R = 0). Values inside the rounding-noise floor of
    // the spectrum sum are reported as exactly 0.
    let v = best.max(f(1.0));
    if v < 1e-13 {
        0.0
    } else {
        v
    }
}

/// Error exponent for collective decoding of the constellation at rate `r`
/// nats/symbol: max_{0≤s≤1} [μ_Q(ρ_ξ, s) − sR] with the stored priors,
/// floored at 0.
pub fn reliability_quantum(c: &Constellation, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("rate must be ≥ 0, got {r}")));
    }
    let lam = spectrum_with(c, c.priors())?;
    Ok(max_over_s(|s| mu_from_spectrum(&lam, s) - s * r))
}

/// Same exponent additionally maximized over the prior simplex. For each s
/// the inner problem min_ξ Tr ρ_ξ^{1+s} is convex and solved by projected
/// gradient descent; the outer search scans s coarsely and refines by golden
/// section. Returns the exponent and the maximizing priors.
pub fn reliability_quantum_best_priors(c: &Constellation, r: f64) -> Result<(f64, Vec<f64>)> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("rate must be ≥ 0, got {r}")));
    }
    let objective = |s: f64| -> Result<(f64, Vec<f64>)> {
        let (h, xi) = min_trace_power(c, s)?;
        Ok((-h.ln() - s * r, xi))
    };
    let mut best_s = 0.0;
    let mut best = 0.0f64;
    for k in 0..=20 {
        let s = k as f64 / 20.0;
        let (v, _) = objective(s)?;
        if v > best {
            best = v;
            best_s = s;
        }
    }
    let lo = (best_s - 0.05).max(0.0);
    let hi = (best_s + 0.05).min(1.0);
    let (s_star, refined) = linalg::golden_max(lo, hi, tol::SCALAR_SEARCH, |s| {
        objective(s).map(|(v, _)| v).unwrap_or(f64::NEG_INFINITY)
    });
    let (value, xi) = if refined > best {
        let (v, xi) = objective(s_star)?;
        (v, xi)
    } else {
        let (v, xi) = objective(best_s)?;
        (v, xi)
    };
    if value <= 0.0 {
        return Ok((0.0, c.priors().to_vec()));
    }
    Ok((value, xi))
}

/// Projected-gradient minimization of ξ ↦ Tr ρ_ξ^{1+s} over the simplex.
/// The gradient is (1+s)·⟨ψ_i|ρ_ξ^s|ψ_i⟩ = (1+s)·v_iᴴ M^{s−1} v_i with
/// M the modified Gram and v_i = D^{1/2}G e_i.
fn min_trace_power(c: &Constellation, s: f64) -> Result<(f64, Vec<f64>)> {
    let m = c.len();
    let g = gram(c, GramKind::Plain);
    let mut xi = vec![1.0 / m as f64; m];

    let value = |xi: &[f64]| -> Result<f64> {
        Ok(spectrum_with(c, xi)?
            .iter()
            .map(|&l| l.powf(1.0 + s))
            .sum())
    };
    let grad = |xi: &[f64]| -> Result<Vec<f64>> {
        let mg = modified_gram_with(c, xi);
        let pow = linalg::hermitian_fn(&mg, |l| if l > 1e-14 { l.powf(s - 1.0) } else { 0.0 })?;
        let mut out = vec![0.0; m];
        for (i, o) in out.iter_mut().enumerate() {
            let v = CMat::from_fn(m, 1, |k, _| {
                g.entries()[(k, i)] * C64::new(xi[k].sqrt(), 0.0)
            });
            *o = (1.0 + s) * (v.adjoint() * &pow * &v)[(0, 0)].re;
        }
        Ok(out)
    };

    let mut f = value(&xi)?;
    let mut step = 1.0f64;
    for _ in 0..5000 {
        let gr = grad(&xi)?;
        let probe: Vec<f64> = xi.iter().zip(&gr).map(|(&x, &d)| x - d).collect();
        let probe = linalg::project_simplex(&probe);
        let motion = probe
            .iter()
            .zip(&xi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if motion < 1e-11 {
            break;
        }
        let mut advanced = false;
        let mut t = step;
        for _ in 0..60 {
            let cand: Vec<f64> = xi.iter().zip(&gr).map(|(&x, &d)| x - t * d).collect();
            let cand = linalg::project_simplex(&cand);
            let fc = value(&cand)?;
            if fc < f - 1e-16 {
                xi = cand;
                f = fc;
                step = (t * 2.0).min(4.0);
                advanced = true;
                break;
            }
            t *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    Ok((f, xi))
}

/// Gallager exponent of a classical measurement channel at rate `r`:
/// max_{0≤s≤1} [−sR − ln Σ_j(Σ_i ξ_i P(j|i)^{1/(1+s)})^{1+s}], floored at 0.
pub fn reliability_semi(ch: &ChannelMatrix, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("rate must be ≥ 0, got {r}")));
    }
    let xi = ch.priors().to_vec();
    let e0 = |s: f64| -> f64 {
        let mut total = 0.0;
        for j in 0..ch.n_outcomes() {
            let inner: f64 = xi
                .iter()
                .enumerate()
                .map(|(i, &w)| w * ch.prob(i, j).powf(1.0 / (1.0 + s)))
                .sum();
            total += inner.powf(1.0 + s);
        }
        -total.ln()
    };
    Ok(max_over_s(|s| e0(s) - s * r))
}

fn simplex_min_quadratic(gamma: &RMat) -> (f64, Vec<f64>) {
    let sol = linalg::simplex_qp_min(gamma, tol::SIMPLEX_QP);
    debug_assert!(
        sol.gap <= 1e-8,
        "simplex QP duality gap too large: {}",
        sol.gap
    );
    // Interior closed form: ξ̃ ∝ Γ^{−1}1. When it is feasible it is the
    // global minimizer (the problem is convex), and min ξᵀΓξ = 1/ΣΣ(Γ^{−1})_{ij}.
    let m = gamma.nrows();
    let ones = RMat::from_element(m, 1, 1.0);
    if let Some(x) = gamma.clone().lu().solve(&ones) {
        let sum: f64 = x.iter().sum();
        if sum > 0.0 && x.iter().all(|&v| v > 0.0) {
            let xi: Vec<f64> = x.iter().map(|&v| v / sum).collect();
            let value = 1.0 / sum;
            debug_assert!(
                (value - sol.value).abs() < 1e-8,
                "simplex solver {} disagrees with closed form {}",
                sol.value,
                value
            );
            return (value, xi);
        }
    }
    (sol.value, sol.x.to_vec())
}

/// Cutoff rates over the prior simplex. R_Q = −ln min_ξ ξᵀΓξ with the
/// modulus-squared Gram; the semiclassical upper bound uses the modulus Gram.
pub fn cutoff_quantum(c: &Constellation) -> Result<CutoffReport> {
    let gamma = gram(c, GramKind::ModulusSquared).real_entries();
    let (min_q, xi) = simplex_min_quadratic(&gamma);
    let m = c.len() as f64;
    let uniform_value: f64 = gamma.iter().sum::<f64>() / (m * m);
    let r_semi_upper = cutoff_semi_upper(c)?;
    Ok(CutoffReport {
        r_q: -min_q.ln(),
        r_semi_upper,
        r_q_uniform: -uniform_value.ln(),
        optimal_priors: xi,
    })
}

/// R̃_semi = −ln min_ξ ξᵀGξ with G_{ij} = |⟨ψ_i|ψ_j⟩|. Never exceeds R_Q.
pub fn cutoff_semi_upper(c: &Constellation) -> Result<f64> {
    let g = gram(c, GramKind::Modulus).real_entries();
    let (min_g, _) = simplex_min_quadratic(&g);
    Ok(-min_g.ln())
}

/// Smallest block length n with 2·exp(−n·exponent) ≤ target_pe.
pub fn required_code_length(exponent: f64, target_pe: f64) -> Result<u64> {
    if !(target_pe > 0.0 && target_pe < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target error probability must lie in (0, 1), got {target_pe}"
        )));
    }
    if exponent <= 0.0 || !exponent.is_finite() {
        return Err(Error::RateNotSupported { exponent });
    }
    Ok(((2.0 / target_pe).ln() / exponent).ceil() as u64)
}

fn d_func(x: f64) -> f64 {
    (1.0 + (x * x + 1.0).sqrt()) / 2.0
}

fn g_half(t: f64) -> f64 {
    let p = (t + 0.5).sqrt();
    let q = (t - 0.5).sqrt();
    (p + q) / ((p - q) * 2.0 * t)
}

/// Cutoff rate of the coherent-state Gaussian ensemble with codeword energy
/// `nsc` and thermal-noise parameter `lambda` ≥ ½ (λ = ½ is the noiseless
/// vacuum limit; λ − ½ plays the role of a thermal photon number):
/// R_Q = 2[Nsc/2g + 1 − D(Nsc/g)] + ln D(Nsc/g), D(x) = (1 + √(x²+1))/2,
/// g = λ·g_½(λ). Note g_½ has a square-root branch at λ = ½, so R_Q is
/// continuous but not Lipschitz there: R(λ=½+ε) − R(λ=½) scales as √ε.
pub fn gaussian_cutoff(nsc: f64, lambda: f64) -> Result<f64> {
    if !(nsc >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "codeword energy must be ≥ 0, got {nsc}"
        )));
    }
    if !(lambda >= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "noise parameter must be ≥ 1/2, got {lambda}"
        )));
    }
    let g = lambda * g_half(lambda);
    let x = nsc / g;
    let d = d_func(x);
    Ok(2.0 * (nsc / (2.0 * g) + 1.0 - d) + d.ln())
}
