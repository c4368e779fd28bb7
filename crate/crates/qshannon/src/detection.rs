//! Quantum detection: minimum-error bounds, the square-root measurement, and
//! optimality certificates.
//!
//! All measurements here live on the span of the signal states, represented in
//! two equivalent ways: POVM vectors are stored as coefficients over the
//! signal states themselves (|μ_l⟩ = Σ_m c_{ml}|α_m⟩), while the optimality
//! checks work in an orthonormal coordinate basis of that span built from the
//! Gram spectrum.

use serde::Serialize;

use crate::fmt;
use crate::linalg;
use crate::states::{gram, Constellation, GramKind};
use crate::{tol, C64, CMat, Error, RMat, Result};

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
pub fn qfunc(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Discrete memoryless channel P(j|i) with the input priors it was built for.
/// Row i is the outcome distribution of input i.
#[derive(Debug, Clone)]
pub struct ChannelMatrix {
    p: RMat,
    priors: Vec<f64>,
}

impl ChannelMatrix {
    pub fn new(p: RMat, priors: Vec<f64>) -> Result<Self> {
        if p.nrows() != priors.len() {
            return Err(Error::InvalidParameter(format!(
                "{} priors for {} channel inputs",
                priors.len(),
                p.nrows()
            )));
        }
        let total: f64 = priors.iter().sum();
        if priors.iter().any(|&x| !(x > 0.0)) || (total - 1.0).abs() > tol::STRUCTURE {
            return Err(Error::InvalidParameter(
                "channel priors must be positive and sum to 1".into(),
            ));
        }
        let mut p = p;
        for i in 0..p.nrows() {
            let mut sum = 0.0;
            for j in 0..p.ncols() {
                let v = p[(i, j)];
                if v < -tol::STRUCTURE {
                    return Err(Error::NotStochastic { row: i, sum: v });
                }
                p[(i, j)] = v.max(0.0);
                sum += p[(i, j)];
            }
            if (sum - 1.0).abs() > tol::STRUCTURE {
                return Err(Error::NotStochastic { row: i, sum });
            }
        }
        Ok(ChannelMatrix { p, priors })
    }

    /// Circulant channel from its first row: P(j|i) = row[(j − i) mod M].
    pub fn circulant(row: &[f64], priors: Vec<f64>) -> Result<Self> {
        let m = row.len();
        let p = RMat::from_fn(m, m, |i, j| row[(j + m - i) % m]);
        ChannelMatrix::new(p, priors)
    }

    pub fn n_inputs(&self) -> usize {
        self.p.nrows()
    }

    pub fn n_outcomes(&self) -> usize {
        self.p.ncols()
    }

    /// P(j|i).
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn matrix(&self) -> &RMat {
        &self.p
    }

    /// Average probability of deciding the transmitted input:
    /// Σ_i ξ_i P(i|i). Only meaningful when outcomes label inputs.
    pub fn correct_probability(&self) -> f64 {
        self.priors
            .iter()
            .enumerate()
            .map(|(i, &xi)| xi * self.p[(i, i)])
            .sum()
    }

    /// 1 − correct_probability().
    pub fn error_probability(&self) -> f64 {
        1.0 - self.correct_probability()
    }

    /// CSV with the corner cell `j\i`: data row j holds P(j|i) for each input
    /// column i. 12 significant digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j\\i");
        for i in 0..self.n_inputs() {
            out.push_str(&format!(",{i}"));
        }
        out.push('\n');
        for j in 0..self.n_outcomes() {
            out.push_str(&format!("{j}"));
            for i in 0..self.n_inputs() {
                out.push(',');
                out.push_str(&fmt::sig12(self.p[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

impl Serialize for ChannelMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<Vec<f64>> = (0..self.n_inputs())
            .map(|i| (0..self.n_outcomes()).map(|j| self.p[(i, j)]).collect())
            .collect();
        let mut st = s.serialize_struct("ChannelMatrix", 4)?;
        st.serialize_field("n_inputs", &self.n_inputs())?;
        st.serialize_field("n_outcomes", &self.n_outcomes())?;
        st.serialize_field("input_priors", &self.priors)?;
        st.serialize_field("p_given_input", &rows)?;
        st.end()
    }
}

/// Orthonormal coordinates for the span of the signal states: column i of
/// `coords` is |α_i⟩ expressed in an orthonormal basis (Λ^½V† from the plain
/// Gram G = VΛV†). Null directions of G keep zeroed coordinate axes.
pub(crate) struct SignalBasis {
    coords: CMat,
    range: Vec<bool>,
}

const RANK_TOL: f64 = 1e-12;

impl SignalBasis {
    pub(crate) fn new(c: &Constellation) -> Result<Self> {
        let g = gram(c, GramKind::Plain);
        let eig = linalg::hermitian_eigen(g.entries())?;
        let lam = linalg::clamp_psd_spectrum(&eig.values)?;
        let m = c.len();
        let mut coords = CMat::zeros(m, m);
        for k in 0..m {
            let s = lam[k].max(0.0).sqrt();
            for i in 0..m {
                coords[(k, i)] = eig.vectors[(i, k)].conj() * s;
            }
        }
        let range = lam.iter().map(|&l| l > RANK_TOL).collect();
        Ok(SignalBasis { coords, range })
    }

    pub(crate) fn state(&self, i: usize) -> CMat {
        let m = self.coords.nrows();
        CMat::from_fn(m, m.min(1), |k, _| self.coords[(k, i)])
    }

    /// Measurement vectors in coordinates: columns of coords · coeffs.
    pub(crate) fn povm_vectors(&self, povm: &Povm) -> CMat {
        &self.coords * &povm.coeffs
    }
}

/// A POVM with rank-one elements Π_l = |μ_l⟩⟨μ_l| on the signal span, the
/// vectors stored as coefficients over the signal states:
/// |μ_l⟩ = Σ_m coeffs[(m, l)]·|α_m⟩.
#[derive(Debug, Clone)]
pub struct Povm {
    coeffs: CMat,
    completeness_defect: f64,
}

impl Povm {
    /// Wrap raw coefficients, measuring how far Σ_l Π_l is from the identity
    /// on the signal span.
    pub fn from_coeffs(c: &Constellation, coeffs: CMat) -> Result<Self> {
        if coeffs.nrows() != c.len() {
            return Err(Error::InvalidParameter(format!(
                "coefficient rows {} must match constellation size {}",
                coeffs.nrows(),
                c.len()
            )));
        }
        let basis = SignalBasis::new(c)?;
        let v = &basis.coords * &coeffs;
        let mut resolution = &v * v.adjoint();
        for (k, &in_range) in basis.range.iter().enumerate() {
            if in_range {
                resolution[(k, k)] -= C64::new(1.0, 0.0);
            }
        }
        let completeness_defect = resolution.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Povm {
            coeffs,
            completeness_defect,
        })
    }

    pub fn coeffs(&self) -> &CMat {
        &self.coeffs
    }

    pub fn n_outcomes(&self) -> usize {
        self.coeffs.ncols()
    }

    /// Max entrywise deviation of Σ_l Π_l from the identity on the span.
    pub fn completeness_defect(&self) -> f64 {
        self.completeness_defect
    }

    /// Mix two outcome vectors by a real rotation. The resolution of identity
    /// is invariant (any unitary on the outcome index preserves it), but an
    /// optimal measurement generally stops being optimal — this is the knob
    /// the certificate tests use to break optimality on purpose.
    pub fn mixed_outcomes(
        &self,
        c: &Constellation,
        l0: usize,
        l1: usize,
        angle: f64,
    ) -> Result<Povm> {
        let mut coeffs = self.coeffs.clone();
        let (cos, sin) = (angle.cos(), angle.sin());
        for m in 0..coeffs.nrows() {
            let a = self.coeffs[(m, l0)];
            let b = self.coeffs[(m, l1)];
            coeffs[(m, l0)] = a * cos - b * sin;
            coeffs[(m, l1)] = a * sin + b * cos;
        }
        Povm::from_coeffs(c, coeffs)
    }
}

fn fully_degenerate(c: &Constellation) -> bool {
    let a = c.amplitudes();
    a.iter().all(|x| (x.0 - a[0].0).norm() < 1e-9)
}

/// Square-root measurement of the signal set: |μ_l⟩ = Γ^{−1/2}|α_l⟩ with
/// Γ = Σ_m |α_m⟩⟨α_m|. Uses the pseudo-inverse square root when states are
/// linearly dependent; refuses a fully degenerate set (all states identical),
/// for which no measurement distinguishes anything.
pub fn srm_povm(c: &Constellation) -> Result<Povm> {
    if fully_degenerate(c) {
        return Err(Error::DegenerateSrm);
    }
    let g = gram(c, GramKind::Plain);
    let coeffs = linalg::psd_pinv_sqrt(g.entries(), RANK_TOL)?;
    Povm::from_coeffs(c, coeffs)
}

/// Transition matrix of the square-root measurement: P(j|i) = |(G^{1/2})_{ji}|².
/// Well-defined for any constellation (a fully degenerate set yields the
/// uniform guessing channel with error (M−1)/M).
pub fn srm_channel(c: &Constellation) -> Result<ChannelMatrix> {
    let g = gram(c, GramKind::Plain);
    let half = linalg::psd_sqrt(g.entries())?;
    let m = c.len();
    let p = RMat::from_fn(m, m, |i, j| half[(j, i)].norm_sqr());
    ChannelMatrix::new(p, c.priors().to_vec())
}

/// Channel induced by an arbitrary rank-one POVM on the signal set:
/// P(l|i) = |⟨μ_l|α_i⟩|² = |(CᴴG)_{li}|².
pub fn channel_from_povm(c: &Constellation, povm: &Povm) -> Result<ChannelMatrix> {
    let g = gram(c, GramKind::Plain);
    let overlaps = povm.coeffs().adjoint() * g.entries();
    let p = RMat::from_fn(c.len(), povm.n_outcomes(), |i, l| {
        overlaps[(l, i)].norm_sqr()
    });
    ChannelMatrix::new(p, c.priors().to_vec())
}

/// Minimum binary error probability (Helstrom bound):
/// P_e = ½[1 − √(1 − 4ξ₀ξ₁|⟨ψ₀|ψ₁⟩|²)].
pub fn helstrom_binary(c: &Constellation) -> Result<f64> {
    if c.len() != 2 {
        return Err(Error::Unsupported(format!(
            "Helstrom bound is binary; constellation has {} states",
            c.len()
        )));
    }
    let k2 = crate::states::coherent_inner(c.amplitudes()[0], c.amplitudes()[1]).norm_sqr();
    let (xi0, xi1) = (c.priors()[0], c.priors()[1]);
    Ok(0.5 * (1.0 - (1.0 - 4.0 * xi0 * xi1 * k2).sqrt()))
}

/// The measurement achieving the Helstrom bound: projectors onto the
/// positive/negative eigenspaces of ξ₁ρ₁ − ξ₀ρ₀ within the signal span.
/// Outcome l claims state l.
pub fn helstrom_binary_povm(c: &Constellation) -> Result<Povm> {
    if c.len() != 2 {
        return Err(Error::Unsupported(
            "optimal binary measurement needs exactly 2 states".into(),
        ));
    }
    if fully_degenerate(c) {
        return Err(Error::DegenerateSrm);
    }
    let basis = SignalBasis::new(c)?;
    let a0 = basis.state(0);
    let a1 = basis.state(1);
    let delta = (&a1 * a1.adjoint()) * C64::new(c.priors()[1], 0.0)
        - (&a0 * a0.adjoint()) * C64::new(c.priors()[0], 0.0);
    let eig = linalg::hermitian_eigen(&delta)?;
    // Columns of V sorted descending: first = positive eigenspace → claims
    // state 1; last nonzero = negative eigenspace → claims state 0. Restrict
    // to the 2D span (remaining eigenvalues vanish).
    let v_pos = eig.vectors.column(0).into_owned();
    let v_neg = eig.vectors.column(1).into_owned();
    // Express coordinate vectors back as state coefficients: solve A·c = v on
    // the span via the pseudo-inverse of A.
    let a = &basis.coords;
    let gram_a = a.adjoint() * a; // = plain Gram
    let pinv = linalg::hermitian_fn(&gram_a, |l| if l > RANK_TOL { 1.0 / l } else { 0.0 })?;
    let to_coeffs = |v: &CVecAlias| -> CVecAlias { &pinv * (a.adjoint() * v) };
    let c0 = to_coeffs(&v_neg);
    let c1 = to_coeffs(&v_pos);
    let mut coeffs = CMat::zeros(2, 2);
    for m in 0..2 {
        coeffs[(m, 0)] = c0[m];
        coeffs[(m, 1)] = c1[m];
    }
    Povm::from_coeffs(c, coeffs)
}

type CVecAlias = nalgebra::DVector<C64>;

/// Minimum error probability of a symmetric (PSK) set under the covariant
/// optimum: P_e = 1 − (1/M²)(Σ_m √λ_m)² with λ_m the DFT spectrum of the
/// plain Gram's first row. Requires a circulant Gram and uniform priors.
pub fn covariant_optimal_pe(c: &Constellation) -> Result<f64> {
    if !c.uniform_priors() {
        return Err(Error::Unsupported(
            "covariant optimum assumes uniform priors".into(),
        ));
    }
    let g = gram(c, GramKind::Plain);
    let m = c.len();
    for i in 0..m {
        for j in 0..m {
            if (g.entries()[(i, j)] - g.entries()[(0, (j + m - i) % m)]).norm() > 1e-12 {
                return Err(Error::Unsupported(
                    "covariant optimum needs a circulant (symmetric-set) Gram".into(),
                ));
            }
        }
    }
    let row: Vec<C64> = (0..m).map(|j| g.entries()[(0, j)]).collect();
    let lam = linalg::clamp_psd_spectrum(&linalg::circulant_eigenvalues(&row))?;
    let s: f64 = lam.iter().map(|&l| l.sqrt()).sum();
    Ok(1.0 - (s / m as f64).powi(2))
}

/// Error probability of binary antipodal signalling read out by homodyne
/// detection. Quadrature convention: X_c = (a + a†)/2, vacuum variance 1/4,
/// so the conditional means are ±√Ns with σ = 1/2 and P_e = Q(2√Ns).
pub fn homodyne_bpsk_pe(ns: f64) -> Result<f64> {
    if !(ns >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mean photon number must be ≥ 0, got {ns}"
        )));
    }
    Ok(qfunc(2.0 * ns.sqrt()))
}

/// Certificate for Bayes-optimality of a POVM (necessary and sufficient
/// conditions for minimum average error).
///
/// `max_pair_residual` is the largest ‖Π_m(ξ_mρ_m − ξ_lρ_l)Π_l‖_F over outcome
/// pairs; `min_gamma_eigenvalue` is min over l of the smallest eigenvalue of
/// γ − ξ_lρ_l with γ = Σ ξ_lρ_lΠ_l (symmetrized; `gamma_asymmetry` records how
/// non-Hermitian the raw γ was, which is itself an optimality violation).
#[derive(Debug, Clone, Serialize)]
pub struct OptimalityReport {
    pub max_pair_residual: f64,
    pub min_gamma_eigenvalue: f64,
    pub gamma_asymmetry: f64,
    pub optimal: bool,
}

/// Adds the minimax requirement on top of Bayes optimality: all conditional
/// correct-decision probabilities Tr Π_lρ_l must coincide.
#[derive(Debug, Clone, Serialize)]
pub struct MinimaxReport {
    pub bayes: OptimalityReport,
    pub conditional_correct: Vec<f64>,
    pub conditional_spread: f64,
    pub optimal: bool,
}

fn optimality_operators(
    c: &Constellation,
    povm: &Povm,
) -> Result<(Vec<CMat>, Vec<CMat>, Vec<f64>)> {
    if povm.n_outcomes() != c.len() {
        return Err(Error::Unsupported(
            "optimality certificates need one outcome per state".into(),
        ));
    }
    let basis = SignalBasis::new(c)?;
    let vecs = basis.povm_vectors(povm);
    let m = c.len();
    let rho: Vec<CMat> = (0..m)
        .map(|i| {
            let a = basis.state(i);
            &a * a.adjoint()
        })
        .collect();
    let pi: Vec<CMat> = (0..m)
        .map(|l| {
            let v = vecs.column(l).into_owned();
            let vm = CMat::from_fn(m, 1, |k, _| v[k]);
            &vm * vm.adjoint()
        })
        .collect();
    Ok((rho, pi, c.priors().to_vec()))
}

pub fn check_bayes_optimality(c: &Constellation, povm: &Povm) -> Result<OptimalityReport> {
    let (rho, pi, xi) = optimality_operators(c, povm)?;
    let m = rho.len();

    let mut max_pair_residual = 0.0f64;
    for l in 0..m {
        for mm in 0..m {
            if l == mm {
                continue;
            }
            let inner = &rho[mm] * C64::new(xi[mm], 0.0) - &rho[l] * C64::new(xi[l], 0.0);
            let sandwich = &pi[mm] * inner * &pi[l];
            let norm = sandwich.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            max_pair_residual = max_pair_residual.max(norm);
        }
    }

    let mut gamma = CMat::zeros(m, m);
    for l in 0..m {
        gamma += &rho[l] * &pi[l] * C64::new(xi[l], 0.0);
    }
    let gamma_asymmetry = linalg::hermiticity_defect(&gamma);
    let sym = (&gamma + gamma.adjoint()) * C64::new(0.5, 0.0);
    let mut min_gamma_eigenvalue = f64::INFINITY;
    for l in 0..m {
        let diff = &sym - &rho[l] * C64::new(xi[l], 0.0);
        let eig = linalg::hermitian_eigen(&diff)?;
        min_gamma_eigenvalue = min_gamma_eigenvalue.min(*eig.values.last().unwrap());
    }

    let optimal = max_pair_residual <= tol::OPTIMALITY
        && min_gamma_eigenvalue >= -tol::OPTIMALITY
        && gamma_asymmetry <= tol::OPTIMALITY;
    Ok(OptimalityReport {
        max_pair_residual,
        min_gamma_eigenvalue,
        gamma_asymmetry,
        optimal,
    })
}

pub fn check_minimax(c: &Constellation, povm: &Povm) -> Result<MinimaxReport> {
    let bayes = check_bayes_optimality(c, povm)?;
    let ch = channel_from_povm(c, povm)?;
    let conditional_correct: Vec<f64> = (0..c.len()).map(|i| ch.prob(i, i)).collect();
    let lo = conditional_correct.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = conditional_correct
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let conditional_spread = hi - lo;
    let optimal = bayes.optimal && conditional_spread <= tol::OPTIMALITY;
    Ok(MinimaxReport {
        bayes,
        conditional_correct,
        conditional_spread,
        optimal,
    })
}
