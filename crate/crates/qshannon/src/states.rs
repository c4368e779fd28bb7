//! Coherent-state constellations and their Gram matrices.
//!
//! A coherent state |α⟩ is identified by its complex amplitude α; the mean
//! photon number is |α|². Overlaps follow
//!
//! ⟨α|β⟩ = exp(−|α|²/2 − |β|²/2 + α̅β),
//!
//! so in particular ⟨α|−α⟩ = exp(−2|α|²), the number that controls every
//! binary quantity downstream.

use serde::Serialize;

use crate::linalg;
use crate::{tol, C64, CMat, Error, Result};

/// Complex amplitude of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Amplitude(pub C64);

impl Amplitude {
    pub fn new(re: f64, im: f64) -> Self {
        Amplitude(C64::new(re, im))
    }

    /// Real amplitude √Ns for a given mean photon number.
    pub fn from_photon_number(ns: f64) -> Self {
        Amplitude(C64::new(ns.sqrt(), 0.0))
    }

    /// Mean photon number |α|².
    pub fn photon_number(&self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn phase(&self) -> f64 {
        self.0.im.atan2(self.0.re)
    }
}

impl From<C64> for Amplitude {
    fn from(z: C64) -> Self {
        Amplitude(z)
    }
}

/// ⟨α|β⟩ for coherent states.
pub fn coherent_inner(a: Amplitude, b: Amplitude) -> C64 {
    let (a, b) = (a.0, b.0);
    (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp()
}

/// A finite set of coherent signal states with prior probabilities.
#[derive(Debug, Clone, Serialize)]
pub struct Constellation {
    amplitudes: Vec<Amplitude>,
    priors: Vec<f64>,
    degenerate: bool,
}

impl Constellation {
    pub fn new(amplitudes: Vec<Amplitude>, priors: Vec<f64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidConstellation(format!(
                "need at least 2 states, got {}",
                amplitudes.len()
            )));
        }
        if priors.len() != amplitudes.len() {
            return Err(Error::InvalidConstellation(format!(
                "{} priors for {} states",
                priors.len(),
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.0.re.is_finite() || !a.0.im.is_finite()) {
            return Err(Error::InvalidConstellation("non-finite amplitude".into()));
        }
        if priors.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidConstellation(
                "priors must be strictly positive".into(),
            ));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > tol::STRUCTURE {
            return Err(Error::InvalidConstellation(format!(
                "priors sum to {total}, not 1"
            )));
        }
        let degenerate = {
            let m = amplitudes.len();
            let mut any = false;
            'outer: for i in 0..m {
                for j in (i + 1)..m {
                    if (amplitudes[i].0 - amplitudes[j].0).norm() < 1e-9 {
                        any = true;
                        break 'outer;
                    }
                }
            }
            any
        };
        Ok(Constellation {
            amplitudes,
            priors,
            degenerate,
        })
    }

    /// M-ary phase-shift keying at mean photon number `ns`:
    /// α_k = √Ns·exp(i2πk/M), uniform priors.
    pub fn psk(m: usize, ns: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidConstellation(format!(
                "PSK needs M ≥ 2, got {m}"
            )));
        }
        if !(ns >= 0.0) {
            return Err(Error::InvalidConstellation(format!(
                "mean photon number must be ≥ 0, got {ns}"
            )));
        }
        let r = ns.sqrt();
        let amplitudes = (0..m)
            .map(|k| {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                Amplitude(C64::new(r * ang.cos(), r * ang.sin()))
            })
            .collect();
        Constellation::new(amplitudes, vec![1.0 / m as f64; m])
    }

    /// Two states with priors (ξ₀, 1−ξ₀); the workhorse for binary questions.
    pub fn binary(a0: Amplitude, a1: Amplitude, xi0: f64) -> Result<Self> {
        Constellation::new(vec![a0, a1], vec![xi0, 1.0 - xi0])
    }

    /// Replace the priors, revalidating.
    pub fn with_priors(self, priors: Vec<f64>) -> Result<Self> {
        Constellation::new(self.amplitudes, priors)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires ≥ 2 states
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// True when two (or more) states coincide to within 1e-9 in amplitude.
    /// Degenerate sets are legal inputs; the measurement layers decide what
    /// still makes sense for them.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn uniform_priors(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.priors.iter().all(|&p| (p - u).abs() < tol::STRUCTURE)
    }
}

/// Which scalar is stored at (i, j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GramKind {
    /// ⟨ψi|ψj⟩
    Plain,
    /// √(ξiξj)·⟨ψi|ψj⟩ — trace one; its spectrum is the spectrum of the
    /// prior-weighted density operator.
    Modified,
    /// |⟨ψi|ψj⟩|
    Modulus,
    /// |⟨ψi|ψj⟩|²
    ModulusSquared,
}

#[derive(Debug, Clone)]
pub struct GramMatrix {
    kind: GramKind,
    entries: CMat,
}

impl GramMatrix {
    pub fn kind(&self) -> GramKind {
        self.kind
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Real view of a Modulus / ModulusSquared Gram.
    pub fn real_entries(&self) -> crate::RMat {
        crate::RMat::from_fn(self.dim(), self.dim(), |i, j| self.entries[(i, j)].re)
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let m = self.dim();
        let rows: Vec<Vec<C64>> = (0..m)
            .map(|i| (0..m).map(|j| self.entries[(i, j)]).collect())
            .collect();
        let mut st = s.serialize_struct("GramMatrix", 3)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("m", &m)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

/// Gram matrix of a constellation in the requested convention.
pub fn gram(c: &Constellation, kind: GramKind) -> GramMatrix {
    let m = c.len();
    let a = c.amplitudes();
    let xi = c.priors();
    let entries = CMat::from_fn(m, m, |i, j| {
        let g = coherent_inner(a[i], a[j]);
        match kind {
            GramKind::Plain => g,
            GramKind::Modified => g * (xi[i] * xi[j]).sqrt(),
            GramKind::Modulus => C64::new(g.norm(), 0.0),
            GramKind::ModulusSquared => C64::new(g.norm_sqr(), 0.0),
        }
    });
    GramMatrix { kind, entries }
}

/// Spectrum of a Gram matrix, descending. Rejects non-Hermitian input; clamps
/// eigenvalues in [−1e-10, 0] to zero and rejects anything more negative.
pub fn gram_eigenvalues(g: &GramMatrix) -> Result<Vec<f64>> {
    let eig = linalg::hermitian_eigen(g.entries())?;
    linalg::clamp_psd_spectrum(&eig.values)
}

/// The four quasi-Bell states built on ±α:
///
/// Ψ₁ = h₁(|α,α⟩ + |−α,−α⟩)   Ψ₂ = h₂(|α,α⟩ − |−α,−α⟩)
/// Ψ₃ = h₃(|α,−α⟩ + |−α,α⟩)   Ψ₄ = h₄(|α,−α⟩ − |−α,α⟩)
///
/// with κ = ⟨α|−α⟩, h₁ = h₃ = 1/√(2(1+κ²)), h₂ = h₄ = 1/√(2(1−κ²)).
/// Ψ₂ and Ψ₄ are maximally entangled for every α ≠ 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuasiBellPair {
    pub alpha: Amplitude,
    pub kappa: f64,
    pub h: [f64; 4],
}

impl QuasiBellPair {
    pub fn new(alpha: Amplitude) -> Result<Self> {
        let ns = alpha.photon_number();
        if ns <= 0.0 || !ns.is_finite() {
            return Err(Error::InvalidParameter(
                "quasi-Bell states need α ≠ 0 (κ = 1 makes Ψ₂, Ψ₄ unnormalizable)".into(),
            ));
        }
        let kappa = (-2.0 * ns).exp();
        let hp = 1.0 / (2.0 * (1.0 + kappa * kappa)).sqrt();
        let hm = 1.0 / (2.0 * (1.0 - kappa * kappa)).sqrt();
        Ok(QuasiBellPair {
            alpha,
            kappa,
            h: [hp, hm, hp, hm],
        })
    }

    /// Off-diagonal overlap ⟨Ψ₁|Ψ₃⟩ = 2κ/(1+κ²); every other pair is
    /// orthogonal.
    pub fn d(&self) -> f64 {
        2.0 * self.kappa / (1.0 + self.kappa * self.kappa)
    }

    /// 4×4 Gram of (Ψ₁..Ψ₄): identity except for d() at (0,2) and (2,0).
    pub fn gram4(&self) -> CMat {
        let mut g = CMat::identity(4, 4);
        let d = C64::new(self.d(), 0.0);
        g[(0, 2)] = d;
        g[(2, 0)] = d;
        g
    }
}
