//! Y-00 style quantum stream cipher: a keyed LFSR picks one of M
//! communication bases per slot, data rides as the polarity of an antipodal
//! pair inside the chosen basis, and the 2M transmitted states form a 2M-PSK
//! constellation. Bob, knowing the basis, faces a clean binary decision; Eve,
//! not knowing it, faces all 2M states at once and quantum noise masks the
//! neighbors. Also houses the keyed block transform on amplitude vectors.

use std::f64::consts::{LN_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::detection::{self, ChannelMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::{coherent_inner, Amplitude};
use crate::{C64, CMat};

pub const DEFAULT_TAPS: [u32; 4] = [16, 14, 13, 11];

/// Fibonacci LFSR over the register bits 1..=degree, degree = max tap.
/// Output is the low bit before the shift; feedback enters at the top.
#[derive(Debug, Clone)]
pub struct Lfsr {
    state: u64,
    taps: Vec<u32>,
    degree: u32,
}

impl Lfsr {
    pub fn new(taps: &[u32], seed: u64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidParameter("LFSR needs at least one tap".into()));
        }
        let degree = *taps.iter().max().unwrap();
        if degree == 0 || degree > 63 || taps.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "LFSR taps must lie in 1..=63, got {taps:?}"
            )));
        }
        let mask = (1u64 << degree) - 1;
        let state = seed & mask;
        if state == 0 {
            return Err(Error::ZeroSeed);
        }
        Ok(Lfsr {
            state,
            taps: taps.to_vec(),
            degree,
        })
    }

    pub fn next_bit(&mut self) -> u8 {
        let out = (self.state & 1) as u8;
        let fb = self
            .taps
            .iter()
            .fold(0u64, |acc, &t| acc ^ (self.state >> (self.degree - t)))
            & 1;
        self.state = (self.state >> 1) | (fb << (self.degree - 1));
        out
    }

    /// Reads `n` bits MSB-first into an integer.
    fn next_word(&mut self, n: u32) -> u64 {
        let mut w = 0u64;
        for _ in 0..n {
            w = (w << 1) | u64::from(self.next_bit());
        }
        w
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// How the data bit maps onto the polarity of the chosen basis.
/// `KeyedPolarity` XORs it with a keystream bit (so each slot's polarity is
/// one-time-padded); `Direct` sends it as-is and exists for debugging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapper {
    Direct,
    KeyedPolarity,
}

/// Which receiver Bob runs inside the known basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BobReceiver {
    Quantum,
    Homodyne,
}

/// Eve's measurement on the tapped 2M-state ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EveAttack {
    Srm,
    Heterodyne,
}

#[derive(Debug, Clone, Serialize)]
pub struct CipherParams {
    pub m: u32,
    pub ns: f64,
    pub key_bits: u32,
    pub lfsr_taps: Vec<u32>,
    pub seed: u64,
    pub mapper: Mapper,
}

impl CipherParams {
    /// Defaults: taps {16,14,13,11} (maximal, period 2¹⁶−1) and the keyed
    /// polarity mapper. M = 1 is the degenerate no-randomization cipher
    /// (plain BPSK), kept so the no-advantage baseline is expressible.
    pub fn new(m: u32, ns: f64, key_bits: u32, seed: u64) -> Result<Self> {
        CipherParams {
            m,
            ns,
            key_bits,
            lfsr_taps: DEFAULT_TAPS.to_vec(),
            seed,
            mapper: Mapper::KeyedPolarity,
        }
        .validated()
    }

    pub fn with_mapper(mut self, mapper: Mapper) -> Self {
        self.mapper = mapper;
        self
    }

    pub fn with_taps(self, taps: Vec<u32>) -> Result<Self> {
        CipherParams {
            lfsr_taps: taps,
            ..self
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if self.m == 0 || !self.m.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "basis count must be a power of two, got {}",
                self.m
            )));
        }
        if !(self.ns > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "signal energy must be positive, got {}",
                self.ns
            )));
        }
        let lfsr = Lfsr::new(&self.lfsr_taps, self.seed)?;
        if self.key_bits < lfsr.degree() {
            return Err(Error::InvalidParameter(format!(
                "key must cover the LFSR register: {} bits < degree {}",
                self.key_bits,
                lfsr.degree()
            )));
        }
        Ok(self)
    }

    pub fn basis_bits(&self) -> u32 {
        self.m.trailing_zeros()
    }

    fn keystream(&self) -> Result<Lfsr> {
        Lfsr::new(&self.lfsr_taps, self.seed)
    }
}

/// Keystream bits for external consumers (block cipher, goldens).
pub fn lfsr_keystream(params: &CipherParams, length: usize) -> Result<Vec<u8>> {
    let mut lfsr = params.keystream()?;
    Ok((0..length).map(|_| lfsr.next_bit()).collect())
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TraceMetrics {
    pub slots: usize,
    pub bob_bit_errors: u64,
    pub bob_ber: f64,
    pub eve_state_errors: u64,
    pub eve_state_error_rate: f64,
}

/// One simulated transmission. `running_key[i]` is the basis index,
/// `polarity[i]` the keystream polarity bit (all zero under `Direct`);
/// the transmitted index on the 2M circle is
/// `running_key[i] + M·(data ⊕ polarity)`. Receiver fields are empty on a
/// transmit-only trace and filled by `simulate_trace`.
#[derive(Debug, Clone, Serialize)]
pub struct CipherTrace {
    pub data_bits: Vec<u8>,
    pub running_key: Vec<u32>,
    pub polarity: Vec<u8>,
    pub transmitted: Vec<Amplitude>,
    pub bob_decisions: Vec<u8>,
    pub eve_outcomes: Vec<u32>,
    pub metrics: TraceMetrics,
}

fn check_bits(data: &[u8]) -> Result<()> {
    if data.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("data must be a bit sequence".into()));
    }
    Ok(())
}

fn slot_amplitude(params: &CipherParams, basis: u32, b_prime: u8) -> Amplitude {
    let phase = PI * (f64::from(basis) / f64::from(params.m) + f64::from(b_prime));
    let r = params.ns.sqrt();
    Amplitude::new(r * phase.cos(), r * phase.sin())
}

/// Transmit side of the protocol: keystream → per-slot basis (log₂M bits,
/// MSB first) and polarity bit, then the antipodal amplitude
/// √Ns·e^{iπ(m/M + b′)} with b′ = data ⊕ polarity.
pub fn y00_encrypt(data: &[u8], params: &CipherParams) -> Result<CipherTrace> {
    check_bits(data)?;
    let mut lfsr = params.keystream()?;
    let nb = params.basis_bits();
    let mut running_key = Vec::with_capacity(data.len());
    let mut polarity = Vec::with_capacity(data.len());
    let mut transmitted = Vec::with_capacity(data.len());
    for &bit in data {
        let basis = lfsr.next_word(nb) as u32;
        let pol = match params.mapper {
            Mapper::KeyedPolarity => lfsr.next_bit(),
            Mapper::Direct => 0,
        };
        running_key.push(basis);
        polarity.push(pol);
        transmitted.push(slot_amplitude(params, basis, bit ^ pol));
    }
    Ok(CipherTrace {
        data_bits: data.to_vec(),
        running_key,
        polarity,
        transmitted,
        bob_decisions: Vec::new(),
        eve_outcomes: Vec::new(),
        metrics: TraceMetrics {
            slots: data.len(),
            ..TraceMetrics::default()
        },
    })
}

/// Full Monte-Carlo pass: Bob homodynes along the known basis axis (mean
/// ±√Ns, σ = ½ with the X_c = (a+a†)/2 convention) and Eve heterodynes the
/// tap (complex Gaussian with σ² = ½ per quadrature), rounding her phase to
/// the nearest of the 2M constellation points. Bob's and Eve's noise use
/// separate deterministic streams derived from `noise_seed`.
pub fn simulate_trace(data: &[u8], params: &CipherParams, noise_seed: u64) -> Result<CipherTrace> {
    let mut trace = y00_encrypt(data, params)?;
    let mut bob_rng = ChaCha8Rng::seed_from_u64(noise_seed);
    let mut eve_rng = ChaCha8Rng::seed_from_u64(noise_seed ^ 0x9e37_79b9_7f4a_7c15);
    let bob_noise = Normal::new(0.0, 0.5).expect("valid");
    let eve_noise = Normal::new(0.0, (0.5f64).sqrt()).expect("valid");
    let two_m = 2 * params.m;
    let sector = PI / f64::from(params.m);
    let amp = params.ns.sqrt();

    let mut bob_bit_errors = 0u64;
    let mut eve_state_errors = 0u64;
    for i in 0..trace.data_bits.len() {
        // Bob: quadrature along the basis axis with known polarity folded in.
        let sign = if trace.data_bits[i] == 1 { -1.0 } else { 1.0 };
        let x: f64 = sign * amp + bob_noise.sample(&mut bob_rng);
        let decision = u8::from(x < 0.0);
        if decision != trace.data_bits[i] {
            bob_bit_errors += 1;
        }
        trace.bob_decisions.push(decision);

        // Eve: heterodyne the transmitted state, nearest-phase readout.
        let t = trace.transmitted[i];
        let beta = C64::new(
            t.0.re + eve_noise.sample(&mut eve_rng),
            t.0.im + eve_noise.sample(&mut eve_rng),
        );
        let k = (beta.arg() / sector).round().rem_euclid(f64::from(two_m)) as u32 % two_m;
        let true_index =
            (trace.running_key[i] + params.m * u32::from(trace.data_bits[i] ^ trace.polarity[i]))
                % two_m;
        if k != true_index {
            eve_state_errors += 1;
        }
        trace.eve_outcomes.push(k);
    }
    let n = trace.data_bits.len();
    trace.metrics = TraceMetrics {
        slots: n,
        bob_bit_errors,
        bob_ber: if n == 0 { 0.0 } else { bob_bit_errors as f64 / n as f64 },
        eve_state_errors,
        eve_state_error_rate: if n == 0 { 0.0 } else { eve_state_errors as f64 / n as f64 },
    };
    Ok(trace)
}

/// Deterministic data generator for simulations.
pub fn random_bits(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| u8::from(rng.gen::<bool>())).collect()
}

/// Bob's per-bit error inside the known basis: Helstrom for the antipodal
/// pair, ½[1 − √(1 − e^{−4Ns})], or homodyne Q(2√Ns).
pub fn bob_error_probability(ns: f64, receiver: BobReceiver) -> Result<f64> {
    if !(ns >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "signal energy must be ≥ 0, got {ns}"
        )));
    }
    Ok(match receiver {
        BobReceiver::Quantum => 0.5 * (1.0 - (1.0 - (-4.0 * ns).exp()).sqrt()),
        BobReceiver::Homodyne => detection::qfunc(2.0 * ns.sqrt()),
    })
}

fn psk_ring_amplitude(two_m: u32, ns: f64, k: u32) -> Amplitude {
    let phase = 2.0 * PI * f64::from(k) / f64::from(two_m);
    let r = ns.sqrt();
    Amplitude::new(r * phase.cos(), r * phase.sin())
}

/// First channel row of the SRM on the 2M-PSK ring, via the circulant
/// square root (DFT route): P(k|0) = |(G^{1/2})_{k0}|².
fn srm_ring_row(two_m: u32, ns: f64) -> Result<Vec<f64>> {
    let a0 = psk_ring_amplitude(two_m, ns, 0);
    let gram_row: Vec<C64> = (0..two_m)
        .map(|k| coherent_inner(a0, psk_ring_amplitude(two_m, ns, k)))
        .collect();
    let half = linalg::circulant_fn_row(&gram_row, |l| l.max(0.0).sqrt())?;
    Ok(half.iter().map(|z| z.norm_sqr()).collect())
}

/// Heterodyne phase density of a coherent state |a⟩ (a = √Ns real, phase 0),
/// marginalized over the radius.
fn heterodyne_phase_density(a: f64, phi: f64) -> f64 {
    let c = a * phi.cos();
    let s = a * phi.sin();
    (-a * a).exp() / (2.0 * PI)
        + c / (2.0 * PI.sqrt()) * (-s * s).exp() * (1.0 + libm::erf(c))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// First row of Eve's heterodyne channel: the phase density integrated over
/// each of the 2M nearest-phase sectors. The quadrature total (which is 1 up
/// to discretization error) is divided out so the row is exactly stochastic.
fn heterodyne_ring_row(two_m: u32, ns: f64) -> Vec<f64> {
    let a = ns.sqrt();
    let width = 2.0 * PI / f64::from(two_m);
    let mut row: Vec<f64> = (0..two_m)
        .map(|k| {
            let mut center = width * f64::from(k);
            if center > PI {
                center -= 2.0 * PI;
            }
            simpson(
                |phi| heterodyne_phase_density(a, phi),
                center - width / 2.0,
                center + width / 2.0,
                16,
            )
        })
        .collect();
    let total: f64 = row.iter().sum();
    for v in &mut row {
        *v /= total;
    }
    row
}

/// Eve's measurement channel over the 2M phase states with a uniform prior
/// (the keystream is treated as ideal). Both attacks give circulant
/// channels; rows are permutations of each other.
pub fn eve_channel(params: &CipherParams, attack: EveAttack) -> Result<ChannelMatrix> {
    let two_m = 2 * params.m;
    let row = match attack {
        EveAttack::Srm => srm_ring_row(two_m, params.ns)?,
        EveAttack::Heterodyne => heterodyne_ring_row(two_m, params.ns),
    };
    let priors = vec![1.0 / f64::from(two_m); two_m as usize];
    ChannelMatrix::circulant(&row, priors)
}

fn row_entropy(row: &[f64]) -> f64 {
    -row.iter().map(|&p| linalg::xlnx(p)).sum::<f64>()
}

/// Mutual information of a circulant channel under a uniform prior:
/// the output marginal is uniform, so I = ln(2M) − H(row).
fn circulant_uniform_mi(row: &[f64]) -> f64 {
    ((row.len() as f64).ln() - row_entropy(row)).max(0.0)
}

/// Number of constellation phases falling inside the ±σ_θ quantum-noise band
/// around the true phase, σ_θ = 1/(2√Ns): Γ = max(1, ⌊2σ_θ/(π/M)⌋). Γ = 1
/// means neighbors are resolvable and the basis is not actually masked.
pub fn masking_number(params: &CipherParams) -> u64 {
    let sigma = 1.0 / (2.0 * params.ns.sqrt());
    let spacing = PI / f64::from(params.m);
    ((2.0 * sigma / spacing).floor() as u64).max(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct SecurityReport {
    /// Bob's per-bit error with the quantum receiver in the known basis.
    pub pe_bob: f64,
    /// Eve's error identifying the transmitted state among all 2M.
    pub pe_eve: f64,
    /// SRM-induced information about the running key, nats per slot. This
    /// lower-bounds Eve's accessible information, so the unicity figure
    /// derived from it is an upper estimate of the true lower bound.
    pub c1_eve_lower: f64,
    /// Eve's single-slot information about the data bit itself. Exactly 0
    /// under the keyed-polarity mapper: the polarity keystream bit acts as a
    /// one-time pad, so every outcome leaves the data bit equiprobable.
    pub eve_data_info_nats: f64,
    /// ln 2 − h(pe_bob): Bob's binary-channel information.
    pub bob_mutual_info_nats: f64,
    pub masking_number: u64,
    /// Set when masking_number < 2: neighbors resolvable, parameters weak.
    pub masking_warning: bool,
    /// ceil(key_bits·ln 2 / c1_eve_lower); None when c1 vanishes (Eve learns
    /// nothing per slot, no finite intercept length reconstructs the key).
    pub unicity_lower_bound: Option<u64>,
    /// Advantage creation: masking active, Eve's state error at least 10×
    /// Bob's bit error, and Bob's data information strictly above Eve's.
    pub advantage: bool,
}

fn binary_entropy_nats(p: f64) -> f64 {
    -linalg::xlnx(p) - linalg::xlnx(1.0 - p)
}

/// Eve's information about the data bit under the `Direct` mapper: the
/// basis index is marginalized out of the SRM channel, leaving a binary-input
/// channel over the 2M outcomes.
fn direct_mapper_data_info(row: &[f64], m: u32) -> Result<f64> {
    let two_m = row.len();
    let mut p = crate::RMat::zeros(2, two_m);
    for b in 0..2u32 {
        for j in 0..two_m {
            let mut acc = 0.0;
            for basis in 0..m {
                let t = (basis + m * b) as usize % two_m;
                acc += row[(j + two_m - t) % two_m];
            }
            p[(b as usize, j)] = acc / f64::from(m);
        }
    }
    let ch = ChannelMatrix::new(p, vec![0.5, 0.5])?;
    Ok(crate::capacity::mutual_information(&ch)?.value_nats)
}

/// Security quantities at the stated parameters. Eve is modeled by the SRM
/// on the 2M ring (computed through the circulant DFT route, so M can be
/// large without materializing the 2M × 2M channel).
pub fn security_report(params: &CipherParams) -> Result<SecurityReport> {
    let two_m = 2 * params.m;
    let row = srm_ring_row(two_m, params.ns)?;
    let pe_eve = (1.0 - row[0]).max(0.0);
    let c1_raw = circulant_uniform_mi(&row);
    let c1_eve_lower = if c1_raw < 1e-12 { 0.0 } else { c1_raw };
    let pe_bob = bob_error_probability(params.ns, BobReceiver::Quantum)?;
    let bob_mutual_info_nats = LN_2 - binary_entropy_nats(pe_bob);
    let eve_data_info_nats = match params.mapper {
        Mapper::KeyedPolarity => 0.0,
        Mapper::Direct => direct_mapper_data_info(&row, params.m)?,
    };
    let masking = masking_number(params);
    let masking_warning = masking < 2;
    let unicity_lower_bound = if c1_eve_lower == 0.0 {
        None
    } else {
        Some((f64::from(params.key_bits) * LN_2 / c1_eve_lower).ceil() as u64)
    };
    let advantage = !masking_warning
        && 10.0 * pe_bob < pe_eve
        && bob_mutual_info_nats > eve_data_info_nats;
    Ok(SecurityReport {
        pe_bob,
        pe_eve,
        c1_eve_lower,
        eve_data_info_nats,
        bob_mutual_info_nats,
        masking_number: masking,
        masking_warning,
        unicity_lower_bound,
        advantage,
    })
}

/// Keyed family for the block transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockMode {
    /// Givens rotations over every index pair plus a keyed diagonal phase.
    KeyedUnitary,
    /// Diagonal phases only: |α_out,k| = |α_in,k|.
    PhaseRandomization,
}

const ANGLE_BITS: u32 = 8;

struct KeyedTransform {
    rotations: Vec<(usize, usize, f64)>,
    phases: Vec<f64>,
}

fn keyed_transform(n: usize, keystream: &[u8], mode: BlockMode) -> Result<KeyedTransform> {
    let pair_count = match mode {
        BlockMode::KeyedUnitary => n * (n - 1) / 2,
        BlockMode::PhaseRandomization => 0,
    };
    let need = (pair_count + n) * ANGLE_BITS as usize;
    if keystream.len() < need {
        return Err(Error::InvalidParameter(format!(
            "keystream too short: need {need} bits, got {}",
            keystream.len()
        )));
    }
    check_bits(keystream)?;
    let mut pos = 0usize;
    let mut word = || {
        let mut w = 0u32;
        for _ in 0..ANGLE_BITS {
            w = (w << 1) | u32::from(keystream[pos]);
            pos += 1;
        }
        f64::from(w) / f64::from(1u32 << ANGLE_BITS)
    };
    let mut rotations = Vec::with_capacity(pair_count);
    if matches!(mode, BlockMode::KeyedUnitary) {
        for i in 0..n {
            for j in (i + 1)..n {
                rotations.push((i, j, PI * word()));
            }
        }
    }
    let phases: Vec<f64> = (0..n).map(|_| 2.0 * PI * word()).collect();
    Ok(KeyedTransform { rotations, phases })
}

fn apply_rotation(v: &mut [C64], i: usize, j: usize, theta: f64) {
    let (c, s) = (theta.cos(), theta.sin());
    let (a, b) = (v[i], v[j]);
    v[i] = a * c - b * s;
    v[j] = a * s + b * c;
}

/// α_out = L·α_in with L the keyed unitary: rotations first, phases last.
/// Energy Σ|α|² is preserved by construction.
pub fn block_encrypt(
    amplitudes: &[Amplitude],
    keystream: &[u8],
    mode: BlockMode,
) -> Result<Vec<Amplitude>> {
    let t = keyed_transform(amplitudes.len(), keystream, mode)?;
    let mut v: Vec<C64> = amplitudes.iter().map(|a| a.0).collect();
    for &(i, j, theta) in &t.rotations {
        apply_rotation(&mut v, i, j, theta);
    }
    for (z, &phi) in v.iter_mut().zip(&t.phases) {
        *z *= C64::new(phi.cos(), phi.sin());
    }
    Ok(v.into_iter().map(Amplitude).collect())
}

/// Inverse transform: conjugate phases, then rotations reversed and negated.
pub fn block_decrypt(
    amplitudes: &[Amplitude],
    keystream: &[u8],
    mode: BlockMode,
) -> Result<Vec<Amplitude>> {
    let t = keyed_transform(amplitudes.len(), keystream, mode)?;
    let mut v: Vec<C64> = amplitudes.iter().map(|a| a.0).collect();
    for (z, &phi) in v.iter_mut().zip(&t.phases) {
        *z *= C64::new(phi.cos(), -phi.sin());
    }
    for &(i, j, theta) in t.rotations.iter().rev() {
        apply_rotation(&mut v, i, j, -theta);
    }
    Ok(v.into_iter().map(Amplitude).collect())
}

/// Applies a caller-supplied transform after checking it is actually
/// unitary; the defect ‖LᴴL − I‖_max is reported otherwise.
pub fn block_apply(amplitudes: &[Amplitude], l: &CMat) -> Result<Vec<Amplitude>> {
    let n = amplitudes.len();
    if l.nrows() != n || l.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "transform is {}×{}, block has {n} modes",
            l.nrows(),
            l.ncols()
        )));
    }
    let mut gram = l.adjoint() * l;
    for k in 0..n {
        gram[(k, k)] -= C64::new(1.0, 0.0);
    }
    let defect = gram.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(Error::NotUnitary { defect });
    }
    let v = CMat::from_fn(n, 1, |k, _| amplitudes[k].0);
    let out = l * v;
    Ok((0..n).map(|k| Amplitude(out[(k, 0)])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::mutual_information;
    use crate::detection::srm_channel;
    use crate::states::Constellation;
    use approx::assert_abs_diff_eq;

    fn params(m: u32, ns: f64) -> CipherParams {
        CipherParams::new(m, ns, 256, 0xB0B).unwrap()
    }

    #[test]
    fn lfsr_rejects_degenerate_input() {
        assert!(matches!(Lfsr::new(&DEFAULT_TAPS, 0), Err(Error::ZeroSeed)));
        // Seed with bits only above the register also locks up.
        assert!(matches!(
            Lfsr::new(&DEFAULT_TAPS, 1 << 20),
            Err(Error::ZeroSeed)
        ));
        assert!(Lfsr::new(&[], 1).is_err());
        assert!(Lfsr::new(&[0, 3], 1).is_err());
    }

    #[test]
    fn lfsr_first_bits_regression() {
        let p = CipherParams::new(2, 1.0, 256, 1).unwrap();
        let bits = lfsr_keystream(&p, 16).unwrap();
        assert_eq!(bits, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn lfsr_default_taps_are_maximal() {
        let mut lfsr = Lfsr::new(&DEFAULT_TAPS, 1).unwrap();
        let initial = lfsr.state;
        let mut period = 0u64;
        loop {
            lfsr.next_bit();
            period += 1;
            if lfsr.state == initial {
                break;
            }
            assert!(period <= 1 << 16, "no cycle found");
        }
        assert_eq!(period, (1 << 16) - 1);
    }

    #[test]
    fn params_validation() {
        assert!(CipherParams::new(3, 1.0, 256, 1).is_err());
        assert!(CipherParams::new(0, 1.0, 256, 1).is_err());
        assert!(CipherParams::new(2, 0.0, 256, 1).is_err());
        assert!(CipherParams::new(2, 1.0, 8, 1).is_err());
        assert!(CipherParams::new(1, 1.0, 16, 1).is_ok());
    }

    #[test]
    fn encrypt_places_states_on_the_ring() {
        let p = params(4, 2.0).with_mapper(Mapper::Direct);
        let data = random_bits(64, 9);
        let trace = y00_encrypt(&data, &p).unwrap();
        let r = 2.0f64.sqrt();
        #[allow(clippy::needless_range_loop)] // three parallel per-slot arrays
        for i in 0..64 {
            let expect_phase =
                PI * (f64::from(trace.running_key[i]) / 4.0 + f64::from(data[i]));
            let t = trace.transmitted[i];
            assert_abs_diff_eq!(t.0.re, r * expect_phase.cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(t.0.im, r * expect_phase.sin(), epsilon = 1e-12);
        }
        // All four bases show up in 64 slots.
        let mut seen = [false; 4];
        for &k in &trace.running_key {
            seen[k as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn direct_bpsk_slot_is_plus_root_ns() {
        let p = CipherParams::new(1, 4.0, 16, 7)
            .unwrap()
            .with_mapper(Mapper::Direct);
        let trace = y00_encrypt(&[0, 1], &p).unwrap();
        assert_abs_diff_eq!(trace.transmitted[0].0.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace.transmitted[0].0.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace.transmitted[1].0.re, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn replay_is_bit_identical() {
        let p = params(8, 1.5);
        let data = random_bits(500, 3);
        let a = simulate_trace(&data, &p, 42).unwrap();
        let b = simulate_trace(&data, &p, 42).unwrap();
        assert_eq!(a.running_key, b.running_key);
        assert_eq!(a.bob_decisions, b.bob_decisions);
        assert_eq!(a.eve_outcomes, b.eve_outcomes);
        assert_eq!(a.metrics.bob_bit_errors, b.metrics.bob_bit_errors);
        let c = simulate_trace(&data, &p, 43).unwrap();
        assert_ne!(a.eve_outcomes, c.eve_outcomes);
    }

    #[test]
    fn bob_error_closed_forms() {
        let q = bob_error_probability(0.5, BobReceiver::Quantum).unwrap();
        let c = Constellation::psk(2, 0.5).unwrap();
        assert_abs_diff_eq!(q, detection::helstrom_binary(&c).unwrap(), epsilon = 1e-14);
        let h = bob_error_probability(0.5, BobReceiver::Homodyne).unwrap();
        assert_abs_diff_eq!(h, 0.078_649_603_525_143_06, epsilon = 1e-14);
        assert_eq!(bob_error_probability(0.0, BobReceiver::Quantum).unwrap(), 0.5);
        assert_eq!(bob_error_probability(1e4, BobReceiver::Quantum).unwrap(), 0.0);
        assert!(q < h);
    }

    #[test]
    fn srm_ring_matches_dense_route() {
        let p = params(2, 0.8);
        let ch = eve_channel(&p, EveAttack::Srm).unwrap();
        let c = Constellation::psk(4, 0.8).unwrap();
        let dense = srm_channel(&c).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(ch.prob(i, j), dense.prob(i, j), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn eve_binary_case_equals_bob() {
        let p = CipherParams::new(1, 0.5, 16, 1).unwrap();
        let ch = eve_channel(&p, EveAttack::Srm).unwrap();
        let pe = ch.error_probability();
        assert_abs_diff_eq!(
            pe,
            bob_error_probability(0.5, BobReceiver::Quantum).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn heterodyne_density_normalizes() {
        for &ns in &[0.3f64, 1.0, 9.0] {
            let total = simpson(
                |phi| heterodyne_phase_density(ns.sqrt(), phi),
                -PI,
                PI,
                4000,
            );
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn heterodyne_channel_agrees_with_sampling() {
        let p = params(8, 1.0);
        let ch = eve_channel(&p, EveAttack::Heterodyne).unwrap();
        let slots = 200_000;
        let data = vec![0u8; slots];
        // M = 1 direct mapping transmits state 0 every slot, so Eve's outcome
        // frequency for sector 0 estimates the density integral over the
        // correct half-plane |φ| < π/2.
        let direct = CipherParams::new(1, 1.0, 16, 5)
            .unwrap()
            .with_mapper(Mapper::Direct);
        let trace = simulate_trace(&data, &direct, 11).unwrap();
        let two_sector = eve_channel(&direct, EveAttack::Heterodyne).unwrap();
        let hits = trace.eve_outcomes.iter().filter(|&&k| k == 0).count();
        let p_hat = hits as f64 / slots as f64;
        let p_true = two_sector.prob(0, 0);
        let sigma = (p_true * (1.0 - p_true) / slots as f64).sqrt();
        assert!(
            (p_hat - p_true).abs() < 5.0 * sigma,
            "MC {p_hat} vs integral {p_true} (5σ = {})",
            5.0 * sigma
        );
        // And the 16-state channel still has stochastic, circulant rows.
        for i in 0..16 {
            let sum: f64 = (0..16).map(|j| ch.prob(i, j)).sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-9);
            for j in 0..16 {
                assert_abs_diff_eq!(
                    ch.prob(i, j),
                    ch.prob((i + 1) % 16, (j + 1) % 16),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn masking_arithmetic() {
        assert_eq!(masking_number(&params(64, 1e4)), 1);
        assert_eq!(masking_number(&params(2048, 1e4)), 6);
        assert_eq!(masking_number(&params(64, 1e12)), 1);
    }

    #[test]
    fn report_masking_regime_creates_advantage() {
        let p = params(2048, 1e4);
        let rep = security_report(&p).unwrap();
        assert!(rep.advantage);
        assert!(!rep.masking_warning);
        assert_eq!(rep.masking_number, 6);
        assert_eq!(rep.pe_bob, 0.0);
        assert!(rep.pe_eve > 0.5, "masking leaves Eve mostly wrong: {}", rep.pe_eve);
        assert_eq!(rep.eve_data_info_nats, 0.0);
        assert_abs_diff_eq!(rep.bob_mutual_info_nats, LN_2, epsilon = 1e-12);
        let n1 = rep.unicity_lower_bound.unwrap();
        assert!(
            n1 as f64 * rep.c1_eve_lower >= f64::from(p.key_bits) * LN_2,
            "unicity bound consistency"
        );
        assert!((2..10_000).contains(&n1));
    }

    #[test]
    fn report_degenerate_and_orthogonal_regimes() {
        // M = 1: no randomization, Eve's channel is Bob's channel.
        let p = CipherParams::new(1, 1e4, 256, 1).unwrap();
        let rep = security_report(&p).unwrap();
        assert!(!rep.advantage);
        assert_eq!(rep.unicity_lower_bound, Some(256));

        // Small M at huge energy: Eve reads the ring nearly noiselessly.
        let p = CipherParams::new(2, 25.0, 256, 1).unwrap();
        let rep = security_report(&p).unwrap();
        assert!(!rep.advantage);
        assert_abs_diff_eq!(rep.c1_eve_lower, 4f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn report_vanishing_energy_has_infinite_unicity() {
        let p = CipherParams::new(2048, 1e-15, 256, 1).unwrap();
        let rep = security_report(&p).unwrap();
        assert_eq!(rep.c1_eve_lower, 0.0);
        assert_eq!(rep.unicity_lower_bound, None);
        assert!(!rep.advantage, "no signal, no advantage either");
    }

    #[test]
    fn direct_mapper_leaks_data() {
        let p = params(4, 1.0).with_mapper(Mapper::Direct);
        let rep = security_report(&p).unwrap();
        assert!(rep.eve_data_info_nats > 1e-3, "direct mapping must leak");
        let keyed = security_report(&params(4, 1.0)).unwrap();
        assert_eq!(keyed.eve_data_info_nats, 0.0);
    }

    #[test]
    fn small_m_circulant_mi_equals_dense_mi() {
        let p = params(4, 1.2);
        let row = srm_ring_row(8, 1.2).unwrap();
        let shortcut = circulant_uniform_mi(&row);
        let dense = mutual_information(&eve_channel(&p, EveAttack::Srm).unwrap())
            .unwrap()
            .value_nats;
        assert_abs_diff_eq!(shortcut, dense, epsilon = 1e-10);
    }

    #[test]
    fn monte_carlo_ber_tracks_closed_form() {
        let p = params(2, 0.5);
        let data = random_bits(200_000, 77);
        let trace = simulate_trace(&data, &p, 123).unwrap();
        let pe = bob_error_probability(0.5, BobReceiver::Homodyne).unwrap();
        let sigma = (pe * (1.0 - pe) / data.len() as f64).sqrt();
        assert!(
            (trace.metrics.bob_ber - pe).abs() < 4.0 * sigma,
            "BER {} vs {} (4σ = {})",
            trace.metrics.bob_ber,
            pe,
            4.0 * sigma
        );
    }

    #[test]
    fn block_round_trip() {
        let key = lfsr_keystream(&params(2, 1.0), 4096).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &n in &[2usize, 4, 8] {
            for _ in 0..100 {
                let v: Vec<Amplitude> = (0..n)
                    .map(|_| Amplitude::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect();
                let enc = block_encrypt(&v, &key, BlockMode::KeyedUnitary).unwrap();
                let energy_in: f64 = v.iter().map(|a| a.0.norm_sqr()).sum();
                let energy_out: f64 = enc.iter().map(|a| a.0.norm_sqr()).sum();
                assert_abs_diff_eq!(energy_in, energy_out, epsilon = 1e-10);
                let dec = block_decrypt(&enc, &key, BlockMode::KeyedUnitary).unwrap();
                for (a, b) in v.iter().zip(&dec) {
                    assert!((a.0 - b.0).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn phase_randomization_keeps_moduli() {
        let key = lfsr_keystream(&params(2, 1.0), 256).unwrap();
        let v: Vec<Amplitude> = vec![
            Amplitude::new(1.0, 0.5),
            Amplitude::new(-0.3, 0.2),
            Amplitude::new(0.0, -1.1),
        ];
        let enc = block_encrypt(&v, &key, BlockMode::PhaseRandomization).unwrap();
        for (a, b) in v.iter().zip(&enc) {
            assert_abs_diff_eq!(a.0.norm(), b.0.norm(), epsilon = 1e-12);
        }
        let dec = block_decrypt(&enc, &key, BlockMode::PhaseRandomization).unwrap();
        for (a, b) in v.iter().zip(&dec) {
            assert!((a.0 - b.0).norm() < 1e-12);
        }
    }

    #[test]
    fn wrong_key_decrypts_to_garbage() {
        let p = params(2, 1.0);
        let key = lfsr_keystream(&p, 512).unwrap();
        let wrong = lfsr_keystream(&CipherParams::new(2, 1.0, 256, 0xDEAD).unwrap(), 512).unwrap();
        let v: Vec<Amplitude> = (0..4)
            .map(|k| Amplitude::new(1.0 + k as f64, -(k as f64)))
            .collect();
        let enc = block_encrypt(&v, &key, BlockMode::KeyedUnitary).unwrap();
        let dec = block_decrypt(&enc, &wrong, BlockMode::KeyedUnitary).unwrap();
        let err: f64 = v
            .iter()
            .zip(&dec)
            .map(|(a, b)| (a.0 - b.0).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale: f64 = v.iter().map(|a| a.0.norm_sqr()).sum::<f64>().sqrt();
        assert!(err / scale > 0.1, "wrong key should not decrypt: {err}");
    }

    #[test]
    fn custom_transform_must_be_unitary() {
        let v = vec![Amplitude::new(1.0, 0.0), Amplitude::new(0.0, 1.0)];
        let id = CMat::identity(2, 2);
        let out = block_apply(&v, &id).unwrap();
        for (a, b) in v.iter().zip(&out) {
            assert_eq!(a.0, b.0);
        }
        let skew = CMat::from_fn(2, 2, |i, j| C64::new(if i == j { 1.1 } else { 0.0 }, 0.0));
        match block_apply(&v, &skew) {
            Err(Error::NotUnitary { defect }) => assert!(defect > 0.2),
            other => panic!("expected unitarity rejection, got {other:?}"),
        }
    }

    #[test]
    fn keystream_too_short_is_rejected() {
        let v: Vec<Amplitude> = (0..8).map(|_| Amplitude::new(1.0, 0.0)).collect();
        let key = vec![1u8; 10];
        assert!(block_encrypt(&v, &key, BlockMode::KeyedUnitary).is_err());
    }
}
