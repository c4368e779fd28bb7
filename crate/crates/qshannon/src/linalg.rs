//! Dense helpers shared by the physics modules: Hermitian eigendecomposition,
//! spectral matrix functions, circulant/DFT shortcuts, simplex QP, and a
//! golden-section maximizer.

use crate::{tol, C64, CMat, Error, RMat, Result};

/// Max entrywise |A - A†|.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let adj = a.adjoint();
    (a - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending,
/// eigenvector columns permuted to match.
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

pub fn hermitian_eigen(a: &CMat) -> Result<HermEig> {
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = hermiticity_defect(a);
    if defect > tol::STRUCTURE * scale * 10.0 {
        return Err(Error::NotHermitian { defect });
    }
    // Symmetrize away the last-ulp noise so the solver sees an exact input.
    let mut h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let n = h.nrows();

    // Cyclic Jacobi, done in-house. The library eigensolvers available to us
    // lose near-degenerate spectra: the complex one returns bases that fail
    // to diagonalize the 8-PSK Gram at Ns = 1 (reconstruction error ~1e-2
    // when the top eigenvalues split by ~1e-4), and extracting from the real
    // solver on the [[A, −B],[B, A]] embedding turned out to leak between
    // invariant subspaces of low-rank operators by ~1e-5, silently dropping
    // extreme eigenvalues. Jacobi rotations keep the iterate exactly
    // Hermitian, converge unconditionally, and resolve clustered and tiny
    // eigenvalues to machine precision, which is what the Fock oracle and
    // the Gram spectra need; our matrices are small enough that O(n³) per
    // sweep is irrelevant.
    let mut vectors = CMat::identity(n, n);
    let frob: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if frob > 0.0 {
        let mut converged = false;
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
                .map(|(p, q)| h[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * frob {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let r = h[(p, q)].norm();
                    if r == 0.0 {
                        continue;
                    }
                    let phase = h[(p, q)] / C64::new(r, 0.0);
                    let tau = (h[(q, q)].re - h[(p, p)].re) / (2.0 * r);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Unitary differs from identity only in the (p,q) block:
                    // U_pp = U_qq = c, U_pq = s·phase, U_qp = −s·conj(phase).
                    for k in 0..n {
                        if k == p || k == q {
                            continue;
                        }
                        let akp = h[(k, p)];
                        let akq = h[(k, q)];
                        h[(k, p)] = akp * c - akq * phase.conj() * s;
                        h[(k, q)] = akp * phase * s + akq * c;
                        h[(p, k)] = h[(k, p)].conj();
                        h[(q, k)] = h[(k, q)].conj();
                    }
                    let hpp = h[(p, p)].re;
                    let hqq = h[(q, q)].re;
                    h[(p, p)] = C64::new(hpp - t * r, 0.0);
                    h[(q, q)] = C64::new(hqq + t * r, 0.0);
                    h[(p, q)] = C64::new(0.0, 0.0);
                    h[(q, p)] = C64::new(0.0, 0.0);
                    for k in 0..n {
                        let vkp = vectors[(k, p)];
                        let vkq = vectors[(k, q)];
                        vectors[(k, p)] = vkp * c - vkq * phase.conj() * s;
                        vectors[(k, q)] = vkp * phase * s + vkq * c;
                    }
                }
            }
        }
        if !converged {
            return Err(Error::Unsupported(
                "Jacobi eigensolver failed to converge".into(),
            ));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(j, j)].re.partial_cmp(&h[(i, i)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| h[(i, i)].re).collect();
    let mut sorted_vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    Ok(HermEig {
        values,
        vectors: sorted_vectors,
    })
}

/// Clamp the spectrum of a nominally PSD matrix: negatives within rounding
/// noise of the spectral radius become zero, anything worse is an error.
/// Positives at solver-noise level are flushed too — a +2e-18 left over from
/// an exact null space would otherwise leak √-amplified noise into spectral
/// functions.
pub fn clamp_psd_spectrum(values: &[f64]) -> Result<Vec<f64>> {
    let scale = values.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        if v < -tol::EIG_CLAMP * scale {
            return Err(Error::NegativeEigenvalue { value: v });
        }
        out.push(if v <= tol::EIG_FLUSH * scale { 0.0 } else { v });
    }
    Ok(out)
}

/// f(A) for Hermitian PSD A via the spectral theorem; `f` receives the clamped
/// eigenvalues.
pub fn hermitian_fn(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let eig = hermitian_eigen(a)?;
    let lam = clamp_psd_spectrum(&eig.values)?;
    let n = lam.len();
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = C64::new(f(lam[i]), 0.0);
    }
    Ok(&eig.vectors * d * eig.vectors.adjoint())
}

pub fn psd_sqrt(a: &CMat) -> Result<CMat> {
    hermitian_fn(a, f64::sqrt)
}

/// Pseudo-inverse square root: eigenvalues below `rank_tol` are treated as an
/// exact null space and inverted to zero.
pub fn psd_pinv_sqrt(a: &CMat, rank_tol: f64) -> Result<CMat> {
    hermitian_fn(a, |l| if l > rank_tol { 1.0 / l.sqrt() } else { 0.0 })
}

/// DFT of `row` with kernel exp(-i2πkm/M): eigenvalues of the circulant matrix
/// whose first row is `row`.
pub fn circulant_eigenvalues(row: &[C64]) -> Vec<f64> {
    let m = row.len();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = C64::new(0.0, 0.0);
        for (j, &c) in row.iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / (m as f64);
            acc += c * C64::new(ang.cos(), ang.sin());
        }
        out.push(acc.re); // Hermitian circulant ⇒ real spectrum
    }
    out
}

/// First row of f(C) for a Hermitian circulant C given its first row: apply f
/// to the DFT spectrum and transform back.
pub fn circulant_fn_row(row: &[C64], f: impl Fn(f64) -> f64) -> Result<Vec<C64>> {
    let m = row.len();
    let lam = clamp_psd_spectrum(&circulant_eigenvalues(row))?;
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &l) in lam.iter().enumerate() {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / (m as f64);
            acc += C64::new(ang.cos(), ang.sin()) * f(l);
        }
        out.push(acc / m as f64);
    }
    Ok(out)
}

/// Euclidean projection onto the probability simplex (Duchi et al. 2008).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Minimize xᵀQx over the probability simplex. Q must be symmetric; for the
/// Gram-kernel matrices used here it is PSD, so projected gradient converges
/// globally. An active-set polish solves the KKT system on the final support
/// to push the Frank-Wolfe gap below `tol`.
pub struct SimplexQpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Frank-Wolfe optimality gap xᵀ∇ - min ∇ (zero at a KKT point).
    pub gap: f64,
}

pub fn simplex_qp_min(q: &RMat, tol: f64) -> SimplexQpSolution {
    let n = q.nrows();
    let grad = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| 2.0 * (0..n).map(|j| q[(i, j)] * x[j]).sum::<f64>())
            .collect()
    };
    let value = |x: &[f64]| -> f64 {
        (0..n)
            .map(|i| x[i] * (0..n).map(|j| q[(i, j)] * x[j]).sum::<f64>())
            .sum()
    };
    let fw_gap = |x: &[f64], g: &[f64]| -> f64 {
        let xg: f64 = x.iter().zip(g).map(|(a, b)| a * b).sum();
        xg - g.iter().cloned().fold(f64::INFINITY, f64::min)
    };

    // Lipschitz bound for the fixed step: 2‖Q‖_∞ ≥ 2‖Q‖₂.
    let lip = 2.0
        * (0..n)
            .map(|i| (0..n).map(|j| q[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max);
    let step = if lip > 0.0 { 1.0 / lip } else { 1.0 };

    let mut x = vec![1.0 / n as f64; n];
    let mut g = grad(&x);
    for _ in 0..200_000 {
        if fw_gap(&x, &g) <= tol {
            break;
        }
        let moved: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
        x = project_simplex(&moved);
        g = grad(&x);
    }

    // Polish: on the support S the optimum satisfies Q_SS ξ_S ∝ 1.
    let support: Vec<usize> = (0..n).filter(|&i| x[i] > 1e-12).collect();
    if !support.is_empty() {
        let k = support.len();
        let qs = RMat::from_fn(k, k, |a, b| q[(support[a], support[b])]);
        let ones = nalgebra::DVector::from_element(k, 1.0);
        if let Some(sol) = qs.lu().solve(&ones) {
            let total: f64 = sol.iter().sum();
            if total.abs() > 1e-300 {
                let cand: Vec<f64> = sol.iter().map(|&v| v / total).collect();
                if cand.iter().all(|&v| v >= 0.0) {
                    let mut full = vec![0.0; n];
                    for (a, &i) in support.iter().enumerate() {
                        full[i] = cand[a];
                    }
                    let gc = grad(&full);
                    if value(&full) <= value(&x) && fw_gap(&full, &gc) <= fw_gap(&x, &g) {
                        x = full;
                        g = gc;
                    }
                }
            }
        }
    }

    let val = value(&x);
    let gap = fw_gap(&x, &g);
    SimplexQpSolution { x, value: val, gap }
}

/// Golden-section maximum of a unimodal function on [a, b] to absolute
/// x-tolerance `xtol`. Returns (argmax, max).
pub fn golden_max(mut a: f64, mut b: f64, xtol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    // Keep the best sampled point; the endpoints can win at boundary maxima.
    let (mut bx, mut bf) = (xm, fm);
    for (x, v) in [(c, fc), (d, fd)] {
        if v > bf {
            bx = x;
            bf = v;
        }
    }
    (bx, bf)
}

/// x·ln x with the 0·ln 0 = 0 convention.
pub fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}
