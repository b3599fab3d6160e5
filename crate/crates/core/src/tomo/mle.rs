use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::density::{unit, DensityMatrix};
use super::sim::Tally;
use crate::error::{Error, Result};
use crate::qcore::gates::{Matrix, ZERO};

/// Stop once the per-photon log-likelihood improves by less than this.
pub const LL_TOL: f64 = 1e-10;
pub const MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct MleResult {
    pub rho: DensityMatrix,
    /// Per-photon log-likelihood of `rho`.
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Lower-triangular `T = [[t0, 0], [t2 + i t3, t1]]`; `ρ = T†T / tr(T†T)`.
type Params = [f64; 4];

fn t_matrix(t: &Params) -> Matrix {
    Matrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(t[0], 0.0),
            ZERO,
            Complex64::new(t[2], t[3]),
            Complex64::new(t[1], 0.0),
        ],
    )
}

fn dt(k: usize) -> Matrix {
    let mut d = Matrix::zeros(2, 2);
    match k {
        0 => d[(0, 0)] = Complex64::new(1.0, 0.0),
        1 => d[(1, 1)] = Complex64::new(1.0, 0.0),
        2 => d[(1, 0)] = Complex64::new(1.0, 0.0),
        _ => d[(1, 0)] = Complex64::new(0.0, 1.0),
    }
    d
}

fn params_of(rho: &DensityMatrix) -> Params {
    let m = rho.matrix();
    let (a, b, d) = (m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re);
    if d > 1e-14 {
        let t1 = d.sqrt();
        let off = b.conj() / t1;
        [(a - b.norm_sqr() / d).max(0.0).sqrt(), t1, off.re, off.im]
    } else {
        [a.max(0.0).sqrt(), 0.0, 0.0, 0.0]
    }
}

/// One term of the likelihood: weight and the operator whose expectation is
/// the outcome probability.
struct Term {
    weight: f64,
    op: Matrix,
}

fn terms(tallies: &[Tally]) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    let mut total = 0.0;
    for t in tallies {
        if t.counts.len() != t.settings.len() {
            return Err(Error::LengthMismatch {
                poly: t.settings.len(),
                vars: t.counts.len(),
            });
        }
        for (s, &n) in t.settings.iter().zip(&t.counts) {
            out.push(Term {
                weight: n,
                op: s.projector().clone(),
            });
        }
        if !t.is_complete() {
            let rest = t.shots - t.counts.iter().sum::<f64>();
            if rest < -1e-9 {
                return Err(Error::InvalidArgument("more counts than shots".into()));
            }
            let op = t.settings.iter().fold(unit(), |acc, s| acc - s.projector());
            out.push(Term { weight: rest.max(0.0), op });
        }
        total += t.shots;
    }
    if total <= 0.0 {
        return Err(Error::InvalidArgument("no photons recorded".into()));
    }
    for t in &mut out {
        t.weight /= total;
    }
    out.retain(|t| t.weight > 0.0);
    Ok(out)
}

fn log_likelihood(terms: &[Term], t: &Params) -> f64 {
    let tm = t_matrix(t);
    let a = tm.adjoint() * &tm;
    let tr = a.trace().re;
    if tr <= 0.0 {
        return f64::NEG_INFINITY;
    }
    terms
        .iter()
        .map(|term| {
            let p = (&term.op * &a).trace().re / tr;
            if p <= 0.0 {
                f64::NEG_INFINITY
            } else {
                term.weight * p.ln()
            }
        })
        .sum()
}

fn gradient(terms: &[Term], t: &Params) -> Params {
    let tm = t_matrix(t);
    let a = tm.adjoint() * &tm;
    let tr = a.trace().re;
    let mut g = [0.0; 4];
    for (k, gk) in g.iter_mut().enumerate() {
        let d = dt(k);
        let da = d.adjoint() * &tm + tm.adjoint() * &d;
        let dtr = da.trace().re;
        *gk = terms
            .iter()
            .map(|term| {
                let pa = (&term.op * &a).trace().re;
                let dpa = (&term.op * &da).trace().re;
                term.weight * (dpa / pa - dtr / tr)
            })
            .sum();
    }
    g
}

/// Least-squares Bloch vector from the observed frequencies, clipped to the
/// unit ball.
fn linear_estimate(tallies: &[Tally]) -> Result<DensityMatrix> {
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for t in tallies {
        let denom = if t.is_complete() { t.counts.iter().sum::<f64>() } else { t.shots };
        if denom <= 0.0 {
            continue;
        }
        for (s, &n) in t.settings.iter().zip(&t.counts) {
            // Π = (I + n·σ)/2 so tr(Πρ) = (1 + n·r)/2
            let p = s.projector();
            let nv = Vector3::new(2.0 * p[(1, 0)].re, 2.0 * p[(1, 0)].im, (p[(0, 0)] - p[(1, 1)]).re);
            let y = 2.0 * n / denom - 1.0;
            ata += nv * nv.transpose();
            atb += nv * y;
        }
    }
    let r = ata
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("measurement settings are not informationally complete".into()))?
        * atb;
    Ok(DensityMatrix::from_bloch([r[0], r[1], r[2]]))
}

/// Maximum-likelihood state from polarization counts. Starts at the clipped
/// linear estimate and climbs with backtracking gradient steps in the
/// Cholesky parameters. Non-convergence is reported via `converged`.
pub fn mle_reconstruct(tallies: &[Tally]) -> Result<MleResult> {
    let terms = terms(tallies)?;
    let start = linear_estimate(tallies)?;
    let mut t = params_of(&start);
    let mut ll = log_likelihood(&terms, &t);
    if !ll.is_finite() {
        // The clipped estimate can sit on a face the data rules out.
        t = params_of(&DensityMatrix::maximally_mixed());
        ll = log_likelihood(&terms, &t);
    }
    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERS {
        iterations += 1;
        let g = gradient(&terms, &t);
        if g.iter().all(|x| x.abs() < 1e-14) {
            converged = true;
            break;
        }
        let mut accepted = None;
        while step > 1e-18 {
            let cand: Params = std::array::from_fn(|k| t[k] + step * g[k]);
            let lc = log_likelihood(&terms, &cand);
            if lc > ll {
                accepted = Some((cand, lc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, lc)) = accepted else {
            converged = true;
            break;
        };
        let gain = lc - ll;
        t = cand;
        ll = lc;
        step *= 2.0;
        if gain < LL_TOL {
            converged = true;
            break;
        }
    }
    let tm = t_matrix(&t);
    let a = tm.adjoint() * &tm;
    let tr = a.trace();
    let rho = a / tr;
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(MleResult {
        rho: DensityMatrix::new(rho)?,
        log_likelihood: ll,
        iterations,
        converged,
    })
}
