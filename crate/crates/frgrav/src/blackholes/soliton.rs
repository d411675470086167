//! Integer solitonic background
//! eta.. + e (eta' + 6 eta eta* + eta***)* = 0 on (x^1, [x^2,] v):
//! dots along x^1, primes along x^2, stars along v.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraccore::SampledField;

/// Treatment of the v edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VBoundary {
    /// Period n h on a uniform axis; the last node is not repeated.
    #[default]
    Periodic,
    /// Values near the ends are data; the residual skips three nodes per side.
    Clamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
}

impl Default for SolitonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 500,
            damping: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolitonSolution {
    pub eta: SampledField,
    pub residual: f64,
    pub history: Vec<f64>,
}

fn uniform_step(nodes: &[f64], what: &str) -> Result<f64> {
    let h = nodes[1] - nodes[0];
    if nodes
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h)
    {
        return Err(Error::Precondition(format!("{what} axis must be uniform")));
    }
    Ok(h)
}

struct Layout {
    n1: usize,
    n2: usize,
    nv: usize,
    h1: f64,
    hv: f64,
    x2: Vec<f64>,
}

fn layout(eta: &SampledField) -> Result<Layout> {
    let nd = eta.ndim();
    if !(nd == 2 || nd == 3) {
        return Err(Error::Shape("eta lives on (x1, v) or (x1, x2, v)".into()));
    }
    let a1 = eta.axis(0);
    let av = eta.axis(nd - 1);
    if a1.len() < 3 || av.len() < 7 {
        return Err(Error::Shape(
            "need at least 3 nodes in x1 and 7 in v".into(),
        ));
    }
    let x2 = if nd == 3 {
        eta.axis(1).nodes().to_vec()
    } else {
        vec![0.0]
    };
    Ok(Layout {
        n1: a1.len(),
        n2: x2.len(),
        nv: av.len(),
        h1: uniform_step(a1.nodes(), "x1")?,
        hv: uniform_step(av.nodes(), "v")?,
        x2,
    })
}

fn idx(l: &Layout, i: usize, j: usize, k: usize) -> usize {
    (i * l.n2 + j) * l.nv + k
}

/// Central first and second differences along v on one line. Clamped ends
/// keep zeros in the first and last node.
fn dv(line: &[f64], h: f64, periodic: bool, out: &mut [f64]) {
    let n = line.len();
    for k in 0..n {
        let (p, m) = if periodic {
            ((k + 1) % n, (k + n - 1) % n)
        } else if k == 0 || k == n - 1 {
            out[k] = 0.0;
            continue;
        } else {
            (k + 1, k - 1)
        };
        out[k] = (line[p] - line[m]) / (2.0 * h);
    }
}

fn dvv(line: &[f64], h: f64, periodic: bool, out: &mut [f64]) {
    let n = line.len();
    for k in 0..n {
        let (p, m) = if periodic {
            ((k + 1) % n, (k + n - 1) % n)
        } else if k == 0 || k == n - 1 {
            out[k] = 0.0;
            continue;
        } else {
            (k + 1, k - 1)
        };
        out[k] = (line[p] - line[k] - line[k] + line[m]) / (h * h);
    }
}

/// eta' along x^2 (central inside, one-sided at the ends).
fn d2(eta: &[f64], l: &Layout) -> Vec<f64> {
    let mut out = vec![0.0; eta.len()];
    if l.n2 < 2 {
        return out;
    }
    for i in 0..l.n1 {
        for j in 0..l.n2 {
            let (a, b) = if j == 0 {
                (0, 1)
            } else if j == l.n2 - 1 {
                (j - 1, j)
            } else {
                (j - 1, j + 1)
            };
            for k in 0..l.nv {
                out[idx(l, i, j, k)] =
                    (eta[idx(l, i, b, k)] - eta[idx(l, i, a, k)]) / (l.x2[b] - l.x2[a]);
            }
        }
    }
    out
}

/// Bracket eta' + 6 (eta - shift) eta* + eta*** differentiated once more in v;
/// the eta*** part is left out when `linear` is false.
fn vertical_part(eta: &[f64], l: &Layout, periodic: bool, linear: bool, shift: f64) -> Vec<f64> {
    let ep = d2(eta, l);
    let mut out = vec![0.0; eta.len()];
    let nv = l.nv;
    let (mut a, mut b, mut c) = (vec![0.0; nv], vec![0.0; nv], vec![0.0; nv]);
    for base in (0..eta.len()).step_by(nv) {
        let line = &eta[base..base + nv];
        dv(line, l.hv, periodic, &mut a);
        for k in 0..nv {
            c[k] = ep[base + k] + 6.0 * (line[k] - shift) * a[k];
        }
        if linear {
            dvv(line, l.hv, periodic, &mut b);
            dv(&b, l.hv, periodic, &mut a);
            for k in 0..nv {
                c[k] += a[k];
            }
        }
        dv(&c, l.hv, periodic, &mut b);
        out[base..base + nv].copy_from_slice(&b);
    }
    out
}

fn residual_values(eta: &[f64], l: &Layout, e: f64, periodic: bool) -> Vec<f64> {
    let vp = vertical_part(eta, l, periodic, true, 0.0);
    let mut r = vec![0.0; eta.len()];
    let s = 1.0 / (l.h1 * l.h1);
    for i in 1..l.n1 - 1 {
        for j in 0..l.n2 {
            for k in 0..l.nv {
                let c = idx(l, i, j, k);
                let xx =
                    (eta[idx(l, i + 1, j, k)] - eta[c] - eta[c] + eta[idx(l, i - 1, j, k)]) * s;
                r[c] = xx + e * vp[c];
            }
        }
    }
    r
}

fn check_sign(eps_sign: i8) -> Result<f64> {
    match eps_sign {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::Domain("the solitonic sign must be +1 or -1".into())),
    }
}

/// Nodewise residual; zero on the x^1 edges and, when clamped, on three v nodes per side.
pub fn soliton_residual(eta: &SampledField, eps_sign: i8, bc: VBoundary) -> Result<SampledField> {
    let e = check_sign(eps_sign)?;
    let l = layout(eta)?;
    let mut r = residual_values(eta.values(), &l, e, bc == VBoundary::Periodic);
    if bc == VBoundary::Clamped {
        for (p, v) in r.iter_mut().enumerate() {
            let k = p % l.nv;
            if k < 3 || k + 3 >= l.nv {
                *v = 0.0;
            }
        }
    }
    eta.with_values(r)
}

/// Damped relaxation from `init`, periodic in v, with the x^1 edges clamped
/// to the initial values. Each sweep solves the linear part, including the
/// nonlinearity linearized about the mean of eta, exactly (FFT in v,
/// tridiagonal in x^1) and lags the remainder and the x^2 terms.
pub fn solitonic_eta(
    init: &SampledField,
    eps_sign: i8,
    opts: &SolitonOptions,
) -> Result<SolitonSolution> {
    let e = check_sign(eps_sign)?;
    let l = layout(init)?;
    if !init.is_finite() {
        return Err(Error::Domain("initial guess has non-finite values".into()));
    }
    let nv = l.nv;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(nv);
    let inv = planner.plan_fft_inverse(nv);
    // symbols of D1 D1 D2 and D1 D1 along v
    let theta = |m: usize| 2.0 * std::f64::consts::PI * m as f64 / nv as f64;
    let sym: Vec<f64> = (0..nv)
        .map(|m| 4.0 * theta(m).sin().powi(2) * (0.5 * theta(m)).sin().powi(2) / l.hv.powi(4))
        .collect();
    let sym2: Vec<f64> = (0..nv).map(|m| -(theta(m).sin() / l.hv).powi(2)).collect();
    let s = 1.0 / (l.h1 * l.h1);
    let mut eta = init.values().to_vec();
    let mut history = Vec::new();
    let mut res = residual_values(&eta, &l, e, true)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    history.push(res);
    let mut it = 0;
    while res > opts.tol {
        if it == opts.max_iter || !res.is_finite() {
            return Err(Error::NonConvergence {
                iterations: it,
                residual: res,
            });
        }
        it += 1;
        let mean = eta.iter().sum::<f64>() / eta.len() as f64;
        let nl = vertical_part(&eta, &l, true, false, mean);
        let mut next = eta.clone();
        for j in 0..l.n2 {
            // rhs rows in spectral space, interior x1 only; edges carry data
            let mut rows: Vec<Vec<Complex64>> = (0..l.n1)
                .map(|i| {
                    let mut row: Vec<Complex64> = (0..nv)
                        .map(|k| {
                            let c = idx(&l, i, j, k);
                            let v = if i == 0 || i == l.n1 - 1 {
                                eta[c]
                            } else {
                                -e * nl[c]
                            };
                            Complex64::new(v, 0.0)
                        })
                        .collect();
                    fwd.process(&mut row);
                    row
                })
                .collect();
            for m in 0..nv {
                let diag = -2.0 * s + e * (sym[m] + 6.0 * mean * sym2[m]);
                // Thomas sweep on the interior with the edge values moved to the rhs
                let n = l.n1 - 2;
                let mut cp = vec![0.0; n];
                let mut dp = vec![Complex64::new(0.0, 0.0); n];
                for t in 0..n {
                    let i = t + 1;
                    let mut d = rows[i][m];
                    if i == 1 {
                        d -= rows[0][m] * s;
                    }
                    if i == l.n1 - 2 {
                        d -= rows[l.n1 - 1][m] * s;
                    }
                    let denom = if t == 0 { diag } else { diag - s * cp[t - 1] };
                    if denom.abs() < 1e-14 * (s + sym[m] - sym2[m]) {
                        return Err(Error::NonConvergence {
                            iterations: it,
                            residual: f64::INFINITY,
                        });
                    }
                    cp[t] = s / denom;
                    dp[t] = if t == 0 {
                        d / denom
                    } else {
                        (d - dp[t - 1] * s) / denom
                    };
                }
                for t in (0..n).rev() {
                    let x = if t + 1 < n {
                        dp[t] - rows[t + 2][m] * cp[t]
                    } else {
                        dp[t]
                    };
                    rows[t + 1][m] = x;
                }
            }
            for i in 1..l.n1 - 1 {
                let mut row = rows[i].clone();
                inv.process(&mut row);
                for k in 0..nv {
                    let c = idx(&l, i, j, k);
                    let target = row[k].re / nv as f64;
                    next[c] = eta[c] + opts.damping * (target - eta[c]);
                }
            }
        }
        eta = next;
        res = residual_values(&eta, &l, e, true)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        history.push(res);
    }
    Ok(SolitonSolution {
        eta: init.with_values(eta)?,
        residual: res,
        history,
    })
}
