//! Product-integration weights for the left Caputo derivative and the
//! Riemann-Liouville integral on a strictly increasing node set.
//!
//! Every operator is linear in the sampled values, so each node evaluation is
//! returned as a row of coefficients. The Caputo rows integrate the kernel
//! (x - t)^(-alpha) exactly against the derivative of a piecewise interpolant:
//! linear on the first interval, quadratic through the two previous nodes on
//! every later one. Between a terminal below the first node and that node the
//! first linear piece is continued.

use super::gamma::recip_gamma;

/// Powers (x - x_i)^p for i < k, plus the same power of (x - terminal).
fn distances(nodes: &[f64], terminal: f64, k: usize, p: f64) -> (Vec<f64>, f64) {
    let x = nodes[k];
    let pw = (0..=k).map(|i| (x - nodes[i]).max(0.0).powf(p)).collect();
    (pw, (x - terminal).max(0.0).powf(p))
}

/// Coefficients c with D f(x_k) = sum_i c_i f_i for 0 < alpha < 1.
pub(crate) fn caputo_row_frac(nodes: &[f64], terminal: f64, alpha: f64, k: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|c| *c = 0.0);
    let n = nodes.len();
    if n < 2 {
        return;
    }
    let x = nodes[k];
    let e1 = 1.0 - alpha;
    let (p1, t1) = distances(nodes, terminal, k, e1);
    let p2 = |i: usize| (x - nodes[i]) * p1[i];

    for j in 0..k {
        let h = nodes[j + 1] - nodes[j];
        let m0 = (p1[j] - p1[j + 1]) / e1;
        out[j + 1] += m0 / h;
        out[j] -= m0 / h;
        if j >= 1 {
            let hp = nodes[j] - nodes[j - 1];
            let mid = 0.5 * (nodes[j] + nodes[j + 1]);
            let m1 = (x - mid) * m0 - (p2(j) - p2(j + 1)) / (2.0 - alpha);
            let w = 2.0 * m1 / (nodes[j + 1] - nodes[j - 1]);
            out[j + 1] += w / h;
            out[j] -= w / h + w / hp;
            out[j - 1] += w / hp;
        }
    }
    if terminal < nodes[0] {
        let h0 = nodes[1] - nodes[0];
        let m0 = (t1 - p1[0]) / e1;
        out[1] += m0 / h0;
        out[0] -= m0 / h0;
    }
    let scale = recip_gamma(e1);
    out.iter_mut().for_each(|c| *c *= scale);
}

/// Width of the finite-difference stencil used at integer order.
pub(crate) const INT_STENCIL: usize = 7;

/// First-derivative weights at `x0` for arbitrary `pts` (Fornberg's recursion).
pub(crate) fn fornberg_first(x0: f64, pts: &[f64]) -> Vec<f64> {
    let m = pts.len();
    // c[j][d] for derivative orders d = 0, 1
    let mut c = vec![[0.0f64; 2]; m];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..m {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = pts[i] - pts[j];
            c2 *= c3;
            if j == i - 1 {
                c[i][1] = c1 * (c[i - 1][0] - (pts[i - 1] - x0) * c[i - 1][1]) / c2;
                c[i][0] = -c1 * (pts[i - 1] - x0) * c[i - 1][0] / c2;
            }
            c[j][1] = ((pts[i] - x0) * c[j][1] - c[j][0]) / c3;
            c[j][0] = (pts[i] - x0) * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|r| r[1]).collect()
}

/// Ordinary derivative weights at node k from a local stencil of up to
/// [`INT_STENCIL`] nodes, centred where possible and one-sided at the ends.
pub(crate) fn derivative_row_int(nodes: &[f64], k: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|c| *c = 0.0);
    let n = nodes.len();
    if n < 2 {
        return;
    }
    let w = INT_STENCIL.min(n);
    let s = k.saturating_sub(w / 2).min(n - w);
    let wts = fornberg_first(nodes[k], &nodes[s..s + w]);
    out[s..s + w].copy_from_slice(&wts);
}

pub(crate) fn caputo_row(nodes: &[f64], terminal: f64, alpha: f64, k: usize, out: &mut [f64]) {
    if alpha == 1.0 {
        derivative_row_int(nodes, k, out)
    } else {
        caputo_row_frac(nodes, terminal, alpha, k, out)
    }
}

/// Coefficients of the RL integral I^alpha f(x_k) for a piecewise-linear f.
pub(crate) fn integral_row(nodes: &[f64], terminal: f64, alpha: f64, k: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|c| *c = 0.0);
    let n = nodes.len();
    let x = nodes[k];
    let (q0, t0) = distances(nodes, terminal, k, alpha);
    let q1 = |i: usize| (x - nodes[i]) * q0[i];

    for j in 0..k {
        let h = nodes[j + 1] - nodes[j];
        let b = x - nodes[j];
        let n0 = (q0[j] - q0[j + 1]) / alpha;
        let n1 = b * n0 - (q1(j) - q1(j + 1)) / (alpha + 1.0);
        out[j] += n0 - n1 / h;
        out[j + 1] += n1 / h;
    }
    if terminal < nodes[0] {
        let a = x - nodes[0];
        let b = x - terminal;
        let n0 = (t0 - q0[0]) / alpha;
        out[0] += n0;
        if n >= 2 {
            let h0 = nodes[1] - nodes[0];
            let tail = a * n0 - (b * t0 - q1(0)) / (alpha + 1.0);
            out[1] += tail / h0;
            out[0] -= tail / h0;
        }
    }
    let scale = recip_gamma(alpha);
    out.iter_mut().for_each(|c| *c *= scale);
}

/// Dense lower-triangular (banded at alpha = 1) operator over a node set.
#[derive(Debug, Clone)]
pub(crate) struct LineOperator {
    n: usize,
    coef: Vec<f64>,
}

impl LineOperator {
    fn build(nodes: &[f64], row: impl Fn(usize, &mut [f64])) -> Self {
        let n = nodes.len();
        let mut coef = vec![0.0; n * n];
        for k in 0..n {
            row(k, &mut coef[k * n..(k + 1) * n]);
        }
        Self { n, coef }
    }

    pub(crate) fn caputo(nodes: &[f64], terminal: f64, alpha: f64) -> Self {
        Self::build(nodes, |k, out| caputo_row(nodes, terminal, alpha, k, out))
    }

    pub(crate) fn integral(nodes: &[f64], terminal: f64, alpha: f64) -> Self {
        Self::build(nodes, |k, out| integral_row(nodes, terminal, alpha, k, out))
    }

    /// Row-major n x n coefficients.
    pub(crate) fn matrix(&self) -> &[f64] {
        &self.coef
    }

    pub(crate) fn apply(&self, f: &[f64], out: &mut [f64]) {
        for k in 0..self.n {
            let row = &self.coef[k * self.n..(k + 1) * self.n];
            out[k] = row.iter().zip(f).map(|(c, v)| c * v).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(row: &[f64], f: &[f64]) -> f64 {
        row.iter().zip(f).map(|(c, v)| c * v).sum()
    }

    #[test]
    fn caputo_rows_annihilate_constants() {
        let nodes: Vec<f64> = (0..40).map(|i| 0.3 + (i as f64 * 0.11).powf(1.3)).collect();
        let ones = vec![1.0; nodes.len()];
        let mut row = vec![0.0; nodes.len()];
        for &alpha in &[0.2, 0.5, 0.9, 1.0] {
            for k in 0..nodes.len() {
                caputo_row(&nodes, 0.1, alpha, k, &mut row);
                assert!(eval(&row, &ones).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn integer_rows_exact_on_polynomials() {
        let nodes: [f64; 9] = [0.0, 0.2, 0.5, 0.55, 0.7, 0.81, 1.0, 1.3, 1.35];
        let f: Vec<f64> = nodes
            .iter()
            .map(|x| x.powi(6) - 3.0 * x * x - x + 2.0)
            .collect();
        let mut row = vec![0.0; nodes.len()];
        for (k, x) in nodes.iter().enumerate() {
            derivative_row_int(&nodes, k, &mut row);
            assert!((eval(&row, &f) - (6.0 * x.powi(5) - 6.0 * x - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn integral_of_one_is_power() {
        // I^a 1 = (x - t)^a / Gamma(a + 1), exact for the linear interpolant.
        let nodes: Vec<f64> = (0..21).map(|i| 0.5 + 0.05 * i as f64).collect();
        let ones = vec![1.0; nodes.len()];
        let mut row = vec![0.0; nodes.len()];
        let a = 0.35;
        let g = crate::fraccore::gamma(a + 1.0).unwrap();
        for k in 0..nodes.len() {
            integral_row(&nodes, 0.0, a, k, &mut row);
            let expect = nodes[k].powf(a) / g;
            assert!((eval(&row, &ones) - expect).abs() < 1e-13);
        }
    }
}
