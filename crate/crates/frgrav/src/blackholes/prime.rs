use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraccore::{FracOrder, Grid1D, SampledField};
use crate::geomframe::{DMetric, NConnection};

/// Default lower bound on |varpi^2| kept on the radial grid.
pub const HORIZON_MARGIN: f64 = 0.05;
const XI_TOL: f64 = 1e-14;

/// Schwarzschild-type seed over the chart (xi, theta, phi); t is Killing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeData {
    pub mu0: f64,
    pub eps: f64,
    r: Vec<f64>,
    xi: Vec<f64>,
    varpi2: Vec<f64>,
    axes: Vec<Grid1D>,
}

/// varpi^2(r) = 1 - 2 mu0 / r + eps / r^2.
pub fn varpi2(mu0: f64, eps: f64, r: f64) -> f64 {
    1.0 - 2.0 * mu0 / r + eps / (r * r)
}

/// Real roots of varpi^2, ascending.
pub fn horizon_radii(mu0: f64, eps: f64) -> Vec<f64> {
    let disc = mu0 * mu0 - eps;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let mut roots: Vec<f64> = [mu0 - s, mu0 + s]
        .into_iter()
        .filter(|r| *r > 0.0)
        .collect();
    roots.dedup();
    roots
}

/// Seed data on the radial nodes of `r_grid`; theta and phi become x^2 and v.
/// Nodes with |varpi^2| below `margin`, or a sign change of varpi^2 between
/// neighbouring nodes, are rejected.
pub fn prime_schwarzschild(
    mu0: f64,
    eps: f64,
    r_grid: &Grid1D,
    theta: &Grid1D,
    phi: &Grid1D,
    margin: f64,
) -> Result<PrimeData> {
    if !(mu0 > 0.0 && mu0.is_finite()) {
        return Err(Error::Domain(format!(
            "mass parameter {mu0} must be positive"
        )));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} outside [0, 1)")));
    }
    let r = r_grid.nodes().to_vec();
    if r[0] <= 0.0 {
        return Err(Error::Domain("radial nodes must be positive".into()));
    }
    let w: Vec<f64> = r.iter().map(|&x| varpi2(mu0, eps, x)).collect();
    let roots = horizon_radii(mu0, eps);
    let name = || {
        roots
            .iter()
            .map(|x| format!("{x}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    for k in 0..r.len() {
        if w[k].abs() < margin {
            return Err(Error::Horizon(format!(
                "|varpi^2| = {:.3e} < {margin} at r = {}; roots at r = {}",
                w[k].abs(),
                r[k],
                name()
            )));
        }
        if k > 0 && w[k].signum() != w[k - 1].signum() {
            return Err(Error::Horizon(format!(
                "varpi^2 changes sign between r = {} and r = {}; roots at r = {}",
                r[k - 1],
                r[k],
                name()
            )));
        }
    }
    let mut xi = vec![0.0; r.len()];
    for k in 1..r.len() {
        let piece =
            quadrature::integrate(|x| varpi2(mu0, eps, x).abs().sqrt(), r[k - 1], r[k], XI_TOL)
                .integral;
        xi[k] = xi[k - 1] + piece;
    }
    let xi_axis = Grid1D::new(xi.clone(), 0.0)?;
    Ok(PrimeData {
        mu0,
        eps,
        r,
        xi,
        varpi2: w,
        axes: vec![xi_axis, theta.clone(), phi.clone()],
    })
}

/// `n` radii on [r_min, r_max] equally spaced in xi, by bisection on the
/// cumulative quadrature. Both ends must lie on one side of every root.
pub fn uniform_xi_radii(mu0: f64, eps: f64, r_min: f64, r_max: f64, n: usize) -> Result<Grid1D> {
    if !(r_min > 0.0 && r_max > r_min) || n < 2 {
        return Err(Error::Domain(format!(
            "bad radial range [{r_min}, {r_max}] with {n} nodes"
        )));
    }
    let xi = |r: f64| {
        quadrature::integrate(|x| varpi2(mu0, eps, x).abs().sqrt(), r_min, r, XI_TOL).integral
    };
    let total = xi(r_max);
    let mut r = vec![r_min];
    for k in 1..n - 1 {
        let target = total * k as f64 / (n - 1) as f64;
        let (mut lo, mut hi) = (r[k - 1], r_max);
        while hi - lo > 1e-14 * r_max {
            let mid = 0.5 * (lo + hi);
            if xi(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        r.push(0.5 * (lo + hi));
    }
    r.push(r_max);
    Grid1D::new(r, r_min)
}

impl PrimeData {
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn varpi2(&self) -> &[f64] {
        &self.varpi2
    }

    pub fn axes(&self) -> &[Grid1D] {
        &self.axes
    }

    /// A function of (r, theta, phi) sampled on the chart.
    pub fn field(&self, f: impl Fn(f64, f64, f64) -> f64) -> SampledField {
        let (nt, np) = (self.axes[1].len(), self.axes[2].len());
        let mut v = Vec::with_capacity(self.r.len() * nt * np);
        for &r in &self.r {
            for &t in self.axes[1].nodes() {
                for &p in self.axes[2].nodes() {
                    v.push(f(r, t, p));
                }
            }
        }
        SampledField::new(self.axes.clone(), v).expect("chart-sized field")
    }

    /// (g1, g2, h3, h4) = (-1, -r^2, -r^2 sin^2 theta, varpi^2).
    pub fn coefficients(&self) -> [SampledField; 4] {
        let (mu0, eps) = (self.mu0, self.eps);
        [
            self.field(|_, _, _| -1.0),
            self.field(|r, _, _| -r * r),
            self.field(|r, t, _| -(r * t.sin()).powi(2)),
            self.field(move |r, _, _| varpi2(mu0, eps, r)),
        ]
    }

    /// The seed as a d-metric with vanishing N-connection.
    pub fn metric(&self, ord: FracOrder) -> Result<DMetric> {
        let [g1, g2, h3, h4] = self.coefficients();
        let n = NConnection::zero(&g1)?;
        DMetric::new([g1, g2], [h3, h4], n, ord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> (Grid1D, Grid1D) {
        (
            Grid1D::uniform(0.3, 2.8, 5).unwrap(),
            Grid1D::uniform(0.0, 1.0, 4).unwrap(),
        )
    }

    #[test]
    fn varpi_at_twice_the_horizon() {
        assert_eq!(varpi2(1.5, 0.0, 6.0), 0.5);
        assert_eq!(horizon_radii(1.5, 0.0), vec![3.0]);
    }

    #[test]
    fn horizon_crossing_is_reported_with_root() {
        let (t, p) = chart();
        let r = Grid1D::uniform(1.5, 4.0, 11).unwrap();
        match prime_schwarzschild(1.0, 0.0, &r, &t, &p, HORIZON_MARGIN) {
            Err(Error::Horizon(m)) => assert!(m.contains("r = 2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn xi_is_increasing_and_starts_at_zero() {
        let (t, p) = chart();
        let r = Grid1D::uniform(2.5, 6.0, 9).unwrap();
        let d = prime_schwarzschild(1.0, 0.01, &r, &t, &p, HORIZON_MARGIN).unwrap();
        assert_eq!(d.xi()[0], 0.0);
        assert!(d.xi().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn invalid_parameters() {
        let (t, p) = chart();
        let r = Grid1D::uniform(3.0, 6.0, 5).unwrap();
        assert!(matches!(
            prime_schwarzschild(1.0, 1.0, &r, &t, &p, 0.05),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            prime_schwarzschild(-1.0, 0.0, &r, &t, &p, 0.05),
            Err(Error::Domain(_))
        ));
    }
}
