//! Integer-order cross-checks of the geometry layer against independent paths.
#![allow(clippy::needless_range_loop)]

use frgrav::fraccore::{FracOrder, Grid1D, SampledField};
use frgrav::geomframe::*;

fn axes(n: usize) -> Vec<Grid1D> {
    vec![
        Grid1D::uniform(0.2, 1.0, n).unwrap(),
        Grid1D::uniform(0.1, 0.9, n).unwrap(),
        Grid1D::uniform(0.3, 1.1, n).unwrap(),
    ]
}

fn smooth_metric(n: usize, ord: FracOrder) -> DMetric {
    let ax = axes(n);
    let f = |h: fn(f64, f64, f64) -> f64| {
        SampledField::from_fn(ax.clone(), |c| h(c[0], c[1], c[2])).unwrap()
    };
    DMetric::new(
        [
            f(|x, y, _| 1.0 + 0.3 * x * y),
            f(|x, y, _| 2.0 - 0.2 * x + 0.1 * y * y),
        ],
        [
            f(|x, y, v| -(1.0 + 0.4 * v * v + 0.1 * x * y)),
            f(|x, y, v| 1.5 + 0.5 * (v + x).sin() + 0.05 * y),
        ],
        NConnection::new(
            [
                f(|x, y, v| 0.2 * x * v + 0.1 * y),
                f(|x, _, v| 0.3 * (v - x).cos()),
            ],
            [
                f(|x, y, v| 0.1 * v * v * y + 0.05 * x),
                f(|x, y, v| 0.2 * x * y - 0.1 * v),
            ],
        )
        .unwrap(),
        ord,
    )
    .unwrap()
}

fn interior(g: &DMetric, layer: usize) -> Vec<bool> {
    evaluation_mask(
        &g.g1().shape(),
        &g.singular_mask(),
        &ResidualOptions {
            boundary_layer: layer,
            include_boundary: false,
        },
    )
}

fn max_diff(a: &SampledField, b: &SampledField, keep: &[bool]) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .zip(keep)
        .filter(|(_, k)| **k)
        .fold(0.0, |m, ((x, y), _)| m.max((x - y).abs()))
}

#[test]
fn reduced_system_matches_ricci_contraction() {
    let g = smooth_metric(21, FracOrder::integer());
    let r = residual_fields(&g, &SourceSpec::vacuum(g.axes()).unwrap()).unwrap();
    let ric = einstein_dtensor(&g).unwrap().ricci;
    let keep = interior(&g, 3);
    assert!(max_diff(&r.eq1, &(ric.get(0, 0) / g.g1()), &keep) < 1e-8);
    assert!(max_diff(&r.eq1, &(ric.get(1, 1) / g.g2()), &keep) < 1e-8);
    assert!(max_diff(&r.eq2, &(ric.get(2, 2) / g.h3()), &keep) < 1e-8);
    assert!(max_diff(&r.eq2, &(ric.get(3, 3) / g.h4()), &keep) < 1e-8);
    for k in 0..2 {
        assert!(max_diff(&r.eq3[k], ric.get(2, k), &keep) < 1e-8);
        assert!(max_diff(&r.eq4[k], ric.get(3, k), &keep) < 1e-8);
        // the transposed components are genuinely different
        assert!(max_diff(&r.eq3[k], ric.get(k, 2), &keep) > 1e-3);
    }
}

/// Levi-Civita coefficients in the N-adapted frame from the Koszul formula,
/// with the frame commutators written out by hand.
fn koszul(g: &DMetric) -> Vec<SampledField> {
    let fr = g.frames();
    let ord = g.ord();
    let zero = g.g1().map(|_| 0.0);
    let metric = |a: usize, b: usize| {
        if a == b {
            g.diag(a).clone()
        } else {
            zero.clone()
        }
    };
    let nc = |a: usize, i: usize| {
        if a == 2 {
            g.w(i).clone()
        } else {
            g.n(i).clone()
        }
    };
    // comm[c][a][b]: [e_a, e_b] = comm^c_ab e_c
    let mut comm = vec![vec![vec![zero.clone(); 4]; 4]; 4];
    for a in 2..4 {
        for i in 0..2 {
            let d = nc(a, i).caputo_axis(2, ord).unwrap();
            comm[a][2][i] = -&d;
            comm[a][i][2] = d;
        }
        let om = fr.apply(1, &nc(a, 0)).unwrap() - fr.apply(0, &nc(a, 1)).unwrap();
        comm[a][1][0] = -&om;
        comm[a][0][1] = om;
    }
    let lower = |c: &Vec<Vec<Vec<SampledField>>>, x: usize, y: usize, m: usize| -> SampledField {
        let mut s = zero.clone();
        for nu in 0..4 {
            s = s + &c[nu][x][y] * &metric(nu, m);
        }
        s
    };
    let mut out = vec![zero.clone(); 64];
    for mu in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let s = fr.apply(b, &metric(a, mu)).unwrap() + fr.apply(a, &metric(b, mu)).unwrap()
                    - fr.apply(mu, &metric(a, b)).unwrap()
                    + lower(&comm, b, a, mu)
                    - lower(&comm, b, mu, a)
                    - lower(&comm, a, mu, b);
                out[mu * 16 + a * 4 + b] = s / g.diag(mu) * 0.5;
            }
        }
    }
    out
}

#[test]
fn distortion_closes_canonical_to_levi_civita() {
    let g = smooth_metric(15, FracOrder::integer());
    let lc = koszul(&g);
    let conn = canonical_dconnection(&g).unwrap();
    let z = distortion_tensor(&g).unwrap();
    let keep = interior(&g, 0);
    for c in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let sum = conn.gamma().get(c, a, b) + z.get(c, a, b);
                let d = max_diff(&sum, &lc[c * 16 + a * 4 + b], &keep);
                assert!(d < 1e-12, "component ({c},{a},{b}) off by {d}");
            }
        }
    }
    assert!(z.max_abs() > 1e-2, "generic metric should be distorted");
}

#[test]
fn levi_civita_constraints_remove_distortion() {
    // v-independent h_a, x-independent h_a, constant n_i, w_i = 0.
    let ax = axes(9);
    let f = |h: fn(f64, f64, f64) -> f64| {
        SampledField::from_fn(ax.clone(), |c| h(c[0], c[1], c[2])).unwrap()
    };
    let g = DMetric::new(
        [f(|x, y, _| 1.0 + x * y), f(|x, _, _| 1.0 + x * x)],
        [f(|_, _, _| -2.0), f(|_, _, _| 0.5)],
        NConnection::new(
            [f(|_, _, _| 0.0), f(|_, _, _| 0.0)],
            [f(|_, _, _| 0.3), f(|_, _, _| -0.7)],
        )
        .unwrap(),
        FracOrder::new(0.75).unwrap(),
    )
    .unwrap();
    assert!(distortion_tensor(&g).unwrap().max_abs() < 1e-12);
    assert!(lc_conditions(&g).unwrap().passes(1e-12));
}

#[test]
fn metricity_and_pure_torsion_at_fractional_order() {
    let g = smooth_metric(11, FracOrder::new(0.6).unwrap());
    let conn = canonical_dconnection(&g).unwrap();
    assert!(nonmetricity(&g, &conn).unwrap().max_abs() < 1e-10);
    let t = torsion(&g, &conn).unwrap();
    for (x, y, z) in [
        (0, 0, 1),
        (0, 1, 0),
        (1, 0, 1),
        (2, 2, 3),
        (3, 3, 2),
        (2, 3, 2),
    ] {
        assert!(t.get(x, y, z).max_abs() < 1e-10);
    }
    // mixed torsion T^i_ja = C^i_ja is not zero
    assert!(t.get(0, 0, 2).max_abs() > 0.0 || t.get(2, 0, 1).max_abs() > 0.0);
}
