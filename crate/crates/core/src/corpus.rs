//! Built-in test functions with analytic derivatives and derivative-extreme oracles.
//!
//! Oracle intervals are the exact extremes of each partial over the entry's box,
//! derived in closed form. `examples/corpus_oracles.rs` recomputes them by brute
//! force on dense grids and reports the agreement.

use std::f64::consts::PI;

use crate::domain::{BoxDomain, CurvatureBox, FunctionModel, LipschitzBox, Point, SquareMatrix};
use crate::estimation::{sample_points, EstimationConfig};

#[derive(Debug, Clone)]
pub struct KnownMinimum {
    pub value: f64,
    pub point: Point,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub model: FunctionModel,
    pub bx: BoxDomain,
    pub kappa_oracle: LipschitzBox,
    pub m_oracle: CurvatureBox,
    pub known_min: Option<KnownMinimum>,
}

impl CorpusEntry {
    /// Gradient varies over the box.
    pub fn has_varying_gradient(&self) -> bool {
        self.kappa_oracle.lo() != self.kappa_oracle.hi()
    }

    /// Hessian varies over the box.
    pub fn has_varying_hessian(&self) -> bool {
        self.m_oracle.lo() != self.m_oracle.hi()
    }

    /// Oracle constants widened by `margin * (1 + |v|)` and flagged strict.
    pub fn strict_oracles(&self, margin: f64) -> (LipschitzBox, CurvatureBox) {
        (
            self.kappa_oracle.inflated(margin).with_strict(true),
            self.m_oracle.inflated(margin).with_strict(true),
        )
    }

    /// Checks that the analytic derivatives stay inside the oracle intervals on a
    /// grid with `points_per_axis` points per axis (stratified above four dimensions).
    /// Returns a description of the first violation.
    pub fn self_check(&self, points_per_axis: usize, tol: f64) -> Result<(), String> {
        let cfg = EstimationConfig {
            grid_points_per_axis: points_per_axis,
            max_samples: 200_000,
            ..EstimationConfig::default()
        };
        let pts = sample_points(&self.bx, &cfg).map_err(|e| e.to_string())?;
        let n = self.model.dim();
        let k = &self.kappa_oracle;
        let m = &self.m_oracle;
        for p in &pts {
            let g = self.model.analytic_grad(p).expect("corpus gradient").map_err(|e| e.to_string())?;
            for i in 0..n {
                if g[i] < k.lo()[i] - tol || g[i] > k.hi()[i] + tol {
                    return Err(format!("{}: df/dx{} = {} at {:?} outside [{}, {}]", self.name, i + 1, g[i], p, k.lo()[i], k.hi()[i]));
                }
            }
            let h = self.model.analytic_hess(p).expect("corpus hessian").map_err(|e| e.to_string())?;
            for i in 0..n {
                for j in 0..n {
                    let v = h.get(i, j);
                    if v < m.lo().get(i, j) - tol || v > m.hi().get(i, j) + tol {
                        return Err(format!("{}: H[{i}][{j}] = {v} at {p:?} outside oracle", self.name));
                    }
                }
            }
        }
        Ok(())
    }
}

fn bx(bounds: &[(f64, f64)]) -> BoxDomain {
    BoxDomain::from_bounds(bounds).expect("corpus box")
}

fn pt(v: &[f64]) -> Point {
    Point::new(v.to_vec()).expect("corpus point")
}

fn mat(rows: &[&[f64]]) -> SquareMatrix {
    SquareMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("corpus matrix")
}

fn kappa(lo: &[f64], hi: &[f64]) -> LipschitzBox {
    LipschitzBox::new(lo.to_vec(), hi.to_vec(), false).expect("corpus kappa")
}

fn curvature(lo: SquareMatrix, hi: SquareMatrix) -> CurvatureBox {
    CurvatureBox::new(lo, hi, false).expect("corpus curvature")
}

#[allow(clippy::too_many_arguments)]
fn entry(
    name: &'static str,
    b: BoxDomain,
    f: fn(&[f64]) -> f64,
    grad: fn(&[f64]) -> Vec<f64>,
    hess: fn(&[f64]) -> SquareMatrix,
    kappa_oracle: LipschitzBox,
    m_oracle: CurvatureBox,
    known_min: Option<(f64, &[f64])>,
) -> CorpusEntry {
    CorpusEntry {
        name,
        model: FunctionModel::new(b.padded(0.1, 1e-3), f).with_grad(grad).with_hess(hess),
        bx: b,
        kappa_oracle,
        m_oracle,
        known_min: known_min.map(|(value, p)| KnownMinimum { value, point: pt(p) }),
    }
}

fn affine() -> CorpusEntry {
    entry(
        "affine",
        bx(&[(-1.0, 2.0), (-1.0, 1.0)]),
        |x| 1.5 * x[0] - 0.5 * x[1] + 0.25,
        |_| vec![1.5, -0.5],
        |_| SquareMatrix::zeros(2),
        LipschitzBox::degenerate(&[1.5, -0.5]).unwrap(),
        CurvatureBox::degenerate(&SquareMatrix::zeros(2)).unwrap(),
        Some((-1.75, &[-1.0, 1.0])),
    )
}

fn quad_shifted() -> CorpusEntry {
    // gradient 2(x - 0.3), 2(y + 0.2) over [-1, 1]^2
    entry(
        "quad_shifted",
        bx(&[(-1.0, 1.0), (-1.0, 1.0)]),
        |x| (x[0] - 0.3).powi(2) + (x[1] + 0.2).powi(2),
        |x| vec![2.0 * (x[0] - 0.3), 2.0 * (x[1] + 0.2)],
        |_| SquareMatrix::diagonal(&[2.0, 2.0]),
        kappa(&[-2.6, -1.6], &[1.4, 2.4]),
        CurvatureBox::degenerate(&SquareMatrix::diagonal(&[2.0, 2.0])).unwrap(),
        Some((0.0, &[0.3, -0.2])),
    )
}

// 1/2 x^T H x + b^T x with H = [[2, 1], [1, 3]], b = (-1, 0.5)
fn quadratic_coupled() -> CorpusEntry {
    let h = mat(&[&[2.0, 1.0], &[1.0, 3.0]]);
    entry(
        "quadratic_coupled",
        bx(&[(-1.0, 1.0), (-1.0, 1.0)]),
        |x| x[0] * x[0] + x[0] * x[1] + 1.5 * x[1] * x[1] - x[0] + 0.5 * x[1],
        |x| vec![2.0 * x[0] + x[1] - 1.0, x[0] + 3.0 * x[1] + 0.5],
        |_| SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap(),
        // gradient is affine, so its extremes sit at box corners
        kappa(&[-4.0, -3.5], &[2.0, 4.5]),
        CurvatureBox::degenerate(&h).unwrap(),
        Some((-0.45, &[0.7, -0.4])),
    )
}

fn cubic() -> CorpusEntry {
    entry(
        "cubic",
        bx(&[(-1.0, 1.0)]),
        |x| x[0].powi(3),
        |x| vec![3.0 * x[0] * x[0]],
        |x| SquareMatrix::filled(1, 6.0 * x[0]),
        kappa(&[0.0], &[3.0]),
        curvature(mat(&[&[-6.0]]), mat(&[&[6.0]])),
        Some((-1.0, &[-1.0])),
    )
}

fn quartic() -> CorpusEntry {
    entry(
        "quartic",
        bx(&[(-1.0, 1.0)]),
        |x| x[0].powi(4),
        |x| vec![4.0 * x[0].powi(3)],
        |x| SquareMatrix::filled(1, 12.0 * x[0] * x[0]),
        kappa(&[-4.0], &[4.0]),
        curvature(mat(&[&[0.0]]), mat(&[&[12.0]])),
        Some((0.0, &[0.0])),
    )
}

// sin(x) cos(y) on [0, pi]^2:
//   f_x = cos x cos y in [-1, 1], f_y = -sin x sin y in [-1, 0],
//   f_xx = f_yy = -sin x cos y in [-1, 1], f_xy = -cos x sin y in [-1, 1]
fn sin_cos() -> CorpusEntry {
    entry(
        "sin_cos",
        bx(&[(0.0, PI), (0.0, PI)]),
        |x| x[0].sin() * x[1].cos(),
        |x| vec![x[0].cos() * x[1].cos(), -x[0].sin() * x[1].sin()],
        |x| {
            let d = -x[0].sin() * x[1].cos();
            let o = -x[0].cos() * x[1].sin();
            SquareMatrix::from_rows(&[vec![d, o], vec![o, d]]).unwrap()
        },
        kappa(&[-1.0, -1.0], &[1.0, 0.0]),
        curvature(SquareMatrix::filled(2, -1.0), SquareMatrix::filled(2, 1.0)),
        Some((-1.0, &[PI / 2.0, PI])),
    )
}

// (1 - x)^2 + 100 (y - x^2)^2 on [-2, 2] x [-1, 3]:
//   f_x = 400x^3 - 400xy + 2x - 2 is linear in y; extremes at (2, -1) and (-2, -1)
//   f_y = 200(y - x^2), f_xx = 1200x^2 - 400y + 2, f_xy = -400x, f_yy = 200
fn rosenbrock() -> CorpusEntry {
    entry(
        "rosenbrock",
        bx(&[(-2.0, 2.0), (-1.0, 3.0)]),
        |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
        |x| {
            vec![
                400.0 * x[0].powi(3) - 400.0 * x[0] * x[1] + 2.0 * x[0] - 2.0,
                200.0 * (x[1] - x[0] * x[0]),
            ]
        },
        |x| {
            let xy = -400.0 * x[0];
            SquareMatrix::from_rows(&[
                vec![1200.0 * x[0] * x[0] - 400.0 * x[1] + 2.0, xy],
                vec![xy, 200.0],
            ])
            .unwrap()
        },
        kappa(&[-4006.0, -1000.0], &[4002.0, 600.0]),
        curvature(
            mat(&[&[-1198.0, -800.0], &[-800.0, 200.0]]),
            mat(&[&[5202.0, 800.0], &[800.0, 200.0]]),
        ),
        Some((0.0, &[1.0, 1.0])),
    )
}

// (4 - 2.1x^2 + x^4/3) x^2 + xy + (-4 + 4y^2) y^2 on [-2, 2] x [-1, 1]:
//   f_x = 8x - 8.4x^3 + 2x^5 + y, largest at x = 2 (12.8) so f_x in [-13.8, 13.8]
//   f_y = x - 8y + 16y^3, in [-10, 10]
//   f_xx = 8 - 25.2x^2 + 10x^4, minimized at x^2 = 1.26 (-7.876), max 67.2 at |x| = 2
//   f_yy = -8 + 48y^2 in [-8, 40], f_xy = 1
fn six_hump_camel() -> CorpusEntry {
    entry(
        "six_hump_camel",
        bx(&[(-2.0, 2.0), (-1.0, 1.0)]),
        |x| {
            let (a, b) = (x[0], x[1]);
            (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
        },
        |x| {
            let (a, b) = (x[0], x[1]);
            vec![8.0 * a - 8.4 * a.powi(3) + 2.0 * a.powi(5) + b, a - 8.0 * b + 16.0 * b.powi(3)]
        },
        |x| {
            let (a, b) = (x[0], x[1]);
            SquareMatrix::from_rows(&[
                vec![8.0 - 25.2 * a * a + 10.0 * a.powi(4), 1.0],
                vec![1.0, -8.0 + 48.0 * b * b],
            ])
            .unwrap()
        },
        kappa(&[-13.8, -10.0], &[13.8, 10.0]),
        curvature(mat(&[&[-7.876, 1.0], &[1.0, -8.0]]), mat(&[&[67.2, 1.0], &[1.0, 40.0]])),
        Some((-1.031_628_453_489_877_4, &[0.089_842_013_100_318_07, -0.712_656_403_020_739_6])),
    )
}

// sum_i sin(x_i) on [-1, 2]^5:
//   f_i = cos x_i in [cos 2, 1], H_ii = -sin x_i in [-1, sin 1], off-diagonal 0
fn sin_sum5() -> CorpusEntry {
    const N: usize = 5;
    let mut lo = SquareMatrix::zeros(N);
    let mut hi = SquareMatrix::zeros(N);
    for i in 0..N {
        lo.set(i, i, -1.0);
        hi.set(i, i, 1f64.sin());
    }
    entry(
        "sin_sum5",
        bx(&[(-1.0, 2.0); N]),
        |x| x.iter().map(|v| v.sin()).sum(),
        |x| x.iter().map(|v| v.cos()).collect(),
        |x| SquareMatrix::diagonal(&x.iter().map(|v| -v.sin()).collect::<Vec<_>>()),
        kappa(&[2f64.cos(); N], &[1.0; N]),
        curvature(lo, hi),
        Some((-5.0 * 1f64.sin(), &[-1.0; N])),
    )
}

fn softmax(x: &[f64]) -> Vec<f64> {
    let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = x.iter().map(|v| (v - top).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

// log(sum_i exp x_i) on [-1, 1]^3, with p = softmax(x):
//   f_i = p_i in [p_min, p_max] where p_max = e / (e + 2/e), p_min = (1/e) / (1/e + 2e)
//   H_ii = p_i (1 - p_i) in [p_min (1 - p_min), 1/4]  (p = 1/2 is attainable)
//   H_ij = -p_i p_j in [-(e / (2e + 1/e))^2, -e^-2 / (2/e + e)^2]
fn log_sum_exp3() -> CorpusEntry {
    const N: usize = 3;
    let e = 1f64.exp();
    let p_max = e / (e + 2.0 / e);
    let p_min = (1.0 / e) / (1.0 / e + 2.0 * e);
    let diag_lo = (p_min * (1.0 - p_min)).min(p_max * (1.0 - p_max));
    let off_lo = -(e / (2.0 * e + 1.0 / e)).powi(2);
    let off_hi = -(e.powi(-2)) / (2.0 / e + e).powi(2);
    let mut lo = SquareMatrix::filled(N, off_lo);
    let mut hi = SquareMatrix::filled(N, off_hi);
    for i in 0..N {
        lo.set(i, i, diag_lo);
        hi.set(i, i, 0.25);
    }
    entry(
        "log_sum_exp3",
        bx(&[(-1.0, 1.0); N]),
        |x| {
            let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            top + x.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
        },
        softmax,
        |x| {
            let p = softmax(x);
            let n = p.len();
            let mut h = SquareMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    h.set(i, j, if i == j { p[i] * (1.0 - p[i]) } else { -p[i] * p[j] });
                }
            }
            h
        },
        kappa(&[p_min; N], &[p_max; N]),
        curvature(lo, hi),
        Some((3f64.ln() - 1.0, &[-1.0; N])),
    )
}

/// All built-in entries, in a fixed order.
pub fn corpus_list() -> Vec<CorpusEntry> {
    let list = vec![
        affine(),
        quad_shifted(),
        quadratic_coupled(),
        cubic(),
        quartic(),
        sin_cos(),
        rosenbrock(),
        six_hump_camel(),
        sin_sum5(),
        log_sum_exp3(),
    ];
    for e in &list {
        if let Err(msg) = e.self_check(5, 1e-12) {
            panic!("corpus oracle self-check failed: {msg}");
        }
    }
    list
}

pub fn corpus_names() -> Vec<&'static str> {
    corpus_list().iter().map(|e| e.name).collect()
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus_list().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_addressable() {
        let names = corpus_names();
        assert_eq!(names.len(), 10);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(corpus_entry("rosenbrock").is_some());
        assert!(corpus_entry("nope").is_none());
    }

    #[test]
    fn affine_kappa_is_degenerate_at_coefficients() {
        let e = corpus_entry("affine").unwrap();
        assert_eq!(e.kappa_oracle.lo(), &[1.5, -0.5]);
        assert_eq!(e.kappa_oracle.lo(), e.kappa_oracle.hi());
        assert!(!e.has_varying_gradient());
    }

    #[test]
    fn coupled_quadratic_curvature_is_degenerate_at_hessian() {
        let e = corpus_entry("quadratic_coupled").unwrap();
        assert_eq!(e.m_oracle.lo().as_slice(), &[2.0, 1.0, 1.0, 3.0]);
        assert!(!e.has_varying_hessian());
    }

    #[test]
    fn known_minima_evaluate_to_their_values() {
        for e in corpus_list() {
            let km = e.known_min.as_ref().unwrap();
            let v = e.model.eval(km.point.coords()).unwrap();
            assert!((v - km.value).abs() < 1e-9, "{}: {v} vs {}", e.name, km.value);
            assert!(e.bx.contains(km.point.coords()));
        }
    }
}
