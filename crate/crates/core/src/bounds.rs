//! Bound kernel: lower and upper bounds on `f(b) - f(a)`.
//!
//! Every function here is pure. The piecewise forms take, per coordinate (or per
//! coordinate pair), the smaller or larger of the two products of the step with the
//! interval endpoints. Since the derivative at the mean-value point lies between the
//! endpoints, the product lies between the two candidate products regardless of the
//! sign of the step, so no sign case split is needed.
//!
//! The "local" variants are the same functions fed with constants that are only
//! valid on the segment itself; [`Locality`] records which kind was supplied.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{check_dim, CurvatureBox, LipschitzBox, Segment, SquareMatrix};
use crate::error::{Error, Result};

/// Inputs larger than this in magnitude are rejected so products stay finite.
pub const MAX_MAGNITUDE: f64 = 1e150;

fn check_magnitude<'a>(what: &'static str, values: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    for v in values {
        if !v.is_finite() {
            return Err(Error::NonFinite(what));
        }
        if v.abs() > MAX_MAGNITUDE {
            return Err(Error::OutOfRange {
                what,
                limit: MAX_MAGNITUDE,
            });
        }
    }
    Ok(())
}

fn step(seg: &Segment) -> Result<Vec<f64>> {
    check_magnitude("segment", seg.a().coords().iter().chain(seg.b().coords()))?;
    Ok(seg.direction())
}

fn check_nonnegative(index: impl Fn() -> String, v: f64) -> Result<()> {
    if v < 0.0 {
        Err(Error::NegativeConstant { index: index(), value: v })
    } else {
        Ok(())
    }
}

#[inline]
fn lower_product(lo: f64, hi: f64, t: f64) -> f64 {
    (lo * t).min(hi * t)
}

#[inline]
fn upper_product(lo: f64, hi: f64, t: f64) -> f64 {
    (lo * t).max(hi * t)
}

fn linear_sum(seg: &Segment, k: &LipschitzBox, pick: fn(f64, f64, f64) -> f64) -> Result<f64> {
    check_dim(seg.dim(), k.dim())?;
    let d = step(seg)?;
    check_magnitude("lipschitz constants", k.lo().iter().chain(k.hi()))?;
    Ok(d
        .iter()
        .enumerate()
        .map(|(i, &di)| pick(k.lo()[i], k.hi()[i], di))
        .sum())
}

/// `sum_i min(lo_i d_i, hi_i d_i)` with `d = b - a`.
pub fn linear_lower(seg: &Segment, k: &LipschitzBox) -> Result<f64> {
    linear_sum(seg, k, lower_product)
}

/// `sum_i max(lo_i d_i, hi_i d_i)` with `d = b - a`.
pub fn linear_upper(seg: &Segment, k: &LipschitzBox) -> Result<f64> {
    linear_sum(seg, k, upper_product)
}

fn gradient_term(d: &[f64], grad_a: &[f64]) -> Result<f64> {
    check_dim(d.len(), grad_a.len())?;
    check_magnitude("gradient", grad_a)?;
    Ok(grad_a.iter().zip(d).map(|(g, di)| g * di).sum())
}

fn quadratic_sum(
    seg: &Segment,
    grad_a: &[f64],
    m: &CurvatureBox,
    pick: fn(f64, f64, f64) -> f64,
) -> Result<f64> {
    check_dim(seg.dim(), m.dim())?;
    let d = step(seg)?;
    let linear = gradient_term(&d, grad_a)?;
    check_magnitude(
        "curvature constants",
        m.lo().as_slice().iter().chain(m.hi().as_slice()),
    )?;
    let n = d.len();
    let mut curvature = 0.0;
    for i in 0..n {
        for j in 0..n {
            curvature += pick(m.lo().get(i, j), m.hi().get(i, j), d[i] * d[j]);
        }
    }
    Ok(linear + 0.5 * curvature)
}

/// `grad_a^T d + 1/2 sum_ij min(lo_ij d_i d_j, hi_ij d_i d_j)`.
pub fn quadratic_lower(seg: &Segment, grad_a: &[f64], m: &CurvatureBox) -> Result<f64> {
    quadratic_sum(seg, grad_a, m, lower_product)
}

/// `grad_a^T d + 1/2 sum_ij max(lo_ij d_i d_j, hi_ij d_i d_j)`.
pub fn quadratic_upper(seg: &Segment, grad_a: &[f64], m: &CurvatureBox) -> Result<f64> {
    quadratic_sum(seg, grad_a, m, upper_product)
}

fn symmetric_linear_radius(seg: &Segment, k: &[f64]) -> Result<f64> {
    check_dim(seg.dim(), k.len())?;
    let d = step(seg)?;
    check_magnitude("lipschitz constants", k)?;
    for (i, &v) in k.iter().enumerate() {
        check_nonnegative(|| i.to_string(), v)?;
    }
    Ok(k.iter().zip(&d).map(|(ki, di)| ki * di.abs()).sum())
}

/// `-sum_i k_i |d_i|`.
pub fn symmetric_linear_lower(seg: &Segment, k: &[f64]) -> Result<f64> {
    Ok(-symmetric_linear_radius(seg, k)?)
}

/// `sum_i k_i |d_i|`.
pub fn symmetric_linear_upper(seg: &Segment, k: &[f64]) -> Result<f64> {
    symmetric_linear_radius(seg, k)
}

fn check_symmetric_constants(m: &SquareMatrix) -> Result<()> {
    check_magnitude("curvature constants", m.as_slice())?;
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            check_nonnegative(|| format!("({i},{j})"), m.get(i, j))?;
        }
    }
    m.check_symmetric()
}

fn symmetric_quadratic_parts(seg: &Segment, grad_a: &[f64], m: &SquareMatrix) -> Result<(f64, f64)> {
    check_dim(seg.dim(), m.dim())?;
    let d = step(seg)?;
    let linear = gradient_term(&d, grad_a)?;
    check_symmetric_constants(m)?;
    let n = d.len();
    let mut radius = 0.0;
    for i in 0..n {
        for j in 0..n {
            radius += m.get(i, j) * (d[i] * d[j]).abs();
        }
    }
    Ok((linear, 0.5 * radius))
}

/// `grad_a^T d - 1/2 sum_ij m_ij |d_i d_j|`.
pub fn symmetric_quadratic_lower(seg: &Segment, grad_a: &[f64], m: &SquareMatrix) -> Result<f64> {
    let (linear, radius) = symmetric_quadratic_parts(seg, grad_a, m)?;
    Ok(linear - radius)
}

/// `grad_a^T d + 1/2 sum_ij m_ij |d_i d_j|`.
pub fn symmetric_quadratic_upper(seg: &Segment, grad_a: &[f64], m: &SquareMatrix) -> Result<f64> {
    let (linear, radius) = symmetric_quadratic_parts(seg, grad_a, m)?;
    Ok(linear + radius)
}

/// Scalar constant for the 1-norm bounds: `max_i k_i`.
pub fn kappa_norm(k: &[f64]) -> Result<f64> {
    if k.is_empty() {
        return Err(Error::EmptyPoint);
    }
    check_magnitude("lipschitz constants", k)?;
    for (i, &v) in k.iter().enumerate() {
        check_nonnegative(|| i.to_string(), v)?;
    }
    Ok(k.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Scalar constant for the 2-norm bounds: the largest row sum `max_i sum_j m_ij`.
pub fn m_norm(m: &SquareMatrix) -> Result<f64> {
    if m.dim() == 0 {
        return Err(Error::EmptyPoint);
    }
    check_symmetric_constants(m)?;
    Ok((0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.get(i, j)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max))
}

fn check_scalar_constant(v: f64) -> Result<()> {
    check_magnitude("norm constant", [&v])?;
    check_nonnegative(String::new, v)
}

fn l1_radius(seg: &Segment, kappa: f64) -> Result<f64> {
    check_scalar_constant(kappa)?;
    let d = step(seg)?;
    Ok(kappa * d.iter().map(|v| v.abs()).sum::<f64>())
}

/// `-kappa ||d||_1`.
pub fn norm_linear_lower(seg: &Segment, kappa: f64) -> Result<f64> {
    Ok(-l1_radius(seg, kappa)?)
}

/// `kappa ||d||_1`.
pub fn norm_linear_upper(seg: &Segment, kappa: f64) -> Result<f64> {
    l1_radius(seg, kappa)
}

fn norm_quadratic_parts(seg: &Segment, grad_a: &[f64], big_m: f64) -> Result<(f64, f64)> {
    check_scalar_constant(big_m)?;
    let d = step(seg)?;
    let linear = gradient_term(&d, grad_a)?;
    Ok((linear, 0.5 * big_m * d.iter().map(|v| v * v).sum::<f64>()))
}

/// `grad_a^T d - 1/2 M ||d||_2^2`.
pub fn norm_quadratic_lower(seg: &Segment, grad_a: &[f64], big_m: f64) -> Result<f64> {
    let (linear, radius) = norm_quadratic_parts(seg, grad_a, big_m)?;
    Ok(linear - radius)
}

/// `grad_a^T d + 1/2 M ||d||_2^2`.
pub fn norm_quadratic_upper(seg: &Segment, grad_a: &[f64], big_m: f64) -> Result<f64> {
    let (linear, radius) = norm_quadratic_parts(seg, grad_a, big_m)?;
    Ok(linear + radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    General,
    Symmetric,
    Norm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Locality {
    Global,
    SegmentLocal,
}

impl Locality {
    pub fn as_str(self) -> &'static str {
        match self {
            Locality::Global => "global",
            Locality::SegmentLocal => "segment_local",
        }
    }
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Names one of the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundVariant {
    pub order: Order,
    pub form: Form,
    pub side: Side,
    pub locality: Locality,
}

impl BoundVariant {
    pub const fn new(order: Order, form: Form, side: Side, locality: Locality) -> Self {
        BoundVariant {
            order,
            form,
            side,
            locality,
        }
    }

    /// The twelve formulas for one locality, in a fixed order.
    pub fn all(locality: Locality) -> Vec<BoundVariant> {
        let mut out = Vec::with_capacity(12);
        for order in [Order::Linear, Order::Quadratic] {
            for form in [Form::General, Form::Symmetric, Form::Norm] {
                for side in [Side::Lower, Side::Upper] {
                    out.push(BoundVariant::new(order, form, side, locality));
                }
            }
        }
        out
    }

    /// Identifier without the locality tag, e.g. `quadratic_norm_upper`.
    pub fn id(&self) -> String {
        let order = match self.order {
            Order::Linear => "linear",
            Order::Quadratic => "quadratic",
        };
        let form = match self.form {
            Form::General => "general",
            Form::Symmetric => "symmetric",
            Form::Norm => "norm",
        };
        let side = match self.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        format!("{order}_{form}_{side}")
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundVariant::all(Locality::Global)
            .into_iter()
            .find(|v| v.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown bound variant '{s}'")))
    }
}

/// Constants and gradient needed to evaluate every variant on one segment.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs<'a> {
    pub kappa: &'a LipschitzBox,
    pub curvature: &'a CurvatureBox,
    pub grad_a: &'a [f64],
    pub locality: Locality,
}

/// Evaluates all twelve variants. The symmetric and norm forms use the smallest
/// symmetric constants that cover the general intervals.
pub fn evaluate_all(seg: &Segment, inputs: &BoundInputs<'_>) -> Result<Vec<(BoundVariant, f64)>> {
    let k_sym = inputs.kappa.symmetric_view();
    let m_sym = inputs.curvature.symmetric_view();
    let kappa = kappa_norm(&k_sym)?;
    let big_m = m_norm(&m_sym)?;
    let g = inputs.grad_a;
    BoundVariant::all(inputs.locality)
        .into_iter()
        .map(|v| {
            let value = match (v.order, v.form, v.side) {
                (Order::Linear, Form::General, Side::Lower) => linear_lower(seg, inputs.kappa),
                (Order::Linear, Form::General, Side::Upper) => linear_upper(seg, inputs.kappa),
                (Order::Linear, Form::Symmetric, Side::Lower) => symmetric_linear_lower(seg, &k_sym),
                (Order::Linear, Form::Symmetric, Side::Upper) => symmetric_linear_upper(seg, &k_sym),
                (Order::Linear, Form::Norm, Side::Lower) => norm_linear_lower(seg, kappa),
                (Order::Linear, Form::Norm, Side::Upper) => norm_linear_upper(seg, kappa),
                (Order::Quadratic, Form::General, Side::Lower) => {
                    quadratic_lower(seg, g, inputs.curvature)
                }
                (Order::Quadratic, Form::General, Side::Upper) => {
                    quadratic_upper(seg, g, inputs.curvature)
                }
                (Order::Quadratic, Form::Symmetric, Side::Lower) => {
                    symmetric_quadratic_lower(seg, g, &m_sym)
                }
                (Order::Quadratic, Form::Symmetric, Side::Upper) => {
                    symmetric_quadratic_upper(seg, g, &m_sym)
                }
                (Order::Quadratic, Form::Norm, Side::Lower) => norm_quadratic_lower(seg, g, big_m),
                (Order::Quadratic, Form::Norm, Side::Upper) => norm_quadratic_upper(seg, g, big_m),
            }?;
            Ok((v, value))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: &[f64], b: &[f64]) -> Segment {
        Segment::from_coords(a, b).unwrap()
    }

    fn kbox(lo: &[f64], hi: &[f64]) -> LipschitzBox {
        LipschitzBox::new(lo.to_vec(), hi.to_vec(), false).unwrap()
    }

    fn mbox(lo: f64, hi: f64, n: usize) -> CurvatureBox {
        CurvatureBox::new(SquareMatrix::filled(n, lo), SquareMatrix::filled(n, hi), false).unwrap()
    }

    #[test]
    fn linear_bounds_vanish_on_degenerate_segment() {
        let s = seg(&[0.3, -1.0], &[0.3, -1.0]);
        let k = kbox(&[-5.0, 1.0], &[2.0, 7.0]);
        assert_eq!(linear_lower(&s, &k).unwrap(), 0.0);
        assert_eq!(linear_upper(&s, &k).unwrap(), 0.0);
    }

    #[test]
    fn linear_bounds_one_dimensional_example() {
        let s = seg(&[0.0], &[1.0]);
        let k = kbox(&[-2.0], &[2.0]);
        assert_eq!(linear_lower(&s, &k).unwrap(), -2.0);
        assert_eq!(linear_upper(&s, &k).unwrap(), 2.0);
        // f(x) = x^2 changes by 1 on [0, 1].
        let delta = 1.0;
        assert!(linear_lower(&s, &k).unwrap() <= delta && delta <= linear_upper(&s, &k).unwrap());
    }

    #[test]
    fn linear_lower_two_dimensional_example() {
        let s = seg(&[0.0, 0.0], &[1.0, -1.0]);
        let k = kbox(&[1.0, -1.0], &[3.0, 2.0]);
        let value = linear_lower(&s, &k).unwrap();
        assert_eq!(value, -1.0);
        // Brute force: minimize g1 - g2 over the constant rectangle.
        let mut best = f64::INFINITY;
        for a in 0..=100 {
            for b in 0..=100 {
                let g1 = 1.0 + 2.0 * a as f64 / 100.0;
                let g2 = -1.0 + 3.0 * b as f64 / 100.0;
                best = best.min(g1 - g2);
            }
        }
        assert!((best - value).abs() < 1e-12);
    }

    #[test]
    fn piecewise_form_matches_sign_case_analysis() {
        // Reproduces the two explicit sign cases for each coordinate.
        let cases = [(-2.0, 3.0, 0.7), (-2.0, 3.0, -0.7), (1.0, 4.0, -2.0), (-4.0, -1.0, 2.5), (0.0, 0.0, 1.0)];
        for (lo, hi, d) in cases {
            let (expected_lo, expected_hi) = if d >= 0.0 { (lo * d, hi * d) } else { (hi * d, lo * d) };
            let s = seg(&[0.0], &[d]);
            let k = kbox(&[lo], &[hi]);
            assert_eq!(linear_lower(&s, &k).unwrap(), expected_lo);
            assert_eq!(linear_upper(&s, &k).unwrap(), expected_hi);
        }
    }

    #[test]
    fn quadratic_is_exact_for_square() {
        let s = seg(&[0.0], &[1.0]);
        let m = mbox(2.0, 2.0, 1);
        assert_eq!(quadratic_lower(&s, &[0.0], &m).unwrap(), 1.0);
        assert_eq!(quadratic_upper(&s, &[0.0], &m).unwrap(), 1.0);
    }

    #[test]
    fn quadratic_lower_two_dimensional_example() {
        let s = seg(&[0.0, 0.0], &[1.0, 1.0]);
        let m = mbox(-1.0, 1.0, 2);
        let value = quadratic_lower(&s, &[1.0, 0.0], &m).unwrap();
        assert_eq!(value, -1.0);
        // Brute force over Hessians with entries in {-1, 1} (the extremes of a linear objective).
        let mut best = f64::INFINITY;
        for mask in 0..16u32 {
            let h: Vec<f64> = (0..4).map(|b| if mask >> b & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let q = h.iter().sum::<f64>();
            best = best.min(1.0 + 0.5 * q);
        }
        assert_eq!(best, value);
    }

    #[test]
    fn degenerate_curvature_closes_the_gap() {
        let h = SquareMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 0.5]]).unwrap();
        let m = CurvatureBox::degenerate(&h).unwrap();
        let s = seg(&[0.2, 0.1], &[-0.4, 0.9]);
        let g = [0.3, -0.2];
        let lo = quadratic_lower(&s, &g, &m).unwrap();
        let hi = quadratic_upper(&s, &g, &m).unwrap();
        assert_eq!(lo, hi);
    }

    #[test]
    fn symmetric_examples() {
        let s = seg(&[0.0], &[1.0]);
        assert_eq!(symmetric_linear_lower(&s, &[2.0]).unwrap(), -2.0);
        assert_eq!(symmetric_linear_upper(&s, &[2.0]).unwrap(), 2.0);
        let k = kbox(&[-2.0], &[2.0]);
        assert_eq!(linear_lower(&s, &k).unwrap(), symmetric_linear_lower(&s, &[2.0]).unwrap());

        let s2 = seg(&[0.0, 0.0], &[-1.0, 3.0]);
        assert_eq!(symmetric_linear_lower(&s2, &[1.0, 2.0]).unwrap(), -7.0);

        let m = SquareMatrix::from_rows(&[vec![2.0]]).unwrap();
        assert_eq!(symmetric_quadratic_lower(&s, &[0.0], &m).unwrap(), -1.0);
        assert_eq!(symmetric_quadratic_upper(&s, &[0.0], &m).unwrap(), 1.0);
    }

    #[test]
    fn symmetric_rejects_negative_or_asymmetric_constants() {
        let s = seg(&[0.0, 0.0], &[1.0, 1.0]);
        assert!(matches!(
            symmetric_linear_lower(&s, &[1.0, -0.5]),
            Err(Error::NegativeConstant { .. })
        ));
        let neg = SquareMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert!(symmetric_quadratic_lower(&s, &[0.0, 0.0], &neg).is_err());
        let asym = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            symmetric_quadratic_upper(&s, &[0.0, 0.0], &asym),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn norm_constants() {
        assert_eq!(kappa_norm(&[2.0]).unwrap(), 2.0);
        assert_eq!(kappa_norm(&[1.0, 3.0, 2.0]).unwrap(), 3.0);
        assert_eq!(kappa_norm(&[0.7; 4]).unwrap(), 0.7);
        assert!(kappa_norm(&[]).is_err());
        assert!(kappa_norm(&[1.0, -1.0]).is_err());

        assert_eq!(m_norm(&SquareMatrix::from_rows(&[vec![2.0]]).unwrap()).unwrap(), 2.0);
        let m = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert_eq!(m_norm(&m).unwrap(), 3.0);
        assert_eq!(m_norm(&SquareMatrix::diagonal(&[4.0, 9.0])).unwrap(), 9.0);
    }

    #[test]
    fn norm_bound_examples() {
        let s = seg(&[0.0, 0.0], &[1.0, -1.0]);
        assert_eq!(norm_linear_lower(&s, 3.0).unwrap(), -6.0);
        assert_eq!(norm_linear_upper(&s, 3.0).unwrap(), 6.0);
        let s1 = seg(&[0.0], &[1.0]);
        assert_eq!(norm_quadratic_lower(&s1, &[0.0], 2.0).unwrap(), -1.0);
        assert_eq!(norm_quadratic_upper(&s1, &[0.0], 2.0).unwrap(), 1.0);
        let z = seg(&[1.0, 2.0], &[1.0, 2.0]);
        assert_eq!(norm_linear_lower(&z, 5.0).unwrap(), 0.0);
        assert_eq!(norm_quadratic_upper(&z, &[3.0, 4.0], 5.0).unwrap(), 0.0);
        assert!(norm_linear_lower(&s, -1.0).is_err());
    }

    #[test]
    fn cubic_local_constants_tighten_upper_bound() {
        let s = seg(&[0.0], &[0.5]);
        let global = kbox(&[0.0], &[3.0]);
        let local = kbox(&[0.0], &[0.75]);
        assert_eq!(linear_upper(&s, &global).unwrap(), 1.5);
        assert_eq!(linear_upper(&s, &local).unwrap(), 0.375);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = seg(&[0.0, 0.0], &[1.0, 1.0]);
        let k = kbox(&[0.0], &[1.0]);
        assert!(matches!(linear_lower(&s, &k), Err(Error::DimensionMismatch { .. })));
        let m = mbox(0.0, 1.0, 2);
        assert!(quadratic_upper(&s, &[0.0], &m).is_err());
    }

    #[test]
    fn huge_inputs_are_rejected() {
        let s = seg(&[0.0], &[2e150]);
        let k = kbox(&[0.0], &[1.0]);
        assert!(matches!(linear_lower(&s, &k), Err(Error::OutOfRange { .. })));
        let k2 = kbox(&[0.0], &[1e151]);
        assert!(linear_upper(&seg(&[0.0], &[1.0]), &k2).is_err());
    }

    #[test]
    fn variant_ids_round_trip() {
        let all = BoundVariant::all(Locality::Global);
        assert_eq!(all.len(), 12);
        for v in &all {
            assert_eq!(&v.id().parse::<BoundVariant>().unwrap(), v);
        }
        assert_eq!(all[0].id(), "linear_general_lower");
        assert_eq!(all[11].id(), "quadratic_norm_upper");
    }

    #[test]
    fn evaluate_all_orders_variants() {
        let s = seg(&[0.0], &[1.0]);
        let k = kbox(&[-2.0], &[2.0]);
        let m = mbox(2.0, 2.0, 1);
        let inputs = BoundInputs {
            kappa: &k,
            curvature: &m,
            grad_a: &[0.0],
            locality: Locality::Global,
        };
        let values = evaluate_all(&s, &inputs).unwrap();
        let got: Vec<f64> = values.iter().map(|(_, v)| *v).collect();
        assert_eq!(got, vec![-2.0, 2.0, -2.0, 2.0, -2.0, 2.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0]);
    }
}
