//! Shared domain types: points, boxes, segments, derivative-bound containers
//! and function models.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite point in `R^n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point"));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// Axis-aligned box `[lower_i, upper_i]`; the compact set the constants are valid on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Point,
    upper: Point,
}

impl BoxDomain {
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        for i in 0..lower.dim() {
            if lower[i] > upper[i] {
                return Err(Error::InvertedInterval {
                    index: i.to_string(),
                    lo: lower[i],
                    hi: upper[i],
                });
            }
        }
        Ok(BoxDomain { lower, upper })
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        let lower = Point::new(bounds.iter().map(|b| b.0).collect())?;
        let upper = Point::new(bounds.iter().map(|b| b.1).collect())?;
        BoxDomain::new(lower, upper)
    }

    /// The degenerate box `{p}`.
    pub fn singleton(p: &Point) -> Self {
        BoxDomain {
            lower: p.clone(),
            upper: p.clone(),
        }
    }

    /// Smallest box containing both segment endpoints.
    pub fn hull(a: &Point, b: &Point) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        let bounds: Vec<_> = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(&x, &y)| (x.min(y), x.max(y)))
            .collect();
        BoxDomain::from_bounds(&bounds)
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn center(&self) -> Point {
        Point(
            self.lower
                .coords()
                .iter()
                .zip(self.upper.coords())
                .map(|(l, u)| 0.5 * (l + u))
                .collect(),
        )
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p
                .iter()
                .enumerate()
                .all(|(i, &x)| self.lower[i] <= x && x <= self.upper[i])
    }

    pub fn contains_box(&self, other: &BoxDomain) -> bool {
        self.contains(other.lower.coords()) && self.contains(other.upper.coords())
    }

    /// Grows every side by `fraction * width + absolute`.
    pub fn padded(&self, fraction: f64, absolute: f64) -> BoxDomain {
        let (lo, hi): (Vec<f64>, Vec<f64>) = (0..self.dim())
            .map(|i| {
                let pad = fraction * self.width(i) + absolute;
                (self.lower[i] - pad, self.upper[i] + pad)
            })
            .unzip();
        BoxDomain {
            lower: Point(lo),
            upper: Point(hi),
        }
    }

    /// Index of the widest axis; ties go to the lowest index.
    pub fn longest_axis(&self) -> usize {
        let mut best = 0;
        for i in 1..self.dim() {
            if self.width(i) > self.width(best) {
                best = i;
            }
        }
        best
    }

    /// Splits at the midpoint of `axis`.
    pub fn bisect(&self, axis: usize) -> (BoxDomain, BoxDomain) {
        let mid = 0.5 * (self.lower[axis] + self.upper[axis]);
        let mut left_upper = self.upper.clone();
        left_upper.0[axis] = mid;
        let mut right_lower = self.lower.clone();
        right_lower.0[axis] = mid;
        (
            BoxDomain {
                lower: self.lower.clone(),
                upper: left_upper,
            },
            BoxDomain {
                lower: right_lower,
                upper: self.upper.clone(),
            },
        )
    }

    /// Maps `u in [0,1]^n` onto the box.
    pub fn lerp(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(i, &t)| self.lower[i] + t * self.width(i))
            .collect()
    }
}

/// Ordered pair `(a, b)` with the line parameterization `x(g) = a + g (b - a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        Ok(Segment { a, b })
    }

    pub fn from_coords(a: &[f64], b: &[f64]) -> Result<Self> {
        Segment::new(Point::new(a.to_vec())?, Point::new(b.to_vec())?)
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `b - a`.
    pub fn direction(&self) -> Vec<f64> {
        self.a
            .coords()
            .iter()
            .zip(self.b.coords())
            .map(|(x, y)| y - x)
            .collect()
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn point_at(&self, gamma: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("gamma = {gamma} outside [0, 1]")));
        }
        // The endpoints are returned verbatim so that x(0) = a and x(1) = b hold exactly.
        if gamma == 0.0 {
            return Ok(self.a.clone());
        }
        if gamma == 1.0 {
            return Ok(self.b.clone());
        }
        Ok(Point(
            self.a
                .coords()
                .iter()
                .zip(self.b.coords())
                .map(|(x, y)| x + gamma * (y - x))
                .collect(),
        ))
    }
}

/// Dense row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn filled(n: usize, value: f64) -> Self {
        SquareMatrix {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(n * n, data.len())?;
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            check_dim(n, r.len())?;
            data.extend_from_slice(r);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = SquareMatrix::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.first_asymmetry(tol).is_none()
    }

    fn first_asymmetry(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub(crate) fn check_symmetric(&self) -> Result<()> {
        match self.first_asymmetry(0.0) {
            Some((i, j)) => Err(Error::Asymmetric { i, j }),
            None => Ok(()),
        }
    }

    /// `v^T A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.get(i, j) * v[i] * v[j];
            }
        }
        acc
    }
}

/// Two-sided bounds `lo_i <= df/dx_i <= hi_i` over a region.
///
/// `strict` records that the true partials stay strictly inside the intervals,
/// which is what licenses strict final inequalities for `a != b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
    strict: bool,
}

impl LipschitzBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, strict: bool) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if lo.is_empty() {
            return Err(Error::EmptyPoint);
        }
        for (i, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !l.is_finite() || !h.is_finite() {
                return Err(Error::NonFinite("lipschitz constants"));
            }
            if l > h {
                return Err(Error::InvertedInterval {
                    index: i.to_string(),
                    lo: l,
                    hi: h,
                });
            }
        }
        Ok(LipschitzBox { lo, hi, strict })
    }

    /// Intervals `(-k_i, k_i)`.
    pub fn symmetric(k: &[f64], strict: bool) -> Result<Self> {
        LipschitzBox::new(k.iter().map(|v| -v).collect(), k.to_vec(), strict)
    }

    /// Every interval collapsed to `c_i`.
    pub fn degenerate(c: &[f64]) -> Result<Self> {
        LipschitzBox::new(c.to_vec(), c.to_vec(), false)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    /// Smallest symmetric constants `k_i` with `(lo_i, hi_i) ⊆ (-k_i, k_i)`.
    pub fn symmetric_view(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| l.abs().max(h.abs()))
            .collect()
    }

    /// Widens each endpoint by `margin * (1 + |endpoint|)`.
    pub fn inflated(&self, margin: f64) -> LipschitzBox {
        LipschitzBox {
            lo: self.lo.iter().map(|&l| l - margin * (1.0 + l.abs())).collect(),
            hi: self.hi.iter().map(|&h| h + margin * (1.0 + h.abs())).collect(),
            strict: self.strict,
        }
    }

    /// True when every interval of `self` lies inside the matching interval of `other`.
    pub fn is_within(&self, other: &LipschitzBox, tol: f64) -> bool {
        self.dim() == other.dim()
            && (0..self.dim())
                .all(|i| self.lo[i] >= other.lo[i] - tol && self.hi[i] <= other.hi[i] + tol)
    }
}

/// Two-sided bounds on the Hessian entries, symmetric in `(i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBox {
    lo: SquareMatrix,
    hi: SquareMatrix,
    strict: bool,
}

impl CurvatureBox {
    pub fn new(lo: SquareMatrix, hi: SquareMatrix, strict: bool) -> Result<Self> {
        check_dim(lo.dim(), hi.dim())?;
        if lo.dim() == 0 {
            return Err(Error::EmptyPoint);
        }
        let n = lo.dim();
        for i in 0..n {
            for j in 0..n {
                let (l, h) = (lo.get(i, j), hi.get(i, j));
                if !l.is_finite() || !h.is_finite() {
                    return Err(Error::NonFinite("curvature constants"));
                }
                if l > h {
                    return Err(Error::InvertedInterval {
                        index: format!("({i},{j})"),
                        lo: l,
                        hi: h,
                    });
                }
            }
        }
        lo.check_symmetric()?;
        hi.check_symmetric()?;
        Ok(CurvatureBox { lo, hi, strict })
    }

    /// Intervals `(-m_ij, m_ij)`.
    pub fn symmetric(m: &SquareMatrix, strict: bool) -> Result<Self> {
        CurvatureBox::new(m.map(|v| -v), m.clone(), strict)
    }

    /// Every interval collapsed to `h_ij`.
    pub fn degenerate(h: &SquareMatrix) -> Result<Self> {
        CurvatureBox::new(h.clone(), h.clone(), false)
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &SquareMatrix {
        &self.lo
    }

    pub fn hi(&self) -> &SquareMatrix {
        &self.hi
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    /// Smallest symmetric constants `m_ij` with `(lo_ij, hi_ij) ⊆ (-m_ij, m_ij)`.
    pub fn symmetric_view(&self) -> SquareMatrix {
        let n = self.dim();
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.lo.get(i, j).abs().max(self.hi.get(i, j).abs()));
            }
        }
        m
    }

    pub fn inflated(&self, margin: f64) -> CurvatureBox {
        CurvatureBox {
            lo: self.lo.map(|l| l - margin * (1.0 + l.abs())),
            hi: self.hi.map(|h| h + margin * (1.0 + h.abs())),
            strict: self.strict,
        }
    }

    pub fn is_within(&self, other: &CurvatureBox, tol: f64) -> bool {
        let n = self.dim();
        n == other.dim()
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    self.lo.get(i, j) >= other.lo.get(i, j) - tol
                        && self.hi.get(i, j) <= other.hi.get(i, j) + tol
                })
            })
    }
}

pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// Returns the Hessian in row-major order.
pub type HessFn = Arc<dyn Fn(&[f64]) -> SquareMatrix + Send + Sync>;

/// A `C^2` function on an open set containing `domain`, with optional analytic derivatives.
#[derive(Clone)]
pub struct FunctionModel {
    dim: usize,
    eval: EvalFn,
    grad: Option<GradFn>,
    hess: Option<HessFn>,
    domain: BoxDomain,
}

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel")
            .field("dim", &self.dim)
            .field("grad", &self.grad.is_some())
            .field("hess", &self.hess.is_some())
            .field("domain", &self.domain)
            .finish()
    }
}

impl FunctionModel {
    pub fn new(
        domain: BoxDomain,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionModel {
            dim: domain.dim(),
            eval: Arc::new(eval),
            grad: None,
            hess: None,
            domain,
        }
    }

    pub fn with_grad(mut self, grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_hess(
        mut self,
        hess: impl Fn(&[f64]) -> SquareMatrix + Send + Sync + 'static,
    ) -> Self {
        self.hess = Some(Arc::new(hess));
        self
    }

    /// Replaces the declared domain; the dimension must not change.
    pub fn with_domain(mut self, domain: BoxDomain) -> Result<Self> {
        check_dim(self.dim, domain.dim())?;
        self.domain = domain;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn has_grad(&self) -> bool {
        self.grad.is_some()
    }

    pub fn has_hess(&self) -> bool {
        self.hess.is_some()
    }

    /// Evaluates `f`, rejecting non-finite results.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let v = (self.eval)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { point: x.to_vec() })
        }
    }

    pub fn analytic_grad(&self, x: &[f64]) -> Option<Result<Vec<f64>>> {
        let g = self.grad.as_ref()?;
        Some(check_dim(self.dim, x.len()).and_then(|_| {
            let v = g(x);
            check_dim(self.dim, v.len())?;
            if v.iter().all(|c| c.is_finite()) {
                Ok(v)
            } else {
                Err(Error::Evaluation { point: x.to_vec() })
            }
        }))
    }

    pub fn analytic_hess(&self, x: &[f64]) -> Option<Result<SquareMatrix>> {
        let h = self.hess.as_ref()?;
        Some(check_dim(self.dim, x.len()).and_then(|_| {
            let m = h(x);
            check_dim(self.dim, m.dim())?;
            if m.as_slice().iter().all(|c| c.is_finite()) {
                Ok(m)
            } else {
                Err(Error::Evaluation { point: x.to_vec() })
            }
        }))
    }
}
