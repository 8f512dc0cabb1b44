//! Sampling checks of the polytope results behind the resilience shortcut.
//!
//! All sets are zonotopes `{G u : ‖u‖∞ ≤ 1}`, so every support-type query
//! is one LP over the generator coefficients. The `check_*` functions are
//! numerical certificates on sampled directions, not proofs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::DEFAULT_FEAS_TOL;
use crate::matrix::{norm2, Matrix};
use crate::reach::{max_gain, plane_directions, Gain};

/// Default number of sampled directions (0.5° resolution).
pub const DEFAULT_DIRECTIONS: usize = 720;
/// Slack allowed by the maximum checks.
pub const CHECK_SLACK: f64 = 1e-6;
/// Slack allowed by the vertex-minimum check.
pub const VERTEX_SLACK: f64 = 1e-7;
/// Cap on the number of grid points in [`check_vertex_minimum`].
pub const GRID_CAP: usize = 100_000;

const INTERIOR_MARGIN: f64 = 1e-9;

/// `{G u : ‖u‖∞ ≤ 1}`, symmetric about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonotopePolytope {
    generator: Matrix,
}

impl ZonotopePolytope {
    pub fn new(generator: Matrix) -> Result<Self> {
        if generator.rows() == 0 || generator.cols() == 0 {
            return Err(Error::Validation { field: "generator", reason: "need n ≥ 1 and k ≥ 1".into() });
        }
        Ok(Self { generator })
    }

    /// Axis-aligned box `[-1, 1]^n`.
    pub fn unit_box(n: usize) -> Self {
        Self { generator: Matrix::identity(n) }
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { generator: self.generator.scaled(s) }
    }

    /// Images of all `2^k` sign patterns; every vertex is among them.
    pub fn sign_images(&self) -> Vec<Vec<f64>> {
        let k = self.generator.cols();
        (0..1u64 << k)
            .map(|code| {
                let u: Vec<f64> = (0..k).map(|i| if code >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
                self.generator.mul_vec(&u)
            })
            .collect()
    }

    /// Minkowski gauge: the least `t ≥ 0` with `x ∈ t·Y`. `∞` when `x` is
    /// outside the span of the generators.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        let norm = norm2(x);
        if norm == 0.0 {
            return Ok(0.0);
        }
        let dir: Vec<f64> = x.iter().map(|v| v / norm).collect();
        let reach = directed_support_unchecked(self, &vec![0.0; x.len()], &dir)?;
        Ok(match reach {
            Some(h) if h > 0.0 => norm / h,
            _ => f64::INFINITY,
        })
    }

    /// True when `x` lies in the interior, with a relative margin.
    pub fn contains_interior(&self, x: &[f64]) -> Result<bool> {
        if self.generator.rank(crate::matrix::DEFAULT_RANK_TOL) < self.dim() {
            return Ok(false);
        }
        Ok(self.gauge(x)? < 1.0 - INTERIOR_MARGIN)
    }
}

/// The segment `[−x, x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub x: Vec<f64>,
}

impl Segment {
    pub fn new(x: Vec<f64>) -> Self {
        Self { x }
    }

    pub fn minus_x(&self) -> Vec<f64> {
        self.x.iter().map(|v| -v).collect()
    }

    fn as_zonotope(&self) -> Matrix {
        Matrix::from_columns(self.x.len(), &[self.x.as_slice()]).expect("finite segment")
    }
}

fn check_dims(y: &ZonotopePolytope, v: &[f64], field: &'static str) -> Result<()> {
    if v.len() != y.dim() {
        return Err(Error::Validation { field, reason: format!("expected length {}, got {}", y.dim(), v.len()) });
    }
    Ok(())
}

fn check_unit(d: &[f64]) -> Result<()> {
    if (norm2(d) - 1.0).abs() > 1e-9 {
        return Err(Error::Validation { field: "d", reason: format!("direction must be unit norm, got {}", norm2(d)) });
    }
    Ok(())
}

fn directed_support_unchecked(y: &ZonotopePolytope, x: &[f64], d: &[f64]) -> Result<Option<f64>> {
    let offset: Vec<f64> = x.iter().map(|v| -v).collect();
    Ok(match max_gain(&y.generator, 1.0, d, &offset, 0.0, DEFAULT_FEAS_TOL)? {
        Gain::Value { value, .. } => Some(value.max(0.0)),
        Gain::Infeasible => None,
        Gain::Unbounded => return Err(Error::NumericalFailure("support LP over a bounded set is unbounded".into())),
    })
}

/// `max { λ ≥ 0 : λ d − x ∈ Y }`: how far along `d` the shifted set
/// `x + Y` reaches from the origin.
pub fn directed_support(y: &ZonotopePolytope, x: &[f64], d: &[f64]) -> Result<f64> {
    check_dims(y, x, "x")?;
    check_dims(y, d, "d")?;
    check_unit(d)?;
    directed_support_unchecked(y, x, d)?.ok_or(Error::EmptyIntersection)
}

/// Ratio of the supports of `x + Y` and `−x + Y` along `d`.
pub fn ratio_r_y(y: &ZonotopePolytope, x: &[f64], d: &[f64]) -> Result<f64> {
    check_dims(y, x, "x")?;
    if !y.contains_interior(x)? {
        return Err(Error::NotInterior);
    }
    let minus: Vec<f64> = x.iter().map(|v| -v).collect();
    Ok(directed_support(y, x, d)? / directed_support(y, &minus, d)?)
}

/// Joint support of `X + Y` along `d` divided by the worst single-shift
/// support, which sits at an endpoint of the segment.
pub fn ratio_r_xy(x: &Segment, y: &ZonotopePolytope, d: &[f64]) -> Result<f64> {
    check_dims(y, &x.x, "x")?;
    if !y.contains_interior(&x.x)? {
        return Err(Error::NotInterior);
    }
    let joint = ZonotopePolytope { generator: y.generator.hstack(&x.as_zonotope()) };
    let numerator = directed_support(&joint, &vec![0.0; y.dim()], d)?;
    let denominator = directed_support(y, &x.x, d)?.min(directed_support(y, &x.minus_x(), d)?);
    Ok(numerator / denominator)
}

/// [`ratio_r_xy`] recomputed by brute force over `grid` evenly spaced
/// points of the segment. Returns `(grid_ratio, exact_ratio)`.
pub fn ratio_r_xy_grid_check(x: &Segment, y: &ZonotopePolytope, d: &[f64], grid: usize) -> Result<(f64, f64)> {
    let exact = ratio_r_xy(x, y, d)?;
    let grid = grid.max(2);
    let supports = (0..grid)
        .map(|k| {
            let t = -1.0 + 2.0 * k as f64 / (grid - 1) as f64;
            let p: Vec<f64> = x.x.iter().map(|v| t * v).collect();
            directed_support(y, &p, d)
        })
        .collect::<Result<Vec<_>>>()?;
    let max = supports.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = supports.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((max / min, exact))
}

/// Distance from `x` to the boundary of `Y` along `+d`.
fn forward_reach(y: &ZonotopePolytope, x: &[f64], d: &[f64]) -> Result<f64> {
    let minus: Vec<f64> = x.iter().map(|v| -v).collect();
    directed_support(y, &minus, d)
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexMinimumCheck {
    pub grid_min: f64,
    pub vertex_min: f64,
    pub pass: bool,
}

/// With `X ⊆ Y`, the distance from `x ∈ X` to `∂Y` along `d` is smallest
/// at a vertex of `X`. Compares the vertex minimum against a grid of `X`.
pub fn check_vertex_minimum(
    x_set: &ZonotopePolytope,
    y: &ZonotopePolytope,
    d: &[f64],
    grid: usize,
) -> Result<VertexMinimumCheck> {
    check_dims(y, d, "d")?;
    check_unit(d)?;
    if x_set.dim() != y.dim() {
        return Err(Error::Validation { field: "X", reason: "dimension differs from Y".into() });
    }
    if grid < 10 {
        return Err(Error::Validation { field: "grid", reason: format!("need at least 10 points, got {grid}") });
    }
    let vertices = x_set.sign_images();
    for v in &vertices {
        if y.gauge(v)? > 1.0 + 1e-9 {
            return Err(Error::ContainmentViolation);
        }
    }
    let vertex_min = vertices
        .iter()
        .map(|v| forward_reach(y, v, d))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);

    let k = x_set.generator.cols();
    let mut per_axis = grid;
    while per_axis > 2 && per_axis.checked_pow(k as u32).map_or(true, |t| t > GRID_CAP) {
        per_axis -= 1;
    }
    let total = per_axis.pow(k as u32);
    let grid_min = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let u: Vec<f64> = (0..k)
                .map(|_| {
                    let t = idx % per_axis;
                    idx /= per_axis;
                    -1.0 + 2.0 * t as f64 / (per_axis - 1) as f64
                })
                .collect();
            forward_reach(y, &x_set.generator.mul_vec(&u), d)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);

    Ok(VertexMinimumCheck { grid_min, vertex_min, pass: grid_min >= vertex_min - VERTEX_SLACK })
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionMaximumCheck {
    pub max_over_dirs: f64,
    pub value_at_x: f64,
    pub value_at_minus_x: f64,
    pub pass: bool,
}

/// Orthonormal basis of a plane through `x`. For `x = 0` the first two
/// coordinate axes are used; otherwise the second vector comes from the
/// coordinate axis least aligned with `x`.
fn plane_through(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let axis = |i: usize| -> Vec<f64> { (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect() };
    let norm = norm2(x);
    if norm == 0.0 {
        return (axis(0), axis(1 % n));
    }
    let e1: Vec<f64> = x.iter().map(|v| v / norm).collect();
    let least = (0..n)
        .min_by(|&a, &b| e1[a].abs().total_cmp(&e1[b].abs()))
        .unwrap_or(0);
    let mut e2 = axis(least);
    let proj = e1[least];
    for (v, u) in e2.iter_mut().zip(&e1) {
        *v -= proj * u;
    }
    let n2 = norm2(&e2);
    (e1, e2.into_iter().map(|v| v / n2).collect())
}

fn sweep_max<F>(x: &[f64], n_dirs: usize, f: F) -> Result<(f64, f64, f64)>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let (e1, e2) = plane_through(x);
    // Sample 0 is +x̂ and, for even counts, sample n/2 is −x̂.
    let values = plane_directions(&e1, &e2, n_dirs)
        .into_par_iter()
        .map(|(_, d)| f(&d))
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let minus_e1: Vec<f64> = e1.iter().map(|v| -v).collect();
    Ok((max, f(&e1)?, f(&minus_e1)?))
}

/// Over directions in a plane through `x`, the ratio `r_Y(d, x)` peaks at
/// `d = ±x/‖x‖`.
pub fn check_collinear_maximum(y: &ZonotopePolytope, x: &[f64], n_dirs: usize) -> Result<DirectionMaximumCheck> {
    check_dims(y, x, "x")?;
    if !y.contains_interior(x)? {
        return Err(Error::NotInterior);
    }
    if norm2(x) == 0.0 {
        return Ok(DirectionMaximumCheck { max_over_dirs: 1.0, value_at_x: 1.0, value_at_minus_x: 1.0, pass: true });
    }
    let (max_over_dirs, value_at_x, value_at_minus_x) = sweep_max(x, n_dirs, |d| ratio_r_y(y, x, d))?;
    let pass = max_over_dirs <= value_at_x.max(value_at_minus_x) + CHECK_SLACK;
    Ok(DirectionMaximumCheck { max_over_dirs, value_at_x, value_at_minus_x, pass })
}

/// Over directions in a plane containing the segment, `r_{X,Y}(d)` peaks
/// along the segment.
pub fn check_segment_maximum(x: &Segment, y: &ZonotopePolytope, n_dirs: usize) -> Result<DirectionMaximumCheck> {
    check_dims(y, &x.x, "x")?;
    if !y.contains_interior(&x.x)? {
        return Err(Error::NotInterior);
    }
    if norm2(&x.x) == 0.0 {
        return Ok(DirectionMaximumCheck { max_over_dirs: 1.0, value_at_x: 1.0, value_at_minus_x: 1.0, pass: true });
    }
    let (max_over_dirs, value_at_x, value_at_minus_x) = sweep_max(&x.x, n_dirs, |d| ratio_r_xy(x, y, d))?;
    let pass = max_over_dirs <= value_at_x + CHECK_SLACK;
    Ok(DirectionMaximumCheck { max_over_dirs, value_at_x, value_at_minus_x, pass })
}

/// Seeded random 2D instances for the three polytope checks.
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Full-dimensional zonotope in the plane with 2–4 generators.
    pub fn zonotope(&mut self) -> ZonotopePolytope {
        loop {
            let k = self.rng.gen_range(2..=4);
            let data: Vec<f64> = (0..2 * k).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
            let g = Matrix::new(2, k, data).expect("finite");
            // Reject nearly flat sets so interior margins stay meaningful.
            let min_width = plane_directions(&[1.0, 0.0], &[0.0, 1.0], 16)
                .iter()
                .map(|(_, d)| (0..k).map(|j| (g[(0, j)] * d[0] + g[(1, j)] * d[1]).abs()).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            if min_width > 0.2 {
                return ZonotopePolytope { generator: g };
            }
        }
    }

    pub fn unit_direction(&mut self) -> Vec<f64> {
        let a: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
        vec![a.cos(), a.sin()]
    }

    /// Random point strictly inside `y`, at gauge in `[0.1, 0.9]`.
    pub fn interior_point(&mut self, y: &ZonotopePolytope) -> Result<Vec<f64>> {
        let dir = self.unit_direction();
        let g = y.gauge(&dir)?;
        let t = self.rng.gen_range(0.1..0.9) / g;
        Ok(dir.into_iter().map(|v| v * t).collect())
    }

    /// A zonotope scaled to fit inside `y` (max vertex gauge in `[0.3, 0.9]`).
    pub fn inner_zonotope(&mut self, y: &ZonotopePolytope) -> Result<ZonotopePolytope> {
        let x = self.zonotope();
        let worst = x.sign_images().iter().map(|v| y.gauge(v)).collect::<Result<Vec<_>>>()?;
        let worst = worst.into_iter().fold(0.0, f64::max);
        Ok(x.scaled(self.rng.gen_range(0.3..0.9) / worst))
    }
}

/// Pass counts from [`verify_geometry`].
#[derive(Debug, Clone, Serialize)]
pub struct GeometrySummary {
    pub seed: u64,
    pub cases: usize,
    pub vertex_minimum_passed: usize,
    pub collinear_maximum_passed: usize,
    pub segment_maximum_passed: usize,
}

impl GeometrySummary {
    pub fn all_passed(&self) -> bool {
        self.vertex_minimum_passed == self.cases
            && self.collinear_maximum_passed == self.cases
            && self.segment_maximum_passed == self.cases
    }
}

/// Runs every polytope check on `cases` random 2D instances.
pub fn verify_geometry(seed: u64, cases: usize, n_dirs: usize) -> Result<GeometrySummary> {
    let mut gen = InstanceGenerator::new(seed);
    let mut summary = GeometrySummary {
        seed,
        cases,
        vertex_minimum_passed: 0,
        collinear_maximum_passed: 0,
        segment_maximum_passed: 0,
    };
    for _ in 0..cases {
        let y = gen.zonotope();
        let inner = gen.inner_zonotope(&y)?;
        let d = gen.unit_direction();
        if check_vertex_minimum(&inner, &y, &d, 64)?.pass {
            summary.vertex_minimum_passed += 1;
        }
        let x = gen.interior_point(&y)?;
        if check_collinear_maximum(&y, &x, n_dirs)?.pass {
            summary.collinear_maximum_passed += 1;
        }
        let s = Segment::new(gen.interior_point(&y)?);
        if check_segment_maximum(&s, &y, n_dirs)?.pass {
            summary.segment_maximum_passed += 1;
        }
    }
    Ok(summary)
}
