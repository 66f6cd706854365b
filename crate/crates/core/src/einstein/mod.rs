//! Einstein metrics `dr² + f(r)² dθ² + g(r)² h` with a cone singularity of
//! angle `α` along `r = 0`, where `h` is hyperbolic of dimension `n - 2`,
//! normalized to `Ric = -(n - 1)`.
//!
//! The two angular Einstein equations are integrated as a second-order
//! system; the radial one is a first-order constraint that exact solutions
//! preserve and that is monitored rather than imposed.

mod shoot;

pub use shoot::{
    closed_form_three, curvature_finite_difference_gap, richardson, shoot, sweep, verify_einstein_properties,
    write_sweep_csv, write_trajectory_csv, Richardson, Shot, SweepRow, BRACKET, DEFAULT_R_MAX, DEFAULT_STEP,
    DEFAULT_TOL,
};

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Radius at which the power series hands over to the integrator.
pub const R_MIN: f64 = 1e-3;

/// Number of odd terms of `f` and even terms of `g` kept in the series.
const SERIES_TERMS: usize = 10;

/// Warps beyond this size count as blow-up.
const OVERFLOW: f64 = 1e150;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpedState {
    pub r: f64,
    pub f: f64,
    pub df: f64,
    pub g: f64,
    pub dg: f64,
}

/// Sectional curvatures of the coordinate planes. `xy` is the curvature of
/// a plane tangent to the hyperbolic factor and only exists for `n >= 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvatures {
    pub r_theta: f64,
    pub r_x: f64,
    pub theta_x: f64,
    pub xy: Option<f64>,
}

impl Curvatures {
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.r_theta, self.r_x, self.theta_x];
        v.extend(self.xy);
        v
    }

    /// Largest deviation from constant curvature `-1`.
    pub fn deviation(&self) -> f64 {
        self.values().iter().map(|k| (k + 1.0).abs()).fold(0.0, f64::max)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 3, got {n}")));
    }
    Ok(())
}

fn check_warps(s: &WarpedState) -> Result<()> {
    if !(s.f > 0.0 && s.g > 0.0 && s.f.is_finite() && s.g.is_finite()) {
        return Err(Error::NonpositiveWarp { r: s.r, f: s.f, g: s.g });
    }
    Ok(())
}

/// `(f'', g'')` from the angular Einstein equations
/// `f''/f + (n-2) f'g'/(fg) = n-1` and
/// `g''/g + f'g'/(fg) + (n-3)(1 + g'²)/g² = n-1`.
pub fn einstein_rhs(s: &WarpedState, n: usize) -> Result<(f64, f64)> {
    check_dim(n)?;
    check_warps(s)?;
    let m = (n - 1) as f64;
    let mixed = s.df * s.dg / (s.f * s.g);
    let fpp = s.f * (m - (n - 2) as f64 * mixed);
    let gpp = s.g * (m - mixed - (n - 3) as f64 * (1.0 + s.dg * s.dg) / (s.g * s.g));
    Ok((fpp, gpp))
}

/// Curvatures with second derivatives taken from the field equations.
pub fn sectional_curvatures(s: &WarpedState, n: usize) -> Result<Curvatures> {
    let (fpp, gpp) = einstein_rhs(s, n)?;
    Ok(curvatures_with(s, n, fpp, gpp))
}

/// Curvatures for given second derivatives.
pub fn curvatures_with(s: &WarpedState, n: usize, fpp: f64, gpp: f64) -> Curvatures {
    Curvatures {
        r_theta: -fpp / s.f,
        r_x: -gpp / s.g,
        theta_x: -s.df * s.dg / (s.f * s.g),
        xy: (n >= 4).then(|| -(1.0 + s.dg * s.dg) / (s.g * s.g)),
    }
}

/// Residual of the radial equation `f''/f + (n-2) g''/g = n-1` for given
/// second derivatives.
pub fn rr_residual_with(s: &WarpedState, n: usize, fpp: f64, gpp: f64) -> f64 {
    fpp / s.f + (n - 2) as f64 * gpp / s.g - (n - 1) as f64
}

/// Radial residual along the flow of [`einstein_rhs`].
pub fn rr_residual(s: &WarpedState, n: usize) -> Result<f64> {
    let (fpp, gpp) = einstein_rhs(s, n)?;
    Ok(rr_residual_with(s, n, fpp, gpp))
}

/// Power series of the solution regular at the cone point:
/// `f = (α/2π) Σ f_k r^k` over odd `k` with `f_1 = 1`, `g = Σ g_k r^k` over
/// even `k` with `g_0` free. Lower coefficients fix the higher ones order by
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub scale: f64,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

/// Coefficient of `r^k` in the product of the given polynomials.
fn product_coeff(factors: &[&[f64]], k: usize) -> f64 {
    fn go(factors: &[&[f64]], k: usize) -> f64 {
        match factors {
            [] => f64::from(k == 0),
            [p, rest @ ..] => (0..=k.min(p.len().saturating_sub(1))).map(|i| p[i] * go(rest, k - i)).sum(),
        }
    }
    go(factors, k)
}

impl Series {
    pub fn new(n: usize, alpha: f64, g0: f64) -> Result<Self> {
        check_dim(n)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("cone angle must be positive, got {alpha}")));
        }
        if !(g0 > 0.0 && g0.is_finite()) {
            return Err(Error::InvalidParameter(format!("initial warp must be positive, got {g0}")));
        }
        let len = 2 * SERIES_TERMS + 2;
        let (m, nf) = ((n - 1) as f64, n as f64);
        let mut f = vec![0.0; len];
        let mut g = vec![0.0; len];
        f[1] = 1.0;
        g[0] = g0;
        for k in 0..SERIES_TERMS {
            let order = 2 * k + 1;
            let (df, dg) = (derivative(&f), derivative(&g));
            let (ddf, ddg) = (derivative(&df), derivative(&dg));
            let dg2: Vec<f64> = (0..len).map(|i| product_coeff(&[&dg, &dg], i)).collect();
            let mut one_dg2 = dg2;
            one_dg2[0] += 1.0;
            // equations multiplied through by f g and f g², unknowns set to zero
            let e1 = product_coeff(&[&ddf, &g], order) + (nf - 2.0) * product_coeff(&[&df, &dg], order)
                - m * product_coeff(&[&f, &g], order);
            let e2 = product_coeff(&[&ddg, &f, &g], order)
                + product_coeff(&[&df, &dg, &g], order)
                + (nf - 3.0) * product_coeff(&[&one_dg2, &f], order)
                - m * product_coeff(&[&f, &g, &g], order);
            let j = 2 * k + 2;
            let gj = -e2 / (g0 * (j * j) as f64);
            let fj = -(e1 + (nf - 2.0) * j as f64 * gj) / ((j * (j + 1)) as f64 * g0);
            g[j] = gj;
            f[j + 1] = fj;
        }
        Ok(Self { scale: alpha / TAU, f, g })
    }

    pub fn state(&self, r: f64) -> WarpedState {
        let eval = |p: &[f64]| p.iter().rev().fold(0.0, |acc, c| acc * r + c);
        WarpedState {
            r,
            f: self.scale * eval(&self.f),
            df: self.scale * eval(&derivative(&self.f)),
            g: eval(&self.g),
            dg: eval(&derivative(&self.g)),
        }
    }

    /// `g''(0)`.
    pub fn g_second(&self) -> f64 {
        2.0 * self.g[2]
    }

    /// `f'''(0)`.
    pub fn f_third(&self) -> f64 {
        6.0 * self.scale * self.f[3]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Status {
    Complete,
    /// A warp reached zero or blew up at this radius.
    Diverged { r: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub alpha: f64,
    pub g0: f64,
    pub step: f64,
    pub samples: Vec<WarpedState>,
    pub status: Status,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    pub fn last(&self) -> &WarpedState {
        self.samples.last().expect("trajectory has a start sample")
    }

    /// `f/g - 1` at the end, `+∞` when the run diverged.
    pub fn terminal_mismatch(&self) -> f64 {
        match self.status {
            Status::Complete => self.last().f / self.last().g - 1.0,
            Status::Diverged { .. } => f64::INFINITY,
        }
    }

    /// Largest radial residual over the samples.
    pub fn max_rr_residual(&self) -> f64 {
        self.samples.iter().filter_map(|s| rr_residual(s, self.n).ok()).map(f64::abs).fold(0.0, f64::max)
    }
}

fn rk4_step(s: &WarpedState, n: usize, h: f64) -> Result<WarpedState> {
    let field = |s: &WarpedState| -> Result<[f64; 4]> {
        let (fpp, gpp) = einstein_rhs(s, n)?;
        Ok([s.df, fpp, s.dg, gpp])
    };
    let shift = |s: &WarpedState, k: &[f64; 4], t: f64| WarpedState {
        r: s.r + t,
        f: s.f + t * k[0],
        df: s.df + t * k[1],
        g: s.g + t * k[2],
        dg: s.dg + t * k[3],
    };
    let k1 = field(s)?;
    let k2 = field(&shift(s, &k1, h / 2.0))?;
    let k3 = field(&shift(s, &k2, h / 2.0))?;
    let k4 = field(&shift(s, &k3, h))?;
    let c = |i: usize| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    Ok(WarpedState { r: s.r + h, f: s.f + h * c(0), df: s.df + h * c(1), g: s.g + h * c(2), dg: s.dg + h * c(3) })
}

/// Integrates from the series value at `R_MIN` to `r_max` with fixed-step RK4.
pub fn integrate(n: usize, alpha: f64, g0: f64, r_max: f64, step: f64) -> Result<Trajectory> {
    integrate_from(n, alpha, g0, R_MIN, r_max, step)
}

/// As [`integrate`], handing over from the series at `r_start`.
pub fn integrate_from(n: usize, alpha: f64, g0: f64, r_start: f64, r_max: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    if !(r_start > 0.0 && r_max > r_start && r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 < r_start < r_max, got {r_start}, {r_max}")));
    }
    let series = Series::new(n, alpha, g0)?;
    let steps = ((r_max - r_start) / step + 1e-9).floor().max(1.0) as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut state = series.state(r_start);
    samples.push(state);
    let mut status = Status::Complete;
    for i in 1..=steps {
        let next = rk4_step(&state, n, step).ok().filter(|s| {
            [s.f, s.df, s.g, s.dg].iter().all(|v| v.is_finite() && v.abs() < OVERFLOW) && s.f > 0.0 && s.g > 0.0
        });
        match next {
            Some(mut s) => {
                s.r = r_start + i as f64 * step;
                samples.push(s);
                state = s;
            }
            None => {
                status = Status::Diverged { r: state.r };
                break;
            }
        }
    }
    Ok(Trajectory { n, alpha, g0, step, samples, status })
}
