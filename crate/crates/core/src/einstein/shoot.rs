use std::f64::consts::TAU;

use super::{
    curvatures_with, integrate, integrate_from, sectional_curvatures, Curvatures, Status, Trajectory, WarpedState,
};
use crate::error::{Error, Result};
use crate::report::Report;

pub const BRACKET: (f64, f64) = (0.05, 5.0);
pub const DEFAULT_R_MAX: f64 = 10.0;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-6;

/// Bracket width at which bisection stops.
const WIDTH: f64 = 1e-12;
const RR_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Shot {
    pub g0: f64,
    pub trajectory: Trajectory,
    pub iterations: usize,
}

impl Shot {
    pub fn mismatch(&self) -> f64 {
        self.trajectory.terminal_mismatch()
    }

    pub fn converged(&self, tol: f64) -> bool {
        self.mismatch().abs() < tol
    }
}

fn describe(g0: f64, t: &Trajectory) -> String {
    match t.status {
        Status::Complete => format!("g0 = {g0}: f/g - 1 = {:e}", t.terminal_mismatch()),
        Status::Diverged { r } => format!("g0 = {g0}: diverged at r = {r}"),
    }
}

/// Bisection on the initial transverse warp so that `f/g = 1` at `r_max`.
/// A diverged run counts as overshooting.
pub fn shoot(n: usize, alpha: f64, tol: f64, r_max: f64, step: f64) -> Result<Shot> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let run = |g0: f64| integrate(n, alpha, g0, r_max, step);
    let (mut lo, mut hi) = BRACKET;
    let t_lo = run(lo)?;
    let t_hi = run(hi)?;
    let (m_lo, m_hi) = (t_lo.terminal_mismatch(), t_hi.terminal_mismatch());
    if m_lo == 0.0 {
        return Ok(Shot { g0: lo, trajectory: t_lo, iterations: 0 });
    }
    if m_hi == 0.0 {
        return Ok(Shot { g0: hi, trajectory: t_hi, iterations: 0 });
    }
    if (m_lo > 0.0) == (m_hi > 0.0) {
        return Err(Error::BracketFailure { low: describe(lo, &t_lo), high: describe(hi, &t_hi) });
    }
    let lo_positive = m_lo > 0.0;
    let mut iterations = 0;
    let mut best = if m_lo.abs() < m_hi.abs() { (lo, t_lo) } else { (hi, t_hi) };
    while hi - lo > WIDTH {
        let mid = 0.5 * (lo + hi);
        let t = run(mid)?;
        iterations += 1;
        let m = t.terminal_mismatch();
        if m.abs() <= best.1.terminal_mismatch().abs() {
            best = (mid, t);
        }
        if m == 0.0 {
            break;
        }
        if (m > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Shot { g0: best.0, trajectory: best.1, iterations })
}

/// The exact three-dimensional solution `f = (α/2π) sinh r`, `g = (α/2π) cosh r`.
pub fn closed_form_three(alpha: f64, r: f64) -> WarpedState {
    let a = alpha / TAU;
    WarpedState { r, f: a * r.sinh(), df: a * r.cosh(), g: a * r.cosh(), dg: a * r.sinh() }
}

/// From some sample in the first half of the run on, the sequence never
/// grows by more than `slack`.
fn eventually_nonincreasing(r: &[f64], values: &[f64], slack: f64) -> bool {
    let last_rise = values.windows(2).rposition(|w| w[1] > w[0] + slack);
    match last_rise {
        None => true,
        Some(i) => r[i + 1] <= 0.5 * r[r.len() - 1],
    }
}

/// Checks the listed properties of an Einstein cone metric on a shot
/// trajectory.
pub fn verify_einstein_properties(traj: &Trajectory, n: usize, alpha: f64) -> Report {
    let mut r = Report::new();
    r.fact("dimension", n);
    r.fact("cone angle", alpha);
    r.fact("initial transverse warp", traj.g0);
    r.check("trajectory reaches the outer radius", traj.is_complete(), describe(traj.g0, traj));
    let curv: Vec<Curvatures> = traj.samples.iter().filter_map(|s| sectional_curvatures(s, n).ok()).collect();
    if curv.len() != traj.samples.len() || curv.is_empty() {
        r.check("curvatures are defined at every sample", false, "");
        return r;
    }
    let max_k = curv.iter().flat_map(|c| c.values()).fold(f64::NEG_INFINITY, f64::max);
    r.fact("largest sectional curvature", format!("{max_k:e}"));
    r.check("sectional curvature is negative", max_k < 0.0, "");

    let first = &traj.samples[0];
    let angle = TAU * first.f / first.r;
    r.check(
        "cone angle is recovered at the cone point",
        (angle - alpha).abs() < 1e-4,
        format!("{angle} at r = {}", first.r),
    );

    let radii: Vec<f64> = traj.samples.iter().map(|s| s.r).collect();
    let ratio: Vec<f64> = traj.samples.iter().map(|s| (s.f / s.g - 1.0).abs()).collect();
    let deviation: Vec<f64> = curv.iter().map(Curvatures::deviation).collect();
    r.check(
        "metric converges to the hyperbolic one",
        eventually_nonincreasing(&radii, &ratio, 1e-9) && eventually_nonincreasing(&radii, &deviation, 1e-9),
        format!("|f/g - 1| = {:e}, |K + 1| = {:e} at r = {}", ratio[ratio.len() - 1], deviation[deviation.len() - 1], traj.last().r),
    );

    let smooth = (alpha - TAU).abs() < 1e-12;
    let below = if smooth {
        (traj.g0 - 1.0).abs() <= 1e-6
    } else {
        (traj.g0 < 1.0) == (alpha < TAU)
    };
    r.check("transverse warp at the cone point is below 1 exactly when the angle is below 2π", below, format!("{}", traj.g0));

    let rr = traj.max_rr_residual();
    r.fact("largest radial residual", format!("{rr:e}"));
    r.check("radial equation holds along the trajectory", rr < RR_TOL, "");

    let worst = deviation.iter().copied().fold(0.0, f64::max);
    r.fact("largest deviation from curvature -1", format!("{worst:e}"));
    if n == 3 {
        r.check("curvature is constant -1 in dimension 3", worst < 1e-6, "");
    } else if !smooth {
        r.check("curvature is not constant in dimension at least 4", worst > 1e-3, "");
    } else {
        r.check("smooth cone point gives the hyperbolic metric", worst < 1e-6, "");
    }
    r
}

/// Largest gap between the curvatures from the field equations and those
/// from central differences of the stored samples.
pub fn curvature_finite_difference_gap(traj: &Trajectory) -> f64 {
    let s = &traj.samples;
    let h = traj.step;
    let mut gap: f64 = 0.0;
    for i in 1..s.len().saturating_sub(1) {
        let (a, b, c) = (&s[i - 1], &s[i], &s[i + 1]);
        let fpp = (c.f - 2.0 * b.f + a.f) / (h * h);
        let gpp = (c.g - 2.0 * b.g + a.g) / (h * h);
        let fd = WarpedState { df: (c.f - a.f) / (2.0 * h), dg: (c.g - a.g) / (2.0 * h), ..*b };
        let Ok(exact) = sectional_curvatures(b, traj.n) else { return f64::INFINITY };
        let approx = curvatures_with(&fd, traj.n, fpp, gpp);
        for (x, y) in exact.values().iter().zip(approx.values()) {
            gap = gap.max((x - y).abs());
        }
    }
    gap
}

/// Terminal values for successive halvings of the step.
#[derive(Clone, Debug, PartialEq)]
pub struct Richardson {
    pub steps: [f64; 3],
    pub terminal: [(f64, f64); 3],
    /// Relative change of the terminal `(f, g)` under each halving.
    pub changes: [f64; 2],
    /// Observed convergence order `log2(changes[0] / changes[1])`.
    pub order: f64,
}

/// Runs from the series at `r_start` with steps `h`, `h/2`, `h/4`.
pub fn richardson(n: usize, alpha: f64, g0: f64, r_start: f64, r_max: f64, h: f64) -> Result<Richardson> {
    let steps = [h, h / 2.0, h / 4.0];
    let mut terminal = [(0.0, 0.0); 3];
    for (i, &step) in steps.iter().enumerate() {
        let t = integrate_from(n, alpha, g0, r_start, r_max, step)?;
        if !t.is_complete() {
            return Err(Error::InvalidParameter(describe(g0, &t)));
        }
        terminal[i] = (t.last().f, t.last().g);
    }
    let change = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0) / b.0).abs().max(((a.1 - b.1) / b.1).abs());
    let changes = [change(terminal[0], terminal[1]), change(terminal[1], terminal[2])];
    Ok(Richardson { steps, terminal, changes, order: (changes[0] / changes[1]).log2() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub alpha: f64,
    pub g0: f64,
    pub mismatch: f64,
    pub rr_residual: f64,
    pub max_curvature: f64,
    pub max_deviation: f64,
}

pub fn sweep(n: usize, alphas: &[f64], tol: f64, r_max: f64, step: f64) -> Result<Vec<SweepRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let shot = shoot(n, alpha, tol, r_max, step)?;
            let t = &shot.trajectory;
            let curv: Vec<Curvatures> = t.samples.iter().filter_map(|s| sectional_curvatures(s, n).ok()).collect();
            Ok(SweepRow {
                n,
                alpha,
                g0: shot.g0,
                mismatch: shot.mismatch(),
                rr_residual: t.max_rr_residual(),
                max_curvature: curv.iter().flat_map(|c| c.values()).fold(f64::NEG_INFINITY, f64::max),
                max_deviation: curv.iter().map(Curvatures::deviation).fold(0.0, f64::max),
            })
        })
        .collect()
}

fn num(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii output")
}

/// One row per sample; the last curvature column is empty in dimension 3.
pub fn write_trajectory_csv(traj: &Trajectory) -> String {
    let header = ["r", "f", "df", "g", "dg", "K_r_theta", "K_r_x", "K_theta_x", "K_x_y"];
    csv_text(
        &header,
        traj.samples.iter().map(|s| {
            let k = sectional_curvatures(s, traj.n).ok();
            let mut row: Vec<String> = [s.r, s.f, s.df, s.g, s.dg].into_iter().map(num).collect();
            match k {
                Some(k) => {
                    row.extend([k.r_theta, k.r_x, k.theta_x].into_iter().map(num));
                    row.push(k.xy.map(num).unwrap_or_default());
                }
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            row
        }),
    )
}

pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let header = ["n", "alpha", "g0", "mismatch", "rr_residual", "max_curvature", "max_deviation"];
    csv_text(
        &header,
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                num(r.alpha),
                num(r.g0),
                num(r.mismatch),
                num(r.rr_residual),
                num(r.max_curvature),
                num(r.max_deviation),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_angle_shoots_to_one() {
        let shot = shoot(4, TAU, DEFAULT_TOL, DEFAULT_R_MAX, 1e-2).unwrap();
        assert!((shot.g0 - 1.0).abs() < 1e-6, "{}", shot.g0);
        assert!(shot.converged(DEFAULT_TOL));
    }

    #[test]
    fn three_dimensional_shot_matches_closed_form() {
        let shot = shoot(3, PI, DEFAULT_TOL, DEFAULT_R_MAX, 1e-2).unwrap();
        assert!((shot.g0 - 0.5).abs() < 1e-6);
        let s = shot.trajectory.last();
        let c = closed_form_three(PI, s.r);
        assert!(((s.f - c.f) / c.f).abs() < 1e-6 && ((s.g - c.g) / c.g).abs() < 1e-6);
    }

    #[test]
    fn bracket_failure_reports_both_ends() {
        // a tiny outer radius leaves f/g far below 1 at both ends
        let err = shoot(3, 0.1, DEFAULT_TOL, 0.5, 1e-2).unwrap_err();
        let Error::BracketFailure { low, high } = err else { panic!("{err}") };
        assert!(low.contains("g0 = 0.05") && high.contains("g0 = 5"));
    }

    #[test]
    fn csv_has_one_row_per_sample() {
        let t = integrate(3, PI, 0.5, 1.0, 0.1).unwrap();
        let text = write_trajectory_csv(&t);
        assert_eq!(text.lines().count(), t.samples.len() + 1);
        assert!(text.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn tail_monotonicity() {
        let r = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert!(eventually_nonincreasing(&r, &[1.0, 2.0, 1.0, 0.5, 0.4], 0.0));
        assert!(!eventually_nonincreasing(&r, &[1.0, 0.5, 0.4, 0.3, 0.4], 0.0));
    }
}
