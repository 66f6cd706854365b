//! The two-dimensional hyperbolic cone of total angle `α` and the volume and
//! angle bookkeeping of branched covers.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Tolerance for deciding that sectors close up to a smooth point.
pub const SMOOTH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeChart {
    alpha: f64,
}

impl ConeChart {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("cone angle must be positive and finite, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// A point at distance `r` from the apex and angle `theta`, reduced mod `α`.
    pub fn point(&self, r: f64, theta: f64) -> Result<ConePoint> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be nonnegative, got {r}")));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("angle must be finite, got {theta}")));
        }
        let mut theta = if r == 0.0 { 0.0 } else { theta.rem_euclid(self.alpha) };
        if theta >= self.alpha {
            theta = 0.0;
        }
        Ok(ConePoint { r, theta })
    }

    pub fn apex(&self) -> ConePoint {
        ConePoint { r: 0.0, theta: 0.0 }
    }

    /// Smallest angle between two directions, measured around the cone.
    pub fn angular_gap(&self, a: f64, b: f64) -> f64 {
        let g = (a - b).rem_euclid(self.alpha);
        g.min(self.alpha - g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePoint {
    pub r: f64,
    pub theta: f64,
}

/// Geodesic distance on the cone. Points seen under an angle of at most `π`
/// are joined by a hyperbolic segment; otherwise the shortest path runs
/// through the apex.
pub fn cone_distance(chart: &ConeChart, p: &ConePoint, q: &ConePoint) -> f64 {
    let gap = chart.angular_gap(p.theta, q.theta);
    if gap > PI {
        return p.r + q.r;
    }
    // sinh²(d/2) = sinh²((r_p - r_q)/2) + sinh r_p sinh r_q sin²(gap/2)
    let a = ((p.r - q.r) / 2.0).sinh();
    let b = (gap / 2.0).sin();
    let s = (a * a + p.r.sinh() * q.r.sinh() * b * b).sqrt();
    2.0 * s.asinh()
}

pub fn circle_length(chart: &ConeChart, radius: f64) -> f64 {
    chart.alpha * radius.sinh()
}

pub fn disk_area(chart: &ConeChart, radius: f64) -> f64 {
    // cosh R - 1 = 2 sinh²(R/2)
    let h = (radius / 2.0).sinh();
    chart.alpha * 2.0 * h * h
}

/// Volume of a `d`-fold cover of a base of volume `base_volume`.
pub fn cone_volume(base_volume: f64, d: u64) -> Result<f64> {
    if !(base_volume.is_finite() && base_volume > 0.0) {
        return Err(Error::InvalidParameter(format!("volume must be positive, got {base_volume}")));
    }
    if d == 0 {
        return Err(Error::InvalidDegree(0));
    }
    Ok(d as f64 * base_volume)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSum {
    pub total: f64,
    /// The sectors close up with total angle `2π`.
    pub smooth: bool,
}

/// Total angle of sectors given as `(count, angle)` pairs. Counts may be
/// fractional, as in `d/2` copies for odd `d`.
pub fn sector_angle_sum(schedule: &[(f64, f64)]) -> Result<AngleSum> {
    let mut total = 0.0;
    for &(count, angle) in schedule {
        if !(count.is_finite() && count > 0.0 && angle.is_finite() && angle > 0.0) {
            return Err(Error::InvalidParameter(format!("sector ({count}, {angle}) needs positive count and angle")));
        }
        total += count * angle;
    }
    Ok(AngleSum { total, smooth: (total - TAU).abs() <= SMOOTH_TOL })
}

/// The schedule of half the sectors of two covers of degrees `d1` and `d2`,
/// each sector of angle `2π / d`.
pub fn half_sector_schedule(d1: u64, d2: u64) -> Vec<(f64, f64)> {
    [d1, d2].iter().map(|&d| (d as f64 / 2.0, TAU / d as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let c = ConeChart::new(4.0 * PI).unwrap();
        let p = c.point(1.0, 0.0).unwrap();
        let q = c.point(1.0, PI / 2.0).unwrap();
        assert_eq!(cone_distance(&c, &p, &p), 0.0);
        assert!((cone_distance(&c, &c.apex(), &q) - 1.0).abs() < 1e-15);
        assert!((cone_distance(&c, &p, &q) - 1.513_374_006_596_504).abs() < 1e-14);
        // 3π apart on a 4π cone: through the apex
        let far = c.point(1.0, 3.0 * PI).unwrap();
        assert!((cone_distance(&c, &p, &far) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn continuous_at_half_turn() {
        let c = ConeChart::new(6.0 * PI).unwrap();
        let p = c.point(0.7, 0.0).unwrap();
        let below = cone_distance(&c, &p, &c.point(1.3, PI - 1e-9).unwrap());
        let above = cone_distance(&c, &p, &c.point(1.3, PI + 1e-9).unwrap());
        assert!((below - above).abs() < 1e-8);
        assert!((above - 2.0).abs() < 1e-15);
    }

    #[test]
    fn small_distances_keep_precision() {
        let c = ConeChart::new(TAU).unwrap();
        let far = 5.0 + 1e-10;
        let d = cone_distance(&c, &c.point(5.0, 0.0).unwrap(), &c.point(far, 0.0).unwrap());
        assert!((d - (far - 5.0)).abs() < 1e-22);
    }

    #[test]
    fn angles_reduce_mod_alpha() {
        let c = ConeChart::new(PI).unwrap();
        assert!((c.point(1.0, 3.5 * PI).unwrap().theta - 0.5 * PI).abs() < 1e-14);
        assert_eq!(c.point(1.0, -PI).unwrap().theta, 0.0);
        assert_eq!(c.point(0.0, 2.0).unwrap(), c.apex());
        assert!(ConeChart::new(0.0).is_err());
        assert!(c.point(-1.0, 0.0).is_err());
    }

    #[test]
    fn lengths_and_areas() {
        let c = ConeChart::new(4.0 * PI).unwrap();
        assert!((circle_length(&c, 1.0) - 14.768_013_745_765_29).abs() < 1e-12);
        let smooth = ConeChart::new(TAU).unwrap();
        assert!((disk_area(&smooth, 2.0) - TAU * (2f64.cosh() - 1.0)).abs() < 1e-12);
        assert_eq!((circle_length(&c, 0.0), disk_area(&c, 0.0)), (0.0, 0.0));
        let ratio = disk_area(&c, 30.0) / circle_length(&c, 30.0);
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn volumes() {
        assert_eq!(cone_volume(1.0, 5).unwrap(), 5.0);
        assert_eq!(cone_volume(2.5, 1).unwrap(), 2.5);
        assert!((cone_volume(2.029883, 3).unwrap() - 6.089649).abs() < 1e-12);
        assert!(cone_volume(1.0, 0).is_err());
    }

    #[test]
    fn angle_sums() {
        let s = sector_angle_sum(&half_sector_schedule(4, 6)).unwrap();
        assert!(s.smooth && (s.total - TAU).abs() < 1e-15);
        assert!(sector_angle_sum(&[(1.0, TAU)]).unwrap().smooth);
        let s = sector_angle_sum(&[(3.0, PI / 2.0)]).unwrap();
        assert!(!s.smooth && (s.total - 1.5 * PI).abs() < 1e-15);
        assert!(sector_angle_sum(&[(0.0, 1.0)]).is_err());
    }
}
