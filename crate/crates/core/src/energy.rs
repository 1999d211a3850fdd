//! Power model for a vehicle moving at constant speed through a uniformly
//! moving medium, trajectory integration, and the affine identity linking
//! expended energy to elapsed time and eastward displacement.
//!
//! With dissipative force magnitude `phi(v0)` the power drawn at heading
//! `theta` (measured from the medium's direction, east) is
//! `p0 + p1 * cos(theta)` where `p0 = phi * v0` and `p1 = phi * vw`.
//! Substituting `cos(theta) = (x' - vw) / v0` shows that, for any
//! trajectory,
//!
//! ```text
//! energy = (p0 - p1 * vw / v0) * T + (p1 / v0) * (x_end - x_start)
//! ```
//!
//! so minimizing time minimizes energy once the endpoints are fixed.

use std::f64::consts::PI;

use thiserror::Error;

use crate::rng::Stream;

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("agent speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
    #[error("medium speed {vw} must satisfy 0 <= vw < v0 = {v0}")]
    MediumTooFast { v0: f64, vw: f64 },
    #[error("drag parameter `{0}` must be strictly positive")]
    DragParameter(&'static str),
    #[error("heading profile needs at least two breakpoints")]
    EmptyProfile,
    #[error("heading profile times must start at 0 and strictly increase")]
    BadBreakpoints,
    #[error("time step {dt} must be positive and at most duration/10 ({limit})")]
    BadStep { dt: f64, limit: f64 },
}

/// Source of the dissipative force magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DragParams {
    /// Quadratic aerodynamic drag `0.5 * rho * cd * af * v0^2`.
    Aerodynamic { rho: f64, cd: f64, af: f64 },
    /// Rolling resistance `mass * g * fr`, independent of speed.
    Rolling { mass: f64, g: f64, fr: f64 },
    /// Force affine in the vehicle mass, `intercept + slope * mass`.
    Affine { intercept: f64, slope: f64, mass: f64 },
}

impl DragParams {
    fn validate(&self) -> Result<(), EnergyError> {
        let check = |v: f64, name: &'static str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(EnergyError::DragParameter(name))
            }
        };
        match *self {
            DragParams::Aerodynamic { rho, cd, af } => {
                check(rho, "rho")?;
                check(cd, "cd")?;
                check(af, "af")
            }
            DragParams::Rolling { mass, g, fr } => {
                check(mass, "mass")?;
                check(g, "g")?;
                check(fr, "fr")
            }
            DragParams::Affine {
                intercept,
                slope,
                mass,
            } => {
                check(mass, "mass")?;
                check(intercept + slope * mass, "intercept + slope * mass")
            }
        }
    }

    /// Force magnitude at relative speed `v0`.
    pub fn force(&self, v0: f64) -> f64 {
        match *self {
            DragParams::Aerodynamic { rho, cd, af } => 0.5 * rho * cd * af * v0 * v0,
            DragParams::Rolling { mass, g, fr } => mass * g * fr,
            DragParams::Affine {
                intercept,
                slope,
                mass,
            } => intercept + slope * mass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub v0: f64,
    pub vw: f64,
    pub phi: f64,
    pub p0: f64,
    pub p1: f64,
}

pub fn build_power_model(drag: DragParams, v0: f64, vw: f64) -> Result<PowerModel, EnergyError> {
    if !(v0 > 0.0 && v0.is_finite()) {
        return Err(EnergyError::NonPositiveSpeed(v0));
    }
    if !(vw >= 0.0 && vw < v0) {
        return Err(EnergyError::MediumTooFast { v0, vw });
    }
    drag.validate()?;
    let phi = drag.force(v0);
    Ok(PowerModel {
        v0,
        vw,
        phi,
        p0: phi * v0,
        p1: phi * vw,
    })
}

pub fn instantaneous_power(model: &PowerModel, theta: f64) -> f64 {
    model.p0 + model.p1 * theta.cos()
}

/// Energy to carry `mass` over `distance` in a still medium.
pub fn edge_energy(alpha: f64, mass: f64, distance: f64) -> f64 {
    alpha * mass * distance
}

/// Piecewise-linear heading over `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadingProfile {
    samples: Vec<(f64, f64)>,
}

impl HeadingProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, EnergyError> {
        if samples.len() < 2 {
            return Err(EnergyError::EmptyProfile);
        }
        if samples[0].0 != 0.0 || samples.iter().any(|s| !s.0.is_finite() || !s.1.is_finite()) {
            return Err(EnergyError::BadBreakpoints);
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(EnergyError::BadBreakpoints);
        }
        Ok(Self { samples })
    }

    pub fn constant(theta: f64, duration: f64) -> Result<Self, EnergyError> {
        Self::new(vec![(0.0, theta), (duration, theta)])
    }

    /// `breakpoints` headings drawn uniformly from `[-pi, pi)` at uniformly
    /// drawn interior times.
    pub fn random(stream: &mut Stream, breakpoints: usize, duration: f64) -> Self {
        let n = breakpoints.max(2);
        let mut times: Vec<f64> = (0..n - 2).map(|_| stream.range(0.0, duration)).collect();
        times.push(0.0);
        times.push(duration);
        times.sort_by(f64::total_cmp);
        times.dedup();
        let samples = times
            .into_iter()
            .map(|t| (t, stream.range(-PI, PI)))
            .collect();
        Self { samples }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn duration(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn heading_at(&self, t: f64) -> f64 {
        let s = &self.samples;
        let idx = s.partition_point(|p| p.0 <= t);
        if idx == 0 {
            return s[0].1;
        }
        if idx == s.len() {
            return s[s.len() - 1].1;
        }
        let (t0, h0) = s[idx - 1];
        let (t1, h1) = s[idx];
        h0 + (h1 - h0) * (t - t0) / (t1 - t0)
    }
}

/// Position and heading. Heading is carried through integration but no
/// terminal heading is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KinematicState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    pub end: KinematicState,
    pub elapsed: f64,
    pub energy: f64,
}

/// Integrates position and energy with the composite midpoint rule
/// (second order) at step `dt`; the final step is shortened to land on the
/// profile's duration.
pub fn simulate(
    model: &PowerModel,
    profile: &HeadingProfile,
    start: KinematicState,
    dt: f64,
) -> Result<Trajectory, EnergyError> {
    let duration = profile.duration();
    let limit = duration / 10.0;
    if !(dt > 0.0 && dt <= limit) {
        return Err(EnergyError::BadStep { dt, limit });
    }
    let steps = (duration / dt).ceil() as usize;
    let (mut x, mut y, mut energy) = (start.x, start.y, 0.0);
    for k in 0..steps {
        let t0 = k as f64 * dt;
        let t1 = ((k + 1) as f64 * dt).min(duration);
        let h = t1 - t0;
        if h <= 0.0 {
            break;
        }
        let theta = profile.heading_at(0.5 * (t0 + t1));
        let (s, c) = theta.sin_cos();
        x += h * (model.v0 * c + model.vw);
        y += h * model.v0 * s;
        energy += h * (model.p0 + model.p1 * c);
    }
    Ok(Trajectory {
        end: KinematicState {
            x,
            y,
            theta: profile.heading_at(duration),
        },
        elapsed: duration,
        energy,
    })
}

/// Absolute gap between the integrated energy and the affine prediction
/// from elapsed time and eastward displacement.
pub fn identity_residual(
    model: &PowerModel,
    profile: &HeadingProfile,
    start: KinematicState,
    dt: f64,
) -> Result<f64, EnergyError> {
    let traj = simulate(model, profile, start, dt)?;
    Ok((traj.energy - affine_prediction(model, traj.elapsed, traj.end.x - start.x)).abs())
}

/// `(p0 - p1 * vw / v0) * elapsed + (p1 / v0) * dx`.
pub fn affine_prediction(model: &PowerModel, elapsed: f64, dx: f64) -> f64 {
    (model.p0 - model.p1 * model.vw / model.v0) * elapsed + model.p1 / model.v0 * dx
}

/// Largest relative residuals seen by [`identity_study`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyReport {
    pub profiles: usize,
    /// Over runs in a moving medium.
    pub max_relative_moving: f64,
    /// Over runs in a still medium.
    pub max_relative_still: f64,
}

/// Drag modes exercised by [`identity_study`].
pub const STUDY_DRAG: [DragParams; 2] = [
    DragParams::Aerodynamic {
        rho: 1.225,
        cd: 1.0,
        af: 0.5,
    },
    DragParams::Rolling {
        mass: 2.0,
        g: 9.81,
        fr: 0.02,
    },
];

/// Integrates `profiles` random heading profiles per drag mode at agent
/// speed 2 in media moving at 0 and 1, with `dt = T / 10^4`, and reports
/// residuals relative to the integrated energy.
pub fn identity_study(profiles: usize, seed: u64) -> Result<StudyReport, EnergyError> {
    let mut stream = Stream::new(seed);
    let mut report = StudyReport {
        profiles,
        max_relative_moving: 0.0,
        max_relative_still: 0.0,
    };
    for _ in 0..profiles {
        let duration = stream.range(1.0, 10.0);
        let breakpoints = 2 + stream.below(19) as usize;
        let profile = HeadingProfile::random(&mut stream, breakpoints, duration);
        for drag in STUDY_DRAG {
            for vw in [0.0, 1.0] {
                let model = build_power_model(drag, 2.0, vw)?;
                let traj = simulate(&model, &profile, KinematicState::default(), duration / 1e4)?;
                let rel = (traj.energy - affine_prediction(&model, traj.elapsed, traj.end.x)).abs() / traj.energy.abs();
                let slot = if vw == 0.0 {
                    &mut report.max_relative_still
                } else {
                    &mut report.max_relative_moving
                };
                *slot = slot.max(rel);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aero() -> DragParams {
        DragParams::Aerodynamic {
            rho: 2.0,
            cd: 1.0,
            af: 1.0,
        }
    }

    fn model(p0: f64, p1: f64) -> PowerModel {
        PowerModel {
            v0: 1.0,
            vw: 0.0,
            phi: p0,
            p0,
            p1,
        }
    }

    #[test]
    fn aerodynamic_power_model() {
        let m = build_power_model(aero(), 2.0, 0.0).unwrap();
        assert_eq!((m.phi, m.p0, m.p1), (4.0, 8.0, 0.0));
    }

    #[test]
    fn rolling_power_model() {
        let drag = DragParams::Rolling {
            mass: 10.0,
            g: 10.0,
            fr: 0.1,
        };
        let m = build_power_model(drag, 3.0, 1.0).unwrap();
        assert!((m.phi - 10.0).abs() < 1e-12);
        assert!((m.p0 - 30.0).abs() < 1e-12);
        assert!((m.p1 - 10.0).abs() < 1e-12);
        assert!((m.p1 - m.p0 * m.vw / m.v0).abs() <= 1e-12 * m.p1);
    }

    #[test]
    fn rejects_uncontrollable_medium() {
        assert!(matches!(
            build_power_model(aero(), 2.0, 2.0),
            Err(EnergyError::MediumTooFast { .. })
        ));
        assert!(matches!(
            build_power_model(aero(), 0.0, 0.0),
            Err(EnergyError::NonPositiveSpeed(_))
        ));
        assert!(build_power_model(aero(), 2.0, -0.1).is_err());
        let bad = DragParams::Aerodynamic {
            rho: 0.0,
            cd: 1.0,
            af: 1.0,
        };
        assert_eq!(
            build_power_model(bad, 1.0, 0.0),
            Err(EnergyError::DragParameter("rho"))
        );
    }

    #[test]
    fn power_by_heading() {
        let m = model(8.0, 2.0);
        assert_eq!(instantaneous_power(&m, 0.0), 10.0);
        assert!((instantaneous_power(&m, PI / 2.0) - 8.0).abs() < 1e-12);
        assert!((instantaneous_power(&m, PI) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn edge_energy_products() {
        assert_eq!(edge_energy(0.1, 10.0, 5.0), 5.0);
        assert_eq!(edge_energy(0.1, 0.0, 123.0), 0.0);
        assert!((edge_energy(0.1, 2.5, 4.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_heading_trajectories() {
        let m = model(5.0, 0.0);
        let p = HeadingProfile::constant(0.0, 2.0).unwrap();
        let t = simulate(&m, &p, KinematicState::default(), 0.01).unwrap();
        assert!((t.end.x - 2.0).abs() < 1e-12 && t.end.y.abs() < 1e-12);
        assert!((t.energy - 10.0).abs() < 1e-12);
        assert_eq!(t.elapsed, 2.0);

        let windy = PowerModel {
            vw: 0.5,
            ..model(5.0, 2.5)
        };
        let t = simulate(&windy, &p, KinematicState::default(), 0.01).unwrap();
        assert!((t.end.x - 3.0).abs() < 1e-12);
        let r = identity_residual(&windy, &p, KinematicState::default(), 0.01).unwrap();
        assert!(r <= 1e-9);
    }

    #[test]
    fn profile_validation() {
        assert_eq!(HeadingProfile::new(vec![]), Err(EnergyError::EmptyProfile));
        assert_eq!(
            HeadingProfile::new(vec![(0.0, 0.0), (0.0, 1.0)]),
            Err(EnergyError::BadBreakpoints)
        );
        assert_eq!(
            HeadingProfile::new(vec![(0.5, 0.0), (1.0, 1.0)]),
            Err(EnergyError::BadBreakpoints)
        );
        let p = HeadingProfile::constant(0.0, 1.0).unwrap();
        assert!(matches!(
            simulate(&model(1.0, 0.0), &p, KinematicState::default(), 0.2),
            Err(EnergyError::BadStep { .. })
        ));
    }

    #[test]
    fn heading_interpolates_linearly() {
        let p = HeadingProfile::new(vec![(0.0, 0.0), (2.0, 1.0), (4.0, -1.0)]).unwrap();
        assert_eq!(p.heading_at(1.0), 0.5);
        assert_eq!(p.heading_at(3.0), 0.0);
        assert_eq!(p.heading_at(4.0), -1.0);
    }

    #[test]
    fn still_medium_residual_is_zero() {
        let m = build_power_model(aero(), 2.0, 0.0).unwrap();
        let mut s = Stream::new(3);
        for _ in 0..10 {
            let p = HeadingProfile::random(&mut s, 20, 5.0);
            let r = identity_residual(&m, &p, KinematicState::default(), 5e-3).unwrap();
            assert!(r <= 1e-12 * m.p0 * 5.0, "residual {r}");
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let m = build_power_model(aero(), 2.0, 1.0).unwrap();
        let p = HeadingProfile::random(&mut Stream::new(9), 20, 3.0);
        let a = simulate(&m, &p, KinematicState::default(), 1e-3).unwrap();
        let b = simulate(&m, &p, KinematicState::default(), 1e-3).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.end.x.to_bits(), b.end.x.to_bits());
    }

    #[test]
    fn small_study_meets_tolerances() {
        let r = identity_study(5, 1).unwrap();
        assert!(r.max_relative_moving <= 1e-4);
        assert!(r.max_relative_still <= 1e-12);
        assert_eq!(r, identity_study(5, 1).unwrap());
    }
}
