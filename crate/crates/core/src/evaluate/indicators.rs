//! The 15 per-window evaluation indicators: five levels of three axes each.

use crate::segment::MotionWindow;

pub const LEVEL_COUNT: usize = 5;
pub const INDICATOR_COUNT: usize = LEVEL_COUNT * 3;

pub const LEVEL_NAMES: [&str; LEVEL_COUNT] =
    ["strength", "force_direction", "velocity", "velocity_direction", "posture"];

/// Whether a level is scored with the logistic (maximal) map or the interval map.
pub fn level_is_maximal(level: usize) -> bool {
    matches!(level, 0 | 2)
}

/// Per-axis velocity from mean-removed acceleration by cumulative
/// trapezoidal integration with `v(0) = 0`.
pub fn derive_velocity(window: &MotionWindow) -> [Vec<f64>; 3] {
    let dt = window.sample_period;
    let axis = |c: usize| -> Vec<f64> {
        let a = window.channel(c);
        if a.is_empty() {
            return Vec::new();
        }
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        let mut v = Vec::with_capacity(a.len());
        let mut acc = 0.0;
        v.push(0.0);
        for w in a.windows(2) {
            acc += 0.5 * dt * ((w[0] - mean) + (w[1] - mean));
            v.push(acc);
        }
        v
    };
    [axis(0), axis(1), axis(2)]
}

fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().sum::<f64>() / x.len() as f64
    }
}

fn mean_abs(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().map(|v| v.abs()).sum::<f64>() / x.len() as f64
    }
}

/// Direction angles `arccos(vᵢ / ‖v‖)` in degrees; a zero vector maps to 90°.
pub fn direction_angles(v: [f64; 3]) -> [f64; 3] {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if norm < 1e-12 {
        return [90.0; 3];
    }
    v.map(|c| (c / norm).clamp(-1.0, 1.0).acos().to_degrees())
}

/// Indicator values of one window, level-major.
///
/// Strength and velocity are per-axis mean magnitudes; the two direction
/// levels are direction angles of the window-mean acceleration and velocity;
/// posture is the window-mean Euler angle.
pub fn indicator_values(window: &MotionWindow) -> [f64; INDICATOR_COUNT] {
    let acc: [Vec<f64>; 3] = [window.channel(0), window.channel(1), window.channel(2)];
    let vel = derive_velocity(window);
    let acc_mean = [mean(&acc[0]), mean(&acc[1]), mean(&acc[2])];
    let vel_mean = [mean(&vel[0]), mean(&vel[1]), mean(&vel[2])];
    let force_dir = direction_angles(acc_mean);
    let vel_dir = direction_angles(vel_mean);
    let mut out = [0.0; INDICATOR_COUNT];
    for axis in 0..3 {
        out[axis] = mean_abs(&acc[axis]);
        out[3 + axis] = force_dir[axis];
        out[6 + axis] = mean_abs(&vel[axis]);
        out[9 + axis] = vel_dir[axis];
        out[12 + axis] = mean(&window.channel(6 + axis));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::SampleFrame;

    fn window(acc: impl Fn(f64) -> [f64; 3]) -> MotionWindow {
        let frames = (0..200)
            .map(|i| {
                let t = i as f64 * 0.01;
                SampleFrame::new(t, acc(t), [0.0; 3], [10.0, -20.0, 30.0])
            })
            .collect();
        MotionWindow::new(0, frames, 0.01)
    }

    #[test]
    fn zero_and_constant_acceleration_give_zero_velocity() {
        for w in [window(|_| [0.0; 3]), window(|_| [1.5, -2.0, 9.81])] {
            let v = derive_velocity(&w);
            assert!(v.iter().flatten().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn sine_acceleration_integrates_to_closed_form() {
        use std::f64::consts::PI;
        // 200 samples at 0.01 s cover one 2 s period of sin(πt); mean is zero
        let w = window(|t| [(PI * t).sin(), 0.0, 0.0]);
        let v = derive_velocity(&w);
        // sample mean over the half-open grid is not exactly zero, which adds a
        // linear drift bounded by |mean|·t
        let a = w.channel(0);
        let m = a.iter().sum::<f64>() / a.len() as f64;
        for (i, vi) in v[0].iter().enumerate() {
            let t = i as f64 * 0.01;
            let exact = (1.0 - (PI * t).cos()) / PI;
            assert!((vi - exact).abs() < 1e-3 + m.abs() * t, "t={t}: {vi} vs {exact}");
        }
    }

    #[test]
    fn direction_angles_of_axes() {
        let a = direction_angles([0.0, 0.0, 9.81]);
        assert!((a[0] - 90.0).abs() < 1e-12 && (a[1] - 90.0).abs() < 1e-12 && a[2].abs() < 1e-12);
        assert_eq!(direction_angles([0.0; 3]), [90.0; 3]);
    }

    #[test]
    fn posture_is_mean_euler() {
        let v = indicator_values(&window(|_| [0.0, 0.0, 9.81]));
        assert_eq!(&v[12..15], &[10.0, -20.0, 30.0]);
        assert!((v[2] - 9.81).abs() < 1e-12);
    }
}
