use crate::error::{Error, Result};

/// Smoothness-indicator regularization.
pub const WENO_EPS: f64 = 1e-6;

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Number of cells in the centered window used by a reconstruction order.
pub fn window_len(order: usize) -> Option<usize> {
    match order {
        2 | 3 => Some(3),
        5 => Some(5),
        _ => None,
    }
}

/// Face values `(left, right)` of the center cell of `window`.
///
/// Order 2 is a minmod-limited linear reconstruction, orders 3 and 5 are
/// WENO-JS.
pub fn weno_reconstruct(order: usize, window: &[f64]) -> Result<(f64, f64)> {
    let len = window_len(order).ok_or_else(|| Error::param(format!("unsupported reconstruction order {order}")))?;
    if window.len() != len {
        return Err(Error::param(format!("order {order} needs {len} cells, got {}", window.len())));
    }
    if window.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("reconstruction input"));
    }
    Ok(match order {
        2 => {
            let slope = minmod(window[1] - window[0], window[2] - window[1]);
            (window[1] - 0.5 * slope, window[1] + 0.5 * slope)
        }
        3 => {
            let right = weno3_face(window[0], window[1], window[2]);
            let left = weno3_face(window[2], window[1], window[0]);
            (left, right)
        }
        _ => {
            let right = weno5_face(window[0], window[1], window[2], window[3], window[4]);
            let left = weno5_face(window[4], window[3], window[2], window[1], window[0]);
            (left, right)
        }
    })
}

/// Value at the face between `c` and `r`.
fn weno3_face(l: f64, c: f64, r: f64) -> f64 {
    let q0 = -0.5 * l + 1.5 * c;
    let q1 = 0.5 * c + 0.5 * r;
    let b0 = (c - l) * (c - l);
    let b1 = (r - c) * (r - c);
    let a0 = (1.0 / 3.0) / ((WENO_EPS + b0) * (WENO_EPS + b0));
    let a1 = (2.0 / 3.0) / ((WENO_EPS + b1) * (WENO_EPS + b1));
    (a0 * q0 + a1 * q1) / (a0 + a1)
}

/// Value at the face between `u0` and `u1`.
fn weno5_face(um2: f64, um1: f64, u0: f64, u1: f64, u2: f64) -> f64 {
    let q0 = (2.0 * um2 - 7.0 * um1 + 11.0 * u0) / 6.0;
    let q1 = (-um1 + 5.0 * u0 + 2.0 * u1) / 6.0;
    let q2 = (2.0 * u0 + 5.0 * u1 - u2) / 6.0;
    let sq = |x: f64| x * x;
    let b0 = 13.0 / 12.0 * sq(um2 - 2.0 * um1 + u0) + 0.25 * sq(um2 - 4.0 * um1 + 3.0 * u0);
    let b1 = 13.0 / 12.0 * sq(um1 - 2.0 * u0 + u1) + 0.25 * sq(um1 - u1);
    let b2 = 13.0 / 12.0 * sq(u0 - 2.0 * u1 + u2) + 0.25 * sq(3.0 * u0 - 4.0 * u1 + u2);
    let a0 = 0.1 / sq(WENO_EPS + b0);
    let a1 = 0.6 / sq(WENO_EPS + b1);
    let a2 = 0.3 / sq(WENO_EPS + b2);
    (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)
}

/// Scales `values` toward `average` until all of them are at least `floor`.
pub fn positivity_limiter(average: f64, values: &mut [f64], floor: f64) -> Result<()> {
    if !(average >= floor) {
        return Err(Error::InvalidState { index: 0, value: average });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min >= floor {
        return Ok(());
    }
    let theta = ((average - floor) / (average - min)).clamp(0.0, 1.0);
    for v in values.iter_mut() {
        *v = (average + theta * (*v - average)).max(floor);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_is_reproduced() {
        for order in [2, 3, 5] {
            let w = vec![0.7; window_len(order).unwrap()];
            let (l, r) = weno_reconstruct(order, &w).unwrap();
            assert!((l - 0.7).abs() < 1e-15 && (r - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_data_is_exact() {
        // cell averages of u = 2x + 1 on unit cells centered at 0, 1, 2, ...
        let avg = |k: f64| 2.0 * k + 1.0;
        let (l, r) = weno_reconstruct(3, &[avg(-1.0), avg(0.0), avg(1.0)]).unwrap();
        assert!((l - avg(-0.5)).abs() < 1e-13 && (r - avg(0.5)).abs() < 1e-13);
        let w5: Vec<f64> = (-2..=2).map(|k| avg(k as f64)).collect();
        let (l, r) = weno_reconstruct(5, &w5).unwrap();
        assert!((l - avg(-0.5)).abs() < 1e-13 && (r - avg(0.5)).abs() < 1e-13);
        let (l, r) = weno_reconstruct(2, &[avg(-1.0), avg(0.0), avg(1.0)]).unwrap();
        assert!((l - avg(-0.5)).abs() < 1e-13 && (r - avg(0.5)).abs() < 1e-13);
    }

    #[test]
    fn weno5_reproduces_quadratics() {
        // averages of x^2 over [k - 1/2, k + 1/2] are k^2 + 1/12
        let w: Vec<f64> = (-2..=2).map(|k| (k * k) as f64 + 1.0 / 12.0).collect();
        let (l, r) = weno_reconstruct(5, &w).unwrap();
        // smooth data: weights near linear, error limited by the eps regularization
        assert!((l - 0.25).abs() < 1e-3 && (r - 0.25).abs() < 1e-3, "{l} {r}");
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(weno_reconstruct(4, &[0.0; 3]).is_err());
        assert!(weno_reconstruct(5, &[0.0; 3]).is_err());
        assert!(weno_reconstruct(3, &[0.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn limiter_examples() {
        let mut v = [1.2, 0.9];
        positivity_limiter(1.0, &mut v, 0.0).unwrap();
        assert_eq!(v, [1.2, 0.9]);

        let mut v = [-0.5, 2.5];
        positivity_limiter(1.0, &mut v, 0.0).unwrap();
        assert!(v[0].abs() < 1e-15);
        assert!((v[1] - (1.0 + 1.5 / 1.5)).abs() < 1e-15);
        // the average of the two points is preserved
        assert!((0.5 * (v[0] + v[1]) - 1.0).abs() < 1e-15);

        let mut v = [-3.0, 5.0];
        positivity_limiter(0.25, &mut v, 0.25).unwrap();
        assert_eq!(v, [0.25, 0.25]);

        assert!(positivity_limiter(-1.0, &mut [0.0], 0.0).is_err());
    }
}
