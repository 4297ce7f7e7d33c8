//! The smooth cutoff Φ: a bump-mollified plateau supported in [½, 5/2],
//! identically 1 on [1, 2].
//!
//! Φ(t) = S(2(t−½))·S(2(5/2−t)) with S the normalized exp(−1/t) smoothstep,
//! S(u) = g(u)/(g(u)+g(1−u)), g(u) = e^{−1/u}. The symmetry S(u)+S(1−u) = 1
//! makes ∫Φ = 3/2 exactly; the constructor still computes Φ̂(0) by adaptive
//! quadrature and caches it.

use crate::quad::integrate;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct SmoothCutoff {
    hat_zero: f64,
}

fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let g = (-1.0 / u).exp();
        let h = (-1.0 / (1.0 - u)).exp();
        g / (g + h)
    }
}

/// Φ evaluated pointwise, independent of any instance state.
pub fn phi(t: f64) -> f64 {
    if !(0.5..=2.5).contains(&t) {
        return 0.0;
    }
    smoothstep(2.0 * (t - 0.5)) * smoothstep(2.0 * (2.5 - t))
}

impl SmoothCutoff {
    /// Build the cutoff, computing Φ̂(0) = ∫Φ to 1e−12 by quadrature.
    pub fn new() -> Result<Self> {
        let hat_zero = integrate(phi, 0.5, 2.5, 1e-13)?;
        Ok(Self { hat_zero })
    }

    pub fn eval(&self, t: f64) -> f64 {
        phi(t)
    }

    /// Cached Φ̂(0).
    pub fn hat_zero(&self) -> f64 {
        self.hat_zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_and_plateau() {
        assert_eq!(phi(0.4), 0.0);
        assert_eq!(phi(2.6), 0.0);
        for t in [1.0, 1.3, 1.77, 2.0] {
            assert_eq!(phi(t), 1.0, "t={t}");
        }
        for t in [0.6, 0.9, 2.1, 2.4] {
            assert!(phi(t) > 0.0 && phi(t) < 1.0, "t={t}");
        }
    }

    #[test]
    fn nonnegative_and_smooth_at_seams() {
        // finite differences of high order stay bounded through the seams
        let h = 1e-3;
        for t0 in [0.5, 1.0, 2.0, 2.5] {
            let d4: f64 = (-2..=2)
                .map(|k| {
                    let c = [1.0, -4.0, 6.0, -4.0, 1.0][(k + 2) as usize];
                    c * phi(t0 + k as f64 * h)
                })
                .sum::<f64>()
                / h.powi(4);
            assert!(d4.abs() < 1e6, "t0={t0} d4={d4}");
        }
        let mut t = 0.3;
        while t < 2.7 {
            assert!(phi(t) >= 0.0);
            t += 0.01;
        }
    }

    /// The smoothstep symmetry forces ∫Φ = 1 + 2·(½·½) = 3/2 exactly; the
    /// quadrature value must agree to 1e−12.
    #[test]
    fn hat_zero_is_three_halves() {
        let c = SmoothCutoff::new().unwrap();
        assert!((c.hat_zero() - 1.5).abs() < 1e-12, "{}", c.hat_zero());
    }
}
