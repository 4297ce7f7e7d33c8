//! Fourier test-function pairs (h, ĥ) with ĥ compactly supported in [−1, 1],
//! plus the dilation L used in zero sums.

use crate::error::Error;
use crate::Result;

/// Kernel shape. The Fejér pair h(t) = (sin πt/πt)², ĥ(ξ) = max(1−|ξ|, 0) is
/// the shipped default; both sides are nonnegative, which the zero-sum floor
/// checks rely on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelShape {
    Fejer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPair {
    pub shape: KernelShape,
    /// Dilation L ≥ 1; h_L(t) = h(tL) truncates prime sums at e^L exactly.
    pub dilation: f64,
    /// Amplitude multiplier applied to h and ĥ alike.
    pub scale: f64,
}

impl KernelPair {
    pub fn fejer(dilation: f64) -> Result<Self> {
        if !(dilation >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "dilation L = {dilation} must be ≥ 1"
            )));
        }
        Ok(Self {
            shape: KernelShape::Fejer,
            dilation,
            scale: 1.0,
        })
    }

    /// Same shape and dilation, amplitude multiplied by c.
    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }

    pub fn h(&self, t: f64) -> f64 {
        match self.shape {
            KernelShape::Fejer => {
                if t == 0.0 {
                    return self.scale;
                }
                let s = (std::f64::consts::PI * t).sin() / (std::f64::consts::PI * t);
                self.scale * s * s
            }
        }
    }

    pub fn h_hat(&self, xi: f64) -> f64 {
        match self.shape {
            KernelShape::Fejer => self.scale * (1.0 - xi.abs()).max(0.0),
        }
    }

    /// H(ξ) = ĥ(ξ) + ĥ(−ξ).
    pub fn big_h(&self, xi: f64) -> f64 {
        self.h_hat(xi) + self.h_hat(-xi)
    }

    pub fn h_zero(&self) -> f64 {
        self.h(0.0)
    }

    pub fn h_hat_zero(&self) -> f64 {
        self.h_hat(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn fejer_shape() {
        let k = KernelPair::fejer(1.0).unwrap();
        assert_eq!(k.h_zero(), 1.0);
        assert_eq!(k.h_hat(0.0), 1.0);
        assert_eq!(k.h_hat(1.0), 0.0);
        assert_eq!(k.h_hat(-2.3), 0.0);
        assert!((k.h(0.5) - (2.0 / std::f64::consts::PI).powi(2)).abs() < 1e-15);
        let mut t = -4.0;
        while t < 4.0 {
            assert!(k.h(t) >= 0.0);
            t += 0.0317;
        }
    }

    /// h(0) = ∫ĥ for a Fourier pair.
    #[test]
    fn h_zero_equals_hat_mass() {
        let k = KernelPair::fejer(3.0).unwrap().scaled(1.7);
        let mass = integrate(|xi| k.h_hat(xi), -1.0, 1.0, 1e-12).unwrap();
        assert!((mass - k.h_zero()).abs() < 1e-10);
    }

    /// ∫h(t)e^{−2πiξt}dt recovers ĥ(ξ) (real symmetric case).
    #[test]
    fn transform_consistency() {
        let k = KernelPair::fejer(1.0).unwrap();
        for xi in [0.0, 0.25, 0.6, 0.95] {
            // Fejér decays like 1/t²; integrate far out and accept 1e-3
            let val = integrate(
                |t| k.h(t) * (2.0 * std::f64::consts::PI * xi * t).cos(),
                -2_000.0,
                2_000.0,
                1e-8,
            )
            .unwrap();
            assert!((val - k.h_hat(xi)).abs() < 2e-3, "xi={xi} val={val}");
        }
    }

    #[test]
    fn rejects_small_dilation() {
        assert!(KernelPair::fejer(0.5).is_err());
    }
}
