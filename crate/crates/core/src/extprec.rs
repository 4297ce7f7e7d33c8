//! Double-double arithmetic (~32 significant digits) for oracle-grade series
//! evaluation, and the extended-precision central-value/derivative series for
//! weight-2 twists:
//!
//!   L′(½, f_E⊗χ_d) = 2 Σ (a_n χ_d(n)/n)·E₁(2πn/(√N|d|))   (ε = −1)
//!   L(½,  f_E⊗χ_d) = 2 Σ (a_n χ_d(n)/n)·e^{−2πn/(√N|d|)}  (ε = +1)
//!
//! with exact integer coefficients a_n·χ_d(n) from point counts. The series
//! is mathematically independent of the engine's incomplete-gamma path and is
//! carried out entirely in double-double.

use crate::curve::EllipticCurveSpec;
use crate::error::Error;
use crate::kronecker::kronecker;
use crate::Result;

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const DD_GAMMA: Dd = Dd {
    hi: 0.5772156649015329,
    lo: -4.942915152430645e-18,
};
const DD_LN2: Dd = Dd {
    hi: 0.6931471805599453,
    lo: 2.3190468138462996e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Dd::from(q1)));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul(Dd::from(q2)));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from(q3))
    }

    pub fn scale(self, c: f64) -> Dd {
        self.mul(Dd::from(c))
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    /// e^x by range reduction x = m·ln2 + r and a Taylor tail.
    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let m = (self.hi / std::f64::consts::LN_2).round();
        let r = self.sub(DD_LN2.scale(m));
        // |r| ≤ ln2/2; halve 4 times for fast Taylor convergence
        let r = r.scale(1.0 / 16.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for k in 1..40 {
            term = term.mul(r).scale(1.0 / k as f64);
            sum = sum.add(term);
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // square back 4 times
        for _ in 0..4 {
            sum = sum.mul(sum);
        }
        // multiply by 2^m exactly
        Dd {
            hi: sum.hi * (2.0f64).powi(m as i32),
            lo: sum.lo * (2.0f64).powi(m as i32),
        }
    }

    /// ln x by Newton refinement of the f64 seed.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let mut y = Dd::from(self.hi.ln());
        for _ in 0..3 {
            // y ← y + x·e^{−y} − 1
            let corr = self.mul(y.neg().exp()).sub(Dd::ONE);
            y = y.add(corr);
        }
        y
    }

    /// E₁(x) for x > 0: alternating series below 3, Lentz continued fraction
    /// above.
    pub fn exp_integral_e1(self) -> Dd {
        assert!(self.hi > 0.0);
        if self.hi <= 3.0 {
            // −γ − ln x + Σ (−1)^{n+1} xⁿ/(n·n!)
            let mut term = Dd::ONE;
            let mut sum = Dd::ZERO;
            for n in 1..120 {
                term = term.mul(self).scale(-1.0 / n as f64);
                let contrib = term.scale(-1.0 / n as f64);
                sum = sum.add(contrib);
                if contrib.hi.abs() < 1e-38 {
                    break;
                }
            }
            sum.sub(DD_GAMMA).sub(self.ln())
        } else {
            // e^{−x}/(x+1 − 1²/(x+3 − 2²/(x+5 − …)))
            let tiny = Dd::from(1e-290);
            let mut f = tiny;
            let mut c = tiny;
            let mut d = Dd::ZERO;
            for k in 1..2000u32 {
                let (a, b) = if k == 1 {
                    (Dd::ONE, self.add(Dd::ONE))
                } else {
                    let m = (k - 1) as f64;
                    (Dd::from(-m * m), self.add(Dd::from((2 * k - 1) as f64)))
                };
                d = b.add(a.mul(d));
                if d.hi == 0.0 {
                    d = tiny;
                }
                c = b.add(a.div(c));
                if c.hi == 0.0 {
                    c = tiny;
                }
                d = Dd::ONE.div(d);
                let delta = c.mul(d);
                f = f.mul(delta);
                if (delta.sub(Dd::ONE)).abs().hi < 1e-34 {
                    break;
                }
            }
            self.neg().exp().mul(f)
        }
    }
}

/// Exact twisted integer coefficients a_n·χ_d(n) for n ≤ n_max, weight 2.
///
/// Good p: a(p^{j+1}) = a_p χ(p)·a(p^j) − p·a(p^{j−1}) (χ(p) ≠ 0);
/// level-dividing p: a(p^j) = (a_p χ(p))^j. Model-bad primes without local
/// data are rejected, since an oracle cannot silently skip coefficients.
pub fn twisted_integer_coefficients(
    curve: &EllipticCurveSpec,
    d: i64,
    n_max: u64,
) -> Result<Vec<i64>> {
    let n = n_max as usize;
    let mut out = vec![0i64; n + 1];
    if n >= 1 {
        out[1] = 1;
    }
    let mut p = 2u64;
    while p <= n_max {
        if is_prime_small(p) {
            let ap = curve.ap(p).ok_or(Error::BadReductionPrime { p })?;
            let chi = kronecker(d, p) as i64;
            let t = ap * chi;
            let good = curve.conductor % p != 0;
            let chi2 = if good { chi * chi } else { 0 };
            let mut prev = 1i64;
            let mut cur = t;
            let mut pe = p;
            loop {
                out[pe as usize] = cur;
                match pe.checked_mul(p) {
                    Some(next) if next <= n_max => {
                        let nxt = t * cur - chi2 * p as i64 * prev;
                        prev = cur;
                        cur = nxt;
                        pe = next;
                    }
                    _ => break,
                }
            }
        }
        p += 1;
    }
    for m in 2..=n {
        let p = least_prime_factor(m as u64) as usize;
        let mut pe = p;
        let mut rest = m / p;
        while rest % p == 0 {
            pe *= p;
            rest /= p;
        }
        if rest > 1 {
            out[m] = out[pe] * out[rest];
        }
    }
    Ok(out)
}

fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn least_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// Series value for the twisted weight-2 central derivative (ε(d) = −1):
/// 2 Σ (a_n χ_d(n)/n)·E₁(n/Q), Q = √N|d|/2π.
pub fn lprime_series_dd(curve: &EllipticCurveSpec, d: i64) -> Result<Dd> {
    let q = (curve.conductor as f64).sqrt() * d.unsigned_abs() as f64
        / (2.0 * std::f64::consts::PI);
    let n_max = ((75.0 * q).ceil() as u64).max(40);
    let coeffs = twisted_integer_coefficients(curve, d, n_max)?;
    let qd = Dd::from((curve.conductor as f64).sqrt())
        .scale(d.unsigned_abs() as f64)
        .div(Dd::from(2.0).mul(dd_pi()));
    let mut sum = Dd::ZERO;
    for n in 1..=n_max {
        let a = coeffs[n as usize];
        if a == 0 {
            continue;
        }
        let x = Dd::from(n as f64).div(qd);
        let term = Dd::from(a as f64)
            .scale(1.0 / n as f64)
            .mul(x.exp_integral_e1());
        sum = sum.add(term);
    }
    Ok(sum.scale(2.0))
}

/// Series value for the twisted weight-2 central value (ε(d) = +1):
/// 2 Σ (a_n χ_d(n)/n)·e^{−n/Q}.
pub fn central_series_dd(curve: &EllipticCurveSpec, d: i64) -> Result<Dd> {
    let q = (curve.conductor as f64).sqrt() * d.unsigned_abs() as f64
        / (2.0 * std::f64::consts::PI);
    let n_max = ((75.0 * q).ceil() as u64).max(40);
    let coeffs = twisted_integer_coefficients(curve, d, n_max)?;
    let qd = Dd::from((curve.conductor as f64).sqrt())
        .scale(d.unsigned_abs() as f64)
        .div(Dd::from(2.0).mul(dd_pi()));
    let mut sum = Dd::ZERO;
    for n in 1..=n_max {
        let a = coeffs[n as usize];
        if a == 0 {
            continue;
        }
        let x = Dd::from(n as f64).div(qd);
        let term = Dd::from(a as f64)
            .scale(1.0 / n as f64)
            .mul(x.neg().exp());
        sum = sum.add(term);
    }
    Ok(sum.scale(2.0))
}

fn dd_pi() -> Dd {
    Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    }
}
