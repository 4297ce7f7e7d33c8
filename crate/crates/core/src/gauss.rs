//! Quadratic Gauss sums τ_m(n) and G_m(n) for odd n: closed-form evaluation
//! over prime powers, with a direct-summation oracle.
//!
//! Values live in the ring ℤ[√p : p prime] and are kept exact as c·√r with
//! r squarefree; the τ normalization differs from G by the quarter-turn
//! prefactor (1+i)/2 + (−1/n)(1−i)/2.

use num_complex::Complex64;

use crate::error::Error;
use crate::kronecker::kronecker;
use crate::primes::PrimeTable;
use crate::Result;

/// Exact value c·√r, c ∈ ℤ, r ≥ 1 squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactGauss {
    pub coeff: i64,
    pub radicand: u64,
}

impl ExactGauss {
    pub const ZERO: Self = Self { coeff: 0, radicand: 1 };
    pub const ONE: Self = Self { coeff: 1, radicand: 1 };

    pub fn integer(c: i64) -> Self {
        Self { coeff: c, radicand: 1 }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.coeff == 0 || other.coeff == 0 {
            return Self::ZERO;
        }
        let g = gcd(self.radicand, other.radicand);
        Self {
            coeff: self.coeff * other.coeff * g as i64,
            radicand: (self.radicand / g) * (other.radicand / g),
        }
    }

    pub fn to_f64(self) -> f64 {
        self.coeff as f64 * (self.radicand as f64).sqrt()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Closed-form case at one prime power, recorded for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussCase {
    /// β ≤ α even: φ(p^β).
    Totient,
    /// β = α+1 even: −p^α.
    NegPrimePower,
    /// β = α+1 odd: (m·p^{−α}/p)·p^{α+½}.
    ChiRootP,
    /// β ≤ α odd, or β ≥ α+2.
    Zero,
}

/// G_m(n) with its per-prime-power case tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussSumValue {
    pub value: ExactGauss,
    pub cases: Vec<(u64, u32, GaussCase)>,
}

fn check_odd(n: u64) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Gauss sum modulus {n} must be odd and positive"
        )));
    }
    Ok(())
}

/// G_m(n) for odd n by the multiplicative closed form; G_m(1) = 1.
pub fn gauss_closed(m: i64, n: u64, table: &PrimeTable) -> Result<GaussSumValue> {
    check_odd(n)?;
    let mut value = ExactGauss::ONE;
    let mut cases = Vec::new();
    for (p, beta) in table.factor(n)? {
        // α = v_p(m), with α = ∞ encoded as None when m = 0
        let alpha = if m == 0 {
            None
        } else {
            let mut a = 0u32;
            let mut mm = m.unsigned_abs();
            while mm % p == 0 {
                mm /= p;
                a += 1;
            }
            Some(a)
        };
        let below = alpha.map_or(true, |a| beta <= a);
        let (case, factor) = if below {
            if beta % 2 == 0 {
                (GaussCase::Totient, ExactGauss::integer(phi_pp(p, beta) as i64))
            } else {
                (GaussCase::Zero, ExactGauss::ZERO)
            }
        } else {
            let a = alpha.unwrap();
            if beta == a + 1 {
                let pa = p.pow(a) as i64;
                if beta % 2 == 0 {
                    (GaussCase::NegPrimePower, ExactGauss::integer(-pa))
                } else {
                    let m_reduced = m / p.pow(a) as i64;
                    let chi = kronecker(m_reduced, p) as i64;
                    (
                        GaussCase::ChiRootP,
                        ExactGauss {
                            coeff: chi * pa,
                            radicand: p,
                        },
                    )
                }
            } else {
                (GaussCase::Zero, ExactGauss::ZERO)
            }
        };
        cases.push((p, beta, case));
        value = value.mul(factor);
    }
    Ok(GaussSumValue { value, cases })
}

fn phi_pp(p: u64, e: u32) -> u64 {
    (p - 1) * p.pow(e - 1)
}

/// τ prefactor (1+i)/2 + (−1/n)(1−i)/2: 1 for n ≡ 1 (mod 4), i for n ≡ 3.
pub fn tau_prefactor(n: u64) -> Complex64 {
    if n % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// τ_m(n) assembled from the closed form.
pub fn tau_from_closed(m: i64, n: u64, table: &PrimeTable) -> Result<Complex64> {
    Ok(tau_prefactor(n) * gauss_closed(m, n, table)?.value.to_f64())
}

/// Direct-summation oracle τ_m(n) = Σ_b (b/n) e(mb/n), odd n ≤ 10⁴.
pub fn tau_brute(m: i64, n: u64) -> Result<Complex64> {
    Ok(tau_brute_batch(&[m], n)?[0])
}

/// Oracle batch sharing the character and root-of-unity tables across m.
pub fn tau_brute_batch(ms: &[i64], n: u64) -> Result<Vec<Complex64>> {
    check_odd(n)?;
    if n > 10_000 {
        return Err(Error::InvalidArgument(format!(
            "oracle limit: n = {n} > 10^4"
        )));
    }
    if n == 1 {
        return Ok(vec![Complex64::new(1.0, 0.0); ms.len()]);
    }
    let chi: Vec<f64> = (0..n).map(|b| kronecker(b as i64, n) as f64).collect();
    let unit: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    Ok(ms
        .iter()
        .map(|&m| {
            let mr = m.rem_euclid(n as i64) as u64;
            let mut re = crate::reduce::KahanSum::new();
            let mut im = crate::reduce::KahanSum::new();
            let mut j = 0u64;
            for b in 0..n {
                if chi[b as usize] != 0.0 {
                    let e = unit[j as usize];
                    re.add(chi[b as usize] * e.re);
                    im.add(chi[b as usize] * e.im);
                }
                j += mr;
                if j >= n {
                    j -= n;
                }
            }
            Complex64::new(re.value(), im.value())
        })
        .collect())
}

/// Brute-force G_m(n) via the inverse prefactor.
pub fn gauss_brute(m: i64, n: u64) -> Result<Complex64> {
    Ok(tau_brute(m, n)? / tau_prefactor(n))
}
