//! Monic integer cubics: discriminants, factorization over ℚ, root counts
//! mod p, and real roots.

use crate::error::Error;
use crate::Result;

/// x³ + c2·x² + c1·x + c0 with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubicPoly {
    pub c2: i64,
    pub c1: i64,
    pub c0: i64,
}

/// Factorization shape of a squarefree monic cubic over ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicSplit {
    /// Three rational roots.
    ThreeRational,
    /// One rational root, irreducible quadratic cofactor.
    OneRational,
    /// Irreducible with square discriminant.
    IrreducibleSquareDisc,
    /// Irreducible with nonsquare discriminant.
    IrreducibleNonsquareDisc,
}

impl CubicPoly {
    pub fn new(c2: i64, c1: i64, c0: i64) -> Self {
        Self { c2, c1, c0 }
    }

    pub fn eval(&self, x: i64) -> i128 {
        let x = x as i128;
        ((x + self.c2 as i128) * x + self.c1 as i128) * x + self.c0 as i128
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        ((x + self.c2 as f64) * x + self.c1 as f64) * x + self.c0 as f64
    }

    /// Polynomial discriminant 18abc − 4a³c + a²b² − 4b³ − 27c².
    pub fn discriminant(&self) -> i128 {
        let a = self.c2 as i128;
        let b = self.c1 as i128;
        let c = self.c0 as i128;
        18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c
    }

    pub fn is_squarefree(&self) -> bool {
        self.discriminant() != 0
    }

    /// Rational (hence integer) roots, ascending, without multiplicity.
    pub fn rational_roots(&self) -> Vec<i64> {
        let mut roots = Vec::new();
        if self.c0 == 0 {
            roots.push(0);
            // remaining quadratic x² + c2 x + c1
            let d = (self.c2 as i128) * (self.c2 as i128) - 4 * self.c1 as i128;
            if d >= 0 {
                if let Some(s) = exact_isqrt(d) {
                    for num in [-(self.c2 as i128) + s, -(self.c2 as i128) - s] {
                        if num % 2 == 0 {
                            roots.push((num / 2) as i64);
                        }
                    }
                }
            }
        } else {
            let a0 = self.c0.unsigned_abs();
            let mut d = 1u64;
            while d * d <= a0 {
                if a0 % d == 0 {
                    for cand in [d as i64, -(d as i64), (a0 / d) as i64, -((a0 / d) as i64)] {
                        if self.eval(cand) == 0 {
                            roots.push(cand);
                        }
                    }
                }
                d += 1;
            }
        }
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// Factorization shape over ℚ. Requires nonzero discriminant.
    pub fn split_type(&self) -> Result<CubicSplit> {
        let disc = self.discriminant();
        if disc == 0 {
            return Err(Error::InvalidArgument(format!(
                "cubic {self:?} is not squarefree"
            )));
        }
        let roots = self.rational_roots();
        Ok(match roots.len() {
            3 => CubicSplit::ThreeRational,
            1 => CubicSplit::OneRational,
            0 => {
                if disc > 0 && exact_isqrt(disc).is_some() {
                    CubicSplit::IrreducibleSquareDisc
                } else {
                    CubicSplit::IrreducibleNonsquareDisc
                }
            }
            _ => unreachable!("squarefree cubic cannot have exactly two rational roots"),
        })
    }

    /// Number of roots of F mod p, for odd p not dividing disc(F).
    ///
    /// Small p by enumeration, larger p via deg gcd(x^p − x, F) over F_p.
    pub fn roots_mod_p(&self, p: u64) -> Result<u32> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
        }
        if self.discriminant().rem_euclid(p as i128) == 0 {
            return Err(Error::BadReductionPrime { p });
        }
        if p < 64 {
            let mut count = 0;
            for x in 0..p {
                if self.eval_mod(x, p) == 0 {
                    count += 1;
                }
            }
            return Ok(count);
        }
        let f = [
            self.c0.rem_euclid(p as i64) as u64,
            self.c1.rem_euclid(p as i64) as u64,
            self.c2.rem_euclid(p as i64) as u64,
        ];
        Ok(count_roots_gcd(f, p))
    }

    fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let c2 = self.c2.rem_euclid(p as i64) as u64;
        let c1 = self.c1.rem_euclid(p as i64) as u64;
        let c0 = self.c0.rem_euclid(p as i64) as u64;
        (((x + c2) % p * x + c1) % p * x + c0) % p
    }

    /// Real roots in descending order, refined by Newton iteration.
    pub fn real_roots(&self) -> Vec<f64> {
        let a = self.c2 as f64;
        let b = self.c1 as f64;
        let c = self.c0 as f64;
        // depressed form t³ + pt + q with x = t − a/3
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        let shift = -a / 3.0;
        let disc = -4.0 * p * p * p - 27.0 * q * q;
        let mut roots = if disc > 0.0 {
            // three real roots, trigonometric form
            let m = 2.0 * (-p / 3.0).sqrt();
            let theta = (3.0 * q / (p * m)).acos() / 3.0;
            (0..3)
                .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
                .collect::<Vec<_>>()
        } else {
            // single real root, Cardano
            let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
            let u = (-q / 2.0 + d).cbrt();
            let v = (-q / 2.0 - d).cbrt();
            vec![u + v + shift]
        };
        for r in roots.iter_mut() {
            for _ in 0..60 {
                let f = self.eval_f64(*r);
                let df = (3.0 * *r + 2.0 * a) * *r + b;
                if df == 0.0 {
                    break;
                }
                let step = f / df;
                *r -= step;
                if step.abs() <= 1e-14 * (1.0 + r.abs()) {
                    break;
                }
            }
        }
        roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
        roots
    }
}

impl std::fmt::Display for CubicPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x^3")?;
        for (c, pow) in [(self.c2, "x^2"), (self.c1, "x"), (self.c0, "")] {
            if c != 0 {
                write!(f, "{}{}{}", if c > 0 { "+" } else { "-" }, c.abs(), pow)?;
            }
        }
        Ok(())
    }
}

fn exact_isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut s = (n as f64).sqrt() as i128;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    (s * s == n).then_some(s)
}

// --- degree-≤2 polynomial arithmetic over F_p, for the root-count gcd ---

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(p < (1 << 32));
    a * b % p
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Multiply residues mod the monic cubic f, coefficients little-endian.
fn mul_mod_cubic(a: [u64; 3], b: [u64; 3], f: [u64; 3], p: u64) -> [u64; 3] {
    let mut prod = [0u64; 5];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(ai, bj, p)) % p;
        }
    }
    // reduce x^4, x^3 using x^3 ≡ −(f2 x² + f1 x + f0)
    for k in [4usize, 3] {
        let c = prod[k];
        if c != 0 {
            prod[k] = 0;
            for (idx, &fc) in f.iter().enumerate() {
                let t = mulmod(c, fc, p);
                let pos = k - 3 + idx;
                prod[pos] = (prod[pos] + p - t) % p;
            }
        }
    }
    [prod[0], prod[1], prod[2]]
}

/// deg gcd(x^p − x, f) = number of distinct roots of the squarefree cubic f.
fn count_roots_gcd(f: [u64; 3], p: u64) -> u32 {
    // x^p mod f by square-and-multiply on the polynomial x
    let mut acc = [1u64, 0, 0];
    let mut base = [0u64, 1, 0];
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_cubic(acc, base, f, p);
        }
        base = mul_mod_cubic(base, base, f, p);
        e >>= 1;
    }
    // g = x^p − x (mod f), degree ≤ 2
    let g = [acc[0], (acc[1] + p - 1) % p, acc[2]];
    // gcd of the monic cubic f with g over F_p[x]
    let mut big = vec![f[0], f[1], f[2], 1]; // f itself, monic
    let mut small = vec![g[0], g[1], g[2]];
    trim(&mut small);
    loop {
        if small.is_empty() {
            return (big.len() - 1) as u32;
        }
        let r = poly_rem(&big, &small, p);
        big = small;
        small = r;
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = powmod(b[db], p - 2, p);
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let coef = mulmod(r[dr], inv, p);
        if coef != 0 {
            let shift = dr - db;
            for (i, &bc) in b.iter().enumerate() {
                let t = mulmod(coef, bc, p);
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(CubicPoly::new(0, -1, 0).discriminant(), 4);
        assert_eq!(CubicPoly::new(0, -1, -1).discriminant(), -23);
        assert_eq!(CubicPoly::new(0, -3, -1).discriminant(), 81);
        assert_eq!(CubicPoly::new(0, -16, 16).discriminant(), 9472);
    }

    #[test]
    fn rational_root_patterns() {
        assert_eq!(CubicPoly::new(0, -1, 0).rational_roots(), vec![-1, 0, 1]);
        // (x−1)(x²+1)
        assert_eq!(CubicPoly::new(-1, 1, -1).rational_roots(), vec![1]);
        assert_eq!(CubicPoly::new(0, -1, -1).rational_roots(), Vec::<i64>::new());
    }

    #[test]
    fn split_types() {
        assert_eq!(
            CubicPoly::new(0, -1, 0).split_type().unwrap(),
            CubicSplit::ThreeRational
        );
        assert_eq!(
            CubicPoly::new(-1, 1, -1).split_type().unwrap(),
            CubicSplit::OneRational
        );
        assert_eq!(
            CubicPoly::new(0, -3, -1).split_type().unwrap(),
            CubicSplit::IrreducibleSquareDisc
        );
        assert_eq!(
            CubicPoly::new(0, -1, -1).split_type().unwrap(),
            CubicSplit::IrreducibleNonsquareDisc
        );
    }

    #[test]
    fn root_counts_match_enumeration() {
        let cubics = [
            CubicPoly::new(0, -1, 0),
            CubicPoly::new(0, -1, -1),
            CubicPoly::new(0, -3, -1),
            CubicPoly::new(-1, 1, -1),
            CubicPoly::new(2, -5, 7),
        ];
        let primes = [67u64, 71, 73, 79, 101, 211, 499, 997];
        for f in cubics {
            for &p in &primes {
                if f.discriminant().rem_euclid(p as i128) == 0 {
                    continue;
                }
                let expect = (0..p).filter(|&x| f.eval_mod(x, p) == 0).count() as u32;
                assert_eq!(f.roots_mod_p(p).unwrap(), expect, "f={f:?} p={p}");
            }
        }
    }

    #[test]
    fn frozen_small_root_counts() {
        // x³−x−1 mod 5: single root at x=2
        assert_eq!(CubicPoly::new(0, -1, -1).roots_mod_p(5).unwrap(), 1);
        // x³−x−1 mod 3: no roots (inert-type)
        assert_eq!(CubicPoly::new(0, -1, -1).roots_mod_p(3).unwrap(), 0);
        // x³−x always has roots 0, ±1
        assert_eq!(CubicPoly::new(0, -1, 0).roots_mod_p(101).unwrap(), 3);
    }

    #[test]
    fn bad_prime_rejected() {
        assert!(matches!(
            CubicPoly::new(0, -1, -1).roots_mod_p(23),
            Err(crate::Error::BadReductionPrime { p: 23 })
        ));
    }

    #[test]
    fn real_roots_are_roots() {
        for f in [
            CubicPoly::new(0, -1, 0),
            CubicPoly::new(0, -16, 16),
            CubicPoly::new(0, -1, 1),
            CubicPoly::new(3, -2, -5),
        ] {
            let roots = f.real_roots();
            let expected = if f.discriminant() > 0 { 3 } else { 1 };
            assert_eq!(roots.len(), expected, "f={f:?}");
            for r in roots {
                assert!(f.eval_f64(r).abs() < 1e-8 * (1.0 + r.abs().powi(3)), "f={f:?} r={r}");
            }
        }
    }
}
