//! Root-number-restricted families of fundamental discriminants.
//!
//! A family instance is one congruence class: sign κ = ±1 together with a
//! residue a (mod N₀), a ≡ 1 or 5 (mod 8), where N₀ = lcm(8, levels). The
//! congruence fixes χ_d(−1), χ_d(2) and χ_d(p) for p | N₀, hence the root
//! number ε_f(d) = ε_f·χ_d(−N) of every member; the full family is the union
//! of the classes whose forced root numbers all equal the required sign.

use crate::discriminant::FundamentalDiscriminant;
use crate::error::Error;
use crate::kronecker::{chi_at_minus_one, kronecker};
use crate::newform::FormParams;
use crate::primes::PrimeTable;
use crate::Result;

/// One congruence class of a twist family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistFamily {
    pub forms: Vec<FormParams>,
    /// N₀ = lcm(8, N₁, …, N_M).
    pub n0: u64,
    /// Sign of the member discriminants.
    pub kappa: i8,
    /// Residue class a (mod N₀), a ≡ 1 or 5 (mod 8), coprime to N₀.
    pub residue: u64,
    /// −1 for the odd (derivative) family, +1 for the even family.
    pub required_sign: i8,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// N₀ for a set of forms: lcm of 8 and the levels.
pub fn modulus_n0(forms: &[FormParams]) -> u64 {
    forms.iter().fold(8, |acc, f| lcm(acc, f.level))
}

/// ε_f(d) = ε_f·χ_d(−N). Requires (d, 2N) = 1.
pub fn root_number_twist(form: FormParams, d: i64) -> Result<i32> {
    if d % 2 == 0 || gcd(d.unsigned_abs(), form.level) != 1 {
        return Err(Error::InvalidArgument(format!(
            "d = {d} shares a factor with 2N = {}",
            2 * form.level
        )));
    }
    Ok(form.epsilon as i32 * chi_at_minus_one(d) * kronecker(d, form.level))
}

impl TwistFamily {
    pub fn new(
        forms: Vec<FormParams>,
        kappa: i8,
        residue: u64,
        required_sign: i8,
    ) -> Result<Self> {
        if !matches!(kappa, 1 | -1) || !matches!(required_sign, 1 | -1) {
            return Err(Error::InvalidArgument("κ and the sign must be ±1".into()));
        }
        let n0 = modulus_n0(&forms);
        let a = residue % n0;
        if a % 8 != 1 && a % 8 != 5 {
            return Err(Error::InvalidArgument(format!(
                "residue {a} is not ≡ 1 or 5 (mod 8)"
            )));
        }
        if gcd(a, n0) != 1 {
            return Err(Error::InvalidArgument(format!(
                "residue {a} shares a factor with N₀ = {n0}"
            )));
        }
        Ok(Self {
            forms,
            n0,
            kappa,
            residue: a,
            required_sign,
        })
    }

    /// A representative integer of the class (not necessarily fundamental);
    /// the χ values at −1, 2, and p | N₀ are constant on the class.
    fn representative(&self) -> i64 {
        if self.kappa > 0 {
            self.residue as i64
        } else {
            self.residue as i64 - self.n0 as i64
        }
    }

    /// Root number forced by the congruence class, per form.
    pub fn class_root_numbers(&self) -> Vec<i32> {
        let d0 = self.representative();
        self.forms
            .iter()
            .map(|&f| root_number_twist(f, d0).expect("class residue is coprime to 2N"))
            .collect()
    }

    /// Whether all class root numbers equal the required sign.
    pub fn sign_consistent(&self) -> bool {
        self.class_root_numbers()
            .iter()
            .all(|&e| e == self.required_sign as i32)
    }

    /// All (κ, a) classes realizing the required sign for every form.
    pub fn valid_pairs(forms: &[FormParams], required_sign: i8) -> Vec<TwistFamily> {
        let n0 = modulus_n0(forms);
        let mut out = Vec::new();
        for kappa in [1i8, -1] {
            for a in (1..n0).step_by(2) {
                if a % 8 != 1 && a % 8 != 5 {
                    continue;
                }
                if gcd(a, n0) != 1 {
                    continue;
                }
                let fam = TwistFamily {
                    forms: forms.to_vec(),
                    n0,
                    kappa,
                    residue: a,
                    required_sign,
                };
                if fam.sign_consistent() {
                    out.push(fam);
                }
            }
        }
        out
    }

    /// Members with X1 < |d| ≤ X2, ascending |d|.
    ///
    /// Exactly the fundamental d in the class with the required root numbers;
    /// the congruence already forces d ≡ 1 (mod 4), oddness, and coprimality
    /// to N₀ and every 2N_j, so beyond it only squarefreeness and the per-form
    /// sign check are applied. Needs `table` to cover √X2.
    pub fn enumerate(
        &self,
        table: &PrimeTable,
        x1: f64,
        x2: f64,
    ) -> Result<Vec<FundamentalDiscriminant>> {
        if !(x1 >= 0.0 && x1 < x2) {
            if x1 == x2 {
                return Ok(Vec::new());
            }
            return Err(Error::InvalidArgument(format!(
                "invalid range ({x1}, {x2}]"
            )));
        }
        let hi = x2.floor() as u64;
        if hi < 2 {
            return Ok(Vec::new());
        }
        let sqrt_hi = (hi as f64).sqrt() as u64 + 1;
        if table.limit() < sqrt_hi {
            return Err(Error::InvalidArgument(format!(
                "prime table limit {} below √X2 ≈ {sqrt_hi}",
                table.limit()
            )));
        }
        let lo = (x1.floor() as u64) + 1;
        let lo = lo.max(2); // |d| = 1 is excluded from every family
        if lo > hi {
            return Ok(Vec::new());
        }
        // squarefree flags over the window [lo, hi]
        let len = (hi - lo + 1) as usize;
        let mut squarefree = vec![true; len];
        for &p in table.primes() {
            let p2 = match p.checked_mul(p) {
                Some(v) if v <= hi => v,
                _ => break,
            };
            let mut m = lo.div_ceil(p2) * p2;
            while m <= hi {
                squarefree[(m - lo) as usize] = false;
                m += p2;
            }
        }
        // walk the residue class
        let mut out = Vec::new();
        let residue_of = |abs: u64| -> u64 {
            let d = self.kappa as i64 * abs as i64;
            d.rem_euclid(self.n0 as i64) as u64
        };
        // first |d| ≥ lo with d in the class
        let mut abs = lo;
        while abs <= hi && residue_of(abs) != self.residue {
            abs += 1;
        }
        while abs <= hi {
            if squarefree[(abs - lo) as usize] {
                let d = self.kappa as i64 * abs as i64;
                let ok = self
                    .forms
                    .iter()
                    .all(|&f| root_number_twist(f, d).map_or(false, |e| e == self.required_sign as i32));
                if ok || self.forms.is_empty() {
                    // squarefree by the sieve and ≡ 1 (mod 4) by the class
                    out.push(FundamentalDiscriminant::new_unchecked(d));
                }
            }
            abs += self.n0;
        }
        Ok(out)
    }
}
