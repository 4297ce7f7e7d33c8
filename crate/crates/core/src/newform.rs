//! Newforms and their normalized Hecke eigenvalues λ_f(n).
//!
//! A `Newform` is a realized eigenvalue table over a prime range, built either
//! from an elliptic curve by point counting (weight 2) or from a coefficient
//! file. Eigenvalues extend multiplicatively with the Hecke recursion
//! λ(p^{j+1}) = λ(p)λ(p^j) − [p∤N]·λ(p^{j−1}).

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use crate::curve::EllipticCurveSpec;
use crate::error::Error;
use crate::primes::PrimeTable;
use crate::Result;

/// Where a form's eigenvalues come from.
#[derive(Debug, Clone)]
pub enum EigenvalueSource {
    Curve(EllipticCurveSpec),
    CoefficientFile(std::path::PathBuf),
}

/// Declared data of a newform: level, even weight, root number, eigenvalues.
#[derive(Debug, Clone)]
pub struct NewformSpec {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub epsilon: i8,
    pub source: EigenvalueSource,
}

/// Level and root number, the part of a form that family sieves need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormParams {
    pub level: u64,
    pub epsilon: i8,
}

impl NewformSpec {
    pub fn from_curve(curve: EllipticCurveSpec) -> Self {
        Self {
            label: curve.label.clone(),
            level: curve.conductor,
            weight: 2,
            epsilon: curve.epsilon,
            source: EigenvalueSource::Curve(curve),
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let header = read_coefficient_header(path.as_ref())?;
        Ok(Self {
            label: path.as_ref().display().to_string(),
            level: header.0,
            weight: header.1,
            epsilon: header.2,
            source: EigenvalueSource::CoefficientFile(path.as_ref().to_path_buf()),
        })
    }

    /// Build the eigenvalue table for all primes of `table`.
    pub fn realize(&self, table: Arc<PrimeTable>) -> Result<Newform> {
        let lambda_p = match &self.source {
            EigenvalueSource::Curve(curve) => {
                if self.weight != 2 {
                    return Err(Error::InvalidArgument(
                        "curve-backed forms have weight 2".into(),
                    ));
                }
                curve
                    .ap_table(table.primes())
                    .iter()
                    .zip(table.primes())
                    .map(|(ap, &p)| ap.map(|a| a as f64 / (p as f64).sqrt()))
                    .collect()
            }
            EigenvalueSource::CoefficientFile(path) => {
                let file = read_coefficient_file(path)?;
                if (file.level, file.weight, file.epsilon)
                    != (self.level, self.weight, self.epsilon)
                {
                    return Err(Error::CoefficientFile(format!(
                        "header of {} does not match the declared form",
                        path.display()
                    )));
                }
                let mut v = vec![None; table.primes().len()];
                for (i, &p) in table.primes().iter().enumerate() {
                    if let Some(&l) = file.lambda.get(&p) {
                        v[i] = Some(l);
                    }
                }
                v
            }
        };
        Ok(Newform {
            label: self.label.clone(),
            level: self.level,
            weight: self.weight,
            epsilon: self.epsilon,
            table,
            lambda_p,
        })
    }
}

/// A newform with its eigenvalue table realized over a prime range.
#[derive(Debug, Clone)]
pub struct Newform {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub epsilon: i8,
    table: Arc<PrimeTable>,
    /// λ_f(p) aligned with `table.primes()`; `None` marks a prime with no
    /// available data (model-bad prime without local input).
    lambda_p: Vec<Option<f64>>,
}

impl Newform {
    pub fn params(&self) -> FormParams {
        FormParams {
            level: self.level,
            epsilon: self.epsilon,
        }
    }

    pub fn prime_table(&self) -> &Arc<PrimeTable> {
        &self.table
    }

    /// λ_f(p) by prime index into `prime_table().primes()`.
    pub fn lambda_at_index(&self, idx: usize) -> Option<f64> {
        self.lambda_p[idx]
    }

    /// λ_f(p) for a prime p within the table range.
    pub fn lambda_p(&self, p: u64) -> Result<f64> {
        if p > self.table.limit() {
            return Err(Error::MissingCoefficient {
                p,
                limit: self.table.limit(),
            });
        }
        let idx = self
            .table
            .primes()
            .binary_search(&p)
            .map_err(|_| Error::InvalidArgument(format!("{p} is not prime")))?;
        self.lambda_p[idx].ok_or(Error::MissingCoefficient {
            p,
            limit: self.table.limit(),
        })
    }

    /// λ_f(p^e) by the Hecke recursion (λ(p)^e at level-dividing primes).
    pub fn lambda_prime_power(&self, p: u64, e: u32) -> Result<f64> {
        if e == 0 {
            return Ok(1.0);
        }
        let lp = self.lambda_p(p)?;
        if self.level % p == 0 {
            return Ok(lp.powi(e as i32));
        }
        let mut prev = 1.0;
        let mut cur = lp;
        for _ in 1..e {
            let next = lp * cur - prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// λ_f(n) by multiplicativity.
    pub fn hecke_lambda(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("λ_f(0) undefined".into()));
        }
        let mut acc = 1.0;
        for (p, e) in self.table.factor(n)? {
            acc *= self.lambda_prime_power(p, e)?;
        }
        Ok(acc)
    }

    /// Λ_f(n): (α^j + β^j)·log p at n = p^j via the Newton recursion
    /// s_j = λ(p)·s_{j−1} − s_{j−2}, s₀ = 2, s₁ = λ(p); zero off prime powers.
    /// At level-dividing primes the degenerate Euler factor gives λ(p)^j·log p.
    pub fn vonmangoldt(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Ok(0.0);
        }
        let factors = self.table.factor(n)?;
        if factors.len() != 1 {
            return Ok(0.0);
        }
        let (p, e) = factors[0];
        let lp = self.lambda_p(p)?;
        let logp = (p as f64).ln();
        if self.level % p == 0 {
            return Ok(lp.powi(e as i32) * logp);
        }
        let mut prev = 2.0;
        let mut cur = lp;
        for _ in 1..e {
            let next = lp * cur - prev;
            prev = cur;
            cur = next;
        }
        Ok(cur * logp)
    }

    /// Coefficients λ_f(n)·χ_d(n) for 1 ≤ n ≤ n_max, by a multiplicative sieve.
    ///
    /// Index 0 is unused. Errors if the prime table cannot cover n_max.
    pub fn twisted_coefficients(&self, d: i64, n_max: u64) -> Result<Vec<f64>> {
        if n_max > self.table.limit() {
            return Err(Error::TruncationBudget {
                needed: n_max,
                limit: self.table.limit(),
            });
        }
        let n_max = n_max as usize;
        let mut out = vec![0.0f64; n_max + 1];
        if n_max >= 1 {
            out[1] = 1.0;
        }
        // prime-power values first, then multiplicative fill via lpf
        for &p in self.table.primes() {
            if p as usize > n_max {
                break;
            }
            let chi = crate::kronecker(d, p) as f64;
            let lp = match self.lambda_p(p) {
                Ok(l) => l,
                Err(Error::MissingCoefficient { .. }) => {
                    log::warn!("{}: no λ({p}); its prime powers contribute 0", self.label);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let t = lp * chi;
            let good = self.level % p != 0;
            let chi2 = if good { chi * chi } else { 0.0 };
            let mut prev = 1.0;
            let mut cur = t;
            let mut pe = p as usize;
            loop {
                out[pe] = cur;
                match pe.checked_mul(p as usize) {
                    Some(next) if next <= n_max => {
                        let nxt = t * cur - chi2 * prev;
                        prev = cur;
                        cur = nxt;
                        pe = next;
                    }
                    _ => break,
                }
            }
        }
        for n in 2..=n_max {
            let p = self.table.lpf(n as u64) as usize;
            let mut pe = p;
            let mut m = n / p;
            while m % p == 0 {
                pe *= p;
                m /= p;
            }
            if m > 1 {
                out[n] = out[pe] * out[m];
            }
        }
        Ok(out)
    }
}

struct CoefficientFile {
    level: u64,
    weight: u32,
    epsilon: i8,
    lambda: std::collections::BTreeMap<u64, f64>,
}

fn parse_header(line: &str, path: &Path) -> Result<(u64, u32, i8)> {
    let mut it = line.split_whitespace();
    let bad =
        |what: &str| Error::CoefficientFile(format!("{}: bad header field {what}", path.display()));
    let level = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("level"))?;
    let weight: u32 = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("weight"))?;
    let epsilon: i8 = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("epsilon"))?;
    if weight == 0 || weight % 2 != 0 {
        return Err(bad("weight (must be even and positive)"));
    }
    if !matches!(epsilon, 1 | -1) {
        return Err(bad("epsilon (must be ±1)"));
    }
    Ok((level, weight, epsilon))
}

fn read_coefficient_header(path: &Path) -> Result<(u64, u32, i8)> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::CoefficientFile(format!("{}: empty file", path.display())))??;
    parse_header(&first, path)
}

fn read_coefficient_file(path: &Path) -> Result<CoefficientFile> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::CoefficientFile(format!("{}: empty file", path.display())))??;
    let (level, weight, epsilon) = parse_header(&first, path)?;
    let mut lambda = std::collections::BTreeMap::new();
    for (no, line) in lines.enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut it = body.split_whitespace();
        let err = |what: &str| {
            Error::CoefficientFile(format!("{}: line {}: {what}", path.display(), no + 2))
        };
        let p: u64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("bad prime"))?;
        let l: f64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("bad eigenvalue"))?;
        // Deligne at good primes, |λ| ≤ 1 at level-dividing primes
        let bound = if level % p == 0 { 1.0 } else { 2.0 };
        if !l.is_finite() || l.abs() > bound + 1e-9 {
            return Err(err(&format!("eigenvalue {l} out of range (|λ| ≤ {bound})")));
        }
        lambda.insert(p, l);
    }
    Ok(CoefficientFile {
        level,
        weight,
        epsilon,
        lambda,
    })
}

/// Write a coefficient file: header `N k epsilon`, then `p lambda` per line.
pub fn write_coefficient_file(
    path: &Path,
    level: u64,
    weight: u32,
    epsilon: i8,
    entries: &[(u64, f64)],
) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{level} {weight} {epsilon}")?;
    for (p, l) in entries {
        writeln!(f, "{p} {l:.17e}")?;
    }
    Ok(())
}
