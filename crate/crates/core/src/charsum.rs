//! Smoothed character sums Σ_{d∈ℱ(κ,a), v|d} χ_d(n)·Φ(κd/X) over a twist
//! family class, and their predicted main terms.

use serde::Serialize;

use crate::error::Error;
use crate::family::TwistFamily;
use crate::kronecker::kronecker;
use crate::primes::PrimeTable;
use crate::reduce::ordered_par_sum;
use crate::smooth::SmoothCutoff;
use crate::Result;

/// A family class enumerated once over the support of Φ(κd/X), with weights,
/// reused across many (n, v) queries.
#[derive(Debug, Clone)]
pub struct FamilyScan {
    pub family: TwistFamily,
    pub x_scale: f64,
    /// (d, Φ(|d|/X)) ascending in |d|, restricted to Φ > 0.
    pub members: Vec<(i64, f64)>,
}

impl FamilyScan {
    pub fn build(
        family: &TwistFamily,
        table: &PrimeTable,
        x_scale: f64,
        cutoff: &SmoothCutoff,
    ) -> Result<Self> {
        if !(x_scale > 0.0) {
            return Err(Error::InvalidArgument("X must be positive".into()));
        }
        let members = family
            .enumerate(table, 0.5 * x_scale - 1.0, 2.5 * x_scale)?
            .into_iter()
            .filter_map(|d| {
                let w = cutoff.eval(d.abs() as f64 / x_scale);
                (w > 0.0).then_some((d.value(), w))
            })
            .collect();
        Ok(Self {
            family: family.clone(),
            x_scale,
            members,
        })
    }

    /// Σ Φ(κd/X) over the class.
    pub fn weighted_count(&self) -> f64 {
        ordered_par_sum(&self.members, |&(_, w)| w)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_charsum_args(scan: &FamilyScan, table: &PrimeTable, n: u64, v: u64) -> Result<()> {
    if n == 0 || v == 0 {
        return Err(Error::InvalidArgument("n and v must be positive".into()));
    }
    let n0 = scan.family.n0;
    if gcd(n, n0) != 1 {
        return Err(Error::InvalidArgument(format!("(n, N₀) = ({n}, {n0}) > 1")));
    }
    if gcd(v, n0) != 1 {
        return Err(Error::InvalidArgument(format!("(v, N₀) = ({v}, {n0}) > 1")));
    }
    if gcd(n, v) != 1 {
        return Err(Error::InvalidArgument(format!("(n, v) = ({n}, {v}) > 1")));
    }
    if !table.is_squarefree(v)? {
        return Err(Error::InvalidArgument(format!("v = {v} is not squarefree")));
    }
    Ok(())
}

/// Exact Σ_{d, v|d} χ_d(n)·Φ(κd/X) by direct enumeration over the scan.
///
/// Outside the regime v·√n ≤ X^{½−ε} the sum is still computed; a warning is
/// logged because the main-term comparison degrades there.
pub fn char_sum(
    scan: &FamilyScan,
    table: &PrimeTable,
    n: u64,
    v: u64,
    epsilon: f64,
) -> Result<f64> {
    check_charsum_args(scan, table, n, v)?;
    let budget = scan.x_scale.powf(0.5 - epsilon);
    if v as f64 * (n as f64).sqrt() > budget {
        log::warn!(
            "char_sum outside main-term regime: v√n = {} > X^(1/2−ε) = {budget:.3}",
            v as f64 * (n as f64).sqrt()
        );
    }
    Ok(ordered_par_sum(&scan.members, |&(d, w)| {
        if d.unsigned_abs() % v != 0 {
            return 0.0;
        }
        kronecker(d, n) as f64 * w
    }))
}

/// Predicted main term: δ(n=□)·(X/(vN₀))·Π_{p|nv}(1+1/p)^{-1}·Π_{p∤N₀}(1−1/p²)·Φ̂(0),
/// with the infinite product in closed form ζ(2)^{-1}·Π_{p|N₀}(1−1/p²)^{-1}.
pub fn main_term(
    family: &TwistFamily,
    table: &PrimeTable,
    n: u64,
    v: u64,
    x_scale: f64,
    cutoff: &SmoothCutoff,
) -> Result<f64> {
    if n == 0 || v == 0 {
        return Err(Error::InvalidArgument("n and v must be positive".into()));
    }
    let root = (n as f64).sqrt().round() as u64;
    if root * root != n {
        return Ok(0.0);
    }
    let mut local = 1.0;
    let mut seen = Vec::new();
    for &(p, _) in table.factor(n)?.iter().chain(table.factor(v)?.iter()) {
        if !seen.contains(&p) {
            seen.push(p);
            local *= 1.0 / (1.0 + 1.0 / p as f64);
        }
    }
    let zeta2_inv = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let mut away_n0 = zeta2_inv;
    for (p, _) in table.factor(family.n0)? {
        let p = p as f64;
        away_n0 /= 1.0 - 1.0 / (p * p);
    }
    Ok(x_scale / (v as f64 * family.n0 as f64) * local * away_n0 * cutoff.hat_zero())
}

/// One CLI record for a character-sum comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CharSumRecord {
    pub n: u64,
    pub v: u64,
    pub x_scale: f64,
    pub lhs: f64,
    pub main: f64,
    pub error: f64,
    /// lhs normalized by X^{1/2}·√n, the error-term scale for nonsquare n.
    pub ratio: f64,
}

pub fn char_sum_record(
    scan: &FamilyScan,
    table: &PrimeTable,
    n: u64,
    v: u64,
    cutoff: &SmoothCutoff,
    epsilon: f64,
) -> Result<CharSumRecord> {
    let lhs = char_sum(scan, table, n, v, epsilon)?;
    let main = main_term(&scan.family, table, n, v, scan.x_scale, cutoff)?;
    Ok(CharSumRecord {
        n,
        v,
        x_scale: scan.x_scale,
        lhs,
        main,
        error: lhs - main,
        ratio: lhs / (scan.x_scale.sqrt() * (n as f64).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> (TwistFamily, PrimeTable, SmoothCutoff) {
        let fam = TwistFamily::new(Vec::new(), 1, 1, -1).unwrap();
        let table = PrimeTable::new(2_000);
        let cutoff = SmoothCutoff::new().unwrap();
        (fam, table, cutoff)
    }

    #[test]
    fn trivial_character_gives_weighted_count() {
        let (fam, table, cutoff) = fixture();
        let scan = FamilyScan::build(&fam, &table, 400.0, &cutoff).unwrap();
        let s = char_sum(&scan, &table, 1, 1, 0.05).unwrap();
        assert_eq!(s, scan.weighted_count());
        assert!(s > 0.0);
    }

    #[test]
    fn preconditions_rejected() {
        let (fam, table, cutoff) = fixture();
        let scan = FamilyScan::build(&fam, &table, 400.0, &cutoff).unwrap();
        // (n, v) > 1
        assert!(char_sum(&scan, &table, 15, 3, 0.05).is_err());
        // n even shares a factor with N₀ = 8
        assert!(char_sum(&scan, &table, 4, 1, 0.05).is_err());
        // v not squarefree
        assert!(char_sum(&scan, &table, 1, 9, 0.05).is_err());
    }

    #[test]
    fn main_term_values() {
        let (fam, table, cutoff) = fixture();
        // nonsquare n → 0
        assert_eq!(main_term(&fam, &table, 5, 1, 1e6, &cutoff).unwrap(), 0.0);
        // ratio main(9,1)/main(1,1) = (1+1/3)^{-1} = 3/4
        let m9 = main_term(&fam, &table, 9, 1, 1e6, &cutoff).unwrap();
        let m1 = main_term(&fam, &table, 1, 1, 1e6, &cutoff).unwrap();
        assert!((m9 / m1 - 0.75).abs() < 1e-14);
        // closed form at n = v = 1: (X/8)·ζ(2)^{-1}(1−1/4)^{-1}·(3/2)
        let expect = 1e6 / 8.0 * (6.0 / std::f64::consts::PI.powi(2)) / 0.75 * cutoff.hat_zero();
        assert!((m1 - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn v_restricts_to_multiples() {
        let (fam, table, cutoff) = fixture();
        let scan = FamilyScan::build(&fam, &table, 500.0, &cutoff).unwrap();
        let all = char_sum(&scan, &table, 1, 1, 0.05).unwrap();
        let v3 = char_sum(&scan, &table, 1, 3, 0.05).unwrap();
        assert!(v3 > 0.0 && v3 < all);
        let direct: f64 = scan
            .members
            .iter()
            .filter(|(d, _)| d.unsigned_abs() % 3 == 0)
            .map(|&(_, w)| w)
            .sum();
        assert!((v3 - direct).abs() < 1e-12);
    }

    #[test]
    fn threadcount_invariance() {
        let (fam, table, cutoff) = fixture();
        let scan = FamilyScan::build(&fam, &table, 800.0, &cutoff).unwrap();
        let reference = char_sum(&scan, &table, 21, 1, 0.05).unwrap();
        for threads in [1usize, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let got = pool.install(|| char_sum(&scan, &table, 21, 1, 0.05).unwrap());
            assert_eq!(got.to_bits(), reference.to_bits());
        }
    }

    /// Splitting the d-range produces scans whose member lists concatenate to
    /// the full list, and the sums recompose to the full sum.
    #[test]
    fn partition_recomposition() {
        let (fam, table, cutoff) = fixture();
        let full = FamilyScan::build(&fam, &table, 700.0, &cutoff).unwrap();
        let sum_full = char_sum(&full, &table, 17, 1, 0.05).unwrap();
        // partition the member list at arbitrary cut points
        for cut in [10usize, 37, 100] {
            if cut >= full.members.len() {
                continue;
            }
            let (a, b) = full.members.split_at(cut);
            let term = |d: i64, w: f64| kronecker(d, 17) as f64 * w;
            let part: f64 = a.iter().map(|&(d, w)| term(d, w)).sum::<f64>()
                + b.iter().map(|&(d, w)| term(d, w)).sum::<f64>();
            assert!((part - sum_full).abs() <= 1e-10 * (1.0 + sum_full.abs()));
        }
    }
}
