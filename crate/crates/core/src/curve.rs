//! Elliptic curves y² = F(x) for monic integer cubics F: trace-of-Frobenius
//! computation by exact point counting, with externally supplied local data at
//! primes where the model degenerates.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::cubic::CubicPoly;
use crate::error::Error;
use crate::Result;

/// Environment variable naming the on-disk cache directory for computed
/// eigenvalue tables. Unset means no caching.
pub const CACHE_DIR_ENV: &str = "TWISTLAB_CACHE_DIR";

/// A curve given by y² = F(x), with conductor and root number as inputs.
///
/// `local_ap` supplies a_p at primes dividing N·disc(F), where counting on
/// this model is meaningless: for p | N the reduction-type value in
/// {−1, 0, +1}, and for good p dividing disc(F) only (model artifacts, e.g.
/// p = 2 for a completed-square model) the true a_p from a minimal model.
#[derive(Debug, Clone)]
pub struct EllipticCurveSpec {
    pub label: String,
    pub cubic: CubicPoly,
    pub conductor: u64,
    pub epsilon: i8,
    pub local_ap: BTreeMap<u64, i64>,
}

impl EllipticCurveSpec {
    pub fn new(
        label: impl Into<String>,
        cubic: CubicPoly,
        conductor: u64,
        epsilon: i8,
        local_ap: BTreeMap<u64, i64>,
    ) -> Result<Self> {
        if !cubic.is_squarefree() {
            return Err(Error::InvalidArgument(format!(
                "cubic {cubic} has zero discriminant"
            )));
        }
        if !matches!(epsilon, 1 | -1) {
            return Err(Error::InvalidArgument("epsilon must be ±1".into()));
        }
        for (&p, &ap) in &local_ap {
            if conductor % p == 0 && !matches!(ap, -1 | 0 | 1) {
                return Err(Error::InvalidArgument(format!(
                    "a_{p} = {ap} invalid at a prime of bad reduction"
                )));
            }
        }
        Ok(Self {
            label: label.into(),
            cubic,
            conductor,
            epsilon,
            local_ap,
        })
    }

    /// Whether counting on this model is valid at p.
    pub fn good_model_prime(&self, p: u64) -> bool {
        p % 2 == 1 && self.cubic.discriminant().rem_euclid(p as i128) != 0
    }

    /// a_p = p + 1 − #E(F_p) by exact counting; odd p not dividing disc(F).
    pub fn ap_point_count(&self, p: u64) -> Result<i64> {
        if !self.good_model_prime(p) {
            return Err(Error::BadReductionPrime { p });
        }
        let ap = ap_count(&self.cubic, p);
        let bound = 2.0 * (p as f64).sqrt();
        debug_assert!((ap as f64).abs() <= bound, "Hasse violated at p={p}: {ap}");
        Ok(ap)
    }

    /// a_p from counting or local data; `None` when no local value exists at
    /// a model-bad prime (callers skip the prime and the skip is logged).
    pub fn ap(&self, p: u64) -> Option<i64> {
        if self.good_model_prime(p) {
            Some(ap_count(&self.cubic, p))
        } else if let Some(&ap) = self.local_ap.get(&p) {
            Some(ap)
        } else {
            log::warn!(
                "curve {}: no local a_p at model-bad prime {p}; skipping",
                self.label
            );
            None
        }
    }

    /// a_p for every prime in `primes`, in order, parallel over primes and
    /// cached on disk when `TWISTLAB_CACHE_DIR` is set.
    pub fn ap_table(&self, primes: &[u64]) -> Vec<Option<i64>> {
        let limit = primes.last().copied().unwrap_or(0);
        if let Some(cached) = self.read_cache(limit, primes.len()) {
            return cached;
        }
        let table: Vec<Option<i64>> = primes.par_iter().map(|&p| self.ap(p)).collect();
        self.write_cache(limit, &table);
        table
    }

    fn cache_path(&self, limit: u64) -> Option<PathBuf> {
        let dir = std::env::var_os(CACHE_DIR_ENV)?;
        let c = self.cubic;
        Some(PathBuf::from(dir).join(format!(
            "ap_{}_{}_{}_N{}_L{}.bin",
            c.c2, c.c1, c.c0, self.conductor, limit
        )))
    }

    fn read_cache(&self, limit: u64, count: usize) -> Option<Vec<Option<i64>>> {
        let path = self.cache_path(limit)?;
        let mut buf = Vec::new();
        std::fs::File::open(path).ok()?.read_to_end(&mut buf).ok()?;
        if buf.len() != count * 8 {
            return None;
        }
        Some(
            buf.chunks_exact(8)
                .map(|c| {
                    let v = i64::from_le_bytes(c.try_into().unwrap());
                    (v != i64::MIN).then_some(v)
                })
                .collect(),
        )
    }

    fn write_cache(&self, limit: u64, table: &[Option<i64>]) {
        let Some(path) = self.cache_path(limit) else {
            return;
        };
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        let mut buf = Vec::with_capacity(table.len() * 8);
        for v in table {
            buf.extend_from_slice(&v.unwrap_or(i64::MIN).to_le_bytes());
        }
        if let Ok(mut f) = std::fs::File::create(&path) {
            let _ = f.write_all(&buf);
        }
    }
}

/// a_p = −Σ_x χ_p(F(x)) by one pass of forward differences plus a square
/// table; valid for odd p with F squarefree mod p.
fn ap_count(f: &CubicPoly, p: u64) -> i64 {
    debug_assert!(p % 2 == 1 && p < (1 << 31));
    // squares mod p as a bitset
    let words = (p as usize + 63) / 64;
    let mut squares = vec![0u64; words];
    let mut sq = 0u64; // x² mod p, incrementally
    for x in 0..=(p - 1) / 2 {
        squares[(sq / 64) as usize] |= 1 << (sq % 64);
        sq += 2 * x + 1;
        while sq >= p {
            sq -= p;
        }
    }
    // F(x) by running forward differences: Δ³F = 6
    let md = |v: i64| v.rem_euclid(p as i64) as u64;
    let mut val = md(f.c0);
    let mut d1 = md(1 + f.c2 + f.c1); // F(1) − F(0)
    let mut d2 = md(6 + 2 * f.c2); // second difference at x = 0
    let mut sum = 0i64;
    for _ in 0..p {
        if val != 0 {
            if squares[(val / 64) as usize] >> (val % 64) & 1 == 1 {
                sum += 1;
            } else {
                sum -= 1;
            }
        }
        val += d1;
        if val >= p {
            val -= p;
        }
        d1 += d2;
        if d1 >= p {
            d1 -= p;
        }
        d2 += 6;
        while d2 >= p {
            d2 -= p;
        }
    }
    -sum
}

/// The rank-one conductor-37 curve in completed-square form y² = x³ − 16x + 16
/// (isomorphic to y² + y = x³ − x). disc(F) = 2⁸·37, so p = 2 carries the
/// minimal-model value a₂ = −2; at p = 37 the reduction is nonsplit
/// multiplicative, a₃₇ = −1.
pub fn curve_37a() -> EllipticCurveSpec {
    EllipticCurveSpec::new(
        "37a",
        CubicPoly::new(0, -16, 16),
        37,
        -1,
        BTreeMap::from([(2, -2), (37, -1)]),
    )
    .unwrap()
}

/// The rank-zero conductor-32 curve y² = x³ − x (additive reduction at 2).
pub fn curve_32a() -> EllipticCurveSpec {
    EllipticCurveSpec::new(
        "32a",
        CubicPoly::new(0, -1, 0),
        32,
        1,
        BTreeMap::from([(2, 0)]),
    )
    .unwrap()
}

/// Curve registry for CLI `--curve` flags.
pub fn builtin_curve(name: &str) -> Result<EllipticCurveSpec> {
    match name {
        "37a" => Ok(curve_37a()),
        "32a" => Ok(curve_32a()),
        other => Err(Error::InvalidArgument(format!(
            "unknown builtin curve `{other}` (available: 37a, 32a)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: enumerate affine points of y² = F(x) directly.
    fn ap_naive(f: &CubicPoly, p: u64) -> i64 {
        let mut affine = 0u64;
        for x in 0..p {
            let fx = f.eval(x as i64).rem_euclid(p as i128) as u64;
            for y in 0..p {
                if (y * y) % p == fx {
                    affine += 1;
                }
            }
        }
        p as i64 + 1 - (affine as i64 + 1)
    }

    #[test]
    fn counts_match_naive_enumeration() {
        let curves = [
            CubicPoly::new(0, -1, 0),
            CubicPoly::new(0, -16, 16),
            CubicPoly::new(1, 3, -2),
        ];
        for f in curves {
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 101] {
                if f.discriminant().rem_euclid(p as i128) == 0 {
                    continue;
                }
                assert_eq!(ap_count(&f, p), ap_naive(&f, p), "f={f:?} p={p}");
            }
        }
    }

    #[test]
    fn frozen_congruent_curve_values() {
        let e = curve_32a();
        // 4 projective points over F_3
        assert_eq!(e.ap_point_count(3).unwrap(), 0);
        assert_eq!(e.ap_point_count(5).unwrap(), -2);
    }

    #[test]
    fn hasse_bound_holds() {
        let e = curve_37a();
        for p in [3u64, 5, 7, 11, 13, 41, 43, 97, 9973] {
            let ap = e.ap_point_count(p).unwrap();
            assert!((ap * ap) as u64 <= 4 * p, "p={p} ap={ap}");
        }
    }

    #[test]
    fn bad_model_prime_rejected_but_local_value_served() {
        let e = curve_37a();
        assert!(matches!(
            e.ap_point_count(2),
            Err(Error::BadReductionPrime { p: 2 })
        ));
        assert_eq!(e.ap(2), Some(-2));
        assert_eq!(e.ap(37), Some(-1));
    }

    /// a₂ = −2 for the 37 curve, re-derived by enumerating the minimal model
    /// y² + y = x³ − x over F₂ (2 affine points per x, 5 points total).
    #[test]
    fn local_a2_matches_minimal_model_count() {
        let p = 2i64;
        let mut affine = 0;
        for x in 0..p {
            for y in 0..p {
                if (y * y + y).rem_euclid(p) == (x * x * x - x).rem_euclid(p) {
                    affine += 1;
                }
            }
        }
        let a2 = p + 1 - (affine + 1);
        assert_eq!(a2, -2);
        assert_eq!(curve_37a().local_ap[&2], a2);
    }

    /// a₃₇ = −1: nonsplit multiplicative reduction. The reduced cubic has a
    /// double root at x ≡ 20 (mod 37) and node slope² ≡ 23, a non-residue.
    #[test]
    fn local_a37_matches_node_analysis() {
        let f = curve_37a().cubic;
        assert_eq!(f.eval(20).rem_euclid(37), 0);
        // derivative 3x² − 16 also vanishes at 20
        assert_eq!((3 * 20 * 20 - 16i64).rem_euclid(37), 0);
        // F(x) ≡ (x − 20)²(x − 34) mod 37, slope² ≡ 20 − 34 ≡ 23
        assert_eq!(crate::kronecker(23, 37), -1);
        assert_eq!(curve_37a().local_ap[&37], -1);
    }

    #[test]
    fn ap_table_roundtrips_through_cache() {
        let dir = tempfile::tempdir().unwrap();
        // env mutation is process-global; keep the variable scoped to one test
        std::env::set_var(CACHE_DIR_ENV, dir.path());
        let e = curve_37a();
        let primes = crate::primes::PrimeTable::new(500).primes().to_vec();
        let fresh = e.ap_table(&primes);
        let cached = e.ap_table(&primes);
        std::env::remove_var(CACHE_DIR_ENV);
        assert_eq!(fresh, cached);
        let uncached = e.ap_table(&primes);
        assert_eq!(fresh, uncached);
    }
}
