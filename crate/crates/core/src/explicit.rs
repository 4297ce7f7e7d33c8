//! Explicit-formula zero sums: for a Fourier pair (h, ĥ) with ĥ supported in
//! [−1, 1] and dilation L,
//!
//!   Σ_γ h(γL/2π) = archimedean term − prime side,
//!
//! summed over the nontrivial zeros of Π_j L(s, f_j⊗χ_d). The right-hand side
//! is what gets computed; the compact support of ĥ truncates the prime side
//! exactly at e^L.
//!
//! The archimedean integral (1/2π)∫h(tL/2π)[Σ_j log(N_j d²/4π²) +
//! 2Re ψ(k_j/2 + it)]dt is evaluated on the Fourier side, where the Poisson
//! kernels under ψ integrate against ĥ in closed form; for the Fejér kernel
//! the whole term reduces to digamma/trigamma values plus a geometrically
//! convergent correction. Off-GRH zeros would make individual h(γL/2π)
//! complex; the right-hand side is always real and is what this module
//! reports.

use std::sync::Arc;

use serde::Serialize;

use crate::charsum::{main_term, FamilyScan};
use crate::error::Error;
use crate::kernel::{KernelPair, KernelShape};
use crate::kronecker::kronecker;
use crate::newform::Newform;
use crate::primes::PrimeTable;
use crate::reduce::{ordered_par_sum, KahanSum};
use crate::smooth::SmoothCutoff;
use crate::special::{digamma, trigamma};
use crate::Result;

/// ψ-side of the archimedean term for one gamma factor Γ(s + (k−1)/2):
/// (1/L)∫h(u)·2Re ψ(a + 2πiu/L)du with a = k/2, via
/// (2/L)[ĥ(0)ψ(a) + Σ_{m≥0} R_m] and, for Fejér,
/// Σ R_m = (1/L)[ψ′(a) − Σ_m e^{−L(m+a)}/(m+a)²].
fn digamma_integral(kernel: &KernelPair, a: f64) -> f64 {
    let l = kernel.dilation;
    match kernel.shape {
        KernelShape::Fejer => {
            let mut tail = KahanSum::new();
            let mut m = 0.0f64;
            loop {
                let c = l * (m + a);
                if c > 700.0 {
                    break;
                }
                let term = (-c).exp() / ((m + a) * (m + a));
                tail.add(term);
                if term < 1e-18 {
                    break;
                }
                m += 1.0;
            }
            let r_sum = (trigamma(a) - tail.value()) / l;
            2.0 / l * kernel.scale * (digamma(a) + r_sum)
        }
    }
}

/// Archimedean term of the explicit formula for the form set at twist d.
pub fn archimedean_term(d: i64, forms: &[(u64, u32)], kernel: &KernelPair) -> f64 {
    let l = kernel.dilation;
    let mut acc = 0.0;
    for &(level, weight) in forms {
        let log_q2 = (level as f64).ln() + 2.0 * (d.unsigned_abs() as f64).ln()
            - 2.0 * (2.0 * std::f64::consts::PI).ln();
        acc += kernel.h_hat_zero() / l * log_q2;
        acc += digamma_integral(kernel, weight as f64 / 2.0);
    }
    acc
}

/// Per-prime coefficients of the prime side for a fixed form set and kernel:
/// contribution of p at twist d is even + χ_d(p)·odd whenever χ_d(p) ≠ 0.
#[derive(Debug, Clone)]
pub struct PrimeSideTable {
    pub cutoff: u64,
    dilation: f64,
    entries: Vec<(u64, f64, f64)>,
}

impl PrimeSideTable {
    /// Build for all prime powers p^j ≤ e^L.
    pub fn build(forms: &[Arc<Newform>], kernel: &KernelPair) -> Result<Self> {
        let l = kernel.dilation;
        let cutoff = l.exp().floor() as u64;
        let mut entries = Vec::new();
        if cutoff < 2 || forms.is_empty() {
            return Ok(Self {
                cutoff,
                dilation: l,
                entries,
            });
        }
        let table = forms[0].prime_table();
        for f in forms {
            if f.prime_table().limit() < cutoff {
                return Err(Error::TruncationBudget {
                    needed: cutoff,
                    limit: f.prime_table().limit(),
                });
            }
        }
        for (idx, &p) in table.primes().iter().enumerate() {
            if p > cutoff {
                break;
            }
            let logp = (p as f64).ln();
            let mut odd = 0.0;
            let mut even = 0.0;
            for form in forms {
                let Some(lp) = form.lambda_at_index(idx) else {
                    log::warn!("{}: prime {p} skipped in prime side", form.label);
                    continue;
                };
                let good = form.level % p != 0;
                // s_j = tr(Frob^j): Newton recursion for good p, λ^j else
                let mut s_prev = 2.0;
                let mut s_cur = lp;
                let mut pj = p;
                let mut j = 1u32;
                loop {
                    let coef = s_cur * logp / (pj as f64).sqrt()
                        * kernel.big_h((pj as f64).ln() / l)
                        / l;
                    if j % 2 == 1 {
                        odd += coef;
                    } else {
                        even += coef;
                    }
                    match pj.checked_mul(p) {
                        Some(next) if next <= cutoff => {
                            let s_next = if good {
                                lp * s_cur - s_prev
                            } else {
                                lp * s_cur
                            };
                            s_prev = s_cur;
                            s_cur = s_next;
                            pj = next;
                            j += 1;
                        }
                        _ => break,
                    }
                }
            }
            if odd != 0.0 || even != 0.0 {
                entries.push((p, odd, even));
            }
        }
        Ok(Self {
            cutoff,
            dilation: l,
            entries,
        })
    }

    /// (1/L)·Σ_{n ≤ e^L} Λ_ℒ(n)/√n · χ_d(n) · H(log n / L).
    pub fn eval(&self, d: i64) -> f64 {
        let mut acc = KahanSum::new();
        for &(p, odd, even) in &self.entries {
            let chi = kronecker(d, p);
            if chi != 0 {
                acc.add(even + chi as f64 * odd);
            }
        }
        acc.value()
    }

    pub fn dilation(&self) -> f64 {
        self.dilation
    }
}

/// A family scan equipped with everything needed to evaluate zero sums.
pub struct ZeroSumScan {
    pub scan: FamilyScan,
    pub forms: Vec<Arc<Newform>>,
    pub kernel: KernelPair,
    prime_side: PrimeSideTable,
    /// archimedean term = arch_const + arch_slope·log|d|
    arch_const: f64,
    arch_slope: f64,
}

impl ZeroSumScan {
    pub fn new(scan: FamilyScan, forms: Vec<Arc<Newform>>, kernel: KernelPair) -> Result<Self> {
        let prime_side = PrimeSideTable::build(&forms, &kernel)?;
        let l = kernel.dilation;
        let mut arch_const = 0.0;
        for f in &forms {
            arch_const += kernel.h_hat_zero() / l
                * ((f.level as f64).ln() - 2.0 * (2.0 * std::f64::consts::PI).ln());
            arch_const += digamma_integral(&kernel, f.weight as f64 / 2.0);
        }
        let arch_slope = kernel.h_hat_zero() / l * 2.0 * forms.len() as f64;
        Ok(Self {
            scan,
            forms,
            kernel,
            prime_side,
            arch_const,
            arch_slope,
        })
    }

    pub fn archimedean(&self, d: i64) -> f64 {
        self.arch_const + self.arch_slope * (d.unsigned_abs() as f64).ln()
    }

    pub fn prime_side(&self, d: i64) -> f64 {
        self.prime_side.eval(d)
    }

    /// Σ_γ h(γL/2π) over zeros of Π_j L(s, f_j⊗χ_d), via the formula RHS.
    pub fn zero_sum_proxy(&self, d: i64) -> f64 {
        self.archimedean(d) - self.prime_side(d)
    }

    /// S_{κ,a,v}(ℓ) = Σ_{d, v|d} [Σ_γ h(γL/2π)]·χ_d(ℓ)·Φ(κd/X).
    pub fn aggregate(&self, ell: u64, v: u64, table: &PrimeTable) -> Result<f64> {
        let n0 = self.scan.family.n0;
        if gcd(ell, n0 * v) != 1 {
            return Err(Error::InvalidArgument(format!(
                "(ℓ, N₀·v) = ({ell}, {}) > 1",
                n0 * v
            )));
        }
        if gcd(v, n0) != 1 || !table.is_squarefree(v)? {
            return Err(Error::InvalidArgument(format!(
                "v = {v} must be squarefree and coprime to N₀ = {n0}"
            )));
        }
        Ok(ordered_par_sum(&self.scan.members, |&(d, w)| {
            if d.unsigned_abs() % v != 0 {
                return 0.0;
            }
            let chi = kronecker(d, ell);
            if chi == 0 {
                return 0.0;
            }
            self.zero_sum_proxy(d) * chi as f64 * w
        }))
    }

    /// Predicted main term for square ℓ:
    /// M·(X/(vN₀))·Π_{p|ℓv}(1+1/p)^{-1}·Π_{p∤N₀}(1−1/p²)·Φ̂(0)·
    /// ((2 log X/L)·ĥ(0) + h(0)/2).
    pub fn aggregate_main_term(
        &self,
        ell: u64,
        v: u64,
        table: &PrimeTable,
        cutoff: &SmoothCutoff,
    ) -> Result<f64> {
        let m = self.forms.len() as f64;
        let base = main_term(&self.scan.family, table, ell, v, self.scan.x_scale, cutoff)?;
        let l = self.kernel.dilation;
        let bracket =
            2.0 * self.scan.x_scale.ln() / l * self.kernel.h_hat_zero() + self.kernel.h_zero() / 2.0;
        Ok(m * base * bracket)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Which Proposition-2 case an (ℓ, v) aggregate falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AggregateCase {
    Square,
    PrimeTimesSquare,
    Generic,
}

pub fn classify_ell(ell: u64, table: &PrimeTable) -> Result<(AggregateCase, Option<u64>)> {
    let mut odd_part = 1u64;
    for (p, e) in table.factor(ell)? {
        if e % 2 == 1 {
            odd_part = odd_part.checked_mul(p).ok_or_else(|| {
                Error::InvalidArgument("ℓ overflow".into())
            })?;
        }
    }
    Ok(match odd_part {
        1 => (AggregateCase::Square, None),
        p if table.is_prime(p) => (AggregateCase::PrimeTimesSquare, Some(p)),
        _ => (AggregateCase::Generic, None),
    })
}

/// One zero-sum aggregate with its case-specific normalization.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateRecord {
    pub ell: u64,
    pub v: u64,
    pub kappa: i8,
    pub residue: u64,
    pub x_scale: f64,
    pub dilation: f64,
    pub case: AggregateCase,
    pub observed: f64,
    /// Main term for the square case; None otherwise.
    pub predicted: Option<f64>,
    /// observed/predicted (square), or the bound-normalized magnitude
    /// |S|·(vLN₀/MX)·(√q/log q)·Π_{p|ℓv}(1+1/p) (prime·square), or
    /// |S|/(M·X^{1/2+3ε}·√ℓ·e^{L/4}) (generic).
    pub normalized: f64,
    pub epsilon: f64,
}

pub fn aggregate_record(
    zs: &ZeroSumScan,
    ell: u64,
    v: u64,
    table: &PrimeTable,
    cutoff: &SmoothCutoff,
    epsilon: f64,
) -> Result<AggregateRecord> {
    let observed = zs.aggregate(ell, v, table)?;
    let (case, q) = classify_ell(ell, table)?;
    let m = zs.forms.len() as f64;
    let x = zs.scan.x_scale;
    let l = zs.kernel.dilation;
    let n0 = zs.scan.family.n0 as f64;
    let (predicted, normalized) = match case {
        AggregateCase::Square => {
            let pred = zs.aggregate_main_term(ell, v, table, cutoff)?;
            (Some(pred), observed / pred)
        }
        AggregateCase::PrimeTimesSquare => {
            let q = q.unwrap() as f64;
            let mut local = 1.0;
            let mut seen = Vec::new();
            for &(p, _) in table.factor(ell)?.iter().chain(table.factor(v)?.iter()) {
                if !seen.contains(&p) {
                    seen.push(p);
                    local *= 1.0 + 1.0 / p as f64;
                }
            }
            let bound = m * x / (v as f64 * l * n0) * q.ln() / q.sqrt() / local;
            (None, observed.abs() / bound)
        }
        AggregateCase::Generic => {
            let bound = m * x.powf(0.5 + 3.0 * epsilon) * (ell as f64).sqrt() * (l / 4.0).exp();
            (None, observed.abs() / bound)
        }
    };
    Ok(AggregateRecord {
        ell,
        v,
        kappa: zs.scan.family.kappa,
        residue: zs.scan.family.residue,
        x_scale: x,
        dilation: l,
        case,
        observed,
        predicted,
        normalized,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_37a;
    use crate::family::TwistFamily;
    use crate::newform::NewformSpec;
    use crate::quad::integrate;

    fn form_37a(limit: u64) -> Arc<Newform> {
        Arc::new(
            NewformSpec::from_curve(curve_37a())
                .realize(Arc::new(PrimeTable::new(limit)))
                .unwrap(),
        )
    }

    #[test]
    fn archimedean_empty_and_linear() {
        let k = KernelPair::fejer(5.0).unwrap();
        assert_eq!(archimedean_term(1000, &[], &k), 0.0);
        let one = archimedean_term(1000, &[(37, 2)], &k);
        let doubled = archimedean_term(1000, &[(37, 2)], &k.scaled(2.0));
        assert!((doubled - 2.0 * one).abs() < 1e-13);
    }

    /// The Fejér closed form for the ψ-integral against assembling it from
    /// numerically integrated B_m = L∫₀¹ĥ(ξ)e^{−L(m+a)ξ}dξ plus analytic
    /// remainders beyond m = M₀.
    #[test]
    fn digamma_integral_against_quadrature() {
        for (l, a) in [(3.0, 1.0), (8.0, 1.0), (5.0, 2.0), (11.5, 1.0)] {
            let k = KernelPair::fejer(l).unwrap();
            let closed = digamma_integral(&k, a);
            let m0 = 300usize;
            let mut acc = -crate::special::EULER_GAMMA; // ĥ(0) = 1
            for m in 0..m0 {
                let c = l * (m as f64 + a);
                let b_m =
                    l * integrate(|xi| (1.0 - xi) * (-c * xi).exp(), 0.0, 1.0, 1e-14).unwrap();
                acc += 1.0 / (m as f64 + 1.0) - b_m;
            }
            // Σ_{m≥M₀} (1/(m+1) − 1/(m+a)) = ψ(M₀+a) − ψ(M₀+1)
            acc += digamma(m0 as f64 + a) - digamma(m0 as f64 + 1.0);
            // Σ_{m≥M₀} R_m ≈ ψ′(M₀+a)/L (exponential parts negligible)
            acc += trigamma(m0 as f64 + a) / l;
            let assembled = 2.0 / l * acc;
            assert!(
                (closed - assembled).abs() < 1e-10,
                "L={l} a={a}: {closed} vs {assembled}"
            );
        }
    }

    /// Leading behavior of the archimedean term: (2 log|d| + O(1))·ĥ(0)/L.
    #[test]
    fn archimedean_log_growth() {
        let k = KernelPair::fejer(10.0).unwrap();
        let forms = [(37u64, 2u32)];
        let mut prev_resid = None;
        for &d in &[100i64, 10_000, 1_000_000] {
            let t = archimedean_term(d, &forms, &k);
            let resid = t - 2.0 * (d as f64).ln() * k.h_hat_zero() / k.dilation;
            if let Some(p) = prev_resid {
                assert!((resid - p as f64).abs() < 1e-12, "O(1) part should be constant");
            }
            prev_resid = Some(resid);
        }
    }

    #[test]
    fn prime_side_empty_below_two() {
        let f = form_37a(200);
        // e^L < 2 is impossible with L ≥ 1; cutoff 2 keeps only p = 2
        let k = KernelPair::fejer(1.0).unwrap();
        let t = PrimeSideTable::build(&[f], &k).unwrap();
        assert_eq!(t.cutoff, 2);
    }

    #[test]
    fn prime_side_matches_direct_oracle() {
        let f = form_37a(4000);
        let k = KernelPair::fejer(8.0).unwrap();
        let t = PrimeSideTable::build(&[f.clone()], &k).unwrap();
        let table = f.prime_table();
        for d in [17i64, -7, 1345] {
            // independent recomputation: ascending n, vonmangoldt per n
            let mut oracle = KahanSum::new();
            let cutoff = (8.0f64).exp().floor() as u64;
            for n in 2..=cutoff {
                let lam = f.vonmangoldt(n).unwrap();
                if lam == 0.0 {
                    continue;
                }
                let chi = kronecker(d, n) as f64;
                if chi == 0.0 {
                    continue;
                }
                oracle.add(
                    lam / (n as f64).sqrt() * chi * k.big_h((n as f64).ln() / 8.0) / 8.0,
                );
            }
            let got = t.eval(d);
            assert!(
                (got - oracle.value()).abs() < 1e-12,
                "d={d}: {got} vs {}",
                oracle.value()
            );
            let _ = table;
        }
    }

    #[test]
    fn prime_side_truncation_exact() {
        // raising the coefficient range beyond e^L cannot change the value
        let k = KernelPair::fejer(6.0).unwrap();
        let small = PrimeSideTable::build(&[form_37a(500)], &k).unwrap();
        let large = PrimeSideTable::build(&[form_37a(5_000)], &k).unwrap();
        for d in [5i64, -19, 73] {
            assert!((small.eval(d) - large.eval(d)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_sum_linear_in_forms() {
        let f = form_37a(4000);
        let fam = TwistFamily::new(vec![f.params()], 1, 1, -1).unwrap();
        let table = Arc::new(PrimeTable::new(4000));
        let cutoff = SmoothCutoff::new().unwrap();
        let k = KernelPair::fejer(7.0).unwrap();
        let scan = FamilyScan::build(&fam, &table, 400.0, &cutoff).unwrap();
        let single = ZeroSumScan::new(scan.clone(), vec![f.clone()], k).unwrap();
        let double = ZeroSumScan::new(scan, vec![f.clone(), f.clone()], k).unwrap();
        for d in [41i64, 137] {
            let one = single.zero_sum_proxy(d);
            let two = double.zero_sum_proxy(d);
            assert!((two - 2.0 * one).abs() < 1e-11, "d={d}");
        }
    }

    /// Forced central zeros: Σ h(γL/2π) ≥ M·h(0) on the odd-sign family.
    #[test]
    fn zero_sum_floor_small_family() {
        let f = form_37a(3000);
        let table = Arc::new(PrimeTable::new(3000));
        let cutoff = SmoothCutoff::new().unwrap();
        let x_scale: f64 = 800.0;
        let k = KernelPair::fejer(x_scale.ln()).unwrap();
        for fam in TwistFamily::valid_pairs(&[f.params()], -1) {
            let scan = FamilyScan::build(&fam, &table, x_scale, &cutoff).unwrap();
            let zs = ZeroSumScan::new(scan, vec![f.clone()], k).unwrap();
            for &(d, _) in &zs.scan.members {
                let v = zs.zero_sum_proxy(d);
                assert!(v >= 1.0 - 1e-6, "d={d}: zero sum {v} below floor");
            }
        }
    }

    #[test]
    fn aggregate_matches_weighted_sum_identity() {
        let f = form_37a(3000);
        let fams = TwistFamily::valid_pairs(&[f.params()], -1);
        let table = Arc::new(PrimeTable::new(3000));
        let cutoff = SmoothCutoff::new().unwrap();
        let x_scale: f64 = 500.0;
        let k = KernelPair::fejer(x_scale.ln()).unwrap();
        let scan = FamilyScan::build(&fams[0], &table, x_scale, &cutoff).unwrap();
        let zs = ZeroSumScan::new(scan, vec![f.clone()], k).unwrap();
        let agg = zs.aggregate(1, 1, &table).unwrap();
        let mut direct = KahanSum::new();
        for &(d, w) in &zs.scan.members {
            direct.add(zs.zero_sum_proxy(d) * w);
        }
        assert!((agg - direct.value()).abs() < 1e-10);
        // preconditions
        assert!(zs.aggregate(2, 1, &table).is_err()); // (ℓ, N₀) > 1
        assert!(zs.aggregate(3, 9, &table).is_err()); // v not squarefree
    }

    #[test]
    fn classify_cases() {
        let table = PrimeTable::new(1000);
        assert_eq!(
            classify_ell(1, &table).unwrap().0,
            AggregateCase::Square
        );
        assert_eq!(classify_ell(49, &table).unwrap().0, AggregateCase::Square);
        assert_eq!(
            classify_ell(75, &table).unwrap(),
            (AggregateCase::PrimeTimesSquare, Some(3))
        );
        assert_eq!(classify_ell(15, &table).unwrap().0, AggregateCase::Generic);
    }
}
