//! Kronecker symbol (d/n).
//!
//! Total over all integer d and n ≥ 0. For fundamental d this is the real
//! primitive character χ_d of conductor |d|.

/// Jacobi symbol (a/m) for odd m > 0, by binary reciprocity.
fn jacobi_odd(mut a: u64, mut m: u64) -> i32 {
    debug_assert!(m & 1 == 1);
    let mut t = 1i32;
    a %= m;
    while a != 0 {
        while a & 1 == 0 {
            a >>= 1;
            let r = m & 7;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a & 3 == 3 && m & 3 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol (d/n), completely multiplicative in n.
///
/// Conventions: (d/0) = 1 iff d = ±1; (d/2) = 0 for even d, else +1 for
/// d ≡ ±1 (mod 8) and −1 for d ≡ ±3 (mod 8). Returns 0 iff gcd(d, n) > 1.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let e = n.trailing_zeros();
    let m = n >> e;
    let mut sign = 1i32;
    if e > 0 {
        if d & 1 == 0 {
            return 0;
        }
        let chi2 = match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
        if chi2 == -1 && e & 1 == 1 {
            sign = -1;
        }
    }
    if m == 1 {
        return sign;
    }
    let r = d.rem_euclid(m as i64) as u64;
    sign * jacobi_odd(r, m)
}

/// χ_d(−1): +1 for d > 0, −1 for d < 0.
pub fn chi_at_minus_one(d: i64) -> i32 {
    if d > 0 {
        1
    } else {
        -1
    }
}
