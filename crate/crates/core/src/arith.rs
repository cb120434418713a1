//! Integer helpers: gcd, modular inverses, primality, factorization, CRT.

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`, `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mul_mod(a: i128, b: i128, n: u64) -> i128 {
    let n = n as u128;
    let a = a.rem_euclid(n as i128) as u128;
    let b = b.rem_euclid(n as i128) as u128;
    ((a * b) % n) as i128
}

/// Inverse of `a` modulo `n`, if `a` is a unit.
pub fn inv_mod(a: i128, n: u64) -> Option<i128> {
    let n = n as i128;
    let (g, x, _) = ext_gcd(a.rem_euclid(n), n);
    if g == 1 {
        Some(x.rem_euclid(n))
    } else {
        None
    }
}

fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    let m = n as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `|n|`, ascending. Empty for 0 and ±1.
pub fn prime_divisors(n: i128) -> Vec<u64> {
    let n = n.unsigned_abs();
    if n <= 1 {
        return Vec::new();
    }
    let n = u64::try_from(n).expect("prime_divisors: value exceeds 64 bits");
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Solves `x = r_i (mod m_i)` for pairwise coprime moduli; result in `[0, prod m_i)`.
pub fn crt_combine(residues: &[(i128, u64)]) -> i128 {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, mi) in residues {
        let mi = mi as i128;
        // x + m * t = r (mod mi)
        let inv = inv_mod(m, mi as u64).expect("crt_combine: moduli not coprime");
        let t = mul_mod(r - x, inv, mi as u64);
        x += m * t;
        m *= mi;
        x = x.rem_euclid(m);
    }
    x
}

/// Largest `e` with `p^e | a` for `a != 0`.
pub fn valuation(a: i128, p: u64) -> u32 {
    debug_assert!(a != 0);
    let p = p as i128;
    let mut a = a.abs();
    let mut e = 0;
    while a % p == 0 {
        a /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        for a in -20i128..20 {
            for b in -20i128..20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(a * x + b * y, g);
            }
        }
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..2000 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551555));
    }

    #[test]
    fn factorization_recombines() {
        for n in 2u64..5000 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(p, k)| p.pow(k)).product::<u64>(), n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn crt_roundtrip() {
        for x in 0i128..60 {
            let r = [(x % 4, 4u64), (x % 3, 3), (x % 5, 5)];
            assert_eq!(crt_combine(&r), x);
        }
    }
}
