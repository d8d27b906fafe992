//! Big-integer helpers: primality, factorization, square detection, CRT.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Floor of the integer square root of a nonnegative integer.
pub fn isqrt(n: &Int) -> Int {
    assert!(!n.is_negative(), "isqrt of negative");
    Int::from_biguint(Sign::Plus, n.magnitude().sqrt())
}

/// Exact square root, if `n` is a perfect square.
pub fn perfect_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Deterministic Miller–Rabin, exact for all `u64` and safe (probabilistic
/// with product-of-many-bases confidence) beyond; desk-scale inputs stay far
/// below the `u64` range in practice.
pub fn is_prime(n: &Int) -> bool {
    if n <= &Int::one() {
        return false;
    }
    let n_u = n.magnitude();
    let two = BigUint::from(2u32);
    if n_u == &two {
        return true;
    }
    if n_u.is_even() {
        return false;
    }
    let nm1 = n_u - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    // These bases are deterministic for n < 3.3 * 10^24.
    'bases: for b in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let b = BigUint::from(b);
        if &b % n_u == BigUint::zero() {
            continue;
        }
        let mut x = b.modpow(&d, n_u);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n_u);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization; returns (prime, exponent) pairs in
/// increasing prime order. Desk scale: norms stay small enough for this.
pub fn factor(n: &Int) -> Vec<(Int, u32)> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "factor(0)");
    let mut out: Vec<(Int, u32)> = Vec::new();
    let push = |p: Int, e: u32, out: &mut Vec<(Int, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e2 = 0;
    while n.is_even() {
        n /= 2;
        e2 += 1;
    }
    push(int(2), e2, &mut out);
    let mut p = int(3);
    while &(&p * &p) <= &n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        push(p.clone(), e, &mut out);
        p += 2;
        // Skip ahead fast once n is known prime.
        if is_prime(&n) {
            break;
        }
    }
    if n > Int::one() {
        push(n, 1, &mut out);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn is_squarefree(n: &Int) -> bool {
    factor(n).iter().all(|(_, e)| *e == 1)
}

/// Modular inverse of `a` mod `m` (m > 0), if gcd(a, m) = 1.
pub fn inv_mod(a: &Int, m: &Int) -> Option<Int> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn pow_mod(a: &Int, e: &Int, m: &Int) -> Int {
    assert!(!e.is_negative());
    a.modpow(e, m)
}

/// CRT for two congruences with coprime moduli.
pub fn crt2(a1: &Int, m1: &Int, a2: &Int, m2: &Int) -> Int {
    let inv = inv_mod(m1, m2).expect("crt2: moduli not coprime");
    let t = ((a2 - a1) * inv).mod_floor(m2);
    (a1 + m1 * t).mod_floor(&(m1 * m2))
}

/// Primes up to `n` inclusive, by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

/// Euler phi of a small integer.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// (p-1)/2-style Legendre symbol for odd prime p.
pub fn legendre(a: &Int, p: &Int) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1) / 2;
    let r = pow_mod(&a, &e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo an odd prime `p`, by Tonelli–Shanks.
pub fn sqrt_mod_prime(a: &Int, p: &Int) -> Option<Int> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(Int::zero());
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    if p.mod_floor(&int(4)) == int(3) {
        let e = (p + 1) / 4;
        return Some(pow_mod(&a, &e, p));
    }
    // Tonelli–Shanks
    let mut q: Int = p - 1;
    let mut s = 0u32;
    while q.is_even() {
        q /= 2;
        s += 1;
    }
    let mut z = int(2);
    while legendre(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(&z, &q, p);
    let mut t = pow_mod(&a, &q, p);
    let mut r = pow_mod(&a, &((&q + 1) / 2), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2).mod_floor(p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = (&b * &b).mod_floor(p);
        }
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    Some(r)
}

pub fn to_i64(n: &Int) -> Option<i64> {
    n.to_i64()
}

/// Kronecker symbol (a | n), the full extension of the Jacobi symbol.
pub fn kronecker_symbol(a: &Int, n: &Int) -> i32 {
    let mut a = a.clone();
    let mut n = n.clone();
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut result = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    // factor out 2s from n
    while n.is_even() {
        n /= 2;
        let am8 = a.mod_floor(&int(8));
        if am8 == int(3) || am8 == int(5) {
            result = -result;
        }
    }
    // now n odd positive: Jacobi
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let nm8 = n.mod_floor(&int(8));
            if nm8 == int(3) || nm8 == int(5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&int(4)) == int(3) && n.mod_floor(&int(4)) == int(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_factor() {
        assert!(is_prime(&int(2)));
        assert!(is_prime(&int(97)));
        assert!(!is_prime(&int(1)));
        assert!(!is_prime(&int(561))); // Carmichael
        assert_eq!(factor(&int(360)), vec![(int(2), 3), (int(3), 2), (int(5), 1)]);
        assert!(is_squarefree(&int(-15)));
        assert!(!is_squarefree(&int(12)));
    }

    #[test]
    fn sqrt_mod() {
        let p = int(73);
        for a in 1..20i64 {
            let sq = (int(a) * int(a)).mod_floor(&p);
            let r = sqrt_mod_prime(&sq, &p).unwrap();
            assert_eq!((&r * &r).mod_floor(&p), sq);
        }
        assert_eq!(legendre(&int(5), &int(73)), -1);
        assert!(sqrt_mod_prime(&int(5), &int(73)).is_none());
    }

    #[test]
    fn crt_basics() {
        let x = crt2(&int(2), &int(3), &int(3), &int(5));
        assert_eq!(x.mod_floor(&int(3)), int(2));
        assert_eq!(x.mod_floor(&int(5)), int(3));
    }
}
