//! Exact integer and modular arithmetic shared by every other module.
//!
//! All public integer values are [`ExactInt`] (arbitrary precision). Primes
//! that index local data (`ℓ`, `p`) are plain `u64`; they are always small in
//! this toolkit and primality of a `u64` is decided deterministically.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactInt = BigInt;

/// Default trial-division bound for factoring discriminants.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// Miller–Rabin with the first 13 prime bases is deterministic below this value.
pub const PRIMALITY_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Largest `e` with `ℓ^e | n`.
pub fn valuation(n: &BigInt, l: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if l < 2 {
        return Err(Error::InvalidArgument(format!("valuation base {l} < 2")));
    }
    if l == 2 {
        return Ok(n.trailing_zeros().unwrap_or(0) as u32);
    }
    let mut m = n.abs();
    let l_big = BigInt::from(l);
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&l_big);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// Valuation that treats zero as infinitely divisible (`u32::MAX`).
pub(crate) fn valuation_or_inf(n: &BigInt, l: u64) -> u32 {
    valuation(n, l).unwrap_or(u32::MAX)
}

/// `base^exp mod m`, result in `[0, m)`.
pub fn powmod(base: &BigInt, exp: u64, m: &BigInt) -> Result<BigInt> {
    if m < &BigInt::from(2) {
        return Err(Error::ModulusTooSmall(m.to_string()));
    }
    let b = base.mod_floor(m);
    Ok(b.modpow(&BigInt::from(exp), m))
}

pub(crate) fn powmod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod_u64(a, p - 2, p)
}

/// Smallest `d > 0` with `g^d ≡ 1 (mod p)`.
pub fn mult_order(g: &BigInt, p: u64) -> Result<u64> {
    ensure_prime(p)?;
    let g_mod = g
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64");
    if g_mod == 0 {
        return Err(Error::NotAUnit {
            value: g.to_string(),
            prime: p,
        });
    }
    let mut order = p - 1;
    for (q, _) in factor_u64(p - 1) {
        while order % q == 0 && powmod_u64(g_mod, order / q, p) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Non-negative gcd of all entries; `0` for an all-zero list.
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Legendre symbol `(a / ℓ)` for an odd prime `ℓ`, via Euler's criterion.
pub fn legendre_symbol(a: &BigInt, l: u64) -> Result<i8> {
    if l == 2 {
        return Err(Error::EvenPrime);
    }
    ensure_prime(l)?;
    let r = powmod(a, (l - 1) / 2, &BigInt::from(l))?;
    Ok(if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    })
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod_u64(a, d, n);
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

/// Deterministic primality below [`PRIMALITY_BOUND`]; larger inputs are rejected.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    if n.sign() != Sign::Plus {
        return Ok(false);
    }
    if let Some(small) = n.to_u64() {
        return Ok(is_prime_u64(small));
    }
    match n.to_u128() {
        Some(v) if v < PRIMALITY_BOUND => {}
        _ => return Err(Error::PrimeTooLarge(n.to_string())),
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

pub(crate) fn ensure_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    ensure_prime(p)
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn odd_primes_up_to(n: u64) -> Vec<u64> {
    primes_up_to(n).into_iter().filter(|&q| q != 2).collect()
}

fn default_sieve() -> &'static [u64] {
    static SIEVE: OnceLock<Vec<u64>> = OnceLock::new();
    SIEVE.get_or_init(|| primes_up_to(DEFAULT_FACTOR_BOUND))
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factor `|n|` by trial division up to `bound`.
///
/// A cofactor left after trial division is accepted only when it is a
/// certified prime or a perfect power of one; otherwise the call fails with
/// [`Error::FactorizationBoundExceeded`] rather than return a wrong answer.
pub fn factor(n: &BigInt, bound: u64) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let owned;
    let primes: &[u64] = if bound <= DEFAULT_FACTOR_BOUND {
        let sieve = default_sieve();
        let end = sieve.partition_point(|&q| q <= bound);
        &sieve[..end]
    } else {
        owned = primes_up_to(bound);
        &owned
    };

    let mut rem = n.abs();
    let mut out = Vec::new();
    let mut exhausted = true;
    for &q in primes {
        if let Some(r) = rem.to_u64() {
            if q.saturating_mul(q) > r {
                exhausted = false;
                break;
            }
        }
        if (&rem % q).is_zero() {
            let mut e = 0;
            while (&rem % q).is_zero() {
                rem /= q;
                e += 1;
            }
            out.push((q, e));
        }
    }
    if rem.is_one() {
        return Ok(out);
    }
    // Either the loop stopped because q^2 exceeded the remainder (so it is prime)
    // or the bound was reached and the remainder needs certification.
    if !exhausted {
        let r = rem.to_u64().expect("checked above");
        out.push((r, 1));
        out.sort_unstable();
        return Ok(out);
    }
    let fail = || Error::FactorizationBoundExceeded {
        cofactor: rem.to_string(),
        bound,
    };
    let bits = rem.bits() as u32;
    for k in 1..=bits.max(1) {
        let root = if k == 1 { rem.clone() } else { rem.nth_root(k) };
        if root <= BigInt::one() {
            break;
        }
        if k > 1 && num_traits::pow(root.clone(), k as usize) != rem {
            continue;
        }
        match is_prime(&root) {
            Ok(true) => {
                let q = root.to_u64().ok_or_else(fail)?;
                out.push((q, k));
                out.sort_unstable();
                return Ok(out);
            }
            Ok(false) => {}
            Err(_) => return Err(fail()),
        }
    }
    Err(fail())
}

/// Exact `k`-th root of `n`, if one exists. Negative `n` is allowed for odd `k`.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if n.is_negative() && k % 2 == 0 {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Serde adapter writing [`ExactInt`] as a decimal string; reads strings or
/// JSON integers.
pub mod decimal {
    use std::fmt;

    use num_bigint::BigInt;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(DecimalVisitor)
    }

    struct DecimalVisitor;

    impl<'de> Visitor<'de> for DecimalVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a decimal integer string or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse().map_err(|_| E::custom(format!("bad integer {v:?}")))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(v.into())
        }
    }
}
