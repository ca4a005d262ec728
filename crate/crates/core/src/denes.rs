//! Dénes's sufficient criterion for the three-term `p`-th power progression
//! conjecture: `p` regular, the order of 2 mod `p` even or equal to
//! `(p − 1)/2`, and `2^{p−1} ≢ 1 (mod p²)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod_prime};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenesReport {
    pub p: u64,
    pub is_regular: bool,
    pub irregular_indices: Vec<u64>,
    pub ord2: u64,
    pub order_condition: bool,
    pub wieferich_violation: bool,
    pub criterion_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenesCondition {
    Regularity,
    OrderOfTwo,
    Wieferich,
}

impl DenesReport {
    pub fn ord2_even(&self) -> bool {
        self.ord2 % 2 == 0
    }

    pub fn ord2_is_half(&self) -> bool {
        self.ord2 == (self.p - 1) / 2
    }

    /// Conditions that fail, in a fixed order.
    pub fn failing_conditions(&self) -> Vec<DenesCondition> {
        let mut out = Vec::new();
        if !self.is_regular {
            out.push(DenesCondition::Regularity);
        }
        if !self.order_condition {
            out.push(DenesCondition::OrderOfTwo);
        }
        if self.wieferich_violation {
            out.push(DenesCondition::Wieferich);
        }
        out
    }
}

fn ensure_denes_prime(p: u64) -> Result<()> {
    arith::ensure_odd_prime(p)?;
    if p == 3 {
        return Err(Error::UnsupportedPrime(3));
    }
    if p > u32::MAX as u64 {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// `B_k mod p` for every even `k` in `[2, p − 3]`.
///
/// Runs the recurrence `Σ_{j=0}^{m} C(m+1, j)·B_j = 0` in the field with `p`
/// elements; every `m + 1 ≤ p − 2` is invertible there.
pub fn bernoulli_mod_p(p: u64) -> Result<BTreeMap<u64, u64>> {
    ensure_denes_prime(p)?;
    let top = (p - 3) as usize;
    let mut bern = vec![0u64; top + 1];
    bern[0] = 1;
    // Pascal row for n = m + 1, kept mod p.
    let mut row = vec![0u64; top + 2];
    row[0] = 1;
    row[1] = 1;
    for m in 1..=top {
        let n = m + 1;
        for j in (1..n).rev() {
            row[j] = (row[j] + row[j - 1]) % p;
        }
        row[n] = 1;
        if m > 1 && m % 2 == 1 {
            continue;
        }
        let sum = (0..m)
            .filter(|&j| bern[j] != 0)
            .fold(0u64, |acc, j| (acc + row[j] * bern[j]) % p);
        bern[m] = (p - sum) % p * inv_mod_prime(n as u64, p) % p;
    }
    Ok((2..=top as u64)
        .step_by(2)
        .map(|k| (k, bern[k as usize]))
        .collect())
}

/// Regularity of `p` and the even indices `k ≤ p − 3` with `p | B_k`.
pub fn is_regular(p: u64) -> Result<(bool, Vec<u64>)> {
    let irregular: Vec<u64> = bernoulli_mod_p(p)?
        .into_iter()
        .filter(|&(_, r)| r == 0)
        .map(|(k, _)| k)
        .collect();
    Ok((irregular.is_empty(), irregular))
}

/// True when `2^{p−1} ≡ 1 (mod p²)`, i.e. when Dénes's hypothesis fails.
pub fn wieferich_test(p: u64) -> Result<bool> {
    arith::ensure_odd_prime(p)?;
    let p_big = BigInt::from(p);
    let r = arith::powmod(&BigInt::from(2), p - 1, &(&p_big * &p_big))?;
    Ok(r == BigInt::from(1))
}

pub fn denes_criterion(p: u64) -> Result<DenesReport> {
    ensure_denes_prime(p)?;
    let (is_regular, irregular_indices) = is_regular(p)?;
    let ord2 = arith::mult_order(&BigInt::from(2), p)?;
    let order_condition = ord2 % 2 == 0 || ord2 == (p - 1) / 2;
    let wieferich_violation = wieferich_test(p)?;
    Ok(DenesReport {
        p,
        is_regular,
        irregular_indices,
        ord2,
        order_condition,
        wieferich_violation,
        criterion_holds: is_regular && order_condition && !wieferich_violation,
    })
}

/// One report per prime `5 ≤ p ≤ p_max`, ascending. Primes are evaluated in
/// parallel when the `parallel` feature is on.
pub fn denes_scan(p_max: u64) -> Result<Vec<DenesReport>> {
    let primes: Vec<u64> = arith::primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p >= 5)
        .collect();
    par::ordered_map(&primes, |&p| denes_criterion(p))
        .into_iter()
        .collect()
}
