//! Exact-rational Bernoulli numbers as an independent check on the
//! residue-field recurrence.

use frey_core::arith::odd_primes_up_to;
use frey_core::denes::{bernoulli_mod_p, is_regular};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// B_0..=B_n over the rationals via Σ_{j=0}^{m} C(m+1, j) B_j = 0.
fn bernoulli_exact(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut binom = BigInt::one(); // C(m+1, 0)
        let mut sum = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            sum += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-sum / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn reduce(r: &BigRational, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let den = r.denom().mod_floor(&p_big);
    assert!(!den.is_zero(), "denominator divisible by {p}");
    let inv = den.modpow(&(&p_big - 2), &p_big);
    (r.numer() * inv).mod_floor(&p_big).to_u64().unwrap()
}

#[test]
fn known_small_values() {
    let b = bernoulli_exact(12);
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(b[1], q(-1, 2));
    assert_eq!(b[2], q(1, 6));
    assert_eq!(b[4], q(-1, 30));
    assert_eq!(b[12], q(-691, 2730));
    assert!(b[3].is_zero() && b[11].is_zero());
}

#[test]
fn residue_recurrence_matches_exact_rationals_up_to_100() {
    let exact = bernoulli_exact(98);
    for p in odd_primes_up_to(100).into_iter().filter(|&p| p >= 5) {
        let residues = bernoulli_mod_p(p).unwrap();
        assert_eq!(residues.len() as u64, (p - 3) / 2);
        for (k, r) in residues {
            assert_eq!(r, reduce(&exact[k as usize], p), "B_{k} mod {p}");
        }
    }
}

#[test]
fn irregular_primes_below_100_from_exact_numerators() {
    let exact = bernoulli_exact(98);
    let mut found = Vec::new();
    for p in odd_primes_up_to(100).into_iter().filter(|&p| p >= 5) {
        let idx: Vec<u64> = (2..=p - 3)
            .step_by(2)
            .filter(|&k| (exact[k as usize].numer() % BigInt::from(p)).is_zero())
            .collect();
        assert_eq!(is_regular(p).unwrap(), (idx.is_empty(), idx.clone()));
        if !idx.is_empty() {
            found.push((p, idx));
        }
    }
    assert_eq!(found, vec![(37, vec![32]), (59, vec![44]), (67, vec![58])]);
}
