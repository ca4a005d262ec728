//! Traces of Frobenius by naive point counting, and the mod-`p` trace
//! comparator between two curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::model::WeierstrassModel;
use crate::par;
use crate::tate::{self, Reduction};

pub const DEFAULT_LMAX: u64 = 10_000;

pub const CONGRUENCE_DISCLAIMER: &str = "evidence only: agreement of traces mod p at finitely \
many primes is necessary for isomorphic mod-p representations but does not prove it";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceReduction {
    Good,
    Bad,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub l: u64,
    pub a_l: Option<i64>,
    pub reduction: TraceReduction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub l: u64,
    pub a_l_1: i64,
    pub a_l_2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub l_max: u64,
    pub compared_primes: Vec<u64>,
    pub congruent: bool,
    pub first_violation: Option<Violation>,
    pub disclaimer: String,
}

/// A model with good reduction at `l`, if the curve has one; the input model
/// itself when `l ∤ Δ`, otherwise the minimal model found by Tate's algorithm.
fn good_model(model: &WeierstrassModel, l: u64) -> Result<Option<WeierstrassModel>> {
    let disc = model.discriminant();
    if disc.is_zero() {
        return Err(Error::SingularModel);
    }
    if !(&disc % l).is_zero() {
        return Ok(Some(model.clone()));
    }
    let out = tate::tate(model, l)?;
    Ok((out.local.reduction == Reduction::Good).then_some(out.minimal_model))
}

fn residue(x: &BigInt, l: u64) -> u64 {
    x.mod_floor(&BigInt::from(l)).to_u64().expect("residue fits in u64")
}

/// `a_ℓ = −Σ_x (g(x) / ℓ)` where `(2y + a1·x + a3)² = g(x) = 4x³ + b2·x² + 2b4·x + b6`.
fn character_sum_trace(model: &WeierstrassModel, l: u64) -> i64 {
    let inv = model.invariants();
    let (b2, b4, b6) = (residue(&inv.b2, l), residue(&inv.b4, l), residue(&inv.b6, l));
    let lu = l as usize;
    // chi[v] = Legendre symbol (v / l)
    let mut chi = vec![-1i8; lu];
    chi[0] = 0;
    for y in 1..=(l - 1) / 2 {
        chi[((y * y) % l) as usize] = 1;
    }
    let m = l as u128;
    let (b2, b4, b6) = (b2 as u128, b4 as u128, b6 as u128);
    let mut sum = 0i64;
    for x in 0..m {
        let g = ((((4 * x + b2) % m) * x % m + 2 * b4) % m * x % m + b6) % m;
        sum += chi[g as usize] as i64;
    }
    -sum
}

/// Trace of Frobenius at an odd prime of good reduction.
pub fn count_points(model: &WeierstrassModel, l: u64) -> Result<i64> {
    if l == 2 {
        return Err(Error::EvenPrime);
    }
    arith::ensure_prime(l)?;
    match good_model(model, l)? {
        Some(m) => Ok(character_sum_trace(&m, l)),
        None => Err(Error::BadReduction(l)),
    }
}

fn trace_record(model: &WeierstrassModel, l: u64) -> Result<TraceRecord> {
    Ok(match good_model(model, l)? {
        Some(m) => TraceRecord {
            l,
            a_l: Some(character_sum_trace(&m, l)),
            reduction: TraceReduction::Good,
        },
        None => TraceRecord {
            l,
            a_l: None,
            reduction: TraceReduction::Bad,
        },
    })
}

/// Records for every odd prime `ℓ ≤ l_max`, ascending.
pub fn trace_table(model: &WeierstrassModel, l_max: u64) -> Result<Vec<TraceRecord>> {
    if model.is_singular() {
        return Err(Error::SingularModel);
    }
    let primes = arith::odd_primes_up_to(l_max);
    par::ordered_map(&primes, |&l| trace_record(model, l))
        .into_iter()
        .collect()
}

/// Compare `a_ℓ mod p` at odd primes `ℓ ≤ l_max`, `ℓ ≠ p`, good for both curves.
pub fn mod_p_congruent(
    model1: &WeierstrassModel,
    model2: &WeierstrassModel,
    p: u64,
    l_max: u64,
) -> Result<CongruenceReport> {
    arith::ensure_prime(p)?;
    let t1 = trace_table(model1, l_max)?;
    let t2 = trace_table(model2, l_max)?;
    let mut compared_primes = Vec::new();
    let mut first_violation = None;
    for (r1, r2) in t1.iter().zip(&t2) {
        debug_assert_eq!(r1.l, r2.l);
        let (Some(x), Some(y)) = (r1.a_l, r2.a_l) else {
            continue;
        };
        if r1.l == p {
            continue;
        }
        compared_primes.push(r1.l);
        if first_violation.is_none() && (x - y).rem_euclid(p as i64) != 0 {
            first_violation = Some(Violation {
                l: r1.l,
                a_l_1: x,
                a_l_2: y,
            });
        }
    }
    Ok(CongruenceReport {
        p,
        l_max,
        compared_primes,
        congruent: first_violation.is_none(),
        first_violation,
        disclaimer: CONGRUENCE_DISCLAIMER.to_string(),
    })
}

/// CSV rendering `l,a_l,reduction` with a header row.
pub fn to_csv(records: &[TraceRecord]) -> String {
    let mut out = String::from("l,a_l,reduction\n");
    for r in records {
        let a = r.a_l.map(|a| a.to_string()).unwrap_or_default();
        let red = match r.reduction {
            TraceReduction::Good => "good",
            TraceReduction::Bad => "bad",
        };
        out.push_str(&format!("{},{},{}\n", r.l, a, red));
    }
    out
}
