//! Frey curves attached to solutions of `a^p + 2^α·b^p + c^p = 0`.
//!
//! Given a primitive solution normalized so that `a ≡ −1 (mod 4)`, the
//! monomials `A = a^p`, `B = 2^α·b^p`, `C = c^p` satisfy `A + B + C = 0` and
//! define `E: y² = x(x − A)(x + B)`. Its conductor is `2^t·rad′(ABC)` with
//! `t` read off from `ord₂(B)`:
//!
//! | `ord₂(B)` | 1 | 2 | 3 | 4 | ≥ 5 |
//! |-----------|---|---|---|---|-----|
//! | `t`       | 5 | 3 | 3 | 0 | 1   |
//!
//! The 2-adic exponent of the minimal discriminant is not tabulated here; it
//! comes from the Tate oracle in [`crate::tate`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, decimal, ExactInt};
use crate::error::{Error, Result};
use crate::model::WeierstrassModel;
use crate::tate::{self, LocalData};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreyParams {
    pub p: u64,
    pub alpha: u32,
    #[serde(with = "decimal")]
    pub a: ExactInt,
    #[serde(with = "decimal")]
    pub b: ExactInt,
    #[serde(with = "decimal")]
    pub c: ExactInt,
    pub normalized: bool,
}

/// `A = a^p`, `B = 2^α·b^p`, `C = c^p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTriple {
    #[serde(rename = "A", with = "decimal")]
    pub a: ExactInt,
    #[serde(rename = "B", with = "decimal")]
    pub b: ExactInt,
    #[serde(rename = "C", with = "decimal")]
    pub c: ExactInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub t: u32,
    #[serde(with = "decimal")]
    pub odd_radical: ExactInt,
    #[serde(with = "decimal")]
    pub conductor: ExactInt,
    pub semistable: bool,
    pub u: i32,
    pub odd_disc_valuations: BTreeMap<u64, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanType {
    Split,
    NonSplit,
}

fn pow(x: &BigInt, e: u64) -> BigInt {
    num_traits::pow(x.clone(), e as usize)
}

fn is_3_mod_4(x: &BigInt) -> bool {
    x.mod_floor(&BigInt::from(4)) == BigInt::from(3)
}

/// `a^p + 2^α·b^p + c^p`.
pub fn star_value(p: u64, alpha: u32, a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    pow(a, p) + (BigInt::one() << alpha as usize) * pow(b, p) + pow(c, p)
}

/// Orbit representative of `(a, b, c)` under the global sign flip and the
/// `a ↔ c` swap: among orbit members whose first entry is `≡ −1 (mod 4)` (all
/// members when none is) the lexicographically smallest.
pub fn canonical_form(a: &BigInt, b: &BigInt, c: &BigInt) -> (BigInt, BigInt, BigInt) {
    let orbit = [
        (a.clone(), b.clone(), c.clone()),
        (c.clone(), b.clone(), a.clone()),
        (-a, -b, -c),
        (-c, -b, -a),
    ];
    let preferred: Vec<_> = orbit.iter().filter(|t| is_3_mod_4(&t.0)).cloned().collect();
    let pool = if preferred.is_empty() { orbit.to_vec() } else { preferred };
    pool.into_iter().min().expect("non-empty orbit")
}

/// Validate a primitive solution and move it to its normalized representative
/// (`a ≡ −1 mod 4`; `a ↔ c` ties broken by the smaller first entry).
pub fn normalize(p: u64, alpha: u32, a: &BigInt, b: &BigInt, c: &BigInt) -> Result<FreyParams> {
    arith::ensure_odd_prime(p)?;
    if alpha == 0 || alpha as u64 >= p {
        return Err(Error::AlphaOutOfRange { alpha, p });
    }
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::ZeroEntry);
    }
    if !star_value(p, alpha, a, b, c).is_zero() {
        return Err(Error::NotASolution);
    }
    let content = arith::gcd_all(&[a.clone(), b.clone(), c.clone()]);
    if !content.is_one() {
        return Err(Error::NotPrimitive(content.to_string()));
    }
    if a.is_even() || c.is_even() {
        return Err(Error::ParityViolation);
    }
    let (a, b, c) = canonical_form(a, b, c);
    Ok(FreyParams {
        p,
        alpha,
        a,
        b,
        c,
        normalized: true,
    })
}

/// `2^α·b^p = 2^{α mod p}·(2^{⌊α/p⌋}·b)^p`. A returned exponent of 0 is the
/// Fermat case.
pub fn reduce_alpha(alpha: u32, b: &BigInt, p: u64) -> (u32, BigInt) {
    let p32 = p as u32;
    let shift = alpha / p32;
    (alpha % p32, b << shift as usize)
}

impl MonomialTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Checks the conditions the conductor table relies on.
    pub fn validate(&self) -> Result<()> {
        if !(&self.a + &self.b + &self.c).is_zero() {
            return Err(Error::NotFreyTriple("A + B + C != 0"));
        }
        if self.a.is_zero() || self.b.is_zero() || self.c.is_zero() {
            return Err(Error::NotFreyTriple("zero monomial"));
        }
        if self.b.is_odd() {
            return Err(Error::NotFreyTriple("B odd"));
        }
        if !is_3_mod_4(&self.a) {
            return Err(Error::NotFreyTriple("A not congruent to -1 mod 4"));
        }
        if !arith::gcd_all(&[self.a.clone(), self.b.clone(), self.c.clone()]).is_one() {
            return Err(Error::NotFreyTriple("A, B, C not coprime"));
        }
        Ok(())
    }

    pub fn model(&self) -> WeierstrassModel {
        WeierstrassModel::frey(&self.a, &self.b)
    }
}

pub fn build_frey(params: &FreyParams) -> Result<(MonomialTriple, WeierstrassModel)> {
    if !params.normalized {
        return Err(Error::InvalidArgument("Frey curve needs normalized parameters".into()));
    }
    let triple = MonomialTriple {
        a: pow(&params.a, params.p),
        b: (BigInt::one() << params.alpha as usize) * pow(&params.b, params.p),
        c: pow(&params.c, params.p),
    };
    let model = triple.model();
    Ok((triple, model))
}

/// Conductor exponent at 2 as a function of `ord₂(B)`.
pub fn t_from_ord2(v: u32) -> Option<u32> {
    match v {
        0 => None,
        1 => Some(5),
        2 | 3 => Some(3),
        4 => Some(0),
        _ => Some(1),
    }
}

pub fn invariants(triple: &MonomialTriple) -> Result<CurveInvariants> {
    invariants_with_bound(triple, arith::DEFAULT_FACTOR_BOUND)
}

pub fn invariants_with_bound(triple: &MonomialTriple, bound: u64) -> Result<CurveInvariants> {
    triple.validate()?;
    let v2 = arith::valuation(&triple.b, 2)?;
    let t = t_from_ord2(v2).ok_or(Error::NotFreyTriple("B odd"))?;

    let mut odd_disc_valuations = BTreeMap::new();
    for m in [&triple.a, &triple.b, &triple.c] {
        for (q, e) in arith::factor(m, bound)? {
            if q != 2 {
                *odd_disc_valuations.entry(q).or_insert(0) += 2 * e;
            }
        }
    }
    let odd_radical: BigInt = odd_disc_valuations.keys().map(|&q| BigInt::from(q)).product();
    let conductor = (BigInt::one() << t as usize) * &odd_radical;

    let min_v2 = tate::minimal_disc_valuation_at_2(&triple.model())?;
    let u = min_v2 as i32 - 2 * v2 as i32;
    if t == 1 && u != -8 {
        return Err(Error::InvariantViolation(format!(
            "t = 1 but minimal discriminant 2-exponent u = {u}, expected -8"
        )));
    }

    Ok(CurveInvariants {
        t,
        odd_radical,
        conductor,
        semistable: v2 >= 4,
        u,
        odd_disc_valuations,
    })
}

impl CurveInvariants {
    /// Whether every odd-prime minimal-discriminant valuation is divisible by `p`.
    pub fn odd_valuations_divisible_by(&self, p: u64) -> bool {
        self.odd_disc_valuations.values().all(|&v| v as u64 % p == 0)
    }
}

/// Conductor is a power of two; for a genuine normalized solution this
/// happens exactly for `(a, b, c) = (−1, 1, −1)`.
pub fn is_trivial_level(inv: &CurveInvariants) -> bool {
    inv.odd_radical.is_one()
}

/// Split iff `p ≡ 1 (mod 4)`.
pub fn cartan_type(p: u64) -> Result<CartanType> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if p % 2 == 0 {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(if p % 4 == 1 {
        CartanType::Split
    } else {
        CartanType::NonSplit
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReduction {
    pub original_alpha: u32,
    #[serde(with = "decimal")]
    pub original_b: ExactInt,
    pub reduced_alpha: u32,
    #[serde(with = "decimal")]
    pub reduced_b: ExactInt,
    pub fermat_case: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    #[serde(with = "decimal")]
    pub conductor: ExactInt,
    pub exponent_at_2: u32,
    pub local: Vec<LocalData>,
    pub agrees: bool,
}

/// Everything the `analyze` command reports for one candidate solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub alpha_reduction: Option<AlphaReduction>,
    pub params: FreyParams,
    pub triple: MonomialTriple,
    pub model: WeierstrassModel,
    pub invariants: CurveInvariants,
    pub cartan_type: CartanType,
    pub is_trivial_level: bool,
    pub is_trivial_solution: bool,
    pub odd_valuations_divisible_by_p: bool,
    pub oracle: OracleCheck,
}

impl Analysis {
    /// Any disagreement between the closed forms and the oracle, or between
    /// the level and the triviality of the solution.
    pub fn is_anomalous(&self) -> bool {
        !self.oracle.agrees
            || self.is_trivial_level != self.is_trivial_solution
            || !self.odd_valuations_divisible_by_p
    }
}

pub fn analyze(p: u64, alpha: u32, a: &BigInt, b: &BigInt, c: &BigInt, bound: u64) -> Result<Analysis> {
    arith::ensure_odd_prime(p)?;
    let mut alpha_reduction = None;
    let (alpha, b) = if alpha == 0 || alpha as u64 >= p {
        let (ra, rb) = reduce_alpha(alpha, b, p);
        alpha_reduction = Some(AlphaReduction {
            original_alpha: alpha,
            original_b: b.clone(),
            reduced_alpha: ra,
            reduced_b: rb.clone(),
            fermat_case: ra == 0,
        });
        if ra == 0 {
            // a^p + b'^p + c^p = 0 has no nonzero solutions; report which.
            return Err(if b.is_zero() || a.is_zero() || c.is_zero() {
                Error::ZeroEntry
            } else if !star_value(p, 0, a, &rb, c).is_zero() {
                Error::NotASolution
            } else {
                Error::InvariantViolation("nonzero solution in the Fermat case".into())
            });
        }
        (ra, rb)
    } else {
        (alpha, b.clone())
    };

    let params = normalize(p, alpha, a, &b, c)?;
    let (triple, model) = build_frey(&params)?;
    let invariants = invariants_with_bound(&triple, bound)?;
    let report = tate::conductor_report(&model, bound)?;
    let exponent_at_2 = report
        .local
        .iter()
        .find(|d| d.prime == 2)
        .map_or(0, |d| d.conductor_exponent);
    let oracle = OracleCheck {
        agrees: report.conductor == invariants.conductor && exponent_at_2 == invariants.t,
        conductor: report.conductor,
        exponent_at_2,
        local: report.local,
    };
    let is_trivial_solution = params.alpha == 1
        && params.a == BigInt::from(-1)
        && params.b.is_one()
        && params.c == BigInt::from(-1);
    Ok(Analysis {
        alpha_reduction,
        cartan_type: cartan_type(p)?,
        is_trivial_level: is_trivial_level(&invariants),
        is_trivial_solution,
        odd_valuations_divisible_by_p: invariants.odd_valuations_divisible_by(p),
        params,
        triple,
        model,
        invariants,
        oracle,
    })
}
