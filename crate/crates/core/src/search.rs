//! Bounded-height exhaustive searches: `a^p + L^α·b^p + c^p = 0` and
//! arithmetic progressions of perfect powers.
//!
//! Every search compares its outcome with what the known theorems (or, where
//! no theorem applies, the standing conjectures) predict, and reports any
//! disagreement as a counterexample candidate. Records are re-verified with
//! exact arithmetic before they are returned.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, decimal, exact_root, ExactInt};
use crate::denes;
use crate::error::{Error, Result};
use crate::frey;
use crate::par;

/// Odd primes `L` for which `a^p + L^α b^p + c^p = 0` has no nonzero
/// solution once `p ≥ 11`, `p ≠ L`.
pub const SIGMA: [u64; 11] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 53, 59];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub p: u64,
    pub alpha: u32,
    #[serde(rename = "L")]
    pub base: u64,
    pub height: u64,
    pub require_primitive: bool,
}

impl SearchSpec {
    pub fn new(p: u64, alpha: u32, height: u64) -> Self {
        Self {
            p,
            alpha,
            base: 2,
            height,
            require_primitive: true,
        }
    }

    pub fn with_base(mut self, base: u64) -> Self {
        self.base = base;
        self
    }

    pub fn allow_imprimitive(mut self) -> Self {
        self.require_primitive = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        arith::ensure_odd_prime(self.p)?;
        arith::ensure_prime(self.base)?;
        if self.height == 0 {
            return Err(Error::InvalidArgument("height must be at least 1".into()));
        }
        if self.height > i64::MAX as u64 / 2 {
            return Err(Error::InvalidArgument("height too large".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    #[serde(with = "decimal")]
    pub a: ExactInt,
    #[serde(with = "decimal")]
    pub b: ExactInt,
    #[serde(with = "decimal")]
    pub c: ExactInt,
}

impl Triple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    fn trivial() -> Self {
        Self::new(-1, 1, -1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "decimal")]
    pub a: ExactInt,
    #[serde(with = "decimal")]
    pub b: ExactInt,
    #[serde(with = "decimal")]
    pub c: ExactInt,
    /// The normalized Frey representative (`a ≡ −1 mod 4`), when the record
    /// is a primitive solution of the `L = 2`, `1 ≤ α < p` equation.
    pub normalized_form: Option<Triple>,
    pub trivial: bool,
    /// gcd of `(a, b, c)`; only differs from 1 in imprimitive searches.
    #[serde(with = "decimal")]
    pub content: ExactInt,
}

impl SolutionRecord {
    pub fn is_primitive(&self) -> bool {
        self.content.is_one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    NoSolutions,
    TrivialOnly,
    NoClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Proven,
    Conjectural,
    Empirical,
    None,
}

/// What the search is expected to find, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub expectation: Expectation,
    pub basis: String,
    pub status: ClaimStatus,
}

impl Claim {
    fn new(expectation: Expectation, basis: &str, status: ClaimStatus) -> Self {
        Self {
            expectation,
            basis: basis.to_string(),
            status,
        }
    }

    fn none(basis: &str) -> Self {
        Self::new(Expectation::NoClaim, basis, ClaimStatus::None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub spec: SearchSpec,
    pub claim: Claim,
    pub solutions: Vec<SolutionRecord>,
    pub conforms: bool,
    pub counterexamples: Vec<SolutionRecord>,
}

/// Why the three-term `q`-th power progression (`α = 1`) is known or
/// expected to be trivial.
fn progression_basis(q: u64) -> Claim {
    if q == 3 {
        return Claim::new(Expectation::TrivialOnly, "legendre_cubic", ClaimStatus::Proven);
    }
    if denes::denes_criterion(q).is_ok_and(|r| r.criterion_holds) {
        return Claim::new(Expectation::TrivialOnly, "denes_criterion", ClaimStatus::Proven);
    }
    if q % 4 == 1 && q >= 17 {
        return Claim::new(Expectation::TrivialOnly, "split_cartan", ClaimStatus::Proven);
    }
    Claim::new(Expectation::TrivialOnly, "denes_conjecture", ClaimStatus::Conjectural)
}

/// The claim a search over `spec` is checked against.
pub fn expected_claim(spec: &SearchSpec) -> Claim {
    let (p, alpha) = (spec.p, spec.alpha as u64);
    if spec.base == 2 {
        return match alpha {
            _ if alpha >= p => Claim::none("alpha_not_reduced"),
            0 => Claim::new(Expectation::NoSolutions, "fermat", ClaimStatus::Proven),
            1 => progression_basis(p),
            _ if p == 3 => Claim::new(Expectation::NoSolutions, "euler_cubic", ClaimStatus::Proven),
            _ => Claim::new(Expectation::NoSolutions, "alpha_at_least_2", ClaimStatus::Proven),
        };
    }
    if SIGMA.contains(&spec.base) && p >= 11 && p != spec.base {
        return Claim::new(Expectation::NoSolutions, "sigma_family", ClaimStatus::Empirical);
    }
    if alpha == 0 {
        return Claim::new(Expectation::NoSolutions, "fermat", ClaimStatus::Proven);
    }
    Claim::none("outside_sigma_family")
}

struct Kernel {
    p: u64,
    height: i64,
    /// x^p for 0 ≤ x ≤ H
    powers: Vec<BigInt>,
    coeff: BigInt,
    bound: BigInt,
    require_primitive: bool,
}

impl Kernel {
    fn new(spec: &SearchSpec) -> Self {
        let powers: Vec<BigInt> = (0..=spec.height)
            .map(|x| num_traits::pow(BigInt::from(x), spec.p as usize))
            .collect();
        let bound = powers[spec.height as usize].clone();
        Self {
            p: spec.p,
            height: spec.height as i64,
            coeff: num_traits::pow(BigInt::from(spec.base), spec.alpha as usize),
            bound,
            powers,
            require_primitive: spec.require_primitive,
        }
    }

    fn pow(&self, x: i64) -> BigInt {
        let v = &self.powers[x.unsigned_abs() as usize];
        if x < 0 {
            -v
        } else {
            v.clone()
        }
    }

    /// Canonical triples with first coordinate `a`.
    fn scan(&self, a: i64, out: &mut BTreeSet<(BigInt, BigInt, BigInt)>) {
        let ap = self.pow(a);
        for b in (-self.height..=self.height).filter(|&b| b != 0) {
            let cp = -(&ap + &self.coeff * self.pow(b));
            if cp.is_zero() || cp.abs() > self.bound {
                continue;
            }
            let Some(c) = exact_root(&cp, self.p as u32) else {
                continue;
            };
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            if self.require_primitive && !arith::gcd_all(&[a.clone(), b.clone(), c.clone()]).is_one() {
                continue;
            }
            out.insert(frey::canonical_form(&a, &b, &c));
        }
    }
}

fn to_record(spec: &SearchSpec, (a, b, c): (BigInt, BigInt, BigInt)) -> Result<SolutionRecord> {
    let p = spec.p as usize;
    let lhs = num_traits::pow(a.clone(), p)
        + num_traits::pow(BigInt::from(spec.base), spec.alpha as usize) * num_traits::pow(b.clone(), p)
        + num_traits::pow(c.clone(), p);
    if !lhs.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "search produced ({a}, {b}, {c}) which fails re-verification"
        )));
    }
    let content = arith::gcd_all(&[a.clone(), b.clone(), c.clone()]);
    let normalized_form = if spec.base == 2 && content.is_one() {
        frey::normalize(spec.p, spec.alpha, &a, &b, &c)
            .ok()
            .map(|f| Triple::new(f.a, f.b, f.c))
    } else {
        None
    };
    let trivial = spec.base == 2
        && spec.alpha == 1
        && normalized_form.as_ref() == Some(&Triple::trivial());
    Ok(SolutionRecord {
        a,
        b,
        c,
        normalized_form,
        trivial,
        content,
    })
}

/// Sequential kernel over `a_lo ≤ a ≤ a_hi` (zero skipped). Results are
/// canonical, so the union over a partition of `[−H, H]` equals the full search.
pub fn search_star_range(spec: &SearchSpec, a_lo: i64, a_hi: i64) -> Result<Vec<SolutionRecord>> {
    spec.validate()?;
    let kernel = Kernel::new(spec);
    let h = kernel.height;
    let mut found = BTreeSet::new();
    for a in a_lo.max(-h)..=a_hi.min(h) {
        if a != 0 {
            kernel.scan(a, &mut found);
        }
    }
    found.into_iter().map(|t| to_record(spec, t)).collect()
}

/// All solutions with `0 < |a|, |b|, |c| ≤ H`, one record per
/// sign/`a ↔ c` orbit, in canonical order.
pub fn search_star(spec: &SearchSpec) -> Result<Vec<SolutionRecord>> {
    spec.validate()?;
    let kernel = Kernel::new(spec);
    let h = kernel.height;
    let a_values: Vec<i64> = (-h..=h).filter(|&a| a != 0).collect();
    let found: BTreeSet<_> = par::ordered_map(&a_values, |&a| {
        let mut out = BTreeSet::new();
        kernel.scan(a, &mut out);
        out
    })
    .into_iter()
    .flatten()
    .collect();
    found.into_iter().map(|t| to_record(spec, t)).collect()
}

fn check_claim(claim: &Claim, solutions: &[SolutionRecord]) -> (bool, Vec<SolutionRecord>) {
    let counterexamples: Vec<SolutionRecord> = match claim.expectation {
        Expectation::NoClaim => Vec::new(),
        Expectation::NoSolutions => solutions.iter().filter(|s| s.is_primitive()).cloned().collect(),
        Expectation::TrivialOnly => solutions
            .iter()
            .filter(|s| s.is_primitive() && !s.trivial)
            .cloned()
            .collect(),
    };
    (counterexamples.is_empty(), counterexamples)
}

/// Run [`search_star`] and classify the result against [`expected_claim`].
pub fn search_report(spec: &SearchSpec) -> Result<SearchReport> {
    let solutions = search_star(spec)?;
    let claim = expected_claim(spec);
    let (conforms, counterexamples) = check_claim(&claim, &solutions);
    Ok(SearchReport {
        spec: spec.clone(),
        claim,
        solutions,
        conforms,
        counterexamples,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicReport {
    pub height: u64,
    pub alpha_2: SearchReport,
    pub alpha_1: SearchReport,
    pub conforms: bool,
}

/// `a³ + 4b³ + c³ = 0` (expect nothing) and `a³ + 2b³ + c³ = 0` (expect only
/// `a = c = −b`).
pub fn verify_cubic_cases(height: u64) -> Result<CubicReport> {
    let alpha_2 = search_report(&SearchSpec::new(3, 2, height))?;
    let alpha_1 = search_report(&SearchSpec::new(3, 1, height))?;
    Ok(CubicReport {
        height,
        conforms: alpha_2.conforms && alpha_1.conforms,
        alpha_2,
        alpha_1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub p: u64,
    pub alpha: u32,
    pub claim: Claim,
    pub solutions: usize,
    pub conforms: bool,
    pub counterexamples: Vec<SolutionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub height: u64,
    pub entries: Vec<VerifyEntry>,
    /// `(p, α)` pairs with `α ≥ p`, which no claim covers.
    pub skipped: Vec<(u64, u32)>,
    pub all_conform: bool,
}

/// Batch [`search_report`] with `L = 2` over every `(p, α)` with `α < p`.
pub fn verify_theorem_claims(p_list: &[u64], alpha_list: &[u32], height: u64) -> Result<VerifyReport> {
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for &p in p_list {
        arith::ensure_odd_prime(p)?;
        for &alpha in alpha_list {
            if alpha as u64 >= p {
                skipped.push((p, alpha));
                continue;
            }
            let rep = search_report(&SearchSpec::new(p, alpha, height))?;
            entries.push(VerifyEntry {
                p,
                alpha,
                claim: rep.claim,
                solutions: rep.solutions.len(),
                conforms: rep.conforms,
                counterexamples: rep.counterexamples,
            });
        }
    }
    Ok(VerifyReport {
        height,
        all_conform: entries.iter().all(|e| e.conforms),
        entries,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApReport {
    pub n: u32,
    pub k: u32,
    pub height: u64,
    pub distinct_only: bool,
    pub progressions: Vec<Vec<u64>>,
    pub claim: Claim,
    pub conforms: bool,
}

/// Claim for non-constant `k`-term progressions of positive `n`-th powers.
pub fn ap_claim(n: u32, k: u32) -> Claim {
    if n == 2 && k == 3 {
        return Claim::none("three_squares_exist");
    }
    if n == 2 {
        return Claim::new(Expectation::NoSolutions, "four_squares", ClaimStatus::Proven);
    }
    if n % 4 == 0 {
        return Claim::new(Expectation::NoSolutions, "fourth_powers", ClaimStatus::Proven);
    }
    // An odd prime q | n turns the progression into one of q-th powers.
    let mut best: Option<Claim> = None;
    let mut m = n as u64;
    let mut q = 3;
    while m > 1 {
        while m % 2 == 0 {
            m /= 2;
        }
        if m == 1 {
            break;
        }
        while m % q != 0 {
            q += 2;
        }
        while m % q == 0 {
            m /= q;
        }
        let basis = progression_basis(q);
        if best.as_ref().map_or(true, |b| b.status != ClaimStatus::Proven) {
            best = Some(basis);
        }
    }
    let b = best.expect("n > 2 has an odd prime factor or is divisible by 4");
    Claim::new(Expectation::NoSolutions, &b.basis, b.status)
}

fn powers_table(n: u32, height: u64) -> Vec<BigInt> {
    (0..=height)
        .map(|x| num_traits::pow(BigInt::from(x), n as usize))
        .collect()
}

fn root_in_range(v: &BigInt, n: u32, height: u64) -> Option<u64> {
    let r = exact_root(v, n)?;
    let r: u64 = r.try_into().ok()?;
    (1..=height).contains(&r).then_some(r)
}

/// `k`-term progressions (`k ∈ {3, 4}`) of `n`-th powers of bases in `[1, H]`,
/// listed with increasing bases.
pub fn search_ap_powers(n: u32, k: u32, height: u64, distinct_only: bool) -> Result<Vec<Vec<u64>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("power n = {n} must be at least 2")));
    }
    if k != 3 && k != 4 {
        return Err(Error::InvalidArgument(format!("progression length k = {k} must be 3 or 4")));
    }
    if height == 0 {
        return Err(Error::InvalidArgument("height must be at least 1".into()));
    }
    let pw = powers_table(n, height);
    let firsts: Vec<u64> = (1..=height).collect();
    let rows = par::ordered_map(&firsts, |&x1| {
        let mut out = Vec::new();
        let start = if distinct_only { x1 + 1 } else { x1 };
        for x in start..=height {
            if k == 3 {
                // x1^n + x^n = 2·x2^n
                let s = &pw[x1 as usize] + &pw[x as usize];
                if s.bit(0) {
                    continue;
                }
                if let Some(x2) = root_in_range(&(s >> 1), n, height) {
                    out.push(vec![x1, x2, x]);
                }
            } else {
                let d = &pw[x as usize] - &pw[x1 as usize];
                let v3 = &pw[x as usize] + &d;
                let Some(x3) = root_in_range(&v3, n, height) else {
                    continue;
                };
                if let Some(x4) = root_in_range(&(&v3 + &d), n, height) {
                    out.push(vec![x1, x, x3, x4]);
                }
            }
        }
        out
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn ap_report(n: u32, k: u32, height: u64, distinct_only: bool) -> Result<ApReport> {
    let progressions = search_ap_powers(n, k, height, distinct_only)?;
    for prog in &progressions {
        let vals: Vec<BigInt> = prog.iter().map(|&x| num_traits::pow(BigInt::from(x), n as usize)).collect();
        let d = &vals[1] - &vals[0];
        if vals.windows(2).any(|w| &w[1] - &w[0] != d) {
            return Err(Error::InvariantViolation(format!("{prog:?} is not a progression")));
        }
    }
    let claim = ap_claim(n, k);
    let conforms = match claim.expectation {
        Expectation::NoSolutions => progressions.iter().all(|p| p.windows(2).all(|w| w[0] == w[1])),
        _ => true,
    };
    Ok(ApReport {
        n,
        k,
        height,
        distinct_only,
        progressions,
        claim,
        conforms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(recs: &[SolutionRecord]) -> Vec<(i64, i64, i64)> {
        recs.iter()
            .map(|r| {
                (
                    r.a.clone().try_into().unwrap(),
                    r.b.clone().try_into().unwrap(),
                    r.c.clone().try_into().unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn star_search_examples() {
        let recs = search_star(&SearchSpec::new(5, 1, 25)).unwrap();
        assert_eq!(triples(&recs), vec![(-1, 1, -1)]);
        assert!(recs[0].trivial);
        assert_eq!(recs[0].normalized_form, Some(Triple::new(-1, 1, -1)));

        assert!(search_star(&SearchSpec::new(5, 2, 25)).unwrap().is_empty());
        assert!(search_star(&SearchSpec::new(11, 1, 20).with_base(3)).unwrap().is_empty());
    }

    #[test]
    fn cubic_with_base_seven_has_a_solution() {
        // 2³ + 7·(−1)³ + (−1)³ = 0: outside the Σ-family hypotheses (p < 11)
        let spec = SearchSpec::new(3, 1, 5).with_base(7);
        let rep = search_report(&spec).unwrap();
        assert!(rep.solutions.iter().any(|r| triples(std::slice::from_ref(r)) == vec![(-1, -1, 2)]
            || triples(std::slice::from_ref(r)) == vec![(2, -1, -1)]));
        assert_eq!(rep.claim.expectation, Expectation::NoClaim);
        assert!(rep.conforms);
    }

    #[test]
    fn large_alpha_has_unreduced_solutions() {
        // a^5 + 2^6 b^5 + c^5 = 0 has (−2, 1, −2), which reduces to an imprimitive triple
        let rep = search_report(&SearchSpec::new(5, 6, 4)).unwrap();
        assert_eq!(triples(&rep.solutions), vec![(-2, 1, -2)]);
        assert_eq!(rep.claim.basis, "alpha_not_reduced");
        assert!(rep.conforms);
    }

    #[test]
    fn imprimitive_solutions_are_tagged() {
        let spec = SearchSpec::new(3, 1, 4).allow_imprimitive();
        let rep = search_report(&spec).unwrap();
        let contents: Vec<i64> = rep.solutions.iter().map(|r| r.content.clone().try_into().unwrap()).collect();
        assert_eq!(contents.iter().filter(|&&c| c == 1).count(), 1);
        assert!(contents.contains(&4));
        assert!(rep.conforms, "imprimitive multiples of the trivial solution are not counterexamples");
    }

    #[test]
    fn claims() {
        assert_eq!(expected_claim(&SearchSpec::new(13, 1, 1)).basis, "denes_criterion");
        assert_eq!(expected_claim(&SearchSpec::new(37, 1, 1)).basis, "split_cartan");
        assert_eq!(expected_claim(&SearchSpec::new(31, 1, 1)).basis, "denes_conjecture");
        assert_eq!(expected_claim(&SearchSpec::new(3, 1, 1)).basis, "legendre_cubic");
        assert_eq!(expected_claim(&SearchSpec::new(3, 2, 1)).basis, "euler_cubic");
        assert_eq!(expected_claim(&SearchSpec::new(7, 0, 1)).basis, "fermat");
        let sigma = expected_claim(&SearchSpec::new(11, 1, 1).with_base(3));
        assert_eq!(sigma.status, ClaimStatus::Empirical);
        assert_eq!(expected_claim(&SearchSpec::new(11, 1, 1).with_base(11)).expectation, Expectation::NoClaim);
    }

    #[test]
    fn cubic_cases() {
        for h in [1, 10, 50] {
            let rep = verify_cubic_cases(h).unwrap();
            assert!(rep.conforms, "H = {h}");
            assert!(rep.alpha_2.solutions.is_empty());
            assert_eq!(triples(&rep.alpha_1.solutions), vec![(-1, 1, -1)]);
        }
    }

    #[test]
    fn verify_examples() {
        let rep = verify_theorem_claims(&[5, 7, 13], &[1, 2, 3], 40).unwrap();
        assert!(rep.all_conform);
        assert_eq!(rep.entries.len(), 9);
        let e13 = rep.entries.iter().find(|e| e.p == 13 && e.alpha == 1).unwrap();
        assert_eq!(e13.solutions, 1);
        assert_eq!(e13.claim.basis, "denes_criterion");
        let empty = verify_theorem_claims(&[], &[1, 2], 10).unwrap();
        assert!(empty.entries.is_empty() && empty.all_conform);
        let rep = verify_theorem_claims(&[3], &[1, 2, 3], 5).unwrap();
        assert_eq!(rep.skipped, vec![(3, 3)]);
        assert!(verify_theorem_claims(&[9], &[1], 5).is_err());
    }

    #[test]
    fn ap_examples() {
        let sq = search_ap_powers(2, 3, 20, true).unwrap();
        assert!(sq.contains(&vec![7, 13, 17]));
        assert!(sq.contains(&vec![1, 5, 7]));
        let with_const = search_ap_powers(2, 3, 20, false).unwrap();
        assert_eq!(with_const.len(), sq.len() + 20);
        assert!(search_ap_powers(2, 4, 300, true).unwrap().is_empty());
        assert!(search_ap_powers(4, 3, 200, true).unwrap().is_empty());
        assert!(search_ap_powers(2, 5, 10, true).is_err());
        assert!(search_ap_powers(1, 3, 10, true).is_err());
    }

    #[test]
    fn ap_claims() {
        assert_eq!(ap_claim(2, 3).expectation, Expectation::NoClaim);
        assert_eq!(ap_claim(2, 4).basis, "four_squares");
        assert_eq!(ap_claim(8, 3).basis, "fourth_powers");
        assert_eq!(ap_claim(3, 3).basis, "legendre_cubic");
        assert_eq!(ap_claim(6, 3).basis, "legendre_cubic");
        assert_eq!(ap_claim(31, 3).status, ClaimStatus::Conjectural);
        assert_eq!(ap_claim(93, 3).basis, "legendre_cubic");
        let rep = ap_report(3, 3, 30, false).unwrap();
        assert_eq!(rep.progressions.len(), 30);
        assert!(rep.conforms);
    }
}
