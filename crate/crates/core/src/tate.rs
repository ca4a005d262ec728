//! Local reduction data by Tate's algorithm.
//!
//! This is the independent route to conductor exponents and minimal
//! discriminants; the closed-form Frey tables in [`crate::frey`] are checked
//! against it. Every prime, including 2 and 3, goes through the full
//! algorithm with residue-field root finding; no valuation shortcuts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, decimal, valuation_or_inf};
use crate::error::{Error, Result};
use crate::model::WeierstrassModel;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reduction {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl Reduction {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, Reduction::MultiplicativeSplit | Reduction::MultiplicativeNonsplit)
    }
}

/// Kodaira symbol of the special fibre. `I(0)` is good reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => f.write_str("II"),
            Kodaira::III => f.write_str("III"),
            Kodaira::IV => f.write_str("IV"),
            Kodaira::IIStar => f.write_str("II*"),
            Kodaira::IIIStar => f.write_str("III*"),
            Kodaira::IVStar => f.write_str("IV*"),
        }
    }
}

impl FromStr for Kodaira {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown Kodaira symbol {s:?}"));
        Ok(match s {
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "II*" => Kodaira::IIStar,
            "III*" => Kodaira::IIIStar,
            "IV*" => Kodaira::IVStar,
            _ => {
                let rest = s.strip_prefix('I').ok_or_else(bad)?;
                match rest.strip_suffix('*') {
                    Some(n) => Kodaira::IStar(n.parse().map_err(|_| bad())?),
                    None => Kodaira::I(rest.parse().map_err(|_| bad())?),
                }
            }
        })
    }
}

impl Serialize for Kodaira {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub prime: u64,
    pub conductor_exponent: u32,
    pub min_disc_valuation: u32,
    pub kodaira_type: Kodaira,
    pub reduction: Reduction,
}

/// Full output of one run: local data plus the model it was read off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateOutcome {
    pub local: LocalData,
    /// A model minimal at the prime, with the singular point moved to the origin.
    pub minimal_model: WeierstrassModel,
    /// Number of `u = ℓ` scalings performed before the model became minimal.
    pub scalings: u32,
}

/// Residue arithmetic modulo the prime under study.
struct Residues {
    l: u64,
    p: BigInt,
}

impl Residues {
    fn new(l: u64) -> Self {
        Self { l, p: BigInt::from(l) }
    }

    fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.p)
    }

    fn divides(&self, x: &BigInt) -> bool {
        (x % &self.p).is_zero()
    }

    fn val(&self, x: &BigInt) -> u32 {
        valuation_or_inf(x, self.l)
    }

    fn inv(&self, x: &BigInt) -> BigInt {
        let r = self.reduce(x).to_u64().expect("residue fits in u64");
        BigInt::from(arith::inv_mod_prime(r, self.l))
    }

    /// `x / y` mod `p` for a unit `y`.
    fn div(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.reduce(&(x * self.inv(y)))
    }

    fn half(&self, x: &BigInt) -> BigInt {
        self.div(x, &BigInt::from(2))
    }

    /// `x·(p + 1)/2` without reduction, so that `x + 2·half_lift(−x) = −p·x`.
    fn half_lift(&self, x: &BigInt) -> BigInt {
        x * ((&self.p + 1u32) / 2u32)
    }
}

fn exact_div(x: &BigInt, y: &BigInt) -> BigInt {
    debug_assert!((x % y).is_zero(), "{x} not divisible by {y}");
    x / y
}

/// Run Tate's algorithm on an integral model at the prime `l`.
pub fn tate(model: &WeierstrassModel, l: u64) -> Result<TateOutcome> {
    if model.is_singular() {
        return Err(Error::SingularModel);
    }
    arith::ensure_prime(l)?;
    let m = Residues::new(l);
    let p = m.p.clone();
    let zero = BigInt::zero();
    let mut e = model.clone();
    let mut scalings = 0u32;

    let done = |e: WeierstrassModel, scalings, f, vd, kodaira, reduction| {
        Ok(TateOutcome {
            local: LocalData {
                prime: l,
                conductor_exponent: f,
                min_disc_valuation: vd,
                kodaira_type: kodaira,
                reduction,
            },
            minimal_model: e,
            scalings,
        })
    };

    loop {
        let inv = e.invariants();
        let vd = m.val(&inv.discriminant);
        if vd == 0 {
            return done(e, scalings, 0, 0, Kodaira::I(0), Reduction::Good);
        }

        // Move the singular point of the reduction to (0, 0).
        let (r, t) = match l {
            2 => {
                if m.divides(&inv.b2) {
                    let r = m.reduce(&e.a4);
                    let t = m.reduce(&(&r * (1 + &e.a2 + &e.a4) + &e.a6));
                    (r, t)
                } else {
                    let r = m.reduce(&e.a3);
                    let t = m.reduce(&(&r + &e.a4));
                    (r, t)
                }
            }
            3 => {
                let r = if m.divides(&inv.b2) {
                    m.reduce(&-&inv.b6)
                } else {
                    m.reduce(&-(&inv.b2 * &inv.b4))
                };
                let t = m.reduce(&(&e.a1 * &r + &e.a3));
                (r, t)
            }
            _ => {
                let r = if m.divides(&inv.c4) {
                    m.div(&-&inv.b2, &BigInt::from(12))
                } else {
                    m.div(&-(&inv.c6 + &inv.b2 * &inv.c4), &(12 * &inv.c4))
                };
                let t = m.half(&-(&e.a1 * &r + &e.a3));
                (r, t)
            }
        };
        e = e.rst_transform(&r, &zero, &t);
        let inv = e.invariants();
        debug_assert!(m.divides(&e.a3) && m.divides(&e.a4) && m.divides(&e.a6));

        if !m.divides(&inv.c4) {
            // Node: split iff the tangent slopes T² + a1·T − a2 are rational.
            let split = if l == 2 {
                m.divides(&e.a2)
            } else {
                arith::legendre_symbol(&inv.b2, l)? == 1
            };
            let reduction = if split {
                Reduction::MultiplicativeSplit
            } else {
                Reduction::MultiplicativeNonsplit
            };
            return done(e, scalings, 1, vd, Kodaira::I(vd), reduction);
        }

        if m.val(&e.a6) < 2 {
            return done(e, scalings, vd, vd, Kodaira::II, Reduction::Additive);
        }
        if m.val(&inv.b8) < 3 {
            return done(e, scalings, vd - 1, vd, Kodaira::III, Reduction::Additive);
        }
        if m.val(&inv.b6) < 3 {
            return done(e, scalings, vd - 2, vd, Kodaira::IV, Reduction::Additive);
        }

        // Arrange p | a1, a2; p² | a3, a4; p³ | a6.
        let (s, t) = if l == 2 {
            let s = m.reduce(&e.a2);
            let t = 2 * m.reduce(&exact_div(&e.a6, &BigInt::from(4)));
            (s, t)
        } else {
            (m.half_lift(&-&e.a1), m.half_lift(&-&e.a3))
        };
        e = e.rst_transform(&zero, &s, &t);

        let p2 = &p * &p;
        let p3 = &p2 * &p;
        let b = exact_div(&e.a2, &p);
        let c = exact_div(&e.a4, &p2);
        let d = exact_div(&e.a6, &p3);
        let w = 27 * &d * &d - &b * &b * &c * &c + 4 * &b * &b * &b * &d - 18 * &b * &c * &d
            + 4 * &c * &c * &c;
        let x = 3 * &c - &b * &b;

        if !m.divides(&w) {
            // P(T) = T³ + bT² + cT + d has distinct roots.
            return done(e, scalings, vd - 4, vd, Kodaira::IStar(0), Reduction::Additive);
        }

        if !m.divides(&x) {
            // One double root; move it to T = 0.
            let root = match l {
                2 => m.reduce(&c),
                3 => m.reduce(&(&b * &c)),
                _ => m.div(&(&b * &c - 9 * &d), &(2 * &x)),
            };
            e = e.rst_transform(&(&p * root), &zero, &zero);
            let mut ix = 3u32;
            let mut iy = 3u32;
            let mut mx = p2.clone();
            let mut my = p2.clone();
            loop {
                let a3t = exact_div(&e.a3, &my);
                let a6t = exact_div(&e.a6, &(&mx * &my));
                if !m.divides(&(&a3t * &a3t + 4 * &a6t)) {
                    break;
                }
                let t = if l == 2 {
                    &my * m.reduce(&a6t)
                } else {
                    &my * m.half(&-&a3t)
                };
                e = e.rst_transform(&zero, &zero, &t);
                my *= &p;
                iy += 1;

                let a2t = exact_div(&e.a2, &p);
                let a4t = exact_div(&e.a4, &(&p * &mx));
                let a6t = exact_div(&e.a6, &(&mx * &my));
                if !m.divides(&(&a4t * &a4t - 4 * &a6t * &a2t)) {
                    break;
                }
                let r = if l == 2 {
                    &mx * m.reduce(&(&a6t * &a2t))
                } else {
                    &mx * m.div(&-&a4t, &(2 * &a2t))
                };
                e = e.rst_transform(&r, &zero, &zero);
                mx *= &p;
                ix += 1;
            }
            let n = ix + iy - 5;
            return done(e, scalings, vd - n - 4, vd, Kodaira::IStar(n), Reduction::Additive);
        }

        // Triple root; move it to T = 0.
        let root = match l {
            2 => m.reduce(&b),
            3 => m.reduce(&-&d),
            _ => m.div(&-&b, &BigInt::from(3)),
        };
        e = e.rst_transform(&(&p * root), &zero, &zero);
        let x3t = exact_div(&e.a3, &p2);
        let x6t = exact_div(&e.a6, &(&p2 * &p2));
        if !m.divides(&(&x3t * &x3t + 4 * &x6t)) {
            return done(e, scalings, vd - 6, vd, Kodaira::IVStar, Reduction::Additive);
        }
        let y_root = if l == 2 { m.reduce(&x6t) } else { m.half(&x3t) };
        e = e.rst_transform(&zero, &zero, &-(&p2 * y_root));
        if m.val(&e.a4) < 4 {
            return done(e, scalings, vd - 7, vd, Kodaira::IIIStar, Reduction::Additive);
        }
        if m.val(&e.a6) < 6 {
            return done(e, scalings, vd - 8, vd, Kodaira::IIStar, Reduction::Additive);
        }

        // Non-minimal at p: divide out and start over.
        e = e.scale_down(&p);
        scalings += 1;
    }
}

pub fn local_data(model: &WeierstrassModel, l: u64) -> Result<LocalData> {
    tate(model, l).map(|o| o.local)
}

/// 2-adic valuation of the minimal discriminant.
pub fn minimal_disc_valuation_at_2(model: &WeierstrassModel) -> Result<u32> {
    local_data(model, 2).map(|d| d.min_disc_valuation)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorReport {
    pub model: WeierstrassModel,
    #[serde(with = "decimal")]
    pub conductor: BigInt,
    /// Local data at every prime dividing the model's discriminant, ascending.
    pub local: Vec<LocalData>,
}

/// Conductor together with the local data at every prime dividing the model
/// discriminant. Fails if the discriminant does not factor within `bound`.
pub fn conductor_report(model: &WeierstrassModel, bound: u64) -> Result<ConductorReport> {
    let disc = model.discriminant();
    if disc.is_zero() {
        return Err(Error::SingularModel);
    }
    let primes: Vec<u64> = arith::factor(&disc, bound)?.into_iter().map(|(q, _)| q).collect();
    let local = par::ordered_map(&primes, |&q| local_data(model, q))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let conductor = local.iter().fold(BigInt::one(), |acc, d| {
        acc * num_traits::pow(BigInt::from(d.prime), d.conductor_exponent as usize)
    });
    Ok(ConductorReport {
        model: model.clone(),
        conductor,
        local,
    })
}

pub fn global_conductor(model: &WeierstrassModel, bound: u64) -> Result<BigInt> {
    conductor_report(model, bound).map(|r| r.conductor)
}
