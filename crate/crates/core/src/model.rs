//! Integral long Weierstrass models `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::decimal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassModel {
    #[serde(with = "decimal")]
    pub a1: BigInt,
    #[serde(with = "decimal")]
    pub a2: BigInt,
    #[serde(with = "decimal")]
    pub a3: BigInt,
    #[serde(with = "decimal")]
    pub a4: BigInt,
    #[serde(with = "decimal")]
    pub a6: BigInt,
}

/// The `b` and `c` invariants together with the discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub discriminant: BigInt,
}

impl WeierstrassModel {
    pub fn new(
        a1: impl Into<BigInt>,
        a2: impl Into<BigInt>,
        a3: impl Into<BigInt>,
        a4: impl Into<BigInt>,
        a6: impl Into<BigInt>,
    ) -> Self {
        Self {
            a1: a1.into(),
            a2: a2.into(),
            a3: a3.into(),
            a4: a4.into(),
            a6: a6.into(),
        }
    }

    /// `y² = x(x − A)(x + B)`, i.e. `a2 = B − A`, `a4 = −AB`.
    pub fn frey(a: &BigInt, b: &BigInt) -> Self {
        Self::new(0, b - a, 0, -(a * b), 0)
    }

    pub fn coefficients(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn invariants(&self) -> Invariants {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let b2_cubed: BigInt = &b2 * &b2 * &b2;
        let c6 = 36 * &b2 * &b4 - 216 * &b6 - b2_cubed;
        let b2_sq_b8: BigInt = &b2 * &b2 * &b8;
        let discriminant =
            9 * &b2 * &b4 * &b6 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 - b2_sq_b8;
        Invariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
        }
    }

    pub fn discriminant(&self) -> BigInt {
        self.invariants().discriminant
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// Substitute `x = x' + r`, `y = y' + s·x' + t`.
    pub fn rst_transform(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        Self {
            a1: a1 + 2 * s,
            a2: a2 - s * a1 + 3 * r - s * s,
            a3: a3 + r * a1 + 2 * t,
            a4: a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6: a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
        }
    }

    /// Divide through by `u`, i.e. `x = u²x'`, `y = u³y'`. Caller guarantees integrality.
    pub(crate) fn scale_down(&self, u: &BigInt) -> Self {
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        Self {
            a1: &self.a1 / u,
            a2: &self.a2 / &u2,
            a3: &self.a3 / &u3,
            a4: &self.a4 / &u4,
            a6: &self.a6 / &u6,
        }
    }

    /// Multiply through by `u` (`x = x'/u²`, `y = y'/u³`); always integral.
    pub fn scale_up(&self, u: &BigInt) -> Self {
        let u2 = u * u;
        let u3 = &u2 * u;
        Self {
            a1: &self.a1 * u,
            a2: &self.a2 * &u2,
            a3: &self.a3 * &u3,
            a4: &self.a4 * (&u2 * &u2),
            a6: &self.a6 * (&u3 * &u3),
        }
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl FromStr for WeierstrassModel {
    type Err = Error;

    /// Parses `a1,a2,a3,a4,a6`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::InvalidArgument(format!(
                "expected five comma-separated coefficients a1,a2,a3,a4,a6, got {s:?}"
            )));
        }
        let mut coeffs = Vec::with_capacity(5);
        for part in parts {
            coeffs.push(
                part.parse::<BigInt>()
                    .map_err(|_| Error::InvalidArgument(format!("bad coefficient {part:?}")))?,
            );
        }
        let mut it = coeffs.into_iter();
        let mut next = || it.next().expect("five coefficients");
        Ok(Self {
            a1: next(),
            a2: next(),
            a3: next(),
            a4: next(),
            a6: next(),
        })
    }
}
