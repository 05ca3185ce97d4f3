//! Laurent polynomials in `v` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An element of `Z[v, v^-1]`.
///
/// Stored as a sorted list of `(exponent, coefficient)` pairs with no zero
/// coefficients, so the zero polynomial is the empty list and equality is
/// structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i32, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `v`
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * v^exp`
    pub fn monomial(c: impl Into<BigInt>, exp: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(exp, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        Self {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Iterates over `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Result<i32, Error> {
        self.terms
            .last()
            .map(|(e, _)| *e)
            .ok_or(Error::ZeroPolynomial("degree"))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Result<i32, Error> {
        self.terms
            .first()
            .map(|(e, _)| *e)
            .ok_or(Error::ZeroPolynomial("valuation"))
    }

    /// The involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// True when every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// `self += c * v^k * other`, the inner loop of every Hecke algebra
    /// computation.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &BigInt, k: i32) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = std::mem::take(&mut self.terms).into_iter().peekable();
        let mut b = other.terms.iter().map(|(e, x)| (e + k, x)).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ea, _)), Some((eb, _))) => {
                    if ea < eb {
                        out.push(a.next().unwrap());
                    } else if eb < ea {
                        let (e, x) = b.next().unwrap();
                        out.push((e, x * c));
                    } else {
                        let (e, mut y) = a.next().unwrap();
                        let (_, x) = b.next().unwrap();
                        y += x * c;
                        if !y.is_zero() {
                            out.push((e, y));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (e, x) = b.next().unwrap();
                    out.push((e, x * c));
                }
                (None, None) => break,
            }
        }
        self.terms = out;
    }

    /// Keeps only the terms with exponent `<= bound`.
    pub fn truncate_above(&self, bound: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e <= bound)
                .cloned()
                .collect(),
        }
    }

    /// JSON-friendly `{exp: coeff}` map. Coefficients that fit in an `i64`
    /// are emitted as numbers, larger ones as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in &self.terms {
            let value = match c.to_i64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::from(c.to_string()),
            };
            map.insert(e.to_string(), value);
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, Error> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("expected an {exp: coeff} object".into()))?;
        let mut terms = Vec::new();
        for (k, v) in obj {
            let e: i32 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{k}`")))?;
            let c: BigInt = match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient `{n}`")))?,
                serde_json::Value::String(s) => s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?,
                other => return Err(Error::Parse(format!("bad coefficient `{other}`"))),
            };
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one(), 0);
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, &BigInt::one(), 0);
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one(), 0);
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, &-BigInt::one(), 0);
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (small, big) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = LaurentPoly::zero();
        for (e, c) in &small.terms {
            out.add_scaled(big, c, *e);
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Renders as e.g. `v^-1 + 2 + v^3`, lowest exponent first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "v")?,
                1 => write!(f, "{abs}v")?,
                _ if unit => write!(f, "v^{e}")?,
                _ => write!(f, "{abs}v^{e}")?,
            }
        }
        Ok(())
    }
}
