//! Q-divisors: finite formal sums of named curve classes with exact rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"`, allowing surrounding whitespace and a sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() || den.is_negative() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A Q-linear combination of named curve classes.
///
/// Terms with coefficient zero are never stored, so two divisors are equal
/// exactly when their stored maps are.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QDivisor {
    terms: BTreeMap<String, Rational>,
}

impl QDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut d = Self::new();
        for (name, c) in terms {
            d.add_term(name, c);
        }
        d
    }

    /// The single prime divisor `name` with coefficient one.
    pub fn prime(name: impl Into<String>) -> Self {
        Self::from_terms([(name.into(), Rational::one())])
    }

    pub fn coefficient(&self, name: &str) -> Rational {
        self.terms.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, name: impl Into<String>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let name = name.into();
        let entry = self.terms.entry(name.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&name);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }
}

impl Add for &QDivisor {
    type Output = QDivisor;

    fn add(self, rhs: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &QDivisor {
    type Output = QDivisor;

    fn sub(self, rhs: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }
}

impl Neg for &QDivisor {
    type Output = QDivisor;

    fn neg(self) -> QDivisor {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (name, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            if abs.is_one() {
                write!(f, "{name}")?;
            } else if abs.is_integer() {
                write!(f, "{}{name}", abs.numer())?;
            } else {
                write!(f, "({}){name}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}
