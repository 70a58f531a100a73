use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{pow, Rational};
use crate::error::{Error, Result};

/// Sparse univariate polynomial in `x` with exact rational coefficients.
///
/// Zero coefficients are never stored, so `x^4600` costs one entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<u64, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::monomial(Rational::one(), 0)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(c, 0)
    }

    pub fn monomial(coeff: Rational, exp: u64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Poly { terms }
    }

    /// `x^exp`.
    pub fn x_pow(exp: u64) -> Self {
        Poly::monomial(Rational::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: u64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest-order term: the small-`x` leading behaviour.
    pub fn lowest_term(&self) -> Option<(u64, Rational)> {
        self.terms.iter().next().map(|(&e, c)| (e, c.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    fn add_term(&mut self, exp: u64, coeff: Rational) {
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Exact value at `x`; consecutive powers are built from exponent gaps.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut power = Rational::one();
        let mut last = 0u64;
        for (&e, c) in &self.terms {
            power *= pow(x, e - last);
            last = e;
            acc += c * &power;
        }
        acc
    }

    pub fn pow(&self, exp: u32) -> Poly {
        (0..exp).fold(Poly::one(), |acc, _| &acc * self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if i > 0 {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            } else if negative {
                write!(f, "-")?;
            }
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of two polynomials in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::OutOfRange("denominator is identically zero".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return RationalFunction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        RationalFunction {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&RationalFunction {
            num: -&other.num,
            den: other.den.clone(),
        })
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Equality as functions: `a/b == c/d` iff `a*d == c*b`.
    pub fn same_function(&self, other: &RationalFunction) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
