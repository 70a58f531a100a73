use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{pow_int, Rational};

/// Closed interval with dyadic fixed-point endpoints `lo / 2^prec` and
/// `hi / 2^prec`. Every operation rounds outward, so the exact result of the
/// same computation on any point of the inputs lies inside the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Interval {
    /// Tightest enclosure of `r` at `prec` fractional bits.
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled_num = r.numer() << prec as usize;
        Interval {
            lo: floor_div(&scaled_num, r.denom()),
            hi: ceil_div(&scaled_num, r.denom()),
            prec,
        }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        let s = BigInt::from(v) << prec as usize;
        Interval {
            lo: s.clone(),
            hi: s,
            prec,
        }
    }

    /// Encloses `sqrt(r)` for `r >= 0`.
    pub fn sqrt_of(r: &Rational, prec: u32) -> Self {
        assert!(!r.is_negative(), "square root of a negative number");
        let shift = 2 * prec as usize;
        let scaled_num = r.numer() << shift;
        let floor_scaled = floor_div(&scaled_num, r.denom());
        let ceil_scaled = ceil_div(&scaled_num, r.denom());
        let lo = floor_scaled.sqrt();
        let mut hi = ceil_scaled.sqrt();
        if &hi * &hi < ceil_scaled {
            hi += 1;
        }
        Interval { lo, hi, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn upper(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::new(
            &self.lo + &self.hi,
            BigInt::one() << (self.prec as usize + 1),
        )
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, BigInt::one() << self.prec as usize)
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lower() <= r && r <= &self.upper()
    }

    /// Every point of `self` exceeds every point of `other`.
    pub fn certainly_greater(&self, other: &Interval) -> bool {
        self.lower() > other.upper()
    }

    fn check(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "interval precision mismatch");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        self.check(other);
        let unit = BigInt::one() << self.prec as usize;
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return Interval {
                lo: floor_div(&(&self.lo * &other.lo), &unit),
                hi: ceil_div(&(&self.hi * &other.hi), &unit),
                prec: self.prec,
            };
        }
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval {
            lo: floor_div(min, &unit),
            hi: ceil_div(max, &unit),
            prec: self.prec,
        }
    }

    /// Quotient by an interval that lies strictly above zero.
    pub fn div_positive(&self, other: &Interval) -> Interval {
        self.check(other);
        assert!(other.lo.is_positive(), "divisor interval must be positive");
        let shift = self.prec as usize;
        let candidates = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = candidates
            .iter()
            .map(|(a, b)| floor_div(&(*a << shift), b))
            .min()
            .unwrap();
        let hi = candidates
            .iter()
            .map(|(a, b)| ceil_div(&(*a << shift), b))
            .max()
            .unwrap();
        Interval {
            lo,
            hi,
            prec: self.prec,
        }
    }

    pub fn powu(&self, mut exp: u64) -> Interval {
        let mut acc = Interval::from_int(1, self.prec);
        let mut sq = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// The `digits`-significant-digit scientific rendering shared by both
    /// endpoints, if they agree after correct rounding.
    pub fn common_scientific(&self, digits: usize) -> Option<String> {
        let lo = super::rational::to_scientific(&self.lower(), digits);
        let hi = super::rational::to_scientific(&self.upper(), digits);
        (lo == hi && !self.lower().is_zero()).then_some(lo)
    }
}

/// Arithmetic shared by exact rationals and enclosing intervals, so closed
/// forms are written once and evaluated either way.
pub trait Scalar: Clone {
    fn constant(&self, v: i64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn powu(&self, exp: u64) -> Self;
}

impl Scalar for Rational {
    fn constant(&self, v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn powu(&self, exp: u64) -> Self {
        Rational::new(pow_int(self.numer(), exp), pow_int(self.denom(), exp))
    }
}

impl Scalar for Interval {
    fn constant(&self, v: i64) -> Self {
        Interval::from_int(v, self.prec)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn powu(&self, exp: u64) -> Self {
        Interval::powu(self, exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{pow, rat};
    use proptest::prelude::*;

    #[test]
    fn sqrt_encloses() {
        let two = rat(2, 1);
        let s = Interval::sqrt_of(&two, 64);
        assert!(s.lower() * s.lower() <= two);
        assert!(s.upper() * s.upper() >= two);
        assert!(s.width() <= rat(1, 1 << 62));
        let exact = Interval::sqrt_of(&rat(9, 16), 8);
        assert!(exact.contains(&rat(3, 4)));
    }

    #[test]
    fn large_powers_stay_enclosing() {
        let x = rat(999, 1000);
        let i = Interval::from_rational(&x, 96).powu(4600);
        assert!(i.contains(&pow(&x, 4600)));
    }

    #[test]
    fn division_and_digits() {
        let one = Interval::from_int(1, 80);
        let three = Interval::from_int(3, 80);
        let q = one.div_positive(&three);
        assert!(q.contains(&rat(1, 3)));
        assert_eq!(q.common_scientific(10).as_deref(), Some("3.333333333e-1"));
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_exact_results(
            a in -50i64..50, b in 1i64..30, c in -50i64..50, d in 1i64..30, e in 0u64..12
        ) {
            let (x, y) = (rat(a, b), rat(c, d));
            let (ix, iy) = (Interval::from_rational(&x, 40), Interval::from_rational(&y, 40));
            prop_assert!(ix.add(&iy).contains(&(&x + &y)));
            prop_assert!(ix.sub(&iy).contains(&(&x - &y)));
            prop_assert!(ix.mul(&iy).contains(&(&x * &y)));
            prop_assert!(ix.powu(e).contains(&pow(&x, e)));
            let pos = Interval::from_rational(&(rat(d, 1) + rat(1, b)), 40);
            prop_assert!(ix.div_positive(&pos).contains(&(&x / (rat(d, 1) + rat(1, b)))));
        }
    }
}
