//! Closed forms on generalized theta graphs: the three-path graph
//! `theta[n, m, l]` and the four-path "counter" graph with outer paths of
//! length `n` and marked inner paths of length `m`.

mod tables;

pub use tables::{
    counter_pair_table, counter_subgraph_table, theta_pair_table, CounterRow, PairTable,
    COUNTER_ROWS_EXPECTED, LX1_EXPECTED, LX2_EXPECTED, LX3_EXPECTED,
};

use num_traits::{One, Signed};

use crate::arith::{Interval, Poly, Rational, RationalFunction, Scalar};
use crate::error::{Error, Result};
use crate::graph::{generalized_theta, Graph};
use crate::measures::CurrentParams;

fn check_lengths(lengths: &[u32]) -> Result<()> {
    if lengths.contains(&0) {
        return Err(Error::InvalidSegments(
            "segment lengths must be positive".into(),
        ));
    }
    Ok(())
}

fn check_counter(n: u32, m: u32) -> Result<()> {
    check_lengths(&[n, m])?;
    if m % 2 == 1 {
        return Err(Error::InvalidSegments(format!(
            "inner length m = {m} must be even"
        )));
    }
    Ok(())
}

/// Partition function of the loop model on a generalized theta graph: the
/// sum of `x^{sum of lengths}` over subsets of an even number of paths.
pub fn z_gen_theta(lengths: &[u32]) -> Result<Poly> {
    check_lengths(lengths)?;
    if lengths.len() > 24 {
        return Err(Error::CapExceeded {
            what: "theta segments",
            size: lengths.len(),
            cap: 24,
        });
    }
    let mut z = Poly::zero();
    for mask in 0u32..1 << lengths.len() {
        if mask.count_ones() % 2 == 0 {
            let total: u64 = (0..lengths.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| lengths[i] as u64)
                .sum();
            z = z + Poly::x_pow(total);
        }
    }
    Ok(z)
}

/// Segments are `[n, n, m, m]`; the marks sit at the midpoints of the two
/// `m` paths.
pub fn counter_graph(n: u32, m: u32) -> Result<Graph> {
    check_counter(n, m)?;
    generalized_theta(&[n, n, m, m], Some((2, 3)))
}

pub fn z_counter(n: u32, m: u32) -> Result<Poly> {
    z_gen_theta(&[n, n, m, m])
}

fn xp(exp: u64) -> Poly {
    Poly::x_pow(exp)
}

fn c(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Loop model connection probability of the marks on the counter graph,
/// `(x^{2m} + x^{2m+2n}) / Z`.
pub fn l_conn(n: u32, m: u32) -> Result<RationalFunction> {
    check_counter(n, m)?;
    let (n, m) = (n as u64, m as u64);
    RationalFunction::new(
        xp(2 * m) + xp(2 * m + 2 * n),
        z_counter(n as u32, m as u32)?,
    )
}

/// Connection probability of the marks for two independent loop samples:
/// `(2x^{2m} Z - x^{4m} + 2x^{2n+2m} Z - x^{4n+4m} - 2x^{2n+4m} + 8x^{2n+2m}) / Z^2`.
pub fn l2_conn(n: u32, m: u32) -> Result<RationalFunction> {
    check_counter(n, m)?;
    let z = z_counter(n, m)?;
    let (n, m) = (n as u64, m as u64);
    let num = (&xp(2 * m) * &z).scale(&c(2)) - xp(4 * m) + (&xp(2 * n + 2 * m) * &z).scale(&c(2))
        - xp(4 * n + 4 * m)
        - xp(2 * n + 4 * m).scale(&c(2))
        + xp(2 * n + 2 * m).scale(&c(8));
    RationalFunction::new(num, &z * &z)
}

/// Single current connection probability of the marks on the counter graph.
/// Exact at Pythagorean `x`, otherwise enclosed by intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingleConn {
    n: u32,
    m: u32,
}

pub fn p_single_conn(n: u32, m: u32) -> Result<SingleConn> {
    check_counter(n, m)?;
    Ok(SingleConn { n, m })
}

impl SingleConn {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Numerator and partition function as functions of `x` and `p`.
    pub fn parts<S: Scalar>(&self, x: &S, p: &S) -> (S, S) {
        let (n, m) = (self.n as u64, self.m as u64);
        let half = m / 2;
        let one = x.constant(1);
        let q = p.powu(half);
        let r = one.minus(&q);
        let outer = p.powu(n).times(&x.constant(2)).minus(&p.powu(2 * n));
        let two_open = q
            .powu(2)
            .times(&r.powu(2))
            .times(&x.constant(2).plus(&x.constant(2).times(&outer)));
        let f = x
            .constant(4)
            .times(&q.powu(3))
            .times(&r)
            .plus(&q.powu(4))
            .plus(&two_open);
        let h = x.constant(2).times(&q).minus(&q.powu(2));
        let x2n = x.powu(2 * n);
        let x2m = x.powu(2 * m);
        let xnm = x.powu(n + m);
        let xall = x2n.times(&x2m);
        let num = f
            .plus(&x2n.times(&h.powu(2)))
            .plus(&x2m)
            .plus(&x.constant(4).times(&xnm).times(&h))
            .plus(&xall);
        let z = one
            .plus(&x2n)
            .plus(&x2m)
            .plus(&x.constant(4).times(&xnm))
            .plus(&xall);
        (num, z)
    }

    pub fn eval(&self, params: &CurrentParams) -> Result<Rational> {
        let p = params.single_current_p()?;
        let (num, z) = self.parts(params.x(), &p);
        Ok(num / z)
    }

    /// Enclosure at `bits` fractional bits, valid for any rational `x` in `[0, 1]`.
    pub fn eval_interval(&self, x: &Rational, bits: u32) -> Result<Interval> {
        if x.is_negative() || *x > Rational::one() {
            return Err(Error::OutOfRange(format!("x = {x} must lie in [0, 1]")));
        }
        let xi = Interval::from_rational(x, bits);
        let s = Interval::sqrt_of(&(Rational::one() - x * x), bits);
        let p = Interval::from_int(1, bits).sub(&s);
        let (num, z) = self.parts(&xi, &p);
        Ok(num.div_positive(&z))
    }
}

/// `Z P(X_1)`, `Z P(X_1 ∩ X_2)` and `Z` for a closed form on `theta[n, m, n]`,
/// where `X_1`, `X_2` are the events that the upper (paths 0, 1) and lower
/// (paths 1, 2) loops are fully open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FkgTriple<S> {
    pub x1: S,
    pub both: S,
    pub z: S,
}

impl FkgTriple<Rational> {
    /// `P(X_1 ∩ X_2) - P(X_1) P(X_2)`.
    pub fn gap(&self) -> Rational {
        &self.both / &self.z - (&self.x1 / &self.z) * (&self.x1 / &self.z)
    }
}

/// Single current on `theta[n, m, n]`, generic in `x` and `p`.
pub fn single_current_fkg<S: Scalar>(n: u32, m: u32, x: &S, p: &S) -> FkgTriple<S> {
    let (n, m) = (n as u64, m as u64);
    let xnm = x.powu(n + m);
    let x2n = x.powu(2 * n);
    let pn = p.powu(n);
    let pm = p.powu(m);
    FkgTriple {
        x1: p
            .powu(n + m)
            .plus(&xnm)
            .plus(&xnm.times(&pn))
            .plus(&x2n.times(&pm)),
        both: p
            .powu(2 * n + m)
            .plus(&x.constant(2).times(&xnm).times(&pn))
            .plus(&x2n.times(&pm)),
        z: x.constant(1).plus(&x.constant(2).times(&xnm)).plus(&x2n),
    }
}

pub fn single_current_fkg_gap(n: u32, m: u32, params: &CurrentParams) -> Result<Rational> {
    check_lengths(&[n, m])?;
    let p = params.single_current_p()?;
    Ok(single_current_fkg(n, m, params.x(), &p).gap())
}

/// Loop model on `theta[n, m, n]`: the two loops are never open together, so
/// the gap is `-(x^{n+m} / Z)^2`.
pub fn loop_fkg_gap(n: u32, m: u32) -> Result<RationalFunction> {
    check_lengths(&[n, m])?;
    let z = z_gen_theta(&[n, m, n])?;
    let (n, m) = (n as u64, m as u64);
    RationalFunction::new(xp(2 * (n + m)).scale(&c(-1)), &z * &z)
}

/// Two loop samples on `theta[n, m, n]`, scaled by `Z^2`:
/// `x1 = 2x^{n+m} + 3x^{2(n+m)} + 4x^{3n+m}`, `both = 2x^{2(n+m)} + 4x^{3n+m}`
/// and `z` is `Z^2`.
pub fn l2_fkg(n: u32, m: u32) -> Result<FkgTriple<Poly>> {
    check_lengths(&[n, m])?;
    let z = z_gen_theta(&[n, m, n])?;
    let (n, m) = (n as u64, m as u64);
    Ok(FkgTriple {
        x1: xp(n + m).scale(&c(2)) + xp(2 * (n + m)).scale(&c(3)) + xp(3 * n + m).scale(&c(4)),
        both: xp(2 * (n + m)).scale(&c(2)) + xp(3 * n + m).scale(&c(4)),
        z: &z * &z,
    })
}

/// `(Z^2 P(X_1))^2 - Z^2 P(X_1 ∩ X_2) Z^2`, which is `Z^4` times
/// `P(X_1) P(X_2) - P(X_1 ∩ X_2)` for two loop samples. Its lowest term is
/// `2x^{2n+2m}` only when `n > m`; otherwise the `x^{3n+m}` terms reach that
/// order first.
pub fn l2_fkg_difference(n: u32, m: u32) -> Result<Poly> {
    let t = l2_fkg(n, m)?;
    Ok(&t.x1 * &t.x1 - &t.both * &t.z)
}

/// Probability under the random cluster model on `theta[l, m, n]` that the
/// cyclic edges are exactly the `l + m` loop: `2x^{l+m}(1 - x^n) / Z`.
pub fn cluster_cyclic_prob(l: u32, m: u32, n: u32) -> Result<RationalFunction> {
    let z = z_gen_theta(&[l, m, n])?;
    let (l, m, n) = (l as u64, m as u64, n as u64);
    RationalFunction::new(xp(l + m).scale(&c(2)) * (Poly::one() - xp(n)), z)
}

/// The same probability under the double current:
/// `(x^{2(l+m)} + 2x^{l+m} + x^{2(l+m)})(1 - x^{2n}) / Z^2`.
pub fn double_current_cyclic_prob(l: u32, m: u32, n: u32) -> Result<RationalFunction> {
    let z = z_gen_theta(&[l, m, n])?;
    let (l, m, n) = (l as u64, m as u64, n as u64);
    let num =
        (xp(2 * (l + m)) + xp(l + m).scale(&c(2)) + xp(2 * (l + m))) * (Poly::one() - xp(2 * n));
    RationalFunction::new(num, &z * &z)
}

/// Numerator `Z 2x^{l+m}` and denominator `(1 + x^n) 2x^{l+m} (1 + x^{l+m})`
/// of the cyclic-law ratio, unreduced.
pub fn cyclic_ratio_parts(l: u32, m: u32, n: u32) -> Result<(Poly, Poly)> {
    let z = z_gen_theta(&[l, m, n])?;
    let (l, m, n) = (l as u64, m as u64, n as u64);
    let two = xp(l + m).scale(&c(2));
    let num = &z * &two;
    let den = (Poly::one() + xp(n)) * two * (Poly::one() + xp(l + m));
    Ok((num, den))
}

/// Ratio of the random cluster and double current probabilities that the
/// cyclic edges form exactly the `l + m` loop.
pub fn cyclic_ratio(l: u32, m: u32, n: u32) -> Result<RationalFunction> {
    let (num, den) = cyclic_ratio_parts(l, m, n)?;
    RationalFunction::new(num, den)
}

/// True when `v` is a probability.
pub fn in_unit_interval(v: &Rational) -> bool {
    !v.is_negative() && *v <= Rational::one()
}
