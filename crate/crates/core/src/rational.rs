//! Exact rationals, extended slopes, fractional-linear maps, and closed
//! parameter intervals.
//!
//! Everything here is arbitrary-precision and immutable; slope equality is
//! exact, which is what lets the certificate modules decide verdicts rather
//! than approximate them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced rational number with positive denominator.
///
/// The zero fraction is `0/1`. Construction through [`Fraction::new`]
/// normalizes sign and greatest common divisor, so two fractions are equal
/// exactly when their fields are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(BigRational);

impl Fraction {
    /// The unique reduced representative of `num/den` with positive
    /// denominator.
    ///
    /// `(0, 0)` is rejected with [`Error::ZeroOverZero`]; a zero denominator
    /// with nonzero numerator is rejected with [`Error::ZeroDenominator`]
    /// (use [`ExtendedSlope::from_ratio`] where `1/0` should normalize to
    /// the slope `inf`).
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return if num.is_zero() {
                Err(Error::ZeroOverZero)
            } else {
                Err(Error::ZeroDenominator)
            };
        }
        Ok(Fraction(BigRational::new(num, den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Fraction(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Fraction(BigRational::zero())
    }

    pub fn one() -> Self {
        Fraction(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Fraction(self.0.abs())
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Multiplicative inverse; the zero fraction has none.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Fraction(self.0.recip()))
    }
}

impl From<i64> for Fraction {
    fn from(n: i64) -> Self {
        Fraction::from_integer(n)
    }
}

impl Add for &Fraction {
    type Output = Fraction;
    fn add(self, rhs: &Fraction) -> Fraction {
        Fraction(&self.0 + &rhs.0)
    }
}

impl Sub for &Fraction {
    type Output = Fraction;
    fn sub(self, rhs: &Fraction) -> Fraction {
        Fraction(&self.0 - &rhs.0)
    }
}

impl Mul for &Fraction {
    type Output = Fraction;
    fn mul(self, rhs: &Fraction) -> Fraction {
        Fraction(&self.0 * &rhs.0)
    }
}

impl Neg for &Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction(-&self.0)
    }
}

impl fmt::Display for Fraction {
    /// Always renders with an explicit denominator, e.g. `16/7`, `-5/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Fraction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::fraction(s)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A slope on a torus boundary: a finite fraction, `inf` (= 1/0), or
/// `empty` (no boundary on that component).
///
/// Both signed infinite limits normalize to the single slope `inf`; slopes
/// are unoriented.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedSlope {
    Finite(Fraction),
    Infinity,
    Empty,
}

impl ExtendedSlope {
    /// Normalizes an integer ratio as a slope: `n/0` with `n != 0` is
    /// `Infinity`, `0/0` is rejected.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return if num.is_zero() {
                Err(Error::ZeroOverZero)
            } else {
                Ok(ExtendedSlope::Infinity)
            };
        }
        Ok(ExtendedSlope::Finite(Fraction(BigRational::new(num, den))))
    }

    pub fn zero() -> Self {
        ExtendedSlope::Finite(Fraction::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedSlope::Finite(_))
    }

    pub fn as_fraction(&self) -> Option<&Fraction> {
        match self {
            ExtendedSlope::Finite(f) => Some(f),
            _ => None,
        }
    }
}

impl From<Fraction> for ExtendedSlope {
    fn from(f: Fraction) -> Self {
        ExtendedSlope::Finite(f)
    }
}

impl From<i64> for ExtendedSlope {
    fn from(n: i64) -> Self {
        ExtendedSlope::Finite(Fraction::from_integer(n))
    }
}

impl fmt::Display for ExtendedSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedSlope::Finite(q) => q.fmt(f),
            ExtendedSlope::Infinity => write!(f, "inf"),
            ExtendedSlope::Empty => write!(f, "empty"),
        }
    }
}

impl FromStr for ExtendedSlope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::slope(s)
    }
}

impl Serialize for ExtendedSlope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedSlope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An interval endpoint in the extended order
/// `-inf < finite < inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(Fraction),
    Infinity,
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInfinity => 0,
            Bound::Finite(_) => 1,
            Bound::Infinity => 2,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInfinity => write!(f, "-inf"),
            Bound::Finite(q) => q.fmt(f),
            Bound::Infinity => write!(f, "inf"),
        }
    }
}

/// A closed parameter interval `[lo, hi]`, both endpoints inclusive.
///
/// The slope `inf` (an unsigned 1/0) is placed at the top of the extended
/// order, so it belongs to an interval exactly when the upper bound is
/// `Infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamInterval {
    lo: Bound,
    hi: Bound,
}

impl ParamInterval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        Ok(ParamInterval { lo, hi })
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    /// Exact closed-interval membership. `t` must be `Finite` or `Infinity`.
    pub fn contains(&self, t: &ExtendedSlope) -> bool {
        let b = match t {
            ExtendedSlope::Finite(f) => Bound::Finite(f.clone()),
            ExtendedSlope::Infinity => Bound::Infinity,
            ExtendedSlope::Empty => panic!("interval membership is undefined for the empty slope"),
        };
        self.lo <= b && b <= self.hi
    }
}

impl fmt::Display for ParamInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Solution set of `m(t) = v` for a fractional-linear map `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solutions {
    /// No parameter value maps to `v`.
    None,
    /// Exactly one parameter value maps to `v`.
    Unique(ExtendedSlope),
    /// The map is constant with value `v`.
    All,
}

/// The fractional-linear map `t -> (a*t + b) / (c*t + d)` with integer
/// coefficients.
///
/// A map with `a*d - b*c != 0` is a bijection of the extended slopes
/// (excluding `empty`). A degenerate map (`a*d - b*c = 0`) is only admitted
/// with `(c, d) != (0, 0)` and then encodes a constant; it reports that
/// constant through [`MobiusMap::constant_value`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl MobiusMap {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() && d.is_zero() {
            return Err(Error::InvalidInput(
                "fractional-linear map with identically zero denominator".into(),
            ));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    /// The constant map with value `v`, encoded as `(0*t + p) / (0*t + q)`.
    pub fn constant(v: &Fraction) -> Self {
        MobiusMap {
            a: BigInt::zero(),
            b: v.numer().clone(),
            c: BigInt::zero(),
            d: v.denom().clone(),
        }
    }

    /// The affine map `t -> a*t + b`.
    pub fn linear(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        MobiusMap {
            a: a.into(),
            b: b.into(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// The map `t -> (a*t + b) / t`, i.e. `a + b/t`.
    pub fn over_t(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        MobiusMap {
            a: a.into(),
            b: b.into(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant().is_zero()
    }

    /// The constant a degenerate map encodes; `None` for nondegenerate maps.
    ///
    /// With `(c, d) != (0, 0)` and zero determinant the rows are
    /// proportional, `(a, b) = v * (c, d)`, and the constant `v` is always
    /// finite.
    pub fn constant_value(&self) -> Option<Fraction> {
        if !self.is_degenerate() {
            return None;
        }
        let v = if self.c.is_zero() {
            BigRational::new(self.b.clone(), self.d.clone())
        } else {
            BigRational::new(self.a.clone(), self.c.clone())
        };
        Some(Fraction(v))
    }

    /// Exact evaluation over extended slopes, with `1/0` normalizing to
    /// `Infinity`.
    ///
    /// At `t = Infinity` the value is `a/c`; when `(a, c) = (0, 0)` the map
    /// is the constant `b/d` and that constant is returned. The only error
    /// is the indeterminate point of a degenerate map, where both rows
    /// vanish. Panics if called with the `empty` slope.
    pub fn eval(&self, t: &ExtendedSlope) -> Result<ExtendedSlope> {
        match t {
            ExtendedSlope::Infinity => {
                if self.a.is_zero() && self.c.is_zero() {
                    // (c, d) != (0, 0) forces d != 0 here.
                    ExtendedSlope::from_ratio(self.b.clone(), self.d.clone())
                } else {
                    ExtendedSlope::from_ratio(self.a.clone(), self.c.clone())
                }
            }
            ExtendedSlope::Finite(f) => {
                let (x, y) = (f.numer(), f.denom());
                let n = &self.a * x + &self.b * y;
                let m = &self.c * x + &self.d * y;
                if n.is_zero() && m.is_zero() {
                    return Err(Error::UndefinedValue { at: t.clone() });
                }
                ExtendedSlope::from_ratio(n, m)
            }
            ExtendedSlope::Empty => panic!("fractional-linear maps do not act on the empty slope"),
        }
    }

    /// Exact solution set of `self(t) = v`.
    ///
    /// Nondegenerate maps are bijective, so the result is always `Unique`
    /// (the inverse map applied to `v`). Degenerate maps yield `All` when
    /// `v` equals their constant and `None` otherwise. Panics if called
    /// with the `empty` slope.
    pub fn solve(&self, v: &ExtendedSlope) -> Solutions {
        assert!(
            !matches!(v, ExtendedSlope::Empty),
            "fractional-linear maps never attain the empty slope"
        );
        if let Some(constant) = self.constant_value() {
            return if v == &ExtendedSlope::Finite(constant) {
                Solutions::All
            } else {
                Solutions::None
            };
        }
        let inverse = MobiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        };
        let t = inverse
            .eval(v)
            .expect("inverse of a nondegenerate map is total");
        Solutions::Unique(t)
    }

    /// Matrix composition: `(self.compose(inner))(t) = self(inner(t))`.
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
    }

    /// Projective equality: equal as maps, i.e. coefficient rows agree up to
    /// one nonzero scalar.
    pub fn proj_eq(&self, other: &MobiusMap) -> bool {
        let cross = |x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt| x * v - y * u;
        cross(&self.a, &self.b, &other.a, &other.b).is_zero()
            && cross(&self.a, &self.c, &other.a, &other.c).is_zero()
            && cross(&self.a, &self.d, &other.a, &other.d).is_zero()
            && cross(&self.b, &self.c, &other.b, &other.c).is_zero()
            && cross(&self.b, &self.d, &other.b, &other.d).is_zero()
            && cross(&self.c, &self.d, &other.c, &other.d).is_zero()
    }

    /// Renders the map as a formula in `var`, e.g. `2t`, `-2/t`,
    /// `(-6t - 2)/t`.
    pub fn render(&self, var: char) -> String {
        let num = poly(&self.a, &self.b, var);
        let den = poly(&self.c, &self.d, var);
        if den == "1" {
            num
        } else {
            let num = if num.contains(' ') {
                format!("({num})")
            } else {
                num
            };
            let den = if den.contains(' ') {
                format!("({den})")
            } else {
                den
            };
            format!("{num}/{den}")
        }
    }
}

/// Serde adapter rendering `BigInt` fields as decimal strings, keeping
/// JSON documents exact at any magnitude.
pub mod bigint_string {
    use num::bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &BigInt,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<BigInt, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Renders `p*var + q` without redundant terms.
fn poly(p: &BigInt, q: &BigInt, var: char) -> String {
    if p.is_zero() {
        return q.to_string();
    }
    let head = if p.is_one() {
        format!("{var}")
    } else if (-p).is_one() {
        format!("-{var}")
    } else {
        format!("{p}{var}")
    };
    if q.is_zero() {
        head
    } else if q.is_negative() {
        format!("{head} - {}", -q)
    } else {
        format!("{head} + {q}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn slope(n: i64, d: i64) -> ExtendedSlope {
        ExtendedSlope::from_ratio(n, d).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(fr(6, -4), fr(-3, 2));
        assert_eq!(fr(0, 7), Fraction::zero());
        assert_eq!(fr(16, 7).to_string(), "16/7");
        assert_eq!(Fraction::new(0, 0), Err(Error::ZeroOverZero));
        assert_eq!(Fraction::new(3, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn normalization_is_idempotent() {
        let f = fr(-9, 6);
        assert_eq!(Fraction::new(f.numer().clone(), f.denom().clone()).unwrap(), f);
        assert!(f.denom() > &BigInt::zero());
    }

    #[test]
    fn slope_normalization() {
        assert_eq!(ExtendedSlope::from_ratio(3, 0).unwrap(), ExtendedSlope::Infinity);
        assert_eq!(ExtendedSlope::from_ratio(-3, 0).unwrap(), ExtendedSlope::Infinity);
        assert_eq!(ExtendedSlope::from_ratio(0, 0), Err(Error::ZeroOverZero));
        assert_eq!(slope(6, -4).to_string(), "-3/2");
    }

    #[test]
    fn mobius_eval_basics() {
        // 2/t at 0 jumps to inf; at inf it returns a/c = 0.
        let two_over_t = MobiusMap::over_t(0, 2);
        assert_eq!(two_over_t.eval(&slope(0, 1)).unwrap(), ExtendedSlope::Infinity);
        assert_eq!(two_over_t.eval(&ExtendedSlope::Infinity).unwrap(), slope(0, 1));

        let double = MobiusMap::linear(2, 0);
        assert_eq!(double.eval(&slope(3, 2)).unwrap(), slope(3, 1));
        assert_eq!(double.eval(&ExtendedSlope::Infinity).unwrap(), ExtendedSlope::Infinity);
    }

    #[test]
    fn constant_maps_are_constant_everywhere() {
        let c = MobiusMap::constant(&fr(-2, 1));
        assert!(c.is_degenerate());
        assert_eq!(c.constant_value(), Some(fr(-2, 1)));
        for t in [slope(0, 1), slope(7, 3), ExtendedSlope::Infinity] {
            assert_eq!(c.eval(&t).unwrap(), slope(-2, 1));
        }
    }

    #[test]
    fn degenerate_map_off_its_locus() {
        // (t + 1)/(t + 1) is the constant 1 away from t = -1.
        let m = MobiusMap::new(1, 1, 1, 1).unwrap();
        assert_eq!(m.constant_value(), Some(fr(1, 1)));
        assert_eq!(m.eval(&slope(5, 1)).unwrap(), slope(1, 1));
        assert_eq!(m.eval(&ExtendedSlope::Infinity).unwrap(), slope(1, 1));
        assert_eq!(
            m.eval(&slope(-1, 1)),
            Err(Error::UndefinedValue { at: slope(-1, 1) })
        );
    }

    #[test]
    fn solve_examples() {
        let double = MobiusMap::linear(2, 0);
        assert_eq!(double.solve(&slope(4, 1)), Solutions::Unique(slope(2, 1)));

        let two_over_t = MobiusMap::over_t(0, 2);
        assert_eq!(
            two_over_t.solve(&ExtendedSlope::Infinity),
            Solutions::Unique(slope(0, 1))
        );

        let c = MobiusMap::constant(&fr(-2, 1));
        assert_eq!(c.solve(&slope(-2, 1)), Solutions::All);
        assert_eq!(c.solve(&slope(3, 1)), Solutions::None);
        assert_eq!(c.solve(&ExtendedSlope::Infinity), Solutions::None);
    }

    #[test]
    fn solve_inverts_eval() {
        let m = MobiusMap::new(3, -1, 2, 5).unwrap();
        for t in [slope(0, 1), slope(-7, 3), slope(5, 2), ExtendedSlope::Infinity] {
            let v = m.eval(&t).unwrap();
            assert_eq!(m.solve(&v), Solutions::Unique(t));
        }
    }

    #[test]
    fn interval_membership() {
        let iv = ParamInterval::new(Bound::Finite(fr(0, 1)), Bound::Infinity).unwrap();
        assert!(iv.contains(&ExtendedSlope::Infinity));
        assert!(iv.contains(&slope(0, 1)));
        assert!(!iv.contains(&slope(-1, 2)));

        let sym = ParamInterval::new(Bound::Finite(fr(-1, 1)), Bound::Finite(fr(1, 1))).unwrap();
        assert!(!sym.contains(&slope(2, 1)));
        assert!(sym.contains(&slope(1, 1)));
        assert!(!sym.contains(&ExtendedSlope::Infinity));

        let tail = ParamInterval::new(Bound::Finite(fr(1, 1)), Bound::Infinity).unwrap();
        assert!(tail.contains(&slope(1, 1)));
    }

    #[test]
    fn render_formulas() {
        assert_eq!(MobiusMap::over_t(0, 2).render('t'), "2/t");
        assert_eq!(MobiusMap::linear(2, 0).render('t'), "2t");
        assert_eq!(MobiusMap::over_t(-6, -2).render('t'), "(-6t - 2)/t");
        assert_eq!(MobiusMap::linear(1, -5).render('s'), "s - 5");
    }
}
