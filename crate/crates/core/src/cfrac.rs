//! Continued-fraction calculus for 2-bridge links: evaluation, simple
//! (all-positive) canonical forms, Schubert normalization and equivalence,
//! and the finite exclusion check against the odd-length family
//! `[2w+1, 2u+1]`.
//!
//! Evaluation convention: `[a1, ..., an] = a1 + 1/(a2 + 1/(... + 1/an))`,
//! computed projectively so intermediate `1/0` propagates as `inf`.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{bigint_string, ExtendedSlope, Fraction};

/// A continued fraction with nonzero integer terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    terms: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn new<I: Into<BigInt>>(terms: impl IntoIterator<Item = I>) -> Result<Self> {
        let terms: Vec<BigInt> = terms.into_iter().map(Into::into).collect();
        if terms.is_empty() {
            return Err(Error::InvalidInput("continued fraction has no terms".into()));
        }
        if terms.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "continued-fraction terms must be nonzero".into(),
            ));
        }
        Ok(ContinuedFraction { terms })
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// The term sequence in reverse order.
    pub fn reversed(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.reverse();
        ContinuedFraction { terms }
    }

    /// Exact value over extended rationals: `x + inf = inf`, `1/inf = 0`.
    pub fn evaluate(&self) -> ExtendedSlope {
        eval_terms(&self.terms)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self.terms.iter().map(BigInt::to_string).collect();
        write!(f, "{}", rendered.join(","))
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ContinuedFraction::new(crate::parse::cf_terms(s)?)
    }
}

/// Folds `a1 + 1/(a2 + 1/(...))` from the right on projective pairs
/// `(num, den)`; `(0, 0)` can never arise.
fn eval_terms(terms: &[BigInt]) -> ExtendedSlope {
    let mut iter = terms.iter().rev();
    let last = iter.next().expect("term sequences are nonempty");
    let mut num = last.clone();
    let mut den = BigInt::one();
    for a in iter {
        // a + den/num = (a*num + den)/num
        let next = a * &num + &den;
        den = std::mem::replace(&mut num, next);
    }
    ExtendedSlope::from_ratio(num, den).expect("projective fold never reaches 0/0")
}

/// The canonical simple continued fraction of a positive rational: all terms
/// positive (the leading term may be 0 for values below 1) and the last term
/// at least 2, except for the single-term expansion `[1]` of 1.
///
/// Under this convention each positive rational has exactly one expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleCF {
    terms: Vec<BigInt>,
}

impl SimpleCF {
    pub fn new<I: Into<BigInt>>(terms: impl IntoIterator<Item = I>) -> Result<Self> {
        let terms: Vec<BigInt> = terms.into_iter().map(Into::into).collect();
        let bad = |msg: &str| Err(Error::InvalidInput(format!("not a canonical simple form: {msg}")));
        let Some((last, init)) = terms.split_last() else {
            return bad("no terms");
        };
        if terms[0].is_negative() {
            return bad("leading term is negative");
        }
        if init.iter().skip(1).any(|t| t < &BigInt::one()) {
            return bad("interior term below 1");
        }
        if terms.len() == 1 {
            if last < &BigInt::one() {
                return bad("single term below 1");
            }
        } else if last < &BigInt::from(2) {
            return bad("last term below 2");
        }
        Ok(SimpleCF { terms })
    }

    /// Expands a positive fraction by the Euclidean algorithm.
    pub fn of(r: &Fraction) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::NonPositiveInput(r.clone()));
        }
        let mut p = r.numer().clone();
        let mut q = r.denom().clone();
        let mut terms = Vec::new();
        loop {
            let (quot, rem) = p.div_rem(&q);
            terms.push(quot);
            if rem.is_zero() {
                break;
            }
            p = q;
            q = rem;
        }
        Ok(SimpleCF { terms })
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn value(&self) -> Fraction {
        match eval_terms(&self.terms) {
            ExtendedSlope::Finite(f) => f,
            _ => unreachable!("simple forms evaluate to finite positive rationals"),
        }
    }

    /// The same value in the opposite length parity, `[..., a]` as
    /// `[..., a-1, 1]`. `None` for the expansion `[1]`, which has no
    /// all-positive variant.
    pub fn parity_variant(&self) -> Option<Vec<BigInt>> {
        let (last, init) = self.terms.split_last().expect("nonempty");
        if last < &BigInt::from(2) {
            return None;
        }
        let mut variant = init.to_vec();
        variant.push(last - 1);
        variant.push(BigInt::one());
        Some(variant)
    }
}

impl fmt::Display for SimpleCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self.terms.iter().map(BigInt::to_string).collect();
        write!(f, "{}", rendered.join(","))
    }
}

/// A 2-bridge link in Schubert normal form: coprime `(p, q)` with
/// `0 < q < p`, plus a flag recording that the input fraction was negated
/// (i.e. the link is the mirror image of `b(p, q)`).
///
/// The link has two components exactly when `p` is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBridgeLink {
    #[serde(with = "bigint_string")]
    p: BigInt,
    #[serde(with = "bigint_string")]
    q: BigInt,
    mirror: bool,
}

impl TwoBridgeLink {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, mirror: bool) -> Result<Self> {
        let p = p.into();
        let q = q.into();
        if p < BigInt::from(2) || q <= BigInt::zero() || q >= p || p.gcd(&q) != BigInt::one() {
            return Err(Error::InvalidInput(format!(
                "({p}, {q}) is not a Schubert normal form"
            )));
        }
        Ok(TwoBridgeLink { p, q, mirror })
    }

    /// Schubert normalization of a diagram fraction: with `|r| = P/Q`
    /// reduced, `p = P` and `q = Q mod P` taken in `(0, p)`; the mirror flag
    /// records `r < 0`. Fractions with `p <= 1` present unknots or unlinks
    /// and are rejected.
    pub fn normalize(r: &Fraction) -> Result<Self> {
        let v = r.abs();
        let p = v.numer().clone();
        if p <= BigInt::one() {
            return Err(Error::DegenerateLink(r.clone()));
        }
        let q = v.denom().mod_floor(&p);
        debug_assert!(!q.is_zero(), "q = 0 implies p = 1");
        Ok(TwoBridgeLink {
            p,
            q,
            mirror: !r.is_positive(),
        })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn mirror(&self) -> bool {
        self.mirror
    }

    /// The canonical diagram fraction `p/q` (mirror flag not folded in).
    pub fn fraction(&self) -> Fraction {
        Fraction::new(self.p.clone(), self.q.clone()).expect("q > 0")
    }

    /// The same link with the mirror flag folded away: the mirror image of
    /// `b(p, q)` is `b(p, p - q)`.
    pub fn mirror_folded(&self) -> TwoBridgeLink {
        if self.mirror {
            TwoBridgeLink {
                p: self.p.clone(),
                q: &self.p - &self.q,
                mirror: false,
            }
        } else {
            self.clone()
        }
    }

    pub fn components(&self) -> u32 {
        if self.p.is_even() {
            2
        } else {
            1
        }
    }

    fn effective_q(&self) -> BigInt {
        self.mirror_folded().q
    }

    /// Schubert's equivalence for unoriented 2-bridge links:
    /// `b(p, q) = b(p, q')` exactly when `q' = q^{+-1} (mod p)`; allowing
    /// mirrors adds the classes `p - q^{+-1}`. Mirror flags are folded into
    /// `q` before comparing.
    pub fn schubert_equivalent(&self, other: &TwoBridgeLink, allow_mirror: bool) -> bool {
        if self.p != other.p {
            return false;
        }
        let p = &self.p;
        let q1 = self.effective_q();
        let q2 = other.effective_q();
        let inv1 = modular_inverse(&q1, p);
        if q2 == q1 || q2 == inv1 {
            return true;
        }
        allow_mirror && (q2 == p - &q1 || q2 == p - &inv1)
    }

    /// A 2-bridge link is hyperbolic exactly when it is not a torus link,
    /// i.e. `q` is not `1` or `p - 1`.
    pub fn is_hyperbolic(&self) -> bool {
        self.q != BigInt::one() && self.q != &self.p - 1
    }
}

impl fmt::Display for TwoBridgeLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirror {
            write!(f, "mirror b({}, {})", self.p, self.q)
        } else {
            write!(f, "b({}, {})", self.p, self.q)
        }
    }
}

/// Inverse of `a` modulo `m` for coprime inputs, taken in `(0, m)`.
fn modular_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let gcd = a.extended_gcd(m);
    debug_assert!(gcd.gcd.is_one(), "inverse requires coprime inputs");
    gcd.x.mod_floor(m)
}

/// How the canonical simple forms of two links relate; a diagnostic
/// companion to the authoritative fraction-level equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimpleFormRelation {
    /// Identical canonical forms (hence identical normal forms).
    Equal,
    /// One form is the reversal of the other, up to the length-parity
    /// rewrite `[..., a] = [..., a-1, 1]`.
    Reversed,
    Unrelated,
}

/// Result of [`cf_equivalent`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfEquivalence {
    pub equivalent: bool,
    pub simple_forms: SimpleFormRelation,
}

/// Decides whether two continued fractions present equivalent 2-bridge
/// links.
///
/// The verdict is Schubert's fraction-level criterion on the normalized
/// links; the simple-form relation is reported alongside as a diagnostic
/// (sequence equality or reversal is sufficient but, across mirror classes,
/// not a transitive test).
pub fn cf_equivalent(
    cf1: &ContinuedFraction,
    cf2: &ContinuedFraction,
    allow_mirror: bool,
) -> Result<CfEquivalence> {
    let links = [link_of(cf1)?, link_of(cf2)?];
    let equivalent = links[0].schubert_equivalent(&links[1], allow_mirror);

    // The diagnostic expands the mirror-folded fractions, so equal forms
    // pin the same (p, q) class and imply equivalence without mirrors.
    let [s1, s2] = links.map(|l| SimpleCF::of(&l.mirror_folded().fraction()).expect("p/q > 0"));
    let simple_forms = if s1 == s2 {
        SimpleFormRelation::Equal
    } else if reversal_related(&s1, &s2) {
        SimpleFormRelation::Reversed
    } else {
        SimpleFormRelation::Unrelated
    };

    Ok(CfEquivalence {
        equivalent,
        simple_forms,
    })
}

fn link_of(cf: &ContinuedFraction) -> Result<TwoBridgeLink> {
    match cf.evaluate() {
        ExtendedSlope::Finite(f) => TwoBridgeLink::normalize(&f),
        _ => Err(Error::InvalidInput(format!(
            "continued fraction {cf} evaluates to 1/0, not a link fraction"
        ))),
    }
}

/// True when some length-parity variant of `s1`, reversed, equals a
/// length-parity variant of `s2`.
fn reversal_related(s1: &SimpleCF, s2: &SimpleCF) -> bool {
    let variants = |s: &SimpleCF| {
        let mut out = vec![s.terms().to_vec()];
        if let Some(v) = s.parity_variant() {
            out.push(v);
        }
        out
    };
    for v1 in variants(s1) {
        let reversed: Vec<BigInt> = v1.iter().rev().cloned().collect();
        if variants(s2).contains(&reversed) {
            return true;
        }
    }
    false
}

/// The diagram fraction of the 2-bridge link `C(2, 2k, -2)`, i.e. the value
/// `8k/(4k - 1)` of the continued fraction `[2, 2k, -2]`.
pub fn lk_fraction(k: i64) -> Result<Fraction> {
    if k < 1 {
        return Err(Error::OutOfRange(format!("link family requires k >= 1, got {k}")));
    }
    let cf = ContinuedFraction::new([2, 2 * k, -2])?;
    match cf.evaluate() {
        ExtendedSlope::Finite(f) => Ok(f),
        _ => unreachable!("[2, 2k, -2] is finite for k >= 1"),
    }
}

/// The normalized 2-bridge link `C(2, 2k, -2) = b(8k, 4k - 1)`.
pub fn lk_link(k: i64) -> Result<TwoBridgeLink> {
    TwoBridgeLink::normalize(&lk_fraction(k)?)
}

/// One candidate presentation `[2w+1, 2u+1]` compared against
/// `C(2, 2k, -2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertCandidate {
    pub w: i64,
    pub u: i64,
    pub fraction: Fraction,
    pub link: TwoBridgeLink,
    pub equivalent: bool,
}

/// Outcome of [`seifert_family_exclusion`]: every candidate with matching
/// bridge number, each with its equivalence verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertExclusionReport {
    pub k: i64,
    pub candidates: Vec<SeifertCandidate>,
}

impl SeifertExclusionReport {
    /// True when no candidate is equivalent to `C(2, 2k, -2)`.
    pub fn excluded(&self) -> bool {
        self.candidates.iter().all(|c| !c.equivalent)
    }

    pub fn counterexample(&self) -> Option<&SeifertCandidate> {
        self.candidates.iter().find(|c| c.equivalent)
    }
}

/// Checks that `C(2, 2k, -2)` is equivalent to no link of the form
/// `[2w+1, 2u+1]` with `w >= 1` and `u != 0, -1`.
///
/// A candidate can only match if its normal form has `p = 8k`, which pins
/// `(2w+1)(2u+1) = 8k - 1` for `u >= 1` and `(2w+1)(-2u-1) = 8k + 1` for
/// `u <= -2`. Both odd-factor enumerations are finite; every candidate is
/// compared with mirrors allowed, the most permissive reading of the
/// equivalence.
pub fn seifert_family_exclusion(k: i64) -> Result<SeifertExclusionReport> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "exclusion check requires k >= 2, got {k}"
        )));
    }
    if k > (i64::MAX - 1) / 8 {
        return Err(Error::OutOfRange(format!("k = {k} is too large to factor")));
    }
    let target = lk_link(k)?;
    let mut candidates = Vec::new();

    // u >= 1: p = (2w+1)(2u+1) + 1 = 8k, so factor 8k - 1.
    for (a, b) in ordered_odd_factor_pairs(8 * k - 1) {
        let (w, u) = ((a - 1) / 2, (b - 1) / 2);
        candidates.push(candidate(k, w, u, &target)?);
    }
    // u <= -2: p = (2w+1)U - 1 = 8k with U = -(2u+1), so factor 8k + 1.
    for (a, cap_u) in ordered_odd_factor_pairs(8 * k + 1) {
        let (w, u) = ((a - 1) / 2, -(cap_u + 1) / 2);
        candidates.push(candidate(k, w, u, &target)?);
    }

    Ok(SeifertExclusionReport { k, candidates })
}

fn candidate(k: i64, w: i64, u: i64, target: &TwoBridgeLink) -> Result<SeifertCandidate> {
    let cf = ContinuedFraction::new([2 * w + 1, 2 * u + 1])?;
    let fraction = match cf.evaluate() {
        ExtendedSlope::Finite(f) => f,
        _ => unreachable!("odd nonzero terms give finite values"),
    };
    let link = TwoBridgeLink::normalize(&fraction)?;
    debug_assert_eq!(link.p(), &BigInt::from(8 * k), "candidates match p by construction");
    let equivalent = link.schubert_equivalent(target, true);
    Ok(SeifertCandidate {
        w,
        u,
        fraction,
        link,
        equivalent,
    })
}

/// All ordered pairs `(a, b)` with `a * b = n` and `a, b >= 3`, ascending
/// in `a`. For odd `n` every factor is odd.
fn ordered_odd_factor_pairs(n: i64) -> Vec<(i64, i64)> {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut divisors = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            divisors.push(d);
            if d != n / d {
                divisors.push(n / d);
            }
        }
        d += 2;
    }
    divisors.sort_unstable();
    divisors
        .into_iter()
        .filter(|&a| a >= 3 && n / a >= 3)
        .map(|a| (a, n / a))
        .collect()
}
