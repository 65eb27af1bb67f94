//! Manifold descriptors and certificate composition.
//!
//! A certificate bundles a manifold descriptor, a knot descriptor, the
//! validated hypotheses, hyperbolicity evidence, and smallness evidence
//! into one replayable JSON document with a three-valued verdict:
//! `certified` (every check passed), `refuted` (a check found a concrete
//! witness against the claim), or `invalid` (the input violates a
//! hypothesis; no mathematical claim is made).

use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cfrac::{lk_link, seifert_family_exclusion, ContinuedFraction, TwoBridgeLink};
use crate::error::{Error, Result};
use crate::rational::{bigint_string, ExtendedSlope, Fraction};
use crate::slope_table::{
    empty_partner_slopes, exclusion_check, infinity_partner_pairs, pair_in_table,
    sample_parameters, table_families, MemberWitness, SlopePair,
};

/// The lens space presented by `(-p/q)`-filling of the unknot: coprime
/// `p > 0`, `q != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensSpace {
    p: BigInt,
    q: BigInt,
}

impl LensSpace {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        let q = q.into();
        if p <= BigInt::zero() {
            return Err(Error::InvalidInput(format!("lens space requires p > 0, got p = {p}")));
        }
        if q.is_zero() {
            return Err(Error::InvalidInput("lens space requires q != 0".into()));
        }
        if p.gcd(&q) != BigInt::one() {
            return Err(Error::InvalidInput(format!(
                "lens space requires gcd(p, q) = 1, got gcd({p}, {q}) = {}",
                p.gcd(&q)
            )));
        }
        Ok(LensSpace { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// The filling slope `-p/q`, sign-normalized (`-5/-3` becomes `5/3`).
    pub fn surgery_slope(&self) -> Fraction {
        Fraction::new(-self.p.clone(), self.q.clone()).expect("q != 0")
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.p, self.q)
    }
}

/// Iterator over the admissible family indices for a lens space: yields
/// `k = 2, 3, ...`, skipping exactly the `k` with `p = 4k|q|` (at most one).
pub fn admissible_k(ls: &LensSpace) -> impl Iterator<Item = i64> + 'static {
    let four_abs_q = BigInt::from(4) * ls.q.abs();
    let (quot, rem) = ls.p.div_rem(&four_abs_q);
    let skip = if rem.is_zero() { Some(quot) } else { None };
    (2i64..).filter(move |k| match &skip {
        Some(bad) => BigInt::from(*k) != *bad,
        None => true,
    })
}

/// The three spherical families covered by the trefoil surgery description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToiType {
    T,
    O,
    I,
}

impl ToiType {
    fn from_b3(b3: i64) -> Option<Self> {
        match b3 {
            3 => Some(ToiType::T),
            4 => Some(ToiType::O),
            5 => Some(ToiType::I),
            _ => None,
        }
    }
}

impl fmt::Display for ToiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToiType::T => write!(f, "T"),
            ToiType::O => write!(f, "O"),
            ToiType::I => write!(f, "I"),
        }
    }
}

/// A spherical manifold of type T, O, or I with Seifert description
/// `+/-(-1; 1/2, 1/3, a3/b3)`, obtained by `(6 - b3/a3)`-filling on the
/// right-hand trefoil.
///
/// `|a3| = 1` is rejected as [`Error::ExcludedCase`]: those manifolds are
/// `+/-(-1; 1/2, 1/3, 1/m)` with `m` in `{3, 4, 5}`, and their integral
/// trefoil slopes `6 - b3` in `{1, 2, 3}` are exceptional fillings, so
/// this construction does not reach them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalTOI {
    a3: i64,
    b3: i64,
    toi: ToiType,
    r: Fraction,
}

impl SphericalTOI {
    pub fn new(a3: i64, b3: i64) -> Result<Self> {
        let Some(toi) = ToiType::from_b3(b3) else {
            return Err(Error::InvalidInput(format!("b3 must be 3, 4, or 5, got {b3}")));
        };
        if a3 == 0 {
            return Err(Error::InvalidInput("a3 must be nonzero".into()));
        }
        if a3.unsigned_abs().gcd(&b3.unsigned_abs()) != 1 {
            return Err(Error::InvalidInput(format!(
                "a3 and b3 must be coprime, got ({a3}, {b3})"
            )));
        }
        if a3.abs() == 1 {
            return Err(Error::ExcludedCase(format!(
                "(a3, b3) = ({a3}, {b3}) gives +/-(-1; 1/2, 1/3, 1/{b3}), and the integral \
                 slope {} is an exceptional filling of the trefoil presentation",
                6 - b3
            )));
        }
        // r = 6 - b3/a3 = (6*a3 - b3)/a3; non-integral since |a3| >= 2
        // and gcd(a3, b3) = 1.
        let r = Fraction::new(6 * a3 - b3, a3).expect("a3 != 0");
        Ok(SphericalTOI { a3, b3, toi, r })
    }

    pub fn a3(&self) -> i64 {
        self.a3
    }

    pub fn b3(&self) -> i64 {
        self.b3
    }

    pub fn toi_type(&self) -> ToiType {
        self.toi
    }

    /// The trefoil filling slope `6 - b3/a3`.
    pub fn surgery_slope(&self) -> &Fraction {
        &self.r
    }

    pub fn seifert_symbol(&self) -> String {
        format!("+/-(-1; 1/2, 1/3, {}/{})", self.a3, self.b3)
    }
}

/// The recorded exceptional filling slopes on one component of the
/// Whitehead link. Configuration data: the built-in set lists the slopes
/// this crate's certificates rely on, and can be replaced by any file in
/// the same format (one slope per line, `#` comments).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSlopes {
    slopes: Vec<ExtendedSlope>,
}

impl ExceptionalSlopes {
    /// The built-in set shipped with the crate.
    pub fn default_set() -> Self {
        Self::parse(include_str!("../data/whitehead_exceptional.slopes"))
            .expect("the built-in slope file parses")
    }

    /// Parses the config format: one slope per line, blank lines and
    /// `#`-comments ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut slopes = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let slope = crate::parse::slope(line)?;
            if !slopes.contains(&slope) {
                slopes.push(slope);
            }
        }
        Ok(ExceptionalSlopes { slopes })
    }

    pub fn from_slopes(slopes: Vec<ExtendedSlope>) -> Self {
        let mut dedup = Vec::new();
        for s in slopes {
            if !dedup.contains(&s) {
                dedup.push(s);
            }
        }
        ExceptionalSlopes { slopes: dedup }
    }

    pub fn slopes(&self) -> &[ExtendedSlope] {
        &self.slopes
    }

    pub fn contains(&self, s: &ExtendedSlope) -> bool {
        self.slopes.contains(s)
    }
}

/// One validated hypothesis, recorded with its truth value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub statement: String,
    pub holds: bool,
}

/// One hyperbolicity check with an optional machine-readable detail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceItem {
    pub check: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityEvidence {
    pub method: String,
    pub evidence: Vec<EvidenceItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallnessEvidence {
    pub checked_pairs: Vec<SlopePair>,
    pub trace: Vec<crate::slope_table::ExclusionItem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Invalid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified => write!(f, "certified"),
            Verdict::Refuted => write!(f, "refuted"),
            Verdict::Invalid => write!(f, "invalid"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ManifoldDescriptor {
    Lens {
        #[serde(with = "bigint_string")]
        p: BigInt,
        #[serde(with = "bigint_string")]
        q: BigInt,
        /// `-p/q`, present once the lens hypotheses hold.
        surgery_slope: Option<Fraction>,
    },
    Spherical {
        family: ToiType,
        a3: i64,
        b3: i64,
        seifert: String,
        surgery_slope: Fraction,
    },
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldDescriptor::Lens { p, q, .. } => write!(f, "L({p}, {q})"),
            ManifoldDescriptor::Spherical { family, seifert, .. } => {
                write!(f, "type-{family} spherical manifold {seifert}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KnotDescriptor {
    /// The unfilled component of `C(2, 2k, -2)` after filling the other
    /// component along `filling_slope`.
    TwoBridgeComponent {
        k: i64,
        link: Option<TwoBridgeLink>,
        filling_slope: Option<Fraction>,
    },
    /// The core of the solid torus attached along the second filling slope
    /// (the dual knot), after filling the Whitehead link along
    /// `filling_slopes`.
    FillingDual {
        link: TwoBridgeLink,
        filling_slopes: (Fraction, Fraction),
    },
}

/// A self-contained, replayable record of one existence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallKnotCertificate {
    pub manifold: ManifoldDescriptor,
    pub knot: KnotDescriptor,
    pub hypotheses: Vec<Hypothesis>,
    pub hyperbolicity: HyperbolicityEvidence,
    pub smallness: SmallnessEvidence,
    pub verdict: Verdict,
}

const EXCEPTIONAL_SET_CHECK: &str =
    "filling slope avoids every recorded exceptional slope of the Whitehead link component";

impl SmallKnotCertificate {
    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    /// Statements of the hypotheses that failed (nonempty exactly for
    /// `invalid` verdicts).
    pub fn failed_hypotheses(&self) -> Vec<&str> {
        self.hypotheses
            .iter()
            .filter(|h| !h.holds)
            .map(|h| h.statement.as_str())
            .collect()
    }

    /// The table witnesses contradicting smallness, if any (nonempty for
    /// `refuted` verdicts caused by the exclusion check).
    pub fn refuting_witnesses(&self) -> Vec<&MemberWitness> {
        self.smallness
            .trace
            .iter()
            .filter_map(|item| item.report.witness())
            .collect()
    }

    /// The exceptional-slope set recorded in the evidence, for spherical
    /// certificates.
    pub fn recorded_exceptional_slopes(&self) -> Option<ExceptionalSlopes> {
        let item = self
            .hyperbolicity
            .evidence
            .iter()
            .find(|e| e.check == EXCEPTIONAL_SET_CHECK)?;
        let raw: Vec<String> = serde_json::from_value(item.detail.clone()).ok()?;
        let slopes: std::result::Result<Vec<ExtendedSlope>, _> =
            raw.iter().map(|s| s.parse()).collect();
        Some(ExceptionalSlopes::from_slopes(slopes.ok()?))
    }
}

fn empty_hyperbolicity() -> HyperbolicityEvidence {
    HyperbolicityEvidence {
        method: "not evaluated (hypotheses failed)".into(),
        evidence: Vec::new(),
    }
}

fn empty_smallness() -> SmallnessEvidence {
    SmallnessEvidence {
        checked_pairs: Vec::new(),
        trace: Vec::new(),
    }
}

/// Certifies that the unfilled component of `C(2, 2k, -2)` is a hyperbolic
/// small knot in `L(p, q)`.
///
/// Hypothesis failures (`p <= 0`, `q = 0`, `gcd != 1`, `k < 2`,
/// `p = 4k|q|`) yield an `invalid` verdict recording every violated
/// statement; they are never silently narrowed and never conflated with a
/// mathematical refutation.
pub fn certify_lens(p: impl Into<BigInt>, q: impl Into<BigInt>, k: i64) -> SmallKnotCertificate {
    let p = p.into();
    let q = q.into();

    let gcd = p.abs().gcd(&q.abs());
    let four_k_abs_q = BigInt::from(4) * k.max(0) * q.abs();
    let admissible = k >= 2 && p != four_k_abs_q;
    let hypotheses = vec![
        Hypothesis {
            statement: format!("p > 0 (p = {p})"),
            holds: p > BigInt::zero(),
        },
        Hypothesis {
            statement: format!("q != 0 (q = {q})"),
            holds: !q.is_zero(),
        },
        Hypothesis {
            statement: format!("gcd(p, |q|) = 1 (gcd = {gcd})"),
            holds: gcd.is_one(),
        },
        Hypothesis {
            statement: format!("k >= 2 (k = {k})"),
            holds: k >= 2,
        },
        Hypothesis {
            statement: format!("4k != ±p/q, i.e. p != 4k|q| (p = {p}, 4k|q| = {four_k_abs_q})"),
            holds: k < 2 || p != four_k_abs_q,
        },
    ];
    let all_hold = hypotheses.iter().all(|h| h.holds) && admissible;

    let surgery_slope = if !q.is_zero() {
        Fraction::new(-p.clone(), q.clone()).ok()
    } else {
        None
    };
    let link = if k >= 1 { lk_link(k).ok() } else { None };
    let manifold = ManifoldDescriptor::Lens {
        p: p.clone(),
        q: q.clone(),
        surgery_slope: surgery_slope.clone(),
    };
    let knot = KnotDescriptor::TwoBridgeComponent {
        k,
        link: link.clone(),
        filling_slope: surgery_slope.clone(),
    };

    if !all_hold {
        return SmallKnotCertificate {
            manifold,
            knot,
            hypotheses,
            hyperbolicity: empty_hyperbolicity(),
            smallness: empty_smallness(),
            verdict: Verdict::Invalid,
        };
    }

    let link = link.expect("k >= 2");
    let slope = surgery_slope.expect("q != 0");
    let seifert_report = seifert_family_exclusion(k).expect("k >= 2");
    let slope_value = ExtendedSlope::Finite(slope.clone());

    let evidence = vec![
        EvidenceItem {
            check: format!("the link b({}, {}) is hyperbolic (q not in {{1, p-1}})", link.p(), link.q()),
            passed: link.is_hyperbolic(),
            detail: Value::Null,
        },
        EvidenceItem {
            check: "no presentation [2w+1, 2u+1] (w >= 1, u != 0, -1) is equivalent to the link"
                .into(),
            passed: seifert_report.excluded(),
            detail: serde_json::to_value(&seifert_report).expect("report serializes"),
        },
        EvidenceItem {
            check: format!("filling slope {slope} avoids 0 and inf"),
            passed: !slope.is_zero() && slope_value != ExtendedSlope::Infinity,
            detail: Value::Null,
        },
        EvidenceItem {
            check: "0-filling the companion component is toroidal: it bounds a once-punctured \
                    torus (recorded fact, not recomputed)"
                .into(),
            passed: true,
            detail: Value::Null,
        },
    ];
    let hyperbolicity = HyperbolicityEvidence {
        method: "exceptional-filling exclusion on the companion component".into(),
        evidence,
    };

    let exclusion = exclusion_check(
        k,
        &[ExtendedSlope::Infinity, ExtendedSlope::Empty],
        &slope_value,
    )
    .expect("k >= 2 and the partner is finite");
    let smallness = SmallnessEvidence {
        checked_pairs: exclusion
            .items
            .iter()
            .map(|item| item.report.pair.clone())
            .collect(),
        trace: exclusion.items.clone(),
    };

    let verdict = if hyperbolicity.evidence.iter().all(|e| e.passed) && exclusion.excluded() {
        Verdict::Certified
    } else {
        Verdict::Refuted
    };

    SmallKnotCertificate {
        manifold,
        knot,
        hypotheses,
        hyperbolicity,
        smallness,
        verdict,
    }
}

/// [`certify_spherical_with`] using the built-in exceptional-slope set.
pub fn certify_spherical(a3: i64, b3: i64) -> Result<SmallKnotCertificate> {
    certify_spherical_with(a3, b3, &ExceptionalSlopes::default_set())
}

/// Certifies that the dual knot of the slope-1 filling on the Whitehead
/// link is a hyperbolic small knot in the type-T/O/I manifold
/// `+/-(-1; 1/2, 1/3, a3/b3)`.
///
/// Input validation errors (including the deliberately excluded `|a3| = 1`
/// family) surface as errors rather than certificates.
pub fn certify_spherical_with(
    a3: i64,
    b3: i64,
    exceptional: &ExceptionalSlopes,
) -> Result<SmallKnotCertificate> {
    let toi = SphericalTOI::new(a3, b3)?;
    let whitehead = lk_link(1).expect("k = 1 is valid");
    let r = toi.surgery_slope().clone();
    let r_slope = ExtendedSlope::Finite(r.clone());

    let mut hypotheses = vec![
        Hypothesis {
            statement: format!("b3 in {{3, 4, 5}} (b3 = {b3})"),
            holds: true,
        },
        Hypothesis {
            statement: format!("gcd(a3, b3) = 1 (a3 = {a3}, b3 = {b3})"),
            holds: true,
        },
        Hypothesis {
            statement: format!("|a3| >= 2 (a3 = {a3})"),
            holds: true,
        },
    ];
    if a3 < 0 {
        hypotheses.push(Hypothesis {
            statement: format!(
                "a3 = {a3} < 0: the orientation sign of the Seifert symbol is carried by the \
                 filling slope {r}"
            ),
            holds: true,
        });
    }

    let evidence = vec![
        EvidenceItem {
            check: format!("filling slope {r} = 6 - {b3}/{a3} is non-integral"),
            passed: !r.is_integer(),
            detail: Value::Null,
        },
        EvidenceItem {
            check: EXCEPTIONAL_SET_CHECK.into(),
            passed: !exceptional.contains(&r_slope),
            detail: serde_json::to_value(exceptional.slopes()).expect("slopes serialize"),
        },
    ];
    let hyperbolicity = HyperbolicityEvidence {
        method: "non-exceptional filling on one component of the Whitehead link".into(),
        evidence,
    };

    let exclusion = exclusion_check(
        1,
        &[ExtendedSlope::Finite(Fraction::one()), ExtendedSlope::Empty],
        &r_slope,
    )
    .expect("k = 1 and the partner is finite");
    let smallness = SmallnessEvidence {
        checked_pairs: exclusion
            .items
            .iter()
            .map(|item| item.report.pair.clone())
            .collect(),
        trace: exclusion.items.clone(),
    };

    let verdict = if hyperbolicity.evidence.iter().all(|e| e.passed) && exclusion.excluded() {
        Verdict::Certified
    } else {
        Verdict::Refuted
    };

    Ok(SmallKnotCertificate {
        manifold: ManifoldDescriptor::Spherical {
            family: toi.toi_type(),
            a3,
            b3,
            seifert: toi.seifert_symbol(),
            surgery_slope: r,
        },
        knot: KnotDescriptor::FillingDual {
            link: whitehead,
            filling_slopes: (toi.surgery_slope().clone(), Fraction::one()),
        },
        hypotheses,
        hyperbolicity,
        smallness,
        verdict,
    })
}

/// Re-runs the checks recorded in a certificate from its descriptors alone.
/// A certificate is sound exactly when the replay reproduces it.
pub fn replay(cert: &SmallKnotCertificate) -> Result<SmallKnotCertificate> {
    match (&cert.manifold, &cert.knot) {
        (
            ManifoldDescriptor::Lens { p, q, .. },
            KnotDescriptor::TwoBridgeComponent { k, .. },
        ) => Ok(certify_lens(p.clone(), q.clone(), *k)),
        (ManifoldDescriptor::Spherical { a3, b3, .. }, KnotDescriptor::FillingDual { .. }) => {
            let set = cert
                .recorded_exceptional_slopes()
                .unwrap_or_else(ExceptionalSlopes::default_set);
            certify_spherical_with(*a3, *b3, &set)
        }
        _ => Err(Error::InvalidInput(
            "certificate mixes manifold and knot descriptor kinds".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Ranges for [`sweep_verify`]; omitted sections are skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub identities: Option<IdentityRanges>,
    pub table_laws: Option<TableLawRanges>,
    pub lens: Option<LensRanges>,
    pub spherical: Option<SphericalRanges>,
}

/// Continued-fraction identity sweeps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRanges {
    /// Checks `[2, 2k, -2] = [2, 2k-1, 2] = 8k/(4k-1)` for `k = 2..=max_k`.
    pub max_k: i64,
    /// Checks `[2w+1, 2u+1] = [2w, 1, -2u-2]` on `w = 1..=max_w`,
    /// `u = min_u..=-3`.
    pub max_w: i64,
    pub min_u: i64,
}

/// Structural slope-table laws per `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLawRanges {
    pub ks: Vec<i64>,
    /// Denominator limit of the sampling grid on each parametric row.
    pub grid_denominator: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensRanges {
    pub max_p: i64,
    pub max_abs_q: i64,
    /// How many admissible `k` to certify per lens space.
    pub ks_per_pair: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalRanges {
    pub max_abs_a3: i64,
}

/// Aggregated counts for one sweep section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionReport {
    pub name: String,
    pub checked: u64,
    pub passed: u64,
    /// Inputs correctly rejected as hypothesis violations.
    pub invalid: u64,
    /// Inputs correctly rejected as the excluded `|a3| = 1` family.
    pub excluded: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl SectionReport {
    fn fold(name: &str, cells: Vec<CellResult>) -> Self {
        let mut report = SectionReport {
            name: name.into(),
            checked: 0,
            passed: 0,
            invalid: 0,
            excluded: 0,
            failed: 0,
            first_failure: None,
        };
        for cell in cells {
            report.checked += 1;
            match cell {
                CellResult::Pass => report.passed += 1,
                CellResult::ExpectedInvalid => report.invalid += 1,
                CellResult::ExpectedExcluded => report.excluded += 1,
                CellResult::Fail(msg) => {
                    report.failed += 1;
                    if report.first_failure.is_none() {
                        report.first_failure = Some(msg);
                    }
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone)]
enum CellResult {
    Pass,
    ExpectedInvalid,
    ExpectedExcluded,
    Fail(String),
}

/// Deterministic whole-construction regression report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub sections: Vec<SectionReport>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.sections.iter().all(|s| s.failed == 0)
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sections {
            write!(
                f,
                "{}: checked {}, passed {}",
                s.name, s.checked, s.passed
            )?;
            if s.invalid > 0 {
                write!(f, ", invalid {} (expected)", s.invalid)?;
            }
            if s.excluded > 0 {
                write!(f, ", excluded {} (expected)", s.excluded)?;
            }
            writeln!(f, ", failed {}", s.failed)?;
            if let Some(first) = &s.first_failure {
                writeln!(f, "  first failure: {first}")?;
            }
        }
        writeln!(f, "result: {}", if self.ok() { "ok" } else { "FAILURES" })
    }
}

/// [`sweep_verify_with`] using the built-in exceptional-slope set.
pub fn sweep_verify(config: &SweepConfig) -> SweepReport {
    sweep_verify_with(config, &ExceptionalSlopes::default_set())
}

/// Runs every configured sweep section. Cells are independent and checked
/// in parallel; the report is a deterministic in-order fold.
pub fn sweep_verify_with(config: &SweepConfig, exceptional: &ExceptionalSlopes) -> SweepReport {
    let mut sections = Vec::new();
    if let Some(ranges) = &config.identities {
        sections.push(identity_section(ranges));
    }
    if let Some(ranges) = &config.table_laws {
        sections.push(table_law_section(ranges));
    }
    if let Some(ranges) = &config.lens {
        sections.push(lens_section(ranges));
    }
    if let Some(ranges) = &config.spherical {
        sections.push(spherical_section(ranges, exceptional));
    }
    SweepReport { sections }
}

fn identity_section(ranges: &IdentityRanges) -> SectionReport {
    let mut cells: Vec<CellResult> = (2..=ranges.max_k)
        .into_par_iter()
        .map(|k| match check_family_identity(k) {
            Ok(()) => CellResult::Pass,
            Err(msg) => CellResult::Fail(msg),
        })
        .collect();

    let wu: Vec<(i64, i64)> = (1..=ranges.max_w)
        .flat_map(|w| (ranges.min_u..=-3).map(move |u| (w, u)))
        .collect();
    cells.par_extend(wu.into_par_iter().map(|(w, u)| {
        match check_case_identity(w, u) {
            Ok(()) => CellResult::Pass,
            Err(msg) => CellResult::Fail(msg),
        }
    }));
    SectionReport::fold("identities", cells)
}

/// `[2, 2k, -2] = [2, 2k-1, 2] = 8k/(4k-1)`, exactly.
pub fn check_family_identity(k: i64) -> std::result::Result<(), String> {
    let lhs = ContinuedFraction::new([2, 2 * k, -2]).expect("nonzero terms");
    let rhs = ContinuedFraction::new([2, 2 * k - 1, 2]).expect("nonzero terms");
    let closed = ExtendedSlope::Finite(
        Fraction::new(8 * k, 4 * k - 1).expect("4k - 1 != 0"),
    );
    let (lv, rv) = (lhs.evaluate(), rhs.evaluate());
    if lv == rv && lv == closed {
        Ok(())
    } else {
        Err(format!(
            "identity fails at k = {k}: [2,2k,-2] = {lv}, [2,2k-1,2] = {rv}, expected {closed}"
        ))
    }
}

/// `[2w+1, 2u+1] = [2w, 1, -2u-2]`, exactly.
pub fn check_case_identity(w: i64, u: i64) -> std::result::Result<(), String> {
    let lhs = ContinuedFraction::new([2 * w + 1, 2 * u + 1]).expect("odd terms are nonzero");
    let rhs = ContinuedFraction::new([2 * w, 1, -2 * u - 2]).expect("u <= -3 keeps terms nonzero");
    let (lv, rv) = (lhs.evaluate(), rhs.evaluate());
    if lv == rv {
        Ok(())
    } else {
        Err(format!(
            "case identity fails at (w, u) = ({w}, {u}): {lv} vs {rv}"
        ))
    }
}

fn table_law_section(ranges: &TableLawRanges) -> SectionReport {
    let cells: Vec<CellResult> = ranges
        .ks
        .par_iter()
        .map(|&k| match check_table_laws(k, ranges.grid_denominator) {
            Ok(_) => CellResult::Pass,
            Err(msg) => CellResult::Fail(msg),
        })
        .collect();
    SectionReport::fold("table laws", cells)
}

/// The three structural laws of the slope table at one `k`: partners of
/// `inf` are exactly 0, partners of `empty` lie in `{0, -4k}`, and every
/// grid-sampled pair of every parametric row is rediscovered as a member.
/// Returns the number of sampled pairs.
pub fn check_table_laws(k: i64, grid_denominator: i64) -> std::result::Result<usize, String> {
    let err = |msg: String| -> std::result::Result<usize, String> { Err(msg) };

    let inf_pairs = infinity_partner_pairs(k).map_err(|e| e.to_string())?;
    let zero = ExtendedSlope::zero();
    let expected = [
        SlopePair::new(ExtendedSlope::Infinity, zero.clone()).expect("valid"),
        SlopePair::new(zero.clone(), ExtendedSlope::Infinity).expect("valid"),
    ];
    if !inf_pairs.iter().all(|p| expected.contains(p))
        || !expected.iter().all(|p| inf_pairs.contains(p))
    {
        return err(format!("inf-partner law fails at k = {k}: pairs {inf_pairs:?}"));
    }

    let empty_partners = empty_partner_slopes(k).map_err(|e| e.to_string())?;
    let minus_4k = ExtendedSlope::Finite(Fraction::from_integer(-4 * k));
    if !empty_partners.iter().all(|s| s == &zero || s == &minus_4k)
        || !empty_partners.contains(&zero)
        || !empty_partners.contains(&minus_4k)
    {
        return err(format!(
            "empty-partner law fails at k = {k}: partners {empty_partners:?}"
        ));
    }

    let mut sampled = 0;
    for family in table_families(k).map_err(|e| e.to_string())? {
        if !family.is_parametric() {
            continue;
        }
        let interval = family.interval().expect("parametric rows carry intervals");
        for t in sample_parameters(interval, grid_denominator) {
            let pair = family
                .pair_at(&t)
                .map_err(|e| format!("row {} at {t}: {e}", family.id()))?;
            let report = pair_in_table(k, &pair, false).map_err(|e| e.to_string())?;
            if !report.is_member() {
                return err(format!(
                    "sampling completeness fails at k = {k}: row {} at {t} generated {pair}, \
                     not found",
                    family.id()
                ));
            }
            sampled += 1;
        }
    }
    Ok(sampled)
}

fn lens_section(ranges: &LensRanges) -> SectionReport {
    let mut inputs: Vec<(i64, i64)> = Vec::new();
    for p in 1..=ranges.max_p {
        for q in -ranges.max_abs_q..=ranges.max_abs_q {
            inputs.push((p, q));
        }
    }
    let ks_per_pair = ranges.ks_per_pair;
    let cells: Vec<CellResult> = inputs
        .into_par_iter()
        .flat_map_iter(|(p, q)| lens_cells(p, q, ks_per_pair))
        .collect();
    SectionReport::fold("lens certificates", cells)
}

fn lens_cells(p: i64, q: i64, ks_per_pair: usize) -> Vec<CellResult> {
    let Ok(ls) = LensSpace::new(p, q) else {
        // Malformed (p, q): any k must come back invalid, never refuted.
        let cert = certify_lens(p, q, 2);
        return vec![match cert.verdict() {
            Verdict::Invalid => CellResult::ExpectedInvalid,
            v => CellResult::Fail(format!("L({p},{q}) k=2: expected invalid, got {v}")),
        }];
    };
    let mut cells = Vec::new();
    let mut admissible = Vec::with_capacity(ks_per_pair);
    let mut k = 2;
    while admissible.len() < ks_per_pair {
        let cert = certify_lens(p, q, k);
        let is_admissible = admissible_k(&ls)
            .take_while(|&a| a <= k)
            .any(|a| a == k);
        if is_admissible {
            admissible.push(k);
            cells.push(match cert.verdict() {
                Verdict::Certified => CellResult::Pass,
                v => CellResult::Fail(format!("L({p},{q}) k={k}: expected certified, got {v}")),
            });
        } else {
            // The skipped k = p/(4|q|): must be invalid, never refuted.
            cells.push(match cert.verdict() {
                Verdict::Invalid => CellResult::ExpectedInvalid,
                v => CellResult::Fail(format!("L({p},{q}) k={k}: expected invalid, got {v}")),
            });
        }
        k += 1;
    }
    cells
}

fn spherical_section(ranges: &SphericalRanges, set: &ExceptionalSlopes) -> SectionReport {
    let mut inputs: Vec<(i64, i64)> = Vec::new();
    for a3 in -ranges.max_abs_a3..=ranges.max_abs_a3 {
        for b3 in 3..=5 {
            inputs.push((a3, b3));
        }
    }
    let cells: Vec<CellResult> = inputs
        .into_par_iter()
        .map(|(a3, b3)| spherical_cell(a3, b3, set))
        .collect();
    SectionReport::fold("spherical certificates", cells)
}

fn spherical_cell(a3: i64, b3: i64, set: &ExceptionalSlopes) -> CellResult {
    let malformed = a3 == 0 || a3.unsigned_abs().gcd(&b3.unsigned_abs()) != 1;
    match certify_spherical_with(a3, b3, set) {
        Ok(cert) => {
            if malformed || a3.abs() == 1 {
                CellResult::Fail(format!(
                    "({a3}, {b3}): expected rejection, got certificate {}",
                    cert.verdict()
                ))
            } else {
                match cert.verdict() {
                    Verdict::Certified => CellResult::Pass,
                    v => CellResult::Fail(format!("({a3}, {b3}): expected certified, got {v}")),
                }
            }
        }
        Err(Error::ExcludedCase(_)) if a3.abs() == 1 && !malformed => CellResult::ExpectedExcluded,
        Err(Error::InvalidInput(_)) if malformed => CellResult::ExpectedInvalid,
        Err(e) => CellResult::Fail(format!("({a3}, {b3}): unexpected error {e}")),
    }
}
