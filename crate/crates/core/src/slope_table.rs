//! The classified boundary-slope pairs of the 2-bridge links
//! `C(2, 2k, -2)`, encoded as nine exact families, with membership and
//! exclusion deciders.
//!
//! Each family is either a constant pair (possibly listed in both orders)
//! or a curve of pairs cut out by two fractional-linear maps in one shared
//! rational parameter over a closed interval. The table is golden data:
//! membership is decided by exact solving against it, never recomputed
//! from diagrams.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{
    Bound, ExtendedSlope, Fraction, MobiusMap, ParamInterval, Solutions,
};

/// A successful row match: the shared parameter value for parametric rows,
/// `None` for constant rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMatch {
    pub parameter: Option<ExtendedSlope>,
}

/// One coordinate of a slope-pair family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coord {
    Const(ExtendedSlope),
    Param(MobiusMap),
}

impl Coord {
    fn render(&self, var: char) -> String {
        match self {
            Coord::Const(s) => s.to_string(),
            Coord::Param(m) => m.render(var),
        }
    }
}

/// One row of the slope-pair table, instantiated at a concrete `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeFamily {
    id: &'static str,
    k: i64,
    param: char,
    first: Coord,
    second: Coord,
    /// The row lists both coordinate orders, `(x, y)` and `(y, x)`.
    both_listed: bool,
    interval: Option<ParamInterval>,
    min_k: i64,
}

impl SlopeFamily {
    pub fn id(&self) -> &'static str {
        self.id
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn param_name(&self) -> char {
        self.param
    }

    pub fn first(&self) -> &Coord {
        &self.first
    }

    pub fn second(&self) -> &Coord {
        &self.second
    }

    pub fn both_listed(&self) -> bool {
        self.both_listed
    }

    pub fn interval(&self) -> Option<&ParamInterval> {
        self.interval.as_ref()
    }

    pub fn min_k(&self) -> i64 {
        self.min_k
    }

    pub fn is_parametric(&self) -> bool {
        matches!(self.first, Coord::Param(_)) || matches!(self.second, Coord::Param(_))
    }

    /// The family with the two coordinates interchanged.
    pub fn swapped(&self) -> SlopeFamily {
        SlopeFamily {
            id: self.id,
            k: self.k,
            param: self.param,
            first: self.second.clone(),
            second: self.first.clone(),
            both_listed: self.both_listed,
            interval: self.interval.clone(),
            min_k: self.min_k,
        }
    }

    /// The pair of this family at parameter `t` (parametric rows only).
    pub fn pair_at(&self, t: &ExtendedSlope) -> Result<SlopePair> {
        let coord = |c: &Coord| -> Result<ExtendedSlope> {
            match c {
                Coord::Const(s) => Ok(s.clone()),
                Coord::Param(m) => m.eval(t),
            }
        };
        SlopePair::new(coord(&self.first)?, coord(&self.second)?)
    }

    /// Exact membership of `pair` in this family, with the matching
    /// parameter (parametric rows) on success.
    pub fn contains(&self, pair: &SlopePair) -> Option<FamilyMatch> {
        match self.check(pair) {
            RowOutcome::Matched { parameter } => Some(FamilyMatch { parameter }),
            _ => None,
        }
    }

    /// Membership with a refutation reason on failure.
    pub fn check(&self, pair: &SlopePair) -> RowOutcome {
        let outcome = self.check_as_listed(&self.first, &self.second, pair);
        if matches!(outcome, RowOutcome::Matched { .. }) || !self.both_listed {
            return outcome;
        }
        // The table row also lists the reversed order.
        self.check_as_listed(&self.second, &self.first, pair)
    }

    fn check_as_listed(&self, first: &Coord, second: &Coord, pair: &SlopePair) -> RowOutcome {
        match (first, second) {
            (Coord::Const(x), Coord::Const(y)) => {
                if x == &pair.first && y == &pair.second {
                    RowOutcome::Matched { parameter: None }
                } else {
                    RowOutcome::ConstantMismatch
                }
            }
            (Coord::Param(m), other) => self.solve_side(m, &pair.first, other, &pair.second),
            (Coord::Const(x), Coord::Param(m)) => {
                if x != &pair.first {
                    return RowOutcome::ConstantMismatch;
                }
                self.solve_side(m, &pair.second, &Coord::Const(x.clone()), &pair.first)
            }
        }
    }

    /// Solves `m(t) = target`, then checks the interval and the remaining
    /// coordinate.
    fn solve_side(
        &self,
        m: &MobiusMap,
        target: &ExtendedSlope,
        other: &Coord,
        other_target: &ExtendedSlope,
    ) -> RowOutcome {
        // A parametric coordinate never attains the empty slope.
        if matches!(target, ExtendedSlope::Empty) {
            return RowOutcome::EmptyVersusParametric;
        }
        match m.solve(target) {
            Solutions::None => RowOutcome::NoParameterSolution,
            Solutions::Unique(t) => {
                if let Some(iv) = &self.interval {
                    if !iv.contains(&t) {
                        return RowOutcome::ParameterOutsideInterval { parameter: t };
                    }
                }
                self.cross_check(&t, other, other_target)
            }
            Solutions::All => {
                // Constant-valued map; pin the parameter with the other
                // coordinate instead. Not reachable from the shipped table.
                match other {
                    Coord::Const(y) => {
                        if y == other_target {
                            let t = self.any_interval_point();
                            RowOutcome::Matched { parameter: Some(t) }
                        } else {
                            RowOutcome::ConstantMismatch
                        }
                    }
                    Coord::Param(m2) => self.solve_side(m2, other_target, &Coord::Const(target.clone()), target),
                }
            }
        }
    }

    fn cross_check(&self, t: &ExtendedSlope, other: &Coord, other_target: &ExtendedSlope) -> RowOutcome {
        let produced = match other {
            Coord::Const(y) => y.clone(),
            Coord::Param(m) => match m.eval(t) {
                Ok(v) => v,
                Err(_) => {
                    return RowOutcome::OtherCoordinateMismatch {
                        parameter: t.clone(),
                        required: other_target.clone(),
                        produced: None,
                    }
                }
            },
        };
        if &produced == other_target {
            RowOutcome::Matched {
                parameter: Some(t.clone()),
            }
        } else {
            RowOutcome::OtherCoordinateMismatch {
                parameter: t.clone(),
                required: other_target.clone(),
                produced: Some(produced),
            }
        }
    }

    fn any_interval_point(&self) -> ExtendedSlope {
        match &self.interval {
            Some(iv) => match (iv.lo(), iv.hi()) {
                (Bound::Finite(f), _) => ExtendedSlope::Finite(f.clone()),
                (_, Bound::Finite(f)) => ExtendedSlope::Finite(f.clone()),
                _ => ExtendedSlope::zero(),
            },
            None => ExtendedSlope::zero(),
        }
    }
}

impl fmt::Display for SlopeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let first = self.first.render(self.param);
        let second = self.second.render(self.param);
        write!(f, "({first}, {second})")?;
        if self.both_listed {
            write!(f, " and ({second}, {first})")?;
        }
        if let Some(iv) = &self.interval {
            write!(f, " for {} in {}", self.param, iv)?;
        }
        Ok(())
    }
}

/// The table rows instantiated at `k >= 1`. The row `(-2/t, -2t)` only
/// exists for `k > 1`, so `k = 1` yields eight families and every other `k`
/// nine.
pub fn table_families(k: i64) -> Result<Vec<SlopeFamily>> {
    if k < 1 {
        return Err(Error::OutOfRange(format!(
            "slope table requires k >= 1, got {k}"
        )));
    }
    let fin = |n: i64| ExtendedSlope::Finite(Fraction::from_integer(n));
    let zero = || Bound::Finite(Fraction::zero());
    let one = || Bound::Finite(Fraction::one());
    let neg_one = || Bound::Finite(Fraction::from_integer(-1));
    let iv = |lo: Bound, hi: Bound| ParamInterval::new(lo, hi).expect("table intervals are nonempty");

    let minus_4k = fin(-4 * k);
    let rows = vec![
        SlopeFamily {
            id: "(0,0)",
            k,
            param: 't',
            first: Coord::Const(fin(0)),
            second: Coord::Const(fin(0)),
            both_listed: false,
            interval: None,
            min_k: 1,
        },
        SlopeFamily {
            id: "(0,empty),(empty,0)",
            k,
            param: 't',
            first: Coord::Const(fin(0)),
            second: Coord::Const(ExtendedSlope::Empty),
            both_listed: true,
            interval: None,
            min_k: 1,
        },
        SlopeFamily {
            id: "(-4k,empty),(empty,-4k)",
            k,
            param: 't',
            first: Coord::Const(minus_4k.clone()),
            second: Coord::Const(ExtendedSlope::Empty),
            both_listed: true,
            interval: None,
            min_k: 1,
        },
        SlopeFamily {
            id: "(-4k,-2),(-2,-4k)",
            k,
            param: 't',
            first: Coord::Const(minus_4k),
            second: Coord::Const(fin(-2)),
            both_listed: true,
            interval: None,
            min_k: 1,
        },
        SlopeFamily {
            id: "(2/t,2t)",
            k,
            param: 't',
            first: Coord::Param(MobiusMap::over_t(0, 2)),
            second: Coord::Param(MobiusMap::linear(2, 0)),
            both_listed: false,
            interval: Some(iv(zero(), Bound::Infinity)),
            min_k: 1,
        },
        SlopeFamily {
            id: "(-2/t,-2t)",
            k,
            param: 't',
            first: Coord::Param(MobiusMap::over_t(0, -2)),
            second: Coord::Param(MobiusMap::linear(-2, 0)),
            both_listed: false,
            interval: Some(iv(zero(), Bound::Infinity)),
            min_k: 2,
        },
        SlopeFamily {
            id: "(-2/t+2-4k,-2t)",
            k,
            param: 't',
            first: Coord::Param(MobiusMap::over_t(2 - 4 * k, -2)),
            second: Coord::Param(MobiusMap::linear(-2, 0)),
            both_listed: false,
            interval: Some(iv(zero(), one())),
            min_k: 1,
        },
        SlopeFamily {
            id: "(-2/t,2-4k-2t)",
            k,
            param: 't',
            first: Coord::Param(MobiusMap::over_t(0, -2)),
            second: Coord::Param(MobiusMap::linear(-2, 2 - 4 * k)),
            both_listed: false,
            interval: Some(iv(one(), Bound::Infinity)),
            min_k: 1,
        },
        SlopeFamily {
            id: "(-1-2k+(2k-1)s,-1-2k-(2k-1)s)",
            k,
            param: 's',
            first: Coord::Param(MobiusMap::linear(2 * k - 1, -1 - 2 * k)),
            second: Coord::Param(MobiusMap::linear(1 - 2 * k, -1 - 2 * k)),
            both_listed: false,
            interval: Some(iv(neg_one(), one())),
            min_k: 1,
        },
    ];
    Ok(rows.into_iter().filter(|r| r.min_k <= k).collect())
}

/// An ordered pair of boundary slopes. At most one coordinate may be
/// `empty`; a surface with no boundary at all is outside the table's scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopePair {
    first: ExtendedSlope,
    second: ExtendedSlope,
}

impl SlopePair {
    pub fn new(first: ExtendedSlope, second: ExtendedSlope) -> Result<Self> {
        if first == ExtendedSlope::Empty && second == ExtendedSlope::Empty {
            return Err(Error::InvalidInput(
                "(empty, empty) describes a closed surface, out of scope".into(),
            ));
        }
        Ok(SlopePair { first, second })
    }

    pub fn first(&self) -> &ExtendedSlope {
        &self.first
    }

    pub fn second(&self) -> &ExtendedSlope {
        &self.second
    }

    pub fn swapped(&self) -> SlopePair {
        SlopePair {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }
}

impl fmt::Display for SlopePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

impl FromStr for SlopePair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::slope_pair(s)
    }
}

impl Serialize for SlopePair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SlopePair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which orientation of the queried pair a check used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairOrder {
    AsGiven,
    Swapped,
}

/// Why one row rejected (or accepted) one orientation of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowOutcome {
    Matched {
        parameter: Option<ExtendedSlope>,
    },
    /// Constant coordinates differ from the queried pair.
    ConstantMismatch,
    /// An `empty` coordinate was queried against a parametric coordinate.
    EmptyVersusParametric,
    /// The parametric coordinate never attains the queried value.
    NoParameterSolution,
    ParameterOutsideInterval {
        parameter: ExtendedSlope,
    },
    /// The parameter forced by one coordinate fails to reproduce the other.
    OtherCoordinateMismatch {
        parameter: ExtendedSlope,
        required: ExtendedSlope,
        produced: Option<ExtendedSlope>,
    },
}

impl fmt::Display for RowOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowOutcome::Matched { parameter: Some(t) } => write!(f, "matched at {t}"),
            RowOutcome::Matched { parameter: None } => write!(f, "matched (constant row)"),
            RowOutcome::ConstantMismatch => write!(f, "constants differ"),
            RowOutcome::EmptyVersusParametric => write!(f, "empty slope vs parametric coordinate"),
            RowOutcome::NoParameterSolution => write!(f, "no parameter solves the coordinate"),
            RowOutcome::ParameterOutsideInterval { parameter } => {
                write!(f, "solved parameter {parameter} lies outside the interval")
            }
            RowOutcome::OtherCoordinateMismatch {
                parameter,
                required,
                produced,
            } => match produced {
                Some(produced) => write!(
                    f,
                    "at parameter {parameter} the other coordinate is {produced}, not {required}"
                ),
                None => write!(f, "the map is undefined at parameter {parameter}"),
            },
        }
    }
}

/// One entry of a refutation trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub family: String,
    pub order: PairOrder,
    pub outcome: RowOutcome,
}

/// A successful membership witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberWitness {
    pub family: String,
    pub order: PairOrder,
    pub parameter: Option<ExtendedSlope>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member(MemberWitness),
    NonMember { trace: Vec<RowCheck> },
}

/// Verdict of a table membership query, replayable from its fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub k: i64,
    pub pair: SlopePair,
    pub both_orders: bool,
    pub verdict: Membership,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        matches!(self.verdict, Membership::Member(_))
    }

    pub fn witness(&self) -> Option<&MemberWitness> {
        match &self.verdict {
            Membership::Member(w) => Some(w),
            Membership::NonMember { .. } => None,
        }
    }
}

/// Tests `pair` (and, with `both_orders`, its swap) against every family of
/// the table at `k`. Rows are scanned in table order and the first match
/// wins, so verdicts are deterministic; a miss returns the complete
/// refutation trace.
pub fn pair_in_table(k: i64, pair: &SlopePair, both_orders: bool) -> Result<MembershipReport> {
    let families = table_families(k)?;
    let mut trace = Vec::new();
    for family in &families {
        let attempts: &[(PairOrder, SlopePair)] = &if both_orders {
            vec![
                (PairOrder::AsGiven, pair.clone()),
                (PairOrder::Swapped, pair.swapped()),
            ]
        } else {
            vec![(PairOrder::AsGiven, pair.clone())]
        };
        for (order, candidate) in attempts {
            match family.check(candidate) {
                RowOutcome::Matched { parameter } => {
                    return Ok(MembershipReport {
                        k,
                        pair: pair.clone(),
                        both_orders,
                        verdict: Membership::Member(MemberWitness {
                            family: family.id().to_string(),
                            order: *order,
                            parameter,
                        }),
                    });
                }
                outcome => trace.push(RowCheck {
                    family: family.id().to_string(),
                    order: *order,
                    outcome,
                }),
            }
        }
    }
    Ok(MembershipReport {
        k,
        pair: pair.clone(),
        both_orders,
        verdict: Membership::NonMember { trace },
    })
}

/// Every pair in the table at `k` with an `inf` coordinate, found by exact
/// solving on each row: constant coordinates are compared directly and
/// parametric ones solved for `inf` inside their interval.
pub fn infinity_partner_pairs(k: i64) -> Result<Vec<SlopePair>> {
    let mut pairs: Vec<SlopePair> = Vec::new();
    let mut push = |p: SlopePair| {
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    };
    for family in table_families(k)? {
        let listed: Vec<SlopeFamily> = if family.both_listed() {
            vec![family.clone(), family.swapped()]
        } else {
            vec![family.clone()]
        };
        for row in listed {
            for (coord, swap) in [(row.first(), false), (row.second(), true)] {
                match coord {
                    Coord::Const(s) => {
                        if s == &ExtendedSlope::Infinity {
                            // No constant row of the shipped table reaches
                            // this, but stay total.
                            let other = if swap { row.first() } else { row.second() };
                            if let Coord::Const(o) = other {
                                let p = if swap {
                                    SlopePair::new(o.clone(), s.clone())?
                                } else {
                                    SlopePair::new(s.clone(), o.clone())?
                                };
                                push(p);
                            }
                        }
                    }
                    Coord::Param(m) => {
                        if let Solutions::Unique(t) = m.solve(&ExtendedSlope::Infinity) {
                            let in_range =
                                row.interval().is_none_or(|iv| iv.contains(&t));
                            if in_range {
                                push(row.pair_at(&t)?);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// The partner slopes of `empty` across the table at `k`. In the shipped
/// table `empty` only occurs in constant rows, so partners are constant
/// slopes.
pub fn empty_partner_slopes(k: i64) -> Result<Vec<ExtendedSlope>> {
    let mut partners: Vec<ExtendedSlope> = Vec::new();
    for family in table_families(k)? {
        let sides = [
            (family.first(), family.second()),
            (family.second(), family.first()),
        ];
        for (coord, other) in sides {
            if coord == &Coord::Const(ExtendedSlope::Empty) {
                match other {
                    Coord::Const(s) => {
                        if !partners.contains(s) {
                            partners.push(s.clone());
                        }
                    }
                    Coord::Param(_) => unreachable!(
                        "the shipped table pairs empty only with constant coordinates"
                    ),
                }
            }
        }
    }
    Ok(partners)
}

/// A deterministic rational grid on a closed interval: every reduced
/// fraction `n/d` with `|n| <= limit` and `1 <= d <= limit` that lies in
/// the interval, in ascending order, plus the `inf` endpoint when the
/// interval is unbounded above.
pub fn sample_parameters(interval: &ParamInterval, limit: i64) -> Vec<ExtendedSlope> {
    let mut grid = std::collections::BTreeSet::new();
    for n in -limit..=limit {
        for d in 1..=limit {
            let f = Fraction::new(n, d).expect("d >= 1");
            if interval.contains(&ExtendedSlope::Finite(f.clone())) {
                grid.insert(f);
            }
        }
    }
    let mut out: Vec<ExtendedSlope> = grid.into_iter().map(ExtendedSlope::Finite).collect();
    if interval.hi() == &Bound::Infinity {
        out.push(ExtendedSlope::Infinity);
    }
    out
}

/// One fixed slope paired against the partner, with its membership verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionItem {
    pub fixed: ExtendedSlope,
    pub report: MembershipReport,
}

/// Outcome of [`exclusion_check`]: excluded exactly when every queried pair
/// misses the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionReport {
    pub k: i64,
    pub partner: ExtendedSlope,
    pub items: Vec<ExclusionItem>,
}

impl ExclusionReport {
    pub fn excluded(&self) -> bool {
        self.items.iter().all(|item| !item.report.is_member())
    }

    /// The witnesses refuting exclusion, if any.
    pub fn witnesses(&self) -> Vec<&MemberWitness> {
        self.items
            .iter()
            .filter_map(|item| item.report.witness())
            .collect()
    }
}

/// For every slope `s` in `fixed`, decides whether `{s, partner}` occurs in
/// the table at `k`, checking both coordinate orders.
pub fn exclusion_check(
    k: i64,
    fixed: &[ExtendedSlope],
    partner: &ExtendedSlope,
) -> Result<ExclusionReport> {
    if matches!(partner, ExtendedSlope::Empty) {
        return Err(Error::InvalidInput(
            "the partner slope must be finite or inf".into(),
        ));
    }
    let mut items = Vec::new();
    for s in fixed {
        let pair = SlopePair::new(s.clone(), partner.clone())?;
        let report = pair_in_table(k, &pair, true)?;
        items.push(ExclusionItem {
            fixed: s.clone(),
            report,
        });
    }
    Ok(ExclusionReport {
        k,
        partner: partner.clone(),
        items,
    })
}
