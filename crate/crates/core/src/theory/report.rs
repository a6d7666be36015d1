use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Relative excess over a bound that still counts as satisfied when no
/// exact comparison is available.
pub const TOLERANCE: f64 = 1e-12;
/// Points whose float ratio is above `1 - NEAR_TIGHT` are re-checked
/// exactly when an exact form exists.
const NEAR_TIGHT: f64 = 1e-9;
/// Violations kept verbatim in a report; the rest are only counted.
pub const MAX_LISTED_VIOLATIONS: usize = 20;

/// Coordinates of one grid point; unused coordinates are omitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl Point {
    pub fn smrz(s: usize, m: usize, r: usize, z: usize) -> Self {
        Self {
            s: Some(s),
            m: Some(m),
            r: Some(r),
            z: Some(z),
            ..Self::default()
        }
    }

    pub fn smr(s: usize, m: usize, r: usize) -> Self {
        Self {
            s: Some(s),
            m: Some(m),
            r: Some(r),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: Point,
    pub check: String,
    pub value: f64,
    pub bound: f64,
    /// `ln(value / bound)`, kept because either side may underflow.
    pub ln_ratio: f64,
}

/// Outcome of checking an inequality `value <= bound` over a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub n: usize,
    pub grid: String,
    pub points_checked: u64,
    /// Near-tight points settled by exact arithmetic.
    pub exact_confirmations: u64,
    /// Largest `value / bound` seen; at most 1 when everything holds.
    pub max_slack: f64,
    pub worst_point: Option<Point>,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub pass: bool,
    pub details: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    pub(crate) fn from_tally(lemma: &str, n: usize, grid: String, tally: Tally) -> Self {
        Self {
            lemma: lemma.into(),
            n,
            grid,
            points_checked: tally.points,
            exact_confirmations: tally.exact,
            max_slack: tally.max_ratio,
            worst_point: tally.worst,
            pass: tally.count == 0,
            violations: tally.violations,
            violation_count: tally.count,
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Record a scalar check; a failed one fails the report.
    pub(crate) fn detail_check(&mut self, key: &str, value: f64, ok: bool) {
        self.details.insert(key.into(), value);
        if !ok {
            self.pass = false;
            self.notes.push(format!("check {key} failed with value {value}"));
        }
    }
}

/// Running state of a grid check. Partial tallies are merged in grid order
/// so the reported worst point does not depend on scheduling.
#[derive(Clone, Debug, Default)]
pub(crate) struct Tally {
    points: u64,
    exact: u64,
    max_ratio: f64,
    worst: Option<Point>,
    violations: Vec<Violation>,
    count: u64,
}

impl Tally {
    /// Check `exp(ln_value) <= exp(ln_bound)`. `exact` is consulted for
    /// near-tight points and returns `None` when no exact form applies.
    pub fn check(
        &mut self,
        check: &str,
        point: Point,
        ln_value: f64,
        ln_bound: f64,
        exact: impl FnOnce() -> Option<bool>,
    ) {
        self.points += 1;
        let ln_ratio = if ln_value == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            ln_value - ln_bound
        };
        let mut ratio = ln_ratio.exp();
        let mut violated = false;
        if ln_ratio > (-NEAR_TIGHT).ln_1p() {
            match exact() {
                Some(true) => {
                    self.exact += 1;
                    ratio = ratio.min(1.0);
                }
                Some(false) => violated = true,
                None => violated = ln_ratio > TOLERANCE.ln_1p(),
            }
        }
        if ratio > self.max_ratio || self.worst.is_none() {
            self.max_ratio = self.max_ratio.max(ratio);
            self.worst = Some(point);
        }
        if violated {
            self.count += 1;
            if self.violations.len() < MAX_LISTED_VIOLATIONS {
                self.violations.push(Violation {
                    point,
                    check: check.into(),
                    value: ln_value.exp(),
                    bound: ln_bound.exp(),
                    ln_ratio,
                });
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.points += other.points;
        self.exact += other.exact;
        if other.worst.is_some() && (self.worst.is_none() || other.max_ratio > self.max_ratio) {
            self.max_ratio = other.max_ratio;
            self.worst = other.worst;
        }
        self.count += other.count;
        let room = MAX_LISTED_VIOLATIONS - self.violations.len();
        self.violations.extend(other.violations.into_iter().take(room));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_rules() {
        let mut t = Tally::default();
        t.check("a", Point::smr(0, 0, 1), 0.5f64.ln(), 0.0, || None);
        t.check("a", Point::smr(0, 0, 2), f64::NEG_INFINITY, f64::NEG_INFINITY, || None);
        assert_eq!(t.count, 0);
        assert_eq!(t.max_ratio, 0.5);
        // within float tolerance, no exact form
        t.check("a", Point::smr(0, 0, 3), 1e-14, 0.0, || None);
        assert_eq!(t.count, 0);
        // near-tight, exact form says it holds
        t.check("a", Point::smr(0, 0, 4), 1e-10, 0.0, || Some(true));
        assert_eq!((t.count, t.exact), (0, 1));
        // exact form says it fails
        t.check("a", Point::smr(0, 0, 5), -1e-11, 0.0, || Some(false));
        t.check("a", Point::smr(0, 0, 6), 0.1, 0.0, || None);
        assert_eq!(t.count, 2);
        let r = LemmaReport::from_tally("x", 1, "g".into(), t);
        assert!(!r.pass);
        assert_eq!(r.worst_point.unwrap().r, Some(6));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["worst_point"], serde_json::json!({"s": 0, "m": 0, "r": 6}));
    }

    #[test]
    fn merge_keeps_first_worst_on_ties() {
        let mut a = Tally::default();
        a.check("a", Point::smr(1, 1, 1), 0.0, 0.0, || Some(true));
        let mut b = Tally::default();
        b.check("a", Point::smr(2, 2, 2), 0.0, 0.0, || Some(true));
        let merged = a.merge(b);
        assert_eq!(merged.worst.unwrap().s, Some(1));
        assert_eq!(merged.points, 2);
    }
}
