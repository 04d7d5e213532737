//! Checks of the gluing formula and the Morse-type inequalities on single
//! bundles and on parameter grids.
//!
//! A check never aborts: arithmetic or oracle errors are recorded on the
//! [`CheckResult`] and the check is marked failed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::character::{morse_quotient, CharPoly, Character, CharacterError};
use crate::geometry::{CohomologyTable, EquivBundleCP1, LineWeights};
use crate::oracles::{cech_cohomology_nodal, cech_cohomology_p1, localization_index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown check id {0:?} (expected gluing, mcut, morse, mv, simple, semicontinuity, oracle or all)")]
    UnknownCheck(String),
    #[error("invalid range {0:?}: expected A..B with A <= B")]
    BadRange(String),
    #[error("csv output failed: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    /// Equivariant index of `M` against the cut pieces and the reduced point.
    Gluing,
    /// `M_cut` cohomology dominates `M` cohomology up to a `(1+t)` multiple.
    Mcut,
    /// Cut pieces plus reduced space against `M`.
    Morse,
    /// Cut pieces plus reduced space against `M_cut`.
    Mv,
    /// Degreewise consequences of `Morse`.
    Simple,
    /// Degreewise upper semicontinuity and constancy of the index.
    Semicontinuity,
    /// Closed forms against the Čech and localization oracles.
    Oracle,
}

impl CheckId {
    pub const ALL: [CheckId; 7] = [
        CheckId::Gluing,
        CheckId::Mcut,
        CheckId::Morse,
        CheckId::Mv,
        CheckId::Simple,
        CheckId::Semicontinuity,
        CheckId::Oracle,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Gluing => "gluing",
            CheckId::Mcut => "mcut",
            CheckId::Morse => "morse",
            CheckId::Mv => "mv",
            CheckId::Simple => "simple",
            CheckId::Semicontinuity => "semicontinuity",
            CheckId::Oracle => "oracle",
        }
    }

    /// Checks whose witness is a `(1+t)` quotient.
    pub fn is_morse_type(&self) -> bool {
        matches!(self, CheckId::Mcut | CheckId::Morse | CheckId::Mv)
    }

    /// Parses a comma list such as `"morse,mv"` or `"all"`. Duplicates are
    /// dropped; the order of first appearance is kept.
    pub fn parse_list(s: &str) -> Result<Vec<CheckId>, VerifyError> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let ids: Vec<CheckId> = if tok == "all" {
                Self::ALL.to_vec()
            } else {
                vec![tok.parse()?]
            };
            for id in ids {
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        }
        Ok(out)
    }

    pub fn run(&self, bundle: &EquivBundleCP1) -> CheckResult {
        match self {
            CheckId::Gluing => verify_gluing(bundle),
            CheckId::Mcut => verify_cut_inequality(bundle),
            CheckId::Morse => verify_morse(bundle),
            CheckId::Mv => verify_mv_morse(bundle),
            CheckId::Simple => verify_simple(bundle),
            CheckId::Semicontinuity => verify_semicontinuity(bundle),
            CheckId::Oracle => cross_validate(bundle),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| VerifyError::UnknownCheck(s.to_string()))
    }
}

/// What was left over when a check failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Character(Character),
    Poly(CharPoly),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: CheckId,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<CharPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Residual>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub inputs: EquivBundleCP1,
}

impl CheckResult {
    fn new(check_id: CheckId, inputs: &EquivBundleCP1) -> Self {
        Self {
            check_id,
            passed: false,
            witness: None,
            residual: None,
            error: None,
            inputs: inputs.clone(),
        }
    }

    fn errored(mut self, err: impl fmt::Display) -> Self {
        self.passed = false;
        self.error = Some(err.to_string());
        self
    }

    /// Witness is present and identically zero.
    pub fn witness_is_zero(&self) -> bool {
        self.witness.as_ref().is_some_and(CharPoly::is_zero)
    }
}

fn mcut_table(bundle: &EquivBundleCP1) -> Result<CohomologyTable, String> {
    bundle.cut().cohomology().map_err(|e| e.to_string())
}

/// `Σ_p t^p ch H^p(M_+) + Σ_p t^p ch H^p(M_-) + Σ_{p<n} t^{p+1} dim H^p(M_red)`.
fn cut_pieces_poly(bundle: &EquivBundleCP1) -> Result<CharPoly, CharacterError> {
    let cut = bundle.cut();
    let red = CharPoly::new(vec![
        Character::zero(),
        Character::monomial(0, cut.red_dims.0 as i64),
    ]);
    cut.plus
        .cohomology()
        .euler_poly()
        .checked_add(&cut.minus.cohomology().euler_poly())?
        .checked_add(&red)
}

/// Gluing formula for the equivariant index.
pub fn verify_gluing(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Gluing, bundle);
    let cut = bundle.cut();
    let red_euler = cut.red_dims.0 as i64 - cut.red_dims.1 as i64;
    let diff = (|| {
        let lhs = bundle.cohomology().index_character();
        let rhs = cut
            .plus
            .cohomology()
            .index_character()
            .checked_add(&cut.minus.cohomology().index_character())?
            .checked_sub(&Character::monomial(0, red_euler))?;
        lhs.checked_sub(&rhs)
    })();
    match diff {
        Ok(d) if d.is_zero() => CheckResult {
            passed: true,
            ..res
        },
        Ok(d) => CheckResult {
            residual: Some(Residual::Character(d)),
            ..res
        },
        Err(e) => res.errored(e),
    }
}

/// Shared body of the three `(1+t)`-quotient checks: `lhs = rhs + (1+t)Q`
/// with `Q >= 0`.
fn quotient_check(mut res: CheckResult, lhs: &CharPoly, rhs: &CharPoly) -> CheckResult {
    match morse_quotient(lhs, rhs) {
        Ok(q) => {
            res.passed = q.is_nonneg();
            if !res.passed {
                res.residual = Some(Residual::Poly(q.negative_part()));
            }
            res.witness = Some(q);
            res
        }
        Err(CharacterError::NotDivisible { residual }) => {
            res.residual = Some(Residual::Character(residual));
            res
        }
        Err(e) => res.errored(e),
    }
}

/// `P_cut = P_M + (1+t)Q` with `Q >= 0`, and equal indices.
pub fn verify_cut_inequality(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Mcut, bundle);
    let m = bundle.cohomology();
    let cut = match mcut_table(bundle) {
        Ok(t) => t,
        Err(e) => return res.errored(e),
    };
    let mut res = quotient_check(res, &cut.euler_poly(), &m.euler_poly());
    if res.passed && cut.index_character() != m.index_character() {
        res.passed = false;
        res.residual = Some(Residual::Character(
            &cut.index_character() - &m.index_character(),
        ));
    }
    res
}

/// Cut pieces and reduced space against the cohomology of `M`.
pub fn verify_morse(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Morse, bundle);
    match cut_pieces_poly(bundle) {
        Ok(lhs) => quotient_check(res, &lhs, &bundle.cohomology().euler_poly()),
        Err(e) => res.errored(e),
    }
}

/// Cut pieces and reduced space against the cohomology of `M_cut`.
pub fn verify_mv_morse(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Mv, bundle);
    let lhs = match cut_pieces_poly(bundle) {
        Ok(p) => p,
        Err(e) => return res.errored(e),
    };
    match mcut_table(bundle) {
        Ok(t) => quotient_check(res, &lhs, &t.euler_poly()),
        Err(e) => res.errored(e),
    }
}

/// `h^0(+) + h^0(-) >= h^0(M)` and `h^1(+) + h^1(-) + dim H^0(red) >= h^1(M)`.
pub fn verify_simple(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Simple, bundle);
    let cut = bundle.cut();
    let (plus, minus, m) = (
        cut.plus.cohomology(),
        cut.minus.cohomology(),
        bundle.cohomology(),
    );
    let diffs = (|| {
        let d0 = plus.h0.checked_add(&minus.h0)?.checked_sub(&m.h0)?;
        let d1 = plus
            .h1
            .checked_add(&minus.h1)?
            .checked_add(&cut.red_character())?
            .checked_sub(&m.h1)?;
        Ok::<_, CharacterError>(CharPoly::new(vec![d0, d1]))
    })();
    match diffs {
        Ok(d) if d.is_nonneg() => CheckResult {
            passed: true,
            ..res
        },
        Ok(d) => CheckResult {
            residual: Some(Residual::Poly(d.negative_part())),
            ..res
        },
        Err(e) => res.errored(e),
    }
}

/// `h^p(M_cut) >= h^p(M)` for each `p`, and equal indices.
pub fn verify_semicontinuity(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Semicontinuity, bundle);
    let cut = match mcut_table(bundle) {
        Ok(t) => t,
        Err(e) => return res.errored(e),
    };
    let m = bundle.cohomology();
    let (pc, pm) = (cut.euler_poly(), m.euler_poly());
    let index_diff = &cut.index_character() - &m.index_character();
    if !pc.ge(&pm) {
        CheckResult {
            residual: Some(Residual::Poly((&pc - &pm).negative_part())),
            ..res
        }
    } else if !index_diff.is_zero() {
        CheckResult {
            residual: Some(Residual::Character(index_diff)),
            ..res
        }
    } else {
        CheckResult {
            passed: true,
            ..res
        }
    }
}

/// Closed-form cohomology against the Čech oracles, and the index against
/// the localization formula, summand by summand.
pub fn cross_validate(bundle: &EquivBundleCP1) -> CheckResult {
    let res = CheckResult::new(CheckId::Oracle, bundle);
    let outcome = (|| -> Result<Option<CharPoly>, String> {
        let err = |e: &dyn fmt::Display| e.to_string();
        for &line in bundle.summands() {
            let single = EquivBundleCP1::line(line.r_p, line.r_q);
            let closed = single.cohomology();
            let cech = cech_cohomology_p1(line).map_err(|e| err(&e))?;
            if closed != cech {
                return Ok(Some(&closed.euler_poly() - &cech.euler_poly()));
            }
            let loc = localization_index(line).map_err(|e| err(&e))?;
            if loc != cech.index_character() {
                return Ok(Some(CharPoly::constant(&loc - &cech.index_character())));
            }
        }
        let cut = bundle.cut();
        let closed = cut.cohomology().map_err(|e| err(&e))?;
        let nodal = cech_cohomology_nodal(&cut).map_err(|e| err(&e))?;
        if closed != nodal {
            return Ok(Some(&closed.euler_poly() - &nodal.euler_poly()));
        }
        Ok(None)
    })();
    match outcome {
        Ok(None) => CheckResult {
            passed: true,
            ..res
        },
        Ok(Some(diff)) => CheckResult {
            residual: Some(Residual::Poly(diff)),
            ..res
        },
        Err(e) => res.errored(e),
    }
}

/// Inclusive integer range written `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: i64,
    pub end: i64,
}

impl IntRange {
    pub fn new(start: i64, end: i64) -> Result<Self, VerifyError> {
        if start > end {
            return Err(VerifyError::BadRange(format!("{start}..{end}")));
        }
        Ok(Self { start, end })
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.start..=self.end
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for IntRange {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || VerifyError::BadRange(s.to_string());
        let (a, b) = s.trim().split_once("..").ok_or_else(bad)?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        Self::new(start, end).map_err(|_| bad())
    }
}

impl Serialize for IntRange {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntRange {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Rectangle of line bundles `(r_P, r_Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rp_range: IntRange,
    pub rq_range: IntRange,
}

impl GridSpec {
    pub fn new(rp_range: IntRange, rq_range: IntRange) -> Self {
        Self { rp_range, rq_range }
    }

    /// Square `[lo, hi]²`.
    pub fn square(lo: i64, hi: i64) -> Result<Self, VerifyError> {
        let r = IntRange::new(lo, hi)?;
        Ok(Self::new(r, r))
    }

    /// Line bundles in lexicographic `(r_P, r_Q)` order.
    pub fn points(&self) -> Vec<EquivBundleCP1> {
        self.rp_range
            .iter()
            .flat_map(|p| {
                self.rq_range
                    .iter()
                    .map(move |q| EquivBundleCP1::line(p, q))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
}

/// Comparison of the two candidate lower limits for the `H^1` weight sum
/// (`r_P + 1` and `r_P - 1`) against the Čech oracle, over the rank-1
/// summands of a grid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1LimitAudit {
    pub summands_checked: usize,
    pub with_nonzero_h1_branch: usize,
    pub lower_limit_plus_one_agrees: usize,
    pub lower_limit_minus_one_agrees: usize,
}

impl H1LimitAudit {
    pub fn from_lines<'a, I: IntoIterator<Item = &'a LineWeights>>(lines: I) -> Self {
        let mut audit = Self::default();
        for line in lines {
            let Ok(cech) = cech_cohomology_p1(*line) else {
                continue;
            };
            audit.summands_checked += 1;
            if line.r_q > line.r_p {
                audit.with_nonzero_h1_branch += 1;
            }
            let variant = |lower: i64| {
                if line.r_q <= line.r_p {
                    Character::zero()
                } else {
                    Character::weight_range(lower, line.r_q - 1)
                }
            };
            if variant(line.r_p + 1) == cech.h1 {
                audit.lower_limit_plus_one_agrees += 1;
            }
            if variant(line.r_p - 1) == cech.h1 {
                audit.lower_limit_minus_one_agrees += 1;
            }
        }
        audit
    }

    pub fn summary_line(&self) -> String {
        format!(
            "H1 lower weight limit: r_P+1 matches the Čech oracle on {}/{} summands; \
             r_P-1 matches on {}/{} ({} summands have r_Q > r_P)",
            self.lower_limit_plus_one_agrees,
            self.summands_checked,
            self.lower_limit_minus_one_agrees,
            self.summands_checked,
            self.with_nonzero_h1_branch,
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Stop after the first grid point with a failed check.
    pub fail_fast: bool,
    /// Evaluate grid points on the rayon pool.
    pub parallel: bool,
}

/// Markdown reports list every result only for grids up to this size.
const MARKDOWN_DETAIL_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: Vec<EquivBundleCP1>,
    pub results: Vec<Vec<CheckResult>>,
    pub summary: BTreeMap<CheckId, CheckTally>,
    pub equality_sets: BTreeMap<CheckId, Vec<EquivBundleCP1>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_limit_audit: Option<H1LimitAudit>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.summary.values().all(|t| t.failed == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().flatten().filter(|r| !r.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per grid point and check: `r_P,r_Q,check_id,passed,witness`.
    /// Higher-rank points list their weights separated by `;`.
    pub fn to_csv(&self) -> Result<String, VerifyError> {
        let csv_err = |e: csv::Error| VerifyError::Csv(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r_P", "r_Q", "check_id", "passed", "witness"])
            .map_err(csv_err)?;
        for (point, results) in self.grid.iter().zip(&self.results) {
            let join = |f: fn(&LineWeights) -> i64| {
                point
                    .summands()
                    .iter()
                    .map(|l| f(l).to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let (rp, rq) = (join(|l| l.r_p), join(|l| l.r_q));
            for r in results {
                let witness = r
                    .witness
                    .as_ref()
                    .map(|q| serde_json::to_string(q).expect("witness serializes"))
                    .unwrap_or_default();
                w.write_record([
                    rp.as_str(),
                    rq.as_str(),
                    r.check_id.as_str(),
                    if r.passed { "true" } else { "false" },
                    witness.as_str(),
                ])
                .map_err(csv_err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| VerifyError::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("# Verification report\n\n");
        out.push_str(&format!("Grid points: {}\n\n", self.grid.len()));
        out.push_str("| check | passed | failed |\n|---|---|---|\n");
        for (id, t) in &self.summary {
            out.push_str(&format!("| {id} | {} | {} |\n", t.passed, t.failed));
        }
        if !self.equality_sets.is_empty() {
            out.push_str("\n## Points with zero quotient\n\n");
            for (id, pts) in &self.equality_sets {
                let list = pts.iter().map(|p| format!("`{p}`")).collect::<Vec<_>>();
                let list = if list.is_empty() {
                    "(none)".to_string()
                } else {
                    list.join(", ")
                };
                out.push_str(&format!("- {id} ({}): {list}\n", pts.len()));
            }
        }
        if !self.results.is_empty() && self.grid.len() <= MARKDOWN_DETAIL_LIMIT {
            out.push_str(
                "\n## Results\n\n| bundle | check | passed | witness |\n|---|---|---|---|\n",
            );
            for r in self.results.iter().flatten() {
                let w = r
                    .witness
                    .as_ref()
                    .map_or("-".to_string(), ToString::to_string);
                out.push_str(&format!(
                    "| `{}` | {} | {} | {w} |\n",
                    r.inputs,
                    r.check_id,
                    if r.passed { "yes" } else { "no" }
                ));
            }
        }
        if let Some(a) = &self.h1_limit_audit {
            out.push_str(&format!("\n## H1 weight limits\n\n{}\n", a.summary_line()));
        }
        let failures: Vec<_> = self.failures().collect();
        if !failures.is_empty() {
            out.push_str("\n## Failures\n\n");
            for f in failures {
                out.push_str(&format!("- `{}` {}", f.inputs, f.check_id));
                if let Some(r) = &f.residual {
                    let r = serde_json::to_string(r).expect("residual serializes");
                    out.push_str(&format!(": residual {r}"));
                }
                if let Some(e) = &f.error {
                    out.push_str(&format!(": error {e}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

fn run_point(bundle: &EquivBundleCP1, checks: &[CheckId]) -> Vec<CheckResult> {
    checks.iter().map(|c| c.run(bundle)).collect()
}

/// Runs `checks` on every bundle, in the given order.
pub fn sweep_bundles(
    bundles: &[EquivBundleCP1],
    checks: &[CheckId],
    opts: SweepOptions,
) -> SweepReport {
    let results: Vec<Vec<CheckResult>> = if opts.fail_fast {
        let mut out = Vec::new();
        for b in bundles {
            let r = run_point(b, checks);
            let failed = r.iter().any(|c| !c.passed);
            out.push(r);
            if failed {
                break;
            }
        }
        out
    } else if opts.parallel {
        // collect() on an indexed parallel iterator keeps input order
        bundles.par_iter().map(|b| run_point(b, checks)).collect()
    } else {
        bundles.iter().map(|b| run_point(b, checks)).collect()
    };
    let grid = bundles[..results.len()].to_vec();

    let mut summary: BTreeMap<CheckId, CheckTally> =
        checks.iter().map(|&c| (c, CheckTally::default())).collect();
    let mut equality_sets: BTreeMap<CheckId, Vec<EquivBundleCP1>> = checks
        .iter()
        .filter(|c| c.is_morse_type())
        .map(|&c| (c, Vec::new()))
        .collect();
    for (point, rs) in grid.iter().zip(&results) {
        for r in rs {
            let t = summary.entry(r.check_id).or_default();
            if r.passed {
                t.passed += 1;
            } else {
                t.failed += 1;
            }
            if r.witness_is_zero() {
                if let Some(set) = equality_sets.get_mut(&r.check_id) {
                    set.push(point.clone());
                }
            }
        }
    }

    let h1_limit_audit = checks
        .contains(&CheckId::Oracle)
        .then(|| H1LimitAudit::from_lines(grid.iter().flat_map(|b| b.summands())));

    SweepReport {
        grid,
        results,
        summary,
        equality_sets,
        h1_limit_audit,
    }
}

/// Runs `checks` over a grid in lexicographic `(r_P, r_Q)` order.
pub fn sweep(grid: &GridSpec, checks: &[CheckId], opts: SweepOptions) -> SweepReport {
    sweep_bundles(&grid.points(), checks, opts)
}

/// Sweep of the two quotient checks whose vanishing marks equality.
pub fn equality_region(grid: &GridSpec) -> SweepReport {
    sweep(
        grid,
        &[CheckId::Mcut, CheckId::Morse],
        SweepOptions {
            parallel: true,
            ..SweepOptions::default()
        },
    )
}

/// Where the quotients vanish at one grid point, beside the region
/// `r_Q <= 0 <= r_P` in which equality was claimed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRow {
    pub r_p: i64,
    pub r_q: i64,
    /// `None` when the quotient does not exist.
    pub mcut_quotient_zero: Option<bool>,
    pub morse_quotient_zero: Option<bool>,
    pub claimed_equality: bool,
    pub morse_quotient: Option<CharPoly>,
}

/// Rows for the rank-1 points of an [`equality_region`] report.
pub fn region_rows(report: &SweepReport) -> Vec<RegionRow> {
    report
        .grid
        .iter()
        .zip(&report.results)
        .filter_map(|(b, rs)| {
            let [line] = b.summands() else {
                return None;
            };
            let find = |id| rs.iter().find(|r| r.check_id == id);
            let zero = |id| find(id).and_then(|r| r.witness.as_ref().map(CharPoly::is_zero));
            Some(RegionRow {
                r_p: line.r_p,
                r_q: line.r_q,
                mcut_quotient_zero: zero(CheckId::Mcut),
                morse_quotient_zero: zero(CheckId::Morse),
                claimed_equality: line.r_q <= 0 && 0 <= line.r_p,
                morse_quotient: find(CheckId::Morse).and_then(|r| r.witness.clone()),
            })
        })
        .collect()
}

/// Where the computed equality sets depart from the claimed region.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionFindings {
    /// Claimed-region points whose Morse quotient is not zero.
    pub morse_nonzero_in_claimed: Vec<(i64, i64)>,
    /// Claimed-region points whose Morse quotient is exactly the constant 1.
    pub morse_one_in_claimed: Vec<(i64, i64)>,
    pub claimed_points: usize,
    /// Points outside the claimed region where `M_cut` and `M` agree.
    pub mcut_zero_outside_claimed: Vec<(i64, i64)>,
    /// Points outside the claimed region where the Morse quotient vanishes.
    pub morse_zero_outside_claimed: Vec<(i64, i64)>,
}

pub fn region_findings(rows: &[RegionRow]) -> RegionFindings {
    let one = CharPoly::constant(Character::one());
    let mut f = RegionFindings::default();
    for r in rows {
        let pt = (r.r_p, r.r_q);
        if r.claimed_equality {
            f.claimed_points += 1;
            if r.morse_quotient_zero != Some(true) {
                f.morse_nonzero_in_claimed.push(pt);
            }
            if r.morse_quotient.as_ref() == Some(&one) {
                f.morse_one_in_claimed.push(pt);
            }
        } else {
            if r.mcut_quotient_zero == Some(true) {
                f.mcut_zero_outside_claimed.push(pt);
            }
            if r.morse_quotient_zero == Some(true) {
                f.morse_zero_outside_claimed.push(pt);
            }
        }
    }
    f
}

/// Plain-text table of region rows.
pub fn region_table(rows: &[RegionRow]) -> String {
    let flag = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    };
    let mut out = format!(
        "{:>5} {:>5}  {:>6}  {:>6}  {:>7}  {}\n",
        "r_P", "r_Q", "Q=0", "Q'=0", "claimed", "Q'"
    );
    for r in rows {
        let q = r
            .morse_quotient
            .as_ref()
            .map_or_else(|| "-".to_string(), |q| q.to_string());
        out.push_str(&format!(
            "{:>5} {:>5}  {:>6}  {:>6}  {:>7}  {}\n",
            r.r_p,
            r.r_q,
            flag(r.mcut_quotient_zero),
            flag(r.morse_quotient_zero),
            if r.claimed_equality { "yes" } else { "no" },
            q
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: i64) -> Character {
        Character::monomial(k, 1)
    }

    fn line(p: i64, q: i64) -> EquivBundleCP1 {
        EquivBundleCP1::line(p, q)
    }

    #[test]
    fn gluing_examples() {
        for (p, q) in [(2, 2), (0, 0), (-1, 1)] {
            let r = verify_gluing(&line(p, q));
            assert!(r.passed, "{r:?}");
            assert!(r.residual.is_none());
        }
    }

    #[test]
    fn cut_inequality_examples() {
        let r = verify_cut_inequality(&line(2, 2));
        assert!(r.passed);
        assert_eq!(r.witness, Some(CharPoly::constant(u(1))));
        assert!(verify_cut_inequality(&line(1, -1)).witness_is_zero());
        assert!(verify_cut_inequality(&line(0, 0)).witness_is_zero());
    }

    #[test]
    fn morse_examples() {
        let r = verify_morse(&line(3, 3));
        assert!(r.passed);
        assert_eq!(
            r.witness,
            Some(CharPoly::constant(Character::weight_range(0, 2)))
        );
        let one = Some(CharPoly::constant(Character::one()));
        assert_eq!(verify_morse(&line(1, -1)).witness, one);
        assert_eq!(verify_morse(&line(0, 0)).witness, one);
    }

    #[test]
    fn mv_examples() {
        let one = Some(CharPoly::constant(Character::one()));
        assert_eq!(verify_mv_morse(&line(2, 2)).witness, one);
        assert_eq!(verify_mv_morse(&line(0, 0)).witness, one);
        let r = verify_mv_morse(&line(-1, 1));
        assert!(r.passed && r.witness_is_zero());
    }

    #[test]
    fn simple_semicontinuity_oracle_examples() {
        for (p, q) in [(2, 2), (0, 0), (-4, 3), (-3, 2)] {
            assert!(verify_simple(&line(p, q)).passed);
            assert!(verify_semicontinuity(&line(p, q)).passed);
        }
        for (p, q) in [(2, 0), (0, 0), (-3, 0)] {
            assert!(cross_validate(&line(p, q)).passed);
        }
    }

    #[test]
    fn quotient_check_reports_residuals() {
        let res = CheckResult::new(CheckId::Morse, &line(0, 0));
        let r = quotient_check(
            res.clone(),
            &CharPoly::constant(Character::one()),
            &CharPoly::constant(u(1)),
        );
        assert!(!r.passed);
        assert_eq!(
            r.residual,
            Some(Residual::Character(Character::one() - u(1)))
        );

        let r = quotient_check(res, &CharPoly::zero(), &CharPoly::one_plus_t());
        assert!(!r.passed);
        assert_eq!(
            r.residual,
            Some(Residual::Poly(CharPoly::constant(Character::monomial(
                0, -1
            ))))
        );
        assert!(r.witness.is_some());
    }

    #[test]
    fn check_list_parsing() {
        assert_eq!(CheckId::parse_list("all").unwrap(), CheckId::ALL.to_vec());
        assert_eq!(
            CheckId::parse_list("morse, mv,morse").unwrap(),
            vec![CheckId::Morse, CheckId::Mv]
        );
        assert!(CheckId::parse_list("").unwrap().is_empty());
        assert_eq!(
            CheckId::parse_list("morse,bogus"),
            Err(VerifyError::UnknownCheck("bogus".into()))
        );
    }

    #[test]
    fn range_parsing() {
        assert_eq!(
            "-2..2".parse::<IntRange>().unwrap(),
            IntRange::new(-2, 2).unwrap()
        );
        assert_eq!(
            "0..=3".parse::<IntRange>().unwrap(),
            IntRange::new(0, 3).unwrap()
        );
        assert!("2..-2".parse::<IntRange>().is_err());
        assert!("2".parse::<IntRange>().is_err());
        assert!("a..b".parse::<IntRange>().is_err());
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let g = GridSpec::square(-1, 1).unwrap();
        let pts: Vec<String> = g.points().iter().map(ToString::to_string).collect();
        assert_eq!(
            pts,
            ["-1:-1", "-1:0", "-1:1", "0:-1", "0:0", "0:1", "1:-1", "1:0", "1:1"]
        );
    }

    #[test]
    fn sweep_small_grid() {
        let g = GridSpec::square(-2, 2).unwrap();
        let r = sweep(&g, &CheckId::ALL, SweepOptions::default());
        assert_eq!(r.grid.len(), 25);
        assert!(r.all_passed());
        for t in r.summary.values() {
            assert_eq!(t.passed, 25);
        }
        let par = sweep(
            &g,
            &CheckId::ALL,
            SweepOptions {
                parallel: true,
                fail_fast: false,
            },
        );
        assert_eq!(r, par);
        assert_eq!(r.to_json(), par.to_json());
    }

    #[test]
    fn sweep_empty_check_list() {
        let r = sweep(
            &GridSpec::square(0, 1).unwrap(),
            &[],
            SweepOptions::default(),
        );
        assert_eq!(r.grid.len(), 4);
        assert!(r.results.iter().all(Vec::is_empty));
        assert!(r.summary.is_empty());
        assert!(r.all_passed());
    }

    #[test]
    fn fail_fast_runs_everything_when_all_pass() {
        let pts = vec![line(0, 0), line(1, 1)];
        let opts = SweepOptions {
            fail_fast: true,
            parallel: false,
        };
        let r = sweep_bundles(&pts, &[CheckId::Morse], opts);
        assert_eq!(r.grid, pts);
        assert_eq!(
            r.summary[&CheckId::Morse],
            CheckTally {
                passed: 2,
                failed: 0
            }
        );
    }

    #[test]
    fn region_examples() {
        let r = equality_region(&GridSpec::square(-1, 1).unwrap());
        let rows = region_rows(&r);
        let at = |p, q| rows.iter().find(|x| (x.r_p, x.r_q) == (p, q)).unwrap();
        assert_eq!(at(1, -1).mcut_quotient_zero, Some(true));
        assert_eq!(
            at(1, -1).morse_quotient,
            Some(CharPoly::constant(Character::one()))
        );
        assert!(at(1, -1).claimed_equality);
        assert_eq!(at(-1, 1).mcut_quotient_zero, Some(true));
        assert_eq!(at(1, 1).mcut_quotient_zero, Some(true));
        let r2 = equality_region(&GridSpec::square(-2, 2).unwrap());
        assert_eq!(
            region_rows(&r2)
                .iter()
                .find(|x| (x.r_p, x.r_q) == (2, 2))
                .unwrap()
                .mcut_quotient_zero,
            Some(false)
        );
    }

    #[test]
    fn csv_and_markdown_shapes() {
        let r = sweep(
            &GridSpec::square(0, 0).unwrap(),
            &[CheckId::Morse],
            SweepOptions::default(),
        );
        let csv = r.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("r_P,r_Q,check_id,passed,witness"));
        assert_eq!(lines.next(), Some(r#"0,0,morse,true,"[{""0"":1}]""#));
        let md = r.to_markdown();
        assert!(md.contains("| morse | 1 | 0 |"));
    }

    #[test]
    fn report_json_round_trip() {
        let r = sweep(
            &GridSpec::square(-1, 1).unwrap(),
            &CheckId::ALL,
            SweepOptions::default(),
        );
        let back: SweepReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
