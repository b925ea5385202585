//! `(r, a, b)`-codes of `Z²` from diagonal colorings: folded cycles of the
//! five coloring families, the `(a, b)` table derived from the cycle rows,
//! preset code generation and an end-to-end check.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::rotation_instance;
use crate::cycles::{
    predicted_rows, ConcreteWeights, CycleFamily, CycleSpec, RowKind, WeightedCycle,
};
use crate::error::{Error, Result};
use crate::label::{classify_labelling, Coloring, LabellingVerdict, VerdictKind};
use crate::lattice::{
    build_diagonal_coloring, fold_profile, manhattan_ball_size, project_ball, verify_code,
    CodeReport, LinePattern, Orientation, PeriodicColoring, Violation,
};

/// Largest radius accepted by [`end_to_end`] unless overridden.
pub const DEFAULT_MAX_RADIUS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Coloring1,
    Coloring2,
    Coloring3,
    Coloring4,
    Coloring5,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Coloring1,
        Family::Coloring2,
        Family::Coloring3,
        Family::Coloring4,
        Family::Coloring5,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring{}", self.number())
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `3`, `coloring3` or `Coloring3`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let digits = lower.strip_prefix("coloring").unwrap_or(&lower);
        digits
            .parse::<usize>()
            .ok()
            .and_then(|n| Family::ALL.get(n.checked_sub(1)?).copied())
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?} (expected 1..5)")))
    }
}

/// Sub-variant of Coloring 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    TwoPeriodic,
    ThreePeriodic,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "two-periodic" | "two" | "2" => Ok(Variant::TwoPeriodic),
            "three-periodic" | "three" | "3" => Ok(Variant::ThreePeriodic),
            _ => Err(Error::Parse(format!(
                "unknown variant {s:?} (expected two-periodic or three-periodic)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::TwoPeriodic => "two-periodic",
            Variant::ThreePeriodic => "three-periodic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub r: u32,
    /// Required for Coloring 5, absent otherwise.
    pub variant: Option<Variant>,
}

impl FamilySpec {
    pub fn new(family: Family, r: u32) -> Self {
        FamilySpec {
            family,
            r,
            variant: None,
        }
    }

    pub fn coloring5(r: u32, variant: Variant) -> Self {
        FamilySpec {
            family: Family::Coloring5,
            r,
            variant: Some(variant),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::Constraint(format!(
                "r ≥ 2 required, got r = {}",
                self.r
            )));
        }
        match (self.family, self.variant) {
            (Family::Coloring5, None) => Err(Error::Constraint(
                "Coloring5 requires a variant (two-periodic or three-periodic)".into(),
            )),
            (Family::Coloring5, Some(_)) => Ok(()),
            (f, Some(_)) => Err(Error::Constraint(format!("{f} takes no variant"))),
            (Family::Coloring4, None) if !(2 * self.r + 1).is_multiple_of(3) => {
                Err(Error::Constraint(format!(
                    "Coloring4 requires 2r+1 ≡ 0 (mod 3), got r = {}",
                    self.r
                )))
            }
            _ => Ok(()),
        }
    }

    /// Every family and variant defined at `r`, in canonical order.
    pub fn all_at(r: u32) -> Vec<FamilySpec> {
        let mut out = vec![
            FamilySpec::new(Family::Coloring1, r),
            FamilySpec::new(Family::Coloring2, r),
            FamilySpec::new(Family::Coloring3, r),
            FamilySpec::new(Family::Coloring4, r),
            FamilySpec::coloring5(r, Variant::TwoPeriodic),
            FamilySpec::coloring5(r, Variant::ThreePeriodic),
        ];
        out.retain(|s| s.validate().is_ok());
        out
    }

    /// Cycle family, length and weights of the folded cycle.
    pub fn cycle_spec(&self) -> Result<CycleSpec> {
        self.validate()?;
        let r = i64::from(self.r);
        let even = r % 2 == 0;
        let w = |z, x, y, t| ConcreteWeights::new(z, x, y, t);
        let (family, p, weights) = match self.family {
            Family::Coloring1 if even => (CycleFamily::Type1, r + 1, w(r + 1, 2 * r + 1, 0, 0)),
            Family::Coloring1 => (CycleFamily::Type1, r, w(3 * r + 2, 2 * r + 1, 0, 0)),
            // C_4 is too short for Type 8; its word z x t x is Type 2.
            Family::Coloring2 if r == 2 => (CycleFamily::Type2, 4, w(3, 2, 0, 6)),
            Family::Coloring2 if even => {
                (CycleFamily::Type8, 2 * r, w(r + 1, r, r + 1, 2 * (r + 1)))
            }
            Family::Coloring2 => (CycleFamily::Type8, 2 * (r + 1), w(r, r + 1, r, 0)),
            // C_2 is too short for Type 4; its word z x is Type 1.
            Family::Coloring3 if r == 2 => (CycleFamily::Type1, 2, w(9, 4, 0, 0)),
            Family::Coloring3 if even => {
                (CycleFamily::Type4, r, w(3 * (r + 1), 2 * r, 2 * (r + 1), 0))
            }
            Family::Coloring3 => (CycleFamily::Type4, r + 1, w(r, 2 * (r + 1), 2 * r, 0)),
            Family::Coloring4 if even => (CycleFamily::Type5, 2 * r + 1, w(r + 1, r, r + 1, 0)),
            Family::Coloring4 => (CycleFamily::Type6, 2 * r + 1, w(r, r + 1, r, 0)),
            Family::Coloring5 => match self.variant.expect("validated") {
                Variant::TwoPeriodic if even => {
                    (CycleFamily::Type1, 2, w((r + 1) * (r + 1), r * r, 0, 0))
                }
                Variant::TwoPeriodic => (CycleFamily::Type1, 2, w(r * r, (r + 1) * (r + 1), 0, 0)),
                Variant::ThreePeriodic => {
                    let m = 2 * r * r + 2 * r;
                    let (z, x) = match r % 3 {
                        1 => ((m - 1) / 3, (m + 2) / 3),
                        2 => {
                            let k = (r + 1) / 3;
                            (m / 3 - 2 * k + 1, m / 3 + k)
                        }
                        _ => {
                            let k = r / 3;
                            (m / 3 + 2 * k + 1, m / 3 - k)
                        }
                    };
                    (CycleFamily::Type1, 3, w(z, x, 0, 0))
                }
            },
        };
        Ok(CycleSpec::concrete(family, p as usize, weights))
    }

    /// Table rows this family contributes, by cycle row kind.
    fn counts_row(&self, kind: RowKind) -> bool {
        use RowKind::*;
        match self.family {
            Family::Coloring1 | Family::Coloring5 => kind == Type1Block,
            Family::Coloring2 => matches!(kind, Type2Antiperiodic | Type8Antiperiodic),
            Family::Coloring3 => matches!(kind, Type1Block | Type4Balanced | Type4Alternate),
            Family::Coloring4 => kind == ThreePattern,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r={}", self.family, self.r)?;
        if let Some(v) = self.variant {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// The folded cycle of a coloring family, with concrete integer weights.
pub fn family_cycle(spec: &FamilySpec) -> Result<WeightedCycle> {
    crate::cycles::build_cycle(&spec.cycle_spec()?)
}

/// The same cycle obtained directly by folding the shift-1 projection.
pub fn folded_family_cycle(spec: &FamilySpec) -> Result<WeightedCycle> {
    let p = spec.cycle_spec()?.p;
    fold_profile(&project_ball(spec.r, 1), p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeTableRow {
    pub family: Family,
    pub variant: Option<Variant>,
    pub r: u32,
    pub alpha: Option<u32>,
    pub a: u64,
    pub b: u64,
    pub in_scope: bool,
    pub kind: RowKind,
}

impl CodeTableRow {
    pub fn spec(&self) -> FamilySpec {
        FamilySpec {
            family: self.family,
            r: self.r,
            variant: self.variant,
        }
    }
}

/// Rows of one family, from the predicted cycle rows of its folded cycle.
pub fn family_table(spec: &FamilySpec) -> Result<Vec<CodeTableRow>> {
    let cycle_spec = spec.cycle_spec()?;
    let mut rows = Vec::new();
    for row in predicted_rows(&cycle_spec)? {
        if !spec.counts_row(row.kind) {
            continue;
        }
        let as_int = |e: &crate::weight::WeightExpr| {
            e.as_count().ok_or_else(|| {
                Error::Constraint(format!(
                    "{spec}: row constant {e} is not a non-negative integer"
                ))
            })
        };
        let (a, b) = (as_int(&row.a)?, as_int(&row.b)?);
        rows.push(CodeTableRow {
            family: spec.family,
            variant: spec.variant,
            r: spec.r,
            alpha: row.alpha,
            a,
            b,
            in_scope: a.abs_diff(b) > 4,
            kind: row.kind,
        });
    }
    Ok(rows)
}

/// All table rows at radius `r`, ordered by family, variant and α.
pub fn theorem_table(r: u32) -> Result<Vec<CodeTableRow>> {
    if r < 2 {
        return Err(Error::Constraint(format!("r ≥ 2 required, got r = {r}")));
    }
    let mut out = Vec::new();
    for spec in FamilySpec::all_at(r) {
        out.extend(family_table(&spec)?);
    }
    Ok(out)
}

/// How to pick the cycle coloring of a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodePreset {
    /// Blacks at `0..=α`; for Coloring 3 the balanced block `0..=2α+1`.
    InitialBlock(u32),
    /// `•∘•∘…`
    Alternate,
    /// Blacks at `0..p/2`.
    HalfBlack,
    /// The first `α + 1` of every three positions black.
    ThreePattern(u32),
    Explicit(Coloring),
}

impl CodePreset {
    pub fn coloring(&self, spec: &FamilySpec, p: usize) -> Result<Coloring> {
        let reject = |msg: String| Err(Error::Constraint(msg));
        match self {
            CodePreset::InitialBlock(alpha) => {
                let alpha = *alpha as usize;
                let end = if spec.family == Family::Coloring3 {
                    2 * alpha + 1
                } else {
                    alpha
                };
                if end >= p {
                    return reject(format!("initial block 0..={end} does not fit in p = {p}"));
                }
                Ok(Coloring::from_blacks(p, 0..=end))
            }
            CodePreset::Alternate => {
                if !p.is_multiple_of(2) {
                    return reject(format!("alternate preset requires even p, got {p}"));
                }
                Ok(Coloring::from_blacks(p, (0..p).step_by(2)))
            }
            CodePreset::HalfBlack => {
                if !p.is_multiple_of(2) {
                    return reject(format!("half-black preset requires even p, got {p}"));
                }
                Ok(Coloring::from_blacks(p, 0..p / 2))
            }
            CodePreset::ThreePattern(alpha) => {
                if !p.is_multiple_of(3) || *alpha > 1 {
                    return reject(format!(
                        "three-pattern preset requires 3 | p and α ∈ {{0, 1}}, got p = {p}, α = {alpha}"
                    ));
                }
                Ok(Coloring::from_blacks(
                    p,
                    (0..p).filter(|i| i % 3 <= *alpha as usize),
                ))
            }
            CodePreset::Explicit(c) => {
                if c.len() != p {
                    return Err(Error::Dimension {
                        expected: p,
                        actual: c.len(),
                    });
                }
                Ok(c.clone())
            }
        }
    }

    /// Representative preset of a table row.
    pub fn for_row(row: &CodeTableRow) -> CodePreset {
        let alpha = row.alpha.unwrap_or(0);
        match (row.family, row.kind) {
            (Family::Coloring2, _) => CodePreset::HalfBlack,
            (Family::Coloring3, RowKind::Type4Balanced) => CodePreset::InitialBlock(alpha),
            (Family::Coloring3, _) => CodePreset::Alternate,
            (Family::Coloring4, _) => CodePreset::ThreePattern(1),
            (Family::Coloring5, _) if row.variant == Some(Variant::ThreePeriodic) => {
                CodePreset::ThreePattern(alpha)
            }
            _ => CodePreset::InitialBlock(alpha),
        }
    }
}

impl fmt::Display for CodePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodePreset::InitialBlock(a) => write!(f, "initial-block({a})"),
            CodePreset::Alternate => f.write_str("alternate"),
            CodePreset::HalfBlack => f.write_str("half-black"),
            CodePreset::ThreePattern(a) => write!(f, "three-pattern({a})"),
            CodePreset::Explicit(c) => write!(f, "explicit({c})"),
        }
    }
}

/// The preset's cycle coloring with its verdict on the family cycle; rejects
/// colorings that are not constant 2-labellings.
pub fn classify_preset(
    spec: &FamilySpec,
    preset: &CodePreset,
) -> Result<(Coloring, LabellingVerdict)> {
    let cycle = family_cycle(spec)?;
    let coloring = preset.coloring(spec, cycle.p())?;
    let verdict = classify_labelling(&rotation_instance(&cycle), &coloring)?;
    if verdict.kind == VerdictKind::NotConstant {
        return Err(Error::PresetRejected {
            coloring: coloring.to_string(),
            witness: verdict.witness,
        });
    }
    Ok((coloring, verdict))
}

/// A diagonal coloring of `Z²` whose line pattern is the validated preset coloring.
pub fn generate_code(
    spec: &FamilySpec,
    preset: &CodePreset,
    orientation: Orientation,
) -> Result<PeriodicColoring> {
    let (coloring, _) = classify_preset(spec, preset)?;
    Ok(build_diagonal_coloring(
        LinePattern::new(coloring)?,
        orientation,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineRow {
    pub family: Family,
    pub variant: Option<Variant>,
    pub alpha: Option<u32>,
    pub kind: RowKind,
    pub a: u64,
    pub b: u64,
    pub in_scope: bool,
    pub preset: String,
    pub pattern: Option<Coloring>,
    /// Constants of the pattern on the folded cycle.
    pub cycle_a: Option<u64>,
    pub cycle_b: Option<u64>,
    pub lattice: Option<CodeReport>,
    pub verified: bool,
    pub violation: Option<Violation>,
    /// Outcome for the crossed orientation, informational only.
    pub crossed_verified: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub r: u32,
    pub rows: Vec<PipelineRow>,
}

impl PipelineReport {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }

    /// Every in-scope row is realized by a verified code.
    pub fn in_scope_realized(&self) -> bool {
        self.rows.iter().filter(|r| r.in_scope).all(|r| r.verified)
    }
}

fn run_row(row: &CodeTableRow) -> PipelineRow {
    let spec = row.spec();
    let preset = CodePreset::for_row(row);
    let mut out = PipelineRow {
        family: row.family,
        variant: row.variant,
        alpha: row.alpha,
        kind: row.kind,
        a: row.a,
        b: row.b,
        in_scope: row.in_scope,
        preset: preset.to_string(),
        pattern: None,
        cycle_a: None,
        cycle_b: None,
        lattice: None,
        verified: false,
        violation: None,
        crossed_verified: None,
        error: None,
    };
    let result = (|| -> Result<()> {
        let (coloring, verdict) = classify_preset(&spec, &preset)?;
        out.pattern = Some(coloring.clone());
        out.cycle_a = verdict.a.as_ref().and_then(|e| e.as_count());
        out.cycle_b = verdict.b.as_ref().and_then(|e| e.as_count());
        let pattern = LinePattern::new(coloring)?;
        let report = verify_code(
            &build_diagonal_coloring(pattern.clone(), Orientation::Parallel),
            row.r,
        )?;
        let expected = (Some(row.a), Some(row.b));
        out.verified = report.is_verified()
            && (report.a, report.b) == expected
            && (out.cycle_a, out.cycle_b) == expected;
        out.violation = report.violation;
        out.lattice = Some(report);
        let crossed = verify_code(
            &build_diagonal_coloring(pattern, Orientation::Crossed),
            row.r,
        )?;
        out.crossed_verified = Some(crossed.is_verified() && (crossed.a, crossed.b) == expected);
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out
}

/// Generates, classifies and verifies the preset code of every table row at `r`.
pub fn end_to_end(r: u32) -> Result<PipelineReport> {
    end_to_end_bounded(r, DEFAULT_MAX_RADIUS)
}

pub fn end_to_end_bounded(r: u32, max_r: u32) -> Result<PipelineReport> {
    if r < 2 || r > max_r {
        return Err(Error::Constraint(format!(
            "end-to-end runs need 2 ≤ r ≤ {max_r}, got r = {r}"
        )));
    }
    let table = theorem_table(r)?;
    let rows = table.par_iter().map(run_row).collect();
    Ok(PipelineReport { r, rows })
}

/// Mass of every family cycle: `2r² + 2r + 1`.
pub fn expected_mass(r: u32) -> u64 {
    manhattan_ball_size(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::VertexWeighting;

    fn weights(spec: FamilySpec) -> VertexWeighting {
        family_cycle(&spec).unwrap().weights
    }

    #[test]
    fn family_cycle_examples() {
        assert_eq!(
            weights(FamilySpec::new(Family::Coloring1, 2)),
            VertexWeighting::from_integers(&[3, 5, 5]).unwrap()
        );
        assert_eq!(
            weights(FamilySpec::new(Family::Coloring2, 4)),
            VertexWeighting::from_integers(&[5, 4, 5, 4, 10, 4, 5, 4]).unwrap()
        );
        assert_eq!(
            weights(FamilySpec::coloring5(3, Variant::ThreePeriodic)),
            VertexWeighting::from_integers(&[11, 7, 7]).unwrap()
        );
        assert_eq!(
            weights(FamilySpec::coloring5(2, Variant::TwoPeriodic)),
            VertexWeighting::from_integers(&[9, 4]).unwrap()
        );
    }

    #[test]
    fn family_cycles_are_foldings() {
        for r in 2..=8 {
            for spec in FamilySpec::all_at(r) {
                let c = family_cycle(&spec).unwrap();
                assert_eq!(
                    c.weights,
                    folded_family_cycle(&spec).unwrap().weights,
                    "{spec}"
                );
                assert_eq!(
                    c.weights.total().as_count(),
                    Some(expected_mass(r)),
                    "{spec}"
                );
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            FamilySpec::new(Family::Coloring4, 5).validate(),
            Err(Error::Constraint(m)) if m.contains("2r+1 ≡ 0 (mod 3)")
        ));
        assert!(FamilySpec::new(Family::Coloring4, 4).validate().is_ok());
        assert!(FamilySpec::new(Family::Coloring5, 4).validate().is_err());
        assert!(FamilySpec::new(Family::Coloring1, 1).validate().is_err());
        assert_eq!("coloring3".parse::<Family>().unwrap(), Family::Coloring3);
        assert_eq!("5".parse::<Family>().unwrap(), Family::Coloring5);
        assert!("6".parse::<Family>().is_err());
    }

    #[test]
    fn table_examples() {
        let t2 = theorem_table(2).unwrap();
        let c1: Vec<_> = t2
            .iter()
            .filter(|r| r.family == Family::Coloring1)
            .map(|r| (r.a, r.b, r.in_scope))
            .collect();
        assert_eq!(c1, vec![(3, 5, false), (8, 10, false)]);

        let t4 = theorem_table(4).unwrap();
        let find = |f: Family| t4.iter().filter(move |r| r.family == f);
        let c2: Vec<_> = find(Family::Coloring2)
            .map(|r| (r.a, r.b, r.in_scope))
            .collect();
        assert_eq!(c2, vec![(18, 23, true)]);
        let c4: Vec<_> = find(Family::Coloring4)
            .map(|r| (r.a, r.b, r.in_scope))
            .collect();
        assert_eq!(c4, vec![(27, 28, false)]);
    }

    #[test]
    fn generated_codes() {
        let spec = FamilySpec::new(Family::Coloring2, 4);
        let (c, v) = classify_preset(&spec, &CodePreset::HalfBlack).unwrap();
        assert_eq!(c.to_string(), "11110000");
        assert_eq!(
            v.pair().map(|(a, b)| (a.as_count(), b.as_count())),
            Some((Some(18), Some(23)))
        );

        let code = generate_code(
            &FamilySpec::new(Family::Coloring4, 4),
            &CodePreset::ThreePattern(1),
            Orientation::Parallel,
        )
        .unwrap();
        assert_eq!(code.pattern.colors.to_string(), "110110110");

        let code = generate_code(
            &FamilySpec::new(Family::Coloring1, 2),
            &CodePreset::InitialBlock(0),
            Orientation::Parallel,
        )
        .unwrap();
        assert!(code.is_black(4, 1) && !code.is_black(4, 2));
    }

    #[test]
    fn preset_rejection() {
        let spec = FamilySpec::new(Family::Coloring2, 4);
        let err =
            classify_preset(&spec, &CodePreset::Explicit("10000000".parse().unwrap())).unwrap_err();
        assert!(matches!(
            err,
            Error::PresetRejected {
                witness: Some(_),
                ..
            }
        ));
        assert!(classify_preset(&spec, &CodePreset::ThreePattern(1)).is_err());
    }

    #[test]
    fn pipeline_r2() {
        let rep = end_to_end(2).unwrap();
        assert!(rep.all_verified(), "{:#?}", rep.rows);
        let pairs: Vec<_> = rep.rows.iter().map(|r| (r.a, r.b)).collect();
        for want in [(3, 5), (8, 10), (5, 8), (9, 4)] {
            assert!(pairs.contains(&want), "{want:?} missing from {pairs:?}");
        }
        assert!(end_to_end(1).is_err());
        assert!(end_to_end(9).is_err());
    }
}
