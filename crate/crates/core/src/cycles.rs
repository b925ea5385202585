//! The eight weighted-cycle families, their predicted constant 2-labellings
//! under the rotation group, and the harness that checks the predictions
//! against exhaustive enumeration.
//!
//! Family words (vertex 0 first):
//!
//! | family | word                              | length constraint      |
//! |--------|-----------------------------------|------------------------|
//! | 1      | `z x^(p-1)`                       | p ≥ 2                  |
//! | 2      | `z x^((p-2)/2) t x^((p-2)/2)`     | p even, p ≥ 4          |
//! | 3      | `z (xy)^((p-1)/2)`                | p odd, p ≥ 3           |
//! | 4      | `z (xy)^((p-2)/2) x`              | p even, p ≥ 4          |
//! | 5      | `z (xy)^((p-1)/4) (yx)^((p-1)/4)` | p ≡ 1 (mod 4), p ≥ 5   |
//! | 6      | `z (xy)^((p-3)/4) xx (yx)^((p-3)/4)` | p ≡ 3 (mod 4), p ≥ 7 |
//! | 7      | `z (xy)^((p-2)/4) t (yx)^((p-2)/4)`  | p ≡ 2 (mod 4), p ≥ 6 |
//! | 8      | `z (xy)^((p-4)/4) xtx (yx)^((p-4)/4)`| p ≡ 0 (mod 4), p ≥ 8 |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;

use num_integer::binomial;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::label::{
    complement_coloring, enumerate_labellings_bounded, Automorphism, Coloring, LabellingInstance,
    VertexWeighting, DEFAULT_ENUMERATION_BOUND,
};
use crate::weight::{int, Rational, RelationSet, Symbol, WeightExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleFamily {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5,
    Type6,
    Type7,
    Type8,
}

impl CycleFamily {
    pub const ALL: [CycleFamily; 8] = [
        CycleFamily::Type1,
        CycleFamily::Type2,
        CycleFamily::Type3,
        CycleFamily::Type4,
        CycleFamily::Type5,
        CycleFamily::Type6,
        CycleFamily::Type7,
        CycleFamily::Type8,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    /// Checks that the family word has integral exponents at length `p`.
    pub fn check_length(self, p: usize) -> Result<()> {
        use CycleFamily::*;
        let (ok, rule) = match self {
            Type1 => (p >= 2, "p ≥ 2"),
            Type2 => (p.is_multiple_of(2) && p >= 4, "p even and p ≥ 4"),
            Type3 => (p % 2 == 1 && p >= 3, "p odd and p ≥ 3"),
            Type4 => (p.is_multiple_of(2) && p >= 4, "p even and p ≥ 4"),
            Type5 => (p % 4 == 1 && p >= 5, "p ≡ 1 (mod 4) and p ≥ 5"),
            Type6 => (p % 4 == 3 && p >= 7, "p ≡ 3 (mod 4) and p ≥ 7"),
            Type7 => (p % 4 == 2 && p >= 6, "p ≡ 2 (mod 4) and p ≥ 6"),
            Type8 => (p.is_multiple_of(4) && p >= 8, "p ≡ 0 (mod 4) and p ≥ 8"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Constraint(format!(
                "{self} requires {rule}, got p = {p}"
            )))
        }
    }

    /// Valid cycle lengths up to `max_p`.
    pub fn valid_lengths(self, max_p: usize) -> impl Iterator<Item = usize> {
        (1..=max_p).filter(move |&p| self.check_length(p).is_ok())
    }

    /// Weight symbols that must differ.
    pub fn inequations(self) -> &'static [(Symbol, Symbol)] {
        use CycleFamily::*;
        use Symbol::*;
        match self {
            Type1 => &[],
            Type2 => &[(X, T)],
            Type3 | Type4 | Type5 | Type6 => &[(X, Y)],
            Type7 => &[(X, Y), (X, T)],
            Type8 => &[(X, Y), (Y, T)],
        }
    }

    /// The letters of the family word at length `p`.
    pub fn word(self, p: usize) -> Result<Vec<Symbol>> {
        use CycleFamily::*;
        use Symbol::*;
        self.check_length(p)?;
        let xy = |k: usize| [X, Y].repeat(k);
        let yx = |k: usize| [Y, X].repeat(k);
        let mut w = vec![Z];
        match self {
            Type1 => w.extend(std::iter::repeat_n(X, p - 1)),
            Type2 => {
                let h = (p - 2) / 2;
                w.extend(std::iter::repeat_n(X, h));
                w.push(T);
                w.extend(std::iter::repeat_n(X, h));
            }
            Type3 => w.extend(xy((p - 1) / 2)),
            Type4 => {
                w.extend(xy((p - 2) / 2));
                w.push(X);
            }
            Type5 => {
                w.extend(xy((p - 1) / 4));
                w.extend(yx((p - 1) / 4));
            }
            Type6 => {
                w.extend(xy((p - 3) / 4));
                w.extend([X, X]);
                w.extend(yx((p - 3) / 4));
            }
            Type7 => {
                w.extend(xy((p - 2) / 4));
                w.push(T);
                w.extend(yx((p - 2) / 4));
            }
            Type8 => {
                w.extend(xy((p - 4) / 4));
                w.extend([X, T, X]);
                w.extend(yx((p - 4) / 4));
            }
        }
        debug_assert_eq!(w.len(), p);
        Ok(w)
    }
}

impl fmt::Display for CycleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type {}", self.number())
    }
}

impl Serialize for CycleFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

/// Concrete values for `(z, x, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConcreteWeights {
    #[serde(serialize_with = "ser_rational")]
    pub z: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub y: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub t: Rational,
}

pub(crate) fn ser_rational<S: Serializer>(
    r: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(r)
}

impl ConcreteWeights {
    pub fn new(z: i64, x: i64, y: i64, t: i64) -> Self {
        ConcreteWeights {
            z: int(z),
            x: int(x),
            y: int(y),
            t: int(t),
        }
    }

    pub fn values(&self) -> [Rational; 4] {
        [self.z, self.x, self.y, self.t]
    }

    pub fn get(&self, s: Symbol) -> Rational {
        self.values()[s.index()]
    }
}

impl Default for ConcreteWeights {
    /// Screened so that no family distinctness or special-t relation holds by accident.
    fn default() -> Self {
        ConcreteWeights::new(1009, 97, 301, 555)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "values")]
pub enum WeightMode {
    Symbolic,
    Concrete(ConcreteWeights),
}

/// A family, a length and a weight mode. `special_t` (Type 8 only) imposes
/// `4t = p·x + (4 - p)·y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleSpec {
    pub family: CycleFamily,
    pub p: usize,
    pub mode: WeightMode,
    pub special_t: bool,
}

impl CycleSpec {
    pub fn symbolic(family: CycleFamily, p: usize) -> Self {
        CycleSpec {
            family,
            p,
            mode: WeightMode::Symbolic,
            special_t: false,
        }
    }

    pub fn concrete(family: CycleFamily, p: usize, weights: ConcreteWeights) -> Self {
        CycleSpec {
            family,
            p,
            mode: WeightMode::Concrete(weights),
            special_t: false,
        }
    }

    pub fn with_special_t(mut self) -> Self {
        self.special_t = true;
        self
    }

    /// Coefficients of the special-t relation written as `t = cx·x + cy·y`.
    fn special_t_expr(&self) -> WeightExpr {
        let q = Rational::new(self.p as i64, 4);
        WeightExpr::symbol(Symbol::X) * q + WeightExpr::symbol(Symbol::Y) * (int(1) - q)
    }

    /// Concrete values after the special-t substitution, if in concrete mode.
    fn concrete_values(&self) -> Option<ConcreteWeights> {
        match self.mode {
            WeightMode::Symbolic => None,
            WeightMode::Concrete(mut w) => {
                if self.special_t {
                    w.t = self.special_t_expr().evaluate(&w.values());
                }
                Some(w)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.family.check_length(self.p)?;
        if self.special_t && self.family != CycleFamily::Type8 {
            return Err(Error::Constraint(format!(
                "the special-t relation only applies to Type 8, not {}",
                self.family
            )));
        }
        if let Some(w) = self.concrete_values() {
            for &(a, b) in self.family.inequations() {
                if w.get(a) == w.get(b) {
                    return Err(Error::Constraint(format!(
                        "{} requires {a} ≠ {b}, but both equal {}",
                        self.family,
                        w.get(a)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Relations attached to cycles built from this spec.
    pub fn relations(&self) -> Result<RelationSet> {
        let mut rel = RelationSet::new();
        if self.mode == WeightMode::Symbolic {
            for &(a, b) in self.family.inequations() {
                rel.add_inequation(a, b)?;
            }
            if self.special_t {
                // 4t = p·x + (4 - p)·y
                let lhs = WeightExpr::symbol(Symbol::T) * 4;
                let rhs = WeightExpr::symbol(Symbol::X) * self.p as i64
                    + WeightExpr::symbol(Symbol::Y) * (4 - self.p as i64);
                rel.add_relation(&lhs, &rhs)?;
            }
        }
        Ok(rel)
    }

    /// Maps a symbolic expression into this spec's weight space (reduced or evaluated).
    pub fn instantiate(&self, expr: &WeightExpr) -> Result<WeightExpr> {
        Ok(match self.concrete_values() {
            Some(w) => WeightExpr::constant(expr.evaluate(&w.values())),
            None => self.relations()?.reduce(expr),
        })
    }
}

/// A cycle with per-vertex weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedCycle {
    pub weights: VertexWeighting,
    pub origin: Option<CycleSpec>,
    #[serde(skip)]
    pub relations: RelationSet,
}

impl WeightedCycle {
    /// A cycle with explicit weights and no family tag.
    pub fn from_weights(weights: VertexWeighting) -> Self {
        WeightedCycle {
            weights,
            origin: None,
            relations: RelationSet::new(),
        }
    }

    pub fn p(&self) -> usize {
        self.weights.len()
    }
}

/// Emits the weights spelled by the family word.
pub fn build_cycle(spec: &CycleSpec) -> Result<WeightedCycle> {
    spec.validate()?;
    let word = spec.family.word(spec.p)?;
    let values = spec.concrete_values();
    let weights = word
        .into_iter()
        .map(|s| match &values {
            Some(w) => WeightExpr::constant(w.get(s)),
            None => WeightExpr::symbol(s),
        })
        .collect();
    Ok(WeightedCycle {
        weights: VertexWeighting::new(weights)?,
        origin: Some(*spec),
        relations: spec.relations()?,
    })
}

/// The rotation `i ↦ i + k mod p`.
pub fn rotation(p: usize, k: i64) -> Automorphism {
    assert!(p >= 1, "rotation of an empty cycle");
    let shift = k.rem_euclid(p as i64) as usize;
    Automorphism::new((0..p).map(|i| (i + shift) % p).collect()).expect("rotation is a bijection")
}

/// All rotations `R_0..R_{p-1}` with base vertex 0.
pub fn rotation_instance(cycle: &WeightedCycle) -> LabellingInstance {
    let p = cycle.p();
    let rotations = (0..p as i64).map(|k| rotation(p, k)).collect();
    LabellingInstance::new(cycle.weights.clone(), rotations, 0, cycle.relations.clone())
        .expect("rotation instance is well formed")
}

/// Exact period and antiperiod sets of a cycle coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternClass {
    pub periods: BTreeSet<usize>,
    pub antiperiods: BTreeSet<usize>,
    pub is_alternate: bool,
}

pub fn pattern_class(coloring: &Coloring) -> PatternClass {
    let p = coloring.len();
    let c = coloring.colors();
    let mut periods = BTreeSet::new();
    let mut antiperiods = BTreeSet::new();
    for m in 1..=p {
        if (0..p).all(|i| c[i] == c[(i + m) % p]) {
            periods.insert(m);
        }
        if (0..p).all(|i| c[i] != c[(i + m) % p]) {
            antiperiods.insert(m);
        }
    }
    let is_alternate = p.is_multiple_of(2) && p >= 2 && periods.contains(&2) && c[0] != c[1];
    PatternClass {
        periods,
        antiperiods,
        is_alternate,
    }
}

/// Structural property a labelling in a predicted row must have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Any,
    Alternate,
    Periodic(usize),
    Antiperiodic(usize),
    /// Up to rotation, the coloring repeats this pattern.
    Pattern(Coloring),
    /// As many black vertices at even positions as at odd positions.
    Balanced,
    /// Up to rotation: every even position black, and antipodal odd positions differ.
    Psi,
    /// Complement of [`Structure::Psi`].
    PsiComplement,
}

impl Structure {
    pub fn holds(&self, coloring: &Coloring) -> bool {
        let p = coloring.len();
        match self {
            Structure::Any => true,
            Structure::Alternate => pattern_class(coloring).is_alternate,
            Structure::Periodic(m) => pattern_class(coloring).periods.contains(m),
            Structure::Antiperiodic(m) => pattern_class(coloring).antiperiods.contains(m),
            Structure::Pattern(pat) => {
                let m = pat.len();
                m > 0
                    && p.is_multiple_of(m)
                    && (0..m).any(|k| {
                        let r = coloring.rotated(k);
                        (0..p).all(|i| r.get(i) == pat.get(i % m))
                    })
            }
            Structure::Balanced => {
                let even = (0..p).step_by(2).filter(|&i| coloring.is_black(i)).count();
                let odd = (1..p).step_by(2).filter(|&i| coloring.is_black(i)).count();
                p.is_multiple_of(2) && even == odd
            }
            Structure::Psi => is_psi_rotation(coloring),
            Structure::PsiComplement => is_psi_rotation(&complement_coloring(coloring)),
        }
    }
}

fn is_psi_rotation(coloring: &Coloring) -> bool {
    let p = coloring.len();
    if !p.is_multiple_of(4) {
        return false;
    }
    let half = p / 2;
    (0..2).any(|k| {
        let r = coloring.rotated(k);
        (0..half).all(|i| {
            if i % 2 == 0 {
                r.is_black(i) && r.is_black(i + half)
            } else {
                r.get(i) != r.get(i + half)
            }
        })
    })
}

/// Where a predicted row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Type1Block,
    Type2Periodic,
    Type2Antiperiodic,
    Type4Balanced,
    Type4Alternate,
    ThreePattern,
    /// Complement of [`RowKind::ThreePattern`]; not listed in the published table.
    ThreePatternComplement,
    Type7Alternate,
    Type7Periodic,
    Type8Alternate,
    Type8Periodic,
    Type8Antiperiodic,
    Type8PsiDense,
    Type8PsiSparse,
}

impl RowKind {
    /// Rows that appear in the published classification table.
    pub fn in_published_table(self) -> bool {
        self != RowKind::ThreePatternComplement
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideCondition {
    Congruence { residue: usize, modulus: usize },
    SpecialT,
}

/// One predicted pair of constants, instantiated at `p` (and at `alpha` when
/// the row is a family).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedRow {
    pub kind: RowKind,
    pub alpha: Option<u32>,
    pub alpha_range: Option<RangeInclusive<u32>>,
    pub a: WeightExpr,
    pub b: WeightExpr,
    pub side_condition: Option<SideCondition>,
    pub structure: Vec<Structure>,
    /// Number of colorings of `C_p` realizing this row.
    pub realizing_count: u64,
    pub deviation: Option<&'static str>,
}

const TYPE7_ALPHA_NOTE: &str =
    "α ranges over 0..=p/2-2; the published table's upper end p/2-1 is not realized";
const TYPE8_ALPHA_NOTE: &str =
    "α ranges over 0..=p/4-2; the published table's upper end p/4-1 is not realized";
const COMPLEMENT_NOTE: &str =
    "complement of the ••∘ row; the published table lists labellings up to complement only";

fn choose(n: usize, k: usize) -> u64 {
    binomial(n as u64, k as u64)
}

/// Predicted constant pairs for the family at `spec.p`, with realizing counts.
pub fn predicted_rows(spec: &CycleSpec) -> Result<Vec<PredictedRow>> {
    use CycleFamily::*;
    spec.validate()?;
    let p = spec.p;
    let pi = p as i64;
    let z = WeightExpr::symbol(Symbol::Z);
    let x = WeightExpr::symbol(Symbol::X);
    let y = WeightExpr::symbol(Symbol::Y);
    let t = WeightExpr::symbol(Symbol::T);

    struct Raw {
        kind: RowKind,
        alpha: Option<(u32, RangeInclusive<u32>)>,
        a: WeightExpr,
        b: WeightExpr,
        side: Option<SideCondition>,
        structure: Vec<Structure>,
        count: u64,
        deviation: Option<&'static str>,
    }
    let fixed = |kind, a, b, structure, count| Raw {
        kind,
        alpha: None,
        a,
        b,
        side: None,
        structure,
        count,
        deviation: None,
    };
    let mut raw: Vec<Raw> = Vec::new();

    match spec.family {
        Type1 => {
            let range = 0..=(pi - 2) as u32;
            for al in range.clone() {
                let a_ = i64::from(al);
                raw.push(Raw {
                    alpha: Some((al, range.clone())),
                    ..fixed(
                        RowKind::Type1Block,
                        x.clone() * a_ + z.clone(),
                        x.clone() * (a_ + 1),
                        vec![Structure::Any],
                        choose(p, al as usize + 1),
                    )
                });
            }
        }
        Type2 => {
            let half = p / 2;
            let range = 0..=((pi - 4) / 2) as u32;
            for al in range.clone() {
                let a_ = i64::from(al);
                raw.push(Raw {
                    alpha: Some((al, range.clone())),
                    ..fixed(
                        RowKind::Type2Periodic,
                        x.clone() * (2 * a_) + t.clone() + z.clone(),
                        x.clone() * (2 * (a_ + 1)),
                        vec![Structure::Periodic(half)],
                        choose(half, al as usize + 1),
                    )
                });
            }
            raw.push(fixed(
                RowKind::Type2Antiperiodic,
                x.clone() * (pi / 2 - 1) + z.clone(),
                x.clone() * (pi / 2 - 1) + t.clone(),
                vec![Structure::Antiperiodic(half)],
                1 << half,
            ));
        }
        Type3 => {}
        Type4 => {
            let half = p / 2;
            let range = 0..=((pi - 4) / 2) as u32;
            for al in range.clone() {
                let a_ = i64::from(al);
                let k = al as usize + 1;
                raw.push(Raw {
                    alpha: Some((al, range.clone())),
                    ..fixed(
                        RowKind::Type4Balanced,
                        x.clone() * (a_ + 1) + y.clone() * a_ + z.clone(),
                        (x.clone() + y.clone()) * (a_ + 1),
                        vec![Structure::Balanced],
                        choose(half, k) * choose(half, k),
                    )
                });
            }
            raw.push(fixed(
                RowKind::Type4Alternate,
                y.clone() * (pi / 2 - 1) + z.clone(),
                x.clone() * (pi / 2),
                vec![Structure::Alternate],
                2,
            ));
        }
        Type5 | Type6 => {
            if p.is_multiple_of(3) {
                let q = pi / 3;
                let a = x.clone() * q + y.clone() * (q - 1) + z.clone();
                let b = if spec.family == Type5 {
                    x.clone() * (q - 1) + y.clone() * (q + 1)
                } else {
                    x.clone() * (q + 1) + y.clone() * (q - 1)
                };
                let side = Some(SideCondition::Congruence {
                    residue: 0,
                    modulus: 3,
                });
                let omega: WeightExpr = spec
                    .family
                    .word(p)?
                    .into_iter()
                    .map(WeightExpr::symbol)
                    .sum();
                let (ca, cb) = (omega.clone() - b.clone(), omega - a.clone());
                raw.push(Raw {
                    side,
                    ..fixed(
                        RowKind::ThreePattern,
                        a,
                        b,
                        vec![Structure::Pattern("110".parse()?)],
                        3,
                    )
                });
                raw.push(Raw {
                    side,
                    deviation: Some(COMPLEMENT_NOTE),
                    ..fixed(
                        RowKind::ThreePatternComplement,
                        ca,
                        cb,
                        vec![Structure::Pattern("100".parse()?)],
                        3,
                    )
                });
            }
        }
        Type7 => {
            let half = p / 2;
            raw.push(fixed(
                RowKind::Type7Alternate,
                y.clone() * (pi / 2 - 1) + z.clone(),
                x.clone() * (pi / 2 - 1) + t.clone(),
                vec![Structure::Alternate],
                2,
            ));
            let range = 0..=(pi / 2 - 2) as u32;
            for al in range.clone() {
                let a_ = i64::from(al);
                raw.push(Raw {
                    alpha: Some((al, range.clone())),
                    deviation: Some(TYPE7_ALPHA_NOTE),
                    ..fixed(
                        RowKind::Type7Periodic,
                        (x.clone() + y.clone()) * a_ + t.clone() + z.clone(),
                        (x.clone() + y.clone()) * (a_ + 1),
                        vec![Structure::Periodic(half)],
                        choose(half, al as usize + 1),
                    )
                });
            }
        }
        Type8 => {
            let half = p / 2;
            let quarter = p / 4;
            let qi = pi / 4;
            raw.push(fixed(
                RowKind::Type8Alternate,
                y.clone() * (pi / 2 - 2) + z.clone() + t.clone(),
                x.clone() * (pi / 2),
                vec![Structure::Alternate],
                2,
            ));
            let range = 0..=(qi - 2) as u32;
            for al in range.clone() {
                let a_ = i64::from(al);
                let k = al as usize + 1;
                raw.push(Raw {
                    alpha: Some((al, range.clone())),
                    deviation: Some(TYPE8_ALPHA_NOTE),
                    ..fixed(
                        RowKind::Type8Periodic,
                        x.clone() * (2 * a_ + 2) + y.clone() * (2 * a_) + z.clone() + t.clone(),
                        (x.clone() + y.clone()) * (2 * a_ + 2),
                        vec![Structure::Periodic(half), Structure::Balanced],
                        choose(quarter, k) * choose(quarter, k),
                    )
                });
            }
            raw.push(fixed(
                RowKind::Type8Antiperiodic,
                x.clone() * qi + y.clone() * (qi - 1) + z.clone(),
                x.clone() * qi + y.clone() * (qi - 1) + t.clone(),
                vec![Structure::Antiperiodic(half)],
                1 << half,
            ));
            if spec.special_t {
                let side = Some(SideCondition::SpecialT);
                let psi_count = 1u64 << (quarter + 1);
                raw.push(Raw {
                    side,
                    ..fixed(
                        RowKind::Type8PsiDense,
                        x.clone() * (pi / 2) + y.clone() * (qi - 1) + z.clone(),
                        x.clone() * (3 * qi),
                        vec![Structure::Psi],
                        psi_count,
                    )
                });
                raw.push(Raw {
                    side,
                    ..fixed(
                        RowKind::Type8PsiSparse,
                        y.clone() * (qi - 1) + z.clone(),
                        x.clone() * qi,
                        vec![Structure::PsiComplement],
                        psi_count,
                    )
                });
            }
        }
    }

    raw.into_iter()
        .map(|r| {
            let (alpha, alpha_range) = match r.alpha {
                Some((al, range)) => (Some(al), Some(range)),
                None => (None, None),
            };
            Ok(PredictedRow {
                kind: r.kind,
                alpha,
                alpha_range,
                a: spec.instantiate(&r.a)?,
                b: spec.instantiate(&r.b)?,
                side_condition: r.side,
                structure: r.structure,
                realizing_count: r.count,
                deviation: r.deviation,
            })
        })
        .collect()
}

/// `(a, b)` with the number of colorings realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub a: WeightExpr,
    pub b: WeightExpr,
    pub count: u64,
}

/// Merges rows by their `(a, b)` pair, summing realizing counts.
pub fn predicted_pairs(rows: &[PredictedRow]) -> Vec<PairCount> {
    let mut map: BTreeMap<(WeightExpr, WeightExpr), u64> = BTreeMap::new();
    for row in rows {
        *map.entry((row.a.clone(), row.b.clone())).or_default() += row.realizing_count;
    }
    to_pair_counts(map)
}

fn to_pair_counts(map: BTreeMap<(WeightExpr, WeightExpr), u64>) -> Vec<PairCount> {
    map.into_iter()
        .map(|((a, b), count)| PairCount { a, b, count })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoundLabelling {
    pub coloring: Coloring,
    pub a: WeightExpr,
    pub b: WeightExpr,
    /// Predicted rows sharing this pair.
    pub rows: Vec<RowKind>,
    /// Whether the coloring has the structure of at least one of those rows.
    pub structure_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub a: WeightExpr,
    pub b: WeightExpr,
    pub found: u64,
    pub predicted: u64,
}

/// Outcome of comparing enumeration with [`predicted_rows`].
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub spec: CycleSpec,
    pub weights: VertexWeighting,
    pub found: Vec<PairCount>,
    pub predicted: Vec<PairCount>,
    /// Same pairs with the same realizing counts.
    pub matches: bool,
    pub labellings: Vec<FoundLabelling>,
    pub discrepancies: Vec<Discrepancy>,
    /// Published-table deviations carried by the predicted rows.
    pub deviations: Vec<String>,
}

impl CrossCheckReport {
    pub fn structure_ok(&self) -> bool {
        self.labellings.iter().all(|l| l.structure_ok)
    }

    pub fn passed(&self) -> bool {
        self.matches && self.structure_ok()
    }
}

/// Enumerates all colorings of the family cycle and compares with the prediction.
pub fn cross_check(spec: &CycleSpec) -> Result<CrossCheckReport> {
    cross_check_bounded(spec, DEFAULT_ENUMERATION_BOUND)
}

pub fn cross_check_bounded(spec: &CycleSpec, bound: usize) -> Result<CrossCheckReport> {
    let cycle = build_cycle(spec)?;
    let rows = predicted_rows(spec)?;
    let instance = rotation_instance(&cycle);
    let enumerated = enumerate_labellings_bounded(&instance, bound)?;

    let mut rows_by_pair: BTreeMap<(WeightExpr, WeightExpr), Vec<&PredictedRow>> = BTreeMap::new();
    for row in &rows {
        rows_by_pair
            .entry((row.a.clone(), row.b.clone()))
            .or_default()
            .push(row);
    }

    let mut found_map: BTreeMap<(WeightExpr, WeightExpr), u64> = BTreeMap::new();
    let mut labellings = Vec::new();
    for (coloring, verdict) in enumerated {
        let Some((a, b)) = verdict.pair() else {
            continue;
        };
        let key = (a.clone(), b.clone());
        *found_map.entry(key.clone()).or_default() += 1;
        let matching = rows_by_pair
            .get(&key)
            .map(Vec::as_slice)
            .unwrap_or_default();
        let structure_ok = matching
            .iter()
            .any(|row| row.structure.iter().all(|s| s.holds(&coloring)));
        labellings.push(FoundLabelling {
            coloring,
            a: a.clone(),
            b: b.clone(),
            rows: matching.iter().map(|r| r.kind).collect(),
            structure_ok,
        });
    }

    let found = to_pair_counts(found_map);
    let predicted = predicted_pairs(&rows);
    let mut discrepancies = Vec::new();
    let keys: BTreeSet<_> = found
        .iter()
        .chain(predicted.iter())
        .map(|pc| (pc.a.clone(), pc.b.clone()))
        .collect();
    let lookup = |list: &[PairCount], a: &WeightExpr, b: &WeightExpr| {
        list.iter()
            .find(|pc| &pc.a == a && &pc.b == b)
            .map_or(0, |pc| pc.count)
    };
    for (a, b) in keys {
        let f = lookup(&found, &a, &b);
        let pr = lookup(&predicted, &a, &b);
        if f != pr {
            discrepancies.push(Discrepancy {
                a,
                b,
                found: f,
                predicted: pr,
            });
        }
    }
    let deviations: BTreeSet<String> = rows
        .iter()
        .filter_map(|r| r.deviation.map(str::to_owned))
        .collect();

    Ok(CrossCheckReport {
        spec: *spec,
        weights: cycle.weights,
        matches: discrepancies.is_empty(),
        found,
        predicted,
        labellings,
        discrepancies,
        deviations: deviations.into_iter().collect(),
    })
}

/// Total weight of the cycle, in its spec's weight space.
pub fn total_weight(cycle: &WeightedCycle) -> WeightExpr {
    cycle.relations.reduce(&cycle.weights.total())
}

/// Colors are the same up to rotation.
pub fn same_up_to_rotation(a: &Coloring, b: &Coloring) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|k| &a.rotated(k) == b)
}
