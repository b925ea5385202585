//! Constant 2-labellings of a weighted vertex set under an explicit list of
//! automorphisms.
//!
//! For a coloring `φ`, a base vertex `v` and automorphisms `A`, the set `A`
//! splits into `A_•` (those `ξ` with `φ(ξ(v))` black) and `A_∘`. The coloring
//! is a constant 2-labelling when the weighted black sum
//! `Σ_{u : φ(ξ(u)) = •} w(u)` takes a single value `a` over `A_•` and a single
//! value `b` over `A_∘`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weight::{RelationSet, WeightExpr};

/// Default upper bound on the number of vertices accepted by [`enumerate_labellings`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn is_black(self) -> bool {
        self == Color::Black
    }

    pub fn bit(self) -> char {
        match self {
            Color::Black => '1',
            Color::White => '0',
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Color::Black => '•',
            Color::White => '∘',
        }
    }
}

/// A black/white coloring of vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn monochromatic(n: usize, color: Color) -> Self {
        Coloring(vec![color; n])
    }

    /// Colors vertices from the given black set.
    pub fn from_blacks(n: usize, blacks: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Self::monochromatic(n, Color::White);
        for i in blacks {
            c.0[i] = Color::Black;
        }
        c
    }

    /// The `index`-th coloring of the binary counter over `n` digits, vertex 0 most significant.
    pub fn from_index(n: usize, index: u64) -> Self {
        Coloring(
            (0..n)
                .map(|i| {
                    if (index >> (n - 1 - i)) & 1 == 1 {
                        Color::Black
                    } else {
                        Color::White
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Color {
        self.0[i]
    }

    pub fn is_black(&self, i: usize) -> bool {
        self.0[i].is_black()
    }

    pub fn black_count(&self) -> usize {
        self.0.iter().filter(|c| c.is_black()).count()
    }

    /// `Some(color)` when every vertex has that color.
    pub fn monochrome(&self) -> Option<Color> {
        let first = *self.0.first()?;
        self.0.iter().all(|&c| c == first).then_some(first)
    }

    /// The coloring `i ↦ φ(i + k mod n)`.
    pub fn rotated(&self, k: usize) -> Coloring {
        let n = self.len();
        Coloring((0..n).map(|i| self.0[(i + k) % n]).collect())
    }

    pub fn glyphs(&self) -> String {
        self.0.iter().map(|c| c.glyph()).collect()
    }
}

impl fmt::Display for Coloring {
    /// Bitstring form, `1` = black.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.bit())?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = Error;

    /// Accepts `1`/`0`, `•`/`∘`, `b`/`w` and `B`/`W`.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '1' | '•' | 'b' | 'B' => Ok(Color::Black),
                '0' | '∘' | 'w' | 'W' => Ok(Color::White),
                other => Err(Error::Parse(format!("unexpected color symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Coloring)
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Complementary coloring: black and white swapped pointwise.
pub fn complement_coloring(coloring: &Coloring) -> Coloring {
    Coloring(coloring.0.iter().map(|c| c.flip()).collect())
}

/// A permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism(Vec<usize>);

impl Automorphism {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {i} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
        }
        Ok(Automorphism(perm))
    }

    pub fn identity(n: usize) -> Self {
        Automorphism((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism(other.0.iter().map(|&i| self.0[i]).collect())
    }
}

/// One weight per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexWeighting(Vec<WeightExpr>);

impl VertexWeighting {
    pub fn new(weights: Vec<WeightExpr>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInstance(
                "weighting must have at least one vertex".into(),
            ));
        }
        Ok(VertexWeighting(weights))
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| WeightExpr::integer(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[WeightExpr] {
        &self.0
    }

    pub fn total(&self) -> WeightExpr {
        self.0.iter().sum()
    }

    fn reduced(&self, relations: &RelationSet) -> VertexWeighting {
        VertexWeighting(self.0.iter().map(|w| relations.reduce(w)).collect())
    }
}

impl Serialize for VertexWeighting {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Weighted sum of the vertices `u` with `φ(ξ(u))` black, reduced modulo `relations`.
pub fn weighted_black_sum(
    coloring: &Coloring,
    xi: &Automorphism,
    weighting: &VertexWeighting,
    relations: &RelationSet,
) -> Result<WeightExpr> {
    let n = weighting.len();
    for len in [coloring.len(), xi.len()] {
        if len != n {
            return Err(Error::Dimension {
                expected: n,
                actual: len,
            });
        }
    }
    Ok(relations.reduce(&black_sum(coloring, xi, weighting.weights())))
}

fn black_sum(coloring: &Coloring, xi: &Automorphism, weights: &[WeightExpr]) -> WeightExpr {
    let mut acc = WeightExpr::zero();
    for (u, w) in weights.iter().enumerate() {
        if coloring.is_black(xi.apply(u)) {
            acc += w;
        }
    }
    acc
}

/// The triple (weights, automorphisms, base vertex) plus the relations used to
/// compare sums.
#[derive(Debug, Clone)]
pub struct LabellingInstance {
    weighting: VertexWeighting,
    reduced: VertexWeighting,
    automorphisms: Vec<Automorphism>,
    base_vertex: usize,
    relations: RelationSet,
}

impl LabellingInstance {
    pub fn new(
        weighting: VertexWeighting,
        automorphisms: Vec<Automorphism>,
        base_vertex: usize,
        relations: RelationSet,
    ) -> Result<Self> {
        let n = weighting.len();
        if automorphisms.is_empty() {
            return Err(Error::InvalidInstance("automorphism list is empty".into()));
        }
        if base_vertex >= n {
            return Err(Error::InvalidInstance(format!(
                "base vertex {base_vertex} out of range for {n} vertices"
            )));
        }
        if let Some(bad) = automorphisms.iter().find(|a| a.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                actual: bad.len(),
            });
        }
        // Reduction is linear, so reducing the weights once makes every sum canonical.
        let reduced = weighting.reduced(&relations);
        Ok(LabellingInstance {
            weighting,
            reduced,
            automorphisms,
            base_vertex,
            relations,
        })
    }

    pub fn len(&self) -> usize {
        self.weighting.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weighting(&self) -> &VertexWeighting {
        &self.weighting
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    pub fn base_vertex(&self) -> usize {
        self.base_vertex
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    /// Total weight `ω`, reduced.
    pub fn total_weight(&self) -> WeightExpr {
        self.reduced.total()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    TrivialBlack,
    TrivialWhite,
    Constant,
    NotConstant,
}

impl VerdictKind {
    /// Trivial or constant.
    pub fn is_labelling(self) -> bool {
        self != VerdictKind::NotConstant
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabellingVerdict {
    pub kind: VerdictKind,
    pub a: Option<WeightExpr>,
    pub b: Option<WeightExpr>,
    /// Indices into the automorphism list whose sums differ within one class.
    pub witness: Option<(usize, usize)>,
}

impl LabellingVerdict {
    /// Both constants, for a non-trivial labelling where both classes are non-empty.
    pub fn pair(&self) -> Option<(&WeightExpr, &WeightExpr)> {
        match (self.kind, &self.a, &self.b) {
            (VerdictKind::Constant, Some(a), Some(b)) => Some((a, b)),
            _ => None,
        }
    }
}

/// Decides whether `coloring` is a constant 2-labelling of `instance`.
pub fn classify_labelling(
    instance: &LabellingInstance,
    coloring: &Coloring,
) -> Result<LabellingVerdict> {
    if coloring.len() != instance.len() {
        return Err(Error::Dimension {
            expected: instance.len(),
            actual: coloring.len(),
        });
    }
    Ok(classify_unchecked(instance, coloring))
}

fn classify_unchecked(instance: &LabellingInstance, coloring: &Coloring) -> LabellingVerdict {
    match coloring.monochrome() {
        Some(Color::Black) => {
            return LabellingVerdict {
                kind: VerdictKind::TrivialBlack,
                a: Some(instance.total_weight()),
                b: None,
                witness: None,
            }
        }
        Some(Color::White) => {
            return LabellingVerdict {
                kind: VerdictKind::TrivialWhite,
                a: None,
                b: Some(WeightExpr::zero()),
                witness: None,
            }
        }
        None => {}
    }

    let weights = instance.reduced.weights();
    // (first automorphism index, its sum) per class
    let mut black: Option<(usize, WeightExpr)> = None;
    let mut white: Option<(usize, WeightExpr)> = None;
    for (k, xi) in instance.automorphisms.iter().enumerate() {
        let class = if coloring.is_black(xi.apply(instance.base_vertex)) {
            &mut black
        } else {
            &mut white
        };
        let sum = black_sum(coloring, xi, weights);
        match class {
            None => *class = Some((k, sum)),
            Some((first, expected)) => {
                if *expected != sum {
                    return LabellingVerdict {
                        kind: VerdictKind::NotConstant,
                        a: None,
                        b: None,
                        witness: Some((*first, k)),
                    };
                }
            }
        }
    }
    LabellingVerdict {
        kind: VerdictKind::Constant,
        a: black.map(|(_, s)| s),
        b: white.map(|(_, s)| s),
        witness: None,
    }
}

/// Every constant 2-labelling (trivial ones included) of `instance`, in binary
/// counter order with vertex 0 as the most significant digit.
pub fn enumerate_labellings(
    instance: &LabellingInstance,
) -> Result<Vec<(Coloring, LabellingVerdict)>> {
    enumerate_labellings_bounded(instance, DEFAULT_ENUMERATION_BOUND)
}

/// [`enumerate_labellings`] with an explicit vertex bound.
pub fn enumerate_labellings_bounded(
    instance: &LabellingInstance,
    bound: usize,
) -> Result<Vec<(Coloring, LabellingVerdict)>> {
    let n = instance.len();
    if n > bound || n >= 64 {
        return Err(Error::OverBound { n, bound });
    }
    // rayon's indexed collect keeps counter order
    Ok((0..1u64 << n)
        .into_par_iter()
        .filter_map(|index| {
            let coloring = Coloring::from_index(n, index);
            let verdict = classify_unchecked(instance, &coloring);
            verdict.kind.is_labelling().then_some((coloring, verdict))
        })
        .collect())
}

/// Whether `K_n` with these weights admits a non-trivial constant 2-labelling
/// under its full automorphism group: all weights off the base vertex must coincide.
pub fn complete_graph_admits_nontrivial(
    weighting: &VertexWeighting,
    base_vertex: usize,
) -> Result<bool> {
    let n = weighting.len();
    if n < 2 {
        return Err(Error::InvalidInstance(format!("K_n needs n ≥ 2, got {n}")));
    }
    if base_vertex >= n {
        return Err(Error::InvalidInstance(format!(
            "base vertex {base_vertex} out of range for {n} vertices"
        )));
    }
    let mut rest = weighting
        .weights()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != base_vertex)
        .map(|(_, w)| w);
    let first = rest.next().expect("n ≥ 2");
    Ok(rest.all(|w| w == first))
}
