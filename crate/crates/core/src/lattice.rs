//! Manhattan-metric geometry of `Z²`: ball projections along a diagonal
//! translation, folding onto cycles, diagonal colorings and a direct
//! `(r, a, b)`-code verifier for periodic colorings.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::WeightedCycle;
use crate::error::{Error, Result};
use crate::label::{Color, Coloring, VertexWeighting};

/// `|B_r| = 2r² + 2r + 1`.
pub fn manhattan_ball_size(r: u32) -> u64 {
    let r = u64::from(r);
    2 * r * r + 2 * r + 1
}

/// Offsets `(d1, d2)` with `|d1| + |d2| ≤ r`, in lexicographic order.
pub fn ball_offsets(r: u32) -> Vec<(i64, i64)> {
    let r = i64::from(r);
    let mut out = Vec::with_capacity(manhattan_ball_size(r as u32) as usize);
    for d1 in -r..=r {
        let rest = r - d1.abs();
        for d2 in -rest..=rest {
            out.push((d1, d2));
        }
    }
    out
}

/// Number of translates of `B_r(0)` by `m·(s, 1)` covering each point `(i, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionProfile {
    pub r: u32,
    pub shift: u32,
    /// Position of `values[0]`; the support lies in `[min, -min]`.
    pub min: i64,
    pub values: Vec<u64>,
}

impl ProjectionProfile {
    pub fn get(&self, i: i64) -> u64 {
        let k = i - self.min;
        if k < 0 {
            return 0;
        }
        self.values.get(k as usize).copied().unwrap_or(0)
    }

    pub fn max(&self) -> i64 {
        self.min + self.values.len() as i64 - 1
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    /// `(i, h(i))` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &h)| (self.min + k as i64, h))
    }
}

/// `h(i) = #{m ∈ [-r, r] : |i - m·s| + |m| ≤ r}`, counted directly.
pub fn project_ball(r: u32, shift: u32) -> ProjectionProfile {
    let ri = i64::from(r);
    let s = i64::from(shift);
    let min = -ri * (s + 1);
    let mut values = vec![0u64; (2 * ri * (s + 1) + 1) as usize];
    for m in -ri..=ri {
        let rest = ri - m.abs();
        for i in (m * s - rest)..=(m * s + rest) {
            values[(i - min) as usize] += 1;
        }
    }
    ProjectionProfile {
        r,
        shift,
        min,
        values,
    }
}

/// The shift-1 profile from its parity formula: on `|i| ≤ r`, `h(i) = r + 1`
/// when `i ≡ r (mod 2)` and `r` otherwise; zero beyond.
pub fn closed_form_profile(r: u32) -> ProjectionProfile {
    let ri = i64::from(r);
    let min = -2 * ri;
    let values = (min..=-min)
        .map(|i| {
            if i.abs() > ri {
                0
            } else if (i - ri).rem_euclid(2) == 0 {
                u64::from(r) + 1
            } else {
                u64::from(r)
            }
        })
        .collect();
    ProjectionProfile {
        r,
        shift: 1,
        min,
        values,
    }
}

/// Wraps the profile onto `C_p`: `w(i) = Σ_k h(i + kp)`.
pub fn fold_profile(profile: &ProjectionProfile, p: usize) -> Result<WeightedCycle> {
    if p == 0 {
        return Err(Error::Constraint("fold requires p ≥ 1".into()));
    }
    let mut w = vec![0i64; p];
    for (i, h) in profile.iter() {
        w[i.rem_euclid(p as i64) as usize] += h as i64;
    }
    Ok(WeightedCycle::from_weights(VertexWeighting::from_integers(
        &w,
    )?))
}

/// One period of a line coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinePattern {
    pub p: usize,
    pub colors: Coloring,
}

impl LinePattern {
    pub fn new(colors: Coloring) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::Constraint("line pattern needs p ≥ 1".into()));
        }
        Ok(LinePattern {
            p: colors.len(),
            colors,
        })
    }

    fn at(&self, i: i64) -> Color {
        self.colors.get(i.rem_euclid(self.p as i64) as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Every cell takes `pattern((x1 - x2) mod p)`.
    Parallel,
    /// Even cells as in `Parallel`, odd cells take `pattern((x1 + x2) mod p)`.
    Crossed,
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parallel" => Ok(Orientation::Parallel),
            "crossed" => Ok(Orientation::Crossed),
            other => Err(Error::Parse(format!(
                "unknown orientation {other:?} (expected parallel or crossed)"
            ))),
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orientation::Parallel => "parallel",
            Orientation::Crossed => "crossed",
        })
    }
}

/// A coloring of `Z²` built from a line pattern, with two period vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicColoring {
    pub pattern: LinePattern,
    pub orientation: Orientation,
    pub period_vectors: [(i64, i64); 2],
}

impl PeriodicColoring {
    /// Same coloring with caller-chosen period vectors, checked for
    /// non-degeneracy and invariance.
    pub fn with_periods(mut self, u: (i64, i64), v: (i64, i64)) -> Result<Self> {
        self.period_vectors = [u, v];
        FundamentalDomain::new(u, v)?;
        self.check_invariance()?;
        Ok(self)
    }

    pub fn color(&self, x1: i64, x2: i64) -> Color {
        match self.orientation {
            Orientation::Parallel => self.pattern.at(x1 - x2),
            Orientation::Crossed => {
                if (x1 + x2).rem_euclid(2) == 0 {
                    self.pattern.at(x1 - x2)
                } else {
                    self.pattern.at(x1 + x2)
                }
            }
        }
    }

    pub fn is_black(&self, x1: i64, x2: i64) -> bool {
        self.color(x1, x2).is_black()
    }

    /// Checks `color(c + u) = color(c)` and `color(c + v) = color(c)` on a
    /// fundamental domain of the lattice spanned by the two vectors.
    pub fn check_invariance(&self) -> Result<()> {
        let [u, v] = self.period_vectors;
        let dom = FundamentalDomain::new(u, v)?;
        for cell in dom.cells() {
            for vec in [u, v] {
                if self.color(cell.0, cell.1) != self.color(cell.0 + vec.0, cell.1 + vec.1) {
                    return Err(Error::NotPeriodic { vector: vec, cell });
                }
            }
        }
        Ok(())
    }
}

/// Diagonal coloring with its natural period vectors: `(p, 0), (1, 1)` for
/// `Parallel` and `(2p, 0), (0, 2p)` for `Crossed`.
pub fn build_diagonal_coloring(pattern: LinePattern, orientation: Orientation) -> PeriodicColoring {
    let p = pattern.p as i64;
    let period_vectors = match orientation {
        Orientation::Parallel => [(p, 0), (1, 1)],
        Orientation::Crossed => [(2 * p, 0), (0, 2 * p)],
    };
    PeriodicColoring {
        pattern,
        orientation,
        period_vectors,
    }
}

/// Cells `(i, j)` with `0 ≤ i < width` and `0 ≤ j < height` represent every
/// coset of the lattice spanned by `u` and `v` exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub width: i64,
    pub height: i64,
}

impl FundamentalDomain {
    pub fn new(u: (i64, i64), v: (i64, i64)) -> Result<Self> {
        let det = u.0 * v.1 - u.1 * v.0;
        if det == 0 {
            return Err(Error::DegeneratePeriods { u, v });
        }
        // The lattice contains (|det| / c, 0) and a vector with second coordinate
        // c = gcd(u2, v2), so it has a basis in lower-triangular form.
        let height = u.1.gcd(&v.1);
        Ok(FundamentalDomain {
            width: det.abs() / height,
            height,
        })
    }

    pub fn size(&self) -> u64 {
        (self.width * self.height) as u64
    }

    /// Cells in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.width).flat_map(move |i| (0..self.height).map(move |j| (i, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeStatus {
    Verified,
    Violated,
}

/// First cell whose ball count differs from the count of its color class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cell: (i64, i64),
    pub color: Color,
    pub expected: u64,
    pub observed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub status: CodeStatus,
    /// Black cells per ball centered on a black cell; `None` when there are no black cells.
    pub a: Option<u64>,
    /// Black cells per ball centered on a white cell; `None` when there are no white cells.
    pub b: Option<u64>,
    pub violation: Option<Violation>,
}

impl CodeReport {
    pub fn is_verified(&self) -> bool {
        self.status == CodeStatus::Verified
    }
}

/// Checks that the black cells form an `(r, a, b)`-code by counting black
/// cells in `B_r(c)` for each cell `c` of one fundamental domain. The
/// reference count of each class is taken at its lexicographically first cell.
pub fn verify_code(coloring: &PeriodicColoring, r: u32) -> Result<CodeReport> {
    let [u, v] = coloring.period_vectors;
    let dom = FundamentalDomain::new(u, v)?;
    coloring.check_invariance()?;
    let offsets = ball_offsets(r);
    let cells: Vec<(i64, i64)> = dom.cells().collect();
    let counts: Vec<(Color, u64)> = cells
        .par_iter()
        .map(|&(x1, x2)| {
            let n = offsets
                .iter()
                .filter(|&&(d1, d2)| coloring.is_black(x1 + d1, x2 + d2))
                .count() as u64;
            (coloring.color(x1, x2), n)
        })
        .collect();

    let reference = |color: Color| counts.iter().find(|(c, _)| *c == color).map(|&(_, n)| n);
    let a = reference(Color::Black);
    let b = reference(Color::White);
    let violation = cells.iter().zip(&counts).find_map(|(&cell, &(color, n))| {
        let expected = if color.is_black() { a } else { b }.expect("class is non-empty");
        (n != expected).then_some(Violation {
            cell,
            color,
            expected,
            observed: n,
        })
    });
    Ok(CodeReport {
        status: if violation.is_none() {
            CodeStatus::Verified
        } else {
            CodeStatus::Violated
        },
        a,
        b,
        violation,
    })
}
