//! Exact weight expressions over the basis `(z, x, y, t)` and the linear
//! relations used to put them into a canonical form.
//!
//! A [`WeightExpr`] is an affine form `c + cz·z + cx·x + cy·y + ct·t` with
//! rational coefficients. Symbolic cycles use only the four basis symbols;
//! concrete cycles (folded balls, hand-written examples) use only the
//! constant term. Equality of two expressions is equality of the coefficient
//! vectors, so constancy checks over symbolic weights decide "constant for
//! every assignment of the weights".

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used everywhere in the engine.
pub type Rational = Ratio<i64>;

/// Builds an integer-valued [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// The four weight symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    Z,
    X,
    Y,
    T,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Z, Symbol::X, Symbol::Y, Symbol::T];

    pub fn index(self) -> usize {
        match self {
            Symbol::Z => 0,
            Symbol::X => 1,
            Symbol::Y => 2,
            Symbol::T => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Z => "z",
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::T => "t",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact affine expression over `(z, x, y, t)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightExpr {
    constant: Rational,
    coeffs: [Rational; 4],
}

impl WeightExpr {
    pub fn zero() -> Self {
        WeightExpr {
            constant: Rational::zero(),
            coeffs: [Rational::zero(); 4],
        }
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut e = Self::zero();
        e.coeffs[s.index()] = Rational::one();
        e
    }

    pub fn constant(c: Rational) -> Self {
        WeightExpr {
            constant: c,
            coeffs: [Rational::zero(); 4],
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// `Σ coeff·symbol` from integer coefficients in `(z, x, y, t)` order.
    pub fn from_coeffs(z: i64, x: i64, y: i64, t: i64) -> Self {
        WeightExpr {
            constant: Rational::zero(),
            coeffs: [int(z), int(x), int(y), int(t)],
        }
    }

    pub fn coeff(&self, s: Symbol) -> Rational {
        self.coeffs[s.index()]
    }

    pub fn constant_term(&self) -> Rational {
        self.constant
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when no basis symbol appears.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The constant value, if the expression has no symbolic part.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then_some(self.constant)
    }

    /// The value as a non-negative integer, if it is one.
    pub fn as_count(&self) -> Option<u64> {
        let c = self.as_constant()?;
        if c.is_integer() && !c.is_negative() {
            u64::try_from(c.to_integer()).ok()
        } else {
            None
        }
    }

    /// Replaces `s` by `replacement`.
    pub fn substitute(&self, s: Symbol, replacement: &WeightExpr) -> WeightExpr {
        let c = self.coeff(s);
        if c.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs[s.index()] = Rational::zero();
        out + replacement.clone() * c
    }

    /// Evaluates the expression at the given `(z, x, y, t)` values.
    pub fn evaluate(&self, values: &[Rational; 4]) -> Rational {
        self.coeffs
            .iter()
            .zip(values)
            .fold(self.constant, |acc, (c, v)| acc + c * v)
    }
}

impl Default for WeightExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Symbol> for WeightExpr {
    fn from(s: Symbol) -> Self {
        WeightExpr::symbol(s)
    }
}

impl Add for WeightExpr {
    type Output = WeightExpr;
    fn add(mut self, rhs: WeightExpr) -> WeightExpr {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a WeightExpr> for WeightExpr {
    fn add_assign(&mut self, rhs: &'a WeightExpr) {
        self.constant += rhs.constant;
        for (l, r) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *l += r;
        }
    }
}

impl AddAssign for WeightExpr {
    fn add_assign(&mut self, rhs: WeightExpr) {
        *self += &rhs;
    }
}

impl<'a> SubAssign<&'a WeightExpr> for WeightExpr {
    fn sub_assign(&mut self, rhs: &'a WeightExpr) {
        self.constant -= rhs.constant;
        for (l, r) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *l -= r;
        }
    }
}

impl Sub for WeightExpr {
    type Output = WeightExpr;
    fn sub(mut self, rhs: WeightExpr) -> WeightExpr {
        self -= &rhs;
        self
    }
}

impl Neg for WeightExpr {
    type Output = WeightExpr;
    fn neg(self) -> WeightExpr {
        WeightExpr::zero() - self
    }
}

impl Mul<Rational> for WeightExpr {
    type Output = WeightExpr;
    fn mul(mut self, k: Rational) -> WeightExpr {
        self.constant *= k;
        for c in self.coeffs.iter_mut() {
            *c *= k;
        }
        self
    }
}

impl Mul<i64> for WeightExpr {
    type Output = WeightExpr;
    fn mul(self, k: i64) -> WeightExpr {
        self * int(k)
    }
}

impl std::iter::Sum for WeightExpr {
    fn sum<I: Iterator<Item = WeightExpr>>(iter: I) -> Self {
        iter.fold(WeightExpr::zero(), |acc, e| acc + e)
    }
}

impl<'a> std::iter::Sum<&'a WeightExpr> for WeightExpr {
    fn sum<I: Iterator<Item = &'a WeightExpr>>(iter: I) -> Self {
        let mut acc = WeightExpr::zero();
        for e in iter {
            acc += e;
        }
        acc
    }
}

impl fmt::Display for WeightExpr {
    /// Renders as e.g. `z + 2x - y + 3/2`; the zero expression renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let terms = Symbol::ALL
            .iter()
            .map(|&s| (self.coeff(s), Some(s)))
            .chain(std::iter::once((self.constant, None)));
        for (c, sym) in terms {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match sym {
                Some(s) if mag.is_one() => write!(f, "{s}")?,
                Some(s) if mag.is_integer() => write!(f, "{mag}{s}")?,
                Some(s) => write!(f, "({mag}){s}")?,
                None => write!(f, "{mag}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeightExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightExpr({self})")
    }
}

impl Serialize for WeightExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `symbol = replacement`, where `replacement` no longer mentions `symbol`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Relation {
    eliminated: Symbol,
    replacement: WeightExpr,
}

/// Linear relations between weight symbols plus declared distinctness of symbols.
///
/// Relations are kept fully reduced, so [`RelationSet::reduce`] is a single
/// substitution pass and produces a canonical form. Elimination order is
/// `t`, then `y`, then `x`, then `z`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    relations: Vec<Relation>,
    inequations: Vec<(Symbol, Symbol)>,
}

const ELIMINATION_ORDER: [Symbol; 4] = [Symbol::T, Symbol::Y, Symbol::X, Symbol::Z];

impl RelationSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the equation `expr = 0`.
    pub fn add_equation(&mut self, expr: &WeightExpr) -> Result<()> {
        let reduced = self.reduce(expr);
        let Some(&pivot) = ELIMINATION_ORDER
            .iter()
            .find(|&&s| !reduced.coeff(s).is_zero())
        else {
            if reduced.is_zero() {
                return Ok(());
            }
            return Err(Error::InconsistentRelations(format!(
                "equation reduces to {reduced} = 0"
            )));
        };
        let c = reduced.coeff(pivot);
        // pivot = -(rest)/c
        let mut rest = reduced;
        rest.coeffs[pivot.index()] = Rational::zero();
        let replacement = rest * (-c.recip());
        for rel in &mut self.relations {
            rel.replacement = rel.replacement.substitute(pivot, &replacement);
        }
        self.relations.push(Relation {
            eliminated: pivot,
            replacement,
        });
        self.check_inequations()
    }

    /// Adds the equation `lhs = rhs`.
    pub fn add_relation(&mut self, lhs: &WeightExpr, rhs: &WeightExpr) -> Result<()> {
        self.add_equation(&(lhs.clone() - rhs.clone()))
    }

    /// Declares `a ≠ b`.
    pub fn add_inequation(&mut self, a: Symbol, b: Symbol) -> Result<()> {
        self.inequations.push((a, b));
        self.check_inequations()
    }

    pub fn inequations(&self) -> &[(Symbol, Symbol)] {
        &self.inequations
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// The symbols eliminated so far, in elimination order of insertion.
    pub fn eliminated(&self) -> impl Iterator<Item = (Symbol, &WeightExpr)> {
        self.relations
            .iter()
            .map(|r| (r.eliminated, &r.replacement))
    }

    /// Canonical form of `expr` modulo the relations.
    pub fn reduce(&self, expr: &WeightExpr) -> WeightExpr {
        let mut out = expr.clone();
        for rel in &self.relations {
            out = out.substitute(rel.eliminated, &rel.replacement);
        }
        out
    }

    /// True when the relations do not force `a = b`.
    pub fn distinct_possible(&self, a: Symbol, b: Symbol) -> bool {
        self.reduce(&WeightExpr::symbol(a)) != self.reduce(&WeightExpr::symbol(b))
    }

    fn check_inequations(&self) -> Result<()> {
        for &(a, b) in &self.inequations {
            if !self.distinct_possible(a, b) {
                return Err(Error::InconsistentRelations(format!(
                    "relations force {a} = {b}, contradicting {a} ≠ {b}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> WeightExpr {
        Symbol::X.into()
    }
    fn y() -> WeightExpr {
        Symbol::Y.into()
    }
    fn t() -> WeightExpr {
        Symbol::T.into()
    }
    fn z() -> WeightExpr {
        Symbol::Z.into()
    }

    #[test]
    fn display() {
        assert_eq!(WeightExpr::zero().to_string(), "0");
        assert_eq!((z() + x() * 2 - y()).to_string(), "z + 2x - y");
        assert_eq!((-x()).to_string(), "-x");
        assert_eq!(WeightExpr::constant(Rational::new(3, 2)).to_string(), "3/2");
        assert_eq!(
            (x() * Rational::new(1, 2) + WeightExpr::integer(7)).to_string(),
            "(1/2)x + 7"
        );
    }

    #[test]
    fn special_t_reduction_at_p8() {
        // 4t = 8x + (4 - 8)y  =>  t = 2x - y
        let mut rel = RelationSet::new();
        rel.add_relation(&(t() * 4), &(x() * 8 + y() * -4)).unwrap();
        assert_eq!(rel.reduce(&t()), x() * 2 - y());
        assert_eq!(rel.reduce(&(z() + t() + y())), z() + x() * 2);
        rel.add_inequation(Symbol::X, Symbol::Y).unwrap();
        rel.add_inequation(Symbol::Y, Symbol::T).unwrap();
    }

    #[test]
    fn elimination_prefers_t_then_y() {
        let mut rel = RelationSet::new();
        rel.add_relation(&(y() + t()), &x()).unwrap();
        assert_eq!(rel.eliminated().next().unwrap().0, Symbol::T);
        rel.add_relation(&y(), &(z() * 2)).unwrap();
        // t = x - y was rewritten to t = x - 2z
        assert_eq!(rel.reduce(&t()), x() - z() * 2);
        assert_eq!(rel.reduce(&y()), z() * 2);
    }

    #[test]
    fn inconsistent_relations_rejected() {
        let mut rel = RelationSet::new();
        rel.add_relation(&t(), &x()).unwrap();
        let err = rel
            .add_equation(&(t() - x() + WeightExpr::integer(1)))
            .unwrap_err();
        assert!(matches!(err, Error::InconsistentRelations(_)));
        // redundant equation is fine
        rel.add_relation(&(t() * 2), &(x() * 2)).unwrap();
    }

    #[test]
    fn inequation_contradiction() {
        let mut rel = RelationSet::new();
        rel.add_inequation(Symbol::X, Symbol::T).unwrap();
        assert!(rel.add_relation(&t(), &x()).is_err());
    }

    #[test]
    fn evaluate_and_count() {
        let e = z() + x() * 3;
        let v = [int(1), int(2), int(0), int(0)];
        assert_eq!(e.evaluate(&v), int(7));
        assert_eq!(WeightExpr::integer(5).as_count(), Some(5));
        assert_eq!(WeightExpr::integer(-5).as_count(), None);
        assert_eq!(x().as_count(), None);
    }
}
