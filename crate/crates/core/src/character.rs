//! The ring of formal S¹-characters and polynomials over it.
//!
//! A [`Character`] is a Laurent polynomial in `u = e^{-iθ}`: the
//! multiplicity of weight `k` is stored at key `k`. A [`CharPoly`] is a
//! polynomial in a formal variable `t` whose coefficients are characters;
//! the coefficient of `t^p` is usually the character of `H^p`.
//!
//! Multiplicities are `i64` with checked arithmetic. The `checked_*`
//! methods report overflow as [`CharacterError::Overflow`]; the operator
//! impls (`+`, `-`, `*`) panic on overflow instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("integer overflow in character arithmetic")]
    Overflow,
    /// `P - R` does not vanish at `t = -1`, so `(1 + t)` cannot divide it.
    #[error("difference is not divisible by (1 + t); value at t = -1 is {residual}")]
    NotDivisible { residual: Character },
}

/// Element of `Z[u, u^-1]`, kept in canonical form (no zero entries).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    coeffs: BTreeMap<i64, i64>,
}

impl Character {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `mult · u^weight`.
    pub fn monomial(weight: i64, mult: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if mult != 0 {
            coeffs.insert(weight, mult);
        }
        Self { coeffs }
    }

    /// Character of a representation given by its multiset of weights.
    pub fn from_weights<I: IntoIterator<Item = i64>>(weights: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for w in weights {
            *coeffs.entry(w).or_insert(0i64) += 1;
        }
        Self { coeffs }
    }

    /// Build from `(weight, multiplicity)` pairs; repeated weights are summed.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(
        pairs: I,
    ) -> Result<Self, CharacterError> {
        let mut coeffs: BTreeMap<i64, i64> = BTreeMap::new();
        for (w, m) in pairs {
            let e = coeffs.entry(w).or_insert(0);
            *e = e.checked_add(m).ok_or(CharacterError::Overflow)?;
        }
        coeffs.retain(|_, m| *m != 0);
        Ok(Self { coeffs })
    }

    /// `u^lo + u^(lo+1) + ... + u^hi`; zero when `lo > hi`.
    pub fn weight_range(lo: i64, hi: i64) -> Self {
        if lo > hi {
            return Self::zero();
        }
        Self {
            coeffs: (lo..=hi).map(|k| (k, 1)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplicity of `weight` (zero if absent).
    pub fn mult(&self, weight: i64) -> i64 {
        self.coeffs.get(&weight).copied().unwrap_or(0)
    }

    /// Nonzero `(weight, multiplicity)` pairs in increasing weight order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&k, &m)| (k, m))
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Number of stored (nonzero) weights.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum of multiplicities, i.e. the value at `u = 1` (the dimension for
    /// an honest representation).
    pub fn dimension(&self) -> Result<i64, CharacterError> {
        self.coeffs
            .values()
            .try_fold(0i64, |acc, &m| acc.checked_add(m))
            .ok_or(CharacterError::Overflow)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CharacterError> {
        let mut coeffs = self.coeffs.clone();
        for (&k, &m) in &other.coeffs {
            let e = coeffs.entry(k).or_insert(0);
            *e = e.checked_add(m).ok_or(CharacterError::Overflow)?;
            if *e == 0 {
                coeffs.remove(&k);
            }
        }
        Ok(Self { coeffs })
    }

    pub fn checked_neg(&self) -> Result<Self, CharacterError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &m)| m.checked_neg().map(|m| (k, m)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or(CharacterError::Overflow)?;
        Ok(Self { coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CharacterError> {
        self.checked_add(&other.checked_neg()?)
    }

    /// Convolution of weight maps (tensor product of representations).
    pub fn checked_mul(&self, other: &Self) -> Result<Self, CharacterError> {
        let mut coeffs: BTreeMap<i64, i64> = BTreeMap::new();
        for (&ka, &ma) in &self.coeffs {
            for (&kb, &mb) in &other.coeffs {
                let k = ka.checked_add(kb).ok_or(CharacterError::Overflow)?;
                let m = ma.checked_mul(mb).ok_or(CharacterError::Overflow)?;
                let e = coeffs.entry(k).or_insert(0);
                *e = e.checked_add(m).ok_or(CharacterError::Overflow)?;
            }
        }
        coeffs.retain(|_, m| *m != 0);
        Ok(Self { coeffs })
    }

    pub fn checked_scale(&self, factor: i64) -> Result<Self, CharacterError> {
        self.checked_mul(&Self::monomial(0, factor))
    }

    /// Multiply by `u^shift`.
    pub fn checked_shift(&self, shift: i64) -> Result<Self, CharacterError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &m)| k.checked_add(shift).map(|k| (k, m)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or(CharacterError::Overflow)?;
        Ok(Self { coeffs })
    }

    /// Every multiplicity is `>= 0`.
    pub fn is_nonneg(&self) -> bool {
        self.coeffs.values().all(|&m| m >= 0)
    }

    /// Partial order: `self >= other` iff `self - other` is nonnegative.
    /// Overflow while forming the difference is resolved exactly in `i128`.
    pub fn ge(&self, other: &Self) -> bool {
        let keys = self.coeffs.keys().chain(other.coeffs.keys());
        keys.into_iter()
            .all(|&k| i128::from(self.mult(k)) >= i128::from(other.mult(k)))
    }

    /// Part with negative multiplicities, as a (negative) character.
    pub fn negative_part(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, &m)| m < 0)
                .map(|(&k, &m)| (k, m))
                .collect(),
        }
    }
}

impl fmt::Display for Character {
    /// Human-readable form, e.g. `2 + u^-1` is printed as `u^-1 + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, m)) in self.iter().enumerate() {
            let (sign, abs) = if m < 0 {
                ("-", m.unsigned_abs())
            } else {
                ("+", m as u64)
            };
            if i == 0 {
                if m < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (k, abs) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => f.write_str("u")?,
                (1, a) => write!(f, "{a}u")?,
                (k, 1) => write!(f, "u^{k}")?,
                (k, a) => write!(f, "{a}u^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        self.checked_add(rhs)
            .expect("character multiplicity overflow")
    }
}

impl Add for Character {
    type Output = Character;
    fn add(self, rhs: Character) -> Character {
        &self + &rhs
    }
}

impl Sub for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        self.checked_sub(rhs)
            .expect("character multiplicity overflow")
    }
}

impl Sub for Character {
    type Output = Character;
    fn sub(self, rhs: Character) -> Character {
        &self - &rhs
    }
}

impl Neg for &Character {
    type Output = Character;
    fn neg(self) -> Character {
        self.checked_neg().expect("character multiplicity overflow")
    }
}

impl Neg for Character {
    type Output = Character;
    fn neg(self) -> Character {
        -&self
    }
}

impl Mul for &Character {
    type Output = Character;
    fn mul(self, rhs: &Character) -> Character {
        self.checked_mul(rhs)
            .expect("character multiplicity overflow")
    }
}

impl Mul for Character {
    type Output = Character;
    fn mul(self, rhs: Character) -> Character {
        &self * &rhs
    }
}

impl std::iter::Sum for Character {
    fn sum<I: Iterator<Item = Character>>(iter: I) -> Self {
        iter.fold(Character::zero(), |acc, c| acc + c)
    }
}

// JSON form: {"-1": 1, "0": 2}, keys in increasing numeric order.
impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (k, m) in &self.coeffs {
            map.serialize_entry(&k.to_string(), m)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CharVisitor;

        impl<'de> Visitor<'de> for CharVisitor {
            type Value = Character;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from decimal weight strings to integer multiplicities")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Character, A::Error> {
                let mut pairs = Vec::new();
                while let Some((key, mult)) = access.next_entry::<String, i64>()? {
                    let weight = key
                        .trim()
                        .parse::<i64>()
                        .map_err(|_| de::Error::custom(format!("invalid weight key {key:?}")))?;
                    pairs.push((weight, mult));
                }
                Character::from_pairs(pairs).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_map(CharVisitor)
    }
}

/// Polynomial in `t` with [`Character`] coefficients; trailing zeros trimmed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CharPoly {
    coeffs: Vec<Character>,
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<Character>::deserialize(deserializer).map(CharPoly::new)
    }
}

impl CharPoly {
    pub fn new(coeffs: Vec<Character>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Character) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `1 + t`.
    pub fn one_plus_t() -> Self {
        Self::new(vec![Character::one(), Character::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Character::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Degree in `t`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^p` (zero past the degree).
    pub fn coeff(&self, p: usize) -> Character {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Character] {
        &self.coeffs
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CharacterError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|p| self.coeff(p).checked_add(&other.coeff(p)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn checked_neg(&self) -> Result<Self, CharacterError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(Character::checked_neg)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CharacterError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CharacterError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut coeffs = vec![Character::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].checked_add(&a.checked_mul(b)?)?;
            }
        }
        Ok(Self::new(coeffs))
    }

    /// Substitute `t = -1`: `c_0 - c_1 + c_2 - ...`.
    pub fn checked_eval_at_minus_one(&self) -> Result<Character, CharacterError> {
        self.coeffs
            .iter()
            .enumerate()
            .try_fold(Character::zero(), |acc, (p, c)| {
                if p % 2 == 0 {
                    acc.checked_add(c)
                } else {
                    acc.checked_sub(c)
                }
            })
    }

    pub fn eval_at_minus_one(&self) -> Character {
        self.checked_eval_at_minus_one()
            .expect("character multiplicity overflow")
    }

    /// Every coefficient is a nonnegative character.
    pub fn is_nonneg(&self) -> bool {
        self.coeffs.iter().all(Character::is_nonneg)
    }

    /// Coefficientwise partial order.
    pub fn ge(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|p| self.coeff(p).ge(&other.coeff(p)))
    }

    /// Coefficientwise negative parts (zero iff `is_nonneg`).
    pub fn negative_part(&self) -> Self {
        Self::new(self.coeffs.iter().map(Character::negative_part).collect())
    }
}

/// The unique `Q` with `p = r + (1 + t)·Q`.
///
/// Writing `d = p - r`, the coefficients follow from synthetic division by
/// `1 + t`: `q_m = d_m - q_{m-1}`. Such a `Q` exists iff `d(-1) = 0`.
/// `Q` is returned whatever the signs of its coefficients; test it with
/// [`CharPoly::is_nonneg`].
pub fn morse_quotient(p: &CharPoly, r: &CharPoly) -> Result<CharPoly, CharacterError> {
    let diff = p.checked_sub(r)?;
    let at_minus_one = diff.checked_eval_at_minus_one()?;
    if !at_minus_one.is_zero() {
        return Err(CharacterError::NotDivisible {
            residual: at_minus_one,
        });
    }
    let Some(deg) = diff.degree() else {
        return Ok(CharPoly::zero());
    };
    let mut q = Vec::with_capacity(deg);
    let mut prev = Character::zero();
    for m in 0..deg {
        let next = diff.coeff(m).checked_sub(&prev)?;
        q.push(next.clone());
        prev = next;
    }
    Ok(CharPoly::new(q))
}

impl Add for &CharPoly {
    type Output = CharPoly;
    fn add(self, rhs: &CharPoly) -> CharPoly {
        self.checked_add(rhs)
            .expect("character multiplicity overflow")
    }
}

impl Sub for &CharPoly {
    type Output = CharPoly;
    fn sub(self, rhs: &CharPoly) -> CharPoly {
        self.checked_sub(rhs)
            .expect("character multiplicity overflow")
    }
}

impl Mul for &CharPoly {
    type Output = CharPoly;
    fn mul(self, rhs: &CharPoly) -> CharPoly {
        self.checked_mul(rhs)
            .expect("character multiplicity overflow")
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match p {
                0 => write!(f, "({c})")?,
                1 => write!(f, "t·({c})")?,
                _ => write!(f, "t^{p}·({c})")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: i64) -> Character {
        Character::monomial(k, 1)
    }

    #[test]
    fn from_weights_counts_multiplicity() {
        assert!(Character::from_weights([]).is_zero());
        assert_eq!(
            Character::from_weights([0, 1, 2]),
            Character::one() + u(1) + u(2)
        );
        assert_eq!(
            Character::from_weights([0, 0, -1]),
            Character::monomial(0, 2) + u(-1)
        );
    }

    #[test]
    fn ring_examples() {
        assert!((u(1) - u(1)).is_zero());
        let one_plus_u = Character::one() + u(1);
        assert_eq!(
            &one_plus_u * &one_plus_u,
            Character::one() + Character::monomial(1, 2) + u(2)
        );
        assert_eq!(u(-1) * u(1), Character::one());
    }

    #[test]
    fn overflow_is_reported() {
        let big = Character::monomial(0, i64::MAX);
        assert_eq!(
            big.checked_add(&Character::one()),
            Err(CharacterError::Overflow)
        );
        assert_eq!(
            big.checked_mul(&Character::monomial(0, 2)),
            Err(CharacterError::Overflow)
        );
        let low = Character::monomial(0, i64::MIN);
        assert_eq!(low.checked_neg(), Err(CharacterError::Overflow));
        assert_eq!(
            Character::monomial(i64::MAX, 1).checked_mul(&u(1)),
            Err(CharacterError::Overflow)
        );
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn operator_overflow_panics() {
        let _ = Character::monomial(3, i64::MAX) + u(3);
    }

    #[test]
    fn order_examples() {
        assert!((Character::one() + u(1)).is_nonneg());
        assert!((Character::monomial(0, 2) + u(1)).ge(&(Character::one() + u(1))));
        assert!(!(Character::one() + u(1)).ge(&Character::monomial(0, 2)));
        assert!(!Character::monomial(0, 2).ge(&(Character::one() + u(1))));
        let p = CharPoly::new(vec![Character::one() + u(1), Character::zero()]);
        assert!(p.is_nonneg());
        assert_eq!(p.degree(), Some(0));
    }

    #[test]
    fn ge_survives_extreme_values() {
        let a = Character::monomial(0, i64::MAX);
        let b = Character::monomial(0, i64::MIN);
        assert!(a.ge(&b));
        assert!(!b.ge(&a));
    }

    #[test]
    fn eval_at_minus_one_examples() {
        let p = CharPoly::new(vec![
            Character::weight_range(0, 2),
            Character::weight_range(0, 1),
        ]);
        assert_eq!(p.eval_at_minus_one(), u(2));
        assert!(CharPoly::zero().eval_at_minus_one().is_zero());
        let q = CharPoly::new(vec![Character::one(), Character::one()]);
        assert!(q.eval_at_minus_one().is_zero());
    }

    #[test]
    fn morse_quotient_examples() {
        let p = CharPoly::new(vec![
            Character::weight_range(0, 2),
            Character::weight_range(0, 1),
        ]);
        let r = CharPoly::constant(u(2));
        assert_eq!(
            morse_quotient(&p, &r).unwrap(),
            CharPoly::constant(Character::weight_range(0, 1))
        );
        assert_eq!(morse_quotient(&p, &p).unwrap(), CharPoly::zero());
        let err = morse_quotient(
            &CharPoly::constant(Character::one()),
            &CharPoly::constant(u(1)),
        );
        assert_eq!(
            err,
            Err(CharacterError::NotDivisible {
                residual: Character::one() - u(1)
            })
        );
    }

    #[test]
    fn morse_quotient_keeps_negative_witness() {
        // p - r = -(1 + t)
        let p = CharPoly::zero();
        let r = CharPoly::one_plus_t();
        let q = morse_quotient(&p, &r).unwrap();
        assert_eq!(q, CharPoly::constant(Character::monomial(0, -1)));
        assert!(!q.is_nonneg());
    }

    #[test]
    fn json_is_numeric_key_ordered() {
        let c = Character::from_weights([10, -1, 0, 0, 2]);
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"-1":1,"0":2,"2":1,"10":1}"#
        );
        let p = CharPoly::new(vec![c.clone(), Character::zero()]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"[{"-1":1,"0":2,"2":1,"10":1}]"#
        );
    }

    #[test]
    fn json_rejects_non_integers_and_drops_zeros() {
        assert!(serde_json::from_str::<Character>(r#"{"0": 1.5}"#).is_err());
        assert!(serde_json::from_str::<Character>(r#"{"0": "1"}"#).is_err());
        assert!(serde_json::from_str::<Character>(r#"{"x": 1}"#).is_err());
        assert!(serde_json::from_str::<Character>(r#"{"0.5": 1}"#).is_err());
        let c: Character = serde_json::from_str(r#"{"3": 0, "-2": 4}"#).unwrap();
        assert_eq!(c, Character::monomial(-2, 4));
        let p: CharPoly = serde_json::from_str(r#"[{"1": 1}, {"0": 0}]"#).unwrap();
        assert_eq!(p, CharPoly::constant(u(1)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Character::zero().to_string(), "0");
        assert_eq!((Character::monomial(0, 2) + u(-1)).to_string(), "u^-1 + 2");
        assert_eq!(
            (Character::one() - Character::monomial(1, 3)).to_string(),
            "1 - 3u"
        );
        assert_eq!(Character::monomial(-2, -1).to_string(), "-u^-2");
    }
}
