//! Equivariant bundles on the projective line and their symplectic cut.
//!
//! The circle rotates `CP^1` with two fixed points: `P` where the moment
//! map equals `1` and `Q` where it equals `-1`. An equivariant line bundle
//! is determined by its fiber weights `r_P`, `r_Q`; higher rank bundles are
//! direct sums of such lines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::character::{CharPoly, Character};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid bundle literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("a bundle needs at least one summand")]
    EmptyBundle,
    /// The cut pieces do not meet at a weight-0 node, or do not pair up.
    #[error("malformed cut: {0}")]
    MalformedCut(String),
}

/// Fiber weights of an equivariant line bundle at the two fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineWeights {
    pub r_p: i64,
    pub r_q: i64,
}

impl LineWeights {
    pub const fn new(r_p: i64, r_q: i64) -> Self {
        Self { r_p, r_q }
    }

    /// Degree of the underlying line bundle, `r_P - r_Q`.
    pub const fn degree(&self) -> i64 {
        self.r_p - self.r_q
    }

    /// Characters of `H^0` and `H^1`.
    ///
    /// Sections have weights `r_Q ..= r_P`; when `r_Q > r_P` the first
    /// cohomology has weights `r_P + 1 ..= r_Q - 1` (empty for degree -1).
    pub fn cohomology(&self) -> (Character, Character) {
        if self.r_q <= self.r_p {
            (
                Character::weight_range(self.r_q, self.r_p),
                Character::zero(),
            )
        } else {
            (
                Character::zero(),
                Character::weight_range(self.r_p + 1, self.r_q - 1),
            )
        }
    }
}

impl fmt::Display for LineWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.r_p, self.r_q)
    }
}

impl FromStr for LineWeights {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GeometryError::Parse {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let (p, q) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| err("expected rP:rQ"))?;
        let r_p = p.trim().parse().map_err(|_| err("r_P is not an integer"))?;
        let r_q = q.trim().parse().map_err(|_| err("r_Q is not an integer"))?;
        Ok(Self { r_p, r_q })
    }
}

/// Direct sum of equivariant line bundles; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivBundleCP1 {
    summands: Vec<LineWeights>,
}

impl EquivBundleCP1 {
    pub fn new(summands: Vec<LineWeights>) -> Result<Self, GeometryError> {
        if summands.is_empty() {
            return Err(GeometryError::EmptyBundle);
        }
        Ok(Self { summands })
    }

    pub fn line(r_p: i64, r_q: i64) -> Self {
        Self {
            summands: vec![LineWeights::new(r_p, r_q)],
        }
    }

    pub fn summands(&self) -> &[LineWeights] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Characters of `H^0` and `H^1`, summed over summands.
    pub fn cohomology(&self) -> CohomologyTable {
        let (h0, h1) =
            self.summands
                .iter()
                .fold((Character::zero(), Character::zero()), |(h0, h1), line| {
                    let (a, b) = line.cohomology();
                    (h0 + a, h1 + b)
                });
        CohomologyTable { h0, h1, n: 1 }
    }

    /// Lerman cut at level 0.
    ///
    /// `M_+` keeps `P` and gains the reduced point as its low fixed point;
    /// `M_-` keeps `Q` and gains it as its high fixed point. Both restricted
    /// bundles carry weight 0 over the reduced point.
    pub fn cut(&self) -> CutDecomposition {
        let plus = self
            .summands
            .iter()
            .map(|l| LineWeights::new(l.r_p, 0))
            .collect();
        let minus = self
            .summands
            .iter()
            .map(|l| LineWeights::new(0, l.r_q))
            .collect();
        CutDecomposition {
            plus: Self { summands: plus },
            minus: Self { summands: minus },
            red_dims: (self.rank() as u64, 0),
        }
    }
}

impl fmt::Display for EquivBundleCP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for EquivBundleCP1 {
    type Err = GeometryError;

    /// Parses `"rP:rQ[,rP:rQ...]"`, e.g. `"3:1,0:-2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(GeometryError::EmptyBundle);
        }
        let summands = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<LineWeights>, _>>()?;
        Self::new(summands)
    }
}

impl Serialize for EquivBundleCP1 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EquivBundleCP1 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Characters of `H^0` and `H^1` on a space of complex dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub h0: Character,
    pub h1: Character,
    pub n: u32,
}

impl CohomologyTable {
    /// `h0 + t·h1`.
    pub fn euler_poly(&self) -> CharPoly {
        CharPoly::new(vec![self.h0.clone(), self.h1.clone()])
    }

    /// Equivariant index `h0 - h1`.
    pub fn index_character(&self) -> Character {
        &self.h0 - &self.h1
    }
}

/// The pieces produced by cutting at level 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutDecomposition {
    /// `M_+` with fixed points `P` (high) and the reduced point (low).
    pub plus: EquivBundleCP1,
    /// `M_-` with fixed points the reduced point (high) and `Q` (low).
    pub minus: EquivBundleCP1,
    /// `(dim H^0, dim H^1)` of the reduced space, a point.
    pub red_dims: (u64, u64),
}

impl CutDecomposition {
    /// Character of `H^0` of the reduced point: its fiber, all weight 0.
    pub fn red_character(&self) -> Character {
        Character::monomial(0, self.red_dims.0 as i64)
    }

    /// Checks the pieces pair up and meet in a weight-0 node.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.plus.rank() != self.minus.rank() {
            return Err(GeometryError::MalformedCut(format!(
                "plus has {} summands but minus has {}",
                self.plus.rank(),
                self.minus.rank()
            )));
        }
        for (i, (p, m)) in self
            .plus
            .summands
            .iter()
            .zip(&self.minus.summands)
            .enumerate()
        {
            if p.r_q != 0 || m.r_p != 0 {
                return Err(GeometryError::MalformedCut(format!(
                    "summand {i}: node weights are {} (plus) and {} (minus), expected 0",
                    p.r_q, m.r_p
                )));
            }
        }
        if self.red_dims != (self.plus.rank() as u64, 0) {
            return Err(GeometryError::MalformedCut(format!(
                "reduced dimensions {:?} do not match rank {}",
                self.red_dims,
                self.plus.rank()
            )));
        }
        Ok(())
    }

    /// Cohomology of the nodal union `M_+ ∪ M_-`.
    ///
    /// From the Mayer-Vietoris sequence, per summand the difference of
    /// evaluations `H^0(M_+) ⊕ H^0(M_-) → H^0(pt)` is onto exactly when one
    /// side has a weight-0 section, i.e. when `r_P >= 0` or `r_Q <= 0`.
    /// Otherwise its cokernel adds a weight-0 line to `H^1`.
    pub fn cohomology(&self) -> Result<CohomologyTable, GeometryError> {
        self.validate()?;
        let mut h0 = Character::zero();
        let mut h1 = Character::zero();
        for (p, m) in self.plus.summands.iter().zip(&self.minus.summands) {
            let (p0, p1) = p.cohomology();
            let (m0, m1) = m.cohomology();
            let onto = p.r_p >= 0 || m.r_q <= 0;
            let (drop, extra) = if onto {
                (Character::one(), Character::zero())
            } else {
                (Character::zero(), Character::one())
            };
            h0 = h0 + p0 + m0 - drop;
            h1 = h1 + p1 + m1 + extra;
        }
        Ok(CohomologyTable { h0, h1, n: 1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: i64) -> Character {
        Character::monomial(k, 1)
    }

    fn table(h0: Character, h1: Character) -> CohomologyTable {
        CohomologyTable { h0, h1, n: 1 }
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(
            EquivBundleCP1::line(2, 0).cohomology(),
            table(Character::weight_range(0, 2), Character::zero())
        );
        assert_eq!(
            EquivBundleCP1::line(0, 0).cohomology(),
            table(Character::one(), Character::zero())
        );
        assert_eq!(
            EquivBundleCP1::line(-3, 0).cohomology(),
            table(Character::zero(), u(-2) + u(-1))
        );
        // degree -1: acyclic
        assert_eq!(
            EquivBundleCP1::line(4, 5).cohomology(),
            table(Character::zero(), Character::zero())
        );
    }

    #[test]
    fn euler_poly_and_index() {
        let t = EquivBundleCP1::line(2, 0).cohomology();
        assert_eq!(
            t.euler_poly(),
            CharPoly::constant(Character::weight_range(0, 2))
        );
        assert_eq!(t.index_character(), Character::weight_range(0, 2));
        assert!(EquivBundleCP1::line(-1, 0)
            .cohomology()
            .index_character()
            .is_zero());
        assert_eq!(
            EquivBundleCP1::line(0, 0).cohomology().euler_poly(),
            CharPoly::constant(Character::one())
        );
    }

    #[test]
    fn cut_examples() {
        let c = EquivBundleCP1::line(2, 2).cut();
        assert_eq!(c.plus, EquivBundleCP1::line(2, 0));
        assert_eq!(c.minus, EquivBundleCP1::line(0, 2));
        assert_eq!(c.red_dims, (1, 0));

        let c = EquivBundleCP1::line(0, 0).cut();
        assert_eq!(c.plus, c.minus);

        let b: EquivBundleCP1 = "1:-1,2:2".parse().unwrap();
        let c = b.cut();
        assert_eq!(c.plus, "1:0,2:0".parse().unwrap());
        assert_eq!(c.minus, "0:-1,0:2".parse().unwrap());
        assert_eq!(c.red_dims, (2, 0));
    }

    #[test]
    fn mcut_examples() {
        let t = EquivBundleCP1::line(2, 2).cut().cohomology().unwrap();
        assert_eq!(t, table(u(1) + u(2), u(1)));
        assert_eq!(t.euler_poly(), CharPoly::new(vec![u(1) + u(2), u(1)]));
        assert_eq!(t.index_character(), u(2));

        let t = EquivBundleCP1::line(0, 0).cut().cohomology().unwrap();
        assert_eq!(t, table(Character::one(), Character::zero()));

        let t = EquivBundleCP1::line(-1, 1).cut().cohomology().unwrap();
        assert_eq!(t, table(Character::zero(), Character::one()));
    }

    #[test]
    fn malformed_cut_is_rejected() {
        let mut c = EquivBundleCP1::line(2, 2).cut();
        c.plus = EquivBundleCP1::line(2, 1);
        assert!(matches!(
            c.cohomology(),
            Err(GeometryError::MalformedCut(_))
        ));

        let mut c = EquivBundleCP1::line(2, 2).cut();
        c.minus = "0:1,0:2".parse().unwrap();
        assert!(matches!(
            c.cohomology(),
            Err(GeometryError::MalformedCut(_))
        ));

        let mut c = EquivBundleCP1::line(2, 2).cut();
        c.red_dims = (1, 1);
        assert!(matches!(
            c.cohomology(),
            Err(GeometryError::MalformedCut(_))
        ));
    }

    #[test]
    fn literal_parsing() {
        let b: EquivBundleCP1 = "3:1,0:-2".parse().unwrap();
        assert_eq!(
            b.summands(),
            &[LineWeights::new(3, 1), LineWeights::new(0, -2)]
        );
        assert_eq!(b.to_string(), "3:1,0:-2");
        assert_eq!(
            " -3 : 0 ".parse::<EquivBundleCP1>().unwrap(),
            EquivBundleCP1::line(-3, 0)
        );
        assert!("".parse::<EquivBundleCP1>().is_err());
        assert!("3".parse::<EquivBundleCP1>().is_err());
        assert!("3:x".parse::<EquivBundleCP1>().is_err());
        assert!("3:1,".parse::<EquivBundleCP1>().is_err());
        assert!(EquivBundleCP1::new(vec![]).is_err());
        assert_eq!(LineWeights::new(3, 1).degree(), 2);
    }

    #[test]
    fn table_json_shape() {
        let t = EquivBundleCP1::line(2, 0).cohomology();
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"h0":{"0":1,"1":1,"2":1},"h1":{},"n":1}"#
        );
    }
}
