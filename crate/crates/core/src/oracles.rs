//! Independent brute-force computations used to validate the closed-form
//! rules in [`crate::geometry`].
//!
//! * A weight-graded Čech complex on the standard two-chart cover of the
//!   projective line, reduced by exact integer elimination.
//! * The same machinery glued at a node, for the cut space `M_+ ∪ M_-`.
//! * The fixed-point (localization) formula for the equivariant index.
//!
//! None of these call into the closed forms they are checked against.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::character::{Character, CharacterError};
use crate::geometry::{CohomologyTable, CutDecomposition, GeometryError, LineWeights};
use crate::linalg::{IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("differential does not preserve weight: {0}")]
    Grading(String),
    #[error("weights of {0} are too large for the Čech complex")]
    WeightOverflow(LineWeights),
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("localization sum is not a Laurent polynomial (remainder {remainder})")]
    NonPolynomialResult { remainder: Character },
}

/// Basis element of a Čech cochain group for the line with weights
/// `(r_P, r_Q)`.
///
/// Coordinates: `z` near `Q`, `w = 1/z` near `P`. The frame `e_Q` has
/// weight `r_Q`, `e_P = z^d e_Q` has weight `r_P` and `z` has weight 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CechCell {
    /// `z^exp · e_Q` on the chart around `Q`.
    ChartQ { exp: u64 },
    /// `w^exp · e_P` on the chart around `P`.
    ChartP { exp: u64 },
    /// `z^exp · e_Q` on the overlap, `exp` any integer.
    Overlap { exp: i64 },
}

impl CechCell {
    pub fn weight(&self, line: LineWeights) -> i64 {
        match *self {
            CechCell::ChartQ { exp } => line.r_q + exp as i64,
            CechCell::ChartP { exp } => line.r_p - exp as i64,
            CechCell::Overlap { exp } => line.r_q + exp,
        }
    }

    /// Restriction to the overlap, as an `Overlap` exponent.
    fn restrict(&self, line: LineWeights) -> Option<i64> {
        match *self {
            CechCell::ChartQ { exp } => Some(exp as i64),
            CechCell::ChartP { exp } => Some(line.degree() - exp as i64),
            CechCell::Overlap { .. } => None,
        }
    }
}

/// The weight-`m` piece `C^0_m → C^1_m` of the Čech complex.
#[derive(Debug, Clone)]
pub struct WeightBlock {
    pub weight: i64,
    pub domain: Vec<CechCell>,
    pub codomain: Vec<CechCell>,
    pub differential: IntMatrix,
}

/// Weight-graded Čech complex of one equivariant line on the projective
/// line. Every block outside `weight_range` is zero.
#[derive(Debug, Clone)]
pub struct GradedCechComplex {
    pub line: LineWeights,
    pub weight_range: (i64, i64),
    pub blocks: Vec<WeightBlock>,
}

/// A global section of a given weight, as coordinates on a block's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub weight: i64,
    pub coords: Vec<i64>,
}

/// Which fixed point a section is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPoint {
    P,
    Q,
}

impl GradedCechComplex {
    pub fn new(line: LineWeights) -> Result<Self, OracleError> {
        let overflow = || OracleError::WeightOverflow(line);
        line.r_p.checked_sub(line.r_q).ok_or_else(overflow)?;
        let lo = line.r_p.min(line.r_q).checked_sub(1).ok_or_else(overflow)?;
        let hi = line.r_p.max(line.r_q).checked_add(1).ok_or_else(overflow)?;
        let blocks = (lo..=hi)
            .map(|m| Self::block(line, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            line,
            weight_range: (lo, hi),
            blocks,
        })
    }

    fn block(line: LineWeights, m: i64) -> Result<WeightBlock, OracleError> {
        let mut domain = Vec::new();
        if m >= line.r_q {
            domain.push(CechCell::ChartQ {
                exp: (m - line.r_q) as u64,
            });
        }
        if m <= line.r_p {
            domain.push(CechCell::ChartP {
                exp: (line.r_p - m) as u64,
            });
        }
        let codomain = vec![CechCell::Overlap { exp: m - line.r_q }];

        // (s_Q, s_P) ↦ s_P - s_Q on the overlap
        let mut differential = IntMatrix::zeros(codomain.len(), domain.len());
        for (j, cell) in domain.iter().enumerate() {
            let exp = cell.restrict(line).expect("domain cells live on a chart");
            let row = codomain
                .iter()
                .position(|c| *c == CechCell::Overlap { exp })
                .ok_or_else(|| {
                    OracleError::Grading(format!(
                        "image of {cell:?} leaves weight block {m} for line {line}"
                    ))
                })?;
            differential[(row, j)] = match cell {
                CechCell::ChartQ { .. } => -1,
                _ => 1,
            };
        }
        let block = WeightBlock {
            weight: m,
            domain,
            codomain,
            differential,
        };
        if !block_is_graded(line, &block) {
            return Err(OracleError::Grading(format!(
                "block {m} of line {line} mixes weights"
            )));
        }
        Ok(block)
    }

    /// Every cell in every block carries that block's weight.
    pub fn is_graded(&self) -> bool {
        self.blocks.iter().all(|b| block_is_graded(self.line, b))
    }

    pub fn cohomology(&self) -> Result<CohomologyTable, OracleError> {
        let mut h0 = Vec::new();
        let mut h1 = Vec::new();
        for b in &self.blocks {
            let s = b.differential.smith()?;
            h0.push((b.weight, (b.domain.len() - s.rank()) as i64));
            h1.push((b.weight, s.cokernel_rank() as i64));
        }
        Ok(CohomologyTable {
            h0: Character::from_pairs(h0)?,
            h1: Character::from_pairs(h1)?,
            n: 1,
        })
    }

    /// Integer bases of `H^0` per weight, from kernels of the differential.
    pub fn global_sections(&self) -> Result<Vec<Section>, OracleError> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for coords in b.differential.smith()?.kernel_basis() {
                out.push(Section {
                    weight: b.weight,
                    coords,
                });
            }
        }
        Ok(out)
    }

    /// Value of a section in the fiber over a fixed point: the constant
    /// coefficient in that chart's frame.
    pub fn evaluate(&self, section: &Section, at: FixedPoint) -> i64 {
        let target = match at {
            FixedPoint::Q => CechCell::ChartQ { exp: 0 },
            FixedPoint::P => CechCell::ChartP { exp: 0 },
        };
        self.blocks
            .iter()
            .find(|b| b.weight == section.weight)
            .and_then(|b| b.domain.iter().position(|c| *c == target))
            .map_or(0, |j| section.coords[j])
    }
}

fn block_is_graded(line: LineWeights, block: &WeightBlock) -> bool {
    block
        .domain
        .iter()
        .chain(&block.codomain)
        .all(|c| c.weight(line) == block.weight)
}

/// Čech cohomology of one equivariant line on the projective line.
pub fn cech_cohomology_p1(line: LineWeights) -> Result<CohomologyTable, OracleError> {
    GradedCechComplex::new(line)?.cohomology()
}

/// Cohomology of the nodal curve `M_+ ∪ M_-` computed from explicit
/// section bases and the evaluation-difference matrix at the node.
pub fn cech_cohomology_nodal(cutd: &CutDecomposition) -> Result<CohomologyTable, OracleError> {
    cutd.validate()?;
    let plus = cutd
        .plus
        .summands()
        .iter()
        .map(|&l| GradedCechComplex::new(l))
        .collect::<Result<Vec<_>, _>>()?;
    let minus = cutd
        .minus
        .summands()
        .iter()
        .map(|&l| GradedCechComplex::new(l))
        .collect::<Result<Vec<_>, _>>()?;

    // (node line index, section) for every H^0 basis vector on each side;
    // the node is Q on the plus side and P on the minus side.
    let mut columns: Vec<(usize, &GradedCechComplex, Section, FixedPoint, i64)> = Vec::new();
    for (i, c) in plus.iter().enumerate() {
        for s in c.global_sections()? {
            columns.push((i, c, s, FixedPoint::Q, 1));
        }
    }
    for (i, c) in minus.iter().enumerate() {
        for s in c.global_sections()? {
            columns.push((i, c, s, FixedPoint::P, -1));
        }
    }
    // Node fiber lines, with their weights.
    let node_weights: Vec<i64> = cutd.plus.summands().iter().map(|l| l.r_q).collect();

    let weights: BTreeSet<i64> = columns
        .iter()
        .map(|c| c.2.weight)
        .chain(node_weights.iter().copied())
        .collect();

    let mut h0 = Vec::new();
    let mut h1 = Vec::new();
    for m in weights {
        let cols: Vec<_> = columns.iter().filter(|c| c.2.weight == m).collect();
        let rows: Vec<usize> = (0..node_weights.len())
            .filter(|&i| node_weights[i] == m)
            .collect();
        let mut eval = IntMatrix::zeros(rows.len(), cols.len());
        for (j, (line_idx, complex, section, at, sign)) in cols.iter().enumerate() {
            if let Some(r) = rows.iter().position(|i| i == line_idx) {
                eval[(r, j)] = sign * complex.evaluate(section, *at);
            }
        }
        let s = eval.smith()?;
        h0.push((m, (cols.len() - s.rank()) as i64));
        h1.push((m, s.cokernel_rank() as i64));
    }

    let mut table = CohomologyTable {
        h0: Character::from_pairs(h0)?,
        h1: Character::from_pairs(h1)?,
        n: 1,
    };
    for c in plus.iter().chain(&minus) {
        table.h1 = table.h1.checked_add(&c.cohomology()?.h1)?;
    }
    Ok(table)
}

/// A fraction of Laurent polynomials in `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCharacter {
    pub numerator: Character,
    pub denominator: Character,
}

impl RationalCharacter {
    pub fn new(numerator: Character, denominator: Character) -> Result<Self, OracleError> {
        if denominator.is_zero() {
            return Err(OracleError::ZeroDenominator);
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    /// Multiply numerator and denominator by the same nonzero factor.
    pub fn expand_by(&self, factor: &Character) -> Result<Self, OracleError> {
        Self::new(
            self.numerator.checked_mul(factor)?,
            self.denominator.checked_mul(factor)?,
        )
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, OracleError> {
        if self.denominator == other.denominator {
            return Self::new(
                self.numerator.checked_add(&other.numerator)?,
                self.denominator.clone(),
            );
        }
        Self::new(
            self.numerator
                .checked_mul(&other.denominator)?
                .checked_add(&other.numerator.checked_mul(&self.denominator)?)?,
            self.denominator.checked_mul(&other.denominator)?,
        )
    }

    /// Exact division; fails unless the remainder is zero.
    pub fn reduce(&self) -> Result<Character, OracleError> {
        let (quot, rem) = laurent_divmod(&self.numerator, &self.denominator)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(OracleError::NonPolynomialResult { remainder: rem })
        }
    }
}

/// Long division from the top weight down. Stops when the remainder spans
/// fewer weights than the divisor or its top coefficient is not divisible.
fn laurent_divmod(num: &Character, den: &Character) -> Result<(Character, Character), OracleError> {
    let (Some(dmin), Some(dmax)) = (den.min_weight(), den.max_weight()) else {
        return Err(OracleError::ZeroDenominator);
    };
    let lead = den.mult(dmax);
    let mut quot = Character::zero();
    let mut rem = num.clone();
    while let (Some(rmin), Some(rmax)) = (rem.min_weight(), rem.max_weight()) {
        let c = rem.mult(rmax);
        if rmax - rmin < dmax - dmin || c % lead != 0 {
            break;
        }
        let term = Character::monomial(rmax - dmax, c / lead);
        quot = quot.checked_add(&term)?;
        rem = rem.checked_sub(&term.checked_mul(den)?)?;
    }
    Ok((quot, rem))
}

/// Equivariant index by fixed-point localization:
/// `u^{r_P} / (1 - u^{-1}) + u^{r_Q} / (1 - u)`, brought over `u - 1`.
pub fn localization_index(line: LineWeights) -> Result<Character, OracleError> {
    let one = Character::one();
    let u = Character::monomial(1, 1);
    let at_p = RationalCharacter::new(
        Character::monomial(line.r_p, 1),
        one.checked_sub(&Character::monomial(-1, 1))?,
    )?
    .expand_by(&u)?;
    let at_q = RationalCharacter::new(Character::monomial(line.r_q, 1), one.checked_sub(&u)?)?
        .expand_by(&Character::monomial(0, -1))?;
    at_p.checked_add(&at_q)?.reduce()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::EquivBundleCP1;

    fn u(k: i64) -> Character {
        Character::monomial(k, 1)
    }

    #[test]
    fn p1_examples() {
        let t = cech_cohomology_p1(LineWeights::new(2, 0)).unwrap();
        assert_eq!(t.h0, Character::weight_range(0, 2));
        assert!(t.h1.is_zero());

        let t = cech_cohomology_p1(LineWeights::new(0, 0)).unwrap();
        assert_eq!(t.h0, Character::one());
        assert!(t.h1.is_zero());

        let t = cech_cohomology_p1(LineWeights::new(-3, 0)).unwrap();
        assert!(t.h0.is_zero());
        assert_eq!(t.h1, u(-2) + u(-1));
    }

    #[test]
    fn extreme_weights_are_an_error() {
        for (p, q) in [(i64::MIN, i64::MIN), (i64::MAX, 0), (i64::MIN, 1)] {
            assert!(matches!(
                GradedCechComplex::new(LineWeights::new(p, q)),
                Err(OracleError::WeightOverflow(_))
            ));
        }
    }

    #[test]
    fn blocks_are_graded() {
        for (p, q) in [(2, 0), (-3, 0), (5, 5), (-4, 3)] {
            let c = GradedCechComplex::new(LineWeights::new(p, q)).unwrap();
            assert!(c.is_graded());
            assert_eq!(
                c.blocks.len() as i64,
                c.weight_range.1 - c.weight_range.0 + 1
            );
        }
    }

    #[test]
    fn sections_evaluate_at_fixed_points() {
        let c = GradedCechComplex::new(LineWeights::new(2, 0)).unwrap();
        let secs = c.global_sections().unwrap();
        assert_eq!(secs.len(), 3);
        for s in &secs {
            let at_q = c.evaluate(s, FixedPoint::Q);
            let at_p = c.evaluate(s, FixedPoint::P);
            assert_eq!(at_q != 0, s.weight == 0, "{s:?}");
            assert_eq!(at_p != 0, s.weight == 2, "{s:?}");
        }
    }

    #[test]
    fn nodal_examples() {
        let t = cech_cohomology_nodal(&EquivBundleCP1::line(2, 2).cut()).unwrap();
        assert_eq!((t.h0, t.h1), (u(1) + u(2), u(1)));

        let t = cech_cohomology_nodal(&EquivBundleCP1::line(0, 0).cut()).unwrap();
        assert_eq!((t.h0, t.h1), (Character::one(), Character::zero()));

        let t = cech_cohomology_nodal(&EquivBundleCP1::line(-1, 1).cut()).unwrap();
        assert_eq!((t.h0, t.h1), (Character::zero(), Character::one()));
    }

    #[test]
    fn nodal_rejects_malformed() {
        let mut c = EquivBundleCP1::line(1, 1).cut();
        c.minus = EquivBundleCP1::line(1, 1);
        assert!(matches!(
            cech_cohomology_nodal(&c),
            Err(OracleError::Geometry(GeometryError::MalformedCut(_)))
        ));
    }

    #[test]
    fn localization_examples() {
        assert_eq!(
            localization_index(LineWeights::new(2, 0)).unwrap(),
            Character::weight_range(0, 2)
        );
        assert_eq!(
            localization_index(LineWeights::new(0, 0)).unwrap(),
            Character::one()
        );
        assert!(localization_index(LineWeights::new(-1, 0))
            .unwrap()
            .is_zero());
        assert_eq!(
            localization_index(LineWeights::new(-3, 0)).unwrap(),
            -(u(-2) + u(-1))
        );
    }

    #[test]
    fn rational_reduction_reports_remainder() {
        let r = RationalCharacter::new(u(1), u(1) - Character::one()).unwrap();
        assert!(matches!(
            r.reduce(),
            Err(OracleError::NonPolynomialResult { .. })
        ));
        assert_eq!(
            RationalCharacter::new(u(0), Character::zero()),
            Err(OracleError::ZeroDenominator)
        );
        // (1 - u^3) / (1 - u) = 1 + u + u^2
        let r = RationalCharacter::new(Character::one() - u(3), Character::one() - u(1)).unwrap();
        assert_eq!(r.reduce().unwrap(), Character::weight_range(0, 2));
        // different denominators go through cross multiplication
        let a = RationalCharacter::new(u(1), Character::one() - u(-1)).unwrap();
        let b = RationalCharacter::new(Character::one(), Character::one() - u(1)).unwrap();
        assert_eq!(
            a.checked_add(&b).unwrap().reduce().unwrap(),
            Character::weight_range(0, 1)
        );
    }
}
