//! Chart models, tangent terms and the linear coordinate change between adjacent charts.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Defining equation of a chart, up to units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartShape {
    /// `y^nu`
    Smooth { nu: u64 },
    /// `x^nu1 * y^nu`
    Node { nu1: u64, nu: u64 },
    /// `(x-1)^nu2 * x^nu1 * y^nu`
    DoubleNode { nu2: u64, nu1: u64, nu: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartModel {
    pub id: usize,
    pub shape: ChartShape,
    pub inv_x_minus_1: bool,
    pub inv_y_minus_1: bool,
    pub inv_x: bool,
}

impl ChartModel {
    pub fn new(id: usize, shape: ChartShape) -> Self {
        ChartModel { id, shape, inv_x_minus_1: false, inv_y_minus_1: false, inv_x: false }
    }

    fn multiplicities(&self) -> Vec<u64> {
        match self.shape {
            ChartShape::Smooth { nu } => vec![nu],
            ChartShape::Node { nu1, nu } => vec![nu1, nu],
            ChartShape::DoubleNode { nu2, nu1, nu } => vec![nu2, nu1, nu],
        }
    }
}

/// `cx * x d/dx + cy * y d/dy` with integer weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    XX,
    YY,
    /// `a * x d/dx - b * y d/dy`
    Rel(i64, i64),
}

impl Direction {
    pub fn weights(self) -> (i64, i64) {
        match self {
            Direction::XX => (1, 0),
            Direction::YY => (0, 1),
            Direction::Rel(a, b) => (a, -b),
        }
    }

    pub fn from_weights(cx: i64, cy: i64) -> Self {
        match (cx, cy) {
            (1, 0) => Direction::XX,
            (0, 1) => Direction::YY,
            _ => Direction::Rel(cx, -cy),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentTerm {
    pub chart: usize,
    /// Exponent of `(x-1)`; negative means a pole at `x = 1`.
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub direction: Direction,
    pub coeff: u64,
}

impl TangentTerm {
    pub fn monomial(chart: usize, s: i64, t: i64, direction: Direction) -> Self {
        TangentTerm { chart, r: 0, s, t, direction, coeff: 1 }
    }
}

/// Rewrites a monomial term under `x = y'^-1`, `y = x' y'^b`.
///
/// `x^s y^t` becomes `x'^t y'^(bt-s)`; `x d/dx = b x'd/dx' - y'd/dy'` and `y d/dy = x'd/dx'`.
pub fn change_coords(term: TangentTerm, b: i64) -> TangentTerm {
    let (cx, cy) = term.direction.weights();
    TangentTerm {
        s: term.t,
        t: b * term.t - term.s,
        direction: Direction::from_weights(b * cx + cy, -cx),
        ..term
    }
}

/// Inverse of [`change_coords`] for the same `b`.
pub fn change_coords_back(term: TangentTerm, b: i64) -> TangentTerm {
    let (cx, cy) = term.direction.weights();
    TangentTerm {
        s: b * term.s - term.t,
        t: term.s,
        direction: Direction::from_weights(-cy, cx + b * cy),
        ..term
    }
}

/// Determinant of the direction map of [`change_coords`] on `span{x d/dx, y d/dy}`.
pub fn change_coords_det(b: i64) -> i64 {
    let img = |d| change_coords(TangentTerm::monomial(0, 0, 0, d), b).direction.weights();
    let ((a, c), (d, e)) = (img(Direction::XX), img(Direction::YY));
    a * e - c * d
}

/// One summand `(k[x,y] / ((x-1)^r x^s y^t)) * generator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentSummand {
    pub generator: TangentGenerator,
    /// Exponents `(r, s, t)` of the annihilating monomial.
    pub ideal: (u64, u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangentGenerator {
    /// `d/dx`
    Dx,
    /// `x d/dx`
    XDx,
    /// `(x-1) x d/dx`
    X1XDx,
    /// `y d/dy`
    YDy,
}

impl TangentSummand {
    /// Largest admissible `y` exponent.
    pub fn t_bound(&self) -> u64 {
        self.ideal.2 - 1
    }
}

/// Tangent module of `k[x,y]/(f)` for the three chart shapes.
pub fn tangent_basis(chart: &ChartModel, p: u64) -> Result<Vec<TangentSummand>> {
    if let Some(m) = chart.multiplicities().into_iter().find(|m| *m == 0 || m % p == 0) {
        return Err(Error::ZNotCoprime(format!("chart {} has multiplicity {m} divisible by {p}", chart.id)));
    }
    let s = |generator, ideal| TangentSummand { generator, ideal };
    Ok(match chart.shape {
        ChartShape::Smooth { nu } => {
            vec![s(TangentGenerator::Dx, (0, 0, nu)), s(TangentGenerator::YDy, (0, 0, nu - 1))]
        }
        ChartShape::Node { nu1, nu } => {
            vec![s(TangentGenerator::XDx, (0, nu1 - 1, nu)), s(TangentGenerator::YDy, (0, nu1, nu - 1))]
        }
        ChartShape::DoubleNode { nu2, nu1, nu } => vec![
            s(TangentGenerator::X1XDx, (nu2 - 1, nu1 - 1, nu)),
            s(TangentGenerator::YDy, (nu2, nu1, nu - 1)),
        ],
    })
}

/// Which generating family of a coboundary a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySource {
    Branch1,
    Branch2,
    Branch3,
    U0,
    U1,
    Pole,
}

/// `a_s * s + a_t * t + c` compared with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub a_s: i64,
    pub a_t: i64,
    pub c: i64,
    pub equality: bool,
}

impl LinearConstraint {
    fn le(a_s: i64, a_t: i64, c: i64) -> Self {
        LinearConstraint { a_s, a_t, c, equality: false }
    }

    fn eq(a_s: i64, a_t: i64, c: i64) -> Self {
        LinearConstraint { a_s, a_t, c, equality: true }
    }

    pub fn holds(&self, s: i64, t: i64) -> bool {
        let v = self.a_s * s + self.a_t * t + self.c;
        if self.equality {
            v == 0
        } else {
            v <= 0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoboundaryFamily {
    pub source: FamilySource,
    pub direction: Direction,
    pub constraints: Vec<LinearConstraint>,
}

impl CoboundaryFamily {
    pub fn contains(&self, s: i64, t: i64, direction: Direction) -> bool {
        direction == self.direction && self.constraints.iter().all(|c| c.holds(s, t))
    }
}

/// Image of the sections over one branch in the overlap with the central curve.
pub fn branch_image(bs: &[u32], nu_first: i64) -> Result<[CoboundaryFamily; 3]> {
    branch_image_from(bs, nu_first, FamilySource::Branch1)
}

pub fn branch_image_from(bs: &[u32], nu_first: i64, source: FamilySource) -> Result<[CoboundaryFamily; 3]> {
    let (alpha, beta) = crate::graph_core::branch_fraction(bs)?;
    let range = |top: i64| [LinearConstraint::le(-1, 0, 0), LinearConstraint::le(1, 0, -top)];
    let fam = |direction, top, last| {
        let mut constraints = range(top).to_vec();
        constraints.push(last);
        CoboundaryFamily { source, direction, constraints }
    };
    Ok([
        fam(Direction::XX, nu_first - 2, LinearConstraint::le(-alpha, beta, 0)),
        fam(Direction::YY, nu_first - 1, LinearConstraint::le(-alpha, beta, 0)),
        fam(Direction::Rel(alpha, beta), nu_first - 1, LinearConstraint::eq(-alpha, beta, -1)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_chart_bounds() {
        let m = tangent_basis(&ChartModel::new(0, ChartShape::Smooth { nu: 3 }), 2).unwrap();
        assert_eq!(m[0].t_bound(), 2);
        assert_eq!(m[1].t_bound(), 1);
        assert!(tangent_basis(&ChartModel::new(0, ChartShape::Smooth { nu: 4 }), 2).is_err());
    }

    #[test]
    fn node_and_double_node() {
        let m = tangent_basis(&ChartModel::new(0, ChartShape::Node { nu1: 2, nu: 3 }), 5).unwrap();
        assert_eq!(m[0].ideal, (0, 1, 3));
        assert_eq!(m[1].ideal, (0, 2, 2));
        let m = tangent_basis(&ChartModel::new(0, ChartShape::DoubleNode { nu2: 2, nu1: 2, nu: 2 }), 5).unwrap();
        assert_eq!(m[0].generator, TangentGenerator::X1XDx);
        assert_eq!(m[0].ideal, (1, 1, 2));
    }

    #[test]
    fn coordinate_change() {
        let x = TangentTerm::monomial(0, 0, 0, Direction::XX);
        assert_eq!(change_coords(x, 2).direction, Direction::Rel(2, 1));
        let y = TangentTerm::monomial(0, 3, 5, Direction::YY);
        let z = change_coords(y, 2);
        assert_eq!((z.s, z.t, z.direction), (5, 7, Direction::XX));
        for b in 2..7 {
            for d in [Direction::XX, Direction::YY, Direction::Rel(3, 2)] {
                let t = TangentTerm::monomial(1, -2, 4, d);
                assert_eq!(change_coords_back(change_coords(t, b), b), t);
            }
            assert_eq!(change_coords_det(b), 1);
        }
    }

    #[test]
    fn branch_families() {
        let [xx, yy, rel] = branch_image(&[2], 2).unwrap();
        assert!(xx.contains(0, 0, Direction::XX));
        assert!(!xx.contains(0, 1, Direction::XX));
        assert!(yy.contains(1, 2, Direction::YY));
        assert_eq!(rel.direction, Direction::Rel(2, 1));
        assert!(rel.contains(0, 1, Direction::Rel(2, 1)));
    }
}
