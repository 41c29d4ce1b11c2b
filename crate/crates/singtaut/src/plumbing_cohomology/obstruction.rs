//! Explicit linear functional witnessing a nonzero class in the Čech cokernel on D-tilde graphs.

use super::cech::{all_coboundaries, Coord, Cover};
use crate::arith::{inv_mod, require_prime};
use crate::cycle_engine::{multiplicity_data, MultiplicityData};
use crate::error::{Error, Result};
use crate::f_classify::recognize_dtilde;
use crate::graph_core::DualGraph;
use serde::{Deserialize, Serialize};

/// One summand of the functional, evaluated on a cochain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionalTerm {
    /// `coeff * sum_{e >= 0}` of the `X^e X d/dX` coordinates at `t = 0` on curve `v`.
    XSum { v: usize, coeff: u64 },
    /// `coeff *` the `Y d/dY` coordinate at `e = t = 0` on curve `v`.
    YConst { v: usize, coeff: u64 },
}

impl FunctionalTerm {
    fn eval(&self, img: &[(Coord, u64)], p: u64) -> u64 {
        let (v, coeff, hit): (usize, u64, fn(&Coord) -> bool) = match *self {
            FunctionalTerm::XSum { v, coeff } => (v, coeff, |c| c.dir == 0 && c.e >= 0),
            FunctionalTerm::YConst { v, coeff } => (v, coeff, |c| c.dir == 1 && c.e == 0),
        };
        let sum = img
            .iter()
            .filter(|(c, _)| c.v as usize == v && !c.pole && c.t == 0 && hit(c))
            .fold(0, |acc, (_, x)| (acc + x) % p);
        sum * coeff % p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTildeObstruction {
    pub p: u64,
    pub centers: (usize, usize),
    /// Curves strictly between the two centers.
    pub middle: Vec<usize>,
    pub multiplicities: Vec<i64>,
    pub functional: Vec<FunctionalTerm>,
    /// Cochain on which the functional takes the value 1.
    pub target: Coord,
    /// Largest chart exponent among the generators checked.
    pub grid: i64,
    pub generators_checked: usize,
}

pub fn dtilde_obstruction(g: &DualGraph, p: u64) -> Result<Option<DTildeObstruction>> {
    require_prime(p)?;
    if recognize_dtilde(g).is_none() {
        return Err(Error::Precondition("graph is not of D-tilde shape".into()));
    }
    let md = multiplicity_data(g, p)?;
    dtilde_obstruction_with(g, p, &md)
}

pub fn dtilde_obstruction_with(g: &DualGraph, p: u64, md: &MultiplicityData) -> Result<Option<DTildeObstruction>> {
    require_prime(p)?;
    if recognize_dtilde(g).is_none() {
        return Err(Error::Precondition("graph is not of D-tilde shape".into()));
    }
    let path = center_path(g);
    let (c1, c2) = (path[0], *path.last().unwrap());
    let middle = path[1..path.len() - 1].to_vec();
    // The coordinate change along the chain only degenerates when some b vanishes mod p.
    if !middle.iter().any(|&v| g.vertices[v].b as u64 % p == 0) {
        return Ok(None);
    }
    let cover = Cover::new(g, &md.z, p)?;
    let bmax = g.vertices.iter().map(|v| v.b as i64).max().unwrap();
    let numax = *md.z.iter().max().unwrap();
    let grid = bmax * numax + 12;
    let images = all_coboundaries(&cover, grid, 2);

    // Unknown coefficients on everything except the fixed XSum at c1.
    let mut unknowns = Vec::new();
    for &v in &path[1..] {
        unknowns.push(FunctionalTerm::XSum { v, coeff: 1 });
    }
    for &v in &path {
        unknowns.push(FunctionalTerm::YConst { v, coeff: 1 });
    }
    let fixed = FunctionalTerm::XSum { v: c1, coeff: 1 };
    let rows: Vec<Vec<u64>> = images
        .iter()
        .map(|img| {
            let mut row: Vec<u64> = unknowns.iter().map(|u| u.eval(img, p)).collect();
            row.push((p - fixed.eval(img, p)) % p);
            row
        })
        .collect();
    let Some(sol) = solve_mod(&rows, unknowns.len(), p) else {
        return Ok(None);
    };
    let mut functional = vec![fixed];
    for (u, x) in unknowns.iter().zip(sol) {
        if x == 0 {
            continue;
        }
        functional.push(match *u {
            FunctionalTerm::XSum { v, .. } => FunctionalTerm::XSum { v, coeff: x },
            FunctionalTerm::YConst { v, .. } => FunctionalTerm::YConst { v, coeff: x },
        });
    }
    let value = |img: &[(Coord, u64)]| functional.iter().fold(0, |a, f| (a + f.eval(img, p)) % p);
    if images.iter().any(|img| value(img) != 0) {
        return Err(Error::Unsupported("solved functional fails on a coboundary".into()));
    }
    let target = Coord { v: c1 as u32, dir: 0, pole: false, e: 0, t: 0 };
    let tv = value(&[(target, 1)]);
    if tv == 0 {
        return Ok(None);
    }
    let scale = inv_mod(tv, p);
    for f in &mut functional {
        match f {
            FunctionalTerm::XSum { coeff, .. } | FunctionalTerm::YConst { coeff, .. } => *coeff = *coeff * scale % p,
        }
    }
    Ok(Some(DTildeObstruction {
        p,
        centers: (c1, c2),
        middle,
        multiplicities: md.z.clone(),
        functional,
        target,
        grid,
        generators_checked: images.len(),
    }))
}

/// Trivalent vertices and the chain between them, first trivalent vertex first.
fn center_path(g: &DualGraph) -> Vec<usize> {
    let deg = g.degrees();
    let adj = g.adjacency();
    let c1 = (0..g.len()).find(|&v| deg[v] == 3).unwrap();
    let mut prev = vec![usize::MAX; g.len()];
    let mut queue = std::collections::VecDeque::from([c1]);
    prev[c1] = c1;
    let mut c2 = c1;
    while let Some(v) = queue.pop_front() {
        if v != c1 && deg[v] == 3 {
            c2 = v;
            break;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![c2];
    while *path.last().unwrap() != c1 {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// Solves the augmented system `rows` (last entry is the right-hand side) over F_p.
fn solve_mod(rows: &[Vec<u64>], n: usize, p: u64) -> Option<Vec<u64>> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in rows {
        let mut r = r.clone();
        for (piv, b) in &basis {
            let f = r[*piv];
            if f != 0 {
                for j in 0..=n {
                    r[j] = (r[j] + (p - f) * b[j]) % p;
                }
            }
        }
        let Some(piv) = (0..n).find(|&j| r[j] != 0) else {
            if r[n] != 0 {
                return None;
            }
            continue;
        };
        let inv = inv_mod(r[piv], p);
        for x in r.iter_mut() {
            *x = *x * inv % p;
        }
        for (_, b) in basis.iter_mut() {
            let f = b[piv];
            if f != 0 {
                for j in 0..=n {
                    b[j] = (b[j] + (p - f) * r[j]) % p;
                }
            }
        }
        basis.push((piv, r));
    }
    let mut x = vec![0; n];
    for (piv, b) in &basis {
        x[*piv] = b[n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dtilde() -> DualGraph {
        let mut g = DualGraph::new();
        for (id, b) in [("e1", 2), ("e2", 3), ("e3", 2), ("e4", 2), ("e5", 2), ("e6", 2), ("e7", 2)] {
            g.add_vertex(id, b, 0);
        }
        for (a, b) in [(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)] {
            g.add_edge(a, b);
        }
        g
    }

    #[test]
    fn solver_reduced_form() {
        // x + y = 1, y = 2 over F_5
        let rows = vec![vec![1, 1, 1], vec![0, 1, 2]];
        assert_eq!(solve_mod(&rows, 2, 5), Some(vec![4, 2]));
        assert_eq!(solve_mod(&[vec![1, 1], vec![2, 1]], 1, 5), None);
    }

    #[test]
    fn dtilde_witness_at_three() {
        let g = dtilde();
        let ob = dtilde_obstruction(&g, 3).unwrap().expect("obstruction at p=3");
        assert_eq!(ob.multiplicities, vec![28, 20, 28, 16, 16, 16, 16]);
        assert_eq!(ob.centers, (0, 2));
        assert_eq!(ob.middle, vec![1]);
        assert!(ob.generators_checked > 0);
        assert_eq!(
            ob.functional,
            vec![
                FunctionalTerm::XSum { v: 0, coeff: 1 },
                FunctionalTerm::XSum { v: 2, coeff: 2 },
                FunctionalTerm::YConst { v: 1, coeff: 2 },
            ]
        );
    }

    #[test]
    fn dtilde_none_at_seven() {
        assert!(dtilde_obstruction(&dtilde(), 7).unwrap().is_none());
    }

    #[test]
    fn rejects_star() {
        let g = DualGraph::star(2, &[vec![2], vec![2], vec![2]]);
        assert!(dtilde_obstruction(&g, 3).is_err());
    }
}
