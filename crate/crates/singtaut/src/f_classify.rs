//! F-regularity / F-purity classification of rational graphs in characteristic p.

use crate::arith::{modp, require_prime, Binom};
use crate::error::{Error, Result};
use crate::graph_core::{
    classify_shape, intersection_matrix, is_negative_definite, is_rational_graph, DualGraph, GraphShape, StarData,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FPureCase {
    Type333,
    Type236,
    Type244,
    Type2222 { lambda: u64 },
    DTilde,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FClassification {
    FRegular,
    FPureNonRDP(FPureCase),
    RDPEquationDependent { family: String, primes: Vec<u64> },
    NotFPure(String),
    NotApplicable(String),
}

impl FClassification {
    /// Short human-readable justification.
    pub fn clause(&self) -> String {
        match self {
            FClassification::FRegular => "F-regular (chain, or star (2,2,d)/(2,3,3)/(2,3,4)/(2,3,5) in allowed characteristic)".into(),
            FClassification::FPureNonRDP(c) => match c {
                FPureCase::Type333 => "F-pure, not F-regular: star (3,3,3) with p = 1 mod 3".into(),
                FPureCase::Type236 => "F-pure, not F-regular: star (2,3,6) with p = 1 mod 3".into(),
                FPureCase::Type244 => "F-pure, not F-regular: star (2,4,4) with p = 1 mod 4".into(),
                FPureCase::Type2222 { lambda } => {
                    format!("F-pure, not F-regular: star (2,2,2,2), p odd, cross-ratio {lambda} satisfies the Legendre condition")
                }
                FPureCase::DTilde => "F-pure, not F-regular: D-tilde shape with p != 2".into(),
            },
            FClassification::RDPEquationDependent { family, primes } => {
                format!("rational double point {family} in characteristic {primes:?}: F-purity depends on the equation")
            }
            FClassification::NotFPure(r) => format!("not F-pure: {r}"),
            FClassification::NotApplicable(r) => format!("not applicable: {r}"),
        }
    }
}

/// Fourth point `lambda` on a line already marked at 0, -1 and infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRatio {
    pub lambda: u64,
    pub p: u64,
}

impl CrossRatio {
    pub fn new(lambda: i64, p: u64) -> Result<Self> {
        require_prime(p)?;
        let l = modp(lambda, p);
        if l == 0 || l == p - 1 {
            return Err(Error::Precondition(format!("cross-ratio {l} collides with 0 or -1 mod {p}")));
        }
        Ok(CrossRatio { lambda: l, p })
    }
}

fn preconditions(g: &DualGraph) -> std::result::Result<GraphShape, String> {
    if g.is_empty() {
        return Err("empty graph".into());
    }
    let shape = classify_shape(g).map_err(|e| e.to_string())?;
    if !is_negative_definite(&intersection_matrix(g)) {
        return Err("not negative definite".into());
    }
    if !is_rational_graph(g).map_err(|e| e.to_string())? {
        return Err("not rational".into());
    }
    Ok(shape)
}

fn three_branch_type(s: &StarData) -> Option<(i64, i64, i64)> {
    match s.type_tuple[..] {
        [a, b, c] => Some((a, b, c)),
        _ => None,
    }
}

fn regular_star(s: &StarData, p: u64) -> bool {
    match three_branch_type(s) {
        Some((2, 2, _)) => p != 2,
        Some((2, 3, 3)) | Some((2, 3, 4)) => p != 2 && p != 3,
        Some((2, 3, 5)) => p != 2 && p != 3 && p != 5,
        _ => false,
    }
}

pub fn hara_f_regular(g: &DualGraph, p: u64) -> Result<bool> {
    require_prime(p)?;
    match preconditions(g).map_err(Error::Precondition)? {
        GraphShape::Chain => Ok(true),
        GraphShape::Star(s) => Ok(regular_star(&s, p)),
        _ => Ok(false),
    }
}

/// `sum_k C(m,k)^2 (-lambda)^k != 0` with `m = (p-1)/2`.
pub fn condition_star(lambda: u64, p: u64) -> Result<bool> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Precondition("the Legendre condition needs an odd prime".into()));
    }
    let m = (p - 1) / 2;
    let bn = Binom::new(p);
    let neg = (p - lambda % p) % p;
    let mut pw = 1u64;
    let mut acc = 0u64;
    for k in 0..=m {
        let c = bn.get(m, k);
        acc = (acc + c * c % p * pw) % p;
        pw = pw * neg % p;
    }
    Ok(acc != 0)
}

/// ADE label for an all-(-2) rational double point graph.
pub fn ade_label(g: &DualGraph) -> Option<String> {
    if g.vertices.iter().any(|v| v.b != 2 || v.genus != 0) {
        return None;
    }
    match classify_shape(g).ok()? {
        GraphShape::Chain => Some(format!("A{}", g.len())),
        GraphShape::Star(s) => match three_branch_type(&s)? {
            (2, 2, _) => Some(format!("D{}", g.len())),
            (2, 3, 3) => Some("E6".into()),
            (2, 3, 4) => Some("E7".into()),
            (2, 3, 5) => Some("E8".into()),
            _ => None,
        },
        _ => None,
    }
}

/// Two trivalent vertices joined by a chain, each carrying two leaves; returns `n` for `D~_{n+3}`.
pub fn recognize_dtilde(g: &DualGraph) -> Option<usize> {
    if g.len() < 6 || !matches!(classify_shape(g), Ok(GraphShape::Other(ref r)) if r == "two centers") {
        return None;
    }
    let deg = g.degrees();
    let adj = g.adjacency();
    let centers: Vec<usize> = (0..g.len()).filter(|&v| deg[v] >= 3).collect();
    for &c in &centers {
        if deg[c] != 3 || adj[c].iter().filter(|&&w| deg[w] == 1).count() != 2 {
            return None;
        }
    }
    // Everything else lies on the path between the centers.
    if (0..g.len()).filter(|&v| deg[v] == 1).count() != 4 {
        return None;
    }
    Some(g.len() - 4)
}

pub fn hara_f_pure(g: &DualGraph, p: u64, lambda: Option<CrossRatio>) -> Result<FClassification> {
    require_prime(p)?;
    let shape = match preconditions(g) {
        Ok(s) => s,
        Err(r) => return Ok(FClassification::NotApplicable(r)),
    };
    let star = match &shape {
        GraphShape::Chain => return Ok(FClassification::FRegular),
        GraphShape::Star(s) => Some(s),
        _ => None,
    };
    if let Some(s) = star {
        if regular_star(s, p) {
            return Ok(FClassification::FRegular);
        }
        match s.type_tuple[..] {
            [3, 3, 3] if p % 3 == 1 => return Ok(FClassification::FPureNonRDP(FPureCase::Type333)),
            [2, 3, 6] if p % 3 == 1 => return Ok(FClassification::FPureNonRDP(FPureCase::Type236)),
            [2, 4, 4] if p % 4 == 1 => return Ok(FClassification::FPureNonRDP(FPureCase::Type244)),
            [2, 2, 2, 2] if p != 2 => {
                let l = lambda.ok_or_else(|| Error::Precondition("type (2,2,2,2) needs a cross-ratio".into()))?;
                if l.p != p {
                    return Err(Error::Precondition("cross-ratio lives in a different field".into()));
                }
                return Ok(if condition_star(l.lambda, p)? {
                    FClassification::FPureNonRDP(FPureCase::Type2222 { lambda: l.lambda })
                } else {
                    FClassification::NotFPure(format!("cross-ratio {} fails the Legendre condition", l.lambda))
                });
            }
            _ => {}
        }
    }
    if recognize_dtilde(g).is_some() && p != 2 {
        return Ok(FClassification::FPureNonRDP(FPureCase::DTilde));
    }
    if let Some(label) = ade_label(g) {
        let primes: Vec<u64> = match label.as_bytes()[0] {
            b'D' => vec![2],
            b'E' if label == "E8" => vec![2, 3, 5],
            b'E' => vec![2, 3],
            _ => vec![],
        };
        if primes.contains(&p) {
            return Ok(FClassification::RDPEquationDependent { family: label, primes });
        }
    }
    let what = match &shape {
        GraphShape::Star(s) => format!("star of type {:?} in characteristic {p}", s.type_tuple),
        GraphShape::Other(r) => format!("{r} in characteristic {p}"),
        _ => format!("characteristic {p}"),
    };
    Ok(FClassification::NotFPure(what))
}

/// The six cross-ratio images of `lambda` for marked points `0, -1, lambda, inf`.
pub fn cross_ratio_orbit(lambda: u64, p: u64) -> Vec<u64> {
    use crate::arith::inv_mod;
    // mu = -lambda puts the points at 0, 1, mu, inf.
    let mu = (p - lambda % p) % p;
    let one_minus = |x: u64| (1 + p - x) % p;
    let inv = |x: u64| inv_mod(x, p);
    let images = [
        mu,
        inv(mu),
        one_minus(mu),
        inv(one_minus(mu)),
        mu * inv((mu + p - 1) % p) % p,
        (mu + p - 1) % p * inv(mu) % p,
    ];
    let mut out: Vec<u64> = images.iter().map(|&m| (p - m) % p).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Admissible cross-ratios in F_p satisfying the Legendre condition (sum_k C(m,k)^2 (-lambda)^k != 0, m=(p-1)/2), grouped into orbits.
pub fn moduli_family_report(g: &DualGraph, p: u64) -> Result<Vec<Vec<u64>>> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Precondition("moduli report needs an odd prime".into()));
    }
    match classify_shape(g)? {
        GraphShape::Star(s) if s.type_tuple == [2, 2, 2, 2] => {}
        _ => return Err(Error::Precondition("graph is not a (2,2,2,2) star".into())),
    }
    let mut seen = vec![false; p as usize];
    let mut orbits = Vec::new();
    for l in 1..p - 1 {
        if seen[l as usize] || !condition_star(l, p)? {
            continue;
        }
        let orb: Vec<u64> = cross_ratio_orbit(l, p).into_iter().filter(|&x| x != 0 && x != p - 1).collect();
        for &x in &orb {
            seen[x as usize] = true;
        }
        orbits.push(orb);
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> DualGraph {
        DualGraph::star(2, &[vec![2], vec![2, 2], vec![2, 2, 2, 2]])
    }

    fn dtilde() -> DualGraph {
        let mut g = DualGraph::chain(&[2, 3, 2]);
        for (k, id) in ["e4", "e5", "e6", "e7"].iter().enumerate() {
            let v = g.add_vertex(id, 2, 0);
            g.add_edge(if k < 2 { 0 } else { 2 }, v);
        }
        g
    }

    #[test]
    fn e8_regular_by_characteristic() {
        assert!(hara_f_regular(&e8(), 7).unwrap());
        assert!(!hara_f_regular(&e8(), 5).unwrap());
        assert_eq!(
            hara_f_pure(&e8(), 5, None).unwrap(),
            FClassification::RDPEquationDependent { family: "E8".into(), primes: vec![2, 3, 5] }
        );
    }

    #[test]
    fn chains_regular_everywhere() {
        assert!(hara_f_regular(&DualGraph::chain(&[3, 2, 5]), 2).unwrap());
    }

    #[test]
    fn non_rdp_stars() {
        let g244 = DualGraph::star(3, &[vec![2], vec![4], vec![4]]);
        assert_eq!(hara_f_pure(&g244, 5, None).unwrap(), FClassification::FPureNonRDP(FPureCase::Type244));
        let g236 = DualGraph::star(3, &[vec![2], vec![3], vec![6]]);
        assert!(matches!(hara_f_pure(&g236, 5, None).unwrap(), FClassification::NotFPure(_)));
        assert_eq!(hara_f_pure(&g236, 7, None).unwrap(), FClassification::FPureNonRDP(FPureCase::Type236));
    }

    #[test]
    fn condition_star_values() {
        assert!(!condition_star(1, 3).unwrap());
        assert!(condition_star(2, 3).unwrap());
        assert!(condition_star(1, 5).unwrap());
        assert!(condition_star(1, 2).is_err());
    }

    #[test]
    fn dtilde_recognition() {
        assert_eq!(recognize_dtilde(&dtilde()), Some(3));
        assert_eq!(recognize_dtilde(&e8()), None);
        let mut g = DualGraph::chain(&[2, 2, 2]);
        for (k, id) in ["a", "b", "c", "d"].iter().enumerate() {
            let v = g.add_vertex(id, 2, 0);
            g.add_edge(if k < 3 { 0 } else { 2 }, v);
        }
        assert_eq!(recognize_dtilde(&g), None);
        assert_eq!(hara_f_pure(&dtilde(), 3, None).unwrap(), FClassification::FPureNonRDP(FPureCase::DTilde));
    }

    #[test]
    fn moduli_reports() {
        let g = DualGraph::star(3, &[vec![2], vec![2], vec![2], vec![2]]);
        assert_eq!(moduli_family_report(&g, 3).unwrap(), Vec::<Vec<u64>>::new());
        assert_eq!(moduli_family_report(&g, 5).unwrap(), vec![vec![1, 2, 3]]);
        assert!(moduli_family_report(&g, 2).is_err());
        let l = CrossRatio::new(2, 7).unwrap();
        assert!(matches!(hara_f_pure(&g, 7, Some(l)).unwrap(), FClassification::FPureNonRDP(_)));
        assert!(hara_f_pure(&g, 7, None).is_err());
        assert!(CrossRatio::new(-1, 7).is_err());
    }

    #[test]
    fn orbits_preserve_condition() {
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            for l in 1..p - 1 {
                let c = condition_star(l, p).unwrap();
                for x in cross_ratio_orbit(l, p) {
                    if x != 0 && x != p - 1 {
                        assert_eq!(condition_star(x, p).unwrap(), c, "p={p} l={l} x={x}");
                    }
                }
            }
        }
    }
}
