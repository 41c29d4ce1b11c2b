//! Anti-ample cycle, computation sequence, and the significant multiplicity.

use crate::arith::require_prime;
use crate::error::{Error, Result};
use crate::graph_core::{dot_all, fundamental_cycle, intersection_matrix, is_negative_definite, DualGraph};
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityData {
    pub z_tilde: Vec<i64>,
    pub sequence: Vec<usize>,
    pub tau: i64,
    pub lambda_weight: i64,
    pub nu: i64,
    pub z: Vec<i64>,
}

/// Solves `a x = rhs` exactly; `None` if singular.
pub fn solve_rational(a: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut w: Vec<Vec<Q>> = a
        .iter()
        .zip(rhs)
        .map(|(row, &r)| row.iter().map(|&x| Q::from_integer(x as i128)).chain([Q::from_integer(r as i128)]).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| w[r][col] != Q::from_integer(0))?;
        w.swap(col, piv);
        let pv = w[col][col];
        for j in col..=n {
            w[col][j] /= pv;
        }
        for r in 0..n {
            if r != col && w[r][col] != Q::from_integer(0) {
                let f = w[r][col];
                for j in col..=n {
                    let d = f * w[col][j];
                    w[r][j] -= d;
                }
            }
        }
    }
    Some(w.into_iter().map(|row| row[n]).collect())
}

fn check_anti_ample(g: &DualGraph, z: &[i64]) -> bool {
    let m = intersection_matrix(g);
    z.iter().all(|&c| c > 0) && dot_all(&m, z).iter().all(|&d| d < 0)
}

pub fn anti_ample_cycle(g: &DualGraph, p: u64) -> Result<Vec<i64>> {
    require_prime(p)?;
    let zf = fundamental_cycle(g)?;
    let m = intersection_matrix(g);
    let v = solve_rational(&m.m, &vec![-1; g.len()]).ok_or(Error::NotNegativeDefinite)?;
    let lcd = v.iter().fold(1i128, |acc, q| acc.lcm(q.denom()));
    let mut z: Vec<i64> = v.iter().map(|q| (q.numer() * (lcd / q.denom())) as i64).collect();
    if !check_anti_ample(g, &z) {
        return Err(Error::Perturbation("seed solution is not strictly positive".into()));
    }
    let pi = p as i64;
    // Adding Z_f keeps every Z.E_i negative since Z_f.E_i <= 0.
    for _ in 0..p {
        if z.iter().all(|c| c % pi != 0) {
            return Ok(z);
        }
        z = z.iter().zip(&zf).map(|(c, e)| c + e).collect();
    }
    // Fallback: scale by p and add a coefficientwise bump of Z_f that avoids multiples of p.
    let bump: Vec<i64> = zf.iter().map(|&c| if c % pi == 0 { c + 1 } else { c }).collect();
    let base = z.clone();
    let mut scale = 1i64;
    for _ in 0..8 {
        scale = scale.checked_mul(pi).ok_or(Error::Overflow("anti-ample repair"))?;
        z = base
            .iter()
            .zip(&bump)
            .map(|(&c, &e)| c.checked_mul(scale).and_then(|x| x.checked_add(e)))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow("anti-ample repair"))?;
        if check_anti_ample(g, &z) {
            return Ok(z);
        }
    }
    Err(Error::Perturbation("no anti-ample cycle with coefficients prime to p found".into()))
}

fn greedy_with_threshold(m: &[Vec<i64>], zt: &[i64], limit: i64) -> Option<(Vec<usize>, i64)> {
    let n = zt.len();
    let mut cur = vec![0i64; n];
    let mut dots = vec![0i64; n];
    let total: i64 = zt.iter().sum();
    let mut seq = Vec::with_capacity(total as usize);
    let mut tau = i64::MIN;
    for _ in 0..total {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if cur[i] < zt[i] && dots[i] <= limit {
                best = match best {
                    // smaller (cur_i+1)/z_i first
                    Some(j) if (cur[j] + 1) * zt[i] <= (cur[i] + 1) * zt[j] => Some(j),
                    _ => Some(i),
                };
            }
        }
        let i = best?;
        tau = tau.max(dots[i]);
        seq.push(i);
        cur[i] += 1;
        for (k, d) in dots.iter_mut().enumerate() {
            *d += m[k][i];
        }
    }
    Some((seq, tau))
}

/// Deterministic sequence from 0 to `z_tilde`, searching the smallest step threshold for which
/// a proportional-fill greedy completes.
pub fn computation_sequence(g: &DualGraph, z_tilde: &[i64]) -> Result<Vec<usize>> {
    if z_tilde.len() != g.len() || z_tilde.iter().any(|&c| c < 0) {
        return Err(Error::InvalidCycle("cycle must be effective and match the graph".into()));
    }
    let m = intersection_matrix(g).m;
    let cap: i64 = (0..g.len())
        .map(|i| (0..g.len()).filter(|&j| j != i).map(|j| m[i][j].max(0) * z_tilde[j]).sum::<i64>())
        .max()
        .unwrap_or(0);
    for limit in 0..=cap {
        if let Some((seq, _)) = greedy_with_threshold(&m, z_tilde, limit) {
            return Ok(seq);
        }
    }
    Ok(greedy_with_threshold(&m, z_tilde, i64::MAX).expect("unrestricted greedy always completes").0)
}

/// `max_k Z_k . E_{i_k}` along the sequence.
pub fn sequence_tau(g: &DualGraph, sequence: &[usize]) -> i64 {
    let m = intersection_matrix(g).m;
    let mut dots = vec![0i64; g.len()];
    let mut tau = i64::MIN;
    for &i in sequence {
        tau = tau.max(dots[i]);
        for (k, d) in dots.iter_mut().enumerate() {
            *d += m[k][i];
        }
    }
    tau
}

pub fn lambda_weight(g: &DualGraph) -> i64 {
    g.vertices
        .iter()
        .map(|v| {
            let gg = v.genus as i64;
            0.max(2 * (2 * gg - 2)).max(2 * gg - 2 + v.b as i64)
        })
        .max()
        .unwrap_or(0)
}

pub fn significant_multiplicity(g: &DualGraph, p: u64, z_tilde: &[i64], sequence: &[usize]) -> Result<MultiplicityData> {
    require_prime(p)?;
    let mut counts = vec![0i64; g.len()];
    for &i in sequence {
        if i >= g.len() {
            return Err(Error::InvalidCycle("sequence index out of range".into()));
        }
        counts[i] += 1;
    }
    if counts != z_tilde {
        return Err(Error::InvalidCycle("sequence does not sum to the cycle".into()));
    }
    let tau = sequence_tau(g, sequence);
    if tau < 1 {
        return Err(Error::TauTooSmall(tau));
    }
    let lambda = lambda_weight(g);
    let pi = p as i64;
    let mut nu = tau + lambda + 1;
    while nu % pi == 0 {
        nu += 1;
    }
    let z: Vec<i64> = z_tilde.iter().map(|&c| c * nu).collect();
    if let Some(i) = z.iter().position(|c| c % pi == 0) {
        return Err(Error::ZNotCoprime(g.vertices[i].id.clone()));
    }
    Ok(MultiplicityData { z_tilde: z_tilde.to_vec(), sequence: sequence.to_vec(), tau, lambda_weight: lambda, nu, z })
}

/// Full pipeline: anti-ample cycle, sequence, multiplicities.
pub fn multiplicity_data(g: &DualGraph, p: u64) -> Result<MultiplicityData> {
    let zt = anti_ample_cycle(g, p)?;
    let seq = computation_sequence(g, &zt)?;
    significant_multiplicity(g, p, &zt, &seq)
}

/// Multiplicities from a user-supplied anti-ample cycle, validated like a computed one.
pub fn multiplicity_data_with(g: &DualGraph, p: u64, z_tilde: &[i64]) -> Result<MultiplicityData> {
    require_prime(p)?;
    if z_tilde.len() != g.len() {
        return Err(Error::InvalidCycle(format!("expected {} coefficients", g.len())));
    }
    if !is_negative_definite(&intersection_matrix(g)) {
        return Err(Error::NotNegativeDefinite);
    }
    if !check_anti_ample(g, z_tilde) {
        return Err(Error::InvalidCycle("cycle is not anti-ample".into()));
    }
    if let Some(i) = z_tilde.iter().position(|&c| c % p as i64 == 0) {
        return Err(Error::InvalidCycle(format!("coefficient at `{}` divisible by p", g.vertices[i].id)));
    }
    let seq = computation_sequence(g, z_tilde)?;
    significant_multiplicity(g, p, z_tilde, &seq)
}

/// Re-checks every invariant of a multiplicity record.
pub fn validate(g: &DualGraph, p: u64, md: &MultiplicityData) -> Result<()> {
    let pi = p as i64;
    if !check_anti_ample(g, &md.z_tilde) {
        return Err(Error::InvalidCycle("z_tilde not anti-ample".into()));
    }
    if md.z_tilde.iter().any(|c| c % pi == 0) || md.z.iter().any(|c| *c <= 0 || c % pi == 0) {
        return Err(Error::InvalidCycle("coefficient divisible by p".into()));
    }
    if md.z.iter().zip(&md.z_tilde).any(|(a, b)| *a != md.nu * b) {
        return Err(Error::InvalidCycle("z != nu * z_tilde".into()));
    }
    if sequence_tau(g, &md.sequence) != md.tau || md.lambda_weight != lambda_weight(g) {
        return Err(Error::InvalidCycle("tau or lambda inconsistent".into()));
    }
    let lo = md.tau + md.lambda_weight + 1;
    let minimal = md.nu >= lo && md.nu % pi != 0 && (lo..md.nu).all(|k| k % pi == 0);
    if !minimal {
        return Err(Error::InvalidCycle("nu is not minimal".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::DualGraph;

    fn dtilde() -> DualGraph {
        let mut g = DualGraph::chain(&[2, 3, 2]);
        for (k, id) in ["e4", "e5", "e6", "e7"].iter().enumerate() {
            let v = g.add_vertex(id, 2, 0);
            g.add_edge(if k < 2 { 0 } else { 2 }, v);
        }
        g
    }

    #[test]
    fn a2_cycles() {
        let g = DualGraph::chain(&[2, 2]);
        assert_eq!(anti_ample_cycle(&g, 3).unwrap(), vec![1, 1]);
        assert_eq!(anti_ample_cycle(&g, 2).unwrap(), vec![1, 1]);
        let seq = computation_sequence(&g, &[1, 1]).unwrap();
        assert_eq!(seq, vec![0, 1]);
        let md = significant_multiplicity(&g, 3, &[1, 1], &seq).unwrap();
        assert_eq!((md.tau, md.lambda_weight, md.nu, md.z.clone()), (1, 0, 2, vec![2, 2]));
        assert_eq!(significant_multiplicity(&g, 2, &[1, 1], &seq).unwrap().nu, 3);
    }

    #[test]
    fn single_vertex_tau_zero() {
        let g = DualGraph::chain(&[2]);
        let z = anti_ample_cycle(&g, 3).unwrap();
        let seq = computation_sequence(&g, &z).unwrap();
        assert_eq!(seq, vec![0]);
        assert_eq!(significant_multiplicity(&g, 3, &z, &seq), Err(Error::TauTooSmall(0)));
    }

    #[test]
    fn lambda_from_max_b() {
        let g = DualGraph::chain(&[2, 5, 3]);
        assert_eq!(lambda_weight(&g), 3);
    }

    #[test]
    fn dtilde_example_multiplicities() {
        let g = dtilde();
        let zt = anti_ample_cycle(&g, 3).unwrap();
        assert_eq!(zt, vec![7, 5, 7, 4, 4, 4, 4]);
        let md = multiplicity_data(&g, 3).unwrap();
        assert_eq!(md.nu, 4);
        assert_eq!(md.z, vec![28, 20, 28, 16, 16, 16, 16]);
        validate(&g, 3, &md).unwrap();
    }

    #[test]
    fn e8_seed_and_tau() {
        let g = DualGraph::star(2, &[vec![2], vec![2, 2], vec![2, 2, 2, 2]]);
        let md = multiplicity_data(&g, 7).unwrap();
        assert_eq!(md.z_tilde, vec![141, 71, 95, 48, 115, 88, 60, 31]);
        assert_eq!(md.tau, 1);
        assert_eq!(md.nu, 2);
        validate(&g, 7, &md).unwrap();
    }

    #[test]
    fn repair_when_p_divides_seed() {
        // E8 seed has 135 and 110 divisible by 5.
        let g = DualGraph::star(2, &[vec![2], vec![2, 2], vec![2, 2, 2, 2]]);
        assert_eq!(anti_ample_cycle(&g, 31).unwrap(), vec![135, 68, 91, 46, 110, 84, 57, 29]);
        let z = anti_ample_cycle(&g, 5).unwrap();
        assert!(z.iter().all(|c| c % 5 != 0));
        let md = multiplicity_data(&g, 5).unwrap();
        validate(&g, 5, &md).unwrap();
    }

    #[test]
    fn override_is_validated() {
        let g = DualGraph::chain(&[2, 2]);
        assert!(multiplicity_data_with(&g, 3, &[1, 1]).is_ok());
        assert!(multiplicity_data_with(&g, 3, &[1, 0]).is_err());
        assert!(multiplicity_data_with(&g, 3, &[3, 3]).is_err());
    }
}
