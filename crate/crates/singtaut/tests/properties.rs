use num_rational::Ratio;
use proptest::prelude::*;
use singtaut::f_classify::condition_star;
use singtaut::fedder_lab::{fedder_is_f_pure, FpPoly};
use singtaut::graph_core::{branch_fraction, intersection_matrix, is_negative_definite, DualGraph};
use std::collections::HashMap;

/// Laplace expansion along the first row.
fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn chain_matrix(bs: &[u32]) -> Vec<Vec<i64>> {
    let n = bs.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { bs[i] as i64 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn branch_fraction_matches_determinants(bs in prop::collection::vec(2u32..=9, 1..=7)) {
        let (a, b) = branch_fraction(&bs).unwrap();
        prop_assert_eq!(a, det(&chain_matrix(&bs)));
        prop_assert_eq!(b, det(&chain_matrix(&bs[1..])));
        prop_assert!(0 < b && b < a);
        prop_assert_eq!(gcd(a, b), 1);
    }
}

/// Negative definite iff elimination over Q meets only negative pivots.
fn elimination_definite(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut w: Vec<Vec<Ratio<i128>>> = m.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect()).collect();
    for k in 0..n {
        let piv = w[k][k];
        if piv >= Ratio::from_integer(0) {
            return false;
        }
        for i in k + 1..n {
            let f = w[i][k] / piv;
            for j in k..n {
                let d = f * w[k][j];
                w[i][j] -= d;
            }
        }
    }
    true
}

fn tree_strategy() -> impl Strategy<Value = DualGraph> {
    (1usize..=8)
        .prop_flat_map(|n| (prop::collection::vec(1u32..=4, n), prop::collection::vec(any::<prop::sample::Index>(), n)))
        .prop_map(|(bs, parents)| {
            let mut g = DualGraph::new();
            for (i, &b) in bs.iter().enumerate() {
                g.add_vertex(&format!("v{i}"), b, 0);
                if i > 0 {
                    g.add_edge(parents[i].index(i), i);
                }
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn definiteness_matches_elimination(g in tree_strategy()) {
        let m = intersection_matrix(&g);
        prop_assert_eq!(is_negative_definite(&m), elimination_definite(&m.m));
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn condition_star_root_count() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let m = (p - 1) / 2;
        let mut roots = 0;
        for lambda in 0..p {
            let neg = (p - lambda) % p;
            let val = (0..=m).fold(0u64, |acc, k| {
                let c = binom(m, k) % p;
                let mut pw = 1;
                for _ in 0..k {
                    pw = pw * neg % p;
                }
                (acc + c * c % p * pw) % p
            });
            assert_eq!(condition_star(lambda, p).unwrap(), val != 0, "p={p} lambda={lambda}");
            roots += (val == 0) as u64;
        }
        assert!(roots <= m, "p={p}: {roots} roots");
    }
}

/// `f^(p-1)` by repeated naive multiplication; F-pure iff some monomial has all exponents below p.
fn fedder_oracle(terms: &[([u32; 3], u64)], p: u64) -> bool {
    let mut acc: HashMap<[u32; 3], u64> = HashMap::from([([0, 0, 0], 1)]);
    for _ in 0..p - 1 {
        let mut next: HashMap<[u32; 3], u64> = HashMap::new();
        for (e, c) in &acc {
            for (f, d) in terms {
                let k = [e[0] + f[0], e[1] + f[1], e[2] + f[2]];
                let v = next.entry(k).or_insert(0);
                *v = (*v + c * d) % p;
            }
        }
        acc = next;
    }
    acc.iter().any(|(e, &c)| c != 0 && e.iter().all(|&x| (x as u64) < p))
}

fn poly_strategy() -> impl Strategy<Value = (u64, Vec<([u32; 3], u64)>)> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_flat_map(|p| {
        let exp = [0u32..=4, 0u32..=4, 0u32..=4].prop_filter("no constant", |e| e.iter().any(|&x| x > 0));
        (Just(p), prop::collection::vec((exp, 1..p), 1..=4))
    })
}

fn build(p: u64, terms: &[([u32; 3], u64)]) -> FpPoly {
    let mut f = FpPoly::zero(p);
    for &(e, c) in terms {
        f.add_term(e, c);
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fedder_invariance_and_oracle((p, terms) in poly_strategy(), units in prop::collection::vec(1u64..1000, 3), perm in Just([0usize, 1, 2]).prop_shuffle()) {
        let f = build(p, &terms);
        prop_assume!(!f.is_zero());
        let base = fedder_is_f_pure(&f).unwrap();
        let merged: Vec<([u32; 3], u64)> = f.terms.iter().map(|(e, c)| (*e, *c)).collect();
        prop_assert_eq!(base, fedder_oracle(&merged, p));
        let u: Vec<u64> = units.iter().map(|x| 1 + x % (p - 1).max(1)).collect();
        let g = f.rescale(u[0] % p, u[1] % p, u[2] % p).permute([perm[0], perm[1], perm[2]]);
        prop_assert_eq!(fedder_is_f_pure(&g).unwrap(), base);
    }
}
