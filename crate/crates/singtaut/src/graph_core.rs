//! Weighted dual graphs: parsing, intersection data, shapes and branch invariants.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    /// Self-intersection is `-b`.
    pub b: u32,
}

/// Vertices in file order; edges as a multiset of index pairs (loops allowed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionMatrix {
    pub m: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchProfile {
    /// Self-intersection magnitudes, ordered from the center outward.
    pub bs: Vec<u32>,
    pub alpha: i64,
    pub beta: i64,
    /// Vertex indices matching `bs`.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarData {
    pub center: usize,
    pub center_id: String,
    pub b0: u32,
    pub branches: Vec<BranchProfile>,
    pub type_tuple: Vec<i64>,
    pub alpha_prime: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphShape {
    Empty,
    Chain,
    Star(StarData),
    Other(String),
}

impl DualGraph {
    pub fn new() -> Self {
        DualGraph { vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn add_vertex(&mut self, id: &str, b: u32, genus: u32) -> usize {
        self.vertices.push(Vertex { id: id.to_string(), genus, b });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    /// Genus-0 chain with the given self-intersection magnitudes; ids `e1`, `e2`, ...
    pub fn chain(bs: &[u32]) -> Self {
        let mut g = DualGraph::new();
        for (i, &b) in bs.iter().enumerate() {
            g.add_vertex(&format!("e{}", i + 1), b, 0);
            if i > 0 {
                g.add_edge(i - 1, i);
            }
        }
        g
    }

    /// Genus-0 star; branch `i` is listed center-outward and gets ids `b{i}_{j}`.
    pub fn star(b0: u32, branches: &[Vec<u32>]) -> Self {
        let mut g = DualGraph::new();
        let c = g.add_vertex("c", b0, 0);
        for (i, br) in branches.iter().enumerate() {
            let mut prev = c;
            for (j, &b) in br.iter().enumerate() {
                let v = g.add_vertex(&format!("b{}_{}", i + 1, j + 1), b, 0);
                g.add_edge(prev, v);
                prev = v;
            }
        }
        g
    }

    /// Incident edge endpoints per vertex; loops count twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Neighbor lists (with multiplicity, loops excluded).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Serializes back into the line-oriented graph format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            if v.genus == 0 {
                out.push_str(&format!("vertex {} b={}\n", v.id, v.b));
            } else {
                out.push_str(&format!("vertex {} b={} genus={}\n", v.id, v.b, v.genus));
            }
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("edge {} {}\n", self.vertices[a].id, self.vertices[b].id));
        }
        out
    }
}

impl Default for DualGraph {
    fn default() -> Self {
        Self::new()
    }
}

fn is_ident(s: &str) -> bool {
    let mut ch = s.chars();
    match ch.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits a line into (1-based column, token) pairs.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

pub fn parse_graph(text: &str) -> Result<DualGraph> {
    let mut g = DualGraph::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let syn = |col: usize, msg: String| Error::Syntax { line: line_no, col, msg };
        match toks[0].1 {
            "vertex" => {
                let (col, id) = *toks.get(1).ok_or_else(|| syn(line.len() + 1, "expected vertex id".into()))?;
                if !is_ident(id) {
                    return Err(syn(col, format!("invalid identifier `{id}`")));
                }
                let mut b = None;
                let mut genus = None;
                for &(col, tok) in &toks[2..] {
                    let (key, val) = tok
                        .split_once('=')
                        .ok_or_else(|| syn(col, format!("expected key=value, found `{tok}`")))?;
                    let n: u32 = val
                        .parse()
                        .map_err(|_| syn(col + key.len() + 1, format!("expected unsigned integer, found `{val}`")))?;
                    let slot = match key {
                        "b" => &mut b,
                        "genus" => &mut genus,
                        _ => return Err(syn(col, format!("unknown attribute `{key}`"))),
                    };
                    if slot.is_some() {
                        return Err(syn(col, format!("repeated attribute `{key}`")));
                    }
                    *slot = Some(n);
                }
                let b = b.ok_or_else(|| syn(col, format!("vertex `{id}` is missing b=")))?;
                if b == 0 {
                    return Err(Error::ZeroSelfIntersection(id.to_string()));
                }
                if ids.contains_key(id) {
                    return Err(Error::DuplicateVertex(id.to_string()));
                }
                let k = g.add_vertex(id, b, genus.unwrap_or(0));
                ids.insert(id.to_string(), k);
            }
            "edge" => {
                if toks.len() != 3 {
                    let col = toks.get(3).map(|t| t.0).unwrap_or(line.len() + 1);
                    return Err(syn(col, "edge needs exactly two vertex ids".into()));
                }
                let mut ends = [0usize; 2];
                for (k, &(col, id)) in toks[1..].iter().enumerate() {
                    if !is_ident(id) {
                        return Err(syn(col, format!("invalid identifier `{id}`")));
                    }
                    ends[k] = *ids.get(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
                }
                g.add_edge(ends[0], ends[1]);
            }
            other => return Err(syn(toks[0].0, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(g)
}

pub fn intersection_matrix(g: &DualGraph) -> IntersectionMatrix {
    let n = g.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, v) in g.vertices.iter().enumerate() {
        m[i][i] = -(v.b as i64);
    }
    for &(a, b) in &g.edges {
        if a != b {
            m[a][b] += 1;
            m[b][a] += 1;
        }
    }
    IntersectionMatrix { m }
}

/// Leading principal minors of `a`, by fraction-free elimination; stops at the first zero pivot.
pub fn leading_minors(a: &[Vec<i64>]) -> Vec<i128> {
    let n = a.len();
    let mut w: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::with_capacity(n);
    let mut prev: i128 = 1;
    for k in 0..n {
        let piv = w[k][k];
        out.push(piv);
        if piv == 0 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                w[i][j] = (w[i][j] * piv - w[i][k] * w[k][j]) / prev;
            }
        }
        prev = piv;
    }
    out
}

pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    let neg: Vec<Vec<i64>> = m.m.iter().map(|r| r.iter().map(|&x| -x).collect()).collect();
    let minors = leading_minors(&neg);
    minors.len() == m.m.len() && minors.iter().all(|&d| d > 0)
}

/// Determinant of the tridiagonal matrix with diagonal `bs` and off-diagonal -1.
pub fn continuant(bs: &[u32]) -> i64 {
    let (mut next, mut cur) = (0i64, 1i64);
    for &b in bs.iter().rev() {
        let d = b as i64 * cur - next;
        next = cur;
        cur = d;
    }
    cur
}

/// `alpha/beta = b1 - 1/(b2 - 1/(...))` in lowest terms, denominator positive.
pub fn branch_fraction(bs: &[u32]) -> Result<(i64, i64)> {
    if bs.is_empty() {
        return Err(Error::DegenerateProfile(bs.to_vec()));
    }
    let (mut num, mut den) = (*bs.last().unwrap() as i64, 1i64);
    for &b in bs.iter().rev().skip(1) {
        if num == 0 {
            return Err(Error::DegenerateProfile(bs.to_vec()));
        }
        // b - den/num
        let n2 = b as i64 * num - den;
        den = num;
        num = n2;
    }
    let g = num_integer::gcd(num, den);
    let (mut a, mut c) = (num / g, den / g);
    if c < 0 {
        a = -a;
        c = -c;
    }
    Ok((a, c))
}

impl BranchProfile {
    pub fn new(bs: Vec<u32>, vertices: Vec<usize>) -> Self {
        let alpha = continuant(&bs);
        let beta = continuant(&bs[1..]);
        BranchProfile { bs, alpha, beta, vertices }
    }
}

pub fn classify_shape(g: &DualGraph) -> Result<GraphShape> {
    if g.is_empty() {
        return Ok(GraphShape::Empty);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.edges.iter().any(|&(a, b)| a == b) {
        return Ok(GraphShape::Other("contains a loop".into()));
    }
    if g.edges.len() + 1 != g.len() {
        return Ok(GraphShape::Other("contains a cycle".into()));
    }
    let deg = g.degrees();
    let centers: Vec<usize> = (0..g.len()).filter(|&v| deg[v] >= 3).collect();
    match centers.len() {
        0 => Ok(GraphShape::Chain),
        1 => Ok(GraphShape::Star(star_data(g, centers[0]))),
        2 => Ok(GraphShape::Other("two centers".into())),
        k => Ok(GraphShape::Other(format!("{k} centers"))),
    }
}

fn star_data(g: &DualGraph, center: usize) -> StarData {
    let adj = g.adjacency();
    let mut branches = Vec::new();
    for &first in &adj[center] {
        let (mut prev, mut cur) = (center, first);
        let mut vs = vec![first];
        loop {
            let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
            match next.first() {
                Some(&w) => {
                    vs.push(w);
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        let bs = vs.iter().map(|&v| g.vertices[v].b).collect();
        branches.push(BranchProfile::new(bs, vs));
    }
    // Ties between equal types and profiles keep file order (stable sort on the first vertex).
    branches.sort_by(|x, y| (x.alpha, &x.bs, x.vertices[0]).cmp(&(y.alpha, &y.bs, y.vertices[0])));
    let type_tuple = branches.iter().map(|b| b.alpha).collect();
    let b0 = g.vertices[center].b;
    let alpha_prime = if branches.len() == 3 {
        Some(b0 as i64 * branches[2].alpha - branches[2].beta)
    } else {
        None
    };
    StarData { center, center_id: g.vertices[center].id.clone(), b0, branches, type_tuple, alpha_prime }
}

pub fn is_potentially_taut(g: &DualGraph) -> bool {
    g.vertices.iter().all(|v| v.genus == 0) && g.degrees().iter().all(|&d| d <= 3)
}

fn require_definite(g: &DualGraph) -> Result<IntersectionMatrix> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = intersection_matrix(g);
    if !is_negative_definite(&m) {
        return Err(Error::NotNegativeDefinite);
    }
    Ok(m)
}

/// `(M z)_i = z . E_i`.
pub fn dot_all(m: &IntersectionMatrix, z: &[i64]) -> Vec<i64> {
    m.m.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
}

/// Laufer's sequence from the reduced cycle, adding the smallest-index positive component.
pub fn fundamental_cycle(g: &DualGraph) -> Result<Vec<i64>> {
    let m = require_definite(g)?;
    let mut z = vec![1i64; g.len()];
    loop {
        let d = dot_all(&m, &z);
        match d.iter().position(|&x| x > 0) {
            Some(i) => z[i] += 1,
            None => return Ok(z),
        }
    }
}

/// `K . E_i = b_i - 2 + 2 g_i`.
pub fn canonical_dots(g: &DualGraph) -> Vec<i64> {
    g.vertices.iter().map(|v| v.b as i64 - 2 + 2 * v.genus as i64).collect()
}

/// Arithmetic genus `1 + (Z.Z + K.Z)/2`.
pub fn arithmetic_genus(g: &DualGraph, z: &[i64]) -> i64 {
    let m = intersection_matrix(g);
    let zz: i64 = dot_all(&m, z).iter().zip(z).map(|(a, b)| a * b).sum();
    let kz: i64 = canonical_dots(g).iter().zip(z).map(|(a, b)| a * b).sum();
    1 + (zz + kz) / 2
}

pub fn is_rational_graph(g: &DualGraph) -> Result<bool> {
    let z = fundamental_cycle(g)?;
    Ok(arithmetic_genus(g, &z) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> DualGraph {
        DualGraph::star(2, &[vec![2], vec![2, 2], vec![2, 2, 2, 2]])
    }

    #[test]
    fn parse_minimal_chain() {
        let g = parse_graph("vertex a b=2\nvertex c b=2\nedge a c").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.vertices[0].genus, 0);
        assert_eq!(classify_shape(&g).unwrap(), GraphShape::Chain);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_graph("vertex a b=0"), Err(Error::ZeroSelfIntersection(_))));
        assert!(matches!(parse_graph("vertex a b=2\nvertex a b=3"), Err(Error::DuplicateVertex(_))));
        assert!(matches!(parse_graph("vertex a b=2\nedge a q"), Err(Error::UnknownVertex(_))));
        match parse_graph("vertex a b=2\n  vertex 9x b=2") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 10)),
            other => panic!("{other:?}"),
        }
        match parse_graph("vertex a b=x") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_genus_and_multiplicity() {
        let g = parse_graph("# two curves\nvertex a b=3 genus=1 # note\nvertex c b=2\nedge a c\nedge c a\n").unwrap();
        assert_eq!(g.vertices[0].genus, 1);
        assert_eq!(intersection_matrix(&g).m, vec![vec![-3, 2], vec![2, -2]]);
    }

    #[test]
    fn loop_is_parsed_then_rejected() {
        let g = parse_graph("vertex a b=4\nedge a a").unwrap();
        assert!(matches!(classify_shape(&g).unwrap(), GraphShape::Other(_)));
    }

    #[test]
    fn small_matrices() {
        let g = DualGraph::chain(&[2]);
        assert_eq!(intersection_matrix(&g).m, vec![vec![-2]]);
        assert!(is_negative_definite(&intersection_matrix(&g)));
        let a2 = DualGraph::chain(&[2, 2]);
        assert_eq!(intersection_matrix(&a2).m, vec![vec![-2, 1], vec![1, -2]]);
        assert!(is_negative_definite(&intersection_matrix(&a2)));
    }

    #[test]
    fn four_branch_all_twos_not_definite() {
        let g = DualGraph::star(2, &[vec![2], vec![2], vec![2], vec![2]]);
        assert!(!is_negative_definite(&intersection_matrix(&g)));
        assert!(!is_potentially_taut(&g));
    }

    #[test]
    fn e8_shape_and_cycle() {
        let g = e8();
        match classify_shape(&g).unwrap() {
            GraphShape::Star(s) => {
                assert_eq!(s.type_tuple, vec![2, 3, 5]);
                assert_eq!(s.alpha_prime, Some(6));
            }
            other => panic!("{other:?}"),
        }
        let z = fundamental_cycle(&g).unwrap();
        assert_eq!(z, vec![6, 3, 4, 2, 5, 4, 3, 2]);
        assert!(is_rational_graph(&g).unwrap());
        assert!(is_potentially_taut(&g));
    }

    #[test]
    fn two_centers() {
        let mut g = DualGraph::chain(&[2, 3, 2]);
        for (i, id) in ["d", "e", "f", "h"].iter().enumerate() {
            let v = g.add_vertex(id, 2, 0);
            g.add_edge(if i < 2 { 0 } else { 2 }, v);
        }
        assert_eq!(classify_shape(&g).unwrap(), GraphShape::Other("two centers".into()));
    }

    #[test]
    fn disconnected_is_error() {
        let g = parse_graph("vertex a b=2\nvertex c b=2").unwrap();
        assert_eq!(classify_shape(&g), Err(Error::Disconnected));
    }

    #[test]
    fn fractions() {
        assert_eq!(branch_fraction(&[2]).unwrap(), (2, 1));
        assert_eq!(branch_fraction(&[2, 2]).unwrap(), (3, 2));
        assert_eq!(branch_fraction(&[3, 2]).unwrap(), (5, 2));
        assert_eq!(branch_fraction(&[2, 2, 2, 2]).unwrap(), (5, 4));
        assert!(branch_fraction(&[1, 1, 3]).is_ok());
        assert!(matches!(branch_fraction(&[2, 1, 1]), Err(Error::DegenerateProfile(_))));
    }

    #[test]
    fn genus_one_not_rational() {
        let g = parse_graph("vertex a b=2 genus=1").unwrap();
        assert!(!is_rational_graph(&g).unwrap());
        assert!(!is_potentially_taut(&g));
    }

    #[test]
    fn chains_are_rational_with_reduced_cycle() {
        for bs in [vec![2, 2, 2, 2, 2], vec![3, 5, 2], vec![7]] {
            let g = DualGraph::chain(&bs);
            assert_eq!(fundamental_cycle(&g).unwrap(), vec![1; bs.len()]);
            assert!(is_rational_graph(&g).unwrap());
        }
    }

    #[test]
    fn text_round_trip() {
        let g = e8();
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }
}
