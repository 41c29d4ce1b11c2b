//! Truncated Čech complex of the tangent sheaf on a plumbing cover, solved over F_p.
//!
//! Every curve `v` carries one overlap in its standard frame `(X_v, Y_v)`. Coordinates of a
//! cochain are `X^e Y^t` times `X d/dX` or `Y d/dY`, plus pole terms `(X-1)^r Y^t` on curves
//! with three nodes.

use crate::arith::{inv_mod, require_prime, Binom};
use crate::cycle_engine::{multiplicity_data, MultiplicityData};
use crate::error::{Error, Result};
use crate::graph_core::DualGraph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub v: u32,
    /// 0 for `X d/dX`, 1 for `Y d/dY`.
    pub dir: u8,
    pub pole: bool,
    /// Exponent of `X`, or of `(X-1)` for poles.
    pub e: i32,
    pub t: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pt {
    Zero,
    One,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Tri,
    Node,
    End,
}

#[derive(Debug, Clone)]
struct Chart {
    kind: Kind,
    home: usize,
    twisted: bool,
    /// `(x-1)` inverted.
    loc: bool,
    /// Neighbouring curves and the point of the chart's `x` line where they meet.
    nbrs: Vec<(usize, Pt)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gen {
    /// `x d/dx`
    X,
    /// `y d/dy`
    Y,
    /// `(x-1) x d/dx`
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Mono(i64),
    Pole(i64),
}

/// Covering of the plumbing scheme by charts around nodes, trivalent curves and leaves.
#[derive(Debug, Clone)]
pub struct Cover {
    p: u64,
    b: Vec<i64>,
    nu: Vec<i64>,
    pos: Vec<HashMap<usize, Pt>>,
    charts: Vec<Chart>,
    cov: Vec<[usize; 2]>,
    has_pole: Vec<bool>,
    weights: Option<(Vec<i64>, Vec<i64>)>,
    binom: Binom,
}

impl Cover {
    pub fn new(g: &DualGraph, nu: &[i64], p: u64) -> Result<Cover> {
        let n = g.len();
        if n < 2 {
            return Err(Error::Unsupported("a single curve has no node to glue along".into()));
        }
        if g.edges.iter().any(|(a, b)| a == b) || g.edges.len() + 1 != n || !g.is_connected() {
            return Err(Error::Unsupported("cover needs a tree".into()));
        }
        let adj = g.adjacency();
        let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
        if deg.iter().any(|&d| d > 3) {
            return Err(Error::Unsupported("curves meeting four or more others".into()));
        }
        for &(u, w) in &g.edges {
            if deg[u] == 3 && deg[w] == 3 {
                return Err(Error::Unsupported("adjacent trivalent curves".into()));
            }
        }
        let root = (0..n).find(|&v| deg[v] == 3).unwrap_or_else(|| (0..n).find(|&v| deg[v] <= 1).unwrap());
        let mut pos: Vec<HashMap<usize, Pt>> = vec![HashMap::new(); n];
        let mut parent = vec![usize::MAX; n];
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            let ch: Vec<usize> = adj[v].iter().copied().filter(|&w| w != parent[v]).collect();
            for &w in &ch {
                parent[w] = v;
                order.push(w);
            }
            if parent[v] != usize::MAX {
                pos[v].insert(parent[v], Pt::Inf);
            }
            if deg[v] == 3 {
                if parent[v] == usize::MAX {
                    let last = ch.iter().copied().find(|&w| deg[w] >= 2).unwrap_or(ch[2]);
                    let rest: Vec<usize> = ch.iter().copied().filter(|&w| w != last).collect();
                    pos[v].insert(rest[0], Pt::Zero);
                    pos[v].insert(rest[1], Pt::One);
                    pos[v].insert(last, Pt::Inf);
                } else {
                    pos[v].insert(ch[0], Pt::Zero);
                    pos[v].insert(ch[1], Pt::One);
                }
            } else {
                let pts: &[Pt] = if parent[v] == usize::MAX { &[Pt::Zero, Pt::Inf] } else { &[Pt::Zero] };
                for (&w, &pt) in ch.iter().zip(pts) {
                    pos[v].insert(w, pt);
                }
            }
        }
        let mut charts = Vec::new();
        let mut owned = BTreeSet::new();
        for v in 0..n {
            if deg[v] == 3 {
                let mut nb: Vec<(usize, Pt)> =
                    adj[v].iter().map(|&w| (w, pos[v][&w])).filter(|(_, pt)| *pt != Pt::Inf).collect();
                nb.sort_by_key(|(_, pt)| *pt == Pt::One);
                for (w, _) in &nb {
                    owned.insert((v.min(*w), v.max(*w)));
                }
                charts.push(Chart { kind: Kind::Tri, home: v, twisted: false, loc: false, nbrs: nb });
            }
        }
        for &(a, b) in &g.edges {
            if owned.contains(&(a.min(b), a.max(b))) {
                continue;
            }
            let (mut u, mut w) = (a, b);
            if deg[w] == 3 || (deg[u] != 3 && pos[u][&w] != Pt::Zero && pos[w][&u] == Pt::Zero) {
                std::mem::swap(&mut u, &mut w);
            }
            let twisted = pos[u][&w] != Pt::Zero;
            charts.push(Chart { kind: Kind::Node, home: u, twisted, loc: deg[u] == 3, nbrs: vec![(w, Pt::Zero)] });
        }
        for v in 0..n {
            if deg[v] == 1 {
                let w = adj[v][0];
                let twisted = pos[v][&w] != Pt::Inf;
                charts.push(Chart { kind: Kind::End, home: v, twisted, loc: false, nbrs: vec![] });
            }
        }
        let mut cov_lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, c) in charts.iter().enumerate() {
            cov_lists[c.home].push(i);
            for (w, _) in &c.nbrs {
                cov_lists[*w].push(i);
            }
        }
        let mut cov = Vec::with_capacity(n);
        for (v, l) in cov_lists.iter().enumerate() {
            if l.len() != 2 {
                return Err(Error::Unsupported(format!("curve {v} is covered by {} charts", l.len())));
            }
            cov.push([l[0], l[1]]);
        }
        for c in &charts {
            for &(w, _) in &c.nbrs {
                if pos[w][&c.home] == Pt::One {
                    return Err(Error::Unsupported("neighbour chart meets a curve at its point 1".into()));
                }
            }
        }
        let mut cover = Cover {
            p,
            b: g.vertices.iter().map(|v| v.b as i64).collect(),
            nu: nu.to_vec(),
            pos,
            has_pole: deg.iter().map(|&d| d == 3).collect(),
            charts,
            cov,
            weights: None,
            binom: Binom::new(p),
        };
        cover.weights = cover.torus_weights(root);
        Ok(cover)
    }

    fn binom(&self, n: i64, k: i64) -> i64 {
        if k < 0 || n < 0 || k > n {
            return 0;
        }
        self.binom.get(n as u64, k as u64) as i64
    }

    fn frame_weights(&self, c: &Chart, wx: &[i64], wy: &[i64]) -> (i64, i64) {
        let h = c.home;
        if c.twisted {
            (-wx[h], self.b[h] * wx[h] + wy[h])
        } else {
            (wx[h], wy[h])
        }
    }

    /// A grading of all chart coordinates compatible with every gluing, if one exists.
    fn torus_weights(&self, root: usize) -> Option<(Vec<i64>, Vec<i64>)> {
        let n = self.b.len();
        let mut wx = vec![None; n];
        let mut wy = vec![None; n];
        wx[root] = Some(0i64);
        wy[root] = Some(1i64);
        let mut changed = true;
        while changed {
            changed = false;
            for c in &self.charts {
                let h = c.home;
                let (Some(hx), Some(hy)) = (wx[h], wy[h]) else { continue };
                let (fx, fy) = if c.twisted { (-hx, self.b[h] * hx + hy) } else { (hx, hy) };
                if (c.kind == Kind::Tri || c.loc) && fx != 0 {
                    return None;
                }
                for &(w, pt) in &c.nbrs {
                    if pt == Pt::One && fx != 0 {
                        return None;
                    }
                    let (nx, ny) = match self.pos[w][&h] {
                        Pt::Zero => (fy, fx),
                        _ => (-fy, fx + self.b[w] * fy),
                    };
                    match (wx[w], wy[w]) {
                        (Some(a), Some(b)) if (a, b) != (nx, ny) => return None,
                        (Some(_), Some(_)) => {}
                        _ => {
                            wx[w] = Some(nx);
                            wy[w] = Some(ny);
                            changed = true;
                        }
                    }
                }
            }
        }
        let wx: Option<Vec<i64>> = wx.into_iter().collect();
        let wy: Option<Vec<i64>> = wy.into_iter().collect();
        Some((wx?, wy?))
    }

    pub fn is_graded(&self) -> bool {
        self.weights.is_some()
    }

    fn coord_weight(&self, c: &Coord) -> Option<i64> {
        let (wx, wy) = self.weights.as_ref()?;
        let v = c.v as usize;
        Some(if c.pole { wy[v] * c.t as i64 } else { wx[v] * c.e as i64 + wy[v] * c.t as i64 })
    }

    fn put(&self, out: &mut Vec<(Coord, i64)>, key: Coord, cf: i64) {
        let nv = self.nu[key.v as usize] as i32;
        if (key.dir == 0 && key.t >= nv) || (key.dir == 1 && key.t >= nv - 1) {
            return;
        }
        out.push((key, cf));
    }

    /// Restriction of `g(x) y^c D` on chart `ci` to the overlaps it meets, unsigned.
    fn section_image(&self, ci: usize, g: Func, c: i64, d: Gen) -> Vec<(Coord, u64)> {
        let p = self.p as i64;
        let ch = &self.charts[ci];
        let h = ch.home;
        let mut out = Vec::new();
        // Home overlap: function as a Laurent polynomial plus pole terms in the chart's x.
        let mut hg: Vec<(Func, i64)> = vec![(g, 1)];
        let mut hd = d;
        if d == Gen::T {
            let Func::Mono(e) = g else { unreachable!("T generator only on monomials") };
            hg = vec![(Func::Mono(e + 1), 1), (Func::Mono(e), -1)];
            hd = Gen::X;
        }
        let key = |dir: u8, f: Func, t: i64| {
            let (pole, e) = match f {
                Func::Mono(e) => (false, e),
                Func::Pole(r) => (true, r),
            };
            Coord { v: h as u32, dir, pole, e: e as i32, t: t as i32 }
        };
        if !ch.twisted {
            for (f, cf) in hg {
                self.put(&mut out, key(if hd == Gen::X { 0 } else { 1 }, f, c), cf);
            }
        } else {
            let bh = self.b[h];
            let mut fx: BTreeMap<Func, i64> = BTreeMap::new();
            for (f, cf) in hg {
                match f {
                    Func::Mono(e) => *fx.entry(Func::Mono(-e + bh * c)).or_insert(0) += cf,
                    Func::Pole(r) => {
                        let m = -r;
                        let sg = if m % 2 == 1 { -1 } else { 1 };
                        for (k, v) in mono_over_pole(m + bh * c, m, self.p) {
                            *fx.entry(k).or_insert(0) += sg * v;
                        }
                    }
                }
            }
            let dirs: &[(u8, i64)] = if hd == Gen::X { &[(0, -1), (1, bh)] } else { &[(1, 1)] };
            for (f, cf) in fx {
                for &(dr, mul) in dirs {
                    self.put(&mut out, key(dr, f, c), (cf % p) * mul);
                }
            }
        }
        // Neighbouring overlaps: expand at the node in the local parameter along the home curve.
        for &(w, pt) in &ch.nbrs {
            let nw = self.nu[w];
            let mut ser = vec![0i64; nw.max(0) as usize];
            let mut add = |k: i64, v: i64| {
                if k >= 0 && k < nw {
                    ser[k as usize] = (ser[k as usize] + v).rem_euclid(p);
                }
            };
            match g {
                Func::Mono(e) => {
                    let ee = e + if d == Gen::T && pt == Pt::One { 1 } else { 0 };
                    match pt {
                        Pt::Zero => add(ee, 1),
                        _ => {
                            for k in 0..=ee.min(nw - 1) {
                                add(k, self.binom(ee, k));
                            }
                        }
                    }
                }
                Func::Pole(r) => {
                    let m = -r;
                    let sg = if m % 2 == 1 { -1 } else { 1 };
                    for k in 0..nw {
                        add(k, sg * self.binom(k + m - 1, k));
                    }
                }
            }
            if d == Gen::T && pt == Pt::Zero {
                let mut ns = vec![0i64; ser.len()];
                for (k, &v) in ser.iter().enumerate() {
                    if k + 1 < ns.len() {
                        ns[k + 1] = (ns[k + 1] + v) % p;
                    }
                    ns[k] = (ns[k] - v).rem_euclid(p);
                }
                ser = ns;
            }
            let ldir: u8 = if d == Gen::Y { 0 } else { 1 };
            let at = self.pos[w][&h];
            for (k, &cf) in ser.iter().enumerate() {
                if cf == 0 {
                    continue;
                }
                let k = k as i64;
                let mk = |dir: u8, e: i64| Coord { v: w as u32, dir, pole: false, e: e as i32, t: k as i32 };
                if at == Pt::Zero {
                    self.put(&mut out, mk(ldir, c), cf);
                } else {
                    let e = -c + self.b[w] * k;
                    if ldir == 0 {
                        self.put(&mut out, mk(0, e), -cf);
                        self.put(&mut out, mk(1, e), cf * self.b[w]);
                    } else {
                        self.put(&mut out, mk(1, e), cf);
                    }
                }
            }
        }
        out.sort_unstable_by_key(|(k, _)| *k);
        let mut merged: Vec<(Coord, u64)> = Vec::with_capacity(out.len());
        for (k, cf) in out {
            let cf = cf.rem_euclid(p) as u64;
            match merged.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = (*lc + cf) % self.p,
                _ => merged.push((k, cf)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        merged
    }

    /// Sign convention: a section contributes `+` on the overlap of `v` if its chart is the
    /// first of the two charts covering `v`.
    fn coboundary(&self, ci: usize, g: Func, c: i64, d: Gen) -> Vec<(Coord, u64)> {
        self.section_image(ci, g, c, d)
            .into_iter()
            .map(|(k, cf)| {
                let first = self.cov[k.v as usize][0] == ci;
                (k, if first { cf } else { (self.p - cf) % self.p })
            })
            .collect()
    }

    /// Weight of a generator, read off its leading term on the home chart.
    fn gen_weight(&self, ci: usize, g: Func, c: i64) -> Option<i64> {
        let (wx, wy) = self.weights.as_ref()?;
        let (fx, fy) = self.frame_weights(&self.charts[ci], wx, wy);
        Some(match g {
            Func::Mono(a) => a * fx + c * fy,
            Func::Pole(_) => c * fy,
        })
    }

    fn generators(&self, grid: i64, poles: i64) -> Vec<(usize, Func, i64, Gen)> {
        let mut out = Vec::new();
        for (ci, ch) in self.charts.iter().enumerate() {
            let mut funcs: Vec<Func> = (if ch.kind == Kind::End { -1 } else { 0 }..=grid).map(Func::Mono).collect();
            if ch.loc {
                funcs.extend((-poles..0).map(Func::Pole));
            }
            let dirs: &[Gen] = if ch.kind == Kind::Tri { &[Gen::T, Gen::Y] } else { &[Gen::X, Gen::Y] };
            for &f in &funcs {
                for c in 0..=grid {
                    for &d in dirs {
                        if f == Func::Mono(-1) && d == Gen::Y {
                            continue;
                        }
                        out.push((ci, f, c, d));
                    }
                }
            }
        }
        out
    }

    fn targets(&self, s: i64, r: i64) -> Vec<Coord> {
        let mut out = Vec::new();
        for v in 0..self.b.len() {
            for dir in 0..2u8 {
                let tmax = self.nu[v] - if dir == 0 { 1 } else { 2 };
                for t in 0..=tmax {
                    for e in -s..=self.b[v] * t + s {
                        out.push(Coord { v: v as u32, dir, pole: false, e: e as i32, t: t as i32 });
                    }
                    if self.has_pole[v] {
                        for e in -r..0 {
                            out.push(Coord { v: v as u32, dir, pole: true, e: e as i32, t: t as i32 });
                        }
                    }
                }
            }
        }
        out
    }
}

/// `X^big / (X-1)^m` as pole terms `(X-1)^(i-m)` plus a polynomial, by repeated synthetic division.
fn mono_over_pole(big: i64, m: i64, p: u64) -> Vec<(Func, i64)> {
    let p = p as i64;
    let mut poly = vec![0i64; big.max(0) as usize + 1];
    if big >= 0 {
        poly[big as usize] = 1;
    }
    let mut out = Vec::new();
    for i in 0..m {
        if poly.is_empty() {
            continue;
        }
        let n = poly.len() - 1;
        let mut q = vec![0i64; n];
        let mut acc = 0;
        for dgr in (0..=n).rev() {
            acc = (acc + poly[dgr]) % p;
            if dgr > 0 {
                q[dgr - 1] = acc;
            } else if acc != 0 {
                out.push((Func::Pole(i - m), acc));
            }
        }
        poly = q;
    }
    for (dgr, &cf) in poly.iter().enumerate() {
        if cf != 0 {
            out.push((Func::Mono(dgr as i64), cf));
        }
    }
    out
}

impl PartialOrd for Func {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Func {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |f: &Func| match *f {
            Func::Mono(e) => (0, e),
            Func::Pole(r) => (1, r),
        };
        key(self).cmp(&key(other))
    }
}

/// Row echelon form over F_p with the largest column as pivot. Reduction runs in a dense
/// accumulator swept from the top column down.
struct Echelon {
    p: u64,
    rows: Vec<Option<Vec<(u32, u64)>>>,
    acc: Vec<u64>,
}

impl Echelon {
    fn new(p: u64, ncols: usize) -> Self {
        Echelon { p, rows: vec![None; ncols], acc: vec![0; ncols] }
    }

    /// Adds a vector; returns whether it was independent of the rows so far.
    fn insert(&mut self, v: &[(u32, u64)]) -> bool {
        let p = self.p;
        let (mut lo, mut hi) = (usize::MAX, 0usize);
        for &(k, c) in v {
            let k = k as usize;
            self.acc[k] = (self.acc[k] + c) % p;
            lo = lo.min(k);
            hi = hi.max(k);
        }
        if lo == usize::MAX {
            return false;
        }
        let mut col = hi;
        loop {
            let f = self.acc[col];
            if f != 0 {
                match &self.rows[col] {
                    Some(row) => {
                        let neg = p - f;
                        for &(k, rc) in row {
                            let k = k as usize;
                            self.acc[k] = (self.acc[k] + rc * neg) % p;
                            lo = lo.min(k);
                        }
                    }
                    None => {
                        let inv = inv_mod(f, p);
                        let mut row = Vec::new();
                        for k in lo..=col {
                            let c = self.acc[k];
                            if c != 0 {
                                row.push((k as u32, c * inv % p));
                                self.acc[k] = 0;
                            }
                        }
                        self.rows[col] = Some(row);
                        return true;
                    }
                }
            }
            if col == lo {
                return false;
            }
            col -= 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechRank {
    pub rank: usize,
    pub stable: bool,
    pub window: (i64, i64),
    pub doubled_rank: usize,
    pub targets: usize,
    pub generators: usize,
    pub blocks: usize,
    pub graded: bool,
    /// A few target coordinates left independent of the coboundaries.
    pub witnesses: Vec<Coord>,
}

#[derive(Debug, Clone)]
struct SliceRank {
    rank: usize,
    targets: usize,
    generators: usize,
    blocks: usize,
    witnesses: Vec<Coord>,
}

fn slice_rank(cover: &Cover, s_max: i64, r_max: i64) -> Result<SliceRank> {
    if s_max < 2 {
        return Err(Error::WindowTooSmall(format!("inner window of S={s_max} is empty")));
    }
    let (si, ri) = (s_max / 2, r_max / 2);
    let targets = cover.targets(si, ri);
    let bmax = *cover.b.iter().max().unwrap();
    let numax = *cover.nu.iter().max().unwrap();
    let grid = bmax * numax + s_max + r_max + 2;
    let gens = cover.generators(grid, r_max);

    let mut blocks: BTreeMap<i64, (Vec<Coord>, Vec<Vec<(Coord, u64)>>)> = BTreeMap::new();
    let graded = cover.is_graded();
    for t in &targets {
        let w = if graded { cover.coord_weight(t).unwrap() } else { 0 };
        blocks.entry(w).or_default().0.push(*t);
    }
    let mut used = 0;
    for &(ci, f, c, d) in &gens {
        let w = if graded { cover.gen_weight(ci, f, c).unwrap() } else { 0 };
        let Some(block) = blocks.get_mut(&w) else { continue };
        let img = cover.coboundary(ci, f, c, d);
        if img.is_empty() {
            continue;
        }
        if graded && img.iter().any(|(k, _)| cover.coord_weight(k) != Some(w)) {
            return Err(Error::Unsupported("cover grading is not respected by a coboundary".into()));
        }
        block.1.push(img);
        used += 1;
    }

    let mut rank = 0;
    let mut witnesses = Vec::new();
    let nblocks = blocks.len();
    for (_, (tg, gs)) in blocks {
        let mut cols: Vec<Coord> = tg.clone();
        for g in &gs {
            cols.extend(g.iter().map(|(k, _)| *k));
        }
        cols.sort_unstable();
        cols.dedup();
        let idx = |k: &Coord| cols.binary_search(k).unwrap() as u32;
        let mut ech = Echelon::new(cover.p, cols.len());
        for g in gs {
            let mut v: Vec<(u32, u64)> = g.iter().map(|(k, c)| (idx(k), *c)).collect();
            v.sort_unstable();
            ech.insert(&v);
        }
        for t in tg {
            if ech.insert(&[(idx(&t), 1)]) {
                rank += 1;
                if witnesses.len() < 8 {
                    witnesses.push(t);
                }
            }
        }
    }
    Ok(SliceRank { rank, targets: targets.len(), generators: used, blocks: nblocks, witnesses })
}

/// Cokernel rank of the coboundary map on the inner half of the window, and whether it
/// survives one doubling of the window.
pub fn cech_h1_rank(g: &DualGraph, p: u64, window: (i64, i64)) -> Result<CechRank> {
    let md = multiplicity_data(g, p)?;
    cech_h1_rank_with(g, p, &md, window)
}

pub fn cech_h1_rank_with(g: &DualGraph, p: u64, md: &MultiplicityData, window: (i64, i64)) -> Result<CechRank> {
    require_prime(p)?;
    let cover = Cover::new(g, &md.z, p)?;
    let (s, r) = window;
    let first = slice_rank(&cover, s, r)?;
    let second = slice_rank(&cover, 2 * s, 2 * r)?;
    Ok(CechRank {
        rank: first.rank,
        stable: first.rank == second.rank,
        window,
        doubled_rank: second.rank,
        targets: first.targets,
        generators: first.generators,
        blocks: first.blocks,
        graded: cover.is_graded(),
        witnesses: first.witnesses,
    })
}

/// Coboundary images of every grid generator, for evaluating functionals on them.
pub(crate) fn all_coboundaries(cover: &Cover, grid: i64, poles: i64) -> Vec<Vec<(Coord, u64)>> {
    cover
        .generators(grid, poles)
        .into_iter()
        .map(|(ci, f, c, d)| cover.coboundary(ci, f, c, d))
        .filter(|v| !v.is_empty())
        .collect()
}
