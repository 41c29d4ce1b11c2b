//! Coboundary type search on the central overlap of a three-branch star.

use crate::cycle_engine::MultiplicityData;
use crate::error::{Error, Result};
use crate::graph_core::StarData;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Q = Ratio<i64>;

/// Slope data of a three-branch star: branch fractions `beta_i/alpha_i`, `alpha'/alpha_3`,
/// optional multiplicity caps and characteristic gates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCohomologyData {
    pub star: Option<StarData>,
    pub multiplicities: Option<MultiplicityData>,
    pub alpha1: i64,
    pub beta1: i64,
    pub alpha2: i64,
    pub beta2: i64,
    pub alpha3: i64,
    pub alpha_prime: i64,
    /// Multiplicity of the first curve on branches 1 and 2, and of the center.
    pub nu11: Option<i64>,
    pub nu21: Option<i64>,
    pub nu0: Option<i64>,
    pub p: Option<u64>,
    /// `alpha_i != 0 mod p` for i = 1, 2, 3.
    pub gates: [bool; 3],
    /// Type (2,2,d) stars have no type D relation.
    pub type_d_available: bool,
}

impl StarCohomologyData {
    /// Uncapped data at given slopes, all gates open.
    pub fn from_slopes(s1: (i64, i64), s2: (i64, i64), s3: (i64, i64)) -> Self {
        StarCohomologyData {
            star: None,
            multiplicities: None,
            beta1: s1.0,
            alpha1: s1.1,
            beta2: s2.0,
            alpha2: s2.1,
            alpha_prime: s3.0,
            alpha3: s3.1,
            nu11: None,
            nu21: None,
            nu0: None,
            p: None,
            gates: [true; 3],
            type_d_available: !(s1.1 == 2 && s2.1 == 2),
        }
    }

    pub fn from_star(star: &StarData, md: &MultiplicityData, p: u64) -> Result<Self> {
        if star.branches.len() != 3 {
            return Err(Error::Precondition(format!("expected 3 branches, found {}", star.branches.len())));
        }
        let [b1, b2, b3] = [&star.branches[0], &star.branches[1], &star.branches[2]];
        let alpha_prime = star.b0 as i64 * b3.alpha - b3.beta;
        let gate = |a: i64| a.rem_euclid(p as i64) != 0;
        Ok(StarCohomologyData {
            star: Some(star.clone()),
            multiplicities: Some(md.clone()),
            alpha1: b1.alpha,
            beta1: b1.beta,
            alpha2: b2.alpha,
            beta2: b2.beta,
            alpha3: b3.alpha,
            alpha_prime,
            nu11: Some(md.z[b1.vertices[0]]),
            nu21: Some(md.z[b2.vertices[0]]),
            nu0: Some(md.z[star.center]),
            p: Some(p),
            gates: [gate(b1.alpha), gate(b2.alpha), gate(b3.alpha)],
            type_d_available: !(b1.alpha == 2 && b2.alpha == 2),
        })
    }

    pub fn slopes(&self) -> [Q; 3] {
        [
            Q::new(self.beta1, self.alpha1),
            Q::new(self.beta2, self.alpha2),
            Q::new(self.alpha_prime, self.alpha3),
        ]
    }

    pub fn s_min(&self, t: i64) -> i64 {
        Integer::div_floor(&(self.alpha_prime * t), &self.alpha3) + 1
    }

    /// `r` of the U0 family: `min(ceil(beta2 t / alpha2) + 1, nu21)`.
    pub fn r_a(&self, t: i64) -> i64 {
        cap(Integer::div_ceil(&(self.beta2 * t), &self.alpha2) + 1, self.nu21)
    }

    /// Smallest `s` for which the U0 family reaches `x^s y^t x d/dx`.
    pub fn s_a(&self, t: i64) -> i64 {
        self.r_a(t) + cap(Integer::div_ceil(&(self.beta1 * t), &self.alpha1), self.nu11.map(|n| n - 1))
    }
}

fn cap(v: i64, c: Option<i64>) -> i64 {
    match c {
        Some(c) => v.min(c),
        None => v,
    }
}

/// `floor(alpha'/alpha3 t) + 1 >= beta1/alpha1 t + ceil(beta2/alpha2 t)`.
pub fn yterm_vanishing_check(d: &StarCohomologyData, t: i64) -> bool {
    let lhs = Q::from_integer(d.s_min(t));
    let rhs = Q::new(d.beta1 * t, d.alpha1) + Q::from_integer(Integer::div_ceil(&(d.beta2 * t), &d.alpha2));
    lhs >= rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CobType {
    A,
    B,
    C,
    D,
    Fail,
}

impl fmt::Display for CobType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CobType::A => "A",
            CobType::B => "B",
            CobType::C => "C",
            CobType::D => "D",
            CobType::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoboundaryTypeRow {
    pub t: i64,
    pub s_min: i64,
    pub r: Option<i64>,
    pub s_minus_r: Option<i64>,
    pub kind: CobType,
    pub note: Option<String>,
}

/// Outcome of trying the four relation families on `(x-1)^r x^(s-r) y^t x d/dx`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Attempt {
    Found(CobType, i64),
    None { gate: Option<String> },
}

fn try_types(d: &StarCohomologyData, t: i64, s: i64) -> Attempt {
    let mut gate = None;
    let mut closed = |i: usize, ty: CobType| {
        if d.gates[i] {
            true
        } else {
            gate = Some(format!("type {ty} needs alpha{} != 0 mod p", i + 1));
            false
        }
    };
    let ra = d.r_a(t);
    let a_ok = match d.nu11 {
        Some(n) if s - ra >= n - 1 => true,
        _ => d.alpha1 * (s - ra) >= d.beta1 * t,
    };
    if a_ok {
        return Attempt::Found(CobType::A, ra);
    }
    if t >= 1 && d.alpha1 * (s - ra) == d.beta1 * t - 1 && closed(0, CobType::B) {
        return Attempt::Found(CobType::B, ra);
    }
    let num = d.beta2 * t + d.alpha2 - 1;
    if t >= 1 && num % d.alpha2 == 0 {
        let r = num / d.alpha2;
        let rel_ok = r >= 2 && d.nu21.map_or(true, |n| r - 1 <= n - 1);
        if rel_ok && s - r == cap(Integer::div_ceil(&(d.beta1 * t), &d.alpha1), d.nu11) && closed(1, CobType::C) {
            return Attempt::Found(CobType::C, r);
        }
    }
    let t_ok = d.nu0.map_or(true, |n| t <= n - 1);
    if d.type_d_available && t_ok && d.alpha3 * s == d.alpha_prime * t + 1 && closed(2, CobType::D) {
        return Attempt::Found(CobType::D, 0);
    }
    Attempt::None { gate }
}

/// Type of the cocycle `x^s y^t x d/dx` at the smallest `s` not covered by U1, plus a sweep
/// over every `s` up to where the U0 family takes over.
pub fn xterm_coboundary_type(d: &StarCohomologyData, t: i64) -> CoboundaryTypeRow {
    let s_min = d.s_min(t);
    let fail = |note: String| CoboundaryTypeRow { t, s_min, r: None, s_minus_r: None, kind: CobType::Fail, note: Some(note) };
    let (kind, r) = match try_types(d, t, s_min) {
        Attempt::Found(k, r) => (k, r),
        Attempt::None { gate } => return fail(gate.unwrap_or_else(|| format!("no relation reaches s={s_min}"))),
    };
    for s in s_min + 1..d.s_a(t) {
        if let Attempt::None { gate } = try_types(d, t, s) {
            return fail(gate.unwrap_or_else(|| format!("no relation reaches s={s}")));
        }
    }
    CoboundaryTypeRow { t, s_min, r: Some(r), s_minus_r: Some(s_min - r), kind, note: None }
}

/// Type of an explicitly given element `(x-1)^r x^(s-r) y^t x d/dx`.
pub fn classify_element(d: &StarCohomologyData, t: i64, r: i64, s_minus_r: i64) -> CoboundaryTypeRow {
    let kind = [CobType::A, CobType::B, CobType::C, CobType::D]
        .into_iter()
        .find(|&k| row_satisfies(d, t, r, s_minus_r, k))
        .unwrap_or(CobType::Fail);
    CoboundaryTypeRow { t, s_min: r + s_minus_r, r: Some(r), s_minus_r: Some(s_minus_r), kind, note: None }
}

/// Defining constraint of each type, checked directly.
pub fn row_satisfies(d: &StarCohomologyData, t: i64, r: i64, s_minus_r: i64, kind: CobType) -> bool {
    let s = r + s_minus_r;
    match kind {
        CobType::A => {
            r == d.r_a(t)
                && (d.alpha1 * s_minus_r >= d.beta1 * t || d.nu11.is_some_and(|n| s_minus_r >= n - 1))
        }
        CobType::B => t >= 1 && r == d.r_a(t) && d.alpha1 * s_minus_r == d.beta1 * t - 1 && d.gates[0],
        CobType::C => {
            t >= 1
                && d.alpha2 * r == d.beta2 * t + d.alpha2 - 1
                && s_minus_r == cap(Integer::div_ceil(&(d.beta1 * t), &d.alpha1), d.nu11)
                && d.gates[1]
        }
        CobType::D => d.type_d_available && r == 0 && d.alpha3 * s == d.alpha_prime * t + 1 && d.gates[2],
        CobType::Fail => false,
    }
}

/// `margin * t - constant >= 0` for every `t >= threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBound {
    pub margin: (i64, i64),
    pub constant: (i64, i64),
    pub threshold: i64,
}

impl TailBound {
    fn new(margin: Q, constant: Q) -> Option<Self> {
        if margin <= Q::from_integer(0) {
            return None;
        }
        let threshold = (constant / margin).ceil().to_integer().max(0);
        Some(TailBound {
            margin: (*margin.numer(), *margin.denom()),
            constant: (*constant.numer(), *constant.denom()),
            threshold,
        })
    }

    /// The bound is linear with positive slope, so it holds past the threshold iff it holds there.
    pub fn verify(&self) -> bool {
        let m = Q::new(self.margin.0, self.margin.1);
        let c = Q::new(self.constant.0, self.constant.1);
        m > Q::from_integer(0) && m * Q::from_integer(self.threshold) - c >= Q::from_integer(0)
    }
}

fn frac_slack(alpha: i64) -> Q {
    Q::new(alpha - 1, alpha)
}

/// Past this `t` the y-term inequality holds by the floor/ceiling estimate.
pub fn yterm_tail(d: &StarCohomologyData) -> Option<TailBound> {
    let [s1, s2, s3] = d.slopes();
    TailBound::new(s3 - s2 - s1, frac_slack(d.alpha3) + frac_slack(d.alpha2) - Q::from_integer(1))
}

/// Past this `t` the type A relation reaches `s_min` by the floor/ceiling estimate.
pub fn xterm_tail(d: &StarCohomologyData) -> Option<TailBound> {
    let [s1, s2, s3] = d.slopes();
    TailBound::new(s3 - s2 - s1, frac_slack(d.alpha3) + frac_slack(d.alpha2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableId {
    Table1,
    Table2,
    Case236a,
    Case236b,
    Case244,
}

impl TableId {
    pub fn parse(s: &str) -> Option<TableId> {
        Some(match s {
            "t1" => TableId::Table1,
            "t2" => TableId::Table2,
            "c236" | "c236a" => TableId::Case236a,
            "c236b" => TableId::Case236b,
            "c244" => TableId::Case244,
            _ => return None,
        })
    }

    pub fn data(self) -> StarCohomologyData {
        match self {
            TableId::Table1 => StarCohomologyData::from_slopes((1, 2), (2, 3), (5, 4)),
            TableId::Table2 => StarCohomologyData::from_slopes((1, 2), (2, 3), (6, 5)),
            TableId::Case236a => StarCohomologyData::from_slopes((1, 2), (1, 3), (7, 6)),
            TableId::Case236b => StarCohomologyData::from_slopes((1, 2), (2, 3), (11, 6)),
            TableId::Case244 => StarCohomologyData::from_slopes((1, 2), (3, 4), (7, 4)),
        }
    }

    pub fn caption(self) -> &'static str {
        match self {
            TableId::Table1 => "slopes 1/2, 2/3, 5/4",
            TableId::Table2 => "slopes 1/2, 2/3, 6/5",
            TableId::Case236a => "type (2,3,6), slopes 1/2, 1/3, 7/6",
            TableId::Case236b => "type (2,3,6), slopes 1/2, 2/3, 11/6, given elements",
            TableId::Case244 => "type (2,4,4), slopes 1/2, 3/4, 7/4, given elements",
        }
    }
}

/// Elements `(t, r, s-r)` used for the low-`t` cases of the (2,3,6) and (2,4,4) stars.
const CASE_236B_ELEMENTS: [(i64, i64, i64); 3] = [(0, 1, 0), (1, 2, 0), (2, 2, 1)];
const CASE_244_ELEMENTS: [(i64, i64, i64); 3] = [(0, 1, 0), (1, 2, 0), (2, 3, 1)];

pub fn reproduce_table(which: TableId) -> Vec<CoboundaryTypeRow> {
    let d = which.data();
    let search = |n: i64| (0..=n).map(|t| xterm_coboundary_type(&d, t)).collect();
    let given = |els: &[(i64, i64, i64)]| els.iter().map(|&(t, r, sr)| classify_element(&d, t, r, sr)).collect();
    match which {
        TableId::Table1 => search(16),
        TableId::Table2 => search(43),
        TableId::Case236a => search(4),
        TableId::Case236b => given(&CASE_236B_ELEMENTS),
        TableId::Case244 => given(&CASE_244_ELEMENTS),
    }
}

/// Tab-separated, one line per `t`: t, min{s}, r, min{s-r}, Type.
pub fn render_table(rows: &[CoboundaryTypeRow]) -> String {
    let mut out = String::from("t\tmin{s}\tr\tmin{s-r}\tType\n");
    let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
    for row in rows {
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", row.t, row.s_min, opt(row.r), opt(row.s_minus_r), row.kind));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(which: TableId) -> StarCohomologyData {
        which.data()
    }

    #[test]
    fn spot_rows() {
        let d = case(TableId::Table1);
        let r = xterm_coboundary_type(&d, 4);
        assert_eq!((r.s_min, r.r, r.s_minus_r, r.kind), (6, Some(4), Some(2), CobType::A));
        let d = case(TableId::Table2);
        let r = xterm_coboundary_type(&d, 4);
        assert_eq!((r.s_min, r.r, r.s_minus_r, r.kind), (5, Some(0), Some(5), CobType::D));
        let r = xterm_coboundary_type(&d, 2);
        assert_eq!((r.s_min, r.r, r.s_minus_r, r.kind), (3, Some(2), Some(1), CobType::C));
        let r = xterm_coboundary_type(&d, 43);
        assert_eq!((r.s_min, r.r, r.s_minus_r, r.kind), (52, Some(30), Some(22), CobType::A));
    }

    #[test]
    fn yterm_examples() {
        for t in 0..40 {
            assert!(yterm_vanishing_check(&StarCohomologyData::from_slopes((1, 2), (1, 2), (4, 3)), t));
        }
        let d = case(TableId::Table2);
        assert!(yterm_vanishing_check(&d, 13));
        assert!(yterm_vanishing_check(&StarCohomologyData::from_slopes((2, 3), (2, 3), (5, 3)), 0));
    }

    #[test]
    fn tails_match_stated_thresholds() {
        assert_eq!(xterm_tail(&case(TableId::Table1)).unwrap().threshold, 17);
        assert_eq!(xterm_tail(&case(TableId::Table2)).unwrap().threshold, 44);
        assert_eq!(xterm_tail(&case(TableId::Table2)).unwrap().constant, (22, 15));
        assert_eq!(yterm_tail(&case(TableId::Table2)).unwrap().threshold, 14);
        assert!(xterm_tail(&case(TableId::Table2)).unwrap().verify());
    }

    #[test]
    fn gate_blocks_type_d() {
        let mut d = case(TableId::Table2);
        d.gates[2] = false;
        let r = xterm_coboundary_type(&d, 4);
        assert_eq!(r.kind, CobType::Fail);
        assert!(r.note.unwrap().contains("alpha3"));
    }

    #[test]
    fn given_elements() {
        let k: Vec<CobType> = reproduce_table(TableId::Case236b).iter().map(|r| r.kind).collect();
        assert_eq!(k, vec![CobType::A, CobType::B, CobType::C]);
        let k: Vec<CobType> = reproduce_table(TableId::Case244).iter().map(|r| r.kind).collect();
        assert_eq!(k, vec![CobType::A, CobType::B, CobType::A]);
        let k: Vec<CobType> = reproduce_table(TableId::Case236a).iter().map(|r| r.kind).collect();
        assert_eq!(k, vec![CobType::A, CobType::B, CobType::A, CobType::A, CobType::A]);
    }

    #[test]
    fn rows_satisfy_their_type() {
        for which in [TableId::Table1, TableId::Table2, TableId::Case236a] {
            let d = case(which);
            for row in reproduce_table(which) {
                assert!(row_satisfies(&d, row.t, row.r.unwrap(), row.s_minus_r.unwrap(), row.kind), "{row:?}");
            }
        }
    }
}
