//! Sparse polynomials over F_p in x, y, z; Fedder's F-purity test; the RDP normal-form catalog.

use crate::arith::require_prime;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type Exp = [u32; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpPoly {
    pub p: u64,
    #[serde(with = "term_list")]
    pub terms: BTreeMap<Exp, u64>,
}

/// JSON object keys must be strings, so terms travel as `[[exponents], coeff]` pairs.
mod term_list {
    use super::Exp;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Exp, u64>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Exp, u64>, D::Error> {
        Ok(Vec::<(Exp, u64)>::deserialize(d)?.into_iter().collect())
    }
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { p, terms: BTreeMap::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::monomial(p, 1, [0, 0, 0])
    }

    pub fn monomial(p: u64, c: u64, e: Exp) -> Self {
        let mut f = Self::zero(p);
        f.add_term(e, c);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exp, c: u64) {
        let p = self.p;
        let v = (self.terms.get(&e).copied().unwrap_or(0) + c % p) % p;
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let mut r = self.clone();
        for (&e, &c) in &other.terms {
            r.add_term(e, c);
        }
        r
    }

    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        let mut r = FpPoly::zero(self.p);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let mut e = [0u32; 3];
                for k in 0..3 {
                    e[k] = a[k].checked_add(b[k]).ok_or(Error::Overflow("polynomial exponent"))?;
                }
                r.add_term(e, ca * cb % self.p);
            }
        }
        Ok(r)
    }

    /// Substitutes `x -> u x`, `y -> v y`, `z -> w z`.
    pub fn rescale(&self, u: u64, v: u64, w: u64) -> FpPoly {
        use crate::arith::pow_mod;
        let mut r = FpPoly::zero(self.p);
        for (&e, &c) in &self.terms {
            let s = pow_mod(u, e[0] as u64, self.p) * pow_mod(v, e[1] as u64, self.p) % self.p
                * pow_mod(w, e[2] as u64, self.p)
                % self.p;
            r.add_term(e, c * s % self.p);
        }
        r
    }

    /// Variable `k` of the result is variable `perm[k]` of `self`.
    pub fn permute(&self, perm: [usize; 3]) -> FpPoly {
        let mut r = FpPoly::zero(self.p);
        for (&e, &c) in &self.terms {
            r.add_term([e[perm[0]], e[perm[1]], e[perm[2]]], c);
        }
        r
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest total degree first, then lexicographic in (z, x, y) reversed order for readability.
        let mut ts: Vec<(&Exp, &u64)> = self.terms.iter().collect();
        ts.sort_by(|a, b| (b.0.iter().sum::<u32>(), b.0[2], b.0[0]).cmp(&(a.0.iter().sum::<u32>(), a.0[2], a.0[0])));
        for (e, &c) in ts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            match (c, vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    s: &'a [u8],
    i: usize,
    p: u64,
}

impl PolyParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { line: 1, col: self.i + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected unsigned integer"));
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| Error::Overflow("polynomial literal"))
    }

    fn var(&mut self) -> Result<usize> {
        match self.peek() {
            Some(b'x') => {
                self.i += 1;
                Ok(0)
            }
            Some(b'y') => {
                self.i += 1;
                Ok(1)
            }
            Some(b'z') => {
                self.i += 1;
                Ok(2)
            }
            Some(c) if c.is_ascii_alphabetic() => Err(self.err(&format!("unknown variable `{}`", c as char))),
            _ => Err(self.err("expected variable x, y or z")),
        }
    }

    fn powprod(&mut self, e: &mut Exp) -> Result<()> {
        loop {
            let v = self.var()?;
            let k = if self.peek() == Some(b'^') {
                self.i += 1;
                u32::try_from(self.uint()?).map_err(|_| Error::Overflow("exponent"))?
            } else {
                1
            };
            e[v] = e[v].checked_add(k).ok_or(Error::Overflow("exponent"))?;
            if self.peek() == Some(b'*') {
                self.i += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn term(&mut self) -> Result<(u64, Exp)> {
        let mut e = [0; 3];
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = self.uint()? % self.p;
                if self.peek() == Some(b'*') {
                    self.i += 1;
                    self.powprod(&mut e)?;
                }
                Ok((c, e))
            }
            _ => {
                self.powprod(&mut e)?;
                Ok((1, e))
            }
        }
    }
}

pub fn poly_parse(text: &str, p: u64) -> Result<FpPoly> {
    require_prime(p)?;
    let mut ps = PolyParser { s: text.as_bytes(), i: 0, p };
    let mut f = FpPoly::zero(p);
    let mut sign_neg = false;
    if ps.peek() == Some(b'-') {
        ps.i += 1;
        sign_neg = true;
    }
    loop {
        let (c, e) = ps.term()?;
        f.add_term(e, if sign_neg { (p - c) % p } else { c });
        match ps.peek() {
            None => return Ok(f),
            Some(b'+') => sign_neg = false,
            Some(b'-') => sign_neg = true,
            Some(_) => return Err(ps.err("expected `+`, `-` or end of input")),
        }
        ps.i += 1;
    }
}

pub fn poly_pow(f: &FpPoly, mut e: u64) -> Result<FpPoly> {
    let mut base = f.clone();
    let mut acc = FpPoly::one(f.p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(acc)
}

/// `f^(p-1)` has a monomial outside `(x^p, y^p, z^p)`.
pub fn fedder_is_f_pure(f: &FpPoly) -> Result<bool> {
    if f.terms.contains_key(&[0, 0, 0]) {
        return Err(Error::ConstantTerm);
    }
    let q = f.p as u32;
    let g = poly_pow(f, f.p - 1)?;
    Ok(g.terms.keys().any(|e| e.iter().all(|&k| k < q)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RDPRecord {
    pub graph_label: String,
    pub artin_type: String,
    pub p: u64,
    pub equation_text: String,
    pub equation: FpPoly,
    pub expected_f_pure: bool,
}

fn rec(p: u64, graph: String, artin: String, eq: String, expected: bool) -> RDPRecord {
    let equation = poly_parse(&eq, p).expect("catalog equations are well formed");
    RDPRecord { graph_label: graph, artin_type: artin, p, equation_text: eq, equation, expected_f_pure: expected }
}

/// Artin's normal forms per characteristic. For p = 2 the D-family parameter range
/// is taken as `1 <= r <= n-1`.
pub fn rdp_catalog(p: u64, n_max: u32) -> Result<Vec<RDPRecord>> {
    require_prime(p)?;
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(rec(p, format!("A{n}"), format!("A{n}"), format!("z^{} + x*y", n + 1), true));
    }
    match p {
        2 => {
            for n in 2..=n_max {
                let g = format!("D{}", 2 * n);
                out.push(rec(p, g.clone(), format!("D{}^0", 2 * n), format!("z^2 + x^2*y + x*y^{n}"), false));
                for r in 1..n {
                    out.push(rec(
                        p,
                        g.clone(),
                        format!("D{}^{r}", 2 * n),
                        format!("z^2 + x^2*y + x*y^{n} + x*y^{}*z", n - r),
                        r == n - 1,
                    ));
                }
            }
            for n in 2..=n_max {
                let g = format!("D{}", 2 * n + 1);
                out.push(rec(p, g.clone(), format!("D{}^0", 2 * n + 1), format!("z^2 + x^2*y + y^{n}*z"), false));
                for r in 1..n {
                    out.push(rec(
                        p,
                        g.clone(),
                        format!("D{}^{r}", 2 * n + 1),
                        format!("z^2 + x^2*y + y^{n}*z + x*y^{}*z", n - r),
                        r == n - 1,
                    ));
                }
            }
            let e = |g: &str, t: &str, eq: &str, f: bool| rec(p, g.into(), t.into(), eq.into(), f);
            out.extend([
                e("E6", "E6^0", "z^2 + x^3 + y^2*z", false),
                e("E6", "E6^1", "z^2 + x^3 + y^2*z + x*y*z", true),
                e("E7", "E7^0", "z^2 + x^3 + x*y^3", false),
                e("E7", "E7^1", "z^2 + x^3 + x*y^3 + x^2*y*z", false),
                e("E7", "E7^2", "z^2 + x^3 + x*y^3 + y^3*z", false),
                e("E7", "E7^3", "z^2 + x^3 + x*y^3 + x*y*z", true),
                e("E8", "E8^0", "z^2 + x^3 + y^5", false),
                e("E8", "E8^1", "z^2 + x^3 + y^5 + x*y^3*z", false),
                e("E8", "E8^2", "z^2 + x^3 + y^5 + x*y^2*z", false),
                e("E8", "E8^3", "z^2 + x^3 + y^5 + y^3*z", false),
                e("E8", "E8^4", "z^2 + x^3 + y^5 + x*y*z", true),
            ]);
        }
        _ => {
            for n in 4..=n_max.max(3) {
                out.push(rec(p, format!("D{n}"), format!("D{n}"), format!("z^2 + x^2*y + y^{}", n - 1), true));
            }
            let e = |g: &str, t: &str, eq: &str, f: bool| rec(p, g.into(), t.into(), eq.into(), f);
            match p {
                3 => out.extend([
                    e("E6", "E6^0", "z^2 + x^3 + y^4", false),
                    e("E6", "E6^1", "z^2 + x^3 + y^4 + x^2*y^2", true),
                    e("E7", "E7^0", "z^2 + x^3 + x*y^3", false),
                    e("E7", "E7^1", "z^2 + x^3 + x*y^3 + x^2*y^2", true),
                    e("E8", "E8^0", "z^2 + x^3 + y^5", false),
                    e("E8", "E8^1", "z^2 + x^3 + y^5 + x^2*y^3", false),
                    e("E8", "E8^2", "z^2 + x^3 + y^5 + x^2*y^2", true),
                ]),
                5 => out.extend([
                    e("E6", "E6", "z^2 + x^3 + y^4", true),
                    e("E7", "E7", "z^2 + x^3 + x*y^3", true),
                    e("E8", "E8^0", "z^2 + x^3 + y^5", false),
                    e("E8", "E8^1", "z^2 + x^3 + y^5 + x*y^4", true),
                ]),
                _ => out.extend([
                    e("E6", "E6", "z^2 + x^3 + y^4", true),
                    e("E7", "E7", "z^2 + x^3 + x*y^3", true),
                    e("E8", "E8", "z^2 + x^3 + y^5", true),
                ]),
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub record: RDPRecord,
    pub computed_f_pure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub p: u64,
    pub rows: Vec<CatalogRow>,
    /// (graph label, number of F-pure rows), in catalog order.
    pub f_pure_counts: Vec<(String, usize)>,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Every graph label carries exactly one F-pure normal form, and every flag matches the catalog.
pub fn verify_uniqueness(p: u64, n_max: u32) -> Result<UniquenessReport> {
    let cat = rdp_catalog(p, n_max)?;
    let mut rows = Vec::with_capacity(cat.len());
    let mut counts: Vec<(String, usize)> = Vec::new();
    let mut mismatches = Vec::new();
    for r in cat {
        let fp = fedder_is_f_pure(&r.equation)?;
        if fp != r.expected_f_pure {
            mismatches.push(r.artin_type.clone());
        }
        match counts.iter_mut().find(|(g, _)| *g == r.graph_label) {
            Some(c) => c.1 += fp as usize,
            None => counts.push((r.graph_label.clone(), fp as usize)),
        }
        rows.push(CatalogRow { record: r, computed_f_pure: fp });
    }
    let pass = mismatches.is_empty() && counts.iter().all(|(_, c)| *c == 1);
    Ok(UniquenessReport { p, rows, f_pure_counts: counts, mismatches, pass })
}

/// Text layout: Graph, Type, Defining equation, F-purity.
pub fn render_catalog(report: &UniquenessReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("Rational double points in characteristic {}\n", report.p));
    out.push_str("Graph\tType\tDefining equation\tF-purity\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            row.record.graph_label,
            row.record.artin_type,
            row.record.equation_text,
            if row.computed_f_pure { "F-pure" } else { "-" }
        ));
    }
    out
}
