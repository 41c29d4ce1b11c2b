//! Run reports shared by the command-line front end: JSON form and text form.

use crate::corpus::CriterionResult;
use crate::f_classify::FClassification;
use crate::fedder_lab::{render_catalog, UniquenessReport};
use crate::plumbing_cohomology::{render_table, CechRank, CoboundaryTypeRow, FunctionalTerm, TailBound, TautMethod, TautnessVerdict};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

impl InputDigest {
    pub fn of(name: &str, data: &[u8]) -> Self {
        let hash = Sha256::digest(data);
        let sha256 = hash.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        InputDigest { name: name.into(), sha256, bytes: data.len() as u64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportBody {
    Classify { p: u64, classification: FClassification, clause: String, tautness: String },
    Taut { p: u64, verdict: TautnessVerdict },
    Fedder { p: u64, polynomial: String, f_pure: bool },
    Catalog(UniquenessReport),
    Table { which: String, caption: String, rows: Vec<CoboundaryTypeRow> },
    H1 { p: u64, multiplicities: Vec<i64>, rank: CechRank },
    Corpus { criteria: Vec<CriterionResult> },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub body: ReportBody,
    pub exit_status: i32,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain no non-string map keys")
    }

    pub fn from_json(text: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        render_body(&self.body)
    }
}

pub fn classification_short(c: &FClassification) -> &'static str {
    match c {
        FClassification::FRegular => "F-regular",
        FClassification::FPureNonRDP(_) => "F-pure, not F-regular",
        FClassification::RDPEquationDependent { .. } => "F-purity depends on the equation",
        FClassification::NotFPure(_) => "not F-pure",
        FClassification::NotApplicable(_) => "not applicable",
    }
}

pub fn tautness_word(v: &TautnessVerdict) -> &'static str {
    match v {
        TautnessVerdict::Taut(_) => "taut",
        TautnessVerdict::NotTautEvidence(_) => "not taut (H1 nonzero)",
        TautnessVerdict::ModuliFamily { .. } => "moduli family",
        TautnessVerdict::Inconclusive { .. } => "tautness inconclusive",
    }
}

fn tail_line(name: &str, t: &TailBound) -> String {
    format!(
        "{name} tail: ({}/{})t - {}/{} >= 0 for t >= {}\n",
        t.margin.0, t.margin.1, t.constant.0, t.constant.1, t.threshold
    )
}

fn cech_lines(r: &CechRank) -> String {
    let mut s = format!(
        "rank: {}\nstable: {}\nwindow: {},{}\ndoubled rank: {}\ntargets: {}\ngenerators: {}\nblocks: {}\n",
        r.rank, r.stable, r.window.0, r.window.1, r.doubled_rank, r.targets, r.generators, r.blocks
    );
    for w in &r.witnesses {
        let dir = if w.dir == 0 { "X d/dX" } else { "Y d/dY" };
        let base = if w.pole { "(X-1)" } else { "X" };
        let _ = writeln!(s, "witness: curve {} {base}^{} Y^{} {dir}", w.v, w.e, w.t);
    }
    s
}

pub fn render_verdict(v: &TautnessVerdict) -> String {
    let mut s = format!("{}\n", v.tag());
    match v {
        TautnessVerdict::Taut(TautMethod::ChainRule) => s.push_str("chain graph\n"),
        TautnessVerdict::Taut(TautMethod::H1Vanishes { rows, t_range, nu0, yterm_tail, xterm_tail, gates }) => {
            let _ = writeln!(s, "nu0: {nu0}\nchecked t: {}..={}", t_range.0, t_range.1);
            let _ = writeln!(s, "gates: {} {} {}", gates[0], gates[1], gates[2]);
            s.push_str(&tail_line("y-term", yterm_tail));
            s.push_str(&tail_line("x-term", xterm_tail));
            s.push_str(&render_table(rows));
        }
        TautnessVerdict::NotTautEvidence(ob) => {
            let _ = writeln!(s, "centers: {} {}\nmiddle: {:?}", ob.centers.0, ob.centers.1, ob.middle);
            let _ = writeln!(s, "multiplicities: {:?}", ob.multiplicities);
            s.push_str("functional:");
            for f in &ob.functional {
                match f {
                    FunctionalTerm::XSum { v, coeff } => {
                        let _ = write!(s, " +{coeff}*sum_e[curve {v}, X^e X d/dX]");
                    }
                    FunctionalTerm::YConst { v, coeff } => {
                        let _ = write!(s, " +{coeff}*[curve {v}, Y d/dY]");
                    }
                }
            }
            let _ = writeln!(s, " (mod {})", ob.p);
            let _ = writeln!(s, "value 1 on curve {} X d/dX; zero on {} coboundaries", ob.target.v, ob.generators_checked);
        }
        TautnessVerdict::ModuliFamily { orbits } => {
            for o in orbits {
                let _ = writeln!(s, "admissible cross-ratios: {o:?}");
            }
        }
        TautnessVerdict::Inconclusive { reason, evidence } => {
            let _ = writeln!(s, "reason: {reason}");
            if let Some(r) = evidence {
                s.push_str(&cech_lines(r));
            }
        }
    }
    s
}

pub fn render_body(body: &ReportBody) -> String {
    match body {
        ReportBody::Classify { classification, clause, tautness, .. } => {
            format!("{}; {tautness}\n{clause}\n", classification_short(classification))
        }
        ReportBody::Taut { verdict, .. } => render_verdict(verdict),
        ReportBody::Fedder { f_pure, .. } => format!("F-pure: {f_pure}\n"),
        ReportBody::Catalog(rep) => {
            let mut s = render_catalog(rep);
            let _ = writeln!(s, "uniqueness: {}", if rep.pass { "pass" } else { "FAIL" });
            s
        }
        ReportBody::Table { rows, .. } => render_table(rows),
        ReportBody::H1 { multiplicities, rank, .. } => format!("multiplicities: {multiplicities:?}\n{}", cech_lines(rank)),
        ReportBody::Corpus { criteria } => criteria
            .iter()
            .map(|r| format!("criterion {}: {} [{}] {} ms - {}\n", r.id, if r.pass { "PASS" } else { "FAIL" }, r.name, r.millis, r.detail))
            .collect(),
        ReportBody::Error { message } => format!("error: {message}\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_hex_sha256() {
        let d = InputDigest::of("x", b"abc");
        assert_eq!(d.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn error_round_trip() {
        let r = RunReport {
            command: vec!["fedder".into()],
            inputs: vec![],
            body: ReportBody::Error { message: "bad".into() },
            exit_status: 1,
        };
        assert_eq!(RunReport::from_json(&r.to_json()).unwrap(), r);
    }
}
