//! Tautness certificates built from the per-t coboundary search.

use super::cech::{cech_h1_rank_with, CechRank};
use super::obstruction::{dtilde_obstruction_with, DTildeObstruction};
use super::tables::{
    xterm_coboundary_type, xterm_tail, yterm_tail, yterm_vanishing_check, CobType, CoboundaryTypeRow,
    StarCohomologyData, TailBound,
};
use crate::arith::require_prime;
use crate::cycle_engine::{multiplicity_data, multiplicity_data_with, MultiplicityData};
use crate::error::Result;
use crate::f_classify::{hara_f_pure, moduli_family_report, recognize_dtilde, FClassification, FPureCase};
use crate::graph_core::{classify_shape, intersection_matrix, is_negative_definite, is_rational_graph, DualGraph, GraphShape};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TautMethod {
    ChainRule,
    H1Vanishes {
        rows: Vec<CoboundaryTypeRow>,
        /// Inclusive range of `t` checked row by row.
        t_range: (i64, i64),
        nu0: i64,
        yterm_tail: TailBound,
        xterm_tail: TailBound,
        gates: [bool; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TautnessVerdict {
    Taut(TautMethod),
    NotTautEvidence(DTildeObstruction),
    /// Cross-ratio orbits in F_p satisfying the Legendre condition; empty when `p = 2` or none qualify.
    ModuliFamily { orbits: Vec<Vec<u64>> },
    Inconclusive { reason: String, evidence: Option<CechRank> },
}

impl TautnessVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            TautnessVerdict::Taut(TautMethod::ChainRule) => "Taut(ChainRule)",
            TautnessVerdict::Taut(_) => "Taut(H1Vanishes)",
            TautnessVerdict::NotTautEvidence(_) => "NotTautEvidence(H1Nonzero)",
            TautnessVerdict::ModuliFamily { .. } => "ModuliFamily",
            TautnessVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn is_taut(&self) -> bool {
        matches!(self, TautnessVerdict::Taut(_))
    }
}

#[derive(Debug, Clone, Default)]
pub struct TautOptions {
    pub z_tilde: Option<Vec<i64>>,
    /// Check rows up to at least this `t`.
    pub t_max: Option<i64>,
    /// Čech window for D-tilde graphs without an explicit obstruction; `None` skips it.
    pub window: Option<(i64, i64)>,
}

fn inconclusive(reason: impl Into<String>) -> TautnessVerdict {
    TautnessVerdict::Inconclusive { reason: reason.into(), evidence: None }
}

pub fn taut_certificate(g: &DualGraph, p: u64) -> Result<TautnessVerdict> {
    taut_certificate_with(g, p, &TautOptions { window: Some((8, 2)), ..TautOptions::default() })
}

pub fn taut_certificate_with(g: &DualGraph, p: u64, opts: &TautOptions) -> Result<TautnessVerdict> {
    require_prime(p)?;
    let shape = match classify_shape(g) {
        Ok(s) => s,
        Err(e) => return Ok(inconclusive(e.to_string())),
    };
    if !is_negative_definite(&intersection_matrix(g)) {
        return Ok(inconclusive("intersection matrix is not negative definite"));
    }
    match is_rational_graph(g) {
        Ok(true) => {}
        Ok(false) => return Ok(inconclusive("graph is not rational")),
        Err(e) => return Ok(inconclusive(e.to_string())),
    }
    let star = match shape {
        GraphShape::Chain => return Ok(TautnessVerdict::Taut(TautMethod::ChainRule)),
        GraphShape::Star(s) => s,
        GraphShape::Empty => return Ok(inconclusive("empty graph")),
        GraphShape::Other(_) if recognize_dtilde(g).is_some() => return dtilde_verdict(g, p, opts),
        GraphShape::Other(r) => return Ok(inconclusive(format!("no certificate for shape: {r}"))),
    };
    if star.type_tuple == [2, 2, 2, 2] {
        let orbits = if p == 2 { Vec::new() } else { moduli_family_report(g, p)? };
        return Ok(TautnessVerdict::ModuliFamily { orbits });
    }
    let cls = hara_f_pure(g, p, None)?;
    let handled = matches!(
        cls,
        FClassification::FRegular
            | FClassification::FPureNonRDP(FPureCase::Type333 | FPureCase::Type236 | FPureCase::Type244)
    );
    if !handled {
        return Ok(inconclusive(format!("criterion does not apply: {}", cls.clause())));
    }
    let md = match multiplicities(g, p, opts) {
        Ok(md) => md,
        Err(e) => return Ok(inconclusive(e.to_string())),
    };
    let data = match StarCohomologyData::from_star(&star, &md, p) {
        Ok(d) => d,
        Err(e) => return Ok(inconclusive(e.to_string())),
    };
    star_certificate(&data, opts.t_max)
}

fn multiplicities(g: &DualGraph, p: u64, opts: &TautOptions) -> Result<MultiplicityData> {
    match &opts.z_tilde {
        Some(z) => multiplicity_data_with(g, p, z),
        None => multiplicity_data(g, p),
    }
}

/// Row-by-row check on `[0, T]` plus the symbolic tails past `T`.
pub fn star_certificate(data: &StarCohomologyData, t_max: Option<i64>) -> Result<TautnessVerdict> {
    let (Some(yt), Some(xt)) = (yterm_tail(data), xterm_tail(data)) else {
        return Ok(inconclusive("central slope margin is not positive"));
    };
    if !yt.verify() || !xt.verify() {
        return Ok(inconclusive("tail inequality fails at its threshold"));
    }
    let nu0 = data.nu0.unwrap_or(1);
    let top = (nu0 - 1).max(yt.threshold).max(xt.threshold).max(t_max.unwrap_or(0));
    let mut rows = Vec::with_capacity(top as usize + 1);
    for t in 0..=top {
        if !yterm_vanishing_check(data, t) {
            return Ok(inconclusive(format!("y-term inequality fails at t={t}")));
        }
        let row = xterm_coboundary_type(data, t);
        if row.kind == CobType::Fail {
            let why = row.note.clone().unwrap_or_default();
            return Ok(inconclusive(format!("no coboundary type at t={t}: {why}")));
        }
        rows.push(row);
    }
    Ok(TautnessVerdict::Taut(TautMethod::H1Vanishes {
        rows,
        t_range: (0, top),
        nu0,
        yterm_tail: yt,
        xterm_tail: xt,
        gates: data.gates,
    }))
}

fn dtilde_verdict(g: &DualGraph, p: u64, opts: &TautOptions) -> Result<TautnessVerdict> {
    let md = match multiplicities(g, p, opts) {
        Ok(md) => md,
        Err(e) => return Ok(inconclusive(e.to_string())),
    };
    if let Some(ob) = dtilde_obstruction_with(g, p, &md)? {
        return Ok(TautnessVerdict::NotTautEvidence(ob));
    }
    let Some(window) = opts.window else {
        return Ok(inconclusive("D-tilde graph: no obstruction and no Čech window requested"));
    };
    let rank = match cech_h1_rank_with(g, p, &md, window) {
        Ok(r) => r,
        Err(e) => return Ok(inconclusive(e.to_string())),
    };
    let reason = format!(
        "D-tilde graph: no obstruction; Čech evidence rank {} (doubled window rank {})",
        rank.rank, rank.doubled_rank
    );
    Ok(TautnessVerdict::Inconclusive { reason, evidence: Some(rank) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> DualGraph {
        DualGraph::star(2, &[vec![2], vec![2, 2], vec![2, 2, 2, 2]])
    }

    #[test]
    fn chain_rule() {
        for p in [2, 3, 5] {
            let v = taut_certificate(&DualGraph::chain(&[2, 3, 2]), p).unwrap();
            assert_eq!(v, TautnessVerdict::Taut(TautMethod::ChainRule));
        }
    }

    #[test]
    fn e8_at_seven_is_taut() {
        let v = taut_certificate(&e8(), 7).unwrap();
        let TautnessVerdict::Taut(TautMethod::H1Vanishes { t_range, nu0, .. }) = v else {
            panic!("{v:?}")
        };
        assert_eq!(nu0, 282);
        assert_eq!(t_range, (0, 281));
    }

    #[test]
    fn e8_at_five_is_inconclusive() {
        let v = taut_certificate(&e8(), 5).unwrap();
        assert_eq!(v.tag(), "Inconclusive");
    }

    #[test]
    fn four_branch_star() {
        let g = DualGraph::star(3, &[vec![2], vec![2], vec![2], vec![2]]);
        assert!(matches!(taut_certificate(&g, 5).unwrap(), TautnessVerdict::ModuliFamily { .. }));
    }
}
