use clap::{Parser, Subcommand, ValueEnum};
use singtaut::corpus::run_all;
use singtaut::f_classify::{cross_ratio_orbit, hara_f_pure, CrossRatio};
use singtaut::fedder_lab::{fedder_is_f_pure, poly_parse, verify_uniqueness};
use singtaut::graph_core::{parse_graph, DualGraph};
use singtaut::plumbing_cohomology::{
    cech_h1_rank_with, reproduce_table, taut_certificate_with, TableId, TautOptions, TautnessVerdict,
};
use singtaut::cycle_engine::{multiplicity_data, multiplicity_data_with};
use singtaut::report::{tautness_word, InputDigest, ReportBody, RunReport};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "singtaut", version, about = "F-regularity, F-purity and tautness certificates for weighted dual graphs")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// F-regular / F-pure classification of a graph in characteristic p.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "char")]
        p: u64,
        /// Cross-ratio of the fourth point on a (2,2,2,2) center.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<i64>,
    },
    /// Tautness certificate (H1 of the tangent sheaf of the plumbing).
    Taut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "char")]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<i64>,
        /// Check rows up to at least this t.
        #[arg(long)]
        t_max: Option<i64>,
        /// Čech window S,R used for D-tilde graphs.
        #[arg(long, value_parser = parse_window, default_value = "8,2")]
        window: (i64, i64),
        /// Anti-ample cycle, comma separated in vertex order.
        #[arg(long, value_parser = parse_list)]
        z_tilde: Option<Vec<i64>>,
    },
    /// Fedder's criterion on one polynomial, or the RDP catalog.
    Fedder {
        #[arg(long, required_unless_present = "catalog")]
        poly: Option<String>,
        #[arg(long = "char")]
        p: u64,
        #[arg(long, conflicts_with = "poly")]
        catalog: bool,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Coboundary type tables.
    Tables {
        #[arg(long, value_parser = ["t1", "t2", "c236", "c236a", "c236b", "c244"])]
        which: String,
    },
    /// Cokernel rank of the truncated Čech coboundary map.
    H1 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "char")]
        p: u64,
        #[arg(long, value_parser = parse_window, default_value = "8,2")]
        window: (i64, i64),
        #[arg(long, value_parser = parse_list)]
        z_tilde: Option<Vec<i64>>,
    },
    /// Runs the fixed acceptance checks.
    Corpus,
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}"))).collect()
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    match parse_list(s)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err("expected S,R".into()),
    }
}

type Outcome = Result<(Vec<InputDigest>, ReportBody, bool), String>;

fn read_graph(path: &PathBuf) -> Result<(DualGraph, InputDigest), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| format!("{}: not UTF-8", path.display()))?;
    let g = parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((g, InputDigest::of(&path.display().to_string(), &bytes)))
}

fn run(cmd: &Cmd) -> Outcome {
    let err = |e: singtaut::Error| e.to_string();
    match cmd {
        Cmd::Classify { graph, p, lambda } => {
            let (g, d) = read_graph(graph)?;
            let l = lambda.map(|l| CrossRatio::new(l, *p)).transpose().map_err(err)?;
            let classification = hara_f_pure(&g, *p, l).map_err(err)?;
            let verdict = taut_certificate_with(&g, *p, &TautOptions::default()).map_err(err)?;
            let body = ReportBody::Classify {
                p: *p,
                clause: classification.clause(),
                classification,
                tautness: tautness_word(&verdict).into(),
            };
            Ok((vec![d], body, true))
        }
        Cmd::Taut { graph, p, lambda, t_max, window, z_tilde } => {
            let (g, d) = read_graph(graph)?;
            let opts = TautOptions { z_tilde: z_tilde.clone(), t_max: *t_max, window: Some(*window) };
            let mut verdict = taut_certificate_with(&g, *p, &opts).map_err(err)?;
            if let (TautnessVerdict::ModuliFamily { orbits }, Some(l)) = (&mut verdict, lambda) {
                let l = CrossRatio::new(*l, *p).map_err(err)?;
                let own = cross_ratio_orbit(l.lambda, *p);
                orbits.retain(|o| o.iter().any(|x| own.contains(x)));
            }
            Ok((vec![d], ReportBody::Taut { p: *p, verdict }, true))
        }
        Cmd::Fedder { poly, p, catalog, n_max } => {
            if *catalog {
                let rep = verify_uniqueness(*p, *n_max).map_err(err)?;
                let ok = rep.pass;
                return Ok((vec![], ReportBody::Catalog(rep), ok));
            }
            let text = poly.as_deref().unwrap_or_default();
            let f = poly_parse(text, *p).map_err(err)?;
            let f_pure = fedder_is_f_pure(&f).map_err(err)?;
            let d = InputDigest::of("poly", text.as_bytes());
            Ok((vec![d], ReportBody::Fedder { p: *p, polynomial: f.to_string(), f_pure }, true))
        }
        Cmd::Tables { which } => {
            let id = TableId::parse(which).ok_or_else(|| format!("unknown table `{which}`"))?;
            let rows = reproduce_table(id);
            Ok((vec![], ReportBody::Table { which: which.clone(), caption: id.caption().into(), rows }, true))
        }
        Cmd::H1 { graph, p, window, z_tilde } => {
            let (g, d) = read_graph(graph)?;
            let md = match z_tilde {
                Some(z) => multiplicity_data_with(&g, *p, z),
                None => multiplicity_data(&g, *p),
            }
            .map_err(err)?;
            let rank = cech_h1_rank_with(&g, *p, &md, *window).map_err(err)?;
            Ok((vec![d], ReportBody::H1 { p: *p, multiplicities: md.z, rank }, true))
        }
        Cmd::Corpus => {
            let criteria = run_all();
            let ok = criteria.iter().all(|c| c.pass);
            Ok((vec![], ReportBody::Corpus { criteria }, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let (inputs, body, status) = match run(&cli.cmd) {
        Ok((inputs, body, ok)) => (inputs, body, if ok { 0 } else { 1 }),
        Err(message) => {
            eprintln!("singtaut: {message}");
            (vec![], ReportBody::Error { message }, 1)
        }
    };
    let report = RunReport { command, inputs, body, exit_status: status };
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            if !matches!(report.body, ReportBody::Error { .. }) {
                print!("{}", report.to_text());
            }
        }
    }
    ExitCode::from(status as u8)
}
