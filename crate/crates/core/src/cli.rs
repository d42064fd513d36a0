//! Command-line front end. Every command yields a [`Report`]; only input
//! and I/O problems are errors.

use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cover::{embed_f, in_band_b, preimage_solve, run_example22, CoverMatrix, PreimageCertificate};
use crate::ecseq::LatticeOp;
use crate::error::{Error, Result};
use crate::example18::{run_example18, Example18Config};
use crate::format::{parse_document, Document};
use crate::opmatrix::gop::build_t_example21;
use crate::opmatrix::lmatrix::{LMatrix, PositivityWitness};
use crate::opmatrix::majorant::{describe, refute_majorant, run_example21, run_example23};
use crate::report::Report;

/// Set to `0` to print only step names and the verdict in text mode.
pub const VERBOSE_ENV: &str = "PRERIESZ_VERBOSE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "preriesz", version, about = "Exact checks for matrices over eventually constant sequences")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Last position examined by position-bounded checks.
    #[arg(long, global = true)]
    pub horizon: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positivity, regularity and order continuity of an lmatrix file.
    Check { file: PathBuf },
    /// The cover embedding F(A) of an lmatrix file.
    Embed { file: PathBuf },
    /// Pointwise meet of two covermatrix files.
    Meet { left: PathBuf, right: PathBuf },
    /// Solve F(A) = B for a covermatrix file B.
    Preimage { file: PathBuf },
    /// Refute an lmatrix S as a majorant of the built-in T.
    RefuteMajorant { file: PathBuf },
    /// Replay one of the counterexamples.
    Example {
        #[arg(value_parser = ["18", "21", "22", "23"])]
        id: String,
    },
}

fn read(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)?;
    parse_document(&text)
}

fn lmatrix(path: &Path) -> Result<LMatrix> {
    match read(path)? {
        Document::LMatrix(a) => Ok(a),
        d => Err(Error::Format(format!("{}: expected lmatrix, found {}", path.display(), d.kind()))),
    }
}

fn covermatrix(path: &Path) -> Result<CoverMatrix> {
    match read(path)? {
        Document::CoverMatrix(b) => Ok(b),
        d => Err(Error::Format(format!("{}: expected covermatrix, found {}", path.display(), d.kind()))),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn lines_of(text: &str) -> Vec<String> {
    text.lines().map(str::to_string).collect()
}

fn check(a: &LMatrix) -> Report {
    let mut r = Report::new("check", "positivity, regularity and order continuity");
    let pos = a.is_positive();
    let reg = a.is_regular();
    let oc = a.is_order_continuous();
    let pos_line = match &pos.witness {
        None => "every row satisfies both sign conditions".to_string(),
        Some(PositivityWitness::Alpha { row, col, value }) => {
            format!("a_0{col} + a_{row}{col} = {value} < 0")
        }
        Some(PositivityWitness::Beta { row, lhs, rhs }) => {
            format!("row {row}: a_00 + a_{row}0 = {lhs} < {rhs} = Σ_j (a_0j + a_{row}j)")
        }
    };
    r.step("positive", pos.positive, vec![pos_line], &pos);
    r.step(
        "regular",
        reg.regular,
        vec![format!("sup of absolute row sums {} attained at row {}", reg.sup, reg.attained_at)],
        &reg,
    );
    let oc_line = match &oc.witness {
        None => "every row balances".to_string(),
        Some((i, res)) => format!("row {i} is off balance by {res}"),
    };
    r.step("order-continuous", oc.order_continuous, vec![oc_line], &oc);
    r.verdict = format!(
        "positive: {}, regular: {}{}, order-continuous: {}",
        yes(pos.positive),
        yes(reg.regular),
        if reg.regular { format!(" (sup {})", reg.sup) } else { String::new() },
        yes(oc.order_continuous)
    );
    r
}

fn embed(a: &LMatrix) -> Result<Report> {
    let mut r = Report::new("embed", "the cover embedding F(A)");
    let f = embed_f(a)?;
    let band = in_band_b(&f);
    r.step("F(A)", true, lines_of(&f.to_string()), json!({ "matrix": f.to_string() }));
    r.step(
        "0th column of F(A) is zero",
        band,
        vec![format!("A is order continuous: {}", yes(band))],
        json!({ "in_band": band }),
    );
    r.verdict = format!("F(A) computed; 0th column zero: {}", yes(band));
    Ok(r)
}

fn meet(a: &CoverMatrix, b: &CoverMatrix) -> Result<Report> {
    let mut r = Report::new("meet", "pointwise meet of two cover matrices");
    let m = a.lattice(b, LatticeOp::Meet)?;
    r.step("A ∧ B", true, lines_of(&m.to_string()), json!({ "matrix": m.to_string() }));
    r.verdict = "meet computed".into();
    Ok(r)
}

fn preimage(b: &CoverMatrix) -> Report {
    let mut r = Report::new("preimage", "solve F(A) = B");
    let cert = preimage_solve(b);
    let lines = match &cert {
        PreimageCertificate::Preimage { matrix } => lines_of(&matrix.to_string()),
        PreimageCertificate::Inconsistent {
            column,
            witness_rows: (n, n1),
            values: (v, w),
        } => vec![format!(
            "column {column} after undoing the row sums: rows {n} and {n1} read {v} and {w}, which never settles"
        )],
    };
    let data = match &cert {
        PreimageCertificate::Preimage { matrix } => json!({ "verdict": "preimage", "matrix": matrix.to_string() }),
        c => serde_json::to_value(c).expect("certificate serializes"),
    };
    r.step("certificate", true, lines, data);
    r.verdict = match cert {
        PreimageCertificate::Preimage { .. } => "preimage found".into(),
        PreimageCertificate::Inconsistent { .. } => "inconsistent: no column-finite preimage".into(),
    };
    r
}

fn refute(s: &LMatrix) -> Report {
    let mut r = Report::new("refute-majorant", "is S >= T for the built-in T?");
    let t = build_t_example21();
    let out = refute_majorant(&t, s);
    let verified = out.verify(&t, s);
    r.step("refutation", verified, vec![describe(&out)], &out);
    r.verdict = if out.is_refuted() && verified {
        "S is not a majorant of T".into()
    } else {
        "not refuted".into()
    };
    r
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Report> {
    Ok(match &cli.command {
        Command::Check { file } => check(&lmatrix(file)?),
        Command::Embed { file } => embed(&lmatrix(file)?)?,
        Command::Meet { left, right } => meet(&covermatrix(left)?, &covermatrix(right)?)?,
        Command::Preimage { file } => preimage(&covermatrix(file)?),
        Command::RefuteMajorant { file } => refute(&lmatrix(file)?),
        Command::Example { id } => match id.as_str() {
            "18" => run_example18(&Example18Config {
                horizon: cli.horizon,
                ..Default::default()
            }),
            "21" => run_example21(),
            "22" => run_example22(),
            "23" => run_example23(),
            other => return Err(Error::Format(format!("unknown example {other}"))),
        },
    })
}

pub fn render(report: &Report, format: OutputFormat, verbose: bool) -> String {
    match format {
        OutputFormat::Text => report.to_text(verbose),
        OutputFormat::Json => report.to_json(),
    }
}

pub fn verbose_from_env() -> bool {
    std::env::var(VERBOSE_ENV).map(|v| v != "0").unwrap_or(true)
}

/// Parses `args`, runs, and returns the exit code with stdout and stderr text.
pub fn main_with<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let mut text = e.render().to_string();
            if code != 0 && !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            return if code == 0 { (0, text, String::new()) } else { (code, String::new(), text) };
        }
    };
    match run(&cli) {
        Ok(r) => (0, render(&r, cli.format, verbose_from_env()), String::new()),
        Err(e) => (1, String::new(), format!("error: {e}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_verbs_and_ids_are_usage_errors() {
        assert_eq!(main_with(["preriesz", "frobnicate"]).0, 2);
        assert_eq!(main_with(["preriesz", "example", "19"]).0, 2);
    }

    #[test]
    fn missing_file_is_an_error() {
        let (code, _, err) = main_with(["preriesz", "check", "/nonexistent/p.txt"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn text_and_json_share_the_verdict() {
        let (_, text, _) = main_with(["preriesz", "example", "22"]);
        let (_, js, _) = main_with(["preriesz", "--format", "json", "example", "22"]);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        let verdict = v["verdict"].as_str().unwrap();
        assert!(text.ends_with(&format!("verdict: {verdict}\n")));
    }
}
