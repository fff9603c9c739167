//! The `albv` command line: parse a `.albv` document, run one command,
//! print a text or JSON report.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! or document errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::calculus::schouten;
use crate::document::{parse_spec, Resolved};
use crate::error::{Error, Result};
use crate::exterior::{blades, star, star_inv, GradedElem, Side};
use crate::homology::{
    lie_algebra_modular_character, modular_relation_check, monomial_basis, question4_defect,
    star_conjugation_check, BettiRecord, BettiTable, Grading, WeightedComplex,
};
use crate::poly::Poly;
use crate::suites::{self, Check, Config, Suite};

#[derive(Debug, Parser)]
#[command(name = "albv", version, about = "Exact calculus on Lie algebroids")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Load documents whose algebroid or bivector fails the axioms.
    #[arg(long, global = true)]
    pub no_validate: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebroid axioms (and `[π,π] = 0` when a bivector is given).
    Validate { file: PathBuf },
    /// Betti table of the algebroid cohomology, plus Poisson cohomology.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_weight: u32,
    },
    /// Betti table of the homology of the document's connection.
    Homology {
        file: PathBuf,
        /// Koszul–Brylinski homology of the Poisson bivector instead.
        #[arg(long)]
        kb: bool,
        #[arg(long, default_value_t = 2)]
        max_weight: u32,
    },
    /// Modular vector field or modular character.
    Modular { file: PathBuf },
    /// Hodge-type star on forms of one degree.
    Star {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Seeded property suites.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_deg: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Algebroid,
    Bv,
    Homology,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Core => Suite::Core,
            SuiteArg::Algebroid => Suite::Algebroid,
            SuiteArg::Bv => Suite::Bv,
            SuiteArg::Homology => Suite::Homology,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub label: String,
    pub rank: usize,
    pub max_weight: u32,
    pub grading: Grading,
    pub capped: bool,
    pub records: Vec<BettiRecord>,
    pub totals: Vec<usize>,
}

impl From<&BettiTable> for TableReport {
    fn from(t: &BettiTable) -> Self {
        TableReport {
            label: t.label.clone(),
            rank: t.rank,
            max_weight: t.max_weight,
            grading: t.grading,
            capped: t.is_capped(),
            records: t.records(),
            totals: t.totals(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub tables: Vec<TableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_s: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    text_tables: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            checks: Vec::new(),
            tables: Vec::new(),
            sign_s: None,
            notes: Vec::new(),
            text_tables: Vec::new(),
        }
    }

    fn table(&mut self, t: &BettiTable) {
        self.tables.push(t.into());
        self.text_tables.push(t.to_string());
    }

    fn check(&mut self, name: &str, witness: Option<String>) {
        self.checks.push(Check::new(name, witness));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            writeln!(out, "{n}").unwrap();
        }
        for t in &self.text_tables {
            writeln!(out, "{t}").unwrap();
        }
        for c in &self.checks {
            let s = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(out, "{}: {s}", c.name).unwrap();
            if let Some(w) = &c.witness {
                writeln!(out, "  witness: {w}").unwrap();
            }
        }
        if let Some(s) = self.sign_s {
            writeln!(out, "sign s = {s}").unwrap();
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// What the binary writes and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome {
            code: if report.passed() { 0 } else { 1 },
            stdout: if cli.json { report.render_json() } else { report.render_text() },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn command_name(c: &Command) -> (&'static str, &PathBuf) {
    match c {
        Command::Validate { file } => ("validate", file),
        Command::Cohomology { file, .. } => ("cohomology", file),
        Command::Homology { file, .. } => ("homology", file),
        Command::Modular { file } => ("modular", file),
        Command::Star { file, .. } => ("star", file),
        Command::Verify { file, .. } => ("verify", file),
    }
}

/// Run the parsed command. `Err` means a usage or document error.
pub fn execute(cli: &Cli) -> Result<Report> {
    let (name, path) = command_name(&cli.command);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    let mut report = Report::new(name);
    if let Command::Validate { .. } = cli.command {
        validate(&parse_spec(&text, false)?, &mut report)?;
        return Ok(report);
    }
    let doc = match parse_spec(&text, !cli.no_validate) {
        Ok(d) => d,
        Err(e @ (Error::Validation(_) | Error::NotPoisson(_))) => {
            report.check("axioms", Some(e.to_string()));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    match &cli.command {
        Command::Validate { .. } => unreachable!(),
        Command::Cohomology { max_weight, .. } => cohomology(&doc, *max_weight, &mut report)?,
        Command::Homology { kb, max_weight, .. } => homology(&doc, *kb, *max_weight, &mut report)?,
        Command::Modular { .. } => modular(&doc, &mut report)?,
        Command::Star { degree, .. } => star_command(&doc, *degree, &mut report)?,
        Command::Verify { suite, trials, seed, max_deg, .. } => {
            let cfg = Config { trials: *trials, seed: *seed, max_deg: *max_deg };
            let r = suites::run(&doc, (*suite).into(), &cfg)?;
            report.checks = r.checks;
            report.sign_s = r.sign_s;
        }
    }
    Ok(report)
}

fn validate(doc: &Resolved, report: &mut Report) -> Result<()> {
    let a = &doc.algebroid;
    let v = a.validate();
    report.check("axioms", v.witnesses.first().map(|w| w.describe(a.frame_names())));
    if let Some(ps) = &doc.poisson {
        let sq = schouten(ps.tangent(), ps.bivector(), ps.bivector())?;
        report.check("poisson", (!sq.is_zero()).then(|| format!("[π,π] = {sq}")));
    }
    if !doc.trivial_connection {
        let c = &doc.connection;
        if c.is_flat() {
            report.notes.push(format!("connection α = {} is flat", a.show(c.alpha())));
        } else {
            let r = crate::bv::curvature(c);
            report.notes.push(format!("connection α = {}, curvature dα = {}", a.show(c.alpha()), a.show(&r)));
        }
    }
    Ok(())
}

/// A table, or a failed check when the operator admits no finite grading.
fn table_or_check(
    c: &WeightedComplex<'_>,
    max_weight: u32,
    report: &mut Report,
) -> Result<Option<BettiTable>> {
    match c.betti(max_weight) {
        Ok(t) => {
            report.table(&t);
            Ok(Some(t))
        }
        Err(e @ (Error::WeightRaising(_) | Error::NotAComplex(_))) => {
            report.check(&format!("{}: grading", c.label()), Some(e.to_string()));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn cohomology(doc: &Resolved, max_weight: u32, report: &mut Report) -> Result<()> {
    table_or_check(&WeightedComplex::cohomology(&doc.algebroid), max_weight, report)?;
    if let Some(ps) = &doc.poisson {
        table_or_check(&WeightedComplex::lichnerowicz(ps.tangent(), ps.bivector()), max_weight, report)?;
    }
    Ok(())
}

fn duality(report: &mut Report, name: &str, h: &BettiTable, c: &BettiTable) {
    let w = (h.reversed() != c.entries)
        .then(|| format!("reversed homology {:?} vs cohomology {:?}", h.reversed(), c.entries));
    report.check(name, w);
}

fn homology(doc: &Resolved, kb: bool, max_weight: u32, report: &mut Report) -> Result<()> {
    if kb {
        let ps = doc.poisson_structure()?;
        let nu = crate::homology::modular_vector_field(ps, &doc.volume)?;
        let h = table_or_check(&WeightedComplex::koszul_brylinski(ps), max_weight, report)?;
        if !nu.is_zero() {
            report.notes.push(format!(
                "modular field ν = {} is nonzero; no duality is asserted",
                ps.tangent().show(&nu)
            ));
            return Ok(());
        }
        let pi = ps.bivector();
        let c = table_or_check(&WeightedComplex::lichnerowicz(ps.tangent(), pi), max_weight, report)?;
        if let (Some(h), Some(c)) = (h, c) {
            duality(report, "duality H_k(P,π) = H^{n-k}_π(P)", &h, &c);
        }
        return Ok(());
    }
    let conn = &doc.connection;
    if !conn.is_flat() {
        let r = crate::bv::curvature(conn);
        report.check("connection is flat", Some(format!("dα = {}", doc.algebroid.show(&r))));
        return Ok(());
    }
    let h = table_or_check(&WeightedComplex::homology(conn), max_weight, report)?;
    if conn.alpha().is_zero() {
        let c = table_or_check(&WeightedComplex::cohomology(&doc.algebroid), max_weight, report)?;
        if let (Some(h), Some(c)) = (h, c) {
            duality(report, "duality H_k(A,∇₀) = H^{n-k}(A)", &h, &c);
        }
    }
    Ok(())
}

fn modular(doc: &Resolved, report: &mut Report) -> Result<()> {
    if let Some(ps) = &doc.poisson {
        let t = ps.tangent();
        let probes = monomial_basis(t.rank(), t.vars(), Side::Dual, 2);
        let m = modular_relation_check(ps, &doc.volume, &probes)?;
        report.notes.push(format!("modular field ν = {}", t.show(&m.nu)));
        report.check("modular field is Poisson", (!m.poisson_field).then(|| "[π, ν] ≠ 0".to_string()));
        report.check("KB - D₀ = s·i_ν", m.relation.witness.clone());
        report.sign_s = m.relation.sign;
        let fields = monomial_basis(t.rank(), t.vars(), Side::A, 2);
        let q = question4_defect(ps, &doc.volume, &fields)?;
        report.check("d_πD + Dd_π = s'·L_ν", q.witness.clone());
        if let Some(s) = q.sign {
            report.notes.push(format!("sign s' = {s}"));
        }
        return Ok(());
    }
    let g = &doc.algebroid;
    if g.base_dim() != 0 {
        return Err(Error::Document(
            "modular needs a [poisson] section on the base or a Lie algebra".into(),
        ));
    }
    let (diff, recovered) = lie_algebra_modular_character(g)?;
    report.notes.push(format!("D_CE - D₀ = i_α with α = {}", g.show(&diff.alpha)));
    report.notes.push(format!("modular character = {}", g.show(recovered.alpha())));
    report.check(
        "D_CE - D₀ = i_α",
        diff.contraction_witness.as_ref().map(|(u, r)| format!("U = {u}: residual {r}")),
    );
    let tr = g.trace_of_ad();
    let w = recovered.alpha().checked_sub(&tr)?;
    report.check("modular character = tr ad", (!w.is_zero()).then(|| format!("tr ad = {tr}")));
    Ok(())
}

fn star_command(doc: &Resolved, degree: usize, report: &mut Report) -> Result<()> {
    let a = &doc.algebroid;
    if degree > a.rank() {
        return Err(Error::DegreeMismatch(format!("degree {degree} exceeds rank {}", a.rank())));
    }
    let mut failure = None;
    for b in blades(a.rank(), degree) {
        let omega = GradedElem::blade(Side::Dual, a.rank(), b, Poly::one(a.vars()));
        let s = star(&omega, &doc.volume);
        report.notes.push(format!("*({}) = {}", a.show(&omega), a.show(&s)));
        if failure.is_none() && star_inv(&s, &doc.volume) != omega {
            failure = Some(format!("*⁻¹* fails on {omega}"));
        }
    }
    report.check("star round trip", failure);
    let w = star_conjugation_check(a, &doc.volume, 2)?
        .map(|(u, l, r)| format!("U = {u}: ∂₀U = {l}, -*d*⁻¹U = {r}"));
    report.check("∂₀ = -*d*⁻¹", w);
    Ok(())
}
