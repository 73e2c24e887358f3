//! Argument parsing and the command handlers. Handlers write to a string
//! so they can be driven from tests.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qkz_core::combinatorics::{rho, Basis, QuiverData};
use qkz_core::qkz::{
    build_psi_fundamental, check_cyclicity, check_exchange, check_wheel, fuse_psi, qkz_step,
    PsiVector,
};
use qkz_core::rmatrix::{
    fused_rcheck, verify_comm, verify_unitarity, verify_ybe, ExchangeFamily, StandardFamily,
};
use qkz_core::slice::{
    build_slice, emit_deformed_equations, emit_equations, intersect_with_n, Restriction,
    SliceModel,
};
use serde::Serialize;

use crate::fixtures::Appendix;
use crate::psi_io::PsiFile;
use crate::report::{CheckReport, ReportFile, Status, SCHEMA};
use crate::{sampling, suite};

#[derive(Debug, Parser)]
#[command(name = "qkz", version, about = "Multidegree vectors, R-matrices and qKZ identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall times in reports (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or check Ψ vectors.
    #[command(subcommand)]
    Psi(PsiCommand),
    /// Slice equations and the worked example's components.
    #[command(subcommand)]
    Slice(SliceCommand),
    /// R-matrices and their identities.
    #[command(subcommand)]
    Rmat(RmatCommand),
    /// Every check of the worked example against the fixtures.
    Appendix,
}

#[derive(Debug, Subcommand)]
pub enum PsiCommand {
    /// Build Ψ in the standard basis; fused when `--m` is not all ones.
    Build(PsiBuild),
    /// Check a Ψ file.
    Verify(PsiVerify),
}

#[derive(Debug, Args)]
pub struct PsiBuild {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PsiCheck {
    Degree,
    Wheel,
    Exchange,
    Cyclicity,
    Qkz,
    All,
}

#[derive(Debug, Args)]
pub struct PsiVerify {
    #[arg(long, value_enum, default_value_t = PsiCheck::All)]
    pub check: PsiCheck,
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum SliceCommand {
    /// Coordinates, weights and relations of a slice.
    Emit(SliceEmit),
    /// The slice checks of the worked example, plus sampled labels.
    VerifyAppendix(SliceLabels),
}

#[derive(Debug, Args)]
pub struct SliceEmit {
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Jordan type; zeros are ignored.
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<usize>,
    /// Deform `X^L = 0` to `∏(X − t_a) = 0`.
    #[arg(long)]
    pub deform: bool,
    /// Keep only the coordinates strictly above the block diagonal.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SliceLabels {
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum RmatCommand {
    /// Print Ř for `Λ^a ⊗ Λ^b`.
    Show(RmatShow),
    /// Check YBE, unitarity or far commutation.
    Verify(RmatVerify),
}

#[derive(Debug, Args)]
pub struct RmatShow {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
    #[arg(long, default_value_t = 1)]
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RmatCheck {
    Ybe,
    Unitarity,
    Comm,
    All,
}

#[derive(Debug, Args)]
pub struct RmatVerify {
    #[arg(long, value_enum, default_value_t = RmatCheck::All)]
    pub check: RmatCheck,
    #[arg(long)]
    pub k: usize,
    /// Block sizes; defaults to four fundamental factors.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
}

/// What a command produced: the text to print and whether it succeeded.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Psi(PsiCommand::Build(a)) => psi_build(cli, a),
        Command::Psi(PsiCommand::Verify(a)) => {
            let text = std::fs::read_to_string(&a.input)
                .with_context(|| format!("reading {}", a.input.display()))?;
            let file: PsiFile = serde_json::from_str(&text)?;
            let psi = file.to_psi()?;
            Ok(reports(cli, psi_verify(&psi, a.check)))
        }
        Command::Slice(SliceCommand::Emit(a)) => slice_emit(cli, a),
        Command::Slice(SliceCommand::VerifyAppendix(a)) => {
            let app = Appendix::load()?;
            let mut out = Vec::new();
            for (name, f) in [
                ("equations", suite::equations as fn(&Appendix) -> Result<usize>),
                ("components", suite::components),
                ("multidegrees", suite::multidegrees),
                ("deformed-equations", suite::deformed),
            ] {
                out.push(CheckReport::run(name, suite::INSTANCE, || f(&app)));
            }
            out.push(CheckReport::run("labels", &format!("seed {}", a.seed), || {
                labels_check(&app, a.seed, a.samples)
            }));
            Ok(reports(cli, out))
        }
        Command::Rmat(RmatCommand::Show(a)) => rmat_show(cli, a),
        Command::Rmat(RmatCommand::Verify(a)) => Ok(reports(cli, rmat_verify(a))),
        Command::Appendix => Ok(reports(cli, suite::run_embedded())),
    }
}

fn reports(cli: &Cli, mut r: Vec<CheckReport>) -> Output {
    if !cli.timings {
        r = r.into_iter().map(CheckReport::without_timing).collect();
    }
    let ok = r.iter().all(|x| x.status != Status::Fail);
    let text = match cli.format {
        Format::Json => json(&ReportFile::new(r)),
        Format::Text => r.iter().map(|x| format!("{x}\n")).collect(),
    };
    Output { text, ok }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn psi_build(cli: &Cli, a: &PsiBuild) -> Result<Output> {
    let psi1 = build_psi_fundamental(a.k, &a.lambda)?;
    let psi = match &a.m {
        Some(m) if m.iter().any(|&x| x != 1) => fuse_psi(&psi1, m)?,
        Some(m) if m.len() != psi1.sizes.len() => {
            bail!("m has {} entries, λ has {} boxes", m.len(), psi1.sizes.len())
        }
        _ => psi1,
    };
    let text = match cli.format {
        Format::Json => json(&PsiFile::from_psi(&psi)),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "k={} λ={:?} m={:?}: {} labels", psi.k, psi.lambda, psi.sizes, psi.len())?;
            for (l, e) in psi.labels.iter().zip(&psi.entries) {
                if !e.is_zero() {
                    writeln!(s, "{l}  {e}")?;
                }
            }
            s
        }
    };
    Ok(Output { text, ok: true })
}

/// Minimal sets of positions whose sizes add up to more than k.
fn wheel_positions(sizes: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = sizes.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let pos: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let total: usize = pos.iter().map(|&i| sizes[i]).sum();
        if pos.len() < 2 || total <= k {
            continue;
        }
        if pos.iter().any(|&i| total - sizes[i] > k) {
            continue;
        }
        out.push(pos.iter().map(|i| i + 1).collect());
    }
    out
}

pub fn psi_verify(psi: &PsiVector, check: PsiCheck) -> Vec<CheckReport> {
    let inst = format!("k={}, λ={:?}, m={:?}", psi.k, psi.lambda, psi.sizes);
    let want = |c: PsiCheck| check == c || check == PsiCheck::All;
    let mut out = Vec::new();
    let standard = psi.basis == Basis::Standard;
    let family = || StandardFamily::new(psi.k, Some(&psi.lambda), &psi.sizes);
    let skipped = |name: &str, why: &str| CheckReport {
        check: name.into(),
        instance: inst.clone(),
        status: Status::Skipped,
        witness: Some(why.into()),
        cases: 0,
        wall_ms: None,
    };
    if want(PsiCheck::Degree) {
        out.push(CheckReport::run("degree", &inst, || {
            psi.check_degrees()?;
            Ok(psi.len())
        }));
    }
    if want(PsiCheck::Wheel) {
        out.push(CheckReport::run("wheel", &inst, || {
            let mut cases = 0;
            for pos in wheel_positions(&psi.sizes, psi.k) {
                cases += check_wheel(psi, &pos)?.cases;
            }
            Ok(cases)
        }));
    }
    let homogeneous = psi.sizes.windows(2).all(|w| w[0] == w[1]);
    for (c, name) in [(PsiCheck::Exchange, "exchange"), (PsiCheck::Cyclicity, "cyclicity"), (PsiCheck::Qkz, "qkz")] {
        if !want(c) {
            continue;
        }
        if !standard || !homogeneous {
            out.push(skipped(name, "needs equal block sizes in the standard basis"));
            continue;
        }
        out.push(CheckReport::run(name, &inst, || {
            let f = family()?;
            let n = psi.sizes.len();
            let mut cases = 0;
            match c {
                PsiCheck::Exchange => {
                    for i in 1..n {
                        cases += check_exchange(&f, psi, psi, i)?.cases;
                    }
                }
                PsiCheck::Cyclicity => {
                    let q = QuiverData::from_weights(psi.k, &psi.lambda, &psi.sizes)?;
                    cases += check_cyclicity(&rho(&q, Basis::Standard)?, psi, psi)?.cases;
                }
                _ => {
                    for i in 1..=n {
                        cases += qkz_step(&f, psi, i)?.cases;
                    }
                }
            }
            Ok(cases)
        }));
    }
    out
}

#[derive(Serialize)]
struct CoordinateJson {
    name: String,
    block: [usize; 2],
    column: usize,
    weight: String,
}

#[derive(Serialize)]
struct SliceJson {
    schema: u32,
    m: Vec<usize>,
    ell: Vec<usize>,
    deformed: bool,
    coordinates: Vec<CoordinateJson>,
    relations: Vec<String>,
}

fn slice_emit(cli: &Cli, a: &SliceEmit) -> Result<Output> {
    let base = SliceModel::new(&a.m, if a.strict { Restriction::StrictUpper } else { Restriction::Full })?;
    let (model, eq) = if a.deform {
        let top = a.ell.iter().copied().max().unwrap_or(0);
        let model = base.with_parameters(top);
        let eq = emit_deformed_equations(&model, &a.ell)?;
        (model, eq)
    } else {
        let eq = emit_equations(&base, &a.ell)?;
        (base, eq)
    };
    let z = qkz_core::algebra::VarSet::indexed(model.n());
    let coords: Vec<CoordinateJson> = model
        .coords
        .iter()
        .enumerate()
        .map(|(v, c)| CoordinateJson {
            name: c.name.clone(),
            block: [c.i + 1, c.j + 1],
            column: c.column,
            weight: model.weight(v, &z).to_string(),
        })
        .collect();
    let text = match cli.format {
        Format::Json => json(&SliceJson {
            schema: SCHEMA,
            m: a.m.clone(),
            ell: a.ell.clone(),
            deformed: a.deform,
            coordinates: coords,
            relations: eq.relations.iter().map(|r| r.to_string()).collect(),
        }),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "# coordinates")?;
            for c in &coords {
                writeln!(s, "{}  {}", c.name, c.weight)?;
            }
            writeln!(s, "# relations")?;
            for r in &eq.relations {
                writeln!(s, "{r} = 0")?;
            }
            s
        }
    };
    Ok(Output { text, ok: true })
}

/// Samples labels of each printed component; passes when at least 9 in
/// 10 match and the rest are dominated by the printed label.
pub fn labels_check(app: &Appendix, seed: u64, samples: usize) -> Result<usize> {
    let n = intersect_with_n(&build_slice(&crate::fixtures::M)?);
    let rel = emit_equations(&n, &crate::fixtures::ELL)?.relations;
    let mut cases = 0;
    for (ci, c) in app.components.iter().enumerate() {
        let m = suite::component_membership(&n, &c.constraints, &rel)?;
        let labels = sampling::sample_labels(&n, &m, seed + ci as u64, samples)?;
        let (hits, below) = sampling::tally(&labels, &c.label);
        if hits * 10 < samples * 9 || !below {
            let seen: Vec<String> = labels.iter().map(|t| t.to_string()).collect();
            bail!("component {}: {hits}/{samples} match, labels {seen:?}", c.label);
        }
        cases += samples;
    }
    Ok(cases)
}

fn rmat_show(cli: &Cli, a: &RmatShow) -> Result<Output> {
    let r = fused_rcheck(a.k, a.a, a.b)?;
    let label = |(s, t): &(Vec<u16>, Vec<u16>)| {
        let f = |v: &[u16]| v.iter().map(|x| x.to_string()).collect::<String>();
        format!("{}|{}", f(s), f(t))
    };
    let m = r.matrix();
    let text = match cli.format {
        Format::Json => {
            #[derive(Serialize)]
            struct RJson {
                schema: u32,
                k: usize,
                a: usize,
                b: usize,
                rows: Vec<String>,
                cols: Vec<String>,
                entries: Vec<Vec<String>>,
            }
            json(&RJson {
                schema: SCHEMA,
                k: a.k,
                a: a.a,
                b: a.b,
                rows: r.target().iter().map(label).collect(),
                cols: r.source().iter().map(label).collect(),
                entries: (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).render()).collect())
                    .collect(),
            })
        }
        Format::Text => {
            let mut s = String::new();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let x = m.get(i, j);
                    if !x.is_zero() {
                        writeln!(s, "{} <- {}: {}", label(&r.target()[i]), label(&r.source()[j]), x.render())?;
                    }
                }
            }
            s
        }
    };
    Ok(Output { text, ok: true })
}

fn rmat_verify(a: &RmatVerify) -> Vec<CheckReport> {
    let sizes = a.sizes.clone().unwrap_or_else(|| vec![1; 4]);
    let inst = format!("k={}, sizes {sizes:?}", a.k);
    let want = |c: RmatCheck| a.check == c || a.check == RmatCheck::All;
    let family = StandardFamily::new(a.k, None, &sizes);
    let f = match family {
        Ok(f) => f,
        Err(e) => return vec![CheckReport::run("rmatrix", &inst, || Err(e.into()))],
    };
    let n = sizes.len();
    let fam: &dyn ExchangeFamily = &f;
    let mut out = Vec::new();
    if want(RmatCheck::Ybe) {
        out.push(CheckReport::run("ybe", &inst, || {
            (1..n.saturating_sub(1)).map(|i| Ok(verify_ybe(fam, &sizes, i)?.cases)).sum()
        }));
    }
    if want(RmatCheck::Unitarity) {
        out.push(CheckReport::run("unitarity", &inst, || {
            (1..n).map(|i| Ok(verify_unitarity(fam, &sizes, i)?.cases)).sum()
        }));
    }
    if want(RmatCheck::Comm) {
        out.push(CheckReport::run("comm", &inst, || {
            let mut cases = 0;
            for i in 1..n {
                for j in i + 2..n {
                    cases += verify_comm(fam, &sizes, i, j)?.cases;
                }
            }
            Ok(cases)
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheel_positions_are_minimal() {
        assert_eq!(wheel_positions(&[1, 1, 1], 2), vec![vec![1, 2, 3]]);
        assert_eq!(wheel_positions(&[2, 2, 2, 2], 4).len(), 4);
        assert!(wheel_positions(&[1, 1], 2).is_empty());
    }
}
