use adc_core::complex::{
    direct_sum, phi_map, suspend, tensor, total_dual, validate_complex, verify_phi_epi, verify_suspension_pushout,
    wedge_at_point, BasedComplex,
};
use adc_core::filtration::{build_filtration, certify_all, cross_validate, FiltrationError};
use adc_core::hom::{enumerate_homs, hom_bijection_check, DEFAULT_CAP};
use adc_core::msset::{self, MarkedSimplicialSet, Variant};
use adc_core::mutation::Mutations;
use adc_core::nerve::{rs_nerve, NerveError};
use adc_core::nu::enumerate_cells;
use adc_core::oriental::{oriental, simplicial_operator, MonotoneMap};
use adc_core::suite::{named_complex, run_suite, Profile, Status, SuiteOptions, VerificationReport};
use adc_core::suspect::{profiles, verify_bijection, SuspectError};
use adc_core::theta::{completeness_map, ln_generator, segality_map, theta_adc, NerveMapCheck, ThetaExpr};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Exact computations with augmented directed chain complexes and their nerves.
///
/// A complex argument is either a path to a JSON complex or one of the names `O-1`..`O6`, `O1xO1op`.
#[derive(Parser)]
#[command(name = "adc", version)]
struct Cli {
    /// Coordinate-sum cap for hom enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Print verification results as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orientals and the maps between them.
    #[command(subcommand)]
    Oriental(OrientalCmd),
    /// Constructions on complexes.
    #[command(subcommand)]
    Adch(AdchCmd),
    /// Morphism enumeration.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Steiner-table cells.
    #[command(subcommand)]
    Nu(NuCmd),
    /// Marked simplicial sets.
    #[command(subcommand)]
    Msset(MssetCmd),
    /// Roberts-Street nerves.
    #[command(subcommand)]
    Nerve(NerveCmd),
    /// Types and suspect indices of simplices of a suspension's nerve.
    #[command(subcommand)]
    Suspect(SuspectCmd),
    /// Individual verifications.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Theta shapes, their nerves, and extension maps.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Run the whole verification suite.
    Suite {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Deliberate faults: `tensor-sign`, `suspension-eps`, `parent-clause=N`.
        #[arg(long)]
        mutate: Vec<String>,
    },
}

#[derive(Subcommand)]
enum OrientalCmd {
    /// The complex O[m].
    Build { m: i64 },
    /// Matrices of the map induced by a monotone map, given by its images.
    Op {
        #[arg(long)]
        map: String,
        /// Target dimension; defaults to the largest image.
        #[arg(long)]
        target: Option<usize>,
    },
}

#[derive(Subcommand)]
enum AdchCmd {
    Tensor { left: String, right: String },
    Suspend { complex: String },
    Dual { complex: String },
    Sum { left: String, right: String },
    /// Glue two complexes along one degree-0 generator of each.
    Wedge {
        left: String,
        right: String,
        #[arg(long)]
        left_point: String,
        #[arg(long)]
        right_point: String,
    },
    /// The map O[k+1+l] -> Σ(O[k] ⊗ O[l]°).
    Phi { k: usize, l: usize },
    Validate { complex: String },
}

#[derive(Subcommand)]
enum HomCmd {
    Enumerate {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand)]
enum NuCmd {
    Cells {
        #[arg(long)]
        complex: String,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Prime,
    Doubleprime,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Plain => Variant::Plain,
            VariantArg::Prime => Variant::Prime,
            VariantArg::Doubleprime => Variant::DoublePrime,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Delta3 {
    Eq,
    Sharp,
}

#[derive(Subcommand)]
enum MssetCmd {
    Simplex { m: usize },
    Standard {
        m: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Plain)]
        variant: VariantArg,
    },
    Horn {
        m: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Plain)]
        variant: VariantArg,
    },
    Delta3 {
        #[arg(value_enum)]
        which: Delta3,
    },
    /// Suspension of a marked simplicial set given as JSON.
    Suspend { input: PathBuf },
    Product { left: PathBuf, right: PathBuf },
    Sharp { input: PathBuf },
}

#[derive(Subcommand)]
enum NerveCmd {
    Compute {
        #[arg(long)]
        complex: String,
        /// Take the nerve of the suspension and annotate types and suspect indices.
        #[arg(long)]
        suspend: bool,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
}

#[derive(Subcommand)]
enum SuspectCmd {
    Report {
        #[arg(long)]
        complex: String,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Filtration and horn certificates for the comparison inclusion.
    #[command(name = "thmB", alias = "thmb")]
    ThmB {
        #[arg(long)]
        complex: String,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        /// Also search for a certificate independently and compare.
        #[arg(long)]
        cross_validate: bool,
    },
    Pushout { k: usize, l: usize },
    Epi { k: usize, l: usize },
    /// Suspect simplices against their non-suspect faces in one dimension.
    Bijection {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        m: usize,
    },
    /// Hom sets into a suspension against the tensor summands.
    Homset {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// The complex of a shape such as `[2|[0],[1|[0]]]`.
    Build { expr: String },
    Nerve {
        expr: String,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        /// Multiply by the fully marked `ℓ`-simplex.
        #[arg(long, default_value_t = 0)]
        ell: usize,
    },
    /// The Segal inclusion for the children of `shape`, suspended `j` times.
    Segality {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
    },
    Completeness {
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

/// What a command produced: a JSON document and, for checks, a status.
struct Output {
    doc: Value,
    status: Option<Status>,
    summary: Vec<String>,
}

impl Output {
    fn doc(doc: Value) -> Self {
        Output { doc, status: None, summary: Vec::new() }
    }

    fn verdict(doc: Value, status: Status, summary: Vec<String>) -> Self {
        Output { doc, status: Some(status), summary }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn load_complex(arg: &str) -> Result<BasedComplex> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return serde_json::from_str(&text).with_context(|| format!("parsing {arg}"));
    }
    named_complex(arg).ok_or_else(|| anyhow!("{arg} is neither a file nor a known complex name"))
}

fn load_msset(path: &Path) -> Result<MarkedSimplicialSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_theta(s: &str) -> Result<ThetaExpr> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

fn parse_mutations(args: &[String]) -> Result<Mutations> {
    let mut m = Mutations::none();
    for a in args {
        match a.as_str() {
            "tensor-sign" => m.drop_tensor_sign = true,
            "suspension-eps" => m.drop_suspension_augmentation = true,
            other => {
                let n = other
                    .strip_prefix("parent-clause=")
                    .and_then(|n| n.parse::<u8>().ok())
                    .filter(|n| (1..=7).contains(n))
                    .ok_or_else(|| anyhow!("unknown mutation {other}"))?;
                m.drop_parent_clause = Some(n);
            }
        }
    }
    Ok(m)
}

fn status_of(ok: Option<bool>) -> Status {
    match ok {
        Some(true) => Status::Pass,
        Some(false) => Status::Fail,
        None => Status::Indeterminate,
    }
}

fn map_check(r: &NerveMapCheck) -> Output {
    let doc = json!({
        "source": r.source, "target": r.target, "map": r.map, "mono": r.mono, "problems": r.problems,
    });
    let summary = vec![format!("{:?} -> {:?}", r.source.counts(), r.target.counts())];
    let status = if r.holds() { Status::Pass } else { Status::Fail };
    Output::verdict(doc, status, summary.into_iter().chain(r.problems.iter().cloned()).collect())
}

fn nerve_incomplete(e: &NerveError) -> bool {
    matches!(e, NerveError::Incomplete(_))
}

fn run(cli: &Cli) -> Result<Output> {
    let cap = cli.cap;
    Ok(match &cli.command {
        Command::Oriental(OrientalCmd::Build { m }) => Output::doc(to_value(&oriental(*m))),
        Command::Oriental(OrientalCmd::Op { map, target }) => {
            let images: Vec<usize> =
                map.split(',').map(|s| s.trim().parse::<usize>()).collect::<Result<_, _>>().context("map images")?;
            let n = target.unwrap_or_else(|| images.iter().copied().max().unwrap_or(0));
            let alpha = MonotoneMap::new(images, n).map_err(|e| anyhow!("{e}"))?;
            Output::doc(json!({
                "source": alpha.source_dim(), "target": alpha.target_dim(),
                "matrices": simplicial_operator(&alpha).matrices(),
            }))
        }
        Command::Adch(cmd) => Output::doc(match cmd {
            AdchCmd::Tensor { left, right } => to_value(&tensor(&load_complex(left)?, &load_complex(right)?)),
            AdchCmd::Suspend { complex } => to_value(&suspend(&load_complex(complex)?)),
            AdchCmd::Dual { complex } => to_value(&total_dual(&load_complex(complex)?)),
            AdchCmd::Sum { left, right } => to_value(&direct_sum(&load_complex(left)?, &load_complex(right)?)),
            AdchCmd::Wedge { left, right, left_point, right_point } => {
                to_value(&wedge_at_point(&load_complex(left)?, left_point, &load_complex(right)?, right_point)?)
            }
            AdchCmd::Phi { k, l } => json!({
                "source": oriental((k + l + 1) as i64),
                "target": suspend(&adc_core::complex::tensor_of_orientals(*k as i64, *l as i64)),
                "matrices": phi_map(*k, *l).matrices(),
            }),
            AdchCmd::Validate { complex } => {
                let r = validate_complex(&load_complex(complex)?)?;
                json!({"valid": r.is_valid(), "violations": r.messages()})
            }
        }),
        Command::Hom(HomCmd::Enumerate { source, target }) => {
            let e = enumerate_homs(&load_complex(source)?, &load_complex(target)?, cap);
            if !e.complete {
                eprintln!("warning: enumeration incomplete at cap {cap}");
            }
            Output::doc(to_value(&e))
        }
        Command::Nu(NuCmd::Cells { complex, max_dim }) => {
            let e = enumerate_cells(&load_complex(complex)?, *max_dim, cap);
            if !e.complete {
                eprintln!("warning: enumeration incomplete at cap {cap}");
            }
            Output::doc(to_value(&e))
        }
        Command::Msset(cmd) => Output::doc(to_value(&match cmd {
            MssetCmd::Simplex { m } => msset::simplex(*m),
            MssetCmd::Standard { m, k, variant } => msset::standard(*m, *k, (*variant).into())?,
            MssetCmd::Horn { m, k, variant } => msset::horn(*m, *k, (*variant).into())?,
            MssetCmd::Delta3 { which: Delta3::Eq } => msset::delta3_eq(),
            MssetCmd::Delta3 { which: Delta3::Sharp } => msset::delta3_sharp(),
            MssetCmd::Suspend { input } => msset::suspend_msset(&load_msset(input)?),
            MssetCmd::Product { left, right } => msset::product(&load_msset(left)?, &load_msset(right)?),
            MssetCmd::Sharp { input } => load_msset(input)?.sharp(),
        })),
        Command::Nerve(NerveCmd::Compute { complex, suspend: susp, max_dim }) => {
            let c = load_complex(complex)?;
            let c = if *susp { suspend(&c) } else { c };
            let mut n = rs_nerve(&c, *max_dim, cap)?;
            let annotations = if *susp { to_value(&profiles(&mut n)) } else { Value::Null };
            Output::doc(json!({
                "level_sizes": n.level_sizes(),
                "msset": n.msset(),
                "annotations": annotations,
            }))
        }
        Command::Suspect(SuspectCmd::Report { complex, max_dim }) => {
            let mut n = rs_nerve(&suspend(&load_complex(complex)?), *max_dim, cap)?;
            Output::doc(to_value(&profiles(&mut n)))
        }
        Command::Verify(cmd) => verify(cmd, cap)?,
        Command::Theta(cmd) => match cmd {
            ThetaCmd::Build { expr } => {
                let t = parse_theta(expr)?;
                let tc = theta_adc(&t);
                Output::doc(json!({"expr": t.to_string(), "ranks": tc.complex.ranks(), "complex": tc.complex}))
            }
            ThetaCmd::Nerve { expr, cutoff, ell } => {
                let x = ln_generator(&parse_theta(expr)?, *ell, *cutoff, cap)?;
                Output::doc(json!({"counts": x.counts(), "msset": x}))
            }
            ThetaCmd::Segality { j, shape, cutoff } => {
                let t = parse_theta(shape)?;
                map_check(&segality_map(*j, &t.children, *cutoff, cap)?)
            }
            ThetaCmd::Completeness { j, cutoff } => map_check(&completeness_map(*j, *cutoff, cap)?),
        },
        Command::Suite { profile, jobs, mutate } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let mutations = parse_mutations(mutate)?;
            if mutations.is_active() {
                // Faulty builds panic inside checks; the suite records those as failures.
                std::panic::set_hook(Box::new(|_| {}));
            }
            let report = run_suite(SuiteOptions { profile, cap, mutations, jobs: *jobs });
            suite_output(&report)
        }
    })
}

fn suite_output(report: &VerificationReport) -> Output {
    let mut summary: Vec<String> = report
        .entries
        .iter()
        .map(|e| {
            let first = e.details.first().map(String::as_str).unwrap_or("");
            format!("{:<26} {:<13} {:>7.2}s  {first}", e.id, e.status.to_string(), e.elapsed)
        })
        .collect();
    summary.push(format!(
        "{} pass, {} fail, {} indeterminate",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Indeterminate)
    ));
    let status = match report.exit_code() {
        0 => Status::Pass,
        1 => Status::Fail,
        _ => Status::Indeterminate,
    };
    Output::verdict(to_value(report), status, summary)
}

fn verify(cmd: &VerifyCmd, cap: u64) -> Result<Output> {
    Ok(match cmd {
        VerifyCmd::ThmB { complex, cutoff, cross_validate: cross } => {
            let f = match build_filtration(&load_complex(complex)?, *cutoff, cap) {
                Ok(f) => f,
                Err(FiltrationError::Nerve(e)) if nerve_incomplete(&e) => {
                    return Ok(Output::verdict(json!({"error": e.to_string()}), Status::Indeterminate, vec![e.to_string()]))
                }
                Err(e) => bail!(e),
            };
            let certs = certify_all(&f);
            let mut ok = f.exhausts() && certs.iter().all(|c| c.accepted());
            let mut summary: Vec<String> = certs
                .iter()
                .filter(|c| !c.steps.is_empty() || !c.accepted())
                .map(|c| format!("{}: {} horns, {}", c.stage, c.steps.len(), if c.accepted() { "replayed" } else { "refused" }))
                .collect();
            let cv = cross.then(|| cross_validate(&f, 100_000));
            if let Some(cv) = &cv {
                ok &= cv.agrees();
                summary.push(format!("search: {} horn moves, filtration: {} pairs", cv.horn_moves, cv.filtration_pairs));
            }
            let stages: Vec<Value> =
                f.stages.iter().map(|s| json!({"label": s.label, "name": s.label.to_string(), "size": s.ids.len()})).collect();
            let doc = json!({
                "cutoff": f.cutoff, "exhausts": f.exhausts(), "stages": stages, "certificates": certs,
                "cross_validation": cv,
            });
            Output::verdict(doc, if ok { Status::Pass } else { Status::Fail }, summary)
        }
        VerifyCmd::Pushout { k, l } => {
            let r = verify_suspension_pushout(*k, *l);
            Output::verdict(to_value(&r), status_of(Some(r.holds())), r.details.clone())
        }
        VerifyCmd::Epi { k, l } => {
            let ok = verify_phi_epi(*k, *l);
            Output::verdict(json!({"k": k, "l": l, "epi": ok}), status_of(Some(ok)), Vec::new())
        }
        VerifyCmd::Bijection { complex, m } => match verify_bijection(&load_complex(complex)?, *m, cap) {
            Ok(r) => {
                let summary = std::iter::once(format!("{} suspect, {} non-suspect", r.suspect_count, r.non_suspect_count))
                    .chain(r.problems.iter().cloned())
                    .collect();
                Output::verdict(to_value(&r), status_of(Some(r.holds())), summary)
            }
            Err(SuspectError::Nerve(e)) if nerve_incomplete(&e) => {
                Output::verdict(json!({"error": e.to_string()}), Status::Indeterminate, vec![e.to_string()])
            }
            Err(e) => bail!(e),
        },
        VerifyCmd::Homset { complex, m } => {
            let r = hom_bijection_check(&load_complex(complex)?, *m, cap);
            let summary = std::iter::once(format!("{} summands, {} simplices", r.left_count, r.right_count))
                .chain(r.details.iter().cloned())
                .collect();
            Output::verdict(to_value(&r), status_of(r.bijective), summary)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(3);
        }
    };
    let text = serde_json::to_string_pretty(&out.doc).expect("serializable");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    match out.status {
        None => {
            if cli.out.is_none() {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Some(status) => {
            if cli.json {
                println!("{}", serde_json::to_string(&out.doc).expect("serializable"));
            } else {
                for line in &out.summary {
                    println!("{line}");
                }
                println!("{status}");
            }
            ExitCode::from(match status {
                Status::Pass => 0,
                Status::Fail => 1,
                Status::Indeterminate => 2,
            })
        }
    }
}
