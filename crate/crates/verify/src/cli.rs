//! The `xmop` command line. Commands that check something always write a Report (even when
//! the command itself errors) and exit 1 when any check failed; usage errors exit 2.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use xmop_exact::{parse_q, Poly, Q};
use xmop_families::examples::{parse_params, resolve_params, run, Params};
use xmop_families::Exec;

use crate::artifact::{Artifact, FamilyArtifact};
use crate::checks;
use crate::conj::conjugation_check;
use crate::error::VerifyError;
use crate::export::{parse_grid, write_weight_csv};
use crate::report::{Check, Report, Status};

/// Environment variable naming the default directory for outputs.
pub const OUT_DIR_VAR: &str = "XMOP_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "xmop", version, about = "Exceptional matrix orthogonal polynomials: build, verify, export")]
pub struct Cli {
    /// Run index loops sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical matrix families.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// The worked exceptional examples.
    Example {
        #[command(subcommand)]
        cmd: ExampleCmd,
    },
    /// Checks over a saved artifact.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Plot data.
    Export {
        #[command(subcommand)]
        cmd: ExportCmd,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Comma-separated key=value list, e.g. "a=2,xi=1".
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub zeta: Option<String>,
}

impl ParamArgs {
    pub fn collect(&self) -> Result<Params, VerifyError> {
        let mut p = match &self.params {
            Some(s) => parse_params(s)?,
            None => Params::new(),
        };
        for (k, v) in [("a", &self.a), ("xi", &self.xi), ("alpha", &self.alpha), ("r", &self.r), ("zeta", &self.zeta)] {
            if let Some(v) = v {
                p.insert(k.to_string(), parse_q(v)?);
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Subcommand)]
pub enum FamilyCmd {
    Build {
        #[arg(long, value_parser = ["hermite", "laguerre", "gegenbauer"])]
        kind: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    Run {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Where to save the example artifact for later `verify` runs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct VerifyCommon {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Exact symmetry decision per operator and the bilinear identity for symmetric ones.
    Symmetry {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
    Eigen {
        #[command(flatten)]
        common: VerifyCommon,
    },
    /// Exact orthogonality where available, plus Gauss quadrature.
    Orthogonality {
        #[command(flatten)]
        common: VerifyCommon,
        /// Quadrature points; 0 skips the numeric check.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Largest index included.
        #[arg(long)]
        upto: Option<usize>,
    },
    Recurrence {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        band: usize,
        /// Coefficients of q' from the constant term up, e.g. "-4,0,2".
        #[arg(long)]
        qprime: Option<String>,
        /// Indices n to fit, e.g. "3..8" or "3,4,5".
        #[arg(long)]
        ns: Option<String>,
    },
    /// Diagonal equivalence with the companion construction, or with another artifact.
    Conjugation {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        with: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportCmd {
    Weight {
        #[arg(long = "in")]
        input: PathBuf,
        /// lo:hi:step, e.g. -3:3:0.5
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn or_default(p: &Option<PathBuf>, name: &str) -> PathBuf {
    p.clone().unwrap_or_else(|| out_dir().join(name))
}

fn usage(e: impl std::fmt::Display) -> i32 {
    eprintln!("xmop: {e}");
    2
}

/// Parse args and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Family { cmd: FamilyCmd::Build { kind, params, max_n, out } } => {
            let path = or_default(&out, &format!("family-{kind}.json"));
            let res = params
                .collect()
                .and_then(|p| FamilyArtifact::build(&kind, &p, max_n))
                .and_then(|f| Artifact::Family(f).write(&path));
            match res {
                Ok(()) => {
                    println!("wrote {}", path.display());
                    0
                }
                Err(e) => usage(e),
            }
        }
        Command::Example { cmd: ExampleCmd::Run { id, params, max_n, report, out } } => {
            let rpath = or_default(&report, &format!("example-{id}-report.json"));
            let apath = or_default(&out, &format!("example-{id}.json"));
            let mut rep = Report::new("example run");
            rep.example = Some(id);
            let start = Instant::now();
            let res = (|| -> Result<(), VerifyError> {
                let given = params.collect()?;
                rep.params = fmt_params(&resolve_params(id, &given)?);
                let t0 = Instant::now();
                let r = run(id, &given, max_n, exec)?;
                rep.timings.insert("pipeline".into(), t0.elapsed().as_micros() as u64);
                Artifact::Example(Box::new(r.clone())).write(&apath)?;
                let t1 = Instant::now();
                rep.extend(checks::example_checks(&r, exec));
                rep.timings.insert("checks".into(), t1.elapsed().as_micros() as u64);
                Ok(())
            })();
            finish_report(rep, res, start, &rpath)
        }
        Command::Verify { cmd } => verify(cmd, exec),
        Command::Export { cmd: ExportCmd::Weight { input, grid, out } } => {
            let path = or_default(&out, "weight.csv");
            let res = (|| -> Result<usize, VerifyError> {
                let art = Artifact::read(&input)?;
                let grid = parse_grid(&grid)?;
                let f = std::fs::File::create(&path)
                    .map_err(|source| VerifyError::Io { path: path.display().to_string(), source })?;
                write_weight_csv(art.weight(), &grid, f)
            })();
            match res {
                Ok(n) => {
                    println!("wrote {n} rows to {}", path.display());
                    0
                }
                Err(e) => usage(e),
            }
        }
    }
}

fn fmt_params(p: &Params) -> BTreeMap<String, String> {
    p.iter().map(|(k, v)| (k.clone(), xmop_exact::fmt_q(v))).collect()
}

fn finish_report(mut rep: Report, res: Result<(), VerifyError>, start: Instant, path: &Path) -> i32 {
    if let Err(e) = res {
        rep.extend([Check::new("error", Status::fail(e.to_string()))]);
    }
    rep.timings.insert("total".into(), start.elapsed().as_micros() as u64);
    println!("{}", rep.summary());
    if let Err(e) = rep.write(path) {
        eprintln!("xmop: {e}");
        return 2;
    }
    println!("report: {}", path.display());
    if rep.passed() {
        0
    } else {
        1
    }
}

fn parse_ns(s: &str) -> Result<Vec<usize>, VerifyError> {
    let bad = || VerifyError::Usage(format!("bad index list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn parse_poly(s: &str) -> Result<Poly, VerifyError> {
    let cs: Vec<Q> = s.split(',').map(|x| parse_q(x.trim())).collect::<Result<_, _>>()?;
    Ok(Poly::from_coeffs(cs))
}

fn verify(cmd: VerifyCmd, exec: Exec) -> i32 {
    let (what, common) = match &cmd {
        VerifyCmd::Symmetry { common, .. } => ("symmetry", common),
        VerifyCmd::Eigen { common } => ("eigen", common),
        VerifyCmd::Orthogonality { common, .. } => ("orthogonality", common),
        VerifyCmd::Recurrence { common, .. } => ("recurrence", common),
        VerifyCmd::Conjugation { common, .. } => ("conjugation", common),
    };
    let path = or_default(&common.report, &format!("verify-{what}-report.json"));
    let mut rep = Report::new(format!("verify {what}"));
    let start = Instant::now();
    let res = (|| -> Result<(), VerifyError> {
        let art = Artifact::read(&common.input)?;
        rep.example = art.example_id();
        rep.params = art.params();
        let found = match &cmd {
            VerifyCmd::Symmetry { max_deg, .. } => checks::symmetry_checks(&art, *max_deg, exec),
            VerifyCmd::Eigen { .. } => {
                let mut v = checks::eigen_checks(&art, exec);
                v.push(checks::degree_check(&art));
                v
            }
            VerifyCmd::Orthogonality { points, upto, .. } => {
                let upto = upto.unwrap_or(usize::MAX);
                let mut v = match &art {
                    Artifact::Example(r) => checks::exact_orthogonality_checks(r, exec),
                    Artifact::Family(f) => vec![classical_orthogonality(f, upto)],
                };
                if *points > 0 {
                    v.push(checks::numeric_orthogonality_check(art.polys(), art.weight(), *points, upto, exec));
                }
                v
            }
            VerifyCmd::Recurrence { band, qprime, ns, .. } => {
                let q = match (qprime, &art) {
                    (Some(s), _) => parse_poly(s)?,
                    (None, Artifact::Example(r)) => checks::default_qprime(r)?,
                    (None, Artifact::Family(_)) => Poly::from_ints(&[1]),
                };
                let ns = match ns {
                    Some(s) => parse_ns(s)?,
                    None => checks::default_recurrence_ns(art.polys(), *band),
                };
                vec![checks::recurrence_check(art.polys(), *band, &q, &ns)]
            }
            VerifyCmd::Conjugation { with, .. } => match (with, &art) {
                (Some(other), _) => {
                    let other = Artifact::read(other)?;
                    vec![Check::timed("conjugation/artifacts", || {
                        let ns: Vec<usize> =
                            art.polys().keys().copied().filter(|n| other.polys().contains_key(n)).collect();
                        let c = conjugation_check(art.polys(), other.polys(), ns.iter().copied())?;
                        Ok(Check::new("", Status::ExactPass).with_detail(format!("R = {}, n in {ns:?}", c.right)))
                    })]
                }
                (None, Artifact::Example(r)) => {
                    let v = checks::conjugation_checks(r);
                    if v.is_empty() {
                        return Err(VerifyError::Usage(format!("no companion construction for example {}; pass --with", r.id)));
                    }
                    v
                }
                (None, Artifact::Family(_)) => {
                    return Err(VerifyError::Usage("a family artifact needs --with".into()));
                }
            },
        };
        rep.extend(found);
        Ok(())
    })();
    finish_report(rep, res, start, &path)
}

fn classical_orthogonality(f: &FamilyArtifact, upto: usize) -> Check {
    Check::timed("orthogonality/exact", || {
        let top = f.max_n.min(upto);
        for n in 0..=top {
            for m in 0..n {
                let g = f.family.inner_product(n, m)?;
                if !g.is_zero() {
                    return Ok(Check::new("", Status::fail(format!("<P_{n}, P_{m}> = {g}"))));
                }
            }
        }
        Ok(Check::new("", Status::ExactPass).with_detail(format!("indices <= {top}")))
    })
}
