mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fimhom_core::category::Obj;
use fimhom_core::homology::{homology_table, resolve, torsion_vector};
use fimhom_core::linalg::PrimeField;
use fimhom_core::presentation::{evaluate_presentation, random_presentation, Presentation};
use fimhom_core::tree::{build_tree, default_level_cap, singular_indices, tree_violations};
use fimhom_core::verify::{case_seed, check_module, corpus_params, CheckOptions};
use serde::Serialize;

use report::{AnalyzeReport, CaseReport, ResolveReport, TreeReport, VerifyReport};

#[derive(Parser)]
#[command(name = "fimhom", version, about = "Homology and torsion of FI^m-modules over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, homology, degrees and torsion of a presented module.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        smax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Truncated minimal free resolution.
    Resolve {
        file: PathBuf,
        #[arg(long)]
        smax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Quotient tree by torsion kernels.
    Tree {
        file: PathBuf,
        /// Defaults to tsum + m + 2.
        #[arg(long)]
        level_cap: Option<usize>,
        #[arg(long, default_value_t = 2)]
        smax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs the property suite on a file or on seeded random modules.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    file: Option<PathBuf>,
    #[arg(long, requires_all = ["seed", "count", "m", "bounds", "field"])]
    random: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    bounds: Option<Vec<usize>>,
    #[arg(long)]
    field: Option<u64>,
    #[arg(long, default_value_t = 2)]
    smax: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// An input problem, reported with exit status 2.
struct Usage(anyhow::Error);

impl From<anyhow::Error> for Usage {
    fn from(e: anyhow::Error) -> Self {
        Usage(e)
    }
}

fn load(path: &Path) -> Result<Presentation, Usage> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    input::parse(&text).map_err(|e| Usage(anyhow!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(format: Format, report: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
    match format {
        Format::Text => print!("{}", text(report)),
        Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
    }
    Ok(())
}

enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

impl From<fimhom_core::module::ModuleError> for Failure {
    fn from(e: fimhom_core::module::ModuleError) -> Self {
        Failure::Internal(e.into())
    }
}

/// Returns whether any check failed.
fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Analyze { file, smax, format } => {
            let p = load(&file)?;
            let v = evaluate_presentation(&p)?;
            let table = homology_table(&v, smax)?;
            let r = AnalyzeReport::new(p.field.modulus(), v.dims(), &table, torsion_vector(&v)?, &singular_indices(&v));
            emit(format, &r, AnalyzeReport::text)?;
            Ok(false)
        }
        Command::Resolve { file, smax, format } => {
            let p = load(&file)?;
            let v = evaluate_presentation(&p)?;
            let res = resolve(&v, smax)?;
            let failures = res.euler_failures(&v);
            let r = ResolveReport::new(&res, failures);
            emit(format, &r, ResolveReport::text)?;
            Ok(!r.euler_failures.is_empty())
        }
        Command::Tree {
            file,
            level_cap,
            smax,
            format,
        } => {
            let p = load(&file)?;
            let v = evaluate_presentation(&p)?;
            let cap = match level_cap {
                Some(c) => c,
                None => default_level_cap(&v)?,
            };
            let tree = build_tree(&v, cap, smax)?;
            let violations = tree_violations(&tree, v.m());
            let r = TreeReport::new(&tree, cap, violations);
            emit(format, &r, TreeReport::text)?;
            Ok(!r.violations.is_empty())
        }
        Command::Verify(args) => verify(args),
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let mut cases = Vec::new();
    if let Some(file) = &args.file {
        let p = load(file)?;
        let v = evaluate_presentation(&p)?;
        let opts = CheckOptions {
            s_max: args.smax,
            map_seed: 0,
            free_degrees: p.relations.is_empty().then(|| p.generators.clone()),
        };
        cases.push(CaseReport {
            case: 0,
            seed: None,
            checks: check_module(&v, &opts)?,
        });
    } else {
        let (seed, count, m, bounds, field) = match (args.seed, args.count, args.m, args.bounds, args.field) {
            (Some(s), Some(c), Some(m), Some(b), Some(f)) => (s, c, m, b, f),
            _ => return Err(Failure::Usage(anyhow!("--random needs --seed, --count, --m, --bounds and --field"))),
        };
        let field = PrimeField::new(field).map_err(|_| Failure::Usage(anyhow!("field must be prime (got {field})")))?;
        if m == 0 || bounds.len() != m {
            return Err(Failure::Usage(anyhow!("--bounds must have exactly m = {m} entries")));
        }
        let params = corpus_params(m, Obj::new(bounds), field);
        for c in 0..count {
            let s = case_seed(seed, c);
            let p = random_presentation(s, &params);
            let v = evaluate_presentation(&p)?;
            let opts = CheckOptions {
                s_max: args.smax,
                map_seed: s,
                free_degrees: p.relations.is_empty().then(|| p.generators.clone()),
            };
            cases.push(CaseReport {
                case: c,
                seed: Some(s),
                checks: check_module(&v, &opts)?,
            });
        }
    }
    let r = VerifyReport::new(cases);
    emit(args.format, &r, VerifyReport::text)?;
    Ok(r.summary.fail > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}
