//! Command-line front end: exact homology reports, Chern character
//! coefficient tables, idempotent lifting, pairings, trace validation and
//! irreducible-representation enumeration.
//!
//! Exit codes: 0 success; 2 parse or flag error; 3 validation failure of
//! semantic input (non-idempotent element, odd cochain degree, wrong
//! coordinate lengths); 4 size bound exceeded; 5 internal invariant
//! violation (always a bug).

use clap::{Parser, Subcommand, ValueEnum};
use ncchern_cli::cache;
use ncchern_cli::descriptor::{Descriptor, DescriptorError, GroupToken};
use ncchern_core::algebra::{
    validate_trace, AlgebraElement, AlgebraError, StructureAlgebra, TraceFunctional,
};
use ncchern_core::cq::{lift_idempotent, x_complex_homology, CqError};
use ncchern_core::cyclic::{
    bicomplex_homology, pair_idempotent, CochainFunctional, CyclicError, HomologyReport,
    DEFAULT_MAX_DIM,
};
use ncchern_core::exact::{fmt_rat, parse_rat, ExactError, Rat};
use ncchern_core::lie::{chern_so_odd, chern_su, irrep_dims, is_generating, LieError};
use serde::Deserialize;
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "ncchern", version, about = "Exact homology and Chern character engines")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Bicomplex,
    Xcomplex,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChernGroup {
    Su,
    So,
}

#[derive(Subcommand)]
enum Cmd {
    /// Two-periodic homology ranks of an algebra descriptor.
    Hp {
        #[arg(long)]
        algebra: String,
        /// Degree cap for the bicomplex method (>= 2).
        #[arg(long)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Method::Bicomplex)]
        method: Method,
        /// Adic order for the X-complex method; defaults to max(1, cap/2).
        #[arg(long)]
        order: Option<usize>,
        /// Chain-space dimension bound per matrix.
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Chern character coefficient table for su or so (odd).
    Chern {
        #[arg(long, value_enum)]
        group: ChernGroup,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Lift an idempotent through the adic tower.
    Lift {
        #[arg(long)]
        algebra: String,
        /// JSON file: {"amplify": k, "coords": ["p/q", ...]}.
        #[arg(long)]
        idempotent: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair an idempotent with an even cochain.
    Pair {
        #[arg(long)]
        algebra: String,
        /// JSON file: {"degree": n, "values": ["p/q", ...]}.
        #[arg(long)]
        cocycle: PathBuf,
        /// JSON file: {"amplify": k, "coords": ["p/q", ...]}.
        #[arg(long)]
        idempotent: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the four trace axioms; failures are report entries.
    ValidateTrace {
        #[arg(long)]
        algebra: String,
        /// JSON file: {"coords": ["p/q", ...]}.
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate irreducible representations by dimension.
    Irreps {
        /// Group token such as su2, so5, sp3.
        #[arg(long)]
        group: String,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Validation(String),
    SizeBound(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::SizeBound(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Validation(m)
            | CliError::SizeBound(m)
            | CliError::Internal(m) => m,
        }
    }
}

impl From<DescriptorError> for CliError {
    fn from(e: DescriptorError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::InvalidSize
            | AlgebraError::EmptyProduct
            | AlgebraError::DimensionOverflow(_) => CliError::Usage(e.to_string()),
            AlgebraError::Mismatch(..) => CliError::Validation(e.to_string()),
            AlgebraError::Invariant(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<CyclicError> for CliError {
    fn from(e: CyclicError) -> Self {
        match e {
            CyclicError::CapTooSmall => CliError::Usage(e.to_string()),
            CyclicError::SizeBound { .. } => CliError::SizeBound(e.to_string()),
            CyclicError::OddDegree(_)
            | CyclicError::NotIdempotent
            | CyclicError::AlgebraMismatch(..) => CliError::Validation(e.to_string()),
            CyclicError::Exact(x) => x.into(),
            CyclicError::Algebra(a) => a.into(),
        }
    }
}

impl From<CqError> for CliError {
    fn from(e: CqError) -> Self {
        match e {
            CqError::OrderTooSmall => CliError::Usage(e.to_string()),
            CqError::SizeBound { .. } => CliError::SizeBound(e.to_string()),
            CqError::NotIdempotent
            | CqError::NotInvertible
            | CqError::OddForm
            | CqError::AlgebraMismatch(..) => CliError::Validation(e.to_string()),
            CqError::Parse(_) => CliError::Usage(e.to_string()),
            CqError::CapMismatch { .. } | CqError::Internal(_) => {
                CliError::Internal(e.to_string())
            }
            CqError::Exact(x) => x.into(),
            CqError::Algebra(a) => a.into(),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::DomainError(_) => CliError::Usage(e.to_string()),
            LieError::NonSquare { .. } | LieError::AlgebraMismatch => {
                CliError::Validation(e.to_string())
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed {what}: {e}")))
}

fn rat_list(strings: &[String], what: &str) -> Result<Vec<Rat>, CliError> {
    strings
        .iter()
        .map(|s| parse_rat(s).map_err(|e| CliError::Usage(format!("bad rational in {what}: {e}"))))
        .collect()
}

fn cached(request: &str, no_cache: bool, compute: impl FnOnce() -> Result<String, CliError>) -> Result<String, CliError> {
    if !no_cache {
        if let Some(hit) = cache::lookup(request) {
            return Ok(hit);
        }
    }
    let value = compute()?;
    if !no_cache {
        cache::store(request, &value);
    }
    Ok(value)
}

#[derive(Deserialize)]
struct IdempotentFile {
    #[serde(default = "default_amplify")]
    amplify: usize,
    coords: Vec<String>,
}

fn default_amplify() -> usize {
    1
}

#[derive(Deserialize)]
struct CocycleFile {
    degree: usize,
    values: Vec<String>,
}

#[derive(Deserialize)]
struct TraceFile {
    coords: Vec<String>,
}

fn report_value(rep: &HomologyReport) -> serde_json::Value {
    serde_json::from_str(&rep.to_json()).expect("report JSON")
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Hp {
            algebra,
            cap,
            method,
            order,
            max_dim,
            out,
            no_cache,
        } => {
            let desc = Descriptor::parse(&algebra)?;
            let canonical = desc.to_string();
            let m = order.unwrap_or_else(|| (cap / 2).max(1));
            let tag = match method {
                Method::Bicomplex => "bicomplex",
                Method::Xcomplex => "xcomplex",
                Method::Both => "both",
            };
            let request =
                format!("hp|{canonical}|cap={cap}|method={tag}|order={m}|maxdim={max_dim}");
            let text = cached(&request, no_cache, || {
                let alg = Arc::new(desc.build()?);
                let output = match method {
                    Method::Bicomplex => {
                        let rep = bicomplex_homology(&alg, cap, max_dim)?;
                        rep.to_json() + "\n"
                    }
                    Method::Xcomplex => {
                        let rep = x_complex_homology(&alg, m, max_dim)?;
                        rep.to_json() + "\n"
                    }
                    Method::Both => {
                        let bi = bicomplex_homology(&alg, cap, max_dim)?;
                        let x = x_complex_homology(&alg, m, max_dim)?;
                        let agree = bi.hp_even == x.hp_even && bi.hp_odd == x.hp_odd;
                        serde_json::to_string(&serde_json::json!({
                            "bicomplex": report_value(&bi),
                            "xcomplex": report_value(&x),
                            "agree": agree,
                        }))
                        .expect("serializable")
                            + "\n"
                    }
                };
                Ok(output)
            })?;
            emit(&out, &text)
        }
        Cmd::Chern {
            group,
            rank,
            format,
            out,
            no_cache,
        } => {
            let gname = match group {
                ChernGroup::Su => "su",
                ChernGroup::So => "so",
            };
            let fname = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let request = format!("chern|{gname}|rank={rank}|format={fname}");
            let text = cached(&request, no_cache, || {
                let table = match group {
                    ChernGroup::Su => chern_su(rank)?,
                    ChernGroup::So => chern_so_odd(rank)?,
                };
                // determinant checked here so a singular table fails loudly
                let (generating, _det) = is_generating(&table)?;
                if !generating {
                    return Err(CliError::Internal(
                        "character table is singular".into(),
                    ));
                }
                Ok(match format {
                    Format::Csv => table.to_csv(),
                    Format::Json => table.to_json(),
                })
            })?;
            emit(&out, &text)
        }
        Cmd::Lift {
            algebra,
            idempotent,
            order,
            out,
        } => {
            let desc = Descriptor::parse(&algebra)?;
            let base = Arc::new(desc.build()?);
            let file: IdempotentFile = parse_json(&read_file(&idempotent)?, "idempotent file")?;
            let (amp, e) = idempotent_from_file(&base, &file)?;
            let lift = lift_idempotent(&e, order)?;
            let form_json: serde_json::Value =
                serde_json::from_str(&lift.form().to_json()).expect("form JSON");
            let text = serde_json::to_string(&serde_json::json!({
                "algebra": amp.label(),
                "order": order,
                "lift": form_json,
                "idempotent_mod_adic": true,
            }))
            .expect("serializable")
                + "\n";
            emit(&out, &text)
        }
        Cmd::Pair {
            algebra,
            cocycle,
            idempotent,
            out,
        } => {
            let desc = Descriptor::parse(&algebra)?;
            let base = Arc::new(desc.build()?);
            let cfile: CocycleFile = parse_json(&read_file(&cocycle)?, "cocycle file")?;
            let values = rat_list(&cfile.values, "cocycle file")?;
            let phi = CochainFunctional::new(base.clone(), cfile.degree, values)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let ifile: IdempotentFile = parse_json(&read_file(&idempotent)?, "idempotent file")?;
            let (_amp, e) = idempotent_from_file(&base, &ifile)?;
            let value = pair_idempotent(&e, &phi, ifile.amplify)?;
            let text = serde_json::to_string(&serde_json::json!({
                "algebra": base.label(),
                "degree": cfile.degree,
                "value": fmt_rat(&value),
            }))
            .expect("serializable")
                + "\n";
            emit(&out, &text)
        }
        Cmd::ValidateTrace {
            algebra,
            trace,
            out,
        } => {
            let desc = Descriptor::parse(&algebra)?;
            let alg = Arc::new(desc.build()?);
            let file: TraceFile = parse_json(&read_file(&trace)?, "trace file")?;
            if file.coords.len() != alg.dim() {
                return Err(CliError::Validation(format!(
                    "trace has {} coordinates, algebra dimension is {}",
                    file.coords.len(),
                    alg.dim()
                )));
            }
            let tau = TraceFunctional::new(rat_list(&file.coords, "trace file")?);
            let rep = validate_trace(&alg, &tau);
            let text = serde_json::to_string(&serde_json::json!({
                "algebra": alg.label(),
                "normalized": rep.normalized,
                "positive": rep.positive,
                "strictly_positive": rep.strictly_positive,
                "ad_invariant": rep.ad_invariant,
            }))
            .expect("serializable")
                + "\n";
            emit(&out, &text)
        }
        Cmd::Irreps { group, count, out } => {
            let token = GroupToken::parse(&group)?;
            let g = token.to_group();
            let reps = irrep_dims(&g, count);
            let items: Vec<serde_json::Value> = reps
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "weight": r.weight,
                        "dim": r.dim.to_string(),
                    })
                })
                .collect();
            let text = serde_json::to_string(&serde_json::json!({
                "group": token.to_string(),
                "count": count,
                "irreps": items,
            }))
            .expect("serializable")
                + "\n";
            emit(&out, &text)
        }
    }
}

fn idempotent_from_file(
    base: &Arc<StructureAlgebra>,
    file: &IdempotentFile,
) -> Result<(Arc<StructureAlgebra>, AlgebraElement), CliError> {
    if file.amplify == 0 {
        return Err(CliError::Usage("amplify must be >= 1".into()));
    }
    let amp = Arc::new(base.amplify(file.amplify)?);
    if file.coords.len() != amp.dim() {
        return Err(CliError::Validation(format!(
            "idempotent has {} coordinates, amplified dimension is {}",
            file.coords.len(),
            amp.dim()
        )));
    }
    let coords = rat_list(&file.coords, "idempotent file")?;
    let e = AlgebraElement::new(amp.clone(), coords).map_err(CliError::from)?;
    Ok((amp, e))
}
