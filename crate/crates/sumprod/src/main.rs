use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;
use sumprod::json::{params_from_json, parse_rows, report_line, ReportRow};
use sumprod::literal::{
    format_rationals, format_residues, parse_planes, parse_points, parse_prime, parse_rationals, parse_residues,
};
use sumprod::plot::{scatter_svg, Scatter};
use sumprod::run::{default_threads, exit_code, run_parallel, THREADS_ENV};
use sumprod::summary::{group_rows, render_sections, write_csv};
use sumprod::{CliError, CliResult};
use sumprod_core::energy::{additive_energy, e_energy, multiplicative_energy, t_energy, AmbientSet};
use sumprod_core::field::Prime;
use sumprod_core::fourier::{dft_set, max_nontrivial_coefficient};
use sumprod_core::harness::{instances, CheckId, CheckSpec, FamilyKind, HarnessConfig, InstanceFamily, Mode};
use sumprod_core::incidence::{count_incidences, max_collinear, PlaneSet, PointSet3};
use sumprod_core::rational::{combine_rational, expander_statistic, parse_rational, ratio_set_r as rational_r, Phi};
use sumprod_core::sets::{combine, quotient_set_q, ratio_set_r, SetOp};
use sumprod_core::subgroup::subgroup_of_order;

#[derive(Parser)]
#[command(name = "sumprod", version, about = "Exact sum-product quantities and a verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single exact quantity.
    Compute(ComputeArgs),
    /// Run checks on an instance family (or one explicit instance) and emit reports.
    Verify(VerifyArgs),
    /// Summarize a JSON-lines report file into CSV and SVG plots.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(subcommand)]
    quantity: Quantity,
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Sum,
    Difference,
    Product,
    Quotient,
}

impl From<OpArg> for SetOp {
    fn from(op: OpArg) -> SetOp {
        match op {
            OpArg::Sum => SetOp::Sum,
            OpArg::Difference => SetOp::Difference,
            OpArg::Product => SetOp::Product,
            OpArg::Quotient => SetOp::Quotient,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnergyKind {
    Additive,
    Multiplicative,
}

/// A set in `F_p` when `--p` is given, otherwise a set of rationals.
#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    set: String,
}

#[derive(Subcommand)]
enum Quantity {
    /// A ∘ B for ∘ ∈ {+, −, ×, ÷}.
    Sumset {
        #[command(flatten)]
        a: SetArgs,
        /// Second operand (defaults to the first).
        #[arg(long, allow_hyphen_values = true)]
        with: Option<String>,
        #[arg(long, value_enum, default_value = "sum")]
        op: OpArg,
    },
    /// E+(A, B) or E×(A, B).
    Energy {
        #[command(flatten)]
        a: SetArgs,
        #[arg(long, allow_hyphen_values = true)]
        with: Option<String>,
        #[arg(long, value_enum, default_value = "additive")]
        kind: EnergyKind,
    },
    /// T_k(A).
    Tk {
        #[command(flatten)]
        a: SetArgs,
        #[arg(long)]
        k: u32,
    },
    /// E_k(A).
    Ek {
        #[command(flatten)]
        a: SetArgs,
        #[arg(long)]
        k: u32,
    },
    /// The discrete Fourier transform of the indicator of A.
    Dft {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// max over ξ ≠ 0 of |Â(ξ)|.
    Maxcoeff {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// The multiplicative subgroup of the given order.
    Subgroup {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        order: u64,
    },
    /// R[A] = {(b − a)/(c − a)}.
    Rset {
        #[command(flatten)]
        a: SetArgs,
    },
    /// Q[A] = {(a − b)/(c − d)}.
    Qset {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Point–plane incidences in F_p³.
    Incidence {
        #[arg(long)]
        p: u64,
        /// `x:y:z` triples; omitted with --full.
        #[arg(long, required_unless_present = "full")]
        points: Option<String>,
        /// `a:b:c:d` for ax + by + cz = d; omitted with --full.
        #[arg(long, required_unless_present = "full")]
        planes: Option<String>,
        /// All points against all planes.
        #[arg(long)]
        full: bool,
    },
    /// |R[A]·φ(A)| and its growth exponent for a set of rationals.
    Expander {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, default_value = "id")]
        phi: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Check ids, comma separated; all checks when omitted.
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    #[arg(long, default_value = "default")]
    family: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    p_max: Option<u64>,
    /// Instances per check for the random families.
    #[arg(long)]
    count: Option<usize>,
    /// One explicit instance as a JSON object instead of a family.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    /// The absolute constant used in gates and right-hand sides.
    #[arg(long, default_value = "1")]
    c_star: String,
    #[arg(long)]
    two_thirds_ceiling: Option<f64>,
    #[arg(long)]
    misha_ceiling: Option<f64>,
    /// Write reports here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record per-instance wall time (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ReportArgs {
    /// A JSON-lines report file.
    input: PathBuf,
    #[arg(long, default_value = "report")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => compute(args).map(|_| 0),
        Command::Verify(args) => verify(args),
        Command::Report(args) => report(args).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(format: Format, quantity: &str, value: &str) {
    match format {
        Format::Table => println!("{value}"),
        Format::Json => println!("{}", json!({ "quantity": quantity, "value": value })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            let _ = w.write_record(["quantity", "value"]);
            let _ = w.write_record([quantity, value]);
            let _ = w.flush();
        }
    }
}

fn prime(p: u64) -> CliResult<Prime> {
    parse_prime("--p", p)
}

/// Dispatches on the ambient: `F_p` when `--p` is present, else `Q`.
fn with_ambient<T>(
    a: &SetArgs,
    other: Option<&str>,
    field: impl FnOnce(&sumprod_core::sets::ResidueSet, &sumprod_core::sets::ResidueSet) -> CliResult<T>,
    rational: impl FnOnce(&sumprod_core::rational::RationalSet, &sumprod_core::rational::RationalSet) -> CliResult<T>,
) -> CliResult<T> {
    match a.p {
        Some(p) => {
            let p = prime(p)?;
            let x = parse_residues("--set", &a.set, p)?;
            let y = other.map(|s| parse_residues("--with", s, p)).transpose()?.unwrap_or_else(|| x.clone());
            field(&x, &y)
        }
        None => {
            let x = parse_rationals("--set", &a.set)?;
            let y = other.map(|s| parse_rationals("--with", s)).transpose()?.unwrap_or_else(|| x.clone());
            rational(&x, &y)
        }
    }
}

fn energies<S: AmbientSet>(x: &S, y: &S, kind: EnergyKind) -> CliResult<String> {
    Ok(match kind {
        EnergyKind::Additive => additive_energy(x, y)?,
        EnergyKind::Multiplicative => multiplicative_energy(x, y)?,
    }
    .to_string())
}

fn positive_k(k: u32) -> CliResult<u32> {
    if k == 0 {
        Err(CliError::malformed("--k", "must be at least 1"))
    } else {
        Ok(k)
    }
}

fn compute(args: ComputeArgs) -> CliResult<()> {
    let f = args.format;
    match args.quantity {
        Quantity::Sumset { a, with, op } => {
            let op = SetOp::from(op);
            let v = with_ambient(
                &a,
                with.as_deref(),
                |x, y| Ok(format_residues(&combine(x, y, op)?)),
                |x, y| Ok(format_rationals(&combine_rational(x, y, op)?)),
            )?;
            emit(f, "sumset", &v);
        }
        Quantity::Energy { a, with, kind } => {
            let v = with_ambient(&a, with.as_deref(), |x, y| energies(x, y, kind), |x, y| energies(x, y, kind))?;
            emit(f, "energy", &v);
        }
        Quantity::Tk { a, k } => {
            let k = positive_k(k)?;
            let v =
                with_ambient(&a, None, |x, _| Ok(t_energy(x, k)?.to_string()), |x, _| Ok(t_energy(x, k)?.to_string()))?;
            emit(f, "tk", &v);
        }
        Quantity::Ek { a, k } => {
            let k = positive_k(k)?;
            let v =
                with_ambient(&a, None, |x, _| Ok(e_energy(x, k)?.to_string()), |x, _| Ok(e_energy(x, k)?.to_string()))?;
            emit(f, "ek", &v);
        }
        Quantity::Dft { p, set } => {
            let s = parse_residues("--set", &set, prime(p)?)?;
            let spectrum = dft_set(&s);
            let rows: Vec<(usize, f64, f64)> =
                spectrum.coefficients().iter().enumerate().map(|(xi, c)| (xi, c.re, c.im)).collect();
            match f {
                Format::Table => rows.iter().for_each(|(xi, re, im)| println!("{xi}\t{re:.12}\t{im:.12}")),
                Format::Json => {
                    let v: Vec<_> = rows.iter().map(|(xi, re, im)| json!({"xi": xi, "re": re, "im": im})).collect();
                    println!("{}", json!({ "quantity": "dft", "value": v }));
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(io::stdout());
                    let _ = w.write_record(["xi", "re", "im"]);
                    for (xi, re, im) in rows {
                        let _ = w.write_record([xi.to_string(), re.to_string(), im.to_string()]);
                    }
                    let _ = w.flush();
                }
            }
        }
        Quantity::Maxcoeff { p, set } => {
            let s = parse_residues("--set", &set, prime(p)?)?;
            emit(f, "maxcoeff", &format!("{}", max_nontrivial_coefficient(&s)));
        }
        Quantity::Subgroup { p, order } => {
            let g = subgroup_of_order(prime(p)?, order)
                .map_err(|_| CliError::malformed("--order", format!("{order} does not divide p − 1")))?;
            emit(f, "subgroup", &format_residues(g.members()));
        }
        Quantity::Rset { a } => {
            let v = with_ambient(
                &a,
                None,
                |x, _| Ok(format_residues(&ratio_set_r(x)?)),
                |x, _| Ok(format_rationals(&rational_r(x)?)),
            )?;
            emit(f, "rset", &v);
        }
        Quantity::Qset { p, set } => {
            let s = parse_residues("--set", &set, prime(p)?)?;
            emit(f, "qset", &format_residues(&quotient_set_q(&s)?));
        }
        Quantity::Incidence { p, points, planes, full } => {
            let m = prime(p)?;
            let (pts, pls) = if full {
                (PointSet3::full(m), PlaneSet::full(m))
            } else {
                let pts = parse_points("--points", points.as_deref().unwrap_or(""))?;
                let pls = parse_planes("--planes", planes.as_deref().unwrap_or(""))?;
                (
                    PointSet3::new(m, pts).map_err(|e| CliError::malformed("--points", e.to_string()))?,
                    PlaneSet::new(m, pls).map_err(|e| CliError::malformed("--planes", e.to_string()))?,
                )
            };
            let count = count_incidences(&pts, &pls)?;
            match f {
                Format::Table => println!("{count}"),
                _ => emit(f, "incidence", &count.to_string()),
            }
            eprintln!("points={} planes={} max_collinear={}", pts.len(), pls.len(), max_collinear(&pts));
        }
        Quantity::Expander { set, phi } => {
            let a = parse_rationals("--set", &set)?;
            let phi =
                Phi::parse(&phi).ok_or_else(|| CliError::malformed("--phi", "expected id, cube or plus-inverse"))?;
            let s = expander_statistic(&a, phi)?;
            match f {
                Format::Table => println!("{}\t{}\t{:.6}", s.size_r, s.size_r_phi_a, s.exponent),
                Format::Json => println!(
                    "{}",
                    json!({"quantity": "expander", "size_r": s.size_r, "size_r_phi_a": s.size_r_phi_a, "exponent": s.exponent})
                ),
                Format::Csv => {
                    println!("size_r,size_r_phi_a,exponent");
                    println!("{},{},{}", s.size_r, s.size_r_phi_a, s.exponent);
                }
            }
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult<u8> {
    let checks: Vec<CheckId> = if args.check.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        args.check.iter().map(|c| CheckId::parse(c.trim())).collect::<Result<_, _>>()?
    };
    let c_star: BigRational =
        parse_rational(&args.c_star).ok_or_else(|| CliError::malformed("--c-star", "expected a rational"))?;
    if c_star < BigRational::from_integer(1.into()) {
        return Err(CliError::malformed("--c-star", "must be at least 1"));
    }
    let mut config = HarnessConfig { c_star, ..HarnessConfig::default() };
    if let Some(c) = args.two_thirds_ceiling {
        config.two_thirds_ceiling = c;
    }
    if let Some(c) = args.misha_ceiling {
        config.misha_ceiling = c;
    }
    let specs: Vec<CheckSpec> = match &args.params {
        Some(text) => {
            if checks.len() != 1 {
                return Err(CliError::malformed("--params", "needs exactly one --check"));
            }
            let v = serde_json::from_str(text).map_err(|e| CliError::malformed("--params", e.to_string()))?;
            let spec = CheckSpec::new(checks[0], params_from_json(&v)?);
            // Surface malformed explicit input as a usage error rather than a report.
            sumprod_core::harness::run_check(&spec, &config)?;
            vec![spec]
        }
        None => {
            let kind = FamilyKind::parse(&args.family)
                .ok_or_else(|| CliError::malformed("--family", "expected default, small-random, subgroups or empty"))?;
            let family = InstanceFamily { kind, seed: args.seed, p_max: args.p_max, count: args.count };
            instances(&family, &checks)
        }
    };
    let threads = args.threads.unwrap_or_else(default_threads);
    let reports = run_parallel(&specs, &config, threads, args.timings);

    let rows: Vec<ReportRow> = parse_rows(&reports.iter().map(report_line).collect::<Vec<_>>().join("\n"))?;
    let groups = group_rows(&rows);
    let mut body = Vec::new();
    match args.format {
        Format::Json => {
            for r in &reports {
                writeln!(body, "{}", report_line(r)).expect("in-memory write");
            }
        }
        Format::Csv => write_csv(&groups, &mut body).expect("in-memory write"),
        Format::Table => body.extend_from_slice(render_sections(&groups).as_bytes()),
    }
    match &args.out {
        Some(path) => fs::write(path, &body).map_err(|e| CliError::io(path, e))?,
        None => io::stdout().write_all(&body).map_err(|e| CliError::io(Path::new("<stdout>"), e))?,
    }
    eprint!("{}", render_sections(&groups));
    Ok(exit_code(&reports))
}

fn report(args: ReportArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let rows = parse_rows(&text)?;
    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let groups = group_rows(&rows);
    let csv_path = dir.join("summary.csv");
    let file = fs::File::create(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
    write_csv(&groups, file).map_err(|e| CliError::io(&csv_path, e))?;
    let txt_path = dir.join("summary.txt");
    fs::write(&txt_path, render_sections(&groups)).map_err(|e| CliError::io(&txt_path, e))?;

    let mut written = vec![csv_path, txt_path];
    for check in CheckId::ALL {
        let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.check_id == check.name()).collect();
        if check.mode() == Mode::AssertExact || mine.is_empty() {
            continue;
        }
        let (x_label, x_of): (&str, fn(&ReportRow) -> Option<f64>) =
            if mine.iter().any(|r| r.param_int("order").is_some()) {
                ("|Γ|", |r| r.param_int("order").map(|d| d as f64))
            } else {
                ("instance size", instance_size)
            };
        let points: Vec<(f64, f64)> = mine.iter().filter_map(|r| Some((x_of(r)?, r.implied_constant?))).collect();
        if !points.is_empty() {
            let title = format!("{}: implied constant vs {x_label}", check.name());
            let svg = scatter_svg(&Scatter {
                title: &title,
                x_label,
                y_label: "implied constant",
                points: &points,
                log_x: true,
            });
            let path = dir.join(format!("{}.svg", check.name().to_lowercase()));
            fs::write(&path, svg).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        if check == CheckId::Expander {
            let points: Vec<(f64, f64)> =
                mine.iter().filter_map(|r| Some((r.param_len("A")? as f64, r.detail_f64("exponent")?))).collect();
            if !points.is_empty() {
                let svg = scatter_svg(&Scatter {
                    title: "EXPANDER: growth exponent vs n",
                    x_label: "n = |A|",
                    y_label: "log|R[A]φ(A)| / log n",
                    points: &points,
                    log_x: false,
                });
                let path = dir.join("expander_exponent.svg");
                fs::write(&path, svg).map_err(|e| CliError::io(&path, e))?;
                written.push(path);
            }
        }
    }
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn instance_size(r: &ReportRow) -> Option<f64> {
    ["A", "Q", "Gamma", "points"].iter().find_map(|k| r.param_len(k)).map(|n| n as f64)
}
