use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use asmass::gf::{prime_power, Tower};
use asmass::mass::{
    compatible_splits, mass_g_poly, mass_r_poly, mass_rs_poly, render_rational, table_z, RamData,
    SplitBehavior, TableRow,
};
use asmass::oracle::{
    default_grid, enumerate_classes, verify_grid, Cell, Limits, VerifyConfig, DEFAULT_MAX_GROUP,
    DEFAULT_MAX_POPULATION,
};
use asmass::projgeom::fourset::{orbit_table, Behavior};
use asmass::Error;

#[derive(Parser)]
#[command(name = "asmass", version, about = "Mass formulas for Artin-Schreier curves over finite fields")]
struct Cli {
    /// Worker threads for the enumerations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate closed forms for a genus or a ramification type.
    Eval(EvalArgs),
    /// Compare closed forms against both enumeration oracles.
    Verify(VerifyArgs),
    /// Count PGL_2-orbits of Frobenius-stable 4-sets.
    Orbits(OrbitArgs),
    /// List the isomorphism classes of one type, one JSON object per line.
    Enumerate(EnumArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: Option<u32>,
    /// Degree of F_q over F_p.
    #[arg(long)]
    n: Option<u32>,
    /// Field size; an alternative to --p/--n.
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    g: Option<u64>,
    /// Ramification data, e.g. "2,2,3".
    #[arg(long)]
    ram: Option<String>,
    /// Splitting behavior, e.g. "2,(3-3)".
    #[arg(long)]
    split: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    g: Option<u64>,
    #[arg(long)]
    ram: Option<String>,
    #[arg(long)]
    split: Option<String>,
    /// Largest population |U| a cell may enumerate.
    #[arg(long, env = "ASMASS_MAX_POP")]
    max_population: Option<f64>,
    /// Report file (JSON array); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    corrupt_formula: bool,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    behavior: Option<Behavior>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct EnumArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    ram: String,
    #[arg(long)]
    split: Option<String>,
    #[arg(long, env = "ASMASS_MAX_POP")]
    max_population: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let msg = match e {
            Error::UnsupportedShape(_) | Error::UnsupportedGenus { .. } => {
                format!("{e}\n(run `asmass verify` with the same arguments for the oracle value)")
            }
            _ => e.to_string(),
        };
        Fail(2, msg)
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail(2, e.to_string())
    }
}

type CmdResult = std::result::Result<u8, Fail>;

impl FieldArgs {
    /// `(p, q)`; `q` defaults to `p`.
    fn resolve(&self) -> std::result::Result<(u32, u64), Fail> {
        let usage = |m: String| Fail(2, m);
        match (self.p, self.n, self.q) {
            (_, _, Some(q)) => {
                let (pp, nn) = prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
                if self.p.is_some_and(|p| p != pp) || self.n.is_some_and(|n| n != nn) {
                    return Err(usage(format!("--q {q} disagrees with --p/--n")));
                }
                Ok((pp, q))
            }
            (Some(p), n, None) => {
                let n = n.unwrap_or(1);
                if !asmass::gf::is_prime(p as u64) {
                    return Err(Error::NotPrime(p as u64).into());
                }
                let q = (p as u64)
                    .checked_pow(n)
                    .ok_or_else(|| usage("p^n overflows".into()))?;
                Ok((p, q))
            }
            (None, _, None) => Err(usage("give --q or --p".into())),
        }
    }
}

fn limits(max_population: Option<f64>) -> Limits {
    Limits {
        max_population: max_population.map_or(DEFAULT_MAX_POPULATION, |x| x as u128),
        max_group: DEFAULT_MAX_GROUP,
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(rows: &[T], headers: &[&str], cells: impl Fn(&T) -> Vec<String>, out: &OutArgs) -> io::Result<()> {
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(headers)?;
            for r in rows {
                c.write_record(cells(r))?;
            }
            c.flush()?;
            drop(c);
        }
        Format::Table => {
            let body: Vec<Vec<String>> = rows.iter().map(&cells).collect();
            let widths: Vec<usize> = (0..headers.len())
                .map(|i| body.iter().map(|r| r[i].len()).chain([headers[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cols: Vec<&str>| {
                cols.iter()
                    .zip(&widths)
                    .map(|(c, &n)| format!("{c:<n$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(w, "{}", line(headers.to_vec()))?;
            for r in &body {
                writeln!(w, "{}", line(r.iter().map(|s| s.as_str()).collect()))?;
            }
        }
    }
    w.flush()
}

const TABLE_HEADERS: [&str; 8] = ["p", "q", "g", "R", "S", "delta", "Z", "poly"];

fn table_cells(r: &TableRow) -> Vec<String> {
    vec![
        r.p.to_string(),
        r.q.to_string(),
        r.g.to_string(),
        r.ram.clone(),
        r.split.clone(),
        r.delta.to_string(),
        r.z.clone(),
        r.poly.clone(),
    ]
}

fn cmd_eval(a: EvalArgs) -> CmdResult {
    let (p, q) = a.field.resolve()?;
    let rows = match (a.g, &a.ram) {
        (Some(g), None) => {
            let total = mass_g_poly(g, p)?;
            let rows = table_z(p, &[q], &[g])?;
            if a.out.format == Format::Table && a.out.out.is_none() {
                let v = total.eval_u64(q);
                let shown = if v.is_integer() { v.numer().to_string() } else { render_rational(&v) };
                println!("Z = {total} = {shown} at q={q}");
            }
            rows
        }
        (None, Some(spec)) => {
            let r = RamData::parse(p, spec)?;
            let splits = match &a.split {
                Some(s) => vec![s.parse::<SplitBehavior>()?],
                None => compatible_splits(&r),
            };
            let mut rows = Vec::new();
            for s in &splits {
                let z = mass_rs_poly(&r, s)?;
                rows.push(TableRow {
                    p,
                    q,
                    g: r.genus(),
                    ram: r.to_string(),
                    split: s.to_string(),
                    delta: r.dimension(),
                    poly: z.to_string(),
                    z: render_rational(&z.eval_u64(q)),
                });
            }
            if a.split.is_none() {
                let z = mass_r_poly(&r)?;
                rows.push(TableRow {
                    p,
                    q,
                    g: r.genus(),
                    ram: r.to_string(),
                    split: "all".into(),
                    delta: r.dimension(),
                    poly: z.to_string(),
                    z: render_rational(&z.eval_u64(q)),
                });
            }
            rows
        }
        _ => return Err(Fail(2, "give exactly one of --g and --ram".into())),
    };
    emit(&rows, &TABLE_HEADERS, table_cells, &a.out)?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let cells = match (a.g, &a.ram) {
        (None, None) if a.field.p.is_none() && a.field.q.is_none() => default_grid(),
        (Some(g), None) => {
            let (p, q) = a.field.resolve()?;
            vec![Cell::Genus { p, q, g }]
        }
        (None, Some(spec)) => {
            let (p, q) = a.field.resolve()?;
            let ram = RamData::parse(p, spec)?;
            let splits = match &a.split {
                Some(s) => vec![s.parse::<SplitBehavior>()?],
                None => compatible_splits(&ram),
            };
            splits
                .into_iter()
                .map(|split| Cell::Shape { q, ram: ram.clone(), split })
                .collect()
        }
        _ => return Err(Fail(2, "give --g or --ram with a field, or nothing for the default grid".into())),
    };
    let cfg = VerifyConfig {
        cells,
        limits: limits(a.max_population),
        corrupt_formula: a.corrupt_formula,
    };
    let reports = verify_grid(&cfg);
    let mut w = sink(&a.out)?;
    serde_json::to_writer_pretty(&mut w, &reports).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    let count = |s: &str| reports.iter().filter(|r| r.status == s).count();
    let failed: Vec<_> = reports.iter().filter(|r| r.failed()).collect();
    eprintln!(
        "{} cells: {} agree, {} oracle-only, {} skipped(size), {} failed",
        reports.len(),
        count("agree"),
        count("oracle-only"),
        count("skipped(size)"),
        failed.len()
    );
    for r in &failed {
        eprintln!("FAIL {}: {} A={:?} B={:?} formula={}", r.cell, r.status, r.oracle_a, r.oracle_b, r.formula);
    }
    Ok(if failed.is_empty() { 0 } else { 1 })
}

fn cmd_orbits(a: OrbitArgs) -> CmdResult {
    let (_, q) = a.field.resolve()?;
    let tower = Tower::for_order(q)?;
    let rows = orbit_table(&tower, a.behavior)?;
    let headers = ["q", "behavior", "closed_form", "burnside", "direct", "inventory"];
    emit(
        &rows,
        &headers,
        |r| {
            let inv: Vec<String> = r.inventory.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            vec![
                r.q.to_string(),
                r.behavior.clone(),
                r.closed_form.to_string(),
                r.burnside.to_string(),
                r.direct.to_string(),
                inv.join(" "),
            ]
        },
        &a.out,
    )?;
    Ok(0)
}

fn cmd_enumerate(a: EnumArgs) -> CmdResult {
    let (p, q) = a.field.resolve()?;
    let ram = RamData::parse(p, &a.ram)?;
    let splits = match &a.split {
        Some(s) => vec![s.parse::<SplitBehavior>()?],
        None => compatible_splits(&ram),
    };
    let lim = limits(a.max_population);
    let mut w = sink(&a.out)?;
    for s in &splits {
        for class in enumerate_classes(&ram, s, q, &lim)? {
            serde_json::to_writer(&mut w, &class).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Orbits(a) => cmd_orbits(a),
        Cmd::Enumerate(a) => cmd_enumerate(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
