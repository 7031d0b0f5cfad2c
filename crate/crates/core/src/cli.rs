//! The `hexafield` command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 capacity error, 64 usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::galois::{is_quotient_of_finite_field, quotient_of, SearchBound};
use crate::group::{AbelianGroup, GroupElement};
use crate::hexagon::{hexagon_count_formula, HexagonTable};
use crate::lottery::{census_rows, estimate, Event, LotterySpec};
use crate::morphism::{canonical_form, canonical_pasture, pasture_automorphisms, AutomorphismAction};
use crate::pasture::Pasture;
use crate::product::{product, product_theorem_verdict};
use crate::serial::{pasture_from_json, pasture_to_json, pasture_to_value};
use crate::skew::{skew_summary, CayleyGroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "HEXAFIELD_THREADS";

#[derive(Parser, Debug)]
#[command(name = "hexafield", version, about = "Finite hyperfields and pastures")]
struct Cli {
    /// Worker threads (falls back to HEXAFIELD_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CapArgs {
    /// Largest group order for the brute-force axiom oracle.
    #[arg(long, global = true)]
    oracle_order: Option<usize>,
    /// Largest group order for a hexagon table.
    #[arg(long, global = true)]
    table_order: Option<usize>,
    /// Largest hexagon count for exhaustive enumeration.
    #[arg(long, global = true)]
    census_hexagons: Option<usize>,
    /// Largest field size the quotient tools will build.
    #[arg(long, global = true)]
    field_q: Option<u64>,
    /// Largest number of equations in a linear-system check.
    #[arg(long, global = true)]
    fetvins_m: Option<usize>,
}

impl CapArgs {
    fn caps(&self) -> Result<Caps> {
        let mut c = Caps::default();
        if let Some(v) = self.oracle_order {
            c.oracle_order = v;
        }
        if let Some(v) = self.table_order {
            c.table_order = v;
        }
        if let Some(v) = self.census_hexagons {
            c.census_hexagons = v;
        }
        if let Some(v) = self.field_q {
            c.field_q = v;
        }
        if let Some(v) = self.fetvins_m {
            c.fetvins_m = v;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of hexagons of a group.
    Hexcount {
        #[arg(long)]
        group: String,
        /// Build the orbit table instead of using the closed formula.
        #[arg(long)]
        enumerate: bool,
    },
    /// Every hyperfield on a group, one row each.
    Census {
        #[arg(long)]
        group: String,
        /// Unit; every admissible unit when omitted.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Monte Carlo estimate of an event over random nullsets.
    Lottery {
        #[arg(long)]
        group: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        event: String,
    },
    /// Hyperfield, field, 0/0 and 4-full tests for a pasture.
    Check {
        #[arg(long)]
        pasture: PathBuf,
    },
    /// The quotient hyperfield F_q / Γ with Γ of the given index.
    Quotient {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        index: u32,
    },
    /// Whether a hyperfield is a quotient of a finite field.
    Isquotient {
        #[arg(long)]
        pasture: PathBuf,
        /// Search limit on q - 1 when 1 ⊞ -1 is everything: `auto` or a number.
        #[arg(long, default_value = "auto")]
        bound: String,
    },
    /// Product of two pastures.
    Product {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Hexagon orbits of a possibly non-abelian group.
    Skewhex {
        #[arg(long)]
        group: String,
    },
    /// Canonical form of a pasture, or the isomorphism classes of
    /// hyperfields on a group.
    Classify {
        #[arg(long, conflicts_with = "group", required_unless_present = "group")]
        pasture: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, requires = "group")]
        eps: Option<String>,
    },
}

/// Parses an element literal such as `1`, `[1,2]` or `1,2`. `e` is the
/// identity of any group.
pub fn parse_element(group: &AbelianGroup, s: &str) -> Result<GroupElement> {
    let t = s.trim();
    if matches!(t, "e" | "id" | "identity") {
        return Ok(group.identity());
    }
    let inner = t.trim_start_matches('[').trim_end_matches(']');
    let residues: Vec<u32> = inner
        .split([',', ' '])
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad element literal {s:?}"))))
        .collect::<Result<_>>()?;
    let residues = if group.rank() == 0 && residues == [0] { Vec::new() } else { residues };
    let g = GroupElement::new(residues);
    if !group.contains(&g) {
        return Err(Error::InvalidElement {
            element: g.residues,
            group: group.to_string(),
        });
    }
    Ok(g)
}

fn read_pasture(path: &Path, caps: &Caps) -> Result<Pasture> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    pasture_from_json(&text, caps)
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("{THREADS_ENV} must be a number, got {v:?}"))),
        _ => Ok(None),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_capacity() {
        EXIT_CAPACITY
    } else {
        EXIT_DOMAIN
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let threads = match cli.threads.map(Ok).or_else(|| threads_from_env().transpose()) {
        Some(Ok(n)) => n,
        Some(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
        None => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    // workers cannot hold the caller's writers, so buffer the output
    let (result, buf_out, buf_err) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = dispatch(&cli, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&buf_out);
    let _ = err.write_all(&buf_err);
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parse(format!("write failed: {e}"))
}

fn want(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Error::Parse(format!("format {f:?} is not available for this command")))
    }
}

fn print_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<()> {
    writeln!(out, "{v}").map_err(io)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let caps = cli.caps.caps()?;
    match &cli.command {
        Command::Hexcount { group, enumerate } => {
            let g: AbelianGroup = group.parse()?;
            let count = if *enumerate {
                HexagonTable::build(&g, &caps)?.len() as u128
            } else {
                hexagon_count_formula(&g)
            };
            match want(cli.format, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => print_json(out, &json!({"group": g.to_string(), "hexagons": count})),
                _ => writeln!(out, "{count}").map_err(io),
            }
        }
        Command::Census { group, eps } => {
            let g: AbelianGroup = group.parse()?;
            let units = match eps {
                Some(e) => vec![parse_element(&g, e)?],
                None => g.units_of_order_le_2(),
            };
            let format = want(cli.format, Format::Csv, &[Format::Csv, Format::Json])?;
            census_command(&g, &units, format, &caps, out, err)
        }
        Command::Lottery {
            group,
            eps,
            samples,
            event,
        } => {
            let g: AbelianGroup = group.parse()?;
            let unit = parse_element(&g, eps)?;
            let event: Event = event.parse()?;
            let spec = LotterySpec::new(g, unit, cli.seed, *samples)?;
            want(cli.format, Format::Json, &[Format::Json])?;
            let est = estimate(&spec, event, &caps)?;
            print_json(out, &serde_json::to_value(est).expect("plain data"))
        }
        Command::Check { pasture } => {
            let p = read_pasture(pasture, &caps)?;
            let hyper = p.is_hyperfield_fast();
            let field = hyper && p.is_field();
            let zz = p.is_zero_over_zero_fast();
            let full = hyper && p.is_4full(&caps)?;
            match want(cli.format, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => print_json(
                    out,
                    &json!({"is_hyperfield": hyper, "is_field": field, "is_00": zz, "is_4full": full}),
                ),
                _ => writeln!(out, "is_hyperfield={hyper} is_field={field} is_00={zz} is_4full={full}").map_err(io),
            }
        }
        Command::Quotient { q, index } => {
            want(cli.format, Format::Json, &[Format::Json])?;
            let p = quotient_of(*q, *index, &caps)?;
            writeln!(out, "{}", pasture_to_json(&p)).map_err(io)
        }
        Command::Isquotient { pasture, bound } => {
            want(cli.format, Format::Json, &[Format::Json])?;
            let p = read_pasture(pasture, &caps)?;
            let bound: SearchBound = bound.parse()?;
            let v = is_quotient_of_finite_field(&p, bound, &caps)?;
            let mut value = serde_json::to_value(v.status).expect("plain data");
            value["searched_up_to"] = json!(v.searched_up_to);
            print_json(out, &value)
        }
        Command::Product { a, b } => {
            want(cli.format, Format::Json, &[Format::Json])?;
            let (pa, pb) = (read_pasture(a, &caps)?, read_pasture(b, &caps)?);
            let prod = product(&pa, &pb, &caps)?;
            let verdict = product_theorem_verdict(&pa, &pb).ok();
            let r = &prod.result;
            print_json(
                out,
                &json!({
                    "product": pasture_to_value(r),
                    "is_hyperfield": r.is_hyperfield_fast(),
                    "is_00": r.is_zero_over_zero_fast(),
                    "verdict": verdict,
                }),
            )
        }
        Command::Skewhex { group } => {
            want(cli.format, Format::Json, &[Format::Json])?;
            let g: CayleyGroup = group.parse()?;
            let s = skew_summary(&g, &caps)?;
            print_json(out, &serde_json::to_value(s).expect("plain data"))
        }
        Command::Classify { pasture, group, eps } => {
            want(cli.format, Format::Json, &[Format::Json])?;
            if let Some(path) = pasture {
                let p = read_pasture(path, &caps)?;
                let cf = canonical_form(&p, &caps)?;
                let canon = canonical_pasture(&p, &caps)?;
                print_json(
                    out,
                    &json!({
                        "canonical": pasture_to_value(&canon),
                        "unit_orbit_rep": cf.unit_orbit_rep.residues,
                        "is_hyperfield": p.is_hyperfield_fast(),
                        "automorphisms": pasture_automorphisms(&p, &caps)?.len(),
                    }),
                )
            } else {
                let g: AbelianGroup = group.as_deref().expect("clap requires one").parse()?;
                let units = match eps {
                    Some(e) => vec![parse_element(&g, e)?],
                    None => g.units_of_order_le_2(),
                };
                classify_group(&g, &units, &caps, out)
            }
        }
    }
}

fn census_command(
    g: &AbelianGroup,
    units: &[GroupElement],
    format: Format,
    caps: &Caps,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let table = HexagonTable::build(g, caps)?;
    let oracle = g.order() <= caps.oracle_order;
    let mut csv_out = (format == Format::Csv).then(|| csv::Writer::from_writer(Vec::new()));
    if let Some(w) = csv_out.as_mut() {
        w.write_record([
            "group",
            "epsilon",
            "nullset",
            "is_hyperfield",
            "is_field",
            "is_4full",
            "is_00",
            "automorphisms",
        ])
        .map_err(|e| Error::Parse(e.to_string()))?;
    }
    for unit in units {
        let (summary, rows) = census_rows(g, unit, caps, true)?;
        let u = g.index_of(unit)?;
        for row in &rows {
            let p = Pasture::new(table.clone(), u, row.nullset.clone())?;
            let value = pasture_to_value(&p);
            let four = if oracle { Some(p.is_4full(caps)?) } else { None };
            let zz = p.is_zero_over_zero_fast();
            match csv_out.as_mut() {
                Some(w) => w
                    .write_record([
                        g.to_string(),
                        value["epsilon"].to_string(),
                        value["nullset"].to_string(),
                        "true".into(),
                        row.is_field.to_string(),
                        four.map_or(String::new(), |b| b.to_string()),
                        zz.to_string(),
                        row.automorphisms.to_string(),
                    ])
                    .map_err(|e| Error::Parse(e.to_string()))?,
                None => print_json(
                    out,
                    &json!({
                        "pasture": value,
                        "is_hyperfield": true,
                        "is_field": row.is_field,
                        "is_4full": four,
                        "is_00": zz,
                        "automorphisms": row.automorphisms,
                    }),
                )?,
            }
        }
        writeln!(err, "{}", serde_json::to_string(&summary).expect("plain data")).map_err(io)?;
    }
    if let Some(w) = csv_out {
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        out.write_all(&bytes).map_err(io)?;
    }
    Ok(())
}

fn classify_group(g: &AbelianGroup, units: &[GroupElement], caps: &Caps, out: &mut dyn Write) -> Result<()> {
    let table = HexagonTable::build(g, caps)?;
    let action = AutomorphismAction::new(&table, caps)?;
    let mut seen_units = Vec::new();
    for unit in units {
        let u = g.index_of(unit)?;
        let rep = action.unit_orbit_rep(u);
        if seen_units.contains(&rep) {
            continue;
        }
        seen_units.push(rep);
        let (_, rows) = census_rows(g, &g.element(rep), caps, true)?;
        for row in rows {
            if action.canonical_nullset(rep, &row.nullset) != row.nullset {
                continue;
            }
            let p = Pasture::new(table.clone(), rep, row.nullset)?;
            print_json(
                out,
                &json!({
                    "pasture": pasture_to_value(&p),
                    "is_field": row.is_field,
                    "satisfies_star": row.satisfies_star,
                    "automorphisms": row.automorphisms,
                }),
            )?;
        }
    }
    Ok(())
}
