//! `xitor`: ξ tables, hypertor, d², homology recovery and orbit
//! classification from the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use xitor::hypertor::{d2, e1_page, hypertor_dims, recovered_homology};
use xitor::orbits::{classify, projective, RelationShape, DEFAULT_BUDGET};
use xitor::persistence::{homology_module, present_cokernel};
use xitor::{
    minimal_resolution, parse_mfc, parse_presentation, xi, DegreeMultiset, Error, FiniteField, Fp, MultiDegree,
    MultiFilteredComplex, PersistenceModule, TorTable,
};

#[derive(Parser)]
#[command(name = "xitor", version, about = "Refined discrete invariants of multidimensional persistence")]
struct Cli {
    /// Field characteristic.
    #[arg(long, global = true, default_value_t = 2, value_parser = parse_field)]
    field: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for the internal parallelism.
    #[arg(long, global = true, env = "XI_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// ξ table of H_q of a complex, or of a presented module.
    Xi(ModuleArgs),
    /// Generator degrees of the minimal free resolution.
    Resolve(ModuleArgs),
    /// Graded dimensions of the hypertor of the chain complex.
    Hypertor(ComplexArgs),
    /// The E¹ page, whether d¹ vanishes, and the E¹ = E^∞ verdict.
    E1(ComplexArgs),
    /// The differential d² : Tor₂(H_q) -> Tor₀(H_{q+1}).
    D2(HomologyArgs),
    /// Betti numbers recovered from the T complex against direct ranks.
    Recover(ComplexArgs),
    /// Orbits of relation families under the automorphisms of F(ξ₀).
    Orbits(OrbitArgs),
    /// Parses and validates complexes, presentations and shapes.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct ComplexArgs {
    /// Multifiltered complex in .mfc format.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Homology degree.
    #[arg(long, default_value_t = 0)]
    q: usize,
}

#[derive(Args)]
struct ModuleArgs {
    /// Multifiltered complex in .mfc format; the module is H_q.
    #[arg(long, conflicts_with = "presentation", required_unless_present = "presentation")]
    input: Option<PathBuf>,
    /// Presentation in JSON.
    #[arg(long)]
    presentation: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    q: usize,
    /// Recompute on the grid widened by one in every direction.
    #[arg(long)]
    widen: bool,
}

#[derive(Args)]
struct OrbitArgs {
    /// Relation shape in JSON: {"n", "xi0", "xi1"}.
    #[arg(long, conflicts_with_all = ["xi0", "xi1", "n"], required_unless_present = "xi0")]
    input: Option<PathBuf>,
    /// Generator degrees, e.g. "{(0,0):2}".
    #[arg(long)]
    xi0: Option<String>,
    /// Relation degrees, e.g. "{(0,3),(1,2)}".
    #[arg(long, default_value = "{}")]
    xi1: String,
    /// Number of parameters; read from the degrees when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Largest number of candidate families to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

const FIELDS: [u32; 6] = [2, 3, 5, 7, 11, 13];

fn parse_field(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if FIELDS.contains(&p) {
        Ok(p)
    } else {
        Err(format!("unsupported characteristic {p}; choose one of {FIELDS:?}"))
    }
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type Run<T> = Result<T, Failure>;

/// A report in all three formats: JSON, CSV rows with a header, aligned text.
struct Report {
    json: Value,
    csv: Vec<Vec<String>>,
    text: String,
    /// Exit status 2 after printing.
    mismatch: bool,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(&self.json).expect("reports serialize") + "\n",
            Format::Text => self.text.clone(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
            }
        }
    }
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_complex<F: FiniteField>(path: &Path) -> Run<MultiFilteredComplex<F>> {
    Ok(parse_mfc(&read(path)?)?)
}

fn pairs(m: &DegreeMultiset) -> Value {
    json!(m.pairs())
}

fn table(rows: Vec<Vec<String>>) -> String {
    let widths: Vec<usize> = (0..rows.first().map_or(0, Vec::len))
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}

fn module<F: FiniteField>(args: &ModuleArgs) -> Run<(PersistenceModule<F>, String)> {
    let (m, source) = match (&args.input, &args.presentation) {
        (Some(path), _) => {
            let x = load_complex::<F>(path)?;
            (homology_module(&x, args.q).h, format!("H_{} of {}", args.q, path.display()))
        }
        (None, Some(path)) => (present_cokernel(&parse_presentation::<F>(&read(path)?)?), path.display().to_string()),
        (None, None) => return Err(Failure::Invalid("one of --input or --presentation is required".into())),
    };
    if args.widen {
        let wide = m.bound().plus(&MultiDegree::ones(m.n()));
        return Ok((m.widen(wide), source));
    }
    Ok((m, source))
}

fn multiset_report(field: u32, source: &str, key: &str, sets: &[DegreeMultiset], mut json: Value) -> Report {
    json[key] = Value::Array(sets.iter().enumerate().map(|(j, s)| json!([j, pairs(s)])).collect());
    let mut csv = vec![vec!["j".to_string(), "degree".into(), "multiplicity".into()]];
    let mut text = format!("field {field}\nsource {source}\n");
    for (j, s) in sets.iter().enumerate() {
        writeln!(text, "{key}{j} = {s}").unwrap();
        csv.extend(s.iter().map(|(d, k)| vec![j.to_string(), d.to_string(), k.to_string()]));
    }
    Report { json, csv, text, mismatch: false }
}

fn cmd_xi<F: FiniteField>(field: u32, args: &ModuleArgs) -> Run<Report> {
    let (m, source) = module::<F>(args)?;
    let t: TorTable = xi(&m)?;
    let json = json!({ "field": field, "source": source, "n": t.n });
    Ok(multiset_report(field, &source, "xi", &t.xi, json))
}

fn cmd_resolve<F: FiniteField>(field: u32, args: &ModuleArgs) -> Run<Report> {
    let (m, source) = module::<F>(args)?;
    let res = minimal_resolution(&m)?;
    let gens: Vec<DegreeMultiset> = (0..=res.n()).map(|j| res.xi(j)).collect();
    let betti: Vec<usize> = gens.iter().map(DegreeMultiset::total).collect();
    let json = json!({ "field": field, "source": source, "n": res.n(), "length": res.length(), "betti": betti });
    let mut r = multiset_report(field, &source, "F", &gens, json);
    writeln!(r.text, "betti = {betti:?}").unwrap();
    Ok(r)
}

fn cmd_hypertor<F: FiniteField>(field: u32, args: &ComplexArgs) -> Run<Report> {
    let x = load_complex::<F>(&args.input)?;
    let h = hypertor_dims(&x)?;
    let source = args.input.display().to_string();
    let json = json!({ "field": field, "source": source });
    Ok(multiset_report(field, &source, "hypertor", &h, json))
}

fn cmd_e1<F: FiniteField>(field: u32, args: &ComplexArgs) -> Run<Report> {
    let x = load_complex::<F>(&args.input)?;
    let page = e1_page(&x)?;
    let mut terms = Vec::new();
    let mut csv = vec![vec!["p".to_string(), "q".into(), "degree".into(), "multiplicity".into()]];
    let mut rows = vec![vec!["p".to_string(), "q".into(), "E1".into()]];
    for p in 0..page.tor.len() {
        for q in 0..=page.n {
            let d = page.dims(p, q);
            terms.push(json!({ "p": p, "q": q, "dims": pairs(&d) }));
            csv.extend(d.iter().map(|(v, k)| vec![p.to_string(), q.to_string(), v.to_string(), k.to_string()]));
            rows.push(vec![p.to_string(), q.to_string(), d.to_string()]);
        }
    }
    let mismatch = page.mismatch.as_ref().map(|(l, v, e, h)| json!({ "l": l, "degree": v, "e1": e, "hypertor": h }));
    let json = json!({
        "field": field,
        "source": args.input.display().to_string(),
        "e1": terms,
        "hypertor": page.hypertor.iter().map(pairs).collect::<Vec<_>>(),
        "d1_zero": page.d1_zero,
        "mismatch": mismatch,
        "verdict": page.verdict,
    });
    let mut text = format!("field {field}\n");
    text += &table(rows);
    writeln!(text, "d1 zero: {}\nverdict: {}", page.d1_zero, page.verdict).unwrap();
    if let Some((l, v, e, h)) = &page.mismatch {
        writeln!(text, "mismatch at {v}, index {l}: E1 has {e}, hypertor has {h}").unwrap();
    }
    Ok(Report { json, csv, text, mismatch: false })
}

fn cmd_d2<F: FiniteField>(field: u32, args: &HomologyArgs) -> Run<Report> {
    let x = load_complex::<F>(&args.input)?;
    let m = d2(&x, args.q)?;
    let entries: Vec<Vec<i64>> =
        (0..m.rows.len()).map(|r| (0..m.cols.len()).map(|c| m.matrix[(r, c)].to_signed()).collect()).collect();
    let json = json!({
        "field": field,
        "source": args.input.display().to_string(),
        "q": args.q,
        "rows": m.rows,
        "cols": m.cols,
        "matrix": entries,
        "rank": m.rank(),
    });
    let mut csv = vec![vec!["row".to_string(), "col".into(), "entry".into()]];
    let mut grid = vec![std::iter::once(String::new()).chain(m.cols.iter().map(ToString::to_string)).collect()];
    for (r, row) in entries.iter().enumerate() {
        csv.extend(row.iter().enumerate().map(|(c, a)| vec![m.rows[r].to_string(), m.cols[c].to_string(), a.to_string()]));
        grid.push(std::iter::once(m.rows[r].to_string()).chain(row.iter().map(ToString::to_string)).collect());
    }
    let mut text = format!("field {field}\nd2 : Tor_2(H_{}) -> Tor_0(H_{})\n", args.q, args.q + 1);
    text += &table(grid);
    writeln!(text, "rank {}", m.rank()).unwrap();
    Ok(Report { json, csv, text, mismatch: false })
}

fn cmd_recover<F: FiniteField>(field: u32, args: &ComplexArgs) -> Run<Report> {
    let x = load_complex::<F>(&args.input)?;
    let r = recovered_homology(&x)?;
    let status = if r.matches { "MATCH" } else { "MISMATCH" };
    let json = json!({
        "field": field,
        "source": args.input.display().to_string(),
        "t_dims": r.t_dims,
        "t_ranks": r.t_ranks,
        "recovered": r.recovered,
        "direct": r.direct,
        "q_dims": r.q_dims.iter().map(pairs).collect::<Vec<_>>(),
        "q_homology": r.q_homology,
        "status": status,
    });
    let mut csv = vec![vec!["l".to_string(), "t_dim".into(), "t_rank".into(), "recovered".into(), "direct".into()]];
    for l in 0..r.t_dims.len().max(r.direct.len()) {
        let at = |v: &[usize]| v.get(l).copied().unwrap_or(0).to_string();
        csv.push(vec![l.to_string(), at(&r.t_dims), at(&r.t_ranks), at(&r.recovered), at(&r.direct)]);
    }
    let text = format!(
        "field {field}\nT dims {:?}\nT ranks {:?}\nrecovered Betti {:?}\ndirect Betti {:?}\nH(Q) {:?}\n{status}\n",
        r.t_dims, r.t_ranks, r.recovered, r.direct, r.q_homology
    );
    Ok(Report { json, csv, text, mismatch: !r.matches })
}

fn shape(args: &OrbitArgs) -> Run<RelationShape> {
    if let Some(path) = &args.input {
        return Ok(RelationShape::from_json(&read(path)?)?);
    }
    let xi0: DegreeMultiset = args.xi0.as_deref().unwrap_or("{}").parse()?;
    let xi1: DegreeMultiset = args.xi1.parse()?;
    let n = match args.n.or_else(|| xi0.degrees().chain(xi1.degrees()).next().map(MultiDegree::n)) {
        Some(n) => n,
        None => return Err(Failure::Invalid("cannot infer n from empty multisets; pass --n".into())),
    };
    Ok(RelationShape::new(n, xi0, xi1)?)
}

fn cmd_orbits<F: FiniteField>(field: u32, args: &OrbitArgs) -> Run<Report> {
    let shape = shape(args)?;
    let r = classify::<F>(&shape, args.budget)?;
    let n = shape.n();
    let mut rows = Vec::new();
    let mut header: Vec<String> = ["orbit", "size", "pattern", "representative"].map(String::from).to_vec();
    header.extend((2..=n).map(|j| format!("xi{j}")));
    header.extend(["y", "consistent"].map(String::from));
    let mut csv = vec![header.clone()];
    let mut text_rows = vec![header];
    for (i, o) in r.orbits.iter().enumerate() {
        let rep: Vec<String> = o.representative.subspaces.iter().map(projective).collect();
        let y: Vec<Value> = o
            .y
            .iter()
            .map(|c| json!({ "j": c.j, "degree": c.degree, "multiplicity": c.multiplicity, "point": projective(&c.subspace) }))
            .collect();
        rows.push(json!({
            "orbit": i,
            "size": o.size,
            "pattern": o.pattern,
            "representative": rep,
            "xi": o.higher_xi().iter().map(pairs).collect::<Vec<_>>(),
            "y": y,
            "consistent": o.consistent,
        }));
        let ys: Vec<String> = o.y.iter().map(|c| format!("{}@{}", projective(&c.subspace), c.degree)).collect();
        let mut line = vec![i.to_string(), o.size.to_string(), o.pattern.clone().unwrap_or_default(), rep.join(" ")];
        line.extend(o.higher_xi().iter().map(ToString::to_string));
        line.extend([ys.join(" "), o.consistent.to_string()]);
        csv.push(line.clone());
        text_rows.push(line);
    }
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "xi": c.higher_xi.iter().map(pairs).collect::<Vec<_>>(),
                "orbits": c.orbits,
                "phi_bar_injective": c.phi_bar_injective,
            })
        })
        .collect();
    let json = json!({
        "field": field,
        "shape": serde_json::from_str::<Value>(&shape.to_json()).expect("shape serializes"),
        "families": r.family_count,
        "orbit_count": r.orbits.len(),
        "orbits": rows,
        "classes": classes,
        "distinct_higher_xi": r.distinct_higher_xi(),
        "phi_bar_injective": r.phi_bar_injective(),
        "phi_separates": r.phi_separates,
    });
    let mut text = format!("field {field}\nfamilies {}\norbits {}\n", r.family_count, r.orbits.len());
    text += &table(text_rows);
    writeln!(text, "distinct higher xi {}\nphi-bar injective {}", r.distinct_higher_xi(), r.phi_bar_injective())
        .unwrap();
    Ok(Report { json, csv, text, mismatch: false })
}

fn validate_one<F: FiniteField>(path: &Path) -> Result<&'static str, Failure> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "mfc") {
        parse_mfc::<F>(&text)?;
        return Ok("complex");
    }
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("JSON: {e}")))?;
    if v.get("relations").is_some() {
        parse_presentation::<F>(&text)?;
        Ok("presentation")
    } else {
        RelationShape::from_json(&text)?;
        Ok("shape")
    }
}

fn cmd_validate<F: FiniteField>(field: u32, paths: &[PathBuf]) -> Run<Report> {
    let mut results = Vec::new();
    let mut csv = vec![vec!["path".to_string(), "kind".into(), "status".into()]];
    let mut text = format!("field {field}\n");
    let mut invalid = false;
    for p in paths {
        let name = p.display().to_string();
        let (kind, status) = match validate_one::<F>(p) {
            Ok(kind) => (kind, "ok".to_string()),
            Err(Failure::Invalid(m) | Failure::Internal(m)) => {
                invalid = true;
                ("", m)
            }
        };
        results.push(json!({ "path": name, "kind": kind, "status": status }));
        csv.push(vec![name.clone(), kind.into(), status.clone()]);
        writeln!(text, "{name}: {status}").unwrap();
    }
    let report = Report { json: json!({ "field": field, "files": results }), csv, text, mismatch: false };
    if invalid {
        return Err(Failure::Invalid(report.render(Format::Text).trim_end().to_string()));
    }
    Ok(report)
}

fn dispatch<F: FiniteField>(cli: &Cli) -> Run<Report> {
    let p = cli.field;
    match &cli.command {
        Command::Xi(a) => cmd_xi::<F>(p, a),
        Command::Resolve(a) => cmd_resolve::<F>(p, a),
        Command::Hypertor(a) => cmd_hypertor::<F>(p, a),
        Command::E1(a) => cmd_e1::<F>(p, a),
        Command::D2(a) => cmd_d2::<F>(p, a),
        Command::Recover(a) => cmd_recover::<F>(p, a),
        Command::Orbits(a) => cmd_orbits::<F>(p, a),
        Command::Validate { paths } => cmd_validate::<F>(p, paths),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let run = match cli.field {
        2 => dispatch::<Fp<2>>(&cli),
        3 => dispatch::<Fp<3>>(&cli),
        5 => dispatch::<Fp<5>>(&cli),
        7 => dispatch::<Fp<7>>(&cli),
        11 => dispatch::<Fp<11>>(&cli),
        13 => dispatch::<Fp<13>>(&cli),
        p => Err(Failure::Invalid(format!("unsupported characteristic {p}"))),
    };
    match run {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.mismatch {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
