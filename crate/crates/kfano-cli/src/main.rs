//! Command-line surface: enumerate the classification, verify it against
//! the embedded reference tables, or inspect a single family.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kfano::criteria::{is_fano, x_cones, Family};
use kfano::enumerate::{classify_all, Classification};
use kfano::export::{export_rows, render, Format, RowFilter};
use kfano::invariants::{anticanonical_dimensions, rr_check, FamilyRecord};
use kfano::reference::{builtin_allowlist, compare_with_reference, findings};
use kfano::{FamilyInput, FamilyType};

#[derive(Parser)]
#[command(
    name = "kfano",
    about = "Exact classification of K*-Fano threefolds over the plane",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the enumeration and print the classification rows
    Enumerate(EnumerateArgs),
    /// Recompute everything and compare with the embedded reference tables
    Verify(VerifyArgs),
    /// Print the full record of a single family
    Show(ShowArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// restrict to one construction type (A, B or C)
    #[arg(long = "type", value_name = "TYPE")]
    family_type: Option<String>,
    /// restrict to one value of n
    #[arg(long)]
    n: Option<usize>,
    /// restrict to one degree vector, comma separated
    #[arg(long, value_name = "LIST")]
    d: Option<String>,
    /// output format: json, csv or md
    #[arg(long, default_value = "md")]
    format: String,
    /// write the output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// ignore the allowlist of documented discrepancies
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ShowArgs {
    /// family id, or an explicit key like "A d=2 l=2,2,2,2 s=5,1,1,1"
    key: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Show(args) => cmd_show(args),
    }
}

fn parse_type(s: &str) -> Option<FamilyType> {
    match s {
        "A" | "a" => Some(FamilyType::A),
        "B" | "b" => Some(FamilyType::B),
        "C" | "c" => Some(FamilyType::C),
        _ => None,
    }
}

fn parse_list(s: &str) -> Option<Vec<i64>> {
    s.split(',').map(|x| x.trim().parse::<i64>().ok()).collect()
}

fn cmd_enumerate(args: EnumerateArgs) -> ExitCode {
    let mut filter = RowFilter::default();
    if let Some(t) = &args.family_type {
        match parse_type(t) {
            Some(t) => filter.family_type = Some(t),
            None => {
                eprintln!("unknown type {t}; expected A, B or C");
                return ExitCode::from(2);
            }
        }
    }
    filter.n = args.n;
    if let Some(d) = &args.d {
        match parse_list(d) {
            Some(d) => filter.d = Some(d),
            None => {
                eprintln!("could not parse degree vector {d}");
                return ExitCode::from(2);
            }
        }
    }
    let format: Format = match args.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let classification = match classify_all() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("enumeration failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rows: Vec<_> = export_rows(&classification)
        .into_iter()
        .filter(|r| filter.keep(r))
        .collect();
    let text = render(&rows, format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    ExitCode::SUCCESS
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let classification = match classify_all() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("enumeration failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let report = compare_with_reference(&classification);
    let allowlist: &[_] = if args.strict {
        &[]
    } else {
        builtin_allowlist()
    };
    let found = findings(&report, allowlist);
    println!(
        "families: {}   matched against reference lists: {}",
        classification.records.len(),
        report.comparisons.len()
    );
    let mut undocumented = 0usize;
    for f in &found {
        if f.documented {
            println!("documented discrepancy: {}", f.description);
        } else {
            undocumented += 1;
            println!("MISMATCH: {}", f.description);
        }
    }
    if found.is_empty() {
        println!("clean: classification reproduces the reference lists exactly");
    }
    if undocumented == 0 {
        println!("verify: OK ({} documented discrepancies)", found.len());
        ExitCode::SUCCESS
    } else {
        println!("verify: FAILED ({} undocumented mismatches)", undocumented);
        ExitCode::FAILURE
    }
}

fn parse_show_key(key: &[String]) -> Result<ShowKey, String> {
    if key.is_empty() {
        return Err("missing key".into());
    }
    if key.len() == 1 {
        if let Ok(id) = key[0].parse::<u32>() {
            return Ok(ShowKey::Id(id));
        }
    }
    let t = parse_type(&key[0]).ok_or_else(|| format!("unknown type {}", key[0]))?;
    let mut d = None;
    let mut l = None;
    let mut s = None;
    for part in &key[1..] {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got {part}"))?;
        let list = parse_list(value).ok_or_else(|| format!("bad list {value}"))?;
        match name {
            "d" => d = Some(list),
            "l" => l = Some(list),
            "s" | "shifts" => s = Some(list),
            other => return Err(format!("unknown field {other}")),
        }
    }
    match (d, l, s) {
        (Some(d), Some(l), Some(s)) => Ok(ShowKey::Input(FamilyInput::new(t, d, l, s))),
        _ => Err("explicit keys need d=, l= and s=".into()),
    }
}

enum ShowKey {
    Id(u32),
    Input(FamilyInput),
}

fn cmd_show(args: ShowArgs) -> ExitCode {
    let key = match parse_show_key(&args.key) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };
    let classification = match classify_all() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("enumeration failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let idx = match key {
        ShowKey::Id(id) => {
            if id == 0 || id as usize > classification.records.len() {
                eprintln!("unknown family id {id}");
                return ExitCode::from(3);
            }
            (id - 1) as usize
        }
        ShowKey::Input(input) => {
            let nf = kfano::criteria::normal_form(&input);
            match classification.records.iter().position(|r| r.input == nf) {
                Some(i) => i,
                None => {
                    eprintln!("no classified family matches the given data");
                    return ExitCode::from(3);
                }
            }
        }
    };
    print_record(&classification, idx);
    ExitCode::SUCCESS
}

fn print_record(classification: &Classification, idx: usize) {
    let rec: &FamilyRecord = &classification.records[idx];
    let rows = export_rows(classification);
    let row = &rows[idx];
    println!("family {} (type {})", row.id, row.family_type);
    if let Some(pid) = row.reference_id {
        println!("  reference list entry: {pid}");
    }
    println!("  n = {}, degree vector d = {:?}", row.n, row.d);
    println!("  exponents l = {:?}", row.exponents);
    println!("  shifts d_ij = {:?}", row.shifts);
    println!("  class group: {}", row.class_group);
    println!("  degree matrix:");
    for r in &row.degree_matrix {
        println!("    {:?}", r);
    }
    for rel in &row.cox_relations {
        println!("  relation: {}", rel);
    }
    println!("  -K_X = {:?}", row.anti_k);
    println!("  -K_X^3 = {}", row.deg_cubed);
    println!("  Hilbert numerator: {:?}", row.hilbert_numerator);
    let fam: &Family = &rec.family;
    println!("  Fano: {}", is_fano(fam));
    println!("  Gorenstein certificate:");
    for e in &rec.gorenstein_certificate.entries {
        println!(
            "    {} = {} [{}]",
            e.name,
            e.value,
            if e.holds { "ok" } else { "violated" }
        );
    }
    let (witness, maximal) = x_cones(&rec.input);
    println!(
        "  X-cones: {} witness, {} maximal; Cartier systems all integral: {}",
        witness.cones.len(),
        maximal.cones.len(),
        kfano::criteria::is_gorenstein_cone_oracle(fam)
    );
    let h = anticanonical_dimensions(fam).expect("dimensions");
    println!(
        "  h(0..3) = {:?}   Riemann-Roch: {}",
        h.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        rr_check(fam).unwrap()
    );
    if !row.g_flags.is_empty() {
        println!("  genericity requirements:");
        for f in &row.g_flags {
            println!("    {}", f);
        }
    }
    for n in &row.notes {
        println!("  note: {}", n);
    }
}
