use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use twform_core::forms::{boundary_parity, verify_cardinality_identity, CohomologyModel, TwistedClass};
use twform_core::lattice::Lattice;
use twform_core::obstruction::{corollary_check, theorem_report, ManifoldRecord, Verdict};
use twform_core::twisted::{
    bockstein_report, builtin_model, homology, les_double_cover_report, universal_coefficients_report,
    CoefficientSystem, EquivariantComplex,
};
use twform_core::verify::run_suite;
use twform_core::Error;

/// Twisted intersection forms, local-coefficient homology and smoothability obstructions.
#[derive(Parser)]
#[command(name = "twform", version)]
struct Cli {
    /// Render a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a negative definite unimodular form is diagonal.
    Standardness {
        /// Lattice JSON file, or a name such as `minus_E8` or `minus_identity(4)`.
        lattice: String,
    },
    /// Smallest k (not divisible by 4) with a vector of square -k.
    MinimalK { lattice: String },
    /// Count the splitting sets for a class and check the cardinality identity.
    PcCount { model: PathBuf, class: PathBuf },
    /// Homology of a complex with the chosen coefficients.
    Homology {
        /// Complex JSON file, or a built-in model name such as `surface(1,nontrivial)*sphere2`.
        complex: String,
        #[arg(long, default_value = "Z")]
        coeff: String,
        /// Also verify the exact sequences and universal coefficients.
        #[arg(long)]
        check: bool,
    },
    /// Run the smoothability criterion on a manifold record.
    Obstruct {
        record: PathBuf,
        #[arg(long)]
        system: String,
    },
    /// Run the built-in self-check suite.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

/// Exit status 3: the computation completed but an identity or check failed.
struct Finding {
    report: Value,
    text: String,
}

enum Failure {
    Io(String),
    Core(Error),
    Finding(Finding),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownModel(_) | Error::InvalidRecord(_) => 1,
        Error::IdentityViolation(_) | Error::ExactnessViolation(_) | Error::OddTildeCount(_) => 3,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_lattice(arg: &str) -> Result<Lattice, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        parse(path)
    } else {
        Lattice::named(arg).map_err(|_| Failure::Io(format!("{arg}: no such file or named lattice")))
    }
}

fn load_complex(arg: &str) -> Result<EquivariantComplex, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        parse(path)
    } else {
        Ok(builtin_model(arg)?.into_equivariant())
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn standardness(arg: &str) -> Result<(Value, String), Failure> {
    let l = load_lattice(arg)?;
    let rd = l.root_decomposition()?;
    let standard = rd.fhat.rank() == 0;
    let text = format!(
        "rank {}: {} (D has rank {}, F-hat has rank {})",
        l.rank(),
        if standard { "standard" } else { "non-standard" },
        rd.rank_d(),
        rd.fhat.rank()
    );
    let report = json!({
        "standard": standard,
        "rank": l.rank(),
        "rank_d": rd.rank_d(),
        "d_basis": rd.d_basis,
        "fhat_basis": rd.fhat_basis,
        "fhat": rd.fhat,
    });
    Ok((report, text))
}

fn minimal_k(arg: &str) -> Result<(Value, String), Failure> {
    let l = load_lattice(arg)?;
    let m = twform_core::forms::minimal_k(&l)?;
    let text = format!("minimal k = {} (witness {:?}, search bound {})", m.k, m.witness, m.search_bound);
    Ok((to_value(&m), text))
}

fn pc_count(model: &Path, class: &Path) -> Result<(Value, String), Failure> {
    let model: CohomologyModel = parse(model)?;
    let class: TwistedClass = parse(class)?;
    let k = -class.square(&model);
    let k: u64 =
        k.try_into().map_err(|_| Failure::Core(Error::NonNegativeSquare((-&class.square(&model)).to_string())))?;
    if k == 0 {
        return Err(Failure::Core(Error::NonNegativeSquare("0".into())));
    }
    let card = verify_cardinality_identity(&model, &class, k)?;
    let (parity, parity_note) = match boundary_parity(&model, &class, k) {
        Ok(p) => (Some(p), None),
        Err(e @ (Error::Precondition(_) | Error::EmptyLattice)) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let mut text = format!(
        "k = {k}: |P_l| = {} = |2T| * |P_c| = {} * {} (|P~_l| = {})",
        card.p_ell, card.doubled_torsion_order, card.p_c, card.p_ell_tilde
    );
    match (&parity, &parity_note) {
        (Some(p), _) => {
            let _ = write!(text, "\nparity |P_l| mod 2 = {}", p.parity);
            for f in &p.findings {
                let _ = write!(text, "\nfinding: {f}");
            }
        }
        (None, Some(n)) => {
            let _ = write!(text, "\nparity not evaluated: {n}");
        }
        _ => {}
    }
    let report = json!({ "cardinality": card, "parity": parity, "parity_skipped": parity_note });
    Ok((report, text))
}

fn homology_cmd(arg: &str, coeff: &str, check: bool) -> Result<(Value, String), Failure> {
    let complex = load_complex(arg)?;
    let coeff: CoefficientSystem = coeff.parse()?;
    let h = homology(&complex.specialize(coeff))?;
    let mut text = String::new();
    for (k, g) in h.groups.iter().enumerate() {
        let _ = writeln!(text, "H_{k}({coeff}) = {g}");
    }
    let mut report = json!({ "coefficients": coeff.to_string(), "homology": h });
    if check {
        let les = les_double_cover_report(&complex);
        let bock = bockstein_report(&complex);
        let uct: Vec<_> = (0..complex.ranks().len() as isize)
            .map(|q| universal_coefficients_report(&complex, q))
            .collect::<Result<_, _>>()?;
        let uct_ok = uct.iter().all(|u| u.consistent);
        let exact = les.is_ok() && bock.is_ok();
        let _ = writeln!(
            text,
            "double cover sequence: {}\nBockstein sequence: {}\nuniversal coefficients: {}",
            status(&les),
            status(&bock),
            if uct_ok { "consistent" } else { "MISMATCH" }
        );
        report["double_cover_sequence"] = result_value(&les);
        report["bockstein_sequence"] = result_value(&bock);
        report["universal_coefficients"] = to_value(&uct);
        if !(exact && uct_ok) {
            return Err(Failure::Finding(Finding { report, text }));
        }
    }
    Ok((report, text))
}

fn status<T>(r: &Result<T, Error>) -> String {
    match r {
        Ok(_) => "exact".into(),
        Err(e) => format!("FAILED ({e})"),
    }
}

fn result_value<T: Serialize>(r: &Result<T, Error>) -> Value {
    match r {
        Ok(x) => to_value(x),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn obstruct(path: &Path, system: &str) -> Result<(Value, String), Failure> {
    let record: ManifoldRecord = parse(path)?;
    let ls = record.system(system)?;
    if record.boundary.is_some() {
        let r = theorem_report(&record, ls)?;
        let text = match &r.conclusion {
            Some(c) => format!("{}: {c}", r.record),
            None => format!("{}: no conclusion\n{}", r.record, r.notes.join("\n")),
        };
        return Ok((to_value(&r), text));
    }
    let v = corollary_check(&record, ls)?;
    let mut text = match &v.verdict {
        Verdict::NonSmoothable => format!("{}: admits no smooth structure", record.name),
        Verdict::NoObstruction => format!("{}: no obstruction (twisted form is standard)", record.name),
        Verdict::HypothesisFailure(ids) => format!("{}: hypotheses fail: {}", record.name, ids.join(", ")),
    };
    for h in &v.certificate.hypotheses {
        let _ = write!(text, "\n  [{}] {} {}", if h.passed { "pass" } else { "FAIL" }, h.id, h.description);
    }
    for a in &v.certificate.advisories {
        let _ = write!(text, "\n  note: {a}");
    }
    Ok((to_value(&v), text))
}

fn verify(seed: u64) -> Result<(Value, String), Failure> {
    let r = run_suite(seed);
    let text = r
        .checks
        .iter()
        .map(|c| format!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail))
        .collect::<Vec<_>>()
        .join("\n");
    if r.passed {
        Ok((to_value(&r), text))
    } else {
        Err(Failure::Finding(Finding { report: to_value(&r), text }))
    }
}

fn emit(text_mode: bool, report: &Value, text: &str) {
    if text_mode {
        println!("{}", text.trim_end());
    } else {
        println!("{}", serde_json::to_string_pretty(report).expect("json"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Standardness { lattice } => standardness(lattice),
        Command::MinimalK { lattice } => minimal_k(lattice),
        Command::PcCount { model, class } => pc_count(model, class),
        Command::Homology { complex, coeff, check } => homology_cmd(complex, coeff, *check),
        Command::Obstruct { record, system } => obstruct(record, system),
        Command::Verify { seed } => verify(*seed),
    };
    match result {
        Ok((report, text)) => {
            emit(cli.text, &report, &text);
            ExitCode::SUCCESS
        }
        Err(Failure::Finding(f)) => {
            emit(cli.text, &f.report, &f.text);
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            if !cli.text {
                println!("{}", json!({ "error": e.to_string(), "exit_code": code }));
            }
            ExitCode::from(code)
        }
    }
}
