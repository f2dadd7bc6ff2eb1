use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use subregw::verify::{self, CheckReport, DEFAULT_SEED};
use subregw::wgen::{self, Family, GeneratorSet};
use subregw::{Engine, Error, KMode, Orientation, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "subregw",
    version,
    about = "Free-field generators of the subregular W-algebra and checks of their identities"
)]
struct Cli {
    /// Maximum number of term operations per computation.
    #[arg(long, global = true, env = "SUBREGW_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Level {
    /// Rank N (the algebra is of type A_{N-1}).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// "symbolic", an integer, or an exact rational p/q.
    #[arg(long, default_value = "symbolic")]
    k: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Typo {
    /// Read the Gram matrix against the reversed basis order.
    GramTranspose,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a generator set and write it as JSON.
    Build {
        #[command(flatten)]
        level: Level,
        /// Comma-separated families: core, W', W'', W, U, omega, fermionic.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run checks and write a report; exit 0 iff all pass.
    Verify {
        #[command(flatten)]
        level: Level,
        /// Comma-separated check names; default is every check valid at this level.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock times (makes the report run-dependent).
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum)]
        inject_typo: Option<Typo>,
    },
    /// Singular part of the OPE of two generators.
    Ope {
        a: String,
        b: String,
        #[command(flatten)]
        level: Level,
    },
    /// Images of the generators in the C2 Poisson algebra, and the C2 relations.
    C2 {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Level for the printed images (the relation checks use their own levels).
        #[arg(long, default_value = "0")]
        k: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge verify reports into one, checks sorted by name.
    ReportMerge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted { .. } => 3,
            _ => 2,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail {
        code: 2,
        msg: msg.into(),
    }
}

type CmdResult = Result<bool, Fail>;

fn engine(level: &Level, orientation: Orientation, budget: u64) -> Result<(Engine, KMode), Fail> {
    if level.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    if budget == 0 {
        return Err(usage("budget must be at least 1"));
    }
    let k = wgen::parse_k(&level.k)?;
    Ok((
        Engine::with_orientation(level.n, k.clone(), orientation)?.with_budget(budget),
        k,
    ))
}

fn emit(v: &Value, out: Option<&PathBuf>) -> Result<(), Fail> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cocycles(e: &Engine) -> Value {
    Value::Array(
        e.cocycle_table()
            .iter()
            .map(|c| json!({"left": c.left.name(), "right": c.right.name(), "sign": c.sign}))
            .collect(),
    )
}

fn cmd_build(level: &Level, only: &[String], out: Option<&PathBuf>, budget: u64) -> CmdResult {
    let (e, k) = engine(level, Orientation::Declared, budget)?;
    let families: BTreeSet<Family> = if only.is_empty() {
        Family::defaults(&k)
    } else {
        only.iter()
            .map(|s| Family::parse(s))
            .collect::<subregw::Result<_>>()?
    };
    let set = GeneratorSet::build(&e, &families)?;
    emit(&set.to_json(), out)?;
    Ok(true)
}

fn run_one(
    name: &str,
    level: &Level,
    orientation: Orientation,
    budget: u64,
    seed: u64,
) -> Result<CheckReport, Fail> {
    let (e, _) = engine(level, orientation, budget)?;
    verify::run_check(name, &e, seed).map_err(|err| {
        let mut f = Fail::from(err);
        f.msg = format!("check {name}: {}", f.msg);
        f
    })
}

fn cmd_verify(
    level: &Level,
    suite: &[String],
    seed: u64,
    out: Option<&PathBuf>,
    timing: bool,
    typo: Option<Typo>,
    budget: u64,
) -> CmdResult {
    let orientation = match typo {
        Some(Typo::GramTranspose) => Orientation::Reversed,
        None => Orientation::Declared,
    };
    let (e, k) = engine(level, orientation, budget)?;
    let mut names: Vec<String> = if suite.is_empty() {
        verify::applicable_checks(&k)
            .into_iter()
            .map(String::from)
            .collect()
    } else {
        suite.to_vec()
    };
    names.sort();
    names.dedup();
    for n in &names {
        if verify::level_of(n).is_none() {
            return Err(usage(format!("unknown check {n:?}")));
        }
    }
    let results: Vec<Result<CheckReport, Fail>> = names
        .par_iter()
        .map(|name| run_one(name, level, orientation, budget, seed))
        .collect();
    // Budget exhaustion outranks other errors.
    let mut reports = Vec::new();
    let mut first_err: Option<Fail> = None;
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(f) => {
                if first_err.as_ref().is_none_or(|g| f.code > g.code) {
                    first_err = Some(f);
                }
            }
        }
    }
    if let Some(f) = first_err {
        return Err(f);
    }
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        eprintln!("{:<14} {}", r.check, if r.passed { "pass" } else { "FAIL" });
    }
    let v = json!({
        "N": level.n,
        "K": k.label(),
        "seed": seed,
        "orientation": match orientation { Orientation::Declared => "declared", Orientation::Reversed => "reversed" },
        "cocycles": cocycles(&e),
        "verdict": if passed { "pass" } else { "fail" },
        "checks": reports.iter().map(|r| r.to_json(timing)).collect::<Vec<_>>(),
    });
    emit(&v, out)?;
    Ok(passed)
}

fn cmd_ope(a: &str, b: &str, level: &Level, budget: u64) -> CmdResult {
    let (e, k) = engine(level, Orientation::Declared, budget)?;
    let mut families = BTreeSet::new();
    for name in [a, b] {
        let fam = match name {
            "E" | "H" | "F" => Family::Core,
            "omega" => Family::Omega,
            "alpha" | "beta" | "Psi+" | "Psi-" | "e^beta" | "e^-beta" => Family::Fermionic,
            s if s.starts_with("W''") => Family::WDouble,
            s if s.starts_with("W'") => Family::WPrime,
            s if s.starts_with('W') => Family::W,
            s if s.starts_with('U') => Family::U,
            _ => return Err(usage(format!("unknown generator {name:?}"))),
        };
        families.insert(fam);
    }
    let set = GeneratorSet::build(&e, &families)?;
    let get = |s: &str| {
        set.get(s)
            .ok_or_else(|| usage(format!("unknown generator {s:?}")))
    };
    let sp = e.singular_part(get(a)?, get(b)?)?;
    if sp.is_empty() {
        println!("{a}(z) {b}(w) ~ 0 (regular)");
    }
    for (n, v) in sp.iter().rev() {
        println!("{a}_({n}){b} = {v}");
    }
    let poles: serde_json::Map<String, Value> = sp
        .iter()
        .map(|(n, v)| {
            (
                n.to_string(),
                serde_json::to_value(v.to_json()).expect("serializable"),
            )
        })
        .collect();
    emit(
        &json!({"N": level.n, "K": k.label(), "a": a, "b": b, "singular_part": poles}),
        None,
    )?;
    Ok(true)
}

fn cmd_c2(n: usize, k: &str, seed: u64, out: Option<&PathBuf>, budget: u64) -> CmdResult {
    let level = Level {
        n,
        k: k.to_string(),
    };
    let (e, km) = engine(&level, Orientation::Declared, budget)?;
    let mut images = serde_json::Map::new();
    let mut add = |name: String, s: &subregw::FockState| -> Result<(), Fail> {
        let p = verify::c2_reduce(s)?;
        println!("{name}bar = {p}");
        images.insert(name, Value::String(p.to_string()));
        Ok(())
    };
    add("E".into(), &wgen::e_state(&e))?;
    add("H".into(), &wgen::h_state(&e)?)?;
    add("F".into(), &wgen::f_state(&e)?)?;
    for (m, w) in wgen::build_w_all(&e)?.iter().enumerate().skip(2) {
        add(format!("W{m}"), w)?;
    }
    let (rep, pattern) = verify::check_c2_relations(n, seed, budget)?;
    let v = json!({
        "N": n,
        "K": km.label(),
        "images": images,
        "bracket_pattern": {"k_plus_one": pattern.k_plus_one, "n_minus_k": pattern.n_minus_k},
        "verdict": if rep.passed { "pass" } else { "fail" },
        "checks": [rep.to_json(false)],
    });
    emit(&v, out)?;
    Ok(rep.passed)
}

fn cmd_merge(inputs: &[PathBuf], out: Option<&PathBuf>) -> CmdResult {
    let mut checks = Vec::new();
    for p in inputs {
        let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        let arr = v["checks"]
            .as_array()
            .ok_or_else(|| usage(format!("{}: no checks array", p.display())))?;
        for c in arr {
            CheckReport::from_json(c)?;
            checks.push(c.clone());
        }
    }
    let key = |c: &Value| {
        (
            c["check"].as_str().unwrap_or("").to_string(),
            c["params"].to_string(),
        )
    };
    checks.sort_by_key(key);
    let passed = checks.iter().all(|c| c["verdict"] == "pass");
    emit(
        &json!({"verdict": if passed { "pass" } else { "fail" }, "checks": checks}),
        out,
    )?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget;
    let r = match &cli.cmd {
        Cmd::Build { level, only, out } => cmd_build(level, only, out.as_ref(), budget),
        Cmd::Verify {
            level,
            suite,
            seed,
            out,
            timing,
            inject_typo,
        } => cmd_verify(
            level,
            suite,
            *seed,
            out.as_ref(),
            *timing,
            *inject_typo,
            budget,
        ),
        Cmd::Ope { a, b, level } => cmd_ope(a, b, level, budget),
        Cmd::C2 { n, k, seed, out } => cmd_c2(*n, k, *seed, out.as_ref(), budget),
        Cmd::ReportMerge { inputs, out } => cmd_merge(inputs, out.as_ref()),
    };
    match r {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
