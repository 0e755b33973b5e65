//! Command-line front end for `ksieve`.
//!
//! All commands are implemented by [`run`], which returns the exit code and
//! the text to print, so the binary is a thin wrapper and the behaviour can be
//! tested in-process.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksieve::dot::lattice_dot;
use ksieve::files::{data, format_value, parse_proposition, parse_valuation, ContextFile, System, SystemFile};
use ksieve::ks::{minimal_uncolorable_subfamily, search_dual_section, verify_witness};
use ksieve::partition::lattice;
use ksieve::spectral::ValueMap;
use ksieve::valuations::{check_axioms, check_disjunction_strength, check_naturality, DisjunctionStrength};
use ksieve::{BorelSubset, CoarseGraining, Error, Partition, Sieve, SieveMode, SpectralOperator, Tolerances};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNCOLORABLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ksieve", version, about = "Sieve-valued truth assignments for quantum propositions")]
pub struct Cli {
    /// Sieve mode: `o` keeps constant coarse-grainings, `ostar` drops them.
    /// Defaults to the system file's mode (or `o`).
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Tolerance override, e.g. `--tol group=1e-6`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VAL")]
    pub tol: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    O,
    Ostar,
}

impl From<ModeArg> for SieveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::O => SieveMode::WithConstants,
            ModeArg::Ostar => SieveMode::WithoutConstants,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a proposition under a valuation.
    Eval {
        /// System file, or `bundled:NAME` for a bundled example.
        system: String,
        /// e.g. `vector psi`, `density rho`, `threshold 0.5 rho`, `maximal Sx=1`.
        valuation: String,
        /// e.g. `Sx in {-1, 1}` or `Sx=1`.
        proposition: String,
    },
    /// Check null, FUNC, monotonicity, exclusivity and naturality for every operator.
    Axioms {
        system: String,
        valuation: String,
        /// Restrict to one operator.
        #[arg(long)]
        operator: Option<String>,
    },
    /// Search a context family for a two-valued global section.
    Ks {
        /// Context file, or `bundled:NAME`.
        contexts: String,
        /// Print the chosen atom of every context.
        #[arg(long)]
        witness: bool,
        /// Report an inclusion-minimal uncolourable subfamily.
        #[arg(long)]
        minimize: bool,
    },
    /// Graphviz Hasse diagram of an operator's partition lattice.
    Dot(DotArgs),
    /// Heyting operations on sieves given by generating partitions.
    Heyting {
        /// Size of the spectrum.
        #[arg(long)]
        k: usize,
        #[arg(value_enum)]
        op: HeytingOp,
        /// Generators as 1-based partitions separated by `;`, e.g. `{1,3}{2}; {1}{2,3}`.
        /// An empty string is the empty sieve, `top` the principal sieve.
        left: String,
        right: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct DotArgs {
    pub system: String,
    pub operator: String,
    /// Highlight the sieve of this valuation (requires --proposition).
    #[arg(long, requires = "proposition")]
    pub valuation: Option<String>,
    #[arg(long, requires = "valuation")]
    pub proposition: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeytingOp {
    Meet,
    Join,
    Implies,
    Not,
}

/// Exit code and text to print on stdout and stderr.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output { code, stdout, stderr: String::new() }
    }

    fn input_error(e: Error) -> Self {
        let msg = match e {
            Error::Input(m) => m,
            other => other.to_string(),
        };
        Output { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output::ok(code, text)
            };
        }
    };
    execute(&cli).unwrap_or_else(Output::input_error)
}

fn read_source(path: &str) -> Result<String, Error> {
    if let Some(name) = path.strip_prefix("bundled:") {
        return Ok(match name.trim_end_matches(".json") {
            "spin_half" => data::SPIN_HALF,
            "spin_one" => data::SPIN_ONE,
            "ks18_dim4" => data::KS18_DIM4,
            "qubit_bases" => data::QUBIT_BASES,
            other => {
                return Err(Error::Input(format!(
                    "unknown bundled file `{other}` (spin_half, spin_one, ks18_dim4, qubit_bases)"
                )))
            }
        }
        .to_string());
    }
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))
}

/// Prefixes an error with the file it came from.
fn in_file(path: &str, e: Error) -> Error {
    match e {
        Error::Input(msg) => Error::Input(format!("{path}: {msg}")),
        other => Error::Input(format!("{path}: {other}")),
    }
}

fn tolerance_overrides(cli: &Cli) -> Result<BTreeMap<String, f64>, Error> {
    let mut out = BTreeMap::new();
    for t in &cli.tol {
        let (k, v) = t.split_once('=').ok_or_else(|| Error::Input(format!("--tol: expected KEY=VAL, found `{t}`")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Input(format!("--tol {k}: bad value `{v}`")))?;
        // validate the key early
        Tolerances::default().set(k.trim(), v).map_err(|e| Error::Input(format!("--tol: {e}")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn load_system(cli: &Cli, path: &str) -> Result<(System, SieveMode), Error> {
    let mut file = SystemFile::parse(&read_source(path)?).map_err(|e| in_file(path, e))?;
    file.tolerances.extend(tolerance_overrides(cli)?);
    let sys = file.load().map_err(|e| in_file(path, e))?;
    let mode = cli.mode.map(SieveMode::from).unwrap_or(sys.mode);
    Ok((sys, mode))
}

fn mode_name(m: SieveMode) -> &'static str {
    match m {
        SieveMode::WithConstants => "o",
        SieveMode::WithoutConstants => "ostar",
    }
}

fn sieve_strings(s: &Sieve, a: &SpectralOperator) -> Vec<String> {
    s.notation(|i| format_value(a.eigenvalues()[i]))
}

fn subset_values(a: &SpectralOperator, d: &BorelSubset) -> Vec<String> {
    d.indices().iter().map(|&i| format_value(a.eigenvalues()[i])).collect()
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn render(cli: &Cli, value: Value, text: String) -> String {
    if cli.json {
        let mut s = serde_json::to_string_pretty(&value).expect("json output serializes");
        s.push('\n');
        s
    } else {
        text
    }
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Eval { system, valuation, proposition } => cmd_eval(cli, system, valuation, proposition),
        Command::Axioms { system, valuation, operator } => cmd_axioms(cli, system, valuation, operator.as_deref()),
        Command::Ks { contexts, witness, minimize } => cmd_ks(cli, contexts, *witness, *minimize),
        Command::Dot(args) => cmd_dot(cli, args),
        Command::Heyting { k, op, left, right } => cmd_heyting(cli, *k, *op, left, right.as_deref()),
    }
}

fn cmd_eval(cli: &Cli, path: &str, valuation: &str, proposition: &str) -> Result<Output, Error> {
    let (sys, mode) = load_system(cli, path)?;
    let nu = parse_valuation(&sys, valuation, mode)?;
    let p = parse_proposition(&sys, proposition)?;
    let s = nu.evaluate(&p)?;
    let members = sieve_strings(&s, &p.operator);
    let class = s.classify();
    let value = json!({
        "valuation": valuation.trim(),
        "proposition": proposition.trim(),
        "subset": subset_values(&p.operator, &p.subset),
        "mode": mode_name(mode),
        "sieve": members,
        "classification": class.to_string(),
    });
    let mut text = String::new();
    text.push_str(&format!("sieve: {}\n", braces(&members)));
    text.push_str(&format!("classification: {class}\n"));
    Ok(Output::ok(EXIT_OK, render(cli, value, text)))
}

fn cmd_axioms(cli: &Cli, path: &str, valuation: &str, only: Option<&str>) -> Result<Output, Error> {
    let (sys, mode) = load_system(cli, path)?;
    let nu = parse_valuation(&sys, valuation, mode)?;
    let ops: Vec<(&String, &SpectralOperator)> = match only {
        Some(name) => vec![sys.operators.get_key_value(name).ok_or_else(|| Error::Input(format!("unknown operator `{name}`")))?],
        None => sys.operators.iter().collect(),
    };
    let mut passed = true;
    let mut reports = Vec::new();
    let mut text = String::new();
    for (name, a) in ops {
        let rep = check_axioms(&nu, a)?;
        let k = a.spectrum_len();
        let mut nat_fail = Vec::new();
        for p in lattice(k)?.partitions() {
            let cg = CoarseGraining::canonical(p.clone());
            let f = ValueMap((0..k).map(|i| cg.value(i)).collect());
            if !check_naturality(&nu, a, &f)?.passed() {
                nat_fail.push(p.notation(|i| format_value(a.eigenvalues()[i])));
            }
        }
        let mut strict = Vec::new();
        let all: Vec<BorelSubset> = BorelSubset::all(k).collect();
        for (i, d1) in all.iter().enumerate() {
            for d2 in &all[i..] {
                if check_disjunction_strength(&nu, a, d1, d2)? == DisjunctionStrength::StrictInequality {
                    strict.push((d1.clone(), d2.clone()));
                }
            }
        }
        let ok = rep.passed() && nat_fail.is_empty();
        passed &= ok;
        let pair = |(x, y): &(BorelSubset, BorelSubset)| vec![subset_values(a, x), subset_values(a, y)];
        let func: Vec<Value> = rep
            .func_violations
            .iter()
            .map(|(p, d)| json!({ "partition": p.notation(|i| format_value(a.eigenvalues()[i])), "subset": subset_values(a, d) }))
            .collect();
        reports.push(json!({
            "operator": name,
            "passed": ok,
            "null": rep.null_ok,
            "func_violations": func,
            "monotonicity_violations": rep.monotonicity_violations.iter().map(pair).collect::<Vec<_>>(),
            "exclusivity_violations": rep.exclusivity_violations.iter().map(pair).collect::<Vec<_>>(),
            "naturality_violations": nat_fail,
            "unit": rep.unit_ok,
            "strict_disjunctions": strict.iter().map(pair).collect::<Vec<_>>(),
        }));
        text.push_str(&format!("{name}: {}\n", if ok { "pass" } else { "FAIL" }));
        text.push_str(&format!("  null: {}\n", if rep.null_ok { "ok" } else { "violated" }));
        for (p, d) in &rep.func_violations {
            text.push_str(&format!(
                "  FUNC violated along {} at {}\n",
                p.notation(|i| format_value(a.eigenvalues()[i])),
                braces(&subset_values(a, d))
            ));
        }
        for (d1, d2) in &rep.monotonicity_violations {
            text.push_str(&format!(
                "  monotonicity violated: {} ⊆ {}\n",
                braces(&subset_values(a, d1)),
                braces(&subset_values(a, d2))
            ));
        }
        for (d1, d2) in &rep.exclusivity_violations {
            text.push_str(&format!(
                "  exclusivity violated: {} and {} both totally true\n",
                braces(&subset_values(a, d1)),
                braces(&subset_values(a, d2))
            ));
        }
        for p in &nat_fail {
            text.push_str(&format!("  naturality violated along {p}\n"));
        }
        text.push_str(&format!("  unit: {}\n", if rep.unit_ok { "true" } else { "not true (informational)" }));
        text.push_str(&format!("  strict disjunctions: {}\n", strict.len()));
    }
    let value = json!({ "valuation": valuation.trim(), "mode": mode_name(mode), "passed": passed, "operators": reports });
    text.push_str(if passed { "all axioms hold\n" } else { "axiom violations found\n" });
    Ok(Output::ok(if passed { EXIT_OK } else { EXIT_VIOLATION }, render(cli, value, text)))
}

fn cmd_ks(cli: &Cli, path: &str, witness: bool, minimize: bool) -> Result<Output, Error> {
    let file = ContextFile::parse(&read_source(path)?).map_err(|e| in_file(path, e))?;
    let mut tol = Tolerances::default();
    for (k, v) in tolerance_overrides(cli)? {
        tol.set(&k, v)?;
    }
    let fam = file.build(&tol).map_err(|e| in_file(path, e))?;
    let found = search_dual_section(&fam);
    let mut value = json!({ "contexts": fam.len(), "colorable": found.is_some() });
    let mut text = format!("{} contexts: {}\n", fam.len(), if found.is_some() { "colorable" } else { "uncolorable" });
    if let Some(w) = &found {
        verify_witness(&fam, w, &tol)?;
        if witness {
            let chosen: Vec<Value> = w
                .chosen
                .iter()
                .enumerate()
                .map(|(c, &a)| json!({ "context": c, "atom": a, "label": fam.labels()[c][a] }))
                .collect();
            for (c, &a) in w.chosen.iter().enumerate() {
                text.push_str(&format!("  context {c}: {}\n", fam.labels()[c][a]));
            }
            value["witness"] = Value::Array(chosen);
        }
    } else if minimize {
        let keep = minimal_uncolorable_subfamily(&fam)?;
        text.push_str(&format!("minimal uncolorable subfamily ({} contexts): {:?}\n", keep.len(), keep));
        value["minimal"] = json!(keep);
    }
    let code = if found.is_some() { EXIT_OK } else { EXIT_UNCOLORABLE };
    Ok(Output::ok(code, render(cli, value, text)))
}

fn cmd_dot(cli: &Cli, args: &DotArgs) -> Result<Output, Error> {
    let (sys, mode) = load_system(cli, &args.system)?;
    let a = sys.operator(&args.operator)?;
    let highlight = match (&args.valuation, &args.proposition) {
        (Some(v), Some(p)) => {
            let prop = parse_proposition(&sys, p)?;
            if prop.operator.matrix().distance(a.matrix()) > 0.0 {
                return Err(Error::Input(format!("proposition `{p}` is not about `{}`", args.operator)));
            }
            Some(parse_valuation(&sys, v, mode)?.evaluate(&prop)?)
        }
        _ => None,
    };
    Ok(Output::ok(EXIT_OK, lattice_dot(&args.operator, a, mode, highlight.as_ref())?))
}

fn parse_sieve(k: usize, mode: SieveMode, text: &str) -> Result<Sieve, Error> {
    let t = text.trim();
    if t == "top" {
        return Sieve::top(k, mode);
    }
    let gens = t
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Partition::parse_one_based(k, s))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = gens.iter().find(|p| !mode.admits(p)) {
        return Err(Error::Input(format!("{p} is not admissible in mode {}", mode_name(mode))));
    }
    Sieve::up_closure(k, mode, gens)
}

fn cmd_heyting(cli: &Cli, k: usize, op: HeytingOp, left: &str, right: Option<&str>) -> Result<Output, Error> {
    let mode = cli.mode.map(SieveMode::from).unwrap_or(SieveMode::WithConstants);
    let a = parse_sieve(k, mode, left)?;
    let result = match (op, right) {
        (HeytingOp::Not, None) => a.negate(),
        (HeytingOp::Not, Some(_)) => return Err(Error::Input("`not` takes one sieve".into())),
        (_, None) => return Err(Error::Input(format!("`{op:?}` takes two sieves").to_lowercase())),
        (HeytingOp::Meet, Some(b)) => a.meet(&parse_sieve(k, mode, b)?)?,
        (HeytingOp::Join, Some(b)) => a.join(&parse_sieve(k, mode, b)?)?,
        (HeytingOp::Implies, Some(b)) => a.implies(&parse_sieve(k, mode, b)?)?,
    };
    let members: Vec<String> = result.members().iter().map(|p| p.to_string()).collect();
    let class = result.classify();
    let value = json!({ "k": k, "mode": mode_name(mode), "sieve": members, "classification": class.to_string() });
    let text = format!("sieve: {}\nclassification: {class}\n", braces(&members));
    Ok(Output::ok(EXIT_OK, render(cli, value, text)))
}
