//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the text to print, so it can be driven from tests.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{syntactic_morphism, Element, MonoidMorphism};
use crate::automata::{compile, parse_dfa, parse_regex, render_dfa, Alphabet, Dfa};
use crate::baseclass::{mod_eps_separable, BaseClass, LengthLasso};
use crate::covering::{decide_cover, CoverInstance, CoverOptions, Verdict};
use crate::error::{Error, Result};
use crate::imprint::{EngineOptions, Schedule};
use crate::oracle::{brute_aperiodic, brute_mod_eps_separable, verify_separator, Corpus};
use crate::sdlang::{parse_sd, synthesize, to_sf, validate, SynthOptions};
use crate::semiring::DEFAULT_BUDGET;
use crate::stutter::{aperiodicity_violation, membership, stutters, StutterWitness};

#[derive(Debug, Parser)]
#[command(name = "starfree", version, about = "Star-free closure membership, separation, covering and synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Base class: triv, mod, mod<N> (length modulo N) or finite:<path>.
    #[arg(long, global = true, default_value = "triv")]
    pub base: String,
    /// Emit a JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print derivations and intermediate data.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Seed for shuffled fixpoint schedules and the random corpus.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest synchronization delay searched for.
    #[arg(long, global = true, default_value_t = 8)]
    pub dmax: usize,
    /// Largest monoid the covering engine accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Alphabet, e.g. `ab`. Inferred from the inputs when absent.
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is L in SF(C)?
    Member { lang: String },
    /// Is L1 SF(C)-separable from L2?
    Separate { l1: String, l2: String },
    /// Is (L1, {L2_1, ...}) SF(C)-coverable?
    Cover {
        l1: String,
        #[arg(required = true)]
        l2s: Vec<String>,
    },
    /// Lists the elements of the syntactic monoid with their stutter status.
    Stutters { lang: String },
    /// Synthesizes an expression for a preimage of a C-aperiodic morphism.
    Synthesize {
        /// Morphism file, or a language whose syntactic morphism is used.
        morphism: String,
        /// Element id, `#id`, a word, `eps`, or `accept` for a language.
        element: String,
    },
    /// Validates a bounded synchronization delay expression.
    CheckSd {
        /// Expression file or inline expression.
        expr: String,
    },
    /// Independent brute-force checks.
    Oracle {
        #[command(subcommand)]
        check: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Aperiodicity of the syntactic monoid by power iteration.
    Aperiodic { lang: String },
    /// Is {ε} separable from L by a length-modulo language?
    ModEps {
        lang: String,
        #[arg(long)]
        mmax: Option<usize>,
    },
    /// Does K separate L1 from L2?
    Separator { k: String, l1: String, l2: String },
    /// Compares stutter-based TRIV membership with brute-force aperiodicity
    /// on random DFAs.
    Corpus {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        states: usize,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn verdict(yes: bool, stdout: String) -> Self {
        Outcome {
            code: if yes { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome::error(&e),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Member { lang } => cmd_member(c, lang),
        Command::Separate { l1, l2 } => cmd_cover(c, "separate", l1, std::slice::from_ref(l2)),
        Command::Cover { l1, l2s } => cmd_cover(c, "cover", l1, l2s),
        Command::Stutters { lang } => cmd_stutters(c, lang),
        Command::Synthesize { morphism, element } => cmd_synthesize(c, morphism, element),
        Command::CheckSd { expr } => cmd_check_sd(c, expr),
        Command::Oracle { check } => cmd_oracle(c, check),
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn is_dfa_path(s: &str) -> bool {
    s.ends_with(".dfa")
}

/// Letters occurring in a regex: `[a-z2-9]`, since `0` and `1` denote `∅`
/// and `ε`.
fn regex_letters(text: &str) -> impl Iterator<Item = char> + '_ {
    text.chars().filter(|c| c.is_ascii_lowercase() || ('2'..='9').contains(c))
}

enum BaseSpec {
    Triv,
    Mod,
    ModN(usize),
    Finite(String, MonoidMorphism),
}

fn parse_base_spec(spec: &str) -> Result<BaseSpec> {
    if spec == "triv" {
        return Ok(BaseSpec::Triv);
    }
    if spec == "mod" {
        return Ok(BaseSpec::Mod);
    }
    if let Some(n) = spec.strip_prefix("mod") {
        return match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(BaseSpec::ModN(n)),
            _ => Err(Error::UnsupportedBase(format!("bad modulus in '{spec}'"))),
        };
    }
    if let Some(path) = spec.strip_prefix("finite:") {
        let m = MonoidMorphism::parse(&read_file(path)?)?;
        let name = Path::new(path)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("finite")
            .to_string();
        return Ok(BaseSpec::Finite(name, m));
    }
    Err(Error::UnsupportedBase(format!(
        "'{spec}' (expected triv, mod, mod<N> or finite:<path>)"
    )))
}

impl BaseSpec {
    fn alphabet(&self) -> Option<&Alphabet> {
        match self {
            BaseSpec::Finite(_, m) => Some(m.alphabet()),
            _ => None,
        }
    }

    fn build(&self, alphabet: &Alphabet) -> BaseClass {
        match self {
            BaseSpec::Triv => BaseClass::triv(alphabet),
            BaseSpec::Mod => BaseClass::mod_class(),
            BaseSpec::ModN(n) => BaseClass::length_mod(alphabet, *n),
            BaseSpec::Finite(name, m) => BaseClass::named_finite(name, m),
        }
    }
}

/// Chooses the alphabet: `--alphabet`, then the base, then the first DFA
/// file, then the letters of all inline regexes.
fn resolve_alphabet(c: &Common, base: &BaseSpec, inputs: &[&str], dfas: &[Option<Dfa>]) -> Result<Alphabet> {
    if let Some(a) = &c.alphabet {
        return Alphabet::parse(a);
    }
    if let Some(a) = base.alphabet() {
        return Ok(a.clone());
    }
    if let Some(d) = dfas.iter().flatten().next() {
        return Ok(d.alphabet().clone());
    }
    let mut letters: Vec<char> = inputs.iter().flat_map(|s| regex_letters(s)).collect();
    letters.sort_unstable();
    letters.dedup();
    if letters.is_empty() {
        return Err(Error::InvalidAlphabet("cannot infer an alphabet, pass --alphabet".into()));
    }
    Alphabet::new(letters)
}

struct Loaded {
    alphabet: Alphabet,
    base: BaseClass,
    langs: Vec<Dfa>,
}

fn load(c: &Common, inputs: &[&str]) -> Result<Loaded> {
    let spec = parse_base_spec(&c.base)?;
    let files: Vec<Option<Dfa>> = inputs
        .iter()
        .map(|s| is_dfa_path(s).then(|| parse_dfa(&read_file(s)?)).transpose())
        .collect::<Result<_>>()?;
    let alphabet = resolve_alphabet(c, &spec, inputs, &files)?;
    let mut langs = Vec::new();
    for (text, file) in inputs.iter().zip(files) {
        let d = match file {
            Some(d) => {
                alphabet.ensure_same(d.alphabet())?;
                d
            }
            None => compile(&parse_regex(text, &alphabet)?, &alphabet),
        };
        langs.push(d);
    }
    let base = spec.build(&alphabet);
    Ok(Loaded { alphabet, base, langs })
}

fn engine_options(c: &Common) -> EngineOptions {
    EngineOptions {
        schedule: c.seed.map_or(Schedule::Fifo, Schedule::Shuffled),
        ..EngineOptions::default()
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_member(c: &Common, lang: &str) -> Result<Outcome> {
    let ld = load(c, &[lang])?;
    let syn = syntactic_morphism(&ld.langs[0]);
    let report = stutters(&syn.morphism, &ld.base)?;
    let violation = aperiodicity_violation(&report);
    let member = violation.is_none();
    let alpha = &syn.morphism;
    if c.json {
        let v = json!({
            "command": "member",
            "base": ld.base.name(),
            "member": member,
            "monoid_size": alpha.image().len(),
            "stutters": report.stutters().iter().map(|&s| alpha.name(s)).collect::<Vec<_>>(),
            "violation": violation.as_ref().map(|v| json!({
                "element": alpha.name(v.element),
                "omega_exponent": v.omega.exponent,
                "omega": alpha.name(v.omega.idempotent),
                "omega_plus_one": alpha.name(v.omega.next),
            })),
        });
        return Ok(Outcome::verdict(member, pretty(&v)));
    }
    let mut out = format!(
        "member: {} (base {}, syntactic monoid size {})\n",
        yes_no(member),
        ld.base.name(),
        alpha.image().len()
    );
    if let Some(v) = &violation {
        let _ = writeln!(
            out,
            "stutter {} has {}^ω = {} but {}^(ω+1) = {}",
            alpha.name(v.element),
            alpha.name(v.element),
            alpha.name(v.omega.idempotent),
            alpha.name(v.element),
            alpha.name(v.omega.next)
        );
    }
    if c.trace {
        out.push_str(&stutter_table(alpha, &report, &ld.alphabet));
    }
    Ok(Outcome::verdict(member, out))
}

fn stutter_table(alpha: &MonoidMorphism, report: &crate::stutter::StutterReport, sigma: &Alphabet) -> String {
    let mut out = String::new();
    for &s in alpha.image() {
        let om = alpha.monoid().omega(s);
        let why = match &report.witnesses[s] {
            Some(StutterWitness::Class { class, word }) => {
                format!("stutter (idempotent class {class}, word \"{}\")", sigma.render(word))
            }
            Some(StutterWitness::Oracle) => "stutter (oracle)".to_string(),
            None => "not a stutter".to_string(),
        };
        let eq = if om.is_aperiodic() { "=" } else { "≠" };
        let _ = writeln!(out, "{:>8}  {why}  s^ω {eq} s^(ω+1)", alpha.name(s));
    }
    out
}

fn verdict_json(command: &str, v: &Verdict) -> Value {
    json!({
        "command": command,
        "coverable": v.coverable,
        "verdict": v,
        "separator": v.separator.as_ref().map(render_dfa),
    })
}

fn cmd_cover(c: &Common, command: &str, l1: &str, l2s: &[String]) -> Result<Outcome> {
    let inputs: Vec<&str> = std::iter::once(l1).chain(l2s.iter().map(|s| s.as_str())).collect();
    let mut ld = load(c, &inputs)?;
    let l1 = ld.langs.remove(0);
    let opts = CoverOptions {
        budget: c.budget,
        engine: engine_options(c),
        trace: c.trace,
    };
    let v = decide_cover(
        &CoverInstance {
            l1,
            l2s: ld.langs,
            base: ld.base,
        },
        &opts,
    )?;
    if c.json {
        return Ok(Outcome::verdict(v.coverable, pretty(&verdict_json(command, &v))));
    }
    let label = if command == "separate" { "separable" } else { "coverable" };
    let mut out = format!(
        "{label}: {} (base {}, monoid size {})\n",
        yes_no(v.coverable),
        v.base,
        v.monoid_size
    );
    if let Some(bad) = &v.bad_element {
        let _ = writeln!(out, "bad element: {{{}}}", bad.names.join(", "));
        out.push_str("derivation:\n");
        for l in &bad.derivation {
            let _ = writeln!(out, "  {l}");
        }
    }
    if let Some(h) = &v.separator_hint {
        let _ = writeln!(out, "separator: {h}");
    }
    if c.trace {
        let _ = writeln!(out, "iterations: {}, oracle calls: {}", v.iterations, v.oracle_calls);
        out.push_str("imprint:\n");
        for l in &v.trace {
            let _ = writeln!(out, "  {l}");
        }
    }
    Ok(Outcome::verdict(v.coverable, out))
}

fn cmd_stutters(c: &Common, lang: &str) -> Result<Outcome> {
    let ld = load(c, &[lang])?;
    let syn = syntactic_morphism(&ld.langs[0]);
    let alpha = &syn.morphism;
    let report = stutters(alpha, &ld.base)?;
    if c.trace {
        report.verify(&ld.base)?;
    }
    let aperiodic = aperiodicity_violation(&report).is_none();
    if c.json {
        let rows: Vec<Value> = alpha
            .image()
            .iter()
            .map(|&s| {
                json!({
                    "element": alpha.name(s),
                    "stutter": report.is_stutter(s),
                    "witness": report.witnesses[s],
                    "omega_identity": alpha.monoid().omega(s).is_aperiodic(),
                })
            })
            .collect();
        let v = json!({
            "command": "stutters",
            "base": ld.base.name(),
            "c_aperiodic": aperiodic,
            "elements": rows,
        });
        return Ok(Outcome::verdict(aperiodic, pretty(&v)));
    }
    let mut out = stutter_table(alpha, &report, &ld.alphabet);
    let _ = writeln!(out, "C-aperiodic: {}", yes_no(aperiodic));
    Ok(Outcome::verdict(aperiodic, out))
}

/// The morphism to synthesize from, plus the accepting elements when it is
/// the syntactic morphism of a language.
fn load_morphism(c: &Common, input: &str) -> Result<(MonoidMorphism, Option<Vec<Element>>)> {
    if !is_dfa_path(input) && Path::new(input).is_file() {
        let m = MonoidMorphism::parse(&read_file(input)?)?;
        if let Some(a) = &c.alphabet {
            Alphabet::parse(a)?.ensure_same(m.alphabet())?;
        }
        return Ok((m, None));
    }
    let ld = load(c, &[input])?;
    let syn = syntactic_morphism(&ld.langs[0]);
    let acc = syn.accepting_elements();
    Ok((syn.morphism, Some(acc)))
}

fn parse_element(alpha: &MonoidMorphism, accepting: Option<&[Element]>, text: &str) -> Result<Vec<Element>> {
    let size = alpha.monoid().size();
    let id = |n: &str| -> Result<Vec<Element>> {
        match n.parse::<usize>() {
            Ok(k) if k < size => Ok(vec![k]),
            _ => Err(Error::Format(format!("no element '{text}' in a monoid of size {size}"))),
        }
    };
    match text {
        "accept" => accepting
            .map(|a| a.to_vec())
            .ok_or_else(|| Error::Format("'accept' needs a language input".into())),
        "eps" | "ε" | "" => Ok(vec![alpha.monoid().identity()]),
        t if t.starts_with('#') => id(&t[1..]),
        t if t.chars().all(|ch| ch.is_ascii_digit()) => id(t),
        t => {
            let w = alpha.alphabet().word(t)?;
            Ok(vec![alpha.eval(&w)])
        }
    }
}

fn cmd_synthesize(c: &Common, input: &str, element: &str) -> Result<Outcome> {
    let (alpha, accepting) = load_morphism(c, input)?;
    let spec = parse_base_spec(&c.base)?;
    let base = spec.build(alpha.alphabet());
    let targets = parse_element(&alpha, accepting.as_deref(), element)?;
    let opts = SynthOptions {
        dmax: c.dmax,
        ..SynthOptions::default()
    };
    let syn = synthesize(&alpha, &base, &opts)?;
    let expr = syn.expression_for_set(&targets);
    let sigma = alpha.alphabet();
    let text = expr.display(sigma);
    let names: Vec<String> = targets.iter().map(|&t| alpha.name(t)).collect();
    if c.json {
        let v = json!({
            "command": "synthesize",
            "base": base.name(),
            "elements": names,
            "expression": text,
            "parts": syn.partition.parts.len(),
            "max_delay": syn.max_delay,
            "measures": syn.measures,
            "measure_decreases": syn.measure_decreases(),
        });
        return Ok(Outcome::verdict(true, pretty(&v)));
    }
    let mut out = format!("element: {}\nexpression: {text}\n", names.join(", "));
    let _ = writeln!(
        out,
        "parts: {}, max delay: {}, recursive calls: {}",
        syn.partition.parts.len(),
        syn.max_delay,
        syn.measures.len()
    );
    if c.trace {
        out.push_str("measures:\n");
        for m in &syn.measures {
            let _ = writeln!(out, "  {m}");
        }
        out.push_str("partition of A*:\n");
        for p in &syn.partition.parts {
            let shown = p.expr.display(sigma);
            if shown.chars().count() <= 160 {
                let _ = writeln!(out, "  {} -> {shown}", alpha.name(p.value));
            } else {
                let _ = writeln!(out, "  {} -> ({} nodes)", alpha.name(p.value), p.expr.size());
            }
        }
    }
    Ok(Outcome::verdict(true, out))
}

fn cmd_check_sd(c: &Common, expr: &str) -> Result<Outcome> {
    let text = if Path::new(expr).is_file() {
        read_file(expr)?
    } else {
        expr.to_string()
    };
    let text = text.trim();
    let spec = parse_base_spec(&c.base)?;
    let alphabet = match (&c.alphabet, spec.alphabet()) {
        (Some(a), _) => Alphabet::parse(a)?,
        (None, Some(a)) => a.clone(),
        (None, None) => {
            let mut letters: Vec<char> = text.chars().filter(|ch| ch.is_ascii_lowercase()).collect();
            letters.sort_unstable();
            letters.dedup();
            if letters.is_empty() {
                return Err(Error::InvalidAlphabet("cannot infer an alphabet, pass --alphabet".into()));
            }
            Alphabet::new(letters)?
        }
    };
    let base = spec.build(&alphabet);
    let fb = base.as_finite().ok_or_else(|| {
        Error::UnsupportedBase(format!("check-sd needs a finite base, got {}", base.name()))
    })?;
    let e = parse_sd(text, &alphabet)?;
    let result = validate(&e, &alphabet, Some(fb), c.dmax);
    let (ok, detail) = match &result {
        Ok(_) => (true, None),
        Err(Error::Validation { rule, detail }) => (false, Some((*rule, detail.clone()))),
        Err(other) => return Err(other.clone()),
    };
    if c.json {
        let v = json!({
            "command": "check-sd",
            "valid": ok,
            "expression": e.display(&alphabet),
            "states": result.as_ref().ok().map(|d| d.num_states()),
            "violation": detail.as_ref().map(|(r, d)| json!({"rule": r, "detail": d})),
        });
        return Ok(Outcome::verdict(ok, pretty(&v)));
    }
    let mut out = String::new();
    match (&result, &detail) {
        (Ok(d), _) => {
            let _ = writeln!(out, "valid: {} ({} states)", e.display(&alphabet), d.num_states());
            if c.trace {
                let sf = to_sf(&e, &alphabet, Some(fb))?;
                let _ = writeln!(out, "star-free form: {} nodes", sf.size());
                if sf.size() <= 40 {
                    let _ = writeln!(out, "  {}", sf.display(&alphabet));
                }
            }
        }
        (Err(_), Some((rule, d))) => {
            let _ = writeln!(out, "invalid: {rule} violated: {d}");
        }
        (Err(_), None) => unreachable!(),
    }
    Ok(Outcome::verdict(ok, out))
}

fn cmd_oracle(c: &Common, check: &OracleCommand) -> Result<Outcome> {
    match check {
        OracleCommand::Aperiodic { lang } => {
            let ld = load(c, &[lang])?;
            let syn = syntactic_morphism(&ld.langs[0]);
            let m = syn.morphism.monoid();
            let ok = brute_aperiodic(m);
            Ok(Outcome::verdict(
                ok,
                format!("aperiodic: {} (monoid size {})\n", yes_no(ok), m.size()),
            ))
        }
        OracleCommand::ModEps { lang, mmax } => {
            let ld = load(c, &[lang])?;
            let l = &ld.langs[0];
            let lasso = LengthLasso::of(l);
            let mmax = mmax.unwrap_or(lasso.tail + 2 * lasso.cycle);
            let brute = brute_mod_eps_separable(l, mmax)?;
            let engine = mod_eps_separable(l);
            let mut out = format!("separable from {{ε}} by a length modulus ≤ {mmax}: {}\n", yes_no(brute));
            if brute != engine {
                let _ = writeln!(out, "note: the decision procedure says {}", yes_no(engine));
            }
            Ok(Outcome::verdict(brute, out))
        }
        OracleCommand::Separator { k, l1, l2 } => {
            let ld = load(c, &[k, l1, l2])?;
            let ok = verify_separator(&ld.langs[0], &ld.langs[1], &ld.langs[2])?;
            Ok(Outcome::verdict(ok, format!("separates: {}\n", yes_no(ok))))
        }
        OracleCommand::Corpus { count, states } => {
            let sigma = match &c.alphabet {
                Some(a) => Alphabet::parse(a)?,
                None => Alphabet::parse("ab")?,
            };
            let triv = BaseClass::triv(&sigma);
            let mut corpus = Corpus::new(sigma, *states, c.seed.unwrap_or(0));
            let mut out = String::new();
            let mut agree = true;
            for (i, d) in corpus.dfas(*count).into_iter().enumerate() {
                let syn = syntactic_morphism(&d);
                let brute = brute_aperiodic(syn.morphism.monoid());
                let engine = membership(&d, &triv)?;
                agree &= brute == engine;
                let _ = writeln!(
                    out,
                    "{i:>4}  states {}  monoid {:>3}  aperiodic {:<3}  member(triv) {:<3}{}",
                    d.num_states(),
                    syn.morphism.monoid().size(),
                    yes_no(brute),
                    yes_no(engine),
                    if brute == engine { "" } else { "  DISAGREE" }
                );
                if c.trace {
                    for line in render_dfa(&d).lines() {
                        let _ = writeln!(out, "      {line}");
                    }
                }
            }
            let _ = writeln!(out, "agreement: {}", yes_no(agree));
            Ok(Outcome::verdict(agree, out))
        }
    }
}
