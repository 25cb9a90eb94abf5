//! Command implementations. Each returns a [`Report`]; printing and exit codes
//! are left to the caller.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mbs_core::analyze::{check_family, fixture_suite};
use mbs_core::derivation::{
    derive_auto, derive_scripted, derive_within, named_subcomplex, verify, AutoConfig, AutoOutcome, Derivation,
    NamedComplex, Script,
};
use mbs_core::generators::{instantiate, list_generators, Family, GeneratorId};
use mbs_core::lifting::{
    classify_fibration, has_rlp, solve_lift, FibrationClass, LiftSquare, Outcome, DEFAULT_BUDGET,
};
use mbs_core::pushout_product::{verify_instance, verify_table, CaseStatus, Manifest, MANIFEST_VERSION};
use mbs_core::DecoratedMap;
use serde_json::{json, Value};

use crate::cert::Certificate;
use crate::doc::{Document, Loaded};
use crate::InputError;

#[derive(Parser, Debug)]
#[command(name = "mbs", version, about = "Finite checks for marked-biscaled simplicial sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Dimension cap for constructions and searches.
    #[arg(long, global = true, default_value_t = 3)]
    pub cap: usize,
    /// Node budget per search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Reject documents that need decoration repairs.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Where to write an emitted document or certificate.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Instantiate a generator as a document, or list generator ids.
    Gen {
        /// Generator id such as `A1:3:1` or `E:J`.
        id: Option<String>,
        /// List the ids of a family (or `all`) up to the cap.
        #[arg(long)]
        list: Option<String>,
    },
    /// Cell census and decorations of every object in a document.
    Info { doc: PathBuf },
    /// Solve one lifting square given by four maps of a document.
    Lift {
        doc: PathBuf,
        #[arg(long, default_value = "j")]
        j: String,
        #[arg(long, default_value = "p")]
        p: String,
        #[arg(long, default_value = "top")]
        top: String,
        #[arg(long, default_value = "bottom")]
        bottom: String,
    },
    /// Right lifting property of a map against a class or a single generator.
    Rlp {
        doc: PathBuf,
        #[arg(long, default_value = "p")]
        map: String,
        /// `MB`, `weak-S` or `trivial`.
        #[arg(long, default_value = "MB")]
        class: String,
        /// Check a single generator instead of the class.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Find a derivation and emit it as a certificate.
    Derive {
        /// Document holding the inclusion to derive (automatic search).
        doc: Option<PathBuf>,
        #[arg(long, default_value = "j")]
        map: String,
        /// Scripted filtration: nightmare, dual-nightmare, prism, indI, indII.
        #[arg(long)]
        scripted: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Index list for indI / indII, comma separated.
        #[arg(long, value_delimiter = ',')]
        indices: Vec<usize>,
        /// A named subcomplex inclusion such as `R(3,1)`.
        #[arg(long)]
        named: Option<String>,
    },
    /// Check a derivation certificate.
    Verify { cert: PathBuf },
    /// Pushout-product of one cofibration and one anodyne generator, or the whole table.
    Pp {
        cof: Option<String>,
        ano: Option<String>,
        #[arg(long)]
        table: bool,
        /// `manifest.v1` for the built-in manifest, or a manifest file.
        #[arg(long, default_value = MANIFEST_VERSION)]
        max_params: String,
    },
    /// Cartesian-fibration profile of a map, or of the built-in fixtures.
    Analyze {
        doc: Option<PathBuf>,
        #[arg(long, default_value = "p")]
        map: String,
        /// Run one built-in fixture by name, or `all`.
        #[arg(long)]
        fixture: Option<String>,
    },
}

/// What a command produced.
pub struct Report {
    pub outcome: Outcome,
    pub machine: Value,
    pub text: String,
    /// File contents to write to `--out`.
    pub emit: Option<String>,
    pub warnings: Vec<String>,
}

impl Report {
    fn new(outcome: Outcome, machine: Value, text: String) -> Report {
        Report {
            outcome,
            machine,
            text,
            emit: None,
            warnings: Vec::new(),
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, g: &Global) -> Result<Loaded, InputError> {
    Document::parse(&read(path)?)?.load(g.strict)
}

fn map<'a>(l: &'a Loaded, name: &str) -> Result<&'a DecoratedMap, InputError> {
    l.maps
        .get(name)
        .ok_or_else(|| InputError(format!("document has no map `{name}`")))
}

pub fn run(cli: &Cli) -> Result<Report, InputError> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen { id, list } => gen(g, id.as_deref(), list.as_deref()),
        Command::Info { doc } => info(g, doc),
        Command::Lift { doc, j, p, top, bottom } => lift(g, doc, [j, p, top, bottom]),
        Command::Rlp {
            doc,
            map: m,
            class,
            generator,
        } => rlp(g, doc, m, class, generator.as_deref()),
        Command::Derive {
            doc,
            map: m,
            scripted,
            n,
            m: mm,
            indices,
            named,
        } => derive(g, doc.as_deref(), m, scripted.as_deref(), *n, *mm, indices, named.as_deref()),
        Command::Verify { cert } => verify_cert(cert),
        Command::Pp {
            cof,
            ano,
            table,
            max_params,
        } => pp(g, cof.as_deref(), ano.as_deref(), *table, max_params),
        Command::Analyze { doc, map: m, fixture } => analyze(g, doc.as_deref(), m, fixture.as_deref()),
    }
}

fn gen(g: &Global, id: Option<&str>, list: Option<&str>) -> Result<Report, InputError> {
    if let Some(fam) = list {
        let fams: Vec<Family> = if fam == "all" {
            Family::ALL.to_vec()
        } else {
            vec![fam.parse().map_err(|_| InputError(format!("unknown family `{fam}`")))?]
        };
        let ids: Vec<String> = fams
            .into_iter()
            .flat_map(|f| list_generators(f, g.cap))
            .map(|i| i.to_string())
            .collect();
        let text = ids.join("\n") + "\n";
        return Ok(Report::new(Outcome::Pass, json!({ "generators": ids }), text));
    }
    let id: GeneratorId = id
        .ok_or_else(|| InputError("give a generator id or --list".into()))?
        .parse()?;
    let doc = generator_document(&id, g.cap)?;
    let text = doc.emit();
    let mut r = Report::new(Outcome::Pass, json!({ "generator": id.to_string() }), text.clone());
    r.emit = Some(text);
    Ok(r)
}

fn info(g: &Global, path: &Path) -> Result<Report, InputError> {
    let l = load(path, g)?;
    let mut text = String::new();
    let mut objects = serde_json::Map::new();
    for (name, x) in &l.objects {
        let census = x.under().census();
        let _ = writeln!(
            text,
            "{name}: cells {:?}, marked {}, thin {}, lean {}",
            census,
            x.marked().len(),
            x.thin().len(),
            x.lean().len()
        );
        objects.insert(
            name.clone(),
            json!({ "census": census, "marked": x.marked().len(), "thin": x.thin().len(), "lean": x.lean().len() }),
        );
    }
    let mut maps = serde_json::Map::new();
    for (name, f) in &l.maps {
        let _ = writeln!(text, "{name}: mono {}", f.is_mono());
        maps.insert(name.clone(), json!({ "mono": f.is_mono() }));
    }
    let mut r = Report::new(
        Outcome::Pass,
        json!({ "cap": l.cap, "objects": objects, "maps": maps }),
        text,
    );
    r.warnings = l.warnings;
    Ok(r)
}

fn lift(g: &Global, path: &Path, names: [&String; 4]) -> Result<Report, InputError> {
    let l = load(path, g)?;
    let [j, p, top, bottom] = names.map(|n| map(&l, n).cloned());
    let sq = LiftSquare::new(j?, p?, top?, bottom?)?;
    let r = solve_lift(&sq, g.budget);
    let outcome = Outcome::from_verdicts([r.verdict]);
    let witness = r.witness.as_ref().map(|w| {
        let mut d = Document::new(l.cap, None);
        d.add_map("witness", "B", "X", w);
        serde_json::to_value(&d.maps["witness"].assign).expect("serializes")
    });
    let text = format!("{} ({} nodes)\n", r.verdict, r.stats.nodes);
    let mut rep = Report::new(
        outcome,
        json!({ "verdict": r.verdict, "stats": r.stats, "witness": witness }),
        text,
    );
    rep.warnings = l.warnings;
    Ok(rep)
}

fn rlp(g: &Global, path: &Path, name: &str, class: &str, generator: Option<&str>) -> Result<Report, InputError> {
    let l = load(path, g)?;
    let p = map(&l, name)?;
    let mut rep = if let Some(id) = generator {
        let id: GeneratorId = id.parse()?;
        let gen = instantiate(&id, g.cap.max(id.dimension()))?;
        let r = has_rlp(p, &gen, g.budget);
        let text = format!("{}: {} ({} squares)\n", r.generator, r.verdict, r.squares);
        Report::new(Outcome::from_verdicts([r.verdict]), serde_json::to_value(&r).expect("serializes"), text)
    } else {
        let class: FibrationClass = class.parse()?;
        let r = classify_fibration(p, class, g.cap, g.budget)?;
        let mut text = format!("{class} fibration up to cap {}: {}\n", g.cap, r.outcome);
        for f in r.failures() {
            let _ = writeln!(text, "  {}: {}", f.generator, f.verdict);
            if let Some(sq) = &f.failing {
                let _ = writeln!(text, "    top {:?}", sq.top);
            }
        }
        Report::new(r.outcome, serde_json::to_value(&r).expect("serializes"), text)
    };
    rep.warnings = l.warnings;
    Ok(rep)
}

fn derivation_report(d: &Derivation, provenance: String) -> Report {
    let v = verify(d);
    let outcome = if v.ok { Outcome::Pass } else { Outcome::Fail };
    let mut text = format!(
        "derivation with {} steps ({} attaching): {}\n",
        d.steps.len(),
        d.attaching_steps(),
        if v.ok { "verified" } else { "rejected" }
    );
    for (rule, k) in d.rule_counts() {
        let _ = writeln!(text, "  {rule} x{k}");
    }
    let cert = Certificate::from_derivation(d, Some(provenance));
    let mut r = Report::new(
        outcome,
        json!({ "verify": v, "rules": d.rule_counts(), "groups": d.groups().len() }),
        text,
    );
    r.emit = Some(cert.emit());
    r
}

fn auto_report(out: AutoOutcome, provenance: String) -> Report {
    match &out.derivation {
        Some(d) => derivation_report(d, provenance),
        None => {
            let outcome = if out.exhausted { Outcome::Inconclusive } else { Outcome::Fail };
            let text = format!(
                "no derivation ({}; {} nodes)\n",
                if out.exhausted { "budget exhausted" } else { "search space exhausted" },
                out.stats.nodes
            );
            Report::new(outcome, json!({ "found": false, "exhausted": out.exhausted, "stats": out.stats }), text)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn derive(
    g: &Global,
    doc: Option<&Path>,
    name: &str,
    scripted: Option<&str>,
    n: Option<usize>,
    m: Option<usize>,
    indices: &[usize],
    named: Option<&str>,
) -> Result<Report, InputError> {
    if let Some(s) = scripted {
        let script: Script = s.parse()?;
        let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| InputError(format!("{script} needs --{flag}")));
        let params = match script {
            Script::Nightmare | Script::DualNightmare => vec![need(n, "n")?, need(m, "m")?],
            Script::Prism => vec![need(n, "n")?],
            Script::IndI | Script::IndII => std::iter::once(need(m, "m")?).chain(indices.iter().copied()).collect(),
        };
        let d = derive_scripted(script, &params)?;
        return Ok(derivation_report(&d, format!("scripted {script} {params:?}")));
    }
    let config = AutoConfig {
        budget: g.budget,
        ..AutoConfig::default()
    };
    if let Some(s) = named {
        let nc: NamedComplex = s.parse()?;
        let sub = named_subcomplex(&nc, g.cap)?;
        let out = derive_within(sub.ambient.clone(), sub.stage(), &config)?;
        return Ok(auto_report(out, format!("named {nc}")));
    }
    let path = doc.ok_or_else(|| InputError("give a document, --scripted or --named".into()))?;
    let l = load(path, g)?;
    let j = map(&l, name)?;
    let mut r = auto_report(derive_auto(j, g.budget)?, format!("auto {}", path.display()));
    r.warnings = l.warnings;
    Ok(r)
}

fn verify_cert(path: &Path) -> Result<Report, InputError> {
    let cert = Certificate::parse(&read(path)?)?;
    let d = cert.to_derivation()?;
    let v = verify(&d);
    let outcome = if v.ok { Outcome::Pass } else { Outcome::Fail };
    let text = match (&v.failing_step, &v.reason) {
        (None, _) => format!("verified: {} steps\n", v.steps),
        (Some(i), reason) => format!("rejected at step {i}: {}\n", reason.clone().unwrap_or_default()),
    };
    Ok(Report::new(outcome, serde_json::to_value(&v).expect("serializes"), text))
}

fn status_outcome(s: CaseStatus, note: Option<&str>) -> Outcome {
    match s {
        CaseStatus::Isomorphism | CaseStatus::Verified => Outcome::Pass,
        CaseStatus::Unverified if note.is_some_and(|n| n.contains("budget")) => Outcome::Inconclusive,
        CaseStatus::Unverified => Outcome::Fail,
    }
}

fn manifest(spec: &str) -> Result<Manifest, InputError> {
    if spec == MANIFEST_VERSION {
        Ok(Manifest::builtin())
    } else {
        Ok(Manifest::parse(&read(Path::new(spec))?)?)
    }
}

fn pp(g: &Global, cof: Option<&str>, ano: Option<&str>, table: bool, max_params: &str) -> Result<Report, InputError> {
    if table {
        let m = manifest(max_params)?;
        let cases = verify_table(&m, g.budget)?;
        let mut text = String::new();
        let mut outcome = Outcome::Pass;
        for c in &cases {
            let _ = write!(text, "{:<4} x {:<5} {}", c.cof.as_str(), c.ano.as_str(), c.status);
            let strategies: std::collections::BTreeSet<String> = c
                .instances
                .iter()
                .map(|i| serde_json::to_value(i.strategy).expect("serializes").as_str().unwrap_or("").to_string())
                .collect();
            let _ = writeln!(text, "  [{}]", strategies.into_iter().collect::<Vec<_>>().join(", "));
            for i in &c.instances {
                match status_outcome(i.status, i.note.as_deref()) {
                    Outcome::Fail => outcome = Outcome::Fail,
                    Outcome::Inconclusive if outcome == Outcome::Pass => outcome = Outcome::Inconclusive,
                    _ => {}
                }
            }
        }
        let unverified = cases.iter().filter(|c| c.status == CaseStatus::Unverified).count();
        let _ = writeln!(text, "{} cases, {} unverified: {}", cases.len(), unverified, outcome);
        return Ok(Report::new(outcome, json!({ "cases": cases }), text));
    }
    let (Some(cof), Some(ano)) = (cof, ano) else {
        return Err(InputError("give a cofibration and an anodyne id, or --table".into()));
    };
    let (r, d) = verify_instance(&cof.parse()?, &ano.parse()?, g.budget)?;
    let outcome = status_outcome(r.status, r.note.as_deref());
    let mut text = format!("{cof} x {ano}: {}\n", r.status);
    for (rule, k) in &r.rules {
        let _ = writeln!(text, "  {rule} x{k}");
    }
    if let Some(n) = &r.note {
        let _ = writeln!(text, "  note: {n}");
    }
    let mut rep = Report::new(outcome, serde_json::to_value(&r).expect("serializes"), text);
    rep.emit = d.map(|d| Certificate::from_derivation(&d, Some(format!("pushout-product {cof} x {ano}"))).emit());
    Ok(rep)
}

fn analyze(g: &Global, doc: Option<&Path>, name: &str, fixture: Option<&str>) -> Result<Report, InputError> {
    let mut maps: Vec<(String, DecoratedMap)> = Vec::new();
    let mut warnings = Vec::new();
    if let Some(f) = fixture {
        for fx in fixture_suite(g.cap)? {
            if f == "all" || fx.name == f {
                maps.push((fx.name, fx.p));
            }
        }
        if maps.is_empty() {
            return Err(InputError(format!("no fixture named `{f}`")));
        }
    } else {
        let path = doc.ok_or_else(|| InputError("give a document or --fixture".into()))?;
        let l = load(path, g)?;
        maps.push((name.to_string(), map(&l, name)?.clone()));
        warnings = l.warnings;
    }
    let mut text = String::new();
    let mut out = Vec::new();
    let mut outcome = Outcome::Pass;
    for (name, p) in &maps {
        let prof = check_family(p, g.cap, g.budget)?;
        let _ = writeln!(text, "{name}: {}", prof.outcome);
        for c in &prof.conditions {
            let _ = writeln!(text, "  {:<26} {}", c.name, c.outcome);
            for e in &c.evidence {
                let _ = writeln!(text, "    {e}");
            }
        }
        let f = prof.flags;
        let _ = writeln!(
            text,
            "  flags: locally-fibred {} functorial {} O2 {} O2C {}",
            f.locally_fibred, f.functorial, f.o2, f.o2c
        );
        if maps.len() == 1 {
            outcome = prof.outcome;
        }
        out.push(json!({ "name": name, "profile": prof }));
    }
    let mut r = Report::new(outcome, json!({ "profiles": out }), text);
    r.warnings = warnings;
    Ok(r)
}

/// Prints a report and returns the exit code.
pub fn emit(cli: &Cli, report: Result<Report, InputError>) -> i32 {
    let g = &cli.global;
    match report {
        Err(e) => {
            if g.format == Format::Machine {
                println!("{}", json!({ "outcome": "input-error", "error": e.0 }));
            } else {
                eprintln!("error: {e}");
            }
            crate::EXIT_INPUT
        }
        Ok(r) => {
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            if let (Some(path), Some(body)) = (&g.out, &r.emit) {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return crate::EXIT_INPUT;
                }
            }
            let gen_to_stdout = matches!(cli.command, Command::Gen { id: Some(_), .. }) && g.out.is_some();
            match g.format {
                Format::Machine => {
                    let mut v = r.machine;
                    if let Value::Object(m) = &mut v {
                        m.insert("outcome".into(), json!(r.outcome));
                        m.insert("warnings".into(), json!(r.warnings));
                    }
                    println!("{v}");
                }
                Format::Text if gen_to_stdout => println!("wrote {}", g.out.as_ref().unwrap().display()),
                Format::Text => {
                    print!("{}", r.text);
                    if !matches!(cli.command, Command::Gen { .. }) {
                        println!("{}", r.outcome);
                    }
                }
            }
            r.outcome.exit_code()
        }
    }
}

/// The document of a generator: objects `source`, `target` and the map `map`.
pub fn generator_document(id: &GeneratorId, cap: usize) -> Result<Document, InputError> {
    let gen = instantiate(id, cap.max(id.dimension()))?;
    let mut doc = Document::new(gen.source().under().cap(), Some(format!("generator {id}")));
    doc.add_object("source", gen.source());
    doc.add_object("target", gen.target());
    doc.add_map("map", "source", "target", &gen.map);
    Ok(doc)
}
