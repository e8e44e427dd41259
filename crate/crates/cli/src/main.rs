use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use xmodkit_core::action::{semidirect_product, validate_derived_action};
use xmodkit_core::homotopy::{
    are_homotopic, concat_derivations, enumerate_derivations, validate_derivation, Derivation,
};
use xmodkit_core::instances::{transport_derivation, transport_morphism, transport_xmod, KindFunctor};
use xmodkit_core::io::{
    load_document, save_document, CarrierDoc, DerivationDoc, DerivationListDoc, Document,
    SimplicialDoc, XmodDoc, XmodMorphismDoc,
};
use xmodkit_core::omega::validate_omega_group;
use xmodkit_core::simplicial::{
    moore_complex, validate_simplicial, validate_simplicial_homotopy, validate_simplicial_map,
};
use xmodkit_core::transfer::{nerve, transfer_homotopy, x1_object};
use xmodkit_core::xmod::{validate_crossed_module, validate_xmod_morphism};
use xmodkit_core::{Caps, Error, ValidationReport, Violation};

/// Finite crossed module toolkit: validation, products, homotopies, and the
/// passage between crossed modules and truncated simplicial objects.
#[derive(Parser)]
#[command(name = "xmodkit", version, max_term_width = 100)]
struct Cli {
    /// Largest carrier a construction may enumerate (default 4096, or
    /// XMODKIT_CAP).
    #[arg(long, global = true)]
    enum_cap: Option<u64>,

    /// Largest brute-force search space (default 65536, or XMODKIT_CAP).
    #[arg(long, global = true)]
    brute_cap: Option<u64>,

    /// Write the resulting document to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output style: human-readable lines or one JSON run report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Validate any document against the laws of its kind.
    Check { file: PathBuf },
    /// Build the semidirect product carrier of an action document.
    Semidirect { file: PathBuf },
    /// Search for a derivation connecting two parallel morphism documents.
    HomotopyFind { first: PathBuf, second: PathBuf },
    /// Concatenate two derivation documents end to end.
    HomotopyCompose { first: PathBuf, second: PathBuf },
    /// List every derivation whose source is the given morphism document.
    EnumerateDerivations { file: PathBuf },
    /// Extract the bottom crossed module of a truncated simplicial object.
    X1 { file: PathBuf },
    /// Expand a crossed module document into a truncated simplicial object.
    Nerve {
        file: PathBuf,
        /// Truncation level of the result (1 to 4).
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Push a simplicial homotopy down to a derivation between the bottom
    /// crossed modules.
    Transfer { file: PathBuf },
    /// Print the Moore complex of a truncated simplicial object.
    Moore { file: PathBuf },
    /// Change the algebra kind of a crossed module, morphism, or derivation
    /// document.
    InstanceTransport {
        file: PathBuf,
        #[arg(long, value_enum)]
        functor: Functor,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Functor {
    /// Associative to Lie via the commutator (odd characteristic).
    Liezation,
    /// Dialgebra to Leibniz via `x ⊣ y − y ⊢ x`.
    DialgToLeibniz,
}

impl From<Functor> for KindFunctor {
    fn from(f: Functor) -> Self {
        match f {
            Functor::Liezation => KindFunctor::Liezation,
            Functor::DialgToLeibniz => KindFunctor::DialgebraToLeibniz,
        }
    }
}

/// Everything one invocation did, for the structured output mode.
#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Vec<String>,
    ok: bool,
    checks: usize,
    violations: Vec<Violation>,
    notes: Vec<String>,
    outputs: Vec<String>,
}

struct Outcome {
    exit: u8,
    report: RunReport,
    lines: Vec<String>,
}

struct Ctx {
    caps: Caps,
    out: Option<PathBuf>,
    report: RunReport,
    lines: Vec<String>,
}

impl Ctx {
    fn new(command: &str, inputs: &[&Path], caps: Caps, out: Option<PathBuf>) -> Self {
        Ctx {
            caps,
            out,
            report: RunReport {
                command: command.to_string(),
                inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
                ok: true,
                checks: 0,
                violations: Vec::new(),
                notes: Vec::new(),
                outputs: Vec::new(),
            },
            lines: Vec::new(),
        }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn note(&mut self, line: impl Into<String>) {
        let line = line.into();
        self.lines.push(format!("note: {}", line));
        self.report.notes.push(line);
    }

    /// Folds a validation report in: one PASS/FAIL line per law family plus
    /// any notes, and the tallies for the run report.
    fn absorb(&mut self, r: &ValidationReport) {
        self.report.checks += r.checks;
        if !r.violations.is_empty() {
            self.report.ok = false;
        }
        for law in &r.laws {
            let broken = r.violations.iter().find(|v| &v.law == law);
            match broken {
                None => self.lines.push(format!("PASS {}", law)),
                Some(v) => self.lines.push(format!(
                    "FAIL {} at {:?}: {} != {}",
                    law, v.assignment, v.lhs, v.rhs
                )),
            }
        }
        for n in &r.notes {
            self.note(n.clone());
        }
        self.report.violations.extend(r.violations.iter().cloned());
    }

    /// Final verdict line in the style every test greps for.
    fn verdict(&mut self) {
        if self.report.ok {
            self.say(format!("ALL CHECKS PASS ({} checks)", self.report.checks));
        } else {
            self.say(format!(
                "FAILED: {} violations ({} checks)",
                self.report.violations.len(),
                self.report.checks
            ));
        }
    }

    /// Writes the produced document if `--out` was given.
    fn emit(&mut self, doc: &Document) -> Result<(), Error> {
        match self.out.clone() {
            Some(path) => {
                save_document(&path, doc)?;
                self.report.outputs.push(path.display().to_string());
                self.say(format!("WROTE {}", path.display()));
            }
            None => self.say("NO OUTPUT (pass --out to save the result)"),
        }
        Ok(())
    }

    fn finish(mut self) -> Outcome {
        Outcome {
            exit: if self.report.ok { 0 } else { 1 },
            report: self.report,
            lines: std::mem::take(&mut self.lines),
        }
    }
}

fn resolve_caps(cli: &Cli) -> Result<Caps, Error> {
    let mut caps = Caps::default();
    if let Ok(raw) = std::env::var("XMODKIT_CAP") {
        let v: u64 = raw.parse().map_err(|_| {
            Error::InvalidInput(format!("XMODKIT_CAP must be a number, got `{}`", raw))
        })?;
        caps.enum_cap = v;
        caps.brute_cap = v;
    }
    if let Some(v) = cli.enum_cap {
        caps.enum_cap = v;
    }
    if let Some(v) = cli.brute_cap {
        caps.brute_cap = v;
    }
    Ok(caps)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match resolve_caps(&cli) {
        Ok(c) => c,
        Err(e) => return bail(&cli, e),
    };
    match execute(&cli, caps) {
        Ok(outcome) => {
            match cli.format {
                Format::Text => {
                    for line in &outcome.lines {
                        println!("{}", line);
                    }
                }
                Format::Structured => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&outcome.report)
                            .expect("run reports always serialize")
                    );
                }
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => bail(&cli, e),
    }
}

/// Input, usage, and internal failures all end the run with exit code 2.
fn bail(cli: &Cli, e: Error) -> ExitCode {
    match cli.format {
        Format::Text => eprintln!("error: {}", e),
        Format::Structured => {
            let report = RunReport {
                command: String::new(),
                inputs: Vec::new(),
                ok: false,
                checks: 0,
                violations: Vec::new(),
                notes: vec![format!("error: {}", e)],
                outputs: Vec::new(),
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("run reports always serialize")
            );
        }
    }
    ExitCode::from(2)
}

fn execute(cli: &Cli, caps: Caps) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Check { file } => cmd_check(cli, caps, file),
        Command::Semidirect { file } => cmd_semidirect(cli, caps, file),
        Command::HomotopyFind { first, second } => cmd_homotopy_find(cli, caps, first, second),
        Command::HomotopyCompose { first, second } => {
            cmd_homotopy_compose(cli, caps, first, second)
        }
        Command::EnumerateDerivations { file } => cmd_enumerate(cli, caps, file),
        Command::X1 { file } => cmd_x1(cli, caps, file),
        Command::Nerve { file, depth } => cmd_nerve(cli, caps, file, *depth),
        Command::Transfer { file } => cmd_transfer(cli, caps, file),
        Command::Moore { file } => cmd_moore(cli, caps, file),
        Command::InstanceTransport { file, functor } => {
            cmd_transport(cli, caps, file, (*functor).into())
        }
    }
}

fn ctx_for(cli: &Cli, command: &str, inputs: &[&Path], caps: Caps) -> Ctx {
    Ctx::new(command, inputs, caps, cli.out.clone())
}

fn cmd_check(cli: &Cli, caps: Caps, file: &Path) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "check", &[file], caps);
    let doc = load_document(file)?;
    let original = doc.clone();
    ctx.say(format!("checking {} document", doc.kind_name()));
    match doc {
        Document::OmegaGroup(d) => {
            let g = d.into_core()?;
            let r = validate_omega_group(&g, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::Action(d) => {
            let a = d.into_core()?;
            let r = validate_derived_action(&a, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::Xmod(d) => {
            let xm = d.into_core()?;
            let r = validate_derived_action(&xm.action, &ctx.caps)?;
            ctx.absorb(&r);
            let r = validate_crossed_module(&xm, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::XmodMorphism(d) => {
            let m = d.into_core()?;
            let r = validate_xmod_morphism(&m, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::Derivation(d) => {
            let der = d.into_core()?;
            let r = validate_xmod_morphism(&der.morphism, &ctx.caps)?;
            ctx.absorb(&r);
            let r = validate_derivation(&der, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::DerivationList(d) => {
            let m = d.morphism.into_core()?;
            let r = validate_xmod_morphism(&m, &ctx.caps)?;
            ctx.absorb(&r);
            for (i, s) in d.derivations.into_iter().enumerate() {
                let der = Derivation::new(m.clone(), s)?;
                let r = validate_derivation(&der, &ctx.caps)?;
                ctx.say(format!("derivation {}:", i));
                ctx.absorb(&r);
            }
        }
        Document::Simplicial(d) => {
            let x = d.into_core()?;
            let r = validate_simplicial(&x, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::SimplicialMap(d) => {
            let m = d.into_core()?;
            let r = validate_simplicial_map(&m, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::SimplicialHomotopy(d) => {
            let h = d.into_core()?;
            let r = validate_simplicial_homotopy(&h, &ctx.caps)?;
            ctx.absorb(&r);
        }
        Document::Report(_) => {
            return Err(Error::InvalidInput(
                "a report document has nothing to check".into(),
            ))
        }
    }
    ctx.verdict();
    // With --out, a passing check rewrites the document in canonical form.
    if ctx.report.ok && ctx.out.is_some() {
        ctx.emit(&original)?;
    }
    Ok(ctx.finish())
}

fn cmd_semidirect(cli: &Cli, caps: Caps, file: &Path) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "semidirect", &[file], caps);
    let doc = load_document(file)?;
    let action = match doc {
        Document::Action(d) => d.into_core()?,
        other => {
            return Err(Error::InvalidInput(format!(
                "semidirect needs an action document, got {}",
                other.kind_name()
            )))
        }
    };
    let r = validate_derived_action(&action, &ctx.caps)?;
    ctx.absorb(&r);
    if !ctx.report.ok {
        ctx.verdict();
        return Ok(ctx.finish());
    }
    let product = semidirect_product(&action, &ctx.caps)?;
    ctx.say(format!(
        "semidirect carrier {} has {} elements",
        product.name,
        product.size()
    ));
    ctx.emit(&Document::OmegaGroup(CarrierDoc::from_core(&product)))?;
    ctx.verdict();
    Ok(ctx.finish())
}

fn cmd_homotopy_find(
    cli: &Cli,
    caps: Caps,
    first: &Path,
    second: &Path,
) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "homotopy-find", &[first, second], caps);
    let f = load_morphism(first)?;
    let g = load_morphism(second)?;
    for (name, m) in [("first", &f), ("second", &g)] {
        let r = validate_xmod_morphism(m, &ctx.caps)?;
        if !r.ok() {
            ctx.say(format!("{} morphism is not valid:", name));
            ctx.absorb(&r);
            ctx.verdict();
            return Ok(ctx.finish());
        }
        ctx.report.checks += r.checks;
    }
    match are_homotopic(&f, &g, &ctx.caps)? {
        Some(d) => {
            ctx.say(format!("derivation s = {:?}", d.s));
            ctx.emit(&Document::Derivation(DerivationDoc::from_core(&d)))?;
            ctx.verdict();
        }
        None => {
            ctx.report.ok = false;
            ctx.say("NO HOMOTOPY between these morphisms");
        }
    }
    Ok(ctx.finish())
}

fn cmd_homotopy_compose(
    cli: &Cli,
    caps: Caps,
    first: &Path,
    second: &Path,
) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "homotopy-compose", &[first, second], caps);
    let d1 = load_derivation(first)?;
    let d2 = load_derivation(second)?;
    let composed = concat_derivations(&d1, &d2, &ctx.caps)?;
    ctx.say(format!("composed derivation s = {:?}", composed.s));
    ctx.emit(&Document::Derivation(DerivationDoc::from_core(&composed)))?;
    ctx.verdict();
    Ok(ctx.finish())
}

fn cmd_enumerate(cli: &Cli, caps: Caps, file: &Path) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "enumerate-derivations", &[file], caps);
    let f = load_morphism(file)?;
    let r = validate_xmod_morphism(&f, &ctx.caps)?;
    ctx.absorb(&r);
    if !ctx.report.ok {
        ctx.verdict();
        return Ok(ctx.finish());
    }
    let ds = enumerate_derivations(&f, &ctx.caps)?;
    ctx.say(format!("found {} derivations", ds.len()));
    let doc = Document::DerivationList(DerivationListDoc {
        morphism: XmodMorphismDoc::from_core(&f),
        derivations: ds.iter().map(|d| d.s.clone()).collect(),
    });
    ctx.emit(&doc)?;
    ctx.verdict();
    Ok(ctx.finish())
}

fn cmd_x1(cli: &Cli, caps: Caps, file: &Path) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "x1", &[file], caps);
    let x = load_simplicial(file)?;
    let r = validate_simplicial(&x, &ctx.caps)?;
    ctx.absorb(&r);
    if !ctx.report.ok {
        ctx.verdict();
        return Ok(ctx.finish());
    }
    let extracted = x1_object(&x, &ctx.caps)?;
    ctx.say(format!(
        "kernel of d_0 has {} elements over a base of {}",
        extracted.kernel.len(),
        extracted.xmod.r().size()
    ));
    ctx.emit(&Document::Xmod(XmodDoc::from_core(&extracted.xmod)))?;
    ctx.verdict();
    Ok(ctx.finish())
}

fn cmd_nerve(cli: &Cli, caps: Caps, file: &Path, depth: usize) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "nerve", &[file], caps);
    let xm = load_xmod(file)?;
    let r = validate_derived_action(&xm.action, &ctx.caps)?;
    ctx.absorb(&r);
    let r = validate_crossed_module(&xm, &ctx.caps)?;
    ctx.absorb(&r);
    if !ctx.report.ok {
        ctx.verdict();
        return Ok(ctx.finish());
    }
    let nv = nerve(&xm, depth, &ctx.caps)?;
    let sizes: Vec<String> = nv.levels.iter().map(|l| l.size().to_string()).collect();
    ctx.say(format!("level sizes: {}", sizes.join(", ")));
    ctx.emit(&Document::Simplicial(SimplicialDoc::from_core(&nv)))?;
    ctx.verdict();
    Ok(ctx.finish())
}

fn cmd_transfer(cli: &Cli, caps: Caps, file: &Path) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "transfer", &[file], caps);
    let doc = load_document(file)?;
    let h = match doc {
        Document::SimplicialHomotopy(d) => d.into_core()?,
        other => {
            return Err(Error::InvalidInput(format!(
                "transfer needs a simplicial-homotopy document, got {}",
                other.kind_name()
            )))
        }
    };
    let r = validate_simplicial_homotopy(&h, &ctx.caps)?;
    ctx.absorb(&r);
    if !ctx.report.ok {
        ctx.verdict();
        return Ok(ctx.finish());
    }
    let report = transfer_homotopy(&h, &ctx.caps)?;
    ctx.say(format!(
        "image in kernel: {}; target matches: {}",
        report.image_in_kernel, report.g_matches
    ));
    for n in &report.notes {
        ctx.note(n.clone());
    }
    ctx.report.violations.extend(report.law_witnesses.clone());
    match report.derivation {
        Some(d) => {
            ctx.say(format!("derivation s = {:?}", d.s));
            ctx.emit(&Document::Derivation(DerivationDoc::from_core(&d)))?;
            ctx.verdict();
        }
        None => {
            ctx.report.ok = false;
            ctx.say("TRANSFER FAILED");
        }
    }
    Ok(ctx.finish())
}

fn cmd_moore(cli: &Cli, caps: Caps, file: &Path) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "moore", &[file], caps);
    let x = load_simplicial(file)?;
    let r = validate_simplicial(&x, &ctx.caps)?;
    ctx.absorb(&r);
    if !ctx.report.ok {
        ctx.verdict();
        return Ok(ctx.finish());
    }
    let terms = moore_complex(&x, &ctx.caps)?;
    let mut length = 0;
    for (n, term) in terms.iter().enumerate() {
        ctx.say(format!("degree {}: {} elements", n, term.elements.len()));
        if term.elements.len() > 1 {
            length = n;
        }
    }
    ctx.say(format!("moore length {}", length));
    ctx.note(format!("moore length {}", length));
    ctx.verdict();
    Ok(ctx.finish())
}

fn cmd_transport(
    cli: &Cli,
    caps: Caps,
    file: &Path,
    functor: KindFunctor,
) -> Result<Outcome, Error> {
    let mut ctx = ctx_for(cli, "instance-transport", &[file], caps);
    let doc = load_document(file)?;
    let out = match doc {
        Document::Xmod(d) => {
            let moved = transport_xmod(&d.into_core()?, functor, &ctx.caps)?;
            Document::Xmod(XmodDoc::from_core(&moved))
        }
        Document::XmodMorphism(d) => {
            let moved = transport_morphism(&d.into_core()?, functor, &ctx.caps)?;
            Document::XmodMorphism(XmodMorphismDoc::from_core(&moved))
        }
        Document::Derivation(d) => {
            let moved = transport_derivation(&d.into_core()?, functor, &ctx.caps)?;
            Document::Derivation(DerivationDoc::from_core(&moved))
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "instance-transport needs an xmod, xmod-morphism, or derivation document, got {}",
                other.kind_name()
            )))
        }
    };
    ctx.say(format!("transported {} document", out.kind_name()));
    ctx.emit(&out)?;
    ctx.verdict();
    Ok(ctx.finish())
}

fn load_morphism(path: &Path) -> Result<xmodkit_core::xmod::XmodMorphism, Error> {
    match load_document(path)? {
        Document::XmodMorphism(d) => d.into_core(),
        other => Err(Error::InvalidInput(format!(
            "{} holds a {} document, expected xmod-morphism",
            path.display(),
            other.kind_name()
        ))),
    }
}

fn load_derivation(path: &Path) -> Result<Derivation, Error> {
    match load_document(path)? {
        Document::Derivation(d) => d.into_core(),
        other => Err(Error::InvalidInput(format!(
            "{} holds a {} document, expected derivation",
            path.display(),
            other.kind_name()
        ))),
    }
}

fn load_simplicial(path: &Path) -> Result<xmodkit_core::simplicial::SimplicialObject, Error> {
    match load_document(path)? {
        Document::Simplicial(d) => d.into_core(),
        other => Err(Error::InvalidInput(format!(
            "{} holds a {} document, expected simplicial",
            path.display(),
            other.kind_name()
        ))),
    }
}

fn load_xmod(path: &Path) -> Result<xmodkit_core::xmod::CrossedModule, Error> {
    match load_document(path)? {
        Document::Xmod(d) => d.into_core(),
        other => Err(Error::InvalidInput(format!(
            "{} holds a {} document, expected xmod",
            path.display(),
            other.kind_name()
        ))),
    }
}
