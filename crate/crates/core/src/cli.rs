//! Batch front end. Every subcommand reads classes from its arguments and/or
//! `--input` (one per line, `#` starts a comment) and writes one record per
//! input, in input order.
//!
//! Exit status: 0 when every verdict was computed (positive or negative),
//! 2 on malformed input, 3 when a step or size cap was hit.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cones::{
    accumulation_report, curve_decompose, effective_decompose, is_nef, movable_decompose,
    nef_decompose, AnyCertificate, Certificate, ConeTag, GeneratorClass, NefVerdict,
};
use crate::error::Error;
use crate::lattice::{CurveClass, DivisorClass, Rational};
use crate::oracle::{cone_member, parse_vector, ConeProblem, EffOracle, Membership};
use crate::weyl::{is_minus_one_divisor, orbit_e8, to_standard_form, DEFAULT_MAX_STEPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// One JSON document per line; decompositions use the certificate format.
    Structured,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "blowup8",
    version,
    about = "Divisor classes, Weyl group reduction and certified cone decompositions on the blowup of P^3 at eight points",
    after_help = "Divisor classes are written d;m1,...,m8 (meaning dH - sum m_i E_i, entries may be p/q).\n\
Curve classes are written a;c1,...,c8 (meaning a h + sum c_i e_i).\n\n\
CSV columns:\n  \
reduce:         input,standard,word,cremona_steps\n  \
classify:       input,nef,movable,effective\n  \
decompose:      input,cone,word,coeff,generator (one row per term; member=false rows carry the reason)\n  \
orbit:          class,degree\n  \
accumulation:   degree,count,max_distance,max_distance_decimal\n  \
check-minus-one: input,minus_one,word\n  \
oracle:         target,verdict,certificate\n\n\
Exit status: 0 verdict computed, 2 input error, 3 step or size cap reached."
)]
pub struct Cli {
    /// Read further inputs from FILE, one per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Cap on Cremona applications per reduction.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write results to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Standard form of each class, with the reducing Weyl word.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        classes: Vec<String>,
    },
    /// Nef, movable and effective verdicts with certificates.
    Classify {
        #[arg(allow_hyphen_values = true)]
        classes: Vec<String>,
    },
    /// Certified decomposition over the generators of one cone.
    Decompose {
        #[arg(long, value_enum)]
        cone: ConeArg,
        #[arg(allow_hyphen_values = true)]
        classes: Vec<String>,
    },
    /// W . E_8 up to a degree bound, as CSV.
    Orbit {
        #[arg(long)]
        max_degree: u32,
    },
    /// Per-degree maximum distance of orbit rays from the ray of -K/2, as CSV.
    Accumulation {
        #[arg(long)]
        max_degree: u32,
    },
    /// Whether each class lies in W . E_8.
    CheckMinusOne {
        #[arg(allow_hyphen_values = true)]
        classes: Vec<String>,
    },
    /// Exact cone membership of each target vector.
    Oracle {
        /// Generators, one vector per line (entries separated by ';' or ',').
        #[arg(long, value_name = "FILE", required_unless_present = "effective", conflicts_with = "effective")]
        generators: Option<PathBuf>,
        /// Use -K/2 and W . E_8 truncated by degree, with the stabilisation rule.
        #[arg(long)]
        effective: bool,
        #[arg(allow_hyphen_values = true)]
        targets: Vec<String>,
    },
    /// Re-check certificates (one JSON document per line, or one per file).
    Verify { certfile: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConeArg {
    Curves,
    Nef,
    Eff,
    Mov,
}

impl From<ConeArg> for ConeTag {
    fn from(c: ConeArg) -> Self {
        match c {
            ConeArg::Curves => ConeTag::Curves,
            ConeArg::Nef => ConeTag::Nef,
            ConeArg::Eff => ConeTag::Effective,
            ConeArg::Mov => ConeTag::Movable,
        }
    }
}

/// Exit status for a library error that ends a single record.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StepLimitExceeded { .. } | Error::ScaleExceeded(_) => EXIT_CAP,
        _ => EXIT_INPUT,
    }
}

struct Session<'a> {
    out: Vec<u8>,
    err: &'a mut dyn Write,
    format: Format,
    max_steps: usize,
    status: i32,
    csv: Option<csv::Writer<Vec<u8>>>,
}

impl<'a> Session<'a> {
    fn fail(&mut self, what: &str, e: &Error) {
        let _ = writeln!(self.err, "error: {what}: {e}");
        self.status = self.status.max(exit_code(e));
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.extend_from_slice(s.as_ref().as_bytes());
        self.out.push(b'\n');
    }

    fn json(&mut self, v: &Value) {
        self.line(serde_json::to_string(v).expect("json serializes"));
    }

    fn row<I: IntoIterator<Item = S>, S: AsRef<[u8]>>(&mut self, header: &[&str], rec: I) {
        let w = self.csv.get_or_insert_with(|| {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("write to memory");
            w
        });
        w.write_record(rec).expect("write to memory");
    }

    fn finish(mut self) -> (Vec<u8>, i32) {
        if let Some(w) = self.csv.take() {
            let bytes = w.into_inner().expect("flush to memory");
            self.out.extend_from_slice(&bytes);
        }
        (self.out, self.status)
    }
}

fn read_inputs(args: &[String], file: Option<&PathBuf>) -> Result<Vec<String>, Error> {
    let mut v: Vec<String> = args.to_vec();
    if let Some(p) = file {
        let text = fs::read_to_string(p)
            .map_err(|e| Error::parse("input file", &p.display().to_string(), e.to_string()))?;
        v.extend(content_lines(&text));
    }
    Ok(v)
}

fn content_lines(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
}

fn terms_human<G: GeneratorClass>(c: &Certificate<G>) -> String {
    if c.terms.is_empty() {
        return "0".into();
    }
    c.terms
        .iter()
        .map(|t| format!("{} * ({})", t.coeff, t.generator))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn word_or_dash(w: &crate::weyl::WeylWord) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        w.to_string()
    }
}

fn emit_certificate<G: GeneratorClass>(s: &mut Session, c: &Certificate<G>) {
    match s.format {
        Format::Human => {
            let word = if c.word.is_empty() {
                String::new()
            } else {
                format!(" after word {}", c.word)
            };
            s.line(format!("{} in {}{}: {}", c.input, c.cone, word, terms_human(c)));
        }
        Format::Structured => s.line(c.to_json()),
        Format::Csv => {
            let header = ["input", "cone", "word", "coeff", "generator"];
            let (input, cone, word) = (c.input.to_string(), c.cone.to_string(), word_or_dash(&c.word));
            if c.terms.is_empty() {
                s.row(&header, [&input, &cone, &word, "0", ""]);
            }
            for t in &c.terms {
                s.row(&header, [&input, &cone, &word, &t.coeff.to_string(), &t.generator.to_string()]);
            }
        }
    }
}

fn emit_rejection(s: &mut Session, input: &str, cone: ConeTag, e: &Error) {
    match s.format {
        Format::Human => s.line(format!("{input} not in {cone}: {e}")),
        Format::Structured => s.json(&json!({"cone": cone, "input": input, "member": false, "reason": e.to_string()})),
        Format::Csv => s.row(
            &["input", "cone", "word", "coeff", "generator"],
            [input, cone.as_str(), "member=false", "", &e.to_string()],
        ),
    }
}

fn is_verdict(e: &Error) -> bool {
    matches!(
        e,
        Error::NotNef { .. } | Error::NotEffective { .. } | Error::NotMovable { .. } | Error::HypothesisViolated { .. }
    )
}

fn parse_divisor(s: &mut Session, text: &str) -> Option<DivisorClass> {
    match text.parse() {
        Ok(d) => Some(d),
        Err(e) => {
            s.fail(text, &e);
            None
        }
    }
}

fn cmd_reduce(s: &mut Session, inputs: &[String]) {
    for text in inputs {
        let Some(d) = parse_divisor(s, text) else { continue };
        match to_standard_form(&d, s.max_steps) {
            Ok(r) => match s.format {
                Format::Human => s.line(format!(
                    "{d} -> {} (word {}, {} Cremona steps)",
                    r.standard,
                    word_or_dash(&r.word),
                    r.steps
                )),
                Format::Structured => s.json(&json!({
                    "input": d.to_string(),
                    "standard": r.standard.to_string(),
                    "word": r.word,
                    "steps": r.steps,
                })),
                Format::Csv => s.row(
                    &["input", "standard", "word", "cremona_steps"],
                    [d.to_string(), r.standard.to_string(), r.word.to_string(), r.steps.to_string()],
                ),
            },
            Err(e) => s.fail(text, &e),
        }
    }
}

fn cmd_classify(s: &mut Session, inputs: &[String]) {
    for text in inputs {
        let Some(d) = parse_divisor(s, text) else { continue };
        let nef = nef_decompose(&d);
        let mov = movable_decompose(&d, s.max_steps);
        let eff = effective_decompose(&d, s.max_steps);
        let mut capped = false;
        for r in [&mov, &eff] {
            if let Err(e) = r {
                if !is_verdict(e) {
                    s.fail(text, e);
                    capped = true;
                }
            }
        }
        if capped {
            continue;
        }
        match s.format {
            Format::Human => {
                s.line(format!("{d}: nef={} movable={} effective={}", nef.is_ok(), mov.is_ok(), eff.is_ok()));
                for c in [&nef, &mov, &eff].into_iter().flatten() {
                    s.line(format!("  {} ({}): {}", c.cone, word_or_dash(&c.word), terms_human(c)));
                }
                if let NefVerdict::NotNef { witness, value } = is_nef(&d) {
                    s.line(format!("  not nef: D . ({witness}) = {value}"));
                }
            }
            Format::Structured => {
                let cert = |r: &Result<Certificate<DivisorClass>, Error>| match r {
                    Ok(c) => c.to_value(),
                    Err(e) => json!({"member": false, "reason": e.to_string()}),
                };
                s.json(&json!({
                    "input": d.to_string(),
                    "nef": nef.is_ok(),
                    "movable": mov.is_ok(),
                    "effective": eff.is_ok(),
                    "certificates": {"nef": cert(&nef), "mov": cert(&mov), "eff": cert(&eff)},
                }));
            }
            Format::Csv => s.row(
                &["input", "nef", "movable", "effective"],
                [d.to_string(), nef.is_ok().to_string(), mov.is_ok().to_string(), eff.is_ok().to_string()],
            ),
        }
    }
}

fn cmd_decompose(s: &mut Session, cone: ConeTag, inputs: &[String]) {
    for text in inputs {
        if cone == ConeTag::Curves {
            let k: CurveClass = match text.parse() {
                Ok(k) => k,
                Err(e) => {
                    s.fail(text, &e);
                    continue;
                }
            };
            match curve_decompose(&k) {
                Ok(c) => emit_certificate(s, &c),
                Err(e) => emit_rejection(s, &k.to_string(), cone, &e),
            }
            continue;
        }
        let Some(d) = parse_divisor(s, text) else { continue };
        let r = match cone {
            ConeTag::Nef => nef_decompose(&d),
            ConeTag::Effective => effective_decompose(&d, s.max_steps),
            _ => movable_decompose(&d, s.max_steps),
        };
        match r {
            Ok(c) => emit_certificate(s, &c),
            Err(e) if is_verdict(&e) => emit_rejection(s, &d.to_string(), cone, &e),
            Err(e) => s.fail(text, &e),
        }
    }
}

fn cmd_orbit(s: &mut Session, max_degree: u32) {
    for x in orbit_e8(max_degree) {
        s.row(&["class", "degree"], [x.to_string(), x.d.to_string()]);
    }
}

/// `r` as a decimal truncated towards zero after `digits` places.
fn decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let x = (r * Rational::from_integer(scale.clone())).trunc().to_integer();
    let sign = if x.is_negative() { "-" } else { "" };
    let x = x.abs();
    let (q, rem) = (&x / &scale, &x % &scale);
    format!("{sign}{q}.{:0>width$}", rem.to_string(), width = digits as usize)
}

fn cmd_accumulation(s: &mut Session, max_degree: u32) {
    match accumulation_report(max_degree) {
        Ok(rows) => {
            for r in rows {
                s.row(
                    &["degree", "count", "max_distance", "max_distance_decimal"],
                    [r.degree.to_string(), r.count.to_string(), r.max_distance.to_string(), decimal(&r.max_distance, 12)],
                );
            }
        }
        Err(e) => s.fail("accumulation", &e),
    }
}

fn cmd_check_minus_one(s: &mut Session, inputs: &[String]) {
    for text in inputs {
        let Some(d) = parse_divisor(s, text) else { continue };
        match is_minus_one_divisor(&d, s.max_steps) {
            Ok(w) => match s.format {
                Format::Human => match &w {
                    Some(w) => s.line(format!("{d}: (-1)-divisor, word {} carries it to E8", word_or_dash(w))),
                    None => s.line(format!("{d}: not a (-1)-divisor")),
                },
                Format::Structured => s.json(&json!({"input": d.to_string(), "minus_one": w.is_some(), "word": w})),
                Format::Csv => s.row(
                    &["input", "minus_one", "word"],
                    [d.to_string(), w.is_some().to_string(), w.map(|w| w.to_string()).unwrap_or_default()],
                ),
            },
            Err(e) => s.fail(text, &e),
        }
    }
}

fn vector_text(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn emit_membership(s: &mut Session, target: &str, gens: &[String], m: &Membership, note: Option<(u32, bool)>) {
    let extra = note.map(|(t, stable)| json!({"truncation": t, "stable": stable}));
    match (s.format, m) {
        (Format::Human, Membership::Feasible { coefficients }) => {
            let terms: Vec<String> = coefficients
                .iter()
                .zip(gens)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, g)| format!("{c} * ({g})"))
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            s.line(format!("{target}: feasible: {body}"));
        }
        (Format::Human, Membership::Infeasible { separator }) => {
            s.line(format!("{target}: infeasible: separator ({})", vector_text(separator)));
        }
        (Format::Structured, _) => {
            let mut v = match m {
                Membership::Feasible { coefficients } => json!({
                    "target": target,
                    "verdict": "feasible",
                    "terms": coefficients.iter().zip(gens).filter(|(c, _)| !c.is_zero())
                        .map(|(c, g)| json!({"gen": g, "coeff": c.to_string()})).collect::<Vec<_>>(),
                }),
                Membership::Infeasible { separator } => json!({
                    "target": target,
                    "verdict": "infeasible",
                    "separator": separator.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            };
            if let Some(x) = extra {
                v["truncation"] = x["truncation"].clone();
                v["stable"] = x["stable"].clone();
            }
            s.json(&v);
        }
        (Format::Csv, _) => {
            let (verdict, cert) = match m {
                Membership::Feasible { coefficients } => (
                    "feasible",
                    coefficients
                        .iter()
                        .zip(gens)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, g)| format!("{c}*({g})"))
                        .collect::<Vec<_>>()
                        .join(" + "),
                ),
                Membership::Infeasible { separator } => ("infeasible", vector_text(separator)),
            };
            s.row(&["target", "verdict", "certificate"], [target, verdict, &cert]);
        }
    }
    if let (Some((t, stable)), Format::Human) = (note, s.format) {
        s.line(format!("  truncation degree {t}, {}", if stable { "stable" } else { "UNSTABLE" }));
    }
}

fn cmd_oracle(s: &mut Session, generators: Option<&PathBuf>, effective: bool, inputs: &[String]) {
    if effective {
        let mut o = EffOracle::new();
        for text in inputs {
            let Some(d) = parse_divisor(s, text) else { continue };
            match o.decide(&d) {
                Ok(r) => {
                    let gens: Vec<String> = r.generators.iter().map(ToString::to_string).collect();
                    emit_membership(s, &d.to_string(), &gens, &r.membership, Some((r.truncation, r.stable)));
                }
                Err(e) => s.fail(text, &e),
            }
        }
        return;
    }
    let path = generators.expect("clap enforces --generators");
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            s.fail("generators", &Error::parse("generator file", &path.display().to_string(), e.to_string()));
            return;
        }
    };
    let lines: Vec<String> = content_lines(&text).collect();
    let gens = match lines.iter().map(|l| parse_vector(l)).collect::<Result<Vec<_>, _>>() {
        Ok(g) => g,
        Err(e) => {
            s.fail("generators", &e);
            return;
        }
    };
    for text in inputs {
        let t = match parse_vector(text) {
            Ok(t) => t,
            Err(e) => {
                s.fail(text, &e);
                continue;
            }
        };
        match ConeProblem::new(t, gens.clone()).and_then(|p| cone_member(&p)) {
            Ok(m) => emit_membership(s, text.trim(), &lines, &m, None),
            Err(e) => s.fail(text, &e),
        }
    }
}

fn cmd_verify(s: &mut Session, path: &PathBuf) {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            s.fail("verify", &Error::parse("certificate file", &path.display().to_string(), e.to_string()));
            return;
        }
    };
    let docs: Vec<String> = if serde_json::from_str::<Value>(&text).is_ok() {
        vec![text]
    } else {
        content_lines(&text).collect()
    };
    for doc in docs {
        let cert = match AnyCertificate::from_json(&doc) {
            Ok(c) => c,
            Err(e) => {
                s.fail("verify", &e);
                continue;
            }
        };
        let input = match &cert {
            AnyCertificate::Curve(c) => c.input.to_string(),
            AnyCertificate::Divisor(c) => c.input.to_string(),
        };
        let verdict = cert.check();
        match s.format {
            Format::Human => match &verdict {
                Ok(()) => s.line(format!("valid {} certificate for {input}", cert.cone())),
                Err(e) => s.line(format!("INVALID {} certificate for {input}: {e}", cert.cone())),
            },
            Format::Structured => s.json(&json!({
                "cone": cert.cone(),
                "input": input,
                "valid": verdict.is_ok(),
                "reason": verdict.err().map(|e| e.to_string()),
            })),
            Format::Csv => s.row(
                &["input", "cone", "valid", "reason"],
                [input, cert.cone().to_string(), verdict.is_ok().to_string(), verdict.err().map(|e| e.to_string()).unwrap_or_default()],
            ),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut s = Session {
        out: Vec::new(),
        err,
        format: cli.format,
        max_steps: cli.max_steps,
        status: EXIT_OK,
        csv: None,
    };
    let inputs = |args: &[String], s: &mut Session| match read_inputs(args, cli.input.as_ref()) {
        Ok(v) => Some(v),
        Err(e) => {
            s.fail("input", &e);
            None
        }
    };
    match &cli.command {
        Command::Reduce { classes } => {
            if let Some(v) = inputs(classes, &mut s) {
                cmd_reduce(&mut s, &v)
            }
        }
        Command::Classify { classes } => {
            if let Some(v) = inputs(classes, &mut s) {
                cmd_classify(&mut s, &v)
            }
        }
        Command::Decompose { cone, classes } => {
            if let Some(v) = inputs(classes, &mut s) {
                cmd_decompose(&mut s, (*cone).into(), &v)
            }
        }
        Command::Orbit { max_degree } => cmd_orbit(&mut s, *max_degree),
        Command::Accumulation { max_degree } => cmd_accumulation(&mut s, *max_degree),
        Command::CheckMinusOne { classes } => {
            if let Some(v) = inputs(classes, &mut s) {
                cmd_check_minus_one(&mut s, &v)
            }
        }
        Command::Oracle { generators, effective, targets } => {
            if let Some(v) = inputs(targets, &mut s) {
                cmd_oracle(&mut s, generators.as_ref(), *effective, &v)
            }
        }
        Command::Verify { certfile } => cmd_verify(&mut s, certfile),
    }
    let (bytes, mut status) = s.finish();
    let written = match &cli.output {
        Some(p) => fs::write(p, &bytes).map_err(|e| e.to_string()),
        None => out.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        status = status.max(EXIT_INPUT);
    }
    status
}
