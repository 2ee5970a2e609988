//! The `jetform` command line: a small document language for jets, fields,
//! forms and diffeomorphism groups, plus subcommands that run one operation
//! and print the result in human and machine-readable form.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 a computation refused its
//! input, 4 a document assertion failed, 5 an internal inconsistency or a
//! fixture whose output differs from its golden report.

pub mod eval;
pub mod fixtures;
pub mod report;
pub mod syntax;
pub mod value;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use jetform::forms::{dual_frame, integrate_closed, residue_along_axis};
use jetform::groups;
use jetform::{Error, GroupSpec, Qi, Verdict};
use serde_json::{json, Map, Value as Json};

use eval::{evaluate, Context, EvalError, Evaluation, Overrides};
use syntax::{parse_document, Document, ParseError};
use value::{CertView, Fail, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MODULE: i32 = 3;
pub const EXIT_ASSERT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "jetform",
    version,
    about = "Exact jet calculus for formal diffeomorphisms, fields and forms"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Opts {
    /// Jet order; overrides the document header
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Longest generator word enumerated in group searches
    #[arg(long, global = true)]
    word_bound: Option<usize>,
    /// Deepest derived / lower central level probed
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Most distinct elements kept per search level
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Write the JSON report here ("-" for stdout instead of the human report)
    #[arg(long, global = true, value_name = "PATH")]
    machine_output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a document and report its bindings and assertions
    Eval { doc: PathBuf },
    /// Print a document in canonical form
    Print { doc: PathBuf },
    /// exp of a field, optionally at time T
    Exp {
        doc: PathBuf,
        field: String,
        #[arg(long)]
        time: Option<String>,
    },
    /// Generator field of a diffeomorphism tangent to the identity
    Log { doc: PathBuf, map: String },
    /// Lie bracket of two fields
    Bracket { doc: PathBuf, a: String, b: String },
    /// Group commutator of two diffeomorphisms
    Commutator { doc: PathBuf, a: String, b: String },
    /// Push a field forward by a diffeomorphism
    Pushforward {
        doc: PathBuf,
        map: String,
        field: String,
    },
    /// Pull a form or function back by a diffeomorphism
    Pullback {
        doc: PathBuf,
        map: String,
        form: String,
    },
    /// Closed one-forms dual to a commuting independent pair of fields
    Dualforms {
        doc: PathBuf,
        x1: String,
        x2: String,
    },
    /// Fields dual to a pair of one-forms
    Dualframe {
        doc: PathBuf,
        w1: String,
        w2: String,
    },
    /// Decompose a closed planar form into residues and an exact part
    Integrate { doc: PathBuf, form: String },
    /// Residues of a closed planar form along both axes
    Residues { doc: PathBuf, form: String },
    /// Group-level verdicts; with no selection flags, all of them
    Analyze {
        doc: PathBuf,
        group: String,
        #[arg(long)]
        abelian: bool,
        #[arg(long)]
        quasi_abelian: bool,
        #[arg(long)]
        derived: bool,
        #[arg(long)]
        lower_central: bool,
        #[arg(long)]
        projective_equivalence: bool,
        #[arg(long)]
        uniform_order_equivalence: bool,
    },
    /// Evaluate the fixture corpus and compare against golden reports
    VerifyPaper {
        /// Directory of *.jet fixtures with *.expected.json goldens
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Rewrite the golden reports instead of comparing
        #[arg(long)]
        bless: bool,
    },
}

/// A failure with its exit code and message.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Exit {
            code,
            message: message.into(),
        }
    }
}

fn fail_code(f: &Fail) -> i32 {
    match f {
        Fail::Module(e) if e.is_internal() => EXIT_INTERNAL,
        _ => EXIT_MODULE,
    }
}

fn fail_class(f: &Fail) -> &'static str {
    match f {
        Fail::Module(e) if e.is_internal() => "internal",
        Fail::Module(_) => "module",
        Fail::Type(_) => "type",
    }
}

impl From<ParseError> for Exit {
    fn from(e: ParseError) -> Self {
        Exit::new(EXIT_USAGE, format!("error[parse]: {e}"))
    }
}

impl From<EvalError> for Exit {
    fn from(e: EvalError) -> Self {
        Exit::new(
            fail_code(&e.fail),
            format!("error[{}]: {e}", fail_class(&e.fail)),
        )
    }
}

impl From<Fail> for Exit {
    fn from(f: Fail) -> Self {
        Exit::new(fail_code(&f), format!("error[{}]: {f}", fail_class(&f)))
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Fail::Module(e).into()
    }
}

/// Runs the command line and returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.message);
            e.code
        }
    }
}

fn read_source(path: &Path) -> Result<String, Exit> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Exit::new(EXIT_USAGE, format!("error[io]: stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Exit::new(EXIT_USAGE, format!("error[io]: {}: {e}", path.display())))
}

fn overrides(o: &Opts) -> Overrides {
    Overrides {
        order: o.order,
        word_bound: o.word_bound,
        depth: o.depth,
        cap: o.cap,
    }
}

fn load(path: &Path, o: &Opts) -> Result<(Document, Evaluation), Exit> {
    let doc = parse_document(&read_source(path)?)?;
    if o.order == Some(0) {
        return Err(Exit::new(
            EXIT_USAGE,
            "error[usage]: --order must be positive",
        ));
    }
    if doc.settings.order.is_none() && o.order.is_none() {
        return Err(Exit::new(
            EXIT_USAGE,
            "error[usage]: no jet order: declare `order N` in the document or pass --order",
        ));
    }
    let ev = evaluate(&doc, &overrides(o))?;
    Ok((doc, ev))
}

fn arg(ctx: &Context, text: &str) -> Result<Value, Exit> {
    let e = ctx.parse(text)?;
    Ok(ctx.eval(&e)?)
}

fn emit(o: &Opts, out: &mut dyn Write, human: &str, machine: Json) -> Result<(), Exit> {
    let io = |e: std::io::Error| Exit::new(EXIT_USAGE, format!("error[io]: {e}"));
    match &o.machine_output {
        Some(p) if p == Path::new("-") => out
            .write_all(report::pretty(&machine).as_bytes())
            .map_err(io)?,
        Some(p) => {
            out.write_all(human.as_bytes()).map_err(io)?;
            std::fs::write(p, report::pretty(&machine)).map_err(io)?;
        }
        None => out.write_all(human.as_bytes()).map_err(io)?,
    }
    Ok(())
}

fn assertion_code(ev: &Evaluation) -> i32 {
    if ev.all_hold() {
        EXIT_OK
    } else {
        EXIT_ASSERT
    }
}

fn result_json(ctx: &Context, command: &str, inputs: &[&str], results: Vec<(&str, Json)>) -> Json {
    let mut m = report::header(ctx);
    m.insert("command".into(), json!(command));
    m.insert("inputs".into(), json!(inputs));
    let mut r = Map::new();
    for (k, v) in results {
        r.insert(k.into(), v);
    }
    m.insert("result".into(), Json::Object(r));
    Json::Object(m)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Exit> {
    let o = &cli.opts;
    let simple = |doc: &Path,
                  command: &str,
                  inputs: &[&str],
                  f: &dyn Fn(&Context, &[Value]) -> Result<Value, Exit>,
                  out: &mut dyn Write|
     -> Result<i32, Exit> {
        let (_, ev) = load(doc, o)?;
        let ctx = &ev.ctx;
        let vals = inputs
            .iter()
            .map(|t| arg(ctx, t))
            .collect::<Result<Vec<_>, _>>()?;
        let v = f(ctx, &vals)?;
        let human = format!("{} = {}\n", command, report::value_text(ctx, &v));
        emit(
            o,
            out,
            &human,
            result_json(ctx, command, inputs, vec![("value", v.to_json(&ctx.vars))]),
        )?;
        Ok(assertion_code(&ev))
    };
    match &cli.cmd {
        Cmd::Eval { doc } => {
            let (_, ev) = load(doc, o)?;
            let mut j = report::document_json(&ev);
            j.as_object_mut()
                .expect("object")
                .insert("command".into(), json!("eval"));
            emit(o, out, &report::document_text(&ev), j)?;
            Ok(assertion_code(&ev))
        }
        Cmd::Print { doc } => {
            let d = parse_document(&read_source(doc)?)?;
            let text = syntax::print_document(&d);
            emit(
                o,
                out,
                &text,
                json!({ "command": "print", "document": text }),
            )?;
            Ok(EXIT_OK)
        }
        Cmd::Exp { doc, field, time } => {
            let mut inputs = vec![field.as_str()];
            inputs.extend(time.as_deref());
            simple(
                doc,
                "exp",
                &inputs,
                &|_, v| {
                    let t = v.get(1).cloned();
                    let x = value::to_vector_field(&v[0]).ok_or_else(|| {
                        Fail::Type(format!("expected a vector field, got {}", v[0].type_name()))
                    })?;
                    let f = match t {
                        Some(Value::Scalar(t)) => x.exp_t(&t)?,
                        Some(other) => {
                            return Err(Fail::Type(format!(
                                "time must be a scalar, got {}",
                                other.type_name()
                            ))
                            .into())
                        }
                        None => x.exp()?,
                    };
                    Ok(Value::Diffeo(f))
                },
                out,
            )
        }
        Cmd::Log { doc, map } => simple(doc, "log", &[map], &|ctx, v| call(ctx, "log", v), out),
        Cmd::Bracket { doc, a, b } => simple(
            doc,
            "bracket",
            &[a, b],
            &|ctx, v| {
                if !matches!(
                    (&v[0], &v[1]),
                    (
                        Value::Field(_) | Value::MeroField(_),
                        Value::Field(_) | Value::MeroField(_)
                    )
                ) {
                    return Err(Fail::Type("bracket takes two vector fields".into()).into());
                }
                Ok(ctx.shape.bracket(&v[0], &v[1])?)
            },
            out,
        ),
        Cmd::Commutator { doc, a, b } => simple(
            doc,
            "commutator",
            &[a, b],
            &|ctx, v| {
                if !matches!((&v[0], &v[1]), (Value::Diffeo(_), Value::Diffeo(_))) {
                    return Err(Fail::Type("commutator takes two diffeomorphisms".into()).into());
                }
                Ok(ctx.shape.bracket(&v[0], &v[1])?)
            },
            out,
        ),
        Cmd::Pushforward { doc, map, field } => simple(
            doc,
            "pushforward",
            &[map, field],
            &|ctx, v| call(ctx, "push", v),
            out,
        ),
        Cmd::Pullback { doc, map, form } => simple(
            doc,
            "pullback",
            &[map, form],
            &|ctx, v| call(ctx, "pull", v),
            out,
        ),
        Cmd::Dualforms { doc, x1, x2 } => dual_forms(o, doc, x1, x2, out),
        Cmd::Dualframe { doc, w1, w2 } => {
            let (_, ev) = load(doc, o)?;
            let ctx = &ev.ctx;
            let (a, b) = (form_arg(ctx, w1)?, form_arg(ctx, w2)?);
            let (y1, y2) = dual_frame(&a, &b)?;
            let (y1, y2) = (Value::MeroField(y1), Value::MeroField(y2));
            let human = format!("Y1 = {}\nY2 = {}\n", ctx.render(&y1), ctx.render(&y2));
            let j = result_json(
                ctx,
                "dualframe",
                &[w1, w2],
                vec![("Y1", y1.to_json(&ctx.vars)), ("Y2", y2.to_json(&ctx.vars))],
            );
            emit(o, out, &human, j)?;
            Ok(assertion_code(&ev))
        }
        Cmd::Integrate { doc, form } => {
            let (_, ev) = load(doc, o)?;
            let ctx = &ev.ctx;
            let w = form_arg(ctx, form)?;
            let r = integrate_closed(&w)?;
            let prim = r.primitive.display_with(&ctx.vars);
            let (x, y) = (&ctx.vars[0], &ctx.vars[1]);
            let human = format!(
                "{form} = {}\n{}\n",
                integral_text(&r, &prim, x, y),
                r.known_degree
                    .map_or("primitive is exact".to_string(), |d| format!(
                        "primitive known through degree {d}"
                    ))
            );
            let j = result_json(
                ctx,
                "integrate",
                &[form],
                vec![
                    ("lambda", json!(r.lambda.to_string())),
                    ("mu", json!(r.mu.to_string())),
                    ("n", json!(r.n)),
                    ("m", json!(r.m)),
                    ("primitive", json!(prim)),
                    ("known_degree", json!(r.known_degree)),
                ],
            );
            emit(o, out, &human, j)?;
            Ok(assertion_code(&ev))
        }
        Cmd::Residues { doc, form } => {
            let (_, ev) = load(doc, o)?;
            let ctx = &ev.ctx;
            let w = form_arg(ctx, form)?;
            let (a, b) = (residue_along_axis(&w, 0)?, residue_along_axis(&w, 1)?);
            let (x, y) = (&ctx.vars[0], &ctx.vars[1]);
            let human = format!("residue along {x} = 0: {a}\nresidue along {y} = 0: {b}\n");
            let j = result_json(
                ctx,
                "residues",
                &[form],
                vec![
                    (x.as_str(), json!(a.to_string())),
                    (y.as_str(), json!(b.to_string())),
                ],
            );
            emit(o, out, &human, j)?;
            Ok(assertion_code(&ev))
        }
        Cmd::Analyze {
            doc,
            group,
            abelian,
            quasi_abelian,
            derived,
            lower_central,
            projective_equivalence,
            uniform_order_equivalence,
        } => {
            let all = !(*abelian
                || *quasi_abelian
                || *derived
                || *lower_central
                || *projective_equivalence
                || *uniform_order_equivalence);
            let sel = Selection {
                abelian: all || *abelian,
                quasi_abelian: all || *quasi_abelian,
                derived: all || *derived,
                lower_central: all || *lower_central,
                projective_equivalence: (all, *projective_equivalence),
                uniform_order_equivalence: (all, *uniform_order_equivalence),
            };
            let (_, ev) = load(doc, o)?;
            let ctx = &ev.ctx;
            let g = match arg(ctx, group)? {
                Value::Group(g) => g,
                other => {
                    return Err(Fail::Type(format!(
                        "analyze needs a group, got {}",
                        other.type_name()
                    ))
                    .into())
                }
            };
            let (human, j, refuted) = analyze(ctx, &g, &sel)?;
            emit(o, out, &human, j)?;
            Ok(if refuted {
                EXIT_ASSERT
            } else {
                assertion_code(&ev)
            })
        }
        Cmd::VerifyPaper { fixtures, bless } => {
            fixtures::verify(o.order, fixtures.as_deref(), *bless, &o.machine_output, out)
        }
    }
}

fn call(ctx: &Context, f: &str, v: &[Value]) -> Result<Value, Exit> {
    // Re-enter the evaluator through temporary bindings so subcommands and
    // documents share one implementation.
    let mut c = ctx.clone();
    let names: Vec<String> = (0..v.len()).map(|i| format!("arg__{i}")).collect();
    for (n, x) in names.iter().zip(v) {
        c.bind(n, x.clone());
    }
    let e = syntax::Expr::Call(
        f.into(),
        names.into_iter().map(syntax::Expr::Name).collect(),
    );
    Ok(c.eval(&e)?)
}

fn integral_text(
    r: &jetform::forms::IntegrationResult<Qi>,
    prim: &str,
    x: &str,
    y: &str,
) -> String {
    let mut parts = Vec::new();
    for (c, v) in [(&r.lambda, x), (&r.mu, y)] {
        if !num_traits::Zero::is_zero(c) {
            let c = c.to_string();
            parts.push(if c.contains(['+', ' ']) {
                format!("({c}) d{v}/{v}")
            } else {
                format!("{c} d{v}/{v}")
            });
        }
    }
    if prim != "0" {
        let mono: Vec<String> = [(x, r.n), (y, r.m)]
            .into_iter()
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| {
                if e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        parts.push(if mono.is_empty() {
            format!("d({prim})")
        } else {
            let p = if prim.contains(' ') {
                format!("({prim})")
            } else {
                prim.to_string()
            };
            format!("d({p}/({}))", mono.join("*"))
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn form_arg(ctx: &Context, text: &str) -> Result<jetform::OneForm, Exit> {
    match arg(ctx, text)? {
        Value::Form(w) => Ok(w),
        other => Err(Fail::Type(format!("expected a one-form, got {}", other.type_name())).into()),
    }
}

fn dual_forms(o: &Opts, doc: &Path, x1: &str, x2: &str, out: &mut dyn Write) -> Result<i32, Exit> {
    let (_, ev) = load(doc, o)?;
    let ctx = &ev.ctx;
    let (a, b) = (arg(ctx, x1)?, arg(ctx, x2)?);
    let w1 = call(
        ctx,
        "dual_form",
        &[a.clone(), b.clone(), Value::Scalar(Qi::int(1))],
    )?;
    let w2 = call(
        ctx,
        "dual_form",
        &[a.clone(), b.clone(), Value::Scalar(Qi::int(2))],
    )?;
    let mut checks = Map::new();
    let mut human = format!("w1 = {}\nw2 = {}\n", ctx.render(&w1), ctx.render(&w2));
    for (wn, w) in [("w1", &w1), ("w2", &w2)] {
        let closed = matches!(call(ctx, "closed", &[w.clone()])?, Value::Bool(true));
        checks.insert(format!("{wn} closed"), json!(closed));
        human += &format!("{wn} closed: {closed}\n");
        for (xn, x) in [("X1", &a), ("X2", &b)] {
            let p = call(ctx, "apply", &[w.clone(), x.clone()])?;
            let t = ctx.render(&p);
            checks.insert(format!("{wn}({xn})"), json!(t));
            human += &format!("{wn}({xn}) = {t}\n");
        }
    }
    let j = result_json(
        ctx,
        "dualforms",
        &[x1, x2],
        vec![
            ("w1", w1.to_json(&ctx.vars)),
            ("w2", w2.to_json(&ctx.vars)),
            ("checks", Json::Object(checks)),
        ],
    );
    emit(o, out, &human, j)?;
    Ok(assertion_code(&ev))
}

struct Selection {
    abelian: bool,
    quasi_abelian: bool,
    derived: bool,
    lower_central: bool,
    /// (all sections requested, explicitly requested)
    projective_equivalence: (bool, bool),
    uniform_order_equivalence: (bool, bool),
}

fn cert_view(ctx: &Context, g: &GroupSpec<Qi>, c: jetform::Certificate) -> Result<CertView, Exit> {
    Ok(CertView::new(c, &g.names, &g.generators, &ctx.vars)?)
}

fn cert_human(name: &str, c: &CertView) -> String {
    let mut s = format!("{name}: {}", c.cert.verdict);
    if let (Some(w), Some(o)) = (&c.witness, c.cert.witness_order) {
        s += &format!(" (witness {w}, tangency order {})", value::tangency_text(o));
    }
    s.push('\n');
    if let Some(j) = &c.witness_jet {
        s += &format!("    witness = {j}\n");
    }
    for d in &c.cert.detail {
        s += &format!("    {d}\n");
    }
    s
}

/// Group verdicts for the selected sections.
/// The flag is set when a certification is refuted or an equivalence check
/// finds its sides disagreeing.
fn analyze(
    ctx: &Context,
    g: &GroupSpec<Qi>,
    sel: &Selection,
) -> Result<(String, Json, bool), Exit> {
    let mut refuted = false;
    let mut m = report::header(ctx);
    m.insert("command".into(), json!("analyze"));
    let gens: Map<String, Json> = g
        .names
        .iter()
        .zip(&g.generators)
        .map(|(n, f)| (n.clone(), json!(value::render_diffeo(f, &ctx.vars))))
        .collect();
    let mut human = String::new();
    for (n, f) in g.names.iter().zip(&g.generators) {
        human += &format!("{n} = {}\n", value::render_diffeo(f, &ctx.vars));
    }
    m.insert("generators".into(), Json::Object(gens));
    m.insert("generator_order".into(), json!(g.names));
    m.insert(
        "jet_matrix_convention".into(),
        json!(report::JET_MATRIX_CONVENTION),
    );
    if sel.abelian {
        let c = cert_view(ctx, g, groups::is_abelian(g)?)?;
        refuted |= c.cert.verdict == Verdict::Refuted;
        human += &cert_human("abelian", &c);
        m.insert("abelian".into(), c.to_json());
    }
    if sel.quasi_abelian {
        let c = cert_view(ctx, g, groups::is_quasi_abelian(g)?)?;
        refuted |= c.cert.verdict == Verdict::Refuted;
        human += &cert_human("quasi-abelian", &c);
        m.insert("quasi_abelian".into(), c.to_json());
    }
    for (on, key, probe) in [
        (
            sel.derived,
            "derived",
            groups::derived_series_probe
                as fn(&GroupSpec<Qi>) -> jetform::Result<Vec<jetform::Certificate>>,
        ),
        (
            sel.lower_central,
            "lower_central",
            groups::lower_central_probe,
        ),
    ] {
        if !on {
            continue;
        }
        let mut levels = Vec::new();
        for (d, c) in probe(g)?.into_iter().enumerate() {
            let c = cert_view(ctx, g, c)?;
            refuted |= c.cert.verdict == Verdict::Refuted;
            human += &cert_human(&format!("{key} level {}", d + 1), &c);
            levels.push(c.to_json());
        }
        m.insert(key.into(), Json::Array(levels));
    }
    for ((all, explicit), key, check) in [
        (
            sel.projective_equivalence,
            "projective_equivalence",
            groups::projective_equivalence_check
                as fn(&GroupSpec<Qi>) -> jetform::Result<groups::EquivalenceReport>,
        ),
        (
            sel.uniform_order_equivalence,
            "uniform_order_equivalence",
            groups::uniform_order_equivalence_check,
        ),
    ] {
        if !(all || explicit) {
            continue;
        }
        match check(g) {
            Ok(rep) => {
                let mut sides = Vec::new();
                refuted |= !rep.agree;
                human += &format!(
                    "{key}: sides {}\n",
                    if rep.agree { "agree" } else { "disagree" }
                );
                for (n, c) in rep.sides {
                    let c = cert_view(ctx, g, c)?;
                    human += &format!("  {}", cert_human(&n, &c));
                    sides.push(json!({ "side": n, "certificate": c.to_json() }));
                }
                m.insert(key.into(), json!({ "agree": rep.agree, "sides": sides }));
            }
            Err(e @ Error::Precondition(_)) if !explicit => {
                human += &format!("{key}: not applicable ({e})\n");
                m.insert(key.into(), json!({ "not_applicable": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((human, Json::Object(m), refuted))
}
