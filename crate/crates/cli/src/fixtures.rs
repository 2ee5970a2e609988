//! The built-in fixture corpus and its golden reports.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value as Json};

use crate::eval::{evaluate, Evaluation, Overrides};
use crate::syntax::{parse_document, print_document};
use crate::{report, Exit, EXIT_ASSERT, EXIT_INTERNAL, EXIT_MODULE, EXIT_OK, EXIT_USAGE};

pub struct Fixture {
    pub name: String,
    pub source: String,
    pub golden: Option<String>,
}

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name,
            include_str!(concat!("../fixtures/", $name, ".jet")),
            include_str!(concat!("../fixtures/", $name, ".expected.json")))),*]
    };
}

const EMBEDDED: &[(&str, &str, &str)] = embedded!(
    "commuting_pairs",
    "dual_forms",
    "invariant_groups",
    "lie_algebras",
    "nonregular_pair",
    "normal_forms",
    "order_growth",
    "projective_invariance",
    "solvable_not_metabelian",
);

pub fn embedded() -> Vec<Fixture> {
    EMBEDDED
        .iter()
        .map(|(n, s, g)| Fixture {
            name: n.to_string(),
            source: s.to_string(),
            golden: Some(g.to_string()),
        })
        .collect()
}

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// `*.jet` files of a directory, by name.
pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, Exit> {
    let io =
        |e: std::io::Error| Exit::new(EXIT_USAGE, format!("error[io]: {}: {e}", dir.display()));
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jet"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().expect("file").to_string_lossy().into_owned();
            Ok(Fixture {
                source: std::fs::read_to_string(&p).map_err(io)?,
                golden: std::fs::read_to_string(dir.join(format!("{name}.expected.json"))).ok(),
                name,
            })
        })
        .collect()
}

/// The report a fixture is compared against.
pub fn fixture_report(name: &str, ev: &Evaluation) -> Json {
    let mut j = report::document_json(ev);
    j.as_object_mut()
        .expect("object")
        .insert("fixture".into(), json!(name));
    j
}

/// Every binding prints to text that evaluates back to an equal value.
fn values_round_trip(ev: &Evaluation) -> Result<(), String> {
    let ctx = &ev.ctx;
    for (name, v) in &ev.bindings {
        let text = ctx.render(v);
        let back = ctx
            .parse(&text)
            .map_err(|e| format!("{name}: printed value does not parse: {e}"))?;
        let back = ctx.eval(&back).map_err(|e| format!("{name}: {e}"))?;
        if !ctx.equal(v, &back).map_err(|e| format!("{name}: {e}"))? {
            return Err(format!("{name}: printed value evaluates differently"));
        }
    }
    Ok(())
}

pub struct Outcome {
    pub name: String,
    pub code: i32,
    pub status: String,
    pub report: Option<Json>,
}

pub fn check(f: &Fixture, order: Option<u32>) -> Outcome {
    let done = |code, status: String, report| Outcome {
        name: f.name.clone(),
        code,
        status,
        report,
    };
    let doc = match parse_document(&f.source) {
        Ok(d) => d,
        Err(e) => return done(EXIT_USAGE, format!("parse error: {e}"), None),
    };
    match parse_document(&print_document(&doc)) {
        Ok(d) if d == doc => {}
        _ => {
            return done(
                EXIT_INTERNAL,
                "canonical print does not parse back".into(),
                None,
            )
        }
    }
    let ov = Overrides {
        order,
        ..Overrides::default()
    };
    let ev = match evaluate(&doc, &ov) {
        Ok(ev) => ev,
        Err(e) => {
            let x: Exit = e.into();
            return done(x.code.max(EXIT_MODULE), x.message, None);
        }
    };
    if let Err(m) = values_round_trip(&ev) {
        return done(EXIT_INTERNAL, format!("value round trip: {m}"), None);
    }
    let rep = fixture_report(&f.name, &ev);
    let failed: Vec<String> = ev
        .assertions
        .iter()
        .filter(|a| !a.holds)
        .map(|a| format!("line {}: {}", a.line, a.text))
        .collect();
    if !failed.is_empty() {
        return done(
            EXIT_ASSERT,
            format!("assertion failed: {}", failed.join("; ")),
            Some(rep),
        );
    }
    done(EXIT_OK, "ok".into(), Some(rep))
}

pub fn verify(
    order: Option<u32>,
    dir: Option<&Path>,
    bless: bool,
    machine: &Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Exit> {
    let fixtures = match dir {
        Some(d) => load_dir(d)?,
        None if bless => load_dir(&default_dir())?,
        None => embedded(),
    };
    let target = dir.map(Path::to_path_buf).unwrap_or_else(default_dir);
    let mut code = EXIT_OK;
    let mut human = String::new();
    let mut rows = Vec::new();
    for f in &fixtures {
        let mut o = check(f, order);
        if let (EXIT_OK | EXIT_ASSERT, Some(rep)) = (o.code, &o.report) {
            let text = report::pretty(rep);
            if bless {
                std::fs::write(target.join(format!("{}.expected.json", f.name)), &text)
                    .map_err(|e| Exit::new(EXIT_USAGE, format!("error[io]: {e}")))?;
            } else {
                let golden = f
                    .golden
                    .as_deref()
                    .and_then(|g| serde_json::from_str::<Json>(g).ok());
                match golden {
                    None => {
                        o.code = EXIT_INTERNAL;
                        o.status = "missing golden report".into();
                    }
                    Some(g) if g != *rep => {
                        o.code = EXIT_INTERNAL;
                        o.status = format!("golden mismatch: {}", first_difference(&g, rep));
                    }
                    _ => {}
                }
            }
        }
        code = code.max(o.code);
        human += &format!("fixture {} ... {}\n", o.name, o.status);
        rows.push(json!({ "fixture": o.name, "status": o.status, "exit": o.code }));
    }
    let ok = rows.iter().filter(|r| r["exit"] == 0).count();
    human += &format!("{ok} of {} fixtures ok\n", fixtures.len());
    let j = json!({
        "command": "verify-paper",
        "fixtures": rows,
        "status": if code == EXIT_OK { "ok" } else { "failed" },
    });
    let io = |e: std::io::Error| Exit::new(EXIT_USAGE, format!("error[io]: {e}"));
    match machine {
        Some(p) if p == Path::new("-") => {
            out.write_all(report::pretty(&j).as_bytes()).map_err(io)?
        }
        Some(p) => {
            out.write_all(human.as_bytes()).map_err(io)?;
            std::fs::write(p, report::pretty(&j)).map_err(io)?;
        }
        None => out.write_all(human.as_bytes()).map_err(io)?,
    }
    Ok(code)
}

/// A JSON path where two reports first differ.
fn first_difference(a: &Json, b: &Json) -> String {
    fn walk(a: &Json, b: &Json, path: String) -> Option<String> {
        match (a, b) {
            (Json::Object(x), Json::Object(y)) => {
                for k in x.keys().chain(y.keys()) {
                    match (x.get(k), y.get(k)) {
                        (Some(p), Some(q)) => {
                            if let Some(d) = walk(p, q, format!("{path}.{k}")) {
                                return Some(d);
                            }
                        }
                        _ => return Some(format!("{path}.{k}")),
                    }
                }
                None
            }
            (Json::Array(x), Json::Array(y)) => {
                for (i, (p, q)) in x.iter().zip(y).enumerate() {
                    if let Some(d) = walk(p, q, format!("{path}[{i}]")) {
                        return Some(d);
                    }
                }
                (x.len() != y.len()).then(|| format!("{path} (length)"))
            }
            _ => (a != b).then(|| format!("{path}: expected {a}, got {b}")),
        }
    }
    walk(a, b, "$".into()).unwrap_or_else(|| "$".into())
}
