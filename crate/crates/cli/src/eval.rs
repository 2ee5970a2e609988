use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use jetform::forms::{dual_closed_forms, residue_along_axis, verify_first_integral};
use jetform::groups::{self, EquivalenceReport};
use jetform::normal;
use jetform::{Diffeo, Error, GroupSpec, Jet, OneForm, Qi, TangencyOrder, VectorField, Verdict};
use num_traits::{One, Zero};

use crate::syntax::{
    parse_expr, print_expr, BinOp, Cmp, Document, Expr, Literal, ParseError, StatementKind,
};
use crate::value::{scalar_int, to_vector_field, CertView, Fail, Shape, VResult, Value};

/// Group search bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub word_bound: usize,
    pub depth: usize,
    pub cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            word_bound: 4,
            depth: 3,
            cap: 48,
        }
    }
}

/// Settings given on the command line; they win over the document header.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub order: Option<u32>,
    pub word_bound: Option<usize>,
    pub depth: Option<usize>,
    pub cap: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Context {
    pub shape: Shape,
    pub vars: Vec<String>,
    pub bounds: Bounds,
    env: HashMap<String, Value>,
}

#[derive(Clone, Debug)]
pub struct EvalError {
    pub line: usize,
    pub fail: Fail,
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.fail)
    }
}

#[derive(Clone, Debug)]
pub struct AssertionResult {
    pub line: usize,
    pub text: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub ctx: Context,
    pub bindings: Vec<(String, Value)>,
    pub assertions: Vec<AssertionResult>,
}

impl Evaluation {
    pub fn all_hold(&self) -> bool {
        self.assertions.iter().all(|a| a.holds)
    }
}

impl Context {
    pub fn new(vars: Vec<String>, order: u32, bounds: Bounds) -> Self {
        Context {
            shape: Shape {
                nvars: vars.len(),
                order,
            },
            vars,
            bounds,
            env: HashMap::new(),
        }
    }

    /// `None` when neither the document nor the overrides fix the order.
    pub fn for_document(doc: &Document, ov: &Overrides) -> Option<Self> {
        let s = &doc.settings;
        let order = ov.order.or(s.order)?;
        let d = Bounds::default();
        let bounds = Bounds {
            word_bound: ov.word_bound.or(s.word_bound).unwrap_or(d.word_bound),
            depth: ov.depth.or(s.depth).unwrap_or(d.depth),
            cap: ov.cap.or(s.cap).unwrap_or(d.cap),
        };
        Some(Context::new(doc.vars(), order, bounds))
    }

    pub fn names(&self) -> HashSet<String> {
        self.env.keys().cloned().collect()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    pub fn bind(&mut self, name: &str, v: Value) {
        self.env.insert(name.to_string(), v);
    }

    pub fn parse(&self, text: &str) -> Result<Expr, ParseError> {
        parse_expr(text, &self.vars, &self.names())
    }

    pub fn render(&self, v: &Value) -> String {
        v.render(&self.vars)
    }

    pub fn eval(&self, e: &Expr) -> VResult<Value> {
        let sh = &self.shape;
        let (n, o) = (sh.nvars, sh.order);
        Ok(match e {
            Expr::Num(k) => Value::Scalar(Qi::real(k.clone().into())),
            Expr::Imag => Value::Scalar(Qi::i()),
            Expr::Var(i) => Value::Jet(Jet::var(n, o, *i), true),
            Expr::Name(s) => self
                .env
                .get(s)
                .cloned()
                .ok_or_else(|| Fail::Type(format!("{s} is not bound")))?,
            Expr::Partial(i) => Value::Field(VectorField::coordinate(n, o, *i)),
            Expr::Differential(i) => Value::Form(OneForm::dz(n, o, *i)),
            Expr::Radial => Value::Field(VectorField::radial(n, o)),
            Expr::Lit(l) => match l {
                Literal::True => Value::Bool(true),
                Literal::False => Value::Bool(false),
                Literal::Proved => Value::Verdict(Verdict::Proved),
                Literal::Refuted => Value::Verdict(Verdict::Refuted),
                Literal::Inconclusive => Value::Verdict(Verdict::Inconclusive),
                Literal::Identity => Value::Tangency(TangencyOrder::Identity),
                Literal::NotTangent => Value::Tangency(TangencyOrder::NotTangent),
            },
            Expr::Neg(a) => sh.neg(&self.eval(a)?)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => sh.add(&a, &b)?,
                    BinOp::Sub => sh.sub(&a, &b)?,
                    BinOp::Mul => sh.mul(&a, &b)?,
                    BinOp::Div => sh.div(&a, &b)?,
                }
            }
            Expr::Pow(a, k) => sh.pow(&self.eval(a)?, *k)?,
            Expr::Tuple(xs) => {
                let items = xs
                    .iter()
                    .map(|x| self.eval(x))
                    .collect::<VResult<Vec<_>>>()?;
                sh.tuple(&items)?
            }
            Expr::Bracket(a, b) => sh.bracket(&self.eval(a)?, &self.eval(b)?)?,
            Expr::Call(f, args) => self.call(f, args)?,
        })
    }

    fn call(&self, f: &str, args: &[Expr]) -> VResult<Value> {
        if f == "residue" {
            let Expr::Var(axis) = args[1] else {
                return Err(Fail::Type(
                    "residue takes a coordinate as its second argument".into(),
                ));
            };
            let w = form(&self.eval(&args[0])?)?;
            return Ok(Value::Scalar(residue_along_axis(&w, axis)?));
        }
        let vals = args
            .iter()
            .map(|a| self.eval(a))
            .collect::<VResult<Vec<_>>>()?;
        let sh = &self.shape;
        let v = |i: usize| &vals[i];
        Ok(match f {
            "exp" => {
                let x = field(v(0))?;
                match vals.get(1) {
                    Some(t) => Value::Diffeo(x.exp_t(&scalar(t)?)?),
                    None => Value::Diffeo(x.exp()?),
                }
            }
            "log" => Value::Field(diffeo(v(0))?.log()?),
            "compose" => match (v(0), v(1)) {
                (Value::Diffeo(a), Value::Diffeo(b)) => Value::Diffeo(a.compose(b)?),
                (t, Value::Diffeo(g)) => pull_function(sh, g, t)?,
                (a, b) => return Err(type_pair("compose", a, b)),
            },
            "inverse" => Value::Diffeo(diffeo(v(0))?.inverse()),
            "push" => Value::Field(diffeo(v(0))?.pushforward(&field(v(1))?)?),
            "pull" => {
                let g = diffeo(v(0))?;
                match v(1) {
                    Value::Form(w) => Value::Form(w.pullback(&g)?),
                    t => pull_function(sh, &g, t)?,
                }
            }
            "d" => {
                let t = sh.as_mero(v(0)).ok_or_else(|| {
                    Fail::Type(format!("d takes a function, got {}", v(0).type_name()))
                })?;
                Value::Form(OneForm::differential(&t)?)
            }
            "homothety" => Value::Diffeo(Diffeo::homothety(sh.nvars, sh.order, &scalar(v(0))?)?),
            "truncate" => {
                let k = small_int(v(1), 1, 64)? as u32;
                match v(0) {
                    Value::Jet(j, e) => Value::Jet(
                        j.with_order(k),
                        *e && j.max_degree().map_or(true, |d| d <= k),
                    ),
                    Value::Field(x) => Value::Field(x.with_order(k)),
                    Value::Diffeo(g) => Value::Diffeo(Diffeo::new(
                        g.components().iter().map(|c| c.with_order(k)).collect(),
                    )?),
                    other => {
                        return Err(Fail::Type(format!("cannot truncate {}", other.type_name())))
                    }
                }
            }
            "unit_power" => {
                let (u, _) = sh.as_jet(v(0)).ok_or_else(|| {
                    Fail::Type(format!("unit_power takes a jet, got {}", v(0).type_name()))
                })?;
                let alpha = scalar(v(1))?;
                let alpha = alpha
                    .as_rational()
                    .ok_or_else(|| Fail::Type("unit_power needs a rational exponent".into()))?
                    .clone();
                let small = |b: &num_bigint::BigInt| {
                    i64::try_from(b)
                        .map_err(|_| Fail::Type("unit_power exponent is too large".into()))
                };
                let root = match vals.get(2) {
                    Some(r) => scalar(r)?,
                    None if u.constant_term().is_one() => Qi::one(),
                    None if u.constant_term().is_zero() => return Err(Error::NotAUnit.into()),
                    None => {
                        return Err(Error::Precondition(
                            "unit_power needs u(0) = 1 or an explicit root of u(0)".into(),
                        )
                        .into())
                    }
                };
                let p =
                    normal::unit_power(&u, small(alpha.numer())?, small(alpha.denom())?, &root)?;
                Value::Jet(p, false)
            }
            "group" => {
                let gens = vals.iter().map(diffeo).collect::<VResult<Vec<_>>>()?;
                let names = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| match a {
                        Expr::Name(s) => s.clone(),
                        _ => format!("g{}", i + 1),
                    })
                    .collect();
                let b = self.bounds;
                let spec = GroupSpec::new(gens)?
                    .with_names(names)
                    .with_bounds(b.word_bound, b.depth)
                    .with_element_cap(b.cap);
                Value::Group(Rc::new(spec))
            }
            "abelian" => {
                let g = group(v(0))?;
                self.cert(groups::is_abelian(&g)?, &g)?
            }
            "quasi_abelian" => {
                let g = group(v(0))?;
                self.cert(groups::is_quasi_abelian(&g)?, &g)?
            }
            "derived" | "lower_central" => {
                let g = group(v(0))?;
                let d = small_int(v(1), 1, 16)? as usize;
                let mut spec = (*g).clone();
                spec.depth_bound = d;
                let probe = if f == "derived" {
                    groups::derived_series_probe(&spec)?
                } else {
                    groups::lower_central_probe(&spec)?
                };
                self.cert(probe.into_iter().last().expect("depth at least 1"), &g)?
            }
            "projective_equivalence" | "uniform_order_equivalence" => {
                let g = group(v(0))?;
                let rep = if f == "projective_equivalence" {
                    groups::projective_equivalence_check(&g)?
                } else {
                    groups::uniform_order_equivalence_check(&g)?
                };
                self.equivalence(rep, &g)?
            }
            "metabelian_criterion" => {
                let (a, h) = (diffeo(v(0))?, diffeo(v(1))?);
                let names: Vec<String> = args
                    .iter()
                    .zip(["f", "h"])
                    .map(|(e, d)| match e {
                        Expr::Name(s) => s.clone(),
                        _ => d.to_string(),
                    })
                    .collect();
                let c = groups::metabelian_criterion_check(&a, &h)?;
                Value::Cert(Box::new(CertView::new(c, &names, &[a, h], &self.vars)?))
            }
            "closed" => Value::Bool(form(v(0))?.is_closed()),
            "dicritic" | "regular_dicritic" => {
                let reg = f == "regular_dicritic";
                Value::Bool(match v(0) {
                    Value::Diffeo(g) if reg => g.is_regular_dicritic(),
                    Value::Diffeo(g) => g.is_dicritic(),
                    x => {
                        let x = field(x)?;
                        if reg {
                            x.is_regular_dicritic()
                        } else {
                            x.is_dicritic()
                        }
                    }
                })
            }
            "invariant" => {
                let g = diffeo(v(0))?;
                Value::Bool(match v(1) {
                    Value::Field(x) => g.pushforward(x)? == *x,
                    Value::Form(w) => w.pullback(&g)?.eq_verified(w),
                    t => {
                        let pulled = pull_function(sh, &g, t)?;
                        sh.equal(&pulled, t)?
                    }
                })
            }
            "projective_factor" => {
                let c = diffeo(v(0))?.projective_factor(&field(v(1))?)?;
                Value::Scalar(c.ok_or_else(|| {
                    Error::Precondition("the field is not rescaled by the diffeomorphism".into())
                })?)
            }
            "flow_time" => {
                let t = diffeo(v(0))?.flow_membership(&field(v(1))?)?;
                Value::Scalar(t.ok_or_else(|| {
                    Error::Precondition("the diffeomorphism is not in the flow of the field".into())
                })?)
            }
            "tangency" => Value::Tangency(diffeo(v(0))?.tangency_order()),
            "apply" => match (v(0), v(1)) {
                (Value::Form(w), x) => {
                    let x = sh
                        .as_mero_field(x)
                        .ok_or_else(|| type_pair("apply", v(0), v(1)))?;
                    Value::Mero(w.apply_mero(&x)?)
                }
                (Value::Field(x), Value::Jet(j, _)) => Value::Jet(x.apply(j)?, false),
                (x, t) => {
                    let (Some(x), Some(t)) = (sh.as_mero_field(x), sh.as_mero(t)) else {
                        return Err(type_pair("apply", x, t));
                    };
                    Value::Mero(x.apply(&t)?)
                }
            },
            "first_integral" => {
                let t = sh
                    .as_mero(v(1))
                    .ok_or_else(|| type_pair("first_integral", v(0), v(1)))?;
                Value::Bool(verify_first_integral(&field(v(0))?, &t)?)
            }
            "dual_form" => {
                let j = small_int(v(2), 1, 2)?;
                let (w1, w2) = dual_closed_forms(&field(v(0))?, &field(v(1))?)?;
                Value::Form(if j == 1 { w1 } else { w2 })
            }
            "lie_length" => {
                let fields = vals.iter().map(field).collect::<VResult<Vec<_>>>()?;
                let span = groups::lie_closure(&fields, self.bounds.cap)?;
                let len = span.derived_length()?.ok_or_else(|| {
                    Error::Precondition(
                        "the generated Lie algebra is not solvable at the jet order".into(),
                    )
                })?;
                Value::Scalar(Qi::int(len as i64))
            }
            _ => unreachable!("builtin table and evaluator disagree on {f}"),
        })
    }

    fn cert(&self, c: jetform::Certificate, g: &GroupSpec<Qi>) -> VResult<Value> {
        Ok(Value::Cert(Box::new(CertView::new(
            c,
            &g.names,
            &g.generators,
            &self.vars,
        )?)))
    }

    fn equivalence(&self, rep: EquivalenceReport, g: &GroupSpec<Qi>) -> VResult<Value> {
        let sides = rep
            .sides
            .into_iter()
            .map(|(n, c)| Ok((n, CertView::new(c, &g.names, &g.generators, &self.vars)?)))
            .collect::<VResult<Vec<_>>>()?;
        Ok(Value::Equivalence(sides, rep.agree))
    }

    pub fn equal(&self, a: &Value, b: &Value) -> VResult<bool> {
        self.shape.equal(a, b)
    }
}

fn type_pair(op: &str, a: &Value, b: &Value) -> Fail {
    Fail::Type(format!(
        "{op} does not accept {} and {}",
        a.type_name(),
        b.type_name()
    ))
}

fn expect<T>(v: &Value, what: &str, f: impl FnOnce(&Value) -> Option<T>) -> VResult<T> {
    f(v).ok_or_else(|| Fail::Type(format!("expected {what}, got {}", v.type_name())))
}

fn field(v: &Value) -> VResult<VectorField> {
    expect(v, "a vector field", to_vector_field)
}

fn diffeo(v: &Value) -> VResult<Diffeo> {
    expect(v, "a diffeomorphism", |v| match v {
        Value::Diffeo(f) => Some(f.clone()),
        _ => None,
    })
}

fn form(v: &Value) -> VResult<OneForm> {
    expect(v, "a one-form", |v| match v {
        Value::Form(w) => Some(w.clone()),
        _ => None,
    })
}

fn group(v: &Value) -> VResult<Rc<GroupSpec<Qi>>> {
    expect(v, "a group", |v| match v {
        Value::Group(g) => Some(g.clone()),
        _ => None,
    })
}

fn scalar(v: &Value) -> VResult<Qi> {
    expect(v, "a scalar", |v| match v {
        Value::Scalar(c) => Some(c.clone()),
        _ => None,
    })
}

fn small_int(v: &Value, lo: i64, hi: i64) -> VResult<i64> {
    match scalar_int(v) {
        Some(k) if (lo..=hi).contains(&k) => Ok(k),
        _ => Err(Fail::Type(format!(
            "expected an integer between {lo} and {hi}, got {}",
            v.type_name()
        ))),
    }
}

fn pull_function(sh: &Shape, g: &Diffeo, t: &Value) -> VResult<Value> {
    if let Some((j, _)) = sh.as_jet(t) {
        return Ok(Value::Jet(g.pull_jet(&j)?, false));
    }
    let m = sh
        .as_mero(t)
        .ok_or_else(|| Fail::Type(format!("cannot pull back {}", t.type_name())))?;
    Ok(Value::Mero(m.compose(g)?))
}

/// Runs every statement in order. Failed assertions are recorded, not fatal.
pub fn evaluate(doc: &Document, ov: &Overrides) -> Result<Evaluation, EvalError> {
    let mut ctx = Context::for_document(doc, ov).ok_or(EvalError {
        line: 1,
        fail: Fail::Type("no jet order given".into()),
    })?;
    let vars = doc.vars();
    let mut bindings = Vec::new();
    let mut assertions = Vec::new();
    for st in &doc.statements {
        let at = |fail| EvalError {
            line: st.line,
            fail,
        };
        match &st.kind {
            StatementKind::Let(name, e) => {
                let v = ctx.eval(e).map_err(at)?;
                ctx.bind(name, v.clone());
                bindings.push((name.clone(), v));
            }
            StatementKind::Assert(e, cmp) => {
                let lhs = ctx.eval(e).map_err(at)?;
                let (holds, text) = match cmp {
                    None => {
                        let holds = match &lhs {
                            Value::Bool(b) | Value::Equivalence(_, b) => *b,
                            Value::Cert(c) => c.cert.verdict == Verdict::Proved,
                            other => {
                                return Err(at(Fail::Type(format!(
                                    "assert needs a bool, got {}",
                                    other.type_name()
                                ))))
                            }
                        };
                        (holds, print_expr(e, &vars))
                    }
                    Some((c, r)) => {
                        let rhs = ctx.eval(r).map_err(at)?;
                        let eq = ctx.equal(&lhs, &rhs).map_err(at)?;
                        let op = if *c == Cmp::Eq { "==" } else { "!=" };
                        (
                            eq == (*c == Cmp::Eq),
                            format!("{} {op} {}", print_expr(e, &vars), print_expr(r, &vars)),
                        )
                    }
                };
                assertions.push(AssertionResult {
                    line: st.line,
                    text,
                    holds,
                });
            }
        }
    }
    Ok(Evaluation {
        ctx,
        bindings,
        assertions,
    })
}
