use std::rc::Rc;

use jetform::{
    Certificate, Diffeo, Error, GroupSpec, Jet, MeroField, MeroJet, OneForm, PJet, Qi, Scalar,
    TangencyOrder, VectorField, Verdict,
};
use num_traits::{One, Zero};
use serde_json::{json, Value as Json};

/// Why an expression could not be evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum Fail {
    Module(Error),
    Type(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Module(e)
    }
}

impl std::fmt::Display for Fail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fail::Module(e) => write!(f, "{e}"),
            Fail::Type(m) => write!(f, "type error: {m}"),
        }
    }
}

pub type VResult<T> = Result<T, Fail>;

/// A certificate with its witness already rendered.
#[derive(Clone, Debug, PartialEq)]
pub struct CertView {
    pub cert: Certificate,
    pub witness: Option<String>,
    pub witness_jet: Option<String>,
}

impl CertView {
    pub fn new(
        cert: Certificate,
        names: &[String],
        gens: &[Diffeo],
        vars: &[String],
    ) -> VResult<Self> {
        let (witness, witness_jet) = match &cert.witness {
            Some(w) => (
                Some(w.render(names)),
                Some(render_diffeo(&w.eval(gens)?, vars)),
            ),
            None => (None, None),
        };
        Ok(CertView {
            cert,
            witness,
            witness_jet,
        })
    }

    pub fn to_json(&self) -> Json {
        json!({
            "verdict": self.cert.verdict.to_string(),
            "witness": self.witness,
            "witness_jet": self.witness_jet,
            "witness_order": self.cert.witness_order.map(tangency_text),
            "detail": self.cert.detail,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Qi),
    /// The flag records whether the jet is an exact polynomial rather than
    /// a truncation.
    Jet(Jet, bool),
    Mero(MeroJet),
    Field(VectorField),
    MeroField(MeroField),
    Form(OneForm),
    Diffeo(Diffeo),
    Group(Rc<GroupSpec<Qi>>),
    Bool(bool),
    Verdict(Verdict),
    Cert(Box<CertView>),
    Equivalence(Vec<(String, CertView)>, bool),
    Tangency(TangencyOrder),
}

pub fn tangency_text(t: TangencyOrder) -> String {
    match t {
        TangencyOrder::NotTangent => "not_tangent".into(),
        TangencyOrder::Order(k) => k.to_string(),
        TangencyOrder::Identity => "identity".into(),
    }
}

pub fn render_diffeo(f: &Diffeo, vars: &[String]) -> String {
    let parts: Vec<String> = f
        .components()
        .iter()
        .map(|c| c.display_with(vars))
        .collect();
    if parts.len() == 1 {
        format!("({},)", parts[0])
    } else {
        format!("({})", parts.join(", "))
    }
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Jet(..) => "jet",
            Value::Mero(_) => "meromorphic",
            Value::Field(_) => "field",
            Value::MeroField(_) => "meromorphic field",
            Value::Form(_) => "form",
            Value::Diffeo(_) => "diffeomorphism",
            Value::Group(_) => "group",
            Value::Bool(_) => "bool",
            Value::Verdict(_) | Value::Cert(_) => "verdict",
            Value::Equivalence(..) => "equivalence",
            Value::Tangency(_) => "tangency",
        }
    }

    /// Text that parses back to an equal value.
    pub fn render(&self, vars: &[String]) -> String {
        match self {
            Value::Scalar(c) => c.to_string(),
            Value::Jet(j, _) => j.display_with(vars),
            Value::Mero(m) => m.reduced().display_with(vars),
            Value::Field(x) if x.is_zero() => format!("0 d/d{}", vars[0]),
            Value::Field(x) => x.display_with(vars),
            Value::MeroField(x) if x.is_zero() => format!("0 d/d{}", vars[0]),
            Value::MeroField(x) => {
                MeroField::new(x.components().iter().map(MeroJet::reduced).collect())
                    .display_with(vars)
            }
            Value::Form(w) if w.coeffs().iter().all(MeroJet::is_zero) => format!("0 d{}", vars[0]),
            Value::Form(w) => OneForm::new(w.coeffs().iter().map(MeroJet::reduced).collect())
                .map_or_else(|_| w.display_with(vars), |r| r.display_with(vars)),
            Value::Diffeo(f) => render_diffeo(f, vars),
            Value::Group(g) => {
                let gens: Vec<String> = g
                    .generators
                    .iter()
                    .map(|f| render_diffeo(f, vars))
                    .collect();
                format!("group({})", gens.join(", "))
            }
            Value::Bool(b) | Value::Equivalence(_, b) => b.to_string(),
            Value::Verdict(v) => v.to_string(),
            Value::Cert(c) => c.cert.verdict.to_string(),
            Value::Tangency(t) => tangency_text(*t),
        }
    }

    pub fn to_json(&self, vars: &[String]) -> Json {
        let mut out = json!({ "type": self.type_name(), "value": self.render(vars) });
        let obj = out.as_object_mut().expect("object");
        match self {
            Value::Cert(c) => {
                obj.insert("certificate".into(), c.to_json());
            }
            Value::Equivalence(sides, agree) => {
                let sides: Vec<Json> = sides
                    .iter()
                    .map(|(n, c)| json!({ "side": n, "certificate": c.to_json() }))
                    .collect();
                obj.insert("sides".into(), Json::Array(sides));
                obj.insert("agree".into(), json!(agree));
            }
            Value::Group(g) => {
                obj.insert("names".into(), json!(g.names));
            }
            Value::Diffeo(f) => {
                obj.insert("tangency".into(), json!(tangency_text(f.tangency_order())));
            }
            _ => {}
        }
        out
    }

    fn jetlike(&self, nvars: usize, order: u32) -> Option<(Jet, bool)> {
        match self {
            Value::Scalar(c) => Some((Jet::constant(nvars, order, c.clone()), true)),
            Value::Jet(j, e) => Some((j.clone(), *e)),
            _ => None,
        }
    }

    fn merolike(&self, nvars: usize, order: u32) -> Option<MeroJet> {
        match self {
            Value::Mero(m) => Some(m.clone()),
            v => v.jetlike(nvars, order).map(|(j, e)| to_mero(j, e)),
        }
    }

    fn numeric(&self) -> bool {
        matches!(self, Value::Scalar(_) | Value::Jet(..) | Value::Mero(_))
    }

    fn mero_field(&self) -> Option<MeroField> {
        match self {
            Value::Field(x) => Some(MeroField::from_field(x)),
            Value::MeroField(x) => Some(x.clone()),
            _ => None,
        }
    }

    fn is_zero_scalar(&self) -> bool {
        matches!(self, Value::Scalar(c) if c.is_zero())
    }
}

fn to_mero(j: Jet, exact: bool) -> MeroJet {
    if exact {
        MeroJet::from_exact_jet(j)
    } else {
        MeroJet::from_jet(j)
    }
}

fn pjet(j: Jet, exact: bool) -> PJet {
    if exact {
        PJet::exact(j)
    } else {
        PJet::known(j)
    }
}

fn mismatch<T>(op: &str, a: &Value, b: &Value) -> VResult<T> {
    Err(Fail::Type(format!(
        "cannot {op} {} and {}",
        a.type_name(),
        b.type_name()
    )))
}

/// Shape shared by every value of a document.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub nvars: usize,
    pub order: u32,
}

fn deg(j: &Jet) -> u32 {
    j.max_degree().unwrap_or(0)
}

fn map_mero_field(x: &MeroField, f: impl Fn(&MeroJet) -> VResult<MeroJet>) -> VResult<Value> {
    let comps = x.components().iter().map(f).collect::<VResult<Vec<_>>>()?;
    Ok(Value::MeroField(MeroField::new(comps)))
}

fn map_form(w: &OneForm, f: impl Fn(&MeroJet) -> VResult<MeroJet>) -> VResult<Value> {
    let coeffs = w.coeffs().iter().map(f).collect::<VResult<Vec<_>>>()?;
    Ok(Value::Form(OneForm::new(coeffs)?))
}

impl Shape {
    pub fn add(&self, a: &Value, b: &Value) -> VResult<Value> {
        let (n, o) = (self.nvars, self.order);
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.clone() + y.clone()),
            _ if a.numeric() && b.numeric() => match (a.jetlike(n, o), b.jetlike(n, o)) {
                (Some((x, ex)), Some((y, ey))) => Value::Jet(x.try_add(&y)?, ex && ey),
                _ => Value::Mero(
                    a.merolike(n, o)
                        .expect("numeric")
                        .add(&b.merolike(n, o).expect("numeric"))?,
                ),
            },
            (Value::Field(x), Value::Field(y)) => Value::Field(x.try_add(y)?),
            (Value::Form(x), Value::Form(y)) => Value::Form(x.add(y)?),
            _ => match (a.mero_field(), b.mero_field()) {
                (Some(x), Some(y)) => {
                    let comps = x
                        .components()
                        .iter()
                        .zip(y.components())
                        .map(|(p, q)| p.add(q))
                        .collect::<Result<Vec<_>, _>>()?;
                    Value::MeroField(MeroField::new(comps))
                }
                _ => return mismatch("add", a, b),
            },
        })
    }

    pub fn neg(&self, a: &Value) -> VResult<Value> {
        let m1 = -Qi::one();
        Ok(match a {
            Value::Scalar(c) => Value::Scalar(-c.clone()),
            Value::Jet(j, e) => Value::Jet(-j, *e),
            Value::Mero(m) => Value::Mero(m.neg()),
            Value::Field(x) => Value::Field(x.scale(&m1)),
            Value::MeroField(x) => return map_mero_field(x, |c| Ok(c.neg())),
            Value::Form(w) => Value::Form(w.scale(&m1)),
            _ => return Err(Fail::Type(format!("cannot negate {}", a.type_name()))),
        })
    }

    pub fn sub(&self, a: &Value, b: &Value) -> VResult<Value> {
        if !(a.numeric() || a.mero_field().is_some() || matches!(a, Value::Form(_))) {
            return mismatch("subtract", a, b);
        }
        self.add(a, &self.neg(b).or_else(|_| mismatch("subtract", a, b))?)
    }

    pub fn mul(&self, a: &Value, b: &Value) -> VResult<Value> {
        let (n, o) = (self.nvars, self.order);
        if let (Value::Diffeo(f), Value::Diffeo(g)) = (a, b) {
            return Ok(Value::Diffeo(f.compose(g)?));
        }
        if a.numeric() && b.numeric() {
            return Ok(match (a, b) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.clone() * y.clone()),
                _ => match (a.jetlike(n, o), b.jetlike(n, o)) {
                    (Some((x, ex)), Some((y, ey))) => {
                        let exact = ex && ey && deg(&x) + deg(&y) <= o;
                        Value::Jet(x.try_mul(&y)?, exact)
                    }
                    _ => Value::Mero(
                        a.merolike(n, o)
                            .expect("numeric")
                            .mul(&b.merolike(n, o).expect("numeric"))?,
                    ),
                },
            });
        }
        let (c, other) = if a.numeric() {
            (a, b)
        } else if b.numeric() {
            (b, a)
        } else {
            return mismatch("multiply", a, b);
        };
        Ok(match (c, other) {
            (Value::Scalar(s), Value::Field(x)) => Value::Field(x.scale(s)),
            (Value::Jet(j, _), Value::Field(x)) => Value::Field(x.mul_jet(j)),
            (Value::Scalar(s), Value::Form(w)) => Value::Form(w.scale(s)),
            (_, Value::Field(_) | Value::MeroField(_)) => {
                let m = c.merolike(n, o).expect("numeric");
                return map_mero_field(&other.mero_field().expect("field"), |x| Ok(m.mul(x)?));
            }
            (_, Value::Form(w)) => {
                let m = c.merolike(n, o).expect("numeric");
                return map_form(w, |x| Ok(m.mul(x)?));
            }
            _ => return mismatch("multiply", a, b),
        })
    }

    pub fn div(&self, a: &Value, b: &Value) -> VResult<Value> {
        let (n, o) = (self.nvars, self.order);
        if !b.numeric() {
            return mismatch("divide", a, b);
        }
        if let Value::Scalar(d) = b {
            let inv = d.inv().ok_or(Error::ZeroDenominator)?;
            match a {
                Value::Scalar(c) => return Ok(Value::Scalar(c.clone() * inv)),
                Value::Jet(j, e) => return Ok(Value::Jet(j.scale(&inv), *e)),
                Value::Field(x) => return Ok(Value::Field(x.scale(&inv))),
                Value::Form(w) => return Ok(Value::Form(w.scale(&inv))),
                _ => {}
            }
        }
        let den = b.merolike(n, o).expect("numeric");
        if a.numeric() {
            if let (Some((x, ex)), Some((y, ey))) = (a.jetlike(n, o), b.jetlike(n, o)) {
                return Ok(Value::Mero(MeroJet::from_parts(pjet(x, ex), pjet(y, ey))?));
            }
            return Ok(Value::Mero(a.merolike(n, o).expect("numeric").div(&den)?));
        }
        match a {
            Value::Field(_) | Value::MeroField(_) => {
                map_mero_field(&a.mero_field().expect("field"), |x| Ok(x.div(&den)?))
            }
            Value::Form(w) => map_form(w, |x| Ok(x.div(&den)?)),
            _ => mismatch("divide", a, b),
        }
    }

    pub fn pow(&self, a: &Value, k: i64) -> VResult<Value> {
        let o = self.order;
        Ok(match a {
            Value::Scalar(c) => Value::Scalar(c.powi(k).ok_or(Error::ZeroDenominator)?),
            Value::Jet(j, e) if k >= 0 => {
                let exact = *e && (deg(j) as i64) * k <= o as i64;
                Value::Jet(j.pow(k as u32), exact)
            }
            Value::Jet(..) | Value::Mero(_) => {
                let mut acc = Value::Scalar(Qi::one());
                for _ in 0..k.unsigned_abs() {
                    acc = self.mul(&acc, a)?;
                }
                if k < 0 {
                    self.div(&Value::Scalar(Qi::one()), &acc)?
                } else {
                    acc
                }
            }
            Value::Diffeo(f) => Value::Diffeo(f.pow(k)),
            _ => {
                return Err(Fail::Type(format!(
                    "cannot raise {} to a power",
                    a.type_name()
                )))
            }
        })
    }

    pub fn tuple(&self, items: &[Value]) -> VResult<Value> {
        let comps = items
            .iter()
            .map(|v| {
                v.jetlike(self.nvars, self.order)
                    .map(|(j, _)| j)
                    .ok_or_else(|| {
                        Fail::Type(format!("tuple entries must be jets, got {}", v.type_name()))
                    })
            })
            .collect::<VResult<Vec<_>>>()?;
        Ok(Value::Diffeo(Diffeo::new(comps)?))
    }

    pub fn bracket(&self, a: &Value, b: &Value) -> VResult<Value> {
        Ok(match (a, b) {
            (Value::Field(x), Value::Field(y)) => Value::Field(x.bracket(y)?),
            (Value::Diffeo(f), Value::Diffeo(g)) => Value::Diffeo(f.commutator(g)?),
            _ => match (a.mero_field(), b.mero_field()) {
                (Some(x), Some(y)) => Value::MeroField(x.bracket(&y)?),
                _ => return mismatch("bracket", a, b),
            },
        })
    }

    pub fn as_jet(&self, v: &Value) -> Option<(Jet, bool)> {
        v.jetlike(self.nvars, self.order)
    }

    pub fn as_mero(&self, v: &Value) -> Option<MeroJet> {
        v.merolike(self.nvars, self.order)
    }

    pub fn as_mero_field(&self, v: &Value) -> Option<MeroField> {
        v.mero_field()
    }

    /// Equality at the verifiable order.
    pub fn equal(&self, a: &Value, b: &Value) -> VResult<bool> {
        if let Some(r) = self.equal_directed(a, b)? {
            return Ok(r);
        }
        if let Some(r) = self.equal_directed(b, a)? {
            return Ok(r);
        }
        mismatch("compare", a, b)
    }

    fn equal_directed(&self, a: &Value, b: &Value) -> VResult<Option<bool>> {
        let (n, o) = (self.nvars, self.order);
        Ok(Some(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => x == y,
            _ if a.numeric() && b.numeric() => match (a.jetlike(n, o), b.jetlike(n, o)) {
                (Some((x, _)), Some((y, _))) => {
                    x.check_compatible(&y)?;
                    x == y
                }
                _ => {
                    let (x, y) = (
                        a.merolike(n, o).expect("numeric"),
                        b.merolike(n, o).expect("numeric"),
                    );
                    if x.order() != y.order() {
                        return Err(Error::OrderMismatch {
                            left: x.order(),
                            right: y.order(),
                        }
                        .into());
                    }
                    x.eq_verified(&y)
                }
            },
            (Value::Field(x), Value::Field(y)) => {
                x.component(0).check_compatible(y.component(0))?;
                x == y
            }
            (Value::Field(x), Value::Scalar(_)) if b.is_zero_scalar() => x.is_zero(),
            (Value::MeroField(x), Value::Scalar(_)) if b.is_zero_scalar() => x.is_zero(),
            (Value::Field(_) | Value::MeroField(_), Value::Field(_) | Value::MeroField(_)) => a
                .mero_field()
                .expect("field")
                .eq_verified(&b.mero_field().expect("field")),
            (Value::Form(x), Value::Form(y)) => x.eq_verified(y),
            (Value::Form(x), Value::Scalar(_)) if b.is_zero_scalar() => {
                x.coeffs().iter().all(MeroJet::is_zero)
            }
            (Value::Diffeo(f), Value::Diffeo(g)) => {
                f.component(0).check_compatible(g.component(0))?;
                f == g
            }
            (Value::Diffeo(f), Value::Tangency(TangencyOrder::Identity)) => f.is_identity(),
            (Value::Group(g), Value::Group(h)) => g.generators == h.generators,
            (Value::Bool(x), Value::Bool(y)) => x == y,
            (Value::Equivalence(_, x), Value::Bool(y)) => x == y,
            (Value::Equivalence(_, x), Value::Equivalence(_, y)) => x == y,
            (Value::Verdict(x), Value::Verdict(y)) => x == y,
            (Value::Cert(c), Value::Verdict(v)) => c.cert.verdict == *v,
            (Value::Cert(c), Value::Cert(d)) => c.cert.verdict == d.cert.verdict,
            (Value::Tangency(x), Value::Tangency(y)) => x == y,
            (Value::Tangency(t), Value::Scalar(k)) => {
                k.as_i64()
                    .and_then(|k| u32::try_from(k).ok())
                    .map(TangencyOrder::Order)
                    == Some(*t)
            }
            _ => return Ok(None),
        }))
    }
}

pub fn scalar_int(v: &Value) -> Option<i64> {
    match v {
        Value::Scalar(c) => c.as_i64(),
        _ => None,
    }
}

pub fn to_vector_field(v: &Value) -> Option<VectorField> {
    match v {
        Value::Field(x) => Some(x.clone()),
        Value::MeroField(x) => x.to_vector_field(),
        Value::Scalar(c) if c.is_zero() => None,
        _ => None,
    }
}
