//! JSON files for instances, point sets and witnesses. Every scalar is a
//! string ("num/den" or an integer), so no value ever passes through a float.

use serde_json::{json, Map, Value};

use crate::certify::certificate::stringify_numbers;
use crate::certify::{Instance, WitnessInput};
use crate::error::{Error, ParseError, Result};
use crate::generators::GeneratorOutput;
use crate::linalg::{Field, FieldDescriptor, PrimeField, Rationals};
use crate::pointconfig::{PointConfiguration, ProjPoint};
use crate::poly::{dual_to_polynomial, n_quaternary, polynomial_to_dual};

pub const INSTANCE_FORMAT: &str = "waring-cert/instance/v1";
/// Graded, then lexicographic with x0 > x1 > x2 > x3; the first sextic
/// monomials are x0^6, x0^5 x1, x0^5 x2, ...
pub const MONOMIAL_ORDER: &str = "deglex x0>x1>x2>x3";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Entries of `Σ a_i v_6(P_i)`.
    Dual,
    /// Coefficients of the polynomial `Σ a_i L_i^6`.
    Polynomial,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Dual => "dual",
            Convention::Polynomial => "polynomial",
        }
    }
}

pub fn parse_field_descriptor(s: &str) -> std::result::Result<FieldDescriptor, ParseError> {
    let t = s.trim();
    if t == "Q" {
        return Ok(FieldDescriptor::Rational);
    }
    let p = t
        .strip_prefix("F_")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| ParseError::InvalidField(format!("{t:?}: expected \"Q\" or \"F_p\"")))?;
    PrimeField::new(p)?;
    Ok(FieldDescriptor::Prime { p })
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoints {
    Rational(PointConfiguration<Rationals>),
    Prime(PointConfiguration<PrimeField>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyInstance {
    Rational(Instance<Rationals>),
    Prime(Instance<PrimeField>),
}

impl AnyInstance {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            AnyInstance::Rational(_) => FieldDescriptor::Rational,
            AnyInstance::Prime(i) => i.field().descriptor(),
        }
    }
}

/// A parsed file: the raw JSON object plus its field.
pub struct Document {
    pub root: Map<String, Value>,
    pub field: FieldDescriptor,
}

fn shape(path: &str, what: &str) -> ParseError {
    ParseError::Shape(format!("{path}: {what}"))
}

pub fn parse_document(text: &str) -> std::result::Result<Document, ParseError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::Json(e.to_string()))?;
    let Value::Object(root) = v else {
        return Err(shape("$", "expected an object"));
    };
    if let Some(order) = root.get("monomial_order") {
        match order.as_str() {
            Some(MONOMIAL_ORDER) => {}
            Some(other) => {
                return Err(ParseError::MonomialOrder(format!("$.monomial_order: {other:?}, expected {MONOMIAL_ORDER:?}")))
            }
            None => return Err(shape("$.monomial_order", "expected a string")),
        }
    }
    let field = match root.get("field") {
        Some(Value::String(s)) => parse_field_descriptor(s).map_err(|e| shape("$.field", &e.to_string()))?,
        Some(_) => return Err(shape("$.field", "expected a string")),
        None => return Err(shape("$.field", "missing")),
    };
    Ok(Document { root, field })
}

pub fn scalar<F: Field>(field: &F, v: &Value, path: &str) -> std::result::Result<F::Elem, ParseError> {
    match v {
        Value::String(s) => field.parse(s).map_err(|e| shape(path, &e.to_string())),
        Value::Number(_) => Err(shape(path, "numbers must be written as strings")),
        _ => Err(shape(path, "expected a scalar string")),
    }
}

pub fn scalar_vec<F: Field>(field: &F, v: &Value, path: &str, len: Option<usize>) -> std::result::Result<Vec<F::Elem>, ParseError> {
    let Value::Array(items) = v else {
        return Err(shape(path, "expected an array"));
    };
    if let Some(n) = len {
        if items.len() != n {
            return Err(shape(path, &format!("expected {n} entries, found {}", items.len())));
        }
    }
    items.iter().enumerate().map(|(i, x)| scalar(field, x, &format!("{path}[{i}]"))).collect()
}

fn parse_points<F: Field>(field: &F, doc: &Document) -> Result<PointConfiguration<F>> {
    let v = doc.root.get("points").ok_or_else(|| shape("$.points", "missing"))?;
    let Value::Array(items) = v else {
        return Err(shape("$.points", "expected an array").into());
    };
    let mut pts = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let path = format!("$.points[{i}]");
        let c = scalar_vec(field, item, &path, Some(4))?;
        let coords: [F::Elem; 4] = c.try_into().expect("four coordinates");
        let p = ProjPoint::new(field, coords).map_err(|e| Error::Input(format!("{path}: {e}")))?;
        pts.push(p);
    }
    PointConfiguration::new(field, pts)
}

pub fn load_points(text: &str) -> Result<AnyPoints> {
    let doc = parse_document(text)?;
    Ok(match doc.field {
        FieldDescriptor::Rational => AnyPoints::Rational(parse_points(&Rationals, &doc)?),
        FieldDescriptor::Prime { p } => AnyPoints::Prime(parse_points(&PrimeField::new(p)?, &doc)?),
    })
}

fn parse_convention(doc: &Document) -> std::result::Result<Convention, ParseError> {
    match doc.root.get("convention").map(|v| v.as_str()) {
        None | Some(Some("dual")) => Ok(Convention::Dual),
        Some(Some("polynomial")) => Ok(Convention::Polynomial),
        _ => Err(shape("$.convention", "expected \"dual\" or \"polynomial\"")),
    }
}

fn parse_instance<F: Field>(field: &F, doc: &Document) -> Result<Instance<F>> {
    if let Some(fmt) = doc.root.get("format") {
        if fmt.as_str() != Some(INSTANCE_FORMAT) {
            return Err(shape("$.format", &format!("expected {INSTANCE_FORMAT:?}")).into());
        }
    }
    let points = parse_points(field, doc)?;
    let v = doc.root.get("sextic").ok_or_else(|| shape("$.sextic", "missing"))?;
    let raw = scalar_vec(field, v, "$.sextic", Some(n_quaternary(6)))?;
    let phi = match parse_convention(doc)? {
        Convention::Dual => raw,
        Convention::Polynomial => polynomial_to_dual(field, 4, 6, &raw)?,
    };
    Instance::new(phi, points)
}

pub fn load_instance(text: &str) -> Result<AnyInstance> {
    let doc = parse_document(text)?;
    Ok(match doc.field {
        FieldDescriptor::Rational => AnyInstance::Rational(parse_instance(&Rationals, &doc)?),
        FieldDescriptor::Prime { p } => AnyInstance::Prime(parse_instance(&PrimeField::new(p)?, &doc)?),
    })
}

fn strings<F: Field>(field: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|x| field.format(x)).collect()
}

pub fn points_value<F: Field>(a: &PointConfiguration<F>) -> Value {
    let f = a.field();
    Value::Array(a.points().iter().map(|p| json!(strings(f, p.coords()))).collect())
}

pub fn instance_value<F: Field>(inst: &Instance<F>, convention: Convention, metadata: Option<Value>) -> Result<Value> {
    let f = inst.field();
    let sextic = match convention {
        Convention::Dual => inst.phi.clone(),
        Convention::Polynomial => dual_to_polynomial(f, 4, 6, &inst.phi)?,
    };
    let mut root = Map::new();
    root.insert("format".into(), json!(INSTANCE_FORMAT));
    root.insert("monomial_order".into(), json!(MONOMIAL_ORDER));
    root.insert("field".into(), json!(f.descriptor().to_string()));
    root.insert("convention".into(), json!(convention.name()));
    root.insert("points".into(), points_value(&inst.points));
    root.insert("sextic".into(), json!(strings(f, &sextic)));
    if let Some(m) = metadata {
        root.insert("metadata".into(), stringify_numbers(m));
    }
    Ok(Value::Object(root))
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn instance_json<F: Field>(inst: &Instance<F>, convention: Convention) -> Result<String> {
    Ok(to_pretty(&instance_value(inst, convention, None)?))
}

/// The instance with its provenance, expected status, diagnostics and any
/// planted witness as metadata.
pub fn generator_output_json<F: Field>(out: &GeneratorOutput<F>) -> Result<String> {
    let f = out.instance.field();
    let mut meta = Map::new();
    meta.insert("provenance".into(), serde_json::to_value(&out.provenance).expect("json"));
    meta.insert("coefficients".into(), json!(strings(f, &out.coefficients)));
    if let Some(s) = out.expected_status {
        meta.insert("expected_status".into(), serde_json::to_value(s).expect("json"));
    }
    meta.insert("diagnostics".into(), serde_json::to_value(&out.diagnostics).expect("json"));
    if let Some(w) = &out.witness {
        meta.insert(
            "known_witness".into(),
            json!({
                "w_coordinates": strings(f, &w.w_coordinates),
                "quartic": strings(f, w.quartic.coeffs()),
            }),
        );
    }
    Ok(to_pretty(&instance_value(&out.instance, Convention::Dual, Some(Value::Object(meta)))?))
}

/// Accepts a bare witness object, a certificate (its `witness` entry) or a
/// generated instance (its `metadata.known_witness`). A `field` entry, when
/// present, must match.
pub fn load_witness<F: Field>(field: &F, text: &str) -> Result<WitnessInput<F::Elem>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::Json(e.to_string()))?;
    if let Some(Value::String(fd)) = v.get("field") {
        let d = parse_field_descriptor(fd).map_err(|e| shape("$.field", &e.to_string()))?;
        if d != field.descriptor() {
            return Err(Error::Input(format!("field mismatch: witness over {d}, instance over {}", field.descriptor())));
        }
    }
    let (w, path) = if let Some(w) = v.get("witness").filter(|w| !w.is_null()) {
        (w, "$.witness")
    } else if let Some(w) = v.get("metadata").and_then(|m| m.get("known_witness")) {
        (w, "$.metadata.known_witness")
    } else if v.get("witness").is_some() {
        return Err(Error::Input("$.witness: the certificate carries no witness".into()));
    } else {
        (&v, "$")
    };
    if let Some(q) = w.get("quartic") {
        return Ok(WitnessInput::Quartic(scalar_vec(field, q, &format!("{path}.quartic"), Some(n_quaternary(4)))?));
    }
    if let Some(c) = w.get("w_coordinates") {
        return Ok(WitnessInput::WCoordinates(scalar_vec(field, c, &format!("{path}.w_coordinates"), Some(9))?));
    }
    Err(shape(path, "expected \"quartic\" or \"w_coordinates\"").into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_general_instance;

    #[test]
    fn field_descriptors() {
        assert_eq!(parse_field_descriptor("Q").unwrap(), FieldDescriptor::Rational);
        assert_eq!(parse_field_descriptor("F_101").unwrap(), FieldDescriptor::Prime { p: 101 });
        assert!(parse_field_descriptor("F_100").is_err());
        assert!(parse_field_descriptor("R").is_err());
    }

    #[test]
    fn instance_round_trip_in_both_conventions() {
        let out = gen_general_instance(5, 1, &Rationals).unwrap();
        for conv in [Convention::Dual, Convention::Polynomial] {
            let text = instance_json(&out.instance, conv).unwrap();
            assert!(!text.contains(": 1") && !text.contains("[1"), "numbers must be strings");
            let AnyInstance::Rational(back) = load_instance(&text).unwrap() else { panic!("field") };
            assert_eq!(back, out.instance);
        }
    }

    #[test]
    fn power_of_a_linear_form_in_polynomial_convention() {
        // L = x0 + x1: binomial coefficients on the x0, x1 monomials
        let f = Rationals;
        let a = PointConfiguration::from_coords(&f, vec![[1, 1, 0, 0].map(|v| f.from_i64(v))]).unwrap();
        let inst = Instance::from_coefficients(a, &[f.one()]).unwrap();
        let v = instance_value(&inst, Convention::Polynomial, None).unwrap();
        let s = &v["sextic"];
        let basis = crate::poly::basis(4, 6);
        let mut binom = Vec::new();
        for (i, e) in basis.exponents().iter().enumerate() {
            if e[2] == 0 && e[3] == 0 {
                binom.push(s[i].as_str().unwrap().to_string());
            } else {
                assert_eq!(s[i], json!("0"));
            }
        }
        assert_eq!(binom, ["1", "6", "15", "20", "15", "6", "1"]);
    }

    #[test]
    fn positioned_errors() {
        let bad_json = "{\n  \"field\": \"Q\",\n  \"points\": [\n}";
        let e = load_instance(bad_json).unwrap_err().to_string();
        assert!(e.contains("line 4"), "{e}");
        let numeric = r#"{"field": "Q", "points": [["1", "2", 3, "4"]], "sextic": []}"#;
        let e = load_instance(numeric).unwrap_err().to_string();
        assert!(e.contains("$.points[0][2]"), "{e}");
        let order = r#"{"field": "Q", "monomial_order": "grevlex", "points": []}"#;
        assert!(matches!(load_points(order), Err(Error::Parse(ParseError::MonomialOrder(_)))));
        let zero = r#"{"field": "F_7", "points": [["0", "0", "0", "7"]]}"#;
        let e = load_points(zero).unwrap_err().to_string();
        assert!(e.contains("$.points[0]"), "{e}");
    }

    #[test]
    fn witness_field_mismatch() {
        let w = r#"{"field": "F_101", "w_coordinates": ["1","2","3","4","5","6","7","8","9"]}"#;
        assert!(load_witness(&Rationals, w).is_err());
        let f = PrimeField::new(101).unwrap();
        assert_eq!(load_witness(&f, w).unwrap(), WitnessInput::WCoordinates((1..=9).collect()));
    }
}
