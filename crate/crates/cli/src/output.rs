use crate::Format;
use biboolean::io::Document;
use biboolean::model::MomentMatrix;
use biboolean::positivity::{Inertia, Witness};
use biboolean::rational::{self, Rational};
use serde_json::{json, Map, Value};

/// Result of a verb: machine form, human form, and whether checks passed.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Report {
    pub fn document(doc: &Document) -> Self {
        Report { json: serde_json::to_value(doc).expect("documents serialize"), text: document_text(doc), ok: true }
    }
}

pub fn render(report: &Report, format: Format, float: bool) -> String {
    match format {
        Format::Json => {
            let mut v = report.json.clone();
            if float {
                add_approx(&mut v);
            }
            serde_json::to_string_pretty(&v).expect("plain json") + "\n"
        }
        Format::Text => {
            if float {
                annotate_text(&report.text)
            } else {
                report.text.clone()
            }
        }
    }
}

fn approx(s: &str) -> Option<Value> {
    let r = rational::parse(s).ok()?;
    serde_json::Number::from_f64(rational::to_f64(&r)).map(Value::Number)
}

/// Mirror of a value with every rational string replaced by its decimal, if it has any.
fn approx_of(v: &Value) -> Option<Value> {
    match v {
        Value::String(s) => approx(s),
        Value::Array(items) => {
            let out: Vec<Option<Value>> = items.iter().map(approx_of).collect();
            out.iter()
                .any(Option::is_some)
                .then(|| Value::Array(out.into_iter().map(|x| x.unwrap_or(Value::Null)).collect()))
        }
        Value::Object(map) => {
            let out: Map<String, Value> =
                map.iter().filter_map(|(k, x)| Some((k.clone(), approx(x.as_str()?)?))).collect();
            (!out.is_empty() && out.len() == map.len()).then_some(Value::Object(out))
        }
        _ => None,
    }
}

/// Adds a `<key>_approx` sibling next to every field holding exact values.
fn add_approx(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let extra: Vec<(String, Value)> = map
                .iter()
                .filter(|(k, _)| !k.ends_with("_approx"))
                .filter_map(|(k, x)| Some((format!("{k}_approx"), approx_of(x)?)))
                .collect();
            for x in map.values_mut() {
                add_approx(x);
            }
            map.extend(extra);
        }
        Value::Array(items) => items.iter_mut().for_each(add_approx),
        _ => {}
    }
}

/// Appends `≈ decimal` to text lines whose last token is a non-integer rational.
fn annotate_text(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        out.push_str(line);
        if let Some(last) = line.split_whitespace().last() {
            if last.contains('/') {
                if let Ok(r) = rational::parse(last) {
                    out.push_str(&format!("  (≈ {})", rational::to_f64(&r)));
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn r(x: &Rational) -> String {
    rational::format(x)
}

pub fn document_text(doc: &Document) -> String {
    let mut s = String::new();
    match doc {
        Document::Atomic { atoms } => {
            s.push_str("atomic measure (x, y, weight)\n");
            for a in atoms {
                s.push_str(&format!("{} {} {}\n", a.x, a.y, a.w));
            }
        }
        Document::Table { kind, degree, entries, mass } => {
            s.push_str(&format!("table {kind}, degree {degree}\n"));
            if let Some(mass) = mass {
                s.push_str(&format!("mass {mass}\n"));
            }
            for (k, v) in sorted_slots(entries) {
                s.push_str(&format!("{k}  {v}\n"));
            }
        }
        Document::Ncseries { degree, coeffs, .. } => {
            s.push_str(&format!("series, degree {degree}\n"));
            for (w, v) in by_length(coeffs) {
                s.push_str(&format!("{w}  {v}\n"));
            }
        }
        Document::Distribution { degree, moments, .. } => {
            s.push_str(&format!("distribution, degree {degree}\n"));
            for (w, v) in by_length(moments) {
                s.push_str(&format!("{w}  {v}\n"));
            }
        }
        Document::Series { degree, variables, coeffs } => {
            s.push_str(&format!("series in {}, {}, degree {degree}\n", variables[0], variables[1]));
            for (k, v) in sorted_slots(coeffs) {
                s.push_str(&format!("{k}  {v}\n"));
            }
        }
    }
    s
}

fn sorted_slots(entries: &std::collections::BTreeMap<String, String>) -> Vec<(&String, &String)> {
    let key = |k: &str| -> (usize, usize, usize) {
        let (m, n) = k.split_once(',').unwrap_or((k, "0"));
        let (m, n) = (m.trim().parse().unwrap_or(0), n.trim().parse().unwrap_or(0));
        (m + n, n, m)
    };
    let mut v: Vec<_> = entries.iter().collect();
    v.sort_by_key(|(k, _)| key(k));
    v
}

fn by_length(entries: &std::collections::BTreeMap<String, String>) -> Vec<(&String, &String)> {
    let mut v: Vec<_> = entries.iter().collect();
    v.sort_by_key(|(k, _)| (k.split_whitespace().count(), k.to_string()));
    v
}

pub fn matrix_json(m: &MomentMatrix) -> Value {
    serde_json::to_value(biboolean::io::MatrixJson::from_matrix(m)).expect("plain json")
}

pub fn matrix_text(m: &MomentMatrix) -> String {
    let cells: Vec<Vec<String>> = m.entries.iter().map(|row| row.iter().map(r).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let labels: Vec<String> = m.index.iter().map(|(a, b)| format!("({a},{b})")).collect();
    let lw = labels.iter().map(String::len).max().unwrap_or(1);
    let mut s = String::new();
    for (label, row) in labels.iter().zip(&cells) {
        s.push_str(&format!("{label:>lw$} "));
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn inertia_json(i: &Inertia) -> Value {
    json!({ "plus": i.plus, "zero": i.zero, "minus": i.minus })
}

pub fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::NegativeEvenMoment { m, n, value }) => {
            json!({ "kind": "negative_even_moment", "m": m, "n": n, "value": r(value) })
        }
        Some(Witness::NegativeMinor { indices, value }) => json!({
            "kind": "negative_minor",
            "indices": indices.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
            "value": r(value),
        }),
        Some(Witness::Inertia(i)) => json!({ "kind": "inertia", "inertia": inertia_json(i) }),
    }
}

pub fn witness_text(w: &Option<Witness>) -> String {
    match w {
        None => "witness: none".into(),
        Some(Witness::NegativeEvenMoment { m, n, value }) => format!("witness: M_{{{m},{n}}} = {}", r(value)),
        Some(Witness::NegativeMinor { indices, value }) => {
            let idx: Vec<String> = indices.iter().map(|(a, b)| format!("({a},{b})")).collect();
            format!("witness: minor on {} = {}", idx.join(" "), r(value))
        }
        Some(Witness::Inertia(i)) => format!("witness: inertia (+{}, 0:{}, -{})", i.plus, i.zero, i.minus),
    }
}
