use serde_json::Value;

/// Flatten a report into `path: value` lines; arrays of scalars stay inline.
pub fn text(report: &Value) -> String {
    let mut out = String::new();
    walk(report, "", &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn walk(v: &Value, path: &str, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{path}: {s}\n"));
        return;
    }
    match v {
        Value::Object(m) => {
            // checker records collapse to one line each
            if let (Some(Value::String(c)), Some(Value::Bool(p))) = (m.get("check"), m.get("pass")) {
                out.push_str(&format!("{path}{}{c}: {}\n", if path.is_empty() { "" } else { " " }, if *p { "pass" } else { "FAIL" }));
                return;
            }
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, &p, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
