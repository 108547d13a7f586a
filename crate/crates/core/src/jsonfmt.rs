//! Deterministic JSON emission.
//!
//! Machine output must be byte-identical across runs and platforms, so this
//! emitter fixes everything the stdlib and serde leave open: object keys
//! keep insertion order, floats always print as 17-significant-digit
//! scientific notation (lossless for doubles), and non-finite floats become
//! `null`. Parsing stays with serde_json; only emission lives here.

/// A JSON value with deterministic rendering.
#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i128),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Float(f) => write_float(*f, out),
            Json::Str(s) => write_string(s, out),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_string(key, out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

/// 17 significant digits round-trip any f64 exactly; infinities and NaN
/// have no JSON representation and degrade to null.
fn write_float(f: f64, out: &mut String) {
    if f.is_finite() {
        out.push_str(&format!("{f:.16e}"));
    } else {
        out.push_str("null");
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Unsigned values too large for `Json::Int` fall back to exact decimal
/// strings, keeping them machine-parseable without precision loss.
pub fn json_u128(v: u128) -> Json {
    if v <= i128::MAX as u128 {
        Json::Int(v as i128)
    } else {
        Json::Str(v.to_string())
    }
}
