//! Line-oriented system definition files.
//!
//! ```text
//! # comment
//! label = cubic rigid system
//! vars: x y
//! dx = -y + x*(x^2 + y^2 - 1)
//! dy = x + y*(x^2 + y^2 - 1)
//! ```
//!
//! `dx`/`dy` always name the first and second component; `d<var>` with a declared variable
//! name is accepted as well. `vars` defaults to `x y` when absent.

use crate::algebra::Vars;
use crate::system::PlanarSystem;

use super::{parse_polynomial, DiagnosticKind, ParseDiagnostic};

/// Textual form of a planar system before parsing the two components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSource {
    pub raw_dx: String,
    pub raw_dy: String,
    pub varnames: (String, String),
    pub label: Option<String>,
    /// Byte offsets of `raw_dx` and `raw_dy` inside the originating file, for diagnostics.
    pub offsets: (usize, usize),
}

impl SystemSource {
    pub fn new(dx: &str, dy: &str, vars: (&str, &str)) -> Self {
        SystemSource {
            raw_dx: dx.to_string(),
            raw_dy: dy.to_string(),
            varnames: (vars.0.to_string(), vars.1.to_string()),
            label: None,
            offsets: (0, 0),
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    /// Renders the source back into the file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        if let Some(l) = &self.label {
            s.push_str(&format!("label = {l}\n"));
        }
        s.push_str(&format!("vars: {} {}\n", self.varnames.0, self.varnames.1));
        s.push_str(&format!("dx = {}\n", self.raw_dx));
        s.push_str(&format!("dy = {}\n", self.raw_dy));
        s
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses both components against the declared variables.
pub fn parse_system(source: &SystemSource) -> Result<PlanarSystem, ParseDiagnostic> {
    let (a, b) = &source.varnames;
    if !is_identifier(a) || !is_identifier(b) {
        return Err(ParseDiagnostic::new(0, DiagnosticKind::Semantic, "variable names must be ASCII identifiers")
            .in_component("vars"));
    }
    if a == b {
        return Err(ParseDiagnostic::new(0, DiagnosticKind::Semantic, format!("variable `{a}` declared twice"))
            .in_component("vars"));
    }
    let vars = Vars::new(a.clone(), b.clone());
    let p = parse_polynomial(&source.raw_dx, &vars)
        .map_err(|e| e.shifted(source.offsets.0).in_component("dx"))?;
    let q = parse_polynomial(&source.raw_dy, &vars)
        .map_err(|e| e.shifted(source.offsets.1).in_component("dy"))?;
    let mut sys = PlanarSystem::new(p, q).expect("parsed against the same variables");
    sys.label = source.label.clone();
    Ok(sys)
}

/// Splits a definition file into its [`SystemSource`].
pub fn parse_system_file(text: &str) -> Result<SystemSource, ParseDiagnostic> {
    let mut vars: Option<(String, String)> = None;
    let mut dx: Option<(String, usize)> = None;
    let mut dy: Option<(String, usize)> = None;
    let mut label = None;
    let mut line_start = 0;
    let mut pending: Vec<(String, String, usize, usize)> = Vec::new();
    for raw in text.split_inclusive('\n') {
        let offset = line_start;
        line_start += raw.len();
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = line.len() - line.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.len() != 2 {
                return Err(ParseDiagnostic::new(
                    offset + lead,
                    DiagnosticKind::Syntax,
                    "`vars:` expects exactly two names",
                )
                .in_component("vars"));
            }
            vars = Some((names[0].to_string(), names[1].to_string()));
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(ParseDiagnostic::new(
                offset + lead,
                DiagnosticKind::Syntax,
                "expected `vars: a b`, `<key> = <value>`",
            ));
        };
        let key = trimmed[..eq].trim().to_string();
        let value_raw = &trimmed[eq + 1..];
        let value_lead = value_raw.len() - value_raw.trim_start().len();
        let value = value_raw.trim().to_string();
        let value_offset = offset + lead + eq + 1 + value_lead;
        if key == "label" {
            label = Some(value.trim_matches('"').to_string());
        } else {
            pending.push((key, value, value_offset, offset + lead));
        }
    }
    let (va, vb) = vars.clone().unwrap_or(("x".to_string(), "y".to_string()));
    for (key, value, value_offset, key_offset) in pending {
        let slot = if key == "dx" || key == format!("d{va}") {
            &mut dx
        } else if key == "dy" || key == format!("d{vb}") {
            &mut dy
        } else {
            return Err(ParseDiagnostic::new(key_offset, DiagnosticKind::Syntax, format!("unknown key `{key}`")));
        };
        if slot.is_some() {
            return Err(ParseDiagnostic::new(key_offset, DiagnosticKind::Syntax, format!("duplicate key `{key}`")));
        }
        *slot = Some((value, value_offset));
    }
    let end = text.len();
    let (raw_dx, off_dx) =
        dx.ok_or_else(|| ParseDiagnostic::new(end, DiagnosticKind::Syntax, "missing `dx = ...`").in_component("dx"))?;
    let (raw_dy, off_dy) =
        dy.ok_or_else(|| ParseDiagnostic::new(end, DiagnosticKind::Syntax, "missing `dy = ...`").in_component("dy"))?;
    Ok(SystemSource { raw_dx, raw_dy, varnames: (va, vb), label, offsets: (off_dx, off_dy) })
}

/// Convenience: reads raw bytes (possibly not UTF-8) into a source.
pub fn parse_system_bytes(bytes: &[u8]) -> Result<SystemSource, ParseDiagnostic> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        ParseDiagnostic::new(e.valid_up_to(), DiagnosticKind::Lex, "file is not valid UTF-8")
    })?;
    parse_system_file(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S2: &str = "\
# linear image of the cubic rigid system
label = s2
vars: u v
dx = -2*u - v/2 + 2*u^3 + u^2*v + u*v^2/4
dy = 4*u + 2*u^2*v + u*v^2 + v^3/4
";

    #[test]
    fn parses_s2_file() {
        let src = parse_system_file(S2).unwrap();
        assert_eq!(src.varnames, ("u".to_string(), "v".to_string()));
        assert_eq!(src.label.as_deref(), Some("s2"));
        let sys = parse_system(&src).unwrap();
        assert_eq!(sys.degree(), 3);
        assert_eq!(sys.vars, Vars::new("u", "v"));
    }

    #[test]
    fn s1_source_has_degree_three() {
        let src = SystemSource::new("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)", ("x", "y"));
        assert_eq!(parse_system(&src).unwrap().degree(), 3);
    }

    #[test]
    fn undeclared_variable_reports_component_and_file_offset() {
        let text = "vars: x y\ndx = x + z\ndy = y\n";
        let src = parse_system_file(text).unwrap();
        let err = parse_system(&src).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::Semantic);
        assert_eq!(err.component.as_deref(), Some("dx"));
        assert_eq!(&text[err.byte_offset..err.byte_offset + 1], "z");
    }

    #[test]
    fn structural_errors() {
        assert!(parse_system_file("vars: x\ndx = x\ndy = y").is_err());
        assert!(parse_system_file("dx = x\n").is_err());
        assert!(parse_system_file("dx = x\ndx = y\ndy = 1").is_err());
        assert!(parse_system_file("hello\n").is_err());
        let same = SystemSource::new("x", "x", ("x", "x"));
        assert_eq!(parse_system(&same).unwrap_err().component.as_deref(), Some("vars"));
        assert!(parse_system_bytes(&[0x64, 0x78, 0xff]).is_err());
    }

    #[test]
    fn named_derivative_keys() {
        let src = parse_system_file("vars: u v\ndu = v\ndv = -u\n").unwrap();
        assert_eq!(src.raw_dx, "v");
        assert_eq!(src.raw_dy, "-u");
    }

    #[test]
    fn round_trip_through_file_format() {
        let src = parse_system_file(S2).unwrap();
        let again = parse_system_file(&src.to_file_string()).unwrap();
        assert_eq!(parse_system(&src).unwrap(), parse_system(&again).unwrap());
    }
}
