//! Line-oriented text format for bound quiver algebras.
//!
//! ```text
//! # comment
//! name: square
//! vertices: 1 2 3 4
//! arrow b: 1 -> 2
//! arrow c: 1 -> 3
//! arrow d: 2 -> 4
//! arrow e: 3 -> 4
//! relation: b*d - c*e
//! ```

use std::sync::Arc;

use crate::algebra::{Algebra, PathWord, Quiver, Relation};
use crate::error::{Error, Result};
use crate::field::Field;

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses the algebra text and computes its basis.
pub fn parse_algebra<F: Field>(
    text: &str,
    field: F,
    nilpotency_cap: usize,
) -> Result<Arc<Algebra<F>>> {
    let mut name = String::new();
    let mut vertices: Option<Vec<String>> = None;
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    let mut raw_relations: Vec<(usize, usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        let Some((head, rest)) = body.split_once(':') else {
            return Err(syntax(line_no, indent + 1, "expected `keyword: ...`"));
        };
        let rest_col = indent + head.len() + 2;
        let head = head.trim();
        if head == "name" {
            name = rest.trim().to_string();
        } else if head == "vertices" {
            if vertices.is_some() {
                return Err(syntax(line_no, indent + 1, "duplicate `vertices:` line"));
            }
            let vs: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if vs.is_empty() {
                return Err(syntax(line_no, rest_col, "no vertices listed"));
            }
            vertices = Some(vs);
        } else if let Some(arrow_name) = head.strip_prefix("arrow") {
            let arrow_name = arrow_name.trim();
            if arrow_name.is_empty() || !is_identifier(arrow_name) {
                return Err(syntax(
                    line_no,
                    indent + 6,
                    format!("bad arrow name `{arrow_name}`"),
                ));
            }
            let Some((s, t)) = rest.split_once("->") else {
                return Err(syntax(line_no, rest_col, "expected `source -> target`"));
            };
            let (s, t) = (s.trim(), t.trim());
            if s.is_empty()
                || t.is_empty()
                || s.contains(char::is_whitespace)
                || t.contains(char::is_whitespace)
            {
                return Err(syntax(line_no, rest_col, "expected `source -> target`"));
            }
            arrows.push((arrow_name.to_string(), s.to_string(), t.to_string()));
        } else if head == "relation" {
            raw_relations.push((line_no, rest_col, rest.to_string()));
        } else {
            return Err(syntax(
                line_no,
                indent + 1,
                format!("unknown keyword `{head}`"),
            ));
        }
    }

    let vertices = vertices.ok_or_else(|| syntax(1, 1, "missing `vertices:` line"))?;
    let quiver = Quiver::new(&vertices, &arrows)?;
    let mut relations = Vec::new();
    for (line, col, text) in &raw_relations {
        let rel = parse_relation(&field, &quiver, text, *line, *col)?;
        check_relation(&rel, *line)?;
        relations.push(rel);
    }
    Algebra::new(name, field, quiver, relations, nilpotency_cap)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn check_relation<F: Field>(r: &Relation<F>, line: usize) -> Result<()> {
    let len = r.len();
    if r.terms.iter().any(|(_, p)| p.len() != len) {
        return Err(Error::NonHomogeneous {
            line,
            lengths: r.terms.iter().map(|(_, p)| p.len()).collect(),
        });
    }
    if r.terms
        .iter()
        .any(|(_, p)| p.source != r.source() || p.target != r.target())
    {
        return Err(Error::NotParallel { line });
    }
    if len < 2 {
        return Err(Error::NotAdmissible(format!(
            "relation on line {line} has length {len} < 2"
        )));
    }
    Ok(())
}

#[derive(Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Star,
    Plus,
    Minus,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        match c {
            _ if c.is_whitespace() => i += 1,
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                out.push((col, Tok::Number(chars[start..i].iter().collect())));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            _ => return Err(syntax(line, col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

/// Parses `c1 p1 + c2 p2 - ...`, merging repeated paths and dropping zero
/// coefficients.
pub(crate) fn parse_relation<F: Field>(
    field: &F,
    quiver: &Quiver,
    text: &str,
    line: usize,
    col0: usize,
) -> Result<Relation<F>> {
    let toks = tokenize(text, line, col0)?;
    let mut pos = 0;
    let mut terms: Vec<(F::Elem, PathWord)> = Vec::new();
    let end_col = col0 + text.chars().count();
    let mut first = true;
    while pos < toks.len() || first {
        // Sign: leading `+`/`-`, and between terms a mandatory operator.
        let mut negative = false;
        let mut saw_op = false;
        while let Some((_, t @ (Tok::Plus | Tok::Minus))) = toks.get(pos) {
            if *t == Tok::Minus {
                negative = !negative;
            }
            saw_op = true;
            pos += 1;
        }
        if !first && !saw_op {
            let col = toks.get(pos).map_or(end_col, |t| t.0);
            return Err(syntax(line, col, "expected `+` or `-` between terms"));
        }
        first = false;
        let mut coeff = field.one();
        let mut arrows: Vec<usize> = Vec::new();
        let mut expect_factor = true;
        while let Some((col, tok)) = toks.get(pos) {
            match tok {
                Tok::Plus | Tok::Minus if !expect_factor => break,
                Tok::Star if !expect_factor => {
                    expect_factor = true;
                    pos += 1;
                }
                Tok::Number(s) if expect_factor && arrows.is_empty() => {
                    coeff = field.mul(
                        &coeff,
                        &field
                            .parse_elem(s)
                            .map_err(|e| syntax(line, *col, e.to_string()))?,
                    );
                    pos += 1;
                    // A coefficient may be followed by `*` or directly by a path.
                    if matches!(toks.get(pos), Some((_, Tok::Star))) {
                        pos += 1;
                    }
                }
                Tok::Ident(name) if expect_factor => {
                    let a = quiver
                        .arrow(name)
                        .map_err(|_| syntax(line, *col, format!("unknown arrow `{name}`")))?;
                    arrows.push(a);
                    expect_factor = false;
                    pos += 1;
                }
                Tok::Ident(_) => return Err(syntax(line, *col, "expected `*` between arrows")),
                _ => return Err(syntax(line, *col, "unexpected token")),
            }
        }
        if arrows.is_empty() {
            let col = toks.get(pos).map_or(end_col, |t| t.0);
            return Err(syntax(line, col, "expected a path"));
        }
        if expect_factor {
            return Err(syntax(line, end_col, "dangling `*`"));
        }
        let path = PathWord::from_arrows(quiver, &arrows)
            .map_err(|e| syntax(line, col0, e.to_string()))?;
        if negative {
            coeff = field.neg(&coeff);
        }
        match terms.iter_mut().find(|(_, p)| *p == path) {
            Some(t) => t.0 = field.add(&t.0, &coeff),
            None => terms.push((coeff, path)),
        }
    }
    terms.retain(|(c, _)| !field.is_zero(c));
    if terms.is_empty() {
        return Err(Error::NotAdmissible(format!(
            "relation on line {line} is zero"
        )));
    }
    Ok(Relation { terms })
}
