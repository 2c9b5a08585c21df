//! Text and JSON forms of modules, maps and exact chains, plus symbolic
//! module names such as `S1`, `P(2)` or `rad^2 P1`.
//!
//! Text format:
//!
//! ```text
//! dims: 1=2 2=1
//! matrix a: [[1,0]]
//! ```
//!
//! Matrices are row-major with shape (dim at target) × (dim at source).
//! Arrows without a `matrix` line act as zero.

use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::constructions::LongExactChain;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::rep::{radical_power, ModuleMap, Representation};

fn format_matrix<F: Field>(m: &Matrix<F>) -> String {
    let f = m.field();
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let items: Vec<String> = m.row(r).iter().map(|x| f.format_elem(x)).collect();
            format!("[{}]", items.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn parse_matrix<F: Field>(
    field: &F,
    text: &str,
    rows: usize,
    cols: usize,
    line: usize,
) -> Result<Matrix<F>> {
    let err = |msg: String| Error::Syntax { line, col: 1, msg };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err("matrix must be enclosed in brackets".into()))?;
    let row_texts: Vec<&str> = if inner.is_empty() {
        Vec::new()
    } else {
        let body = inner
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| err("matrix rows must be enclosed in brackets".into()))?;
        body.split("],[").collect()
    };
    if row_texts.len() != rows {
        return Err(err(format!(
            "expected {rows} rows, found {}",
            row_texts.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (r, row) in row_texts.iter().enumerate() {
        let entries: Vec<&str> = if row.is_empty() {
            Vec::new()
        } else {
            row.split(',').collect()
        };
        if entries.len() != cols {
            return Err(err(format!(
                "row {} has {} entries, expected {cols}",
                r + 1,
                entries.len()
            )));
        }
        for e in entries {
            data.push(field.parse_elem(e)?);
        }
    }
    Ok(Matrix::from_rows(field, rows, cols, data))
}

/// Canonical text form; [`parse_module`] inverts it exactly.
pub fn emit_module<F: Field>(m: &Representation<F>) -> String {
    let q = m.algebra().quiver();
    let dims: Vec<String> = (0..q.num_vertices())
        .map(|v| format!("{}={}", q.vertex_name(v), m.dim_at(v)))
        .collect();
    let mut s = format!("dims: {}\n", dims.join(" "));
    for (a, arrow) in q.arrows().iter().enumerate() {
        let _ = writeln!(s, "matrix {}: {}", arrow.name, format_matrix(m.action(a)));
    }
    s
}

/// Parses the text form, validating the relations.
pub fn parse_module<F: Field>(algebra: &Arc<Algebra<F>>, text: &str) -> Result<Representation<F>> {
    let q = algebra.quiver();
    let field = algebra.field();
    let mut dims: Option<Vec<usize>> = None;
    let mut mats: Vec<Option<Matrix<F>>> = vec![None; q.num_arrows()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("dims:") {
            if dims.is_some() {
                return Err(Error::Syntax {
                    line,
                    col: 1,
                    msg: "repeated `dims:` line".into(),
                });
            }
            let mut d = vec![0; q.num_vertices()];
            for item in rest.split_whitespace() {
                let (name, val) = item.split_once('=').ok_or_else(|| Error::Syntax {
                    line,
                    col: 1,
                    msg: format!("expected `vertex=dim`, found `{item}`"),
                })?;
                d[q.vertex(name)?] = val.parse().map_err(|_| Error::Syntax {
                    line,
                    col: 1,
                    msg: format!("bad dimension `{val}`"),
                })?;
            }
            dims = Some(d);
        } else if let Some(rest) = content.strip_prefix("matrix ") {
            let d = dims.as_ref().ok_or_else(|| Error::Syntax {
                line,
                col: 1,
                msg: "`matrix` before `dims:`".into(),
            })?;
            let (name, body) = rest.split_once(':').ok_or_else(|| Error::Syntax {
                line,
                col: 1,
                msg: "expected `matrix <arrow>: [[...]]`".into(),
            })?;
            let a = q.arrow(name.trim())?;
            if mats[a].is_some() {
                return Err(Error::Duplicate(name.trim().to_string()));
            }
            let arrow = &q.arrows()[a];
            mats[a] = Some(parse_matrix(
                field,
                body,
                d[arrow.target],
                d[arrow.source],
                line,
            )?);
        } else {
            return Err(Error::Syntax {
                line,
                col: 1,
                msg: format!("unrecognized line `{content}`"),
            });
        }
    }
    let dims = dims.ok_or_else(|| Error::InvalidModule("missing `dims:` line".into()))?;
    let action = mats
        .into_iter()
        .zip(q.arrows())
        .map(|(m, arrow)| {
            m.unwrap_or_else(|| Matrix::zeros(field, dims[arrow.target], dims[arrow.source]))
        })
        .collect();
    Representation::new(algebra.clone(), dims, action)
}

/// Resolves `S<v>`, `P<v>`, `rad^k P<v>` (parentheses optional), `Lambda`,
/// or else reads a module file at that path.
pub fn resolve_module<F: Field>(
    algebra: &Arc<Algebra<F>>,
    spec: &str,
) -> Result<Representation<F>> {
    let s = spec.trim();
    let strip = |x: &str| -> String {
        let x = x.trim();
        x.strip_prefix('(')
            .and_then(|y| y.strip_suffix(')'))
            .unwrap_or(x)
            .trim()
            .to_string()
    };
    if s == "Lambda" || s == "Λ" {
        return Ok(Representation::regular(algebra));
    }
    if let Some(rest) = s.strip_prefix("rad^") {
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let k: usize = digits
            .parse()
            .map_err(|_| Error::Parameter(format!("bad radical power in `{s}`")))?;
        let tail = rest[digits.len()..].trim();
        let name = tail
            .strip_prefix('P')
            .ok_or_else(|| Error::Parameter(format!("expected `rad^k P<vertex>`, got `{s}`")))?;
        let p = Representation::projective(algebra, algebra.quiver().vertex(&strip(name))?);
        return Ok(radical_power(&p, k).0);
    }
    let q = algebra.quiver();
    for (prefix, simple) in [("S", true), ("P", false)] {
        if let Some(name) = s.strip_prefix(prefix) {
            if let Ok(v) = q.vertex(&strip(name)) {
                return Ok(if simple {
                    Representation::simple(algebra, v)
                } else {
                    Representation::projective(algebra, v)
                });
            }
        }
    }
    match std::fs::read_to_string(s) {
        Ok(text) => parse_module(algebra, &text),
        Err(_) => Err(Error::Parameter(format!(
            "`{s}` is neither S<v>, P<v>, rad^k P<v>, Lambda nor a readable module file"
        ))),
    }
}

fn elem_json<F: Field>(f: &F, x: &F::Elem) -> Value {
    let s = f.format_elem(x);
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| elem_json(f, x)).collect()))
            .collect(),
    )
}

fn matrix_from_json<F: Field>(field: &F, v: &Value, rows: usize, cols: usize) -> Result<Matrix<F>> {
    let bad = |msg: &str| Error::InvalidModule(format!("matrix JSON: {msg}"));
    let rs = v
        .as_array()
        .ok_or_else(|| bad("expected an array of rows"))?;
    if rs.len() != rows {
        return Err(bad(&format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in rs {
        let es = r.as_array().ok_or_else(|| bad("row is not an array"))?;
        if es.len() != cols {
            return Err(bad(&format!("expected {cols} columns, found {}", es.len())));
        }
        for e in es {
            let text = match e {
                Value::Number(n) => n.to_string(),
                Value::String(s) => s.clone(),
                _ => return Err(bad("entry is neither a number nor a string")),
            };
            data.push(field.parse_elem(&text)?);
        }
    }
    Ok(Matrix::from_rows(field, rows, cols, data))
}

pub fn module_to_json<F: Field>(m: &Representation<F>) -> Value {
    let q = m.algebra().quiver();
    let actions: Vec<Value> = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| json!({"arrow": arrow.name, "matrix": matrix_json(m.action(a))}))
        .collect();
    json!({"dims": m.dims(), "actions": actions})
}

pub fn module_from_json<F: Field>(
    algebra: &Arc<Algebra<F>>,
    v: &Value,
) -> Result<Representation<F>> {
    let q = algebra.quiver();
    let dims: Vec<usize> = serde_json::from_value(v["dims"].clone())
        .map_err(|e| Error::InvalidModule(format!("dims: {e}")))?;
    if dims.len() != q.num_vertices() {
        return Err(Error::InvalidModule(format!(
            "{} dimensions for {} vertices",
            dims.len(),
            q.num_vertices()
        )));
    }
    let mut mats: Vec<Option<Matrix<F>>> = vec![None; q.num_arrows()];
    for item in v["actions"].as_array().map(Vec::as_slice).unwrap_or(&[]) {
        let name = item["arrow"]
            .as_str()
            .ok_or_else(|| Error::InvalidModule("action without an arrow name".into()))?;
        let a = q.arrow(name)?;
        let arrow = &q.arrows()[a];
        mats[a] = Some(matrix_from_json(
            algebra.field(),
            &item["matrix"],
            dims[arrow.target],
            dims[arrow.source],
        )?);
    }
    let action = mats
        .into_iter()
        .zip(q.arrows())
        .map(|(m, arrow)| {
            m.unwrap_or_else(|| {
                Matrix::zeros(algebra.field(), dims[arrow.target], dims[arrow.source])
            })
        })
        .collect();
    Representation::new(algebra.clone(), dims, action)
}

/// Per-vertex blocks of a map.
pub fn map_to_json<F: Field>(m: &ModuleMap<F>) -> Value {
    Value::Array(m.blocks().iter().map(matrix_json).collect())
}

pub fn map_from_json<F: Field>(
    dom: &Representation<F>,
    cod: &Representation<F>,
    v: &Value,
) -> Result<ModuleMap<F>> {
    let blocks = v
        .as_array()
        .ok_or_else(|| Error::InvalidMap("expected an array of blocks".into()))?;
    if blocks.len() != dom.dims().len() {
        return Err(Error::InvalidMap("wrong number of blocks".into()));
    }
    let mats = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| matrix_from_json(dom.field(), b, cod.dim_at(i), dom.dim_at(i)))
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::new(dom.clone(), cod.clone(), mats)
}

pub fn chain_to_json<F: Field>(c: &LongExactChain<F>) -> Value {
    json!({
        "target": module_to_json(&c.target),
        "modules": c.modules.iter().map(module_to_json).collect::<Vec<_>>(),
        "maps": c.maps.iter().map(map_to_json).collect::<Vec<_>>(),
    })
}

/// Rebuilds a chain; maps are checked to be module maps but exactness is
/// left to [`LongExactChain::validate`].
pub fn chain_from_json<F: Field>(
    algebra: &Arc<Algebra<F>>,
    v: &Value,
) -> Result<LongExactChain<F>> {
    let target = module_from_json(algebra, &v["target"])?;
    let modules = v["modules"]
        .as_array()
        .ok_or_else(|| Error::InvalidModule("chain without `modules`".into()))?
        .iter()
        .map(|m| module_from_json(algebra, m))
        .collect::<Result<Vec<_>>>()?;
    let map_vals = v["maps"]
        .as_array()
        .ok_or_else(|| Error::InvalidMap("chain without `maps`".into()))?;
    if map_vals.len() != modules.len() {
        return Err(Error::InvalidMap(
            "chain has mismatched module and map counts".into(),
        ));
    }
    let maps = map_vals
        .iter()
        .enumerate()
        .map(|(i, mv)| {
            let cod = if i == 0 { &target } else { &modules[i - 1] };
            map_from_json(&modules[i], cod, mv)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LongExactChain {
        modules,
        maps,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn text_round_trip() {
        let a = corpus::example1(4)
            .unwrap()
            .build(PrimeField::default())
            .unwrap();
        let p = Representation::projective(&a, 0);
        let text = emit_module(&p);
        let back = parse_module(&a, &text).unwrap();
        assert_eq!(back, p);
        assert_eq!(emit_module(&back), text);
    }

    #[test]
    fn rational_entries() {
        let a = corpus::a2().build(Rationals).unwrap();
        let m = parse_module(&a, "dims: 1=1 2=1\nmatrix a: [[-3/2]]\n").unwrap();
        assert_eq!(emit_module(&m), "dims: 1=1 2=1\nmatrix a: [[-3/2]]\n");
        let j = module_to_json(&m);
        assert_eq!(module_from_json(&a, &j).unwrap(), m);
    }

    #[test]
    fn symbolic_names() {
        let a = corpus::a2().build(PrimeField::default()).unwrap();
        assert_eq!(resolve_module(&a, "S1").unwrap().dims(), &[1, 0]);
        assert_eq!(resolve_module(&a, "P(1)").unwrap().dims(), &[1, 1]);
        assert_eq!(resolve_module(&a, "rad^1 P1").unwrap().dims(), &[0, 1]);
        assert_eq!(resolve_module(&a, "Lambda").unwrap().dims(), &[1, 2]);
        assert!(resolve_module(&a, "Q7").is_err());
    }

    #[test]
    fn malformed_input() {
        let a = corpus::a2().build(PrimeField::default()).unwrap();
        assert!(parse_module(&a, "dims: 1=1 2=1\nmatrix a: [[1,2]]\n").is_err());
        assert!(parse_module(&a, "matrix a: [[1]]\n").is_err());
        assert!(parse_module(&a, "dims: 3=1\n").is_err());
    }
}
