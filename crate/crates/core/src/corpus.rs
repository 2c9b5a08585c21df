//! Generators for the named example algebras.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{Algebra, DEFAULT_NILPOTENCY_CAP};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::parse::parse_algebra;

/// A generated algebra description plus any parameter warnings.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub text: String,
    pub warnings: Vec<String>,
}

impl CorpusEntry {
    pub fn build<F: Field>(&self, field: F) -> Result<Arc<Algebra<F>>> {
        parse_algebra(&self.text, field, DEFAULT_NILPOTENCY_CAP)
    }
}

pub const CORPUS_NAMES: [&str; 5] = ["example1", "example2", "A2", "dual_numbers", "semisimple"];

/// Dispatches on a corpus name; `m`, `n`, `k` are used as the family needs.
pub fn generate(
    name: &str,
    m: Option<usize>,
    n: Option<usize>,
    k: Option<usize>,
) -> Result<CorpusEntry> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::Parameter(format!("{name} needs --{flag}")))
    };
    match name {
        "example1" => example1(need(m, "m")?),
        "example2" => example2(need(m, "m")?, need(n, "n")?),
        "A2" | "a2" => Ok(a2()),
        "dual_numbers" => Ok(dual_numbers()),
        "semisimple" => semisimple(need(k, "k")?),
        other => Err(Error::Parameter(format!(
            "unknown corpus algebra `{other}` (expected one of {})",
            CORPUS_NAMES.join(", ")
        ))),
    }
}

/// Vertices `1..m+2`; a loop `a1` at 1, arrows `a2: 1 -> 2`,
/// `a_k: k-1 -> k` for `3 ≤ k ≤ m`, and `a_{m+1}`, `a_{m+2}` from 1 to
/// `m+1`, `m+2`. Relations kill `a1` followed by anything and the long path
/// `a2 a3 ... am`.
pub fn example1(m: usize) -> Result<CorpusEntry> {
    if m < 3 {
        return Err(Error::Parameter(format!("example1 needs m >= 3, got {m}")));
    }
    let mut warnings = Vec::new();
    if m < 10 {
        warnings.push(format!(
            "example1 is stated for m >= 10; generating m = {m}"
        ));
    }
    let mut s = String::new();
    let _ = writeln!(s, "name: example1(m={m})");
    let verts: Vec<String> = (1..=m + 2).map(|i| i.to_string()).collect();
    let _ = writeln!(s, "vertices: {}", verts.join(" "));
    let _ = writeln!(s, "arrow a1: 1 -> 1");
    let _ = writeln!(s, "arrow a2: 1 -> 2");
    for k in 3..=m {
        let _ = writeln!(s, "arrow a{k}: {} -> {k}", k - 1);
    }
    let _ = writeln!(s, "arrow a{}: 1 -> {}", m + 1, m + 1);
    let _ = writeln!(s, "arrow a{}: 1 -> {}", m + 2, m + 2);
    let _ = writeln!(s, "relation: a1*a1");
    let _ = writeln!(s, "relation: a1*a{}", m + 1);
    let _ = writeln!(s, "relation: a1*a{}", m + 2);
    let _ = writeln!(s, "relation: a1*a2");
    let long: Vec<String> = (2..=m).map(|k| format!("a{k}")).collect();
    let _ = writeln!(s, "relation: {}", long.join("*"));
    Ok(CorpusEntry { text: s, warnings })
}

/// Vertices `1..n+4`; loop `alpha` at 1, `beta: 1 -> 2`, a double arrow
/// `gamma1, gamma2: 2 -> 3`, `delta: 3 -> 4`, a chain `rho_k: k+3 -> k+4`,
/// and a double arrow `mu1, mu2: n+4 -> 1`.
///
/// The listed generators alone leave the cycle through `beta` and `mu1`
/// alive in every power, so `mu1*beta` is added as a generator; with it the
/// algebra is finite-dimensional and `mu2*beta` follows.
pub fn example2(m: usize, n: usize) -> Result<CorpusEntry> {
    if m < 3 {
        return Err(Error::Parameter(format!("example2 needs m >= 3, got {m}")));
    }
    if n <= 2 * m + 1 {
        return Err(Error::Parameter(format!(
            "example2 needs n > 2m+1, got m = {m}, n = {n}"
        )));
    }
    let mut warnings = Vec::new();
    if m < 5 {
        warnings.push(format!("example2 is stated for m >= 5; generating m = {m}"));
    }
    let mut s = String::new();
    let _ = writeln!(s, "name: example2(m={m},n={n})");
    let verts: Vec<String> = (1..=n + 4).map(|i| i.to_string()).collect();
    let _ = writeln!(s, "vertices: {}", verts.join(" "));
    let _ = writeln!(s, "arrow alpha: 1 -> 1");
    let _ = writeln!(s, "arrow beta: 1 -> 2");
    let _ = writeln!(s, "arrow gamma1: 2 -> 3");
    let _ = writeln!(s, "arrow gamma2: 2 -> 3");
    let _ = writeln!(s, "arrow delta: 3 -> 4");
    for k in 1..=n {
        let _ = writeln!(s, "arrow rho{k}: {} -> {}", k + 3, k + 4);
    }
    let _ = writeln!(s, "arrow mu1: {} -> 1", n + 4);
    let _ = writeln!(s, "arrow mu2: {} -> 1", n + 4);
    let power: Vec<&str> = vec!["alpha"; m];
    let _ = writeln!(s, "relation: {}", power.join("*"));
    let _ = writeln!(s, "relation: alpha*beta");
    let _ = writeln!(s, "relation: gamma1*delta - gamma2*delta");
    let _ = writeln!(s, "relation: rho{n}*mu1*alpha");
    let _ = writeln!(s, "relation: rho{n}*mu2*alpha");
    let _ = writeln!(s, "relation: mu1*beta - mu2*beta");
    let _ = writeln!(s, "relation: mu1*beta");
    Ok(CorpusEntry { text: s, warnings })
}

pub fn a2() -> CorpusEntry {
    CorpusEntry {
        text: "name: A2\nvertices: 1 2\narrow a: 1 -> 2\n".into(),
        warnings: Vec::new(),
    }
}

pub fn dual_numbers() -> CorpusEntry {
    CorpusEntry {
        text: "name: dual_numbers\nvertices: 1\narrow x: 1 -> 1\nrelation: x*x\n".into(),
        warnings: Vec::new(),
    }
}

pub fn semisimple(k: usize) -> Result<CorpusEntry> {
    if k == 0 {
        return Err(Error::Parameter("semisimple needs k >= 1".into()));
    }
    let verts: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    Ok(CorpusEntry {
        text: format!("name: semisimple(k={k})\nvertices: {}\n", verts.join(" ")),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn example1_shape() {
        let a = example1(10).unwrap().build(PrimeField::default()).unwrap();
        assert_eq!(a.num_vertices(), 12);
        assert_eq!(a.num_arrows(), 12);
        assert_eq!(a.relations().len(), 5);
        assert_eq!(a.nilpotency_degree(), 9);
    }

    #[test]
    fn example2_shape() {
        let a = example2(5, 12)
            .unwrap()
            .build(PrimeField::default())
            .unwrap();
        assert_eq!(a.num_vertices(), 16);
        assert_eq!(a.nilpotency_degree(), 17);
    }

    #[test]
    fn parameter_checks() {
        assert!(example1(2).is_err());
        assert!(!example1(4).unwrap().warnings.is_empty());
        assert!(example2(5, 11).is_err());
        assert!(semisimple(0).is_err());
        assert!(generate("nope", None, None, None).is_err());
    }
}
