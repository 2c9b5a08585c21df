//! Minimal projective resolutions and projective dimension.

use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::rep::{
    first_syzygy, is_isomorphic, radical_top, IsoOptions, IsoVerdict, ModuleMap, Representation,
};
use crate::torsion::SimpleSet;

/// Default resolution cutoff for an algebra: `2·dim Λ + 4`.
pub fn default_cutoff<F: Field>(algebra: &Algebra<F>) -> usize {
    2 * algebra.dim() + 4
}

/// A minimal projective resolution `... -> P_1 -> P_0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    pub module: Representation<F>,
    /// `terms[i] = P_i`.
    pub terms: Vec<Representation<F>>,
    /// Vertices of the indecomposable summands of each `P_i`.
    pub term_vertices: Vec<Vec<usize>>,
    /// `differentials[0]: P_0 -> M`, `differentials[i]: P_i -> P_{i-1}`.
    pub differentials: Vec<ModuleMap<F>>,
    /// `syzygies[i] = Ω^i(M)`, with `syzygies[0] = M`.
    pub syzygies: Vec<Representation<F>>,
    /// Set when the last computed syzygy is nonzero.
    pub truncated: bool,
}

impl<F: Field> Resolution<F> {
    /// Re-checks exactness at every position and minimality of every
    /// differential from ranks.
    pub fn validate(&self) -> Result<()> {
        for (i, d) in self.differentials.iter().enumerate() {
            d.check()
                .map_err(|e| Error::Verification(format!("differential {i}: {e}")))?;
        }
        if let Some(d0) = self.differentials.first() {
            if !d0.is_surjective() {
                return Err(Error::Verification("augmentation is not surjective".into()));
            }
        }
        for i in 1..self.differentials.len() {
            let (d, prev) = (&self.differentials[i], &self.differentials[i - 1]);
            if !prev.compose(d)?.is_zero() {
                return Err(Error::Verification(format!("d{} ∘ d{} ≠ 0", i - 1, i)));
            }
            // Exactness at P_{i-1}: rank d_i = dim P_{i-1} - rank d_{i-1}.
            if d.rank() + prev.rank() != prev.dom().total_dim() {
                return Err(Error::Verification(format!("not exact at P_{}", i - 1)));
            }
            // Minimality: the image of d_i lies in rad P_{i-1}.
            let rt = radical_top(prev.dom());
            if !rt.top_proj.compose(d)?.is_zero() {
                return Err(Error::Verification(format!(
                    "differential {i} is not radical"
                )));
            }
        }
        if !self.truncated {
            if let Some(last) = self.differentials.last() {
                if !last.is_injective() {
                    return Err(Error::Verification(
                        "last differential is not injective".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of projective terms computed.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Minimal resolution with terms `P_0 .. P_cutoff` at most; stops early at
/// the first zero syzygy.
pub fn minimal_resolution<F: Field>(m: &Representation<F>, cutoff: usize) -> Resolution<F> {
    let mut res = Resolution {
        module: m.clone(),
        terms: Vec::new(),
        term_vertices: Vec::new(),
        differentials: Vec::new(),
        syzygies: vec![m.clone()],
        truncated: false,
    };
    let mut cur = m.clone();
    let mut incl: Option<ModuleMap<F>> = None;
    for _ in 0..=cutoff {
        if cur.is_zero() {
            return res;
        }
        let (next, next_incl, cover) = first_syzygy(&cur);
        let d = match &incl {
            None => cover.epi.clone(),
            Some(i) => i.compose(&cover.epi).expect("composable"),
        };
        res.term_vertices.push(cover.summand_vertices());
        res.terms.push(cover.projective.clone());
        res.differentials.push(d);
        res.syzygies.push(next.clone());
        cur = next;
        incl = Some(next_incl);
    }
    res.truncated = !cur.is_zero();
    res
}

/// Projective dimension, with `-1` for the zero module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdResult {
    MinusOne,
    Finite(usize),
    /// `Ω^offset ≅ Ω^{offset+period}`, both nonzero, so `pd = ∞`.
    InfinitePeriodic {
        offset: usize,
        period: usize,
    },
    /// No termination or repetition up to the cutoff; `pd ≥ bound`.
    AtLeast(usize),
}

impl PdResult {
    /// The value as a signed integer when finite (including `-1`).
    pub fn finite_value(&self) -> Option<i64> {
        match self {
            PdResult::MinusOne => Some(-1),
            PdResult::Finite(d) => Some(*d as i64),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PdResult::InfinitePeriodic { .. })
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, PdResult::AtLeast(_))
    }

    /// Supremum of two projective dimensions; a certified infinity wins over
    /// an undetermined lower bound.
    pub fn max(self, other: PdResult) -> PdResult {
        use PdResult::*;
        match (self, other) {
            (a @ InfinitePeriodic { .. }, _) => a,
            (_, b @ InfinitePeriodic { .. }) => b,
            (AtLeast(a), AtLeast(b)) => AtLeast(a.max(b)),
            (a @ AtLeast(_), _) => a,
            (_, b @ AtLeast(_)) => b,
            (Finite(a), Finite(b)) => Finite(a.max(b)),
            (a @ Finite(_), MinusOne) => a,
            (MinusOne, b) => b,
        }
    }
}

impl fmt::Display for PdResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdResult::MinusOne => write!(f, "-1"),
            PdResult::Finite(d) => write!(f, "{d}"),
            PdResult::InfinitePeriodic { offset, period } => {
                write!(f, "inf(periodic {offset},{period})")
            }
            PdResult::AtLeast(b) => write!(f, ">={b}"),
        }
    }
}

/// A projective dimension verdict with the witness for periodicity.
#[derive(Clone, Debug)]
pub struct PdWitness<F: Field> {
    pub result: PdResult,
    /// `Ω^offset -> Ω^{offset+period}` when periodic.
    pub witness: Option<ModuleMap<F>>,
    pub syzygies: Vec<Representation<F>>,
}

/// Projective dimension by minimal resolution, detecting infinite
/// dimension through an isomorphism between two nonzero syzygies.
pub fn projective_dimension_with_witness<F: Field>(
    m: &Representation<F>,
    cutoff: usize,
    iso: IsoOptions,
) -> Result<PdWitness<F>> {
    if m.is_zero() {
        return Ok(PdWitness {
            result: PdResult::MinusOne,
            witness: None,
            syzygies: vec![m.clone()],
        });
    }
    let mut syz = vec![m.clone()];
    for k in 1..=cutoff + 1 {
        let next = first_syzygy(&syz[k - 1]).0;
        if next.is_zero() {
            syz.push(next);
            return Ok(PdWitness {
                result: PdResult::Finite(k - 1),
                witness: None,
                syzygies: syz,
            });
        }
        for j in 0..k {
            if syz[j].dims() != next.dims() {
                continue;
            }
            if let IsoVerdict::Isomorphic(w) = is_isomorphic(&syz[j], &next, iso)? {
                if !w.is_isomorphism() || w.check().is_err() {
                    return Err(Error::Verification(
                        "isomorphism witness failed to re-verify".into(),
                    ));
                }
                syz.push(next);
                return Ok(PdWitness {
                    result: PdResult::InfinitePeriodic {
                        offset: j,
                        period: k - j,
                    },
                    witness: Some(w),
                    syzygies: syz,
                });
            }
        }
        syz.push(next);
    }
    Ok(PdWitness {
        result: PdResult::AtLeast(cutoff + 1),
        witness: None,
        syzygies: syz,
    })
}

pub fn projective_dimension<F: Field>(m: &Representation<F>, cutoff: usize) -> Result<PdResult> {
    Ok(projective_dimension_with_witness(m, cutoff, IsoOptions::default())?.result)
}

/// Projective dimensions of all simple modules, in vertex order.
pub fn simple_pds<F: Field>(algebra: &Arc<Algebra<F>>, cutoff: usize) -> Result<Vec<PdResult>> {
    use rayon::prelude::*;
    (0..algebra.num_vertices())
        .into_par_iter()
        .map(|v| projective_dimension(&Representation::simple(algebra, v), cutoff))
        .collect()
}

/// Maximum of the projective dimensions of the simples.
pub fn global_dimension<F: Field>(algebra: &Arc<Algebra<F>>, cutoff: usize) -> Result<PdResult> {
    Ok(fold_max(simple_pds(algebra, cutoff)?))
}

fn fold_max(pds: impl IntoIterator<Item = PdResult>) -> PdResult {
    pds.into_iter().fold(PdResult::MinusOne, PdResult::max)
}

/// `pd V` as the supremum over the simples in `V`; `-1` for `V = ∅`.
pub fn pd_set<F: Field>(
    algebra: &Arc<Algebra<F>>,
    v: &SimpleSet,
    cutoff: usize,
) -> Result<PdResult> {
    let mut acc = PdResult::MinusOne;
    for i in v.iter() {
        acc = acc.max(projective_dimension(
            &Representation::simple(algebra, i),
            cutoff,
        )?);
    }
    Ok(acc)
}

/// `pd V` read off a precomputed table of simple projective dimensions.
pub fn pd_set_from_table(table: &[PdResult], v: &SimpleSet) -> PdResult {
    fold_max(v.iter().map(|i| table[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parse::parse_algebra;

    #[test]
    fn a2_resolution() {
        let a = parse_algebra(
            "vertices: 1 2\narrow a: 1 -> 2\n",
            PrimeField::default(),
            64,
        )
        .unwrap();
        let s1 = Representation::simple(&a, 0);
        let res = minimal_resolution(&s1, 5);
        assert_eq!(res.term_vertices, vec![vec![0], vec![1]]);
        assert!(!res.truncated);
        res.validate().unwrap();
        assert_eq!(global_dimension(&a, 5).unwrap(), PdResult::Finite(1));
    }

    #[test]
    fn dual_numbers_periodic() {
        let a = parse_algebra(
            "vertices: 1\narrow x: 1 -> 1\nrelation: x*x\n",
            PrimeField::default(),
            64,
        )
        .unwrap();
        let s = Representation::simple(&a, 0);
        let res = minimal_resolution(&s, 5);
        assert!(res.truncated);
        assert_eq!(res.terms.len(), 6);
        res.validate().unwrap();
        let pd = projective_dimension(&s, 5).unwrap();
        assert_eq!(
            pd,
            PdResult::InfinitePeriodic {
                offset: 0,
                period: 1
            }
        );
        assert_eq!(pd.to_string(), "inf(periodic 0,1)");
    }

    #[test]
    fn zero_and_empty() {
        let a = parse_algebra("vertices: 1 2\n", PrimeField::default(), 64).unwrap();
        assert_eq!(
            projective_dimension(&Representation::zero(&a), 3).unwrap(),
            PdResult::MinusOne
        );
        assert_eq!(
            pd_set(&a, &SimpleSet::empty(), 3).unwrap(),
            PdResult::MinusOne
        );
        assert_eq!(global_dimension(&a, 3).unwrap(), PdResult::Finite(0));
    }
}
