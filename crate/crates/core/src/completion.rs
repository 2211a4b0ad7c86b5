//! Inductive completion of a boundary-plus-coproduct pair to a square-zero
//! coderivation, one tensor degree and one skeleton dimension at a time.
//!
//! At each level the obstruction is computed by expanding the square of the
//! partial structure; it vanishes on vertices and is discharged on an
//! `r`-cell by a canonical solve against the unary part over the closure of
//! that cell, so the result is local and deterministic.

use crate::linalg::{self, RationalMatrix};
use crate::simplicial::{CellId, SimplicialComplex};
use crate::tensor::{derivation_on_bare, Structure, TensorElement, TensorWord};
use crate::{Error, Rat};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Which binary coproduct seeds the structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoproductMode {
    StrictAw,
    Symmetrized,
}

impl CoproductMode {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "strict-aw" => Ok(CoproductMode::StrictAw),
            "symmetrized" => Ok(CoproductMode::Symmetrized),
            other => Err(Error::Parse(format!("unknown coproduct mode `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoproductMode::StrictAw => "strict-aw",
            CoproductMode::Symmetrized => "symmetrized",
        }
    }
}

/// Boundary and chosen coproduct, suspension-adjusted, no higher components.
pub fn seed_structure(
    complex: &SimplicialComplex,
    mode: CoproductMode,
    n_max: usize,
) -> Structure {
    let aw = complex.aw_coproduct();
    let coproduct = match mode {
        CoproductMode::StrictAw => aw,
        CoproductMode::Symmetrized => aw.symmetrize(complex),
    };
    Structure::from_geometric(complex, &coproduct, n_max)
}

/// Solver statistics for one level of an inductive construction.
#[derive(Clone, Debug, Serialize)]
pub struct LevelStats {
    pub tensor_degree: usize,
    pub cell_dim: usize,
    pub cells: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub nonzero_corrections: usize,
}

/// Audit trail of an inductive construction.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstructionTrace {
    pub levels: Vec<LevelStats>,
    pub dropped_terms: usize,
}

/// Expand the square of the structure on a single cell, keeping outputs of
/// the given tensor degree only.
fn square_component(
    complex: &SimplicialComplex,
    structure: &Structure,
    cell: CellId,
    degree: usize,
) -> TensorElement {
    let single = TensorWord::bare(vec![cell]);
    let once = derivation_on_bare(complex, structure, &single, &crate::rat(1, 1), degree);
    let mut out = TensorElement::zero();
    for (w, c) in &once.terms {
        let piece = derivation_on_bare(complex, structure, w, c, degree);
        for (w2, c2) in &piece.terms {
            if w2.len() == degree {
                out.add_term(w2.clone(), c2.clone(), usize::MAX);
            }
        }
    }
    out
}

/// Candidate bare words over the closure with the prescribed total geometric
/// dimension, in deterministic order.
fn bare_candidates(
    complex: &SimplicialComplex,
    closure: &[CellId],
    length: usize,
    total_dim: i64,
) -> Vec<TensorWord> {
    fn rec(
        complex: &SimplicialComplex,
        closure: &[CellId],
        length: usize,
        remaining: i64,
        word: &mut Vec<CellId>,
        out: &mut Vec<TensorWord>,
    ) {
        if word.len() == length {
            if remaining == 0 {
                out.push(TensorWord::bare(word.clone()));
            }
            return;
        }
        let left = (length - word.len() - 1) as i64;
        for &c in closure {
            let d = complex.dim_of(c) as i64;
            let max_rest = left * complex.dim() as i64;
            if remaining - d < 0 || remaining - d > max_rest {
                continue;
            }
            word.push(c);
            rec(complex, closure, length, remaining - d, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    let mut word: Vec<CellId> = Vec::with_capacity(length);
    rec(complex, closure, length, total_dim, &mut word, &mut out);
    out
}

/// Solve `op(x) = rhs` for `x` in the span of the candidate words, returning
/// the canonical (adjoint-image) solution coefficients.
pub fn solve_on_words<F>(
    candidates: &[TensorWord],
    op: F,
    rhs: &TensorElement,
) -> Result<Option<Vec<Rat>>, Error>
where
    F: Fn(&TensorWord) -> TensorElement,
{
    let mut row_of: BTreeMap<TensorWord, usize> = BTreeMap::new();
    let mut columns: Vec<TensorElement> = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let image = op(cand);
        for w in image.terms.keys() {
            let next = row_of.len();
            row_of.entry(w.clone()).or_insert(next);
        }
        columns.push(image);
    }
    for w in rhs.terms.keys() {
        let next = row_of.len();
        row_of.entry(w.clone()).or_insert(next);
    }
    let mut a = RationalMatrix::zero(row_of.len(), candidates.len());
    for (j, image) in columns.iter().enumerate() {
        for (w, c) in &image.terms {
            a.add_to(row_of[w], j, c.clone());
        }
    }
    let mut b = vec![Rat::zero(); row_of.len()];
    for (w, c) in &rhs.terms {
        b[row_of[w]] = c.clone();
    }
    linalg::canonical_solve(&a, &b)
}

/// Complete the seeded structure to one with square zero up to tensor degree
/// `n_max`, by the double induction over tensor degree and skeleton.
pub fn complete_local_coalgebra(
    complex: &SimplicialComplex,
    structure: &mut Structure,
    n_max: usize,
) -> Result<ConstructionTrace, Error> {
    let mut trace = ConstructionTrace::default();
    for k in 3..=n_max {
        for r in 0..=complex.dim() {
            let cells = complex.cells_of_dim(r);
            let mut stats = LevelStats {
                tensor_degree: k,
                cell_dim: r,
                cells: cells.len(),
                unknowns: 0,
                equations: 0,
                nonzero_corrections: 0,
            };
            for &cell in cells {
                let mut eps = square_component(complex, structure, cell, k);
                if r == 0 {
                    if !eps.is_zero() {
                        return Err(Error::Obstructed(format!(
                            "square residual at tensor degree {k} does not vanish on vertex {}",
                            complex.display_name(cell)
                        )));
                    }
                    continue;
                }
                if eps.is_zero() {
                    continue;
                }
                eps.scale(&crate::rat(-1, 1));
                let closure = complex.closure(cell)?;
                let total_dim = complex.dim_of(cell) as i64 + k as i64 - 2;
                let candidates = bare_candidates(complex, &closure, k, total_dim);
                stats.unknowns += candidates.len();
                stats.equations += eps.terms.len();
                let unary = unary_only(structure);
                let solution = solve_on_words(
                    &candidates,
                    |w| derivation_on_bare(complex, &unary, w, &crate::rat(1, 1), usize::MAX),
                    &eps,
                )?
                .ok_or_else(|| {
                    Error::Obstructed(format!(
                        "residual at tensor degree {k} is not exact on cell {}",
                        complex.display_name(cell)
                    ))
                })?;
                let mut terms: Vec<(Vec<CellId>, Rat)> = Vec::new();
                for (cand, coeff) in candidates.iter().zip(&solution) {
                    if !coeff.is_zero() {
                        terms.push((cand.letters.clone(), coeff.clone()));
                    }
                }
                if !terms.is_empty() {
                    stats.nonzero_corrections += 1;
                    structure.set_component(k, cell, terms);
                }
            }
            trace.levels.push(stats);
        }
    }
    Ok(trace)
}

fn unary_only(structure: &Structure) -> Structure {
    let mut s = Structure::empty(structure.cell_count(), structure.n_max);
    if let Some(d1) = structure.components.get(&1) {
        s.components.insert(1, d1.clone());
    }
    s
}

/// Exact residual report for the square of a structure.
#[derive(Clone, Debug, Serialize)]
pub struct SquareZeroReport {
    pub max_tensor_degree: usize,
    /// `(cell name, tensor degree, residual term count)` for nonzero residuals.
    pub violations: Vec<(String, usize, usize)>,
    pub all_zero: bool,
}

/// Recompute the square of the structure on every basis cell by independent
/// expansion, up to the given tensor degree.
pub fn verify_square_zero(
    complex: &SimplicialComplex,
    structure: &Structure,
    n_max: usize,
) -> SquareZeroReport {
    let mut violations = Vec::new();
    for cell in complex.cells() {
        for k in 1..=n_max {
            let residual = square_component(complex, structure, cell, k);
            if !residual.is_zero() {
                violations.push((complex.display_name(cell), k, residual.terms.len()));
            }
        }
    }
    SquareZeroReport {
        max_tensor_degree: n_max,
        all_zero: violations.is_empty(),
        violations,
    }
}

/// Build and complete in one call.
pub fn construct_local_coalgebra(
    complex: &SimplicialComplex,
    mode: CoproductMode,
    n_max: usize,
) -> Result<(Structure, ConstructionTrace), Error> {
    for cell in complex.cells() {
        if !complex.closure_is_contractible(cell)? {
            return Err(Error::Obstructed(format!(
                "closure of {} is not contractible",
                complex.display_name(cell)
            )));
        }
    }
    let mut structure = seed_structure(complex, mode, n_max);
    let trace = complete_local_coalgebra(complex, &mut structure, n_max)?;
    Ok((structure, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn strict_interval_needs_no_corrections() {
        let k = fixtures::interval();
        let (s, trace) = construct_local_coalgebra(&k, CoproductMode::StrictAw, 6).unwrap();
        assert!(s.components.get(&3).is_none());
        assert!(trace.levels.iter().all(|l| l.nonzero_corrections == 0));
        let report = verify_square_zero(&k, &s, 6);
        assert!(report.all_zero);
    }

    #[test]
    fn symmetrized_interval_gets_a_ternary_component() {
        let k = fixtures::interval();
        let (s, _) = construct_local_coalgebra(&k, CoproductMode::Symmetrized, 6).unwrap();
        let edge = k.cells_of_dim(1)[0];
        assert!(
            !s.component_of(3, edge).is_empty(),
            "symmetrized coproduct is not coassociative, a ternary correction is forced"
        );
        // vertices stay strict
        let a = k.cells_of_dim(0)[0];
        assert!(s.component_of(3, a).is_empty());
        let report = verify_square_zero(&k, &s, 6);
        assert!(report.all_zero, "violations: {:?}", report.violations);
        assert!(s.is_local(&k));
    }

    #[test]
    fn symmetrized_circle_and_sphere_square_to_zero() {
        for (k, n) in [(fixtures::circle(), 6), (fixtures::sphere(), 4)] {
            let (s, _) = construct_local_coalgebra(&k, CoproductMode::Symmetrized, n).unwrap();
            let report = verify_square_zero(&k, &s, n);
            assert!(report.all_zero, "{}: {:?}", k.name, report.violations);
            assert!(s.is_local(&k), "{} locality", k.name);
        }
    }

    #[test]
    fn square_zero_detects_broken_structures() {
        let k = fixtures::interval();
        // a non-coassociative binary component with no corrections
        let mut s = seed_structure(&k, CoproductMode::Symmetrized, 4);
        let report = verify_square_zero(&k, &s, 4);
        assert!(!report.all_zero);
        assert!(report.violations.iter().any(|(_, deg, _)| *deg == 3));
        // the zero structure is fine
        s.components.clear();
        let report = verify_square_zero(&k, &s, 4);
        assert!(report.all_zero);
    }

    #[test]
    fn determinism_two_runs_identical() {
        let k = fixtures::sphere();
        let (s1, _) = construct_local_coalgebra(&k, CoproductMode::Symmetrized, 4).unwrap();
        let (s2, _) = construct_local_coalgebra(&k, CoproductMode::Symmetrized, 4).unwrap();
        assert_eq!(s1, s2);
    }
}
