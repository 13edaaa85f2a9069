//! Admissible minor families and the three-way cross check.
//!
//! A family of minors is admissible when some TNN matrix has exactly those
//! minors equal to zero. Admissible families are in bijection with Cauchon
//! diagrams, and each can be computed three ways: as the identically
//! vanishing minors of `T_C`, as `M(w)` for the pipe-dream permutation of
//! the diagram, and as the zero minors of the all-ones witness matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::derivations::{tc_ones, tnn_test, vanishing_family, ZeroTest};
use crate::diagram::{enumerate_diagrams, CauchonDiagram};
use crate::error::{Error, Result};
use crate::exactmat::{is_tnn_bruteforce, vanishing_minors, MinorFamily, RatMatrix};
use crate::guard::{self, GuardKind};
use crate::perm::{m_of_w, pipe_dream, RestrictedPermutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDescriptor {
    pub diagram: CauchonDiagram,
    pub permutation: RestrictedPermutation,
    pub family: MinorFamily,
}

impl CellDescriptor {
    /// Descriptor of `c`, with the family taken as `M(w)`.
    pub fn of_diagram(c: &CauchonDiagram) -> CellDescriptor {
        let permutation = pipe_dream(c);
        let family = m_of_w(&permutation);
        CellDescriptor { diagram: c.clone(), permutation, family }
    }
}

/// One descriptor per `m x p` Cauchon diagram, in diagram order.
pub fn admissible_families(m: usize, p: usize) -> Result<Vec<CellDescriptor>> {
    guard::check(GuardKind::Enumeration, m, p)?;
    let diagrams = enumerate_diagrams(m, p)?;
    Ok(diagrams.par_iter().map(CellDescriptor::of_diagram).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub descriptor: Option<CellDescriptor>,
}

/// Whether `z` is the vanishing family of some nonempty TNN cell.
pub fn is_admissible(z: &MinorFamily) -> Result<Admissibility> {
    let (m, p) = z.shape();
    let descriptor = admissible_families(m, p)?.into_iter().find(|d| &d.family == z);
    Ok(Admissibility { admissible: descriptor.is_some(), descriptor })
}

/// The cell of a TNN matrix, cross-checked three ways.
pub fn cell_of(mat: &RatMatrix) -> Result<CellDescriptor> {
    let brute = is_tnn_bruteforce(mat);
    if let Some((witness, value)) = brute.witness {
        return Err(Error::NotTnn { witness, value });
    }
    let family = vanishing_minors(mat);
    let test = tnn_test(mat);
    let diagram = match (test.is_tnn, test.diagram) {
        (true, Some(d)) => d,
        _ => return Err(Error::Invariant("deleting derivations reject a TNN matrix".into())),
    };
    let permutation = pipe_dream(&diagram);
    let mw = m_of_w(&permutation);
    if mw != family {
        return Err(Error::Invariant(format!(
            "zero minors {family} differ from M({permutation}) = {mw}"
        )));
    }
    Ok(CellDescriptor { diagram, permutation, family })
}

/// `T_C` with all white values 1: a TNN matrix in the cell of `c`.
pub fn witness_matrix(c: &CauchonDiagram) -> RatMatrix {
    tc_ones(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub diagram: CauchonDiagram,
    pub permutation: RestrictedPermutation,
    pub vanishing: MinorFamily,
    pub m_of_w: MinorFamily,
    pub witness: MinorFamily,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnifyingReport {
    pub m: usize,
    pub p: usize,
    pub total: usize,
    pub agreed: usize,
    /// Families are pairwise distinct across diagrams.
    pub injective: bool,
    pub mismatches: Vec<Mismatch>,
}

impl UnifyingReport {
    pub fn passed(&self) -> bool {
        self.agreed == self.total && self.injective
    }
}

/// Checks a single diagram; `None` when all three families agree.
pub fn check_diagram(c: &CauchonDiagram, test: ZeroTest) -> Result<(MinorFamily, Option<Mismatch>)> {
    let vanishing = vanishing_family(c, test)?;
    let permutation = pipe_dream(c);
    let mw = m_of_w(&permutation);
    let witness = vanishing_minors(&witness_matrix(c));
    if vanishing == mw && mw == witness {
        Ok((vanishing, None))
    } else {
        let miss = Mismatch { diagram: c.clone(), permutation, vanishing: vanishing.clone(), m_of_w: mw, witness };
        Ok((vanishing, Some(miss)))
    }
}

/// Runs [`check_diagram`] over every `m x p` diagram.
pub fn unifying_check(m: usize, p: usize, test: ZeroTest) -> Result<UnifyingReport> {
    let diagrams = enumerate_diagrams(m, p)?;
    let results: Vec<(MinorFamily, Option<Mismatch>)> =
        diagrams.par_iter().map(|c| check_diagram(c, test)).collect::<Result<_>>()?;
    let total = results.len();
    let families: std::collections::HashSet<&MinorFamily> = results.iter().map(|(f, _)| f).collect();
    let injective = families.len() == total;
    let mismatches: Vec<Mismatch> = results.iter().filter_map(|(_, m)| m.clone()).collect();
    Ok(UnifyingReport { m, p, total, agreed: total - mismatches.len(), injective, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::MinorIndex;

    fn six() -> MinorFamily {
        MinorFamily::parse_list(3, 3, "[1,2|2,3],[1,3|2,3],[2,3|2,3],[2,3|1,3],[2,3|1,2],[1,2,3|1,2,3]").unwrap()
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(admissible_families(2, 2).unwrap().len(), 14);
        let one: Vec<MinorFamily> = admissible_families(1, 1).unwrap().into_iter().map(|d| d.family).collect();
        assert_eq!(one, vec![MinorFamily::empty(1, 1), MinorFamily::all(1, 1)]);
        let all = admissible_families(3, 3).unwrap();
        let distinct: std::collections::HashSet<_> = all.iter().map(|d| d.family.clone()).collect();
        assert_eq!((all.len(), distinct.len()), (230, 230));
    }

    #[test]
    fn admissibility_examples() {
        let only_d = MinorFamily::new(2, 2, ["[2|2]".parse::<MinorIndex>().unwrap()]).unwrap();
        assert!(!is_admissible(&only_d).unwrap().admissible);
        let a = is_admissible(&six()).unwrap();
        assert!(a.admissible);
        let d = a.descriptor.unwrap();
        assert_eq!(d.diagram, CauchonDiagram::parse(".#./##./...").unwrap());
        assert_eq!(d.permutation.cycles(), "(2 3 5 4)");
        assert!(is_admissible(&MinorFamily::empty(3, 2)).unwrap().admissible);
    }

    #[test]
    fn cell_of_examples() {
        let d = cell_of(&RatMatrix::from_ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]])).unwrap();
        assert_eq!(d.family, six());
        assert_eq!(d.permutation.to_string(), "135246");
        let id = cell_of(&RatMatrix::identity(2)).unwrap();
        assert_eq!(id.family, MinorFamily::parse_list(2, 2, "[1|2],[2|1]").unwrap());
        assert_eq!(cell_of(&RatMatrix::zeros(2, 3)).unwrap().family, MinorFamily::all(2, 3));
        let m2 = RatMatrix::from_ints(&[&[7, 5, 4, 1], &[6, 5, 3, 1], &[4, 3, 2, 1], &[1, 1, 1, 1]]);
        assert!(matches!(cell_of(&m2), Err(Error::NotTnn { .. })));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_matrix(&CauchonDiagram::parse("101/001/111").unwrap()), RatMatrix::from_ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]]));
        assert_eq!(witness_matrix(&CauchonDiagram::all_black(2, 2)), RatMatrix::zeros(2, 2));
        let w = witness_matrix(&CauchonDiagram::all_white(2, 2));
        assert!(vanishing_minors(&w).is_empty());
    }

    #[test]
    fn unifying_small() {
        for (m, p) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            let r = unifying_check(m, p, ZeroTest::Exact).unwrap();
            assert!(r.passed(), "{m}x{p}: {:?}", r.mismatches);
        }
        assert_eq!(unifying_check(1, 2, ZeroTest::Exact).unwrap().total, 4);
        assert_eq!(unifying_check(2, 2, ZeroTest::Exact).unwrap().agreed, 14);
    }

    #[test]
    fn extremes() {
        let all = admissible_families(2, 3).unwrap();
        let white = all.iter().find(|d| d.diagram == CauchonDiagram::all_white(2, 3)).unwrap();
        let black = all.iter().find(|d| d.diagram == CauchonDiagram::all_black(2, 3)).unwrap();
        assert!(white.family.is_empty());
        assert_eq!(black.family, MinorFamily::all(2, 3));
        for d in &all {
            assert!(white.family.is_subset(&d.family) && d.family.is_subset(&black.family));
        }
    }
}
