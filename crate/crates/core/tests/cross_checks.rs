use cauchon::cells::{cell_of, CellDescriptor};
use cauchon::derivations::{build_tc, deleting_derivations, restoration, vanishing_family, ZeroTest};
use cauchon::diagram::enumerate_diagrams;
use cauchon::exactmat::{rat, vanishing_minors};
use cauchon::perm::{enumerate_s, inverse_pipe_dream, m_of_w, pipe_dream};
use cauchon::{CauchonDiagram, Rat, RatMatrix};
use proptest::prelude::*;

fn diagram_strategy(m: usize, p: usize) -> impl Strategy<Value = CauchonDiagram> {
    let all = enumerate_diagrams(m, p).unwrap();
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn positive_values(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec((1i64..=12, 1i64..=5), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Rat::new(a.into(), b.into())).collect())
}

fn shaped() -> impl Strategy<Value = (CauchonDiagram, Vec<Rat>)> {
    (1usize..=3, 1usize..=4)
        .prop_flat_map(|(m, p)| diagram_strategy(m, p))
        .prop_flat_map(|c| {
            let n = c.white_cells().len();
            (Just(c), positive_values(n))
        })
}

proptest! {
    #[test]
    fn random_cell_members_have_the_diagram_family((c, vals) in shaped()) {
        let mat: RatMatrix = build_tc(&c, &vals, &rat(0)).unwrap();
        let d = cell_of(&mat).unwrap();
        prop_assert_eq!(d, CellDescriptor::of_diagram(&c));
        let mut sparse = RatMatrix::zeros(c.m(), c.p());
        for (k, &(i, a)) in c.white_cells().iter().enumerate() {
            sparse.set(i - 1, a - 1, vals[k].clone());
        }
        prop_assert_eq!(&deleting_derivations(&mat).unwrap(), &sparse);
        prop_assert_eq!(&restoration(&deleting_derivations(&mat).unwrap()).unwrap(), &mat);
    }

    #[test]
    fn transposition_commutes_with_families(c in (1usize..=3, 1usize..=3).prop_flat_map(|(m, p)| diagram_strategy(m, p))) {
        let direct = vanishing_family(&c, ZeroTest::Exact).unwrap();
        let flipped = vanishing_family(&c.transpose(), ZeroTest::Exact).unwrap();
        prop_assert_eq!(flipped, direct.transposed());
    }
}

#[test]
fn every_restricted_permutation_has_a_diagram() {
    for (m, p) in [(1, 1), (1, 4), (2, 3), (3, 2), (3, 3)] {
        for w in enumerate_s(m, p) {
            let c = inverse_pipe_dream(&w).unwrap();
            assert_eq!(pipe_dream(&c), w);
            assert_eq!(vanishing_minors(&cauchon::cells::witness_matrix(&c)), m_of_w(&w), "{w}");
        }
    }
}
