use fimhom_core::category::{Morphism, Obj};
use fimhom_core::functors::{torsion_kernel, torsion_kernel_set};
use fimhom_core::homology::{degree_report, is_torsion_free, torsion_vector};
use fimhom_core::linalg::PrimeField;
use fimhom_core::module::PointwiseModule;
use fimhom_core::presentation::{evaluate_presentation, random_presentation, FreeElement, Presentation, RandomParams, Term};
use fimhom_core::tree::{build_tree, child, default_level_cap, singular_indices, tree_violations};
use proptest::prelude::*;

fn o(v: &[usize]) -> Obj {
    Obj::new(v.to_vec())
}

/// One generator at the origin with `E^{(i)}` applied to it set to zero.
fn killed_along(i: usize, bounds: &[usize], p: u64) -> PointwiseModule {
    let m = bounds.len();
    let origin = Obj::origin(m);
    let at = origin.plus(i);
    let pres = Presentation {
        field: PrimeField::new(p).unwrap(),
        m,
        bounds: o(bounds),
        generators: vec![origin],
        relations: vec![FreeElement {
            object: at.clone(),
            terms: vec![Term {
                gen: 0,
                map: Morphism::from_images(&at, &vec![vec![]; m]).unwrap(),
                coeff: 1,
            }],
        }],
    };
    evaluate_presentation(&pres).unwrap()
}

#[test]
fn scalar_torsion_differs_from_gd_of_kernel_for_two_coordinates() {
    // V is k along the n_1 = 0 line: E^(1) kills it, E^(2) is injective.
    let v = killed_along(0, &[3, 3], 2);
    for n in v.grid().objects() {
        assert_eq!(v.dim(n), usize::from(n.coords()[0] == 0), "at {n}");
    }
    let t = torsion_vector(&v).unwrap();
    assert_eq!(t.t, vec![0, -1]);
    assert_eq!(t.tsum, -1);
    let k = torsion_kernel_set(&[0, 1], &v).unwrap();
    assert_eq!(degree_report(&k, 0).unwrap().gd, 0);
    assert_ne!(t.tsum, 0);
}

#[test]
fn torsion_at_origin_for_two_coordinates_has_a_three_node_tree() {
    let mut pres = Presentation {
        field: PrimeField::new(3).unwrap(),
        m: 2,
        bounds: o(&[3, 3]),
        generators: vec![o(&[0, 0])],
        relations: Vec::new(),
    };
    for at in [o(&[1, 0]), o(&[0, 1])] {
        pres.relations.push(FreeElement {
            object: at.clone(),
            terms: vec![Term {
                gen: 0,
                map: Morphism::from_images(&at, &[vec![], vec![]]).unwrap(),
                coeff: 1,
            }],
        });
    }
    let v = evaluate_presentation(&pres).unwrap();
    assert_eq!(singular_indices(&v), vec![0, 1]);
    let tree = build_tree(&v, default_level_cap(&v).unwrap(), 1).unwrap();
    assert_eq!((tree.node_count, tree.depth), (3, 1));
    assert!(tree_violations(&tree, 2).is_empty());
    for c in &tree.root.children {
        assert!(c.module.is_zero());
    }
}

#[test]
fn torsion_free_module_is_its_own_tree() {
    let v = killed_along(0, &[3, 3], 3);
    let c = child(&v, 0).unwrap();
    assert!(c.is_zero());
    assert!(child(&v, 1).is_err());

    let grid = fimhom_core::category::Grid::new(o(&[2, 2]));
    let free = fimhom_core::module::free_module(PrimeField::new(2).unwrap(), &o(&[1, 0]), &grid).unwrap();
    assert!(is_torsion_free(&free));
    let tree = build_tree(&free, default_level_cap(&free).unwrap(), 1).unwrap();
    assert_eq!((tree.node_count, tree.depth), (1, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// With one coordinate the kernel lives in degrees up to t, so the two agree.
    #[test]
    fn one_coordinate_torsion_is_gd_of_kernel(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let params = RandomParams {
            m: 1,
            bounds: o(&[5]),
            field: PrimeField::new(p).unwrap(),
            max_gens: 2,
            max_rels: 3,
            max_terms: 3,
        };
        let v = evaluate_presentation(&random_presentation(seed, &params)).unwrap();
        let t = torsion_vector(&v).unwrap();
        let k = torsion_kernel(0, &v).unwrap();
        prop_assert_eq!(t.t[0], degree_report(&k, 0).unwrap().gd);
    }

    #[test]
    fn children_lower_the_torsion_sum(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let params = RandomParams {
            m: 2,
            bounds: o(&[3, 3]),
            field: PrimeField::new(p).unwrap(),
            max_gens: 2,
            max_rels: 3,
            max_terms: 3,
        };
        let v = evaluate_presentation(&random_presentation(seed, &params)).unwrap();
        let t = torsion_vector(&v).unwrap();
        prop_assert!(t.tsum >= -2);
        prop_assert_eq!(t.tsum == -2, is_torsion_free(&v));
        for i in singular_indices(&v) {
            let c = child(&v, i).unwrap();
            prop_assert!(torsion_vector(&c).unwrap().tsum < t.tsum);
        }
    }
}
