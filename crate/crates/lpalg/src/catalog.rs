//! The named desk-scale catalog: the groupoids, groups, actions, and
//! algebras that the test and acceptance suites sweep over.

use crate::crossed_product::IsometricAlgebraAction;
use crate::groupoid::{
    group_groupoid, pair_groupoid, transformation_groupoid, unit_groupoid, FiniteGroupoid,
    GroupAction, GroupTable,
};
use crate::lp_norms::RepresentedAlgebra;
use std::sync::Arc;

/// The principal catalog groupoids (every unit has trivial isotropy).
pub fn principal_catalog() -> Vec<(String, Arc<FiniteGroupoid>)> {
    vec![
        ("unit(3)".into(), Arc::new(unit_groupoid(3))),
        ("pair(2)".into(), Arc::new(pair_groupoid(2))),
        ("pair(3)".into(), Arc::new(pair_groupoid(3))),
        (
            "Z2⋉{0,1} swap".into(),
            Arc::new(transformation_groupoid(&GroupAction::rotation(2))),
        ),
        (
            "Z3⋉{0,1,2} rotation".into(),
            Arc::new(transformation_groupoid(&GroupAction::rotation(3))),
        ),
        (
            "S3⋉S3 translation".into(),
            Arc::new(transformation_groupoid(&GroupAction::translation(
                GroupTable::symmetric(3),
            ))),
        ),
    ]
}

/// Groups whose reduced group algebras the suite examines.
pub fn group_catalog() -> Vec<(String, GroupTable)> {
    vec![
        ("Z2".into(), GroupTable::cyclic(2)),
        ("Z3".into(), GroupTable::cyclic(3)),
        ("Z4".into(), GroupTable::cyclic(4)),
        ("S3".into(), GroupTable::symmetric(3)),
    ]
}

/// One-unit groupoids of the group catalog.
pub fn group_algebra_catalog() -> Vec<(String, Arc<FiniteGroupoid>)> {
    group_catalog()
        .into_iter()
        .map(|(name, g)| (format!("group({name})"), Arc::new(group_groupoid(&g))))
        .collect()
}

/// `Z_2` acting freely on `2k` points by `k` disjoint swaps.
pub fn disjoint_swaps(k: usize) -> GroupAction {
    let mut swap: Vec<usize> = Vec::with_capacity(2 * k);
    for i in 0..k {
        swap.push(2 * i + 1);
        swap.push(2 * i);
    }
    let id: Vec<usize> = (0..2 * k).collect();
    GroupAction::new(GroupTable::cyclic(2), vec![id, swap]).expect("disjoint swaps are free")
}

/// Topologically free action pairs for the orbit-equivalence cross-check,
/// with the expected answer. Freeness makes orbit equivalence and
/// transformation-groupoid isomorphism provably agree, which is exactly
/// what the suite verifies by running both algorithms.
pub fn coe_catalog() -> Vec<(String, GroupAction, GroupAction, bool)> {
    let z2_swap = GroupAction::rotation(2);
    let relabeled_swap = z2_swap.relabeled(&[1, 0]).unwrap();
    let z3_rot = GroupAction::rotation(3);
    let z4_translation = GroupAction::translation(GroupTable::cyclic(4));
    let klein_translation =
        GroupAction::translation(GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2)));
    let z2_two_swaps = disjoint_swaps(2);
    let z2_two_swaps_relabeled = z2_two_swaps.relabeled(&[2, 3, 0, 1]).unwrap();
    let s3_translation = GroupAction::translation(GroupTable::symmetric(3));
    let z6_translation = GroupAction::translation(GroupTable::cyclic(6));
    let z2_three_swaps = disjoint_swaps(3);
    let trivial_on_two = GroupAction::trivial(GroupTable::cyclic(1), 2);
    vec![
        ("swap vs itself".into(), z2_swap.clone(), z2_swap.clone(), true),
        ("swap vs relabeled swap".into(), z2_swap.clone(), relabeled_swap, true),
        ("swap vs Z3 rotation".into(), z2_swap.clone(), z3_rot.clone(), false),
        (
            "Z4 translation vs Klein translation".into(),
            z4_translation.clone(),
            klein_translation,
            true,
        ),
        (
            "two swaps vs Z4 translation".into(),
            z2_two_swaps.clone(),
            z4_translation,
            false,
        ),
        (
            "two swaps vs relabeled two swaps".into(),
            z2_two_swaps.clone(),
            z2_two_swaps_relabeled,
            true,
        ),
        ("Z3 rotation vs Z3 translation".into(), z3_rot.clone(), GroupAction::translation(GroupTable::cyclic(3)), true),
        (
            "S3 translation vs Z6 translation".into(),
            s3_translation,
            z6_translation.clone(),
            true,
        ),
        ("swap vs trivial on two points".into(), z2_swap, trivial_on_two, false),
        (
            "Z6 translation vs three swaps".into(),
            z6_translation,
            z2_three_swaps.clone(),
            false,
        ),
        (
            "three swaps vs two swaps".into(),
            z2_three_swaps,
            z2_two_swaps,
            false,
        ),
    ]
}

/// Represented matrix algebras for the hermitian and core sweeps.
pub fn algebra_catalog() -> Vec<(String, RepresentedAlgebra)> {
    vec![
        ("M2".into(), RepresentedAlgebra::full_matrix(2)),
        ("M3".into(), RepresentedAlgebra::full_matrix(3)),
        ("diag(3)".into(), RepresentedAlgebra::diagonal(3)),
        ("upper(2)".into(), RepresentedAlgebra::upper_triangular(2)),
    ]
}

/// Actions on represented algebras for the crossed-product sweeps.
pub fn crossed_catalog() -> Vec<(String, IsometricAlgebraAction)> {
    let swap = crate::linalg::Mat::permutation(&[1, 0]);
    vec![
        (
            "Z2 trivial on M2".into(),
            IsometricAlgebraAction::trivial(GroupTable::cyclic(2), RepresentedAlgebra::full_matrix(2)),
        ),
        (
            "Z2 Ad(swap) on M2".into(),
            IsometricAlgebraAction::new(
                GroupTable::cyclic(2),
                RepresentedAlgebra::full_matrix(2),
                vec![crate::linalg::Mat::identity(2), swap],
            )
            .expect("Ad(swap) action is valid"),
        ),
        (
            "Z2 on C(2) swap".into(),
            IsometricAlgebraAction::from_space_action(&GroupAction::rotation(2)),
        ),
        (
            "Z3 on C(3) rotation".into(),
            IsometricAlgebraAction::from_space_action(&GroupAction::rotation(3)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_catalog_is_principal() {
        for (name, g) in principal_catalog() {
            assert!(g.is_principal(), "{name}");
        }
    }

    #[test]
    fn coe_catalog_is_topologically_free_and_big_enough() {
        let pairs = coe_catalog();
        assert!(pairs.len() >= 10);
        for (name, a, b, _) in &pairs {
            assert!(a.is_topologically_free(), "{name} left");
            assert!(b.is_topologically_free(), "{name} right");
        }
        assert!(pairs.iter().any(|(_, _, _, e)| *e));
        assert!(pairs.iter().any(|(_, _, _, e)| !*e));
    }
}
