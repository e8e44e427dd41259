//! The internal-category bridge respects composition, identities, and
//! truncation depth, and the homotopy lift is a section of the transfer.

use std::sync::OnceLock;

use proptest::prelude::*;

use xmodkit_core::fixtures::{cyclic, klein, xm_identity, xm_mod2_z4_z2, xm_zero};
use xmodkit_core::homotopy::{enumerate_derivations, homotopy_target, Derivation};
use xmodkit_core::simplicial::{
    compose_simplicial_maps, same_simplicial_data, validate_simplicial_homotopy, SimplicialMap,
    SimplicialObject,
};
use xmodkit_core::transfer::{
    lift_derivation_to_nerve_homotopy, nerve, nerve_map, transfer_homotopy, x1_map, x1_object,
};
use xmodkit_core::xmod::{compose_xmod_morphisms, enumerate_xmod_morphisms, CrossedModule, XmodMorphism};
use xmodkit_core::Caps;

fn small_modules() -> &'static Vec<CrossedModule> {
    static POOL: OnceLock<Vec<CrossedModule>> = OnceLock::new();
    POOL.get_or_init(|| {
        vec![
            xm_identity(&cyclic(2)),
            xm_identity(&cyclic(3)),
            xm_identity(&klein()),
            xm_zero(),
            xm_mod2_z4_z2(),
        ]
    })
}

fn endo_pools() -> &'static Vec<Vec<XmodMorphism>> {
    static POOL: OnceLock<Vec<Vec<XmodMorphism>>> = OnceLock::new();
    POOL.get_or_init(|| {
        let caps = Caps::default();
        small_modules()
            .iter()
            .map(|xm| enumerate_xmod_morphisms(xm, xm, &caps).expect("small fixtures"))
            .collect()
    })
}

fn all_arrows() -> &'static Vec<Derivation> {
    static POOL: OnceLock<Vec<Derivation>> = OnceLock::new();
    POOL.get_or_init(|| {
        let caps = Caps::default();
        let mut out = Vec::new();
        for pool in endo_pools() {
            for f in pool {
                out.extend(enumerate_derivations(f, &caps).expect("small fixtures"));
            }
        }
        assert!(!out.is_empty());
        out
    })
}

fn truncate(x: &SimplicialObject, depth: usize) -> SimplicialObject {
    SimplicialObject {
        name: x.name.clone(),
        levels: x.levels[..=depth].to_vec(),
        faces: x.faces[..depth].to_vec(),
        degeneracies: x.degeneracies[..depth].to_vec(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nerve_turns_composition_into_composition(
        which in any::<prop::sample::Index>(),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let caps = Caps::default();
        let pool = which.get(endo_pools());
        let f = a.get(pool);
        let g = b.get(pool);
        let composite = compose_xmod_morphisms(g, f).unwrap();
        let direct = nerve_map(&composite, 2, &caps).unwrap();
        let staged = compose_simplicial_maps(
            &nerve_map(g, 2, &caps).unwrap(),
            &nerve_map(f, 2, &caps).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(&direct.maps, &staged.maps);
        prop_assert!(same_simplicial_data(&direct.source, &staged.source));
        prop_assert!(same_simplicial_data(&direct.target, &staged.target));
    }

    #[test]
    fn deeper_nerves_restrict_to_shallower_ones(
        which in any::<prop::sample::Index>(),
        depth in 2usize..4,
    ) {
        let caps = Caps::default();
        let xm = which.get(small_modules());
        let deep = nerve(xm, depth + 1, &caps).unwrap();
        let shallow = nerve(xm, depth, &caps).unwrap();
        prop_assert!(same_simplicial_data(&truncate(&deep, depth), &shallow));
    }

    // the lifted homotopy runs between the nerves of the arrow's endpoints
    #[test]
    fn lift_endpoints_are_nerve_maps(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let d = idx.get(all_arrows());
        let lifted = lift_derivation_to_nerve_homotopy(d, &caps).unwrap();
        let report = validate_simplicial_homotopy(&lifted, &caps).unwrap();
        prop_assert!(report.ok(), "{:?}", report.violations.first());
        let from = nerve_map(&d.morphism, 2, &caps).unwrap();
        let to = nerve_map(&homotopy_target(d, &caps).unwrap(), 2, &caps).unwrap();
        prop_assert_eq!(&lifted.from.maps, &from.maps);
        prop_assert_eq!(&lifted.to.maps, &to.maps);
    }

    #[test]
    fn transfer_undoes_the_lift(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let d = idx.get(all_arrows());
        let lifted = lift_derivation_to_nerve_homotopy(d, &caps).unwrap();
        let report = transfer_homotopy(&lifted, &caps).unwrap();
        prop_assert!(report.image_in_kernel && report.g_matches);
        prop_assert!(report.law_witnesses.is_empty());
        let back = report.derivation.expect("round trip produces a derivation");
        prop_assert_eq!(&back.s, &d.s);
        prop_assert_eq!(&back.morphism.f0, &d.morphism.f0);
        prop_assert_eq!(&back.morphism.f1, &d.morphism.f1);
    }
}

#[test]
fn nerve_of_identity_is_the_identity_map() {
    let caps = Caps::default();
    for xm in small_modules() {
        for depth in 2..=3 {
            let lifted = nerve_map(&XmodMorphism::identity(xm), depth, &caps).unwrap();
            let expect = SimplicialMap::identity(&nerve(xm, depth, &caps).unwrap());
            assert_eq!(lifted.maps, expect.maps, "{} at depth {depth}", xm.r().name);
        }
    }
}

#[test]
fn extracted_identity_map_is_the_identity() {
    let caps = Caps::default();
    for xm in small_modules() {
        let m = nerve_map(&XmodMorphism::identity(xm), 2, &caps).unwrap();
        let back = x1_map(&m, &caps).unwrap();
        let x1 = x1_object(&m.source, &caps).unwrap();
        assert_eq!(back.f0, (0..x1.xmod.r().size() as usize).collect::<Vec<_>>());
        assert_eq!(back.f1, (0..x1.xmod.e().size() as usize).collect::<Vec<_>>());
    }
}

#[test]
fn nerve_moore_complex_stops_at_degree_one() {
    let caps = Caps::default();
    for xm in small_modules() {
        let deep = nerve(xm, 3, &caps).unwrap();
        assert!(
            xmodkit_core::simplicial::moore_length_at_most(&deep, 1, &caps).unwrap(),
            "{}",
            xm.r().name
        );
    }
}
