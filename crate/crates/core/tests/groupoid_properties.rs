//! Structural consequences of the derivation laws, checked over every arrow
//! of the homotopy groupoid built from a mixed pool of small fixtures.

use std::sync::OnceLock;

use proptest::prelude::*;

use xmodkit_core::fixtures::{cyclic, dias_differential_f2, xm_ideal_dual_f2, xm_identity, xm_mod2_z4_z2};
use xmodkit_core::homotopy::{
    concat_derivations, derivation_to_semidirect_morphism, homotopy_target, invert_derivation,
    same_xmod_morphism, Derivation,
};
use xmodkit_core::omega::morphism_ok;
use xmodkit_core::xmod::{enumerate_xmod_morphisms, XmodMorphism};
use xmodkit_core::Caps;

struct Pool {
    arrows: Vec<Derivation>,
    targets: Vec<XmodMorphism>,
    composable: Vec<(usize, usize)>,
}

fn pool() -> &'static Pool {
    static POOL: OnceLock<Pool> = OnceLock::new();
    POOL.get_or_init(|| {
        let caps = Caps::default();
        let mut arrows = Vec::new();
        let fixtures = [
            xm_identity(&cyclic(3)),
            xm_mod2_z4_z2(),
            xm_ideal_dual_f2(),
            xm_identity(&dias_differential_f2()),
        ];
        for xm in &fixtures {
            for f in enumerate_xmod_morphisms(xm, xm, &caps).expect("small fixtures") {
                arrows.extend(enumerate_derivations_for(&f, &caps));
            }
        }
        let targets: Vec<XmodMorphism> = arrows
            .iter()
            .map(|d| homotopy_target(d, &caps).expect("valid arrows have targets"))
            .collect();
        let mut composable = Vec::new();
        for i in 0..arrows.len() {
            for (j, d2) in arrows.iter().enumerate() {
                if same_xmod_morphism(&targets[i], &d2.morphism) {
                    composable.push((i, j));
                }
            }
        }
        assert!(!arrows.is_empty() && !composable.is_empty());
        Pool {
            arrows,
            targets,
            composable,
        }
    })
}

fn enumerate_derivations_for(f: &XmodMorphism, caps: &Caps) -> Vec<Derivation> {
    xmodkit_core::homotopy::enumerate_derivations(f, caps).expect("small fixtures")
}

proptest! {
    // s(0) = 0 is forced by the sum rule, not stored anywhere
    #[test]
    fn zero_maps_to_zero(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let d = idx.get(&pool().arrows);
        let r = d.morphism.source.r();
        let e = d.morphism.target.e();
        let zr = r.index_of(&r.zero()).unwrap();
        let ze = e.index_of(&e.zero()).unwrap();
        let _ = caps;
        prop_assert_eq!(d.s[zr], ze);
    }

    // s(-g) = -(f0(g)·s(g)): negation is determined by the sum rule
    #[test]
    fn negation_is_determined(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let d = idx.get(&pool().arrows);
        let tr = d.morphism.source.r().op_tables(&caps).unwrap();
        let te = d.morphism.target.e().op_tables(&caps).unwrap();
        let dot = &d.morphism.target.action.tables.dot;
        for g in 0..tr.size {
            let expected = te.neg[dot[d.morphism.f0[g]][d.s[g]]];
            prop_assert_eq!(d.s[tr.neg[g]], expected);
        }
    }

    #[test]
    fn inversion_is_involutive(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let d = idx.get(&pool().arrows);
        let back = invert_derivation(d, &caps).unwrap();
        let round = invert_derivation(&back, &caps).unwrap();
        prop_assert_eq!(&round.s, &d.s);
        prop_assert!(same_xmod_morphism(&round.morphism, &d.morphism));
    }

    #[test]
    fn inverse_swaps_endpoints(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let p = pool();
        let i = idx.index(p.arrows.len());
        let d = &p.arrows[i];
        let back = invert_derivation(d, &caps).unwrap();
        prop_assert!(same_xmod_morphism(&back.morphism, &p.targets[i]));
        let back_target = homotopy_target(&back, &caps).unwrap();
        prop_assert!(same_xmod_morphism(&back_target, &d.morphism));
    }

    // the target of a concatenation is the target of its second leg
    #[test]
    fn concatenation_chains_targets(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let p = pool();
        let &(i, j) = idx.get(&p.composable);
        let joined = concat_derivations(&p.arrows[i], &p.arrows[j], &caps).unwrap();
        prop_assert!(same_xmod_morphism(&joined.morphism, &p.arrows[i].morphism));
        let end = homotopy_target(&joined, &caps).unwrap();
        prop_assert!(same_xmod_morphism(&end, &p.targets[j]));
    }

    // every arrow embeds as a section-style morphism into the semidirect
    // carrier of the target's action
    #[test]
    fn arrows_embed_into_the_semidirect_carrier(idx in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let d = idx.get(&pool().arrows);
        let (product, psi) = derivation_to_semidirect_morphism(d, &caps).unwrap();
        let src = d.morphism.source.r().op_tables(&caps).unwrap();
        let dst = product.op_tables(&caps).unwrap();
        prop_assert!(morphism_ok(&psi, &src, &dst));
    }
}

#[test]
fn the_pool_is_a_real_mix() {
    let p = pool();
    assert!(p.arrows.len() >= 20, "got {} arrows", p.arrows.len());
    assert!(
        p.composable.len() > p.arrows.len(),
        "composable pairs should outnumber arrows"
    );
}
