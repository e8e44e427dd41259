//! Small, fully worked carriers, actions, and crossed modules.  Everything
//! here is hand-checked data used by the test suites and handy as CLI input;
//! constructors panic only if the fixture itself is inconsistent.

use std::collections::BTreeMap;

use crate::action::{ActionTables, DerivedAction, SplitExtension};
use crate::caps::Caps;
use crate::omega::{identity_map, Backend, OmegaGroup, TableBackend, VectorBackend};
use crate::signature::{AlgebraKind, Signature};
use crate::xmod::CrossedModule;

/// The cyclic group of order `n` as an addition table.
pub fn cyclic(n: usize) -> OmegaGroup {
    let add = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    let neg = (0..n).map(|i| (n - i) % n).collect();
    OmegaGroup::new(
        format!("Z{}", n),
        Signature::preset(AlgebraKind::Group),
        Backend::Table(TableBackend {
            size: n,
            zero: 0,
            add,
            neg,
            star: BTreeMap::new(),
            unary: BTreeMap::new(),
        }),
    )
    .expect("fixture")
}

/// The Klein four-group: bitwise xor on `{0,1,2,3}`.
pub fn klein() -> OmegaGroup {
    let add = (0..4usize).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    OmegaGroup::new(
        "V4",
        Signature::preset(AlgebraKind::Group),
        Backend::Table(TableBackend {
            size: 4,
            zero: 0,
            add,
            neg: (0..4).collect(),
            star: BTreeMap::new(),
            unary: BTreeMap::new(),
        }),
    )
    .expect("fixture")
}

/// The one-element group.
pub fn trivial_group() -> OmegaGroup {
    cyclic(1).with_name("0")
}

/// Permutations of three points in lexicographic order.
pub const S3_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The symmetric group on three points; `add(i, j)` applies permutation `j`
/// first, then `i`.
pub fn s3() -> OmegaGroup {
    let index = |p: [usize; 3]| S3_PERMS.iter().position(|q| *q == p).unwrap();
    let mut add = vec![vec![0usize; 6]; 6];
    let mut neg = vec![0usize; 6];
    for (i, a) in S3_PERMS.iter().enumerate() {
        let mut inv = [0usize; 3];
        for (x, &ax) in a.iter().enumerate() {
            inv[ax] = x;
        }
        neg[i] = index(inv);
        for (j, b) in S3_PERMS.iter().enumerate() {
            add[i][j] = index([a[b[0]], a[b[1]], a[b[2]]]);
        }
    }
    OmegaGroup::new(
        "S3",
        Signature::preset(AlgebraKind::Group),
        Backend::Table(TableBackend {
            size: 6,
            zero: 0,
            add,
            neg,
            star: BTreeMap::new(),
            unary: BTreeMap::new(),
        }),
    )
    .expect("fixture")
}

/// Indices of the even permutations inside [`s3`].
pub const S3_A3: [usize; 3] = [0, 3, 4];

/// The sign morphism [`s3`] `-> Z2` as a value table.
pub const S3_SIGN: [usize; 6] = [0, 1, 1, 0, 0, 1];

/// A section of the sign morphism picking a fixed transposition.
pub const S3_SIGN_SECTION: [usize; 2] = [0, 2];

fn vector_algebra(
    name: &str,
    kind: AlgebraKind,
    p: u32,
    star: Vec<(&str, Vec<Vec<Vec<u32>>>)>,
) -> OmegaGroup {
    let star = star
        .into_iter()
        .map(|(sym, t)| (sym.to_string(), t))
        .collect();
    let dim = 2;
    OmegaGroup::new(
        name,
        Signature::preset(kind),
        Backend::Vectors(VectorBackend {
            p,
            dim,
            star,
            unary: BTreeMap::new(),
        }),
    )
    .expect("fixture")
}

/// `F2[t]/(t^2)`: basis `1, t` with `t^2 = 0`.
pub fn dual_numbers_f2() -> OmegaGroup {
    vector_algebra(
        "F2[t]/(t2)",
        AlgebraKind::Assoc,
        2,
        vec![(
            "mul",
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![0, 0]],
            ],
        )],
    )
}

/// A noncommutative two-dimensional associative algebra over `F3`:
/// `xx = x`, `xy = y`, `yx = yy = 0`.
pub fn assoc_noncomm_f3() -> OmegaGroup {
    vector_algebra(
        "A2-F3",
        AlgebraKind::Assoc,
        3,
        vec![(
            "mul",
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 0], vec![0, 0]],
            ],
        )],
    )
}

/// The two-dimensional abelian Lie algebra over `F3`.
pub fn lie_abelian_f3() -> OmegaGroup {
    let z = vec![0, 0];
    vector_algebra(
        "ab2-F3",
        AlgebraKind::Lie,
        3,
        vec![(
            "bracket",
            vec![vec![z.clone(), z.clone()], vec![z.clone(), z]],
        )],
    )
}

/// The non-abelian two-dimensional Lie algebra over `F3`: `[x, y] = y`.
pub fn lie_affine_f3() -> OmegaGroup {
    vector_algebra(
        "aff2-F3",
        AlgebraKind::Lie,
        3,
        vec![(
            "bracket",
            vec![
                vec![vec![0, 0], vec![0, 1]],
                vec![vec![0, 2], vec![0, 0]],
            ],
        )],
    )
}

/// A Leibniz algebra over `F3` that is not Lie: `[x, x] = y`, all other
/// basis brackets zero.
pub fn leibniz_nilpotent_f3() -> OmegaGroup {
    vector_algebra(
        "nil2-F3",
        AlgebraKind::Leibniz,
        3,
        vec![(
            "bracket",
            vec![
                vec![vec![0, 1], vec![0, 0]],
                vec![vec![0, 0], vec![0, 0]],
            ],
        )],
    )
}

/// The dialgebra on `F2[t]/(t^2)` built from the formal derivative:
/// `a ⊣ b = a·b'` and `a ⊢ b = a'·b`.  The derivative only respects the
/// product in characteristic two, so this fixture is pinned to `F2`.
pub fn dias_differential_f2() -> OmegaGroup {
    // basis 1, t: derivative sends 1 -> 0, t -> 1
    let dashv = vec![
        vec![vec![0, 0], vec![1, 0]],
        vec![vec![0, 0], vec![0, 1]],
    ];
    let vdash = vec![
        vec![vec![0, 0], vec![0, 0]],
        vec![vec![1, 0], vec![0, 1]],
    ];
    vector_algebra(
        "dias-F2",
        AlgebraKind::DiAs,
        2,
        vec![("dashv", dashv), ("vdash", vdash)],
    )
}

/// The dialgebra with both products equal to the multiplication of
/// [`assoc_noncomm_f3`].
pub fn dias_from_assoc_f3() -> OmegaGroup {
    let mul = vec![
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![0, 0], vec![0, 0]],
    ];
    vector_algebra(
        "dias-A2-F3",
        AlgebraKind::DiAs,
        3,
        vec![("dashv", mul.clone()), ("vdash", mul)],
    )
}

/// The identity crossed module on any carrier: identity boundary,
/// conjugation action, multiplication for the mixed products.
pub fn xm_identity(g: &OmegaGroup) -> CrossedModule {
    let caps = Caps::default();
    let t = g.op_tables(&caps).expect("fixture");
    let n = t.size;
    let mut dot = vec![vec![0usize; n]; n];
    for (r, row) in dot.iter_mut().enumerate() {
        for (e, v) in row.iter_mut().enumerate() {
            *v = t.add[t.add[r][e]][t.neg[r]];
        }
    }
    let mut star_left = BTreeMap::new();
    let mut star_right = BTreeMap::new();
    for sym in &g.signature.stars {
        let table = &t.star[sym];
        let sl = (0..n).map(|r| (0..n).map(|e| table[r][e]).collect()).collect();
        let sr = (0..n).map(|r| (0..n).map(|e| table[e][r]).collect()).collect();
        star_left.insert(sym.clone(), sl);
        star_right.insert(sym.clone(), sr);
    }
    let action = DerivedAction::new(
        g.clone(),
        g.clone(),
        ActionTables {
            dot,
            star_left,
            star_right,
        },
    )
    .expect("fixture");
    CrossedModule::new(action, identity_map(n), false).expect("fixture")
}

/// Zero boundary from `Z2` into `Z3` with the trivial action.
pub fn xm_zero() -> CrossedModule {
    let caps = Caps::default();
    let action = DerivedAction::trivial(cyclic(3), cyclic(2), &caps).expect("fixture");
    CrossedModule::new(action, vec![0, 0], false).expect("fixture")
}

/// `Z4 -> Z2` reduction with the trivial action.
pub fn xm_mod2_z4_z2() -> CrossedModule {
    let caps = Caps::default();
    let action = DerivedAction::trivial(cyclic(2), cyclic(4), &caps).expect("fixture");
    CrossedModule::new(action, vec![0, 1, 0, 1], false).expect("fixture")
}

/// The even permutations inside [`s3`] with the conjugation action.
pub fn xm_inclusion_a3_s3() -> CrossedModule {
    let caps = Caps::default();
    let total = s3();
    let t = total.op_tables(&caps).expect("fixture");
    let a3 = total
        .sub_object(&S3_A3, &caps)
        .expect("fixture")
        .with_name("A3");
    let pos = |idx: usize| S3_A3.iter().position(|&v| v == idx).expect("fixture");
    let mut dot = vec![vec![0usize; 3]; 6];
    for (r, row) in dot.iter_mut().enumerate() {
        for (p, v) in row.iter_mut().enumerate() {
            *v = pos(t.add[t.add[r][S3_A3[p]]][t.neg[r]]);
        }
    }
    let action = DerivedAction::new(
        total,
        a3,
        ActionTables {
            dot,
            star_left: BTreeMap::new(),
            star_right: BTreeMap::new(),
        },
    )
    .expect("fixture");
    CrossedModule::new(action, S3_A3.to_vec(), false).expect("fixture")
}

/// The span of `t` inside `F2[t]/(t^2)` as an ideal, with the
/// multiplication action and inclusion boundary.
pub fn xm_ideal_dual_f2() -> CrossedModule {
    let caps = Caps::default();
    let total = dual_numbers_f2();
    let t = total.op_tables(&caps).expect("fixture");
    // vector indices 0 and 1 are exactly the multiples of t
    let ideal: Vec<usize> = vec![0, 1];
    let sub = total
        .sub_object(&ideal, &caps)
        .expect("fixture")
        .with_name("(t)");
    let nr = t.size;
    let dot = (0..nr).map(|_| (0..ideal.len()).collect()).collect();
    let table = &t.star["mul"];
    let mut sl = vec![vec![0usize; ideal.len()]; nr];
    let mut sr = vec![vec![0usize; ideal.len()]; nr];
    for r in 0..nr {
        for (p, &e) in ideal.iter().enumerate() {
            sl[r][p] = ideal.iter().position(|&v| v == table[r][e]).expect("fixture");
            sr[r][p] = ideal.iter().position(|&v| v == table[e][r]).expect("fixture");
        }
    }
    let action = DerivedAction::new(
        total,
        sub,
        ActionTables {
            dot,
            star_left: BTreeMap::from([("mul".to_string(), sl)]),
            star_right: BTreeMap::from([("mul".to_string(), sr)]),
        },
    )
    .expect("fixture");
    CrossedModule::new(action, ideal, false).expect("fixture")
}

/// `Z4 -> Z2` with the sign flip action: satisfies everything except the
/// self-action law, so it only exists with the `precrossed` flag set.
pub fn precrossed_negation_z4_z2() -> CrossedModule {
    let caps = Caps::default();
    let mut action = DerivedAction::trivial(cyclic(2), cyclic(4), &caps).expect("fixture");
    action.tables.dot[1] = vec![0, 3, 2, 1];
    CrossedModule::new(action, vec![0, 1, 0, 1], true).expect("fixture")
}

/// [`s3`] split over the sign morphism with kernel the even permutations.
pub fn split_extension_s3() -> SplitExtension {
    SplitExtension {
        total: s3(),
        a: s3().sub_object(&S3_A3, &Caps::default()).expect("fixture").with_name("A3"),
        b: cyclic(2),
        incl: S3_A3.to_vec(),
        proj: S3_SIGN.to_vec(),
        section: S3_SIGN_SECTION.to_vec(),
    }
}

/// Every table- and vector-backed carrier fixture, for sweep-style tests.
pub fn all_carriers() -> Vec<OmegaGroup> {
    vec![
        trivial_group(),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        cyclic(6),
        klein(),
        s3(),
        dual_numbers_f2(),
        assoc_noncomm_f3(),
        lie_abelian_f3(),
        lie_affine_f3(),
        leibniz_nilpotent_f3(),
        dias_differential_f2(),
        dias_from_assoc_f3(),
    ]
}

/// Every crossed module fixture (the precrossed one is excluded; it fails
/// the self-action law by design).
pub fn all_crossed_modules() -> Vec<CrossedModule> {
    vec![
        xm_identity(&cyclic(3)),
        xm_identity(&s3()),
        xm_identity(&dual_numbers_f2()),
        xm_identity(&assoc_noncomm_f3()),
        xm_identity(&lie_affine_f3()),
        xm_identity(&leibniz_nilpotent_f3()),
        xm_identity(&dias_differential_f2()),
        xm_zero(),
        xm_mod2_z4_z2(),
        xm_inclusion_a3_s3(),
        xm_ideal_dual_f2(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{action_from_split_extension, validate_derived_action};
    use crate::homotopy::enumerate_derivations;
    use crate::omega::validate_omega_group;
    use crate::transfer::{lift_derivation_to_nerve_homotopy, transfer_homotopy};
    use crate::xmod::{validate_crossed_module, XmodMorphism};

    #[test]
    fn every_carrier_fixture_validates() {
        let caps = Caps::default();
        for g in all_carriers() {
            let report = validate_omega_group(&g, &caps).unwrap();
            assert!(report.ok(), "{}: {:?}", g.name, report.violations);
        }
    }

    #[test]
    fn every_crossed_module_fixture_validates() {
        let caps = Caps::default();
        for xm in all_crossed_modules() {
            let ra = validate_derived_action(&xm.action, &caps).unwrap();
            assert!(ra.ok(), "{}: {:?}", xm.e().name, ra.violations);
            let rx = validate_crossed_module(&xm, &caps).unwrap();
            assert!(rx.ok(), "{}: {:?}", xm.e().name, rx.violations);
        }
    }

    #[test]
    fn the_precrossed_fixture_needs_its_flag() {
        let caps = Caps::default();
        let pre = precrossed_negation_z4_z2();
        assert!(validate_crossed_module(&pre, &caps).unwrap().ok());
        let mut forced = pre.clone();
        forced.precrossed = false;
        let report = validate_crossed_module(&forced, &caps).unwrap();
        assert!(report
            .violations
            .iter()
            .all(|v| v.law.starts_with("peiffer")));
        assert!(!report.ok());
    }

    #[test]
    fn sign_split_extension_recovers_conjugation_on_a3() {
        let caps = Caps::default();
        let ext = split_extension_s3();
        let action = action_from_split_extension(&ext, &caps).unwrap();
        let expected = xm_inclusion_a3_s3();
        // the extension action is by Z2 through the section, so compare on
        // the section's image
        for (b, &r) in S3_SIGN_SECTION.iter().enumerate() {
            assert_eq!(action.tables.dot[b], expected.action.tables.dot[r]);
        }
    }

    #[test]
    fn nonabelian_lift_and_transfer_round_trip() {
        let caps = Caps::default();
        let xm = xm_identity(&s3());
        let f = XmodMorphism::identity(&xm);
        let ds = enumerate_derivations(&f, &caps).unwrap();
        assert!(!ds.is_empty());
        for d in &ds {
            let hom = lift_derivation_to_nerve_homotopy(d, &caps).unwrap();
            let got = transfer_homotopy(&hom, &caps)
                .unwrap()
                .derivation
                .expect("transfer should succeed");
            assert_eq!(got.s, d.s);
        }
    }

    #[test]
    fn dialgebra_lift_and_transfer_round_trip() {
        let caps = Caps::default();
        let xm = xm_identity(&dias_differential_f2());
        let f = XmodMorphism::identity(&xm);
        let ds = enumerate_derivations(&f, &caps).unwrap();
        assert!(!ds.is_empty());
        for d in &ds {
            let hom = lift_derivation_to_nerve_homotopy(d, &caps).unwrap();
            let got = transfer_homotopy(&hom, &caps)
                .unwrap()
                .derivation
                .expect("transfer should succeed");
            assert_eq!(got.s, d.s);
        }
    }
}
