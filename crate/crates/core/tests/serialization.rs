//! Every document kind survives a render/parse round trip byte for byte, and
//! freshly relabeled carriers serialize as well as the built-in fixtures do.

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xmodkit_core::fixtures::{all_carriers, all_crossed_modules, xm_mod2_z4_z2};
use xmodkit_core::homotopy::enumerate_derivations;
use xmodkit_core::io::{
    document_to_string, parse_document, ActionDoc, CarrierDoc, DerivationDoc, DerivationListDoc,
    Document, SimplicialDoc, SimplicialHomotopyDoc, SimplicialMapDoc, XmodDoc, XmodMorphismDoc,
};
use xmodkit_core::iso::find_isomorphism;
use xmodkit_core::omega::{validate_omega_group, Backend, OmegaGroup, TableBackend};
use xmodkit_core::transfer::{lift_derivation_to_nerve_homotopy, nerve, nerve_map};
use xmodkit_core::xmod::enumerate_xmod_morphisms;
use xmodkit_core::Caps;

fn documents() -> &'static Vec<Document> {
    static POOL: OnceLock<Vec<Document>> = OnceLock::new();
    POOL.get_or_init(|| {
        let caps = Caps::default();
        let mut out = Vec::new();
        for g in all_carriers() {
            out.push(Document::OmegaGroup(CarrierDoc::from_core(&g)));
        }
        for xm in all_crossed_modules() {
            out.push(Document::Action(ActionDoc::from_core(&xm.action)));
            out.push(Document::Xmod(XmodDoc::from_core(&xm)));
        }
        let xm = xm_mod2_z4_z2();
        let endos = enumerate_xmod_morphisms(&xm, &xm, &caps).unwrap();
        for f in &endos {
            out.push(Document::XmodMorphism(XmodMorphismDoc::from_core(f)));
            let ds = enumerate_derivations(f, &caps).unwrap();
            for d in &ds {
                out.push(Document::Derivation(DerivationDoc::from_core(d)));
            }
            out.push(Document::DerivationList(DerivationListDoc {
                morphism: XmodMorphismDoc::from_core(f),
                derivations: ds.iter().map(|d| d.s.clone()).collect(),
            }));
        }
        out.push(Document::Simplicial(SimplicialDoc::from_core(
            &nerve(&xm, 2, &caps).unwrap(),
        )));
        let m = nerve_map(&endos[endos.len() - 1], 2, &caps).unwrap();
        out.push(Document::SimplicialMap(SimplicialMapDoc::from_core(&m)));
        let d = &enumerate_derivations(&endos[0], &caps).unwrap()[0];
        out.push(Document::SimplicialHomotopy(SimplicialHomotopyDoc::from_core(
            &lift_derivation_to_nerve_homotopy(d, &caps).unwrap(),
        )));
        out.push(Document::Report(
            validate_omega_group(&all_carriers()[0], &caps).unwrap(),
        ));
        out
    })
}

fn permute_table(g: &OmegaGroup, pi: &[usize]) -> OmegaGroup {
    let Backend::Table(tb) = &g.backend else {
        panic!("only table carriers get relabeled");
    };
    let n = tb.size;
    let permuted = |t: &Vec<Vec<usize>>| {
        let mut out = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[pi[i]][pi[j]] = pi[t[i][j]];
            }
        }
        out
    };
    let mut neg = vec![0usize; n];
    for i in 0..n {
        neg[pi[i]] = pi[tb.neg[i]];
    }
    let mut unary = tb.unary.clone();
    for table in unary.values_mut() {
        let mut out = vec![0usize; n];
        for i in 0..n {
            out[pi[i]] = pi[table[i]];
        }
        *table = out;
    }
    OmegaGroup::new(
        format!("{}~", g.name),
        g.signature.clone(),
        Backend::Table(TableBackend {
            size: n,
            zero: pi[tb.zero],
            add: permuted(&tb.add),
            neg,
            star: tb.star.iter().map(|(k, t)| (k.clone(), permuted(t))).collect(),
            unary,
        }),
    )
    .expect("relabeling keeps table shapes")
}

fn table_carriers() -> &'static Vec<OmegaGroup> {
    static POOL: OnceLock<Vec<OmegaGroup>> = OnceLock::new();
    POOL.get_or_init(|| {
        all_carriers()
            .into_iter()
            .filter(|g| matches!(g.backend, Backend::Table(_)))
            .collect()
    })
}

proptest! {
    #[test]
    fn every_document_kind_round_trips(idx in any::<prop::sample::Index>()) {
        let doc = idx.get(documents());
        let text = document_to_string(doc);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, doc);
        prop_assert_eq!(document_to_string(&back), text);
    }

    #[test]
    fn trailing_garbage_is_rejected(idx in any::<prop::sample::Index>()) {
        let doc = idx.get(documents());
        let mut text = document_to_string(doc);
        text.push_str("{}");
        prop_assert!(parse_document(&text).is_err());
    }

    // relabeling the elements of a lawful carrier yields a lawful,
    // isomorphic carrier whose document round-trips like any fixture
    #[test]
    fn relabeled_carriers_serialize_and_validate(
        idx in any::<prop::sample::Index>(),
        seed in any::<u64>(),
    ) {
        let caps = Caps::default();
        let g = idx.get(table_carriers());
        let mut pi: Vec<usize> = (0..g.size() as usize).collect();
        pi.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let relabeled = permute_table(g, &pi);
        prop_assert!(validate_omega_group(&relabeled, &caps).unwrap().ok());
        let doc = Document::OmegaGroup(CarrierDoc::from_core(&relabeled));
        let text = document_to_string(&doc);
        prop_assert_eq!(&parse_document(&text).unwrap(), &doc);
        prop_assert!(find_isomorphism(g, &relabeled, &caps).unwrap().is_some());
    }
}

#[test]
fn the_pool_covers_every_kind() {
    let mut kinds: Vec<&str> = documents().iter().map(|d| d.kind_name()).collect();
    kinds.sort_unstable();
    kinds.dedup();
    assert_eq!(kinds.len(), 10, "kinds present: {:?}", kinds);
}
