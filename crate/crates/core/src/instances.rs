//! Kind-specific forms of the derivation laws and functors that change the
//! algebra kind of a whole crossed module.
//!
//! The generic law checker in [`crate::homotopy`] works symbol by symbol
//! from the signature.  For each concrete algebra kind the same laws have a
//! short hand-written form; [`specialized_derivation_check`] implements
//! those directly so the two can be played against each other.

use std::collections::BTreeMap;

use crate::action::{ActionTables, DerivedAction};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::homotopy::{validate_derivation, Derivation};
use crate::omega::{Backend, ElementMap, OmegaGroup, VectorBackend};
use crate::report::{push_violation, ValidationReport, Violation};
use crate::signature::{AlgebraKind, Signature};
use crate::xmod::{validate_crossed_module, validate_xmod_morphism, CrossedModule, XmodMorphism};

/// Checks the derivation laws for `d` in the shape they take for the
/// algebra kind of its endpoints.  For the algebra kinds the map must be
/// additive to begin with; a non-additive table is rejected as
/// [`Error::NotLinear`] rather than reported as a law failure.
pub fn specialized_derivation_check(d: &Derivation, caps: &Caps) -> Result<ValidationReport> {
    let f = &d.morphism;
    let kind = f.source.r().signature.kind;
    if f.target.r().signature.kind != kind {
        return Err(Error::KindMismatch(format!(
            "endpoints disagree: {} vs {}",
            kind,
            f.target.r().signature.kind
        )));
    }
    let tr = f.source.r().op_tables(caps)?;
    let te = f.target.e().op_tables(caps)?;
    let act = &f.target.action.tables;
    let s = &d.s;
    let f0 = &f.f0;
    let nr = tr.size;
    let mut report = ValidationReport::new("specialized derivation laws");
    let named = |g: usize, h: usize| {
        vec![
            ("g".to_string(), f.source.r().element(g).to_string()),
            ("h".to_string(), f.source.r().element(h).to_string()),
        ]
    };

    if kind == AlgebraKind::Group {
        report.law("group-sum-rule");
        for g in 0..nr {
            for h in 0..nr {
                report.checks += 1;
                let lhs = s[tr.add[g][h]];
                let rhs = te.add[act.dot[f0[tr.neg[h]]][s[g]]][s[h]];
                if lhs != rhs {
                    push_violation(
                        &mut report,
                        Violation {
                            law: "group-sum-rule".into(),
                            assignment: named(g, h),
                            lhs: f.target.e().element(lhs).to_string(),
                            rhs: f.target.e().element(rhs).to_string(),
                        },
                    );
                }
            }
        }
        return Ok(report);
    }

    if kind == AlgebraKind::Generic {
        return Err(Error::KindMismatch(
            "no specialized law set for generic signatures".into(),
        ));
    }

    // the algebra kinds: additivity first, then a product rule per symbol
    for g in 0..nr {
        for h in 0..nr {
            if s[tr.add[g][h]] != te.add[s[g]][s[h]] {
                return Err(Error::NotLinear(format!(
                    "not additive at g={}, h={}",
                    f.source.r().element(g),
                    f.source.r().element(h)
                )));
            }
        }
    }
    report.law("additivity");
    report.checks += nr * nr;

    let sub = |x: usize, y: usize| te.add[x][te.neg[y]];
    let product_rule = |report: &mut ValidationReport, law: &str, sym: &str, rhs_of: &dyn Fn(usize, usize) -> usize| {
        report.law(law);
        let table = &tr.star[sym];
        for g in 0..nr {
            for h in 0..nr {
                report.checks += 1;
                let lhs = s[table[g][h]];
                let rhs = rhs_of(g, h);
                if lhs != rhs {
                    push_violation(
                        report,
                        Violation {
                            law: law.into(),
                            assignment: named(g, h),
                            lhs: f.target.e().element(lhs).to_string(),
                            rhs: f.target.e().element(rhs).to_string(),
                        },
                    );
                }
            }
        }
    };

    match kind {
        AlgebraKind::Assoc => {
            let sl = &act.star_left["mul"];
            let sr = &act.star_right["mul"];
            let mul = &te.star["mul"];
            product_rule(&mut report, "product-rule", "mul", &|g, h| {
                te.add[te.add[sl[f0[g]][s[h]]][sr[f0[h]][s[g]]]][mul[s[g]][s[h]]]
            });
        }
        AlgebraKind::Lie => {
            // mixed brackets with the base on the right are rewritten
            // through antisymmetry, so only star_left appears
            let sl = &act.star_left["bracket"];
            let br = &te.star["bracket"];
            product_rule(&mut report, "bracket-rule", "bracket", &|g, h| {
                te.add[sub(sl[f0[g]][s[h]], sl[f0[h]][s[g]])][br[s[g]][s[h]]]
            });
        }
        AlgebraKind::Leibniz => {
            let sl = &act.star_left["bracket"];
            let sr = &act.star_right["bracket"];
            let br = &te.star["bracket"];
            product_rule(&mut report, "bracket-rule", "bracket", &|g, h| {
                te.add[te.add[sl[f0[g]][s[h]]][sr[f0[h]][s[g]]]][br[s[g]][s[h]]]
            });
        }
        AlgebraKind::DiAs => {
            for sym in ["dashv", "vdash"] {
                let sl = &act.star_left[sym];
                let sr = &act.star_right[sym];
                let st = &te.star[sym];
                product_rule(
                    &mut report,
                    &format!("product-rule[{}]", sym),
                    sym,
                    &|g, h| te.add[te.add[sl[f0[g]][s[h]]][sr[f0[h]][s[g]]]][st[s[g]][s[h]]],
                );
            }
        }
        AlgebraKind::Group | AlgebraKind::Generic => unreachable!(),
    }
    Ok(report)
}

/// All additive maps between two vector carriers over the same prime, as
/// value tables, in matrix-odometer order.
pub fn enumerate_linear_maps(
    src: &OmegaGroup,
    dst: &OmegaGroup,
    caps: &Caps,
) -> Result<Vec<ElementMap>> {
    let (vs, vd) = match (&src.backend, &dst.backend) {
        (Backend::Vectors(a), Backend::Vectors(b)) if a.p == b.p => (a, b),
        _ => {
            return Err(Error::InvalidInput(
                "linear map enumeration needs vector carriers over one prime".into(),
            ))
        }
    };
    let p = vs.p as u64;
    let cells = vs.dim * vd.dim;
    let total = p
        .checked_pow(cells as u32)
        .ok_or_else(|| Error::CapExceeded("matrix space overflows".into()))?;
    if total > caps.brute_cap {
        return Err(Error::CapExceeded(format!(
            "{} candidate matrices exceed the brute cap {}",
            total, caps.brute_cap
        )));
    }
    let ns = src.size() as usize;
    let mut out = Vec::with_capacity(total as usize);
    // matrix[k][i] = coordinate k of the image of src basis vector i
    let mut matrix = vec![0u32; cells];
    loop {
        let mut map = Vec::with_capacity(ns);
        for idx in 0..ns {
            let coords = match src.element(idx) {
                crate::omega::Element::Vector(v) => v,
                _ => unreachable!("vector backend"),
            };
            let mut img = vec![0u32; vd.dim];
            for (k, cell) in img.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (i, &c) in coords.iter().enumerate() {
                    acc += c as u64 * matrix[k * vs.dim + i] as u64;
                }
                *cell = (acc % p) as u32;
            }
            map.push(dst.index_of(&crate::omega::Element::Vector(img))?);
        }
        out.push(map);
        // odometer step
        let mut pos = 0;
        loop {
            if pos == cells {
                return Ok(out);
            }
            matrix[pos] += 1;
            if (matrix[pos] as u64) < p {
                break;
            }
            matrix[pos] = 0;
            pos += 1;
        }
    }
}

/// A functor that changes the algebra kind of carriers, actions, and whole
/// crossed modules while keeping the underlying additive data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindFunctor {
    /// Associative to Lie: bracket is the commutator.  Needs an odd prime.
    Liezation,
    /// Dialgebra to Leibniz: bracket is `x ⊣ y − y ⊢ x`.
    DialgebraToLeibniz,
}

impl KindFunctor {
    fn expects(self) -> AlgebraKind {
        match self {
            KindFunctor::Liezation => AlgebraKind::Assoc,
            KindFunctor::DialgebraToLeibniz => AlgebraKind::DiAs,
        }
    }

    fn produces(self) -> AlgebraKind {
        match self {
            KindFunctor::Liezation => AlgebraKind::Lie,
            KindFunctor::DialgebraToLeibniz => AlgebraKind::Leibniz,
        }
    }
}

/// Applies a kind functor to one carrier.
pub fn transport_carrier(g: &OmegaGroup, functor: KindFunctor) -> Result<OmegaGroup> {
    if g.signature.kind != functor.expects() {
        return Err(Error::KindMismatch(format!(
            "{:?} starts from {} carriers, got {}",
            functor,
            functor.expects(),
            g.signature.kind
        )));
    }
    let v = match &g.backend {
        Backend::Vectors(v) => v,
        Backend::Table(_) => {
            return Err(Error::InvalidInput(
                "kind functors are implemented for vector carriers".into(),
            ))
        }
    };
    if functor == KindFunctor::Liezation && v.p == 2 {
        return Err(Error::CharTwo);
    }
    let p = v.p;
    let diff = |a: &[u32], b: &[u32]| -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| (p + x - y) % p).collect()
    };
    let bracket: Vec<Vec<Vec<u32>>> = match functor {
        KindFunctor::Liezation => {
            let mul = &v.star["mul"];
            (0..v.dim)
                .map(|i| (0..v.dim).map(|j| diff(&mul[i][j], &mul[j][i])).collect())
                .collect()
        }
        KindFunctor::DialgebraToLeibniz => {
            let dashv = &v.star["dashv"];
            let vdash = &v.star["vdash"];
            (0..v.dim)
                .map(|i| {
                    (0..v.dim)
                        .map(|j| diff(&dashv[i][j], &vdash[j][i]))
                        .collect()
                })
                .collect()
        }
    };
    OmegaGroup::new(
        format!("{}[{}]", functor.produces(), g.name),
        Signature::preset(functor.produces()),
        Backend::Vectors(VectorBackend {
            p,
            dim: v.dim,
            star: BTreeMap::from([("bracket".to_string(), bracket)]),
            unary: BTreeMap::new(),
        }),
    )
}

/// Applies a kind functor to a whole crossed module: both carriers change
/// kind, the mixed products are recombined accordingly, and everything else
/// is carried over index for index.  The output is re-validated; a failure
/// is an internal error.
pub fn transport_xmod(xm: &CrossedModule, functor: KindFunctor, caps: &Caps) -> Result<CrossedModule> {
    let e = transport_carrier(xm.e(), functor)?;
    let r = transport_carrier(xm.r(), functor)?;
    let te = xm.e().op_tables(caps)?;
    let nr = xm.r().size() as usize;
    let ne = xm.e().size() as usize;
    let sub = |x: usize, y: usize| te.add[x][te.neg[y]];
    let (sl_new, sr_new): (Vec<Vec<usize>>, Vec<Vec<usize>>) = match functor {
        KindFunctor::Liezation => {
            let sl = &xm.action.tables.star_left["mul"];
            let sr = &xm.action.tables.star_right["mul"];
            (
                (0..nr)
                    .map(|b| (0..ne).map(|a| sub(sl[b][a], sr[b][a])).collect())
                    .collect(),
                (0..nr)
                    .map(|b| (0..ne).map(|a| sub(sr[b][a], sl[b][a])).collect())
                    .collect(),
            )
        }
        KindFunctor::DialgebraToLeibniz => {
            let sl_d = &xm.action.tables.star_left["dashv"];
            let sr_d = &xm.action.tables.star_right["dashv"];
            let sl_v = &xm.action.tables.star_left["vdash"];
            let sr_v = &xm.action.tables.star_right["vdash"];
            (
                (0..nr)
                    .map(|b| (0..ne).map(|a| sub(sl_d[b][a], sr_v[b][a])).collect())
                    .collect(),
                (0..nr)
                    .map(|b| (0..ne).map(|a| sub(sr_d[b][a], sl_v[b][a])).collect())
                    .collect(),
            )
        }
    };
    let action = DerivedAction::new(
        r,
        e,
        ActionTables {
            dot: xm.action.tables.dot.clone(),
            star_left: BTreeMap::from([("bracket".to_string(), sl_new)]),
            star_right: BTreeMap::from([("bracket".to_string(), sr_new)]),
        },
    )?;
    let out = CrossedModule::new(action, xm.boundary.clone(), xm.precrossed)?;
    let report = validate_crossed_module(&out, caps)?;
    if !report.ok() {
        let v = &report.violations[0];
        return Err(Error::InternalTheoremViolation(format!(
            "transported crossed module fails {}: {} != {}",
            v.law, v.lhs, v.rhs
        )));
    }
    Ok(out)
}

/// Applies a kind functor to a morphism: the value tables survive
/// unchanged over the transported endpoints.
pub fn transport_morphism(
    m: &XmodMorphism,
    functor: KindFunctor,
    caps: &Caps,
) -> Result<XmodMorphism> {
    let out = XmodMorphism {
        source: transport_xmod(&m.source, functor, caps)?,
        target: transport_xmod(&m.target, functor, caps)?,
        f0: m.f0.clone(),
        f1: m.f1.clone(),
    };
    let report = validate_xmod_morphism(&out, caps)?;
    if !report.ok() {
        let v = &report.violations[0];
        return Err(Error::InternalTheoremViolation(format!(
            "transported morphism fails {}: {} != {}",
            v.law, v.lhs, v.rhs
        )));
    }
    Ok(out)
}

/// Applies a kind functor to a derivation: the same value table must
/// satisfy the derivation laws of the new kind, and a failure there is an
/// internal error, not an input error.
pub fn transport_derivation(
    d: &Derivation,
    functor: KindFunctor,
    caps: &Caps,
) -> Result<Derivation> {
    let out = Derivation::new(transport_morphism(&d.morphism, functor, caps)?, d.s.clone())?;
    let report = validate_derivation(&out, caps)?;
    if !report.ok() {
        let v = &report.violations[0];
        return Err(Error::InternalTheoremViolation(format!(
            "transported derivation fails {}: {} != {}",
            v.law, v.lhs, v.rhs
        )));
    }
    Ok(out)
}
