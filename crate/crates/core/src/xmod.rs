use crate::action::DerivedAction;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::omega::{
    check_morphism, compose_maps, identity_map, Element, ElementMap, OmegaGroup,
};
use crate::report::{push_violation, ValidationReport, Violation};

/// A (pre)crossed module: a boundary morphism `∂ : E -> R` together with an
/// action of `R` on `E` (`action.actor` is `R`, `action.on` is `E`).
///
/// `precrossed` marks structures that are only required to satisfy the
/// equivariance law of the boundary, not the self-action law.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedModule {
    pub action: DerivedAction,
    pub boundary: ElementMap,
    pub precrossed: bool,
}

impl CrossedModule {
    pub fn new(action: DerivedAction, boundary: ElementMap, precrossed: bool) -> Result<Self> {
        let ne = action.on.size() as usize;
        let nr = action.actor.size() as usize;
        if boundary.len() != ne {
            return Err(Error::InvalidInput(format!(
                "boundary table has {} entries, top object has {} elements",
                boundary.len(),
                ne
            )));
        }
        if let Some(&bad) = boundary.iter().find(|&&v| v >= nr) {
            return Err(Error::InvalidInput(format!(
                "boundary value {} out of range 0..{}",
                bad, nr
            )));
        }
        Ok(CrossedModule {
            action,
            boundary,
            precrossed,
        })
    }

    /// The top object `E`.
    pub fn e(&self) -> &OmegaGroup {
        &self.action.on
    }

    /// The base object `R`.
    pub fn r(&self) -> &OmegaGroup {
        &self.action.actor
    }
}

/// Structural equality that ignores carrier names: same signatures, same
/// operation data, same action tables, same boundary.
pub fn same_crossed_module(x: &CrossedModule, y: &CrossedModule) -> bool {
    x.e().signature == y.e().signature
        && x.r().signature == y.r().signature
        && x.e().backend == y.e().backend
        && x.r().backend == y.r().backend
        && x.action.tables == y.action.tables
        && x.boundary == y.boundary
        && x.precrossed == y.precrossed
}

fn vio(
    report: &mut ValidationReport,
    law: &str,
    names: &[&str],
    vals: &[Element],
    lhs: Element,
    rhs: Element,
) {
    push_violation(
        report,
        Violation {
            law: law.to_string(),
            assignment: names
                .iter()
                .zip(vals.iter())
                .map(|(n, v)| (n.to_string(), v.to_string()))
                .collect(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        },
    );
}

/// Validates the two crossed-module laws on top of the boundary being a
/// morphism:
///
/// * equivariance: `∂(r·e) = r + ∂e - r` and `∂(r∗e) = r ∗ ∂e` (both
///   placements);
/// * self-action (skipped for precrossed structures): `∂e · e' = e + e' - e`
///   and `∂e ∗ e' = e ∗ e'` (both placements).
///
/// The action conditions themselves are a separate concern; run
/// [`validate_derived_action`](crate::action::validate_derived_action) for
/// those.
pub fn validate_crossed_module(xm: &CrossedModule, caps: &Caps) -> Result<ValidationReport> {
    let e = xm.e();
    let r = xm.r();
    let te = e.op_tables(caps)?;
    let tr = r.op_tables(caps)?;
    let ne = te.size;
    let nr = tr.size;
    let stars = e.signature.stars.len() as u64;
    let need = (nr as u64 * ne as u64) * (1 + 2 * stars)
        + (ne as u64 * ne as u64) * (1 + 2 * stars);
    if need > Caps::ASSIGNMENT_BUDGET {
        return Err(Error::CapExceeded(format!(
            "crossed-module validation needs {} law instances, budget is {}",
            need,
            Caps::ASSIGNMENT_BUDGET
        )));
    }

    let mut report = ValidationReport::new(format!("crossed module {} -> {}", e.name, r.name));
    report.absorb(check_morphism(&xm.boundary, e, r, caps)?);

    let d = &xm.boundary;
    let dot = &xm.action.tables.dot;
    let ee = |i: usize| e.element(i);
    let er = |i: usize| r.element(i);

    report.law("equivariance-dot");
    for ri in 0..nr {
        for ei in 0..ne {
            report.checks += 1;
            let l = d[dot[ri][ei]];
            let rhs = tr.add[tr.add[ri][d[ei]]][tr.neg[ri]];
            if l != rhs {
                vio(
                    &mut report,
                    "equivariance-dot",
                    &["r", "e"],
                    &[er(ri), ee(ei)],
                    er(l),
                    er(rhs),
                );
            }
        }
    }
    for sym in &e.signature.stars {
        let sl = &xm.action.tables.star_left[sym];
        let sr = &xm.action.tables.star_right[sym];
        let star_r = &tr.star[sym];
        let law = format!("equivariance-star[r*e][{}]", sym);
        report.law(law.clone());
        for ri in 0..nr {
            for ei in 0..ne {
                report.checks += 1;
                let l = d[sl[ri][ei]];
                let rhs = star_r[ri][d[ei]];
                if l != rhs {
                    vio(&mut report, &law, &["r", "e"], &[er(ri), ee(ei)], er(l), er(rhs));
                }
            }
        }
        let law = format!("equivariance-star[e*r][{}]", sym);
        report.law(law.clone());
        for ri in 0..nr {
            for ei in 0..ne {
                report.checks += 1;
                let l = d[sr[ri][ei]];
                let rhs = star_r[d[ei]][ri];
                if l != rhs {
                    vio(&mut report, &law, &["r", "e"], &[er(ri), ee(ei)], er(l), er(rhs));
                }
            }
        }
    }

    if xm.precrossed {
        report.note("precrossed: the self-action (Peiffer) law was not required".to_string());
        return Ok(report);
    }

    report.law("peiffer-dot");
    for e1 in 0..ne {
        let de1 = d[e1];
        for e2 in 0..ne {
            report.checks += 1;
            let l = dot[de1][e2];
            let rhs = te.add[te.add[e1][e2]][te.neg[e1]];
            if l != rhs {
                vio(
                    &mut report,
                    "peiffer-dot",
                    &["e", "e'"],
                    &[ee(e1), ee(e2)],
                    ee(l),
                    ee(rhs),
                );
            }
        }
    }
    for sym in &e.signature.stars {
        let sl = &xm.action.tables.star_left[sym];
        let sr = &xm.action.tables.star_right[sym];
        let star_e = &te.star[sym];
        let law = format!("peiffer-star[left][{}]", sym);
        report.law(law.clone());
        for e1 in 0..ne {
            let de1 = d[e1];
            for e2 in 0..ne {
                report.checks += 1;
                let l = sl[de1][e2];
                let rhs = star_e[e1][e2];
                if l != rhs {
                    vio(&mut report, &law, &["e", "e'"], &[ee(e1), ee(e2)], ee(l), ee(rhs));
                }
            }
        }
        let law = format!("peiffer-star[right][{}]", sym);
        report.law(law.clone());
        for e1 in 0..ne {
            let de1 = d[e1];
            for e2 in 0..ne {
                report.checks += 1;
                let l = sr[de1][e2];
                let rhs = star_e[e2][e1];
                if l != rhs {
                    vio(&mut report, &law, &["e", "e'"], &[ee(e1), ee(e2)], ee(l), ee(rhs));
                }
            }
        }
    }

    Ok(report)
}

/// A morphism of crossed modules: `f0` on the bases, `f1` on the top objects,
/// commuting with the boundaries and the actions.  Source and target are
/// owned so the morphism is self-contained.
#[derive(Debug, Clone, PartialEq)]
pub struct XmodMorphism {
    pub source: CrossedModule,
    pub target: CrossedModule,
    pub f0: ElementMap,
    pub f1: ElementMap,
}

impl XmodMorphism {
    pub fn identity(xm: &CrossedModule) -> Self {
        XmodMorphism {
            source: xm.clone(),
            target: xm.clone(),
            f0: identity_map(xm.r().size() as usize),
            f1: identity_map(xm.e().size() as usize),
        }
    }
}

/// Checks that `(f0, f1)` is a morphism of crossed modules: both components
/// preserve the operations, the boundary square commutes, and `f1` is
/// equivariant over `f0` for dot and for both mixed star placements.
pub fn validate_xmod_morphism(m: &XmodMorphism, caps: &Caps) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("crossed-module morphism".to_string());
    report.absorb(check_morphism(&m.f0, m.source.r(), m.target.r(), caps)?);
    report.absorb(check_morphism(&m.f1, m.source.e(), m.target.e(), caps)?);

    let ne = m.source.e().size() as usize;
    let nr = m.source.r().size() as usize;
    let ee = |i: usize| m.source.e().element(i);
    let er = |i: usize| m.source.r().element(i);
    let te_dst = |i: usize| m.target.e().element(i);
    let tr_dst = |i: usize| m.target.r().element(i);

    report.law("boundary-square");
    for e1 in 0..ne {
        report.checks += 1;
        let l = m.f0[m.source.boundary[e1]];
        let r = m.target.boundary[m.f1[e1]];
        if l != r {
            vio(
                &mut report,
                "boundary-square",
                &["e"],
                &[ee(e1)],
                tr_dst(l),
                tr_dst(r),
            );
        }
    }

    report.law("equivariance-dot");
    let sdot = &m.source.action.tables.dot;
    let ddot = &m.target.action.tables.dot;
    for ri in 0..nr {
        for e1 in 0..ne {
            report.checks += 1;
            let l = m.f1[sdot[ri][e1]];
            let r = ddot[m.f0[ri]][m.f1[e1]];
            if l != r {
                vio(
                    &mut report,
                    "equivariance-dot",
                    &["r", "e"],
                    &[er(ri), ee(e1)],
                    te_dst(l),
                    te_dst(r),
                );
            }
        }
    }
    for sym in &m.source.e().signature.stars {
        for (placement, ssrc, sdst) in [
            (
                "r*e",
                &m.source.action.tables.star_left[sym],
                &m.target.action.tables.star_left[sym],
            ),
            (
                "e*r",
                &m.source.action.tables.star_right[sym],
                &m.target.action.tables.star_right[sym],
            ),
        ] {
            let law = format!("equivariance-star[{}][{}]", placement, sym);
            report.law(law.clone());
            for ri in 0..nr {
                for e1 in 0..ne {
                    report.checks += 1;
                    let l = m.f1[ssrc[ri][e1]];
                    let r = sdst[m.f0[ri]][m.f1[e1]];
                    if l != r {
                        vio(
                            &mut report,
                            &law,
                            &["r", "e"],
                            &[er(ri), ee(e1)],
                            te_dst(l),
                            te_dst(r),
                        );
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `g ∘ f`, defined when `f`'s target is `g`'s source (same structure, names
/// aside).
pub fn compose_xmod_morphisms(g: &XmodMorphism, f: &XmodMorphism) -> Result<XmodMorphism> {
    if !same_crossed_module(&f.target, &g.source) {
        return Err(Error::SourceTargetMismatch(
            "cannot compose: target of the first morphism differs from source of the second"
                .into(),
        ));
    }
    Ok(XmodMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        f0: compose_maps(&g.f0, &f.f0),
        f1: compose_maps(&g.f1, &f.f1),
    })
}

/// All morphisms `src -> dst`, ordered by `(f0, f1)` tables.
///
/// Candidates for each component come from the carrier-level morphism search;
/// `f0` candidates are pre-filtered by requiring the image of the source
/// boundary to land inside the image of the target boundary, then pairs are
/// kept when the boundary square and action equivariance hold.
pub fn enumerate_xmod_morphisms(
    src: &CrossedModule,
    dst: &CrossedModule,
    caps: &Caps,
) -> Result<Vec<XmodMorphism>> {
    let f0s = crate::omega::enumerate_morphisms(src.r(), dst.r(), caps)?;
    let f1s = crate::omega::enumerate_morphisms(src.e(), dst.e(), caps)?;
    let ne = src.e().size() as usize;
    let nr = src.r().size() as usize;

    let mut dst_boundary_image = vec![false; dst.r().size() as usize];
    for &v in &dst.boundary {
        dst_boundary_image[v] = true;
    }
    let src_boundary_image: Vec<usize> = {
        let mut seen = vec![false; nr];
        for &v in &src.boundary {
            seen[v] = true;
        }
        (0..nr).filter(|&i| seen[i]).collect()
    };
    let f0s: Vec<_> = f0s
        .into_iter()
        .filter(|f0| src_boundary_image.iter().all(|&v| dst_boundary_image[f0[v]]))
        .collect();

    let sdot = &src.action.tables.dot;
    let ddot = &dst.action.tables.dot;
    let mut out = Vec::new();
    for f0 in &f0s {
        'next_f1: for f1 in &f1s {
            for e1 in 0..ne {
                if f0[src.boundary[e1]] != dst.boundary[f1[e1]] {
                    continue 'next_f1;
                }
            }
            for ri in 0..nr {
                for e1 in 0..ne {
                    if f1[sdot[ri][e1]] != ddot[f0[ri]][f1[e1]] {
                        continue 'next_f1;
                    }
                }
            }
            for sym in &src.e().signature.stars {
                for (ssrc, sdst) in [
                    (
                        &src.action.tables.star_left[sym],
                        &dst.action.tables.star_left[sym],
                    ),
                    (
                        &src.action.tables.star_right[sym],
                        &dst.action.tables.star_right[sym],
                    ),
                ] {
                    for ri in 0..nr {
                        for e1 in 0..ne {
                            if f1[ssrc[ri][e1]] != sdst[f0[ri]][f1[e1]] {
                                continue 'next_f1;
                            }
                        }
                    }
                }
            }
            out.push(XmodMorphism {
                source: src.clone(),
                target: dst.clone(),
                f0: f0.clone(),
                f1: f1.clone(),
            });
        }
    }
    out.sort_by(|a, b| (&a.f0, &a.f1).cmp(&(&b.f0, &b.f1)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{ActionTables, DerivedAction};
    use crate::omega::{Backend, TableBackend};
    use crate::signature::{AlgebraKind, Signature};
    use std::collections::BTreeMap;

    fn cyclic(n: usize) -> OmegaGroup {
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
        .unwrap()
    }

    fn mod2_negation(precrossed: bool) -> CrossedModule {
        // Z4 -> Z2 reduction, with the nontrivial base element acting by
        // negation.  Equivariance holds; the self-action law does not.
        let action = DerivedAction::new(
            cyclic(2),
            cyclic(4),
            ActionTables {
                dot: vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]],
                star_left: BTreeMap::new(),
                star_right: BTreeMap::new(),
            },
        )
        .unwrap();
        CrossedModule::new(action, vec![0, 1, 0, 1], precrossed).unwrap()
    }

    #[test]
    fn identity_boundary_with_trivial_action_is_crossed() {
        let caps = Caps::default();
        let action = DerivedAction::trivial(cyclic(3), cyclic(3), &caps).unwrap();
        let xm = CrossedModule::new(action, vec![0, 1, 2], false).unwrap();
        let report = validate_crossed_module(&xm, &caps).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
    }

    #[test]
    fn negation_action_fails_the_self_action_law() {
        let caps = Caps::default();
        let xm = mod2_negation(false);
        let report = validate_crossed_module(&xm, &caps).unwrap();
        assert!(!report.ok());
        assert!(report.violations.iter().all(|v| v.law == "peiffer-dot"));
        // The same data is a fine precrossed module.
        let pre = mod2_negation(true);
        assert!(validate_crossed_module(&pre, &caps).unwrap().ok());
    }

    #[test]
    fn morphism_enumeration_respects_the_square() {
        let caps = Caps::default();
        let action = DerivedAction::trivial(cyclic(2), cyclic(2), &caps).unwrap();
        let xm = CrossedModule::new(action, vec![0, 1], false).unwrap();
        let endos = enumerate_xmod_morphisms(&xm, &xm, &caps).unwrap();
        // f0, f1 each range over {0, id}; the square forces f0 = f1.
        assert_eq!(endos.len(), 2);
        for m in &endos {
            assert!(validate_xmod_morphism(m, &caps).unwrap().ok());
            assert_eq!(m.f0, m.f1);
        }
    }

    #[test]
    fn composition_checks_endpoints() {
        let caps = Caps::default();
        let a1 = DerivedAction::trivial(cyclic(2), cyclic(2), &caps).unwrap();
        let xm1 = CrossedModule::new(a1, vec![0, 1], false).unwrap();
        let a2 = DerivedAction::trivial(cyclic(3), cyclic(3), &caps).unwrap();
        let xm2 = CrossedModule::new(a2, vec![0, 1, 2], false).unwrap();
        let id1 = XmodMorphism::identity(&xm1);
        let id2 = XmodMorphism::identity(&xm2);
        assert!(compose_xmod_morphisms(&id1, &id1).is_ok());
        assert!(matches!(
            compose_xmod_morphisms(&id2, &id1),
            Err(Error::SourceTargetMismatch(_))
        ));
    }
}
