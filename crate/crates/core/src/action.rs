use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::omega::{
    assert_same_signature, Backend, Element, ElementMap, OmegaGroup, TableBackend,
};
use crate::report::{push_violation, ValidationReport, Violation};

/// The raw data of an action of `B` on `A`: a dot action and, for every star
/// symbol, the two mixed products.
///
/// Conventions: `dot[b][a]` is `b · a`; `star_left[sym][b][a]` is `b ∗ a`
/// (actor on the left); `star_right[sym][b][a]` is `a ∗ b` (actor on the
/// right).  All values are indices into `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTables {
    pub dot: Vec<Vec<usize>>,
    #[serde(default)]
    pub star_left: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub star_right: BTreeMap<String, Vec<Vec<usize>>>,
}

/// An action candidate of `actor` on `on`, both carriers owned.
///
/// Constructing one only checks table shapes; whether the candidate actually
/// satisfies the action conditions is the job of [`validate_derived_action`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedAction {
    pub actor: OmegaGroup,
    pub on: OmegaGroup,
    #[serde(flatten)]
    pub tables: ActionTables,
}

fn check_action_table(
    table: &[Vec<usize>],
    nb: usize,
    na: usize,
    what: &str,
) -> Result<()> {
    if table.len() != nb {
        return Err(Error::MalformedBackend(format!(
            "{}: expected {} rows (one per actor element), found {}",
            what,
            nb,
            table.len()
        )));
    }
    for (b, row) in table.iter().enumerate() {
        if row.len() != na {
            return Err(Error::MalformedBackend(format!(
                "{} row {}: expected {} entries, found {}",
                what,
                b,
                na,
                row.len()
            )));
        }
        for &v in row {
            if v >= na {
                return Err(Error::MalformedBackend(format!(
                    "{} row {}: value {} out of range 0..{}",
                    what, b, v, na
                )));
            }
        }
    }
    Ok(())
}

impl DerivedAction {
    pub fn new(actor: OmegaGroup, on: OmegaGroup, tables: ActionTables) -> Result<Self> {
        assert_same_signature(&actor, &on)?;
        let nb = actor.size() as usize;
        let na = on.size() as usize;
        check_action_table(&tables.dot, nb, na, "dot table")?;
        for sym in &actor.signature.stars {
            let sl = tables.star_left.get(sym).ok_or_else(|| {
                Error::SignatureMismatch(format!("missing star_left table for `{}`", sym))
            })?;
            let sr = tables.star_right.get(sym).ok_or_else(|| {
                Error::SignatureMismatch(format!("missing star_right table for `{}`", sym))
            })?;
            check_action_table(sl, nb, na, &format!("star_left[{}]", sym))?;
            check_action_table(sr, nb, na, &format!("star_right[{}]", sym))?;
        }
        for sym in tables.star_left.keys().chain(tables.star_right.keys()) {
            if !actor.signature.has_star(sym) {
                return Err(Error::SignatureMismatch(format!(
                    "action table for undeclared star `{}`",
                    sym
                )));
            }
        }
        Ok(DerivedAction { actor, on, tables })
    }

    /// The trivial action: dot does nothing, all mixed products are zero.
    pub fn trivial(actor: OmegaGroup, on: OmegaGroup, caps: &Caps) -> Result<Self> {
        let nb = actor.enumerate(caps)?.len();
        let na = on.enumerate(caps)?.len();
        let z = on.index_of(&on.zero())?;
        let dot = (0..nb).map(|_| (0..na).collect()).collect();
        let zeros: Vec<Vec<usize>> = (0..nb).map(|_| vec![z; na]).collect();
        let mut star_left = BTreeMap::new();
        let mut star_right = BTreeMap::new();
        for sym in &actor.signature.stars {
            star_left.insert(sym.clone(), zeros.clone());
            star_right.insert(sym.clone(), zeros.clone());
        }
        DerivedAction::new(
            actor,
            on,
            ActionTables {
                dot,
                star_left,
                star_right,
            },
        )
    }

    pub fn dot(&self, b: usize, a: usize) -> usize {
        self.tables.dot[b][a]
    }
}

/// A split short exact sequence `A -> total -> B` with a chosen section.
/// `incl` and `section` are value tables of morphisms `A -> total` and
/// `B -> total`; `proj` is a morphism `total -> B`.
#[derive(Debug, Clone)]
pub struct SplitExtension {
    pub total: OmegaGroup,
    pub a: OmegaGroup,
    pub b: OmegaGroup,
    pub incl: ElementMap,
    pub proj: ElementMap,
    pub section: ElementMap,
}

/// Reads the action of `B` on `A` off a split extension: conjugation by the
/// section for dot, products against the section for the mixed stars.  Every
/// produced value is checked to land back in the image of `A`.
pub fn action_from_split_extension(ext: &SplitExtension, caps: &Caps) -> Result<DerivedAction> {
    assert_same_signature(&ext.a, &ext.total)?;
    assert_same_signature(&ext.b, &ext.total)?;
    let tg = ext.total.op_tables(caps)?;
    let na = ext.a.size() as usize;
    let nb = ext.b.size() as usize;
    let ng = tg.size;
    for (name, map, len, codomain) in [
        ("incl", &ext.incl, na, ng),
        ("proj", &ext.proj, ng, nb),
        ("section", &ext.section, nb, ng),
    ] {
        if map.len() != len || map.iter().any(|&v| v >= codomain) {
            return Err(Error::InvalidInput(format!(
                "split extension `{}` table has the wrong shape",
                name
            )));
        }
    }
    for (name, f, src, dst) in [
        ("incl", &ext.incl, &ext.a, &ext.total),
        ("proj", &ext.proj, &ext.total, &ext.b),
        ("section", &ext.section, &ext.b, &ext.total),
    ] {
        let rep = crate::omega::check_morphism(f, src, dst, caps)?;
        if !rep.ok() {
            return Err(Error::InvalidInput(format!(
                "split extension `{}` is not a morphism ({} violations)",
                name,
                rep.violations.len()
            )));
        }
    }
    for b in 0..nb {
        if ext.proj[ext.section[b]] != b {
            return Err(Error::InvalidInput(
                "section is not a section of the projection".into(),
            ));
        }
    }
    // The image of A must be exactly the kernel of the projection.
    let zero_b = ext.b.index_of(&ext.b.zero())?;
    let mut back: Vec<Option<usize>> = vec![None; ng];
    for (a, &g) in ext.incl.iter().enumerate() {
        if back[g].is_some() {
            return Err(Error::InvalidInput("inclusion of A is not injective".into()));
        }
        if ext.proj[g] != zero_b {
            return Err(Error::InvalidInput(
                "image of A is not contained in the kernel of the projection".into(),
            ));
        }
        back[g] = Some(a);
    }
    let kernel_size = ext.proj.iter().filter(|&&b| b == zero_b).count();
    if kernel_size != na {
        return Err(Error::InvalidInput(format!(
            "kernel of the projection has {} elements but A has {}",
            kernel_size, na
        )));
    }
    let pull = |g: usize| -> Result<usize> {
        back[g].ok_or_else(|| {
            Error::InternalTheoremViolation(format!(
                "split-extension action produced element {} outside the kernel",
                g
            ))
        })
    };

    let mut dot = vec![vec![0usize; na]; nb];
    for b in 0..nb {
        let s = ext.section[b];
        for a in 0..na {
            let g = tg.add_i(tg.add_i(s, ext.incl[a]), tg.neg_i(s));
            dot[b][a] = pull(g)?;
        }
    }
    let mut star_left = BTreeMap::new();
    let mut star_right = BTreeMap::new();
    for sym in &ext.total.signature.stars {
        let table = &tg.star[sym];
        let mut sl = vec![vec![0usize; na]; nb];
        let mut sr = vec![vec![0usize; na]; nb];
        for b in 0..nb {
            let s = ext.section[b];
            for a in 0..na {
                sl[b][a] = pull(table[s][ext.incl[a]])?;
                sr[b][a] = pull(table[ext.incl[a]][s])?;
            }
        }
        star_left.insert(sym.clone(), sl);
        star_right.insert(sym.clone(), sr);
    }
    DerivedAction::new(
        ext.b.clone(),
        ext.a.clone(),
        ActionTables {
            dot,
            star_left,
            star_right,
        },
    )
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

/// Checks the conditions an action must satisfy to come from a split
/// extension: unit and composition laws for dot, additivity of every
/// placement, triviality of actor-product actions on products, invisibility
/// of dot inside star products, compatibility with unary operations, and
/// additive centrality of products against each other.
///
/// The carriers themselves are *not* re-validated here.  The conditions are
/// necessary for the semidirect construction to work; they are not sufficient
/// for every signature (see the notes in the report).
pub fn validate_derived_action(action: &DerivedAction, caps: &Caps) -> Result<ValidationReport> {
    let a = &action.on;
    let b = &action.actor;
    let ta = a.op_tables(caps)?;
    let tb = b.op_tables(caps)?;
    let na = ta.size as u64;
    let nb = tb.size as u64;
    let stars = a.signature.stars.len() as u64;
    let unops = a.signature.unary.len() as u64;

    let mut need: u64 = na + nb * na * na + nb * nb * na; // conditions 1-3
    need = need.saturating_add(stars * (2 * nb * na * na + 2 * nb * nb * na)); // 4, 5
    need = need.saturating_add(stars * (nb * nb * na * na + 2 * nb * nb * nb * na)); // 6, 7
    need = need.saturating_add(stars * (2 * nb * na * na + 2 * nb * nb * na)); // 8, 9
    need = need.saturating_add(unops * nb * na + unops * stars * 2 * nb * na); // 10, 11
    let a_products = na * na + 2 * na * nb;
    need = need.saturating_add(stars * (a_products * a_products + nb * nb * nb * nb)); // 12
    if need > Caps::ASSIGNMENT_BUDGET {
        return Err(Error::CapExceeded(format!(
            "action validation needs {} law instances, budget is {}",
            need,
            Caps::ASSIGNMENT_BUDGET
        )));
    }

    let mut report = ValidationReport::new(format!("action of {} on {}", b.name, a.name));
    let ea = |i: usize| a.element(i);
    let eb = |i: usize| b.element(i);
    let nasz = ta.size;
    let nbsz = tb.size;
    let dot = &action.tables.dot;

    report.law("unit-action");
    for x in 0..nasz {
        report.checks += 1;
        let l = dot[tb.zero][x];
        if l != x {
            vio(&mut report, "unit-action", &["a"], &[ea(x)], ea(l), ea(x));
        }
    }

    report.law("dot-additive");
    for bb in 0..nbsz {
        for x in 0..nasz {
            for y in 0..nasz {
                report.checks += 1;
                let l = dot[bb][ta.add[x][y]];
                let r = ta.add[dot[bb][x]][dot[bb][y]];
                if l != r {
                    vio(
                        &mut report,
                        "dot-additive",
                        &["b", "a1", "a2"],
                        &[eb(bb), ea(x), ea(y)],
                        ea(l),
                        ea(r),
                    );
                }
            }
        }
    }

    report.law("dot-composition");
    for b1 in 0..nbsz {
        for b2 in 0..nbsz {
            let bsum = tb.add[b1][b2];
            for x in 0..nasz {
                report.checks += 1;
                let l = dot[bsum][x];
                let r = dot[b1][dot[b2][x]];
                if l != r {
                    vio(
                        &mut report,
                        "dot-composition",
                        &["b1", "b2", "a"],
                        &[eb(b1), eb(b2), ea(x)],
                        ea(l),
                        ea(r),
                    );
                }
            }
        }
    }

    for sym in &a.signature.stars {
        let sl = &action.tables.star_left[sym];
        let sr = &action.tables.star_right[sym];
        let sa = &ta.star[sym];
        let sb = &tb.star[sym];

        // 4: both mixed placements are additive in the A argument.
        for (placement, t) in [("b*a", sl), ("a*b", sr)] {
            let law = format!("star-additive-in-a[{}][{}]", placement, sym);
            report.law(law.clone());
            for bb in 0..nbsz {
                for x in 0..nasz {
                    for y in 0..nasz {
                        report.checks += 1;
                        let l = t[bb][ta.add[x][y]];
                        let r = ta.add[t[bb][x]][t[bb][y]];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["b", "a1", "a2"],
                                &[eb(bb), ea(x), ea(y)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
        }

        // 5: and additive in the B argument.
        for (placement, t) in [("b*a", sl), ("a*b", sr)] {
            let law = format!("star-additive-in-b[{}][{}]", placement, sym);
            report.law(law.clone());
            for b1 in 0..nbsz {
                for b2 in 0..nbsz {
                    let bsum = tb.add[b1][b2];
                    for x in 0..nasz {
                        report.checks += 1;
                        let l = t[bsum][x];
                        let r = ta.add[t[b1][x]][t[b2][x]];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["b1", "b2", "a"],
                                &[eb(b1), eb(b2), ea(x)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
        }

        // 6: products of actor elements act trivially on products in A.
        {
            let law = format!("b-products-fix-a-products[{}]", sym);
            report.law(law.clone());
            for b1 in 0..nbsz {
                for b2 in 0..nbsz {
                    let bp = sb[b1][b2];
                    for x in 0..nasz {
                        for y in 0..nasz {
                            report.checks += 1;
                            let p = sa[x][y];
                            let l = dot[bp][p];
                            if l != p {
                                vio(
                                    &mut report,
                                    &law,
                                    &["b1", "b2", "a1", "a2"],
                                    &[eb(b1), eb(b2), ea(x), ea(y)],
                                    ea(l),
                                    ea(p),
                                );
                            }
                        }
                    }
                }
            }
        }

        // 7: ... and on mixed products.
        for (placement, t) in [("b*a", sl), ("a*b", sr)] {
            let law = format!("b-products-fix-mixed[{}][{}]", placement, sym);
            report.law(law.clone());
            for b1 in 0..nbsz {
                for b2 in 0..nbsz {
                    let bp = sb[b1][b2];
                    for bb in 0..nbsz {
                        for x in 0..nasz {
                            report.checks += 1;
                            let p = t[bb][x];
                            let l = dot[bp][p];
                            if l != p {
                                vio(
                                    &mut report,
                                    &law,
                                    &["b1", "b2", "b", "a"],
                                    &[eb(b1), eb(b2), eb(bb), ea(x)],
                                    ea(l),
                                    ea(p),
                                );
                            }
                        }
                    }
                }
            }
        }

        // 8: dot is invisible inside products taken in A.
        {
            let law = format!("dot-inside-a-star[left][{}]", sym);
            report.law(law.clone());
            for x in 0..nasz {
                for bb in 0..nbsz {
                    for y in 0..nasz {
                        report.checks += 1;
                        let l = sa[x][dot[bb][y]];
                        let r = sa[x][y];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["a1", "b", "a2"],
                                &[ea(x), eb(bb), ea(y)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
            let law = format!("dot-inside-a-star[right][{}]", sym);
            report.law(law.clone());
            for x in 0..nasz {
                for bb in 0..nbsz {
                    for y in 0..nasz {
                        report.checks += 1;
                        let l = sa[dot[bb][y]][x];
                        let r = sa[y][x];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["a1", "b", "a2"],
                                &[ea(x), eb(bb), ea(y)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
        }

        // 9: ... and inside mixed products.
        for (placement, t) in [("b*a", sl), ("a*b", sr)] {
            let law = format!("dot-inside-mixed-star[{}][{}]", placement, sym);
            report.law(law.clone());
            for bb in 0..nbsz {
                for b1 in 0..nbsz {
                    for x in 0..nasz {
                        report.checks += 1;
                        let l = t[bb][dot[b1][x]];
                        let r = t[bb][x];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["b", "b1", "a"],
                                &[eb(bb), eb(b1), ea(x)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
        }
    }

    for usym in &a.signature.unary {
        let ua = &ta.unary[usym];
        let ub = &tb.unary[usym];
        let law = format!("unary-respects-dot[{}]", usym);
        report.law(law.clone());
        for bb in 0..nbsz {
            for x in 0..nasz {
                report.checks += 1;
                let l = ua[dot[bb][x]];
                let r = dot[ub[bb]][ua[x]];
                if l != r {
                    vio(
                        &mut report,
                        &law,
                        &["b", "a"],
                        &[eb(bb), ea(x)],
                        ea(l),
                        ea(r),
                    );
                }
            }
        }
        for sym in &a.signature.stars {
            let sl = &action.tables.star_left[sym];
            let sr = &action.tables.star_right[sym];
            for (placement, t) in [("b*a", sl), ("a*b", sr)] {
                let law = format!("unary-respects-mixed[{}][{},{}]", placement, usym, sym);
                report.law(law.clone());
                for bb in 0..nbsz {
                    for x in 0..nasz {
                        report.checks += 1;
                        let l = ua[t[bb][x]];
                        let r = t[ub[bb]][ua[x]];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["b", "a"],
                                &[eb(bb), ea(x)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
        }
    }

    // 12: all product values commute additively with each other.  Products
    // with a value in A come from three placements; actor-actor products
    // commute inside B.
    for sym in &a.signature.stars {
        let sl = &action.tables.star_left[sym];
        let sr = &action.tables.star_right[sym];
        let sa = &ta.star[sym];
        let sb = &tb.star[sym];
        let mut a_values: Vec<(&str, Vec<usize>)> = Vec::new();
        a_values.push((
            "a*a",
            (0..nasz)
                .flat_map(|x| (0..nasz).map(move |y| (x, y)))
                .map(|(x, y)| sa[x][y])
                .collect(),
        ));
        a_values.push((
            "b*a",
            (0..nbsz)
                .flat_map(|bb| (0..nasz).map(move |x| (bb, x)))
                .map(|(bb, x)| sl[bb][x])
                .collect(),
        ));
        a_values.push((
            "a*b",
            (0..nbsz)
                .flat_map(|bb| (0..nasz).map(move |x| (bb, x)))
                .map(|(bb, x)| sr[bb][x])
                .collect(),
        ));
        for (pi, (pname, pvals)) in a_values.iter().enumerate() {
            for (qname, qvals) in a_values.iter().skip(pi) {
                let law = format!("products-commute[{},{}][{}]", pname, qname, sym);
                report.law(law.clone());
                for &p in pvals {
                    for &q in qvals {
                        report.checks += 1;
                        let l = ta.add[p][q];
                        let r = ta.add[q][p];
                        if l != r {
                            vio(
                                &mut report,
                                &law,
                                &["p", "q"],
                                &[ea(p), ea(q)],
                                ea(l),
                                ea(r),
                            );
                        }
                    }
                }
            }
        }
        {
            let law = format!("products-commute[b*b,b*b][{}]", sym);
            report.law(law.clone());
            for b1 in 0..nbsz {
                for b2 in 0..nbsz {
                    let p = sb[b1][b2];
                    for b3 in 0..nbsz {
                        for b4 in 0..nbsz {
                            report.checks += 1;
                            let q = sb[b3][b4];
                            let l = tb.add[p][q];
                            let r = tb.add[q][p];
                            if l != r {
                                vio(
                                    &mut report,
                                    &law,
                                    &["p", "q"],
                                    &[eb(p), eb(q)],
                                    eb(l),
                                    eb(r),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    report.note("carriers are assumed valid and are not re-validated here".to_string());
    if !a.signature.stars.is_empty() {
        report.note(
            "these conditions are necessary for the semidirect construction; in signatures \
             with star operations they are not sufficient on their own"
                .to_string(),
        );
    }
    Ok(report)
}

/// The semidirect product carrier `A ⋊ B` built from action tables.
///
/// Element `(a, b)` sits at index `a·|B| + b`.  Addition twists the A part by
/// the dot action; the star of two pairs collects the three A-valued
/// placements; unary operations and negation act as in the factors (negation
/// twisted so it inverts the twisted addition).
pub fn semidirect_product(action: &DerivedAction, caps: &Caps) -> Result<OmegaGroup> {
    let a = &action.on;
    let b = &action.actor;
    let ta = a.op_tables(caps)?;
    let tb = b.op_tables(caps)?;
    let na = ta.size;
    let nb = tb.size;
    let n = (na as u64).checked_mul(nb as u64).ok_or_else(|| {
        Error::CapExceeded("semidirect carrier does not fit in 64 bits".into())
    })?;
    if n > caps.enum_cap {
        return Err(Error::CapExceeded(format!(
            "semidirect carrier has {} elements, cap is {}",
            n, caps.enum_cap
        )));
    }
    let n = n as usize;
    let idx = |ai: usize, bi: usize| ai * nb + bi;
    let dot = &action.tables.dot;

    let mut add = vec![vec![0usize; n]; n];
    let mut neg = vec![0usize; n];
    for a1 in 0..na {
        for b1 in 0..nb {
            let i = idx(a1, b1);
            neg[i] = idx(dot[tb.neg[b1]][ta.neg[a1]], tb.neg[b1]);
            for a2 in 0..na {
                for b2 in 0..nb {
                    add[i][idx(a2, b2)] = idx(ta.add[a1][dot[b1][a2]], tb.add[b1][b2]);
                }
            }
        }
    }
    let mut star = BTreeMap::new();
    for sym in &a.signature.stars {
        let sa = &ta.star[sym];
        let sb = &tb.star[sym];
        let sl = &action.tables.star_left[sym];
        let sr = &action.tables.star_right[sym];
        let mut table = vec![vec![0usize; n]; n];
        for a1 in 0..na {
            for b1 in 0..nb {
                let i = idx(a1, b1);
                for a2 in 0..na {
                    for b2 in 0..nb {
                        let apart = ta.add[ta.add[sa[a1][a2]][sr[b2][a1]]][sl[b1][a2]];
                        table[i][idx(a2, b2)] = idx(apart, sb[b1][b2]);
                    }
                }
            }
        }
        star.insert(sym.clone(), table);
    }
    let mut unary = BTreeMap::new();
    for sym in &a.signature.unary {
        let ua = &ta.unary[sym];
        let ub = &tb.unary[sym];
        let mut table = vec![0usize; n];
        for a1 in 0..na {
            for b1 in 0..nb {
                table[idx(a1, b1)] = idx(ua[a1], ub[b1]);
            }
        }
        unary.insert(sym.clone(), table);
    }

    OmegaGroup::new(
        format!("{}\u{22ca}{}", a.name, b.name),
        a.signature.clone(),
        Backend::Table(TableBackend {
            size: n,
            zero: idx(ta.zero, tb.zero),
            add,
            neg,
            star,
            unary,
        }),
    )
}

/// Index of the pair `(a, b)` inside [`semidirect_product`]'s carrier.
pub fn semidirect_index(a_idx: usize, b_size: usize, b_idx: usize) -> usize {
    a_idx * b_size + b_idx
}

/// Splits a semidirect index back into `(a, b)`.
pub fn semidirect_split(idx: usize, b_size: usize) -> (usize, usize) {
    (idx / b_size, idx % b_size)
}
