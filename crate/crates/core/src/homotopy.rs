use std::borrow::Cow;

use crate::action::{semidirect_index, semidirect_product, ActionTables};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::omega::{Backend, ElementMap, OmegaGroup, TableBackend};
use crate::report::{push_violation, ValidationReport, Violation};
use crate::xmod::{
    same_crossed_module, validate_xmod_morphism, CrossedModule, XmodMorphism,
};

/// A homotopy datum on a morphism `f = (f0, f1) : X -> X'`: a map
/// `s : R -> E'` (value table over indices) subject to the derivation laws
///
/// ```text
/// s(g + h)  =  f0(-h)·s(g) + s(h)
/// s(g ∗ h)  =  f0(g) ∗ s(h)  +  s(g) ∗ f0(h)  +  s(g) ∗ s(h)
/// ```
///
/// for every star symbol, together with the swapped-argument instance of the
/// star law.  When the laws hold, `s` moves `f` to the morphism returned by
/// [`homotopy_target`].
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub morphism: XmodMorphism,
    pub s: ElementMap,
}

impl Derivation {
    pub fn new(morphism: XmodMorphism, s: ElementMap) -> Result<Self> {
        let nr = morphism.source.r().size() as usize;
        let ne = morphism.target.e().size() as usize;
        if s.len() != nr {
            return Err(Error::InvalidInput(format!(
                "derivation table has {} entries, base has {} elements",
                s.len(),
                nr
            )));
        }
        if let Some(&bad) = s.iter().find(|&&v| v >= ne) {
            return Err(Error::InvalidInput(format!(
                "derivation value {} out of range 0..{}",
                bad, ne
            )));
        }
        Ok(Derivation { morphism, s })
    }
}

/// Equality of morphisms as arrows: same endpoints (up to naming) and same
/// value tables.
pub fn same_xmod_morphism(a: &XmodMorphism, b: &XmodMorphism) -> bool {
    a.f0 == b.f0
        && a.f1 == b.f1
        && same_crossed_module(&a.source, &b.source)
        && same_crossed_module(&a.target, &b.target)
}

/// Everything the law checkers need, materialized once.
struct LawCtx<'a> {
    r_src: Cow<'a, TableBackend>,
    e_dst: Cow<'a, TableBackend>,
    f0: &'a [usize],
    act: &'a ActionTables,
    stars: &'a [String],
}

impl<'a> LawCtx<'a> {
    fn build(f: &'a XmodMorphism, caps: &Caps) -> Result<Self> {
        let r_src = f.source.r().op_tables(caps)?;
        let e_dst = f.target.e().op_tables(caps)?;
        let stars = f.source.r().signature.stars.as_slice();
        let need = (r_src.size as u64).pow(2) * (1 + 2 * stars.len() as u64);
        if need > Caps::ASSIGNMENT_BUDGET {
            return Err(Error::CapExceeded(format!(
                "derivation laws need {} instances, budget is {}",
                need,
                Caps::ASSIGNMENT_BUDGET
            )));
        }
        Ok(LawCtx {
            r_src,
            e_dst,
            f0: &f.f0,
            act: &f.target.action.tables,
            stars,
        })
    }

    /// Walks every law instance; the callback sees
    /// `(law, g, h, lhs, rhs)` for failures and returns whether to continue.
    /// The overall return is "all instances passed".
    fn visit(&self, s: &[usize], cb: &mut impl FnMut(&str, usize, usize, usize, usize) -> bool) -> bool {
        let r = &*self.r_src;
        let e = &*self.e_dst;
        let dot = &self.act.dot;
        let n = r.size;
        let mut all_ok = true;
        for g in 0..n {
            let sg = s[g];
            for h in 0..n {
                let lhs = s[r.add[g][h]];
                let rhs = e.add[dot[self.f0[r.neg[h]]][sg]][s[h]];
                if lhs != rhs {
                    all_ok = false;
                    if !cb("derivation-add", g, h, lhs, rhs) {
                        return false;
                    }
                }
            }
        }
        for sym in self.stars {
            let sl = &self.act.star_left[sym];
            let sr = &self.act.star_right[sym];
            let star_r = &r.star[sym];
            let star_e = &e.star[sym];
            let law = format!("derivation-star[{}]", sym);
            let law_twin = format!("derivation-star-swapped[{}]", sym);
            for g in 0..n {
                let sg = s[g];
                let f0g = self.f0[g];
                for h in 0..n {
                    let sh = s[h];
                    let f0h = self.f0[h];
                    let lhs = s[star_r[g][h]];
                    let rhs = e.add[e.add[sl[f0g][sh]][sr[f0h][sg]]][star_e[sg][sh]];
                    if lhs != rhs {
                        all_ok = false;
                        if !cb(&law, g, h, lhs, rhs) {
                            return false;
                        }
                    }
                    // swapped-argument instance: s(h ∗ g) written with the
                    // companion operation, which reverses every product and
                    // the order of the three summands
                    let lhs2 = s[star_r[h][g]];
                    let rhs2 = e.add[e.add[sr[f0g][sh]][sl[f0h][sg]]][star_e[sh][sg]];
                    if lhs2 != rhs2 {
                        all_ok = false;
                        if !cb(&law_twin, g, h, lhs2, rhs2) {
                            return false;
                        }
                    }
                }
            }
        }
        all_ok
    }
}

/// Fast predicate: does `s` satisfy the derivation laws over `f`?
pub fn derivation_laws_ok(d: &Derivation, caps: &Caps) -> Result<bool> {
    let ctx = LawCtx::build(&d.morphism, caps)?;
    Ok(ctx.visit(&d.s, &mut |_, _, _, _, _| false))
}

/// Full check of a homotopy datum: the underlying morphism is validated, then
/// every derivation-law instance is evaluated with witnesses on failure.
pub fn validate_derivation(d: &Derivation, caps: &Caps) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("derivation".to_string());
    report.absorb(validate_xmod_morphism(&d.morphism, caps)?);
    let ctx = LawCtx::build(&d.morphism, caps)?;
    let nr = ctx.r_src.size;
    let stars = ctx.stars.len();
    report.law("derivation-add");
    for sym in ctx.stars {
        report.law(format!("derivation-star[{}]", sym));
        report.law(format!("derivation-star-swapped[{}]", sym));
    }
    let src_r = d.morphism.source.r();
    let dst_e = d.morphism.target.e();
    {
        let report = &mut report;
        ctx.visit(&d.s, &mut |law, g, h, lhs, rhs| {
            push_violation(
                report,
                Violation {
                    law: law.to_string(),
                    assignment: vec![
                        ("g".to_string(), src_r.element(g).to_string()),
                        ("h".to_string(), src_r.element(h).to_string()),
                    ],
                    lhs: dst_e.element(lhs).to_string(),
                    rhs: dst_e.element(rhs).to_string(),
                },
            );
            true
        });
    }
    report.checks += nr * nr * (1 + 2 * stars);
    Ok(report)
}

/// The pair of value tables `(g0, g1)` the homotopy moves `f` to:
/// `g0 = f0 + ∂'s` on the base and `g1 = f1 + s∂` on top.
pub fn target_tables(d: &Derivation, caps: &Caps) -> Result<(ElementMap, ElementMap)> {
    let f = &d.morphism;
    let tr_dst = f.target.r().op_tables(caps)?;
    let te_dst = f.target.e().op_tables(caps)?;
    let g0 = f
        .f0
        .iter()
        .enumerate()
        .map(|(r, &f0r)| tr_dst.add[f0r][f.target.boundary[d.s[r]]])
        .collect();
    let g1 = f
        .f1
        .iter()
        .enumerate()
        .map(|(e, &f1e)| te_dst.add[f1e][d.s[f.source.boundary[e]]])
        .collect();
    Ok((g0, g1))
}

/// The morphism a valid homotopy datum moves `f` to.
///
/// Requires the target to be genuinely crossed (the self-action law is what
/// makes the result a morphism); on a precrossed target this refuses with
/// [`Error::PrecrossedTarget`].  The constructed morphism is re-validated,
/// and a failure there — possible only when the inputs break their own
/// contracts, e.g. a "crossed" target that does not satisfy the self-action
/// law — surfaces as [`Error::InternalTheoremViolation`].
pub fn homotopy_target(d: &Derivation, caps: &Caps) -> Result<XmodMorphism> {
    if d.morphism.target.precrossed {
        return Err(Error::PrecrossedTarget);
    }
    let (g0, g1) = target_tables(d, caps)?;
    let g = XmodMorphism {
        source: d.morphism.source.clone(),
        target: d.morphism.target.clone(),
        f0: g0,
        f1: g1,
    };
    let report = validate_xmod_morphism(&g, caps)?;
    if !report.ok() {
        let v = &report.violations[0];
        return Err(Error::InternalTheoremViolation(format!(
            "homotopy target is not a morphism: {} at {:?} ({} vs {})",
            v.law, v.assignment, v.lhs, v.rhs
        )));
    }
    Ok(g)
}

/// The do-nothing homotopy on `f` (s ≡ 0), the identity at `f` in the
/// homotopy groupoid.
pub fn identity_derivation(f: &XmodMorphism) -> Result<Derivation> {
    let z = f.target.e().index_of(&f.target.e().zero())?;
    let nr = f.source.r().size() as usize;
    Derivation::new(f.clone(), vec![z; nr])
}

/// The reverse homotopy: `-s` attached to the target morphism of `d`.  Moving
/// the target by it lands back at `d`'s own morphism.
pub fn invert_derivation(d: &Derivation, caps: &Caps) -> Result<Derivation> {
    let g = homotopy_target(d, caps)?;
    let te = d.morphism.target.e().op_tables(caps)?;
    let s_bar = d.s.iter().map(|&v| te.neg[v]).collect();
    let inv = Derivation::new(g, s_bar)?;
    if !derivation_laws_ok(&inv, caps)? {
        return Err(Error::InternalTheoremViolation(
            "negated derivation table fails the laws on the target morphism".into(),
        ));
    }
    Ok(inv)
}

/// Concatenation in the homotopy groupoid: `first` moves `f` to `g`, `second`
/// moves `g` to `h`; the result moves `f` to `h` by pointwise addition of the
/// derivation tables.  Errors with [`Error::MiddleMismatch`] when `second`
/// does not start at `first`'s target.
pub fn concat_derivations(
    first: &Derivation,
    second: &Derivation,
    caps: &Caps,
) -> Result<Derivation> {
    let g = homotopy_target(first, caps)?;
    if !same_xmod_morphism(&g, &second.morphism) {
        return Err(Error::MiddleMismatch(
            "second homotopy does not start at the first homotopy's target".into(),
        ));
    }
    let te = first.morphism.target.e().op_tables(caps)?;
    let s = first
        .s
        .iter()
        .zip(second.s.iter())
        .map(|(&a, &b)| te.add[a][b])
        .collect();
    let d = Derivation::new(first.morphism.clone(), s)?;
    if !derivation_laws_ok(&d, caps)? {
        return Err(Error::InternalTheoremViolation(
            "pointwise sum of derivation tables fails the laws".into(),
        ));
    }
    Ok(d)
}

/// The section-style embedding of a homotopy datum into the semidirect
/// carrier `E' ⋊ R'`: `r` goes to the pair `(f0(r)·s(r), f0(r))`.
///
/// This map is a morphism of carriers exactly when `s` satisfies the
/// derivation laws, which turns the laws into a single morphism check.
pub fn derivation_to_semidirect_morphism(
    d: &Derivation,
    caps: &Caps,
) -> Result<(OmegaGroup, ElementMap)> {
    let f = &d.morphism;
    let sd = semidirect_product(&f.target.action, caps)?;
    let nb = f.target.r().size() as usize;
    let dot = &f.target.action.tables.dot;
    let psi = (0..f.f0.len())
        .map(|r| {
            let e_part = dot[f.f0[r]][d.s[r]];
            semidirect_index(e_part, nb, f.f0[r])
        })
        .collect();
    Ok((sd, psi))
}

/// All homotopy data on `f`, ordered by derivation table.
///
/// Small problems are scanned exhaustively (`|E'|^|R|` candidates under the
/// brute cap), which is the ground truth.  When the scan is too large but
/// both `R` and `E'` are linear carriers over the same prime and the target
/// dot action is trivial on the image of `f0`, the additive law pins every
/// solution to an F_p-linear map, so scanning matrices is complete; anything
/// else refuses with a cap error.
pub fn enumerate_derivations(f: &XmodMorphism, caps: &Caps) -> Result<Vec<Derivation>> {
    let ctx = LawCtx::build(f, caps)?;
    let nr = ctx.r_src.size;
    let me = ctx.e_dst.size;
    let mut out: Vec<Derivation> = Vec::new();

    let full = (me as u64).checked_pow(nr as u32);
    if full.map(|t| t <= caps.brute_cap).unwrap_or(false) {
        let mut s = vec![0usize; nr];
        loop {
            if ctx.visit(&s, &mut |_, _, _, _, _| false) {
                out.push(Derivation::new(f.clone(), s.clone())?);
            }
            let mut pos = nr;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                s[pos] += 1;
                if s[pos] < me {
                    break;
                }
                s[pos] = 0;
            }
        }
    }

    // Linear shortcut: additive maps between coordinate spaces are matrices.
    let (rp, rdim) = match &f.source.r().backend {
        Backend::Vectors(vb) => (vb.p, vb.dim),
        _ => {
            return Err(Error::CapExceeded(format!(
                "derivation space {}^{} exceeds cap {} and the base is not a linear carrier",
                me, nr, caps.brute_cap
            )))
        }
    };
    let (ep, edim) = match &f.target.e().backend {
        Backend::Vectors(vb) => (vb.p, vb.dim),
        _ => {
            return Err(Error::CapExceeded(format!(
                "derivation space {}^{} exceeds cap {} and the top target is not a linear carrier",
                me, nr, caps.brute_cap
            )))
        }
    };
    if rp != ep {
        return Err(Error::CapExceeded(
            "derivation space too large and the carriers live over different primes".into(),
        ));
    }
    let dot = &f.target.action.tables.dot;
    for r in 0..nr {
        let row = &dot[f.f0[r]];
        if (0..me).any(|e| row[e] != e) {
            return Err(Error::CapExceeded(
                "derivation space too large and the dot action is nontrivial, so the \
                 linear shortcut does not apply"
                    .into(),
            ));
        }
    }
    let cells = rdim * edim;
    let space = (rp as u64).checked_pow(cells as u32);
    let space = match space {
        Some(v) if v <= caps.brute_cap => v,
        _ => {
            return Err(Error::CapExceeded(format!(
                "matrix space {}^{} exceeds cap {}",
                rp, cells, caps.brute_cap
            )))
        }
    };
    let r_obj = f.source.r();
    let e_obj = f.target.e();
    let mut matrix = vec![0u32; cells]; // row-major: matrix[row*rdim + col], rows index E' coords
    for _ in 0..space {
        // s(x) = M x over F_p
        let mut s = vec![0usize; nr];
        for (ri, slot) in s.iter_mut().enumerate() {
            let x = match r_obj.element(ri) {
                crate::omega::Element::Vector(v) => v,
                _ => unreachable!("linear carrier produces vectors"),
            };
            let mut y = vec![0u32; edim];
            for (row, yv) in y.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (col, &xv) in x.iter().enumerate() {
                    acc += matrix[row * rdim + col] as u64 * xv as u64;
                }
                *yv = (acc % rp as u64) as u32;
            }
            *slot = e_obj.index_of(&crate::omega::Element::Vector(y))?;
        }
        if ctx.visit(&s, &mut |_, _, _, _, _| false) {
            out.push(Derivation::new(f.clone(), s)?);
        }
        // next matrix
        let mut pos = cells;
        loop {
            if pos == 0 {
                out.sort_by(|a, b| a.s.cmp(&b.s));
                out.dedup_by(|a, b| a.s == b.s);
                return Ok(out);
            }
            pos -= 1;
            matrix[pos] += 1;
            if matrix[pos] < rp {
                break;
            }
            matrix[pos] = 0;
        }
    }
    out.sort_by(|a, b| a.s.cmp(&b.s));
    out.dedup_by(|a, b| a.s == b.s);
    Ok(out)
}

/// Searches for a homotopy moving `f` to `g`.  The morphisms must be
/// parallel (same endpoints up to naming).
pub fn are_homotopic(
    f: &XmodMorphism,
    g: &XmodMorphism,
    caps: &Caps,
) -> Result<Option<Derivation>> {
    if !same_crossed_module(&f.source, &g.source) || !same_crossed_module(&f.target, &g.target) {
        return Err(Error::SourceTargetMismatch(
            "morphisms are not parallel".into(),
        ));
    }
    for d in enumerate_derivations(f, caps)? {
        let (g0, g1) = target_tables(&d, caps)?;
        if g0 == g.f0 && g1 == g.f1 {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// A homotopy equivalence between crossed modules: morphisms both ways whose
/// round trips are homotopic to the identities.
#[derive(Debug, Clone)]
pub struct HomotopyEquivalence {
    pub forward: XmodMorphism,
    pub backward: XmodMorphism,
    /// moves `backward ∘ forward` to the identity on the first module
    pub round_trip_source: Derivation,
    /// moves `forward ∘ backward` to the identity on the second module
    pub round_trip_target: Derivation,
}

/// Searches for a homotopy equivalence between two crossed modules.  The
/// identity pair is tried first when the modules are structurally equal;
/// otherwise every pair from the two morphism enumerations is tested.
pub fn are_homotopy_equivalent(
    x: &CrossedModule,
    y: &CrossedModule,
    caps: &Caps,
) -> Result<Option<HomotopyEquivalence>> {
    if same_crossed_module(x, y) {
        let fwd = XmodMorphism {
            source: x.clone(),
            target: y.clone(),
            f0: crate::omega::identity_map(x.r().size() as usize),
            f1: crate::omega::identity_map(x.e().size() as usize),
        };
        let bwd = XmodMorphism {
            source: y.clone(),
            target: x.clone(),
            f0: crate::omega::identity_map(x.r().size() as usize),
            f1: crate::omega::identity_map(x.e().size() as usize),
        };
        return Ok(Some(HomotopyEquivalence {
            round_trip_source: identity_derivation(&XmodMorphism::identity(x))?,
            round_trip_target: identity_derivation(&XmodMorphism::identity(y))?,
            forward: fwd,
            backward: bwd,
        }));
    }
    let forwards = crate::xmod::enumerate_xmod_morphisms(x, y, caps)?;
    let backwards = crate::xmod::enumerate_xmod_morphisms(y, x, caps)?;
    let id_x = XmodMorphism::identity(x);
    let id_y = XmodMorphism::identity(y);
    for fwd in &forwards {
        for bwd in &backwards {
            let round_x = crate::xmod::compose_xmod_morphisms(bwd, fwd)?;
            let round_y = crate::xmod::compose_xmod_morphisms(fwd, bwd)?;
            let to_id_x = match are_homotopic(&round_x, &id_x, caps)? {
                Some(d) => d,
                None => continue,
            };
            let to_id_y = match are_homotopic(&round_y, &id_y, caps)? {
                Some(d) => d,
                None => continue,
            };
            return Ok(Some(HomotopyEquivalence {
                forward: fwd.clone(),
                backward: bwd.clone(),
                round_trip_source: to_id_x,
                round_trip_target: to_id_y,
            }));
        }
    }
    Ok(None)
}
