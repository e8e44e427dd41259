use std::collections::BTreeMap;

use crate::action::{
    semidirect_product, semidirect_split, validate_derived_action, ActionTables, DerivedAction,
};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::homotopy::{
    homotopy_target, same_xmod_morphism, target_tables, validate_derivation, Derivation,
};
use crate::omega::{identity_map, ElementMap, OmegaGroup};
use crate::report::Violation;
use crate::simplicial::{
    compose_simplicial_maps, ensure_simplicial, moore_length_at_most, same_simplicial_data,
    validate_simplicial, validate_simplicial_homotopy, validate_simplicial_map, SimplicialHomotopy,
    SimplicialMap, SimplicialObject, MAX_TRUNCATION,
};
use crate::xmod::{
    compose_xmod_morphisms, validate_crossed_module, validate_xmod_morphism, CrossedModule,
    XmodMorphism,
};

// Level k of a nerve is E^k x R.  An index encodes the tuple
// (e_k, ..., e_1, r) with r least significant and e_k most significant;
// `digits[j]` below holds e_(j+1), so digits run from the innermost entry
// outwards.

fn unflatten(idx: usize, k: usize, es: usize, rs: usize) -> (Vec<usize>, usize) {
    let r = idx % rs;
    let mut t = idx / rs;
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        digits.push(t % es);
        t /= es;
    }
    (digits, r)
}

fn flatten(digits: &[usize], r: usize, es: usize, rs: usize) -> usize {
    let mut acc = 0usize;
    for &d in digits.iter().rev() {
        acc = acc * es + d;
    }
    acc * rs + r
}

fn first_violation(report: &crate::report::ValidationReport) -> String {
    report
        .violations
        .first()
        .map(|v| format!("{} at {:?}: {} != {}", v.law, v.assignment, v.lhs, v.rhs))
        .unwrap_or_else(|| "no witness collected".to_string())
}

/// The truncated simplicial object generated by a crossed module: level 0 is
/// the base `R`, and each higher level is `E ⋊ (previous level)` with the
/// action pulled back along the iterated boundary.
pub fn nerve(xm: &CrossedModule, depth: usize, caps: &Caps) -> Result<SimplicialObject> {
    if depth == 0 || depth > MAX_TRUNCATION {
        return Err(Error::InvalidInput(format!(
            "nerve depth must be between 1 and {}, got {}",
            MAX_TRUNCATION, depth
        )));
    }
    let action_report = validate_derived_action(&xm.action, caps)?;
    if !action_report.ok() {
        return Err(Error::InvalidInput(format!(
            "nerve input action is not valid: {}",
            first_violation(&action_report)
        )));
    }
    let xm_report = validate_crossed_module(xm, caps)?;
    if !xm_report.ok() {
        return Err(Error::InvalidInput(format!(
            "nerve input is not a crossed module: {}",
            first_violation(&xm_report)
        )));
    }
    let e = xm.e();
    let r = xm.r();
    let es = e.size() as usize;
    let rs = r.size() as usize;
    let mut top = rs as u64;
    for _ in 0..depth {
        top = top
            .checked_mul(es as u64)
            .ok_or_else(|| Error::CapExceeded("nerve level size overflows".into()))?;
    }
    if top > caps.enum_cap {
        return Err(Error::CapExceeded(format!(
            "nerve level {} would have {} elements, cap is {}",
            depth, top, caps.enum_cap
        )));
    }
    let te = e.op_tables(caps)?.into_owned();
    let tr = r.op_tables(caps)?.into_owned();
    let bnd = &xm.boundary;

    let mut levels: Vec<OmegaGroup> = vec![r.clone()];
    // mus[k] sends a level-k index to the base: the boundary of every entry
    // added onto r.
    let mut mus: Vec<Vec<usize>> = vec![identity_map(rs)];
    for k in 1..=depth {
        let prev = levels[k - 1].clone();
        let np = prev.size() as usize;
        let mu_prev = &mus[k - 1];
        let dot = (0..np)
            .map(|w| xm.action.tables.dot[mu_prev[w]].clone())
            .collect();
        let mut star_left = BTreeMap::new();
        let mut star_right = BTreeMap::new();
        for sym in &r.signature.stars {
            star_left.insert(
                sym.clone(),
                (0..np)
                    .map(|w| xm.action.tables.star_left[sym][mu_prev[w]].clone())
                    .collect(),
            );
            star_right.insert(
                sym.clone(),
                (0..np)
                    .map(|w| xm.action.tables.star_right[sym][mu_prev[w]].clone())
                    .collect(),
            );
        }
        let pulled = DerivedAction::new(
            prev,
            e.clone(),
            ActionTables {
                dot,
                star_left,
                star_right,
            },
        )?;
        let lvl = semidirect_product(&pulled, caps)?;
        let lk = lvl.size() as usize;
        let mu_k = (0..lk)
            .map(|idx| {
                let (ee, w) = semidirect_split(idx, np);
                tr.add[bnd[ee]][mu_prev[w]]
            })
            .collect();
        levels.push(lvl);
        mus.push(mu_k);
    }

    let mut faces = Vec::with_capacity(depth);
    let mut degeneracies = Vec::with_capacity(depth);
    for k in 1..=depth {
        let lk = levels[k].size() as usize;
        let mut fk: Vec<ElementMap> = (0..=k).map(|_| Vec::with_capacity(lk)).collect();
        for idx in 0..lk {
            let (digits, rr) = unflatten(idx, k, es, rs);
            // d_0 forgets the outermost entry
            fk[0].push(flatten(&digits[..k - 1], rr, es, rs));
            // d_i adds adjacent entries, counting inwards from the top
            for i in 1..k {
                let mut d2 = digits.clone();
                d2[k - i - 1] = te.add[d2[k - i]][d2[k - i - 1]];
                d2.remove(k - i);
                fk[i].push(flatten(&d2, rr, es, rs));
            }
            // d_k pushes the innermost entry into the base along the boundary
            let r2 = tr.add[bnd[digits[0]]][rr];
            fk[k].push(flatten(&digits[1..], r2, es, rs));
        }
        faces.push(fk);

        let lprev = levels[k - 1].size() as usize;
        let mut sk: Vec<ElementMap> = (0..k).map(|_| Vec::with_capacity(lprev)).collect();
        for idx in 0..lprev {
            let (digits, rr) = unflatten(idx, k - 1, es, rs);
            for (j, out) in sk.iter_mut().enumerate() {
                let mut d2 = digits.clone();
                d2.insert(k - 1 - j, te.zero);
                out.push(flatten(&d2, rr, es, rs));
            }
        }
        degeneracies.push(sk);
    }

    let out = SimplicialObject::new(
        format!("nerve[{} -> {}]", e.name, r.name),
        levels,
        faces,
        degeneracies,
    )?;
    let report = validate_simplicial(&out, caps)?;
    if !report.ok() {
        return Err(Error::InternalTheoremViolation(format!(
            "nerve of a valid crossed module is not simplicial: {}",
            first_violation(&report)
        )));
    }
    if !moore_length_at_most(&out, 1, caps)? {
        return Err(Error::InternalTheoremViolation(
            "nerve of a valid crossed module has a long Moore complex".into(),
        ));
    }
    Ok(out)
}

/// The levelwise extension of a crossed module morphism to the nerves of its
/// endpoints.
pub fn nerve_map(f: &XmodMorphism, depth: usize, caps: &Caps) -> Result<SimplicialMap> {
    let rep = validate_xmod_morphism(f, caps)?;
    if !rep.ok() {
        return Err(Error::InvalidInput(format!(
            "nerve input is not a crossed module morphism: {}",
            first_violation(&rep)
        )));
    }
    let source = nerve(&f.source, depth, caps)?;
    let target = nerve(&f.target, depth, caps)?;
    let es_s = f.source.e().size() as usize;
    let rs_s = f.source.r().size() as usize;
    let es_t = f.target.e().size() as usize;
    let rs_t = f.target.r().size() as usize;
    let mut maps = vec![f.f0.clone()];
    for k in 1..=depth {
        let lk = source.levels[k].size() as usize;
        let mut map = Vec::with_capacity(lk);
        for idx in 0..lk {
            let (digits, rr) = unflatten(idx, k, es_s, rs_s);
            let digits: Vec<usize> = digits.iter().map(|&d| f.f1[d]).collect();
            map.push(flatten(&digits, f.f0[rr], es_t, rs_t));
        }
        maps.push(map);
    }
    let out = SimplicialMap {
        source,
        target,
        maps,
    };
    let rep = validate_simplicial_map(&out, caps)?;
    if !rep.ok() {
        return Err(Error::InternalTheoremViolation(format!(
            "nerve of a valid morphism is not simplicial: {}",
            first_violation(&rep)
        )));
    }
    Ok(out)
}

/// The crossed module sitting at the bottom of a truncated simplicial
/// object, together with the level-1 indices that form its top carrier.
#[derive(Debug, Clone)]
pub struct X1Object {
    pub xmod: CrossedModule,
    /// Indices in level 1 whose image under `d_0` is zero, in carrier order.
    pub kernel: Vec<usize>,
}

/// Extracts the crossed module `Ker d_0 -> level 0` with the conjugation
/// action along `s_0`.  Requires levels up to 2 and a Moore complex that
/// vanishes above degree 1; under those hypotheses the result is validated
/// and any failure is an internal error, not an input error.
pub fn x1_object(x: &SimplicialObject, caps: &Caps) -> Result<X1Object> {
    if x.depth() < 2 {
        return Err(Error::LevelMismatch(format!(
            "crossed module extraction needs levels 0..=2, {} stops at {}",
            x.name,
            x.depth()
        )));
    }
    ensure_simplicial(x, caps)?;
    if !moore_length_at_most(x, 1, caps)? {
        return Err(Error::MooreTooLong(format!(
            "{} has Moore terms above degree 1",
            x.name
        )));
    }
    let r = &x.levels[0];
    let l1 = &x.levels[1];
    let zero0 = r.index_of(&r.zero())?;
    let d0 = x.face(1, 0);
    let kernel: Vec<usize> = (0..l1.size() as usize)
        .filter(|&e| d0[e] == zero0)
        .collect();
    let e_obj = l1
        .sub_object(&kernel, caps)?
        .with_name(format!("{}[ker d0]", x.name));
    let mut pos: Vec<Option<usize>> = vec![None; l1.size() as usize];
    for (p, &i) in kernel.iter().enumerate() {
        pos[i] = Some(p);
    }
    let boundary: Vec<usize> = kernel.iter().map(|&e| x.face(1, 1)[e]).collect();

    let t1 = l1.op_tables(caps)?;
    let s0 = x.degeneracy(0, 0);
    let nr = r.size() as usize;
    let reach = |idx: usize| {
        pos[idx].ok_or_else(|| {
            Error::InternalTheoremViolation(
                "conjugation along s_0 left the kernel of d_0".into(),
            )
        })
    };
    let mut dot = vec![vec![0usize; kernel.len()]; nr];
    for (rr, row) in dot.iter_mut().enumerate() {
        let lifted = s0[rr];
        let back = t1.neg[lifted];
        for (p, &e) in kernel.iter().enumerate() {
            row[p] = reach(t1.add[t1.add[lifted][e]][back])?;
        }
    }
    let mut star_left = BTreeMap::new();
    let mut star_right = BTreeMap::new();
    for sym in &r.signature.stars {
        let table = &t1.star[sym];
        let mut sl = vec![vec![0usize; kernel.len()]; nr];
        let mut sr = vec![vec![0usize; kernel.len()]; nr];
        for rr in 0..nr {
            let lifted = s0[rr];
            for (p, &e) in kernel.iter().enumerate() {
                sl[rr][p] = reach(table[lifted][e])?;
                sr[rr][p] = reach(table[e][lifted])?;
            }
        }
        star_left.insert(sym.clone(), sl);
        star_right.insert(sym.clone(), sr);
    }
    let action = DerivedAction::new(
        r.clone(),
        e_obj,
        ActionTables {
            dot,
            star_left,
            star_right,
        },
    )?;
    let xm = CrossedModule::new(action, boundary, false)?;
    let rep_a = validate_derived_action(&xm.action, caps)?;
    if !rep_a.ok() {
        return Err(Error::InternalTheoremViolation(format!(
            "extracted action fails its conditions: {}",
            first_violation(&rep_a)
        )));
    }
    let rep_x = validate_crossed_module(&xm, caps)?;
    if !rep_x.ok() {
        return Err(Error::InternalTheoremViolation(format!(
            "extracted crossed module fails its laws: {}",
            first_violation(&rep_x)
        )));
    }
    Ok(X1Object { xmod: xm, kernel })
}

/// Restriction of a simplicial map to the bottom crossed modules, reusing
/// extractions the caller already has for the two endpoints.
pub fn x1_map_over(
    m: &SimplicialMap,
    src: &X1Object,
    dst: &X1Object,
) -> Result<XmodMorphism> {
    let n1 = m.target.levels[1].size() as usize;
    let mut pos: Vec<Option<usize>> = vec![None; n1];
    for (p, &i) in dst.kernel.iter().enumerate() {
        pos[i] = Some(p);
    }
    let f0 = m.maps[0].clone();
    let f1 = src
        .kernel
        .iter()
        .map(|&e| {
            pos[m.maps[1][e]].ok_or_else(|| {
                Error::RestrictionEscapesKernel(format!(
                    "level-1 image of kernel element {} is not killed by d_0",
                    e
                ))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(XmodMorphism {
        source: src.xmod.clone(),
        target: dst.xmod.clone(),
        f0,
        f1,
    })
}

/// Restriction of a simplicial map to the bottom crossed modules.
pub fn x1_map(m: &SimplicialMap, caps: &Caps) -> Result<XmodMorphism> {
    let src = x1_object(&m.source, caps)?;
    let dst = x1_object(&m.target, caps)?;
    x1_map_over(m, &src, &dst)
}

/// Turns a derivation between crossed module morphisms into a simplicial
/// homotopy between the nerves of its endpoints (depth 2).  The output is
/// re-validated; a failure there is an internal error.
pub fn lift_derivation_to_nerve_homotopy(
    d: &Derivation,
    caps: &Caps,
) -> Result<SimplicialHomotopy> {
    let rep = validate_derivation(d, caps)?;
    if !rep.ok() {
        return Err(Error::InvalidInput(format!(
            "lift input fails the derivation laws: {}",
            first_violation(&rep)
        )));
    }
    let f = &d.morphism;
    let g = homotopy_target(d, caps)?;
    let from = nerve_map(f, 2, caps)?;
    let to = nerve_map(&g, 2, caps)?;

    let es_s = f.source.e().size() as usize;
    let rs_s = f.source.r().size() as usize;
    let es_t = f.target.e().size() as usize;
    let rs_t = f.target.r().size() as usize;
    let tr_s = f.source.r().op_tables(caps)?;
    let bnd_s = &f.source.boundary;
    let dot_t = &f.target.action.tables.dot;

    // twisted value paired with every base element
    let tw = |r: usize| dot_t[f.f0[r]][d.s[r]];

    let mut h00 = Vec::with_capacity(rs_s);
    for r in 0..rs_s {
        h00.push(flatten(&[tw(r)], f.f0[r], es_t, rs_t));
    }
    let l1 = es_s * rs_s;
    let mut h01 = Vec::with_capacity(l1);
    let mut h11 = Vec::with_capacity(l1);
    for idx in 0..l1 {
        let (digits, r) = unflatten(idx, 1, es_s, rs_s);
        let e = digits[0];
        let shifted = tr_s.add[bnd_s[e]][r];
        h01.push(flatten(
            &[f.f1[e], tw(shifted)],
            f.f0[r],
            es_t,
            rs_t,
        ));
        h11.push(flatten(&[tw(r), g.f1[e]], f.f0[r], es_t, rs_t));
    }
    let hom = SimplicialHomotopy {
        from,
        to,
        h: vec![vec![h00], vec![h01, h11]],
    };
    let rep = validate_simplicial_homotopy(&hom, caps)?;
    if !rep.ok() {
        return Err(Error::InternalTheoremViolation(format!(
            "lift of a valid derivation is not a simplicial homotopy: {}",
            first_violation(&rep)
        )));
    }
    Ok(hom)
}

/// Outcome of pushing a simplicial homotopy down to the bottom crossed
/// modules.
#[derive(Debug, Clone)]
pub struct TransferReport {
    /// The recovered derivation, present only when every check below passed.
    pub derivation: Option<Derivation>,
    /// Whether `-s_0(F_0(a)) + h(a)` landed in the kernel of `d_0` for every
    /// base element `a`.
    pub image_in_kernel: bool,
    /// Whether the homotopy target of the recovered derivation equals the
    /// restriction of the second simplicial map.
    pub g_matches: bool,
    pub law_witnesses: Vec<Violation>,
    pub notes: Vec<String>,
}

impl TransferReport {
    pub fn ok(&self) -> bool {
        self.derivation.is_some()
    }
}

/// Pushes a simplicial homotopy down to a derivation between the restricted
/// crossed module morphisms, reporting exactly which of the required
/// properties hold.
pub fn transfer_homotopy(h: &SimplicialHomotopy, caps: &Caps) -> Result<TransferReport> {
    let hrep = validate_simplicial_homotopy(h, caps)?;
    if !hrep.ok() {
        return Err(Error::InvalidInput(format!(
            "transfer input is not a simplicial homotopy: {}",
            first_violation(&hrep)
        )));
    }
    for (which, m) in [("first", &h.from), ("second", &h.to)] {
        let rep = validate_simplicial_map(m, caps)?;
        if !rep.ok() {
            return Err(Error::InvalidInput(format!(
                "{} endpoint is not a simplicial map: {}",
                which,
                first_violation(&rep)
            )));
        }
    }
    let x1_src = x1_object(&h.from.source, caps)?;
    let x1_dst = x1_object(&h.from.target, caps)?;
    let xf = x1_map_over(&h.from, &x1_src, &x1_dst)?;
    let xg = x1_map_over(&h.to, &x1_src, &x1_dst)?;

    let y = &h.from.target;
    let t1 = y.levels[1].op_tables(caps)?;
    let s0 = y.degeneracy(0, 0);
    let f0 = &h.from.maps[0];
    let h00 = &h.h[0][0];
    let mut pos: Vec<Option<usize>> = vec![None; y.levels[1].size() as usize];
    for (p, &i) in x1_dst.kernel.iter().enumerate() {
        pos[i] = Some(p);
    }
    let nr = h.from.source.levels[0].size() as usize;
    let mut s = Vec::with_capacity(nr);
    let mut notes = Vec::new();
    for a in 0..nr {
        let raw = t1.add[t1.neg[s0[f0[a]]]][h00[a]];
        match pos[raw] {
            Some(p) => s.push(p),
            None => {
                notes.push(format!(
                    "dropping the degenerate part at base element {} leaves the kernel of d_0",
                    h.from.source.levels[0].element(a)
                ));
                return Ok(TransferReport {
                    derivation: None,
                    image_in_kernel: false,
                    g_matches: false,
                    law_witnesses: Vec::new(),
                    notes,
                });
            }
        }
    }
    let candidate = Derivation::new(xf, s)?;
    let law_rep = validate_derivation(&candidate, caps)?;
    let (g0, g1) = target_tables(&candidate, caps)?;
    let g_matches = g0 == xg.f0 && g1 == xg.f1;
    if !g_matches {
        notes.push(
            "homotopy target of the recovered derivation differs from the restricted second map"
                .to_string(),
        );
    }
    let ok = law_rep.ok() && g_matches;
    Ok(TransferReport {
        derivation: ok.then_some(candidate),
        image_in_kernel: true,
        g_matches,
        law_witnesses: law_rep.violations,
        notes,
    })
}

/// Everything checked when a pair of simplicial maps and a pair of
/// homotopies claim to be mutually inverse up to homotopy.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    /// The first homotopy really connects `f ∘ g` with the identity.
    pub forward_endpoints_ok: bool,
    /// The second really connects `g ∘ f` with the identity.
    pub backward_endpoints_ok: bool,
    pub forward: TransferReport,
    pub backward: TransferReport,
    /// Restriction to the bottom crossed modules preserves composition for
    /// both composites.
    pub functorial: bool,
    pub notes: Vec<String>,
}

impl EquivalenceWitness {
    pub fn ok(&self) -> bool {
        self.forward_endpoints_ok
            && self.backward_endpoints_ok
            && self.functorial
            && self.forward.ok()
            && self.backward.ok()
    }
}

fn connects(h: &SimplicialHomotopy, a: &SimplicialMap, b: &SimplicialMap) -> bool {
    (h.from.maps == a.maps && h.to.maps == b.maps)
        || (h.from.maps == b.maps && h.to.maps == a.maps)
}

/// Verifies that a simplicial homotopy equivalence restricts to a homotopy
/// equivalence of the bottom crossed modules: endpoint bookkeeping, both
/// transfers, and functoriality of the restriction.
pub fn verify_equivalence_transfer(
    f: &SimplicialMap,
    g: &SimplicialMap,
    h_fg: &SimplicialHomotopy,
    h_gf: &SimplicialHomotopy,
    caps: &Caps,
) -> Result<EquivalenceWitness> {
    if !same_simplicial_data(&f.target, &g.source)
        || !same_simplicial_data(&g.target, &f.source)
    {
        return Err(Error::SourceTargetMismatch(
            "the two simplicial maps do not point at each other".into(),
        ));
    }
    let fg = compose_simplicial_maps(f, g)?;
    let gf = compose_simplicial_maps(g, f)?;
    let id_b = SimplicialMap::identity(&g.source);
    let id_a = SimplicialMap::identity(&f.source);
    let forward_endpoints_ok = connects(h_fg, &fg, &id_b);
    let backward_endpoints_ok = connects(h_gf, &gf, &id_a);
    let mut notes = Vec::new();
    if !forward_endpoints_ok {
        notes.push("first homotopy does not connect f∘g with the identity".to_string());
    }
    if !backward_endpoints_ok {
        notes.push("second homotopy does not connect g∘f with the identity".to_string());
    }
    let forward = transfer_homotopy(h_fg, caps)?;
    let backward = transfer_homotopy(h_gf, caps)?;

    let x1_a = x1_object(&f.source, caps)?;
    let x1_b = x1_object(&g.source, caps)?;
    let xf = x1_map_over(f, &x1_a, &x1_b)?;
    let xg = x1_map_over(g, &x1_b, &x1_a)?;
    let functorial = same_xmod_morphism(
        &x1_map_over(&fg, &x1_b, &x1_b)?,
        &compose_xmod_morphisms(&xf, &xg)?,
    ) && same_xmod_morphism(
        &x1_map_over(&gf, &x1_a, &x1_a)?,
        &compose_xmod_morphisms(&xg, &xf)?,
    );
    if !functorial {
        notes.push("restriction does not preserve one of the composites".to_string());
    }
    Ok(EquivalenceWitness {
        forward_endpoints_ok,
        backward_endpoints_ok,
        forward,
        backward,
        functorial,
        notes,
    })
}
