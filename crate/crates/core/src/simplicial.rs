use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::omega::{
    assert_same_signature, check_morphism, compose_maps, identity_map, morphism_ok, ElementMap,
    OmegaGroup,
};
use crate::report::{push_violation, ValidationReport, Violation};

/// Highest truncation level supported by the constructions in this crate.
pub const MAX_TRUNCATION: usize = 4;

/// A truncated simplicial object: carriers `levels[0..=N]` with face maps
/// `faces[k][i] : levels[k+1] -> levels[k]` (for `i` in `0..=k+1`) and
/// degeneracies `degeneracies[k][j] : levels[k] -> levels[k+1]` (for `j` in
/// `0..=k`).
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialObject {
    pub name: String,
    pub levels: Vec<OmegaGroup>,
    pub faces: Vec<Vec<ElementMap>>,
    pub degeneracies: Vec<Vec<ElementMap>>,
}

impl SimplicialObject {
    pub fn new(
        name: impl Into<String>,
        levels: Vec<OmegaGroup>,
        faces: Vec<Vec<ElementMap>>,
        degeneracies: Vec<Vec<ElementMap>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("no levels".into()));
        }
        if levels.len() - 1 > MAX_TRUNCATION {
            return Err(Error::InvalidInput(format!(
                "truncation level {} exceeds the supported maximum {}",
                levels.len() - 1,
                MAX_TRUNCATION
            )));
        }
        for lvl in &levels[1..] {
            assert_same_signature(&levels[0], lvl)?;
        }
        let n = levels.len() - 1;
        if faces.len() != n || degeneracies.len() != n {
            return Err(Error::LevelMismatch(format!(
                "{} levels need {} face groups and {} degeneracy groups, found {} and {}",
                n + 1,
                n,
                n,
                faces.len(),
                degeneracies.len()
            )));
        }
        for (k, group) in faces.iter().enumerate() {
            if group.len() != k + 2 {
                return Err(Error::LevelMismatch(format!(
                    "level {} needs {} face maps, found {}",
                    k + 1,
                    k + 2,
                    group.len()
                )));
            }
            let upper = levels[k + 1].size() as usize;
            let lower = levels[k].size() as usize;
            for (i, map) in group.iter().enumerate() {
                if map.len() != upper || map.iter().any(|&v| v >= lower) {
                    return Err(Error::LevelMismatch(format!(
                        "face {} out of level {} has the wrong shape",
                        i,
                        k + 1
                    )));
                }
            }
        }
        for (k, group) in degeneracies.iter().enumerate() {
            if group.len() != k + 1 {
                return Err(Error::LevelMismatch(format!(
                    "level {} needs {} degeneracies, found {}",
                    k,
                    k + 1,
                    group.len()
                )));
            }
            let lower = levels[k].size() as usize;
            let upper = levels[k + 1].size() as usize;
            for (j, map) in group.iter().enumerate() {
                if map.len() != lower || map.iter().any(|&v| v >= upper) {
                    return Err(Error::LevelMismatch(format!(
                        "degeneracy {} at level {} has the wrong shape",
                        j, k
                    )));
                }
            }
        }
        Ok(SimplicialObject {
            name: name.into(),
            levels,
            faces,
            degeneracies,
        })
    }

    /// Truncation level `N`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// `d_i` out of level `n`.
    pub fn face(&self, n: usize, i: usize) -> &ElementMap {
        &self.faces[n - 1][i]
    }

    /// `s_j` out of level `n`.
    pub fn degeneracy(&self, n: usize, j: usize) -> &ElementMap {
        &self.degeneracies[n][j]
    }
}

/// Structural equality ignoring names.
pub fn same_simplicial_data(a: &SimplicialObject, b: &SimplicialObject) -> bool {
    a.levels.len() == b.levels.len()
        && a.levels.iter().zip(&b.levels).all(|(x, y)| {
            x.signature == y.signature && x.backend == y.backend
        })
        && a.faces == b.faces
        && a.degeneracies == b.degeneracies
}

fn map_mismatch(a: &[usize], b: &[usize]) -> Option<usize> {
    a.iter().zip(b.iter()).position(|(x, y)| x != y)
}

fn record_map_eq(
    report: &mut ValidationReport,
    law: &str,
    context: Vec<(String, String)>,
    carrier: &OmegaGroup,
    out_carrier: &OmegaGroup,
    lhs: &[usize],
    rhs: &[usize],
) {
    report.checks += lhs.len();
    if let Some(x) = map_mismatch(lhs, rhs) {
        let mut assignment = context;
        assignment.push(("x".to_string(), carrier.element(x).to_string()));
        push_violation(
            report,
            Violation {
                law: law.to_string(),
                assignment,
                lhs: out_carrier.element(lhs[x]).to_string(),
                rhs: out_carrier.element(rhs[x]).to_string(),
            },
        );
    }
}

fn ctx(pairs: &[(&str, usize)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Checks that all faces and degeneracies are morphisms and that the
/// simplicial identities hold wherever the truncation makes both sides
/// exist.  The level carriers themselves are *not* re-validated.
pub fn validate_simplicial(x: &SimplicialObject, caps: &Caps) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(x.name.clone());
    let n = x.depth();
    report.note(format!(
        "level carriers are not re-validated here ({} levels assumed valid)",
        n + 1
    ));

    let mut tables = Vec::with_capacity(n + 1);
    for lvl in &x.levels {
        tables.push(lvl.op_tables(caps)?);
    }

    report.law("face-is-morphism");
    report.law("degeneracy-is-morphism");
    for k in 0..n {
        for (i, map) in x.faces[k].iter().enumerate() {
            report.checks += tables[k + 1].size;
            if !morphism_ok(map, &tables[k + 1], &tables[k]) {
                let mut sub = check_morphism(map, &x.levels[k + 1], &x.levels[k], caps)?;
                sub.subject = format!("face {} out of level {}", i, k + 1);
                report.absorb(sub);
            }
        }
        for (j, map) in x.degeneracies[k].iter().enumerate() {
            report.checks += tables[k].size;
            if !morphism_ok(map, &tables[k], &tables[k + 1]) {
                let mut sub = check_morphism(map, &x.levels[k], &x.levels[k + 1], caps)?;
                sub.subject = format!("degeneracy {} at level {}", j, k);
                report.absorb(sub);
            }
        }
    }

    // (i) d_i d_j = d_{j-1} d_i for i < j, out of level m >= 2
    report.law("face-face");
    let mut any_ff = false;
    for m in 2..=n {
        for j in 0..=m {
            for i in 0..j {
                any_ff = true;
                let lhs = compose_maps(x.face(m - 1, i), x.face(m, j));
                let rhs = compose_maps(x.face(m - 1, j - 1), x.face(m, i));
                record_map_eq(
                    &mut report,
                    "face-face",
                    ctx(&[("level", m), ("i", i), ("j", j)]),
                    &x.levels[m],
                    &x.levels[m - 2],
                    &lhs,
                    &rhs,
                );
            }
        }
    }
    if !any_ff {
        report.note("face-face: not applicable at this truncation".to_string());
    }

    // (ii) s_i s_j = s_{j+1} s_i for i <= j, out of level m with m+2 <= n
    report.law("degeneracy-degeneracy");
    let mut any_ss = false;
    for m in 0..n.saturating_sub(1) {
        for j in 0..=m {
            for i in 0..=j {
                any_ss = true;
                let lhs = compose_maps(x.degeneracy(m + 1, i), x.degeneracy(m, j));
                let rhs = compose_maps(x.degeneracy(m + 1, j + 1), x.degeneracy(m, i));
                record_map_eq(
                    &mut report,
                    "degeneracy-degeneracy",
                    ctx(&[("level", m), ("i", i), ("j", j)]),
                    &x.levels[m],
                    &x.levels[m + 2],
                    &lhs,
                    &rhs,
                );
            }
        }
    }
    if !any_ss {
        report.note("degeneracy-degeneracy: not applicable at this truncation".to_string());
    }

    // (iii) faces against degeneracies, s_j out of level m
    report.law("face-degeneracy-cancel");
    report.law("face-degeneracy-slide-down");
    report.law("face-degeneracy-slide-up");
    let mut any_slide = false;
    for m in 0..n {
        let id = identity_map(x.levels[m].size() as usize);
        for j in 0..=m {
            for i in 0..=m + 1 {
                if i == j || i == j + 1 {
                    let lhs = compose_maps(x.face(m + 1, i), x.degeneracy(m, j));
                    record_map_eq(
                        &mut report,
                        "face-degeneracy-cancel",
                        ctx(&[("level", m), ("i", i), ("j", j)]),
                        &x.levels[m],
                        &x.levels[m],
                        &lhs,
                        &id,
                    );
                } else if i < j {
                    // needs s_{j-1} at level m-1
                    if m >= 1 {
                        any_slide = true;
                        let lhs = compose_maps(x.face(m + 1, i), x.degeneracy(m, j));
                        let rhs = compose_maps(x.degeneracy(m - 1, j - 1), x.face(m, i));
                        record_map_eq(
                            &mut report,
                            "face-degeneracy-slide-down",
                            ctx(&[("level", m), ("i", i), ("j", j)]),
                            &x.levels[m],
                            &x.levels[m],
                            &lhs,
                            &rhs,
                        );
                    }
                } else if m >= 1 {
                    // i > j+1, needs d_{i-1} out of level m
                    any_slide = true;
                    let lhs = compose_maps(x.face(m + 1, i), x.degeneracy(m, j));
                    let rhs = compose_maps(x.degeneracy(m - 1, j), x.face(m, i - 1));
                    record_map_eq(
                        &mut report,
                        "face-degeneracy-slide-up",
                        ctx(&[("level", m), ("i", i), ("j", j)]),
                        &x.levels[m],
                        &x.levels[m],
                        &lhs,
                        &rhs,
                    );
                }
            }
        }
    }
    if !any_slide && n >= 1 {
        report.note("face-degeneracy slides: not applicable at this truncation".to_string());
    }

    Ok(report)
}

/// Converts a failed structural validation into a hard error; used by
/// constructions that only make sense on actual simplicial objects.
pub fn ensure_simplicial(x: &SimplicialObject, caps: &Caps) -> Result<()> {
    let report = validate_simplicial(x, caps)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::NotSimplicial(format!(
            "{} fails {} at {:?}",
            x.name, v.law, v.assignment
        )));
    }
    Ok(())
}

/// A level-wise map of truncated simplicial objects.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialMap {
    pub source: SimplicialObject,
    pub target: SimplicialObject,
    pub maps: Vec<ElementMap>,
}

impl SimplicialMap {
    pub fn identity(x: &SimplicialObject) -> Self {
        SimplicialMap {
            source: x.clone(),
            target: x.clone(),
            maps: x
                .levels
                .iter()
                .map(|l| identity_map(l.size() as usize))
                .collect(),
        }
    }
}

/// `after ∘ first` levelwise.
pub fn compose_simplicial_maps(
    after: &SimplicialMap,
    first: &SimplicialMap,
) -> Result<SimplicialMap> {
    if !same_simplicial_data(&first.target, &after.source) {
        return Err(Error::SourceTargetMismatch(
            "cannot compose: simplicial endpoints differ".into(),
        ));
    }
    Ok(SimplicialMap {
        source: first.source.clone(),
        target: after.target.clone(),
        maps: first
            .maps
            .iter()
            .zip(after.maps.iter())
            .map(|(f, a)| compose_maps(a, f))
            .collect(),
    })
}

/// Each level map must be a morphism and commute with every face and
/// degeneracy.
pub fn validate_simplicial_map(m: &SimplicialMap, caps: &Caps) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(format!(
        "simplicial map {} -> {}",
        m.source.name, m.target.name
    ));
    let n = m.source.depth();
    if m.target.depth() != n || m.maps.len() != n + 1 {
        return Err(Error::LevelMismatch(format!(
            "map has {} levels, source {}, target {}",
            m.maps.len(),
            n + 1,
            m.target.depth() + 1
        )));
    }
    for k in 0..=n {
        let lvl_src = &m.source.levels[k];
        let lvl_dst = &m.target.levels[k];
        if m.maps[k].len() != lvl_src.size() as usize
            || m.maps[k].iter().any(|&v| v >= lvl_dst.size() as usize)
        {
            return Err(Error::LevelMismatch(format!(
                "level {} map has the wrong shape",
                k
            )));
        }
        let mut sub = check_morphism(&m.maps[k], lvl_src, lvl_dst, caps)?;
        sub.subject = format!("level {} component", k);
        report.absorb(sub);
    }
    report.law("commutes-with-faces");
    report.law("commutes-with-degeneracies");
    for k in 0..n {
        for (i, face) in m.source.faces[k].iter().enumerate() {
            let lhs = compose_maps(&m.maps[k], face);
            let rhs = compose_maps(&m.target.faces[k][i], &m.maps[k + 1]);
            record_map_eq(
                &mut report,
                "commutes-with-faces",
                ctx(&[("level", k + 1), ("i", i)]),
                &m.source.levels[k + 1],
                &m.target.levels[k],
                &lhs,
                &rhs,
            );
        }
        for (j, deg) in m.source.degeneracies[k].iter().enumerate() {
            let lhs = compose_maps(&m.maps[k + 1], deg);
            let rhs = compose_maps(&m.target.degeneracies[k][j], &m.maps[k]);
            record_map_eq(
                &mut report,
                "commutes-with-degeneracies",
                ctx(&[("level", k), ("j", j)]),
                &m.source.levels[k],
                &m.target.levels[k + 1],
                &lhs,
                &rhs,
            );
        }
    }
    Ok(report)
}

/// A simplicial homotopy between parallel simplicial maps `from` and `to`:
/// for each level `nn < N` the maps `h[nn][j] : X_nn -> Y_(nn+1)`,
/// `j = 0..=nn`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialHomotopy {
    pub from: SimplicialMap,
    pub to: SimplicialMap,
    pub h: Vec<Vec<ElementMap>>,
}

/// Checks the boundary identities tying `h` to its endpoints, the face and
/// degeneracy exchange identities, and that every `h` component is a
/// morphism.
pub fn validate_simplicial_homotopy(
    hom: &SimplicialHomotopy,
    caps: &Caps,
) -> Result<ValidationReport> {
    let x = &hom.from.source;
    let y = &hom.from.target;
    if !same_simplicial_data(x, &hom.to.source) || !same_simplicial_data(y, &hom.to.target) {
        return Err(Error::SourceTargetMismatch(
            "homotopy endpoints are not parallel".into(),
        ));
    }
    let n = x.depth();
    if hom.h.len() != n {
        return Err(Error::LevelMismatch(format!(
            "homotopy has {} level groups, expected {} (one below the truncation)",
            hom.h.len(),
            n
        )));
    }
    let mut report = ValidationReport::new("simplicial homotopy".to_string());
    for (nn, group) in hom.h.iter().enumerate() {
        if group.len() != nn + 1 {
            return Err(Error::LevelMismatch(format!(
                "level {} needs {} homotopy maps, found {}",
                nn,
                nn + 1,
                group.len()
            )));
        }
        for (j, map) in group.iter().enumerate() {
            if map.len() != x.levels[nn].size() as usize
                || map.iter().any(|&v| v >= y.levels[nn + 1].size() as usize)
            {
                return Err(Error::LevelMismatch(format!(
                    "homotopy map h[{}][{}] has the wrong shape",
                    nn, j
                )));
            }
            let mut sub = check_morphism(map, &x.levels[nn], &y.levels[nn + 1], caps)?;
            sub.subject = format!("h[{}][{}]", nn, j);
            report.absorb(sub);
        }
    }

    report.law("homotopy-end-left");
    report.law("homotopy-end-right");
    report.law("homotopy-face-above");
    report.law("homotopy-face-match");
    report.law("homotopy-face-below");
    report.law("homotopy-degeneracy-left");
    report.law("homotopy-degeneracy-right");

    for nn in 0..n {
        let hs = &hom.h[nn];
        // endpoints: d_0 h_0 = from, d_{nn+1} h_nn = to
        record_map_eq(
            &mut report,
            "homotopy-end-left",
            ctx(&[("level", nn)]),
            &x.levels[nn],
            &y.levels[nn],
            &compose_maps(y.face(nn + 1, 0), &hs[0]),
            &hom.from.maps[nn],
        );
        record_map_eq(
            &mut report,
            "homotopy-end-right",
            ctx(&[("level", nn)]),
            &x.levels[nn],
            &y.levels[nn],
            &compose_maps(y.face(nn + 1, nn + 1), &hs[nn]),
            &hom.to.maps[nn],
        );
        // d_i h_j
        for j in 0..=nn {
            for i in 0..=nn + 1 {
                if i < j {
                    // = h_{j-1} d_i (with h at level nn-1)
                    let lhs = compose_maps(y.face(nn + 1, i), &hs[j]);
                    let rhs = compose_maps(&hom.h[nn - 1][j - 1], x.face(nn, i));
                    record_map_eq(
                        &mut report,
                        "homotopy-face-above",
                        ctx(&[("level", nn), ("i", i), ("j", j)]),
                        &x.levels[nn],
                        &y.levels[nn],
                        &lhs,
                        &rhs,
                    );
                } else if i == j + 1 && j + 1 <= nn {
                    // d_{j+1} h_{j+1} = d_{j+1} h_j
                    let lhs = compose_maps(y.face(nn + 1, i), &hs[j + 1]);
                    let rhs = compose_maps(y.face(nn + 1, i), &hs[j]);
                    record_map_eq(
                        &mut report,
                        "homotopy-face-match",
                        ctx(&[("level", nn), ("j", j)]),
                        &x.levels[nn],
                        &y.levels[nn],
                        &lhs,
                        &rhs,
                    );
                } else if i > j + 1 && nn >= 1 {
                    // = h_j d_{i-1} (with h at level nn-1; j <= nn-1 holds)
                    let lhs = compose_maps(y.face(nn + 1, i), &hs[j]);
                    let rhs = compose_maps(&hom.h[nn - 1][j], x.face(nn, i - 1));
                    record_map_eq(
                        &mut report,
                        "homotopy-face-below",
                        ctx(&[("level", nn), ("i", i), ("j", j)]),
                        &x.levels[nn],
                        &y.levels[nn],
                        &lhs,
                        &rhs,
                    );
                }
            }
        }
        // s_i h_j needs level nn+1 homotopies
        if nn + 1 < n {
            for j in 0..=nn {
                for i in 0..=nn + 1 {
                    let lhs = compose_maps(y.degeneracy(nn + 1, i), &hs[j]);
                    let rhs = if i <= j {
                        compose_maps(&hom.h[nn + 1][j + 1], x.degeneracy(nn, i))
                    } else {
                        compose_maps(&hom.h[nn + 1][j], x.degeneracy(nn, i - 1))
                    };
                    record_map_eq(
                        &mut report,
                        if i <= j {
                            "homotopy-degeneracy-left"
                        } else {
                            "homotopy-degeneracy-right"
                        },
                        ctx(&[("level", nn), ("i", i), ("j", j)]),
                        &x.levels[nn],
                        &y.levels[nn + 2],
                        &lhs,
                        &rhs,
                    );
                }
            }
        }
    }
    if n >= 1 {
        report.note(
            "identities involving carriers above the truncation are skipped".to_string(),
        );
    }
    Ok(report)
}

/// The do-nothing homotopy from a simplicial map to itself:
/// `h[nn][j] = s_j ∘ f_nn`.
pub fn constant_homotopy(f: &SimplicialMap) -> SimplicialHomotopy {
    let n = f.source.depth();
    let h = (0..n)
        .map(|nn| {
            (0..=nn)
                .map(|j| compose_maps(f.target.degeneracy(nn, j), &f.maps[nn]))
                .collect()
        })
        .collect();
    SimplicialHomotopy {
        from: f.clone(),
        to: f.clone(),
        h,
    }
}

/// The simplicial object with `g` at every level and identity structure maps.
pub fn constant_simplicial(g: &OmegaGroup, depth: usize) -> Result<SimplicialObject> {
    let size = g.size() as usize;
    let levels = vec![g.clone(); depth + 1];
    let faces = (0..depth)
        .map(|k| vec![identity_map(size); k + 2])
        .collect();
    let degeneracies = (0..depth)
        .map(|k| vec![identity_map(size); k + 1])
        .collect();
    SimplicialObject::new(format!("const[{}]", g.name), levels, faces, degeneracies)
}

/// One term of the Moore complex: the carrier positions of
/// `NA_n = ∩_{i<n} Ker d_i` inside level `n`, the induced sub-object, and the
/// restriction of `d_n` with values in the positions of the previous term.
#[derive(Debug, Clone)]
pub struct MooreTerm {
    pub elements: Vec<usize>,
    pub object: OmegaGroup,
    pub boundary: Option<ElementMap>,
}

/// The Moore complex of a truncated simplicial object, term by term.
pub fn moore_complex(x: &SimplicialObject, caps: &Caps) -> Result<Vec<MooreTerm>> {
    let n = x.depth();
    let mut terms: Vec<MooreTerm> = Vec::with_capacity(n + 1);
    let level0 = &x.levels[0];
    terms.push(MooreTerm {
        elements: (0..level0.size() as usize).collect(),
        object: level0.clone().with_name(format!("{}[moore 0]", x.name)),
        boundary: None,
    });
    for m in 1..=n {
        let lvl = &x.levels[m];
        let zero_below = x.levels[m - 1].index_of(&x.levels[m - 1].zero())?;
        let size = lvl.size();
        if size > caps.enum_cap {
            return Err(Error::CapExceeded(format!(
                "level {} has {} elements, cap is {}",
                m, size, caps.enum_cap
            )));
        }
        let elements: Vec<usize> = (0..size as usize)
            .filter(|&e| (0..m).all(|i| x.face(m, i)[e] == zero_below))
            .collect();
        let object = lvl
            .sub_object(&elements, caps)?
            .with_name(format!("{}[moore {}]", x.name, m));
        // restriction of d_m, valued in the previous term's positions
        let prev = &terms[m - 1];
        let mut pos_prev = vec![None; x.levels[m - 1].size() as usize];
        for (p, &idx) in prev.elements.iter().enumerate() {
            pos_prev[idx] = Some(p);
        }
        let dm = x.face(m, m);
        let mut boundary = Vec::with_capacity(elements.len());
        for &e in &elements {
            let img = dm[e];
            match pos_prev[img] {
                Some(p) => boundary.push(p),
                None => {
                    return Err(Error::NotSimplicial(format!(
                        "d_{} image of a Moore element at level {} leaves the Moore subobject",
                        m, m
                    )))
                }
            }
        }
        terms.push(MooreTerm {
            elements,
            object,
            boundary: Some(boundary),
        });
    }
    Ok(terms)
}

/// Whether every Moore term above `n` (within the truncation) is trivial.
pub fn moore_length_at_most(x: &SimplicialObject, n: usize, caps: &Caps) -> Result<bool> {
    let terms = moore_complex(x, caps)?;
    Ok(terms.iter().skip(n + 1).all(|t| t.elements.len() == 1))
}
