//! Isomorphism search by filtering the morphism enumerators down to
//! bijections.  On finite carriers a bijective morphism is automatically an
//! isomorphism: the inverse of a bijection that preserves every (total)
//! operation preserves them too.

use crate::caps::Caps;
use crate::error::Result;
use crate::omega::{enumerate_morphisms, ElementMap, OmegaGroup};
use crate::xmod::{enumerate_xmod_morphisms, CrossedModule};

fn bijective(map: &[usize], dst_size: usize) -> bool {
    if map.len() != dst_size {
        return false;
    }
    let mut seen = vec![false; dst_size];
    for &v in map {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// The value table of `map` read backwards.
pub fn invert_bijection(map: &[usize]) -> ElementMap {
    let mut inv = vec![0usize; map.len()];
    for (i, &v) in map.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// First isomorphism between two carriers in enumeration order, if any.
pub fn find_isomorphism(
    a: &OmegaGroup,
    b: &OmegaGroup,
    caps: &Caps,
) -> Result<Option<ElementMap>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    let n = b.size() as usize;
    Ok(enumerate_morphisms(a, b, caps)?
        .into_iter()
        .find(|m| bijective(m, n)))
}

/// First pair of bijective component maps forming a crossed module
/// morphism, if any.  Both components must be bijections; the morphism laws
/// are already guaranteed by the enumerator.
pub fn find_xmod_isomorphism(
    x: &CrossedModule,
    y: &CrossedModule,
    caps: &Caps,
) -> Result<Option<(ElementMap, ElementMap)>> {
    if x.e().size() != y.e().size() || x.r().size() != y.r().size() {
        return Ok(None);
    }
    let ne = y.e().size() as usize;
    let nr = y.r().size() as usize;
    Ok(enumerate_xmod_morphisms(x, y, caps)?
        .into_iter()
        .find(|m| bijective(&m.f0, nr) && bijective(&m.f1, ne))
        .map(|m| (m.f0, m.f1)))
}
