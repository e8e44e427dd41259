use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::report::{push_violation, ValidationReport, Violation};
use crate::signature::{is_multilinear, untwin, Identity, Signature, Term};

/// One element of a finite carrier: either a row/column index into explicit
/// operation tables, or a coordinate vector over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Index(usize),
    Vector(Vec<u32>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Index(i) => write!(f, "{}", i),
            Element::Vector(v) => {
                f.write_str("(")?;
                for (k, c) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", c)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Fully explicit finite operations: every op is a lookup table over
/// `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableBackend {
    pub size: usize,
    pub zero: usize,
    pub add: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    #[serde(default)]
    pub star: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub unary: BTreeMap<String, Vec<usize>>,
}

impl TableBackend {
    pub fn add_i(&self, x: usize, y: usize) -> usize {
        self.add[x][y]
    }

    pub fn neg_i(&self, x: usize) -> usize {
        self.neg[x]
    }

    /// Star lookup that understands `°`-suffixed (argument-swapped) symbols.
    pub fn star_i(&self, sym: &str, x: usize, y: usize) -> Result<usize> {
        let (base, swapped) = untwin(sym);
        let table = self
            .star
            .get(base)
            .ok_or_else(|| Error::UnknownSymbol(base.to_string()))?;
        Ok(if swapped { table[y][x] } else { table[x][y] })
    }

    pub fn unary_i(&self, sym: &str, x: usize) -> Result<usize> {
        let table = self
            .unary
            .get(sym)
            .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
        Ok(table[x])
    }
}

/// Linear carrier `F_p^dim`: addition is vector addition, each star symbol is
/// given by its values on pairs of basis vectors (extended bilinearly) and
/// each unary symbol by its values on basis vectors (extended linearly).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorBackend {
    pub p: u32,
    pub dim: usize,
    /// `star[sym][i][j]` = coordinates of `e_i ∗ e_j`.
    #[serde(default)]
    pub star: BTreeMap<String, Vec<Vec<Vec<u32>>>>,
    /// `unary[sym][i]` = coordinates of `ω(e_i)`.
    #[serde(default)]
    pub unary: BTreeMap<String, Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Backend {
    Table(TableBackend),
    Vectors(VectorBackend),
}

/// A finite group-with-operations: one additive group plus extra binary and
/// unary operations tied together by distributivity, centrality of products,
/// and the equations of its signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaGroup {
    pub name: String,
    pub signature: Signature,
    pub backend: Backend,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_row(row: &[usize], size: usize, what: &str) -> Result<()> {
    if row.len() != size {
        return Err(Error::MalformedBackend(format!(
            "{}: expected {} entries, found {}",
            what,
            size,
            row.len()
        )));
    }
    for &e in row {
        if e >= size {
            return Err(Error::MalformedBackend(format!(
                "{}: entry {} out of range 0..{}",
                what, e, size
            )));
        }
    }
    Ok(())
}

fn check_vec_entries(v: &[u32], dim: usize, p: u32, what: &str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::MalformedBackend(format!(
            "{}: expected a vector of length {}, found {}",
            what,
            dim,
            v.len()
        )));
    }
    for &c in v {
        if c >= p {
            return Err(Error::MalformedBackend(format!(
                "{}: coordinate {} not reduced mod {}",
                what, c, p
            )));
        }
    }
    Ok(())
}

fn symbol_sets_match<T>(
    declared: &[String],
    provided: &BTreeMap<String, T>,
    what: &str,
) -> Result<()> {
    for sym in declared {
        if !provided.contains_key(sym) {
            return Err(Error::SignatureMismatch(format!(
                "{} `{}` declared but no table provided",
                what, sym
            )));
        }
    }
    for sym in provided.keys() {
        if !declared.iter().any(|s| s == sym) {
            return Err(Error::SignatureMismatch(format!(
                "table for undeclared {} `{}`",
                what, sym
            )));
        }
    }
    Ok(())
}

impl OmegaGroup {
    pub fn new(name: impl Into<String>, signature: Signature, backend: Backend) -> Result<Self> {
        signature.check()?;
        match &backend {
            Backend::Table(tb) => {
                if tb.size == 0 {
                    return Err(Error::MalformedBackend("empty carrier".into()));
                }
                if tb.zero >= tb.size {
                    return Err(Error::MalformedBackend(format!(
                        "zero index {} out of range 0..{}",
                        tb.zero, tb.size
                    )));
                }
                if tb.add.len() != tb.size {
                    return Err(Error::MalformedBackend(format!(
                        "add table has {} rows, carrier has {} elements",
                        tb.add.len(),
                        tb.size
                    )));
                }
                for (i, row) in tb.add.iter().enumerate() {
                    check_row(row, tb.size, &format!("add row {}", i))?;
                }
                check_row(&tb.neg, tb.size, "neg table")?;
                symbol_sets_match(&signature.stars, &tb.star, "star symbol")?;
                symbol_sets_match(&signature.unary, &tb.unary, "unary symbol")?;
                for (sym, table) in &tb.star {
                    if table.len() != tb.size {
                        return Err(Error::MalformedBackend(format!(
                            "star `{}` has {} rows, carrier has {} elements",
                            sym,
                            table.len(),
                            tb.size
                        )));
                    }
                    for (i, row) in table.iter().enumerate() {
                        check_row(row, tb.size, &format!("star `{}` row {}", sym, i))?;
                    }
                }
                for (sym, table) in &tb.unary {
                    check_row(table, tb.size, &format!("unary `{}`", sym))?;
                }
            }
            Backend::Vectors(vb) => {
                if !is_prime(vb.p) {
                    return Err(Error::MalformedBackend(format!(
                        "modulus {} is not prime",
                        vb.p
                    )));
                }
                if (vb.p as u64).checked_pow(vb.dim as u32).is_none() {
                    return Err(Error::MalformedBackend(format!(
                        "carrier {}^{} does not fit in 64 bits",
                        vb.p, vb.dim
                    )));
                }
                symbol_sets_match(&signature.stars, &vb.star, "star symbol")?;
                symbol_sets_match(&signature.unary, &vb.unary, "unary symbol")?;
                for (sym, table) in &vb.star {
                    if table.len() != vb.dim {
                        return Err(Error::MalformedBackend(format!(
                            "star `{}` has {} rows, dimension is {}",
                            sym,
                            table.len(),
                            vb.dim
                        )));
                    }
                    for (i, row) in table.iter().enumerate() {
                        if row.len() != vb.dim {
                            return Err(Error::MalformedBackend(format!(
                                "star `{}` row {} has {} entries, dimension is {}",
                                sym,
                                i,
                                row.len(),
                                vb.dim
                            )));
                        }
                        for (j, v) in row.iter().enumerate() {
                            check_vec_entries(
                                v,
                                vb.dim,
                                vb.p,
                                &format!("star `{}` entry ({},{})", sym, i, j),
                            )?;
                        }
                    }
                }
                for (sym, table) in &vb.unary {
                    if table.len() != vb.dim {
                        return Err(Error::MalformedBackend(format!(
                            "unary `{}` has {} rows, dimension is {}",
                            sym,
                            table.len(),
                            vb.dim
                        )));
                    }
                    for (i, v) in table.iter().enumerate() {
                        check_vec_entries(v, vb.dim, vb.p, &format!("unary `{}` row {}", sym, i))?;
                    }
                }
            }
        }
        Ok(OmegaGroup {
            name: name.into(),
            signature,
            backend,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> u64 {
        match &self.backend {
            Backend::Table(tb) => tb.size as u64,
            Backend::Vectors(vb) => (vb.p as u64).pow(vb.dim as u32),
        }
    }

    pub fn zero(&self) -> Element {
        match &self.backend {
            Backend::Table(tb) => Element::Index(tb.zero),
            Backend::Vectors(vb) => Element::Vector(vec![0; vb.dim]),
        }
    }

    /// The element at a carrier index.  Vector carriers are indexed by their
    /// base-`p` digits, most significant coordinate first.
    pub fn element(&self, idx: usize) -> Element {
        match &self.backend {
            Backend::Table(_) => Element::Index(idx),
            Backend::Vectors(vb) => {
                let mut v = vec![0u32; vb.dim];
                let mut rest = idx as u64;
                for k in (0..vb.dim).rev() {
                    v[k] = (rest % vb.p as u64) as u32;
                    rest /= vb.p as u64;
                }
                Element::Vector(v)
            }
        }
    }

    pub fn index_of(&self, el: &Element) -> Result<usize> {
        match (&self.backend, el) {
            (Backend::Table(tb), Element::Index(i)) => {
                if *i < tb.size {
                    Ok(*i)
                } else {
                    Err(Error::InvalidInput(format!(
                        "index {} out of range 0..{}",
                        i, tb.size
                    )))
                }
            }
            (Backend::Vectors(vb), Element::Vector(v)) => {
                check_vec_entries(v, vb.dim, vb.p, "element").map_err(|e| {
                    Error::InvalidInput(format!("element does not fit the carrier: {}", e))
                })?;
                let mut idx = 0u64;
                for &c in v {
                    idx = idx * vb.p as u64 + c as u64;
                }
                Ok(idx as usize)
            }
            _ => Err(Error::InvalidInput(
                "element shape does not match the backend".into(),
            )),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        match (&self.backend, a, b) {
            (Backend::Table(tb), Element::Index(x), Element::Index(y)) => {
                if *x >= tb.size || *y >= tb.size {
                    return Err(Error::InvalidInput("add: index out of range".into()));
                }
                Ok(Element::Index(tb.add[*x][*y]))
            }
            (Backend::Vectors(vb), Element::Vector(x), Element::Vector(y)) => {
                if x.len() != vb.dim || y.len() != vb.dim {
                    return Err(Error::InvalidInput("add: wrong vector length".into()));
                }
                Ok(Element::Vector(
                    x.iter()
                        .zip(y.iter())
                        .map(|(&a, &b)| (a + b) % vb.p)
                        .collect(),
                ))
            }
            _ => Err(Error::InvalidInput(
                "add: element shape does not match the backend".into(),
            )),
        }
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        match (&self.backend, a) {
            (Backend::Table(tb), Element::Index(x)) => {
                if *x >= tb.size {
                    return Err(Error::InvalidInput("neg: index out of range".into()));
                }
                Ok(Element::Index(tb.neg[*x]))
            }
            (Backend::Vectors(vb), Element::Vector(x)) => {
                if x.len() != vb.dim {
                    return Err(Error::InvalidInput("neg: wrong vector length".into()));
                }
                Ok(Element::Vector(x.iter().map(|&a| (vb.p - a) % vb.p).collect()))
            }
            _ => Err(Error::InvalidInput(
                "neg: element shape does not match the backend".into(),
            )),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    fn star_base(&self, base: &str, a: &Element, b: &Element) -> Result<Element> {
        match (&self.backend, a, b) {
            (Backend::Table(tb), Element::Index(x), Element::Index(y)) => {
                let table = tb
                    .star
                    .get(base)
                    .ok_or_else(|| Error::UnknownSymbol(base.to_string()))?;
                if *x >= tb.size || *y >= tb.size {
                    return Err(Error::InvalidInput("star: index out of range".into()));
                }
                Ok(Element::Index(table[*x][*y]))
            }
            (Backend::Vectors(vb), Element::Vector(x), Element::Vector(y)) => {
                let table = vb
                    .star
                    .get(base)
                    .ok_or_else(|| Error::UnknownSymbol(base.to_string()))?;
                if x.len() != vb.dim || y.len() != vb.dim {
                    return Err(Error::InvalidInput("star: wrong vector length".into()));
                }
                let mut out = vec![0u64; vb.dim];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        if yj == 0 {
                            continue;
                        }
                        let coef = (xi as u64 * yj as u64) % vb.p as u64;
                        for (k, &c) in table[i][j].iter().enumerate() {
                            out[k] = (out[k] + coef * c as u64) % vb.p as u64;
                        }
                    }
                }
                Ok(Element::Vector(out.into_iter().map(|c| c as u32).collect()))
            }
            _ => Err(Error::InvalidInput(
                "star: element shape does not match the backend".into(),
            )),
        }
    }

    fn unary_base(&self, sym: &str, a: &Element) -> Result<Element> {
        match (&self.backend, a) {
            (Backend::Table(tb), Element::Index(x)) => {
                let table = tb
                    .unary
                    .get(sym)
                    .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
                if *x >= tb.size {
                    return Err(Error::InvalidInput("unary: index out of range".into()));
                }
                Ok(Element::Index(table[*x]))
            }
            (Backend::Vectors(vb), Element::Vector(x)) => {
                let table = vb
                    .unary
                    .get(sym)
                    .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
                if x.len() != vb.dim {
                    return Err(Error::InvalidInput("unary: wrong vector length".into()));
                }
                let mut out = vec![0u64; vb.dim];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (k, &c) in table[i].iter().enumerate() {
                        out[k] = (out[k] + xi as u64 * c as u64) % vb.p as u64;
                    }
                }
                Ok(Element::Vector(out.into_iter().map(|c| c as u32).collect()))
            }
            _ => Err(Error::InvalidInput(
                "unary: element shape does not match the backend".into(),
            )),
        }
    }

    /// Applies a named operation.  Two-argument symbols may carry the `°`
    /// suffix, which applies the base operation with swapped arguments.
    pub fn eval(&self, sym: &str, args: &[Element]) -> Result<Element> {
        let (base, swapped) = untwin(sym);
        if self.signature.has_star(base) {
            if args.len() != 2 {
                return Err(Error::ArityMismatch {
                    symbol: sym.to_string(),
                    expected: 2,
                    got: args.len(),
                });
            }
            return if swapped {
                self.star_base(base, &args[1], &args[0])
            } else {
                self.star_base(base, &args[0], &args[1])
            };
        }
        if self.signature.has_unary(base) && !swapped {
            if args.len() != 1 {
                return Err(Error::ArityMismatch {
                    symbol: sym.to_string(),
                    expected: 1,
                    got: args.len(),
                });
            }
            return self.unary_base(base, &args[0]);
        }
        Err(Error::UnknownSymbol(sym.to_string()))
    }

    pub fn eval_term(&self, term: &Term, env: &[Element]) -> Result<Element> {
        match term {
            Term::Var { i } => env.get(*i).cloned().ok_or_else(|| {
                Error::InvalidInput(format!("term variable x{} has no assignment", i))
            }),
            Term::Zero => Ok(self.zero()),
            Term::Add { a, b } => {
                let ea = self.eval_term(a, env)?;
                let eb = self.eval_term(b, env)?;
                self.add(&ea, &eb)
            }
            Term::Neg { a } => {
                let ea = self.eval_term(a, env)?;
                self.neg(&ea)
            }
            Term::Star { sym, a, b } => {
                let ea = self.eval_term(a, env)?;
                let eb = self.eval_term(b, env)?;
                self.eval(sym, &[ea, eb])
            }
            Term::Unary { sym, a } => {
                let ea = self.eval_term(a, env)?;
                self.eval(sym, &[ea])
            }
        }
    }

    pub fn enumerate(&self, caps: &Caps) -> Result<Vec<Element>> {
        let n = self.size();
        if n > caps.enum_cap {
            return Err(Error::CapExceeded(format!(
                "carrier `{}` has {} elements, enumeration cap is {}",
                self.name, n, caps.enum_cap
            )));
        }
        Ok((0..n as usize).map(|i| self.element(i)).collect())
    }

    /// Materializes every operation as an index table.  Borrowed for carriers
    /// that already are tables; computed (under `enum_cap`) for linear ones.
    pub fn op_tables(&self, caps: &Caps) -> Result<Cow<'_, TableBackend>> {
        match &self.backend {
            Backend::Table(tb) => Ok(Cow::Borrowed(tb)),
            Backend::Vectors(_) => {
                let elems = self.enumerate(caps)?;
                let n = elems.len();
                let mut add = vec![vec![0usize; n]; n];
                let mut neg = vec![0usize; n];
                for (i, a) in elems.iter().enumerate() {
                    neg[i] = self.index_of(&self.neg(a)?)?;
                    for (j, b) in elems.iter().enumerate() {
                        add[i][j] = self.index_of(&self.add(a, b)?)?;
                    }
                }
                let mut star = BTreeMap::new();
                for sym in &self.signature.stars {
                    let mut table = vec![vec![0usize; n]; n];
                    for (i, a) in elems.iter().enumerate() {
                        for (j, b) in elems.iter().enumerate() {
                            table[i][j] =
                                self.index_of(&self.star_base(sym, a, b)?)?;
                        }
                    }
                    star.insert(sym.clone(), table);
                }
                let mut unary = BTreeMap::new();
                for sym in &self.signature.unary {
                    let mut table = vec![0usize; n];
                    for (i, a) in elems.iter().enumerate() {
                        table[i] = self.index_of(&self.unary_base(sym, a)?)?;
                    }
                    unary.insert(sym.clone(), table);
                }
                Ok(Cow::Owned(TableBackend {
                    size: n,
                    zero: self.index_of(&self.zero())?,
                    add,
                    neg,
                    star,
                    unary,
                }))
            }
        }
    }

    /// The sub-object on the given carrier indices, which must be pairwise
    /// distinct, contain zero, and be closed under every operation.  The
    /// result is always table-backed; its element `k` is the parent element
    /// `indices[k]`.
    pub fn sub_object(&self, indices: &[usize], caps: &Caps) -> Result<OmegaGroup> {
        let n = indices.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty sub-carrier".into()));
        }
        if n as u64 > caps.enum_cap {
            return Err(Error::CapExceeded(format!(
                "sub-carrier has {} elements, cap is {}",
                n, caps.enum_cap
            )));
        }
        let mut pos: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, &i) in indices.iter().enumerate() {
            if pos.insert(i, k).is_some() {
                return Err(Error::InvalidInput(format!(
                    "sub-carrier index {} repeated",
                    i
                )));
            }
        }
        let zero_idx = self.index_of(&self.zero())?;
        let zero_pos = *pos.get(&zero_idx).ok_or_else(|| {
            Error::InvalidInput("sub-carrier does not contain zero".into())
        })?;
        let els: Vec<Element> = indices.iter().map(|&i| self.element(i)).collect();
        let look = |el: &Element| -> Result<usize> {
            let idx = self.index_of(el)?;
            pos.get(&idx).copied().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "sub-carrier not closed: reached element {} outside it",
                    el
                ))
            })
        };
        let mut add = vec![vec![0usize; n]; n];
        let mut neg = vec![0usize; n];
        for (i, a) in els.iter().enumerate() {
            neg[i] = look(&self.neg(a)?)?;
            for (j, b) in els.iter().enumerate() {
                add[i][j] = look(&self.add(a, b)?)?;
            }
        }
        let mut star = BTreeMap::new();
        for sym in &self.signature.stars {
            let mut table = vec![vec![0usize; n]; n];
            for (i, a) in els.iter().enumerate() {
                for (j, b) in els.iter().enumerate() {
                    table[i][j] = look(&self.star_base(sym, a, b)?)?;
                }
            }
            star.insert(sym.clone(), table);
        }
        let mut unary = BTreeMap::new();
        for sym in &self.signature.unary {
            let mut table = vec![0usize; n];
            for (i, a) in els.iter().enumerate() {
                table[i] = look(&self.unary_base(sym, a)?)?;
            }
            unary.insert(sym.clone(), table);
        }
        OmegaGroup::new(
            format!("{}[sub]", self.name),
            self.signature.clone(),
            Backend::Table(TableBackend {
                size: n,
                zero: zero_pos,
                add,
                neg,
                star,
                unary,
            }),
        )
    }
}

/// Same operation symbols and algebra kind.  Morphisms, actions, and crossed
/// modules only make sense between carriers that agree here.
pub fn assert_same_signature(a: &OmegaGroup, b: &OmegaGroup) -> Result<()> {
    if a.signature.kind != b.signature.kind {
        return Err(Error::SignatureMismatch(format!(
            "`{}` has kind {}, `{}` has kind {}",
            a.name, a.signature.kind, b.name, b.signature.kind
        )));
    }
    if a.signature.stars != b.signature.stars || a.signature.unary != b.signature.unary {
        return Err(Error::SignatureMismatch(format!(
            "`{}` and `{}` declare different operation symbols",
            a.name, b.name
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Budget {
    left: u64,
}

impl Budget {
    fn new() -> Self {
        Budget {
            left: Caps::ASSIGNMENT_BUDGET,
        }
    }

    fn take(&mut self, amount: u64, what: &str) -> Result<()> {
        if amount > self.left {
            return Err(Error::CapExceeded(format!(
                "{} needs {} law instances, beyond the remaining budget {}",
                what, amount, self.left
            )));
        }
        self.left -= amount;
        Ok(())
    }
}

fn pow_checked(n: u64, k: u32, what: &str) -> Result<u64> {
    n.checked_pow(k).ok_or_else(|| {
        Error::CapExceeded(format!("{}: {}^{} overflows the instance budget", what, n, k))
    })
}

fn witness(law: &str, names_vals: &[(&str, &Element)], lhs: &Element, rhs: &Element) -> Violation {
    Violation {
        law: law.to_string(),
        assignment: names_vals
            .iter()
            .map(|(n, v)| (n.to_string(), v.to_string()))
            .collect(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// Checks one identity over an explicit list of candidate values per
/// variable, recording every mismatch (up to the witness cap).
fn check_identity_over(
    g: &OmegaGroup,
    id: &Identity,
    pools: &[&[Element]],
    report: &mut ValidationReport,
) -> Result<()> {
    let mut env: Vec<Element> = pools.iter().map(|p| p[0].clone()).collect();
    let mut counters = vec![0usize; id.vars];
    if pools.iter().any(|p| p.is_empty()) {
        return Ok(());
    }
    loop {
        for (k, &c) in counters.iter().enumerate() {
            env[k] = pools[k][c].clone();
        }
        let l = g.eval_term(&id.lhs, &env)?;
        let r = g.eval_term(&id.rhs, &env)?;
        report.checks += 1;
        if l != r {
            let named: Vec<(String, String)> = env
                .iter()
                .enumerate()
                .map(|(k, e)| (format!("x{}", k), e.to_string()))
                .collect();
            push_violation(
                report,
                Violation {
                    law: id.name.clone(),
                    assignment: named,
                    lhs: l.to_string(),
                    rhs: r.to_string(),
                },
            );
        }
        // advance the mixed-radix counter
        let mut k = id.vars;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < pools[k].len() {
                break;
            }
            counters[k] = 0;
        }
    }
}

fn validate_table(g: &OmegaGroup, tb: &TableBackend, caps: &Caps) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(g.name.clone());
    let n = tb.size as u64;
    if n > caps.enum_cap {
        return Err(Error::CapExceeded(format!(
            "carrier `{}` has {} elements, enumeration cap is {}",
            g.name, n, caps.enum_cap
        )));
    }
    let mut budget = Budget::new();
    let n3 = pow_checked(n, 3, "triple scans")?;
    let stars = tb.star.len() as u64;
    let unops = tb.unary.len() as u64;
    budget.take(n3, "additive associativity")?;
    budget.take(2 * n, "zero and negation laws")?;
    budget.take(stars * 3 * n3, "distributivity and product centrality")?;
    budget.take(unops * n * n + unops * stars * n * n, "unary compatibility")?;
    for id in &g.signature.identities {
        budget.take(
            pow_checked(n, id.vars as u32, &format!("identity `{}`", id.name))?,
            &format!("identity `{}`", id.name),
        )?;
    }

    let size = tb.size;
    let el = |i: usize| Element::Index(i);

    report.law("add-associativity");
    'assoc: for x in 0..size {
        for y in 0..size {
            let xy = tb.add[x][y];
            for z in 0..size {
                report.checks += 1;
                let l = tb.add[xy][z];
                let r = tb.add[x][tb.add[y][z]];
                if l != r {
                    push_violation(
                        &mut report,
                        witness(
                            "add-associativity",
                            &[(&"x", &el(x)), (&"y", &el(y)), (&"z", &el(z))],
                            &el(l),
                            &el(r),
                        ),
                    );
                    if report.violations.len() >= crate::report::MAX_WITNESSES {
                        break 'assoc;
                    }
                }
            }
        }
    }
    report.law("zero-identity");
    for x in 0..size {
        report.checks += 1;
        if tb.add[tb.zero][x] != x || tb.add[x][tb.zero] != x {
            push_violation(
                &mut report,
                witness(
                    "zero-identity",
                    &[(&"x", &el(x))],
                    &el(tb.add[tb.zero][x]),
                    &el(x),
                ),
            );
        }
    }
    report.law("negation");
    for x in 0..size {
        report.checks += 1;
        if tb.add[tb.neg[x]][x] != tb.zero || tb.add[x][tb.neg[x]] != tb.zero {
            push_violation(
                &mut report,
                witness(
                    "negation",
                    &[(&"x", &el(x))],
                    &el(tb.add[tb.neg[x]][x]),
                    &el(tb.zero),
                ),
            );
        }
    }

    for (sym, table) in &tb.star {
        let left_law = format!("left-distributivity[{}]", sym);
        report.law(left_law.clone());
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    report.checks += 1;
                    let l = table[x][tb.add[y][z]];
                    let r = tb.add[table[x][y]][table[x][z]];
                    if l != r {
                        push_violation(
                            &mut report,
                            witness(
                                &left_law,
                                &[(&"x", &el(x)), (&"y", &el(y)), (&"z", &el(z))],
                                &el(l),
                                &el(r),
                            ),
                        );
                    }
                }
            }
        }
        let right_law = format!("right-distributivity[{}]", sym);
        report.law(right_law.clone());
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    report.checks += 1;
                    let l = table[tb.add[y][z]][x];
                    let r = tb.add[table[y][x]][table[z][x]];
                    if l != r {
                        push_violation(
                            &mut report,
                            witness(
                                &right_law,
                                &[(&"x", &el(x)), (&"y", &el(y)), (&"z", &el(z))],
                                &el(l),
                                &el(r),
                            ),
                        );
                    }
                }
            }
        }
        let central_law = format!("central-products[{}]", sym);
        report.law(central_law.clone());
        for x in 0..size {
            for y in 0..size {
                let prod = table[x][y];
                for w in 0..size {
                    report.checks += 1;
                    let l = tb.add[w][prod];
                    let r = tb.add[prod][w];
                    if l != r {
                        push_violation(
                            &mut report,
                            witness(
                                &central_law,
                                &[(&"w", &el(w)), (&"x", &el(x)), (&"y", &el(y))],
                                &el(l),
                                &el(r),
                            ),
                        );
                    }
                }
            }
        }
    }

    for (usym, utable) in &tb.unary {
        let add_law = format!("additivity[{}]", usym);
        report.law(add_law.clone());
        for x in 0..size {
            for y in 0..size {
                report.checks += 1;
                let l = utable[tb.add[x][y]];
                let r = tb.add[utable[x]][utable[y]];
                if l != r {
                    push_violation(
                        &mut report,
                        witness(&add_law, &[(&"x", &el(x)), (&"y", &el(y))], &el(l), &el(r)),
                    );
                }
            }
        }
        for (sym, table) in &tb.star {
            let law = format!("star-compatibility[{},{}]", usym, sym);
            report.law(law.clone());
            for x in 0..size {
                for y in 0..size {
                    report.checks += 1;
                    let l = utable[table[x][y]];
                    let r = table[utable[x]][utable[y]];
                    if l != r {
                        push_violation(
                            &mut report,
                            witness(&law, &[(&"x", &el(x)), (&"y", &el(y))], &el(l), &el(r)),
                        );
                    }
                }
            }
        }
    }

    if !tb.star.is_empty() {
        report.note(
            "swapped-argument companions (°) are evaluated by definition; their \
             distributivity instances appear as right-distributivity"
                .to_string(),
        );
        report.note(
            "unary star-compatibility quantifies over all argument pairs, which covers \
             the swapped companions"
                .to_string(),
        );
    }

    let elems: Vec<Element> = (0..size).map(el).collect();
    for id in &g.signature.identities {
        report.law(id.name.clone());
        let pools: Vec<&[Element]> = (0..id.vars).map(|_| elems.as_slice()).collect();
        check_identity_over(g, id, &pools, &mut report)?;
    }

    Ok(report)
}

fn validate_vectors(g: &OmegaGroup, vb: &VectorBackend, caps: &Caps) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(g.name.clone());
    let mut budget = Budget::new();
    let d = vb.dim as u64;

    report.note(format!(
        "carrier is F_{}^{}: additive laws, commutativity of +, distributivity, and \
         centrality of products hold by construction of the linear backend",
        vb.p, vb.dim
    ));

    let basis: Vec<Element> = (0..vb.dim)
        .map(|i| {
            let mut v = vec![0u32; vb.dim];
            v[i] = 1;
            Element::Vector(v)
        })
        .collect();

    // Smoke checks on basis vectors: cheap, and they exercise the evaluator.
    report.law("zero-identity");
    report.law("negation");
    let zero = g.zero();
    for e in &basis {
        report.checks += 2;
        let z = g.add(&zero, e)?;
        if &z != e {
            push_violation(&mut report, witness("zero-identity", &[(&"x", e)], &z, e));
        }
        let s = g.add(&g.neg(e)?, e)?;
        if s != zero {
            push_violation(&mut report, witness("negation", &[(&"x", e)], &s, &zero));
        }
    }

    // Unary/star compatibility is a genuine constraint on the structure
    // tensors.  Both sides are bilinear, so basis pairs decide it everywhere.
    for usym in &vb.unary.keys().cloned().collect::<Vec<_>>() {
        for ssym in &vb.star.keys().cloned().collect::<Vec<_>>() {
            let law = format!("star-compatibility[{},{}]", usym, ssym);
            report.law(law.clone());
            budget.take(d * d, &law)?;
            for a in &basis {
                for b in &basis {
                    report.checks += 1;
                    let l = g.unary_base(usym, &g.star_base(ssym, a, b)?)?;
                    let r = g.star_base(ssym, &g.unary_base(usym, a)?, &g.unary_base(usym, b)?)?;
                    if l != r {
                        push_violation(
                            &mut report,
                            witness(&law, &[(&"x", a), (&"y", b)], &l, &r),
                        );
                    }
                }
            }
        }
    }
    if !vb.unary.is_empty() {
        report.note(
            "unary additivity holds by construction (linear extension); star-compatibility \
             was checked on basis pairs, which suffices by bilinearity"
                .to_string(),
        );
    }

    for id in &g.signature.identities {
        report.law(id.name.clone());
        if is_multilinear(id) {
            budget.take(
                pow_checked(d.max(1), id.vars as u32, &id.name)?,
                &id.name,
            )?;
            let pools: Vec<&[Element]> = (0..id.vars).map(|_| basis.as_slice()).collect();
            check_identity_over(g, id, &pools, &mut report)?;
            report.note(format!(
                "identity `{}` is multilinear: basis tuples decide it everywhere",
                id.name
            ));
        } else {
            let total = g.size();
            budget.take(
                pow_checked(total, id.vars as u32, &id.name)?,
                &id.name,
            )?;
            if total > caps.enum_cap {
                return Err(Error::CapExceeded(format!(
                    "identity `{}` is not multilinear and the carrier has {} elements \
                     (cap {})",
                    id.name, total, caps.enum_cap
                )));
            }
            let elems = g.enumerate(caps)?;
            let pools: Vec<&[Element]> = (0..id.vars).map(|_| elems.as_slice()).collect();
            check_identity_over(g, id, &pools, &mut report)?;
        }
    }

    Ok(report)
}

/// Checks every law a group-with-operations must satisfy: the additive group
/// axioms, two-sided distributivity of each star over +, additive centrality
/// of all star products, compatibility of unary operations with + and stars,
/// and the signature's own identities.
pub fn validate_omega_group(g: &OmegaGroup, caps: &Caps) -> Result<ValidationReport> {
    match &g.backend {
        Backend::Table(tb) => validate_table(g, tb, caps),
        Backend::Vectors(vb) => validate_vectors(g, vb, caps),
    }
}

// ---------------------------------------------------------------------------
// Morphisms between carriers
// ---------------------------------------------------------------------------

/// A map between carriers given by its value table: entry `i` is the index in
/// the target of the image of element `i` of the source.
pub type ElementMap = Vec<usize>;

pub fn identity_map(n: usize) -> ElementMap {
    (0..n).collect()
}

/// `after ∘ first`.
pub fn compose_maps(after: &[usize], first: &[usize]) -> ElementMap {
    first.iter().map(|&i| after[i]).collect()
}

/// Fast morphism predicate over materialized tables: preserves +, every star,
/// and every unary operation.  (Zero and negation preservation follow from
/// additivity in a group.)
pub fn morphism_ok(f: &[usize], src: &TableBackend, dst: &TableBackend) -> bool {
    if f.len() != src.size || f.iter().any(|&i| i >= dst.size) {
        return false;
    }
    for x in 0..src.size {
        let fx = f[x];
        for y in 0..src.size {
            if f[src.add[x][y]] != dst.add[fx][f[y]] {
                return false;
            }
        }
    }
    for (sym, table) in &src.star {
        let dt = match dst.star.get(sym) {
            Some(t) => t,
            None => return false,
        };
        for x in 0..src.size {
            let fx = f[x];
            for y in 0..src.size {
                if f[table[x][y]] != dt[fx][f[y]] {
                    return false;
                }
            }
        }
    }
    for (sym, table) in &src.unary {
        let dt = match dst.unary.get(sym) {
            Some(t) => t,
            None => return false,
        };
        for x in 0..src.size {
            if f[table[x]] != dt[f[x]] {
                return false;
            }
        }
    }
    true
}

/// Report-producing companion of [`morphism_ok`], with witnesses.
pub fn check_morphism(
    f: &[usize],
    src: &OmegaGroup,
    dst: &OmegaGroup,
    caps: &Caps,
) -> Result<ValidationReport> {
    assert_same_signature(src, dst)?;
    let s = src.op_tables(caps)?;
    let d = dst.op_tables(caps)?;
    let mut report = ValidationReport::new(format!("map {} -> {}", src.name, dst.name));
    if f.len() != s.size {
        return Err(Error::InvalidInput(format!(
            "map table has {} entries, source has {} elements",
            f.len(),
            s.size
        )));
    }
    if let Some(&bad) = f.iter().find(|&&i| i >= d.size) {
        return Err(Error::InvalidInput(format!(
            "map value {} out of range 0..{}",
            bad, d.size
        )));
    }
    let se = |i: usize| src.element(i);
    let de = |i: usize| dst.element(i);
    report.law("preserves-add");
    for x in 0..s.size {
        for y in 0..s.size {
            report.checks += 1;
            let l = f[s.add[x][y]];
            let r = d.add[f[x]][f[y]];
            if l != r {
                push_violation(
                    &mut report,
                    witness(
                        "preserves-add",
                        &[(&"x", &se(x)), (&"y", &se(y))],
                        &de(l),
                        &de(r),
                    ),
                );
            }
        }
    }
    for (sym, table) in &s.star {
        let law = format!("preserves-star[{}]", sym);
        report.law(law.clone());
        let dt = &d.star[sym];
        for x in 0..s.size {
            for y in 0..s.size {
                report.checks += 1;
                let l = f[table[x][y]];
                let r = dt[f[x]][f[y]];
                if l != r {
                    push_violation(
                        &mut report,
                        witness(&law, &[(&"x", &se(x)), (&"y", &se(y))], &de(l), &de(r)),
                    );
                }
            }
        }
    }
    for (sym, table) in &s.unary {
        let law = format!("preserves-unary[{}]", sym);
        report.law(law.clone());
        let dt = &d.unary[sym];
        for x in 0..s.size {
            report.checks += 1;
            let l = f[table[x]];
            let r = dt[f[x]];
            if l != r {
                push_violation(
                    &mut report,
                    witness(&law, &[(&"x", &se(x))], &de(l), &de(r)),
                );
            }
        }
    }
    report.note("zero and negation preservation follow from additivity".to_string());
    Ok(report)
}

/// A small additive generating sequence: greedily extends by the least
/// element outside the current additive closure.
pub fn additive_generators(tb: &TableBackend) -> Vec<usize> {
    let n = tb.size;
    let mut in_span = vec![false; n];
    in_span[tb.zero] = true;
    let mut span_size = 1usize;
    let mut gens = Vec::new();
    while span_size < n {
        let next = (0..n).find(|&i| !in_span[i]).unwrap();
        gens.push(next);
        // close under + starting from the current span plus the new generator
        let mut frontier = vec![next];
        in_span[next] = true;
        span_size += 1;
        while let Some(x) = frontier.pop() {
            for y in 0..n {
                if !in_span[y] {
                    continue;
                }
                for z in [tb.add[x][y], tb.add[y][x]] {
                    if !in_span[z] {
                        in_span[z] = true;
                        span_size += 1;
                        frontier.push(z);
                    }
                }
            }
            // adding x to itself repeatedly also stays inside
            let mut acc = tb.add[x][x];
            while !in_span[acc] {
                in_span[acc] = true;
                span_size += 1;
                frontier.push(acc);
                acc = tb.add[acc][x];
            }
        }
    }
    gens
}

/// Extends images of the additive generators to a full map by propagating
/// `f(x+y) = f(x)+f(y)`; returns None on contradiction or if the generators
/// do not reach the whole carrier.
fn propagate_additive(
    src: &TableBackend,
    dst: &TableBackend,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let n = src.size;
    let mut f: Vec<Option<usize>> = vec![None; n];
    f[src.zero] = Some(dst.zero);
    for (&g, &im) in gens.iter().zip(images.iter()) {
        match f[g] {
            Some(prev) if prev != im => return None,
            _ => f[g] = Some(im),
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            let fx = match f[x] {
                Some(v) => v,
                None => continue,
            };
            for y in 0..n {
                let fy = match f[y] {
                    Some(v) => v,
                    None => continue,
                };
                let z = src.add[x][y];
                let fz = dst.add[fx][fy];
                match f[z] {
                    Some(prev) => {
                        if prev != fz {
                            return None;
                        }
                    }
                    None => {
                        f[z] = Some(fz);
                        changed = true;
                    }
                }
            }
        }
    }
    f.into_iter().collect()
}

/// Every morphism `src -> dst`, as value tables sorted lexicographically.
///
/// The search assigns images to a small additive generating sequence and
/// propagates additivity, so the cost is `|dst|^k` propagation passes for `k`
/// generators rather than `|dst|^|src|`; candidates are then filtered by the
/// full predicate (stars and unaries included).
pub fn enumerate_morphisms(
    src: &OmegaGroup,
    dst: &OmegaGroup,
    caps: &Caps,
) -> Result<Vec<ElementMap>> {
    assert_same_signature(src, dst)?;
    let s = src.op_tables(caps)?;
    let d = dst.op_tables(caps)?;
    let gens = additive_generators(&s);
    let k = gens.len() as u32;
    let space = pow_checked(d.size as u64, k, "morphism search")?;
    if space > caps.brute_cap {
        return Err(Error::CapExceeded(format!(
            "morphism search space {}^{} = {} exceeds cap {}",
            d.size, k, space, caps.brute_cap
        )));
    }
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    loop {
        if let Some(f) = propagate_additive(&s, &d, &gens, &images) {
            if morphism_ok(&f, &s, &d) {
                out.push(f);
            }
        }
        let mut pos = gens.len();
        loop {
            if pos == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            pos -= 1;
            images[pos] += 1;
            if images[pos] < d.size {
                break;
            }
            images[pos] = 0;
        }
    }
}
