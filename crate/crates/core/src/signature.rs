use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Families of operation signatures with their usual equational laws.
///
/// The additive group structure (binary `+`, unary `-`, constant `0`) is
/// assumed for every kind and is *not* listed among the identities here; the
/// carrier validator checks it directly.  `Generic` carries whatever the user
/// declares and nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Group,
    Assoc,
    Lie,
    Leibniz,
    DiAs,
    Generic,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::Group => "group",
            AlgebraKind::Assoc => "assoc",
            AlgebraKind::Lie => "lie",
            AlgebraKind::Leibniz => "leibniz",
            AlgebraKind::DiAs => "dias",
            AlgebraKind::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// Expression tree over the operations of a signature.
///
/// Variables are de Bruijn-style indices into an assignment slice.  Star
/// symbols may appear with a `°` suffix when *evaluated* (meaning "apply with
/// the arguments swapped"), but terms stored in identities always use the
/// base symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Term {
    Var { i: usize },
    Zero,
    Add { a: Box<Term>, b: Box<Term> },
    Neg { a: Box<Term> },
    Star { sym: String, a: Box<Term>, b: Box<Term> },
    Unary { sym: String, a: Box<Term> },
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var { i }
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add {
            a: Box::new(a),
            b: Box::new(b),
        }
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg { a: Box::new(a) }
    }

    pub fn star(sym: impl Into<String>, a: Term, b: Term) -> Term {
        Term::Star {
            sym: sym.into(),
            a: Box::new(a),
            b: Box::new(b),
        }
    }

    pub fn unary(sym: impl Into<String>, a: Term) -> Term {
        Term::Unary {
            sym: sym.into(),
            a: Box::new(a),
        }
    }

    fn visit_symbols(&self, f: &mut impl FnMut(&str, usize)) {
        match self {
            Term::Var { .. } | Term::Zero => {}
            Term::Add { a, b } => {
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
            Term::Neg { a } => a.visit_symbols(f),
            Term::Star { sym, a, b } => {
                f(sym, 2);
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
            Term::Unary { sym, a } => {
                f(sym, 1);
                a.visit_symbols(f);
            }
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var { i } => Some(*i),
            Term::Zero => None,
            Term::Add { a, b } | Term::Star { a, b, .. } => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
            Term::Neg { a } | Term::Unary { a, .. } => a.max_var(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { i } => write!(f, "x{}", i),
            Term::Zero => f.write_str("0"),
            Term::Add { a, b } => write!(f, "({} + {})", a, b),
            Term::Neg { a } => write!(f, "(-{})", a),
            Term::Star { sym, a, b } => write!(f, "({} {} {})", a, sym, b),
            Term::Unary { sym, a } => write!(f, "{}({})", sym, a),
        }
    }
}

/// A universally quantified equation `lhs = rhs` over `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub vars: usize,
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(name: impl Into<String>, vars: usize, lhs: Term, rhs: Term) -> Identity {
        Identity {
            name: name.into(),
            vars,
            lhs,
            rhs,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)
    }
}

/// Operation symbols plus the equations they must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub kind: AlgebraKind,
    pub stars: Vec<String>,
    pub unary: Vec<String>,
    pub identities: Vec<Identity>,
}

/// Name of the swapped-argument companion of a star symbol: evaluating
/// `twin("mul")` applies `mul` with its two arguments exchanged.
pub fn twin(sym: &str) -> String {
    format!("{}\u{00b0}", sym)
}

/// Splits a possibly-twinned symbol into its base name and whether the
/// arguments should be swapped.
pub fn untwin(sym: &str) -> (&str, bool) {
    match sym.strip_suffix('\u{00b0}') {
        Some(base) => (base, true),
        None => (sym, false),
    }
}

fn add_comm() -> Identity {
    Identity::new(
        "add-commutativity",
        2,
        Term::add(Term::var(0), Term::var(1)),
        Term::add(Term::var(1), Term::var(0)),
    )
}

impl Signature {
    /// The standard signature for `kind`.  Panics on `Generic`, which has no
    /// canonical operation set; build those with [`Signature::generic`].
    pub fn preset(kind: AlgebraKind) -> Signature {
        let v = Term::var;
        match kind {
            AlgebraKind::Group => Signature {
                kind,
                stars: vec![],
                unary: vec![],
                identities: vec![],
            },
            AlgebraKind::Assoc => {
                let m = |a, b| Term::star("mul", a, b);
                Signature {
                    kind,
                    stars: vec!["mul".into()],
                    unary: vec![],
                    identities: vec![
                        add_comm(),
                        Identity::new(
                            "mul-associativity",
                            3,
                            m(m(v(0), v(1)), v(2)),
                            m(v(0), m(v(1), v(2))),
                        ),
                    ],
                }
            }
            AlgebraKind::Lie => {
                let br = |a, b| Term::star("bracket", a, b);
                Signature {
                    kind,
                    stars: vec!["bracket".into()],
                    unary: vec![],
                    identities: vec![
                        add_comm(),
                        Identity::new(
                            "antisymmetry",
                            2,
                            Term::add(br(v(0), v(1)), br(v(1), v(0))),
                            Term::Zero,
                        ),
                        Identity::new(
                            "jacobi",
                            3,
                            Term::add(
                                Term::add(br(br(v(0), v(1)), v(2)), br(br(v(1), v(2)), v(0))),
                                br(br(v(2), v(0)), v(1)),
                            ),
                            Term::Zero,
                        ),
                    ],
                }
            }
            AlgebraKind::Leibniz => {
                let br = |a, b| Term::star("bracket", a, b);
                Signature {
                    kind,
                    stars: vec!["bracket".into()],
                    unary: vec![],
                    identities: vec![
                        add_comm(),
                        Identity::new(
                            "leibniz",
                            3,
                            br(v(0), br(v(1), v(2))),
                            Term::add(
                                br(br(v(0), v(1)), v(2)),
                                Term::neg(br(br(v(0), v(2)), v(1))),
                            ),
                        ),
                    ],
                }
            }
            AlgebraKind::DiAs => {
                let l = |a, b| Term::star("dashv", a, b);
                let r = |a, b| Term::star("vdash", a, b);
                Signature {
                    kind,
                    stars: vec!["dashv".into(), "vdash".into()],
                    unary: vec![],
                    identities: vec![
                        add_comm(),
                        Identity::new(
                            "dashv-associativity",
                            3,
                            l(l(v(0), v(1)), v(2)),
                            l(v(0), l(v(1), v(2))),
                        ),
                        Identity::new(
                            "dashv-absorbs-vdash",
                            3,
                            l(v(0), l(v(1), v(2))),
                            l(v(0), r(v(1), v(2))),
                        ),
                        Identity::new(
                            "middle-exchange",
                            3,
                            l(r(v(0), v(1)), v(2)),
                            r(v(0), l(v(1), v(2))),
                        ),
                        Identity::new(
                            "vdash-absorbs-dashv",
                            3,
                            r(l(v(0), v(1)), v(2)),
                            r(r(v(0), v(1)), v(2)),
                        ),
                        Identity::new(
                            "vdash-associativity",
                            3,
                            r(v(0), r(v(1), v(2))),
                            r(r(v(0), v(1)), v(2)),
                        ),
                    ],
                }
            }
            AlgebraKind::Generic => {
                panic!("generic signatures have no preset; use Signature::generic")
            }
        }
    }

    pub fn generic(
        stars: Vec<String>,
        unary: Vec<String>,
        identities: Vec<Identity>,
    ) -> Signature {
        Signature {
            kind: AlgebraKind::Generic,
            stars,
            unary,
            identities,
        }
    }

    pub fn has_star(&self, sym: &str) -> bool {
        self.stars.iter().any(|s| s == sym)
    }

    pub fn has_unary(&self, sym: &str) -> bool {
        self.unary.iter().any(|s| s == sym)
    }

    /// Structural sanity: unique symbol names, no reserved `°` suffix, and
    /// identities that mention only declared symbols with correct arities and
    /// in-range variables.
    pub fn check(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for sym in self.stars.iter().chain(self.unary.iter()) {
            if sym.is_empty() {
                return Err(Error::SignatureMismatch("empty operation symbol".into()));
            }
            if sym.ends_with('\u{00b0}') {
                return Err(Error::SignatureMismatch(format!(
                    "symbol `{}` uses the reserved ° suffix",
                    sym
                )));
            }
            if !seen.insert(sym.clone()) {
                return Err(Error::SignatureMismatch(format!(
                    "duplicate operation symbol `{}`",
                    sym
                )));
            }
        }
        for id in &self.identities {
            for term in [&id.lhs, &id.rhs] {
                if let Some(max) = term.max_var() {
                    if max >= id.vars {
                        return Err(Error::SignatureMismatch(format!(
                            "identity `{}` uses x{} but declares {} variables",
                            id.name, max, id.vars
                        )));
                    }
                }
                let mut err = None;
                term.visit_symbols(&mut |sym, arity| {
                    if err.is_some() {
                        return;
                    }
                    let (base, _) = untwin(sym);
                    let ok = match arity {
                        2 => self.has_star(base),
                        1 => self.has_unary(base),
                        _ => false,
                    };
                    if !ok {
                        err = Some(Error::UnknownSymbol(format!(
                            "{} (in identity `{}`)",
                            sym, id.name
                        )));
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
        Ok(())
    }
}

/// True when every summand on both sides of the identity uses each quantified
/// variable exactly once inside a pure star/unary monomial.  Such identities
/// hold on a linear backend as soon as they hold on all tuples of basis
/// vectors, because both sides are multilinear maps.
pub fn is_multilinear(identity: &Identity) -> bool {
    side_multilinear(&identity.lhs, identity.vars)
        && side_multilinear(&identity.rhs, identity.vars)
}

fn side_multilinear(term: &Term, vars: usize) -> bool {
    let mut monomials = Vec::new();
    if !collect_monomials(term, &mut monomials) {
        return false;
    }
    monomials.into_iter().all(|m| {
        let mut counts = vec![0usize; vars];
        monomial_counts(m, &mut counts) && counts.iter().all(|&c| c == 1)
    })
}

fn collect_monomials<'a>(term: &'a Term, out: &mut Vec<&'a Term>) -> bool {
    match term {
        Term::Add { a, b } => collect_monomials(a, out) && collect_monomials(b, out),
        Term::Neg { a } => collect_monomials(a, out),
        Term::Zero => true,
        other => {
            out.push(other);
            true
        }
    }
}

fn monomial_counts(term: &Term, counts: &mut [usize]) -> bool {
    match term {
        Term::Var { i } => {
            if *i < counts.len() {
                counts[*i] += 1;
                true
            } else {
                false
            }
        }
        Term::Star { a, b, .. } => monomial_counts(a, counts) && monomial_counts(b, counts),
        Term::Unary { a, .. } => monomial_counts(a, counts),
        _ => false,
    }
}
