//! Prop terms: the free symmetric monoidal syntax over a signature, its
//! s-expression form, and evaluation into semantic models.
//!
//! Sequential composition is diagrammatic: `Seq(f, g)` runs `f` first.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("arity mismatch in {location}: {detail}")]
    ArityMismatch { location: String, detail: String },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid generator argument in {generator}: {msg}")]
    BadArgument { generator: String, msg: String },
}

/// A generator occurrence: a plain name, or a parameterized family such as
/// `(label resistor:2)` or `(scalar 3/2)` carrying its literal argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub name: String,
    pub arg: Option<String>,
}

impl Generator {
    pub fn named(name: impl Into<String>) -> Self {
        Generator {
            name: name.into(),
            arg: None,
        }
    }

    pub fn family(name: impl Into<String>, arg: impl Into<String>) -> Self {
        Generator {
            name: name.into(),
            arg: Some(arg.into()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.arg {
            None => write!(f, "(gen {})", self.name),
            Some(a) => write!(f, "({} {})", self.name, a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropTerm {
    Gen(Generator),
    Id(usize),
    Sym(usize, usize),
    Seq(Box<PropTerm>, Box<PropTerm>),
    Par(Box<PropTerm>, Box<PropTerm>),
}

pub fn gen(name: &str) -> PropTerm {
    PropTerm::Gen(Generator::named(name))
}

pub fn id(n: usize) -> PropTerm {
    PropTerm::Id(n)
}

pub fn sym(m: usize, n: usize) -> PropTerm {
    PropTerm::Sym(m, n)
}

/// Left-nested sequential composite; an empty list is not allowed.
pub fn seq<I: IntoIterator<Item = PropTerm>>(terms: I) -> PropTerm {
    terms
        .into_iter()
        .reduce(|a, b| PropTerm::Seq(Box::new(a), Box::new(b)))
        .expect("seq of at least one term")
}

/// Left-nested tensor; the empty tensor is `Id(0)`.
pub fn par<I: IntoIterator<Item = PropTerm>>(terms: I) -> PropTerm {
    terms
        .into_iter()
        .reduce(|a, b| PropTerm::Par(Box::new(a), Box::new(b)))
        .unwrap_or(PropTerm::Id(0))
}

impl PropTerm {
    pub fn then(self, next: PropTerm) -> PropTerm {
        PropTerm::Seq(Box::new(self), Box::new(next))
    }

    pub fn beside(self, other: PropTerm) -> PropTerm {
        PropTerm::Par(Box::new(self), Box::new(other))
    }

    pub fn depth(&self) -> usize {
        match self {
            PropTerm::Gen(_) | PropTerm::Id(_) | PropTerm::Sym(_, _) => 0,
            PropTerm::Seq(a, b) | PropTerm::Par(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Applies `f` to every generator, keeping the structure.
    pub fn map_generators<E>(
        &self,
        f: &mut impl FnMut(&Generator) -> Result<PropTerm, E>,
    ) -> Result<PropTerm, E> {
        Ok(match self {
            PropTerm::Gen(g) => f(g)?,
            PropTerm::Id(n) => PropTerm::Id(*n),
            PropTerm::Sym(m, n) => PropTerm::Sym(*m, *n),
            PropTerm::Seq(a, b) => a.map_generators(f)?.then(b.map_generators(f)?),
            PropTerm::Par(a, b) => a.map_generators(f)?.beside(b.map_generators(f)?),
        })
    }

    pub fn arity(&self, sig: &Signature) -> Result<(usize, usize), TermError> {
        match self {
            PropTerm::Gen(g) => sig.arity(g),
            PropTerm::Id(n) => Ok((*n, *n)),
            PropTerm::Sym(m, n) => Ok((m + n, n + m)),
            PropTerm::Seq(a, b) => {
                let (ad, ac) = a.arity(sig)?;
                let (bd, bc) = b.arity(sig)?;
                if ac != bd {
                    return Err(TermError::ArityMismatch {
                        location: self.to_string(),
                        detail: format!("first part has codomain {ac}, second has domain {bd}"),
                    });
                }
                Ok((ad, bc))
            }
            PropTerm::Par(a, b) => {
                let (ad, ac) = a.arity(sig)?;
                let (bd, bc) = b.arity(sig)?;
                Ok((ad + bd, ac + bc))
            }
        }
    }
}

impl fmt::Display for PropTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropTerm::Gen(g) => write!(f, "{g}"),
            PropTerm::Id(n) => write!(f, "(id {n})"),
            PropTerm::Sym(m, n) => write!(f, "(sym {m} {n})"),
            PropTerm::Seq(..) | PropTerm::Par(..) => {
                // Left-nested chains print flat; they parse back to the same tree.
                let seq = matches!(self, PropTerm::Seq(..));
                let mut parts = Vec::new();
                let mut cur = self;
                loop {
                    match (cur, seq) {
                        (PropTerm::Seq(a, b), true) | (PropTerm::Par(a, b), false) => {
                            parts.push(b.as_ref());
                            cur = a;
                        }
                        _ => {
                            parts.push(cur);
                            break;
                        }
                    }
                }
                write!(f, "({}", if seq { "seq" } else { "par" })?;
                for p in parts.iter().rev() {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Generator arities, with optional parameterized families.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    gens: BTreeMap<String, (usize, usize)>,
    families: BTreeMap<String, (usize, usize)>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, dom: usize, cod: usize) -> Self {
        self.gens.insert(name.to_string(), (dom, cod));
        self
    }

    pub fn with_family(mut self, name: &str, dom: usize, cod: usize) -> Self {
        self.families.insert(name.to_string(), (dom, cod));
        self
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, (usize, usize))> {
        self.gens.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn families(&self) -> impl Iterator<Item = (&str, (usize, usize))> {
        self.families.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn arity(&self, g: &Generator) -> Result<(usize, usize), TermError> {
        let table = if g.arg.is_some() {
            &self.families
        } else {
            &self.gens
        };
        table
            .get(&g.name)
            .copied()
            .ok_or_else(|| TermError::UnknownGenerator(g.to_string()))
    }
}

/// A strict symmetric monoidal semantics for terms over a signature.
///
/// Object `n` is carried at `width() * n` underlying wires.
pub trait PropModel {
    type Value: Clone;

    fn signature(&self) -> &Signature;
    fn generator(&self, g: &Generator) -> Result<Self::Value, TermError>;
    fn identity(&self, n: usize) -> Self::Value;
    fn symmetry(&self, m: usize, n: usize) -> Self::Value;
    /// `f` followed by `g`.
    fn compose(&self, f: &Self::Value, g: &Self::Value) -> Self::Value;
    fn tensor(&self, f: &Self::Value, g: &Self::Value) -> Self::Value;
    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool;

    fn width(&self) -> usize {
        1
    }

    /// A human-readable witness that `a` and `b` differ, when the model has one.
    fn distinguish(&self, _a: &Self::Value, _b: &Self::Value) -> Option<String> {
        None
    }
}

/// Type-checks `t` against the model's signature and evaluates it.
pub fn eval<M: PropModel + ?Sized>(t: &PropTerm, model: &M) -> Result<M::Value, TermError> {
    t.arity(model.signature())?;
    eval_checked(t, model)
}

fn eval_checked<M: PropModel + ?Sized>(t: &PropTerm, model: &M) -> Result<M::Value, TermError> {
    Ok(match t {
        PropTerm::Gen(g) => model.generator(g)?,
        PropTerm::Id(n) => model.identity(*n),
        PropTerm::Sym(m, n) => model.symmetry(*m, *n),
        PropTerm::Seq(a, b) => model.compose(&eval_checked(a, model)?, &eval_checked(b, model)?),
        PropTerm::Par(a, b) => model.tensor(&eval_checked(a, model)?, &eval_checked(b, model)?),
    })
}

/// A term permuting `perm.len()` wires: wire `i` ends at position `perm[i]`.
/// Built by odd-even transposition sort, so it has at most `n` layers, each
/// a tensor of disjoint adjacent swaps.
pub fn permutation_term(perm: &[usize]) -> PropTerm {
    let n = perm.len();
    let mut pos: Vec<usize> = perm.to_vec();
    let mut steps = Vec::new();
    let mut quiet_rounds = 0;
    let mut parity = 0;
    // Wire currently at slot k has target pos[k]; sort slots by target.
    while quiet_rounds < 2 {
        let mut layer = Vec::new();
        let mut k = 0;
        if parity == 1 {
            layer.push(id(1.min(n)));
            k = 1;
        }
        let mut swapped = false;
        while k + 1 < n {
            if pos[k] > pos[k + 1] {
                pos.swap(k, k + 1);
                layer.push(sym(1, 1));
                swapped = true;
            } else {
                layer.push(id(2));
            }
            k += 2;
        }
        if k < n {
            layer.push(id(1));
        }
        if swapped {
            steps.push(par(layer));
            quiet_rounds = 0;
        } else {
            quiet_rounds += 1;
        }
        parity ^= 1;
    }
    if steps.is_empty() {
        id(n)
    } else {
        seq(steps)
    }
}

// ---------------------------------------------------------------------------
// s-expression syntax

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize, usize),
    List(Vec<Sexp>, usize, usize),
    /// Raw text of a `(label ...)` or `(scalar ...)` argument.
    Raw(String),
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Reader {
    fn new(src: &str) -> Self {
        Reader {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> TermError {
        TermError::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.pos)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn read(&mut self) -> Result<Sexp, TermError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(')') => Err(self.err("unexpected ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(self.err("unclosed '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, line, col));
                        }
                        _ => {
                            let is_literal_head = items.len() == 1
                                && matches!(&items[0], Sexp::Atom(h, ..) if h == "label" || h == "scalar");
                            if is_literal_head {
                                items.push(self.read_raw()?);
                            } else {
                                items.push(self.read()?);
                            }
                        }
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, line, col))
            }
        }
    }

    // Everything up to the ')' that closes the enclosing list, parentheses balanced.
    fn read_raw(&mut self) -> Result<Sexp, TermError> {
        let mut depth = 0usize;
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unclosed literal")),
                Some(')') if depth == 0 => break,
                Some(c) => {
                    if c == '(' {
                        depth += 1;
                    } else if c == ')' {
                        depth -= 1;
                    }
                    s.push(c);
                    self.bump();
                }
            }
        }
        Ok(Sexp::Raw(s.trim().to_string()))
    }
}

fn parse_count(s: &Sexp) -> Result<usize, TermError> {
    match s {
        Sexp::Atom(a, line, col) => a.parse().map_err(|_| TermError::Parse {
            line: *line,
            col: *col,
            msg: format!("expected a count, found '{a}'"),
        }),
        Sexp::List(_, line, col) => Err(TermError::Parse {
            line: *line,
            col: *col,
            msg: "expected a count".into(),
        }),
        Sexp::Raw(_) => unreachable!("raw literals only follow label/scalar"),
    }
}

fn to_term(s: &Sexp) -> Result<PropTerm, TermError> {
    let (items, line, col) = match s {
        Sexp::List(items, l, c) => (items, *l, *c),
        Sexp::Atom(a, l, c) => {
            return Err(TermError::Parse {
                line: *l,
                col: *c,
                msg: format!("expected a term, found atom '{a}'"),
            })
        }
        Sexp::Raw(_) => unreachable!("raw literals only follow label/scalar"),
    };
    let bad = |msg: String| TermError::Parse { line, col, msg };
    let head = match items.first() {
        Some(Sexp::Atom(h, ..)) => h.as_str(),
        _ => return Err(bad("expected a form head".into())),
    };
    let args = &items[1..];
    match head {
        "gen" => match args {
            [Sexp::Atom(name, ..)] => Ok(gen(name)),
            _ => Err(bad("(gen NAME) takes one name".into())),
        },
        "id" => match args {
            [n] => Ok(id(parse_count(n)?)),
            _ => Err(bad("(id N) takes one count".into())),
        },
        "sym" => match args {
            [m, n] => Ok(sym(parse_count(m)?, parse_count(n)?)),
            _ => Err(bad("(sym M N) takes two counts".into())),
        },
        "label" | "scalar" => match args {
            [Sexp::Raw(lit)] if !lit.is_empty() => {
                Ok(PropTerm::Gen(Generator::family(head, lit.clone())))
            }
            _ => Err(bad(format!("({head} LIT) takes one literal"))),
        },
        "seq" | "par" => {
            if args.is_empty() {
                return Err(bad(format!("({head} ...) needs at least one term")));
            }
            let ts = args.iter().map(to_term).collect::<Result<Vec<_>, _>>()?;
            Ok(if head == "seq" { seq(ts) } else { par(ts) })
        }
        other => Err(bad(format!("unknown form '{other}'"))),
    }
}

/// Parses exactly one term.
pub fn parse_term(src: &str) -> Result<PropTerm, TermError> {
    let mut terms = parse_terms(src)?;
    match terms.len() {
        1 => Ok(terms.remove(0)),
        0 => Err(TermError::Parse {
            line: 1,
            col: 1,
            msg: "no term found".into(),
        }),
        n => Err(TermError::Parse {
            line: 1,
            col: 1,
            msg: format!("expected one term, found {n}"),
        }),
    }
}

/// Parses a sequence of top-level terms; `;` starts a line comment.
pub fn parse_terms(src: &str) -> Result<Vec<PropTerm>, TermError> {
    let mut r = Reader::new(src);
    let mut out = Vec::new();
    while !r.at_end() {
        out.push(to_term(&r.read()?)?);
    }
    Ok(out)
}

/// Parses and type-checks against a signature.
pub fn parse_term_in(src: &str, sig: &Signature) -> Result<PropTerm, TermError> {
    let t = parse_term(src)?;
    t.arity(sig)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frob_sig() -> Signature {
        Signature::new()
            .with("m", 2, 1)
            .with("i", 0, 1)
            .with("d", 1, 2)
            .with("e", 1, 0)
    }

    #[test]
    fn arity_examples() {
        let sig = frob_sig();
        assert_eq!(seq([gen("m"), gen("d")]).arity(&sig), Ok((2, 2)));
        assert_eq!(par([id(1), sym(1, 1)]).arity(&sig), Ok((3, 3)));
        assert!(matches!(
            seq([gen("m"), gen("m")]).arity(&sig),
            Err(TermError::ArityMismatch { .. })
        ));
        assert!(matches!(
            gen("bogus").arity(&sig),
            Err(TermError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn parse_and_print() {
        let t = parse_term("(seq (gen m) (gen d))").unwrap();
        assert_eq!(t, seq([gen("m"), gen("d")]));
        let t = parse_term("(par (id 1) (sym 1 1))").unwrap();
        assert_eq!(t.to_string(), "(par (id 1) (sym 1 1))");
        let t = parse_term("; comment\n(seq (label resistor:(3*s+1)/2) (scalar -1/2) (gen d))").unwrap();
        match &t {
            PropTerm::Seq(a, _) => match a.as_ref() {
                PropTerm::Seq(l, _) => assert_eq!(
                    **l,
                    PropTerm::Gen(Generator::family("label", "resistor:(3*s+1)/2"))
                ),
                _ => panic!(),
            },
            _ => panic!(),
        }
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn parse_errors_have_positions() {
        match parse_term("(seq (gen m)\n  (idd 2))") {
            Err(TermError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_term("(seq (gen m)"), Err(TermError::Parse { .. })));
        assert!(matches!(parse_term("(id x)"), Err(TermError::Parse { .. })));
        assert!(matches!(
            parse_term_in("(gen bogus)", &frob_sig()),
            Err(TermError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn nested_right_seq_round_trips() {
        let t = gen("a").then(gen("b").then(gen("c")));
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        let t = par([gen("a"), gen("b"), gen("c")]);
        assert_eq!(t.to_string(), "(par (gen a) (gen b) (gen c))");
    }

    #[test]
    fn permutation_term_has_right_arity() {
        let t = permutation_term(&[2, 0, 1]);
        assert_eq!(t.arity(&Signature::new()), Ok((3, 3)));
        assert_eq!(permutation_term(&[0, 1]), id(2));
    }
}
