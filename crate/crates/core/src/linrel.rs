//! Linear relations as canonical subspaces, the Lagrangian predicate, the
//! functor K on corelations, and black-boxing of linear circuits.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::circuit::{circuit_signature, parse_label_generator, EdgeLabel, LCircuit};
use crate::exactla::{dot, LinAlgError, Mat, Subspace};
use crate::expr::{parse_expr, Expr, ExprError};
use crate::scalar::{Field, RatFunc, ScalarError};
use crate::setprops::Corelation;
use crate::term::{Generator, PropModel, Signature, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("interface mismatch: {left} outputs against {right} inputs")]
    InterfaceMismatch { left: usize, right: usize },
    #[error("relation on {0} coordinates cannot be split into ports of width 2")]
    OddDimension(usize),
    #[error("unsupported label: {0}")]
    UnsupportedLabel(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("relation text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A linear relation `k^dom ⇸ k^cod`: a subspace of `k^(dom+cod)` with the
/// domain coordinates first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinRel<F> {
    dom: usize,
    cod: usize,
    space: Subspace<F>,
}

impl<F: Field> LinRel<F> {
    pub fn new(dom: usize, cod: usize, space: Subspace<F>) -> Result<Self, RelError> {
        if space.ambient() != dom + cod {
            return Err(LinAlgError::DimensionMismatch {
                expected: dom + cod,
                found: space.ambient(),
            }
            .into());
        }
        Ok(LinRel { dom, cod, space })
    }

    pub fn span(dom: usize, cod: usize, vectors: Vec<Vec<F>>) -> Result<Self, RelError> {
        LinRel::new(dom, cod, Subspace::span(dom + cod, vectors)?)
    }

    /// The solution set of `rows · (u, w) = 0`.
    pub fn from_constraints(dom: usize, cod: usize, rows: Vec<Vec<F>>) -> Result<Self, RelError> {
        let space = Mat::from_rows(dom + cod, rows)?.kernel();
        LinRel::new(dom, cod, space)
    }

    /// `{(x, A x)}` for an `cod × dom` matrix.
    pub fn graph(a: &Mat<F>) -> Self {
        let (cod, dom) = (a.rows(), a.cols());
        let vs = (0..dom)
            .map(|j| {
                let mut v = vec![F::zero(); dom + cod];
                v[j] = F::one();
                for i in 0..cod {
                    v[dom + i] = a.get(i, j).clone();
                }
                v
            })
            .collect();
        LinRel::span(dom, cod, vs).expect("shapes agree")
    }

    pub fn identity(n: usize) -> Self {
        LinRel::graph(&Mat::identity(n))
    }

    /// Swaps a block of `a` coordinates past a block of `b`.
    pub fn braid(a: usize, b: usize) -> Self {
        let mut m = Mat::zeros(a + b, a + b);
        for i in 0..a {
            m.set(b + i, i, F::one());
        }
        for j in 0..b {
            m.set(j, a + j, F::one());
        }
        LinRel::graph(&m)
    }

    pub fn full(dom: usize, cod: usize) -> Self {
        LinRel::new(dom, cod, Subspace::full(dom + cod)).unwrap()
    }

    pub fn zero(dom: usize, cod: usize) -> Self {
        LinRel::new(dom, cod, Subspace::zero(dom + cod)).unwrap()
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.space.contains(v).unwrap_or(false)
    }

    /// Canonical constraint rows: the reduced basis of the annihilator.
    pub fn constraints(&self) -> Vec<Vec<F>> {
        self.space.annihilator().basis().to_vec()
    }

    /// `{(u, w) : ∃v. (u, v) ∈ self, (v, w) ∈ g}`.
    pub fn compose(&self, g: &LinRel<F>) -> Result<LinRel<F>, RelError> {
        if self.cod != g.dom {
            return Err(RelError::InterfaceMismatch {
                left: self.cod,
                right: g.dom,
            });
        }
        let (p, q, r) = (self.dom, self.cod, g.cod);
        let fb = self.space.basis();
        let gb = g.space.basis();
        let (a, b) = (fb.len(), gb.len());
        // Columns: the v-parts of f's basis, then minus the v-parts of g's.
        let mut m = Mat::zeros(q, a + b);
        for (j, v) in fb.iter().enumerate() {
            for i in 0..q {
                m.set(i, j, v[p + i].clone());
            }
        }
        for (j, v) in gb.iter().enumerate() {
            for i in 0..q {
                m.set(i, a + j, v[i].neg());
            }
        }
        let combos = m.kernel();
        let vs = combos
            .basis()
            .iter()
            .map(|c| {
                let mut out = vec![F::zero(); p + r];
                for (j, v) in fb.iter().enumerate() {
                    if !c[j].is_zero() {
                        for i in 0..p {
                            out[i] = out[i].add(&c[j].mul(&v[i]));
                        }
                    }
                }
                for (j, v) in gb.iter().enumerate() {
                    if !c[a + j].is_zero() {
                        for i in 0..r {
                            out[p + i] = out[p + i].add(&c[a + j].mul(&v[q + i]));
                        }
                    }
                }
                out
            })
            .collect();
        LinRel::span(p, r, vs)
    }

    /// Direct sum, coordinates ordered `(dom_f, dom_g, cod_f, cod_g)`.
    pub fn tensor(&self, g: &LinRel<F>) -> LinRel<F> {
        let (p1, q1, p2, q2) = (self.dom, self.cod, g.dom, g.cod);
        let n = p1 + p2 + q1 + q2;
        let mut vs = Vec::new();
        for v in self.space.basis() {
            let mut w = vec![F::zero(); n];
            w[..p1].clone_from_slice(&v[..p1]);
            w[p1 + p2..p1 + p2 + q1].clone_from_slice(&v[p1..]);
            vs.push(w);
        }
        for v in g.space.basis() {
            let mut w = vec![F::zero(); n];
            w[p1..p1 + p2].clone_from_slice(&v[..p2]);
            w[p1 + p2 + q1..].clone_from_slice(&v[p2..]);
            vs.push(w);
        }
        LinRel::span(p1 + p2, q1 + q2, vs).expect("shapes agree")
    }

    pub fn dagger(&self) -> LinRel<F> {
        let (p, q) = (self.dom, self.cod);
        let vs = self
            .space
            .basis()
            .iter()
            .map(|v| v[p..].iter().chain(&v[..p]).cloned().collect())
            .collect();
        LinRel::span(q, p, vs).expect("shapes agree")
    }

    pub fn equals(&self, other: &LinRel<F>) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.space == other.space
    }

    /// A vector in one relation but not the other, tagged with the side it
    /// belongs to (`true` for `self`).
    pub fn witness_difference(&self, other: &LinRel<F>) -> Option<(bool, Vec<F>)> {
        if self.dom != other.dom || self.cod != other.cod {
            return None;
        }
        if let Some(v) = self.space.basis().iter().find(|v| !other.contains(v)) {
            return Some((true, v.clone()));
        }
        other
            .space
            .basis()
            .iter()
            .find(|v| !self.contains(v))
            .map(|v| (false, v.clone()))
    }

    /// Lagrangian for `ω` on each codomain port and `−ω` on each domain port,
    /// with ports of width 2.
    pub fn is_lagrangian(&self) -> Result<bool, RelError> {
        for d in [self.dom, self.cod, self.dom + self.cod] {
            if d % 2 != 0 {
                return Err(RelError::OddDimension(d));
            }
        }
        let half = (self.dom + self.cod) / 2;
        if self.dim() != half {
            return Ok(false);
        }
        let omega = symplectic_form::<F>(self.dom / 2, self.cod / 2);
        let basis = self.space.basis();
        for v in basis {
            let ov = omega.mul_vec(v)?;
            for w in basis {
                if !dot(w, &ov).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Block-diagonal `(−J)^m ⊕ J^n` with `J = [[0,1],[−1,0]]`.
pub fn symplectic_form<F: Field>(m: usize, n: usize) -> Mat<F> {
    let size = 2 * (m + n);
    let mut o = Mat::zeros(size, size);
    for k in 0..m + n {
        let sign = if k < m { F::one().neg() } else { F::one() };
        o.set(2 * k, 2 * k + 1, sign.clone());
        o.set(2 * k + 1, 2 * k, sign.neg());
    }
    o
}

// ---------------------------------------------------------------------------
// circuits

/// The functor K: per block, equal potentials and input current sum equal to
/// output current sum. Ports carry `(φ, I)`.
pub fn k_corel<F: Field>(c: &Corelation) -> LinRel<F> {
    let (m, n) = (c.dom(), c.cod());
    let width = 2 * (m + n);
    let coord = |t: usize| 2 * t;
    let mut rows = Vec::new();
    for block in c.blocks() {
        for pair in block.windows(2) {
            let mut r = vec![F::zero(); width];
            r[coord(pair[0])] = F::one();
            r[coord(pair[1])] = F::one().neg();
            rows.push(r);
        }
        let mut r = vec![F::zero(); width];
        for &t in block {
            r[coord(t) + 1] = if t < m { F::one() } else { F::one().neg() };
        }
        rows.push(r);
    }
    LinRel::from_constraints(2 * m, 2 * n, rows).expect("rows have the ambient width")
}

fn embed<F: Field>(z: &RatFunc, label: &EdgeLabel) -> Result<F, RelError> {
    F::from_ratfunc(z).ok_or_else(|| {
        RelError::UnsupportedLabel(format!("{label} needs the field of rational functions"))
    })
}

/// Constraint rows of a passive label on `(φ₁, I₁, φ₂, I₂)`.
pub fn label_rows<F: Field>(label: &EdgeLabel) -> Result<Vec<Vec<F>>, RelError> {
    let one = F::one();
    let pass = vec![F::zero(), one.clone(), F::zero(), one.neg()];
    let drop = match label {
        EdgeLabel::Capacitor(c) => {
            let sc = embed::<F>(&(RatFunc::s() * RatFunc::from(c.clone())), label)?;
            vec![sc.neg(), one.neg(), sc, F::zero()]
        }
        EdgeLabel::VoltageSource(_) | EdgeLabel::CurrentSource(_) => {
            return Err(RelError::UnsupportedLabel(format!(
                "{label} is a source; use the affine black box"
            )))
        }
        _ => {
            let z = embed::<F>(&label.impedance().expect("passive label"), label)?;
            vec![one.neg(), z.neg(), one, F::zero()]
        }
    };
    Ok(vec![drop, pass])
}

/// `{φ₂ − φ₁ = Z·I₁, I₁ = I₂}`.
pub fn impedance_rel<F: Field>(z: F) -> LinRel<F> {
    let one = F::one();
    let rows = vec![
        vec![one.neg(), z.neg(), one.clone(), F::zero()],
        vec![F::zero(), one.clone(), F::zero(), one.neg()],
    ];
    LinRel::from_constraints(2, 2, rows).unwrap()
}

pub fn label_rel<F: Field>(label: &EdgeLabel) -> Result<LinRel<F>, RelError> {
    Ok(LinRel::from_constraints(2, 2, label_rows(label)?)?)
}

/// Solution space of the network equations, projected onto the boundary
/// `(φ, I)` pairs followed by `extra` trailing parameters. Each label yields
/// rows over `(φ_src, J_in, φ_tgt, J_out, params...)`.
pub(crate) fn network_behavior<F: Field>(
    c: &LCircuit,
    extra: usize,
    rows_for: impl Fn(&EdgeLabel) -> Result<Vec<Vec<F>>, RelError>,
) -> Result<Subspace<F>, RelError> {
    let (m, n) = (c.dom(), c.cod());
    let nodes = c.node_count();
    let edges = c.edges();
    let boundary = 2 * (m + n);
    let node_at = |v: usize| boundary + v;
    let edge_at = |e: usize| boundary + nodes + 2 * e;
    let param_at = |k: usize| boundary + nodes + 2 * edges.len() + k;
    let total = param_at(extra);
    let mut rows = Vec::new();
    let leg = |t: usize, v: usize| {
        let mut r = vec![F::zero(); total];
        r[2 * t] = F::one();
        r[node_at(v)] = F::one().neg();
        r
    };
    for (k, &v) in c.inputs().iter().enumerate() {
        rows.push(leg(k, v));
    }
    for (j, &v) in c.outputs().iter().enumerate() {
        rows.push(leg(m + j, v));
    }
    for (e, edge) in edges.iter().enumerate() {
        let slots = [node_at(edge.src), edge_at(e), node_at(edge.tgt), edge_at(e) + 1];
        for lr in rows_for(&edge.label)? {
            let mut r = vec![F::zero(); total];
            for (slot, x) in slots.iter().zip(&lr) {
                r[*slot] = r[*slot].add(x);
            }
            for (k, x) in lr[4..].iter().enumerate() {
                r[param_at(k)] = x.clone();
            }
            rows.push(r);
        }
    }
    // Current balance: what enters a node leaves it.
    for v in 0..nodes {
        let mut r = vec![F::zero(); total];
        let mut bump = |i: usize, x: F| r[i] = r[i].add(&x);
        for (k, &w) in c.inputs().iter().enumerate() {
            if w == v {
                bump(2 * k + 1, F::one());
            }
        }
        for (j, &w) in c.outputs().iter().enumerate() {
            if w == v {
                bump(2 * (m + j) + 1, F::one().neg());
            }
        }
        for (e, edge) in edges.iter().enumerate() {
            if edge.tgt == v {
                bump(edge_at(e) + 1, F::one());
            }
            if edge.src == v {
                bump(edge_at(e), F::one().neg());
            }
        }
        rows.push(r);
    }
    let solutions = Mat::from_rows(total, rows)?.kernel();
    let keep: Vec<usize> = (0..boundary).chain((0..extra).map(param_at)).collect();
    Ok(solutions.project(&keep))
}

/// Black-boxing by eliminating node potentials and edge currents.
pub fn blackbox<F: Field>(c: &LCircuit) -> Result<LinRel<F>, RelError> {
    let space = network_behavior(c, 0, label_rows::<F>)?;
    LinRel::new(2 * c.dom(), 2 * c.cod(), space)
}

/// Circuit terms evaluated into Lagrangian relations, two coordinates per port.
#[derive(Debug, Clone)]
pub struct LagRelModel<F> {
    sig: Signature,
    _field: std::marker::PhantomData<F>,
}

impl<F> Default for LagRelModel<F> {
    fn default() -> Self {
        LagRelModel {
            sig: circuit_signature(),
            _field: std::marker::PhantomData,
        }
    }
}

impl<F: Field> PropModel for LagRelModel<F> {
    type Value = LinRel<F>;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<LinRel<F>, TermError> {
        let spider = |a, b| Ok(k_corel(&Corelation::from_labels(a, b, &vec![0; a + b])));
        match (g.name.as_str(), &g.arg) {
            ("m", None) => spider(2, 1),
            ("i", None) => spider(0, 1),
            ("d", None) => spider(1, 2),
            ("e", None) => spider(1, 0),
            ("label", Some(_)) => {
                let label = parse_label_generator(g)?;
                label_rel(&label).map_err(|e| TermError::BadArgument {
                    generator: g.to_string(),
                    msg: e.to_string(),
                })
            }
            _ => Err(TermError::UnknownGenerator(g.to_string())),
        }
    }

    fn identity(&self, n: usize) -> LinRel<F> {
        LinRel::identity(2 * n)
    }

    fn symmetry(&self, m: usize, n: usize) -> LinRel<F> {
        LinRel::braid(2 * m, 2 * n)
    }

    fn compose(&self, f: &LinRel<F>, g: &LinRel<F>) -> LinRel<F> {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &LinRel<F>, g: &LinRel<F>) -> LinRel<F> {
        f.tensor(g)
    }

    fn equal(&self, a: &LinRel<F>, b: &LinRel<F>) -> bool {
        a.equals(b)
    }

    fn width(&self) -> usize {
        2
    }

    fn distinguish(&self, a: &LinRel<F>, b: &LinRel<F>) -> Option<String> {
        describe_difference(a, b, VarStyle::Circuit)
    }
}

// ---------------------------------------------------------------------------
// text form

/// How coordinates are named in printed relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStyle {
    /// `x_in_k`, one coordinate per wire.
    Plain,
    /// `phi_in_k, I_in_k` per port.
    Circuit,
    /// `E_in_k, F_in_k` per port.
    Bond,
}

impl VarStyle {
    fn names(self) -> &'static [&'static str] {
        match self {
            VarStyle::Plain => &["x"],
            VarStyle::Circuit => &["phi", "I"],
            VarStyle::Bond => &["E", "F"],
        }
    }

    /// Name of coordinate `i` of a relation with `dom` domain coordinates.
    pub fn var_name(self, dom: usize, i: usize) -> String {
        let names = self.names();
        let (side, local) = if i < dom { ("in", i) } else { ("out", i - dom) };
        let w = names.len();
        format!("{}_{}_{}", names[local % w], side, local / w + 1)
    }

    fn parse_var(name: &str, dom: usize, cod: usize) -> Option<usize> {
        let mut parts = name.rsplitn(3, '_');
        let index: usize = parts.next()?.parse().ok()?;
        let side = parts.next()?;
        let base = parts.next()?;
        let (w, off) = [VarStyle::Plain, VarStyle::Circuit, VarStyle::Bond]
            .iter()
            .find_map(|s| {
                let names = s.names();
                names.iter().position(|n| *n == base).map(|p| (names.len(), p))
            })?;
        let local = (index.checked_sub(1)?) * w + off;
        match side {
            "in" if local < dom => Some(local),
            "out" if local < cod => Some(dom + local),
            _ => None,
        }
    }
}

fn coefficient_text<F: Field>(c: &F) -> String {
    let t = c.to_string();
    if t.contains(['+', '-']) {
        format!("({t})")
    } else {
        t
    }
}

/// `a*x + b*y ...` for one constraint row; `None` if the row is zero.
pub(crate) fn linear_form_text<F: Field>(row: &[F], name: impl Fn(usize) -> String) -> Option<String> {
    let mut out = String::new();
    for (i, c) in row.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = if neg { c.neg() } else { c.clone() };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if !mag.is_one() {
            out.push_str(&coefficient_text(&mag));
            out.push('*');
        }
        out.push_str(&name(i));
    }
    (!out.is_empty()).then_some(out)
}

impl<F: Field> LinRel<F> {
    pub fn to_text(&self, style: VarStyle) -> String {
        let mut out = format!("linrel {} -> {}\n", self.dom, self.cod);
        for row in self.constraints() {
            let lhs = linear_form_text(&row, |i| style.var_name(self.dom, i)).expect("nonzero row");
            out.push_str(&format!("{lhs} = 0\n"));
        }
        out
    }

    pub fn parse_text(src: &str) -> Result<LinRel<F>, RelError> {
        let (kind, dom, cod, rows) = parse_relation_text::<F>(src)?;
        if kind != "linrel" {
            return Err(RelError::Parse {
                line: 1,
                msg: format!("expected a linrel header, found '{kind}'"),
            });
        }
        let mut constraints = Vec::new();
        for (line, (coeffs, constant)) in rows.into_iter().flatten() {
            if !constant.is_zero() {
                return Err(RelError::Parse {
                    line,
                    msg: "linear relations have zero right-hand sides".into(),
                });
            }
            constraints.push(coeffs);
        }
        LinRel::from_constraints(dom, cod, constraints)
    }
}

/// A row `Σ aᵢxᵢ = c` as its coefficients and `c`.
pub(crate) type ParsedRow<F> = (usize, (Vec<F>, F));

/// Parses a relation header and its rows; `None` marks an `EMPTY` line.
pub(crate) fn parse_relation_text<F: Field>(
    src: &str,
) -> Result<(String, usize, usize, Vec<Option<ParsedRow<F>>>), RelError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(RelError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let bad_header = || RelError::Parse {
        line: hline,
        msg: format!("malformed header '{header}', expected 'linrel P -> Q'"),
    };
    let words: Vec<&str> = header.split_whitespace().collect();
    let [kind, p, "->", q] = words.as_slice() else {
        return Err(bad_header());
    };
    let dom: usize = p.parse().map_err(|_| bad_header())?;
    let cod: usize = q.parse().map_err(|_| bad_header())?;
    let mut rows = Vec::new();
    for (line, text) in lines {
        if text == "EMPTY" {
            rows.push(None);
            continue;
        }
        let err = |msg: String| RelError::Parse { line, msg };
        let (lhs, rhs) = text.split_once('=').ok_or_else(|| err("expected '='".into()))?;
        let expr_err = |e: ExprError| err(e.to_string());
        let l = LinearForm::eval(&parse_expr(lhs).map_err(expr_err)?, dom, cod).map_err(&err)?;
        let r = LinearForm::eval(&parse_expr(rhs).map_err(expr_err)?, dom, cod).map_err(&err)?;
        let diff = l.sub(&r);
        let mut coeffs = vec![F::zero(); dom + cod];
        for (i, c) in diff.coeffs {
            coeffs[i] = F::from_ratfunc(&c).ok_or_else(|| err(format!("coefficient {c} is not in the field")))?;
        }
        let constant = F::from_ratfunc(&diff.constant.neg())
            .ok_or_else(|| err(format!("constant {} is not in the field", diff.constant)))?;
        rows.push(Some((line, (coeffs, constant))));
    }
    Ok((kind.to_string(), dom, cod, rows))
}

#[derive(Clone, Debug)]
struct LinearForm {
    coeffs: BTreeMap<usize, RatFunc>,
    constant: RatFunc,
}

impl LinearForm {
    fn constant(c: RatFunc) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    fn as_constant(&self) -> Option<&RatFunc> {
        self.coeffs.values().all(Field::is_zero).then_some(&self.constant)
    }

    fn scale(&self, c: &RatFunc) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().map(|(&i, v)| (i, v.mul(c))).collect(),
            constant: self.constant.mul(c),
        }
    }

    fn add(&self, o: &LinearForm) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&i, v) in &o.coeffs {
            let e = coeffs.entry(i).or_insert_with(RatFunc::zero);
            *e = e.add(v);
        }
        LinearForm {
            coeffs,
            constant: self.constant.add(&o.constant),
        }
    }

    fn sub(&self, o: &LinearForm) -> Self {
        self.add(&o.scale(&RatFunc::one().neg()))
    }

    fn eval(e: &Expr, dom: usize, cod: usize) -> Result<LinearForm, String> {
        let ev = |x: &Expr| LinearForm::eval(x, dom, cod);
        let need_const = |f: &LinearForm, what: &str| {
            f.as_constant()
                .cloned()
                .ok_or_else(|| format!("{what} must not involve variables"))
        };
        Ok(match e {
            Expr::Int(n) => LinearForm::constant(RatFunc::from(crate::scalar::Rat::from(n.clone()))),
            Expr::Ident(name) if name == "s" => LinearForm::constant(RatFunc::s()),
            Expr::Ident(name) => {
                let i = VarStyle::parse_var(name, dom, cod).ok_or_else(|| format!("unknown variable '{name}'"))?;
                LinearForm {
                    coeffs: BTreeMap::from([(i, RatFunc::one())]),
                    constant: RatFunc::zero(),
                }
            }
            Expr::Neg(a) => ev(a)?.scale(&RatFunc::one().neg()),
            Expr::Add(a, b) => ev(a)?.add(&ev(b)?),
            Expr::Sub(a, b) => ev(a)?.sub(&ev(b)?),
            Expr::Mul(a, b) => {
                let (x, y) = (ev(a)?, ev(b)?);
                match (x.as_constant(), y.as_constant()) {
                    (Some(c), _) => y.scale(c),
                    (_, Some(c)) => x.scale(c),
                    _ => return Err("product of two variables is not linear".into()),
                }
            }
            Expr::Div(a, b) => {
                let d = need_const(&ev(b)?, "a divisor")?;
                let inv = d.inv().map_err(|e| e.to_string())?;
                ev(a)?.scale(&inv)
            }
            Expr::Pow(a, k) => {
                let base = need_const(&ev(a)?, "a power base")?;
                let mut acc = RatFunc::one();
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                LinearForm::constant(acc)
            }
        })
    }
}

fn vector_text<F: Field>(v: &[F], dom: usize, style: VarStyle) -> String {
    v.iter()
        .enumerate()
        .map(|(i, x)| format!("{}={}", style.var_name(dom, i), x))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn describe_difference<F: Field>(a: &LinRel<F>, b: &LinRel<F>, style: VarStyle) -> Option<String> {
    let (left, v) = a.witness_difference(b)?;
    let side = if left { "left only" } else { "right only" };
    Some(format!("({}) in {side}", vector_text(&v, a.dom(), style)))
}

impl<F: Field> fmt::Debug for LinRel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(VarStyle::Plain))
    }
}

impl<F: Field> fmt::Display for LinRel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(VarStyle::Plain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Edge;
    use crate::scalar::Rat;

    type Q = Rat;
    type Qs = RatFunc;

    fn q(n: i64) -> Q {
        Rat::from(n)
    }

    fn rf(s: &str) -> Qs {
        s.parse().unwrap()
    }

    #[test]
    fn compose_by_substitution() {
        let f = LinRel::graph(&Mat::from_rows(1, vec![vec![q(2)]]).unwrap());
        let g = LinRel::graph(&Mat::from_rows(1, vec![vec![q(3)]]).unwrap());
        let h = LinRel::graph(&Mat::from_rows(1, vec![vec![q(6)]]).unwrap());
        assert_eq!(f.compose(&g).unwrap(), h);
        assert!(matches!(
            f.compose(&LinRel::identity(2)),
            Err(RelError::InterfaceMismatch { .. })
        ));
    }

    #[test]
    fn impedances_add_in_series() {
        let a = impedance_rel(q(2));
        let b = impedance_rel(q(3));
        assert_eq!(a.compose(&b).unwrap(), impedance_rel(q(5)));
    }

    #[test]
    fn tensor_and_dagger() {
        let id1 = LinRel::<Q>::identity(1);
        assert_eq!(id1.tensor(&id1), LinRel::identity(2));
        let f = LinRel::graph(&Mat::from_rows(1, vec![vec![q(2)]]).unwrap());
        let d = f.dagger();
        assert!(d.contains(&[q(2), q(1)]));
        assert!(!d.contains(&[q(1), q(2)]));
    }

    #[test]
    fn lagrangian_examples() {
        let k_m = k_corel::<Q>(&Corelation::from_labels(2, 1, &[0, 0, 0]));
        assert!(k_m.is_lagrangian().unwrap());
        assert!(LinRel::<Q>::identity(2).is_lagrangian().unwrap());
        assert!(!LinRel::<Q>::zero(2, 2).is_lagrangian().unwrap());
        assert!(matches!(
            LinRel::<Q>::identity(1).is_lagrangian(),
            Err(RelError::OddDimension(_))
        ));
        // ω itself, without the conjugate on the domain, fails for the identity.
        let bad = LinRel::<Q>::from_constraints(2, 2, vec![vec![q(1), q(0), q(-1), q(0)], vec![q(0), q(1), q(0), q(1)]]).unwrap();
        assert!(!bad.is_lagrangian().unwrap());
    }

    #[test]
    fn k_generator_table() {
        let m = k_corel::<Q>(&Corelation::from_labels(2, 1, &[0, 0, 0]));
        let expect = LinRel::from_constraints(
            4,
            2,
            vec![
                vec![q(1), q(0), q(-1), q(0), q(0), q(0)],
                vec![q(1), q(0), q(0), q(0), q(-1), q(0)],
                vec![q(0), q(1), q(0), q(1), q(0), q(-1)],
            ],
        )
        .unwrap();
        assert_eq!(m, expect);
        let i = k_corel::<Q>(&Corelation::from_labels(0, 1, &[0]));
        assert_eq!(i, LinRel::from_constraints(0, 2, vec![vec![q(0), q(1)]]).unwrap());
        assert_eq!(k_corel::<Q>(&Corelation::identity(1)), LinRel::identity(2));
    }

    #[test]
    fn label_relations() {
        let wire = label_rel::<Q>(&EdgeLabel::Wire).unwrap();
        assert_eq!(wire, LinRel::identity(2));
        let cap = label_rel::<Qs>(&EdgeLabel::Capacitor(q(3))).unwrap();
        let row = vec![rf("-3*s"), rf("-1"), rf("3*s"), rf("0")];
        assert!(cap.space().annihilator().contains(&row).unwrap());
        assert!(cap.is_lagrangian().unwrap());
        assert!(matches!(
            label_rel::<Q>(&EdgeLabel::Inductor(q(1))),
            Err(RelError::UnsupportedLabel(_))
        ));
    }

    fn series(a: EdgeLabel, b: EdgeLabel) -> LCircuit {
        LCircuit::new(
            3,
            vec![Edge { src: 0, tgt: 2, label: a }, Edge { src: 2, tgt: 1, label: b }],
            vec![0],
            vec![1],
        )
        .unwrap()
    }

    #[test]
    fn blackbox_series_and_parallel() {
        let r = |v: i64| EdgeLabel::Resistor(q(v));
        assert_eq!(blackbox::<Q>(&series(r(2), r(3))).unwrap(), impedance_rel(q(5)));
        let par = LCircuit::new(
            2,
            vec![Edge { src: 0, tgt: 1, label: r(2) }, Edge { src: 0, tgt: 1, label: r(3) }],
            vec![0],
            vec![1],
        )
        .unwrap();
        assert_eq!(blackbox::<Q>(&par).unwrap(), impedance_rel(Rat::new(6, 5).unwrap()));
        let wire = LCircuit::single_edge(EdgeLabel::Wire);
        assert_eq!(blackbox::<Q>(&wire).unwrap(), LinRel::identity(2));
        assert!(blackbox::<Q>(&LCircuit::single_edge(EdgeLabel::VoltageSource(rf("1")))).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = blackbox::<Qs>(&series(EdgeLabel::Resistor(q(2)), EdgeLabel::Capacitor(q(1)))).unwrap();
        let text = r.to_text(VarStyle::Circuit);
        assert!(text.starts_with("linrel 2 -> 2\n"));
        assert_eq!(LinRel::<Qs>::parse_text(&text).unwrap(), r);
        let wire = LinRel::<Q>::identity(2).to_text(VarStyle::Circuit);
        assert_eq!(wire, "linrel 2 -> 2\nphi_in_1 - phi_out_1 = 0\nI_in_1 - I_out_1 = 0\n");
        let parsed = LinRel::<Q>::parse_text("linrel 2 -> 2\nphi_out_1 - phi_in_1 - 5*I_in_1 = 0\nI_in_1 = I_out_1").unwrap();
        assert_eq!(parsed, impedance_rel(q(5)));
        assert!(matches!(
            LinRel::<Q>::parse_text("linrel 2 -> 2\nphi_in_1*I_in_1 = 0"),
            Err(RelError::Parse { line: 2, .. })
        ));
        assert!(LinRel::<Q>::parse_text("linrel 1 -> 1\nx_in_1 = s*x_out_1").is_err());
    }

    #[test]
    fn differences_are_witnessed() {
        let a = impedance_rel(q(2));
        let b = impedance_rel(q(3));
        let (_, v) = a.witness_difference(&b).unwrap();
        assert!(a.contains(&v) != b.contains(&v));
        assert!(a.witness_difference(&a).is_none());
    }
}
