//! Affine relations, possibly empty, stored as homogenized subspaces; the
//! black box of circuits with voltage and current sources.

use std::fmt;

use crate::circuit::{circuit_signature, parse_label_generator, EdgeLabel, LCircuit};
use crate::exactla::{Mat, Subspace};
use crate::linrel::{
    k_corel, label_rows, linear_form_text, network_behavior, parse_relation_text, LinRel, RelError,
    VarStyle,
};
use crate::scalar::Field;
use crate::setprops::Corelation;
use crate::term::{Generator, PropModel, Signature, TermError};

/// `{(u, w) : (u, w, 1) ∈ hspace}`. The empty relation has the zero hspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffRel<F> {
    dom: usize,
    cod: usize,
    hspace: Subspace<F>,
}

impl<F: Field> AffRel<F> {
    pub fn from_hspace(dom: usize, cod: usize, hspace: Subspace<F>) -> Result<Self, RelError> {
        let n = dom + cod;
        if hspace.ambient() != n + 1 {
            return Err(crate::exactla::LinAlgError::DimensionMismatch {
                expected: n + 1,
                found: hspace.ambient(),
            }
            .into());
        }
        let reachable = hspace.basis().iter().any(|v| !v[n].is_zero());
        let hspace = if reachable { hspace } else { Subspace::zero(n + 1) };
        Ok(AffRel { dom, cod, hspace })
    }

    /// Rows `(a, b)` read as `a·(u, w) + b = 0`.
    pub fn from_hrows(dom: usize, cod: usize, rows: Vec<Vec<F>>) -> Result<Self, RelError> {
        AffRel::from_hspace(dom, cod, Mat::from_rows(dom + cod + 1, rows)?.kernel())
    }

    pub fn empty(dom: usize, cod: usize) -> Self {
        AffRel {
            dom,
            cod,
            hspace: Subspace::zero(dom + cod + 1),
        }
    }

    pub fn from_linear(l: &LinRel<F>) -> Self {
        let n = l.dom() + l.cod();
        let mut vs: Vec<Vec<F>> = l
            .space()
            .basis()
            .iter()
            .map(|v| v.iter().cloned().chain([F::zero()]).collect())
            .collect();
        let mut point = vec![F::zero(); n + 1];
        point[n] = F::one();
        vs.push(point);
        AffRel::from_hspace(l.dom(), l.cod(), Subspace::span(n + 1, vs).unwrap()).unwrap()
    }

    /// `point + l`.
    pub fn translate(l: &LinRel<F>, point: &[F]) -> Result<Self, RelError> {
        let n = l.dom() + l.cod();
        let mut vs: Vec<Vec<F>> = l
            .space()
            .basis()
            .iter()
            .map(|v| v.iter().cloned().chain([F::zero()]).collect())
            .collect();
        vs.push(point.iter().cloned().chain([F::one()]).collect());
        AffRel::from_hspace(l.dom(), l.cod(), Subspace::span(n + 1, vs)?)
    }

    pub fn identity(n: usize) -> Self {
        AffRel::from_linear(&LinRel::identity(n))
    }

    pub fn braid(a: usize, b: usize) -> Self {
        AffRel::from_linear(&LinRel::braid(a, b))
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn hspace(&self) -> &Subspace<F> {
        &self.hspace
    }

    pub fn is_empty(&self) -> bool {
        self.hspace.dim() == 0
    }

    /// Some point of the relation.
    pub fn witness(&self) -> Option<Vec<F>> {
        let n = self.dom + self.cod;
        let v = self.hspace.basis().iter().find(|v| !v[n].is_zero())?;
        let scale = v[n].inv().expect("nonzero");
        Some(v[..n].iter().map(|x| x.mul(&scale)).collect())
    }

    /// The `h = 0` slice: the direction space of the relation.
    pub fn linear_part(&self) -> Option<LinRel<F>> {
        if self.is_empty() {
            return None;
        }
        let n = self.dom + self.cod;
        let mut e = vec![F::zero(); n + 1];
        e[n] = F::one();
        let slice = self.hspace.intersect(&Mat::from_rows(n + 1, vec![e]).unwrap().kernel()).unwrap();
        let coords: Vec<usize> = (0..n).collect();
        Some(LinRel::new(self.dom, self.cod, slice.project(&coords)).unwrap())
    }

    pub fn contains(&self, point: &[F]) -> bool {
        let v: Vec<F> = point.iter().cloned().chain([F::one()]).collect();
        self.hspace.contains(&v).unwrap_or(false)
    }

    /// Rows `(a, b)` with `a·x + b·h = 0` for every `(x, h)` in the hspace.
    pub fn hrows(&self) -> Vec<Vec<F>> {
        self.hspace.annihilator().basis().to_vec()
    }

    /// Composition with the constant coordinate shared by both factors:
    /// combinations of the two bases agreeing on the middle coordinates and
    /// on `h`.
    pub fn compose(&self, g: &AffRel<F>) -> Result<AffRel<F>, RelError> {
        if self.cod != g.dom {
            return Err(RelError::InterfaceMismatch {
                left: self.cod,
                right: g.dom,
            });
        }
        let (p, q, r) = (self.dom, self.cod, g.cod);
        if self.is_empty() || g.is_empty() {
            return Ok(AffRel::empty(p, r));
        }
        let fb = self.hspace.basis();
        let gb = g.hspace.basis();
        let (a, b) = (fb.len(), gb.len());
        let mut m = Mat::zeros(q + 1, a + b);
        for (j, v) in fb.iter().enumerate() {
            for i in 0..=q {
                m.set(i, j, v[p + i].clone());
            }
        }
        for (j, v) in gb.iter().enumerate() {
            for i in 0..q {
                m.set(i, a + j, v[i].neg());
            }
            m.set(q, a + j, v[q + r].neg());
        }
        let vs = m
            .kernel()
            .basis()
            .iter()
            .map(|c| {
                let mut out = vec![F::zero(); p + r + 1];
                for (j, v) in fb.iter().enumerate() {
                    if !c[j].is_zero() {
                        for i in 0..p {
                            out[i] = out[i].add(&c[j].mul(&v[i]));
                        }
                        out[p + r] = out[p + r].add(&c[j].mul(&v[p + q]));
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
        AffRel::from_hspace(p, r, Subspace::span(p + r + 1, vs)?)
    }

    /// A point and spanning directions, read off the basis.
    fn point_and_directions(&self) -> Option<(Vec<F>, Vec<Vec<F>>)> {
        let n = self.dom + self.cod;
        let basis = self.hspace.basis();
        let k = basis.iter().position(|v| !v[n].is_zero())?;
        let scale = basis[k][n].inv().expect("nonzero");
        let point: Vec<F> = basis[k].iter().map(|x| x.mul(&scale)).collect();
        let dirs = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, v)| {
                let t = &v[n];
                v.iter().zip(&point).map(|(x, y)| x.sub(&t.mul(y))).collect()
            })
            .collect();
        Some((point, dirs))
    }

    pub fn tensor(&self, g: &AffRel<F>) -> AffRel<F> {
        let (p1, q1, p2, q2) = (self.dom, self.cod, g.dom, g.cod);
        let (Some((pf, df)), Some((pg, dg))) = (self.point_and_directions(), g.point_and_directions()) else {
            return AffRel::empty(p1 + p2, q1 + q2);
        };
        let width = p1 + p2 + q1 + q2 + 1;
        let place_f = |v: &[F], out: &mut Vec<F>| {
            out[..p1].clone_from_slice(&v[..p1]);
            out[p1 + p2..p1 + p2 + q1].clone_from_slice(&v[p1..p1 + q1]);
        };
        let place_g = |v: &[F], out: &mut Vec<F>| {
            out[p1..p1 + p2].clone_from_slice(&v[..p2]);
            out[p1 + p2 + q1..width - 1].clone_from_slice(&v[p2..p2 + q2]);
        };
        let mut vs = Vec::with_capacity(df.len() + dg.len() + 1);
        for v in &df {
            let mut out = vec![F::zero(); width];
            place_f(v, &mut out);
            vs.push(out);
        }
        for v in &dg {
            let mut out = vec![F::zero(); width];
            place_g(v, &mut out);
            vs.push(out);
        }
        let mut point = vec![F::zero(); width];
        place_f(&pf, &mut point);
        place_g(&pg, &mut point);
        point[width - 1] = F::one();
        vs.push(point);
        AffRel::from_hspace(p1 + p2, q1 + q2, Subspace::span(width, vs).expect("sized vectors")).expect("sized hspace")
    }

    pub fn dagger(&self) -> AffRel<F> {
        let (p, q) = (self.dom, self.cod);
        let vs = self
            .hspace
            .basis()
            .iter()
            .map(|v| v[p..p + q].iter().chain(&v[..p]).chain([&v[p + q]]).cloned().collect())
            .collect();
        AffRel::from_hspace(q, p, Subspace::span(p + q + 1, vs).unwrap()).unwrap()
    }

    /// Empty, or a translate of a Lagrangian relation.
    pub fn is_aff_lagrangian(&self) -> Result<bool, RelError> {
        for d in [self.dom, self.cod] {
            if d % 2 != 0 {
                return Err(RelError::OddDimension(d));
            }
        }
        match self.linear_part() {
            None => Ok(true),
            Some(l) => l.is_lagrangian(),
        }
    }

    pub fn to_text(&self, style: VarStyle) -> String {
        let mut out = format!("affrel {} -> {}\n", self.dom, self.cod);
        if self.is_empty() {
            out.push_str("EMPTY\n");
            return out;
        }
        let n = self.dom + self.cod;
        for row in self.hrows() {
            let lhs = linear_form_text(&row[..n], |i| style.var_name(self.dom, i))
                .expect("nonempty relations have no constant-only rows");
            out.push_str(&format!("{lhs} = {}\n", row[n].neg()));
        }
        out
    }

    pub fn parse_text(src: &str) -> Result<AffRel<F>, RelError> {
        let (kind, dom, cod, rows) = parse_relation_text::<F>(src)?;
        if kind != "affrel" && kind != "linrel" {
            return Err(RelError::Parse {
                line: 1,
                msg: format!("expected an affrel header, found '{kind}'"),
            });
        }
        let mut hrows = Vec::new();
        for row in rows {
            let Some((_, (mut coeffs, constant))) = row else {
                return Ok(AffRel::empty(dom, cod));
            };
            coeffs.push(constant.neg());
            hrows.push(coeffs);
        }
        AffRel::from_hrows(dom, cod, hrows)
    }
}

impl<F: Field> fmt::Debug for AffRel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(VarStyle::Plain))
    }
}

impl<F: Field> fmt::Display for AffRel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(VarStyle::Plain))
    }
}

/// Rows over `(φ₁, I₁, φ₂, I₂, h)`; sources put their value on `h`.
pub fn label_hrows<F: Field>(label: &EdgeLabel) -> Result<Vec<Vec<F>>, RelError> {
    let value = |z| {
        F::from_ratfunc(z).ok_or_else(|| {
            RelError::UnsupportedLabel(format!("{label} needs the field of rational functions"))
        })
    };
    let (o, z) = (F::one(), F::zero());
    Ok(match label {
        EdgeLabel::VoltageSource(v) => {
            let v: F = value(v)?;
            vec![
                vec![o.neg(), z.clone(), o.clone(), z.clone(), v.neg()],
                vec![z.clone(), o.clone(), z.clone(), o.neg(), z],
            ]
        }
        EdgeLabel::CurrentSource(i) => {
            let i: F = value(i)?;
            vec![
                vec![z.clone(), o.clone(), z.clone(), z.clone(), i.neg()],
                vec![z.clone(), z.clone(), z, o, i.neg()],
            ]
        }
        _ => label_rows::<F>(label)?
            .into_iter()
            .map(|mut r| {
                r.push(F::zero());
                r
            })
            .collect(),
    })
}

pub fn source_rel<F: Field>(label: &EdgeLabel) -> Result<AffRel<F>, RelError> {
    AffRel::from_hrows(2, 2, label_hrows(label)?)
}

pub fn aff_blackbox<F: Field>(c: &LCircuit) -> Result<AffRel<F>, RelError> {
    let hspace = network_behavior(c, 1, label_hrows::<F>)?;
    AffRel::from_hspace(2 * c.dom(), 2 * c.cod(), hspace)
}

/// Circuit terms, sources included, evaluated into affine relations.
#[derive(Debug, Clone)]
pub struct AffLagRelModel<F> {
    sig: Signature,
    _field: std::marker::PhantomData<F>,
}

impl<F> Default for AffLagRelModel<F> {
    fn default() -> Self {
        AffLagRelModel {
            sig: circuit_signature(),
            _field: std::marker::PhantomData,
        }
    }
}

impl<F: Field> PropModel for AffLagRelModel<F> {
    type Value = AffRel<F>;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<AffRel<F>, TermError> {
        let spider =
            |a, b| Ok(AffRel::from_linear(&k_corel(&Corelation::from_labels(a, b, &vec![0; a + b]))));
        match (g.name.as_str(), &g.arg) {
            ("m", None) => spider(2, 1),
            ("i", None) => spider(0, 1),
            ("d", None) => spider(1, 2),
            ("e", None) => spider(1, 0),
            ("label", Some(_)) => {
                let label = parse_label_generator(g)?;
                source_rel(&label).map_err(|e| TermError::BadArgument {
                    generator: g.to_string(),
                    msg: e.to_string(),
                })
            }
            _ => Err(TermError::UnknownGenerator(g.to_string())),
        }
    }

    fn identity(&self, n: usize) -> AffRel<F> {
        AffRel::identity(2 * n)
    }

    fn symmetry(&self, m: usize, n: usize) -> AffRel<F> {
        AffRel::braid(2 * m, 2 * n)
    }

    fn compose(&self, f: &AffRel<F>, g: &AffRel<F>) -> AffRel<F> {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &AffRel<F>, g: &AffRel<F>) -> AffRel<F> {
        f.tensor(g)
    }

    fn equal(&self, a: &AffRel<F>, b: &AffRel<F>) -> bool {
        a == b
    }

    fn width(&self) -> usize {
        2
    }

    fn distinguish(&self, a: &AffRel<F>, b: &AffRel<F>) -> Option<String> {
        let describe = |p: &[F]| {
            p.iter()
                .enumerate()
                .map(|(i, x)| format!("{}={}", VarStyle::Circuit.var_name(a.dom(), i), x))
                .collect::<Vec<_>>()
                .join(", ")
        };
        if a == b {
            return None;
        }
        match (a.witness(), b.witness()) {
            (None, None) => None,
            (Some(p), None) => Some(format!("({}) in left only; right is empty", describe(&p))),
            (None, Some(p)) => Some(format!("({}) in right only; left is empty", describe(&p))),
            (Some(p), Some(q)) => {
                if !b.contains(&p) {
                    return Some(format!("({}) in left only", describe(&p)));
                }
                if !a.contains(&q) {
                    return Some(format!("({}) in right only", describe(&q)));
                }
                // Same point, different directions: shift the shared point.
                let (la, lb) = (a.linear_part()?, b.linear_part()?);
                let (left, d) = la.witness_difference(&lb)?;
                let shifted: Vec<F> = p.iter().zip(&d).map(|(x, y)| x.add(y)).collect();
                let side = if left { "left only" } else { "right only" };
                Some(format!("({}) in {side}", describe(&shifted)))
            }
        }
    }
}
