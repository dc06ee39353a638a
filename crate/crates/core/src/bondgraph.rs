//! Bond graphs: the eight junction generators, their effort/flow semantics F,
//! their potential/current semantics G, and the transformation α between them.

use crate::linrel::{describe_difference, k_corel, LinRel, VarStyle};
use crate::scalar::Field;
use crate::setprops::{CorelModel, Corelation};
use crate::sigflow::FinRelModel;
use crate::term::{eval, gen, id, par, seq, sym, Generator, PropModel, PropTerm, Signature, TermError};

/// Generator names: `1j, 1u, 1d, 1e` are M, I, D, E (1-junctions) and
/// `0j, 0u, 0d, 0e` are M′, I′, D′, E′ (0-junctions).
pub const GENERATORS: [&str; 8] = ["1j", "1u", "1d", "1e", "0j", "0u", "0d", "0e"];

pub fn bond_signature() -> Signature {
    Signature::new()
        .with("1j", 2, 1)
        .with("1u", 0, 1)
        .with("1d", 1, 2)
        .with("1e", 1, 0)
        .with("0j", 2, 1)
        .with("0u", 0, 1)
        .with("0d", 1, 2)
        .with("0e", 1, 0)
}

fn mid_swap(k: usize) -> PropTerm {
    par([id(k), sym(k, k), id(k)])
}

/// The image of a generator under F, as a signal-flow term on `(E, F)` wires.
pub fn f_image(name: &str) -> Option<PropTerm> {
    let g = gen;
    Some(match name {
        "1j" => seq([mid_swap(1), par([g("add"), g("codup")])]),
        "1u" => par([g("zero"), g("codel")]),
        "1d" => seq([par([g("coadd"), g("dup")]), mid_swap(1)]),
        "1e" => par([g("cozero"), g("del")]),
        "0j" => seq([mid_swap(1), par([g("codup"), g("add")])]),
        "0u" => par([g("codel"), g("zero")]),
        "0d" => seq([par([g("dup"), g("coadd")]), mid_swap(1)]),
        "0e" => par([g("del"), g("cozero")]),
        _ => return None,
    })
}

/// The image of a generator under G, as a term over `m, i, d, e`; each port
/// is a pair of terminals.
pub fn g_image(name: &str) -> Option<PropTerm> {
    let g = gen;
    Some(match name {
        "1j" => par([id(1), seq([g("m"), g("e")]), id(1)]),
        "1u" => seq([g("i"), g("d")]),
        "1d" => par([id(1), seq([g("i"), g("d")]), id(1)]),
        "1e" => seq([g("m"), g("e")]),
        "0j" => seq([mid_swap(1), par([g("m"), g("m")])]),
        "0u" => par([g("i"), g("i")]),
        "0d" => seq([par([g("d"), g("d")]), mid_swap(1)]),
        "0e" => par([g("e"), g("e")]),
        _ => return None,
    })
}

/// The functor F into Lagrangian relations, two coordinates per bond.
#[derive(Debug, Clone)]
pub struct BondFModel<F> {
    sig: Signature,
    inner: FinRelModel<F>,
}

impl<F> Default for BondFModel<F> {
    fn default() -> Self {
        BondFModel {
            sig: bond_signature(),
            inner: FinRelModel::default(),
        }
    }
}

impl<F: Field> PropModel for BondFModel<F> {
    type Value = LinRel<F>;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<LinRel<F>, TermError> {
        match (f_image(&g.name), &g.arg) {
            (Some(t), None) => eval(&t, &self.inner),
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
        describe_difference(a, b, VarStyle::Bond)
    }
}

/// The functor G into corelations, two terminals per bond.
#[derive(Debug, Clone)]
pub struct BondGModel {
    sig: Signature,
    inner: CorelModel,
}

impl Default for BondGModel {
    fn default() -> Self {
        BondGModel {
            sig: bond_signature(),
            inner: CorelModel::default(),
        }
    }
}

impl PropModel for BondGModel {
    type Value = Corelation;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<Corelation, TermError> {
        match (g_image(&g.name), &g.arg) {
            (Some(t), None) => eval(&t, &self.inner),
            _ => Err(TermError::UnknownGenerator(g.to_string())),
        }
    }

    fn identity(&self, n: usize) -> Corelation {
        Corelation::identity(2 * n)
    }

    fn symmetry(&self, m: usize, n: usize) -> Corelation {
        Corelation::symmetry(2 * m, 2 * n)
    }

    fn compose(&self, f: &Corelation, g: &Corelation) -> Corelation {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &Corelation, g: &Corelation) -> Corelation {
        f.tensor(g)
    }

    fn equal(&self, a: &Corelation, b: &Corelation) -> bool {
        a == b
    }

    fn width(&self) -> usize {
        2
    }

    fn distinguish(&self, a: &Corelation, b: &Corelation) -> Option<String> {
        self.inner.distinguish(a, b)
    }
}

pub fn f_eval<F: Field>(t: &PropTerm) -> Result<LinRel<F>, TermError> {
    eval(t, &BondFModel::<F>::default())
}

pub fn g_eval(t: &PropTerm) -> Result<Corelation, TermError> {
    eval(t, &BondGModel::default())
}

/// `α₁ = {(V, I, φ₁, I₁, φ₂, I₂) : V = φ₂ − φ₁, I = I₁ = −I₂}` and
/// `αₙ = α₁^⊕n`.
pub fn alpha<F: Field>(n: usize) -> LinRel<F> {
    let c = |x: i64| F::from_i64(x);
    let alpha1 = LinRel::from_constraints(
        2,
        4,
        vec![
            vec![c(1), c(0), c(1), c(0), c(-1), c(0)],
            vec![c(0), c(1), c(0), c(-1), c(0), c(0)],
            vec![c(0), c(1), c(0), c(0), c(0), c(1)],
        ],
    )
    .expect("fixed shape");
    (0..n).fold(LinRel::identity(0), |acc, _| acc.tensor(&alpha1))
}

/// `α_m ; K(G(t)) ; α_n†` and `F(t)`, in that order.
pub fn naturality_sides<F: Field>(t: &PropTerm) -> Result<(LinRel<F>, LinRel<F>), TermError> {
    let (m, n) = t.arity(&bond_signature())?;
    let kg = k_corel::<F>(&g_eval(t)?);
    let lhs = alpha::<F>(m)
        .compose(&kg)
        .and_then(|r| r.compose(&alpha::<F>(n).dagger()))
        .expect("shapes agree");
    Ok((lhs, f_eval(t)?))
}

pub fn check_naturality<F: Field>(t: &PropTerm) -> Result<bool, TermError> {
    let (a, b) = naturality_sides::<F>(t)?;
    Ok(a.equals(&b))
}

/// `α_m ; KG(t) ; α_n† ; α_n = α_m ; KG(t)`.
pub fn check_absorption<F: Field>(t: &PropTerm) -> Result<bool, TermError> {
    let (m, n) = t.arity(&bond_signature())?;
    let base = alpha::<F>(m).compose(&k_corel(&g_eval(t)?)).expect("shapes agree");
    let an = alpha::<F>(n);
    let round = base.compose(&an.dagger()).and_then(|r| r.compose(&an)).expect("shapes agree");
    Ok(round.equals(&base))
}

/// The dagger of the absorption identity:
/// `α_m† ; α_m ; KG(t) ; α_n† = KG(t) ; α_n†`.
pub fn check_coabsorption<F: Field>(t: &PropTerm) -> Result<bool, TermError> {
    let (m, n) = t.arity(&bond_signature())?;
    let base = k_corel::<F>(&g_eval(t)?).compose(&alpha::<F>(n).dagger()).expect("shapes agree");
    let am = alpha::<F>(m);
    let round = am.dagger().compose(&am).and_then(|r| r.compose(&base)).expect("shapes agree");
    Ok(round.equals(&base))
}
