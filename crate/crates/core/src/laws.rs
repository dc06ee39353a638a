//! Equational law builders and the named suites run by `propnet laws`.

use crate::bondgraph::{self, bond_signature, BondFModel, BondGModel, GENERATORS};
use crate::circuit::circuit_signature;
use crate::linrel::describe_difference;
use crate::linrel::VarStyle;
use crate::random::{label_literal, rng, LabelPool, TermSampler};
use crate::scalar::{Rat, RatFunc};
use crate::setprops::{BoolRelModel, CorelModel, CospanModel, SpanModel};
use crate::sigflow::{self, FinRelModel};
use crate::term::{eval, gen, id, par, seq, sym, Generator, PropModel, PropTerm, TermError};

pub const SUITES: [&str; 10] = [
    "fincorel",
    "fincospan",
    "finrel-set",
    "finrelk",
    "fincorel-deg2",
    "lagrel-deg2",
    "bondgraph-f",
    "bondgraph-g",
    "alpha",
    "square",
];

/// An equation between two terms, and whether it is supposed to hold.
#[derive(Debug, Clone)]
pub struct Law {
    pub id: String,
    pub lhs: PropTerm,
    pub rhs: PropTerm,
    pub expected: bool,
}

impl Law {
    pub fn new(id: impl Into<String>, lhs: PropTerm, rhs: PropTerm) -> Self {
        Law {
            id: id.into(),
            lhs,
            rhs,
            expected: true,
        }
    }

    /// Marks the equation as one the model is known to violate.
    pub fn failing(mut self) -> Self {
        self.expected = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub id: String,
    pub holds: bool,
    pub expected: bool,
    /// Why the sides differ, when they do.
    pub detail: Option<String>,
}

impl LawCheck {
    pub fn as_expected(&self) -> bool {
        self.holds == self.expected
    }

    /// `PASS`/`FAIL` for the equation itself, annotated when that was the
    /// expected outcome.
    pub fn line(&self) -> String {
        let verdict = if self.holds { "PASS" } else { "FAIL" };
        let note = match (self.holds, self.expected) {
            (false, false) => " (expected)",
            (true, false) => " (UNEXPECTED: should fail)",
            (false, true) => " (UNEXPECTED)",
            (true, true) => "",
        };
        let mut s = format!("{verdict} {}{note}", self.id);
        if let Some(d) = &self.detail {
            s.push_str(&format!(": {d}"));
        }
        s
    }
}

pub fn check_law<M: PropModel + ?Sized>(model: &M, law: &Law) -> Result<LawCheck, TermError> {
    let a = eval(&law.lhs, model)?;
    let b = eval(&law.rhs, model)?;
    let holds = model.equal(&a, &b);
    let detail = if holds { None } else { model.distinguish(&a, &b) };
    Ok(LawCheck {
        id: law.id.clone(),
        holds,
        expected: law.expected,
        detail,
    })
}

pub fn check_laws<M: PropModel + ?Sized>(model: &M, laws: &[Law]) -> Result<Vec<LawCheck>, TermError> {
    laws.iter().map(|l| check_law(model, l)).collect()
}

/// A candidate monoid and comonoid on an object of width `k`.
#[derive(Debug, Clone)]
pub struct Structure {
    pub name: String,
    pub k: usize,
    pub mu: PropTerm,
    pub eta: PropTerm,
    pub delta: PropTerm,
    pub eps: PropTerm,
}

impl Structure {
    /// From four generator names, on an object of width 1.
    pub fn of(mu: &str, eta: &str, delta: &str, eps: &str) -> Self {
        Structure {
            name: format!("({mu},{eta},{delta},{eps})"),
            k: 1,
            mu: gen(mu),
            eta: gen(eta),
            delta: gen(delta),
            eps: gen(eps),
        }
    }

    fn law(&self, tag: &str, lhs: PropTerm, rhs: PropTerm) -> Law {
        Law::new(format!("{} {tag}", self.name), lhs, rhs)
    }

    fn i(&self) -> PropTerm {
        id(self.k)
    }

    pub fn monoid(&self) -> Vec<Law> {
        let (mu, eta, i) = (&self.mu, &self.eta, self.i());
        vec![
            self.law(
                "assoc",
                seq([par([mu.clone(), i.clone()]), mu.clone()]),
                seq([par([i.clone(), mu.clone()]), mu.clone()]),
            ),
            self.law("unit-left", seq([par([eta.clone(), i.clone()]), mu.clone()]), i.clone()),
            self.law("unit-right", seq([par([i.clone(), eta.clone()]), mu.clone()]), i),
        ]
    }

    pub fn comonoid(&self) -> Vec<Law> {
        let (d, e, i) = (&self.delta, &self.eps, self.i());
        vec![
            self.law(
                "coassoc",
                seq([d.clone(), par([d.clone(), i.clone()])]),
                seq([d.clone(), par([i.clone(), d.clone()])]),
            ),
            self.law("counit-left", seq([d.clone(), par([e.clone(), i.clone()])]), i.clone()),
            self.law("counit-right", seq([d.clone(), par([i.clone(), e.clone()])]), i),
        ]
    }

    pub fn commutative(&self) -> Vec<Law> {
        vec![self.law("commutative", seq([sym(self.k, self.k), self.mu.clone()]), self.mu.clone())]
    }

    pub fn cocommutative(&self) -> Vec<Law> {
        vec![self.law(
            "cocommutative",
            seq([self.delta.clone(), sym(self.k, self.k)]),
            self.delta.clone(),
        )]
    }

    pub fn frobenius(&self) -> Vec<Law> {
        let (mu, d, i) = (&self.mu, &self.delta, self.i());
        let middle = seq([mu.clone(), d.clone()]);
        vec![
            self.law(
                "frobenius-left",
                seq([par([d.clone(), i.clone()]), par([i.clone(), mu.clone()])]),
                middle.clone(),
            ),
            self.law(
                "frobenius-right",
                seq([par([i.clone(), d.clone()]), par([mu.clone(), i])]),
                middle,
            ),
        ]
    }

    pub fn special(&self) -> Vec<Law> {
        vec![self.law("special", seq([self.delta.clone(), self.mu.clone()]), self.i())]
    }

    pub fn extra(&self) -> Vec<Law> {
        vec![self.law("extra", seq([self.eta.clone(), self.eps.clone()]), id(0))]
    }

    pub fn symmetric(&self) -> Vec<Law> {
        let me = seq([self.mu.clone(), self.eps.clone()]);
        vec![self.law("symmetric", seq([sym(self.k, self.k), me.clone()]), me)]
    }

    fn mid(&self) -> PropTerm {
        let k = self.k;
        par([id(k), sym(k, k), id(k)])
    }

    pub fn bimonoid(&self) -> Vec<Law> {
        let (mu, eta, d, e) = (&self.mu, &self.eta, &self.delta, &self.eps);
        vec![
            self.law(
                "bimonoid-mult",
                seq([mu.clone(), d.clone()]),
                seq([par([d.clone(), d.clone()]), self.mid(), par([mu.clone(), mu.clone()])]),
            ),
            self.law("bimonoid-unit", seq([eta.clone(), d.clone()]), par([eta.clone(), eta.clone()])),
            self.law("bimonoid-counit", seq([mu.clone(), e.clone()]), par([e.clone(), e.clone()])),
            self.law("bimonoid-scalar", seq([eta.clone(), e.clone()]), id(0)),
        ]
    }

    pub fn weak_bimonoid(&self) -> Vec<Law> {
        let (mu, eta, d, e, i) = (&self.mu, &self.eta, &self.delta, &self.eps, self.i());
        let k = self.k;
        let me = seq([mu.clone(), e.clone()]);
        let ed = seq([eta.clone(), d.clone()]);
        let b_lhs = seq([par([mu.clone(), i.clone()]), mu.clone(), e.clone()]);
        let c_lhs = seq([eta.clone(), d.clone(), par([d.clone(), i.clone()])]);
        vec![
            self.law(
                "weak-bimonoid-mult",
                seq([mu.clone(), d.clone()]),
                seq([par([d.clone(), d.clone()]), self.mid(), par([mu.clone(), mu.clone()])]),
            ),
            self.law(
                "weak-bimonoid-counit-1",
                b_lhs.clone(),
                seq([par([i.clone(), d.clone(), i.clone()]), par([me.clone(), me.clone()])]),
            ),
            self.law(
                "weak-bimonoid-counit-2",
                b_lhs,
                seq([
                    par([i.clone(), seq([d.clone(), sym(k, k)]), i.clone()]),
                    par([me.clone(), me]),
                ]),
            ),
            self.law(
                "weak-bimonoid-unit-1",
                c_lhs.clone(),
                seq([par([ed.clone(), ed.clone()]), par([i.clone(), mu.clone(), i.clone()])]),
            ),
            self.law(
                "weak-bimonoid-unit-2",
                c_lhs,
                seq([
                    par([ed.clone(), ed]),
                    par([i.clone(), seq([sym(k, k), mu.clone()]), i]),
                ]),
            ),
        ]
    }

    /// Extraspecial commutative Frobenius monoid.
    pub fn ecfm(&self) -> Vec<Law> {
        [
            self.monoid(),
            self.comonoid(),
            self.commutative(),
            self.cocommutative(),
            self.frobenius(),
            self.special(),
            self.extra(),
        ]
        .concat()
    }

    /// Extraspecial symmetric Frobenius monoid.
    pub fn esfm(&self) -> Vec<Law> {
        [
            self.monoid(),
            self.comonoid(),
            self.frobenius(),
            self.special(),
            self.extra(),
            self.symmetric(),
        ]
        .concat()
    }

    pub fn bicommutative_bimonoid(&self) -> Vec<Law> {
        [
            self.monoid(),
            self.comonoid(),
            self.commutative(),
            self.cocommutative(),
            self.bimonoid(),
        ]
        .concat()
    }

    /// Monoid, comonoid and weak bimonoid laws.
    pub fn weak(&self) -> Vec<Law> {
        [self.monoid(), self.comonoid(), self.weak_bimonoid()].concat()
    }
}

fn one_junction() -> Structure {
    Structure::of("1j", "1u", "1d", "1e")
}

fn zero_junction() -> Structure {
    Structure::of("0j", "0u", "0d", "0e")
}

/// The laws of the bond graph prop, with the discriminating equation
/// `seq(0d, 1j) = seq(1d, 0j)` expected to hold only when `discriminator` is set.
pub fn bond_graph_laws(discriminator: bool) -> Vec<Law> {
    let g = gen;
    let x = seq([g("1d"), g("0j"), g("0d"), g("1j")]);
    let y = seq([g("0d"), g("1j"), g("1d"), g("0j")]);
    let mut laws = [
        one_junction().esfm(),
        zero_junction().esfm(),
        Structure::of("1j", "1u", "0d", "0e").weak_bimonoid(),
        Structure::of("0j", "0u", "1d", "1e").weak_bimonoid(),
    ]
    .concat();
    laws.push(Law::new("extra (0u;1e)", seq([g("0u"), g("1e")]), id(0)));
    laws.push(Law::new("extra (1u;0e)", seq([g("1u"), g("0e")]), id(0)));
    laws.push(Law::new("idempotent (1d;0j;0d;1j)", seq([x.clone(), x.clone()]), x));
    laws.push(Law::new("idempotent (0d;1j;1d;0j)", seq([y.clone(), y.clone()]), y));
    let d = Law::new("discriminator (0d;1j = 1d;0j)", seq([g("0d"), g("1j")]), seq([g("1d"), g("0j")]));
    laws.push(if discriminator { d } else { d.failing() });
    laws
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (known: {known})", known = SUITES.join(", "))]
    Unknown(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("{0}")]
    Other(String),
}

fn prefixed(prefix: &str, mut laws: Vec<Law>) -> Vec<Law> {
    for l in &mut laws {
        l.id = format!("{prefix}{}", l.id);
    }
    laws
}

/// Runs a named suite. Checks come back sorted by id.
pub fn run_suite(name: &str) -> Result<Vec<LawCheck>, SuiteError> {
    let mut checks = match name {
        "fincorel" => check_laws(&CorelModel::default(), &Structure::of("m", "i", "d", "e").ecfm())?,
        "fincospan" => {
            let s = Structure::of("m", "i", "d", "e");
            let mut laws = s.ecfm();
            for l in &mut laws {
                if l.id.ends_with(" extra") {
                    l.expected = false;
                }
            }
            check_laws(&CospanModel::default(), &laws)?
        }
        "finrel-set" => {
            let s = Structure::of("m'", "i'", "d'", "e'");
            let laws = [s.bicommutative_bimonoid(), s.special()].concat();
            let mut checks = check_laws(&BoolRelModel::default(), &prefixed("rel ", laws.clone()))?;
            let span_laws: Vec<Law> = prefixed("span ", laws)
                .into_iter()
                .map(|l| if l.id.ends_with(" special") { l.failing() } else { l })
                .collect();
            checks.extend(check_laws(&SpanModel::default(), &span_laws)?);
            checks
        }
        "finrelk" => {
            let laws = [
                Structure::of("codup", "codel", "dup", "del").ecfm(),
                Structure::of("add", "zero", "coadd", "cozero").ecfm(),
                Structure::of("add", "zero", "dup", "del").bicommutative_bimonoid(),
                Structure::of("codup", "codel", "coadd", "cozero").bicommutative_bimonoid(),
            ]
            .concat();
            let mut checks = check_laws(&FinRelModel::<Rat>::default(), &prefixed("Q ", laws.clone()))?;
            checks.extend(check_laws(&FinRelModel::<RatFunc>::default(), &prefixed("Q(s) ", laws))?);
            checks
        }
        "fincorel-deg2" => {
            let laws = [one_junction().esfm(), zero_junction().ecfm()].concat();
            check_laws(&BondGModel::default(), &laws)?
        }
        "lagrel-deg2" => {
            let g = gen;
            let mut laws = [
                one_junction().ecfm(),
                zero_junction().ecfm(),
                Structure::of("0j", "0u", "1d", "1e").bicommutative_bimonoid(),
                Structure::of("1j", "1u", "0d", "0e").bicommutative_bimonoid(),
            ]
            .concat();
            laws.push(Law::new(
                "inverse (1d;0j then 0d;1j)",
                seq([g("1d"), g("0j"), g("0d"), g("1j")]),
                id(1),
            ));
            laws.push(Law::new(
                "inverse (0d;1j then 1d;0j)",
                seq([g("0d"), g("1j"), g("1d"), g("0j")]),
                id(1),
            ));
            check_laws(&BondFModel::<Rat>::default(), &laws)?
        }
        "bondgraph-f" => check_laws(&BondFModel::<Rat>::default(), &bond_graph_laws(false))?,
        "bondgraph-g" => check_laws(&BondGModel::default(), &bond_graph_laws(true))?,
        "alpha" => alpha_suite(100, 4, 0xa1fa)?,
        "square" => square_suite(200, 5, 0x5a0a)?,
        other => return Err(SuiteError::Unknown(other.to_string())),
    };
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(checks)
}

fn pass(id: String, holds: bool, expected: bool, detail: Option<String>) -> LawCheck {
    LawCheck {
        id,
        holds,
        expected,
        detail: if holds { None } else { detail },
    }
}

/// Terms over the bond graph signature for naturality checks.
pub fn bond_sampler() -> TermSampler {
    let mut s = TermSampler::new(&bond_signature());
    s.max_width = 3;
    s
}

/// Circuit terms with passive labels for the commuting square.
pub fn circuit_sampler() -> TermSampler {
    let mut s = TermSampler::new(&circuit_signature()).with_family_arg(|_, r| label_literal(r, LabelPool::Passive));
    s.max_width = 3;
    s
}

pub fn alpha_suite(random_terms: usize, depth: usize, seed: u64) -> Result<Vec<LawCheck>, SuiteError> {
    type Q = Rat;
    let mut out = Vec::new();
    for n in 0..=4 {
        let a = bondgraph::alpha::<Q>(n);
        let round = a.compose(&a.dagger()).expect("shapes agree");
        let target = crate::linrel::LinRel::identity(2 * n);
        let holds = round.equals(&target);
        let detail = describe_difference(&round, &target, VarStyle::Plain);
        out.push(pass(format!("alpha-dagger n={n}"), holds, true, detail));
    }
    let mut fixed: Vec<(String, PropTerm)> = GENERATORS.iter().map(|g| (g.to_string(), gen(g))).collect();
    fixed.push(("sym(1,1)".into(), sym(1, 1)));
    fixed.push(("id(1)".into(), id(1)));
    let mut r = rng(seed);
    let sampler = bond_sampler();
    let mut terms = fixed.clone();
    for i in 0..random_terms {
        terms.push((format!("random #{i:03}"), sampler.sample_any(&mut r, 3, depth)));
    }
    for (label, t) in &terms {
        let (lhs, rhs) = bondgraph::naturality_sides::<Q>(t)?;
        let holds = lhs.equals(&rhs);
        let detail = describe_difference(&lhs, &rhs, VarStyle::Bond).map(|d| format!("{t}: {d}"));
        out.push(pass(format!("naturality {label}"), holds, true, detail));
    }
    for g in GENERATORS {
        let t = gen(g);
        let absorbs = bondgraph::check_absorption::<Q>(&t)?;
        out.push(pass(format!("absorption {g}"), absorbs, !matches!(g, "1d" | "0d"), None));
        let coabsorbs = bondgraph::check_coabsorption::<Q>(&t)?;
        out.push(pass(format!("coabsorption {g}"), coabsorbs, !matches!(g, "1j" | "0j"), None));
    }
    Ok(out)
}

pub fn square_suite(random_terms: usize, depth: usize, seed: u64) -> Result<Vec<LawCheck>, SuiteError> {
    let mut terms: Vec<(String, PropTerm)> = ["m", "i", "d", "e"].iter().map(|g| (g.to_string(), gen(g))).collect();
    terms.push((
        "label".into(),
        PropTerm::Gen(Generator::family("label", "resistor:2")),
    ));
    let mut r = rng(seed);
    let sampler = circuit_sampler();
    for i in 0..random_terms {
        terms.push((format!("random #{i:03}"), sampler.sample_any(&mut r, 3, depth)));
    }
    let mut out = Vec::new();
    for (label, t) in &terms {
        let (a, b) = sigflow::square_sides::<RatFunc>(t).map_err(SuiteError::Other)?;
        let holds = a.equals(&b);
        let detail = describe_difference(&a, &b, VarStyle::Circuit).map(|d| format!("{t}: {d}"));
        out.push(pass(format!("square {label}"), holds, true, detail));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_suite(name: &str) -> Vec<LawCheck> {
        let checks = run_suite(name).unwrap();
        for c in &checks {
            assert!(c.as_expected(), "{name}: {}", c.line());
        }
        checks
    }

    #[test]
    fn frobenius_suites() {
        let checks = assert_suite("fincorel");
        assert!(checks.iter().all(|c| c.holds));
        let checks = assert_suite("fincospan");
        let extra = checks.iter().find(|c| c.id.ends_with("extra")).unwrap();
        assert!(!extra.holds);
        assert!(extra.detail.as_deref().unwrap().contains("1 vs 0"));
    }

    #[test]
    fn set_and_linear_suites() {
        assert_suite("finrel-set");
        assert_suite("finrelk");
    }

    #[test]
    fn degree_two_suites() {
        assert_suite("fincorel-deg2");
        assert_suite("lagrel-deg2");
    }

    #[test]
    fn bond_graph_suites() {
        let f = assert_suite("bondgraph-f");
        let g = assert_suite("bondgraph-g");
        let disc = |cs: &[LawCheck]| cs.iter().find(|c| c.id.starts_with("discriminator")).unwrap().holds;
        assert!(!disc(&f));
        assert!(disc(&g));
    }

    #[test]
    fn small_alpha_and_square() {
        for c in alpha_suite(0, 3, 1).unwrap() {
            assert!(c.as_expected(), "{}", c.line());
        }
        for c in square_suite(10, 3, 1).unwrap() {
            assert!(c.as_expected(), "{}", c.line());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope"), Err(SuiteError::Unknown(_))));
    }

    #[test]
    fn law_lines() {
        let c = LawCheck {
            id: "x".into(),
            holds: false,
            expected: false,
            detail: None,
        };
        assert_eq!(c.line(), "FAIL x (expected)");
    }
}
