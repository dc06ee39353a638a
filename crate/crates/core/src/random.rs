//! Seeded generators of random terms, circuits and relations for property
//! checks. Everything is reproducible from a `u64` seed.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::afflag::AffRel;
use crate::circuit::{Edge, EdgeLabel, LCircuit};
use crate::exactla::Mat;
use crate::linrel::LinRel;
use crate::scalar::{Field, Poly, Rat, RatFunc};
use crate::setprops::Corelation;
use crate::term::{id, sym, Generator, PropTerm, Signature};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 4`.
pub fn small_rat(r: &mut Rng) -> Rat {
    Rat::new(r.gen_range(-9..=9), r.gen_range(1..=4)).expect("nonzero denominator")
}

pub fn positive_rat(r: &mut Rng) -> Rat {
    Rat::new(r.gen_range(1..=20), r.gen_range(1..=6)).expect("nonzero denominator")
}

pub fn small_poly(r: &mut Rng, max_degree: usize) -> Poly {
    let d = r.gen_range(0..=max_degree);
    Poly::from_coeffs((0..=d).map(|_| small_rat(r)).collect())
}

pub fn small_ratfunc(r: &mut Rng) -> RatFunc {
    let den = loop {
        let p = small_poly(r, 2);
        if !p.is_zero() {
            break p;
        }
    };
    RatFunc::new(small_poly(r, 2), den).expect("nonzero denominator")
}

/// A small element of `F`, involving `s` when the field has it.
pub fn small_scalar<F: Field>(r: &mut Rng) -> F {
    if F::from_ratfunc(&RatFunc::s()).is_some() && r.gen_bool(0.5) {
        F::from_ratfunc(&small_ratfunc(r)).expect("field contains s")
    } else {
        F::from_rat(&small_rat(r))
    }
}

/// Entries drawn from `{-2..2}` with extra weight on zero, so that random
/// matrices have interesting ranks.
pub fn sparse_scalar<F: Field>(r: &mut Rng) -> F {
    if r.gen_bool(0.4) {
        F::zero()
    } else if r.gen_bool(0.8) {
        F::from_i64(r.gen_range(-2..=2))
    } else {
        small_scalar(r)
    }
}

pub fn random_matrix<F: Field>(r: &mut Rng, rows: usize, cols: usize) -> Mat<F> {
    let data = (0..rows * cols).map(|_| sparse_scalar(r)).collect();
    Mat::new(rows, cols, data).expect("sized data")
}

pub fn random_linrel<F: Field>(r: &mut Rng, dom: usize, cod: usize) -> LinRel<F> {
    let k = r.gen_range(0..=dom + cod);
    let vs = (0..k).map(|_| (0..dom + cod).map(|_| sparse_scalar(r)).collect()).collect();
    LinRel::span(dom, cod, vs).expect("sized vectors")
}

/// A random relation through a random point; never empty.
pub fn random_affrel<F: Field>(r: &mut Rng, dom: usize, cod: usize) -> AffRel<F> {
    let l = random_linrel(r, dom, cod);
    let p: Vec<F> = (0..dom + cod).map(|_| sparse_scalar(r)).collect();
    AffRel::translate(&l, &p).expect("sized point")
}

/// A random Lagrangian relation on ports of width 2, built as `K` of a
/// corelation composed with impedances.
pub fn random_lagrangian<F: Field>(r: &mut Rng, ports_in: usize, ports_out: usize) -> LinRel<F> {
    let c = random_corelation(r, ports_in, ports_out);
    let mut rel = crate::linrel::k_corel::<F>(&c);
    for _ in 0..ports_out {
        let z = crate::linrel::impedance_rel(small_scalar::<F>(r));
        let k = r.gen_range(0..ports_out);
        let layer = LinRel::identity(2 * k)
            .tensor(&z)
            .tensor(&LinRel::identity(2 * (ports_out - k - 1)));
        rel = rel.compose(&layer).expect("matching ports");
    }
    rel
}

pub fn random_corelation(r: &mut Rng, m: usize, n: usize) -> Corelation {
    let t = m + n;
    let labels: Vec<usize> = (0..t).map(|_| r.gen_range(0..t.max(1))).collect();
    Corelation::from_labels(m, n, &labels)
}

/// Which labels a random circuit may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPool {
    /// Wires and resistors: constants only.
    Resistive,
    /// All passive labels, including reactive ones that need `s`.
    Passive,
    /// Passive labels plus voltage and current sources.
    WithSources,
}

pub fn random_label(r: &mut Rng, pool: LabelPool) -> EdgeLabel {
    let kinds: &[&str] = match pool {
        LabelPool::Resistive => &["wire", "resistor"],
        LabelPool::Passive => &["wire", "resistor", "inductor", "capacitor", "impedance"],
        LabelPool::WithSources => &["wire", "resistor", "inductor", "capacitor", "vsource", "isource"],
    };
    match *kinds.choose(r).expect("nonempty") {
        "wire" => EdgeLabel::Wire,
        "resistor" => EdgeLabel::Resistor(positive_rat(r)),
        "inductor" => EdgeLabel::Inductor(positive_rat(r)),
        "capacitor" => EdgeLabel::Capacitor(positive_rat(r)),
        "impedance" => EdgeLabel::Impedance(small_ratfunc(r)),
        "vsource" => EdgeLabel::VoltageSource(RatFunc::from(small_rat(r))),
        _ => EdgeLabel::CurrentSource(RatFunc::from(small_rat(r))),
    }
}

pub fn random_circuit(r: &mut Rng, max_nodes: usize, max_edges: usize, pool: LabelPool) -> LCircuit {
    let nodes = r.gen_range(1..=max_nodes);
    let n_edges = r.gen_range(0..=max_edges);
    let edges = (0..n_edges)
        .map(|_| Edge {
            src: r.gen_range(0..nodes),
            tgt: r.gen_range(0..nodes),
            label: random_label(r, pool),
        })
        .collect();
    let legs = |r: &mut Rng| -> Vec<usize> { (0..r.gen_range(0..=3)).map(|_| r.gen_range(0..nodes)).collect() };
    let inputs = legs(r);
    let outputs = legs(r);
    LCircuit::new(nodes, edges, inputs, outputs).expect("indices in range")
}

/// Random well-typed terms over a signature. Leaves are single generators,
/// identities or symmetries, so the depth bound is the nesting of
/// `seq`/`par` nodes.
pub struct TermSampler {
    gens: Vec<(Generator, usize, usize)>,
    families: Vec<(String, usize, usize)>,
    family_arg: Box<dyn Fn(&str, &mut Rng) -> String>,
    pub max_width: usize,
}

impl TermSampler {
    pub fn new(sig: &Signature) -> Self {
        TermSampler {
            gens: sig.generators().map(|(n, (a, b))| (Generator::named(n), a, b)).collect(),
            families: sig.families().map(|(n, (a, b))| (n.to_string(), a, b)).collect(),
            family_arg: Box::new(|_, _| String::new()),
            max_width: 4,
        }
    }

    /// Supplies the literal for each sampled member of a generator family.
    pub fn with_family_arg(mut self, f: impl Fn(&str, &mut Rng) -> String + 'static) -> Self {
        self.family_arg = Box::new(f);
        self
    }

    pub fn without_families(mut self) -> Self {
        self.families.clear();
        self
    }

    fn leaf(&self, r: &mut Rng, dom: usize) -> (PropTerm, usize) {
        let mut options: Vec<(PropTerm, usize)> = vec![(id(dom), dom)];
        for (g, a, b) in &self.gens {
            if *a == dom && *b <= self.max_width {
                options.push((PropTerm::Gen(g.clone()), *b));
                options.push((PropTerm::Gen(g.clone()), *b));
            }
        }
        for (name, a, b) in &self.families {
            if *a == dom && *b <= self.max_width {
                let arg = (self.family_arg)(name, r);
                options.push((PropTerm::Gen(Generator::family(name.clone(), arg)), *b));
            }
        }
        for a in 1..dom {
            options.push((sym(a, dom - a), dom));
        }
        options.swap_remove(r.gen_range(0..options.len()))
    }

    /// A term with domain `dom` and nesting depth at most `depth`, with its codomain.
    pub fn sample(&self, r: &mut Rng, dom: usize, depth: usize) -> (PropTerm, usize) {
        if depth == 0 || r.gen_bool(0.25) {
            return self.leaf(r, dom);
        }
        if r.gen_bool(0.5) {
            let (f, c) = self.sample(r, dom, depth - 1);
            let (g, c2) = self.sample(r, c, depth - 1);
            (f.then(g), c2)
        } else {
            let a = r.gen_range(0..=dom);
            let (f, c1) = self.sample(r, a, depth - 1);
            let (g, c2) = self.sample(r, dom - a, depth - 1);
            if c1 + c2 > self.max_width {
                return self.leaf(r, dom);
            }
            (f.beside(g), c1 + c2)
        }
    }

    /// A term with random domain in `0..=max_dom`.
    pub fn sample_any(&self, r: &mut Rng, max_dom: usize, depth: usize) -> PropTerm {
        let dom = r.gen_range(0..=max_dom);
        self.sample(r, dom, depth).0
    }
}

/// Literal for a `(label ...)` generator from the given pool.
pub fn label_literal(r: &mut Rng, pool: LabelPool) -> String {
    random_label(r, pool).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_signature;

    #[test]
    fn sampled_terms_are_well_typed_and_shallow() {
        let sig = circuit_signature();
        let s = TermSampler::new(&sig).with_family_arg(|_, r| label_literal(r, LabelPool::Passive));
        let mut r = rng(7);
        for _ in 0..200 {
            let dom = r.gen_range(0..=3);
            let (t, cod) = s.sample(&mut r, dom, 5);
            assert_eq!(t.arity(&sig).unwrap(), (dom, cod));
            assert!(t.depth() <= 5);
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_circuit(&mut rng(3), 6, 8, LabelPool::Passive);
        let b = random_circuit(&mut rng(3), 6, 8, LabelPool::Passive);
        assert_eq!(a, b);
    }

    #[test]
    fn random_lagrangians_are_lagrangian() {
        let mut r = rng(11);
        for _ in 0..20 {
            let l = random_lagrangian::<Rat>(&mut r, 2, 2);
            assert!(l.is_lagrangian().unwrap());
        }
    }
}
