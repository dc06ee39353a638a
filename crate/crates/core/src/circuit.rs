//! Labeled circuits: graphs with input and output legs, composed by pushout.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, Rat, RatFunc, ScalarError};
use crate::setprops::{Corelation, Cospan, Dsu};
use crate::term::{gen, id, par, permutation_term, seq, Generator, PropModel, PropTerm, Signature, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("interface mismatch: {left} outputs against {right} inputs")]
    InterfaceMismatch { left: usize, right: usize },
    #[error("node index {index} out of range for {nodes} nodes")]
    BadNode { index: usize, nodes: usize },
    #[error("bad edge label: {0}")]
    BadLabel(String),
    #[error("bad circuit file: {0}")]
    Format(String),
}

impl From<ScalarError> for CircuitError {
    fn from(e: ScalarError) -> Self {
        CircuitError::BadLabel(e.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum EdgeLabel {
    Wire,
    Impedance(RatFunc),
    Resistor(Rat),
    Inductor(Rat),
    Capacitor(Rat),
    VoltageSource(RatFunc),
    CurrentSource(RatFunc),
}

impl EdgeLabel {
    pub fn kind(&self) -> &'static str {
        match self {
            EdgeLabel::Wire => "wire",
            EdgeLabel::Impedance(_) => "impedance",
            EdgeLabel::Resistor(_) => "resistor",
            EdgeLabel::Inductor(_) => "inductor",
            EdgeLabel::Capacitor(_) => "capacitor",
            EdgeLabel::VoltageSource(_) => "vsource",
            EdgeLabel::CurrentSource(_) => "isource",
        }
    }

    pub fn value_literal(&self) -> Option<String> {
        match self {
            EdgeLabel::Wire => None,
            EdgeLabel::Resistor(r) | EdgeLabel::Inductor(r) | EdgeLabel::Capacitor(r) => {
                Some(r.to_string())
            }
            EdgeLabel::Impedance(z) | EdgeLabel::VoltageSource(z) | EdgeLabel::CurrentSource(z) => {
                Some(z.to_string())
            }
        }
    }

    pub fn from_parts(kind: &str, value: Option<&str>) -> Result<EdgeLabel, CircuitError> {
        let need = || value.ok_or_else(|| CircuitError::BadLabel(format!("{kind} needs a value")));
        let positive = |v: &str| -> Result<Rat, CircuitError> {
            let r = Rat::parse_literal(v)?;
            if r.is_negative() || r.is_zero() {
                return Err(CircuitError::BadLabel(format!("{kind} value must be positive, got {r}")));
            }
            Ok(r)
        };
        Ok(match kind {
            "wire" => EdgeLabel::Wire,
            "impedance" => EdgeLabel::Impedance(RatFunc::parse_literal(need()?)?),
            "resistor" => EdgeLabel::Resistor(positive(need()?)?),
            "inductor" => EdgeLabel::Inductor(positive(need()?)?),
            "capacitor" => EdgeLabel::Capacitor(positive(need()?)?),
            "vsource" => EdgeLabel::VoltageSource(RatFunc::parse_literal(need()?)?),
            "isource" => EdgeLabel::CurrentSource(RatFunc::parse_literal(need()?)?),
            other => return Err(CircuitError::BadLabel(format!("unknown label kind '{other}'"))),
        })
    }

    pub fn is_source(&self) -> bool {
        matches!(self, EdgeLabel::VoltageSource(_) | EdgeLabel::CurrentSource(_))
    }

    /// The impedance of a passive two-terminal label, as an element of ℚ(s).
    pub fn impedance(&self) -> Option<RatFunc> {
        Some(match self {
            EdgeLabel::Wire => RatFunc::zero(),
            EdgeLabel::Impedance(z) => z.clone(),
            EdgeLabel::Resistor(r) => RatFunc::from(r.clone()),
            EdgeLabel::Inductor(l) => RatFunc::s() * RatFunc::from(l.clone()),
            EdgeLabel::Capacitor(c) => {
                Field::inv(&(RatFunc::s() * RatFunc::from(c.clone()))).expect("capacitance is positive")
            }
            EdgeLabel::VoltageSource(_) | EdgeLabel::CurrentSource(_) => return None,
        })
    }

    fn sort_key(&self) -> (&'static str, String) {
        (self.kind(), self.value_literal().unwrap_or_default())
    }
}

/// `kind:value`, or `wire`; a bare scalar literal means an impedance.
impl FromStr for EdgeLabel {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<EdgeLabel, CircuitError> {
        let s = s.trim();
        match s.split_once(':') {
            Some((kind, value)) => EdgeLabel::from_parts(kind.trim(), Some(value.trim())),
            None if s == "wire" => Ok(EdgeLabel::Wire),
            None => EdgeLabel::from_parts("impedance", Some(s)),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value_literal() {
            None => write!(f, "{}", self.kind()),
            Some(v) => write!(f, "{}:{}", self.kind(), v),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    pub src: usize,
    pub tgt: usize,
    pub label: EdgeLabel,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LGraph {
    pub node_count: usize,
    pub edges: Vec<Edge>,
}

/// A cospan of an L-graph: legs `inputs: [m] → N` and `outputs: [n] → N`.
/// Legs need not be injective.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LCircuit {
    graph: LGraph,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl LCircuit {
    pub fn new(
        node_count: usize,
        edges: Vec<Edge>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    ) -> Result<Self, CircuitError> {
        let check = |index: usize| {
            if index < node_count {
                Ok(())
            } else {
                Err(CircuitError::BadNode {
                    index,
                    nodes: node_count,
                })
            }
        };
        for e in &edges {
            check(e.src)?;
            check(e.tgt)?;
        }
        for &v in inputs.iter().chain(&outputs) {
            check(v)?;
        }
        Ok(LCircuit {
            graph: LGraph { node_count, edges },
            inputs,
            outputs,
        })
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.graph.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn dom(&self) -> usize {
        self.inputs.len()
    }

    pub fn cod(&self) -> usize {
        self.outputs.len()
    }

    pub fn has_sources(&self) -> bool {
        self.graph.edges.iter().any(|e| e.label.is_source())
    }

    pub fn identity(n: usize) -> Self {
        LCircuit::new(n, vec![], (0..n).collect(), (0..n).collect()).unwrap()
    }

    pub fn symmetry(a: usize, b: usize) -> Self {
        let outputs = (a..a + b).chain(0..a).collect();
        LCircuit::new(a + b, vec![], (0..a + b).collect(), outputs).unwrap()
    }

    /// An edgeless circuit on one node with the given leg counts.
    pub fn spider(m: usize, n: usize) -> Self {
        LCircuit::new(1, vec![], vec![0; m], vec![0; n]).unwrap()
    }

    /// One labeled edge from the input node to the output node.
    pub fn single_edge(label: EdgeLabel) -> Self {
        LCircuit::new(2, vec![Edge { src: 0, tgt: 1, label }], vec![0], vec![1]).unwrap()
    }

    /// Pushout composition: identify `self.outputs[k]` with `g.inputs[k]`.
    pub fn compose(&self, g: &LCircuit) -> Result<LCircuit, CircuitError> {
        if self.cod() != g.dom() {
            return Err(CircuitError::InterfaceMismatch {
                left: self.cod(),
                right: g.dom(),
            });
        }
        let off = self.node_count();
        let total = off + g.node_count();
        let mut dsu = Dsu::new(total);
        for (&o, &i) in self.outputs.iter().zip(&g.inputs) {
            dsu.union(o, off + i);
        }
        let mut class = BTreeMap::new();
        let mut map = vec![0; total];
        for (v, slot) in map.iter_mut().enumerate() {
            let r = dsu.find(v);
            let next = class.len();
            *slot = *class.entry(r).or_insert(next);
        }
        let edges = self
            .edges()
            .iter()
            .map(|e| Edge {
                src: map[e.src],
                tgt: map[e.tgt],
                label: e.label.clone(),
            })
            .chain(g.edges().iter().map(|e| Edge {
                src: map[off + e.src],
                tgt: map[off + e.tgt],
                label: e.label.clone(),
            }))
            .collect();
        let inputs = self.inputs.iter().map(|&v| map[v]).collect();
        let outputs = g.outputs.iter().map(|&v| map[off + v]).collect();
        Ok(LCircuit::new(class.len(), edges, inputs, outputs)?.canonical())
    }

    /// Disjoint union; `g`'s nodes are offset past `self`'s.
    pub fn tensor(&self, g: &LCircuit) -> LCircuit {
        let off = self.node_count();
        let edges = self
            .edges()
            .iter()
            .cloned()
            .chain(g.edges().iter().map(|e| Edge {
                src: e.src + off,
                tgt: e.tgt + off,
                label: e.label.clone(),
            }))
            .collect();
        let inputs = self.inputs.iter().copied().chain(g.inputs.iter().map(|v| v + off)).collect();
        let outputs = self.outputs.iter().copied().chain(g.outputs.iter().map(|v| v + off)).collect();
        LCircuit::new(off + g.node_count(), edges, inputs, outputs).unwrap()
    }

    /// Renumbers nodes by first occurrence: inputs, outputs, edge endpoints,
    /// then untouched nodes.
    pub fn canonical(&self) -> LCircuit {
        let n = self.node_count();
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        let mut visit = |v: usize, map: &mut Vec<usize>| {
            if map[v] == usize::MAX {
                map[v] = next;
                next += 1;
            }
        };
        for &v in self.inputs.iter().chain(&self.outputs) {
            visit(v, &mut map);
        }
        for e in self.edges() {
            visit(e.src, &mut map);
            visit(e.tgt, &mut map);
        }
        for v in 0..n {
            visit(v, &mut map);
        }
        LCircuit {
            graph: LGraph {
                node_count: n,
                edges: self
                    .edges()
                    .iter()
                    .map(|e| Edge {
                        src: map[e.src],
                        tgt: map[e.tgt],
                        label: e.label.clone(),
                    })
                    .collect(),
            },
            inputs: self.inputs.iter().map(|&v| map[v]).collect(),
            outputs: self.outputs.iter().map(|&v| map[v]).collect(),
        }
    }

    /// Equality of isomorphism classes: a bijection of nodes that fixes the
    /// legs and carries the edge multiset onto the other's.
    pub fn iso_eq(&self, other: &LCircuit) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        if a == b {
            return true;
        }
        if a.node_count() != b.node_count()
            || a.edges().len() != b.edges().len()
            || a.inputs != b.inputs
            || a.outputs != b.outputs
        {
            // Canonical numbering makes the legs literally equal in any iso.
            return false;
        }
        let mut sorted_b: Vec<_> = b.edges().iter().map(|e| (e.src, e.tgt, e.label.sort_key())).collect();
        sorted_b.sort();
        let fixed = a.inputs.iter().chain(&a.outputs).copied().max().map_or(0, |v| v + 1);
        let n = a.node_count();
        let mut map: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        used[..fixed].iter_mut().for_each(|u| *u = true);
        let signature = |c: &LCircuit, v: usize| {
            let mut s: Vec<_> = c
                .edges()
                .iter()
                .flat_map(|e| {
                    let mut out = Vec::new();
                    if e.src == v {
                        out.push((0u8, e.label.sort_key()));
                    }
                    if e.tgt == v {
                        out.push((1u8, e.label.sort_key()));
                    }
                    out
                })
                .collect();
            s.sort();
            s
        };
        let sig_a: Vec<_> = (0..n).map(|v| signature(&a, v)).collect();
        let sig_b: Vec<_> = (0..n).map(|v| signature(&b, v)).collect();
        fn search(
            k: usize,
            n: usize,
            a: &LCircuit,
            sorted_b: &[(usize, usize, (&'static str, String))],
            sig_a: &[Vec<(u8, (&'static str, String))>],
            sig_b: &[Vec<(u8, (&'static str, String))>],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == n {
                let mut mapped: Vec<_> = a
                    .edges()
                    .iter()
                    .map(|e| (map[e.src], map[e.tgt], e.label.sort_key()))
                    .collect();
                mapped.sort();
                return mapped == sorted_b;
            }
            for cand in 0..n {
                if used[cand] || sig_a[k] != sig_b[cand] {
                    continue;
                }
                used[cand] = true;
                map[k] = cand;
                if search(k + 1, n, a, sorted_b, sig_a, sig_b, map, used) {
                    return true;
                }
                used[cand] = false;
            }
            false
        }
        for v in 0..fixed {
            if sig_a[v] != sig_b[v] {
                return false;
            }
        }
        search(fixed, n, &a, &sorted_b, &sig_a, &sig_b, &mut map, &mut used)
    }

    /// The functor H′: terminals partitioned by connected component, plus the
    /// number of components that touch no terminal.
    pub fn pi0_cospan(&self) -> Cospan {
        let n = self.node_count();
        let mut dsu = Dsu::new(n);
        for e in self.edges() {
            dsu.union(e.src, e.tgt);
        }
        let m = self.dom();
        let labels: Vec<usize> = self
            .inputs
            .iter()
            .chain(&self.outputs)
            .map(|&v| dsu.find(v))
            .collect();
        let touched: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
        let components: std::collections::BTreeSet<usize> = (0..n).map(|v| dsu.find(v)).collect();
        let extras = components.difference(&touched).count();
        Cospan::new(Corelation::from_labels(m, self.cod(), &labels), extras)
    }

    /// A generator term over `m, i, d, e` and `(label ...)` whose evaluation in
    /// [`CircuitModel`] is isomorphic to this circuit.
    pub fn to_term(&self) -> PropTerm {
        let n_nodes = self.node_count();
        let n_edges = self.edges().len();
        // Layer 1: inputs → (edge sources, one through-wire per node).
        let layer1: Vec<(Vec<usize>, Vec<usize>)> = (0..n_nodes)
            .map(|v| {
                let ins = (0..self.dom()).filter(|&k| self.inputs[k] == v).collect();
                let mut outs: Vec<usize> = (0..n_edges).filter(|&e| self.edges()[e].src == v).collect();
                outs.push(n_edges + v);
                (ins, outs)
            })
            .collect();
        let middle = par(
            self.edges()
                .iter()
                .map(|e| PropTerm::Gen(Generator::family("label", e.label.to_string())))
                .chain(std::iter::once(id(n_nodes))),
        );
        // Layer 2: (edge targets, through-wires) → outputs.
        let layer2: Vec<(Vec<usize>, Vec<usize>)> = (0..n_nodes)
            .map(|v| {
                let mut ins: Vec<usize> = (0..n_edges).filter(|&e| self.edges()[e].tgt == v).collect();
                ins.push(n_edges + v);
                let outs = (0..self.cod()).filter(|&j| self.outputs[j] == v).collect();
                (ins, outs)
            })
            .collect();
        seq([
            spider_layer(self.dom(), n_edges + n_nodes, &layer1),
            middle,
            spider_layer(n_edges + n_nodes, self.cod(), &layer2),
        ])
    }

    pub fn to_json(&self) -> String {
        let file = CircuitFile {
            nodes: self.node_count(),
            edges: self
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    src: e.src,
                    tgt: e.tgt,
                    label: LabelRecord {
                        kind: e.label.kind().to_string(),
                        value: e.label.value_literal(),
                    },
                })
                .collect(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(src: &str) -> Result<LCircuit, CircuitError> {
        let file: CircuitFile =
            serde_json::from_str(src).map_err(|e| CircuitError::Format(e.to_string()))?;
        let edges = file
            .edges
            .into_iter()
            .map(|e| {
                Ok(Edge {
                    src: e.src,
                    tgt: e.tgt,
                    label: EdgeLabel::from_parts(&e.label.kind, e.label.value.as_deref())?,
                })
            })
            .collect::<Result<Vec<_>, CircuitError>>()?;
        LCircuit::new(file.nodes, edges, file.inputs, file.outputs)
    }
}

/// Merge `a` wires into one, then split into `b`.
pub fn spider_term(a: usize, b: usize) -> PropTerm {
    let merge = match a {
        0 => gen("i"),
        _ => seq(std::iter::once(id(a)).chain((2..=a).rev().map(|k| par([gen("m"), id(k - 2)])))),
    };
    let split = match b {
        0 => gen("e"),
        _ => seq(std::iter::once(id(1)).chain((1..b).map(|k| par([gen("d"), id(k - 1)])))),
    };
    seq([merge, split])
}

// A layer of spiders: spider j consumes wires at positions `ins` and feeds
// positions `outs`.
fn spider_layer(n_in: usize, n_out: usize, spiders: &[(Vec<usize>, Vec<usize>)]) -> PropTerm {
    let mut to_slot = vec![0; n_in];
    let mut slot = 0;
    for (ins, _) in spiders {
        for &p in ins {
            to_slot[p] = slot;
            slot += 1;
        }
    }
    let mut from_slot = vec![0; n_out];
    let mut slot = 0;
    for (_, outs) in spiders {
        for &p in outs {
            from_slot[slot] = p;
            slot += 1;
        }
    }
    seq([
        permutation_term(&to_slot),
        par(spiders.iter().map(|(i, o)| spider_term(i.len(), o.len()))),
        permutation_term(&from_slot),
    ])
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    nodes: usize,
    edges: Vec<EdgeRecord>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    src: usize,
    tgt: usize,
    label: LabelRecord,
}

#[derive(Serialize, Deserialize)]
struct LabelRecord {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

/// Generators `m, i, d, e` plus the `(label LIT)` family, all with the arity
/// of their circuit: `m: 2→1`, `i: 0→1`, `d: 1→2`, `e: 1→0`, labels `1→1`.
pub fn circuit_signature() -> Signature {
    Signature::new()
        .with("m", 2, 1)
        .with("i", 0, 1)
        .with("d", 1, 2)
        .with("e", 1, 0)
        .with_family("label", 1, 1)
}

pub fn parse_label_generator(g: &Generator) -> Result<EdgeLabel, TermError> {
    let lit = g.arg.as_deref().unwrap_or_default();
    lit.parse().map_err(|e: CircuitError| TermError::BadArgument {
        generator: g.to_string(),
        msg: e.to_string(),
    })
}

/// Terms over [`circuit_signature`] evaluated to concrete circuits.
#[derive(Debug, Clone)]
pub struct CircuitModel {
    sig: Signature,
}

impl Default for CircuitModel {
    fn default() -> Self {
        CircuitModel {
            sig: circuit_signature(),
        }
    }
}

impl PropModel for CircuitModel {
    type Value = LCircuit;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<LCircuit, TermError> {
        match (g.name.as_str(), &g.arg) {
            ("m", None) => Ok(LCircuit::spider(2, 1)),
            ("i", None) => Ok(LCircuit::spider(0, 1)),
            ("d", None) => Ok(LCircuit::spider(1, 2)),
            ("e", None) => Ok(LCircuit::spider(1, 0)),
            ("label", Some(_)) => Ok(LCircuit::single_edge(parse_label_generator(g)?)),
            _ => Err(TermError::UnknownGenerator(g.to_string())),
        }
    }

    fn identity(&self, n: usize) -> LCircuit {
        LCircuit::identity(n)
    }

    fn symmetry(&self, m: usize, n: usize) -> LCircuit {
        LCircuit::symmetry(m, n)
    }

    fn compose(&self, f: &LCircuit, g: &LCircuit) -> LCircuit {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &LCircuit, g: &LCircuit) -> LCircuit {
        f.tensor(g)
    }

    fn equal(&self, a: &LCircuit, b: &LCircuit) -> bool {
        a.iso_eq(b)
    }
}
