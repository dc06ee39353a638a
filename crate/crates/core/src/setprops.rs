//! Set-based props: corelations, cospans up to isomorphism, spans as
//! ℕ-matrices, and relations between finite sets as boolean matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::term::{Generator, PropModel, Signature, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetPropError {
    #[error("interface mismatch: codomain {left} does not match domain {right}")]
    InterfaceMismatch { left: usize, right: usize },
    #[error("not a partition of {0} elements")]
    NotAPartition(usize),
    #[error("bad corelation text: {0}")]
    Parse(String),
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// A partition of the inputs `x1..xm` and outputs `y1..yn`.
///
/// Element `k < m` is input `x(k+1)`; element `m + j` is output `y(j+1)`.
/// Blocks are sorted internally and ordered by least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corelation {
    m: usize,
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Corelation {
    pub fn new(m: usize, n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, SetPropError> {
        let total = m + n;
        let mut seen = vec![false; total];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(SetPropError::NotAPartition(total));
            }
            for &e in b.iter() {
                if e >= total || seen[e] {
                    return Err(SetPropError::NotAPartition(total));
                }
                seen[e] = true;
            }
            b.sort_unstable();
        }
        if seen.iter().any(|s| !s) {
            return Err(SetPropError::NotAPartition(total));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Corelation { m, n, blocks })
    }

    /// Builds a corelation from a block label per element.
    pub fn from_labels(m: usize, n: usize, labels: &[usize]) -> Self {
        assert_eq!(labels.len(), m + n);
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(e);
        }
        Corelation::new(m, n, groups.into_values().collect()).expect("labels define a partition")
    }

    pub fn dom(&self) -> usize {
        self.m
    }

    pub fn cod(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn input(&self, k: usize) -> usize {
        k
    }

    pub fn output(&self, j: usize) -> usize {
        self.m + j
    }

    pub fn block_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.m + self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &e in b {
                labels[e] = i;
            }
        }
        labels
    }

    pub fn identity(n: usize) -> Self {
        Corelation {
            m: n,
            n,
            blocks: (0..n).map(|k| vec![k, n + k]).collect(),
        }
    }

    /// The braiding `a + b → b + a`.
    pub fn symmetry(a: usize, b: usize) -> Self {
        let t = a + b;
        let blocks = (0..t)
            .map(|i| {
                let out = if i < a { b + i } else { i - a };
                vec![i, t + out]
            })
            .collect();
        Corelation::new(t, t, blocks).expect("braiding is a partition")
    }

    /// Multiplication `2 → 1`.
    pub fn mult() -> Self {
        Corelation::new(2, 1, vec![vec![0, 1, 2]]).unwrap()
    }

    /// Unit `0 → 1`.
    pub fn unit() -> Self {
        Corelation::new(0, 1, vec![vec![0]]).unwrap()
    }

    /// Comultiplication `1 → 2`.
    pub fn comult() -> Self {
        Corelation::new(1, 2, vec![vec![0, 1, 2]]).unwrap()
    }

    /// Counit `1 → 0`.
    pub fn counit() -> Self {
        Corelation::new(1, 0, vec![vec![0]]).unwrap()
    }

    /// Composite (self then g), together with the number of blocks that
    /// contained only middle elements.
    pub fn compose_counting(&self, g: &Corelation) -> Result<(Corelation, usize), SetPropError> {
        if self.n != g.m {
            return Err(SetPropError::InterfaceMismatch {
                left: self.n,
                right: g.m,
            });
        }
        let (m, n, p) = (self.m, self.n, g.n);
        // Universe: x (0..m), y (m..m+n), z (m+n..m+n+p).
        let mut dsu = Dsu::new(m + n + p);
        for b in &self.blocks {
            for w in b.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        let shift_g = |e: usize| m + e;
        for b in &g.blocks {
            for w in b.windows(2) {
                dsu.union(shift_g(w[0]), shift_g(w[1]));
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..m {
            groups.entry(dsu.find(x)).or_default().push(x);
        }
        for z in 0..p {
            groups.entry(dsu.find(m + n + z)).or_default().push(m + z);
        }
        let mut middle_only = std::collections::BTreeSet::new();
        for y in m..m + n {
            let r = dsu.find(y);
            if !groups.contains_key(&r) {
                middle_only.insert(r);
            }
        }
        let c = Corelation::new(m, p, groups.into_values().collect()).expect("partition");
        Ok((c, middle_only.len()))
    }

    pub fn compose(&self, g: &Corelation) -> Result<Corelation, SetPropError> {
        Ok(self.compose_counting(g)?.0)
    }

    pub fn tensor(&self, g: &Corelation) -> Corelation {
        let (a, b, c, d) = (self.m, self.n, g.m, g.n);
        let mf = |e: usize| if e < a { e } else { a + c + (e - a) };
        let mg = |e: usize| if e < c { a + e } else { a + c + b + (e - c) };
        let blocks = self
            .blocks
            .iter()
            .map(|bl| bl.iter().map(|&e| mf(e)).collect())
            .chain(g.blocks.iter().map(|bl| bl.iter().map(|&e| mg(e)).collect()))
            .collect();
        Corelation::new(a + c, b + d, blocks).expect("partition")
    }

    /// Swaps the roles of inputs and outputs.
    pub fn dagger(&self) -> Corelation {
        let (m, n) = (self.m, self.n);
        let blocks = self
            .blocks
            .iter()
            .map(|bl| {
                bl.iter()
                    .map(|&e| if e < m { n + e } else { e - m })
                    .collect()
            })
            .collect();
        Corelation::new(n, m, blocks).expect("partition")
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.blocks.iter().any(|bl| bl.contains(&a) && bl.contains(&b))
    }

    /// Every corelation `m → n`, enumerated by restricted growth strings.
    pub fn all(m: usize, n: usize) -> Vec<Corelation> {
        let total = m + n;
        let mut out = Vec::new();
        let mut labels = vec![0usize; total];
        fn rec(k: usize, max: usize, labels: &mut Vec<usize>, m: usize, n: usize, out: &mut Vec<Corelation>) {
            if k == labels.len() {
                out.push(Corelation::from_labels(m, n, labels));
                return;
            }
            for l in 0..=max {
                labels[k] = l;
                rec(k + 1, max.max(l + 1), labels, m, n, out);
            }
        }
        if total == 0 {
            return vec![Corelation::identity(0)];
        }
        rec(1, 1, &mut labels, m, n, &mut out);
        out
    }

    fn element_name(&self, e: usize) -> String {
        if e < self.m {
            format!("x{}", e + 1)
        } else {
            format!("y{}", e - self.m + 1)
        }
    }
}

impl fmt::Display for Corelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "corel {} {} {{", self.m, self.n)?;
        for b in &self.blocks {
            let names: Vec<String> = b.iter().map(|&e| self.element_name(e)).collect();
            write!(f, " {{{}}}", names.join(" "))?;
        }
        write!(f, " }}")
    }
}

impl fmt::Debug for Corelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Corelation {
    type Err = SetPropError;

    fn from_str(s: &str) -> Result<Self, SetPropError> {
        let bad = |msg: &str| SetPropError::Parse(msg.to_string());
        let spaced = s.replace('{', " { ").replace('}', " } ");
        let toks: Vec<&str> = spaced.split_whitespace().collect();
        if toks.len() < 5 || toks[0] != "corel" || toks[3] != "{" || toks[toks.len() - 1] != "}" {
            return Err(bad("expected `corel M N { ... }`"));
        }
        let m: usize = toks[1].parse().map_err(|_| bad("bad input count"))?;
        let n: usize = toks[2].parse().map_err(|_| bad("bad output count"))?;
        let mut blocks = Vec::new();
        let mut cur: Option<Vec<usize>> = None;
        for &t in &toks[4..toks.len() - 1] {
            match (t, cur.as_mut()) {
                ("{", None) => cur = Some(Vec::new()),
                ("}", Some(_)) => blocks.push(cur.take().unwrap()),
                (name, Some(b)) => {
                    let (side, idx) = name.split_at(1);
                    let k: usize = idx.parse().map_err(|_| bad("bad element name"))?;
                    let e = match (side, k) {
                        ("x", k) if k >= 1 && k <= m => k - 1,
                        ("y", k) if k >= 1 && k <= n => m + k - 1,
                        _ => return Err(bad("element out of range")),
                    };
                    b.push(e);
                }
                _ => return Err(bad("unbalanced braces")),
            }
        }
        if cur.is_some() {
            return Err(bad("unbalanced braces"));
        }
        Corelation::new(m, n, blocks)
    }
}

/// A cospan of finite sets up to isomorphism: the partition of terminals by
/// apex point, plus the number of apex points hit by no terminal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cospan {
    pub partition: Corelation,
    pub extras: usize,
}

impl Cospan {
    pub fn new(partition: Corelation, extras: usize) -> Self {
        Cospan { partition, extras }
    }

    pub fn dom(&self) -> usize {
        self.partition.dom()
    }

    pub fn cod(&self) -> usize {
        self.partition.cod()
    }

    pub fn identity(n: usize) -> Self {
        Cospan::new(Corelation::identity(n), 0)
    }

    pub fn compose(&self, g: &Cospan) -> Result<Cospan, SetPropError> {
        let (p, dropped) = self.partition.compose_counting(&g.partition)?;
        Ok(Cospan::new(p, self.extras + g.extras + dropped))
    }

    pub fn tensor(&self, g: &Cospan) -> Cospan {
        Cospan::new(self.partition.tensor(&g.partition), self.extras + g.extras)
    }

    pub fn dagger(&self) -> Cospan {
        Cospan::new(self.partition.dagger(), self.extras)
    }

    /// The functor H: restrict the apex to the joint image.
    pub fn to_corelation(&self) -> Corelation {
        self.partition.clone()
    }
}

impl fmt::Display for Cospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cospan {} extras {}", self.partition, self.extras)
    }
}

/// A span of finite sets up to isomorphism, as an `n × m` matrix of counts:
/// `entry(j, i)` apex points lie over `(x_i, y_j)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NatSpan {
    m: usize,
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl NatSpan {
    pub fn new(m: usize, n: usize, rows: Vec<Vec<u64>>) -> Self {
        assert_eq!(rows.len(), n);
        assert!(rows.iter().all(|r| r.len() == m));
        NatSpan { m, n, rows }
    }

    pub fn dom(&self) -> usize {
        self.m
    }

    pub fn cod(&self) -> usize {
        self.n
    }

    pub fn entry(&self, j: usize, i: usize) -> u64 {
        self.rows[j][i]
    }

    pub fn identity(n: usize) -> Self {
        NatSpan::new(
            n,
            n,
            (0..n).map(|j| (0..n).map(|i| u64::from(i == j)).collect()).collect(),
        )
    }

    pub fn symmetry(a: usize, b: usize) -> Self {
        let t = a + b;
        let mut rows = vec![vec![0; t]; t];
        for i in 0..t {
            let out = if i < a { b + i } else { i - a };
            rows[out][i] = 1;
        }
        NatSpan::new(t, t, rows)
    }

    /// Pullback composition (self then g) as the matrix product `g · self`.
    pub fn compose(&self, g: &NatSpan) -> Result<NatSpan, SetPropError> {
        if self.n != g.m {
            return Err(SetPropError::InterfaceMismatch {
                left: self.n,
                right: g.m,
            });
        }
        let rows = (0..g.n)
            .map(|k| {
                (0..self.m)
                    .map(|i| (0..self.n).map(|j| g.rows[k][j] * self.rows[j][i]).sum())
                    .collect()
            })
            .collect();
        Ok(NatSpan::new(self.m, g.n, rows))
    }

    pub fn tensor(&self, g: &NatSpan) -> NatSpan {
        let (m, n) = (self.m + g.m, self.n + g.n);
        let mut rows = vec![vec![0; m]; n];
        for j in 0..self.n {
            rows[j][..self.m].copy_from_slice(&self.rows[j]);
        }
        for j in 0..g.n {
            rows[self.n + j][self.m..].copy_from_slice(&g.rows[j]);
        }
        NatSpan::new(m, n, rows)
    }

    pub fn dagger(&self) -> NatSpan {
        NatSpan::new(
            self.n,
            self.m,
            (0..self.m).map(|i| (0..self.n).map(|j| self.rows[j][i]).collect()).collect(),
        )
    }

    /// The functor M: the jointly monic part of the span.
    pub fn support(&self) -> BoolRel {
        BoolRel::new(
            self.m,
            self.n,
            self.rows.iter().map(|r| r.iter().map(|&c| c > 0).collect()).collect(),
        )
    }
}

impl fmt::Display for NatSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span {} -> {}", self.m, self.n)?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "\n[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A relation between finite sets as an `n × m` boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoolRel {
    m: usize,
    n: usize,
    rows: Vec<Vec<bool>>,
}

impl BoolRel {
    pub fn new(m: usize, n: usize, rows: Vec<Vec<bool>>) -> Self {
        assert_eq!(rows.len(), n);
        assert!(rows.iter().all(|r| r.len() == m));
        BoolRel { m, n, rows }
    }

    pub fn dom(&self) -> usize {
        self.m
    }

    pub fn cod(&self) -> usize {
        self.n
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rows[j][i]
    }

    pub fn identity(n: usize) -> Self {
        NatSpan::identity(n).support()
    }

    pub fn symmetry(a: usize, b: usize) -> Self {
        NatSpan::symmetry(a, b).support()
    }

    pub fn compose(&self, g: &BoolRel) -> Result<BoolRel, SetPropError> {
        if self.n != g.m {
            return Err(SetPropError::InterfaceMismatch {
                left: self.n,
                right: g.m,
            });
        }
        let rows = (0..g.n)
            .map(|k| {
                (0..self.m)
                    .map(|i| (0..self.n).any(|j| g.rows[k][j] && self.rows[j][i]))
                    .collect()
            })
            .collect();
        Ok(BoolRel::new(self.m, g.n, rows))
    }

    pub fn tensor(&self, g: &BoolRel) -> BoolRel {
        let (m, n) = (self.m + g.m, self.n + g.n);
        let mut rows = vec![vec![false; m]; n];
        for j in 0..self.n {
            rows[j][..self.m].copy_from_slice(&self.rows[j]);
        }
        for j in 0..g.n {
            rows[self.n + j][self.m..].copy_from_slice(&g.rows[j]);
        }
        BoolRel::new(m, n, rows)
    }
}

/// Lists related pairs as `i~j`, inputs and outputs numbered from 1.
impl fmt::Display for BoolRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..self.m)
            .flat_map(|i| (0..self.n).filter(move |&j| self.related(i, j)).map(move |j| format!("{}~{}", i + 1, j + 1)))
            .collect();
        write!(f, "rel {} -> {} {{{}}}", self.m, self.n, pairs.join(", "))
    }
}

fn frobenius_signature() -> Signature {
    Signature::new()
        .with("m", 2, 1)
        .with("i", 0, 1)
        .with("d", 1, 2)
        .with("e", 1, 0)
}

fn bimonoid_signature() -> Signature {
    Signature::new()
        .with("m'", 2, 1)
        .with("i'", 0, 1)
        .with("d'", 1, 2)
        .with("e'", 1, 0)
}

/// FinCorel with generators `m, i, d, e`.
#[derive(Debug, Clone)]
pub struct CorelModel {
    sig: Signature,
}

impl Default for CorelModel {
    fn default() -> Self {
        CorelModel {
            sig: frobenius_signature(),
        }
    }
}

impl PropModel for CorelModel {
    type Value = Corelation;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<Corelation, TermError> {
        match g.name.as_str() {
            "m" => Ok(Corelation::mult()),
            "i" => Ok(Corelation::unit()),
            "d" => Ok(Corelation::comult()),
            "e" => Ok(Corelation::counit()),
            _ => Err(TermError::UnknownGenerator(g.to_string())),
        }
    }

    fn identity(&self, n: usize) -> Corelation {
        Corelation::identity(n)
    }

    fn symmetry(&self, m: usize, n: usize) -> Corelation {
        Corelation::symmetry(m, n)
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

    fn distinguish(&self, a: &Corelation, b: &Corelation) -> Option<String> {
        distinguish_corelations(a, b)
    }
}

fn distinguish_corelations(a: &Corelation, b: &Corelation) -> Option<String> {
    if (a.dom(), a.cod()) != (b.dom(), b.cod()) {
        return Some(format!(
            "types differ: {}→{} vs {}→{}",
            a.dom(),
            a.cod(),
            b.dom(),
            b.cod()
        ));
    }
    let t = a.dom() + a.cod();
    for x in 0..t {
        for y in x + 1..t {
            if a.same_block(x, y) != b.same_block(x, y) {
                let (ix, iy) = (a.element_name(x), a.element_name(y));
                let verdict = if a.same_block(x, y) {
                    "connected in the first only"
                } else {
                    "connected in the second only"
                };
                return Some(format!("{ix} and {iy} are {verdict}"));
            }
        }
    }
    None
}

/// FinCospan with generators `m, i, d, e`.
#[derive(Debug, Clone)]
pub struct CospanModel {
    sig: Signature,
}

impl Default for CospanModel {
    fn default() -> Self {
        CospanModel {
            sig: frobenius_signature(),
        }
    }
}

impl PropModel for CospanModel {
    type Value = Cospan;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<Cospan, TermError> {
        CorelModel::default().generator(g).map(|c| Cospan::new(c, 0))
    }

    fn identity(&self, n: usize) -> Cospan {
        Cospan::identity(n)
    }

    fn symmetry(&self, m: usize, n: usize) -> Cospan {
        Cospan::new(Corelation::symmetry(m, n), 0)
    }

    fn compose(&self, f: &Cospan, g: &Cospan) -> Cospan {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &Cospan, g: &Cospan) -> Cospan {
        f.tensor(g)
    }

    fn equal(&self, a: &Cospan, b: &Cospan) -> bool {
        a == b
    }

    fn distinguish(&self, a: &Cospan, b: &Cospan) -> Option<String> {
        distinguish_corelations(&a.partition, &b.partition).or_else(|| {
            (a.extras != b.extras)
                .then(|| format!("isolated apex points differ: {} vs {}", a.extras, b.extras))
        })
    }
}

/// FinSpan with generators `m', i', d', e'`.
#[derive(Debug, Clone)]
pub struct SpanModel {
    sig: Signature,
}

impl Default for SpanModel {
    fn default() -> Self {
        SpanModel {
            sig: bimonoid_signature(),
        }
    }
}

fn span_generator(g: &Generator) -> Result<NatSpan, TermError> {
    match g.name.as_str() {
        "m'" => Ok(NatSpan::new(2, 1, vec![vec![1, 1]])),
        "i'" => Ok(NatSpan::new(0, 1, vec![vec![]])),
        "d'" => Ok(NatSpan::new(1, 2, vec![vec![1], vec![1]])),
        "e'" => Ok(NatSpan::new(1, 0, vec![])),
        _ => Err(TermError::UnknownGenerator(g.to_string())),
    }
}

impl PropModel for SpanModel {
    type Value = NatSpan;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<NatSpan, TermError> {
        span_generator(g)
    }

    fn identity(&self, n: usize) -> NatSpan {
        NatSpan::identity(n)
    }

    fn symmetry(&self, m: usize, n: usize) -> NatSpan {
        NatSpan::symmetry(m, n)
    }

    fn compose(&self, f: &NatSpan, g: &NatSpan) -> NatSpan {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &NatSpan, g: &NatSpan) -> NatSpan {
        f.tensor(g)
    }

    fn equal(&self, a: &NatSpan, b: &NatSpan) -> bool {
        a == b
    }
}

/// FinRel on finite sets with generators `m', i', d', e'` (images under M).
#[derive(Debug, Clone)]
pub struct BoolRelModel {
    sig: Signature,
}

impl Default for BoolRelModel {
    fn default() -> Self {
        BoolRelModel {
            sig: bimonoid_signature(),
        }
    }
}

impl PropModel for BoolRelModel {
    type Value = BoolRel;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<BoolRel, TermError> {
        span_generator(g).map(|s| s.support())
    }

    fn identity(&self, n: usize) -> BoolRel {
        BoolRel::identity(n)
    }

    fn symmetry(&self, m: usize, n: usize) -> BoolRel {
        BoolRel::symmetry(m, n)
    }

    fn compose(&self, f: &BoolRel, g: &BoolRel) -> BoolRel {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &BoolRel, g: &BoolRel) -> BoolRel {
        f.tensor(g)
    }

    fn equal(&self, a: &BoolRel, b: &BoolRel) -> bool {
        a == b
    }

    fn distinguish(&self, a: &BoolRel, b: &BoolRel) -> Option<String> {
        for j in 0..a.cod().min(b.cod()) {
            for i in 0..a.dom().min(b.dom()) {
                if a.related(i, j) != b.related(i, j) {
                    return Some(format!("(x{}, y{}) is related in only one side", i + 1, j + 1));
                }
            }
        }
        None
    }
}
