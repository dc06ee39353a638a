//! Acceptance suite: ten criteria, each with a runtime limit, all in exact
//! arithmetic. Prints one PASS/FAIL line per criterion and exits nonzero if
//! any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use propnet::afflag::{aff_blackbox, AffLagRelModel, AffRel};
use propnet::bondgraph::{alpha, f_eval, g_eval, naturality_sides};
use propnet::circuit::{Edge, EdgeLabel, LCircuit};
use propnet::exactla::Mat;
use propnet::laws::{alpha_suite, run_suite, square_suite, LawCheck};
use propnet::linrel::{blackbox, impedance_rel, k_corel, label_rows, LagRelModel, LinRel};
use propnet::random::{self, LabelPool};
use propnet::scalar::{Field, Rat, RatFunc};
use propnet::setprops::Corelation;
use propnet::term::{eval, gen, seq};

type Q = Rat;
type Qs = RatFunc;
type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64) -> Q {
    Q::from(n)
}

// Criterion 1 --------------------------------------------------------------

/// Equivalence closure of the union of both partitions over X + Y + Z, by
/// Warshall's algorithm, restricted to X + Z.
fn oracle_same_block(f: &Corelation, g: &Corelation) -> Vec<Vec<bool>> {
    let (x, y, z) = (f.dom(), f.cod(), g.cod());
    let n = x + y + z;
    let mut adj = vec![vec![false; n]; n];
    for (i, row) in adj.iter_mut().enumerate() {
        row[i] = true;
    }
    for a in 0..x + y {
        for b in 0..x + y {
            if f.same_block(a, b) {
                adj[a][b] = true;
            }
        }
    }
    for a in 0..y + z {
        for b in 0..y + z {
            if g.same_block(a, b) {
                adj[x + a][x + b] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if adj[i][k] {
                for j in 0..n {
                    if adj[k][j] {
                        adj[i][j] = true;
                    }
                }
            }
        }
    }
    let outer: Vec<usize> = (0..x).chain(x + y..n).collect();
    outer.iter().map(|&a| outer.iter().map(|&b| adj[a][b]).collect()).collect()
}

fn criterion_1() -> Outcome {
    let mut pairs = 0usize;
    for x in 0..=3 {
        for y in 0..=3 {
            let fs = Corelation::all(x, y);
            for z in 0..=3 {
                let gs = Corelation::all(y, z);
                for f in &fs {
                    for g in &gs {
                        let h = f.compose(g).map_err(|e| e.to_string())?;
                        let expect = oracle_same_block(f, g);
                        for (a, row) in expect.iter().enumerate() {
                            for (b, &same) in row.iter().enumerate() {
                                ensure(h.same_block(a, b) == same, || {
                                    format!("{f} ; {g} = {h} disagrees with the closure at ({a},{b})")
                                })?;
                            }
                        }
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} composable pairs"))
}

// Criterion 2 --------------------------------------------------------------

fn all_expected(checks: &[LawCheck]) -> Result<(), String> {
    match checks.iter().find(|c| !c.as_expected()) {
        Some(c) => Err(c.line()),
        None => Ok(()),
    }
}

fn criterion_2() -> Outcome {
    let corel = run_suite("fincorel").map_err(|e| e.to_string())?;
    all_expected(&corel)?;
    ensure(corel.iter().all(|c| c.holds), || "a FinCorel law failed".into())?;
    let cospan = run_suite("fincospan").map_err(|e| e.to_string())?;
    all_expected(&cospan)?;
    let failing: Vec<&LawCheck> = cospan.iter().filter(|c| !c.holds).collect();
    ensure(failing.len() == 1 && failing[0].id.ends_with(" extra"), || {
        format!("FinCospan should fail only the extra law, failed {:?}", failing)
    })?;
    let witness = failing[0].detail.clone().unwrap_or_default();
    ensure(witness.contains("isolated apex points differ: 1 vs 0"), || {
        format!("extra-law witness should report one extra apex point, got `{witness}`")
    })?;
    Ok(format!("{} + {} laws, cospan witness: {witness}", corel.len(), cospan.len()))
}

// Criterion 3 --------------------------------------------------------------

fn rel(dom: usize, cod: usize, rows: &[&[i64]]) -> LinRel<Q> {
    let rows = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    LinRel::from_constraints(dom, cod, rows).expect("literal shapes")
}

fn criterion_3() -> Outcome {
    // Coordinates (φ₁, I₁, φ₂, I₂, φ₃, I₃), inputs first.
    let tables = [
        (
            "m",
            Corelation::mult(),
            rel(4, 2, &[&[1, 0, -1, 0, 0, 0], &[0, 0, 1, 0, -1, 0], &[0, 1, 0, 1, 0, -1]]),
        ),
        ("i", Corelation::unit(), rel(0, 2, &[&[0, 1]])),
        (
            "d",
            Corelation::comult(),
            rel(2, 4, &[&[1, 0, -1, 0, 0, 0], &[0, 0, 1, 0, -1, 0], &[0, 1, 0, -1, 0, -1]]),
        ),
        ("e", Corelation::counit(), rel(2, 0, &[&[0, 1]])),
    ];
    for (name, c, expect) in &tables {
        let k = k_corel::<Q>(c);
        ensure(&k == expect, || format!("K({name}) = {k}, expected {expect}"))?;
    }
    let mut lagrangian = 0;
    for m in 0..=4 {
        for n in 0..=4 - m {
            for c in Corelation::all(m, n) {
                let k = k_corel::<Q>(&c);
                ensure(k.is_lagrangian().map_err(|e| e.to_string())?, || format!("K({c}) is not Lagrangian"))?;
                lagrangian += 1;
            }
        }
    }
    let mut functorial = 0;
    for a in 0..=2 {
        for b in 0..=2 {
            for c in 0..=2 {
                for f in Corelation::all(a, b) {
                    for g in Corelation::all(b, c) {
                        let whole = k_corel::<Q>(&f.compose(&g).map_err(|e| e.to_string())?);
                        let parts = k_corel::<Q>(&f).compose(&k_corel(&g)).map_err(|e| e.to_string())?;
                        ensure(whole == parts, || format!("K({f} ; {g}) ≠ K({f}) ; K({g})"))?;
                        functorial += 1;
                    }
                }
            }
        }
    }
    for a in 0..=2 {
        for b in 0..=2 {
            for f in Corelation::all(a, b) {
                for g in Corelation::all(b, a) {
                    ensure(k_corel::<Q>(&f.tensor(&g)) == k_corel::<Q>(&f).tensor(&k_corel(&g)), || {
                        format!("K({f} ⊗ {g}) ≠ K({f}) ⊗ K({g})")
                    })?;
                }
            }
        }
    }
    for (a, b) in [(0, 1), (1, 1), (1, 2), (2, 1)] {
        ensure(k_corel::<Q>(&Corelation::symmetry(a, b)) == LinRel::braid(2 * a, 2 * b), || {
            format!("K does not preserve the braiding σ({a},{b})")
        })?;
    }
    Ok(format!("{lagrangian} Lagrangian images, {functorial} composites"))
}

// Criterion 4 --------------------------------------------------------------

fn two_resistors(r1: &Q, r2: &Q, parallel: bool) -> LCircuit {
    let e = |src, tgt, r: &Q| Edge {
        src,
        tgt,
        label: EdgeLabel::Resistor(r.clone()),
    };
    if parallel {
        LCircuit::new(2, vec![e(0, 1, r1), e(0, 1, r2)], vec![0], vec![1]).unwrap()
    } else {
        LCircuit::new(3, vec![e(0, 1, r1), e(1, 2, r2)], vec![0], vec![2]).unwrap()
    }
}

fn criterion_4() -> Outcome {
    let mut r = random::rng(4);
    for _ in 0..50 {
        let (r1, r2) = (random::positive_rat(&mut r), random::positive_rat(&mut r));
        let series = blackbox::<Q>(&two_resistors(&r1, &r2, false)).map_err(|e| e.to_string())?;
        let sum = r1.add(&r2);
        ensure(series == impedance_rel(sum.clone()), || format!("series {r1}, {r2}: {series}"))?;
        let parallel = blackbox::<Q>(&two_resistors(&r1, &r2, true)).map_err(|e| e.to_string())?;
        let z = r1.mul(&r2).mul(&sum.inv().map_err(|e| e.to_string())?);
        ensure(parallel == impedance_rel(z.clone()), || format!("parallel {r1}, {r2}: {parallel}, expected Z = {z}"))?;
    }
    // V = sLI and sC(φ₂−φ₁) = I₁ on (φ₁, I₁, φ₂, I₂).
    let s = Qs::s();
    let l = Rat::new(3, 2).unwrap();
    let c = Rat::new(5, 7).unwrap();
    let sl = s.mul(&Qs::from_rat(&l));
    let sc = s.mul(&Qs::from_rat(&c));
    let (zero, one) = (Qs::zero(), Qs::one());
    let inductor_row = vec![one.neg(), sl.neg(), one.clone(), zero.clone()];
    let capacitor_row = vec![sc.neg(), one.neg(), sc.clone(), zero.clone()];
    let through = vec![zero.clone(), one.clone(), zero.clone(), one.neg()];
    let ind = label_rows::<Qs>(&EdgeLabel::Inductor(l.clone())).map_err(|e| e.to_string())?;
    ensure(ind == vec![inductor_row.clone(), through.clone()], || format!("inductor rows {ind:?}"))?;
    let cap = label_rows::<Qs>(&EdgeLabel::Capacitor(c.clone())).map_err(|e| e.to_string())?;
    ensure(cap == vec![capacitor_row.clone(), through.clone()], || format!("capacitor rows {cap:?}"))?;
    for (label, row) in [(EdgeLabel::Inductor(l), inductor_row), (EdgeLabel::Capacitor(c), capacitor_row)] {
        let name = label.to_string();
        let bb = blackbox::<Qs>(&LCircuit::single_edge(label)).map_err(|e| e.to_string())?;
        let expect = LinRel::from_constraints(2, 2, vec![row, through.clone()]).unwrap();
        ensure(bb == expect, || format!("{name}: {bb}"))?;
    }
    Ok("50 series/parallel pairs, inductor and capacitor rows".into())
}

// Criterion 5 --------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut r = random::rng(5);
    for i in 0..200 {
        let c = random::random_circuit(&mut r, 6, 8, LabelPool::Passive);
        let direct = blackbox::<Qs>(&c).map_err(|e| e.to_string())?;
        let via_terms = eval(&c.to_term(), &LagRelModel::<Qs>::default()).map_err(|e| e.to_string())?;
        ensure(direct == via_terms, || format!("circuit #{i} {}: {direct} vs {via_terms}", c.to_json()))?;
    }
    let mut r = random::rng(55);
    for i in 0..200 {
        let c = random::random_circuit(&mut r, 6, 8, LabelPool::WithSources);
        let direct = aff_blackbox::<Qs>(&c).map_err(|e| e.to_string())?;
        let via_terms = eval(&c.to_term(), &AffLagRelModel::<Qs>::default()).map_err(|e| e.to_string())?;
        ensure(direct == via_terms, || format!("circuit #{i} {}: {direct} vs {via_terms}", c.to_json()))?;
    }
    Ok("200 passive + 200 circuits with sources".into())
}

// Criterion 6 --------------------------------------------------------------

fn criterion_6() -> Outcome {
    let checks = square_suite(200, 5, 6).map_err(|e| e.to_string())?;
    ensure(checks.len() == 205, || format!("{} checks", checks.len()))?;
    all_expected(&checks)?;
    Ok("5 generators + 200 random terms".into())
}

// Criterion 7 --------------------------------------------------------------

fn criterion_7() -> Outcome {
    let mut r = random::rng(7);
    let mut nonempty = 0;
    while nonempty < 200 {
        let (a, b, c) = (r_dim(&mut r), r_dim(&mut r), r_dim(&mut r));
        let lin_l = random::random_linrel::<Q>(&mut r, a, b);
        let lin_m = random::random_linrel::<Q>(&mut r, b, c);
        let u: Vec<Q> = (0..a).map(|_| random::small_rat(&mut r)).collect();
        let v: Vec<Q> = (0..b).map(|_| random::small_rat(&mut r)).collect();
        let w: Vec<Q> = (0..c).map(|_| random::small_rat(&mut r)).collect();
        let rr = AffRel::translate(&lin_l, &[u.clone(), v.clone()].concat()).unwrap();
        let ss = AffRel::translate(&lin_m, &[v, w.clone()].concat()).unwrap();
        let composite = rr.compose(&ss).map_err(|e| e.to_string())?;
        let formula = AffRel::translate(&lin_l.compose(&lin_m).unwrap(), &[u, w].concat()).unwrap();
        ensure(composite == formula, || format!("S R = {composite}, (u,w) + M L = {formula}"))?;
        nonempty += 1;

        // Independent pairs: whenever the composite is nonempty, its own
        // witness plus the composite of linear parts reproduces it.
        let x = random::random_affrel::<Q>(&mut r, a, b);
        let y = random::random_affrel::<Q>(&mut r, b, c);
        let xy = x.compose(&y).map_err(|e| e.to_string())?;
        if let Some(p) = xy.witness() {
            let lin = x.linear_part().unwrap().compose(&y.linear_part().unwrap()).unwrap();
            ensure(xy == AffRel::translate(&lin, &p).unwrap(), || format!("translate form fails for {xy}"))?;
        }
    }

    let parse = |src: &str| AffRel::<Q>::parse_text(src).map_err(|e| e.to_string());
    let edge = |label| LCircuit::single_edge(label);
    let battery = edge(EdgeLabel::VoltageSource(Qs::from_rat(&q(5))));
    let resistor = edge(EdgeLabel::Resistor(q(3)));
    let series = aff_blackbox::<Q>(&battery.compose(&resistor).unwrap()).map_err(|e| e.to_string())?;
    let expect = parse("affrel 2 -> 2\nphi_out_1 - phi_in_1 = 5 + 3*I_in_1\nI_in_1 = I_out_1\n")?;
    ensure(series == expect, || format!("battery + resistor: {series}"))?;

    let v = |x: i64| aff_blackbox::<Q>(&edge(EdgeLabel::VoltageSource(Qs::from_rat(&q(x))))).unwrap();
    let sum = v(2).compose(&v(3)).map_err(|e| e.to_string())?;
    ensure(sum == v(5), || format!("2 V then 3 V gives {sum}"))?;

    let i = |x: i64| aff_blackbox::<Q>(&edge(EdgeLabel::CurrentSource(Qs::from_rat(&q(x))))).unwrap();
    let clash = i(2).compose(&i(3)).map_err(|e| e.to_string())?;
    ensure(clash.is_empty(), || format!("2 A then 3 A gives {clash}"))?;

    let pinned = aff_blackbox::<Q>(&edge(EdgeLabel::CurrentSource(Qs::from_rat(&q(2)))).compose(&resistor).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(pinned == parse("affrel 2 -> 2\nI_in_1 = 2\nI_out_1 = 2\n")?, || format!("current source + resistor: {pinned}"))?;
    Ok("200 translate pairs, battery-resistor, source clashes".into())
}

fn r_dim(r: &mut random::Rng) -> usize {
    use rand::Rng;
    r.gen_range(0..=3)
}

// Criterion 8 --------------------------------------------------------------

fn criterion_8() -> Outcome {
    let f = run_suite("bondgraph-f").map_err(|e| e.to_string())?;
    let g = run_suite("bondgraph-g").map_err(|e| e.to_string())?;
    all_expected(&f)?;
    all_expected(&g)?;
    let laws_hold = |cs: &[LawCheck]| cs.iter().filter(|c| !c.id.starts_with("discriminator")).all(|c| c.holds);
    ensure(laws_hold(&f) && laws_hold(&g), || "a bond graph law failed".into())?;
    let disc = |cs: &[LawCheck]| cs.iter().find(|c| c.id.starts_with("discriminator")).map(|c| c.holds);
    ensure(disc(&g) == Some(true), || "M;D′ = M′;D should hold in G".into())?;
    ensure(disc(&f) == Some(false), || "M;D′ = M′;D should fail in F".into())?;
    let lag = run_suite("lagrel-deg2").map_err(|e| e.to_string())?;
    all_expected(&lag)?;
    ensure(lag.iter().filter(|c| c.id.starts_with("inverse")).count() == 2, || "missing inverse laws".into())?;
    Ok(format!("{} laws in F, {} in G, inverse composites in F", f.len(), g.len()))
}

// Criterion 9 --------------------------------------------------------------

fn criterion_9() -> Outcome {
    for n in 0..=4 {
        let a = alpha::<Q>(n);
        ensure(a.compose(&a.dagger()).unwrap() == LinRel::identity(2 * n), || format!("α{n}†α{n} ≠ id"))?;
    }
    let checks = alpha_suite(100, 4, 9).map_err(|e| e.to_string())?;
    let bad: Vec<&LawCheck> = checks.iter().filter(|c| !c.as_expected()).collect();
    if let Some(first) = bad.first() {
        let random_only = bad.iter().all(|c| c.id.starts_with("naturality random"));
        // G identifies 1d;0j with 0d;1j while F keeps them apart, and the
        // left side of the square only sees G.
        let a = seq([gen("1d"), gen("0j")]);
        let b = seq([gen("0d"), gen("1j")]);
        let g_same = g_eval(&a).map_err(|e| e.to_string())? == g_eval(&b).map_err(|e| e.to_string())?;
        let f_same = f_eval::<Q>(&a).map_err(|e| e.to_string())? == f_eval::<Q>(&b).map_err(|e| e.to_string())?;
        let cause = if g_same && !f_same {
            "; G(1d;0j) = G(0d;1j) but F(1d;0j) ≠ F(0d;1j), so no square through K∘G can match F on both"
        } else {
            ""
        };
        return Err(format!(
            "{} of {} checks fail{}; first: {}{cause}",
            bad.len(),
            checks.len(),
            if random_only { " (all on random composites)" } else { "" },
            first.line()
        ));
    }
    // Sanity: the sides really are relations of the same type.
    let (lhs, rhs) = naturality_sides::<Q>(&gen("1j")).map_err(|e| e.to_string())?;
    ensure((lhs.dom(), lhs.cod()) == (rhs.dom(), rhs.cod()), || "type mismatch".into())?;
    Ok("8 generators, Sym(1,1), 100 random terms; α†α = id for n ≤ 4".into())
}

// Criterion 10 -------------------------------------------------------------

fn linear_algebra<F: Field>(seed: u64) -> Result<(), String> {
    use rand::Rng;
    let mut r = random::rng(seed);
    for i in 0..200 {
        let (rows, cols) = (r.gen_range(0..=5), r.gen_range(0..=5));
        let a: Mat<F> = random::random_matrix(&mut r, rows, cols);
        let (red, pivots) = a.rref();
        let kernel = a.kernel();
        ensure(pivots.len() + kernel.dim() == cols, || format!("matrix #{i}: rank-nullity fails\n{a}"))?;
        ensure(a.rank() == a.transpose().rank(), || format!("matrix #{i}: row and column rank differ\n{a}"))?;
        for v in kernel.basis() {
            let image = a.mul_vec(v).map_err(|e| e.to_string())?;
            ensure(image.iter().all(|x| x.is_zero()), || format!("matrix #{i}: kernel vector not annihilated"))?;
        }
        let (again, pivots_again) = red.rref();
        ensure(again == red && pivots_again == pivots, || format!("matrix #{i}: rref not idempotent\n{a}"))?;
        for (row, &p) in red.row_vecs().iter().zip(&pivots) {
            ensure(row[p] == F::one() && row[..p].iter().all(|x| x.is_zero()), || {
                format!("matrix #{i}: pivot shape broken\n{red}")
            })?;
        }
        ensure(red.row_vecs().iter().skip(pivots.len()).all(|row| row.iter().all(|x| x.is_zero())), || {
            format!("matrix #{i}: nonzero row below the pivots")
        })?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    linear_algebra::<Q>(10)?;
    linear_algebra::<Qs>(11)?;
    Ok("200 matrices over Q, 200 over Q(s)".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "corelation composition vs closure oracle", 10, criterion_1),
        (2, "FinCorel and FinCospan presentation suites", 1, criterion_2),
        (3, "K on generators, Lagrangian images, functoriality", 30, criterion_3),
        (4, "series/parallel resistors, inductor and capacitor rows", 5, criterion_4),
        (5, "direct black box vs term evaluation", 60, criterion_5),
        (6, "commuting square for circuit terms", 60, criterion_6),
        (7, "affine composition translate formula and sources", 10, criterion_7),
        (8, "bond graph law audit in F and G", 10, criterion_8),
        (9, "naturality of alpha", 60, criterion_9),
        (10, "rank-nullity and rref idempotence", 10, criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || n.to_string() == *f) {
            continue;
        }
        let limit = Duration::from_secs(limit);
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|note| {
            if elapsed <= limit {
                Ok(note)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(note) => println!("PASS criterion {n:>2}: {name} [{elapsed:.2?} / {limit:?}] {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2}: {name} [{elapsed:.2?} / {limit:?}] {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
