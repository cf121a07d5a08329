//! Acceptance gate: one PASS/FAIL line per criterion, each with its time
//! budget. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invlim::catalog;
use invlim::chain::{refine_uniform, validate_closed_graph_chain, LinkId, RefineCounts};
use invlim::classify::{classify_point, compare_spaces, Outcome, Verdict};
use invlim::fhat::fhat;
use invlim::graph::{EdgeId, GraphPoint};
use invlim::itinerary::{distance, BackwardItinerary};
use invlim::map::PLGraphMap;
use invlim::markov::{compute_markov_partition, markov_data, DEFAULT_PARTITION_CAP};
use invlim::orbits::{omega_of_turning_points, DEFAULT_ORBIT_CAP};
use invlim::rational::{fmt_q, q, Q};
use invlim::refinement::joint_refinement_sequence;

type Checked = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Checked);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e12() -> EdgeId {
    EdgeId::new(1, 2).unwrap()
}

fn pt(a: i64, b: i64) -> GraphPoint {
    GraphPoint::on_edge(e12(), q(a, b))
}

fn random_q(rng: &mut ChaCha8Rng, max_den: i64) -> Q {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..=d), d)
}

/// Every fhat output is a valid closed graph-chain and each of its links
/// lies in one link of `T^f`.
fn fhat_chains() -> Checked {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let maps = [
        ("tent", catalog::tent()),
        ("skew", catalog::skew_tent()),
        ("g3", catalog::g3()),
        ("triod identity", catalog::identity_triod()),
    ];
    let mut runs = 0;
    for (name, f) in &maps {
        let d = markov_data(f, DEFAULT_PARTITION_CAP).map_err(|e| format!("{name}: {e}"))?;
        let tf = d.chain();
        for _ in 0..100 {
            let counts: BTreeMap<LinkId, usize> = tf.ids().into_iter().map(|l| (l, rng.gen_range(1..=5))).collect();
            let (c, h) = refine_uniform(f.graph(), &tf, &RefineCounts::PerLink(counts.clone()));
            let r = fhat(f, &d, &c, &h).map_err(|e| format!("{name} {counts:?}: {e}"))?;
            let report = validate_closed_graph_chain(f.graph(), &r.chain);
            ensure!(report.is_valid(), "{name} {counts:?}: {:?}", report.violations);
            for (id, arc) in r.chain.iter() {
                let holders = tf.iter().filter(|(_, m)| m.contains_arc(arc)).count();
                ensure!(holders >= 1, "{name}: link {id} is in no link of T^f");
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} refinements, zero violations"))
}

/// Image of `[a, b]` under an interval map, from endpoint and breakpoint values.
fn interval_image(f: &PLGraphMap, a: &Q, b: &Q) -> (Q, Q) {
    let val = |t: &Q| match f.eval(&GraphPoint::on_edge(e12(), t.clone())) {
        GraphPoint::Interior { t, .. } => t,
        GraphPoint::Vertex(1) => Q::zero(),
        GraphPoint::Vertex(_) => Q::one(),
    };
    let mut vals = vec![val(a), val(b)];
    vals.extend(f.breakpoints(e12()).iter().filter(|t| a < *t && *t < b).map(val));
    (vals.iter().min().unwrap().clone(), vals.iter().max().unwrap().clone())
}

/// `max_A Σ_{j≤n} |f^j(A)|/2 · 2^{-(n-j)} + 2^{-n}/2` on the unit interval.
fn interval_bound(f: &PLGraphMap, links: &[(Q, Q)], n: u32) -> Q {
    let half = q(1, 2);
    let two = q(2, 1);
    links
        .iter()
        .map(|(a, b)| {
            let mut iv = (a.clone(), b.clone());
            let mut s = Q::zero();
            for j in 0..=n {
                s += (&iv.1 - &iv.0) * &half / two.pow((n - j) as i32);
                iv = interval_image(f, &iv.0, &iv.1);
            }
            s + &half / two.pow(n as i32)
        })
        .max()
        .unwrap()
}

fn joint_tent_skew() -> Checked {
    let (f, g) = (catalog::tent(), catalog::skew_tent());
    let j = joint_refinement_sequence(&f, &g, 3).map_err(|e| e.to_string())?;
    ensure!(j.per_map.len() == 2 && j.per_map.iter().all(|m| m.len() == 3), "expected 3 rounds per map");
    let mut sizes = Vec::new();
    for k in 0..3 {
        let (rf, rg) = (&j.per_map[0][k], &j.per_map[1][k]);
        ensure!(rf.pattern == rg.pattern, "h_{} differs", k + 1);
        let target = q(1, 1 << (k + 1));
        for (name, m, r) in [("tent", &f, rf), ("skew", &g, rg)] {
            ensure!(r.mesh_bound <= target, "{name} round {}: bound {} > {}", k + 1, fmt_q(&r.mesh_bound), fmt_q(&target));
            let links: Vec<(Q, Q)> = r.chain.iter().map(|(_, a)| (a.a.clone(), a.b.clone())).collect();
            let oracle = interval_bound(m, &links, k as u32 + 1);
            ensure!(oracle == r.mesh_bound, "{name} round {}: oracle bound {} != {}", k + 1, fmt_q(&oracle), fmt_q(&r.mesh_bound));
            ensure!(validate_closed_graph_chain(m.graph(), &r.chain).is_valid(), "{name} round {} chain invalid", k + 1);
        }
        sizes.push(format!("{}:{}/{}", rf.chain.len(), fmt_q(&rf.mesh_bound), fmt_q(&rg.mesh_bound)));
    }
    Ok(format!("identical h_1..h_3; links:bounds {}", sizes.join(" ")))
}

/// Forward orbits by linear search; the union of their cycles.
fn naive_omega(f: &PLGraphMap) -> usize {
    let mut cycles = BTreeSet::new();
    for t in f.turning_points() {
        let mut orbit = vec![t.location.clone()];
        loop {
            let next = f.eval(orbit.last().unwrap());
            if let Some(i) = orbit.iter().position(|p| *p == next) {
                cycles.extend(orbit.drain(i..));
                break;
            }
            orbit.push(next);
        }
    }
    cycles.len()
}

fn omega_and_compare() -> Checked {
    let (tent, g3, skew) = (catalog::tent(), catalog::g3(), catalog::skew_tent());
    let wt = omega_of_turning_points(&tent, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?.len();
    let wg = omega_of_turning_points(&g3, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?.len();
    ensure!((wt, wg) == (1, 3), "|ω| = ({wt}, {wg})");
    ensure!((naive_omega(&tent), naive_omega(&g3)) == (1, 3), "naive oracle disagrees");
    let d = compare_spaces(&tent, &g3, 3, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
    ensure!(d.outcome == Outcome::Distinguished { omega_f: 1, omega_g: 3 }, "tent/g3: {}", d.outcome.label());
    let h = compare_spaces(&tent, &skew, 3, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
    ensure!(matches!(h.outcome, Outcome::Homeomorphic { .. }), "tent/skew: {}", h.outcome.label());
    Ok("|ω| = 1, 3; tent/g3 DISTINGUISHED; tent/skew HOMEOMORPHIC".into())
}

fn point_classification() -> Checked {
    let f = catalog::tent();
    let zero = BackwardItinerary::new(&f, vec![], vec![pt(0, 1)]).map_err(|e| e.to_string())?;
    let two_thirds = BackwardItinerary::new(&f, vec![], vec![pt(2, 3)]).map_err(|e| e.to_string())?;
    for (x, verdict, conds) in [(zero, Verdict::Exceptional, false), (two_thirds, Verdict::Product, true)] {
        let mut y = x.clone();
        for s in 0..=5 {
            let c = classify_point(&f, &y, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
            ensure!(c.verdict == verdict, "{} after {s} shifts: {}", x.display(f.graph()), c.verdict);
            ensure!(c.condition_i == conds && c.condition_ii == conds, "{} conditions {c:?}", x.display(f.graph()));
            y = y.shift(&f);
        }
    }
    Ok("const-0 EXCEPTIONAL, const-2/3 PRODUCT, stable under 5 shifts".into())
}

fn preimage_oracle() -> Checked {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut interior = 0;
    for (name, f) in catalog::all() {
        let d = markov_data(&f, DEFAULT_PARTITION_CAP).map_err(|e| format!("{name}: {e}"))?;
        let edges: Vec<EdgeId> = f.graph().edges().collect();
        let cuts = d.partition().cuts();
        for _ in 0..1000 {
            let e = edges[rng.gen_range(0..edges.len())];
            let t = random_q(&mut rng, 200);
            let p = GraphPoint::on_edge(e, t.clone());
            let pre = f.preimages(&p).map_err(|e| format!("{name}: {e}"))?;
            for x in &pre {
                ensure!(f.eval(x) == p, "{name}: f({}) != {}", x.display(f.graph()), p.display(f.graph()));
            }
            let ec = &cuts[&e];
            if ec.contains(&t) {
                continue;
            }
            let k = ec.partition_point(|c| c < &t);
            let col = d.position(LinkId::new(e, k)).unwrap();
            let sum: u32 = d.transition_matrix().iter().map(|r| u32::from(r[col])).sum();
            ensure!(pre.len() as u32 == sum, "{name}: {} has {} preimages, column sum {sum}", p.display(f.graph()), pre.len());
            interior += 1;
        }
    }
    Ok(format!("{} maps x 1000 points, {interior} interior counts checked", catalog::all().len()))
}

fn naive_power(m: &[Vec<u8>], n: usize) -> Vec<Vec<BigUint>> {
    let size = m.len();
    let mut acc: Vec<Vec<BigUint>> =
        (0..size).map(|i| (0..size).map(|j| BigUint::from(u8::from(i == j))).collect()).collect();
    for _ in 0..n {
        let mut next = vec![vec![BigUint::zero(); size]; size];
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    next[i][j] += &acc[i][k] * BigUint::from(m[k][j]);
                }
            }
        }
        acc = next;
    }
    acc
}

fn markov_duality() -> Checked {
    let mut checked = 0;
    for (name, f) in catalog::all() {
        let p1 = compute_markov_partition(&f, DEFAULT_PARTITION_CAP).map_err(|e| format!("{name}: {e}"))?;
        let p2 = compute_markov_partition(&f.refined_at(p1.cuts()), DEFAULT_PARTITION_CAP).map_err(|e| format!("{name}: {e}"))?;
        ensure!(p1.cuts() == p2.cuts(), "{name}: partition not idempotent");
        let d = markov_data(&f, DEFAULT_PARTITION_CAP).map_err(|e| format!("{name}: {e}"))?;
        let links = d.links();
        for &a in links {
            for &b in links {
                let forward = d.index_set(a).contains(&b);
                ensure!(forward == d.inverse_index_set(b).contains(&a), "{name}: duality fails at {a}, {b}");
                let cell_b = d.cell(b);
                let mid = GraphPoint::on_edge(b.edge, (&cell_b.a + &cell_b.b) / q(2, 1));
                let hit = f.preimages(&mid).unwrap().iter().any(|x| d.cell(a).contains_point(x));
                ensure!(forward == hit, "{name}: A({a}) disagrees with preimages about {b}");
                let (i, j) = (d.position(a).unwrap(), d.position(b).unwrap());
                ensure!((d.transition_matrix()[i][j] == 1) == d.inverse_index_set(b).contains(&a), "{name}: M[{a}][{b}]");
                checked += 1;
            }
        }
        for n in 1..=5 {
            ensure!(d.transition_matrix_power(n) == naive_power(d.transition_matrix(), n), "{name}: M^{n} disagrees");
        }
    }
    Ok(format!("{checked} link pairs, idempotent, M^1..M^5 agree"))
}

/// A periodic point of the tent map with odd denominator at most 63.
fn random_tent_point(f: &PLGraphMap, rng: &mut ChaCha8Rng) -> BackwardItinerary {
    let d = 2 * rng.gen_range(0..32) + 1;
    let mut z = pt(rng.gen_range(0..=d), d);
    let mut seen = Vec::new();
    while !seen.contains(&z) {
        seen.push(z.clone());
        z = f.eval(&z);
    }
    let start = seen.iter().position(|p| *p == z).unwrap();
    let cycle = &seen[start..];
    let z = cycle[rng.gen_range(0..cycle.len())].clone();
    BackwardItinerary::from_periodic_point(f, &z, DEFAULT_ORBIT_CAP).unwrap()
}

fn metric_contract() -> Checked {
    let f = catalog::tent();
    let eps = q(1, 1 << 20);
    let zero = BackwardItinerary::new(&f, vec![], vec![pt(0, 1)]).unwrap();
    let two_thirds = BackwardItinerary::new(&f, vec![], vec![pt(2, 3)]).unwrap();
    let same = distance(&f, &two_thirds, &two_thirds, &eps);
    ensure!(same.lo <= Q::zero() && Q::zero() <= same.hi && same.exact.is_zero(), "d(x,x) = [{}, {}]", fmt_q(&same.lo), fmt_q(&same.hi));
    let d = distance(&f, &zero, &two_thirds, &eps);
    ensure!(d.exact == q(2, 3), "d(0, 2/3) = {}", fmt_q(&d.exact));
    ensure!(d.lo <= d.exact && d.exact <= d.hi && &d.hi - &d.lo <= eps, "enclosure [{}, {}]", fmt_q(&d.lo), fmt_q(&d.hi));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let [x, y, z] = [0; 3].map(|_| random_tent_point(&f, &mut rng));
        let (xy, yz, xz) = (distance(&f, &x, &y, &eps), distance(&f, &y, &z, &eps), distance(&f, &x, &z, &eps));
        for e in [&xy, &yz, &xz] {
            ensure!(e.lo <= e.exact && e.exact <= e.hi, "triple {i}: exact value outside its enclosure");
        }
        ensure!(xz.lo <= &xy.hi + &yz.hi, "triple {i}: triangle inequality fails on enclosures");
        ensure!(xz.exact <= &xy.exact + &yz.exact, "triple {i}: triangle inequality fails exactly");
    }
    Ok("d(x,x) ∋ 0, d(0,2/3) = 2/3, 100 triangles at 2^-20".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 pull-back chains are valid closed graph-chains", Duration::from_secs(60), fhat_chains),
        ("2 joint refinement of tent and skew tent to depth 3", Duration::from_secs(60), joint_tent_skew),
        ("3 omega sizes and space comparison", Duration::from_secs(5), omega_and_compare),
        ("4 point classification and shift invariance", Duration::from_secs(5), point_classification),
        ("5 preimages against eval and column sums", Duration::from_secs(30), preimage_oracle),
        ("6 Markov duality, idempotence and matrix powers", Duration::from_secs(5), markov_duality),
        ("7 inverse-limit metric contract", Duration::from_secs(30), metric_contract),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > budget => Err(format!("{detail}; took {took:.2?}, budget {budget:?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({took:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
