//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Expected values come from brute-force
//! oracles written here, independent of the library's search code.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::Rng;

use blockrig::exact::checked_pow;
use blockrig::games::{
    add_observer_player, build_gs, build_transpose_game, repeat, repeated_value_bounds, value_exact, value_exhaustive,
    IndependentGame, SolverBudget,
};
use blockrig::rigidity::{
    amplify_nonrigidity, depth2_from_decomposition, is_function_rigid, is_matrix_rigid, nonrigidity_from_depth2,
    tensor_lift, BooleanFunction, FunctionBudget, NonRigidityCertificate, SearchBudget, ViewFamily,
};
use blockrig::rng::{seeded, Rng as ChaCha};
use blockrig::tmsim::{
    computation_graph, encode_tensor_input, gen_tensor_k_machine, log_star, predecessor_profile, run_partial,
    run_untraced, segment, ComputationGraph, MachineSpec, RunTrace, DEFAULT_TENSOR_K_CAP,
};
use blockrig::{BitMatrix, BitVector, Value};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

// ---------------------------------------------------------------- oracles

/// Plain enumeration of every joint deterministic strategy.
fn oracle_value(g: &IndependentGame) -> Value {
    let a = g.answer_len();
    let sizes: Vec<usize> = (0..g.players()).map(|j| 1 << g.view(j).len()).collect();
    let total_bits: usize = sizes.iter().map(|s| s * a).sum();
    assert!(total_bits <= 20, "oracle limited to 20-bit joint tables");
    let answer_mask = (1u64 << a) - 1;
    let mut best = 0;
    for code in 0u64..1 << total_bits {
        let mut wins = 0;
        'q: for x in 0..g.questions() {
            let mut offset = 0;
            for (j, &size) in sizes.iter().enumerate() {
                let seen = g.view(j).iter().enumerate().fold(0usize, |acc, (p, &b)| acc | ((((x >> b) & 1) as usize) << p));
                let answer = (code >> (offset + seen * a)) & answer_mask;
                offset += size * a;
                if answer != g.target(j, x) {
                    continue 'q;
                }
            }
            wins += 1;
        }
        best = best.max(wins);
    }
    Ratio::new(best, g.questions())
}

/// Per-player optimum: for each view value, the most frequent target.
fn oracle_marginal(g: &IndependentGame, j: usize) -> Value {
    let mut counts = std::collections::BTreeMap::<(u64, u64), u64>::new();
    for x in 0..g.questions() {
        let seen = g.view(j).iter().enumerate().fold(0u64, |acc, (p, &b)| acc | (((x >> b) & 1) << p));
        *counts.entry((seen, g.target(j, x))).or_default() += 1;
    }
    let mut best = std::collections::BTreeMap::<u64, u64>::new();
    for ((seen, _), c) in counts {
        let e = best.entry(seen).or_default();
        *e = (*e).max(c);
    }
    Ratio::new(best.values().sum(), g.questions())
}

fn parity(x: u64) -> u64 {
    u64::from(x.count_ones() & 1)
}

/// `A x` with `x` given as bits (bit j = coordinate j).
fn apply(rows: &[u64], x: u64) -> u64 {
    rows.iter().enumerate().fold(0, |acc, (i, &r)| acc | (parity(r & x) << i))
}

/// Rank of a 0/1 matrix given as row masks, by naive elimination.
fn naive_rank(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        if let Some(p) = (rank..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && (rows[i] >> bit) & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Rank at most one: all nonzero rows equal.
fn rank_le_one(rows: &[u64]) -> bool {
    let nz: BTreeSet<u64> = rows.iter().copied().filter(|&r| r != 0).collect();
    nz.len() <= 1
}

fn masks(m: &BitMatrix) -> Vec<u64> {
    (0..m.rows()).map(|i| m.row_mask(i)).collect()
}

/// `f^{⊗n}` straight from the table: row i gathers `x_{i,j}` at `j n + i`.
fn oracle_tensor_bits(f: &BooleanFunction, n: usize, x: &BitVector) -> BitVector {
    let k = f.arity();
    let mut out = BitVector::zeros(n * k);
    for i in 0..n {
        let row = (0..k).fold(0usize, |acc, j| acc | (usize::from(x.get(j * n + i)) << j));
        let y = f.table()[row];
        for j in 0..k {
            out.set(j * n + i, (y >> j) & 1 == 1);
        }
    }
    out
}

fn oracle_tensor(f: &BooleanFunction, n: usize, x: u64) -> u64 {
    oracle_tensor_bits(f, n, &BitVector::from_u64(n * f.arity(), x)).to_u64()
}

/// Certificate evaluation from its documented layout: local `i` reads the
/// blocks of view `i` in order, each `block_len` bits, and writes block `i`.
fn oracle_cert_eval(c: &NonRigidityCertificate, x: u64) -> u64 {
    let n = c.block_len;
    let bm = (1u64 << n) - 1;
    let mut out = 0;
    for (i, view) in c.views.iter().enumerate() {
        let mut idx = 0;
        for (p, &q) in view.iter().enumerate() {
            idx |= ((x >> (q * n)) & bm) << (p * n);
        }
        out |= c.locals[i][idx as usize] << (i * n);
    }
    out
}

fn random_game(rng: &mut ChaCha, max_table_bits: u64) -> IndependentGame {
    loop {
        let t = rng.random_range(1..=3usize);
        let players = rng.random_range(1..=3usize);
        let a = rng.random_range(1..=2usize);
        let views: Vec<Vec<usize>> = (0..players)
            .map(|_| {
                let s = rng.random_range(0..=t.min(2));
                let mut bits: Vec<usize> = (0..t).collect();
                for i in 0..s {
                    let j = rng.random_range(i..t);
                    bits.swap(i, j);
                }
                let mut v = bits[..s].to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        let bits: u64 = views.iter().map(|v| (a as u64) << v.len()).sum();
        if bits > max_table_bits {
            continue;
        }
        let targets = (0..players)
            .map(|_| (0..1u64 << t).map(|_| rng.random_range(0..1u64 << a)).collect())
            .collect();
        return IndependentGame::new(t, views, a, targets).expect("valid random game");
    }
}

fn swap_game() -> IndependentGame {
    // identity on two bits, each player sees only the other's bit
    build_gs(&BooleanFunction::identity(2), &ViewFamily::new(2, 1, vec![vec![1], vec![0]]).unwrap()).unwrap()
}

// ---------------------------------------------------------------- criteria

fn c01_solver_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(1);
    let budget = SolverBudget::default();
    for i in 0..50 {
        let g = random_game(&mut rng, 16);
        let oracle = oracle_value(&g);
        let exhaustive = value_exhaustive(&g, &budget).map_err(|e| e.to_string())?;
        let bnb = value_exact(&g, &budget).map_err(|e| e.to_string())?;
        check(exhaustive.value == oracle && bnb.value == oracle, || {
            format!("game {i}: oracle {oracle}, exhaustive {}, bnb {}", exhaustive.value, bnb.value)
        })?;
        check(g.strategy_value(&bnb.strategy).unwrap() == oracle, || format!("game {i}: strategy does not attain value"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("50 games agree".into())
}

fn c02_swap_game() -> Outcome {
    let start = Instant::now();
    let budget = SolverBudget::default();
    let g = swap_game();
    let g2 = repeat(&g, 2).map_err(|e| e.to_string())?;
    let (v1, v2) = (oracle_value(&g), oracle_value(&g2));
    check(v1 == Ratio::new(1, 2) && v2 == Ratio::new(1, 4), || format!("oracle gives {v1}, {v2}"))?;
    let exact1 = value_exact(&g, &budget).unwrap().value;
    let exact2 = value_exact(&g2, &budget).unwrap().value;
    check(exact1 == v1 && exact2 == v2, || format!("solver gives {exact1}, {exact2}"))?;
    let bounds = repeated_value_bounds(&g, 2, &budget).map_err(|e| e.to_string())?;
    check(bounds == (Ratio::new(1, 4), Ratio::new(1, 4)), || format!("bounds {bounds:?}"))?;
    within(start, Duration::from_secs(5))?;
    Ok("1/2, 1/4, bounds (1/4, 1/4)".into())
}

fn c03_sandwich() -> Outcome {
    let mut rng = seeded(3);
    let budget = SolverBudget::default();
    let mut games: Vec<IndependentGame> = (0..30).map(|_| random_game(&mut rng, 8)).collect();
    games.push(swap_game());
    for rows in [[vec![0], vec![1]], [vec![0], vec![0]]] {
        games.push(build_transpose_game(2, &rows).unwrap());
    }
    let mut checked = 0;
    for (i, g) in games.iter().enumerate() {
        let base = value_exact(g, &budget).unwrap().value;
        for n in 1..=3u32 {
            let Ok(gn) = repeat(g, n as usize) else { continue };
            if gn.joint_table_bits() > 24 {
                continue;
            }
            let exact = value_exact(&gn, &budget).unwrap().value;
            let (lower, upper) = repeated_value_bounds(g, n, &budget).unwrap();
            let power = checked_pow(base, n).unwrap();
            check(lower <= exact && exact <= upper && exact >= power, || {
                format!("game {i}, n={n}: {lower} <= {exact} <= {upper}, base^n {power}")
            })?;
            checked += 1;
        }
    }
    check(checked >= 40, || format!("only {checked} pairs were feasible"))?;
    Ok(format!("{checked} game/n pairs, no violations"))
}

fn c04_matrix_census() -> Outcome {
    let start = Instant::now();
    let budget = SearchBudget::default();
    let mut rigid = 0;
    for code in 0u64..512 {
        let rows: Vec<u64> = (0..3).map(|i| (code >> (3 * i)) & 0b111).collect();
        let a = BitMatrix::from_row_masks(3, &rows);
        // C ranges over rows of weight <= 1: 4 choices per row
        let choices = [0u64, 1, 2, 4];
        let oracle_not_rigid = (0..64).any(|c: usize| {
            let sum: Vec<u64> = (0..3).map(|i| rows[i] ^ choices[(c >> (2 * i)) & 3]).collect();
            rank_le_one(&sum)
        });
        let rep = is_matrix_rigid(&a, 1, 1, &budget).map_err(|e| e.to_string())?;
        check(rep.rigid != oracle_not_rigid, || format!("matrix {rows:?}: verdict {} disagrees", rep.rigid))?;
        if rep.rigid {
            rigid += 1;
            continue;
        }
        let w = rep.witness.as_ref().ok_or_else(|| format!("matrix {rows:?}: no witness"))?;
        let (b, c) = (masks(&w.b), masks(&w.c));
        let sums: Vec<u64> = b.iter().zip(&c).map(|(x, y)| x ^ y).collect();
        check(sums == rows && rank_le_one(&b) && c.iter().all(|r| r.count_ones() <= 1), || {
            format!("matrix {rows:?}: witness B={b:?} C={c:?} fails")
        })?;
        w.validate(&a, 1, 1).map_err(|e| e.to_string())?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("512 matrices, {rigid} rigid"))
}

fn c05_kronecker_lift() -> Outcome {
    let mut rng = seeded(5);
    let mut mismatches = 0;
    for _ in 0..100 {
        let k = rng.random_range(1..=4usize);
        let n = rng.random_range(1..=4usize);
        let a = BitMatrix::random(k, k, &mut rng);
        let f = BooleanFunction::from_matrix(&a).unwrap();
        let lift = tensor_lift(&f, n).unwrap();
        let kron = a.kron_identity(n).unwrap();
        for _ in 0..100 {
            let x = BitVector::random(n * k, &mut rng);
            if lift.eval(&x).unwrap() != kron.mul_vec(&x).unwrap() {
                mismatches += 1;
            }
        }
    }
    check(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok("10000 evaluations agree".into())
}

fn c06_amplification() -> Outcome {
    let budget = FunctionBudget::default();
    let mut lifted_count = 0;
    for code in 0..256 {
        let f = BooleanFunction::from_code(2, code).unwrap();
        // every value is at least 1/4 at k = 2, s = 1, so r = 2 never holds
        let rep = is_function_rigid(&f, Ratio::from_integer(2), 1, &budget).unwrap();
        let cert = rep.certificate.ok_or_else(|| format!("f={code}: no certificate"))?;
        let base = (0..4u64).filter(|&x| oracle_cert_eval(&cert, x) == f.eval(x)).count() as u64;
        check(base == cert.agreement_count, || format!("f={code}: base agreement {base} vs {}", cert.agreement_count))?;
        let lifted = amplify_nonrigidity(&cert, &f, 2).map_err(|e| e.to_string())?;
        let recount = (0..16u64).filter(|&x| oracle_cert_eval(&lifted, x) == oracle_tensor(&f, 2, x)).count() as u64;
        let p = Ratio::new(base, 4);
        check(Ratio::new(recount, 16) == p * p && lifted.agreement_count == recount, || {
            format!("f={code}: lifted agreement {recount}/16 (claimed {}), p = {p}", lifted.agreement_count)
        })?;
        lifted_count += 1;
    }
    Ok(format!("{lifted_count} certificates lifted, all p^2"))
}

fn c07_observer() -> Outcome {
    let mut rng = seeded(7);
    let budget = SolverBudget::default();
    for i in 0..20 {
        let g = random_game(&mut rng, 10);
        let with = add_observer_player(&g).map_err(|e| e.to_string())?;
        let (v, w) = (value_exact(&g, &budget).unwrap().value, value_exact(&with, &budget).unwrap().value);
        check(v == w, || format!("game {i}: {v} without observer, {w} with"))?;
    }
    Ok("20 games unchanged".into())
}

fn c08_transpose() -> Outcome {
    let budget = SolverBudget::default();
    let mut report = Vec::new();
    let mut ok = true;
    for r0 in 0..2 {
        for r1 in 0..2 {
            let g = build_transpose_game(2, &[vec![r0], vec![r1]]).unwrap();
            let value = value_exhaustive(&g, &budget).unwrap().value;
            let oracle = oracle_value(&g);
            let marginals: Vec<Value> = (0..2).map(|j| g.player_marginal_value(j).unwrap()).collect();
            let majority: Vec<Value> = (0..2).map(|j| oracle_marginal(&g, j)).collect();
            let half = Ratio::new(1, 2);
            ok &= value == oracle && value == half && marginals == majority && marginals.iter().all(|m| *m == half);
            report.push(format!("S=({{{r0}}},{{{r1}}}) value {value} marginals {}/{}", marginals[0], marginals[1]));
        }
    }
    let detail = report.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c09_tensor_machine() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(9);
    for k in [2usize, 3] {
        let tm = gen_tensor_k_machine(k, DEFAULT_TENSOR_K_CAP).map_err(|e| e.to_string())?;
        let mut per_n = Vec::new();
        for n in [4usize, 8, 16, 32] {
            let mut steps_seen = BTreeSet::new();
            for _ in 0..100 {
                let f = BooleanFunction::random(k, &mut rng);
                let x = BitVector::random(n * k, &mut rng);
                let input = encode_tensor_input(&f, &x, n).unwrap();
                let res = run_untraced(&tm.machine, &input, &[], 1_000_000).map_err(|e| e.to_string())?;
                let expected = oracle_tensor_bits(&f, n, &x).to_string();
                check(res.output == expected, || format!("k={k} n={n}: output {} expected {expected}", res.output))?;
                let bound = tm.c_k * Ratio::from_integer((n * (k << k)) as u64);
                check(Ratio::from_integer(res.steps) <= bound, || format!("k={k} n={n}: {} steps > {bound}", res.steps))?;
                steps_seen.insert(res.steps);
            }
            let steps = *steps_seen.last().unwrap();
            if n >= 8 {
                per_n.push(steps as f64 / n as f64);
            }
        }
        let max = per_n.iter().cloned().fold(f64::MIN, f64::max);
        let min = per_n.iter().cloned().fold(f64::MAX, f64::min);
        check(max / min <= 1.5, || format!("k={k}: steps/n ratio {:.3}", max / min))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok("800 runs match, steps/n ratios within 1.5".into())
}

/// Independent scan: for each tape and block, the segments touching it.
fn oracle_graph(trace: &RunTrace, b: u64) -> BTreeSet<(usize, usize)> {
    let a = trace.steps.div_ceil(b) as usize;
    let mut touched = std::collections::BTreeMap::<(usize, i64), BTreeSet<usize>>::new();
    for i in 0..a {
        for c in (i as u64 * b)..((i as u64 + 1) * b).min(trace.steps) {
            for tape in 0..trace.tapes {
                let pos = trace.positions[c as usize * trace.tapes + tape];
                touched.entry((tape, pos.div_euclid(b as i64))).or_default().insert(i);
            }
        }
    }
    let mut edges: BTreeSet<(usize, usize)> = (1..a).map(|j| (j - 1, j)).collect();
    for segs in touched.values() {
        let segs: Vec<usize> = segs.iter().copied().collect();
        for (x, &i) in segs.iter().enumerate() {
            for &j in &segs[x + 1..] {
                // pairwise: an edge when nothing strictly between touches it
                if !segs.iter().any(|&l| i < l && l < j) {
                    edges.insert((i, j));
                }
            }
        }
    }
    edges
}

fn c10_computation_graph() -> Outcome {
    let mut rng = seeded(10);
    let tensor = gen_tensor_k_machine(2, DEFAULT_TENSOR_K_CAP).unwrap();
    for t in 0..20 {
        let (machine, input) = if t % 4 == 3 {
            let f = BooleanFunction::random(2, &mut rng);
            let n = rng.random_range(2..=6usize);
            let x = BitVector::random(2 * n, &mut rng);
            (tensor.machine.clone(), encode_tensor_input(&f, &x, n).unwrap())
        } else {
            let m = MachineSpec::random(&mut rng, 3, 1, 1);
            let len = rng.random_range(0..8);
            let input: Vec<char> = (0..len).map(|_| if rng.random_bool(0.5) { '1' } else { '0' }).collect();
            (m, input)
        };
        let trace = run_partial(&machine, &input, &[], 300).map_err(|e| e.to_string())?;
        let b = rng.random_range(1..=5u64);
        let st = segment(&trace, b).unwrap();
        let g = computation_graph(&st);
        let expected = oracle_graph(&trace, b);
        let got: BTreeSet<(usize, usize)> = g.edges.iter().copied().collect();
        check(got == expected, || format!("trace {t} (b={b}): graph differs from the scan"))?;
        check((1..g.vertices).all(|j| got.contains(&(j - 1, j))), || format!("trace {t}: path edge missing"))?;
    }
    for a in 1..=40 {
        let p = predecessor_profile(&ComputationGraph::path(a), &[]).unwrap();
        check(p.max == a - 1, || format!("path of {a}: max {}", p.max))?;
    }
    Ok("20 traces match the scan; path profiles a-1".into())
}

fn c11_depth2() -> Outcome {
    let mut rng = seeded(11);
    for t in 0..50 {
        let k = rng.random_range(1..=4usize);
        let w = rng.random_range(0..=k);
        let b1 = BitMatrix::random(k, w, &mut rng);
        let b2 = BitMatrix::random(w, k, &mut rng);
        let c = BitMatrix::from_fn(k, k, |_, _| rng.random_bool(0.3));
        let a = b1.try_mul(&b2).unwrap().try_add(&c).unwrap();
        let rows = masks(&a);
        let circuit = depth2_from_decomposition(&a, &b1, &b2, &c).map_err(|e| e.to_string())?;
        for x in 0..1u64 << k {
            check(circuit.eval(x) == apply(&rows, x), || format!("decomposition {t}: differs at x={x}"))?;
        }
        let cert = nonrigidity_from_depth2(&circuit).map_err(|e| e.to_string())?;
        check(cert.fiber_size >= 1 << (k - w), || format!("decomposition {t}: fiber {} < 2^{}", cert.fiber_size, k - w))?;
        let agree = (0..1u64 << k).filter(|&x| oracle_cert_eval(&cert.certificate, x) == apply(&rows, x)).count() as u64;
        check(agree == cert.certificate.agreement_count && agree >= cert.fiber_size, || {
            format!("decomposition {t}: recount {agree}, claimed {}", cert.certificate.agreement_count)
        })?;
        cert.certificate.validate(|x| apply(&rows, x)).map_err(|e| e.to_string())?;
        let low = masks(&b1.try_mul(&b2).unwrap());
        check(naive_rank(&low) <= w, || format!("decomposition {t}: rank(B1 B2) > {w}"))?;
    }
    Ok("50 circuits exact, certificates revalidate".into())
}

fn c12_log_star() -> Outcome {
    let cases = [(1, 0), (2, 1), (4, 2), (16, 3), (65536, 4)];
    for (n, l) in cases {
        check(log_star(n) == l, || format!("log*({n}) = {}, expected {l}", log_star(n)))?;
    }
    Ok("1->0, 2->1, 4->2, 16->3, 65536->4".into())
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Runs the binary twice per command with identical configs and compares
/// every produced file byte for byte.
fn c13_determinism() -> Outcome {
    let fx = fixtures();
    let f = |name: &str| fx.join(name).to_string_lossy().into_owned();
    let commands: Vec<(Vec<String>, Option<&str>)> = vec![
        (vec!["rank".into(), "--matrix".into(), f("m3.txt")], None),
        (vec!["rigid-matrix".into(), "--matrix".into(), f("m3.txt"), "--r".into(), "1".into(), "--s".into(), "1".into()], Some("--witness-out")),
        (vec!["rigid-function".into(), "--random-k".into(), "2".into(), "--r".into(), "1".into(), "--s".into(), "1".into()], Some("--certificate-out")),
        (vec!["census".into(), "--k".into(), "3".into(), "--r".into(), "1".into(), "--s".into(), "1".into(), "--samples".into(), "20".into()], None),
        (vec!["game-value".into(), "--game".into(), f("swap_game.json")], None),
        (vec!["repeat-decay".into(), "--game".into(), f("swap_game.json"), "--n-max".into(), "2".into()], None),
        (vec!["transpose-game".into(), "--n".into(), "2".into()], None),
        (vec!["product-game".into(), "--n".into(), "2".into(), "--x-views".into(), "1;0".into(), "--y-views".into(), "1;0".into(), "--bnb-bits".into(), "64".into()], None),
        (vec!["tm-run".into(), "--tensor-k".into(), "2".into(), "--n".into(), "6".into()], Some("--trace-out")),
        (vec!["tm-graph".into(), "--machine".into(), f("copier.tm"), "--input".into(), "0110100111".into(), "--b".into(), "3".into(), "--separator-budget".into(), "1".into()], None),
        (vec!["tensor-k-bench".into(), "--k".into(), "2".into(), "--n".into(), "4,8".into(), "--instances".into(), "3".into()], None),
        (vec!["validate".into(), "--function".into(), f("identity2.txt"), "--certificate".into(), f("identity2_cert.json")], None),
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (args, side) in &commands {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{}_{rep}.csv", args[0]));
            let side_path = dir.path().join(format!("{}_{rep}.json", args[0]));
            for format in ["csv", "json"] {
                let mut cmd = Command::new(env!("CARGO_BIN_EXE_blockrig"));
                cmd.args(args).args(["--seed", "17", "--format", format, "--out"]).arg(&out);
                if let Some(flag) = side {
                    cmd.arg(flag).arg(&side_path);
                }
                let status = cmd.output().map_err(|e| e.to_string())?;
                check(status.status.success(), || {
                    format!("{} failed: {}", args[0], String::from_utf8_lossy(&status.stderr))
                })?;
                let mut files = vec![std::fs::read(&out).map_err(|e| e.to_string())?];
                if side.is_some() {
                    files.push(std::fs::read(&side_path).map_err(|e| e.to_string())?);
                }
                outputs.push((rep, format, files));
            }
        }
        let (first, second): (Vec<_>, Vec<_>) = outputs.into_iter().partition(|(rep, _, _)| *rep == 0);
        for ((_, fmt, a), (_, _, b)) in first.iter().zip(&second) {
            check(a == b, || format!("{} ({fmt}) output differs between runs", args[0]))?;
        }
    }
    Ok(format!("{} commands byte-identical in csv and json", commands.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("1 solver equivalence", c01_solver_equivalence),
        ("2 swap game", c02_swap_game),
        ("3 sandwich suite", c03_sandwich),
        ("4 matrix census", c04_matrix_census),
        ("5 kronecker/lift consistency", c05_kronecker_lift),
        ("6 amplification", c06_amplification),
        ("7 observer transform", c07_observer),
        ("8 transpose game n=2", c08_transpose),
        ("9 tensor_k machine", c09_tensor_machine),
        ("10 computation graph", c10_computation_graph),
        ("11 depth-2 round trip", c11_depth2),
        ("12 log_star", c12_log_star),
        ("13 determinism", c13_determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{took:.2?}]"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail} [{took:.2?}]");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
