use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value as Json};

use blockrig::exact::{format_value, parse_ratio, to_f64};
use blockrig::games::{
    build_product_game, build_transpose_game, repetition_decay_experiment, value_exact, value_exhaustive,
    GameDescription, IndependentGame, SolverBudget, SolverKind, ValueReport,
};
use blockrig::rigidity::{
    is_block_rigid_function, is_block_rigid_matrix, is_function_rigid, is_matrix_rigid, rigidity_census,
    BooleanFunction, CensusMode, FunctionBudget, MatrixDecomposition, NonRigidityCertificate, SearchBudget,
};
use blockrig::rng::seeded;
use blockrig::tmsim::{
    computation_graph, encode_tensor_input, gen_tensor_k_machine, greedy_separator, is_block_respecting,
    predecessor_profile, run_partial, run_untraced, segment, summary_extract, tensor_k_reference, MachineSpec,
    DEFAULT_TENSOR_K_CAP,
};
use blockrig::{BitMatrix, BitVector, BlockLayout, Value};

use crate::args::*;
use crate::output::{write_artifact, write_table, Table};

struct Ctx<'a> {
    common: &'a Common,
    config: Json,
}

impl Ctx<'_> {
    fn solver_budget(&self) -> SolverBudget {
        SolverBudget {
            exhaustive_bits: self.common.exhaustive_bits,
            branch_bound_bits: self.common.bnb_bits,
        }
    }

    fn function_budget(&self) -> FunctionBudget {
        FunctionBudget {
            solver: self.solver_budget(),
            max_families: self.common.max_families,
        }
    }

    fn search_budget(&self) -> SearchBudget {
        SearchBudget {
            max_candidates: u128::from(self.common.max_candidates),
            max_block_dim: self.common.max_block_dim,
        }
    }

    fn finish(&self, table: Table) -> Result<()> {
        write_table(&self.config, &table, self.common.format, self.common.out.as_deref())
    }

    fn artifact(&self, key: &str, payload: &impl Serialize, path: &Path) -> Result<()> {
        write_artifact(&self.config, key, payload, path)
    }
}

/// The configuration echoed into every output file.
pub fn config_json(cli: &Cli) -> Json {
    let c = &cli.common;
    json!({
        "command": cli.command.name(),
        "seed": c.seed,
        "format": c.format,
        "budget": {
            "bnb_bits": c.bnb_bits,
            "exhaustive_bits": c.exhaustive_bits,
            "max_families": c.max_families,
            "max_candidates": c.max_candidates,
            "max_block_dim": c.max_block_dim,
        },
        "params": &cli.command,
    })
}

pub fn run(cli: &Cli) -> Result<()> {
    let ctx = Ctx {
        common: &cli.common,
        config: config_json(cli),
    };
    match &cli.command {
        Command::Rank(a) => rank(&ctx, a),
        Command::RigidMatrix(a) => rigid_matrix(&ctx, a),
        Command::RigidFunction(a) => rigid_function(&ctx, a),
        Command::Census(a) => census(&ctx, a),
        Command::GameValue(a) => game_value(&ctx, a),
        Command::RepeatDecay(a) => repeat_decay(&ctx, a),
        Command::TransposeGame(a) => transpose_game(&ctx, a),
        Command::ProductGame(a) => product_game(&ctx, a),
        Command::TmRun(a) => tm_run(&ctx, a),
        Command::TmGraph(a) => tm_graph(&ctx, a),
        Command::TensorKBench(a) => tensor_k_bench(&ctx, a),
        Command::Validate(a) => validate(&ctx, a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<BitMatrix> {
    BitMatrix::parse_text(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_function(path: &Path) -> Result<BooleanFunction> {
    BooleanFunction::parse_text(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn dec(v: &Value) -> String {
    format!("{:.6}", to_f64(v))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn matrix_rows(m: &BitMatrix) -> String {
    m.to_text().lines().skip(1).collect::<Vec<_>>().join("/")
}

pub fn parse_views(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|set| {
            set.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| anyhow!("bad index {t:?} in views {s:?}")))
                .collect()
        })
        .collect()
}

fn fmt_views(views: &[Vec<usize>]) -> String {
    views
        .iter()
        .map(|v| v.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn solve(game: &IndependentGame, solver: Solver, budget: &SolverBudget) -> Result<ValueReport> {
    Ok(match solver {
        Solver::Bnb => value_exact(game, budget)?,
        Solver::Exhaustive => value_exhaustive(game, budget)?,
    })
}

fn min_marginal(game: &IndependentGame) -> Result<Value> {
    let mut best = Value::from_integer(1);
    for j in 0..game.players() {
        best = best.min(game.player_marginal_value(j)?);
    }
    Ok(best)
}

fn rank(ctx: &Ctx, a: &RankArgs) -> Result<()> {
    let m = read_matrix(&a.matrix)?;
    let mut t = Table::new(&["rows", "cols", "rank"]);
    t.push(vec![m.rows().to_string(), m.cols().to_string(), m.rank().to_string()]);
    ctx.finish(t)
}

fn layout_for(m: &BitMatrix, k: usize) -> Result<BlockLayout> {
    if k == 0 || m.rows() % k != 0 {
        bail!("a {}x{} matrix cannot be split into k = {k} blocks", m.rows(), m.cols());
    }
    Ok(BlockLayout::new(m.rows() / k, k)?)
}

fn rigid_matrix(ctx: &Ctx, a: &RigidMatrixArgs) -> Result<()> {
    let m = read_matrix(&a.matrix)?;
    let report = match a.block_k {
        Some(k) => is_block_rigid_matrix(&m, layout_for(&m, k)?, a.r, a.s, &ctx.search_budget())?,
        None => is_matrix_rigid(&m, a.r, a.s, &ctx.search_budget())?,
    };
    let mut t = Table::new(&["n", "r", "s", "block_k", "rigid", "nodes", "witness_b", "witness_c"]);
    let (wb, wc) = report
        .witness
        .as_ref()
        .map_or((String::new(), String::new()), |w| (matrix_rows(&w.b), matrix_rows(&w.c)));
    t.push(vec![
        m.rows().to_string(),
        a.r.to_string(),
        a.s.to_string(),
        opt(a.block_k),
        report.rigid.to_string(),
        report.nodes.to_string(),
        wb,
        wc,
    ]);
    if let (Some(path), Some(w)) = (&a.witness_out, &report.witness) {
        ctx.artifact("decomposition", w, path)?;
    }
    ctx.finish(t)
}

fn load_function(ctx: &Ctx, src: &FunctionSource) -> Result<BooleanFunction> {
    match (&src.function, src.random_k) {
        (Some(path), _) => read_function(path),
        (None, Some(k)) => {
            if k == 0 || k > 6 {
                bail!("--random-k must be in 1..=6, got {k}");
            }
            Ok(BooleanFunction::random(k, &mut seeded(ctx.common.seed)))
        }
        (None, None) => bail!("one of --function and --random-k is required"),
    }
}

fn rigid_function(ctx: &Ctx, a: &RigidFunctionArgs) -> Result<()> {
    let f = load_function(ctx, &a.source)?;
    let r = parse_ratio(&a.r)?;
    let n = a.block_n.unwrap_or(1);
    let report = if n == 1 {
        is_function_rigid(&f, r, a.s, &ctx.function_budget())?
    } else {
        is_block_rigid_function(&f, n, r, a.s, &ctx.function_budget())?
    };
    let mut t = Table::new(&[
        "k",
        "n",
        "r",
        "s",
        "rigid",
        "value",
        "value_decimal",
        "worst_views",
        "families",
        "agreement",
    ]);
    t.push(vec![
        f.arity().to_string(),
        n.to_string(),
        format_value(&r),
        a.s.to_string(),
        report.rigid.to_string(),
        format_value(&report.value),
        dec(&report.value),
        fmt_views(report.worst.sets()),
        report.families.to_string(),
        opt(report.certificate.as_ref().map(|c| c.agreement_count)),
    ]);
    if let (Some(path), Some(cert)) = (&a.certificate_out, &report.certificate) {
        ctx.artifact("certificate", cert, path)?;
    }
    ctx.finish(t)
}

fn census(ctx: &Ctx, a: &CensusArgs) -> Result<()> {
    let r = parse_ratio(&a.r)?;
    let mode = match a.samples {
        Some(count) => CensusMode::Sample {
            count,
            seed: ctx.common.seed,
        },
        None => CensusMode::Exhaustive,
    };
    let report = rigidity_census(a.k, r, a.s, mode, &ctx.function_budget())?;
    let mut t = Table::new(&["k", "r", "s", "mode", "total", "rigid", "fraction", "fraction_decimal"]);
    let fraction = report.fraction();
    t.push(vec![
        a.k.to_string(),
        format_value(&r),
        a.s.to_string(),
        if a.samples.is_some() { "sample" } else { "exhaustive" }.to_string(),
        report.total.to_string(),
        report.rigid.to_string(),
        format_value(&fraction),
        dec(&fraction),
    ]);
    ctx.finish(t)
}

fn load_game(path: &Path) -> Result<IndependentGame> {
    let (desc, base) = GameDescription::load(path)?;
    desc.build(&base).with_context(|| format!("building the game in {}", path.display()))
}

fn game_value(ctx: &Ctx, a: &GameValueArgs) -> Result<()> {
    let game = load_game(&a.game)?;
    let rep = solve(&game, a.solver, &ctx.solver_budget())?;
    let mut t = Table::new(&[
        "players",
        "question_bits",
        "answer_len",
        "table_bits",
        "solver",
        "value",
        "value_decimal",
        "wins",
        "questions",
        "nodes",
        "prunes",
        "strategy",
    ]);
    let strategy = rep
        .strategy
        .tables
        .iter()
        .map(|tab| tab.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";");
    t.push(vec![
        game.players().to_string(),
        game.question_bits().to_string(),
        game.answer_len().to_string(),
        game.joint_table_bits().to_string(),
        match rep.solver {
            SolverKind::Exhaustive => "exhaustive",
            SolverKind::BranchAndBound => "bnb",
        }
        .to_string(),
        format_value(&rep.value),
        dec(&rep.value),
        rep.wins.to_string(),
        rep.questions.to_string(),
        rep.stats.nodes.to_string(),
        rep.stats.prunes.to_string(),
        strategy,
    ]);
    ctx.finish(t)
}

fn repeat_decay(ctx: &Ctx, a: &RepeatDecayArgs) -> Result<()> {
    let game = load_game(&a.game)?;
    let rows = repetition_decay_experiment(&game, a.n_max, &ctx.solver_budget())?;
    let mut t = Table::new(&["n", "lower", "exact", "upper", "exact_exponent", "upper_exponent"]);
    let exp = |e: Option<f64>| e.map(|x| format!("{x:.6}")).unwrap_or_default();
    for row in rows {
        t.push(vec![
            row.n.to_string(),
            format_value(&row.lower),
            opt(row.exact.as_ref().map(format_value)),
            format_value(&row.upper),
            exp(row.exact_exponent),
            exp(row.upper_exponent),
        ]);
    }
    ctx.finish(t)
}

/// Every assignment of one row to each of `n` players, first player slowest.
fn singleton_families(n: usize) -> Vec<Vec<Vec<usize>>> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut fam = vec![Vec::new(); n];
            for j in (0..n).rev() {
                fam[j] = vec![code % n];
                code /= n;
            }
            fam
        })
        .collect()
}

fn transpose_game(ctx: &Ctx, a: &TransposeArgs) -> Result<()> {
    let families = match &a.views {
        Some(v) => vec![parse_views(v)?],
        None => {
            if a.n == 0 || a.n > 4 {
                bail!("enumerating singleton families needs 1 <= n <= 4, got {}", a.n);
            }
            singleton_families(a.n)
        }
    };
    let mut t = Table::new(&["n", "views", "value", "value_decimal", "marginal", "marginal_decimal"]);
    for views in families {
        let game = build_transpose_game(a.n, &views)?;
        let rep = solve(&game, a.solver, &ctx.solver_budget())?;
        let marginal = min_marginal(&game)?;
        t.push(vec![
            a.n.to_string(),
            fmt_views(&views),
            format_value(&rep.value),
            dec(&rep.value),
            format_value(&marginal),
            dec(&marginal),
        ]);
    }
    ctx.finish(t)
}

fn product_game(ctx: &Ctx, a: &ProductArgs) -> Result<()> {
    let x = parse_views(&a.x_views)?;
    let y = parse_views(&a.y_views)?;
    let game = build_product_game(a.n, &x, &y)?;
    let rep = value_exact(&game, &ctx.solver_budget())?;
    let marginal = min_marginal(&game)?;
    let mut t = Table::new(&[
        "n",
        "x_views",
        "y_views",
        "value",
        "value_decimal",
        "marginal",
        "marginal_decimal",
    ]);
    t.push(vec![
        a.n.to_string(),
        fmt_views(&x),
        fmt_views(&y),
        format_value(&rep.value),
        dec(&rep.value),
        format_value(&marginal),
        dec(&marginal),
    ]);
    ctx.finish(t)
}

struct Loaded {
    machine: MachineSpec,
    input: Vec<char>,
    advice: Vec<char>,
    b: u64,
}

fn symbols(text: &str) -> Vec<char> {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

fn load_machine(ctx: &Ctx, src: &MachineSource) -> Result<Loaded> {
    let advice = match &src.advice_file {
        Some(path) => symbols(&read(path)?),
        None => Vec::new(),
    };
    let (machine, input, default_b) = match (&src.machine, src.tensor_k) {
        (Some(path), _) => {
            let machine = MachineSpec::parse_text(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            let input = match (&src.input, &src.input_file) {
                (Some(s), _) => symbols(s),
                (None, Some(p)) => symbols(&read(p)?),
                (None, None) => Vec::new(),
            };
            (machine, input, None)
        }
        (None, Some(k)) => {
            let n = src.n.ok_or_else(|| anyhow!("--tensor-k needs --n"))?;
            let tm = gen_tensor_k_machine(k, DEFAULT_TENSOR_K_CAP)?;
            let mut rng = seeded(ctx.common.seed);
            let f = BooleanFunction::random(k, &mut rng);
            let x = BitVector::random(n * k, &mut rng);
            (tm.machine, encode_tensor_input(&f, &x, n)?, Some(n as u64))
        }
        (None, None) => bail!("one of --machine and --tensor-k is required"),
    };
    let b = src
        .b
        .or(default_b)
        .ok_or_else(|| anyhow!("--b is required with --machine"))?;
    if b == 0 {
        bail!("--b must be at least 1");
    }
    Ok(Loaded {
        machine,
        input,
        advice,
        b,
    })
}

#[derive(Serialize)]
struct TraceConfig {
    config: u64,
    state: String,
    heads: Vec<i64>,
}

#[derive(Serialize)]
struct TraceExport {
    steps: u64,
    halted: bool,
    b: u64,
    every: u64,
    configs: Vec<TraceConfig>,
    /// `segments[i][tape]`: blocks visited.
    segments: Vec<Vec<Vec<i64>>>,
}

fn tm_run(ctx: &Ctx, a: &TmRunArgs) -> Result<()> {
    let l = load_machine(ctx, &a.source)?;
    let trace = run_partial(&l.machine, &l.input, &l.advice, a.source.step_limit)?;
    let st = segment(&trace, l.b)?;
    let (respecting, violation) = is_block_respecting(&st);
    let mut t = Table::new(&[
        "steps",
        "halted",
        "output",
        "b",
        "segments",
        "block_respecting",
        "violation_step",
        "violation_tape",
    ]);
    t.push(vec![
        trace.steps.to_string(),
        trace.halted.to_string(),
        trace.output.clone(),
        l.b.to_string(),
        st.a().to_string(),
        respecting.to_string(),
        opt(violation.map(|v| v.step)),
        opt(violation.map(|v| v.tape)),
    ]);
    if let Some(path) = &a.trace_out {
        let every = a.trace_every.max(1);
        let mut picks: Vec<u64> = (0..=trace.steps).step_by(every as usize).collect();
        if picks.last() != Some(&trace.steps) {
            picks.push(trace.steps);
        }
        let configs = picks
            .into_iter()
            .map(|c| TraceConfig {
                config: c,
                state: l.machine.states()[trace.state(c)].clone(),
                heads: (0..trace.tapes).map(|tape| trace.position(c, tape)).collect(),
            })
            .collect();
        let export = TraceExport {
            steps: trace.steps,
            halted: trace.halted,
            b: l.b,
            every,
            configs,
            segments: st.visits.clone(),
        };
        ctx.artifact("trace", &export, path)?;
    }
    ctx.finish(t)
}

fn tm_graph(ctx: &Ctx, a: &TmGraphArgs) -> Result<()> {
    let l = load_machine(ctx, &a.source)?;
    let trace = run_partial(&l.machine, &l.input, &l.advice, a.source.step_limit)?;
    let st = segment(&trace, l.b)?;
    let g = computation_graph(&st);
    let profile = predecessor_profile(&g, &[])?;
    let sep = greedy_separator(&g, a.separator_budget)?;
    let summary = summary_extract(&l.machine, &trace, &st, &sep.removed)?;
    let mut t = Table::new(&[
        "steps",
        "b",
        "vertices",
        "edges",
        "revisit_edges",
        "max_degree",
        "pred_max",
        "pred_mean",
        "separator",
        "sep_pred_max",
        "summary_bits",
    ]);
    t.push(vec![
        trace.steps.to_string(),
        l.b.to_string(),
        g.vertices.to_string(),
        g.edges.len().to_string(),
        g.revisit_edges().count().to_string(),
        g.max_degree().to_string(),
        profile.max.to_string(),
        format!("{:.6}", profile.mean),
        sep.removed.iter().map(usize::to_string).collect::<Vec<_>>().join(";"),
        sep.profile.max.to_string(),
        summary.bit_size().to_string(),
    ]);
    ctx.finish(t)
}

fn tensor_k_bench(ctx: &Ctx, a: &TensorBenchArgs) -> Result<()> {
    let tm = gen_tensor_k_machine(a.k, a.k_cap)?;
    let mut rng = seeded(ctx.common.seed);
    let mut t = Table::new(&[
        "k",
        "n",
        "m",
        "instances",
        "mismatches",
        "steps",
        "steps_per_n",
        "c_k",
        "bound",
    ]);
    let width = (a.k << a.k) as u64;
    for &n in &a.n {
        if n == 0 {
            bail!("row counts must be at least 1");
        }
        let mut mismatches = 0;
        let mut steps = 0;
        let limit = tm.steps(n as u64) * 2 + 1000;
        for _ in 0..a.instances {
            let f = BooleanFunction::random(a.k, &mut rng);
            let x = BitVector::random(n * a.k, &mut rng);
            let input = encode_tensor_input(&f, &x, n)?;
            let res = run_untraced(&tm.machine, &input, &[], limit)?;
            if res.output != tensor_k_reference(&f, &x, n)?.to_string() {
                mismatches += 1;
            }
            steps = steps.max(res.steps);
        }
        let bound: Ratio<u64> = tm.c_k * Ratio::from_integer(n as u64 * width);
        t.push(vec![
            a.k.to_string(),
            n.to_string(),
            (width as usize + n * a.k).to_string(),
            a.instances.to_string(),
            mismatches.to_string(),
            steps.to_string(),
            format!("{:.6}", steps as f64 / n as f64),
            format_value(&tm.c_k),
            format_value(&bound),
        ]);
    }
    ctx.finish(t)
}

/// Reads a JSON artifact, either bare or wrapped under `key`.
fn read_artifact<T: serde::de::DeserializeOwned>(path: &PathBuf, key: &str) -> Result<T> {
    let doc: Json = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let payload = doc.get(key).cloned().unwrap_or(doc);
    serde_json::from_value(payload).with_context(|| format!("reading the {key} in {}", path.display()))
}

fn validate(ctx: &Ctx, a: &ValidateArgs) -> Result<()> {
    let (kind, outcome) = match (&a.matrix, &a.function) {
        (Some(mpath), _) => {
            let m = read_matrix(mpath)?;
            let dpath = a.decomposition.as_ref().ok_or_else(|| anyhow!("--matrix needs --decomposition"))?;
            let d: MatrixDecomposition = read_artifact(dpath, "decomposition")?;
            let (r, s) = (a.r.unwrap_or(0), a.s.unwrap_or(0));
            let res = match a.block_k {
                Some(k) => d.validate_block(&m, layout_for(&m, k)?, r, s),
                None => d.validate(&m, r, s),
            };
            ("decomposition", res.map(|()| "ok".to_string()))
        }
        (None, Some(fpath)) => {
            let f = read_function(fpath)?;
            let cpath = a.certificate.as_ref().ok_or_else(|| anyhow!("--function needs --certificate"))?;
            let c: NonRigidityCertificate = read_artifact(cpath, "certificate")?;
            ("certificate", c.validate_function(&f).map(|()| c.agreement_count.to_string()))
        }
        (None, None) => bail!("give --matrix with --decomposition, or --function with --certificate"),
    };
    let mut t = Table::new(&["kind", "valid", "detail"]);
    let failure = outcome.as_ref().err().map(ToString::to_string);
    t.push(vec![
        kind.to_string(),
        outcome.is_ok().to_string(),
        outcome.unwrap_or_else(|e| e.to_string()),
    ]);
    ctx.finish(t)?;
    match failure {
        Some(msg) => bail!("{kind} is not valid: {msg}"),
        None => Ok(()),
    }
}
