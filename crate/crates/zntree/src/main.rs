//! Command-line front end: thin dispatchers over the library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use zntree::boundary::{dbar, gromov, Gromov, TreeOfTrees};
use zntree::output::{fmt_f64, Recorder, Table};
use zntree::walk::{
    cone_apexes, run_ensemble, stationarity_residual, strip_count, ConeMeasure, Measure,
    WalkOptions,
};
use zntree::workspace::{MeasureEntry, Workspace};
use zntree::{selftest, Error, Result, Word};

const USAGE_EXIT: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "zntree", version, about = "Z^n-words, Z^n-trees and random walks on their groups")]
struct Cli {
    /// Workspace JSON file, or one of the bundled names `free2`, `notmin`.
    #[arg(long, global = true, default_value = "free2")]
    workspace: String,
    /// Master seed; overrides the workspace seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV tables and the JSON sidecar.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads. Affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form, length and height of a group expression.
    Eval { expr: String },
    /// Run the reduced oracle suites.
    Selftest,
    /// Random walks.
    #[command(subcommand)]
    Walk(WalkCmd),
    /// Tree-of-trees exploration.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Boundary metrics.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Strip counts between two ends.
    #[command(subcommand)]
    Strip(StripCmd),
}

#[derive(Subcommand, Debug)]
enum WalkCmd {
    /// Sample an ensemble of walks and tabulate their ends.
    Run(WalkArgs),
}

#[derive(Args, Debug)]
struct WalkArgs {
    /// JSON list of `{"element": EXPR, "weight": W}`; defaults to the
    /// workspace measure.
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 200)]
    walks: usize,
    /// Depth of the cone table.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Also search every path for an S-subsequence.
    #[arg(long)]
    detect_s: bool,
}

#[derive(Subcommand, Debug)]
enum TreeCmd {
    /// Explore the ball of the given radius and list its classes.
    Explore {
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum MetricCmd {
    /// Distance between two points of the compactified tree.
    Pair {
        x: String,
        y: String,
        /// Radius of the explored ball; defaults to the workspace depth.
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum StripCmd {
    /// Count group elements on the line between two ends.
    Count {
        #[arg(long = "end-a")]
        end_a: String,
        #[arg(long = "end-b")]
        end_b: String,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_EXIT);
        }
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_workspace(name: &str) -> Result<Workspace> {
    let path = Path::new(name);
    if path.exists() {
        return Workspace::load(path);
    }
    match name {
        "free2" => Ok(Workspace::free2()),
        "notmin" => Ok(Workspace::notmin()),
        _ => Err(Error::Workspace(format!("{name}: no such file"))),
    }
}

fn dispatch(cli: &Cli) -> Result<u8> {
    if let Command::Selftest = cli.command {
        return cmd_selftest(cli.seed.unwrap_or(0));
    }
    let ws = load_workspace(&cli.workspace)?;
    let seed = cli.seed.unwrap_or(ws.config.seed);
    match &cli.command {
        Command::Eval { expr } => cmd_eval(&ws, expr),
        Command::Selftest => unreachable!("handled above"),
        Command::Walk(WalkCmd::Run(a)) => cmd_walk(cli, &ws, seed, a),
        Command::Tree(TreeCmd::Explore { depth }) => {
            cmd_tree(cli, &ws, depth.unwrap_or(ws.config.depth))
        }
        Command::Metric(MetricCmd::Pair { x, y, depth }) => {
            cmd_metric(cli, &ws, x, y, depth.unwrap_or(ws.config.depth))
        }
        Command::Strip(StripCmd::Count { end_a, end_b, kmax }) => {
            cmd_strip(cli, &ws, end_a, end_b, *kmax)
        }
    }
}

fn config_json(ws: &Workspace) -> serde_json::Value {
    serde_json::to_value(&ws.config).expect("config serializes")
}

fn cmd_eval(ws: &Workspace, expr: &str) -> Result<u8> {
    let w = ws.group.eval(expr)?;
    println!("{}", ws.group.format(&w));
    println!("length {}", w.len());
    println!("hbar {}", w.height());
    Ok(0)
}

fn cmd_selftest(seed: u64) -> Result<u8> {
    let report = selftest::run(seed);
    print!("{}", report.render());
    println!("report hash {}", report.hash());
    Ok(if report.passed() { 0 } else { 1 })
}

fn load_measure(ws: &Workspace, path: &Path) -> Result<Measure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Workspace(format!("{}: {e}", path.display())))?;
    let entries: Vec<MeasureEntry> =
        serde_json::from_str(&text).map_err(|e| Error::Workspace(e.to_string()))?;
    let mut cfg = ws.config.clone();
    cfg.measure = Some(entries);
    Ok(cfg.build()?.measure)
}

fn cmd_walk(cli: &Cli, ws: &Workspace, seed: u64, a: &WalkArgs) -> Result<u8> {
    let mu = match &a.measure {
        Some(p) => load_measure(ws, p)?,
        None => ws.measure.clone(),
    };
    let mut rec = Recorder::new("walk run");
    let ens = run_ensemble(&mu, a.walks, a.steps, seed, a.detect_s, &WalkOptions::default())?;
    let mut walks = Table::new(
        "walks",
        &["walk", "seed", "steps", "final_len", "final_hbar", "drift", "end_type", "stable_depth", "s_found"],
    );
    for s in &ens.summaries {
        walks.push(vec![
            s.walk.to_string(),
            seed.to_string(),
            s.steps.to_string(),
            s.final_len.to_string(),
            s.final_hbar.to_string(),
            fmt_f64(s.drift),
            s.end_type.map_or("inconclusive".into(), |t| t.to_string()),
            s.stable_depth.as_ref().map_or(String::new(), |d| d.to_string()),
            s.s_found.map_or(String::new(), |f| f.to_string()),
        ]);
    }
    rec.add(walks);
    let nu = ConeMeasure::from_ends(&ens.ends, a.depth)?;
    let mut cones = Table::new("cones", &["apex", "depth", "mass", "standard_error"]);
    for (apex, &p) in &nu.table {
        let se = (p * (1.0 - p) / nu.samples as f64).sqrt();
        let d = apex.len().first().to_string();
        cones.push(vec![ws.group.format(apex), d, fmt_f64(p), fmt_f64(se)]);
    }
    rec.add(cones);
    let apexes = cone_apexes(ws.dim(), ws.group.alphabet().len(), a.depth.min(2));
    let res = stationarity_residual(&ws.group, &nu, &mu, &apexes)?;
    let mut rt = Table::new("residuals", &["apex", "residual", "standard_error"]);
    for r in &res {
        rt.push(vec![ws.group.format(&r.apex), fmt_f64(r.value), fmt_f64(r.standard_error)]);
    }
    rec.add(rt);
    let mut summary = Table::new("summary", &["quantity", "value"]);
    let mut row = |k: &str, v: String| summary.push(vec![k.into(), v]);
    row("walks", a.walks.to_string());
    row("inconclusive", ens.inconclusive().to_string());
    row("mean_drift", fmt_f64(ens.mean_drift()));
    for k in 1..=ws.dim() {
        row(&format!("type_{k}_fraction"), fmt_f64(ens.type_fraction(k)));
    }
    if a.detect_s {
        row("s_rate", fmt_f64(ens.s_rate()));
    }
    for r in &summary.rows {
        println!("{} {}", r[0], r[1]);
    }
    rec.add(summary);
    let params = json!({"steps": a.steps, "walks": a.walks, "depth": a.depth, "seed": seed,
        "detect_s": a.detect_s, "measure": a.measure});
    let side = rec.write(&cli.out, config_json(ws), params)?;
    println!("wrote {}", side.display());
    Ok(0)
}

fn explore(ws: &Workspace, depth: usize) -> Result<(Vec<Word>, TreeOfTrees)> {
    let ball = ws.group.ball_enumerate(depth)?;
    let words: Vec<Word> = ball.elements.into_iter().map(|e| e.word).collect();
    let tree = TreeOfTrees::build(ws.dim(), words.iter())?;
    Ok((words, tree))
}

fn cmd_tree(cli: &Cli, ws: &Workspace, depth: usize) -> Result<u8> {
    let mut rec = Recorder::new("tree explore");
    let (words, tree) = explore(ws, depth)?;
    let mut hist = Table::new("class_histogram", &["level", "classes", "vertices"]);
    let mut classes = Table::new("classes", &["level", "index", "parent", "base_vertex", "vertices"]);
    for (j, level) in tree.levels().iter().enumerate() {
        let v: usize = level.iter().map(|c| c.vertex_count).sum();
        hist.push(vec![j.to_string(), level.len().to_string(), v.to_string()]);
        for (i, c) in level.iter().enumerate() {
            classes.push(vec![
                j.to_string(),
                (i + 1).to_string(),
                c.parent.map_or(String::new(), |p| p.to_string()),
                ws.group.format(&c.key),
                c.vertex_count.to_string(),
            ]);
        }
    }
    println!("vertices {}", words.len());
    println!("classes {}", tree.class_count());
    println!("gluings {}", tree.gluing_count());
    for r in &hist.rows {
        println!("level {} classes {} vertices {}", r[0], r[1], r[2]);
    }
    rec.add(hist);
    rec.add(classes);
    let side = rec.write(&cli.out, config_json(ws), json!({"depth": depth}))?;
    println!("wrote {}", side.display());
    Ok(0)
}

fn cmd_metric(cli: &Cli, ws: &Workspace, x: &str, y: &str, depth: usize) -> Result<u8> {
    let mut rec = Recorder::new("metric pair");
    let px = ws.parse_point(x)?;
    let py = ws.parse_point(y)?;
    let (_, tree) = explore(ws, depth)?;
    let d = dbar(&tree, &px, &py)?;
    let g = gromov(&px, &py, &Word::empty(ws.dim()))?;
    let gtext = match &g {
        Gromov::Finite(h) => h.to_string(),
        Gromov::Infinite => "inf".into(),
    };
    println!("distance {}", fmt_f64(d.value));
    println!("error_bound {}", fmt_f64(d.error_bound));
    println!("gromov_product {gtext}");
    let mut trace = Table::new("trace", &["level", "index", "virtual", "scale", "inner", "contribution"]);
    for t in &d.trace {
        trace.push(vec![
            t.class.level.to_string(),
            t.class.index.to_string(),
            t.class.virtual_class.to_string(),
            fmt_f64(t.scale),
            fmt_f64(t.inner),
            fmt_f64(t.contribution),
        ]);
    }
    rec.add(trace);
    let mut summary = Table::new("pair", &["x", "y", "distance", "error_bound", "tail_sum", "gromov_product"]);
    summary.push(vec![
        x.into(),
        y.into(),
        fmt_f64(d.value),
        fmt_f64(d.error_bound),
        fmt_f64(d.tail_sum),
        gtext,
    ]);
    rec.add(summary);
    let side = rec.write(&cli.out, config_json(ws), json!({"x": x, "y": y, "depth": depth}))?;
    println!("wrote {}", side.display());
    Ok(0)
}

fn cmd_strip(cli: &Cli, ws: &Workspace, a: &str, b: &str, kmax: usize) -> Result<u8> {
    let mut rec = Recorder::new("strip count");
    let ea = ws.parse_end(a)?;
    let eb = ws.parse_end(b)?;
    let s = strip_count(&ws.group, &ea, &eb, kmax)?;
    let mut t = Table::new("strip", &["k", "count", "filtered", "criterion"]);
    for k in 0..kmax {
        t.push(vec![
            (k + 1).to_string(),
            s.counts[k].to_string(),
            s.filtered[k].to_string(),
            fmt_f64(s.criterion[k]),
        ]);
        println!("k {} count {} filtered {}", k + 1, s.counts[k], s.filtered[k]);
    }
    println!("loglog_slope {}", fmt_f64(s.slope));
    println!("criterion_slope {}", fmt_f64(s.criterion_slope));
    rec.add(t);
    let side = rec.write(
        &cli.out,
        config_json(ws),
        json!({"end_a": a, "end_b": b, "kmax": kmax, "slope": s.slope, "criterion_slope": s.criterion_slope}),
    )?;
    println!("wrote {}", side.display());
    Ok(0)
}
