use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;
use std::time::Instant;

use lincom::harness::{self, Phase};
use lincom::metrics::cover_stats;
use lincom::{load_edge_list, Graph, Method, RunConfig, StartPolicy};
use serde::Serialize;

use crate::{cover_file, BenchArgs, CliError, DetectArgs, EvalArgs, MethodArg, PhaseArg, SweepStartArgs, SweepThresholdArgs};

fn load(path: &Path) -> Result<Graph, CliError> {
    let name = path.display().to_string();
    let file = File::open(path).map_err(|e| CliError::Read(name.clone(), e))?;
    let started = Instant::now();
    let (g, report) = load_edge_list(BufReader::new(file)).map_err(|e| CliError::Graph(name, e))?;
    eprintln!(
        "parse_ms\t{:.3}\tduplicates\t{}\tself_loops\t{}",
        started.elapsed().as_secs_f64() * 1e3,
        report.duplicate_edges,
        report.self_loops
    );
    Ok(g)
}

/// Writes to `path`, or standard output when there is none.
fn emit(path: Option<&Path>, body: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::Write(p.display().to_string(), e)),
        None => std::io::stdout()
            .write_all(body)
            .map_err(|e| CliError::Write("standard output".into(), e)),
    }
}

fn config(method: MethodArg, threshold: f64) -> RunConfig {
    RunConfig {
        method: match method {
            MethodArg::Ins => Method::Ins,
            MethodArg::Cond => Method::Cond,
        },
        threshold,
        ..RunConfig::default()
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Ins => "ins",
        Method::Cond => "cond",
    }
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("serializing to memory cannot fail");
    }
    w.into_inner().expect("flushing to memory cannot fail")
}

pub fn detect(a: &DetectArgs) -> Result<(), CliError> {
    let g = load(&a.input)?;
    let mut cfg = config(a.method, a.threshold);
    cfg.run_modmax = !a.skip_modmax;
    if a.start != "auto" {
        let v = g.id(&a.start).ok_or_else(|| CliError::UnknownNode(a.start.clone()))?;
        cfg.start = StartPolicy::Explicit(v);
    }
    cfg.validate(&g)?;
    let d = lincom::detect(&g, &cfg);
    emit(Some(&a.output), cover_file::render(&g, &d.cover).as_bytes())?;
    println!(
        "{}\t{}\t{}\t{:.3}\t{:.3}",
        g.node_count(),
        g.edge_count(),
        d.community_count(),
        d.modularity,
        d.total_time.as_secs_f64() * 1e3
    );
    Ok(())
}

pub fn eval(a: &EvalArgs) -> Result<(), CliError> {
    let g = load(&a.input)?;
    let name = a.cover.display().to_string();
    let file = File::open(&a.cover).map_err(|e| CliError::Read(name, e))?;
    let cover = cover_file::parse(&g, BufReader::new(file))?;
    let stats = cover_stats(&g, &cover);
    let mut out = format!("Q\t{:.3}\nk\t{}\nsize_histogram", stats.modularity, stats.communities);
    for (size, count) in &stats.size_histogram {
        out.push_str(&format!("\t{size}:{count}"));
    }
    out.push_str("\ncommunity\tsize\tconductance\n");
    for (i, (members, phi)) in cover.groups().iter().zip(&stats.conductances).enumerate() {
        out.push_str(&format!("{i}\t{}\t{phi:.3}\n", members.len()));
    }
    print!("{out}");
    Ok(())
}

#[derive(Serialize)]
struct BenchRow<'a> {
    dataset: &'a str,
    fraction: f64,
    method: &'static str,
    phase: &'static str,
    run: usize,
    time_ms: String,
    #[serde(rename = "Q")]
    q: String,
    k: usize,
}

pub fn bench(a: &BenchArgs) -> Result<(), CliError> {
    if let Some(f) = a.fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(CliError::Usage(format!("fraction {f} is outside (0, 1]")));
    }
    let mut distinct = a.fractions.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CliError::Usage("a linear fit needs at least two distinct fractions".into()));
    }
    if a.repeats == 0 {
        return Err(CliError::Usage("repeats must be at least 1".into()));
    }
    let g = load(&a.input)?;
    let cfg = config(a.method, a.threshold);
    cfg.validate(&g)?;
    let phase = match a.phase {
        PhaseArg::Traversal => Phase::Traversal,
        PhaseArg::Full => Phase::Full,
    };
    let records = harness::bench(&g, &a.fractions, a.repeats, a.seed, &cfg, phase);
    let fit = harness::fit_medians(&records)?;

    let dataset = a.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let rows: Vec<BenchRow> = records
        .iter()
        .map(|r| BenchRow {
            dataset: &dataset,
            fraction: r.fraction,
            method: method_name(cfg.method),
            phase: phase.as_str(),
            run: r.run,
            time_ms: format!("{:.3}", r.time_ms),
            q: format!("{:.6}", r.modularity),
            k: r.communities,
        })
        .collect();
    emit(a.output.as_deref(), &csv_bytes(&rows))?;
    eprintln!(
        "fit\tslope_ms_per_edge\t{:.6e}\tintercept_ms\t{:.3}\tr2\t{:.4}",
        fit.slope, fit.intercept, fit.r_squared
    );
    Ok(())
}

#[derive(Serialize)]
struct ThresholdRow {
    r: f64,
    #[serde(rename = "Q")]
    q: String,
    k: usize,
}

pub fn sweep_threshold(a: &SweepThresholdArgs) -> Result<(), CliError> {
    let grid = harness::threshold_grid(a.from, a.to, a.step)?;
    let g = load(&a.input)?;
    for &r in &grid {
        RunConfig::ins(r).validate(&g)?;
    }
    let rows: Vec<ThresholdRow> = harness::threshold_sweep(&g, &grid, &RunConfig::default())
        .into_iter()
        .map(|row| ThresholdRow {
            r: row.r,
            q: format!("{:.6}", row.modularity),
            k: row.communities,
        })
        .collect();
    emit(a.output.as_deref(), &csv_bytes(&rows))
}

#[derive(Serialize)]
struct StartRow<'a> {
    start: &'a str,
    degree: usize,
    #[serde(rename = "Q")]
    q: String,
    k: usize,
}

pub fn sweep_start(a: &SweepStartArgs) -> Result<(), CliError> {
    let sample = match a.sample.as_str() {
        "all" => None,
        s => match s.parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(CliError::Usage(format!("--sample expects `all` or a positive count, got {s:?}"))),
        },
    };
    let g = load(&a.input)?;
    let cfg = config(a.method, a.threshold);
    cfg.validate(&g)?;
    let starts = harness::start_nodes(g.node_count(), sample, a.seed);
    let results = harness::start_sweep(&g, &starts, &cfg);
    let rows: Vec<StartRow> = results
        .iter()
        .map(|r| StartRow {
            start: g.label(r.start),
            degree: r.degree,
            q: format!("{:.6}", r.modularity),
            k: r.communities,
        })
        .collect();
    emit(a.output.as_deref(), &csv_bytes(&rows))?;
    let qs: Vec<f64> = results.iter().map(|r| r.modularity).collect();
    let s = harness::summarize(&qs);
    eprintln!("summary\tmean_Q\t{:.3}\tstddev\t{:.3}\trsd\t{:.4}", s.mean, s.stddev, s.rsd);
    Ok(())
}
