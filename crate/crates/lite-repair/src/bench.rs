//! Timed strategy × pipeline grids over generated knowledge bases.

use std::io;
use std::time::Instant;

use lite_repair_core::eval::{self, GenSpec, Generated, Metrics, Ratio};
use lite_repair_core::{
    Atom, ConjunctiveQuery, Engine, GenError, Pipeline, QueryKind, Strategy, SupportMode, Term,
    Variable,
};

use crate::report::ratio;

pub const CSV_HEADER: [&str; 10] = [
    "conflict_size",
    "strata",
    "query_kind",
    "strategy",
    "pipeline",
    "precision",
    "recall",
    "f_measure",
    "productivity",
    "median_ms",
];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub assertions: usize,
    pub strata: usize,
    pub conflicts: Vec<usize>,
    pub seed: u64,
    pub repetitions: usize,
    pub strategies: Vec<Strategy>,
    pub pipelines: Vec<Pipeline>,
    pub mode: SupportMode,
}

impl BenchConfig {
    pub fn new(assertions: usize, strata: usize, conflicts: Vec<usize>, seed: u64) -> Self {
        BenchConfig {
            assertions,
            strata,
            conflicts,
            seed,
            repetitions: 5,
            strategies: Strategy::ALL.to_vec(),
            pipelines: Pipeline::ALL.to_vec(),
            mode: SupportMode::AboutAnswers,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub conflict_size: usize,
    pub strata: usize,
    pub query_kind: QueryKind,
    pub strategy: Strategy,
    pub pipeline: Pipeline,
    pub metrics: Metrics,
    pub productivity: Ratio,
    pub answers: usize,
    pub raw_answers: usize,
    pub median_ms: f64,
}

/// One query of each kind over the generator's vocabulary: `T0(?x)`,
/// `T0(c)` for the first cluster individual `c`, and `r0(?x, ?y), T0(?y)`.
pub fn bench_queries(generated: &Generated) -> Vec<ConjunctiveQuery> {
    let x = || Variable::new("x");
    let target = generated
        .clusters
        .first()
        .map(|c| c.as_str().to_owned())
        .unwrap_or_else(|| "i0".into());
    let queries = [
        ConjunctiveQuery::new("q", vec![x()], vec![Atom::concept("T0", Term::var("x"))]),
        ConjunctiveQuery::new("q", vec![], vec![Atom::concept("T0", Term::individual(&target))]),
        ConjunctiveQuery::new(
            "q",
            vec![x()],
            vec![
                Atom::role("r0", Term::var("x"), Term::var("y")),
                Atom::concept("T0", Term::var("y")),
            ],
        ),
    ];
    queries
        .into_iter()
        .map(|q| q.expect("bench queries are well formed"))
        .collect()
}

fn median(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

/// Runs the grid. Index construction happens once per KB, before any timed
/// region; each timed run covers rewriting, evaluation and repair.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, GenError> {
    let repetitions = config.repetitions.max(3);
    let mut rows = Vec::new();
    for &k in &config.conflicts {
        let spec = GenSpec::new(config.assertions, config.strata, k, config.seed);
        let generated = eval::generate(&spec)?;
        let queries = bench_queries(&generated);
        let engine = Engine::new(generated.kb);
        for query in &queries {
            let rewritten = engine.rewrite(query);
            let raw = engine.raw_answers(&rewritten);
            for &strategy in &config.strategies {
                for &pipeline in &config.pipelines {
                    let outcome = engine.run(query, strategy, pipeline, config.mode);
                    let mut samples = Vec::with_capacity(repetitions);
                    for _ in 0..repetitions {
                        let start = Instant::now();
                        let timed = engine.run(query, strategy, pipeline, config.mode);
                        samples.push(start.elapsed().as_secs_f64() * 1e3);
                        std::hint::black_box(timed);
                    }
                    rows.push(BenchRow {
                        conflict_size: k,
                        strata: config.strata,
                        query_kind: query.kind(),
                        strategy,
                        pipeline,
                        metrics: eval::metrics(
                            engine.closure(),
                            &outcome.universe(),
                            &outcome.repair.assertions,
                        ),
                        productivity: eval::productivity(&outcome.answers, &raw),
                        answers: outcome.answers.len(),
                        raw_answers: raw.len(),
                        median_ms: median(samples),
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Writes the grid as CSV, preceded by a `#` comment line recording the
/// generator parameters.
pub fn write_csv<W: io::Write>(config: &BenchConfig, rows: &[BenchRow], mut out: W) -> io::Result<()> {
    let conflicts: Vec<String> = config.conflicts.iter().map(|k| k.to_string()).collect();
    writeln!(
        out,
        "# seed={} assertions={} strata={} conflicts={} repetitions={} mode={}",
        config.seed,
        config.assertions,
        config.strata,
        conflicts.join(";"),
        config.repetitions.max(3),
        config.mode
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.conflict_size.to_string(),
            r.strata.to_string(),
            r.query_kind.to_string(),
            r.strategy.to_string(),
            r.pipeline.to_string(),
            ratio(r.metrics.precision.value),
            ratio(r.metrics.recall.value),
            ratio(r.metrics.f_measure.value),
            ratio(r.productivity.value),
            format!("{:.3}", r.median_ms),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn conflict_free_bench_keeps_every_answer() {
        let mut config = BenchConfig::new(60, 3, vec![0], 11);
        config.strategies = vec![Strategy::Pi];
        config.pipelines = vec![Pipeline::AfterQuery];
        let rows = run_bench(&config).unwrap();
        assert_eq!(rows.len(), 3);
        for r in rows {
            if !r.productivity.undefined {
                assert_eq!(r.productivity.value, 1.0);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let config = BenchConfig::new(40, 2, vec![2], 5);
        let rows = run_bench(&config).unwrap();
        let mut buf = Vec::new();
        write_csv(&config, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# seed=5 "));
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 3 * 3 * 2);
    }
}
