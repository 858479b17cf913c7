//! Synthetic batch experiments: solver accuracy and timing.

use std::fmt::Write as _;

use minpose::experiment::{
    batch_instance, evaluate_sample, group_by_variant, time_solves, variant_problem, TimedInput,
};
use minpose::metrics::ErrorStats;
use minpose::{Problem, Real, SolverVariant};
use rayon::prelude::*;

use crate::args::{RuntimeArgs, ScalarArg, StabilityArgs};
use crate::error::{CliError, CliResult};

fn pool(jobs: u64) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs as usize)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

pub const STABILITY_HEADER: &str = "solver_variant,mean_R,med_R,max_R,mean_T,med_T,max_T,fail_count";

pub fn stability(args: &StabilityArgs) -> CliResult<String> {
    let problem = Problem::from(args.problem);
    let variant = args.variant.map(SolverVariant::from);
    if let Some(v) = variant {
        if variant_problem(v) != problem {
            return Err(CliError::Usage(format!("variant {v} does not solve {problem}")));
        }
    }
    let (coplanar, seed) = (args.coplanar, args.seed);
    let run = |i: u64| match args.scalar {
        ScalarArg::F64 => evaluate_sample::<f64>(problem, coplanar, seed, i, variant),
        ScalarArg::F32 => evaluate_sample::<f32>(problem, coplanar, seed, i, variant),
    };
    // An indexed parallel collect keeps sample order, so the table is
    // independent of the thread count.
    let outcomes = pool(args.jobs)?.install(|| (0..args.n).into_par_iter().map(run).collect::<Result<Vec<_>, _>>())?;

    let mut csv = String::from(STABILITY_HEADER);
    csv.push('\n');
    for (variant, batch) in group_by_variant(&outcomes) {
        let (Some(r), Some(t)) = (batch.rotation_stats(), batch.translation_stats()) else {
            continue;
        };
        let _ = writeln!(
            csv,
            "{variant},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.mean, r.median, r.max, t.mean, t.median, t.max, batch.failures
        );
    }
    Ok(csv)
}

pub const RUNTIME_HEADER: &str = "solver,scalar,n,mean_ns,median_ns,min_ns,max_ns";

fn timings<T: Real>(args: &RuntimeArgs, problem: Problem, jobs: &rayon::ThreadPool) -> CliResult<Vec<f64>> {
    let inputs = jobs.install(|| {
        (0..args.n)
            .into_par_iter()
            .map(|i| {
                batch_instance(problem, args.coplanar, 0.0, args.seed, i)
                    .map(|inst| TimedInput::<T>::from_instance(&inst))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let warmup = args.warmup as usize;
    if args.jobs == 1 {
        return Ok(time_solves(&inputs, warmup));
    }
    let chunk = inputs.len().div_ceil(args.jobs as usize);
    Ok(jobs.install(|| inputs.par_chunks(chunk).flat_map_iter(|c| time_solves(c, warmup)).collect()))
}

pub fn runtime(args: &RuntimeArgs) -> CliResult<String> {
    let problem = Problem::from(args.problem);
    let jobs = pool(args.jobs)?;
    let (ns, scalar) = match args.scalar {
        ScalarArg::F64 => (timings::<f64>(args, problem, &jobs)?, "f64"),
        ScalarArg::F32 => (timings::<f32>(args, problem, &jobs)?, "f32"),
    };
    let s = ErrorStats::from_samples(&ns).ok_or_else(|| CliError::Usage("no samples".into()))?;
    Ok(format!(
        "{RUNTIME_HEADER}\n{problem},{scalar},{},{:.1},{:.1},{:.1},{:.1}\n",
        s.count, s.mean, s.median, s.min, s.max
    ))
}
