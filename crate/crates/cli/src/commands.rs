use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use qae_core::pipeline::{
    build_encoder, compress_state, generate_instance, verify_theorem1, EncoderPlan, InstanceKind,
};
use qae_core::qstate::{eigendecompose, BipartiteDims};
use qae_core::rng::derive_seed;
use qae_core::search::optimize;
use qae_core::tableau::{count_regular, random_regular};
use qae_core::{EntropyUnit, SearchConfig, Unitary, YoungTableau};
use sha2::{Digest, Sha256};

use crate::report::{
    convert_compression, convert_result, to_line, ExperimentSummary, InstanceRecord, RunReport,
    Timings, VerifyReport, VERSION,
};
use crate::state_file::{LoadedState, StateFile};
use crate::{Cli, CliError, Command, ExperimentKind, SearchArgs};

/// Largest `|S(σ‖σ_out) − S^U(A:B)|` accepted by `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-6;
/// Reporting floor for experiment values.
pub const REPORT_FLOOR: f64 = 1e-15;

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let unit = if cli.bits {
        EntropyUnit::Bits
    } else {
        EntropyUnit::Nats
    };
    match &cli.command {
        Command::Count { d_a, d_b } => count(*d_a, *d_b, &cli.threshold, out),
        Command::Optimize { state_file, search } => {
            let config = search_config(cli, search)?;
            optimize_file(state_file, &config, unit, out)
        }
        Command::Verify {
            state_file,
            seed,
            identity,
        } => verify_file(state_file, *seed, *identity, unit, out),
        Command::Experiment {
            kind,
            states,
            d_a,
            d_b,
            search,
        } => {
            let config = search_config(cli, search)?;
            let dims = usage_dims(*d_a, *d_b)?;
            experiment(*kind, *states, dims, &config, unit, out)
        }
    }
}

fn emit(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn usage_dims(d_a: usize, d_b: usize) -> Result<BipartiteDims, CliError> {
    BipartiteDims::new(d_a, d_b).map_err(|e| CliError::Usage(e.to_string()))
}

fn search_config(cli: &Cli, args: &SearchArgs) -> Result<SearchConfig, CliError> {
    let defaults = SearchConfig::default();
    let config = SearchConfig {
        n1: args.n1,
        n2: args.n2,
        n_d: args.nd,
        seed: args.seed,
        exhaustive_threshold: cli.threshold.clone(),
        parallelism: cli.jobs.map_or(defaults.parallelism, |j| j as usize),
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

fn read_state(path: &Path) -> Result<(StateFile, LoadedState, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text =
        String::from_utf8(bytes).map_err(|_| CliError::Usage("state file is not UTF-8".into()))?;
    let file = StateFile::parse(&text)?;
    let loaded = file.load()?;
    Ok((file, loaded, digest))
}

pub fn count(
    d_a: usize,
    d_b: usize,
    threshold: &BigUint,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let dims = usage_dims(d_a, d_b)?;
    let n = count_regular(dims);
    emit(out, &n.to_string())?;
    emit(
        out,
        &format!("under_threshold={} threshold={threshold}", &n <= threshold),
    )?;
    Ok(0)
}

pub fn optimize_file(
    path: &Path,
    config: &SearchConfig,
    unit: EntropyUnit,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let started = Instant::now();
    let (file, loaded, digest) = read_state(path)?;
    let dims = loaded.dims();
    let search_started = Instant::now();
    let (result, compression) = match &loaded {
        LoadedState::Dense { state, .. } => {
            let c = compress_state(state, dims, config)?;
            (c.result, Some(c.report))
        }
        LoadedState::Spectrum { probs, .. } => (optimize(probs, dims, config)?, None),
    };
    let search_seconds = search_started.elapsed().as_secs_f64();
    let violation = compression.as_ref().is_some_and(|c| c.support_violation);
    let report = RunReport {
        command: "optimize".into(),
        version: VERSION.into(),
        input_digest: digest,
        label: file.label,
        unit,
        dims,
        tableau_count: count_regular(dims).to_string(),
        config: config.into(),
        result: convert_result(&result, unit),
        compression: compression.map(|c| convert_compression(&c, unit)),
        timings: Timings {
            search_seconds,
            total_seconds: started.elapsed().as_secs_f64(),
        },
    };
    emit(out, &to_line(&report))?;
    if violation {
        return Err(CliError::Numerical(
            "reconstruction leaves the support of the input state".into(),
        ));
    }
    Ok(0)
}

pub fn verify_file(
    path: &Path,
    seed: u64,
    identity: bool,
    unit: EntropyUnit,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (_, loaded, digest) = read_state(path)?;
    let LoadedState::Dense { dims, state } = loaded else {
        return Err(CliError::Usage(
            "verify needs a dense \"matrix\" state file".into(),
        ));
    };
    let spectrum = eigendecompose(&state)?;
    let (plan, tableau) = if identity {
        let plan = EncoderPlan {
            spectrum,
            tableau: YoungTableau::row_major(dims),
            dims,
            unitary: Unitary::identity(dims.total()),
        };
        (plan, None)
    } else {
        let tableau = random_regular(dims, seed);
        (build_encoder(&spectrum, &tableau, dims)?, Some(tableau))
    };
    let compression = verify_theorem1(&state, &plan)?;
    let passed = compression.residual < VERIFY_TOLERANCE;
    let report = VerifyReport {
        command: "verify".into(),
        version: VERSION.into(),
        input_digest: digest,
        unit,
        dims,
        plan: if identity { "identity" } else { "random" }.into(),
        seed,
        tableau,
        compression: convert_compression(&compression, unit),
        passed,
    };
    emit(out, &to_line(&report))?;
    Ok(if passed { 0 } else { 1 })
}

pub fn experiment(
    kind: ExperimentKind,
    states: usize,
    dims: BipartiteDims,
    config: &SearchConfig,
    unit: EntropyUnit,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if states == 0 {
        return Err(CliError::Usage("--states must be positive".into()));
    }
    let started = Instant::now();
    let (name, instance_kind) = match kind {
        ExperimentKind::Fig2a => ("fig2a", InstanceKind::DiagonalMixed),
        ExperimentKind::Fig2b => ("fig2b", InstanceKind::ProductSpectrum),
    };
    let mut initial_sum = 0.0;
    let mut final_sum = 0.0;
    let mut floored_sum = 0.0;
    let mut max_final = f64::NEG_INFINITY;
    let mut all_improved = true;
    for index in 0..states {
        let instance_seed = derive_seed(config.seed, 2 * index as u64);
        let search_seed = derive_seed(config.seed, 2 * index as u64 + 1);
        let state = generate_instance(instance_kind, dims, instance_seed);
        let diag: Vec<f64> = (0..dims.total())
            .map(|k| state.matrix()[(k, k)].re)
            .collect();
        let total: f64 = diag.iter().sum();
        let mut probs: Vec<f64> = diag.iter().map(|p| p / total).collect();
        probs.sort_by(|a, b| b.total_cmp(a));
        let result = optimize(
            &probs,
            dims,
            &SearchConfig {
                seed: search_seed,
                ..config.clone()
            },
        )?;
        all_improved &= result.best_mi <= result.initial_mi;
        let (initial_mi, final_mi) = (
            unit.from_nats(result.initial_mi),
            unit.from_nats(result.best_mi),
        );
        let floored = final_mi.max(REPORT_FLOOR);
        initial_sum += initial_mi;
        final_sum += final_mi;
        floored_sum += floored;
        max_final = max_final.max(final_mi);
        let record = InstanceRecord {
            record: "instance".into(),
            index,
            instance_seed,
            search_seed,
            method: result.method,
            initial_mi,
            final_mi,
            final_mi_floored: floored,
            evaluations: result.evaluations,
        };
        emit(out, &to_line(&record))?;
    }
    let n = states as f64;
    let summary = ExperimentSummary {
        record: "summary".into(),
        experiment: name.into(),
        instance_kind: serde_json::to_value(instance_kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default(),
        sampling: "flat-dirichlet".into(),
        version: VERSION.into(),
        unit,
        dims,
        states,
        config: config.into(),
        mean_initial_mi: initial_sum / n,
        mean_final_mi: final_sum / n,
        mean_final_mi_floored: floored_sum / n,
        max_final_mi: max_final,
        all_improved,
        total_seconds: started.elapsed().as_secs_f64(),
    };
    emit(out, &to_line(&summary))?;
    Ok(0)
}
