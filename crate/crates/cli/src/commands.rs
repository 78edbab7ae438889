//! Subcommand implementations. Each returns the process exit code:
//! 0 success, 1 input error, 2 synthesis stopped by a limit (or space
//! exhausted), 3 validation hit a failing instance.

use std::path::{Path, PathBuf};
use std::time::Instant;

use bfgp_core::domains::{builtin_domain, generate_instances, InstanceSet, DEFAULT_SEED};
use bfgp_core::evaluation::{evaluate, EvalFn};
use bfgp_core::interpreter::{
    run_all, run_measured, ExecutionConfig, DEFAULT_STEP_LIMIT, SYNTHESIS_BOUND, VALIDATION_BOUND,
};
use bfgp_core::model::{
    build_extended_domain, make_initial_state, Domain, ExtendedDomain, GroundInstance, Instance,
    PointerDecl,
};
use bfgp_core::program::{parse_program, print_program};
use bfgp_core::search::{bfgp, SearchLimits, Termination};

use crate::formats::{emit_domain, emit_instance, parse_domain, parse_instance};
use crate::pddl;
use crate::report::{
    outcome_label, ConfigEcho, EvaluationReport, InstanceReport, RunReport, SearchReport,
};

pub const DEFAULT_TIMEOUT_SECS: u64 = 3600;

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.parse().ok()
}

fn fail(report: &mut RunReport, json: &Option<PathBuf>, detail: String) -> i32 {
    eprintln!("error: {detail}");
    report.error = Some(detail);
    write_report(report, json);
    1
}

fn write_report(report: &RunReport, json: &Option<PathBuf>) {
    if let Some(path) = json {
        if let Err(e) = report.write_json(path) {
            eprintln!("error: cannot write report to {}: {e}", path.display());
        }
    }
}

/// Everything a command needs to execute programs: the shared instruction
/// set and the grounded instances.
pub struct Problem {
    pub ext: ExtendedDomain,
    pub instances: Vec<Instance>,
    pub grounds: Vec<GroundInstance>,
    pub label: String,
}

pub struct ProblemSpec<'a> {
    pub domain: &'a str,
    pub set: InstanceSet,
    pub count: Option<usize>,
    pub seed: u64,
    pub pointers: Option<&'a str>,
    /// Explicit instance files override the generated/bundled set.
    pub instance_paths: &'a [PathBuf],
}

/// Parses `--pointers`: either a bare count (single-type domains) or a
/// `type:count,...` list. Bare counts reuse the default names where
/// available and continue with `z<k>`.
fn resolve_pointers(
    spec: &str,
    domain: &Domain,
    defaults: Option<&[PointerDecl]>,
) -> Result<Vec<PointerDecl>, String> {
    if let Ok(count) = spec.parse::<usize>() {
        if domain.types.len() != 1 {
            return Err(format!(
                "domain `{}` has {} types; use --pointers type:count,...",
                domain.name,
                domain.types.len()
            ));
        }
        let mut decls = Vec::new();
        for k in 0..count {
            let name = defaults
                .and_then(|d| d.get(k))
                .map(|p| p.name.clone())
                .unwrap_or_else(|| format!("z{}", k + 1));
            decls.push(PointerDecl::new(&name, 0));
        }
        return Ok(decls);
    }
    let mut decls = Vec::new();
    for part in spec.split(',') {
        let (ty, count) = part
            .split_once(':')
            .ok_or_else(|| format!("expected type:count, found `{part}`"))?;
        let type_index = domain
            .type_index(ty.trim())
            .ok_or_else(|| format!("unknown type `{}`", ty.trim()))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| format!("bad pointer count in `{part}`"))?;
        for k in 0..count {
            decls.push(PointerDecl::new(&format!("{}{}", ty.trim(), k + 1), type_index));
        }
    }
    Ok(decls)
}

/// Loads a problem from a built-in benchmark name or a directory holding
/// `domain.txt` plus instance files.
pub fn load_problem(spec: &ProblemSpec) -> Result<Problem, String> {
    let path = Path::new(spec.domain);
    let (domain, default_pointers, instances) = if path.is_dir() {
        let domain_path = path.join("domain.txt");
        let text = std::fs::read_to_string(&domain_path)
            .map_err(|e| format!("cannot read {}: {e}", domain_path.display()))?;
        let file = parse_domain(&text).map_err(|e| format!("{}: {e}", domain_path.display()))?;
        let mut instances = Vec::new();
        if spec.instance_paths.is_empty() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| format!("cannot list {}: {e}", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.extension().is_some_and(|x| x == "txt")
                        && p.file_name().is_some_and(|n| n != "domain.txt")
                })
                .collect();
            entries.sort();
            for entry in entries {
                let text = std::fs::read_to_string(&entry)
                    .map_err(|e| format!("cannot read {}: {e}", entry.display()))?;
                instances.push(
                    parse_instance(&text, &file.domain)
                        .map_err(|e| format!("{}: {e}", entry.display()))?,
                );
            }
        }
        (file.domain, file.pointers, instances)
    } else {
        let builtin = builtin_domain(spec.domain).map_err(|e| e.to_string())?;
        let instances = if spec.instance_paths.is_empty() {
            generate_instances(spec.domain, spec.set, spec.count, spec.seed)
                .map_err(|e| e.to_string())?
        } else {
            Vec::new()
        };
        (builtin.domain, Some(builtin.pointers), instances)
    };

    let mut instances = instances;
    for p in spec.instance_paths {
        let text = std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
        instances.push(parse_instance(&text, &domain).map_err(|e| format!("{}: {e}", p.display()))?);
    }

    let pointers = match spec.pointers {
        Some(flag) => resolve_pointers(flag, &domain, default_pointers.as_deref())?,
        None => default_pointers
            .ok_or_else(|| "no pointer declaration; pass --pointers".to_string())?,
    };
    let ext = build_extended_domain(&domain, &pointers).map_err(|e| e.to_string())?;
    let mut grounds = Vec::with_capacity(instances.len());
    for inst in &instances {
        grounds.push(
            make_initial_state(&ext, inst)
                .map_err(|e| format!("instance `{}`: {e}", inst.name))?,
        );
    }
    let label = spec.domain.to_string();
    Ok(Problem {
        ext,
        instances,
        grounds,
        label,
    })
}

fn pointer_summary(ext: &ExtendedDomain) -> String {
    ext.pointers
        .iter()
        .map(|p| format!("{}:{}", p.name, ext.domain.types[p.type_index].name))
        .collect::<Vec<_>>()
        .join(",")
}

#[allow(clippy::too_many_arguments)]
pub struct SynthArgs {
    pub domain: String,
    pub lines: Option<usize>,
    pub pointers: Option<String>,
    pub eval: String,
    pub timeout: Option<u64>,
    pub max_nodes: Option<usize>,
    pub bound: Option<i64>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub instance_paths: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub quiet: bool,
}

pub fn cmd_synth(args: &SynthArgs) -> i32 {
    let mut report = RunReport::new("synth");
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let mut key = Vec::new();
    for part in args.eval.split(',') {
        match EvalFn::parse(part.trim()) {
            Some(f) => key.push(f),
            None => {
                return fail(
                    &mut report,
                    &args.json,
                    format!("unknown evaluation function `{}`", part.trim()),
                )
            }
        }
    }
    let problem = match load_problem(&ProblemSpec {
        domain: &args.domain,
        set: InstanceSet::Synthesis,
        count: args.count,
        seed,
        pointers: args.pointers.as_deref(),
        instance_paths: &args.instance_paths,
    }) {
        Ok(p) => p,
        Err(e) => return fail(&mut report, &args.json, e),
    };
    let lines = args.lines.unwrap_or_else(|| {
        builtin_domain(&args.domain)
            .map(|b| b.spec.default_lines)
            .unwrap_or(8)
    });
    let bound = args
        .bound
        .or_else(|| env_u64("BFGP_VALUE_BOUND").map(|v| v as i64))
        .unwrap_or(SYNTHESIS_BOUND);
    let timeout = args
        .timeout
        .or_else(|| env_u64("BFGP_TIMEOUT_SECS"))
        .unwrap_or(DEFAULT_TIMEOUT_SECS);
    let max_nodes = args
        .max_nodes
        .or_else(|| env_u64("BFGP_MAX_NODES").map(|v| v as usize));

    report.config = ConfigEcho {
        domain: Some(problem.label.clone()),
        set: Some("synthesis".to_string()),
        instances: Some(problem.grounds.len()),
        lines: Some(lines),
        pointers: Some(pointer_summary(&problem.ext)),
        eval: Some(args.eval.clone()),
        seed: Some(seed),
        value_bound: Some(bound),
        infinite_detection: Some(true),
        timeout_secs: Some(timeout),
        max_nodes,
        ..ConfigEcho::default()
    };

    let config = ExecutionConfig {
        value_bound: bound,
        ..ExecutionConfig::synthesis()
    };
    let limits = SearchLimits {
        max_open_nodes: max_nodes,
        max_evaluated: None,
    };
    let start = Instant::now();
    let deadline = start + std::time::Duration::from_secs(timeout);
    let mut monitor = |_: &bfgp_core::search::SearchStats| Instant::now() >= deadline;
    let outcome = match bfgp(
        &problem.ext,
        &problem.grounds,
        lines,
        &key,
        &config,
        &limits,
        Some(&mut monitor),
    ) {
        Ok(o) => o,
        Err(e) => return fail(&mut report, &args.json, e.to_string()),
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    report.search = Some(SearchReport::new(&outcome.stats, wall_ms));

    let Some(solution) = outcome.solution else {
        let detail = match outcome.stats.termination {
            Termination::Timeout => "timeout".to_string(),
            Termination::NodeLimit => "node limit reached".to_string(),
            _ => "search space exhausted".to_string(),
        };
        if !args.quiet {
            eprintln!(
                "no solution: {detail} ({} expanded, {} evaluated, {:.1}s)",
                outcome.stats.expanded,
                outcome.stats.evaluated,
                wall_ms as f64 / 1000.0
            );
        }
        report.error = Some(detail);
        write_report(&report, &args.json);
        return 2;
    };

    // Independent check: replay the solution over the whole set.
    let verification = run_all(&solution, &problem.grounds, &config, false);
    for (ground, outcome) in problem.grounds.iter().zip(&verification) {
        report.instances.push(InstanceReport {
            name: ground.name.clone(),
            outcome: outcome_label(outcome),
            steps: match outcome {
                bfgp_core::ExecutionOutcome::Solved { steps, .. } => *steps,
                bfgp_core::ExecutionOutcome::Failed { steps, .. } => *steps,
                bfgp_core::ExecutionOutcome::ReachedUndefined { steps, .. } => *steps,
            },
            plan_len: outcome.plan_len(),
            visited_states: 0,
            est_peak_bytes: 0,
            wall_ms: 0,
        });
    }
    if !verification.iter().all(|o| o.is_solved()) {
        return fail(
            &mut report,
            &args.json,
            "internal error: returned program fails re-validation".to_string(),
        );
    }

    let text = print_program(&solution, &problem.ext);
    report.solution = Some(text.clone());
    report.solution_encoding_hex =
        Some(bfgp_core::program::encode(&solution, &problem.ext).to_hex());
    report.evaluation = Some(EvaluationReport::from(&evaluate(
        &solution,
        &problem.grounds,
        &config,
    )));
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &text) {
            return fail(
                &mut report,
                &args.json,
                format!("cannot write {}: {e}", path.display()),
            );
        }
    }
    if !args.quiet {
        println!("{text}");
        eprintln!(
            "solved {} instances in {:.1}s ({} expanded, {} evaluated)",
            problem.grounds.len(),
            wall_ms as f64 / 1000.0,
            outcome.stats.expanded,
            outcome.stats.evaluated
        );
    }
    write_report(&report, &args.json);
    0
}

pub struct ValidateArgs {
    pub domain: String,
    pub program: PathBuf,
    pub set: InstanceSet,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub pointers: Option<String>,
    pub instance_paths: Vec<PathBuf>,
    pub infinite_detection: bool,
    pub bound: Option<i64>,
    pub step_limit: Option<u64>,
    pub json: Option<PathBuf>,
    pub quiet: bool,
}

pub fn cmd_validate(args: &ValidateArgs) -> i32 {
    let mut report = RunReport::new("validate");
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let problem = match load_problem(&ProblemSpec {
        domain: &args.domain,
        set: args.set,
        count: args.count,
        seed,
        pointers: args.pointers.as_deref(),
        instance_paths: &args.instance_paths,
    }) {
        Ok(p) => p,
        Err(e) => return fail(&mut report, &args.json, e),
    };
    let program_text = match std::fs::read_to_string(&args.program) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                &mut report,
                &args.json,
                format!("cannot read {}: {e}", args.program.display()),
            )
        }
    };
    let program = match parse_program(&program_text, &problem.ext) {
        Ok(p) => p,
        Err(e) => {
            return fail(
                &mut report,
                &args.json,
                format!("{}: {e}", args.program.display()),
            )
        }
    };
    let bound = args
        .bound
        .or_else(|| env_u64("BFGP_VALUE_BOUND").map(|v| v as i64))
        .unwrap_or(VALIDATION_BOUND);
    let step_limit = args
        .step_limit
        .or_else(|| env_u64("BFGP_STEP_LIMIT"))
        .unwrap_or(DEFAULT_STEP_LIMIT);
    let config = ExecutionConfig {
        value_bound: bound,
        infinite_detection: args.infinite_detection,
        step_limit,
        collect_plan: false,
    };
    report.config = ConfigEcho {
        domain: Some(problem.label.clone()),
        set: Some(
            match args.set {
                InstanceSet::Synthesis => "synthesis",
                InstanceSet::Validation => "validation",
            }
            .to_string(),
        ),
        instances: Some(problem.grounds.len()),
        pointers: Some(pointer_summary(&problem.ext)),
        seed: Some(seed),
        value_bound: Some(bound),
        infinite_detection: Some(args.infinite_detection),
        step_limit: Some(step_limit),
        program: Some(args.program.display().to_string()),
        ..ConfigEcho::default()
    };

    let mut failed: Option<String> = None;
    for ground in &problem.grounds {
        let start = Instant::now();
        let (outcome, visited) = run_measured(&program, ground, &config);
        let wall_ms = start.elapsed().as_millis() as u64;
        let snapshot_bytes =
            (ground.init.values.len() + ground.init.pointers.len() + 2) as u64 * 8;
        report.instances.push(InstanceReport {
            name: ground.name.clone(),
            outcome: outcome_label(&outcome),
            steps: match &outcome {
                bfgp_core::ExecutionOutcome::Solved { steps, .. } => *steps,
                bfgp_core::ExecutionOutcome::Failed { steps, .. } => *steps,
                bfgp_core::ExecutionOutcome::ReachedUndefined { steps, .. } => *steps,
            },
            plan_len: outcome.plan_len(),
            visited_states: visited,
            est_peak_bytes: visited * snapshot_bytes,
            wall_ms,
        });
        if !outcome.is_solved() {
            failed = Some(format!(
                "instance `{}` not solved: {}",
                ground.name,
                outcome_label(&outcome)
            ));
            break;
        }
    }
    write_report(&report, &args.json);
    match failed {
        Some(detail) => {
            eprintln!("validation failed: {detail}");
            3
        }
        None => {
            if !args.quiet {
                println!(
                    "validated {} instances: all solved",
                    report.instances.len()
                );
            }
            0
        }
    }
}

pub struct GenArgs {
    pub domain: String,
    pub set: InstanceSet,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub quiet: bool,
}

pub fn cmd_gen(args: &GenArgs) -> i32 {
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let builtin = match builtin_domain(&args.domain) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let instances = match generate_instances(&args.domain, args.set, args.count, seed) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        eprintln!("error: cannot create {}: {e}", args.out.display());
        return 1;
    }
    let domain_text = emit_domain(&builtin.domain, Some(&builtin.pointers));
    if let Err(e) = std::fs::write(args.out.join("domain.txt"), domain_text) {
        eprintln!("error: {e}");
        return 1;
    }
    for inst in &instances {
        let text = emit_instance(inst, &builtin.domain);
        if let Err(e) = std::fs::write(args.out.join(format!("{}.txt", inst.name)), text) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    if !args.quiet {
        println!(
            "wrote domain.txt and {} instances to {}",
            instances.len(),
            args.out.display()
        );
    }
    0
}

pub struct TranslateArgs {
    pub pddl_domain: PathBuf,
    pub pddl_problems: Vec<PathBuf>,
    pub out: PathBuf,
    pub quiet: bool,
}

pub fn cmd_translate(args: &TranslateArgs) -> i32 {
    let domain_text = match std::fs::read_to_string(&args.pddl_domain) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.pddl_domain.display());
            return 1;
        }
    };
    let strips = match pddl::parse_pddl_domain(&domain_text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", args.pddl_domain.display());
            return 1;
        }
    };
    let domain = pddl::translate_domain(&strips);
    let pointers = pddl::suggest_pointers(&strips);
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        eprintln!("error: cannot create {}: {e}", args.out.display());
        return 1;
    }
    let domain_out = emit_domain(&domain, Some(&pointers));
    if let Err(e) = std::fs::write(args.out.join("domain.txt"), domain_out) {
        eprintln!("error: {e}");
        return 1;
    }
    let mut count = 0usize;
    for path in &args.pddl_problems {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return 1;
            }
        };
        let problem = match pddl::parse_pddl_problem(&text, &strips) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        };
        let instance = pddl::translate_problem(&strips, &problem);
        let out_name = format!("{}.txt", instance.name);
        if let Err(e) = std::fs::write(
            args.out.join(&out_name),
            emit_instance(&instance, &domain),
        ) {
            eprintln!("error: {e}");
            return 1;
        }
        count += 1;
    }
    if !args.quiet {
        println!(
            "translated {} problems into {}",
            count,
            args.out.display()
        );
    }
    0
}
