//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measurements. Run with
//! `cargo test --test acceptance -- --nocapture` to see the details.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;
use std::time::Instant;

use bfgp::pddl;
use bfgp_core::domains::{
    builtin_domain, corpus_program, corpus_program_text, generate_instances, InstanceSet,
    BUILTIN_NAMES, DEFAULT_SEED,
};
use bfgp_core::evaluation::{eval_performance, eval_structural, EvalFn};
use bfgp_core::interpreter::{run, run_all, ExecutionConfig, ProgramState, StepEvent};
use bfgp_core::model::{
    build_extended_domain, goal_satisfied, make_initial_state, ActionSchema, Atom, CmpOp, Domain,
    Effect, Expr, ExtendedDomain, FunctionKind, FunctionSymbol, Goal, GoalTarget, GroundInstance,
    GroundTerm, Instance, Instruction, ObjectType, Operand, PointerDecl, RamOp,
};
use bfgp_core::program::{
    self, encode, encoding_len, parse_program, print_program, Feature, Line, PlanningProgram,
};
use bfgp_core::rng::Pcg32;
use bfgp_core::search::{bfgp, expand, SearchLimits, Termination};
use bfgp_core::ExecutionOutcome;

const MINUTES: u64 = 60;

struct SynthRun {
    program: PlanningProgram,
    expanded: u64,
    evaluated: u64,
    wall_secs: f64,
}

fn grounds_for(name: &str, set: InstanceSet) -> (ExtendedDomain, Vec<GroundInstance>) {
    let builtin = builtin_domain(name).unwrap();
    let ext = builtin.extended();
    let instances = generate_instances(name, set, None, DEFAULT_SEED).unwrap();
    let grounds = instances
        .iter()
        .map(|i| make_initial_state(&ext, i).unwrap())
        .collect();
    (ext, grounds)
}

fn synthesize(name: &str, key: &[EvalFn], budget_secs: u64) -> SynthRun {
    let builtin = builtin_domain(name).unwrap();
    let (ext, grounds) = grounds_for(name, InstanceSet::Synthesis);
    let start = Instant::now();
    let deadline = start + std::time::Duration::from_secs(budget_secs);
    let mut monitor = |_: &bfgp_core::search::SearchStats| Instant::now() >= deadline;
    let outcome = bfgp(
        &ext,
        &grounds,
        builtin.spec.default_lines,
        key,
        &ExecutionConfig::synthesis(),
        &SearchLimits::default(),
        Some(&mut monitor),
    )
    .unwrap();
    let wall_secs = start.elapsed().as_secs_f64();
    assert_ne!(
        outcome.stats.termination,
        Termination::Timeout,
        "{name}: synthesis exceeded its {budget_secs}s budget"
    );
    let program = outcome
        .solution
        .unwrap_or_else(|| panic!("{name}: no solution found"));
    let check = run_all(&program, &grounds, &ExecutionConfig::synthesis(), false);
    assert!(
        check.iter().all(|o| o.is_solved()),
        "{name}: returned program fails re-validation"
    );
    SynthRun {
        program,
        expanded: outcome.stats.expanded,
        evaluated: outcome.stats.evaluated,
        wall_secs,
    }
}

/// The synthesis runs shared by criteria 1–3: every gated domain with the
/// plain goal-deviation key.
fn f5_runs() -> &'static HashMap<&'static str, SynthRun> {
    static CACHE: OnceLock<HashMap<&'static str, SynthRun>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut map = HashMap::new();
        for (name, budget) in [
            ("triangular-sum", 30 * MINUTES),
            ("find", 30 * MINUTES),
            ("select", 30 * MINUTES),
            ("visitall", 30 * MINUTES),
            ("reverse", 30 * MINUTES),
            ("gripper", 60 * MINUTES),
            ("corridor", 60 * MINUTES),
        ] {
            map.insert(name, synthesize(name, &[EvalFn::F5], budget));
        }
        map
    })
}

#[test]
fn criterion_1_synthesis_reproduction() {
    let runs = f5_runs();
    for name in [
        "triangular-sum",
        "find",
        "select",
        "visitall",
        "reverse",
        "gripper",
        "corridor",
    ] {
        let run = &runs[name];
        println!(
            "  {name}: solved in {:.1}s ({} expanded, {} evaluated)",
            run.wall_secs, run.expanded, run.evaluated
        );
    }
    println!("ACCEPTANCE 1 synthesis-reproduction: PASS");
}

#[test]
fn criterion_2_combined_key_improvement() {
    let gated = ["triangular-sum", "find", "select", "visitall", "gripper"];
    let base = f5_runs();
    let mut not_worse = 0;
    for name in gated {
        let combined = synthesize(name, &[EvalFn::F5, EvalFn::F7], 30 * MINUTES);
        let plain = &base[name];
        println!(
            "  {name}: f5,f7 expanded {} vs f5 expanded {}",
            combined.expanded, plain.expanded
        );
        if combined.expanded <= plain.expanded {
            not_worse += 1;
        }
    }
    assert!(
        not_worse >= 3,
        "combined key must expand no more nodes on at least 3 of 5 domains (got {not_worse})"
    );
    println!("ACCEPTANCE 2 combined-key-improvement: PASS ({not_worse}/5 not worse)");
}

#[test]
fn criterion_3_generalization_validation() {
    let runs = f5_runs();
    let config = ExecutionConfig {
        value_bound: 1_000_000_000,
        infinite_detection: false,
        step_limit: u64::MAX,
        collect_plan: false,
    };
    for name in [
        "triangular-sum",
        "find",
        "select",
        "visitall",
        "reverse",
        "gripper",
        "corridor",
    ] {
        let (_ext, grounds) = grounds_for(name, InstanceSet::Validation);
        let start = Instant::now();
        let outcomes = run_all(&runs[name].program, &grounds, &config, true);
        let wall = start.elapsed().as_secs_f64();
        assert_eq!(outcomes.len(), grounds.len(), "{name}: a validation run failed");
        for (g, o) in grounds.iter().zip(&outcomes) {
            assert!(o.is_solved(), "{name}: {} -> {o:?}", g.name);
        }
        assert!(
            wall < 1800.0,
            "{name}: validation took {wall:.0}s, beyond minutes-scale"
        );
        println!("  {name}: {} instances validated in {wall:.2}s", grounds.len());
    }
    println!("ACCEPTANCE 3 generalization-validation: PASS");
}

#[test]
fn criterion_4_corpus_regression() {
    for name in BUILTIN_NAMES {
        let builtin = builtin_domain(name).unwrap();
        let ext = builtin.extended();
        let program = corpus_program(name).unwrap();
        // Text round trip.
        let printed = print_program(&program, &ext);
        let reparsed = parse_program(&printed, &ext).unwrap();
        assert_eq!(program, reparsed, "{name}: print/parse round trip");
        assert_eq!(printed, print_program(&reparsed, &ext));
        let original = parse_program(corpus_program_text(name).unwrap(), &ext).unwrap();
        assert_eq!(program, original);

        // Synthesis-set regression for all bundled programs.
        let (_, grounds) = grounds_for(name, InstanceSet::Synthesis);
        let outcomes = run_all(&program, &grounds, &ExecutionConfig::synthesis(), false);
        for (g, o) in grounds.iter().zip(&outcomes) {
            assert!(o.is_solved(), "{name}: {} -> {o:?}", g.name);
        }

        // Validation-ramp regression wherever it is cheap: the published
        // 20 towers of 12-31 blocks, the 100 sieve sizes 12-111, the 100
        // vectors of 12-111 for sorting, and the other sub-second ramps.
        // (The quadratic reverse ramp and the 44k-instance summation ramp
        // run in criterion 3 against the synthesized programs.)
        let cheap_validation = [
            "blocks-ontable",
            "sieve",
            "sorting",
            "visitall",
            "corridor",
            "gripper",
            "find",
            "select",
            "fibonacci",
        ];
        if cheap_validation.contains(&name) {
            let (_, grounds) = grounds_for(name, InstanceSet::Validation);
            if name == "blocks-ontable" {
                assert_eq!(grounds.len(), 20);
            }
            if name == "sieve" || name == "sorting" {
                assert_eq!(grounds.len(), 100);
            }
            let config = ExecutionConfig {
                step_limit: u64::MAX,
                ..ExecutionConfig::validation()
            };
            let outcomes = run_all(&program, &grounds, &config, false);
            for (g, o) in grounds.iter().zip(&outcomes) {
                assert!(o.is_solved(), "{name}: {} -> {o:?}", g.name);
            }
        }
        println!("  {name}: round trip + all instances solved");
    }
    println!("ACCEPTANCE 4 corpus-regression: PASS");
}

fn sorting_ext() -> ExtendedDomain {
    builtin_domain("sorting").unwrap().extended()
}

fn sorting_instance(ext: &ExtendedDomain, values: &[i64]) -> GroundInstance {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let term = |i: usize| GroundTerm {
        function: 0,
        args: vec![i as u32],
    };
    let instance = Instance {
        name: "worked".to_string(),
        object_counts: vec![values.len() as u32],
        init: values
            .iter()
            .enumerate()
            .map(|(i, v)| (term(i), *v))
            .collect(),
        goal: Goal::Partial(
            sorted
                .iter()
                .enumerate()
                .map(|(i, v)| (GoalTarget::Term(term(i)), *v))
                .collect(),
        ),
    };
    make_initial_state(ext, &instance).unwrap()
}

#[test]
fn criterion_5_worked_example_conformance() {
    let ext = sorting_ext();
    let text = "0. swap(i,j)\n1. inc(i)\n2. dec(j)\n3. goto(2, !(Yz&!Yc))\n4. --\n5. end\n";
    let partial = parse_program(text, &ext).unwrap();
    let s = eval_structural(&partial);
    assert_eq!(
        (s.goto_count, s.undefined_count, s.repeated_instructions, s.max_goto_nesting),
        (1, 1, 0, 1)
    );
    let problem = vec![
        sorting_instance(&ext, &[6, 3, 4, 2, 5, 1]),
        sorting_instance(&ext, &[3, 2, 1, 6, 5, 4]),
    ];
    let perf = eval_performance(&partial, &problem, &ExecutionConfig::synthesis(), true).unwrap();
    assert_eq!(perf.f4, 1);
    assert_eq!(perf.f8.unwrap(), perf.f5.unwrap() + perf.f6);
    assert_eq!(perf.f9.unwrap(), 5 * perf.f5.unwrap() + perf.f6);

    // Combination identities over random (program, problem) pairs.
    let mut rng = Pcg32::new(0x5EED);
    for _ in 0..1000 {
        let n = 3 + rng.below(7) as usize;
        let program = random_program(&mut rng, n, &ext);
        let mut instances = Vec::new();
        for _ in 0..1 + rng.below(3) {
            let len = 2 + rng.below(5) as usize;
            let values: Vec<i64> = (0..len).map(|_| rng.below(30) as i64).collect();
            instances.push(sorting_instance(&ext, &values));
        }
        let perf =
            eval_performance(&program, &instances, &ExecutionConfig::synthesis(), true).unwrap();
        let f5 = perf.f5.unwrap();
        assert_eq!(perf.f8.unwrap(), f5 + perf.f6);
        assert_eq!(perf.f9.unwrap(), 5 * f5 + perf.f6);
        assert!(f5 >= 0);
    }
    println!("ACCEPTANCE 5 worked-example-conformance: PASS");
}

fn random_program(rng: &mut Pcg32, n: usize, ext: &ExtendedDomain) -> PlanningProgram {
    let mut p = PlanningProgram::empty(n);
    for i in 0..n - 1 {
        match rng.below(3) {
            0 => {}
            1 => {
                let a = rng.below(ext.instruction_count() as u64) as usize;
                p = p.with_action(i, a, ext).unwrap();
            }
            _ => {
                let targets: Vec<usize> = p.goto_targets(i).collect();
                let t = targets[rng.below(targets.len() as u64) as usize];
                p = p
                    .with_goto(i, t, Feature::from_index(rng.below(4) as usize))
                    .unwrap();
            }
        }
    }
    p
}

#[test]
fn criterion_6_encoding_properties() {
    let mut rng = Pcg32::new(0xE6C0);
    // Encoded length matches the closed form on random configurations.
    for _ in 0..100 {
        let z = 1 + rng.below(3) as usize;
        let fns = rng.below(3) as usize;
        let domain = Domain {
            name: "r".to_string(),
            types: vec![ObjectType {
                name: "t".to_string(),
            }],
            functions: (0..fns)
                .map(|i| FunctionSymbol {
                    name: format!("f{i}"),
                    param_types: vec![0; 1 + rng.below(2) as usize],
                    kind: FunctionKind::Numeric,
                })
                .collect(),
            schemas: Vec::new(),
        };
        let pointers: Vec<PointerDecl> = (0..z)
            .map(|i| PointerDecl::new(&format!("z{i}"), 0))
            .collect();
        let ext = build_extended_domain(&domain, &pointers).unwrap();
        let n = 2 + rng.below(12) as usize;
        let p = PlanningProgram::empty(n);
        assert_eq!(
            encode(&p, &ext).len(),
            (n - 1) * (ext.instruction_count() + (n - 2) + 4)
        );
        assert_eq!(
            encode(&p, &ext).len(),
            encoding_len(n, ext.instruction_count())
        );
    }
    // The canonical small case: six lines over twelve instructions
    // encode into 5 * (12 + 4 + 4) = 100 all-zero bits.
    let ext = sorting_ext();
    let empty = encode(&PlanningProgram::empty(6), &ext);
    assert_eq!(ext.instruction_count(), 12);
    assert_eq!(empty.len(), 100);
    assert_eq!(empty.count_ones(), 0);
    // Round-trip identity on random programs over the sorting domain.
    for _ in 0..1000 {
        let n = 3 + rng.below(9) as usize;
        let p = random_program(&mut rng, n, &ext);
        let bits = encode(&p, &ext);
        assert_eq!(program::decode(&bits, n, &ext).unwrap(), p);
    }
    // Operator Hamming distances.
    for _ in 0..200 {
        let n = 4 + rng.below(6) as usize;
        let p = random_program(&mut rng, n, &ext);
        let base = encode(&p, &ext);
        if let Some(line) = (0..n - 1).find(|i| p.line(*i) == Line::Undefined) {
            let a = p.with_action(line, 0, &ext).unwrap();
            assert_eq!(encode(&a, &ext).hamming(&base), 1);
            let t = p.goto_targets(line).next().unwrap();
            let g = p.with_goto(line, t, Feature::ZeroCarry).unwrap();
            assert_eq!(encode(&g, &ext).hamming(&base), 2);
        }
    }
    println!("ACCEPTANCE 6 encoding-properties: PASS");
}

/// One-pointer toy domain over a boolean marker with a single marking
/// schema: four instructions total.
fn toy_domain() -> (Domain, Vec<PointerDecl>) {
    let domain = Domain {
        name: "toy".to_string(),
        types: vec![ObjectType {
            name: "cell".to_string(),
        }],
        functions: vec![FunctionSymbol {
            name: "p".to_string(),
            param_types: vec![0],
            kind: FunctionKind::Boolean,
        }],
        schemas: vec![ActionSchema {
            name: "mark".to_string(),
            params: vec![("z1".to_string(), 0)],
            pre: vec![Atom {
                lhs: Operand::Term(0, vec![0]),
                op: CmpOp::Eq,
                rhs: Operand::Const(0),
            }],
            eff: vec![Effect {
                target: (0, vec![0]),
                value: Expr::Operand(Operand::Const(1)),
            }],
        }],
    };
    (domain, vec![PointerDecl::new("i", 0)])
}

fn toy_instance(
    ext: &ExtendedDomain,
    cells: usize,
    goal: Vec<(usize, i64)>,
) -> GroundInstance {
    let instance = Instance {
        name: "toy".to_string(),
        object_counts: vec![cells as u32],
        init: Vec::new(),
        goal: Goal::Partial(
            goal.into_iter()
                .map(|(i, v)| {
                    (
                        GoalTarget::Term(GroundTerm {
                            function: 0,
                            args: vec![i as u32],
                        }),
                        v,
                    )
                })
                .collect(),
        ),
    };
    make_initial_state(ext, &instance).unwrap()
}

/// Exhaustive solvability oracle: every fully programmed `n`-line program
/// (any completion of a partial solution behaves identically on the lines
/// it reaches, so full programs cover the whole space).
fn exhaustive_solvable(
    ext: &ExtendedDomain,
    grounds: &[GroundInstance],
    n: usize,
    config: &ExecutionConfig,
) -> bool {
    let mut options: Vec<Vec<Line>> = Vec::new();
    for i in 0..n - 1 {
        let mut opts = Vec::new();
        for a in 0..ext.instruction_count() {
            opts.push(Line::Action(a as u16));
        }
        for t in 0..n {
            if t == i || t == i + 1 {
                continue;
            }
            for f in 0..4 {
                opts.push(Line::Goto {
                    target: t as u16,
                    feature: Feature::from_index(f),
                });
            }
        }
        options.push(opts);
    }
    let mut counters = vec![0usize; n - 1];
    loop {
        let mut lines: Vec<Line> = counters
            .iter()
            .zip(&options)
            .map(|(c, opts)| opts[*c])
            .collect();
        lines.push(Line::End);
        let program = PlanningProgram::from_lines(lines).unwrap();
        if grounds
            .iter()
            .all(|g| run(&program, g, config).is_solved())
        {
            return true;
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == counters.len() {
                return false;
            }
            counters[i] += 1;
            if counters[i] < options[i].len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_7_expansion_properties() {
    let (domain, pointers) = toy_domain();
    let ext = build_extended_domain(&domain, &pointers).unwrap();
    assert_eq!(ext.instruction_count(), 4); // inc, dec, test, mark
    let n = 4;
    let config = ExecutionConfig::synthesis();

    // Mark every cell of 2- and 3-cell instances: solvable within 4 lines.
    let solvable = vec![
        toy_instance(&ext, 2, vec![(0, 1), (1, 1)]),
        toy_instance(&ext, 3, vec![(0, 1), (1, 1), (2, 1)]),
    ];
    // Two identical instances with contradictory goals: unsolvable.
    let unsolvable = vec![
        toy_instance(&ext, 2, vec![(0, 1)]),
        toy_instance(&ext, 2, vec![(0, 0)]),
    ];

    // Replay the search expansion by hand over the whole (unsolvable)
    // space, checking duplicate-freedom and the branching bound.
    let mut seen = BTreeSet::new();
    let mut frontier = vec![PlanningProgram::empty(n)];
    assert!(seen.insert(encode(&frontier[0], &ext)));
    let branch_bound = ext.instruction_count() + (n - 2) * 4;
    let mut generated = 0u64;
    while let Some(node) = frontier.pop() {
        let mut deepest: i64 = -1;
        let mut dead = false;
        for g in &unsolvable {
            match run(&node, g, &config) {
                ExecutionOutcome::ReachedUndefined { line, .. } => {
                    deepest = deepest.max(line as i64)
                }
                ExecutionOutcome::Failed { .. } => {
                    dead = true;
                    break;
                }
                ExecutionOutcome::Solved { .. } => {}
            }
        }
        if dead || deepest < 0 {
            continue;
        }
        let children = expand(&node, deepest as usize, &ext);
        assert!(
            children.len() <= branch_bound,
            "branching {} beyond the bound {branch_bound}",
            children.len()
        );
        for child in children {
            generated += 1;
            assert!(
                seen.insert(encode(&child, &ext)),
                "duplicate encoding generated"
            );
            frontier.push(child);
        }
    }
    println!("  full search generated {generated} distinct nodes");

    // The canonical worked node: a goto on the preceding line suppresses
    // goto children, leaving exactly the twelve instruction children.
    let sorting = sorting_ext();
    assert_eq!(sorting.instruction_count(), 12);
    let worked = parse_program(
        "0. swap(i,j)\n1. inc(i)\n2. dec(j)\n3. goto(2, !(Yz&!Yc))\n4. --\n5. end\n",
        &sorting,
    )
    .unwrap();
    assert_eq!(expand(&worked, 4, &sorting).len(), 12);

    // Search verdicts agree with exhaustive enumeration.
    for (grounds, expected) in [(&solvable, true), (&unsolvable, false)] {
        let oracle = exhaustive_solvable(&ext, grounds, n, &config);
        assert_eq!(oracle, expected);
        let outcome = bfgp(
            &ext,
            grounds,
            n,
            &[EvalFn::F5],
            &config,
            &SearchLimits::default(),
            None,
        )
        .unwrap();
        assert_eq!(outcome.solution.is_some(), expected);
    }
    println!("ACCEPTANCE 7 expansion-properties: PASS");
}

#[test]
fn criterion_8_interpreter_properties() {
    let ext = sorting_ext();
    let ram: Vec<usize> = (0..ext.instruction_count())
        .filter(|i| ext.is_ram(*i))
        .collect();
    let mut rng = Pcg32::new(0x1AB5);

    // Flag soundness across 1e5 random register steps, against a
    // from-the-definition reference.
    let mut steps = 0u64;
    while steps < 100_000 {
        let len = 2 + rng.below(6) as usize;
        let values: Vec<i64> = (0..len).map(|_| rng.below(40) as i64).collect();
        let ground = sorting_instance(&ext, &values);
        let mut lines: Vec<Line> = (0..30)
            .map(|_| Line::Action(ram[rng.below(ram.len() as u64) as usize] as u16))
            .collect();
        lines.push(Line::End);
        let program = PlanningProgram::from_lines(lines).unwrap();
        let mut ps = ProgramState {
            state: ground.init.clone(),
            counter: 0,
        };
        let mut ref_ptr = [0u32; 2];
        for i in 0..30 {
            let idx = match program.line(i) {
                Line::Action(a) => a as usize,
                _ => unreachable!(),
            };
            let res: i64 = match &ext.instructions[idx] {
                Instruction::Ram(RamOp::Inc(p)) => {
                    if ref_ptr[*p] + 1 < len as u32 {
                        ref_ptr[*p] += 1;
                        ref_ptr[*p] as i64
                    } else {
                        0
                    }
                }
                Instruction::Ram(RamOp::Dec(p)) => {
                    if ref_ptr[*p] >= 1 {
                        ref_ptr[*p] -= 1;
                        ref_ptr[*p] as i64
                    } else {
                        0
                    }
                }
                Instruction::Ram(RamOp::CmpPtr(a, b)) => {
                    ref_ptr[*a] as i64 - ref_ptr[*b] as i64
                }
                Instruction::Ram(RamOp::Set(a, b)) => {
                    ref_ptr[*a] = ref_ptr[*b];
                    ref_ptr[*b] as i64
                }
                Instruction::Ram(RamOp::Test(_, t)) => values[ref_ptr[t[0]] as usize],
                Instruction::Ram(RamOp::CmpFn(_, t1, t2)) => {
                    values[ref_ptr[t1[0]] as usize] - values[ref_ptr[t2[0]] as usize]
                }
                Instruction::Schema(..) => unreachable!(),
            };
            assert_eq!(
                bfgp_core::interpreter::step(&program, &ground, &mut ps, 1000),
                StepEvent::Advanced
            );
            assert_eq!(ps.state.flag_zero, res == 0, "zero flag after {}", ext.instruction_name(idx));
            assert_eq!(ps.state.flag_carry, res > 0, "carry flag after {}", ext.instruction_name(idx));
            steps += 1;
        }
    }

    // No-op applicability: swap aside, the only guarded builtin schema
    // here is in triangular-sum; drive its vector-dec against a zero cell.
    let tsum = builtin_domain("triangular-sum").unwrap();
    let text = tsum.extended();
    let ground = {
        let instance = Instance {
            name: "z".to_string(),
            object_counts: vec![2],
            init: Vec::new(),
            goal: Goal::Partial(Vec::new()),
        };
        make_initial_state(&text, &instance).unwrap()
    };
    let dec_idx = text.instruction_index("vector-dec(a)").unwrap();
    let program =
        PlanningProgram::from_lines(vec![Line::Action(dec_idx as u16), Line::End]).unwrap();
    let mut ps = ProgramState {
        state: ground.init.clone(),
        counter: 0,
    };
    let before = ps.state.clone();
    bfgp_core::interpreter::step(&program, &ground, &mut ps, 100);
    assert_eq!(ps.state, before, "inapplicable effects must not leak");
    assert_eq!(ps.counter, 1);

    // Detection-on executions always terminate (the call returning is the
    // assertion), and every solved plan replays to a goal state.
    let mut config = ExecutionConfig::synthesis();
    config.collect_plan = true;
    let mut replayed = 0u32;
    for _ in 0..3000 {
        let len = 2 + rng.below(4) as usize;
        let values: Vec<i64> = (0..len).map(|_| rng.below(8) as i64).collect();
        let ground = sorting_instance(&ext, &values);
        let n = 3 + rng.below(5) as usize;
        let program = random_program(&mut rng, n, &ext);
        if let ExecutionOutcome::Solved { plan, .. } = run(&program, &ground, &config) {
            let mut lines: Vec<Line> =
                plan.unwrap().iter().map(|a| Line::Action(*a)).collect();
            lines.push(Line::End);
            let straight = PlanningProgram::from_lines(lines).unwrap();
            match run(&straight, &ground, &config) {
                ExecutionOutcome::Solved { .. } => replayed += 1,
                other => panic!("replay must re-reach the goal: {other:?}"),
            }
        }
    }
    assert!(replayed > 20);
    println!("ACCEPTANCE 8 interpreter-properties: PASS ({replayed} plans replayed)");
}

fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn criterion_9_translator() {
    // unstack translates to the expected pointer-level semantics.
    let strips = pddl::parse_pddl_domain(&fixture("blocks.pddl")).unwrap();
    let domain = pddl::translate_domain(&strips);
    let unstack = domain
        .schemas
        .iter()
        .find(|s| s.name == "unstack")
        .unwrap();
    let fn_idx = |name: &str| domain.function_index(name).unwrap();
    let pre: BTreeSet<(usize, Vec<usize>)> = unstack
        .pre
        .iter()
        .map(|a| match (&a.lhs, a.op, &a.rhs) {
            (Operand::Term(f, slots), CmpOp::Eq, Operand::Const(1)) => (*f, slots.clone()),
            other => panic!("expected `term = 1` atoms, got {other:?}"),
        })
        .collect();
    let expected_pre: BTreeSet<(usize, Vec<usize>)> = [
        (fn_idx("clear"), vec![0]),
        (fn_idx("handempty"), vec![]),
        (fn_idx("on"), vec![0, 1]),
    ]
    .into_iter()
    .collect();
    assert_eq!(pre, expected_pre);
    let eff: BTreeSet<(usize, Vec<usize>, i64)> = unstack
        .eff
        .iter()
        .map(|e| match &e.value {
            Expr::Operand(Operand::Const(v)) => (e.target.0, e.target.1.clone(), *v),
            other => panic!("expected constant assignments, got {other:?}"),
        })
        .collect();
    let expected_eff: BTreeSet<(usize, Vec<usize>, i64)> = [
        (fn_idx("clear"), vec![0], 0),
        (fn_idx("handempty"), vec![], 0),
        (fn_idx("on"), vec![0, 1], 0),
        (fn_idx("holding"), vec![0], 1),
        (fn_idx("clear"), vec![1], 1),
    ]
    .into_iter()
    .collect();
    assert_eq!(eff, expected_eff);

    // The seven-step pointer plan dismantles the translated three-block
    // tower.
    let problem = pddl::parse_pddl_problem(&fixture("blocks-p3.pddl"), &strips).unwrap();
    let instance = pddl::translate_problem(&strips, &problem);
    let block = domain.type_index("block").unwrap();
    let ext = build_extended_domain(
        &domain,
        &[PointerDecl::new("i", block), PointerDecl::new("j", block)],
    )
    .unwrap();
    let ground = make_initial_state(&ext, &instance).unwrap();
    let plan = [
        "inc(j)",
        "unstack(i,j)",
        "put-down(i)",
        "inc(i)",
        "inc(j)",
        "unstack(i,j)",
        "put-down(i)",
    ];
    let mut lines: Vec<Line> = plan
        .iter()
        .map(|name| Line::Action(ext.instruction_index(name).unwrap() as u16))
        .collect();
    lines.push(Line::End);
    let straight = PlanningProgram::from_lines(lines).unwrap();
    let outcome = run(&straight, &ground, &ExecutionConfig::validation());
    assert!(outcome.is_solved(), "{outcome:?}");

    // Translated gripper instances are solved by the bundled gripper
    // program once the pointers take the expected names.
    let strips = pddl::parse_pddl_domain(&fixture("gripper.pddl")).unwrap();
    let domain = pddl::translate_domain(&strips);
    let t = |name: &str| domain.type_index(name).unwrap();
    let ext = build_extended_domain(
        &domain,
        &[
            PointerDecl::new("b1", t("ball")),
            PointerDecl::new("r1", t("room")),
            PointerDecl::new("r2", t("room")),
            PointerDecl::new("g1", t("gripper")),
        ],
    )
    .unwrap();
    let program = parse_program(corpus_program_text("gripper").unwrap(), &ext).unwrap();
    for problem_file in ["gripper-p2.pddl", "gripper-p4.pddl"] {
        let problem = pddl::parse_pddl_problem(&fixture(problem_file), &strips).unwrap();
        let instance = pddl::translate_problem(&strips, &problem);
        let ground = make_initial_state(&ext, &instance).unwrap();
        let outcome = run(&program, &ground, &ExecutionConfig::validation());
        assert!(outcome.is_solved(), "{problem_file}: {outcome:?}");
        assert!(!goal_satisfied(&ground.init, &ground.goal));
    }
    println!("ACCEPTANCE 9 translator: PASS");
}

/// Stretch benchmarks outside the acceptance gate; run with
/// `cargo test --test acceptance -- --ignored` when there is time to
/// spare.
#[test]
#[ignore = "stretch target with a four-hour budget, not gating"]
fn stretch_sorting_and_fibonacci_synthesis() {
    for name in ["fibonacci", "sorting"] {
        let run = synthesize(name, &[EvalFn::F5], 4 * 3600);
        println!(
            "  {name}: solved in {:.1}s ({} expanded, {} evaluated)",
            run.wall_secs, run.expanded, run.evaluated
        );
    }
}
