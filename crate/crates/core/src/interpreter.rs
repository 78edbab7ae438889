//! Deterministic execution of (partially specified) planning programs.
//!
//! Execution semantics:
//!
//! * Planning actions are always executable; their effects update the
//!   state only when the precondition holds (inapplicable actions are
//!   no-ops). They never touch the flags.
//! * Register operations always update the flags from their result:
//!   `flag_zero ⇔ res = 0`, `flag_carry ⇔ res > 0`. A pointer
//!   increment/decrement that would leave the pointer's domain leaves the
//!   pointer unchanged and reports `res = 0`, which is what lets
//!   upward/downward scan loops in generalized plans terminate at either
//!   end of an object range.
//! * `goto(t, feature)` jumps when the current flags differ from the
//!   stored feature and falls through when they match.
//! * Arithmetic effects outside `[0, value_bound]` fail the execution
//!   rather than saturate, so synthesis cannot exploit overflow.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{goal_satisfied, CompiledInstr, GroundInstance, State};
use crate::program::{Line, PlanningProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    /// Terminated at `end` without satisfying the goal.
    Incorrect,
    /// A full program state repeated (detection on).
    Infinite,
    /// An effect produced a value outside `[0, value_bound]`.
    BoundExceeded,
    /// Step limit hit (detection off).
    StepLimit,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailReason::Incorrect => "incorrect",
            FailReason::Infinite => "infinite",
            FailReason::BoundExceeded => "bound-exceeded",
            FailReason::StepLimit => "step-limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExecutionOutcome {
    /// Terminated at `end` in a goal state. `plan` is populated when
    /// `ExecutionConfig::collect_plan` is set.
    Solved {
        plan_len: u64,
        plan: Option<Vec<u16>>,
        steps: u64,
    },
    Failed {
        reason: FailReason,
        steps: u64,
    },
    /// Execution hit an undefined line; the program may still be
    /// completable.
    ReachedUndefined {
        line: u16,
        state: State,
        steps: u64,
        plan_len: u64,
    },
}

impl ExecutionOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, ExecutionOutcome::Solved { .. })
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, ExecutionOutcome::Failed { .. })
    }

    pub fn plan_len(&self) -> u64 {
        match self {
            ExecutionOutcome::Solved { plan_len, .. } => *plan_len,
            ExecutionOutcome::ReachedUndefined { plan_len, .. } => *plan_len,
            ExecutionOutcome::Failed { .. } => 0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExecutionConfig {
    /// Cap on arithmetic results; exceeding it is a dead end.
    pub value_bound: i64,
    pub infinite_detection: bool,
    /// Only consulted when detection is off.
    pub step_limit: u64,
    pub collect_plan: bool,
}

pub const SYNTHESIS_BOUND: i64 = 100;
pub const VALIDATION_BOUND: i64 = 1_000_000_000;
pub const DEFAULT_STEP_LIMIT: u64 = 10_000_000;

impl ExecutionConfig {
    pub fn synthesis() -> Self {
        ExecutionConfig {
            value_bound: SYNTHESIS_BOUND,
            infinite_detection: true,
            step_limit: DEFAULT_STEP_LIMIT,
            collect_plan: false,
        }
    }

    pub fn validation() -> Self {
        ExecutionConfig {
            value_bound: VALIDATION_BOUND,
            infinite_detection: false,
            step_limit: DEFAULT_STEP_LIMIT,
            collect_plan: false,
        }
    }
}

impl Default for ExecutionConfig {
    fn default() -> Self {
        ExecutionConfig::synthesis()
    }
}

/// Interpreter configuration: a planning state plus the program counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramState {
    pub state: State,
    pub counter: usize,
}

/// Result of executing the single line under the program counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepEvent {
    /// The counter moved; execution continues.
    Advanced,
    ReachedEnd,
    ReachedUndefined,
    BoundExceeded,
}

enum LineExec {
    /// `jumped_back` is set when a goto moved the counter backwards.
    Ran { instruction: bool, jumped_back: bool },
    End,
    Undefined,
    BoundExceeded,
}

#[inline]
fn set_flags(state: &mut State, res: i64) {
    state.flag_zero = res == 0;
    state.flag_carry = res > 0;
}

#[inline]
fn exec_line(
    program: &PlanningProgram,
    ground: &GroundInstance,
    ps: &mut ProgramState,
    value_bound: i64,
) -> LineExec {
    match program.line(ps.counter) {
        Line::End => LineExec::End,
        Line::Undefined => LineExec::Undefined,
        Line::Goto { target, feature } => {
            let (z, c) = (ps.state.flag_zero, ps.state.flag_carry);
            if feature.matches(z, c) {
                ps.counter += 1;
                LineExec::Ran {
                    instruction: false,
                    jumped_back: false,
                }
            } else {
                let t = target as usize;
                let back = t <= ps.counter;
                ps.counter = t;
                LineExec::Ran {
                    instruction: false,
                    jumped_back: back,
                }
            }
        }
        Line::Action(idx) => {
            let state = &mut ps.state;
            match &ground.compiled[idx as usize] {
                CompiledInstr::IncPtr(p) => {
                    let limit = ground.pointer_limits[*p];
                    let cur = state.pointers[*p];
                    let res = if cur + 1 < limit {
                        state.pointers[*p] = cur + 1;
                        (cur + 1) as i64
                    } else {
                        0
                    };
                    set_flags(state, res);
                }
                CompiledInstr::DecPtr(p) => {
                    let cur = state.pointers[*p];
                    let res = if cur >= 1 {
                        state.pointers[*p] = cur - 1;
                        (cur - 1) as i64
                    } else {
                        0
                    };
                    set_flags(state, res);
                }
                CompiledInstr::CmpPtr(a, b) => {
                    let res = state.pointers[*a] as i64 - state.pointers[*b] as i64;
                    set_flags(state, res);
                }
                CompiledInstr::SetPtr(dst, src) => {
                    let res = state.pointers[*src];
                    state.pointers[*dst] = res;
                    set_flags(state, res as i64);
                }
                CompiledInstr::TestVar(term) => {
                    let res = state.values[term.index(&state.pointers)];
                    set_flags(state, res);
                }
                CompiledInstr::CmpVar(a, b) => {
                    let va = state.values[a.index(&state.pointers)];
                    let vb = state.values[b.index(&state.pointers)];
                    set_flags(state, va - vb);
                }
                CompiledInstr::Action { pre, eff } => {
                    let applicable = pre.iter().all(|atom| {
                        atom.op.eval(atom.lhs.value(state), atom.rhs.value(state))
                    });
                    if applicable {
                        // All right-hand sides read the pre-state; writes
                        // happen afterwards in declaration order.
                        let mut staged: Vec<(usize, i64)> = Vec::with_capacity(eff.len());
                        for effect in eff.iter() {
                            let value = effect.value.value(state);
                            if value < 0 || value > value_bound {
                                return LineExec::BoundExceeded;
                            }
                            staged.push((effect.target.index(&state.pointers), value));
                        }
                        for (idx, value) in staged {
                            state.values[idx] = value;
                        }
                    }
                }
            }
            ps.counter += 1;
            LineExec::Ran {
                instruction: true,
                jumped_back: false,
            }
        }
    }
}

/// Executes the single line under the counter. Failures surface as
/// events, not errors; `run` turns them into outcomes.
pub fn step(
    program: &PlanningProgram,
    ground: &GroundInstance,
    ps: &mut ProgramState,
    value_bound: i64,
) -> StepEvent {
    match exec_line(program, ground, ps, value_bound) {
        LineExec::Ran { .. } => StepEvent::Advanced,
        LineExec::End => StepEvent::ReachedEnd,
        LineExec::Undefined => StepEvent::ReachedUndefined,
        LineExec::BoundExceeded => StepEvent::BoundExceeded,
    }
}

/// Runs `program` on one grounded instance. Deterministic; the returned
/// plan lists executed instruction indices (gotos and `end` excluded).
///
/// With detection on, a revisited program state reports
/// `Failed(Infinite)`; revisits are checked at backward jumps, which every
/// non-terminating execution must cross infinitely often. With detection
/// off, `step_limit` bounds the run.
pub fn run(
    program: &PlanningProgram,
    ground: &GroundInstance,
    config: &ExecutionConfig,
) -> ExecutionOutcome {
    run_measured(program, ground, config).0
}

/// [`run`] plus the number of program states recorded for revisit
/// detection (0 with detection off), from which callers can estimate the
/// run's memory footprint.
pub fn run_measured(
    program: &PlanningProgram,
    ground: &GroundInstance,
    config: &ExecutionConfig,
) -> (ExecutionOutcome, u64) {
    let mut ps = ProgramState {
        state: ground.init.clone(),
        counter: 0,
    };
    let mut steps: u64 = 0;
    let mut plan_len: u64 = 0;
    let mut plan: Option<Vec<u16>> = if config.collect_plan {
        Some(Vec::new())
    } else {
        None
    };
    let mut visited: BTreeSet<Box<[i64]>> = BTreeSet::new();

    loop {
        let line = program.line(ps.counter);
        match exec_line(program, ground, &mut ps, config.value_bound) {
            LineExec::End => {
                let outcome = if goal_satisfied(&ps.state, &ground.goal) {
                    ExecutionOutcome::Solved {
                        plan_len,
                        plan,
                        steps,
                    }
                } else {
                    ExecutionOutcome::Failed {
                        reason: FailReason::Incorrect,
                        steps,
                    }
                };
                return (outcome, visited.len() as u64);
            }
            LineExec::Undefined => {
                let outcome = ExecutionOutcome::ReachedUndefined {
                    line: ps.counter as u16,
                    state: ps.state,
                    steps,
                    plan_len,
                };
                return (outcome, visited.len() as u64);
            }
            LineExec::BoundExceeded => {
                let outcome = ExecutionOutcome::Failed {
                    reason: FailReason::BoundExceeded,
                    steps,
                };
                return (outcome, visited.len() as u64);
            }
            LineExec::Ran {
                instruction,
                jumped_back,
            } => {
                steps += 1;
                if instruction {
                    plan_len += 1;
                    if let Some(p) = plan.as_mut() {
                        if let Line::Action(idx) = line {
                            p.push(idx);
                        }
                    }
                }
                if config.infinite_detection {
                    if jumped_back && !visited.insert(ps.state.snapshot(ps.counter)) {
                        let outcome = ExecutionOutcome::Failed {
                            reason: FailReason::Infinite,
                            steps,
                        };
                        return (outcome, visited.len() as u64);
                    }
                } else if steps >= config.step_limit {
                    let outcome = ExecutionOutcome::Failed {
                        reason: FailReason::StepLimit,
                        steps,
                    };
                    return (outcome, visited.len() as u64);
                }
            }
        }
    }
}

/// Element-wise [`run`] over a set of instances. With `short_circuit`,
/// stops at the first failed instance (the remaining outcomes are
/// omitted); by determinism the verdict is the same either way.
pub fn run_all(
    program: &PlanningProgram,
    instances: &[GroundInstance],
    config: &ExecutionConfig,
    short_circuit: bool,
) -> Vec<ExecutionOutcome> {
    let mut outcomes = Vec::with_capacity(instances.len());
    for ground in instances {
        let outcome = run(program, ground, config);
        let failed = outcome.is_failed();
        outcomes.push(outcome);
        if short_circuit && failed {
            break;
        }
    }
    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_extended_domain, make_initial_state, Domain, FunctionKind, FunctionSymbol, Goal,
        GoalTarget, GroundTerm, Instance, ObjectType, PointerDecl,
    };
    use crate::program::parse_program;
    use alloc::string::ToString;
    use alloc::vec;

    fn counter_domain() -> (Domain, Vec<PointerDecl>) {
        let domain = Domain {
            name: "count".to_string(),
            types: vec![ObjectType {
                name: "cell".to_string(),
            }],
            functions: vec![FunctionSymbol {
                name: "vector".to_string(),
                param_types: vec![0],
                kind: FunctionKind::Numeric,
            }],
            schemas: Vec::new(),
        };
        (domain, vec![PointerDecl::new("i", 0), PointerDecl::new("j", 0)])
    }

    fn ground(domain: &Domain, ptrs: &[PointerDecl], cells: &[i64], goal: Goal) -> GroundInstance {
        let ext = build_extended_domain(domain, ptrs).unwrap();
        let instance = Instance {
            name: "t".to_string(),
            object_counts: vec![cells.len() as u32],
            init: cells
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    (
                        GroundTerm {
                            function: 0,
                            args: vec![i as u32],
                        },
                        *v,
                    )
                })
                .collect(),
            goal,
        };
        make_initial_state(&ext, &instance).unwrap()
    }

    #[test]
    fn cmp_sets_flags_from_signed_result() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(&domain, &ptrs, &[0, 0, 0, 0, 0, 0], Goal::Partial(Vec::new()));
        // i=2, j=5 -> res = -3 -> both flags false.
        let text = "0. inc(i)\n1. inc(i)\n2. inc(j)\n3. inc(j)\n4. inc(j)\n5. inc(j)\n6. inc(j)\n7. cmp(i,j)\n8. end\n";
        let program = parse_program(text, &ext).unwrap();
        let mut ps = ProgramState {
            state: g.init.clone(),
            counter: 0,
        };
        for _ in 0..8 {
            assert_eq!(step(&program, &g, &mut ps, 100), StepEvent::Advanced);
        }
        assert_eq!(ps.state.pointers, vec![2, 5]);
        assert!(!ps.state.flag_zero && !ps.state.flag_carry);
    }

    #[test]
    fn unconditional_feature_always_jumps() {
        // inc(i); goto(0, !(Yz&Yc)) loops until the pointer orbit repeats.
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(&domain, &ptrs, &[0, 0, 0], Goal::Partial(Vec::new()));
        let program = parse_program("0. inc(i)\n1. goto(0, !(Yz&Yc))\n2. end\n", &ext).unwrap();
        let outcome = run(&program, &g, &ExecutionConfig::synthesis());
        assert!(matches!(
            outcome,
            ExecutionOutcome::Failed {
                reason: FailReason::Infinite,
                ..
            }
        ));
    }

    #[test]
    fn end_on_satisfied_goal_is_solved_with_empty_plan() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(
            &domain,
            &ptrs,
            &[4],
            Goal::Partial(vec![(
                GoalTarget::Term(GroundTerm {
                    function: 0,
                    args: vec![0],
                }),
                4,
            )]),
        );
        let program = parse_program("0. end\n", &ext).unwrap();
        let mut config = ExecutionConfig::synthesis();
        config.collect_plan = true;
        match run(&program, &g, &config) {
            ExecutionOutcome::Solved { plan_len, plan, .. } => {
                assert_eq!(plan_len, 0);
                assert_eq!(plan.unwrap(), Vec::<u16>::new());
            }
            other => panic!("expected solved, got {other:?}"),
        }
    }

    #[test]
    fn pointer_inc_at_boundary_reports_zero_and_stays() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(&domain, &ptrs, &[1, 2], Goal::Partial(Vec::new()));
        let program = parse_program("0. inc(i)\n1. inc(i)\n2. end\n", &ext).unwrap();
        let mut ps = ProgramState {
            state: g.init.clone(),
            counter: 0,
        };
        step(&program, &g, &mut ps, 100);
        assert_eq!(ps.state.pointers[0], 1);
        assert!(!ps.state.flag_zero && ps.state.flag_carry);
        step(&program, &g, &mut ps, 100);
        assert_eq!(ps.state.pointers[0], 1, "pointer pinned at the boundary");
        assert!(ps.state.flag_zero && !ps.state.flag_carry);
    }

    #[test]
    fn pointer_dec_at_zero_reports_zero_and_stays() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(&domain, &ptrs, &[1, 2], Goal::Partial(Vec::new()));
        let program = parse_program("0. dec(j)\n1. end\n", &ext).unwrap();
        let mut ps = ProgramState {
            state: g.init.clone(),
            counter: 0,
        };
        step(&program, &g, &mut ps, 100);
        assert_eq!(ps.state.pointers[1], 0);
        assert!(ps.state.flag_zero && !ps.state.flag_carry);
    }

    #[test]
    fn goto_falls_through_when_flags_match() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(&domain, &ptrs, &[0, 5], Goal::Partial(Vec::new()));
        // test(vector(i)) with vector(0)=0 sets (Yz,!Yc); the goto stores
        // exactly that feature, so it must fall through.
        let program = parse_program(
            "0. test(vector(i))\n1. goto(0, !(Yz&!Yc))\n2. end\n",
            &ext,
        )
        .unwrap();
        let mut ps = ProgramState {
            state: g.init.clone(),
            counter: 0,
        };
        step(&program, &g, &mut ps, 100);
        assert!(ps.state.flag_zero);
        assert_eq!(step(&program, &g, &mut ps, 100), StepEvent::Advanced);
        assert_eq!(ps.counter, 2);
    }

    #[test]
    fn step_limit_fires_when_detection_off() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let g = ground(&domain, &ptrs, &[0, 0], Goal::Partial(Vec::new()));
        let program = parse_program("0. inc(i)\n1. goto(0, !(Yz&Yc))\n2. end\n", &ext).unwrap();
        let config = ExecutionConfig {
            value_bound: 100,
            infinite_detection: false,
            step_limit: 50,
            collect_plan: false,
        };
        assert!(matches!(
            run(&program, &g, &config),
            ExecutionOutcome::Failed {
                reason: FailReason::StepLimit,
                steps: 50,
            }
        ));
    }

    #[test]
    fn run_all_short_circuits_on_failure() {
        let (domain, ptrs) = counter_domain();
        let ext = build_extended_domain(&domain, &ptrs).unwrap();
        let bad_goal = Goal::Partial(vec![(
            GoalTarget::Term(GroundTerm {
                function: 0,
                args: vec![0],
            }),
            99,
        )]);
        let g1 = ground(&domain, &ptrs, &[1], bad_goal.clone());
        let g2 = ground(&domain, &ptrs, &[1], bad_goal);
        let program = parse_program("0. end\n", &ext).unwrap();
        let outcomes = run_all(
            &program,
            &[g1, g2],
            &ExecutionConfig::synthesis(),
            true,
        );
        assert_eq!(outcomes.len(), 1);
        assert!(outcomes[0].is_failed());
    }
}
