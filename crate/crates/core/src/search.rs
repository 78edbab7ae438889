//! Best-first frontier search over partially specified planning programs.
//!
//! The root is the empty program. Expanding a node programs only the
//! deepest undefined line reached by executing the node's program on the
//! instance set, which keeps the search tree duplicate-free, so no closed
//! list is kept. Children that fail an instance are dead ends and are
//! discarded; a child that solves every instance ends the search.

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::evaluation::{eval_structural, goal_deviation, EvalError, EvalFn};
use crate::interpreter::{run, ExecutionConfig, ExecutionOutcome};
use crate::model::{ExtendedDomain, GroundGoal, GroundInstance};
use crate::program::{Line, PlanningProgram, FEATURES};

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchLimits {
    /// Watermark on open-list size, approximating a memory cap.
    pub max_open_nodes: Option<usize>,
    /// Cap on evaluated nodes.
    pub max_evaluated: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Solution,
    /// Open list emptied without a solution.
    Exhausted,
    NodeLimit,
    Timeout,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Solution => "solution",
            Termination::Exhausted => "exhausted",
            Termination::NodeLimit => "node-limit",
            Termination::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchStats {
    pub expanded: u64,
    pub evaluated: u64,
    pub open_peak: usize,
    pub termination: Termination,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub solution: Option<PlanningProgram>,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    EmptyProblem,
    EmptyKey,
    BadLineCount,
    Eval(EvalError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::EmptyProblem => f.write_str("no instances to solve"),
            SearchError::EmptyKey => f.write_str("evaluation key is empty"),
            SearchError::BadLineCount => f.write_str("programs need at least one line"),
            SearchError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl From<EvalError> for SearchError {
    fn from(e: EvalError) -> Self {
        SearchError::Eval(e)
    }
}

struct Node {
    program: PlanningProgram,
    key: Box<[i64]>,
    seq: u64,
    programmable: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.seq == other.seq
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap pops the maximum; reverse so the smallest key (FIFO
        // on ties) comes out first.
        self.key
            .cmp(&other.key)
            .then(self.seq.cmp(&other.seq))
            .reverse()
    }
}

/// Enumerates the successor programs of programming line `line`, in
/// canonical child order: every instruction in instruction-set order, then
/// gotos (ascending target, then feature) when the preceding line holds a
/// register instruction. Gotos never follow planning schemas (which leave
/// the flags untouched), other gotos, or the start of the program.
pub fn expand(
    program: &PlanningProgram,
    line: usize,
    ext: &ExtendedDomain,
) -> Vec<PlanningProgram> {
    let mut children = Vec::new();
    for instr in 0..ext.instruction_count() {
        children.push(
            program
                .with_action(line, instr, ext)
                .expect("expansion only touches undefined lines"),
        );
    }
    let goto_allowed = line > 0
        && match program.line(line - 1) {
            Line::Action(idx) => ext.is_ram(idx as usize),
            _ => false,
        };
    if goto_allowed {
        let targets: Vec<usize> = program.goto_targets(line).collect();
        for target in targets {
            for feature in FEATURES {
                children.push(
                    program
                        .with_goto(line, target, feature)
                        .expect("targets are filtered to be admissible"),
                );
            }
        }
    }
    children
}

/// Outcome of evaluating one candidate against the whole instance set.
enum Verdict {
    Solution,
    DeadEnd,
    Open {
        key: Box<[i64]>,
        programmable: usize,
    },
}

struct Evaluator<'a> {
    instances: &'a [GroundInstance],
    config: ExecutionConfig,
    key: Vec<EvalFn>,
    needs_deviation: bool,
    short_circuit: bool,
}

impl<'a> Evaluator<'a> {
    fn new(
        instances: &'a [GroundInstance],
        config: &ExecutionConfig,
        key: &[EvalFn],
    ) -> Result<Self, SearchError> {
        let needs_deviation = key.iter().any(|f| f.needs_goal_deviation());
        if needs_deviation {
            for (i, inst) in instances.iter().enumerate() {
                if matches!(inst.goal, GroundGoal::Constraint(_)) {
                    return Err(EvalError::GoalNotPartialState { instance: i }.into());
                }
            }
        }
        Ok(Evaluator {
            instances,
            config: *config,
            key: key.to_vec(),
            needs_deviation,
            short_circuit: true,
        })
    }

    fn evaluate(&self, program: &PlanningProgram) -> Verdict {
        let n = program.n() as i64;
        let mut all_solved = true;
        let mut deepest_undefined: i64 = -1;
        let mut deepest: i64 = 0;
        let mut deviation = 0i64;
        let mut cost = 0i64;
        for inst in self.instances {
            match run(program, inst, &self.config) {
                ExecutionOutcome::Solved { plan_len, .. } => {
                    deepest = deepest.max(n - 1);
                    cost = cost.saturating_add(plan_len as i64);
                }
                ExecutionOutcome::ReachedUndefined {
                    line,
                    state,
                    plan_len,
                    ..
                } => {
                    all_solved = false;
                    deepest_undefined = deepest_undefined.max(line as i64);
                    deepest = deepest.max(line as i64);
                    cost = cost.saturating_add(plan_len as i64);
                    if self.needs_deviation {
                        let d = goal_deviation(&state, &inst.goal)
                            .expect("partial goals checked at construction");
                        deviation = deviation.saturating_add(d);
                    }
                }
                ExecutionOutcome::Failed { .. } => {
                    if self.short_circuit {
                        return Verdict::DeadEnd;
                    }
                    all_solved = false;
                }
            }
        }
        if all_solved {
            return Verdict::Solution;
        }
        if deepest_undefined < 0 {
            // Every instance terminated; a non-solution here means some
            // execution was incorrect, which the failure arm caught.
            return Verdict::DeadEnd;
        }
        let mut key = Vec::with_capacity(self.key.len());
        let structural = if self.key.iter().any(|f| !f.is_performance()) {
            Some(eval_structural(program))
        } else {
            None
        };
        for f in &self.key {
            let v = match f {
                EvalFn::F1 => structural.as_ref().unwrap().goto_count,
                EvalFn::F2 => structural.as_ref().unwrap().undefined_count,
                EvalFn::F3 => structural.as_ref().unwrap().repeated_instructions,
                EvalFn::F7 => structural.as_ref().unwrap().max_goto_nesting,
                EvalFn::F4 => (n - 1) - deepest,
                EvalFn::F5 => deviation,
                EvalFn::F6 => cost,
                EvalFn::F8 => deviation.saturating_add(cost),
                EvalFn::F9 => deviation.saturating_mul(5).saturating_add(cost),
            };
            key.push(v);
        }
        Verdict::Open {
            key: key.into_boxed_slice(),
            programmable: deepest_undefined as usize,
        }
    }
}

/// Runs the best-first search for a program of `n` lines solving every
/// instance. `monitor` is polled periodically; returning `true` aborts
/// with a timeout. Returns the first solution found, or `None` with the
/// stats explaining why.
#[allow(clippy::too_many_arguments)]
pub fn bfgp(
    ext: &ExtendedDomain,
    instances: &[GroundInstance],
    n: usize,
    key: &[EvalFn],
    config: &ExecutionConfig,
    limits: &SearchLimits,
    mut monitor: Option<&mut dyn FnMut(&SearchStats) -> bool>,
) -> Result<SearchOutcome, SearchError> {
    if instances.is_empty() {
        return Err(SearchError::EmptyProblem);
    }
    if key.is_empty() {
        return Err(SearchError::EmptyKey);
    }
    if n == 0 {
        return Err(SearchError::BadLineCount);
    }
    let evaluator = Evaluator::new(instances, config, key)?;
    let mut stats = SearchStats {
        expanded: 0,
        evaluated: 0,
        open_peak: 0,
        termination: Termination::Exhausted,
    };
    let mut open: BinaryHeap<Node> = BinaryHeap::new();
    let mut seq = 0u64;

    let root = PlanningProgram::empty(n);
    stats.evaluated += 1;
    match evaluator.evaluate(&root) {
        Verdict::Solution => {
            stats.termination = Termination::Solution;
            return Ok(SearchOutcome {
                solution: Some(root),
                stats,
            });
        }
        Verdict::DeadEnd => {
            return Ok(SearchOutcome {
                solution: None,
                stats,
            });
        }
        Verdict::Open { key, programmable } => {
            open.push(Node {
                program: root,
                key,
                seq,
                programmable,
            });
            seq += 1;
        }
    }

    while let Some(node) = open.pop() {
        if let Some(cb) = monitor.as_mut() {
            if stats.expanded % 512 == 0 && cb(&stats) {
                stats.termination = Termination::Timeout;
                return Ok(SearchOutcome {
                    solution: None,
                    stats,
                });
            }
        }
        if let Some(max) = limits.max_evaluated {
            if stats.evaluated >= max {
                stats.termination = Termination::NodeLimit;
                return Ok(SearchOutcome {
                    solution: None,
                    stats,
                });
            }
        }
        stats.expanded += 1;
        for child in expand(&node.program, node.programmable, ext) {
            stats.evaluated += 1;
            match evaluator.evaluate(&child) {
                Verdict::Solution => {
                    stats.termination = Termination::Solution;
                    stats.open_peak = stats.open_peak.max(open.len());
                    return Ok(SearchOutcome {
                        solution: Some(child),
                        stats,
                    });
                }
                Verdict::DeadEnd => {}
                Verdict::Open { key, programmable } => {
                    open.push(Node {
                        program: child,
                        key,
                        seq,
                        programmable,
                    });
                    seq += 1;
                }
            }
        }
        stats.open_peak = stats.open_peak.max(open.len());
        if let Some(max) = limits.max_open_nodes {
            if open.len() > max {
                stats.termination = Termination::NodeLimit;
                return Ok(SearchOutcome {
                    solution: None,
                    stats,
                });
            }
        }
    }
    Ok(SearchOutcome {
        solution: None,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_extended_domain, make_initial_state, Domain, FunctionKind, FunctionSymbol, Goal,
        GoalTarget, GroundTerm, Instance, ObjectType, PointerDecl,
    };
    use alloc::string::ToString;
    use alloc::vec;

    fn toy() -> (crate::model::ExtendedDomain, Vec<GroundInstance>) {
        // One pointer over cells carrying a numeric vector; no schemas.
        let domain = Domain {
            name: "toy".to_string(),
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
        let ext = build_extended_domain(&domain, &[PointerDecl::new("i", 0)]).unwrap();
        let term = |i: usize| GroundTerm {
            function: 0,
            args: vec![i as u32],
        };
        let instance = Instance {
            name: "t0".to_string(),
            object_counts: vec![2],
            init: vec![(term(0), 1)],
            goal: Goal::Partial(vec![(GoalTarget::Pointer("i".to_string()), 1)]),
        };
        let ground = make_initial_state(&ext, &instance).unwrap();
        (ext, vec![ground])
    }

    #[test]
    fn finds_single_step_solution() {
        let (ext, instances) = toy();
        let outcome = bfgp(
            &ext,
            &instances,
            2,
            &[EvalFn::F5],
            &ExecutionConfig::synthesis(),
            &SearchLimits::default(),
            None,
        )
        .unwrap();
        let solution = outcome.solution.expect("inc(i); end solves this");
        assert_eq!(solution.line(0), Line::Action(0));
        assert_eq!(outcome.stats.termination, Termination::Solution);
    }

    #[test]
    fn trivial_goal_is_solved_by_the_root() {
        let (ext, mut instances) = toy();
        // Rewrite the goal so the initial state already satisfies it.
        instances[0].goal = GroundGoal::Partial(vec![]);
        let outcome = bfgp(
            &ext,
            &instances,
            1,
            &[EvalFn::F2],
            &ExecutionConfig::synthesis(),
            &SearchLimits::default(),
            None,
        )
        .unwrap();
        let solution = outcome.solution.expect("the empty program suffices");
        assert_eq!(solution.n(), 1);
        assert_eq!(outcome.stats.evaluated, 1);
        assert_eq!(outcome.stats.expanded, 0);
    }

    #[test]
    fn exhausts_when_no_program_fits() {
        let (ext, instances) = toy();
        // A 1-line program is just `end`, which cannot move the pointer.
        let outcome = bfgp(
            &ext,
            &instances,
            1,
            &[EvalFn::F2],
            &ExecutionConfig::synthesis(),
            &SearchLimits::default(),
            None,
        )
        .unwrap();
        assert!(outcome.solution.is_none());
        assert_eq!(outcome.stats.termination, Termination::Exhausted);
    }

    #[test]
    fn goto_children_only_after_register_instructions() {
        let (ext, _) = toy();
        let n = 4;
        let base = PlanningProgram::empty(n);
        // Line 0 undefined: action children only.
        assert_eq!(expand(&base, 0, &ext).len(), ext.instruction_count());
        // After a register instruction: actions plus (n-2)*4 gotos.
        let after_ram = base.with_action(0, 0, &ext).unwrap();
        assert_eq!(
            expand(&after_ram, 1, &ext).len(),
            ext.instruction_count() + (n - 2) * 4
        );
        // After a goto: no goto children again.
        let after_goto = after_ram
            .with_goto(1, 0, crate::program::Feature::ZeroCarry)
            .unwrap();
        assert_eq!(expand(&after_goto, 2, &ext).len(), ext.instruction_count());
    }

    #[test]
    fn goto_children_enumerate_all_target_feature_pairs() {
        // After a register instruction on the previous line of a 6-line
        // program, a node branches into every instruction plus four
        // features for each of the n-2 admissible targets.
        let domain = Domain {
            name: "s".to_string(),
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
        let ext = build_extended_domain(
            &domain,
            &[PointerDecl::new("i", 0), PointerDecl::new("j", 0)],
        )
        .unwrap();
        let cmp = ext.instruction_index("cmp(i,j)").unwrap();
        let n = 6;
        let node = PlanningProgram::empty(n).with_action(0, cmp, &ext).unwrap();
        let children = expand(&node, 1, &ext);
        assert_eq!(children.len(), ext.instruction_count() + (n - 2) * 4);
        let gotos = children
            .iter()
            .filter(|c| matches!(c.line(1), Line::Goto { .. }))
            .count();
        assert_eq!(gotos, (n - 2) * 4);
    }

    #[test]
    fn constraint_goals_work_without_goal_deviation() {
        use crate::model::{GoalExpr, GoalOperand, GoalTarget, Goal, CmpOp};
        let domain = Domain {
            name: "c".to_string(),
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
        let ext = build_extended_domain(&domain, &[PointerDecl::new("i", 0)]).unwrap();
        let instance = Instance {
            name: "c0".to_string(),
            object_counts: vec![3],
            init: Vec::new(),
            goal: Goal::Constraint(GoalExpr::Cmp(
                GoalOperand::Target(GoalTarget::Pointer("i".to_string())),
                CmpOp::Ge,
                GoalOperand::Const(2),
            )),
        };
        let grounds = vec![make_initial_state(&ext, &instance).unwrap()];
        // Deviation-based keys are rejected up front...
        let err = bfgp(
            &ext,
            &grounds,
            4,
            &[EvalFn::F5],
            &ExecutionConfig::synthesis(),
            &SearchLimits::default(),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::Eval(_)));
        // ...while the structure-free distance estimate still searches.
        let outcome = bfgp(
            &ext,
            &grounds,
            4,
            &[EvalFn::F4],
            &ExecutionConfig::synthesis(),
            &SearchLimits::default(),
            None,
        )
        .unwrap();
        assert!(outcome.solution.is_some());
    }

    #[test]
    fn node_limit_reports_termination() {
        let (ext, instances) = toy();
        let limits = SearchLimits {
            max_open_nodes: None,
            max_evaluated: Some(2),
        };
        let outcome = bfgp(
            &ext,
            &instances,
            4,
            &[EvalFn::F2],
            &ExecutionConfig::synthesis(),
            &limits,
            None,
        )
        .unwrap();
        assert!(outcome.solution.is_none());
        assert_eq!(outcome.stats.termination, Termination::NodeLimit);
    }
}
