//! Evaluation functions over (partial) programs and instance sets.
//!
//! Structural functions read only the program text: `f1` goto count, `f2`
//! undefined-line count, `f3` repeated instructions, `f7` maximum goto
//! nesting. Performance functions execute the program on every instance:
//! `f4` distance from the deepest reachable undefined line, `f5` summed
//! squared goal deviation, `f6` accumulated plan length, and the
//! combinations `f8 = f5 + f6` and `f9 = W·f5 + f6` (W = 5). Smaller is
//! always better.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::interpreter::{run, ExecutionConfig, ExecutionOutcome};
use crate::model::{GroundGoal, GroundInstance, State};
use crate::program::{Line, PlanningProgram};

/// Weight applied to the goal-deviation term in `f9`.
pub const GOAL_DEVIATION_WEIGHT: i64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvalFn {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
}

pub const ALL_EVAL_FNS: [EvalFn; 9] = [
    EvalFn::F1,
    EvalFn::F2,
    EvalFn::F3,
    EvalFn::F4,
    EvalFn::F5,
    EvalFn::F6,
    EvalFn::F7,
    EvalFn::F8,
    EvalFn::F9,
];

impl EvalFn {
    pub fn parse(text: &str) -> Option<EvalFn> {
        ALL_EVAL_FNS.iter().copied().find(|f| f.name() == text)
    }

    pub fn name(self) -> &'static str {
        match self {
            EvalFn::F1 => "f1",
            EvalFn::F2 => "f2",
            EvalFn::F3 => "f3",
            EvalFn::F4 => "f4",
            EvalFn::F5 => "f5",
            EvalFn::F6 => "f6",
            EvalFn::F7 => "f7",
            EvalFn::F8 => "f8",
            EvalFn::F9 => "f9",
        }
    }

    /// True for the functions that require program execution.
    pub fn is_performance(self) -> bool {
        matches!(
            self,
            EvalFn::F4 | EvalFn::F5 | EvalFn::F6 | EvalFn::F8 | EvalFn::F9
        )
    }

    /// True for the functions built on the goal-deviation estimate, which
    /// needs partial-state goals.
    pub fn needs_goal_deviation(self) -> bool {
        matches!(self, EvalFn::F5 | EvalFn::F8 | EvalFn::F9)
    }
}

impl fmt::Display for EvalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// `f5`/`f8`/`f9` were requested but some instance goal is a
    /// constraint expression rather than a partial state.
    GoalNotPartialState { instance: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::GoalNotPartialState { instance } => write!(
                f,
                "goal deviation needs partial-state goals, but instance {instance} has a constraint goal"
            ),
        }
    }
}

/// Values of `f1`, `f2`, `f3`, `f7`, computed in one pass over the lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralEval {
    pub goto_count: i64,
    pub undefined_count: i64,
    pub repeated_instructions: i64,
    pub max_goto_nesting: i64,
}

pub fn eval_structural(program: &PlanningProgram) -> StructuralEval {
    let lines = program.lines();
    let mut goto_count = 0;
    let mut undefined_count = 0;
    let mut repeated = 0;
    let mut seen: alloc::collections::BTreeSet<u16> = alloc::collections::BTreeSet::new();
    let mut gotos: Vec<(usize, usize)> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        match line {
            Line::Goto { target, .. } => {
                goto_count += 1;
                let t = *target as usize;
                gotos.push((i.min(t), i.max(t)));
            }
            Line::Undefined => undefined_count += 1,
            Line::Action(instr) => {
                if !seen.insert(*instr) {
                    repeated += 1;
                }
            }
            Line::End => {}
        }
    }
    // A goto is nested in another when its own line falls strictly inside
    // the other's origin/destination span; the depth of a goto counts
    // itself plus its enclosing gotos.
    let mut max_nesting = 0i64;
    for (i, line) in lines.iter().enumerate() {
        if !matches!(line, Line::Goto { .. }) {
            continue;
        }
        let mut depth = 1i64;
        for &(lo, hi) in &gotos {
            if lo < i && i < hi {
                depth += 1;
            }
        }
        max_nesting = max_nesting.max(depth);
    }
    StructuralEval {
        goto_count,
        undefined_count,
        repeated_instructions: repeated,
        max_goto_nesting: max_nesting,
    }
}

#[inline]
fn square(x: i64) -> i64 {
    x.saturating_mul(x)
}

/// Summed squared deviation of `state` from a partial-state goal. For
/// Boolean variables the square reduces to a plain unsatisfied-goal count.
pub fn goal_deviation(state: &State, goal: &GroundGoal) -> Option<i64> {
    match goal {
        GroundGoal::Partial(atoms) => {
            let mut total = 0i64;
            for (target, want) in atoms {
                total = total.saturating_add(square(target.value(state).saturating_sub(*want)));
            }
            Some(total)
        }
        GroundGoal::Constraint(_) => None,
    }
}

/// Per-instance pieces of the performance evaluation.
#[derive(Clone, Debug)]
pub struct InstanceEval {
    /// Undefined line reached, or `n - 1` when execution terminated.
    pub deepest_line: i64,
    /// `None` for failed executions (dead nodes are not ranked).
    pub goal_deviation: Option<i64>,
    pub plan_len: i64,
    pub outcome: ExecutionOutcome,
}

#[derive(Clone, Debug)]
pub struct PerformanceEval {
    /// `(n - 1) - max_t deepest_line(t)`.
    pub f4: i64,
    /// `None` when deviation was not requested or not computable.
    pub f5: Option<i64>,
    pub f6: i64,
    pub f8: Option<i64>,
    pub f9: Option<i64>,
    pub per_instance: Vec<InstanceEval>,
}

/// Executes `program` on every instance and aggregates the performance
/// functions: maximum for the deepest-line estimate, sums for deviation
/// and cost. Failed instances contribute nothing to the sums; callers
/// that prune dead ends never observe them here anyway.
pub fn eval_performance(
    program: &PlanningProgram,
    instances: &[GroundInstance],
    config: &ExecutionConfig,
    need_goal_deviation: bool,
) -> Result<PerformanceEval, EvalError> {
    if need_goal_deviation {
        for (i, inst) in instances.iter().enumerate() {
            if matches!(inst.goal, GroundGoal::Constraint(_)) {
                return Err(EvalError::GoalNotPartialState { instance: i });
            }
        }
    }
    let n = program.n() as i64;
    let mut per_instance = Vec::with_capacity(instances.len());
    let mut deepest = 0i64;
    let mut dev_sum = 0i64;
    let mut dev_known = need_goal_deviation;
    let mut cost = 0i64;
    for inst in instances {
        let outcome = run(program, inst, config);
        let eval = match &outcome {
            ExecutionOutcome::Solved { plan_len, .. } => InstanceEval {
                deepest_line: n - 1,
                goal_deviation: Some(0),
                plan_len: *plan_len as i64,
                outcome,
            },
            ExecutionOutcome::ReachedUndefined {
                line,
                state,
                plan_len,
                ..
            } => InstanceEval {
                deepest_line: *line as i64,
                goal_deviation: goal_deviation(state, &inst.goal),
                plan_len: *plan_len as i64,
                outcome: outcome.clone(),
            },
            ExecutionOutcome::Failed { .. } => InstanceEval {
                deepest_line: n - 1,
                goal_deviation: None,
                plan_len: 0,
                outcome,
            },
        };
        deepest = deepest.max(eval.deepest_line);
        match eval.goal_deviation {
            Some(d) => dev_sum = dev_sum.saturating_add(d),
            None => {
                if !eval.outcome.is_failed() {
                    dev_known = false;
                }
            }
        }
        cost = cost.saturating_add(eval.plan_len);
        per_instance.push(eval);
    }
    let f5 = if dev_known { Some(dev_sum) } else { None };
    Ok(PerformanceEval {
        f4: (n - 1) - deepest,
        f5,
        f6: cost,
        f8: f5.map(|d| d.saturating_add(cost)),
        f9: f5.map(|d| d.saturating_mul(GOAL_DEVIATION_WEIGHT).saturating_add(cost)),
        per_instance,
    })
}

/// All nine function values for one (program, problem) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvaluationVector {
    pub f1: i64,
    pub f2: i64,
    pub f3: i64,
    pub f4: i64,
    pub f5: Option<i64>,
    pub f6: i64,
    pub f7: i64,
    pub f8: Option<i64>,
    pub f9: Option<i64>,
}

impl EvaluationVector {
    pub fn get(&self, f: EvalFn) -> Option<i64> {
        match f {
            EvalFn::F1 => Some(self.f1),
            EvalFn::F2 => Some(self.f2),
            EvalFn::F3 => Some(self.f3),
            EvalFn::F4 => Some(self.f4),
            EvalFn::F5 => self.f5,
            EvalFn::F6 => Some(self.f6),
            EvalFn::F7 => Some(self.f7),
            EvalFn::F8 => self.f8,
            EvalFn::F9 => self.f9,
        }
    }
}

/// Computes the full evaluation vector; the deviation-based functions are
/// `None` exactly when some goal is not a partial state.
pub fn evaluate(
    program: &PlanningProgram,
    instances: &[GroundInstance],
    config: &ExecutionConfig,
) -> EvaluationVector {
    let s = eval_structural(program);
    let all_partial = instances
        .iter()
        .all(|i| matches!(i.goal, GroundGoal::Partial(_)));
    let p = eval_performance(program, instances, config, all_partial)
        .expect("deviation only requested when goals are partial");
    EvaluationVector {
        f1: s.goto_count,
        f2: s.undefined_count,
        f3: s.repeated_instructions,
        f4: p.f4,
        f5: p.f5,
        f6: p.f6,
        f7: s.max_goto_nesting,
        f8: p.f8,
        f9: p.f9,
    }
}

/// Lexicographic comparison over the listed functions, smaller first.
/// Ties after the whole key are broken by the caller (FIFO in the search).
pub fn compare(a: &EvaluationVector, b: &EvaluationVector, key: &[EvalFn]) -> Ordering {
    for f in key {
        let av = a.get(*f).unwrap_or(i64::MAX);
        let bv = b.get(*f).unwrap_or(i64::MAX);
        match av.cmp(&bv) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_extended_domain, make_initial_state, ActionSchema, Domain, Effect, FunctionKind,
        FunctionSymbol, Goal, GoalTarget, GroundTerm, Instance, ObjectType, Operand, PointerDecl,
    };
    use crate::model::Expr;
    use crate::program::parse_program;
    use alloc::string::ToString;
    use alloc::vec;

    fn sorting_ext() -> crate::model::ExtendedDomain {
        let domain = Domain {
            name: "sorting".to_string(),
            types: vec![ObjectType {
                name: "cell".to_string(),
            }],
            functions: vec![FunctionSymbol {
                name: "vector".to_string(),
                param_types: vec![0],
                kind: FunctionKind::Numeric,
            }],
            schemas: vec![ActionSchema {
                name: "swap".to_string(),
                params: vec![("z1".to_string(), 0), ("z2".to_string(), 0)],
                pre: Vec::new(),
                eff: vec![
                    Effect {
                        target: (0, vec![0]),
                        value: Expr::Operand(Operand::Term(0, vec![1])),
                    },
                    Effect {
                        target: (0, vec![1]),
                        value: Expr::Operand(Operand::Term(0, vec![0])),
                    },
                ],
            }],
        };
        build_extended_domain(
            &domain,
            &[PointerDecl::new("i", 0), PointerDecl::new("j", 0)],
        )
        .unwrap()
    }

    fn sorting_instance(ext: &crate::model::ExtendedDomain, values: &[i64]) -> GroundInstance {
        let mut sorted: Vec<i64> = values.to_vec();
        sorted.sort_unstable();
        let term = |i: usize| GroundTerm {
            function: 0,
            args: vec![i as u32],
        };
        let instance = Instance {
            name: "s".to_string(),
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
    fn structural_values_on_partial_scan_program() {
        let ext = sorting_ext();
        let text = "0. swap(i,j)\n1. inc(i)\n2. dec(j)\n3. goto(2, !(Yz&!Yc))\n4. --\n5. end\n";
        let program = parse_program(text, &ext).unwrap();
        let s = eval_structural(&program);
        assert_eq!(
            (s.goto_count, s.undefined_count, s.repeated_instructions, s.max_goto_nesting),
            (1, 1, 0, 1)
        );
    }

    #[test]
    fn empty_program_structural_values() {
        let s = eval_structural(&PlanningProgram::empty(6));
        assert_eq!(
            (s.goto_count, s.undefined_count, s.repeated_instructions, s.max_goto_nesting),
            (0, 5, 0, 0)
        );
    }

    #[test]
    fn repeated_instruction_counts_once_per_duplicate() {
        let ext = sorting_ext();
        let text = "0. inc(i)\n1. dec(j)\n2. inc(i)\n3. end\n";
        let program = parse_program(text, &ext).unwrap();
        assert_eq!(eval_structural(&program).repeated_instructions, 1);
    }

    #[test]
    fn nested_goto_depth() {
        let ext = sorting_ext();
        let text = "0. inc(i)\n1. goto(0, !(Yz&!Yc))\n2. inc(j)\n3. goto(0, !(Yz&!Yc))\n4. end\n";
        let program = parse_program(text, &ext).unwrap();
        // The goto on line 1 sits inside the [0,3] span of the goto on
        // line 3.
        assert_eq!(eval_structural(&program).max_goto_nesting, 2);
    }

    #[test]
    fn deepest_line_distance_on_partial_program() {
        let ext = sorting_ext();
        let text = "0. swap(i,j)\n1. inc(i)\n2. dec(j)\n3. goto(2, !(Yz&!Yc))\n4. --\n5. end\n";
        let program = parse_program(text, &ext).unwrap();
        let instances = vec![
            sorting_instance(&ext, &[6, 3, 4, 2, 5, 1]),
            sorting_instance(&ext, &[3, 2, 1, 6, 5, 4]),
        ];
        let p = eval_performance(&program, &instances, &ExecutionConfig::synthesis(), true)
            .unwrap();
        assert_eq!(p.f4, 1);
        let f5 = p.f5.unwrap();
        assert_eq!(p.f8.unwrap(), f5 + p.f6);
        assert_eq!(p.f9.unwrap(), 5 * f5 + p.f6);
    }

    #[test]
    fn solved_program_has_zero_deviation() {
        let ext = sorting_ext();
        let program = parse_program("0. end\n", &ext).unwrap();
        let instances = vec![sorting_instance(&ext, &[1, 2, 3])];
        let p = eval_performance(&program, &instances, &ExecutionConfig::synthesis(), true)
            .unwrap();
        assert_eq!(p.f5, Some(0));
        assert!(p.per_instance[0].outcome.is_solved());
    }

    #[test]
    fn unsatisfied_boolean_goals_count() {
        // Three Boolean goal atoms, one already satisfied: deviation 2.
        let domain = Domain {
            name: "b".to_string(),
            types: vec![ObjectType {
                name: "t".to_string(),
            }],
            functions: vec![FunctionSymbol {
                name: "p".to_string(),
                param_types: vec![0],
                kind: FunctionKind::Boolean,
            }],
            schemas: Vec::new(),
        };
        let ext = build_extended_domain(&domain, &[PointerDecl::new("z", 0)]).unwrap();
        let term = |i: usize| GroundTerm {
            function: 0,
            args: vec![i as u32],
        };
        let instance = Instance {
            name: "b0".to_string(),
            object_counts: vec![3],
            init: vec![(term(1), 1)],
            goal: Goal::Partial(vec![
                (GoalTarget::Term(term(0)), 1),
                (GoalTarget::Term(term(1)), 1),
                (GoalTarget::Term(term(2)), 1),
            ]),
        };
        let ground = make_initial_state(&ext, &instance).unwrap();
        assert_eq!(goal_deviation(&ground.init, &ground.goal), Some(2));
    }

    #[test]
    fn compare_is_lexicographic() {
        let mk = |f5: i64, f7: i64| EvaluationVector {
            f1: 0,
            f2: 0,
            f3: 0,
            f4: 0,
            f5: Some(f5),
            f6: 0,
            f7,
            f8: None,
            f9: None,
        };
        let a = mk(3, 1);
        let b = mk(3, 2);
        assert_eq!(compare(&a, &b, &[EvalFn::F5, EvalFn::F7]), Ordering::Less);
        assert_eq!(compare(&a, &b, &[EvalFn::F5]), Ordering::Equal);
    }
}
