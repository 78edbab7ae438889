//! Planning domains, instances, states, and the pointer/flag extension.
//!
//! A [`Domain`] declares object types, typed function symbols (whose
//! interpretations are the state variables) and action schemas whose
//! parameters are typed pointer slots. Extending a domain with a concrete
//! pointer declaration yields an [`ExtendedDomain`]: the shared, fully
//! enumerated instruction set that every instance of the domain executes,
//! independent of object counts.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Kind of values a function symbol ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    /// Values in {0, 1}.
    Boolean,
    /// Non-negative integers; execution-time bounds are enforced by the
    /// interpreter, not the type.
    Numeric,
}

/// A named object type. Objects themselves are anonymous indices
/// `0..count` per type; instances only store counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectType {
    pub name: String,
}

/// A typed function symbol; its interpretations over the object indices of
/// an instance are the state variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub name: String,
    pub param_types: Vec<usize>,
    pub kind: FunctionKind,
}

impl FunctionSymbol {
    pub fn arity(&self) -> usize {
        self.param_types.len()
    }
}

/// Comparison operators usable in schema preconditions and goal
/// expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn eval(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Operand of a schema precondition or effect expression. `Param` indices
/// refer to the schema's parameter slots; they are bound to concrete
/// pointers when the instruction set is enumerated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Const(i64),
    /// The value of the pointer bound to parameter slot `k`.
    Param(usize),
    /// A state variable addressed through parameter slots.
    Term(usize, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub lhs: Operand,
    pub op: CmpOp,
    pub rhs: Operand,
}

/// Right-hand side of an effect; evaluated against the pre-state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Operand(Operand),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

/// One simultaneous assignment `φ(slots...) := value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Effect {
    pub target: (usize, Vec<usize>),
    pub value: Expr,
}

/// An action schema over typed pointer slots. All effects read the
/// pre-state and are applied together; when two ground targets alias, the
/// later assignment wins (matching delete-then-add order for translated
/// STRIPS operators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    /// Parameter slots: (display name, object type index).
    pub params: Vec<(String, usize)>,
    pub pre: Vec<Atom>,
    pub eff: Vec<Effect>,
}

#[derive(Clone, Debug, Default)]
pub struct Domain {
    pub name: String,
    pub types: Vec<ObjectType>,
    pub functions: Vec<FunctionSymbol>,
    pub schemas: Vec<ActionSchema>,
}

impl Domain {
    pub fn type_index(&self, name: &str) -> Option<usize> {
        self.types.iter().position(|t| t.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }
}

/// A named, typed object-index register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointerDecl {
    pub name: String,
    pub type_index: usize,
}

impl PointerDecl {
    pub fn new(name: &str, type_index: usize) -> Self {
        PointerDecl {
            name: name.to_owned(),
            type_index,
        }
    }
}

/// Register-machine operations over pointers and pointer-addressed state
/// variables. These are the only instructions that write the flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RamOp {
    Inc(usize),
    Dec(usize),
    CmpPtr(usize, usize),
    /// `Set(dst, src)`: assigns `src`'s value into `dst`.
    Set(usize, usize),
    Test(usize, Vec<usize>),
    CmpFn(usize, Vec<usize>, Vec<usize>),
}

/// One ground instruction of the shared instruction set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instruction {
    Ram(RamOp),
    /// Schema index plus the pointer bound to each parameter slot.
    Schema(usize, Vec<usize>),
}

/// Errors raised while extending a domain with a pointer declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    /// A schema (or function) needs more same-type pointers than declared.
    UnsatisfiableArity { schema: String, type_name: String },
    UnknownType { name: String },
    DuplicatePointer { name: String },
    BadSchema { schema: String, detail: String },
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::UnsatisfiableArity { schema, type_name } => write!(
                f,
                "schema `{schema}` cannot be instantiated: not enough pointers of type `{type_name}`"
            ),
            BuildError::UnknownType { name } => write!(f, "unknown object type `{name}`"),
            BuildError::DuplicatePointer { name } => {
                write!(f, "pointer `{name}` declared twice")
            }
            BuildError::BadSchema { schema, detail } => {
                write!(f, "schema `{schema}` is malformed: {detail}")
            }
        }
    }
}

/// A domain together with a pointer declaration and the canonical
/// enumeration of every instruction the pointers admit.
///
/// The enumeration order is fixed so that search tie-breaking and program
/// round-trips are reproducible: `inc` per pointer in declaration order,
/// then `dec`, then pointer comparisons for same-type pairs `(i, j)` with
/// `i < j`, then `set` for same-type ordered pairs, then `test` per
/// function over all type-consistent pointer tuples, then value
/// comparisons for numeric functions over lexicographically ordered tuple
/// pairs, then schema instantiations in schema declaration order over
/// type-consistent tuples of pairwise-distinct pointers.
#[derive(Clone, Debug)]
pub struct ExtendedDomain {
    pub domain: Domain,
    pub pointers: Vec<PointerDecl>,
    pub instructions: Vec<Instruction>,
    names: Vec<String>,
    by_name: BTreeMap<String, usize>,
}

impl ExtendedDomain {
    pub fn instruction_count(&self) -> usize {
        self.instructions.len()
    }

    pub fn instruction_name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn instruction_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn pointer_index(&self, name: &str) -> Option<usize> {
        self.pointers.iter().position(|p| p.name == name)
    }

    /// True when the instruction writes the flags (register-machine ops do,
    /// planning schemas do not).
    pub fn is_ram(&self, index: usize) -> bool {
        matches!(self.instructions[index], Instruction::Ram(_))
    }
}

fn term_name(ext_fns: &[FunctionSymbol], pointers: &[PointerDecl], f: usize, ptrs: &[usize]) -> String {
    let mut s = String::new();
    s.push_str(&ext_fns[f].name);
    s.push('(');
    for (k, p) in ptrs.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&pointers[*p].name);
    }
    s.push(')');
    s
}

/// Enumerates all type-consistent pointer tuples for `param_types`, in
/// lexicographic order over pointer indices. `distinct` additionally
/// excludes tuples that reuse a pointer.
fn pointer_tuples(
    pointers: &[PointerDecl],
    param_types: &[usize],
    distinct: bool,
) -> Vec<Vec<usize>> {
    let mut result = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(param_types.len());
    fn rec(
        pointers: &[PointerDecl],
        param_types: &[usize],
        distinct: bool,
        current: &mut Vec<usize>,
        result: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == param_types.len() {
            result.push(current.clone());
            return;
        }
        let want = param_types[current.len()];
        for (idx, ptr) in pointers.iter().enumerate() {
            if ptr.type_index != want {
                continue;
            }
            if distinct && current.contains(&idx) {
                continue;
            }
            current.push(idx);
            rec(pointers, param_types, distinct, current, result);
            current.pop();
        }
    }
    rec(pointers, param_types, distinct, &mut current, &mut result);
    result
}

/// Builds the shared instruction set for `domain` under `pointers`.
///
/// The result never depends on instance object counts, only on the
/// declaration, so one extended domain serves every instance of a
/// generalized-planning problem.
pub fn build_extended_domain(
    domain: &Domain,
    pointers: &[PointerDecl],
) -> Result<ExtendedDomain, BuildError> {
    for p in pointers {
        if p.type_index >= domain.types.len() {
            return Err(BuildError::UnknownType {
                name: p.name.clone(),
            });
        }
    }
    for (i, p) in pointers.iter().enumerate() {
        if pointers[..i].iter().any(|q| q.name == p.name) {
            return Err(BuildError::DuplicatePointer {
                name: p.name.clone(),
            });
        }
    }
    for schema in &domain.schemas {
        validate_schema(schema, domain)?;
    }

    let mut instructions = Vec::new();

    for (i, _) in pointers.iter().enumerate() {
        instructions.push(Instruction::Ram(RamOp::Inc(i)));
    }
    for (i, _) in pointers.iter().enumerate() {
        instructions.push(Instruction::Ram(RamOp::Dec(i)));
    }
    for i in 0..pointers.len() {
        for j in (i + 1)..pointers.len() {
            if pointers[i].type_index == pointers[j].type_index {
                instructions.push(Instruction::Ram(RamOp::CmpPtr(i, j)));
            }
        }
    }
    for i in 0..pointers.len() {
        for j in 0..pointers.len() {
            if i != j && pointers[i].type_index == pointers[j].type_index {
                instructions.push(Instruction::Ram(RamOp::Set(i, j)));
            }
        }
    }
    for (f, func) in domain.functions.iter().enumerate() {
        for tuple in pointer_tuples(pointers, &func.param_types, false) {
            instructions.push(Instruction::Ram(RamOp::Test(f, tuple)));
        }
    }
    for (f, func) in domain.functions.iter().enumerate() {
        if func.kind != FunctionKind::Numeric {
            continue;
        }
        let tuples = pointer_tuples(pointers, &func.param_types, false);
        for a in 0..tuples.len() {
            for b in (a + 1)..tuples.len() {
                instructions.push(Instruction::Ram(RamOp::CmpFn(
                    f,
                    tuples[a].clone(),
                    tuples[b].clone(),
                )));
            }
        }
    }
    for (s, schema) in domain.schemas.iter().enumerate() {
        let param_types: Vec<usize> = schema.params.iter().map(|(_, t)| *t).collect();
        let tuples = pointer_tuples(pointers, &param_types, true);
        if tuples.is_empty() && !schema.params.is_empty() {
            let missing = schema.params[0].1;
            return Err(BuildError::UnsatisfiableArity {
                schema: schema.name.clone(),
                type_name: domain.types[missing].name.clone(),
            });
        }
        if schema.params.is_empty() {
            instructions.push(Instruction::Schema(s, Vec::new()));
        } else {
            for tuple in tuples {
                instructions.push(Instruction::Schema(s, tuple));
            }
        }
    }

    let mut names = Vec::with_capacity(instructions.len());
    for instr in &instructions {
        names.push(match instr {
            Instruction::Ram(RamOp::Inc(p)) => format!("inc({})", pointers[*p].name),
            Instruction::Ram(RamOp::Dec(p)) => format!("dec({})", pointers[*p].name),
            Instruction::Ram(RamOp::CmpPtr(a, b)) => {
                format!("cmp({},{})", pointers[*a].name, pointers[*b].name)
            }
            Instruction::Ram(RamOp::Set(a, b)) => {
                format!("set({},{})", pointers[*a].name, pointers[*b].name)
            }
            Instruction::Ram(RamOp::Test(f, t)) => {
                format!("test({})", term_name(&domain.functions, pointers, *f, t))
            }
            Instruction::Ram(RamOp::CmpFn(f, a, b)) => format!(
                "cmp({},{})",
                term_name(&domain.functions, pointers, *f, a),
                term_name(&domain.functions, pointers, *f, b)
            ),
            Instruction::Schema(s, tuple) => {
                let schema = &domain.schemas[*s];
                if tuple.is_empty() {
                    format!("{}()", schema.name)
                } else {
                    let mut out = String::new();
                    out.push_str(&schema.name);
                    out.push('(');
                    for (k, p) in tuple.iter().enumerate() {
                        if k > 0 {
                            out.push(',');
                        }
                        out.push_str(&pointers[*p].name);
                    }
                    out.push(')');
                    out
                }
            }
        });
    }
    let by_name = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();

    Ok(ExtendedDomain {
        domain: domain.clone(),
        pointers: pointers.to_vec(),
        instructions,
        names,
        by_name,
    })
}

fn validate_schema(schema: &ActionSchema, domain: &Domain) -> Result<(), BuildError> {
    let check_operand = |op: &Operand| -> Result<(), BuildError> {
        match op {
            Operand::Const(_) => Ok(()),
            Operand::Param(k) => {
                if *k >= schema.params.len() {
                    Err(BuildError::BadSchema {
                        schema: schema.name.clone(),
                        detail: "parameter slot out of range".to_owned(),
                    })
                } else {
                    Ok(())
                }
            }
            Operand::Term(f, slots) => {
                let func = domain.functions.get(*f).ok_or_else(|| BuildError::BadSchema {
                    schema: schema.name.clone(),
                    detail: "unknown function".to_owned(),
                })?;
                if slots.len() != func.arity() {
                    return Err(BuildError::BadSchema {
                        schema: schema.name.clone(),
                        detail: format!("arity mismatch for `{}`", func.name),
                    });
                }
                for (pos, slot) in slots.iter().enumerate() {
                    let param =
                        schema
                            .params
                            .get(*slot)
                            .ok_or_else(|| BuildError::BadSchema {
                                schema: schema.name.clone(),
                                detail: "parameter slot out of range".to_owned(),
                            })?;
                    if param.1 != func.param_types[pos] {
                        return Err(BuildError::BadSchema {
                            schema: schema.name.clone(),
                            detail: format!("type mismatch in `{}`", func.name),
                        });
                    }
                }
                Ok(())
            }
        }
    };
    fn walk_expr(e: &Expr, check: &dyn Fn(&Operand) -> Result<(), BuildError>) -> Result<(), BuildError> {
        match e {
            Expr::Operand(op) => check(op),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                walk_expr(a, check)?;
                walk_expr(b, check)
            }
        }
    }
    for atom in &schema.pre {
        check_operand(&atom.lhs)?;
        check_operand(&atom.rhs)?;
    }
    let mut seen_targets: Vec<&(usize, Vec<usize>)> = Vec::new();
    for eff in &schema.eff {
        check_operand(&Operand::Term(eff.target.0, eff.target.1.clone()))?;
        walk_expr(&eff.value, &check_operand)?;
        if seen_targets.contains(&&eff.target) {
            return Err(BuildError::BadSchema {
                schema: schema.name.clone(),
                detail: "duplicate effect target".to_owned(),
            });
        }
        seen_targets.push(&eff.target);
    }
    Ok(())
}

/// A ground state-variable term `φ(o₀, …)` over object indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundTerm {
    pub function: usize,
    pub args: Vec<u32>,
}

/// Target of one goal atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoalTarget {
    Term(GroundTerm),
    /// A pointer referenced by name; resolved against the pointer
    /// declaration when the goal is grounded. Needed by tasks whose result
    /// is an index (e.g. locating a minimum) rather than a variable value.
    Pointer(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoalOperand {
    Const(i64),
    Target(GoalTarget),
}

/// Boolean constraint goals, for instances whose goal is not a partial
/// state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoalExpr {
    Cmp(GoalOperand, CmpOp, GoalOperand),
    And(Box<GoalExpr>, Box<GoalExpr>),
    Or(Box<GoalExpr>, Box<GoalExpr>),
    Not(Box<GoalExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    /// Conjunction of `target = value` atoms.
    Partial(Vec<(GoalTarget, i64)>),
    Constraint(GoalExpr),
}

/// One classical planning task: typed object counts, a sparse initial
/// assignment (omitted variables are 0) and a goal.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    /// Object count per type index of the domain.
    pub object_counts: Vec<u32>,
    pub init: Vec<(GroundTerm, i64)>,
    pub goal: Goal,
}

/// Errors raised while grounding an instance against an extended domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    MissingAssignment { detail: String },
    BadTerm { detail: String },
    UnknownPointer { name: String },
    EmptyPointerDomain { pointer: String },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::MissingAssignment { detail } => {
                write!(f, "initial state is not total: {detail}")
            }
            InstanceError::BadTerm { detail } => write!(f, "bad term: {detail}"),
            InstanceError::UnknownPointer { name } => write!(f, "unknown pointer `{name}`"),
            InstanceError::EmptyPointerDomain { pointer } => {
                write!(f, "pointer `{pointer}` has no objects of its type")
            }
        }
    }
}

/// Maps ground terms to dense state-array indices.
///
/// Variables are laid out function by function in declaration order; within
/// a function, argument tuples are row-major (the last argument varies
/// fastest), so state dumps are stable across runs.
#[derive(Clone, Debug)]
pub struct VariableRegistry {
    offsets: Vec<usize>,
    strides: Vec<Vec<usize>>,
    counts: Vec<u32>,
    total: usize,
}

impl VariableRegistry {
    pub fn new(domain: &Domain, object_counts: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(domain.functions.len());
        let mut strides = Vec::with_capacity(domain.functions.len());
        let mut total = 0usize;
        for func in &domain.functions {
            offsets.push(total);
            let mut s = vec![1usize; func.arity()];
            for i in (0..func.arity()).rev() {
                if i + 1 < func.arity() {
                    s[i] = s[i + 1] * object_counts[func.param_types[i + 1]] as usize;
                }
            }
            let block: usize = func
                .param_types
                .iter()
                .map(|t| object_counts[*t] as usize)
                .product();
            strides.push(s);
            total += block;
        }
        VariableRegistry {
            offsets,
            strides,
            counts: object_counts.to_vec(),
            total,
        }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn object_counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn index(&self, term: &GroundTerm) -> usize {
        let mut idx = self.offsets[term.function];
        for (k, a) in term.args.iter().enumerate() {
            idx += self.strides[term.function][k] * (*a as usize);
        }
        idx
    }

    pub fn checked_index(&self, domain: &Domain, term: &GroundTerm) -> Result<usize, InstanceError> {
        let func = domain
            .functions
            .get(term.function)
            .ok_or_else(|| InstanceError::BadTerm {
                detail: "unknown function".to_owned(),
            })?;
        if term.args.len() != func.arity() {
            return Err(InstanceError::BadTerm {
                detail: format!("arity mismatch for `{}`", func.name),
            });
        }
        for (k, a) in term.args.iter().enumerate() {
            if *a >= self.counts[func.param_types[k]] {
                return Err(InstanceError::BadTerm {
                    detail: format!("object index {a} out of range for `{}`", func.name),
                });
            }
        }
        Ok(self.index(term))
    }

    /// Inverse of [`index`](Self::index), for stable state dumps.
    pub fn decode(&self, domain: &Domain, mut idx: usize) -> GroundTerm {
        let mut function = 0;
        for (f, off) in self.offsets.iter().enumerate() {
            let block: usize = domain.functions[f]
                .param_types
                .iter()
                .map(|t| self.counts[*t] as usize)
                .product();
            if idx < off + block {
                function = f;
                break;
            }
        }
        idx -= self.offsets[function];
        let mut args = Vec::new();
        for stride in &self.strides[function] {
            args.push((idx / stride) as u32);
            idx %= stride;
        }
        GroundTerm { function, args }
    }
}

/// A planning state: dense state-variable values, pointer values, and the
/// zero/carry flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub values: Vec<i64>,
    pub pointers: Vec<u32>,
    pub flag_zero: bool,
    pub flag_carry: bool,
}

impl State {
    /// Flattens the full state (plus a program counter) for revisit
    /// detection.
    pub fn snapshot(&self, counter: usize) -> Box<[i64]> {
        let mut out = Vec::with_capacity(self.values.len() + self.pointers.len() + 2);
        out.extend_from_slice(&self.values);
        out.extend(self.pointers.iter().map(|p| *p as i64));
        out.push(((self.flag_zero as i64) << 1) | self.flag_carry as i64);
        out.push(counter as i64);
        out.into_boxed_slice()
    }
}

/// Goal with all terms resolved to state-array or pointer indices.
#[derive(Clone, Debug)]
pub enum GroundGoal {
    Partial(Vec<(GroundRef, i64)>),
    Constraint(GroundGoalExpr),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundRef {
    Var(usize),
    Ptr(usize),
}

impl GroundRef {
    pub fn value(self, state: &State) -> i64 {
        match self {
            GroundRef::Var(i) => state.values[i],
            GroundRef::Ptr(p) => state.pointers[p] as i64,
        }
    }
}

#[derive(Clone, Debug)]
pub enum GroundGoalExpr {
    Cmp(GroundGoalOperand, CmpOp, GroundGoalOperand),
    And(Box<GroundGoalExpr>, Box<GroundGoalExpr>),
    Or(Box<GroundGoalExpr>, Box<GroundGoalExpr>),
    Not(Box<GroundGoalExpr>),
}

#[derive(Clone, Copy, Debug)]
pub enum GroundGoalOperand {
    Const(i64),
    Ref(GroundRef),
}

impl GroundGoalExpr {
    fn eval(&self, state: &State) -> bool {
        match self {
            GroundGoalExpr::Cmp(l, op, r) => {
                let lv = match l {
                    GroundGoalOperand::Const(c) => *c,
                    GroundGoalOperand::Ref(r) => r.value(state),
                };
                let rv = match r {
                    GroundGoalOperand::Const(c) => *c,
                    GroundGoalOperand::Ref(r) => r.value(state),
                };
                op.eval(lv, rv)
            }
            GroundGoalExpr::And(a, b) => a.eval(state) && b.eval(state),
            GroundGoalExpr::Or(a, b) => a.eval(state) || b.eval(state),
            GroundGoalExpr::Not(a) => !a.eval(state),
        }
    }
}

/// True when `state` satisfies `goal`: every atom of a partial-state goal
/// matches exactly, or the constraint expression evaluates true.
pub fn goal_satisfied(state: &State, goal: &GroundGoal) -> bool {
    match goal {
        GroundGoal::Partial(atoms) => atoms.iter().all(|(r, v)| r.value(state) == *v),
        GroundGoal::Constraint(expr) => expr.eval(state),
    }
}

/// A term compiled against one instance's registry: the state-array index
/// is `base + Σ pointer_value · stride`.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    pub base: usize,
    pub dims: Box<[(usize, usize)]>,
}

impl CompiledTerm {
    #[inline]
    pub fn index(&self, pointers: &[u32]) -> usize {
        let mut idx = self.base;
        for (p, stride) in self.dims.iter() {
            idx += pointers[*p] as usize * stride;
        }
        idx
    }
}

#[derive(Clone, Debug)]
pub enum CompiledOperand {
    Const(i64),
    Ptr(usize),
    Term(CompiledTerm),
}

impl CompiledOperand {
    #[inline]
    pub fn value(&self, state: &State) -> i64 {
        match self {
            CompiledOperand::Const(c) => *c,
            CompiledOperand::Ptr(p) => state.pointers[*p] as i64,
            CompiledOperand::Term(t) => state.values[t.index(&state.pointers)],
        }
    }
}

#[derive(Clone, Debug)]
pub enum CompiledExpr {
    Operand(CompiledOperand),
    Add(Box<CompiledExpr>, Box<CompiledExpr>),
    Sub(Box<CompiledExpr>, Box<CompiledExpr>),
}

impl CompiledExpr {
    pub fn value(&self, state: &State) -> i64 {
        match self {
            CompiledExpr::Operand(op) => op.value(state),
            CompiledExpr::Add(a, b) => a.value(state).saturating_add(b.value(state)),
            CompiledExpr::Sub(a, b) => a.value(state).saturating_sub(b.value(state)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledAtom {
    pub lhs: CompiledOperand,
    pub op: CmpOp,
    pub rhs: CompiledOperand,
}

#[derive(Clone, Debug)]
pub struct CompiledEffect {
    pub target: CompiledTerm,
    pub value: CompiledExpr,
}

/// An instruction specialized to one instance's variable layout.
#[derive(Clone, Debug)]
pub enum CompiledInstr {
    IncPtr(usize),
    DecPtr(usize),
    CmpPtr(usize, usize),
    SetPtr(usize, usize),
    TestVar(CompiledTerm),
    CmpVar(CompiledTerm, CompiledTerm),
    Action {
        pre: Box<[CompiledAtom]>,
        eff: Box<[CompiledEffect]>,
    },
}

/// An instance grounded against an extended domain: initial state, goal,
/// per-pointer domain sizes and the instruction set compiled to this
/// instance's variable layout. Immutable after construction; safe to share
/// across concurrent runs.
#[derive(Clone, Debug)]
pub struct GroundInstance {
    pub name: String,
    pub registry: VariableRegistry,
    pub init: State,
    pub goal: GroundGoal,
    /// Domain size per pointer (object count of the pointer's type).
    pub pointer_limits: Vec<u32>,
    pub compiled: Vec<CompiledInstr>,
}

fn compile_term(
    registry: &VariableRegistry,
    domain: &Domain,
    function: usize,
    ptrs: &[usize],
) -> CompiledTerm {
    let zero_args = GroundTerm {
        function,
        args: vec![0; domain.functions[function].arity()],
    };
    let base = registry.index(&zero_args);
    let dims: Vec<(usize, usize)> = ptrs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let unit = GroundTerm {
                function,
                args: (0..domain.functions[function].arity())
                    .map(|i| (i == k) as u32)
                    .collect(),
            };
            (*p, registry.index(&unit) - base)
        })
        .collect();
    CompiledTerm {
        base,
        dims: dims.into_boxed_slice(),
    }
}

fn compile_operand(
    registry: &VariableRegistry,
    domain: &Domain,
    binding: &[usize],
    op: &Operand,
) -> CompiledOperand {
    match op {
        Operand::Const(c) => CompiledOperand::Const(*c),
        Operand::Param(slot) => CompiledOperand::Ptr(binding[*slot]),
        Operand::Term(f, slots) => {
            let ptrs: Vec<usize> = slots.iter().map(|s| binding[*s]).collect();
            CompiledOperand::Term(compile_term(registry, domain, *f, &ptrs))
        }
    }
}

fn compile_expr(
    registry: &VariableRegistry,
    domain: &Domain,
    binding: &[usize],
    expr: &Expr,
) -> CompiledExpr {
    match expr {
        Expr::Operand(op) => CompiledExpr::Operand(compile_operand(registry, domain, binding, op)),
        Expr::Add(a, b) => CompiledExpr::Add(
            Box::new(compile_expr(registry, domain, binding, a)),
            Box::new(compile_expr(registry, domain, binding, b)),
        ),
        Expr::Sub(a, b) => CompiledExpr::Sub(
            Box::new(compile_expr(registry, domain, binding, a)),
            Box::new(compile_expr(registry, domain, binding, b)),
        ),
    }
}

/// Grounds `instance` against `ext`, producing the initial state (pointers
/// at zero, flags false), the resolved goal, and the compiled instruction
/// set. Deterministic and side-effect free.
pub fn make_initial_state(
    ext: &ExtendedDomain,
    instance: &Instance,
) -> Result<GroundInstance, InstanceError> {
    let domain = &ext.domain;
    if instance.object_counts.len() != domain.types.len() {
        return Err(InstanceError::MissingAssignment {
            detail: "object count missing for some type".to_owned(),
        });
    }
    let registry = VariableRegistry::new(domain, &instance.object_counts);
    let mut values = vec![0i64; registry.len()];
    for (term, value) in &instance.init {
        let idx = registry.checked_index(domain, term)?;
        if *value < 0 {
            return Err(InstanceError::BadTerm {
                detail: "negative initial value".to_owned(),
            });
        }
        if domain.functions[term.function].kind == FunctionKind::Boolean && *value > 1 {
            return Err(InstanceError::BadTerm {
                detail: format!("boolean `{}` assigned {value}", domain.functions[term.function].name),
            });
        }
        values[idx] = *value;
    }

    let mut pointer_limits = Vec::with_capacity(ext.pointers.len());
    for p in &ext.pointers {
        let count = instance.object_counts[p.type_index];
        if count == 0 {
            return Err(InstanceError::EmptyPointerDomain {
                pointer: p.name.clone(),
            });
        }
        pointer_limits.push(count);
    }

    let resolve_target = |t: &GoalTarget| -> Result<GroundRef, InstanceError> {
        match t {
            GoalTarget::Term(term) => Ok(GroundRef::Var(registry.checked_index(domain, term)?)),
            GoalTarget::Pointer(name) => ext
                .pointer_index(name)
                .map(GroundRef::Ptr)
                .ok_or_else(|| InstanceError::UnknownPointer { name: name.clone() }),
        }
    };
    let goal = match &instance.goal {
        Goal::Partial(atoms) => {
            let mut out = Vec::with_capacity(atoms.len());
            for (t, v) in atoms {
                out.push((resolve_target(t)?, *v));
            }
            GroundGoal::Partial(out)
        }
        Goal::Constraint(expr) => {
            fn ground(
                expr: &GoalExpr,
                resolve: &dyn Fn(&GoalTarget) -> Result<GroundRef, InstanceError>,
            ) -> Result<GroundGoalExpr, InstanceError> {
                Ok(match expr {
                    GoalExpr::Cmp(l, op, r) => {
                        let g = |o: &GoalOperand| -> Result<GroundGoalOperand, InstanceError> {
                            Ok(match o {
                                GoalOperand::Const(c) => GroundGoalOperand::Const(*c),
                                GoalOperand::Target(t) => GroundGoalOperand::Ref(resolve(t)?),
                            })
                        };
                        GroundGoalExpr::Cmp(g(l)?, *op, g(r)?)
                    }
                    GoalExpr::And(a, b) => GroundGoalExpr::And(
                        Box::new(ground(a, resolve)?),
                        Box::new(ground(b, resolve)?),
                    ),
                    GoalExpr::Or(a, b) => GroundGoalExpr::Or(
                        Box::new(ground(a, resolve)?),
                        Box::new(ground(b, resolve)?),
                    ),
                    GoalExpr::Not(a) => GroundGoalExpr::Not(Box::new(ground(a, resolve)?)),
                })
            }
            GroundGoal::Constraint(ground(expr, &resolve_target)?)
        }
    };

    let compiled = ext
        .instructions
        .iter()
        .map(|instr| match instr {
            Instruction::Ram(RamOp::Inc(p)) => CompiledInstr::IncPtr(*p),
            Instruction::Ram(RamOp::Dec(p)) => CompiledInstr::DecPtr(*p),
            Instruction::Ram(RamOp::CmpPtr(a, b)) => CompiledInstr::CmpPtr(*a, *b),
            Instruction::Ram(RamOp::Set(a, b)) => CompiledInstr::SetPtr(*a, *b),
            Instruction::Ram(RamOp::Test(f, t)) => {
                CompiledInstr::TestVar(compile_term(&registry, domain, *f, t))
            }
            Instruction::Ram(RamOp::CmpFn(f, a, b)) => CompiledInstr::CmpVar(
                compile_term(&registry, domain, *f, a),
                compile_term(&registry, domain, *f, b),
            ),
            Instruction::Schema(s, binding) => {
                let schema = &domain.schemas[*s];
                let pre: Vec<CompiledAtom> = schema
                    .pre
                    .iter()
                    .map(|atom| CompiledAtom {
                        lhs: compile_operand(&registry, domain, binding, &atom.lhs),
                        op: atom.op,
                        rhs: compile_operand(&registry, domain, binding, &atom.rhs),
                    })
                    .collect();
                let eff: Vec<CompiledEffect> = schema
                    .eff
                    .iter()
                    .map(|eff| {
                        let ptrs: Vec<usize> =
                            eff.target.1.iter().map(|s| binding[*s]).collect();
                        CompiledEffect {
                            target: compile_term(&registry, domain, eff.target.0, &ptrs),
                            value: compile_expr(&registry, domain, binding, &eff.value),
                        }
                    })
                    .collect();
                CompiledInstr::Action {
                    pre: pre.into_boxed_slice(),
                    eff: eff.into_boxed_slice(),
                }
            }
        })
        .collect();

    let init = State {
        values,
        pointers: vec![0; ext.pointers.len()],
        flag_zero: false,
        flag_carry: false,
    };

    Ok(GroundInstance {
        name: instance.name.clone(),
        registry,
        init,
        goal,
        pointer_limits,
        compiled,
    })
}
