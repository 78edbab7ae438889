//! Parser for the STRIPS fragment of PDDL (`:strips` + `:typing`) and the
//! translator into the pointer-based representation.
//!
//! The accepted fragment: typed predicates, operators with conjunctive
//! positive preconditions and add/delete effects, typed object lists,
//! ground init atoms and a conjunctive positive goal. Anything else —
//! other requirement flags, negative preconditions, equality, type
//! hierarchies below a non-`object` parent — is rejected up front.

use std::fmt;

use bfgp_core::model::{
    ActionSchema, Atom, CmpOp, Domain, Effect, Expr, FunctionKind, FunctionSymbol, Goal,
    GoalTarget, GroundTerm, Instance, ObjectType, Operand, PointerDecl,
};

#[derive(Debug)]
pub enum PddlError {
    SyntaxError { detail: String },
    UnsupportedRequirement { name: String },
    Unsupported { detail: String },
    Semantic { detail: String },
}

impl fmt::Display for PddlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PddlError::SyntaxError { detail } => write!(f, "syntax error: {detail}"),
            PddlError::UnsupportedRequirement { name } => {
                write!(f, "unsupported requirement `{name}`")
            }
            PddlError::Unsupported { detail } => write!(f, "unsupported construct: {detail}"),
            PddlError::Semantic { detail } => write!(f, "{detail}"),
        }
    }
}

impl std::error::Error for PddlError {}

fn syntax<T>(detail: impl Into<String>) -> Result<T, PddlError> {
    Err(PddlError::SyntaxError {
        detail: detail.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Sexpr {
    Sym(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    fn as_sym(&self) -> Option<&str> {
        match self {
            Sexpr::Sym(s) => Some(s),
            Sexpr::List(_) => None,
        }
    }

    fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Sym(_) => None,
        }
    }
}

fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        match line.find(';') {
            Some(pos) => out.push_str(&line[..pos]),
            None => out.push_str(line),
        }
        out.push('\n');
    }
    out
}

fn parse_sexpr(text: &str) -> Result<Sexpr, PddlError> {
    let cleaned = strip_comments(text).to_lowercase();
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in cleaned.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    let mut pos = 0;
    let expr = parse_tokens(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return syntax("trailing tokens after the top-level form");
    }
    Ok(expr)
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<Sexpr, PddlError> {
    match tokens.get(*pos) {
        None => syntax("unexpected end of input"),
        Some(t) if t == "(" => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return syntax("missing `)`"),
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexpr::List(items));
                    }
                    _ => items.push(parse_tokens(tokens, pos)?),
                }
            }
        }
        Some(t) if t == ")" => syntax("unexpected `)`"),
        Some(t) => {
            *pos += 1;
            Ok(Sexpr::Sym(t.clone()))
        }
    }
}

/// Parses `x y - t z - t2 ...`; items without a type marker get `object`.
fn parse_typed_list(items: &[Sexpr]) -> Result<Vec<(String, String)>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let sym = items[i]
            .as_sym()
            .ok_or(PddlError::SyntaxError {
                detail: "nested list in a typed list".to_string(),
            })?
            .to_string();
        if sym == "-" {
            let ty = items
                .get(i + 1)
                .and_then(|t| t.as_sym())
                .ok_or(PddlError::SyntaxError {
                    detail: "missing type after `-`".to_string(),
                })?
                .to_string();
            for name in pending.drain(..) {
                out.push((name, ty.clone()));
            }
            i += 2;
        } else {
            pending.push(sym);
            i += 1;
        }
    }
    for name in pending {
        out.push((name, "object".to_string()));
    }
    Ok(out)
}

/// A lifted atom: predicate index plus parameter-slot arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedAtom {
    pub predicate: usize,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct StripsOperator {
    pub name: String,
    /// Parameter names with their type indices.
    pub params: Vec<(String, usize)>,
    pub pre: Vec<LiftedAtom>,
    pub del: Vec<LiftedAtom>,
    pub add: Vec<LiftedAtom>,
}

#[derive(Debug, Clone)]
pub struct StripsDomain {
    pub name: String,
    pub types: Vec<String>,
    /// Predicate name and parameter type indices.
    pub predicates: Vec<(String, Vec<usize>)>,
    pub operators: Vec<StripsOperator>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAtom {
    pub predicate: usize,
    /// Object indices, already per-type.
    pub args: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct StripsProblem {
    pub name: String,
    /// Object count per type index, assigned in declaration order.
    pub object_counts: Vec<u32>,
    pub init: Vec<GroundAtom>,
    pub goal: Vec<GroundAtom>,
}

/// A parsed domain/problem pair.
#[derive(Debug, Clone)]
pub struct StripsModel {
    pub domain: StripsDomain,
    pub problem: StripsProblem,
}

impl StripsDomain {
    fn type_index(&mut self, name: &str) -> usize {
        match self.types.iter().position(|t| t == name) {
            Some(i) => i,
            None => {
                self.types.push(name.to_string());
                self.types.len() - 1
            }
        }
    }

    fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|(n, _)| n == name)
    }
}

fn section<'a>(items: &'a [Sexpr], key: &str) -> Option<&'a [Sexpr]> {
    items.iter().find_map(|item| {
        let list = item.as_list()?;
        if list.first()?.as_sym()? == key {
            Some(&list[1..])
        } else {
            None
        }
    })
}

pub fn parse_pddl_domain(text: &str) -> Result<StripsDomain, PddlError> {
    let top = parse_sexpr(text)?;
    let items = top.as_list().ok_or(PddlError::SyntaxError {
        detail: "expected (define ...)".to_string(),
    })?;
    if items.first().and_then(|s| s.as_sym()) != Some("define") {
        return syntax("expected (define (domain ...) ...)");
    }
    let name = items
        .get(1)
        .and_then(|s| s.as_list())
        .filter(|l| l.first().and_then(|s| s.as_sym()) == Some("domain"))
        .and_then(|l| l.get(1))
        .and_then(|s| s.as_sym())
        .ok_or(PddlError::SyntaxError {
            detail: "missing (domain <name>)".to_string(),
        })?
        .to_string();

    let mut domain = StripsDomain {
        name,
        types: vec!["object".to_string()],
        predicates: Vec::new(),
        operators: Vec::new(),
    };

    if let Some(reqs) = section(items, ":requirements") {
        for r in reqs {
            match r.as_sym() {
                Some(":strips") | Some(":typing") => {}
                Some(other) => {
                    return Err(PddlError::UnsupportedRequirement {
                        name: other.to_string(),
                    })
                }
                None => return syntax("bad requirement entry"),
            }
        }
    }

    if let Some(types) = section(items, ":types") {
        for (name, parent) in parse_typed_list(types)? {
            if parent != "object" {
                return Err(PddlError::Unsupported {
                    detail: format!("type hierarchy `{name} - {parent}`"),
                });
            }
            domain.type_index(&name);
        }
    }

    if let Some(preds) = section(items, ":predicates") {
        for p in preds {
            let list = p.as_list().ok_or(PddlError::SyntaxError {
                detail: "predicate must be a list".to_string(),
            })?;
            let pname = list
                .first()
                .and_then(|s| s.as_sym())
                .ok_or(PddlError::SyntaxError {
                    detail: "predicate missing a name".to_string(),
                })?
                .to_string();
            let mut param_types = Vec::new();
            for (_, ty) in parse_typed_list(&list[1..])? {
                let idx = domain
                    .types
                    .iter()
                    .position(|t| *t == ty)
                    .ok_or(PddlError::Semantic {
                        detail: format!("unknown type `{ty}` in predicate `{pname}`"),
                    })?;
                param_types.push(idx);
            }
            domain.predicates.push((pname, param_types));
        }
    }

    for item in items {
        let Some(list) = item.as_list() else { continue };
        if list.first().and_then(|s| s.as_sym()) != Some(":action") {
            continue;
        }
        domain.operators.push(parse_operator(&domain, &list[1..])?);
    }
    Ok(domain)
}

fn parse_operator(domain: &StripsDomain, items: &[Sexpr]) -> Result<StripsOperator, PddlError> {
    let name = items
        .first()
        .and_then(|s| s.as_sym())
        .ok_or(PddlError::SyntaxError {
            detail: "action missing a name".to_string(),
        })?
        .to_string();
    let mut params: Vec<(String, usize)> = Vec::new();
    let mut pre = Vec::new();
    let mut del = Vec::new();
    let mut add = Vec::new();

    let mut i = 1;
    while i < items.len() {
        let key = items[i].as_sym().ok_or(PddlError::SyntaxError {
            detail: format!("expected a keyword in action `{name}`"),
        })?;
        let value = items.get(i + 1).ok_or(PddlError::SyntaxError {
            detail: format!("missing value for `{key}` in action `{name}`"),
        })?;
        match key {
            ":parameters" => {
                let list = value.as_list().ok_or(PddlError::SyntaxError {
                    detail: "parameters must be a list".to_string(),
                })?;
                for (pname, ty) in parse_typed_list(list)? {
                    let idx = domain
                        .types
                        .iter()
                        .position(|t| *t == ty)
                        .ok_or(PddlError::Semantic {
                            detail: format!("unknown type `{ty}` in action `{name}`"),
                        })?;
                    params.push((pname, idx));
                }
            }
            ":precondition" => {
                for atom in conjunction(value)? {
                    pre.push(lifted_atom(domain, &params, atom, false)?.1);
                }
            }
            ":effect" => {
                for atom in conjunction(value)? {
                    let (negated, lifted) = lifted_atom(domain, &params, atom, true)?;
                    if negated {
                        del.push(lifted);
                    } else {
                        add.push(lifted);
                    }
                }
            }
            other => {
                return Err(PddlError::Unsupported {
                    detail: format!("action field `{other}`"),
                })
            }
        }
        i += 2;
    }
    Ok(StripsOperator {
        name,
        params,
        pre,
        del,
        add,
    })
}

/// Flattens `(and a b c)`, a single atom, or `(and)` into a list.
fn conjunction(expr: &Sexpr) -> Result<Vec<&Sexpr>, PddlError> {
    let list = expr.as_list().ok_or(PddlError::SyntaxError {
        detail: "expected a condition".to_string(),
    })?;
    if list.first().and_then(|s| s.as_sym()) == Some("and") {
        Ok(list[1..].iter().collect())
    } else if list.is_empty() {
        Ok(Vec::new())
    } else {
        Ok(vec![expr])
    }
}

/// Parses one lifted atom; `(not ...)` is only admitted when
/// `allow_negation` (effects).
fn lifted_atom(
    domain: &StripsDomain,
    params: &[(String, usize)],
    expr: &Sexpr,
    allow_negation: bool,
) -> Result<(bool, LiftedAtom), PddlError> {
    let list = expr.as_list().ok_or(PddlError::SyntaxError {
        detail: "expected an atom".to_string(),
    })?;
    let head = list
        .first()
        .and_then(|s| s.as_sym())
        .ok_or(PddlError::SyntaxError {
            detail: "atom missing a predicate".to_string(),
        })?;
    if head == "not" {
        if !allow_negation {
            return Err(PddlError::Unsupported {
                detail: "negative preconditions".to_string(),
            });
        }
        let inner = list.get(1).ok_or(PddlError::SyntaxError {
            detail: "(not ...) missing its atom".to_string(),
        })?;
        let (negated, atom) = lifted_atom(domain, params, inner, false)?;
        debug_assert!(!negated);
        return Ok((true, atom));
    }
    if head == "=" {
        return Err(PddlError::Unsupported {
            detail: "equality atoms".to_string(),
        });
    }
    let predicate = domain.predicate_index(head).ok_or(PddlError::Semantic {
        detail: format!("unknown predicate `{head}`"),
    })?;
    let mut args = Vec::new();
    for arg in &list[1..] {
        let sym = arg.as_sym().ok_or(PddlError::SyntaxError {
            detail: "atom arguments must be symbols".to_string(),
        })?;
        let var = sym.strip_prefix('?').ok_or(PddlError::Unsupported {
            detail: format!("ground argument `{sym}` in an operator"),
        })?;
        let slot = params
            .iter()
            .position(|(n, _)| n == &format!("?{var}") || n == var)
            .ok_or(PddlError::Semantic {
                detail: format!("unknown variable `?{var}`"),
            })?;
        args.push(slot);
    }
    if args.len() != domain.predicates[predicate].1.len() {
        return Err(PddlError::Semantic {
            detail: format!("arity mismatch for `{head}`"),
        });
    }
    Ok((false, LiftedAtom { predicate, args }))
}

pub fn parse_pddl_problem(
    text: &str,
    domain: &StripsDomain,
) -> Result<StripsProblem, PddlError> {
    let top = parse_sexpr(text)?;
    let items = top.as_list().ok_or(PddlError::SyntaxError {
        detail: "expected (define ...)".to_string(),
    })?;
    if items.first().and_then(|s| s.as_sym()) != Some("define") {
        return syntax("expected (define (problem ...) ...)");
    }
    let name = items
        .get(1)
        .and_then(|s| s.as_list())
        .filter(|l| l.first().and_then(|s| s.as_sym()) == Some("problem"))
        .and_then(|l| l.get(1))
        .and_then(|s| s.as_sym())
        .ok_or(PddlError::SyntaxError {
            detail: "missing (problem <name>)".to_string(),
        })?
        .to_string();

    // Objects get indices per type, in declaration order, so translated
    // instances are reproducible.
    let mut object_counts = vec![0u32; domain.types.len()];
    let mut object_index: Vec<(String, usize, u32)> = Vec::new();
    if let Some(objs) = section(items, ":objects") {
        for (oname, ty) in parse_typed_list(objs)? {
            let t = domain
                .types
                .iter()
                .position(|x| *x == ty)
                .ok_or(PddlError::Semantic {
                    detail: format!("unknown type `{ty}` for object `{oname}`"),
                })?;
            object_index.push((oname, t, object_counts[t]));
            object_counts[t] += 1;
        }
    }

    let ground = |expr: &Sexpr| -> Result<GroundAtom, PddlError> {
        let list = expr.as_list().ok_or(PddlError::SyntaxError {
            detail: "expected a ground atom".to_string(),
        })?;
        let head = list
            .first()
            .and_then(|s| s.as_sym())
            .ok_or(PddlError::SyntaxError {
                detail: "atom missing a predicate".to_string(),
            })?;
        let predicate = domain.predicate_index(head).ok_or(PddlError::Semantic {
            detail: format!("unknown predicate `{head}`"),
        })?;
        let mut args = Vec::new();
        for (pos, arg) in list[1..].iter().enumerate() {
            let sym = arg.as_sym().ok_or(PddlError::SyntaxError {
                detail: "atom arguments must be symbols".to_string(),
            })?;
            let (_, ty, idx) = object_index
                .iter()
                .find(|(n, _, _)| n == sym)
                .ok_or(PddlError::Semantic {
                    detail: format!("unknown object `{sym}`"),
                })?;
            let want = domain.predicates[predicate].1.get(pos).copied();
            if want != Some(*ty) {
                return Err(PddlError::Semantic {
                    detail: format!("object `{sym}` has the wrong type for `{head}`"),
                });
            }
            args.push(*idx);
        }
        if args.len() != domain.predicates[predicate].1.len() {
            return Err(PddlError::Semantic {
                detail: format!("arity mismatch for `{head}`"),
            });
        }
        Ok(GroundAtom { predicate, args })
    };

    let mut init = Vec::new();
    if let Some(atoms) = section(items, ":init") {
        for a in atoms {
            init.push(ground(a)?);
        }
    }
    let mut goal = Vec::new();
    if let Some(goal_items) = section(items, ":goal") {
        let expr = goal_items.first().ok_or(PddlError::SyntaxError {
            detail: "empty :goal".to_string(),
        })?;
        for a in conjunction(expr)? {
            let list = a.as_list().ok_or(PddlError::SyntaxError {
                detail: "expected a goal atom".to_string(),
            })?;
            if list.first().and_then(|s| s.as_sym()) == Some("not") {
                return Err(PddlError::Unsupported {
                    detail: "negative goals".to_string(),
                });
            }
            goal.push(ground(a)?);
        }
    }
    Ok(StripsProblem {
        name,
        object_counts,
        init,
        goal,
    })
}

/// Parses a domain/problem pair into one model.
pub fn parse_pddl(domain_text: &str, problem_text: &str) -> Result<StripsModel, PddlError> {
    let domain = parse_pddl_domain(domain_text)?;
    let problem = parse_pddl_problem(problem_text, &domain)?;
    Ok(StripsModel { domain, problem })
}

/// Translates a STRIPS domain into the pointer-based representation: each
/// predicate becomes a Boolean function, each operator an action schema
/// with one typed pointer slot per argument, preconditions become
/// `variable = 1` atoms, and delete/add effects become assignments to
/// 0/1 (deletes first, so an add to the same variable wins, as in PDDL).
pub fn translate_domain(strips: &StripsDomain) -> Domain {
    let functions = strips
        .predicates
        .iter()
        .map(|(name, param_types)| FunctionSymbol {
            name: name.clone(),
            param_types: param_types.clone(),
            kind: FunctionKind::Boolean,
        })
        .collect();
    let schemas = strips
        .operators
        .iter()
        .map(|op| {
            let pre = op
                .pre
                .iter()
                .map(|a| Atom {
                    lhs: Operand::Term(a.predicate, a.args.clone()),
                    op: CmpOp::Eq,
                    rhs: Operand::Const(1),
                })
                .collect();
            let mut eff: Vec<Effect> = Vec::new();
            for a in &op.del {
                if op.add.contains(a) {
                    continue;
                }
                eff.push(Effect {
                    target: (a.predicate, a.args.clone()),
                    value: Expr::Operand(Operand::Const(0)),
                });
            }
            for a in &op.add {
                eff.push(Effect {
                    target: (a.predicate, a.args.clone()),
                    value: Expr::Operand(Operand::Const(1)),
                });
            }
            ActionSchema {
                name: op.name.clone(),
                params: op
                    .params
                    .iter()
                    .map(|(n, t)| (n.trim_start_matches('?').to_string(), *t))
                    .collect(),
                pre,
                eff,
            }
        })
        .collect();
    Domain {
        name: strips.name.clone(),
        types: strips
            .types
            .iter()
            .map(|t| ObjectType { name: t.clone() })
            .collect(),
        functions,
        schemas,
    }
}

/// Smallest pointer declaration that can instantiate every operator: per
/// type, as many pointers as the largest same-type parameter group.
/// Names take the type's first letter (the full type name on clashes).
pub fn suggest_pointers(strips: &StripsDomain) -> Vec<PointerDecl> {
    let mut need = vec![0usize; strips.types.len()];
    for op in &strips.operators {
        let mut per_type = vec![0usize; strips.types.len()];
        for (_, t) in &op.params {
            per_type[*t] += 1;
        }
        for (t, n) in per_type.iter().enumerate() {
            need[t] = need[t].max(*n);
        }
    }
    for (_, param_types) in &strips.predicates {
        for t in param_types {
            need[*t] = need[*t].max(1);
        }
    }
    let mut decls = Vec::new();
    for (t, count) in need.iter().enumerate() {
        let initial = strips.types[t].chars().next().unwrap_or('z');
        let clash = strips
            .types
            .iter()
            .enumerate()
            .any(|(other, name)| other != t && name.starts_with(initial));
        for k in 0..*count {
            let name = if clash {
                format!("{}{}", strips.types[t], k + 1)
            } else {
                format!("{initial}{}", k + 1)
            };
            decls.push(PointerDecl::new(&name, t));
        }
    }
    decls
}

/// Translates a parsed problem: init atoms become 1-valued variables
/// (everything omitted is 0) and the goal the corresponding partial
/// state.
pub fn translate_problem(strips: &StripsDomain, problem: &StripsProblem) -> Instance {
    let _ = strips;
    Instance {
        name: problem.name.clone(),
        object_counts: problem.object_counts.clone(),
        init: problem
            .init
            .iter()
            .map(|a| {
                (
                    GroundTerm {
                        function: a.predicate,
                        args: a.args.clone(),
                    },
                    1,
                )
            })
            .collect(),
        goal: Goal::Partial(
            problem
                .goal
                .iter()
                .map(|a| {
                    (
                        GoalTarget::Term(GroundTerm {
                            function: a.predicate,
                            args: a.args.clone(),
                        }),
                        1,
                    )
                })
                .collect(),
        ),
    }
}

/// Full translation of a parsed model.
pub fn translate(model: &StripsModel) -> (Domain, Instance) {
    (
        translate_domain(&model.domain),
        translate_problem(&model.domain, &model.problem),
    )
}
