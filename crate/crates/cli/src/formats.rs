//! Text formats for domains and instances.
//!
//! Domain files hold one declaration per line:
//!
//! ```text
//! DOMAIN sorting
//! TYPES cell
//! POINTERS i:cell j:cell
//! FUNCTION num vector(cell)
//! SCHEMA swap(z1:cell,z2:cell)
//! EFF vector(z1) := vector(z2) ; vector(z2) := vector(z1)
//! ```
//!
//! `PRE` lines carry `&`-joined comparison atoms for the preceding
//! schema; all effects read the pre-state and are applied together. The
//! `POINTERS` line is optional; when absent the pointer declaration comes
//! from the command line.
//!
//! Instance files:
//!
//! ```text
//! INSTANCE sorting-s0001
//! OBJECTS cell: 5
//! INIT vector(0)=6 vector(1)=3
//! GOAL vector(0)=3 vector(1)=6
//! ```
//!
//! Omitted variables are zero. `GOALEXPR <boolean expression>` replaces
//! `GOAL` for constraint goals. In goals, a bare identifier names a
//! pointer.

use std::fmt::Write as _;

use bfgp_core::model::{
    ActionSchema, Atom, CmpOp, Domain, Effect, Expr, FunctionKind, FunctionSymbol, Goal,
    GoalExpr, GoalOperand, GoalTarget, GroundTerm, Instance, ObjectType, Operand, PointerDecl,
};

#[derive(Debug)]
pub struct FormatError {
    pub line: usize,
    pub detail: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.detail)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(line: usize, detail: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        detail: detail.into(),
    })
}

/// A parsed domain file: the domain plus its optional pointer
/// declaration.
#[derive(Debug, Clone)]
pub struct DomainFile {
    pub domain: Domain,
    pub pointers: Option<Vec<PointerDecl>>,
}

pub fn parse_domain(text: &str) -> Result<DomainFile, FormatError> {
    let mut domain = Domain::default();
    let mut pointers: Option<Vec<PointerDecl>> = None;
    let mut pointer_names: Vec<(usize, Vec<String>)> = Vec::new();
    let mut saw_domain = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let no = lineno + 1;
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        match head {
            "DOMAIN" => {
                domain.name = rest.to_string();
                saw_domain = true;
            }
            "TYPES" => {
                for t in rest.split_whitespace() {
                    if domain.type_index(t).is_some() {
                        return err(no, format!("type `{t}` declared twice"));
                    }
                    domain.types.push(ObjectType {
                        name: t.to_string(),
                    });
                }
            }
            "POINTERS" => {
                let mut decls = Vec::new();
                for item in rest.split_whitespace() {
                    let (name, ty) = item.split_once(':').ok_or(FormatError {
                        line: no,
                        detail: format!("expected name:type, found `{item}`"),
                    })?;
                    let type_index = domain
                        .type_index(ty)
                        .ok_or(FormatError {
                            line: no,
                            detail: format!("unknown type `{ty}`"),
                        })?;
                    decls.push(PointerDecl::new(name, type_index));
                }
                pointers = Some(decls);
            }
            "FUNCTION" => {
                let (kind_text, sig) = rest.split_once(char::is_whitespace).ok_or(FormatError {
                    line: no,
                    detail: "expected FUNCTION <bool|num> <name>(<types>)".to_string(),
                })?;
                let kind = match kind_text {
                    "bool" => FunctionKind::Boolean,
                    "num" => FunctionKind::Numeric,
                    other => return err(no, format!("unknown function kind `{other}`")),
                };
                let (name, args) = split_call(sig.trim(), no)?;
                let mut param_types = Vec::new();
                for a in args {
                    param_types.push(domain.type_index(&a).ok_or(FormatError {
                        line: no,
                        detail: format!("unknown type `{a}`"),
                    })?);
                }
                domain.functions.push(FunctionSymbol {
                    name: name.to_string(),
                    param_types,
                    kind,
                });
            }
            "SCHEMA" => {
                let (name, args) = split_call(rest, no)?;
                let mut params = Vec::new();
                let mut names = Vec::new();
                for a in args {
                    let (pname, ty) = a.split_once(':').ok_or(FormatError {
                        line: no,
                        detail: format!("expected param:type, found `{a}`"),
                    })?;
                    let type_index = domain.type_index(ty).ok_or(FormatError {
                        line: no,
                        detail: format!("unknown type `{ty}`"),
                    })?;
                    params.push((pname.to_string(), type_index));
                    names.push(pname.to_string());
                }
                pointer_names.push((domain.schemas.len(), names));
                domain.schemas.push(ActionSchema {
                    name: name.to_string(),
                    params,
                    pre: Vec::new(),
                    eff: Vec::new(),
                });
            }
            "PRE" => {
                let fns = domain_fns(&domain);
                let schema = domain.schemas.last_mut().ok_or(FormatError {
                    line: no,
                    detail: "PRE before any SCHEMA".to_string(),
                })?;
                if rest.is_empty() {
                    continue;
                }
                let param_names: Vec<String> =
                    schema.params.iter().map(|(n, _)| n.clone()).collect();
                let param_refs: Vec<&str> = param_names.iter().map(|s| s.as_str()).collect();
                for part in rest.split('&') {
                    schema
                        .pre
                        .push(parse_atom(part.trim(), &fns, &param_refs, no)?);
                }
            }
            "EFF" => {
                let fns = domain_fns(&domain);
                let schema = domain.schemas.last_mut().ok_or(FormatError {
                    line: no,
                    detail: "EFF before any SCHEMA".to_string(),
                })?;
                if rest.is_empty() {
                    continue;
                }
                let param_names: Vec<&str> =
                    schema.params.iter().map(|(n, _)| n.as_str()).collect();
                for part in rest.split(';') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let (target_text, value_text) =
                        part.split_once(":=").ok_or(FormatError {
                            line: no,
                            detail: format!("expected `target := expr`, found `{part}`"),
                        })?;
                    let target = match parse_operand(target_text.trim(), &fns, &param_names, no)? {
                        Operand::Term(f, slots) => (f, slots),
                        _ => return err(no, "effect target must be a function term"),
                    };
                    let value = parse_expr(value_text.trim(), &fns, &param_names, no)?;
                    schema.eff.push(Effect { target, value });
                }
            }
            other => return err(no, format!("unknown declaration `{other}`")),
        }
    }
    if !saw_domain {
        return err(0, "missing DOMAIN line");
    }
    let _ = pointer_names;
    Ok(DomainFile { domain, pointers })
}

// Function lookups are cloned out so schema edits can hold `&mut domain`.
fn domain_fns(domain: &Domain) -> Vec<(String, usize)> {
    domain
        .functions
        .iter()
        .map(|f| (f.name.clone(), f.arity()))
        .collect()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Splits `name(a,b,c)` into the name and its comma-separated arguments;
/// `name()` and a bare `name` yield no arguments.
fn split_call(text: &str, lineno: usize) -> Result<(String, Vec<String>), FormatError> {
    let text = text.trim();
    match text.find('(') {
        None => Ok((text.to_string(), Vec::new())),
        Some(open) => {
            if !text.ends_with(')') {
                return err(lineno, format!("unbalanced parentheses in `{text}`"));
            }
            let name = text[..open].trim().to_string();
            let inner = &text[open + 1..text.len() - 1];
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|a| a.trim().to_string()).collect()
            };
            Ok((name, args))
        }
    }
}

/// Finds the comparison operator at parenthesis depth zero.
fn find_cmp(text: &str) -> Option<(usize, usize, CmpOp)> {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'!' | b'<' | b'>' | b'=' if depth == 0 => {
                let two = bytes.get(i + 1) == Some(&b'=');
                let op = match (bytes[i], two) {
                    (b'!', true) => CmpOp::Ne,
                    (b'<', true) => CmpOp::Le,
                    (b'>', true) => CmpOp::Ge,
                    (b'<', false) => CmpOp::Lt,
                    (b'>', false) => CmpOp::Gt,
                    (b'=', false) => CmpOp::Eq,
                    (b'=', true) => CmpOp::Eq,
                    _ => {
                        i += 1;
                        continue;
                    }
                };
                let len = if two || (bytes[i] == b'=' && bytes.get(i + 1) == Some(&b'=')) {
                    2
                } else {
                    1
                };
                return Some((i, len, op));
            }
            _ => {}
        }
        i += 1;
    }
    None
}

fn parse_operand(
    text: &str,
    fns: &[(String, usize)],
    params: &[&str],
    lineno: usize,
) -> Result<Operand, FormatError> {
    let text = text.trim();
    if let Ok(c) = text.parse::<i64>() {
        return Ok(Operand::Const(c));
    }
    if text.contains('(') {
        let (name, args) = split_call(text, lineno)?;
        let f = fns
            .iter()
            .position(|(n, _)| *n == name)
            .ok_or(FormatError {
                line: lineno,
                detail: format!("unknown function `{name}`"),
            })?;
        let mut slots = Vec::new();
        for a in args {
            let slot = params.iter().position(|p| *p == a).ok_or(FormatError {
                line: lineno,
                detail: format!("unknown parameter `{a}`"),
            })?;
            slots.push(slot);
        }
        if slots.len() != fns[f].1 {
            return err(lineno, format!("arity mismatch for `{name}`"));
        }
        return Ok(Operand::Term(f, slots));
    }
    match params.iter().position(|p| *p == text) {
        Some(slot) => Ok(Operand::Param(slot)),
        None => err(lineno, format!("unknown operand `{text}`")),
    }
}

fn parse_atom(
    text: &str,
    fns: &[(String, usize)],
    params: &[&str],
    lineno: usize,
) -> Result<Atom, FormatError> {
    let (pos, len, op) = find_cmp(text).ok_or(FormatError {
        line: lineno,
        detail: format!("expected a comparison in `{text}`"),
    })?;
    Ok(Atom {
        lhs: parse_operand(&text[..pos], fns, params, lineno)?,
        op,
        rhs: parse_operand(&text[pos + len..], fns, params, lineno)?,
    })
}

/// Additive expressions: `operand ((+|-) operand)*`, left associative.
fn parse_expr(
    text: &str,
    fns: &[(String, usize)],
    params: &[&str],
    lineno: usize,
) -> Result<Expr, FormatError> {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut parts: Vec<(char, &str)> = Vec::new();
    let mut start = 0usize;
    let mut sign = '+';
    for (i, b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                parts.push((sign, &text[start..i]));
                sign = *b as char;
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((sign, &text[start..]));
    let mut expr: Option<Expr> = None;
    for (sign, part) in parts {
        let operand = Expr::Operand(parse_operand(part, fns, params, lineno)?);
        expr = Some(match expr {
            None => operand,
            Some(acc) if sign == '+' => Expr::Add(Box::new(acc), Box::new(operand)),
            Some(acc) => Expr::Sub(Box::new(acc), Box::new(operand)),
        });
    }
    Ok(expr.unwrap())
}

fn operand_text(domain: &Domain, schema: &ActionSchema, op: &Operand) -> String {
    match op {
        Operand::Const(c) => c.to_string(),
        Operand::Param(slot) => schema.params[*slot].0.clone(),
        Operand::Term(f, slots) => {
            let args: Vec<&str> = slots
                .iter()
                .map(|s| schema.params[*s].0.as_str())
                .collect();
            format!("{}({})", domain.functions[*f].name, args.join(","))
        }
    }
}

fn expr_text(domain: &Domain, schema: &ActionSchema, expr: &Expr) -> String {
    match expr {
        Expr::Operand(op) => operand_text(domain, schema, op),
        Expr::Add(a, b) => format!(
            "{} + {}",
            expr_text(domain, schema, a),
            expr_text(domain, schema, b)
        ),
        Expr::Sub(a, b) => format!(
            "{} - {}",
            expr_text(domain, schema, a),
            expr_text(domain, schema, b)
        ),
    }
}

/// Renders a domain (and optional pointer declaration) in the domain file
/// format; `parse_domain` inverts it.
pub fn emit_domain(domain: &Domain, pointers: Option<&[PointerDecl]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "DOMAIN {}", domain.name);
    if !domain.types.is_empty() {
        let names: Vec<&str> = domain.types.iter().map(|t| t.name.as_str()).collect();
        let _ = writeln!(out, "TYPES {}", names.join(" "));
    }
    if let Some(ptrs) = pointers {
        let decls: Vec<String> = ptrs
            .iter()
            .map(|p| format!("{}:{}", p.name, domain.types[p.type_index].name))
            .collect();
        let _ = writeln!(out, "POINTERS {}", decls.join(" "));
    }
    for f in &domain.functions {
        let kind = match f.kind {
            FunctionKind::Boolean => "bool",
            FunctionKind::Numeric => "num",
        };
        let types: Vec<&str> = f
            .param_types
            .iter()
            .map(|t| domain.types[*t].name.as_str())
            .collect();
        let _ = writeln!(out, "FUNCTION {kind} {}({})", f.name, types.join(","));
    }
    for schema in &domain.schemas {
        let params: Vec<String> = schema
            .params
            .iter()
            .map(|(n, t)| format!("{n}:{}", domain.types[*t].name))
            .collect();
        let _ = writeln!(out, "SCHEMA {}({})", schema.name, params.join(","));
        if !schema.pre.is_empty() {
            let atoms: Vec<String> = schema
                .pre
                .iter()
                .map(|a| {
                    format!(
                        "{} {} {}",
                        operand_text(domain, schema, &a.lhs),
                        a.op.symbol(),
                        operand_text(domain, schema, &a.rhs)
                    )
                })
                .collect();
            let _ = writeln!(out, "PRE {}", atoms.join(" & "));
        }
        if !schema.eff.is_empty() {
            let effects: Vec<String> = schema
                .eff
                .iter()
                .map(|e| {
                    let target = Operand::Term(e.target.0, e.target.1.clone());
                    format!(
                        "{} := {}",
                        operand_text(domain, schema, &target),
                        expr_text(domain, schema, &e.value)
                    )
                })
                .collect();
            let _ = writeln!(out, "EFF {}", effects.join(" ; "));
        }
    }
    out
}

fn parse_ground_term(
    text: &str,
    domain: &Domain,
    lineno: usize,
) -> Result<GroundTerm, FormatError> {
    let (name, args) = split_call(text, lineno)?;
    let function = domain.function_index(&name).ok_or(FormatError {
        line: lineno,
        detail: format!("unknown function `{name}`"),
    })?;
    let mut indices = Vec::new();
    for a in args {
        indices.push(a.parse::<u32>().map_err(|_| FormatError {
            line: lineno,
            detail: format!("bad object index `{a}`"),
        })?);
    }
    if indices.len() != domain.functions[function].arity() {
        return err(lineno, format!("arity mismatch for `{name}`"));
    }
    Ok(GroundTerm {
        function,
        args: indices,
    })
}

fn parse_goal_target(
    text: &str,
    domain: &Domain,
    lineno: usize,
) -> Result<GoalTarget, FormatError> {
    if text.contains('(') {
        Ok(GoalTarget::Term(parse_ground_term(text, domain, lineno)?))
    } else {
        // A bare identifier in a goal names a pointer.
        Ok(GoalTarget::Pointer(text.to_string()))
    }
}

struct GoalExprParser<'a> {
    tokens: Vec<String>,
    pos: usize,
    domain: &'a Domain,
    lineno: usize,
}

impl<'a> GoalExprParser<'a> {
    fn tokenize(text: &str) -> Vec<String> {
        let mut tokens = Vec::new();
        let mut cur = String::new();
        let mut depth = 0usize;
        let bytes: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                '(' if !cur.is_empty() => {
                    // Function-call parenthesis: keep inside the token.
                    depth += 1;
                    cur.push(c);
                }
                ')' if depth > 0 => {
                    depth -= 1;
                    cur.push(c);
                }
                '(' | ')' | '&' | '|' | '!' if depth == 0 => {
                    if c == '!' && bytes.get(i + 1) == Some(&'=') {
                        cur.push_str("!=");
                        i += 2;
                        continue;
                    }
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                    tokens.push(c.to_string());
                }
                c if c.is_whitespace() && depth == 0 => {
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                }
                _ => cur.push(c),
            }
            i += 1;
        }
        if !cur.is_empty() {
            tokens.push(cur);
        }
        tokens
    }

    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|s| s.as_str())
    }

    fn next(&mut self) -> Option<String> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn or_expr(&mut self) -> Result<GoalExpr, FormatError> {
        let mut left = self.and_expr()?;
        while self.peek() == Some("|") {
            self.next();
            let right = self.and_expr()?;
            left = GoalExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<GoalExpr, FormatError> {
        let mut left = self.unary()?;
        while self.peek() == Some("&") {
            self.next();
            let right = self.unary()?;
            left = GoalExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<GoalExpr, FormatError> {
        match self.peek() {
            Some("!") => {
                self.next();
                Ok(GoalExpr::Not(Box::new(self.unary()?)))
            }
            Some("(") => {
                self.next();
                let inner = self.or_expr()?;
                if self.next().as_deref() != Some(")") {
                    return err(self.lineno, "missing `)` in goal expression");
                }
                Ok(inner)
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<GoalExpr, FormatError> {
        let lhs = self.operand()?;
        let op_text = self.next().ok_or(FormatError {
            line: self.lineno,
            detail: "expected comparison operator".to_string(),
        })?;
        let op = match op_text.as_str() {
            "=" | "==" => CmpOp::Eq,
            "!=" => CmpOp::Ne,
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            ">" => CmpOp::Gt,
            ">=" => CmpOp::Ge,
            other => return err(self.lineno, format!("unknown operator `{other}`")),
        };
        let rhs = self.operand()?;
        Ok(GoalExpr::Cmp(lhs, op, rhs))
    }

    fn operand(&mut self) -> Result<GoalOperand, FormatError> {
        let tok = self.next().ok_or(FormatError {
            line: self.lineno,
            detail: "expected operand".to_string(),
        })?;
        // Comparisons arriving glued to an operand (e.g. `vector(0)=1`)
        // get split here.
        if let Some((pos, len, op)) = find_cmp(&tok) {
            if pos > 0 && pos + len < tok.len() {
                let lhs = self.operand_from(&tok[..pos])?;
                let rhs_text = tok[pos + len..].to_string();
                self.tokens.insert(self.pos, rhs_text);
                self.tokens.insert(self.pos, op_token(op).to_string());
                return Ok(lhs);
            }
        }
        self.operand_from(&tok)
    }

    fn operand_from(&self, text: &str) -> Result<GoalOperand, FormatError> {
        if let Ok(c) = text.parse::<i64>() {
            return Ok(GoalOperand::Const(c));
        }
        Ok(GoalOperand::Target(parse_goal_target(
            text,
            self.domain,
            self.lineno,
        )?))
    }
}

fn op_token(op: CmpOp) -> &'static str {
    op.symbol()
}

pub fn parse_goal_expr(
    text: &str,
    domain: &Domain,
    lineno: usize,
) -> Result<GoalExpr, FormatError> {
    let mut parser = GoalExprParser {
        tokens: GoalExprParser::tokenize(text),
        pos: 0,
        domain,
        lineno,
    };
    let expr = parser.or_expr()?;
    if parser.pos != parser.tokens.len() {
        return err(lineno, "trailing tokens in goal expression");
    }
    Ok(expr)
}

pub fn parse_instance(text: &str, domain: &Domain) -> Result<Instance, FormatError> {
    let mut name = String::new();
    let mut object_counts = vec![0u32; domain.types.len()];
    let mut init = Vec::new();
    let mut goal_atoms: Vec<(GoalTarget, i64)> = Vec::new();
    let mut goal_expr: Option<GoalExpr> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let no = lineno + 1;
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        match head {
            "INSTANCE" => name = rest.to_string(),
            "OBJECTS" => {
                let (ty, count) = rest.split_once(':').ok_or(FormatError {
                    line: no,
                    detail: "expected OBJECTS <type>: <count>".to_string(),
                })?;
                let idx = domain.type_index(ty.trim()).ok_or(FormatError {
                    line: no,
                    detail: format!("unknown type `{}`", ty.trim()),
                })?;
                object_counts[idx] = count.trim().parse().map_err(|_| FormatError {
                    line: no,
                    detail: format!("bad object count `{}`", count.trim()),
                })?;
            }
            "INIT" => {
                for item in rest.split_whitespace() {
                    let (term_text, value_text) = item.split_once('=').ok_or(FormatError {
                        line: no,
                        detail: format!("expected term=value, found `{item}`"),
                    })?;
                    let term = parse_ground_term(term_text, domain, no)?;
                    let value = value_text.parse().map_err(|_| FormatError {
                        line: no,
                        detail: format!("bad value `{value_text}`"),
                    })?;
                    init.push((term, value));
                }
            }
            "GOAL" => {
                for item in rest.split_whitespace() {
                    let (target_text, value_text) = item.split_once('=').ok_or(FormatError {
                        line: no,
                        detail: format!("expected term=value, found `{item}`"),
                    })?;
                    let target = parse_goal_target(target_text, domain, no)?;
                    let value = value_text.parse().map_err(|_| FormatError {
                        line: no,
                        detail: format!("bad value `{value_text}`"),
                    })?;
                    goal_atoms.push((target, value));
                }
            }
            "GOALEXPR" => {
                goal_expr = Some(parse_goal_expr(rest, domain, no)?);
            }
            other => return err(no, format!("unknown declaration `{other}`")),
        }
    }
    let goal = match goal_expr {
        Some(expr) => {
            if !goal_atoms.is_empty() {
                return err(0, "GOAL and GOALEXPR are mutually exclusive");
            }
            Goal::Constraint(expr)
        }
        None => Goal::Partial(goal_atoms),
    };
    Ok(Instance {
        name,
        object_counts,
        init,
        goal,
    })
}

fn ground_term_text(domain: &Domain, term: &GroundTerm) -> String {
    let args: Vec<String> = term.args.iter().map(|a| a.to_string()).collect();
    format!("{}({})", domain.functions[term.function].name, args.join(","))
}

fn goal_target_text(domain: &Domain, target: &GoalTarget) -> String {
    match target {
        GoalTarget::Term(t) => ground_term_text(domain, t),
        GoalTarget::Pointer(p) => p.clone(),
    }
}

fn goal_operand_text(domain: &Domain, op: &GoalOperand) -> String {
    match op {
        GoalOperand::Const(c) => c.to_string(),
        GoalOperand::Target(t) => goal_target_text(domain, t),
    }
}

fn goal_expr_text(domain: &Domain, expr: &GoalExpr) -> String {
    match expr {
        GoalExpr::Cmp(l, op, r) => format!(
            "{} {} {}",
            goal_operand_text(domain, l),
            op.symbol(),
            goal_operand_text(domain, r)
        ),
        GoalExpr::And(a, b) => format!(
            "({} & {})",
            goal_expr_text(domain, a),
            goal_expr_text(domain, b)
        ),
        GoalExpr::Or(a, b) => format!(
            "({} | {})",
            goal_expr_text(domain, a),
            goal_expr_text(domain, b)
        ),
        GoalExpr::Not(a) => format!("!({})", goal_expr_text(domain, a)),
    }
}

const ATOMS_PER_LINE: usize = 16;

pub fn emit_instance(instance: &Instance, domain: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "INSTANCE {}", instance.name);
    for (idx, ty) in domain.types.iter().enumerate() {
        let _ = writeln!(out, "OBJECTS {}: {}", ty.name, instance.object_counts[idx]);
    }
    for chunk in instance.init.chunks(ATOMS_PER_LINE) {
        let atoms: Vec<String> = chunk
            .iter()
            .map(|(t, v)| format!("{}={v}", ground_term_text(domain, t)))
            .collect();
        let _ = writeln!(out, "INIT {}", atoms.join(" "));
    }
    match &instance.goal {
        Goal::Partial(atoms) => {
            for chunk in atoms.chunks(ATOMS_PER_LINE) {
                let rendered: Vec<String> = chunk
                    .iter()
                    .map(|(t, v)| format!("{}={v}", goal_target_text(domain, t)))
                    .collect();
                let _ = writeln!(out, "GOAL {}", rendered.join(" "));
            }
        }
        Goal::Constraint(expr) => {
            let _ = writeln!(out, "GOALEXPR {}", goal_expr_text(domain, expr));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bfgp_core::domains::{builtin_domain, generate_instances, InstanceSet, BUILTIN_NAMES};

    #[test]
    fn builtin_domains_round_trip() {
        for name in BUILTIN_NAMES {
            let builtin = builtin_domain(name).unwrap();
            let text = emit_domain(&builtin.domain, Some(&builtin.pointers));
            let parsed = parse_domain(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(parsed.domain.name, builtin.domain.name);
            assert_eq!(parsed.domain.types, builtin.domain.types);
            assert_eq!(parsed.domain.functions, builtin.domain.functions);
            assert_eq!(parsed.domain.schemas, builtin.domain.schemas);
            assert_eq!(parsed.pointers.unwrap(), builtin.pointers);
            let reemitted = emit_domain(&parsed.domain, Some(&builtin.pointers));
            assert_eq!(text, reemitted);
        }
    }

    #[test]
    fn builtin_instances_round_trip() {
        for name in BUILTIN_NAMES {
            let builtin = builtin_domain(name).unwrap();
            for inst in generate_instances(name, InstanceSet::Synthesis, Some(3), 5).unwrap() {
                let text = emit_instance(&inst, &builtin.domain);
                let parsed = parse_instance(&text, &builtin.domain)
                    .unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
                assert_eq!(parsed.name, inst.name);
                assert_eq!(parsed.object_counts, inst.object_counts);
                assert_eq!(parsed.init, inst.init);
                assert_eq!(parsed.goal, inst.goal);
            }
        }
    }

    #[test]
    fn goal_expressions_parse() {
        let builtin = builtin_domain("sorting").unwrap();
        let expr = parse_goal_expr(
            "vector(0) <= vector(1) & !(vector(1) > 9)",
            &builtin.domain,
            1,
        )
        .unwrap();
        match expr {
            GoalExpr::And(_, _) => {}
            other => panic!("expected conjunction, got {other:?}"),
        }
    }

    #[test]
    fn zero_arity_terms_parse() {
        let builtin = builtin_domain("blocks-ontable").unwrap();
        let inst = parse_instance(
            "INSTANCE t\nOBJECTS block: 2\nINIT handempty()=1 on(0,1)=1\nGOAL ontable(0)=1\n",
            &builtin.domain,
        )
        .unwrap();
        assert_eq!(inst.init.len(), 2);
        assert_eq!(inst.init[0].0.args.len(), 0);
    }
}
