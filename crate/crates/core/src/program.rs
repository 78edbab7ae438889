//! Planning programs: line types, the canonical bit-vector encoding, the
//! two search operators, and the textual program format.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::ExtendedDomain;

/// The four joint values of the zero/carry flags. `ZeroCarry` can never be
/// produced by a register operation (a result cannot be both zero and
/// positive), which makes it an unconditional jump condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    NotZeroNotCarry = 0,
    ZeroNotCarry = 1,
    NotZeroCarry = 2,
    ZeroCarry = 3,
}

pub const FEATURES: [Feature; 4] = [
    Feature::NotZeroNotCarry,
    Feature::ZeroNotCarry,
    Feature::NotZeroCarry,
    Feature::ZeroCarry,
];

impl Feature {
    pub fn from_index(i: usize) -> Feature {
        FEATURES[i]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn matches(self, zero: bool, carry: bool) -> bool {
        let (z, c) = self.flags();
        z == zero && c == carry
    }

    pub fn flags(self) -> (bool, bool) {
        match self {
            Feature::NotZeroNotCarry => (false, false),
            Feature::ZeroNotCarry => (true, false),
            Feature::NotZeroCarry => (false, true),
            Feature::ZeroCarry => (true, true),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Feature::NotZeroNotCarry => "!Yz&!Yc",
            Feature::ZeroNotCarry => "Yz&!Yc",
            Feature::NotZeroCarry => "!Yz&Yc",
            Feature::ZeroCarry => "Yz&Yc",
        }
    }

    pub fn parse(text: &str) -> Option<Feature> {
        FEATURES.iter().copied().find(|f| f.name() == text)
    }
}

/// One program line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    /// Index into the extended domain's instruction set.
    Action(u16),
    /// Jump to `target` when the current flags differ from `feature`;
    /// fall through when they match.
    Goto { target: u16, feature: Feature },
    End,
    Undefined,
}

/// A (possibly partially specified) planning program of `n` lines. The
/// last line is always `End` and `End` appears nowhere else.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanningProgram {
    lines: Vec<Line>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditError {
    LineAlreadyProgrammed { line: usize },
    LineOutOfRange { line: usize },
    InvalidTarget { line: usize, target: usize },
    UnknownInstruction { index: usize },
}

impl fmt::Display for EditError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditError::LineAlreadyProgrammed { line } => {
                write!(f, "line {line} is already programmed")
            }
            EditError::LineOutOfRange { line } => write!(f, "line {line} out of range"),
            EditError::InvalidTarget { line, target } => {
                write!(f, "invalid goto target {target} on line {line}")
            }
            EditError::UnknownInstruction { index } => {
                write!(f, "instruction index {index} out of range")
            }
        }
    }
}

impl PlanningProgram {
    /// The empty program: all lines undefined except the trailing `End`.
    pub fn empty(n: usize) -> PlanningProgram {
        assert!(n >= 1, "a program has at least its end line");
        let mut lines = vec![Line::Undefined; n];
        lines[n - 1] = Line::End;
        PlanningProgram { lines }
    }

    pub fn from_lines(lines: Vec<Line>) -> Option<PlanningProgram> {
        if lines.is_empty() || *lines.last().unwrap() != Line::End {
            return None;
        }
        if lines[..lines.len() - 1].contains(&Line::End) {
            return None;
        }
        Some(PlanningProgram { lines })
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> Line {
        self.lines[i]
    }

    pub fn undefined_count(&self) -> usize {
        self.lines.iter().filter(|l| **l == Line::Undefined).count()
    }

    pub fn is_fully_programmed(&self) -> bool {
        self.undefined_count() == 0
    }

    /// Programs instruction `instruction` on undefined line `i`
    /// (Hamming distance 1 from the parent encoding).
    pub fn with_action(
        &self,
        i: usize,
        instruction: usize,
        ext: &ExtendedDomain,
    ) -> Result<PlanningProgram, EditError> {
        self.check_programmable(i)?;
        if instruction >= ext.instruction_count() {
            return Err(EditError::UnknownInstruction { index: instruction });
        }
        let mut lines = self.lines.clone();
        lines[i] = Line::Action(instruction as u16);
        Ok(PlanningProgram { lines })
    }

    /// Programs `goto(target, feature)` on undefined line `i` (Hamming
    /// distance 2). Targets `i` and `i + 1` are excluded; jumping to the
    /// end line is allowed.
    pub fn with_goto(
        &self,
        i: usize,
        target: usize,
        feature: Feature,
    ) -> Result<PlanningProgram, EditError> {
        self.check_programmable(i)?;
        if target >= self.n() || target == i || target == i + 1 {
            return Err(EditError::InvalidTarget { line: i, target });
        }
        let mut lines = self.lines.clone();
        lines[i] = Line::Goto {
            target: target as u16,
            feature,
        };
        Ok(PlanningProgram { lines })
    }

    fn check_programmable(&self, i: usize) -> Result<(), EditError> {
        if i + 1 >= self.n() {
            return Err(EditError::LineOutOfRange { line: i });
        }
        if self.lines[i] != Line::Undefined {
            return Err(EditError::LineAlreadyProgrammed { line: i });
        }
        Ok(())
    }

    /// Valid goto targets for line `i`, in ascending order.
    pub fn goto_targets(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n();
        (0..n).filter(move |t| *t != i && *t != i + 1)
    }
}

/// A packed bit vector, most-significant bit of each byte first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    bytes: Vec<u8>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec {
            len,
            bytes: vec![0; len.div_ceil(8)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 0x80 >> (i % 8);
        if v {
            self.bytes[i / 8] |= mask;
        } else {
            self.bytes[i / 8] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Hex rendering for logs, first program line in the most significant
    /// digits.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.bytes.len() * 2);
        for b in &self.bytes {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodingError {
    WrongLength { expected: usize, got: usize },
    MalformedEncoding { line: usize, detail: &'static str },
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingError::WrongLength { expected, got } => {
                write!(f, "encoding has {got} bits, expected {expected}")
            }
            EncodingError::MalformedEncoding { line, detail } => {
                write!(f, "malformed encoding at line {line}: {detail}")
            }
        }
    }
}

/// Encoded length for a program of `n` lines over `num_instructions`
/// instructions: `(n-1) * (num_instructions + (n-2) + 4)`. The three
/// sections are the per-line action bits, the per-line transition bits
/// (one per admissible target) and the per-line feature bits.
pub fn encoding_len(n: usize, num_instructions: usize) -> usize {
    (n - 1) * (num_instructions + (n - 2) + 4)
}

fn target_rank(n: usize, line: usize, target: usize) -> usize {
    // Targets ascend with `line` and `line + 1` skipped.
    let mut rank = target;
    if target > line {
        rank -= 1;
    }
    if target > line + 1 {
        rank -= 1;
    }
    debug_assert!(rank < n - 2);
    rank
}

fn target_from_rank(line: usize, rank: usize) -> usize {
    let mut t = rank;
    if t >= line {
        t += 1;
    }
    if t >= line + 1 {
        t += 1;
    }
    t
}

/// Encodes a program as the concatenation of its action, transition and
/// feature bit vectors.
pub fn encode(program: &PlanningProgram, ext: &ExtendedDomain) -> BitVec {
    let n = program.n();
    let a = ext.instruction_count();
    let mut bits = BitVec::zeros(encoding_len(n, a));
    let action_base = 0;
    let transition_base = (n - 1) * a;
    let feature_base = transition_base + (n - 1) * (n - 2);
    for i in 0..n - 1 {
        match program.line(i) {
            Line::Action(instr) => bits.set(action_base + i * a + instr as usize, true),
            Line::Goto { target, feature } => {
                let rank = target_rank(n, i, target as usize);
                bits.set(transition_base + i * (n - 2) + rank, true);
                bits.set(feature_base + i * 4 + feature.index(), true);
            }
            Line::Undefined => {}
            Line::End => unreachable!("end only on the last line"),
        }
    }
    bits
}

/// Decodes a bit vector back into a program.
pub fn decode(
    bits: &BitVec,
    n: usize,
    ext: &ExtendedDomain,
) -> Result<PlanningProgram, EncodingError> {
    let a = ext.instruction_count();
    let expected = encoding_len(n, a);
    if bits.len() != expected {
        return Err(EncodingError::WrongLength {
            expected,
            got: bits.len(),
        });
    }
    let action_base = 0;
    let transition_base = (n - 1) * a;
    let feature_base = transition_base + (n - 1) * (n - 2);
    let mut lines = vec![Line::Undefined; n];
    lines[n - 1] = Line::End;
    for i in 0..n - 1 {
        let mut action = None;
        for k in 0..a {
            if bits.get(action_base + i * a + k) {
                if action.is_some() {
                    return Err(EncodingError::MalformedEncoding {
                        line: i,
                        detail: "multiple action bits set",
                    });
                }
                action = Some(k);
            }
        }
        let mut transition = None;
        for k in 0..n - 2 {
            if bits.get(transition_base + i * (n - 2) + k) {
                if transition.is_some() {
                    return Err(EncodingError::MalformedEncoding {
                        line: i,
                        detail: "multiple transition bits set",
                    });
                }
                transition = Some(k);
            }
        }
        let mut feature = None;
        for k in 0..4 {
            if bits.get(feature_base + i * 4 + k) {
                if feature.is_some() {
                    return Err(EncodingError::MalformedEncoding {
                        line: i,
                        detail: "multiple feature bits set",
                    });
                }
                feature = Some(k);
            }
        }
        lines[i] = match (action, transition, feature) {
            (Some(instr), None, None) => Line::Action(instr as u16),
            (None, Some(rank), Some(feat)) => Line::Goto {
                target: target_from_rank(i, rank) as u16,
                feature: Feature::from_index(feat),
            },
            (None, None, None) => Line::Undefined,
            _ => {
                return Err(EncodingError::MalformedEncoding {
                    line: i,
                    detail: "inconsistent action/transition/feature bits",
                })
            }
        };
    }
    Ok(PlanningProgram { lines })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProgramParseError {
    SyntaxError {
        line: usize,
        column: usize,
        detail: String,
    },
    UnknownInstruction {
        line: usize,
        name: String,
    },
}

impl fmt::Display for ProgramParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgramParseError::SyntaxError {
                line,
                column,
                detail,
            } => write!(f, "syntax error at line {line}, column {column}: {detail}"),
            ProgramParseError::UnknownInstruction { line, name } => {
                write!(f, "unknown instruction `{name}` at line {line}")
            }
        }
    }
}

/// Renders a program in its textual form: one `<idx>. <instr>` per line,
/// gotos as `goto(<target>, !(<flags>))`, undefined lines as `--`.
pub fn print_program(program: &PlanningProgram, ext: &ExtendedDomain) -> String {
    let mut out = String::new();
    for (i, line) in program.lines().iter().enumerate() {
        out.push_str(&format!("{i}. "));
        match line {
            Line::Action(instr) => out.push_str(ext.instruction_name(*instr as usize)),
            Line::Goto { target, feature } => {
                out.push_str(&format!("goto({target}, !({}))", feature.name()));
            }
            Line::End => out.push_str("end"),
            Line::Undefined => out.push_str("--"),
        }
        out.push('\n');
    }
    out
}

/// Parses the textual program format. Line indices must be consecutive
/// from zero and the final line must be `end`.
pub fn parse_program(
    text: &str,
    ext: &ExtendedDomain,
) -> Result<PlanningProgram, ProgramParseError> {
    let mut lines = Vec::new();
    let mut expect = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        let dot = trimmed
            .find('.')
            .ok_or_else(|| ProgramParseError::SyntaxError {
                line: lineno + 1,
                column: 1,
                detail: String::from("expected `<idx>. <instruction>`"),
            })?;
        let idx: usize =
            trimmed[..dot]
                .trim()
                .parse()
                .map_err(|_| ProgramParseError::SyntaxError {
                    line: lineno + 1,
                    column: 1,
                    detail: String::from("bad line index"),
                })?;
        if idx != expect {
            return Err(ProgramParseError::SyntaxError {
                line: lineno + 1,
                column: 1,
                detail: format!("expected line index {expect}, found {idx}"),
            });
        }
        expect += 1;
        let body = trimmed[dot + 1..].trim();
        let parsed = if body == "end" {
            Line::End
        } else if body == "--" {
            Line::Undefined
        } else if let Some(rest) = body.strip_prefix("goto") {
            parse_goto(rest, lineno + 1)?
        } else {
            let canonical: String = body.chars().filter(|c| !c.is_whitespace()).collect();
            match ext.instruction_index(&canonical) {
                Some(i) => Line::Action(i as u16),
                None => {
                    return Err(ProgramParseError::UnknownInstruction {
                        line: lineno + 1,
                        name: canonical,
                    })
                }
            }
        };
        lines.push(parsed);
    }
    let n = lines.len();
    if n == 0 || lines[n - 1] != Line::End {
        return Err(ProgramParseError::SyntaxError {
            line: n,
            column: 1,
            detail: String::from("program must close with an `end` line"),
        });
    }
    if lines[..n - 1].contains(&Line::End) {
        return Err(ProgramParseError::SyntaxError {
            line: n,
            column: 1,
            detail: String::from("`end` may only appear on the last line"),
        });
    }
    for (i, line) in lines.iter().enumerate() {
        if let Line::Goto { target, .. } = line {
            let t = *target as usize;
            if t >= n || t == i || t == i + 1 {
                return Err(ProgramParseError::SyntaxError {
                    line: i + 1,
                    column: 1,
                    detail: format!("goto target {t} not allowed on line {i}"),
                });
            }
        }
    }
    Ok(PlanningProgram { lines })
}

fn parse_goto(rest: &str, lineno: usize) -> Result<Line, ProgramParseError> {
    let compact: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ProgramParseError::SyntaxError {
            line: lineno,
            column: 1,
            detail: String::from("expected goto(<target>, !(<flags>))"),
        })?;
    let comma = inner
        .find(',')
        .ok_or_else(|| ProgramParseError::SyntaxError {
            line: lineno,
            column: 1,
            detail: String::from("goto needs a target and a condition"),
        })?;
    let target: usize = inner[..comma]
        .parse()
        .map_err(|_| ProgramParseError::SyntaxError {
            line: lineno,
            column: 1,
            detail: String::from("bad goto target"),
        })?;
    let cond = &inner[comma + 1..];
    let feature_text = cond
        .strip_prefix("!(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ProgramParseError::SyntaxError {
            line: lineno,
            column: 1,
            detail: String::from("goto condition must be of the form !(<flags>)"),
        })?;
    let feature =
        Feature::parse(feature_text).ok_or_else(|| ProgramParseError::SyntaxError {
            line: lineno,
            column: 1,
            detail: format!("unknown flag expression `{feature_text}`"),
        })?;
    Ok(Line::Goto {
        target: target as u16,
        feature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_extended_domain, Domain, FunctionKind, FunctionSymbol, ObjectType, PointerDecl,
    };
    use alloc::string::ToString;

    fn two_pointer_ext() -> ExtendedDomain {
        let domain = Domain {
            name: "t".to_string(),
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
        build_extended_domain(
            &domain,
            &[PointerDecl::new("i", 0), PointerDecl::new("j", 0)],
        )
        .unwrap()
    }

    #[test]
    fn empty_program_encodes_to_zeros() {
        let ext = two_pointer_ext();
        // 10 instructions: inc x2, dec x2, cmp, set x2, test x2, cmp-fn.
        assert_eq!(ext.instruction_count(), 10);
        let p = PlanningProgram::empty(6);
        let bits = encode(&p, &ext);
        assert_eq!(bits.len(), 5 * (10 + 4 + 4));
        assert_eq!(bits.count_ones(), 0);
    }

    #[test]
    fn action_edit_is_hamming_one_and_goto_two() {
        let ext = two_pointer_ext();
        let p = PlanningProgram::empty(6);
        let base = encode(&p, &ext);
        let a = p.with_action(0, 1, &ext).unwrap();
        assert_eq!(encode(&a, &ext).hamming(&base), 1);
        let g = p.with_goto(2, 0, Feature::ZeroNotCarry).unwrap();
        assert_eq!(encode(&g, &ext).hamming(&base), 2);
    }

    #[test]
    fn programming_a_programmed_line_fails() {
        let ext = two_pointer_ext();
        let p = PlanningProgram::empty(4)
            .with_action(0, 0, &ext)
            .unwrap();
        assert!(matches!(
            p.with_action(0, 1, &ext),
            Err(EditError::LineAlreadyProgrammed { line: 0 })
        ));
    }

    #[test]
    fn goto_target_excludes_self_and_next() {
        let p = PlanningProgram::empty(6);
        assert!(p.with_goto(2, 2, Feature::ZeroCarry).is_err());
        assert!(p.with_goto(2, 3, Feature::ZeroCarry).is_err());
        assert!(p.with_goto(2, 5, Feature::ZeroCarry).is_ok());
        let targets: Vec<usize> = p.goto_targets(2).collect();
        assert_eq!(targets, vec![0, 1, 4, 5]);
    }

    #[test]
    fn decode_rejects_double_bits() {
        let ext = two_pointer_ext();
        let p = PlanningProgram::empty(4);
        let mut bits = encode(&p, &ext);
        bits.set(0, true);
        bits.set(1, true);
        assert!(matches!(
            decode(&bits, 4, &ext),
            Err(EncodingError::MalformedEncoding { line: 0, .. })
        ));
    }

    #[test]
    fn trivial_program_parses() {
        let ext = two_pointer_ext();
        let p = parse_program("0. end\n", &ext).unwrap();
        assert_eq!(p.n(), 1);
        assert_eq!(print_program(&p, &ext), "0. end\n");
    }

    #[test]
    fn text_round_trip() {
        let ext = two_pointer_ext();
        let text = "0. set(i,j)\n1. cmp(vector(i),vector(j))\n2. goto(0, !(Yz&!Yc))\n3. --\n4. end\n";
        let p = parse_program(text, &ext).unwrap();
        assert_eq!(print_program(&p, &ext), text);
    }
}
