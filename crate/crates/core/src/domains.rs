//! Built-in benchmark domains, seeded instance generators, and the bundled
//! corpus of reference solution programs.
//!
//! Every generator is deterministic given `(name, set, seed)`: instance
//! `k` draws from its own derived stream, so a generated prefix never
//! changes when more instances are requested.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    build_extended_domain, ActionSchema, Atom, CmpOp, Domain, Effect, Expr, ExtendedDomain,
    FunctionKind, FunctionSymbol, Goal, GoalTarget, GroundTerm, Instance, ObjectType, Operand,
    PointerDecl,
};
use crate::program::{parse_program, PlanningProgram};
use crate::rng::Pcg32;

pub const DEFAULT_SEED: u64 = 1;

pub const BUILTIN_NAMES: [&str; 11] = [
    "gripper",
    "visitall",
    "corridor",
    "fibonacci",
    "find",
    "reverse",
    "select",
    "sorting",
    "triangular-sum",
    "blocks-ontable",
    "sieve",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainError {
    UnknownDomain { name: String },
    UnknownProgram { name: String },
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::UnknownDomain { name } => write!(f, "unknown domain `{name}`"),
            DomainError::UnknownProgram { name } => {
                write!(f, "no bundled solution program for `{name}`")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceSet {
    Synthesis,
    Validation,
}

/// Benchmark configuration: the line/pointer budget the domain is
/// normally synthesized with and the sizes of its generated sets.
#[derive(Clone, Copy, Debug)]
pub struct BenchmarkSpec {
    pub default_lines: usize,
    pub synthesis_count: usize,
    pub validation_count: usize,
}

/// A built-in domain together with its standard pointer declaration.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub domain: Domain,
    pub pointers: Vec<PointerDecl>,
    pub spec: BenchmarkSpec,
}

impl Builtin {
    pub fn extended(&self) -> ExtendedDomain {
        build_extended_domain(&self.domain, &self.pointers)
            .expect("built-in declarations are well-formed")
    }
}

fn obj(name: &str) -> ObjectType {
    ObjectType {
        name: name.to_string(),
    }
}

fn func(name: &str, params: Vec<usize>, kind: FunctionKind) -> FunctionSymbol {
    FunctionSymbol {
        name: name.to_string(),
        param_types: params,
        kind,
    }
}

fn term(function: usize, slots: Vec<usize>) -> Operand {
    Operand::Term(function, slots)
}

fn atom(lhs: Operand, op: CmpOp, rhs: i64) -> Atom {
    Atom {
        lhs,
        op,
        rhs: Operand::Const(rhs),
    }
}

fn assign(function: usize, slots: Vec<usize>, value: Expr) -> Effect {
    Effect {
        target: (function, slots),
        value,
    }
}

fn plus_one(function: usize, slots: Vec<usize>) -> Expr {
    Expr::Add(
        alloc::boxed::Box::new(Expr::Operand(term(function, slots))),
        alloc::boxed::Box::new(Expr::Operand(Operand::Const(1))),
    )
}

fn minus_one(function: usize, slots: Vec<usize>) -> Expr {
    Expr::Sub(
        alloc::boxed::Box::new(Expr::Operand(term(function, slots))),
        alloc::boxed::Box::new(Expr::Operand(Operand::Const(1))),
    )
}

fn schema(name: &str, params: Vec<(&str, usize)>, pre: Vec<Atom>, eff: Vec<Effect>) -> ActionSchema {
    ActionSchema {
        name: name.to_string(),
        params: params
            .into_iter()
            .map(|(n, t)| (n.to_string(), t))
            .collect(),
        pre,
        eff,
    }
}

/// Single-type numeric-vector domain shared by several benchmarks.
fn vector_domain(name: &str, schemas: Vec<ActionSchema>) -> Domain {
    Domain {
        name: name.to_string(),
        types: vec![obj("cell")],
        functions: vec![func("vector", vec![0], FunctionKind::Numeric)],
        schemas,
    }
}

fn swap_schema() -> ActionSchema {
    schema(
        "swap",
        vec![("z1", 0), ("z2", 0)],
        Vec::new(),
        vec![
            assign(0, vec![0], Expr::Operand(term(0, vec![1]))),
            assign(0, vec![1], Expr::Operand(term(0, vec![0]))),
        ],
    )
}

/// Returns the named built-in domain with its pointer declaration and
/// benchmark configuration.
pub fn builtin_domain(name: &str) -> Result<Builtin, DomainError> {
    let b = match name {
        "triangular-sum" => Builtin {
            domain: vector_domain(
                "triangular-sum",
                vec![
                    schema(
                        "vector-inc",
                        vec![("z1", 0)],
                        Vec::new(),
                        vec![assign(0, vec![0], plus_one(0, vec![0]))],
                    ),
                    schema(
                        "vector-dec",
                        vec![("z1", 0)],
                        vec![atom(term(0, vec![0]), CmpOp::Gt, 0)],
                        vec![assign(0, vec![0], minus_one(0, vec![0]))],
                    ),
                    schema(
                        "vector-add",
                        vec![("z1", 0), ("z2", 0)],
                        Vec::new(),
                        vec![assign(
                            0,
                            vec![0],
                            Expr::Add(
                                alloc::boxed::Box::new(Expr::Operand(term(0, vec![0]))),
                                alloc::boxed::Box::new(Expr::Operand(term(0, vec![1]))),
                            ),
                        )],
                    ),
                ],
            ),
            pointers: vec![PointerDecl::new("a", 0), PointerDecl::new("b", 0)],
            spec: BenchmarkSpec {
                default_lines: 6,
                synthesis_count: 10,
                validation_count: 44_709,
            },
        },
        "fibonacci" => {
            let mut b = builtin_domain("triangular-sum")?;
            b.domain.name = "fibonacci".to_string();
            b.spec = BenchmarkSpec {
                default_lines: 7,
                synthesis_count: 10,
                validation_count: 33,
            };
            b
        }
        "corridor" => Builtin {
            domain: vector_domain(
                "corridor",
                vec![
                    schema(
                        "vector-right",
                        vec![("z1", 0)],
                        Vec::new(),
                        vec![assign(0, vec![0], plus_one(0, vec![0]))],
                    ),
                    schema(
                        "vector-left",
                        vec![("z1", 0)],
                        vec![atom(term(0, vec![0]), CmpOp::Gt, 0)],
                        vec![assign(0, vec![0], minus_one(0, vec![0]))],
                    ),
                ],
            ),
            pointers: vec![PointerDecl::new("i", 0), PointerDecl::new("j", 0)],
            spec: BenchmarkSpec {
                default_lines: 8,
                synthesis_count: 10,
                validation_count: 1_000,
            },
        },
        "find" => Builtin {
            domain: Domain {
                name: "find".to_string(),
                types: vec![obj("cell"), obj("counter-cell")],
                functions: vec![
                    func("vector", vec![0], FunctionKind::Numeric),
                    func("counter", vec![1], FunctionKind::Numeric),
                ],
                schemas: vec![schema(
                    "accumulate",
                    vec![("z1", 1)],
                    Vec::new(),
                    vec![assign(1, vec![0], plus_one(1, vec![0]))],
                )],
            },
            pointers: vec![
                PointerDecl::new("i", 0),
                PointerDecl::new("t", 0),
                PointerDecl::new("a", 1),
            ],
            spec: BenchmarkSpec {
                default_lines: 6,
                synthesis_count: 10,
                validation_count: 102,
            },
        },
        "reverse" => Builtin {
            domain: vector_domain("reverse", vec![swap_schema()]),
            pointers: vec![PointerDecl::new("i", 0), PointerDecl::new("j", 0)],
            spec: BenchmarkSpec {
                default_lines: 7,
                synthesis_count: 10,
                validation_count: 102,
            },
        },
        "select" => Builtin {
            domain: vector_domain("select", Vec::new()),
            pointers: vec![PointerDecl::new("a", 0), PointerDecl::new("b", 0)],
            spec: BenchmarkSpec {
                default_lines: 7,
                synthesis_count: 10,
                validation_count: 102,
            },
        },
        "sorting" => Builtin {
            domain: vector_domain("sorting", vec![swap_schema()]),
            pointers: vec![PointerDecl::new("i", 0), PointerDecl::new("j", 0)],
            spec: BenchmarkSpec {
                default_lines: 11,
                synthesis_count: 10,
                validation_count: 100,
            },
        },
        "gripper" => {
            // Types: ball 0, room 1, gripper 2.
            // Functions: at-robby 0, at 1, carry 2, free 3.
            Builtin {
                domain: Domain {
                    name: "gripper".to_string(),
                    types: vec![obj("ball"), obj("room"), obj("gripper")],
                    functions: vec![
                        func("at-robby", vec![1], FunctionKind::Boolean),
                        func("at", vec![0, 1], FunctionKind::Boolean),
                        func("carry", vec![0, 2], FunctionKind::Boolean),
                        func("free", vec![2], FunctionKind::Boolean),
                    ],
                    schemas: vec![
                        schema(
                            "move",
                            vec![("from", 1), ("to", 1)],
                            vec![atom(term(0, vec![0]), CmpOp::Eq, 1)],
                            vec![
                                assign(0, vec![0], Expr::Operand(Operand::Const(0))),
                                assign(0, vec![1], Expr::Operand(Operand::Const(1))),
                            ],
                        ),
                        schema(
                            "pick",
                            vec![("obj", 0), ("room", 1), ("grip", 2)],
                            vec![
                                atom(term(1, vec![0, 1]), CmpOp::Eq, 1),
                                atom(term(0, vec![1]), CmpOp::Eq, 1),
                                atom(term(3, vec![2]), CmpOp::Eq, 1),
                            ],
                            vec![
                                assign(1, vec![0, 1], Expr::Operand(Operand::Const(0))),
                                assign(3, vec![2], Expr::Operand(Operand::Const(0))),
                                assign(2, vec![0, 2], Expr::Operand(Operand::Const(1))),
                            ],
                        ),
                        schema(
                            "drop",
                            vec![("obj", 0), ("room", 1), ("grip", 2)],
                            vec![
                                atom(term(2, vec![0, 2]), CmpOp::Eq, 1),
                                atom(term(0, vec![1]), CmpOp::Eq, 1),
                            ],
                            vec![
                                assign(2, vec![0, 2], Expr::Operand(Operand::Const(0))),
                                assign(3, vec![2], Expr::Operand(Operand::Const(1))),
                                assign(1, vec![0, 1], Expr::Operand(Operand::Const(1))),
                            ],
                        ),
                    ],
                },
                pointers: vec![
                    PointerDecl::new("b1", 0),
                    PointerDecl::new("r1", 1),
                    PointerDecl::new("r2", 1),
                    PointerDecl::new("g1", 2),
                ],
                spec: BenchmarkSpec {
                    default_lines: 8,
                    synthesis_count: 10,
                    validation_count: 1_000,
                },
            }
        }
        "visitall" => Builtin {
            domain: Domain {
                name: "visitall".to_string(),
                types: vec![obj("row"), obj("column")],
                functions: vec![func("visited", vec![0, 1], FunctionKind::Boolean)],
                schemas: vec![schema(
                    "visit",
                    vec![("r", 0), ("c", 1)],
                    Vec::new(),
                    vec![assign(0, vec![0, 1], Expr::Operand(Operand::Const(1)))],
                )],
            },
            pointers: vec![PointerDecl::new("i", 0), PointerDecl::new("j", 1)],
            spec: BenchmarkSpec {
                default_lines: 8,
                synthesis_count: 10,
                validation_count: 50,
            },
        },
        "blocks-ontable" => {
            // Functions: on 0, ontable 1, clear 2, holding 3, handempty 4.
            Builtin {
                domain: Domain {
                    name: "blocks-ontable".to_string(),
                    types: vec![obj("block")],
                    functions: vec![
                        func("on", vec![0, 0], FunctionKind::Boolean),
                        func("ontable", vec![0], FunctionKind::Boolean),
                        func("clear", vec![0], FunctionKind::Boolean),
                        func("holding", vec![0], FunctionKind::Boolean),
                        func("handempty", vec![], FunctionKind::Boolean),
                    ],
                    schemas: vec![
                        schema(
                            "unstack",
                            vec![("x", 0), ("y", 0)],
                            vec![
                                atom(term(2, vec![0]), CmpOp::Eq, 1),
                                atom(term(4, vec![]), CmpOp::Eq, 1),
                                atom(term(0, vec![0, 1]), CmpOp::Eq, 1),
                            ],
                            vec![
                                assign(2, vec![0], Expr::Operand(Operand::Const(0))),
                                assign(4, vec![], Expr::Operand(Operand::Const(0))),
                                assign(0, vec![0, 1], Expr::Operand(Operand::Const(0))),
                                assign(3, vec![0], Expr::Operand(Operand::Const(1))),
                                assign(2, vec![1], Expr::Operand(Operand::Const(1))),
                            ],
                        ),
                        schema(
                            "put-down",
                            vec![("x", 0)],
                            vec![atom(term(3, vec![0]), CmpOp::Eq, 1)],
                            vec![
                                assign(3, vec![0], Expr::Operand(Operand::Const(0))),
                                assign(1, vec![0], Expr::Operand(Operand::Const(1))),
                                assign(2, vec![0], Expr::Operand(Operand::Const(1))),
                                assign(4, vec![], Expr::Operand(Operand::Const(1))),
                            ],
                        ),
                    ],
                },
                pointers: vec![
                    PointerDecl::new("o1", 0),
                    PointerDecl::new("o2", 0),
                    PointerDecl::new("o3", 0),
                ],
                spec: BenchmarkSpec {
                    default_lines: 13,
                    synthesis_count: 10,
                    validation_count: 20,
                },
            }
        }
        "sieve" => Builtin {
            domain: Domain {
                name: "sieve".to_string(),
                types: vec![obj("number")],
                functions: vec![func("prime", vec![0], FunctionKind::Boolean)],
                schemas: vec![schema(
                    "set-no-prime",
                    vec![("z1", 0)],
                    Vec::new(),
                    vec![assign(0, vec![0], Expr::Operand(Operand::Const(0)))],
                )],
            },
            pointers: vec![
                PointerDecl::new("i", 0),
                PointerDecl::new("j", 0),
                PointerDecl::new("k", 0),
            ],
            spec: BenchmarkSpec {
                default_lines: 16,
                synthesis_count: 10,
                validation_count: 100,
            },
        },
        other => {
            return Err(DomainError::UnknownDomain {
                name: other.to_string(),
            })
        }
    };
    Ok(b)
}

fn vterm(i: usize) -> GroundTerm {
    GroundTerm {
        function: 0,
        args: vec![i as u32],
    }
}

fn vector_init(values: &[i64]) -> Vec<(GroundTerm, i64)> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0)
        .map(|(i, v)| (vterm(i), *v))
        .collect()
}

fn vector_goal(values: &[i64]) -> Goal {
    Goal::Partial(
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (GoalTarget::Term(vterm(i)), *v))
            .collect(),
    )
}

fn triangular(n: i64) -> i64 {
    n * (n + 1) / 2
}

fn fib(k: usize) -> i64 {
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 0..k {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

fn distinct_values(rng: &mut Pcg32, len: usize, bound: u64) -> Vec<i64> {
    // Keeps the minimum unique so index goals are well defined.
    let mut values: Vec<i64> = (0..len).map(|_| rng.below(bound) as i64).collect();
    loop {
        let min = *values.iter().min().unwrap();
        if values.iter().filter(|v| **v == min).count() == 1 {
            return values;
        }
        let dup = values.iter().rposition(|v| *v == min).unwrap();
        values[dup] = rng.below(bound) as i64;
    }
}

fn instance_name(domain: &str, set: InstanceSet, k: usize) -> String {
    let tag = match set {
        InstanceSet::Synthesis => "s",
        InstanceSet::Validation => "v",
    };
    format!("{domain}-{tag}{:05}", k + 1)
}

/// Generates the `k`-th instance of a benchmark set. See the module docs
/// for the size schedules; synthesis sets follow small size ramps (vector
/// sizes 2–11, grids 2x2–11x11, 2–11 balls, …) and validation sets the
/// larger published ramps.
fn generate_instance(name: &str, set: InstanceSet, k: usize, seed: u64) -> Instance {
    let mut rng = Pcg32::derive(seed ^ hash_name(name), k as u64);
    let iname = instance_name(name, set, k);
    match (name, set) {
        ("triangular-sum", s) => {
            let n = match s {
                InstanceSet::Synthesis => 2 + k as i64,
                InstanceSet::Validation => 12 + k as i64,
            };
            Instance {
                name: iname,
                object_counts: vec![2],
                init: vector_init(&[0, n]),
                goal: vector_goal(&[triangular(n), 0]),
            }
        }
        ("fibonacci", s) => {
            let term_idx = match s {
                InstanceSet::Synthesis => 2 + k,
                InstanceSet::Validation => 11 + k,
            };
            let cells = term_idx + 1;
            let mut init = vec![0i64; cells];
            init[1] = 1;
            let goal: Vec<i64> = (0..cells).map(fib).collect();
            Instance {
                name: iname,
                object_counts: vec![cells as u32],
                init: vector_init(&init),
                goal: vector_goal(&goal),
            }
        }
        ("corridor", s) => {
            let len = match s {
                InstanceSet::Synthesis => 3 + k as u64,
                InstanceSet::Validation => 12 + k as u64,
            };
            let agent = rng.below(len) as i64;
            let target = rng.below(len) as i64;
            Instance {
                name: iname,
                object_counts: vec![2],
                init: vector_init(&[agent, target]),
                goal: Goal::Partial(vec![(GoalTarget::Term(vterm(0)), target)]),
            }
        }
        ("find", s) => {
            let (len, bound) = match s {
                InstanceSet::Synthesis => (2 + k, 10u64),
                InstanceSet::Validation => (1_000 + 100 * k, 1_000u64),
            };
            let values: Vec<i64> = (0..len).map(|_| rng.below(bound) as i64).collect();
            let count = values.iter().filter(|v| **v == values[0]).count() as i64;
            Instance {
                name: iname,
                object_counts: vec![len as u32, 1],
                init: vector_init(&values),
                goal: Goal::Partial(vec![(
                    GoalTarget::Term(GroundTerm {
                        function: 1,
                        args: vec![0],
                    }),
                    count,
                )]),
            }
        }
        ("reverse", s) => {
            let (len, bound) = match s {
                InstanceSet::Synthesis => (2 + k, 100u64),
                InstanceSet::Validation => (1_000 + 100 * k, 1_000_000_000u64),
            };
            let values: Vec<i64> = (0..len).map(|_| rng.below(bound) as i64).collect();
            let reversed: Vec<i64> = values.iter().rev().copied().collect();
            Instance {
                name: iname,
                object_counts: vec![len as u32],
                init: vector_init(&values),
                goal: vector_goal(&reversed),
            }
        }
        ("select", s) => {
            let (len, bound) = match s {
                InstanceSet::Synthesis => (2 + k, 100u64),
                InstanceSet::Validation => (1_000 + 100 * k, 1_000_000_000u64),
            };
            let values = distinct_values(&mut rng, len, bound);
            let min = *values.iter().min().unwrap();
            let argmin = values.iter().position(|v| *v == min).unwrap() as i64;
            Instance {
                name: iname,
                object_counts: vec![len as u32],
                init: vector_init(&values),
                goal: Goal::Partial(vec![(GoalTarget::Pointer("b".to_string()), argmin)]),
            }
        }
        ("sorting", s) => {
            let (len, bound) = match s {
                InstanceSet::Synthesis => (2 + k, 100u64),
                InstanceSet::Validation => (12 + k, 1_000_000_000u64),
            };
            let values: Vec<i64> = (0..len).map(|_| rng.below(bound) as i64).collect();
            let mut sorted = values.clone();
            sorted.sort_unstable();
            Instance {
                name: iname,
                object_counts: vec![len as u32],
                init: vector_init(&values),
                goal: vector_goal(&sorted),
            }
        }
        ("gripper", s) => {
            let balls = match s {
                InstanceSet::Synthesis => 2 + k,
                InstanceSet::Validation => 12 + k,
            } as u32;
            // at-robby 0, at 1, carry 2, free 3; rooms: 0 = A, 1 = B.
            let mut init = vec![(
                GroundTerm {
                    function: 0,
                    args: vec![0],
                },
                1,
            )];
            for b in 0..balls {
                init.push((
                    GroundTerm {
                        function: 1,
                        args: vec![b, 0],
                    },
                    1,
                ));
            }
            for g in 0..2 {
                init.push((
                    GroundTerm {
                        function: 3,
                        args: vec![g],
                    },
                    1,
                ));
            }
            let goal = Goal::Partial(
                (0..balls)
                    .map(|b| {
                        (
                            GoalTarget::Term(GroundTerm {
                                function: 1,
                                args: vec![b, 1],
                            }),
                            1,
                        )
                    })
                    .collect(),
            );
            Instance {
                name: iname,
                object_counts: vec![balls, 2, 2],
                init,
                goal,
            }
        }
        ("visitall", s) => {
            let side = match s {
                InstanceSet::Synthesis => 2 + k,
                InstanceSet::Validation => 12 + k,
            } as u32;
            let mut goal = Vec::new();
            for r in 0..side {
                for c in 0..side {
                    goal.push((
                        GoalTarget::Term(GroundTerm {
                            function: 0,
                            args: vec![r, c],
                        }),
                        1,
                    ));
                }
            }
            Instance {
                name: iname,
                object_counts: vec![side, side],
                init: Vec::new(),
                goal: Goal::Partial(goal),
            }
        }
        ("blocks-ontable", s) => {
            let blocks = match s {
                InstanceSet::Synthesis => 2 + k,
                InstanceSet::Validation => 12 + k,
            } as u32;
            // Random stacking: a shuffled block order split into towers.
            let mut order: Vec<u32> = (0..blocks).collect();
            for i in (1..order.len()).rev() {
                let j = rng.below(i as u64 + 1) as usize;
                order.swap(i, j);
            }
            // on 0, ontable 1, clear 2, holding 3, handempty 4.
            let mut init = vec![(
                GroundTerm {
                    function: 4,
                    args: vec![],
                },
                1,
            )];
            let mut idx = 0;
            while idx < order.len() {
                let height = 1 + rng.below(4) as usize;
                let tower = &order[idx..(idx + height).min(order.len())];
                init.push((
                    GroundTerm {
                        function: 1,
                        args: vec![tower[0]],
                    },
                    1,
                ));
                for w in tower.windows(2) {
                    init.push((
                        GroundTerm {
                            function: 0,
                            args: vec![w[1], w[0]],
                        },
                        1,
                    ));
                }
                init.push((
                    GroundTerm {
                        function: 2,
                        args: vec![*tower.last().unwrap()],
                    },
                    1,
                ));
                idx += tower.len();
            }
            let goal = Goal::Partial(
                (0..blocks)
                    .map(|b| {
                        (
                            GoalTarget::Term(GroundTerm {
                                function: 1,
                                args: vec![b],
                            }),
                            1,
                        )
                    })
                    .collect(),
            );
            Instance {
                name: iname,
                object_counts: vec![blocks],
                init,
                goal,
            }
        }
        ("sieve", s) => {
            let len = match s {
                InstanceSet::Synthesis => 2 + k,
                InstanceSet::Validation => 12 + k,
            };
            let init: Vec<(GroundTerm, i64)> = (0..len).map(|i| (vterm(i), 1)).collect();
            let goal = Goal::Partial(
                (0..len)
                    .map(|i| {
                        (
                            GoalTarget::Term(vterm(i)),
                            if is_composite(i) { 0 } else { 1 },
                        )
                    })
                    .collect(),
            );
            Instance {
                name: iname,
                object_counts: vec![len as u32],
                init,
                goal,
            }
        }
        _ => unreachable!("generate_instance is only called for known names"),
    }
}

fn is_composite(n: usize) -> bool {
    if n < 4 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return true;
        }
        d += 1;
    }
    false
}

fn hash_name(name: &str) -> u64 {
    // FNV-1a, just to give each domain its own seed offset.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Generates `count` instances (the set's standard count when `None`) of
/// the named benchmark. Identical arguments produce identical instances.
pub fn generate_instances(
    name: &str,
    set: InstanceSet,
    count: Option<usize>,
    seed: u64,
) -> Result<Vec<Instance>, DomainError> {
    let builtin = builtin_domain(name)?;
    let count = count.unwrap_or(match set {
        InstanceSet::Synthesis => builtin.spec.synthesis_count,
        InstanceSet::Validation => builtin.spec.validation_count,
    });
    Ok((0..count)
        .map(|k| generate_instance(name, set, k, seed))
        .collect())
}

const TRIANGULAR_SUM_PROGRAM: &str = "\
0. inc(a)
1. vector-add(b,a)
2. vector-dec(a)
3. test(vector(a))
4. goto(0, !(Yz&!Yc))
5. end
";

const FIBONACCI_PROGRAM: &str = "\
0. vector-add(a,b)
1. dec(b)
2. vector-add(a,b)
3. set(b,a)
4. inc(a)
5. goto(0, !(Yz&!Yc))
6. end
";

const CORRIDOR_PROGRAM: &str = "\
0. vector-right(i)
1. inc(j)
2. cmp(vector(i),vector(j))
3. goto(0, !(!Yz&Yc))
4. vector-left(i)
5. cmp(vector(i),vector(j))
6. goto(1, !(Yz&!Yc))
7. end
";

const FIND_PROGRAM: &str = "\
0. cmp(vector(i),vector(t))
1. goto(3, !(Yz&!Yc))
2. accumulate(a)
3. inc(i)
4. goto(0, !(Yz&!Yc))
5. end
";

const GRIPPER_PROGRAM: &str = "\
0. pick(b1,r1,g1)
1. inc(r2)
2. move(r1,r2)
3. drop(b1,r2,g1)
4. move(r2,r1)
5. inc(b1)
6. goto(0, !(Yz&!Yc))
7. end
";

const REVERSE_PROGRAM: &str = "\
0. set(i,j)
1. swap(i,j)
2. inc(i)
3. goto(1, !(Yz&!Yc))
4. inc(j)
5. goto(0, !(Yz&!Yc))
6. end
";

const SELECT_PROGRAM: &str = "\
0. inc(b)
1. cmp(vector(a),vector(b))
2. goto(4, !(!Yz&!Yc))
3. set(b,a)
4. inc(a)
5. goto(1, !(Yz&!Yc))
6. end
";

const SORTING_PROGRAM: &str = "\
0. swap(i,j)
1. inc(i)
2. goto(0, !(Yz&!Yc))
3. cmp(vector(i),vector(j))
4. goto(7, !(!Yz&Yc))
5. dec(i)
6. goto(0, !(Yz&Yc))
7. swap(i,j)
8. dec(i)
9. goto(3, !(Yz&!Yc))
10. end
";

const VISITALL_PROGRAM: &str = "\
0. visit(i,j)
1. inc(i)
2. goto(0, !(Yz&!Yc))
3. dec(i)
4. goto(3, !(Yz&!Yc))
5. inc(j)
6. goto(0, !(Yz&!Yc))
7. end
";

const BLOCKS_ONTABLE_PROGRAM: &str = "\
0. dec(o2)
1. goto(0, !(Yz&!Yc))
2. dec(o1)
3. goto(2, !(Yz&!Yc))
4. unstack(o1,o2)
5. put-down(o1)
6. inc(o1)
7. goto(4, !(Yz&!Yc))
8. inc(o2)
9. goto(2, !(Yz&!Yc))
10. inc(o3)
11. goto(0, !(Yz&!Yc))
12. end
";

const SIEVE_PROGRAM: &str = "\
0. inc(i)
1. inc(i)
2. set(k,i)
3. dec(j)
4. goto(3, !(Yz&!Yc))
5. inc(k)
6. goto(13, !(!Yz&Yc))
7. inc(j)
8. cmp(i,j)
9. goto(5, !(Yz&!Yc))
10. set-no-prime(k)
11. cmp(i,j)
12. goto(3, !(!Yz&Yc))
13. inc(i)
14. goto(2, !(Yz&!Yc))
15. end
";

/// Textual form of the bundled reference solution for a benchmark.
pub fn corpus_program_text(name: &str) -> Result<&'static str, DomainError> {
    Ok(match name {
        "triangular-sum" => TRIANGULAR_SUM_PROGRAM,
        "fibonacci" => FIBONACCI_PROGRAM,
        "corridor" => CORRIDOR_PROGRAM,
        "find" => FIND_PROGRAM,
        "gripper" => GRIPPER_PROGRAM,
        "reverse" => REVERSE_PROGRAM,
        "select" => SELECT_PROGRAM,
        "sorting" => SORTING_PROGRAM,
        "visitall" => VISITALL_PROGRAM,
        "blocks-ontable" => BLOCKS_ONTABLE_PROGRAM,
        "sieve" => SIEVE_PROGRAM,
        other => {
            return Err(DomainError::UnknownProgram {
                name: other.to_string(),
            })
        }
    })
}

/// The bundled reference solution, parsed against the built-in domain's
/// instruction set.
pub fn corpus_program(name: &str) -> Result<PlanningProgram, DomainError> {
    let text = corpus_program_text(name)?;
    let ext = builtin_domain(name)?.extended();
    Ok(parse_program(text, &ext).expect("bundled programs parse against their own domain"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpreter::{run_all, ExecutionConfig};
    use crate::model::make_initial_state;

    #[test]
    fn generators_are_deterministic() {
        for name in BUILTIN_NAMES {
            let a = generate_instances(name, InstanceSet::Synthesis, Some(3), 7).unwrap();
            let b = generate_instances(name, InstanceSet::Synthesis, Some(3), 7).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.name, y.name);
                assert_eq!(x.object_counts, y.object_counts);
                assert_eq!(x.init, y.init);
            }
            let one = generate_instances(name, InstanceSet::Synthesis, Some(1), 7).unwrap();
            assert_eq!(one.len(), 1);
            assert_eq!(one[0].init, a[0].init);
        }
    }

    #[test]
    fn sorting_goals_match_a_direct_sort() {
        let instances =
            generate_instances("sorting", InstanceSet::Synthesis, None, DEFAULT_SEED).unwrap();
        assert_eq!(instances.len(), 10);
        for inst in &instances {
            let mut values = vec![0i64; inst.object_counts[0] as usize];
            for (t, v) in &inst.init {
                values[t.args[0] as usize] = *v;
            }
            values.sort_unstable();
            match &inst.goal {
                Goal::Partial(atoms) => {
                    for (t, v) in atoms {
                        match t {
                            GoalTarget::Term(term) => {
                                assert_eq!(values[term.args[0] as usize], *v)
                            }
                            GoalTarget::Pointer(_) => panic!("sorting goals are variable atoms"),
                        }
                    }
                }
                Goal::Constraint(_) => panic!("sorting goals are partial states"),
            }
        }
    }

    #[test]
    fn every_corpus_program_solves_its_synthesis_set() {
        for name in BUILTIN_NAMES {
            let builtin = builtin_domain(name).unwrap();
            let ext = builtin.extended();
            let program = corpus_program(name).unwrap();
            assert_eq!(program.n(), builtin.spec.default_lines, "{name}");
            let instances =
                generate_instances(name, InstanceSet::Synthesis, None, DEFAULT_SEED).unwrap();
            let grounds: Vec<_> = instances
                .iter()
                .map(|i| make_initial_state(&ext, i).unwrap())
                .collect();
            let outcomes = run_all(&program, &grounds, &ExecutionConfig::synthesis(), false);
            for (inst, outcome) in instances.iter().zip(&outcomes) {
                assert!(
                    outcome.is_solved(),
                    "{name}: {} not solved: {outcome:?}",
                    inst.name
                );
            }
        }
    }

    #[test]
    fn unknown_names_error() {
        assert!(builtin_domain("towers-of-hanoi").is_err());
        assert!(corpus_program("towers-of-hanoi").is_err());
    }

    #[test]
    fn gripper_instructions_are_type_consistent() {
        let ext = builtin_domain("gripper").unwrap().extended();
        // Brute-force recount: walk every pointer pair/tuple and keep the
        // type-consistent ones.
        let ptr_type = |name: &str| {
            let i = ext.pointer_index(name).unwrap();
            ext.pointers[i].type_index
        };
        let names = ["b1", "r1", "r2", "g1"];
        let mut expected = 2 * names.len(); // inc + dec
        let mut same_type_pairs = 0;
        for a in 0..names.len() {
            for b in (a + 1)..names.len() {
                if ptr_type(names[a]) == ptr_type(names[b]) {
                    same_type_pairs += 1;
                }
            }
        }
        expected += same_type_pairs; // cmp, one per unordered pair
        expected += 2 * same_type_pairs; // set, both orders
        for f in &ext.domain.functions {
            let mut tuples = 1usize;
            for t in &f.param_types {
                tuples *= names.iter().filter(|n| ptr_type(n) == *t).count();
            }
            expected += tuples; // test; boolean functions have no cmp
        }
        for schema in &ext.domain.schemas {
            let mut count = 0;
            let slots = schema.params.len();
            let index_tuples = (0..names.len().pow(slots as u32)).map(|mut code| {
                let mut tuple = Vec::new();
                for _ in 0..slots {
                    tuple.push(code % names.len());
                    code /= names.len();
                }
                tuple
            });
            for tuple in index_tuples {
                let distinct = tuple
                    .iter()
                    .collect::<alloc::collections::BTreeSet<_>>()
                    .len()
                    == tuple.len();
                let consistent = tuple
                    .iter()
                    .zip(&schema.params)
                    .all(|(p, (_, t))| ptr_type(names[*p]) == *t);
                if distinct && consistent {
                    count += 1;
                }
            }
            expected += count;
        }
        assert_eq!(ext.instruction_count(), expected);
        for present in ["set(r1,r2)", "set(r2,r1)", "cmp(r1,r2)", "pick(b1,r1,g1)"] {
            assert!(ext.instruction_index(present).is_some(), "{present}");
        }
        for absent in ["set(b1,r1)", "cmp(b1,g1)", "set(r1,b1)", "pick(r1,b1,g1)"] {
            assert!(ext.instruction_index(absent).is_none(), "{absent}");
        }
    }

    #[test]
    fn accumulator_matches_direct_summation() {
        // Oracle: the fourth triangular number by explicit summation.
        let oracle: i64 = (1..=4).sum();
        assert_eq!(oracle, 10);
        let ext = builtin_domain("triangular-sum").unwrap().extended();
        let instance = Instance {
            name: "t4".to_string(),
            object_counts: vec![2],
            init: vector_init(&[0, 4]),
            goal: vector_goal(&[oracle, 0]),
        };
        let ground = make_initial_state(&ext, &instance).unwrap();
        let program = corpus_program("triangular-sum").unwrap();
        let outcome = crate::interpreter::run(&program, &ground, &ExecutionConfig::synthesis());
        assert!(outcome.is_solved(), "{outcome:?}");
    }

    #[test]
    fn validation_ramps_match_published_sizes() {
        // Triangular sum tops out at the 44,720th term.
        assert_eq!(triangular(44_720), 999_961_560);
        let last = generate_instance(
            "triangular-sum",
            InstanceSet::Validation,
            44_708,
            DEFAULT_SEED,
        );
        match &last.goal {
            Goal::Partial(atoms) => assert_eq!(atoms[0].1, 999_961_560),
            _ => unreachable!(),
        }
        // Fibonacci stops at the largest term under the validation bound.
        assert_eq!(fib(43), 433_494_437);
        let spec = builtin_domain("fibonacci").unwrap().spec;
        assert_eq!(spec.validation_count, 33);
        let last = generate_instance("fibonacci", InstanceSet::Validation, 32, DEFAULT_SEED);
        assert_eq!(last.object_counts, vec![44]);
        // Vector benchmarks ramp from 1,000 to 11,100 elements.
        let last = generate_instance("find", InstanceSet::Validation, 101, DEFAULT_SEED);
        assert_eq!(last.object_counts[0], 11_100);
        // Visitall validation grids reach 61x61; synthesis 2x2..11x11.
        let last = generate_instance("visitall", InstanceSet::Validation, 49, DEFAULT_SEED);
        assert_eq!(last.object_counts, vec![61, 61]);
        let synth = generate_instances("visitall", InstanceSet::Synthesis, None, DEFAULT_SEED)
            .unwrap();
        assert_eq!(synth.len(), 10);
        assert_eq!(synth[0].object_counts, vec![2, 2]);
        assert_eq!(synth[9].object_counts, vec![11, 11]);
    }
}
