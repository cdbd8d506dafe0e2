//! Round-trip properties: pretty-printing a parsed script reproduces it, and
//! the JSON document format is byte-stable through a read/write cycle.

use proptest::prelude::*;

use stratifold_cli::ast::{EmitFormat, Expr, ExprKind, Script, Span, Stmt, StmtKind};
use stratifold_cli::emit::{read_json, to_json};
use stratifold_cli::eval::{eval_script, Env};
use stratifold_cli::parse::parse;

fn sp() -> Span {
    Span { line: 1, col: 1 }
}

fn call(name: &str, args: Vec<Expr>) -> Expr {
    Expr { span: sp(), kind: ExprKind::Call { name: name.into(), args } }
}

fn int(n: u64) -> Expr {
    Expr { span: sp(), kind: ExprKind::Int(n) }
}

const KEYWORDS: [&str; 3] = ["let", "print", "emit"];
const OPERATIONS: [&str; 11] = [
    "euclidean", "circle", "rotsphere", "cone", "product", "quotient",
    "unfold", "unfold_all", "depth", "validate", "iso",
];

fn names() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,5}".prop_filter("reserved word", |s| {
        !KEYWORDS.contains(&s.as_str()) && !OPERATIONS.contains(&s.as_str())
    })
}

fn leaves() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u64..4).prop_map(|k| call("euclidean", vec![int(k)])),
        (1u64..9).prop_map(|m| call("circle", vec![int(m)])),
        (1u64..9).prop_map(|m| call("rotsphere", vec![int(m)])),
        names().prop_map(|s| Expr { span: sp(), kind: ExprKind::Ident(s) }),
    ]
}

fn subgroup_literals() -> impl Strategy<Value = Expr> {
    proptest::collection::vec(proptest::collection::vec(0u64..8, 1..3), 0..3)
        .prop_map(|gens| Expr { span: sp(), kind: ExprKind::Subgroup(gens) })
}

fn space_exprs() -> impl Strategy<Value = Expr> {
    leaves().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| call("cone", vec![e])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| call("product", vec![a, b])),
            (inner.clone(), subgroup_literals())
                .prop_map(|(e, s)| call("quotient", vec![e, s])),
            inner.clone().prop_map(|e| call("unfold", vec![e])),
            inner.prop_map(|e| call("unfold_all", vec![e])),
        ]
    })
}

fn query_exprs() -> impl Strategy<Value = Expr> {
    prop_oneof![
        space_exprs(),
        space_exprs().prop_map(|e| call("depth", vec![e])),
        space_exprs().prop_map(|e| call("validate", vec![e])),
        (space_exprs(), space_exprs()).prop_map(|(a, b)| call("iso", vec![a, b])),
    ]
}

fn stmts() -> impl Strategy<Value = Stmt> {
    prop_oneof![
        (names(), space_exprs())
            .prop_map(|(name, value)| Stmt { span: sp(), kind: StmtKind::Let { name, value } }),
        query_exprs().prop_map(|value| Stmt { span: sp(), kind: StmtKind::Print { value } }),
        (
            prop_oneof![Just(EmitFormat::Dot), Just(EmitFormat::Json)],
            space_exprs()
        )
            .prop_map(|(format, value)| Stmt { span: sp(), kind: StmtKind::Emit { format, value } }),
    ]
}

proptest! {
    /// parse then print then parse is the same as parse.
    #[test]
    fn printing_a_script_reproduces_it(
        script in proptest::collection::vec(stmts(), 0..5).prop_map(|stmts| Script { stmts })
    ) {
        let printed = script.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&script, &reparsed);
        prop_assert_eq!(printed, reparsed.to_string());
    }

    #[test]
    fn parsing_arbitrary_text_never_panics(src in ".{0,120}") {
        let _ = parse(&src);
    }
}

/// A pipeline that evaluates without error, by construction.
#[derive(Clone, Debug)]
struct ValidPipeline {
    text: String,
    compact: bool,
}

fn valid_pipelines() -> impl Strategy<Value = ValidPipeline> {
    let leaf = prop_oneof![
        (1u64..7).prop_map(|m| ValidPipeline { text: format!("circle({m})"), compact: true }),
        (1u64..5).prop_map(|m| ValidPipeline { text: format!("rotsphere({m})"), compact: true }),
        (0u64..3).prop_map(|k| ValidPipeline { text: format!("euclidean({k})"), compact: k == 0 }),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            // Cones need a compact base; fall back to the base itself.
            inner.clone().prop_map(|p| {
                if p.compact {
                    ValidPipeline { text: format!("cone({})", p.text), compact: false }
                } else {
                    p
                }
            }),
            (0u64..3, inner.clone()).prop_map(|(k, p)| ValidPipeline {
                text: format!("product(euclidean({k}), {})", p.text),
                compact: k == 0 && p.compact,
            }),
            // The trivial subgroup sits inside every acting group.
            inner.clone().prop_map(|p| ValidPipeline {
                text: format!("quotient({}, <>)", p.text),
                compact: p.compact,
            }),
            inner.clone().prop_map(|p| ValidPipeline {
                text: format!("unfold({})", p.text),
                compact: p.compact,
            }),
            inner.prop_map(|p| ValidPipeline {
                text: format!("unfold_all({})", p.text),
                compact: p.compact,
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_documents_survive_a_read_write_cycle(p in valid_pipelines()) {
        let script = parse(&format!("let x = {};", p.text)).unwrap();
        let mut env = Env::new(8, 0);
        eval_script(&mut env, &script).unwrap();
        let (_, value) = env.last_binding().unwrap();

        let first = to_json(value);
        let back = read_json(&first).unwrap();
        prop_assert_eq!(to_json(&back), first);
        prop_assert_eq!(back.skeleton(), value.skeleton());
        prop_assert_eq!(back.realized().is_some(), value.realized().is_some());
        prop_assert_eq!(value.skeleton().compact, p.compact);
    }
}
