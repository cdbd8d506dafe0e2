//! Syntax tree of the script language.
//!
//! A script is a list of statements. Statements bind spaces to names,
//! print evaluated results, or emit a space in an output format. Every
//! node carries the source position it started at, so evaluation errors
//! can point back into the script.

use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmitFormat {
    Dot,
    Json,
}

impl fmt::Display for EmitFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmitFormat::Dot => write!(f, "dot"),
            EmitFormat::Json => write!(f, "json"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StmtKind {
    Let { name: String, value: Expr },
    Print { value: Expr },
    Emit { format: EmitFormat, value: Expr },
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub span: Span,
    pub kind: ExprKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprKind {
    Ident(String),
    Int(u64),
    /// `<g1, g2, ...>` — a subgroup given by generators; each generator is
    /// a residue tuple (bare integers are one-tuples).
    Subgroup(Vec<Vec<u64>>),
    Call { name: String, args: Vec<Expr> },
}

#[derive(Clone, Debug)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

// Structural equality, ignoring spans: used to check that pretty-printing
// then reparsing reproduces the same tree. The derived `ExprKind` equality
// recurses through these impls, so nested spans are ignored too.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.stmts == other.stmts
    }
}

impl Eq for Script {}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Ident(name) => write!(f, "{name}"),
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Subgroup(gens) => {
                write!(f, "<")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    if g.len() == 1 {
                        write!(f, "{}", g[0])?;
                    } else {
                        write!(f, "(")?;
                        for (j, r) in g.iter().enumerate() {
                            if j > 0 {
                                write!(f, ",")?;
                            }
                            write!(f, "{r}")?;
                        }
                        write!(f, ")")?;
                    }
                }
                write!(f, ">")
            }
            ExprKind::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::Let { name, value } => write!(f, "let {name} = {value};"),
            StmtKind::Print { value } => write!(f, "print {value};"),
            StmtKind::Emit { format, value } => write!(f, "emit {format} {value};"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stmt in &self.stmts {
            writeln!(f, "{stmt}")?;
        }
        Ok(())
    }
}
