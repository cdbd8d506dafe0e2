//! Lexer and recursive-descent parser for the script language.
//!
//! The grammar is small enough to check operation signatures during
//! parsing: wrong arity, non-space arguments, and out-of-range literals are
//! all reported with source positions before anything is evaluated.
//!
//! ```text
//! script  := stmt*
//! stmt    := "let" IDENT "=" expr ";"
//!          | "print" expr ";"
//!          | "emit" ("dot" | "json") expr ";"
//! expr    := INT | subgroup | IDENT | IDENT "(" expr ("," expr)* ")"
//! subgroup:= "<" gen ("," gen)* ">"            (may be empty: "<>")
//! gen     := INT | "(" INT ("," INT)* ")"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use crate::ast::{EmitFormat, Expr, ExprKind, Script, Span, Stmt, StmtKind};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: expected {}, found {}",
            self.span, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Let,
    Print,
    Emit,
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    Semi,
    Eq,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Let => "`let`".into(),
            Token::Print => "`print`".into(),
            Token::Emit => "`emit`".into(),
            Token::Ident(s) => format!("`{s}`"),
            Token::Int(n) => format!("`{n}`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Lt => "`<`".into(),
            Token::Gt => "`>`".into(),
            Token::Comma => "`,`".into(),
            Token::Semi => "`;`".into(),
            Token::Eq => "`=`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Token, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' | ')' | '<' | '>' | ',' | ';' | '=' => {
                chars.next();
                col += 1;
                out.push((
                    match c {
                        '(' => Token::LParen,
                        ')' => Token::RParen,
                        '<' => Token::Lt,
                        '>' => Token::Gt,
                        ',' => Token::Comma,
                        ';' => Token::Semi,
                        _ => Token::Eq,
                    },
                    span,
                ));
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    text.push(c);
                    chars.next();
                    col += 1;
                }
                let n = text.parse::<u64>().map_err(|_| ParseError {
                    span,
                    expected: "a smaller number".into(),
                    found: format!("`{text}`"),
                })?;
                out.push((Token::Int(n), span));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    text.push(c);
                    chars.next();
                    col += 1;
                }
                out.push((
                    match text.as_str() {
                        "let" => Token::Let,
                        "print" => Token::Print,
                        "emit" => Token::Emit,
                        _ => Token::Ident(text),
                    },
                    span,
                ));
            }
            other => {
                return Err(ParseError {
                    span,
                    expected: "a token".into(),
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push((Token::End, Span { line, col }));
    Ok(out)
}

enum ArgKind {
    Space,
    Nat { min: u64 },
    SubgroupLit,
}

/// Operation signatures; `true` means the call evaluates to a space.
fn signature(name: &str) -> Option<(Vec<ArgKind>, bool)> {
    use ArgKind::*;
    Some(match name {
        "euclidean" => (vec![Nat { min: 0 }], true),
        "circle" => (vec![Nat { min: 1 }], true),
        "rotsphere" => (vec![Nat { min: 1 }], true),
        "cone" => (vec![Space], true),
        "product" => (vec![Space, Space], true),
        "quotient" => (vec![Space, SubgroupLit], true),
        "unfold" => (vec![Space], true),
        "unfold_all" => (vec![Space], true),
        "depth" => (vec![Space], false),
        "validate" => (vec![Space], false),
        "iso" => (vec![Space, Space], false),
        _ => return None,
    })
}

fn is_space_expr(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Ident(_) => true,
        ExprKind::Call { name, .. } => signature(name).map(|(_, s)| s).unwrap_or(false),
        _ => false,
    }
}

struct Parser {
    tokens: Vec<(Token, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Token, Span) {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> (Token, Span) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let (tok, span) = self.peek();
        ParseError { span: *span, expected: expected.into(), found: tok.describe() }
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<Span, ParseError> {
        if self.peek().0 == tok {
            Ok(self.advance().1)
        } else {
            Err(self.error(what))
        }
    }

    fn parse_script(&mut self) -> Result<Script, ParseError> {
        let mut stmts = Vec::new();
        while self.peek().0 != Token::End {
            stmts.push(self.parse_stmt()?);
        }
        Ok(Script { stmts })
    }

    fn parse_stmt(&mut self) -> Result<Stmt, ParseError> {
        let (tok, span) = self.peek().clone();
        match tok {
            Token::Let => {
                self.advance();
                let name = match self.advance() {
                    (Token::Ident(name), nspan) => {
                        if signature(&name).is_some() {
                            return Err(ParseError {
                                span: nspan,
                                expected: "a fresh name".into(),
                                found: format!("the operation name `{name}`"),
                            });
                        }
                        name
                    }
                    (other, ospan) => {
                        return Err(ParseError {
                            span: ospan,
                            expected: "a name to bind".into(),
                            found: other.describe(),
                        })
                    }
                };
                self.expect(Token::Eq, "`=`")?;
                let value = self.parse_expr()?;
                self.expect(Token::Semi, "`;`")?;
                Ok(Stmt { span, kind: StmtKind::Let { name, value } })
            }
            Token::Print => {
                self.advance();
                let value = self.parse_expr()?;
                if matches!(value.kind, ExprKind::Int(_) | ExprKind::Subgroup(_)) {
                    return Err(ParseError {
                        span: value.span,
                        expected: "a space or query expression".into(),
                        found: format!("`{value}`"),
                    });
                }
                self.expect(Token::Semi, "`;`")?;
                Ok(Stmt { span, kind: StmtKind::Print { value } })
            }
            Token::Emit => {
                self.advance();
                let format = match self.advance() {
                    (Token::Ident(s), _) if s == "dot" => EmitFormat::Dot,
                    (Token::Ident(s), _) if s == "json" => EmitFormat::Json,
                    (other, ospan) => {
                        return Err(ParseError {
                            span: ospan,
                            expected: "an output format (`dot` or `json`)".into(),
                            found: other.describe(),
                        })
                    }
                };
                let value = self.parse_expr()?;
                if !is_space_expr(&value) {
                    return Err(ParseError {
                        span: value.span,
                        expected: "a space expression to emit".into(),
                        found: format!("`{value}`"),
                    });
                }
                self.expect(Token::Semi, "`;`")?;
                Ok(Stmt { span, kind: StmtKind::Emit { format, value } })
            }
            _ => Err(self.error("a statement (`let`, `print`, or `emit`)")),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let (tok, span) = self.peek().clone();
        match tok {
            Token::Int(n) => {
                self.advance();
                Ok(Expr { span, kind: ExprKind::Int(n) })
            }
            Token::Lt => self.parse_subgroup(),
            Token::Ident(name) => {
                self.advance();
                if self.peek().0 != Token::LParen {
                    return Ok(Expr { span, kind: ExprKind::Ident(name) });
                }
                self.advance();
                let mut args = Vec::new();
                if self.peek().0 != Token::RParen {
                    loop {
                        args.push(self.parse_expr()?);
                        if self.peek().0 == Token::Comma {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Token::RParen, "`)`")?;
                self.check_call(&name, &args, span)?;
                Ok(Expr { span, kind: ExprKind::Call { name, args } })
            }
            other => Err(ParseError {
                span,
                expected: "an expression".into(),
                found: other.describe(),
            }),
        }
    }

    fn check_call(&self, name: &str, args: &[Expr], span: Span) -> Result<(), ParseError> {
        let Some((kinds, _)) = signature(name) else {
            return Err(ParseError {
                span,
                expected: "a known operation".into(),
                found: format!("`{name}`"),
            });
        };
        if kinds.len() != args.len() {
            return Err(ParseError {
                span,
                expected: format!(
                    "{} argument{} to `{name}`",
                    kinds.len(),
                    if kinds.len() == 1 { "" } else { "s" }
                ),
                found: format!("{}", args.len()),
            });
        }
        for (kind, arg) in kinds.iter().zip(args) {
            match kind {
                ArgKind::Space => {
                    if !is_space_expr(arg) {
                        return Err(ParseError {
                            span: arg.span,
                            expected: "a space expression".into(),
                            found: format!("`{arg}`"),
                        });
                    }
                }
                ArgKind::Nat { min } => match &arg.kind {
                    ExprKind::Int(n) if n >= min => {}
                    ExprKind::Int(n) => {
                        return Err(ParseError {
                            span: arg.span,
                            expected: format!("a number of at least {min}"),
                            found: format!("`{n}`"),
                        })
                    }
                    _ => {
                        return Err(ParseError {
                            span: arg.span,
                            expected: "a number".into(),
                            found: format!("`{arg}`"),
                        })
                    }
                },
                ArgKind::SubgroupLit => {
                    if !matches!(arg.kind, ExprKind::Subgroup(_)) {
                        return Err(ParseError {
                            span: arg.span,
                            expected: "a subgroup literal like `<2>`".into(),
                            found: format!("`{arg}`"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn parse_subgroup(&mut self) -> Result<Expr, ParseError> {
        let span = self.expect(Token::Lt, "`<`")?;
        let mut gens: Vec<Vec<u64>> = Vec::new();
        if self.peek().0 != Token::Gt {
            loop {
                gens.push(self.parse_generator()?);
                if self.peek().0 == Token::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Token::Gt, "`>`")?;
        Ok(Expr { span, kind: ExprKind::Subgroup(gens) })
    }

    fn parse_generator(&mut self) -> Result<Vec<u64>, ParseError> {
        match self.advance() {
            (Token::Int(n), _) => Ok(vec![n]),
            (Token::LParen, _) => {
                let mut residues = Vec::new();
                loop {
                    match self.advance() {
                        (Token::Int(n), _) => residues.push(n),
                        (other, ospan) => {
                            return Err(ParseError {
                                span: ospan,
                                expected: "a residue".into(),
                                found: other.describe(),
                            })
                        }
                    }
                    match self.advance() {
                        (Token::Comma, _) => {}
                        (Token::RParen, _) => break,
                        (other, ospan) => {
                            return Err(ParseError {
                                span: ospan,
                                expected: "`,` or `)`".into(),
                                found: other.describe(),
                            })
                        }
                    }
                }
                Ok(residues)
            }
            (other, ospan) => Err(ParseError {
                span: ospan,
                expected: "a generator (a residue or a tuple)".into(),
                found: other.describe(),
            }),
        }
    }
}

/// Parse a whole script.
pub fn parse(src: &str) -> Result<Script, ParseError> {
    let tokens = lex(src)?;
    Parser { tokens, pos: 0 }.parse_script()
}

/// Parse a single expression (the REPL uses this for bare expressions).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.parse_expr()?;
    if p.peek().0 != Token::End {
        return Err(p.error("end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_small_script() {
        let script = parse(
            "let x = cone(rotsphere(4));\n\
             let y = quotient(x, <2>);\n\
             print depth(y); # trailing comment\n\
             emit dot y;\n",
        )
        .unwrap();
        assert_eq!(script.stmts.len(), 4);
        assert_eq!(script.stmts[0].to_string(), "let x = cone(rotsphere(4));");
        assert_eq!(script.stmts[1].to_string(), "let y = quotient(x, <2>);");
        assert_eq!(script.stmts[2].to_string(), "print depth(y);");
        assert_eq!(script.stmts[3].to_string(), "emit dot y;");
    }

    #[test]
    fn subgroup_literals_accept_tuples() {
        let e = parse_expr("quotient(x, <(1,0), (0,2)>)").unwrap();
        match e.kind {
            ExprKind::Call { name, args } => {
                assert_eq!(name, "quotient");
                assert_eq!(
                    args[1].kind,
                    ExprKind::Subgroup(vec![vec![1, 0], vec![0, 2]])
                );
            }
            _ => panic!("expected a call"),
        }
        assert!(parse_expr("quotient(x, <>)").is_ok());
    }

    #[test]
    fn reports_positions_and_expectations() {
        let e = parse("let x = circle(0);").unwrap_err();
        assert_eq!((e.span.line, e.span.col), (1, 16));
        assert!(e.expected.contains("at least 1"), "{e}");

        let e = parse("print depth(3);").unwrap_err();
        assert!(e.expected.contains("space expression"), "{e}");

        let e = parse("let x = cone(circle(2), circle(3));").unwrap_err();
        assert!(e.expected.contains("1 argument"), "{e}");

        let e = parse("let x = banana(2);").unwrap_err();
        assert!(e.expected.contains("known operation"), "{e}");
        assert_eq!((e.span.line, e.span.col), (1, 9));

        let e = parse("let cone = circle(2);").unwrap_err();
        assert!(e.expected.contains("fresh name"), "{e}");

        let e = parse("emit svg x;").unwrap_err();
        assert!(e.expected.contains("output format"), "{e}");

        let e = parse("let x circle(2);").unwrap_err();
        assert_eq!(e.expected, "`=`");
        assert_eq!((e.span.line, e.span.col), (1, 7));
    }

    #[test]
    fn printing_then_reparsing_is_the_identity() {
        let src = "let a = product(euclidean(2), cone(circle(6)));\n\
                   let b = quotient(a, <3>);\n\
                   print iso(a, b);\n\
                   print validate(unfold_all(b));\n\
                   emit json b;\n";
        let script = parse(src).unwrap();
        let printed = script.to_string();
        let reparsed = parse(&printed).unwrap();
        assert_eq!(script, reparsed);
        assert_eq!(printed, parse(&printed).unwrap().to_string());
    }
}
