//! Script evaluation.
//!
//! Spaces built from `euclidean`/`circle`/`rotsphere` (and `cone`, `product`,
//! `quotient` of such) carry a numeric realization, so `validate` can run the
//! tube-system check on them. `unfold` and `unfold_all` return bare
//! skeletons: the unfolded space is a new space, not a region of the old one,
//! and it has no canonical coordinates. Downstream operations fall back to
//! the combinatorial constructions on skeletons where they can.

use crate::ast::{EmitFormat, Expr, ExprKind, Script, Span, Stmt, StmtKind};
use stratifold::abelian::{FiniteAbelianGroup, GroupElement, Subgroup};
use stratifold::model::{self, RealizedSpace, SpaceExpr, TubeReport};
use stratifold::strat::{self, SpaceIso, StratSpace, ValidationReport};
use stratifold::unfold;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScriptError {
    pub span: Span,
    pub message: String,
}

impl std::fmt::Display for ScriptError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ScriptError {}

fn fail(span: Span, message: impl std::fmt::Display) -> ScriptError {
    ScriptError { span, message: message.to_string() }
}

/// A space value: either fully realized or a bare skeleton.
#[derive(Clone, Debug)]
pub enum SpaceValue {
    Realized(RealizedSpace),
    Skeleton(StratSpace),
}

impl SpaceValue {
    pub fn skeleton(&self) -> &StratSpace {
        match self {
            SpaceValue::Realized(r) => &r.skeleton,
            SpaceValue::Skeleton(s) => s,
        }
    }

    pub fn realized(&self) -> Option<&RealizedSpace> {
        match self {
            SpaceValue::Realized(r) => Some(r),
            SpaceValue::Skeleton(_) => None,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.skeleton().group()
    }
}

impl std::fmt::Display for SpaceValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceValue::Realized(r) => write!(f, "{}", r.expr)?,
            SpaceValue::Skeleton(_) => write!(f, "skeleton")?,
        }
        let x = self.skeleton();
        write!(
            f,
            ": depth {}, {} strata, group {}, {}",
            x.depth(),
            x.strata.len(),
            x.group(),
            if x.compact { "compact" } else { "non-compact" }
        )
    }
}

/// Combined structural and (when available) tube-system validation.
#[derive(Clone, Debug)]
pub struct ValidationOutcome {
    pub structural: ValidationReport,
    pub tubes: Option<TubeReport>,
}

impl ValidationOutcome {
    pub fn is_valid(&self) -> bool {
        self.structural.is_valid() && self.tubes.as_ref().map_or(true, |t| t.is_valid())
    }
}

impl std::fmt::Display for ValidationOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.tubes, self.is_valid()) {
            (None, true) => write!(f, "valid"),
            (Some(t), true) => write!(f, "valid; {t}"),
            (None, false) => write!(f, "invalid:\n{}", self.structural),
            (Some(t), false) => {
                if self.structural.is_valid() {
                    write!(f, "invalid; {t}")
                } else {
                    write!(f, "invalid:\n{}\n{t}", self.structural)
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Space(SpaceValue),
    Depth(u32),
    Validation(ValidationOutcome),
    Iso(Option<SpaceIso>),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Space(v) => write!(f, "{v}"),
            Value::Depth(d) => write!(f, "{d}"),
            Value::Validation(v) => write!(f, "{v}"),
            Value::Iso(Some(w)) => {
                write!(f, "isomorphic:")?;
                for (i, (a, b)) in w.strata.iter().enumerate() {
                    let sep = if i == 0 { "" } else { "," };
                    write!(f, "{sep} {a} -> {b}")?;
                }
                Ok(())
            }
            Value::Iso(None) => write!(f, "not isomorphic"),
        }
    }
}

/// Evaluation environment: bindings plus the sampling budget for tube checks.
#[derive(Debug)]
pub struct Env {
    vars: Vec<(String, SpaceValue)>,
    pub samples: u64,
    pub seed: u64,
}

impl Env {
    pub fn new(samples: u64, seed: u64) -> Self {
        Env { vars: Vec::new(), samples, seed }
    }

    pub fn get(&self, name: &str) -> Option<&SpaceValue> {
        self.vars.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Bindings in definition order.
    pub fn bindings(&self) -> impl Iterator<Item = (&str, &SpaceValue)> {
        self.vars.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn last_binding(&self) -> Option<(&str, &SpaceValue)> {
        self.vars.last().map(|(n, v)| (n.as_str(), v))
    }
}

/// What a statement asks the driver to do with its result.
#[derive(Clone, Debug)]
pub enum StmtEffect {
    None,
    Print(String),
    Emit { format: EmitFormat, value: SpaceValue },
}

pub fn eval_stmt(env: &mut Env, stmt: &Stmt) -> Result<StmtEffect, ScriptError> {
    match &stmt.kind {
        StmtKind::Let { name, value } => {
            if env.get(name).is_some() {
                return Err(fail(stmt.span, format!("`{name}` is already bound")));
            }
            let v = eval_space(env, value)?;
            env.vars.push((name.clone(), v));
            Ok(StmtEffect::None)
        }
        StmtKind::Print { value } => {
            let v = eval_expr(env, value)?;
            Ok(StmtEffect::Print(v.to_string()))
        }
        StmtKind::Emit { format, value } => {
            let v = eval_space(env, value)?;
            Ok(StmtEffect::Emit { format: *format, value: v })
        }
    }
}

pub fn eval_script(env: &mut Env, script: &Script) -> Result<Vec<StmtEffect>, ScriptError> {
    script.stmts.iter().map(|s| eval_stmt(env, s)).collect()
}

fn eval_space(env: &mut Env, expr: &Expr) -> Result<SpaceValue, ScriptError> {
    match eval_expr(env, expr)? {
        Value::Space(v) => Ok(v),
        _ => Err(fail(expr.span, "expected a space")),
    }
}

pub fn eval_expr(env: &mut Env, expr: &Expr) -> Result<Value, ScriptError> {
    let span = expr.span;
    match &expr.kind {
        ExprKind::Ident(name) => match env.get(name) {
            Some(v) => Ok(Value::Space(v.clone())),
            None => Err(fail(span, format!("`{name}` is not bound"))),
        },
        ExprKind::Int(_) | ExprKind::Subgroup(_) => {
            // The parser only lets these appear as operation arguments,
            // which are consumed below without coming back through here.
            Err(fail(span, "a literal is not a value"))
        }
        ExprKind::Call { name, args } => eval_call(env, name, args, span),
    }
}

fn int_arg(e: &Expr) -> u64 {
    match e.kind {
        ExprKind::Int(n) => n,
        _ => unreachable!("the parser checks numeric arguments"),
    }
}

fn realize_at(expr: SpaceExpr, span: Span) -> Result<Value, ScriptError> {
    let r = model::realize(&expr).map_err(|e| fail(span, e))?;
    Ok(Value::Space(SpaceValue::Realized(r)))
}

fn eval_call(env: &mut Env, name: &str, args: &[Expr], span: Span) -> Result<Value, ScriptError> {
    match name {
        "euclidean" => {
            let k = u32::try_from(int_arg(&args[0]))
                .map_err(|_| fail(args[0].span, "dimension too large"))?;
            realize_at(SpaceExpr::Euclidean(k), span)
        }
        "circle" => realize_at(SpaceExpr::Circle(int_arg(&args[0])), span),
        "rotsphere" => realize_at(SpaceExpr::RotSphere(int_arg(&args[0])), span),
        "cone" => match eval_space(env, &args[0])? {
            SpaceValue::Realized(r) => realize_at(SpaceExpr::Cone(Box::new(r.expr)), span),
            SpaceValue::Skeleton(s) => {
                let c = strat::cone(&s).map_err(|e| fail(span, e))?;
                Ok(Value::Space(SpaceValue::Skeleton(c)))
            }
        },
        "product" => {
            let a = eval_space(env, &args[0])?;
            let b = eval_space(env, &args[1])?;
            match (a, b) {
                (SpaceValue::Realized(ra), SpaceValue::Realized(rb)) => {
                    realize_at(SpaceExpr::Product(vec![ra.expr, rb.expr]), span)
                }
                (SpaceValue::Realized(flat), SpaceValue::Skeleton(s))
                | (SpaceValue::Skeleton(s), SpaceValue::Realized(flat)) => {
                    let Some(k) = model::euclidean_dim(&flat.expr) else {
                        return Err(fail(
                            span,
                            "the realized factor of a mixed product must be euclidean",
                        ));
                    };
                    Ok(Value::Space(SpaceValue::Skeleton(strat::product(k, &s))))
                }
                (SpaceValue::Skeleton(_), SpaceValue::Skeleton(_)) => Err(fail(
                    span,
                    "a product of two unfolded spaces is not supported; \
                     one factor must be euclidean",
                )),
            }
        }
        "quotient" => {
            let v = eval_space(env, &args[0])?;
            let sub = subgroup_arg(v.group(), &args[1])?;
            match v {
                SpaceValue::Realized(r) => {
                    let o = r.orbit(&sub).map_err(|e| fail(span, e))?;
                    Ok(Value::Space(SpaceValue::Realized(o)))
                }
                SpaceValue::Skeleton(s) => {
                    let (o, _) = strat::orbit_space(&s, &sub).map_err(|e| fail(span, e))?;
                    Ok(Value::Space(SpaceValue::Skeleton(o)))
                }
            }
        }
        "unfold" => {
            let v = eval_space(env, &args[0])?;
            let step = unfold::elementary_unfold(v.skeleton());
            Ok(Value::Space(SpaceValue::Skeleton(step.result)))
        }
        "unfold_all" => {
            let v = eval_space(env, &args[0])?;
            let chain = unfold::unfold_all(v.skeleton());
            Ok(Value::Space(SpaceValue::Skeleton(chain.final_space().clone())))
        }
        "depth" => {
            let v = eval_space(env, &args[0])?;
            Ok(Value::Depth(v.skeleton().depth()))
        }
        "validate" => {
            let v = eval_space(env, &args[0])?;
            let structural = v.skeleton().validate();
            let tubes = v
                .realized()
                .map(|r| r.thom_mather_check(env.samples, env.seed));
            Ok(Value::Validation(ValidationOutcome { structural, tubes }))
        }
        "iso" => {
            let a = eval_space(env, &args[0])?;
            let b = eval_space(env, &args[1])?;
            Ok(Value::Iso(strat::is_isomorphic(a.skeleton(), b.skeleton())))
        }
        _ => unreachable!("the parser rejects unknown operations"),
    }
}

fn subgroup_arg(group: &FiniteAbelianGroup, arg: &Expr) -> Result<Subgroup, ScriptError> {
    let ExprKind::Subgroup(gens) = &arg.kind else {
        unreachable!("the parser checks subgroup arguments");
    };
    let elements: Vec<GroupElement> = gens
        .iter()
        .map(|residues| {
            group.element(residues).map_err(|e| {
                fail(
                    arg.span,
                    format!("subgroup literal does not fit the group {group}: {e}"),
                )
            })
        })
        .collect::<Result<_, _>>()?;
    Subgroup::closure(group, &elements).map_err(|e| fail(arg.span, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn run(src: &str) -> Result<(Env, Vec<StmtEffect>), ScriptError> {
        let script = parse(src).expect("test scripts parse");
        let mut env = Env::new(64, 0);
        let effects = eval_script(&mut env, &script)?;
        Ok((env, effects))
    }

    fn printed(effects: &[StmtEffect]) -> Vec<String> {
        effects
            .iter()
            .filter_map(|e| match e {
                StmtEffect::Print(s) => Some(s.clone()),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn builds_and_queries_a_realized_space() {
        let (env, effects) = run(
            "let x = cone(rotsphere(4));\n\
             print x;\n\
             print depth(x);\n\
             print validate(x);\n",
        )
        .unwrap();
        assert_eq!(
            printed(&effects),
            vec![
                "cone(rotsphere(4)): depth 2, 4 strata, group Z4, non-compact",
                "2",
                "valid; tube system consistent over 64 samples",
            ]
        );
        assert!(env.get("x").unwrap().realized().is_some());
    }

    #[test]
    fn quotient_acts_on_realizations_and_skeletons() {
        let (env, effects) = run(
            "let x = cone(circle(4));\n\
             let y = quotient(x, <2>);\n\
             let z = quotient(unfold(x), <2>);\n\
             print y;\n\
             print depth(z);\n",
        )
        .unwrap();
        assert_eq!(
            printed(&effects),
            vec!["cone(circle(2)): depth 1, 2 strata, group Z2, non-compact", "0"]
        );
        assert!(env.get("y").unwrap().realized().is_some());
        assert!(env.get("z").unwrap().realized().is_none());
    }

    #[test]
    fn unfolding_drops_to_a_skeleton_value() {
        let (_, effects) = run(
            "let x = cone(rotsphere(3));\n\
             print unfold(x);\n\
             print depth(unfold_all(x));\n\
             print validate(unfold(x));\n",
        )
        .unwrap();
        let lines = printed(&effects);
        assert_eq!(lines[0], "skeleton: depth 1, 3 strata, group Z3, non-compact");
        assert_eq!(lines[1], "0");
        assert_eq!(lines[2], "valid");
    }

    #[test]
    fn iso_compares_spaces_and_reports_the_witness() {
        let (_, effects) = run(
            "let a = quotient(rotsphere(4), <2>);\n\
             let b = rotsphere(2);\n\
             let c = rotsphere(3);\n\
             print iso(a, b);\n\
             print iso(b, c);\n",
        )
        .unwrap();
        assert_eq!(
            printed(&effects),
            vec!["isomorphic: N -> N, S -> S, T' -> T'", "not isomorphic"]
        );
    }

    #[test]
    fn mixed_products_keep_the_flat_factor() {
        let (_, effects) = run(
            "let x = product(euclidean(2), unfold(cone(rotsphere(2))));\n\
             print x;\n\
             print depth(x);\n",
        )
        .unwrap();
        assert_eq!(
            printed(&effects),
            vec!["skeleton: depth 1, 3 strata, group Z2, non-compact", "1"]
        );
    }

    #[test]
    fn error_positions_point_at_the_offence() {
        let e = run("print depth(x);").unwrap_err();
        assert_eq!((e.span.line, e.span.col), (1, 13));
        assert!(e.message.contains("not bound"));

        let e = run("let x = circle(4);\nlet x = circle(5);").unwrap_err();
        assert_eq!(e.span.line, 2);
        assert!(e.message.contains("already bound"));

        let e = run("let x = quotient(circle(4), <(1,1)>);").unwrap_err();
        assert!(e.message.contains("does not fit"), "{e}");

        let e = run("let x = quotient(circle(4), <7>);").unwrap_err();
        assert!(e.message.contains("does not fit"), "{e}");

        // Unfolding keeps the compactness flag, so the unfolded open cone is
        // still not a legal cone base.
        let e = run("let u = unfold(cone(circle(2)));\nlet c = cone(u);").unwrap_err();
        assert_eq!(e.span.line, 2);
    }
}
