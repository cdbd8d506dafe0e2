//! Output formats: Graphviz DOT and a JSON document.
//!
//! The DOT rendering shows the face order of the top space as a Hasse
//! diagram (edges point upward from smaller to larger strata) and nests each
//! link inside a dashed cluster hanging off its owner.
//!
//! The JSON document is `{ "expr": ..., "skeleton": ... }` where `expr` is
//! present only for realized spaces. Reading a document back re-realizes the
//! expression when there is one, so emitting again reproduces the bytes
//! exactly.

use crate::ast::EmitFormat;
use crate::eval::SpaceValue;
use stratifold::model::{self, SpaceExpr};
use stratifold::strat::StratSpace;

pub fn render(format: EmitFormat, value: &SpaceValue) -> String {
    match format {
        EmitFormat::Dot => to_dot(value),
        EmitFormat::Json => to_json(value),
    }
}

// --- DOT --------------------------------------------------------------------

pub fn to_dot(value: &SpaceValue) -> String {
    let mut out = String::new();
    out.push_str("digraph strat {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  compound=true;\n");
    out.push_str("  node [shape=record];\n");
    if let Some(r) = value.realized() {
        out.push_str(&format!("  label=\"{}\";\n", r.expr));
    }
    let mut clusters = 0;
    dot_space(&mut out, value.skeleton(), "", 1, &mut clusters);
    out.push_str("}\n");
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn dot_space(out: &mut String, x: &StratSpace, prefix: &str, level: usize, clusters: &mut u32) {
    for (id, s) in &x.strata {
        indent(out, level);
        out.push_str(&format!(
            "\"{prefix}{id}\" [label=\"{{{id}|dim {}|{}}}\"];\n",
            s.dim, s.isotropy
        ));
    }
    for (a, b) in x.covers() {
        indent(out, level);
        out.push_str(&format!("\"{prefix}{a}\" -> \"{prefix}{b}\";\n"));
    }
    for (id, s) in &x.strata {
        let Some(link) = &s.link else { continue };
        let cluster = *clusters;
        *clusters += 1;
        indent(out, level);
        out.push_str(&format!("subgraph cluster_{cluster} {{\n"));
        indent(out, level + 1);
        out.push_str(&format!("label=\"link of {id}\";\n"));
        indent(out, level + 1);
        out.push_str("style=dashed;\n");
        let inner_prefix = format!("{prefix}{id}/");
        dot_space(out, &link.space, &inner_prefix, level + 1, clusters);
        indent(out, level);
        out.push_str("}\n");
        if let Some((first, _)) = link.space.strata.iter().next() {
            indent(out, level);
            out.push_str(&format!(
                "\"{prefix}{id}\" -> \"{inner_prefix}{first}\" \
                 [style=dashed, lhead=\"cluster_{cluster}\"];\n"
            ));
        }
    }
}

// --- JSON -------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
pub struct SpaceDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<SpaceExpr>,
    pub skeleton: StratSpace,
}

pub fn to_json(value: &SpaceValue) -> String {
    let doc = SpaceDocument {
        expr: value.realized().map(|r| r.expr.clone()),
        skeleton: value.skeleton().clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("space documents serialize");
    s.push('\n');
    s
}

#[derive(Debug)]
pub enum ReadError {
    Json(serde_json::Error),
    Realize(model::ModelError),
    /// The document's skeleton does not match its expression.
    Inconsistent,
}

impl std::fmt::Display for ReadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReadError::Json(e) => write!(f, "malformed document: {e}"),
            ReadError::Realize(e) => write!(f, "unbuildable expression: {e}"),
            ReadError::Inconsistent => write!(f, "skeleton does not match expression"),
        }
    }
}

impl std::error::Error for ReadError {}

pub fn read_json(s: &str) -> Result<SpaceValue, ReadError> {
    let doc: SpaceDocument = serde_json::from_str(s).map_err(ReadError::Json)?;
    match doc.expr {
        Some(expr) => {
            let r = model::realize(&expr).map_err(ReadError::Realize)?;
            if r.skeleton != doc.skeleton {
                return Err(ReadError::Inconsistent);
            }
            Ok(SpaceValue::Realized(r))
        }
        None => Ok(SpaceValue::Skeleton(doc.skeleton)),
    }
}
