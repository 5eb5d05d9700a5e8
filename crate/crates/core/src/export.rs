//! LaTeX, monospaced text and frame-sequence exports. All of them work
//! from [`RenderedProof`] rows, the same view the session protocol serves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::proof::{RenderedProof, Row};
use crate::session::{replay, ProofDocument, ReplayError};

fn latex_justification(row: &Row) -> String {
    match &row.justification {
        None => String::new(),
        Some(j) if j.refs.is_empty() => format!("\\rulename{{{}}}", j.rule),
        Some(j) => format!("{},\\rulename{{{}}}", j.refs, j.rule),
    }
}

/// An `ndproof` environment with one `\ndline` per row, for use with the
/// bundled `ndproof.sty`.
pub fn export_latex(proof: &RenderedProof) -> String {
    let mut out = String::from("\\begin{ndproof}\n");
    for row in &proof.rows {
        let edge = if row.box_opens {
            "open"
        } else if row.box_closes > 0 {
            "close"
        } else {
            "none"
        };
        out.push_str(&format!(
            "\\ndline{{{}}}{{{}}}{{{}}}{{{}}}{{{}}}\n",
            row.depth,
            edge,
            row.creation,
            row.formula_latex,
            latex_justification(row)
        ));
    }
    out.push_str("\\end{ndproof}\n");
    out
}

fn rule_prefix(depth: usize) -> String {
    "│ ".repeat(depth)
}

/// Monospaced rendering. Each open box adds a `│ ` column; an assumption
/// row draws `┌─` in place of its innermost column, and a `├────` rule
/// follows the last row of every box.
pub fn export_unicode(proof: &RenderedProof) -> String {
    let width = proof.rows.iter().map(|r| r.formula.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for row in &proof.rows {
        let scope = if row.box_opens {
            format!("{}┌─", rule_prefix(row.depth.saturating_sub(1)))
        } else {
            rule_prefix(row.depth)
        };
        let pad = width - row.formula.chars().count();
        let line = format!(
            "{scope}{}. {}{} {}",
            row.creation,
            row.formula,
            " ".repeat(pad),
            row.justification_text()
        );
        out.push_str(line.trim_end());
        out.push('\n');
        for k in 0..row.box_closes {
            out.push_str(&rule_prefix(row.depth.saturating_sub(1 + k)));
            out.push_str("├────\n");
        }
    }
    out
}

/// Rendered states after each prefix of the event log, from the bare
/// problem to the full log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSequence {
    pub frames: Vec<RenderedProof>,
}

pub fn export_frames(doc: &ProofDocument) -> Result<FrameSequence, ReplayError> {
    let frames = (0..=doc.events.len()).map(|k| replay(doc, k).map(|st| st.render())).collect::<Result<_, _>>()?;
    Ok(FrameSequence { frames })
}
