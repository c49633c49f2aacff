//! Style-independent documentation tree: detect, parse, canonicalize and
//! render docstrings across reST, Google, NumPy and Javadoc styles.
//!
//! Parsing is total: anything the section grammars do not consume survives
//! verbatim in `Description`/`Opaque` blocks.

mod parse;
mod render;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use parse::{detect_style, parse_docstring, StyleScores};
pub use render::render_docstring;

/// A docstring surface syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Rest,
    Google,
    Numpy,
    Javadoc,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Style::Rest => write!(f, "rest"),
            Style::Google => write!(f, "google"),
            Style::Numpy => write!(f, "numpy"),
            Style::Javadoc => write!(f, "javadoc"),
        }
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rest" => Ok(Style::Rest),
            "google" => Ok(Style::Google),
            "numpy" => Ok(Style::Numpy),
            "javadoc" => Ok(Style::Javadoc),
            other => Err(format!("unknown style: {other:?}")),
        }
    }
}

/// One documented parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocParam {
    pub name: String,
    pub type_text: Option<String>,
    pub desc: String,
}

/// One documented raised exception.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaiseItem {
    pub type_text: String,
    pub desc: String,
}

/// A documentation block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// Single logical line; always the first block when present.
    Summary(String),
    Description(String),
    Params(Vec<DocParam>),
    Returns {
        type_text: Option<String>,
        desc: String,
    },
    Raises(Vec<RaiseItem>),
    /// Unrecognized content, preserved verbatim.
    Opaque(String),
}

/// Style-independent documentation tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocAst {
    pub blocks: Vec<Block>,
    pub style_detected: Option<Style>,
}

impl DocAst {
    pub fn summary(&self) -> Option<&str> {
        self.blocks.iter().find_map(|b| match b {
            Block::Summary(s) => Some(s.as_str()),
            _ => None,
        })
    }

    pub fn params(&self) -> impl Iterator<Item = &DocParam> {
        self.blocks.iter().flat_map(|b| match b {
            Block::Params(items) => items.as_slice(),
            _ => &[],
        })
    }

    pub fn returns(&self) -> Option<(&Option<String>, &str)> {
        self.blocks.iter().find_map(|b| match b {
            Block::Returns { type_text, desc } => Some((type_text, desc.as_str())),
            _ => None,
        })
    }

    pub fn raises(&self) -> impl Iterator<Item = &RaiseItem> {
        self.blocks.iter().flat_map(|b| match b {
            Block::Raises(items) => items.as_slice(),
            _ => &[],
        })
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Equality under canonicalization, ignoring the detected style.
    pub fn canonical_eq(&self, other: &DocAst) -> bool {
        canonicalize(self.clone()).blocks == canonicalize(other.clone()).blocks
    }
}

fn tidy_text(text: &str) -> String {
    let mut out: Vec<&str> = Vec::new();
    let mut blank_run = 0;
    for line in text.lines() {
        let line = line.trim_end();
        if line.is_empty() {
            blank_run += 1;
            if blank_run == 1 {
                out.push("");
            }
        } else {
            blank_run = 0;
            out.push(line);
        }
    }
    while out.last() == Some(&"") {
        out.pop();
    }
    while out.first() == Some(&"") {
        out.remove(0);
    }
    out.join("\n")
}

/// Canonical form: trailing whitespace trimmed, blank-line runs collapsed,
/// duplicate sections merged in item order, empty blocks dropped, blocks in
/// canonical order (summary, description, params, returns, raises, opaque).
pub fn canonicalize(ast: DocAst) -> DocAst {
    let mut summary: Option<String> = None;
    let mut descriptions: Vec<String> = Vec::new();
    let mut params: Vec<DocParam> = Vec::new();
    let mut returns: Option<(Option<String>, String)> = None;
    let mut raises: Vec<RaiseItem> = Vec::new();
    let mut opaques: Vec<String> = Vec::new();

    for block in ast.blocks {
        match block {
            Block::Summary(s) => {
                let s = s.trim().to_string();
                if !s.is_empty() && summary.is_none() {
                    summary = Some(s);
                }
            }
            Block::Description(text) => {
                let text = tidy_text(&text);
                if !text.is_empty() {
                    descriptions.push(text);
                }
            }
            Block::Params(items) => {
                for item in items {
                    params.push(DocParam {
                        name: item.name.trim().to_string(),
                        type_text: item
                            .type_text
                            .map(|t| t.trim().to_string())
                            .filter(|t| !t.is_empty()),
                        desc: item.desc.trim().to_string(),
                    });
                }
            }
            Block::Returns { type_text, desc } => {
                let type_text = type_text.map(|t| t.trim().to_string()).filter(|t| !t.is_empty());
                let desc = tidy_text(&desc);
                match &mut returns {
                    None => returns = Some((type_text, desc)),
                    Some((ty, d)) => {
                        if ty.is_none() {
                            *ty = type_text;
                        }
                        if !desc.is_empty() {
                            if d.is_empty() {
                                *d = desc;
                            } else {
                                d.push('\n');
                                d.push_str(&desc);
                            }
                        }
                    }
                }
            }
            Block::Raises(items) => {
                for item in items {
                    raises.push(RaiseItem {
                        type_text: item.type_text.trim().to_string(),
                        desc: item.desc.trim().to_string(),
                    });
                }
            }
            Block::Opaque(text) => {
                let text = tidy_text(&text);
                if !text.is_empty() {
                    opaques.push(text);
                }
            }
        }
    }

    let mut blocks = Vec::new();
    if let Some(s) = summary {
        blocks.push(Block::Summary(s));
    }
    if !descriptions.is_empty() {
        blocks.push(Block::Description(descriptions.join("\n\n")));
    }
    if !params.is_empty() {
        blocks.push(Block::Params(params));
    }
    if let Some((type_text, desc)) = returns {
        if type_text.is_some() || !desc.is_empty() {
            blocks.push(Block::Returns { type_text, desc });
        }
    }
    if !raises.is_empty() {
        blocks.push(Block::Raises(raises));
    }
    if !opaques.is_empty() {
        blocks.push(Block::Opaque(opaques.join("\n\n")));
    }

    DocAst {
        blocks,
        style_detected: ast.style_detected,
    }
}

#[cfg(test)]
mod tests;
