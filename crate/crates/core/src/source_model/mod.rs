//! Source model: structural parsing of source files into documentable
//! entities with signatures and docstring slots.
//!
//! The parser is a structural scanner (tokenizer plus block tracking), not a
//! full grammar. It skips strings and comments correctly, which is all the
//! pipeline needs: entity headers, signatures, bodies, and docstring slots.

mod jsdoc;
mod python;
mod scan;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Languages with a source adapter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LanguageId {
    Python,
    /// Languages documented with `/** ... */` blocks preceding declarations
    /// (JavaScript, TypeScript, Java at the doc-block level).
    JsdocFamily,
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanguageId::Python => write!(f, "python"),
            LanguageId::JsdocFamily => write!(f, "jsdoc_family"),
        }
    }
}

/// Newline convention of a file, detected at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewlineFlavor {
    Lf,
    CrLf,
}

/// Half-open byte range `[start, end)` into a source unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// A parsed file plus bookkeeping needed to map offsets to lines and to
/// rewrite content without disturbing anything outside doc slots.
#[derive(Debug, Clone)]
pub struct SourceUnit {
    pub path: String,
    pub language: LanguageId,
    /// Immutable after construction; all rewriting produces a new buffer.
    content: Vec<u8>,
    pub newline_flavor: NewlineFlavor,
    /// Ascending byte offsets of line starts; first element is 0.
    pub line_offsets: Vec<usize>,
}

impl SourceUnit {
    pub(crate) fn new(path: &str, language: LanguageId, content: Vec<u8>) -> Self {
        let text = std::str::from_utf8(&content).expect("validated utf-8");
        let newline_flavor = if text.contains("\r\n") {
            NewlineFlavor::CrLf
        } else {
            NewlineFlavor::Lf
        };
        let mut line_offsets = vec![0];
        for (i, b) in content.iter().enumerate() {
            if *b == b'\n' && i + 1 < content.len() {
                line_offsets.push(i + 1);
            }
        }
        SourceUnit {
            path: path.to_string(),
            language,
            content,
            newline_flavor,
            line_offsets,
        }
    }

    pub fn content(&self) -> &[u8] {
        &self.content
    }

    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.content).expect("validated utf-8")
    }

    /// 1-based line number containing `offset`.
    pub fn line_of(&self, offset: usize) -> usize {
        match self.line_offsets.binary_search(&offset) {
            Ok(i) => i + 1,
            Err(i) => i,
        }
    }
}

/// Parameter kind in a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Positional,
    KeywordOnly,
    VarPositional,
    VarKeyword,
}

/// One declared parameter, texts kept verbatim from source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub default_text: Option<String>,
    pub annotation_text: Option<String>,
}

/// Parsed declaration signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub params: Vec<Param>,
    pub returns_annotation: Option<String>,
    /// True for methods; the leading `self`/`cls` param is retained so the
    /// analyzer can exempt it.
    pub is_method: bool,
}

impl Signature {
    /// Params that documentation rules apply to (drops a leading `self`/`cls`
    /// on methods).
    pub fn documentable_params(&self) -> impl Iterator<Item = &Param> {
        let skip = if self.is_method {
            match self.params.first() {
                Some(p) if p.name == "self" || p.name == "cls" => 1,
                _ => 0,
            }
        } else {
            0
        };
        self.params.iter().skip(skip)
    }
}

/// Kind of documentable entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Module,
    Class,
    Function,
    Method,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityKind::Module => write!(f, "module"),
            EntityKind::Class => write!(f, "class"),
            EntityKind::Function => write!(f, "function"),
            EntityKind::Method => write!(f, "method"),
        }
    }
}

/// Where an entity's documentation lives: an existing docstring literal, or
/// the position where one belongs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocSlot {
    Existing {
        /// Entire docstring literal including delimiters.
        span: Span,
        /// Verbatim text between the delimiters. Re-encoding with the
        /// recorded delimiter reproduces the exact bytes of `span`.
        raw_text: String,
        /// Verbatim opening delimiter (`"""`, `r'''`, `/**`, ...).
        delimiter: String,
        /// Leading whitespace of the docstring line.
        indent: String,
    },
    Insertion {
        offset: usize,
        indent: String,
    },
}

impl DocSlot {
    pub fn existing(&self) -> Option<(&Span, &str)> {
        match self {
            DocSlot::Existing { span, raw_text, .. } => Some((span, raw_text)),
            DocSlot::Insertion { .. } => None,
        }
    }

    pub fn indent(&self) -> &str {
        match self {
            DocSlot::Existing { indent, .. } => indent,
            DocSlot::Insertion { indent, .. } => indent,
        }
    }

    /// Reassemble the exact bytes of an existing slot from its parts.
    pub fn reencode(&self) -> Option<String> {
        match self {
            DocSlot::Existing {
                raw_text, delimiter, ..
            } => {
                let closing = if delimiter == "/**" {
                    "*/"
                } else {
                    delimiter.trim_start_matches(|c| "rRbBuUfF".contains(c))
                };
                Some(format!("{delimiter}{raw_text}{closing}"))
            }
            DocSlot::Insertion { .. } => None,
        }
    }
}

/// Body facts gathered by the textual scanners, used by analyzer rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityFacts {
    /// True iff the body returns a value somewhere outside nested entities.
    pub returns_value: bool,
    /// Exception names raised in the body, outside nested entities.
    pub raises: BTreeSet<String>,
}

/// A documentable entity: module, class, function or method.
#[derive(Debug, Clone)]
pub struct CodeEntity {
    /// Stable identifier: `<path>::<qualified_name>`.
    pub id: String,
    pub kind: EntityKind,
    pub name: String,
    /// Nested names joined with "." (no module prefix), e.g. `C.m1.inner`.
    pub qualified_name: String,
    pub header_span: Span,
    pub body_span: Span,
    /// Leading whitespace of the body's first line.
    pub body_indent: String,
    /// Empty for module/class entities.
    pub signature: Signature,
    /// Set when the header could not be parsed into a signature; param rules
    /// are skipped for such entities.
    pub signature_degraded: bool,
    pub doc_slot: DocSlot,
    /// Body shares the header line (`def f(): pass`); such slots cannot take
    /// an insertion without touching bytes outside the slot.
    pub inline_body: bool,
    pub facts: EntityFacts,
    /// Verbatim declaration header text (used for summary requests).
    pub header_text: String,
}

impl CodeEntity {
    /// True when a docstring can be inserted or replaced without touching
    /// bytes outside the doc slot.
    pub fn slot_patchable(&self) -> bool {
        match self.doc_slot {
            DocSlot::Existing { .. } => true,
            DocSlot::Insertion { .. } => !self.inline_body,
        }
    }

    pub fn is_private(&self) -> bool {
        // Dunder names (`__init__`) count as public; single leading
        // underscore marks private, on the entity itself or any ancestor.
        self.qualified_name.split('.').any(|part| {
            part.starts_with('_') && !(part.starts_with("__") && part.ends_with("__") && part.len() > 4)
        })
    }
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{path}: file is not valid UTF-8 at byte {offset}")]
    Encoding { path: String, offset: usize },
    #[error("unsupported language: {0}")]
    UnsupportedLanguage(String),
    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Error)]
#[error("cannot parse signature: {0}")]
pub struct SignatureParseError(pub String);

/// Parse one file into a source unit plus its documentable entities, ordered
/// by header offset.
pub fn parse_source(
    path: &str,
    content: &[u8],
    language: LanguageId,
) -> Result<(SourceUnit, Vec<CodeEntity>), SourceError> {
    let text = std::str::from_utf8(content).map_err(|e| SourceError::Encoding {
        path: path.to_string(),
        offset: e.valid_up_to(),
    })?;
    let unit = SourceUnit::new(path, language, content.to_vec());
    let mut entities = match language {
        LanguageId::Python => python::parse(path, text)?,
        LanguageId::JsdocFamily => jsdoc::parse(path, text)?,
    };
    attach_facts(text, language, &mut entities);
    debug_assert!(entities.windows(2).all(|w| w[0].header_span.start <= w[1].header_span.start));
    Ok((unit, entities))
}

/// Parse a declaration header into a signature. Texts are verbatim.
pub fn parse_signature(header_text: &str, language: LanguageId) -> Result<Signature, SignatureParseError> {
    match language {
        LanguageId::Python => python::parse_signature(header_text),
        LanguageId::JsdocFamily => jsdoc::parse_signature(header_text),
    }
}

/// Names raised by `raise X` / `throw X` statements in `body_text`, outside
/// strings and comments. `body_text` must already exclude nested entity
/// bodies. Best-effort textual scan.
pub fn scan_raises(body_text: &str, language: LanguageId) -> BTreeSet<String> {
    scan::scan_raises(body_text, language)
}

/// True iff the body returns a value (a `return` with a non-empty expression)
/// outside strings and comments. `body_text` must already exclude nested
/// entity bodies.
pub fn scan_returns(body_text: &str, language: LanguageId) -> bool {
    scan::scan_returns(body_text, language)
}

/// Compute body facts per entity, masking nested entity bodies first.
fn attach_facts(text: &str, language: LanguageId, entities: &mut [CodeEntity]) {
    let spans: Vec<(Span, Span)> = entities
        .iter()
        .map(|e| (e.header_span, e.body_span))
        .collect();
    for (i, entity) in entities.iter_mut().enumerate() {
        if entity.kind == EntityKind::Module {
            continue;
        }
        let body = entity.body_span;
        if body.is_empty() || body.end > text.len() {
            continue;
        }
        let mut masked = text[body.start..body.end].as_bytes().to_vec();
        for (j, (hs, bs)) in spans.iter().enumerate() {
            if j == i {
                continue;
            }
            // Nested entity: blank out header and body alike.
            if body.contains(hs) || body.contains(bs) {
                for range in [hs, bs] {
                    let lo = range.start.max(body.start) - body.start;
                    let hi = range.end.min(body.end) - body.start;
                    for b in &mut masked[lo..hi] {
                        if *b != b'\n' && *b != b'\r' {
                            *b = b' ';
                        }
                    }
                }
            }
        }
        let masked = String::from_utf8_lossy(&masked).into_owned();
        entity.facts = EntityFacts {
            returns_value: scan::scan_returns(&masked, language),
            raises: scan::scan_raises(&masked, language),
        };
    }
}

#[cfg(test)]
mod tests;
