//! JSDoc-family adapter: doc blocks `/** ... */` immediately preceding a
//! declaration (JavaScript, TypeScript, Java at the doc-block level).
//!
//! Declarations recognized: `function` declarations, `class`/`interface`
//! declarations, methods inside class bodies (including Java-style headers),
//! and module-level `const/let/var name = ...` function bindings.

use super::{
    CodeEntity, DocSlot, EntityFacts, EntityKind, Param, ParamKind, Signature,
    SignatureParseError, SourceError, Span,
};

#[derive(Debug, Clone, Copy)]
struct DocBlock {
    start: usize,
    end: usize,
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$' || b >= 0x80
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b == b'$' || b >= 0x80
}

/// Blank strings and comments, preserving byte length and newlines.
pub(crate) fn blank(text: &str) -> String {
    match scan_js(text, false) {
        Ok((blanked, _)) => blanked,
        Err(_) => text.to_string(),
    }
}

/// Produce a blanked copy (strings -> `0` placeholder, comments -> spaces)
/// plus the spans of `/** ... */` doc blocks.
fn scan_js(text: &str, strict: bool) -> Result<(String, Vec<DocBlock>), (usize, String)> {
    let src = text.as_bytes();
    let mut out = src.to_vec();
    let mut blocks = Vec::new();
    let n = src.len();
    let mut i = 0;

    let blank_range = |out: &mut [u8], lo: usize, hi: usize, placeholder: bool| {
        for k in lo..hi.min(out.len()) {
            if out[k] != b'\n' && out[k] != b'\r' {
                out[k] = b' ';
            }
        }
        if placeholder && lo < out.len() {
            out[lo] = b'0';
        }
    };

    while i < n {
        match src[i] {
            b'/' if i + 1 < n && src[i + 1] == b'/' => {
                let end = text[i..].find('\n').map(|k| i + k).unwrap_or(n);
                blank_range(&mut out, i, end, false);
                i = end;
            }
            b'/' if i + 1 < n && src[i + 1] == b'*' => {
                let close = text[i + 2..].find("*/").map(|k| i + 2 + k + 2);
                let end = match close {
                    Some(e) => e,
                    None => {
                        if strict {
                            return Err((i, "unterminated block comment".into()));
                        }
                        n
                    }
                };
                let is_doc = i + 2 < n && src[i + 2] == b'*' && end > i + 4;
                if is_doc {
                    blocks.push(DocBlock { start: i, end });
                }
                blank_range(&mut out, i, end, false);
                i = end;
            }
            b'\'' | b'"' => {
                let q = src[i];
                let mut j = i + 1;
                while j < n {
                    match src[j] {
                        b'\\' => j += 2,
                        b'\n' => break,
                        c if c == q => {
                            j += 1;
                            break;
                        }
                        _ => j += 1,
                    }
                }
                blank_range(&mut out, i, j.min(n), true);
                i = j.min(n).max(i + 1);
            }
            b'`' => {
                let end = scan_template(src, i);
                blank_range(&mut out, i, end, true);
                i = end.max(i + 1);
            }
            _ => i += 1,
        }
    }
    Ok((String::from_utf8_lossy(&out).into_owned(), blocks))
}

/// Scan a template literal including `${ ... }` expressions (which may nest
/// strings and further templates). Returns the end offset.
fn scan_template(b: &[u8], start: usize) -> usize {
    #[derive(PartialEq)]
    enum Mode {
        Template,
        Expr(i32),
    }
    let n = b.len();
    let mut stack = vec![Mode::Template];
    let mut i = start + 1;
    while i < n && !stack.is_empty() {
        let top_is_template = matches!(stack.last(), Some(Mode::Template));
        if top_is_template {
            match b[i] {
                b'\\' => i += 2,
                b'`' => {
                    stack.pop();
                    i += 1;
                }
                b'$' if i + 1 < n && b[i + 1] == b'{' => {
                    stack.push(Mode::Expr(0));
                    i += 2;
                }
                _ => i += 1,
            }
        } else {
            match b[i] {
                b'{' => {
                    if let Some(Mode::Expr(d)) = stack.last_mut() {
                        *d += 1;
                    }
                    i += 1;
                }
                b'}' => {
                    match stack.last_mut() {
                        Some(Mode::Expr(0)) => {
                            stack.pop();
                        }
                        Some(Mode::Expr(d)) => *d -= 1,
                        _ => {}
                    }
                    i += 1;
                }
                b'`' => {
                    stack.push(Mode::Template);
                    i += 1;
                }
                b'\'' | b'"' => {
                    let q = b[i];
                    let mut j = i + 1;
                    while j < n {
                        match b[j] {
                            b'\\' => j += 2,
                            b'\n' => break,
                            c if c == q => {
                                j += 1;
                                break;
                            }
                            _ => j += 1,
                        }
                    }
                    i = j.min(n).max(i + 1);
                }
                _ => i += 1,
            }
        }
    }
    i.min(n)
}

const MODIFIERS: &[&str] = &[
    "export", "default", "public", "private", "protected", "static", "final", "abstract",
    "async", "synchronized", "native", "strictfp", "declare", "readonly", "override",
];

const NOT_METHOD_NAMES: &[&str] = &[
    "if", "for", "while", "switch", "catch", "return", "new", "do", "else", "try", "super",
    "this", "typeof", "throw", "void", "delete", "in", "of", "function", "class",
];

struct Decl {
    kw_start: usize,
    kind: EntityKind,
    name: String,
    header_end: usize,
    body: Option<Span>,
    /// Consume the source up to here before matching again.
    resume_at: usize,
}

struct Frame {
    body_depth: i32,
    name: String,
    is_class: bool,
}

pub(crate) fn parse(path: &str, text: &str) -> Result<Vec<CodeEntity>, SourceError> {
    let (blanked, blocks) = scan_js(text, true).map_err(|(off, message)| SourceError::Parse {
        path: path.to_string(),
        line: text[..off].matches('\n').count() + 1,
        message,
    })?;
    let b = blanked.as_bytes();
    let n = b.len();

    let mut entities: Vec<CodeEntity> = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut depth: i32 = 0;
    let mut i = 0;

    while i < n {
        // start of a physical line
        let line_start = i;
        let mut p = i;
        while p < n && (b[p] == b' ' || b[p] == b'\t') {
            p += 1;
        }
        let line_end = blanked[p..].find('\n').map(|k| p + k).unwrap_or(n);

        let in_class = frames
            .last()
            .map(|f| f.is_class && f.body_depth == depth)
            .unwrap_or(false);
        let at_module_level = depth == 0;

        let decl = if p < line_end && b[p] != b'@' {
            match_decl(&blanked, p, in_class, at_module_level)
        } else {
            None
        };

        if let Some(decl) = decl {
            let indent = &text[line_start..p];
            let qualified = {
                let mut parts: Vec<&str> = frames.iter().map(|f| f.name.as_str()).collect();
                parts.push(&decl.name);
                parts.join(".")
            };
            let header_text = text[decl.kw_start..decl.header_end].trim_end().to_string();
            let (signature, signature_degraded) = if decl.kind == EntityKind::Class {
                (Signature::default(), false)
            } else {
                match parse_signature(&header_text) {
                    Ok(mut sig) => {
                        sig.is_method = decl.kind == EntityKind::Method;
                        (sig, false)
                    }
                    Err(_) => (
                        Signature {
                            is_method: decl.kind == EntityKind::Method,
                            ..Signature::default()
                        },
                        true,
                    ),
                }
            };

            // decl block start: scan back over annotation/decorator lines
            let decl_start = annotation_block_start(text, line_start);
            let doc = preceding_doc_block(text, &blocks, decl_start);
            let doc_slot = match doc {
                Some(block) => {
                    let block_line_start = text[..block.start].rfind('\n').map(|k| k + 1).unwrap_or(0);
                    DocSlot::Existing {
                        span: Span::new(block.start, block.end),
                        raw_text: text[block.start + 3..block.end - 2].to_string(),
                        delimiter: "/**".to_string(),
                        indent: text[block_line_start..block.start]
                            .chars()
                            .take_while(|c| *c == ' ' || *c == '\t')
                            .collect(),
                    }
                }
                None => DocSlot::Insertion {
                    offset: decl_start,
                    indent: indent.to_string(),
                },
            };

            let body = decl.body.unwrap_or(Span::new(decl.header_end, decl.header_end));
            entities.push(CodeEntity {
                id: format!("{path}::{qualified}"),
                kind: decl.kind,
                name: decl.name.clone(),
                qualified_name: qualified,
                header_span: Span::new(decl.kw_start, decl.header_end),
                body_span: body,
                body_indent: indent.to_string(),
                signature,
                signature_degraded,
                doc_slot,
                inline_body: false,
                facts: EntityFacts::default(),
                header_text,
            });

            if decl.kind == EntityKind::Class || decl.kind == EntityKind::Function {
                if let Some(body) = decl.body {
                    // walk up to (but not over) the body opening brace, then
                    // enter the frame
                    let open = body.start - 1;
                    depth = advance_depth(b, i, open, depth, &mut frames);
                    frames.push(Frame {
                        body_depth: depth + 1,
                        name: decl.name,
                        is_class: decl.kind == EntityKind::Class,
                    });
                    depth = advance_depth(b, open, body.start, depth, &mut frames);
                    i = body.start;
                    continue;
                }
            }
            if decl.kind == EntityKind::Method {
                if let Some(body) = decl.body {
                    // skip the method body entirely
                    depth = advance_depth(b, i, body.start + 1, depth, &mut frames);
                    depth = advance_depth(b, body.start + 1, body.end + 1, depth, &mut frames);
                    i = body.end + 1;
                    continue;
                }
            }
            depth = advance_depth(b, i, decl.resume_at, depth, &mut frames);
            i = decl.resume_at;
            continue;
        }

        let next = line_end.min(n) + 1;
        depth = advance_depth(b, i, next.min(n), depth, &mut frames);
        i = next;
    }

    entities.sort_by_key(|e| (e.header_span.start, e.header_span.end));
    Ok(entities)
}

/// Update brace depth over `[from, to)`, popping frames that close.
fn advance_depth(b: &[u8], from: usize, to: usize, mut depth: i32, frames: &mut Vec<Frame>) -> i32 {
    for &c in &b[from..to.min(b.len())] {
        match c {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                while frames.last().map(|f| depth < f.body_depth).unwrap_or(false) {
                    frames.pop();
                }
            }
            _ => {}
        }
    }
    depth
}

/// Start offset of the declaration including any preceding annotation /
/// decorator lines (`@Override`, `@Component(...)`).
fn annotation_block_start(text: &str, mut line_start: usize) -> usize {
    loop {
        let prev_end = match text[..line_start].rfind('\n') {
            Some(k) => k,
            None => return line_start,
        };
        let prev_start = text[..prev_end].rfind('\n').map(|k| k + 1).unwrap_or(0);
        let prev = text[prev_start..prev_end].trim();
        if prev.starts_with('@') {
            line_start = prev_start;
        } else {
            return line_start;
        }
    }
}

/// Nearest doc block separated from `decl_start` by whitespace only.
fn preceding_doc_block(text: &str, blocks: &[DocBlock], decl_start: usize) -> Option<DocBlock> {
    let candidate = blocks
        .iter()
        .rev()
        .find(|bl| bl.end <= decl_start)
        .copied()?;
    let gap = &text[candidate.end..decl_start];
    if gap.trim().is_empty() {
        Some(candidate)
    } else {
        None
    }
}

struct Words<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Words<'a> {
    fn new(text: &'a str, pos: usize) -> Self {
        Words { text, pos }
    }

    fn skip_ws(&mut self) {
        let b = self.text.as_bytes();
        while self.pos < b.len() && b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_word(&mut self) -> Option<(&'a str, usize, usize)> {
        self.skip_ws();
        let b = self.text.as_bytes();
        let start = self.pos;
        if start >= b.len() || !is_ident_start(b[start]) {
            return None;
        }
        let mut end = start;
        while end < b.len() && is_ident_char(b[end]) {
            end += 1;
        }
        Some((&self.text[start..end], start, end))
    }

    fn next_char(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.as_bytes().get(self.pos).copied()
    }
}

fn match_decl(blanked: &str, p: usize, in_class: bool, at_module_level: bool) -> Option<Decl> {
    let b = blanked.as_bytes();
    let mut w = Words::new(blanked, p);
    let kw_start = {
        w.skip_ws();
        w.pos
    };

    // skip modifiers (not when directly followed by `(` — that is a method
    // named like a modifier, e.g. `static()`)
    loop {
        let save = w.pos;
        match w.peek_word() {
            Some((word, _, end)) if MODIFIERS.contains(&word) => {
                let mut la = Words::new(blanked, end);
                if la.next_char() == Some(b'(') {
                    w.pos = save;
                    break;
                }
                w.pos = end;
            }
            _ => break,
        }
    }

    let (word, _, word_end) = w.peek_word()?;
    match word {
        "function" => {
            w.pos = word_end;
            if w.next_char() == Some(b'*') {
                w.pos += 1;
            }
            let (name, _, name_end) = w.peek_word()?;
            w.pos = name_end;
            let open = (w.next_char() == Some(b'(')).then_some(w.pos)?;
            let close = match_paren(b, open)?;
            let (header_end, body) = body_after_params(b, close + 1)?;
            Some(Decl {
                kw_start,
                kind: EntityKind::Function,
                name: name.to_string(),
                header_end,
                body,
                resume_at: header_end,
            })
        }
        "class" | "interface" => {
            w.pos = word_end;
            let (name, _, name_end) = w.peek_word()?;
            // `extends` / `implements` clauses run to the body brace
            let open = blanked[name_end..].find('{').map(|k| name_end + k)?;
            if blanked[name_end..open].contains(';') {
                return None;
            }
            let close = match_brace(b, open)?;
            Some(Decl {
                kw_start,
                kind: EntityKind::Class,
                name: name.to_string(),
                header_end: open,
                body: Some(Span::new(open + 1, close)),
                resume_at: open,
            })
        }
        "const" | "let" | "var" if at_module_level => {
            w.pos = word_end;
            let (name, _, name_end) = w.peek_word()?;
            w.pos = name_end;
            if w.next_char() != Some(b'=') {
                return None;
            }
            w.pos += 1;
            match w.peek_word() {
                Some(("async", _, end)) => w.pos = end,
                Some(("function", _, _)) => {}
                _ => {}
            }
            if let Some(("function", _, fend)) = w.peek_word() {
                w.pos = fend;
                if w.next_char() == Some(b'*') {
                    w.pos += 1;
                }
                if let Some((_, _, anon_end)) = w.peek_word() {
                    w.pos = anon_end;
                }
                let open = (w.next_char() == Some(b'(')).then_some(w.pos)?;
                let close = match_paren(b, open)?;
                let (header_end, body) = body_after_params(b, close + 1)?;
                return Some(Decl {
                    kw_start,
                    kind: EntityKind::Function,
                    name: name.to_string(),
                    header_end,
                    body,
                    resume_at: header_end,
                });
            }
            // arrow: `( params ) =>` or `ident =>`
            let arrow_params_end = match w.next_char() {
                Some(b'(') => {
                    let open = w.pos;
                    let close = match_paren(b, open)?;
                    close + 1
                }
                _ => {
                    let (_, _, end) = w.peek_word()?;
                    end
                }
            };
            let mut q = arrow_params_end;
            // optional TS return annotation before the arrow
            if let Some(c) = next_non_ws(b, q) {
                if b[c] == b':' {
                    q = blanked[c..].find("=>").map(|k| c + k)?;
                }
            }
            let arrow = next_non_ws(b, q).filter(|&c| blanked[c..].starts_with("=>"))?;
            let header_end = arrow + 2;
            let body = match next_non_ws(b, header_end) {
                Some(c) if b[c] == b'{' => {
                    let close = match_brace(b, c)?;
                    Some(Span::new(c + 1, close))
                }
                _ => None,
            };
            Some(Decl {
                kw_start,
                kind: EntityKind::Function,
                name: name.to_string(),
                header_end,
                body,
                resume_at: header_end,
            })
        }
        _ if in_class => match_method(blanked, kw_start),
        _ => None,
    }
}

/// Method headers inside a class body: `name(...) {`, `get x() {`,
/// `public int max(int a, int b) throws X {`, `int f();`.
fn match_method(blanked: &str, kw_start: usize) -> Option<Decl> {
    let b = blanked.as_bytes();
    let n = b.len();
    let mut i = kw_start;
    let mut last_ident: Option<(usize, usize)> = None;
    // walk type/modifier tokens until an identifier directly precedes `(`
    loop {
        if i >= n {
            return None;
        }
        match b[i] {
            c if c.is_ascii_whitespace() => i += 1,
            b'@' => {
                // inline annotation: skip word and optional (...)
                i += 1;
                while i < n && is_ident_char(b[i]) {
                    i += 1;
                }
                if let Some(c) = next_non_ws(b, i) {
                    if b[c] == b'(' {
                        i = match_paren(b, c)? + 1;
                    }
                }
            }
            b'<' => {
                i = match_angle(b, i)?;
            }
            b'[' | b']' | b'.' | b'*' => i += 1,
            b'(' => {
                let (ns, ne) = last_ident?;
                // only whitespace may sit between name and `(`
                if blanked[ne..i].chars().any(|c| !c.is_whitespace()) {
                    return None;
                }
                let name = &blanked[ns..ne];
                if NOT_METHOD_NAMES.contains(&name) {
                    return None;
                }
                let close = match_paren(b, i)?;
                let (header_end, body) = body_after_params(b, close + 1)?;
                return Some(Decl {
                    kw_start,
                    kind: EntityKind::Method,
                    name: name.to_string(),
                    header_end,
                    body,
                    resume_at: header_end,
                });
            }
            c if is_ident_start(c) => {
                let s = i;
                while i < n && is_ident_char(b[i]) {
                    i += 1;
                }
                last_ident = Some((s, i));
            }
            _ => return None,
        }
    }
}

/// After the parameter list: skip TS return annotation and Java `throws`
/// clauses, then find the body `{ ... }` or a `;` terminator.
fn body_after_params(b: &[u8], mut i: usize) -> Option<(usize, Option<Span>)> {
    let n = b.len();
    loop {
        let c = next_non_ws(b, i)?;
        match b[c] {
            b'{' => {
                let close = match_brace(b, c)?;
                return Some((c, Some(Span::new(c + 1, close))));
            }
            b';' => return Some((c, None)),
            b':' => {
                // TS return type: scan to body `{` or `;` at depth 0
                let mut j = c + 1;
                let mut angle = 0i32;
                while j < n {
                    match b[j] {
                        b'<' => angle += 1,
                        b'>' => angle = (angle - 1).max(0),
                        b'(' | b'[' => {
                            j = match_paren(b, j)?;
                        }
                        b'{' if angle == 0 => {
                            let close = match_brace(b, j)?;
                            return Some((j, Some(Span::new(j + 1, close))));
                        }
                        b';' if angle == 0 => return Some((j, None)),
                        b'\n' if angle == 0 => {
                            // TS declaration without body
                            return Some((j, None));
                        }
                        _ => {}
                    }
                    j += 1;
                }
                return None;
            }
            _ if b[c].is_ascii_alphabetic() => {
                // `throws A, B` — consume identifiers and commas
                let mut j = c;
                while j < n && (is_ident_char(b[j]) || b[j] == b',' || b[j] == b'.' || b[j].is_ascii_whitespace())
                {
                    j += 1;
                }
                if j == c {
                    return None;
                }
                i = j;
            }
            _ => return None,
        }
    }
}

fn next_non_ws(b: &[u8], mut i: usize) -> Option<usize> {
    while i < b.len() {
        if !b[i].is_ascii_whitespace() {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn match_paren(b: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (off, c) in b[open..].iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + off);
                }
            }
            _ => {}
        }
    }
    None
}

fn match_brace(b: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (off, c) in b[open..].iter().enumerate() {
        match c {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + off);
                }
            }
            _ => {}
        }
    }
    None
}

fn match_angle(b: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (off, c) in b[open..].iter().enumerate() {
        match c {
            b'<' => depth += 1,
            b'>' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + off + 1);
                }
            }
            b'\n' | b';' => return None,
            _ => {}
        }
    }
    None
}

/// Parse a jsdoc-family declaration header into a signature.
pub(crate) fn parse_signature(header_text: &str) -> Result<Signature, SignatureParseError> {
    let text = header_text.trim();
    let b = text.as_bytes();

    let open = match text.find('(') {
        Some(i) => i,
        None => {
            // parenless arrow binding: `const f = x =>`
            if let Some(arrow) = text.find("=>") {
                let param = text[..arrow]
                    .rsplit('=')
                    .next()
                    .unwrap_or("")
                    .trim()
                    .to_string();
                if param.is_empty() {
                    return Err(SignatureParseError("no parameter list".into()));
                }
                return Ok(Signature {
                    params: vec![Param {
                        name: param,
                        kind: ParamKind::Positional,
                        default_text: None,
                        annotation_text: None,
                    }],
                    returns_annotation: None,
                    is_method: false,
                });
            }
            return Err(SignatureParseError("no parameter list".into()));
        }
    };
    let close =
        match_paren(b, open).ok_or_else(|| SignatureParseError("unbalanced parameter list".into()))?;
    let inner = &text[open + 1..close];

    let mut params = Vec::new();
    for piece in split_params(inner) {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let param = parse_param(piece)?;
        if params.iter().any(|p: &Param| p.name == param.name) {
            return Err(SignatureParseError(format!("duplicate parameter: {}", param.name)));
        }
        params.push(param);
    }

    // TS return annotation after the closing paren
    let tail = text[close + 1..].trim();
    let returns_annotation = tail
        .strip_prefix(':')
        .map(|t| t.trim_end_matches(['{', ';']).trim().to_string())
        .filter(|t| !t.is_empty())
        .or_else(|| java_return_type(&text[..open]));

    Ok(Signature {
        params,
        returns_annotation,
        is_method: false,
    })
}

/// Split a parameter list on commas at bracket and angle depth 0.
fn split_params(inner: &str) -> Vec<&str> {
    let b = inner.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut angle = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            b'<' => angle += 1,
            b'>' => {
                if i > 0 && b[i - 1] == b'=' {
                    // arrow, not a closing angle
                } else {
                    angle = (angle - 1).max(0);
                }
            }
            b',' if depth == 0 && angle == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&inner[start..]);
    parts
}

fn parse_param(piece: &str) -> Result<Param, SignatureParseError> {
    let mut rest = piece.trim();
    let mut kind = ParamKind::Positional;

    // strip leading annotations and `final`
    loop {
        if let Some(r) = rest.strip_prefix('@') {
            let end = r
                .find(|c: char| c.is_whitespace() || c == '(')
                .unwrap_or(r.len());
            let mut r2 = &r[end..];
            if r2.trim_start().starts_with('(') {
                let t = r2.trim_start();
                let close = match_paren(t.as_bytes(), 0)
                    .ok_or_else(|| SignatureParseError("bad annotation".into()))?;
                r2 = &t[close + 1..];
            }
            rest = r2.trim_start();
            continue;
        }
        if let Some(r) = rest.strip_prefix("final ") {
            rest = r.trim_start();
            continue;
        }
        break;
    }

    if let Some(r) = rest.strip_prefix("...") {
        kind = ParamKind::VarPositional;
        rest = r.trim_start();
    }
    if rest.contains("...") {
        kind = ParamKind::VarPositional;
        rest = &rest[..rest.find("...").unwrap()];
        // Java varargs: `Type... name` — name follows the dots in the
        // original piece
        let after = piece[piece.find("...").unwrap() + 3..].trim();
        if !after.is_empty() {
            let annotation = rest.trim();
            return Ok(Param {
                name: ident_only(after)?,
                kind,
                default_text: None,
                annotation_text: (!annotation.is_empty()).then(|| annotation.to_string()),
            });
        }
    }

    // default value
    let (head, default_text) = match top_level_eq(rest) {
        Some(i) => (rest[..i].trim_end(), Some(rest[i + 1..].trim().to_string())),
        None => (rest, None),
    };

    // TS `name: type` / `name?: type`
    if let Some(colon) = top_level_colon(head) {
        let name = head[..colon].trim().trim_end_matches('?').trim();
        let annotation = head[colon + 1..].trim();
        return Ok(Param {
            name: ident_only(name)?,
            kind,
            default_text,
            annotation_text: (!annotation.is_empty()).then(|| annotation.to_string()),
        });
    }

    // Java `Type name` / plain `name`
    let tokens: Vec<&str> = head.split_whitespace().collect();
    match tokens.len() {
        0 => Err(SignatureParseError("empty parameter".into())),
        1 => Ok(Param {
            name: ident_only(tokens[0])?,
            kind,
            default_text,
            annotation_text: None,
        }),
        _ => {
            let name = tokens[tokens.len() - 1].trim_end_matches("[]");
            Ok(Param {
                name: ident_only(name)?,
                kind,
                default_text,
                annotation_text: Some(tokens[..tokens.len() - 1].join(" ")),
            })
        }
    }
}

fn ident_only(name: &str) -> Result<String, SignatureParseError> {
    let name = name.trim();
    let ok = !name.is_empty()
        && name.bytes().next().map(is_ident_start).unwrap_or(false)
        && name.bytes().all(is_ident_char);
    if ok {
        Ok(name.to_string())
    } else {
        Err(SignatureParseError(format!("bad parameter name: {name:?}")))
    }
}

fn top_level_eq(text: &str) -> Option<usize> {
    let b = text.as_bytes();
    let mut depth = 0i32;
    for i in 0..b.len() {
        match b[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            b'=' if depth == 0 => {
                // skip ==, =>, <=, >=, !=
                let prev = if i > 0 { b[i - 1] } else { 0 };
                let next = b.get(i + 1).copied().unwrap_or(0);
                if next != b'=' && next != b'>' && prev != b'=' && prev != b'<' && prev != b'>'
                    && prev != b'!'
                {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn top_level_colon(text: &str) -> Option<usize> {
    let b = text.as_bytes();
    let mut depth = 0i32;
    let mut angle = 0i32;
    for i in 0..b.len() {
        match b[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            b'<' => angle += 1,
            b'>' => angle = (angle - 1).max(0),
            b':' if depth == 0 && angle == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// Java-style return type: last non-modifier token before the name.
fn java_return_type(before_paren: &str) -> Option<String> {
    let tokens: Vec<&str> = before_paren.split_whitespace().collect();
    // need at least `Type name`
    if tokens.len() < 2 {
        return None;
    }
    let ty = tokens[tokens.len() - 2];
    if MODIFIERS.contains(&ty) || ty == "void" || ty.starts_with('@') || ty == "function" {
        return None;
    }
    // JS bindings like `const f =` are not java headers
    if ["const", "let", "var", "=", "=>"].contains(&ty) {
        return None;
    }
    Some(ty.to_string())
}
