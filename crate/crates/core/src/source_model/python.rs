//! Python adapter: indentation-tracking structural scanner.
//!
//! Docstring = string literal as the first statement of a body; insertion
//! point = first body line. Module docstrings go after shebang/encoding
//! comment lines.

use super::{
    CodeEntity, DocSlot, EntityFacts, EntityKind, Param, ParamKind, Signature,
    SignatureParseError, SourceError, Span,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LineKind {
    Code,
    Comment,
}

/// One logical line: a physical line plus any continuations (brackets,
/// backslash, multi-line strings).
#[derive(Debug, Clone)]
pub(crate) struct Logical {
    pub start: usize,
    /// First non-whitespace byte.
    pub code_start: usize,
    /// End of the logical line, excluding the trailing newline.
    pub end: usize,
    pub kind: LineKind,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct StrLit {
    pub start: usize,
    pub content_start: usize,
    pub content_end: usize,
    pub end: usize,
}

const PREFIX_CHARS: &[u8] = b"rRbBuUfF";

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b >= 0x80
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b >= 0x80
}

/// Scan a string literal starting at the quote character `i`.
/// Returns (content_start, content_end, end) or None when unterminated
/// (triple-quoted reaching EOF). Unterminated single-quoted strings
/// resynchronize at end of line.
fn scan_string(b: &[u8], i: usize) -> Option<(usize, usize, usize)> {
    let n = b.len();
    let q = b[i];
    let triple = i + 2 < n && b[i + 1] == q && b[i + 2] == q;
    if triple {
        let mut j = i + 3;
        while j < n {
            if b[j] == b'\\' {
                j += 2;
                continue;
            }
            if b[j] == q && j + 2 < n && b[j + 1] == q && b[j + 2] == q {
                return Some((i + 3, j, j + 3));
            }
            if b[j] == q && j + 2 >= n {
                // closing quotes at the very end of input
                if n - j == 3 && b[n - 1] == q && b[n - 2] == q {
                    return Some((i + 3, j, n));
                }
            }
            j += 1;
        }
        None
    } else {
        let mut j = i + 1;
        while j < n {
            match b[j] {
                b'\\' => j += 2,
                b'\n' => return Some((i + 1, j, j)),
                c if c == q => return Some((i + 1, j, j + 1)),
                _ => j += 1,
            }
        }
        Some((i + 1, n, n))
    }
}

/// Walk back over string-prefix letters before a quote at `q_pos`.
fn prefix_start(b: &[u8], q_pos: usize) -> usize {
    let mut s = q_pos;
    while s > 0 && s >= q_pos.saturating_sub(3) && PREFIX_CHARS.contains(&b[s - 1]) {
        s -= 1;
    }
    if s < q_pos {
        // must not be the tail of a longer identifier
        if s > 0 && is_ident_char(b[s - 1]) {
            return q_pos;
        }
        if q_pos - s > 3 {
            return q_pos;
        }
    }
    s
}

/// Tokenize into logical lines and string literals. With `strict`, an
/// unterminated triple-quoted string is an error at the given offset.
pub(crate) fn scan_lines(
    text: &str,
    strict: bool,
) -> Result<(Vec<Logical>, Vec<StrLit>), (usize, String)> {
    let b = text.as_bytes();
    let n = b.len();
    let mut lines = Vec::new();
    let mut strings = Vec::new();
    let mut i = 0;

    while i < n {
        let start = i;
        let mut j = i;
        while j < n && (b[j] == b' ' || b[j] == b'\t') {
            j += 1;
        }
        // blank line
        if j >= n || b[j] == b'\n' || (b[j] == b'\r' && j + 1 < n && b[j + 1] == b'\n') {
            i = match text[j..].find('\n') {
                Some(k) => j + k + 1,
                None => n,
            };
            continue;
        }
        // comment line
        if b[j] == b'#' {
            let end = match text[j..].find('\n') {
                Some(k) => j + k,
                None => n,
            };
            let mut line_end = end;
            if line_end > start && b[line_end - 1] == b'\r' {
                line_end -= 1;
            }
            lines.push(Logical {
                start,
                code_start: j,
                end: line_end,
                kind: LineKind::Comment,
            });
            i = if end < n { end + 1 } else { n };
            continue;
        }
        // code line: scan to the logical end
        let code_start = j;
        let mut depth: i32 = 0;
        let mut k = j;
        let logical_end;
        loop {
            if k >= n {
                logical_end = n;
                break;
            }
            match b[k] {
                b'#' => {
                    k = match text[k..].find('\n') {
                        Some(p) => k + p,
                        None => n,
                    };
                }
                b'\'' | b'"' => {
                    let ps = prefix_start(b, k);
                    match scan_string(b, k) {
                        Some((cs, ce, e)) => {
                            strings.push(StrLit {
                                start: ps,
                                content_start: cs,
                                content_end: ce,
                                end: e,
                            });
                            k = e;
                        }
                        None => {
                            if strict {
                                return Err((k, "unterminated string literal".into()));
                            }
                            strings.push(StrLit {
                                start: ps,
                                content_start: k + 3,
                                content_end: n,
                                end: n,
                            });
                            k = n;
                        }
                    }
                }
                b'(' | b'[' | b'{' => {
                    depth += 1;
                    k += 1;
                }
                b')' | b']' | b'}' => {
                    depth -= 1;
                    k += 1;
                }
                b'\\' => {
                    // line continuation or stray backslash
                    if k + 1 < n && b[k + 1] == b'\n' {
                        k += 2;
                    } else if k + 2 < n && b[k + 1] == b'\r' && b[k + 2] == b'\n' {
                        k += 3;
                    } else {
                        k += 1;
                    }
                }
                b'\n' => {
                    if depth > 0 {
                        k += 1;
                    } else {
                        logical_end = k;
                        break;
                    }
                }
                _ => k += 1,
            }
        }
        let mut line_end = logical_end;
        if line_end > start && b[line_end - 1] == b'\r' {
            line_end -= 1;
        }
        lines.push(Logical {
            start,
            code_start,
            end: line_end,
            kind: LineKind::Code,
        });
        i = if logical_end < n { logical_end + 1 } else { n };
    }
    Ok((lines, strings))
}

fn indent_width(indent: &str) -> usize {
    let mut w = 0;
    for c in indent.chars() {
        if c == '\t' {
            w = (w / 8 + 1) * 8;
        } else {
            w += 1;
        }
    }
    w
}

/// Find a string literal starting exactly at `pos`.
fn literal_at(strings: &[StrLit], pos: usize) -> Option<StrLit> {
    strings
        .binary_search_by_key(&pos, |s| s.start)
        .ok()
        .map(|i| strings[i])
}

/// True when `[from, to)` holds only whitespace, semicolon-free comments.
fn only_trailing_trivia(text: &str, from: usize, to: usize) -> bool {
    let rest = &text[from..to.min(text.len())];
    let trimmed = rest.trim_start();
    trimmed.is_empty() || trimmed.starts_with('#')
}

struct OpenEntity {
    idx: usize,
    header_indent_w: usize,
    name: String,
    is_class: bool,
    /// Body info still pending (first body line not yet seen).
    awaiting_body: bool,
}

pub(crate) fn parse(path: &str, text: &str) -> Result<Vec<CodeEntity>, SourceError> {
    let (lines, strings) =
        scan_lines(text, true).map_err(|(off, message)| SourceError::Parse {
            path: path.to_string(),
            line: text[..off].matches('\n').count() + 1,
            message,
        })?;

    let mut entities: Vec<CodeEntity> = Vec::new();
    let stem = module_stem(path);
    // A module becomes an entity only when it already carries a docstring;
    // files never grow a brand-new module docstring.
    if let Some(module) = module_entity(path, text, &stem, &lines, &strings) {
        entities.push(module);
    }

    let mut stack: Vec<OpenEntity> = Vec::new();
    let mut last_code_end = 0usize;

    let code_lines: Vec<&Logical> = lines.iter().filter(|l| l.kind == LineKind::Code).collect();
    for line in &code_lines {
        let indent = &text[line.start..line.code_start];
        let w = indent_width(indent);

        // close any entity whose block this line terminates
        while let Some(top) = stack.last() {
            if w <= top.header_indent_w {
                let frame = stack.pop().unwrap();
                close_frame(&mut entities, frame, last_code_end);
            } else {
                break;
            }
        }

        // first body line of the innermost open entity
        if let Some(top) = stack.last_mut() {
            if top.awaiting_body {
                top.awaiting_body = false;
                let idx = top.idx;
                let e = &mut entities[idx];
                e.body_span = Span::new(line.start, line.end);
                e.body_indent = indent.to_string();
                e.doc_slot = detect_slot(text, line, &strings, indent);
            }
        }

        if let Some((kw_start, is_class, name, name_end)) = declaration_at(text, line) {
            if let Some(colon) = header_colon(text, line, &strings, name_end) {
                let header_span = Span::new(kw_start, colon + 1);
                let header_text = text[header_span.start..header_span.end].to_string();
                let parent_is_class = stack.last().map(|f| f.is_class).unwrap_or(false);
                let kind = if is_class {
                    EntityKind::Class
                } else if parent_is_class {
                    EntityKind::Method
                } else {
                    EntityKind::Function
                };
                let qualified = {
                    let mut parts: Vec<&str> = stack.iter().map(|f| f.name.as_str()).collect();
                    parts.push(&name);
                    parts.join(".")
                };
                let (signature, signature_degraded) = if is_class {
                    (Signature::default(), false)
                } else {
                    match parse_signature(&header_text) {
                        Ok(mut sig) => {
                            sig.is_method = kind == EntityKind::Method;
                            (sig, false)
                        }
                        Err(_) => (
                            Signature {
                                is_method: kind == EntityKind::Method,
                                ..Signature::default()
                            },
                            true,
                        ),
                    }
                };

                let mut entity = CodeEntity {
                    id: format!("{path}::{qualified}"),
                    kind,
                    name: name.clone(),
                    qualified_name: qualified,
                    header_span,
                    body_span: Span::new(line.end, line.end),
                    body_indent: format!("{indent}    "),
                    signature,
                    signature_degraded,
                    doc_slot: DocSlot::Insertion {
                        offset: line.end,
                        indent: format!("{indent}    "),
                    },
                    inline_body: false,
                    facts: EntityFacts::default(),
                    header_text,
                };

                // inline body on the same logical line?
                let mut after = colon + 1;
                let bytes = text.as_bytes();
                while after < line.end && (bytes[after] == b' ' || bytes[after] == b'\t') {
                    after += 1;
                }
                if after < line.end && bytes[after] != b'#' {
                    entity.inline_body = true;
                    entity.body_span = Span::new(after, line.end);
                    entity.body_indent = format!("{indent}    ");
                    entity.doc_slot = match literal_at(&strings, after) {
                        Some(lit) if only_trailing_trivia(text, lit.end, line.end) => {
                            DocSlot::Existing {
                                span: Span::new(lit.start, lit.end),
                                raw_text: text[lit.content_start..lit.content_end].to_string(),
                                delimiter: text[lit.start..lit.content_start].to_string(),
                                indent: format!("{indent}    "),
                            }
                        }
                        _ => DocSlot::Insertion {
                            offset: after,
                            indent: format!("{indent}    "),
                        },
                    };
                    entities.push(entity);
                } else {
                    let idx = entities.len();
                    entities.push(entity);
                    stack.push(OpenEntity {
                        idx,
                        header_indent_w: w,
                        name,
                        is_class,
                        awaiting_body: true,
                    });
                }
            }
        }

        last_code_end = line.end;
    }
    while let Some(frame) = stack.pop() {
        close_frame(&mut entities, frame, last_code_end);
    }

    entities.sort_by_key(|e| (e.header_span.start, e.header_span.end));
    Ok(entities)
}

fn close_frame(entities: &mut [CodeEntity], frame: OpenEntity, last_code_end: usize) {
    let e = &mut entities[frame.idx];
    e.body_span.end = e.body_span.end.max(last_code_end);
    if e.body_span.end < e.body_span.start {
        e.body_span.end = e.body_span.start;
    }
    // header never got a body line: nothing to patch
    if frame.awaiting_body {
        e.inline_body = true;
        e.body_span = Span::new(e.body_span.start, e.body_span.start);
    }
}

fn module_stem(path: &str) -> String {
    let file = path.rsplit(['/', '\\']).next().unwrap_or(path);
    file.split('.').next().unwrap_or(file).to_string()
}

fn module_entity(
    path: &str,
    text: &str,
    stem: &str,
    lines: &[Logical],
    strings: &[StrLit],
) -> Option<CodeEntity> {
    let line = lines.iter().find(|l| l.kind == LineKind::Code)?;
    if line.code_start != line.start {
        return None;
    }
    let lit = literal_at(strings, line.code_start)?;
    if !only_trailing_trivia(text, lit.end, line.end) {
        return None;
    }
    let doc_slot = DocSlot::Existing {
        span: Span::new(lit.start, lit.end),
        raw_text: text[lit.content_start..lit.content_end].to_string(),
        delimiter: text[lit.start..lit.content_start].to_string(),
        indent: String::new(),
    };
    Some(CodeEntity {
        id: format!("{path}::{stem}"),
        kind: EntityKind::Module,
        name: stem.to_string(),
        qualified_name: stem.to_string(),
        header_span: Span::new(0, 0),
        body_span: Span::new(0, text.len()),
        body_indent: String::new(),
        signature: Signature::default(),
        signature_degraded: false,
        doc_slot,
        inline_body: false,
        facts: EntityFacts::default(),
        header_text: String::new(),
    })
}

/// Match `def` / `async def` / `class` at the start of a code line.
/// Returns (keyword_start, is_class, name, name_end).
fn declaration_at(text: &str, line: &Logical) -> Option<(usize, bool, String, usize)> {
    let b = text.as_bytes();
    let mut p = line.code_start;
    let kw_start = p;
    let word = read_word(text, p);
    let mut is_class = false;
    match word {
        "async" => {
            p += 5;
            p = skip_ws(b, p, line.end);
            if read_word(text, p) != "def" {
                return None;
            }
            p += 3;
        }
        "def" => p += 3,
        "class" => {
            is_class = true;
            p += 5;
        }
        _ => return None,
    }
    if p >= line.end || (b[p] != b' ' && b[p] != b'\t' && b[p] != b'\\') {
        return None;
    }
    p = skip_ws(b, p, line.end);
    let name_start = p;
    while p < line.end && is_ident_char(b[p]) {
        p += 1;
    }
    if p == name_start || !is_ident_start(b[name_start]) {
        return None;
    }
    Some((kw_start, is_class, text[name_start..p].to_string(), p))
}

fn read_word(text: &str, p: usize) -> &str {
    let b = text.as_bytes();
    let mut q = p;
    while q < b.len() && is_ident_char(b[q]) {
        q += 1;
    }
    &text[p..q]
}

fn skip_ws(b: &[u8], mut p: usize, end: usize) -> usize {
    while p < end && (b[p] == b' ' || b[p] == b'\t' || b[p] == b'\\' || b[p] == b'\n' || b[p] == b'\r')
    {
        p += 1;
    }
    p
}

/// Find the `:` ending the declaration header, at bracket depth 0, outside
/// strings and comments.
fn header_colon(text: &str, line: &Logical, strings: &[StrLit], from: usize) -> Option<usize> {
    let b = text.as_bytes();
    let mut depth = 0i32;
    let mut p = from;
    while p < line.end {
        if let Ok(i) = strings.binary_search_by_key(&p, |s| s.start) {
            p = strings[i].end;
            continue;
        }
        match b[p] {
            b'#' => {
                // comment inside a continued header line: skip to physical EOL
                p = match text[p..line.end].find('\n') {
                    Some(k) => p + k + 1,
                    None => line.end,
                };
            }
            b'(' | b'[' | b'{' => {
                depth += 1;
                p += 1;
            }
            b')' | b']' | b'}' => {
                depth -= 1;
                p += 1;
            }
            b':' if depth == 0 => return Some(p),
            _ => p += 1,
        }
    }
    None
}

/// Classify the first body line as an existing docstring or an insertion
/// point.
fn detect_slot(text: &str, line: &Logical, strings: &[StrLit], indent: &str) -> DocSlot {
    if let Some(lit) = literal_at(strings, line.code_start) {
        if only_trailing_trivia(text, lit.end, line.end) {
            return DocSlot::Existing {
                span: Span::new(lit.start, lit.end),
                raw_text: text[lit.content_start..lit.content_end].to_string(),
                delimiter: text[lit.start..lit.content_start].to_string(),
                indent: indent.to_string(),
            };
        }
    }
    DocSlot::Insertion {
        offset: line.start,
        indent: indent.to_string(),
    }
}

/// Parse a python `def`/`class` header into a signature.
pub(crate) fn parse_signature(header_text: &str) -> Result<Signature, SignatureParseError> {
    let cleaned = clean_header(header_text);
    let text = cleaned.trim();
    let rest = if let Some(r) = text.strip_prefix("async") {
        r.trim_start()
    } else {
        text
    };
    if rest.starts_with("class") {
        return Ok(Signature::default());
    }
    let rest = rest
        .strip_prefix("def")
        .ok_or_else(|| SignatureParseError("not a def header".into()))?;

    let open = rest
        .find('(')
        .ok_or_else(|| SignatureParseError("missing parameter list".into()))?;
    let close = matching_paren(rest, open)
        .ok_or_else(|| SignatureParseError("unbalanced parameter list".into()))?;
    let params_text = &rest[open + 1..close];
    let tail = &rest[close + 1..];

    let mut params = Vec::new();
    let mut keyword_only = false;
    let mut seen_var_pos = false;
    let mut seen_var_kw = false;
    for piece in split_top_level(params_text, ',') {
        let piece = piece.trim();
        if piece.is_empty() || piece == "/" {
            continue;
        }
        if piece == "*" {
            keyword_only = true;
            continue;
        }
        let (kind, name_part) = if let Some(p) = piece.strip_prefix("**") {
            if seen_var_kw {
                return Err(SignatureParseError("multiple ** parameters".into()));
            }
            seen_var_kw = true;
            (ParamKind::VarKeyword, p)
        } else if let Some(p) = piece.strip_prefix('*') {
            if seen_var_pos {
                return Err(SignatureParseError("multiple * parameters".into()));
            }
            seen_var_pos = true;
            keyword_only = true;
            (ParamKind::VarPositional, p)
        } else if keyword_only {
            (ParamKind::KeywordOnly, piece)
        } else {
            (ParamKind::Positional, piece)
        };
        let kind = if kind == ParamKind::VarPositional && !name_part.trim().is_empty() {
            ParamKind::VarPositional
        } else {
            kind
        };

        let (head, default_text) = match find_top_level(name_part, '=') {
            Some(i) => (
                name_part[..i].trim_end(),
                Some(name_part[i + 1..].trim().to_string()),
            ),
            None => (name_part, None),
        };
        let (name, annotation_text) = match find_top_level(head, ':') {
            Some(i) => (
                head[..i].trim(),
                Some(head[i + 1..].trim().to_string()),
            ),
            None => (head.trim(), None),
        };
        if name.is_empty() || !name.bytes().next().map(is_ident_start).unwrap_or(false)
            || !name.bytes().all(is_ident_char)
        {
            return Err(SignatureParseError(format!("bad parameter name: {name:?}")));
        }
        if params.iter().any(|p: &Param| p.name == name) {
            return Err(SignatureParseError(format!("duplicate parameter: {name}")));
        }
        params.push(Param {
            name: name.to_string(),
            kind,
            default_text,
            annotation_text,
        });
    }

    let returns_annotation = tail
        .trim()
        .strip_suffix(':')
        .map(|t| t.trim())
        .and_then(|t| t.strip_prefix("->"))
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty());

    Ok(Signature {
        params,
        returns_annotation,
        is_method: false,
    })
}

/// Strip comments and line continuations; fold newlines to spaces.
fn clean_header(header: &str) -> String {
    let b = header.as_bytes();
    let n = b.len();
    let mut out = String::with_capacity(n);
    let mut i = 0;
    while i < n {
        match b[i] {
            b'#' => {
                while i < n && b[i] != b'\n' {
                    i += 1;
                }
            }
            b'\'' | b'"' => match scan_string(b, i) {
                Some((_, _, e)) => {
                    out.push_str(&header[i..e]);
                    i = e;
                }
                None => {
                    out.push_str(&header[i..]);
                    i = n;
                }
            },
            b'\\' if i + 1 < n && (b[i + 1] == b'\n' || b[i + 1] == b'\r') => {
                i += 1;
            }
            b'\n' | b'\r' => {
                out.push(' ');
                i += 1;
            }
            c => {
                out.push(c as char);
                i += 1;
            }
        }
    }
    out
}

fn matching_paren(text: &str, open: usize) -> Option<usize> {
    let b = text.as_bytes();
    let mut depth = 0i32;
    let mut i = open;
    while i < b.len() {
        match b[i] {
            b'\'' | b'"' => {
                let (_, _, e) = scan_string(b, i)?;
                i = e;
                continue;
            }
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
        i += 1;
    }
    None
}

/// Split on `sep` at bracket depth 0, string-aware.
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let b = text.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'\'' | b'"' => {
                if let Some((_, _, e)) = scan_string(b, i) {
                    i = e;
                    continue;
                }
                i += 1;
            }
            b'(' | b'[' | b'{' => {
                depth += 1;
                i += 1;
            }
            b')' | b']' | b'}' => {
                depth -= 1;
                i += 1;
            }
            c if c == sep as u8 && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
                i += 1;
            }
            _ => i += 1,
        }
    }
    parts.push(&text[start..]);
    parts
}

fn find_top_level(text: &str, sep: char) -> Option<usize> {
    let b = text.as_bytes();
    let mut depth = 0i32;
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'\'' | b'"' => {
                let (_, _, e) = scan_string(b, i)?;
                i = e;
                continue;
            }
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            c if c == sep as u8 && depth == 0 => return Some(i),
            _ => {}
        }
        i += 1;
    }
    None
}
