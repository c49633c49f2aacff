//! Line-oriented docstring parsing for the four style grammars.

use super::{Block, DocAst, DocParam, RaiseItem, Style};

/// Marker counts per style.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StyleScores {
    pub rest: u32,
    pub google: u32,
    pub numpy: u32,
    pub javadoc: u32,
}

const REST_FIELDS: &[&str] = &[":param ", ":type ", ":returns:", ":return:", ":rtype:", ":raises "];
const GOOGLE_HEADERS: &[&str] = &["Args:", "Returns:", "Raises:"];
const NUMPY_HEADERS: &[&str] = &["Parameters", "Returns", "Raises"];
const JAVADOC_TAGS: &[&str] = &["@param ", "@return", "@throws "];

fn is_dash_underline(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 3 && t.bytes().all(|b| b == b'-')
}

/// Count style-specific markers; highest score wins, ties broken by the
/// fixed priority rest > google > numpy > javadoc. All-zero means unknown.
pub fn detect_style(raw: &str) -> (Option<Style>, StyleScores) {
    let lines: Vec<String> = raw.lines().map(|l| strip_gutter(l).to_string()).collect();
    let mut scores = StyleScores::default();
    for (i, line) in lines.iter().enumerate() {
        let t = line.trim_start();
        if REST_FIELDS.iter().any(|m| t.starts_with(m)) {
            scores.rest += 1;
        }
        if GOOGLE_HEADERS.contains(&line.trim()) {
            scores.google += 1;
        }
        if NUMPY_HEADERS.contains(&line.trim())
            && lines.get(i + 1).map(|n| is_dash_underline(n)).unwrap_or(false)
        {
            scores.numpy += 1;
        }
        if JAVADOC_TAGS.iter().any(|m| t.starts_with(m)) {
            scores.javadoc += 1;
        }
    }
    let ranked = [
        (scores.rest, Style::Rest),
        (scores.google, Style::Google),
        (scores.numpy, Style::Numpy),
        (scores.javadoc, Style::Javadoc),
    ];
    let best = ranked.iter().max_by_key(|(n, _)| *n).unwrap();
    let style = (best.0 > 0).then(|| ranked.iter().find(|(n, _)| *n == best.0).unwrap().1);
    (style, scores)
}

/// Strip a javadoc-style `* ` gutter from one line.
fn strip_gutter(line: &str) -> &str {
    let t = line.trim_start();
    if let Some(rest) = t.strip_prefix('*') {
        if rest.is_empty() || rest.starts_with(' ') {
            return rest.strip_prefix(' ').unwrap_or(rest);
        }
    }
    line
}

/// Longest common whitespace prefix of non-blank lines after the first.
fn dedent(lines: &[&str]) -> Vec<String> {
    let mut common: Option<String> = None;
    for line in lines.iter().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let ws: String = line.chars().take_while(|c| *c == ' ' || *c == '\t').collect();
        common = Some(match common {
            None => ws,
            Some(prev) => prev
                .chars()
                .zip(ws.chars())
                .take_while(|(a, b)| a == b)
                .map(|(a, _)| a)
                .collect(),
        });
    }
    let common = common.unwrap_or_default();
    lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            if i == 0 {
                line.trim_start().to_string()
            } else {
                line.strip_prefix(&common).unwrap_or(line.trim_start()).to_string()
            }
        })
        .collect()
}

fn indent_width(line: &str) -> usize {
    line.chars()
        .take_while(|c| c.is_whitespace())
        .map(|c| if c == '\t' { 8 } else { 1 })
        .sum()
}

/// Does this line open a section for the given style?
fn starts_section(line: &str, style: Style, next: Option<&str>) -> bool {
    match style {
        Style::Rest => {
            let t = line.trim_start();
            REST_FIELDS.iter().any(|m| t.starts_with(m))
        }
        Style::Google => GOOGLE_HEADERS.contains(&line.trim()),
        Style::Numpy => {
            NUMPY_HEADERS.contains(&line.trim())
                && next.map(is_dash_underline).unwrap_or(false)
        }
        Style::Javadoc => {
            let t = line.trim_start();
            JAVADOC_TAGS.iter().any(|m| t.starts_with(m))
        }
    }
}

/// Parse a docstring into a style-independent tree. Total: malformed
/// sections degrade to `Opaque` blocks.
pub fn parse_docstring(raw: &str, style_hint: Option<Style>) -> DocAst {
    let style = style_hint.or_else(|| detect_style(raw).0);

    let raw_lines: Vec<&str> = raw.lines().collect();
    let lines: Vec<String> = match style {
        Some(Style::Javadoc) => {
            let stripped: Vec<&str> = raw_lines.iter().map(|l| strip_gutter(l)).collect();
            dedent(&stripped)
        }
        _ => dedent(&raw_lines),
    };

    let mut blocks = Vec::new();
    let mut i = 0;

    // skip leading blanks
    while i < lines.len() && lines[i].trim().is_empty() {
        i += 1;
    }

    // summary: first run of non-blank lines, ending at a blank line or a
    // section marker
    let mut summary_parts = Vec::new();
    while i < lines.len() && !lines[i].trim().is_empty() {
        let at_section = style
            .map(|s| starts_section(&lines[i], s, lines.get(i + 1).map(|l| l.as_str())))
            .unwrap_or(false);
        if at_section {
            break;
        }
        summary_parts.push(lines[i].trim().to_string());
        i += 1;
    }
    if !summary_parts.is_empty() {
        blocks.push(Block::Summary(summary_parts.join(" ")));
    }

    // remaining lines: sections per grammar, everything else preserved
    let mut text_run: Vec<String> = Vec::new();
    let mut seen_section = false;

    macro_rules! flush_text {
        () => {
            if !text_run.is_empty() {
                let joined = text_run.join("\n");
                if !joined.trim().is_empty() {
                    if seen_section {
                        blocks.push(Block::Opaque(joined));
                    } else {
                        blocks.push(Block::Description(joined));
                    }
                }
                text_run.clear();
            }
        };
    }

    while i < lines.len() {
        let at_section = style
            .map(|s| starts_section(&lines[i], s, lines.get(i + 1).map(|l| l.as_str())))
            .unwrap_or(false);
        if at_section {
            flush_text!();
            let consumed = match style.unwrap() {
                Style::Rest => parse_rest_fields(&lines, i, &mut blocks),
                Style::Google => parse_google_section(&lines, i, &mut blocks),
                Style::Numpy => parse_numpy_section(&lines, i, &mut blocks),
                Style::Javadoc => parse_javadoc_tag(&lines, i, &mut blocks),
            };
            if consumed > i {
                seen_section = true;
                i = consumed;
                continue;
            }
            // degraded: keep the marker line verbatim
            text_run.push(lines[i].clone());
            i += 1;
            continue;
        }
        text_run.push(lines[i].clone());
        i += 1;
    }
    flush_text!();

    DocAst {
        blocks,
        style_detected: style,
    }
}

/// Split `name (type): desc` / `name: desc` at the first top-level colon.
fn split_item(line: &str) -> Option<(String, Option<String>, String)> {
    let b = line.as_bytes();
    let mut depth = 0i32;
    let mut colon = None;
    for i in 0..b.len() {
        match b[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            b':' if depth == 0 => {
                colon = Some(i);
                break;
            }
            _ => {}
        }
    }
    let colon = colon?;
    let left = line[..colon].trim();
    let desc = line[colon + 1..].trim().to_string();
    if left.is_empty() {
        return None;
    }
    if let Some(open) = left.find('(') {
        if left.ends_with(')') {
            let name = left[..open].trim();
            let ty = left[open + 1..left.len() - 1].trim();
            if !name.is_empty() {
                return Some((name.to_string(), Some(ty.to_string()).filter(|t| !t.is_empty()), desc));
            }
        }
    }
    Some((left.to_string(), None, desc))
}

/// A run of reST field lines with their continuations.
fn parse_rest_fields(lines: &[String], mut i: usize, blocks: &mut Vec<Block>) -> usize {
    let mut params: Vec<DocParam> = Vec::new();
    let mut returns: Option<(Option<String>, String)> = None;
    let mut raises: Vec<RaiseItem> = Vec::new();
    let mut any = false;

    let field_indent = indent_width(&lines[i]);

    while i < lines.len() {
        let line = &lines[i];
        if line.trim().is_empty() {
            // blank line ends the field list unless another field follows
            match lines.get(i + 1) {
                Some(next)
                    if REST_FIELDS.iter().any(|m| next.trim_start().starts_with(m)) =>
                {
                    i += 1;
                    continue;
                }
                _ => break,
            }
        }
        let t = line.trim_start();
        if !REST_FIELDS.iter().any(|m| t.starts_with(m)) {
            break;
        }
        // gather continuation lines indented deeper than the field marker
        let mut value_extra = String::new();
        let mut j = i + 1;
        while j < lines.len()
            && !lines[j].trim().is_empty()
            && indent_width(&lines[j]) > field_indent
        {
            value_extra.push(' ');
            value_extra.push_str(lines[j].trim());
            j += 1;
        }

        let parsed = parse_rest_field(t, &value_extra);
        match parsed {
            Some(RestField::Param { name, desc }) => {
                match params.iter_mut().find(|p| p.name == name) {
                    Some(p) if p.desc.is_empty() => p.desc = desc,
                    Some(_) => {}
                    None => params.push(DocParam {
                        name,
                        type_text: None,
                        desc,
                    }),
                }
            }
            Some(RestField::Type { name, text }) => {
                match params.iter_mut().find(|p| p.name == name) {
                    Some(p) => p.type_text = Some(text),
                    None => params.push(DocParam {
                        name,
                        type_text: Some(text),
                        desc: String::new(),
                    }),
                }
            }
            Some(RestField::Returns { desc }) => match &mut returns {
                None => returns = Some((None, desc)),
                Some((_, d)) if d.is_empty() => *d = desc,
                Some(_) => {}
            },
            Some(RestField::Rtype { text }) => match &mut returns {
                None => returns = Some((Some(text), String::new())),
                Some((ty, _)) => *ty = Some(text),
            },
            Some(RestField::Raises { type_text, desc }) => {
                raises.push(RaiseItem { type_text, desc });
            }
            None => break,
        }
        any = true;
        i = j;
    }

    if !any {
        return i;
    }
    if !params.is_empty() {
        blocks.push(Block::Params(params));
    }
    if let Some((type_text, desc)) = returns {
        blocks.push(Block::Returns { type_text, desc });
    }
    if !raises.is_empty() {
        blocks.push(Block::Raises(raises));
    }
    i
}

enum RestField {
    Param { name: String, desc: String },
    Type { name: String, text: String },
    Returns { desc: String },
    Rtype { text: String },
    Raises { type_text: String, desc: String },
}

fn parse_rest_field(line: &str, extra: &str) -> Option<RestField> {
    let with = |base: &str| format!("{}{}", base.trim(), extra);
    if let Some(rest) = line.strip_prefix(":param ") {
        let colon = rest.find(':')?;
        let name = rest[..colon].trim();
        if name.is_empty() {
            return None;
        }
        return Some(RestField::Param {
            name: name.to_string(),
            desc: with(&rest[colon + 1..]).trim().to_string(),
        });
    }
    if let Some(rest) = line.strip_prefix(":type ") {
        let colon = rest.find(':')?;
        let name = rest[..colon].trim();
        if name.is_empty() {
            return None;
        }
        return Some(RestField::Type {
            name: name.to_string(),
            text: with(&rest[colon + 1..]).trim().to_string(),
        });
    }
    for marker in [":returns:", ":return:"] {
        if let Some(rest) = line.strip_prefix(marker) {
            return Some(RestField::Returns {
                desc: with(rest).trim().to_string(),
            });
        }
    }
    if let Some(rest) = line.strip_prefix(":rtype:") {
        return Some(RestField::Rtype {
            text: with(rest).trim().to_string(),
        });
    }
    if let Some(rest) = line.strip_prefix(":raises ") {
        let colon = rest.find(':')?;
        let ty = rest[..colon].trim();
        if ty.is_empty() {
            return None;
        }
        return Some(RestField::Raises {
            type_text: ty.to_string(),
            desc: with(&rest[colon + 1..]).trim().to_string(),
        });
    }
    None
}

/// One google section: header line plus items one level deeper.
fn parse_google_section(lines: &[String], i: usize, blocks: &mut Vec<Block>) -> usize {
    let header = lines[i].trim();
    let header_indent = indent_width(&lines[i]);

    // collect section body: non-blank lines indented deeper than the header
    let mut j = i + 1;
    let mut body: Vec<(usize, String)> = Vec::new();
    while j < lines.len() {
        let line = &lines[j];
        if line.trim().is_empty() {
            // blank inside the section only if deeper content follows
            match lines.get(j + 1) {
                Some(next)
                    if !next.trim().is_empty() && indent_width(next) > header_indent =>
                {
                    body.push((usize::MAX, String::new()));
                    j += 1;
                    continue;
                }
                _ => break,
            }
        }
        if indent_width(line) <= header_indent {
            break;
        }
        body.push((indent_width(line), line.trim().to_string()));
        j += 1;
    }
    if body.is_empty() {
        return i; // degraded: header without items
    }

    let item_indent = body
        .iter()
        .filter(|(w, _)| *w != usize::MAX)
        .map(|(w, _)| *w)
        .min()
        .unwrap();

    match header {
        "Args:" => {
            let mut items: Vec<DocParam> = Vec::new();
            for (w, text) in &body {
                if *w == usize::MAX {
                    continue;
                }
                if *w == item_indent {
                    match split_item(text) {
                        Some((name, ty, desc)) => items.push(DocParam {
                            name,
                            type_text: ty,
                            desc,
                        }),
                        None => {
                            if let Some(last) = items.last_mut() {
                                append_desc(&mut last.desc, text);
                            }
                        }
                    }
                } else if let Some(last) = items.last_mut() {
                    append_desc(&mut last.desc, text);
                }
            }
            if items.is_empty() {
                return i;
            }
            blocks.push(Block::Params(items));
        }
        "Returns:" => {
            let mut type_text = None;
            let mut desc = String::new();
            let mut first = true;
            for (w, text) in &body {
                if *w == usize::MAX {
                    continue;
                }
                if first {
                    first = false;
                    if let Some((name, None, d)) = split_item(text) {
                        if !name.contains(' ') && !d.is_empty() {
                            type_text = Some(name);
                            desc = d;
                            continue;
                        }
                    }
                    desc = text.clone();
                } else {
                    append_desc(&mut desc, text);
                }
            }
            blocks.push(Block::Returns { type_text, desc });
        }
        "Raises:" => {
            let mut items: Vec<RaiseItem> = Vec::new();
            for (w, text) in &body {
                if *w == usize::MAX {
                    continue;
                }
                if *w == item_indent {
                    match split_item(text) {
                        Some((name, _, desc)) => items.push(RaiseItem {
                            type_text: name,
                            desc,
                        }),
                        None => {
                            if let Some(last) = items.last_mut() {
                                append_desc(&mut last.desc, text);
                            }
                        }
                    }
                } else if let Some(last) = items.last_mut() {
                    append_desc(&mut last.desc, text);
                }
            }
            if items.is_empty() {
                return i;
            }
            blocks.push(Block::Raises(items));
        }
        _ => return i,
    }
    j
}

fn append_desc(desc: &mut String, text: &str) {
    if !desc.is_empty() {
        desc.push(' ');
    }
    desc.push_str(text);
}

fn looks_like_item_name(text: &str) -> bool {
    let name = text.trim().split(" : ").next().unwrap_or("").trim();
    let name = name.trim_start_matches('*');
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '.')
}

/// One numpy section: header word, dash underline, then items.
fn parse_numpy_section(lines: &[String], i: usize, blocks: &mut Vec<Block>) -> usize {
    let header = lines[i].trim();
    let base_indent = indent_width(&lines[i]);

    // content runs to the next underlined header (recognized or custom) or EOF
    let mut j = i + 2;
    let start = j;
    while j < lines.len() {
        let is_next_header = !lines[j].trim().is_empty()
            && indent_width(&lines[j]) == base_indent
            && lines.get(j + 1).map(|n| is_dash_underline(n)).unwrap_or(false);
        if is_next_header {
            break;
        }
        j += 1;
    }
    let content = &lines[start..j];
    if content.iter().all(|l| l.trim().is_empty()) {
        return i;
    }

    match header {
        "Returns" => {
            // `type` line with deeper description, or description only
            let non_blank: Vec<&String> = content.iter().filter(|l| !l.trim().is_empty()).collect();
            let (type_text, desc) = if non_blank.len() >= 2
                && indent_width(non_blank[0]) == base_indent
                && indent_width(non_blank[1]) > base_indent
            {
                let ty = non_blank[0].trim().to_string();
                let desc = non_blank[1..]
                    .iter()
                    .map(|l| l.trim())
                    .collect::<Vec<_>>()
                    .join(" ");
                (Some(ty), desc)
            } else {
                (
                    None,
                    non_blank.iter().map(|l| l.trim()).collect::<Vec<_>>().join(" "),
                )
            };
            blocks.push(Block::Returns { type_text, desc });
            j
        }
        "Parameters" | "Raises" => {
            let mut entries: Vec<(String, Option<String>, String)> = Vec::new();
            let mut k = 0;
            let mut stopped = start;
            while k < content.len() {
                let line = &content[k];
                if line.trim().is_empty() {
                    k += 1;
                    continue;
                }
                if indent_width(line) == base_indent {
                    if !looks_like_item_name(line) {
                        break;
                    }
                    let t = line.trim();
                    let (name, ty) = match t.split_once(" : ") {
                        Some((n, ty)) => (n.trim().to_string(), Some(ty.trim().to_string())),
                        None => (t.trim_end_matches(" :").to_string(), None),
                    };
                    entries.push((name, ty, String::new()));
                } else if let Some(last) = entries.last_mut() {
                    append_desc(&mut last.2, line.trim());
                } else {
                    break;
                }
                k += 1;
                stopped = start + k;
            }
            if entries.is_empty() {
                return i;
            }
            if header == "Parameters" {
                blocks.push(Block::Params(
                    entries
                        .into_iter()
                        .map(|(name, type_text, desc)| DocParam {
                            name,
                            type_text,
                            desc,
                        })
                        .collect(),
                ));
            } else {
                blocks.push(Block::Raises(
                    entries
                        .into_iter()
                        .map(|(type_text, _, desc)| RaiseItem { type_text, desc })
                        .collect(),
                ));
            }
            stopped
        }
        _ => i,
    }
}

/// One javadoc tag with its continuation lines.
fn parse_javadoc_tag(lines: &[String], i: usize, blocks: &mut Vec<Block>) -> usize {
    let t = lines[i].trim_start();
    let mut j = i + 1;
    let mut extra = String::new();
    while j < lines.len() {
        let line = lines[j].trim();
        if line.is_empty() || line.starts_with('@') {
            break;
        }
        extra.push(' ');
        extra.push_str(line);
        j += 1;
    }

    if let Some(rest) = t.strip_prefix("@param ") {
        let rest = format!("{}{}", rest.trim(), extra);
        let mut words = rest.splitn(2, char::is_whitespace);
        let name = words.next().unwrap_or("").to_string();
        let desc = words.next().unwrap_or("").trim().to_string();
        if name.is_empty() {
            return i;
        }
        push_param(blocks, DocParam { name, type_text: None, desc });
        return j;
    }
    if let Some(rest) = t.strip_prefix("@returns").or_else(|| t.strip_prefix("@return")) {
        let desc = format!("{}{}", rest.trim(), extra).trim().to_string();
        blocks.push(Block::Returns {
            type_text: None,
            desc,
        });
        return j;
    }
    if let Some(rest) = t.strip_prefix("@throws ") {
        let rest = format!("{}{}", rest.trim(), extra);
        let mut words = rest.splitn(2, char::is_whitespace);
        let ty = words.next().unwrap_or("").to_string();
        let desc = words.next().unwrap_or("").trim().to_string();
        if ty.is_empty() {
            return i;
        }
        match blocks.last_mut() {
            Some(Block::Raises(items)) => items.push(RaiseItem {
                type_text: ty,
                desc,
            }),
            _ => blocks.push(Block::Raises(vec![RaiseItem {
                type_text: ty,
                desc,
            }])),
        }
        return j;
    }
    i
}

fn push_param(blocks: &mut Vec<Block>, param: DocParam) {
    match blocks.last_mut() {
        Some(Block::Params(items)) => items.push(param),
        _ => blocks.push(Block::Params(vec![param])),
    }
}
