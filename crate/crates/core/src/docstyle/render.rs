//! Canonical rendering of a documentation tree in a target style.

use super::{canonicalize, Block, DocAst, DocParam, RaiseItem, Style};

/// Render in canonical block order: summary, blank line, description, then
/// params / returns / raises, then opaque blocks in original order. Every
/// line after the first carries `indent`; no line has trailing whitespace.
/// Existing text is never re-wrapped (`_width_hint` applies only to
/// generated descriptions, all of which are short constants).
pub fn render_docstring(ast: &DocAst, style: Style, indent: &str, _width_hint: usize) -> String {
    let ast = canonicalize(ast.clone());
    let mut paragraphs: Vec<Vec<String>> = Vec::new();

    for block in &ast.blocks {
        match block {
            Block::Summary(s) => paragraphs.push(vec![s.clone()]),
            Block::Description(text) => {
                paragraphs.push(text.lines().map(|l| l.to_string()).collect())
            }
            Block::Params(items) => render_params(&mut paragraphs, items, style),
            Block::Returns { type_text, desc } => {
                render_returns(&mut paragraphs, type_text.as_deref(), desc, style)
            }
            Block::Raises(items) => render_raises(&mut paragraphs, items, style),
            Block::Opaque(text) => {
                paragraphs.push(text.lines().map(|l| l.to_string()).collect())
            }
        }
    }

    // rest renders its three field groups as one contiguous field list
    if style == Style::Rest {
        paragraphs = merge_marked(paragraphs);
    }

    let mut lines: Vec<String> = Vec::new();
    for (i, para) in paragraphs.iter().enumerate() {
        if i > 0 {
            lines.push(String::new());
        }
        lines.extend(para.iter().cloned());
    }

    match style {
        Style::Javadoc => lines
            .iter()
            .map(|l| {
                if l.is_empty() {
                    format!("{indent} *")
                } else {
                    format!("{indent} * {l}")
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if i == 0 || l.is_empty() {
                    l.clone()
                } else {
                    format!("{indent}{l}")
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

// Sentinel marking rest field groups for merging.
const FIELD_MARK: &str = "\u{0}";

fn merge_marked(paragraphs: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    let mut prev_marked = false;
    for mut para in paragraphs {
        let marked = para.first().map(|l| l == FIELD_MARK).unwrap_or(false);
        if marked {
            para.remove(0);
        }
        if marked && prev_marked {
            if let Some(last) = out.last_mut() {
                last.extend(para);
                continue;
            }
        }
        out.push(para);
        prev_marked = marked;
    }
    out
}

fn render_params(out: &mut Vec<Vec<String>>, items: &[DocParam], style: Style) {
    if items.is_empty() {
        return;
    }
    match style {
        Style::Rest => {
            let mut lines = vec![FIELD_MARK.to_string()];
            for p in items {
                lines.push(format!(":param {}: {}", p.name, p.desc).trim_end().to_string());
                if let Some(ty) = &p.type_text {
                    lines.push(format!(":type {}: {}", p.name, ty).trim_end().to_string());
                }
            }
            out.push(lines);
        }
        Style::Google => {
            let mut lines = vec!["Args:".to_string()];
            for p in items {
                let head = match &p.type_text {
                    Some(ty) => format!("{} ({})", p.name, ty),
                    None => p.name.clone(),
                };
                lines.push(format!("    {}: {}", head, p.desc).trim_end().to_string());
            }
            out.push(lines);
        }
        Style::Numpy => {
            let mut lines = vec!["Parameters".to_string(), "-".repeat(10).to_string()];
            for p in items {
                match &p.type_text {
                    Some(ty) => lines.push(format!("{} : {}", p.name, ty)),
                    None => lines.push(p.name.clone()),
                }
                if !p.desc.is_empty() {
                    lines.push(format!("    {}", p.desc));
                }
            }
            out.push(lines);
        }
        Style::Javadoc => {
            let mut lines = Vec::new();
            for p in items {
                lines.push(format!("@param {} {}", p.name, p.desc).trim_end().to_string());
            }
            out.push(lines);
        }
    }
}

fn render_returns(out: &mut Vec<Vec<String>>, type_text: Option<&str>, desc: &str, style: Style) {
    if type_text.is_none() && desc.is_empty() {
        return;
    }
    match style {
        Style::Rest => {
            let mut lines = vec![FIELD_MARK.to_string()];
            if !desc.is_empty() || type_text.is_none() {
                lines.push(format!(":returns: {}", desc.replace('\n', " ")).trim_end().to_string());
            }
            if let Some(ty) = type_text {
                lines.push(format!(":rtype: {ty}"));
            }
            out.push(lines);
        }
        Style::Google => {
            let mut lines = vec!["Returns:".to_string()];
            match type_text {
                Some(ty) => lines.push(format!("    {}: {}", ty, desc.replace('\n', " ")).trim_end().to_string()),
                None => lines.push(format!("    {}", desc.replace('\n', " ")).trim_end().to_string()),
            }
            out.push(lines);
        }
        Style::Numpy => {
            let mut lines = vec!["Returns".to_string(), "-".repeat(7).to_string()];
            match type_text {
                Some(ty) => {
                    lines.push(ty.to_string());
                    if !desc.is_empty() {
                        lines.push(format!("    {}", desc.replace('\n', " ")));
                    }
                }
                None => lines.push(desc.replace('\n', " ")),
            }
            out.push(lines);
        }
        Style::Javadoc => {
            out.push(vec![format!("@return {}", desc.replace('\n', " ")).trim_end().to_string()]);
        }
    }
}

fn render_raises(out: &mut Vec<Vec<String>>, items: &[RaiseItem], style: Style) {
    if items.is_empty() {
        return;
    }
    match style {
        Style::Rest => {
            let mut lines = vec![FIELD_MARK.to_string()];
            for r in items {
                lines.push(format!(":raises {}: {}", r.type_text, r.desc).trim_end().to_string());
            }
            out.push(lines);
        }
        Style::Google => {
            let mut lines = vec!["Raises:".to_string()];
            for r in items {
                lines.push(format!("    {}: {}", r.type_text, r.desc).trim_end().to_string());
            }
            out.push(lines);
        }
        Style::Numpy => {
            let mut lines = vec!["Raises".to_string(), "-".repeat(6).to_string()];
            for r in items {
                lines.push(r.type_text.clone());
                if !r.desc.is_empty() {
                    lines.push(format!("    {}", r.desc));
                }
            }
            out.push(lines);
        }
        Style::Javadoc => {
            let mut lines = Vec::new();
            for r in items {
                lines.push(format!("@throws {} {}", r.type_text, r.desc).trim_end().to_string());
            }
            out.push(lines);
        }
    }
}
