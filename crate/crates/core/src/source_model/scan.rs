//! Best-effort textual scans for `return`/`raise`/`throw` facts.
//!
//! The scanners work on a blanked copy of the body: string literals collapse
//! to a `0` placeholder and comments to spaces, so keyword matching never
//! fires inside either.

use std::collections::BTreeSet;

use super::python::{scan_lines, LineKind};
use super::{jsdoc, LanguageId};

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

pub(crate) fn scan_returns(body: &str, language: LanguageId) -> bool {
    match language {
        LanguageId::Python => py_scan(body).0,
        LanguageId::JsdocFamily => js_scan(body).0,
    }
}

pub(crate) fn scan_raises(body: &str, language: LanguageId) -> BTreeSet<String> {
    match language {
        LanguageId::Python => py_scan(body).1,
        LanguageId::JsdocFamily => js_scan(body).1,
    }
}

/// Blank string literals (placeholder `0`) and comments (spaces), keeping
/// newlines so line structure survives.
fn py_blank(text: &str) -> String {
    let (lines, strings) = match scan_lines(text, false) {
        Ok(v) => v,
        Err(_) => return text.to_string(),
    };
    let mut out = text.as_bytes().to_vec();
    for s in &strings {
        for i in s.start..s.end.min(out.len()) {
            out[i] = if out[i] == b'\n' || out[i] == b'\r' { out[i] } else { b' ' };
        }
        if s.start < out.len() {
            out[s.start] = b'0';
        }
    }
    // comment lines and trailing comments
    for line in &lines {
        if line.kind == LineKind::Comment {
            for i in line.code_start..line.end {
                out[i] = b' ';
            }
        }
    }
    blank_hash_comments(&mut out, &strings);
    String::from_utf8_lossy(&out).into_owned()
}

fn blank_hash_comments(out: &mut [u8], strings: &[super::python::StrLit]) {
    let mut i = 0;
    while i < out.len() {
        if let Ok(si) = strings.binary_search_by_key(&i, |s| s.start) {
            i = strings[si].end;
            continue;
        }
        if out[i] == b'#' {
            while i < out.len() && out[i] != b'\n' {
                out[i] = b' ';
                i += 1;
            }
        } else {
            i += 1;
        }
    }
}

fn py_scan(body: &str) -> (bool, BTreeSet<String>) {
    let blanked = py_blank(body);
    let (lines, _) = match scan_lines(&blanked, false) {
        Ok(v) => v,
        Err(_) => return (false, BTreeSet::new()),
    };
    let b = blanked.as_bytes();
    let mut returns = false;
    let mut raises = BTreeSet::new();

    for line in lines.iter().filter(|l| l.kind == LineKind::Code) {
        let mut stmt_start = true;
        let mut depth = 0i32;
        let mut i = line.code_start;
        while i < line.end {
            match b[i] {
                b'(' | b'[' | b'{' => {
                    depth += 1;
                    stmt_start = false;
                    i += 1;
                }
                b')' | b']' | b'}' => {
                    depth -= 1;
                    i += 1;
                }
                b';' | b':' if depth == 0 => {
                    stmt_start = true;
                    i += 1;
                }
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                c if is_ident_char(c) => {
                    let ws = i;
                    while i < line.end && is_ident_char(b[i]) {
                        i += 1;
                    }
                    let word = &blanked[ws..i];
                    if stmt_start && word == "return" && depth == 0 {
                        if statement_rest_nonempty(b, i, line.end) {
                            returns = true;
                        }
                    } else if stmt_start && word == "raise" && depth == 0 {
                        if let Some(name) = dotted_name_after(&blanked, i, line.end) {
                            raises.insert(name);
                        }
                    }
                    stmt_start = false;
                }
                _ => {
                    stmt_start = false;
                    i += 1;
                }
            }
        }
    }
    (returns, raises)
}

/// Anything besides whitespace before the statement ends (`;` at depth 0 or
/// the logical line end)?
fn statement_rest_nonempty(b: &[u8], mut i: usize, end: usize) -> bool {
    let mut depth = 0i32;
    while i < end {
        match b[i] {
            b' ' | b'\t' | b'\n' | b'\r' => {}
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => {
                if depth == 0 {
                    return false;
                }
                depth -= 1;
                return true;
            }
            b';' if depth == 0 => return false,
            _ => return true,
        }
        i += 1;
    }
    false
}

fn dotted_name_after(text: &str, mut i: usize, end: usize) -> Option<String> {
    let b = text.as_bytes();
    while i < end && (b[i] == b' ' || b[i] == b'\t') {
        i += 1;
    }
    let start = i;
    if i >= end || !(b[i].is_ascii_alphabetic() || b[i] == b'_') {
        return None;
    }
    while i < end && (is_ident_char(b[i]) || b[i] == b'.') {
        i += 1;
    }
    let name = text[start..i].trim_end_matches('.');
    if name.is_empty() {
        None
    } else {
        Some(name.to_string())
    }
}

fn js_scan(body: &str) -> (bool, BTreeSet<String>) {
    let mut blanked = jsdoc::blank(body).into_bytes();
    mask_nested_blocks(&mut blanked);
    let text = String::from_utf8_lossy(&blanked).into_owned();
    let b = text.as_bytes();
    let mut returns = false;
    let mut raises = BTreeSet::new();
    let mut i = 0;
    while i < b.len() {
        if is_ident_char(b[i]) {
            let ws = i;
            while i < b.len() && is_ident_char(b[i]) {
                i += 1;
            }
            let boundary = ws == 0 || !is_ident_char(b[ws - 1]);
            if !boundary {
                continue;
            }
            match &text[ws..i] {
                "return" => {
                    // value must begin on the same line (ASI)
                    let mut j = i;
                    while j < b.len() && (b[j] == b' ' || b[j] == b'\t') {
                        j += 1;
                    }
                    if j < b.len() && !matches!(b[j], b';' | b'}' | b')' | b',' | b'\n' | b'\r') {
                        returns = true;
                    }
                }
                "throw" => {
                    let mut j = i;
                    while j < b.len() && (b[j] == b' ' || b[j] == b'\t') {
                        j += 1;
                    }
                    let after_new = text[j..].starts_with("new ");
                    if after_new {
                        j += 4;
                        while j < b.len() && (b[j] == b' ' || b[j] == b'\t') {
                            j += 1;
                        }
                    }
                    if let Some(name) = dotted_name_after(&text, j, b.len()) {
                        // `throw err` on a local variable is not a type; keep
                        // `new X(...)` and names that look like types.
                        if after_new || name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
                        {
                            raises.insert(name);
                        }
                    }
                }
                _ => {}
            }
        } else {
            i += 1;
        }
    }
    (returns, raises)
}

/// Blank out anonymous `function`/arrow bodies so their returns/throws do not
/// leak into the enclosing entity.
fn mask_nested_blocks(b: &mut Vec<u8>) {
    loop {
        let text = String::from_utf8_lossy(b).into_owned();
        let mut target: Option<(usize, usize)> = None;
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'=' && i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                let mut j = i + 2;
                while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'{' {
                    if let Some(close) = match_brace(bytes, j) {
                        target = Some((j, close + 1));
                        break;
                    }
                }
                i = j;
            } else if is_ident_char(bytes[i]) {
                let ws = i;
                while i < bytes.len() && is_ident_char(bytes[i]) {
                    i += 1;
                }
                let boundary = ws == 0 || !is_ident_char(bytes[ws - 1]);
                if boundary && &text[ws..i] == "function" {
                    let mut j = i;
                    while j < bytes.len() && bytes[j] != b'{' && bytes[j] != b';' {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j] == b'{' {
                        if let Some(close) = match_brace(bytes, j) {
                            target = Some((j, close + 1));
                            break;
                        }
                    }
                }
            } else {
                i += 1;
            }
        }
        match target {
            Some((lo, hi)) => {
                for k in lo..hi {
                    if b[k] != b'\n' && b[k] != b'\r' {
                        b[k] = b' ';
                    }
                }
            }
            None => break,
        }
    }
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
