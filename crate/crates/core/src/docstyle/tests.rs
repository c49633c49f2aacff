use super::*;

/// Independent naive reference parser used as the oracle for section
/// extraction. Deliberately dumb: split into chunks on blank lines, then
/// classify each chunk by its first line. Kept free of the production
/// parser's machinery.
mod naive {
    #[derive(Debug, Default, PartialEq)]
    pub struct Outline {
        pub summary: Option<String>,
        pub params: Vec<(String, Option<String>, String)>,
        pub returns: Option<(Option<String>, String)>,
        pub raises: Vec<(String, String)>,
        pub other_lines: Vec<String>,
    }

    pub fn parse(text: &str, style: &str) -> Outline {
        let mut out = Outline::default();
        let lines: Vec<String> = text
            .lines()
            .map(|l| {
                let t = l.trim_start();
                let guttered = match t.strip_prefix('*') {
                    Some(rest) if style == "javadoc" => rest.trim_start().to_string(),
                    _ => l.trim().to_string(),
                };
                guttered
            })
            .collect();

        let mut i = 0;
        while i < lines.len() && lines[i].is_empty() {
            i += 1;
        }
        let mut summary = String::new();
        while i < lines.len() && !lines[i].is_empty() && !is_marker(&lines[i], style) {
            if !summary.is_empty() {
                summary.push(' ');
            }
            summary.push_str(&lines[i]);
            i += 1;
        }
        if !summary.is_empty() {
            out.summary = Some(summary);
        }

        match style {
            "rest" => {
                while i < lines.len() {
                    let l = &lines[i];
                    if let Some(rest) = l.strip_prefix(":param ") {
                        if let Some((n, d)) = rest.split_once(':') {
                            out.params.push((n.trim().into(), None, d.trim().into()));
                        }
                    } else if let Some(rest) = l.strip_prefix(":type ") {
                        if let Some((n, t)) = rest.split_once(':') {
                            if let Some(p) =
                                out.params.iter_mut().find(|p| p.0 == n.trim())
                            {
                                p.1 = Some(t.trim().into());
                            }
                        }
                    } else if let Some(d) = l
                        .strip_prefix(":returns:")
                        .or_else(|| l.strip_prefix(":return:"))
                    {
                        let entry = out.returns.get_or_insert((None, String::new()));
                        entry.1 = d.trim().into();
                    } else if let Some(t) = l.strip_prefix(":rtype:") {
                        let entry = out.returns.get_or_insert((None, String::new()));
                        entry.0 = Some(t.trim().into());
                    } else if let Some(rest) = l.strip_prefix(":raises ") {
                        if let Some((t, d)) = rest.split_once(':') {
                            out.raises.push((t.trim().into(), d.trim().into()));
                        }
                    } else if !l.is_empty() {
                        out.other_lines.push(l.clone());
                    }
                    i += 1;
                }
            }
            "google" => {
                let mut section = "";
                while i < lines.len() {
                    let l = &lines[i];
                    match l.as_str() {
                        "Args:" => section = "args",
                        "Returns:" => section = "returns",
                        "Raises:" => section = "raises",
                        "" => {}
                        _ => match section {
                            "args" => {
                                if let Some((head, d)) = l.split_once(':') {
                                    let (n, t) = match head.trim().split_once(" (") {
                                        Some((n, t)) => {
                                            (n.trim(), Some(t.trim_end_matches(')').into()))
                                        }
                                        None => (head.trim(), None),
                                    };
                                    out.params.push((n.into(), t, d.trim().into()));
                                }
                            }
                            "returns" => {
                                let entry =
                                    out.returns.get_or_insert((None, String::new()));
                                match l.split_once(": ") {
                                    Some((t, d)) if !t.contains(' ') => {
                                        entry.0 = Some(t.trim().into());
                                        entry.1 = d.trim().into();
                                    }
                                    _ => entry.1 = l.clone(),
                                }
                            }
                            "raises" => {
                                if let Some((t, d)) = l.split_once(':') {
                                    out.raises.push((t.trim().into(), d.trim().into()));
                                }
                            }
                            _ => out.other_lines.push(l.clone()),
                        },
                    }
                    i += 1;
                }
            }
            "numpy" => {
                let mut section = "";
                while i < lines.len() {
                    let l = lines[i].clone();
                    let next_is_dash = lines
                        .get(i + 1)
                        .map(|n| n.len() >= 3 && n.bytes().all(|b| b == b'-'))
                        .unwrap_or(false);
                    if next_is_dash && ["Parameters", "Returns", "Raises"].contains(&l.as_str()) {
                        section = match l.as_str() {
                            "Parameters" => "params",
                            "Returns" => "returns",
                            _ => "raises",
                        };
                        i += 2;
                        continue;
                    } else if next_is_dash && !l.is_empty() {
                        section = "other";
                        out.other_lines.push(l.clone());
                        out.other_lines.push(lines[i + 1].clone());
                        i += 2;
                        continue;
                    }
                    if l.is_empty() {
                        i += 1;
                        continue;
                    }
                    // original line to know if it was indented (a description)
                    let original = text.lines().nth(i).unwrap_or("");
                    let deeper = original.starts_with("    ") || original.starts_with('\t');
                    match section {
                        "params" => {
                            if deeper {
                                if let Some(p) = out.params.last_mut() {
                                    p.2 = l.clone();
                                }
                            } else {
                                match l.split_once(" : ") {
                                    Some((n, t)) => out.params.push((
                                        n.trim().into(),
                                        Some(t.trim().into()),
                                        String::new(),
                                    )),
                                    None => out.params.push((l.clone(), None, String::new())),
                                }
                            }
                        }
                        "returns" => {
                            let entry = out.returns.get_or_insert((None, String::new()));
                            if deeper {
                                entry.1 = l.clone();
                            } else {
                                entry.0 = Some(l.clone());
                            }
                        }
                        "raises" => {
                            if deeper {
                                if let Some(r) = out.raises.last_mut() {
                                    r.1 = l.clone();
                                }
                            } else {
                                out.raises.push((l.clone(), String::new()));
                            }
                        }
                        _ => out.other_lines.push(l.clone()),
                    }
                    i += 1;
                }
            }
            "javadoc" => {
                while i < lines.len() {
                    let l = &lines[i];
                    if let Some(rest) = l.strip_prefix("@param ") {
                        let mut w = rest.splitn(2, ' ');
                        out.params.push((
                            w.next().unwrap_or("").into(),
                            None,
                            w.next().unwrap_or("").trim().into(),
                        ));
                    } else if let Some(d) = l.strip_prefix("@return") {
                        out.returns = Some((None, d.trim().into()));
                    } else if let Some(rest) = l.strip_prefix("@throws ") {
                        let mut w = rest.splitn(2, ' ');
                        out.raises.push((
                            w.next().unwrap_or("").into(),
                            w.next().unwrap_or("").trim().into(),
                        ));
                    } else if !l.is_empty() {
                        out.other_lines.push(l.clone());
                    }
                    i += 1;
                }
            }
            _ => {}
        }
        out
    }

    fn is_marker(line: &str, style: &str) -> bool {
        match style {
            "rest" => line.starts_with(':'),
            "google" => ["Args:", "Returns:", "Raises:"].contains(&line),
            "numpy" => ["Parameters", "Returns", "Raises"].contains(&line),
            "javadoc" => line.starts_with('@'),
            _ => false,
        }
    }
}

fn outline_of(ast: &DocAst) -> naive::Outline {
    let ast = canonicalize(ast.clone());
    naive::Outline {
        summary: ast.summary().map(|s| s.to_string()),
        params: ast
            .params()
            .map(|p| (p.name.clone(), p.type_text.clone(), p.desc.clone()))
            .collect(),
        returns: ast.returns().map(|(t, d)| (t.clone(), d.to_string())),
        raises: ast
            .raises()
            .map(|r| (r.type_text.clone(), r.desc.clone()))
            .collect(),
        other_lines: Vec::new(),
    }
}

#[test]
fn detect_style_markers() {
    assert_eq!(detect_style("Sum.\n\n:param a: x").0, Some(Style::Rest));
    assert_eq!(detect_style("Sum.\n\nArgs:\n    a: x").0, Some(Style::Google));
    assert_eq!(detect_style("").0, None);
    assert_eq!(
        detect_style("Sum.\n\nParameters\n----------\na : int").0,
        Some(Style::Numpy)
    );
    assert_eq!(detect_style(" * Sum.\n * @param a x").0, Some(Style::Javadoc));
    assert_eq!(detect_style("Just a summary line.").0, None);
}

#[test]
fn detect_is_deterministic_and_total() {
    for raw in ["", "x", ":param a: x\nArgs:", "@return x\n:returns: y"] {
        assert_eq!(detect_style(raw), detect_style(raw));
    }
    // tie between rest and javadoc resolves to rest
    let (style, scores) = detect_style(":param a: x\n@param a x");
    assert_eq!(scores.rest, 1);
    assert_eq!(scores.javadoc, 1);
    assert_eq!(style, Some(Style::Rest));
}

#[test]
fn parse_rest_example() {
    let ast = parse_docstring(
        "Return the sum.\n\n:param a: first addend\n:param b: second addend\n:returns: the sum",
        None,
    );
    assert_eq!(ast.summary(), Some("Return the sum."));
    let params: Vec<_> = ast.params().collect();
    assert_eq!(params.len(), 2);
    assert_eq!(params[0].name, "a");
    assert_eq!(params[0].desc, "first addend");
    assert_eq!(params[1].name, "b");
    assert_eq!(ast.returns().unwrap().1, "the sum");
}

#[test]
fn parse_empty_is_empty() {
    let ast = parse_docstring("", None);
    assert!(ast.blocks.is_empty());
}

#[test]
fn numpy_custom_section_stays_opaque() {
    let text = "\
Do the thing.

Parameters
----------
x : int
    the input
y
    another

Raises
------
ValueError
    when x is negative

Notes
-----
Algebra happens here.
";
    let ast = parse_docstring(text, None);
    assert_eq!(ast.style_detected, Some(Style::Numpy));

    // oracle agreement on extracted sections
    let reference = naive::parse(text, "numpy");
    let got = outline_of(&ast);
    assert_eq!(got.summary, reference.summary);
    assert_eq!(got.params, reference.params);
    assert_eq!(got.raises, reference.raises);

    // the Notes section survives verbatim as opaque text
    let opaque: Vec<&str> = ast
        .blocks
        .iter()
        .filter_map(|b| match b {
            Block::Opaque(t) => Some(t.as_str()),
            _ => None,
        })
        .collect();
    assert!(opaque.iter().any(|t| t.contains("Notes") && t.contains("Algebra happens here.")));
}

#[test]
fn rest_to_google_render_matches_spec() {
    let ast = parse_docstring(
        "Return the sum.\n\n:param a: first addend\n:param b: second addend\n:returns: the sum",
        None,
    );
    let rendered = render_docstring(&ast, Style::Google, "", 79);
    assert_eq!(
        rendered,
        "Return the sum.\n\nArgs:\n    a: first addend\n    b: second addend\n\nReturns:\n    the sum"
    );
    // oracle: the reference parser sees the same canonical content
    let reference = naive::parse(&rendered, "google");
    let got = outline_of(&ast);
    assert_eq!(got.summary, reference.summary);
    assert_eq!(got.params, reference.params);
    assert_eq!(got.returns, reference.returns);
}

#[test]
fn summary_only_renders_single_line() {
    let ast = DocAst {
        blocks: vec![Block::Summary("Hi.".into())],
        style_detected: None,
    };
    assert_eq!(render_docstring(&ast, Style::Google, "    ", 79), "Hi.");
}

#[test]
fn canonicalize_merges_duplicate_sections() {
    let ast = DocAst {
        blocks: vec![
            Block::Params(vec![DocParam {
                name: "a".into(),
                type_text: None,
                desc: "x".into(),
            }]),
            Block::Params(vec![DocParam {
                name: "b".into(),
                type_text: None,
                desc: "y".into(),
            }]),
        ],
        style_detected: None,
    };
    let canon = canonicalize(ast);
    assert_eq!(canon.blocks.len(), 1);
    assert_eq!(canon.params().count(), 2);
}

#[test]
fn canonicalize_is_idempotent_and_drops_blank_opaque() {
    let ast = DocAst {
        blocks: vec![
            Block::Summary("S.".into()),
            Block::Opaque("   \n  ".into()),
            Block::Description("text\n\n\n\nmore   ".into()),
        ],
        style_detected: None,
    };
    let once = canonicalize(ast);
    let twice = canonicalize(once.clone());
    assert_eq!(once, twice);
    assert!(once.blocks.iter().all(|b| !matches!(b, Block::Opaque(_))));
    assert!(matches!(&once.blocks[1], Block::Description(t) if t == "text\n\nmore"));
}

#[test]
fn javadoc_gutters_strip_and_restore() {
    let raw = "\n * Compute area.\n *\n * @param w width\n * @param h height\n * @return the area\n ";
    let ast = parse_docstring(raw, None);
    assert_eq!(ast.style_detected, Some(Style::Javadoc));
    assert_eq!(ast.summary(), Some("Compute area."));
    assert_eq!(ast.params().count(), 2);

    let rendered = render_docstring(&ast, Style::Javadoc, "", 79);
    for line in rendered.lines() {
        assert!(line.starts_with(" *"), "line missing gutter: {line:?}");
    }
    let reparsed = parse_docstring(&rendered, Some(Style::Javadoc));
    assert!(reparsed.canonical_eq(&ast));
}

#[test]
fn unknown_style_preserves_lines() {
    let raw = "Top summary.\n\nSome prose here.\nAcross lines.\n\nAnd a second paragraph.";
    let ast = parse_docstring(raw, None);
    assert_eq!(ast.style_detected, None);
    let rendered = render_docstring(&ast, Style::Rest, "", 79);
    let in_lines: Vec<&str> = raw.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let out_lines: Vec<&str> = rendered.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    assert_eq!(in_lines, out_lines);
}

#[test]
fn render_no_tabs_and_no_trailing_whitespace() {
    let ast = parse_docstring(
        "Sum.\n\n:param a: x\n:param b:\n:returns: total\n:raises E: bad",
        None,
    );
    for style in [Style::Rest, Style::Google, Style::Numpy, Style::Javadoc] {
        let rendered = render_docstring(&ast, style, "    ", 79);
        for line in rendered.lines() {
            assert!(!line.contains('\t'));
            assert_eq!(line, line.trim_end(), "trailing ws in {style}: {line:?}");
        }
    }
}

#[test]
fn summary_yields_to_leading_section_marker() {
    let ast = parse_docstring(":param a: only params", None);
    assert!(ast.summary().is_none());
    assert_eq!(ast.params().count(), 1);
}

mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn word() -> impl Strategy<Value = String> {
        "[a-z]{1,8}"
    }

    fn ident() -> impl Strategy<Value = String> {
        "[a-z_][a-z0-9_]{0,6}"
    }

    fn desc() -> impl Strategy<Value = String> {
        proptest::collection::vec(word(), 1..5).prop_map(|ws| ws.join(" "))
    }

    fn doc_param() -> impl Strategy<Value = DocParam> {
        (ident(), proptest::option::of(ident()), desc()).prop_map(|(name, ty, desc)| DocParam {
            name,
            type_text: ty,
            desc,
        })
    }

    fn arb_ast() -> impl Strategy<Value = DocAst> {
        let summary = proptest::collection::vec(word(), 1..6)
            .prop_map(|ws| format!("{}.", ws.join(" ")));
        let description = proptest::option::of(desc());
        let params = proptest::collection::vec(doc_param(), 0..4);
        let returns = proptest::option::of((proptest::option::of(ident()), desc()));
        let raises = proptest::collection::vec(
            ("[A-Z][a-zA-Z]{2,10}", desc()).prop_map(|(t, d)| RaiseItem {
                type_text: t,
                desc: d,
            }),
            0..3,
        );
        (summary, description, params, returns, raises).prop_map(
            |(summary, description, params, returns, raises)| {
                let mut blocks = vec![Block::Summary(summary)];
                if let Some(d) = description {
                    blocks.push(Block::Description(d));
                }
                let mut seen = std::collections::BTreeSet::new();
                let params: Vec<DocParam> = params
                    .into_iter()
                    .filter(|p| seen.insert(p.name.clone()))
                    .collect();
                if !params.is_empty() {
                    blocks.push(Block::Params(params));
                }
                if let Some((ty, d)) = returns {
                    blocks.push(Block::Returns {
                        type_text: ty,
                        desc: d,
                    });
                }
                if !raises.is_empty() {
                    blocks.push(Block::Raises(raises));
                }
                DocAst {
                    blocks,
                    style_detected: None,
                }
            },
        )
    }

    /// Javadoc has no parameter-type syntax; restrict to its expressible
    /// subset before round-tripping.
    fn strip_types(ast: &DocAst) -> DocAst {
        let blocks = ast
            .blocks
            .iter()
            .cloned()
            .map(|b| match b {
                Block::Params(items) => Block::Params(
                    items
                        .into_iter()
                        .map(|p| DocParam {
                            type_text: None,
                            ..p
                        })
                        .collect(),
                ),
                Block::Returns { desc, .. } => Block::Returns {
                    type_text: None,
                    desc,
                },
                other => other,
            })
            .collect();
        DocAst {
            blocks,
            style_detected: ast.style_detected,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_all_styles(ast in arb_ast(), indent in "( {0,8})") {
            for style in [Style::Rest, Style::Google, Style::Numpy, Style::Javadoc] {
                let subject = if style == Style::Javadoc { strip_types(&ast) } else { ast.clone() };
                let rendered = render_docstring(&subject, style, &indent, 79);
                let reparsed = parse_docstring(&rendered, Some(style));
                prop_assert!(
                    reparsed.canonical_eq(&subject),
                    "style {} failed\nrendered:\n{}\nexpected {:?}\ngot {:?}",
                    style,
                    rendered,
                    canonicalize(subject.clone()).blocks,
                    canonicalize(reparsed).blocks
                );
            }
        }

        #[test]
        fn cross_style_preserves_entries(ast in arb_ast()) {
            let base = canonicalize(ast.clone());
            let base_params: Vec<(String, String)> = base
                .params()
                .map(|p| (p.name.clone(), p.desc.clone()))
                .collect();
            let base_raises: Vec<(String, String)> = base
                .raises()
                .map(|r| (r.type_text.clone(), r.desc.clone()))
                .collect();
            for style in [Style::Rest, Style::Google, Style::Numpy, Style::Javadoc] {
                let converted = parse_docstring(&render_docstring(&ast, style, "", 79), Some(style));
                let canon = canonicalize(converted);
                let params: Vec<(String, String)> = canon
                    .params()
                    .map(|p| (p.name.clone(), p.desc.clone()))
                    .collect();
                let raises: Vec<(String, String)> = canon
                    .raises()
                    .map(|r| (r.type_text.clone(), r.desc.clone()))
                    .collect();
                prop_assert_eq!(&params, &base_params, "params differ in {}", style);
                prop_assert_eq!(&raises, &base_raises, "raises differ in {}", style);
                prop_assert_eq!(
                    canon.returns().map(|(_, d)| d.to_string()),
                    base.returns().map(|(_, d)| d.to_string()),
                    "returns differ in {}", style
                );
            }
        }

        #[test]
        fn detect_total(raw in "\\PC{0,200}") {
            let _ = detect_style(&raw);
            let _ = parse_docstring(&raw, None);
        }
    }
}
