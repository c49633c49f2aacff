use super::*;

fn parse_py(src: &str) -> (SourceUnit, Vec<CodeEntity>) {
    parse_source("test.py", src.as_bytes(), LanguageId::Python).unwrap()
}

fn parse_js(src: &str) -> (SourceUnit, Vec<CodeEntity>) {
    parse_source("test.js", src.as_bytes(), LanguageId::JsdocFamily).unwrap()
}

#[test]
fn function_without_docstring_gets_insertion_slot() {
    let (_, ents) = parse_py("def f():\n    pass\n");
    assert_eq!(ents.len(), 1);
    let e = &ents[0];
    assert_eq!(e.kind, EntityKind::Function);
    assert_eq!(e.name, "f");
    match &e.doc_slot {
        DocSlot::Insertion { offset, indent } => {
            assert_eq!(*offset, 9); // start of the `    pass` line
            assert_eq!(indent, "    ");
        }
        other => panic!("expected insertion slot, got {other:?}"),
    }
}

#[test]
fn function_with_docstring_gets_existing_slot() {
    let (unit, ents) = parse_py("def f():\n    \"\"\"Hi.\"\"\"\n");
    assert_eq!(ents.len(), 1);
    match &ents[0].doc_slot {
        DocSlot::Existing {
            span,
            raw_text,
            delimiter,
            indent,
        } => {
            assert_eq!(raw_text, "Hi.");
            assert_eq!(delimiter, "\"\"\"");
            assert_eq!(indent, "    ");
            assert_eq!(&unit.text()[span.start..span.end], "\"\"\"Hi.\"\"\"");
        }
        other => panic!("expected existing slot, got {other:?}"),
    }
}

#[test]
fn nested_entities_carry_qualified_names() {
    let src = "\
class C:
    def m1(self):
        def inner():
            pass
        return inner

    def m2(self):
        pass
";
    let (_, ents) = parse_py(src);
    let names: Vec<(&str, EntityKind)> = ents
        .iter()
        .map(|e| (e.qualified_name.as_str(), e.kind))
        .collect();
    assert_eq!(
        names,
        vec![
            ("C", EntityKind::Class),
            ("C.m1", EntityKind::Method),
            ("C.m1.inner", EntityKind::Function),
            ("C.m2", EntityKind::Method),
        ]
    );
}

#[test]
fn module_docstring_is_an_entity_only_when_present() {
    let (_, ents) = parse_py("\"\"\"Module doc.\"\"\"\n\ndef f():\n    pass\n");
    assert_eq!(ents[0].kind, EntityKind::Module);
    assert_eq!(ents[0].doc_slot.existing().unwrap().1, "Module doc.");
    assert_eq!(ents.len(), 2);

    let (_, ents) = parse_py("def f():\n    pass\n");
    assert!(ents.iter().all(|e| e.kind != EntityKind::Module));
}

#[test]
fn signature_param_kinds() {
    let sig = parse_signature("def f(a, b=1, *args, c, **kw):", LanguageId::Python).unwrap();
    let got: Vec<(&str, ParamKind, Option<&str>)> = sig
        .params
        .iter()
        .map(|p| (p.name.as_str(), p.kind, p.default_text.as_deref()))
        .collect();
    assert_eq!(
        got,
        vec![
            ("a", ParamKind::Positional, None),
            ("b", ParamKind::Positional, Some("1")),
            ("args", ParamKind::VarPositional, None),
            ("c", ParamKind::KeywordOnly, None),
            ("kw", ParamKind::VarKeyword, None),
        ]
    );
}

#[test]
fn signature_empty_and_annotated() {
    let sig = parse_signature("def f():", LanguageId::Python).unwrap();
    assert!(sig.params.is_empty());
    assert_eq!(sig.returns_annotation, None);

    let sig = parse_signature("def f(x: int = 0) -> str:", LanguageId::Python).unwrap();
    assert_eq!(sig.params.len(), 1);
    assert_eq!(sig.params[0].annotation_text.as_deref(), Some("int"));
    assert_eq!(sig.params[0].default_text.as_deref(), Some("0"));
    assert_eq!(sig.returns_annotation.as_deref(), Some("str"));
}

#[test]
fn signature_multiline_with_comments() {
    let sig = parse_signature(
        "def f(a,  # first\n      b=', c'):",
        LanguageId::Python,
    )
    .unwrap();
    let names: Vec<&str> = sig.params.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, vec!["a", "b"]);
    assert_eq!(sig.params[1].default_text.as_deref(), Some("', c'"));
}

#[test]
fn raises_scan_examples() {
    let raised = scan_raises("raise ValueError(\"x\")", LanguageId::Python);
    assert_eq!(raised.into_iter().collect::<Vec<_>>(), vec!["ValueError"]);

    let raised = scan_raises("x = 1  # raise KeyError\n", LanguageId::Python);
    assert!(raised.is_empty());

    let raised = scan_raises("raise pkg.errors.BadThing from exc\n", LanguageId::Python);
    assert_eq!(raised.into_iter().collect::<Vec<_>>(), vec!["pkg.errors.BadThing"]);

    // bare raise is ignored
    assert!(scan_raises("try:\n    pass\nexcept:\n    raise\n", LanguageId::Python).is_empty());
}

#[test]
fn raises_in_nested_def_belong_to_inner_entity() {
    let src = "\
def outer():
    def fail():
        raise KeyError(\"k\")
    return fail
";
    let (_, ents) = parse_py(src);
    let outer = ents.iter().find(|e| e.qualified_name == "outer").unwrap();
    let inner = ents.iter().find(|e| e.qualified_name == "outer.fail").unwrap();
    assert!(outer.facts.raises.is_empty());
    assert!(outer.facts.returns_value);
    assert_eq!(inner.facts.raises.iter().next().unwrap(), "KeyError");
}

#[test]
fn returns_scan_examples() {
    assert!(scan_returns("return a + b", LanguageId::Python));
    assert!(!scan_returns("return", LanguageId::Python));
    assert!(!scan_returns("for x in xs:\n    yield x\n", LanguageId::Python));
    assert!(!scan_returns("s = \"return 1\"\n", LanguageId::Python));
    assert!(scan_returns("if x:\n    return x\n", LanguageId::Python));
    assert!(scan_returns("return \"value\"", LanguageId::Python));
}

#[test]
fn adversarial_strings_do_not_confuse_slots() {
    let src = r#"
QUOTES = "she said \"hi\" to ''' everyone"
RAW = r"\n not a newline '"
FSTR = f"{x}{'}'}"
CONT = "one" \
    "two"

def f():
    '''Doc with "quotes" and # not a comment.'''
    return BYTES

BYTES = b'\x00"""'
"#;
    let (unit, ents) = parse_py(src);
    let f = ents.iter().find(|e| e.name == "f").unwrap();
    let (span, raw) = f.doc_slot.existing().unwrap();
    assert_eq!(raw, r#"Doc with "quotes" and # not a comment."#);
    assert_eq!(
        &unit.text()[span.start..span.end],
        r#"'''Doc with "quotes" and # not a comment.'''"#
    );
}

#[test]
fn slot_reencode_reproduces_exact_bytes() {
    let sources = [
        "def f():\n    \"\"\"Hi.\"\"\"\n",
        "def f():\n    r'''raw \\n doc'''\n",
        "def f():\n    \"one liner\"\n",
        "\"\"\"Module.\n\nMore.\n\"\"\"\ndef g():\n    pass\n",
        "class C:\n    \"\"\"Doc.\n\n    Indented body.\n    \"\"\"\n    pass\n",
    ];
    for src in sources {
        let (unit, ents) = parse_py(src);
        for e in &ents {
            if let DocSlot::Existing { span, .. } = &e.doc_slot {
                let encoded = e.doc_slot.reencode().unwrap();
                assert_eq!(
                    encoded.as_bytes(),
                    &unit.content()[span.start..span.end],
                    "slot fidelity failed in {src:?}"
                );
            }
        }
    }
}

#[test]
fn existing_slots_never_overlap_and_headers_ascend() {
    let src = "\
class A:
    \"\"\"A.\"\"\"
    def m(self):
        \"\"\"m.\"\"\"
        return 1

def f():
    \"\"\"f.\"\"\"
";
    let (_, ents) = parse_py(src);
    let mut spans: Vec<Span> = ents
        .iter()
        .filter_map(|e| e.doc_slot.existing().map(|(s, _)| *s))
        .collect();
    spans.sort();
    for w in spans.windows(2) {
        assert!(w[0].end <= w[1].start, "overlapping doc slots");
    }
    let offsets: Vec<usize> = ents.iter().map(|e| e.header_span.start).collect();
    assert!(offsets.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn parse_is_deterministic() {
    let src = "class C:\n    def m(self):\n        return 1\n";
    let (_, a) = parse_py(src);
    let (_, b) = parse_py(src);
    let sig_a: Vec<_> = a.iter().map(|e| format!("{:?}{:?}", e.qualified_name, e.doc_slot)).collect();
    let sig_b: Vec<_> = b.iter().map(|e| format!("{:?}{:?}", e.qualified_name, e.doc_slot)).collect();
    assert_eq!(sig_a, sig_b);
}

#[test]
fn inline_body_is_reported_unpatchable() {
    let (_, ents) = parse_py("def f(): pass\n");
    assert_eq!(ents.len(), 1);
    assert!(ents[0].inline_body);
    assert!(!ents[0].slot_patchable());
}

#[test]
fn decorators_are_not_part_of_header() {
    let src = "@deco(arg)\ndef f(a):\n    return a\n";
    let (unit, ents) = parse_py(src);
    let f = &ents[0];
    assert!(unit.text()[f.header_span.start..f.header_span.end].starts_with("def f"));
    assert_eq!(f.signature.params.len(), 1);
}

#[test]
fn crlf_files_parse_with_flavor() {
    let src = "def f():\r\n    \"\"\"Hi.\"\"\"\r\n";
    let (unit, ents) = parse_py(src);
    assert_eq!(unit.newline_flavor, NewlineFlavor::CrLf);
    assert_eq!(ents[0].doc_slot.existing().unwrap().1, "Hi.");
}

#[test]
fn invalid_utf8_is_an_encoding_error() {
    let err = parse_source("x.py", &[0x64, 0xff, 0xfe], LanguageId::Python).unwrap_err();
    assert!(matches!(err, SourceError::Encoding { .. }));
}

#[test]
fn unterminated_triple_quote_is_fatal() {
    let err = parse_source("x.py", b"def f():\n    \"\"\"oops\n", LanguageId::Python).unwrap_err();
    assert!(matches!(err, SourceError::Parse { .. }));
}

#[test]
fn private_names() {
    let (_, ents) = parse_py("def _hidden():\n    pass\n\ndef __dunder__():\n    pass\n");
    assert!(ents[0].is_private());
    assert!(!ents[1].is_private());
}

// jsdoc family

#[test]
fn js_function_with_doc_block() {
    let src = "\
/**
 * Adds two numbers.
 * @param a first
 */
function add(a, b) {
    return a + b;
}
";
    let (unit, ents) = parse_js(src);
    assert_eq!(ents.len(), 1);
    let e = &ents[0];
    assert_eq!(e.kind, EntityKind::Function);
    assert_eq!(e.name, "add");
    let (span, raw) = e.doc_slot.existing().unwrap();
    assert!(raw.contains("@param a first"));
    assert!(unit.text()[span.start..span.end].starts_with("/**"));
    assert!(unit.text()[span.start..span.end].ends_with("*/"));
    assert!(e.facts.returns_value);
    let names: Vec<&str> = e.signature.params.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, vec!["a", "b"]);
}

#[test]
fn js_class_methods_get_qualified_names() {
    let src = "\
class Greeter {
    constructor(name) {
        this.name = name;
    }

    greet(excited) {
        if (!excited) {
            return this.name;
        }
        return this.name + '!';
    }
}
";
    let (_, ents) = parse_js(src);
    let names: Vec<(&str, EntityKind)> = ents
        .iter()
        .map(|e| (e.qualified_name.as_str(), e.kind))
        .collect();
    assert_eq!(
        names,
        vec![
            ("Greeter", EntityKind::Class),
            ("Greeter.constructor", EntityKind::Method),
            ("Greeter.greet", EntityKind::Method),
        ]
    );
    assert!(ents[2].facts.returns_value);
}

#[test]
fn js_insertion_point_is_line_above_declaration() {
    let src = "function f(x) {\n    return x;\n}\n";
    let (_, ents) = parse_js(src);
    match &ents[0].doc_slot {
        DocSlot::Insertion { offset, indent } => {
            assert_eq!(*offset, 0);
            assert_eq!(indent, "");
        }
        other => panic!("expected insertion, got {other:?}"),
    }
}

#[test]
fn java_method_headers_parse() {
    let src = "\
public class Calc {
    /** Doubles. */
    public int twice(int x) {
        return x * 2;
    }

    public void log(String msg) throws IOException {
        throw new IOException(msg);
    }
}
";
    let (_, ents) = parse_js(src);
    let twice = ents.iter().find(|e| e.name == "twice").unwrap();
    assert_eq!(twice.kind, EntityKind::Method);
    assert_eq!(twice.qualified_name, "Calc.twice");
    assert_eq!(twice.signature.params[0].name, "x");
    assert_eq!(twice.signature.params[0].annotation_text.as_deref(), Some("int"));
    assert_eq!(twice.signature.returns_annotation.as_deref(), Some("int"));
    assert_eq!(twice.doc_slot.existing().unwrap().1.trim(), "Doubles.");

    let log = ents.iter().find(|e| e.name == "log").unwrap();
    assert!(log.facts.raises.contains("IOException"));
    assert!(!log.facts.returns_value);
}

#[test]
fn js_arrow_and_template_literals() {
    let src = "\
const greet = (name) => {
    const msg = `hello ${name} {not a brace}`;
    return msg;
};

const ignored = 42;
";
    let (_, ents) = parse_js(src);
    assert_eq!(ents.len(), 1);
    assert_eq!(ents[0].name, "greet");
    assert!(ents[0].facts.returns_value);
}

#[test]
fn js_throw_in_callback_is_not_attributed_to_outer() {
    let src = "\
function outer(xs) {
    xs.forEach(function (x) {
        throw new RangeError(x);
    });
    return xs.map((x) => { throw new TypeError(x); });
}
";
    let (_, ents) = parse_js(src);
    let outer = ents.iter().find(|e| e.name == "outer").unwrap();
    assert!(outer.facts.raises.is_empty(), "got {:?}", outer.facts.raises);
}

#[test]
fn ts_signature_types() {
    let sig = parse_signature(
        "function load(path: string, retries: number = 3, ...rest: string[]): Promise<Data>",
        LanguageId::JsdocFamily,
    )
    .unwrap();
    assert_eq!(sig.params.len(), 3);
    assert_eq!(sig.params[0].annotation_text.as_deref(), Some("string"));
    assert_eq!(sig.params[1].default_text.as_deref(), Some("3"));
    assert_eq!(sig.params[2].kind, ParamKind::VarPositional);
    assert_eq!(sig.returns_annotation.as_deref(), Some("Promise<Data>"));
}

#[test]
fn line_of_maps_offsets() {
    let (unit, _) = parse_py("a = 1\nb = 2\nc = 3\n");
    assert_eq!(unit.line_of(0), 1);
    assert_eq!(unit.line_of(6), 2);
    assert_eq!(unit.line_of(13), 3);
}
