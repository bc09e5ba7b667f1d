use std::sync::LazyLock;

use regex::Regex;

use super::{InlineRemark, RemarkKind, SourceLocation};

// `[loc: ]remark: <body> [-Rpass<suffix>=<pass>]`
static TAGGED: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?:(?P<file>.+?):(?P<line>\d+):(?P<col>\d+): )?remark: (?P<body>.*?)(?: \[-Rpass(?P<suffix>|-missed|-analysis)=(?P<pass>[\w.-]+)\])?\s*$",
    )
    .unwrap()
});

// Link-time remarks printed by the LTO plugin carry neither `remark:` nor a
// pass tag, only a location and the quoted body.
static BARE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?P<file>[^\s:][^:]*):(?P<line>\d+):(?P<col>\d+): (?P<body>'.*?)\s*$").unwrap());

static BODY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?P<callee>'[^']*'|[^\s']+) (?P<verb>will not be inlined into|not inlined into|inlined into) (?P<caller>'[^']*'|[^\s']+?)(?P<rest>(?:[:;,]| with | because | at callsite ).*|)$",
    )
    .unwrap()
});

static NUMERIC: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\s*\(cost=(?P<cost>-?\d+), threshold=(?P<threshold>-?\d+)\)").unwrap());

static CALLSITE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s*at callsite [^;]*;?\s*$").unwrap());

static SYMBOLIC_COST: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*with \(cost=[a-z]+\)").unwrap());

/// Result of parsing a stream, including remark-shaped lines that did not fit
/// the grammar.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedStream {
    pub remarks: Vec<InlineRemark>,
    pub unparsed: Vec<String>,
}

enum Line {
    Remark(InlineRemark),
    Unparsed,
    Other,
}

pub fn parse_remark_line(line: &str) -> Option<InlineRemark> {
    match classify(line) {
        Line::Remark(r) => Some(r),
        _ => None,
    }
}

pub fn parse_remark_stream(text: &str) -> Vec<InlineRemark> {
    text.lines().filter_map(parse_remark_line).collect()
}

pub fn parse_remark_stream_detailed(text: &str) -> ParsedStream {
    let mut out = ParsedStream::default();
    for line in text.lines() {
        match classify(line) {
            Line::Remark(r) => out.remarks.push(r),
            Line::Unparsed => {
                log::debug!("unparsed inline remark: {line}");
                out.unparsed.push(line.to_string());
            }
            Line::Other => {}
        }
    }
    out
}

fn classify(line: &str) -> Line {
    let line = line.trim_end_matches(['\r', '\n']);
    if let Some(c) = TAGGED.captures(line) {
        let suffix = c.name("suffix").map(|m| m.as_str());
        match c.name("pass").map(|m| m.as_str()) {
            Some("inline") | None => {}
            Some(_) => return Line::Other,
        }
        let location = location(&c);
        return match body(&c["body"], suffix, location) {
            Some(r) => Line::Remark(r.remark),
            // untagged `remark:` lines belong to other passes unless they read like ours
            None if suffix.is_some() || c["body"].contains("inlined into") => Line::Unparsed,
            None => Line::Other,
        };
    }
    if let Some(c) = BARE.captures(line) {
        if let Some(r) = body(&c["body"], None, location(&c)) {
            if r.callee_quoted && r.caller_quoted {
                return Line::Remark(r.remark);
            }
        }
    }
    Line::Other
}

fn location(c: &regex::Captures<'_>) -> Option<SourceLocation> {
    Some(SourceLocation {
        file: c.name("file")?.as_str().to_string(),
        line: c.name("line")?.as_str().parse().ok()?,
        column: c.name("col")?.as_str().parse().ok()?,
    })
}

struct Parsed {
    remark: InlineRemark,
    callee_quoted: bool,
    caller_quoted: bool,
}

fn unquote(s: &str) -> (String, bool) {
    match s.strip_prefix('\'').and_then(|t| t.strip_suffix('\'')) {
        Some(inner) => (inner.to_string(), true),
        None => (s.to_string(), false),
    }
}

fn body(text: &str, suffix: Option<&str>, location: Option<SourceLocation>) -> Option<Parsed> {
    let c = BODY.captures(text)?;
    let (callee, callee_quoted) = unquote(&c["callee"]);
    let (caller, caller_quoted) = unquote(&c["caller"]);
    let positive = &c["verb"] == "inlined into";
    let kind = match suffix {
        Some("-missed") => RemarkKind::Missed,
        Some("-analysis") => RemarkKind::Analysis,
        _ if positive => RemarkKind::Passed,
        _ => RemarkKind::Missed,
    };
    if kind == RemarkKind::Passed && (callee.is_empty() || caller.is_empty()) {
        return None;
    }

    let rest = &c["rest"];
    let (cost, threshold) = match NUMERIC.captures(rest) {
        Some(n) => (n["cost"].parse().ok(), n["threshold"].parse().ok()),
        None => (None, None),
    };
    let (cost, threshold) = match (cost, threshold) {
        (Some(c), Some(t)) => (Some(c), Some(t)),
        _ => (None, None),
    };

    Some(Parsed {
        remark: InlineRemark {
            kind,
            callee,
            caller,
            cost,
            threshold,
            reason: reason(rest),
            location,
        },
        callee_quoted,
        caller_quoted,
    })
}

fn reason(rest: &str) -> Option<String> {
    let text = if let Some(i) = rest.find(" because ") {
        &rest[i + " because ".len()..]
    } else {
        // `with (cost=always): always inline attribute at callsite ...`
        let t = SYMBOLIC_COST.replace(rest, "");
        let t = NUMERIC.replace(&t, "");
        return strip_reason(t.trim_start().strip_prefix(':')?);
    };
    strip_reason(&NUMERIC.replace(text, ""))
}

fn strip_reason(text: &str) -> Option<String> {
    let t = CALLSITE.replace(text, "");
    let t = t.trim().trim_end_matches(';').trim();
    (!t.is_empty()).then(|| t.to_string())
}
