//! Parser and printer for the problem file format.
//!
//! ```text
//! # maximal independent set
//! delta 3 2
//! nodes:
//! M^3
//! P U^2
//! edges:
//! M [P U]
//! U^2
//! ```
//!
//! Configurations may also be given inline, separated by `|`, with `;`
//! separating sections: `nodes: M^3 | P U^2 ; edges: M [U P] | U U`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::constraint::Config;
use crate::error::{Error, Result};
use crate::label::{ColorId, Label};
use crate::problem::{LabelConfig, Problem};

/// Parses problem text into a canonical [`Problem`].
pub fn parse_problem(text: &str) -> Result<Problem> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut section: Option<bool> = None; // Some(true) = nodes
    let mut nodes: Vec<(usize, LabelConfig)> = Vec::new();
    let mut edges: Vec<(usize, LabelConfig)> = Vec::new();

    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for segment in line.split(';') {
            let seg_col = offset;
            offset += segment.len() + 1;
            let trimmed_start = segment.len() - segment.trim_start().len();
            let mut body = segment.trim();
            let mut col = seg_col + trimmed_start;
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = keyword(body, "delta") {
                if header.is_some() {
                    return Err(syntax(line_no, col, "duplicate `delta` header"));
                }
                let nums: Vec<&str> = rest.split_whitespace().collect();
                let parsed: Vec<usize> = nums.iter().filter_map(|n| n.parse().ok()).collect();
                if nums.len() != 2 || parsed.len() != 2 {
                    return Err(syntax(line_no, col, "expected `delta <node arity> <edge arity>`"));
                }
                if parsed[0] < 1 || parsed[1] < 1 {
                    return Err(syntax(line_no, col, "arities must be positive"));
                }
                header = Some((parsed[0], parsed[1], line_no));
                continue;
            }
            for (name, is_nodes) in [("nodes", true), ("edges", false)] {
                if let Some(rest) = section_start(body, name) {
                    section = Some(is_nodes);
                    col += body.len() - rest.len();
                    body = rest;
                    break;
                }
            }
            let mut piece_col = col;
            for piece in body.split('|') {
                let lead = piece.len() - piece.trim_start().len();
                let content = piece.trim();
                let this_col = piece_col + lead;
                piece_col += piece.len() + 1;
                if content.is_empty() {
                    continue;
                }
                let config = parse_config(content, line_no, this_col + 1)?;
                match section {
                    Some(true) => nodes.push((line_no, config)),
                    Some(false) => edges.push((line_no, config)),
                    None => {
                        return Err(syntax(
                            line_no,
                            this_col + 1,
                            "configuration before any `nodes:` or `edges:` section",
                        ))
                    }
                }
            }
        }
    }

    let (node_arity, edge_arity) = match header {
        Some((d, e, _)) => (d, e),
        None => (
            nodes.first().map(|(_, c)| c.len()).unwrap_or(2),
            edges.first().map(|(_, c)| c.len()).unwrap_or(2),
        ),
    };
    for (line, c) in &nodes {
        check_arity(*line, node_arity, c.len())?;
    }
    for (line, c) in &edges {
        check_arity(*line, edge_arity, c.len())?;
    }
    let nodes: Vec<LabelConfig> = nodes.into_iter().map(|(_, c)| c).collect();
    let edges: Vec<LabelConfig> = edges.into_iter().map(|(_, c)| c).collect();
    Problem::from_label_configs(node_arity, edge_arity, &nodes, &edges, [])
}

fn check_arity(line: usize, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::Arity { line, expected, found })
    } else {
        Ok(())
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// `body` starts with the keyword followed by whitespace.
fn keyword<'a>(body: &'a str, kw: &str) -> Option<&'a str> {
    let rest = body.strip_prefix(kw)?;
    rest.starts_with(char::is_whitespace).then_some(rest)
}

/// `body` starts with `name` and a colon, possibly separated by spaces.
fn section_start<'a>(body: &'a str, name: &str) -> Option<&'a str> {
    body.strip_prefix(name)?.trim_start().strip_prefix(':')
}

/// Parses a single label token such as `M`, `X`, `L{0.1,1.2}`, `P<2>` or `{A,B}`.
pub fn parse_label_token(text: &str) -> Result<Label> {
    let mut cur = Cursor::new(text.trim(), 1, 1);
    let label = cur.label()?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing characters after label"));
    }
    Ok(label)
}

/// Parses one condensed configuration such as `B [B W]^2`.
pub fn parse_config(text: &str, line: usize, column: usize) -> Result<LabelConfig> {
    let mut cur = Cursor::new(text, line, column);
    let mut slots = Vec::new();
    loop {
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        let disjunction: BTreeSet<Label> = if cur.peek() == Some('[') {
            cur.bump();
            let mut members = BTreeSet::new();
            loop {
                cur.skip_separators();
                match cur.peek() {
                    Some(']') => {
                        cur.bump();
                        break;
                    }
                    None => return Err(cur.error("unclosed `[`")),
                    _ => {
                        members.insert(cur.label()?);
                    }
                }
            }
            if members.is_empty() {
                return Err(cur.error("empty disjunction"));
            }
            members
        } else {
            BTreeSet::from([cur.label()?])
        };
        let times = if cur.peek() == Some('^') {
            cur.bump();
            let braced = cur.peek() == Some('{');
            if braced {
                cur.bump();
            }
            let k = cur.number()?;
            if braced && cur.bump() != Some('}') {
                return Err(cur.error("expected `}` after repetition count"));
            }
            if k == 0 {
                return Err(cur.error("repetition count must be positive"));
            }
            k as usize
        } else {
            1
        };
        for _ in 0..times {
            slots.push(disjunction.clone());
        }
    }
    if slots.is_empty() {
        return Err(cur.error("empty configuration"));
    }
    Ok(slots)
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(text: &str, line: usize, column: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
            column,
        }
    }

    fn error(&self, message: &str) -> Error {
        syntax(self.line, self.column + self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn skip_separators(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace() || c == ',') {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("number out of range"))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.bump() == Some(c) {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn label(&mut self) -> Result<Label> {
        match self.peek() {
            Some('{') => {
                self.bump();
                let mut members = BTreeSet::new();
                loop {
                    self.skip_separators();
                    match self.peek() {
                        Some('}') => {
                            self.bump();
                            break;
                        }
                        None => return Err(self.error("unclosed set-label")),
                        _ => {
                            members.insert(self.label()?);
                        }
                    }
                }
                if members.is_empty() {
                    return Err(self.error("set-labels must be nonempty"));
                }
                Ok(Label::Set(members))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                match (ident.as_str(), self.peek()) {
                    ("L", Some('{')) => {
                        self.bump();
                        let mut colors = BTreeSet::new();
                        loop {
                            self.skip_separators();
                            if self.peek() == Some('}') {
                                self.bump();
                                break;
                            }
                            if self.at_end() {
                                return Err(self.error("unclosed color set"));
                            }
                            let level = self.number()?;
                            self.expect('.')?;
                            let index = self.number()?;
                            colors.insert(ColorId::new(level, index));
                        }
                        Ok(Label::Colors(colors))
                    }
                    ("P", Some('<')) | ("U", Some('<')) => {
                        self.bump();
                        let i = self.number()?;
                        self.expect('>')?;
                        if ident == "P" {
                            if i == 0 {
                                return Err(self.error("pointer labels start at P<1>"));
                            }
                            Ok(Label::pointer(i))
                        } else {
                            Ok(Label::unpointed(i))
                        }
                    }
                    ("X", _) => Ok(Label::x()),
                    _ => Ok(Label::Plain(ident)),
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character `{c}`"))),
            None => Err(self.error("expected a label")),
        }
    }
}

/// Formats a problem in canonical multi-line form.
pub fn format_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "delta {} {}", p.node_arity(), p.edge_arity());
    out.push_str("nodes:\n");
    for c in p.nodes().configs() {
        out.push_str(&format_config(p, c));
        out.push('\n');
    }
    out.push_str("edges:\n");
    for c in p.edges().configs() {
        out.push_str(&format_config(p, c));
        out.push('\n');
    }
    out
}

/// Formats a problem on one line: `nodes: ... | ... ; edges: ... | ...`.
pub fn format_problem_inline(p: &Problem) -> String {
    let join = |cs: &[Config]| cs.iter().map(|c| format_config(p, c)).collect::<Vec<_>>().join(" | ");
    format!("nodes: {} ; edges: {}", join(p.nodes().configs()), join(p.edges().configs()))
}

/// Formats one configuration, grouping equal consecutive slots with `^k`.
pub fn format_config(p: &Problem, c: &Config) -> String {
    let slots: Vec<String> = c
        .slots()
        .iter()
        .map(|s| {
            let members: Vec<String> = s.iter().map(|i| p.label(i).to_string()).collect();
            if members.len() == 1 {
                members[0].clone()
            } else {
                format!("[{}]", members.join(" "))
            }
        })
        .collect();
    let mut parts = Vec::new();
    let mut k = 0;
    while k < slots.len() {
        let mut run = 1;
        while k + run < slots.len() && slots[k + run] == slots[k] {
            run += 1;
        }
        if run > 1 {
            parts.push(format!("{}^{}", slots[k], run));
        } else {
            parts.push(slots[k].clone());
        }
        k += run;
    }
    parts.join(" ")
}

/// Formats a labelled configuration with the same conventions as [`format_config`].
pub fn format_label_config(config: &LabelConfig) -> String {
    let labels: BTreeSet<Label> = config.iter().flatten().cloned().collect();
    let p = Problem::from_label_configs(config.len().max(1), 1, &[config.clone()], &[], labels)
        .expect("a labelled configuration forms a problem");
    format_config(&p, &p.nodes().configs()[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIS: &str = "nodes: M^3 | P U^2 ; edges: M [U P] | U U";

    #[test]
    fn inline_mis() {
        let p = parse_problem(MIS).unwrap();
        assert_eq!(p.labels().len(), 3);
        assert_eq!((p.node_arity(), p.edge_arity()), (3, 2));
        assert_eq!(format_problem_inline(&p), "nodes: M^3 | P U^2 ; edges: M [P U] | U^2");
        assert_eq!(
            format_problem(&p),
            "delta 3 2\nnodes:\nM^3\nP U^2\nedges:\nM [P U]\nU^2\n"
        );
    }

    #[test]
    fn multiline_with_comments() {
        let text = "# sinkless orientation\ndelta 3 3\nnodes:\nB [B W]^2 # one out-edge\nedges:\nW [B W]^{2}\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(format_problem(&p), "delta 3 3\nnodes:\nB [B W]^2\nedges:\n[B W]^2 W\n");
    }

    #[test]
    fn empty_sections_are_legal() {
        let p = parse_problem("delta 3 2\nnodes:\nedges:\n").unwrap();
        assert!(p.nodes().is_empty() && p.edges().is_empty());
        assert_eq!(p.node_arity(), 3);
    }

    #[test]
    fn labels_only_on_edges_are_accepted() {
        let p = parse_problem("nodes: A^2 ; edges: A B").unwrap();
        assert_eq!(p.labels().len(), 2);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let err = parse_problem("delta 3 2\nnodes:\nA^2\nedges:\nA A\n").unwrap_err();
        assert_eq!(
            err,
            Error::Arity {
                line: 3,
                expected: 3,
                found: 2
            }
        );
        assert!(matches!(
            parse_problem("nodes: A^2 | A^3 ; edges: A A"),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_problem("delta 2 2\nnodes:\nA [B\n") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_problem("A B\n"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_problem("nodes: A^0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_problem("nodes: A $"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn structured_tokens() {
        let p = parse_problem("delta 2 2\nnodes:\nL{0.1} X\nP<1> U<1>\nedges:\nX [L{0.1} P<1> U<1>]\n").unwrap();
        assert_eq!(
            format_problem(&p),
            "delta 2 2\nnodes:\nX L{0.1}\nP<1> U<1>\nedges:\nX [L{0.1} P<1> U<1>]\n"
        );
    }
}

impl serde::Serialize for Problem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_problem(self))
    }
}

impl<'de> serde::Deserialize<'de> for Problem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_problem(&text).map_err(serde::de::Error::custom)
    }
}
