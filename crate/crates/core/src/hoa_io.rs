//! Reader and writer for the explicit-label subset of the HOA v1 format,
//! including the `controllable-AP` header used for games.
//!
//! Acceptance set `k` on the wire is color `k + 1`.  Edges without a mark
//! get a fresh neutral color `d + 1` that no acceptance primitive mentions;
//! edges with several marks are split into parallel transitions, one per
//! mark.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{parity_formula, AccFormula, Acceptance, Automaton, ColorId, ColorSet, Hoa};
use crate::formula::{parse_label, print_label, Formula, FormulaError, PropId};
use crate::games::Hog;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoaError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unsupported feature: {feature}")]
    Unsupported { line: usize, col: usize, feature: String },
    #[error("{line}:{col}: index out of range: {message}")]
    IndexOutOfRange { line: usize, col: usize, message: String },
    #[error("{line}:{col}: invalid game: {message}")]
    InvalidGame { line: usize, col: usize, message: String },
}

impl HoaError {
    /// `(line, column)`, both 1-based.
    pub fn position(&self) -> (usize, usize) {
        match self {
            HoaError::Syntax { line, col, .. }
            | HoaError::Unsupported { line, col, .. }
            | HoaError::IndexOutOfRange { line, col, .. }
            | HoaError::InvalidGame { line, col, .. } => (*line, *col),
        }
    }
}

/// A parsed document: a game when `controllable-AP` is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Automaton(Automaton),
    Game(Hog),
}

impl Parsed {
    pub fn into_automaton(self) -> Automaton {
        match self {
            Parsed::Automaton(a) => a,
            Parsed::Game(g) => Automaton { hoa: g.hoa, acc: g.acc },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(u64),
    Str(String),
    /// Contents of `[...]`, with the position just after the bracket.
    Label(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Amp,
    Bar,
    Bang,
    Body,
    End,
    Abort,
    Alias(String),
}

fn syntax(pos: Pos, message: impl Into<String>) -> HoaError {
    HoaError::Syntax {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn unsupported(pos: Pos, feature: impl Into<String>) -> HoaError {
    HoaError::Unsupported {
        line: pos.line,
        col: pos.col,
        feature: feature.into(),
    }
}

fn out_of_range(pos: Pos, message: impl Into<String>) -> HoaError {
    HoaError::IndexOutOfRange {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, HoaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '-';
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let mut depth = 0;
            loop {
                if i >= chars.len() {
                    return Err(syntax(pos, "unterminated comment"));
                }
                if chars[i] == '/' && chars.get(i + 1) == Some(&'*') {
                    depth += 1;
                    advance(&mut i, &mut line, &mut col, '/');
                    advance(&mut i, &mut line, &mut col, '*');
                } else if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    depth -= 1;
                    advance(&mut i, &mut line, &mut col, '*');
                    advance(&mut i, &mut line, &mut col, '/');
                    if depth == 0 {
                        break;
                    }
                } else {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '!' => Some(Tok::Bang),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        match c {
            '"' => {
                advance(&mut i, &mut line, &mut col, c);
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(pos, "unterminated string")),
                        Some('"') => {
                            advance(&mut i, &mut line, &mut col, '"');
                            break;
                        }
                        Some('\\') => {
                            advance(&mut i, &mut line, &mut col, '\\');
                            match chars.get(i) {
                                Some(&e) => {
                                    s.push(e);
                                    advance(&mut i, &mut line, &mut col, e);
                                }
                                None => return Err(syntax(pos, "unterminated string")),
                            }
                        }
                        Some(&ch) => {
                            s.push(ch);
                            advance(&mut i, &mut line, &mut col, ch);
                        }
                    }
                }
                out.push((Tok::Str(s), pos));
            }
            '[' => {
                advance(&mut i, &mut line, &mut col, c);
                let start = Pos { line, col };
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(pos, "unterminated label")),
                        Some(']') => {
                            advance(&mut i, &mut line, &mut col, ']');
                            break;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            advance(&mut i, &mut line, &mut col, ch);
                        }
                    }
                }
                out.push((Tok::Label(s), start));
            }
            '@' => {
                advance(&mut i, &mut line, &mut col, c);
                let mut s = String::new();
                while i < chars.len() && is_ident(chars[i]) {
                    s.push(chars[i]);
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
                out.push((Tok::Alias(s), pos));
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                let mut s = String::new();
                while i < chars.len() && (chars[i] == '-' || chars[i].is_ascii_uppercase()) {
                    s.push(chars[i]);
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
                let tok = match s.as_str() {
                    "--BODY--" => Tok::Body,
                    "--END--" => Tok::End,
                    "--ABORT--" => Tok::Abort,
                    _ => return Err(syntax(pos, format!("unknown marker '{s}'"))),
                };
                out.push((tok, pos));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
                let v = s
                    .parse::<u64>()
                    .map_err(|_| syntax(pos, format!("integer {s} is too large")))?;
                out.push((Tok::Int(v), pos));
            }
            c if is_ident(c) => {
                let mut s = String::new();
                while i < chars.len() && is_ident(chars[i]) {
                    s.push(chars[i]);
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
                if chars.get(i) == Some(&':') {
                    advance(&mut i, &mut line, &mut col, ':');
                    out.push((Tok::Header(s), pos));
                } else {
                    out.push((Tok::Ident(s), pos));
                }
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// Acceptance clause as written, with its grouping kept so that named
/// families can be recognized from their canonical shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
enum RawAcc {
    T,
    F,
    Inf(u32),
    Fin(u32),
    And(Vec<RawAcc>),
    Or(Vec<RawAcc>),
}

impl RawAcc {
    fn to_formula(&self) -> AccFormula {
        match self {
            RawAcc::T => AccFormula::t(),
            RawAcc::F => AccFormula::f(),
            RawAcc::Inf(i) => AccFormula::Inf(ColorSet::singleton(i + 1)),
            RawAcc::Fin(i) => AccFormula::Fin(ColorSet::singleton(i + 1)),
            RawAcc::And(xs) => AccFormula::and(xs.iter().map(RawAcc::to_formula)),
            RawAcc::Or(xs) => AccFormula::or(xs.iter().map(RawAcc::to_formula)),
        }
    }

    fn fin_part(&self) -> Option<ColorSet> {
        match self {
            RawAcc::T => Some(ColorSet::empty()),
            RawAcc::Fin(i) => Some(ColorSet::singleton(i + 1)),
            RawAcc::And(xs) if xs.len() >= 2 => xs
                .iter()
                .map(|x| match x {
                    RawAcc::Fin(i) => Some(i + 1),
                    _ => None,
                })
                .collect::<Option<ColorSet>>(),
            _ => None,
        }
    }

    fn inf_part(&self) -> Option<ColorSet> {
        match self {
            RawAcc::F => Some(ColorSet::empty()),
            RawAcc::Inf(i) => Some(ColorSet::singleton(i + 1)),
            RawAcc::Or(xs) if xs.len() >= 2 => xs
                .iter()
                .map(|x| match x {
                    RawAcc::Inf(i) => Some(i + 1),
                    _ => None,
                })
                .collect::<Option<ColorSet>>(),
            _ => None,
        }
    }

    fn muller_set(&self) -> Option<ColorSet> {
        match self {
            RawAcc::T => Some(ColorSet::empty()),
            RawAcc::Inf(i) => Some(ColorSet::singleton(i + 1)),
            RawAcc::And(xs) if xs.len() >= 2 => xs
                .iter()
                .map(|x| match x {
                    RawAcc::Inf(i) => Some(i + 1),
                    _ => None,
                })
                .collect::<Option<ColorSet>>(),
            _ => None,
        }
    }

    /// The `k` items of a top-level connective (`k = 1`: the clause itself,
    /// `k = 0`: the neutral constant).
    fn items(&self, k: usize, conj: bool) -> Option<Vec<&RawAcc>> {
        match (k, self) {
            (0, RawAcc::F) if !conj => Some(Vec::new()),
            (0, RawAcc::T) if conj => Some(Vec::new()),
            (0, _) => None,
            (1, x) => Some(vec![x]),
            (k, RawAcc::Or(xs)) if !conj && xs.len() == k => Some(xs.iter().collect()),
            (k, RawAcc::And(xs)) if conj && xs.len() == k => Some(xs.iter().collect()),
            _ => None,
        }
    }

    fn max_set(&self) -> Option<u32> {
        match self {
            RawAcc::T | RawAcc::F => None,
            RawAcc::Inf(i) | RawAcc::Fin(i) => Some(*i),
            RawAcc::And(xs) | RawAcc::Or(xs) => xs.iter().filter_map(RawAcc::max_set).max(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    eof: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.eof)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<(u64, Pos), HoaError> {
        match self.next() {
            Some((Tok::Int(v), p)) => Ok((v, p)),
            Some((_, p)) => Err(syntax(p, format!("expected {what}"))),
            None => Err(syntax(self.eof, format!("expected {what}"))),
        }
    }

    fn at_header_boundary(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Header(_)) | Some(Tok::Body))
    }

    fn acc_disjunction(&mut self) -> Result<RawAcc, HoaError> {
        let mut items = vec![self.acc_conjunction()?];
        while self.peek() == Some(&Tok::Bar) {
            self.next();
            items.push(self.acc_conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            RawAcc::Or(items)
        })
    }

    fn acc_conjunction(&mut self) -> Result<RawAcc, HoaError> {
        let mut items = vec![self.acc_atom()?];
        while self.peek() == Some(&Tok::Amp) {
            self.next();
            items.push(self.acc_atom()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            RawAcc::And(items)
        })
    }

    fn acc_atom(&mut self) -> Result<RawAcc, HoaError> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Ident(s), _)) if s == "t" => Ok(RawAcc::T),
            Some((Tok::Ident(s), _)) if s == "f" => Ok(RawAcc::F),
            Some((Tok::Ident(s), _)) if s == "Inf" || s == "Fin" => {
                if !matches!(self.next(), Some((Tok::LParen, _))) {
                    return Err(syntax(pos, format!("expected '(' after {s}")));
                }
                if self.peek() == Some(&Tok::Bang) {
                    return Err(unsupported(self.pos(), "negated acceptance sets"));
                }
                let (v, vpos) = self.expect_int("an acceptance set index")?;
                let v = u32::try_from(v)
                    .ok()
                    .filter(|&v| v < crate::automaton::MAX_COLOR)
                    .ok_or_else(|| out_of_range(vpos, format!("acceptance set {v}")))?;
                if !matches!(self.next(), Some((Tok::RParen, _))) {
                    return Err(syntax(pos, "expected ')'"));
                }
                Ok(if s == "Inf" { RawAcc::Inf(v) } else { RawAcc::Fin(v) })
            }
            Some((Tok::LParen, _)) => {
                let inner = self.acc_disjunction()?;
                if !matches!(self.next(), Some((Tok::RParen, _))) {
                    return Err(syntax(pos, "unbalanced parenthesis in acceptance"));
                }
                Ok(inner)
            }
            Some((Tok::Alias(_), p)) => Err(unsupported(p, "aliases")),
            _ => Err(syntax(pos, "expected t, f, Inf(..), Fin(..) or '('")),
        }
    }
}

struct Header {
    states: Option<(usize, Pos)>,
    start: Vec<(usize, Pos)>,
    ap: Vec<String>,
    acc_count: Option<(u32, Pos)>,
    acc: Option<RawAcc>,
    acc_name: Vec<String>,
    controllable: Option<(Vec<(u64, Pos)>, Pos)>,
    name: Option<String>,
}

/// Parses a document.  The result is a game when `controllable-AP` is given.
pub fn parse_hoa(text: &str) -> Result<Parsed, HoaError> {
    let toks = tokenize(text)?;
    let eof = toks.last().map(|(_, p)| *p).unwrap_or(Pos { line: 1, col: 1 });
    let mut p = Parser { toks, at: 0, eof };
    match p.next() {
        Some((Tok::Header(h), _)) if h == "HOA" => {}
        Some((_, pos)) => return Err(syntax(pos, "document must start with 'HOA: v1'")),
        None => return Err(syntax(eof, "empty document")),
    }
    match p.next() {
        Some((Tok::Ident(v), _)) if v == "v1" => {}
        Some((_, pos)) => return Err(unsupported(pos, "format versions other than v1")),
        None => return Err(syntax(eof, "missing format version")),
    }
    let mut h = Header {
        states: None,
        start: Vec::new(),
        ap: Vec::new(),
        acc_count: None,
        acc: None,
        acc_name: Vec::new(),
        controllable: None,
        name: None,
    };
    loop {
        let pos = p.pos();
        match p.next() {
            Some((Tok::Body, _)) => break,
            Some((Tok::Header(name), _)) => parse_header(&mut p, &mut h, &name, pos)?,
            Some((Tok::Alias(_), pos)) => return Err(unsupported(pos, "aliases")),
            Some((_, pos)) => return Err(syntax(pos, "expected a header or --BODY--")),
            None => return Err(syntax(eof, "missing --BODY--")),
        }
    }
    let (acc_count, acc_pos) = h
        .acc_count
        .ok_or_else(|| syntax(p.pos(), "missing Acceptance header"))?;
    let raw = h.acc.clone().expect("acceptance count without clause");
    if let Some(m) = raw.max_set() {
        if m >= acc_count {
            return Err(out_of_range(acc_pos, format!("acceptance set {m} with only {acc_count} sets")));
        }
    }
    let num_props = h.ap.len();
    let declared_states = h.states.map(|(n, _)| n);

    // body
    struct Edge {
        source: usize,
        guard: Formula,
        target: usize,
        marks: Vec<u32>,
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut state_names: Vec<(usize, String)> = Vec::new();
    let mut seen_states: Vec<usize> = Vec::new();
    let mut current: Option<(usize, Vec<u32>)> = None;
    let mut max_state: Option<usize> = None;
    let check_state = |id: u64, pos: Pos| -> Result<usize, HoaError> {
        let id = usize::try_from(id).map_err(|_| out_of_range(pos, format!("state {id}")))?;
        if let Some(n) = declared_states {
            if id >= n {
                return Err(out_of_range(pos, format!("state {id} with States: {n}")));
            }
        }
        Ok(id)
    };
    let parse_marks = |p: &mut Parser| -> Result<Vec<u32>, HoaError> {
        let mut marks = Vec::new();
        if p.peek() == Some(&Tok::LBrace) {
            p.next();
            loop {
                match p.next() {
                    Some((Tok::RBrace, _)) => break,
                    Some((Tok::Int(v), pos)) => {
                        if v >= acc_count as u64 {
                            return Err(out_of_range(
                                pos,
                                format!("acceptance set {v} with only {acc_count} sets"),
                            ));
                        }
                        marks.push(v as u32);
                    }
                    Some((_, pos)) => return Err(syntax(pos, "expected an acceptance set index or '}'")),
                    None => return Err(syntax(p.eof, "unterminated acceptance marks")),
                }
            }
        }
        Ok(marks)
    };
    loop {
        let pos = p.pos();
        match p.next() {
            Some((Tok::End, _)) => break,
            Some((Tok::Abort, pos)) => return Err(syntax(pos, "document aborted")),
            Some((Tok::Header(hname), _)) if hname == "State" => {
                if let Some(Tok::Label(_)) = p.peek() {
                    return Err(unsupported(p.pos(), "state labels"));
                }
                let (id, ipos) = p.expect_int("a state id")?;
                let id = check_state(id, ipos)?;
                if seen_states.contains(&id) {
                    return Err(syntax(ipos, format!("state {id} is defined twice")));
                }
                seen_states.push(id);
                max_state = max_state.max(Some(id));
                if let Some(Tok::Str(_)) = p.peek() {
                    if let Some((Tok::Str(s), _)) = p.next() {
                        state_names.push((id, s));
                    }
                }
                let marks = parse_marks(&mut p)?;
                current = Some((id, marks));
            }
            Some((Tok::Label(text), lpos)) => {
                let (source, state_marks) = current
                    .as_ref()
                    .ok_or_else(|| syntax(lpos, "edge before any State:"))?;
                let guard = parse_label(&text).map_err(|e| match e {
                    FormulaError::Syntax { pos, message } => {
                        let at = Pos {
                            line: lpos.line,
                            col: lpos.col + pos,
                        };
                        if message.contains("alias") {
                            unsupported(at, "aliases")
                        } else {
                            syntax(at, message)
                        }
                    }
                    other => syntax(lpos, other.to_string()),
                })?;
                if let Some(a) = guard.max_atom() {
                    if a.index() >= num_props {
                        return Err(out_of_range(
                            lpos,
                            format!("proposition {a} with only {num_props} declared"),
                        ));
                    }
                }
                let (t, tpos) = p.expect_int("a target state")?;
                let target = check_state(t, tpos)?;
                max_state = max_state.max(Some(target));
                if p.peek() == Some(&Tok::Amp) {
                    return Err(unsupported(p.pos(), "universal branching"));
                }
                let mut marks = parse_marks(&mut p)?;
                marks.extend(state_marks.iter().copied());
                marks.sort_unstable();
                marks.dedup();
                edges.push(Edge {
                    source: *source,
                    guard,
                    target,
                    marks,
                });
            }
            Some((Tok::Int(_), pos)) => return Err(unsupported(pos, "implicit labels")),
            Some((Tok::Alias(_), pos)) => return Err(unsupported(pos, "aliases")),
            Some((_, pos)) => return Err(syntax(pos, "expected State:, an edge or --END--")),
            None => return Err(syntax(pos, "missing --END--")),
        }
    }
    if let Some((_, pos)) = p.next() {
        return Err(unsupported(pos, "several automata in one document"));
    }

    let num_states = declared_states
        .unwrap_or(0)
        .max(max_state.map_or(0, |m| m + 1))
        .max(h.start.iter().map(|&(s, _)| s + 1).max().unwrap_or(0));
    for &(s, pos) in &h.start {
        if let Some(n) = declared_states {
            if s >= n {
                return Err(out_of_range(pos, format!("start state {s} with States: {n}")));
            }
        }
    }
    let needs_neutral = edges.iter().any(|e| e.marks.is_empty());
    let index = acc_count + needs_neutral as u32;
    if index > crate::automaton::MAX_COLOR {
        return Err(out_of_range(acc_pos, format!("{index} colors exceed the supported maximum")));
    }
    let mut hoa = Hoa::new(num_states, h.ap.clone(), index);
    hoa.name = h.name.clone();
    hoa.initial = Vec::new();
    for &(s, _) in &h.start {
        if !hoa.initial.contains(&s) {
            hoa.initial.push(s);
        }
    }
    for (id, name) in state_names {
        hoa.state_names[id] = Some(name);
    }
    for e in edges {
        if e.marks.is_empty() {
            hoa.add_transition(e.source, e.guard, e.target, index);
        } else {
            for m in e.marks {
                hoa.add_transition(e.source, e.guard.clone(), e.target, m + 1);
            }
        }
    }
    let acc = recognize(&raw, &h.acc_name, index);
    match h.controllable {
        None => Ok(Parsed::Automaton(Automaton { hoa, acc })),
        Some((ids, hpos)) => {
            let mut outputs = Vec::new();
            for (v, pos) in ids {
                if v as usize >= num_props {
                    return Err(out_of_range(
                        pos,
                        format!("controllable proposition {v} with only {num_props} declared"),
                    ));
                }
                outputs.push(PropId(v as u32));
            }
            Hog::new(hoa, acc, outputs)
                .map(Parsed::Game)
                .map_err(|e| HoaError::InvalidGame {
                    line: hpos.line,
                    col: hpos.col,
                    message: e.to_string(),
                })
        }
    }
}

fn parse_header(p: &mut Parser, h: &mut Header, name: &str, pos: Pos) -> Result<(), HoaError> {
    match name {
        "States" => {
            let (n, _) = p.expect_int("a state count")?;
            h.states = Some((n as usize, pos));
        }
        "Start" => {
            let (s, spos) = p.expect_int("a start state")?;
            if p.peek() == Some(&Tok::Amp) {
                return Err(unsupported(p.pos(), "conjunctive start states"));
            }
            h.start.push((s as usize, spos));
        }
        "AP" => {
            let (n, _) = p.expect_int("a proposition count")?;
            for _ in 0..n {
                match p.next() {
                    Some((Tok::Str(s), spos)) => {
                        if h.ap.contains(&s) {
                            return Err(syntax(spos, format!("duplicate proposition \"{s}\"")));
                        }
                        h.ap.push(s)
                    }
                    Some((_, spos)) => return Err(syntax(spos, "expected a proposition name")),
                    None => return Err(syntax(p.eof, "expected a proposition name")),
                }
            }
        }
        "Acceptance" => {
            let (n, npos) = p.expect_int("an acceptance set count")?;
            let n = u32::try_from(n)
                .ok()
                .filter(|&n| n < crate::automaton::MAX_COLOR)
                .ok_or_else(|| out_of_range(npos, format!("{n} acceptance sets")))?;
            h.acc_count = Some((n, pos));
            h.acc = Some(p.acc_disjunction()?);
        }
        "acc-name" => {
            while !p.at_header_boundary() {
                match p.next() {
                    Some((Tok::Ident(s), _)) => h.acc_name.push(s),
                    Some((Tok::Int(v), _)) => h.acc_name.push(v.to_string()),
                    Some((_, tpos)) => return Err(syntax(tpos, "malformed acc-name")),
                    None => break,
                }
            }
        }
        "controllable-AP" => {
            let mut ids = Vec::new();
            while let Some(Tok::Int(_)) = p.peek() {
                let (v, vpos) = p.expect_int("a proposition index")?;
                ids.push((v, vpos));
            }
            h.controllable = Some((ids, pos));
        }
        "name" => match p.next() {
            Some((Tok::Str(s), _)) => h.name = Some(s),
            Some((_, tpos)) => return Err(syntax(tpos, "expected a quoted name")),
            None => return Err(syntax(p.eof, "expected a quoted name")),
        },
        "Alias" => return Err(unsupported(pos, "Alias")),
        other => {
            if other.starts_with(|c: char| c.is_ascii_uppercase()) {
                return Err(unsupported(pos, format!("header {other}")));
            }
            // unknown lowercase headers carry no semantics and are skipped
            while !p.at_header_boundary() {
                if let Some((Tok::Alias(_), apos)) = p.next() {
                    return Err(unsupported(apos, "aliases"));
                }
            }
        }
    }
    Ok(())
}

/// Maps the clause to a named family when the `acc-name` announces one and
/// the clause has that family's canonical shape; otherwise the clause is
/// kept as an Emerson-Lei formula.
fn recognize(raw: &RawAcc, name: &[String], index: u32) -> Acceptance {
    let words: Vec<&str> = name.iter().map(String::as_str).collect();
    let count = |s: &str| s.parse::<usize>().ok();
    let named = match words.as_slice() {
        ["Buchi"] => raw.inf_part().map(Acceptance::Buchi),
        ["co-Buchi"] => raw.fin_part().map(Acceptance::CoBuchi),
        ["reachability"] => raw.inf_part().map(Acceptance::Reachability),
        ["safety"] => raw
            .fin_part()
            .filter(|f| (*f).max().is_none_or(|m| m <= index))
            .map(|f| Acceptance::Safety(ColorSet::range(1, index).difference(f))),
        ["parity", "max", "odd", k] => count(k).and_then(|k| {
            let k = k as ColorId;
            (k < crate::automaton::MAX_COLOR && raw.to_formula() == parity_formula(k))
                .then_some(Acceptance::Parity { colors: k })
        }),
        ["Rabin", k] => count(k)
            .and_then(|k| raw.items(k, false))
            .and_then(|items| {
                items
                    .into_iter()
                    .map(|it| match it {
                        RawAcc::And(xs) if xs.len() == 2 => Some((xs[1].inf_part()?, xs[0].fin_part()?)),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .map(Acceptance::Rabin),
        ["Streett", k] => count(k)
            .and_then(|k| raw.items(k, true))
            .and_then(|items| {
                items
                    .into_iter()
                    .map(|it| match it {
                        RawAcc::Or(xs) if xs.len() == 2 => Some((xs[0].fin_part()?, xs[1].inf_part()?)),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .map(Acceptance::Streett),
        ["Muller", k] => count(k)
            .and_then(|k| raw.items(k, false))
            .and_then(|items| items.into_iter().map(RawAcc::muller_set).collect::<Option<Vec<_>>>())
            .map(Acceptance::Muller),
        _ => None,
    };
    named.unwrap_or_else(|| Acceptance::El(raw.to_formula()))
}

/// Parses a bare acceptance clause such as `Inf(0) & Fin(1)` (set `k` is
/// color `k + 1`), optionally with an `acc-name` selecting a family.
pub fn parse_acceptance(clause: &str, acc_name: Option<&str>, index: u32) -> Result<Acceptance, HoaError> {
    let toks = tokenize(clause)?;
    let eof = toks.last().map(|(_, p)| *p).unwrap_or(Pos { line: 1, col: 1 });
    let mut p = Parser { toks, at: 0, eof };
    let raw = p.acc_disjunction()?;
    if let Some((_, pos)) = p.next() {
        return Err(syntax(pos, "trailing input after acceptance clause"));
    }
    if let Some(m) = raw.max_set() {
        if m >= index {
            return Err(out_of_range(eof, format!("acceptance set {m} with only {index} colors")));
        }
    }
    let words: Vec<String> = acc_name
        .map(|n| n.split_whitespace().map(str::to_string).collect())
        .unwrap_or_default();
    Ok(recognize(&raw, &words, index))
}

/// Parses a document and returns its automaton, dropping any game partition.
pub fn parse_automaton(text: &str) -> Result<Automaton, HoaError> {
    parse_hoa(text).map(Parsed::into_automaton)
}

fn inf_part(s: ColorSet) -> String {
    match s.len() {
        0 => "f".into(),
        1 => format!("Inf({})", s.min().unwrap() - 1),
        _ => format!(
            "({})",
            s.iter().map(|c| format!("Inf({})", c - 1)).collect::<Vec<_>>().join(" | ")
        ),
    }
}

fn fin_part(s: ColorSet) -> String {
    match s.len() {
        0 => "t".into(),
        1 => format!("Fin({})", s.min().unwrap() - 1),
        _ => format!(
            "({})",
            s.iter().map(|c| format!("Fin({})", c - 1)).collect::<Vec<_>>().join(" & ")
        ),
    }
}

/// Prints an acceptance formula in wire syntax (color `c` is set `c - 1`).
pub fn print_acc_formula(f: &AccFormula) -> String {
    match f {
        AccFormula::Inf(s) => inf_part(*s),
        AccFormula::Fin(s) => fin_part(*s),
        AccFormula::And(xs) => xs
            .iter()
            .map(|x| match x {
                AccFormula::Or(_) => format!("({})", print_acc_formula(x)),
                _ => print_acc_formula(x),
            })
            .collect::<Vec<_>>()
            .join(" & "),
        AccFormula::Or(xs) => xs
            .iter()
            .map(|x| match x {
                AccFormula::And(_) => format!("({})", print_acc_formula(x)),
                _ => print_acc_formula(x),
            })
            .collect::<Vec<_>>()
            .join(" | "),
    }
}

/// `acc-name` (if the family has one) and clause for a condition.
pub fn print_acceptance(acc: &Acceptance, index: u32) -> (Option<String>, String) {
    match acc {
        Acceptance::El(f) => (None, print_acc_formula(f)),
        Acceptance::Buchi(b) => (Some("Buchi".into()), inf_part(*b)),
        Acceptance::CoBuchi(b) => (Some("co-Buchi".into()), fin_part(*b)),
        Acceptance::Reachability(r) => (Some("reachability".into()), inf_part(*r)),
        Acceptance::Safety(s) => (
            Some("safety".into()),
            fin_part(ColorSet::range(1, index).difference(*s)),
        ),
        Acceptance::Parity { colors } => (
            Some(format!("parity max odd {colors}")),
            print_acc_formula(&parity_formula(*colors)),
        ),
        Acceptance::Rabin(pairs) => {
            let clause = if pairs.is_empty() {
                "f".to_string()
            } else {
                pairs
                    .iter()
                    .map(|&(e, f)| format!("({} & {})", fin_part(f), inf_part(e)))
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            (Some(format!("Rabin {}", pairs.len())), clause)
        }
        Acceptance::Streett(pairs) => {
            let clause = if pairs.is_empty() {
                "t".to_string()
            } else {
                pairs
                    .iter()
                    .map(|&(e, f)| format!("({} | {})", fin_part(e), inf_part(f)))
                    .collect::<Vec<_>>()
                    .join(" & ")
            };
            (Some(format!("Streett {}", pairs.len())), clause)
        }
        Acceptance::Muller(sets) => {
            let clause = if sets.is_empty() {
                "f".to_string()
            } else {
                sets.iter()
                    .map(|s| match s.len() {
                        0 => "t".to_string(),
                        1 => format!("Inf({})", (*s).min().unwrap() - 1),
                        _ => format!(
                            "({})",
                            s.iter().map(|c| format!("Inf({})", c - 1)).collect::<Vec<_>>().join(" & ")
                        ),
                    })
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            (Some(format!("Muller {}", sets.len())), clause)
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn print_document(hoa: &Hoa, acc: &Acceptance, controllable: Option<&[PropId]>) -> String {
    let mut out = String::new();
    out.push_str("HOA: v1\n");
    if let Some(name) = &hoa.name {
        let _ = writeln!(out, "name: {}", quote(name));
    }
    let _ = writeln!(out, "States: {}", hoa.num_states());
    for q in &hoa.initial {
        let _ = writeln!(out, "Start: {q}");
    }
    if !hoa.props.is_empty() {
        let names: Vec<String> = hoa.props.iter().map(|p| quote(p)).collect();
        let _ = writeln!(out, "AP: {} {}", hoa.props.len(), names.join(" "));
    }
    if let Some(outputs) = controllable {
        let mut ids: Vec<u32> = outputs.iter().map(|p| p.0).collect();
        ids.sort_unstable();
        out.push_str("controllable-AP:");
        for id in ids {
            let _ = write!(out, " {id}");
        }
        out.push('\n');
    }
    let (name, clause) = print_acceptance(acc, hoa.index);
    if let Some(name) = name {
        let _ = writeln!(out, "acc-name: {name}");
    }
    let _ = writeln!(out, "Acceptance: {} {}", hoa.index, clause);
    out.push_str("--BODY--\n");
    let outgoing = hoa.outgoing();
    for (q, out_q) in outgoing.iter().enumerate() {
        match &hoa.state_names[q] {
            Some(n) => {
                let _ = writeln!(out, "State: {q} {}", quote(n));
            }
            None => {
                let _ = writeln!(out, "State: {q}");
            }
        }
        for &i in out_q {
            let t = &hoa.transitions[i];
            let _ = writeln!(out, "[{}] {} {{{}}}", print_label(&t.guard), t.target, t.color - 1);
        }
    }
    out.push_str("--END--\n");
    out
}

/// Prints an automaton: states ascending, edges in insertion order.
pub fn print_hoa(a: &Automaton) -> String {
    print_document(&a.hoa, &a.acc, None)
}

/// Prints a game with its `controllable-AP` header (indices sorted).
pub fn print_hog(g: &Hog) -> String {
    print_document(&g.hoa, &g.acc, Some(&g.outputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const MINIMAL: &str = "HOA: v1\nStates: 1\nStart: 0\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0 {0}\n--END--\n";

    #[test]
    fn minimal_buchi_document() {
        let a = parse_automaton(MINIMAL).unwrap();
        assert_eq!(a.hoa.num_states(), 1);
        assert_eq!(a.acc, Acceptance::Buchi(ColorSet::singleton(1)));
        assert_eq!(a.hoa.transitions[0].color, 1);
        let printed = print_hoa(&a);
        assert_eq!(printed, MINIMAL);
        assert_eq!(printed.lines().count(), 9);
    }

    #[test]
    fn arbiter_game_round_trip() {
        let g = fixtures::arbiter_game();
        let text = print_hog(&g);
        assert!(text.contains("controllable-AP: 1\n"));
        match parse_hoa(&text).unwrap() {
            Parsed::Game(h) => {
                assert_eq!(h, g);
                assert_eq!(h.outputs, vec![PropId(1)]);
            }
            other => panic!("expected a game, got {other:?}"),
        }
        assert_eq!(print_hog(&g), text);
    }

    #[test]
    fn arbiter_from_generic_wire_text() {
        let text = "HOA: v1\nStates: 4\nStart: 0\nAP: 2 \"r\" \"g\"\ncontrollable-AP: 1\nAcceptance: 2 Inf(0)\n--BODY--\n\
            State: 0\n[!0 & !1] 0 {0}\n[1] 1 {0}\n[0 & !1] 2 {0}\n\
            State: 1\n[!0 & !1] 0 {0}\n[0 & !1] 2 {0}\n[1] 3 {0}\n\
            State: 2\n[!1] 2 {1}\n[1] 1 {1}\n\
            State: 3\n[t] 3 {1}\n--END--\n";
        let Parsed::Game(g) = parse_hoa(text).unwrap() else {
            panic!("expected a game")
        };
        assert_eq!(g.outputs, vec![PropId(1)]);
        assert_eq!(g.inputs, vec![PropId(0)]);
        assert_eq!(g.acc, Acceptance::El(AccFormula::Inf(ColorSet::singleton(1))));
        assert_eq!(g.hoa.transitions, fixtures::arbiter_automaton().transitions);
    }

    #[test]
    fn neutral_color_and_split() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 2 Inf(0) & Fin(1)\n--BODY--\nState: 0\n[0] 0\n[!0] 0 {0 1}\n--END--\n";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.hoa.index, 3);
        let colors: Vec<ColorId> = a.hoa.transitions.iter().map(|t| t.color).collect();
        assert_eq!(colors, vec![3, 1, 2]);
        assert!(!a.acc.colors().contains(3));
    }

    #[test]
    fn constants_in_acceptance() {
        let a = parse_acceptance("t", None, 0).unwrap();
        assert_eq!(a, Acceptance::El(AccFormula::t()));
        let b = parse_acceptance("f | Inf(0)", None, 1).unwrap();
        assert_eq!(b, Acceptance::El(AccFormula::Inf(ColorSet::singleton(1))));
    }

    #[test]
    fn named_families_round_trip() {
        let s = |xs: &[ColorId]| xs.iter().copied().collect::<ColorSet>();
        let accs = vec![
            Acceptance::Buchi(s(&[1, 3])),
            Acceptance::Buchi(s(&[])),
            Acceptance::CoBuchi(s(&[2])),
            Acceptance::CoBuchi(s(&[1, 2])),
            Acceptance::Reachability(s(&[2])),
            Acceptance::Safety(s(&[1, 3])),
            Acceptance::Safety(s(&[1, 2, 3, 4])),
            Acceptance::Parity { colors: 4 },
            Acceptance::Parity { colors: 1 },
            Acceptance::Rabin(vec![(s(&[1]), s(&[2, 3])), (s(&[]), s(&[]))]),
            Acceptance::Rabin(vec![(s(&[1, 4]), s(&[2]))]),
            Acceptance::Rabin(vec![]),
            Acceptance::Streett(vec![(s(&[1, 2]), s(&[3])), (s(&[4]), s(&[1, 2]))]),
            Acceptance::Streett(vec![]),
            Acceptance::Muller(vec![s(&[1, 2]), s(&[3]), s(&[])]),
            Acceptance::Muller(vec![s(&[4])]),
            Acceptance::Muller(vec![]),
            Acceptance::El(AccFormula::or([
                AccFormula::and([AccFormula::Inf(s(&[1, 2])), AccFormula::Fin(s(&[3, 4]))]),
                AccFormula::Inf(s(&[4])),
            ])),
        ];
        for acc in accs {
            let mut hoa = fixtures::universal_automaton(1);
            hoa.index = 4;
            let a = Automaton { hoa, acc };
            let text = print_hoa(&a);
            assert_eq!(parse_automaton(&text).unwrap(), a, "{text}");
        }
    }

    #[test]
    fn rejections_carry_positions() {
        let cases = [
            ("HOA: v1\nStates: 1\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n0 {0}\n--END--\n", "implicit"),
            ("HOA: v1\nStates: 1\nAlias: @a 0\nAcceptance: 1 Inf(0)\n--BODY--\n--END--\n", "Alias"),
            ("HOA: v1\nStates: 2\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0&1 {0}\n--END--\n", "universal"),
            ("HOA: v1\nStates: 1\nAcceptance: 1 Fin(!0)\n--BODY--\n--END--\n", "negated"),
            ("HOA: v1\nStates: 1\nFoo: 1\nAcceptance: 1 Inf(0)\n--BODY--\n--END--\n", "header Foo"),
            ("HOA: v1\nStates: 1\nStart: 0 & 1\nAcceptance: 1 Inf(0)\n--BODY--\n--END--\n", "conjunctive"),
        ];
        for (text, what) in cases {
            match parse_hoa(text) {
                Err(HoaError::Unsupported { feature, line, .. }) => {
                    assert!(feature.contains(what), "{feature} vs {what}");
                    assert!(line >= 1);
                }
                other => panic!("expected unsupported {what}, got {other:?}"),
            }
        }
        let bad = "HOA: v1\nStates: 1\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0 & ] 0 {0}\n--END--\n";
        assert!(matches!(parse_hoa(bad), Err(HoaError::Syntax { line: 6, .. })));
        let oob = "HOA: v1\nStates: 1\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 3 {0}\n--END--\n";
        assert!(matches!(parse_hoa(oob), Err(HoaError::IndexOutOfRange { line: 6, .. })));
        let mark = "HOA: v1\nStates: 1\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0 {4}\n--END--\n";
        assert!(matches!(parse_hoa(mark), Err(HoaError::IndexOutOfRange { .. })));
        assert!(parse_hoa("").is_err());
        assert!(parse_hoa("HOA: v1\n\"unterminated").is_err());
    }

    #[test]
    fn unknown_lowercase_headers_are_skipped() {
        let text = "HOA: v1\ntool: \"x\" \"1.0\"\nproperties: trans-labels explicit-labels\nStates: 1\nStart: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[t] 0\n--END--\n";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.hoa.transitions[0].color, 1);
        assert_eq!(a.hoa.index, 1);
    }

    #[test]
    fn invalid_game_is_rejected() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\ncontrollable-AP: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0] 0 {0}\n--END--\n";
        assert!(matches!(parse_hoa(text), Err(HoaError::InvalidGame { line: 5, .. })));
    }
}
