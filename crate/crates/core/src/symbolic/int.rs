//! Bounded integer guards: Boolean combinations of linear atoms
//! `Σ aᵢ·xᵢ + c ⋈ 0` over variables ranging over `0..=B`, decided by
//! enumeration.
//!
//! Games are read from a HOA-like text:
//!
//! ```text
//! domain: int 0..4
//! inputs: x
//! outputs: y
//! States: 2
//! Start: 0
//! acc-name: safety
//! Acceptance: 2 Fin(1)
//! --BODY--
//! State: 0
//! [x < y] 0 {0}
//! [x >= y] 1 {1}
//! State: 1
//! [t] 1 {1}
//! --END--
//! ```
//!
//! Set `k` in braces is color `k + 1`.  Atoms compare two linear terms
//! (`2*x - y + 1`) with one of `< <= = == != >= >`; parentheses group
//! Boolean subformulas only.

use std::fmt::Write as _;

use crate::automaton::AutomatonError;
use crate::bounds::Bounds;
use crate::hoa_io::{parse_acceptance, print_acceptance};

use super::{FGame, FTransition, OracleError, SymbolicError, TheoryOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Cmp {
    fn holds(self, v: i64) -> bool {
        match self {
            Cmp::Lt => v < 0,
            Cmp::Le => v <= 0,
            Cmp::Eq => v == 0,
            Cmp::Ne => v != 0,
            Cmp::Ge => v >= 0,
            Cmp::Gt => v > 0,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

/// `Σ coeffs[i]·x_i + constant ⋈ 0`; variables are the inputs followed by
/// the outputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinAtom {
    pub coeffs: Vec<i64>,
    pub constant: i64,
    pub cmp: Cmp,
}

impl LinAtom {
    pub fn eval(&self, x: &[i64]) -> bool {
        let v: i64 = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + self.constant;
        self.cmp.holds(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntGuard {
    True,
    False,
    Atom(LinAtom),
    Not(Box<IntGuard>),
    And(Vec<IntGuard>),
    Or(Vec<IntGuard>),
}

impl IntGuard {
    pub fn eval(&self, x: &[i64]) -> bool {
        match self {
            IntGuard::True => true,
            IntGuard::False => false,
            IntGuard::Atom(a) => a.eval(x),
            IntGuard::Not(g) => !g.eval(x),
            IntGuard::And(gs) => gs.iter().all(|g| g.eval(x)),
            IntGuard::Or(gs) => gs.iter().any(|g| g.eval(x)),
        }
    }

    fn atoms_ok(&self, vars: usize) -> bool {
        match self {
            IntGuard::True | IntGuard::False => true,
            IntGuard::Atom(a) => a.coeffs.len() == vars,
            IntGuard::Not(g) => g.atoms_ok(vars),
            IntGuard::And(gs) | IntGuard::Or(gs) => gs.iter().all(|g| g.atoms_ok(vars)),
        }
    }

    /// Text form, parsable by the game reader.
    pub fn to_text(&self, names: &[String]) -> String {
        match self {
            IntGuard::True => "t".into(),
            IntGuard::False => "f".into(),
            IntGuard::Atom(a) => {
                let mut s = String::new();
                for (i, &c) in a.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
                    let sign = if c < 0 { "-" } else { "+" };
                    if s.is_empty() {
                        if c < 0 {
                            s.push('-');
                        }
                    } else {
                        let _ = write!(s, " {sign} ");
                    }
                    match c.abs() {
                        1 => s.push_str(&names[i]),
                        k => {
                            let _ = write!(s, "{k}*{}", names[i]);
                        }
                    }
                }
                match (s.is_empty(), a.constant) {
                    (true, c) => s = c.to_string(),
                    (false, 0) => {}
                    (false, c) if c < 0 => {
                        let _ = write!(s, " - {}", -c);
                    }
                    (false, c) => {
                        let _ = write!(s, " + {c}");
                    }
                }
                format!("{s} {} 0", a.cmp.symbol())
            }
            IntGuard::Not(g) => format!("!({})", g.to_text(names)),
            IntGuard::And(gs) => {
                if gs.is_empty() {
                    return "t".into();
                }
                gs.iter().map(|g| format!("({})", g.to_text(names))).collect::<Vec<_>>().join(" & ")
            }
            IntGuard::Or(gs) => {
                if gs.is_empty() {
                    return "f".into();
                }
                gs.iter().map(|g| format!("({})", g.to_text(names))).collect::<Vec<_>>().join(" | ")
            }
        }
    }
}

/// Every vector in `0..=domain` of length `n`, in lexicographic order.
fn assignments(n: usize, domain: i64) -> impl Iterator<Item = Vec<i64>> {
    let base = (domain + 1) as u64;
    let total = base.pow(n as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (k % base) as i64;
            k /= base;
        }
        v
    })
}

/// Variables `inputs ++ outputs`, each over `0..=domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntOracle {
    pub domain: i64,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl IntOracle {
    pub fn new(domain: i64, inputs: Vec<String>, outputs: Vec<String>, bounds: &Bounds) -> Result<IntOracle, OracleError> {
        if domain < 0 || domain > bounds.int_domain {
            return Err(AutomatonError::BoundExceeded {
                what: "integer domain bound",
                actual: domain.max(0) as usize,
                limit: bounds.int_domain as usize,
            }
            .into());
        }
        Ok(IntOracle { domain, inputs, outputs })
    }

    pub fn num_vars(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.inputs.iter().chain(&self.outputs).cloned().collect()
    }

    fn check(&self, gs: &[&IntGuard]) -> Result<(), OracleError> {
        match gs.iter().find(|g| !g.atoms_ok(self.num_vars())) {
            Some(g) => Err(OracleError::MalformedAtom(format!(
                "{g:?} does not range over {} variables",
                self.num_vars()
            ))),
            None => Ok(()),
        }
    }

    fn full(&self, x_in: &[i64], x_out: &[i64]) -> Vec<i64> {
        x_in.iter().chain(x_out).copied().collect()
    }

    /// `∃x_in ∀x_out φ`, with the least witness in lexicographic order.
    pub fn exists_forall(&self, phi: &IntGuard) -> Result<Option<Vec<i64>>, OracleError> {
        self.check(&[phi])?;
        Ok(assignments(self.inputs.len(), self.domain).find(|x_in| {
            assignments(self.outputs.len(), self.domain).all(|x_out| phi.eval(&self.full(x_in, &x_out)))
        }))
    }
}

impl TheoryOracle for IntOracle {
    type Guard = IntGuard;
    type Witness = Vec<i64>;

    fn exists_forall_avoid(&self, avoid: &[&IntGuard]) -> Result<Option<Vec<i64>>, OracleError> {
        let phi = IntGuard::And(avoid.iter().map(|&g| IntGuard::Not(Box::new(g.clone()))).collect());
        self.exists_forall(&phi)
    }

    fn forall_exists_reach(&self, reach: &[&IntGuard]) -> Result<bool, OracleError> {
        self.check(reach)?;
        Ok(assignments(self.inputs.len(), self.domain).all(|x_in| {
            assignments(self.outputs.len(), self.domain)
                .any(|x_out| reach.iter().any(|g| g.eval(&self.full(&x_in, &x_out))))
        }))
    }

    fn satisfiable(&self, guards: &[&IntGuard]) -> Result<bool, OracleError> {
        self.check(guards)?;
        Ok(assignments(self.num_vars(), self.domain).any(|x| guards.iter().all(|g| g.eval(&x))))
    }

    fn valid_disjunction(&self, guards: &[&IntGuard]) -> Result<bool, OracleError> {
        self.check(guards)?;
        Ok(assignments(self.num_vars(), self.domain).all(|x| guards.iter().any(|g| g.eval(&x))))
    }

    fn check_witness(&self, w: &Vec<i64>, avoid: &[&IntGuard]) -> Result<bool, OracleError> {
        self.check(avoid)?;
        if w.len() != self.inputs.len() || w.iter().any(|&v| v < 0 || v > self.domain) {
            return Ok(false);
        }
        Ok(assignments(self.outputs.len(), self.domain)
            .all(|x_out| !avoid.iter().any(|g| g.eval(&self.full(w, &x_out)))))
    }
}

// ---- text format ----

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    const SYMS: [&str; 13] = ["<=", ">=", "==", "!=", "<", ">", "=", "+", "-", "*", "!", "&", "|"];
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '(' || c == ')' {
            out.push(Tok::Sym(if c == '(' { "(" } else { ")" }));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = s[start..i].parse().map_err(|_| format!("integer {} out of range", &s[start..i]))?;
            out.push(Tok::Int(v));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(s[start..i].to_string()));
            continue;
        }
        for sym in SYMS {
            if s[i..].starts_with(sym) {
                out.push(Tok::Sym(sym));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(format!("unexpected character '{c}'"));
    }
    Ok(out)
}

struct GuardParser<'a> {
    toks: Vec<Tok>,
    at: usize,
    names: &'a [String],
}

impl GuardParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if self.peek() == Some(&Tok::Sym(match sym {
            "(" => "(",
            ")" => ")",
            "!" => "!",
            "&" => "&",
            "|" => "|",
            "+" => "+",
            "-" => "-",
            "*" => "*",
            _ => return false,
        })) {
            self.at += 1;
            return true;
        }
        false
    }

    fn or(&mut self) -> Result<IntGuard, String> {
        let mut items = vec![self.and()?];
        while self.eat("|") {
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { IntGuard::Or(items) })
    }

    fn and(&mut self) -> Result<IntGuard, String> {
        let mut items = vec![self.unary()?];
        while self.eat("&") {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { IntGuard::And(items) })
    }

    fn unary(&mut self) -> Result<IntGuard, String> {
        if self.eat("!") {
            return Ok(IntGuard::Not(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let g = self.or()?;
            if !self.eat(")") {
                return Err("expected ')'".into());
            }
            return Ok(g);
        }
        match self.peek() {
            Some(Tok::Ident(s)) if s == "t" || s == "true" => {
                self.at += 1;
                Ok(IntGuard::True)
            }
            Some(Tok::Ident(s)) if s == "f" || s == "false" => {
                self.at += 1;
                Ok(IntGuard::False)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<IntGuard, String> {
        let (lc, lk) = self.linear()?;
        let cmp = match self.peek() {
            Some(Tok::Sym("<")) => Cmp::Lt,
            Some(Tok::Sym("<=")) => Cmp::Le,
            Some(Tok::Sym("=")) | Some(Tok::Sym("==")) => Cmp::Eq,
            Some(Tok::Sym("!=")) => Cmp::Ne,
            Some(Tok::Sym(">=")) => Cmp::Ge,
            Some(Tok::Sym(">")) => Cmp::Gt,
            other => return Err(format!("expected a comparison, found {other:?}")),
        };
        self.at += 1;
        let (rc, rk) = self.linear()?;
        Ok(IntGuard::Atom(LinAtom {
            coeffs: lc.iter().zip(&rc).map(|(a, b)| a - b).collect(),
            constant: lk - rk,
            cmp,
        }))
    }

    fn linear(&mut self) -> Result<(Vec<i64>, i64), String> {
        let mut coeffs = vec![0; self.names.len()];
        let mut constant = 0;
        let mut sign = if self.eat("-") { -1 } else { 1 };
        loop {
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.at += 1;
                    if self.eat("*") {
                        let v = self.var()?;
                        coeffs[v] += sign * k;
                    } else {
                        constant += sign * k;
                    }
                }
                Some(Tok::Ident(_)) => {
                    let v = self.var()?;
                    coeffs[v] += sign;
                }
                other => return Err(format!("expected a term, found {other:?}")),
            }
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                return Ok((coeffs, constant));
            }
        }
    }

    fn var(&mut self) -> Result<usize, String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.at += 1;
                self.names
                    .iter()
                    .position(|n| *n == s)
                    .ok_or_else(|| format!("undeclared variable {s}"))
            }
            other => Err(format!("expected a variable, found {other:?}")),
        }
    }
}

/// Parses a guard over `names` (inputs then outputs).
pub fn parse_int_guard(text: &str, names: &[String]) -> Result<IntGuard, String> {
    let toks = tokenize(text)?;
    let mut p = GuardParser { toks, at: 0, names };
    let g = p.or()?;
    if p.at != p.toks.len() {
        return Err(format!("trailing input {:?}", p.toks[p.at]));
    }
    Ok(g)
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "t" | "f" | "true" | "false")
}

/// Reads a bounded-integer game.
pub fn parse_int_game(text: &str, bounds: &Bounds) -> Result<(FGame<IntGuard>, IntOracle), SymbolicError> {
    let err = |line: usize, message: String| SymbolicError::Parse { line, message };
    let mut domain: Option<i64> = None;
    let mut inputs: Vec<String> = Vec::new();
    let mut outputs: Vec<String> = Vec::new();
    let mut states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut acc_name: Option<String> = None;
    let mut acc_line: Option<(usize, String)> = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut in_body = false;
    for (n, line) in lines.by_ref() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "--BODY--" {
            in_body = true;
            break;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(n, "expected 'key: value'".into()))?;
        let value = value.trim();
        match key.trim() {
            "domain" => {
                let range = value
                    .strip_prefix("int")
                    .map(str::trim)
                    .and_then(|r| r.split_once(".."))
                    .ok_or_else(|| err(n, "expected 'int 0..B'".into()))?;
                if range.0.trim() != "0" {
                    return Err(err(n, "domains start at 0".into()));
                }
                domain = Some(range.1.trim().parse().map_err(|_| err(n, "bad domain bound".into()))?);
            }
            "inputs" => inputs = value.split_whitespace().map(str::to_string).collect(),
            "outputs" => outputs = value.split_whitespace().map(str::to_string).collect(),
            "States" => states = Some(value.parse().map_err(|_| err(n, "bad state count".into()))?),
            "Start" => start = Some(value.parse().map_err(|_| err(n, "bad start state".into()))?),
            "acc-name" => acc_name = Some(value.to_string()),
            "Acceptance" => acc_line = Some((n, value.to_string())),
            "name" | "HOA" => {}
            other => return Err(err(n, format!("unknown header '{other}'"))),
        }
    }
    if !in_body {
        return Err(err(0, "missing --BODY--".into()));
    }
    let domain = domain.ok_or_else(|| err(0, "missing 'domain:' header".into()))?;
    let names: Vec<String> = inputs.iter().chain(&outputs).cloned().collect();
    for (i, v) in names.iter().enumerate() {
        if is_reserved(v) || names[..i].contains(v) {
            return Err(err(0, format!("bad or duplicate variable name {v}")));
        }
    }
    let num_states = states.ok_or_else(|| err(0, "missing 'States:' header".into()))?;
    let (acc_n, acc_text) = acc_line.ok_or_else(|| err(0, "missing 'Acceptance:' header".into()))?;
    let (count, clause) = acc_text.split_once(char::is_whitespace).unwrap_or((&acc_text, "t"));
    let index: u32 = count.parse().map_err(|_| err(acc_n, "bad set count".into()))?;
    let acc = parse_acceptance(clause, acc_name.as_deref(), index).map_err(|e| err(acc_n, e.to_string()))?;
    let mut transitions = Vec::new();
    let mut current: Option<usize> = None;
    let mut ended = false;
    for (n, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "--END--" {
            ended = true;
            break;
        }
        if let Some(rest) = line.strip_prefix("State:") {
            let q: usize = rest
                .split_whitespace()
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(n, "bad state id".into()))?;
            current = Some(q);
            continue;
        }
        let source = current.ok_or_else(|| err(n, "edge before any 'State:'".into()))?;
        let rest = line.strip_prefix('[').ok_or_else(|| err(n, "expected '[guard]'".into()))?;
        let (guard, rest) = rest.split_once(']').ok_or_else(|| err(n, "missing ']'".into()))?;
        let guard = parse_int_guard(guard, &names).map_err(|m| err(n, m))?;
        let (target, color) = rest.trim().split_once('{').ok_or_else(|| err(n, "missing color '{k}'".into()))?;
        let target: usize = target.trim().parse().map_err(|_| err(n, "bad target".into()))?;
        let set: u32 = color
            .trim()
            .strip_suffix('}')
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(n, "bad color".into()))?;
        if set >= index {
            return Err(err(n, format!("color set {set} with only {index} sets")));
        }
        transitions.push(FTransition {
            source,
            guard,
            target,
            color: set + 1,
        });
    }
    if !ended {
        return Err(err(0, "missing --END--".into()));
    }
    let oracle = IntOracle::new(domain, inputs, outputs, bounds)?;
    let game = FGame {
        num_states,
        initial: start.unwrap_or(0),
        transitions,
        index,
        acc,
    };
    Ok((game, oracle))
}

pub fn print_int_game(g: &FGame<IntGuard>, o: &IntOracle) -> String {
    let names = o.names();
    let mut out = String::new();
    let _ = writeln!(out, "domain: int 0..{}", o.domain);
    let _ = writeln!(out, "inputs: {}", o.inputs.join(" "));
    let _ = writeln!(out, "outputs: {}", o.outputs.join(" "));
    let _ = writeln!(out, "States: {}", g.num_states);
    let _ = writeln!(out, "Start: {}", g.initial);
    let (name, clause) = print_acceptance(&g.acc, g.index);
    if let Some(name) = name {
        let _ = writeln!(out, "acc-name: {name}");
    }
    let _ = writeln!(out, "Acceptance: {} {}", g.index, clause);
    out.push_str("--BODY--\n");
    for q in 0..g.num_states {
        let _ = writeln!(out, "State: {q}");
        for t in g.out_transitions(q) {
            let _ = writeln!(out, "[{}] {} {{{}}}", t.guard.to_text(&names), t.target, t.color - 1);
        }
    }
    out.push_str("--END--\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Acceptance, ColorSet};
    use crate::games::Player;
    use crate::symbolic::solve_fgame;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn oracle(b: i64) -> IntOracle {
        IntOracle::new(b, vec!["x".into()], vec!["y".into()], &Bounds::default()).unwrap()
    }

    #[test]
    fn maximum_element_witness() {
        for b in 0..6 {
            let phi = parse_int_guard("x >= y", &names()).unwrap();
            assert_eq!(oracle(b).exists_forall(&phi).unwrap(), Some(vec![b]));
        }
        let phi = parse_int_guard("x > y", &names()).unwrap();
        assert_eq!(oracle(3).exists_forall(&phi).unwrap(), None);
    }

    #[test]
    fn guard_text_round_trip() {
        for s in ["2*x - y + 1 < 0", "!(x = 3) & (y >= 2 | t)", "-x + 3 != 0", "5 >= 0"] {
            let g = parse_int_guard(s, &names()).unwrap();
            let back = parse_int_guard(&g.to_text(&names()), &names()).unwrap();
            for x in 0..4 {
                for y in 0..4 {
                    assert_eq!(g.eval(&[x, y]), back.eval(&[x, y]), "{s}");
                }
            }
        }
        assert!(parse_int_guard("x <", &names()).is_err());
        assert!(parse_int_guard("z < 1", &names()).is_err());
    }

    fn stay_game(stay: &str, leave: &str) -> FGame<IntGuard> {
        let g = |s: &str| parse_int_guard(s, &names()).unwrap();
        FGame {
            num_states: 2,
            initial: 0,
            transitions: vec![
                FTransition { source: 0, guard: g(stay), target: 0, color: 1 },
                FTransition { source: 0, guard: g(leave), target: 1, color: 2 },
                FTransition { source: 1, guard: IntGuard::True, target: 1, color: 2 },
            ],
            index: 2,
            acc: Acceptance::Safety(ColorSet::singleton(1)),
        }
    }

    #[test]
    fn strict_order_safety_is_lost_for_every_bound() {
        // In picks x = B, after which no y satisfies x < y
        for b in 0..=8 {
            let r = solve_fgame(&stay_game("x < y", "x >= y"), &oracle(b), &Bounds::default()).unwrap();
            assert_eq!(r.winner, Player::In);
            assert!(r.in_choices.iter().any(|(s, w)| *s == (0, 0) && *w == vec![b]));
            let r = solve_fgame(&stay_game("x <= y", "x > y"), &oracle(b), &Bounds::default()).unwrap();
            assert_eq!(r.winner, Player::Out);
        }
    }

    #[test]
    fn game_text_round_trip() {
        let g = stay_game("x < y", "x >= y");
        let o = oracle(4);
        let text = print_int_game(&g, &o);
        let (h, p) = parse_int_game(&text, &Bounds::default()).unwrap();
        assert_eq!(p, o);
        assert_eq!(h.acc, g.acc);
        assert_eq!(print_int_game(&h, &p), text);
        let too_big = text.replace("0..4", "0..99");
        assert!(parse_int_game(&too_big, &Bounds::default()).is_err());
    }

    #[test]
    fn overlapping_guards_are_rejected() {
        let g = stay_game("x <= y", "x >= y");
        assert_eq!(
            solve_fgame(&g, &oracle(2), &Bounds::default()),
            Err(SymbolicError::NotDeterministic(0))
        );
    }
}
