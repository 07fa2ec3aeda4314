//! Propositional guards over atomic propositions.
//!
//! Formulas are plain ASTs whose n-ary connectives are flattened when built
//! through the smart constructors ([`Formula::and`], [`Formula::or`]).  The
//! module also hosts the small decision procedures the rest of the crate
//! relies on: a DPLL-style [`sat`] and the one-alternation
//! [`exists_forall_sat`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Below this many free atoms `sat` just enumerates the truth table.
const ENUMERATION_THRESHOLD: usize = 12;

/// Index of an atomic proposition.  Names live in the owning automaton's
/// proposition list; the id is the position in that list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(pub u32);

impl PropId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PropId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("atom {0} has no value in the valuation")]
    UndefinedAtom(PropId),
    #[error("valuations overlap on atom {0}")]
    OverlappingDomains(PropId),
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(PropId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn atom(index: u32) -> Formula {
        Formula::Atom(PropId(index))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction with nested conjunctions flattened.  The empty
    /// conjunction is `True` and a singleton collapses to its element.
    pub fn and<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with nested disjunctions flattened.  The empty
    /// disjunction is `False`.
    pub fn or<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// A literal: the atom or its negation.
    pub fn literal(p: PropId, positive: bool) -> Formula {
        if positive {
            Formula::Atom(p)
        } else {
            Formula::not(Formula::Atom(p))
        }
    }

    /// Conjunction of literals fixing every proposition in `props` to the
    /// corresponding bit of `bits` (bit `i` of `bits` belongs to `props[i]`).
    pub fn minterm(props: &[PropId], bits: u64) -> Formula {
        Formula::and(
            props
                .iter()
                .enumerate()
                .map(|(i, &p)| Formula::literal(p, bits >> i & 1 == 1)),
        )
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<PropId> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<PropId>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) => {
                out.insert(*p);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
        }
    }

    /// Largest atom index mentioned, if any.
    pub fn max_atom(&self) -> Option<PropId> {
        self.atoms().into_iter().next_back()
    }

    pub fn eval(&self, v: &Valuation) -> Result<bool, FormulaError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => v.get(*p).ok_or(FormulaError::UndefinedAtom(*p))?,
            Formula::Not(f) => !f.eval(v)?,
            Formula::And(fs) => {
                for f in fs {
                    if !f.eval(v)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if f.eval(v)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Evaluation against a bit vector: atom `i` is bit `i` of `bits`.
    /// Atoms at index 64 or above read as false.
    pub fn eval_bits(&self, bits: u64) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => p.0 < 64 && bits >> p.0 & 1 == 1,
            Formula::Not(f) => !f.eval_bits(bits),
            Formula::And(fs) => fs.iter().all(|f| f.eval_bits(bits)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_bits(bits)),
        }
    }

    /// Evaluation through a lookup function; unknown atoms read as false.
    pub fn eval_with<F>(&self, lookup: &F) -> bool
    where
        F: Fn(PropId) -> Option<bool>,
    {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => lookup(*p).unwrap_or(false),
            Formula::Not(f) => !f.eval_with(lookup),
            Formula::And(fs) => fs.iter().all(|f| f.eval_with(lookup)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_with(lookup)),
        }
    }

    /// Substitutes the atoms `lookup` knows about and folds constants.
    pub fn restrict<F>(&self, lookup: &F) -> Formula
    where
        F: Fn(PropId) -> Option<bool>,
    {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(p) => match lookup(*p) {
                Some(true) => Formula::True,
                Some(false) => Formula::False,
                None => Formula::Atom(*p),
            },
            Formula::Not(f) => match f.restrict(lookup) {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                g => Formula::not(g),
            },
            Formula::And(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for f in fs {
                    match f.restrict(lookup) {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        g => out.push(g),
                    }
                }
                Formula::and(out)
            }
            Formula::Or(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for f in fs {
                    match f.restrict(lookup) {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        g => out.push(g),
                    }
                }
                Formula::or(out)
            }
        }
    }

    /// Fixes the propositions of `props` to the bits of `bits` (bit `i`
    /// belongs to `props[i]`) and folds constants.
    pub fn restrict_bits(&self, props: &[PropId], bits: u64) -> Formula {
        let lookup = |p: PropId| {
            props
                .iter()
                .position(|&q| q == p)
                .map(|i| bits >> i & 1 == 1)
        };
        self.restrict(&lookup)
    }

    /// Unit literals of a constant-free formula: the formula itself when it
    /// is a literal, or the literal conjuncts of a top-level conjunction.
    fn units(&self) -> Vec<(PropId, bool)> {
        fn as_literal(f: &Formula) -> Option<(PropId, bool)> {
            match f {
                Formula::Atom(p) => Some((*p, true)),
                Formula::Not(inner) => match inner.as_ref() {
                    Formula::Atom(p) => Some((*p, false)),
                    _ => None,
                },
                _ => None,
            }
        }
        match self {
            Formula::And(fs) => fs.iter().filter_map(as_literal).collect(),
            f => as_literal(f).into_iter().collect(),
        }
    }

    fn count_atoms(&self, counts: &mut HashMap<PropId, usize>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) => *counts.entry(*p).or_default() += 1,
            Formula::Not(f) => f.count_atoms(counts),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.count_atoms(counts)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_label(self))
    }
}

/// Total assignment of truth values over a declared set of propositions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    values: BTreeMap<PropId, bool>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (PropId, bool)>>(pairs: I) -> Valuation {
        Valuation {
            values: pairs.into_iter().collect(),
        }
    }

    /// Valuation over `props` where `props[i]` takes bit `i` of `bits`.
    pub fn from_bits(props: &[PropId], bits: u64) -> Valuation {
        Valuation::from_pairs(props.iter().enumerate().map(|(i, &p)| (p, bits >> i & 1 == 1)))
    }

    /// Every valuation over `props`, in binary counting order.
    pub fn enumerate(props: &[PropId]) -> impl Iterator<Item = Valuation> + '_ {
        assert!(props.len() < 64, "cannot enumerate valuations over 64 or more propositions");
        (0..1u64 << props.len()).map(move |bits| Valuation::from_bits(props, bits))
    }

    pub fn get(&self, p: PropId) -> Option<bool> {
        self.values.get(&p).copied()
    }

    pub fn set(&mut self, p: PropId, value: bool) {
        self.values.insert(p, value);
    }

    pub fn domain(&self) -> impl Iterator<Item = PropId> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PropId, bool)> + '_ {
        self.values.iter().map(|(&p, &b)| (p, b))
    }

    /// Union of two valuations over disjoint domains.
    pub fn merge(&self, other: &Valuation) -> Result<Valuation, FormulaError> {
        let mut values = self.values.clone();
        for (&p, &b) in &other.values {
            if values.insert(p, b).is_some() {
                return Err(FormulaError::OverlappingDomains(p));
            }
        }
        Ok(Valuation { values })
    }

    /// Restriction to the given propositions (missing ones are skipped).
    pub fn project(&self, props: &[PropId]) -> Valuation {
        Valuation::from_pairs(props.iter().filter_map(|&p| self.get(p).map(|b| (p, b))))
    }

    /// Bit vector with bit `i` set iff proposition `i` is true.  Only
    /// propositions below index 64 are representable.
    pub fn to_bits(&self) -> u64 {
        self.values
            .iter()
            .filter(|(p, &b)| b && p.0 < 64)
            .fold(0, |acc, (p, _)| acc | 1 << p.0)
    }

    /// Bits relative to `props`: bit `i` is the value of `props[i]`
    /// (unassigned propositions read as false).
    pub fn bits_over(&self, props: &[PropId]) -> u64 {
        props
            .iter()
            .enumerate()
            .filter(|(_, &p)| self.get(p) == Some(true))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", p, if b { "T" } else { "F" })?;
        }
        f.write_str("}")
    }
}

/// Evaluates `phi` under `v`.
pub fn eval(phi: &Formula, v: &Valuation) -> Result<bool, FormulaError> {
    phi.eval(v)
}

/// Returns a satisfying valuation over the atoms of `phi`, if any.
///
/// DPLL over the formula tree: constants are folded after every decision,
/// top-level unit literals are propagated, and the search branches on the
/// most frequent remaining atom.  Sub-problems with few free atoms are
/// finished by enumeration.
pub fn sat(phi: &Formula) -> Option<Valuation> {
    let atoms: Vec<PropId> = phi.atoms().into_iter().collect();
    let mut assignment: HashMap<PropId, bool> = HashMap::new();
    if !dpll(phi, &mut assignment) {
        return None;
    }
    Some(Valuation::from_pairs(
        atoms
            .iter()
            .map(|&p| (p, assignment.get(&p).copied().unwrap_or(false))),
    ))
}

fn dpll(phi: &Formula, assignment: &mut HashMap<PropId, bool>) -> bool {
    let f = phi.restrict(&|p| assignment.get(&p).copied());
    match f {
        Formula::True => return true,
        Formula::False => return false,
        _ => {}
    }

    let units = f.units();
    if !units.is_empty() {
        let mut assigned = Vec::new();
        let mut conflict = false;
        for (p, b) in units {
            match assignment.get(&p) {
                Some(&old) if old != b => {
                    conflict = true;
                    break;
                }
                Some(_) => {}
                None => {
                    assignment.insert(p, b);
                    assigned.push(p);
                }
            }
        }
        if !conflict && dpll(&f, assignment) {
            return true;
        }
        for p in assigned {
            assignment.remove(&p);
        }
        return false;
    }

    let free: Vec<PropId> = f.atoms().into_iter().collect();
    if free.len() < ENUMERATION_THRESHOLD {
        for bits in 0..1u64 << free.len() {
            let lookup = |p: PropId| free.iter().position(|&q| q == p).map(|i| bits >> i & 1 == 1);
            if f.eval_with(&lookup) {
                for (i, &p) in free.iter().enumerate() {
                    assignment.insert(p, bits >> i & 1 == 1);
                }
                return true;
            }
        }
        return false;
    }

    let mut counts = HashMap::new();
    f.count_atoms(&mut counts);
    let pivot = counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(p, _)| p)
        .expect("non-constant formula has atoms");
    for value in [true, false] {
        assignment.insert(pivot, value);
        if dpll(&f, assignment) {
            return true;
        }
    }
    assignment.remove(&pivot);
    false
}

/// Decides `∃x_e ∀x_a φ` and returns a witness over `x_e`.
///
/// The universal block is eliminated by Shannon expansion (one restricted
/// copy of `φ` per valuation of the universal atoms that `φ` mentions) and
/// the resulting conjunction is handed to [`sat`].  Atoms of `φ` outside
/// both blocks are treated as existential but are not part of the witness.
pub fn exists_forall_sat(x_e: &[PropId], x_a: &[PropId], phi: &Formula) -> Option<Valuation> {
    let mentioned = phi.atoms();
    let universal: Vec<PropId> = x_a.iter().copied().filter(|p| mentioned.contains(p)).collect();
    assert!(
        universal.len() < 32,
        "universal block of {} atoms is beyond Shannon expansion",
        universal.len()
    );
    let mut copies = Vec::with_capacity(1 << universal.len());
    for bits in 0..1u64 << universal.len() {
        match phi.restrict_bits(&universal, bits) {
            Formula::True => {}
            Formula::False => return None,
            g => copies.push(g),
        }
    }
    let model = sat(&Formula::and(copies))?;
    Some(Valuation::from_pairs(
        x_e.iter().map(|&p| (p, model.get(p).unwrap_or(false))),
    ))
}

/// Prints a formula in HOA label syntax.
pub fn print_label(phi: &Formula) -> String {
    let mut out = String::new();
    write_label(phi, &mut out);
    out
}

fn write_label(phi: &Formula, out: &mut String) {
    match phi {
        Formula::True => out.push('t'),
        Formula::False => out.push('f'),
        Formula::Atom(p) => out.push_str(&p.0.to_string()),
        Formula::Not(f) => {
            out.push('!');
            match f.as_ref() {
                Formula::And(_) | Formula::Or(_) => {
                    out.push('(');
                    write_label(f, out);
                    out.push(')');
                }
                _ => write_label(f, out),
            }
        }
        Formula::And(fs) => {
            if fs.is_empty() {
                out.push('t');
            }
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                if matches!(f, Formula::Or(_)) {
                    out.push('(');
                    write_label(f, out);
                    out.push(')');
                } else {
                    write_label(f, out);
                }
            }
        }
        Formula::Or(fs) => {
            if fs.is_empty() {
                out.push('f');
            }
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_label(f, out);
            }
        }
    }
}

/// Parses HOA label syntax: `t`, `f`, atom indices, `!`, `&`, `|` and
/// parentheses, with the usual precedence (`!` over `&` over `|`).
pub fn parse_label(text: &str) -> Result<Formula, FormulaError> {
    let mut parser = LabelParser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let f = parser.disjunction()?;
    parser.skip_ws();
    if parser.pos < parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(f)
}

struct LabelParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl LabelParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> FormulaError {
        FormulaError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut items = vec![self.conjunction()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            items.push(self.conjunction()?);
        }
        Ok(Formula::or(items))
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.disjunction()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(b't') => {
                self.pos += 1;
                self.end_of_word()?;
                Ok(Formula::True)
            }
            Some(b'f') => {
                self.pos += 1;
                self.end_of_word()?;
                Ok(Formula::False)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let index = digits.parse::<u32>().map_err(|_| FormulaError::Syntax {
                    pos: start,
                    message: format!("atom index {digits} out of range"),
                })?;
                Ok(Formula::atom(index))
            }
            Some(b'@') => Err(self.error("aliases are not supported")),
            Some(_) => Err(self.error("expected 't', 'f', an atom index, '!' or '('")),
            None => Err(self.error("unexpected end of label")),
        }
    }

    fn end_of_word(&self) -> Result<(), FormulaError> {
        match self.bytes.get(self.pos) {
            Some(c) if c.is_ascii_alphanumeric() || *c == b'_' => {
                Err(self.error("unexpected identifier character"))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u32) -> Formula {
        Formula::atom(i)
    }

    fn truth_table(f: &Formula, n: u32) -> Vec<bool> {
        (0..1u64 << n).map(|bits| f.eval_bits(bits)).collect()
    }

    #[test]
    fn eval_direct_semantics() {
        let r = PropId(0);
        let g = PropId(1);
        let phi = Formula::and([Formula::Atom(r), Formula::not(Formula::Atom(g))]);
        let v = Valuation::from_pairs([(r, true), (g, false)]);
        assert_eq!(phi.eval(&v), Ok(true));
        assert_eq!(Formula::True.eval(&Valuation::new()), Ok(true));
        assert_eq!(
            phi.eval(&Valuation::from_pairs([(r, true)])),
            Err(FormulaError::UndefinedAtom(g))
        );
    }

    #[test]
    fn constructors_flatten() {
        let f = Formula::and([p(0), Formula::and([p(1), p(2)])]);
        assert_eq!(f, Formula::And(vec![p(0), p(1), p(2)]));
        assert_eq!(Formula::or(Vec::new()), Formula::False);
        assert_eq!(Formula::and([p(3)]), p(3));
    }

    #[test]
    fn sat_small_cases() {
        assert_eq!(sat(&Formula::and([p(0), Formula::not(p(0))])), None);
        let v = sat(&Formula::and([p(0), Formula::not(p(1))])).unwrap();
        assert_eq!(v.get(PropId(0)), Some(true));
        assert_eq!(v.get(PropId(1)), Some(false));
        assert!(sat(&Formula::True).unwrap().is_empty());
        assert_eq!(sat(&Formula::False), None);
    }

    #[test]
    fn sat_many_atoms_uses_branching() {
        // Pigeonhole-free chain: x0 -> x1 -> ... -> x19, x0, !x19 is unsat.
        let mut parts = vec![p(0), Formula::not(p(19))];
        for i in 0..19 {
            parts.push(Formula::or([Formula::not(p(i)), p(i + 1)]));
        }
        assert_eq!(sat(&Formula::and(parts.clone())), None);
        parts.pop();
        parts.remove(1);
        let v = sat(&Formula::and(parts.clone())).unwrap();
        assert_eq!(Formula::and(parts).eval(&v), Ok(true));
        // A formula that needs a real split: (x_i xor x_{i+1}) chain.
        let xor = |a: Formula, b: Formula| {
            Formula::or([
                Formula::and([a.clone(), Formula::not(b.clone())]),
                Formula::and([Formula::not(a), b]),
            ])
        };
        let chain = Formula::and((0..15).map(|i| xor(p(i), p(i + 1))));
        let v = sat(&chain).unwrap();
        assert_eq!(chain.eval(&v), Ok(true));
    }

    #[test]
    fn exists_forall_examples() {
        let g = PropId(1);
        let r = PropId(0);
        let phi = Formula::or([Formula::Atom(g), Formula::not(Formula::Atom(r))]);
        let w = exists_forall_sat(&[g], &[r], &phi).unwrap();
        assert_eq!(w.get(g), Some(true));
        assert_eq!(w.len(), 1);

        let iff = Formula::or([
            Formula::and([Formula::Atom(g), Formula::Atom(r)]),
            Formula::and([Formula::not(Formula::Atom(g)), Formula::not(Formula::Atom(r))]),
        ]);
        assert_eq!(exists_forall_sat(&[g], &[r], &iff), None);
    }

    #[test]
    fn label_round_trip_and_grammar() {
        assert_eq!(parse_label("0 & !1").unwrap(), Formula::and([p(0), Formula::not(p(1))]));
        assert_eq!(parse_label("t").unwrap(), Formula::True);
        assert_eq!(parse_label(" f ").unwrap(), Formula::False);
        let f = parse_label("!(0 | 1) & (2 | !3 & 4) | 5").unwrap();
        assert_eq!(parse_label(&print_label(&f)).unwrap(), f);
        assert_eq!(truth_table(&f, 6), truth_table(&parse_label(&print_label(&f)).unwrap(), 6));
    }

    #[test]
    fn label_errors_carry_positions() {
        match parse_label("0 & ") {
            Err(FormulaError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_label("(0 | 1"), Err(FormulaError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_label("0 1"), Err(FormulaError::Syntax { pos: 2, .. })));
        assert!(parse_label("true").is_err());
        assert!(parse_label("@a").is_err());
    }

    #[test]
    fn merge_is_commutative_and_checks_overlap() {
        let a = Valuation::from_pairs([(PropId(0), true)]);
        let b = Valuation::from_pairs([(PropId(1), false)]);
        assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
        assert_eq!(a.merge(&a), Err(FormulaError::OverlappingDomains(PropId(0))));
    }

    #[test]
    fn bits_helpers() {
        let props = [PropId(3), PropId(5)];
        let v = Valuation::from_bits(&props, 0b10);
        assert_eq!(v.get(PropId(3)), Some(false));
        assert_eq!(v.get(PropId(5)), Some(true));
        assert_eq!(v.to_bits(), 1 << 5);
        assert_eq!(v.bits_over(&props), 0b10);
        assert_eq!(Valuation::enumerate(&props).count(), 4);
    }
}
