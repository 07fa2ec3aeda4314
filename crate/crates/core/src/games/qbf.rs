//! Two-block quantified Boolean formulas `∀x ∃y φ` and their encoding as
//! reachability and safety games.

use thiserror::Error;

use crate::automaton::{Acceptance, ColorSet, Hoa};
use crate::formula::{Formula, PropId};

use super::Hog;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("variable `{0}` is not quantified")]
    Unbound(String),
    #[error("variable `{0}` is quantified twice")]
    Duplicate(String),
}

/// `∀ universal ∃ existential. matrix`; atom `i` is `universal[i]` for
/// `i < |universal|`, then the existential variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf2 {
    pub universal: Vec<String>,
    pub existential: Vec<String>,
    pub matrix: Formula,
}

impl Qbf2 {
    pub fn num_vars(&self) -> usize {
        self.universal.len() + self.existential.len()
    }

    pub fn universal_props(&self) -> Vec<PropId> {
        (0..self.universal.len() as u32).map(PropId).collect()
    }

    pub fn existential_props(&self) -> Vec<PropId> {
        (self.universal.len() as u32..self.num_vars() as u32).map(PropId).collect()
    }
}

/// Games won by Out iff the formula is true: the environment picks `x`, the
/// controller `y`; a round satisfying the matrix moves to a state colored 2
/// forever, otherwise to one colored 1 forever.  Returned as the pair
/// (reachability of 2, safety of 2).
pub fn hog_from_qbf2(q: &Qbf2) -> (Hog, Hog) {
    let names = q.universal.iter().chain(&q.existential).cloned().collect();
    let mut h = Hoa::new(3, names, 2);
    h.add_transition(0, q.matrix.clone(), 2, 2);
    h.add_transition(0, Formula::not(q.matrix.clone()), 1, 1);
    h.add_transition(1, Formula::True, 1, 1);
    h.add_transition(2, Formula::True, 2, 2);
    let outputs = q.existential_props();
    let reach = Hog::new(h.clone(), Acceptance::Reachability(ColorSet::singleton(2)), outputs.clone())
        .expect("qbf arena is deterministic and complete");
    let safe = Hog::new(h, Acceptance::Safety(ColorSet::singleton(2)), outputs)
        .expect("qbf arena is deterministic and complete");
    (reach, safe)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, QbfError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() || c == ',' || c == '.' => {
                i += 1;
                continue;
            }
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Imp
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_alphanumeric() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            c => {
                return Err(QbfError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: &str) -> Result<T, QbfError> {
        Err(QbfError::Syntax {
            pos: self.here(),
            message: message.into(),
        })
    }

    fn iff(&mut self) -> Result<Formula, QbfError> {
        let mut left = self.imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let right = self.imp()?;
            left = Formula::or([
                Formula::and([left.clone(), right.clone()]),
                Formula::and([Formula::not(left), Formula::not(right)]),
            ]);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, QbfError> {
        let left = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            let right = self.imp()?;
            return Ok(Formula::or([Formula::not(left), right]));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, QbfError> {
        let mut items = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::or(items) })
    }

    fn and(&mut self) -> Result<Formula, QbfError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::and(items) })
    }

    fn unary(&mut self) -> Result<Formula, QbfError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => match self.vars.iter().position(|v| *v == name) {
                        Some(i) => Ok(Formula::atom(i as u32)),
                        None => Err(QbfError::Unbound(name)),
                    },
                }
            }
            _ => self.err("expected a formula"),
        }
    }
}

/// Parses `forall x1 x2 exists y1 y2 <formula>` with `! & | -> <->`,
/// parentheses and the constants `true`/`false`.  Either block may be empty
/// (then its keyword may be omitted).
pub fn parse_qbf2(text: &str) -> Result<Qbf2, QbfError> {
    let toks = tokenize(text)?;
    let mut pos = 0;
    let keyword = |pos: usize, kw: &str| matches!(toks.get(pos), Some((_, Tok::Ident(s))) if s == kw);
    let mut blocks = [Vec::new(), Vec::new()];
    for (b, kw) in ["forall", "exists"].into_iter().enumerate() {
        if keyword(pos, kw) {
            pos += 1;
            // variables run until the next keyword or a non-identifier; the
            // last identifier before the matrix belongs to the matrix only
            // if it is followed by an operator
            while let Some((_, Tok::Ident(name))) = toks.get(pos) {
                if name == "exists" || name == "forall" {
                    break;
                }
                let next_is_var_or_kw = matches!(toks.get(pos + 1), Some((_, Tok::Ident(_))) | Some((_, Tok::LParen)) | Some((_, Tok::Not)));
                if !next_is_var_or_kw {
                    break;
                }
                blocks[b].push(name.clone());
                pos += 1;
            }
        }
    }
    let [universal, existential] = blocks;
    let vars: Vec<String> = universal.iter().chain(&existential).cloned().collect();
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(QbfError::Duplicate(v.clone()));
        }
        if v == "true" || v == "false" {
            return Err(QbfError::Syntax {
                pos: 0,
                message: format!("`{v}` cannot be quantified"),
            });
        }
    }
    let mut p = Parser {
        end: text.len(),
        toks,
        pos,
        vars: &vars,
    };
    let matrix = p.iff()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(Qbf2 {
        universal,
        existential,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{solve_hog_direct, Player};

    #[test]
    fn parses_blocks_and_operators() {
        let q = parse_qbf2("forall x exists y (x <-> y)").unwrap();
        assert_eq!(q.universal, vec!["x"]);
        assert_eq!(q.existential, vec!["y"]);
        for bits in 0..4u64 {
            assert_eq!(q.matrix.eval_bits(bits), (bits & 1) == (bits >> 1 & 1));
        }
        let q = parse_qbf2("forall a b exists c !a -> b & c | false").unwrap();
        assert_eq!(q.num_vars(), 3);
        assert!(matches!(parse_qbf2("forall x exists y (x & z)"), Err(QbfError::Unbound(_))));
        assert!(matches!(parse_qbf2("forall x exists y (x &"), Err(QbfError::Syntax { .. })));
    }

    #[test]
    fn game_winner_is_truth_value() {
        for (text, truth) in [
            ("forall x exists y (x <-> y)", true),
            ("forall x exists y (x <-> !x)", false),
            ("exists y (y | !y)", true),
            ("forall x exists y (x & y)", false),
        ] {
            let q = parse_qbf2(text).unwrap();
            let (r, s) = hog_from_qbf2(&q);
            let want = if truth { Player::Out } else { Player::In };
            assert_eq!(solve_hog_direct(&r).unwrap(), want, "{text}");
            assert_eq!(solve_hog_direct(&s).unwrap(), want, "{text}");
        }
    }
}
