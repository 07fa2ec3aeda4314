use crate::formula::{exists_forall_sat, sat, Formula, PropId, Valuation};
use crate::games::Hog;

use super::{FGame, FTransition, OracleError, TheoryOracle};

/// Propositional guards, decided by the same procedures as ordinary games.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanOracle {
    pub inputs: Vec<PropId>,
    pub outputs: Vec<PropId>,
}

fn conj(gs: &[&Formula], negate: bool) -> Formula {
    Formula::and(gs.iter().map(|&g| if negate { Formula::not(g.clone()) } else { g.clone() }))
}

impl TheoryOracle for BooleanOracle {
    type Guard = Formula;
    type Witness = Valuation;

    fn exists_forall_avoid(&self, avoid: &[&Formula]) -> Result<Option<Valuation>, OracleError> {
        Ok(exists_forall_sat(&self.inputs, &self.outputs, &conj(avoid, true)))
    }

    fn forall_exists_reach(&self, reach: &[&Formula]) -> Result<bool, OracleError> {
        Ok(exists_forall_sat(&self.inputs, &self.outputs, &conj(reach, true)).is_none())
    }

    fn satisfiable(&self, guards: &[&Formula]) -> Result<bool, OracleError> {
        Ok(sat(&conj(guards, false)).is_some())
    }

    fn valid_disjunction(&self, guards: &[&Formula]) -> Result<bool, OracleError> {
        Ok(sat(&conj(guards, true)).is_none())
    }

    fn check_witness(&self, w: &Valuation, avoid: &[&Formula]) -> Result<bool, OracleError> {
        if self.inputs.iter().any(|&p| w.get(p).is_none()) {
            return Ok(false);
        }
        let any = Formula::or(avoid.iter().map(|&g| g.restrict(&|p| w.get(p))));
        Ok(sat(&any).is_none())
    }
}

/// The game as an F-game over the Boolean oracle.
pub fn fgame_from_hog(g: &Hog) -> (FGame<Formula>, BooleanOracle) {
    let f = FGame {
        num_states: g.hoa.num_states(),
        initial: g.initial(),
        transitions: g
            .hoa
            .transitions
            .iter()
            .map(|t| FTransition {
                source: t.source,
                guard: t.guard.clone(),
                target: t.target,
                color: t.color,
            })
            .collect(),
        index: g.hoa.index,
        acc: g.acc.clone(),
    };
    let o = BooleanOracle {
        inputs: g.inputs.clone(),
        outputs: g.outputs.clone(),
    };
    (f, o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Bounds;
    use crate::fixtures;
    use crate::games::{solve_hog, Player, SolveOptions};
    use crate::symbolic::solve_fgame;

    #[test]
    fn arbiter_agrees_with_the_reduction() {
        let mut g = fixtures::arbiter_game();
        let (f, o) = fgame_from_hog(&g);
        let r = solve_fgame(&f, &o, &Bounds::default()).unwrap();
        assert_eq!(r.winner, Player::Out);
        g.acc = crate::Acceptance::CoBuchi(crate::ColorSet::singleton(2));
        let (f, o) = fgame_from_hog(&g);
        let r = solve_fgame(&f, &o, &Bounds::default()).unwrap();
        assert_eq!(r.winner, solve_hog(&g, &SolveOptions::default()).unwrap().winner);
        assert_eq!(r.winner, Player::In);
        assert!(!r.in_choices.is_empty());
    }

    #[test]
    fn witnesses_are_checked() {
        let o = BooleanOracle {
            inputs: vec![PropId(0)],
            outputs: vec![PropId(1)],
        };
        let x = Formula::atom(0);
        let y = Formula::atom(1);
        let avoid = Formula::and([x.clone(), y.clone()]);
        let w = o.exists_forall_avoid(&[&avoid]).unwrap().unwrap();
        assert_eq!(w.get(PropId(0)), Some(false));
        assert!(o.check_witness(&w, &[&avoid]).unwrap());
        let bad = Valuation::from_pairs([(PropId(0), true)]);
        assert!(!o.check_witness(&bad, &[&avoid]).unwrap());
        assert!(o.forall_exists_reach(&[&Formula::or([x.clone(), y.clone()])]).unwrap());
        assert!(!o.forall_exists_reach(&[&x]).unwrap());
    }
}
