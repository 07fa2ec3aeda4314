//! Size limits for the operations that enumerate valuations or subsets.

use std::env;

/// Limits guarding the exponential steps.  Every operation that would
/// exceed one of them fails with a bound-exceeded error naming it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Propositions allowed in an explicit expansion.
    pub explicit_props: usize,
    /// Input propositions allowed when building the exact-mode game graph.
    pub pg_exact_inputs: usize,
    /// States allowed when building the full-mode game graph (`2^n` subsets).
    pub pg_full_states: usize,
    /// Propositions allowed on either side of an inclusion check.
    pub inclusion_props: usize,
    /// States allowed on either side of an inclusion check, after the
    /// conversion to Büchi.
    pub inclusion_states: usize,
    /// Cap on explored states in product constructions.
    pub product_states: usize,
    /// Largest domain bound for bounded-integer guards.
    pub int_domain: i64,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            explicit_props: 12,
            pg_exact_inputs: 10,
            pg_full_states: 12,
            inclusion_props: 6,
            inclusion_states: 6,
            product_states: 2_000_000,
            int_domain: 32,
        }
    }
}

impl Bounds {
    /// Defaults overridden by `HANOI_MAX_PROPS`, `HANOI_MAX_PG_INPUTS`,
    /// `HANOI_MAX_PG_STATES`, `HANOI_MAX_INCLUSION_PROPS`,
    /// `HANOI_MAX_INCLUSION_STATES`, `HANOI_MAX_PRODUCT` and
    /// `HANOI_MAX_INT_DOMAIN`.  Unparsable values are ignored.
    pub fn from_env() -> Bounds {
        Bounds::from_lookup(|key| env::var(key).ok())
    }

    pub fn from_lookup<F: Fn(&str) -> Option<String>>(lookup: F) -> Bounds {
        let mut b = Bounds::default();
        let read = |key: &str, slot: &mut usize| {
            if let Some(v) = lookup(key).and_then(|s| s.trim().parse().ok()) {
                *slot = v;
            }
        };
        read("HANOI_MAX_PROPS", &mut b.explicit_props);
        read("HANOI_MAX_PG_INPUTS", &mut b.pg_exact_inputs);
        read("HANOI_MAX_PG_STATES", &mut b.pg_full_states);
        read("HANOI_MAX_INCLUSION_PROPS", &mut b.inclusion_props);
        read("HANOI_MAX_INCLUSION_STATES", &mut b.inclusion_states);
        read("HANOI_MAX_PRODUCT", &mut b.product_states);
        let mut dom = b.int_domain as usize;
        read("HANOI_MAX_INT_DOMAIN", &mut dom);
        b.int_domain = dom as i64;
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_overrides_defaults() {
        let b = Bounds::from_lookup(|k| match k {
            "HANOI_MAX_PROPS" => Some("5".into()),
            "HANOI_MAX_PG_STATES" => Some("junk".into()),
            _ => None,
        });
        assert_eq!(b.explicit_props, 5);
        assert_eq!(b.pg_full_states, Bounds::default().pg_full_states);
    }
}
