#[path = "support/props.rs"]
mod props;

use props::CASES;

fn holds(check: fn(usize) -> Result<usize, String>) {
    match check(CASES) {
        Ok(n) => assert!(n >= CASES, "only {n} non-vacuous cases"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn modular_inequality() {
    holds(props::modular_inequality);
}

#[test]
fn enriched_steps_are_compatible() {
    holds(props::step_compatibility);
}

#[test]
fn raise_steps_are_compatible() {
    holds(props::raise_compatibility);
}

#[test]
fn lifted_chains_respect_the_length_bound() {
    holds(props::chain_length);
}

#[test]
fn sli_split_equivalence() {
    holds(props::sli_split_equivalence);
}

#[test]
fn synthesized_interpretations_reverify() {
    holds(props::synthesize_then_reverify);
}

#[test]
fn bounded_completions_certify() {
    holds(props::certify_completions);
}
