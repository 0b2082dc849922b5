use modcomp::budget::Deadline;
use modcomp::framework::{prove, AnalysisConfig, Bound, CpProblem, ProofNode, Processor, Witness};
use modcomp::interp::OrientMode;
use modcomp::render::{parse_json_str, render_json_string, render_text};
use modcomp::sat::SolverConfig;
use modcomp::synth::{synthesize, Obligation, RuleRef, SearchShape, SynthOutcome};
use modcomp::term::LanguageSpec;
use modcomp::trs_io::parse_trs;

fn corpus(name: &str) -> CpProblem {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.trs"));
    CpProblem::new(parse_trs(&std::fs::read_to_string(path).unwrap()).unwrap(), LanguageSpec::AllTerms)
}

fn cfg() -> AnalysisConfig {
    AnalysisConfig { deterministic: true, ..Default::default() }
}

fn proved(name: &str) -> ProofNode {
    let proof = prove(&corpus(name), &cfg(), true, &Deadline::none()).unwrap();
    proof.recheck().unwrap();
    let (bound, back) = parse_json_str(&render_json_string(&proof)).unwrap();
    assert_eq!(bound, proof.total_bound());
    assert_eq!(back, proof, "{name} survives the JSON round trip");
    proof
}

#[test]
fn luc06_uses_gap_then_match_bounds_then_tmi() {
    let proof = proved("ex16_luc06");
    assert_eq!(proof.total_bound(), Bound::Poly(2));
    let steps = proof.steps();
    let gap = steps.iter().find(|s| s.processor == Processor::Gap).expect("gap step");
    assert!(matches!(&gap.witness, Witness::Interpretation { interp, .. } if interp.is_sli()));
    let m = steps.iter().find(|s| s.processor == Processor::MatchBounds).expect("match-bounds step");
    let Witness::Automaton { rel, .. } = &m.witness else { panic!("automaton witness") };
    assert_eq!(rel.strict[0].to_string(), "g(x,x) -> g(a,b)");
    let tmi = steps.iter().find(|s| s.processor == Processor::Pair && s.cost == Bound::Poly(2)).expect("dimension 2 step");
    assert!(matches!(&tmi.witness, Witness::Interpretation { interp, .. } if interp.dim() == 2));
}

#[test]
fn relative_reversal_is_linear_with_bound_one() {
    let proof = proved("rev_rel");
    assert_eq!(proof.total_bound(), Bound::Poly(1));
    let bounds: Vec<u32> = proof.steps().iter().filter_map(|s| match &s.witness {
        Witness::Automaton { c, .. } => Some(*c),
        _ => None,
    }).collect();
    assert_eq!(bounds, [1]);
}

#[test]
fn ffg_is_linear_after_tightening() {
    assert_eq!(proved("ffg_rel").total_bound(), Bound::Poly(1));
}

#[test]
fn ffg_has_no_strict_sli_at_any_tested_width() {
    let p = corpus("ffg_rel");
    let obligations = [Obligation::Orient(RuleRef::all_strict(&p.rel), OrientMode::Strict), Obligation::Orient(RuleRef::all_weak(&p.rel), OrientMode::Weak)];
    for bits in 1..=6 {
        let out = synthesize(&p.rel, SearchShape::sli().with_bits(bits, bits), &obligations, &SolverConfig::default(), &Deadline::none()).unwrap();
        assert!(matches!(out, SynthOutcome::NoneFound), "{bits} bits");
    }
}

#[test]
fn text_rendering_starts_with_the_verdict() {
    let proof = proved("rev_append");
    assert!(proof.total_bound() <= Bound::Poly(2));
    let text = render_text(&proof);
    assert_eq!(text.lines().next(), Some(proof.total_bound().verdict().as_str()));
}

#[test]
fn ag01_constant_growth_proof_rechecks() {
    let proof = proved("ag01_4_21");
    assert!(proof.is_closed());
}
