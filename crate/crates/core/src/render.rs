//! Text and JSON renderings of proof trees; the JSON form parses back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::framework::{Bound, CpProblem, ProofNode, Processor, Step, Witness};
use crate::interp::{LinearInterpretation, MatrixInterpretation, SymbolInterp};
use crate::matchbounds::{CompletionMode, EnrichedSymbol, Lhs, State, TreeAutomaton};
use crate::semiring::{Arctic, Matrix, Nat, Value, Vector};
use crate::term::{LanguageSpec, RelativeTrs, Rule, Symbol};
use crate::trs_io::parse_rule;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed proof document: {0}")]
pub struct RenderError(pub String);

fn bad<T>(msg: impl Into<String>) -> Result<T, RenderError> {
    Err(RenderError(msg.into()))
}

fn set_text(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Verdict line, then one line per node indented by depth. A child line
/// starts with the cost and label of the step that produced it; witness
/// lines follow their node behind `| `.
pub fn render_text(proof: &ProofNode) -> String {
    let mut out = proof.total_bound().verdict();
    out.push('\n');
    text_node(proof, 0, None, &mut out);
    out
}

fn text_node(n: &ProofNode, depth: usize, edge: Option<String>, out: &mut String) {
    let pad = "  ".repeat(depth);
    match edge {
        Some(e) => writeln!(out, "{pad}{e} {}", n.problem),
        None => writeln!(out, "{pad}{}", n.problem),
    }
    .expect("string write");
    let Some(step) = &n.step else {
        if !n.problem.is_solved() {
            writeln!(out, "{pad}  | open").expect("string write");
        }
        return;
    };
    for line in witness_lines(step) {
        writeln!(out, "{pad}  | {line}").expect("string write");
    }
    let edge = edge_label(step);
    for c in &step.children {
        text_node(c, depth + 1, Some(edge.clone()), out);
    }
}

fn edge_label(s: &Step) -> String {
    let mut label = format!("{} [{} {}", s.cost, s.processor.name(), s.label());
    if !s.shifted.is_empty() {
        write!(label, ", shifts {}", set_text(&s.shifted)).expect("string write");
    }
    if let Some(note) = &s.note {
        write!(label, "; {note}").expect("string write");
    }
    label.push(']');
    label
}

fn witness_lines(s: &Step) -> Vec<String> {
    match &s.witness {
        Witness::Interpretation { interp, .. } => interp.to_string().split("; ").map(str::to_string).collect(),
        Witness::Automaton { c, mode, automaton, .. } => {
            let mut v = vec![format!("{} completion, bound {c}, final states {:?}", mode.name(), automaton.finals())];
            v.extend(automaton.lines());
            v
        }
        Witness::Split { first, second } => vec![format!("parts {} and {}", set_text(first), set_text(second))],
    }
}

/// Structured document; see `docs/proof-format.md` for the layout.
pub fn render_json(proof: &ProofNode) -> Json {
    let vars: BTreeSet<String> = all_problems(proof)
        .iter()
        .flat_map(|p| p.rel.all_rules().flat_map(|r| r.lhs().vars()).map(|v| v.name().to_string()).collect::<Vec<_>>())
        .collect();
    json!({
        "version": FORMAT_VERSION,
        "verdict": proof.total_bound().verdict(),
        "language": language_name(proof.problem.lang),
        "variables": vars,
        "signature": signature_json(&proof.problem.rel.signature),
        "root": node_json(proof),
    })
}

pub fn render_json_string(proof: &ProofNode) -> String {
    serde_json::to_string_pretty(&render_json(proof)).expect("json values serialize")
}

fn all_problems(n: &ProofNode) -> Vec<&CpProblem> {
    let mut v = vec![&n.problem];
    if let Some(s) = &n.step {
        for c in &s.children {
            v.extend(all_problems(c));
        }
    }
    v
}

fn language_name(l: LanguageSpec) -> &'static str {
    match l {
        LanguageSpec::AllTerms => "all",
        LanguageSpec::ConstructorBased => "constructor-based",
    }
}

fn signature_json(sig: &BTreeSet<Symbol>) -> Json {
    sig.iter().map(|f| format!("{}/{}", f.name(), f.arity())).collect()
}

fn rules_json(rules: &[Rule]) -> Json {
    rules.iter().map(ToString::to_string).collect()
}

fn node_json(n: &ProofNode) -> Json {
    let mut m = Map::new();
    m.insert("strict".into(), rules_json(&n.problem.rel.strict));
    m.insert("weak".into(), rules_json(&n.problem.rel.weak));
    m.insert("bound".into(), json!(n.total_bound().to_string()));
    m.insert("step".into(), n.step.as_ref().map_or(Json::Null, step_json));
    Json::Object(m)
}

fn step_json(s: &Step) -> Json {
    json!({
        "processor": s.processor.name(),
        "label": s.label(),
        "cost": s.cost.to_string(),
        "shifted": s.shifted,
        "note": s.note,
        "witness": witness_json(&s.witness),
        "children": s.children.iter().map(node_json).collect::<Vec<_>>(),
    })
}

fn entry_json<V: Value>(v: &V) -> Json {
    if v.is_minus_inf() {
        return json!("-inf");
    }
    let n = v.as_natural().expect("finite entry");
    match u64::try_from(n) {
        Ok(small) => json!(small),
        Err(_) => json!(n.to_string()),
    }
}

fn matrix_json<V: Value>(m: &Matrix<V>) -> Json {
    m.to_rows().iter().map(|row| row.iter().map(entry_json).collect::<Vec<_>>()).collect()
}

fn interp_json<V: Value>(domain: &str, m: &MatrixInterpretation<V>) -> Json {
    let symbols: Vec<Json> = m
        .symbols
        .iter()
        .map(|(f, si)| {
            json!({
                "symbol": format!("{}/{}", f.name(), f.arity()),
                "matrices": si.args.iter().map(matrix_json).collect::<Vec<_>>(),
                "constant": si.constant.0.iter().map(entry_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "type": "interpretation", "domain": domain, "dimension": m.dim, "triangular": m.triangular, "symbols": symbols })
}

fn witness_json(w: &Witness) -> Json {
    match w {
        Witness::Interpretation { label, interp } => {
            let mut j = match interp {
                LinearInterpretation::Natural(m) => interp_json("natural", m),
                LinearInterpretation::Arctic(m) => interp_json("arctic", m),
            };
            j["label"] = json!(label);
            j
        }
        Witness::Automaton { c, mode, rel, automaton } => json!({
            "type": "automaton",
            "bound": c,
            "mode": mode.name(),
            "strict": rules_json(&rel.strict),
            "weak": rules_json(&rel.weak),
            "signature": signature_json(&rel.signature),
            "states": automaton.num_states(),
            "final": automaton.finals(),
            "transitions": automaton.transitions().map(|(l, q)| format!("{l} -> {q}")).collect::<Vec<_>>(),
            "epsilons": automaton.epsilons().iter().map(|(p, q)| format!("{p} -> {q}")).collect::<Vec<_>>(),
        }),
        Witness::Split { first, second } => json!({ "type": "split", "first": first, "second": second }),
    }
}

/// Inverse of [`render_json`]; returns the stated verdict and the tree.
pub fn parse_json(doc: &Json) -> Result<(Bound, ProofNode), RenderError> {
    let verdict = Bound::parse_verdict(str_field(doc, "verdict")?).ok_or_else(|| RenderError("bad verdict".into()))?;
    let lang = match str_field(doc, "language")? {
        "all" => LanguageSpec::AllTerms,
        "constructor-based" => LanguageSpec::ConstructorBased,
        other => return bad(format!("unknown language {other}")),
    };
    let vars: BTreeSet<String> = array_field(doc, "variables")?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(|| RenderError("variable names are strings".into())))
        .collect::<Result<_, _>>()?;
    let ctx = Ctx { vars, signature: parse_signature(field(doc, "signature")?)?, lang };
    let root = ctx.node(field(doc, "root")?)?;
    Ok((verdict, root))
}

pub fn parse_json_str(text: &str) -> Result<(Bound, ProofNode), RenderError> {
    let doc: Json = serde_json::from_str(text).map_err(|e| RenderError(e.to_string()))?;
    parse_json(&doc)
}

fn field<'a>(j: &'a Json, key: &str) -> Result<&'a Json, RenderError> {
    j.get(key).ok_or_else(|| RenderError(format!("missing field {key}")))
}

fn str_field<'a>(j: &'a Json, key: &str) -> Result<&'a str, RenderError> {
    field(j, key)?.as_str().ok_or_else(|| RenderError(format!("{key} is not a string")))
}

fn array_field<'a>(j: &'a Json, key: &str) -> Result<&'a Vec<Json>, RenderError> {
    field(j, key)?.as_array().ok_or_else(|| RenderError(format!("{key} is not an array")))
}

fn u64_field(j: &Json, key: &str) -> Result<u64, RenderError> {
    field(j, key)?.as_u64().ok_or_else(|| RenderError(format!("{key} is not a natural number")))
}

fn index_set(j: &Json, key: &str) -> Result<BTreeSet<usize>, RenderError> {
    array_field(j, key)?.iter().map(|v| v.as_u64().map(|i| i as usize).ok_or_else(|| RenderError(format!("{key} holds indices")))).collect()
}

fn parse_symbol(text: &str) -> Result<Symbol, RenderError> {
    let (name, arity) = text.rsplit_once('/').ok_or_else(|| RenderError(format!("symbol {text} lacks an arity")))?;
    let arity = arity.parse().map_err(|_| RenderError(format!("bad arity in {text}")))?;
    Ok(Symbol::new(name, arity))
}

fn parse_signature(j: &Json) -> Result<BTreeSet<Symbol>, RenderError> {
    j.as_array()
        .ok_or_else(|| RenderError("signature is an array".into()))?
        .iter()
        .map(|s| parse_symbol(s.as_str().ok_or_else(|| RenderError("symbols are strings".into()))?))
        .collect()
}

fn parse_entry<V: Value>(j: &Json, finite: impl Fn(Nat) -> V, minus_inf: Option<V>) -> Result<V, RenderError> {
    let n = match j {
        Json::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(|| RenderError(format!("bad entry {n}")))?,
        Json::String(s) if s == "-inf" => return minus_inf.ok_or_else(|| RenderError("-inf in a natural matrix".into())),
        Json::String(s) => s.parse().map_err(|_| RenderError(format!("bad entry {s}")))?,
        other => return bad(format!("bad entry {other}")),
    };
    Ok(finite(n))
}

struct Ctx {
    vars: BTreeSet<String>,
    signature: BTreeSet<Symbol>,
    lang: LanguageSpec,
}

impl Ctx {
    fn rules(&self, j: &Json, key: &str) -> Result<Vec<Rule>, RenderError> {
        array_field(j, key)?
            .iter()
            .map(|r| {
                let text = r.as_str().ok_or_else(|| RenderError("rules are strings".into()))?;
                parse_rule(text, &self.vars).map(|(rule, _)| rule).map_err(|e| RenderError(format!("rule {text}: {e}")))
            })
            .collect()
    }

    fn node(&self, j: &Json) -> Result<ProofNode, RenderError> {
        let rel = RelativeTrs { strict: self.rules(j, "strict")?, weak: self.rules(j, "weak")?, signature: self.signature.clone() };
        let problem = CpProblem::new(rel, self.lang);
        let step = match field(j, "step")? {
            Json::Null => None,
            s => Some(self.step(s)?),
        };
        Ok(ProofNode { problem, step })
    }

    fn step(&self, j: &Json) -> Result<Step, RenderError> {
        let name = str_field(j, "processor")?;
        let processor = Processor::from_name(name).ok_or_else(|| RenderError(format!("unknown processor {name}")))?;
        let cost = Bound::parse(str_field(j, "cost")?).ok_or_else(|| RenderError("bad cost".into()))?;
        let note = match field(j, "note")? {
            Json::Null => None,
            n => Some(n.as_str().ok_or_else(|| RenderError("note is a string".into()))?.to_string()),
        };
        let children = array_field(j, "children")?.iter().map(|c| self.node(c)).collect::<Result<_, _>>()?;
        Ok(Step { processor, witness: self.witness(field(j, "witness")?)?, cost, shifted: index_set(j, "shifted")?, note, children })
    }

    fn witness(&self, j: &Json) -> Result<Witness, RenderError> {
        match str_field(j, "type")? {
            "interpretation" => {
                let label = str_field(j, "label")?.to_string();
                let interp = match str_field(j, "domain")? {
                    "natural" => LinearInterpretation::Natural(parse_interp(j, |n| n, None)?),
                    "arctic" => LinearInterpretation::Arctic(parse_interp(j, Arctic::Finite, Some(Arctic::MinusInf))?),
                    other => return bad(format!("unknown domain {other}")),
                };
                Ok(Witness::Interpretation { label, interp })
            }
            "automaton" => {
                let mode = match str_field(j, "mode")? {
                    "linear" => CompletionMode::Linear,
                    "raise" => CompletionMode::Raise,
                    other => return bad(format!("unknown completion mode {other}")),
                };
                let rel = RelativeTrs { strict: self.rules(j, "strict")?, weak: self.rules(j, "weak")?, signature: parse_signature(field(j, "signature")?)? };
                let states = u64_field(j, "states")? as u32;
                let finals = state_list(array_field(j, "final")?)?;
                let transitions = array_field(j, "transitions")?.iter().map(parse_transition).collect::<Result<Vec<_>, _>>()?;
                let epsilons = array_field(j, "epsilons")?.iter().map(parse_epsilon).collect::<Result<Vec<_>, _>>()?;
                let automaton = TreeAutomaton::from_parts(states, finals, transitions, epsilons);
                Ok(Witness::Automaton { c: u64_field(j, "bound")? as u32, mode, rel, automaton })
            }
            "split" => Ok(Witness::Split { first: index_set(j, "first")?, second: index_set(j, "second")? }),
            other => bad(format!("unknown witness type {other}")),
        }
    }
}

fn parse_interp<V: Value>(j: &Json, finite: impl Fn(Nat) -> V + Copy, minus_inf: Option<V>) -> Result<MatrixInterpretation<V>, RenderError> {
    let dim = u64_field(j, "dimension")? as usize;
    let triangular = field(j, "triangular")?.as_bool().ok_or_else(|| RenderError("triangular is a boolean".into()))?;
    let mut symbols = BTreeMap::new();
    for s in array_field(j, "symbols")? {
        let f = parse_symbol(str_field(s, "symbol")?)?;
        let args = array_field(s, "matrices")?
            .iter()
            .map(|m| {
                let rows = m
                    .as_array()
                    .ok_or_else(|| RenderError("matrix is an array of rows".into()))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| RenderError("row is an array".into()))?
                            .iter()
                            .map(|e| parse_entry(e, finite, minus_inf.clone()))
                            .collect::<Result<Vec<V>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_rows(rows))
            })
            .collect::<Result<Vec<_>, RenderError>>()?;
        let constant = array_field(s, "constant")?.iter().map(|e| parse_entry(e, finite, minus_inf.clone())).collect::<Result<Vec<V>, _>>()?;
        symbols.insert(f, SymbolInterp { args, constant: Vector(constant) });
    }
    Ok(MatrixInterpretation { dim, triangular, symbols })
}

fn state_list(v: &[Json]) -> Result<Vec<State>, RenderError> {
    v.iter().map(|q| q.as_u64().map(|q| q as State).ok_or_else(|| RenderError("states are naturals".into()))).collect()
}

fn parse_state(s: &str) -> Result<State, RenderError> {
    s.trim().parse().map_err(|_| RenderError(format!("bad state {s}")))
}

/// `f_c(q1,...,qn) -> q`.
fn parse_transition(j: &Json) -> Result<(Lhs, State), RenderError> {
    let text = j.as_str().ok_or_else(|| RenderError("transitions are strings".into()))?;
    let (lhs, q) = text.rsplit_once(" -> ").ok_or_else(|| RenderError(format!("bad transition {text}")))?;
    let (head, args) = match lhs.split_once('(') {
        Some((head, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| RenderError(format!("bad transition {text}")))?;
            (head, inner.split(',').map(parse_state).collect::<Result<Vec<_>, _>>()?)
        }
        None => (lhs, Vec::new()),
    };
    let (name, height) = head.rsplit_once('_').ok_or_else(|| RenderError(format!("transition {text} lacks a height")))?;
    let height = height.parse().map_err(|_| RenderError(format!("bad height in {text}")))?;
    let symbol = EnrichedSymbol::new(Symbol::new(name, args.len()), height);
    Ok((Lhs { symbol, args }, parse_state(q)?))
}

fn parse_epsilon(j: &Json) -> Result<(State, State), RenderError> {
    let text = j.as_str().ok_or_else(|| RenderError("epsilons are strings".into()))?;
    let (p, q) = text.split_once(" -> ").ok_or_else(|| RenderError(format!("bad epsilon {text}")))?;
    Ok((parse_state(p)?, parse_state(q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Deadline;
    use crate::framework::{analyze, AnalysisConfig};
    use crate::trs_io::parse_trs;

    fn proof(text: &str) -> ProofNode {
        let p = CpProblem::new(parse_trs(text).unwrap(), LanguageSpec::AllTerms);
        analyze(&p, &AnalysisConfig { deterministic: true, ..Default::default() }, &Deadline::none()).unwrap()
    }

    #[test]
    fn json_round_trip_with_automaton_and_arctic() {
        for text in [
            "(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(nil,y) ->= y rev'(cons(x,y),z) ->= rev'(y,cons(x,z)))",
            "(VAR x)(RULES f(f(x)) -> f(g(f(x))) f(x) ->= x)",
        ] {
            let p = proof(text);
            assert!(p.is_closed());
            let s = render_json_string(&p);
            let (verdict, back) = parse_json_str(&s).unwrap();
            assert_eq!(verdict, p.total_bound());
            assert_eq!(back, p);
            assert_eq!(render_json_string(&back), s);
        }
    }

    #[test]
    fn text_layout() {
        let p = proof("(VAR x y z)(RULES rev(x) -> rev'(x,nil) rev'(nil,y) ->= y rev'(cons(x,y),z) ->= rev'(y,cons(x,z)))");
        let text = render_text(&p);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "YES(?,O(n))");
        assert!(lines[1].starts_with('{'));
        assert!(lines.iter().any(|l| l.starts_with("  O(n) [match-bounds match-bound 1, shifts {1}]")));
        assert!(lines.iter().any(|l| l.trim_start() == "| 1 -> 0"));
    }

    #[test]
    fn malformed_documents() {
        assert!(parse_json_str("{}").is_err());
        assert!(parse_transition(&json!("f(0) -> 1")).is_err());
        assert_eq!(parse_transition(&json!("a_b_2(0,1) -> 3")).unwrap().0.symbol, EnrichedSymbol::new(Symbol::new("a_b", 2), 2));
        assert!(parse_entry::<Nat>(&json!("-inf"), |n| n, None).is_err());
    }
}
