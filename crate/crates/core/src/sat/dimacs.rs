//! DIMACS CNF text and SAT-competition solver output.

use super::{Cnf, ExternalSolverError, Lit, SolveResult};

pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            out.push_str(&l.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, ExternalSolverError> {
    let mut cnf = Cnf::new();
    let mut declared: Option<(u32, usize)> = None;
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| malformed(line))?;
                    let c = c.parse().map_err(|_| malformed(line))?;
                    declared = Some((v, c));
                    cnf.num_vars = v;
                }
                _ => return Err(malformed(line)),
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| malformed(line))?;
            if x == 0 {
                cnf.add_clause(std::mem::take(&mut current));
            } else {
                current.push(Lit::from_dimacs(x));
            }
        }
    }
    if !current.is_empty() {
        cnf.add_clause(current);
    }
    match declared {
        Some((v, c)) if cnf.clauses.len() == c && cnf.num_vars == v => Ok(cnf),
        Some(_) => Err(ExternalSolverError::Malformed("header does not match the clauses".into())),
        None => Err(ExternalSolverError::Malformed("missing 'p cnf' header".into())),
    }
}

fn malformed(line: &str) -> ExternalSolverError {
    ExternalSolverError::Malformed(format!("cannot read line '{line}'"))
}

/// Reads "s SATISFIABLE" / "s UNSATISFIABLE" / "s UNKNOWN" and "v" lines.
pub fn parse_solver_output(text: &str, num_vars: u32) -> Result<SolveResult, ExternalSolverError> {
    let mut status: Option<&str> = None;
    let mut model = vec![false; num_vars as usize];
    let mut seen = vec![false; num_vars as usize];
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim());
        } else if let Some(vals) = line.strip_prefix("v ") {
            for tok in vals.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| malformed(line))?;
                if x == 0 {
                    continue;
                }
                let l = Lit::from_dimacs(x);
                let v = l.var() as usize;
                if v >= model.len() {
                    return Err(ExternalSolverError::Malformed(format!("variable {} out of range", v + 1)));
                }
                model[v] = !l.is_negated();
                seen[v] = true;
            }
        }
    }
    match status {
        Some("SATISFIABLE") => {
            if seen.iter().all(|&s| s) {
                Ok(SolveResult::Sat(model))
            } else {
                Err(ExternalSolverError::Malformed("incomplete model".into()))
            }
        }
        Some("UNSATISFIABLE") => Ok(SolveResult::Unsat),
        Some("UNKNOWN") => Ok(SolveResult::Unknown),
        _ => Err(ExternalSolverError::Malformed("missing status line".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let mut cnf = Cnf::new();
        cnf.add_clause(vec![Lit::from_dimacs(1), Lit::from_dimacs(-3)]);
        cnf.add_clause(vec![Lit::from_dimacs(2)]);
        let text = write_dimacs(&cnf);
        assert_eq!(text, "p cnf 3 2\n1 -3 0\n2 0\n");
        assert_eq!(parse_dimacs(&text).unwrap(), cnf);
    }

    #[test]
    fn solver_output() {
        let out = "c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        assert_eq!(parse_solver_output(out, 3).unwrap(), SolveResult::Sat(vec![true, false, true]));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(), SolveResult::Unsat);
        assert!(parse_solver_output("s SATISFIABLE\nv 1 0\n", 2).is_err());
        assert!(parse_solver_output("garbage", 2).is_err());
    }
}
