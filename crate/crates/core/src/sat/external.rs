//! Runs an external SAT solver on a DIMACS file.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::Duration;

use thiserror::Error;

use super::{parse_solver_output, write_dimacs, Cnf, SolveResult};
use crate::budget::Deadline;

#[derive(Debug, Error)]
pub enum ExternalSolverError {
    #[error("could not run the external solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("external solver exited with status {0}")]
    Exit(i32),
    #[error("malformed solver output: {0}")]
    Malformed(String),
    #[error("external solver was stopped at the deadline")]
    Timeout,
}

/// Exit codes 0, 10 and 20 are accepted (the competition convention).
pub fn solve_external(cnf: &Cnf, command: &str, deadline: &Deadline) -> Result<SolveResult, ExternalSolverError> {
    let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    file.write_all(write_dimacs(cnf).as_bytes())?;
    file.flush()?;
    let mut parts = command.split_whitespace();
    let program = parts.next().ok_or_else(|| ExternalSolverError::Malformed("empty command".into()))?;
    let mut child = Command::new(program)
        .args(parts)
        .arg(file.path())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if deadline.expired() {
            let _ = child.kill();
            let _ = child.wait();
            return Err(ExternalSolverError::Timeout);
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let output = reader.join().unwrap_or_default();
    match status.code() {
        Some(0 | 10 | 20) => parse_solver_output(&output, cnf.num_vars),
        Some(code) => Err(ExternalSolverError::Exit(code)),
        None => Err(ExternalSolverError::Exit(-1)),
    }
}
