//! DIMACS CNF input restricted to clauses of width three.

use super::cnf::{CnfError, CnfFormula, Literal};

/// Parses `p cnf <vars> <clauses>` followed by zero-terminated clauses.
/// Lines starting with `c` are comments; a line `%` ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let err = |line: usize, message: &str| CnfError::Dimacs {
        line,
        message: message.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(line_no, "expected `p cnf <variables> <clauses>`"));
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| err(line_no, "invalid variable count"))?;
            let count = parts[3]
                .parse()
                .map_err(|_| err(line_no, "invalid clause count"))?;
            header = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(line_no, "clause before the problem line"));
        };
        for token in line.split_whitespace() {
            let n: i64 = token
                .parse()
                .map_err(|_| err(line_no, &format!("invalid literal `{token}`")))?;
            if n == 0 {
                if current.len() != 3 {
                    return Err(CnfError::WrongClauseWidth {
                        clause: clauses.len() + 1,
                        width: current.len(),
                    });
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                let lit = Literal::from_dimacs(n)?;
                if lit.var > num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        var: lit.var,
                        num_vars,
                    });
                }
                current.push(lit);
            }
        }
    }

    let Some((num_vars, count)) = header else {
        return Err(err(last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(err(
            last_line,
            &format!(
                "problem line announces {count} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    CnfFormula::new(num_vars, clauses)
}
