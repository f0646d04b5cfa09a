//! 3-CNF formulas and truth assignments.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("literal 0 is not a variable")]
    ZeroLiteral,
    #[error("variable {var} is outside 1..={num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("clause {clause} has {width} literals; exactly 3 are required")]
    WrongClauseWidth { clause: usize, width: usize },
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("assignment covers {got} variables, expected {expected}")]
    IncompleteAssignment { expected: usize, got: usize },
    #[error("assignment may only contain T and F, found `{0}`")]
    InvalidAssignment(char),
}

/// `x_k` or `x̄_k`, with `k` counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// DIMACS convention: `k` is `x_k`, `-k` is `x̄_k`.
    pub fn from_dimacs(n: i64) -> Result<Self, CnfError> {
        if n == 0 {
            return Err(CnfError::ZeroLiteral);
        }
        Ok(Literal {
            var: n.unsigned_abs() as usize,
            negated: n < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn holds(self, tau: &Assignment) -> bool {
        tau.value(self.var) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

pub type Clause = [Literal; 3];

/// Conjunction of clauses with exactly three literals each. Literals may
/// repeat within a clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for lit in clauses.iter().flatten() {
            if lit.var == 0 || lit.var > num_vars {
                return Err(CnfError::VariableOutOfRange {
                    var: lit.var,
                    num_vars,
                });
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Builds from DIMACS-style signed integers.
    pub fn from_ints(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self, CnfError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                Ok([
                    Literal::from_dimacs(c[0])?,
                    Literal::from_dimacs(c[1])?,
                    Literal::from_dimacs(c[2])?,
                ])
            })
            .collect::<Result<Vec<_>, CnfError>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_satisfied_by(&self, tau: &Assignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|lit| lit.holds(tau)))
    }

    /// Every satisfying assignment, by enumeration. Exponential; meant for
    /// small formulas.
    pub fn satisfying_assignments(&self) -> Vec<Assignment> {
        assert!(self.num_vars < 32, "enumeration is for small formulas");
        (0u32..1 << self.num_vars)
            .map(|bits| Assignment((0..self.num_vars).map(|k| bits >> k & 1 == 1).collect()))
            .filter(|tau| self.is_satisfied_by(tau))
            .collect()
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.satisfying_assignments().is_empty()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!(
                "{} {} {} 0\n",
                c[0].to_dimacs(),
                c[1].to_dimacs(),
                c[2].to_dimacs()
            ));
        }
        out
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("({} ∨ {} ∨ {})", c[0], c[1], c[2]))
            .collect();
        write!(f, "{}", clauses.join(" ∧ "))
    }
}

/// Truth values for `x_1, …, x_m`, written as a string such as `"TFT"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    /// Value of `x_k`, `k` counted from 1.
    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Assignment {
    type Err = CnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                'T' | 't' | '1' => Ok(true),
                'F' | 'f' | '0' => Ok(false),
                other => Err(CnfError::InvalidAssignment(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "T" } else { "F" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satisfying_assignments_are_enumerated() {
        // (x1 ∨ x1 ∨ x1) ∧ (¬x1 ∨ x2 ∨ x2)
        let f = CnfFormula::from_ints(2, &[[1, 1, 1], [-1, 2, 2]]).unwrap();
        let sats = f.satisfying_assignments();
        assert_eq!(sats, vec!["TT".parse().unwrap()]);
        let unsat = CnfFormula::from_ints(1, &[[1, 1, 1], [-1, -1, -1]]).unwrap();
        assert!(!unsat.is_satisfiable());
    }

    #[test]
    fn assignment_text() {
        let a: Assignment = "TFt".parse().unwrap();
        assert_eq!(a.to_string(), "TFT");
        assert!(a.value(1) && !a.value(2));
        assert_eq!(
            "TX".parse::<Assignment>(),
            Err(CnfError::InvalidAssignment('X'))
        );
    }

    #[test]
    fn variables_are_range_checked() {
        assert!(matches!(
            CnfFormula::from_ints(2, &[[1, 2, 3]]),
            Err(CnfError::VariableOutOfRange {
                var: 3,
                num_vars: 2
            })
        ));
        assert_eq!(
            CnfFormula::from_ints(2, &[[1, 0, 2]]),
            Err(CnfError::ZeroLiteral)
        );
    }

    #[test]
    fn display() {
        let f = CnfFormula::from_ints(3, &[[-1, 2, 3]]).unwrap();
        assert_eq!(f.to_string(), "(¬x1 ∨ x2 ∨ x3)");
    }
}
