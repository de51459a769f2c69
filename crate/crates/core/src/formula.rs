// Copyright contributors to the qhf project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Boolean predicates: parsing (infix grammar and DIMACS CNF), evaluation,
//! exhaustive model counting, and the balance oracle.
//!
//! Variables are 1-indexed in surface syntax (`x1`, `x2`, ...) and map to
//! 0-indexed assignment bits: bit `j` of an assignment feeds variable `j+1`.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Default cap on the number of variables accepted by exhaustive enumeration.
pub const DEFAULT_VAR_GUARD: usize = 24;

/// A node of a Boolean formula tree. `Var` indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Node {
    Var(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
}

impl Node {
    fn max_var(&self) -> usize {
        match self {
            Node::Var(i) => *i,
            Node::Not(c) => c.max_var(),
            Node::And(l, r) | Node::Or(l, r) => l.max_var().max(r.max_var()),
        }
    }

    fn eval_mask(&self, mask: u64) -> bool {
        match self {
            Node::Var(i) => (mask >> (i - 1)) & 1 == 1,
            Node::Not(c) => !c.eval_mask(mask),
            Node::And(l, r) => l.eval_mask(mask) && r.eval_mask(mask),
            Node::Or(l, r) => l.eval_mask(mask) || r.eval_mask(mask),
        }
    }
}

/// A Boolean predicate over `n_vars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaAst {
    n_vars: usize,
    root: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index 0 at position {pos} (variables are 1-indexed)")]
    ZeroVariable { pos: usize },
    #[error("header declares {declared} variables but x{used} is used")]
    HeaderTooSmall { declared: usize, used: usize },
    #[error("assignment has {got} bits but the formula has {want} variables")]
    AssignmentLength { want: usize, got: usize },
    #[error("{n_vars} variables exceed the enumeration guard of {guard}")]
    GuardExceeded { n_vars: usize, guard: usize },
    #[error("truth table length {len} is not a power of two at least 2")]
    BadTableLength { len: usize },
    #[error("DIMACS line {line}: malformed header")]
    DimacsHeader { line: usize },
    #[error("DIMACS line {line}: literal {lit} exceeds declared variable count {n_vars}")]
    DimacsLiteral {
        line: usize,
        lit: i64,
        n_vars: usize,
    },
    #[error("DIMACS: final clause is missing its terminating 0")]
    DimacsUnterminated,
    #[error("DIMACS: header declares {declared} clauses but {found} were found")]
    DimacsClauseCount { declared: usize, found: usize },
}

impl FormulaAst {
    /// Builds a formula, checking that every variable index lies in `1..=n_vars`.
    pub fn new(n_vars: usize, root: Node) -> Result<Self, FormulaError> {
        let used = root.max_var();
        if n_vars == 0 || used > n_vars {
            return Err(FormulaError::HeaderTooSmall {
                declared: n_vars,
                used,
            });
        }
        Ok(FormulaAst { n_vars, root })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Standard Boolean semantics; bit `j` of the assignment feeds variable `j+1`.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, FormulaError> {
        if assignment.len() != self.n_vars {
            return Err(FormulaError::AssignmentLength {
                want: self.n_vars,
                got: assignment.len(),
            });
        }
        let mut mask = 0u64;
        for (j, &b) in assignment.iter().enumerate() {
            if b {
                mask |= 1 << j;
            }
        }
        Ok(self.root.eval_mask(mask))
    }

    /// Evaluates on a packed assignment; bit `j` of `mask` feeds variable `j+1`.
    pub fn evaluate_mask(&self, mask: u64) -> bool {
        self.root.eval_mask(mask)
    }
}

/// Satisfying-assignment count together with the reduced balance gap
/// `beta = beta_num / 2^beta_den_log2 = (2^n - 2*count_sat) / 2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatSummary {
    pub n_vars: usize,
    pub count_sat: u64,
    pub beta_num: i64,
    pub beta_den_log2: u32,
}

impl SatSummary {
    fn from_count(n_vars: usize, count_sat: u64) -> Self {
        let total = 1i64 << n_vars;
        let mut num = total - 2 * count_sat as i64;
        let mut den = n_vars as u32;
        if num == 0 {
            den = 0;
        } else {
            while num % 2 == 0 && den > 0 {
                num /= 2;
                den -= 1;
            }
        }
        SatSummary {
            n_vars,
            count_sat,
            beta_num: num,
            beta_den_log2: den,
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.beta_num == 0
    }

    /// Renders beta as `p/2^k` in lowest terms, e.g. `1/2`, `-1`, `0`.
    pub fn beta_string(&self) -> String {
        if self.beta_den_log2 == 0 {
            format!("{}", self.beta_num)
        } else {
            format!("{}/{}", self.beta_num, 1u64 << self.beta_den_log2)
        }
    }
}

/// Counts satisfying assignments by exhaustive enumeration (guarded).
pub fn count_sat(formula: &FormulaAst) -> Result<SatSummary, FormulaError> {
    count_sat_with_guard(formula, DEFAULT_VAR_GUARD)
}

pub fn count_sat_with_guard(
    formula: &FormulaAst,
    guard: usize,
) -> Result<SatSummary, FormulaError> {
    let n = formula.n_vars;
    if n > guard {
        return Err(FormulaError::GuardExceeded { n_vars: n, guard });
    }
    let count = (0u64..1 << n)
        .filter(|&mask| formula.root.eval_mask(mask))
        .count() as u64;
    Ok(SatSummary::from_count(n, count))
}

/// True iff the predicate has exactly `2^(n-1)` satisfying assignments.
pub fn is_balanced(formula: &FormulaAst) -> Result<bool, FormulaError> {
    Ok(count_sat(formula)?.is_balanced())
}

pub fn is_balanced_with_guard(formula: &FormulaAst, guard: usize) -> Result<bool, FormulaError> {
    Ok(count_sat_with_guard(formula, guard)?.is_balanced())
}

/// Builds the minterm DNF of a truth table. `bits[x]` is the output on the
/// assignment whose packed mask equals `x`. The all-zero table yields the
/// canonical contradiction `x1 & !x1`.
pub fn from_truth_table(bits: &[bool]) -> Result<FormulaAst, FormulaError> {
    let len = bits.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(FormulaError::BadTableLength { len });
    }
    let n = len.trailing_zeros() as usize;
    let mut minterms: Vec<Node> = Vec::new();
    for (x, &bit) in bits.iter().enumerate() {
        if !bit {
            continue;
        }
        let mut literals = (0..n).map(|j| {
            if (x >> j) & 1 == 1 {
                Node::Var(j + 1)
            } else {
                Node::Not(Box::new(Node::Var(j + 1)))
            }
        });
        let first = literals.next().expect("n >= 1");
        minterms.push(literals.fold(first, |acc, lit| Node::And(Box::new(acc), Box::new(lit))));
    }
    let root = match minterms.len() {
        0 => Node::And(
            Box::new(Node::Var(1)),
            Box::new(Node::Not(Box::new(Node::Var(1)))),
        ),
        _ => {
            let mut it = minterms.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, m| Node::Or(Box::new(acc), Box::new(m)))
        }
    };
    FormulaAst::new(n, root)
}

// ---------------------------------------------------------------------------
// Infix grammar: `!` > `&` > `|`, parentheses, variables x1..xN, optional
// leading `vars N` header. Binary operators associate to the left.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Var(usize),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

struct Lexer<'a> {
    text: &'a str,
    /// 1-based byte position of the next unread character.
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 1 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos - 1..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len() + 1;
    }

    fn read_number(&mut self) -> Option<usize> {
        let rest = self.rest();
        let digits: usize = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return None;
        }
        let value = rest[..digits].parse().ok()?;
        self.pos += digits;
        Some(value)
    }

    /// Consumes a `vars N` header if present; returns the declared count.
    fn read_header(&mut self) -> Result<Option<usize>, FormulaError> {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with("vars") {
            return Ok(None);
        }
        let after = &rest[4..];
        if !after.starts_with(|c: char| c.is_whitespace()) {
            return Ok(None);
        }
        self.pos += 4;
        self.skip_ws();
        let pos = self.pos;
        match self.read_number() {
            Some(n) if n > 0 => Ok(Some(n)),
            _ => Err(FormulaError::Syntax {
                pos,
                msg: "expected a positive variable count after `vars`".into(),
            }),
        }
    }

    fn tokens(&mut self) -> Result<Vec<(usize, Token)>, FormulaError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let pos = self.pos;
            let Some(c) = self.rest().chars().next() else {
                return Ok(out);
            };
            let tok = match c {
                '!' => Token::Not,
                '&' => Token::And,
                '|' => Token::Or,
                '(' => Token::LParen,
                ')' => Token::RParen,
                'x' => {
                    self.pos += 1;
                    match self.read_number() {
                        Some(0) => return Err(FormulaError::ZeroVariable { pos }),
                        Some(i) => {
                            out.push((pos, Token::Var(i)));
                            continue;
                        }
                        None => {
                            return Err(FormulaError::Syntax {
                                pos,
                                msg: "expected a variable index after `x`".into(),
                            })
                        }
                    }
                }
                other => {
                    return Err(FormulaError::Syntax {
                        pos,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            };
            self.pos += 1;
            out.push((pos, tok));
        }
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    index: usize,
    end_pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.index)
            .map(|(p, _)| *p)
            .unwrap_or(self.end_pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.index).map(|(_, t)| t.clone());
        self.index += 1;
        tok
    }

    fn parse_or(&mut self) -> Result<Node, FormulaError> {
        let mut node = self.parse_and()?;
        while self.peek() == Some(&Token::Or) {
            self.advance();
            let rhs = self.parse_and()?;
            node = Node::Or(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn parse_and(&mut self) -> Result<Node, FormulaError> {
        let mut node = self.parse_unary()?;
        while self.peek() == Some(&Token::And) {
            self.advance();
            let rhs = self.parse_unary()?;
            node = Node::And(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn parse_unary(&mut self) -> Result<Node, FormulaError> {
        if self.peek() == Some(&Token::Not) {
            self.advance();
            return Ok(Node::Not(Box::new(self.parse_unary()?)));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Node, FormulaError> {
        let pos = self.pos();
        match self.advance() {
            Some(Token::Var(i)) => Ok(Node::Var(i)),
            Some(Token::LParen) => {
                let inner = self.parse_or()?;
                let pos = self.pos();
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(FormulaError::Syntax {
                        pos,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            other => Err(FormulaError::Syntax {
                pos,
                msg: match other {
                    Some(_) => "expected a variable, `!`, or `(`".into(),
                    None => "unexpected end of input".into(),
                },
            }),
        }
    }
}

/// Parses the infix grammar. `n_vars` is the maximum index seen unless a
/// larger count is declared with a leading `vars N` header.
pub fn parse_formula(text: &str) -> Result<FormulaAst, FormulaError> {
    let mut lexer = Lexer::new(text);
    let declared = lexer.read_header()?;
    let tokens = lexer.tokens()?;
    let end_pos = text.len() + 1;
    let mut parser = Parser {
        tokens,
        index: 0,
        end_pos,
    };
    let root = parser.parse_or()?;
    if parser.index != parser.tokens.len() {
        return Err(FormulaError::Syntax {
            pos: parser.pos(),
            msg: "trailing input after formula".into(),
        });
    }
    let used = root.max_var();
    let n_vars = match declared {
        Some(n) if n < used => return Err(FormulaError::HeaderTooSmall { declared: n, used }),
        Some(n) => n,
        None => used,
    };
    FormulaAst::new(n_vars, root)
}

// ---------------------------------------------------------------------------
// DIMACS CNF
// ---------------------------------------------------------------------------

/// Parses standard DIMACS CNF (`p cnf n m` header, clauses of signed integers
/// terminated by 0, `c` comment lines). An empty clause list yields the
/// constant-true formula `x1 | !x1`; an empty clause contributes the
/// constant-false clause `x1 & !x1`.
pub fn parse_dimacs(text: &str) -> Result<FormulaAst, FormulaError> {
    let mut header: Option<(usize, usize)> = None;
    let mut header_line = 0usize;
    let mut literals: Vec<(usize, i64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(FormulaError::DimacsHeader { line: line_no });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(FormulaError::DimacsHeader { line: line_no });
            }
            let n: usize = fields[2]
                .parse()
                .map_err(|_| FormulaError::DimacsHeader { line: line_no })?;
            let m: usize = fields[3]
                .parse()
                .map_err(|_| FormulaError::DimacsHeader { line: line_no })?;
            if n == 0 {
                return Err(FormulaError::DimacsHeader { line: line_no });
            }
            header = Some((n, m));
            header_line = line_no;
            continue;
        }
        if header.is_none() {
            return Err(FormulaError::DimacsHeader { line: line_no });
        }
        for field in trimmed.split_whitespace() {
            let lit: i64 = field
                .parse()
                .map_err(|_| FormulaError::DimacsHeader { line: line_no })?;
            literals.push((line_no, lit));
        }
    }
    let Some((n_vars, n_clauses)) = header else {
        return Err(FormulaError::DimacsHeader {
            line: header_line.max(1),
        });
    };

    let contradiction = || {
        Node::And(
            Box::new(Node::Var(1)),
            Box::new(Node::Not(Box::new(Node::Var(1)))),
        )
    };

    let mut clauses: Vec<Node> = Vec::new();
    let mut current: Vec<Node> = Vec::new();
    let mut terminated = true;
    for (line, lit) in literals {
        if lit == 0 {
            let clause = match current.len() {
                0 => contradiction(),
                _ => {
                    let mut it = current.drain(..);
                    let first = it.next().unwrap();
                    it.fold(first, |acc, l| Node::Or(Box::new(acc), Box::new(l)))
                }
            };
            clauses.push(clause);
            terminated = true;
            continue;
        }
        terminated = false;
        let index = lit.unsigned_abs() as usize;
        if index > n_vars {
            return Err(FormulaError::DimacsLiteral { line, lit, n_vars });
        }
        let var = Node::Var(index);
        current.push(if lit < 0 {
            Node::Not(Box::new(var))
        } else {
            var
        });
    }
    if !terminated {
        return Err(FormulaError::DimacsUnterminated);
    }
    if clauses.len() != n_clauses {
        return Err(FormulaError::DimacsClauseCount {
            declared: n_clauses,
            found: clauses.len(),
        });
    }
    let root = match clauses.len() {
        0 => Node::Or(
            Box::new(Node::Var(1)),
            Box::new(Node::Not(Box::new(Node::Var(1)))),
        ),
        _ => {
            let mut it = clauses.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, c| Node::And(Box::new(acc), Box::new(c)))
        }
    };
    FormulaAst::new(n_vars, root)
}

// ---------------------------------------------------------------------------
// Canonical printer. `parse_formula(ast.to_string()) == ast`.
// ---------------------------------------------------------------------------

fn fmt_node(node: &Node, parent_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match node {
        Node::Or(..) => 1,
        Node::And(..) => 2,
        Node::Not(..) => 3,
        Node::Var(..) => 4,
    };
    let parens = prec < parent_prec;
    if parens {
        write!(f, "(")?;
    }
    match node {
        Node::Var(i) => write!(f, "x{i}")?,
        Node::Not(c) => {
            write!(f, "!")?;
            fmt_node(c, 3, f)?;
        }
        Node::And(l, r) => {
            fmt_node(l, 2, f)?;
            write!(f, " & ")?;
            // Left-associative: a right child at equal precedence needs parens.
            fmt_node(r, 3, f)?;
        }
        Node::Or(l, r) => {
            fmt_node(l, 1, f)?;
            write!(f, " | ")?;
            fmt_node(r, 2, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(self, 0, f)
    }
}

impl fmt::Display for FormulaAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n_vars > self.root.max_var() {
            write!(f, "vars {} ", self.n_vars)?;
        }
        fmt_node(&self.root, 0, f)
    }
}
