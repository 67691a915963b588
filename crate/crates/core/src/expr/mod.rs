//! Piecewise semialgebraic scalar functions of `n` real variables.
//!
//! A [`PiecewiseFn`] is an ordered list of `(guard, body)` branches. The
//! first branch whose guard holds decides the value; when none holds the
//! point is outside the declared domain and evaluation fails. `floor` is
//! admitted alongside the semialgebraic operations so that subanalytic
//! counterexamples built from the fractional part can be expressed.

mod parse;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use parse::{parse, parse_with_arity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
    Floor,
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Expr {
    Const(f64),
    /// 1-based variable index.
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

/// Disjunction of conjunctions of polynomial comparisons.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Guard {
    pub disjuncts: Vec<Vec<Comparison>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Branch {
    /// `None` for an unconditional body (a plain expression).
    pub guard: Option<Guard>,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiecewiseFn {
    arity: usize,
    branches: Vec<Branch>,
}

/// A point where more than one branch guard holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuardOverlap {
    pub point: Vec<f64>,
    pub branches: Vec<usize>,
}

impl Expr {
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => *i,
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.max_var(),
            Expr::Binary(_, l, r) => l.max_var().max(r.max_var()),
            Expr::Min(args) | Expr::Max(args) => args.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let eval_err = |message: &str| Error::Eval {
            point: x.to_vec(),
            message: message.to_string(),
        };
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => x[*i - 1],
            Expr::Unary(op, e) => {
                let v = e.eval(x)?;
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Abs => v.abs(),
                    UnaryOp::Sqrt => {
                        if v < 0.0 {
                            return Err(eval_err("sqrt of a negative number"));
                        }
                        v.sqrt()
                    }
                    UnaryOp::Floor => v.floor(),
                    UnaryOp::Sign => {
                        if v > 0.0 {
                            1.0
                        } else if v < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(eval_err("division by zero"));
                        }
                        a / b
                    }
                }
            }
            // 0^0 = 1, which the fractional-part counterexample relies on.
            Expr::Pow(base, n) => base.eval(x)?.powi(*n as i32),
            Expr::Min(args) => fold_args(args, x, f64::min)?,
            Expr::Max(args) => fold_args(args, x, f64::max)?,
        })
    }
}

fn fold_args(args: &[Expr], x: &[f64], f: fn(f64, f64) -> f64) -> Result<f64> {
    let mut acc = args[0].eval(x)?;
    for a in &args[1..] {
        acc = f(acc, a.eval(x)?);
    }
    Ok(acc)
}

impl Comparison {
    pub fn holds(&self, x: &[f64]) -> Result<bool> {
        let a = self.lhs.eval(x)?;
        let b = self.rhs.eval(x)?;
        Ok(match self.op {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        })
    }
}

impl Guard {
    pub fn holds(&self, x: &[f64]) -> Result<bool> {
        for conj in &self.disjuncts {
            let mut all = true;
            for cmp in conj {
                if !cmp.holds(x)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn max_var(&self) -> usize {
        self.disjuncts
            .iter()
            .flatten()
            .map(|c| c.lhs.max_var().max(c.rhs.max_var()))
            .max()
            .unwrap_or(0)
    }
}

impl PiecewiseFn {
    pub fn new(arity: usize, branches: Vec<Branch>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Invalid("arity must be positive".into()));
        }
        if branches.is_empty() {
            return Err(Error::Invalid("a function needs at least one branch".into()));
        }
        for b in &branches {
            let used = b
                .body
                .max_var()
                .max(b.guard.as_ref().map_or(0, Guard::max_var));
            if used > arity {
                return Err(Error::Arity { index: used, arity });
            }
        }
        Ok(Self { arity, branches })
    }

    pub fn from_expr(expr: Expr, arity: usize) -> Result<Self> {
        Self::new(arity, vec![Branch { guard: None, body: expr }])
    }

    pub fn constant(value: f64, arity: usize) -> Self {
        Self {
            arity: arity.max(1),
            branches: vec![Branch {
                guard: None,
                body: Expr::Const(value),
            }],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_piecewise(&self) -> bool {
        !(self.branches.len() == 1 && self.branches[0].guard.is_none())
    }

    /// Index of the first branch whose guard holds, if any.
    pub fn active_branch(&self, x: &[f64]) -> Result<Option<usize>> {
        self.check_dim(x)?;
        for (i, b) in self.branches.iter().enumerate() {
            match &b.guard {
                None => return Ok(Some(i)),
                Some(g) if g.holds(x)? => return Ok(Some(i)),
                Some(_) => {}
            }
        }
        Ok(None)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self.active_branch(x)? {
            Some(i) => self.branches[i].body.eval(x),
            None => Err(Error::Domain { point: x.to_vec() }),
        }
    }

    /// Like [`eval`](Self::eval) but maps "no guard holds" to `None`.
    pub fn eval_opt(&self, x: &[f64]) -> Result<Option<f64>> {
        match self.active_branch(x)? {
            Some(i) => self.branches[i].body.eval(x).map(Some),
            None => Ok(None),
        }
    }

    /// Reports sample points where more than one guard holds.
    pub fn lint_overlaps(&self, points: &[Vec<f64>]) -> Result<Vec<GuardOverlap>> {
        let mut out = Vec::new();
        for p in points {
            self.check_dim(p)?;
            let mut hits = Vec::new();
            for (i, b) in self.branches.iter().enumerate() {
                let holds = match &b.guard {
                    None => true,
                    Some(g) => g.holds(p)?,
                };
                if holds {
                    hits.push(i);
                }
            }
            if hits.len() > 1 {
                out.push(GuardOverlap {
                    point: p.clone(),
                    branches: hits,
                });
            }
        }
        Ok(out)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: x.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for PiecewiseFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

// Printing emits a form that re-parses into the identical tree: every binary
// node is parenthesised, negative constants print as `(-c)` and negated
// literals as `(-(c))` so that the parser's literal folding is undone.

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.is_sign_negative() {
                    write!(f, "(-{})", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Unary(UnaryOp::Neg, e) => match e.as_ref() {
                Expr::Const(_) => write!(f, "(-({e}))"),
                _ => write!(f, "(-{e})"),
            },
            Expr::Unary(op, e) => {
                let name = match op {
                    UnaryOp::Abs => "abs",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Floor => "floor",
                    UnaryOp::Sign => "sign",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}({e})")
            }
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinaryOp::Add => "+",
                    BinaryOp::Sub => "-",
                    BinaryOp::Mul => "*",
                    BinaryOp::Div => "/",
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Pow(base, n) => match base.as_ref() {
                Expr::Pow(..) => write!(f, "({base})^{n}"),
                _ => write!(f, "{base}^{n}"),
            },
            Expr::Min(args) | Expr::Max(args) => {
                let name = if matches!(self, Expr::Min(_)) { "min" } else { "max" };
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "==",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        })
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, conj) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " || ")?;
            }
            for (j, c) in conj.iter().enumerate() {
                if j > 0 {
                    write!(f, " && ")?;
                }
                write!(f, "{} {} {}", c.lhs, c.op, c.rhs)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_piecewise() {
            return write!(f, "{}", self.branches[0].body);
        }
        write!(f, "piecewise{{ ")?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            match &b.guard {
                Some(g) => write!(f, "{g} : {}", b.body)?,
                // An unguarded branch inside a piecewise block prints as an
                // always-true comparison.
                None => write!(f, "0 == 0 : {}", b.body)?,
            }
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(src: &str) -> PiecewiseFn {
        src.parse().unwrap()
    }

    #[test]
    fn fractional_part() {
        let g = f("x1 - floor(x1)");
        assert_eq!(g.eval(&[2.25]).unwrap(), 0.25);
        assert_eq!(g.eval(&[-0.25]).unwrap(), 0.75);
    }

    #[test]
    fn constant_zero_takes_declared_arity() {
        let z = parse_with_arity("0", 3).unwrap();
        assert_eq!(z.arity(), 3);
        assert_eq!(z.eval(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(f("0").arity(), 1);
    }

    #[test]
    fn ex3_8_g() {
        let g = f("piecewise{ x1 < 1 : 1/(1-x1) ; x1 == 1 : 1 }");
        assert_eq!(g.eval(&[0.0]).unwrap(), 1.0);
        assert_eq!(g.eval(&[0.5]).unwrap(), 2.0);
        assert_eq!(g.eval(&[1.0]).unwrap(), 1.0);
        assert!(matches!(g.eval(&[2.0]), Err(Error::Domain { .. })));
    }

    #[test]
    fn ex3_9_g_at_zero() {
        let g = f("piecewise{ x1 > 0 && x1 <= 1 : 0 ; x1 == 0 : 1 }");
        assert_eq!(g.eval(&[0.0]).unwrap(), 1.0);
        assert_eq!(g.eval(&[0.3]).unwrap(), 0.0);
    }

    #[test]
    fn ex4_9_f_at_three_and_a_half() {
        let f = f("piecewise{ x1 < 1 : (x1 - floor(x1))^0 ; x1 < 2 : (x1 - floor(x1))^1 ; \
                   x1 < 3 : (x1 - floor(x1))^2 ; x1 < 4 : (x1 - floor(x1))^3 }");
        assert_eq!(f.eval(&[3.5]).unwrap(), 0.125);
        assert_eq!(f.eval(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn evaluation_errors() {
        assert!(matches!(f("sqrt(x1)").eval(&[-1.0]), Err(Error::Eval { .. })));
        assert!(matches!(f("1/x1").eval(&[0.0]), Err(Error::Eval { .. })));
        assert!(matches!(
            f("x1 + x2").eval(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn first_matching_branch_wins() {
        let g = f("piecewise{ x1 <= 1 : 10 ; x1 >= 0 : 20 }");
        assert_eq!(g.eval(&[0.5]).unwrap(), 10.0);
        assert_eq!(g.eval(&[2.0]).unwrap(), 20.0);
        let overlaps = g
            .lint_overlaps(&[vec![-1.0], vec![0.5], vec![2.0]])
            .unwrap();
        assert_eq!(overlaps.len(), 1);
        assert_eq!(overlaps[0].branches, vec![0, 1]);
    }

    #[test]
    fn functions_and_precedence() {
        assert_eq!(f("-x1^2").eval(&[3.0]).unwrap(), -9.0);
        assert_eq!(f("(-3)^2").eval(&[0.0]).unwrap(), 9.0);
        assert_eq!(f("min(x1, 2, -1)").eval(&[0.0]).unwrap(), -1.0);
        assert_eq!(f("max(abs(x1), sign(x1))").eval(&[-4.0]).unwrap(), 4.0);
        assert_eq!(f("2 - 3 - 4").eval(&[0.0]).unwrap(), -5.0);
        assert_eq!(f("8 / 4 / 2").eval(&[0.0]).unwrap(), 1.0);
        assert_eq!(f("1 + 2 * 3^2").eval(&[0.0]).unwrap(), 19.0);
    }

    #[test]
    fn print_reparses_identically() {
        for src in [
            "x1 - floor(x1)",
            "piecewise{ x1 < 1 : 1/(1-x1) ; x1 == 1 : 1 }",
            "-x1^2 + (-2)^3 - -(4)",
            "piecewise{ x1 > 0 && x2 < 1 || x1 == 0 : sqrt(x1 + x2) ; x1 <= 0 : 1e-8 }",
            "min(x1, max(x2, 0.1), -0.5) * sign(x2)",
        ] {
            let a = f(src);
            let b = f(&a.to_string());
            assert_eq!(a, b, "{src} -> {a}");
        }
    }
}
