use super::{BinaryOp, Branch, CmpOp, Comparison, Expr, Guard, PiecewiseFn, UnaryOp};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, bool),
    Var(usize),
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Cmp(CmpOp),
    And,
    Or,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok: Tok| out.push(Token { tok, line: tl, column: tc });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            let mut integral = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integral = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .map_err(|_| syntax(tl, tc, format!("bad number `{text}`")))?;
            col += i - start;
            push(&mut out, Tok::Num(v, integral));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.strip_prefix('x') {
                Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
                    let idx: usize = d
                        .parse()
                        .map_err(|_| syntax(tl, tc, format!("bad variable `{word}`")))?;
                    if idx == 0 {
                        return Err(syntax(tl, tc, "variables are numbered from x1"));
                    }
                    Tok::Var(idx)
                }
                _ => Tok::Ident(word),
            };
            push(&mut out, tok);
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('<', Some('=')) => (Tok::Cmp(CmpOp::Le), 2),
            ('>', Some('=')) => (Tok::Cmp(CmpOp::Ge), 2),
            ('=', Some('=')) => (Tok::Cmp(CmpOp::Eq), 2),
            ('&', Some('&')) => (Tok::And, 2),
            ('|', Some('|')) => (Tok::Or, 2),
            ('<', _) => (Tok::Cmp(CmpOp::Lt), 1),
            ('>', _) => (Tok::Cmp(CmpOp::Gt), 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            (';', _) => (Tok::Semi, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            _ => return Err(syntax(tl, tc, format!("unexpected character `{c}`"))),
        };
        push(&mut out, tok);
        i += width;
        col += width;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    fn top(&mut self) -> Result<Vec<Branch>> {
        let branches = if matches!(self.peek(), Tok::Ident(w) if w == "piecewise") {
            self.bump();
            self.expect(Tok::LBrace, "`{`")?;
            let mut branches = vec![self.branch()?];
            while *self.peek() == Tok::Semi {
                self.bump();
                if *self.peek() == Tok::RBrace {
                    break;
                }
                branches.push(self.branch()?);
            }
            self.expect(Tok::RBrace, "`;` or `}`")?;
            branches
        } else {
            vec![Branch {
                guard: None,
                body: self.expr()?,
            }]
        };
        if *self.peek() != Tok::End {
            return Err(self.err(format!("unexpected {}", describe(self.peek()))));
        }
        Ok(branches)
    }

    fn branch(&mut self) -> Result<Branch> {
        let guard = self.guard()?;
        self.expect(Tok::Colon, "`:` after guard")?;
        let body = self.expr()?;
        Ok(Branch {
            guard: Some(guard),
            body,
        })
    }

    fn guard(&mut self) -> Result<Guard> {
        let mut disjuncts = vec![self.conj()?];
        while *self.peek() == Tok::Or {
            self.bump();
            disjuncts.push(self.conj()?);
        }
        Ok(Guard { disjuncts })
    }

    fn conj(&mut self) -> Result<Vec<Comparison>> {
        let mut out = vec![self.cmp()?];
        while *self.peek() == Tok::And {
            self.bump();
            out.push(self.cmp()?);
        }
        Ok(out)
    }

    fn cmp(&mut self) -> Result<Comparison> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Cmp(op) => *op,
            other => return Err(self.err(format!("expected comparison, found {}", describe(other)))),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Comparison { lhs, op, rhs })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() != Tok::Minus {
            return self.power();
        }
        self.bump();
        if let Tok::Num(v, _) = *self.peek() {
            if *self.peek_at(1) != Tok::Caret {
                self.bump();
                return Ok(Expr::Const(-v));
            }
        }
        Ok(Expr::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match *self.peek() {
            Tok::Num(v, true) if v <= u32::MAX as f64 => {
                self.bump();
                Ok(Expr::Pow(Box::new(base), v as u32))
            }
            _ => Err(self.err("exponent must be a non-negative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v, _) => Ok(Expr::Const(v)),
            Tok::Var(i) => Ok(Expr::Var(i)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let unary = match name.as_str() {
                    "abs" => Some(UnaryOp::Abs),
                    "sqrt" => Some(UnaryOp::Sqrt),
                    "floor" => Some(UnaryOp::Floor),
                    "sign" => Some(UnaryOp::Sign),
                    "min" | "max" => None,
                    _ => return Err(syntax(t.line, t.column, format!("unknown function `{name}`"))),
                };
                self.expect(Tok::LParen, "`(` after function name")?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                match unary {
                    Some(op) if args.len() == 1 => Ok(Expr::Unary(op, Box::new(args.pop().unwrap()))),
                    Some(_) => Err(syntax(
                        t.line,
                        t.column,
                        format!("`{name}` takes one argument, got {}", args.len()),
                    )),
                    None if name == "min" => Ok(Expr::Min(args)),
                    None => Ok(Expr::Max(args)),
                }
            }
            other => Err(syntax(t.line, t.column, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v, _) => format!("number {v}"),
        Tok::Var(i) => format!("variable x{i}"),
        Tok::Ident(w) => format!("`{w}`"),
        Tok::End => "end of input".into(),
        Tok::Cmp(op) => format!("`{op}`"),
        other => {
            let s = match other {
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::Comma => ",",
                Tok::Colon => ":",
                Tok::Semi => ";",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Star => "*",
                Tok::Slash => "/",
                Tok::Caret => "^",
                Tok::And => "&&",
                Tok::Or => "||",
                _ => "?",
            };
            format!("`{s}`")
        }
    }
}

fn parse_branches(src: &str) -> Result<Vec<Branch>> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.top()
}

/// Parses a function, taking its arity from the largest variable index
/// (at least 1).
pub fn parse(src: &str) -> Result<PiecewiseFn> {
    let branches = parse_branches(src)?;
    let used = branches
        .iter()
        .map(|b| {
            b.body
                .max_var()
                .max(b.guard.as_ref().map_or(0, |g| g.max_var()))
        })
        .max()
        .unwrap_or(0);
    PiecewiseFn::new(used.max(1), branches)
}

/// Parses a function of exactly `arity` variables; referencing `x{arity+1}`
/// or beyond is an error.
pub fn parse_with_arity(src: &str, arity: usize) -> Result<PiecewiseFn> {
    PiecewiseFn::new(arity, parse_branches(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_position() {
        match parse("x1 +\n  * 2") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse("x1 $ 2") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 4)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x1^2.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("piecewise{ x1 : 1 }"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("foo(x1)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("sqrt(x1, 2)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_variable_is_arity_error() {
        assert!(matches!(
            parse_with_arity("x1 + x3", 2),
            Err(Error::Arity { index: 3, arity: 2 })
        ));
        assert_eq!(parse("x1 + x3").unwrap().arity(), 3);
    }

    #[test]
    fn negative_literal_folding() {
        let f = parse("-2").unwrap();
        assert_eq!(f.branches()[0].body, Expr::Const(-2.0));
        let f = parse("-2^2").unwrap();
        assert!(matches!(f.branches()[0].body, Expr::Unary(UnaryOp::Neg, _)));
    }

    #[test]
    fn trailing_semicolon_allowed() {
        let f = parse("piecewise{ x1 < 0 : 0 ; x1 >= 0 : x1 ; }").unwrap();
        assert_eq!(f.branches().len(), 2);
    }
}
