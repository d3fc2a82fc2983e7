use super::{BinOp, Expr, ExprError, Func, NamedConst, Var};

/// Maximum depth of the parsed tree. Deeper inputs are rejected so that
/// evaluation and printing stay within a small stack.
pub const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Number(&'a str),
    Ident(&'a str),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its byte offset.
    fn next(&mut self) -> Result<(Token<'a>, usize), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Token::End, start));
        };
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Token::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'0'..=b'9' => Token::Number(self.number(start)),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let len = bytes[start..]
                    .iter()
                    .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                    .count();
                self.pos += len;
                Token::Ident(&self.src[start..self.pos])
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        Ok((tok, start))
    }

    // digits ("." digits*)? ([eE] [+-]? digits)?
    fn number(&mut self, start: usize) -> &'a str {
        let bytes = self.src.as_bytes();
        let digits = |from: usize| {
            bytes[from..]
                .iter()
                .take_while(|b| b.is_ascii_digit())
                .count()
        };
        let mut end = start + digits(start);
        if bytes.get(end) == Some(&b'.') {
            end += 1;
            end += digits(end);
        }
        if matches!(bytes.get(end), Some(b'e' | b'E')) {
            let mut probe = end + 1;
            if matches!(bytes.get(probe), Some(b'+' | b'-')) {
                probe += 1;
            }
            let n = digits(probe);
            // a bare `e` after a number is the constant, not an exponent
            if n > 0 {
                end = probe + n;
            }
        }
        self.pos = end;
        &self.src[start..end]
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token<'a>,
    offset: usize,
    recursion: usize,
}

type Parsed = (Expr, usize);

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ExprError> {
        let (tok, offset) = self.lexer.next()?;
        self.current = tok;
        self.offset = offset;
        Ok(())
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            offset: self.offset,
            message: message.into(),
        }
    }

    fn node(&self, expr: Expr, depth: usize) -> Result<Parsed, ExprError> {
        if depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok((expr, depth))
    }

    fn expr(&mut self) -> Result<Parsed, ExprError> {
        let (mut lhs, mut depth) = self.term()?;
        while let Token::Op(c @ ('+' | '-')) = self.current {
            self.advance()?;
            let (rhs, rd) = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            (lhs, depth) = self.node(Expr::binary(op, lhs, rhs), depth.max(rd) + 1)?;
        }
        Ok((lhs, depth))
    }

    fn term(&mut self) -> Result<Parsed, ExprError> {
        let (mut lhs, mut depth) = self.factor()?;
        while let Token::Op(c @ ('*' | '/')) = self.current {
            self.advance()?;
            let (rhs, rd) = self.factor()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            (lhs, depth) = self.node(Expr::binary(op, lhs, rhs), depth.max(rd) + 1)?;
        }
        Ok((lhs, depth))
    }

    // every recursive path passes through here
    fn factor(&mut self) -> Result<Parsed, ExprError> {
        self.recursion += 1;
        if self.recursion > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        let result = if self.current == Token::Op('-') {
            self.advance()?;
            self.factor()
                .and_then(|(inner, depth)| self.node(Expr::Neg(Box::new(inner)), depth + 1))
        } else {
            self.power()
        };
        self.recursion -= 1;
        result
    }

    fn power(&mut self) -> Result<Parsed, ExprError> {
        let (base, depth) = self.atom()?;
        if self.current == Token::Op('^') {
            self.advance()?;
            let (exponent, ed) = self.factor()?;
            return self.node(Expr::binary(BinOp::Pow, base, exponent), depth.max(ed) + 1);
        }
        Ok((base, depth))
    }

    fn atom(&mut self) -> Result<Parsed, ExprError> {
        match self.current.clone() {
            Token::Number(text) => {
                let value: f64 = text
                    .parse()
                    .map_err(|_| self.error(format!("malformed number `{text}`")))?;
                self.advance()?;
                Ok((
                    Expr::Number {
                        text: text.to_string(),
                        value,
                    },
                    1,
                ))
            }
            Token::Ident(name) => {
                let at = self.offset;
                let leaf = match name {
                    "x" => Some(Expr::Var(Var::X)),
                    "t" => Some(Expr::Var(Var::T)),
                    "pi" => Some(Expr::Const(NamedConst::Pi)),
                    "e" => Some(Expr::Const(NamedConst::E)),
                    _ => None,
                };
                if let Some(leaf) = leaf {
                    self.advance()?;
                    return Ok((leaf, 1));
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(ExprError::UnknownIdentifier {
                        name: name.to_string(),
                        offset: at,
                    });
                };
                self.advance()?;
                if self.current != Token::LParen {
                    return Err(self.error(format!("expected `(` after `{name}`")));
                }
                self.advance()?;
                let (arg, depth) = self.expr()?;
                self.expect_rparen()?;
                self.node(
                    Expr::Call {
                        func,
                        arg: Box::new(arg),
                    },
                    depth + 1,
                )
            }
            Token::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::RParen => Err(self.error("unexpected `)`")),
            Token::Op(c) => Err(self.error(format!("unexpected operator `{c}`"))),
            Token::End => Err(self.error("unexpected end of input")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        if self.current != Token::RParen {
            return Err(self.error("expected `)`"));
        }
        self.advance()
    }
}

/// Parses an expression. Errors carry the byte offset of the offending token.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut parser = Parser {
        lexer: Lexer { src: text, pos: 0 },
        current: Token::End,
        offset: 0,
        recursion: 0,
    };
    parser.advance()?;
    let (expr, _) = parser.expr()?;
    match parser.current {
        Token::End => Ok(expr),
        Token::RParen => Err(parser.error("unbalanced `)`")),
        _ => Err(parser.error("expected operator or end of input")),
    }
}
