use crate::kernel::{Agent, Formula};

use super::{ParseError, KEYWORDS};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("`{name}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let mut push = |tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        match c {
            c if c.is_whitespace() => advance(&mut chars),
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    advance(&mut chars);
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    name.push(c);
                    advance(&mut chars);
                }
                push(Tok::Ident(name));
            }
            '-' => {
                advance(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(ParseError::new(start_line, start_col, "stray `-`").expecting("`->`"));
                }
                advance(&mut chars);
                push(Tok::Arrow);
            }
            '<' => {
                advance(&mut chars);
                for want in ['-', '>'] {
                    if chars.peek() != Some(&want) {
                        return Err(ParseError::new(start_line, start_col, "stray `<`").expecting("`<->`"));
                    }
                    advance(&mut chars);
                }
                push(Tok::DoubleArrow);
            }
            _ => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '!' => Tok::Bang,
                    '&' => Tok::Amp,
                    '|' => Tok::Pipe,
                    other => {
                        return Err(ParseError::new(
                            start_line,
                            start_col,
                            format!("unexpected character `{other}`"),
                        ))
                    }
                };
                advance(&mut chars);
                push(tok);
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_second(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(t.line, t.column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self
                .error_here(format!("unexpected {}", self.peek().describe()))
                .expecting(what))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            lhs = lhs.iff(self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(lhs.imp(self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let name = match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => name,
            Tok::RBrace => return Err(self.error_here("empty agent braces").expecting("agent identifier")),
            other => {
                return Err(self
                    .error_here(format!("unexpected {}", other.describe()))
                    .expecting("agent identifier"))
            }
        };
        self.bump();
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Agent::new(name))
    }

    fn until(&mut self) -> Result<(Formula, Formula), ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let hold = self.formula()?;
        match self.peek() {
            Tok::Ident(u) if u == "U" => {
                self.bump();
            }
            other => {
                return Err(self
                    .error_here(format!("unexpected {}", other.describe()))
                    .expecting("`U`"))
            }
        }
        let goal = self.formula()?;
        self.expect(Tok::RBracket, "`]`")?;
        Ok((hold, goal))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let second = self.peek_second().clone();
                match (name.as_str(), second) {
                    ("B" | "P" | "I" | "D", Tok::LBrace) => {
                        self.bump();
                        let agent = self.agent()?;
                        let body = Box::new(self.unary()?);
                        Ok(match name.as_str() {
                            "B" => Formula::B(agent, body),
                            "P" => Formula::P(agent, body),
                            "I" => Formula::I(agent, body),
                            _ => Formula::D(agent, body),
                        })
                    }
                    ("E" | "A", Tok::LBracket) => {
                        self.bump();
                        let (hold, goal) = self.until()?;
                        Ok(if name == "E" { hold.eu(goal) } else { hold.au(goal) })
                    }
                    ("true", _) => {
                        self.bump();
                        Ok(Formula::True)
                    }
                    ("AX" | "EX" | "EF" | "EG" | "AG" | "AF", _) => {
                        self.bump();
                        let body = self.unary()?;
                        Ok(match name.as_str() {
                            "AX" => body.ax(),
                            "EX" => body.ex(),
                            "EF" => body.ef(),
                            "EG" => body.eg(),
                            "AG" => body.ag(),
                            _ => body.af(),
                        })
                    }
                    _ => {
                        self.bump();
                        Ok(Formula::Atom(name))
                    }
                }
            }
            other => Err(self
                .error_here(format!("unexpected {}", other.describe()))
                .expecting("formula")),
        }
    }
}

/// Parses one formula. Grammar, loosest first: `<->` (left-assoc), `->`
/// (right-assoc), `|`, `&`, then prefix operators, `E[_ U _]`, `A[_ U _]`,
/// `true`, atoms and parentheses. `#` starts a comment running to end of line.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser
            .error_here(format!("unexpected {}", parser.peek().describe()))
            .expecting("end of input"));
    }
    Ok(f)
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 0,
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn render_into(f: &Formula, min: u8, out: &mut String) {
    let wrap = precedence(f) < min;
    if wrap {
        out.push('(');
    }
    let binary = |out: &mut String, a: &Formula, op: &str, b: &Formula, left: u8, right: u8| {
        render_into(a, left, out);
        out.push_str(op);
        render_into(b, right, out);
    };
    let prefix = |out: &mut String, head: &str, body: &Formula| {
        out.push_str(head);
        render_into(body, 4, out);
    };
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::True => out.push_str("true"),
        Formula::Not(g) => prefix(out, "!", g),
        Formula::Iff(a, b) => binary(out, a, " <-> ", b, 0, 1),
        Formula::Imp(a, b) => binary(out, a, " -> ", b, 2, 1),
        Formula::Or(a, b) => binary(out, a, " | ", b, 2, 3),
        Formula::And(a, b) => binary(out, a, " & ", b, 3, 4),
        Formula::B(ag, g) => prefix(out, &format!("B{{{ag}}} "), g),
        Formula::P(ag, g) => prefix(out, &format!("P{{{ag}}} "), g),
        Formula::I(ag, g) => prefix(out, &format!("I{{{ag}}} "), g),
        Formula::D(ag, g) => prefix(out, &format!("D{{{ag}}} "), g),
        Formula::AX(g) => prefix(out, "AX ", g),
        Formula::EX(g) => prefix(out, "EX ", g),
        Formula::EF(g) => prefix(out, "EF ", g),
        Formula::EG(g) => prefix(out, "EG ", g),
        Formula::AG(g) => prefix(out, "AG ", g),
        Formula::AF(g) => prefix(out, "AF ", g),
        Formula::EU(a, b) | Formula::AU(a, b) => {
            out.push_str(if matches!(f, Formula::EU(..)) { "E[" } else { "A[" });
            binary(out, a, " U ", b, 0, 0);
            out.push(']');
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Renders with minimal parentheses; [`parse_formula`] inverts it.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_into(f, 0, &mut out);
    out
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_formula(self))
    }
}
