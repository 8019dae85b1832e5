//! Recursive-descent parser for the workspace DSL. Errors carry the position
//! and the set of expected tokens.

use crate::ast::*;
use crate::lex::{tokenize, Pos, Tok, Token};

#[derive(Debug, Clone, thiserror::Error)]
#[error("{pos}: {message}{}", expectation(.expected))]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

fn expectation(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(" or "))
    }
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

pub fn parse_file(src: &str) -> Result<File, ParseError> {
    let toks = tokenize(src).map_err(|e| ParseError {
        pos: e.pos,
        message: e.message,
        expected: vec![],
    })?;
    let mut p = Parser { toks, pos: 0 };
    let mut items = Vec::new();
    while !p.at_eof() {
        items.push(p.item()?);
    }
    Ok(File { items })
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().tok, Tok::Eof)
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.peek().pos,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            let found = self.peek().tok.clone();
            self.err(format!("found {found}"), &[&tok.to_string()])
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                let pos = self.peek().pos;
                self.advance();
                Ok((s, pos))
            }
            other => self.err(format!("found {other}"), &["identifier"]),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if s == word => {
                self.advance();
                Ok(())
            }
            other => self.err(format!("found {other}"), &[&format!("`{word}`")]),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            ref other => {
                let other = other.clone();
                self.err(format!("found {other}"), &["integer"])
            }
        }
    }

    fn ident_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident()?.0];
        while matches!(self.peek().tok, Tok::Ident(_)) {
            out.push(self.ident()?.0);
        }
        Ok(out)
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let (word, pos) = match self.peek().tok.clone() {
            Tok::Ident(s) => (s, self.peek().pos),
            other => {
                return self.err(
                    format!("found {other}"),
                    &["`scalars`", "`algebra`", "`module`", "`map`", "`tensor`",
                      "`form`", "`novikov`", "`gd`", "`let`", "`check`"],
                )
            }
        };
        match word.as_str() {
            "scalars" => {
                self.advance();
                let names = self.ident_list()?;
                self.expect(Tok::Semi)?;
                Ok(Item::Scalars(names))
            }
            "algebra" => self.algebra_decl(),
            "module" => self.module_decl(),
            "map" => self.map_decl(),
            "tensor" => self.tensor_decl(),
            "form" => self.form_decl(),
            "novikov" => self.novikov_decl(),
            "gd" => self.gd_decl(),
            "let" => self.let_stmt(pos),
            "check" => self.check_stmt(pos),
            other => self.err(
                format!("unknown declaration `{other}`"),
                &["`scalars`", "`algebra`", "`module`", "`map`", "`tensor`",
                  "`form`", "`novikov`", "`gd`", "`let`", "`check`"],
            ),
        }
    }

    fn algebra_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("algebra")?;
        let (name, _) = self.ident()?;
        self.keyword("rank")?;
        let rank = self.integer()? as usize;
        self.keyword("basis")?;
        let basis = self.ident_list()?;
        self.expect(Tok::LBrace)?;
        let mut entries = Vec::new();
        while self.peek().tok != Tok::RBrace {
            let pos = self.peek().pos;
            self.expect(Tok::LBracket)?;
            let (a, _) = self.ident()?;
            self.expect(Tok::Comma)?;
            let (b, _) = self.ident()?;
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Eq)?;
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            entries.push((a, b, e, pos));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Algebra(AlgebraDecl {
            name,
            rank,
            basis,
            entries,
        }))
    }

    fn module_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("module")?;
        let (name, _) = self.ident()?;
        self.keyword("over")?;
        let (over, _) = self.ident()?;
        self.keyword("rank")?;
        let rank = self.integer()? as usize;
        self.keyword("basis")?;
        let basis = self.ident_list()?;
        self.expect(Tok::LBrace)?;
        let mut entries = Vec::new();
        while self.peek().tok != Tok::RBrace {
            let pos = self.peek().pos;
            let (gen, _) = self.ident()?;
            self.expect(Tok::Dot)?;
            let (vec, _) = self.ident()?;
            self.expect(Tok::Eq)?;
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            entries.push((gen, vec, e, pos));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Module(ModuleDecl {
            name,
            over,
            rank,
            basis,
            entries,
        }))
    }

    fn map_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("map")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let (source, _) = self.ident()?;
        self.expect(Tok::Arrow)?;
        let (target, _) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut entries = Vec::new();
        while self.peek().tok != Tok::RBrace {
            let pos = self.peek().pos;
            let (gen, _) = self.ident()?;
            self.expect(Tok::Arrow)?;
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            entries.push((gen, e, pos));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Map(MapDecl {
            name,
            source,
            target,
            entries,
        }))
    }

    fn tensor_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("tensor")?;
        let (name, _) = self.ident()?;
        self.keyword("in")?;
        let (algebra, _) = self.ident()?;
        self.expect(Tok::OTimes)?;
        let (alg2, pos2) = self.ident()?;
        if alg2 != algebra {
            return Err(ParseError {
                pos: pos2,
                message: format!("tensor factors must agree, found `{algebra}` and `{alg2}`"),
                expected: vec![],
            });
        }
        self.expect(Tok::Eq)?;
        let pos = self.peek().pos;
        let e = self.expr()?;
        self.expect(Tok::Semi)?;
        Ok(Item::Tensor(TensorDecl {
            name,
            algebra,
            expr: e,
            pos,
        }))
    }

    fn form_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("form")?;
        let (name, _) = self.ident()?;
        self.keyword("on")?;
        let (on, _) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut entries = Vec::new();
        while self.peek().tok != Tok::RBrace {
            let pos = self.peek().pos;
            self.expect(Tok::LParen)?;
            let (a, _) = self.ident()?;
            self.expect(Tok::Comma)?;
            let (b, _) = self.ident()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Eq)?;
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            entries.push((a, b, e, pos));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Form(FormDecl { name, on, entries }))
    }

    fn novikov_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("novikov")?;
        let (name, _) = self.ident()?;
        self.keyword("dim")?;
        let dim = self.integer()? as usize;
        self.keyword("basis")?;
        let basis = self.ident_list()?;
        self.expect(Tok::LBrace)?;
        let mut products = Vec::new();
        while self.peek().tok != Tok::RBrace {
            let pos = self.peek().pos;
            let (a, _) = self.ident()?;
            self.expect(Tok::Star)?;
            let (b, _) = self.ident()?;
            self.expect(Tok::Eq)?;
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            products.push((a, b, e, pos));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Novikov(NovikovDecl {
            name,
            dim,
            basis,
            products,
        }))
    }

    fn gd_decl(&mut self) -> Result<Item, ParseError> {
        self.keyword("gd")?;
        let (name, _) = self.ident()?;
        self.keyword("dim")?;
        let dim = self.integer()? as usize;
        self.keyword("basis")?;
        let basis = self.ident_list()?;
        self.expect(Tok::LBrace)?;
        let mut products = Vec::new();
        let mut brackets = Vec::new();
        while self.peek().tok != Tok::RBrace {
            let pos = self.peek().pos;
            if self.peek().tok == Tok::LBracket {
                self.advance();
                let (a, _) = self.ident()?;
                self.expect(Tok::Comma)?;
                let (b, _) = self.ident()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Eq)?;
                let e = self.expr()?;
                self.expect(Tok::Semi)?;
                brackets.push((a, b, e, pos));
            } else {
                let (a, _) = self.ident()?;
                self.expect(Tok::Star)?;
                let (b, _) = self.ident()?;
                self.expect(Tok::Eq)?;
                let e = self.expr()?;
                self.expect(Tok::Semi)?;
                products.push((a, b, e, pos));
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Gd(GdDecl {
            name,
            dim,
            basis,
            products,
            brackets,
        }))
    }

    fn let_stmt(&mut self, pos: Pos) -> Result<Item, ParseError> {
        self.keyword("let")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Eq)?;
        let (ctor, _) = self.ident()?;
        let construction = match ctor.as_str() {
            "deform" => {
                let (algebra, _) = self.ident()?;
                self.keyword("by")?;
                let (map, _) = self.ident()?;
                Construction::Deform { algebra, map }
            }
            "semidirect" => {
                let (algebra, _) = self.ident()?;
                let (module, _) = self.ident()?;
                Construction::Semidirect { algebra, module }
            }
            "adjoint" => Construction::Adjoint {
                algebra: self.ident()?.0,
            },
            "coadjoint" => Construction::Coadjoint {
                module: self.ident()?.0,
            },
            "trivial" => {
                let (algebra, _) = self.ident()?;
                let rank = self.integer()? as usize;
                Construction::Trivial { algebra, rank }
            }
            "quadratic" => Construction::Quadratic {
                gd: self.ident()?.0,
            },
            "dual" => Construction::Dual {
                map: self.ident()?.0,
            },
            "oinv" => {
                let (form, _) = self.ident()?;
                self.keyword("on")?;
                let (module, _) = self.ident()?;
                Construction::OInv { form, module }
            }
            "compose" => {
                let (second, _) = self.ident()?;
                let (first, _) = self.ident()?;
                // `compose N T` means N ∘ T: apply T first
                Construction::Compose { first, second }
            }
            "power" => {
                let (map, _) = self.ident()?;
                let k = self.integer()? as u32;
                Construction::Power { map, k }
            }
            "rsharp" => Construction::RSharp {
                tensor: self.ident()?.0,
            },
            "rdeform" => {
                let (tensor, _) = self.ident()?;
                self.keyword("by")?;
                let (map, _) = self.ident()?;
                let k = self.integer()? as u32;
                Construction::RDeform { tensor, map, k }
            }
            "omegan" => {
                let (form, _) = self.ident()?;
                self.keyword("by")?;
                let (map, _) = self.ident()?;
                let k = self.integer()? as u32;
                Construction::OmegaN { form, map, k }
            }
            "rfromform" => Construction::RFromForm {
                form: self.ident()?.0,
            },
            "lift" => {
                let (map, _) = self.ident()?;
                self.keyword("on")?;
                let (algebra, _) = self.ident()?;
                Construction::Lift { map, algebra }
            }
            other => {
                return self.err(
                    format!("unknown constructor `{other}`"),
                    &["`deform`", "`semidirect`", "`adjoint`", "`coadjoint`", "`trivial`",
                      "`quadratic`", "`dual`", "`oinv`", "`compose`", "`power`", "`rsharp`",
                      "`rdeform`", "`omegan`", "`rfromform`", "`lift`"],
                )
            }
        };
        self.expect(Tok::Semi)?;
        Ok(Item::Let {
            name,
            construction,
            pos,
        })
    }

    fn check_stmt(&mut self, pos: Pos) -> Result<Item, ParseError> {
        self.keyword("check")?;
        // kind may contain hyphens: on-structure, sn-structure, rmatrix-nijenhuis
        let (mut kind, _) = self.ident()?;
        while self.peek().tok == Tok::Minus {
            self.advance();
            let (part, _) = self.ident()?;
            kind.push('-');
            kind.push_str(&part);
        }
        let mut args = Vec::new();
        let mut kmax = None;
        loop {
            match self.peek().tok.clone() {
                Tok::Ident(s) => {
                    self.advance();
                    args.push(s);
                }
                Tok::Int(n) => {
                    self.advance();
                    kmax = Some(n as u32);
                }
                _ => break,
            }
        }
        self.expect(Tok::Semi)?;
        Ok(Item::Check(CheckStmt {
            kind,
            args,
            kmax,
            pos,
        }))
    }

    // expression grammar: expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.advance();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := factor (('*'|'/'|OTimes) factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.advance();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    let pos = self.peek().pos;
                    self.advance();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::OTimes => {
                    let pos = self.peek().pos;
                    self.advance();
                    let rhs = self.factor()?;
                    lhs = Expr::Otimes(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // factor := '-' factor | primary ('^' INT)?
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.advance();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.primary()?;
        if self.peek().tok == Tok::Caret {
            let pos = self.peek().pos;
            self.advance();
            let n = self.integer()?;
            if !(0..=u16::MAX as i64).contains(&n) {
                return Err(ParseError {
                    pos,
                    message: format!("exponent {n} out of range"),
                    expected: vec![],
                });
            }
            return Ok(Expr::Pow(Box::new(base), n as u32, pos));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                let pos = self.peek().pos;
                self.advance();
                Ok(Expr::Ident(s, pos))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => self.err(
                format!("found {other}"),
                &["integer", "identifier", "`(`", "`-`"],
            ),
        }
    }
}
