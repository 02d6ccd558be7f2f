//! Recursive-descent parser over the token stream.

use thiserror::Error;

use crate::ast::*;
use crate::lexer::{Keyword, SepKind, Span, Token, TokenKind};
use crate::value::{BinOp, MathOp, Tag, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: while parsing {construct}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub construct: &'static str,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// Nesting depth of loop bodies and switch arms, for GTFO placement.
    breakable: usize,
}

fn binop_of(k: Keyword) -> Option<BinOp> {
    Some(match k {
        Keyword::SumOf => BinOp::Sum,
        Keyword::DiffOf => BinOp::Diff,
        Keyword::ProduktOf => BinOp::Produkt,
        Keyword::QuoshuntOf => BinOp::Quoshunt,
        Keyword::ModOf => BinOp::Mod,
        Keyword::BothSaem => BinOp::BothSaem,
        Keyword::Diffrint => BinOp::Diffrint,
        Keyword::Bigger => BinOp::Bigger,
        Keyword::Smallr => BinOp::Smallr,
        _ => return None,
    })
}

fn mathop_of(k: Keyword) -> Option<MathOp> {
    Some(match k {
        Keyword::SquarOf => MathOp::Squar,
        Keyword::UnsquarOf => MathOp::Unsquar,
        Keyword::FlipOf => MathOp::Flip,
        _ => return None,
    })
}

fn scalar_type_of(k: Keyword) -> Option<Tag> {
    Some(match k {
        Keyword::Noob => Tag::Noob,
        Keyword::Troof => Tag::Troof,
        Keyword::Numbr => Tag::Numbr,
        Keyword::Numbar => Tag::Numbar,
        Keyword::Yarn => Tag::Yarn,
        _ => return None,
    })
}

fn element_type_of(k: Keyword) -> Option<Tag> {
    Some(match k {
        Keyword::Troofs | Keyword::Troof => Tag::Troof,
        Keyword::Numbrs | Keyword::Numbr => Tag::Numbr,
        Keyword::Numbars | Keyword::Numbar => Tag::Numbar,
        Keyword::Yarns | Keyword::Yarn => Tag::Yarn,
        _ => return None,
    })
}

fn starts_expression(t: &Token) -> bool {
    use Keyword::*;
    match &t.kind {
        TokenKind::Ident(_) | TokenKind::Numbr(_) | TokenKind::Numbar(_) | TokenKind::Yarn(_) => {
            true
        }
        TokenKind::Keyword(k) => {
            binop_of(*k).is_some()
                || mathop_of(*k).is_some()
                || matches!(
                    k,
                    Win | Fail | Noob | Me | MahFrenz | Whatevr | Whatevar | Maek | Ur | Mah | Srs
                )
        }
        TokenKind::Separator(_) | TokenKind::Index => false,
    }
}

fn describe(t: Option<&Token>) -> String {
    match t {
        None => "end of input".into(),
        Some(t) => match &t.kind {
            TokenKind::Separator(SepKind::Newline) => "end of line".into(),
            TokenKind::Separator(SepKind::Comma) => "`,`".into(),
            _ => format!("`{}`", t.text),
        },
    }
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + n)
    }

    fn peek_kw(&self) -> Option<Keyword> {
        match self.peek()?.kind {
            TokenKind::Keyword(k) => Some(k),
            _ => None,
        }
    }

    fn at_kw(&self, k: Keyword) -> bool {
        self.peek_kw() == Some(k)
    }

    fn here(&self) -> Span {
        self.peek()
            .or_else(|| self.tokens.last())
            .map(|t| t.span)
            .unwrap_or(Span::new(1, 1))
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, construct: &'static str, message: impl Into<String>) -> ParseError {
        ParseError {
            span: self.here(),
            construct,
            message: message.into(),
        }
    }

    fn unexpected(&self, construct: &'static str, wanted: &str) -> ParseError {
        self.error(
            construct,
            format!("expected {wanted}, found {}", describe(self.peek())),
        )
    }

    fn at_separator(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::Separator(_),
                ..
            })
        )
    }

    fn skip_separators(&mut self) {
        while self.at_separator() {
            self.pos += 1;
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::Separator(SepKind::Newline),
                ..
            })
        ) {
            self.pos += 1;
        }
    }

    fn expect_kw(&mut self, k: Keyword, construct: &'static str) -> PResult<&'t Token> {
        if self.at_kw(k) {
            Ok(self.advance().unwrap())
        } else {
            Err(self.unexpected(construct, &format!("`{}`", k.spelling())))
        }
    }

    fn expect_ident(&mut self, construct: &'static str) -> PResult<String> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(name),
                ..
            }) => {
                self.pos += 1;
                Ok(name.clone())
            }
            _ => Err(self.unexpected(construct, "an identifier")),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        self.skip_separators();
        self.expect_kw(Keyword::Hai, "program")?;
        let version = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Numbar(v)) => {
                self.pos += 1;
                Some(*v)
            }
            Some(TokenKind::Numbr(v)) => {
                self.pos += 1;
                Some(*v as f64)
            }
            _ => None,
        };
        self.end_of_statement("program")?;
        let statements = self.block(&[Keyword::Kthxbye], "program", "`KTHXBYE`")?;
        self.expect_kw(Keyword::Kthxbye, "program")?;
        self.skip_separators();
        if self.peek().is_some() {
            return Err(self.error("program", "statements after `KTHXBYE`"));
        }
        Ok(Program {
            version,
            statements,
        })
    }

    fn end_of_statement(&mut self, construct: &'static str) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(Token {
                kind: TokenKind::Separator(_),
                ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.unexpected(construct, "end of statement")),
        }
    }

    /// Statements up to (not including) one of `until`.
    fn block(
        &mut self,
        until: &[Keyword],
        construct: &'static str,
        closer: &str,
    ) -> PResult<Block> {
        let open = self.here();
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            match self.peek_kw() {
                _ if self.peek().is_none() => {
                    return Err(ParseError {
                        span: open,
                        construct,
                        message: format!("unclosed block, expected {closer} before end of input"),
                    });
                }
                Some(k) if until.contains(&k) => return Ok(out),
                Some(
                    k @ (Keyword::Kthxbye
                    | Keyword::Oic
                    | Keyword::ImOuttaYr
                    | Keyword::Ttyl
                    | Keyword::NoWai
                    | Keyword::Omg
                    | Keyword::Omgwtf),
                ) => {
                    return Err(ParseError {
                        span: open,
                        construct,
                        message: format!(
                            "unclosed block, expected {closer} before `{}`",
                            k.spelling()
                        ),
                    });
                }
                _ => {}
            }
            out.push(self.statement()?);
            match self.peek_kw() {
                Some(k) if until.contains(&k) => {}
                _ => self.end_of_statement("statement")?,
            }
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let span = self.here();
        let kind = match self.peek_kw() {
            Some(Keyword::IHasA) | Some(Keyword::WeHasA) => StmtKind::Declare(self.declaration()?),
            Some(Keyword::Visible) => {
                self.pos += 1;
                let mut args = vec![self.expression()?];
                while self.peek().is_some_and(starts_expression) {
                    args.push(self.expression()?);
                }
                StmtKind::Visible(args)
            }
            Some(Keyword::Gimmeh) => {
                self.pos += 1;
                StmtKind::Gimmeh(self.reference("GIMMEH")?)
            }
            Some(Keyword::CanHas) => {
                self.pos += 1;
                let lib = self.expect_ident("CAN HAS")?;
                self.expect_kw(Keyword::Query, "CAN HAS")?;
                StmtKind::CanHas(lib)
            }
            Some(Keyword::Gtfo) => {
                self.pos += 1;
                if self.breakable == 0 {
                    return Err(ParseError {
                        span,
                        construct: "GTFO",
                        message: "GTFO outside of a loop or switch".into(),
                    });
                }
                StmtKind::Break
            }
            Some(Keyword::Hugz) => {
                self.pos += 1;
                StmtKind::Barrier
            }
            Some(k @ (Keyword::ImSrslyMesinWif | Keyword::ImMesinWif)) => {
                self.pos += 1;
                let target = self.reference("lock statement")?;
                if self.take_orly() {
                    let (then, otherwise) = self.if_body()?;
                    StmtKind::TryLockIf {
                        target,
                        blocking: k == Keyword::ImSrslyMesinWif,
                        then,
                        otherwise,
                    }
                } else {
                    StmtKind::LockAcquire(target)
                }
            }
            Some(Keyword::DunMesinWif) => {
                self.pos += 1;
                StmtKind::LockRelease(self.reference("DUN MESIN WIF")?)
            }
            Some(Keyword::TxtMahBff) => self.predication()?,
            Some(Keyword::ImInYr) => StmtKind::Loop(self.loop_statement()?),
            _ if self.peek().is_some_and(starts_expression) => self.expression_statement()?,
            _ => return Err(self.unexpected("statement", "a statement")),
        };
        Ok(Statement { kind, span })
    }

    /// Consume `[sep] O RLY?` if it comes next.
    fn take_orly(&mut self) -> bool {
        self.take_question(Keyword::ORly)
    }

    fn take_question(&mut self, k: Keyword) -> bool {
        if self.at_kw(k) {
            self.pos += 1;
            return true;
        }
        if self.at_separator()
            && matches!(self.peek_at(1), Some(Token { kind: TokenKind::Keyword(q), .. }) if *q == k)
        {
            self.pos += 2;
            return true;
        }
        false
    }

    fn if_body(&mut self) -> PResult<(Block, Option<Block>)> {
        self.skip_separators();
        // `O RLY?` straight into `NO WAI` leaves the YA RLY branch empty
        let then = if self.at_kw(Keyword::NoWai) {
            Vec::new()
        } else {
            self.expect_kw(Keyword::YaRly, "O RLY?")?;
            self.block(&[Keyword::NoWai, Keyword::Oic], "O RLY?", "`OIC`")?
        };
        let otherwise = if self.at_kw(Keyword::NoWai) {
            self.pos += 1;
            Some(self.block(&[Keyword::Oic], "O RLY?", "`OIC`")?)
        } else {
            None
        };
        self.expect_kw(Keyword::Oic, "O RLY?")?;
        Ok((then, otherwise))
    }

    fn switch_body(&mut self, subject: Expression) -> PResult<StmtKind> {
        let mut arms = Vec::new();
        let mut default = None;
        self.breakable += 1;
        loop {
            self.skip_separators();
            match self.peek_kw() {
                Some(Keyword::Omg) => {
                    self.pos += 1;
                    let lit = self.switch_literal()?;
                    let body = self.block(
                        &[Keyword::Omg, Keyword::Omgwtf, Keyword::Oic],
                        "WTF?",
                        "`OIC`",
                    )?;
                    arms.push((lit, body));
                }
                Some(Keyword::Omgwtf) => {
                    self.pos += 1;
                    default = Some(self.block(&[Keyword::Oic], "WTF?", "`OIC`")?);
                    break;
                }
                Some(Keyword::Oic) => break,
                _ => {
                    self.breakable -= 1;
                    return Err(self.unexpected("WTF?", "`OMG`, `OMGWTF` or `OIC`"));
                }
            }
        }
        self.breakable -= 1;
        self.expect_kw(Keyword::Oic, "WTF?")?;
        Ok(StmtKind::Switch {
            subject,
            arms,
            default,
        })
    }

    fn switch_literal(&mut self) -> PResult<Value> {
        let v = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Numbr(n)) => Value::Numbr(*n),
            Some(TokenKind::Numbar(x)) => Value::Numbar(*x),
            Some(TokenKind::Yarn(s)) => Value::Yarn(s.clone()),
            Some(TokenKind::Keyword(Keyword::Win)) => Value::Troof(true),
            Some(TokenKind::Keyword(Keyword::Fail)) => Value::Troof(false),
            _ => return Err(self.unexpected("OMG", "a literal value")),
        };
        self.pos += 1;
        Ok(v)
    }

    fn expression_statement(&mut self) -> PResult<StmtKind> {
        let starts_ref = matches!(
            self.peek().map(|t| &t.kind),
            Some(TokenKind::Ident(_))
                | Some(TokenKind::Keyword(
                    Keyword::Ur | Keyword::Mah | Keyword::Srs
                ))
        );
        let expr = if starts_ref {
            let target = self.reference("statement")?;
            match self.peek_kw() {
                Some(Keyword::R) => {
                    self.pos += 1;
                    let expr = self.expression()?;
                    return Ok(StmtKind::Assign { target, expr });
                }
                Some(Keyword::IsNowA) => {
                    self.pos += 1;
                    let to = self.cast_type("IS NOW A")?;
                    return Ok(StmtKind::Cast { target, to });
                }
                _ => Expression::Ref(target),
            }
        } else {
            self.expression()?
        };
        if self.take_orly() {
            let (then, otherwise) = self.if_body()?;
            return Ok(StmtKind::If {
                cond: expr,
                then,
                otherwise,
            });
        }
        if self.take_question(Keyword::Wtf) {
            return self.switch_body(expr);
        }
        Err(self.unexpected(
            "statement",
            "`R`, `IS NOW A`, `O RLY?` or `WTF?` after expression",
        ))
    }

    fn predication(&mut self) -> PResult<StmtKind> {
        let start = self.here();
        self.pos += 1;
        let pe = self.expression()?;
        if self.at_kw(Keyword::AnStuff) {
            self.pos += 1;
            let body = self.block(&[Keyword::Ttyl], "TXT MAH BFF AN STUFF", "`TTYL`")?;
            self.expect_kw(Keyword::Ttyl, "TXT MAH BFF AN STUFF")?;
            return Ok(StmtKind::PredicatedBlock { pe, body });
        }
        match self.peek() {
            Some(Token {
                kind: TokenKind::Separator(SepKind::Comma),
                ..
            }) => self.pos += 1,
            _ => {
                return Err(self.unexpected(
                    "TXT MAH BFF",
                    "`,` and a statement on the same line, or `AN STUFF`",
                ))
            }
        }
        if self.at_kw(Keyword::AnStuff) || self.peek().is_none() {
            return Err(ParseError {
                span: start,
                construct: "TXT MAH BFF",
                message: "missing predicated statement".into(),
            });
        }
        let inner = self.statement()?;
        Ok(StmtKind::Predicated {
            pe,
            inner: Box::new(inner),
        })
    }

    fn loop_statement(&mut self) -> PResult<Loop> {
        self.pos += 1;
        let label = self.expect_ident("IM IN YR")?;
        let update = match self.peek_kw() {
            Some(Keyword::UppinYr) => {
                self.pos += 1;
                Some((LoopDirection::Uppin, self.expect_ident("UPPIN YR")?))
            }
            Some(Keyword::NerfinYr) => {
                self.pos += 1;
                Some((LoopDirection::Nerfin, self.expect_ident("NERFIN YR")?))
            }
            _ => None,
        };
        let condition = match self.peek_kw() {
            Some(Keyword::Til) => {
                self.pos += 1;
                Some(LoopCondition::Til(self.expression()?))
            }
            Some(Keyword::Wile) => {
                self.pos += 1;
                Some(LoopCondition::Wile(self.expression()?))
            }
            _ => None,
        };
        self.breakable += 1;
        let body = self.block(&[Keyword::ImOuttaYr], "IM IN YR", "`IM OUTTA YR`");
        self.breakable -= 1;
        let body = body?;
        self.expect_kw(Keyword::ImOuttaYr, "IM IN YR")?;
        let close_span = self.here();
        let closing = self.expect_ident("IM OUTTA YR")?;
        if closing != label {
            return Err(ParseError {
                span: close_span,
                construct: "IM OUTTA YR",
                message: format!("loop `{label}` closed with label `{closing}`"),
            });
        }
        Ok(Loop {
            label,
            update,
            condition,
            body,
        })
    }

    fn declaration(&mut self) -> PResult<Declare> {
        const C: &str = "declaration";
        let decl_span = self.here();
        let scope = if self.at_kw(Keyword::WeHasA) {
            Scope::Shared
        } else {
            Scope::Local
        };
        self.pos += 1;
        let name = self.expect_ident(C)?;
        let mut decl = Declare {
            scope,
            name,
            declared_type: None,
            strict: false,
            size_expr: None,
            init_expr: None,
            shared_lock: false,
        };
        let mut first = true;
        loop {
            if !first {
                if !self.at_kw(Keyword::An) {
                    break;
                }
                self.pos += 1;
            }
            let clause_span = self.here();
            let dup = |what: &str| ParseError {
                span: clause_span,
                construct: C,
                message: format!("duplicate {what} clause"),
            };
            match self.peek_kw() {
                Some(Keyword::Itz) => {
                    self.pos += 1;
                    if decl.init_expr.is_some() {
                        return Err(dup("ITZ"));
                    }
                    decl.init_expr = Some(self.expression()?);
                }
                Some(k @ (Keyword::ItzA | Keyword::ItzSrslyA | Keyword::ItzSrslyLotzA)) => {
                    self.pos += 1;
                    if decl.declared_type.is_some() {
                        return Err(dup("type"));
                    }
                    let kw = self.peek_kw();
                    let ty = if k == Keyword::ItzSrslyLotzA {
                        kw.and_then(element_type_of).map(TypeSpec::Array)
                    } else {
                        kw.and_then(scalar_type_of).map(TypeSpec::Scalar)
                    };
                    let Some(ty) = ty else {
                        return Err(self.unexpected(C, "a type"));
                    };
                    self.pos += 1;
                    decl.declared_type = Some(ty);
                    decl.strict = k != Keyword::ItzA;
                }
                Some(Keyword::TharIz) if !first => {
                    self.pos += 1;
                    if decl.size_expr.is_some() {
                        return Err(dup("THAR IZ"));
                    }
                    decl.size_expr = Some(self.expression()?);
                }
                Some(Keyword::ImSharinIt) if !first => {
                    self.pos += 1;
                    if decl.shared_lock {
                        return Err(dup("IM SHARIN IT"));
                    }
                    decl.shared_lock = true;
                }
                _ if first => break,
                _ => return Err(self.unexpected(C, "a declaration clause after `AN`")),
            }
            first = false;
        }
        let fail = |message: &str| ParseError {
            span: decl_span,
            construct: C,
            message: message.into(),
        };
        let is_array = matches!(decl.declared_type, Some(TypeSpec::Array(_)));
        if decl.size_expr.is_some() && !is_array {
            return Err(fail("`THAR IZ` without `LOTZ A`"));
        }
        if is_array && decl.size_expr.is_none() {
            return Err(fail("array declaration needs `THAR IZ`"));
        }
        if is_array && decl.init_expr.is_some() {
            return Err(fail("array declarations take no `ITZ` initializer"));
        }
        if scope == Scope::Shared && decl.declared_type.is_none() {
            return Err(fail("`WE HAS A` needs a static type"));
        }
        if scope == Scope::Local && decl.shared_lock {
            return Err(fail(
                "`IM SHARIN IT` needs a symmetric `WE HAS A` declaration",
            ));
        }
        if scope == Scope::Shared {
            decl.strict = true;
        }
        Ok(decl)
    }

    fn cast_type(&mut self, construct: &'static str) -> PResult<Tag> {
        match self.peek_kw().and_then(scalar_type_of) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.unexpected(construct, "a type")),
        }
    }

    fn reference(&mut self, construct: &'static str) -> PResult<Reference> {
        let locality = match self.peek_kw() {
            Some(Keyword::Ur) => {
                self.pos += 1;
                Locality::Ur
            }
            Some(Keyword::Mah) => {
                self.pos += 1;
                Locality::Mah
            }
            _ => Locality::Unqualified,
        };
        let name = if self.at_kw(Keyword::Srs) {
            self.pos += 1;
            RefName::Dynamic(Box::new(self.expression()?))
        } else {
            RefName::Static(self.expect_ident(construct)?)
        };
        let index = if matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::Index,
                ..
            })
        ) {
            self.pos += 1;
            Some(Box::new(self.expression()?))
        } else {
            None
        };
        Ok(Reference {
            name,
            index,
            locality,
        })
    }

    /// Operand of a prefix operator. Newlines may separate an operator from
    /// its operands; commas may not.
    fn operand(&mut self) -> PResult<Expression> {
        self.skip_newlines();
        self.expression()
    }

    fn expression(&mut self) -> PResult<Expression> {
        const C: &str = "expression";
        let Some(tok) = self.peek() else {
            return Err(self.unexpected(C, "an expression"));
        };
        let expr = match &tok.kind {
            TokenKind::Numbr(n) => {
                self.pos += 1;
                Expression::Literal(Value::Numbr(*n))
            }
            TokenKind::Numbar(x) => {
                self.pos += 1;
                Expression::Literal(Value::Numbar(*x))
            }
            TokenKind::Yarn(s) => {
                self.pos += 1;
                Expression::Literal(Value::Yarn(s.clone()))
            }
            TokenKind::Ident(_) => Expression::Ref(self.reference(C)?),
            TokenKind::Keyword(k) => {
                let k = *k;
                if let Some(op) = binop_of(k) {
                    self.pos += 1;
                    let lhs = self.operand()?;
                    let before = self.pos;
                    self.skip_newlines();
                    if !self.at_kw(Keyword::An) {
                        self.pos = before;
                        return Err(self.unexpected(op.name(), "`AN` between operands"));
                    }
                    self.pos += 1;
                    let rhs = self.operand()?;
                    return Ok(Expression::BinOp {
                        op,
                        lhs: Box::new(lhs),
                        rhs: Box::new(rhs),
                    });
                }
                if let Some(op) = mathop_of(k) {
                    self.pos += 1;
                    let arg = self.operand()?;
                    return Ok(Expression::Math {
                        op,
                        arg: Box::new(arg),
                    });
                }
                match k {
                    Keyword::Ur | Keyword::Mah | Keyword::Srs => {
                        Expression::Ref(self.reference(C)?)
                    }
                    Keyword::Maek => {
                        self.pos += 1;
                        let arg = self.operand()?;
                        self.expect_kw(Keyword::A, "MAEK")?;
                        let to = self.cast_type("MAEK")?;
                        Expression::Maek {
                            arg: Box::new(arg),
                            to,
                        }
                    }
                    _ => {
                        let e = match k {
                            Keyword::Win => Expression::Literal(Value::Troof(true)),
                            Keyword::Fail => Expression::Literal(Value::Troof(false)),
                            Keyword::Noob => Expression::Literal(Value::Noob),
                            Keyword::Me => Expression::Me,
                            Keyword::MahFrenz => Expression::MahFrenz,
                            Keyword::Whatevr => Expression::Whatevr,
                            Keyword::Whatevar => Expression::Whatevar,
                            _ => return Err(self.unexpected(C, "an expression")),
                        };
                        self.pos += 1;
                        e
                    }
                }
            }
            TokenKind::Separator(_) | TokenKind::Index => {
                return Err(self.unexpected(C, "an expression"))
            }
        };
        Ok(expr)
    }
}

/// Parse a whole `HAI ... KTHXBYE` program.
pub fn parse_program(tokens: &[Token]) -> Result<Program, ParseError> {
    Parser {
        tokens,
        pos: 0,
        breakable: 0,
    }
    .program()
}

/// Parse a single expression covering all of `tokens`.
pub fn parse_expression(tokens: &[Token]) -> Result<Expression, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        breakable: 0,
    };
    let e = p.expression()?;
    if p.peek().is_some() {
        return Err(p.unexpected("expression", "end of expression"));
    }
    Ok(e)
}

/// Parse a single statement covering all of `tokens`. GTFO is accepted
/// as if inside a loop.
pub fn parse_statement(tokens: &[Token]) -> Result<Statement, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        breakable: 1,
    };
    let s = p.statement()?;
    p.skip_separators();
    if p.peek().is_some() {
        return Err(p.unexpected("statement", "end of statement"));
    }
    Ok(s)
}
