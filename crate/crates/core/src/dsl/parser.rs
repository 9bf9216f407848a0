//! Recursive-descent parser for `.remedy` planned-architecture sources.
//!
//! Parsing runs in two passes. The first builds a generic declaration tree
//! and stops at the first syntax error. The second checks the tree against
//! the abstraction hierarchy and may report several nesting errors at once.

use super::ast::{CommRule, Declaration, PlannedArchitecture, RuleEndpoint, Span};
use super::diagnostic::{Diagnostic, DiagnosticCode};
use super::lexer::{tokenize, Token, TokenKind};
use crate::domain::Modality;
use crate::kind::AbstractionKind;

const WITH_DOMAIN_RULES: &str = "withDomainRules";

pub fn parse_pa(source: &str) -> Result<PlannedArchitecture, Vec<Diagnostic>> {
    let tokens = tokenize(source).map_err(|d| vec![d])?;
    let pa = Parser { tokens, pos: 0 }.program().map_err(|d| vec![d])?;
    let diags = check_hierarchy(&pa);
    if diags.is_empty() {
        Ok(pa)
    } else {
        Err(diags)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(
            DiagnosticCode::UnexpectedToken,
            t.span,
            format!("expected {expected}, found {}", t.describe()),
        )
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        match &self.peek().kind {
            TokenKind::Word(w) if w == kw => Ok(self.bump()),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match &self.peek().kind {
            TokenKind::Word(w) => {
                let w = w.clone();
                let t = self.bump();
                Ok((w, t.span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_punct(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            let desc = Token { kind, span: Span::default() }.describe();
            Err(self.unexpected(&desc))
        }
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unterminated(&self, open: Span, what: &str) -> Diagnostic {
        let t = self.peek();
        let at = if t.kind == TokenKind::Eof { "end of input".to_string() } else { t.describe() };
        Diagnostic::error(
            DiagnosticCode::UnterminatedBlock,
            t.span,
            format!("unterminated block: {what} opened at {open} is not closed before {at}"),
        )
    }

    fn program(&mut self) -> PResult<PlannedArchitecture> {
        let start = self.expect_keyword("Architecture")?.span;
        let (name, _) = self.expect_ident("architecture name")?;
        let open = self.expect_punct(TokenKind::LBrace)?.span;
        let body = self.block_body(open, "architecture block")?;
        self.eat(TokenKind::Semi);

        let mut pa = PlannedArchitecture::new(name);
        for decl in body {
            match decl.kind {
                AbstractionKind::Managed => pa.managed.push(decl),
                // non-subsystems at top level are reported by the hierarchy pass
                _ => pa.managing.push(decl),
            }
        }

        self.expect_keyword("Rules")?;
        let open = self.expect_punct(TokenKind::LBrace)?.span;
        loop {
            match &self.peek().kind {
                TokenKind::RBrace => break,
                TokenKind::Eof => return Err(self.unterminated(open, "`Rules` block")),
                _ => pa.rules.push(self.rule()?),
            }
        }
        let close = self.bump().span;
        self.eat(TokenKind::Semi);
        if self.peek().kind != TokenKind::Eof {
            return Err(self.unexpected("end of input"));
        }
        pa.span = start.to(close);
        Ok(pa)
    }

    fn block_body(&mut self, open: Span, what: &str) -> PResult<Vec<Declaration>> {
        let mut decls = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::RBrace => {
                    self.bump();
                    return Ok(decls);
                }
                TokenKind::Eof => return Err(self.unterminated(open, what)),
                TokenKind::Word(w) if w == "Rules" => return Err(self.unterminated(open, what)),
                TokenKind::Word(_) => decls.push(self.declaration()?),
                _ => return Err(self.unexpected("a declaration or `}`")),
            }
        }
    }

    fn declaration(&mut self) -> PResult<Declaration> {
        let (word, kw_span) = self.expect_ident("a declaration")?;
        let kind = AbstractionKind::from_keyword(&word).ok_or_else(|| {
            Diagnostic::error(DiagnosticCode::UnknownKeyword, kw_span, format!("unknown keyword `{word}`"))
        })?;
        let (id, _) = self.expect_ident("an identifier")?;
        let mut decl = Declaration::new(kind, id);

        if let TokenKind::Word(w) = &self.peek().kind {
            if w == WITH_DOMAIN_RULES {
                if kind != AbstractionKind::Loop {
                    return Err(Diagnostic::error(
                        DiagnosticCode::UnexpectedToken,
                        self.peek().span,
                        format!("`{WITH_DOMAIN_RULES}` is only allowed on loops"),
                    ));
                }
                self.bump();
                decl.domain_rules = true;
            }
        }

        let end = match self.peek().kind {
            TokenKind::Semi => self.bump().span,
            TokenKind::LBrace if kind.is_composable() => {
                let open = self.bump().span;
                let what = format!("{} `{}`", kind.keyword(), decl.id);
                decl.children = self.block_body(open, &what)?;
                let close = self.tokens[self.pos - 1].span;
                if self.peek().kind == TokenKind::Semi {
                    self.bump().span
                } else {
                    close
                }
            }
            TokenKind::LBrace => {
                return Err(Diagnostic::error(
                    DiagnosticCode::UnexpectedToken,
                    self.peek().span,
                    format!("{} `{}` cannot contain other abstractions; expected `;`", kind.keyword(), decl.id),
                ))
            }
            _ => return Err(self.unexpected(if kind.is_composable() { "`{` or `;`" } else { "`;`" })),
        };
        decl.span = kw_span.to(end);
        Ok(decl)
    }

    fn is_modality(t: &Token) -> bool {
        matches!(&t.kind, TokenKind::Word(w) if Modality::from_keyword(w).is_some())
    }

    fn endpoint(&mut self, terminator_follows: bool) -> PResult<(RuleEndpoint, Span)> {
        // `<selector> <id>` or a bare `<id>` when the next token closes the endpoint.
        let bare = if terminator_follows {
            self.peek_at(1).kind == TokenKind::Semi
        } else {
            Self::is_modality(self.peek_at(1))
        };
        if bare {
            let (id, span) = self.expect_ident("an identifier")?;
            return Ok((RuleEndpoint::new(None, id), span));
        }
        let (sel, sel_span) = self.expect_ident("a kind selector")?;
        let kind = AbstractionKind::from_selector(&sel).ok_or_else(|| {
            Diagnostic::error(DiagnosticCode::UnknownKeyword, sel_span, format!("unknown kind selector `{sel}`"))
        })?;
        let (id, id_span) = self.expect_ident("an identifier")?;
        Ok((RuleEndpoint::new(Some(kind), id), sel_span.to(id_span)))
    }

    fn rule(&mut self) -> PResult<CommRule> {
        let (source, start) = self.endpoint(false)?;
        let (m, m_span) = self.expect_ident("`must-use` or `must-not-use`")?;
        let modality = Modality::from_keyword(&m).ok_or_else(|| {
            Diagnostic::error(
                DiagnosticCode::UnexpectedToken,
                m_span,
                format!("expected `must-use` or `must-not-use`, found `{m}`"),
            )
        })?;
        let (target, _) = self.endpoint(true)?;
        let end = self.expect_punct(TokenKind::Semi)?.span;
        let mut rule = CommRule::new(source, modality, target);
        rule.span = start.to(end);
        Ok(rule)
    }
}

fn check_hierarchy(pa: &PlannedArchitecture) -> Vec<Diagnostic> {
    fn visit(d: &Declaration, parent: Option<&Declaration>, out: &mut Vec<Diagnostic>) {
        match parent {
            None if !d.kind.is_subsystem() => out.push(Diagnostic::error(
                DiagnosticCode::InvalidNesting,
                d.span,
                format!("{} `{}` must be declared inside a subsystem", d.kind.keyword(), d.id),
            )),
            Some(p) if !d.kind.may_be_child_of(p.kind) => out.push(Diagnostic::error(
                DiagnosticCode::InvalidNesting,
                d.span,
                format!("{} `{}` is not allowed inside {} `{}`", d.kind.keyword(), d.id, p.kind.keyword(), p.id),
            )),
            _ => {}
        }
        for c in &d.children {
            visit(c, Some(d), out);
        }
    }

    let mut out = Vec::new();
    for s in pa.subsystems() {
        visit(s, None, &mut out);
    }
    let has = |k| pa.subsystems().any(|s| s.kind == k);
    for (kind, kw) in [(AbstractionKind::Managing, "Managing"), (AbstractionKind::Managed, "Managed")] {
        if !has(kind) {
            out.push(Diagnostic::error(
                DiagnosticCode::MissingSubsystem,
                pa.span,
                format!("architecture declares no {kw} subsystem"),
            ));
        }
    }
    out
}
