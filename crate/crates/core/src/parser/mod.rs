//! Concrete syntax for SLA documents.
//!
//! ```text
//! document   = header , { party } , { slo } , { activity } , { service } , { resource } ;
//! header     = "sla" , STRING , "{" , "id" "=" IDENT , "application" "=" IDENT ,
//!              "starts" "=" DATE , "ends" "=" DATE , "}" ;
//! party      = "party" , IDENT , "{" , "name" "=" STRING , "role" "=" ROLE , "}" ;
//! slo        = "slo" , IDENT , "on" , ("app" | IDENT) , "{" , constraint , { constraint } , "}" ;
//! constraint = IDENT , ("<"|"<="|">"|">="|"==") , value , [ UNIT ] ;
//! activity   = "activity" , IDENT , ":" , IDENT , "requires" , IDENT , { "," , IDENT } ;
//! service    = "service" , IDENT , ":" , IDENT , "on" , IDENT , "{" , { config } , "}" ;
//! resource   = "resource" , IDENT , ":" , IDENT , "{" , { config } , "}" ;
//! config     = IDENT , "=" , value , [ UNIT ] ;
//! value      = NUMBER | "true" | "false" | STRING ;
//! ```
//!
//! `IDENT` is `[a-z][a-z0-9_]*` minus the keywords; `UNIT` is any word, so
//! `Hz` and `MB` are allowed. An SLO on an entity is stored with that
//! service or resource, which must be declared somewhere in the document.

mod interchange;
mod lexer;
mod serialize;

use std::collections::HashMap;
use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

use crate::model::{
    ActivityKind, ApplicationType, Comparator, ConfigParam, Header, InfraResourceSpec, Literal, MetricConstraint,
    Party, PartyRole, ResourceKind, ServiceKind, SlaDocument, Slo, SloTarget, WorkflowActivity,
};
use crate::span::{Position, SourceSpan, Span};
use crate::value::parse_decimal;

pub use interchange::{from_interchange, to_interchange, to_interchange_value, InterchangeError};
pub use serialize::serialize;

use lexer::{Token, TokenKind};

pub const KEYWORDS: &[&str] = &[
    "sla",
    "id",
    "application",
    "starts",
    "ends",
    "party",
    "name",
    "role",
    "slo",
    "on",
    "app",
    "activity",
    "requires",
    "service",
    "resource",
    "true",
    "false",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn at(pos: Position, message: impl Into<String>) -> Self {
        ParseError { line: pos.line, column: pos.column, message: message.into(), expected: Vec::new() }
    }

    pub fn position(&self) -> Position {
        Position::new(self.line, self.column)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

/// Parses DSL source into a document.
pub fn parse(text: &str) -> Result<SlaDocument, ParseError> {
    let tokens = lexer::tokenize(text)?;
    Parser { tokens, pos: 0, ids: HashMap::new() }.document()
}

/// Like [`parse`] but accepts arbitrary bytes; invalid UTF-8 is reported at
/// the offending byte.
pub fn parse_bytes(bytes: &[u8]) -> Result<SlaDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("prefix is valid");
            let line = valid.matches('\n').count() as u32 + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
            Err(ParseError::at(Position::new(line, column), "invalid UTF-8"))
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    ids: HashMap<String, Position>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn last_end(&self) -> Position {
        if self.pos == 0 {
            return self.tokens[0].start;
        }
        self.tokens[self.pos - 1].end
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let tok = self.peek();
        let mut err = ParseError::at(tok.start, format!("unexpected {}", tok.kind.describe()));
        err.expected = expected.iter().map(|s| s.to_string()).collect();
        err
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Word(w) if w == word)
    }

    fn keyword(&mut self, word: &str) -> Result<Token, ParseError> {
        if self.is_word(word) {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&[&format!("`{word}`")]))
        }
    }

    fn punct(&mut self, kind: TokenKind, shown: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&[shown]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let tok = self.peek().clone();
        match &tok.kind {
            TokenKind::Word(w) if is_keyword(w) => {
                let mut err = ParseError::at(tok.start, format!("`{w}` is a reserved keyword"));
                err.expected = vec![what.to_string()];
                Err(err)
            }
            TokenKind::Word(w) if crate::is_identifier(w) => {
                self.advance();
                Ok((w.clone(), tok))
            }
            TokenKind::Word(w) => Err(ParseError::at(
                tok.start,
                format!("`{w}` is not a valid identifier (lowercase letters, digits and `_`)"),
            )),
            _ => Err(self.unexpected(&[what])),
        }
    }

    /// Identifier that names a new entity; must be unique document-wide.
    fn declare(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let (id, tok) = self.ident(what)?;
        if let Some(first) = self.ids.get(&id) {
            return Err(ParseError::at(tok.start, format!("duplicate identifier `{id}` (first declared at {first})")));
        }
        self.ids.insert(id.clone(), tok.start);
        Ok((id, tok))
    }

    fn string(&mut self) -> Result<String, ParseError> {
        match &self.peek().kind {
            TokenKind::Str(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected(&["string"])),
        }
    }

    fn date(&mut self) -> Result<NaiveDate, ParseError> {
        let tok = self.peek().clone();
        match &tok.kind {
            TokenKind::Date(d) => {
                let date = NaiveDate::parse_from_str(d, "%Y-%m-%d")
                    .map_err(|_| ParseError::at(tok.start, format!("invalid calendar date `{d}`")))?;
                self.advance();
                Ok(date)
            }
            _ => Err(self.unexpected(&["date (YYYY-MM-DD)"])),
        }
    }

    fn assign(&mut self, key: &str) -> Result<(), ParseError> {
        self.keyword(key)?;
        self.punct(TokenKind::Equals, "`=`")?;
        Ok(())
    }

    fn span_from(&self, start: Position) -> Span {
        SourceSpan::new(start, self.last_end()).into()
    }

    fn document(mut self) -> Result<SlaDocument, ParseError> {
        let header = self.header()?;
        let mut parties = Vec::new();
        while self.is_word("party") {
            parties.push(self.party()?);
        }
        let mut slos = Vec::new();
        while self.is_word("slo") {
            slos.push(self.slo()?);
        }
        let mut activities = Vec::new();
        while self.is_word("activity") {
            activities.push(self.activity()?);
        }
        let mut services = Vec::new();
        while self.is_word("service") {
            services.push(self.service()?);
        }
        let mut resources = Vec::new();
        while self.is_word("resource") {
            resources.push(self.resource()?);
        }
        if self.peek().kind != TokenKind::Eof {
            let expected: &[&str] = if !resources.is_empty() {
                &["`resource`", "end of input"]
            } else if !services.is_empty() {
                &["`service`", "`resource`", "end of input"]
            } else if !activities.is_empty() {
                &["`activity`", "`service`", "`resource`", "end of input"]
            } else if !slos.is_empty() {
                &["`slo`", "`activity`", "`service`", "`resource`", "end of input"]
            } else {
                &["`party`", "`slo`", "`activity`", "`service`", "`resource`", "end of input"]
            };
            return Err(self.unexpected(expected));
        }

        let mut app_slos = Vec::new();
        for (slo, target_tok) in slos {
            match &slo.target {
                SloTarget::Application => app_slos.push(slo),
                SloTarget::Entity(id) => {
                    if let Some(svc) = services.iter_mut().find(|s| &s.id == id) {
                        svc.slos.push(slo);
                    } else if let Some(res) = resources.iter_mut().find(|r| &r.id == id) {
                        res.slos.push(slo);
                    } else {
                        return Err(ParseError::at(
                            target_tok.start,
                            format!("SLO target `{id}` is not a declared service or resource"),
                        ));
                    }
                }
            }
        }

        Ok(SlaDocument { header, parties, app_slos, activities, services, resources })
    }

    fn header(&mut self) -> Result<Header, ParseError> {
        let start = self.keyword("sla")?.start;
        let title = self.string()?;
        self.punct(TokenKind::LBrace, "`{`")?;
        self.assign("id")?;
        let (id, _) = self.declare("document identifier")?;
        self.assign("application")?;
        let (app, _) = self.ident("application type")?;
        self.assign("starts")?;
        let start_date = self.date()?;
        self.assign("ends")?;
        let end_date = self.date()?;
        self.punct(TokenKind::RBrace, "`}`")?;
        Ok(Header {
            title,
            id,
            application_type: ApplicationType::parse(&app),
            start_date,
            end_date,
            span: self.span_from(start),
        })
    }

    fn party(&mut self) -> Result<Party, ParseError> {
        let start = self.keyword("party")?.start;
        let (id, _) = self.declare("party identifier")?;
        self.punct(TokenKind::LBrace, "`{`")?;
        self.assign("name")?;
        let name = self.string()?;
        self.assign("role")?;
        let (role_text, role_tok) = self.ident("party role")?;
        let role: PartyRole = role_text.parse().map_err(|_| {
            let mut e = ParseError::at(role_tok.start, format!("unknown party role `{role_text}`"));
            e.expected = PartyRole::ALL.iter().map(|r| format!("`{r}`")).collect();
            e
        })?;
        self.punct(TokenKind::RBrace, "`}`")?;
        Ok(Party { id, name, role, span: self.span_from(start) })
    }

    fn slo(&mut self) -> Result<(Slo, Token), ParseError> {
        let start = self.keyword("slo")?.start;
        let (id, _) = self.declare("SLO identifier")?;
        self.keyword("on")?;
        let target_tok = self.peek().clone();
        let target = if self.is_word("app") {
            self.advance();
            SloTarget::Application
        } else {
            SloTarget::Entity(self.ident("`app` or a service/resource identifier")?.0)
        };
        self.punct(TokenKind::LBrace, "`{`")?;
        let mut constraints = vec![self.constraint()?];
        while self.peek().kind != TokenKind::RBrace {
            constraints.push(self.constraint()?);
        }
        self.advance();
        Ok((Slo { id, target, constraints, span: self.span_from(start) }, target_tok))
    }

    fn value(&mut self) -> Result<Literal, ParseError> {
        let tok = self.peek().clone();
        let lit = match &tok.kind {
            TokenKind::Number(n) => {
                Literal::Number(parse_decimal(n).ok_or_else(|| ParseError::at(tok.start, "malformed number"))?)
            }
            TokenKind::Str(s) => Literal::Str(s.clone()),
            TokenKind::Word(w) if w == "true" => Literal::Bool(true),
            TokenKind::Word(w) if w == "false" => Literal::Bool(false),
            _ => return Err(self.unexpected(&["number", "`true`", "`false`", "string"])),
        };
        self.advance();
        Ok(lit)
    }

    /// A unit follows the value unless the next word starts another clause,
    /// which is recognised by what comes after it.
    fn optional_unit(&mut self, clause_separator: fn(&TokenKind) -> bool) -> Result<Option<String>, ParseError> {
        let TokenKind::Word(w) = &self.peek().kind else {
            return Ok(None);
        };
        if clause_separator(self.peek_at(1)) {
            return Ok(None);
        }
        let w = w.clone();
        if is_keyword(&w) {
            return Err(ParseError::at(self.peek().start, format!("`{w}` is a reserved keyword, not a unit")));
        }
        self.advance();
        Ok(Some(w))
    }

    fn constraint(&mut self) -> Result<MetricConstraint, ParseError> {
        let (metric, tok) = self.ident("metric name")?;
        let start = tok.start;
        let comparator = match &self.peek().kind {
            TokenKind::Cmp(c) => Comparator::parse(c).expect("lexer emits known comparators"),
            _ => return Err(self.unexpected(&["`<`", "`<=`", "`>`", "`>=`", "`==`"])),
        };
        self.advance();
        let value = self.value()?;
        let unit = self.optional_unit(|k| matches!(k, TokenKind::Cmp(_)))?;
        Ok(MetricConstraint { metric, comparator, value, unit, span: self.span_from(start) })
    }

    fn config(&mut self) -> Result<ConfigParam, ParseError> {
        let (term, tok) = self.ident("configuration term")?;
        let start = tok.start;
        self.punct(TokenKind::Equals, "`=`")?;
        let value = self.value()?;
        let unit = self.optional_unit(|k| matches!(k, TokenKind::Equals))?;
        Ok(ConfigParam { term, value, unit, span: self.span_from(start) })
    }

    fn config_block(&mut self) -> Result<Vec<ConfigParam>, ParseError> {
        self.punct(TokenKind::LBrace, "`{`")?;
        let mut config = Vec::new();
        while self.peek().kind != TokenKind::RBrace {
            if !matches!(self.peek().kind, TokenKind::Word(_)) {
                return Err(self.unexpected(&["configuration term", "`}`"]));
            }
            config.push(self.config()?);
        }
        self.advance();
        Ok(config)
    }

    fn kind<K: std::str::FromStr + fmt::Display>(&mut self, what: &str, all: &[K]) -> Result<K, ParseError> {
        let (text, tok) = self.ident(what)?;
        text.parse().map_err(|_| {
            let mut e = ParseError::at(tok.start, format!("unknown {what} `{text}`"));
            e.expected = all.iter().map(|k| format!("`{k}`")).collect();
            e
        })
    }

    fn activity(&mut self) -> Result<WorkflowActivity, ParseError> {
        let start = self.keyword("activity")?.start;
        let (id, _) = self.declare("activity identifier")?;
        self.punct(TokenKind::Colon, "`:`")?;
        let kind = self.kind("activity kind", ActivityKind::ALL)?;
        self.keyword("requires")?;
        let mut required = vec![self.ident("service identifier")?.0];
        while self.peek().kind == TokenKind::Comma {
            self.advance();
            required.push(self.ident("service identifier")?.0);
        }
        Ok(WorkflowActivity { id, kind, required_services: required, span: self.span_from(start) })
    }

    fn service(&mut self) -> Result<crate::model::ServiceSpec, ParseError> {
        let start = self.keyword("service")?.start;
        let (id, _) = self.declare("service identifier")?;
        self.punct(TokenKind::Colon, "`:`")?;
        let kind = self.kind("service kind", ServiceKind::ALL)?;
        self.keyword("on")?;
        let (deployed_on, _) = self.ident("resource identifier")?;
        let config = self.config_block()?;
        Ok(crate::model::ServiceSpec { id, kind, deployed_on, slos: Vec::new(), config, span: self.span_from(start) })
    }

    fn resource(&mut self) -> Result<InfraResourceSpec, ParseError> {
        let start = self.keyword("resource")?.start;
        let (id, _) = self.declare("resource identifier")?;
        self.punct(TokenKind::Colon, "`:`")?;
        let kind = self.kind("resource kind", ResourceKind::ALL)?;
        let config = self.config_block()?;
        Ok(InfraResourceSpec { id, kind, slos: Vec::new(), config, span: self.span_from(start) })
    }
}
