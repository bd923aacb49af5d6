//! Plain-text reading and writing of theories and conclusions.
//!
//! The theory format is statement-oriented. Each statement ends with `.`,
//! `#` starts a comment running to end of line, and whitespace is free:
//!
//! ```text
//! bird_tweety.                      # a fact
//! r1: bird_tweety => flies_tweety.  # a labeled defeasible rule
//! heavy_tweety ~> ~flies_tweety.    # an unlabeled defeater
//! r1 > r2.                          # r1 beats r2
//! ```
//!
//! Rules may be left unlabeled; they receive generated labels `r__<k>`
//! numbered by rule position. Any identifier is a valid atom name or
//! label, including the `__`-marked names the transformations mint, so
//! a printed theory always reads back.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::conclusions::{ConclusionSet, Tag};
use crate::theory::{is_identifier, rendering_order, Atom, Literal, Rule, RuleKind, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed tokens or statement structure.
    Syntax,
    /// The same rule label bound twice.
    DuplicateLabel,
    /// A superiority pair names a label no rule carries.
    UnknownLabelInSuperiority,
    /// The superiority relation has a directed cycle.
    CyclicSuperiority,
}

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
            kind,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Tilde,
    Comma,
    Colon,
    Dot,
    Gt,
    Arrow(RuleKind),
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Tilde => "`~`".to_string(),
            Token::Comma => "`,`".to_string(),
            Token::Colon => "`:`".to_string(),
            Token::Dot => "`.`".to_string(),
            Token::Gt => "`>`".to_string(),
            Token::Arrow(kind) => format!("`{}`", kind.arrow()),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line = 1usize;
    let mut column = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            ',' => {
                bump!();
                tokens.push((Token::Comma, pos));
            }
            ':' => {
                bump!();
                tokens.push((Token::Colon, pos));
            }
            '.' => {
                bump!();
                tokens.push((Token::Dot, pos));
            }
            '(' => {
                bump!();
                tokens.push((Token::LParen, pos));
            }
            ')' => {
                bump!();
                tokens.push((Token::RParen, pos));
            }
            '>' => {
                bump!();
                tokens.push((Token::Gt, pos));
            }
            '~' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    tokens.push((Token::Arrow(RuleKind::Defeater), pos));
                } else {
                    tokens.push((Token::Tilde, pos));
                }
            }
            '-' | '=' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    let kind = if c == '-' {
                        RuleKind::Strict
                    } else {
                        RuleKind::Defeasible
                    };
                    tokens.push((Token::Arrow(kind), pos));
                } else {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        pos,
                        format!("expected `{c}>`"),
                    ));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(ident), pos));
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    Ok(tokens)
}

/// One parsed statement.
enum Stmt {
    Fact(Literal),
    Rule {
        label: Option<(String, Pos)>,
        kind: RuleKind,
        body: Vec<Literal>,
        head: Literal,
        pos: Pos,
    },
    Sup {
        superior: String,
        inferior: String,
        pos: Pos,
    },
}

struct Parser {
    tokens: Vec<(Token, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Token> {
        self.tokens.get(self.at + 1).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Token, Pos)> {
        let item = self.tokens.get(self.at).cloned();
        if item.is_some() {
            self.at += 1;
        }
        item
    }

    fn expect(&mut self, want: &Token) -> Result<Pos, ParseError> {
        match self.next() {
            Some((tok, pos)) if &tok == want => Ok(pos),
            Some((tok, pos)) => Err(ParseError::new(
                ParseErrorKind::Syntax,
                pos,
                format!("expected {}, found {}", want.describe(), tok.describe()),
            )),
            None => Err(ParseError::new(
                ParseErrorKind::Syntax,
                self.end,
                format!("expected {}, found end of input", want.describe()),
            )),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.next() {
            Some((Token::Ident(s), pos)) => Ok((s, pos)),
            Some((tok, pos)) => Err(ParseError::new(
                ParseErrorKind::Syntax,
                pos,
                format!("expected {what}, found {}", tok.describe()),
            )),
            None => Err(ParseError::new(
                ParseErrorKind::Syntax,
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn checked_name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let (name, pos) = self.ident(what)?;
        if !is_identifier(&name) {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                pos,
                format!("invalid {what} `{name}`: expected [a-z][A-Za-z0-9_]*"),
            ));
        }
        Ok((name, pos))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (name, pos) = self.checked_name("atom name")?;
        let mut args = Vec::new();
        if self.peek() == Some(&Token::LParen) {
            self.next();
            loop {
                let (arg, _) = self.checked_name("constant")?;
                args.push(arg);
                match self.next() {
                    Some((Token::Comma, _)) => continue,
                    Some((Token::RParen, _)) => break,
                    Some((tok, pos)) => {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            pos,
                            format!("expected `,` or `)`, found {}", tok.describe()),
                        ))
                    }
                    None => {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            self.end,
                            "expected `,` or `)`, found end of input",
                        ))
                    }
                }
            }
        }
        Atom::new(name, args)
            .map_err(|e| ParseError::new(ParseErrorKind::Syntax, pos, e.to_string()))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let positive = if self.peek() == Some(&Token::Tilde) {
            self.next();
            false
        } else {
            true
        };
        Ok(Literal::new(self.atom()?, positive))
    }

    /// A rule label: any identifier.
    fn label(&mut self) -> Result<(String, Pos), ParseError> {
        let (name, pos) = self.ident("rule label")?;
        if !is_identifier(&name) {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                pos,
                format!("invalid rule label `{name}`: expected [a-z][A-Za-z0-9_]*"),
            ));
        }
        Ok((name, pos))
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        // Superiority: label > label.
        if matches!(self.peek(), Some(Token::Ident(_))) && self.peek2() == Some(&Token::Gt) {
            let (superior, pos) = self.label()?;
            self.expect(&Token::Gt)?;
            let (inferior, _) = self.label()?;
            self.expect(&Token::Dot)?;
            return Ok(Stmt::Sup {
                superior,
                inferior,
                pos,
            });
        }

        // Optional rule label.
        let label = if matches!(self.peek(), Some(Token::Ident(_)))
            && self.peek2() == Some(&Token::Colon)
        {
            let (name, pos) = self.label()?;
            self.expect(&Token::Colon)?;
            Some((name, pos))
        } else {
            None
        };

        let start = self.pos();
        let mut body: Vec<Literal> = Vec::new();
        enum Tail {
            Fact,
            Arrow(RuleKind),
        }
        let tail = loop {
            if body.is_empty() {
                if let Some(Token::Arrow(kind)) = self.peek() {
                    let kind = *kind;
                    self.next();
                    break Tail::Arrow(kind);
                }
            }
            body.push(self.literal()?);
            match self.next() {
                Some((Token::Comma, _)) => continue,
                Some((Token::Arrow(kind), _)) => break Tail::Arrow(kind),
                Some((Token::Dot, pos)) => {
                    if label.is_some() {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            pos,
                            "facts cannot carry labels",
                        ));
                    }
                    if body.len() != 1 {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            pos,
                            "expected a rule arrow before `.`",
                        ));
                    }
                    break Tail::Fact;
                }
                Some((tok, pos)) => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        pos,
                        format!(
                            "expected `,`, `.`, or a rule arrow, found {}",
                            tok.describe()
                        ),
                    ))
                }
                None => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        self.end,
                        "expected `,`, `.`, or a rule arrow, found end of input",
                    ))
                }
            }
        };
        match tail {
            Tail::Fact => Ok(Stmt::Fact(body.pop().expect("single literal"))),
            Tail::Arrow(kind) => {
                let head = self.literal()?;
                self.expect(&Token::Dot)?;
                Ok(Stmt::Rule {
                    label,
                    kind,
                    body,
                    head,
                    pos: start,
                })
            }
        }
    }
}

/// Parses the statement-oriented theory format.
pub fn parse_theory(input: &str) -> Result<Theory, ParseError> {
    let tokens = tokenize(input)?;
    let end = Pos {
        line: input.lines().count().max(1),
        column: input
            .lines()
            .last()
            .map(|l| l.chars().count() + 1)
            .unwrap_or(1),
    };
    let mut p = Parser { tokens, at: 0, end };

    let mut facts: Vec<Literal> = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();
    let mut label_positions: HashMap<String, Pos> = HashMap::new();
    let mut sup_pairs: Vec<(String, String, Pos)> = Vec::new();

    while p.peek().is_some() {
        match p.statement()? {
            Stmt::Fact(lit) => facts.push(lit),
            Stmt::Rule {
                label,
                kind,
                body,
                head,
                pos,
            } => {
                let ordinal = rules.len() + 1;
                let (label, label_pos) = label.unwrap_or((format!("r__{ordinal}"), pos));
                if label_positions.contains_key(&label) {
                    return Err(ParseError::new(
                        ParseErrorKind::DuplicateLabel,
                        label_pos,
                        format!("duplicate rule label `{label}`"),
                    ));
                }
                label_positions.insert(label.clone(), label_pos);
                rules.push(Rule::new(label, kind, body, head));
            }
            Stmt::Sup {
                superior,
                inferior,
                pos,
            } => sup_pairs.push((superior, inferior, pos)),
        }
    }

    // Superiority label resolution.
    let labels: HashSet<&str> = rules.iter().map(|r| r.label()).collect();
    for (superior, inferior, pos) in &sup_pairs {
        for label in [superior, inferior] {
            if !labels.contains(label.as_str()) {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownLabelInSuperiority,
                    *pos,
                    format!("superiority pair mentions unknown label `{label}`"),
                ));
            }
        }
    }

    // Cycle detection, reporting the statement that closes the first cycle.
    let mut edges: Vec<(&str, &str)> = Vec::new();
    for (superior, inferior, pos) in &sup_pairs {
        if superior == inferior || reaches(&edges, inferior, superior) {
            return Err(ParseError::new(
                ParseErrorKind::CyclicSuperiority,
                *pos,
                format!("superiority pair `{superior} > {inferior}` makes the relation cyclic"),
            ));
        }
        edges.push((superior, inferior));
    }

    let superiority: Vec<(String, String)> =
        sup_pairs.into_iter().map(|(a, b, _)| (a, b)).collect();
    Theory::new(facts, rules, superiority)
        .map_err(|e| ParseError::new(ParseErrorKind::Syntax, end, e.to_string()))
}

/// True when `to` is reachable from `from` along the edges.
fn reaches(edges: &[(&str, &str)], from: &str, to: &str) -> bool {
    if from == to {
        return true;
    }
    let mut seen: HashSet<&str> = HashSet::new();
    let mut stack = vec![from];
    while let Some(node) = stack.pop() {
        if !seen.insert(node) {
            continue;
        }
        for (a, b) in edges {
            if *a == node {
                if *b == to {
                    return true;
                }
                stack.push(b);
            }
        }
    }
    false
}

/// Renders a theory in canonical form: sorted facts, rules in stored order,
/// sorted superiority pairs. Parsing the output reproduces the theory.
pub fn print_theory(theory: &Theory) -> String {
    let mut out = String::new();
    let mut facts: Vec<&Literal> = theory.facts().iter().collect();
    facts.sort_by(|a, b| rendering_order(a, b));
    for fact in facts {
        out.push_str(&fact.rendered());
        out.push_str(".\n");
    }
    for rule in theory.rules() {
        out.push_str(rule.label());
        out.push_str(": ");
        let mut body: Vec<&Literal> = rule.body().iter().collect();
        body.sort_by(|a, b| rendering_order(a, b));
        for (i, lit) in body.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&lit.rendered());
        }
        if !body.is_empty() {
            out.push(' ');
        }
        out.push_str(rule.kind().arrow());
        out.push(' ');
        out.push_str(&rule.head().rendered());
        out.push_str(".\n");
    }
    for (superior, inferior) in theory.superiority() {
        out.push_str(&format!("{superior} > {inferior}.\n"));
    }
    out
}

/// Renders conclusions one per line, `<tag> <literal>`, sorted by literal
/// rendering and then by fixed tag order. With `all`, language literals
/// undetermined for a class get `?D`/`?d` lines. With `extended`, the
/// auxiliary support and attack tags are included.
pub fn print_conclusions(set: &ConclusionSet, all: bool, extended: bool) -> String {
    let mut literals: BTreeSet<Literal> = set.iter().map(|c| c.literal.clone()).collect();
    if all {
        for atom in set.language() {
            literals.insert(Literal::pos(atom.clone()));
            literals.insert(Literal::neg(atom.clone()));
        }
    }
    let mut sorted: Vec<Literal> = literals.into_iter().collect();
    sorted.sort_by(rendering_order);

    let mut out = String::new();
    for lit in &sorted {
        let in_language = set.language().contains(lit.atom());
        let mut class_lines = |plus: Tag, minus: Tag, unknown: &str| {
            let mut determined = false;
            for tag in [plus, minus] {
                if set.contains(tag, lit) {
                    out.push_str(&format!("{} {}\n", tag.rendered(), lit.rendered()));
                    determined = true;
                }
            }
            if !determined && all && in_language && !unknown.is_empty() {
                out.push_str(&format!("{unknown} {}\n", lit.rendered()));
            }
        };
        class_lines(Tag::PlusDelta, Tag::MinusDelta, "?D");
        class_lines(Tag::PlusPartial, Tag::MinusPartial, "?d");
        if extended {
            class_lines(Tag::PlusSigma, Tag::MinusSigma, "");
            class_lines(Tag::PlusTau, Tag::MinusTau, "");
        }
    }
    out
}
