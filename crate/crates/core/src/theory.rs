//! The propositional theory model: atoms, literals, rules, and theories.
//!
//! A theory is a triple of facts, labeled rules, and an acyclic superiority
//! relation over rule labels. Rules come in three kinds: strict rules whose
//! conclusion holds whenever the body is definitely provable, defeasible
//! rules that can be defeated by contrary evidence, and defeaters that can
//! only block conclusions, never support them.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
    #[error("superiority pair mentions unknown label `{0}`")]
    UnknownLabel(String),
    #[error("superiority relation is cyclic")]
    CyclicSuperiority,
}

/// True when `s` is a lowercase-led identifier: `[a-z][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A ground atom: a predicate name with an optional tuple of constants.
///
/// Atoms are compared structurally, which coincides with comparison of
/// their rendered form (`name` or `name(c1,c2)`) because names cannot
/// contain `(`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    name: String,
    args: Vec<String>,
}

impl Atom {
    pub fn new(
        name: impl Into<String>,
        args: impl IntoIterator<Item = String>,
    ) -> Result<Self, TheoryError> {
        let name = name.into();
        let args: Vec<String> = args.into_iter().collect();
        if !is_identifier(&name) {
            return Err(TheoryError::InvalidIdentifier(name));
        }
        if let Some(bad) = args.iter().find(|a| !is_identifier(a)) {
            return Err(TheoryError::InvalidIdentifier(bad.clone()));
        }
        Ok(Atom { name, args })
    }

    /// A zero-argument atom.
    pub fn named(name: impl Into<String>) -> Result<Self, TheoryError> {
        Atom::new(name, [])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }

    pub fn rendered(&self) -> String {
        if self.args.is_empty() {
            self.name.clone()
        } else {
            format!("{}({})", self.name, self.args.join(","))
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered())
    }
}

/// An atom or its negation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    atom: Atom,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn pos(atom: Atom) -> Self {
        Literal::new(atom, true)
    }

    pub fn neg(atom: Atom) -> Self {
        Literal::new(atom, false)
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// The complement: `p` for `~p` and `~p` for `p`. An involution.
    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    pub fn rendered(&self) -> String {
        if self.positive {
            self.atom.rendered()
        } else {
            format!("~{}", self.atom.rendered())
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered())
    }
}

/// Compare two literals by their rendered text, the order used for output.
pub fn rendering_order(a: &Literal, b: &Literal) -> std::cmp::Ordering {
    a.rendered().cmp(&b.rendered())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    /// `body -> head`: fires definitely when the body is definitely proved.
    Strict,
    /// `body => head`: fires unless defeated.
    Defeasible,
    /// `body ~> head`: can only block the opposite conclusion.
    Defeater,
}

impl RuleKind {
    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }
}

/// A labeled rule. The body is a set: duplicate body literals collapse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    label: String,
    kind: RuleKind,
    body: BTreeSet<Literal>,
    head: Literal,
}

impl Rule {
    pub fn new(
        label: impl Into<String>,
        kind: RuleKind,
        body: impl IntoIterator<Item = Literal>,
        head: Literal,
    ) -> Self {
        Rule {
            label: label.into(),
            kind,
            body: body.into_iter().collect(),
            head,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn body(&self) -> &BTreeSet<Literal> {
        &self.body
    }

    pub fn head(&self) -> &Literal {
        &self.head
    }

    pub fn is_strict(&self) -> bool {
        self.kind == RuleKind::Strict
    }
}

/// A defeasible theory: facts, rules in a stable order, and an acyclic
/// superiority relation `(superior, inferior)` over rule labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    facts: BTreeSet<Literal>,
    rules: Vec<Rule>,
    superiority: BTreeSet<(String, String)>,
}

impl Theory {
    pub fn new(
        facts: impl IntoIterator<Item = Literal>,
        rules: Vec<Rule>,
        superiority: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, TheoryError> {
        let facts: BTreeSet<Literal> = facts.into_iter().collect();
        let superiority: BTreeSet<(String, String)> = superiority.into_iter().collect();

        let mut seen: HashSet<&str> = HashSet::with_capacity(rules.len());
        for rule in &rules {
            if !seen.insert(rule.label()) {
                return Err(TheoryError::DuplicateLabel(rule.label().to_string()));
            }
        }
        for (sup, inf) in &superiority {
            for label in [sup, inf] {
                if !seen.contains(label.as_str()) {
                    return Err(TheoryError::UnknownLabel(label.clone()));
                }
            }
        }
        if has_cycle(&superiority) {
            return Err(TheoryError::CyclicSuperiority);
        }
        Ok(Theory {
            facts,
            rules,
            superiority,
        })
    }

    pub fn empty() -> Self {
        Theory {
            facts: BTreeSet::new(),
            rules: Vec::new(),
            superiority: BTreeSet::new(),
        }
    }

    pub fn facts(&self) -> &BTreeSet<Literal> {
        &self.facts
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn superiority(&self) -> &BTreeSet<(String, String)> {
        &self.superiority
    }

    pub fn rule_by_label(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label() == label)
    }

    /// Every atom mentioned by a fact, rule head, or rule body.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.literal_universe()
            .into_iter()
            .map(|l| l.atom().clone())
            .collect()
    }

    /// Every literal mentioned anywhere in the theory, closed under
    /// complement. An empty theory has an empty universe.
    pub fn literal_universe(&self) -> BTreeSet<Literal> {
        let mut universe = BTreeSet::new();
        let mut add = |lit: &Literal| {
            universe.insert(lit.clone());
            universe.insert(lit.complement());
        };
        for fact in &self.facts {
            add(fact);
        }
        for rule in &self.rules {
            add(rule.head());
            for b in rule.body() {
                add(b);
            }
        }
        universe
    }

    /// Symbol count: one per fact, one per rule head, one per body literal,
    /// two per superiority pair. The size measure for linearity claims.
    pub fn symbol_count(&self) -> usize {
        self.facts.len()
            + self
                .rules
                .iter()
                .map(|r| 1 + r.body().len())
                .sum::<usize>()
            + 2 * self.superiority.len()
    }
}

/// True when the superiority digraph (edges superior -> inferior) has a
/// directed cycle, i.e. its transitive closure is not irreflexive.
fn has_cycle(pairs: &BTreeSet<(String, String)>) -> bool {
    let mut adjacent: HashMap<&str, Vec<&str>> = HashMap::new();
    let mut nodes: BTreeSet<&str> = BTreeSet::new();
    for (a, b) in pairs {
        adjacent.entry(a).or_default().push(b);
        nodes.insert(a);
        nodes.insert(b);
    }
    // Iterative three-color depth-first search.
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: HashMap<&str, Color> = nodes.iter().map(|n| (*n, Color::White)).collect();
    for start in &nodes {
        if color[start] != Color::White {
            continue;
        }
        let mut stack = vec![(*start, 0usize)];
        color.insert(start, Color::Gray);
        while let Some((node, next)) = stack.pop() {
            let successors = adjacent.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if next < successors.len() {
                stack.push((node, next + 1));
                let succ = successors[next];
                match color[succ] {
                    Color::Gray => return true,
                    Color::White => {
                        color.insert(succ, Color::Gray);
                        stack.push((succ, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color.insert(node, Color::Black);
            }
        }
    }
    false
}

/// Rule indexes for one head literal, split by rule kind.
#[derive(Debug, Default, Clone)]
struct HeadEntry {
    strict: Vec<usize>,
    defeasible: Vec<usize>,
    defeaters: Vec<usize>,
}

/// Precomputed rule classes and a by-head index over a theory.
///
/// `R_sd` is the strict-or-defeasible class (rules that can support a
/// conclusion), `R_dd` the defeasible-or-defeater class (rules superiority
/// and attack care about).
pub struct RuleClasses<'t> {
    theory: &'t Theory,
    strict: Vec<usize>,
    defeasible: Vec<usize>,
    defeaters: Vec<usize>,
    by_head: BTreeMap<Literal, HeadEntry>,
}

impl<'t> RuleClasses<'t> {
    pub fn new(theory: &'t Theory) -> Self {
        let mut strict = Vec::new();
        let mut defeasible = Vec::new();
        let mut defeaters = Vec::new();
        let mut by_head: BTreeMap<Literal, HeadEntry> = BTreeMap::new();
        for (i, rule) in theory.rules().iter().enumerate() {
            let entry = by_head.entry(rule.head().clone()).or_default();
            match rule.kind() {
                RuleKind::Strict => {
                    strict.push(i);
                    entry.strict.push(i);
                }
                RuleKind::Defeasible => {
                    defeasible.push(i);
                    entry.defeasible.push(i);
                }
                RuleKind::Defeater => {
                    defeaters.push(i);
                    entry.defeaters.push(i);
                }
            }
        }
        RuleClasses {
            theory,
            strict,
            defeasible,
            defeaters,
            by_head,
        }
    }

    fn rules(&self, idx: &[usize]) -> Vec<&'t Rule> {
        idx.iter().map(|&i| &self.theory.rules()[i]).collect()
    }

    pub fn strict(&self) -> Vec<&'t Rule> {
        self.rules(&self.strict)
    }

    pub fn defeasible(&self) -> Vec<&'t Rule> {
        self.rules(&self.defeasible)
    }

    pub fn defeaters(&self) -> Vec<&'t Rule> {
        self.rules(&self.defeaters)
    }

    fn entry(&self, head: &Literal) -> Option<&HeadEntry> {
        self.by_head.get(head)
    }

    /// `R_s[q]`: strict rules with head `q`.
    pub fn strict_for(&self, head: &Literal) -> Vec<&'t Rule> {
        self.entry(head)
            .map(|e| self.rules(&e.strict))
            .unwrap_or_default()
    }

    /// `R_d[q]`: defeasible rules with head `q`.
    pub fn defeasible_for(&self, head: &Literal) -> Vec<&'t Rule> {
        self.entry(head)
            .map(|e| self.rules(&e.defeasible))
            .unwrap_or_default()
    }

    /// Defeaters with head `q`.
    pub fn defeaters_for(&self, head: &Literal) -> Vec<&'t Rule> {
        self.entry(head)
            .map(|e| self.rules(&e.defeaters))
            .unwrap_or_default()
    }

    /// `R_sd[q]`: strict and defeasible rules with head `q`.
    pub fn supporting_for(&self, head: &Literal) -> Vec<&'t Rule> {
        let mut out = self.strict_for(head);
        out.extend(self.defeasible_for(head));
        out
    }

    /// `R_dd[q]`: defeasible rules and defeaters with head `q`.
    pub fn non_strict_for(&self, head: &Literal) -> Vec<&'t Rule> {
        let mut out = self.defeasible_for(head);
        out.extend(self.defeaters_for(head));
        out
    }

    /// `R[q]`: all rules with head `q`.
    pub fn all_for(&self, head: &Literal) -> Vec<&'t Rule> {
        let mut out = self.strict_for(head);
        out.extend(self.defeasible_for(head));
        out.extend(self.defeaters_for(head));
        out
    }
}
