//! The linear-time inference engine.
//!
//! Total run time is linear in the theory's symbol count. The engine
//! accepts superiority-free theories (use [`crate::transform`] to get
//! there); defeaters are handled natively. Completeness for defeasible
//! conclusions additionally relies on every strict rule having a
//! defeasible twin, exactly as for the small-step interpreter.
//!
//! The design is a work-queue over tagged conclusions backed by linked
//! occurrence lists:
//!
//! * every literal record holds flags for the eight tags, the list of
//!   its occurrences in strict bodies, the list of its occurrences in
//!   non-strict bodies, and doubly-linked lists of the strict and
//!   non-strict rules it heads;
//! * every rule record keeps its remaining body as a doubly-linked list
//!   with a length counter, so emptiness is detected in constant time;
//! * a pending queue holds proven external conclusions (`±Δ`, `±∂`)
//!   whose consequences have not yet been applied.
//!
//! Processing a dequeued conclusion about p deletes p's occurrence or
//! head lists: `+Δp` empties bodies, `−Δp` deletes strict rules, `+∂p`
//! empties non-strict bodies, `−∂p` deletes non-strict rules. A body
//! running empty or a head list running out records new conclusions,
//! each of which feeds a constant-time inference check:
//!
//! * `+∂q` once `+Δq`, or all of `{+σq, −Δ~q, −τ~q}`, are recorded;
//! * `−∂q` once `−Δq` and one of `{−σq, +Δ~q, +τ~q}` are recorded.
//!
//! Here `+σq`/`−σq` track whether some defeasible rule for q has fired
//! / no defeasible rule for q remains, and `+τq`/`−τq` the same over
//! defeasible rules and defeaters together (an applicable defeater
//! attacks ~q without supporting q).
//!
//! Every flag is recorded at most once and first wins; a conclusion
//! enters the queue at most once; every occurrence node is unlinked at
//! most once; every rule is deleted at most once. Those four facts give
//! the linear bound, and the run asserts the corresponding counters.

use std::collections::VecDeque;

use thiserror::Error;

use crate::conclusions::{ConclusionSet, Tag, TaggedConclusion};
use crate::intern::LitInterner;
use crate::theory::{Literal, Rule, RuleKind, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("theory is not in engine form: the superiority relation is nonempty")]
    NotEngineForm,
}

/// Discipline for the pending-conclusion set. The final conclusions are
/// identical either way; the fuzz suite holds us to that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueueMode {
    #[default]
    Fifo,
    Lifo,
}

/// Work counters, checked against their a-priori bounds after each run.
#[derive(Debug, Clone, Copy, Default)]
pub struct EngineStats {
    /// Body-literal occurrences at build time; occurrences never grow,
    /// so this is also the peak live count.
    pub initial_occurrences: usize,
    pub occurrence_deletions: usize,
    pub rule_deletions: usize,
    pub enqueued: usize,
    pub dequeued: usize,
    /// Literals in the engine's universe (two per atom).
    pub universe: usize,
    pub rules: usize,
}

const NIL: u32 = u32::MAX;

struct OccNode {
    lit: u32,
    rule: u32,
    prev_body: u32,
    next_body: u32,
    /// Occurrence lists are consumed whole, so they are singly linked.
    next_occ: u32,
    alive: bool,
}

struct RuleRec {
    source: u32,
    kind: RuleKind,
    head: u32,
    body_head: u32,
    body_len: u32,
    prev_head: u32,
    next_head: u32,
    alive: bool,
    /// Body ran empty: head conclusions recorded, rule left the head
    /// lists, and no emptiness event may fire for it again.
    consumed: bool,
}

#[derive(Default, Clone, Copy)]
struct LitRec {
    flags: u16,
    is_fact: bool,
    strict_rules: u32,
    defeasible_rules: u32,
    defeater_rules: u32,
    strict_head_list: u32,
    nonstrict_head_list: u32,
    strict_occ_list: u32,
    nonstrict_occ_list: u32,
}

fn bit(tag: Tag) -> u16 {
    1 << match tag {
        Tag::PlusDelta => 0,
        Tag::MinusDelta => 1,
        Tag::PlusPartial => 2,
        Tag::MinusPartial => 3,
        Tag::PlusSigma => 4,
        Tag::MinusSigma => 5,
        Tag::PlusTau => 6,
        Tag::MinusTau => 7,
    }
}

pub struct Engine<'t> {
    theory: &'t Theory,
    interner: LitInterner,
    lits: Vec<LitRec>,
    rules: Vec<RuleRec>,
    occs: Vec<OccNode>,
    pending: VecDeque<(Tag, u32)>,
    mode: QueueMode,
    order: Vec<(Tag, u32)>,
    stats: EngineStats,
    initialized: bool,
}

impl<'t> Engine<'t> {
    pub fn build(theory: &'t Theory) -> Result<Self, EngineError> {
        Self::build_with_mode(theory, QueueMode::Fifo)
    }

    pub fn build_with_mode(theory: &'t Theory, mode: QueueMode) -> Result<Self, EngineError> {
        if !theory.superiority().is_empty() {
            return Err(EngineError::NotEngineForm);
        }
        let interner = LitInterner::from_theory(theory);
        let universe = interner.universe();
        let mut lits = vec![
            LitRec {
                strict_head_list: NIL,
                nonstrict_head_list: NIL,
                strict_occ_list: NIL,
                nonstrict_occ_list: NIL,
                ..LitRec::default()
            };
            universe
        ];
        for fact in theory.facts() {
            lits[interner.id(fact) as usize].is_fact = true;
        }

        let mut rules: Vec<RuleRec> = Vec::with_capacity(theory.rules().len());
        let mut occs: Vec<OccNode> = Vec::new();
        for (i, rule) in theory.rules().iter().enumerate() {
            let head = interner.id(rule.head());
            let idx = rules.len() as u32;
            let strict = rule.is_strict();

            // Head list membership and per-kind counters.
            let hrec = &mut lits[head as usize];
            let list = if strict {
                &mut hrec.strict_head_list
            } else {
                &mut hrec.nonstrict_head_list
            };
            let next_head = *list;
            *list = idx;
            match rule.kind() {
                RuleKind::Strict => hrec.strict_rules += 1,
                RuleKind::Defeasible => hrec.defeasible_rules += 1,
                RuleKind::Defeater => hrec.defeater_rules += 1,
            }

            let mut rec = RuleRec {
                source: i as u32,
                kind: rule.kind(),
                head,
                body_head: NIL,
                body_len: 0,
                prev_head: NIL,
                next_head,
                alive: true,
                consumed: false,
            };
            if next_head != NIL {
                rules[next_head as usize].prev_head = idx;
            }

            // Body occurrence nodes, linked into the body list and into
            // the literal's strict or non-strict occurrence list.
            for lit in rule.body() {
                let q = interner.id(lit);
                let node = occs.len() as u32;
                let occ_list = if strict {
                    &mut lits[q as usize].strict_occ_list
                } else {
                    &mut lits[q as usize].nonstrict_occ_list
                };
                let next_occ = *occ_list;
                *occ_list = node;
                let next_body = rec.body_head;
                occs.push(OccNode {
                    lit: q,
                    rule: idx,
                    prev_body: NIL,
                    next_body,
                    next_occ,
                    alive: true,
                });
                if next_body != NIL {
                    occs[next_body as usize].prev_body = node;
                }
                rec.body_head = node;
                rec.body_len += 1;
            }
            rules.push(rec);
        }

        let stats = EngineStats {
            initial_occurrences: occs.len(),
            universe,
            rules: rules.len(),
            ..EngineStats::default()
        };
        Ok(Engine {
            theory,
            interner,
            lits,
            rules,
            occs,
            pending: VecDeque::new(),
            mode,
            order: Vec::new(),
            stats,
            initialized: false,
        })
    }

    fn has(&self, tag: Tag, q: u32) -> bool {
        self.lits[q as usize].flags & bit(tag) != 0
    }

    /// Records a tag unless it, or its opposite, is already recorded:
    /// the first conclusion per tag class wins and later attempts are
    /// no-ops. External tags enter the pending queue; every record runs
    /// the constant-time inference checks it could have enabled.
    fn record(&mut self, tag: Tag, q: u32) {
        let flags = &mut self.lits[q as usize].flags;
        if *flags & (bit(tag) | bit(tag.opposite())) != 0 {
            return;
        }
        *flags |= bit(tag);
        self.order.push((tag, q));
        if tag.is_external() {
            self.pending.push_back((tag, q));
            self.stats.enqueued += 1;
        }
        let c = LitInterner::complement(q);
        match tag {
            Tag::PlusDelta => {
                self.try_positive(q);
                self.try_negative(c);
            }
            Tag::MinusDelta => {
                self.try_negative(q);
                self.try_positive(c);
            }
            Tag::PlusSigma => self.try_positive(q),
            Tag::MinusSigma => self.try_negative(q),
            Tag::PlusTau => self.try_negative(c),
            Tag::MinusTau => self.try_positive(c),
            Tag::PlusPartial | Tag::MinusPartial => {}
        }
    }

    /// `+∂q` the moment `+Δq` holds, or support stands unopposed:
    /// `{+σq, −Δ~q, −τ~q}` all recorded.
    fn try_positive(&mut self, q: u32) {
        let c = LitInterner::complement(q);
        if self.has(Tag::PlusDelta, q)
            || (self.has(Tag::PlusSigma, q)
                && self.has(Tag::MinusDelta, c)
                && self.has(Tag::MinusTau, c))
        {
            self.record(Tag::PlusPartial, q);
        }
    }

    /// `−∂q` the moment `−Δq` holds together with one of: no support
    /// left (`−σq`), the complement definite (`+Δ~q`), or an applicable
    /// attacker (`+τ~q`).
    fn try_negative(&mut self, q: u32) {
        let c = LitInterner::complement(q);
        if self.has(Tag::MinusDelta, q)
            && (self.has(Tag::MinusSigma, q)
                || self.has(Tag::PlusDelta, c)
                || self.has(Tag::PlusTau, c))
        {
            self.record(Tag::MinusPartial, q);
        }
    }

    /// Takes a rule whose body just ran empty out of the head lists and
    /// records its head conclusions. Fires at most once per rule.
    fn consume(&mut self, rule: u32) {
        let rec = &mut self.rules[rule as usize];
        debug_assert!(rec.alive && !rec.consumed && rec.body_len == 0);
        rec.consumed = true;
        let (head, kind) = (rec.head, rec.kind);
        self.unlink_from_head_list(rule);
        match kind {
            RuleKind::Strict => {
                self.record(Tag::PlusDelta, head);
                self.record(Tag::PlusPartial, head);
                self.record(Tag::PlusSigma, head);
                self.record(Tag::PlusTau, head);
            }
            RuleKind::Defeasible => {
                self.record(Tag::PlusSigma, head);
                self.record(Tag::PlusTau, head);
            }
            RuleKind::Defeater => {
                self.record(Tag::PlusTau, head);
            }
        }
    }

    fn unlink_from_head_list(&mut self, rule: u32) {
        let rec = &self.rules[rule as usize];
        let (head, strict, prev, next) = (
            rec.head,
            rec.kind == RuleKind::Strict,
            rec.prev_head,
            rec.next_head,
        );
        if prev != NIL {
            self.rules[prev as usize].next_head = next;
        } else {
            let hrec = &mut self.lits[head as usize];
            if strict {
                hrec.strict_head_list = next;
            } else {
                hrec.nonstrict_head_list = next;
            }
        }
        if next != NIL {
            self.rules[next as usize].prev_head = prev;
        }
        let rec = &mut self.rules[rule as usize];
        rec.prev_head = NIL;
        rec.next_head = NIL;
    }

    /// Seeds the queue from the theory's immediate content: facts and
    /// empty-bodied rules settle positively; literals with no rules of
    /// the relevant kinds settle negatively. First-wins recording makes
    /// the seeding order irrelevant to the external conclusions.
    pub fn initialize(&mut self) {
        assert!(!self.initialized, "engine state is single-run");
        self.initialized = true;
        let fact_ids: Vec<u32> = self
            .theory
            .facts()
            .iter()
            .map(|f| self.interner.id(f))
            .collect();
        for q in fact_ids {
            self.record(Tag::PlusDelta, q);
            self.record(Tag::PlusPartial, q);
            self.record(Tag::PlusSigma, q);
            self.record(Tag::PlusTau, q);
        }
        for rule in 0..self.rules.len() as u32 {
            let rec = &self.rules[rule as usize];
            if rec.alive && !rec.consumed && rec.body_len == 0 {
                self.consume(rule);
            }
        }
        for q in 0..self.lits.len() as u32 {
            let rec = &self.lits[q as usize];
            let (fact, s, d, dft) = (
                rec.is_fact,
                rec.strict_rules,
                rec.defeasible_rules,
                rec.defeater_rules,
            );
            if !fact && s == 0 {
                self.record(Tag::MinusDelta, q);
            }
            if d == 0 {
                self.record(Tag::MinusSigma, q);
            }
            if d == 0 && dft == 0 {
                self.record(Tag::MinusTau, q);
            }
        }
    }

    /// Empties the strict or non-strict occurrence list of p, unlinking
    /// each node from its rule's body; a body running empty consumes
    /// the rule.
    fn delete_occurrences(&mut self, p: u32, strict: bool) {
        let rec = &mut self.lits[p as usize];
        let mut node = if strict {
            std::mem::replace(&mut rec.strict_occ_list, NIL)
        } else {
            std::mem::replace(&mut rec.nonstrict_occ_list, NIL)
        };
        while node != NIL {
            let next = self.occs[node as usize].next_occ;
            if self.occs[node as usize].alive {
                self.occs[node as usize].alive = false;
                self.stats.occurrence_deletions += 1;
                let rule = self.occs[node as usize].rule;
                let rrec = &self.rules[rule as usize];
                if rrec.alive && !rrec.consumed {
                    self.unlink_from_body(node);
                    if self.rules[rule as usize].body_len == 0 {
                        self.consume(rule);
                    }
                }
            }
            node = next;
        }
    }

    fn unlink_from_body(&mut self, node: u32) {
        let (rule, prev, next) = {
            let n = &self.occs[node as usize];
            (n.rule, n.prev_body, n.next_body)
        };
        if prev != NIL {
            self.occs[prev as usize].next_body = next;
        } else {
            self.rules[rule as usize].body_head = next;
        }
        if next != NIL {
            self.occs[next as usize].prev_body = prev;
        }
        self.rules[rule as usize].body_len -= 1;
    }

    /// Deletes every live rule of the given kind class with p in its
    /// body, firing the head's ran-out events as counters hit zero.
    /// Refuted facts cannot happen (a fact's literal never records a
    /// negative definite conclusion), so the fact check guards only
    /// literals whose rules all died.
    fn delete_rules_with(&mut self, p: u32, strict: bool) {
        let rec = &mut self.lits[p as usize];
        let mut node = if strict {
            std::mem::replace(&mut rec.strict_occ_list, NIL)
        } else {
            std::mem::replace(&mut rec.nonstrict_occ_list, NIL)
        };
        while node != NIL {
            let next = self.occs[node as usize].next_occ;
            if self.occs[node as usize].alive {
                self.occs[node as usize].alive = false;
                self.stats.occurrence_deletions += 1;
                let rule = self.occs[node as usize].rule;
                let rrec = &self.rules[rule as usize];
                if rrec.alive && !rrec.consumed {
                    self.delete_rule(rule);
                }
            }
            node = next;
        }
    }

    fn delete_rule(&mut self, rule: u32) {
        self.rules[rule as usize].alive = false;
        self.stats.rule_deletions += 1;
        self.unlink_from_head_list(rule);
        let (head, kind) = (self.rules[rule as usize].head, self.rules[rule as usize].kind);
        let hrec = &mut self.lits[head as usize];
        match kind {
            RuleKind::Strict => {
                hrec.strict_rules -= 1;
                if hrec.strict_rules == 0 && !hrec.is_fact {
                    self.record(Tag::MinusDelta, head);
                }
            }
            RuleKind::Defeasible => {
                hrec.defeasible_rules -= 1;
                let (d, dft) = (hrec.defeasible_rules, hrec.defeater_rules);
                if d == 0 {
                    self.record(Tag::MinusSigma, head);
                }
                if d == 0 && dft == 0 {
                    self.record(Tag::MinusTau, head);
                }
            }
            RuleKind::Defeater => {
                hrec.defeater_rules -= 1;
                let (d, dft) = (hrec.defeasible_rules, hrec.defeater_rules);
                if d == 0 && dft == 0 {
                    self.record(Tag::MinusTau, head);
                }
            }
        }
    }

    /// Drains the pending queue, applying each conclusion's rule-set
    /// consequences. Idempotent deletions make the `+Δ`/`+∂` and
    /// `−Δ`/`−∂` overlaps harmless in either queue discipline.
    pub fn run(&mut self) {
        assert!(self.initialized, "initialize before running");
        loop {
            let (tag, p) = match self.mode {
                QueueMode::Fifo => match self.pending.pop_front() {
                    Some(item) => item,
                    None => break,
                },
                QueueMode::Lifo => match self.pending.pop_back() {
                    Some(item) => item,
                    None => break,
                },
            };
            self.stats.dequeued += 1;
            match tag {
                Tag::PlusDelta => {
                    self.delete_occurrences(p, true);
                    self.delete_occurrences(p, false);
                }
                Tag::PlusPartial => self.delete_occurrences(p, false),
                Tag::MinusDelta => self.delete_rules_with(p, true),
                Tag::MinusPartial => self.delete_rules_with(p, false),
                _ => unreachable!("only external tags are enqueued"),
            }
        }
        let s = &self.stats;
        assert!(
            s.occurrence_deletions <= s.initial_occurrences,
            "occurrence deletions exceed the occurrence count"
        );
        assert!(s.rule_deletions <= s.rules, "a rule was deleted twice");
        assert!(
            s.enqueued <= 8 * s.universe && s.dequeued == s.enqueued,
            "queue traffic exceeds its bound"
        );
    }

    /// Everything recorded, auxiliary tags included.
    pub fn conclusions(&self) -> ConclusionSet {
        let mut set = ConclusionSet::new(self.theory.atoms());
        for q in 0..self.lits.len() as u32 {
            for tag in Tag::ALL {
                if self.has(tag, q) {
                    set.add(tag, self.interner.literal(q));
                }
            }
        }
        set
    }

    /// The simplified theory left behind: facts, plus live rules that
    /// never fired, with their remaining body literals.
    pub fn residue(&self) -> Theory {
        let rules = self
            .rules
            .iter()
            .filter(|r| r.alive && !r.consumed)
            .map(|r| {
                let source = &self.theory.rules()[r.source as usize];
                let mut body = Vec::new();
                let mut node = r.body_head;
                while node != NIL {
                    body.push(self.interner.literal(self.occs[node as usize].lit));
                    node = self.occs[node as usize].next_body;
                }
                Rule::new(source.label(), source.kind(), body, source.head().clone())
            })
            .collect();
        Theory::new(self.theory.facts().iter().cloned(), rules, [])
            .expect("surviving labels stay unique")
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    /// Conclusions in recording order, materialized on demand; the
    /// engine itself only logs (tag, id) pairs.
    pub fn order(&self) -> Vec<TaggedConclusion> {
        self.order
            .iter()
            .map(|&(tag, q)| TaggedConclusion::new(tag, self.interner.literal(q)))
            .collect()
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Current length of a literal's strict or non-strict occurrence
    /// list (test inspection).
    pub fn occurrence_list_len(&self, lit: &Literal, strict: bool) -> usize {
        let rec = &self.lits[self.interner.id(lit) as usize];
        let mut node = if strict {
            rec.strict_occ_list
        } else {
            rec.nonstrict_occ_list
        };
        let mut n = 0;
        while node != NIL {
            if self.occs[node as usize].alive {
                n += 1;
            }
            node = self.occs[node as usize].next_occ;
        }
        n
    }

    /// Current length of a literal's strict or non-strict head-rule
    /// list (test inspection).
    pub fn head_list_len(&self, lit: &Literal, strict: bool) -> usize {
        let rec = &self.lits[self.interner.id(lit) as usize];
        let mut rule = if strict {
            rec.strict_head_list
        } else {
            rec.nonstrict_head_list
        };
        let mut n = 0;
        while rule != NIL {
            n += 1;
            rule = self.rules[rule as usize].next_head;
        }
        n
    }
}

/// The result of one complete engine run.
pub struct LinearRun {
    /// All recorded conclusions, auxiliary tags included.
    pub conclusions: ConclusionSet,
    pub residue: Theory,
    pub stats: EngineStats,
    pub order: Vec<TaggedConclusion>,
}

pub fn run_linear(theory: &Theory) -> Result<LinearRun, EngineError> {
    run_linear_with_mode(theory, QueueMode::Fifo)
}

pub fn run_linear_with_mode(theory: &Theory, mode: QueueMode) -> Result<LinearRun, EngineError> {
    let mut engine = Engine::build_with_mode(theory, mode)?;
    engine.initialize();
    engine.run();
    Ok(LinearRun {
        conclusions: engine.conclusions(),
        residue: engine.residue(),
        stats: *engine.stats(),
        order: engine.order(),
    })
}
