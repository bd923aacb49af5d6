//! Tagged conclusions and conclusion sets.
//!
//! The four external tags record definite provability (`+D`/`-D`) and
//! defeasible provability (`+d`/`-d`). Two auxiliary tag classes are
//! engine-internal: `+s`/`-s` tracks tentative support through defeasible
//! rules, `+t`/`-t` tracks applicable attack through defeasible rules and
//! defeaters. Auxiliary tags only surface under an extended-output flag.

use std::collections::BTreeSet;
use std::fmt;

use crate::theory::{Atom, Literal};

/// The class of a tag, sign aside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagClass {
    Delta,
    Partial,
    Sigma,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    PlusDelta,
    MinusDelta,
    PlusPartial,
    MinusPartial,
    PlusSigma,
    MinusSigma,
    PlusTau,
    MinusTau,
}

impl Tag {
    pub const ALL: [Tag; 8] = [
        Tag::PlusDelta,
        Tag::MinusDelta,
        Tag::PlusPartial,
        Tag::MinusPartial,
        Tag::PlusSigma,
        Tag::MinusSigma,
        Tag::PlusTau,
        Tag::MinusTau,
    ];

    pub fn class(self) -> TagClass {
        match self {
            Tag::PlusDelta | Tag::MinusDelta => TagClass::Delta,
            Tag::PlusPartial | Tag::MinusPartial => TagClass::Partial,
            Tag::PlusSigma | Tag::MinusSigma => TagClass::Sigma,
            Tag::PlusTau | Tag::MinusTau => TagClass::Tau,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(
            self,
            Tag::PlusDelta | Tag::PlusPartial | Tag::PlusSigma | Tag::PlusTau
        )
    }

    /// The sign-flipped tag of the same class.
    pub fn opposite(self) -> Tag {
        match self {
            Tag::PlusDelta => Tag::MinusDelta,
            Tag::MinusDelta => Tag::PlusDelta,
            Tag::PlusPartial => Tag::MinusPartial,
            Tag::MinusPartial => Tag::PlusPartial,
            Tag::PlusSigma => Tag::MinusSigma,
            Tag::MinusSigma => Tag::PlusSigma,
            Tag::PlusTau => Tag::MinusTau,
            Tag::MinusTau => Tag::PlusTau,
        }
    }

    /// External tags are the deliverable of inference; the rest are
    /// auxiliary bookkeeping.
    pub fn is_external(self) -> bool {
        matches!(self.class(), TagClass::Delta | TagClass::Partial)
    }

    pub fn rendered(self) -> &'static str {
        match self {
            Tag::PlusDelta => "+D",
            Tag::MinusDelta => "-D",
            Tag::PlusPartial => "+d",
            Tag::MinusPartial => "-d",
            Tag::PlusSigma => "+s",
            Tag::MinusSigma => "-s",
            Tag::PlusTau => "+t",
            Tag::MinusTau => "-t",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rendered())
    }
}

/// One inference result: a tag applied to a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedConclusion {
    pub tag: Tag,
    pub literal: Literal,
}

impl TaggedConclusion {
    pub fn new(tag: Tag, literal: Literal) -> Self {
        TaggedConclusion { tag, literal }
    }
}

impl fmt::Display for TaggedConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tag, self.literal)
    }
}

/// A set of tagged conclusions together with the language it speaks about
/// (the atom alphabet of the source theory).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConclusionSet {
    conclusions: BTreeSet<TaggedConclusion>,
    language: BTreeSet<Atom>,
}

impl ConclusionSet {
    pub fn new(language: BTreeSet<Atom>) -> Self {
        ConclusionSet {
            conclusions: BTreeSet::new(),
            language,
        }
    }

    pub fn insert(&mut self, conclusion: TaggedConclusion) {
        self.conclusions.insert(conclusion);
    }

    pub fn add(&mut self, tag: Tag, literal: Literal) {
        self.insert(TaggedConclusion::new(tag, literal));
    }

    pub fn contains(&self, tag: Tag, literal: &Literal) -> bool {
        self.conclusions
            .contains(&TaggedConclusion::new(tag, literal.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &TaggedConclusion> {
        self.conclusions.iter()
    }

    pub fn len(&self) -> usize {
        self.conclusions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conclusions.is_empty()
    }

    pub fn language(&self) -> &BTreeSet<Atom> {
        &self.language
    }

    /// Conclusions restricted to the given alphabet, which becomes the
    /// language of the result.
    pub fn restrict(&self, atoms: &BTreeSet<Atom>) -> ConclusionSet {
        ConclusionSet {
            conclusions: self
                .conclusions
                .iter()
                .filter(|c| atoms.contains(c.literal.atom()))
                .cloned()
                .collect(),
            language: atoms.clone(),
        }
    }

    /// Only the external (delta and partial) conclusions.
    pub fn external_only(&self) -> ConclusionSet {
        ConclusionSet {
            conclusions: self
                .conclusions
                .iter()
                .filter(|c| c.tag.is_external())
                .cloned()
                .collect(),
            language: self.language.clone(),
        }
    }

    /// Coherence: no literal carries both signs of the same tag class.
    /// Returns the first offender otherwise.
    pub fn check_coherence(&self) -> Result<(), TaggedConclusion> {
        for c in &self.conclusions {
            if c.tag.is_positive()
                && self
                    .conclusions
                    .contains(&TaggedConclusion::new(c.tag.opposite(), c.literal.clone()))
            {
                return Err(c.clone());
            }
        }
        Ok(())
    }

    /// Subsumption for closed (fully computed) sets: `+D q` forces `+d q`
    /// and `-d q` forces `-D q`. Returns the first violation.
    pub fn check_subsumption(&self) -> Result<(), TaggedConclusion> {
        for c in &self.conclusions {
            let needs = match c.tag {
                Tag::PlusDelta => Tag::PlusPartial,
                Tag::MinusPartial => Tag::MinusDelta,
                _ => continue,
            };
            if !self.contains(needs, &c.literal) {
                return Err(c.clone());
            }
        }
        Ok(())
    }
}

impl FromIterator<TaggedConclusion> for ConclusionSet {
    /// Builds a set whose language is exactly the atoms mentioned.
    fn from_iter<I: IntoIterator<Item = TaggedConclusion>>(iter: I) -> Self {
        let conclusions: BTreeSet<TaggedConclusion> = iter.into_iter().collect();
        let language = conclusions.iter().map(|c| c.literal.atom().clone()).collect();
        ConclusionSet {
            conclusions,
            language,
        }
    }
}
