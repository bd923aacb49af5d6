//! Dense integer ids for the literals of one theory.
//!
//! Atoms are numbered in sorted order; a literal's id is twice its atom
//! id plus a polarity bit, so complementation is a single xor and an
//! array indexed by literal id covers the whole universe.

use std::collections::HashMap;

use crate::theory::{Atom, Literal, Theory};

pub(crate) struct LitInterner {
    atoms: Vec<Atom>,
    ids: HashMap<Atom, u32>,
}

impl LitInterner {
    pub fn from_theory(theory: &Theory) -> Self {
        let atoms: Vec<Atom> = theory.atoms().into_iter().collect();
        let ids = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        LitInterner { atoms, ids }
    }

    /// Number of literal ids: two per atom.
    pub fn universe(&self) -> usize {
        self.atoms.len() * 2
    }

    pub fn id(&self, lit: &Literal) -> u32 {
        let atom = self.ids[lit.atom()];
        atom * 2 + if lit.is_positive() { 0 } else { 1 }
    }

    pub fn literal(&self, id: u32) -> Literal {
        let atom = self.atoms[(id / 2) as usize].clone();
        Literal::new(atom, id.is_multiple_of(2))
    }

    pub fn complement(id: u32) -> u32 {
        id ^ 1
    }
}
