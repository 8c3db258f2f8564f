//! Incremental generation tests.
//!
//! A set of elements generates a nilpotent group `G` iff its image generates
//! `G/Phi(G)`, which is a product of elementary abelian groups. Subgroups of
//! that quotient are interned so that "add one element" is a table lookup and
//! the number of further elements needed is exact. For other groups the
//! tracker falls back to closures inside `G` itself.

use std::collections::HashMap;

use crate::element::{Element, ElementSet};
use crate::group::FiniteGroup;
use crate::invariants::{frattini_nilpotent, is_nilpotent};
use crate::numtheory::{factorize, valuation};

/// Interned subgroup of the generation quotient.
pub type SubgroupId = u32;

const UNKNOWN: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct GenerationTracker {
    quotient: FiniteGroup,
    proj: Vec<Element>,
    /// `(p, d_p)` for the elementary abelian quotient; `None` for
    /// non-nilpotent groups.
    ranks: Option<Vec<(u64, u32)>>,
    subgroups: Vec<ElementSet>,
    index: HashMap<ElementSet, SubgroupId>,
    joins: Vec<Vec<u32>>,
    deficits: Vec<u32>,
}

impl GenerationTracker {
    pub fn new(g: &FiniteGroup) -> GenerationTracker {
        let nilpotent = g.order() == 1 || is_nilpotent(g);
        let (quotient, proj, ranks) = if nilpotent {
            let phi = if g.order() == 1 {
                ElementSet::trivial(1)
            } else {
                frattini_nilpotent(g).expect("nilpotent group has a Frattini subgroup")
            };
            let q = g.quotient(&phi).expect("Frattini subgroup is normal");
            let proj = g.elements().map(|x| q.project(x)).collect();
            let qg = q.group().clone();
            let ranks = factorize(qg.order() as u64);
            (qg, proj, Some(ranks))
        } else {
            (g.clone(), g.elements().collect(), None)
        };
        let mut t = GenerationTracker {
            quotient,
            proj,
            ranks,
            subgroups: Vec::new(),
            index: HashMap::new(),
            joins: Vec::new(),
            deficits: Vec::new(),
        };
        let trivial = ElementSet::trivial(t.quotient.order());
        t.intern(trivial);
        t
    }

    /// The group in which generation is decided (`G/Phi(G)` or `G`).
    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn image(&self, x: Element) -> Element {
        self.proj[x.index()]
    }

    pub fn trivial(&self) -> SubgroupId {
        0
    }

    pub fn subgroup(&self, id: SubgroupId) -> &ElementSet {
        &self.subgroups[id as usize]
    }

    pub fn is_full(&self, id: SubgroupId) -> bool {
        self.deficits[id as usize] == 0
    }

    /// Least number of further elements needed to generate `G`. Exact for
    /// nilpotent groups; for other groups only distinguishes 0 from "some".
    pub fn deficit(&self, id: SubgroupId) -> u32 {
        self.deficits[id as usize]
    }

    pub fn interned_count(&self) -> usize {
        self.subgroups.len()
    }

    fn intern(&mut self, set: ElementSet) -> SubgroupId {
        if let Some(&id) = self.index.get(&set) {
            return id;
        }
        let id = self.subgroups.len() as SubgroupId;
        let size = set.len();
        let deficit = match &self.ranks {
            Some(ranks) => ranks
                .iter()
                .map(|&(p, d)| d.saturating_sub(valuation(size as u64, p)))
                .max()
                .unwrap_or(0),
            None => u32::from(size != self.quotient.order()),
        };
        self.index.insert(set.clone(), id);
        self.subgroups.push(set);
        self.joins.push(vec![UNKNOWN; self.quotient.order()]);
        self.deficits.push(deficit);
        id
    }

    /// Subgroup generated by `h` and the image of `x` in the quotient.
    pub fn join(&mut self, h: SubgroupId, x: Element) -> SubgroupId {
        self.join_image(h, self.image(x))
    }

    /// As [`join`](Self::join) for an element already in the quotient.
    pub fn join_image(&mut self, h: SubgroupId, q: Element) -> SubgroupId {
        let cached = self.joins[h as usize][q.index()];
        if cached != UNKNOWN {
            return cached;
        }
        let id = if self.subgroups[h as usize].contains(q) {
            h
        } else {
            let mut set = self.subgroups[h as usize].clone();
            self.quotient.extend_closure(&mut set, &[q]);
            self.intern(set)
        };
        self.joins[h as usize][q.index()] = id;
        id
    }

    /// Image of `<items>` in the quotient.
    pub fn span(&mut self, items: &[Element]) -> SubgroupId {
        items.iter().fold(self.trivial(), |h, &x| self.join(h, x))
    }

    pub fn generates(&mut self, items: &[Element]) -> bool {
        let h = self.span(items);
        self.is_full(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{bundled, c2_c4_cubed};

    #[test]
    fn deficits_in_abelian_groups() {
        let g = c2_c4_cubed();
        let mut t = GenerationTracker::new(&g);
        assert_eq!(t.quotient().order(), 16);
        assert_eq!(t.deficit(t.trivial()), 4);
        let x = g.abelian_element(&[0, 1, 0, 0]).unwrap();
        let h = t.join(t.trivial(), x);
        assert_eq!(t.deficit(h), 3);
        // x^2 lies in the Frattini subgroup
        let h2 = t.join(h, g.pow(x, 2));
        assert_eq!(h2, h);
    }

    #[test]
    fn mixed_primes_count_the_worst_prime() {
        let g = FiniteGroup::abelian(&[6, 6, 2]).unwrap();
        let t = GenerationTracker::new(&g);
        assert_eq!(t.deficit(t.trivial()), 3);
        let mut t = t;
        let a = g.abelian_element(&[1, 0, 0]).unwrap();
        let h = t.join(t.trivial(), a);
        assert_eq!(t.deficit(h), 2);
    }

    #[test]
    fn agrees_with_closure_everywhere() {
        for g in [
            bundled("q8"),
            bundled("d4"),
            bundled("s3"),
            FiniteGroup::heisenberg(3).unwrap(),
            FiniteGroup::abelian(&[2, 2, 4]).unwrap(),
        ] {
            let mut t = GenerationTracker::new(&g);
            let elems: Vec<Element> = g.elements().collect();
            for &a in &elems {
                for &b in &elems {
                    let full = g.generated_subgroup(&[a, b]).len() == g.order();
                    assert_eq!(t.generates(&[a, b]), full, "{} {a:?} {b:?}", g.describe());
                }
            }
        }
    }
}
