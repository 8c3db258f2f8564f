//! Spherical systems of generators, `Sigma(T)`, disjointness and the
//! ramification-structure verdict.

use serde::Serialize;

use crate::element::{Element, ElementSet};
use crate::group::FiniteGroup;

/// Why a tuple is not a spherical system of generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphericalFailure {
    Empty,
    TrivialEntry { position: usize },
    NotGenerating { generated_order: usize },
    ProductNotIdentity { product: Element },
}

/// Checks, in this order: no identity entry, the entries generate `G`, the
/// ordered product is `1`. Tuples of any positive length are accepted.
pub fn is_spherical_system(g: &FiniteGroup, t: &[Element]) -> Result<(), SphericalFailure> {
    if t.is_empty() {
        return Err(SphericalFailure::Empty);
    }
    if let Some(position) = t.iter().position(|e| e.is_identity()) {
        return Err(SphericalFailure::TrivialEntry { position });
    }
    let generated = g.generated_subgroup(t).len();
    if generated != g.order() {
        return Err(SphericalFailure::NotGenerating {
            generated_order: generated,
        });
    }
    let product = g.product(t);
    if !product.is_identity() {
        return Err(SphericalFailure::ProductNotIdentity { product });
    }
    Ok(())
}

/// Union of all conjugates of the cyclic subgroup `<a>`.
pub fn cyclic_class_union(g: &FiniteGroup, a: Element) -> ElementSet {
    let mut out = ElementSet::trivial(g.order());
    for c in g.conjugacy_class(a).iter() {
        if out.contains(c) {
            continue;
        }
        let mut x = c;
        while !x.is_identity() {
            out.insert(x);
            x = g.mul(x, c);
        }
    }
    out
}

/// `Sigma(T)`: union of the conjugates of the cyclic subgroups generated by the
/// entries of `T`. Always contains the identity.
pub fn sigma(g: &FiniteGroup, t: &[Element]) -> ElementSet {
    let mut out = ElementSet::trivial(g.order());
    for &a in t {
        if out.contains(a) {
            // Sigma is closed under powers and conjugation, so <a> is covered.
            continue;
        }
        out.union_with(&cyclic_class_union(g, a));
    }
    out
}

/// Shared nontrivial element of `Sigma(T1)` and `Sigma(T2)`, if any.
pub fn disjointness_witness(g: &FiniteGroup, t1: &[Element], t2: &[Element]) -> Option<Element> {
    let s1 = sigma(g, t1);
    let s2 = sigma(g, t2);
    s1.intersection(&s2).iter().find(|e| !e.is_identity())
}

pub fn are_disjoint(g: &FiniteGroup, t1: &[Element], t2: &[Element]) -> bool {
    disjointness_witness(g, t1, t2).is_none()
}

/// Which tuple a failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RamFailure {
    TooShort {
        side: Side,
        len: usize,
    },
    NotSpherical {
        side: Side,
        reason: SphericalFailure,
    },
    NotDisjoint {
        shared: Element,
    },
}

/// A validated pair of disjoint spherical systems, each of length at least 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamStructure {
    t1: Vec<Element>,
    t2: Vec<Element>,
    sigma1: ElementSet,
    sigma2: ElementSet,
}

impl RamStructure {
    pub fn t1(&self) -> &[Element] {
        &self.t1
    }

    pub fn t2(&self) -> &[Element] {
        &self.t2
    }

    pub fn size(&self) -> (usize, usize) {
        (self.t1.len(), self.t2.len())
    }

    pub fn sigma1(&self) -> &ElementSet {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &ElementSet {
        &self.sigma2
    }

    /// The same structure with the roles of the tuples exchanged.
    pub fn swapped(&self) -> RamStructure {
        RamStructure {
            t1: self.t2.clone(),
            t2: self.t1.clone(),
            sigma1: self.sigma2.clone(),
            sigma2: self.sigma1.clone(),
        }
    }
}

/// Validates `(T1, T2)` and reports the first failing condition: length,
/// then each tuple's spherical checks, then disjointness.
pub fn check_ramification(
    g: &FiniteGroup,
    t1: &[Element],
    t2: &[Element],
) -> Result<RamStructure, RamFailure> {
    for (side, t) in [(Side::First, t1), (Side::Second, t2)] {
        if t.len() < 3 {
            return Err(RamFailure::TooShort { side, len: t.len() });
        }
    }
    for (side, t) in [(Side::First, t1), (Side::Second, t2)] {
        is_spherical_system(g, t).map_err(|reason| RamFailure::NotSpherical { side, reason })?;
    }
    let sigma1 = sigma(g, t1);
    let sigma2 = sigma(g, t2);
    if let Some(shared) = sigma1
        .intersection(&sigma2)
        .iter()
        .find(|e| !e.is_identity())
    {
        return Err(RamFailure::NotDisjoint { shared });
    }
    Ok(RamStructure {
        t1: t1.to_vec(),
        t2: t2.to_vec(),
        sigma1,
        sigma2,
    })
}
