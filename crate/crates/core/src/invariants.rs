//! Invariants of p-groups and nilpotent groups: exponent, `Omega_i`, agemo,
//! derived and Frattini subgroups, `d(G)`, power images, the semi-`p^i`-abelian
//! test and the Sylow decomposition.

use serde::Serialize;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::numtheory::{factorize, prime_power, valuation};

/// The prime of a nontrivial p-group.
pub fn pgroup_prime(g: &FiniteGroup) -> Result<u64> {
    prime_power(g.order() as u64)
        .map(|(p, _)| p)
        .ok_or(Error::NotAPGroup(g.order()))
}

/// Least common multiple of the element orders.
pub fn exponent(g: &FiniteGroup) -> u64 {
    g.lcm_of_orders()
}

/// `e` with `exp G = p^e`, for a p-group.
pub fn exponent_log(g: &FiniteGroup) -> Result<u32> {
    let p = pgroup_prime(g)?;
    Ok(valuation(exponent(g), p))
}

fn level_power(g: &FiniteGroup, i: u32) -> Result<u64> {
    let p = pgroup_prime(g)?;
    // Beyond the exponent every p^i-th power is trivial; cap to avoid overflow.
    let e = exponent_log(g)?;
    Ok(p.pow(i.min(e)))
}

/// `x -> x^{p^i}` for every element.
pub fn power_map(g: &FiniteGroup, i: u32) -> Result<Vec<Element>> {
    let q = level_power(g, i)? as i64;
    Ok(g.elements().map(|x| g.pow(x, q)).collect())
}

/// Raw torsion set `{x : x^{p^i} = 1}` (not necessarily a subgroup).
pub fn torsion_set(g: &FiniteGroup, i: u32) -> Result<ElementSet> {
    let pw = power_map(g, i)?;
    Ok(ElementSet::from_elements(
        g.order(),
        g.elements().filter(|x| pw[x.index()].is_identity()),
    ))
}

/// `Omega_i(G) = <x : x^{p^i} = 1>`.
pub fn omega(g: &FiniteGroup, i: u32) -> Result<ElementSet> {
    let t = torsion_set(g, i)?;
    Ok(g.generated_subgroup(&t.to_vec()))
}

/// The literal set `{x^{p^i} : x in G}`.
pub fn power_image(g: &FiniteGroup, i: u32) -> Result<ElementSet> {
    let pw = power_map(g, i)?;
    Ok(ElementSet::from_elements(g.order(), pw))
}

/// `G^{p^i} = <x^{p^i}>`.
pub fn agemo(g: &FiniteGroup, i: u32) -> Result<ElementSet> {
    let img = power_image(g, i)?;
    Ok(g.generated_subgroup(&img.to_vec()))
}

/// `G'`, generated by all commutators.
pub fn derived_subgroup(g: &FiniteGroup) -> ElementSet {
    let comms = ElementSet::from_elements(
        g.order(),
        g.elements()
            .flat_map(|a| g.elements().map(move |b| (a, b)))
            .map(|(a, b)| g.commutator(a, b)),
    );
    let d = g.generated_subgroup(&comms.to_vec());
    debug_assert!(g.is_normal(&d).unwrap_or(false));
    d
}

/// `Phi(G) = G' G^p` for a p-group.
pub fn frattini(g: &FiniteGroup) -> Result<ElementSet> {
    let mut phi = agemo(g, 1)?;
    let derived = derived_subgroup(g);
    g.extend_closure(&mut phi, &derived.to_vec());
    Ok(phi)
}

/// Frattini subgroup of a nilpotent group, the product of the Frattini
/// subgroups of its Sylow factors.
pub fn frattini_nilpotent(g: &FiniteGroup) -> Result<ElementSet> {
    let mut phi = ElementSet::trivial(g.order());
    for f in sylow_decomposition(g)? {
        let local = frattini(&f.group)?;
        let lifted: Vec<Element> = local.iter().map(|x| f.embed(x)).collect();
        g.extend_closure(&mut phi, &lifted);
    }
    Ok(phi)
}

/// `d(G)`: for p-groups `log_p |G : Phi(G)|`, for nilpotent groups the
/// maximum over the Sylow factors.
pub fn min_generators(g: &FiniteGroup) -> Result<usize> {
    if g.order() == 1 {
        return Ok(0);
    }
    if let Ok(p) = pgroup_prime(g) {
        let phi = frattini(g)?;
        return Ok(valuation((g.order() / phi.len()) as u64, p) as usize);
    }
    let factors = sylow_decomposition(g)?;
    factors
        .iter()
        .map(|f| min_generators(&f.group))
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiAbelianVerdict {
    pub level: u32,
    pub holds: bool,
    /// A pair `(x, y)` on which the biconditional fails.
    pub witness: Option<(Element, Element)>,
}

/// Checks `x^{p^i} = y^{p^i} <=> (x y^-1)^{p^i} = 1` over all pairs.
pub fn is_semi_abelian(g: &FiniteGroup, i: u32) -> Result<SemiAbelianVerdict> {
    let pw = power_map(g, i)?;
    for x in g.elements() {
        for y in g.elements() {
            let same_power = pw[x.index()] == pw[y.index()];
            let quotient_dies = pw[g.mul(x, g.inv(y)).index()].is_identity();
            if same_power != quotient_dies {
                return Ok(SemiAbelianVerdict {
                    level: i,
                    holds: false,
                    witness: Some((x, y)),
                });
            }
        }
    }
    Ok(SemiAbelianVerdict {
        level: i,
        holds: true,
        witness: None,
    })
}

/// Sylow p-subgroup of a nilpotent group, rebuilt as a standalone group.
#[derive(Debug, Clone)]
pub struct SylowFactor {
    pub p: u64,
    pub group: FiniteGroup,
    /// Parent element for each factor element.
    embedding: Vec<Element>,
    /// Factor element for each parent element of p-power order.
    index_in_factor: Vec<Option<Element>>,
    /// Exponent `u` with `g^u` the p-part of `g`.
    part_exponent: u64,
}

impl SylowFactor {
    pub fn embed(&self, x: Element) -> Element {
        self.embedding[x.index()]
    }

    pub fn carrier(&self, parent_order: usize) -> ElementSet {
        ElementSet::from_elements(parent_order, self.embedding.iter().copied())
    }

    /// p-part of a parent element, as an element of the factor. This is the
    /// projection homomorphism onto the factor.
    pub fn component(&self, parent: &FiniteGroup, g: Element) -> Element {
        let part = parent.pow(g, self.part_exponent as i64);
        self.index_in_factor[part.index()].expect("p-part lies in the Sylow subgroup")
    }
}

/// Decomposes a nilpotent group into its Sylow subgroups, failing with
/// `NotNilpotent` when some set of p-power-order elements is not a subgroup
/// of full p-part order.
pub fn sylow_decomposition(g: &FiniteGroup) -> Result<Vec<SylowFactor>> {
    let n = g.order() as u64;
    let primes = factorize(n);
    if primes.len() == 1 {
        let (p, _) = primes[0];
        return Ok(vec![SylowFactor {
            p,
            group: g.clone(),
            embedding: g.elements().collect(),
            index_in_factor: g.elements().map(Some).collect(),
            part_exponent: 1,
        }]);
    }
    let mut out = Vec::new();
    for &(p, k) in &primes {
        let pk = p.pow(k);
        let members: Vec<Element> = g
            .elements()
            .filter(|&x| {
                prime_power(g.element_order(x) as u64).map_or(x.is_identity(), |(q, _)| q == p)
            })
            .collect();
        if members.len() as u64 != pk {
            return Err(Error::NotNilpotent);
        }
        let mut index_in_factor = vec![None; g.order()];
        for (i, &x) in members.iter().enumerate() {
            index_in_factor[x.index()] = Some(Element(i as u32));
        }
        let mut table = Vec::with_capacity(members.len());
        for &a in &members {
            let mut row = Vec::with_capacity(members.len());
            for &b in &members {
                match index_in_factor[g.mul(a, b).index()] {
                    Some(c) => row.push(c.0),
                    None => return Err(Error::NotNilpotent),
                }
            }
            table.push(row);
        }
        let names = members.iter().map(|&x| g.render(x)).collect();
        let group = FiniteGroup::from_table(table, Some(names))?;
        let m = n / pk;
        // u = 1 mod p^k, u = 0 mod m
        let part_exponent = (0..pk)
            .map(|t| t * m)
            .find(|u| u % pk == 1)
            .expect("CRT solution exists for coprime moduli");
        out.push(SylowFactor {
            p,
            group,
            embedding: members,
            index_in_factor,
            part_exponent,
        });
    }
    Ok(out)
}

pub fn is_nilpotent(g: &FiniteGroup) -> bool {
    sylow_decomposition(g).is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PGroupClass {
    pub abelian: bool,
    pub powerful: bool,
    pub p_central: bool,
    pub semi_abelian_at_e_minus_1: bool,
}

/// Abelian, powerful, generalized p-central, and semi-`p^{e-1}`-abelian
/// flags.
pub fn classify_pgroup(g: &FiniteGroup) -> Result<PGroupClass> {
    let p = pgroup_prime(g)?;
    let e = exponent_log(g)?;
    let derived = derived_subgroup(g);
    let powerful = if p == 2 {
        derived.is_subset(&agemo(g, 2)?)
    } else {
        derived.is_subset(&agemo(g, 1)?)
    };
    let series = g.upper_central_series();
    let z = |i: usize| &series[i.min(series.len() - 1)];
    let p_central = if p == 2 {
        omega(g, 2)?.is_subset(z(1))
    } else {
        omega(g, 1)?.is_subset(z(p as usize - 2))
    };
    Ok(PGroupClass {
        abelian: g.is_abelian(),
        powerful,
        p_central,
        semi_abelian_at_e_minus_1: is_semi_abelian(g, e.saturating_sub(1))?.holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PGroupProfile {
    pub order: usize,
    pub p: u64,
    pub e: u32,
    pub d: usize,
    /// `|{g^{p^i}}|` for `i = 0..=e`.
    pub power_image_sizes: Vec<usize>,
    /// `|G : Omega_i(G)|` for `i = 0..=e`.
    pub omega_indices: Vec<usize>,
    /// Semi-`p^i`-abelian flags for `i = 0..=e`; level 0 holds trivially.
    pub semi_abelian: Vec<bool>,
    pub classification: PGroupClass,
}

pub fn profile(g: &FiniteGroup) -> Result<PGroupProfile> {
    let p = pgroup_prime(g)?;
    let e = exponent_log(g)?;
    let mut power_image_sizes = Vec::new();
    let mut omega_indices = Vec::new();
    let mut semi_abelian = Vec::new();
    for i in 0..=e {
        power_image_sizes.push(power_image(g, i)?.len());
        omega_indices.push(g.order() / omega(g, i)?.len());
        semi_abelian.push(is_semi_abelian(g, i)?.holds);
    }
    Ok(PGroupProfile {
        order: g.order(),
        p,
        e,
        d: min_generators(g)?,
        power_image_sizes,
        omega_indices,
        semi_abelian,
        classification: classify_pgroup(g)?,
    })
}
