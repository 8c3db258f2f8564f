//! Finite groups with dense element indices and a precomputed multiplication
//! table.
//!
//! Every realization (abelian, Heisenberg, Cayley table, direct product,
//! quotient) is materialized into the same table form on construction, so
//! downstream code never dispatches on the realization for arithmetic. The
//! realization is kept for element rendering and parsing.

use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, lcm};

/// Largest group order the library will materialize.
pub const MAX_ORDER: usize = 4096;

#[derive(Clone)]
pub enum Realization {
    /// Product of cyclic groups `C_{n_1} x ... x C_{n_k}`; elements are
    /// exponent vectors, enumerated lexicographically (last coordinate fastest).
    Abelian {
        orders: Vec<u32>,
    },
    /// Triples over `Z/p` with `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
    Heisenberg {
        p: u32,
    },
    CayleyTable {
        names: Option<Vec<String>>,
    },
    /// Pairs `(l, r)` enumerated as `l * |right| + r`.
    DirectProduct {
        left: FiniteGroup,
        right: FiniteGroup,
    },
    /// Cosets of `kernel`, enumerated by their least representative.
    Quotient {
        parent: FiniteGroup,
        kernel: ElementSet,
    },
}

struct GroupData {
    realization: Realization,
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    element_order: Vec<u32>,
}

/// An immutable finite group. Cloning is cheap (shared storage).
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup({}, order {})",
            self.describe(),
            self.order()
        )
    }
}

#[derive(Deserialize)]
struct CayleyFile {
    order: usize,
    table: Vec<Vec<u32>>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    fn build(
        realization: Realization,
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order,
                max: MAX_ORDER,
            });
        }
        let mut table = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mul(a, b) as u16;
            }
        }
        Ok(Self::from_parts(realization, order, table))
    }

    fn from_parts(realization: Realization, order: usize, table: Vec<u16>) -> Self {
        let mut inverse = vec![0u16; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inverse[a] = row.iter().position(|&x| x == 0).unwrap_or(0) as u16;
        }
        let mut element_order = vec![1u32; order];
        for a in 1..order {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * order + a] as usize;
                k += 1;
            }
            element_order[a] = k;
        }
        FiniteGroup(Arc::new(GroupData {
            realization,
            order,
            table,
            inverse,
            element_order,
        }))
    }

    pub fn trivial() -> Self {
        Self::from_parts(Realization::Abelian { orders: vec![] }, 1, vec![0])
    }

    /// `C_{n_1} x ... x C_{n_k}` in the given factor order.
    pub fn abelian(orders: &[u64]) -> Result<Self> {
        let mut order: usize = 1;
        for &n in orders {
            if n < 2 {
                return Err(Error::InvalidOrder(n));
            }
            order = order.saturating_mul(n as usize);
            if order > MAX_ORDER {
                return Err(Error::OrderTooLarge {
                    order,
                    max: MAX_ORDER,
                });
            }
        }
        let orders: Vec<u32> = orders.iter().map(|&n| n as u32).collect();
        let strides = strides(&orders);
        let ords: Vec<usize> = orders.iter().map(|&n| n as usize).collect();
        let coords: Vec<Vec<usize>> = (0..order)
            .map(|a| {
                ords.iter()
                    .zip(&strides)
                    .map(|(&n, &s)| (a / s) % n)
                    .collect()
            })
            .collect();
        Self::build(Realization::Abelian { orders }, order, move |a, b| {
            let (ca, cb) = (&coords[a], &coords[b]);
            let mut out = 0usize;
            for i in 0..ords.len() {
                let mut c = ca[i] + cb[i];
                if c >= ords[i] {
                    c -= ords[i];
                }
                out += c * strides[i];
            }
            out
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::abelian(&[n])
    }

    pub fn elementary_abelian(p: u64, rank: usize) -> Result<Self> {
        Self::abelian(&vec![p; rank])
    }

    /// Heisenberg group of upper unitriangular 3x3 matrices over `Z/p`, `p` an
    /// odd prime.
    pub fn heisenberg(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let pu = p as usize;
        let order = pu * pu * pu;
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order,
                max: MAX_ORDER,
            });
        }
        Self::build(
            Realization::Heisenberg { p: p as u32 },
            order,
            move |x, y| {
                let (a, b, c) = (x / (pu * pu), (x / pu) % pu, x % pu);
                let (a2, b2, c2) = (y / (pu * pu), (y / pu) % pu, y % pu);
                let na = (a + a2) % pu;
                let nb = (b + b2) % pu;
                let nc = (c + c2 + a * b2) % pu;
                na * pu * pu + nb * pu + nc
            },
        )
    }

    /// Builds a group from an explicit multiplication table, verifying the
    /// group axioms. Row/column 0 must be the identity.
    pub fn from_table(table: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: String| Error::InvalidCayleyTable(m);
        if n == 0 {
            return Err(bad("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: MAX_ORDER,
            });
        }
        if let Some(names) = &names {
            if names.len() != n {
                return Err(bad(format!("{} names for {} elements", names.len(), n)));
            }
            let mut sorted: Vec<&String> = names.iter().collect();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(bad("duplicate element names".into()));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(bad(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(bad(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x as u16);
            }
        }
        for i in 0..n {
            if flat[i] as usize != i || flat[i * n] as usize != i {
                return Err(bad("index 0 is not the identity".into()));
            }
        }
        // Latin square: every row and column is a permutation.
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = flat[i * n + j] as usize;
                let c = flat[j * n + i] as usize;
                if row_seen[r] || col_seen[c] {
                    return Err(bad(format!("row or column {i} repeats an element")));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        check_associative(&flat, n).map_err(bad)?;
        Ok(Self::from_parts(
            Realization::CayleyTable { names },
            n,
            flat,
        ))
    }

    /// Parses the Cayley-table JSON format
    /// `{"order": n, "table": [[..]], "names": [..]}`.
    pub fn from_cayley_json(text: &str) -> Result<Self> {
        let file: CayleyFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidCayleyTable(format!("malformed JSON: {e}")))?;
        if file.order != file.table.len() {
            return Err(Error::InvalidCayleyTable(format!(
                "order {} does not match table size {}",
                file.order,
                file.table.len()
            )));
        }
        Self::from_table(file.table, file.names)
    }

    /// Componentwise product `self x other`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let (m, n) = (self.order(), other.order());
        let (l, r) = (self.clone(), other.clone());
        Self::build(
            Realization::DirectProduct {
                left: self.clone(),
                right: other.clone(),
            },
            m * n,
            move |a, b| {
                let x = l.mul(Element((a / n) as u32), Element((b / n) as u32));
                let y = r.mul(Element((a % n) as u32), Element((b % n) as u32));
                x.index() * n + y.index()
            },
        )
    }

    /// Quotient by a normal subgroup, materialized as a table over cosets.
    pub fn quotient(&self, kernel: &ElementSet) -> Result<Quotient> {
        if !self.is_normal(kernel)? {
            return Err(Error::NotNormal);
        }
        let n = self.order();
        let mut projection = vec![u32::MAX; n];
        let mut section = Vec::new();
        for g in self.elements() {
            if projection[g.index()] != u32::MAX {
                continue;
            }
            let coset = section.len() as u32;
            section.push(g);
            for k in kernel.iter() {
                projection[self.mul(g, k).index()] = coset;
            }
        }
        let q = section.len();
        let mut table = vec![0u16; q * q];
        for i in 0..q {
            for j in 0..q {
                let prod = self.mul(section[i], section[j]);
                table[i * q + j] = projection[prod.index()] as u16;
            }
        }
        let group = Self::from_parts(
            Realization::Quotient {
                parent: self.clone(),
                kernel: kernel.clone(),
            },
            q,
            table,
        );
        Ok(Quotient {
            group,
            kernel: kernel.clone(),
            projection: projection.into_iter().map(Element).collect(),
            section,
        })
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn realization(&self) -> &Realization {
        &self.0.realization
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order() as u32).map(Element)
    }

    pub fn nontrivial_elements(&self) -> impl Iterator<Item = Element> {
        (1..self.order() as u32).map(Element)
    }

    /// Checked element constructor from an index.
    pub fn element(&self, index: usize) -> Result<Element> {
        if index < self.order() {
            Ok(Element(index as u32))
        } else {
            Err(Error::IndexOutOfRange {
                index,
                order: self.order(),
            })
        }
    }

    /// Group product; panics if either handle is out of range.
    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        let n = self.0.order;
        Element(self.0.table[a.index() * n + b.index()] as u32)
    }

    /// Checked group product.
    pub fn multiply(&self, a: Element, b: Element) -> Result<Element> {
        self.element(a.index())?;
        self.element(b.index())?;
        Ok(self.mul(a, b))
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        Element(self.0.inverse[a.index()] as u32)
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: Element, k: i64) -> Element {
        let o = self.element_order(a) as i64;
        let mut e = k.rem_euclid(o);
        let mut base = a;
        let mut acc = Element::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Element) -> u32 {
        self.0.element_order[a.index()]
    }

    /// Ordered product of a sequence of elements.
    pub fn product(&self, items: &[Element]) -> Element {
        items
            .iter()
            .fold(Element::IDENTITY, |acc, &x| self.mul(acc, x))
    }

    /// `g^-1 a g`.
    pub fn conjugate(&self, a: Element, g: Element) -> Element {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Element, b: Element) -> Element {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.0.table[a * n + b] == self.0.table[b * n + a]))
    }

    /// Closure of `gens` under multiplication (and hence inversion).
    pub fn generated_subgroup(&self, gens: &[Element]) -> ElementSet {
        let mut set = ElementSet::trivial(self.order());
        self.extend_closure(&mut set, gens);
        set
    }

    /// Grows the subgroup `set` to `<set, extra>`. `set` must already be a
    /// subgroup.
    pub fn extend_closure(&self, set: &mut ElementSet, extra: &[Element]) {
        let mut gens: Vec<Element> = extra
            .iter()
            .copied()
            .filter(|g| !set.contains(*g))
            .collect();
        if gens.is_empty() {
            return;
        }
        gens.sort();
        gens.dedup();
        // Elements already present stay generated by themselves, so right
        // multiplication by the old members together with the new generators
        // covers the join.
        let old: Vec<Element> = set.iter().filter(|e| !e.is_identity()).collect();
        let mut queue: Vec<Element> = set.to_vec();
        let mut all_gens = old;
        all_gens.extend_from_slice(&gens);
        while let Some(x) = queue.pop() {
            for &g in &all_gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
    }

    /// Whether `set` is a subgroup (non-empty, closed under products).
    pub fn is_subgroup(&self, set: &ElementSet) -> bool {
        if set.universe() != self.order() || !set.contains_identity() {
            return false;
        }
        let members = set.to_vec();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    pub fn is_normal(&self, subgroup: &ElementSet) -> Result<bool> {
        if !self.is_subgroup(subgroup) {
            return Err(Error::NotASubgroup);
        }
        Ok(self.elements().all(|g| {
            subgroup
                .iter()
                .all(|h| subgroup.contains(self.conjugate(h, g)))
        }))
    }

    pub fn conjugacy_class(&self, a: Element) -> ElementSet {
        ElementSet::from_elements(self.order(), self.elements().map(|g| self.conjugate(a, g)))
    }

    pub fn center(&self) -> ElementSet {
        ElementSet::from_elements(
            self.order(),
            self.elements()
                .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z))),
        )
    }

    /// `1 = Z_0 <= Z_1 <= ...`, stopping at the first repeated term.
    pub fn upper_central_series(&self) -> Vec<ElementSet> {
        let mut series = vec![ElementSet::trivial(self.order())];
        loop {
            let prev = series.last().unwrap();
            let next = ElementSet::from_elements(
                self.order(),
                self.elements().filter(|&z| {
                    self.elements()
                        .all(|g| prev.contains(self.commutator(z, g)))
                }),
            );
            if &next == prev {
                return series;
            }
            series.push(next);
        }
    }

    /// Smallest subset of elements (in enumeration order) generating `set`.
    pub fn generators_of(&self, set: &ElementSet) -> Vec<Element> {
        let mut span = ElementSet::trivial(self.order());
        let mut gens = Vec::new();
        for x in set.iter() {
            if !span.contains(x) {
                self.extend_closure(&mut span, &[x]);
                gens.push(x);
            }
        }
        gens
    }

    pub fn is_cyclic(&self) -> bool {
        self.order() == 1
            || self
                .elements()
                .any(|g| self.element_order(g) as usize == self.order())
    }

    /// Least common multiple of element orders.
    pub fn lcm_of_orders(&self) -> u64 {
        self.0
            .element_order
            .iter()
            .fold(1, |acc, &o| lcm(acc, o as u64))
    }

    // -- structured coordinates -------------------------------------------

    /// Exponent vector of an element of an abelian realization.
    pub fn abelian_coords(&self, a: Element) -> Option<Vec<u32>> {
        match self.realization() {
            Realization::Abelian { orders } => {
                let s = strides(orders);
                Some(
                    orders
                        .iter()
                        .enumerate()
                        .map(|(i, &n)| ((a.index() / s[i]) % n as usize) as u32)
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Element with the given exponent vector (entries reduced modulo the
    /// factor orders).
    pub fn abelian_element(&self, coords: &[i64]) -> Option<Element> {
        match self.realization() {
            Realization::Abelian { orders } if orders.len() == coords.len() => {
                let s = strides(orders);
                let idx = orders
                    .iter()
                    .zip(coords)
                    .enumerate()
                    .map(|(i, (&n, &c))| c.rem_euclid(n as i64) as usize * s[i])
                    .sum::<usize>();
                Some(Element(idx as u32))
            }
            _ => None,
        }
    }

    pub fn heisenberg_coords(&self, a: Element) -> Option<(u32, u32, u32)> {
        match self.realization() {
            Realization::Heisenberg { p } => {
                let p = *p as usize;
                let i = a.index();
                Some(((i / (p * p)) as u32, ((i / p) % p) as u32, (i % p) as u32))
            }
            _ => None,
        }
    }

    pub fn heisenberg_element(&self, a: i64, b: i64, c: i64) -> Option<Element> {
        match self.realization() {
            Realization::Heisenberg { p } => {
                let p = *p as i64;
                let idx = a.rem_euclid(p) * p * p + b.rem_euclid(p) * p + c.rem_euclid(p);
                Some(Element(idx as u32))
            }
            _ => None,
        }
    }

    /// Components of an element of a direct-product realization.
    pub fn product_parts(&self, a: Element) -> Option<(Element, Element)> {
        match self.realization() {
            Realization::DirectProduct { right, .. } => {
                let n = right.order();
                Some((
                    Element((a.index() / n) as u32),
                    Element((a.index() % n) as u32),
                ))
            }
            _ => None,
        }
    }

    pub fn product_element(&self, left: Element, right: Element) -> Option<Element> {
        match self.realization() {
            Realization::DirectProduct { right: r, .. } => {
                Some(Element((left.index() * r.order() + right.index()) as u32))
            }
            _ => None,
        }
    }

    /// Renders an element in the literal syntax accepted by
    /// [`crate::literal::parse_element`].
    pub fn render(&self, a: Element) -> String {
        match self.realization() {
            Realization::Abelian { .. } => {
                let coords = self.abelian_coords(a).unwrap();
                let parts: Vec<String> = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| {
                        if c == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, c)
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
            Realization::Heisenberg { .. } => {
                let (x, y, z) = self.heisenberg_coords(a).unwrap();
                format!("({x},{y},{z})")
            }
            Realization::CayleyTable { names: Some(names) } => names[a.index()].clone(),
            Realization::CayleyTable { names: None } | Realization::Quotient { .. } => {
                format!("#{}", a.index())
            }
            Realization::DirectProduct { left, right } => {
                let (l, r) = self.product_parts(a).unwrap();
                format!("({}|{})", left.render(l), right.render(r))
            }
        }
    }

    pub fn render_tuple(&self, items: &[Element]) -> String {
        let parts: Vec<String> = items.iter().map(|&e| self.render(e)).collect();
        format!("[{}]", parts.join("; "))
    }

    /// Short human-readable description of the realization.
    pub fn describe(&self) -> String {
        match self.realization() {
            Realization::Abelian { orders } if orders.is_empty() => "1".to_string(),
            Realization::Abelian { orders } => orders
                .iter()
                .map(|n| format!("C{n}"))
                .collect::<Vec<_>>()
                .join("x"),
            Realization::Heisenberg { p } => format!("heis({p})"),
            Realization::CayleyTable { .. } => format!("cayley[{}]", self.order()),
            Realization::DirectProduct { left, right } => {
                format!("prod({},{})", left.describe(), right.describe())
            }
            Realization::Quotient { parent, kernel } => {
                format!("{}/N[{}]", parent.describe(), kernel.len())
            }
        }
    }
}

/// A quotient `G/N` with its projection and minimal-representative section.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: FiniteGroup,
    kernel: ElementSet,
    projection: Vec<Element>,
    section: Vec<Element>,
}

impl Quotient {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn kernel(&self) -> &ElementSet {
        &self.kernel
    }

    pub fn project(&self, g: Element) -> Element {
        self.projection[g.index()]
    }

    /// Least-index representative of a coset.
    pub fn section(&self, q: Element) -> Element {
        self.section[q.index()]
    }

    pub fn project_all(&self, items: &[Element]) -> Vec<Element> {
        items.iter().map(|&g| self.project(g)).collect()
    }
}

fn strides(orders: &[u32]) -> Vec<usize> {
    let mut s = vec![1usize; orders.len()];
    for i in (0..orders.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * orders[i + 1] as usize;
    }
    s
}

/// Light's associativity test: `(xy)g = x(yg)` for all `x, y` and `g` ranging
/// over a generating set of the table's magma suffices, because the set of
/// such `g` is closed under products.
fn check_associative(table: &[u16], n: usize) -> std::result::Result<(), String> {
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    let mut closure = vec![false; n];
    closure[0] = true;
    let mut members = vec![0usize];
    let mut gens = Vec::new();
    for cand in 0..n {
        if closure[cand] {
            continue;
        }
        gens.push(cand);
        let mut fresh = vec![cand];
        closure[cand] = true;
        members.push(cand);
        while let Some(x) = fresh.pop() {
            let snapshot = members.clone();
            for y in snapshot {
                for z in [mul(x, y), mul(y, x)] {
                    if !closure[z] {
                        closure[z] = true;
                        members.push(z);
                        fresh.push(z);
                    }
                }
            }
        }
    }
    for &g in &gens {
        for x in 0..n {
            for y in 0..n {
                if mul(mul(x, y), g) != mul(x, mul(y, g)) {
                    return Err(format!("not associative: ({x}*{y})*{g} != {x}*({y}*{g})"));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2xc4() -> FiniteGroup {
        FiniteGroup::abelian(&[2, 4]).unwrap()
    }

    #[test]
    fn abelian_multiplication_is_componentwise() {
        let g = c2xc4();
        let a = g.abelian_element(&[1, 2]).unwrap();
        let b = g.abelian_element(&[1, 3]).unwrap();
        assert_eq!(g.abelian_coords(g.mul(a, b)).unwrap(), vec![0, 1]);
    }

    #[test]
    fn heisenberg_product_formula() {
        let h = FiniteGroup::heisenberg(3).unwrap();
        let a = h.heisenberg_element(1, 0, 0).unwrap();
        let b = h.heisenberg_element(0, 1, 0).unwrap();
        assert_eq!(h.heisenberg_coords(h.mul(a, b)), Some((1, 1, 1)));
        assert_eq!(h.heisenberg_coords(h.conjugate(a, b)), Some((1, 0, 1)));
        // the opposite convention b a b^-1
        assert_eq!(
            h.heisenberg_coords(h.conjugate(a, h.inv(b))),
            Some((1, 0, 2))
        );
    }

    #[test]
    fn identity_law_everywhere() {
        for g in [c2xc4(), FiniteGroup::heisenberg(3).unwrap()] {
            for x in g.elements() {
                assert_eq!(g.mul(g.identity(), x), x);
                assert_eq!(g.mul(x, g.identity()), x);
            }
        }
    }

    #[test]
    fn element_orders() {
        let g = FiniteGroup::abelian(&[2, 4, 4, 4]).unwrap();
        let a = g.abelian_element(&[1, 0, 0, 0]).unwrap();
        assert_eq!(g.element_order(a), 2);
        assert_eq!(g.element_order(g.identity()), 1);
        let h = FiniteGroup::heisenberg(5).unwrap();
        assert_eq!(h.element_order(h.heisenberg_element(1, 0, 0).unwrap()), 5);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let g = c2xc4();
        assert!(matches!(
            g.multiply(Element(8), Element(0)),
            Err(Error::IndexOutOfRange { index: 8, order: 8 })
        ));
    }

    #[test]
    fn closure_examples() {
        let g = FiniteGroup::elementary_abelian(2, 3).unwrap();
        let e = |v: [i64; 3]| g.abelian_element(&v).unwrap();
        let gens = [e([1, 1, 0]), e([1, 0, 1]), e([0, 1, 1]), e([1, 1, 1])];
        assert_eq!(g.generated_subgroup(&gens).len(), 8);
        assert_eq!(g.generated_subgroup(&[]).len(), 1);
        let h = FiniteGroup::heisenberg(3).unwrap();
        let x = h.heisenberg_element(1, 0, 0).unwrap();
        let y = h.heisenberg_element(0, 1, 0).unwrap();
        assert_eq!(h.generated_subgroup(&[x, y]).len(), 27);
    }

    #[test]
    fn normality_in_heisenberg() {
        let h = FiniteGroup::heisenberg(3).unwrap();
        let center = h.center();
        assert_eq!(center.len(), 3);
        assert!(h.is_normal(&center).unwrap());
        let x = h.heisenberg_element(1, 0, 0).unwrap();
        assert!(!h.is_normal(&h.generated_subgroup(&[x])).unwrap());
        let not_subgroup = ElementSet::from_elements(27, [Element(0), x]);
        assert_eq!(h.is_normal(&not_subgroup), Err(Error::NotASubgroup));
    }

    #[test]
    fn quotients() {
        let h = FiniteGroup::heisenberg(3).unwrap();
        let q = h.quotient(&h.center()).unwrap();
        assert_eq!(q.group().order(), 9);
        assert!(q.group().is_abelian());
        assert!(q
            .group()
            .elements()
            .all(|e| q.group().element_order(e) <= 3));
        for a in h.elements() {
            for b in h.elements() {
                assert_eq!(
                    q.project(h.mul(a, b)),
                    q.group().mul(q.project(a), q.project(b))
                );
            }
        }
        for c in q.group().elements() {
            assert_eq!(q.project(q.section(c)), c);
        }
        let whole = ElementSet::full(27);
        assert_eq!(h.quotient(&whole).unwrap().group().order(), 1);
        let x = h.heisenberg_element(1, 0, 0).unwrap();
        assert!(matches!(
            h.quotient(&h.generated_subgroup(&[x])),
            Err(Error::NotNormal)
        ));
    }

    #[test]
    fn direct_products() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let p = c2.direct_product(&c3).unwrap();
        assert_eq!(p.order(), 6);
        let g = p.product_element(Element(1), Element(1)).unwrap();
        assert_eq!(p.element_order(g), 6);
        let big = FiniteGroup::abelian(&[6, 6])
            .unwrap()
            .direct_product(&c2)
            .unwrap();
        assert_eq!(big.order(), 72);
    }

    #[test]
    fn central_series() {
        let g = c2xc4();
        let s = g.upper_central_series();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].len(), 8);
        let h = FiniteGroup::heisenberg(3).unwrap();
        let s = h.upper_central_series();
        assert_eq!(
            s.iter().map(|z| z.len()).collect::<Vec<_>>(),
            vec![1, 3, 27]
        );
    }

    #[test]
    fn cayley_validation() {
        // C3 as a table.
        let ok = FiniteGroup::from_table(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]], None);
        assert!(ok.is_ok());
        let not_latin =
            FiniteGroup::from_table(vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]], None);
        assert!(matches!(not_latin, Err(Error::InvalidCayleyTable(_))));
        let bad_identity = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None);
        assert!(matches!(bad_identity, Err(Error::InvalidCayleyTable(_))));
        // A Latin square with identity that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(loop5, None),
            Err(Error::InvalidCayleyTable(_))
        ));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = FiniteGroup::abelian(&[2, 4, 4]).unwrap();
        let b = FiniteGroup::abelian(&[2, 4, 4]).unwrap();
        for x in a.elements() {
            assert_eq!(a.render(x), b.render(x));
            for y in a.elements() {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }
}
