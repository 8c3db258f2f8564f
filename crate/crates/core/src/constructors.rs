//! Explicit constructions of ramification structures. Every structure
//! returned here has been through [`check_ramification`].

use serde::Serialize;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::generation::GenerationTracker;
use crate::group::{FiniteGroup, Quotient, Realization};
use crate::invariants::{
    exponent, exponent_log, min_generators, omega, pgroup_prime, power_image, sylow_decomposition,
    SylowFactor,
};
use crate::numtheory::{gcd, is_prime};
use crate::oracle::{Meter, Oracle, SearchBudget, SearchVerdict};
use crate::structures::{check_ramification, is_spherical_system, RamStructure};
use crate::theory::{
    check_semi_abelian_top, membership, predict_elementary_abelian, predict_nilpotent,
    predict_semi_abelian_pgroup, SizeConstraintSet,
};

/// Node limit for the coset search in [`lift_tuple`].
const LIFT_NODE_LIMIT: u64 = 200_000_000;

/// A normal subgroup `N` of `G` together with `G/N`.
#[derive(Debug, Clone)]
pub struct LiftContext {
    parent: FiniteGroup,
    quotient: Quotient,
}

impl LiftContext {
    pub fn new(parent: &FiniteGroup, kernel: &ElementSet) -> Result<LiftContext> {
        Ok(LiftContext {
            parent: parent.clone(),
            quotient: parent.quotient(kernel)?,
        })
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn quotient_group(&self) -> &FiniteGroup {
        self.quotient.group()
    }

    pub fn kernel(&self) -> &ElementSet {
        self.quotient.kernel()
    }

    pub fn project(&self, g: Element) -> Element {
        self.quotient.project(g)
    }

    pub fn section(&self, q: Element) -> Element {
        self.quotient.section(q)
    }

    /// The coset `section(q) N` in enumeration order.
    fn coset(&self, q: Element) -> Vec<Element> {
        let s = self.section(q);
        let mut out: Vec<Element> = self
            .kernel()
            .iter()
            .map(|n| self.parent.mul(s, n))
            .collect();
        out.sort();
        out
    }
}

fn ensure_valid(
    g: &FiniteGroup,
    t1: &[Element],
    t2: &[Element],
    what: &str,
) -> Result<RamStructure> {
    check_ramification(g, t1, t2)
        .map_err(|f| Error::InternalContradiction(format!("{what} failed validation: {f:?}")))
}

/// Lifts a generating tuple of `G/N` to a generating tuple of `G`, entrywise
/// congruent modulo `N`. In spherical mode the lift also has product `1` and
/// no trivial entries; `forbid_trivial` alone only excludes trivial entries.
///
/// The entry at the last position with a nontrivial image is solved for; the
/// others are chosen by a depth-first search over their cosets in element
/// order, pruned by the number of generators still missing.
pub fn lift_tuple(
    ctx: &LiftContext,
    u: &[Element],
    spherical: bool,
    forbid_trivial: bool,
) -> Result<Vec<Element>> {
    let g = &ctx.parent;
    let q = ctx.quotient_group();
    let r = u.len();
    if let Some(bad) = u.iter().find(|x| x.index() >= q.order()) {
        return Err(Error::IndexOutOfRange {
            index: bad.index(),
            order: q.order(),
        });
    }
    if q.generated_subgroup(u).len() != q.order() {
        return Err(Error::PreconditionViolated(
            "tuple does not generate the quotient".into(),
        ));
    }
    let d = min_generators(g).ok();
    if let Some(d) = d {
        if r < d {
            return Err(Error::NoLiftExists(format!(
                "{r} entries cannot generate a group with d = {d}"
            )));
        }
        if spherical && r < d + 1 {
            return Err(Error::PreconditionViolated(format!(
                "a spherical lift needs at least d + 1 = {} entries",
                d + 1
            )));
        }
    }
    if spherical && !q.product(u).is_identity() {
        return Err(Error::PreconditionViolated(
            "product of the quotient tuple is not trivial".into(),
        ));
    }
    if ctx.kernel().len() == 1 {
        let t: Vec<Element> = u.iter().map(|&x| ctx.section(x)).collect();
        let trivial_entry = t.iter().any(|x| x.is_identity());
        if (spherical || forbid_trivial) && trivial_entry {
            return Err(Error::PreconditionViolated(
                "trivial kernel and a trivial entry".into(),
            ));
        }
        return Ok(t);
    }
    let skip_identity = spherical || forbid_trivial;
    let forced = if spherical {
        match u.iter().rposition(|x| !x.is_identity()) {
            Some(j) => Some(j),
            None => return spherical_in_kernel(g, r),
        }
    } else {
        None
    };
    let candidates: Vec<Vec<Element>> = u
        .iter()
        .map(|&x| {
            ctx.coset(x)
                .into_iter()
                .filter(|y| !(skip_identity && y.is_identity()))
                .collect()
        })
        .collect();
    let free: Vec<usize> = (0..r).filter(|&i| Some(i) != forced).collect();
    let mut search = LiftSearch {
        g,
        tracker: GenerationTracker::new(g),
        candidates: &candidates,
        free: &free,
        forced,
        chosen: vec![g.identity(); r],
        nodes: 0,
    };
    let root = search.tracker.trivial();
    if search.dfs(0, root)? {
        let t = search.chosen;
        debug_assert!(t.iter().zip(u).all(|(&x, &y)| ctx.project(x) == y));
        Ok(t)
    } else {
        Err(Error::NoLiftExists("coset search exhausted".into()))
    }
}

fn spherical_in_kernel(g: &FiniteGroup, r: usize) -> Result<Vec<Element>> {
    let mut oracle = Oracle::new(g);
    let mut meter = Meter::new(SearchBudget::default());
    let all = ElementSet::full(g.order());
    match oracle.spherical_witness(&all, r, &mut meter) {
        Ok(Some(t)) => Ok(t),
        Ok(None) => Err(Error::NoLiftExists(format!(
            "no spherical system of length {r}"
        ))),
        Err(_) => Err(Error::NoLiftExists("search budget exhausted".into())),
    }
}

struct LiftSearch<'a> {
    g: &'a FiniteGroup,
    tracker: GenerationTracker,
    candidates: &'a [Vec<Element>],
    free: &'a [usize],
    forced: Option<usize>,
    chosen: Vec<Element>,
    nodes: u64,
}

impl LiftSearch<'_> {
    fn dfs(&mut self, depth: usize, h: u32) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > LIFT_NODE_LIMIT {
            return Err(Error::NoLiftExists("coset search limit reached".into()));
        }
        if depth == self.free.len() {
            let mut h = h;
            if let Some(j) = self.forced {
                let before = self.g.product(&self.chosen[..j]);
                let after = self.g.product(&self.chosen[j + 1..]);
                let z = self.g.mul(self.g.inv(before), self.g.inv(after));
                if z.is_identity() {
                    return Ok(false);
                }
                self.chosen[j] = z;
                h = self.tracker.join(h, z);
            }
            return Ok(self.tracker.is_full(h));
        }
        let pos = self.free[depth];
        let remaining = (self.free.len() - depth - 1) as u32;
        for k in 0..self.candidates[pos].len() {
            let x = self.candidates[pos][k];
            let h2 = self.tracker.join(h, x);
            if self.tracker.deficit(h2) > remaining {
                continue;
            }
            self.chosen[pos] = x;
            if self.dfs(depth + 1, h2)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn require_elementary(g: &FiniteGroup, p: u64) -> Result<()> {
    if g.order() > 1 && g.is_abelian() && exponent(g) == p {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!(
            "group is not elementary abelian of exponent {p}"
        )))
    }
}

/// Lengthens a spherical system of an elementary abelian p-group without
/// changing the cyclic subgroups it meets: by one entry for odd `p`, by two
/// for `p = 2`.
pub fn extend_size(g: &FiniteGroup, t: &[Element], p: u64) -> Result<Vec<Element>> {
    require_elementary(g, p)?;
    if is_spherical_system(g, t).is_err() {
        return Err(Error::PreconditionViolated("input is not spherical".into()));
    }
    let x1 = t[0];
    let out = if p == 2 {
        let mut v = t.to_vec();
        v.extend([x1, x1]);
        v
    } else {
        let mut v = vec![g.pow(x1, 2)];
        v.extend_from_slice(&t[1..]);
        v.push(g.inv(x1));
        v
    };
    Ok(out)
}

fn elementary_rank(g: &FiniteGroup) -> Option<(u64, usize)> {
    match g.realization() {
        Realization::Abelian { orders }
            if !orders.is_empty()
                && orders.iter().all(|&o| o == orders[0])
                && is_prime(orders[0] as u64) =>
        {
            Some((orders[0] as u64, orders.len()))
        }
        _ => None,
    }
}

/// First pair of positions whose removal leaves a generating tuple.
fn redundant_pair(g: &FiniteGroup, t: &[Element]) -> Option<(usize, usize)> {
    let mut tracker = GenerationTracker::new(g);
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            let rest: Vec<Element> = t
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != a && i != b)
                .map(|(_, &x)| x)
                .collect();
            if tracker.generates(&rest) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Moves a structure on `C_p^d` (abelian realization) to `C_p^(d+1)`: in each
/// tuple, two entries that are redundant for generation absorb `y` and `y^-1`
/// for the new generator `y`.
pub fn extend_rank(g: &FiniteGroup, s: &RamStructure) -> Result<(FiniteGroup, RamStructure)> {
    let (p, d) = elementary_rank(g).ok_or_else(|| {
        Error::PreconditionViolated("expected an elementary abelian C_p^d realization".into())
    })?;
    let (r1, r2) = s.size();
    if r1.min(r2) < d + 2 {
        return Err(Error::PreconditionViolated(format!(
            "sizes ({r1}, {r2}) are below d + 2 = {}",
            d + 2
        )));
    }
    let big = FiniteGroup::elementary_abelian(p, d + 1)?;
    let embed = |x: Element| -> Element {
        let mut c: Vec<i64> = g
            .abelian_coords(x)
            .expect("abelian realization")
            .into_iter()
            .map(i64::from)
            .collect();
        c.push(0);
        big.abelian_element(&c).expect("coordinates in range")
    };
    let mut yc = vec![0i64; d + 1];
    yc[d] = 1;
    let y = big.abelian_element(&yc).expect("coordinates in range");
    let y_inv = big.inv(y);
    let mut out = Vec::new();
    for t in [s.t1(), s.t2()] {
        let (a, b) = redundant_pair(g, t).ok_or_else(|| {
            Error::PreconditionViolated("no two entries are redundant for generation".into())
        })?;
        let mut v: Vec<Element> = t.iter().map(|&x| embed(x)).collect();
        v[a] = big.mul(v[a], y);
        v[b] = big.mul(v[b], y_inv);
        out.push(v);
    }
    let s = ensure_valid(&big, &out[0], &out[1], "rank extension")?;
    Ok((big, s))
}

fn inadmissible(r1: usize, r2: usize, scs: &SizeConstraintSet) -> Error {
    Error::InadmissibleSize {
        r1,
        r2,
        reason: describe_violation(scs, r1, r2),
    }
}

fn describe_violation(scs: &SizeConstraintSet, r1: usize, r2: usize) -> String {
    if !scs.admits {
        return scs.provenance.join("; ");
    }
    if r1.min(r2) < scs.min_size {
        return format!("sizes must be at least {}", scs.min_size);
    }
    if scs.excluded_pairs.contains(&(r1.min(r2), r1.max(r2))) {
        return format!("({}, {}) is excluded", r1.min(r2), r1.max(r2));
    }
    if scs.forbid_both_odd && r1 % 2 == 1 && r2 % 2 == 1 {
        return "sizes may not both be odd".into();
    }
    "admissible".into()
}

fn abelian_tuple(g: &FiniteGroup, rows: &[&[i64]]) -> Vec<Element> {
    rows.iter()
        .map(|c| g.abelian_element(c).expect("coordinates in range"))
        .collect()
}

/// The explicit small structures every elementary abelian structure grows from.
fn base_structure(
    p: u64,
    r1_odd: bool,
    r2_odd: bool,
    d: usize,
) -> Result<(FiniteGroup, RamStructure)> {
    let (g, t1, t2) = match p {
        2 if r1_odd && r2_odd => {
            debug_assert!(d >= 4);
            let g = FiniteGroup::elementary_abelian(2, 4)?;
            let t1 = abelian_tuple(
                &g,
                &[
                    &[1, 0, 0, 0],
                    &[0, 1, 0, 0],
                    &[0, 0, 1, 0],
                    &[0, 0, 0, 1],
                    &[1, 1, 1, 1],
                ],
            );
            let t2 = abelian_tuple(
                &g,
                &[
                    &[1, 1, 0, 0],
                    &[0, 1, 1, 0],
                    &[0, 0, 1, 1],
                    &[1, 1, 1, 0],
                    &[0, 1, 1, 1],
                ],
            );
            (g, t1, t2)
        }
        2 => {
            let g = FiniteGroup::elementary_abelian(2, 3)?;
            let five = abelian_tuple(
                &g,
                &[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[1, 1, 1]],
            );
            let six_a = abelian_tuple(
                &g,
                &[
                    &[1, 1, 0],
                    &[1, 0, 1],
                    &[1, 1, 1],
                    &[1, 1, 0],
                    &[1, 0, 1],
                    &[1, 1, 1],
                ],
            );
            let six_b = abelian_tuple(
                &g,
                &[
                    &[1, 0, 0],
                    &[0, 1, 0],
                    &[0, 0, 1],
                    &[1, 0, 0],
                    &[0, 1, 0],
                    &[0, 0, 1],
                ],
            );
            match (r1_odd, r2_odd) {
                (true, false) => (g, five, six_b),
                (false, true) => (g, six_b, five),
                _ => (g, six_a, six_b),
            }
        }
        3 => {
            let g = FiniteGroup::elementary_abelian(3, 2)?;
            let t1 = abelian_tuple(&g, &[&[1, 0], &[2, 0], &[0, 1], &[0, 2]]);
            let t2 = abelian_tuple(&g, &[&[1, 1], &[2, 2], &[1, 2], &[2, 1]]);
            (g, t1, t2)
        }
        _ => {
            let g = FiniteGroup::elementary_abelian(p, 2)?;
            let p = p as i64;
            let t1 = abelian_tuple(&g, &[&[1, 0], &[0, 1], &[p - 1, p - 1]]);
            let t2 = abelian_tuple(&g, &[&[1, 2], &[1, 4 % p], &[p - 2, (p - 6 % p) % p]]);
            (g, t1, t2)
        }
    };
    let s = ensure_valid(&g, &t1, &t2, "base structure")?;
    Ok((g, s))
}

fn grow_tuple(
    g: &FiniteGroup,
    s: RamStructure,
    p: u64,
    target: (usize, usize),
) -> Result<RamStructure> {
    let (mut t1, mut t2) = (s.t1().to_vec(), s.t2().to_vec());
    while t1.len() < target.0 {
        t1 = extend_size(g, &t1, p)?;
    }
    while t2.len() < target.1 {
        t2 = extend_size(g, &t2, p)?;
    }
    ensure_valid(g, &t1, &t2, "size extension")
}

/// A structure of size `(r1, r2)` on `C_p^d` (abelian realization), built from
/// the base structures by size and rank extensions.
pub fn elementary_abelian_structure(
    p: u64,
    d: usize,
    r1: usize,
    r2: usize,
) -> Result<(FiniteGroup, RamStructure)> {
    let scs = predict_elementary_abelian(p, d)?;
    if !membership(&scs, r1, r2) {
        return Err(inadmissible(r1, r2, &scs));
    }
    let (mut g, mut s) = base_structure(p, r1 % 2 == 1, r2 % 2 == 1, d)?;
    let step = if p == 2 { 2 } else { 1 };
    let bump = |len: usize, need: usize| -> usize {
        let mut l = len;
        while l < need {
            l += step;
        }
        l
    };
    let mut k = elementary_rank(&g).expect("base is elementary abelian").1;
    while k < d {
        let (a, b) = s.size();
        let want = (bump(a, k + 2), bump(b, k + 2));
        s = grow_tuple(&g, s, p, want)?;
        let (g2, s2) = extend_rank(&g, &s)?;
        g = g2;
        s = s2;
        k += 1;
    }
    let s = grow_tuple(&g, s, p, (r1, r2))?;
    debug_assert_eq!(s.size(), (r1, r2));
    Ok((g, s))
}

/// Greedy basis of an elementary abelian group in element order.
pub fn elementary_basis(g: &FiniteGroup) -> Vec<Element> {
    let mut span = ElementSet::trivial(g.order());
    let mut basis = Vec::new();
    for x in g.elements() {
        if !span.contains(x) {
            g.extend_closure(&mut span, &[x]);
            basis.push(x);
        }
    }
    basis
}

/// Image of a tuple over the standard `C_p^d` under `e_i -> basis[i]`.
fn transport(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    basis: &[Element],
    t: &[Element],
) -> Vec<Element> {
    t.iter()
        .map(|&x| {
            let coords = src.abelian_coords(x).expect("abelian realization");
            coords
                .iter()
                .zip(basis)
                .fold(dst.identity(), |acc, (&c, &b)| {
                    dst.mul(acc, dst.pow(b, c as i64))
                })
        })
        .collect()
}

/// Builds a structure on an elementary abelian group in any realization.
fn elementary_on(g: &FiniteGroup, r1: usize, r2: usize) -> Result<RamStructure> {
    let p = exponent(g);
    let basis = elementary_basis(g);
    let (src, s) = elementary_abelian_structure(p, basis.len(), r1, r2)?;
    let t1 = transport(&src, g, &basis, s.t1());
    let t2 = transport(&src, g, &basis, s.t2());
    ensure_valid(g, &t1, &t2, "transported structure")
}

/// Groups of prime exponent: an elementary abelian structure on `G/Phi(G)`
/// lifted spherically.
pub fn exponent_p_structure(g: &FiniteGroup, r1: usize, r2: usize) -> Result<RamStructure> {
    let p = exponent(g);
    if !is_prime(p) {
        return Err(Error::NotExponentP);
    }
    let d = min_generators(g)?;
    let scs = predict_elementary_abelian(p, d)?;
    if !membership(&scs, r1, r2) {
        return Err(inadmissible(r1, r2, &scs));
    }
    let phi = crate::invariants::frattini(g)?;
    let ctx = LiftContext::new(g, &phi)?;
    let u = elementary_on(ctx.quotient_group(), r1, r2)?;
    let t1 = lift_tuple(&ctx, u.t1(), true, true)?;
    let t2 = lift_tuple(&ctx, u.t2(), true, true)?;
    ensure_valid(g, &t1, &t2, "exponent-p lift")
}

/// `G -> G/Omega_{e-1}(G)` for a semi-p^(e-1)-abelian p-group.
pub fn omega_context(g: &FiniteGroup) -> Result<LiftContext> {
    pgroup_prime(g)?;
    check_semi_abelian_top(g)?;
    let e = exponent_log(g)?;
    LiftContext::new(g, &omega(g, e - 1)?)
}

/// Image of a structure in `G/Omega_{e-1}(G)` with trivial entries dropped.
pub fn project_mod_omega(ctx: &LiftContext, s: &RamStructure) -> Result<RamStructure> {
    let drop = |t: &[Element]| -> Vec<Element> {
        t.iter()
            .map(|&x| ctx.project(x))
            .filter(|x| !x.is_identity())
            .collect()
    };
    let (u1, u2) = (drop(s.t1()), drop(s.t2()));
    ensure_valid(ctx.quotient_group(), &u1, &u2, "projected structure")
}

/// Spherical lift of a structure on `G/Omega_{e-1}(G)` back to `G`.
pub fn lift_structure_mod_omega(ctx: &LiftContext, u: &RamStructure) -> Result<RamStructure> {
    let g = ctx.parent();
    let d = min_generators(g)?;
    let (r1, r2) = u.size();
    if r1.min(r2) < d + 1 {
        return Err(Error::PreconditionViolated(format!(
            "sizes ({r1}, {r2}) are below d + 1 = {}",
            d + 1
        )));
    }
    let t1 = lift_tuple(ctx, u.t1(), true, true)?;
    let t2 = lift_tuple(ctx, u.t2(), true, true)?;
    ensure_valid(g, &t1, &t2, "lifted structure")
}

fn pad_tuple(g: &FiniteGroup, t: &[Element], r: usize) -> Vec<Element> {
    let (x, y) = (t[0], t[1]);
    let mut out = if r % 2 == 1 {
        t.to_vec()
    } else {
        vec![x, y, g.inv(y), g.inv(x)]
    };
    while out.len() < r {
        out.extend([x, g.inv(x)]);
    }
    out
}

/// Pads a structure of size `(3, 3)` to any size `(r1, r2)` with `r1, r2 >= 3`.
pub fn pad_from_beauville(
    g: &FiniteGroup,
    s: &RamStructure,
    r1: usize,
    r2: usize,
) -> Result<RamStructure> {
    if s.size() != (3, 3) {
        return Err(Error::PreconditionViolated(format!(
            "expected a structure of size (3, 3), got {:?}",
            s.size()
        )));
    }
    if r1 < 3 || r2 < 3 {
        return Err(Error::PreconditionViolated(
            "sizes must be at least 3".into(),
        ));
    }
    let t1 = pad_tuple(g, s.t1(), r1);
    let t2 = pad_tuple(g, s.t2(), r2);
    ensure_valid(g, &t1, &t2, "padded structure")
}

fn zip_padded(
    p: &FiniteGroup,
    a: &[Element],
    b: &[Element],
    la: &FiniteGroup,
    lb: &FiniteGroup,
) -> Vec<Element> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(la.identity());
            let y = b.get(i).copied().unwrap_or(lb.identity());
            p.product_element(x, y).expect("direct product realization")
        })
        .collect()
}

/// Structure on `G x H` for coprime `|G|, |H|`, of size
/// `(max(r1, r1*), max(r2, r2*))`.
pub fn product_combine(
    g: &FiniteGroup,
    sg: &RamStructure,
    h: &FiniteGroup,
    sh: &RamStructure,
) -> Result<(FiniteGroup, RamStructure)> {
    if gcd(g.order() as u64, h.order() as u64) != 1 {
        return Err(Error::NotCoprime(g.order(), h.order()));
    }
    let p = g.direct_product(h)?;
    let t1 = zip_padded(&p, sg.t1(), sh.t1(), g, h);
    let t2 = zip_padded(&p, sg.t2(), sh.t2(), g, h);
    let s = ensure_valid(&p, &t1, &t2, "combined structure")?;
    Ok((p, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Left,
    Right,
}

fn repad_odd(g: &FiniteGroup, t: &[Element], r: usize) -> Result<Vec<Element>> {
    if r < t.len() {
        return Err(Error::PreconditionViolated(format!(
            "target {r} is shorter than the projected tuple ({})",
            t.len()
        )));
    }
    let z1 = t[0];
    let mut out = if (r - t.len()) % 2 == 1 {
        let mut v = vec![g.pow(z1, 2), g.inv(z1)];
        v.extend_from_slice(&t[1..]);
        v
    } else {
        t.to_vec()
    };
    while out.len() < r {
        out.extend([z1, g.inv(z1)]);
    }
    Ok(out)
}

/// Component structure on one factor of a coprime direct product, identity
/// components deleted. With a target size the odd-order factor is padded back
/// to it.
pub fn product_project(
    p: &FiniteGroup,
    s: &RamStructure,
    side: Factor,
    target: Option<(usize, usize)>,
) -> Result<(FiniteGroup, RamStructure)> {
    let Realization::DirectProduct { left, right } = p.realization() else {
        return Err(Error::PreconditionViolated("not a direct product".into()));
    };
    if gcd(left.order() as u64, right.order() as u64) != 1 {
        return Err(Error::NotCoprime(left.order(), right.order()));
    }
    let factor = match side {
        Factor::Left => left.clone(),
        Factor::Right => right.clone(),
    };
    let component = |t: &[Element]| -> Vec<Element> {
        t.iter()
            .map(|&x| {
                let (a, b) = p.product_parts(x).expect("direct product realization");
                if side == Factor::Left {
                    a
                } else {
                    b
                }
            })
            .filter(|x| !x.is_identity())
            .collect()
    };
    let (mut t1, mut t2) = (component(s.t1()), component(s.t2()));
    if let Some((r, q)) = target {
        if factor.order() % 2 == 0 {
            return Err(Error::PaddingImpossible);
        }
        t1 = repad_odd(&factor, &t1, r)?;
        t2 = repad_odd(&factor, &t2, q)?;
    }
    let s = ensure_valid(&factor, &t1, &t2, "projected structure")?;
    Ok((factor, s))
}

/// Structures of odd size `(r1, r2)` on a semi-2^(e-1)-abelian 2-group with
/// `|X| = 8` and `e >= 2`, where `G/Omega_{e-1}(G)` is `C2^3` and so has none.
/// Needs `d(G) >= 4`: with `d = 3` there is no element `n` to absorb the
/// parity defect.
pub fn semi_abelian_2group_odd_odd(g: &FiniteGroup, r1: usize, r2: usize) -> Result<RamStructure> {
    let p = pgroup_prime(g)?;
    if p != 2 {
        return Err(Error::HypothesisViolated(format!(
            "expected a 2-group, got p = {p}"
        )));
    }
    let scs = predict_semi_abelian_pgroup(g)?;
    if r1.is_multiple_of(2) || r2.is_multiple_of(2) {
        return Err(Error::PreconditionViolated("both sizes must be odd".into()));
    }
    if !membership(&scs, r1, r2) {
        return Err(inadmissible(r1, r2, &scs));
    }
    let e = exponent_log(g)?;
    let x_set = power_image(g, e - 1)?;
    if x_set.len() != 8 || e < 2 {
        return Err(Error::HypothesisViolated(format!(
            "needs |X| = 8 and e >= 2 (|X| = {}, e = {e})",
            x_set.len()
        )));
    }
    let d = min_generators(g)?;
    if d == 3 {
        return Err(Error::DegenerateRank);
    }
    if r2 == 5 {
        return semi_abelian_2group_odd_odd(g, r2, r1).map(|s| s.swapped());
    }
    let ctx = omega_context(g)?;
    let q = ctx.quotient_group().clone();
    let squares = crate::invariants::agemo(g, 1)?;
    let om = ctx.kernel().clone();
    // n_1, ..., n_{d-3}: Omega_{e-1}(G) modulo G^2
    let mut span = squares.clone();
    let mut ns = Vec::new();
    for x in om.iter() {
        if !span.contains(x) {
            g.extend_closure(&mut span, &[x]);
            ns.push(x);
        }
    }
    if ns.len() != d - 3 || span != om {
        return Err(Error::InternalContradiction(format!(
            "Omega_(e-1)/G^2 has rank {} instead of {}",
            ns.len(),
            d - 3
        )));
    }
    let n = g.product(&ns);
    let k = g.element_order(n).trailing_zeros();
    let c = g.pow(n, 1i64 << (k - 1));
    let power_map = crate::invariants::power_map(g, e - 1)?;
    let special = g
        .elements()
        .find(|&x| !c.is_identity() && power_map[x.index()] == c);
    // basis x, y, z of G/Omega_{e-1}(G), lifted to G
    let mut qspan = ElementSet::trivial(q.order());
    let mut lifts = Vec::new();
    if let Some(x) = special {
        q.extend_closure(&mut qspan, &[ctx.project(x)]);
        lifts.push(x);
    }
    for qx in q.elements() {
        if lifts.len() == 3 {
            break;
        }
        if !qspan.contains(qx) {
            q.extend_closure(&mut qspan, &[qx]);
            lifts.push(ctx.section(qx));
        }
    }
    let (x, y, z) = (lifts[0], lifts[1], lifts[2]);
    let (qx, qy, qz) = (ctx.project(x), ctx.project(y), ctx.project(z));
    let qm = |a: Element, b: Element| q.mul(a, b);
    let mut u1 = vec![
        qm(qx, qy),
        qm(qy, qz),
        qm(qx, qz),
        qm(qm(qx, qy), qz),
        qm(qm(qx, qy), qz),
    ];
    while u1.len() < r1 {
        u1.push(qm(qx, qy));
    }
    let t1 = lift_tuple(&ctx, &u1, true, true)?;
    let pattern = [x, y, z];
    let mut t2: Vec<Element> = (0..r2 - 1)
        .map(|i| if i < 6 { pattern[i % 3] } else { x })
        .collect();
    for (i, &ni) in ns.iter().enumerate() {
        t2[3 + i] = g.mul(t2[3 + i], ni);
    }
    let w = g.mul(g.product(&t2), g.inv(n));
    if !squares.contains(w) {
        return Err(Error::InternalContradiction(
            "product of T2 is not n modulo G^2".into(),
        ));
    }
    t2[0] = g.mul(g.inv(w), t2[0]);
    t2.push(g.inv(n));
    ensure_valid(g, &t1, &t2, "odd-odd construction")
}

/// Which route produced a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ElementaryAbelian,
    ExponentP,
    SemiAbelianLift,
    SemiAbelianOddOdd,
    Nilpotent,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Auto,
    Theorem,
    Search,
}

#[derive(Debug, Clone)]
pub enum Construction {
    Built {
        structure: RamStructure,
        method: Method,
    },
    Inadmissible {
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

impl Construction {
    pub fn structure(&self) -> Option<&RamStructure> {
        match self {
            Construction::Built { structure, .. } => Some(structure),
            _ => None,
        }
    }
}

fn is_elementary_abelian(g: &FiniteGroup) -> bool {
    g.order() > 1 && g.is_abelian() && is_prime(exponent(g))
}

fn is_exponent_p(g: &FiniteGroup) -> bool {
    g.order() > 1 && is_prime(exponent(g))
}

enum Attempt {
    Done(Construction),
    NoTheorem(String),
}

fn built(structure: RamStructure, method: Method) -> Attempt {
    Attempt::Done(Construction::Built { structure, method })
}

fn theorem_route(g: &FiniteGroup, r1: usize, r2: usize) -> Result<Attempt> {
    if r1 < 3 || r2 < 3 {
        return Ok(Attempt::Done(Construction::Inadmissible {
            reason: "sizes must be at least 3".into(),
        }));
    }
    if g.is_cyclic() {
        return Ok(Attempt::Done(Construction::Inadmissible {
            reason: "cyclic groups admit no structure".into(),
        }));
    }
    let refuse = |scs: &SizeConstraintSet| {
        Attempt::Done(Construction::Inadmissible {
            reason: describe_violation(scs, r1, r2),
        })
    };
    if is_elementary_abelian(g) {
        let scs = predict_elementary_abelian(exponent(g), min_generators(g)?)?;
        if !membership(&scs, r1, r2) {
            return Ok(refuse(&scs));
        }
        return Ok(built(elementary_on(g, r1, r2)?, Method::ElementaryAbelian));
    }
    if is_exponent_p(g) {
        return match exponent_p_structure(g, r1, r2) {
            Ok(s) => Ok(built(s, Method::ExponentP)),
            Err(Error::InadmissibleSize { reason, .. }) => {
                Ok(Attempt::Done(Construction::Inadmissible { reason }))
            }
            Err(e) => Err(e),
        };
    }
    if pgroup_prime(g).is_ok() {
        let scs = match predict_semi_abelian_pgroup(g) {
            Ok(scs) => scs,
            Err(Error::HypothesisViolated(why)) => return Ok(Attempt::NoTheorem(why)),
            Err(e) => return Err(e),
        };
        if !membership(&scs, r1, r2) {
            return Ok(refuse(&scs));
        }
        let ctx = omega_context(g)?;
        let q = ctx.quotient_group().clone();
        let qp = exponent(&q);
        let qd = min_generators(&q)?;
        let q_scs = predict_elementary_abelian(qp, qd)?;
        if membership(&q_scs, r1, r2) {
            let u = elementary_on(&q, r1, r2)?;
            return Ok(built(
                lift_structure_mod_omega(&ctx, &u)?,
                Method::SemiAbelianLift,
            ));
        }
        return match semi_abelian_2group_odd_odd(g, r1, r2) {
            Ok(s) => Ok(built(s, Method::SemiAbelianOddOdd)),
            Err(Error::DegenerateRank) => Ok(Attempt::NoTheorem(
                "odd-odd construction needs d(G) >= 4".into(),
            )),
            Err(e) => Err(e),
        };
    }
    let factors = match sylow_decomposition(g) {
        Ok(f) => f,
        Err(Error::NotNilpotent) => return Ok(Attempt::NoTheorem("group is not nilpotent".into())),
        Err(e) => return Err(e),
    };
    let scs = match predict_nilpotent(g) {
        Ok(scs) => scs,
        Err(Error::HypothesisViolated(why)) => return Ok(Attempt::NoTheorem(why)),
        Err(e) => return Err(e),
    };
    if !membership(&scs, r1, r2) {
        return Ok(refuse(&scs));
    }
    let mut parts: Vec<(SylowFactor, RamStructure)> = Vec::new();
    for f in factors {
        let local = predict_semi_abelian_pgroup(&f.group)?;
        let (a, b) = if membership(&local, r1, r2) {
            (r1, r2)
        } else if r2 > 5 {
            (r1, r2 - 1)
        } else {
            (r1 - 1, r2)
        };
        match theorem_route(&f.group, a, b)? {
            Attempt::Done(Construction::Built { structure, .. }) => parts.push((f, structure)),
            Attempt::Done(other) => {
                return Err(Error::InternalContradiction(format!(
                    "Sylow {}-subgroup at ({a}, {b}): {other:?}",
                    f.p
                )))
            }
            Attempt::NoTheorem(why) => return Ok(Attempt::NoTheorem(why)),
        }
    }
    Ok(built(combine_sylow(g, &parts)?, Method::Nilpotent))
}

/// Zips Sylow-factor structures into `G`, padding short tuples with `1`.
fn combine_sylow(g: &FiniteGroup, parts: &[(SylowFactor, RamStructure)]) -> Result<RamStructure> {
    let len1 = parts.iter().map(|(_, s)| s.size().0).max().unwrap_or(0);
    let len2 = parts.iter().map(|(_, s)| s.size().1).max().unwrap_or(0);
    let zip = |len: usize, first: bool| -> Vec<Element> {
        (0..len)
            .map(|i| {
                parts.iter().fold(g.identity(), |acc, (f, s)| {
                    let t = if first { s.t1() } else { s.t2() };
                    match t.get(i) {
                        Some(&x) => g.mul(acc, f.embed(x)),
                        None => acc,
                    }
                })
            })
            .collect()
    };
    let (t1, t2) = (zip(len1, true), zip(len2, false));
    ensure_valid(g, &t1, &t2, "combined Sylow structures")
}

fn search_route(g: &FiniteGroup, r1: usize, r2: usize, budget: SearchBudget) -> Construction {
    let out = Oracle::new(g).find(r1, r2, budget);
    match out.verdict {
        SearchVerdict::Found(structure) => Construction::Built {
            structure,
            method: Method::Search,
        },
        SearchVerdict::NoneExists => Construction::Inadmissible {
            reason: "exhaustive search found no structure".into(),
        },
        SearchVerdict::BudgetExhausted => Construction::Unknown {
            reason: format!(
                "search budget exhausted after {} candidates",
                out.candidates_examined
            ),
        },
    }
}

/// Builds a structure of size `(r1, r2)` by the first applicable theorem,
/// falling back to exhaustive search.
pub fn construct_any(
    g: &FiniteGroup,
    r1: usize,
    r2: usize,
    strategy: Strategy,
    budget: SearchBudget,
) -> Result<Construction> {
    if strategy == Strategy::Search {
        if r1 < 3 || r2 < 3 {
            return Ok(Construction::Inadmissible {
                reason: "sizes must be at least 3".into(),
            });
        }
        return Ok(search_route(g, r1, r2, budget));
    }
    match theorem_route(g, r1, r2)? {
        Attempt::Done(c) => Ok(c),
        Attempt::NoTheorem(why) if strategy == Strategy::Theorem => {
            Ok(Construction::Unknown { reason: why })
        }
        Attempt::NoTheorem(_) => Ok(search_route(g, r1, r2, budget)),
    }
}
