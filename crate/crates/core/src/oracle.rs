//! Exhaustive ground truth for small groups.
//!
//! Two independent deciders live here. [`find_structure_by_tuples`] is the
//! literal search: every spherical `T1`, then every spherical `T2` avoiding
//! `Sigma(T1)`. [`Oracle::find`] decides the same question through prime-order
//! subgroups: `Sigma(T1)` and `Sigma(T2)` meet nontrivially iff they share a
//! conjugacy class of subgroups of prime order (an "atom"), so a structure
//! exists iff the atoms can be split into two sides each of which carries a
//! spherical system of the requested length. Whether a given element set
//! carries one is a layered reachability question over (prefix product,
//! generated subgroup of `G/Phi(G)`), which is small at desk scale.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

use crate::element::{Element, ElementSet};
use crate::generation::GenerationTracker;
use crate::group::FiniteGroup;
use crate::numtheory::factorize;
use crate::structures::{check_ramification, cyclic_class_union, sigma, RamStructure};

/// Limits for one search. Exceeding either yields `BudgetExhausted`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_candidates: u64,
    /// Wall-clock limit; ignored on wasm targets, where only the candidate
    /// count applies.
    pub max_millis: u64,
    /// Longest tuple any caller may ask for.
    pub cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 20_000_000_000,
            max_millis: 600_000,
            cap: 16,
        }
    }
}

impl SearchBudget {
    pub fn with_millis(max_millis: u64) -> Self {
        SearchBudget {
            max_millis,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhausted;

/// Candidate counter and clock for one search.
#[derive(Debug)]
pub struct Meter {
    budget: SearchBudget,
    count: u64,
    next_clock_check: u64,
    #[cfg(not(target_arch = "wasm32"))]
    start: Instant,
}

impl Meter {
    pub fn new(budget: SearchBudget) -> Meter {
        Meter {
            budget,
            count: 0,
            next_clock_check: 0,
            #[cfg(not(target_arch = "wasm32"))]
            start: Instant::now(),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn elapsed_ms(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_millis() as u64
        }
        #[cfg(target_arch = "wasm32")]
        {
            0
        }
    }

    pub fn tick(&mut self, n: u64) -> Result<(), Exhausted> {
        self.count += n;
        if self.count > self.budget.max_candidates {
            return Err(Exhausted);
        }
        if self.count >= self.next_clock_check {
            self.next_clock_check = self.count + 50_000;
            if self.elapsed_ms() > self.budget.max_millis {
                return Err(Exhausted);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    Found(RamStructure),
    NoneExists,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub verdict: SearchVerdict,
    pub candidates_examined: u64,
    /// True iff the verdict is definitive.
    pub exhaustive: bool,
    pub elapsed_ms: u64,
}

impl SearchOutcome {
    fn from(result: Result<Option<RamStructure>, Exhausted>, meter: &Meter) -> Self {
        let verdict = match result {
            Ok(Some(s)) => SearchVerdict::Found(s),
            Ok(None) => SearchVerdict::NoneExists,
            Err(Exhausted) => SearchVerdict::BudgetExhausted,
        };
        SearchOutcome {
            exhaustive: verdict != SearchVerdict::BudgetExhausted,
            verdict,
            candidates_examined: meter.count(),
            elapsed_ms: meter.elapsed_ms(),
        }
    }

    pub fn structure(&self) -> Option<&RamStructure> {
        match &self.verdict {
            SearchVerdict::Found(s) => Some(s),
            _ => None,
        }
    }

    /// `Some(existence)` when definitive.
    pub fn exists(&self) -> Option<bool> {
        match self.verdict {
            SearchVerdict::Found(_) => Some(true),
            SearchVerdict::NoneExists => Some(false),
            SearchVerdict::BudgetExhausted => None,
        }
    }
}

/// Calls `visit` on every spherical system of length `r` whose entries all lie
/// in `allowed` (all of `G` when `None`), in lexicographic order of element
/// indices. The first `r - 1` entries range over nontrivial elements, the last
/// is forced. `visit` returns `true` to stop.
pub fn for_each_spherical(
    g: &FiniteGroup,
    r: usize,
    allowed: Option<&ElementSet>,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&[Element]) -> bool,
) -> Result<bool, Exhausted> {
    if r == 0 {
        return Ok(false);
    }
    let mut tracker = GenerationTracker::new(g);
    let choices: Vec<Element> = g
        .nontrivial_elements()
        .filter(|&x| allowed.is_none_or(|a| a.contains(x)))
        .collect();
    let mut prefix = Vec::with_capacity(r);
    let root = tracker.trivial();
    spherical_rec(
        g,
        r,
        allowed,
        &choices,
        &mut tracker,
        root,
        g.identity(),
        &mut prefix,
        meter,
        visit,
    )
}

#[allow(clippy::too_many_arguments)]
fn spherical_rec(
    g: &FiniteGroup,
    r: usize,
    allowed: Option<&ElementSet>,
    choices: &[Element],
    tracker: &mut GenerationTracker,
    h: u32,
    pi: Element,
    prefix: &mut Vec<Element>,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&[Element]) -> bool,
) -> Result<bool, Exhausted> {
    if prefix.len() == r - 1 {
        meter.tick(1)?;
        let last = g.inv(pi);
        if last.is_identity() || allowed.is_some_and(|a| !a.contains(last)) {
            return Ok(false);
        }
        let full = tracker.join(h, last);
        if !tracker.is_full(full) {
            return Ok(false);
        }
        prefix.push(last);
        let stop = visit(prefix);
        prefix.pop();
        return Ok(stop);
    }
    let free_after = (r - 1 - prefix.len() - 1) as u32;
    for &x in choices {
        meter.tick(1)?;
        let h2 = tracker.join(h, x);
        if tracker.deficit(h2) > free_after {
            continue;
        }
        prefix.push(x);
        let stop = spherical_rec(
            g,
            r,
            allowed,
            choices,
            tracker,
            h2,
            g.mul(pi, x),
            prefix,
            meter,
            visit,
        )?;
        prefix.pop();
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All spherical systems of length `r`, in deterministic order.
pub fn enumerate_spherical(g: &FiniteGroup, r: usize) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    let mut meter = Meter::new(SearchBudget {
        max_candidates: u64::MAX,
        max_millis: u64::MAX,
        cap: r,
    });
    for_each_spherical(g, r, None, &mut meter, &mut |t| {
        out.push(t.to_vec());
        false
    })
    .expect("unbounded budget");
    out
}

/// The literal search: `T1` of length `min(r1, r2)` over all spherical
/// systems, then `T2` restricted to elements outside `Sigma(T1)`.
pub fn find_structure_by_tuples(
    g: &FiniteGroup,
    r1: usize,
    r2: usize,
    budget: SearchBudget,
) -> SearchOutcome {
    let mut meter = Meter::new(budget);
    let swap = r2 < r1;
    let (short, long) = if swap { (r2, r1) } else { (r1, r2) };
    let mut found = None;
    let mut tried: HashSet<ElementSet> = HashSet::new();
    let outcome = literal_search(g, short, long, &mut meter, &mut tried, &mut found);
    let result = outcome.map(|_| {
        found.map(|(t1, t2)| {
            let (a, b) = if swap { (t2, t1) } else { (t1, t2) };
            check_ramification(g, &a, &b).expect("oracle witness must validate")
        })
    });
    SearchOutcome::from(result, &meter)
}

type Pair = (Vec<Element>, Vec<Element>);

fn literal_search(
    g: &FiniteGroup,
    short: usize,
    long: usize,
    meter: &mut Meter,
    tried: &mut HashSet<ElementSet>,
    found: &mut Option<Pair>,
) -> Result<(), Exhausted> {
    if short < 3 {
        return Ok(());
    }
    let mut firsts = Vec::new();
    for_each_spherical(g, short, None, meter, &mut |t| {
        firsts.push(t.to_vec());
        false
    })?;
    for t1 in firsts {
        let s1 = sigma(g, &t1);
        if !tried.insert(s1.clone()) {
            continue;
        }
        let mut allowed = ElementSet::full(g.order());
        for x in s1.iter().filter(|x| !x.is_identity()) {
            allowed.remove(x);
        }
        let mut hit = None;
        for_each_spherical(g, long, Some(&allowed), meter, &mut |t2| {
            if sigma(g, t2).intersection(&s1).len() == 1 {
                hit = Some(t2.to_vec());
                true
            } else {
                false
            }
        })?;
        if let Some(t2) = hit {
            *found = Some((t1, t2));
            return Ok(());
        }
    }
    Ok(())
}

/// Up to `limit` structures of size `(r1, r2)`, in deterministic order.
pub fn enumerate_structures(
    g: &FiniteGroup,
    r1: usize,
    r2: usize,
    limit: usize,
    budget: SearchBudget,
) -> (Vec<RamStructure>, bool) {
    let mut meter = Meter::new(budget);
    let mut out = Vec::new();
    let res = (|| -> Result<(), Exhausted> {
        if r1 < 3 || r2 < 3 || limit == 0 {
            return Ok(());
        }
        let mut firsts = Vec::new();
        for_each_spherical(g, r1, None, &mut meter, &mut |t| {
            firsts.push(t.to_vec());
            false
        })?;
        for t1 in firsts {
            let s1 = sigma(g, &t1);
            let mut allowed = ElementSet::full(g.order());
            for x in s1.iter().filter(|x| !x.is_identity()) {
                allowed.remove(x);
            }
            let mut stop = false;
            for_each_spherical(g, r2, Some(&allowed), &mut meter, &mut |t2| {
                if sigma(g, t2).intersection(&s1).len() != 1 {
                    return false;
                }
                out.push(check_ramification(g, &t1, t2).expect("enumerated pair must validate"));
                stop = out.len() >= limit;
                stop
            })?;
            if stop {
                return Ok(());
            }
        }
        Ok(())
    })();
    (out, res.is_ok())
}

/// Witnesses for each tuple length, `None` where no spherical system exists.
#[derive(Debug)]
struct SphEntry {
    max_r: usize,
    witnesses: Vec<Option<Vec<Element>>>,
}

/// Per-group search context; reuse it across sizes of the same group.
pub struct Oracle {
    group: FiniteGroup,
    tracker: GenerationTracker,
    atom_count: usize,
    /// Atoms below each element, i.e. the classes of the prime-order
    /// subgroups of `<g>`.
    elem_atoms: Vec<FixedBitSet>,
    memo: HashMap<ElementSet, Rc<SphEntry>>,
}

impl Oracle {
    pub fn new(g: &FiniteGroup) -> Oracle {
        let n = g.order();
        let mut atom_of = vec![usize::MAX; n];
        let mut atom_count = 0;
        for h in g.nontrivial_elements() {
            if atom_of[h.index()] != usize::MAX {
                continue;
            }
            let o = g.element_order(h) as u64;
            if factorize(o).len() != 1 || factorize(o)[0].1 != 1 {
                continue;
            }
            for x in cyclic_class_union(g, h).iter() {
                if !x.is_identity() {
                    atom_of[x.index()] = atom_count;
                }
            }
            atom_count += 1;
        }
        let elem_atoms = g
            .elements()
            .map(|x| {
                let mut set = FixedBitSet::with_capacity(atom_count);
                let o = g.element_order(x) as i64;
                for (p, _) in factorize(o as u64) {
                    let y = g.pow(x, o / p as i64);
                    set.insert(atom_of[y.index()]);
                }
                set
            })
            .collect();
        Oracle {
            group: g.clone(),
            tracker: GenerationTracker::new(g),
            atom_count,
            elem_atoms,
            memo: HashMap::new(),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Number of conjugacy classes of subgroups of prime order.
    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    fn elements_over(&self, atoms: &FixedBitSet) -> ElementSet {
        let mut out = ElementSet::empty(self.group.order());
        for x in self.group.nontrivial_elements() {
            if self.elem_atoms[x.index()].is_subset(atoms) {
                out.insert(x);
            }
        }
        out
    }

    fn atoms_of(&self, t: &[Element]) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.atom_count);
        for &x in t {
            out.union_with(&self.elem_atoms[x.index()]);
        }
        out
    }

    fn table(
        &mut self,
        allowed: &ElementSet,
        max_r: usize,
        meter: &mut Meter,
    ) -> Result<Rc<SphEntry>, Exhausted> {
        if let Some(e) = self.memo.get(allowed) {
            if e.max_r >= max_r {
                return Ok(e.clone());
            }
        }
        let entry = Rc::new(self.spherical_dp(allowed, max_r, meter)?);
        self.memo.insert(allowed.clone(), entry.clone());
        Ok(entry)
    }

    /// A spherical system of length `r` with entries in `allowed`, if any.
    pub fn spherical_witness(
        &mut self,
        allowed: &ElementSet,
        r: usize,
        meter: &mut Meter,
    ) -> Result<Option<Vec<Element>>, Exhausted> {
        Ok(self.table(allowed, r, meter)?.witnesses[r].clone())
    }

    fn spherical_dp(
        &mut self,
        allowed: &ElementSet,
        max_r: usize,
        meter: &mut Meter,
    ) -> Result<SphEntry, Exhausted> {
        struct State {
            pi: Element,
            h: u32,
            parent: u32,
            via: Element,
        }
        let g = self.group.clone();
        let choices: Vec<Element> = allowed.iter().filter(|x| !x.is_identity()).collect();
        let mut witnesses = vec![None; max_r + 1];
        let mut layers: Vec<Vec<State>> = vec![vec![State {
            pi: g.identity(),
            h: self.tracker.trivial(),
            parent: u32::MAX,
            via: g.identity(),
        }]];
        for k in 0..max_r {
            // completions of length k + 1
            let layer = &layers[k];
            let r = k + 1;
            if k >= 1 {
                for (i, s) in layer.iter().enumerate() {
                    let last = g.inv(s.pi);
                    if last.is_identity() || !allowed.contains(last) {
                        continue;
                    }
                    let h = self.tracker.join(s.h, last);
                    if self.tracker.is_full(h) {
                        let mut t = vec![last];
                        let mut idx = i;
                        for j in (1..=k).rev() {
                            let st = &layers[j][idx];
                            t.push(st.via);
                            idx = st.parent as usize;
                        }
                        t.reverse();
                        witnesses[r] = Some(t);
                        break;
                    }
                }
            }
            if k + 1 >= max_r {
                break;
            }
            // extend to prefixes of length k + 1; a completion of length at
            // most max_r still has max_r - 2 - k free slots afterwards
            let free_after = (max_r - 2 - k) as u32;
            let mut next: Vec<State> = Vec::new();
            let mut seen: HashMap<u64, u32> = HashMap::new();
            for (i, s) in layers[k].iter().enumerate() {
                meter.tick(choices.len() as u64 + 1)?;
                for &x in &choices {
                    let h = self.tracker.join(s.h, x);
                    if self.tracker.deficit(h) > free_after {
                        continue;
                    }
                    let pi = g.mul(s.pi, x);
                    let key = ((pi.index() as u64) << 32) | h as u64;
                    if let std::collections::hash_map::Entry::Vacant(v) = seen.entry(key) {
                        v.insert(next.len() as u32);
                        next.push(State {
                            pi,
                            h,
                            parent: i as u32,
                            via: x,
                        });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        Ok(SphEntry { max_r, witnesses })
    }

    /// Decides whether a structure of size `(r1, r2)` exists.
    pub fn find(&mut self, r1: usize, r2: usize, budget: SearchBudget) -> SearchOutcome {
        let mut meter = Meter::new(budget);
        let result = self.find_with(r1, r2, &mut meter);
        SearchOutcome::from(result, &meter)
    }

    fn find_with(
        &mut self,
        r1: usize,
        r2: usize,
        meter: &mut Meter,
    ) -> Result<Option<RamStructure>, Exhausted> {
        if r1 < 3 || r2 < 3 {
            return Ok(None);
        }
        let l1 = FixedBitSet::with_capacity(self.atom_count);
        let l2 = FixedBitSet::with_capacity(self.atom_count);
        let mut u = FixedBitSet::with_capacity(self.atom_count);
        u.insert_range(..);
        let found = self.split(r1, r2, l1, l2, u, r1 == r2, meter)?;
        Ok(found.map(|(t1, t2)| {
            check_ramification(&self.group, &t1, &t2).expect("oracle witness must validate")
        }))
    }

    #[allow(clippy::too_many_arguments)]
    fn split(
        &mut self,
        r1: usize,
        r2: usize,
        l1: FixedBitSet,
        l2: FixedBitSet,
        u: FixedBitSet,
        symmetric: bool,
        meter: &mut Meter,
    ) -> Result<Option<Pair>, Exhausted> {
        meter.tick(1)?;
        let max_r = r1.max(r2);
        let mut side1 = l1.clone();
        side1.union_with(&u);
        let mut side2 = l2.clone();
        side2.union_with(&u);
        let a1 = self.elements_over(&side1);
        let Some(t1) = self.table(&a1, max_r, meter)?.witnesses[r1].clone() else {
            return Ok(None);
        };
        let a2 = self.elements_over(&side2);
        let Some(t2) = self.table(&a2, max_r, meter)?.witnesses[r2].clone() else {
            return Ok(None);
        };
        let atoms1 = self.atoms_of(&t1);
        let atoms2 = self.atoms_of(&t2);
        if atoms1.is_disjoint(&atoms2) {
            return Ok(Some((t1, t2)));
        }
        // complete greedily around each witness before branching
        for (first, atoms) in [(true, &atoms1), (false, &atoms2)] {
            let mut other = if first { l2.clone() } else { l1.clone() };
            let mut rest = u.clone();
            rest.difference_with(atoms);
            other.union_with(&rest);
            let a = self.elements_over(&other);
            let r_other = if first { r2 } else { r1 };
            if let Some(t) = self.table(&a, max_r, meter)?.witnesses[r_other].clone() {
                return Ok(Some(if first { (t1, t) } else { (t, t2) }));
            }
        }
        let mut shared = atoms1.clone();
        shared.intersect_with(&atoms2);
        let c = shared
            .ones()
            .next()
            .expect("witness atoms outside the undecided set would be disjoint");
        debug_assert!(u.contains(c));
        let mut rest = u;
        rest.set(c, false);
        let mut with1 = l1.clone();
        with1.insert(c);
        if let Some(found) = self.split(r1, r2, with1, l2.clone(), rest.clone(), false, meter)? {
            return Ok(Some(found));
        }
        if symmetric {
            // with equal lengths, sending the first shared atom to either
            // side is the same up to swapping the tuples
            return Ok(None);
        }
        let mut with2 = l2;
        with2.insert(c);
        self.split(r1, r2, l1, with2, rest, false, meter)
    }
}

/// One-shot wrapper around [`Oracle::find`].
pub fn find_structure(
    g: &FiniteGroup,
    r1: usize,
    r2: usize,
    budget: SearchBudget,
) -> SearchOutcome {
    Oracle::new(g).find(r1, r2, budget)
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeSet {
    pub cap: usize,
    /// `(r1, r2)` with `r1 <= r2` that admit a structure.
    pub pairs: Vec<(usize, usize)>,
    /// Pairs the budget did not decide.
    pub undecided: Vec<(usize, usize)>,
    pub exhaustive: bool,
    pub candidates_examined: u64,
    pub elapsed_ms: u64,
}

/// All sizes `3 <= r1 <= r2 <= cap` of structures on `g`. The budget applies
/// to the whole sweep.
pub fn size_set_up_to(g: &FiniteGroup, cap: usize, budget: SearchBudget) -> SizeSet {
    let mut oracle = Oracle::new(g);
    let mut meter = Meter::new(budget);
    let mut pairs = Vec::new();
    let mut undecided = Vec::new();
    for r1 in 3..=cap {
        for r2 in r1..=cap {
            match oracle.find_with(r1, r2, &mut meter) {
                Ok(Some(_)) => pairs.push((r1, r2)),
                Ok(None) => {}
                Err(Exhausted) => undecided.push((r1, r2)),
            }
        }
    }
    SizeSet {
        cap,
        pairs,
        exhaustive: undecided.is_empty(),
        undecided,
        candidates_examined: meter.count(),
        elapsed_ms: meter.elapsed_ms(),
    }
}
