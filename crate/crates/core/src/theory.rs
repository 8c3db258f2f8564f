//! Closed-form descriptions of the size set `S(G)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Realization};
use crate::invariants::{
    exponent, exponent_log, is_semi_abelian, min_generators, pgroup_prime, power_image,
    sylow_decomposition,
};
use crate::numtheory::is_prime;

/// `S(G)` as a minimum size, finitely many excluded unordered pairs and a
/// parity flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeConstraintSet {
    pub admits: bool,
    pub min_size: usize,
    /// Unordered pairs, stored with the smaller entry first.
    pub excluded_pairs: Vec<(usize, usize)>,
    pub forbid_both_odd: bool,
    pub provenance: Vec<String>,
}

impl SizeConstraintSet {
    fn none(reason: String) -> Self {
        SizeConstraintSet {
            admits: false,
            min_size: 0,
            excluded_pairs: Vec::new(),
            forbid_both_odd: false,
            provenance: vec![reason],
        }
    }

    pub fn contains(&self, r1: usize, r2: usize) -> bool {
        membership(self, r1, r2)
    }

    /// All `(r1, r2)` with `3 <= r1 <= r2 <= cap` in the set.
    pub fn grid(&self, cap: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r1 in 3..=cap {
            for r2 in r1..=cap {
                if self.contains(r1, r2) {
                    out.push((r1, r2));
                }
            }
        }
        out
    }
}

pub fn membership(scs: &SizeConstraintSet, r1: usize, r2: usize) -> bool {
    let key = (r1.min(r2), r1.max(r2));
    scs.admits
        && r1 >= scs.min_size
        && r2 >= scs.min_size
        && !scs.excluded_pairs.contains(&key)
        && !(scs.forbid_both_odd && r1 % 2 == 1 && r2 % 2 == 1)
}

fn small_prime_floor(p: u64) -> usize {
    match p {
        2 => 5,
        3 => 4,
        _ => 3,
    }
}

pub fn predict_elementary_abelian(p: u64, d: usize) -> Result<SizeConstraintSet> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if d == 0 {
        return Err(Error::OutOfRange("rank must be at least 1".into()));
    }
    let admits = (p >= 3 && d >= 2) || (p == 2 && d >= 3);
    if !admits {
        let need = if p == 2 { 3 } else { 2 };
        return Ok(SizeConstraintSet::none(format!(
            "elementary abelian C{p}^{d}: rank must be at least {need}"
        )));
    }
    let floor = small_prime_floor(p);
    let m = (d + 1).max(floor);
    let mut provenance = vec![
        format!("elementary abelian C{p}^{d}: admits"),
        format!("min_size = max(d + 1, {floor}) = {m}"),
    ];
    let forbid = p == 2 && d == 3;
    if forbid {
        provenance.push("C2^3: sizes may not both be odd".into());
    }
    Ok(SizeConstraintSet {
        admits: true,
        min_size: m,
        excluded_pairs: Vec::new(),
        forbid_both_odd: forbid,
        provenance,
    })
}

/// Groups of prime exponent: the answer for `G/Phi(G)`.
pub fn predict_exponent_p(g: &FiniteGroup) -> Result<SizeConstraintSet> {
    let exp = exponent(g);
    if !is_prime(exp) {
        return Err(Error::NotExponentP);
    }
    let d = min_generators(g)?;
    let mut scs = predict_elementary_abelian(exp, d)?;
    scs.provenance.insert(
        0,
        format!("exponent {exp}: same sizes as G/Phi(G) = C{exp}^{d}"),
    );
    Ok(scs)
}

/// Hypothesis check for the semi-abelian predictor: abelian realizations are
/// accepted without scanning.
pub fn check_semi_abelian_top(g: &FiniteGroup) -> Result<()> {
    let e = exponent_log(g)?;
    if matches!(g.realization(), Realization::Abelian { .. }) || e <= 1 {
        return Ok(());
    }
    let verdict = is_semi_abelian(g, e - 1)?;
    if verdict.holds {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "group is not semi-p^{}-abelian",
            e - 1
        )))
    }
}

/// p-groups that are semi-p^(e-1)-abelian, where `p^e = exp G`.
pub fn predict_semi_abelian_pgroup(g: &FiniteGroup) -> Result<SizeConstraintSet> {
    let p = pgroup_prime(g)?;
    check_semi_abelian_top(g)?;
    let e = exponent_log(g)?;
    let d = min_generators(g)?;
    let x = power_image(g, e - 1)?.len();
    let need = if p == 2 { 8 } else { p as usize * p as usize };
    if x < need {
        return Ok(SizeConstraintSet::none(format!(
            "p = {p}: |X| = {x} < {need}"
        )));
    }
    let floor = small_prime_floor(p);
    let m = (d + 1).max(floor);
    let mut scs = SizeConstraintSet {
        admits: true,
        min_size: m,
        excluded_pairs: Vec::new(),
        forbid_both_odd: false,
        provenance: vec![
            format!("p = {p}, e = {e}, d = {d}: |X| = {x} >= {need}"),
            format!("min_size = max(d + 1, {floor}) = {m}"),
        ],
    };
    if p == 2 && x == 8 {
        scs.excluded_pairs.push((5, 5));
        scs.provenance.push("|X| = 8: (5,5) excluded".into());
        if e == 1 {
            scs.forbid_both_odd = true;
            scs.provenance
                .push("G = C2^3: sizes may not both be odd".into());
        }
    }
    Ok(scs)
}

/// Nilpotent groups whose Sylow subgroups all satisfy the semi-abelian
/// hypothesis.
pub fn predict_nilpotent(g: &FiniteGroup) -> Result<SizeConstraintSet> {
    if g.order() == 1 {
        return Ok(SizeConstraintSet::none("trivial group".into()));
    }
    let factors = sylow_decomposition(g)?;
    if factors.len() == 1 {
        return predict_semi_abelian_pgroup(g);
    }
    let d = min_generators(g)?;
    let mut out = SizeConstraintSet {
        admits: true,
        min_size: d + 1,
        excluded_pairs: Vec::new(),
        forbid_both_odd: false,
        provenance: vec![format!("nilpotent, d = {d}: min_size >= {}", d + 1)],
    };
    for f in &factors {
        let local = predict_semi_abelian_pgroup(&f.group)?;
        if !local.admits {
            return Ok(SizeConstraintSet::none(format!(
                "Sylow {}-subgroup does not admit: {}",
                f.p,
                local.provenance.join("; ")
            )));
        }
        out.min_size = out.min_size.max(local.min_size);
        for pair in local.excluded_pairs {
            if !out.excluded_pairs.contains(&pair) {
                out.excluded_pairs.push(pair);
            }
        }
        out.provenance.push(format!(
            "Sylow {}-subgroup: min_size {}{}",
            f.p,
            local.min_size,
            if local.forbid_both_odd {
                ", parity bar not inherited"
            } else {
                ""
            }
        ));
    }
    out.provenance.push(format!("min_size = {}", out.min_size));
    Ok(out)
}

/// The predictor that applies to `g`, if any: the nilpotent one covers every
/// p-group and exponent-p group.
pub fn predict(g: &FiniteGroup) -> Result<SizeConstraintSet> {
    if exponent(g) > 1 && is_prime(exponent(g)) && pgroup_prime(g).is_ok() {
        return predict_exponent_p(g);
    }
    predict_nilpotent(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{bundled, c2_c4_cubed};

    fn ab(orders: &[u64]) -> FiniteGroup {
        FiniteGroup::abelian(orders).unwrap()
    }

    #[test]
    fn elementary_abelian_examples() {
        let s = predict_elementary_abelian(5, 2).unwrap();
        assert!(s.admits);
        assert_eq!(s.min_size, 3);
        assert!(s.excluded_pairs.is_empty());
        assert!(!predict_elementary_abelian(2, 2).unwrap().admits);
        let s = predict_elementary_abelian(2, 3).unwrap();
        assert_eq!((s.admits, s.min_size, s.forbid_both_odd), (true, 5, true));
        assert_eq!(predict_elementary_abelian(3, 2).unwrap().min_size, 4);
        assert_eq!(predict_elementary_abelian(2, 5).unwrap().min_size, 6);
        assert!(predict_elementary_abelian(4, 2).is_err());
    }

    #[test]
    fn exponent_p_examples() {
        let h5 = FiniteGroup::heisenberg(5).unwrap();
        let s = predict_exponent_p(&h5).unwrap();
        assert_eq!((s.admits, s.min_size), (true, 3));
        let h3 = FiniteGroup::heisenberg(3).unwrap();
        assert_eq!(predict_exponent_p(&h3).unwrap().min_size, 4);
        let s = predict_exponent_p(&ab(&[2, 2, 2])).unwrap();
        assert_eq!((s.min_size, s.forbid_both_odd), (5, true));
        assert_eq!(predict_exponent_p(&ab(&[4])), Err(Error::NotExponentP));
    }

    #[test]
    fn semi_abelian_examples() {
        let s = predict_semi_abelian_pgroup(&c2_c4_cubed()).unwrap();
        assert!(s.admits);
        assert_eq!(s.min_size, 5);
        assert_eq!(s.excluded_pairs, vec![(5, 5)]);
        assert!(!s.forbid_both_odd);
        assert!(s.contains(7, 5));
        assert!(!predict_semi_abelian_pgroup(&ab(&[4, 4])).unwrap().admits);
        let s = predict_semi_abelian_pgroup(&ab(&[9, 9])).unwrap();
        assert_eq!((s.admits, s.min_size), (true, 4));
        assert!(matches!(
            predict_semi_abelian_pgroup(&bundled("q8")),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn nilpotent_examples() {
        let g = ab(&[6, 6, 2]);
        let s = predict_nilpotent(&g).unwrap();
        assert_eq!((s.admits, s.min_size, s.forbid_both_odd), (true, 5, false));
        assert_eq!(s.excluded_pairs, vec![(5, 5)]);
        assert!(membership(&s, 5, 7));
        assert!(!membership(&s, 5, 5));
        let c2c = predict_nilpotent(&ab(&[2, 2, 2])).unwrap();
        assert!(c2c.forbid_both_odd);
        assert!(!membership(&c2c, 7, 9));
        assert!(!membership(&c2c, 5, 7));
        assert!(!predict_nilpotent(&ab(&[15])).unwrap().admits);
        assert_eq!(predict_nilpotent(&bundled("s3")), Err(Error::NotNilpotent));
    }

    #[test]
    fn nilpotent_matches_pgroup_predictor_on_pgroups() {
        for orders in [&[2u64, 2, 2][..], &[2, 4, 4, 4], &[3, 9], &[5, 5], &[8]] {
            let g = ab(orders);
            assert_eq!(predict_nilpotent(&g), predict_semi_abelian_pgroup(&g));
        }
    }

    #[test]
    fn grid_properties() {
        let groups = [
            ab(&[2, 2, 2]),
            ab(&[2, 2, 2, 2]),
            ab(&[3, 3]),
            ab(&[6, 6, 2]),
            c2_c4_cubed(),
            FiniteGroup::heisenberg(5).unwrap(),
        ];
        for g in &groups {
            let s = predict(g).unwrap();
            let d = min_generators(g).unwrap();
            let odd_only = g.order() % 2 == 1;
            for r1 in 3..12 {
                for r2 in 3..12 {
                    let inside = s.contains(r1, r2);
                    assert_eq!(inside, s.contains(r2, r1));
                    if inside {
                        assert!(r1 > d && r2 > d);
                        assert!(s.contains(r1 + 2, r2));
                        if odd_only {
                            assert!(s.contains(r1 + 1, r2));
                        }
                    }
                }
            }
        }
    }
}
