use crate::bundled::bundled_group;
use crate::group::FiniteGroup;

pub fn bundled(name: &str) -> FiniteGroup {
    bundled_group(name).unwrap()
}

pub fn c2_c4_cubed() -> FiniteGroup {
    FiniteGroup::abelian(&[2, 4, 4, 4]).unwrap()
}
