//! Cayley tables shipped with the library.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

const D4: &str = include_str!("../../../data/cayley/d4.json");
const Q8: &str = include_str!("../../../data/cayley/q8.json");
const S3: &str = include_str!("../../../data/cayley/s3.json");

pub const BUNDLED_NAMES: [&str; 3] = ["d4", "q8", "s3"];

pub fn bundled_json(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "d4" => Some(D4),
        "q8" => Some(Q8),
        "s3" => Some(S3),
        _ => None,
    }
}

pub fn bundled_group(name: &str) -> Result<FiniteGroup> {
    let text =
        bundled_json(name).ok_or_else(|| Error::Io(format!("no bundled group named {name:?}")))?;
    FiniteGroup::from_cayley_json(text)
}
