//! Element and tuple literals.
//!
//! ```text
//! tuple  := '[' element (';' element)* ']'
//! expr   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := '(' expr ')' | vector | pair | 'x' int | '#' int | '1' | name
//! ```
//!
//! `vector` is `(e1,...,ek)` for abelian groups and `(a,b,c)` for Heisenberg
//! groups; `pair` is `(left|right)` for direct products, each side parsed in
//! its factor. `x<i>` is the i-th cyclic generator of an abelian group and
//! `name` a declared Cayley element name.

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Realization};

pub fn parse_element(g: &FiniteGroup, text: &str) -> Result<Element> {
    let trimmed = text.trim();
    if let Realization::CayleyTable { names: Some(names) } = g.realization() {
        if let Some(i) = names.iter().position(|n| n == trimmed) {
            return Ok(Element(i as u32));
        }
    }
    let chars: Vec<char> = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::parse(0, "empty element literal"));
    }
    let mut p = LiteralParser {
        g,
        chars: &chars,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != chars.len() {
        return Err(Error::parse(
            p.pos,
            format!("unexpected {:?}", chars[p.pos]),
        ));
    }
    Ok(e)
}

/// Parses `[el; el; ...]` (brackets optional). Empty tuples are rejected.
pub fn parse_tuple(g: &FiniteGroup, text: &str) -> Result<Vec<Element>> {
    let t = text.trim();
    let inner = match (t.strip_prefix('['), t.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => t,
        _ => return Err(Error::parse(0, "unbalanced tuple brackets")),
    };
    if inner.trim().is_empty() {
        return Err(Error::parse(0, "empty tuple"));
    }
    split_top_level(inner, ';')
        .into_iter()
        .map(|part| parse_element(g, part))
        .collect()
}

/// Normal form of a tuple literal: parse then render.
pub fn normalize_tuple(g: &FiniteGroup, text: &str) -> Result<String> {
    Ok(g.render_tuple(&parse_tuple(g, text)?))
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

struct LiteralParser<'a> {
    g: &'a FiniteGroup,
    chars: &'a [char],
    pos: usize,
}

const DELIMS: &[char] = &['*', '^', '(', ')', '|', ',', ';'];

impl LiteralParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn signed_int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = self.g.mul(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.signed_int()?;
            return Ok(self.g.pow(base, k));
        }
        Ok(base)
    }

    /// Index of the `)` matching the `(` at `self.pos`.
    fn matching_paren(&self) -> Result<usize> {
        let mut depth = 0;
        for i in self.pos..self.chars.len() {
            match self.chars[i] {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(i);
                    }
                }
                _ => {}
            }
        }
        Err(Error::parse(self.pos, "unclosed parenthesis"))
    }

    fn atom(&mut self) -> Result<Element> {
        let start = self.pos;
        match self.peek() {
            None => Err(Error::parse(start, "unexpected end of literal")),
            Some('(') => {
                let close = self.matching_paren()?;
                let inner: String = self.chars[start + 1..close].iter().collect();
                let bars = split_top_level(&inner, '|');
                let commas = split_top_level(&inner, ',');
                let is_int = inner.parse::<i64>().is_ok();
                let e = if bars.len() > 1 {
                    self.pair(start, &bars)?
                } else if commas.len() > 1 || is_int {
                    self.vector(start, &commas)?
                } else {
                    let mut sub = LiteralParser {
                        g: self.g,
                        chars: &self.chars[..close],
                        pos: start + 1,
                    };
                    let e = sub.expr()?;
                    if sub.pos != close {
                        return Err(Error::parse(sub.pos, "unexpected input in parentheses"));
                    }
                    e
                };
                self.pos = close + 1;
                Ok(e)
            }
            Some('#') => {
                self.pos += 1;
                let at = self.pos;
                let i = self.signed_int()?;
                if i < 0 {
                    return Err(Error::parse(at, "negative index"));
                }
                self.g.element(i as usize).map_err(|_| {
                    Error::OutOfRange(format!("index {i} in group of order {}", self.g.order()))
                })
            }
            Some(_) => {
                let from = self.pos;
                while self.peek().is_some_and(|c| !DELIMS.contains(&c)) {
                    self.pos += 1;
                }
                let word: String = self.chars[from..self.pos].iter().collect();
                self.word(from, &word)
            }
        }
    }

    fn word(&self, at: usize, word: &str) -> Result<Element> {
        if word == "1" {
            return Ok(Element::IDENTITY);
        }
        match self.g.realization() {
            Realization::Abelian { orders } => {
                let idx = word
                    .strip_prefix(['x', 'X'])
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(at, format!("unknown generator {word:?}")))?;
                if idx == 0 || idx > orders.len() {
                    return Err(Error::OutOfRange(format!(
                        "generator x{idx} in a group with {} cyclic factors",
                        orders.len()
                    )));
                }
                let mut coords = vec![0i64; orders.len()];
                coords[idx - 1] = 1;
                Ok(self.g.abelian_element(&coords).unwrap())
            }
            Realization::CayleyTable { names: Some(names) } => names
                .iter()
                .position(|n| n == word)
                .map(|i| Element(i as u32))
                .ok_or_else(|| Error::parse(at, format!("unknown element name {word:?}"))),
            _ => Err(Error::parse(at, format!("unexpected word {word:?}"))),
        }
    }

    fn vector(&self, at: usize, parts: &[&str]) -> Result<Element> {
        let nums: Vec<i64> = parts
            .iter()
            .map(|s| {
                s.parse::<i64>().map_err(|_| {
                    Error::parse(at, format!("expected integer coordinate, got {s:?}"))
                })
            })
            .collect::<Result<_>>()?;
        let in_range = |v: i64, n: u32| v >= 0 && v < n as i64;
        match self.g.realization() {
            Realization::Abelian { orders } => {
                if nums.len() != orders.len() {
                    return Err(Error::parse(
                        at,
                        format!("expected {} coordinates, got {}", orders.len(), nums.len()),
                    ));
                }
                if let Some((v, n)) = nums.iter().zip(orders).find(|(v, n)| !in_range(**v, **n)) {
                    return Err(Error::OutOfRange(format!("coordinate {v} not in 0..{n}")));
                }
                Ok(self.g.abelian_element(&nums).unwrap())
            }
            Realization::Heisenberg { p } => {
                if nums.len() != 3 {
                    return Err(Error::parse(at, "Heisenberg elements are triples (a,b,c)"));
                }
                if let Some(v) = nums.iter().find(|v| !in_range(**v, *p)) {
                    return Err(Error::OutOfRange(format!("coordinate {v} not in 0..{p}")));
                }
                Ok(self
                    .g
                    .heisenberg_element(nums[0], nums[1], nums[2])
                    .unwrap())
            }
            _ => Err(Error::parse(
                at,
                "coordinate vectors are only defined for abelian and Heisenberg groups",
            )),
        }
    }

    fn pair(&self, at: usize, parts: &[&str]) -> Result<Element> {
        match self.g.realization() {
            Realization::DirectProduct { left, right } if parts.len() == 2 => {
                let l = parse_element(left, parts[0])?;
                let r = parse_element(right, parts[1])?;
                Ok(self.g.product_element(l, r).unwrap())
            }
            _ => Err(Error::parse(
                at,
                "pair literal (a|b) requires a direct product",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::bundled_group;
    use crate::spec::GroupSpec;
    use proptest::prelude::*;

    fn group(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn abelian_literals() {
        let g = group("C2xC4xC4xC4");
        assert_eq!(
            parse_element(&g, "x2^-1").unwrap(),
            parse_element(&g, "(0,3,0,0)").unwrap()
        );
        let c5 = group("C5xC5");
        assert_eq!(
            c5.abelian_coords(parse_element(&c5, "x1*x2^2").unwrap()),
            Some(vec![1, 2])
        );
        assert!(matches!(
            parse_element(&c5, "(5,0)"),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            parse_element(&c5, "x3"),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(parse_element(&c5, "y1"), Err(Error::Parse { .. })));
        assert_eq!(parse_element(&c5, "1").unwrap(), Element::IDENTITY);
        assert_eq!(
            parse_element(&c5, "(x1*x2)^-1").unwrap(),
            c5.abelian_element(&[4, 4]).unwrap()
        );
    }

    #[test]
    fn other_realizations() {
        let h = group("heis(3)");
        assert_eq!(
            h.heisenberg_coords(parse_element(&h, "(1,0,2)").unwrap()),
            Some((1, 0, 2))
        );
        assert_eq!(
            h.heisenberg_coords(parse_element(&h, "(1,0,0)*(0,1,0)").unwrap()),
            Some((1, 1, 1))
        );
        let q8 = bundled_group("q8").unwrap();
        let i = parse_element(&q8, "i").unwrap();
        assert_eq!(parse_element(&q8, "-1").unwrap(), q8.mul(i, i));
        assert_eq!(
            parse_element(&q8, "i*j^-1").unwrap(),
            parse_element(&q8, "-k").unwrap()
        );
        let p = group("prod(C3,heis(3))");
        let e = parse_element(&p, "(x1|(1,1,0))").unwrap();
        assert_eq!(p.render(e), "(x1|(1,1,0))");
    }

    #[test]
    fn tuples() {
        let g = group("C5xC5");
        let t = parse_tuple(&g, "[x1; x2; (x1*x2)^-1]").unwrap();
        assert_eq!(t.len(), 3);
        assert!(parse_tuple(&g, "[]").is_err());
        assert!(parse_tuple(&g, "[x1; x2").is_err());
        assert_eq!(normalize_tuple(&g, "[x1 ; x2^6]").unwrap(), "[x1; x2]");
    }

    fn all_groups() -> Vec<FiniteGroup> {
        [
            "C2xC4xC3",
            "heis(3)",
            "cayley:q8",
            "cayley:s3",
            "prod(C2,cayley:d4)",
            "prod(C3xC3,C2xC2)",
        ]
        .iter()
        .map(|s| group(s))
        .collect()
    }

    #[test]
    fn render_then_parse_is_identity() {
        for g in all_groups() {
            for x in g.elements() {
                assert_eq!(
                    parse_element(&g, &g.render(x)).unwrap(),
                    x,
                    "{}",
                    g.render(x)
                );
            }
        }
    }

    proptest! {
        #[test]
        fn tuple_rendering_is_a_fixed_point(which in 0usize..6, idx in proptest::collection::vec(0usize..1000, 1..8)) {
            let g = &all_groups()[which];
            let t: Vec<Element> = idx.iter().map(|i| Element((i % g.order()) as u32)).collect();
            let rendered = g.render_tuple(&t);
            prop_assert_eq!(parse_tuple(g, &rendered).unwrap(), t);
            prop_assert_eq!(normalize_tuple(g, &rendered).unwrap(), rendered);
        }
    }
}
