//! Textual group descriptions.
//!
//! ```text
//! spec  := term ('x' term)*
//! term  := 'C' int | 'abelian(' int (',' int)* ')' | 'heis(' int ')'
//!        | 'cayley:' path | 'prod(' spec ',' spec ')'
//! ```
//!
//! Keywords are case-insensitive and whitespace is ignored. A chain made only
//! of cyclic factors becomes one abelian group; mixed chains fold into nested
//! direct products. A Cayley path ends at the next `,` or `)`; the names of
//! bundled tables (`d4`, `q8`, `s3`) resolve without touching the filesystem.

use std::fmt;

use crate::bundled::bundled_json;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::numtheory::is_prime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Abelian(Vec<u64>),
    Heis(u64),
    Cayley(String),
    Prod(Box<GroupSpec>, Box<GroupSpec>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Abelian(orders) => {
                let parts: Vec<String> = orders.iter().map(|n| format!("C{n}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            GroupSpec::Heis(p) => write!(f, "heis({p})"),
            GroupSpec::Cayley(path) => write!(f, "cayley:{path}"),
            GroupSpec::Prod(a, b) => write!(f, "prod({a},{b})"),
        }
    }
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = SpecParser { chars, pos: 0 };
        let spec = p.chain()?;
        if p.pos != p.chars.len() {
            return Err(Error::parse(
                p.pos,
                format!("unexpected {:?}", p.chars[p.pos]),
            ));
        }
        Ok(spec)
    }

    /// Materializes the group. Cayley paths are read from disk unless they name
    /// a bundled table.
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Abelian(orders) => FiniteGroup::abelian(orders),
            GroupSpec::Heis(p) => FiniteGroup::heisenberg(*p),
            GroupSpec::Cayley(path) => {
                let text = match bundled_json(path) {
                    Some(t) => t.to_string(),
                    None => std::fs::read_to_string(path)
                        .map_err(|e| Error::Io(format!("cannot read {path}: {e}")))?,
                };
                FiniteGroup::from_cayley_json(&text)
            }
            GroupSpec::Prod(a, b) => a.build()?.direct_product(&b.build()?),
        }
    }
}

struct SpecParser {
    chars: Vec<char>,
    pos: usize,
}

impl SpecParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let n = kw.chars().count();
        if self.pos + n > self.chars.len() {
            return false;
        }
        let slice: String = self.chars[self.pos..self.pos + n].iter().collect();
        if slice.eq_ignore_ascii_case(kw) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected {c:?}")))
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::parse(start, format!("integer {s} too large")))
    }

    fn chain(&mut self) -> Result<GroupSpec> {
        let mut terms = vec![self.term()?];
        while matches!(self.peek(), Some('x' | 'X')) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        if terms.iter().all(|t| matches!(t, GroupSpec::Abelian(_))) {
            let orders = terms
                .into_iter()
                .flat_map(|t| match t {
                    GroupSpec::Abelian(o) => o,
                    _ => unreachable!(),
                })
                .collect();
            return Ok(GroupSpec::Abelian(orders));
        }
        let mut it = terms.into_iter();
        let first = it.next().unwrap();
        Ok(it.fold(first, |acc, t| GroupSpec::Prod(Box::new(acc), Box::new(t))))
    }

    fn order(&mut self) -> Result<u64> {
        let n = self.int()?;
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(n)
    }

    fn term(&mut self) -> Result<GroupSpec> {
        let start = self.pos;
        if self.eat_keyword("heis(") {
            let p = self.int()?;
            self.expect(')')?;
            if p == 2 || !is_prime(p) {
                return Err(Error::InvalidPrime(p));
            }
            return Ok(GroupSpec::Heis(p));
        }
        if self.eat_keyword("prod(") {
            let a = self.chain()?;
            self.expect(',')?;
            let b = self.chain()?;
            self.expect(')')?;
            return Ok(GroupSpec::Prod(Box::new(a), Box::new(b)));
        }
        if self.eat_keyword("abelian(") {
            let mut orders = vec![self.order()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                orders.push(self.order()?);
            }
            self.expect(')')?;
            return Ok(GroupSpec::Abelian(orders));
        }
        if self.eat_keyword("cayley:") {
            let from = self.pos;
            while self.peek().is_some_and(|c| c != ',' && c != ')') {
                self.pos += 1;
            }
            if from == self.pos {
                return Err(Error::parse(from, "empty Cayley path"));
            }
            return Ok(GroupSpec::Cayley(
                self.chars[from..self.pos].iter().collect(),
            ));
        }
        if matches!(self.peek(), Some('c' | 'C')) {
            self.pos += 1;
            return Ok(GroupSpec::Abelian(vec![self.order()?]));
        }
        Err(Error::parse(
            start,
            "expected a group term (C<n>, heis(p), cayley:path, prod(a,b))",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            GroupSpec::parse("C2xC4xC4xC4").unwrap(),
            GroupSpec::Abelian(vec![2, 4, 4, 4])
        );
        assert_eq!(GroupSpec::parse("heis(5)").unwrap(), GroupSpec::Heis(5));
        assert_eq!(
            GroupSpec::parse(" HEIS ( 3 ) ").unwrap(),
            GroupSpec::Heis(3)
        );
        assert_eq!(GroupSpec::parse("C1xC2"), Err(Error::InvalidOrder(1)));
        assert_eq!(GroupSpec::parse("heis(4)"), Err(Error::InvalidPrime(4)));
        assert_eq!(GroupSpec::parse("heis(2)"), Err(Error::InvalidPrime(2)));
        assert!(matches!(GroupSpec::parse("C2x"), Err(Error::Parse { .. })));
        assert!(matches!(
            GroupSpec::parse("C2)"),
            Err(Error::Parse { pos: 2, .. })
        ));
    }

    #[test]
    fn products_and_cayley() {
        let s = GroupSpec::parse("prod(C3xC3, cayley:q8)").unwrap();
        assert_eq!(s.to_string(), "prod(C3xC3,cayley:q8)");
        assert_eq!(s.build().unwrap().order(), 72);
        let mixed = GroupSpec::parse("C2xheis(3)").unwrap();
        assert!(matches!(mixed, GroupSpec::Prod(_, _)));
        assert_eq!(mixed.build().unwrap().order(), 54);
        assert_eq!(
            GroupSpec::parse("abelian(6,6,2)").unwrap().to_string(),
            "C6xC6xC2"
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "C2xC4",
            "heis(7)",
            "prod(C2,prod(heis(3),cayley:d4))",
            "cayley:s3",
        ] {
            let s = GroupSpec::parse(text).unwrap();
            assert_eq!(GroupSpec::parse(&s.to_string()).unwrap(), s);
        }
    }
}
