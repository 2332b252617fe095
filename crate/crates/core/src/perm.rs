//! Permutations of `{0, …, n-1}` and finite permutation groups.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A permutation stored as its image list: `image(i) = map[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(Error::InvalidCombinatorics(format!("{map:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm(map))
    }

    /// Parses 1-based cycle notation such as `"(1,2,3,4)(5,6,7,8)(9,10)"`; `"()"` is the identity.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let bad = || Error::Schema(format!("invalid cycle notation '{text}'"));
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let items: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            for (k, &x) in items.iter().enumerate() {
                let y = items[(k + 1) % items.len()];
                if x == 0 || x > n || y == 0 || y > n {
                    return Err(bad());
                }
                map[x - 1] = y - 1;
            }
        }
        Perm::from_images(map)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// Restriction to `0..k`, valid when the first `k` points are mapped among themselves.
    pub fn restrict(&self, k: usize) -> Option<Perm> {
        let head: Vec<usize> = self.0[..k].to_vec();
        head.iter().all(|&x| x < k).then_some(Perm(head))
    }

    /// 1-based cycle notation, `()` for the identity.
    pub fn to_cycles(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push((x + 1).to_string());
                x = self.0[x];
            }
            out.push('(');
            out.push_str(&cycle.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

/// Largest group enumerated element by element.
pub const MAX_ENUMERATED_ORDER: u128 = 1_000_000;

/// A permutation group given by generators, with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    order: u128,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>, order: u128) -> Self {
        PermGroup { degree, generators, order }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), order: 1 }
    }

    /// Group generated by `generators`, order obtained by breadth-first closure.
    pub fn generated_by(degree: usize, generators: Vec<Perm>) -> Self {
        let order = closure(degree, &generators).len() as u128;
        PermGroup { degree, generators, order }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// All group elements in breadth-first order from the identity (identity first).
    pub fn elements(&self) -> Vec<Perm> {
        assert!(self.order <= MAX_ENUMERATED_ORDER, "group of order {} too large to enumerate", self.order);
        closure(self.degree, &self.generators)
    }

    /// True when both generating sets generate the same group.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        if self.degree != other.degree || self.order != other.order {
            return false;
        }
        let mine: HashSet<Perm> = self.elements().into_iter().collect();
        other.generators.iter().all(|g| mine.contains(g))
    }
}

fn closure(degree: usize, generators: &[Perm]) -> Vec<Perm> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Perm::from_cycles(10, "(1,2,3,4)(5,6,7,8)(9,10)").unwrap();
        assert_eq!(p.image(0), 1);
        assert_eq!(p.image(3), 0);
        assert_eq!(p.to_cycles(), "(1,2,3,4)(5,6,7,8)(9,10)");
        assert!(Perm::from_cycles(3, "()").unwrap().is_identity());
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn cyclic_group_order() {
        let p = Perm::from_cycles(10, "(1,2,3,4)(5,6,7,8)(9,10)").unwrap();
        assert_eq!(PermGroup::generated_by(10, vec![p]).order(), 4);
    }
}
