//! Finite posets stored as a dense order relation.

/// A finite partial order on `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    len: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Builds the poset from a predicate. The predicate must already be a
    /// partial order; reflexivity is forced.
    pub fn from_relation(len: usize, mut leq: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rel = vec![false; len * len];
        for i in 0..len {
            for j in 0..len {
                rel[i * len + j] = i == j || leq(i, j);
            }
        }
        Poset { len, leq: rel }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Checks the partial order axioms.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len;
        (0..n).all(|a| self.leq(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))))
            && (0..n).all(|a| (0..n).all(|b| !self.leq(a, b) || (0..n).all(|c| !self.leq(b, c) || self.leq(a, c))))
    }

    /// Covering relations `a ⋖ b`, sorted.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len;
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len).find(|&m| (0..self.len).all(|x| self.leq(m, x)))
    }

    pub fn minimal_elements(&self, among: &[usize]) -> Vec<usize> {
        among.iter().copied().filter(|&a| !among.iter().any(|&b| self.lt(b, a))).collect()
    }

    pub fn down_set(&self, a: usize) -> Vec<usize> {
        (0..self.len).filter(|&x| self.leq(x, a)).collect()
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len).filter(|&x| self.leq(a, x)).collect()
    }

    /// True iff `map` is a bijection onto `other` preserving and reflecting order.
    pub fn is_isomorphism(&self, other: &Poset, map: &[usize]) -> bool {
        if self.len != other.len || map.len() != self.len {
            return false;
        }
        let mut seen = vec![false; self.len];
        for &m in map {
            if m >= self.len || std::mem::replace(&mut seen[m], true) {
                return false;
            }
        }
        (0..self.len).all(|a| (0..self.len).all(|b| self.leq(a, b) == other.leq(map[a], map[b])))
    }

    /// Backtracking search for an order isomorphism whose pairs all satisfy
    /// `compatible`. Deterministic: candidates are tried in index order.
    pub fn find_isomorphism(
        &self,
        other: &Poset,
        mut compatible: impl FnMut(usize, usize) -> bool,
    ) -> Option<Vec<usize>> {
        if self.len != other.len {
            return None;
        }
        let n = self.len;
        let sig = |p: &Poset, a: usize| (p.down_set(a).len(), p.up_set(a).len());
        let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
        for a in 0..n {
            let s = sig(self, a);
            let c: Vec<usize> = (0..n).filter(|&b| sig(other, b) == s && compatible(a, b)).collect();
            if c.is_empty() {
                return None;
            }
            candidates.push(c);
        }
        // most constrained first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (candidates[a].len(), a));

        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            depth: usize,
            order: &[usize],
            candidates: &[Vec<usize>],
            this: &Poset,
            other: &Poset,
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            let Some(&a) = order.get(depth) else { return true };
            for &b in &candidates[a] {
                if used[b] {
                    continue;
                }
                let consistent = order[..depth]
                    .iter()
                    .all(|&x| this.leq(a, x) == other.leq(b, map[x]) && this.leq(x, a) == other.leq(map[x], b));
                if !consistent {
                    continue;
                }
                map[a] = b;
                used[b] = true;
                if go(depth + 1, order, candidates, this, other, map, used) {
                    return true;
                }
                used[b] = false;
                map[a] = usize::MAX;
            }
            false
        }
        go(0, &order, &candidates, self, other, &mut map, &mut used).then_some(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean_lattice(k: u32) -> Poset {
        let n = 1usize << k;
        Poset::from_relation(n, |a, b| a & b == a)
    }

    #[test]
    fn hasse_of_boolean_square() {
        let p = boolean_lattice(2);
        assert!(p.is_partial_order());
        assert_eq!(p.hasse_edges(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(p.minimum(), Some(0));
    }

    #[test]
    fn isomorphism_search() {
        let p = boolean_lattice(3);
        // relabel by reversing indices of a dual-free permutation: complement is an anti-iso,
        // so use a coordinate swap instead
        let swap = |x: usize| ((x & 1) << 2) | (x & 2) | ((x >> 2) & 1);
        let q = Poset::from_relation(8, |a, b| p.leq(swap(a), swap(b)));
        let map = p.find_isomorphism(&q, |_, _| true).unwrap();
        assert!(p.is_isomorphism(&q, &map));
        let chain = Poset::from_relation(8, |a, b| a <= b);
        assert!(p.find_isomorphism(&chain, |_, _| true).is_none());
    }
}
