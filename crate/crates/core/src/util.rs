use alloc::vec;
use alloc::vec::Vec;

/// Fixed-length bit set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Whether any bit in `start..end` is set.
    pub fn any_in(&self, start: usize, end: usize) -> bool {
        if start >= end {
            return false;
        }
        let (first, last) = (start >> 6, (end - 1) >> 6);
        for w in first..=last {
            let mut word = self.words[w];
            if w == first {
                word &= !0u64 << (start & 63);
            }
            if w == last {
                let top = (end - 1) & 63;
                if top < 63 {
                    word &= (1u64 << (top + 1)) - 1;
                }
            }
            if word != 0 {
                return true;
            }
        }
        false
    }

    /// Indices of set bits in `start..end`, ascending.
    pub fn ones_in(&self, start: usize, end: usize) -> impl Iterator<Item = usize> + '_ {
        (start..end).filter(move |&i| self.get(i))
    }
}

/// Union-find with path halving; the root of a class is its least member.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns whether the classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }
}

/// Mixed-radix enumeration of all tuples in `radices[0] x .. x radices[k-1]`,
/// last coordinate fastest. Yields nothing if some radix is zero.
pub struct Odometer {
    radices: Vec<usize>,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.iter().any(|&r| r == 0);
        let current = vec![0; radices.len()];
        Odometer { radices, current, started: false, done }
    }

    pub fn next_tuple(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            self.current[i] += 1;
            if (self.current[i] as usize) < self.radices[i] {
                return Some(&self.current);
            }
            self.current[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn any_in_ranges() {
        let mut b = BitSet::new(200);
        b.set(70);
        b.set(130);
        assert!(b.any_in(64, 71));
        assert!(!b.any_in(71, 130));
        assert!(b.any_in(71, 131));
        assert!(!b.any_in(0, 70));
        assert_eq!(b.count(), 2);
        assert_eq!(b.ones_in(0, 200).collect::<Vec<_>>(), [70, 130]);
    }

    #[test]
    fn union_find_roots_are_minimal() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 2);
        uf.union(2, 3);
        assert_eq!(uf.find(4), 2);
        assert!(!uf.union(3, 4));
    }

    #[test]
    fn odometer_order() {
        let mut o = Odometer::new(vec![2, 3]);
        let mut seen = Vec::new();
        while let Some(t) = o.next_tuple() {
            seen.push(t.to_vec());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], [0, 1]);
        assert_eq!(seen[3], [1, 0]);
        let mut empty = Odometer::new(vec![]);
        assert_eq!(empty.next_tuple(), Some(&[][..]));
        assert_eq!(empty.next_tuple(), None);
        assert_eq!(Odometer::new(vec![3, 0]).next_tuple(), None);
    }
}
