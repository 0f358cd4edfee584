use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of the coordinate set `{0, .., n-1}` encoded as a bitmask.
///
/// Coordinates are 0-based throughout the crate. At most 32 coordinates are
/// supported, which is far beyond what exact enumeration can handle anyway.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

pub const MAX_COORDS: usize = 32;

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_COORDS);
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Subset {
        Subset(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_COORDS && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Member coordinates in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing bitmask order (starting at ∅).
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Subset(cur))
        })
    }

    /// Position of coordinate `i` among the members of `self`.
    pub fn position(self, i: usize) -> Option<usize> {
        if self.contains(i) {
            Some((self.0 & ((1u32 << i) - 1)).count_ones() as usize)
        } else {
            None
        }
    }

    /// Re-expresses `self` (a subset of `within`) in the local numbering of
    /// `within`, where bit `j` stands for the `j`-th member of `within`.
    pub fn compress(self, within: Subset) -> Subset {
        debug_assert!(self.is_subset_of(within));
        let mut out = 0u32;
        for (j, i) in within.iter().enumerate() {
            if self.contains(i) {
                out |= 1 << j;
            }
        }
        Subset(out)
    }

    /// Inverse of [`Subset::compress`].
    pub fn expand(self, within: Subset) -> Subset {
        let mut out = 0u32;
        for (j, i) in within.iter().enumerate() {
            if self.contains(j) {
                out |= 1 << i;
            }
        }
        Subset(out)
    }

    /// Comparison by size first, then lexicographically on sorted members.
    pub fn cmp_size_lex(self, other: Subset) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i >= MAX_COORDS) {
            return Err(serde::de::Error::custom(format!("coordinate {bad} too large")));
        }
        Ok(Subset::from_indices(v))
    }
}

/// All subsets of `{0..n}` with at most `max_len` members, ordered by size
/// then lexicographically.
pub fn subsets_up_to(n: usize, max_len: usize) -> Vec<Subset> {
    let mut out: Vec<Subset> = Subset::full(n).subsets().filter(|s| s.len() <= max_len).collect();
    out.sort_by(|a, b| a.cmp_size_lex(*b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_submasks() {
        let s = Subset::from_indices([0, 2, 3]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset_of(s)));
        assert_eq!(subs[0], Subset::EMPTY);
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn compress_and_expand_are_inverse() {
        let within = Subset::from_indices([1, 4, 6]);
        let s = Subset::from_indices([4, 6]);
        assert_eq!(s.compress(within), Subset::from_indices([1, 2]));
        assert_eq!(s.compress(within).expand(within), s);
        assert_eq!(within.position(6), Some(2));
        assert_eq!(within.position(5), None);
    }

    #[test]
    fn size_lex_order() {
        let v = subsets_up_to(3, 2);
        let shown: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{}", "{0}", "{1}", "{2}", "{0,1}", "{0,2}", "{1,2}"]);
    }
}
