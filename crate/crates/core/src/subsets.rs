//! Bitmask combinatorics: subsets of `[n]`, fixed-size subsets, submasks,
//! bit compression and permutations.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};

/// A subset of the coordinates `{0, .., n-1}`; bit `i` set means coordinate `i`
/// belongs to the set. Coordinate `i` here is `x_{i+1}` in one-based notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn from_coords<I: IntoIterator<Item = usize>>(coords: I) -> Self {
        SubsetMask(coords.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | 1 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1 << i))
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when every bit lies below `n`.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(SubsetMask::full(n))
    }

    /// Coordinates in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn submasks(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(SubsetMask(cur))
        })
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl Sub for SubsetMask {
    type Output = SubsetMask;
    fn sub(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !rhs.0)
    }
}

impl Not for SubsetMask {
    type Output = SubsetMask;
    fn not(self) -> SubsetMask {
        SubsetMask(!self.0)
    }
}

/// All masks over `n` bits with exactly `k` bits set, in increasing order
/// (Gosper's hack).
pub fn fixed_size(n: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    let limit: u64 = 1u64 << n;
    let mut cur: Option<u64> = if k > n {
        None
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let c = cur?;
        if c >= limit && !(c == 0 && k == 0) {
            return None;
        }
        cur = if c == 0 {
            None
        } else {
            let low = c & c.wrapping_neg();
            let ripple = c + low;
            let next = (((ripple ^ c) >> 2) / low) | ripple;
            if next < limit {
                Some(next)
            } else {
                None
            }
        };
        Some(SubsetMask(c as u32))
    })
}

/// Extracts the bits of `x` selected by `mask` and packs them at the bottom
/// (software `pext`).
#[inline]
pub fn compress(x: usize, mask: SubsetMask) -> usize {
    let mut out = 0usize;
    let mut bit = 0;
    let mut m = mask.0;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= ((x >> i) & 1) << bit;
        bit += 1;
        m &= m - 1;
    }
    out
}

/// Inverse of [`compress`]: scatters the low bits of `packed` onto `mask`.
#[inline]
pub fn expand(packed: usize, mask: SubsetMask) -> usize {
    let mut out = 0usize;
    let mut bit = 0;
    let mut m = mask.0;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= ((packed >> bit) & 1) << i;
        bit += 1;
        m &= m - 1;
    }
    out
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Permutations {
    Permutations {
        current: Some((0..k).collect()),
    }
}

pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(out)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_size_counts() {
        for n in 0..=10 {
            for k in 0..=n {
                let v: Vec<_> = fixed_size(n, k).collect();
                assert_eq!(v.len() as u64, crate::scalar::binomial_u64(n as u64, k as u64));
                assert!(v.iter().all(|m| m.len() == k && m.fits(n)));
                assert!(v.windows(2).all(|w| w[0] < w[1]));
            }
            assert_eq!(fixed_size(n, n + 1).count(), 0);
        }
    }

    #[test]
    fn submask_enumeration() {
        let m = SubsetMask(0b1011);
        let subs: Vec<_> = m.submasks().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(m)));
        assert_eq!(SubsetMask::EMPTY.submasks().count(), 1);
    }

    #[test]
    fn compress_expand_inverse() {
        let mask = SubsetMask(0b1101_0010);
        for packed in 0..(1 << mask.len()) {
            let x = expand(packed, mask);
            assert_eq!(x & !(mask.0 as usize), 0);
            assert_eq!(compress(x, mask), packed);
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(0).count(), 1);
        assert_eq!(permutations(1).count(), 1);
        assert_eq!(permutations(4).count(), 24);
        let all: std::collections::HashSet<_> = permutations(5).collect();
        assert_eq!(all.len(), 120);
    }

    #[test]
    fn mask_ops() {
        let a = SubsetMask::from_coords([0, 2, 5]);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(2) && !a.contains(1));
        assert_eq!(a.without(2).with(1), SubsetMask::from_coords([0, 1, 5]));
        assert_eq!(SubsetMask::full(3), SubsetMask(7));
        assert!(!a.fits(5) && a.fits(6));
        assert_eq!(format!("{:?}", a), "{0, 2, 5}");
    }
}
