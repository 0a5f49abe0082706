//! Small helpers for vertex sets stored as `u64` masks.

/// Iterator over the set bit positions of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Bits {}

#[inline]
pub fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn popcount(m: u64) -> usize {
    m.count_ones() as usize
}

/// Lowest set bit index; `m` must be non-zero.
#[inline]
pub fn lowest(m: u64) -> usize {
    debug_assert!(m != 0);
    m.trailing_zeros() as usize
}

/// Mask of all bit positions strictly above `i`.
#[inline]
pub fn above(i: usize) -> u64 {
    if i >= 63 {
        0
    } else {
        !low_mask(i + 1)
    }
}

/// Enumerates all submasks of `m` (including `0` and `m`).
pub fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut cur = Some(m);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == 0 { None } else { Some((s - 1) & m) };
        Some(s)
    })
}

/// Packs the bits of `m` selected by `sel` into the low bits (software pext).
#[inline]
pub fn compress(m: u64, sel: u64) -> u64 {
    let mut out = 0u64;
    for (k, i) in Bits(sel).enumerate() {
        if m >> i & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_roundtrip() {
        let m = 0b1011_0010u64;
        let v: Vec<usize> = Bits(m).collect();
        assert_eq!(v, vec![1, 4, 5, 7]);
        assert_eq!(v.iter().fold(0u64, |a, &i| a | bit(i)), m);
    }

    #[test]
    fn submask_count() {
        assert_eq!(submasks(0b1101).count(), 8);
        assert_eq!(submasks(0).count(), 1);
    }

    #[test]
    fn compress_packs() {
        assert_eq!(compress(0b1010_0100, 0b1110_0100), 0b1011);
        assert_eq!(above(63), 0);
        assert_eq!(above(0), !1);
    }
}
