//! Fixed-size subset enumeration over bitmasks.

use alloc::vec::Vec;

/// All `k`-subsets of `{0, .., n-1}` as bitmasks, in increasing numeric order.
pub(crate) struct Subsets {
    next: Option<u64>,
    limit: u64,
}

impl Subsets {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        assert!(n < 64, "subset enumeration supports n < 64");
        if k > n {
            return Subsets { next: None, limit: 0 };
        }
        let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
        Subsets { next: Some(first), limit: 1u64 << n }
    }
}

impl Iterator for Subsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        self.next = if current == 0 {
            None
        } else {
            // Gosper's hack.
            let c = current & current.wrapping_neg();
            let r = current + c;
            let n = (((r ^ current) >> 2) / c) | r;
            (n < self.limit).then_some(n)
        };
        Some(current)
    }
}

pub(crate) fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
