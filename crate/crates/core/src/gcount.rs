//! Hickerson's counting function
//!
//! ```text
//! g(d) = #{ (m, q) : m, q >= 1, m < sqrt(d), |q - sqrt(d)| < m, q | d - m^2 }
//! ```
//!
//! [`g_of_d`] enumerates divisors of `d - m^2` for a single `d`. The sieve
//! uses the equivalent parametrisation `d = m^2 + k q` with `k >= 1` and
//! `|k - q| < 2m`, walking `(m, q, k)` and bumping a counter per hit, so the
//! work over `d <= x` is about `Σ g(d) ≈ 0.924 x^{3/2}` increments.

use rayon::prelude::*;

use crate::cf::isqrt;
use crate::{Error, Result};

/// Default sieve chunk: 2^16 counters (256 KiB) stays cache resident.
pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// Exact form of `|q - sqrt(d)| < m`.
#[inline]
pub fn in_window(d: u64, m: u64, q: u64) -> bool {
    let d = u128::from(d);
    let upper = u128::from(q + m);
    let below = q <= m || {
        let t = u128::from(q - m);
        t * t < d
    };
    below && d < upper * upper
}

/// `g(d)` by divisor enumeration of `d - m^2` for every `m < sqrt(d)`.
pub fn g_of_d(d: u64) -> u32 {
    let mut count = 0u32;
    let mut m = 1u64;
    while u128::from(m) * u128::from(m) < u128::from(d) {
        let n = d - m * m;
        let mut i = 1u64;
        while i * i <= n {
            if n.is_multiple_of(i) {
                let j = n / i;
                count += u32::from(in_window(d, m, i));
                if j != i {
                    count += u32::from(in_window(d, m, j));
                }
            }
            i += 1;
        }
        m += 1;
    }
    count
}

/// Values of `g(d)` for `d` in the half-open segment `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTable {
    lo: u64,
    hi: u64,
    counts: Vec<u32>,
}

impl GTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `g(d)`, or `None` outside the segment.
    pub fn get(&self, d: u64) -> Option<u32> {
        if d <= self.lo || d > self.hi {
            return None;
        }
        Some(self.counts[(d - self.lo - 1) as usize])
    }

    /// `(d, g(d))` in increasing `d`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        (self.lo + 1..).zip(self.counts.iter().copied())
    }

    /// Glue `(lo, mid]` and `(mid, hi]` into `(lo, hi]`.
    pub fn concat(mut self, next: GTable) -> Result<GTable> {
        if next.lo != self.hi {
            return Err(Error::InvalidSegment {
                lo: self.hi,
                hi: next.lo,
            });
        }
        self.counts.extend_from_slice(&next.counts);
        self.hi = next.hi;
        Ok(self)
    }

    /// CSV rows `d,g` under a `d,g` header.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "d,g")?;
        for (d, g) in self.iter() {
            writeln!(out, "{d},{g}")?;
        }
        Ok(())
    }
}

/// Split `(lo, hi]` into consecutive pieces of at most `width`.
pub fn segments(lo: u64, hi: u64, width: u64) -> impl Iterator<Item = (u64, u64)> {
    let width = width.max(1);
    let mut start = lo;
    std::iter::from_fn(move || {
        (start < hi).then(|| {
            let end = hi.min(start.saturating_add(width));
            let seg = (start, end);
            start = end;
            seg
        })
    })
}

/// Accumulate `g(d)` for `d` in `(lo, hi]` into `counts[d - lo - 1]`.
pub(crate) fn sieve_into(lo: u64, hi: u64, counts: &mut [u32]) {
    debug_assert_eq!(counts.len() as u64, hi - lo);
    let root = isqrt(hi);
    let mut m = 1u64;
    while m * m < hi {
        let m2 = m * m;
        // (q - m)^2 < d <= hi bounds q by m + sqrt(hi)
        for q in 1..=(m + root) {
            // window: q - 2m < k < q + 2m, k >= 1
            let k_min_window = if q + 1 > 2 * m { q + 1 - 2 * m } else { 1 };
            if m2 + k_min_window * q > hi {
                break;
            }
            let k_max_window = q + 2 * m - 1;
            let k_min_seg = if lo >= m2 { (lo - m2) / q + 1 } else { 1 };
            let k_max_seg = (hi - m2) / q;
            let k_lo = k_min_window.max(k_min_seg);
            let k_hi = k_max_window.min(k_max_seg);
            if k_lo > k_hi {
                continue;
            }
            let mut idx = (m2 + k_lo * q - lo - 1) as usize;
            for _ in k_lo..=k_hi {
                counts[idx] += 1;
                idx += q as usize;
            }
        }
        m += 1;
    }
}

fn check_segment(lo: u64, hi: u64) -> Result<()> {
    if lo >= hi {
        return Err(Error::InvalidSegment { lo, hi });
    }
    Ok(())
}

/// `g(d)` for all `d` in `(lo, hi]`, sieved in parallel chunks of [`DEFAULT_CHUNK`].
pub fn g_sieve(lo: u64, hi: u64) -> Result<GTable> {
    g_sieve_chunked(lo, hi, DEFAULT_CHUNK)
}

/// As [`g_sieve`] with an explicit chunk width. The result does not depend on
/// the chunk width or the number of worker threads.
pub fn g_sieve_chunked(lo: u64, hi: u64, chunk: u64) -> Result<GTable> {
    check_segment(lo, hi)?;
    let pieces: Vec<(u64, u64)> = segments(lo, hi, chunk).collect();
    let parts: Vec<Vec<u32>> = pieces
        .par_iter()
        .map(|&(a, b)| {
            let mut counts = vec![0u32; (b - a) as usize];
            sieve_into(a, b, &mut counts);
            counts
        })
        .collect();
    let mut counts = Vec::with_capacity((hi - lo) as usize);
    for part in parts {
        counts.extend_from_slice(&part);
    }
    Ok(GTable { lo, hi, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every pair (m, q) with q up to 2 sqrt(d) + 1, tested literally.
    fn g_pairs(d: u64) -> u32 {
        let mut n = 0;
        for m in 1..=d {
            if m * m >= d {
                break;
            }
            for q in 1..=(2 * isqrt(d) + 2) {
                if (d - m * m).is_multiple_of(q) && in_window(d, m, q) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(g_of_d(1), 0);
        assert_eq!(g_of_d(2), 1);
        assert_eq!(g_of_d(3), 2);
        assert_eq!(g_of_d(9), 0);
        assert_eq!(g_of_d(16), 2);
        for d in 1..400 {
            assert_eq!(g_of_d(d), g_pairs(d), "d = {d}");
        }
    }

    #[test]
    fn window_is_exact() {
        // sqrt(16) = 4: |q - 4| < 2 allows q = 3, 4, 5
        assert!(!in_window(16, 2, 2));
        assert!(in_window(16, 2, 3));
        assert!(in_window(16, 2, 5));
        assert!(!in_window(16, 2, 6));
        // q <= m passes the left test trivially
        assert!(in_window(10, 3, 1));
    }

    #[test]
    fn sieve_small_segment() {
        let t = g_sieve(1, 10).unwrap();
        assert_eq!(t.counts(), &[1, 2, 0, 2, 2, 4, 3, 0, 4]);
        assert_eq!(t.get(1), None);
        assert_eq!(t.get(7), Some(4));
        assert_eq!(t.get(11), None);
    }

    #[test]
    fn rejects_empty_segment() {
        assert_eq!(g_sieve(5, 5), Err(Error::InvalidSegment { lo: 5, hi: 5 }));
        assert!(g_sieve(6, 5).is_err());
    }

    #[test]
    fn d_one_is_zero() {
        let t = g_sieve(0, 3).unwrap();
        assert_eq!(t.get(1), Some(0));
    }

    #[test]
    fn chunking_is_invisible() {
        let a = g_sieve_chunked(0, 5000, 5000).unwrap();
        let b = g_sieve_chunked(0, 5000, 7).unwrap();
        let c = g_sieve_chunked(0, 2500, 1000)
            .unwrap()
            .concat(g_sieve_chunked(2500, 5000, 333).unwrap())
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn concat_rejects_gap() {
        let a = g_sieve(0, 10).unwrap();
        let b = g_sieve(11, 20).unwrap();
        assert!(a.concat(b).is_err());
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        g_sieve(1, 4).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "d,g\n2,1\n3,2\n4,0\n");
    }

    #[test]
    fn segments_cover() {
        let s: Vec<_> = segments(3, 20, 5).collect();
        assert_eq!(s, vec![(3, 8), (8, 13), (13, 18), (18, 20)]);
        assert_eq!(segments(4, 4, 3).count(), 0);
    }
}
