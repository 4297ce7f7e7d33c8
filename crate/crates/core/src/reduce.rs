//! Compensated summation and deterministic parallel reduction.
//!
//! Every family scan in this crate reduces with the same discipline: the item
//! range is split into chunks at absolute boundaries, each chunk is summed
//! sequentially with Kahan compensation, and the chunk totals are folded in
//! ascending chunk order. The result is independent of the worker count, and
//! a scan over a range equals the ordered combination of scans over any
//! chunk-aligned partition of that range.

use rayon::prelude::*;

/// Items per reduction chunk. Chunk boundaries are absolute (index / width),
/// not relative to the query range, so partitioned scans recompose exactly.
pub const CHUNK_WIDTH: usize = 1 << 12;

/// Kahan–Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum `f(item)` over a slice with fixed chunking and ordered reduction.
///
/// Deterministic for any rayon pool size, including 1.
pub fn ordered_par_sum<T: Sync, F: Fn(&T) -> f64 + Sync>(items: &[T], f: F) -> f64 {
    let partials: Vec<f64> = items
        .par_chunks(CHUNK_WIDTH)
        .map(|chunk| {
            let mut acc = KahanSum::new();
            for item in chunk {
                acc.add(f(item));
            }
            acc.value()
        })
        .collect();
    let mut total = KahanSum::new();
    for p in partials {
        total.add(p);
    }
    total.value()
}

/// Map items to vectors of length `width` and reduce componentwise in order.
pub fn ordered_par_sum_vec<T: Sync, F: Fn(&T) -> Vec<f64> + Sync>(
    items: &[T],
    width: usize,
    f: F,
) -> Vec<f64> {
    let partials: Vec<Vec<f64>> = items
        .par_chunks(CHUNK_WIDTH)
        .map(|chunk| {
            let mut acc = vec![KahanSum::new(); width];
            for item in chunk {
                let row = f(item);
                debug_assert_eq!(row.len(), width);
                for (a, x) in acc.iter_mut().zip(row) {
                    a.add(x);
                }
            }
            acc.iter().map(KahanSum::value).collect()
        })
        .collect();
    let mut total = vec![KahanSum::new(); width];
    for part in partials {
        for (a, x) in total.iter_mut().zip(part) {
            a.add(x);
        }
    }
    total.iter().map(KahanSum::value).collect()
}
