#![allow(dead_code)]

/// Normalized histogram of `samples` over `bins` equal bins on `[lo, hi)`.
/// Samples outside the range are dropped before normalizing.
pub fn histogram(samples: impl IntoIterator<Item = f64>, lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut h = vec![0.0; bins];
    let w = (hi - lo) / bins as f64;
    let mut total = 0.0;
    for s in samples {
        if s >= lo && s < hi {
            h[(((s - lo) / w) as usize).min(bins - 1)] += 1.0;
            total += 1.0;
        }
    }
    if total > 0.0 {
        h.iter_mut().for_each(|v| *v /= total);
    }
    h
}

/// L1 distance between two histograms of equal length.
pub fn l1(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}
