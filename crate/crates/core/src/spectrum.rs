//! Spectral bookkeeping shared by chains and discretized operators: flat
//! cluster statistics, gap edges, and localization tags.

use alloc::vec::Vec;

use crate::numcore::{eigenvector_near, eigh_banded, BandedHermitian};
use crate::C64;
use crate::Result;

/// Knobs for [`analyze`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumOptions {
    /// Flat-band energy; `None` disables cluster detection.
    pub target: Option<f64>,
    /// States within this distance of `target` form the cluster.
    pub cluster_tol: f64,
    /// States within this distance of `target` (but outside the cluster) are
    /// tagged [`StateTag::Halo`] and excluded from gap edges.
    pub halo: f64,
    /// Gap edges are measured from this energy, one per side.
    pub center: f64,
    /// Fraction of cells at each end counted as "edge".
    pub edge_fraction: f64,
    /// A state with more edge mass than this is tagged [`StateTag::Edge`].
    pub edge_mass_threshold: f64,
    /// Tag cell-to-cell sign-alternating states as doublers.
    pub stagger_filter: bool,
    /// Sites per cell.
    pub block: usize,
    /// Only states in this energy window get eigenvectors and localization
    /// metrics. `None` means all non-cluster states.
    pub window: Option<(f64, f64)>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            target: None,
            cluster_tol: 1e-6,
            halo: 0.0,
            center: 0.0,
            edge_fraction: 0.05,
            edge_mass_threshold: 0.5,
            stagger_filter: false,
            block: 3,
            window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateTag {
    Cluster,
    Halo,
    Edge,
    Doubler,
    Bulk,
}

impl StateTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StateTag::Cluster => "cluster",
            StateTag::Halo => "halo",
            StateTag::Edge => "edge",
            StateTag::Doubler => "doubler",
            StateTag::Bulk => "bulk",
        }
    }
}

/// Localization metrics of one eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Localization {
    /// Inverse participation ratio `Σ|u|⁴ / (Σ|u|²)²`.
    pub ipr: f64,
    /// Probability mass in the outer cells.
    pub edge_mass: f64,
    /// Share of the cell-to-cell variation that alternates sign, in `[0, 1]`.
    pub stagger: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateInfo {
    pub energy: f64,
    pub tag: StateTag,
    pub localization: Option<Localization>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub states: Vec<StateInfo>,
    pub target: Option<f64>,
    pub cluster_count: usize,
    /// `max − min` over the cluster; zero for an empty cluster.
    pub cluster_width: f64,
    /// Highest bulk energy below `center` (outside the halo).
    pub gap_lower: Option<f64>,
    /// Lowest bulk energy above `center` (outside the halo).
    pub gap_upper: Option<f64>,
}

impl SpectrumReport {
    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.energy)
    }

    pub fn count_tagged(&self, tag: StateTag) -> usize {
        self.states.iter().filter(|s| s.tag == tag).count()
    }

    /// Bulk states strictly inside `(lo, hi)`.
    pub fn bulk_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.states.iter().filter(|s| s.tag == StateTag::Bulk && s.energy > lo && s.energy < hi).map(|s| s.energy).collect()
    }
}

/// Localization metrics of `u` with `block` sites per cell.
pub fn localization(u: &[C64], block: usize, edge_fraction: f64) -> Localization {
    let block = block.max(1);
    let cells = u.len() / block;
    let total: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let total = if total > 0.0 { total } else { 1.0 };
    let ipr = u.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum::<f64>() / (total * total);
    let n_edge = (libm::ceil(cells as f64 * edge_fraction) as usize).max(1).min(cells / 2);
    let mut edge = 0.0;
    for c in (0..n_edge).chain(cells - n_edge..cells) {
        edge += u[c * block..(c + 1) * block].iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    let (mut minus, mut plus) = (0.0, 0.0);
    for c in 0..cells.saturating_sub(1) {
        for s in 0..block {
            let a = u[c * block + s];
            let b = u[(c + 1) * block + s];
            minus += (b - a).norm_sqr();
            plus += (b + a).norm_sqr();
        }
    }
    let stagger = if minus + plus > 0.0 { minus / (minus + plus) } else { 0.0 };
    Localization { ipr, edge_mass: edge / total, stagger }
}

/// Full eigenvalue spectrum of `m` with tags and gap edges.
pub fn analyze(m: &BandedHermitian, opts: &SpectrumOptions) -> Result<SpectrumReport> {
    let values = eigh_banded(m, false)?.values;
    let scale = m.norm_inf().max(1.0);
    let degenerate = 1e-9 * scale;

    let mut states: Vec<StateInfo> = Vec::with_capacity(values.len());
    let mut vectors: Vec<(f64, Vec<C64>)> = Vec::new();
    for &e in &values {
        let dist = opts.target.map(|t| (e - t).abs());
        let tag = match dist {
            Some(d) if d <= opts.cluster_tol => StateTag::Cluster,
            Some(d) if d <= opts.halo => StateTag::Halo,
            _ => StateTag::Bulk,
        };
        let in_window = opts.window.map_or(true, |(lo, hi)| e >= lo && e <= hi);
        let mut info = StateInfo { energy: e, tag, localization: None };
        if tag != StateTag::Cluster && in_window {
            let against: Vec<&[C64]> =
                vectors.iter().filter(|(ev, _)| (ev - e).abs() <= degenerate).map(|(_, v)| v.as_slice()).collect();
            let u = eigenvector_near(m, e, &against)?;
            let loc = localization(&u, opts.block, opts.edge_fraction);
            if tag == StateTag::Bulk {
                if opts.stagger_filter && loc.stagger > 0.5 {
                    info.tag = StateTag::Doubler;
                } else if loc.edge_mass > opts.edge_mass_threshold {
                    info.tag = StateTag::Edge;
                }
            }
            info.localization = Some(loc);
            vectors.retain(|(ev, _)| (ev - e).abs() <= degenerate);
            vectors.push((e, u));
        }
        states.push(info);
    }

    let cluster: Vec<f64> = states.iter().filter(|s| s.tag == StateTag::Cluster).map(|s| s.energy).collect();
    let cluster_width = match (cluster.first(), cluster.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let bulk = || states.iter().filter(|s| s.tag == StateTag::Bulk).map(|s| s.energy);
    let gap_lower = bulk().filter(|&e| e < opts.center).fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));
    let gap_upper = bulk().filter(|&e| e > opts.center).fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.min(e))));

    Ok(SpectrumReport { cluster_count: cluster.len(), cluster_width, gap_lower, gap_upper, target: opts.target, states })
}
