use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use super::hermitian::Eigen;
use crate::{Error, Modulus, Result};

/// Hermitian matrix with all entries beyond `bandwidth` diagonals zero.
///
/// Only the lower band is stored: `lower[d * dim + i] = M[i + d][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedHermitian {
    dim: usize,
    bandwidth: usize,
    lower: Vec<C64>,
}

impl BandedHermitian {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        Self { dim, bandwidth, lower: vec![C64::zero(); dim * (bandwidth + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i >= j {
            let d = i - j;
            if d > self.bandwidth {
                C64::zero()
            } else {
                self.lower[d * self.dim + j]
            }
        } else {
            self.get(j, i).conj()
        }
    }

    /// Set `M[i][j]` (and implicitly `M[j][i] = conj`). Diagonal entries must
    /// be real.
    pub fn set(&mut self, i: usize, j: usize, value: C64) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::Dimension { expected: self.dim, got: i.max(j) + 1 });
        }
        let d = i.abs_diff(j);
        if d > self.bandwidth {
            return Err(Error::OutsideBand { row: i, col: j, bandwidth: self.bandwidth });
        }
        if i == j && value.im != 0.0 {
            return Err(Error::NotHermitian { row: i, col: j, deviation: 2.0 * value.im.abs() });
        }
        let v = if i >= j { value } else { value.conj() };
        self.lower[d * self.dim + i.min(j)] = v;
        Ok(())
    }

    pub fn set_real(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.set(i, j, C64::new(value, 0.0))
    }

    /// Add to an entry (and its mirror).
    pub fn add(&mut self, i: usize, j: usize, value: C64) -> Result<()> {
        let cur = self.get(i, j);
        self.set(i, j, cur + value)
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::zero(); n];
        for d in 0..=self.bandwidth {
            for j in 0..n.saturating_sub(d) {
                let a = self.lower[d * n + j];
                if a.is_zero() {
                    continue;
                }
                out[j + d] += a * v[j];
                if d > 0 {
                    out[j] += a.conj() * v[j + d];
                }
            }
        }
        out
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim;
        let mut rows = vec![0.0; n];
        for d in 0..=self.bandwidth {
            for j in 0..n.saturating_sub(d) {
                let a = self.lower[d * n + j].modulus();
                rows[j + d] += a;
                if d > 0 {
                    rows[j] += a;
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// True when every stored entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.lower.iter().all(|v| v.im == 0.0)
    }

    /// Largest deviation from Hermiticity. Storage makes this exactly zero
    /// off the diagonal; the diagonal is checked for imaginary parts.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.dim).map(|i| 2.0 * self.lower[i].im.abs()).fold(0.0, f64::max)
    }

    fn check_finite(&self) -> Result<()> {
        for d in 0..=self.bandwidth {
            for j in 0..self.dim.saturating_sub(d) {
                let v = self.lower[d * self.dim + j];
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite(format!("banded entry ({}, {})", j + d, j)));
                }
            }
        }
        Ok(())
    }

    /// `max_j ‖M vⱼ − λⱼ vⱼ‖∞`.
    pub fn residual(&self, eig: &Eigen) -> f64 {
        eig.values
            .iter()
            .zip(&eig.vectors)
            .map(|(&lam, v)| {
                self.matvec(v).iter().zip(v).map(|(mv, vi)| (mv - vi * lam).modulus()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Working copy of the lower band with one extra diagonal for the bulge.
struct BandWork {
    n: usize,
    w: usize,
    low: Vec<C64>,
}

impl BandWork {
    fn new(m: &BandedHermitian) -> Self {
        let n = m.dim;
        let w = m.bandwidth + 1;
        let mut low = vec![C64::zero(); n * (w + 1)];
        low[..m.lower.len()].copy_from_slice(&m.lower);
        Self { n, w, low }
    }

    fn get(&self, i: usize, j: usize) -> C64 {
        if i >= j {
            let d = i - j;
            if d > self.w {
                C64::zero()
            } else {
                self.low[d * self.n + j]
            }
        } else {
            self.get(j, i).conj()
        }
    }

    fn set(&mut self, i: usize, j: usize, v: C64) {
        let (r, c, v) = if i >= j { (i, j, v) } else { (j, i, v.conj()) };
        let d = r - c;
        if d <= self.w {
            self.low[d * self.n + c] = v;
        } else {
            debug_assert!(v.modulus() < 1e-300, "fill outside working band");
        }
    }

    /// Similarity `M ← G M G†` with `G = [[c, s], [-s̄, c]]` acting on rows
    /// and columns `(p, p + 1)`.
    fn rotate(&mut self, p: usize, c: f64, s: C64) {
        let q = p + 1;
        let lo = p.saturating_sub(self.w);
        let hi = (q + self.w).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let x = self.get(p, k);
            let y = self.get(q, k);
            self.set(p, k, x * c + s * y);
            self.set(q, k, -s.conj() * x + y * c);
        }
        let a = self.get(p, p).re;
        let d = self.get(q, q).re;
        let b = self.get(q, p);
        // G B G† for B = [[a, b̄], [b, d]]
        let g = [[C64::new(c, 0.0), s], [-s.conj(), C64::new(c, 0.0)]];
        let bm = [[C64::new(a, 0.0), b.conj()], [b, C64::new(d, 0.0)]];
        let mut gb = [[C64::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                gb[i][j] = g[i][0] * bm[0][j] + g[i][1] * bm[1][j];
            }
        }
        let mut out = [[C64::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = gb[i][0] * g[j][0].conj() + gb[i][1] * g[j][1].conj();
            }
        }
        self.set(p, p, C64::new(out[0][0].re, 0.0));
        self.set(q, q, C64::new(out[1][1].re, 0.0));
        self.set(q, p, out[1][0]);
    }
}

/// Rotation parameters zeroing `y` against `x`: `G [x, y]ᵀ = [r, 0]ᵀ`.
fn givens(x: C64, y: C64) -> Option<(f64, C64)> {
    let ny = y.modulus();
    if ny == 0.0 {
        return None;
    }
    let nx = x.modulus();
    let norm = libm::hypot(nx, ny);
    if nx == 0.0 {
        return Some((0.0, y.conj() / ny));
    }
    Some((nx / norm, (x / nx) * y.conj() / norm))
}

/// Column-major dense accumulator for the eigenvector basis.
struct Basis {
    n: usize,
    cols: Vec<C64>,
}

impl Basis {
    fn identity(n: usize) -> Self {
        let mut cols = vec![C64::zero(); n * n];
        for i in 0..n {
            cols[i * n + i] = C64::new(1.0, 0.0);
        }
        Self { n, cols }
    }

    fn pair(&mut self, p: usize, q: usize) -> (&mut [C64], &mut [C64]) {
        debug_assert!(p < q);
        let (a, b) = self.cols.split_at_mut(q * self.n);
        (&mut a[p * self.n..(p + 1) * self.n], &mut b[..self.n])
    }

    /// `Q ← Q G†` for the band-reduction rotation on `(p, p + 1)`.
    fn apply_adjoint(&mut self, p: usize, c: f64, s: C64) {
        let (cp, cq) = self.pair(p, p + 1);
        let sc = s.conj();
        for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = a * c + b * sc;
            *y = -s * a + b * c;
        }
    }
}

/// All eigenvalues (ascending) of a banded Hermitian matrix, and optionally
/// the eigenvectors.
///
/// The band is reduced to tridiagonal form by Givens rotations with bulge
/// chasing, the complex off-diagonal is made real by a diagonal phase
/// transform, and the real tridiagonal problem is solved by implicit QL.
/// Without vectors the cost is O(n²·b).
pub fn eigh_banded(m: &BandedHermitian, want_vectors: bool) -> Result<Eigen> {
    if m.dim == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    m.check_finite()?;
    let n = m.dim;
    let b = m.bandwidth.min(n - 1);
    let mut work = BandWork::new(m);
    let mut basis = want_vectors.then(|| Basis::identity(n));

    let annihilate = |work: &mut BandWork, basis: &mut Option<Basis>, row: usize, col: usize| {
        let x = work.get(row - 1, col);
        let y = work.get(row, col);
        if let Some((c, s)) = givens(x, y) {
            work.rotate(row - 1, c, s);
            work.set(row, col, C64::zero());
            if let Some(q) = basis.as_mut() {
                q.apply_adjoint(row - 1, c, s);
            }
        }
    };

    if b >= 2 {
        for col in 0..n.saturating_sub(2) {
            for d in (2..=b).rev() {
                let row = col + d;
                if row >= n {
                    continue;
                }
                annihilate(&mut work, &mut basis, row, col);
                let (mut brow, mut bcol) = (row + b, row - 1);
                while brow < n {
                    annihilate(&mut work, &mut basis, brow, bcol);
                    bcol = brow - 1;
                    brow += b;
                }
            }
        }
    }

    let mut diag: Vec<f64> = (0..n).map(|i| work.get(i, i).re).collect();
    let mut off = vec![0.0; n];
    let mut phase = C64::new(1.0, 0.0);
    let mut phases = vec![phase; n];
    for i in 0..n.saturating_sub(1) {
        let e = work.get(i + 1, i);
        let ne = e.modulus();
        off[i] = ne;
        if ne > 0.0 {
            phase *= e / ne;
        }
        phases[i + 1] = phase;
    }
    if let Some(q) = basis.as_mut() {
        for (j, ph) in phases.iter().enumerate() {
            for v in &mut q.cols[j * n..(j + 1) * n] {
                *v *= ph;
            }
        }
    }

    tridiagonal_ql(&mut diag, &mut off, basis.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = match basis {
        Some(q) => order.iter().map(|&j| q.cols[j * n..(j + 1) * n].to_vec()).collect(),
        None => Vec::new(),
    };
    Ok(Eigen { values, vectors })
}

/// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
/// matrix. `off[i]` couples `i` and `i + 1`; `off[n-1]` is scratch.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut basis: Option<&mut Basis>) -> Result<()> {
    let n = d.len();
    const MAX_ITER: usize = 60;
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence(MAX_ITER));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                if let Some(q) = basis.as_deref_mut() {
                    let (ci, ci1) = q.pair(i, i + 1);
                    for (zi, zi1) in ci.iter_mut().zip(ci1.iter_mut()) {
                        let f = *zi1;
                        *zi1 = *zi * s + f * c;
                        *zi = *zi * c - f * s;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvector for a known eigenvalue by inverse iteration on the banded LU
/// factorization of `M − λ`. `against` holds already-found vectors of nearby
/// eigenvalues; the result is kept orthogonal to them.
pub fn eigenvector_near(m: &BandedHermitian, lambda: f64, against: &[&[C64]]) -> Result<Vec<C64>> {
    m.check_finite()?;
    let n = m.dim;
    let norm = m.norm_inf().max(f64::MIN_POSITIVE);
    let lu = BandLu::factor(m, lambda, norm);

    // deterministic start vector with no special structure
    let mut x: Vec<C64> = (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * 0.618_033_988_749_894_9;
            C64::new(t - libm::floor(t) - 0.5, 0.0)
        })
        .collect();
    orthonormalize(&mut x, against);
    for _ in 0..6 {
        let mut y = lu.solve(&x);
        orthonormalize(&mut y, against);
        x = y;
        let mx = m.matvec(&x);
        let res = mx.iter().zip(&x).map(|(a, b)| (a - b * lambda).modulus()).fold(0.0, f64::max);
        if res <= 1e-13 * norm {
            break;
        }
    }
    Ok(x)
}

fn orthonormalize(x: &mut [C64], against: &[&[C64]]) {
    for _ in 0..2 {
        for v in against {
            let dot: C64 = v.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            for (xi, vi) in x.iter_mut().zip(v.iter()) {
                *xi -= dot * vi;
            }
        }
    }
    let nrm = libm::sqrt(x.iter().map(|v| v.norm_sqr()).sum::<f64>());
    if nrm > 0.0 {
        for v in x.iter_mut() {
            *v /= nrm;
        }
    }
}

/// LU with partial pivoting of `M − σ` in band storage. Row `i` keeps
/// columns `i − kl ..= i + 2·kl`.
struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    a: Vec<C64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn factor(m: &BandedHermitian, sigma: f64, norm: f64) -> Self {
        let n = m.dim;
        let kl = m.bandwidth;
        let width = 3 * kl + 1;
        let mut lu = Self { n, kl, width, a: vec![C64::zero(); n * width], piv: vec![0; n] };
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + kl).min(n - 1);
            for j in lo..=hi {
                let mut v = m.get(i, j);
                if i == j {
                    v -= sigma;
                }
                let k = lu.idx(i, j);
                lu.a[k] = v;
            }
        }
        let tiny = f64::EPSILON * norm;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.a[lu.idx(k, k)].modulus();
            for i in (k + 1)..=last {
                let v = lu.a[lu.idx(i, k)].modulus();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.piv[k] = p;
            let right = (k + 2 * kl).min(n - 1);
            if p != k {
                for j in k..=right {
                    let (ik, ip) = (lu.idx(k, j), lu.idx(p, j));
                    lu.a.swap(ik, ip);
                }
            }
            let kk = lu.idx(k, k);
            if lu.a[kk].modulus() < tiny {
                lu.a[kk] = C64::new(tiny, 0.0);
            }
            let pivot = lu.a[kk];
            for i in (k + 1)..=last {
                let ik = lu.idx(i, k);
                let l = lu.a[ik] / pivot;
                lu.a[ik] = l;
                if l.is_zero() {
                    continue;
                }
                for j in (k + 1)..=right {
                    let kj = lu.idx(k, j);
                    let ij = lu.idx(i, j);
                    let u = lu.a[kj];
                    lu.a[ij] -= l * u;
                }
            }
        }
        lu
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let kl = self.kl;
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in (k + 1)..=(k + kl).min(n - 1) {
                x[i] -= self.a[self.idx(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in (k + 1)..=(k + 2 * kl).min(n - 1) {
                s -= self.a[self.idx(k, j)] * x[j];
            }
            x[k] = s / self.a[self.idx(k, k)];
        }
        x
    }
}
