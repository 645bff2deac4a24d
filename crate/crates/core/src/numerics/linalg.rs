//! Dense linear algebra over [`Real`] scalars: least squares, SVD, exact
//! nullspaces and subspace angles.

use super::Real;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Real> DenseMatrix<S> {
    pub fn zeros(ctx: &S::Context, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(ctx); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }
}

pub fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero(&a[0].context());
    for (x, y) in a.iter().zip(b) {
        acc = acc + &(x.clone() * y);
    }
    acc
}

/// Solves min ||A x - b|| for full-column-rank `A`.
///
/// Floating scalars use Householder QR on a column-equilibrated matrix;
/// exact scalars solve the normal equations by elimination.
pub fn least_squares<S: Real>(a: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if a.rows < a.cols || b.len() != a.rows {
        return Err(Error::DegenerateFit(format!("{} equations for {} unknowns", a.rows, a.cols)));
    }
    if S::EXACT {
        let ctx = b[0].context();
        let mut ata = DenseMatrix::zeros(&ctx, a.cols, a.cols);
        let mut atb = vec![S::zero(&ctx); a.cols];
        for i in 0..a.cols {
            for j in 0..a.cols {
                let mut acc = S::zero(&ctx);
                for r in 0..a.rows {
                    acc = acc + &(a.get(r, i).clone() * a.get(r, j));
                }
                ata.set(i, j, acc);
            }
            let mut acc = S::zero(&ctx);
            for r in 0..a.rows {
                acc = acc + &(a.get(r, i).clone() * &b[r]);
            }
            atb[i] = acc;
        }
        return solve(ata, atb);
    }
    householder_least_squares(a, b)
}

fn householder_least_squares<S: Real>(a: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    let ctx = b[0].context();
    let (m, n) = (a.rows, a.cols);
    let mut q = a.clone();
    let mut rhs = b.to_vec();
    // Column equilibration: powers like n^2 and n^-2 differ by many decades.
    let mut col_scale = Vec::with_capacity(n);
    for j in 0..n {
        let mut mx = S::zero(&ctx);
        for i in 0..m {
            mx = mx.max_abs(q.get(i, j));
        }
        if mx.is_zero() {
            return Err(Error::DegenerateFit(format!("column {j} is identically zero")));
        }
        for i in 0..m {
            let v = q.get(i, j).clone() / &mx;
            q.set(i, j, v);
        }
        col_scale.push(mx);
    }
    let eps = S::unit_roundoff(&ctx);
    let mut rdiag = Vec::with_capacity(n);
    for k in 0..n {
        let mut nrm = S::zero(&ctx);
        for i in k..m {
            nrm = nrm.hypot(q.get(i, k));
        }
        if nrm.to_f64() <= eps * 1e3 * (m as f64).sqrt() {
            return Err(Error::DegenerateFit("rank-deficient fit matrix".into()));
        }
        if q.get(k, k).is_negative() {
            nrm = -nrm;
        }
        for i in k..m {
            let v = q.get(i, k).clone() / &nrm;
            q.set(i, k, v);
        }
        let v = q.get(k, k).clone() + &S::one(&ctx);
        q.set(k, k, v);
        for j in k + 1..n {
            let mut s = S::zero(&ctx);
            for i in k..m {
                s = s + &(q.get(i, k).clone() * q.get(i, j));
            }
            s = -s / q.get(k, k);
            for i in k..m {
                let v = q.get(i, j).clone() + &(s.clone() * q.get(i, k));
                q.set(i, j, v);
            }
        }
        let mut s = S::zero(&ctx);
        for i in k..m {
            s = s + &(q.get(i, k).clone() * &rhs[i]);
        }
        s = -s / q.get(k, k);
        for i in k..m {
            rhs[i] = rhs[i].clone() + &(s.clone() * q.get(i, k));
        }
        rdiag.push(-nrm);
    }
    let mut x = vec![S::zero(&ctx); n];
    for k in (0..n).rev() {
        let mut s = rhs[k].clone();
        for j in k + 1..n {
            s = s - &(q.get(k, j).clone() * &x[j]);
        }
        x[k] = s / &rdiag[k];
    }
    Ok(x.into_iter().zip(col_scale).map(|(v, c)| v / &c).collect())
}

/// Gaussian elimination with partial pivoting on a square system.
pub fn solve<S: Real>(mut a: DenseMatrix<S>, mut b: Vec<S>) -> Result<Vec<S>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(Error::Invalid("solve needs a square system".into()));
    }
    let ctx = b[0].context();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if a.get(i, k).abs() > a.get(piv, k).abs() {
                piv = i;
            }
        }
        if a.get(piv, k).is_zero() {
            return Err(Error::DegenerateFit("singular system".into()));
        }
        if piv != k {
            for j in 0..n {
                a.data.swap(k * n + j, piv * n + j);
            }
            b.swap(k, piv);
        }
        for i in k + 1..n {
            let f = a.get(i, k).clone() / a.get(k, k);
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a.get(i, j).clone() - &(f.clone() * a.get(k, j));
                a.set(i, j, v);
            }
            b[i] = b[i].clone() - &(f * &b[k]);
        }
    }
    let mut x = vec![S::zero(&ctx); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for j in k + 1..n {
            s = s - &(a.get(k, j).clone() * &x[j]);
        }
        x[k] = s / a.get(k, k);
    }
    Ok(x)
}

/// Euclidean norm as one square root of a sum of squares. Software floats
/// have an unbounded exponent range, and binary64 inputs here stay far from
/// overflow, so no rescaling is done.
fn norm_of<'a, S: Real>(xs: impl Iterator<Item = &'a S>, ctx: &S::Context) -> Result<S> {
    let mut acc = S::zero(ctx);
    for x in xs {
        if !x.is_zero() {
            acc = acc + &x.square();
        }
    }
    acc.sqrt()
}

/// Singular values (descending) and right singular vectors of an `m x n`
/// matrix with `m >= n`. Column `j` of `v` pairs with `sigma[j]`.
#[derive(Clone, Debug)]
pub struct Svd<S> {
    pub sigma: Vec<S>,
    pub v: DenseMatrix<S>,
}

/// Golub-Kahan-Reinsch SVD (the classic one-sided-V variant).
pub fn svd<S: Real>(a: &DenseMatrix<S>) -> Result<Svd<S>> {
    svd_impl(a, true)
}

/// Singular values only (descending); much cheaper than [`svd`] because no
/// rotations are accumulated.
pub fn singular_values<S: Real>(a: &DenseMatrix<S>) -> Result<Vec<S>> {
    svd_impl(a, false).map(|d| d.sigma)
}

fn svd_impl<S: Real>(a: &DenseMatrix<S>, want_v: bool) -> Result<Svd<S>> {
    let (m, n) = (a.rows, a.cols);
    if m < n || n == 0 {
        return Err(Error::Invalid("svd needs rows >= cols > 0".into()));
    }
    let ctx = a.get(0, 0).context();
    let zero = || S::zero(&ctx);
    let mut a = a.clone();
    let mut s = vec![zero(); n.min(m + 1)];
    let mut e = vec![zero(); n];
    let mut work = vec![zero(); m];
    let vn = if want_v { n } else { 0 };
    let mut v = DenseMatrix::zeros(&ctx, vn, vn);
    let nct = (m - 1).min(n);
    let nrt = n.saturating_sub(2).min(m);
    let one = S::one(&ctx);

    for k in 0..nct.max(nrt) {
        if k < nct {
            s[k] = norm_of((k..m).map(|i| a.get(i, k)), &ctx)?;
            if !s[k].is_zero() {
                if a.get(k, k).is_negative() {
                    s[k] = -s[k].clone();
                }
                for i in k..m {
                    if !a.get(i, k).is_zero() {
                        let val = a.get(i, k).clone() / &s[k];
                        a.set(i, k, val);
                    }
                }
                let val = a.get(k, k).clone() + &one;
                a.set(k, k, val);
            }
            s[k] = -s[k].clone();
        }
        for j in k + 1..n {
            if k < nct && !s[k].is_zero() {
                let mut t = zero();
                for i in k..m {
                    if !a.get(i, k).is_zero() && !a.get(i, j).is_zero() {
                        t = t + &(a.get(i, k).clone() * a.get(i, j));
                    }
                }
                if !t.is_zero() {
                    t = -t / a.get(k, k);
                    for i in k..m {
                        if !a.get(i, k).is_zero() {
                            let val = a.get(i, j).clone() + &(t.clone() * a.get(i, k));
                            a.set(i, j, val);
                        }
                    }
                }
            }
            e[j] = a.get(k, j).clone();
        }
        if k < nrt {
            e[k] = norm_of(e[k + 1..n].iter(), &ctx)?;
            if !e[k].is_zero() {
                if e[k + 1].is_negative() {
                    e[k] = -e[k].clone();
                }
                for i in k + 1..n {
                    if !e[i].is_zero() {
                        e[i] = e[i].clone() / &e[k];
                    }
                }
                e[k + 1] = e[k + 1].clone() + &one;
            }
            e[k] = -e[k].clone();
            if k + 1 < m && !e[k].is_zero() {
                for w in work.iter_mut().skip(k + 1) {
                    *w = zero();
                }
                for j in k + 1..n {
                    if e[j].is_zero() {
                        continue;
                    }
                    for i in k + 1..m {
                        if !a.get(i, j).is_zero() {
                            work[i] = work[i].clone() + &(e[j].clone() * a.get(i, j));
                        }
                    }
                }
                for j in k + 1..n {
                    if e[j].is_zero() {
                        continue;
                    }
                    let t = -e[j].clone() / &e[k + 1];
                    for i in k + 1..m {
                        if !work[i].is_zero() {
                            let val = a.get(i, j).clone() + &(t.clone() * &work[i]);
                            a.set(i, j, val);
                        }
                    }
                }
            }
            if want_v {
                for i in k + 1..n {
                    v.set(i, k, e[i].clone());
                }
            }
        }
    }

    let mut p = n.min(m + 1);
    if nct < n {
        s[nct] = a.get(nct, nct).clone();
    }
    if m < p {
        s[p - 1] = zero();
    }
    if nrt + 1 < p {
        e[nrt] = a.get(nrt, p - 1).clone();
    }
    e[p - 1] = zero();

    for k in (0..vn).rev() {
        if k < nrt && !e[k].is_zero() {
            for j in k + 1..n {
                let mut t = zero();
                for i in k + 1..n {
                    t = t + &(v.get(i, k).clone() * v.get(i, j));
                }
                t = -t / v.get(k + 1, k);
                for i in k + 1..n {
                    let val = v.get(i, j).clone() + &(t.clone() * v.get(i, k));
                    v.set(i, j, val);
                }
            }
        }
        for i in 0..n {
            v.set(i, k, zero());
        }
        v.set(k, k, one.clone());
    }

    let pp = p - 1;
    let eps = S::from_f64(&ctx, 2.0 * S::unit_roundoff(&ctx));
    let tiny = S::from_f64(&ctx, 2f64.powi(-966));
    let mut iter = 0usize;
    let max_iter = 75 * n.max(10);
    let mut total_iter = 0usize;

    let rotate_v = |v: &mut DenseMatrix<S>, cs: &S, sn: &S, j: usize, l: usize| {
        for i in 0..vn {
            let t = cs.clone() * v.get(i, j) + &(sn.clone() * v.get(i, l));
            let u = -(sn.clone() * v.get(i, j)) + &(cs.clone() * v.get(i, l));
            v.set(i, l, u);
            v.set(i, j, t);
        }
    };

    while p > 0 {
        total_iter += 1;
        if total_iter > max_iter * n {
            return Err(Error::Domain("SVD iteration did not converge".into()));
        }
        // k is signed here: -1 means "no negligible superdiagonal found".
        let mut k: isize = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            let bound = tiny.clone() + &(eps.clone() * &(s[ku].abs() + &s[ku + 1].abs()));
            if e[ku].abs() <= bound {
                e[ku] = zero();
                break;
            }
            k -= 1;
        }
        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks: isize = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let mut t = zero();
                if ksu != p {
                    t = t + &e[ksu].abs();
                }
                if ks != k + 1 {
                    t = t + &e[ksu - 1].abs();
                }
                if s[ksu].abs() <= tiny.clone() + &(eps.clone() * &t) {
                    s[ksu] = zero();
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            1 => {
                let mut f = e[p - 2].clone();
                e[p - 2] = zero();
                let mut j = p - 2;
                loop {
                    let t = s[j].hypot(&f);
                    let cs = s[j].clone() / &t;
                    let sn = f.clone() / &t;
                    s[j] = t;
                    if j != k {
                        f = -(sn.clone() * &e[j - 1]);
                        e[j - 1] = cs.clone() * &e[j - 1];
                    }
                    rotate_v(&mut v, &cs, &sn, j, p - 1);
                    if j == k {
                        break;
                    }
                    j -= 1;
                }
            }
            2 => {
                let mut f = e[k - 1].clone();
                e[k - 1] = zero();
                for j in k..p {
                    let t = s[j].hypot(&f);
                    let cs = s[j].clone() / &t;
                    let sn = f.clone() / &t;
                    s[j] = t;
                    f = -(sn * &e[j]);
                    e[j] = cs * &e[j];
                }
            }
            3 => {
                let mut scale = s[p - 1].abs();
                for x in [&s[p - 2], &e[p - 2], &s[k], &e[k]] {
                    scale = scale.max_abs(x);
                }
                let sp = s[p - 1].clone() / &scale;
                let spm1 = s[p - 2].clone() / &scale;
                let epm1 = e[p - 2].clone() / &scale;
                let sk = s[k].clone() / &scale;
                let ek = e[k].clone() / &scale;
                let half = S::ratio(&ctx, 1, 2);
                let b = ((spm1.clone() + &sp) * &(spm1 - &sp) + &epm1.square()) * &half;
                let c = (sp.clone() * &epm1).square();
                let mut shift = zero();
                if !b.is_zero() || !c.is_zero() {
                    shift = (b.square() + &c).sqrt()?;
                    if b.is_negative() {
                        shift = -shift;
                    }
                    shift = c / &(b + &shift);
                }
                let mut f = (sk.clone() + &sp) * &(sk.clone() - &sp) + &shift;
                let mut g = sk * &ek;
                for j in k..p - 1 {
                    let t = f.hypot(&g);
                    let cs = f.clone() / &t;
                    let sn = g.clone() / &t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs.clone() * &s[j] + &(sn.clone() * &e[j]);
                    e[j] = cs.clone() * &e[j] - &(sn.clone() * &s[j]);
                    g = sn.clone() * &s[j + 1];
                    s[j + 1] = cs.clone() * &s[j + 1];
                    rotate_v(&mut v, &cs, &sn, j, j + 1);
                    let t = f.hypot(&g);
                    let cs = f.clone() / &t;
                    let sn = g.clone() / &t;
                    s[j] = t;
                    f = cs.clone() * &e[j] + &(sn.clone() * &s[j + 1]);
                    s[j + 1] = -(sn.clone() * &e[j]) + &(cs.clone() * &s[j + 1]);
                    g = sn * &e[j + 1];
                    e[j + 1] = cs * &e[j + 1];
                }
                e[p - 2] = f;
                iter += 1;
                if iter > max_iter {
                    return Err(Error::Domain("SVD QR sweep did not converge".into()));
                }
            }
            _ => {
                let mut k = k;
                if !s[k].is_negative() && !s[k].is_zero() {
                    // already positive
                } else {
                    s[k] = s[k].abs();
                    for i in 0..vn.min(pp + 1) {
                        let val = -v.get(i, k).clone();
                        v.set(i, k, val);
                    }
                }
                while k < pp {
                    if s[k] >= s[k + 1] {
                        break;
                    }
                    s.swap(k, k + 1);
                    if want_v && k < n - 1 {
                        for i in 0..n {
                            v.data.swap(i * n + k, i * n + k + 1);
                        }
                    }
                    k += 1;
                }
                iter = 0;
                p -= 1;
            }
        }
    }
    Ok(Svd { sigma: s, v })
}

/// Exact nullspace basis by reduced row echelon form. Intended for exact
/// scalars; any nonzero pivot is accepted.
pub fn rref_nullspace<S: Real>(a: &DenseMatrix<S>) -> Vec<Vec<S>> {
    let (m, n) = (a.rows, a.cols);
    if n == 0 {
        return Vec::new();
    }
    let ctx = a.get(0, 0).context();
    let mut r = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(piv) = (row..m).find(|&i| !r.get(i, col).is_zero()) else {
            continue;
        };
        if piv != row {
            for j in 0..n {
                r.data.swap(piv * n + j, row * n + j);
            }
        }
        let inv = S::one(&ctx) / r.get(row, col);
        for j in col..n {
            let v = r.get(row, j).clone() * &inv;
            r.set(row, j, v);
        }
        for i in 0..m {
            if i == row || r.get(i, col).is_zero() {
                continue;
            }
            let f = r.get(i, col).clone();
            for j in col..n {
                let v = r.get(i, j).clone() - &(f.clone() * r.get(row, j));
                r.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![S::zero(&ctx); n];
            x[f] = S::one(&ctx);
            for (pr, &pc) in pivots.iter().enumerate() {
                x[pc] = -r.get(pr, f).clone();
            }
            x
        })
        .collect()
}

/// Orthonormal basis of span(vectors) by twice-iterated modified Gram-Schmidt.
/// Vectors that collapse below `drop_tol` relative norm are discarded.
pub fn orthonormalize(vectors: &[Vec<f64>], drop_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let norm0 = norm(v);
        if norm0 == 0.0 {
            continue;
        }
        let mut w: Vec<f64> = v.iter().map(|x| x / norm0).collect();
        for _ in 0..2 {
            for q in &basis {
                let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let nw = norm(&w);
        if nw > drop_tol {
            basis.push(w.into_iter().map(|x| x / nw).collect());
        }
    }
    basis
}

pub fn norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Largest principal angle between span(a) and span(b), in radians.
///
/// Computed as the arcsine of the largest residual left after projecting
/// the orthonormalized vectors of each space onto the other.
pub fn subspace_angle(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let qa = orthonormalize(a, 1e-12);
    let qb = orthonormalize(b, 1e-12);
    if qa.len() != qb.len() || qa.is_empty() {
        return std::f64::consts::FRAC_PI_2;
    }
    let worst = |from: &[Vec<f64>], onto: &[Vec<f64>]| {
        from.iter()
            .map(|x| {
                let mut r = x.clone();
                for q in onto {
                    let c: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
                    for (ri, qi) in r.iter_mut().zip(q) {
                        *ri -= c * qi;
                    }
                }
                norm(&r)
            })
            .fold(0.0f64, f64::max)
    };
    worst(&qa, &qb).max(worst(&qb, &qa)).min(1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{MpContext, MpFloat, Rational};

    fn hilbert(n: usize) -> DenseMatrix<f64> {
        let rows = (0..n).map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect()).collect();
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn svd_reconstructs_known_singular_values() {
        let a = DenseMatrix::from_rows(vec![vec![3.0, 0.0], vec![0.0, -2.0], vec![0.0, 0.0]]).unwrap();
        let d = svd(&a).unwrap();
        assert!((d.sigma[0] - 3.0).abs() < 1e-14);
        assert!((d.sigma[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn svd_of_hilbert_matches_norm_and_orthogonality() {
        let a = hilbert(6);
        let d = svd(&a).unwrap();
        // largest singular value of the 6x6 Hilbert matrix
        assert!((d.sigma[0] - 1.618_899_858_924_339).abs() < 1e-12);
        for i in 0..6 {
            for j in 0..6 {
                let c: f64 = (0..6).map(|r| d.v.get(r, i) * d.v.get(r, j)).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-12);
            }
        }
        // A v_j has norm sigma_j
        for j in 0..6 {
            let col: Vec<f64> = (0..6).map(|r| *d.v.get(r, j)).collect();
            let av = a.mul_vec(&col);
            assert!((norm(&av) - d.sigma[j]).abs() < 1e-12 * d.sigma[0]);
        }
    }

    #[test]
    fn svd_detects_rank_deficiency() {
        let a = DenseMatrix::from_rows(vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        let d = svd(&a).unwrap();
        assert!(d.sigma[2] < 1e-14 * d.sigma[0]);
        let null: Vec<f64> = (0..3).map(|r| *d.v.get(r, 2)).collect();
        assert!(norm(&a.mul_vec(&null)) < 1e-13);
    }

    #[test]
    fn svd_in_software_precision() {
        let ctx = MpContext::with_decimal_digits(60);
        let rows = (0..8).map(|i| (0..8).map(|j| MpFloat::ratio(&ctx, 1, (i + j + 1) as i64)).collect()).collect();
        let a = DenseMatrix::from_rows(rows).unwrap();
        let d = svd(&a).unwrap();
        // smallest singular value of the 8x8 Hilbert matrix is about 1.11e-10
        let smin = d.sigma[7].to_f64();
        assert!((smin / 1.111_538_966_372_442_4e-10 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn least_squares_recovers_polynomial() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        let rows = xs.iter().map(|&x| vec![x * x, x, 1.0]).collect();
        let b: Vec<f64> = xs.iter().map(|&x| 2.0 * x * x - 3.0 * x + 0.5).collect();
        let sol = least_squares(&DenseMatrix::from_rows(rows).unwrap(), &b).unwrap();
        assert!((sol[0] - 2.0).abs() < 1e-12);
        assert!((sol[1] + 3.0).abs() < 1e-11);
        assert!((sol[2] - 0.5).abs() < 1e-11);
    }

    #[test]
    fn exact_least_squares_and_nullspace() {
        let q = |n, d| Rational::new(n, d);
        let rows = (1..=5).map(|x| vec![q(x, 1), q(1, 1)]).collect();
        let b: Vec<Rational> = (1..=5).map(|x| q(3 * x - 1, 2)).collect();
        let sol = least_squares(&DenseMatrix::from_rows(rows).unwrap(), &b).unwrap();
        assert_eq!(sol, vec![q(3, 2), q(-1, 2)]);

        let a = DenseMatrix::from_rows(vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]]).unwrap();
        let ns = rref_nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(Real::is_zero));
        }
    }

    #[test]
    fn rank_deficient_fit_is_reported() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]];
        let r = least_squares(&DenseMatrix::from_rows(rows).unwrap(), &[1.0, 2.0, 3.0]);
        assert!(matches!(r, Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn angles_between_planes() {
        let e1 = vec![1.0, 0.0, 0.0];
        let e2 = vec![0.0, 1.0, 0.0];
        let e3 = vec![0.0, 0.0, 1.0];
        let mix = vec![1.0, 1.0, 0.0];
        assert!(subspace_angle(&[e1.clone(), e2.clone()], &[mix, e2.clone()]) < 1e-15);
        let t: f64 = 0.3;
        let tilted = vec![t.cos(), 0.0, t.sin()];
        let ang = subspace_angle(&[e1, e2.clone()], &[tilted, e2]);
        assert!((ang - t).abs() < 1e-14);
        assert!((subspace_angle(&[e3.clone()], &[e3]) - 0.0).abs() < 1e-15);
    }
}
