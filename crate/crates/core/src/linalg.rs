//! Dense integer matrices with exact determinant, characteristic polynomial
//! and signature computations.
//!
//! Large determinants and characteristic polynomials are computed modulo a
//! family of primes (see [`crate::modp`]) and lifted through a Hadamard-type
//! bound, so no step relies on floating point or on heuristic early exits.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::modp::{self, crt_vectors, inv_mod, norm_ceil, primes_needed, reduce, Crt};
use crate::poly::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag<'a>(blocks: impl IntoIterator<Item = &'a IntMatrix>) -> Self {
        let blocks: Vec<&IntMatrix> = blocks.into_iter().collect();
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square(), "block_diag expects square blocks");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    /// Rectangular sub-block `[r0, r0+h) x [c0, c0+w)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut out = Self::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// Principal submatrix on the given index list (in that order).
    pub fn principal(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// `x^T A y`
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.rows);
        assert_eq!(y.len(), self.cols);
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row_acc = BigInt::zero();
            for (j, yj) in y.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !yj.is_zero() {
                    row_acc += a * yj;
                }
            }
            acc += xi * row_acc;
        }
        acc
    }

    /// Connected components of the graph with an edge `i - j` whenever
    /// `A[i][j]` or `A[j][i]` is nonzero. Each component is sorted and the
    /// list is ordered by smallest member. For a square matrix the matrix is
    /// block diagonal, up to simultaneous permutation, along these blocks.
    pub fn components(&self) -> Vec<Vec<usize>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.get(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }

    fn to_mod(&self, p: u64) -> Vec<u64> {
        self.data.iter().map(|x| reduce(x, p)).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det_bareiss(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut prev = BigInt::one();
        let mut sign = 1;
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Exact determinant via multi-modular elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let bound = (0..n).fold(BigInt::one(), |acc, i| acc * norm_ceil(self.row(i).iter()));
        if bound.is_zero() {
            return BigInt::zero();
        }
        let k = primes_needed(&bound);
        let residues: Vec<(u64, u64)> = (0..k)
            .into_par_iter()
            .map(|i| {
                let p = modp::prime(i);
                let mut a = self.to_mod(p);
                (p, det_mod(&mut a, n, p))
            })
            .collect();
        let mut crt = Crt::new();
        for (p, r) in residues {
            crt.push(r, p);
        }
        crt.symmetric()
    }

    /// Characteristic polynomial `det(xI - A)`, monic, via Hessenberg
    /// reduction modulo primes.
    pub fn charpoly(&self) -> IntPoly {
        assert!(self.is_square());
        let n = self.rows;
        let bound = (0..n).fold(BigInt::one(), |acc, i| acc * (norm_ceil(self.row(i).iter()) + 1));
        let k = primes_needed(&bound);
        let residues: Vec<(u64, Vec<u64>)> = (0..k)
            .into_par_iter()
            .map(|i| {
                let p = modp::prime(i);
                let mut a = self.to_mod(p);
                (p, charpoly_mod(&mut a, n, p))
            })
            .collect();
        IntPoly::new(crt_vectors(&residues))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..c {
            if rank == r {
                break;
            }
            let Some(piv) = (rank..r).find(|&i| !a[i * c + col].is_zero()) else {
                continue;
            };
            for j in 0..c {
                a.swap(rank * c + j, piv * c + j);
            }
            let pivot = a[rank * c + col].clone();
            for i in rank + 1..r {
                for j in 0..c {
                    if j == col {
                        continue;
                    }
                    let v = &pivot * &a[i * c + j] - &a[i * c + col] * &a[rank * c + j];
                    a[i * c + j] = v / &prev;
                }
                a[i * c + col] = BigInt::zero();
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

pub(crate) fn det_mod(a: &mut [u64], n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = (p - det) % p;
        }
        let pk = a[k * n + k];
        det = det * pk % p;
        let inv = inv_mod(pk, p).unwrap();
        for i in k + 1..n {
            let f = a[i * n + k] * inv % p;
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for j in k..n {
                a[i * n + j] = (a[i * n + j] + nf * a[k * n + j]) % p;
            }
        }
    }
    det
}

/// Solve `A X = B` modulo `p` for square invertible `A` (`n x n`) and
/// `B` (`n x m`). Returns `None` when `A` is singular mod `p`.
pub(crate) fn solve_mod(a: &mut [u64], b: &mut [u64], n: usize, m: usize, p: u64) -> Option<()> {
    for k in 0..n {
        let piv = (k..n).find(|&i| a[i * n + k] != 0)?;
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            for j in 0..m {
                b.swap(k * m + j, piv * m + j);
            }
        }
        let inv = inv_mod(a[k * n + k], p).unwrap();
        for j in 0..n {
            a[k * n + j] = a[k * n + j] * inv % p;
        }
        for j in 0..m {
            b[k * m + j] = b[k * m + j] * inv % p;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for j in 0..n {
                a[i * n + j] = (a[i * n + j] + nf * a[k * n + j]) % p;
            }
            for j in 0..m {
                b[i * m + j] = (b[i * m + j] + nf * b[k * m + j]) % p;
            }
        }
    }
    Some(())
}

/// Characteristic polynomial modulo `p`, ascending coefficients, monic of
/// length `n + 1`. Destroys `a`.
pub(crate) fn charpoly_mod(h: &mut [u64], n: usize, p: u64) -> Vec<u64> {
    // Reduction to upper Hessenberg form by similarity transforms.
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i * n + m - 1] != 0) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.swap(i * n + j, m * n + j);
            }
            for r in 0..n {
                h.swap(r * n + i, r * n + m);
            }
        }
        let inv = inv_mod(h[m * n + m - 1], p).unwrap();
        for i in m + 1..n {
            let u = h[i * n + m - 1] * inv % p;
            if u == 0 {
                continue;
            }
            let nu = p - u;
            for j in 0..n {
                h[i * n + j] = (h[i * n + j] + nu * h[m * n + j]) % p;
            }
            for r in 0..n {
                h[r * n + m] = (h[r * n + m] + u * h[r * n + i]) % p;
            }
        }
    }
    // Recurrence on leading principal submatrices of the Hessenberg form.
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for m in 1..=n {
        let prev = &polys[m - 1];
        let diag = h[(m - 1) * n + (m - 1)];
        let mut cur = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            cur[k + 1] = (cur[k + 1] + c) % p;
            cur[k] = (cur[k] + (p - diag) * c) % p;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = t * h[(m - i) * n + (m - i - 1)] % p;
            let coef = t * h[(m - i - 1) * n + (m - 1)] % p;
            if coef == 0 {
                continue;
            }
            let ncoef = p - coef;
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                cur[k] = (cur[k] + ncoef * c) % p;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Number of sign changes in a coefficient sequence, zeros skipped.
fn sign_changes<'a>(coeffs: impl Iterator<Item = &'a BigInt>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for c in coeffs {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Signature of a symmetric integer matrix by Descartes' rule of signs on
/// its characteristic polynomial. The rule is exact here because the
/// characteristic polynomial of a symmetric matrix is real-rooted.
pub fn signature_charpoly(s: &IntMatrix) -> i64 {
    assert!(s.is_symmetric(), "signature needs a symmetric matrix");
    if s.rows() == 0 {
        return 0;
    }
    let cp = s.charpoly();
    let pos = sign_changes(cp.coeffs().iter());
    let flipped: Vec<BigInt> = cp
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
        .collect();
    let neg = sign_changes(flipped.iter());
    pos as i64 - neg as i64
}

/// Signature of a symmetric integer matrix by congruence diagonalisation
/// over the rationals (symmetric pivoting, with the `e_k + e_j` trick when
/// the remaining diagonal vanishes).
pub fn signature_ldl(s: &IntMatrix) -> i64 {
    assert!(s.is_symmetric(), "signature needs a symmetric matrix");
    let n = s.rows();
    let mut a: Vec<BigRational> = s
        .entries()
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    let mut sig = 0i64;
    for k in 0..n {
        if a[k * n + k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j * n + j].is_zero()) {
                for c in 0..n {
                    a.swap(k * n + c, j * n + c);
                }
                for r in 0..n {
                    a.swap(r * n + k, r * n + j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k * n + j].is_zero()) {
                // row_k += row_j, col_k += col_j: new diagonal 2 a_kj + a_jj
                for c in 0..n {
                    let v = a[j * n + c].clone();
                    a[k * n + c] += v;
                }
                for r in 0..n {
                    let v = a[r * n + j].clone();
                    a[r * n + k] += v;
                }
            } else {
                continue;
            }
        }
        let d = a[k * n + k].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            let f = &a[i * n + k] / &d;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = &f * &a[k * n + j];
                a[i * n + j] -= v;
            }
        }
        for i in k + 1..n {
            a[i * n + k] = BigRational::zero();
            a[k * n + i] = BigRational::zero();
        }
    }
    sig
}

/// Signature summed over the connected blocks of the matrix.
pub fn signature(s: &IntMatrix) -> i64 {
    s.components()
        .iter()
        .map(|c| {
            let b = s.principal(c);
            if b.rows() <= 2 {
                signature_ldl(&b)
            } else {
                signature_charpoly(&b)
            }
        })
        .sum()
}

/// Integer square root when `x` is a perfect square.
pub fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// `gcd` over a slice, zero for an empty slice.
pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
