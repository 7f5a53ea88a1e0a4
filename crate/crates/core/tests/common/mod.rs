//! Independent reference implementations used only by the tests. None of
//! these call into the algorithms they check.

#![allow(dead_code)]

use knotform_core::{KnotExpr, LaurentPoly, SeifertMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Determinant by Gaussian elimination over the rationals.
pub fn det_rational(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        let pivot = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let f = &row[k] / &pivot[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= &f * p;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

fn entries(v: &SeifertMatrix) -> Vec<Vec<BigInt>> {
    let n = v.size();
    (0..n).map(|i| (0..n).map(|j| v.get(i, j).clone()).collect()).collect()
}

/// Coefficients (ascending, trimmed) to a centred Laurent polynomial with
/// positive value at `t = 1`.
fn centre(mut c: Vec<BigInt>) -> LaurentPoly {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let lo = c.iter().position(|x| !x.is_zero()).unwrap_or(0);
    let c: Vec<BigInt> = c[lo..].to_vec();
    let half = (c.len() as i64 - 1) / 2;
    let sum: BigInt = c.iter().sum();
    let sign = if sum.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    LaurentPoly::from_terms(c.into_iter().enumerate().map(|(i, x)| (i as i64 - half, x * &sign)))
}

/// `det(V - tV^T)` by evaluation at `t = 0..=n` and Newton interpolation.
pub fn alexander_oracle(v: &SeifertMatrix) -> LaurentPoly {
    let n = v.size();
    let m = entries(v);
    let values: Vec<BigRational> = (0..=n)
        .map(|t| {
            let t = BigInt::from(t);
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|i| (0..n).map(|j| &m[i][j] - &t * &m[j][i]).collect())
                .collect();
            BigRational::from_integer(det_rational(&rows))
        })
        .collect();
    // divided differences on nodes 0..=n
    let mut dd = values.clone();
    for level in 1..=n {
        for i in (level..=n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(level));
        }
    }
    // expand the Newton form
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for k in (0..=n).rev() {
        // coeffs <- coeffs * (t - k) + dd[k]
        let mut next = vec![BigRational::zero(); n + 1];
        for i in 0..n {
            next[i + 1] += &coeffs[i];
            next[i] -= &coeffs[i] * BigRational::from_integer(BigInt::from(k));
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    centre(
        coeffs
            .into_iter()
            .map(|c| {
                assert!(c.is_integer());
                c.to_integer()
            })
            .collect(),
    )
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact long division by a monic polynomial.
fn poly_div_monic(a: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let dd = d.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        for (j, x) in d.iter().enumerate() {
            r[k + j] -= &c * x;
        }
        q[k] = c;
    }
    assert!(r.iter().all(|x| x.is_zero()), "division is not exact");
    q
}

fn t_pow_minus_one(k: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); k + 1];
    v[0] = -BigInt::one();
    v[k] = BigInt::one();
    v
}

/// `(t^{mn} - 1)(t - 1) / ((t^m - 1)(t^n - 1))`.
pub fn torus_alexander_formula(m: u64, n: u64) -> LaurentPoly {
    let (m, n) = (m as usize, n as usize);
    let num = poly_mul(&t_pow_minus_one(m * n), &t_pow_minus_one(1));
    let q = poly_div_monic(&num, &t_pow_minus_one(m));
    centre(poly_div_monic(&q, &t_pow_minus_one(n)))
}

/// `Δ(t^m)` for a Laurent polynomial.
pub fn substitute_power(p: &LaurentPoly, m: i64) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(e, c)| (e * m, c.clone())))
}

/// Tristram–Levine signature of the positive torus knot `T(p, q)` at
/// `θ = π num/den`, from the lattice count over `s = i/p + j/q`:
/// `-(#{x < s < x + 1} - #{s < x or s > x + 1})`, `x = θ/2π`.
/// `None` when some `s` lies on the boundary (a root of `Δ`).
pub fn torus_tl_oracle(p: u64, q: u64, num: u64, den: u64) -> Option<i64> {
    let (p, q, num, den) = (p as i128, q as i128, num as i128, den as i128);
    // compare s = (iq + jp)/(pq) with x = num/(2 den) via cross products
    let mut inside = 0i64;
    let mut outside = 0i64;
    for i in 1..p {
        for j in 1..q {
            let s = 2 * den * (i * q + j * p);
            let lo = num * p * q;
            let hi = (num + 2 * den) * p * q;
            if s == lo || s == hi {
                return None;
            }
            if lo < s && s < hi {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    Some(-(inside - outside))
}

/// Classical signature of `T(p, q)`, `p, q > 0`.
pub fn torus_signature_oracle(p: u64, q: u64) -> i64 {
    torus_tl_oracle(p, q, 1, 1).expect("-1 is never a root for a knot")
}

/// Signature function at angle `θ = π num/den` of a knot built from
/// positive torus knots by `#`, mirror and cabling, using additivity and
/// the cabling formula `σ_ω(K{m,n}) = σ_{ω^m}(K) + σ_ω(T(m,n))`.
pub fn tl_oracle(e: &KnotExpr, num: u64, den: u64) -> Option<i64> {
    // reduce θ to (0, π] using σ_ω = σ_ω̄
    let reduce = |num: u64, den: u64| -> (u64, u64) {
        let r = num % (2 * den);
        if r > den {
            (2 * den - r, den)
        } else {
            (r, den)
        }
    };
    let (num, den) = reduce(num, den);
    if num == 0 {
        return Some(0);
    }
    match e {
        KnotExpr::Unknot => Some(0),
        KnotExpr::Torus(m, n) => {
            let v = torus_tl_oracle(*m as u64, n.unsigned_abs(), num, den)?;
            Some(if *n < 0 { -v } else { v })
        }
        KnotExpr::Cable(m, n, c) => {
            let companion = tl_oracle(c, *m as u64 * num, den)?;
            let pattern = if *m == 1 || n.abs() == 1 {
                0
            } else {
                tl_oracle(&KnotExpr::Torus(*m, *n), num, den)?
            };
            Some(companion + pattern)
        }
        KnotExpr::Mirror(x) => tl_oracle(x, num, den).map(|v| -v),
        KnotExpr::Reverse(x) => tl_oracle(x, num, den),
        KnotExpr::ConnSum(ps) | KnotExpr::Plumb(ps) => ps.iter().map(|p| tl_oracle(p, num, den)).sum(),
    }
}

/// `(m, n)` with `m >= 2`, `gcd(m, |n|) = 1`, `|n| >= 1`.
fn cable_params(max_m: i64, max_n: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_m, 1..=max_n, any::<bool>()).prop_filter_map("coprime", |(m, n, neg)| {
        let n = if neg { -n } else { n };
        (num_integer::Integer::gcd(&m, &n.abs()) == 1).then_some((m, n))
    })
}

/// Random expressions whose Seifert matrices stay below `max_size`.
pub fn expr_strategy(max_size: usize) -> impl Strategy<Value = KnotExpr> {
    let leaf = prop_oneof![
        1 => Just(KnotExpr::Unknot),
        6 => cable_params(4, 9).prop_map(|(m, n)| KnotExpr::Torus(m, n)),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            3 => (cable_params(3, 7), inner.clone()).prop_map(|((m, n), c)| KnotExpr::cable(m, n, c)),
            1 => inner.clone().prop_map(KnotExpr::mirror),
            1 => inner.clone().prop_map(KnotExpr::reverse),
            2 => prop::collection::vec(inner.clone(), 2..=3).prop_map(KnotExpr::conn_sum),
            2 => prop::collection::vec(inner, 2..=3).prop_map(KnotExpr::plumb),
        ]
    })
    .prop_filter("matrix small enough", move |e| {
        knotform_core::seifert::expected_size(e) <= max_size
    })
}
