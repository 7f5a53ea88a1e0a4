//! Integer polynomials: dense ordinary polynomials ([`IntPoly`]), sparse
//! Laurent polynomials ([`LaurentPoly`]), cyclotomic polynomials and Sturm
//! sequences for exact real-root counting.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial with integer coefficients, lowest degree first.
/// The coefficient vector never has trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the (positive) content.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Coefficients reversed: `t^deg * p(1/t)`.
    pub fn reciprocal(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::new(v)
    }

    /// Quotient and remainder when the division is exact over the integers
    /// at every step; `None` as soon as a quotient coefficient is fractional.
    pub fn div_rem_integral(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// `self / d` if `d` divides `self` exactly in `Z[t]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match self.div_rem_integral(d) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`; the
    /// multiplier is applied exactly that many times.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead().unwrap().clone();
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < dd {
            return self.clone();
        }
        let mut rem = self.clone();
        for i in (dd..=da).rev() {
            let top = rem.coeff(i);
            rem = rem.scale(&lead).sub(&Self::monomial(top, i - dd).mul(d));
        }
        rem
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Sign of `p(x)` for rational `x`, evaluated without fractions.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let Some(deg) = self.degree() else {
            return Ordering::Equal;
        };
        let (a, b) = (x.numer(), x.denom());
        // b > 0 for BigRational, so b^deg > 0 and the sign is that of the
        // homogenised sum.
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        let mut terms: Vec<BigInt> = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            terms.push(bpow.clone());
            bpow *= b;
        }
        let mut apow = BigInt::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &apow * &terms[deg - k];
            }
            apow *= a;
        }
        acc.cmp(&BigInt::zero())
    }

    /// Exact square root in `Z[t]`, if one exists. The returned root has a
    /// positive leading coefficient.
    pub fn sqrt_exact(&self) -> Option<Self> {
        let Some(deg) = self.degree() else {
            return Some(Self::zero());
        };
        if deg % 2 == 1 {
            return None;
        }
        let lead = self.lead().unwrap();
        if lead.is_negative() {
            return None;
        }
        let root_lead = lead.sqrt();
        if &root_lead * &root_lead != *lead {
            return None;
        }
        let half = deg / 2;
        // Determine coefficients from the top: f_{half-k}.
        let mut f = vec![BigInt::zero(); half + 1];
        f[half] = root_lead.clone();
        let two_lead = &root_lead * 2;
        for k in 1..=half {
            // coefficient of t^{deg-k} in f^2 equals 2 f_half f_{half-k} + S
            let mut s = BigInt::zero();
            for i in 1..k {
                s += &f[half - i] * &f[half - (k - i)];
            }
            let target = &self.coeffs[deg - k] - s;
            let (q, r) = target.div_rem(&two_lead);
            if !r.is_zero() {
                return None;
            }
            f[half - k] = q;
        }
        let f = Self::new(f);
        if f.mul(&f) == *self {
            Some(f)
        } else {
            None
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lp = LaurentPoly::from_int_poly(self, 0);
        write!(f, "{}", lp.display_with('t'))
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn totient(n: u64) -> u64 {
    euler_phi(n)
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The `d`-th cyclotomic polynomial, via the Möbius product
/// `Φ_d = ∏_{e | d} (t^e - 1)^{μ(d/e)}`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1);
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for e in 1..=d {
        if !d.is_multiple_of(e) {
            continue;
        }
        let factor = IntPoly::monomial(BigInt::one(), e as usize).sub(&IntPoly::one());
        match mobius(d / e) {
            1 => num = num.mul(&factor),
            -1 => den = den.mul(&factor),
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic quotient is exact")
}

/// Cyclotomic factors of `p` with multiplicities, and the cofactor free of
/// cyclotomic factors. Uses `φ(d) >= sqrt(d/2)` to bound the search.
pub fn split_cyclotomic(p: &IntPoly) -> (Vec<(u64, u32)>, IntPoly) {
    let mut rem = p.clone();
    let mut factors = Vec::new();
    let deg = p.degree().unwrap_or(0) as u64;
    let limit = 2 * deg * deg + 2;
    for d in 1..=limit {
        let rd = rem.degree().unwrap_or(0) as u64;
        if rd == 0 {
            break;
        }
        if totient(d) > rd {
            continue;
        }
        let phi = cyclotomic(d);
        let mut k = 0;
        while let Some(q) = rem.div_exact(&phi) {
            rem = q;
            k += 1;
        }
        if k > 0 {
            factors.push((d, k));
        }
    }
    (factors, rem)
}

/// Sparse Laurent polynomial with integer coefficients; only nonzero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn from_i64_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    /// `t^shift * p(t)`
    pub fn from_int_poly(p: &IntPoly, shift: i64) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + shift, c.clone())),
        )
    }

    /// Returns `(q, s)` with `self = t^s * q(t)` and `q(0) != 0`.
    pub fn to_int_poly(&self) -> (IntPoly, i64) {
        let Some(lo) = self.min_exp() else {
            return (IntPoly::zero(), 0);
        };
        let hi = self.max_exp().unwrap();
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (IntPoly::new(v), lo)
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `max_exp - min_exp`, zero for the zero polynomial.
    pub fn span(&self) -> u64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (hi - lo) as u64,
            _ => 0,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `p(t^m)`
    pub fn substitute_power(&self, m: i64) -> Self {
        assert!(m != 0);
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * m, c.clone())))
    }

    /// `p(t^-1)`
    pub fn invert_variable(&self) -> Self {
        self.substitute_power(-1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            acc + BigRational::from_integer(c.clone()) * x.pow(*e as i32)
        })
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    /// `p(1)`
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `p(-1)`
    pub fn at_minus_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e.rem_euclid(2) == 0 { c.clone() } else { -c })
            .sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    /// Multiply by the unit `±t^k` that centres the exponent range on zero
    /// and makes `p(1)` positive. Requires an even span.
    pub fn symmetric_normalize(&self) -> Self {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Self::zero();
        };
        let centred = self.shift(-(lo + hi).div_euclid(2));
        if centred.at_one().is_negative() {
            centred.neg()
        } else {
            centred
        }
    }

    /// Equality up to multiplication by `±t^k`.
    pub fn equal_up_to_units(&self, other: &Self) -> bool {
        match (self.min_exp(), other.min_exp()) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                let shifted = other.shift(a - b);
                shifted == *self || shifted.neg() == *self
            }
            _ => false,
        }
    }

    /// For a symmetric `p`, the integer polynomial `P` with
    /// `p(t) = P(t + t^-1)`. On the unit circle `t = e^{iθ}` this gives
    /// `p(e^{iθ}) = P(2 cos θ)`.
    pub fn trace_polynomial(&self) -> IntPoly {
        assert!(self.is_symmetric(), "trace polynomial needs a symmetric input");
        let top = self.max_exp().unwrap_or(0).max(0) as usize;
        // D_0 = 2, D_1 = x, D_{k+1} = x D_k - D_{k-1}; t^k + t^-k = D_k(x).
        let x = IntPoly::from_i64(&[0, 1]);
        let mut dk_prev = IntPoly::from_i64(&[2]);
        let mut dk = x.clone();
        let mut out = IntPoly::constant(self.coeff(0));
        for k in 1..=top {
            if k > 1 {
                let next = x.mul(&dk).sub(&dk_prev);
                dk_prev = std::mem::replace(&mut dk, next);
            }
            out = out.add(&dk.scale(&self.coeff(k as i64)));
        }
        out
    }

    pub fn display_with(&self, var: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                e => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        out
    }

    /// Sparse JSON object `{exponent: "coefficient"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with('t'))
    }
}

/// Sturm sequence of an integer polynomial, kept primitive at every step.
/// Counts distinct real roots even when the polynomial has repeated factors.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut chain = Vec::new();
        if p.is_zero() {
            return Self { chain };
        }
        chain.push(p.primitive());
        let d = p.derivative();
        if d.is_zero() {
            return Self { chain };
        }
        chain.push(d.primitive());
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree() == Some(0) {
                break;
            }
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^k * a - q * b with k = deg a - deg b + 1; flip
            // the sign when that multiplier is negative so that the chain is
            // a positive rescaling of the classical remainder sequence.
            let k = a.degree().unwrap() - b.degree().unwrap() + 1;
            let multiplier_negative = b.lead().unwrap().is_negative() && k % 2 == 1;
            let r = if multiplier_negative { r } else { r.neg() };
            chain.push(r.primitive());
        }
        Self { chain }
    }

    pub fn polynomial(&self) -> Option<&IntPoly> {
        self.chain.first()
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut changes = 0;
        let mut last = Ordering::Equal;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        if self.chain.is_empty() || a >= b {
            return 0;
        }
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }

    /// True iff the polynomial has no root in the closed interval `[a, b]`.
    pub fn root_free(&self, a: &BigRational, b: &BigRational) -> bool {
        let Some(p) = self.polynomial() else {
            return false;
        };
        p.sign_at(a) != Ordering::Equal && self.count_roots(a, b) == 0
    }

    /// Disjoint isolating intervals `(lo, hi]` each containing exactly one
    /// distinct root in `(a, b]`, refined until narrower than `width`.
    pub fn isolate(&self, a: &BigRational, b: &BigRational, width: &BigRational) -> Vec<(BigRational, BigRational)> {
        let mut out = Vec::new();
        let mut stack = vec![(a.clone(), b.clone())];
        let two = BigRational::from_integer(BigInt::from(2));
        while let Some((lo, hi)) = stack.pop() {
            let n = self.count_roots(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 && &(&hi - &lo) <= width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / &two;
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort();
        out
    }
}
