//! Concordance invariants of a Seifert matrix: Alexander polynomial,
//! signature and the Tristram–Levine signature function, determinant, Arf
//! invariant and a fiberedness consistency check.
//!
//! The signature function at `ω = e^{iθ}` is the signature of
//! `(1 - ω) V + (1 - ω̄) V^T`. Dividing by `1 - cos θ > 0` gives
//! `S - i u K` with `S = V + V^T`, `K = V - V^T`, `u = cot(θ/2)`, whose
//! realification `[[S, uK], [-uK, S]]` has twice its signature. Between
//! consecutive roots of `Δ` on the unit circle the value is constant, so
//! `u` may be replaced by a nearby rational once an exact root count
//! certifies that no root lies in between.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::linalg::{self, charpoly_mod, det_mod, solve_mod, IntMatrix};
use crate::modp::{crt_vectors, norm_ceil, prime, primes_needed, reduce};
use crate::poly::{cyclotomic, split_cyclotomic, totient, IntPoly, LaurentPoly, Sturm};
use crate::seifert::SeifertMatrix;
use crate::trig::{cot_half_squared, two_cos_from_cot_half, Angle};

/// Highest working precision (bits) for enclosures of `2 cos θ`.
const MAX_PRECISION: u32 = 4096;

/// `det(V - tV^T) mod p` via `V - tV^T = K (I - (t - 1) K^{-1} V^T)`,
/// ascending coefficients in `t`.
fn alexander_mod(v: &IntMatrix, vt: &IntMatrix, p: u64) -> Vec<u64> {
    let n = v.rows();
    let mut k: Vec<u64> = v
        .entries()
        .iter()
        .zip(vt.entries())
        .map(|(a, b)| reduce(&(a - b), p))
        .collect();
    let mut b: Vec<u64> = vt.entries().iter().map(|x| reduce(x, p)).collect();
    let det_k = det_mod(&mut k.clone(), n, p);
    assert!(det_k != 0, "V - V^T is singular modulo {p}");
    solve_mod(&mut k, &mut b, n, n, p).expect("V - V^T is invertible");
    // det(I - sN) = s^n χ_N(1/s)
    let chi = charpoly_mod(&mut b, n, p);
    let mut acc = vec![0u64; n + 1];
    let mut len = 0;
    for j in (0..=n).rev() {
        // acc <- acc * (t - 1) + r_j
        let mut next = vec![0u64; n + 1];
        for i in 0..len {
            next[i + 1] = (next[i + 1] + acc[i]) % p;
            next[i] = (next[i] + p - acc[i]) % p;
        }
        next[0] = (next[0] + chi[n - j]) % p;
        acc = next;
        len = (len + 1).min(n + 1);
    }
    acc.iter().map(|c| c * det_k % p).collect()
}

/// `det(V - tV^T)` as an ordinary polynomial, for `V` with `V - V^T`
/// nonsingular.
fn alexander_raw(v: &IntMatrix) -> IntPoly {
    let n = v.rows();
    if n == 0 {
        return IntPoly::one();
    }
    let vt = v.transpose();
    let bound: BigInt = (0..n)
        .map(|i| norm_ceil(v.row(i).iter()) + norm_ceil(vt.row(i).iter()))
        .product();
    let residues: Vec<(u64, Vec<u64>)> = (0..primes_needed(&bound))
        .into_par_iter()
        .map(|i| {
            let p = prime(i);
            (p, alexander_mod(v, &vt, p))
        })
        .collect();
    IntPoly::new(crt_vectors(&residues))
}

/// `det(V - tV^T)`, normalized to be symmetric with `Δ(1) > 0`.
pub fn alexander(v: &SeifertMatrix) -> LaurentPoly {
    LaurentPoly::from_int_poly(&alexander_raw(v.matrix()), 0).symmetric_normalize()
}

/// Signature of `V + V^T`.
pub fn signature(v: &SeifertMatrix) -> i64 {
    linalg::signature(&v.symmetrized())
}

/// `|det(V + V^T)|`.
pub fn determinant(v: &SeifertMatrix) -> BigInt {
    v.symmetrized().det().abs()
}

/// 0 when `Δ(-1) ≡ ±1 (mod 8)`, else 1.
pub fn arf(v: &SeifertMatrix) -> u8 {
    arf_from_alexander(&alexander(v))
}

pub fn arf_from_alexander(delta: &LaurentPoly) -> u8 {
    let r = delta.at_minus_one().mod_floor(&BigInt::from(8));
    if r == BigInt::from(1) || r == BigInt::from(7) {
        0
    } else {
        1
    }
}

/// `Δ` is monic at both ends and its span equals the size of `V`.
pub fn fibered_consistent(v: &SeifertMatrix) -> bool {
    fibered_from_alexander(&alexander(v), v.size())
}

pub fn fibered_from_alexander(delta: &LaurentPoly, size: usize) -> bool {
    let (Some(lo), Some(hi)) = (delta.min_exp(), delta.max_exp()) else {
        return false;
    };
    delta.coeff(lo).abs().is_one() && delta.coeff(hi).abs().is_one() && delta.span() == size as u64
}

/// The classical invariants of one Seifert matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub size: usize,
    pub alexander: LaurentPoly,
    pub signature: i64,
    pub determinant: BigInt,
    pub arf: u8,
    pub fibered: bool,
}

impl Summary {
    pub fn to_json(&self) -> serde_json::Value {
        let det = match self.determinant.to_u64() {
            Some(d) => serde_json::json!(d),
            None => serde_json::json!(self.determinant.to_string()),
        };
        serde_json::json!({
            "size": self.size,
            "alexander": self.alexander.to_string(),
            "alexander_terms": self.alexander.to_json(),
            "signature": self.signature,
            "determinant": det,
            "arf": self.arf,
            "fibered": self.fibered,
        })
    }
}

pub fn summarize(v: &SeifertMatrix) -> Summary {
    let delta = alexander(v);
    Summary {
        size: v.size(),
        signature: signature(v),
        determinant: determinant(v),
        arf: arf_from_alexander(&delta),
        fibered: fibered_from_alexander(&delta, v.size()),
        alexander: delta,
    }
}

/// A value of the signature function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignatureValue {
    Value(i64),
    /// `e^{iθ}` is a root of `Δ`, so the form is singular.
    AtJump,
}

impl SignatureValue {
    pub fn value(&self) -> Option<i64> {
        match self {
            SignatureValue::Value(v) => Some(*v),
            SignatureValue::AtJump => None,
        }
    }
}

/// A root `e^{iθ}` of `Δ` with `0 < θ < π`, located by an enclosure
/// `lo < 2 cos θ <= hi`; `angle` is set when `θ/π` is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jump {
    pub angle: Option<Angle>,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Jump {
    pub fn to_json(&self) -> serde_json::Value {
        match self.angle {
            Some(a) => serde_json::json!({ "angle": [a.num(), a.den()] }),
            None => serde_json::json!({ "two_cos": [self.lo.to_string(), self.hi.to_string()] }),
        }
    }

    fn approx_angle(&self) -> f64 {
        match self.angle {
            Some(a) => a.as_f64(),
            None => {
                let mid = ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
                    .to_f64()
                    .unwrap_or(0.0);
                (mid / 2.0).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
            }
        }
    }
}

struct JumpCell {
    jump: Jump,
    prec: u32,
}

impl JumpCell {
    fn refine(&mut self, remainder: &Sturm) {
        match self.jump.angle {
            Some(a) => {
                self.prec *= 2;
                let (lo, hi) = a.two_cos_bounds(self.prec);
                self.jump.lo = lo;
                self.jump.hi = hi;
            }
            None => {
                let two = BigRational::from_integer(BigInt::from(2));
                let mid = (&self.jump.lo + &self.jump.hi) / two;
                if remainder.count_roots(&self.jump.lo, &mid) == 1 {
                    self.jump.hi = mid;
                } else {
                    self.jump.lo = mid;
                }
            }
        }
    }
}

/// Samples of the signature function together with the jump locations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureProfile {
    pub samples: Vec<(Angle, SignatureValue)>,
    /// Ordered by increasing angle.
    pub jumps: Vec<Jump>,
}

impl SignatureProfile {
    /// Samples away from every jump.
    pub fn certified(&self) -> impl Iterator<Item = (Angle, i64)> + '_ {
        self.samples.iter().filter_map(|(a, v)| v.value().map(|v| (*a, v)))
    }

    pub fn certified_count(&self) -> usize {
        self.certified().count()
    }

    /// All certified samples are zero.
    pub fn vanishes(&self) -> bool {
        self.certified().all(|(_, v)| v == 0)
    }

    /// `[numerator, denominator, value]` triples, `null` at jumps.
    pub fn samples_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.samples
                .iter()
                .map(|(a, v)| serde_json::json!([a.num(), a.den(), v.value()]))
                .collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "samples": self.samples_json(),
            "jumps": self.jumps.iter().map(Jump::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Precomputed data for repeated evaluation of the signature function of
/// one Seifert matrix.
pub struct SignatureFunction {
    blocks: Vec<(IntMatrix, IntMatrix)>,
    alexander: LaurentPoly,
    raw: IntPoly,
    sturm: Sturm,
    signature: i64,
    memo: Mutex<BTreeMap<BigRational, i64>>,
}

impl SignatureFunction {
    pub fn new(v: &SeifertMatrix) -> Self {
        let s = v.symmetrized();
        let k = v.intersection_form();
        let blocks = v
            .matrix()
            .components()
            .into_iter()
            .map(|c| (s.principal(&c), k.principal(&c)))
            .collect();
        let alexander = alexander(v);
        let (raw, _) = alexander.to_int_poly();
        let sturm = Sturm::new(&alexander.trace_polynomial());
        Self {
            blocks,
            alexander,
            raw,
            sturm,
            signature: linalg::signature(&s),
            memo: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn alexander(&self) -> &LaurentPoly {
        &self.alexander
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }

    /// `e^{iθ}` is a root of `Δ`: exactly when `Φ_d` divides `Δ`, `d` the
    /// order of `e^{iθ}`.
    pub fn is_jump(&self, angle: Angle) -> bool {
        let d = angle.root_order();
        let deg = self.raw.degree().unwrap_or(0) as u64;
        totient(d) <= deg && deg > 0 && self.raw.div_exact(&cyclotomic(d)).is_some()
    }

    fn value_at_cot(&self, u: &BigRational) -> i64 {
        if let Some(v) = self.memo.lock().unwrap().get(u) {
            return *v;
        }
        let a = u.numer();
        let b = u.denom();
        let total: i64 = self
            .blocks
            .iter()
            .map(|(s, k)| {
                let m = s.rows();
                let bs = s.scale(b);
                let ak = k.scale(a);
                let mut r = IntMatrix::zeros(2 * m, 2 * m);
                for i in 0..m {
                    for j in 0..m {
                        r.set(i, j, bs.get(i, j).clone());
                        r.set(m + i, m + j, bs.get(i, j).clone());
                        r.set(i, m + j, ak.get(i, j).clone());
                        r.set(m + i, j, -ak.get(i, j));
                    }
                }
                linalg::signature(&r) / 2
            })
            .sum();
        self.memo.lock().unwrap().insert(u.clone(), total);
        total
    }

    /// Signature of `(1 - ω) V + (1 - ω̄) V^T` at `ω = e^{iθ}`.
    pub fn at(&self, angle: Angle) -> SignatureValue {
        if self.is_jump(angle) {
            return SignatureValue::AtJump;
        }
        if angle.is_pi() {
            return SignatureValue::Value(self.signature);
        }
        let mut prec = 64;
        let (lo, hi) = loop {
            let (lo, hi) = angle.two_cos_bounds(prec);
            if self.sturm.root_free(&lo, &hi) {
                break (lo, hi);
            }
            if prec >= MAX_PRECISION {
                log::warn!("no root-free enclosure of 2cos({angle}) at {prec} bits");
                return SignatureValue::AtJump;
            }
            prec *= 2;
        };
        let two = BigRational::from_integer(BigInt::from(2));
        let clo = if lo < -&two { -two.clone() } else { lo.clone() };
        let chi = if hi > two { two.clone() } else { hi.clone() };
        let target = cot_half_squared(&((clo + chi) / &two));
        for bits in 0..(2 * MAX_PRECISION) {
            let scale = BigInt::one() << bits;
            let scaled = target.clone() * BigRational::from_integer(&scale * &scale);
            let root = scaled.floor().to_integer().sqrt();
            let u = BigRational::new(root, scale);
            let x = two_cos_from_cot_half(&u);
            let a = if x < lo { &x } else { &lo };
            let b = if x > hi { &x } else { &hi };
            if self.sturm.root_free(a, b) {
                return SignatureValue::Value(self.value_at_cot(&u));
            }
        }
        log::warn!("no rational cotangent found near {angle}");
        SignatureValue::AtJump
    }

    /// Roots of `Δ` on the open upper unit semicircle, ordered by angle, with
    /// pairwise disjoint enclosures.
    pub fn jumps(&self) -> Vec<Jump> {
        self.jump_cells().0.into_iter().map(|c| c.jump).collect()
    }

    fn jump_cells(&self) -> (Vec<JumpCell>, Sturm) {
        let (factors, rem) = split_cyclotomic(&self.raw);
        let mut cells = Vec::new();
        for (d, _) in factors.iter().filter(|(d, _)| *d >= 3) {
            for k in 1..=d / 2 {
                if 2 * k < *d && k.gcd(d) == 1 {
                    let angle = Angle::new(2 * k, *d);
                    let (lo, hi) = angle.two_cos_bounds(32);
                    cells.push(JumpCell {
                        jump: Jump {
                            angle: Some(angle),
                            lo,
                            hi,
                        },
                        prec: 32,
                    });
                }
            }
        }
        let rd = rem.degree().unwrap_or(0);
        let centred = LaurentPoly::from_int_poly(&rem, -(rd as i64) / 2);
        let rem_sturm = if rd > 0 && centred.is_symmetric() {
            Sturm::new(&centred.trace_polynomial())
        } else {
            Sturm::new(&IntPoly::one())
        };
        let two = BigRational::from_integer(BigInt::from(2));
        let width = BigRational::new(BigInt::one(), BigInt::one() << 16);
        for (lo, hi) in rem_sturm.isolate(&-two.clone(), &two, &width) {
            cells.push(JumpCell {
                jump: Jump { angle: None, lo, hi },
                prec: 0,
            });
        }
        // Refine until the enclosures are pairwise disjoint, then order by
        // decreasing 2cos θ.
        loop {
            cells.sort_by(|a, b| b.jump.lo.cmp(&a.jump.lo));
            let clash = (1..cells.len()).find(|&i| cells[i].jump.hi >= cells[i - 1].jump.lo);
            match clash {
                None => break,
                Some(i) => {
                    cells[i].refine(&rem_sturm);
                    cells[i - 1].refine(&rem_sturm);
                }
            }
        }
        (cells, rem_sturm)
    }

    /// An angle strictly between two consecutive jumps (or the ends `0`, `π`).
    fn gap_sample(&self, left: Option<&mut JumpCell>, right: Option<&mut JumpCell>, rem: &Sturm) -> Option<Angle> {
        let la = match &left {
            None => Some((0u64, 1u64)),
            Some(c) => c.jump.angle.map(|a| (a.num(), a.den())),
        };
        let ra = match &right {
            None => Some((1u64, 1u64)),
            Some(c) => c.jump.angle.map(|a| (a.num(), a.den())),
        };
        if let (Some((p1, q1)), Some((p2, q2))) = (la, ra) {
            return Angle::try_new(p1 * q2 + p2 * q1, 2 * q1 * q2);
        }
        let (mut left, mut right) = (left, right);
        for _ in 0..4 {
            let t0 = left.as_ref().map_or(0.0, |c| c.jump.approx_angle());
            let t1 = right.as_ref().map_or(1.0, |c| c.jump.approx_angle());
            let target = (t0 + t1) / 2.0;
            for bits in 3..=52u32 {
                let den = 1u64 << bits;
                let num = (target * den as f64).round() as u64;
                let Some(angle) = Angle::try_new(num, den) else {
                    continue;
                };
                if angle.is_pi() {
                    continue;
                }
                let (lo, hi) = angle.two_cos_bounds(bits + 16);
                let below_left = left.as_ref().is_none_or(|c| hi < c.jump.lo);
                let above_right = right.as_ref().is_none_or(|c| lo > c.jump.hi);
                if below_left && above_right {
                    return Some(angle);
                }
            }
            for c in left.iter_mut().chain(right.iter_mut()) {
                for _ in 0..32 {
                    c.refine(rem);
                }
            }
        }
        log::warn!(
            "no sample angle found between jumps near {:?}",
            left.map(|c| c.jump.angle)
        );
        None
    }

    /// Values on the grid `kπ/(resolution + 1)` and at one angle inside each
    /// interval between consecutive jumps.
    pub fn profile(&self, resolution: u64) -> SignatureProfile {
        assert!(resolution >= 1);
        let (mut cells, rem) = self.jump_cells();
        let mut angles: BTreeSet<Angle> = (1..=resolution).map(|k| Angle::new(k, resolution + 1)).collect();
        for i in 0..=cells.len() {
            let (head, tail) = cells.split_at_mut(i);
            let left = head.last_mut();
            let right = tail.first_mut();
            if let Some(a) = self.gap_sample(left, right, &rem) {
                if !a.is_pi() {
                    angles.insert(a);
                }
            }
        }
        let angles: Vec<Angle> = angles.into_iter().collect();
        let samples = angles.par_iter().map(|&a| (a, self.at(a))).collect();
        SignatureProfile {
            samples,
            jumps: cells.into_iter().map(|c| c.jump).collect(),
        }
    }
}

/// Signature function at a single angle `θ ∈ (0, π]`.
pub fn tristram_levine(v: &SeifertMatrix, angle: Angle) -> SignatureValue {
    SignatureFunction::new(v).at(angle)
}

pub fn signature_profile(v: &SeifertMatrix, resolution: u64) -> SignatureProfile {
    SignatureFunction::new(v).profile(resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::torus_seifert;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_i64_terms(terms)
    }

    #[test]
    fn trivial_matrix() {
        let v = SeifertMatrix::empty();
        assert_eq!(alexander(&v), LaurentPoly::one());
        assert_eq!(signature(&v), 0);
        assert_eq!(determinant(&v), BigInt::one());
        assert_eq!(arf(&v), 0);
        assert!(fibered_consistent(&v));
        let prof = signature_profile(&v, 7);
        assert_eq!(prof.samples.len(), 7);
        assert!(prof.vanishes() && prof.jumps.is_empty());
    }

    #[test]
    fn trefoil() {
        let v = torus_seifert(2, 3).unwrap();
        assert_eq!(alexander(&v), lp(&[(-1, 1), (0, -1), (1, 1)]));
        assert_eq!(alexander(&v).to_string(), "t - 1 + t^-1");
        assert_eq!(signature(&v), -2);
        assert_eq!(determinant(&v), BigInt::from(3));
        assert_eq!(arf(&v), 1);
        assert!(fibered_consistent(&v));
        let f = SignatureFunction::new(&v);
        assert_eq!(f.at(Angle::new(1, 3)), SignatureValue::AtJump);
        assert_eq!(f.at(Angle::new(101, 300)), SignatureValue::Value(-2));
        assert_eq!(f.at(Angle::new(99, 300)), SignatureValue::Value(0));
        assert_eq!(f.at(Angle::new(1, 1)), SignatureValue::Value(-2));
        let jumps = f.jumps();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].angle, Some(Angle::new(1, 3)));
    }

    #[test]
    fn torus_2_5() {
        let v = torus_seifert(2, 5).unwrap();
        assert_eq!(alexander(&v), lp(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]));
        let p = signature_profile(&v, 9);
        let jumps: Vec<_> = p.jumps.iter().map(|j| j.angle.unwrap()).collect();
        assert_eq!(jumps, vec![Angle::new(1, 5), Angle::new(3, 5)]);
        let values: Vec<i64> = p.certified().map(|(_, v)| v).collect();
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(*values.last().unwrap(), -4);
    }

    #[test]
    fn irrational_jumps_are_isolated() {
        // 5_2 has Δ = 2t - 3 + 2t^-1 with roots at 2cos θ = 3/2.
        let v = SeifertMatrix::from_i64(&[&[-1, 0], &[-1, -2]]).unwrap();
        assert_eq!(alexander(&v), lp(&[(-1, 2), (0, -3), (1, 2)]));
        let f = SignatureFunction::new(&v);
        let jumps = f.jumps();
        assert_eq!(jumps.len(), 1);
        let j = &jumps[0];
        assert!(j.angle.is_none());
        let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert!(j.lo < three_halves && three_halves <= j.hi);
        let p = f.profile(3);
        let certified: Vec<i64> = p.certified().map(|(_, v)| v).collect();
        assert_eq!(certified.first(), Some(&0));
        assert_eq!(certified.last(), Some(&f.signature()));
        assert_eq!(f.signature(), -2);
    }
}
