//! Algebraic sliceness obstructions and metabolizer witnesses.
//!
//! A knot with metabolic Seifert form satisfies the Fox–Milnor condition,
//! has vanishing signature function away from roots of `Δ`, square
//! determinant and Arf invariant zero. The report below checks each of
//! these exactly and only calls a knot obstructed when one of them fails
//! definitively.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::invariants::{arf_from_alexander, determinant, SignatureFunction, SignatureProfile};
use crate::linalg::{exact_sqrt, IntMatrix};
use crate::poly::{cyclotomic, split_cyclotomic, IntPoly, LaurentPoly};
use crate::seifert::SeifertMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("basis has {found} vectors, expected {expected}")]
    WrongRank { expected: usize, found: usize },
    #[error("vector {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("basis vectors are linearly dependent")]
    Dependent,
}

/// Outcome of the Fox–Milnor test `Δ ≐ f(t) f(t^-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoxMilnor {
    /// `f` with `f(t) f(t^-1)` equal to `Δ` up to `±t^k`.
    Pass(LaurentPoly),
    /// A complete factorization into self-reciprocal irreducibles has a
    /// factor of odd multiplicity.
    Fail,
    Inconclusive,
}

impl FoxMilnor {
    pub fn is_pass(&self) -> bool {
        matches!(self, FoxMilnor::Pass(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FoxMilnor::Pass(f) => serde_json::json!({
                "status": "pass",
                "witness": f.to_string(),
                "witness_terms": f.to_json(),
            }),
            FoxMilnor::Fail => serde_json::json!({ "status": "fail" }),
            FoxMilnor::Inconclusive => serde_json::json!({ "status": "inconclusive" }),
        }
    }
}

/// Centre `f` when its span is even, otherwise start it at `t^0`; make
/// `f(1)` non-negative.
fn normalize_witness(f: &IntPoly) -> LaurentPoly {
    let lp = LaurentPoly::from_int_poly(f, 0);
    if lp.span().is_multiple_of(2) {
        return lp.symmetric_normalize();
    }
    let lo = lp.min_exp().unwrap_or(0);
    let lp = lp.shift(-lo);
    if lp.at_one().is_negative() {
        lp.neg()
    } else {
        lp
    }
}

/// `f(t) f(t^-1) ≐ p`.
pub fn verify_witness(f: &LaurentPoly, p: &LaurentPoly) -> bool {
    f.mul(&f.invert_variable()).equal_up_to_units(p)
}

fn square_root_up_to_sign(p: &IntPoly) -> Option<IntPoly> {
    p.sqrt_exact().or_else(|| p.neg().sqrt_exact())
}

fn is_unit(p: &IntPoly) -> bool {
    p.degree() == Some(0) && p.coeff(0).abs().is_one()
}

/// Irreducible over `Q`: a primitive quadratic with non-square
/// discriminant.
fn is_irreducible_quadratic(p: &IntPoly) -> bool {
    if p.degree() != Some(2) || !p.content().is_one() {
        return false;
    }
    let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &b * &b - BigInt::from(4) * a * c;
    exact_sqrt(&disc).is_none()
}

/// Largest constant or leading coefficient for which rational roots are
/// enumerated.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Splits a reciprocal polynomial as `g(t) g*(t) h(t)` where `g` collects
/// the linear factors `bt - a` with rational roots `|a/b| > 1` and `g*` is
/// the reciprocal of `g`. `None` when the coefficients are too large to
/// search.
fn split_rational_roots(p: &IntPoly) -> Option<(IntPoly, IntPoly)> {
    let mut g = IntPoly::one();
    let mut rest = p.clone();
    loop {
        if rest.degree().unwrap_or(0) < 2 {
            return Some((g, rest));
        }
        let c0 = rest.coeff(0).abs().to_u64().filter(|&x| x <= ROOT_SEARCH_LIMIT)?;
        let lead = rest
            .lead()
            .unwrap()
            .abs()
            .to_u64()
            .filter(|&x| x <= ROOT_SEARCH_LIMIT)?;
        let (na, nb) = (divisors(c0), divisors(lead));
        let root = na
            .iter()
            .flat_map(|&a| nb.iter().map(move |&b| (a, b)))
            .find_map(|(a, b)| {
                if a <= b || num_integer::gcd(a, b) != 1 {
                    return None;
                }
                [BigInt::from(a), -BigInt::from(a)].into_iter().find_map(|a| {
                    let x = BigRational::new(a.clone(), BigInt::from(b));
                    (rest.sign_at(&x) == std::cmp::Ordering::Equal).then(|| (a, BigInt::from(b)))
                })
            });
        let Some((a, b)) = root else {
            return Some((g, rest));
        };
        let lin = IntPoly::new(vec![-a.clone(), b.clone()]);
        let dual = IntPoly::new(vec![-b, a]);
        rest = rest.div_exact(&lin)?.div_exact(&dual)?;
        g = g.mul(&lin);
    }
}

/// Fox–Milnor test: a literal square first, then cyclotomic trial division
/// and rational roots.
pub fn fox_milnor(p: &LaurentPoly) -> FoxMilnor {
    let (raw, _) = p.to_int_poly();
    if raw.is_zero() {
        return FoxMilnor::Inconclusive;
    }
    if is_unit(&raw) {
        return FoxMilnor::Pass(LaurentPoly::one());
    }
    if let Some(f) = square_root_up_to_sign(&raw) {
        let w = normalize_witness(&f);
        if verify_witness(&w, p) {
            return FoxMilnor::Pass(w);
        }
    }
    let (factors, rem) = split_cyclotomic(&raw);
    let all_even = factors.iter().all(|(_, k)| k % 2 == 0);
    let half_cyclotomic = || {
        factors
            .iter()
            .fold(IntPoly::one(), |acc, (d, k)| acc.mul(&cyclotomic(*d).pow(k / 2)))
    };
    let (linear, rem) = split_rational_roots(&rem).unwrap_or_else(|| (IntPoly::one(), rem));
    if is_irreducible_quadratic(&rem) {
        // A self-reciprocal irreducible factor of multiplicity one.
        return FoxMilnor::Fail;
    }
    if is_unit(&rem) && !all_even {
        return FoxMilnor::Fail;
    }
    if all_even {
        let root = if is_unit(&rem) {
            Some(IntPoly::one())
        } else {
            square_root_up_to_sign(&rem)
        };
        if let Some(r) = root {
            let w = normalize_witness(&half_cyclotomic().mul(&linear).mul(&r));
            if verify_witness(&w, p) {
                return FoxMilnor::Pass(w);
            }
        }
    }
    FoxMilnor::Inconclusive
}

/// Basis of a candidate half-rank subspace on which the Seifert form should
/// vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetabolizerCandidate {
    basis: Vec<Vec<BigInt>>,
}

impl MetabolizerCandidate {
    /// Checks that all vectors have the same dimension and are linearly
    /// independent over `Q`.
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Self, ObstructionError> {
        if let Some(first) = basis.first() {
            let dim = first.len();
            if let Some((index, v)) = basis.iter().enumerate().find(|(_, v)| v.len() != dim) {
                return Err(ObstructionError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: v.len(),
                });
            }
            if IntMatrix::from_rows(basis.clone()).rank() != basis.len() {
                return Err(ObstructionError::Dependent);
            }
        }
        Ok(Self { basis })
    }

    pub fn from_i64(basis: &[&[i64]]) -> Result<Self, ObstructionError> {
        Self::new(
            basis
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// `{e_i + e_{n + perm[i]}}` in dimension `2n`: the graph of a
    /// permutation, a metabolizer for `W ⊕ W'` whenever `W'` permuted by
    /// `perm` is `-W`.
    pub fn graph(perm: &[usize]) -> Self {
        let n = perm.len();
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); 2 * n];
                v[i] = BigInt::one();
                v[n + perm[i]] = BigInt::one();
                v
            })
            .collect();
        Self { basis }
    }

    /// The diagonal `{e_i + e_{n+i}}`, a metabolizer for `W ⊕ -W`.
    pub fn diagonal(n: usize) -> Self {
        Self::graph(&(0..n).collect::<Vec<_>>())
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Rows replaced by `U · basis`; a basis of the same subspace when `U`
    /// is unimodular.
    pub fn transformed(&self, u: &IntMatrix) -> Result<Self, ObstructionError> {
        let b = IntMatrix::from_rows(self.basis.clone());
        Self::new(u.mul(&b).to_rows())
    }
}

/// `x^T V y = 0` for every ordered pair of basis vectors.
pub fn check_metabolizer(v: &SeifertMatrix, h: &MetabolizerCandidate) -> Result<bool, ObstructionError> {
    let n = v.size();
    if 2 * h.basis.len() != n {
        return Err(ObstructionError::WrongRank {
            expected: n / 2,
            found: h.basis.len(),
        });
    }
    if let Some((index, x)) = h.basis.iter().enumerate().find(|(_, x)| x.len() != n) {
        return Err(ObstructionError::DimensionMismatch {
            index,
            expected: n,
            found: x.len(),
        });
    }
    Ok(h.basis
        .iter()
        .all(|x| h.basis.iter().all(|y| v.matrix().bilinear(x, y).is_zero())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ObstructedFromSlice,
    ConsistentWithAlgebraicallySlice,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ObstructedFromSlice => "ObstructedFromSlice",
            Verdict::ConsistentWithAlgebraicallySlice => "ConsistentWithAlgebraicallySlice",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub alexander: LaurentPoly,
    pub fox_milnor: FoxMilnor,
    pub signature: i64,
    pub profile: SignatureProfile,
    /// `σ = 0` and every certified sample of the signature function is 0.
    pub signatures_vanish: bool,
    pub determinant: BigInt,
    pub determinant_root: Option<BigInt>,
    pub arf: u8,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn certified_samples(&self) -> usize {
        self.profile.certified_count()
    }

    /// The definitive failures behind an `ObstructedFromSlice` verdict.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.fox_milnor == FoxMilnor::Fail {
            out.push("fox_milnor");
        }
        if !self.signatures_vanish {
            out.push("signatures");
        }
        if self.determinant_root.is_none() {
            out.push("determinant");
        }
        if self.arf != 0 {
            out.push("arf");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "alexander": self.alexander.to_string(),
            "alexander_terms": self.alexander.to_json(),
            "fox_milnor": self.fox_milnor.to_json(),
            "signatures": {
                "signature": self.signature,
                "vanish": self.signatures_vanish,
                "certified_samples": self.certified_samples(),
                "samples": self.profile.samples_json(),
                "jumps": self.profile.jumps.iter().map(|j| j.to_json()).collect::<Vec<_>>(),
            },
            "determinant": {
                "value": self.determinant.to_string(),
                "square": self.determinant_root.is_some(),
                "root": self.determinant_root.as_ref().map(|r| r.to_string()),
            },
            "arf": { "value": self.arf, "zero": self.arf == 0 },
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Runs every obstruction on `v`; the signature function is sampled on a
/// grid of `resolution` angles plus one angle between each pair of jumps.
pub fn obstruction_report(v: &SeifertMatrix, resolution: u64) -> ObstructionReport {
    let sf = SignatureFunction::new(v);
    let alexander = sf.alexander().clone();
    let (fox_milnor, (profile, det)) = rayon::join(
        || fox_milnor(&alexander),
        || rayon::join(|| sf.profile(resolution), || determinant(v)),
    );
    let signature = sf.signature();
    let signatures_vanish = signature == 0 && profile.vanishes();
    let determinant_root = exact_sqrt(&det);
    let arf = arf_from_alexander(&alexander);
    let obstructed = fox_milnor == FoxMilnor::Fail || !signatures_vanish || determinant_root.is_none() || arf != 0;
    ObstructionReport {
        alexander,
        fox_milnor,
        signature,
        profile,
        signatures_vanish,
        determinant: det,
        determinant_root,
        arf,
        verdict: if obstructed {
            Verdict::ObstructedFromSlice
        } else {
            Verdict::ConsistentWithAlgebraicallySlice
        },
    }
}
