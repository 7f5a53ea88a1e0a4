//! Rational enclosures of `π` and `2 cos(pπ/q)`.
//!
//! Every bound is rigorous: series are truncated with explicit remainder
//! terms and the results are rounded outward to dyadic rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

pub fn floor_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.floor().to_integer(), pow2(bits))
}

pub fn ceil_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.ceil().to_integer(), pow2(bits))
}

/// Bounds on `atan(1/x)` from consecutive partial sums of the alternating
/// series.
fn atan_inv_bounds(x: i64, prec: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), pow2(prec + 8));
    let x2 = BigInt::from(x * x);
    let mut xpow = BigInt::from(x);
    let mut sum = BigRational::zero();
    let mut k: i64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &xpow * BigInt::from(2 * k + 1));
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        if term < eps {
            return if sum < next { (sum, next) } else { (next, sum) };
        }
        sum = next;
        xpow *= &x2;
        k += 1;
    }
}

/// `π ∈ [lo, hi]` with `hi - lo < 2^-prec`, via Machin's formula.
pub fn pi_bounds(prec: u32) -> (BigRational, BigRational) {
    let (a_lo, a_hi) = atan_inv_bounds(5, prec + 6);
    let (b_lo, b_hi) = atan_inv_bounds(239, prec + 6);
    let sixteen = rat(16, 1);
    let four = rat(4, 1);
    let lo = &sixteen * a_lo - &four * b_hi;
    let hi = &sixteen * a_hi - &four * b_lo;
    (floor_dyadic(&lo, prec + 4), ceil_dyadic(&hi, prec + 4))
}

/// `cos y ∈ [lo, hi]` for rational `y >= 0` by Taylor series with the
/// Lagrange remainder `y^(2K+2)/(2K+2)!`.
fn cos_bounds_at(y: &BigRational, prec: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), pow2(prec + 4));
    let y2 = y * y;
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k: i64 = 0;
    loop {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let next = &term * &y2 / BigRational::from_integer(BigInt::from((2 * k + 1) * (2 * k + 2)));
        // `next` bounds the remainder after the `k`-th term.
        if next < eps && k > 0 {
            let lo = &sum - &next;
            let hi = &sum + &next;
            return (floor_dyadic(&lo, prec + 2), ceil_dyadic(&hi, prec + 2));
        }
        term = next;
        k += 1;
    }
}

/// Enclosure of `2 cos(π p / q)` for `0 < p/q <= 1`, width about `2^-prec`.
pub fn two_cos_pi_fraction(p: u64, q: u64, prec: u32) -> (BigRational, BigRational) {
    assert!(q > 0 && p <= q);
    let frac = BigRational::new(BigInt::from(p), BigInt::from(q));
    if p == q {
        return (rat(-2, 1), rat(-2, 1));
    }
    if 2 * p == q {
        return (BigRational::zero(), BigRational::zero());
    }
    let (pi_lo, pi_hi) = pi_bounds(prec + 8);
    let th_lo = floor_dyadic(&(&frac * &pi_lo), prec + 8);
    let th_hi = ceil_dyadic(&(&frac * &pi_hi), prec + 8);
    let (_, upper) = cos_bounds_at(&th_lo, prec + 4);
    let lower = if th_hi >= pi_lo {
        rat(-1, 1)
    } else {
        cos_bounds_at(&th_hi, prec + 4).0
    };
    let one = BigRational::one();
    let lower = if lower < -&one { -one.clone() } else { lower };
    let upper = if upper > one { one } else { upper };
    let two = rat(2, 1);
    (&two * lower, &two * upper)
}

/// `θ/π ∈ (0, 1]` as a reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    /// Panics unless `0 < num/den <= 1`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0 && num > 0 && num <= den, "angle must lie in (0, π]");
        let g = num.gcd(&den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn try_new(num: u64, den: u64) -> Option<Self> {
        (den > 0 && num > 0 && num <= den).then(|| Self::new(num, den))
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_pi(&self) -> bool {
        self.num == self.den
    }

    /// Order of `e^{iθ}` as a root of unity.
    pub fn root_order(&self) -> u64 {
        if self.num % 2 == 1 {
            2 * self.den
        } else {
            self.den
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn midpoint(&self, other: &Angle) -> Angle {
        Angle::new(self.num * other.den + other.num * self.den, 2 * self.den * other.den)
    }

    pub fn two_cos_bounds(&self, prec: u32) -> (BigRational, BigRational) {
        two_cos_pi_fraction(self.num, self.den, prec)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        ((self.num as u128) * (other.den as u128)).cmp(&((other.num as u128) * (self.den as u128)))
    }
}

impl std::fmt::Display for Angle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}π/{}", self.num, self.den)
    }
}

/// `x = 2(u^2 - 1)/(u^2 + 1)`: the value of `2 cos θ` when
/// `u = cot(θ/2)`.
pub fn two_cos_from_cot_half(u: &BigRational) -> BigRational {
    let u2 = u * u;
    let one = BigRational::one();
    rat(2, 1) * (&u2 - &one) / (&u2 + &one)
}

/// `u^2 = (2 + x)/(2 - x)`, the inverse of [`two_cos_from_cot_half`].
pub fn cot_half_squared(x: &BigRational) -> BigRational {
    let two = rat(2, 1);
    (&two + x) / (&two - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure() {
        let (lo, hi) = pi_bounds(100);
        let reference: BigRational = BigRational::new(
            "314159265358979323846264338327950288419716939937510".parse().unwrap(),
            BigInt::from(10).pow(50),
        );
        let slack = BigRational::new(BigInt::one(), BigInt::from(10).pow(49));
        assert!(lo <= &reference + &slack && &reference - &slack <= hi);
        assert!(&hi - &lo < BigRational::new(BigInt::one(), pow2(100)));
    }

    #[test]
    fn cos_enclosures_contain_known_values() {
        // 2cos(π/3) = 1, 2cos(2π/3) = -1, 2cos(π/6) = sqrt 3
        let (lo, hi) = two_cos_pi_fraction(1, 3, 80);
        assert!(lo <= rat(1, 1) && rat(1, 1) <= hi);
        assert!(&hi - &lo < rat(1, 1 << 40));
        let (lo, hi) = two_cos_pi_fraction(2, 3, 80);
        assert!(lo <= rat(-1, 1) && rat(-1, 1) <= hi);
        let (lo, hi) = two_cos_pi_fraction(1, 6, 80);
        assert!(&lo * &lo <= rat(3, 1) && rat(3, 1) <= &hi * &hi);
        let (lo, hi) = two_cos_pi_fraction(999, 1000, 80);
        assert!(lo >= rat(-2, 1) && hi < rat(-1999, 1000));
    }

    #[test]
    fn angle_arithmetic() {
        let a = Angle::new(2, 6);
        assert_eq!((a.num(), a.den()), (1, 3));
        assert_eq!(a.root_order(), 6);
        assert_eq!(Angle::new(2, 5).root_order(), 5);
        assert!(Angle::new(1, 3) < Angle::new(2, 5));
        assert_eq!(Angle::new(1, 3).midpoint(&Angle::new(1, 2)), Angle::new(5, 12));
        assert!(Angle::try_new(0, 3).is_none());
        assert!(Angle::try_new(4, 3).is_none());
    }

    #[test]
    fn cot_half_round_trip() {
        let u = rat(3, 7);
        let x = two_cos_from_cot_half(&u);
        assert_eq!(cot_half_squared(&x), &u * &u);
    }
}
