//! Word-sized prime field arithmetic and Chinese remaindering.
//!
//! Everything exact in this crate that involves large dense matrices goes
//! through here: a quantity is computed modulo enough 31-bit primes that the
//! product of the moduli exceeds twice an a-priori bound on its absolute
//! value, and is then lifted back to the integers in the symmetric range.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Upper end of the search for moduli; every prime used is below 2^31.
const PRIME_CEILING: u64 = (1 << 31) - 1;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; bases 2, 3, 5, 7 are exact below 3.2e9.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_table() -> &'static Vec<u64> {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(512);
        let mut n = PRIME_CEILING;
        while out.len() < 512 {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

/// The `i`-th modulus (descending from 2^31). Panics past a few thousand,
/// which would correspond to bounds of roughly 10^5 bits.
pub fn prime(i: usize) -> u64 {
    let table = prime_table();
    if i < table.len() {
        return table[i];
    }
    let mut n = *table.last().unwrap() - 2;
    let mut idx = table.len() - 1;
    loop {
        if is_prime(n) {
            idx += 1;
            if idx == i {
                return n;
            }
        }
        n -= 2;
    }
}

/// Number of 31-bit primes whose product exceeds `2 * bound`.
pub fn primes_needed(bound: &BigInt) -> usize {
    let bits = bound.bits() as usize + 2;
    bits.div_ceil(30).max(1)
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if a.is_multiple_of(m) {
        None
    } else {
        Some(pow_mod(a, m - 2, m))
    }
}

pub fn reduce(x: &BigInt, m: u64) -> u64 {
    if let Some(v) = x.to_i64() {
        return v.rem_euclid(m as i64) as u64;
    }
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

/// Incremental Garner-style reconstruction of one integer from residues.
#[derive(Clone, Debug)]
pub struct Crt {
    value: BigInt,
    modulus: BigInt,
}

impl Default for Crt {
    fn default() -> Self {
        Self::new()
    }
}

impl Crt {
    pub fn new() -> Self {
        Self {
            value: BigInt::zero(),
            modulus: BigInt::one(),
        }
    }

    pub fn push(&mut self, residue: u64, p: u64) {
        let current = reduce(&self.value, p);
        let m_mod = reduce(&self.modulus, p);
        let inv = inv_mod(m_mod, p).expect("moduli are distinct primes");
        let delta = (residue + p - current) % p;
        let k = mul_mod(delta, inv, p);
        self.value += &self.modulus * BigInt::from(k);
        self.modulus *= BigInt::from(p);
    }

    /// Representative in `(-M/2, M/2]`.
    pub fn symmetric(&self) -> BigInt {
        let half = &self.modulus >> 1;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

/// Reconstruct a vector of integers (e.g. polynomial coefficients) from
/// per-prime residue vectors. All residue vectors must have equal length.
pub fn crt_vectors(residues: &[(u64, Vec<u64>)]) -> Vec<BigInt> {
    let len = residues.first().map_or(0, |(_, v)| v.len());
    (0..len)
        .map(|i| {
            let mut crt = Crt::new();
            for (p, v) in residues {
                crt.push(v[i], *p);
            }
            crt.symmetric()
        })
        .collect()
}

/// Ceiling of the Euclidean norm of an integer vector.
pub fn norm_ceil<'a>(entries: impl Iterator<Item = &'a BigInt>) -> BigInt {
    let sq: BigInt = entries.map(|x| x * x).sum();
    let r = sq.sqrt();
    if &r * &r == sq {
        r
    } else {
        r + 1
    }
}
