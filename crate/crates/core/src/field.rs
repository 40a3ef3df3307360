//! Prime moduli and scalar arithmetic in F_p.

use crate::error::Error;

/// A prime p with 2 <= p < 2^31, validated at construction.
///
/// All matrix and subspace values carry the modulus they live over;
/// mixing moduli is a usage error reported by the operations involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u32) -> Result<Self, Error> {
        if p < 2 || p >= (1 << 31) || !is_prime_u32(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    /// F_2, the default field.
    pub fn two() -> Self {
        PrimeModulus(2)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduce an arbitrary signed integer into [0, p).
    pub fn reduce(self, x: i64) -> u32 {
        let p = self.0 as i64;
        (x.rem_euclid(p)) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        let p = self.0 as u64;
        ((a as u64 + p - b as u64 % p) % p) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Multiplicative inverse of a nonzero residue, by the extended
    /// Euclidean algorithm.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "inverse of zero in F_{}", self.0);
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.reduce(t0)
    }
}

/// Deterministic trial-division primality test, sufficient for p < 2^31.
fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 || n as u64 % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}
