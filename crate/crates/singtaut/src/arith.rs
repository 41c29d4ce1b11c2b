//! Prime-field helpers shared by the classifiers and the cohomology engine.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn modp(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Binomial coefficients mod a small prime via Lucas' theorem.
#[derive(Debug, Clone)]
pub struct Binom {
    p: u64,
    table: Vec<Vec<u64>>,
}

impl Binom {
    pub fn new(p: u64) -> Self {
        let n = p as usize;
        let mut table = vec![vec![0u64; n]; n];
        for i in 0..n {
            table[i][0] = 1;
            for j in 1..=i {
                table[i][j] = (table[i - 1][j - 1] + if j < i { table[i - 1][j] } else { 0 }) % p;
            }
        }
        Binom { p, table }
    }

    pub fn get(&self, mut n: u64, mut k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut r = 1u64;
        while k > 0 || n > 0 {
            let (ni, ki) = ((n % self.p) as usize, (k % self.p) as usize);
            if ki > ni {
                return 0;
            }
            r = r * self.table[ni][ki] % self.p;
            n /= self.p;
            k /= self.p;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(require_prime(9).is_err());
    }

    #[test]
    fn lucas_matches_direct() {
        for p in [2u64, 3, 5, 7] {
            let bn = Binom::new(p);
            for n in 0..40u64 {
                let mut c = 1u128;
                for k in 0..=n {
                    assert_eq!(bn.get(n, k), (c % p as u128) as u64, "p={p} n={n} k={k}");
                    c = c * (n - k) as u128 / (k + 1) as u128;
                }
            }
        }
    }

    #[test]
    fn inverses() {
        for a in 1..13 {
            assert_eq!(a * inv_mod(a, 13) % 13, 1);
        }
    }
}
