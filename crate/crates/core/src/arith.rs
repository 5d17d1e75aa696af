//! Prime enumeration and arithmetic in `F_p` for word-sized odd primes.

use crate::error::{Error, Result};

/// All primes `<= bound` in increasing order (sieve of Eratosthenes).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (Fermat).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Reduce a signed machine integer into `[0, p)`.
#[inline]
pub fn reduce_i64(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

/// Context for one odd prime `p >= 5`, optionally carrying a table of the
/// quadratic character.
#[derive(Clone, Debug)]
pub struct PrimeCtx {
    p: u64,
    chi: Option<Vec<i8>>,
}

impl PrimeCtx {
    /// Context without a residue table; `legendre` falls back to Euler's
    /// criterion.
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self { p, chi: None })
    }

    /// Context with the full quadratic-character table, for sweeps that
    /// evaluate at least `p` characters.
    pub fn with_table(p: u64) -> Result<Self> {
        let mut ctx = Self::new(p)?;
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for a in 1..=(p - 1) / 2 {
            chi[mul_mod(a, a, p) as usize] = 1;
        }
        ctx.chi = Some(chi);
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The character table, if built.
    pub fn table(&self) -> Option<&[i8]> {
        self.chi.as_deref()
    }

    /// Quadratic character of `a` modulo `p`.
    pub fn legendre(&self, a: i64) -> i8 {
        let r = reduce_i64(a, self.p);
        self.legendre_u(r)
    }

    #[inline]
    pub fn legendre_u(&self, r: u64) -> i8 {
        let r = r % self.p;
        if let Some(chi) = &self.chi {
            return chi[r as usize];
        }
        euler_criterion(r, self.p)
    }

    pub fn is_square(&self, r: u64) -> bool {
        self.legendre_u(r) >= 0
    }

    /// Number of distinct roots in `F_p` of a polynomial given by reduced
    /// coefficients (little-endian).
    pub fn count_roots(&self, f: &[u64]) -> Result<usize> {
        count_roots(f, self.p)
    }
}

pub fn euler_criterion(r: u64, p: u64) -> i8 {
    match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Polynomials over `F_p` as little-endian residue vectors without trailing
/// zeros.
pub mod modpoly {
    use super::{add_mod, inv_mod, mul_mod, sub_mod};

    pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
        f.iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let dm = m.len() - 1;
        let inv = inv_mod(m[dm], p);
        let mut r = a.to_vec();
        while r.len() > dm {
            let k = r.len() - 1;
            let q = mul_mod(r[k], inv, p);
            if q != 0 {
                for (j, &c) in m.iter().enumerate() {
                    let idx = k - dm + j;
                    r[idx] = sub_mod(r[idx], mul_mod(q, c, p), p);
                }
            }
            r.pop();
            r = trim(r);
        }
        trim(r)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^e mod m`.
    pub fn x_pow_mod(mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut base = rem(&[0, 1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Coefficients of `f(u + y)` in powers of `u`: the local expansion of
    /// `f` at the point `y`.
    pub fn taylor_shift(f: &[u64], y: u64, p: u64) -> Vec<u64> {
        let mut c = f.to_vec();
        let n = c.len();
        // Repeated synthetic division by (t - y).
        for i in 0..n {
            for j in (i..n - 1).rev() {
                c[j] = add_mod(c[j], mul_mod(c[j + 1], y, p), p);
            }
        }
        c
    }
}

/// Number of distinct roots of `f` in `F_p`, computed as the degree of
/// `gcd(f, x^p - x)`.
pub fn count_roots(f: &[u64], p: u64) -> Result<usize> {
    let f = modpoly::trim(f.iter().map(|&c| c % p).collect());
    if f.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if f.len() == 1 {
        return Ok(0);
    }
    let xp = modpoly::x_pow_mod(p, &f, p);
    // x^p - x mod f
    let mut diff = xp;
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = sub_mod(diff[1], 1, p);
    let g = modpoly::gcd(&f, &modpoly::trim(diff), p);
    Ok(g.len().saturating_sub(1))
}
