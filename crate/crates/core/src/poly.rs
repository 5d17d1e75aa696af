//! Integer polynomials in the base parameter `t` and in `(x, t)`.
//!
//! Coefficients are arbitrary precision. Only the operations needed by the
//! fibration code are provided: ring arithmetic, derivatives, exact division
//! and gcd over the rationals, resultants, and reduction modulo a prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Univariate polynomial with integer coefficients, stored little-endian.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * t^k`
    pub fn monomial<T: Into<BigInt>>(c: T, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Largest `k` with `t^k` dividing the polynomial (`None` for zero).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = IntPoly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue fits in u64"))
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// `s^w * f(1/s)` for `w >= deg f`: the polynomial in the chart at infinity.
    pub fn reversed(&self, w: usize) -> Self {
        let d = self.degree().map_or(0, |d| d);
        assert!(self.is_zero() || d <= w, "weight {w} below degree {d}");
        let mut coeffs = vec![BigInt::zero(); w + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[w - k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "t")
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], var: &str) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        let show_mag = k == 0 || !mag.is_one();
        if show_mag {
            write!(f, "{mag}")?;
        }
        match k {
            0 => {}
            1 => write!(f, "{}{var}", if show_mag { "*" } else { "" })?,
            _ => write!(f, "{}{var}^{k}", if show_mag { "*" } else { "" })?,
        }
    }
    Ok(())
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<IntPoly> for &IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Polynomial with rational coefficients. Used for gcd computations over
/// the function field when splitting the discriminant into places.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => Self::from_coeffs(self.coeffs.iter().map(|c| c / lc).collect()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return (RatPoly::from_coeffs(Vec::new()), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for k in (dd..n).rev() {
            let q = &rem[k] / &lc;
            if !q.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    rem[k - dd + j] -= &q * c;
                }
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (RatPoly::from_coeffs(quot), RatPoly::from_coeffs(rem))
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::from_coeffs(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    /// Primitive integer polynomial with positive leading coefficient and the
    /// same roots.
    pub fn to_primitive(&self) -> IntPoly {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let p = IntPoly::from_coeffs(ints);
        let mut content = p.content();
        if content.is_zero() {
            return p;
        }
        if p.leading().is_negative() {
            content = -content;
        }
        IntPoly::from_coeffs(p.coeffs.iter().map(|c| c / &content).collect())
    }
}

/// Resultant of two integer polynomials via fraction-free elimination on the
/// Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // Rows hold coefficients from the leading one down.
    for r in 0..n {
        for (k, c) in f.coeffs().iter().enumerate() {
            mat[r][r + m - k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g.coeffs().iter().enumerate() {
            mat[n + r][r + n - k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Polynomial in `x` whose coefficients are polynomials in `t`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    by_x: Vec<IntPoly>,
}

impl BiPoly {
    pub fn from_x_coeffs(mut by_x: Vec<IntPoly>) -> Self {
        while by_x.last().is_some_and(IntPoly::is_zero) {
            by_x.pop();
        }
        Self { by_x }
    }

    pub fn x_coeffs(&self) -> &[IntPoly] {
        &self.by_x
    }

    /// Coefficient of `x^i` as a polynomial in `t`.
    pub fn x_coeff(&self, i: usize) -> IntPoly {
        self.by_x.get(i).cloned().unwrap_or_default()
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.by_x.len().checked_sub(1)
    }

    pub fn t_degree(&self) -> usize {
        self.by_x
            .iter()
            .filter_map(IntPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.by_x.is_empty()
    }

    /// Specialize `t` to an integer, giving a polynomial in `x`.
    pub fn eval_t(&self, t: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.by_x.iter().map(|c| c.eval(t)).collect())
    }

    /// Derivative in `x`.
    pub fn dx(&self) -> BiPoly {
        BiPoly::from_x_coeffs(
            self.by_x
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&BigInt::from(k)))
                .collect(),
        )
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.by_x.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.by_x.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let xs = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if c == &IntPoly::constant(1) && i > 0 {
                write!(f, "{xs}")?;
            } else if i == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{xs}")?;
            }
        }
        Ok(())
    }
}

/// Resultant in `x` of two bivariate polynomials, as a polynomial in `t`.
///
/// Computed by evaluating at enough integer values of `t` and interpolating,
/// which keeps the determinant arithmetic in plain integers.
pub fn resultant_x(f: &BiPoly, g: &BiPoly) -> IntPoly {
    let (Some(m), Some(n)) = (f.x_degree(), g.x_degree()) else {
        return IntPoly::zero();
    };
    // Sylvester determinant is homogeneous of degree n in f's coefficients
    // and m in g's.
    let bound = n * f.t_degree() + m * g.t_degree();
    let lead_f = f.x_coeff(m);
    let lead_g = g.x_coeff(n);
    // Sample at consecutive integers beyond every root of the leading
    // coefficients, so the Sylvester matrix keeps its shape.
    let t0 = lead_f
        .coeffs()
        .iter()
        .chain(lead_g.coeffs())
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + 1;
    let ys: Vec<BigInt> = (0..=bound)
        .map(|k| {
            let tt = &t0 + BigInt::from(k);
            resultant(&f.eval_t(&tt), &g.eval_t(&tt))
        })
        .collect();
    interpolate_from(&t0, &ys)
}

/// The polynomial of degree `< ys.len()` taking the value `ys[k]` at
/// `t0 + k`, by Newton forward differences. The result must be integral.
fn interpolate_from(t0: &BigInt, ys: &[BigInt]) -> IntPoly {
    let n = ys.len();
    let mut diffs = ys.to_vec();
    let mut lead = Vec::with_capacity(n);
    for k in 0..n {
        lead.push(diffs[0].clone());
        for j in 0..n - k - 1 {
            diffs[j] = &diffs[j + 1] - &diffs[j];
        }
    }
    // sum_k lead[k] * u(u-1)...(u-k+1) / k!, scaled by (n-1)!
    let top: BigInt = (1..n).map(BigInt::from).product();
    let mut num = IntPoly::zero();
    let mut falling = IntPoly::constant(1);
    let mut fact = BigInt::one();
    for (k, d) in lead.iter().enumerate() {
        if k > 0 {
            fact *= k;
            falling = &falling
                * &IntPoly::from_coeffs(vec![BigInt::from(-(k as i64 - 1)), BigInt::one()]);
        }
        num = num + falling.scale(&(d * (&top / &fact)));
    }
    let in_u: Vec<BigInt> = num
        .coeffs()
        .iter()
        .map(|c| {
            assert!(
                (c % &top).is_zero(),
                "interpolated resultant is not integral"
            );
            c / &top
        })
        .collect();
    // substitute u = t - t0
    let shift = IntPoly::from_coeffs(vec![-t0.clone(), BigInt::one()]);
    in_u.iter().rev().fold(IntPoly::zero(), |acc, c| {
        &acc * &shift + IntPoly::constant(c.clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 1, -1, 1]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(format!("{}", p(&[4, 0, 0, 0, 27])), "27*t^4 + 4");
        assert_eq!(format!("{}", p(&[0, -1, 0, 1])), "t^3 - t");
    }

    #[test]
    fn reversed_gives_chart_at_infinity() {
        // a6 = t with weight 6 becomes s^5
        assert_eq!(p(&[0, 1]).reversed(6), IntPoly::monomial(1, 5));
        // t^2 with weight 6 becomes s^4
        assert_eq!(p(&[0, 0, 1]).reversed(6), IntPoly::monomial(1, 4));
    }

    #[test]
    fn rational_gcd() {
        // (t-1)^2 (t+2) and (t-1)(t+3)
        let a = (p(&[-1, 1]).pow(2) * p(&[2, 1])).to_rat();
        let b = (p(&[-1, 1]) * p(&[3, 1])).to_rat();
        assert_eq!(a.gcd(&b).to_primitive(), p(&[-1, 1]));
    }

    #[test]
    fn resultant_small_cases() {
        // Res(t - 2, t - 5) = 2 - 5 up to sign convention: det [[1,-2],[1,-5]] = -3
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-5, 1])), BigInt::from(-3));
        // common root
        assert!(resultant(&p(&[-1, 0, 1]), &p(&[-1, 1])).is_zero());
        // disc-like quantity of t^2 + 1: Res(f, f') = 4
        let f = p(&[1, 0, 1]);
        assert_eq!(resultant(&f, &f.derivative()), BigInt::from(4));
    }

    #[test]
    fn resultant_in_x_matches_specialization() {
        // f = x^3 + t x + 1; Res_x(f, f_x) = 4 t^3 + 27 up to sign
        let f = BiPoly::from_x_coeffs(vec![p(&[1]), p(&[0, 1]), IntPoly::zero(), p(&[1])]);
        let r = resultant_x(&f, &f.dx());
        for t in -3i64..4 {
            let tt = BigInt::from(t);
            let ft = f.eval_t(&tt);
            assert_eq!(r.eval(&tt), resultant(&ft, &ft.derivative()));
        }
        assert_eq!(r.degree(), Some(3));
    }
}
