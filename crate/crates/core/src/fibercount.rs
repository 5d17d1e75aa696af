//! Point counts and Frobenius traces of individual fibers, whole-prime
//! sweeps over the base, and an independent enumeration of the total space
//! used as a cross-check.

use crate::arith::{add_mod, modpoly, mul_mod, PrimeCtx};
use crate::error::{Error, Result};
use crate::family::{BasePoint, EllipticFiber, ReducedFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberTrace {
    pub y: BasePoint,
    /// Projective points of the Weierstrass or hyperelliptic fiber.
    pub n_points: u64,
    /// `p + 1 - n_points`.
    pub a: i64,
    pub singular: bool,
}

/// Running values of a polynomial at `x = 0, 1, 2, ...` by forward
/// differences: one modular addition per degree per step.
struct ForwardDiff {
    d: [u32; Self::MAX_LEN],
    n: usize,
    p: u32,
}

impl ForwardDiff {
    const MAX_LEN: usize = 16;

    fn new(f: &[u64], p: u64) -> Self {
        let f = &f[..f.iter().rposition(|&c| c % p != 0).map_or(0, |i| i + 1)];
        assert!(
            f.len() <= Self::MAX_LEN,
            "fiber polynomial of degree >= {}",
            Self::MAX_LEN
        );
        let n = f.len().max(1);
        let mut d = [0u32; Self::MAX_LEN];
        for (x, dx) in d.iter_mut().take(n).enumerate() {
            *dx = modpoly::eval(f, x as u64 % p, p) as u32;
        }
        let p32 = p as u32;
        for k in 1..n {
            for j in (k..n).rev() {
                d[j] = (d[j] + p32 - d[j - 1]) % p32;
            }
        }
        Self { d, n, p: p32 }
    }

    #[inline]
    fn value(&self) -> u64 {
        self.d[0] as u64
    }

    #[inline]
    fn step(&mut self) {
        for j in 0..self.n - 1 {
            let v = self.d[j] + self.d[j + 1];
            self.d[j] = v - if v >= self.p { self.p } else { 0 };
        }
    }
}

/// `sum_{x in F_p} chi(f(x))`.
pub fn character_sum(f: &[u64], ctx: &PrimeCtx) -> i64 {
    let p = ctx.p();
    let fd = ForwardDiff::new(f, p);
    match ctx.table() {
        Some(chi) => match fd.n {
            4 => table_sum::<4>(fd, chi),
            6 => table_sum::<6>(fd, chi),
            8 => table_sum::<8>(fd, chi),
            _ => table_sum_dyn(fd, chi),
        },
        None => {
            let mut fd = fd;
            let mut s = 0i64;
            for _ in 0..p {
                s += ctx.legendre_u(fd.value()) as i64;
                fd.step();
            }
            s
        }
    }
}

fn table_sum_dyn(mut fd: ForwardDiff, chi: &[i8]) -> i64 {
    let mut s = 0i64;
    for _ in 0..fd.p {
        s += chi[fd.value() as usize] as i64;
        fd.step();
    }
    s
}

/// Same walk with the difference vector length fixed at compile time.
fn table_sum<const N: usize>(fd: ForwardDiff, chi: &[i8]) -> i64 {
    let p = fd.p;
    let mut d = [0u32; N];
    d.copy_from_slice(&fd.d[..N]);
    let mut s = 0i64;
    for _ in 0..p {
        s += chi[d[0] as usize] as i64;
        for j in 0..N - 1 {
            let v = d[j] + d[j + 1];
            d[j] = v - if v >= p { p } else { 0 };
        }
    }
    s
}

/// `sum_x chi(x^3 + A x + B)` using a table of cubes. `chi3` is the
/// character table repeated three times, so `cube + A x + B` indexes it
/// without reduction.
fn cubic_sum(cubes: &[u32], chi3: &[i8], a: u64, b: u64, p: u64) -> i64 {
    let p = p as u32;
    let (a, b) = (a as u32, b as u32);
    let mut ax = 0u32;
    let mut s = 0i32;
    for &c in cubes {
        s += chi3[(c + ax + b) as usize] as i32;
        ax += a;
        ax -= if ax >= p { p } else { 0 };
    }
    s as i64
}

fn elliptic_trace(fiber: &EllipticFiber, ctx: &PrimeCtx, y: BasePoint) -> FiberTrace {
    let p = ctx.p();
    let (a, b) = fiber.short;
    let s = character_sum(&[b, a, 0, 1], ctx);
    let n_points = (p as i64 + 1 + s) as u64;
    FiberTrace {
        y,
        n_points,
        a: -s,
        singular: fiber.is_singular(),
    }
}

pub fn fiber_trace_elliptic(red: &ReducedFamily, y: BasePoint) -> Result<FiberTrace> {
    let fiber = red
        .elliptic_fiber(y)
        .ok_or_else(|| Error::NotElliptic("hyperelliptic family".into()))?;
    Ok(elliptic_trace(&fiber, red.ctx(), y))
}

fn hyperelliptic_trace(f: &[u64], ctx: &PrimeCtx, y: BasePoint) -> FiberTrace {
    let p = ctx.p();
    let s = character_sum(f, ctx);
    let f = modpoly::trim(f.to_vec());
    let df: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(i as u64 % p, c, p))
        .collect();
    let singular = modpoly::gcd(&f, &modpoly::trim(df), p).len() > 1;
    FiberTrace {
        y,
        n_points: (p as i64 + 1 + s) as u64,
        a: -s,
        singular,
    }
}

pub fn fiber_trace_hyperelliptic(red: &ReducedFamily, y: BasePoint) -> Result<FiberTrace> {
    let f = red
        .hyperelliptic_fiber(y)
        .ok_or_else(|| Error::InvalidFamily("not a hyperelliptic family".into()))?;
    Ok(hyperelliptic_trace(&f, red.ctx(), y))
}

pub fn fiber_trace(red: &ReducedFamily, y: BasePoint) -> Result<FiberTrace> {
    if red.genus() == 1 {
        fiber_trace_elliptic(red, y)
    } else {
        fiber_trace_hyperelliptic(red, y)
    }
}

/// Trace of Frobenius on the top compact-support cohomology of a fiber with
/// `m_y` rational components.
pub fn fiber_b_trace(p: u64, m_y: u32) -> u64 {
    p * m_y as u64
}

/// Points of the smooth-model fiber from the Weierstrass count: each extra
/// rational component is a line minus one point.
pub fn smooth_fiber_count(trace: &FiberTrace, p: u64, m_y: u32) -> u64 {
    trace.n_points + p * (m_y as u64 - 1)
}

/// Summary of all fibers over `P^1(F_p)` for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSweep {
    pub p: u64,
    /// `sum_y a_p(y)` over the base points.
    pub sum_a: i64,
    /// `sum_y n_points(y)`, the Weierstrass total space count.
    pub total_points: u64,
    /// The individual singular fibers.
    pub singular: Vec<FiberTrace>,
    /// Smooth fibers violating `a^2 <= 4 g^2 p`; zero unless something is
    /// broken.
    pub hasse_violations: u32,
    /// Largest `|a|` over smooth fibers.
    pub max_smooth_abs_a: i64,
}

impl FiberSweep {
    fn new(p: u64) -> Self {
        Self {
            p,
            sum_a: 0,
            total_points: 0,
            singular: Vec::new(),
            hasse_violations: 0,
            max_smooth_abs_a: 0,
        }
    }

    fn push(&mut self, tr: FiberTrace, genus: usize, weight: u64) {
        self.sum_a += tr.a * weight as i64;
        self.total_points += tr.n_points * weight;
        if tr.singular {
            self.singular.push(tr);
        } else {
            let g = genus as i64;
            if (tr.a * tr.a) as u128 > (4 * g * g) as u128 * self.p as u128 {
                self.hasse_violations += 1;
            }
            self.max_smooth_abs_a = self.max_smooth_abs_a.max(tr.a.abs());
        }
    }
}

/// Count every fiber over `P^1(F_p)` (for a constant product, every point of
/// `P^m(F_p)`).
pub fn sweep(red: &ReducedFamily) -> Result<FiberSweep> {
    let p = red.p();
    let ctx = red.ctx();
    let mut out = FiberSweep::new(p);
    if red.is_constant() {
        let tr = fiber_trace_elliptic(red, BasePoint::Finite(0))?;
        out.push(tr, 1, red.base_point_count());
        return Ok(out);
    }
    if red.genus() > 1 {
        for y in red.base_points() {
            out.push(fiber_trace_hyperelliptic(red, y)?, red.genus(), 1);
        }
        return Ok(out);
    }
    let chi = ctx
        .table()
        .expect("reduced families carry the residue table");
    let chi3 = chi.repeat(3);
    let cubes: Vec<u32> = (0..p)
        .map(|x| mul_mod(mul_mod(x, x, p), x, p) as u32)
        .collect();
    let singular_set = red.disc_roots();
    for y in red.base_points() {
        let fiber = red.elliptic_fiber(y).expect("elliptic");
        let (a, b) = fiber.short;
        let s = cubic_sum(&cubes, &chi3, a, b, p);
        out.push(
            FiberTrace {
                y,
                n_points: (p as i64 + 1 + s) as u64,
                a: -s,
                singular: singular_set.contains(&y),
            },
            1,
            1,
        );
    }
    Ok(out)
}

/// Points of `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6` by brute force
/// over `(x, y)`, plus the point at infinity.
pub fn enumerate_long(a: [u64; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a;
    let mut n = 1;
    for x in 0..p {
        let rhs = modpoly::eval(&[a6, a4, a2, 1], x, p);
        let lin = add_mod(mul_mod(a1, x, p), a3, p);
        for y in 0..p {
            if add_mod(mul_mod(y, y, p), mul_mod(lin, y, p), p) == rhs {
                n += 1;
            }
        }
    }
    n
}

fn enumerate_hyper(f: &[u64], p: u64) -> u64 {
    let mut squares = vec![0u64; p as usize];
    for y in 0..p {
        squares[mul_mod(y, y, p) as usize] += 1;
    }
    1 + (0..p)
        .map(|x| squares[modpoly::eval(f, x, p) as usize])
        .sum::<u64>()
}

/// Count the total space by direct enumeration of `(t, x, y)` on the
/// defining equation (long form for elliptic families), plus the fiber at
/// infinity, and compare with the sum of the fiber counts.
pub fn total_count(red: &ReducedFamily) -> Result<u64> {
    let p = red.p();
    let fiber_sum = sweep(red)?.total_points;
    let direct = if red.is_constant() {
        let e = red.elliptic_fiber(BasePoint::Finite(0)).expect("constant");
        enumerate_long(e.a, p) * projective_points(p, red.base_dim())
    } else {
        red.base_points()
            .map(|y| match red.elliptic_fiber(y) {
                Some(e) => enumerate_long(e.a, p),
                None => enumerate_hyper(&red.hyperelliptic_fiber(y).expect("fiber"), p),
            })
            .sum()
    };
    if fiber_sum != direct {
        return Err(Error::ConsistencyFailure {
            p,
            fiber_sum,
            direct,
        });
    }
    Ok(direct)
}

/// `#P^m(F_p)` by listing normalized coordinate vectors.
pub fn projective_points(p: u64, m: u32) -> u64 {
    // a normalized vector has its first nonzero entry equal to 1
    (0..=m).map(|lead| p.pow(m - lead)).sum()
}
