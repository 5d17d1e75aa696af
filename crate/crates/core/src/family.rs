//! Fibration models over the projective line, their invariants, bad primes
//! and reductions modulo good primes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, modpoly, PrimeCtx};
use crate::error::{Error, Result};
use crate::kodaira;
use crate::poly::{resultant, resultant_x, BiPoly, IntPoly};

/// Point of the base `P^1(F_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BasePoint {
    Finite(u64),
    Infinity,
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Finite(y) => write!(f, "t={y}"),
            BasePoint::Infinity => write!(f, "t=inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    WeierstrassElliptic,
    Hyperelliptic,
    ConstantProduct,
}

/// Long Weierstrass coefficients `[a1, a2, a3, a4, a6]` as polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a: [IntPoly; 5],
}

/// Weight of each coefficient under `x -> x/s^2, y -> y/s^3`.
const A_WEIGHTS: [usize; 5] = [1, 2, 3, 4, 6];

/// `c4`, `c6` and the discriminant of a Weierstrass model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub c4: IntPoly,
    pub c6: IntPoly,
    pub disc: IntPoly,
}

impl Weierstrass {
    pub fn new(a1: IntPoly, a2: IntPoly, a3: IntPoly, a4: IntPoly, a6: IntPoly) -> Self {
        Self {
            a: [a1, a2, a3, a4, a6],
        }
    }

    /// `y^2 = x^3 + a4 x + a6`
    pub fn short(a4: IntPoly, a6: IntPoly) -> Self {
        Self::new(IntPoly::zero(), IntPoly::zero(), IntPoly::zero(), a4, a6)
    }

    pub fn invariants(&self) -> Invariants {
        let [a1, a2, a3, a4, a6] = &self.a;
        let c = |k: i64| IntPoly::constant(k);
        let b2 = a1 * a1 + c(4) * a2;
        let b4 = c(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + c(4) * a6;
        let b8 = a1 * a1 * a6 + c(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - c(24) * &b4;
        let c6 = c(36) * &b2 * &b4 - &b2 * &b2 * &b2 - c(216) * &b6;
        let disc =
            c(9) * &b2 * &b4 * &b6 - &b2 * &b2 * &b8 - c(8) * &b4 * &b4 * &b4 - c(27) * &b6 * &b6;
        Invariants { c4, c6, disc }
    }

    /// Smallest twist exponent making the chart at infinity integral.
    pub fn chart_twist(&self) -> usize {
        self.a
            .iter()
            .zip(A_WEIGHTS)
            .filter_map(|(c, w)| c.degree().map(|d| d.div_ceil(w)))
            .max()
            .unwrap_or(0)
    }

    /// The model in `s = 1/t` with `x -> x/s^(2e)`, `y -> y/s^(3e)`.
    pub fn at_infinity(&self) -> Weierstrass {
        let e = self.chart_twist();
        let mut a = self.a.clone();
        for (c, w) in a.iter_mut().zip(A_WEIGHTS) {
            *c = c.reversed(w * e);
        }
        Weierstrass { a }
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all(IntPoly::is_constant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyShape {
    Elliptic(Weierstrass),
    /// `y^2 = f(x; t)` with `deg_x f = 2g + 1`.
    Hyperelliptic {
        f: BiPoly,
        genus: usize,
    },
    /// `E x P^m` with a constant fiber `E`.
    ConstantProduct {
        fiber: Weierstrass,
        base_dim: u32,
    },
}

/// A fibration over `P^1` (or a constant product over `P^m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyModel {
    pub label: String,
    pub shape: FamilyShape,
    /// Declared Mordell-Weil rank of the constant part; zero for
    /// non-constant families.
    pub trace_rank_declared: u32,
}

impl FamilyModel {
    pub fn elliptic(label: impl Into<String>, w: Weierstrass) -> Result<Self> {
        let label = label.into();
        if w.invariants().disc.is_zero() {
            return Err(Error::DegenerateFamily(format!(
                "{label}: discriminant vanishes identically"
            )));
        }
        Ok(Self {
            label,
            shape: FamilyShape::Elliptic(w),
            trace_rank_declared: 0,
        })
    }

    pub fn hyperelliptic(label: impl Into<String>, f: BiPoly) -> Result<Self> {
        let label = label.into();
        let n = f
            .x_degree()
            .ok_or_else(|| Error::InvalidFamily(format!("{label}: zero polynomial")))?;
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidFamily(format!(
                "{label}: x-degree {n} must be odd and at least 3"
            )));
        }
        if !f.x_coeff(n).is_constant() {
            return Err(Error::InvalidFamily(format!(
                "{label}: leading x-coefficient must be a constant"
            )));
        }
        if resultant_x(&f, &f.dx()).is_zero() {
            return Err(Error::DegenerateFamily(format!(
                "{label}: generic fiber is singular"
            )));
        }
        Ok(Self {
            label,
            shape: FamilyShape::Hyperelliptic {
                f,
                genus: (n - 1) / 2,
            },
            trace_rank_declared: 0,
        })
    }

    pub fn constant_product(
        label: impl Into<String>,
        fiber: Weierstrass,
        base_dim: u32,
        declared_rank: u32,
    ) -> Result<Self> {
        let label = label.into();
        if !fiber.is_constant() {
            return Err(Error::InvalidFamily(format!(
                "{label}: constant product needs constant coefficients"
            )));
        }
        if base_dim == 0 {
            return Err(Error::InvalidFamily(format!("{label}: base dimension 0")));
        }
        if fiber.invariants().disc.is_zero() {
            return Err(Error::DegenerateFamily(format!("{label}: singular fiber")));
        }
        Ok(Self {
            label,
            shape: FamilyShape::ConstantProduct { fiber, base_dim },
            trace_rank_declared: declared_rank,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        match self.shape {
            FamilyShape::Elliptic(_) => FamilyKind::WeierstrassElliptic,
            FamilyShape::Hyperelliptic { .. } => FamilyKind::Hyperelliptic,
            FamilyShape::ConstantProduct { .. } => FamilyKind::ConstantProduct,
        }
    }

    /// Genus of the fibers.
    pub fn genus(&self) -> usize {
        match &self.shape {
            FamilyShape::Hyperelliptic { genus, .. } => *genus,
            _ => 1,
        }
    }

    /// Dimension of the base.
    pub fn base_dim(&self) -> u32 {
        match &self.shape {
            FamilyShape::ConstantProduct { base_dim, .. } => *base_dim,
            _ => 1,
        }
    }

    /// The Weierstrass equation, for elliptic and constant families.
    pub fn weierstrass(&self) -> Option<&Weierstrass> {
        match &self.shape {
            FamilyShape::Elliptic(w) => Some(w),
            FamilyShape::ConstantProduct { fiber, .. } => Some(fiber),
            FamilyShape::Hyperelliptic { .. } => None,
        }
    }

    pub fn invariants(&self) -> Result<Invariants> {
        self.weierstrass()
            .map(Weierstrass::invariants)
            .ok_or_else(|| Error::NotElliptic(self.label.clone()))
    }

    /// The same family written in the coordinate `s = 1/t`.
    pub fn infinity_chart(&self) -> FamilyModel {
        let shape = match &self.shape {
            FamilyShape::Elliptic(w) => FamilyShape::Elliptic(w.at_infinity()),
            FamilyShape::Hyperelliptic { f, genus } => FamilyShape::Hyperelliptic {
                f: hyperelliptic_at_infinity(f),
                genus: *genus,
            },
            FamilyShape::ConstantProduct { .. } => self.shape.clone(),
        };
        FamilyModel {
            label: format!("{}@inf", self.label),
            shape,
            trace_rank_declared: self.trace_rank_declared,
        }
    }

    /// Discriminant locus of the fibers as a polynomial in `t`, together
    /// with the same locus on the chart at infinity.
    pub fn singular_locus(&self) -> (IntPoly, IntPoly) {
        match &self.shape {
            FamilyShape::Hyperelliptic { f, .. } => {
                let inf = hyperelliptic_at_infinity(f);
                (resultant_x(f, &f.dx()), resultant_x(&inf, &inf.dx()))
            }
            _ => {
                let w = self.weierstrass().expect("elliptic");
                (w.invariants().disc, w.at_infinity().invariants().disc)
            }
        }
    }

    pub fn bad_primes(&self) -> Result<BadPrimeSet> {
        bad_primes(self)
    }

    pub fn reduce(&self, p: u64) -> Result<ReducedFamily> {
        let bad = self.bad_primes()?;
        ReducedFamily::new(self, &bad, p)
    }
}

/// Weight of `x^i` under `x -> x/s^2, y -> y/s^n` for `y^2 = f` of degree `n`.
fn hyper_weight(n: usize, i: usize) -> usize {
    2 * (n - i)
}

fn hyperelliptic_at_infinity(f: &BiPoly) -> BiPoly {
    let n = f.x_degree().expect("nonzero");
    let e = (0..n)
        .filter_map(|i| {
            f.x_coeff(i)
                .degree()
                .map(|d| d.div_ceil(hyper_weight(n, i)))
        })
        .max()
        .unwrap_or(0);
    BiPoly::from_x_coeffs(
        (0..=n)
            .map(|i| f.x_coeff(i).reversed(hyper_weight(n, i) * e))
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BadReason {
    SmallPrime,
    DividesDiscContent,
    DividesLeading,
    DiscriminantCollision,
    /// Divides a unit that the classification at a singular place relies on.
    TateUnit,
}

/// The finite set of excluded primes.
///
/// Primes are detected as divisors of a handful of witness integers. Small
/// factors are materialized eagerly; membership of larger primes is decided
/// by divisibility, so no witness ever needs a full factorization.
#[derive(Clone, Debug)]
pub struct BadPrimeSet {
    witnesses: Vec<(BigInt, BadReason)>,
    listed: BTreeMap<u64, BadReason>,
}

/// Primes up to this bound are listed explicitly.
const LISTED_BOUND: u64 = 1 << 16;

impl BadPrimeSet {
    fn from_witnesses(mut witnesses: Vec<(BigInt, BadReason)>) -> Self {
        for (w, _) in witnesses.iter_mut() {
            *w = w.abs();
        }
        witnesses.retain(|(w, _)| !w.is_one());
        let mut listed = BTreeMap::new();
        listed.insert(2, BadReason::SmallPrime);
        listed.insert(3, BadReason::SmallPrime);
        for p in arith::primes_up_to(LISTED_BOUND).into_iter().skip(2) {
            let big = BigInt::from(p);
            if let Some((_, r)) = witnesses.iter().find(|(w, _)| (w % &big).is_zero()) {
                listed.insert(p, *r);
            }
        }
        Self { witnesses, listed }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.reason(p).is_some()
    }

    pub fn reason(&self, p: u64) -> Option<BadReason> {
        if p <= LISTED_BOUND {
            return self.listed.get(&p).copied();
        }
        let big = BigInt::from(p);
        self.witnesses
            .iter()
            .find(|(w, _)| (w % &big).is_zero())
            .map(|(_, r)| *r)
    }

    /// Bad primes up to `bound`, ascending.
    pub fn primes_up_to(&self, bound: u64) -> Vec<(u64, BadReason)> {
        if bound <= LISTED_BOUND {
            return self.listed.range(..=bound).map(|(&p, &r)| (p, r)).collect();
        }
        arith::primes_up_to(bound)
            .into_iter()
            .filter_map(|p| self.reason(p).map(|r| (p, r)))
            .collect()
    }

    /// Good primes `5 <= p <= bound`, ascending.
    pub fn good_primes_up_to(&self, bound: u64) -> Vec<u64> {
        arith::primes_up_to(bound)
            .into_iter()
            .filter(|&p| !self.contains(p))
            .collect()
    }
}

/// Squarefree part of a polynomial, primitive with positive leading
/// coefficient.
pub(crate) fn radical(f: &IntPoly) -> IntPoly {
    let r = f.to_rat();
    let g = r.gcd(&r.derivative());
    r.div_rem(&g).0.to_primitive()
}

fn locus_witnesses(locus: &IntPoly, locus_inf: &IntPoly, out: &mut Vec<(BigInt, BadReason)>) {
    out.push((locus.content(), BadReason::DividesDiscContent));
    out.push((locus.leading(), BadReason::DividesLeading));
    if let Some(low) = locus_inf.low_order() {
        out.push((locus_inf.coeff(low), BadReason::DividesLeading));
    }
    if locus.degree().unwrap_or(0) >= 1 {
        let rad = radical(locus);
        out.push((rad.leading(), BadReason::DividesLeading));
        out.push((
            resultant(&rad, &rad.derivative()),
            BadReason::DiscriminantCollision,
        ));
    }
}

/// Computes the bad-prime set `R` of a family: 2 and 3, primes dividing the
/// content or leading coefficient of the discriminant, primes where distinct
/// singular places collide, and primes dividing units used by the
/// classification of singular fibers.
pub fn bad_primes(model: &FamilyModel) -> Result<BadPrimeSet> {
    let (locus, locus_inf) = model.singular_locus();
    if locus.is_zero() {
        return Err(Error::DegenerateFamily(format!(
            "{}: discriminant vanishes identically",
            model.label
        )));
    }
    let mut witnesses = Vec::new();
    locus_witnesses(&locus, &locus_inf, &mut witnesses);
    match &model.shape {
        FamilyShape::Elliptic(w) => {
            for u in kodaira::unit_witnesses(w)? {
                witnesses.push((u, BadReason::TateUnit));
            }
        }
        FamilyShape::Hyperelliptic { f, .. } => {
            let n = f.x_degree().expect("nonzero");
            witnesses.push((f.x_coeff(n).leading(), BadReason::DividesLeading));
            witnesses.push((BigInt::from(n), BadReason::DividesLeading));
        }
        FamilyShape::ConstantProduct { .. } => {}
    }
    Ok(BadPrimeSet::from_witnesses(witnesses))
}

/// One fiber of an elliptic family, reduced modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticFiber {
    /// Long Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
    pub a: [u64; 5],
    /// Isomorphic short form `y^2 = x^3 + a x + b` with `a = -27 c4`,
    /// `b = -54 c6`.
    pub short: (u64, u64),
    pub disc: u64,
}

impl EllipticFiber {
    pub fn is_singular(&self) -> bool {
        self.disc == 0
    }
}

#[derive(Clone, Debug)]
struct EllipticReduction {
    a: [Vec<u64>; 5],
    c4: Vec<u64>,
    c6: Vec<u64>,
    disc: Vec<u64>,
    chart: [Vec<u64>; 5],
    inf: EllipticFiber,
}

#[derive(Clone, Debug)]
enum Reduction {
    Elliptic(Box<EllipticReduction>),
    Hyperelliptic {
        f: Vec<Vec<u64>>,
        locus: Vec<u64>,
        f_inf: Vec<u64>,
        locus_inf: u64,
        genus: usize,
    },
    Constant {
        fiber: EllipticFiber,
        base_dim: u32,
    },
}

/// A family reduced modulo a good prime.
#[derive(Clone, Debug)]
pub struct ReducedFamily {
    ctx: PrimeCtx,
    red: Reduction,
    disc_roots: Vec<BasePoint>,
}

fn fiber_from(a: [u64; 5], p: u64) -> EllipticFiber {
    let to_poly = |k: u64| IntPoly::constant(k as i64);
    let w = Weierstrass { a: a.map(to_poly) };
    let inv = w.invariants();
    let ev = |f: &IntPoly| modpoly::eval(&f.reduce_mod(p), 0, p);
    let c4 = ev(&inv.c4);
    let c6 = ev(&inv.c6);
    EllipticFiber {
        a,
        short: (
            arith::mul_mod(p - 27 % p, c4, p),
            arith::mul_mod(p - 54 % p, c6, p),
        ),
        disc: ev(&inv.disc),
    }
}

impl ReducedFamily {
    pub fn new(model: &FamilyModel, bad: &BadPrimeSet, p: u64) -> Result<Self> {
        if bad.contains(p) {
            return Err(Error::BadPrime(p));
        }
        let ctx = PrimeCtx::with_table(p)?;
        let red = match &model.shape {
            FamilyShape::Elliptic(w) => {
                let inv = w.invariants();
                let chart = w.at_infinity();
                let inf_a = chart
                    .a
                    .clone()
                    .map(|c| modpoly::eval(&c.reduce_mod(p), 0, p));
                Reduction::Elliptic(Box::new(EllipticReduction {
                    a: w.a.clone().map(|c| c.reduce_mod(p)),
                    c4: inv.c4.reduce_mod(p),
                    c6: inv.c6.reduce_mod(p),
                    disc: inv.disc.reduce_mod(p),
                    chart: chart.a.clone().map(|c| c.reduce_mod(p)),
                    inf: fiber_from(inf_a, p),
                }))
            }
            FamilyShape::Hyperelliptic { f, genus } => {
                let (locus, locus_inf) = model.singular_locus();
                let chart = hyperelliptic_at_infinity(f);
                Reduction::Hyperelliptic {
                    f: f.x_coeffs().iter().map(|c| c.reduce_mod(p)).collect(),
                    locus: locus.reduce_mod(p),
                    f_inf: chart
                        .x_coeffs()
                        .iter()
                        .map(|c| modpoly::eval(&c.reduce_mod(p), 0, p))
                        .collect(),
                    locus_inf: modpoly::eval(&locus_inf.reduce_mod(p), 0, p),
                    genus: *genus,
                }
            }
            FamilyShape::ConstantProduct { fiber, base_dim } => {
                let a = fiber
                    .a
                    .clone()
                    .map(|c| modpoly::eval(&c.reduce_mod(p), 0, p));
                Reduction::Constant {
                    fiber: fiber_from(a, p),
                    base_dim: *base_dim,
                }
            }
        };
        let mut out = Self {
            ctx,
            red,
            disc_roots: Vec::new(),
        };
        out.disc_roots = out.base_points().filter(|&y| out.is_singular(y)).collect();
        Ok(out)
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn ctx(&self) -> &PrimeCtx {
        &self.ctx
    }

    pub fn genus(&self) -> usize {
        match &self.red {
            Reduction::Hyperelliptic { genus, .. } => *genus,
            _ => 1,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.red, Reduction::Constant { .. })
    }

    pub fn base_dim(&self) -> u32 {
        match &self.red {
            Reduction::Constant { base_dim, .. } => *base_dim,
            _ => 1,
        }
    }

    /// The points `F_p` then infinity; for a constant product this is the
    /// affine chart of one fiber only, see [`ReducedFamily::base_point_count`].
    pub fn base_points(&self) -> impl Iterator<Item = BasePoint> {
        (0..self.p())
            .map(BasePoint::Finite)
            .chain(std::iter::once(BasePoint::Infinity))
    }

    /// `#P^m(F_p)`.
    pub fn base_point_count(&self) -> u64 {
        let p = self.p();
        (0..=self.base_dim()).map(|k| p.pow(k)).sum()
    }

    /// Singular fibers over `F_p` and infinity.
    pub fn disc_roots(&self) -> &[BasePoint] {
        &self.disc_roots
    }

    fn is_singular(&self, y: BasePoint) -> bool {
        let p = self.p();
        match (&self.red, y) {
            (Reduction::Elliptic(e), BasePoint::Finite(t)) => modpoly::eval(&e.disc, t, p) == 0,
            (Reduction::Elliptic(e), BasePoint::Infinity) => e.inf.is_singular(),
            (Reduction::Hyperelliptic { locus, .. }, BasePoint::Finite(t)) => {
                modpoly::eval(locus, t, p) == 0
            }
            (Reduction::Hyperelliptic { locus_inf, .. }, BasePoint::Infinity) => *locus_inf == 0,
            (Reduction::Constant { .. }, _) => false,
        }
    }

    /// The elliptic fiber over `y`; `None` for hyperelliptic families.
    pub fn elliptic_fiber(&self, y: BasePoint) -> Option<EllipticFiber> {
        let p = self.p();
        match (&self.red, y) {
            (Reduction::Elliptic(e), BasePoint::Finite(t)) => {
                let ev = |f: &Vec<u64>| modpoly::eval(f, t, p);
                Some(EllipticFiber {
                    a: [
                        ev(&e.a[0]),
                        ev(&e.a[1]),
                        ev(&e.a[2]),
                        ev(&e.a[3]),
                        ev(&e.a[4]),
                    ],
                    short: (
                        arith::mul_mod(p - 27 % p, ev(&e.c4), p),
                        arith::mul_mod(p - 54 % p, ev(&e.c6), p),
                    ),
                    disc: ev(&e.disc),
                })
            }
            (Reduction::Elliptic(e), BasePoint::Infinity) => Some(e.inf),
            (Reduction::Constant { fiber, .. }, _) => Some(*fiber),
            (Reduction::Hyperelliptic { .. }, _) => None,
        }
    }

    /// `f(x; y)` reduced mod `p` (little-endian in `x`); `None` for elliptic
    /// families.
    pub fn hyperelliptic_fiber(&self, y: BasePoint) -> Option<Vec<u64>> {
        let p = self.p();
        match (&self.red, y) {
            (Reduction::Hyperelliptic { f, .. }, BasePoint::Finite(t)) => {
                Some(f.iter().map(|c| modpoly::eval(c, t, p)).collect())
            }
            (Reduction::Hyperelliptic { f_inf, .. }, BasePoint::Infinity) => Some(f_inf.clone()),
            _ => None,
        }
    }

    /// Long Weierstrass coefficients expanded at `y` in the local parameter
    /// (`t - y`, or `s = 1/t` at infinity). Elliptic families only.
    pub fn local_weierstrass(&self, y: BasePoint) -> Option<[Vec<u64>; 5]> {
        let p = self.p();
        match (&self.red, y) {
            (Reduction::Elliptic(e), BasePoint::Finite(t)) => Some(
                e.a.clone()
                    .map(|c| modpoly::trim(modpoly::taylor_shift(&c, t, p))),
            ),
            (Reduction::Elliptic(e), BasePoint::Infinity) => Some(e.chart.clone()),
            _ => None,
        }
    }

    /// Reduced `c4`, `c6`, discriminant polynomials (elliptic families only).
    pub(crate) fn elliptic_invariants(&self) -> Option<(&[u64], &[u64], &[u64])> {
        match &self.red {
            Reduction::Elliptic(e) => Some((&e.c4, &e.c6, &e.disc)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::parse::parse_t_poly;

    fn t(s: &str) -> IntPoly {
        parse_t_poly(s).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        let inv = corpus::x3_plus_t().invariants().unwrap();
        assert_eq!(inv.disc, t("-432 t^2"));
        let inv = corpus::x3_x_t2().invariants().unwrap();
        assert_eq!(inv.disc, t("-16 (4 + 27 t^4)"));
        let inv = corpus::constant_e1().invariants().unwrap();
        assert_eq!(inv.disc, IntPoly::constant(-432));
        let inv = corpus::legendre().invariants().unwrap();
        assert_eq!(inv.disc, t("16 t^2 (t - 1)^2"));
    }

    #[test]
    fn hyperelliptic_has_no_weierstrass_invariants() {
        assert!(matches!(
            corpus::hyper_g2().invariants(),
            Err(Error::NotElliptic(_))
        ));
    }

    #[test]
    fn invariant_relation_holds() {
        for m in corpus::all() {
            let Ok(inv) = m.invariants() else { continue };
            let lhs = inv.disc.scale(&BigInt::from(1728));
            let rhs = &(&(&inv.c4 * &inv.c4) * &inv.c4) - &(&inv.c6 * &inv.c6);
            assert_eq!(lhs, rhs, "{}", m.label);
        }
    }

    #[test]
    fn infinity_chart_examples() {
        let chart = corpus::x3_plus_t().infinity_chart();
        assert_eq!(chart.weierstrass().unwrap().a[4], t("t^5"));
        let chart = corpus::x3_x_t2().infinity_chart();
        let w = chart.weierstrass().unwrap();
        assert_eq!(w.a[3], t("t^4"));
        assert_eq!(w.a[4], t("t^4"));
        let c = corpus::constant_e1();
        assert_eq!(c.infinity_chart().shape, c.shape);
    }

    #[test]
    fn double_chart_keeps_j_invariant() {
        for m in corpus::all() {
            let Ok(inv) = m.invariants() else { continue };
            let twice = m.infinity_chart().infinity_chart().invariants().unwrap();
            // c4^3 / disc equal as rational functions
            let lhs = &(&(&inv.c4 * &inv.c4) * &inv.c4) * &twice.disc;
            let rhs = &(&(&twice.c4 * &twice.c4) * &twice.c4) * &inv.disc;
            assert_eq!(lhs, rhs, "{}", m.label);
        }
    }

    #[test]
    fn bad_prime_examples() {
        let r = corpus::x3_plus_t().bad_primes().unwrap();
        assert_eq!(
            r.primes_up_to(1000).iter().map(|x| x.0).collect::<Vec<_>>(),
            vec![2, 3]
        );
        let r = corpus::legendre().bad_primes().unwrap();
        assert!(r.contains(2) && r.contains(3));
        assert!(!r.contains(5) && !r.contains(7));
        for m in corpus::all() {
            let r = m.bad_primes().unwrap();
            assert!(r.contains(2) && r.contains(3), "{}", m.label);
        }
    }

    #[test]
    fn reduce_examples() {
        let red = corpus::x3_plus_t().reduce(7).unwrap();
        assert_eq!(
            red.disc_roots(),
            &[BasePoint::Finite(0), BasePoint::Infinity]
        );
        let red = corpus::constant_e1().reduce(7).unwrap();
        assert!(red.disc_roots().is_empty());
        let red = corpus::legendre().reduce(5).unwrap();
        assert_eq!(
            red.disc_roots(),
            &[
                BasePoint::Finite(0),
                BasePoint::Finite(1),
                BasePoint::Infinity
            ]
        );
        assert!(matches!(
            corpus::legendre().reduce(3),
            Err(Error::BadPrime(3))
        ));
    }

    #[test]
    fn degenerate_family_rejected() {
        let w = Weierstrass::short(IntPoly::zero(), IntPoly::zero());
        assert!(matches!(
            FamilyModel::elliptic("cusp", w),
            Err(Error::DegenerateFamily(_))
        ));
    }
}
