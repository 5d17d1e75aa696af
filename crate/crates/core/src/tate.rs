//! Tate's algorithm run locally at one `F_p`-point of the base, on the
//! reduced model expanded in the local parameter `u`.
//!
//! Coefficients are polynomials over `F_p` in `u` and coordinate changes are
//! carried out exactly, so no precision bookkeeping is needed. Only residue
//! characteristic `p >= 5` is handled: the model is first brought to
//! `y^2 = x^3 + a2 x^2 + a4 x + a6`, after which every step only translates
//! `x`. The result is independent of the place-level rules in
//! [`crate::kodaira`] and serves as a check on them.

use crate::arith::{self, add_mod, modpoly, mul_mod, sub_mod, PrimeCtx};
use crate::error::{Error, Result};
use crate::family::{BasePoint, ReducedFamily};
use crate::kodaira::KodairaType;

/// Kodaira type and number of `F_p`-rational components of one fiber of the
/// minimal regular model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalFiber {
    pub kind: KodairaType,
    pub m_y: u32,
}

type Poly = Vec<u64>;

fn val(f: &[u64]) -> Option<usize> {
    f.iter().position(|&c| c != 0)
}

fn coeff(f: &[u64], k: usize) -> u64 {
    f.get(k).copied().unwrap_or(0)
}

fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    modpoly::trim(
        (0..n)
            .map(|k| add_mod(coeff(a, k), coeff(b, k), p))
            .collect(),
    )
}

fn scale(a: &[u64], k: u64, p: u64) -> Poly {
    modpoly::trim(a.iter().map(|&c| mul_mod(c, k % p, p)).collect())
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    modpoly::mul(a, b, p)
}

/// Divide by `u^k`; the caller guarantees divisibility.
fn shift_down(a: &[u64], k: usize) -> Poly {
    a.iter().skip(k).copied().collect()
}

struct Model {
    p: u64,
    a2: Poly,
    a4: Poly,
    a6: Poly,
}

impl Model {
    fn from_long(a: &[Poly; 5], p: u64) -> Self {
        let [a1, a2, a3, a4, a6] = a;
        let half = arith::inv_mod(2, p);
        let quarter = mul_mod(half, half, p);
        // complete the square in y
        Self {
            p,
            a2: add(a2, &scale(&mul(a1, a1, p), quarter, p), p),
            a4: add(a4, &scale(&mul(a1, a3, p), half, p), p),
            a6: add(a6, &scale(&mul(a3, a3, p), quarter, p), p),
        }
    }

    /// `x -> x + r` for `r = c u^k`.
    fn translate(&mut self, c: u64, k: usize) {
        let p = self.p;
        if c == 0 {
            return;
        }
        let mut r = vec![0; k + 1];
        r[k] = c;
        let r2 = mul(&r, &r, p);
        let r3 = mul(&r2, &r, p);
        let a6 = add(
            &add(&self.a6, &mul(&self.a4, &r, p), p),
            &add(&mul(&self.a2, &r2, p), &r3, p),
            p,
        );
        let a4 = add(
            &add(&self.a4, &scale(&mul(&self.a2, &r, p), 2, p), p),
            &scale(&r2, 3, p),
            p,
        );
        let a2 = add(&self.a2, &scale(&r, 3, p), p);
        (self.a2, self.a4, self.a6) = (a2, a4, a6);
    }

    fn disc(&self) -> Poly {
        let p = self.p;
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let neg = |f: Poly| scale(&f, p - 1, p);
        let a2sq = mul(a2, a2, p);
        let terms = [
            neg(scale(&mul(&mul(&a2sq, a2, p), a6, p), 4, p)),
            mul(&a2sq, &mul(a4, a4, p), p),
            scale(&mul(&mul(a2, a4, p), a6, p), 18, p),
            neg(scale(&mul(&mul(a4, a4, p), a4, p), 4, p)),
            neg(scale(&mul(a6, a6, p), 27, p)),
        ];
        terms.iter().fold(Vec::new(), |acc, t| add(&acc, t, p))
    }

    /// `b8 = 4 a2 a6 - a4^2`
    fn b8(&self) -> Poly {
        let p = self.p;
        let lhs = scale(&mul(&self.a2, &self.a6, p), 4, p);
        let rhs = mul(&self.a4, &self.a4, p);
        add(&lhs, &scale(&rhs, p - 1, p), p)
    }
}

fn v_at_least(f: &[u64], k: usize) -> bool {
    val(f).is_none_or(|v| v >= k)
}

/// The repeated root of a monic cubic over `F_p` with vanishing
/// discriminant, and whether it is a triple root.
fn repeated_root(c: [u64; 3], p: u64) -> (u64, bool) {
    let [c0, c1, c2] = c;
    let f = vec![c0, c1, c2, 1];
    let df = modpoly::trim(vec![c1, mul_mod(2, c2, p), 3]);
    let g = modpoly::gcd(&f, &df, p);
    let inv = arith::inv_mod(*g.last().expect("nonzero gcd"), p);
    match g.len() {
        2 => (sub_mod(0, mul_mod(g[0], inv, p), p), false),
        // (x - r)^2 divides f and f', gcd has degree 2
        _ => {
            let r = sub_mod(0, mul_mod(c2, arith::inv_mod(3, p), p), p);
            (r, true)
        }
    }
}

/// Run Tate's algorithm on long Weierstrass coefficients over `F_p[u]`.
/// Returns `None` for a smooth fiber.
pub fn tate_local(a: &[Vec<u64>; 5], ctx: &PrimeCtx) -> Result<Option<LocalFiber>> {
    let p = ctx.p();
    if p < 5 {
        return Err(Error::ResidualCharacteristicTooSmall(p));
    }
    let mut m = Model::from_long(a, p);
    for _ in 0..64 {
        let disc = m.disc();
        let vd = val(&disc).ok_or_else(|| {
            Error::DegenerateFamily("fiber discriminant vanishes identically".into())
        })?;
        if vd == 0 {
            return Ok(None);
        }
        // move the singular point of the special fiber to x = 0
        let (x0, _) = repeated_root([coeff(&m.a6, 0), coeff(&m.a4, 0), coeff(&m.a2, 0)], p);
        m.translate(x0, 0);
        let a20 = coeff(&m.a2, 0);
        if a20 != 0 {
            let n = vd as u32;
            let m_y = if ctx.is_square(a20) {
                n
            } else if n.is_multiple_of(2) {
                2
            } else {
                1
            };
            return Ok(Some(LocalFiber {
                kind: KodairaType::I(n),
                m_y,
            }));
        }
        let fiber = |kind, m_y| Ok(Some(LocalFiber { kind, m_y }));
        if !v_at_least(&m.a6, 2) {
            return fiber(KodairaType::II, 1);
        }
        if !v_at_least(&m.b8(), 3) {
            return fiber(KodairaType::III, 2);
        }
        if !v_at_least(&m.a6, 3) {
            let m_y = if ctx.is_square(coeff(&m.a6, 2)) { 3 } else { 1 };
            return fiber(KodairaType::IV, m_y);
        }
        // P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3
        let cubic = [coeff(&m.a6, 3), coeff(&m.a4, 2), coeff(&m.a2, 1)];
        let pc = vec![cubic[0], cubic[1], cubic[2], 1];
        let dpc = modpoly::trim(vec![cubic[1], mul_mod(2, cubic[2], p), 3]);
        if modpoly::gcd(&pc, &dpc, p).len() == 1 {
            let roots = ctx.count_roots(&pc)? as u32;
            return fiber(KodairaType::IStar(0), 2 + roots);
        }
        let (t0, triple) = repeated_root(cubic, p);
        m.translate(t0, 1);
        if !triple {
            return istar_chain(&mut m, ctx).map(Some);
        }
        let c = coeff(&m.a6, 4);
        if c != 0 {
            let m_y = if ctx.is_square(c) { 7 } else { 3 };
            return fiber(KodairaType::IVStar, m_y);
        }
        if !v_at_least(&m.a4, 4) {
            return fiber(KodairaType::IIIStar, 8);
        }
        if !v_at_least(&m.a6, 6) {
            return fiber(KodairaType::IIStar, 9);
        }
        // not minimal
        m.a2 = shift_down(&m.a2, 2);
        m.a4 = shift_down(&m.a4, 4);
        m.a6 = shift_down(&m.a6, 6);
    }
    Err(Error::DegenerateFamily(
        "Tate's algorithm did not terminate".into(),
    ))
}

/// The `I_n*` subprocedure, entered with `P(T) = T^2 (T + a2,1)`.
fn istar_chain(m: &mut Model, ctx: &PrimeCtx) -> Result<LocalFiber> {
    let p = m.p;
    let a21 = coeff(&m.a2, 1);
    for n in 1..=512u32 {
        let j = n.div_ceil(2) as usize;
        let split = if n % 2 == 1 {
            // Y^2 - a6,(2j+2)
            let c = coeff(&m.a6, 2 * j + 2);
            (c != 0).then(|| ctx.is_square(c))
        } else {
            // a2,1 X^2 + a4,(j+2) X + a6,(2j+3)
            let b = coeff(&m.a4, j + 2);
            let c = coeff(&m.a6, 2 * j + 3);
            let d = sub_mod(mul_mod(b, b, p), mul_mod(4, mul_mod(a21, c, p), p), p);
            if d == 0 {
                let alpha = sub_mod(0, mul_mod(b, arith::inv_mod(mul_mod(2, a21, p), p), p), p);
                m.translate(alpha, j + 1);
            }
            (d != 0).then(|| ctx.is_square(d))
        };
        if let Some(split) = split {
            let m_y = if split { n + 5 } else { n + 3 };
            return Ok(LocalFiber {
                kind: KodairaType::IStar(n),
                m_y,
            });
        }
    }
    Err(Error::DegenerateFamily(
        "I_n* chain did not terminate".into(),
    ))
}

/// Tate's algorithm at a base point of a reduced elliptic family.
pub fn local_fiber(red: &ReducedFamily, y: BasePoint) -> Result<Option<LocalFiber>> {
    match red.local_weierstrass(y) {
        Some(a) => tate_local(&a, red.ctx()),
        None if red.is_constant() => Ok(None),
        None => Err(Error::UnimplementedType("genus >= 2 degenerations".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::family::{FamilyModel, Weierstrass};
    use crate::kodaira::FiberClassifier;
    use crate::parse::parse_t_poly;
    use crate::poly::IntPoly;

    fn short(label: &str, a4: &str, a6: &str) -> FamilyModel {
        let w = Weierstrass::short(parse_t_poly(a4).unwrap(), parse_t_poly(a6).unwrap());
        FamilyModel::elliptic(label, w).unwrap()
    }

    fn with_a2(label: &str, a2: &str, a4: &str, a6: &str) -> FamilyModel {
        let t = |s| parse_t_poly(s).unwrap();
        let w = Weierstrass::new(t("0"), t(a2), t("0"), t(a4), t(a6));
        FamilyModel::elliptic(label, w).unwrap()
    }

    /// Quadratic twist by `d` in short form.
    fn twist(m: &FamilyModel, d: i64) -> FamilyModel {
        let inv = m.invariants().unwrap();
        let k = |c: i64| IntPoly::constant(c);
        let w = Weierstrass::short(k(-27 * d * d) * &inv.c4, k(-54 * d * d * d) * &inv.c6);
        FamilyModel::elliptic(format!("{}_twist", m.label), w).unwrap()
    }

    /// Families covering every Kodaira type, with coefficients chosen so
    /// that the square classes vary with p.
    fn type_zoo() -> Vec<FamilyModel> {
        vec![
            short("II", "0", "2 t + t^2"),
            short("IV", "0", "3 t^2 + t^3"),
            short("IV_b", "0", "-7 t^2 + 5 t^3"),
            short("III", "2 t + t^2", "t^3"),
            short("I0*", "0", "t^3 + 2 t^4"),
            short("I0*_b", "-7 t^2", "6 t^3 + t^4"),
            short("I2*_c", "-3 t^2", "2 t^3 + t^5"),
            short("IV*", "0", "5 t^4 + t^5"),
            short("IV*_b", "0", "-3 t^4 + 2 t^5"),
            short("III*", "t^3 + t^4", "t^5"),
            short("II*", "0", "t^5 + 3 t^6"),
            with_a2("I1*", "t", "0", "t^4"),
            with_a2("I1*_b", "3 t", "0", "-5 t^4 + t^7"),
            with_a2("I2*", "t", "0", "t^5"),
            with_a2("I2*_b", "2 t", "3 t^3", "7 t^5"),
            with_a2("I3*", "5 t", "0", "-2 t^6"),
            with_a2("I4*", "t", "t^4", "3 t^7"),
            with_a2("I5*", "-t", "0", "7 t^8"),
            corpus::x3_plus_t(),
            corpus::legendre(),
            corpus::x3_x_t2(),
            corpus::tate_normal_5(),
            twist(&corpus::tate_normal_5(), 7),
        ]
    }

    #[test]
    fn zoo_types_are_as_designed() {
        for m in type_zoo() {
            let c = FiberClassifier::new(&m).unwrap();
            let name = m.label.split('_').next().unwrap();
            if ["x3", "legendre", "tate"].contains(&name) {
                continue;
            }
            assert!(
                c.places().iter().any(|kp| kp.kind.to_string() == name),
                "{}: {:?}",
                m.label,
                c.places()
                    .iter()
                    .map(|kp| kp.kind.to_string())
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn place_rules_agree_with_local_tate() {
        let mut seen = std::collections::BTreeSet::new();
        for m in type_zoo() {
            let c = FiberClassifier::new(&m).unwrap();
            let bad = m.bad_primes().unwrap();
            for p in bad.good_primes_up_to(200) {
                let red = m.reduce(p).unwrap();
                for f in c.singular_fibers(&red).unwrap() {
                    let local = local_fiber(&red, f.y).unwrap().expect("singular");
                    assert_eq!(local.kind, f.kind, "{} p={p} {}", m.label, f.y);
                    assert_eq!(local.m_y, f.m_y, "{} p={p} {} {}", m.label, f.y, f.kind);
                    seen.insert((f.kind.to_string(), f.m_y));
                }
            }
        }
        // both outcomes of every rationality test occur
        for (kind, counts) in [
            ("I2", [1, 2]),
            ("I5", [1, 5]),
            ("IV", [1, 3]),
            ("IV*", [3, 7]),
            ("I1*", [4, 6]),
            ("I2*", [5, 7]),
            ("I3*", [6, 8]),
            ("I4*", [7, 9]),
            ("I5*", [8, 10]),
        ] {
            for m_y in counts {
                if kind == "I2" && m_y == 1 {
                    continue;
                }
                assert!(
                    seen.contains(&(kind.to_string(), m_y)),
                    "{kind} never had {m_y}"
                );
            }
        }
        for roots in [0, 1, 3] {
            assert!(
                seen.contains(&("I0*".to_string(), 2 + roots)),
                "I0* with {roots} roots"
            );
        }
    }

    #[test]
    fn smooth_points_are_smooth() {
        let m = corpus::x3_x_t2();
        let red = m.reduce(13).unwrap();
        let roots = red.disc_roots().to_vec();
        for y in red.base_points() {
            assert_eq!(
                local_fiber(&red, y).unwrap().is_none(),
                !roots.contains(&y),
                "{y}"
            );
        }
    }

    #[test]
    fn non_minimal_model_is_reduced() {
        // y^2 = x^3 + t^6 (x^3 + 1 twisted by u^6 is smooth after scaling)
        let m = short("nonmin", "0", "t^6 + t^7");
        let red = m.reduce(7).unwrap();
        let f = local_fiber(&red, BasePoint::Finite(0)).unwrap();
        assert_eq!(f, None);
    }
}
