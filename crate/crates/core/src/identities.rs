//! Exact identities checked prime by prime, and the decay check on the
//! residuals of the surface trace formula.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{keyf_diagnostic, KEYF_ALPHA_FLOOR};
use crate::family::{BasePoint, FamilyModel, FamilyShape};
use crate::fibercount::{self, smooth_fiber_count};
use crate::kodaira::FiberClassifier;
use crate::tate;
use crate::traces::{geometric_factor, Convention, Exact, PrimeTraceRecord, TraceEngine};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub identity: &'static str,
    pub p: u64,
    pub detail: String,
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::IdentityViolation {
            identity: v.identity.into(),
            p: v.p,
            detail: v.detail,
        }
    }
}

fn check(
    out: &mut Vec<Violation>,
    identity: &'static str,
    p: u64,
    ok: bool,
    detail: impl FnOnce() -> String,
) {
    if !ok {
        out.push(Violation {
            identity,
            p,
            detail: detail(),
        });
    }
}

/// Closed forms for `E x P^m`: `B = p (1 + 1/p + ... + 1/p^m)`,
/// `A = a_p(E) (1 + 1/p + ... + 1/p^m)` and `A* = A - a_p(E)`, with
/// `a_p(E)` from brute-force enumeration of the fiber.
pub fn constant_product(
    engine: &TraceEngine,
    records: &[PrimeTraceRecord],
) -> Result<Vec<Violation>> {
    let model = engine.model();
    let FamilyShape::ConstantProduct { base_dim, .. } = &model.shape else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for r in records {
        let red = engine.reduce(r.p)?;
        let fiber = red
            .elliptic_fiber(BasePoint::Finite(0))
            .expect("constant fiber");
        let ap = r.p as i128 + 1 - fibercount::enumerate_long(fiber.a, r.p) as i128;
        let g = geometric_factor(r.p, *base_dim);
        let b = g * r.p as i128;
        let a = g * ap;
        check(&mut out, "constant B", r.p, r.b_avg == b, || {
            format!("B = {} expected {b}", r.b_avg)
        });
        check(&mut out, "constant A", r.p, r.a == a, || {
            format!("A = {} expected {a}", r.a)
        });
        check(&mut out, "constant A*", r.p, r.a_star == a - ap, || {
            format!("A* = {} expected {}", r.a_star, a - ap)
        });
    }
    Ok(out)
}

/// `B = p + 1` on non-constant elliptic families in the Weierstrass
/// convention, and consistency of `A*` with `A`.
pub fn record_stream(model: &FamilyModel, records: &[PrimeTraceRecord]) -> Vec<Violation> {
    let mut out = Vec::new();
    let elliptic = matches!(model.shape, FamilyShape::Elliptic(_));
    for r in records {
        if elliptic && r.convention == Convention::WeierstrassFiber {
            let want = Exact::from_integer(r.p as i128 + 1);
            check(&mut out, "B = p + 1", r.p, r.b_avg == want, || {
                format!("B = {}", r.b_avg)
            });
        }
        if !matches!(model.shape, FamilyShape::ConstantProduct { .. }) {
            check(&mut out, "A* = A", r.p, r.a_star == r.a, || {
                format!("A = {} A* = {}", r.a, r.a_star)
            });
        }
        check(
            &mut out,
            "Hasse bound",
            r.p,
            r.hasse_violations == 0,
            || format!("{} smooth fibers out of range", r.hasse_violations),
        );
    }
    out
}

/// Rational vertical components counted two ways: from the component rules
/// of the classified places, and from the smooth-model fiber counts that
/// Tate's algorithm produces at each singular `F_p`-point.
pub fn component_identity(engine: &TraceEngine, primes: &[u64]) -> Result<Vec<Violation>> {
    let model = engine.model();
    if !matches!(model.shape, FamilyShape::Elliptic(_)) {
        return Ok(Vec::new());
    }
    let classifier = FiberClassifier::new(model)?;
    let mut out = Vec::new();
    for &p in primes {
        let red = engine.reduce(p)?;
        let rules = classifier.vertical_trace(&red)?.value;
        let mut counted = 0i64;
        for tr in fibercount::sweep(&red)?.singular {
            let Some(local) = tate::local_fiber(&red, tr.y)? else {
                continue;
            };
            let smooth = smooth_fiber_count(&tr, p, local.m_y);
            counted += (smooth - tr.n_points) as i64 / p as i64;
        }
        check(&mut out, "rational components", p, rules == counted, || {
            format!("rules give {rules}, smooth-model counts give {counted}")
        });
    }
    Ok(out)
}

/// Decay exponent of the surface trace residuals, flagged below the floor.
pub fn keyf_decay(records: &[PrimeTraceRecord]) -> Result<Vec<Violation>> {
    let report = keyf_diagnostic(records)?;
    let mut out = Vec::new();
    if let Some(alpha) = report.alpha {
        let p = records.last().map_or(0, |r| r.p);
        check(&mut out, "keyf decay", p, !report.flagged, || {
            format!("alpha = {alpha:.3} < {KEYF_ALPHA_FLOOR}")
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::kodaira::Mode;

    fn engine(m: FamilyModel) -> TraceEngine {
        TraceEngine::new(m, Convention::WeierstrassFiber, Mode::Strict).unwrap()
    }

    #[test]
    fn constant_products_satisfy_closed_forms() {
        for m in [
            corpus::constant_e1(),
            corpus::constant_e1_p2(),
            corpus::constant_e2(),
        ] {
            let e = engine(m);
            let recs = e.records_up_to(150, 1).unwrap();
            assert!(constant_product(&e, &recs).unwrap().is_empty());
            assert!(record_stream(e.model(), &recs).is_empty());
        }
    }

    #[test]
    fn corrupted_stream_is_caught() {
        let e = engine(corpus::legendre());
        let mut recs = e.records_up_to(60, 1).unwrap();
        assert!(record_stream(e.model(), &recs).is_empty());
        recs[3].b_avg += Exact::new(1, 7);
        let v = record_stream(e.model(), &recs);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].identity, v[0].p), ("B = p + 1", recs[3].p));
        let err: Error = v[0].clone().into();
        assert!(matches!(err, Error::IdentityViolation { .. }));
    }

    #[test]
    fn components_agree_on_small_primes() {
        for m in [
            corpus::x3_plus_t(),
            corpus::legendre(),
            corpus::x3_x_t2(),
            corpus::tate_normal_5(),
        ] {
            let e = engine(m);
            let primes = e.good_primes_up_to(60);
            assert!(
                component_identity(&e, &primes).unwrap().is_empty(),
                "{}",
                e.model().label
            );
        }
    }

    #[test]
    fn keyf_decay_on_elliptic_family() {
        let e = engine(corpus::legendre());
        let recs = e.records_up_to(300, 1).unwrap();
        assert!(keyf_decay(&recs).unwrap().is_empty());
    }
}
