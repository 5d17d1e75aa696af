//! Shioda-Tate bookkeeping for elliptic surfaces over `P^1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{FamilyModel, FamilyShape};
use crate::kodaira::{self, FiberClassifier, KodairaPlace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiodaLedger {
    /// Geometric `sum_v (m_v - 1)` over all singular places.
    pub sum_mv_minus_1: i64,
    /// Rank of the Galois-invariant part of the vertical module, when every
    /// reducible fiber sits over a rational place.
    pub sum_mv_minus_1_invariant: Option<i64>,
    pub rank_ns_base: i64,
    pub rank_ns_generic_fiber: i64,
    pub euler_total: i64,
    pub chi: i64,
    /// Geometric Mordell-Weil rank `8 - sum (m_v - 1)`, for rational
    /// elliptic surfaces only.
    pub mw_rank_oracle: Option<i64>,
}

/// Ledger from classified places. `invariant` carries the per-place
/// Galois-invariant component counts when known.
pub fn build_ledger(
    places: &[KodairaPlace],
    invariant: Option<Vec<Option<u32>>>,
) -> Result<ShiodaLedger> {
    let sum_mv_minus_1: i64 = places
        .iter()
        .map(|kp| kp.degree() as i64 * (kp.m_v() as i64 - 1))
        .sum();
    let euler_total: i64 = places
        .iter()
        .map(|kp| kp.degree() as i64 * kp.euler() as i64)
        .sum();
    if euler_total % 12 != 0 {
        return Err(Error::NonIntegralChi(euler_total));
    }
    let chi = euler_total / 12;
    let sum_mv_minus_1_invariant =
        invariant.and_then(|v| v.into_iter().map(|c| c.map(i64::from)).sum::<Option<i64>>());
    let mw_rank_oracle = (chi == 1).then_some(8 - sum_mv_minus_1);
    Ok(ShiodaLedger {
        sum_mv_minus_1,
        sum_mv_minus_1_invariant,
        rank_ns_base: 1,
        rank_ns_generic_fiber: 1,
        euler_total,
        chi,
        mw_rank_oracle,
    })
}

/// Ledger of an elliptic family, including the invariant refinement.
pub fn ledger_for(model: &FamilyModel) -> Result<ShiodaLedger> {
    let w = match &model.shape {
        FamilyShape::Elliptic(w) => w,
        FamilyShape::ConstantProduct { .. } => return build_ledger(&[], Some(Vec::new())),
        FamilyShape::Hyperelliptic { .. } => return Err(Error::NotElliptic(model.label.clone())),
    };
    let classifier = FiberClassifier::new(model)?;
    let places = classifier.places();
    let invariant = places
        .iter()
        .map(|kp| kodaira::invariant_components_over_q(w, kp))
        .collect();
    build_ledger(places, Some(invariant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_ledgers() {
        let l = ledger_for(&corpus::x3_plus_t()).unwrap();
        assert_eq!(
            (l.euler_total, l.sum_mv_minus_1, l.mw_rank_oracle),
            (12, 8, Some(0))
        );
        assert_eq!(l.sum_mv_minus_1_invariant, Some(8));
        let l = ledger_for(&corpus::legendre()).unwrap();
        assert_eq!(
            (l.euler_total, l.sum_mv_minus_1, l.mw_rank_oracle),
            (12, 8, Some(0))
        );
        assert_eq!(l.sum_mv_minus_1_invariant, Some(8));
        let l = ledger_for(&corpus::x3_x_t2()).unwrap();
        assert_eq!(
            (l.euler_total, l.sum_mv_minus_1, l.mw_rank_oracle),
            (12, 6, Some(2))
        );
        assert_eq!(l.sum_mv_minus_1_invariant, Some(6));
        let l = ledger_for(&corpus::tate_normal_5()).unwrap();
        assert_eq!(
            (l.euler_total, l.sum_mv_minus_1, l.mw_rank_oracle),
            (12, 8, Some(0))
        );
        assert_eq!(l.sum_mv_minus_1_invariant, Some(8));
        let l = ledger_for(&corpus::constant_e1()).unwrap();
        assert_eq!((l.euler_total, l.chi, l.mw_rank_oracle), (0, 0, None));
    }

    #[test]
    fn vertical_trace_bounded_by_ledger() {
        for m in [
            corpus::x3_plus_t(),
            corpus::legendre(),
            corpus::x3_x_t2(),
            corpus::tate_normal_5(),
        ] {
            let l = ledger_for(&m).unwrap();
            let c = FiberClassifier::new(&m).unwrap();
            let mut hit = false;
            for p in m.bad_primes().unwrap().good_primes_up_to(200) {
                let v = c.vertical_trace(&m.reduce(p).unwrap()).unwrap().value;
                assert!((0..=l.sum_mv_minus_1).contains(&v), "{} p={p}", m.label);
                hit |= v == l.sum_mv_minus_1;
            }
            assert!(hit, "{} never attains the geometric bound", m.label);
        }
    }

    #[test]
    fn misclassification_is_caught() {
        let mut places = FiberClassifier::new(&corpus::x3_plus_t())
            .unwrap()
            .places()
            .to_vec();
        places.pop();
        assert!(matches!(
            build_ledger(&places, None),
            Err(Error::NonIntegralChi(2))
        ));
    }
}
