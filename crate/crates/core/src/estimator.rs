//! Rank estimators built from a stream of per-prime records.
//!
//! All floating sums run over primes in ascending order with compensated
//! summation, so replaying the same records reproduces the same bits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::traces::{Exact, PrimeTraceRecord};

pub const DEFAULT_S_GRID: [f64; 6] = [1.02, 1.05, 1.1, 1.2, 1.35, 1.5];

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn to_f64(r: &Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Check that `records` is ascending and contains every prime of `good`
/// up to `bound`.
pub fn check_coverage(records: &[PrimeTraceRecord], good: &[u64], bound: u64) -> Result<()> {
    if records.windows(2).any(|w| w[0].p >= w[1].p) {
        return Err(Error::InvalidFamily(
            "records are not in ascending prime order".into(),
        ));
    }
    let mut it = records.iter().map(|r| r.p).peekable();
    for &p in good.iter().take_while(|&&p| p <= bound) {
        while it.next_if(|&q| q < p).is_some() {}
        if it.next_if_eq(&p).is_none() {
            return Err(Error::MissingPrimes(p));
        }
    }
    if good.iter().all(|&p| p > bound) {
        return Err(Error::MissingPrimes(bound));
    }
    Ok(())
}

/// `(1/T) sum_{p <= T} -A*_p log p` at each checkpoint `T`.
pub fn tauberian_estimate(
    records: &[PrimeTraceRecord],
    good: &[u64],
    checkpoints: &[u64],
) -> Result<Vec<f64>> {
    let Some(&last) = checkpoints.last() else {
        return Ok(Vec::new());
    };
    check_coverage(records, good, last)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = CompensatedSum::default();
    let mut it = records.iter().peekable();
    for &t in checkpoints {
        while let Some(r) = it.next_if(|r| r.p <= t) {
            acc.add(-to_f64(&r.a_star) * (r.p as f64).ln());
        }
        out.push(acc.value() / t as f64);
    }
    Ok(out)
}

/// How the pole at `s = 1` is represented in a residue fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FitBasis {
    /// `F(s) ~ r P_T(s) + c` with `P_T(s) = sum_{p <= T} log p p^-s` over
    /// the same primes as the data, so truncation affects both sides alike.
    ReferencePrimeSum,
    /// `F(s) ~ r / (s - 1) + c`.
    Pole,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidueFit {
    pub r: f64,
    pub c: f64,
    pub residual_norm: f64,
}

/// Least-squares residue of `F(s) = sum_p coeff_p log p p^-s` over `s_grid`.
pub fn residue_fit(terms: &[(u64, f64)], s_grid: &[f64], basis: FitBasis) -> Result<ResidueFit> {
    if s_grid.len() < 4 {
        return Err(Error::IllConditionedFit(format!(
            "{} grid points, need at least 4",
            s_grid.len()
        )));
    }
    if let Some(s) = s_grid.iter().find(|&&s| !(s > 1.0 && s <= 1.5)) {
        return Err(Error::IllConditionedFit(format!(
            "grid point {s} outside (1, 1.5]"
        )));
    }
    let dirichlet = |s: f64, weight: &dyn Fn(f64) -> f64| {
        let mut acc = CompensatedSum::default();
        for &(p, c) in terms {
            let lp = (p as f64).ln();
            acc.add(weight(c) * lp * (-s * lp).exp());
        }
        acc.value()
    };
    let rows: Vec<(f64, f64)> = s_grid
        .iter()
        .map(|&s| {
            let x = match basis {
                FitBasis::ReferencePrimeSum => dirichlet(s, &|_| 1.0),
                FitBasis::Pole => 1.0 / (s - 1.0),
            };
            (x, dirichlet(s, &|c| c))
        })
        .collect();
    // normal equations for y = r x + c
    let n = rows.len() as f64;
    let (sx, sy) = rows
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = rows.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = rows.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let scale = rows.iter().map(|&(x, _)| x * x).sum::<f64>();
    if sxx.is_nan() || sxx <= 1e-12 * scale {
        return Err(Error::IllConditionedFit(
            "pole basis is constant over the grid".into(),
        ));
    }
    let r = sxy / sxx;
    let c = my - r * mx;
    let residual_norm = rows
        .iter()
        .map(|&(x, y)| (y - r * x - c).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ResidueFit {
        r,
        c,
        residual_norm,
    })
}

/// Residue of `sum -A*_p log p p^-s`.
pub fn dirichlet_residue(
    records: &[PrimeTraceRecord],
    s_grid: &[f64],
    basis: FitBasis,
) -> Result<ResidueFit> {
    let terms: Vec<_> = records.iter().map(|r| (r.p, -to_f64(&r.a_star))).collect();
    residue_fit(&terms, s_grid, basis)
}

/// Residue of `sum B_p log p p^-(s+1)`.
pub fn b_residue(
    records: &[PrimeTraceRecord],
    s_grid: &[f64],
    basis: FitBasis,
) -> Result<ResidueFit> {
    let terms: Vec<_> = records
        .iter()
        .map(|r| (r.p, to_f64(&r.b_avg) / r.p as f64))
        .collect();
    residue_fit(&terms, s_grid, basis)
}

/// Residue of `sum -A*_p log p p^-s + sum B_p log p p^-(s+1)`.
pub fn combined_man_series(
    records: &[PrimeTraceRecord],
    s_grid: &[f64],
    basis: FitBasis,
) -> Result<ResidueFit> {
    let terms: Vec<_> = records
        .iter()
        .map(|r| (r.p, -to_f64(&r.a_star) + to_f64(&r.b_avg) / r.p as f64))
        .collect();
    residue_fit(&terms, s_grid, basis)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NagaoSeries {
    pub checkpoints: Vec<u64>,
    pub s_tauberian: Vec<f64>,
    pub s_dirichlet: Vec<f64>,
    pub s_combined: Vec<f64>,
    pub rank_estimate: i64,
    /// `|S - rank_estimate|` at the last checkpoint.
    pub deviation: f64,
}

/// All three estimators at every checkpoint.
pub fn nagao_series(
    records: &[PrimeTraceRecord],
    good: &[u64],
    checkpoints: &[u64],
    s_grid: &[f64],
    basis: FitBasis,
) -> Result<NagaoSeries> {
    let s_tauberian = tauberian_estimate(records, good, checkpoints)?;
    let mut s_dirichlet = Vec::new();
    let mut s_combined = Vec::new();
    for &t in checkpoints {
        let upto = records.partition_point(|r| r.p <= t);
        s_dirichlet.push(dirichlet_residue(&records[..upto], s_grid, basis)?.r);
        s_combined.push(combined_man_series(&records[..upto], s_grid, basis)?.r);
    }
    let last = *s_tauberian.last().ok_or(Error::MissingPrimes(0))?;
    let rank_estimate = last.round() as i64;
    Ok(NagaoSeries {
        checkpoints: checkpoints.to_vec(),
        s_tauberian,
        s_dirichlet,
        s_combined,
        rank_estimate,
        deviation: (last - rank_estimate as f64).abs(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeyfReport {
    pub residuals: Vec<(u64, f64)>,
    /// Fitted `alpha` in `|D_p| ~ C p^-alpha`; `None` when fewer than two
    /// residuals are nonzero.
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub flagged: bool,
}

pub const KEYF_ALPHA_FLOOR: f64 = 0.4;

/// `D_p = -A*_p + B_p/p - b_p(X)/p + b_p(P^1)/p + vertical` per prime with
/// a log-log fit of its decay.
pub fn keyf_diagnostic(records: &[PrimeTraceRecord]) -> Result<KeyfReport> {
    let mut residuals = Vec::with_capacity(records.len());
    for r in records {
        let b = r.b_surface.ok_or(Error::UnavailableConvention)?;
        let p = r.p as i128;
        let d = -r.a_star + r.b_avg / p - Exact::new(b as i128, p) + 1 + r.vertical as i128;
        residuals.push((r.p, to_f64(&d)));
    }
    let pts: Vec<(f64, f64)> = residuals
        .iter()
        .filter(|(_, d)| *d != 0.0)
        .map(|&(p, d)| ((p as f64).ln(), d.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return Ok(KeyfReport {
            residuals,
            alpha: None,
            c: None,
            flagged: false,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::IllConditionedFit(
            "keyf residuals at a single prime".into(),
        ));
    }
    let slope = sxy / sxx;
    let alpha = -slope;
    Ok(KeyfReport {
        residuals,
        alpha: Some(alpha),
        c: Some((my - slope * mx).exp()),
        flagged: alpha < KEYF_ALPHA_FLOOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use crate::traces::Convention;

    fn synthetic(p: u64, a_star: Exact, b_avg: Exact) -> PrimeTraceRecord {
        PrimeTraceRecord {
            p,
            a: a_star,
            a_star,
            b_avg,
            a_prime: a_star,
            vertical: 0,
            vertical_approximate: false,
            b_surface: Some(2 * p as i64),
            convention: Convention::WeierstrassFiber,
            max_smooth_abs_a: 0,
            hasse_violations: 0,
        }
    }

    fn stream(bound: u64, f: impl Fn(u64) -> (Exact, Exact)) -> (Vec<PrimeTraceRecord>, Vec<u64>) {
        let good: Vec<u64> = primes_up_to(bound)
            .into_iter()
            .filter(|&p| p >= 5)
            .collect();
        let recs = good
            .iter()
            .map(|&p| {
                let (a, b) = f(p);
                synthetic(p, a, b)
            })
            .collect();
        (recs, good)
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn zero_stream() {
        let (recs, good) = stream(2000, |_| (Exact::from_integer(0), Exact::from_integer(0)));
        assert_eq!(
            tauberian_estimate(&recs, &good, &[1000, 2000]).unwrap(),
            vec![0.0, 0.0]
        );
        for basis in [FitBasis::ReferencePrimeSum, FitBasis::Pole] {
            let fit = dirichlet_residue(&recs, &DEFAULT_S_GRID, basis).unwrap();
            assert_eq!((fit.r, fit.c), (0.0, 0.0));
        }
    }

    #[test]
    fn unit_stream_has_residue_one() {
        // -A* = 1: the prime sum itself
        let (recs, good) = stream(100_000, |_| {
            (Exact::from_integer(-1), Exact::from_integer(0))
        });
        let fit = dirichlet_residue(&recs, &DEFAULT_S_GRID, FitBasis::ReferencePrimeSum).unwrap();
        assert!((fit.r - 1.0).abs() < 1e-9, "{fit:?}");
        // Mertens: (1/T) sum log p -> 1
        let s = tauberian_estimate(&recs, &good, &[100_000]).unwrap()[0];
        assert!((s - 1.0).abs() < 0.02, "{s}");
        // the literal pole basis is biased low by truncation at this T
        let pole = dirichlet_residue(&recs, &DEFAULT_S_GRID, FitBasis::Pole).unwrap();
        assert!(pole.r < 0.5, "{pole:?}");
    }

    #[test]
    fn missing_primes_detected() {
        let (mut recs, good) = stream(500, |_| (Exact::from_integer(0), Exact::from_integer(0)));
        recs.remove(10);
        assert!(matches!(
            tauberian_estimate(&recs, &good, &[500]),
            Err(Error::MissingPrimes(p)) if p == good[10]
        ));
        // checkpoints below the gap are fine
        assert!(tauberian_estimate(&recs, &good, &[good[9]]).is_ok());
        assert!(matches!(
            tauberian_estimate(&[], &[], &[4]),
            Err(Error::MissingPrimes(_))
        ));
    }

    #[test]
    fn grid_validation() {
        let (recs, _) = stream(100, |_| (Exact::from_integer(1), Exact::from_integer(0)));
        for grid in [
            &[1.1, 1.2, 1.3][..],
            &[1.0, 1.1, 1.2, 1.3],
            &[1.1, 1.1, 1.1, 1.1],
        ] {
            assert!(matches!(
                dirichlet_residue(&recs, grid, FitBasis::Pole),
                Err(Error::IllConditionedFit(_))
            ));
        }
    }

    #[test]
    fn b_series_residue_one_for_p_plus_one() {
        let (recs, _) = stream(10_000, |p| {
            (Exact::from_integer(0), Exact::from_integer(p as i128 + 1))
        });
        let fit = b_residue(&recs, &DEFAULT_S_GRID, FitBasis::ReferencePrimeSum).unwrap();
        assert!((fit.r - 1.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn keyf_zero_and_decay() {
        // A* = 0, B = p + 1, b = 2p + 1 - ... chosen to make D_p = 0
        let (mut recs, _) = stream(1000, |p| {
            (Exact::from_integer(0), Exact::from_integer(p as i128 + 1))
        });
        for r in recs.iter_mut() {
            r.b_surface = Some(2 * r.p as i64 + 1);
        }
        let rep = keyf_diagnostic(&recs).unwrap();
        assert!(rep.residuals.iter().all(|&(_, d)| d == 0.0));
        assert_eq!(rep.alpha, None);
        assert!(!rep.flagged);
        // b = 2p gives D_p = 1/p
        for r in recs.iter_mut() {
            r.b_surface = Some(2 * r.p as i64);
        }
        let rep = keyf_diagnostic(&recs).unwrap();
        assert!((rep.alpha.unwrap() - 1.0).abs() < 1e-9);
        recs[3].b_surface = None;
        assert!(matches!(
            keyf_diagnostic(&recs),
            Err(Error::UnavailableConvention)
        ));
    }

    #[test]
    fn rank_rounding_reports_deviation() {
        let (recs, good) = stream(3000, |_| (Exact::from_integer(-2), Exact::from_integer(0)));
        let s = nagao_series(
            &recs,
            &good,
            &[1000, 3000],
            &DEFAULT_S_GRID,
            FitBasis::ReferencePrimeSum,
        )
        .unwrap();
        assert_eq!(s.rank_estimate, 2);
        assert!(s.deviation < 0.2);
        assert_eq!(s.s_tauberian.len(), 2);
        assert!((s.s_dirichlet[1] - 2.0).abs() < 1e-9);
    }
}
