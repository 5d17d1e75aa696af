//! Per-prime average traces.
//!
//! Averages are exact rationals with denominator dividing `p^m`. In the
//! Weierstrass convention every fiber contributes `b = p` to the second
//! trace; in the smooth-model convention a singular fiber with `m_y`
//! rational components contributes `p m_y`. The first trace is the same in
//! both conventions because the extra components only add to the top
//! cohomology.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{BadPrimeSet, FamilyModel, FamilyShape, ReducedFamily};
use crate::fibercount::{self, FiberSweep};
use crate::kodaira::{FiberClassifier, Mode};

pub type Exact = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Convention {
    WeierstrassFiber,
    SmoothModelFiber,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::WeierstrassFiber => "weierstrass",
            Convention::SmoothModelFiber => "smooth",
        })
    }
}

impl FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "weierstrass" => Ok(Convention::WeierstrassFiber),
            "smooth" => Ok(Convention::SmoothModelFiber),
            _ => Err(format!("unknown convention {s:?} (weierstrass|smooth)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeTraceRecord {
    pub p: u64,
    pub a: Exact,
    pub a_star: Exact,
    pub b_avg: Exact,
    /// `sum_y a_p(y)` divided by `#P^m(F_p)` instead of `p^m`.
    pub a_prime: Exact,
    /// `sum over singular y of (m_y - 1)`.
    pub vertical: i64,
    /// True when `vertical` is a placeholder (lenient mode, genus >= 2).
    pub vertical_approximate: bool,
    /// `b_p` of the total space, when it can be recovered by counting.
    pub b_surface: Option<i64>,
    pub convention: Convention,
    /// Largest `|a_p(y)|` over smooth fibers.
    pub max_smooth_abs_a: i64,
    pub hasse_violations: u32,
}

/// Everything needed to produce records for one family; built once.
#[derive(Clone, Debug)]
pub struct TraceEngine {
    model: FamilyModel,
    bad: BadPrimeSet,
    classifier: Option<FiberClassifier>,
    convention: Convention,
    mode: Mode,
}

impl TraceEngine {
    pub fn new(model: FamilyModel, convention: Convention, mode: Mode) -> Result<Self> {
        let bad = model.bad_primes()?;
        let classifier = match model.shape {
            FamilyShape::Hyperelliptic { .. } => None,
            _ => Some(FiberClassifier::new(&model)?),
        };
        Ok(Self {
            model,
            bad,
            classifier,
            convention,
            mode,
        })
    }

    pub fn model(&self) -> &FamilyModel {
        &self.model
    }

    pub fn bad_primes(&self) -> &BadPrimeSet {
        &self.bad
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn good_primes_up_to(&self, bound: u64) -> Vec<u64> {
        self.bad.good_primes_up_to(bound)
    }

    pub fn reduce(&self, p: u64) -> Result<ReducedFamily> {
        ReducedFamily::new(&self.model, &self.bad, p)
    }

    /// `(value, approximate)` of the vertical trace at `p`.
    pub fn vertical(&self, red: &ReducedFamily) -> Result<(i64, bool)> {
        match &self.classifier {
            Some(c) => Ok((c.vertical_trace(red)?.value, false)),
            None if self.mode == Mode::Lenient => Ok((0, true)),
            None => Err(Error::UnimplementedType(format!(
                "genus >= 2 degenerations ({})",
                self.model.label
            ))),
        }
    }

    pub fn record(&self, p: u64) -> Result<PrimeTraceRecord> {
        let red = self.reduce(p)?;
        let sweep = fibercount::sweep(&red)?;
        self.record_from_sweep(&red, &sweep)
    }

    pub fn record_from_sweep(
        &self,
        red: &ReducedFamily,
        sweep: &FiberSweep,
    ) -> Result<PrimeTraceRecord> {
        let p = red.p();
        let pi = p as i128;
        let m = red.base_dim();
        let pm = pi.pow(m);
        let n_base = red.base_point_count() as i128;
        let (vertical, approximate) = self.vertical(red)?;
        if approximate && self.convention == Convention::SmoothModelFiber {
            return Err(Error::UnimplementedType(
                "smooth-model fibers of genus >= 2 degenerations".into(),
            ));
        }
        let sum_a = sweep.sum_a as i128;
        // a_p of the K/k-trace: the fiber itself for a constant product,
        // zero for the non-constant families in scope
        let a_trace = if red.is_constant() {
            Exact::new(sum_a, n_base)
        } else {
            Exact::from_integer(0)
        };
        let extra_b = match self.convention {
            Convention::WeierstrassFiber => 0,
            Convention::SmoothModelFiber => pi * vertical as i128,
        };
        let a = Exact::new(sum_a, pm);
        let b_surface = (m == 1 && !approximate && red.genus() == 1).then(|| {
            let smooth_total = sweep.total_points as i128 + pi * vertical as i128;
            let lefschetz = smooth_total - pi * pi - 1 + (1 + pi) * a_trace.to_integer();
            lefschetz as i64
        });
        Ok(PrimeTraceRecord {
            p,
            a,
            a_star: a - a_trace,
            b_avg: Exact::new(pi * n_base + extra_b, pm),
            a_prime: Exact::new(sum_a, n_base),
            vertical,
            vertical_approximate: approximate,
            b_surface,
            convention: self.convention,
            max_smooth_abs_a: sweep.max_smooth_abs_a,
            hasse_violations: sweep.hasse_violations,
        })
    }

    /// Records for the given primes, computed on a pool of `threads`
    /// workers and returned in the order of `primes`.
    pub fn records(&self, primes: &[u64], threads: usize) -> Result<Vec<PrimeTraceRecord>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidFamily(format!("thread pool: {e}")))?;
        // indexed collection keeps the input order whatever the schedule
        pool.install(|| primes.par_iter().map(|&p| self.record(p)).collect())
    }

    /// Records for every good prime up to `bound`.
    pub fn records_up_to(&self, bound: u64, threads: usize) -> Result<Vec<PrimeTraceRecord>> {
        self.records(&self.good_primes_up_to(bound), threads)
    }
}

/// `prime_record` for a one-off prime.
pub fn prime_record(
    model: &FamilyModel,
    p: u64,
    convention: Convention,
    mode: Mode,
) -> Result<PrimeTraceRecord> {
    TraceEngine::new(model.clone(), convention, mode)?.record(p)
}

/// `b_p` of the total space of an elliptic surface over `P^1`.
pub fn b_surface(model: &FamilyModel, p: u64) -> Result<i64> {
    prime_record(model, p, Convention::WeierstrassFiber, Mode::Strict)?
        .b_surface
        .ok_or(Error::UnavailableConvention)
}

/// `(1 + 1/p + ... + 1/p^m)` as an exact rational.
pub fn geometric_factor(p: u64, m: u32) -> Exact {
    (0..=m).fold(Exact::from_integer(0), |acc, k| {
        acc + Exact::new(1, (p as i128).pow(k))
    })
}
