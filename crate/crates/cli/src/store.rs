//! Per-prime record files and the record cache.
//!
//! `records.csv` holds exactly what the estimators consume. The extra
//! per-prime diagnostics (`A'`, largest smooth `|a|`, Hasse violations)
//! live in a sidecar `diagnostics.csv` with the same rows.

use std::fs;
use std::path::{Path, PathBuf};

use nagao_core::{Convention, Exact, FamilyModel, Mode, PrimeTraceRecord, TraceEngine};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const RECORDS_HEADER: [&str; 9] = [
    "p",
    "A_num",
    "A_den",
    "Astar_num",
    "Astar_den",
    "Bavg_num",
    "Bavg_den",
    "vertical",
    "b_surface_or_empty",
];

pub const DIAGNOSTICS_HEADER: [&str; 6] = [
    "p",
    "Aprime_num",
    "Aprime_den",
    "max_smooth_abs_a",
    "hasse_violations",
    "vertical_approximate",
];

pub const CACHE_ENV: &str = "NAGAO_CACHE_DIR";

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::Records {
        path: path.display().to_string(),
        detail: e.to_string(),
    }
}

fn ratio_fields(r: &Exact) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

/// Write `records.csv` and `diagnostics.csv` for `records` with a common
/// file stem.
pub fn write_records(
    records_path: &Path,
    diagnostics_path: &Path,
    records: &[PrimeTraceRecord],
) -> CliResult<()> {
    let mut w = csv::Writer::from_path(records_path).map_err(|e| csv_err(records_path, e))?;
    w.write_record(RECORDS_HEADER)
        .map_err(|e| csv_err(records_path, e))?;
    for r in records {
        let [an, ad] = ratio_fields(&r.a);
        let [sn, sd] = ratio_fields(&r.a_star);
        let [bn, bd] = ratio_fields(&r.b_avg);
        let bs = r.b_surface.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([
            r.p.to_string(),
            an,
            ad,
            sn,
            sd,
            bn,
            bd,
            r.vertical.to_string(),
            bs,
        ])
        .map_err(|e| csv_err(records_path, e))?;
    }
    w.flush().map_err(|e| CliError::io(records_path, e))?;

    let mut w =
        csv::Writer::from_path(diagnostics_path).map_err(|e| csv_err(diagnostics_path, e))?;
    w.write_record(DIAGNOSTICS_HEADER)
        .map_err(|e| csv_err(diagnostics_path, e))?;
    for r in records {
        let [pn, pd] = ratio_fields(&r.a_prime);
        w.write_record([
            r.p.to_string(),
            pn,
            pd,
            r.max_smooth_abs_a.to_string(),
            r.hasse_violations.to_string(),
            r.vertical_approximate.to_string(),
        ])
        .map_err(|e| csv_err(diagnostics_path, e))?;
    }
    w.flush().map_err(|e| CliError::io(diagnostics_path, e))?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    row: &csv::StringRecord,
    i: usize,
) -> CliResult<T> {
    row.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Records {
            path: path.display().to_string(),
            detail: format!("bad field {i} in row {:?}", row.iter().collect::<Vec<_>>()),
        })
}

fn parse_ratio(path: &Path, row: &csv::StringRecord, i: usize) -> CliResult<Exact> {
    let den: i128 = parse_field(path, row, i + 1)?;
    if den <= 0 {
        return Err(CliError::Records {
            path: path.display().to_string(),
            detail: format!("nonpositive denominator in column {}", i + 1),
        });
    }
    Ok(Exact::new(parse_field(path, row, i)?, den))
}

fn check_header(path: &Path, rdr: &mut csv::Reader<fs::File>, want: &[&str]) -> CliResult<()> {
    let got = rdr.headers().map_err(|e| csv_err(path, e))?;
    if got.iter().ne(want.iter().copied()) {
        return Err(CliError::Records {
            path: path.display().to_string(),
            detail: format!(
                "header {:?}, expected {want:?}",
                got.iter().collect::<Vec<_>>()
            ),
        });
    }
    Ok(())
}

/// Read records back. The diagnostics sidecar is optional; without it the
/// diagnostic fields take neutral values (`A' = A`, no violations).
pub fn read_records(
    records_path: &Path,
    diagnostics_path: Option<&Path>,
    convention: Convention,
) -> CliResult<Vec<PrimeTraceRecord>> {
    let mut rdr = csv::Reader::from_path(records_path).map_err(|e| csv_err(records_path, e))?;
    check_header(records_path, &mut rdr, &RECORDS_HEADER)?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_err(records_path, e))?;
        let a = parse_ratio(records_path, &row, 1)?;
        let b_surface = match row.get(8) {
            Some("") => None,
            _ => Some(parse_field(records_path, &row, 8)?),
        };
        out.push(PrimeTraceRecord {
            p: parse_field(records_path, &row, 0)?,
            a,
            a_star: parse_ratio(records_path, &row, 3)?,
            b_avg: parse_ratio(records_path, &row, 5)?,
            a_prime: a,
            vertical: parse_field(records_path, &row, 7)?,
            vertical_approximate: false,
            b_surface,
            convention,
            max_smooth_abs_a: 0,
            hasse_violations: 0,
        });
    }
    let Some(dpath) = diagnostics_path.filter(|d| d.exists()) else {
        return Ok(out);
    };
    let mut rdr = csv::Reader::from_path(dpath).map_err(|e| csv_err(dpath, e))?;
    check_header(dpath, &mut rdr, &DIAGNOSTICS_HEADER)?;
    let mut n = 0;
    for (row, rec) in rdr.records().zip(out.iter_mut()) {
        let row = row.map_err(|e| csv_err(dpath, e))?;
        let p: u64 = parse_field(dpath, &row, 0)?;
        if p != rec.p {
            return Err(CliError::Records {
                path: dpath.display().to_string(),
                detail: format!("row for p = {p} where records have p = {}", rec.p),
            });
        }
        rec.a_prime = parse_ratio(dpath, &row, 1)?;
        rec.max_smooth_abs_a = parse_field(dpath, &row, 3)?;
        rec.hasse_violations = parse_field(dpath, &row, 4)?;
        rec.vertical_approximate = parse_field(dpath, &row, 5)?;
        n += 1;
    }
    if n != out.len() {
        return Err(CliError::Records {
            path: dpath.display().to_string(),
            detail: format!("{n} diagnostic rows for {} records", out.len()),
        });
    }
    Ok(out)
}

/// Cached record streams keyed by family, convention and mode. Each entry
/// remembers the bound it was computed to and is extended on demand.
#[derive(Clone, Debug)]
pub struct RecordCache {
    dir: PathBuf,
}

impl RecordCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$NAGAO_CACHE_DIR` if set, else `fallback`.
    pub fn from_env(fallback: &Path) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(fallback),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn stem(&self, model: &FamilyModel, convention: Convention, mode: Mode) -> PathBuf {
        let mut h = Sha256::new();
        h.update(format!("{model:?}|{convention}|{mode:?}").as_bytes());
        let digest = h.finalize();
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        let label: String = model
            .label
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        self.dir
            .join(format!("{label}-{convention}-{mode:?}-{hex}").to_lowercase())
    }

    fn paths(&self, stem: &Path) -> (PathBuf, PathBuf, PathBuf) {
        let with = |ext: &str| {
            let mut s = stem.as_os_str().to_owned();
            s.push(ext);
            PathBuf::from(s)
        };
        (
            with(".records.csv"),
            with(".diagnostics.csv"),
            with(".bound"),
        )
    }

    /// Records for every good prime `<= bound`, computing only the primes
    /// the cache does not already hold.
    pub fn records(
        &self,
        engine: &TraceEngine,
        bound: u64,
        threads: usize,
    ) -> CliResult<Vec<PrimeTraceRecord>> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let stem = self.stem(engine.model(), engine.convention(), engine.mode());
        let (rpath, dpath, bpath) = self.paths(&stem);
        let cached_bound: u64 = fs::read_to_string(&bpath)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(0);
        let mut recs = if cached_bound > 0 && rpath.exists() {
            read_records(&rpath, Some(&dpath), engine.convention())?
        } else {
            Vec::new()
        };
        if bound > cached_bound {
            let fresh: Vec<u64> = engine
                .good_primes_up_to(bound)
                .into_iter()
                .filter(|&p| p > cached_bound)
                .collect();
            recs.extend(engine.records(&fresh, threads)?);
            write_records(&rpath, &dpath, &recs)?;
            fs::write(&bpath, bound.to_string()).map_err(|e| CliError::io(&bpath, e))?;
        }
        recs.truncate(recs.partition_point(|r| r.p <= bound));
        Ok(recs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nagao_core::corpus;

    fn engine(m: FamilyModel) -> TraceEngine {
        TraceEngine::new(m, Convention::WeierstrassFiber, Mode::Strict).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        for m in [corpus::x3_x_t2(), corpus::constant_e1_p2()] {
            let e = engine(m);
            let recs = e.records_up_to(80, 1).unwrap();
            let (r, d) = (dir.path().join("r.csv"), dir.path().join("d.csv"));
            write_records(&r, &d, &recs).unwrap();
            assert_eq!(read_records(&r, Some(&d), e.convention()).unwrap(), recs);
            let first = fs::read_to_string(&r).unwrap();
            assert!(first.starts_with(
                "p,A_num,A_den,Astar_num,Astar_den,Bavg_num,Bavg_den,vertical,b_surface_or_empty\n"
            ));
        }
    }

    #[test]
    fn cache_extends_and_truncates() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RecordCache::new(dir.path());
        let e = engine(corpus::legendre());
        let small = cache.records(&e, 50, 1).unwrap();
        let large = cache.records(&e, 120, 1).unwrap();
        let again = cache.records(&e, 90, 1).unwrap();
        assert_eq!(large, e.records_up_to(120, 1).unwrap());
        assert_eq!(&large[..small.len()], &small[..]);
        assert_eq!(again, e.records_up_to(90, 1).unwrap());
        let entries = fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(entries, 3);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let r = dir.path().join("r.csv");
        fs::write(&r, "p,A\n5,1\n").unwrap();
        assert!(matches!(
            read_records(&r, None, Convention::WeierstrassFiber),
            Err(CliError::Records { .. })
        ));
        fs::write(
            &r,
            format!("{}\n5,1,0,1,1,6,1,0,\n", RECORDS_HEADER.join(",")),
        )
        .unwrap();
        assert!(read_records(&r, None, Convention::WeierstrassFiber).is_err());
    }
}
