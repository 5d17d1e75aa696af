//! Family selection: a built-in corpus entry or a `key = value` file.
//!
//! ```text
//! label = "my_family"
//! kind = "weierstrass"        # or "hyperelliptic", "constant"
//! a4 = "1"
//! a6 = "t^2"
//! ```
//!
//! Weierstrass and constant families take `a1 a2 a3 a4 a6` (missing ones
//! are zero); constant families also take `base_dim` and `declared_rank`.
//! Hyperelliptic families take `f`, a polynomial in `x` and `t`.

use std::path::Path;

use nagao_core::parse::{parse_t_poly, parse_xt_poly};
use nagao_core::{corpus, FamilyModel, IntPoly, Weierstrass};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    label: Option<String>,
    kind: String,
    a1: Option<String>,
    a2: Option<String>,
    a3: Option<String>,
    a4: Option<String>,
    a6: Option<String>,
    f: Option<String>,
    base_dim: Option<u32>,
    declared_rank: Option<u32>,
}

/// Resolve `corpus:NAME` or a path to a family file.
pub fn resolve_family(arg: &str) -> CliResult<FamilyModel> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        return corpus::by_name(name).ok_or_else(|| {
            let names: Vec<_> = corpus::all().into_iter().map(|m| m.label).collect();
            CliError::Config(format!(
                "unknown corpus family {name:?}; known: {}",
                names.join(", ")
            ))
        });
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let default_label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "family".into());
    parse_family(&text, &default_label)
}

pub fn parse_family(text: &str, default_label: &str) -> CliResult<FamilyModel> {
    let file: FamilyFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let label = file
        .label
        .clone()
        .unwrap_or_else(|| default_label.to_string());
    let t_poly = |key: &str, src: &Option<String>| -> CliResult<IntPoly> {
        match src {
            None => Ok(IntPoly::zero()),
            Some(s) => parse_t_poly(s).map_err(|e| CliError::Config(format!("{key}: {e}"))),
        }
    };
    let weierstrass = || -> CliResult<Weierstrass> {
        Ok(Weierstrass::new(
            t_poly("a1", &file.a1)?,
            t_poly("a2", &file.a2)?,
            t_poly("a3", &file.a3)?,
            t_poly("a4", &file.a4)?,
            t_poly("a6", &file.a6)?,
        ))
    };
    let has_a = [&file.a1, &file.a2, &file.a3, &file.a4, &file.a6]
        .iter()
        .any(|a| a.is_some());
    let unexpected =
        |what: &str| CliError::Config(format!("{what} not allowed for kind {:?}", file.kind));
    let model = match file.kind.as_str() {
        "weierstrass" => {
            if file.f.is_some() {
                return Err(unexpected("f"));
            }
            if file.base_dim.is_some() || file.declared_rank.is_some() {
                return Err(unexpected("base_dim/declared_rank"));
            }
            FamilyModel::elliptic(label, weierstrass()?)?
        }
        "constant" => {
            if file.f.is_some() {
                return Err(unexpected("f"));
            }
            FamilyModel::constant_product(
                label,
                weierstrass()?,
                file.base_dim.unwrap_or(1),
                file.declared_rank.unwrap_or(0),
            )?
        }
        "hyperelliptic" => {
            if has_a || file.base_dim.is_some() || file.declared_rank.is_some() {
                return Err(unexpected(
                    "Weierstrass coefficients/base_dim/declared_rank",
                ));
            }
            let src = file
                .f
                .as_deref()
                .ok_or_else(|| CliError::Config("hyperelliptic family needs f".into()))?;
            let f = parse_xt_poly(src).map_err(|e| CliError::Config(format!("f: {e}")))?;
            FamilyModel::hyperelliptic(label, f)?
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown kind {other:?} (weierstrass, hyperelliptic, constant)"
            )))
        }
    };
    Ok(model)
}

/// One-line description of a family's defining equation.
pub fn describe(model: &FamilyModel) -> String {
    use nagao_core::FamilyShape;
    let long = |w: &Weierstrass| {
        let names = ["a1", "a2", "a3", "a4", "a6"];
        let parts: Vec<String> = names
            .iter()
            .zip(&w.a)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| format!("{n}={c}"))
            .collect();
        if parts.is_empty() {
            "all a_i = 0".to_string()
        } else {
            parts.join(" ")
        }
    };
    match &model.shape {
        FamilyShape::Elliptic(w) => format!("elliptic over P^1: {}", long(w)),
        FamilyShape::Hyperelliptic { f, genus } => format!("genus {genus} over P^1: y^2 = {f}"),
        FamilyShape::ConstantProduct { fiber, base_dim } => {
            format!(
                "E x P^{base_dim}, E: {}, declared rank {}",
                long(fiber),
                model.trace_rank_declared
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_and_files_resolve_to_the_same_model() {
        let from_file = parse_family(
            "kind = \"weierstrass\"\na4 = \"1\"\na6 = \"t^2\"\n",
            "x3_x_t2",
        )
        .unwrap();
        assert_eq!(from_file, resolve_family("corpus:x3_x_t2").unwrap());
        let hyper = parse_family(
            "label = \"hyper_g2\"\nkind = \"hyperelliptic\"\nf = \"x^5 + t*x + 1\"",
            "h",
        )
        .unwrap();
        assert_eq!(hyper, corpus::hyper_g2());
        let c = parse_family(
            "kind = \"constant\"\na6 = \"1\"\nbase_dim = 2",
            "constant_e1_p2",
        )
        .unwrap();
        assert_eq!(c, corpus::constant_e1_p2());
    }

    #[test]
    fn bad_configs_are_config_errors() {
        for text in [
            "kind = \"weierstrass\"\na6 = \"t^\"",
            "kind = \"elliptic\"",
            "kind = \"weierstrass\"\nf = \"x\"",
            "kind = \"hyperelliptic\"",
            "kind = \"weierstrass\"\nfoo = 1",
            "a6 = \"t\"",
            "kind = \"weierstrass\"\na6 = \"s\"",
        ] {
            let err = parse_family(text, "x").unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
        assert_eq!(resolve_family("corpus:nope").unwrap_err().exit_code(), 2);
        // singular generic fiber
        let err = parse_family("kind = \"weierstrass\"\na6 = \"0\"", "x").unwrap_err();
        assert_eq!(err.exit_code(), 2, "{err}");
    }
}
