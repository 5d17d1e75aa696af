//! Built-in families used by the tests, the benchmarks and the command line.

use crate::family::{FamilyModel, Weierstrass};
use crate::parse::{parse_t_poly, parse_xt_poly};
use crate::poly::IntPoly;

fn t(src: &str) -> IntPoly {
    parse_t_poly(src).expect("corpus literal")
}

/// `y^2 = x^3 + t`: types II and II*, rank 0.
pub fn x3_plus_t() -> FamilyModel {
    FamilyModel::elliptic("x3_plus_t", Weierstrass::short(t("0"), t("t"))).expect("smooth")
}

/// `y^2 = x(x - 1)(x - t)`: types I2, I2, I2*, rank 0.
pub fn legendre() -> FamilyModel {
    let w = Weierstrass::new(t("0"), t("-(t + 1)"), t("0"), t("t"), t("0"));
    FamilyModel::elliptic("legendre", w).expect("smooth")
}

/// `y^2 = x^3 + x + t^2`: four I1 and IV* at infinity.
pub fn x3_x_t2() -> FamilyModel {
    FamilyModel::elliptic("x3_x_t2", Weierstrass::short(t("1"), t("t^2"))).expect("smooth")
}

/// Tate normal form with a point of order 5,
/// `y^2 + (1 - t) x y - t y = x^3 - t x^2`: I5, I5, I1, I1, rank 0.
pub fn tate_normal_5() -> FamilyModel {
    let w = Weierstrass::new(t("1 - t"), t("-t"), t("-t"), t("0"), t("0"));
    FamilyModel::elliptic("tate_normal_5", w).expect("smooth")
}

/// `E x P^1` with `E: y^2 = x^3 + 1` (rank 0 over `Q`).
pub fn constant_e1() -> FamilyModel {
    FamilyModel::constant_product("constant_e1", Weierstrass::short(t("0"), t("1")), 1, 0)
        .expect("smooth")
}

/// `E x P^2` with the same `E`.
pub fn constant_e1_p2() -> FamilyModel {
    FamilyModel::constant_product("constant_e1_p2", Weierstrass::short(t("0"), t("1")), 2, 0)
        .expect("smooth")
}

/// `E x P^1` with `E: y^2 = x^3 - 2` (rank 1 over `Q`).
pub fn constant_e2() -> FamilyModel {
    FamilyModel::constant_product("constant_e2", Weierstrass::short(t("0"), t("-2")), 1, 1)
        .expect("smooth")
}

/// Genus 2 fibration `y^2 = x^5 + t x + 1`.
pub fn hyper_g2() -> FamilyModel {
    FamilyModel::hyperelliptic("hyper_g2", parse_xt_poly("x^5 + t*x + 1").expect("literal"))
        .expect("smooth")
}

pub fn all() -> Vec<FamilyModel> {
    vec![
        x3_plus_t(),
        legendre(),
        x3_x_t2(),
        tate_normal_5(),
        constant_e1(),
        constant_e1_p2(),
        constant_e2(),
        hyper_g2(),
    ]
}

pub fn by_name(name: &str) -> Option<FamilyModel> {
    all().into_iter().find(|m| m.label == name)
}
