//! Fixtures shared by the benchmarks.

use nagao_core::{corpus, Convention, Mode, TraceEngine};

/// A Weierstrass-convention engine for a corpus family, lenient for genus 2.
pub fn engine(name: &str) -> TraceEngine {
    let model = corpus::by_name(name).unwrap_or_else(|| panic!("no corpus family {name}"));
    let mode = if model.genus() > 1 {
        Mode::Lenient
    } else {
        Mode::Strict
    };
    TraceEngine::new(model, Convention::WeierstrassFiber, mode).expect("engine")
}
