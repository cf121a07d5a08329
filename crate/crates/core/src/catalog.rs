//! Built-in example maps, parsed from the documents shipped in `examples/data`.

use crate::input::{parse_document, InputDocument};
use crate::map::PLGraphMap;

/// Interval maps: `tent`, `skew`, `g3`, `identity`, `fixed_fold`.
pub const TENTS_TOML: &str = include_str!("../examples/data/tents.toml");
/// Triod maps: `identity`, `rotate`, `leg_tent`, `swing`.
pub const TRIOD_TOML: &str = include_str!("../examples/data/triod.toml");

pub fn interval_maps() -> InputDocument {
    parse_document(TENTS_TOML).expect("built-in interval document is valid")
}

pub fn triod_maps() -> InputDocument {
    parse_document(TRIOD_TOML).expect("built-in triod document is valid")
}

fn interval(name: &str) -> PLGraphMap {
    interval_maps().maps.remove(name).expect("built-in map")
}

fn triod(name: &str) -> PLGraphMap {
    triod_maps().maps.remove(name).expect("built-in map")
}

/// `0 ↦ 0, 1/2 ↦ 1, 1 ↦ 0`.
pub fn tent() -> PLGraphMap {
    interval("tent")
}

/// `0 ↦ 0, 1/3 ↦ 1, 1 ↦ 0`.
pub fn skew_tent() -> PLGraphMap {
    interval("skew")
}

/// `0 ↦ 2/5 ↦ 1 ↦ 0`, folded at 2/5.
pub fn g3() -> PLGraphMap {
    interval("g3")
}

/// `0 ↦ 0, 1/4 ↦ 1, 1/2 ↦ 1/2, 1 ↦ 1`: a fold on an interior fixed point.
pub fn fixed_fold() -> PLGraphMap {
    interval("fixed_fold")
}

pub fn identity_interval() -> PLGraphMap {
    interval("identity")
}

pub fn identity_triod() -> PLGraphMap {
    triod("identity")
}

pub fn rotate_triod() -> PLGraphMap {
    triod("rotate")
}

pub fn leg_tent_triod() -> PLGraphMap {
    triod("leg_tent")
}

pub fn swing_triod() -> PLGraphMap {
    triod("swing")
}

/// Every built-in map with a display name.
pub fn all() -> Vec<(&'static str, PLGraphMap)> {
    vec![
        ("tent", tent()),
        ("skew", skew_tent()),
        ("g3", g3()),
        ("identity", identity_interval()),
        ("fixed fold", fixed_fold()),
        ("triod identity", identity_triod()),
        ("triod rotate", rotate_triod()),
        ("triod leg tent", leg_tent_triod()),
        ("triod swing", swing_triod()),
    ]
}
