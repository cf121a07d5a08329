pub use crate::catalog::*;

use crate::graph::EdgeId;
use crate::input::parse_document;
use crate::map::PLGraphMap;

pub fn e12() -> EdgeId {
    EdgeId::new(1, 2).unwrap()
}

pub fn try_map_from(toml: &str, name: &str) -> Result<PLGraphMap, crate::input::InputError> {
    let mut d = parse_document(toml)?;
    d.maps.remove(name).ok_or_else(|| crate::input::InputError::UnknownMap(name.into()))
}

pub fn map_from(toml: &str, name: &str) -> PLGraphMap {
    try_map_from(toml, name).unwrap()
}
