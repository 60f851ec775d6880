//! Shared fixtures for unit tests.

use std::sync::OnceLock;

use crate::scalar::SymbolTable;

pub(crate) const WITNESSES: [(&str, &str); 6] = [
    ("alpha", "0.41421356237309504880168872420969807856967187537694807317667974"),
    ("beta", "0.23606797749978969640917366873127623544061835961152572427089725"),
    ("gamma", "0.30102999566398119521373889472449302676818988146210854131042746"),
    ("delta", "0.14159265358979323846264338327950288419716939937510582097494459"),
    ("g1", "0.25992104989487316476721060727822835057025146470150798008197511"),
    ("g2", "0.31662479035539984911493273667068668392708854558935359705868215"),
];

/// One table for the whole unit-test binary, so values from different tests
/// stay compatible.
pub(crate) fn table() -> SymbolTable {
    static TABLE: OnceLock<SymbolTable> = OnceLock::new();
    TABLE
        .get_or_init(|| {
            WITNESSES
                .iter()
                .fold(SymbolTable::new(), |t, (name, w)| t.register(name, w).unwrap())
        })
        .clone()
}
