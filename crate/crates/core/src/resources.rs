//! Built-in Bell functionals, embedded as JSON so external tools can
//! consume the same definitions the library constructs.

use crate::error::{Error, Result};
use crate::functional::BellFunctional;

/// Names accepted by [`builtin`].
pub const NAMES: [&str; 3] = ["cglmp", "four-qubit", "three-qutrit"];

/// The embedded JSON text for a built-in functional.
pub fn builtin_json(name: &str) -> Result<&'static str> {
    match name {
        "cglmp" => Ok(include_str!("../resources/cglmp.json")),
        "four-qubit" => Ok(include_str!("../resources/four_qubit.json")),
        "three-qutrit" => Ok(include_str!("../resources/three_qutrit.json")),
        other => Err(Error::InvalidData {
            detail: format!(
                "unknown built-in functional {other:?}; available: {}",
                NAMES.join(", ")
            ),
        }),
    }
}

/// Parse a built-in functional by name.
pub fn builtin(name: &str) -> Result<BellFunctional> {
    BellFunctional::from_json(builtin_json(name)?)
}
