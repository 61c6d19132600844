//! Built-in reference families, addressed by id (`5.1` … `5.4`).

use crate::error::{domain, Result};
use crate::recurrence::RecurrenceSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedExample {
    pub id: &'static str,
    pub k: usize,
    pub l: usize,
    pub a: &'static str,
    pub b: &'static str,
    /// Sequence indices whose zeros are usually plotted.
    pub indices: [usize; 2],
}

impl NamedExample {
    pub fn spec(&self) -> RecurrenceSpec {
        RecurrenceSpec::parse(self.k, self.l, self.a, self.b).expect("built-in example is valid")
    }
}

pub const EXAMPLES: [NamedExample; 4] = [
    NamedExample { id: "5.1", k: 3, l: 2, a: "z + 5", b: "-z^2 + 2z + 5", indices: [30, 70] },
    NamedExample { id: "5.2", k: 3, l: 2, a: "z^3 - z + 6", b: "-z^2 + 7z - 5", indices: [120, 200] },
    NamedExample { id: "5.3", k: 4, l: 3, a: "z^2 + 1", b: "z^3 - 1", indices: [40, 70] },
    NamedExample { id: "5.4", k: 4, l: 3, a: "7z^5 - 2z + i", b: "-z^2 - 2z + 5", indices: [50, 150] },
];

pub fn example(id: &str) -> Result<&'static NamedExample> {
    match EXAMPLES.iter().find(|e| e.id == id) {
        Some(e) => Ok(e),
        None => domain(format!("unknown example '{id}' (expected one of 5.1, 5.2, 5.3, 5.4)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_parse() {
        for e in &EXAMPLES {
            let s = e.spec();
            assert_eq!((s.k(), s.l()), (e.k, e.l));
        }
        assert_eq!(example("5.3").unwrap().a, "z^2 + 1");
        assert!(example("5.5").is_err());
    }
}
