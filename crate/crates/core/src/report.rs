use serde::Serialize;

/// One named check with the witnesses that make it fail (none = passed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl Clause {
    pub fn new(name: &'static str, witnesses: Vec<String>) -> Self {
        Clause { name, passed: witnesses.is_empty(), witnesses }
    }
}

pub fn all_passed(clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| c.passed)
}
