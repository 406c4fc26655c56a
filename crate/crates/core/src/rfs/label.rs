use std::fmt;

use serde::{Deserialize, Serialize};

/// Track label `(birth time, index among same-time births)`.
///
/// Ordering is lexicographic on `(birth_time, birth_index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub birth_time: u32,
    pub birth_index: u32,
}

impl Label {
    pub const fn new(birth_time: u32, birth_index: u32) -> Self {
        Self { birth_time, birth_index }
    }

    /// Whether the label belongs to the birth space of step `k`.
    pub fn born_at(&self, k: u32) -> bool {
        self.birth_time == k
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.birth_time, self.birth_index)
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("bad label '{s}'"))?;
        Ok(Label::new(
            a.trim().parse().map_err(|_| format!("bad label '{s}'"))?,
            b.trim().parse().map_err(|_| format!("bad label '{s}'"))?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        assert!(Label::new(1, 5) < Label::new(2, 0));
        assert!(Label::new(2, 0) < Label::new(2, 1));
        assert_eq!(Label::new(3, 1), "3:1".parse().unwrap());
    }
}
