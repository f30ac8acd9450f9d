use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the six benchmark strokes. Integer codes 0–5 follow declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrokeLabel {
    ForehandAttack,
    BackhandAttack,
    ForehandPush,
    BackhandPush,
    ForehandChop,
    BackhandChop,
}

impl StrokeLabel {
    pub const COUNT: usize = 6;

    pub const ALL: [StrokeLabel; 6] = [
        StrokeLabel::ForehandAttack,
        StrokeLabel::BackhandAttack,
        StrokeLabel::ForehandPush,
        StrokeLabel::BackhandPush,
        StrokeLabel::ForehandChop,
        StrokeLabel::BackhandChop,
    ];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Option<Self> {
        Self::ALL.get(code).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            StrokeLabel::ForehandAttack => "forehand_attack",
            StrokeLabel::BackhandAttack => "backhand_attack",
            StrokeLabel::ForehandPush => "forehand_push",
            StrokeLabel::BackhandPush => "backhand_push",
            StrokeLabel::ForehandChop => "forehand_chop",
            StrokeLabel::BackhandChop => "backhand_chop",
        }
    }
}

impl fmt::Display for StrokeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown stroke label `{0}`")]
pub struct UnknownLabel(pub String);

impl FromStr for StrokeLabel {
    type Err = UnknownLabel;

    /// Accepts the snake-case name or the integer code.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(code) = s.parse::<usize>() {
            return Self::from_code(code).ok_or_else(|| UnknownLabel(s.to_string()));
        }
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_declaration_order() {
        for (i, l) in StrokeLabel::ALL.iter().enumerate() {
            assert_eq!(l.code(), i);
            assert_eq!(StrokeLabel::from_code(i), Some(*l));
        }
        assert_eq!(StrokeLabel::from_code(6), None);
    }

    #[test]
    fn parses_names_and_codes() {
        assert_eq!("backhand_push".parse::<StrokeLabel>().unwrap(), StrokeLabel::BackhandPush);
        assert_eq!("4".parse::<StrokeLabel>().unwrap(), StrokeLabel::ForehandChop);
        assert!("lob".parse::<StrokeLabel>().is_err());
    }
}
