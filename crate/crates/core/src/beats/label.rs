use super::BuildError;
use crate::wfdb::{code_for_symbol, is_beat_code};

/// AAMI EC57 heartbeat class. The discriminant is the integer label used in
/// every export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum BeatLabel {
    N = 0,
    S = 1,
    V = 2,
    F = 3,
    Q = 4,
}

impl BeatLabel {
    pub const ALL: [BeatLabel; 5] = [
        BeatLabel::N,
        BeatLabel::S,
        BeatLabel::V,
        BeatLabel::F,
        BeatLabel::Q,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn as_char(self) -> char {
        match self {
            BeatLabel::N => 'N',
            BeatLabel::S => 'S',
            BeatLabel::V => 'V',
            BeatLabel::F => 'F',
            BeatLabel::Q => 'Q',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_char() == c)
    }
}

impl std::fmt::Display for BeatLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Groups an MIT beat symbol into its AAMI class.
///
/// Returns `Ok(None)` for annotations that are not beats (rhythm changes,
/// noise, comments) and `UnknownBeatType` for beat symbols outside the
/// five-class grouping.
pub fn map_label(symbol: char) -> Result<Option<BeatLabel>, BuildError> {
    let label = match symbol {
        'N' | 'L' | 'R' | 'e' | 'j' => BeatLabel::N,
        'A' | 'a' | 'J' | 'S' => BeatLabel::S,
        'V' | 'E' => BeatLabel::V,
        'F' => BeatLabel::F,
        '/' | 'f' | 'Q' => BeatLabel::Q,
        other => {
            return match code_for_symbol(other) {
                Some(code) if is_beat_code(code) => Err(BuildError::UnknownBeatType(other)),
                _ => Ok(None),
            }
        }
    };
    Ok(Some(label))
}

/// Per-class tallies indexed by [`BeatLabel::code`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts(pub [usize; 5]);

impl ClassCounts {
    pub fn add(&mut self, label: BeatLabel) {
        self.0[label as usize] += 1;
    }

    pub fn get(&self, label: BeatLabel) -> usize {
        self.0[label as usize]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Share of each class in percent; zeros for an empty tally.
    pub fn percentages(&self) -> [f64; 5] {
        let total = self.total();
        self.0.map(|c| {
            if total == 0 {
                0.0
            } else {
                100.0 * c as f64 / total as f64
            }
        })
    }
}

impl FromIterator<BeatLabel> for ClassCounts {
    fn from_iter<I: IntoIterator<Item = BeatLabel>>(iter: I) -> Self {
        let mut c = ClassCounts::default();
        for l in iter {
            c.add(l);
        }
        c
    }
}

impl std::ops::AddAssign for ClassCounts {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}
