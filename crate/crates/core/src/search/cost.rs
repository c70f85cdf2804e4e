use std::cmp::Ordering;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::ops::Add;

/// Exact sailing cost `(straight + diagonal * sqrt(2)) / 2`.
///
/// Safety weights are multiples of one half and grid steps are 1 or sqrt(2)
/// cell edges long, so every path cost has this form with integer parts.
/// Comparisons are exact, which makes "equal cost" a well-defined notion
/// across planners regardless of the order costs were summed in.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SailingCost {
    /// Sum of doubled weights over orthogonal steps.
    pub straight: u64,
    /// Sum of doubled weights over diagonal steps.
    pub diagonal: u64,
}

impl SailingCost {
    pub const ZERO: Self = Self {
        straight: 0,
        diagonal: 0,
    };

    pub(crate) fn step(diagonal: bool, weight_halves: u32) -> Self {
        let w = u64::from(weight_halves);
        if diagonal {
            Self {
                straight: 0,
                diagonal: w,
            }
        } else {
            Self {
                straight: w,
                diagonal: 0,
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        (self.straight as f64 + self.diagonal as f64 * SQRT_2) / 2.0
    }
}

impl Add for SailingCost {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            straight: self.straight + rhs.straight,
            diagonal: self.diagonal + rhs.diagonal,
        }
    }
}

impl Ord for SailingCost {
    fn cmp(&self, other: &Self) -> Ordering {
        // sign of da + db * sqrt(2)
        let da = i128::from(self.straight) - i128::from(other.straight);
        let db = i128::from(self.diagonal) - i128::from(other.diagonal);
        match (da.signum(), db.signum()) {
            (0, 0) => Ordering::Equal,
            (a, b) if a >= 0 && b >= 0 => Ordering::Greater,
            (a, b) if a <= 0 && b <= 0 => Ordering::Less,
            (1, _) => (da * da).cmp(&(2 * db * db)),
            _ => (2 * db * db).cmp(&(da * da)),
        }
    }
}

impl PartialOrd for SailingCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SailingCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
