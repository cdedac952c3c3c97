//! The four finite trigonometric sums over k = 1..n−1:
//!
//! | tag        | summand                       | closed form                       |
//! |------------|-------------------------------|-----------------------------------|
//! | `InvSin2`  | 1/sin²(πk/n)                  | (n²−1)/3                          |
//! | `InvSin4`  | 1/sin⁴(πk/n)                  | (n²−1)(n²+11)/45                  |
//! | `WSin2`    | sin²(mπk/n)/sin²(πk/n)        | m(n−m)                            |
//! | `WSin4`    | sin²(mπk/n)/sin⁴(πk/n)        | m²(n−m)²/3 + (2/3)m(n−m)          |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::sin_pi_ratio;
use crate::sum::CompensatedSum;

/// Largest n accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_N: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityTag {
    InvSin2,
    InvSin4,
    WSin2,
    WSin4,
}

impl IdentityTag {
    pub const ALL: [IdentityTag; 4] = [Self::InvSin2, Self::InvSin4, Self::WSin2, Self::WSin4];

    pub fn is_weighted(self) -> bool {
        matches!(self, Self::WSin2 | Self::WSin4)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::InvSin2 => "INV_SIN2",
            Self::InvSin4 => "INV_SIN4",
            Self::WSin2 => "WSIN2",
            Self::WSin4 => "WSIN4",
        }
    }
}

impl fmt::Display for IdentityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One instance of an identity: the tag, the summation bound n and, for
/// the weighted sums, the index m with 1 ≤ m ≤ n−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityId {
    tag: IdentityTag,
    n: usize,
    m: Option<usize>,
}

impl IdentityId {
    pub fn new(tag: IdentityTag, n: usize, m: Option<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Range(format!("n must be at least 2, got {n}")));
        }
        match (tag.is_weighted(), m) {
            (true, Some(m)) if (1..n).contains(&m) => {}
            (true, Some(m)) => return Err(Error::Range(format!("m must lie in [1, {}], got {m}", n - 1))),
            (true, None) => return Err(Error::Range(format!("{tag} requires an index m"))),
            (false, Some(_)) => return Err(Error::Range(format!("{tag} takes no index m"))),
            (false, None) => {}
        }
        Ok(Self { tag, n, m })
    }

    pub fn tag(&self) -> IdentityTag {
        self.tag
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> Option<usize> {
        self.m
    }

    /// Every valid identity instance for 2 ≤ n ≤ n_max, in (n, tag, m) order.
    pub fn enumerate(n_max: usize) -> impl Iterator<Item = IdentityId> {
        (2..=n_max).flat_map(|n| {
            IdentityTag::ALL.into_iter().flat_map(move |tag| {
                let ms: Vec<Option<usize>> = if tag.is_weighted() {
                    (1..n).map(Some).collect()
                } else {
                    vec![None]
                };
                ms.into_iter().map(move |m| IdentityId { tag, n, m })
            })
        })
    }
}

pub fn closed_form(id: &IdentityId) -> f64 {
    let n = id.n as f64;
    let n2 = n * n;
    match id.tag {
        IdentityTag::InvSin2 => (n2 - 1.0) / 3.0,
        IdentityTag::InvSin4 => (n2 - 1.0) * (n2 + 11.0) / 45.0,
        IdentityTag::WSin2 => {
            let m = id.m.expect("validated") as f64;
            m * (n - m)
        }
        IdentityTag::WSin4 => {
            let m = id.m.expect("validated") as f64;
            let p = m * (n - m);
            p * p / 3.0 + 2.0 * p / 3.0
        }
    }
}

/// Direct compensated summation of the n−1 terms.
pub fn brute_force(id: &IdentityId) -> Result<f64> {
    let n = id.n;
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Range(format!("brute force limited to n ≤ {BRUTE_FORCE_MAX_N}, got {n}")));
    }
    let mut acc = CompensatedSum::new();
    for k in 1..n {
        let s = sin_pi_ratio(k, n);
        let s2 = s * s;
        let term = match id.tag {
            IdentityTag::InvSin2 => 1.0 / s2,
            IdentityTag::InvSin4 => 1.0 / (s2 * s2),
            IdentityTag::WSin2 | IdentityTag::WSin4 => {
                let w = sin_pi_ratio(id.m.expect("validated") * k, n);
                let w2 = w * w;
                if id.tag == IdentityTag::WSin2 {
                    w2 / s2
                } else {
                    w2 / (s2 * s2)
                }
            }
        };
        acc.add(term);
    }
    Ok(acc.value())
}

/// |closed − brute| / max(1, |closed|).
pub fn relative_error(closed: f64, brute: f64) -> f64 {
    (closed - brute).abs() / closed.abs().max(1.0)
}
