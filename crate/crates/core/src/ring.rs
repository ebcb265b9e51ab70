use core::fmt;

/// Coefficient ring of a chain complex or homology table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Z,
    Q,
    Z2,
    /// `Z/2^r` with `r >= 2`; use [`Ring::z2_pow`] to construct.
    Z2Pow(u32),
}

impl Ring {
    /// `Z/2^r`, collapsing `r = 1` to [`Ring::Z2`]. Panics on `r = 0` or `r > 62`.
    pub fn z2_pow(r: u32) -> Ring {
        assert!((1..=62).contains(&r), "Z/2^r needs 1 <= r <= 62");
        if r == 1 {
            Ring::Z2
        } else {
            Ring::Z2Pow(r)
        }
    }

    /// Characteristic of the ring, 0 for Z and Q.
    pub fn characteristic(self) -> u64 {
        match self {
            Ring::Z | Ring::Q => 0,
            Ring::Z2 => 2,
            Ring::Z2Pow(r) => 1 << r,
        }
    }

    pub fn is_field(self) -> bool {
        matches!(self, Ring::Q | Ring::Z2)
    }

    /// Reduces an integer into the canonical representative set of the ring.
    pub fn reduce(self, v: i64) -> i64 {
        match self {
            Ring::Z | Ring::Q => v,
            _ => v.rem_euclid(self.characteristic() as i64),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => f.write_str("Z"),
            Ring::Q => f.write_str("Q"),
            Ring::Z2 => f.write_str("Z2"),
            Ring::Z2Pow(r) => write!(f, "Z{}", 1u64 << r),
        }
    }
}

impl core::str::FromStr for Ring {
    type Err = UnknownRing;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" => Ok(Ring::Z),
            "Q" => Ok(Ring::Q),
            "Z2" => Ok(Ring::Z2),
            _ => {
                let m: u64 = s
                    .strip_prefix('Z')
                    .and_then(|t| t.parse().ok())
                    .ok_or(UnknownRing)?;
                if m >= 4 && m.is_power_of_two() {
                    Ok(Ring::Z2Pow(m.trailing_zeros()))
                } else {
                    Err(UnknownRing)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("unknown coefficient ring (expected Z, Q, Z2 or Z2^r such as Z4, Z8)")]
pub struct UnknownRing;

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_display() {
        for s in ["Z", "Q", "Z2", "Z4", "Z8", "Z16"] {
            let r: Ring = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("Z4".parse::<Ring>().unwrap(), Ring::Z2Pow(2));
        assert!("Z3".parse::<Ring>().is_err());
        assert!("Z6".parse::<Ring>().is_err());
        assert_eq!(Ring::z2_pow(1), Ring::Z2);
    }

    #[test]
    fn reduce_is_canonical() {
        assert_eq!(Ring::Z2.reduce(-1), 1);
        assert_eq!(Ring::Z2Pow(2).reduce(-1), 3);
        assert_eq!(Ring::Z.reduce(-7), -7);
    }
}
