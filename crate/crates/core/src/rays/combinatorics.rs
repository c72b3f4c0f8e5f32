use std::fmt;

use serde::{Deserialize, Serialize};

use crate::family::FamilyId;
use crate::{Error, Result};

/// Combinatorial tag of a dynamic ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Combinatorics {
    /// Rational external angle `num / den` in `[0, 1)`.
    ExternalAngle { num: u64, den: u64 },
    /// External address; the last entry repeats forever.
    ExternalAddress { entries: Vec<i64> },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Combinatorics {
    pub fn angle(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("external angle with zero denominator".into()));
        }
        let num = num % den;
        let g = gcd(num, den).max(1);
        Ok(Combinatorics::ExternalAngle { num: num / g, den: den / g })
    }

    pub fn address(entries: Vec<i64>, max_entry: i64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty external address".into()));
        }
        if let Some(bad) = entries.iter().find(|e| e.abs() > max_entry) {
            return Err(Error::InvalidInput(format!("address entry {bad} exceeds the bound {max_entry}")));
        }
        Ok(Combinatorics::ExternalAddress { entries })
    }

    /// Parses `p/q` (or a bare integer) as an angle.
    pub fn parse_angle(text: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed external angle '{text}'"));
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => Self::angle(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => Self::angle(text.parse().map_err(|_| bad())?, 1),
        }
    }

    /// Parses a comma separated list of integers; the last one repeats.
    pub fn parse_address(text: &str, max_entry: i64) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|e| {
                e.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("malformed external address '{text}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::address(entries, max_entry)
    }

    /// Checks that the ray is fixed for the family and returns the branch
    /// index used by every pullback (0 for the quadratic angle-0 ray).
    pub fn fixed_branch(&self, family: FamilyId) -> Result<i64> {
        match (family, self) {
            (FamilyId::QuadraticC, Combinatorics::ExternalAngle { num, den }) => {
                if *num == 0 {
                    Ok(0)
                } else {
                    Err(Error::CombNotFixed(format!("angle {num}/{den} is not fixed under doubling")))
                }
            }
            (FamilyId::ExponentialLambda, Combinatorics::ExternalAddress { entries }) => {
                let first = entries[0];
                if entries.iter().all(|&e| e == first) {
                    Ok(first)
                } else {
                    Err(Error::CombNotFixed(format!("address {self} is not fixed under the shift")))
                }
            }
            (FamilyId::QuadraticC, _) => {
                Err(Error::InvalidInput("quadratic rays are tagged by an external angle".into()))
            }
            (FamilyId::ExponentialLambda, _) => {
                Err(Error::InvalidInput("exponential rays are tagged by an external address".into()))
            }
            (FamilyId::NormalizedParabolic { .. }, _) => {
                Err(Error::InvalidInput("rays are traced for the quadratic and exponential families".into()))
            }
        }
    }
}

impl fmt::Display for Combinatorics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Combinatorics::ExternalAngle { num, den } => write!(f, "{num}/{den}"),
            Combinatorics::ExternalAddress { entries } => {
                let body: Vec<String> = entries.iter().map(i64::to_string).collect();
                write!(f, "({})", body.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_reduce() {
        assert_eq!(Combinatorics::angle(2, 4).unwrap(), Combinatorics::ExternalAngle { num: 1, den: 2 });
        assert_eq!(Combinatorics::parse_angle("0").unwrap(), Combinatorics::ExternalAngle { num: 0, den: 1 });
        assert!(Combinatorics::parse_angle("1/0").is_err());
    }

    #[test]
    fn only_angle_zero_is_fixed() {
        let q = FamilyId::QuadraticC;
        assert_eq!(Combinatorics::angle(0, 1).unwrap().fixed_branch(q).unwrap(), 0);
        let third = Combinatorics::angle(1, 3).unwrap().fixed_branch(q).unwrap_err();
        assert!(matches!(third, Error::CombNotFixed(_)));
    }

    #[test]
    fn addresses_parse_and_bound() {
        let e = FamilyId::ExponentialLambda;
        assert_eq!(Combinatorics::parse_address("1, 1", 10).unwrap().fixed_branch(e).unwrap(), 1);
        assert!(matches!(
            Combinatorics::parse_address("0,1", 10).unwrap().fixed_branch(e),
            Err(Error::CombNotFixed(_))
        ));
        assert!(Combinatorics::parse_address("0;x", 10).is_err());
        assert!(Combinatorics::parse_address("11", 10).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let c = Combinatorics::address(vec![0], 10).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Combinatorics>(&s).unwrap(), c);
    }
}
