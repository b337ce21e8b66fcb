use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{pairing, DivisorClass, Rational, RootSystem};
use crate::weyl::{is_standard, orbit_e8, to_standard_form, WeylWord, GENERATORS};

/// Closed fundamental chamber: `m_1 >= ... >= m_8` and `2d >= m_1 + ... + m_4`.
pub fn in_fundamental_chamber(d: &DivisorClass) -> bool {
    is_standard(d)
}

/// Open chamber: `(D, alpha_i) > 0` for every simple root.
pub fn in_open_chamber(d: &DivisorClass) -> bool {
    (0..GENERATORS).all(|i| pairing(RootSystem::root(i), d).is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TitsVerdict {
    /// `word` carries the class into the closed fundamental chamber.
    Member(WeylWord),
    /// The reduction did not finish within the step budget. Never read this
    /// as a negative answer.
    Unknown { steps: usize },
}

pub fn in_tits_cone(d: &DivisorClass, max_steps: usize) -> TitsVerdict {
    match to_standard_form(d, max_steps) {
        Ok(r) => TitsVerdict::Member(r.word),
        Err(Error::StepLimitExceeded { steps }) => TitsVerdict::Unknown { steps },
        Err(e) => unreachable!("reduction only fails on the step cap: {e}"),
    }
}

/// `0 <= m_i <= d` for every `i`.
pub fn in_b(d: &DivisorClass) -> bool {
    d.m.iter().all(|m| !m.is_negative() && *m <= d.d)
}

/// `1 - (x, k)^2 / ((x, x) (k, k))` for the Euclidean form on coefficient
/// vectors and `k = (2; 1^8)`: the squared sine of the angle between the two
/// rays. Zero exactly on the ray of `-K/2`.
pub fn ray_proximity(x: &DivisorClass) -> Rational {
    let k = DivisorClass::half_anticanonical().coords();
    let c = x.coords();
    let dot = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    let xx = dot(&c, &c);
    assert!(!xx.is_zero(), "proximity of the zero class");
    let xk = dot(&c, &k);
    Rational::from_integer(1.into()) - &xk * &xk / (xx * dot(&k, &k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccumulationRow {
    pub degree: u32,
    /// Number of orbit elements of exactly this degree.
    pub count: usize,
    /// Largest [`ray_proximity`] among them.
    #[serde(serialize_with = "as_string")]
    pub max_distance: Rational,
}

fn as_string<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Per-degree maximum of [`ray_proximity`] over `W . E_8` up to `max_degree`.
/// Degrees with no orbit element are omitted.
pub fn accumulation_report(max_degree: u32) -> Result<Vec<AccumulationRow>> {
    if max_degree < 2 {
        return Err(Error::MalformedProblem(format!(
            "accumulation report needs max_degree >= 2, got {max_degree}"
        )));
    }
    let mut rows: BTreeMap<u32, (usize, Rational)> = BTreeMap::new();
    for x in orbit_e8(max_degree) {
        let deg: u32 = x.d.to_integer().try_into().expect("orbit degree fits u32");
        let p = ray_proximity(&x);
        let e = rows.entry(deg).or_insert((0, Rational::zero()));
        e.0 += 1;
        if p > e.1 {
            e.1 = p;
        }
    }
    Ok(rows
        .into_iter()
        .map(|(degree, (count, max_distance))| AccumulationRow {
            degree,
            count,
            max_distance,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use crate::weyl::DEFAULT_MAX_STEPS;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn chamber_examples() {
        assert!(in_fundamental_chamber(&DivisorClass::half_anticanonical()));
        assert!(in_fundamental_chamber(&DivisorClass::exceptional(8)));
        assert!(in_fundamental_chamber(&dc("1;1,0,0,0,0,0,0,0")));
        assert!(!in_fundamental_chamber(&dc("1;0,0,0,0,0,0,0,1")));
        assert!(!in_open_chamber(&DivisorClass::half_anticanonical()));
        assert!(in_open_chamber(&dc("20;8,7,6,5,4,3,2,1")));
        assert!(!in_open_chamber(&dc("13;8,7,6,5,4,3,2,1")));
    }

    #[test]
    fn tits_examples() {
        assert!(matches!(in_tits_cone(&dc("3;2,2,2,2,1,1,1,0"), DEFAULT_MAX_STEPS), TitsVerdict::Member(_)));
        assert_eq!(
            in_tits_cone(&DivisorClass::half_anticanonical(), DEFAULT_MAX_STEPS),
            TitsVerdict::Member(WeylWord::empty())
        );
        assert_eq!(in_tits_cone(&dc("-1;0,0,0,0,0,0,0,0"), 40), TitsVerdict::Unknown { steps: 40 });
    }

    #[test]
    fn b_examples() {
        assert!(in_b(&DivisorClass::hyperplane()));
        assert!(!in_b(&DivisorClass::exceptional(8)));
        assert!(in_b(&DivisorClass::half_anticanonical()));
        assert!(!in_b(&dc("1;2,0,0,0,0,0,0,0")));
    }

    #[test]
    fn proximity_values() {
        assert_eq!(ray_proximity(&DivisorClass::exceptional(1)), Rational::new(11.into(), 12.into()));
        assert_eq!(ray_proximity(&DivisorClass::half_anticanonical()), rat(0));
        let rows = accumulation_report(3).unwrap();
        let counts: Vec<(u32, usize)> = rows.iter().map(|r| (r.degree, r.count)).collect();
        assert_eq!(counts, vec![(0, 8), (1, 56), (2, 168), (3, 336)]);
        assert_eq!(rows[3].max_distance, Rational::new(47.into(), 336.into()));
        assert!(accumulation_report(1).is_err());
    }
}
