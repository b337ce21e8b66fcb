//! The lattice of the surface `Q` in `|-K_X/2|`: a quadric blown up at eight
//! points, with basis the two rulings `l_1, l_2` and the exceptional curves
//! `e_1..e_8`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, POINTS};

/// `a_1 l_1 + a_2 l_2 - sum n_i e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceClass {
    pub a1: BigInt,
    pub a2: BigInt,
    pub n: [BigInt; POINTS],
}

impl SurfaceClass {
    pub fn new(a1: BigInt, a2: BigInt, n: [BigInt; POINTS]) -> Self {
        SurfaceClass { a1, a2, n }
    }

    pub fn from_ints(a1: i64, a2: i64, n: [i64; POINTS]) -> Self {
        SurfaceClass::new(a1.into(), a2.into(), n.map(BigInt::from))
    }

    /// `-K_Q = 2 l_1 + 2 l_2 - sum e_i`.
    pub fn anticanonical() -> Self {
        SurfaceClass::from_ints(2, 2, [1; POINTS])
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};", self.a1, self.a2)?;
        for (i, x) in self.n.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for SurfaceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |r: &str| Error::parse("surface class", s, r);
        let (head, tail) = s.split_once(';').ok_or_else(|| err("missing ';'"))?;
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| err(&format!("bad integer {:?}", t.trim())));
        let a: Vec<BigInt> = head.split(',').map(int).collect::<Result<_>>()?;
        let n: Vec<BigInt> = tail.split(',').map(int).collect::<Result<_>>()?;
        let [a1, a2]: [BigInt; 2] = a.try_into().map_err(|_| err("expected two ruling coefficients"))?;
        let n: [BigInt; POINTS] = n.try_into().map_err(|_| err("expected eight multiplicities"))?;
        Ok(SurfaceClass { a1, a2, n })
    }
}

/// `(d; m) -> d (l_1 + l_2) - sum m_i e_i`.
pub fn restrict_to_q(d: &DivisorClass) -> Result<SurfaceClass> {
    if !d.is_integral() {
        return Err(Error::NotIntegral(Box::new(d.clone())));
    }
    let deg = d.d.to_integer();
    Ok(SurfaceClass {
        a1: deg.clone(),
        a2: deg,
        n: std::array::from_fn(|i| d.m[i].to_integer()),
    })
}

/// `l_1 . l_2 = 1`, `l_k^2 = 0`, `e_i . e_j = -delta_ij`.
pub fn surface_pairing(x: &SurfaceClass, y: &SurfaceClass) -> BigInt {
    &x.a1 * &y.a2 + &x.a2 * &y.a1 - x.n.iter().zip(&y.n).map(|(p, q)| p * q).sum::<BigInt>()
}

/// `G^2 = -1` and `-K_Q . G = 1`.
pub fn is_minus_one_curve(g: &SurfaceClass) -> bool {
    surface_pairing(g, g) == BigInt::from(-1) && surface_pairing(&SurfaceClass::anticanonical(), g) == BigInt::from(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{dq_numbers, rat};
    use crate::weyl::orbit_e8;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn restriction_examples() {
        assert_eq!(restrict_to_q(&DivisorClass::hyperplane()).unwrap(), SurfaceClass::from_ints(1, 1, [0; 8]));
        assert_eq!(
            restrict_to_q(&DivisorClass::exceptional(5)).unwrap(),
            SurfaceClass::from_ints(0, 0, [0, 0, 0, 0, -1, 0, 0, 0])
        );
        assert_eq!(restrict_to_q(&DivisorClass::half_anticanonical()).unwrap(), SurfaceClass::anticanonical());
        assert!(restrict_to_q(&dc("1/2;0,0,0,0,0,0,0,0")).is_err());
    }

    #[test]
    fn pairing_examples() {
        let l1 = SurfaceClass::from_ints(1, 0, [0; 8]);
        let l2 = SurfaceClass::from_ints(0, 1, [0; 8]);
        assert_eq!(surface_pairing(&l1, &l2), 1.into());
        assert_eq!(surface_pairing(&l1, &l1), 0.into());
        let e3 = SurfaceClass::from_ints(0, 0, [0, 0, -1, 0, 0, 0, 0, 0]);
        assert_eq!(surface_pairing(&e3, &e3), (-1).into());
        let k = SurfaceClass::anticanonical();
        assert_eq!(surface_pairing(&k, &k), 0.into());
    }

    #[test]
    fn minus_one_curves() {
        assert!(is_minus_one_curve(&restrict_to_q(&DivisorClass::exceptional(8)).unwrap()));
        assert!(is_minus_one_curve(&restrict_to_q(&dc("1;1,1,1,0,0,0,0,0")).unwrap()));
        assert!(!is_minus_one_curve(&restrict_to_q(&DivisorClass::half_anticanonical()).unwrap()));
    }

    #[test]
    fn restriction_matches_intersection_numbers() {
        let orbit = orbit_e8(2);
        let mut seen = std::collections::HashSet::new();
        for x in &orbit {
            let r = restrict_to_q(x).unwrap();
            let (dq2, d2q) = dq_numbers(x);
            assert_eq!(rat(1) * crate::lattice::Rational::from_integer(surface_pairing(&r, &r)), dq2);
            assert_eq!(
                crate::lattice::Rational::from_integer(surface_pairing(&SurfaceClass::anticanonical(), &r)),
                d2q
            );
            assert!(seen.insert(r));
        }
    }

    #[test]
    fn text_form() {
        let s = SurfaceClass::from_ints(2, 2, [1; 8]);
        assert_eq!(s.to_string(), "2,2;1,1,1,1,1,1,1,1");
        assert_eq!(s.to_string().parse::<SurfaceClass>().unwrap(), s);
        assert!("1;0".parse::<SurfaceClass>().is_err());
    }
}
