use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::certificate::{Certificate, ConeTag};
use super::m_class;
use crate::error::{Error, Result};
use crate::lattice::{pairing, rat, DivisorClass, Rational, POINTS};
use crate::weyl::{apply_word, to_standard_form, WeylWord};

/// Shared prelude of the effective and movable decomposers: scales `d` to an
/// integral class and disposes of the classes with `(D, -K/2) <= 0`.
///
/// Every effective generator meets `-K/2` positively except `-K/2` itself,
/// which is isotropic. So `(D, -K/2) < 0` rules `D` out, and
/// `(D, -K/2) = 0` forces `D` onto the ray of `-K/2`.
pub(crate) enum Prelude {
    /// `D = lambda * (-K/2)` with `lambda >= 0`.
    OnRay(Rational),
    Rejected(String),
    /// The integral class `s * D` together with `s`.
    Scaled(DivisorClass, BigInt),
}

pub(crate) fn prelude(d: &DivisorClass) -> Prelude {
    let q = DivisorClass::half_anticanonical();
    let p = pairing(d, &q);
    if p.is_negative() {
        return Prelude::Rejected(format!("(D, -K/2) = {p} < 0"));
    }
    if p.is_zero() {
        let lambda = &d.d / rat(2);
        if !lambda.is_negative() && *d == q.scale(&lambda) {
            return Prelude::OnRay(lambda);
        }
        return Prelude::Rejected("(D, -K/2) = 0 off the ray of -K/2".into());
    }
    let s = d.denominator();
    Prelude::Scaled(d.scale(&Rational::from_integer(s.clone())), s)
}

/// `(2; 1^k)` for `4 <= k <= 8` as a sum of effective generators.
fn l_expansion(k: usize) -> Vec<DivisorClass> {
    let q = DivisorClass::half_anticanonical();
    match k {
        8 => vec![q],
        7 => vec![q, DivisorClass::exceptional(8)],
        _ => {
            let mut v = vec![
                DivisorClass::from_ints(2, [2, 1, 1, 1, 1, 1, 0, 0]),
                DivisorClass::exceptional(1),
            ];
            v.extend((k + 1..=6).map(DivisorClass::exceptional));
            v
        }
    }
}

/// `(3; 3, 1^(a-1))` for `4 <= a <= 8` as a sum of effective generators.
fn m_expansion(a: usize) -> Vec<DivisorClass> {
    let mut v = vec![
        DivisorClass::from_ints(2, [2, 1, 1, 1, 1, 1, 0, 0]),
        DivisorClass::from_ints(1, [1, 0, 0, 0, 0, 0, 1, 1]),
    ];
    v.extend((a + 1..=POINTS).map(DivisorClass::exceptional));
    v
}

/// Decomposes `d` over `W . E_8` and `-K/2`.
///
/// The class is reduced to standard form; negative multiplicities are split
/// off as exceptional divisors and the rest re-reduced, until
/// `0 <= m_i <= d`. Copies of `(3; 3, 1^(a-1))` are removed while
/// `d < m_1 + m_4`, after which
/// `D = sum_{i>=4} (m_i - m_{i+1}) (2; 1^i) + D'` with `D'` supported on
/// three points. Every generator is carried back to the coordinates of the
/// input, so the certificate has an empty word.
///
/// A standard-form class with `d < 0` or `m_1 > d` is rejected: it meets the
/// line class `h`, respectively the movable curve `h - e_1`, negatively.
pub fn effective_decompose(d: &DivisorClass, max_steps: usize) -> Result<Certificate<DivisorClass>> {
    let not_effective = |reason: String| Error::NotEffective {
        class: Box::new(d.clone()),
        reason,
    };
    let (mut cur, scale) = match prelude(d) {
        Prelude::Rejected(r) => return Err(not_effective(r)),
        Prelude::OnRay(lambda) => {
            return Certificate::assemble(
                ConeTag::Effective,
                d.clone(),
                WeylWord::empty(),
                [(DivisorClass::half_anticanonical(), lambda)],
            )
        }
        Prelude::Scaled(c, s) => (c, s),
    };

    let mut word = WeylWord::empty();
    let mut raw: Vec<(DivisorClass, Rational)> = Vec::new();
    let mut emit = |word: &WeylWord, g: DivisorClass, c: Rational| {
        raw.push((apply_word(&word.inverse(), &g), c));
    };

    loop {
        let red = to_standard_form(&cur, max_steps)?;
        word.extend(&red.word);
        cur = red.standard;
        if cur.d.is_negative() {
            return Err(not_effective(format!("reduces to {cur} of negative degree")));
        }
        if cur.m[0] > cur.d {
            return Err(not_effective(format!(
                "reduces to {cur}, which meets the movable curve h - e_1 negatively"
            )));
        }
        let negatives: Vec<usize> = (0..POINTS).filter(|&i| cur.m[i].is_negative()).collect();
        if !negatives.is_empty() {
            for i in negatives {
                emit(&word, DivisorClass::exceptional(i + 1), -cur.m[i].clone());
                cur.m[i] = Rational::zero();
            }
            continue;
        }
        if cur.d < &cur.m[0] + &cur.m[3] {
            let a = (0..POINTS).rev().find(|&i| !cur.m[i].is_zero()).map_or(0, |i| i + 1);
            debug_assert!(a >= 4);
            for g in m_expansion(a) {
                emit(&word, g, rat(1));
            }
            cur = &cur - &m_class(a);
            continue;
        }
        break;
    }

    // Step 1: the tail (2; 1^i) pieces.
    let zero = Rational::zero();
    for i in 4..=POINTS {
        let c = &cur.m[i - 1] - cur.m.get(i).unwrap_or(&zero);
        if c.is_zero() {
            continue;
        }
        for g in l_expansion(i) {
            emit(&word, g, c.clone());
        }
    }
    // D' = d'(H - E1 - E2 - E3) + sum_j (d' - m'_j) E_j
    let m4 = cur.m[3].clone();
    let dp = &cur.d - &m4 * rat(2);
    emit(&word, DivisorClass::from_ints(1, [1, 1, 1, 0, 0, 0, 0, 0]), dp.clone());
    for j in 0..3 {
        let c = &dp - (&cur.m[j] - &m4);
        emit(&word, DivisorClass::exceptional(j + 1), c);
    }

    let inv = Rational::from_integer(scale).recip();
    Certificate::assemble(
        ConeTag::Effective,
        d.clone(),
        WeylWord::empty(),
        raw.into_iter().map(|(g, c)| (g, c * &inv)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::GeneratorClass;
    use crate::weyl::DEFAULT_MAX_STEPS;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    fn pairs(d: &str) -> Vec<(DivisorClass, Rational)> {
        effective_decompose(&dc(d), DEFAULT_MAX_STEPS)
            .unwrap()
            .terms
            .into_iter()
            .map(|t| (t.generator, t.coeff))
            .collect()
    }

    #[test]
    fn expansions_resum() {
        for k in 4..=8 {
            let s = l_expansion(k).iter().fold(DivisorClass::zero(), |acc, g| &acc + g);
            assert_eq!(s, DivisorClass::uniform(2, k));
        }
        for a in 4..=8 {
            let s = m_expansion(a).iter().fold(DivisorClass::zero(), |acc, g| &acc + g);
            assert_eq!(s, m_class(a));
        }
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            pairs("2;1,1,1,1,1,1,1,0"),
            vec![(DivisorClass::half_anticanonical(), rat(1)), (DivisorClass::exceptional(8), rat(1))]
        );
        assert_eq!(
            pairs("3;3,1,1,1,1,1,1,1"),
            vec![(dc("2;2,1,1,1,1,1,0,0"), rat(1)), (dc("1;1,0,0,0,0,0,1,1"), rat(1))]
        );
        assert_eq!(pairs("0;0,0,0,0,-1,0,0,0"), vec![(DivisorClass::exceptional(5), rat(1))]);
        assert_eq!(
            pairs("2;1,1,1,1,1,1,1,1"),
            vec![(DivisorClass::half_anticanonical(), rat(1))]
        );
        assert_eq!(pairs("3;2,2,2,2,1,1,1,0").len(), 1);
    }

    #[test]
    fn rejections() {
        for s in ["-1;0,0,0,0,0,0,0,0", "1;2,0,0,0,0,0,0,0", "0;0,0,0,0,0,0,0,1", "2;1,1,1,1,1,1,2,0"] {
            assert!(
                matches!(effective_decompose(&dc(s), DEFAULT_MAX_STEPS), Err(Error::NotEffective { .. })),
                "{s}"
            );
        }
    }

    #[test]
    fn ray_and_rational_inputs() {
        let c = effective_decompose(&dc("3;3/2,3/2,3/2,3/2,3/2,3/2,3/2,3/2"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(c.terms.len(), 1);
        assert_eq!(c.terms[0].coeff, Rational::new(3.into(), 2.into()));
        let c = effective_decompose(&dc("1/2;1/2,0,0,0,0,0,0,0"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(c.resum(), dc("1/2;1/2,0,0,0,0,0,0,0").coords().to_vec());
    }

    #[test]
    fn every_generator_is_effective() {
        for s in ["7;3,3,2,2,2,1,1,0", "5;4,1,1,1,1,1,1,1", "6;1,2,3,4,1,2,3,4", "4;0,0,0,0,0,0,0,0"] {
            let c = effective_decompose(&dc(s), DEFAULT_MAX_STEPS).unwrap();
            for t in &c.terms {
                assert!(t.generator.belongs_to(ConeTag::Effective), "{}", t.generator);
            }
        }
    }

}
