use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::certificate::{Certificate, ConeTag};
use super::GeneratorSets;
use crate::error::{Error, Result};
use crate::lattice::{curve_intersection, rat, CurveClass, DivisorClass, Rational, POINTS};
use crate::weyl::{sort_descending, WeylWord};

/// Index of the largest entry among `b[i]` with `i` not in `skip`; ties go to
/// the smallest index.
fn argmax(b: &[BigInt; POINTS], skip: Option<usize>) -> usize {
    let mut best: Option<usize> = None;
    for i in 0..POINTS {
        if Some(i) == skip {
            continue;
        }
        if best.is_none_or(|j| b[i] > b[j]) {
            best = Some(i);
        }
    }
    best.expect("at least one index")
}

/// Writes a curve class as a non-negative integer combination of the
/// exceptional lines `e_i` and the lines `l_ij`.
///
/// Positive `e_i` coefficients are split off first. What remains is
/// `a*h - sum b_i e_i` with `b_i >= 0`, which must satisfy `a >= b_i` and
/// `2a >= sum b_i`; lines through the two largest multiplicities are peeled
/// off until one of the closed-form cases is reached.
pub fn curve_decompose(k: &CurveClass) -> Result<Certificate<CurveClass>> {
    let violated = |which: String| Error::HypothesisViolated {
        class: Box::new(k.clone()),
        which,
    };
    let mut terms: Vec<(CurveClass, Rational)> = Vec::new();
    let mut a = k.a.clone();
    let mut b = k.multiplicities();
    for i in 0..POINTS {
        if b[i].is_negative() {
            terms.push((CurveClass::exceptional_line(i + 1), Rational::from_integer(-&b[i])));
            b[i] = BigInt::zero();
        }
    }
    if a.is_negative() {
        return Err(violated("a >= 0".into()));
    }
    if let Some(i) = (0..POINTS).find(|&i| b[i] > a) {
        return Err(violated(format!("a >= b_{}", i + 1)));
    }
    if BigInt::from(2) * &a < b.iter().sum::<BigInt>() {
        return Err(violated("2a >= sum b_i".into()));
    }

    let line = |i: usize, j: usize| CurveClass::line_through(i + 1, j + 1);
    while a.is_positive() {
        let support = b.iter().filter(|x| x.is_positive()).count();
        match support {
            0 => {
                let c = Rational::from_integer(a.clone());
                terms.push((CurveClass::exceptional_line(1), c.clone()));
                terms.push((CurveClass::exceptional_line(2), c.clone()));
                terms.push((line(0, 1), c));
                a = BigInt::zero();
            }
            1 => {
                let i = argmax(&b, None);
                let other = if i == 0 { 1 } else { 0 };
                let c = Rational::from_integer(a.clone());
                terms.push((CurveClass::exceptional_line(i + 1), Rational::from_integer(&a - &b[i])));
                terms.push((CurveClass::exceptional_line(other + 1), c.clone()));
                terms.push((line(i.min(other), i.max(other)), c));
                a = BigInt::zero();
                b[i] = BigInt::zero();
            }
            _ => {
                let i1 = argmax(&b, None);
                let i2 = argmax(&b, Some(i1));
                terms.push((line(i1.min(i2), i1.max(i2)), rat(1)));
                a -= 1;
                b[i1] -= 1;
                b[i2] -= 1;
            }
        }
    }
    debug_assert!(b.iter().all(Zero::is_zero));
    Certificate::assemble(ConeTag::Curves, k.clone(), WeylWord::empty(), terms)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NefVerdict {
    Nef,
    /// `witness` is a generator of the cone of curves with `D . witness = value < 0`.
    NotNef { witness: CurveClass, value: Rational },
}

impl NefVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, NefVerdict::Nef)
    }
}

/// Tests `D` against all 36 generators of the cone of curves.
pub fn is_nef(d: &DivisorClass) -> NefVerdict {
    for g in &GeneratorSets::get().curve_gens {
        let value = curve_intersection(d, g);
        if value.is_negative() {
            return NefVerdict::NotNef {
                witness: g.clone(),
                value,
            };
        }
    }
    NefVerdict::Nef
}

/// Decomposes a nef class over `H`, `H - E_i` and the classes `(2; 1^J)`.
///
/// With `m` sorted descending,
/// `D = (d-m1-m2) H + (m1-m2)(H-E1) + sum_{i>=2} (m_i - m_{i+1}) (2; 1^i)`,
/// where `(2; 1^2)` is written as `(H-E1) + (H-E2)`.
pub fn nef_decompose(d: &DivisorClass) -> Result<Certificate<DivisorClass>> {
    if let NefVerdict::NotNef { witness, .. } = is_nef(d) {
        return Err(Error::NotNef {
            class: Box::new(d.clone()),
            witness: Box::new(witness),
        });
    }
    let mut sorted = d.clone();
    let mut word = WeylWord::empty();
    sort_descending(&mut sorted, &mut word);
    let m = &sorted.m;
    let zero = Rational::zero();
    let next = |i: usize| m.get(i + 1).unwrap_or(&zero);

    let h = DivisorClass::hyperplane();
    let h_minus = |i: usize| &DivisorClass::hyperplane() - &DivisorClass::exceptional(i);
    let mut terms = vec![
        (h, &sorted.d - &m[0] - &m[1]),
        (h_minus(1), &m[0] - &m[1]),
    ];
    let c2 = &m[1] - next(1);
    terms.push((h_minus(1), c2.clone()));
    terms.push((h_minus(2), c2));
    for i in 3..=POINTS {
        terms.push((DivisorClass::uniform(2, i), &m[i - 1] - next(i - 1)));
    }

    // back to the original labelling of the points
    let back = word.inverse();
    let terms = terms
        .into_iter()
        .map(|(g, c)| (crate::weyl::apply_word(&back, &g), c));
    Certificate::assemble(ConeTag::Nef, d.clone(), WeylWord::empty(), terms)
}
