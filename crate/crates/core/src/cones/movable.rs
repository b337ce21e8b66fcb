use num_traits::{Signed, Zero};

use super::certificate::{Certificate, ConeTag};
use super::effective::{prelude, Prelude};
use super::{l_class, m_class, through};
use crate::error::{Error, Result};
use crate::lattice::{rat, DivisorClass, Rational, POINTS};
use crate::weyl::{to_standard_form, WeylWord};

/// Decomposes `(d; x_1, x_2, x_3)` with `0 <= x_i <= d` and
/// `x_1 + x_2 + x_3 <= 2d` over `H`, `H - E_i` and `H - E_i - E_j`.
fn three_point(d: &Rational, x: &[Rational; 3], out: &mut Vec<(DivisorClass, Rational)>) {
    let mut d = d.clone();
    let mut x = x.clone();
    loop {
        let support: Vec<usize> = (0..3).filter(|&i| !x[i].is_zero()).collect();
        match support.as_slice() {
            [] => {
                out.push((DivisorClass::hyperplane(), d));
                return;
            }
            [j] => {
                out.push((DivisorClass::hyperplane(), &d - &x[*j]));
                out.push((through(1, &[j + 1]), x[*j].clone()));
                return;
            }
            _ => {
                let k = (0..3).rev().min_by(|&a, &b| x[a].cmp(&x[b])).expect("three entries");
                let (i, j) = match k {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let c = [x[i].clone(), x[j].clone(), &d - &x[k]]
                    .into_iter()
                    .min()
                    .expect("three candidates");
                debug_assert!(c.is_positive());
                out.push((through(1, &[i + 1, j + 1]), c.clone()));
                d -= &c;
                x[i] -= &c;
                x[j] -= &c;
            }
        }
    }
}

/// Decomposes `d` over the translate `w . Pi` that contains it.
///
/// After reduction to standard form (word `w`), `D` lies in some `w . Pi`
/// exactly when `0 <= m_i <= d`. The certificate is written in the reduced
/// coordinates and carries `w`.
pub fn movable_decompose(d: &DivisorClass, max_steps: usize) -> Result<Certificate<DivisorClass>> {
    let not_movable = |reason: String| Error::NotMovable {
        class: Box::new(d.clone()),
        reason,
    };
    let (cur, scale) = match prelude(d) {
        Prelude::Rejected(r) => return Err(not_movable(r)),
        Prelude::OnRay(lambda) => {
            return Certificate::assemble(
                ConeTag::Movable,
                d.clone(),
                WeylWord::empty(),
                [(DivisorClass::half_anticanonical(), lambda)],
            )
        }
        Prelude::Scaled(c, s) => (c, s),
    };
    let red = to_standard_form(&cur, max_steps)?;
    let mut cur = red.standard;
    if let Some(i) = (0..POINTS).find(|&i| cur.m[i].is_negative()) {
        return Err(not_movable(format!(
            "reduces to {cur} with negative multiplicity at point {}",
            i + 1
        )));
    }
    if cur.m[0] > cur.d {
        return Err(not_movable(format!(
            "reduces to {cur} with multiplicity above the degree"
        )));
    }

    let mut raw: Vec<(DivisorClass, Rational)> = Vec::new();
    while cur.d < &cur.m[0] + &cur.m[3] {
        let a = (0..POINTS).rev().find(|&i| !cur.m[i].is_zero()).map_or(0, |i| i + 1);
        let m = m_class(a);
        raw.push((m.clone(), rat(1)));
        cur = &cur - &m;
    }
    let zero = Rational::zero();
    for i in 4..=POINTS {
        raw.push((l_class(i), &cur.m[i - 1] - cur.m.get(i).unwrap_or(&zero)));
    }
    let m4 = cur.m[3].clone();
    let x = [&cur.m[0] - &m4, &cur.m[1] - &m4, &cur.m[2] - &m4];
    three_point(&(&cur.d - &m4 * rat(2)), &x, &mut raw);

    let inv = Rational::from_integer(scale).recip();
    Certificate::assemble(
        ConeTag::Movable,
        d.clone(),
        red.word,
        raw.into_iter().map(|(g, c)| (g, c * &inv)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::GeneratorSets;
    use crate::weyl::{apply_word, DEFAULT_MAX_STEPS};

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    fn pairs(d: &str) -> Vec<(DivisorClass, Rational)> {
        movable_decompose(&dc(d), DEFAULT_MAX_STEPS)
            .unwrap()
            .terms
            .into_iter()
            .map(|t| (t.generator, t.coeff))
            .collect()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            pairs("3;1,1,1,1,1,1,1,1"),
            vec![(l_class(8), rat(1)), (DivisorClass::hyperplane(), rat(1))]
        );
        assert_eq!(pairs("3;3,1,1,1,0,0,0,0"), vec![(m_class(4), rat(1))]);
        assert!(matches!(
            movable_decompose(&dc("1;1,1,1,0,0,0,0,0"), DEFAULT_MAX_STEPS),
            Err(Error::NotMovable { .. })
        ));
        assert!(matches!(
            movable_decompose(&dc("0;0,0,0,0,0,0,0,-1"), DEFAULT_MAX_STEPS),
            Err(Error::NotMovable { .. })
        ));
    }

    #[test]
    fn generators_decompose_as_themselves() {
        for g in &GeneratorSets::get().pi_gens {
            let c = movable_decompose(g, DEFAULT_MAX_STEPS).unwrap();
            assert_eq!(c.terms.len(), 1, "{g}");
            assert_eq!(c.terms[0].coeff, rat(1));
            assert_eq!(apply_word(&c.word.inverse(), &c.terms[0].generator), *g);
        }
    }

    #[test]
    fn three_point_cases() {
        for s in ["2;1,1,1,0,0,0,0,0", "4;3,2,2,0,0,0,0,0", "5;1,0,0,0,0,0,0,0", "6;5,4,3,0,0,0,0,0"] {
            let c = movable_decompose(&dc(s), DEFAULT_MAX_STEPS).unwrap();
            assert!(c.word.is_empty());
            assert_eq!(c.resum(), dc(s).coords().to_vec());
        }
    }

    #[test]
    fn rational_and_permuted_inputs() {
        let d = dc("5/2;1/2,0,3/2,1/2,1/2,1/2,1/2,1");
        let c = movable_decompose(&d, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(c.resum(), apply_word(&c.word, &d).coords().to_vec());
    }
}
