//! The Weyl group `W = <s_0, ..., s_7>` acting on divisor classes.
//!
//! `s_1..s_7` permute adjacent points and `s_0` is the standard Cremona
//! transformation centred at `p_1..p_4`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{pairing, rat, DivisorClass, Rational, RootSystem, POINTS};

/// Default cap on Cremona applications during reduction.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// Number of simple reflections.
pub const GENERATORS: usize = 8;

/// A product of simple reflections, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct WeylWord(Vec<u8>);

impl WeylWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| usize::from(l) >= GENERATORS) {
            return Err(Error::IndexOutOfRange(bad.into()));
        }
        Ok(WeylWord(letters))
    }

    pub fn empty() -> Self {
        WeylWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: u8) {
        assert!(usize::from(letter) < GENERATORS);
        self.0.push(letter);
    }

    pub fn extend(&mut self, other: &WeylWord) {
        self.0.extend_from_slice(&other.0);
    }

    /// The inverse element; every letter is an involution.
    pub fn inverse(&self) -> Self {
        WeylWord(self.0.iter().rev().copied().collect())
    }

    /// Number of `s_0` letters.
    pub fn cremona_count(&self) -> usize {
        self.0.iter().filter(|&&l| l == 0).count()
    }
}

impl TryFrom<Vec<u8>> for WeylWord {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        WeylWord::new(v)
    }
}

impl From<WeylWord> for Vec<u8> {
    fn from(w: WeylWord) -> Vec<u8> {
        w.0
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for WeylWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(WeylWord::empty());
        }
        let letters = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::parse("Weyl word", s, format!("bad letter {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeylWord::new(letters)
    }
}

/// `s_i(D) = D + (alpha_i, D) * alpha_i`.
pub fn reflect(i: usize, d: &DivisorClass) -> Result<DivisorClass> {
    if i >= GENERATORS {
        return Err(Error::IndexOutOfRange(i));
    }
    let alpha = RootSystem::root(i);
    let c = pairing(alpha, d);
    Ok(d + &alpha.scale(&c))
}

fn check_index_set(set: &[usize]) -> Result<()> {
    let distinct: BTreeSet<usize> = set.iter().copied().collect();
    if set.len() != 4 || distinct.len() != 4 || set.iter().any(|i| !(1..=POINTS).contains(i)) {
        return Err(Error::MalformedIndexSet(set.to_vec()));
    }
    Ok(())
}

/// The Cremona transformation `phi_I` centred at the four points in `set`
/// (1-based): with `t = 2d - sum_{j in I} m_j`, degree and the four
/// multiplicities in `I` all shift by `t`.
pub fn cremona(set: &[usize], d: &DivisorClass) -> Result<DivisorClass> {
    check_index_set(set)?;
    let t = cremona_defect(set, d);
    let mut out = d.clone();
    out.d += &t;
    for &i in set {
        out.m[i - 1] += &t;
    }
    Ok(out)
}

/// `t = 2d - sum_{j in I} m_j`; negative exactly when `phi_I` lowers the degree.
pub fn cremona_defect(set: &[usize], d: &DivisorClass) -> Rational {
    let mut t = rat(2) * &d.d;
    for &i in set {
        t -= &d.m[i - 1];
    }
    t
}

/// In-place action of one letter. Agrees with [`reflect`].
pub(crate) fn act(letter: u8, d: &mut DivisorClass) {
    match letter {
        0 => {
            let t = rat(2) * &d.d - &d.m[0] - &d.m[1] - &d.m[2] - &d.m[3];
            if !t.is_zero() {
                d.d += &t;
                for x in &mut d.m[..4] {
                    *x += &t;
                }
            }
        }
        l => d.m.swap(usize::from(l) - 1, usize::from(l)),
    }
}

pub fn apply_word(w: &WeylWord, d: &DivisorClass) -> DivisorClass {
    let mut out = d.clone();
    for &l in w.letters() {
        act(l, &mut out);
    }
    out
}

/// True iff `m_1 >= ... >= m_8` and `2d >= m_1 + m_2 + m_3 + m_4`.
pub fn is_standard(d: &DivisorClass) -> bool {
    d.m.windows(2).all(|w| w[0] >= w[1]) && cremona_defect(&[1, 2, 3, 4], d) >= Rational::zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub standard: DivisorClass,
    /// `apply_word(&word, input) == standard`.
    pub word: WeylWord,
    /// Number of Cremona applications.
    pub steps: usize,
}

/// Sorts multiplicities descending with adjacent transpositions. Stable, so
/// equal multiplicities keep their index order.
pub(crate) fn sort_descending(d: &mut DivisorClass, word: &mut WeylWord) {
    loop {
        let mut swapped = false;
        for i in 0..POINTS - 1 {
            if d.m[i] < d.m[i + 1] {
                d.m.swap(i, i + 1);
                word.push((i + 1) as u8);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

/// Brings `d` into standard form by alternating sorting and Cremona
/// transformations at the four largest multiplicities.
pub fn to_standard_form(d: &DivisorClass, max_steps: usize) -> Result<ReductionResult> {
    let mut cur = d.clone();
    let mut word = WeylWord::empty();
    let mut steps = 0;
    loop {
        sort_descending(&mut cur, &mut word);
        if cremona_defect(&[1, 2, 3, 4], &cur) >= Rational::zero() {
            break;
        }
        if steps >= max_steps {
            return Err(Error::StepLimitExceeded { steps });
        }
        act(0, &mut cur);
        word.push(0);
        steps += 1;
    }
    debug_assert!(is_standard(&cur));
    Ok(ReductionResult {
        standard: cur,
        word,
        steps,
    })
}

type IntClass = [i64; POINTS + 1];

fn act_int(letter: u8, v: &IntClass) -> Option<IntClass> {
    let mut out = *v;
    if letter == 0 {
        let t = v[1..=4]
            .iter()
            .try_fold(v[0].checked_mul(2)?, |acc, &x| acc.checked_sub(x))?;
        out[0] = out[0].checked_add(t)?;
        for x in &mut out[1..=4] {
            *x = x.checked_add(t)?;
        }
    } else {
        let l = usize::from(letter);
        out.swap(l, l + 1);
    }
    Some(out)
}

fn int_to_class(v: &IntClass) -> DivisorClass {
    DivisorClass::from_ints(v[0], std::array::from_fn(|i| v[i + 1]))
}

/// All classes of `W . E_8` of degree at most `max_degree`.
///
/// Breadth-first closure of `{E_1, ..., E_8}` under the simple reflections,
/// discarding anything above the bound. Every orbit element reduces to some
/// `E_k` through steps that never raise the degree, so the pruned search
/// still reaches every element below the bound.
pub fn orbit_e8(max_degree: u32) -> BTreeSet<DivisorClass> {
    let bound = i64::from(max_degree);
    let start: Vec<IntClass> = (0..POINTS)
        .map(|i| {
            let mut v = [0; POINTS + 1];
            v[i + 1] = -1;
            v
        })
        .collect();
    let mut seen: HashSet<IntClass> = start.iter().copied().collect();
    let mut frontier = start;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for letter in 0..GENERATORS as u8 {
                let w = act_int(letter, v).expect("orbit coordinates overflow i64");
                if w[0] <= bound && seen.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    seen.iter().map(int_to_class).collect()
}

/// Decides whether an integral class lies in `W . E_8`. On success returns
/// a word carrying `d` to `E_8`.
pub fn is_minus_one_divisor(d: &DivisorClass, max_steps: usize) -> Result<Option<WeylWord>> {
    if !d.is_integral() {
        return Err(Error::NotIntegral(Box::new(d.clone())));
    }
    // (D,D) = -1 and (D, -K/2) = 1 hold on the whole orbit.
    if pairing(d, d) != rat(-1) || pairing(d, &DivisorClass::half_anticanonical()) != rat(1) {
        return Ok(None);
    }
    let red = to_standard_form(d, max_steps)?;
    Ok((red.standard == DivisorClass::exceptional(POINTS)).then_some(red.word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn reflection_examples() {
        let h = DivisorClass::hyperplane();
        assert_eq!(reflect(0, &h).unwrap(), dc("3;2,2,2,2,0,0,0,0"));
        assert_eq!(reflect(7, &dc("0;0,0,0,0,0,0,0,1")).unwrap(), dc("0;0,0,0,0,0,0,1,0"));
        let q = DivisorClass::half_anticanonical();
        assert_eq!(reflect(0, &q).unwrap(), q);
        assert_eq!(reflect(8, &q), Err(Error::IndexOutOfRange(8)));
    }

    #[test]
    fn cremona_examples() {
        let h = DivisorClass::hyperplane();
        assert_eq!(cremona(&[1, 2, 3, 4], &h).unwrap(), dc("3;2,2,2,2,0,0,0,0"));
        assert_eq!(
            cremona(&[5, 6, 7, 8], &dc("1;0,0,0,0,1,1,1,0")).unwrap(),
            DivisorClass::exceptional(8)
        );
        let fixed = dc("2;1,1,1,1,0,0,0,0");
        assert_eq!(cremona(&[1, 2, 3, 4], &fixed).unwrap(), fixed);
        assert!(cremona(&[1, 2, 3], &h).is_err());
        assert!(cremona(&[1, 2, 3, 3], &h).is_err());
        assert!(cremona(&[0, 2, 3, 4], &h).is_err());
        assert!(cremona(&[1, 2, 3, 9], &h).is_err());
    }

    #[test]
    fn word_examples() {
        let d = dc("3;1,2,0,1,0,0,5,1/2");
        assert_eq!(apply_word(&WeylWord::empty(), &d), d);
        let h = DivisorClass::hyperplane();
        assert_eq!(apply_word(&"0,0".parse().unwrap(), &h), h);
        let w: WeylWord = "7,6".parse().unwrap();
        assert_eq!(apply_word(&w, &DivisorClass::exceptional(8)), DivisorClass::exceptional(6));
        assert_eq!(w.to_string(), "7,6");
        assert!("0,8".parse::<WeylWord>().is_err());
        assert_eq!("".parse::<WeylWord>().unwrap(), WeylWord::empty());
    }

    #[test]
    fn letter_action_matches_reflection() {
        let d = dc("5;3,-1,2,2/3,0,1,4,-2");
        for i in 0..8u8 {
            let mut x = d.clone();
            act(i, &mut x);
            assert_eq!(x, reflect(i.into(), &d).unwrap());
        }
    }

    #[test]
    fn reduction_examples() {
        let r = to_standard_form(&dc("3;2,2,2,2,1,1,1,0"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(r.standard, DivisorClass::exceptional(8));
        assert_eq!(r.steps, 2);
        assert_eq!(apply_word(&r.word, &dc("3;2,2,2,2,1,1,1,0")), r.standard);

        let q = DivisorClass::half_anticanonical();
        let r = to_standard_form(&q, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!((r.standard, r.steps, r.word.len()), (q, 0, 0));

        // t = 8 - 9 = -1, then re-sort
        let r = to_standard_form(&dc("4;3,2,2,2,1,0,0,0"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(r.standard, dc("3;2,1,1,1,1,0,0,0"));
        assert_eq!(r.steps, 1);
    }

    #[test]
    fn reduction_of_minus_h_hits_step_cap() {
        let minus_h = -&DivisorClass::hyperplane();
        assert_eq!(
            to_standard_form(&minus_h, 50),
            Err(Error::StepLimitExceeded { steps: 50 })
        );
    }

    #[test]
    fn reduction_accepts_rationals() {
        let d = dc("3/2;1,1,1,1,1/2,1/2,1/2,0");
        let r = to_standard_form(&d, DEFAULT_MAX_STEPS).unwrap();
        assert!(is_standard(&r.standard));
        assert_eq!(apply_word(&r.word, &d), r.standard);
        assert_eq!(r.standard, DivisorClass::exceptional(8).scale(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn small_orbits() {
        let o0 = orbit_e8(0);
        assert_eq!(o0.len(), 8);
        assert!((1..=8).all(|i| o0.contains(&DivisorClass::exceptional(i))));
        let o2 = orbit_e8(2);
        assert_eq!(o2.len(), 232);
        let shapes: BTreeSet<DivisorClass> = o2.iter().map(DivisorClass::shape).collect();
        let want: BTreeSet<DivisorClass> = [
            "0;0,0,0,0,0,0,0,-1",
            "1;1,1,1,0,0,0,0,0",
            "2;2,1,1,1,1,1,0,0",
        ]
        .iter()
        .map(|s| dc(s))
        .collect();
        assert_eq!(shapes, want);
    }

    #[test]
    fn minus_one_examples() {
        let e3 = DivisorClass::exceptional(3);
        let w = is_minus_one_divisor(&e3, DEFAULT_MAX_STEPS).unwrap().unwrap();
        assert_eq!(w.cremona_count(), 0);
        assert_eq!(apply_word(&w, &e3), DivisorClass::exceptional(8));

        let plane = dc("1;1,1,1,0,0,0,0,0");
        let w = is_minus_one_divisor(&plane, DEFAULT_MAX_STEPS).unwrap().unwrap();
        assert_eq!(w.cremona_count(), 1);
        assert_eq!(apply_word(&w, &plane), DivisorClass::exceptional(8));

        let q = DivisorClass::half_anticanonical();
        assert_eq!(is_minus_one_divisor(&q, DEFAULT_MAX_STEPS).unwrap(), None);
        // right numbers, wrong orbit: E_1 + E_2 - E_3 has (D,D) = -3
        assert_eq!(is_minus_one_divisor(&dc("0;-1,-1,1,0,0,0,0,0"), 10).unwrap(), None);
        assert!(is_minus_one_divisor(&dc("1/2;0,0,0,0,0,0,0,0"), 10).is_err());
    }

    #[test]
    fn standard_form_is_idempotent() {
        for s in ["3;2,2,2,2,1,1,1,0", "7;3,3,2,2,2,1,1,0", "9;-1,0,4,4,4,4,4,4"] {
            let r = to_standard_form(&dc(s), DEFAULT_MAX_STEPS).unwrap();
            let again = to_standard_form(&r.standard, DEFAULT_MAX_STEPS).unwrap();
            assert_eq!(again.steps, 0);
            assert!(again.word.is_empty());
            assert_eq!(again.standard, r.standard);
        }
    }
}
