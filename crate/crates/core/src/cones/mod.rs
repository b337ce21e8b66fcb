//! Membership and decomposition for the cone of curves, the nef cone, the
//! effective cone and the movable cone. Every decomposer returns a
//! [`Certificate`] that has already been re-summed and checked.

mod certificate;
mod chamber;
mod curves;
mod effective;
mod movable;

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::lattice::{CurveClass, DivisorClass, POINTS};

pub use certificate::{AnyCertificate, Certificate, ConeTag, GeneratorClass, Term};
pub use chamber::{
    accumulation_report, in_b, in_fundamental_chamber, in_open_chamber, in_tits_cone,
    ray_proximity, AccumulationRow, TitsVerdict,
};
pub use curves::{curve_decompose, is_nef, nef_decompose, NefVerdict};
pub use effective::effective_decompose;
pub use movable::movable_decompose;

/// The declared generating sets of the four cones.
#[derive(Debug)]
pub struct GeneratorSets {
    /// `e_1..e_8` then `l_ij` for `i < j` in lexicographic order (36 classes).
    pub curve_gens: Vec<CurveClass>,
    /// `H`, `H - E_i`, and `2H - sum_{j in J} E_j` for `|J|` in `3..=8` (228 classes).
    pub nef_gens: Vec<DivisorClass>,
    /// Generators of the polyhedral cone whose Weyl translates cover the
    /// movable cone (17 classes).
    pub pi_gens: Vec<DivisorClass>,
    /// `E_1..E_8` and `-K_X/2`; the rest of the effective generators are the
    /// Weyl orbit of `E_8`.
    pub eff_gen_seed: Vec<DivisorClass>,
    curve_set: HashSet<CurveClass>,
    nef_set: HashSet<DivisorClass>,
    pi_set: HashSet<DivisorClass>,
}

/// `dH - sum_{j in set} E_j` with 1-based indices.
fn through(d: i64, set: &[usize]) -> DivisorClass {
    let mut m = [0; POINTS];
    for &j in set {
        m[j - 1] = 1;
    }
    DivisorClass::from_ints(d, m)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// `L_k = (2; 1^k)`.
pub fn l_class(k: usize) -> DivisorClass {
    DivisorClass::uniform(2, k)
}

/// `M_l = (3; 3, 1^(l-1))`.
pub fn m_class(l: usize) -> DivisorClass {
    let mut m = DivisorClass::uniform(3, l);
    m.m[0] = crate::lattice::rat(3);
    m
}

impl GeneratorSets {
    fn build() -> Self {
        let mut curve_gens: Vec<CurveClass> = (1..=POINTS).map(CurveClass::exceptional_line).collect();
        curve_gens.extend(subsets(POINTS, 2).iter().map(|s| CurveClass::line_through(s[0], s[1])));

        let mut nef_gens = vec![DivisorClass::hyperplane()];
        nef_gens.extend((1..=POINTS).map(|i| through(1, &[i])));
        for k in 3..=POINTS {
            nef_gens.extend(subsets(POINTS, k).iter().map(|s| through(2, s)));
        }

        let mut pi_gens = vec![DivisorClass::hyperplane()];
        pi_gens.extend((1..=3).map(|i| through(1, &[i])));
        pi_gens.extend(subsets(3, 2).iter().map(|s| through(1, s)));
        pi_gens.extend((4..=POINTS).map(l_class));
        pi_gens.extend((4..=POINTS).map(m_class));

        let mut eff_gen_seed: Vec<DivisorClass> = (1..=POINTS).map(DivisorClass::exceptional).collect();
        eff_gen_seed.push(DivisorClass::half_anticanonical());

        GeneratorSets {
            curve_set: curve_gens.iter().cloned().collect(),
            nef_set: nef_gens.iter().cloned().collect(),
            pi_set: pi_gens.iter().cloned().collect(),
            curve_gens,
            nef_gens,
            pi_gens,
            eff_gen_seed,
        }
    }

    pub fn get() -> &'static GeneratorSets {
        static SETS: OnceLock<GeneratorSets> = OnceLock::new();
        SETS.get_or_init(Self::build)
    }

    pub fn is_curve_gen(&self, c: &CurveClass) -> bool {
        self.curve_set.contains(c)
    }

    pub fn is_nef_gen(&self, d: &DivisorClass) -> bool {
        self.nef_set.contains(d)
    }

    pub fn is_pi_gen(&self, d: &DivisorClass) -> bool {
        self.pi_set.contains(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{curve_intersection, rat};

    #[test]
    fn generator_counts() {
        let g = GeneratorSets::get();
        assert_eq!(g.curve_gens.len(), 36);
        assert_eq!(g.nef_gens.len(), 228);
        assert_eq!(g.nef_gens.len(), 1 + 8 + (3..=8).map(|k| subsets(8, k).len()).sum::<usize>());
        assert_eq!(g.pi_gens.len(), 17);
        assert_eq!(g.eff_gen_seed.len(), 9);
        assert_eq!(g.curve_set.len(), 36);
        assert_eq!(g.nef_set.len(), 228);
    }

    #[test]
    fn generators_are_what_they_claim() {
        let g = GeneratorSets::get();
        let h = DivisorClass::hyperplane();
        for c in &g.curve_gens {
            assert!(curve_intersection(&h, c) >= rat(0));
        }
        for n in &g.nef_gens {
            assert!(is_nef(n).holds(), "{n}");
        }
        assert_eq!(m_class(4).to_string(), "3;3,1,1,1,0,0,0,0");
        assert_eq!(l_class(8), DivisorClass::half_anticanonical());
    }
}
