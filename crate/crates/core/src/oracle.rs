//! Exact cone membership: is `target` a non-negative combination of the
//! generators? Answers come with a certificate either way, a coefficient
//! vector or a separating functional, and every answer is re-checked before
//! it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{parse_rational, DivisorClass, Rational};
use crate::weyl::orbit_e8;

pub const MAX_DIMENSION: usize = 16;
pub const MAX_GENERATORS: usize = 200_000;
const MAX_PIVOTS: usize = 200_000;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeProblem {
    target: Vec<Rational>,
    generators: Vec<Vec<Rational>>,
}

impl ConeProblem {
    pub fn new(target: Vec<Rational>, generators: Vec<Vec<Rational>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::MalformedProblem("no generators".into()));
        }
        let n = target.len();
        if n == 0 {
            return Err(Error::MalformedProblem("empty target".into()));
        }
        if let Some(i) = generators.iter().position(|g| g.len() != n) {
            return Err(Error::MalformedProblem(format!(
                "generator {i} has length {}, target has {n}",
                generators[i].len()
            )));
        }
        if n > MAX_DIMENSION {
            return Err(Error::ScaleExceeded(format!("dimension {n} > {MAX_DIMENSION}")));
        }
        if generators.len() > MAX_GENERATORS {
            return Err(Error::ScaleExceeded(format!(
                "{} generators > {MAX_GENERATORS}",
                generators.len()
            )));
        }
        Ok(ConeProblem { target, generators })
    }

    pub fn from_classes(target: &DivisorClass, generators: &[DivisorClass]) -> Result<Self> {
        Self::new(
            target.coords().to_vec(),
            generators.iter().map(|g| g.coords().to_vec()).collect(),
        )
    }

    pub fn target(&self) -> &[Rational] {
        &self.target
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// One non-negative coefficient per generator; the combination equals the target.
    Feasible { coefficients: Vec<Rational> },
    /// An integral functional that is `>= 0` on every generator and `< 0`
    /// on the target.
    Infeasible { separator: Vec<Rational> },
}

impl Membership {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Membership::Feasible { .. })
    }

    /// Re-checks the certificate by exact arithmetic alone.
    pub fn verify(&self, p: &ConeProblem) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        match self {
            Membership::Feasible { coefficients } => {
                if coefficients.len() != p.generators.len() {
                    return bad(format!(
                        "{} coefficients for {} generators",
                        coefficients.len(),
                        p.generators.len()
                    ));
                }
                if coefficients.iter().any(Signed::is_negative) {
                    return bad("negative coefficient".into());
                }
                let mut acc = vec![Rational::zero(); p.dimension()];
                for (c, g) in coefficients.iter().zip(&p.generators) {
                    if c.is_zero() {
                        continue;
                    }
                    for (a, x) in acc.iter_mut().zip(g) {
                        *a += c * x;
                    }
                }
                if acc != p.target {
                    return bad("coefficients do not re-sum to the target".into());
                }
            }
            Membership::Infeasible { separator } => {
                if separator.len() != p.dimension() {
                    return bad("separator has the wrong length".into());
                }
                if dot(separator, &p.target) >= Rational::zero() {
                    return bad("separator is not negative on the target".into());
                }
                let small = small_ints(separator);
                let negative = |g: &Vec<Rational>| match (&small, small_ints(g)) {
                    (Some(a), Some(b)) => small_dot(a, &b).map_or_else(|| dot(separator, g).is_negative(), |v| v < 0),
                    _ => dot(separator, g).is_negative(),
                };
                if let Some(i) = p.generators.iter().position(negative) {
                    return bad(format!("separator is negative on generator {i}"));
                }
            }
        }
        Ok(())
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The entries as `i64` when all of them are integers of that size.
fn small_ints(v: &[Rational]) -> Option<Vec<i64>> {
    v.iter().map(|x| if x.is_integer() { x.numer().to_i64() } else { None }).collect()
}

fn small_dot(a: &[i64], b: &[i64]) -> Option<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| acc.checked_add(i128::from(*x) * i128::from(*y)))
}

fn lcm_of_denominators(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Multiplies `v` by a positive rational so that its entries become coprime
/// integers. The zero vector stays zero.
fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Constraint columns after row sign flips and per-column integer scaling.
struct Columns {
    rows: usize,
    /// `big[j][i]`: entry `i` of column `j`.
    big: Vec<Vec<BigInt>>,
    /// Same data, column-major, when every entry fits `i64`.
    small: Option<Vec<i64>>,
}

impl Columns {
    fn len(&self) -> usize {
        self.big.len()
    }

    /// Index and value of the column maximising `y . A_j > 0`, or the first
    /// such column when `bland` is set.
    fn price(&self, y: &[BigInt], bland: bool) -> Option<usize> {
        if let (Some(small), Some(ys)) = (&self.small, y.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<i64>>>()) {
            if let Some(r) = self.price_small(small, &ys, bland) {
                return r;
            }
        }
        let mut best: Option<(usize, BigInt)> = None;
        for (j, col) in self.big.iter().enumerate() {
            let v: BigInt = col.iter().zip(y).map(|(a, b)| a * b).sum();
            if v.is_positive() {
                if bland {
                    return Some(j);
                }
                if best.as_ref().is_none_or(|(_, b)| v > *b) {
                    best = Some((j, v));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    /// `None` on overflow, so the caller falls back to big integers.
    fn price_small(&self, small: &[i64], y: &[i64], bland: bool) -> Option<Option<usize>> {
        let m = self.rows;
        let mut best: Option<(usize, i128)> = None;
        for (j, col) in small.chunks_exact(m).enumerate() {
            let mut v: i128 = 0;
            for (a, b) in col.iter().zip(y) {
                v = v.checked_add(i128::from(*a) * i128::from(*b))?;
            }
            if v > 0 {
                if bland {
                    return Some(Some(j));
                }
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((j, v));
                }
            }
        }
        Some(best.map(|(j, _)| j))
    }
}

/// Phase-one revised simplex on `A lambda + a = b`, `b >= 0`, minimising the
/// sum of the artificials `a`.
struct Simplex<'a> {
    cols: &'a Columns,
    m: usize,
    /// Column ids; `id >= n` is the artificial for row `id - n`.
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    x: Vec<Rational>,
}

impl<'a> Simplex<'a> {
    fn new(cols: &'a Columns, b: Vec<Rational>) -> Self {
        let m = cols.rows;
        let n = cols.len();
        let binv = (0..m)
            .map(|i| (0..m).map(|k| if i == k { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Simplex {
            cols,
            m,
            basis: (n..n + m).collect(),
            binv,
            x: b,
        }
    }

    fn is_artificial(&self, id: usize) -> bool {
        id >= self.cols.len()
    }

    fn objective(&self) -> Rational {
        (0..self.m).filter(|&i| self.is_artificial(self.basis[i])).map(|i| self.x[i].clone()).sum()
    }

    /// Phase-one duals `c_B B^-1`.
    fn duals(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for i in 0..self.m {
            if self.is_artificial(self.basis[i]) {
                for (yk, bk) in y.iter_mut().zip(&self.binv[i]) {
                    *yk += bk;
                }
            }
        }
        y
    }

    fn run(&mut self) -> Result<()> {
        let mut streak = 0;
        let mut bland = false;
        for _ in 0..MAX_PIVOTS {
            if self.objective().is_zero() {
                return Ok(());
            }
            let y = primitive_integer(&self.duals());
            let Some(j) = self.cols.price(&y, bland) else {
                return Ok(());
            };
            let col: Vec<Rational> = self.cols.big[j].iter().cloned().map(Rational::from_integer).collect();
            let d: Vec<Rational> = self.binv.iter().map(|row| dot(row, &col)).collect();

            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                if !d[i].is_positive() {
                    continue;
                }
                let ratio = &self.x[i] / &d[i];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best
                            || (ratio == *best && {
                                let (a, b) = (self.basis[i], self.basis[*r]);
                                if bland {
                                    a < b
                                } else {
                                    (self.is_artificial(a), a) > (self.is_artificial(b), b)
                                }
                            })
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Phase one is bounded below, so some entry of d is positive.
            let (r, theta) = leave.expect("phase-one problem is bounded");

            if theta.is_zero() {
                streak += 1;
                if streak >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
            }

            for i in 0..self.m {
                if i != r && !d[i].is_zero() {
                    let delta = &d[i] * &theta;
                    self.x[i] -= delta;
                }
            }
            self.x[r] = theta;
            let piv = d[r].clone();
            for v in self.binv[r].iter_mut() {
                *v /= &piv;
            }
            let prow = self.binv[r].clone();
            for i in 0..self.m {
                if i != r && !d[i].is_zero() {
                    for (v, p) in self.binv[i].iter_mut().zip(&prow) {
                        *v -= &d[i] * p;
                    }
                }
            }
            self.basis[r] = j;
        }
        Err(Error::ScaleExceeded(format!("no verdict after {MAX_PIVOTS} pivots")))
    }
}

/// Decides whether `p.target` lies in the cone spanned by `p.generators`.
pub fn cone_member(p: &ConeProblem) -> Result<Membership> {
    let m = p.dimension();
    let sign: Vec<bool> = p.target.iter().map(|t| t.is_negative()).collect();
    let flip = |i: usize, x: Rational| if sign[i] { -x } else { x };

    let mut scales = Vec::with_capacity(p.generators.len());
    let mut big = Vec::with_capacity(p.generators.len());
    for g in &p.generators {
        if g.iter().all(Rational::is_integer) {
            let col = g
                .iter()
                .zip(&sign)
                .map(|(x, &s)| if s { -x.numer() } else { x.numer().clone() })
                .collect();
            scales.push(BigInt::one());
            big.push(col);
            continue;
        }
        let l = lcm_of_denominators(g);
        let col: Vec<BigInt> = g
            .iter()
            .enumerate()
            .map(|(i, x)| flip(i, x * Rational::from_integer(l.clone())).to_integer())
            .collect();
        scales.push(l);
        big.push(col);
    }
    let small = big
        .iter()
        .flatten()
        .map(ToPrimitive::to_i64)
        .collect::<Option<Vec<i64>>>();
    let cols = Columns { rows: m, big, small };
    let b: Vec<Rational> = p.target.iter().enumerate().map(|(i, t)| flip(i, t.clone())).collect();

    let mut s = Simplex::new(&cols, b);
    s.run()?;

    let result = if s.objective().is_zero() {
        let mut coefficients = vec![Rational::zero(); p.generators.len()];
        for (i, &id) in s.basis.iter().enumerate() {
            if !s.is_artificial(id) {
                coefficients[id] = &s.x[i] * Rational::from_integer(scales[id].clone());
            }
        }
        Membership::Feasible { coefficients }
    } else {
        let y = s.duals();
        let phi: Vec<Rational> = (0..m).map(|i| flip(i, -y[i].clone())).collect();
        Membership::Infeasible {
            separator: primitive_integer(&phi).into_iter().map(Rational::from_integer).collect(),
        }
    };
    result.verify(p)?;
    Ok(result)
}

/// Parses a vector written as rationals separated by `;` and `,`, e.g. a
/// divisor class `"2;1,1,1,1,1,1,1,0"`.
pub fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("vector", s, "empty"));
    }
    s.split([';', ','])
        .map(|t| parse_rational(t.trim()).map_err(|_| Error::parse("vector", s, format!("bad entry {:?}", t.trim()))))
        .collect()
}

/// Largest truncation degree the effective-cone oracle will enumerate.
pub const MAX_TRUNCATION: u32 = 16;
const STABILITY_ROUNDS: usize = 8;

/// Result of the effective-cone oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffReport {
    /// The generator set: `-K/2` followed by `W . E_8` up to degree `truncation`.
    pub generators: Vec<DivisorClass>,
    pub truncation: u32,
    pub membership: Membership,
    /// Whether the verdict held across two further truncation increments.
    /// Feasible verdicts are always stable: larger truncations only add
    /// generators.
    pub stable: bool,
}

/// Effective-cone membership over `{-K/2} ∪ W . E_8`, truncated by degree.
///
/// The truncation starts at `deg(target) + 3`. A feasible answer is final.
/// An infeasible answer at `T` is accepted when it persists at `T + 2`
/// (and hence at `T + 1`); otherwise `T` is raised and the test repeated.
#[derive(Debug, Default)]
pub struct EffOracle {
    /// Orbit sorted by degree, complete up to `computed`.
    orbit: Vec<DivisorClass>,
    computed: Option<u32>,
}

impl EffOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `-K/2` followed by the orbit elements of degree at most `t`.
    pub fn generators(&mut self, t: u32) -> Result<Vec<DivisorClass>> {
        if t > MAX_TRUNCATION {
            return Err(Error::ScaleExceeded(format!(
                "truncation degree {t} > {MAX_TRUNCATION}"
            )));
        }
        if self.computed.is_none_or(|c| c < t) {
            // the derived order compares the degree first
            self.orbit = orbit_e8(t).into_iter().collect();
            self.computed = Some(t);
        }
        let bound = Rational::from_integer(t.into());
        let mut gens = vec![DivisorClass::half_anticanonical()];
        gens.extend(self.orbit.iter().take_while(|x| x.d <= bound).cloned());
        Ok(gens)
    }

    pub fn solve_at(&mut self, target: &DivisorClass, t: u32) -> Result<(Vec<DivisorClass>, Membership)> {
        let gens = self.generators(t)?;
        let p = ConeProblem::from_classes(target, &gens)?;
        let m = cone_member(&p)?;
        Ok((gens, m))
    }

    pub fn decide(&mut self, target: &DivisorClass) -> Result<EffReport> {
        let start: BigInt = target.d.ceil().to_integer() + 3;
        let mut t: u32 = start.max(BigInt::zero()).to_u32().unwrap_or(u32::MAX);
        let mut last = None;
        for _ in 0..STABILITY_ROUNDS {
            let (gens, m) = self.solve_at(target, t)?;
            if m.is_feasible() {
                return Ok(EffReport {
                    generators: gens,
                    truncation: t,
                    membership: m,
                    stable: true,
                });
            }
            let (_, ahead) = self.solve_at(target, t + 2)?;
            if !ahead.is_feasible() {
                return Ok(EffReport {
                    generators: gens,
                    truncation: t,
                    membership: m,
                    stable: true,
                });
            }
            last = Some((gens, m));
            t += 1;
        }
        let (generators, membership) = last.expect("at least one round");
        Ok(EffReport {
            generators,
            truncation: t - 1,
            membership,
            stable: false,
        })
    }
}
