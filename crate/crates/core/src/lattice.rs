//! Divisor and curve classes on the blowup X of P^3 at eight points.
//!
//! A divisor class `(d; m1,...,m8)` stands for `d*H - sum m_i*E_i` and a curve
//! class `(a; c1,...,c8)` for `a*h + sum c_i*e_i`. Every formula in the crate
//! is written against these two conventions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Number of blown-up points.
pub const POINTS: usize = 8;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(Error::parse("rational", s, "empty entry"));
    }
    match t.split_once('/') {
        None => BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|e| Error::parse("rational", s, e.to_string())),
        Some((n, q)) => {
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::parse("rational", s, e.to_string()))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| Error::parse("rational", s, e.to_string()))?;
            if q.is_zero() {
                return Err(Error::parse("rational", s, "zero denominator"));
            }
            Ok(Rational::new(n, q))
        }
    }
}

/// Splits `"x;y1,...,yk"` into the head and the `k` tail entries.
fn split_head_tail<'a>(what: &'static str, s: &'a str, tail_len: usize) -> Result<(&'a str, Vec<&'a str>)> {
    let (head, tail) = s
        .split_once(';')
        .ok_or_else(|| Error::parse(what, s, "missing ';'"))?;
    let tail: Vec<&str> = tail.split(',').collect();
    if tail.len() != tail_len {
        return Err(Error::parse(
            what,
            s,
            format!("expected {tail_len} entries after ';', found {}", tail.len()),
        ));
    }
    Ok((head, tail))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    /// Coefficient of `H`.
    pub d: Rational,
    /// Multiplicities; the coefficient of `E_i` is `-m[i-1]`.
    pub m: [Rational; POINTS],
}

impl DivisorClass {
    pub fn new(d: Rational, m: [Rational; POINTS]) -> Self {
        DivisorClass { d, m }
    }

    pub fn from_ints(d: i64, m: [i64; POINTS]) -> Self {
        DivisorClass {
            d: rat(d),
            m: m.map(rat),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, [0; POINTS])
    }

    /// The hyperplane class `H = (1; 0^8)`.
    pub fn hyperplane() -> Self {
        Self::from_ints(1, [0; POINTS])
    }

    /// The exceptional divisor `E_i`, `i` in `1..=8`, i.e. `(0; ..., -1 at i, ...)`.
    pub fn exceptional(i: usize) -> Self {
        assert!((1..=POINTS).contains(&i), "exceptional index {i} out of range");
        let mut m = [0; POINTS];
        m[i - 1] = -1;
        Self::from_ints(0, m)
    }

    /// `-K_X = (4; 2^8)`.
    pub fn anticanonical() -> Self {
        Self::from_ints(4, [2; POINTS])
    }

    /// `-K_X / 2 = (2; 1^8)`, the class of the quadric surface `Q`.
    pub fn half_anticanonical() -> Self {
        Self::from_ints(2, [1; POINTS])
    }

    /// `(d; 1^k, 0^(8-k))`.
    pub fn uniform(d: i64, k: usize) -> Self {
        let mut m = [0; POINTS];
        m[..k].iter_mut().for_each(|x| *x = 1);
        Self::from_ints(d, m)
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.d.is_integer() && self.m.iter().all(Rational::is_integer)
    }

    /// The nine coefficients `(d, m1, ..., m8)`.
    pub fn coords(&self) -> [Rational; POINTS + 1] {
        std::array::from_fn(|i| if i == 0 { self.d.clone() } else { self.m[i - 1].clone() })
    }

    pub fn from_coords(c: &[Rational]) -> Result<Self> {
        if c.len() != POINTS + 1 {
            return Err(Error::MalformedProblem(format!(
                "divisor class needs 9 coordinates, got {}",
                c.len()
            )));
        }
        Ok(DivisorClass {
            d: c[0].clone(),
            m: std::array::from_fn(|i| c[i + 1].clone()),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DivisorClass {
            d: &self.d * k,
            m: std::array::from_fn(|i| &self.m[i] * k),
        }
    }

    /// Least common denominator of all coefficients.
    pub fn denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.coords()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Multiplicities sorted descending: the shape of the class up to
    /// permuting the points.
    pub fn shape(&self) -> Self {
        let mut m = self.m.clone();
        m.sort_by(|a, b| b.cmp(a));
        DivisorClass { d: self.d.clone(), m }
    }

    /// Permutes multiplicities so that `m'[i] = m[perm[i]]`.
    pub fn permuted(&self, perm: &[usize; POINTS]) -> Self {
        DivisorClass {
            d: self.d.clone(),
            m: std::array::from_fn(|i| self.m[perm[i]].clone()),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = split_head_tail("divisor class", s, POINTS)?;
        let d = parse_rational(head).map_err(|_| Error::parse("divisor class", s, "bad degree"))?;
        let mut m: [Rational; POINTS] = std::array::from_fn(|_| Rational::zero());
        for (slot, entry) in m.iter_mut().zip(tail) {
            *slot = parse_rational(entry)
                .map_err(|_| Error::parse("divisor class", s, format!("bad multiplicity {entry:?}")))?;
        }
        Ok(DivisorClass { d, m })
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            d: &self.d + &rhs.d,
            m: std::array::from_fn(|i| &self.m[i] + &rhs.m[i]),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            d: &self.d - &rhs.d,
            m: std::array::from_fn(|i| &self.m[i] - &rhs.m[i]),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            d: -&self.d,
            m: std::array::from_fn(|i| -&self.m[i]),
        }
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// A curve class `a*h + sum c_i*e_i`. Integral by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    pub a: BigInt,
    pub c: [BigInt; POINTS],
}

impl CurveClass {
    pub fn new(a: BigInt, c: [BigInt; POINTS]) -> Self {
        CurveClass { a, c }
    }

    pub fn from_ints(a: i64, c: [i64; POINTS]) -> Self {
        CurveClass {
            a: BigInt::from(a),
            c: c.map(BigInt::from),
        }
    }

    /// Class of a general line, `h`.
    pub fn line() -> Self {
        Self::from_ints(1, [0; POINTS])
    }

    /// A line in the exceptional divisor `E_i`, `i` in `1..=8`.
    pub fn exceptional_line(i: usize) -> Self {
        assert!((1..=POINTS).contains(&i), "exceptional index {i} out of range");
        let mut c = [0; POINTS];
        c[i - 1] = 1;
        Self::from_ints(0, c)
    }

    /// Strict transform of the line through `p_i` and `p_j`: `h - e_i - e_j`.
    pub fn line_through(i: usize, j: usize) -> Self {
        assert!(i != j && (1..=POINTS).contains(&i) && (1..=POINTS).contains(&j));
        let mut c = [0; POINTS];
        c[i - 1] = -1;
        c[j - 1] = -1;
        Self::from_ints(1, c)
    }

    /// Builds `a*h - sum b_i*e_i` from multiplicities `b_i`.
    pub fn from_multiplicities(a: BigInt, b: [BigInt; POINTS]) -> Self {
        CurveClass { a, c: b.map(|x| -x) }
    }

    /// Multiplicities `b_i = -c_i`.
    pub fn multiplicities(&self) -> [BigInt; POINTS] {
        std::array::from_fn(|i| -&self.c[i])
    }

    pub fn coords(&self) -> [BigInt; POINTS + 1] {
        std::array::from_fn(|i| if i == 0 { self.a.clone() } else { self.c[i - 1].clone() })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CurveClass {
            a: &self.a * k,
            c: std::array::from_fn(|i| &self.c[i] * k),
        }
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass {
            a: &self.a + &rhs.a,
            c: std::array::from_fn(|i| &self.c[i] + &rhs.c[i]),
        }
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        CurveClass {
            a: &self.a - &rhs.a,
            c: std::array::from_fn(|i| &self.c[i] - &rhs.c[i]),
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.a)?;
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for CurveClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = split_head_tail("curve class", s, POINTS)?;
        let int = |e: &str| {
            BigInt::from_str(e.trim().strip_prefix('+').unwrap_or(e.trim()))
                .map_err(|_| Error::parse("curve class", s, format!("bad integer entry {e:?}")))
        };
        let a = int(head)?;
        let mut c: [BigInt; POINTS] = std::array::from_fn(|_| BigInt::zero());
        for (slot, entry) in c.iter_mut().zip(tail) {
            *slot = int(entry)?;
        }
        Ok(CurveClass { a, c })
    }
}

/// The symmetric form with `(H,H) = 2`, `(E_i,E_j) = -delta_ij`, `(H,E_j) = 0`.
pub fn pairing(a: &DivisorClass, b: &DivisorClass) -> Rational {
    let mut acc = rat(2) * &a.d * &b.d;
    for (x, y) in a.m.iter().zip(&b.m) {
        acc -= x * y;
    }
    acc
}

/// Intersection number `D . kappa = d*a + sum m_i*c_i`.
pub fn curve_intersection(d: &DivisorClass, k: &CurveClass) -> Rational {
    let mut acc = &d.d * Rational::from_integer(k.a.clone());
    for (m, c) in d.m.iter().zip(&k.c) {
        acc += m * Rational::from_integer(c.clone());
    }
    acc
}

/// `(D^2.Q, D.Q^2)` for the quadric class `Q = -K_X/2`, computed from the
/// triple intersection numbers `H^3 = 1`, `E_i^3 = 1`, mixed terms zero.
pub fn dq_numbers(d: &DivisorClass) -> (Rational, Rational) {
    let two = rat(2);
    let square = &two * &d.d * &d.d - d.m.iter().map(|x| x * x).sum::<Rational>();
    let linear = rat(4) * &d.d - d.m.iter().sum::<Rational>();
    debug_assert_eq!(square, pairing(d, d));
    debug_assert_eq!(linear, pairing(d, &DivisorClass::half_anticanonical()));
    (square, linear)
}

/// Simple roots and fundamental weights of the `T_{2,4,4}` system on `N^1(X)`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub roots: [DivisorClass; POINTS],
    pub weights: [DivisorClass; POINTS],
}

impl RootSystem {
    fn build() -> Self {
        let roots = std::array::from_fn(|i| {
            if i == 0 {
                DivisorClass::uniform(1, 4)
            } else {
                // E_i - E_{i+1}
                let mut m = [0; POINTS];
                m[i - 1] = -1;
                m[i] = 1;
                DivisorClass::from_ints(0, m)
            }
        });
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let weights = std::array::from_fn(|i| match i {
            0 => DivisorClass::hyperplane().scale(&half),
            1 => &DivisorClass::hyperplane().scale(&half) - &DivisorClass::exceptional(1),
            2 => DivisorClass::uniform(1, 2),
            3 => {
                let mut w = DivisorClass::uniform(0, 3);
                w.d = Rational::new(BigInt::from(3), BigInt::from(2));
                w
            }
            k => DivisorClass::uniform(2, k),
        });
        let sys = RootSystem { roots, weights };
        sys.check_gram().expect("root system violates its Gram contract");
        sys
    }

    /// The shared instance; the Gram contract is verified on first use.
    pub fn get() -> &'static RootSystem {
        static SYSTEM: OnceLock<RootSystem> = OnceLock::new();
        SYSTEM.get_or_init(Self::build)
    }

    pub fn root(i: usize) -> &'static DivisorClass {
        &Self::get().roots[i]
    }

    pub fn check_gram(&self) -> std::result::Result<(), String> {
        let k = DivisorClass::anticanonical();
        for (i, a) in self.roots.iter().enumerate() {
            if pairing(a, a) != rat(-2) {
                return Err(format!("(alpha_{i}, alpha_{i}) != -2"));
            }
            if !pairing(&k, a).is_zero() {
                return Err(format!("(K_X, alpha_{i}) != 0"));
            }
            for (j, b) in self.roots.iter().enumerate() {
                let p = pairing(a, b);
                if i != j && !(p.is_zero() || p.is_one()) {
                    return Err(format!("(alpha_{i}, alpha_{j}) = {p}"));
                }
                let w = pairing(&self.weights[i], b);
                let want = if i == j { Rational::one() } else { Rational::zero() };
                if w != want {
                    return Err(format!("(f_{i}, alpha_{j}) = {w}"));
                }
            }
        }
        Ok(())
    }

    /// Gram matrix `(alpha_i, alpha_j)`.
    pub fn gram(&self) -> [[i64; POINTS]; POINTS] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let p = pairing(&self.roots[i], &self.roots[j]);
                i64::try_from(p.to_integer()).expect("small Gram entry")
            })
        })
    }
}
