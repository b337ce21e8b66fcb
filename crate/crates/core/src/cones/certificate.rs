use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::GeneratorSets;
use crate::error::{Error, Result};
use crate::lattice::{parse_rational, CurveClass, DivisorClass, Rational};
use crate::weyl::{apply_word, is_minus_one_divisor, WeylWord, DEFAULT_MAX_STEPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeTag {
    #[serde(rename = "curves")]
    Curves,
    #[serde(rename = "nef")]
    Nef,
    #[serde(rename = "eff")]
    Effective,
    #[serde(rename = "mov")]
    Movable,
}

impl ConeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ConeTag::Curves => "curves",
            ConeTag::Nef => "nef",
            ConeTag::Effective => "eff",
            ConeTag::Movable => "mov",
        }
    }
}

impl fmt::Display for ConeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConeTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "curves" => Ok(ConeTag::Curves),
            "nef" => Ok(ConeTag::Nef),
            "eff" => Ok(ConeTag::Effective),
            "mov" => Ok(ConeTag::Movable),
            _ => Err(Error::parse("cone tag", s, "expected curves, nef, eff or mov")),
        }
    }
}

/// A class that can appear as a certificate generator.
pub trait GeneratorClass: Clone + Eq + Hash + fmt::Display + FromStr<Err = Error> {
    fn rational_coords(&self) -> Vec<Rational>;

    /// The class a certificate must re-sum to: the input moved by `word`.
    fn moved_by(&self, word: &WeylWord) -> Result<Self>;

    fn belongs_to(&self, cone: ConeTag) -> bool;
}

impl GeneratorClass for DivisorClass {
    fn rational_coords(&self) -> Vec<Rational> {
        self.coords().to_vec()
    }

    fn moved_by(&self, word: &WeylWord) -> Result<Self> {
        Ok(apply_word(word, self))
    }

    fn belongs_to(&self, cone: ConeTag) -> bool {
        let sets = GeneratorSets::get();
        match cone {
            ConeTag::Curves => false,
            ConeTag::Nef => sets.is_nef_gen(self),
            ConeTag::Movable => sets.is_pi_gen(self),
            ConeTag::Effective => {
                *self == DivisorClass::half_anticanonical()
                    || (self.is_integral()
                        && matches!(is_minus_one_divisor(self, DEFAULT_MAX_STEPS), Ok(Some(_))))
            }
        }
    }
}

impl GeneratorClass for CurveClass {
    fn rational_coords(&self) -> Vec<Rational> {
        self.coords().into_iter().map(Rational::from_integer).collect()
    }

    fn moved_by(&self, word: &WeylWord) -> Result<Self> {
        if word.is_empty() {
            Ok(self.clone())
        } else {
            Err(Error::InvalidCertificate(
                "curve certificates carry no Weyl word".into(),
            ))
        }
    }

    fn belongs_to(&self, cone: ConeTag) -> bool {
        cone == ConeTag::Curves && GeneratorSets::get().is_curve_gen(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<G> {
    pub generator: G,
    pub coeff: Rational,
}

/// `sum coeff * generator == word . input`, with all coefficients
/// non-negative and every generator in the declared set of `cone`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<G> {
    pub cone: ConeTag,
    pub input: G,
    /// Reduction applied to the input before decomposing; empty when the
    /// generators are expressed in the input's own coordinates.
    pub word: WeylWord,
    pub terms: Vec<Term<G>>,
}

impl<G: GeneratorClass> Certificate<G> {
    /// Merges repeated generators (first occurrence fixes the order), drops
    /// zero coefficients and checks the result.
    pub(crate) fn assemble(
        cone: ConeTag,
        input: G,
        word: WeylWord,
        raw: impl IntoIterator<Item = (G, Rational)>,
    ) -> Result<Self> {
        let mut index: HashMap<G, usize> = HashMap::new();
        let mut terms: Vec<Term<G>> = Vec::new();
        for (g, c) in raw {
            if c.is_zero() {
                continue;
            }
            match index.get(&g) {
                Some(&i) => terms[i].coeff += c,
                None => {
                    index.insert(g.clone(), terms.len());
                    terms.push(Term { generator: g, coeff: c });
                }
            }
        }
        terms.retain(|t| !t.coeff.is_zero());
        let cert = Certificate {
            cone,
            input,
            word,
            terms,
        };
        cert.check()?;
        Ok(cert)
    }

    pub fn resum(&self) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.input.rational_coords().len()];
        for t in &self.terms {
            for (a, x) in acc.iter_mut().zip(t.generator.rational_coords()) {
                *a += &t.coeff * x;
            }
        }
        acc
    }

    /// Exact re-check of every certificate invariant.
    pub fn check(&self) -> Result<()> {
        if let Some(t) = self.terms.iter().find(|t| t.coeff.is_negative()) {
            return Err(Error::InvalidCertificate(format!(
                "negative coefficient {} on {}",
                t.coeff, t.generator
            )));
        }
        if let Some(t) = self.terms.iter().find(|t| !t.generator.belongs_to(self.cone)) {
            return Err(Error::InvalidCertificate(format!(
                "{} is not a generator of the {} cone",
                t.generator, self.cone
            )));
        }
        let target = self.input.moved_by(&self.word)?;
        if self.resum() != target.rational_coords() {
            return Err(Error::InvalidCertificate(format!(
                "terms do not re-sum to {target}"
            )));
        }
        Ok(())
    }

    fn to_wire(&self) -> Wire {
        Wire {
            cone: self.cone,
            input: self.input.to_string(),
            word: self.word.letters().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|t| WireTerm {
                    gen: t.generator.to_string(),
                    coeff: t.coeff.to_string(),
                })
                .collect(),
        }
    }

    fn from_wire(w: Wire) -> Result<Self> {
        Ok(Certificate {
            cone: w.cone,
            input: w.input.parse()?,
            word: WeylWord::new(w.word)?,
            terms: w
                .terms
                .into_iter()
                .map(|t| {
                    Ok(Term {
                        generator: t.gen.parse()?,
                        coeff: parse_rational(&t.coeff)?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("certificate serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire()).expect("certificate serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    cone: ConeTag,
    input: String,
    word: Vec<u8>,
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireTerm {
    gen: String,
    coeff: String,
}

/// A certificate of either kind, as read back from its JSON form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyCertificate {
    Curve(Certificate<CurveClass>),
    Divisor(Certificate<DivisorClass>),
}

impl AnyCertificate {
    pub fn from_json(s: &str) -> Result<Self> {
        let wire: Wire =
            serde_json::from_str(s).map_err(|e| Error::parse("certificate", s, e.to_string()))?;
        Ok(match wire.cone {
            ConeTag::Curves => AnyCertificate::Curve(Certificate::from_wire(wire)?),
            _ => AnyCertificate::Divisor(Certificate::from_wire(wire)?),
        })
    }

    pub fn check(&self) -> Result<()> {
        match self {
            AnyCertificate::Curve(c) => c.check(),
            AnyCertificate::Divisor(c) => c.check(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyCertificate::Curve(c) => c.to_json(),
            AnyCertificate::Divisor(c) => c.to_json(),
        }
    }

    pub fn cone(&self) -> ConeTag {
        match self {
            AnyCertificate::Curve(c) => c.cone,
            AnyCertificate::Divisor(c) => c.cone,
        }
    }
}

impl From<Certificate<CurveClass>> for AnyCertificate {
    fn from(c: Certificate<CurveClass>) -> Self {
        AnyCertificate::Curve(c)
    }
}

impl From<Certificate<DivisorClass>> for AnyCertificate {
    fn from(c: Certificate<DivisorClass>) -> Self {
        AnyCertificate::Divisor(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    #[test]
    fn json_shape_and_round_trip() {
        let q = DivisorClass::half_anticanonical();
        let input: DivisorClass = "2;1,1,1,1,1,1,1,0".parse().unwrap();
        let cert = Certificate::assemble(
            ConeTag::Effective,
            input,
            WeylWord::empty(),
            vec![(q, rat(1)), (DivisorClass::exceptional(8), rat(1))],
        )
        .unwrap();
        let json = cert.to_json();
        assert_eq!(
            json,
            r#"{"cone":"eff","input":"2;1,1,1,1,1,1,1,0","word":[],"terms":[{"gen":"2;1,1,1,1,1,1,1,1","coeff":"1"},{"gen":"0;0,0,0,0,0,0,0,-1","coeff":"1"}]}"#
        );
        let back = AnyCertificate::from_json(&json).unwrap();
        assert_eq!(back, AnyCertificate::Divisor(cert));
        back.check().unwrap();
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let good = r#"{"cone":"eff","input":"2;1,1,1,1,1,1,1,0","word":[],"terms":[{"gen":"2;1,1,1,1,1,1,1,1","coeff":"1"},{"gen":"0;0,0,0,0,0,0,0,-1","coeff":"1"}]}"#;
        AnyCertificate::from_json(good).unwrap().check().unwrap();
        let wrong_sum = good.replace(r#""coeff":"1"}]"#, r#""coeff":"2"}]"#);
        assert!(AnyCertificate::from_json(&wrong_sum).unwrap().check().is_err());
        let wrong_cone = good.replace("\"eff\"", "\"mov\"");
        assert!(AnyCertificate::from_json(&wrong_cone).unwrap().check().is_err());
        let negative = r#"{"cone":"nef","input":"0;0,0,0,0,0,0,0,0","word":[],"terms":[{"gen":"1;0,0,0,0,0,0,0,0","coeff":"-1"},{"gen":"1;0,0,0,0,0,0,0,0","coeff":"1"}]}"#;
        assert!(AnyCertificate::from_json(negative).unwrap().check().is_err());
        assert!(AnyCertificate::from_json(r#"{"cone":"eff"}"#).is_err());
    }

    #[test]
    fn merging_drops_cancelled_terms() {
        let h = DivisorClass::hyperplane();
        let cert = Certificate::assemble(
            ConeTag::Nef,
            h.scale(&rat(3)),
            WeylWord::empty(),
            vec![(h.clone(), rat(1)), (h.clone(), rat(2)), (DivisorClass::uniform(1, 1), rat(0))],
        )
        .unwrap();
        assert_eq!(cert.terms.len(), 1);
        assert_eq!(cert.terms[0].coeff, rat(3));
    }
}
