//! JSON symbol files.
//!
//! ```json
//! {
//!   "operator": "toeplitz",
//!   "blaschke": {"rotation": 0.0, "origin_order": 1, "zeros": [{"re": 0.5, "im": 0.0, "mult": 1}]},
//!   "singular": {"atoms": [{"angle": 0.0, "mass": 1.0}]},
//!   "outer": {"constant": {"re": 1.0, "im": 0.0}, "conjugate_factors": [], "exterior_zeros": [{"re": 2.0, "im": 0.0}]}
//! }
//! ```
//!
//! `operator` is one of `toeplitz`, `polynomial_toeplitz`, `composition`,
//! `linear_fractional`. When omitted it is inferred: a `polynomial` field
//! means `polynomial_toeplitz`, a `mobius` field `linear_fractional`,
//! anything else `toeplitz`. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    Atom, BlaschkeProduct, BlaschkeZero, FactoredSymbol, MobiusMap, RationalOuter, SingularInner,
    SingularMeasure,
};
use crate::poly::Polynomial;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonComplex {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<JsonComplex> for C64 {
    fn from(c: JsonComplex) -> Self {
        C64::new(c.re, c.im)
    }
}

impl From<C64> for JsonComplex {
    fn from(c: C64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonZero {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonBlaschke {
    #[serde(default)]
    pub rotation: f64,
    #[serde(default)]
    pub origin_order: usize,
    #[serde(default)]
    pub zeros: Vec<JsonZero>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonAtom {
    pub angle: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonSingular {
    #[serde(default)]
    pub atoms: Vec<JsonAtom>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonOuter {
    #[serde(default = "unit")]
    pub constant: JsonComplex,
    #[serde(default)]
    pub conjugate_factors: Vec<JsonComplex>,
    #[serde(default)]
    pub exterior_zeros: Vec<JsonComplex>,
}

fn unit() -> JsonComplex {
    JsonComplex { re: 1.0, im: 0.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonPolynomial {
    /// Ascending degree.
    pub coeffs: Vec<JsonComplex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonMobius {
    pub a: JsonComplex,
    pub b: JsonComplex,
    pub c: JsonComplex,
    pub d: JsonComplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Toeplitz,
    PolynomialToeplitz,
    Composition,
    LinearFractional,
}

/// Raw document as read from disk.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorKind>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub declared_infinite_blaschke: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blaschke: Option<JsonBlaschke>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular: Option<JsonSingular>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<JsonOuter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<JsonPolynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mobius: Option<JsonMobius>,
}

/// The symbol of a composition operator.
#[derive(Debug, Clone, PartialEq)]
pub enum CompositionSymbol {
    Blaschke(BlaschkeProduct),
    Mobius(MobiusMap),
    Singular(SingularInner),
}

/// A validated symbol file.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Toeplitz {
        symbol: FactoredSymbol,
        declared_infinite_blaschke: bool,
    },
    PolynomialToeplitz(Polynomial),
    Composition(CompositionSymbol),
    LinearFractional(MobiusMap),
}

/// Parse and validate. Syntax errors carry the line and column reported by
/// the JSON reader; semantic errors carry the offending field path.
pub fn parse(text: &str) -> Result<(Problem, SymbolFile)> {
    let file: SymbolFile = serde_json::from_str(text).map_err(|e| {
        Error::InvalidSymbol(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let problem = file.to_problem()?;
    Ok((problem, file))
}

impl SymbolFile {
    pub fn kind(&self) -> OperatorKind {
        if let Some(k) = self.operator {
            return k;
        }
        if self.polynomial.is_some() {
            OperatorKind::PolynomialToeplitz
        } else if self.mobius.is_some() {
            OperatorKind::LinearFractional
        } else {
            OperatorKind::Toeplitz
        }
    }

    /// Hex SHA-256 of the canonical (re-serialised) document.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("symbol file serialises");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn factored(&self) -> Result<FactoredSymbol> {
        let blaschke = match &self.blaschke {
            None => BlaschkeProduct::trivial(),
            Some(b) => {
                let zeros = b
                    .zeros
                    .iter()
                    .map(|z| BlaschkeZero {
                        alpha: C64::new(z.re, z.im),
                        multiplicity: z.mult,
                    })
                    .collect();
                BlaschkeProduct::from_parts(b.rotation, b.origin_order, zeros)?
            }
        };
        let singular = match &self.singular {
            None => SingularInner::default(),
            Some(s) => SingularInner::new(SingularMeasure::new(
                s.atoms
                    .iter()
                    .map(|a| Atom {
                        angle: a.angle,
                        mass: a.mass,
                    })
                    .collect(),
            )?),
        };
        let outer = match &self.outer {
            None => RationalOuter::trivial(),
            Some(o) => RationalOuter::new(
                o.constant.into(),
                o.conjugate_factors.iter().map(|&c| c.into()).collect(),
                o.exterior_zeros.iter().map(|&c| c.into()).collect(),
            )?,
        };
        Ok(FactoredSymbol::new(blaschke, singular, outer))
    }

    fn reject(&self, fields: &[(&str, bool)], kind: &str) -> Result<()> {
        for (name, present) in fields {
            if *present {
                return Err(Error::InvalidSymbol(format!(
                    "{name}: not allowed for operator {kind}"
                )));
            }
        }
        Ok(())
    }

    pub fn to_problem(&self) -> Result<Problem> {
        match self.kind() {
            OperatorKind::Toeplitz => {
                self.reject(
                    &[("polynomial", self.polynomial.is_some()), ("mobius", self.mobius.is_some())],
                    "toeplitz",
                )?;
                Ok(Problem::Toeplitz {
                    symbol: self.factored()?,
                    declared_infinite_blaschke: self.declared_infinite_blaschke,
                })
            }
            OperatorKind::PolynomialToeplitz => {
                self.reject(
                    &[
                        ("blaschke", self.blaschke.is_some()),
                        ("singular", self.singular.is_some()),
                        ("outer", self.outer.is_some()),
                        ("mobius", self.mobius.is_some()),
                    ],
                    "polynomial_toeplitz",
                )?;
                let p = self
                    .polynomial
                    .as_ref()
                    .ok_or_else(|| Error::InvalidSymbol("polynomial: missing".into()))?;
                let poly = Polynomial::new(p.coeffs.iter().map(|&c| c.into()).collect());
                if poly.degree().unwrap_or(0) < 1 {
                    return Err(Error::InvalidSymbol("polynomial.coeffs: degree must be >= 1".into()));
                }
                Ok(Problem::PolynomialToeplitz(poly))
            }
            OperatorKind::LinearFractional => {
                self.reject(
                    &[
                        ("blaschke", self.blaschke.is_some()),
                        ("singular", self.singular.is_some()),
                        ("outer", self.outer.is_some()),
                        ("polynomial", self.polynomial.is_some()),
                    ],
                    "linear_fractional",
                )?;
                Ok(Problem::LinearFractional(self.mobius_map()?))
            }
            OperatorKind::Composition => self.composition(),
        }
    }

    fn mobius_map(&self) -> Result<MobiusMap> {
        let m = self
            .mobius
            .ok_or_else(|| Error::InvalidSymbol("mobius: missing".into()))?;
        MobiusMap::new(m.a.into(), m.b.into(), m.c.into(), m.d.into())
            .map_err(|_| Error::InvalidSymbol("mobius: ad - bc = 0".into()))
    }

    fn composition(&self) -> Result<Problem> {
        self.reject(
            &[("polynomial", self.polynomial.is_some()), ("outer", self.outer.is_some())],
            "composition",
        )?;
        if self.mobius.is_some() {
            self.reject(
                &[("blaschke", self.blaschke.is_some()), ("singular", self.singular.is_some())],
                "composition with mobius",
            )?;
            return Ok(Problem::Composition(CompositionSymbol::Mobius(self.mobius_map()?)));
        }
        let f = self.factored()?;
        match (f.blaschke.is_constant(), f.singular.is_trivial()) {
            (_, true) => Ok(Problem::Composition(CompositionSymbol::Blaschke(f.blaschke))),
            (true, false) if f.blaschke.rotation() == 0.0 => {
                Ok(Problem::Composition(CompositionSymbol::Singular(f.singular)))
            }
            _ => Err(Error::InvalidSymbol(
                "composition: give either a blaschke product or a singular inner function".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::symbols::Analytic;

    #[test]
    fn polynomial_file() {
        let (p, _) = parse(r#"{"polynomial": {"coeffs": [{"re": -2}, {"re": 1}]}}"#).unwrap();
        let Problem::PolynomialToeplitz(p) = p else { panic!() };
        assert_eq!(p.degree(), Some(1));
    }

    #[test]
    fn toeplitz_file() {
        let text = r#"{"singular": {"atoms": [{"angle": 0.0, "mass": 1.0}]},
                       "outer": {"exterior_zeros": [{"re": 2.0, "im": 0.0}]}}"#;
        let (p, _) = parse(text).unwrap();
        let Problem::Toeplitz { symbol, .. } = p else { panic!() };
        let v = symbol.eval(c(0.0, 0.0));
        assert!((v - c(-2.0 * (-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn atom_given_as_point_is_rejected() {
        let err = parse(r#"{"singular": {"atoms": [{"re": 1.1, "im": 0.0, "mass": 1.0}]}}"#).unwrap_err();
        let Error::InvalidSymbol(msg) = err else { panic!() };
        assert!(msg.contains("line 1"));
    }

    #[test]
    fn bad_zero_reports_field() {
        let err = parse(r#"{"blaschke": {"zeros": [{"re": 1.5}]}}"#).unwrap_err();
        assert!(format!("{err}").contains("blaschke.zeros[0]"));
    }

    #[test]
    fn composition_and_mobius() {
        let (p, _) = parse(r#"{"operator": "composition", "blaschke": {"origin_order": 2}}"#).unwrap();
        assert!(matches!(p, Problem::Composition(CompositionSymbol::Blaschke(_))));
        let text = r#"{"mobius": {"a": {"re": 1}, "b": {"re": 0}, "c": {"re": 1}, "d": {"re": -2}}}"#;
        let (p, _) = parse(text).unwrap();
        assert!(matches!(p, Problem::LinearFractional(_)));
    }

    #[test]
    fn hash_is_stable() {
        let (_, a) = parse(r#"{"polynomial": {"coeffs": [{"re": -2}, {"re": 1}]}}"#).unwrap();
        let (_, b) = parse(r#"{ "polynomial" : { "coeffs" : [ {"re": -2, "im": 0}, {"re": 1} ] } }"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
