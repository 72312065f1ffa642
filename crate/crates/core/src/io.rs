//! JSON and CSV formats.
//!
//! Curves: `{"manifold": "hyperbolic" | "euclidean", "points": [[x, y], ...]}`.
//! Paths: `{"step": ε, "curves": [curve, ...], "energies": [...]}`.
//! Ensembles: a JSON list of curves. Signals: one `re,im` pair per line.
//! Every real number is written with 17 significant digits, so reading a file
//! back reproduces the stored values exactly.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::{Error as _, SerializeSeq};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::curve::{CurveTangent, DiscreteCurve};
use crate::error::{GeoError, Result};
use crate::geodesic::GeodesicPath;
use crate::manifold::Geometry;
use crate::radar::{ComplexSignal, ProductCurve, ReflectionSeries};

/// A real serialised with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("cannot write non-finite number {}", self.0)));
        }
        RawValue::from_string(format_real(self.0)).map_err(S::Error::custom)?.serialize(s)
    }
}

fn pairs<I: IntoIterator<Item = [f64; 2]>>(it: I) -> Vec<[Real; 2]> {
    it.into_iter().map(|[a, b]| [Real(a), Real(b)]).collect()
}

pub fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

/// Serialises a curve in the curve file format.
#[derive(Debug, Clone, Copy)]
pub struct CurveJson<'a>(pub &'a DiscreteCurve);

impl Serialize for CurveJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            manifold: &'static str,
            points: Vec<[Real; 2]>,
        }
        Out { manifold: self.0.geometry().name(), points: pairs(self.0.coords()) }.serialize(s)
    }
}

/// Serialises a vector field as its list of chart components.
#[derive(Debug, Clone, Copy)]
pub struct TangentJson<'a>(pub &'a CurveTangent);

impl Serialize for TangentJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        pairs(self.0.components()).serialize(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PathJson<'a>(pub &'a GeodesicPath);

impl Serialize for PathJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Curves<'b>(&'b [DiscreteCurve]);
        impl Serialize for Curves<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for c in self.0 {
                    seq.serialize_element(&CurveJson(c))?;
                }
                seq.end()
            }
        }
        #[derive(Serialize)]
        struct Out<'b> {
            step: Real,
            curves: Curves<'b>,
            energies: Vec<Real>,
        }
        Out { step: Real(self.0.step), curves: Curves(&self.0.curves), energies: reals(&self.0.energies) }.serialize(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesJson<'a>(pub &'a ReflectionSeries);

impl Serialize for SeriesJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Frame {
            power: Real,
            coefficients: Vec<[Real; 2]>,
        }
        #[derive(Serialize)]
        struct Out {
            window: usize,
            order: usize,
            frames: Vec<Frame>,
        }
        let frames = self
            .0
            .frames
            .iter()
            .map(|f| Frame { power: Real(f.power), coefficients: pairs(f.coefficients.iter().map(|z| [z.re, z.im])) })
            .collect();
        Out { window: self.0.window, order: self.0.order, frames }.serialize(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProductJson<'a>(pub &'a ProductCurve);

impl Serialize for ProductJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'b> {
            window: usize,
            power: Vec<Real>,
            components: Vec<CurveJson<'b>>,
        }
        Out {
            window: self.0.window,
            power: reals(&self.0.power),
            components: self.0.components.iter().map(CurveJson).collect(),
        }
        .serialize(s)
    }
}

/// Curve file contents before validation.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub manifold: Geometry,
    pub points: Vec<[f64; 2]>,
}

impl CurveSpec {
    pub fn to_curve(&self) -> Result<DiscreteCurve> {
        DiscreteCurve::from_coords(self.manifold, &self.points)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if v.is_finite() {
            Ok(Real(v))
        } else {
            Err(D::Error::custom("non-finite number"))
        }
    }
}

pub fn write_curve(c: &DiscreteCurve) -> String {
    serde_json::to_string(&CurveJson(c)).expect("finite coordinates always serialise")
}

pub fn read_curve(text: &str) -> Result<DiscreteCurve> {
    serde_json::from_str::<CurveSpec>(text)?.to_curve()
}

pub fn write_ensemble(curves: &[DiscreteCurve]) -> String {
    let items: Vec<CurveJson> = curves.iter().map(CurveJson).collect();
    serde_json::to_string(&items).expect("finite coordinates always serialise")
}

pub fn read_ensemble(text: &str) -> Result<Vec<DiscreteCurve>> {
    serde_json::from_str::<Vec<CurveSpec>>(text)?.iter().map(CurveSpec::to_curve).collect()
}

pub fn write_path(p: &GeodesicPath) -> String {
    serde_json::to_string(&PathJson(p)).expect("finite coordinates always serialise")
}

pub fn write_series(s: &ReflectionSeries) -> String {
    serde_json::to_string(&SeriesJson(s)).expect("finite coefficients always serialise")
}

/// Parses `re,im` lines; blank lines, `#` comments and a leading `re,im` header are skipped.
pub fn read_signal_csv(text: &str) -> Result<ComplexSignal> {
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (samples.is_empty() && line.eq_ignore_ascii_case("re,im")) {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let mut next = |what: &str| -> Result<f64> {
            let f = fields.next().ok_or_else(|| GeoError::Parse(format!("line {}: missing {what} field", lineno + 1)))?;
            f.parse::<f64>().map_err(|e| GeoError::Parse(format!("line {}: {what} field {f:?}: {e}", lineno + 1)))
        };
        let re = next("re")?;
        let im = next("im")?;
        if fields.next().is_some() {
            return Err(GeoError::Parse(format!("line {}: expected exactly two fields", lineno + 1)));
        }
        samples.push(Complex64::new(re, im));
    }
    ComplexSignal::new(samples)
}

pub fn write_signal_csv(z: &ComplexSignal) -> String {
    let mut out = String::with_capacity(z.len() * 48);
    for s in z.samples() {
        out.push_str(&format_real(s.re));
        out.push(',');
        out.push_str(&format_real(s.im));
        out.push('\n');
    }
    out
}
