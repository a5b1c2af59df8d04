//! Complex scalar type shared by every module, plus its JSON shape.

use num_complex::Complex64;

/// Complex scalar used for orders, eigenvalues, coefficients and exponents.
pub type ComplexScalar = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Serde adapter giving complex numbers the `{ "re": .., "im": .. }` layout.
pub mod serde_complex {
    use super::ComplexScalar;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &ComplexScalar, s: S) -> Result<S::Ok, S::Error> {
        Repr { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexScalar, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(ComplexScalar::new(r.re, r.im))
    }
}

/// Newtype wrapper for places where a bare complex value is (de)serialized
/// inside containers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct JsonComplex(#[serde(with = "serde_complex")] pub ComplexScalar);

impl From<ComplexScalar> for JsonComplex {
    fn from(z: ComplexScalar) -> Self {
        JsonComplex(z)
    }
}

impl From<JsonComplex> for ComplexScalar {
    fn from(z: JsonComplex) -> Self {
        z.0
    }
}
