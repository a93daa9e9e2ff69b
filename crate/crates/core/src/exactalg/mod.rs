//! Exact arithmetic over ℚ and cyclotomic fields ℚ(ζ_N), and dense linear
//! algebra over them.

mod cyclotomic;
mod elem;
pub mod linalg;
mod rat;
mod sqrt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use cyclotomic::{cyclotomic_coeffs, cyclotomic_polynomial, euler_phi, lcm, FieldContext};
pub use elem::CycElem;
pub use linalg::{kernel, Matrix};
pub use rat::{format_rat, parse_rat, rat, rat_frac, rat_sqrt_exact, Rat};
pub use sqrt::{sqrt_in_field, SquareTest};

#[derive(Serialize, Deserialize)]
struct CycElemRepr {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycElemRepr {
            conductor: self.conductor(),
            coeffs: self.coeffs().iter().map(format_rat).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CycElem, D::Error> {
        let repr = CycElemRepr::deserialize(d)?;
        if repr.conductor == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rat(s))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CycElem::from_coeffs(&FieldContext::get(repr.conductor), &coeffs)
            .map_err(serde::de::Error::custom)
    }
}
