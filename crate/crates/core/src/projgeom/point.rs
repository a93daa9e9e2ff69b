use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{lcm, CycElem, FieldContext};

/// A point of P¹ or P³ with exact homogeneous coordinates.
///
/// Coordinates are kept as given; equality compares up to a nonzero scalar.
#[derive(Clone)]
pub struct ProjPoint {
    coords: Vec<CycElem>,
}

/// Brings a family of elements into one common field (the lcm of their conductors).
pub(crate) fn common_field(xs: Vec<CycElem>) -> Vec<CycElem> {
    let n = xs.iter().fold(1, |acc, x| lcm(acc, x.conductor()));
    xs.into_iter()
        .map(|x| x.embed(n).expect("lcm is a common multiple"))
        .collect()
}

impl ProjPoint {
    pub fn new(coords: Vec<CycElem>) -> Result<ProjPoint> {
        if coords.len() != 2 && coords.len() != 4 {
            return Err(Error::Input(format!(
                "points live in P^1 or P^3, got {} coordinates",
                coords.len()
            )));
        }
        if coords.iter().all(CycElem::is_zero) {
            return Err(Error::Input("all coordinates are zero".into()));
        }
        Ok(ProjPoint {
            coords: common_field(coords),
        })
    }

    /// Convenience constructor for integer coordinates.
    pub fn from_ints(ctx: &Arc<FieldContext>, xs: &[i64]) -> ProjPoint {
        ProjPoint::new(xs.iter().map(|&x| CycElem::from_i64(ctx, x)).collect())
            .expect("nonzero integer point")
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<CycElem>) -> ProjPoint {
        debug_assert!(!coords.iter().all(CycElem::is_zero));
        ProjPoint { coords }
    }

    pub(crate) fn from_vec(coords: Vec<CycElem>) -> Option<ProjPoint> {
        if coords.iter().all(CycElem::is_zero) {
            None
        } else {
            Some(ProjPoint { coords })
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[CycElem] {
        &self.coords
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.coords[0].context()
    }

    pub fn conductor(&self) -> u32 {
        self.coords[0].conductor()
    }

    pub fn embed(&self, n: u32) -> Result<ProjPoint> {
        Ok(ProjPoint {
            coords: self
                .coords
                .iter()
                .map(|c| c.embed(n))
                .collect::<Result<_>>()?,
        })
    }

    /// Representative with first nonzero coordinate equal to 1.
    pub fn normalized(&self) -> ProjPoint {
        let lead = self
            .coords
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero point");
        if lead.is_one() {
            return self.clone();
        }
        let inv = lead.inv().expect("nonzero lead");
        ProjPoint {
            coords: self.coords.iter().map(|c| c * &inv).collect(),
        }
    }

    /// Total order on normalized representatives.
    pub fn cmp_canonical(&self, other: &ProjPoint) -> Ordering {
        let (a, b) = (self.normalized(), other.normalized());
        a.coords
            .len()
            .cmp(&b.coords.len())
            .then_with(|| {
                for (x, y) in a.coords.iter().zip(&b.coords) {
                    // zero coordinates first, so [0:..] < [1:..]
                    let o = (!x.is_zero()).cmp(&!y.is_zero()).then_with(|| x.cmp_canonical(y));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &ProjPoint) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let Some(k) = self.coords.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let (ak, bk) = (&self.coords[k], &other.coords[k]);
        if bk.is_zero() {
            return false;
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a * bk == b * ak)
    }
}

impl Eq for ProjPoint {}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
