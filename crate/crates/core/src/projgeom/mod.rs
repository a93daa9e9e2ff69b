//! Exact projective geometry in P¹ and P³: points, Plücker lines, planes,
//! quadrics, incidence and the line constructions built on them.

mod ideal;
mod line;
mod ops;
mod point;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use ideal::{format_line_ideal, line_ideal_forms, parse_line_ideal};
pub use line::{Plane3, ProjLine3, Quadric3, PLUECKER_PAIRS, QUADRIC_MONOMIALS};
pub use ops::{
    apply_transform, coords_in_basis, cross_ratio, line_through, lines_meet, meet_line_plane, meet_planes,
    on_line, plane_through, quadric_through_three_skew_lines, second_intersection_with_quadric,
    second_line_meeting_four, transform_from_point_correspondence, transversal_through_point, CrossRatioClass,
    CrossRatioKind,
};
pub use point::ProjPoint;

use crate::exactalg::CycElem;

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ProjPoint, D::Error> {
        let coords = Vec::<CycElem>::deserialize(d)?;
        ProjPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Plane3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Plane3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Plane3, D::Error> {
        Plane3::new(Vec::<CycElem>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ProjLine3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.pluecker().serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LineRepr {
    Points(Vec<ProjPoint>),
    Pluecker(Vec<CycElem>),
}

impl<'de> Deserialize<'de> for ProjLine3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ProjLine3, D::Error> {
        let line = match LineRepr::deserialize(d)? {
            LineRepr::Points(ps) if ps.len() == 2 => ProjLine3::through(&ps[0], &ps[1]),
            LineRepr::Points(ps) => Err(crate::Error::Input(format!("a line needs 2 points, got {}", ps.len()))),
            LineRepr::Pluecker(p) => ProjLine3::from_pluecker(p),
        };
        line.map_err(serde::de::Error::custom)
    }
}
