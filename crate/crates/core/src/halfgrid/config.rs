use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{lcm, CycElem, FieldContext};
use crate::projgeom::{ProjLine3, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub coords: ProjPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledLine {
    pub label: String,
    pub pluecker: ProjLine3,
}

/// Compares labels with embedded integers numerically, so `p[2][0] < p[10][0]`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let nx = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let ny = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (dx, dy) = (&x[..nx], &y[..ny]);
                let tx = dx.iter().skip_while(|&&c| c == b'0').count();
                let ty = dy.iter().skip_while(|&&c| c == b'0').count();
                let o = tx.cmp(&ty).then_with(|| dx[nx - tx..].cmp(&dy[ny - ty..])).then(nx.cmp(&ny));
                if o != Ordering::Equal {
                    return o;
                }
                x = &x[nx..];
                y = &y[ny..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

/// A labeled point set in P³ over one cyclotomic field, with optional
/// declared lines (half-grid lines and transversals).
#[derive(Clone)]
pub struct Config {
    context: Arc<FieldContext>,
    points: Vec<LabeledPoint>,
    lines: Vec<LabeledLine>,
    /// Set when the configuration lies outside what the construction is known to guarantee.
    pub caveat: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    conductor: u32,
    points: Vec<LabeledPoint>,
    #[serde(default)]
    lines: Vec<LabeledLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    caveat: Option<String>,
}

impl Config {
    /// Embeds everything into one field (at least `conductor`), normalizes,
    /// sorts by label and checks that points and labels are distinct.
    pub fn new(conductor: u32, points: Vec<(String, ProjPoint)>, lines: Vec<(String, ProjLine3)>) -> Result<Config> {
        let n = points
            .iter()
            .map(|(_, p)| p.conductor())
            .chain(lines.iter().map(|(_, l)| l.conductor()))
            .fold(conductor.max(1), lcm);
        let context = FieldContext::get(n);
        let mut pts = points
            .into_iter()
            .map(|(label, p)| {
                if p.dim() != 3 {
                    return Err(Error::Input(format!("{label} is not a point of P^3")));
                }
                Ok(LabeledPoint {
                    label,
                    coords: p.embed(n)?.normalized(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut lns = lines
            .into_iter()
            .map(|(label, l)| {
                Ok(LabeledLine {
                    label,
                    pluecker: l.embed(n)?.normalized(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        pts.sort_by(|a, b| natural_cmp(&a.label, &b.label));
        lns.sort_by(|a, b| natural_cmp(&a.label, &b.label));
        for w in pts.windows(2) {
            if w[0].label == w[1].label {
                return Err(Error::Input(format!("duplicate label {}", w[0].label)));
            }
        }
        for w in lns.windows(2) {
            if w[0].label == w[1].label {
                return Err(Error::Input(format!("duplicate line label {}", w[0].label)));
            }
        }
        let mut seen: HashMap<&[CycElem], &str> = HashMap::new();
        for p in &pts {
            if let Some(other) = seen.insert(p.coords.coords(), &p.label) {
                return Err(Error::Input(format!("points {other} and {} coincide", p.label)));
            }
        }
        Ok(Config {
            context,
            points: pts,
            lines: lns,
            caveat: None,
        })
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.context
    }

    pub fn conductor(&self) -> u32 {
        self.context.conductor()
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[LabeledLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, label: &str) -> Option<&ProjPoint> {
        self.points.iter().find(|p| p.label == label).map(|p| &p.coords)
    }

    pub fn line(&self, label: &str) -> Option<&ProjLine3> {
        self.lines.iter().find(|l| l.label == label).map(|l| &l.pluecker)
    }

    /// Declared lines other than the transversals (labels `T…`).
    pub fn halfgrid_lines(&self) -> Vec<&LabeledLine> {
        self.lines.iter().filter(|l| !l.label.starts_with('T')).collect()
    }

    pub fn transversals(&self) -> Vec<&LabeledLine> {
        self.lines.iter().filter(|l| l.label.starts_with('T')).collect()
    }

    /// Labels of the points lying on `l`.
    pub fn points_on(&self, l: &ProjLine3) -> Vec<&str> {
        self.points
            .iter()
            .filter(|p| l.contains(&p.coords))
            .map(|p| p.label.as_str())
            .collect()
    }

    /// Label of the point equal to `p`, if any.
    pub fn find(&self, p: &ProjPoint) -> Option<&str> {
        self.points.iter().find(|q| q.coords == *p).map(|q| q.label.as_str())
    }

    pub fn embed(&self, n: u32) -> Result<Config> {
        let mut c = Config::new(
            n,
            self.points.iter().map(|p| (p.label.clone(), p.coords.clone())).collect(),
            self.lines.iter().map(|l| (l.label.clone(), l.pluecker.clone())).collect(),
        )?;
        c.caveat = self.caveat.clone();
        Ok(c)
    }

    /// The point set and lines of both configurations, in a common field.
    pub fn union(&self, other: &Config) -> Result<Config> {
        let mut c = Config::new(
            lcm(self.conductor(), other.conductor()),
            self.points
                .iter()
                .chain(&other.points)
                .map(|p| (p.label.clone(), p.coords.clone()))
                .collect(),
            self.lines
                .iter()
                .chain(&other.lines)
                .map(|l| (l.label.clone(), l.pluecker.clone()))
                .collect(),
        )?;
        c.caveat = self.caveat.clone().or_else(|| other.caveat.clone());
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ConfigRepr {
            conductor: self.conductor(),
            points: self.points.clone(),
            lines: self.lines.clone(),
            caveat: self.caveat.clone(),
        })
        .expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Config> {
        let repr: ConfigRepr = serde_json::from_str(s).map_err(|e| Error::Input(format!("config JSON: {e}")))?;
        let mut c = Config::new(
            repr.conductor,
            repr.points.into_iter().map(|p| (p.label, p.coords)).collect(),
            repr.lines.into_iter().map(|l| (l.label, l.pluecker)).collect(),
        )?;
        c.caveat = repr.caveat;
        Ok(c)
    }
}

impl PartialEq for Config {
    fn eq(&self, other: &Config) -> bool {
        self.conductor() == other.conductor() && self.points == other.points && self.lines == other.lines
    }
}

impl std::fmt::Debug for Config {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Config(conductor {}, {} points, {} lines)",
            self.conductor(),
            self.points.len(),
            self.lines.len()
        )
    }
}
