use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Rational, Weight};

/// A closed orientable surface with weighted punctures.
///
/// Punctures are kept sorted (finite ascending, then `∞`) so equal components
/// compare and serialize identically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "RawComponent")]
pub struct SurfaceComponent {
    genus: u32,
    punctures: Vec<Weight>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    genus: u32,
    #[serde(default)]
    punctures: Vec<Weight>,
}

impl From<RawComponent> for SurfaceComponent {
    fn from(raw: RawComponent) -> Self {
        SurfaceComponent::new(raw.genus, raw.punctures)
    }
}

impl SurfaceComponent {
    pub fn new(genus: u32, mut punctures: Vec<Weight>) -> Self {
        punctures.sort();
        SurfaceComponent { genus, punctures }
    }

    pub fn sphere(punctures: Vec<Weight>) -> Self {
        Self::new(0, punctures)
    }

    pub fn closed(genus: u32) -> Self {
        Self::new(genus, Vec::new())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> &[Weight] {
        &self.punctures
    }

    pub fn is_sphere(&self) -> bool {
        self.genus == 0
    }

    /// Euler characteristic of the underlying closed surface.
    pub fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    pub fn orb_char(&self) -> Rational {
        let mut x = Rational::from_int(-self.euler());
        for p in &self.punctures {
            x += p.puncture_term();
        }
        x
    }

    pub fn classify(&self) -> ComponentClass {
        classify_2orbifold(self)
    }
}

impl fmt::Display for SurfaceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}[", self.genus)?;
        for (i, p) in self.punctures.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SurfaceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A possibly empty, possibly disconnected closed 2-orbifold.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbSurface {
    pub components: Vec<SurfaceComponent>,
}

impl OrbSurface {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(components: Vec<SurfaceComponent>) -> Self {
        OrbSurface { components }
    }

    pub fn orb_char(&self) -> Rational {
        self.components.iter().map(SurfaceComponent::orb_char).sum()
    }

    pub fn puncture_count(&self) -> usize {
        self.components.iter().map(|c| c.punctures.len()).sum()
    }

    /// Components in sorted order: equal iff the surfaces agree componentwise.
    pub fn canonical(&self) -> Vec<SurfaceComponent> {
        let mut cs = self.components.clone();
        cs.sort();
        cs
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

impl From<SurfaceComponent> for OrbSurface {
    fn from(c: SurfaceComponent) -> Self {
        OrbSurface::new(vec![c])
    }
}

pub fn orb_char(s: &OrbSurface) -> Rational {
    s.orb_char()
}

/// `d · x(S)` for a degree-`d` orbifold cover.
pub fn cover_char(s: &OrbSurface, d: u64) -> Rational {
    assert!(d >= 1, "cover degree must be positive");
    s.orb_char() * Rational::from_int(d as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Bad,
    Spherical,
    Euclidean,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentClass {
    pub geometry: Geometry,
    pub turnover: bool,
    /// Sphere with a single puncture of weight `∞`.
    pub inf_once_punctured: bool,
}

pub fn classify_2orbifold(c: &SurfaceComponent) -> ComponentClass {
    let p = c.punctures();
    let sphere = c.is_sphere();
    let bad = sphere
        && match p {
            [w] => !w.is_infinite(),
            [a, b] => a != b,
            _ => false,
        };
    let x = c.orb_char();
    let geometry = if bad {
        Geometry::Bad
    } else if x.is_negative() {
        Geometry::Spherical
    } else if x.is_zero() {
        Geometry::Euclidean
    } else {
        Geometry::Hyperbolic
    };
    ComponentClass {
        geometry,
        turnover: sphere && p.len() == 3,
        inf_once_punctured: sphere && p.len() == 1 && p[0].is_infinite(),
    }
}

/// Incident weights of a trivalent vertex, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexTriple([Weight; 3]);

impl VertexTriple {
    pub fn new(a: Weight, b: Weight, c: Weight) -> Self {
        let mut t = [a, b, c];
        t.sort();
        VertexTriple(t)
    }

    pub fn weights(&self) -> [Weight; 3] {
        self.0
    }

    pub fn char(&self) -> Rational {
        Rational::one() - self.0.iter().map(|w| w.reciprocal()).sum::<Rational>()
    }

    pub fn is_valid(&self) -> bool {
        self.char().is_negative()
    }
}

/// `(x(v), x(v) < 0)`.
pub fn vertex_char(t: VertexTriple) -> (Rational, bool) {
    let x = t.char();
    let valid = x.is_negative();
    (x, valid)
}
