//! Brute-force cross-checks that share no code with the engine beyond the
//! handle data types.

use num_rational::Ratio;
use serde::Serialize;

use crate::compressionbody::{ExceptionalClass, OneHandle, ZeroHandle};
use crate::orbifold::{Rational, VertexTriple, Weight};

type Q = Ratio<i128>;

fn inv(w: Weight) -> Q {
    match w.value() {
        Some(k) => Q::new(1, k as i128),
        None => Q::from_integer(0),
    }
}

fn to_rational(q: Q) -> Rational {
    Rational::new(*q.numer() as i64, *q.denom() as i64)
}

/// Whether `(a, b, c)` appears on the list of spherical triples
/// `(2,2,k)`, `(2,3,3)`, `(2,3,4)`, `(2,3,5)` with `k` finite.
pub fn listed_spherical(a: Weight, b: Weight, c: Weight) -> bool {
    let mut t = [a.value(), b.value(), c.value()];
    // ∞ sorts last when mapped to u64::MAX.
    t.sort_by_key(|v| v.unwrap_or(u64::MAX));
    matches!(
        t,
        [Some(2), Some(2), Some(_)] | [Some(2), Some(3), Some(3)] | [Some(2), Some(3), Some(4)] | [Some(2), Some(3), Some(5)]
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub checked: usize,
    pub mismatches: Vec<[String; 3]>,
}

/// Every triple with entries in `2..=max` or `∞` (up to order), comparing
/// engine validity against the list.
pub fn spherical_triple_check(max: u64) -> TripleReport {
    let ws: Vec<Weight> = (2..=max).map(Weight::finite).chain([Weight::INFINITY]).collect();
    let mut r = TripleReport::default();
    for i in 0..ws.len() {
        for j in i..ws.len() {
            for k in j..ws.len() {
                let (a, b, c) = (ws[i], ws[j], ws[k]);
                r.checked += 1;
                if VertexTriple::new(a, b, c).is_valid() != listed_spherical(a, b, c) {
                    r.mismatches.push([a.to_string(), b.to_string(), c.to_string()]);
                }
            }
        }
    }
    r
}

/// `x` of a surface given by Euler characteristic and punctures.
fn surface_x(euler: i64, punctures: &[Weight]) -> Q {
    punctures.iter().fold(Q::from_integer(-euler as i128), |acc, w| acc + Q::from_integer(1) - inv(*w))
}

/// Boundary data counted directly from cells: each ball contributes a
/// sphere, each product two copies of its base, each 1-handle removes two
/// discs and adds an annulus.
pub struct CellCount {
    pub plus_euler: i64,
    pub plus_punctures: Vec<Weight>,
    pub minus_x: Q,
    pub has_product: bool,
}

pub fn count_cells(zero: &[ZeroHandle], one: &[OneHandle]) -> CellCount {
    let mut euler = 0;
    let mut punct = Vec::new();
    let mut minus_x = Q::from_integer(0);
    let mut has_product = false;
    for z in zero {
        match z {
            ZeroHandle::Ball { cone } => {
                euler += 2;
                punct.extend(cone.iter().copied());
            }
            ZeroHandle::Product { base } => {
                has_product = true;
                let e = 2 - 2 * base.genus() as i64;
                euler += e;
                punct.extend(base.punctures().iter().copied());
                minus_x += surface_x(e, base.punctures());
            }
        }
    }
    for h in one {
        // Two discs out, an annulus in.
        euler -= 2;
        if let Some(w) = h.weight {
            for _ in 0..2 {
                let i = punct.iter().position(|p| *p == w).expect("weighted end on a matching puncture");
                punct.remove(i);
            }
        }
    }
    CellCount { plus_euler: euler, plus_punctures: punct, minus_x, has_product }
}

pub fn independent_n(zero: &[ZeroHandle], one: &[OneHandle]) -> Rational {
    let c = count_cells(zero, one);
    to_rational(surface_x(c.plus_euler, &c.plus_punctures) - c.minus_x)
}

/// Classification from the shape of `∂₊` and the handle counts alone.
pub fn reclassify(zero: &[ZeroHandle], one: &[OneHandle]) -> ExceptionalClass {
    let c = count_cells(zero, one);
    let n = surface_x(c.plus_euler, &c.plus_punctures) - c.minus_x;
    let zero_q = Q::from_integer(0);
    if n > zero_q || c.has_product {
        return ExceptionalClass::None;
    }
    let genus = (2 - c.plus_euler) / 2;
    let k = c.plus_punctures.len();
    if n < zero_q {
        // Only balls with an arc or vertex survive here.
        return if genus == 0 && k <= 3 { ExceptionalClass::TrivialBall } else { ExceptionalClass::None };
    }
    match (genus, k) {
        (0, 2) => ExceptionalClass::EuclideanTrivialBall,
        (0, 4) => ExceptionalClass::EuclideanPillow,
        (1, 0) if zero.iter().any(|z| !z.slots().is_empty()) => ExceptionalClass::SolidTorusCore,
        (1, 0) => ExceptionalClass::SolidTorusEmpty,
        _ => ExceptionalClass::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_membership() {
        let w = Weight::finite;
        assert!(listed_spherical(w(5), w(3), w(2)));
        assert!(!listed_spherical(w(2), Weight::INFINITY, w(2)));
        assert!(!listed_spherical(w(2), w(3), w(6)));
        assert!(!listed_spherical(w(3), w(3), w(3)));
    }

    #[test]
    fn small_grid_agrees() {
        let r = spherical_triple_check(12);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        // 12 symbols, multisets of size 3.
        assert_eq!(r.checked, 364);
    }
}
