//! Closed-form bounds, genus/characteristic conversions and the knot
//! arithmetic behind the additivity examples. Everything is exact.

mod report;

use serde::{Deserialize, Serialize};

use crate::compressionbody::{classify_exceptional, ExceptionalClass};
use crate::decomposition::{Decomposition, Role};
use crate::orbifold::{Rational, Weight};

pub use report::{Claim, ExampleReport, Quantity};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("no degeneration: {t1} + {t2} <= {t_sum}")]
    NoDegeneration { t1: u64, t2: u64, t_sum: u64 },
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("weight must be finite and at least 2")]
    BadWeight,
}

/// A finite group acting on a 3-manifold, as far as the bounds need it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupData {
    pub order: u64,
    /// Every point has a cyclic stabilizer.
    pub cyclic_stabilizers: bool,
}

impl GroupData {
    pub fn new(order: u64, cyclic_stabilizers: bool) -> Result<Self, BoundsError> {
        if order == 0 {
            return Err(BoundsError::EmptyGroup);
        }
        Ok(GroupData { order, cyclic_stabilizers })
    }

    pub fn cyclic(order: u64) -> Self {
        GroupData { order: order.max(1), cyclic_stabilizers: true }
    }

    pub fn c(&self) -> i64 {
        if self.cyclic_stabilizers {
            1
        } else {
            2
        }
    }

    fn order_i64(&self) -> i64 {
        self.order as i64
    }
}

fn one_minus(w: Weight) -> Rational {
    Rational::one() - w.reciprocal()
}

/// Genus of a splitting with `components` components and characteristic `x`.
/// Non-integral results mean the input did not come from a genuine splitting.
pub fn genus_from_char(x: &Rational, components: u64) -> Rational {
    x.clone() / 2 + Rational::from_int(components as i64)
}

/// Characteristic upstairs in a `|G|`-fold branched cover.
pub fn lift_by_group(x: &Rational, g: &GroupData) -> Rational {
    x.clone() * g.order_i64()
}

/// Characteristic of a `(g, b)` bridge surface for a knot of weight `k`.
pub fn bridge_surface_char(g: u64, b: u64, k: Weight) -> Rational {
    Rational::from_int(2 * (g as i64 + b as i64 - 1)) - k.reciprocal() * (2 * b as i64)
}

/// `2t − 2b/k`: the tunnel-number lower bound for a bridge surface.
pub fn tunnel_char_bound(t: u64, b: u64, k: Weight) -> Rational {
    Rational::from_int(2 * t as i64) - k.reciprocal() * (2 * b as i64)
}

/// Sum of two `(p, q)` torus knots of weight `k`: the `(2,1)` surface beats
/// every `(1, b₁)` surface and every bridge sphere.
pub fn additive_example(q: i64, k: Weight) -> Result<ExampleReport, BoundsError> {
    let q = q.unsigned_abs() as i64;
    let threshold = Rational::from_int(2) + one_minus(k).recip();
    if Rational::from_int(q) <= threshold {
        return Err(BoundsError::HypothesisFailed(format!("|q| = {q} must exceed 2 + 1/(1 - 1/k) = {threshold}")));
    }
    let factor = bridge_surface_char(1, 1, k);
    let sphere_x = -k.reciprocal() * 2;
    let candidate = bridge_surface_char(2, 1, k);
    let one_bridge = one_minus(k) * (2 * (q - 1));
    let bridge_sphere = one_minus(k) * (2 * (2 * q - 1)) - Rational::from_int(2);

    let mut r = ExampleReport::new("section3-additive");
    r.param("q", q).param("k", k);
    r.quantity("x_w(S3,K_i)", factor.clone())
        .quantity("x_w(S)", sphere_x.clone())
        .quantity("x_w(H) (2,1)", candidate.clone())
        .quantity("(1,b1) lower bound", one_bridge.clone())
        .quantity("bridge sphere lower bound", bridge_sphere.clone());
    r.claim("x_w(S3,K_i) = 2(1 - 1/k)", factor == one_minus(k) * 2);
    r.claim("x_w(H) = x_w(K_1) + x_w(K_2) - x_w(S)", candidate == factor.clone() * 2 - sphere_x);
    r.claim("(1,b1) bound exceeds the (2,1) surface", one_bridge > candidate);
    r.claim("bridge sphere bound exceeds the (2,1) surface", bridge_sphere > candidate);
    if let Some(order) = k.value() {
        let g = GroupData::cyclic(order);
        let genus = |x: &Rational| genus_from_char(&lift_by_group(x, &g), 1);
        let (gw, gi) = (genus(&candidate), genus(&factor));
        r.quantity("g(W;G)", gw.clone()).quantity("g(W_i;G)", gi.clone());
        r.claim("g(W;G) = g(W_1;G) + g(W_2;G)", gw == gi * 2);
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubadditiveThreshold {
    pub k: u64,
    /// `2(t₁ + t₂ − b/k)`, a lower bound for the summed characteristics.
    pub factor_bound: Rational,
    /// `2t(K)`, an upper bound for the characteristic of the sum.
    pub sum_bound: Rational,
}

/// Smallest weight `k ≥ 2` with `b/k < t₁ + t₂ − t`.
pub fn subadditive_threshold(t1: u64, t2: u64, t_sum: u64, b_sum: u64) -> Result<SubadditiveThreshold, BoundsError> {
    if t1 + t2 <= t_sum {
        return Err(BoundsError::NoDegeneration { t1, t2, t_sum });
    }
    let gap = t1 + t2 - t_sum;
    let k = (b_sum / gap + 1).max(2);
    let factor_bound = (Rational::from_int(gap as i64 + t_sum as i64) - Rational::new(b_sum as i64, k as i64)) * 2;
    let sum_bound = Rational::from_int(2 * t_sum as i64);
    debug_assert!(factor_bound > sum_bound);
    Ok(SubadditiveThreshold { k, factor_bound, sum_bound })
}

pub fn subadditive_example(t1: u64, t2: u64, t_sum: u64, b_sum: u64) -> Result<ExampleReport, BoundsError> {
    let s = subadditive_threshold(t1, t2, t_sum, b_sum)?;
    let mut r = ExampleReport::new("section3-subadditive");
    r.param("t1", t1).param("t2", t2).param("t", t_sum).param("b", b_sum);
    r.quantity("k", Rational::from_int(s.k as i64))
        .quantity("2(t1 + t2 - b/k)", s.factor_bound.clone())
        .quantity("2t(K)", s.sum_bound.clone());
    let b_over = |k: u64| Rational::new(b_sum as i64, k as i64);
    let gap = Rational::from_int((t1 + t2 - t_sum) as i64);
    r.claim("b/k < t1 + t2 - t", b_over(s.k) < gap);
    r.claim("k is minimal", s.k == 2 || b_over(s.k - 1) >= gap);
    r.claim("factor sum exceeds 2t(K)", s.factor_bound > s.sum_bound);
    // Lifting both sides to the k-fold cover keeps the strict inequality.
    let g = GroupData::cyclic(s.k);
    let lhs = genus_from_char(&lift_by_group(&(s.factor_bound.clone() - Rational::new(2, s.k as i64)), &g), 2);
    let rhs = genus_from_char(&lift_by_group(&s.sum_bound, &g), 1);
    r.quantity("g(W_1;G) + g(W_2;G) lower bound", lhs.clone()).quantity("g(W;G) upper bound", rhs.clone());
    r.claim("g(W_1;G) + g(W_2;G) > g(W;G)", lhs > rhs);
    Ok(r)
}

pub fn lower_bound_sixth(n: u64) -> Rational {
    Rational::new(n as i64, 6)
}

pub fn counting_lower_bound(n: u64, g: &GroupData) -> Rational {
    Rational::one() + Rational::new(n as i64 * g.order_i64(), 12)
}

/// `x(M,T) ≤ x((M,T)|_S) − x(S)(1 − c) + 2c|S|`.
pub fn upper_bound_orb(x_factors: &Rational, x_s: &Rational, n_s: u64, c: i64) -> Rational {
    assert!(c == 1 || c == 2, "c must be 1 or 2");
    x_factors.clone() - x_s.clone() * (1 - c) + Rational::from_int(2 * c * n_s as i64)
}

/// `g(W;G) ≤ g(W|_S;G) + (c(|G|+1) − 2)(n − 1)`.
pub fn upper_bound_equiv(g_factors: &Rational, n: u64, g: &GroupData) -> Rational {
    assert!(n >= 1, "n must be positive");
    g_factors.clone() + Rational::from_int((g.c() * (g.order_i64() + 1) - 2) * (n as i64 - 1))
}

/// `x((M,T)|_S) − x(S)`, valid when every factor is comparatively small.
pub fn comparatively_small_bound(x_factors: &Rational, x_s: &Rational) -> Rational {
    x_factors.clone() - x_s.clone()
}

/// Distance bound a knot must meet in the super-additivity construction.
pub fn zeta(t: u64, w: Weight, n: u64) -> Rational {
    let inner = Rational::from_int(4 * t as i64 + n as i64 + 2) + one_minus(w) * 2;
    inner * 2 / one_minus(w) + Rational::from_int(3)
}

/// The closed-form chain for a knot sum whose equivariant genus jumps by
/// `|G| − 1`. The decomposition replay is attached by the harness.
pub fn superadd_example(t: u64, w: Weight, n: u64) -> Result<ExampleReport, BoundsError> {
    let order = w.value().filter(|k| *k >= 2).ok_or(BoundsError::BadWeight)?;
    let ti = t as i64;
    let g = GroupData::cyclic(order);
    let net_x = Rational::from_int(4 * ti) + Rational::new(2, order as i64);
    let x_factors = Rational::from_int(4 * ti);
    let x_s = -w.reciprocal() * 2;
    let x_k = upper_bound_orb(&x_factors, &x_s, 1, 1);
    let x_w = lift_by_group(&x_k, &g);
    let x_ws = lift_by_group(&x_factors, &g);
    let g_w = genus_from_char(&x_w, 1);
    let g_ws = genus_from_char(&x_ws, 2);

    let mut r = ExampleReport::new("superadd");
    r.param("t", t).param("w", w).param("N", n);
    r.quantity("zeta", zeta(t, w, n))
        .quantity("netX(H)", net_x.clone())
        .quantity("x_w(S3,K)", x_k.clone())
        .quantity("x_w(W;G)", x_w.clone())
        .quantity("netX(W;G)", lift_by_group(&net_x, &g))
        .quantity("x_w(W|_S;G)", x_ws.clone())
        .quantity("g(W;G)", g_w.clone())
        .quantity("g(W|_S;G)", g_ws.clone());
    r.claim("netX(H) = x((M,T)|_S) - x(S)", net_x == comparatively_small_bound(&x_factors, &x_s));
    r.claim("x_w(S3,K) = 4t + 2", x_k == Rational::from_int(4 * ti + 2));
    r.claim("x_w(W;G) = 4tw + 2w", x_w == Rational::from_int(4 * ti * order as i64 + 2 * order as i64));
    r.claim("x_w(W|_S;G) = 4tw", x_ws == Rational::from_int(4 * ti * order as i64));
    r.claim(
        "g(W;G) - g(W|_S;G) = |G| - 1",
        g_w.clone() - g_ws.clone() == Rational::from_int(order as i64 - 1),
    );
    r.claim("equivariant upper bound is attained", upper_bound_equiv(&g_ws, 2, &g) == g_w);
    Ok(r)
}

/// Factor shapes excluded from the lower bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalFactor {
    /// A single thick sphere with 0, 2 or 3 punctures.
    SmallSphere { punctures: usize },
    LensCore,
    HopfLink,
    EuclideanDoublePillow,
}

/// Flags a decomposition whose data matches one of the excluded factor
/// shapes. Purely arithmetic: a match is a hint, not a proof.
pub fn flag_exceptional_factor(d: &Decomposition) -> Option<ExceptionalFactor> {
    let thick: Vec<_> = d.surfaces.values().filter(|s| s.role == Role::Thick).collect();
    if thick.len() != 1 || d.surfaces.len() != 1 || d.pieces.len() != 2 {
        return None;
    }
    let h = &thick[0].component;
    let classes: Vec<ExceptionalClass> = d
        .pieces
        .values()
        .map(|p| p.assemble().map(|c| classify_exceptional(&c)).unwrap_or(ExceptionalClass::None))
        .collect();
    let n = h.punctures().len();
    if h.is_sphere() && n <= 3 && n != 1 {
        return Some(ExceptionalFactor::SmallSphere { punctures: n });
    }
    if h.is_sphere() && h.punctures() == [Weight::TWO; 4] && classes.iter().all(|c| *c == ExceptionalClass::EuclideanPillow) {
        return Some(ExceptionalFactor::EuclideanDoublePillow);
    }
    if h.genus() == 1 && n == 0 {
        let cores = classes.iter().filter(|c| **c == ExceptionalClass::SolidTorusCore).count();
        let empties = classes.iter().filter(|c| **c == ExceptionalClass::SolidTorusEmpty).count();
        return match (cores, empties) {
            (1, 1) => Some(ExceptionalFactor::LensCore),
            (2, 0) => Some(ExceptionalFactor::HopfLink),
            _ => None,
        };
    }
    None
}
