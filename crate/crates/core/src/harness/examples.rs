//! The named reproduction suite.

use serde::{Deserialize, Serialize};

use super::builders::{sixth_sharp, two_thick, two_thick_script};
use crate::bounds::{additive_example, subadditive_example, superadd_example, BoundsError, ExampleReport};
use crate::decomposition::{fundamental_identity, net_iota, net_x, DecompositionError, Role};
use crate::moves::{replay, MoveError, ThinningSequence};
use crate::orbifold::{OrbSurface, Rational, SurfaceComponent, Weight};

pub const EXAMPLE_NAMES: [&str; 4] = ["section3-additive", "section3-subadditive", "superadd", "sixth-sharp"];

/// Parameters for every named example; each example reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub t: u64,
    pub w: Weight,
    pub n: u64,
    pub q: i64,
    pub k: Weight,
    pub a: Weight,
    pub t1: u64,
    pub t2: u64,
    pub t_sum: u64,
    pub b_sum: u64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        ExampleParams {
            t: 1,
            w: Weight::TWO,
            n: 1,
            q: 5,
            k: Weight::TWO,
            a: Weight::finite(6),
            t1: 2,
            t2: 2,
            t_sum: 3,
            b_sum: 7,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExampleError {
    #[error("unknown example `{0}` (expected one of {names})", names = EXAMPLE_NAMES.join(", "))]
    UnknownExample(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("move {step} failed: {source}")]
    Move { step: usize, source: MoveError },
}

pub fn run_named_example(name: &str, p: &ExampleParams) -> Result<ExampleReport, ExampleError> {
    match name {
        "section3-additive" => Ok(additive_example(p.q, p.k)?),
        "section3-subadditive" => Ok(subadditive_example(p.t1, p.t2, p.t_sum, p.b_sum)?),
        "superadd" => superadd(p.t, p.w, p.n),
        "sixth-sharp" => sixth_sharp_report(p.a),
        other => Err(ExampleError::UnknownExample(other.to_string())),
    }
}

/// The formula chain, then the decomposition itself and the
/// `[create_removable, amalgamate]` script.
fn superadd(t: u64, w: Weight, n: u64) -> Result<ExampleReport, ExampleError> {
    let mut r = superadd_example(t, w, n)?;
    let d = two_thick(t as u32, w);
    let x = net_x(&d)?;
    let iota = net_iota(&d)?;
    r.quantity("netX(built)", x.clone()).quantity("netIota(built)", Rational::from_int(iota));
    r.claim("built netX = 4t + 2/w", Some(&x) == r.get("netX(H)"));
    r.claim("built netIota = -2", iota == -2);
    r.claim("built decomposition satisfies the identity", fundamental_identity(&d)?.holds);

    let seq = ThinningSequence::run(d, &two_thick_script())
        .map_err(|(step, source)| ExampleError::Move { step, source })?;
    let replayed = replay(&seq).map_err(|source| ExampleError::Move { step: seq.records.len(), source });
    let thick: Vec<_> = seq.final_.surfaces_with(Role::Thick).collect();
    let final_x = seq.final_.thick().orb_char();
    r.quantity("x_w(H) after script", final_x.clone());
    r.claim("script leaves a single thick surface", thick.len() == 1 && seq.final_.thin().components.is_empty());
    r.claim("script ends at x_w(S3,K)", Some(&final_x) == r.get("x_w(S3,K)"));
    r.claim("script replays", replayed.is_ok());
    Ok(r)
}

fn sixth_sharp_report(a: Weight) -> Result<ExampleReport, ExampleError> {
    let w = Weight::finite;
    let thick = SurfaceComponent::sphere(vec![w(2), w(2), w(2), w(3)]);
    let thin = SurfaceComponent::sphere(vec![w(2), w(3), a]);
    let net = OrbSurface::new(vec![thick.clone(), thick]).orb_char() - thin.orb_char();
    let sixth = Rational::new(1, 6);

    let mut r = ExampleReport::new("sixth-sharp");
    r.param("a", a);
    r.quantity("netX(H)", net.clone()).quantity("x_w(thin)", thin.orb_char());
    r.claim("netX(H) = 1/6 + 1/a", net == sixth.clone() + a.reciprocal());
    r.claim("x_w(thin) = 1/6 - 1/a", thin.orb_char() == sixth.clone() - a.reciprocal());
    let sign = match a.value() {
        Some(k) => (k as i64 - 6).signum(),
        None => 1,
    };
    let x = thin.orb_char();
    let x_sign = if x.is_negative() { -1 } else if x.is_zero() { 0 } else { 1 };
    r.claim("sign of x_w(thin) is the sign of a - 6", x_sign == sign);
    r.claim("a >= 6 leaves no spherical thin surface", sign < 0 || !thin.orb_char().is_negative());
    // With a = ∞ there is no (2,2,a) vertex to build; only the surfaces exist.
    if let Some(d) = sixth_sharp(a) {
        let x = net_x(&d)?;
        r.claim("built decomposition has the same netX", x == net);
        r.claim("built decomposition satisfies the identity", fundamental_identity(&d)?.holds);
    }
    Ok(r)
}
