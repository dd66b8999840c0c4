//! Thinning, removable-arc and amalgamation moves as validated rewrites.

mod amalgamate;
mod thin;
mod util;

use serde::{Deserialize, Serialize};

use crate::decomposition::{validate, Decomposition, PieceId, SurfaceId};
use crate::orbifold::{DiscWeight, Rational, SurfaceComponent, Weight};

pub use amalgamate::{amalgamate, create_removable_arc};
pub use thin::{apply_type1, apply_type2, consolidate, separating_candidates, untelescope, UntelescopeData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "typeI_nonsep")]
    TypeINonsep,
    #[serde(rename = "typeI_sep")]
    TypeISep,
    #[serde(rename = "typeII")]
    TypeII,
    #[serde(rename = "consolidation")]
    Consolidation,
    #[serde(rename = "untelescope")]
    Untelescope,
    #[serde(rename = "create_removable")]
    CreateRemovable,
    #[serde(rename = "amalgamate")]
    Amalgamate,
}

impl MoveKind {
    /// Kinds that can only thin: `netX` must not grow.
    pub fn is_thinning(self) -> bool {
        !matches!(self, MoveKind::CreateRemovable | MoveKind::Amalgamate)
    }
}

/// A move together with the witness data it needs. The script file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MoveDescriptor {
    #[serde(rename = "typeI_nonsep")]
    TypeINonsep { thick: SurfaceId, disc_weight: DiscWeight },
    #[serde(rename = "typeI_sep")]
    TypeISep {
        thick: SurfaceId,
        disc_weight: DiscWeight,
        discarded: SurfaceComponent,
    },
    #[serde(rename = "typeII")]
    TypeII { thick: SurfaceId, weight: Weight },
    #[serde(rename = "consolidation")]
    Consolidation { thick: SurfaceId, thin: SurfaceId },
    #[serde(rename = "untelescope")]
    Untelescope {
        thick: SurfaceId,
        w1: DiscWeight,
        w2: DiscWeight,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h1: Option<SurfaceComponent>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h2: Option<SurfaceComponent>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<SurfaceComponent>,
    },
    #[serde(rename = "create_removable")]
    CreateRemovable { piece: PieceId, ghost_arc: usize },
    #[serde(rename = "amalgamate")]
    Amalgamate { thick1: SurfaceId, thick2: SurfaceId, thin: SurfaceId },
}

impl MoveDescriptor {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveDescriptor::TypeINonsep { .. } => MoveKind::TypeINonsep,
            MoveDescriptor::TypeISep { .. } => MoveKind::TypeISep,
            MoveDescriptor::TypeII { .. } => MoveKind::TypeII,
            MoveDescriptor::Consolidation { .. } => MoveKind::Consolidation,
            MoveDescriptor::Untelescope { .. } => MoveKind::Untelescope,
            MoveDescriptor::CreateRemovable { .. } => MoveKind::CreateRemovable,
            MoveDescriptor::Amalgamate { .. } => MoveKind::Amalgamate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub descriptor: MoveDescriptor,
    pub delta_net_x: Rational,
    pub delta_net_iota: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("unknown surface {0}")]
    UnknownSurface(String),
    #[error("unknown piece {0}")]
    UnknownPiece(String),
    #[error("input decomposition is invalid: {0}")]
    Invalid(String),
    #[error("move would leave an invalid decomposition: {0}")]
    ResultInvalid(String),
    #[error("no handle realizes the declared disc: {0}")]
    NoWitness(String),
    #[error("separating move would change netX by {delta} > 0")]
    WouldIncreaseNetX { delta: Rational },
    #[error("{surface} lacks two punctures of weight {weight}")]
    MissingPunctures { surface: SurfaceId, weight: Weight },
    #[error("piece {0} is not a product")]
    NotAProduct(PieceId),
    #[error("{0}")]
    BoundaryMismatch(String),
    #[error("declared surfaces violate x(J) = x(H1) + x(H2) - x(F): {lhs} != {rhs}")]
    IdentityViolated { lhs: Rational, rhs: Rational },
    #[error("declared {name} is {declared} but the compression gives {computed}")]
    DescriptorMismatch { name: String, declared: String, computed: String },
    #[error("move would create a cycle in the dual digraph")]
    AcyclicityBroken,
    #[error("edge {index} of piece {piece} is not a ghost arc")]
    NotAGhostArc { piece: PieceId, index: usize },
    #[error("{thick1}, {thick2} and {thin} are not adjacent")]
    NotAdjacent { thick1: SurfaceId, thick2: SurfaceId, thin: SurfaceId },
    #[error("ghost arcs meet from both sides at puncture {point} (weight {weight})")]
    NotAmalgable { point: usize, weight: Weight },
    #[error("both sides glue 1-handles at puncture {point} of the thin surface")]
    DoublyGlued { point: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("replay diverged at step {step}: {reason}")]
    ReplayMismatch { step: usize, reason: String },
}

pub fn apply(d: &Decomposition, m: &MoveDescriptor) -> Result<(Decomposition, MoveRecord), MoveError> {
    match m {
        MoveDescriptor::TypeINonsep { thick, disc_weight } => {
            apply_type1(d, thick, *disc_weight, None)
        }
        MoveDescriptor::TypeISep { thick, disc_weight, discarded } => {
            apply_type1(d, thick, *disc_weight, Some(discarded))
        }
        MoveDescriptor::TypeII { thick, weight } => apply_type2(d, thick, *weight),
        MoveDescriptor::Consolidation { thick, thin } => consolidate(d, thick, thin),
        MoveDescriptor::Untelescope { thick, w1, w2, h1, h2, f } => {
            let data = UntelescopeData {
                w1: *w1,
                w2: *w2,
                h1: h1.clone(),
                h2: h2.clone(),
                f: f.clone(),
            };
            untelescope(d, thick, &data)
        }
        MoveDescriptor::CreateRemovable { piece, ghost_arc } => create_removable_arc(d, piece, *ghost_arc),
        MoveDescriptor::Amalgamate { thick1, thick2, thin } => amalgamate(d, thick1, thick2, thin),
    }
}

pub(crate) fn require_valid(d: &Decomposition) -> Result<(), MoveError> {
    let r = validate(d);
    if r.passed() {
        Ok(())
    } else {
        Err(MoveError::Invalid(r.summary()))
    }
}

/// Validates the rewritten decomposition, computes deltas and checks them
/// against the kind's contract.
pub(crate) fn finish(
    before: &Decomposition,
    after: Decomposition,
    descriptor: MoveDescriptor,
    expected_x: Option<Rational>,
    expected_iota: Option<i64>,
) -> Result<(Decomposition, MoveRecord), MoveError> {
    let r = validate(&after);
    if !r.passed() {
        let cyclic = r
            .violations
            .iter()
            .all(|v| matches!(v, crate::decomposition::Violation::Cycle { .. }));
        return Err(if cyclic {
            MoveError::AcyclicityBroken
        } else {
            MoveError::ResultInvalid(r.summary())
        });
    }
    let delta_net_x = after.net_x_unchecked() - before.net_x_unchecked();
    let delta_net_iota = after.net_iota_unchecked() - before.net_iota_unchecked();
    if let Some(x) = expected_x {
        if x != delta_net_x {
            return Err(MoveError::Internal(format!("netX changed by {delta_net_x}, expected {x}")));
        }
    }
    if let Some(i) = expected_iota {
        if i != delta_net_iota {
            return Err(MoveError::Internal(format!("netι changed by {delta_net_iota}, expected {i}")));
        }
    }
    let kind = descriptor.kind();
    if kind.is_thinning() && delta_net_x.is_positive() {
        return Err(MoveError::Internal(format!("thinning move increased netX by {delta_net_x}")));
    }
    Ok((after, MoveRecord { kind, descriptor, delta_net_x, delta_net_iota }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThinningSequence {
    pub initial: Decomposition,
    pub records: Vec<MoveRecord>,
    #[serde(rename = "final")]
    pub final_: Decomposition,
}

impl ThinningSequence {
    /// Applies `script` in order, recording each move.
    pub fn run(initial: Decomposition, script: &[MoveDescriptor]) -> Result<Self, (usize, MoveError)> {
        let mut cur = initial.clone();
        let mut records = Vec::with_capacity(script.len());
        for (i, m) in script.iter().enumerate() {
            let (next, rec) = apply(&cur, m).map_err(|e| (i, e))?;
            records.push(rec);
            cur = next;
        }
        Ok(ThinningSequence { initial, records, final_: cur })
    }

    pub fn total_delta_net_x(&self) -> Rational {
        self.records.iter().map(|r| &r.delta_net_x).sum()
    }
}

/// Re-applies every record and insists on identical deltas and final state.
pub fn replay(seq: &ThinningSequence) -> Result<Decomposition, MoveError> {
    let mut cur = seq.initial.clone();
    for (step, rec) in seq.records.iter().enumerate() {
        let (next, got) = apply(&cur, &rec.descriptor)
            .map_err(|e| MoveError::ReplayMismatch { step, reason: e.to_string() })?;
        if got != *rec {
            return Err(MoveError::ReplayMismatch {
                step,
                reason: format!(
                    "recorded deltas ({}, {}) but replay gave ({}, {})",
                    rec.delta_net_x, rec.delta_net_iota, got.delta_net_x, got.delta_net_iota
                ),
            });
        }
        cur = next;
    }
    let total = cur.net_x_unchecked() - seq.initial.net_x_unchecked();
    if total != seq.total_delta_net_x() {
        return Err(MoveError::ReplayMismatch {
            step: seq.records.len(),
            reason: "cumulative netX delta disagrees with the endpoints".into(),
        });
    }
    if cur != seq.final_ {
        return Err(MoveError::ReplayMismatch {
            step: seq.records.len(),
            reason: "final decomposition differs".into(),
        });
    }
    Ok(cur)
}

#[cfg(test)]
mod tests;
