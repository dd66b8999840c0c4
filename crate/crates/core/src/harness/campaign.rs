//! Seeded fuzz campaigns over generated decompositions.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::generator::{case_rng, generate_case, with_workers, FuzzConfig};
use crate::compressionbody::EdgeClass;
use crate::decomposition::{fundamental_identity, integrality_scale, Decomposition, Role};
use crate::moves::{apply, replay, separating_candidates, MoveDescriptor, MoveError, MoveKind, MoveRecord, ThinningSequence};
use crate::orbifold::{DiscWeight, Rational, Weight};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub cases: usize,
    pub generator_errors: Vec<String>,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.generator_errors.is_empty() && self.failures.is_empty()
    }
}

/// Checks `2·netX − x(∂M) = ΣN` on every generated case.
pub fn identity_campaign(cfg: &FuzzConfig) -> IdentityReport {
    let results: Vec<Result<Option<String>, String>> = with_workers(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let d = generate_case(cfg, i).map_err(|e| e.to_string())?;
                Ok(match fundamental_identity(&d) {
                    Ok(c) if c.holds => None,
                    Ok(c) => Some(format!("case {i}: {} != {}", c.lhs, c.rhs)),
                    Err(e) => Some(format!("case {i}: {e}")),
                })
            })
            .collect()
    });
    let mut r = IdentityReport { cases: cfg.count, ..Default::default() };
    for x in results {
        match x {
            Err(e) => r.generator_errors.push(e),
            Ok(Some(f)) => r.failures.push(f),
            Ok(None) => {}
        }
    }
    r
}

/// `2L·netX ∈ ℤ` with `L` the lcm of the finite weights present.
pub fn integrality_campaign(cfg: &FuzzConfig) -> IdentityReport {
    let cfg = FuzzConfig { finite_only: true, ..cfg.clone() };
    let results: Vec<Result<Option<String>, String>> = with_workers(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let d = generate_case(&cfg, i).map_err(|e| e.to_string())?;
                let l = d.finite_weights().into_iter().fold(1u64, |a, b| a.lcm(&b));
                Ok(match integrality_scale(&d, l) {
                    Ok(true) => None,
                    Ok(false) => Some(format!("case {i}: 2*{l}*netX is not an integer")),
                    Err(e) => Some(format!("case {i}: {e}")),
                })
            })
            .collect()
    });
    let mut r = IdentityReport { cases: cfg.count, ..Default::default() };
    for x in results {
        match x {
            Err(e) => r.generator_errors.push(e),
            Ok(Some(f)) => r.failures.push(f),
            Ok(None) => {}
        }
    }
    r
}

fn present_weights(d: &Decomposition) -> Vec<Weight> {
    let mut w: Vec<Weight> = d
        .pieces
        .values()
        .flat_map(|p| p.one_handles.iter().filter_map(|h| h.weight))
        .chain(d.surfaces.values().flat_map(|s| s.component.punctures().iter().copied()))
        .collect();
    w.sort();
    w.dedup();
    w
}

/// Every move descriptor worth trying on `d`.
pub fn move_candidates(d: &Decomposition) -> Vec<MoveDescriptor> {
    let weights = present_weights(d);
    let discs: Vec<DiscWeight> =
        std::iter::once(DiscWeight::Unpunctured).chain(weights.iter().map(|w| DiscWeight::Punctured(*w))).collect();
    let thick: Vec<&String> = d.surfaces_with(Role::Thick).map(|(id, _)| id).collect();
    let thin: Vec<&String> = d.surfaces_with(Role::Thin).map(|(id, _)| id).collect();
    let mut out = Vec::new();
    for h in &thick {
        for dw in &discs {
            out.push(MoveDescriptor::TypeINonsep { thick: (*h).clone(), disc_weight: *dw });
        }
        for &w in d.surfaces[*h].component.punctures() {
            let m = MoveDescriptor::TypeII { thick: (*h).clone(), weight: w };
            if !out.contains(&m) {
                out.push(m);
            }
        }
        for pid in d.pieces_on_thick(h) {
            for (disc_weight, discarded) in separating_candidates(&d.pieces[pid]) {
                let m = MoveDescriptor::TypeISep { thick: (*h).clone(), disc_weight, discarded };
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        if d.surfaces[*h].component.genus() >= 2 {
            for w1 in &discs {
                for w2 in &discs {
                    out.push(MoveDescriptor::Untelescope {
                        thick: (*h).clone(),
                        w1: *w1,
                        w2: *w2,
                        h1: None,
                        h2: None,
                        f: None,
                    });
                }
            }
        }
        for f in &thin {
            out.push(MoveDescriptor::Consolidation { thick: (*h).clone(), thin: (*f).clone() });
            for h2 in &thick {
                if h != h2 {
                    out.push(MoveDescriptor::Amalgamate {
                        thick1: (*h).clone(),
                        thick2: (*h2).clone(),
                        thin: (*f).clone(),
                    });
                }
            }
        }
    }
    for (pid, p) in &d.pieces {
        if let Ok(c) = p.assemble() {
            for (i, e) in c.edges().iter().enumerate() {
                if e.class == EdgeClass::Ghost {
                    out.push(MoveDescriptor::CreateRemovable { piece: pid.clone(), ghost_arc: i });
                }
            }
        }
    }
    out
}

/// The per-kind contract an accepted move must meet, independent of the
/// move's own bookkeeping.
pub fn check_record(before: &Decomposition, after: &Decomposition, rec: &MoveRecord) -> Result<(), String> {
    let dx = after.net_x_unchecked() - before.net_x_unchecked();
    let di = after.net_iota_unchecked() - before.net_iota_unchecked();
    if dx != rec.delta_net_x || di != rec.delta_net_iota {
        return Err(format!("recorded ({}, {}) but observed ({dx}, {di})", rec.delta_net_x, rec.delta_net_iota));
    }
    let zero = Rational::zero();
    let ok = match (&rec.kind, &rec.descriptor) {
        (MoveKind::Consolidation | MoveKind::Untelescope | MoveKind::Amalgamate, _) => dx == zero && di == 0,
        (MoveKind::TypeII, MoveDescriptor::TypeII { weight, .. }) => {
            dx == -(Rational::one() - weight.reciprocal()) * 2 && di == -2
        }
        (MoveKind::TypeINonsep, MoveDescriptor::TypeINonsep { disc_weight, .. }) => {
            dx == -disc_weight.reciprocal() * 2 && di == if disc_weight.weight().is_some() { 2 } else { 0 }
        }
        (MoveKind::TypeISep, MoveDescriptor::TypeISep { disc_weight, discarded, .. }) => {
            dx == -disc_weight.reciprocal() * 2 - discarded.orb_char() && dx <= zero
        }
        (MoveKind::CreateRemovable, MoveDescriptor::CreateRemovable { piece, ghost_arc }) => {
            let c = before.pieces[piece].assemble().map_err(|e| e.to_string())?;
            let w = c.edges()[*ghost_arc].weight;
            dx == (Rational::one() - w.reciprocal()) * 2 && di == 2
        }
        _ => false,
    };
    if !ok {
        return Err(format!("{:?} broke its contract: delta ({dx}, {di})", rec.kind));
    }
    if rec.kind.is_thinning() && dx.is_positive() {
        return Err(format!("{:?} increased netX by {dx}", rec.kind));
    }
    if !crate::decomposition::validate(after).passed() {
        return Err(format!("{:?} produced an invalid decomposition", rec.kind));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveCampaignReport {
    pub cases: usize,
    pub attempted: usize,
    pub accepted: usize,
    pub by_kind: BTreeMap<String, usize>,
    pub violations: Vec<String>,
}

impl MoveCampaignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct CaseOutcome {
    attempted: usize,
    accepted: Vec<MoveKind>,
    violations: Vec<String>,
}

/// Applies shuffled candidate moves to one generated case, chaining up to
/// `chain` accepted moves, then replays the chain.
fn run_case(cfg: &FuzzConfig, index: usize, chain: usize) -> CaseOutcome {
    let mut out = CaseOutcome { attempted: 0, accepted: Vec::new(), violations: Vec::new() };
    let d = match generate_case(cfg, index) {
        Ok(d) => d,
        Err(e) => {
            out.violations.push(e.to_string());
            return out;
        }
    };
    let mut rng = case_rng(cfg.seed ^ 0x6d6f766573, index);
    let mut cur = d.clone();
    let mut script = Vec::new();
    for _ in 0..chain {
        let mut cands = move_candidates(&cur);
        cands.shuffle(&mut rng);
        let mut advanced = false;
        for m in cands {
            out.attempted += 1;
            match apply(&cur, &m) {
                Ok((next, rec)) => {
                    if let Err(e) = check_record(&cur, &next, &rec) {
                        out.violations.push(format!("case {index}: {e}"));
                    }
                    out.accepted.push(rec.kind);
                    script.push(m);
                    cur = next;
                    advanced = true;
                    break;
                }
                Err(MoveError::Internal(e)) => out.violations.push(format!("case {index}: {e}")),
                Err(_) => {}
            }
        }
        if !advanced {
            break;
        }
    }
    match ThinningSequence::run(d, &script) {
        Ok(seq) => {
            if seq.final_ != cur {
                out.violations.push(format!("case {index}: rerun diverged"));
            } else if let Err(e) = replay(&seq) {
                out.violations.push(format!("case {index}: {e}"));
            }
        }
        Err((step, e)) => out.violations.push(format!("case {index}: rerun failed at {step}: {e}")),
    }
    out
}

/// Runs cases until `target` moves have been accepted (or `cfg.count` cases
/// are exhausted).
pub fn move_campaign(cfg: &FuzzConfig, target: usize) -> MoveCampaignReport {
    const BATCH: usize = 256;
    const CHAIN: usize = 4;
    let mut r = MoveCampaignReport::default();
    let mut next = 0;
    while r.accepted < target && next < cfg.count {
        let end = (next + BATCH).min(cfg.count);
        let outcomes: Vec<CaseOutcome> =
            with_workers(|| (next..end).into_par_iter().map(|i| run_case(cfg, i, CHAIN)).collect());
        for o in outcomes {
            r.cases += 1;
            r.attempted += o.attempted;
            r.accepted += o.accepted.len();
            for k in o.accepted {
                *r.by_kind.entry(serde_json::to_value(k).unwrap().as_str().unwrap().to_string()).or_default() += 1;
            }
            r.violations.extend(o.violations);
        }
        next = end;
    }
    r
}
