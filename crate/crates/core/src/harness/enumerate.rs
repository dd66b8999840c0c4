//! Exhaustive enumeration of small handle structures.

use serde::Serialize;

use super::oracle::{independent_n, reclassify};
use crate::compressionbody::{
    assemble, classify_exceptional, is_trivial, ExceptionalClass, OneHandle, Site, Triviality, VpCompressionbody,
    ZeroHandle,
};
use crate::orbifold::{SurfaceComponent, VertexTriple, Weight};

/// 0-handle shapes available over `weights`. Single-point cones are only
/// offered when `singletons` is set.
fn zero_handle_options(weights: &[Weight], singletons: bool) -> Vec<ZeroHandle> {
    let mut out = vec![ZeroHandle::empty_ball()];
    if singletons {
        out.extend(weights.iter().map(|w| ZeroHandle::ball(vec![*w])));
    }
    out.extend(weights.iter().map(|w| ZeroHandle::ball(vec![*w, *w])));
    for (i, a) in weights.iter().enumerate() {
        for (j, b) in weights.iter().enumerate().skip(i) {
            for c in &weights[j..] {
                if VertexTriple::new(*a, *b, *c).is_valid() {
                    out.push(ZeroHandle::ball(vec![*a, *b, *c]));
                }
            }
        }
    }
    out.push(ZeroHandle::product(SurfaceComponent::sphere(vec![])));
    out.extend(weights.iter().map(|w| ZeroHandle::product(SurfaceComponent::sphere(vec![*w, *w]))));
    out.push(ZeroHandle::product(SurfaceComponent::closed(1)));
    out
}

/// Non-decreasing index sequences of length `k` below `n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        let lo = rest.last().copied().unwrap_or(0);
        for i in lo..n {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

/// Every single 1-handle that could be attached to `zero`.
fn one_handle_options(zero: &[ZeroHandle]) -> Vec<OneHandle> {
    let mut out = Vec::new();
    for a in 0..zero.len() {
        for b in a..zero.len() {
            out.push(OneHandle::unweighted(a, b));
        }
    }
    let sites: Vec<(Site, Weight)> = zero
        .iter()
        .enumerate()
        .flat_map(|(h, z)| z.slots().iter().enumerate().map(move |(s, w)| (Site::at(h, s), *w)))
        .collect();
    for (i, (s, w)) in sites.iter().enumerate() {
        for (t, v) in &sites[i + 1..] {
            if w == v {
                out.push(OneHandle { weight: Some(*w), ends: [*s, *t] });
            }
        }
    }
    out
}

/// All assemblies with at most `max_handles` handles (0- and 1-handles
/// together) over `weights`. Handles of each kind are taken as multisets;
/// relabelings that give the same multisets are not repeated.
pub fn enumerate_small_compressionbodies(max_handles: usize, weights: &[Weight]) -> Vec<VpCompressionbody> {
    assert!(max_handles <= 4, "enumeration is only tractable up to 4 handles");
    let mut out = Vec::new();
    for total in 1..=max_handles {
        let opts = zero_handle_options(weights, total == 1);
        for nz in 1..=total {
            let no = total - nz;
            for pick in multisets(opts.len(), nz) {
                let zero: Vec<ZeroHandle> = pick.iter().map(|&i| opts[i].clone()).collect();
                let ones = one_handle_options(&zero);
                for choice in multisets(ones.len(), no) {
                    let one: Vec<OneHandle> = choice.iter().map(|&i| ones[i].clone()).collect();
                    if let Ok(c) = assemble(zero.clone(), one) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub cases: usize,
    pub negative_n: usize,
    pub zero_n_closed: usize,
    /// `N < 0` but not a trivial ball.
    pub negative_not_trivial: Vec<String>,
    /// `N = 0`, `∂₋ = ∅`, not one of the four exceptional shapes.
    pub zero_unclassified: Vec<String>,
    /// Engine and independent path disagree on `N` or on the class.
    pub disagreements: Vec<String>,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.negative_not_trivial.is_empty() && self.zero_unclassified.is_empty() && self.disagreements.is_empty()
    }
}

fn describe(c: &VpCompressionbody) -> String {
    serde_json::to_string(&(c.zero_handles(), c.one_handles())).expect("handles serialize")
}

pub fn check_enumeration(max_handles: usize, weights: &[Weight]) -> EnumerationReport {
    let cases = enumerate_small_compressionbodies(max_handles, weights);
    let mut r = EnumerationReport { cases: cases.len(), ..Default::default() };
    for c in &cases {
        let n = c.n_value();
        let oracle_n = independent_n(c.zero_handles(), c.one_handles());
        let class = classify_exceptional(c);
        let oracle_class = reclassify(c.zero_handles(), c.one_handles());
        if n != oracle_n || class != oracle_class {
            r.disagreements.push(format!(
                "{}: N {n} vs {oracle_n}, {class:?} vs {oracle_class:?}",
                describe(c)
            ));
        }
        if n.is_negative() {
            r.negative_n += 1;
            if is_trivial(c) != Triviality::TrivialBall {
                r.negative_not_trivial.push(describe(c));
            }
        } else if n.is_zero() && c.boundary_minus().is_empty() {
            r.zero_n_closed += 1;
            if matches!(class, ExceptionalClass::None | ExceptionalClass::TrivialBall) {
                r.zero_unclassified.push(describe(c));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_handle_stratum_over_two() {
        let cases = enumerate_small_compressionbodies(1, &[Weight::TWO]);
        // Cones on 0..3 points and three product bases.
        assert_eq!(cases.len(), 7);
        let balls: Vec<usize> = cases
            .iter()
            .filter(|c| c.boundary_minus().is_empty())
            .map(|c| c.boundary_plus().punctures().len())
            .collect();
        assert_eq!(balls, vec![0, 1, 2, 3]);
    }

    #[test]
    fn pillow_appears() {
        let cases = enumerate_small_compressionbodies(3, &[Weight::TWO]);
        assert!(cases.iter().any(|c| classify_exceptional(c) == ExceptionalClass::EuclideanPillow));
    }

    #[test]
    fn infinite_arc_ball_and_tube() {
        let cases = enumerate_small_compressionbodies(3, &[Weight::INFINITY]);
        let etb: Vec<_> =
            cases.iter().filter(|c| classify_exceptional(c) == ExceptionalClass::EuclideanTrivialBall).collect();
        assert!(etb.iter().any(|c| c.one_handles().is_empty()));
        assert!(etb.iter().any(|c| !c.one_handles().is_empty()));
    }

    #[test]
    fn low_n_over_small_weights() {
        let r = check_enumeration(3, &[Weight::TWO, Weight::finite(3), Weight::INFINITY]);
        assert!(r.passed(), "{r:?}");
        assert!(r.negative_n > 0 && r.zero_n_closed > 0);
    }
}
