//! Seeded random decompositions, built piece-first so that they are valid by
//! construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::builders::surface;
use crate::compressionbody::{assemble, OneHandle, Site, ZeroHandle};
use crate::decomposition::{validate, Decomposition, Metadata, Piece, Role};
use crate::orbifold::{Geometry, SurfaceComponent, Weight};

/// Environment variable capping the worker threads used by campaigns.
pub const WORKERS_ENV: &str = "ORBCALC_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    /// Extra 1-handles per piece beyond those needed for connectivity.
    pub max_handles: usize,
    /// Largest genus of a sampled thin or boundary surface.
    pub max_genus: u32,
    pub max_weight: u64,
    pub inf_probability: f64,
    pub max_thick: usize,
    pub finite_only: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            count: 100,
            max_handles: 3,
            max_genus: 1,
            max_weight: 12,
            inf_probability: 0.15,
            max_thick: 3,
            finite_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("generated case {index} is invalid: {reason}")]
pub struct GeneratorError {
    pub index: usize,
    pub reason: String,
}

/// Case `index` of the stream determined by `cfg.seed`.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

struct Gen<'a> {
    cfg: &'a FuzzConfig,
    rng: ChaCha8Rng,
}

impl Gen<'_> {
    fn weight(&mut self) -> Weight {
        if !self.cfg.finite_only && self.rng.gen_bool(self.cfg.inf_probability) {
            Weight::INFINITY
        } else {
            Weight::finite(self.rng.gen_range(2..=self.cfg.max_weight.max(2)))
        }
    }

    /// A surface with an even number of `∞` punctures accepted by `ok`.
    fn surface_where(&mut self, min_punctures: usize, ok: impl Fn(&SurfaceComponent) -> bool) -> SurfaceComponent {
        loop {
            let genus = self.rng.gen_range(0..=self.cfg.max_genus);
            let n = self.rng.gen_range(min_punctures..=min_punctures.max(4));
            let mut p: Vec<Weight> = (0..n).map(|_| self.weight()).collect();
            if p.iter().filter(|w| w.is_infinite()).count() % 2 == 1 {
                let i = p.iter().position(|w| w.is_infinite()).unwrap();
                p.remove(i);
            }
            let c = SurfaceComponent::new(genus, p);
            if ok(&c) {
                return c;
            }
        }
    }

    fn thin_surface(&mut self) -> SurfaceComponent {
        self.surface_where(0, |c| {
            let k = c.classify();
            k.geometry != Geometry::Bad && !k.inf_once_punctured
        })
    }

    fn boundary_surface(&mut self) -> SurfaceComponent {
        self.surface_where(3, |c| {
            let k = c.classify();
            !c.orb_char().is_negative()
                && (!c.is_sphere() || c.punctures().len() >= 3)
                && k.geometry != Geometry::Bad
        })
    }

    fn cone(&mut self) -> Vec<Weight> {
        match self.rng.gen_range(0..3) {
            0 => vec![],
            1 => {
                let w = self.weight();
                vec![w, w]
            }
            _ => {
                let max = self.cfg.max_weight.max(2);
                let mut triples: Vec<[u64; 3]> = (2..=max).map(|k| [2, 2, k]).collect();
                triples.extend([[2, 3, 3], [2, 3, 4], [2, 3, 5]].into_iter().filter(|t| t[2] <= max));
                triples.choose(&mut self.rng).unwrap().map(Weight::finite).to_vec()
            }
        }
    }

    /// A connected handle structure containing the given product handles in
    /// order, plus random balls and 1-handles.
    fn piece(&mut self, products: &[SurfaceComponent]) -> (Vec<ZeroHandle>, Vec<OneHandle>) {
        let balls = self.rng.gen_range(usize::from(products.is_empty())..=2);
        let mut zh: Vec<ZeroHandle> = (0..balls).map(|_| ZeroHandle::ball(self.cone())).collect();
        // Interleave the products at random positions, keeping their order.
        let mut at = 0;
        for p in products {
            at = self.rng.gen_range(at..=zh.len());
            zh.insert(at, ZeroHandle::product(p.clone()));
            at += 1;
        }

        let mut free: Vec<(Weight, Site)> = Vec::new();
        for (h, z) in zh.iter().enumerate() {
            free.extend(z.slots().iter().enumerate().map(|(s, w)| (*w, Site::at(h, s))));
        }
        let mut oh = Vec::new();
        let weighted = |rng: &mut ChaCha8Rng, free: &mut Vec<(Weight, Site)>, a: Option<usize>, b: Option<usize>| {
            let on = |h: Option<usize>, s: &Site| h.is_none_or(|h| s.handle == h);
            let firsts: Vec<usize> = (0..free.len()).filter(|&i| on(a, &free[i].1)).collect();
            let i = *firsts.choose(rng)?;
            let w = free[i].0;
            let seconds: Vec<usize> =
                (0..free.len()).filter(|&j| j != i && free[j].0 == w && on(b, &free[j].1)).collect();
            let j = *seconds.choose(rng)?;
            let (s1, s2) = (free[i].1, free[j].1);
            free.retain(|(_, s)| *s != s1 && *s != s2);
            Some(OneHandle { weight: Some(w), ends: [s1, s2] })
        };
        for h in 1..zh.len() {
            let j = self.rng.gen_range(0..h);
            let tree = if self.rng.gen_bool(0.3) { weighted(&mut self.rng, &mut free, Some(h), Some(j)) } else { None };
            oh.push(tree.unwrap_or_else(|| OneHandle::unweighted(j, h)));
        }
        for _ in 0..self.rng.gen_range(0..=self.cfg.max_handles) {
            let extra = if self.rng.gen_bool(0.5) { weighted(&mut self.rng, &mut free, None, None) } else { None };
            oh.push(extra.unwrap_or_else(|| {
                let a = self.rng.gen_range(0..zh.len());
                let b = self.rng.gen_range(0..zh.len());
                OneHandle::unweighted(a, b)
            }));
        }
        (zh, oh)
    }
}

fn plus_of(zh: &[ZeroHandle], oh: &[OneHandle]) -> SurfaceComponent {
    assemble(zh.to_vec(), oh.to_vec()).expect("generated handle structure assembles").boundary_plus().clone()
}

fn attach_ball(zh: &mut Vec<ZeroHandle>, oh: &mut Vec<OneHandle>, cone: Vec<Weight>) {
    zh.push(ZeroHandle::ball(cone));
    oh.push(OneHandle::unweighted(0, zh.len() - 1));
}

fn counts(c: &SurfaceComponent) -> BTreeMap<Weight, i64> {
    let mut m = BTreeMap::new();
    for w in c.punctures() {
        *m.entry(*w).or_insert(0) += 1;
    }
    m
}

type Parts = (Vec<ZeroHandle>, Vec<OneHandle>);

/// Pads both sides with bridge balls, trivalent balls and handles until their
/// outer boundaries agree and are nice.
fn pad_to_match(a: &mut Parts, b: &mut Parts) -> SurfaceComponent {
    loop {
        let (pa, pb) = (plus_of(&a.0, &a.1), plus_of(&b.0, &b.1));
        let (ca, cb) = (counts(&pa), counts(&pb));
        let weights: std::collections::BTreeSet<Weight> = ca.keys().chain(cb.keys()).copied().collect();
        let diffs: Vec<(Weight, i64)> = weights
            .into_iter()
            .map(|w| (w, ca.get(&w).copied().unwrap_or(0) - cb.get(&w).copied().unwrap_or(0)))
            .filter(|(_, d)| *d != 0)
            .collect();
        if let Some(&(w, d)) = diffs.iter().find(|(w, d)| d % 2 != 0 && *w != Weight::TWO) {
            assert!(!w.is_infinite(), "odd number of infinite punctures");
            let side = if d > 0 { &mut *b } else { &mut *a };
            attach_ball(&mut side.0, &mut side.1, vec![Weight::TWO, Weight::TWO, w]);
            continue;
        }
        if let Some(&(_, d)) = diffs.iter().find(|(w, d)| d % 2 != 0 && *w == Weight::TWO) {
            let side = if d > 0 { &mut *b } else { &mut *a };
            attach_ball(&mut side.0, &mut side.1, vec![Weight::TWO; 3]);
            continue;
        }
        for (w, d) in diffs {
            let side = if d > 0 { &mut *b } else { &mut *a };
            for _ in 0..d.abs() / 2 {
                attach_ball(&mut side.0, &mut side.1, vec![w, w]);
            }
        }
        let (pa, pb) = (plus_of(&a.0, &a.1), plus_of(&b.0, &b.1));
        let (ga, gb) = (pa.genus(), pb.genus());
        for _ in ga..gb {
            a.1.push(OneHandle::unweighted(0, 0));
        }
        for _ in gb..ga {
            b.1.push(OneHandle::unweighted(0, 0));
        }
        let h = plus_of(&a.0, &a.1);
        let k = h.classify();
        if k.geometry == Geometry::Bad || k.inf_once_punctured {
            a.1.push(OneHandle::unweighted(0, 0));
            b.1.push(OneHandle::unweighted(0, 0));
            continue;
        }
        debug_assert_eq!(h, plus_of(&b.0, &b.1));
        return h;
    }
}

/// A chain of up to `max_thick` thick surfaces, each between a lower and an
/// upper piece, consecutive blocks sharing a thin surface. Some blocks are
/// collars (a bare product below the thick surface) so that consolidation
/// has something to act on.
pub fn generate_case(cfg: &FuzzConfig, index: usize) -> Result<Decomposition, GeneratorError> {
    let mut g = Gen { cfg, rng: case_rng(cfg.seed, index) };
    let m = g.rng.gen_range(1..=cfg.max_thick.clamp(1, 3));
    let mut d = Decomposition {
        metadata: Metadata {
            label: Some(format!("fuzz seed={} case={index}", cfg.seed)),
            ..Default::default()
        },
        ..Default::default()
    };

    let mut above: Option<SurfaceComponent> = None; // thin surface between block i and i+1
    for i in (1..=m).rev() {
        let (h, f, l, u) = (format!("H{i}"), format!("F{}", i - 1), format!("L{i}"), format!("U{i}"));
        let f_above = format!("F{i}");
        let mut u_products: Vec<SurfaceComponent> = above.iter().cloned().collect();
        let mut u_minus: Vec<String> = above.iter().map(|_| f_above.clone()).collect();
        let mut l_products = Vec::new();
        let mut l_minus = Vec::new();
        for (products, minus, tag) in [(&mut u_products, &mut u_minus, &u), (&mut l_products, &mut l_minus, &l)] {
            if g.rng.gen_bool(0.15) {
                let b = g.boundary_surface();
                let id = format!("B{tag}");
                d.surfaces.insert(id.clone(), surface(Role::Boundary, b.clone(), None));
                products.push(b);
                minus.push(id);
            }
        }
        let mut up = g.piece(&u_products);
        let collar = i > 1 && l_products.is_empty() && g.rng.gen_bool(0.25);
        let (low, thick, below) = if collar {
            let mut thick = plus_of(&up.0, &up.1);
            let k = thick.classify();
            if k.geometry == Geometry::Bad || k.inf_once_punctured {
                up.1.push(OneHandle::unweighted(0, 0));
                thick = plus_of(&up.0, &up.1);
            }
            l_products.push(thick.clone());
            l_minus.push(f.clone());
            ((vec![ZeroHandle::product(thick.clone())], vec![]), thick.clone(), Some(thick))
        } else {
            let below = (i > 1).then(|| g.thin_surface());
            if let Some(b) = &below {
                l_products.insert(0, b.clone());
                l_minus.insert(0, f.clone());
            }
            let mut low = g.piece(&l_products);
            let thick = pad_to_match(&mut low, &mut up);
            (low, thick, below)
        };
        d.surfaces.insert(h.clone(), surface(Role::Thick, thick, Some(&u)));
        if let Some(a) = &above {
            d.surfaces.insert(f_above.clone(), surface(Role::Thin, a.clone(), Some(&format!("L{}", i + 1))));
        }
        // Keep the product order aligned with the minus list.
        let order = |zh: &[ZeroHandle], products: &[SurfaceComponent], minus: Vec<String>| -> Vec<String> {
            let mut pool: Vec<(SurfaceComponent, String)> = products.iter().cloned().zip(minus).collect();
            zh.iter()
                .filter_map(|z| match z {
                    ZeroHandle::Product { base } => {
                        let k = pool.iter().position(|(b, _)| b == base).unwrap();
                        Some(pool.remove(k).1)
                    }
                    ZeroHandle::Ball { .. } => None,
                })
                .collect()
        };
        let u_minus = order(&up.0, &u_products, u_minus);
        let l_minus = order(&low.0, &l_products, l_minus);
        d.pieces.insert(u.clone(), Piece { zero_handles: up.0, one_handles: up.1, plus: h.clone(), minus: u_minus });
        d.pieces.insert(l.clone(), Piece { zero_handles: low.0, one_handles: low.1, plus: h, minus: l_minus });
        above = below;
    }
    let report = validate(&d);
    if !report.passed() {
        return Err(GeneratorError { index, reason: report.summary() });
    }
    Ok(d)
}

pub fn generate_random_decomposition(cfg: &FuzzConfig) -> Result<Decomposition, GeneratorError> {
    generate_case(cfg, 0)
}

/// Runs `f` on a pool sized by [`WORKERS_ENV`] when set.
pub fn with_workers<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let n = std::env::var(WORKERS_ENV).ok().and_then(|s| s.parse::<usize>().ok()).filter(|n| *n > 0);
    match n {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        None => f(),
    }
}

/// All `cfg.count` cases, generated in parallel and returned in index order.
pub fn generate_cases(cfg: &FuzzConfig) -> Vec<Result<Decomposition, GeneratorError>> {
    with_workers(|| (0..cfg.count).into_par_iter().map(|i| generate_case(cfg, i)).collect())
}
