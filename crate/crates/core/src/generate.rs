//! Deterministic instance generation with ground-truth witnesses.
//!
//! Instances are sampled backwards: draw rectangle-union regions first,
//! read their exact pairwise relations off the geometric oracles, and emit
//! the resulting atomic joint network together with the witness regions.
//! Every generated network is satisfiable by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boxes::{ra_calculus, ra_relation_of, Rectangle};
use crate::interaction::JointNetwork;
use crate::topology::{rcc8_calculus, rcc8_of_regions, Rcc8Basic, RectUnionRegion};

/// A generated instance: the witness regions and the joint network they
/// realize.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub regions: Vec<RectUnionRegion>,
    pub net: JointNetwork,
}

fn sample_region(rng: &mut ChaCha8Rng) -> RectUnionRegion {
    let pieces = rng.random_range(1..=3usize);
    let mut rects = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        let x0 = rng.random_range(0..10i64);
        let x1 = rng.random_range((x0 + 1)..=11i64);
        let y0 = rng.random_range(0..10i64);
        let y1 = rng.random_range((y0 + 1)..=11i64);
        rects.push(Rectangle::from_ints(x0, x1, y0, y1));
    }
    RectUnionRegion::new(rects).unwrap()
}

/// Deterministically sample `n` regions and the joint network they
/// witness. Regions are resampled when an equality pair would appear, so
/// all off-diagonal topological constraints are proper basic relations.
pub fn gen_instance(seed: u64, n: usize) -> GeneratedInstance {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut regions: Vec<RectUnionRegion> = Vec::with_capacity(n);
    while regions.len() < n {
        let cand = sample_region(&mut rng);
        if regions.iter().any(|r| rcc8_of_regions(r, &cand) == Rcc8Basic::Eq) {
            continue;
        }
        regions.push(cand);
    }
    let vars: Vec<String> = (0..n).map(var_name).collect();
    let mut net = JointNetwork::universal(vars);
    let rcc = rcc8_calculus();
    let ra = ra_calculus();
    for i in 0..n {
        for j in (i + 1)..n {
            let theta = rcc8_of_regions(&regions[i], &regions[j]);
            net.top.set(i, j, rcc.basic(theta.index()));
            let delta = ra_relation_of(&regions[i].mbr(), &regions[j].mbr());
            net.dir.set(i, j, ra.basic(delta.index()));
        }
    }
    GeneratedInstance { regions, net }
}

/// Stable variable names: a, b, ..., z, v26, v27, ...
pub fn var_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("v{i}")
    }
}
