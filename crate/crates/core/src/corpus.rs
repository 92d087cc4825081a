//! Surfaces and pairs used by the verification suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::minus_n_classes;
use crate::error::Result;
use crate::lattice::{DivisorClass, PicardLattice, SurfaceKind};
use crate::linalg;
use crate::pairs::{enumerate_subgroup_classes, GroupAction};
use crate::surface::SurfaceSpec;

/// Can `root` join `curves` as a further (−2)-curve?
fn extends(lat: &PicardLattice, curves: &[DivisorClass], root: &DivisorClass) -> bool {
    if curves.contains(root) || !curves.iter().all(|c| (0..=1).contains(&lat.dot(c, root))) {
        return false;
    }
    let mut rows: Vec<Vec<i64>> = curves.iter().map(|c| c.0.clone()).collect();
    rows.push(root.0.clone());
    if linalg::rank_i64(&rows) != rows.len() {
        return false;
    }
    let mut next = curves.to_vec();
    next.push(root.clone());
    let spec = SurfaceSpec::new(lat.clone(), next);
    let v = spec.validate();
    v.is_ok() && v.warnings.is_empty()
}

/// A surface whose (−2)-curves are grown one random root at a time, keeping
/// the configuration valid and realizable. Degree must be 1..7.
pub fn random_surface<R: Rng + ?Sized>(d: u8, rng: &mut R) -> SurfaceSpec {
    let lat = PicardLattice::of_kind(SurfaceKind::Blowup(d));
    let mut roots = minus_n_classes(&lat, 2);
    roots.shuffle(rng);
    let target = rng.gen_range(1..=lat.rank() - 1);
    let mut curves: Vec<DivisorClass> = Vec::new();
    for r in roots {
        if curves.len() == target {
            break;
        }
        if extends(&lat, &curves, &r) {
            curves.push(r);
        }
    }
    curves.sort();
    SurfaceSpec::new(lat, curves)
}

/// `count` random surfaces of degree `d`, reproducible from `seed`.
pub fn random_surfaces(d: u8, count: usize, seed: u64) -> Vec<SurfaceSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(d));
    (0..count).map(|_| random_surface(d, &mut rng)).collect()
}

/// Every valid realizable configuration of (−2)-curves in degree `d`, including
/// the empty one, with curves sorted. Practical for d ≥ 4.
pub fn simple_systems(d: u8) -> Vec<SurfaceSpec> {
    let lat = PicardLattice::of_kind(SurfaceKind::Blowup(d));
    let roots = minus_n_classes(&lat, 2);
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<DivisorClass>, usize)> = vec![(vec![], 0)];
    while let Some((curves, start)) = stack.pop() {
        out.push(SurfaceSpec::new(lat.clone(), curves.clone()));
        for (i, r) in roots.iter().enumerate().skip(start) {
            if curves.iter().all(|c| (0..=1).contains(&lat.dot(c, r))) {
                let mut next = curves.clone();
                next.push(r.clone());
                let rows: Vec<Vec<i64>> = next.iter().map(|c| c.0.clone()).collect();
                if linalg::rank_i64(&rows) == rows.len() {
                    stack.push((next, i + 1));
                }
            }
        }
    }
    out.retain(|s| {
        let v = s.validate();
        v.is_ok() && v.warnings.is_empty()
    });
    out.sort_by(|a, b| a.minus_two_curves().cmp(b.minus_two_curves()));
    out
}

/// All pairs (Y, H) with Y from [`simple_systems`] and H a conjugacy class
/// representative of subgroups of `W(R_d)` permuting the curves of Y
/// (d = 5, 6, 7).
pub fn stable_pairs(d: u8) -> Result<Vec<(SurfaceSpec, GroupAction)>> {
    let classes = enumerate_subgroup_classes(d)?;
    let mut out = Vec::new();
    for spec in simple_systems(d) {
        for h in &classes {
            if h.stabilizes(spec.minus_two_curves()) {
                out.push((spec.clone(), h.clone()));
            }
        }
    }
    Ok(out)
}
