//! Exact polyhedral cones: double description, facets, pulling
//! triangulations and Leray-normalized volumes.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Rat};

/// Fixed-width bit set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(bits: usize) -> Self {
        BitSet {
            words: vec![0; bits.div_ceil(64).max(1)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn and(&self, other: &Self) -> Self {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }
}

/// A linear form `v ↦ l · v` used to slice a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LerayFunctional(pub Vec<BigInt>);

impl LerayFunctional {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        LerayFunctional(linalg::to_big(coeffs))
    }

    pub fn eval(&self, v: &[BigInt]) -> BigInt {
        linalg::dot(&self.0, v)
    }
}

/// A saturated sublattice of `Zⁿ` given by a basis, together with the
/// ambient intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    basis: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn full(gram: &[Vec<i64>]) -> Self {
        Sublattice {
            basis: linalg::identity(gram.len()),
            gram: gram.to_vec(),
        }
    }

    /// `basis` lists the basis vectors (the columns of B).
    pub fn new(basis: Vec<Vec<i64>>, gram: &[Vec<i64>]) -> Self {
        Sublattice {
            basis,
            gram: gram.to_vec(),
        }
    }

    /// The saturated sublattice orthogonal to `normal` under the form.
    pub fn orthogonal_to(normal: &[i64], gram: &[Vec<i64>]) -> Self {
        let row = linalg::mat_vec(gram, normal);
        Sublattice::new(linalg::integer_kernel(&[row], gram.len()), gram)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn ambient_gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// `BᵀQB`.
    pub fn restricted_gram(&self) -> Vec<Vec<i64>> {
        self.basis
            .iter()
            .map(|u| {
                let qu = linalg::mat_vec(&self.gram, u);
                self.basis.iter().map(|v| linalg::dot_i64(&qu, v)).collect()
            })
            .collect()
    }

    /// `|det(BᵀQB)|`: the factor turning determinants in these coordinates
    /// into volumes for which the dual lattice has covolume one.
    pub fn normalization(&self) -> BigInt {
        linalg::det_i64(&self.restricted_gram()).abs()
    }

    /// The constraint row `x ↦ ⟨g, Bx⟩`, i.e. `BᵀQg`.
    pub fn pairing_row(&self, g: &[i64]) -> Vec<BigInt> {
        let qg = linalg::mat_vec(&self.gram, g);
        self.basis
            .iter()
            .map(|u| BigInt::from(linalg::dot_i64(u, &qg)))
            .collect()
    }

    /// Restricts the functional `v ↦ ⟨c, v⟩` to these coordinates.
    pub fn functional(&self, c: &[i64]) -> LerayFunctional {
        LerayFunctional(self.pairing_row(c))
    }

    /// Maps coordinates back to the ambient lattice: `Bx`.
    pub fn embed(&self, x: &[BigInt]) -> Vec<BigInt> {
        let n = self.gram.len();
        (0..n)
            .map(|i| self.basis.iter().zip(x).map(|(u, xj)| xj * u[i]).sum())
            .collect()
    }

    /// Coordinates of an ambient vector lying in the sublattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<BigInt>> = self.basis.iter().map(|u| linalg::to_big(u)).collect();
        linalg::solve_combination(&cols, &linalg::to_big(v))
    }
}

/// A pointed polyhedral cone `{x : fᵢ · x ≥ 0}` with its extremal rays.
#[derive(Clone, Debug)]
pub struct RationalCone {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    facets: Vec<Vec<BigInt>>,
    facet_sources: Vec<usize>,
    incidence: Vec<BitSet>,
}

impl RationalCone {
    /// Solves `{x ∈ Q^dim : row · x ≥ 0 for every row}` by double description.
    ///
    /// Zero rows are ignored. Fails with [`Error::NotPointed`] when the rows do
    /// not span the dual space.
    pub fn from_inequalities(rows: &[Vec<BigInt>], dim: usize) -> Result<Self> {
        // Deduplicate up to positive scaling, remembering the first source.
        let mut unique: Vec<Vec<BigInt>> = Vec::new();
        let mut sources: Vec<usize> = Vec::new();
        let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "constraint length");
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let p = linalg::primitive(row);
            if seen.contains_key(&p) {
                continue;
            }
            seen.insert(p.clone(), unique.len());
            unique.push(p);
            sources.push(i);
        }
        let r = linalg::rank(&unique);
        if r < dim {
            return Err(Error::NotPointed { rank: r, dim });
        }
        let rays = double_description(&unique, dim);

        let ray_vecs: Vec<Vec<BigInt>> = rays.iter().map(|r| r.v.clone()).collect();
        let full = linalg::rank(&ray_vecs) == dim;
        let mut facets = Vec::new();
        let mut facet_sources = Vec::new();
        let mut incidence = Vec::new();
        if full {
            for (k, row) in unique.iter().enumerate() {
                let mut inc = BitSet::new(rays.len());
                let mut tight = Vec::new();
                for (j, ray) in rays.iter().enumerate() {
                    if ray.zeros.contains(k) {
                        inc.insert(j);
                        tight.push(ray.v.clone());
                    }
                }
                if tight.len() + 1 >= dim && linalg::rank(&tight) + 1 == dim {
                    facets.push(row.clone());
                    facet_sources.push(sources[k]);
                    incidence.push(inc);
                }
            }
        }
        Ok(RationalCone {
            dim,
            rays: ray_vecs,
            facets,
            facet_sources,
            incidence,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Extremal rays, primitive integer vectors in canonical order.
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// Irredundant facet normals (primitive constraint rows).
    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    /// For each facet, the index of the first input row defining it.
    pub fn facet_sources(&self) -> &[usize] {
        &self.facet_sources
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.facets.is_empty() || (self.dim == 1 && self.rays.len() == 1)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.facets.iter().all(|f| !linalg::dot(f, v).is_negative())
    }

    /// Enumerates a pulling triangulation as lists of ray indices. The apex of
    /// each pull is the smallest (or, with `apex_last`, the largest) ray index
    /// of the face.
    pub fn triangulate(&self, apex_last: bool) -> Vec<Vec<usize>> {
        if !self.is_full_dimensional() {
            return vec![];
        }
        let mut all = BitSet::new(self.rays.len());
        for i in 0..self.rays.len() {
            all.insert(i);
        }
        let mut out = Vec::new();
        self.pull(&all, self.dim, apex_last, &mut Vec::new(), &mut out);
        out
    }

    fn facets_of_face(&self, face: &BitSet) -> Vec<BitSet> {
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut cands: Vec<(usize, BitSet)> = Vec::new();
        for inc in &self.incidence {
            let s = face.and(inc);
            if s.is_empty() || s == *face || !seen.insert(s.clone()) {
                continue;
            }
            cands.push((s.count(), s));
        }
        cands.sort_by_key(|c| std::cmp::Reverse(c.0));
        let mut maximal: Vec<BitSet> = Vec::new();
        for (_, s) in cands {
            if !maximal.iter().any(|t| s.is_subset(t)) {
                maximal.push(s);
            }
        }
        maximal
    }

    fn pull(&self, face: &BitSet, dim: usize, apex_last: bool, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let members: Vec<usize> = face.iter().collect();
        if members.len() == dim {
            let mut simplex = prefix.clone();
            simplex.extend(members);
            out.push(simplex);
            return;
        }
        let apex = if apex_last {
            *members.last().unwrap()
        } else {
            members[0]
        };
        prefix.push(apex);
        for g in self.facets_of_face(face) {
            if !g.contains(apex) {
                self.pull(&g, dim - 1, apex_last, prefix, out);
            }
        }
        prefix.pop();
    }

    /// Leray volume of `{x in cone : l(x) = 1}` using the pulling
    /// triangulation with the given apex rule.
    pub fn leray_volume_with(&self, l: &LerayFunctional, sub: &Sublattice, apex_last: bool) -> Result<Rat> {
        assert_eq!(sub.rank(), self.dim, "sublattice rank must match cone dimension");
        let values: Vec<BigInt> = self.rays.iter().map(|r| l.eval(r)).collect();
        if let Some(bad) = values.iter().find(|v| !v.is_positive()) {
            return Err(Error::RayNotMet(bad.to_string()));
        }
        let simplices = self.triangulate(apex_last);
        let small: Option<Vec<Vec<i64>>> = self.rays.iter().map(|r| linalg::to_small(r)).collect();
        let simplex_det = |s: &Vec<usize>| -> BigInt {
            if let Some(rays) = &small {
                let m: Vec<Vec<i64>> = s.iter().map(|&i| rays[i].clone()).collect();
                if let Some(d) = linalg::det_checked(&m) {
                    return BigInt::from(d.abs());
                }
            }
            let m: Vec<Vec<BigInt>> = s.iter().map(|&i| self.rays[i].clone()).collect();
            linalg::det(&m).abs()
        };
        // Simplices share few distinct denominators; sum numerators per
        // denominator before touching rationals.
        let grouped: HashMap<BigInt, BigInt> = simplices
            .par_iter()
            .map(|s| (s.iter().map(|&i| values[i].clone()).product::<BigInt>(), simplex_det(s)))
            .fold(HashMap::new, |mut acc: HashMap<BigInt, BigInt>, (den, num)| {
                *acc.entry(den).or_insert_with(BigInt::zero) += num;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (den, num) in b {
                    *a.entry(den).or_insert_with(BigInt::zero) += num;
                }
                a
            });
        let mut terms: Vec<(BigInt, BigInt)> = grouped.into_iter().collect();
        terms.sort();
        let total: Rat = terms
            .into_iter()
            .fold(Rat::zero(), |acc, (den, num)| acc + Rat::new(num, den));
        let fact: BigInt = (1..self.dim).map(BigInt::from).product::<BigInt>().max(BigInt::one());
        Ok(total * Rat::new(sub.normalization(), fact))
    }

    /// Leray volume of `{x in cone : l(x) = 1}`, normalized so that the lattice
    /// dual to `sub` under the intersection form has covolume one. A cone that
    /// is not full-dimensional has volume zero.
    pub fn leray_volume(&self, l: &LerayFunctional, sub: &Sublattice) -> Result<Rat> {
        self.leray_volume_with(l, sub, false)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

/// Double description for `{x : A x ≥ 0}` with `A` of full column rank.
fn double_description(rows: &[Vec<BigInt>], dim: usize) -> Vec<Ray> {
    // Greedy choice of `dim` independent rows for the initial simplicial cone.
    let mut basis_rows: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        chosen.push(row.clone());
        if linalg::rank(&chosen) == chosen.len() {
            basis_rows.push(i);
            if basis_rows.len() == dim {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    let a0: Vec<Vec<BigInt>> = basis_rows.iter().map(|&i| rows[i].clone()).collect();
    let inv = linalg::inverse(&a0).expect("independent rows");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<Rat> = inv.iter().map(|r| r[j].clone()).collect();
            let lcm = col
                .iter()
                .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            let ints: Vec<BigInt> = col
                .iter()
                .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
                .collect();
            let mut zeros = BitSet::new(rows.len());
            for (k, &i) in basis_rows.iter().enumerate() {
                if k != j {
                    zeros.insert(i);
                }
            }
            Ray {
                v: linalg::primitive(&ints),
                zeros,
            }
        })
        .collect();

    let mut processed = BitSet::new(rows.len());
    for &i in &basis_rows {
        processed.insert(i);
    }
    for (t, row) in rows.iter().enumerate() {
        if processed.contains(t) {
            continue;
        }
        processed.insert(t);
        let values: Vec<BigInt> = rays.iter().map(|r| linalg::dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(t);
                }
            }
            continue;
        }
        let need = dim.saturating_sub(2);
        let adjacent_pairs: Vec<(usize, usize)> = pos
            .par_iter()
            .flat_map_iter(|&p| {
                let rays = &rays;
                neg.iter().filter_map(move |&n| {
                    let common = rays[p].zeros.and(&rays[n].zeros);
                    if common.count() < need {
                        return None;
                    }
                    let blocked = rays
                        .iter()
                        .enumerate()
                        .any(|(k, r)| k != p && k != n && common.is_subset(&r.zeros));
                    (!blocked).then_some((p, n))
                })
            })
            .collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (p, n) in adjacent_pairs {
            let (vp, vn) = (&values[p], &values[n]);
            let v: Vec<BigInt> = rays[n]
                .v
                .iter()
                .zip(&rays[p].v)
                .map(|(xn, xp)| vp * xn - vn * xp)
                .collect();
            let mut zeros = rays[p].zeros.and(&rays[n].zeros);
            zeros.insert(t);
            next.push(Ray {
                v: linalg::primitive(&v),
                zeros,
            });
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.insert(t);
            }
            next.push(r);
        }
        rays = next;
    }
    rays.sort_by(|a, b| a.v.cmp(&b.v));
    rays
}

/// The dual cone `{v : ⟨g, v⟩ ≥ 0 for all generators g}` under `gram`.
pub fn dualize(generators: &[Vec<i64>], gram: &[Vec<i64>]) -> Result<RationalCone> {
    dualize_on(generators, &Sublattice::full(gram))
}

/// The dual of `generators` intersected with a sublattice, in the sublattice's
/// coordinates: `{x : ⟨g, Bx⟩ ≥ 0}`.
pub fn dualize_on(generators: &[Vec<i64>], sub: &Sublattice) -> Result<RationalCone> {
    let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| sub.pairing_row(g)).collect();
    RationalCone::from_inequalities(&rows, sub.rank())
}

/// The slice `{v ∈ cone : ⟨normal, v⟩ = 0}` in coordinates of the saturated
/// sublattice `normal⊥`, together with that sublattice.
pub fn face(cone: &RationalCone, normal: &[i64], gram: &[Vec<i64>]) -> Result<(RationalCone, Sublattice)> {
    let sub = Sublattice::orthogonal_to(normal, gram);
    let rows: Vec<Vec<BigInt>> = cone
        .facet_normals()
        .iter()
        .map(|f| sub.basis().iter().map(|u| linalg::dot(f, &linalg::to_big(u))).collect())
        .collect();
    let restricted = RationalCone::from_inequalities(&rows, sub.rank())?;
    Ok((restricted, sub))
}

/// Leray volume of a cone given in `sub` coordinates, with `l` expressed in
/// the same coordinates.
pub fn leray_volume(cone: &RationalCone, l: &LerayFunctional, sub: &Sublattice) -> Result<Rat> {
    cone.leray_volume(l, sub)
}
