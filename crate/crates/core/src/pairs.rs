//! Pairs (Y, H): a split surface together with a finite group H ⊂ W(R_d)
//! acting on its Picard lattice and permuting its (−2)-curves.
//!
//! α(Y, H) is the Leray volume of the nef cone of the H-fixed sublattice,
//! where the effective cone is generated by orbit sums of the effective
//! generators of Y.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cones::{dualize_on, Sublattice};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeMap, PicardLattice, SurfaceKind};
use crate::linalg::{self, Rat};
use crate::rootsys::{orbit_root_system, weyl_order, RootType};
use crate::surface::{AlphaResult, SurfaceSpec};

/// Refuse to close groups beyond this many elements.
const MAX_GROUP_ORDER: usize = 60_000;

/// A finite group of lattice automorphisms fixing −K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    lattice: PicardLattice,
    generators: Vec<LatticeMap>,
    elements: Vec<LatticeMap>,
}

impl GroupAction {
    /// Closes the generators under multiplication. Every generator must
    /// preserve the intersection form and −K.
    pub fn generated_by(lattice: &PicardLattice, generators: Vec<LatticeMap>) -> Result<Self> {
        for g in &generators {
            if !g.is_automorphism_of(lattice) {
                return Err(Error::NotIsometry(format!("{:?}", g.rows())));
            }
        }
        let elements = closure(lattice.rank(), &generators).ok_or(Error::GroupTooLarge(lattice.degree()))?;
        Ok(GroupAction {
            lattice: lattice.clone(),
            generators,
            elements,
        })
    }

    pub fn trivial(lattice: &PicardLattice) -> Self {
        GroupAction {
            lattice: lattice.clone(),
            generators: vec![],
            elements: vec![LatticeMap::identity(lattice.rank())],
        }
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[LatticeMap] {
        &self.generators
    }

    /// All elements, sorted; the identity is included.
    pub fn elements(&self) -> &[LatticeMap] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Does every element permute `set`?
    pub fn stabilizes(&self, set: &[DivisorClass]) -> bool {
        let members: HashSet<&DivisorClass> = set.iter().collect();
        self.generators
            .iter()
            .all(|g| set.iter().all(|c| members.contains(&g.apply(c))))
    }

    /// Orbits on `set` (which must be stable), in order of first appearance.
    pub fn orbits(&self, set: &[DivisorClass]) -> Vec<Vec<DivisorClass>> {
        let index: HashMap<&DivisorClass, usize> = set.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut done = vec![false; set.len()];
        let mut out = Vec::new();
        for i in 0..set.len() {
            if done[i] {
                continue;
            }
            let mut members: Vec<usize> = self
                .elements
                .iter()
                .map(|m| *index.get(&m.apply(&set[i])).expect("set is stable under the action"))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &k in &members {
                done[k] = true;
            }
            out.push(members.into_iter().map(|k| set[k].clone()).collect());
        }
        out
    }

    /// The elements mapping `set` onto itself.
    pub fn setwise_stabilizer(&self, set: &[DivisorClass]) -> GroupAction {
        let members: HashSet<&DivisorClass> = set.iter().collect();
        let elements: Vec<LatticeMap> = self
            .elements
            .iter()
            .filter(|m| set.iter().all(|c| members.contains(&m.apply(c))))
            .cloned()
            .collect();
        subgroup_from_elements(&self.lattice, elements)
    }

    /// `w H w⁻¹`.
    pub fn conjugate(&self, w: &LatticeMap) -> Result<Self> {
        let winv = inverse_of(w, &self.lattice);
        let gens = self.generators.iter().map(|g| w.compose(g).compose(&winv)).collect();
        GroupAction::generated_by(&self.lattice, gens)
    }
}

/// The inverse of a lattice automorphism: `M⁻¹ = Q⁻¹ Mᵀ Q`.
fn inverse_of(m: &LatticeMap, lat: &PicardLattice) -> LatticeMap {
    // Q is unimodular and symmetric, so Q⁻¹ is an integer matrix.
    let q: Vec<Vec<BigInt>> = lat.gram().iter().map(|r| linalg::to_big(r)).collect();
    let qinv = linalg::inverse(&q).expect("unimodular form");
    let qinv: Vec<Vec<i64>> = qinv
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x.to_integer()).expect("small"))
                .collect()
        })
        .collect();
    let rows = linalg::mat_mul(&qinv, &linalg::mat_mul(&linalg::transpose(&m.rows()), lat.gram()));
    LatticeMap::from_rows(&rows)
}

fn closure(dim: usize, generators: &[LatticeMap]) -> Option<Vec<LatticeMap>> {
    let id = LatticeMap::identity(dim);
    let mut seen: HashSet<LatticeMap> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > MAX_GROUP_ORDER {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<LatticeMap> = seen.into_iter().collect();
    elements.sort();
    Some(elements)
}

/// Group generated by products of reflections; each word lists (−2)-classes
/// and stands for `s_{x₁} s_{x₂} ⋯`.
pub fn action_from_words(lat: &PicardLattice, words: &[Vec<DivisorClass>]) -> Result<GroupAction> {
    let mut gens = Vec::new();
    for word in words {
        let mut m = LatticeMap::identity(lat.rank());
        for x in word {
            if !lat.is_minus_n_class(x, 2) {
                return Err(Error::NotMinusTwoClass(format!("{:?}", x.coords())));
            }
            m = m.compose(&LatticeMap::reflection(lat, x));
        }
        gens.push(m);
    }
    GroupAction::generated_by(lat, gens)
}

/// Parses a reflection letter such as `s_{L-E1-E2-E3}`.
pub fn parse_reflection(lat: &PicardLattice, letter: &str) -> Result<DivisorClass> {
    let inner = letter
        .trim()
        .strip_prefix("s_{")
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::ClassName(letter.to_string()))?;
    lat.parse_class(inner)
}

/// The class of the edge `[i j]` (1 ≤ i < j ≤ 5) of the degree 5 diagram:
/// `[1 j] ↦ E_{j−1}`, otherwise `[i j] ↦ L − E_k − E_l` with
/// `{k, l} = {1..4} ∖ {i−1, j−1}`.
pub fn s5_edge_class(i: usize, j: usize) -> DivisorClass {
    let (i, j) = (i.min(j), i.max(j));
    assert!(1 <= i && i < j && j <= 5, "bad edge [{i} {j}]");
    let mut v = vec![0i64; 5];
    if i == 1 {
        v[j - 1] = 1;
    } else {
        v[0] = 1;
        for k in 1..=4 {
            if k != i - 1 && k != j - 1 {
                v[k] = -1;
            }
        }
    }
    DivisorClass::new(v)
}

fn s5_edges() -> Vec<(usize, usize)> {
    (1..=5).flat_map(|i| (i + 1..=5).map(move |j| (i, j))).collect()
}

/// The lattice automorphism of degree 5 induced by permuting the five
/// vertices. `perm[k]` is the image of `k + 1`.
pub fn s5_matrix(perm: &[usize]) -> Result<LatticeMap> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != [1, 2, 3, 4, 5] {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    let image = |(i, j): (usize, usize)| s5_edge_class(perm[i - 1], perm[j - 1]);
    // E₁..E₄ and L₁₂ = [4 5] form a basis of N¹.
    let source_edges = [(1, 2), (1, 3), (1, 4), (1, 5), (4, 5)];
    let source: Vec<DivisorClass> = source_edges.iter().map(|&e| s5_edge_class(e.0, e.1)).collect();
    let target: Vec<DivisorClass> = source_edges.iter().map(|&e| image(e)).collect();
    let s = LatticeMap::from_columns(&source).rows();
    let t = LatticeMap::from_columns(&target).rows();
    let s_big: Vec<Vec<BigInt>> = s.iter().map(|r| linalg::to_big(r)).collect();
    let sinv = linalg::inverse(&s_big).expect("basis");
    let mut rows = vec![vec![0i64; 5]; 5];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let v: Rat = (0..5)
                .map(|k| Rat::from_integer(t[i][k].into()) * &sinv[k][j])
                .fold(Rat::zero(), |a, b| a + b);
            assert!(v.is_integer(), "inconsistent extension");
            *x = i64::try_from(v.to_integer()).expect("small");
        }
    }
    let m = LatticeMap::from_rows(&rows);
    for e in s5_edges() {
        assert_eq!(m.apply(&s5_edge_class(e.0, e.1)), image(e), "inconsistent extension");
    }
    Ok(m)
}

/// Group generated by vertex permutations acting on the ordinary degree 5
/// surface.
pub fn action_from_s5(perms: &[Vec<usize>]) -> Result<GroupAction> {
    let lat = PicardLattice::of_kind(SurfaceKind::Blowup(5));
    let gens = perms.iter().map(|p| s5_matrix(p)).collect::<Result<Vec<_>>>()?;
    GroupAction::generated_by(&lat, gens)
}

/// `N¹ ∩ Fix(H)` with a basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLattice {
    pub sublattice: Sublattice,
    pub gram_restricted: Vec<Vec<i64>>,
    pub rank: usize,
}

impl FixedLattice {
    pub fn basis(&self) -> &[Vec<i64>] {
        self.sublattice.basis()
    }

    pub fn det(&self) -> BigInt {
        linalg::det_i64(&self.gram_restricted)
    }
}

pub fn fixed_lattice(action: &GroupAction) -> FixedLattice {
    let n = action.lattice.rank();
    let id = linalg::identity(n);
    let rows: Vec<Vec<i64>> = action
        .generators
        .iter()
        .flat_map(|g| {
            g.rows()
                .into_iter()
                .zip(&id)
                .map(|(r, e)| r.iter().zip(e).map(|(a, b)| a - b).collect::<Vec<i64>>())
                .collect::<Vec<_>>()
        })
        .collect();
    let basis = linalg::integer_kernel(&rows, n);
    let sublattice = Sublattice::new(basis, action.lattice.gram());
    let gram_restricted = sublattice.restricted_gram();
    FixedLattice {
        rank: sublattice.rank(),
        sublattice,
        gram_restricted,
    }
}

fn check_same_lattice(spec: &SurfaceSpec, action: &GroupAction) -> Result<()> {
    if spec.lattice() != action.lattice() {
        return Err(Error::ActionDoesNotStabilizeSurface);
    }
    Ok(())
}

/// Orbits of H on the effective generators of `spec`.
pub fn generator_orbits(spec: &SurfaceSpec, action: &GroupAction) -> Result<Vec<Vec<DivisorClass>>> {
    check_same_lattice(spec, action)?;
    if !action.stabilizes(spec.minus_two_curves()) {
        return Err(Error::ActionDoesNotStabilizeSurface);
    }
    let gens = spec.effective_generators()?;
    if !action.stabilizes(&gens) {
        return Err(Error::ActionDoesNotStabilizeSurface);
    }
    Ok(action.orbits(&gens))
}

/// One orbit sum per H-orbit of effective generators.
pub fn orbit_sum_generators(spec: &SurfaceSpec, action: &GroupAction) -> Result<Vec<DivisorClass>> {
    Ok(generator_orbits(spec, action)?
        .into_iter()
        .map(|orbit| orbit.iter().skip(1).fold(orbit[0].clone(), |acc, c| acc.add(c)))
        .collect())
}

/// α(Y, H), computed in the fixed sublattice with the restricted form.
pub fn alpha_pair(spec: &SurfaceSpec, action: &GroupAction) -> Result<AlphaResult> {
    let sums = orbit_sum_generators(spec, action)?;
    let fixed = fixed_lattice(action);
    if fixed.det().is_zero() {
        return Err(Error::DegenerateForm);
    }
    let gens: Vec<Vec<i64>> = sums.into_iter().map(|g| g.0).collect();
    let cone = dualize_on(&gens, &fixed.sublattice)?;
    let l = fixed.sublattice.functional(spec.lattice().anticanonical().coords());
    let alpha = cone.leray_volume(&l, &fixed.sublattice)?;
    Ok(AlphaResult {
        alpha,
        rho: fixed.rank,
        num_effective_generators: cone.facet_normals().len(),
        num_nef_rays: Some(cone.rays().len()),
        root_type: spec.root_type()?,
    })
}

/// Type of the orbit root system of the (−2)-curves of `spec` under H.
pub fn orbit_root_type(spec: &SurfaceSpec, action: &GroupAction) -> Result<RootType> {
    check_same_lattice(spec, action)?;
    if spec.minus_two_curves().is_empty() {
        return Ok(RootType::empty());
    }
    Ok(orbit_root_system(&spec.simple_system(), action)?.1)
}

/// α(X, H) of the ordinary surface of the same degree divided by
/// `#W(⟨R_Y⟩_H)`.
pub fn alpha_pair_via_weyl(spec: &SurfaceSpec, action: &GroupAction) -> Result<Rat> {
    let SurfaceKind::Blowup(d) = spec.lattice().kind() else {
        return Err(Error::NeedsBlowup);
    };
    let ordinary = SurfaceSpec::ordinary(SurfaceKind::Blowup(d));
    let base = alpha_pair(&ordinary, action)?.alpha;
    let order = weyl_order(&orbit_root_type(spec, action)?);
    Ok(base / Rat::from_integer(BigInt::from(order)))
}

/// The standard simple roots of `R_d`: `E_i − E_{i+1}` and `L − E₁ − E₂ − E₃`.
pub fn ambient_simple_roots(lat: &PicardLattice) -> Result<Vec<DivisorClass>> {
    let SurfaceKind::Blowup(_) = lat.kind() else {
        return Err(Error::NeedsBlowup);
    };
    let n = lat.rank();
    let mut roots: Vec<DivisorClass> = (1..n - 1)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            DivisorClass::new(v)
        })
        .collect();
    if n >= 4 {
        let mut v = vec![0; n];
        v[0] = 1;
        v[1] = -1;
        v[2] = -1;
        v[3] = -1;
        roots.push(DivisorClass::new(v));
    }
    Ok(roots)
}

/// All of `W(R_d)` as a group action (feasible for d ≥ 3).
pub fn weyl_group(lat: &PicardLattice) -> Result<GroupAction> {
    let words: Vec<Vec<DivisorClass>> = ambient_simple_roots(lat)?.into_iter().map(|r| vec![r]).collect();
    action_from_words(lat, &words)
}

/// The subgroup of `group` permuting the (−2)-curves of `spec`.
pub fn stabilizer(spec: &SurfaceSpec, group: &GroupAction) -> Result<GroupAction> {
    check_same_lattice(spec, group)?;
    Ok(group.setwise_stabilizer(spec.minus_two_curves()))
}

/// The longest element of `W(S)` for a simple system `S`: the product of
/// reflections taking the dominant chamber of `S` to its negative.
pub fn longest_element(lat: &PicardLattice, simple: &[DivisorClass]) -> Result<LatticeMap> {
    let n = lat.rank();
    if simple.is_empty() {
        return Ok(LatticeMap::identity(n));
    }
    // x = Σ cⱼ sⱼ with ⟨x, sᵢ⟩ = 1 for all i lies strictly inside the
    // negative chamber (the root form is −⟨·,·⟩).
    let gram: Vec<Vec<BigInt>> = simple
        .iter()
        .map(|a| simple.iter().map(|b| BigInt::from(lat.dot(a, b))).collect())
        .collect();
    let inv = linalg::inverse(&gram).ok_or_else(|| Error::InvalidSimpleSystem("dependent roots".into()))?;
    let coeffs: Vec<Rat> = inv
        .iter()
        .map(|row| row.iter().fold(Rat::zero(), |a, b| a + b))
        .collect();
    let den = coeffs
        .iter()
        .fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let mut x = DivisorClass::new(vec![0; n]);
    for (c, s) in coeffs.iter().zip(simple) {
        let k = i64::try_from((c * Rat::from_integer(den.clone())).to_integer()).expect("small");
        x = x.add(&s.scale(k));
    }
    let mut w = LatticeMap::identity(n);
    while let Some(s) = simple.iter().find(|s| lat.dot(&x, s) > 0) {
        x = lat.reflect(s, &x);
        w = LatticeMap::reflection(lat, s).compose(&w);
    }
    Ok(w)
}

/// The Geiser (degree 2) or Bertini (degree 1) involution: −1 on `K^⊥`,
/// fixing `K`. It lies in `W(R_d)`.
pub fn minus_one_on_roots(lat: &PicardLattice) -> Result<LatticeMap> {
    let d = match lat.kind() {
        SurfaceKind::Blowup(d @ (1 | 2)) => i64::from(d),
        _ => return Err(Error::NeedsBlowup),
    };
    let k = lat.anticanonical();
    let n = lat.rank();
    let columns: Vec<DivisorClass> = (0..n)
        .map(|i| {
            let e = DivisorClass::unit(n, i);
            let t = 2 * lat.dot(&e, k) / d;
            e.scale(-1).add(&k.scale(t))
        })
        .collect();
    Ok(LatticeMap::from_columns(&columns))
}

/// Wraps a set of elements already known to form a group, choosing a small
/// generating set greedily in element order.
fn subgroup_from_elements(lat: &PicardLattice, mut elements: Vec<LatticeMap>) -> GroupAction {
    elements.sort();
    let mut generators: Vec<LatticeMap> = Vec::new();
    let mut span: HashSet<LatticeMap> = HashSet::from([LatticeMap::identity(lat.rank())]);
    for e in &elements {
        if span.contains(e) {
            continue;
        }
        generators.push(e.clone());
        span = closure(lat.rank(), &generators)
            .expect("subgroup of a closed group")
            .into_iter()
            .collect();
    }
    GroupAction {
        lattice: lat.clone(),
        generators,
        elements,
    }
}

/// A subgroup as a bit mask over the indices of the ambient group's elements.
type Mask = Vec<u64>;

fn mask_of(indices: impl IntoIterator<Item = usize>, words: usize) -> Mask {
    let mut m = vec![0u64; words];
    for i in indices {
        m[i / 64] |= 1 << (i % 64);
    }
    m
}

fn mask_members(m: &Mask) -> Vec<usize> {
    (0..m.len() * 64).filter(|&i| m[i / 64] >> (i % 64) & 1 == 1).collect()
}

/// Representatives of the conjugacy classes of subgroups of `W(R_d)` for
/// d = 5, 6, 7. Each representative is the conjugate with the
/// lexicographically smallest sorted element list.
pub fn enumerate_subgroup_classes(d: u8) -> Result<Vec<GroupAction>> {
    if !(5..=7).contains(&d) {
        return Err(Error::GroupTooLarge(d));
    }
    let lat = PicardLattice::of_kind(SurfaceKind::Blowup(d));
    let w = weyl_group(&lat)?;
    let elems = w.elements();
    let n = elems.len();
    let words = n.div_ceil(64);
    let index: HashMap<&LatticeMap, usize> = elems.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mul: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&a.compose(b)]).collect())
        .collect();
    let id = index[&LatticeMap::identity(lat.rank())];
    let inv: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| mul[a][b] == id).expect("inverse"))
        .collect();

    // Closure of a generator list by breadth-first right multiplication.
    let close = |gens: &[usize]| -> Mask {
        let mut members = mask_of([id], words);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = mul[x][g];
                if members[y / 64] >> (y % 64) & 1 == 0 {
                    members[y / 64] |= 1 << (y % 64);
                    queue.push_back(y);
                }
            }
        }
        members
    };

    // Every subgroup is a join of cyclic ones; remember a generator list
    // for each subgroup found.
    let mut subgroups: BTreeMap<Mask, Vec<usize>> = BTreeMap::new();
    for g in 0..n {
        subgroups.entry(close(&[g])).or_insert_with(|| vec![g]);
    }
    let cyclic: Vec<(Mask, usize)> = subgroups.iter().map(|(m, g)| (m.clone(), g[0])).collect();
    let mut frontier: Vec<(Mask, Vec<usize>)> = subgroups.iter().map(|(m, g)| (m.clone(), g.clone())).collect();
    while let Some((h, gens)) = frontier.pop() {
        for (c, g) in &cyclic {
            if h.iter().zip(c).all(|(a, b)| b & !a == 0) {
                continue;
            }
            let mut joined = gens.clone();
            joined.push(*g);
            let j = close(&joined);
            if !subgroups.contains_key(&j) {
                subgroups.insert(j.clone(), joined.clone());
                frontier.push((j, joined));
            }
        }
    }

    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in subgroups.keys() {
        let members = mask_members(h);
        let canonical = (0..n)
            .map(|g| {
                let mut conj: Vec<usize> = members.iter().map(|&x| mul[mul[g][x]][inv[g]]).collect();
                conj.sort_unstable();
                conj
            })
            .min()
            .expect("nonempty group");
        classes.insert(canonical);
    }
    let mut reps: Vec<GroupAction> = classes
        .into_iter()
        .map(|members| subgroup_from_elements(&lat, members.iter().map(|&i| elems[i].clone()).collect()))
        .collect();
    reps.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(reps)
}

/// One row of a pair table for the ordinary surface of degree 5 or 6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRow {
    pub representative: GroupAction,
    /// Generators of the representative: cycle notation in degree 5,
    /// reflection words in degrees 6 and 7.
    pub label: String,
    pub order: usize,
    pub orbits: Vec<Vec<DivisorClass>>,
    pub rho: usize,
    pub m: usize,
    pub alpha: Rat,
}

/// One representative per conjugacy class of subgroups of `W(R_d)`
/// (d = 5, 6, 7), each the conjugate with the shortest generator labels,
/// together with that label: cycle notation in degree 5, words in the
/// simple reflections `s123`, `s12`, `s23`, … otherwise.
pub fn labelled_subgroup_classes(d: u8) -> Result<Vec<(String, GroupAction)>> {
    let classes = enumerate_subgroup_classes(d)?;
    let labeller = Labeller::new(d)?;
    let weyl = weyl_group(&PicardLattice::of_kind(SurfaceKind::Blowup(d)))?;
    Ok(classes
        .iter()
        .map(|class| labeller.best_conjugate(class, &weyl))
        .collect())
}

/// Rows for every conjugacy class of subgroups of `W(R_d)`.
pub fn pair_table(d: u8) -> Result<Vec<PairRow>> {
    let spec = SurfaceSpec::ordinary(SurfaceKind::Blowup(d));
    labelled_subgroup_classes(d)?
        .into_iter()
        .map(|(label, h)| {
            let orbits = generator_orbits(&spec, &h)?;
            let res = alpha_pair(&spec, &h)?;
            Ok(PairRow {
                label,
                order: h.order(),
                orbits,
                rho: res.rho,
                m: res.num_effective_generators,
                alpha: res.alpha,
                representative: h,
            })
        })
        .collect()
}

/// Names group elements: permutations of five points in degree 5, shortest
/// words in the simple reflections otherwise.
struct Labeller {
    names: HashMap<LatticeMap, String>,
}

impl Labeller {
    fn new(d: u8) -> Result<Self> {
        let lat = PicardLattice::of_kind(SurfaceKind::Blowup(d));
        let mut names = HashMap::new();
        if d == 5 {
            for perm in permutations(5) {
                let m = s5_matrix(&perm)?;
                names.insert(m, cycle_notation(&perm));
            }
        } else {
            // Letters in the order s123, s12, s23, ...
            let mut roots = ambient_simple_roots(&lat)?;
            roots.rotate_right(1);
            let letters: Vec<(String, LatticeMap)> = roots
                .iter()
                .map(|r| (reflection_letter(r), LatticeMap::reflection(&lat, r)))
                .collect();
            let id = LatticeMap::identity(lat.rank());
            names.insert(id.clone(), "e".to_string());
            let mut queue = VecDeque::from([(id, String::new())]);
            while let Some((x, word)) = queue.pop_front() {
                for (name, s) in &letters {
                    let y = x.compose(s);
                    if !names.contains_key(&y) {
                        let w = if word.is_empty() {
                            name.clone()
                        } else {
                            format!("{word} {name}")
                        };
                        names.insert(y.clone(), w.clone());
                        queue.push_back((y, w));
                    }
                }
            }
        }
        Ok(Labeller { names })
    }

    fn key(&self, m: &LatticeMap) -> (usize, &str) {
        let name = self.names[m].as_str();
        (name.len(), name)
    }

    /// A minimal generating set preferring short names.
    fn generators(&self, h: &GroupAction) -> Vec<LatticeMap> {
        let dim = h.lattice.rank();
        let mut elements: Vec<&LatticeMap> = h.elements.iter().filter(|m| !m.is_identity()).collect();
        elements.sort_by(|a, b| self.key(a).cmp(&self.key(b)));
        let mut gens: Vec<LatticeMap> = Vec::new();
        let mut span: HashSet<LatticeMap> = HashSet::from([LatticeMap::identity(dim)]);
        for e in elements {
            if span.len() == h.order() {
                break;
            }
            if !span.contains(e) {
                gens.push(e.clone());
                span = closure(dim, &gens).expect("subgroup").into_iter().collect();
            }
        }
        for i in (0..gens.len()).rev() {
            let mut fewer = gens.clone();
            fewer.remove(i);
            if closure(dim, &fewer).expect("subgroup").len() == h.order() {
                gens = fewer;
            }
        }
        gens
    }

    fn label_of(&self, gens: &[LatticeMap]) -> String {
        if gens.is_empty() {
            return "<e>".to_string();
        }
        let parts: Vec<&str> = gens.iter().map(|g| self.names[g].as_str()).collect();
        format!("<{}>", parts.join(", "))
    }

    fn best_conjugate(&self, class: &GroupAction, weyl: &GroupAction) -> (String, GroupAction) {
        let lat = &class.lattice;
        let mut best: Option<((usize, usize, String), GroupAction)> = None;
        let mut tried: HashSet<Vec<LatticeMap>> = HashSet::new();
        for w in weyl.elements() {
            let winv = inverse_of(w, lat);
            let mut elements: Vec<LatticeMap> = class.elements.iter().map(|x| w.compose(x).compose(&winv)).collect();
            elements.sort();
            if !tried.insert(elements.clone()) {
                continue;
            }
            let conj = GroupAction {
                lattice: lat.clone(),
                generators: vec![],
                elements,
            };
            let gens = self.generators(&conj);
            let label = self.label_of(&gens);
            let key = (gens.len(), label.len(), label);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((
                    key,
                    GroupAction {
                        generators: gens,
                        ..conj
                    },
                ));
            }
        }
        let ((_, _, label), h) = best.expect("nonempty group");
        (label, h)
    }
}

/// `s123` for `L−E1−E2−E3`, `s12` for `E1−E2`, and so on.
fn reflection_letter(root: &DivisorClass) -> String {
    let digits: String = root.coords()[1..]
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    format!("s{digits}")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            cur.swap(j, k - 1);
        }
    }
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

/// `(1 2)(3 4 5)`; the identity is `e`.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 1..=perm.len() {
        if seen[start - 1] || perm[start - 1] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start - 1] = true;
        let mut k = perm[start - 1];
        while k != start {
            seen[k - 1] = true;
            cycle.push(k);
            k = perm[k - 1];
        }
        let body: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// `α(X, H)` with `H` trivial equals `α(X)`; exposed for consistency checks.
pub fn trivial_pair_alpha(spec: &SurfaceSpec) -> Result<Rat> {
    Ok(alpha_pair(spec, &GroupAction::trivial(spec.lattice()))?.alpha)
}
