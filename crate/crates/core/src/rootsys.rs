//! Dynkin classification of simple systems, Weyl group orders and orbit root
//! systems.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, PicardLattice};
use crate::linalg;
use crate::pairs::GroupAction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    /// Position in the serialized component order E, F, G, D, C, B, A.
    fn print_rank(self) -> u8 {
        match self {
            Family::E => 0,
            Family::F => 1,
            Family::G => 2,
            Family::D => 3,
            Family::C => 4,
            Family::B => 5,
            Family::A => 6,
        }
    }
}

/// An irreducible root system type such as `D₄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    /// Builds a component, canonicalizing the low-rank coincidences
    /// B₁ = A₁, C₂ = B₂ (and rejecting D₂, D₃ which are not single
    /// canonical components).
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let bad = || Error::RootTypeName(format!("{}{}", family.letter(), rank));
        let (family, rank) = match (family, rank) {
            (_, 0) => return Err(bad()),
            (Family::B, 1) | (Family::C, 1) => (Family::A, 1),
            (Family::C, 2) => (Family::B, 2),
            (Family::D, 1..=3) => return Err(bad()),
            (Family::E, 6..=8) | (Family::F, 4) | (Family::G, 2) => (family, rank),
            (Family::E | Family::F | Family::G, _) => return Err(bad()),
            _ => (family, rank),
        };
        Ok(Component { family, rank })
    }

    pub fn weyl_order(self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    pub fn num_roots(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => [72, 126, 240][n - 6],
            Family::F => 48,
            Family::G => 12,
        }
    }

    /// Gram matrix of a standard simple system (integral after scaling).
    fn catalogue_gram(self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut g = vec![vec![0i64; n]; n];
        let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self.family {
            Family::A => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 1..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            Family::B => {
                // e₁−e₂, …, e_{n−1}−e_n, e_n
                for i in 0..n {
                    g[i][i] = 2;
                }
                g[n - 1][n - 1] = 1;
                for i in 1..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            Family::C => {
                // e₁−e₂, …, e_{n−1}−e_n, 2e_n
                for i in 0..n {
                    g[i][i] = 2;
                }
                g[n - 1][n - 1] = 4;
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, -1);
                }
                link(&mut g, n - 2, n - 1, -2);
            }
            Family::D => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, -1);
                }
                link(&mut g, n - 3, n - 1, -1);
            }
            Family::E => {
                // Bourbaki labelling: chain 1-3-4-5-…, node 2 on node 4.
                for i in 0..n {
                    g[i][i] = 2;
                }
                link(&mut g, 0, 2, -1);
                link(&mut g, 1, 3, -1);
                for i in 3..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            Family::F => {
                g = vec![
                    vec![4, -2, 0, 0],
                    vec![-2, 4, -2, 0],
                    vec![0, -2, 2, -1],
                    vec![0, 0, -1, 2],
                ];
            }
            Family::G => {
                g = vec![vec![2, -3], vec![-3, 6]];
            }
        }
        g
    }

    /// Canonical components of a given rank, in matching order.
    fn candidates(rank: usize) -> Vec<Component> {
        let mut out = vec![Component {
            family: Family::A,
            rank,
        }];
        if rank >= 2 {
            out.push(Component {
                family: Family::B,
                rank,
            });
        }
        if rank >= 3 {
            out.push(Component {
                family: Family::C,
                rank,
            });
        }
        if rank >= 4 {
            out.push(Component {
                family: Family::D,
                rank,
            });
        }
        if (6..=8).contains(&rank) {
            out.push(Component {
                family: Family::E,
                rank,
            });
        }
        if rank == 4 {
            out.push(Component {
                family: Family::F,
                rank,
            });
        }
        if rank == 2 {
            out.push(Component {
                family: Family::G,
                rank,
            });
        }
        out
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A multiset of irreducible components, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RootType {
    components: Vec<Component>,
}

impl RootType {
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort_by_key(|c| (c.family.print_rank(), std::cmp::Reverse(c.rank)));
        RootType { components }
    }

    pub fn empty() -> Self {
        RootType::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn num_roots(&self) -> usize {
        self.components.iter().map(|c| c.num_roots()).sum()
    }
}

/// Product of the component Weyl group orders.
pub fn weyl_order(t: &RootType) -> u64 {
    t.components.iter().map(|c| c.weyl_order()).product()
}

impl fmt::Display for RootType {
    /// `A2+A1`, `D4+4A1`, `E8`; `-` for the empty type.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("-");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut j = i;
            while j < self.components.len() && self.components[j] == c {
                j += 1;
            }
            parts.push(if j - i == 1 {
                c.to_string()
            } else {
                format!("{}{}", j - i, c)
            });
            i = j;
        }
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(RootType::empty());
        }
        let bad = || Error::RootTypeName(s.to_string());
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let letter_at = part.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
            let mult: usize = if letter_at == 0 {
                1
            } else {
                part[..letter_at].parse().map_err(|_| bad())?
            };
            let family = match part[letter_at..].chars().next() {
                Some('A') => Family::A,
                Some('B') => Family::B,
                Some('C') => Family::C,
                Some('D') => Family::D,
                Some('E') => Family::E,
                Some('F') => Family::F,
                Some('G') => Family::G,
                _ => return Err(bad()),
            };
            let rank: usize = part[letter_at + 1..].parse().map_err(|_| bad())?;
            let c = Component::new(family, rank)?;
            comps.extend(std::iter::repeat_n(c, mult));
        }
        Ok(RootType::new(comps))
    }
}

/// `R_d`: A₁, A₁×A₂, A₄, D₅, E₆, E₇, E₈ for d = 7..1.
///
/// # Panics
/// If `d` is outside 1..7.
pub fn ambient_root_type(d: u8) -> RootType {
    let s = match d {
        7 => "A1",
        6 => "A2+A1",
        5 => "A4",
        4 => "D5",
        3 => "E6",
        2 => "E7",
        1 => "E8",
        _ => panic!("no ambient root system in degree {d}"),
    };
    s.parse().expect("static root type")
}

/// A linearly independent set of roots with inner product `ip(x, y) = −⟨x, y⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSystem {
    gram: Vec<Vec<i64>>,
    roots: Vec<DivisorClass>,
}

impl SimpleSystem {
    pub fn new(lat: &PicardLattice, roots: Vec<DivisorClass>) -> Self {
        SimpleSystem {
            gram: lat.gram().to_vec(),
            roots,
        }
    }

    pub fn with_gram(gram: Vec<Vec<i64>>, roots: Vec<DivisorClass>) -> Self {
        SimpleSystem { gram, roots }
    }

    pub fn roots(&self) -> &[DivisorClass] {
        &self.roots
    }

    pub fn ip(&self, x: &DivisorClass, y: &DivisorClass) -> i64 {
        -linalg::dot_i64(&x.0, &linalg::mat_vec(&self.gram, &y.0))
    }

    /// Matrix of `ip` over the roots.
    pub fn inner_products(&self) -> Vec<Vec<i64>> {
        self.roots
            .iter()
            .map(|x| self.roots.iter().map(|y| self.ip(x, y)).collect())
            .collect()
    }

    pub fn classify(&self) -> Result<RootType> {
        classify_inner_products(&self.inner_products())
    }
}

/// Cartan integers `2·ip(xᵢ,xⱼ)/ip(xⱼ,xⱼ)`, or an error if they are not
/// integral and non-positive off the diagonal.
fn cartan(ip: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = ip.len();
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        if ip[i][i] <= 0 {
            return Err(Error::InvalidSimpleSystem(format!("root {i} has non-positive length")));
        }
        for j in 0..n {
            if ip[i][j] != ip[j][i] {
                return Err(Error::InvalidSimpleSystem("inner products not symmetric".into()));
            }
            let num = 2 * ip[i][j];
            if num % ip[j][j] != 0 {
                return Err(Error::InvalidSimpleSystem(format!(
                    "Cartan integer for roots {i},{j} is not integral"
                )));
            }
            a[i][j] = num / ip[j][j];
            if i != j && a[i][j] > 0 {
                return Err(Error::InvalidSimpleSystem(format!("roots {i},{j} form an acute angle")));
            }
        }
    }
    Ok(a)
}

/// Classifies a simple system given by its (positive definite) inner product
/// matrix.
pub fn classify_inner_products(ip: &[Vec<i64>]) -> Result<RootType> {
    let n = ip.len();
    let big: Vec<Vec<BigInt>> = ip.iter().map(|r| linalg::to_big(r)).collect();
    if !linalg::is_positive_definite(&big) {
        return Err(Error::InvalidSimpleSystem(
            "inner product matrix is not positive definite".into(),
        ));
    }
    let a = cartan(ip)?;
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let sub: Vec<Vec<i64>> = comp.iter().map(|&i| comp.iter().map(|&j| a[i][j]).collect()).collect();
        let found = Component::candidates(comp.len())
            .into_iter()
            .find(|c| {
                let target = cartan(&c.catalogue_gram()).expect("catalogue is valid");
                isomorphic(&sub, &target)
            })
            .ok_or_else(|| Error::InvalidSimpleSystem("Dynkin diagram not in catalogue".into()))?;
        components.push(found);
    }
    Ok(RootType::new(components))
}

/// Is there a permutation π with `a[π(i)][π(j)] = b[i][j]`?
fn isomorphic(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    fn extend(a: &[Vec<i64>], b: &[Vec<i64>], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == b.len() {
            return true;
        }
        for cand in 0..a.len() {
            if used[cand] {
                continue;
            }
            let ok =
                (0..i).all(|j| a[cand][map[j]] == b[i][j] && a[map[j]][cand] == b[j][i]) && a[cand][cand] == b[i][i];
            if ok {
                used[cand] = true;
                map.push(cand);
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[cand] = false;
            }
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; a.len()])
}

/// Orbit sums of the simple roots under a group action, with their type.
///
/// The action must permute the simple roots and preserve their inner
/// products.
pub fn orbit_root_system(simple: &SimpleSystem, action: &GroupAction) -> Result<(SimpleSystem, RootType)> {
    let roots = simple.roots();
    let index: BTreeMap<&DivisorClass, usize> = roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut images: Vec<Vec<usize>> = Vec::new();
    for m in action.elements() {
        let img: Vec<usize> = roots
            .iter()
            .map(|r| index.get(&m.apply(r)).copied())
            .collect::<Option<_>>()
            .ok_or(Error::ActionDoesNotStabilizeSystem)?;
        for i in 0..roots.len() {
            for j in 0..roots.len() {
                if simple.ip(&roots[i], &roots[j]) != simple.ip(&roots[img[i]], &roots[img[j]]) {
                    return Err(Error::ActionDoesNotStabilizeSystem);
                }
            }
        }
        images.push(img);
    }
    let mut orbit_of = vec![usize::MAX; roots.len()];
    let mut sums = Vec::new();
    for i in 0..roots.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = sums.len();
        let mut members: Vec<usize> = images.iter().map(|img| img[i]).collect();
        members.push(i);
        members.sort_unstable();
        members.dedup();
        let mut sum = DivisorClass::new(vec![0; roots[i].len()]);
        for &k in &members {
            orbit_of[k] = id;
            sum = sum.add(&roots[k]);
        }
        sums.push(sum);
    }
    let system = SimpleSystem::with_gram(simple.gram.clone(), sums);
    let t = system.classify()?;
    Ok((system, t))
}
