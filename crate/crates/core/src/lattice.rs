//! Picard lattices of Del Pezzo surfaces and their divisor classes.

use crate::error::{Error, Result};
use crate::linalg;

/// Which Del Pezzo surface a lattice belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceKind {
    /// P² blown up in `9 - d` points, `1 <= d <= 7`.
    Blowup(u8),
    P2,
    /// P² blown up in one point (degree 8).
    OneBlowup,
    P1xP1,
    /// The Hirzebruch surface F₂.
    F2,
}

/// Selects among the kinds that share a degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KindSelector {
    Blowup,
    P2,
    OneBlowup,
    P1xP1,
    F2,
}

impl KindSelector {
    pub fn name(self) -> &'static str {
        match self {
            KindSelector::Blowup => "blowup",
            KindSelector::P2 => "p2",
            KindSelector::OneBlowup => "one_blowup",
            KindSelector::P1xP1 => "p1xp1",
            KindSelector::F2 => "f2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "blowup" => KindSelector::Blowup,
            "p2" => KindSelector::P2,
            "one_blowup" => KindSelector::OneBlowup,
            "p1xp1" => KindSelector::P1xP1,
            "f2" => KindSelector::F2,
            _ => return None,
        })
    }
}

impl SurfaceKind {
    pub fn selector(self) -> KindSelector {
        match self {
            SurfaceKind::Blowup(_) => KindSelector::Blowup,
            SurfaceKind::P2 => KindSelector::P2,
            SurfaceKind::OneBlowup => KindSelector::OneBlowup,
            SurfaceKind::P1xP1 => KindSelector::P1xP1,
            SurfaceKind::F2 => KindSelector::F2,
        }
    }

    pub fn degree(self) -> u8 {
        match self {
            SurfaceKind::Blowup(d) => d,
            SurfaceKind::P2 => 9,
            SurfaceKind::OneBlowup | SurfaceKind::P1xP1 | SurfaceKind::F2 => 8,
        }
    }
}

/// Integer coordinates of a divisor class in a lattice basis.
///
/// For blow-ups the basis is `(L, E₁, …, E_r)`; the class `L - E₁ - E₂` in
/// degree 6 is `[1, -1, -1, 0]`. Coordinates are raw, not in the
/// `aL - Σ bᵢEᵢ` convention.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        DivisorClass(v)
    }
}

/// The Néron–Severi lattice N¹ with its intersection form and −K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardLattice {
    kind: SurfaceKind,
    gram: Vec<Vec<i64>>,
    anticanonical: DivisorClass,
}

/// Builds the lattice of the given degree. Degree 9 is always P²; degree 8
/// needs a selector among `OneBlowup`, `P1xP1` and `F2`.
pub fn standard_lattice(degree: i64, selector: KindSelector) -> Result<PicardLattice> {
    if !(1..=9).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let mismatch = || Error::KindMismatch {
        kind: selector.name().to_string(),
        degree,
    };
    let kind = match (degree, selector) {
        (9, KindSelector::P2) => SurfaceKind::P2,
        (8, KindSelector::OneBlowup) => SurfaceKind::OneBlowup,
        (8, KindSelector::P1xP1) => SurfaceKind::P1xP1,
        (8, KindSelector::F2) => SurfaceKind::F2,
        (1..=7, KindSelector::Blowup) => SurfaceKind::Blowup(degree as u8),
        _ => return Err(mismatch()),
    };
    Ok(PicardLattice::of_kind(kind))
}

impl PicardLattice {
    pub fn of_kind(kind: SurfaceKind) -> Self {
        let (gram, anticanonical) = match kind {
            SurfaceKind::P2 => (vec![vec![1]], vec![3]),
            SurfaceKind::OneBlowup => (vec![vec![1, 0], vec![0, -1]], vec![3, -1]),
            SurfaceKind::P1xP1 => (vec![vec![0, 1], vec![1, 0]], vec![2, 2]),
            SurfaceKind::F2 => (vec![vec![-2, 1], vec![1, 0]], vec![2, 4]),
            SurfaceKind::Blowup(d) => {
                assert!((1..=7).contains(&d), "blow-up degree {d} outside 1..7");
                let rho = 10 - d as usize;
                let gram = (0..rho)
                    .map(|i| {
                        (0..rho)
                            .map(|j| match (i == j, i) {
                                (false, _) => 0,
                                (true, 0) => 1,
                                (true, _) => -1,
                            })
                            .collect()
                    })
                    .collect();
                let mut k = vec![-1; rho];
                k[0] = 3;
                (gram, k)
            }
        };
        PicardLattice {
            kind,
            gram,
            anticanonical: DivisorClass(anticanonical),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn degree(&self) -> u8 {
        self.kind.degree()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// −K in basis coordinates.
    pub fn anticanonical(&self) -> &DivisorClass {
        &self.anticanonical
    }

    /// The Leray functional `v ↦ ⟨−K, v⟩` as a coefficient row.
    pub fn anticanonical_functional(&self) -> Vec<i64> {
        linalg::mat_vec(&self.gram, &self.anticanonical.0)
    }

    fn check_len(&self, c: &DivisorClass) -> Result<()> {
        if c.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: c.len(),
            });
        }
        Ok(())
    }

    /// The intersection number `uᵀ Q v`.
    pub fn pair(&self, u: &DivisorClass, v: &DivisorClass) -> Result<i64> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.dot(u, v))
    }

    /// Unchecked intersection product.
    pub(crate) fn dot(&self, u: &DivisorClass, v: &DivisorClass) -> i64 {
        linalg::dot_i64(&u.0, &linalg::mat_vec(&self.gram, &v.0))
    }

    pub fn self_intersection(&self, c: &DivisorClass) -> i64 {
        self.dot(c, c)
    }

    pub fn anticanonical_degree(&self, c: &DivisorClass) -> i64 {
        self.dot(&self.anticanonical, c)
    }

    /// Is `c` a (−n)-class: `c² = −n` and `⟨c, −K⟩ = 2 − n`?
    pub fn is_minus_n_class(&self, c: &DivisorClass, n: i64) -> bool {
        c.len() == self.rank() && self.self_intersection(c) == -n && self.anticanonical_degree(c) == 2 - n
    }

    /// Reflection in a (−2)-class: `v ↦ v + ⟨x, v⟩ x`.
    pub fn reflect(&self, root: &DivisorClass, v: &DivisorClass) -> DivisorClass {
        let k = self.dot(root, v);
        v.add(&root.scale(k))
    }

    /// Basis labels: `L, E1, …` for blow-ups, `f, g` for P¹×P¹, `s, f` for F₂.
    pub fn basis_names(&self) -> Vec<String> {
        match self.kind {
            SurfaceKind::P1xP1 => vec!["f".into(), "g".into()],
            SurfaceKind::F2 => vec!["s".into(), "f".into()],
            SurfaceKind::OneBlowup => vec!["L".into(), "E".into()],
            _ => {
                let mut names = vec!["L".to_string()];
                names.extend((1..self.rank()).map(|i| format!("E{i}")));
                names
            }
        }
    }

    /// Human-readable name such as `L-E1-E2` or `2L-E1-E2-E3-E4-E5`.
    pub fn class_name(&self, c: &DivisorClass) -> String {
        let names = self.basis_names();
        let mut out = String::new();
        for (x, name) in c.0.iter().zip(&names) {
            if *x == 0 {
                continue;
            }
            let sign = if *x < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            out.push_str(sign);
            if x.abs() != 1 {
                out.push_str(&x.abs().to_string());
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Inverse of [`PicardLattice::class_name`].
    pub fn parse_class(&self, s: &str) -> Result<DivisorClass> {
        let bad = || Error::ClassName(s.to_string());
        let names = self.basis_names();
        let mut coords = vec![0i64; self.rank()];
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" {
            return Ok(DivisorClass(coords));
        }
        let bytes = t.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef: i64 = if i == start {
                1
            } else {
                t[start..i].parse().map_err(|_| bad())?
            };
            let nstart = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let name = &t[nstart..i];
            let idx = names.iter().position(|n| n == name).ok_or_else(bad)?;
            coords[idx] += sign * coef;
        }
        Ok(DivisorClass(coords))
    }
}

/// An integer square matrix acting on lattice coordinates (column vectors).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeMap {
    dim: usize,
    entries: Vec<i64>,
}

impl LatticeMap {
    pub fn identity(dim: usize) -> Self {
        Self::from_rows(&linalg::identity(dim))
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        LatticeMap {
            dim,
            entries: rows.concat(),
        }
    }

    /// The matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[DivisorClass]) -> Self {
        let rows: Vec<Vec<i64>> = (0..columns.len())
            .map(|i| columns.iter().map(|c| c.0[i]).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// The reflection `v ↦ v + ⟨x, v⟩ x` in a (−2)-class `x`.
    pub fn reflection(lat: &PicardLattice, root: &DivisorClass) -> Self {
        let n = lat.rank();
        let cols: Vec<DivisorClass> = (0..n).map(|j| lat.reflect(root, &DivisorClass::unit(n, j))).collect();
        Self::from_columns(&cols)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(<[i64]>::to_vec).collect()
    }

    pub fn apply(&self, v: &DivisorClass) -> DivisorClass {
        DivisorClass(
            self.entries
                .chunks(self.dim)
                .map(|row| linalg::dot_i64(row, &v.0))
                .collect(),
        )
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        LatticeMap { dim: n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// `Mᵀ Q M = Q` and `M(−K) = −K`.
    pub fn is_automorphism_of(&self, lat: &PicardLattice) -> bool {
        if self.dim != lat.rank() {
            return false;
        }
        let m = self.rows();
        let mt = linalg::transpose(&m);
        let lhs = linalg::mat_mul(&mt, &linalg::mat_mul(lat.gram(), &m));
        lhs == lat.gram() && self.apply(lat.anticanonical()) == *lat.anticanonical()
    }
}
