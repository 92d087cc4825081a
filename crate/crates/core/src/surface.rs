//! Split generalized Del Pezzo surfaces: a Picard lattice plus the simple
//! system of its (−2)-curves.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::classes::{is_irreducible_minus_one, minus_n_classes};
use crate::cones::{dualize_on, RationalCone, Sublattice};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, PicardLattice, SurfaceKind};
use crate::linalg::Rat;
use crate::rootsys::{ambient_root_type, weyl_order, RootType, SimpleSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    lattice: PicardLattice,
    minus_two_curves: Vec<DivisorClass>,
}

/// Outcome of [`SurfaceSpec::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaResult {
    pub alpha: Rat,
    pub rho: usize,
    /// Minimal generators of the effective cone (the nef cone's facets).
    pub num_effective_generators: usize,
    /// `None` when α was obtained without building the nef cone.
    pub num_nef_rays: Option<usize>,
    pub root_type: RootType,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AlphaOptions {
    /// Compute degree 1 from its own nef cone instead of the face sum.
    pub degree_one_direct: bool,
}

/// Both sides of the inductive formula α(Y) = Σ_E α(Y_E) / (d(9−d)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveCheck {
    pub lhs: Rat,
    pub rhs: Rat,
    pub equal: bool,
}

/// Root types that do not occur as (−2)-curve configurations.
const NON_REALIZABLE: &[(u8, &str)] = &[(2, "7A1"), (1, "7A1"), (1, "8A1"), (1, "D4+4A1")];

impl SurfaceSpec {
    /// No validation; see [`SurfaceSpec::checked`].
    pub fn new(lattice: PicardLattice, minus_two_curves: Vec<DivisorClass>) -> Self {
        SurfaceSpec {
            lattice,
            minus_two_curves,
        }
    }

    /// Builds and validates, returning every violation on failure.
    pub fn checked(lattice: PicardLattice, minus_two_curves: Vec<DivisorClass>) -> Result<Self> {
        let spec = SurfaceSpec::new(lattice, minus_two_curves);
        let v = spec.validate();
        if v.is_ok() {
            Ok(spec)
        } else {
            Err(Error::InvalidSurface(v.violations))
        }
    }

    /// The ordinary surface (no (−2)-curves) of a kind; F₂ gets its σ.
    pub fn ordinary(kind: SurfaceKind) -> Self {
        let lattice = PicardLattice::of_kind(kind);
        let curves = if kind == SurfaceKind::F2 {
            vec![DivisorClass::new(vec![1, 0])]
        } else {
            vec![]
        };
        SurfaceSpec::new(lattice, curves)
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn minus_two_curves(&self) -> &[DivisorClass] {
        &self.minus_two_curves
    }

    pub fn degree(&self) -> u8 {
        self.lattice.degree()
    }

    pub fn simple_system(&self) -> SimpleSystem {
        SimpleSystem::new(&self.lattice, self.minus_two_curves.clone())
    }

    pub fn root_type(&self) -> Result<RootType> {
        self.simple_system().classify()
    }

    pub fn validate(&self) -> Validation {
        let mut out = Validation::default();
        let lat = &self.lattice;
        let curves = &self.minus_two_curves;
        let name = |c: &DivisorClass| {
            if c.len() == lat.rank() {
                lat.class_name(c)
            } else {
                format!("{:?}", c.coords())
            }
        };
        let mut shapes_ok = true;
        for c in curves {
            if c.len() != lat.rank() {
                out.violations.push(format!(
                    "{} has {} coordinates, lattice rank is {}",
                    name(c),
                    c.len(),
                    lat.rank()
                ));
                shapes_ok = false;
                continue;
            }
            if lat.self_intersection(c) != -2 {
                out.violations.push(format!(
                    "{} has self-intersection {}, not -2",
                    name(c),
                    lat.self_intersection(c)
                ));
            }
            if lat.anticanonical_degree(c) != 0 {
                out.violations.push(format!(
                    "{} has anticanonical degree {}, not 0",
                    name(c),
                    lat.anticanonical_degree(c)
                ));
            }
        }
        match lat.kind() {
            SurfaceKind::F2 => {
                if curves.as_slice() != [DivisorClass::new(vec![1, 0])] {
                    out.violations.push("F2 has exactly one (-2)-curve, s".into());
                }
                return out;
            }
            SurfaceKind::Blowup(_) => {}
            _ => {
                if !curves.is_empty() {
                    out.violations.push(format!("{:?} has no (-2)-curves", lat.kind()));
                }
                return out;
            }
        }
        if !shapes_ok {
            return out;
        }
        for (i, a) in curves.iter().enumerate() {
            for b in &curves[i + 1..] {
                let p = lat.dot(a, b);
                if !(0..=1).contains(&p) {
                    out.violations
                        .push(format!("<{}, {}> = {} is outside {{0, 1}}", name(a), name(b), p));
                }
            }
        }
        if !out.violations.is_empty() {
            return out;
        }
        match self.root_type() {
            Err(e) => out.violations.push(e.to_string()),
            Ok(t) => {
                let d = self.degree();
                let ambient = ambient_root_type(d);
                if t.rank() > ambient.rank() {
                    out.violations.push(format!("root type {t} does not fit in {ambient}"));
                }
                let s = t.to_string();
                if NON_REALIZABLE.iter().any(|&(deg, name)| deg == d && name == s) {
                    out.warnings.push(format!(
                        "no generalized Del Pezzo surface of degree {d} has (-2)-curves of type {s}"
                    ));
                }
            }
        }
        out
    }

    fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidSurface(v.violations))
        }
    }

    fn blowup_degree(&self) -> Result<u8> {
        match self.lattice.kind() {
            SurfaceKind::Blowup(d) => Ok(d),
            _ => Err(Error::NeedsBlowup),
        }
    }

    /// The irreducible (−1)-curves, in canonical order.
    pub fn minus_one_curves(&self) -> Vec<DivisorClass> {
        match self.lattice.kind() {
            SurfaceKind::Blowup(_) | SurfaceKind::OneBlowup => minus_n_classes(&self.lattice, 1)
                .into_iter()
                .filter(|e| is_irreducible_minus_one(&self.lattice, e, &self.minus_two_curves).unwrap_or(false))
                .collect(),
            _ => vec![],
        }
    }

    /// Generators of the effective cone: irreducible (−1)-curves followed by
    /// the (−2)-curves; hard-coded for the degree 8 and 9 kinds.
    pub fn effective_generators(&self) -> Result<Vec<DivisorClass>> {
        self.require_valid()?;
        let c = |v: &[i64]| DivisorClass::new(v.to_vec());
        Ok(match self.lattice.kind() {
            SurfaceKind::P2 => vec![c(&[1])],
            SurfaceKind::OneBlowup => vec![c(&[0, 1]), c(&[1, -1])],
            SurfaceKind::P1xP1 => vec![c(&[1, 0]), c(&[0, 1])],
            SurfaceKind::F2 => vec![c(&[1, 0]), c(&[0, 1])],
            SurfaceKind::Blowup(_) => {
                let mut gens = self.minus_one_curves();
                gens.extend(self.minus_two_curves.iter().cloned());
                gens
            }
        })
    }

    /// The nef cone in lattice coordinates.
    pub fn nef_cone(&self) -> Result<RationalCone> {
        let gens: Vec<Vec<i64>> = self.effective_generators()?.into_iter().map(|g| g.0).collect();
        dualize_on(&gens, &Sublattice::full(self.lattice.gram()))
    }

    fn direct_alpha(&self) -> Result<AlphaResult> {
        let cone = self.nef_cone()?;
        let sub = Sublattice::full(self.lattice.gram());
        let l = sub.functional(self.lattice.anticanonical().coords());
        let alpha = cone.leray_volume(&l, &sub)?;
        Ok(AlphaResult {
            alpha,
            rho: self.lattice.rank(),
            num_effective_generators: cone.facet_normals().len(),
            num_nef_rays: Some(cone.rays().len()),
            root_type: self.root_type()?,
        })
    }

    pub fn alpha(&self) -> Result<AlphaResult> {
        self.alpha_with(AlphaOptions::default())
    }

    /// α(Y). Degree 1 goes through the face sum unless
    /// `degree_one_direct` is set.
    pub fn alpha_with(&self, opts: AlphaOptions) -> Result<AlphaResult> {
        self.require_valid()?;
        if self.lattice.kind() == SurfaceKind::Blowup(1) && !opts.degree_one_direct {
            let rhs = self.face_sum()?;
            return Ok(AlphaResult {
                alpha: rhs,
                rho: self.lattice.rank(),
                num_effective_generators: self.effective_generators()?.len(),
                num_nef_rays: None,
                root_type: self.root_type()?,
            });
        }
        self.direct_alpha()
    }

    /// Leray volume of `Nef(Y) ∩ E⊥` in a basis of the sublattice `E⊥`,
    /// which is α of the surface obtained by contracting `E`.
    pub fn face_alpha(&self, e: &DivisorClass) -> Result<Rat> {
        self.require_valid()?;
        if !self.lattice.is_minus_n_class(e, 1) || !is_irreducible_minus_one(&self.lattice, e, &self.minus_two_curves)?
        {
            return Err(Error::NotMinusOneCurve(self.lattice.class_name(e)));
        }
        self.face_volume(e)
    }

    fn face_volume(&self, e: &DivisorClass) -> Result<Rat> {
        let gram = self.lattice.gram();
        let sub = Sublattice::orthogonal_to(e.coords(), gram);
        let mut gens: Vec<Vec<i64>> = self.effective_generators()?.into_iter().map(|g| g.0).collect();
        // Generators disjoint from E cut out the face; inserting them first
        // keeps the intermediate cones small.
        gens.sort_by_key(|g| self.lattice.dot(&DivisorClass::new(g.clone()), e).abs());
        let cone = dualize_on(&gens, &sub)?;
        cone.leray_volume(&sub.functional(self.lattice.anticanonical().coords()), &sub)
    }

    fn face_sum(&self) -> Result<Rat> {
        let d = i64::from(self.blowup_degree()?);
        let curves = self.minus_one_curves();
        let faces: Vec<Rat> = curves.par_iter().map(|e| self.face_volume(e)).collect::<Result<_>>()?;
        let total: Rat = faces.into_iter().fold(Rat::zero(), |a, b| a + b);
        Ok(total / Rat::from_integer(BigInt::from(d * (9 - d))))
    }

    /// Compares α(Y), computed from its own nef cone, with the sum of the
    /// face volumes over the irreducible (−1)-curves.
    pub fn check_inductive(&self) -> Result<InductiveCheck> {
        self.blowup_degree()?;
        self.require_valid()?;
        let lhs = self.direct_alpha()?.alpha;
        let rhs = self.face_sum()?;
        let equal = lhs == rhs;
        Ok(InductiveCheck { lhs, rhs, equal })
    }

    /// α of the ordinary surface of the same degree divided by `#W(R_Y)`.
    pub fn alpha_via_weyl(&self) -> Result<Rat> {
        let d = self.blowup_degree()?;
        self.require_valid()?;
        let order = weyl_order(&self.root_type()?);
        Ok(ordinary_alpha(d)? / Rat::from_integer(BigInt::from(order)))
    }

    /// Reflects `e` in (−2)-curves it meets negatively until it meets all of
    /// them non-negatively.
    pub fn dominant_representative(&self, e: &DivisorClass) -> DivisorClass {
        let mut cur = e.clone();
        loop {
            let Some(c) = self.minus_two_curves.iter().find(|c| self.lattice.dot(&cur, c) < 0) else {
                return cur;
            };
            cur = self.lattice.reflect(c, &cur);
        }
    }
}

/// α of the split ordinary surface of degree `d` (1..7), memoized.
pub fn ordinary_alpha(d: u8) -> Result<Rat> {
    static CACHE: OnceLock<Mutex<HashMap<u8, Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().expect("cache lock").get(&d) {
        return Ok(a.clone());
    }
    let a = SurfaceSpec::ordinary(SurfaceKind::Blowup(d)).alpha()?.alpha;
    cache.lock().expect("cache lock").insert(d, a.clone());
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> DivisorClass {
        DivisorClass::new(v.to_vec())
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn blowup(d: u8, curves: &[&[i64]]) -> SurfaceSpec {
        SurfaceSpec::new(
            PicardLattice::of_kind(SurfaceKind::Blowup(d)),
            curves.iter().map(|c| cls(c)).collect(),
        )
    }

    #[test]
    fn validation() {
        assert!(blowup(6, &[&[0, 1, -1, 0]]).validate().is_ok());
        let v = blowup(6, &[&[0, 1, -1, 0], &[0, -1, 1, 0]]).validate();
        assert!(!v.is_ok());
        assert!(!blowup(6, &[&[0, 1, 0, 0]]).validate().is_ok());
        assert!(!blowup(6, &[&[0, 1, -1]]).validate().is_ok());
        // Three roots closing a cycle are dependent: affine A₂.
        assert!(!blowup(5, &[&[0, 1, -1, 0, 0], &[0, 0, 1, -1, 0], &[0, -1, 0, 1, 0]])
            .validate()
            .is_ok());
        let p2 = SurfaceSpec::new(PicardLattice::of_kind(SurfaceKind::P2), vec![cls(&[1])]);
        assert!(!p2.validate().is_ok());
        assert!(SurfaceSpec::ordinary(SurfaceKind::F2).validate().is_ok());
    }

    #[test]
    fn seven_a1_in_degree_two_warns() {
        // L − E_a − E_b − E_c over the lines of the Fano plane: any two
        // triples share one point, so the roots are mutually orthogonal.
        let curves: Vec<&[i64]> = vec![
            &[1, -1, -1, -1, 0, 0, 0, 0],
            &[1, -1, 0, 0, -1, -1, 0, 0],
            &[1, -1, 0, 0, 0, 0, -1, -1],
            &[1, 0, -1, 0, -1, 0, -1, 0],
            &[1, 0, -1, 0, 0, -1, 0, -1],
            &[1, 0, 0, -1, -1, 0, 0, -1],
            &[1, 0, 0, -1, 0, -1, -1, 0],
        ];
        let spec = blowup(2, &curves);
        let v = spec.validate();
        assert!(v.is_ok(), "{:?}", v.violations);
        assert_eq!(spec.root_type().unwrap().to_string(), "7A1");
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn effective_generators_filter_reducible_lines() {
        let ordinary = blowup(6, &[]);
        assert_eq!(ordinary.effective_generators().unwrap().len(), 6);
        let spec = blowup(6, &[&[0, 1, -1, 0]]);
        let gens = spec.effective_generators().unwrap();
        // E₁ and L − E₂ − E₃ split off the root.
        assert_eq!(gens.len(), 5);
        assert!(!gens.contains(&cls(&[0, 1, 0, 0])));
        assert!(!gens.contains(&cls(&[1, 0, -1, -1])));
        assert!(gens.contains(&cls(&[0, 0, 1, 0])));
        assert_eq!(gens.last(), Some(&cls(&[0, 1, -1, 0])));
        let f2 = SurfaceSpec::ordinary(SurfaceKind::F2);
        assert_eq!(f2.effective_generators().unwrap(), vec![cls(&[1, 0]), cls(&[0, 1])]);
    }

    #[test]
    fn alpha_small_cases() {
        assert_eq!(blowup(5, &[]).alpha().unwrap().alpha, rat(1, 144));
        assert_eq!(blowup(6, &[&[0, 1, -1, 0]]).alpha().unwrap().alpha, rat(1, 144));
        let q = SurfaceSpec::ordinary(SurfaceKind::P1xP1);
        assert_eq!(q.alpha().unwrap().alpha, rat(1, 4));
        assert_eq!(SurfaceSpec::ordinary(SurfaceKind::P2).alpha().unwrap().alpha, rat(1, 3));
        assert_eq!(
            SurfaceSpec::ordinary(SurfaceKind::OneBlowup).alpha().unwrap().alpha,
            rat(1, 6)
        );
        assert_eq!(SurfaceSpec::ordinary(SurfaceKind::F2).alpha().unwrap().alpha, rat(1, 8));
    }

    #[test]
    fn face_alphas() {
        let x7 = blowup(7, &[]);
        assert_eq!(x7.face_alpha(&cls(&[0, 1, 0])).unwrap(), rat(1, 6));
        assert_eq!(x7.face_alpha(&cls(&[1, -1, -1])).unwrap(), rat(1, 4));
        let x5 = blowup(5, &[]);
        for e in x5.minus_one_curves() {
            assert_eq!(x5.face_alpha(&e).unwrap(), rat(1, 72));
        }
        let spec = blowup(6, &[&[0, 1, -1, 0]]);
        assert!(matches!(
            spec.face_alpha(&cls(&[0, 1, 0, 0])),
            Err(Error::NotMinusOneCurve(_))
        ));
    }

    #[test]
    fn inductive_formula() {
        let c = blowup(7, &[]).check_inductive().unwrap();
        assert_eq!((c.lhs.clone(), c.equal), (rat(1, 24), true));
        let c = blowup(4, &[]).check_inductive().unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(1, 180), rat(1, 180)));
        assert!(blowup(6, &[&[0, 1, -1, 0]]).check_inductive().unwrap().equal);
    }

    #[test]
    fn weyl_quotient() {
        assert_eq!(blowup(6, &[&[0, 1, -1, 0]]).alpha_via_weyl().unwrap(), rat(1, 144));
        assert_eq!(blowup(6, &[]).alpha_via_weyl().unwrap(), rat(1, 72));
        // D₄: centre E₃−E₄ with arms E₂−E₃, E₄−E₅, L−E₁−E₂−E₃.
        let d4 = blowup(
            4,
            &[
                &[0, 0, 0, 1, -1, 0],
                &[0, 0, 1, -1, 0, 0],
                &[0, 0, 0, 0, 1, -1],
                &[1, -1, -1, -1, 0, 0],
            ],
        );
        assert_eq!(d4.root_type().unwrap().to_string(), "D4");
        assert_eq!(d4.alpha_via_weyl().unwrap(), rat(1, 180 * 192));
        assert_eq!(d4.alpha().unwrap().alpha, rat(1, 180 * 192));
    }

    #[test]
    fn dominant_representatives() {
        let spec = blowup(6, &[&[0, 1, -1, 0]]);
        assert_eq!(spec.dominant_representative(&cls(&[0, 1, 0, 0])), cls(&[0, 0, 1, 0]));
        assert_eq!(spec.dominant_representative(&cls(&[0, 0, 1, 0])), cls(&[0, 0, 1, 0]));
        let ordinary = blowup(6, &[]);
        assert_eq!(
            ordinary.dominant_representative(&cls(&[0, 0, 1, 0])),
            cls(&[0, 0, 1, 0])
        );
    }
}
