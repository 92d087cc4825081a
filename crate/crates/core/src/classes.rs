//! Enumeration of (−1)- and (−2)-classes.

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, PicardLattice, SurfaceKind};

/// All classes `D` with `D² = −n` and `⟨D, −K⟩ = 2 − n`, sorted
/// lexicographically by coordinates.
///
/// # Panics
/// If `n` is not 1 or 2.
pub fn minus_n_classes(lat: &PicardLattice, n: i64) -> Vec<DivisorClass> {
    assert!(n == 1 || n == 2, "only (-1)- and (-2)-classes are enumerated");
    let r = lat.rank() - 1;
    match lat.kind() {
        SurfaceKind::P2 | SurfaceKind::P1xP1 => return vec![],
        SurfaceKind::OneBlowup => {
            return if n == 1 {
                vec![DivisorClass::new(vec![0, 1])]
            } else {
                vec![]
            };
        }
        SurfaceKind::F2 => {
            return if n == 2 {
                vec![DivisorClass::new(vec![1, 0])]
            } else {
                vec![]
            };
        }
        SurfaceKind::Blowup(_) => {}
    }

    // Write D = (a, −b₁, …, −b_r). Then Σbᵢ = 3a − (2 − n) and Σbᵢ² = a² + n,
    // and Cauchy–Schwarz gives (3a − (2 − n))² ≤ r(a² + n). For r ≤ 8 this
    // quadratic in a has its solution interval inside [−4, 7].
    let c = 2 - n;
    let feasible = |a: i64| (3 * a - c).pow(2) <= r as i64 * (a * a + n);
    debug_assert!(!feasible(-8) && !feasible(8));
    let mut out = Vec::new();
    let mut b = Vec::with_capacity(r);
    for a in (-8..=8).filter(|&a| feasible(a)) {
        let sum = 3 * a - c;
        let sq = a * a + n;
        fill(r, sum, sq, &mut b, &mut |bs| {
            let mut coords = Vec::with_capacity(r + 1);
            coords.push(a);
            coords.extend(bs.iter().map(|x| -x));
            out.push(DivisorClass::new(coords));
        });
    }
    out.sort();
    debug_assert!(out.iter().all(|d| lat.is_minus_n_class(d, n)));
    out
}

/// Visits every integer vector of length `k` (appended to `prefix`) with the
/// given entry sum and sum of squares.
fn fill(k: usize, sum: i64, sq: i64, prefix: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    if k == 0 {
        if sum == 0 && sq == 0 {
            visit(prefix);
        }
        return;
    }
    if sq < 0 || sum * sum > k as i64 * sq {
        return;
    }
    let bound = isqrt(sq);
    for x in -bound..=bound {
        prefix.push(x);
        fill(k - 1, sum - x, sq - x * x, prefix, visit);
        prefix.pop();
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// A (−1)-class is an irreducible curve iff it meets every (−2)-curve
/// non-negatively.
pub fn is_irreducible_minus_one(
    lat: &PicardLattice,
    e: &DivisorClass,
    minus_two_curves: &[DivisorClass],
) -> Result<bool> {
    if !lat.is_minus_n_class(e, 1) {
        return Err(Error::NotMinusOneClass(format!("{:?}", e.coords())));
    }
    for c in minus_two_curves {
        if lat.pair(e, c)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeMap;

    fn blowup(d: u8) -> PicardLattice {
        PicardLattice::of_kind(SurfaceKind::Blowup(d))
    }

    #[test]
    fn degree_six_lines() {
        let got = minus_n_classes(&blowup(6), 1);
        let want: Vec<DivisorClass> = [
            [0, 0, 0, 1],
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [1, -1, -1, 0],
            [1, -1, 0, -1],
            [1, 0, -1, -1],
        ]
        .iter()
        .map(|c| DivisorClass::new(c.to_vec()))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn counts_match_line_and_root_counts() {
        let lines = [
            (8u8, 1usize),
            (7, 3),
            (6, 6),
            (5, 10),
            (4, 16),
            (3, 27),
            (2, 56),
            (1, 240),
        ];
        for (d, n) in lines {
            let lat = if d == 8 {
                PicardLattice::of_kind(SurfaceKind::OneBlowup)
            } else {
                blowup(d)
            };
            assert_eq!(minus_n_classes(&lat, 1).len(), n, "degree {d}");
        }
        // Root counts of A1, A1+A2, A4, D5, E6, E7, E8.
        let roots = [(7u8, 2usize), (6, 8), (5, 20), (4, 40), (3, 72), (2, 126), (1, 240)];
        for (d, n) in roots {
            assert_eq!(minus_n_classes(&blowup(d), 2).len(), n, "degree {d}");
        }
    }

    #[test]
    fn special_kinds() {
        let p2 = PicardLattice::of_kind(SurfaceKind::P2);
        assert!(minus_n_classes(&p2, 1).is_empty() && minus_n_classes(&p2, 2).is_empty());
        let q = PicardLattice::of_kind(SurfaceKind::P1xP1);
        assert!(minus_n_classes(&q, 1).is_empty() && minus_n_classes(&q, 2).is_empty());
        let f2 = PicardLattice::of_kind(SurfaceKind::F2);
        assert_eq!(minus_n_classes(&f2, 2), vec![DivisorClass::new(vec![1, 0])]);
        assert!(minus_n_classes(&f2, 1).is_empty());
        let x8 = PicardLattice::of_kind(SurfaceKind::OneBlowup);
        assert!(minus_n_classes(&x8, 2).is_empty());
    }

    #[test]
    fn degree_one_lines_sum_to_multiple_of_anticanonical() {
        let lat = blowup(1);
        let lines = minus_n_classes(&lat, 1);
        let mut total = vec![0i64; 9];
        for e in &lines {
            for (t, x) in total.iter_mut().zip(e.coords()) {
                *t += x;
            }
        }
        let expected: Vec<i64> = lat.anticanonical().coords().iter().map(|x| 240 * x).collect();
        assert_eq!(total, expected);
    }

    #[test]
    fn enumeration_is_weyl_invariant() {
        for d in [3u8, 5, 6] {
            let lat = blowup(d);
            let roots = minus_n_classes(&lat, 2);
            for n in [1, 2] {
                let set = minus_n_classes(&lat, n);
                for x in &roots {
                    let s = LatticeMap::reflection(&lat, x);
                    let mut image: Vec<DivisorClass> = set.iter().map(|e| s.apply(e)).collect();
                    image.sort();
                    assert_eq!(image, set);
                }
            }
        }
    }

    #[test]
    fn irreducibility_test() {
        let lat = blowup(6);
        let root = DivisorClass::new(vec![0, 1, -1, 0]);
        let e1 = DivisorClass::new(vec![0, 1, 0, 0]);
        let e2 = DivisorClass::new(vec![0, 0, 1, 0]);
        // E₁ = E₂ + (E₁ − E₂) splits.
        assert_eq!(
            is_irreducible_minus_one(&lat, &e1, std::slice::from_ref(&root)),
            Ok(false)
        );
        assert_eq!(
            is_irreducible_minus_one(&lat, &e2, std::slice::from_ref(&root)),
            Ok(true)
        );
        assert_eq!(is_irreducible_minus_one(&lat, &e2, &[]), Ok(true));
        assert!(matches!(
            is_irreducible_minus_one(&lat, &root, &[]),
            Err(Error::NotMinusOneClass(_))
        ));
    }
}
