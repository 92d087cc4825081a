//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use nefcone::classes::minus_n_classes;
use nefcone::cones::{dualize, dualize_on, RationalCone, Sublattice};
use nefcone::lattice::{DivisorClass, LatticeMap, PicardLattice, SurfaceKind};
use nefcone::pairs::{self, GroupAction};
use nefcone::rootsys::{orbit_root_system, SimpleSystem};
use nefcone::{corpus, linalg};
use nefcone::{ordinary_alpha, weyl_order, Rat, RootType, SurfaceSpec};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn int(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn t(s: &str) -> RootType {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn blowup(d: u8) -> PicardLattice {
    PicardLattice::of_kind(SurfaceKind::Blowup(d))
}

fn parse(lat: &PicardLattice, names: &[&str]) -> Vec<DivisorClass> {
    names.iter().map(|n| lat.parse_class(n).unwrap()).collect()
}

fn table_one() -> Check {
    let expected_alpha = [(1, 6), (1, 24), (1, 72), (1, 144), (1, 180), (1, 120), (1, 30), (1, 1)];
    let expected_n = [1, 3, 6, 10, 16, 27, 56, 240];
    let mut timings = Vec::new();
    for (i, d) in (1..=8u8).rev().enumerate() {
        let start = Instant::now();
        let (lat, alpha) = if d == 8 {
            let spec = SurfaceSpec::ordinary(SurfaceKind::OneBlowup);
            (spec.lattice().clone(), spec.alpha().map_err(err)?.alpha)
        } else {
            (blowup(d), ordinary_alpha(d).map_err(err)?)
        };
        let n = minus_n_classes(&lat, 1).len();
        let (p, q) = expected_alpha[i];
        ensure(alpha == rat(p, q), || {
            format!("alpha(X{d}) = {alpha}, expected {p}/{q}")
        })?;
        ensure(n == expected_n[i], || {
            format!("N_{d} = {n}, expected {}", expected_n[i])
        })?;
        timings.push(format!("d={d} {:.1}s", start.elapsed().as_secs_f64()));
    }
    Ok(format!(
        "alpha and N_d exact for d = 8..1; degree 1 via the face sum [{}]",
        timings.join(", ")
    ))
}

fn special_surfaces() -> Check {
    let cases = [
        (SurfaceKind::P2, rat(1, 3)),
        (SurfaceKind::OneBlowup, rat(1, 6)),
        (SurfaceKind::P1xP1, rat(1, 4)),
        (SurfaceKind::F2, rat(1, 8)),
    ];
    for (kind, want) in cases {
        let got = SurfaceSpec::ordinary(kind).alpha().map_err(err)?.alpha;
        ensure(got == want, || format!("{kind:?}: {got}, expected {want}"))?;
    }
    // The X8 example by hand: the polytope is the segment between the nef
    // rays scaled to the hyperplane; the truncated cone is a triangle.
    let spec = SurfaceSpec::ordinary(SurfaceKind::OneBlowup);
    let lat = spec.lattice();
    let cone = spec.nef_cone().map_err(err)?;
    let points: Vec<Vec<Rat>> = cone
        .rays()
        .iter()
        .map(|r| {
            let r: Vec<i64> = linalg::to_small(r).unwrap();
            let h = lat.pair(lat.anticanonical(), &DivisorClass::new(r.clone())).unwrap();
            r.iter().map(|&x| rat(x, h)).collect()
        })
        .collect();
    ensure(points.len() == 2, || format!("X8 nef cone has {} rays", points.len()))?;
    let cross = &points[0][0] * &points[1][1] - &points[0][1] * &points[1][0];
    let area = if cross < Rat::from_integer(0.into()) {
        -cross
    } else {
        cross
    } / int(2);
    ensure(area == rat(1, 12), || format!("X8 triangle area {area}"))?;
    ensure(area * int(2) == rat(1, 6), || "rho times area".into())?;
    Ok("P2 1/3, X8 1/6 (triangle area 1/12), P1xP1 1/4, F2 1/8".into())
}

fn non_split() -> Check {
    let quadric = PicardLattice::of_kind(SurfaceKind::P1xP1);
    let swap =
        GroupAction::generated_by(&quadric, vec![LatticeMap::from_rows(&[vec![0, 1], vec![1, 0]])]).map_err(err)?;
    let a = pairs::alpha_pair(&SurfaceSpec::ordinary(SurfaceKind::P1xP1), &swap)
        .map_err(err)?
        .alpha;
    ensure(a == rat(1, 2), || format!("quadric swap: {a}"))?;

    let lat = blowup(7);
    let e12 = lat.parse_class("E1-E2").unwrap();
    let conj = GroupAction::generated_by(&lat, vec![LatticeMap::reflection(&lat, &e12)]).map_err(err)?;
    let a = pairs::alpha_pair(&SurfaceSpec::ordinary(SurfaceKind::Blowup(7)), &conj)
        .map_err(err)?
        .alpha;
    ensure(a == rat(1, 6), || format!("degree 7 conjugate points: {a}"))?;
    Ok("quadric ruling swap 1/2, degree 7 conjugate-point swap 1/6".into())
}

type Row = (usize, usize, usize, Rat);

fn rows_of(d: u8) -> Result<(Vec<Row>, Vec<pairs::PairRow>), String> {
    let table = pairs::pair_table(d).map_err(err)?;
    let mut rows: Vec<Row> = table.iter().map(|r| (r.order, r.rho, r.m, r.alpha.clone())).collect();
    rows.sort();
    Ok((rows, table))
}

fn expected(rows: &[(usize, usize, usize, i64, i64)]) -> Vec<Row> {
    let mut v: Vec<Row> = rows.iter().map(|&(o, r, m, p, q)| (o, r, m, rat(p, q))).collect();
    v.sort();
    v
}

fn degree_six_pairs() -> Check {
    let start = Instant::now();
    let (rows, table) = rows_of(6)?;
    let want = expected(&[
        (12, 1, 1, 1, 1),
        (6, 1, 1, 1, 1),
        (6, 1, 1, 1, 1),
        (6, 2, 2, 1, 3),
        (3, 2, 2, 1, 3),
        (4, 2, 2, 1, 2),
        (2, 2, 2, 1, 2),
        (2, 3, 3, 1, 8),
        (2, 3, 4, 1, 12),
        (1, 4, 6, 1, 72),
    ]);
    ensure(rows == want, || format!("rows {rows:?}"))?;
    for (label, alpha) in [("<s123>", rat(1, 8)), ("<s12>", rat(1, 12)), ("<s123 s12>", rat(1, 2))] {
        let row = table
            .iter()
            .find(|r| r.label == label)
            .ok_or(format!("no class {label}"))?;
        ensure(row.alpha == alpha, || format!("{label}: {}", row.alpha))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.2}s"))?;
    Ok(format!("10 classes, (order, rho, m, alpha) as tabulated, {secs:.2}s"))
}

fn degree_five_pairs() -> Check {
    let start = Instant::now();
    let (rows, _) = rows_of(5)?;
    let want = expected(&[
        (120, 1, 1, 1, 1),
        (60, 1, 1, 1, 1),
        (20, 1, 1, 1, 1),
        (10, 1, 1, 1, 1),
        (24, 2, 2, 2, 3),
        (12, 2, 2, 2, 3),
        (12, 2, 2, 1, 2),
        (6, 2, 2, 1, 2),
        (6, 2, 2, 1, 2),
        (6, 3, 4, 5, 24),
        (3, 3, 4, 5, 24),
        (5, 1, 1, 1, 1),
        (4, 3, 4, 1, 6),
        (4, 2, 2, 2, 3),
        (8, 2, 2, 2, 3),
        (4, 2, 2, 2, 3),
        (2, 3, 4, 1, 6),
        (2, 4, 7, 1, 24),
        // The printed table has rho = 6 here; the rank of N^1 is 10 - d = 5.
        (1, 5, 10, 1, 144),
    ]);
    ensure(rows == want, || format!("rows {rows:?}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "19 classes, (order, rho, m, alpha) as tabulated with rho = 5 for the trivial group (printed 6), {secs:.2}s"
    ))
}

fn surface_corpus() -> Vec<SurfaceSpec> {
    let mut out = Vec::new();
    for d in 3..=7 {
        out.push(SurfaceSpec::ordinary(SurfaceKind::Blowup(d)));
        out.extend(corpus::random_surfaces(d, 20, 2024));
    }
    out
}

fn inductive_suite() -> Check {
    let cases = surface_corpus();
    for spec in &cases {
        let c = spec.check_inductive().map_err(err)?;
        ensure(c.equal, || {
            format!(
                "degree {} type {}: {} vs {}",
                spec.degree(),
                spec.root_type().unwrap(),
                c.lhs,
                c.rhs
            )
        })?;
    }
    let types: std::collections::BTreeSet<String> = cases.iter().map(|s| s.root_type().unwrap().to_string()).collect();
    Ok(format!(
        "{} surfaces (ordinary plus 20 random per degree 3..7), {} root types",
        cases.len(),
        types.len()
    ))
}

fn weyl_suite() -> Check {
    let mut cases = surface_corpus();
    let lat = blowup(4);
    let a2a1 = SurfaceSpec::checked(lat.clone(), parse(&lat, &["E1-E2", "E2-E3", "E4-E5"])).map_err(err)?;
    let d4 = SurfaceSpec::checked(lat.clone(), parse(&lat, &["E3-E4", "E2-E3", "E4-E5", "L-E1-E2-E3"])).map_err(err)?;
    ensure(a2a1.root_type().map_err(err)? == t("A2+A1"), || {
        "A2+A1 configuration".into()
    })?;
    ensure(d4.root_type().map_err(err)? == t("D4"), || "D4 configuration".into())?;
    ensure(weyl_order(&t("D4")) == 192, || "#W(D4)".into())?;
    ensure(d4.alpha().map_err(err)?.alpha == rat(1, 180 * 192), || {
        "D4 at degree 4".into()
    })?;
    cases.push(a2a1);
    cases.push(d4);
    let mut multi = 0;
    for spec in &cases {
        let root_type = spec.root_type().map_err(err)?;
        if root_type.components().len() > 1 {
            multi += 1;
        }
        let a = spec.alpha().map_err(err)?.alpha;
        let d = spec.degree();
        ensure(
            a * int(weyl_order(&root_type)) == ordinary_alpha(d).map_err(err)?,
            || format!("degree {d} type {root_type}"),
        )?;
    }
    Ok(format!(
        "{} surfaces ({multi} with several components), D4 in degree 4 gives 1/(180*192)",
        cases.len()
    ))
}

fn pair_suite() -> Check {
    let mut total = 0;
    let mut swapped_a1 = 0;
    for d in [6u8, 5] {
        for (spec, h) in corpus::stable_pairs(d).map_err(err)? {
            let direct = pairs::alpha_pair(&spec, &h).map_err(err)?.alpha;
            let predicted = pairs::alpha_pair_via_weyl(&spec, &h).map_err(err)?;
            ensure(direct == predicted, || {
                format!("degree {d}, |H| = {}: {direct} vs {predicted}", h.order())
            })?;
            total += 1;
            // Two orthogonal roots exchanged by H sum to a root of norm 4:
            // the orbit system is B1.
            let roots = spec.minus_two_curves();
            let lat = spec.lattice();
            if h.orbits(roots)
                .iter()
                .any(|o| o.len() == 2 && lat.pair(&o[0], &o[1]) == Ok(0))
            {
                swapped_a1 += 1;
            }
        }
    }
    ensure(total >= 10, || format!("only {total} pairs"))?;
    ensure(swapped_a1 > 0, || "no B1 orbit system in degrees 5, 6".into())?;

    // A genuine B2: the diagram flip of an A3 in degree 4.
    let lat = blowup(4);
    let a3 = parse(&lat, &["E1-E2", "E2-E3", "E3-E4"]);
    let spec = SurfaceSpec::checked(lat.clone(), a3.clone()).map_err(err)?;
    let weyl = pairs::weyl_group(&lat).map_err(err)?;
    let flip = weyl
        .setwise_stabilizer(&a3)
        .elements()
        .iter()
        .find(|m| m.apply(&a3[0]) == a3[2])
        .cloned()
        .ok_or("no A3 flip")?;
    let h = GroupAction::generated_by(&lat, vec![flip]).map_err(err)?;
    ensure(pairs::orbit_root_type(&spec, &h).map_err(err)? == t("B2"), || {
        "A3 flip orbit type".into()
    })?;
    let direct = pairs::alpha_pair(&spec, &h).map_err(err)?.alpha;
    ensure(direct == pairs::alpha_pair_via_weyl(&spec, &h).map_err(err)?, || {
        "B2 pair".into()
    })?;
    Ok(format!(
        "{total} pairs in degrees 5, 6 ({swapped_a1} with B1 = A1 from swapped roots); B2 from an A3 flip in degree 4"
    ))
}

fn inducing(weyl: &GroupAction, simple: &[DivisorClass], perm: &[usize]) -> Result<LatticeMap, String> {
    weyl.setwise_stabilizer(simple)
        .elements()
        .iter()
        .find(|m| (0..simple.len()).all(|i| m.apply(&simple[i]) == simple[perm[i]]))
        .cloned()
        .ok_or_else(|| format!("no element induces {perm:?}"))
}

fn orbit_type(lat: &PicardLattice, simple: &[DivisorClass], gens: Vec<LatticeMap>) -> Result<RootType, String> {
    let h = GroupAction::generated_by(lat, gens).map_err(err)?;
    Ok(orbit_root_system(&SimpleSystem::new(lat, simple.to_vec()), &h)
        .map_err(err)?
        .1)
}

fn orbit_systems() -> Check {
    let mut seen = Vec::new();
    let mut expect = |what: &str, got: RootType, want: &str| -> Result<(), String> {
        ensure(got == t(want), || format!("{what}: got {got}, expected {want}"))?;
        seen.push(format!("{what} -> {want}"));
        Ok(())
    };

    let lat = blowup(4);
    let weyl = pairs::weyl_group(&lat).map_err(err)?;
    let a2 = parse(&lat, &["E1-E2", "E2-E3"]);
    expect(
        "A2/Z2",
        orbit_type(&lat, &a2, vec![inducing(&weyl, &a2, &[1, 0])?])?,
        "B1",
    )?;
    let a3 = parse(&lat, &["E1-E2", "E2-E3", "E3-E4"]);
    expect(
        "A3/Z2",
        orbit_type(&lat, &a3, vec![inducing(&weyl, &a3, &[2, 1, 0])?])?,
        "B2",
    )?;

    let lat3 = blowup(3);
    let weyl3 = pairs::weyl_group(&lat3).map_err(err)?;
    let d4 = parse(&lat3, &["E3-E4", "E2-E3", "E4-E5", "L-E1-E2-E3"]);
    expect(
        "D4/Z3",
        orbit_type(&lat3, &d4, vec![inducing(&weyl3, &d4, &[0, 2, 3, 1])?])?,
        "G2",
    )?;

    // W(E6) has no D5 flip; in degree 2 the Geiser involution times w0 is one.
    let lat2 = blowup(2);
    let d5 = parse(&lat2, &["E1-E2", "E2-E3", "E3-E4", "E4-E5", "L-E1-E2-E3"]);
    let w0 = pairs::longest_element(&lat2, &d5).map_err(err)?;
    let flip = pairs::minus_one_on_roots(&lat2).map_err(err)?.compose(&w0);
    ensure(flip.apply(&d5[3]) == d5[4], || "D5 flip".into())?;
    expect("D5/Z2", orbit_type(&lat2, &d5, vec![flip])?, "C4")?;

    // 2A2 + A1 in degree 3 with the two A2 exchanged.
    let simple = SurfaceSpec::new(
        lat3.clone(),
        parse(&lat3, &["E1-E2", "E2-E3", "E4-E5", "E5-E6", "L-E1-E2-E3"]),
    );
    ensure(simple.root_type().map_err(err)? == t("2A2+A1"), || {
        "2A2+A1 configuration".into()
    })?;
    let roots = simple.minus_two_curves().to_vec();
    let system = SimpleSystem::new(&lat3, roots.clone());
    let lonely: Vec<&DivisorClass> = roots
        .iter()
        .filter(|r| roots.iter().all(|s| s == *r || system.ip(r, s) == 0))
        .collect();
    let swap = weyl3
        .setwise_stabilizer(&roots)
        .elements()
        .iter()
        .find(|m| {
            let img = m.apply(&roots[0]);
            img != roots[0] && system.ip(&img, &roots[0]) == 0 && m.apply(lonely[0]) == *lonely[0]
        })
        .cloned()
        .ok_or("no swap of the two A2")?;
    let h = GroupAction::generated_by(&lat3, vec![swap]).map_err(err)?;
    let orbit = orbit_root_system(&system, &h).map_err(err)?.1;
    expect("2A2+A1 swap", orbit.clone(), "A2+A1")?;
    ensure(
        weyl_order(&orbit) == weyl_order(&t("A2")) * weyl_order(&t("A1")),
        || "Weyl order product".into(),
    )?;
    Ok(format!("{}; Weyl order product holds", seen.join(", ")))
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn random_pointed_cone(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(2..=6);
        let count = rng.gen_range(n..=n + 4);
        let gens: Vec<Vec<i64>> = (0..count)
            .map(|_| {
                let mut g = vec![rng.gen_range(1..=3)];
                g.extend((1..n).map(|_| rng.gen_range(-3..=3)));
                g
            })
            .collect();
        if linalg::rank_i64(&gens) == n {
            return gens;
        }
    }
}

fn volume_engine() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let gens = random_pointed_cone(&mut rng);
        let n = gens[0].len();
        let q = identity(n);
        let dual: RationalCone = dualize(&gens, &q).map_err(err)?;
        let rays: Vec<Vec<i64>> = dual.rays().iter().map(|r| linalg::to_small(r).unwrap()).collect();
        let back = dualize(&rays, &q).map_err(err)?;
        let prim = |v: &[i64]| linalg::primitive(&linalg::to_big(v));
        let mut want: Vec<_> = gens
            .iter()
            .map(|g| prim(g))
            .filter(|g| back.rays().contains(g))
            .collect();
        want.sort();
        want.dedup();
        ensure(want.len() == back.rays().len(), || {
            format!("cone {case}: dual of dual differs")
        })?;
        ensure(gens.iter().all(|g| back.contains(&linalg::to_big(g))), || {
            format!("cone {case}: generator lost")
        })?;

        let sub = Sublattice::full(&q);
        let interior: Vec<i64> = (0..n).map(|j| gens.iter().map(|g| g[j]).sum()).collect();
        let l = sub.functional(&interior);
        let first = dual.leray_volume_with(&l, &sub, false).map_err(err)?;
        let last = dual.leray_volume_with(&l, &sub, true).map_err(err)?;
        ensure(first == last, || format!("cone {case}: {first} vs {last}"))?;
    }

    for d in [7u8, 6, 5, 4] {
        let spec = SurfaceSpec::ordinary(SurfaceKind::Blowup(d));
        let lat = spec.lattice();
        let gens: Vec<Vec<i64>> = spec
            .effective_generators()
            .map_err(err)?
            .into_iter()
            .map(|g| g.0)
            .collect();
        let r = lat.rank();
        let mut u = identity(r);
        for _ in 0..3 * r {
            let (i, j, k) = (rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(-2i64..=2));
            if i != j {
                for row in u.iter_mut() {
                    row[j] += k * row[i];
                }
            }
        }
        let basis: Vec<Vec<i64>> = (0..r).map(|j| u.iter().map(|row| row[j]).collect()).collect();
        let sub = Sublattice::new(basis, lat.gram());
        let cone = dualize_on(&gens, &sub).map_err(err)?;
        let got = cone
            .leray_volume(&sub.functional(lat.anticanonical().coords()), &sub)
            .map_err(err)?;
        ensure(got == ordinary_alpha(d).map_err(err)?, || {
            format!("degree {d} in a new basis: {got}")
        })?;
    }
    Ok(
        "100 random pointed cones: double dual and two pulling orders agree; degrees 7..4 invariant under basis change"
            .into(),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("ordinary surfaces, degrees 8..1", table_one),
        ("special surfaces", special_surfaces),
        ("non-split quadric and degree 7", non_split),
        ("degree 6 pair table", degree_six_pairs),
        ("degree 5 pair table", degree_five_pairs),
        ("inductive formula suite", inductive_suite),
        ("Weyl quotient suite", weyl_suite),
        ("pair Weyl quotient suite", pair_suite),
        ("orbit root systems", orbit_systems),
        ("volume engine properties", volume_engine),
    ];
    let mut failures = 0;
    // Failures are reported on the criterion line, not by the panic hook.
    panic::set_hook(Box::new(|_| {}));
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(msg.unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
