//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Tolerances and runtime budgets are pinned here.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistor::harmonic::{invert_from_point, monodromy_of_weights, track_chambers, HarmonicDatum};
use twistor::lattice::{
    b_rank, builtin, descriptor_to_sequences, grw2, ns_u_tors, smith_normal_form, IntMat,
};
use twistor::moduli::HodPoint;
use twistor::sphere::{MoebiusMap, SpherePoint};
use twistor::tate::{expansion_factor, nu, InvariantSection, TwistorSection};

fn report(n: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n} ({name}): {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rc(rng: &mut impl Rng, r: f64) -> Complex64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_hod(rng: &mut impl Rng) -> HodPoint {
    let mut lambda = rc(rng, 2.0);
    while lambda.norm() < 0.1 {
        lambda = rc(rng, 2.0);
    }
    let alpha = rc(rng, 2.0);
    if rng.gen_bool(0.5) {
        HodPoint::standard(lambda, alpha)
    } else {
        HodPoint::conjugate_chart(lambda, alpha)
    }
}

fn random_sphere(rng: &mut impl Rng) -> SpherePoint {
    let coord = rc(rng, 1.0);
    if rng.gen_bool(0.5) {
        SpherePoint::from_standard(coord)
    } else {
        SpherePoint::from_infinity(coord)
    }
}

fn hod_defect(a: &HodPoint, b: &HodPoint) -> f64 {
    let b = if b.chart == a.chart {
        *b
    } else {
        match b.deligne_glue() {
            Ok(p) => p,
            Err(_) => return f64::INFINITY,
        }
    };
    (a.lambda - b.lambda).norm().max((a.alpha - b.alpha).norm())
}

#[test]
fn criterion_01_involution_algebra() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let p = random_hod(&mut rng);
        let cc = |q: &HodPoint| q.involution_c();
        let d = |q: &HodPoint| q.involution_d();
        let n = |q: &HodPoint| q.involution_n();
        worst = worst.max(hod_defect(&cc(&cc(&p)), &p));
        worst = worst.max(hod_defect(&d(&d(&p)), &p));
        worst = worst.max(hod_defect(&n(&n(&p)), &p));
        worst = worst.max(hod_defect(&cc(&d(&p)), &d(&cc(&p))));
        worst = worst.max(hod_defect(&cc(&n(&p)), &n(&cc(&p))));
        worst = worst.max(hod_defect(&d(&n(&p)), &n(&d(&p))));
        let sigma = p.involution_sigma();
        worst = worst.max(hod_defect(&cc(&d(&n(&p))), &sigma));
        worst = worst.max(hod_defect(&sigma.involution_sigma(), &p));
        // sigma covers the antipode on the base.
        worst = worst.max(sigma.base_point().dist(&p.base_point().antipode()));
    }
    let dt = start.elapsed();
    report(
        1,
        "involution algebra",
        worst < 1e-10 && dt.as_secs_f64() < 1.0,
        &format!("max defect {worst:.3e} over 1e4 points in {dt:.2?} (limits 1e-10, 1 s)"),
    );
}

#[test]
fn criterion_02_gluing() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let p = random_hod(&mut rng);
        let q = p.deligne_glue().unwrap().deligne_glue().unwrap();
        worst = worst.max((q.lambda - p.lambda).norm().max((q.alpha - p.alpha).norm()));
        let k = rng.gen_range(-5..=5i64);
        let lhs = p.gauge(k).deligne_glue().unwrap();
        let rhs = p.deligne_glue().unwrap().gauge(-k);
        worst = worst.max(hod_defect(&lhs, &rhs));
    }
    report(
        2,
        "deligne gluing",
        worst < 1e-10,
        &format!("round-trip and gauge-conjugation defect {worst:.3e} over 1e4 samples (limit 1e-10)"),
    );
}

#[test]
fn criterion_03_sigma_section_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);

    // Symbolic: Gaussian-integer coefficients, defect exactly zero.
    let mut exact = true;
    for _ in 0..1_000 {
        let s = TwistorSection::new(
            c(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64),
            c(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64),
            c(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64),
        );
        let t = s.sigma();
        exact &= t == TwistorSection::new(-s.a2.conj(), s.a1.conj(), -s.a0.conj());
        exact &= t.sigma() == s;
        let a = rng.gen_range(-9..9) as f64;
        let alpha = c(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64);
        let psi = InvariantSection::new(a, alpha).embed();
        exact &= psi == TwistorSection::new(alpha, c(-a, 0.0), -alpha.conj());
        exact &= psi.sigma() == psi;
    }

    // Numeric: involution and fixed locus on 1e4 float samples.
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let s = TwistorSection::new(rc(&mut rng, 2.0), rc(&mut rng, 2.0), rc(&mut rng, 2.0));
        worst = worst.max(s.sigma().sigma().dist(&s));
        // The fixed part of s is fixed; its parameters come back unchanged.
        let fixed = InvariantSection::new(-s.a1.re, 0.5 * (s.a0 - s.a2.conj())).embed();
        worst = worst.max(fixed.sigma().dist(&fixed));
        // A fixed section has real a1 and a2 = -conj(a0).
        let t = fixed;
        worst = worst.max(t.a1.im.abs().max((t.a2 + t.a0.conj()).norm()));
    }
    report(
        3,
        "section involution",
        exact && worst < 1e-12,
        &format!("integer samples exact: {exact}; numeric defect {worst:.3e} (limit 1e-12)"),
    );
}

#[test]
fn criterion_04_closed_form_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst_gen = 0.0f64;
    let generator = InvariantSection::gauge_generator();
    for _ in 0..100 {
        let p = rc(&mut rng, 2.0);
        let (w, r) = generator.coords_at(p);
        worst_gen = worst_gen.max((w - 1.0).abs().max((r + p).norm()));
    }

    let nu_zero = nu(&SpherePoint::zero());
    let nu_zero_ok = nu_zero == InvariantSection::new(1.0, c(0.0, 0.0));

    let mut worst_eta = 0.0f64;
    let mut worst_unit = 0.0f64;
    for _ in 0..1_000 {
        let z = rc(&mut rng, 1.4);
        let s = InvariantSection::new(1.0 - z.norm_sqr(), z);
        let eta = expansion_factor(&s.embed(), &SpherePoint::from_standard(z)).unwrap();
        worst_eta = worst_eta.max((eta + c(1.0 + z.norm_sqr(), 0.0)).norm());
        let n = nu(&random_sphere(&mut rng));
        worst_unit = worst_unit.max(
            (n.higgs_weight * n.higgs_weight + 4.0 * n.higgs_residue.norm_sqr() - 1.0).abs(),
        );
    }

    let mut worst_table = 0.0f64;
    for _ in 0..1_000 {
        let s = InvariantSection::new(rng.gen_range(-2.0..2.0), rc(&mut rng, 2.0));
        let (w, r) = s.coords_at(c(1.0, 0.0));
        let expect_w = s.higgs_weight + s.higgs_residue.re + s.higgs_residue.conj().re;
        let expect_r = s.higgs_residue - s.higgs_residue.conj() - c(s.higgs_weight, 0.0);
        worst_table = worst_table.max((w - expect_w).abs().max((r - expect_r).norm()));
    }

    let pass = worst_gen < 1e-12
        && nu_zero_ok
        && worst_eta < 1e-10
        && worst_unit < 1e-12
        && worst_table < 1e-12;
    report(
        4,
        "pinned closed forms",
        pass,
        &format!(
            "generator image {worst_gen:.3e}, nu(0)=(1,0): {nu_zero_ok}, expansion {worst_eta:.3e} (limit 1e-10), unit sphere {worst_unit:.3e}, de Rham table {worst_table:.3e}"
        ),
    );
}

#[test]
fn criterion_05_exact_sequence_at_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst_kernel = 0.0f64;
    let mut worst_round = 0.0f64;
    for _ in 0..100 {
        let p = rc(&mut rng, 1.5);
        // Everything with res_p = 0 is a real multiple of nu(p).
        for _ in 0..20 {
            let w = rng.gen_range(-3.0..3.0);
            let s = InvariantSection::from_coords(w, c(0.0, 0.0), p);
            let t = nu(&SpherePoint::from_standard(p)).scale(s.weight_at(p));
            worst_kernel = worst_kernel.max(s.dist(&t));
        }
        // Closed-form inverse round trip.
        for _ in 0..20 {
            let s = InvariantSection::new(rng.gen_range(-3.0..3.0), rc(&mut rng, 3.0));
            let (w, r) = s.coords_at(p);
            worst_round = worst_round.max(InvariantSection::from_coords(w, r, p).dist(&s));
        }
    }
    report(
        5,
        "kernel line and coordinate inverse",
        worst_kernel < 1e-9 && worst_round < 1e-12,
        &format!("kernel defect {worst_kernel:.3e} (limit 1e-9), round trip {worst_round:.3e} (limit 1e-12)"),
    );
}

#[test]
fn criterion_06_so3_action() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let f = MoebiusMap::random(&mut rng);
        let g = MoebiusMap::random(&mut rng);
        let p = random_sphere(&mut rng);
        worst = worst.max(nu(&p).embed().pushforward(&f).dist(&nu(&f.apply(&p)).embed()));
        let a = InvariantSection::new(rng.gen_range(-2.0..2.0), rc(&mut rng, 2.0));
        let b = InvariantSection::new(rng.gen_range(-2.0..2.0), rc(&mut rng, 2.0));
        let fa = InvariantSection::extract(&a.embed().pushforward(&f)).unwrap();
        let fb = InvariantSection::extract(&b.embed().pushforward(&f)).unwrap();
        worst = worst.max((fa.inner(&fb) - a.inner(&b)).abs());
        let s = TwistorSection::new(rc(&mut rng, 2.0), rc(&mut rng, 2.0), rc(&mut rng, 2.0));
        worst = worst.max(s.pushforward(&g).pushforward(&f).dist(&s.pushforward(&f.compose(&g))));
    }
    let dt = start.elapsed();
    report(
        6,
        "rotation action",
        worst < 1e-9 && dt.as_secs_f64() < 2.0,
        &format!("max defect {worst:.3e} over 1e3 pairs in {dt:.2?} (limits 1e-9, 2 s)"),
    );
}

#[test]
fn criterion_07_lattice_engine() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut ok = true;

    for _ in 0..1_000 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let m = IntMat::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9..=9i64)));
        let snf = smith_normal_form(&m);
        ok &= snf.left.mul(&m).mul(&snf.right) == snf.d;
        ok &= snf.left.determinant().abs() == BigInt::from(1);
        ok &= snf.right.determinant().abs() == BigInt::from(1);
        let f = snf.invariant_factors();
        ok &= f.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0));
        if rows == cols {
            let det = m.determinant().abs();
            if !det.is_zero() {
                let product: BigInt = f.iter().product();
                ok &= det == product;
            }
            let mut gcd = BigInt::from(0);
            for i in 0..rows {
                for j in 0..cols {
                    gcd = num_integer::gcd(gcd.clone(), m[(i, j)].abs());
                }
            }
            if snf.rank > 0 {
                ok &= snf.d[(0, 0)] == gcd;
            }
        }
    }

    // Punctured curves of any genus: b = k - 1 and the rank bookkeeping.
    for (g, k) in [(0usize, 2usize), (1, 1), (2, 3), (3, 4), (7, 5)] {
        let d = builtin::curve(g, k);
        ok &= b_rank(&d) == k - 1;
        let report = grw2(&d);
        ok &= report.rank_h1u == report.rank_h1x + report.b;
        ok &= report.rank_h1u == 2 * g + k - 1;
    }

    // The classes-(2) demo has torsion quotient Z/2.
    let tors = ns_u_tors(&builtin::torsion_demo());
    ok &= tors.rank() == 0 && tors.torsion() == [BigInt::from(2)];

    // Every generated sequence of every builtin is exact.
    for name in builtin::NAMES {
        let d = builtin::by_name(name).unwrap();
        ok &= grw2(&d).rank_h1u == grw2(&d).rank_h1x + grw2(&d).b;
        for seq in descriptor_to_sequences(&d).unwrap() {
            ok &= seq.check().unwrap().all_exact();
        }
    }

    let dt = start.elapsed();
    report(
        7,
        "lattice engine",
        ok && dt.as_secs_f64() < 5.0,
        &format!("SNF invariants, curve ranks, torsion quotient, exact rows all hold: {ok}; {dt:.2?} (limit 5 s)"),
    );
}

#[test]
fn criterion_08_chamber_tracking() {
    let real_axis = |n: usize| -> Vec<Complex64> {
        (0..=n).map(|i| c(i as f64 / n as f64, 0.0)).collect()
    };
    let circle = |n: usize| -> Vec<Complex64> {
        (0..=n)
            .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / n as f64))
            .collect()
    };

    let h = HarmonicDatum::new(vec![(0.5, c(1.0, 0.0))]);
    let coarse = track_chambers(&h, &real_axis(256), &[0.0]).unwrap();
    let fine = track_chambers(&h, &real_axis(2560), &[0.0]).unwrap();
    let axis_ok = coarse.net_offsets() == vec![-2] && fine.net_offsets() == vec![-2];

    let loop_h = HarmonicDatum::new(vec![(0.0, c(0.5, 0.0))]);
    let loop_coarse = monodromy_of_weights(&loop_h, &circle(256), &[-0.5]).unwrap();
    let loop_fine = monodromy_of_weights(&loop_h, &circle(2560), &[-0.5]).unwrap();
    let loop_ok = loop_coarse == vec![0] && loop_fine == vec![0];

    // Gauge equivariance is exact on this dyadic data.
    let shifted = track_chambers(&h.gauge_shift(1), &real_axis(256), &[0.0]).unwrap();
    let gauge_ok = coarse
        .samples
        .iter()
        .zip(&shifted.samples)
        .all(|(a, b)| b.offsets[0] == a.offsets[0] - 1 && b.weights[0] == a.weights[0] + 1.0);

    report(
        8,
        "chamber tracking",
        axis_ok && loop_ok && gauge_ok,
        &format!(
            "real axis {:?} (want [-2], refinement-stable {axis_ok}), loop {loop_coarse:?} (want [0], stable {loop_ok}), gauge equivariance exact: {gauge_ok}",
            coarse.net_offsets()
        ),
    );
}

#[test]
fn criterion_09_dictionary() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = rc(&mut rng, 2.0);
        let h = HarmonicDatum::new(vec![
            (rng.gen_range(-2.0..2.0), rc(&mut rng, 2.0)),
            (rng.gen_range(-2.0..2.0), rc(&mut rng, 2.0)),
        ]);
        let coords: Vec<(f64, Complex64)> = h
            .divisors
            .iter()
            .map(|&(a, alpha)| InvariantSection::new(a, alpha).coords_at(p))
            .collect();
        let (back, _) = invert_from_point(&coords, p, None, None).unwrap();
        for (got, want) in back.divisors.iter().zip(&h.divisors) {
            worst = worst.max((got.0 - want.0).abs().max((got.1 - want.1).norm()));
        }
    }

    let d = builtin::p1_two_points();
    let mut class_ok = true;
    for _ in 0..100 {
        let b = rng.gen_range(0.05..2.0);
        let p = rc(&mut rng, 1.0);
        let (_, accept) =
            invert_from_point(&[(b, c(0.0, 0.0)), (-b, c(0.0, 0.0))], p, Some(&d), Some(&[0]))
                .unwrap();
        let (_, reject) =
            invert_from_point(&[(b, c(0.0, 0.0)), (b, c(0.0, 0.0))], p, Some(&d), Some(&[0]))
                .unwrap();
        class_ok &= accept.unwrap().passed && !reject.unwrap().passed;
    }

    report(
        9,
        "harmonic dictionary",
        worst < 1e-12 && class_ok,
        &format!("inversion defect {worst:.3e} (limit 1e-12); class check accepts (b,-b) and rejects (b,b): {class_ok}"),
    );
}

#[test]
fn criterion_10_cli_verify() {
    let bin = env!("CARGO_BIN_EXE_twistor");

    let start = Instant::now();
    let clean = std::process::Command::new(bin)
        .args(["verify", "--suite", "all", "--samples", "1000", "--seed", "7"])
        .output()
        .expect("run verify");
    let dt = start.elapsed();
    let clean_ok = clean.status.code() == Some(0) && dt.as_secs_f64() < 30.0;

    let injected = std::process::Command::new(bin)
        .args([
            "verify",
            "--suite",
            "tate",
            "--samples",
            "200",
            "--seed",
            "7",
            "--inject",
            "sigma-sign",
        ])
        .output()
        .expect("run injected verify");
    let text = format!(
        "{}{}",
        String::from_utf8_lossy(&injected.stdout),
        String::from_utf8_lossy(&injected.stderr)
    );
    let injected_ok =
        injected.status.code() == Some(1) && text.contains("eq-sigma-involutivity");

    report(
        10,
        "cli verification",
        clean_ok && injected_ok,
        &format!(
            "clean run exit {:?} in {dt:.2?} (limit 30 s); injected sigma-sign exit {:?} names eq-sigma-involutivity: {injected_ok}",
            clean.status.code(),
            injected.status.code()
        ),
    );
}
