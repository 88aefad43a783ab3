//! Named, seeded verification suites for every identity the library
//! implements. Each check reports the maximum observed defect against its
//! tolerance; the command-line `verify` subcommand drives these and an
//! injected-defect hook lets the reporting path itself be exercised.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{exp_perp, CirclePoint, CircularLog};
use crate::harmonic::{
    invert_from_point, monodromy_of_weights, preferred_residue_sections, track_chambers,
    HarmonicDatum,
};
use crate::lattice::{
    self, builtin, b_rank, descriptor_to_sequences, grw2, ns_u_tors, residue_class_defect,
    smith_normal_form, IntMat,
};
use crate::moduli::HodPoint;
use crate::sphere::{MoebiusMap, SpherePoint};
use crate::tate::{expansion_factor, nu, FiberVector, InvariantSection, TwistorSection};

/// Which suite of identity checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Circle,
    Sphere,
    Tate,
    Moduli,
    Lattice,
    Harmonic,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circle" => Ok(Suite::Circle),
            "sphere" => Ok(Suite::Sphere),
            "tate" => Ok(Suite::Tate),
            "moduli" => Ok(Suite::Moduli),
            "lattice" => Ok(Suite::Lattice),
            "harmonic" => Ok(Suite::Harmonic),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

/// Deliberate defects that can be injected to exercise the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Injection {
    #[default]
    None,
    /// Flips a sign in the section involution used by the tate checks.
    SigmaSignError,
}

/// Configuration for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    /// Tolerance for generic identity checks; checks with pinned tolerances
    /// keep their own.
    pub tol: f64,
    pub injection: Injection,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 7,
            tol: 1e-9,
            injection: Injection::None,
        }
    }
}

/// Outcome of one named identity check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub max_defect: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_defect <= self.tolerance
    }
}

/// Runs the requested suite(s) and returns one result per identity.
pub fn run(suite: Suite, config: &VerifyConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Circle {
        circle_suite(config, &mut out);
    }
    if all || suite == Suite::Sphere {
        sphere_suite(config, &mut out);
    }
    if all || suite == Suite::Tate {
        tate_suite(config, &mut out);
    }
    if all || suite == Suite::Moduli {
        moduli_suite(config, &mut out);
    }
    if all || suite == Suite::Lattice {
        lattice_suite(config, &mut out);
    }
    if all || suite == Suite::Harmonic {
        harmonic_suite(config, &mut out);
    }
    out
}

fn rng_for(config: &VerifyConfig, name: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(config.seed ^ h)
}

fn c64(rng: &mut impl Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn sphere_point(rng: &mut impl Rng) -> SpherePoint {
    let coord = c64(rng, 1.0);
    if rng.gen_bool(0.5) {
        SpherePoint::from_standard(coord)
    } else {
        SpherePoint::from_infinity(coord)
    }
}

fn invariant(rng: &mut impl Rng) -> InvariantSection {
    InvariantSection::new(rng.gen_range(-2.0..2.0), c64(rng, 2.0))
}

fn section(rng: &mut impl Rng) -> TwistorSection {
    TwistorSection::new(c64(rng, 2.0), c64(rng, 2.0), c64(rng, 2.0))
}

/// `theta` samples with moderate imaginary part, keeping the circle
/// exponential of moderate size.
fn tame_theta(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-0.4..0.4))
}

fn check(
    out: &mut Vec<CheckResult>,
    suite: &'static str,
    name: &'static str,
    tolerance: f64,
    defect: f64,
) {
    out.push(CheckResult {
        suite,
        name,
        max_defect: defect,
        tolerance,
    });
}

fn circle_suite(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = cfg.samples;

    let mut rng = rng_for(cfg, "exp-perp-periodicity");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let theta = tame_theta(&mut rng);
        worst = worst.max(exp_perp(theta).dist(&exp_perp(theta + 1.0)));
    }
    check(out, "circle", "exp-perp-periodicity", cfg.tol, worst);

    let mut rng = rng_for(cfg, "exp-perp-homomorphism");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = tame_theta(&mut rng) * 0.5;
        let t = tame_theta(&mut rng) * 0.5;
        worst = worst.max(exp_perp(s + t).dist(&exp_perp(s).mul(&exp_perp(t))));
    }
    check(out, "circle", "exp-perp-homomorphism", 1e-10, worst);

    let mut rng = rng_for(cfg, "circular-log-round-trip");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let theta = Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(-0.5..0.5));
        let log = exp_perp(theta).circular_log().expect("unit point");
        worst = worst.max((log.theta() - theta).norm());
    }
    check(out, "circle", "circular-log-round-trip", 1e-9, worst);

    let mut rng = rng_for(cfg, "circle-unit-invariant");
    let mut worst = 0.0f64;
    for _ in 0..n {
        // Halved imaginary parts: the coordinates grow like cosh, and the
        // pinned tolerance is meaningful only where they stay moderate.
        let p = exp_perp(tame_theta(&mut rng) * 0.5);
        let q = exp_perp(tame_theta(&mut rng) * 0.5);
        worst = worst.max(p.unit_defect()).max(p.mul(&q).unit_defect());
    }
    check(out, "circle", "circle-unit-invariant", 1e-12, worst);

    let mut rng = rng_for(cfg, "choice-conjugation-inverts");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let theta = tame_theta(&mut rng);
        let p = exp_perp(theta);
        worst = worst.max(p.mul(&p.inverse()).dist(&CirclePoint::identity()));
        let log = p.inverse().circular_log().expect("unit point");
        worst = worst.max(log.dist_mod_z(&CircularLog::new(-theta)));
    }
    check(out, "circle", "choice-conjugation-inverts", 1e-9, worst);
}

fn sphere_suite(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = cfg.samples;

    let mut rng = rng_for(cfg, "antipode-involution");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = sphere_point(&mut rng);
        worst = worst.max(p.antipode().antipode().dist(&p));
        worst = worst.max((p.dist(&p.antipode()) - 1.0).abs());
    }
    check(out, "sphere", "antipode-involution", cfg.tol, worst);

    let mut rng = rng_for(cfg, "moebius-antipode-intertwine");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let f = MoebiusMap::random(&mut rng);
        let p = sphere_point(&mut rng);
        worst = worst.max(f.apply(&p.antipode()).dist(&f.apply(&p).antipode()));
    }
    check(out, "sphere", "moebius-antipode-intertwine", 1e-10, worst);

    let mut rng = rng_for(cfg, "moebius-group-action");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let f = MoebiusMap::random(&mut rng);
        let g = MoebiusMap::random(&mut rng);
        let p = sphere_point(&mut rng);
        worst = worst.max(f.compose(&g).apply(&p).dist(&f.apply(&g.apply(&p))));
        worst = worst.max(f.apply(&f.inverse().apply(&p)).dist(&p));
    }
    check(out, "sphere", "moebius-group-action", cfg.tol, worst);

    let mut rng = rng_for(cfg, "sphere-chart-coherence");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mut lambda = c64(&mut rng, 2.0);
        while lambda.norm() < 1e-3 {
            lambda = c64(&mut rng, 2.0);
        }
        let p = SpherePoint::from_standard(lambda);
        let q = SpherePoint::from_infinity(lambda.inv());
        worst = worst.max(p.dist(&q));
    }
    check(out, "sphere", "sphere-chart-coherence", 1e-10, worst);
}

fn injected_sigma(s: &TwistorSection, injection: Injection) -> TwistorSection {
    match injection {
        Injection::None => s.sigma(),
        // Wrong sign on the quadratic output coefficient.
        Injection::SigmaSignError => {
            TwistorSection::new(-s.a2.conj(), s.a1.conj(), s.a0.conj())
        }
    }
}

fn tate_suite(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = cfg.samples;

    let mut rng = rng_for(cfg, "eq-sigma-involutivity");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = section(&mut rng);
        worst = worst.max(injected_sigma(&injected_sigma(&s, cfg.injection), cfg.injection).dist(&s));
    }
    // Gaussian-integer coefficients: the involution is exact there.
    for _ in 0..n.min(100) {
        let g = TwistorSection::new(
            Complex64::new(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64),
            Complex64::new(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64),
            Complex64::new(rng.gen_range(-9..9) as f64, rng.gen_range(-9..9) as f64),
        );
        worst = worst.max(injected_sigma(&injected_sigma(&g, cfg.injection), cfg.injection).dist(&g));
    }
    check(out, "tate", "eq-sigma-involutivity", 1e-12, worst);

    let mut rng = rng_for(cfg, "eq-sigma-fixed-locus");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = invariant(&mut rng).embed();
        worst = worst.max(injected_sigma(&s, cfg.injection).dist(&s));
        // The displayed coefficient map on a basis vector.
        let e0 = TwistorSection::new(Complex64::new(1.0, 0.0), Complex64::zero(), Complex64::zero());
        worst = worst.max(
            injected_sigma(&e0, cfg.injection).dist(&TwistorSection::new(
                Complex64::zero(),
                Complex64::zero(),
                Complex64::new(-1.0, 0.0),
            )),
        );
    }
    check(out, "tate", "eq-sigma-fixed-locus", 1e-12, worst);

    let mut rng = rng_for(cfg, "sigma-total-involution");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let x = FiberVector::new(sphere_point(&mut rng), c64(&mut rng, 2.0));
        worst = worst.max(x.sigma().sigma().dist(&x));
        worst = worst.max(x.sigma().base().dist(&x.base().antipode()));
    }
    check(out, "tate", "sigma-total-involution", cfg.tol, worst);

    let mut rng = rng_for(cfg, "invariant-evaluation-equivariance");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = invariant(&mut rng).embed();
        let p = sphere_point(&mut rng);
        worst = worst.max(s.evaluate(&p).sigma().dist(&s.evaluate(&p.antipode())));
    }
    check(out, "tate", "invariant-evaluation-equivariance", cfg.tol, worst);

    let mut rng = rng_for(cfg, "exactatp-kernel");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = c64(&mut rng, 1.5);
        let w = rng.gen_range(-3.0..3.0);
        let s = InvariantSection::from_coords(w, Complex64::zero(), p);
        let t = nu(&SpherePoint::from_standard(p)).scale(s.weight_at(p));
        worst = worst.max(s.dist(&t));
    }
    check(out, "tate", "exactatp-kernel", 1e-9, worst);

    let mut rng = rng_for(cfg, "coords-isomorphism");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = c64(&mut rng, 2.0);
        let s = invariant(&mut rng);
        let (w, r) = s.coords_at(p);
        worst = worst.max(InvariantSection::from_coords(w, r, p).dist(&s));
        let w = rng.gen_range(-3.0..3.0);
        let r = c64(&mut rng, 3.0);
        let (w2, r2) = InvariantSection::from_coords(w, r, p).coords_at(p);
        worst = worst.max((w - w2).abs().max((r - r2).norm()));
    }
    check(out, "tate", "coords-isomorphism", 1e-12, worst);

    let mut rng = rng_for(cfg, "paraweight-generator-image");
    let mut worst = 0.0f64;
    let generator = InvariantSection::gauge_generator();
    for _ in 0..n {
        let p = c64(&mut rng, 2.0);
        let (w, r) = generator.coords_at(p);
        worst = worst.max((w - 1.0).abs().max((r + p).norm()));
    }
    check(out, "tate", "paraweight-generator-image", 1e-12, worst);

    let mut rng = rng_for(cfg, "nu-normalization");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = sphere_point(&mut rng);
        let s = nu(&p);
        worst = worst.max((s.inner(&s) - 1.0).abs());
        worst = worst.max(s.sphere_point().map_or(f64::INFINITY, |q| q.dist(&p)));
    }
    check(out, "tate", "nu-normalization", 1e-12, worst);

    let mut rng = rng_for(cfg, "nu-expansion-factor");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = sphere_point(&mut rng);
        let eta = expansion_factor(&nu(&p).embed(), &p).expect("nu vanishes at p");
        worst = worst.max((eta + Complex64::new(1.0, 0.0)).norm());
        // Unnormalized generator over the standard chart.
        if let Some(z) = p.standard_coord() {
            let s = InvariantSection::new(1.0 - z.norm_sqr(), z).embed();
            if let Ok(eta) = expansion_factor(&s, &SpherePoint::from_standard(z)) {
                worst = worst.max((eta + Complex64::new(1.0 + z.norm_sqr(), 0.0)).norm());
            }
        }
    }
    check(out, "tate", "nu-expansion-factor", 1e-10, worst);

    let mut rng = rng_for(cfg, "so3-nu-equivariance");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let f = MoebiusMap::random(&mut rng);
        let p = sphere_point(&mut rng);
        worst = worst.max(nu(&p).embed().pushforward(&f).dist(&nu(&f.apply(&p)).embed()));
    }
    check(out, "tate", "so3-nu-equivariance", 1e-9, worst);

    let mut rng = rng_for(cfg, "so3-inner-invariance");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let f = MoebiusMap::random(&mut rng);
        let a = invariant(&mut rng);
        let b = invariant(&mut rng);
        let fa = InvariantSection::extract(&a.embed().pushforward(&f));
        let fb = InvariantSection::extract(&b.embed().pushforward(&f));
        match (fa, fb) {
            (Ok(fa), Ok(fb)) => worst = worst.max((fa.inner(&fb) - a.inner(&b)).abs()),
            _ => worst = f64::INFINITY,
        }
    }
    check(out, "tate", "so3-inner-invariance", 1e-9, worst);

    let mut rng = rng_for(cfg, "so3-group-action");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let f = MoebiusMap::random(&mut rng);
        let g = MoebiusMap::random(&mut rng);
        let s = section(&mut rng);
        worst = worst.max(s.pushforward(&g).pushforward(&f).dist(&s.pushforward(&f.compose(&g))));
        worst = worst.max(s.sigma().pushforward(&f).dist(&s.pushforward(&f).sigma()));
    }
    check(out, "tate", "so3-group-action", 1e-9, worst);

    let mut rng = rng_for(cfg, "gauge-shift-coords");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = invariant(&mut rng);
        let p = c64(&mut rng, 2.0);
        let (w0, r0) = s.coords_at(p);
        let (w1, r1) = s.gauge_shift(1).coords_at(p);
        worst = worst.max((w1 - w0 - 1.0).abs().max((r1 - r0 + p).norm()));
    }
    check(out, "tate", "gauge-shift-coords", 1e-12, worst);
}

fn moduli_suite(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = cfg.samples;

    let hod_point = |rng: &mut ChaCha8Rng| -> HodPoint {
        let mut lambda = c64(rng, 2.0);
        while lambda.norm() < 0.1 {
            lambda = c64(rng, 2.0);
        }
        let alpha = c64(rng, 2.0);
        if rng.gen_bool(0.5) {
            HodPoint::standard(lambda, alpha)
        } else {
            HodPoint::conjugate_chart(lambda, alpha)
        }
    };
    let tame_point = |rng: &mut ChaCha8Rng| -> HodPoint {
        let mut lambda = c64(rng, 2.0);
        while lambda.norm() < 0.1 {
            lambda = c64(rng, 2.0);
        }
        let alpha = tame_theta(rng) * lambda;
        if rng.gen_bool(0.5) {
            HodPoint::standard(lambda, alpha)
        } else {
            HodPoint::conjugate_chart(lambda, alpha)
        }
    };
    let point_defect = |a: &HodPoint, b: &HodPoint| -> f64 {
        let b = if b.chart == a.chart {
            *b
        } else {
            match b.deligne_glue() {
                Ok(p) => p,
                Err(_) => return f64::INFINITY,
            }
        };
        (a.lambda - b.lambda).norm().max((a.alpha - b.alpha).norm())
    };

    let mut rng = rng_for(cfg, "involution-involutivity");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = hod_point(&mut rng);
        worst = worst.max(point_defect(&p.involution_c().involution_c(), &p));
        worst = worst.max(point_defect(&p.involution_d().involution_d(), &p));
        worst = worst.max(point_defect(&p.involution_n().involution_n(), &p));
        worst = worst.max(point_defect(&p.involution_sigma().involution_sigma(), &p));
    }
    check(out, "moduli", "involution-involutivity", 1e-10, worst);

    let mut rng = rng_for(cfg, "involution-commutativity");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = hod_point(&mut rng);
        worst = worst.max(point_defect(
            &p.involution_c().involution_d(),
            &p.involution_d().involution_c(),
        ));
        worst = worst.max(point_defect(
            &p.involution_c().involution_n(),
            &p.involution_n().involution_c(),
        ));
        worst = worst.max(point_defect(
            &p.involution_d().involution_n(),
            &p.involution_n().involution_d(),
        ));
    }
    check(out, "moduli", "involution-commutativity", 1e-10, worst);

    let mut rng = rng_for(cfg, "sigma-equals-cdn");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = hod_point(&mut rng);
        let cdn = p.involution_n().involution_d().involution_c();
        worst = worst.max(point_defect(&cdn, &p.involution_sigma()));
    }
    check(out, "moduli", "sigma-equals-cdn", 1e-10, worst);

    let mut rng = rng_for(cfg, "sigma-covers-antipode");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = hod_point(&mut rng);
        worst = worst.max(p.involution_sigma().base_point().dist(&p.base_point().antipode()));
    }
    check(out, "moduli", "sigma-covers-antipode", 1e-10, worst);

    let mut rng = rng_for(cfg, "glue-round-trip");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = hod_point(&mut rng);
        let q = p
            .deligne_glue()
            .and_then(|q| q.deligne_glue())
            .expect("lambda bounded away from zero");
        worst = worst.max((q.lambda - p.lambda).norm().max((q.alpha - p.alpha).norm()));
    }
    check(out, "moduli", "glue-round-trip", 1e-10, worst);

    let mut rng = rng_for(cfg, "glue-gauge-conjugation");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = hod_point(&mut rng);
        let k = rng.gen_range(-5..=5i64);
        let lhs = p.gauge(k).deligne_glue().expect("nonzero lambda");
        let rhs = p.deligne_glue().expect("nonzero lambda").gauge(-k);
        worst = worst.max(point_defect(&lhs, &rhs));
    }
    check(out, "moduli", "glue-gauge-conjugation", 1e-10, worst);

    let mut rng = rng_for(cfg, "gauge-monodromy-invariance");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let p = tame_point(&mut rng);
        let k = rng.gen_range(-5..=5i64);
        let a = p.monodromy().expect("nonzero lambda");
        let b = p.gauge(k).monodromy().expect("nonzero lambda");
        worst = worst.max(a.dist(&b));
        let c = p.deligne_glue().expect("nonzero lambda").monodromy().unwrap();
        worst = worst.max(a.dist(&c));
    }
    check(out, "moduli", "gauge-monodromy-invariance", cfg.tol, worst);

    let mut rng = rng_for(cfg, "higgs-derham-table");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = invariant(&mut rng);
        let (w, r) = crate::moduli::higgs_to_derham(&s);
        let expected_w = s.higgs_weight + 2.0 * s.higgs_residue.re;
        let expected_r = s.higgs_residue - s.higgs_residue.conj()
            - Complex64::new(s.higgs_weight, 0.0);
        worst = worst.max((w - expected_w).abs().max((r - expected_r).norm()));
        let (wc, rc) = s.coords_at(Complex64::new(1.0, 0.0));
        worst = worst.max((w - wc).abs().max((r - rc).norm()));
    }
    check(out, "moduli", "higgs-derham-table", 1e-12, worst);

    let mut rng = rng_for(cfg, "section-graph-sigma-invariance");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = invariant(&mut rng);
        let lambda = c64(&mut rng, 2.0);
        let image = crate::moduli::section_point(&s, lambda).involution_sigma();
        let expect = crate::moduli::section_point_conjugate(&s, image.lambda);
        worst = worst.max((image.alpha - expect.alpha).norm());
    }
    check(out, "moduli", "section-graph-sigma-invariance", cfg.tol, worst);
}

fn random_matrix(rng: &mut impl Rng, max_dim: usize, max_entry: i64) -> IntMat {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    IntMat::from_fn(rows, cols, |_, _| {
        BigInt::from(rng.gen_range(-max_entry..=max_entry))
    })
}

fn lattice_suite(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = cfg.samples;

    let mut rng = rng_for(cfg, "snf-reconstruction");
    let mut failures = 0.0f64;
    for _ in 0..n {
        let m = random_matrix(&mut rng, 6, 9);
        let snf = smith_normal_form(&m);
        if snf.left.mul(&m).mul(&snf.right) != snf.d {
            failures += 1.0;
        }
        // Diagonal with nonnegative entries.
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j && !snf.d[(i, j)].is_zero() {
                    failures += 1.0;
                }
                if i == j && snf.d[(i, j)].is_negative() {
                    failures += 1.0;
                }
            }
        }
    }
    check(out, "lattice", "snf-reconstruction", 0.0, failures);

    let mut rng = rng_for(cfg, "snf-divisibility-chain");
    let mut failures = 0.0f64;
    for _ in 0..n {
        let m = random_matrix(&mut rng, 6, 9);
        let f = smith_normal_form(&m).invariant_factors();
        if !f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()) {
            failures += 1.0;
        }
    }
    check(out, "lattice", "snf-divisibility-chain", 0.0, failures);

    let mut rng = rng_for(cfg, "snf-transform-unimodularity");
    let mut failures = 0.0f64;
    for _ in 0..n {
        let m = random_matrix(&mut rng, 6, 9);
        let snf = smith_normal_form(&m);
        if snf.left.determinant().abs() != BigInt::one()
            || snf.right.determinant().abs() != BigInt::one()
        {
            failures += 1.0;
        }
    }
    check(out, "lattice", "snf-transform-unimodularity", 0.0, failures);

    let mut rng = rng_for(cfg, "snf-gcd-det-invariants");
    let mut failures = 0.0f64;
    for _ in 0..n {
        let dim = rng.gen_range(1..=4usize);
        let m = IntMat::from_fn(dim, dim, |_, _| BigInt::from(rng.gen_range(-9..=9i64)));
        let snf = smith_normal_form(&m);
        let det = m.determinant().abs();
        let product: BigInt = snf.invariant_factors().iter().product();
        if det != product && !(det.is_zero() && snf.rank < dim) {
            failures += 1.0;
        }
        // d1 is the gcd of all entries.
        let mut gcd = BigInt::zero();
        for i in 0..dim {
            for j in 0..dim {
                gcd = num_integer::gcd(gcd.clone(), m[(i, j)].abs());
            }
        }
        if snf.rank > 0 && snf.d[(0, 0)] != gcd {
            failures += 1.0;
        }
        if snf.rank == 0 && !gcd.is_zero() {
            failures += 1.0;
        }
    }
    check(out, "lattice", "snf-gcd-det-invariants", 0.0, failures);

    let mut failures = 0.0f64;
    for name in builtin::NAMES {
        let d = builtin::by_name(name).expect("builtin");
        let report = grw2(&d);
        if report.rank_h1u != report.rank_h1x + report.b {
            failures += 1.0;
        }
    }
    // Punctured curves of several genera: b = k - 1.
    for (g, k) in [(0usize, 2usize), (1, 1), (1, 4), (2, 3), (5, 2)] {
        let d = builtin::curve(g, k);
        if b_rank(&d) != k - 1 {
            failures += 1.0;
        }
        if grw2(&d).rank_h1u != 2 * g + k - 1 {
            failures += 1.0;
        }
    }
    if !ns_u_tors(&builtin::p1_two_points()).is_trivial() {
        failures += 1.0;
    }
    let tors = ns_u_tors(&builtin::torsion_demo());
    if tors.rank() != 0 || tors.torsion() != [BigInt::from(2)] {
        failures += 1.0;
    }
    check(out, "lattice", "descriptor-rank-bookkeeping", 0.0, failures);

    let mut failures = 0.0f64;
    for name in builtin::NAMES {
        let d = builtin::by_name(name).expect("builtin");
        match descriptor_to_sequences(&d) {
            Ok(seqs) => {
                for seq in seqs {
                    match seq.check() {
                        Ok(report) if report.all_exact() => {}
                        _ => failures += 1.0,
                    }
                }
            }
            Err(_) => failures += 1.0,
        }
    }
    check(out, "lattice", "descriptor-sequence-exactness", 0.0, failures);

    let mut rng = rng_for(cfg, "c1-residue-identity");
    let mut worst = 0.0f64;
    let d = builtin::p1_two_points();
    for _ in 0..n {
        let mut lambda = c64(&mut rng, 2.0);
        while lambda.norm() < 0.05 {
            lambda = c64(&mut rng, 2.0);
        }
        let zeta = rng.gen_range(-3..=3i64);
        let r0 = c64(&mut rng, 2.0);
        let r1 = -lambda * zeta as f64 - r0;
        worst = worst.max(residue_class_defect(&d, &[zeta], &[r0, r1], lambda));
    }
    check(out, "lattice", "c1-residue-identity", 1e-9, worst);

    // Saturation is idempotent on every builtin.
    let mut failures = 0.0f64;
    for name in builtin::NAMES {
        let d = builtin::by_name(name).expect("builtin");
        let data = lattice::saturation(&d);
        let again = lattice::saturate_columns(&data.sat_lattice);
        if !lattice::lattices_equal(&again, &data.sat_lattice) {
            failures += 1.0;
        }
    }
    check(out, "lattice", "saturation-idempotent", 0.0, failures);
}

fn dyadic(rng: &mut impl Rng, r: f64) -> f64 {
    (rng.gen_range(-r * 1024.0..r * 1024.0)).round() / 1024.0
}

fn harmonic_suite(cfg: &VerifyConfig, out: &mut Vec<CheckResult>) {
    let n = cfg.samples;

    let mut rng = rng_for(cfg, "dictionary-round-trip");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let h = HarmonicDatum::new(vec![
            (rng.gen_range(-2.0..2.0), c64(&mut rng, 2.0)),
            (rng.gen_range(-2.0..2.0), c64(&mut rng, 2.0)),
        ]);
        let p = c64(&mut rng, 2.0);
        let coords: Vec<(f64, Complex64)> = preferred_residue_sections(&h)
            .iter()
            .map(|s| s.coords_at(p))
            .collect();
        let (back, _) = invert_from_point(&coords, p, None, None).expect("no descriptor");
        for (got, want) in back.divisors.iter().zip(&h.divisors) {
            worst = worst.max((got.0 - want.0).abs().max((got.1 - want.1).norm()));
        }
    }
    check(out, "harmonic", "dictionary-round-trip", 1e-12, worst);

    let mut rng = rng_for(cfg, "mochizuki-coordinates");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (a, alpha) = (rng.gen_range(-2.0..2.0), c64(&mut rng, 2.0));
        let p = c64(&mut rng, 2.0);
        let s = InvariantSection::new(a, alpha);
        let (w, r) = s.coords_at(p);
        // Independent evaluation of the weight/residue functions.
        let wp = a + (alpha * p.conj() + alpha.conj() * p).re;
        let rp = alpha - a * p - alpha.conj() * p * p;
        worst = worst.max((w - wp).abs().max((r - rp).norm()));
    }
    check(out, "harmonic", "mochizuki-coordinates", 1e-12, worst);

    let mut rng = rng_for(cfg, "chamber-invariant");
    let mut failures = 0.0f64;
    for _ in 0..n.min(200) {
        let h = HarmonicDatum::new(vec![(rng.gen_range(-1.0..1.0), c64(&mut rng, 1.0))]);
        let base = [rng.gen_range(-1.0..0.0)];
        let path: Vec<Complex64> = (0..=100)
            .map(|i| {
                let t = i as f64 / 100.0;
                Complex64::new(t, 0.4 * (std::f64::consts::TAU * t).sin())
            })
            .collect();
        let trace = track_chambers(&h, &path, &base).expect("fine path");
        for s in &trace.samples {
            let v = s.weights[0] + s.offsets[0] as f64;
            if !(v >= base[0] && v < base[0] + 1.0) {
                failures += 1.0;
            }
        }
    }
    check(out, "harmonic", "chamber-invariant", 0.0, failures);

    let mut rng = rng_for(cfg, "chamber-refinement-stability");
    let mut failures = 0.0f64;
    for _ in 0..n.min(100) {
        let h = HarmonicDatum::new(vec![(dyadic(&mut rng, 1.0), Complex64::new(dyadic(&mut rng, 1.0), dyadic(&mut rng, 1.0)))]);
        let base = [dyadic(&mut rng, 0.5) - 0.25];
        let coarse: Vec<Complex64> = (0..=64)
            .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / 64.0))
            .collect();
        let fine: Vec<Complex64> = (0..=640)
            .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / 640.0))
            .collect();
        let a = track_chambers(&h, &coarse, &base);
        let b = track_chambers(&h, &fine, &base);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                if a.net_offsets() != b.net_offsets() {
                    failures += 1.0;
                }
            }
            (Err(_), _) | (_, Err(_)) => {}
        }
    }
    check(out, "harmonic", "chamber-refinement-stability", 0.0, failures);

    let mut rng = rng_for(cfg, "chamber-gauge-equivariance");
    let mut failures = 0.0f64;
    for _ in 0..n.min(200) {
        // Dyadic data keeps the shifted weights bit-exact.
        let h = HarmonicDatum::new(vec![(
            dyadic(&mut rng, 1.0),
            Complex64::new(dyadic(&mut rng, 1.0), dyadic(&mut rng, 1.0)),
        )]);
        let base = [dyadic(&mut rng, 0.5)];
        let path: Vec<Complex64> = (0..=128)
            .map(|i| Complex64::new(i as f64 / 128.0, 0.0))
            .collect();
        let plain = track_chambers(&h, &path, &base).expect("fine path");
        let shifted = track_chambers(&h.gauge_shift(1), &path, &base).expect("fine path");
        for (a, b) in plain.samples.iter().zip(&shifted.samples) {
            if b.offsets[0] != a.offsets[0] - 1 || b.weights[0] != a.weights[0] + 1.0 {
                failures += 1.0;
            }
        }
    }
    check(out, "harmonic", "chamber-gauge-equivariance", 0.0, failures);

    let h = HarmonicDatum::new(vec![(0.5, Complex64::new(1.0, 0.0))]);
    let path: Vec<Complex64> = (0..=256)
        .map(|i| Complex64::new(i as f64 / 256.0, 0.0))
        .collect();
    let trace = track_chambers(&h, &path, &[0.0]).expect("fine path");
    let defect = if trace.net_offsets() == vec![-2] { 0.0 } else { 1.0 };
    check(out, "harmonic", "real-axis-crossing-example", 0.0, defect);

    let h = HarmonicDatum::new(vec![(0.0, Complex64::new(0.5, 0.0))]);
    let loop_path: Vec<Complex64> = (0..=256)
        .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / 256.0))
        .collect();
    let net = monodromy_of_weights(&h, &loop_path, &[-0.5]).expect("closed loop");
    let defect = if net == vec![0] { 0.0 } else { 1.0 };
    check(out, "harmonic", "unit-circle-loop-example", 0.0, defect);

    let d = builtin::p1_two_points();
    let mut failures = 0.0f64;
    let mut rng = rng_for(cfg, "c1-obstruction-example");
    for _ in 0..n.min(100) {
        let b = rng.gen_range(0.05..2.0);
        let p = c64(&mut rng, 1.0);
        let good = invert_from_point(
            &[(b, Complex64::zero()), (-b, Complex64::zero())],
            p,
            Some(&d),
            Some(&[0]),
        );
        let bad = invert_from_point(
            &[(b, Complex64::zero()), (b, Complex64::zero())],
            p,
            Some(&d),
            Some(&[0]),
        );
        match (good, bad) {
            (Ok((_, Some(g))), Ok((_, Some(bd)))) => {
                if !g.passed || bd.passed {
                    failures += 1.0;
                }
            }
            _ => failures += 1.0,
        }
    }
    check(out, "harmonic", "c1-obstruction-example", 0.0, failures);

    let mut rng = rng_for(cfg, "uniqueness-at-point");
    let mut worst = 0.0f64;
    for _ in 0..n {
        let a = HarmonicDatum::new(vec![(rng.gen_range(-2.0..2.0), c64(&mut rng, 2.0))]);
        let p = c64(&mut rng, 2.0);
        let coords: Vec<(f64, Complex64)> = preferred_residue_sections(&a)
            .iter()
            .map(|s| s.coords_at(p))
            .collect();
        let (b, _) = invert_from_point(&coords, p, None, None).expect("no descriptor");
        for (x, y) in a.divisors.iter().zip(&b.divisors) {
            worst = worst.max((x.0 - y.0).abs().max((x.1 - y.1).norm()));
        }
    }
    check(out, "harmonic", "uniqueness-at-point", 1e-12, worst);
}
