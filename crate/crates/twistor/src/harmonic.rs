//! The harmonic-bundle dictionary: per-divisor parabolic weight and Higgs
//! residue data as invariant sections, their weight/residue evaluation at any
//! point of the twistor line, the closed-form inverse problem, and chamber
//! tracking of parabolic weights along paths.
//!
//! Chambers are the half-open unit windows `[c, c + 1)`: walls belong to the
//! chamber above them, which makes the tracking rule total and deterministic.
//! The integer offsets translate the windows, and the offset lattice acts
//! simply transitively on them.

use num_complex::Complex64;

use crate::circle::CirclePoint;
use crate::error::{Error, Result};
use crate::lattice::{weight_class_defect, GeometryDescriptor};
use crate::tate::InvariantSection;

/// Per-divisor harmonic data: a parabolic weight (increasing convention) and
/// a Higgs residue for each divisor component, plus an opaque label for the
/// unitary part of the bundle, used only in uniqueness comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDatum {
    pub divisors: Vec<(f64, Complex64)>,
    pub monodromy_label: Option<Vec<CirclePoint>>,
}

impl HarmonicDatum {
    pub fn new(divisors: Vec<(f64, Complex64)>) -> Self {
        Self {
            divisors,
            monodromy_label: None,
        }
    }

    pub fn with_label(mut self, label: Vec<CirclePoint>) -> Self {
        self.monodromy_label = Some(label);
        self
    }

    pub fn divisor_count(&self) -> usize {
        self.divisors.len()
    }

    /// Shifts every divisor by `n` gauge generators: `(a, alpha) -> (a + n, alpha)`.
    pub fn gauge_shift(&self, n: i64) -> Self {
        Self {
            divisors: self
                .divisors
                .iter()
                .map(|&(a, alpha)| (a + n as f64, alpha))
                .collect(),
            monodromy_label: self.monodromy_label.clone(),
        }
    }
}

/// The per-divisor invariant sections `psi(a_i, alpha_i)`. Evaluating their
/// coordinates at any `p` gives the parabolic weight and residue of the
/// associated logarithmic `p`-connection.
pub fn preferred_residue_sections(h: &HarmonicDatum) -> Vec<InvariantSection> {
    h.divisors
        .iter()
        .map(|&(a, alpha)| InvariantSection::new(a, alpha))
        .collect()
}

/// Result of the bundle-class consistency check in [`invert_from_point`].
#[derive(Debug, Clone)]
pub struct ClassCheck {
    /// Per-free-row defect of `zeta + sum_i weight_i * [D_i]`.
    pub defect: Vec<f64>,
    pub passed: bool,
}

/// Tolerance for the bundle-class obstruction check.
pub const CLASS_TOL: f64 = 1e-9;

/// Recovers the harmonic data from `(weight, residue)` pairs observed at a
/// single finite `p`, via the closed-form coordinate inverse. When a
/// descriptor and a bundle class are supplied, the vanishing of the real
/// class `zeta + sum_i weight_i [D_i]` is reported alongside; a failure is an
/// obstruction report, not an error.
pub fn invert_from_point(
    data: &[(f64, Complex64)],
    p: Complex64,
    descriptor: Option<&GeometryDescriptor>,
    bundle_class: Option<&[i64]>,
) -> Result<(HarmonicDatum, Option<ClassCheck>)> {
    let divisors: Vec<(f64, Complex64)> = data
        .iter()
        .map(|&(w, r)| {
            let s = InvariantSection::from_coords(w, r, p);
            (s.higgs_weight, s.higgs_residue)
        })
        .collect();

    let check = match (descriptor, bundle_class) {
        (Some(d), Some(zeta)) => {
            if data.len() != d.divisor_count {
                return Err(Error::DivisorCountMismatch {
                    expected: d.divisor_count,
                    got: data.len(),
                });
            }
            let weights: Vec<f64> = data.iter().map(|&(w, _)| w).collect();
            let defect = weight_class_defect(d, zeta, &weights);
            let passed = defect.iter().all(|&x| x <= CLASS_TOL);
            Some(ClassCheck { defect, passed })
        }
        _ => None,
    };

    Ok((HarmonicDatum::new(divisors), check))
}

/// A snapshot of the chamber tracker: the current point, the accumulated
/// integer offsets, and the chamber bases. The invariant
/// `weight_p(psi_i) + offset_i in [c_i, c_i + 1)` holds for every divisor.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberState {
    pub point: Complex64,
    pub offsets: Vec<i64>,
    pub base: Vec<f64>,
}

/// One recorded sample of a chamber trace.
#[derive(Debug, Clone)]
pub struct TraceSample {
    pub index: usize,
    pub point: Complex64,
    /// Raw weights `weight_p(psi_i)`, before offsetting.
    pub weights: Vec<f64>,
    pub offsets: Vec<i64>,
    /// Set when `weight + offset` landed exactly on the chamber wall `c_i`
    /// (resolved into the window by the half-open convention).
    pub on_wall: Vec<bool>,
}

/// The full trace of a tracked path.
#[derive(Debug, Clone)]
pub struct ChamberTrace {
    pub base: Vec<f64>,
    pub initial_offsets: Vec<i64>,
    pub samples: Vec<TraceSample>,
}

impl ChamberTrace {
    pub fn final_state(&self) -> ChamberState {
        let last = self.samples.last().expect("trace is never empty");
        ChamberState {
            point: last.point,
            offsets: last.offsets.clone(),
            base: self.base.clone(),
        }
    }

    /// Offsets accumulated along the path: final minus initial.
    pub fn net_offsets(&self) -> Vec<i64> {
        let last = self.samples.last().expect("trace is never empty");
        last.offsets
            .iter()
            .zip(&self.initial_offsets)
            .map(|(f, i)| f - i)
            .collect()
    }

    /// CSV export, one row per (sample, divisor):
    /// `index,p_re,p_im,divisor,weight,offset`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,p_re,p_im,divisor,weight,offset\n");
        for s in &self.samples {
            for (i, (w, n)) in s.weights.iter().zip(&s.offsets).enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    s.index,
                    fmt_sig(s.point.re),
                    fmt_sig(s.point.im),
                    i,
                    fmt_sig(*w),
                    n
                ));
            }
        }
        out
    }
}

/// Formats at 12 significant digits, locale-independent.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{x:.11e}");
    // Render small exponents in plain notation for readability.
    match s.split_once('e') {
        Some((_, exp)) if exp.parse::<i32>().is_ok_and(|e| (-4..12).contains(&e)) => {
            let digits = 11 - exp.parse::<i32>().unwrap();
            let plain = format!("{x:.*}", digits.max(0) as usize);
            if plain.contains('.') {
                plain.trim_end_matches('0').trim_end_matches('.').to_string()
            } else {
                plain
            }
        }
        _ => s,
    }
}

/// Follows each divisor weight continuously along the sampled path,
/// adjusting integer offsets whenever the half-open window is exited.
///
/// Initial offsets are the unique integers placing the starting weights in
/// their windows. Requires every consecutive weight change to stay below 1/2
/// so a crossing cannot alias; coarser paths are rejected with a
/// refine-path error.
pub fn track_chambers(
    h: &HarmonicDatum,
    path: &[Complex64],
    base: &[f64],
) -> Result<ChamberTrace> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    if base.len() != h.divisor_count() {
        return Err(Error::DivisorCountMismatch {
            expected: h.divisor_count(),
            got: base.len(),
        });
    }
    let sections = preferred_residue_sections(h);
    let weight = |p: Complex64| -> Vec<f64> { sections.iter().map(|s| s.weight_at(p)).collect() };

    let w0 = weight(path[0]);
    let initial_offsets: Vec<i64> = w0
        .iter()
        .zip(base)
        .map(|(w, c)| {
            let n = (c - w).ceil();
            // ceil puts w + n in [c, c + 1).
            n as i64
        })
        .collect();

    let mut offsets = initial_offsets.clone();
    let mut prev = w0.clone();
    let mut samples = Vec::with_capacity(path.len());
    for (index, &p) in path.iter().enumerate() {
        let w = weight(p);
        let mut on_wall = vec![false; w.len()];
        for i in 0..w.len() {
            if index > 0 {
                let jump = (w[i] - prev[i]).abs();
                if jump >= 0.5 {
                    return Err(Error::RefinePath {
                        divisor: i,
                        index: index - 1,
                        jump,
                    });
                }
            }
            while w[i] + offsets[i] as f64 >= base[i] + 1.0 {
                offsets[i] -= 1;
            }
            while w[i] + (offsets[i] as f64) < base[i] {
                offsets[i] += 1;
            }
            on_wall[i] = w[i] + offsets[i] as f64 == base[i];
        }
        prev = w.clone();
        samples.push(TraceSample {
            index,
            point: p,
            weights: w,
            offsets: offsets.clone(),
            on_wall,
        });
    }

    Ok(ChamberTrace {
        base: base.to_vec(),
        initial_offsets,
        samples,
    })
}

/// Net gauge offsets accumulated around a closed path: the count of
/// elementary transformations induced by moving the parabolic indices around
/// the loop.
pub fn monodromy_of_weights(
    h: &HarmonicDatum,
    path: &[Complex64],
    base: &[f64],
) -> Result<Vec<i64>> {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err(Error::EmptyPath);
    };
    let gap = (first - last).norm();
    if gap > 1e-9 {
        return Err(Error::PathNotClosed { gap });
    }
    Ok(track_chambers(h, path, base)?.net_offsets())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_axis_path(n: usize) -> Vec<Complex64> {
        (0..=n).map(|i| c(i as f64 / n as f64, 0.0)).collect()
    }

    fn circle_path(n: usize) -> Vec<Complex64> {
        (0..=n)
            .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / n as f64))
            .collect()
    }

    #[test]
    fn sections_return_higgs_data_at_zero() {
        let h = HarmonicDatum::new(vec![(0.4, c(0.2, -0.1)), (-0.3, c(0.0, 1.0))]);
        for (s, &(a, alpha)) in preferred_residue_sections(&h).iter().zip(&h.divisors) {
            let (w, r) = s.coords_at(c(0.0, 0.0));
            assert_eq!(w, a);
            assert_eq!(r, alpha);
        }
        // The zero datum stays zero at every p.
        let z = InvariantSection::zero();
        let (w, r) = z.coords_at(c(0.7, -0.3));
        assert_eq!((w, r), (0.0, c(0.0, 0.0)));
        // (1, 0) at p = 1 gives (1, -1).
        let g = InvariantSection::gauge_generator();
        assert_eq!(g.coords_at(c(1.0, 0.0)), (1.0, c(-1.0, 0.0)));
    }

    #[test]
    fn invert_round_trips_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let h = HarmonicDatum::new(vec![
                (rng.gen_range(-2.0..2.0), c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))),
                (rng.gen_range(-2.0..2.0), c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))),
            ]);
            let p = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let coords: Vec<(f64, Complex64)> = preferred_residue_sections(&h)
                .iter()
                .map(|s| s.coords_at(p))
                .collect();
            let (back, _) = invert_from_point(&coords, p, None, None).unwrap();
            for (got, want) in back.divisors.iter().zip(&h.divisors) {
                assert!((got.0 - want.0).abs() < 1e-12);
                assert!((got.1 - want.1).norm() < 1e-12);
            }
        }
        // (1, -p) inverts to the gauge generator.
        let p = c(0.4, 0.9);
        let (datum, _) = invert_from_point(&[(1.0, -p)], p, None, None).unwrap();
        assert!((datum.divisors[0].0 - 1.0).abs() < 1e-15);
        assert!(datum.divisors[0].1.norm() < 1e-15);
    }

    #[test]
    fn class_check_on_two_punctures() {
        let d = builtin::p1_two_points();
        let b = 0.375;
        let p = c(0.0, 0.0);
        let (_, check) = invert_from_point(&[(b, c(0.1, 0.0)), (-b, c(0.2, 0.0))], p, Some(&d), Some(&[0]))
            .unwrap();
        assert!(check.unwrap().passed);
        let (_, check) = invert_from_point(&[(b, c(0.1, 0.0)), (b, c(0.2, 0.0))], p, Some(&d), Some(&[0]))
            .unwrap();
        let check = check.unwrap();
        assert!(!check.passed);
        assert!((check.defect[0] - 2.0 * b).abs() < 1e-12);
    }

    #[test]
    fn constant_path_keeps_offsets() {
        let h = HarmonicDatum::new(vec![(0.3, c(0.1, 0.4))]);
        let path = vec![c(0.2, 0.1); 20];
        let trace = track_chambers(&h, &path, &[0.0]).unwrap();
        assert_eq!(trace.net_offsets(), vec![0]);
        assert!(trace.samples.iter().all(|s| s.offsets == trace.initial_offsets));
    }

    #[test]
    fn real_axis_example_crosses_two_walls() {
        // (a, alpha) = (1/2, 1): the weight along the real axis is 1/2 + 2p,
        // crossing the walls of [0, 1) at p = 1/4 and p = 3/4.
        let h = HarmonicDatum::new(vec![(0.5, c(1.0, 0.0))]);
        let trace = track_chambers(&h, &real_axis_path(64), &[0.0]).unwrap();
        assert_eq!(trace.initial_offsets, vec![0]);
        assert_eq!(trace.net_offsets(), vec![-2]);
        // Stable under refinement.
        let finer = track_chambers(&h, &real_axis_path(640), &[0.0]).unwrap();
        assert_eq!(finer.net_offsets(), vec![-2]);
    }

    #[test]
    fn unit_circle_loop_has_no_net_offset() {
        // (a, alpha) = (0, 1/2): the weight on the unit circle is cos(angle);
        // the crossings of the [-1/2, 1/2) window cancel around the loop.
        let h = HarmonicDatum::new(vec![(0.0, c(0.5, 0.0))]);
        let net = monodromy_of_weights(&h, &circle_path(128), &[-0.5]).unwrap();
        assert_eq!(net, vec![0]);
        let net = monodromy_of_weights(&h, &circle_path(1280), &[-0.5]).unwrap();
        assert_eq!(net, vec![0]);
    }

    #[test]
    fn chamber_invariant_holds_at_every_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..50 {
            let h = HarmonicDatum::new(vec![
                (rng.gen_range(-1.0..1.0), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
                (rng.gen_range(-1.0..1.0), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            ]);
            let base = [rng.gen_range(-1.0..0.0), rng.gen_range(-1.0..0.0)];
            let path: Vec<Complex64> = (0..=200)
                .map(|i| {
                    let t = i as f64 / 200.0;
                    c(t, 0.3 * (std::f64::consts::TAU * t).sin())
                })
                .collect();
            let trace = track_chambers(&h, &path, &base).unwrap();
            for s in &trace.samples {
                for (i, &c) in base.iter().enumerate() {
                    let v = s.weights[i] + s.offsets[i] as f64;
                    assert!(v >= c && v < c + 1.0);
                }
            }
        }
    }

    #[test]
    fn coarse_path_is_rejected() {
        let h = HarmonicDatum::new(vec![(0.5, c(1.0, 0.0))]);
        // Two samples across a weight change of 2.
        let err = track_chambers(&h, &[c(0.0, 0.0), c(1.0, 0.0)], &[0.0]);
        assert!(matches!(err, Err(Error::RefinePath { .. })));
    }

    #[test]
    fn open_path_has_no_weight_monodromy() {
        let h = HarmonicDatum::new(vec![(0.5, c(1.0, 0.0))]);
        assert!(matches!(
            monodromy_of_weights(&h, &real_axis_path(64), &[0.0]),
            Err(Error::PathNotClosed { .. })
        ));
    }

    #[test]
    fn gauge_equivariance_shifts_offsets() {
        let h = HarmonicDatum::new(vec![(0.5, c(1.0, 0.0))]);
        let path = real_axis_path(64);
        let trace = track_chambers(&h, &path, &[0.0]).unwrap();
        let shifted = track_chambers(&h.gauge_shift(1), &path, &[0.0]).unwrap();
        for (a, b) in trace.samples.iter().zip(&shifted.samples) {
            for i in 0..1 {
                assert_eq!(b.weights[i], a.weights[i] + 1.0);
                assert_eq!(b.offsets[i], a.offsets[i] - 1);
            }
        }
        assert_eq!(trace.net_offsets(), shifted.net_offsets());
    }

    #[test]
    fn wall_landing_is_flagged() {
        // Weight identically 0 sits exactly on the wall of [0, 1).
        let h = HarmonicDatum::new(vec![(0.0, c(0.0, 0.0))]);
        let trace = track_chambers(&h, &[c(0.0, 0.0), c(0.1, 0.0)], &[0.0]).unwrap();
        assert!(trace.samples.iter().all(|s| s.on_wall[0]));
        assert_eq!(trace.net_offsets(), vec![0]);
    }

    #[test]
    fn uniqueness_from_one_point() {
        // Equal weight/residue coordinates at a single p force equal data;
        // the opaque label distinguishes otherwise equal residue data.
        let p = c(0.3, -0.8);
        let a = HarmonicDatum::new(vec![(0.25, c(0.5, 0.5))]);
        let coords: Vec<_> = preferred_residue_sections(&a)
            .iter()
            .map(|s| s.coords_at(p))
            .collect();
        let (b, _) = invert_from_point(&coords, p, None, None).unwrap();
        assert!((a.divisors[0].0 - b.divisors[0].0).abs() < 1e-12);
        assert!((a.divisors[0].1 - b.divisors[0].1).norm() < 1e-12);
        let labeled = a.clone().with_label(vec![CirclePoint::identity()]);
        assert_ne!(labeled.monodromy_label, b.monodromy_label);
    }

    #[test]
    fn csv_trace_shape() {
        let h = HarmonicDatum::new(vec![(0.5, c(1.0, 0.0)), (0.0, c(0.0, 0.0))]);
        let trace = track_chambers(&h, &real_axis_path(8), &[0.0, 0.0]).unwrap();
        let csv = trace.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "index,p_re,p_im,divisor,weight,offset");
        assert_eq!(lines.len(), 1 + 9 * 2);
        assert!(lines[1].starts_with("0,0,0,0,"));
    }

    #[test]
    fn fmt_sig_is_stable() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert!(fmt_sig(1.5e-13).contains('e'));
    }
}
