//! The logarithmic Tate twistor structure: the slope-two line bundle over the
//! twistor line (the tangent bundle with a sign-twisted antipodal lift), its
//! global sections, the invariant sections, and the weight/residue coordinate
//! systems they carry.
//!
//! A global section is a polynomial `P(lambda) = a0 + a1*lambda + a2*lambda^2`
//! of degree at most 2, read as the vector field `P(lambda) d/dlambda` in the
//! standard chart. In the infinity chart `mu = 1/lambda` the same section is
//! `-(a2 + a1*mu + a0*mu^2) d/dmu`; chart changes multiply fiber values by
//! minus the square of the target coordinate.
//!
//! The twisted antipodal involution acts on total-space points by
//! `(lambda, v d/dlambda) -> (-1/conj(lambda), -conj(v)/conj(lambda)^2 d/dlambda)`
//! and on section coefficients by `(a0, a1, a2) -> (-conj(a2), conj(a1), -conj(a0))`.
//! Its fixed sections are exactly `psi(a, alpha) = alpha - a*lambda - conj(alpha)*lambda^2`
//! with `a` real: `a` is the parabolic weight and `alpha` the Higgs residue.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere::{Chart, MoebiusMap, SpherePoint};

/// Tolerance below which a section counts as sigma-invariant or vanishing.
pub const INVARIANCE_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A global section of the bundle: a degree-at-most-2 polynomial in the
/// standard chart, coefficients of `d/dlambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistorSection {
    pub a0: Complex64,
    pub a1: Complex64,
    pub a2: Complex64,
}

impl TwistorSection {
    pub fn new(a0: Complex64, a1: Complex64, a2: Complex64) -> Self {
        Self { a0, a1, a2 }
    }

    pub fn zero() -> Self {
        Self::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }

    /// Coefficients `(q0, q1, q2)` of the same section in the infinity chart,
    /// where it reads `q0 + q1*mu + q2*mu^2` in the frame `d/dmu`.
    pub fn infinity_coeffs(&self) -> (Complex64, Complex64, Complex64) {
        (-self.a2, -self.a1, -self.a0)
    }

    /// Rebuilds a section from infinity-chart coefficients. Inverse of
    /// [`TwistorSection::infinity_coeffs`].
    pub fn from_infinity_coeffs(q0: Complex64, q1: Complex64, q2: Complex64) -> Self {
        Self::new(-q2, -q1, -q0)
    }

    /// The twisted antipodal involution on sections:
    /// `(a0, a1, a2) -> (-conj(a2), conj(a1), -conj(a0))`.
    pub fn sigma(&self) -> Self {
        Self::new(-self.a2.conj(), self.a1.conj(), -self.a0.conj())
    }

    /// Distance to the sigma-fixed locus, `max |sigma(s) - s|` over coefficients.
    pub fn sigma_defect(&self) -> f64 {
        let t = self.sigma();
        (t.a0 - self.a0)
            .norm()
            .max((t.a1 - self.a1).norm())
            .max((t.a2 - self.a2).norm())
    }

    /// Polynomial value in the standard chart (frame `d/dlambda`).
    pub fn eval_standard(&self, lambda: Complex64) -> Complex64 {
        self.a0 + (self.a1 + self.a2 * lambda) * lambda
    }

    /// Polynomial value in the infinity chart (frame `d/dmu`).
    pub fn eval_infinity(&self, mu: Complex64) -> Complex64 {
        -(self.a2 + (self.a1 + self.a0 * mu) * mu)
    }

    /// Evaluates the section at a point, in the point's canonical chart.
    pub fn evaluate(&self, p: &SpherePoint) -> FiberVector {
        let value = match p.chart() {
            Chart::Standard => self.eval_standard(p.coord()),
            Chart::Infinity => self.eval_infinity(p.coord()),
        };
        FiberVector { base: *p, value }
    }

    /// Derivative of the chart polynomial at `p`, in `p`'s canonical chart.
    fn chart_derivative(&self, p: &SpherePoint) -> Complex64 {
        match p.chart() {
            Chart::Standard => self.a1 + 2.0 * self.a2 * p.coord(),
            Chart::Infinity => -(self.a1 + 2.0 * self.a0 * p.coord()),
        }
    }

    /// Transports the vector field along an intertwining automorphism: the
    /// coefficients of `f'(lambda) P(lambda)` re-expressed at `f(lambda)`.
    /// Closed on degree at most 2 and commutes with [`TwistorSection::sigma`].
    pub fn pushforward(&self, f: &MoebiusMap) -> Self {
        let (u, v) = (f.u(), f.v());
        let (ub, vb) = (u.conj(), v.conj());
        Self::new(
            self.a0 * u * u - self.a1 * u * v + self.a2 * v * v,
            2.0 * self.a0 * u * vb + self.a1 * (u.norm_sqr() - v.norm_sqr())
                - 2.0 * self.a2 * ub * v,
            self.a0 * vb * vb + self.a1 * ub * vb + self.a2 * ub * ub,
        )
    }

    /// Coefficient-wise max-norm distance.
    pub fn dist(&self, other: &Self) -> f64 {
        (self.a0 - other.a0)
            .norm()
            .max((self.a1 - other.a1).norm())
            .max((self.a2 - other.a2).norm())
    }
}

impl std::ops::Add for TwistorSection {
    type Output = TwistorSection;
    fn add(self, rhs: TwistorSection) -> TwistorSection {
        TwistorSection::new(self.a0 + rhs.a0, self.a1 + rhs.a1, self.a2 + rhs.a2)
    }
}

impl std::ops::Sub for TwistorSection {
    type Output = TwistorSection;
    fn sub(self, rhs: TwistorSection) -> TwistorSection {
        TwistorSection::new(self.a0 - rhs.a0, self.a1 - rhs.a1, self.a2 - rhs.a2)
    }
}

/// A sigma-invariant section, parameterized by the parabolic weight `a`
/// (real) and the Higgs residue `alpha`. Embeds as the polynomial
/// `alpha - a*lambda - conj(alpha)*lambda^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSection {
    /// Parabolic weight in the Higgs chart (increasing-filtration convention).
    pub higgs_weight: f64,
    /// Residue of the Higgs field.
    pub higgs_residue: Complex64,
}

impl InvariantSection {
    pub fn new(higgs_weight: f64, higgs_residue: Complex64) -> Self {
        Self {
            higgs_weight,
            higgs_residue,
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, c(0.0, 0.0))
    }

    /// The integer-subgroup generator `(1, 0)`, i.e. the vector field
    /// `-lambda d/dlambda` in the standard chart.
    pub fn gauge_generator() -> Self {
        Self::new(1.0, c(0.0, 0.0))
    }

    /// The section as a polynomial, coefficients `(alpha, -a, -conj(alpha))`.
    pub fn embed(&self) -> TwistorSection {
        TwistorSection::new(
            self.higgs_residue,
            c(-self.higgs_weight, 0.0),
            -self.higgs_residue.conj(),
        )
    }

    /// Reads the `(a, alpha)` parameters off a sigma-invariant section.
    /// Rejects sections whose sigma defect exceeds [`INVARIANCE_TOL`].
    pub fn extract(t: &TwistorSection) -> Result<Self> {
        let defect = t.sigma_defect();
        if defect > INVARIANCE_TOL {
            return Err(Error::NotInvariant { defect });
        }
        Ok(Self::new(
            -t.a1.re,
            0.5 * (t.a0 - t.a2.conj()),
        ))
    }

    /// The residue coordinate at `lambda = p`:
    /// `alpha - a*p - conj(alpha)*p^2`, read in the standard frame.
    pub fn residue_at(&self, p: Complex64) -> Complex64 {
        let ab = self.higgs_residue.conj();
        self.higgs_residue - (c(self.higgs_weight, 0.0) + ab * p) * p
    }

    /// The parabolic weight coordinate at `lambda = p`:
    /// `a + alpha*conj(p) + conj(alpha)*p`, always real.
    pub fn weight_at(&self, p: Complex64) -> f64 {
        self.higgs_weight + 2.0 * (self.higgs_residue * p.conj()).re
    }

    /// The coordinate pair `(weight, residue)` at `lambda = p`;
    /// a real-linear bijection for every finite `p`.
    pub fn coords_at(&self, p: Complex64) -> (f64, Complex64) {
        (self.weight_at(p), self.residue_at(p))
    }

    /// Inverts [`InvariantSection::coords_at`] in closed form:
    /// `alpha = (residue + weight*p) / (1 + |p|^2)` and then
    /// `a = weight - 2 Re(alpha * conj(p))`. The underlying real 3x3 system
    /// has determinant `(1 + |p|^2)^2`, so this is defined for every `p`.
    pub fn from_coords(weight: f64, residue: Complex64, p: Complex64) -> Self {
        let alpha = (residue + weight * p) / (1.0 + p.norm_sqr());
        let a = weight - 2.0 * (alpha * p.conj()).re;
        Self::new(a, alpha)
    }

    /// The invariant inner product `a*b + 2(alpha*conj(beta) + conj(alpha)*beta)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.higgs_weight * other.higgs_weight
            + 4.0 * (self.higgs_residue * other.higgs_residue.conj()).re
    }

    /// Real scalar multiple.
    pub fn scale(&self, t: f64) -> Self {
        Self::new(t * self.higgs_weight, t * self.higgs_residue)
    }

    /// The integer gauge shift `(a, alpha) -> (a + n, alpha)`. In the
    /// `(weight, residue)` coordinates at `p` this adds `(n, -n*p)`.
    pub fn gauge_shift(&self, n: i64) -> Self {
        Self::new(self.higgs_weight + n as f64, self.higgs_residue)
    }

    /// For a unit section (`inner(s, s) = 1`), the unique point `p` with
    /// `nu(p) = s`: `p = 2*alpha / (1 + a)`, or infinity when `a = -1`.
    pub fn sphere_point(&self) -> Result<SpherePoint> {
        let defect = (self.inner(self) - 1.0).abs();
        if defect > INVARIANCE_TOL {
            return Err(Error::NotUnitSection { defect });
        }
        let z0 = 2.0 * self.higgs_residue;
        let z1 = c(1.0 + self.higgs_weight, 0.0);
        if z1.norm() == 0.0 {
            return Ok(SpherePoint::infinity());
        }
        Ok(SpherePoint::from_homogeneous(z0, z1))
    }

    /// Max-norm distance on the `(a, alpha)` parameters.
    pub fn dist(&self, other: &Self) -> f64 {
        (self.higgs_weight - other.higgs_weight)
            .abs()
            .max((self.higgs_residue - other.higgs_residue).norm())
    }
}

impl std::ops::Add for InvariantSection {
    type Output = InvariantSection;
    fn add(self, rhs: InvariantSection) -> InvariantSection {
        InvariantSection::new(
            self.higgs_weight + rhs.higgs_weight,
            self.higgs_residue + rhs.higgs_residue,
        )
    }
}

impl std::ops::Sub for InvariantSection {
    type Output = InvariantSection;
    fn sub(self, rhs: InvariantSection) -> InvariantSection {
        InvariantSection::new(
            self.higgs_weight - rhs.higgs_weight,
            self.higgs_residue - rhs.higgs_residue,
        )
    }
}

/// The canonical invariant section vanishing at `p` and its antipode,
/// normalized to expansion factor -1 at `p`. For `p = 0` this is the
/// integer-subgroup generator `(1, 0)`; for `p` at infinity it is `(-1, 0)`.
pub fn nu(p: &SpherePoint) -> InvariantSection {
    let z = p.coord();
    let n = 1.0 + z.norm_sqr();
    match p.chart() {
        Chart::Standard => InvariantSection::new((1.0 - z.norm_sqr()) / n, z / n),
        Chart::Infinity => InvariantSection::new((z.norm_sqr() - 1.0) / n, z.conj() / n),
    }
}

/// A point of the total space: a fiber vector over a base point, stored in
/// the frame of the base's canonical chart (`d/dlambda` or `d/dmu`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberVector {
    base: SpherePoint,
    value: Complex64,
}

impl FiberVector {
    /// A fiber vector given in an arbitrary chart, canonicalized. When the
    /// canonical chart differs from the given one, the value picks up the
    /// transition factor `-(canonical coordinate)^2`.
    pub fn from_chart(chart: Chart, coord: Complex64, value: Complex64) -> Self {
        let base = SpherePoint::from_chart(chart, coord);
        if base.chart() == chart {
            Self { base, value }
        } else {
            let t = base.coord();
            Self {
                base,
                value: -t * t * value,
            }
        }
    }

    pub fn new(base: SpherePoint, value: Complex64) -> Self {
        Self { base, value }
    }

    pub fn base(&self) -> SpherePoint {
        self.base
    }

    /// The value in the frame of the base's canonical chart.
    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// The value re-expressed in the requested chart, or `None` when the base
    /// sits at the other chart's center so the frame does not extend there.
    pub fn value_in_chart(&self, chart: Chart) -> Option<Complex64> {
        if chart == self.base.chart() {
            return Some(self.value);
        }
        let z = self.base.coord();
        if z.norm() == 0.0 {
            return None;
        }
        let t = z.inv();
        Some(-t * t * self.value)
    }

    /// The twisted antipodal involution on the total space:
    /// `(lambda, v) -> (-1/conj(lambda), -conj(v)/conj(lambda)^2)` in standard
    /// coordinates. In canonical form it swaps charts, sends the coordinate
    /// `c` to `-conj(c)` and the value to its conjugate.
    pub fn sigma(&self) -> Self {
        Self::from_chart(
            self.base.chart().other(),
            -self.base.coord().conj(),
            self.value.conj(),
        )
    }

    pub fn dist(&self, other: &Self) -> f64 {
        // Only meaningful when the bases coincide; compare values in the
        // canonical chart of self.
        let d_base = self.base.dist(&other.base);
        let d_val = match other.value_in_chart(self.base.chart()) {
            Some(v) => (self.value - v).norm(),
            None => f64::INFINITY,
        };
        d_base.max(d_val)
    }
}

/// Expansion factor of a section at a zero `p`: the derivative of the chart
/// polynomial at `p` (a chart-independent complex number, dual to the
/// residue). Requires `|evaluate(s, p)|` below [`INVARIANCE_TOL`].
pub fn expansion_factor(s: &TwistorSection, p: &SpherePoint) -> Result<Complex64> {
    let value_norm = s.evaluate(p).value().norm();
    if value_norm > INVARIANCE_TOL {
        return Err(Error::NonVanishingSection { value_norm });
    }
    Ok(s.chart_derivative(p))
}
