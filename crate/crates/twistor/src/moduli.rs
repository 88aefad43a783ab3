//! The explicit moduli model for the projective line with two punctures:
//! two affine charts `(lambda, alpha)` glued over `lambda != 0` by
//! `(lambda, alpha) -> (1/lambda, -alpha/lambda^2)`, carrying the monodromy
//! map, the involutions `C`, `D`, `N`, `sigma`, and the integer gauge action.
//!
//! The two charts are kept explicit rather than canonicalized: the gluing map
//! is the central object here and stays a testable function.

use num_complex::Complex64;

use crate::circle::{exp_perp, CirclePoint};
use crate::error::{Error, Result};
use crate::sphere::SpherePoint;
use crate::tate::InvariantSection;

/// Single equivalence epsilon for the integrality test in
/// [`HodPoint::gauge_equivalent`] and for lambda comparison.
pub const GAUGE_TOL: f64 = 1e-9;

/// Which of the two glued charts a point is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliChart {
    /// The chart of the original variety; coordinate pair `(lambda, alpha)`.
    Standard,
    /// The chart of the conjugate variety; coordinate pair `(mu, beta)`.
    Conjugate,
}

impl ModuliChart {
    pub fn other(self) -> ModuliChart {
        match self {
            ModuliChart::Standard => ModuliChart::Conjugate,
            ModuliChart::Conjugate => ModuliChart::Standard,
        }
    }
}

/// A point of the glued moduli space, in one of its two charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HodPoint {
    pub chart: ModuliChart,
    pub lambda: Complex64,
    pub alpha: Complex64,
}

impl HodPoint {
    pub fn standard(lambda: Complex64, alpha: Complex64) -> Self {
        Self {
            chart: ModuliChart::Standard,
            lambda,
            alpha,
        }
    }

    pub fn conjugate_chart(lambda: Complex64, alpha: Complex64) -> Self {
        Self {
            chart: ModuliChart::Conjugate,
            lambda,
            alpha,
        }
    }

    /// The underlying point of the twistor line. A conjugate-chart coordinate
    /// `mu` sits over the point with standard coordinate `1/mu`.
    pub fn base_point(&self) -> SpherePoint {
        match self.chart {
            ModuliChart::Standard => SpherePoint::from_standard(self.lambda),
            ModuliChart::Conjugate => SpherePoint::from_infinity(self.lambda),
        }
    }

    /// The gluing map `(lambda, alpha) -> (1/lambda, -alpha/lambda^2)` into
    /// the other chart. Applying the same formula from the other chart
    /// returns the original point.
    pub fn deligne_glue(&self) -> Result<Self> {
        if self.lambda.norm() == 0.0 {
            return Err(Error::NotInGluingLocus);
        }
        let inv = self.lambda.inv();
        Ok(Self {
            chart: self.chart.other(),
            lambda: inv,
            alpha: -inv * inv * self.alpha,
        })
    }

    /// Local monodromy around the origin: `exp_perp(alpha / lambda)` in the
    /// standard chart. A conjugate-chart point is carried through the gluing
    /// first, which inverts the generator, so it yields
    /// `exp_perp(-alpha / lambda)` in its own coordinates.
    pub fn monodromy(&self) -> Result<CirclePoint> {
        if self.lambda.norm() == 0.0 {
            return Err(Error::HiggsFiberMonodromy);
        }
        let theta = self.alpha / self.lambda;
        Ok(match self.chart {
            ModuliChart::Standard => exp_perp(theta),
            ModuliChart::Conjugate => exp_perp(-theta),
        })
    }

    /// The duality involution `D: (lambda, alpha) -> (lambda, -alpha)`,
    /// the same formula in either chart.
    pub fn involution_d(&self) -> Self {
        Self {
            alpha: -self.alpha,
            ..*self
        }
    }

    /// The sign involution `N: (lambda, alpha) -> (-lambda, -alpha)`,
    /// the same formula in either chart.
    pub fn involution_n(&self) -> Self {
        Self {
            lambda: -self.lambda,
            alpha: -self.alpha,
            ..*self
        }
    }

    /// The conjugation involution `C: (lambda, alpha) -> (conj(lambda),
    /// conj(alpha))` into the other chart. Total: no gluing needed.
    pub fn involution_c(&self) -> Self {
        Self {
            chart: self.chart.other(),
            lambda: self.lambda.conj(),
            alpha: self.alpha.conj(),
        }
    }

    /// The antipodal involution `sigma = C o D o N`. Within one chart and for
    /// invertible lambda it reads
    /// `(lambda, alpha) -> (-1/conj(lambda), -conj(alpha)/conj(lambda)^2)`;
    /// expressed into the other chart it is total:
    /// `(lambda, alpha) -> (-conj(lambda), conj(alpha))`.
    pub fn involution_sigma(&self) -> Self {
        Self {
            chart: self.chart.other(),
            lambda: -self.lambda.conj(),
            alpha: self.alpha.conj(),
        }
    }

    /// The canonical gauge action of `k` in the point's own chart:
    /// `alpha -> alpha - lambda * k`. As an action on the glued space the
    /// group element acts with the opposite sign on the conjugate chart, so
    /// this chart-local formula satisfies
    /// `glue(gauge(p, k)) = gauge(glue(p), -k)`.
    pub fn gauge(&self, k: i64) -> Self {
        Self {
            alpha: self.alpha - self.lambda * k as f64,
            ..*self
        }
    }

    /// Whether some integer gauge element carries `self` to `other`. The two
    /// points must lie over the same lambda (after expressing `other` in the
    /// chart of `self`); over `lambda = 0` the action degenerates and
    /// equivalence means equality of alpha.
    pub fn gauge_equivalent(&self, other: &Self) -> Result<bool> {
        let other = if other.chart == self.chart {
            *other
        } else {
            other.deligne_glue().map_err(|_| Error::IncomparablePoints)?
        };
        if (self.lambda - other.lambda).norm() > GAUGE_TOL {
            return Err(Error::IncomparablePoints);
        }
        if self.lambda.norm() == 0.0 {
            return Ok((self.alpha - other.alpha).norm() <= GAUGE_TOL);
        }
        let t = (self.alpha - other.alpha) / self.lambda;
        Ok((t.re - t.re.round()).abs() <= GAUGE_TOL && t.im.abs() <= GAUGE_TOL)
    }

    /// Equality up to the chart identification.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let other = if other.chart == self.chart {
            *other
        } else {
            match other.deligne_glue() {
                Ok(p) => p,
                Err(_) => return false,
            }
        };
        (self.lambda - other.lambda).norm() <= tol && (self.alpha - other.alpha).norm() <= tol
    }
}

/// The graph point of an invariant section at `lambda`: an invariant section
/// `(a, alpha)` corresponds to the standard-chart section
/// `lambda -> (lambda, alpha - a*lambda - conj(alpha)*lambda^2)`.
pub fn section_point(s: &InvariantSection, lambda: Complex64) -> HodPoint {
    HodPoint::standard(lambda, s.residue_at(lambda))
}

/// The graph point of an invariant section in the conjugate chart at `mu`:
/// the closure of the glued graph, `(mu, -mu^2 P(1/mu))`.
pub fn section_point_conjugate(s: &InvariantSection, mu: Complex64) -> HodPoint {
    let t = s.embed();
    HodPoint::conjugate_chart(mu, t.eval_infinity(mu))
}

/// The de Rham coordinates of an invariant section: the weight/residue pair
/// at `lambda = 1`, namely `(a + alpha + conj(alpha), alpha - conj(alpha) - a)`.
pub fn higgs_to_derham(s: &InvariantSection) -> (f64, Complex64) {
    s.coords_at(Complex64::new(1.0, 0.0))
}
