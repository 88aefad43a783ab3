//! The twistor line: `P^1` in two affine charts glued along `mu = 1/lambda`,
//! with the antipodal involution `lambda -> -1/conj(lambda)` and the group of
//! complex automorphisms commuting with it.
//!
//! Points are stored canonically: in the standard chart while the coordinate
//! has modulus at most 1, in the infinity chart otherwise. The intertwining
//! automorphism group is parameterized by unit pairs `(u, v)` acting as
//! `lambda -> (u*lambda + v) / (-conj(v)*lambda + conj(u))`, with `(u, v)` and
//! `(-u, -v)` giving the same map.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on the relation `|u|^2 + |v|^2 = 1`.
pub const DET_TOL: f64 = 1e-12;

/// Which affine chart a canonical coordinate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Coordinate `lambda`; contains 0.
    Standard,
    /// Coordinate `mu = 1/lambda`; contains the point at infinity as `mu = 0`.
    Infinity,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::Standard => Chart::Infinity,
            Chart::Infinity => Chart::Standard,
        }
    }
}

/// A point of the twistor line in canonical chart form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    chart: Chart,
    coord: Complex64,
}

impl SpherePoint {
    /// The point with standard coordinate `lambda`, canonicalized.
    pub fn from_standard(lambda: Complex64) -> Self {
        if lambda.norm() <= 1.0 {
            Self {
                chart: Chart::Standard,
                coord: lambda,
            }
        } else {
            Self {
                chart: Chart::Infinity,
                coord: lambda.inv(),
            }
        }
    }

    /// The point with infinity-chart coordinate `mu`, canonicalized.
    /// Ties at modulus 1 resolve to the standard chart.
    pub fn from_infinity(mu: Complex64) -> Self {
        if mu.norm() >= 1.0 {
            Self {
                chart: Chart::Standard,
                coord: mu.inv(),
            }
        } else {
            Self {
                chart: Chart::Infinity,
                coord: mu,
            }
        }
    }

    /// The point in the given chart with the given coordinate.
    pub fn from_chart(chart: Chart, coord: Complex64) -> Self {
        match chart {
            Chart::Standard => Self::from_standard(coord),
            Chart::Infinity => Self::from_infinity(coord),
        }
    }

    /// Homogeneous coordinates `[z0 : z1]` with `lambda = z0 / z1`.
    /// Never both zero; the returned pair has max modulus 1.
    pub fn from_homogeneous(z0: Complex64, z1: Complex64) -> Self {
        if z0.norm() <= z1.norm() {
            Self {
                chart: Chart::Standard,
                coord: z0 / z1,
            }
        } else {
            Self {
                chart: Chart::Infinity,
                coord: z1 / z0,
            }
        }
    }

    pub fn zero() -> Self {
        Self::from_standard(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::from_standard(Complex64::new(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        Self {
            chart: Chart::Infinity,
            coord: Complex64::new(0.0, 0.0),
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Coordinate in the canonical chart; always of modulus at most 1.
    pub fn coord(&self) -> Complex64 {
        self.coord
    }

    pub fn is_infinity(&self) -> bool {
        self.chart == Chart::Infinity && self.coord.norm() == 0.0
    }

    /// The standard-chart coordinate, or `None` for the point at infinity.
    pub fn standard_coord(&self) -> Option<Complex64> {
        match self.chart {
            Chart::Standard => Some(self.coord),
            Chart::Infinity => {
                if self.is_infinity() {
                    None
                } else {
                    Some(self.coord.inv())
                }
            }
        }
    }

    /// Homogeneous coordinates `(z0, z1)` with `lambda = z0 / z1`.
    pub fn to_homogeneous(&self) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match self.chart {
            Chart::Standard => (self.coord, one),
            Chart::Infinity => (one, self.coord),
        }
    }

    /// The antipodal involution `lambda -> -1/conj(lambda)`, exchanging 0 and
    /// infinity. Involutive and fixed-point free.
    pub fn antipode(&self) -> Self {
        // In canonical coordinates the antipode swaps charts and sends the
        // coordinate c to -conj(c).
        Self::from_chart(self.chart.other(), -self.coord.conj())
    }

    /// Chordal distance in `[0, 1]`, independent of chart representation.
    pub fn dist(&self, other: &Self) -> f64 {
        let (a0, a1) = self.to_homogeneous();
        let (b0, b1) = other.to_homogeneous();
        let cross = (a0 * b1 - a1 * b0).norm();
        let na = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        let nb = (b0.norm_sqr() + b1.norm_sqr()).sqrt();
        cross / (na * nb)
    }
}

/// A fractional-linear automorphism of the twistor line commuting with the
/// antipodal involution: `lambda -> (u*lambda + v) / (-conj(v)*lambda + conj(u))`
/// with `|u|^2 + |v|^2 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct MoebiusMap {
    u: Complex64,
    v: Complex64,
}

impl MoebiusMap {
    /// Builds a map, rejecting pairs violating `|u|^2 + |v|^2 = 1` beyond
    /// [`DET_TOL`]. The representative sign is canonicalized: the first
    /// nonzero of `(u, v)` gets nonnegative real part (nonnegative imaginary
    /// part on ties).
    pub fn new(u: Complex64, v: Complex64) -> Result<Self> {
        let defect = (u.norm_sqr() + v.norm_sqr() - 1.0).abs();
        if defect > DET_TOL {
            return Err(Error::MalformedMoebiusMap { defect });
        }
        Ok(Self::canonical(u, v))
    }

    fn canonical(u: Complex64, v: Complex64) -> Self {
        let anchor = if u.norm() != 0.0 { u } else { v };
        let flip = anchor.re < 0.0 || (anchor.re == 0.0 && anchor.im < 0.0);
        if flip {
            Self { u: -u, v: -v }
        } else {
            Self { u, v }
        }
    }

    pub fn identity() -> Self {
        Self {
            u: Complex64::new(1.0, 0.0),
            v: Complex64::new(0.0, 0.0),
        }
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    /// Applies the map, handled in homogeneous coordinates so the pole of the
    /// standard-chart formula needs no special case.
    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let (z0, z1) = p.to_homogeneous();
        SpherePoint::from_homogeneous(
            self.u * z0 + self.v * z1,
            -self.v.conj() * z0 + self.u.conj() * z1,
        )
    }

    /// Composition `self` after `other`, via 2x2 unitary multiplication.
    pub fn compose(&self, other: &Self) -> Self {
        Self::canonical(
            self.u * other.u - self.v * other.v.conj(),
            self.u * other.v + self.v * other.u.conj(),
        )
    }

    /// The inverse map `(conj(u), -v)`.
    pub fn inverse(&self) -> Self {
        Self::canonical(self.u.conj(), -self.v)
    }

    /// Distance between maps as projective unit pairs, insensitive to the
    /// representative sign.
    pub fn dist(&self, other: &Self) -> f64 {
        let d = |a: &Self, b: &Self| ((a.u - b.u).norm_sqr() + (a.v - b.v).norm_sqr()).sqrt();
        let neg = Self {
            u: -other.u,
            v: -other.v,
        };
        d(self, other).min(d(self, &neg))
    }

    /// Uniformly random map (Haar measure on unit pairs), by normalizing a
    /// uniform sample from the 4-ball.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let n2 = g.iter().map(|t| t * t).sum::<f64>();
            if n2 > 1e-6 && n2 <= 1.0 {
                let n = n2.sqrt();
                return Self::canonical(
                    Complex64::new(g[0] / n, g[1] / n),
                    Complex64::new(g[2] / n, g[3] / n),
                );
            }
        }
    }
}
