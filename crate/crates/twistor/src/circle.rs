//! The imaginary multiplicative group in circular coordinates.
//!
//! A point is a pair of complex numbers `(x, y)` with `x^2 + y^2 = 1`.
//! The exponential `exp_perp(theta) = (cos 2*pi*theta, sin 2*pi*theta)` has
//! kernel `Z`, and `theta` is called a circular logarithm of its image point.
//!
//! The construction itself never chooses a square root of -1. Computationally
//! we fix one identification once and for all: a point `(x, y)` corresponds to
//! the multiplicative coordinate `z = x + i*y` where `i` is the imaginary unit
//! of `Complex64`. Choice-independence then becomes a testable statement:
//! negating `y` inverts the group element and negates circular logarithms
//! modulo `Z`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the unit relation `x^2 + y^2 = 1`.
pub const UNIT_TOL: f64 = 1e-12;

/// A point of the circle group in circular coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    x: Complex64,
    y: Complex64,
}

impl CirclePoint {
    /// Builds a point, rejecting coordinates that violate the unit relation
    /// beyond [`UNIT_TOL`]. No silent renormalization is performed.
    pub fn new(x: Complex64, y: Complex64) -> Result<Self> {
        let defect = unit_defect(x, y);
        if defect > UNIT_TOL {
            return Err(Error::MalformedCirclePoint { defect });
        }
        Ok(Self { x, y })
    }

    /// The group identity `(1, 0)`.
    pub fn identity() -> Self {
        Self {
            x: Complex64::new(1.0, 0.0),
            y: Complex64::new(0.0, 0.0),
        }
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    /// Residual of the unit relation, `|x^2 + y^2 - 1|`.
    pub fn unit_defect(&self) -> f64 {
        unit_defect(self.x, self.y)
    }

    /// Group law in circular coordinates. Abelian, with identity `(1, 0)`.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            x: self.x * other.x - self.y * other.y,
            y: self.x * other.y + self.y * other.x,
        }
    }

    /// The group inverse `(x, -y)`.
    ///
    /// Negating `y` is also the effect of the opposite choice of imaginary
    /// unit, so this doubles as the choice-conjugation involution.
    pub fn inverse(&self) -> Self {
        Self {
            x: self.x,
            y: -self.y,
        }
    }

    /// The multiplicative coordinate `x + i*y` under the fixed identification.
    pub fn multiplicative_coord(&self) -> Complex64 {
        self.x + Complex64::i() * self.y
    }

    /// Coordinate-wise distance to another point.
    pub fn dist(&self, other: &Self) -> f64 {
        ((self.x - other.x).norm_sqr() + (self.y - other.y).norm_sqr()).sqrt()
    }

    /// The principal circular logarithm: the unique preimage under
    /// [`exp_perp`] with real part in `[0, 1)`. The full preimage set is
    /// `result + Z`.
    pub fn circular_log(&self) -> Result<CircularLog> {
        let defect = self.unit_defect();
        if defect > UNIT_TOL {
            return Err(Error::MalformedCirclePoint { defect });
        }
        let z = self.multiplicative_coord();
        // z = exp(2*pi*i*theta) so theta = Arg(z)/2pi - i*ln|z|/2pi.
        let mut re = z.arg() / std::f64::consts::TAU;
        if re < 0.0 {
            re += 1.0;
        }
        if re >= 1.0 {
            re = 0.0;
        }
        let im = -z.norm().ln() / std::f64::consts::TAU;
        Ok(CircularLog::new(Complex64::new(re, im)))
    }
}

/// A circular logarithm: a residue-type quantity living in `C`, defined by its
/// image under [`exp_perp`] up to the integer translations `theta + Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularLog {
    theta: Complex64,
}

impl CircularLog {
    pub fn new(theta: Complex64) -> Self {
        Self { theta }
    }

    pub fn theta(&self) -> Complex64 {
        self.theta
    }

    /// Distance to `other` modulo the integer translations.
    pub fn dist_mod_z(&self, other: &Self) -> f64 {
        let d = self.theta - other.theta;
        let frac = d.re - d.re.round();
        (frac * frac + d.im * d.im).sqrt()
    }
}

/// The circle exponential `theta -> (cos 2*pi*theta, sin 2*pi*theta)`.
///
/// Defined on the whole complex plane and periodic with period 1.
pub fn exp_perp(theta: Complex64) -> CirclePoint {
    let w = theta * std::f64::consts::TAU;
    CirclePoint {
        x: w.cos(),
        y: w.sin(),
    }
}

fn unit_defect(x: Complex64, y: Complex64) -> f64 {
    (x * x + y * y - Complex64::new(1.0, 0.0)).norm()
}
