//! Integer linear algebra for the weight-two invariants of a pair `(X, D)`:
//! finitely generated abelian groups, divisor-class saturation, the torsion
//! quotient, the kernel rank `b`, and exactness checking for the integral
//! rows of the localization diagrams.
//!
//! Descriptors are abstract lattice data, not varieties; the engine checks
//! internal consistency only.

mod sequences;
mod snf;

pub use sequences::{
    check_exact, descriptor_to_sequences, ExactnessReport, GroupPresentation, JointVerdict,
    LatticeMap, NamedSequence,
};
pub use snf::{
    col_kernel, column_space_basis, in_column_lattice, lattices_equal, saturate_columns,
    smith_normal_form, solve_columns, IntMat, Snf,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A finitely generated abelian group in canonical form: a free rank plus a
/// divisibility chain of elementary divisors `d1 | d2 | ...`, all > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        let ok = torsion.iter().all(|d| *d > BigInt::one())
            && torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        if !ok {
            return Err(Error::InvalidTorsionChain(
                torsion.iter().map(|d| d.to_string()).collect(),
            ));
        }
        Ok(Self { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// The group presented by `Z^ambient / colspace(relations)`: invariant
    /// factors > 1 from the Smith normal form plus the leftover free rank.
    pub fn from_quotient(ambient: usize, relations: &IntMat) -> Self {
        assert_eq!(relations.rows(), ambient, "dimension mismatch");
        let snf = smith_normal_form(relations);
        let torsion: Vec<BigInt> = snf
            .invariant_factors()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        Self {
            rank: ambient - snf.rank,
            torsion,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of generators in the standard presentation (free ones first,
    /// then one per torsion factor).
    pub fn generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// The relation matrix of the standard presentation: `d_j` times the
    /// `(rank + j)`-th generator.
    pub fn relation_matrix(&self) -> IntMat {
        let g = self.generators();
        let mut m = IntMat::zeros(g, self.torsion.len());
        for (j, d) in self.torsion.iter().enumerate() {
            m[(self.rank + j, j)] = d.clone();
        }
        m
    }
}

impl std::fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Finitely generated abelian-group data presenting a pair `(X, D)` for the
/// lattice engine: the divisor count, the first and second cohomology of `X`,
/// and the matrix of divisor classes over the generators of the latter.
#[derive(Debug, Clone)]
pub struct GeometryDescriptor {
    pub divisor_count: usize,
    pub h1x: FgAbGroup,
    pub h2x: FgAbGroup,
    /// Map `Z^k -> H^2(X)`: columns are divisor classes, rows follow the
    /// generators of `h2x` (free rows first, then torsion rows).
    pub divisor_classes: IntMat,
}

impl GeometryDescriptor {
    pub fn new(
        divisor_count: usize,
        h1x: FgAbGroup,
        h2x: FgAbGroup,
        divisor_classes: IntMat,
    ) -> Result<Self> {
        if divisor_classes.cols() != divisor_count {
            return Err(Error::MalformedDescriptor(format!(
                "divisor_classes has {} columns but k = {}",
                divisor_classes.cols(),
                divisor_count
            )));
        }
        if divisor_classes.rows() != h2x.generators() {
            return Err(Error::MalformedDescriptor(format!(
                "divisor_classes has {} rows but h2X has {} generators",
                divisor_classes.rows(),
                h2x.generators()
            )));
        }
        Ok(Self {
            divisor_count,
            h1x,
            h2x,
            divisor_classes,
        })
    }

    /// The free-part rows of the divisor-class matrix: the image of the
    /// classes in cohomology with real coefficients, where torsion dies.
    pub fn free_classes(&self) -> IntMat {
        IntMat::from_fn(self.h2x.rank(), self.divisor_count, |i, j| {
            self.divisor_classes[(i, j)].clone()
        })
    }

    /// Kernel of the divisor-class map into the full group (torsion
    /// congruences included); a free lattice of rank `b`.
    pub fn class_kernel(&self) -> IntMat {
        let k = self.divisor_count;
        let relations = self.h2x.relation_matrix();
        let stacked = self.divisor_classes.hcat(&relations);
        let ker = col_kernel(&stacked);
        // Project kernel vectors to the Z^k part; the projection is
        // injective because the torsion relations are independent columns.
        IntMat::from_fn(k, ker.cols(), |i, j| ker[(i, j)].clone())
    }
}

/// The image of the divisor classes and its saturation, as subgroups of
/// `H^2(X)` together with their pullback lattices over the presentation.
#[derive(Debug, Clone)]
pub struct SaturationData {
    /// `NS(X, D)`: the subgroup generated by the divisor classes.
    pub ns: FgAbGroup,
    /// Its saturation: everything with a multiple inside `NS(X, D)`.
    /// Contains all torsion of `H^2(X)`.
    pub sat: FgAbGroup,
    /// Generators of the pullback of `NS(X, D)` to presentation coordinates.
    pub ns_lattice: IntMat,
    /// Basis of the pullback of the saturation.
    pub sat_lattice: IntMat,
}

/// Computes `NS(X, D)` and its saturation inside `H^2(X)`.
pub fn saturation(d: &GeometryDescriptor) -> SaturationData {
    let relations = d.h2x.relation_matrix();
    let n = d.h2x.generators();
    let r = d.h2x.rank();

    // Pullback of the image subgroup: divisor classes plus the relations.
    let ns_lattice = d.divisor_classes.hcat(&relations);
    let ns = quotient_group(&column_space_basis(&ns_lattice), &relations);

    // Pullback of the saturation: saturate the free projection, then adjoin
    // all torsion coordinates (torsion is killed by a multiple).
    let sat_free = saturate_columns(&d.free_classes());
    let rho = sat_free.cols();
    let m = d.h2x.torsion().len();
    let mut sat_lattice = IntMat::zeros(n, rho + m);
    for j in 0..rho {
        for i in 0..r {
            sat_lattice[(i, j)] = sat_free[(i, j)].clone();
        }
    }
    for j in 0..m {
        sat_lattice[(r + j, rho + j)] = BigInt::one();
    }
    let sat = quotient_group(&sat_lattice, &relations);

    SaturationData {
        ns,
        sat,
        ns_lattice,
        sat_lattice,
    }
}

/// The finite quotient `NS(X, D)^sat / NS(X, D)`, i.e. the torsion of the
/// Neron-Severi group of the complement.
pub fn ns_u_tors(d: &GeometryDescriptor) -> FgAbGroup {
    let data = saturation(d);
    quotient_group(&data.sat_lattice, &data.ns_lattice)
}

/// The number of copies of the Tate structure in the kernel of the
/// divisor-class pairing: `b = k - rank_Q(classes)`.
pub fn b_rank(d: &GeometryDescriptor) -> usize {
    d.divisor_count - d.free_classes().rank()
}

/// The weight-two graded report: `b`, the saturated divisor-class group, the
/// torsion quotient, and the rank bookkeeping for the first cohomology of the
/// complement.
#[derive(Debug, Clone)]
pub struct Grw2Report {
    pub b: usize,
    pub ns: FgAbGroup,
    pub sat: FgAbGroup,
    pub tors: FgAbGroup,
    pub rank_h1x: usize,
    pub rank_h1u: usize,
}

/// Packages the two weight-two exact sequences: the graded piece is an
/// extension of the saturated class group by `b` Tate copies, and modulo the
/// gauge group an extension of the torsion quotient by `b` multiplicative
/// copies.
pub fn grw2(d: &GeometryDescriptor) -> Grw2Report {
    let data = saturation(d);
    let b = b_rank(d);
    Grw2Report {
        b,
        ns: data.ns,
        sat: data.sat,
        tors: ns_u_tors(d),
        rank_h1x: d.h1x.rank(),
        rank_h1u: d.h1x.rank() + b,
    }
}

/// The quotient of the lattice spanned by the columns of `sup` by the
/// sublattice generated by the columns of `sub` (which must lie inside it).
/// `sup` must consist of independent columns.
pub fn quotient_group(sup: &IntMat, sub: &IntMat) -> FgAbGroup {
    let rho = sup.cols();
    let mut coeffs = IntMat::zeros(rho, sub.cols());
    for j in 0..sub.cols() {
        let x = solve_columns(sup, &sub.column(j))
            .expect("sublattice generator outside the ambient lattice");
        for (i, v) in x.into_iter().enumerate() {
            coeffs[(i, j)] = v;
        }
    }
    FgAbGroup::from_quotient(rho, &coeffs)
}

/// The linear identity tying a bundle class to the residues it constrains:
/// the maximal absolute value over free rows of
/// `lambda * zeta + sum_i residues[i] * [D_i]`.
pub fn residue_class_defect(
    d: &GeometryDescriptor,
    zeta: &[i64],
    residues: &[num_complex::Complex64],
    lambda: num_complex::Complex64,
) -> f64 {
    assert_eq!(zeta.len(), d.h2x.rank(), "class length mismatch");
    assert_eq!(residues.len(), d.divisor_count, "residue length mismatch");
    let classes = d.free_classes();
    let mut worst = 0.0f64;
    for row in 0..d.h2x.rank() {
        let mut acc = lambda * zeta[row] as f64;
        for i in 0..d.divisor_count {
            acc += residues[i] * bigint_to_f64(&classes[(row, i)]);
        }
        worst = worst.max(acc.norm());
    }
    worst
}

/// Per-free-row defect of the real class `zeta + sum_i weights[i] * [D_i]`.
pub fn weight_class_defect(d: &GeometryDescriptor, zeta: &[i64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(zeta.len(), d.h2x.rank(), "class length mismatch");
    assert_eq!(weights.len(), d.divisor_count, "weight length mismatch");
    let classes = d.free_classes();
    (0..d.h2x.rank())
        .map(|row| {
            let mut acc = zeta[row] as f64;
            for i in 0..d.divisor_count {
                acc += weights[i] * bigint_to_f64(&classes[(row, i)]);
            }
            acc.abs()
        })
        .collect()
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(if v.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// The built-in descriptors used by the command-line tool and the tests.
pub mod builtin {
    use super::*;

    /// The projective line with two punctures: `h1 = 0`, `h2 = Z`,
    /// both divisor classes equal to the hyperplane class.
    pub fn p1_two_points() -> GeometryDescriptor {
        GeometryDescriptor::new(
            2,
            FgAbGroup::trivial(),
            FgAbGroup::free(1),
            IntMat::from_rows(&[vec![1, 1]]),
        )
        .unwrap()
    }

    /// An elliptic curve with one puncture.
    pub fn elliptic_one_point() -> GeometryDescriptor {
        GeometryDescriptor::new(
            1,
            FgAbGroup::free(2),
            FgAbGroup::free(1),
            IntMat::from_rows(&[vec![1]]),
        )
        .unwrap()
    }

    /// A genus-two curve with three punctures.
    pub fn genus2_k3() -> GeometryDescriptor {
        GeometryDescriptor::new(
            3,
            FgAbGroup::free(4),
            FgAbGroup::free(1),
            IntMat::from_rows(&[vec![1, 1, 1]]),
        )
        .unwrap()
    }

    /// A genus-`g` curve with `k` punctures, classes all equal to the point
    /// class.
    pub fn curve(genus: usize, punctures: usize) -> GeometryDescriptor {
        GeometryDescriptor::new(
            punctures,
            FgAbGroup::free(2 * genus),
            FgAbGroup::free(1),
            IntMat::from_fn(1, punctures, |_, _| BigInt::one()),
        )
        .unwrap()
    }

    /// Index-two image in `Z`: the saturation quotient is `Z/2`.
    pub fn torsion_demo() -> GeometryDescriptor {
        GeometryDescriptor::new(
            1,
            FgAbGroup::trivial(),
            FgAbGroup::free(1),
            IntMat::from_rows(&[vec![2]]),
        )
        .unwrap()
    }

    /// A class pairing a doubled free generator with a torsion generator in
    /// `Z + Z/2`; the saturation picks up the whole torsion factor.
    pub fn torsion_h2() -> GeometryDescriptor {
        GeometryDescriptor::new(
            1,
            FgAbGroup::trivial(),
            FgAbGroup::new(1, vec![BigInt::from(2)]).unwrap(),
            IntMat::from_rows(&[vec![2], vec![1]]),
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Option<GeometryDescriptor> {
        match name {
            "p1-two-points" => Some(p1_two_points()),
            "elliptic-one-point" => Some(elliptic_one_point()),
            "genus2-k3" => Some(genus2_k3()),
            "torsion-demo" => Some(torsion_demo()),
            "torsion-h2" => Some(torsion_h2()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 5] = [
        "p1-two-points",
        "elliptic-one-point",
        "genus2-k3",
        "torsion-demo",
        "torsion-h2",
    ];
}
