//! Exactness checking for chains of finitely generated abelian groups, and
//! the construction of the integral rows of the localization diagrams from a
//! geometry descriptor.

use num_bigint::BigInt;
use num_traits::One;

use super::snf::{col_kernel, column_space_basis, in_column_lattice, lattices_equal, IntMat};
use super::{quotient_group, FgAbGroup, GeometryDescriptor};
use crate::error::{Error, Result};

/// A presentation `Z^generators / colspace(relations)` of a finitely
/// generated abelian group.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relations: IntMat,
}

impl GroupPresentation {
    pub fn new(generators: usize, relations: IntMat) -> Self {
        assert_eq!(relations.rows(), generators, "relation rows mismatch");
        Self {
            generators,
            relations,
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMat::zeros(rank, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::from_quotient(self.generators, &self.relations)
    }
}

impl From<&FgAbGroup> for GroupPresentation {
    fn from(g: &FgAbGroup) -> Self {
        Self::new(g.generators(), g.relation_matrix())
    }
}

/// A homomorphism between presented groups, given by an integer matrix on
/// generators that must carry source relations into target relations.
#[derive(Debug, Clone)]
pub struct LatticeMap {
    pub matrix: IntMat,
}

impl LatticeMap {
    pub fn new(matrix: IntMat) -> Self {
        Self { matrix }
    }

    /// Checks well-definedness against the given presentations.
    pub fn validate(&self, source: &GroupPresentation, target: &GroupPresentation) -> Result<()> {
        if self.matrix.cols() != source.generators || self.matrix.rows() != target.generators {
            return Err(Error::ChainShapeMismatch(format!(
                "map is {}x{} but source has {} and target {} generators",
                self.matrix.rows(),
                self.matrix.cols(),
                source.generators,
                target.generators
            )));
        }
        let image_of_relations = self.matrix.mul(&source.relations);
        for j in 0..image_of_relations.cols() {
            if !in_column_lattice(&target.relations, &image_of_relations.column(j)) {
                return Err(Error::IllDefinedMap { column: j });
            }
        }
        Ok(())
    }
}

/// Verdict at one interior joint of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointVerdict {
    Exact,
    /// The composite of the adjacent maps is not zero: not even a complex.
    NotComplex,
    /// A complex with nontrivial homology at this joint.
    Homology(FgAbGroup),
}

impl std::fmt::Display for JointVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JointVerdict::Exact => write!(f, "exact"),
            JointVerdict::NotComplex => write!(f, "not a complex"),
            JointVerdict::Homology(h) => write!(f, "homology {h}"),
        }
    }
}

/// Per-joint verdicts for a chain; joint `i` refers to the group at index
/// `i + 1` of the chain, the target of map `i` and source of map `i + 1`.
#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub joints: Vec<JointVerdict>,
}

impl ExactnessReport {
    pub fn all_exact(&self) -> bool {
        self.joints.iter().all(|j| *j == JointVerdict::Exact)
    }
}

/// Verifies `image = kernel` at every interior joint of the chain
/// `groups[0] -> groups[1] -> ...`, reporting the homology when they differ.
pub fn check_exact(groups: &[GroupPresentation], maps: &[LatticeMap]) -> Result<ExactnessReport> {
    if groups.len() < 2 || maps.len() + 1 != groups.len() {
        return Err(Error::ChainShapeMismatch(format!(
            "{} groups with {} maps",
            groups.len(),
            maps.len()
        )));
    }
    for (i, map) in maps.iter().enumerate() {
        map.validate(&groups[i], &groups[i + 1])?;
    }

    let mut joints = Vec::new();
    for i in 0..groups.len() - 2 {
        let incoming = &maps[i];
        let outgoing = &maps[i + 1];
        let here = &groups[i + 1];
        let next = &groups[i + 2];

        // Pullback of the image subgroup: incoming columns plus relations.
        let image = incoming.matrix.hcat(&here.relations);

        // Pullback of the kernel: x with outgoing(x) inside the relation
        // lattice of the next group, plus the relations here.
        let stacked = outgoing.matrix.hcat(&next.relations);
        let ker = col_kernel(&stacked);
        let ker_proj = IntMat::from_fn(here.generators, ker.cols(), |r, c| ker[(r, c)].clone());
        let kernel = ker_proj.hcat(&here.relations);

        let verdict = if lattices_equal(&image, &kernel) {
            JointVerdict::Exact
        } else {
            // Image must sit inside the kernel for homology to make sense.
            let composite = outgoing.matrix.mul(&incoming.matrix);
            let is_complex = (0..composite.cols())
                .all(|j| in_column_lattice(&next.relations, &composite.column(j)));
            if !is_complex {
                JointVerdict::NotComplex
            } else {
                let basis = column_space_basis(&kernel);
                JointVerdict::Homology(quotient_group(&basis, &image))
            }
        };
        joints.push(verdict);
    }
    Ok(ExactnessReport { joints })
}

/// A named chain with display names for its groups.
#[derive(Debug, Clone)]
pub struct NamedSequence {
    pub name: &'static str,
    pub group_names: Vec<String>,
    pub groups: Vec<GroupPresentation>,
    pub maps: Vec<LatticeMap>,
}

impl NamedSequence {
    pub fn check(&self) -> Result<ExactnessReport> {
        check_exact(&self.groups, &self.maps)
    }
}

/// Instantiates the integral rows of the localization diagrams for a
/// descriptor:
///
/// * the divisor-class row
///   `0 -> H^1(X) -> H^1(U) -> Z^k -> H^2(X) -> Q -> 0`,
///   where `Q` is the cokernel of the class map (the determined part of
///   `H^2(U)`) and `H^1(U)` is assembled as `H^1(X) + ker(classes)`
///   (the descriptor does not pin the extension, but the kernel is free so
///   the abstract group is forced);
/// * the gauge-kernel row `0 -> Z^b -> Z^k -> NS(X,D) -> 0`;
/// * the saturation row `0 -> NS(X,D) -> NS(X,D)^sat -> NS(U)^tors -> 0`.
///
/// Also enforces the rank bookkeeping `rank H^1(U) = rank H^1(X) + b`.
pub fn descriptor_to_sequences(d: &GeometryDescriptor) -> Result<Vec<NamedSequence>> {
    let mut out = Vec::new();
    let b = super::b_rank(d);
    let k = d.divisor_count;

    let h1x: GroupPresentation = (&d.h1x).into();
    let h2x: GroupPresentation = (&d.h2x).into();
    let class_kernel = d.class_kernel();
    if class_kernel.cols() != b {
        return Err(Error::MalformedDescriptor(format!(
            "class kernel has rank {} but b = {b}",
            class_kernel.cols()
        )));
    }

    // H^1(U) = H^1(X) + ker(classes), with the kernel mapped onto its basis.
    let h1u = GroupPresentation::new(h1x.generators + b, {
        let mut rel = IntMat::zeros(h1x.generators + b, h1x.relations.cols());
        for i in 0..h1x.generators {
            for j in 0..h1x.relations.cols() {
                rel[(i, j)] = h1x.relations[(i, j)].clone();
            }
        }
        rel
    });
    let include_h1x = LatticeMap::new(IntMat::from_fn(
        h1u.generators,
        h1x.generators,
        |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::from(0)
            }
        },
    ));
    let to_gauge = LatticeMap::new(IntMat::from_fn(k, h1u.generators, |i, j| {
        if j < h1x.generators {
            BigInt::from(0)
        } else {
            class_kernel[(i, j - h1x.generators)].clone()
        }
    }));
    let classes = LatticeMap::new(d.divisor_classes.clone());
    // Q presented on the generators of H^2(X) with the image adjoined to the
    // relations; the quotient map is the identity on generators.
    let q = GroupPresentation::new(
        h2x.generators,
        d.divisor_classes.hcat(&h2x.relations),
    );
    let to_q = LatticeMap::new(IntMat::identity(h2x.generators));

    out.push(NamedSequence {
        name: "divisor-class-row",
        group_names: vec![
            "0".into(),
            format!("H1(X) = {}", h1x.group()),
            format!("H1(U) = {}", h1u.group()),
            format!("Z^{k}"),
            format!("H2(X) = {}", h2x.group()),
            format!("Q = {}", q.group()),
            "0".into(),
        ],
        groups: vec![
            GroupPresentation::trivial(),
            h1x,
            h1u,
            GroupPresentation::free(k),
            h2x.clone(),
            q,
            GroupPresentation::trivial(),
        ],
        maps: vec![
            LatticeMap::new(IntMat::zeros(d.h1x.generators(), 0)),
            include_h1x,
            to_gauge,
            classes,
            to_q,
            LatticeMap::new(IntMat::zeros(0, h2x.generators)),
        ],
    });

    // 0 -> Z^b -> Z^k -> NS(X,D) -> 0, with NS presented as Z^k / kernel.
    let ns = GroupPresentation::new(k, class_kernel.clone());
    out.push(NamedSequence {
        name: "gauge-kernel-row",
        group_names: vec![
            "0".into(),
            format!("Z^{b}"),
            format!("Z^{k}"),
            format!("NS(X,D) = {}", ns.group()),
            "0".into(),
        ],
        groups: vec![
            GroupPresentation::trivial(),
            GroupPresentation::free(b),
            GroupPresentation::free(k),
            ns,
            GroupPresentation::trivial(),
        ],
        maps: vec![
            LatticeMap::new(IntMat::zeros(b, 0)),
            LatticeMap::new(class_kernel),
            LatticeMap::new(IntMat::identity(k)),
            LatticeMap::new(IntMat::zeros(0, k)),
        ],
    });

    // 0 -> NS(X,D) -> NS(X,D)^sat -> NS(U)^tors -> 0, everything expressed
    // over the basis of the saturation pullback.
    let data = super::saturation(d);
    let sat_basis = &data.sat_lattice;
    let express = |m: &IntMat| -> Result<IntMat> {
        let mut out = IntMat::zeros(sat_basis.cols(), m.cols());
        for j in 0..m.cols() {
            let x = super::solve_columns(sat_basis, &m.column(j)).ok_or_else(|| {
                Error::MalformedDescriptor("class lattice escapes its saturation".into())
            })?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    };
    let relations_in_sat = express(&d.h2x.relation_matrix())?;
    let ns_gens_in_sat = express(&d.divisor_classes)?;
    let sat_pres = GroupPresentation::new(sat_basis.cols(), relations_in_sat.clone());
    let ns_pres = GroupPresentation::new(k, d.class_kernel());
    let tors_pres = GroupPresentation::new(
        sat_basis.cols(),
        ns_gens_in_sat.hcat(&relations_in_sat),
    );
    out.push(NamedSequence {
        name: "saturation-row",
        group_names: vec![
            "0".into(),
            format!("NS(X,D) = {}", ns_pres.group()),
            format!("NS(X,D)^sat = {}", sat_pres.group()),
            format!("NS(U)^tors = {}", tors_pres.group()),
            "0".into(),
        ],
        groups: vec![
            GroupPresentation::trivial(),
            ns_pres,
            sat_pres,
            tors_pres,
            GroupPresentation::trivial(),
        ],
        maps: vec![
            LatticeMap::new(IntMat::zeros(k, 0)),
            LatticeMap::new(ns_gens_in_sat),
            LatticeMap::new(IntMat::identity(sat_basis.cols())),
            LatticeMap::new(IntMat::zeros(0, sat_basis.cols())),
        ],
    });

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin;

    #[test]
    fn times_one_chain_is_exact() {
        // 0 -> Z --x1--> Z -> 0
        let groups = vec![
            GroupPresentation::trivial(),
            GroupPresentation::free(1),
            GroupPresentation::free(1),
            GroupPresentation::trivial(),
        ];
        let maps = vec![
            LatticeMap::new(IntMat::zeros(1, 0)),
            LatticeMap::new(IntMat::from_rows(&[vec![1]])),
            LatticeMap::new(IntMat::zeros(0, 1)),
        ];
        let report = check_exact(&groups, &maps).unwrap();
        assert!(report.all_exact());
    }

    #[test]
    fn times_two_onto_z_mod_two_is_exact() {
        // 0 -> Z --x2--> Z -> Z/2 -> 0
        let z2 = FgAbGroup::new(0, vec![BigInt::from(2)]).unwrap();
        let groups = vec![
            GroupPresentation::trivial(),
            GroupPresentation::free(1),
            GroupPresentation::free(1),
            (&z2).into(),
            GroupPresentation::trivial(),
        ];
        let maps = vec![
            LatticeMap::new(IntMat::zeros(1, 0)),
            LatticeMap::new(IntMat::from_rows(&[vec![2]])),
            LatticeMap::new(IntMat::from_rows(&[vec![1]])),
            LatticeMap::new(IntMat::zeros(0, 1)),
        ];
        let report = check_exact(&groups, &maps).unwrap();
        assert!(report.all_exact());
    }

    #[test]
    fn detects_homology_and_non_complexes() {
        // 0 -> Z --x4--> Z -> Z/2 -> 0 has homology Z/2 at the second Z.
        let z2 = FgAbGroup::new(0, vec![BigInt::from(2)]).unwrap();
        let groups = vec![
            GroupPresentation::trivial(),
            GroupPresentation::free(1),
            GroupPresentation::free(1),
            (&z2).into(),
            GroupPresentation::trivial(),
        ];
        let maps = vec![
            LatticeMap::new(IntMat::zeros(1, 0)),
            LatticeMap::new(IntMat::from_rows(&[vec![4]])),
            LatticeMap::new(IntMat::from_rows(&[vec![1]])),
            LatticeMap::new(IntMat::zeros(0, 1)),
        ];
        let report = check_exact(&groups, &maps).unwrap();
        assert_eq!(report.joints[0], JointVerdict::Exact);
        assert_eq!(report.joints[1], JointVerdict::Homology(z2.clone()));

        // Z --x1--> Z --x1--> Z is not even a complex in the middle.
        let groups = vec![
            GroupPresentation::free(1),
            GroupPresentation::free(1),
            GroupPresentation::free(1),
        ];
        let maps = vec![
            LatticeMap::new(IntMat::from_rows(&[vec![1]])),
            LatticeMap::new(IntMat::from_rows(&[vec![1]])),
        ];
        let report = check_exact(&groups, &maps).unwrap();
        assert_eq!(report.joints[0], JointVerdict::NotComplex);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let groups = vec![GroupPresentation::free(1), GroupPresentation::free(1)];
        let maps = vec![LatticeMap::new(IntMat::from_rows(&[vec![1, 1]]))];
        assert!(matches!(
            check_exact(&groups, &maps),
            Err(Error::ChainShapeMismatch(_))
        ));
    }

    #[test]
    fn ill_defined_map_is_reported() {
        // Z/2 -> Z by the identity on generators does not respect relations.
        let z2 = FgAbGroup::new(0, vec![BigInt::from(2)]).unwrap();
        let groups = vec![(&z2).into(), GroupPresentation::free(1)];
        let maps = vec![LatticeMap::new(IntMat::from_rows(&[vec![1]]))];
        assert!(matches!(
            check_exact(&groups, &maps),
            Err(Error::IllDefinedMap { .. })
        ));
    }

    #[test]
    fn builtin_descriptor_sequences_are_exact() {
        for name in builtin::NAMES {
            let d = builtin::by_name(name).unwrap();
            for seq in descriptor_to_sequences(&d).unwrap() {
                let report = seq.check().unwrap();
                assert!(
                    report.all_exact(),
                    "sequence {} of {name}: {:?}",
                    seq.name,
                    report.joints
                );
            }
        }
    }

    #[test]
    fn punctured_curve_row_has_expected_ranks() {
        for (g, k) in [(0usize, 2usize), (1, 1), (2, 3)] {
            let d = builtin::curve(g, k);
            let seqs = descriptor_to_sequences(&d).unwrap();
            let row = &seqs[0];
            assert_eq!(row.groups[1].group(), FgAbGroup::free(2 * g));
            assert_eq!(row.groups[2].group(), FgAbGroup::free(2 * g + k - 1));
            assert_eq!(row.groups[3].group(), FgAbGroup::free(k));
            assert_eq!(row.groups[4].group(), FgAbGroup::free(1));
            assert!(row.groups[5].group().is_trivial());
            // Euler characteristic of the exact row vanishes.
            let chi: i64 = row
                .groups
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    sign * p.group().rank() as i64
                })
                .sum();
            assert_eq!(chi, 0);
        }
    }
}
