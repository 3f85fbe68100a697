//! Homology of two consecutive maps, with explicit cycle representatives.
//!
//! The basic operation takes `d_in: A -> B` and `d_out: B -> C` with
//! `d_out * d_in = 0` and computes `ker(d_out) / im(d_in)` together with a
//! generating set of cycles and a coordinate map `class_of` for arbitrary
//! cycles.  A generalized form allows `B` and `C` to be presented modules
//! (free cover plus relation columns), which is what tensoring a complex
//! with a quotient module produces.
//!
//! Over the integers the result is reported as free rank plus a torsion
//! divisibility chain; over a field torsion is always empty.

use crate::matrix::{ExactMatrix, LiftStrategy};
use crate::ring::{BaseRing, Scalar};
use num_bigint::BigInt;
use num_traits::One;

/// Isomorphism type of a finitely generated module over the base ring:
/// free rank plus invariant factors `d_1 | d_2 | ...`, each `>= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleInvariants {
    pub fn free(rank: usize) -> Self {
        ModuleInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl std::fmt::Display for ModuleInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "free^{}", self.free_rank)?;
        for t in &self.torsion {
            write!(f, " + Z/{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Classifier {
    /// Integer case: data from the Smith form of the coordinate matrix.
    Integer {
        u: ExactMatrix,
        /// full diagonal, one entry per kernel coordinate
        diag: Vec<BigInt>,
        /// kernel-coordinate positions of the chosen generators,
        /// free generators first, then torsion generators
        positions: Vec<usize>,
    },
    /// Field case: canonical echelon basis of the image subspace.
    Field {
        image_ech: ExactMatrix,
        image_pivot_rows: Vec<usize>,
        free_rows: Vec<usize>,
    },
}

/// A computed subquotient `ker(d_out) / im(d_in)` remembering enough to
/// classify arbitrary cycles.
#[derive(Debug, Clone)]
pub struct Homology {
    ring: BaseRing,
    ambient_dim: usize,
    pub invariants: ModuleInvariants,
    /// Columns are cycles in ambient coordinates whose classes generate:
    /// free generators first, then one generator per torsion factor.
    pub cycle_basis: ExactMatrix,
    /// Basis of the cycle lattice (or cycle space) in ambient coordinates.
    kernel: ExactMatrix,
    classifier: Classifier,
}

impl Homology {
    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.invariants.free_rank
    }

    pub fn generator_count(&self) -> usize {
        self.invariants.free_rank + self.invariants.torsion.len()
    }

    pub fn kernel_basis(&self) -> &ExactMatrix {
        &self.kernel
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_trivial()
    }

    /// Coordinates of the class of a cycle in the chosen generators, torsion
    /// coordinates normalized to `[0, d_i)`.  Faults when `v` is not a cycle:
    /// that is a caller bug, not a data condition.
    pub fn class_of(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient_dim, "cycle has wrong ambient dimension");
        let y = self
            .kernel
            .solve_in_image(v, LiftStrategy::Primary)
            .expect("class_of called on a vector that is not a cycle");
        match &self.classifier {
            Classifier::Integer { u, diag, positions } => {
                let z = u.apply(&y);
                positions
                    .iter()
                    .map(|&p| {
                        let d = &diag[p];
                        let val = z[p].expect_int();
                        if d.is_one() {
                            unreachable!("trivial factors are never generator positions")
                        } else if d == &BigInt::from(0) {
                            z[p].clone()
                        } else {
                            Scalar::Int(num_integer::Integer::mod_floor(val, d))
                        }
                    })
                    .collect()
            }
            Classifier::Field { image_ech, image_pivot_rows, free_rows } => {
                let mut y = y;
                for (col, &prow) in image_pivot_rows.iter().enumerate() {
                    let c = y[prow].clone();
                    if self.ring.is_zero(&c) {
                        continue;
                    }
                    for i in 0..y.len() {
                        let e = image_ech.get(i, col);
                        if !self.ring.is_zero(&e) {
                            let t = self.ring.mul(&c, &e);
                            y[i] = self.ring.sub(&y[i], &t);
                        }
                    }
                }
                for &prow in image_pivot_rows {
                    debug_assert!(self.ring.is_zero(&y[prow]));
                }
                free_rows.iter().map(|&r| y[r].clone()).collect()
            }
        }
    }

    /// True when the class of `v` is zero.
    pub fn is_boundary(&self, v: &[Scalar]) -> bool {
        self.class_of(v).iter().all(|c| self.ring.is_zero(c))
    }
}

/// Homology at the middle of `A --d_in--> B --d_out--> C` with `B`, `C` free.
pub fn subquotient_homology(d_in: &ExactMatrix, d_out: &ExactMatrix) -> Homology {
    let ring = d_in.ring();
    let b = d_in.rows();
    presented_homology(
        d_in,
        d_out,
        &ExactMatrix::zero(ring, b, 0),
        &ExactMatrix::zero(ring, d_out.rows(), 0),
    )
}

/// Homology at the middle of a complex of presented modules.  `rel_mid` and
/// `rel_out` are relation columns of the middle and outgoing modules on their
/// free covers; cycles are vectors whose image under `d_out` lies in the
/// relation span, and boundaries include the relations of the middle module.
pub fn presented_homology(
    d_in: &ExactMatrix,
    d_out: &ExactMatrix,
    rel_mid: &ExactMatrix,
    rel_out: &ExactMatrix,
) -> Homology {
    let ring = d_in.ring();
    assert_eq!(d_out.ring(), ring);
    let b = d_in.rows();
    assert_eq!(d_out.cols(), b, "d_out and d_in are not composable");
    assert_eq!(rel_mid.rows(), b, "rel_mid lives on the middle cover");
    assert_eq!(rel_out.rows(), d_out.rows(), "rel_out lives on the outgoing cover");

    // caller-bug guards: the composite and the middle relations must die in
    // the outgoing presented module
    let composite = d_out.mul(d_in);
    for j in 0..composite.cols() {
        let col = composite.column(j);
        assert!(
            vanishes_in_presented(&col, rel_out),
            "d_out * d_in is nonzero modulo the outgoing relations (column {j})"
        );
    }
    let rel_image = d_out.mul(rel_mid);
    for j in 0..rel_image.cols() {
        let col = rel_image.column(j);
        assert!(
            vanishes_in_presented(&col, rel_out),
            "middle relations do not map into outgoing relations (column {j})"
        );
    }

    // cycle lattice: preimage of span(rel_out) under d_out
    let kernel = if rel_out.cols() == 0 {
        d_out.kernel_basis()
    } else {
        let combined = d_out.hstack(rel_out).kernel_basis();
        let projected = combined.top_rows(b);
        let ech = projected.column_echelon();
        let keep: Vec<usize> = (0..ech.pivots.len()).collect();
        ech.h.select_columns(&keep)
    };
    let kappa = kernel.cols();

    // boundary coordinates inside the cycle lattice
    let bound = d_in.hstack(rel_mid);
    let mut coords = ExactMatrix::zero(ring, kappa, bound.cols());
    for j in 0..bound.cols() {
        let col = bound.column(j);
        let y = kernel
            .solve_in_image(&col, LiftStrategy::Primary)
            .expect("boundary column is not a cycle; the input is not a complex");
        coords.set_column(j, &y);
    }

    if ring == BaseRing::Integers {
        let snf = coords.smith_normal_form();
        let mut diag = snf.diagonal();
        diag.resize(kappa, BigInt::from(0));
        let diag: Vec<BigInt> = diag.into_iter().map(|d| d).collect();
        let free_pos: Vec<usize> = (0..kappa).filter(|&i| diag[i] == BigInt::from(0)).collect();
        let tors_pos: Vec<usize> =
            (0..kappa).filter(|&i| diag[i] > BigInt::one()).collect();
        let mut positions = free_pos.clone();
        positions.extend(tors_pos.iter().copied());
        let torsion: Vec<BigInt> = tors_pos.iter().map(|&i| diag[i].clone()).collect();
        let invariants = ModuleInvariants { free_rank: free_pos.len(), torsion };
        let gen_cols = snf.u_inv.select_columns(&positions);
        let cycle_basis = kernel.mul(&gen_cols);
        Homology {
            ring,
            ambient_dim: b,
            invariants,
            cycle_basis,
            kernel,
            classifier: Classifier::Integer { u: snf.u, diag, positions },
        }
    } else {
        let ech = coords.column_echelon();
        let r = ech.pivots.len();
        let keep: Vec<usize> = (0..r).collect();
        let image_ech = ech.h.select_columns(&keep);
        let image_pivot_rows = ech.pivots.clone();
        let free_rows: Vec<usize> =
            (0..kappa).filter(|i| !image_pivot_rows.contains(i)).collect();
        let invariants = ModuleInvariants::free(free_rows.len());
        let cycle_basis = kernel.select_columns(&free_rows);
        Homology {
            ring,
            ambient_dim: b,
            invariants,
            cycle_basis,
            kernel,
            classifier: Classifier::Field { image_ech, image_pivot_rows, free_rows },
        }
    }
}

/// Whether `v` is zero in the module presented by the relation columns.
pub fn vanishes_in_presented(v: &[Scalar], relations: &ExactMatrix) -> bool {
    let ring = relations.ring();
    if relations.cols() == 0 {
        return v.iter().all(|x| ring.is_zero(x));
    }
    relations.solve_in_image(v, LiftStrategy::Primary).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    #[test]
    fn z_mod_2_subquotient() {
        // Z --(2,0)^T--> Z^2 --(0,3)--> Z
        let d_in = ExactMatrix::from_rows_i64(z(), &[&[2], &[0]]);
        let d_out = ExactMatrix::from_rows_i64(z(), &[&[0, 3]]);
        let h = subquotient_homology(&d_in, &d_out);
        assert_eq!(h.invariants.free_rank, 0);
        assert_eq!(h.invariants.torsion, vec![BigInt::from(2)]);
        assert_eq!(h.cycle_basis.cols(), 1);
        // the generator is (±1, 0)
        let g = h.cycle_basis.column(0);
        assert_eq!(g[1], z().zero());
        assert_eq!(z().abs_bigint(&g[0]), BigInt::one());
    }

    #[test]
    fn classes_of_generators_are_unit_vectors() {
        let d_in = ExactMatrix::from_rows_i64(z(), &[&[2, 0], &[0, 0], &[0, 3]]);
        let d_out = ExactMatrix::zero(z(), 0, 3);
        let h = subquotient_homology(&d_in, &d_out);
        for i in 0..h.generator_count() {
            let col = h.cycle_basis.column(i);
            let cls = h.class_of(&col);
            for (j, c) in cls.iter().enumerate() {
                if j == i {
                    assert!(z().is_one(c), "generator {i} classifies to {cls:?}");
                } else {
                    assert!(z().is_zero(c));
                }
            }
        }
    }

    #[test]
    fn boundaries_classify_to_zero() {
        let d_in = ExactMatrix::from_rows_i64(z(), &[&[2, 1], &[4, -3], &[0, 5]]);
        let d_out = ExactMatrix::zero(z(), 0, 3);
        let h = subquotient_homology(&d_in, &d_out);
        for j in 0..2 {
            assert!(h.is_boundary(&d_in.column(j)));
        }
    }

    #[test]
    #[should_panic(expected = "not a cycle")]
    fn class_of_faults_on_non_cycle() {
        let d_in = ExactMatrix::zero(z(), 2, 0);
        let d_out = ExactMatrix::from_rows_i64(z(), &[&[1, 0]]);
        let h = subquotient_homology(&d_in, &d_out);
        let v = vec![Scalar::Int(BigInt::one()), Scalar::Int(BigInt::one())];
        h.class_of(&v);
    }

    #[test]
    fn rational_rank_is_nullity_minus_image_rank() {
        let q = BaseRing::Rationals;
        let d_in = ExactMatrix::from_rows_i64(q, &[&[1, 2], &[2, 4], &[0, 0]]);
        let d_out = ExactMatrix::from_rows_i64(q, &[&[0, 0, 1]]);
        let h = subquotient_homology(&d_in, &d_out);
        // kernel of d_out is 2-dimensional, image of d_in is 1-dimensional
        assert_eq!(h.invariants, ModuleInvariants::free(1));
        assert!(h.invariants.torsion.is_empty());
    }

    #[test]
    fn presented_quotient_sees_relations() {
        // middle module Z^2 / (second generator), complex has zero maps:
        // homology is the presented module itself, i.e. Z
        let d_in = ExactMatrix::zero(z(), 2, 0);
        let d_out = ExactMatrix::zero(z(), 0, 2);
        let rel_mid = ExactMatrix::from_rows_i64(z(), &[&[0], &[1]]);
        let rel_out = ExactMatrix::zero(z(), 0, 0);
        let h = presented_homology(&d_in, &d_out, &rel_mid, &rel_out);
        assert_eq!(h.invariants, ModuleInvariants::free(1));
    }

    #[test]
    fn random_pairs_match_dense_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..60 {
            let b = rng.gen_range(1..=8);
            let c = rng.gen_range(0..=6);
            let mut d_out = ExactMatrix::zero(z(), c, b);
            for i in 0..c {
                for j in 0..b {
                    if rng.gen_bool(0.5) {
                        d_out.set(i, j, z().from_i64(rng.gen_range(-9..=9)));
                    }
                }
            }
            let kernel = d_out.kernel_basis();
            let a = rng.gen_range(0..=6);
            let mut mix = ExactMatrix::zero(z(), kernel.cols(), a);
            for i in 0..kernel.cols() {
                for j in 0..a {
                    if rng.gen_bool(0.6) {
                        mix.set(i, j, z().from_i64(rng.gen_range(-4..=4)));
                    }
                }
            }
            let d_in = kernel.mul(&mix);

            let h = subquotient_homology(&d_in, &d_out);

            let dense_in: reference::DenseInt = (0..d_in.rows())
                .map(|i| (0..d_in.cols()).map(|j| d_in.get(i, j).expect_int().clone()).collect())
                .collect();
            let dense_out: reference::DenseInt = (0..d_out.rows())
                .map(|i| (0..d_out.cols()).map(|j| d_out.get(i, j).expect_int().clone()).collect())
                .collect();
            let (free, torsion) =
                reference::dense_subquotient_invariants(&dense_in, &dense_out, b);
            assert_eq!(h.invariants.free_rank, free, "trial {trial}");
            assert_eq!(h.invariants.torsion, torsion, "trial {trial}");
        }
    }
}
