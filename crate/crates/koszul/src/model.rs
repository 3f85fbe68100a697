//! The model complex of rank n over the base ring: terms Sym^s(W) (x)
//! Lambda_k(V) in monomial (x) subset bases, differential sum_i f_i (x)
//! d/de_i, its exactness diagonal by diagonal, and the comodule structure
//! of the terms over the exterior coalgebra.
//!
//! Everything here is assembled directly from exponent vectors and index
//! subsets.  It deliberately shares no code with the polynomial-ring side:
//! these matrices are the reference that the Tor-derived maps are compared
//! against, so they have to come from an independent construction.

use crate::exterior::IndexSet;
use crate::homology::subquotient_homology;
use crate::matrix::ExactMatrix;
use crate::report::CheckReport;
use crate::ring::{BaseRing, Scalar};
use num_traits::One;
use std::collections::BTreeMap;

/// Exponent vectors of total degree s over n slots, descending
/// lexicographically; the basis order of Sym^s(W).
pub fn sym_monomials(n: usize, s: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == n - 1 {
            cur[pos] = remaining;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            cur[pos] = e;
            rec(n, pos + 1, remaining - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if s == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; n];
    rec(n, 0, s as u32, &mut cur, &mut out);
    out
}

pub fn sym_rank(n: usize, s: usize) -> usize {
    sym_monomials(n, s).len()
}

/// Rank of the term Sym^s (x) Lambda_k: C(n+s-1, n-1) * C(n, k).
pub fn term_rank(n: usize, s: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    sym_rank(n, s) * num_integer::binomial(n, k)
}

/// The matrix of the differential Sym^s (x) Lambda_k -> Sym^{s+1} (x)
/// Lambda_{k-1}: the entry from (m, T) to (m f_i, T \ i) is (-1)^{pos(i, T)}
/// for each i in T, everything else zero.  Bases are ordered subset-major,
/// monomial-minor.
pub fn model_differential(n: usize, s: usize, k: usize, base: BaseRing) -> ExactMatrix {
    assert!(k >= 1 && k <= n, "the differential consumes one exterior slot");
    let src_monos = sym_monomials(n, s);
    let tgt_monos = sym_monomials(n, s + 1);
    let src_sets = IndexSet::all_of_size(n, k);
    let tgt_sets = IndexSet::all_of_size(n, k - 1);
    let tgt_mono_index: BTreeMap<&Vec<u32>, usize> =
        tgt_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let tgt_set_index: BTreeMap<&IndexSet, usize> =
        tgt_sets.iter().enumerate().map(|(i, t)| (t, i)).collect();

    let mut mat = ExactMatrix::zero(
        base,
        tgt_sets.len() * tgt_monos.len(),
        src_sets.len() * src_monos.len(),
    );
    for (ti, t) in src_sets.iter().enumerate() {
        for (mi, m) in src_monos.iter().enumerate() {
            let col = ti * src_monos.len() + mi;
            for i in t.iter() {
                let mut bumped = m.clone();
                bumped[i as usize] += 1;
                let row = tgt_set_index[&t.without(i)] * tgt_monos.len()
                    + tgt_mono_index[&bumped];
                let val = if t.position(i) % 2 == 1 {
                    base.from_i64(-1)
                } else {
                    base.one()
                };
                mat.set(row, col, val);
            }
        }
    }
    mat
}

/// Exactness of 0 -> S -> Lambda_* -> Sym^1 (x) Lambda_{*-1} -> ... ->
/// Sym^{s_max} (x) Lambda_{*-s_max}, one diagonal s + k = l at a time.
/// Homology must vanish at every node except the truncation node of
/// diagonals longer than s_max, and over the integers every kernel must be
/// a direct summand (unit invariant factors), which is the freeness that
/// base change to other coefficients relies on.
pub fn verify_model_exactness(n: usize, s_max: usize, base: BaseRing) -> CheckReport {
    assert!(s_max >= 1);
    let mut nodes = 0usize;
    for l in 0..=(s_max + n) {
        let s_top = l.min(s_max);
        for s in 0..=s_top {
            let k = l - s;
            let rank = term_rank(n, s, k);
            let d_in = if s == 0 {
                if l == 0 {
                    // the augmentation S -> Lambda_0 in the bases {1}, {1}
                    ExactMatrix::identity(base, 1)
                } else {
                    ExactMatrix::zero(base, rank, 0)
                }
            } else if term_rank(n, s - 1, k + 1) == 0 {
                ExactMatrix::zero(base, rank, 0)
            } else {
                model_differential(n, s - 1, k + 1, base)
            };
            let d_out = if s == l || rank == 0 {
                ExactMatrix::zero(base, 0, rank)
            } else {
                model_differential(n, s, k, base)
            };

            let truncated = s == s_max && l > s_max;
            if !truncated {
                let h = subquotient_homology(&d_in, &d_out);
                if !h.is_trivial() {
                    return CheckReport::fail(format!(
                        "homology {} at term Sym^{s} (x) Lambda_{k} (diagonal {l})",
                        h.invariants
                    ));
                }
            } else {
                // truncation node: still a complex, no surjectivity demand
                let composite = d_out.mul(&d_in);
                if !composite.is_zero_matrix() {
                    return CheckReport::fail(format!(
                        "differentials do not compose to zero into Sym^{s} (x) Lambda_{k}"
                    ));
                }
            }

            if base == BaseRing::Integers && rank > 0 {
                let kernel = d_out.kernel_basis();
                if kernel.cols() > 0 {
                    let diag = kernel.smith_normal_form().diagonal();
                    if !diag.iter().all(|x| x.is_one()) {
                        return CheckReport::fail(format!(
                            "kernel of the differential out of Sym^{s} (x) Lambda_{k} \
                             is not a direct summand"
                        ));
                    }
                }
            }
            nodes += 1;
        }
    }
    CheckReport::pass_with_notes(vec![format!("{nodes} complex nodes verified")])
}

/// Sparse element of Sym (x) Lambda (x) Lambda with fixed Sym-degree,
/// keyed by (monomial, first subset, second subset).
type TripleElement = BTreeMap<(Vec<u32>, IndexSet, IndexSet), Scalar>;

fn triple_add(base: BaseRing, el: &mut TripleElement, key: (Vec<u32>, IndexSet, IndexSet), v: Scalar) {
    let cur = el.remove(&key).unwrap_or_else(|| base.zero());
    let sum = base.add(&cur, &v);
    if !base.is_zero(&sum) {
        el.insert(key, sum);
    }
}

/// The differentials are maps of extended comodules: (1 (x) Delta) after
/// the differential equals (differential (x) 1) after (1 (x) Delta), where
/// Delta is the shuffle coproduct of the exterior factor and the Sym factor
/// rides along in homological degree zero (so no extra signs appear).
pub fn verify_colinearity(n: usize, s_max: usize, base: BaseRing) -> CheckReport {
    assert!(s_max >= 1);

    // the augmentation is colinear for the trivial coaction: both routes
    // send 1 to 1 (x) 1 (x) 1
    let unit = IndexSet::empty();
    let via_delta: Vec<(IndexSet, IndexSet, bool)> = unit.splittings();
    if via_delta.len() != 1 || via_delta[0].2 {
        return CheckReport::fail("coproduct of the unit is not 1 (x) 1".to_string());
    }

    let mut identities = 0usize;
    for s in 0..=s_max.saturating_sub(1) {
        for k in 1..=n {
            for t in IndexSet::all_of_size(n, k) {
                for m in sym_monomials(n, s) {
                    let mut lhs: TripleElement = BTreeMap::new();
                    for i in t.iter() {
                        let mut bumped = m.clone();
                        bumped[i as usize] += 1;
                        let s1 = t.position(i) % 2 == 1;
                        for (a, b, neg) in t.without(i).splittings() {
                            let negate = s1 ^ neg;
                            let v = if negate { base.from_i64(-1) } else { base.one() };
                            triple_add(base, &mut lhs, (bumped.clone(), a, b), v);
                        }
                    }

                    let mut rhs: TripleElement = BTreeMap::new();
                    for (a, b, neg) in t.splittings() {
                        for i in a.iter() {
                            let mut bumped = m.clone();
                            bumped[i as usize] += 1;
                            let negate = neg ^ (a.position(i) % 2 == 1);
                            let v = if negate { base.from_i64(-1) } else { base.one() };
                            triple_add(base, &mut rhs, (bumped, a.without(i), b.clone()), v);
                        }
                    }

                    if lhs != rhs {
                        return CheckReport::fail(format!(
                            "coaction does not commute with the differential on \
                             Sym^{s} (x) Lambda_{k} at subset {}",
                            t.render()
                        ));
                    }
                    identities += 1;
                }
            }
        }
    }
    CheckReport::pass_with_notes(vec![format!("{identities} basis identities verified")])
}

/// Counit and coassociativity of the extended coactions 1 (x) Delta.  The
/// coaction is the identity on the Sym factor, so the laws reduce to the
/// exterior factor and are checked there on every subset.
pub fn verify_comodule_structure(n: usize, base: BaseRing) -> CheckReport {
    for t in IndexSet::all_subsets(n) {
        // counit: (1 (x) counit) after Delta = identity
        let mut counit: BTreeMap<IndexSet, Scalar> = BTreeMap::new();
        for (a, b, neg) in t.splittings() {
            if !b.is_empty() {
                continue; // the counit kills positive exterior degree
            }
            let v = if neg { base.from_i64(-1) } else { base.one() };
            let cur = counit.remove(&a).unwrap_or_else(|| base.zero());
            let sum = base.add(&cur, &v);
            if !base.is_zero(&sum) {
                counit.insert(a, sum);
            }
        }
        if counit.len() != 1 || !counit.contains_key(&t) || !base.is_one(&counit[&t]) {
            return CheckReport::fail(format!("counit law fails on {}", t.render()));
        }

        // coassociativity: both refinements of Delta agree
        let mut left: BTreeMap<(IndexSet, IndexSet, IndexSet), Scalar> = BTreeMap::new();
        let mut right: BTreeMap<(IndexSet, IndexSet, IndexSet), Scalar> = BTreeMap::new();
        for (a, b, neg1) in t.splittings() {
            for (a1, a2, neg2) in a.splittings() {
                let v = if neg1 ^ neg2 { base.from_i64(-1) } else { base.one() };
                let key = (a1, a2, b.clone());
                let cur = left.remove(&key).unwrap_or_else(|| base.zero());
                let sum = base.add(&cur, &v);
                if !base.is_zero(&sum) {
                    left.insert(key, sum);
                }
            }
            for (b1, b2, neg2) in b.splittings() {
                let v = if neg1 ^ neg2 { base.from_i64(-1) } else { base.one() };
                let key = (a.clone(), b1, b2);
                let cur = right.remove(&key).unwrap_or_else(|| base.zero());
                let sum = base.add(&cur, &v);
                if !base.is_zero(&sum) {
                    right.insert(key, sum);
                }
            }
        }
        if left != right {
            return CheckReport::fail(format!("coassociativity fails on {}", t.render()));
        }
    }
    CheckReport::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    #[test]
    fn rank_one_differential_is_the_unit() {
        for s in 0..4 {
            let m = model_differential(1, s, 1, z());
            assert_eq!((m.rows(), m.cols()), (1, 1));
            assert!(z().is_one(&m.get(0, 0)));
        }
    }

    #[test]
    fn degree_zero_rank_two_differential_is_the_identity() {
        let m = model_differential(2, 0, 1, z());
        assert_eq!(m, ExactMatrix::identity(z(), 2));
    }

    #[test]
    fn top_exterior_generator_maps_with_alternating_signs() {
        // 1 (x) e_{1,2} -> f_1 (x) e_2 - f_2 (x) e_1, target basis
        // ({1}, f_1), ({1}, f_2), ({2}, f_1), ({2}, f_2)
        let m = model_differential(2, 0, 2, z());
        assert_eq!((m.rows(), m.cols()), (4, 1));
        let col = m.column(0);
        let rendered: Vec<i64> = col
            .iter()
            .map(|v| match v {
                Scalar::Int(b) => i64::try_from(b).unwrap(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(rendered, vec![0, -1, 1, 0]);
    }

    #[test]
    fn consecutive_differentials_compose_to_zero() {
        for n in 1..=3usize {
            for s in 0..=3usize {
                for k in 2..=n {
                    let first = model_differential(n, s, k, z());
                    let second = model_differential(n, s + 1, k - 1, z());
                    assert!(second.mul(&first).is_zero_matrix(), "n={n} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn term_ranks_alternate_to_zero_along_diagonals() {
        for n in 1..=4usize {
            for l in 1..=5usize {
                let mut sum = 0i64;
                for s in 0..=l {
                    let r = term_rank(n, s, l - s) as i64;
                    sum += if s % 2 == 0 { r } else { -r };
                }
                assert_eq!(sum, 0, "n={n} diagonal={l}");
            }
        }
    }

    #[test]
    fn exactness_for_one_variable() {
        let report = verify_model_exactness(1, 4, z());
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn exactness_for_two_variables_over_the_integers() {
        let report = verify_model_exactness(2, 4, z());
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn exactness_for_three_variables_in_characteristic_two() {
        let base = BaseRing::prime_field(2).unwrap();
        let report = verify_model_exactness(3, 3, base);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn colinearity_small_ranks() {
        for n in 1..=3usize {
            let report = verify_colinearity(n, 3, z());
            assert_eq!(report.status, CheckStatus::Pass, "n={n} {:?}", report.witness);
        }
    }

    #[test]
    fn colinearity_over_prime_fields() {
        for p in [2u32, 5] {
            let base = BaseRing::prime_field(p).unwrap();
            let report = verify_colinearity(2, 3, base);
            assert_eq!(report.status, CheckStatus::Pass, "p={p} {:?}", report.witness);
        }
    }

    #[test]
    fn comodule_laws_hold() {
        for n in 0..=3usize {
            let report = verify_comodule_structure(n, z());
            assert_eq!(report.status, CheckStatus::Pass, "n={n} {:?}", report.witness);
        }
    }

    #[test]
    fn monomials_descend_lexicographically() {
        let ms = sym_monomials(3, 2);
        assert_eq!(
            ms,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
        assert_eq!(sym_rank(3, 2), 6);
        assert_eq!(term_rank(3, 2, 1), 18);
    }
}
