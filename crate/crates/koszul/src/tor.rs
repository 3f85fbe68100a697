//! Tor of the quotient ring against presented graded modules, computed from
//! the Koszul complex with coefficients: cells, chain differentials, induced
//! maps, connecting homomorphisms via the snake construction, and the
//! multiplicative structure on classes.
//!
//! Chains at homological degree k and internal degree d are indexed by pairs
//! (T, g) with T a k-subset of the sequence indices and g a generator of the
//! coefficient module in degree d - deg(T); the differential acts blockwise
//! through the module's r_j-actions with the usual alternating signs.

use crate::exterior::IndexSet;
use crate::homology::{presented_homology, Homology};
use crate::matrix::{ExactMatrix, LiftStrategy};
use crate::modules::{build_ses, GradedModule, ModuleMorphism, SesTag, ShortExactSequence};
use crate::poly::RingContext;
use crate::report::CheckReport;
use crate::ring::Scalar;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// One cell of the coefficient complex: a subset with a block of module
/// generators.  `piece_degree` is `None` when the subset weighs more than
/// the total degree, in which case the block is empty.
#[derive(Debug, Clone)]
pub struct ChainCell {
    pub set: IndexSet,
    pub piece_degree: Option<usize>,
    pub offset: usize,
    pub gens: usize,
}

fn set_degree(ctx: &RingContext, t: &IndexSet) -> usize {
    t.iter().map(|j| ctx.seq_degree(j as usize)).sum()
}

/// Cells at (k, d) in lexicographic subset order, with running offsets.
pub fn chain_cells(m: &GradedModule, k: usize, d: usize) -> Vec<ChainCell> {
    let ctx = m.ctx();
    let mut offset = 0;
    IndexSet::all_of_size(ctx.nvars(), k)
        .into_iter()
        .map(|set| {
            let sd = set_degree(ctx, &set);
            let (piece_degree, gens) =
                if sd <= d { (Some(d - sd), m.gens(d - sd)) } else { (None, 0) };
            let cell = ChainCell { set, piece_degree, offset, gens };
            offset += cell.gens;
            cell
        })
        .collect()
}

pub fn chain_dim(m: &GradedModule, k: usize, d: usize) -> usize {
    chain_cells(m, k, d).iter().map(|c| c.gens).sum()
}

/// The differential from homological degree k to k - 1 at internal degree d.
pub fn chain_differential(m: &GradedModule, k: usize, d: usize) -> ExactMatrix {
    assert!(k >= 1, "the differential starts at homological degree one");
    assert!(d <= m.degree_max(), "internal degree exceeds the module bound");
    let ctx = m.ctx();
    let base = ctx.base();
    let src = chain_cells(m, k, d);
    let tgt = chain_cells(m, k - 1, d);
    let tpos: BTreeMap<&IndexSet, usize> =
        tgt.iter().enumerate().map(|(i, c)| (&c.set, i)).collect();
    let mut mat = ExactMatrix::zero(
        base,
        tgt.iter().map(|c| c.gens).sum(),
        src.iter().map(|c| c.gens).sum(),
    );
    for cell in &src {
        let Some(pd) = cell.piece_degree else { continue };
        if cell.gens == 0 {
            continue;
        }
        for j in cell.set.iter() {
            let negate = cell.set.position(j) % 2 == 1;
            let t = &tgt[tpos[&cell.set.without(j)]];
            let act = m.action(j as usize, pd);
            for (r, c, v) in act.iter_entries() {
                let val = if negate { base.neg(v) } else { v.clone() };
                mat.add_at(t.offset + r, cell.offset + c, &val);
            }
        }
    }
    mat
}

/// Block-diagonal relation columns of the coefficient module over the cells.
pub fn chain_relations(m: &GradedModule, k: usize, d: usize) -> ExactMatrix {
    let base = m.ctx().base();
    let cells = chain_cells(m, k, d);
    let blocks: Vec<ExactMatrix> = cells
        .iter()
        .map(|c| match c.piece_degree {
            Some(pd) => m.piece(pd).relations.clone(),
            None => ExactMatrix::zero(base, 0, 0),
        })
        .collect();
    let refs: Vec<&ExactMatrix> = blocks.iter().collect();
    ExactMatrix::block_diag(base, &refs)
}

/// Tor_k(R/I, M) in internal degree d as the homology of the coefficient
/// complex at (k, d).
pub fn tor_homology(m: &GradedModule, k: usize, d: usize) -> Homology {
    let base = m.ctx().base();
    let dim_k = chain_dim(m, k, d);
    let d_in = chain_differential(m, k + 1, d);
    let (d_out, rel_out) = if k == 0 {
        (ExactMatrix::zero(base, 0, dim_k), ExactMatrix::zero(base, 0, 0))
    } else {
        (chain_differential(m, k, d), chain_relations(m, k - 1, d))
    };
    let rel_mid = chain_relations(m, k, d);
    presented_homology(&d_in, &d_out, &rel_mid, &rel_out)
}

/// Memoized Tor pieces of one coefficient module.
pub struct TorTable {
    module: GradedModule,
    memo: BTreeMap<(usize, usize), Homology>,
}

impl TorTable {
    pub fn new(module: GradedModule) -> TorTable {
        TorTable { module, memo: BTreeMap::new() }
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn get(&mut self, k: usize, d: usize) -> &Homology {
        if !self.memo.contains_key(&(k, d)) {
            let h = tor_homology(&self.module, k, d);
            self.memo.insert((k, d), h);
        }
        &self.memo[&(k, d)]
    }

    /// Shared-reference lookup for pieces already computed by `populate`.
    pub fn at(&self, k: usize, d: usize) -> &Homology {
        self.memo.get(&(k, d)).expect("Tor piece not populated")
    }

    /// Computes every piece up to the bounds, optionally across threads;
    /// pieces are independent, so the result does not depend on the split.
    pub fn populate(&mut self, k_max: usize, d_max: usize, parallel: bool) {
        let todo: Vec<(usize, usize)> = (0..=k_max)
            .flat_map(|k| (0..=d_max).map(move |d| (k, d)))
            .filter(|kd| !self.memo.contains_key(kd))
            .collect();
        let module = &self.module;
        let computed: Vec<((usize, usize), Homology)> = if parallel {
            todo.par_iter().map(|&(k, d)| ((k, d), tor_homology(module, k, d))).collect()
        } else {
            todo.iter().map(|&(k, d)| ((k, d), tor_homology(module, k, d))).collect()
        };
        self.memo.extend(computed);
    }
}

/// The chain-level map induced by a module morphism: block diagonal over
/// cells, one block per piece degree.
pub fn chain_morphism(
    f: &ModuleMorphism,
    source: &GradedModule,
    target: &GradedModule,
    k: usize,
    d: usize,
) -> ExactMatrix {
    let base = source.ctx().base();
    let src = chain_cells(source, k, d);
    let tgt = chain_cells(target, k, d);
    let mut mat = ExactMatrix::zero(
        base,
        tgt.iter().map(|c| c.gens).sum(),
        src.iter().map(|c| c.gens).sum(),
    );
    for (sc, tc) in src.iter().zip(tgt.iter()) {
        debug_assert_eq!(sc.set, tc.set);
        let Some(pd) = sc.piece_degree else { continue };
        for (r, c, v) in f.map(pd).iter_entries() {
            mat.set(tc.offset + r, sc.offset + c, v.clone());
        }
    }
    mat
}

/// The map induced on Tor classes, in the generator bases of the two
/// homology objects.
pub fn induced_map(
    f: &ModuleMorphism,
    source: &GradedModule,
    target: &GradedModule,
    tor_source: &Homology,
    tor_target: &Homology,
    k: usize,
    d: usize,
) -> ExactMatrix {
    let chain = chain_morphism(f, source, target, k, d);
    let mut out = ExactMatrix::zero(
        source.ctx().base(),
        tor_target.generator_count(),
        tor_source.generator_count(),
    );
    for g in 0..tor_source.generator_count() {
        let v = chain.apply(&tor_source.cycle_basis.column(g));
        out.set_column(g, &tor_target.class_of(&v));
    }
    out
}

/// Raw snake construction for a presented cycle z at (k, d) in C-chains:
/// lift through p, apply the middle differential, pull back through i.
/// The result is a presented cycle at (k - 1, d) in A-chains whose class is
/// independent of the choices.
pub fn snake_chain(
    ses: &ShortExactSequence,
    k: usize,
    d: usize,
    z: &[Scalar],
    strategy: LiftStrategy,
) -> Vec<Scalar> {
    assert!(k >= 1, "the connecting map starts at homological degree one");
    let p = chain_morphism(&ses.p, &ses.b, &ses.c, k, d);
    let rel_c = chain_relations(&ses.c, k, d);
    let x = p
        .hstack(&rel_c)
        .solve_in_image(z, strategy)
        .expect("projection is not surjective on chains");
    let dim_b = chain_dim(&ses.b, k, d);
    let b = &x[..dim_b];
    let db = chain_differential(&ses.b, k, d).apply(b);
    let i = chain_morphism(&ses.i, &ses.a, &ses.b, k - 1, d);
    let rel_b = chain_relations(&ses.b, k - 1, d);
    let y = i
        .hstack(&rel_b)
        .solve_in_image(&db, strategy)
        .expect("differential of the lift does not come from the kernel term");
    let dim_a = chain_dim(&ses.a, k - 1, d);
    y[..dim_a].to_vec()
}

/// Connecting maps carry a fixed global sign: the convention is pinned so
/// that for 0 -> I -> R -> R/I -> 0 the degree-one map sends the class of
/// the Koszul generator e_j to minus the class of r_j.  The raw snake
/// construction produces plus, hence the constant.
pub const CONNECTING_SIGN: i64 = -1;

/// The connecting homomorphism Tor_k(R/I, C) -> Tor_{k-1}(R/I, A) in the
/// generator bases of the two homology objects, with the pinned sign.
pub fn connecting_map(
    ses: &ShortExactSequence,
    tor_c: &Homology,
    tor_a: &Homology,
    k: usize,
    d: usize,
    strategy: LiftStrategy,
) -> ExactMatrix {
    let base = ses.a.ctx().base();
    let sign = base.from_i64(CONNECTING_SIGN);
    let mut out =
        ExactMatrix::zero(base, tor_a.generator_count(), tor_c.generator_count());
    for g in 0..tor_c.generator_count() {
        let z = tor_c.cycle_basis.column(g);
        let a = snake_chain(ses, k, d, &z, strategy);
        let signed: Vec<Scalar> = a.iter().map(|v| base.mul(&sign, v)).collect();
        out.set_column(g, &tor_a.class_of(&signed));
    }
    out
}

/// Multiplication of coefficient modules through polynomial representatives:
/// a generator of `left` in degree d times one of `right` in degree e is
/// expressed in the target's lattice at degree d + e.
pub struct ProductRule<'a> {
    pub left: &'a GradedModule,
    pub right: &'a GradedModule,
    pub target: &'a GradedModule,
}

impl ProductRule<'_> {
    fn gen_product(&self, d: usize, i: usize, e: usize, j: usize) -> Vec<Scalar> {
        let prod = self.left.rep(d, i).mul(&self.right.rep(e, j));
        self.target
            .coords_in_lattice(&prod, d + e)
            .expect("product of representatives left the target lattice")
    }

    /// Chain-level product: (e_T (x) m) * (e_T' (x) m') is the signed merge
    /// of the subsets tensor the product of the module elements.  Module
    /// elements sit in homological degree zero, so the merge sign is all.
    pub fn chain_product(
        &self,
        k: usize,
        d: usize,
        u: &[Scalar],
        l: usize,
        e: usize,
        v: &[Scalar],
    ) -> Vec<Scalar> {
        let base = self.left.ctx().base();
        let lcells = chain_cells(self.left, k, d);
        let rcells = chain_cells(self.right, l, e);
        let tcells = chain_cells(self.target, k + l, d + e);
        let tpos: BTreeMap<&IndexSet, usize> =
            tcells.iter().enumerate().map(|(i, c)| (&c.set, i)).collect();
        let mut out = vec![base.zero(); tcells.iter().map(|c| c.gens).sum()];
        for lc in &lcells {
            if lc.gens == 0 {
                continue;
            }
            for rc in &rcells {
                if rc.gens == 0 {
                    continue;
                }
                let Some((merged, negate)) = lc.set.merge(&rc.set) else { continue };
                let t = &tcells[tpos[&merged]];
                for i in 0..lc.gens {
                    let a = &u[lc.offset + i];
                    if base.is_zero(a) {
                        continue;
                    }
                    for j in 0..rc.gens {
                        let b = &v[rc.offset + j];
                        if base.is_zero(b) {
                            continue;
                        }
                        let mut coef = base.mul(a, b);
                        if negate {
                            coef = base.neg(&coef);
                        }
                        let pc = self.gen_product(
                            lc.piece_degree.unwrap(),
                            i,
                            rc.piece_degree.unwrap(),
                            j,
                        );
                        for (g, pv) in pc.iter().enumerate() {
                            if !base.is_zero(pv) {
                                let t_val = base.mul(&coef, pv);
                                out[t.offset + g] = base.add(&out[t.offset + g], &t_val);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Class of the product of two Tor generators.
pub fn generator_product_class(
    rule: &ProductRule,
    tor_left: &Homology,
    tor_right: &Homology,
    tor_target: &Homology,
    k: usize,
    d: usize,
    l: usize,
    e: usize,
    i: usize,
    j: usize,
) -> Vec<Scalar> {
    let u = tor_left.cycle_basis.column(i);
    let v = tor_right.cycle_basis.column(j);
    tor_target.class_of(&rule.chain_product(k, d, &u, l, e, &v))
}

/// The connecting maps of the square-zero extension act as a degree -1
/// derivation on the Tor algebra of the associated graded ring: for classes
/// a in Tor_p(R/I, gr_s) and b in Tor_q(R/I, gr_t),
///
/// ```text
/// del(a b) = del(a) b + (-1)^p a del(b)
/// ```
///
/// where each del is the connecting map of the corresponding block sequence
/// 0 -> gr_{s+1} -> I^s/I^{s+2} -> gr_s -> 0, evaluated on every pair of
/// basis classes within the given bounds.
pub fn verify_leibniz(ctx: &RingContext, s_max: usize, degree_max: usize) -> CheckReport {
    let base = ctx.base();
    let n = ctx.nvars();
    let fs: Vec<ShortExactSequence> =
        (0..=s_max).map(|s| build_ses(ctx, SesTag::F(s), degree_max)).collect();
    let gr: Vec<GradedModule> = (0..=s_max + 1)
        .map(|s| if s <= s_max { fs[s].c.clone() } else { fs[s_max].a.clone() })
        .collect();
    let mut tables: Vec<TorTable> = gr.iter().map(|g| TorTable::new(g.clone())).collect();

    let mut verified = 0usize;
    for s in 0..=s_max {
        for t in 0..=(s_max - s) {
            for p in 0..=n {
                for q in 0..=(n - p) {
                    if p + q == 0 {
                        continue; // both sides land in homological degree -1
                    }
                    for d in 0..=degree_max {
                        for e in 0..=(degree_max - d) {
                            let gens_l = tables[s].get(p, d).generator_count();
                            let gens_r = tables[t].get(q, e).generator_count();
                            if gens_l == 0 || gens_r == 0 {
                                continue;
                            }
                            for gi in 0..gens_l {
                                let u = tables[s].get(p, d).cycle_basis.column(gi);
                                // del(a) does not depend on the right factor.
                                let da_once = if p >= 1 {
                                    Some(snake_chain(&fs[s], p, d, &u, LiftStrategy::Primary))
                                } else {
                                    None
                                };
                                for gj in 0..gens_r {
                                    let v = tables[t].get(q, e).cycle_basis.column(gj);

                                    // del(a b), through the block at s + t
                                    let rule_ab = ProductRule {
                                        left: &gr[s],
                                        right: &gr[t],
                                        target: &gr[s + t],
                                    };
                                    let ab = rule_ab.chain_product(p, d, &u, q, e, &v);
                                    let lhs = snake_chain(
                                        &fs[s + t],
                                        p + q,
                                        d + e,
                                        &ab,
                                        LiftStrategy::Primary,
                                    );

                                    // del(a) b + (-1)^p a del(b)
                                    let dim =
                                        chain_dim(&gr[s + t + 1], p + q - 1, d + e);
                                    let mut rhs = vec![base.zero(); dim];
                                    if let Some(da) = &da_once {
                                        let rule = ProductRule {
                                            left: &gr[s + 1],
                                            right: &gr[t],
                                            target: &gr[s + t + 1],
                                        };
                                        let term =
                                            rule.chain_product(p - 1, d, da, q, e, &v);
                                        for (o, w) in rhs.iter_mut().zip(term.iter()) {
                                            *o = base.add(o, w);
                                        }
                                    }
                                    if q >= 1 {
                                        let db = snake_chain(
                                            &fs[t],
                                            q,
                                            e,
                                            &v,
                                            LiftStrategy::Primary,
                                        );
                                        let rule = ProductRule {
                                            left: &gr[s],
                                            right: &gr[t + 1],
                                            target: &gr[s + t + 1],
                                        };
                                        let term =
                                            rule.chain_product(p, d, &u, q - 1, e, &db);
                                        for (o, w) in rhs.iter_mut().zip(term.iter()) {
                                            let w = if p % 2 == 1 { base.neg(w) } else { w.clone() };
                                            *o = base.add(o, &w);
                                        }
                                    }

                                    let diff: Vec<Scalar> = lhs
                                        .iter()
                                        .zip(rhs.iter())
                                        .map(|(a, b)| base.sub(a, b))
                                        .collect();
                                    let h = tables[s + t + 1].get(p + q - 1, d + e);
                                    if !h.is_boundary(&diff) {
                                        return CheckReport::fail(format!(
                                            "derivation identity fails for generators \
                                             ({gi}, {gj}) at blocks ({s}, {t}), \
                                             homological degrees ({p}, {q}), \
                                             internal degrees ({d}, {e})"
                                        ));
                                    }
                                    verified += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    CheckReport::pass_with_notes(vec![format!("{verified} product pairs verified")])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{filtration_quotient, ideal_power, quotient_of_powers};
    use crate::poly::Polynomial;
    use crate::report::CheckStatus;
    use crate::ring::BaseRing;

    fn vars2() -> RingContext {
        RingContext::variables(BaseRing::Integers, 2)
    }

    fn residue_quotient(ctx: &RingContext, degree_max: usize) -> GradedModule {
        let r = ideal_power(ctx, 0, degree_max);
        let i = ideal_power(ctx, 1, degree_max);
        quotient_of_powers(&r, &i, "R/I".to_string())
    }

    #[test]
    fn tor_of_residue_quotient_matches_subset_counts() {
        // Tor_k(S, S) is free of rank C(n, k) concentrated in degree k
        let ctx = vars2();
        let s = residue_quotient(&ctx, 4);
        for k in 0..=2usize {
            for d in 0..=4usize {
                let h = tor_homology(&s, k, d);
                let expected = if d == k { num_integer::binomial(2, k) } else { 0 };
                assert!(h.invariants.torsion.is_empty(), "k={k} d={d}");
                assert_eq!(h.invariants.free_rank, expected, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn tor_of_the_free_module_collapses() {
        let ctx = vars2();
        let r = ideal_power(&ctx, 0, 4);
        for d in 0..=4usize {
            for k in 1..=2usize {
                assert!(tor_homology(&r, k, d).is_trivial(), "k={k} d={d}");
            }
            let h0 = tor_homology(&r, 0, d);
            let expected = if d == 0 { 1 } else { 0 };
            assert_eq!(h0.invariants.free_rank, expected, "d={d}");
        }
    }

    #[test]
    fn tor_of_the_first_graded_piece() {
        // gr_1 has rank 2 for n = 2, so Tor_k is free of rank 2 C(2, k)
        // concentrated in degree k + 1
        let ctx = vars2();
        let gr1 = filtration_quotient(&ctx, 1, 2, 5);
        for k in 0..=2usize {
            for d in 0..=5usize {
                let h = tor_homology(&gr1, k, d);
                let expected =
                    if d == k + 1 { 2 * num_integer::binomial(2, k) } else { 0 };
                assert!(h.invariants.torsion.is_empty());
                assert_eq!(h.invariants.free_rank, expected, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn raw_snake_returns_the_relation_and_the_pinned_map_negates() {
        let ctx = vars2();
        let ses = build_ses(&ctx, SesTag::ROverI, 4);
        // the chain e_1 (x) 1 at (k, d) = (1, 1)
        let z = vec![ctx.base().one(), ctx.base().zero()];
        let a = snake_chain(&ses, 1, 1, &z, LiftStrategy::Primary);
        // (I)_1 has canonical basis {x1, x2}; the result is +x1
        assert_eq!(a, vec![ctx.base().one(), ctx.base().zero()]);

        let tor_c = tor_homology(&ses.c, 1, 1);
        let tor_a = tor_homology(&ses.a, 0, 1);
        assert_eq!(tor_c.invariants.free_rank, 2);
        assert_eq!(tor_a.invariants.free_rank, 2);
        let delta = connecting_map(&ses, &tor_c, &tor_a, 1, 1, LiftStrategy::Primary);
        assert_eq!(delta, ExactMatrix::identity(ctx.base(), 2).neg());
    }

    #[test]
    fn lift_strategies_agree_on_connecting_classes() {
        let ctx = vars2();
        for tag in [SesTag::ROverI, SesTag::F(0)] {
            let ses = build_ses(&ctx, tag, 4);
            for k in 1..=2usize {
                for d in 0..=4usize {
                    let tor_c = tor_homology(&ses.c, k, d);
                    let tor_a = tor_homology(&ses.a, k - 1, d);
                    let a = connecting_map(&ses, &tor_c, &tor_a, k, d, LiftStrategy::Primary);
                    let b =
                        connecting_map(&ses, &tor_c, &tor_a, k, d, LiftStrategy::Alternate);
                    assert_eq!(a, b, "{tag} k={k} d={d}");
                }
            }
        }
    }

    #[test]
    fn products_are_graded_commutative_and_square_to_zero() {
        let ctx = vars2();
        let s = residue_quotient(&ctx, 4);
        let rule = ProductRule { left: &s, right: &s, target: &s };
        let t1 = tor_homology(&s, 1, 1);
        let t2 = tor_homology(&s, 2, 2);
        assert_eq!(t1.generator_count(), 2);
        assert_eq!(t2.generator_count(), 1);
        let ab = generator_product_class(&rule, &t1, &t1, &t2, 1, 1, 1, 1, 0, 1);
        let ba = generator_product_class(&rule, &t1, &t1, &t2, 1, 1, 1, 1, 1, 0);
        let base = ctx.base();
        assert_eq!(ab.len(), 1);
        assert!(!base.is_zero(&ab[0]), "product of distinct degree-one classes vanishes");
        assert_eq!(ab[0], base.neg(&ba[0]));
        let aa = generator_product_class(&rule, &t1, &t1, &t2, 1, 1, 1, 1, 0, 0);
        assert!(base.is_zero(&aa[0]));
    }

    #[test]
    fn unit_acts_as_identity_on_classes() {
        let ctx = vars2();
        let s = residue_quotient(&ctx, 4);
        let rule = ProductRule { left: &s, right: &s, target: &s };
        let t0 = tor_homology(&s, 0, 0);
        let t1 = tor_homology(&s, 1, 1);
        assert_eq!(t0.generator_count(), 1);
        for g in 0..t1.generator_count() {
            let u = t0.cycle_basis.column(0);
            let v = t1.cycle_basis.column(g);
            let prod = rule.chain_product(0, 0, &u, 1, 1, &v);
            let cls = t1.class_of(&prod);
            let unit_cls = t1.class_of(&v);
            assert_eq!(cls, unit_cls);
        }
    }

    #[test]
    fn products_associate_for_three_variables() {
        let ctx = RingContext::variables(BaseRing::Integers, 3);
        let s = residue_quotient(&ctx, 3);
        let rule = ProductRule { left: &s, right: &s, target: &s };
        let t1 = tor_homology(&s, 1, 1);
        let t2 = tor_homology(&s, 2, 2);
        let t3 = tor_homology(&s, 3, 3);
        assert_eq!((t1.rank(), t2.rank(), t3.rank()), (3, 3, 1));
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let u = t1.cycle_basis.column(a);
                    let v = t1.cycle_basis.column(b);
                    let w = t1.cycle_basis.column(c);
                    let uv = rule.chain_product(1, 1, &u, 1, 1, &v);
                    let left = rule.chain_product(2, 2, &uv, 1, 1, &w);
                    let vw = rule.chain_product(1, 1, &v, 1, 1, &w);
                    let right = rule.chain_product(1, 1, &u, 2, 2, &vw);
                    assert_eq!(t3.class_of(&left), t3.class_of(&right), "{a}{b}{c}");
                }
            }
        }
    }

    #[test]
    fn projection_induces_the_identity_in_degree_zero() {
        let ctx = vars2();
        let ses = build_ses(&ctx, SesTag::ROverI, 4);
        let tor_b = tor_homology(&ses.b, 0, 0);
        let tor_c = tor_homology(&ses.c, 0, 0);
        let m = induced_map(&ses.p, &ses.b, &ses.c, &tor_b, &tor_c, 0, 0);
        assert_eq!(m, ExactMatrix::identity(ctx.base(), 1));
    }

    #[test]
    fn leibniz_identity_for_two_variables() {
        let ctx = vars2();
        let report = verify_leibniz(&ctx, 1, 4);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn leibniz_identity_in_characteristic_two() {
        let base = BaseRing::prime_field(2).unwrap();
        let ctx = RingContext::variables(base, 2);
        let report = verify_leibniz(&ctx, 1, 4);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn leibniz_identity_for_mixed_degrees() {
        let base = BaseRing::Integers;
        let x = Polynomial::variable(base, 2, 0);
        let y = Polynomial::variable(base, 2, 1);
        let ctx = RingContext::new(
            base,
            vec!["x".into(), "y".into()],
            vec![1, 1],
            vec![x.mul(&x), y.mul(&y).mul(&y)],
        )
        .unwrap();
        let report = verify_leibniz(&ctx, 1, 6);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }
}
