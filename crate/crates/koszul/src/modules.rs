//! Degreewise presentations of the ideal powers I^s, the filtration
//! quotients I^s/I^t, the morphisms and short exact sequences of the
//! I-adic tower, and the multiplication on the associated graded algebra.
//!
//! Every module here is a subquotient of R, so each graded piece carries an
//! `embed` matrix whose columns are the canonical (Hermite-reduced) lattice
//! basis of the underlying submodule piece inside R_d, and a `relations`
//! matrix presenting the quotient on that basis.  All induced structure
//! (r_j-actions, inclusions, projections, products) is computed by exact
//! solves against these embeddings, so it is well defined by construction
//! and verified to be so.

use crate::homology::{presented_homology, vanishes_in_presented, Homology, ModuleInvariants};
use crate::matrix::{ExactMatrix, LiftStrategy};
use crate::poly::{Monomial, Polynomial, RingContext};
use crate::report::CheckReport;
use crate::ring::Scalar;
use itertools::Itertools;
use std::collections::BTreeMap;
use std::fmt;

/// One graded piece of a presented module.
#[derive(Debug, Clone)]
pub struct Piece {
    /// Number of generators (= columns of `embed`).
    pub gens: usize,
    /// Relation columns on the generators; empty for submodules of R.
    pub relations: ExactMatrix,
    /// Generators as coordinate columns in the monomial basis of R_d.
    pub embed: ExactMatrix,
}

/// A graded R-module presented degreewise on an explicit sublattice of R.
#[derive(Debug, Clone)]
pub struct GradedModule {
    ctx: RingContext,
    label: String,
    degree_max: usize,
    pieces: Vec<Piece>,
    /// (j, d) -> matrix of multiplication by r_j from piece d to piece
    /// d + deg r_j, in generator coordinates.
    actions: BTreeMap<(usize, usize), ExactMatrix>,
}

impl GradedModule {
    fn build(
        ctx: RingContext,
        label: String,
        degree_max: usize,
        pieces: Vec<Piece>,
    ) -> GradedModule {
        let base = ctx.base();
        let mut actions = BTreeMap::new();
        for j in 0..ctx.nvars() {
            let e = ctx.seq_degree(j);
            for d in 0..=degree_max.saturating_sub(e) {
                let src = &pieces[d];
                let tgt = &pieces[d + e];
                let mut act = ExactMatrix::zero(base, tgt.gens, src.gens);
                if src.gens > 0 && tgt.gens > 0 {
                    let image = ctx.mult_matrix(&ctx.sequence()[j], d).mul(&src.embed);
                    for c in 0..image.cols() {
                        let col = image.column(c);
                        let x = tgt.embed.solve_in_image(&col, LiftStrategy::Primary).expect(
                            "module is not closed under the sequence action; embedding is wrong",
                        );
                        act.set_column(c, &x);
                    }
                }
                actions.insert((j, d), act);
            }
        }
        let m = GradedModule { ctx, label, degree_max, pieces, actions };
        m.assert_well_defined();
        m
    }

    /// Well-definedness of the actions on the quotient: relations map into
    /// relations, and the actions commute pairwise modulo relations.
    fn assert_well_defined(&self) {
        let n = self.ctx.nvars();
        for j in 0..n {
            let e = self.ctx.seq_degree(j);
            for d in 0..=self.degree_max.saturating_sub(e) {
                let act = &self.actions[&(j, d)];
                let moved = act.mul(&self.pieces[d].relations);
                for c in 0..moved.cols() {
                    assert!(
                        vanishes_in_presented(&moved.column(c), &self.pieces[d + e].relations),
                        "{}: action of r_{} does not preserve relations at degree {d}",
                        self.label,
                        j + 1
                    );
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (ei, ej) = (self.ctx.seq_degree(i), self.ctx.seq_degree(j));
                if ei + ej > self.degree_max {
                    continue;
                }
                for d in 0..=(self.degree_max - ei - ej) {
                    let ij = self.actions[&(i, d + ej)].mul(&self.actions[&(j, d)]);
                    let ji = self.actions[&(j, d + ei)].mul(&self.actions[&(i, d)]);
                    let diff = ij.sub(&ji);
                    for c in 0..diff.cols() {
                        assert!(
                            vanishes_in_presented(
                                &diff.column(c),
                                &self.pieces[d + ei + ej].relations
                            ),
                            "{}: actions of r_{} and r_{} do not commute at degree {d}",
                            self.label,
                            i + 1,
                            j + 1
                        );
                    }
                }
            }
        }
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree_max(&self) -> usize {
        self.degree_max
    }

    pub fn piece(&self, d: usize) -> &Piece {
        &self.pieces[d]
    }

    pub fn gens(&self, d: usize) -> usize {
        self.pieces[d].gens
    }

    pub fn action(&self, j: usize, d: usize) -> &ExactMatrix {
        &self.actions[&(j, d)]
    }

    /// Polynomial representative of generator `i` of piece `d`.
    pub fn rep(&self, d: usize, i: usize) -> Polynomial {
        self.ctx.from_coordinates(&self.pieces[d].embed.column(i), d)
    }

    /// Coordinates of a homogeneous polynomial in the generator basis of
    /// piece `d`, or `None` when it lies outside the underlying lattice.
    pub fn coords_in_lattice(&self, p: &Polynomial, d: usize) -> Option<Vec<Scalar>> {
        let v = self.ctx.coordinates(p, d);
        self.pieces[d].embed.solve_in_image(&v, LiftStrategy::Primary)
    }

    /// The piece as a standalone presented module (zero differentials).
    pub fn piece_presentation(&self, d: usize) -> Homology {
        let base = self.ctx.base();
        let g = self.pieces[d].gens;
        presented_homology(
            &ExactMatrix::zero(base, g, 0),
            &ExactMatrix::zero(base, 0, g),
            &self.pieces[d].relations,
            &ExactMatrix::zero(base, 0, 0),
        )
    }

    pub fn piece_invariants(&self, d: usize) -> ModuleInvariants {
        self.piece_presentation(d).invariants
    }
}

/// Canonical lattice basis of (I^s)_d: Hermite-reduce the columns of all
/// s-fold products of sequence entries times complementary monomials.
fn ideal_piece_basis(ctx: &RingContext, products: &[Polynomial], d: usize) -> ExactMatrix {
    let base = ctx.base();
    let rank = ctx.piece_rank(d);
    let mut cols = ExactMatrix::zero(base, rank, 0);
    for p in products {
        let e = p
            .homogeneous_degree(ctx.weights())
            .expect("sequence products are homogeneous");
        if e > d {
            continue;
        }
        cols = cols.hstack(&ctx.mult_matrix(p, d - e));
    }
    let ech = cols.column_echelon();
    let keep: Vec<usize> = (0..ech.pivots.len()).collect();
    ech.h.select_columns(&keep)
}

/// All s-fold products of sequence entries (with repetition); [1] for s = 0.
fn sequence_products(ctx: &RingContext, s: usize) -> Vec<Polynomial> {
    let base = ctx.base();
    let n = ctx.nvars();
    if s == 0 {
        return vec![Polynomial::constant(base, n, base.one())];
    }
    (0..n)
        .combinations_with_replacement(s)
        .map(|js| {
            js.iter().fold(Polynomial::constant(base, n, base.one()), |acc, &j| {
                acc.mul(&ctx.sequence()[j])
            })
        })
        .collect()
}

/// The ideal power I^s, presented degreewise on its canonical lattice basis.
pub fn ideal_power(ctx: &RingContext, s: usize, degree_max: usize) -> GradedModule {
    let base = ctx.base();
    let products = sequence_products(ctx, s);
    let pieces: Vec<Piece> = (0..=degree_max)
        .map(|d| {
            let embed = ideal_piece_basis(ctx, &products, d);
            let gens = embed.cols();
            Piece { gens, relations: ExactMatrix::zero(base, gens, 0), embed }
        })
        .collect();
    GradedModule::build(ctx.clone(), format!("I^{s}"), degree_max, pieces)
}

/// The quotient of two nested ideal powers, presented on the basis of the
/// larger one with the smaller one's basis as relations.
pub fn quotient_of_powers(
    numerator: &GradedModule,
    denominator: &GradedModule,
    label: String,
) -> GradedModule {
    let ctx = numerator.ctx().clone();
    let degree_max = numerator.degree_max().min(denominator.degree_max());
    let pieces: Vec<Piece> = (0..=degree_max)
        .map(|d| {
            let big = &numerator.piece(d).embed;
            let small = &denominator.piece(d).embed;
            let mut relations = ExactMatrix::zero(ctx.base(), big.cols(), small.cols());
            for c in 0..small.cols() {
                let x = big
                    .solve_in_image(&small.column(c), LiftStrategy::Primary)
                    .expect("denominator is not contained in numerator");
                relations.set_column(c, &x);
            }
            Piece { gens: big.cols(), relations, embed: big.clone() }
        })
        .collect();
    GradedModule::build(ctx, label, degree_max, pieces)
}

/// I^s/I^t for t > s, built from scratch.
pub fn filtration_quotient(
    ctx: &RingContext,
    s: usize,
    t: usize,
    degree_max: usize,
) -> GradedModule {
    assert!(t > s, "filtration quotient needs t > s");
    let num = ideal_power(ctx, s, degree_max);
    let den = ideal_power(ctx, t, degree_max);
    quotient_of_powers(&num, &den, format!("I^{s}/I^{t}"))
}

/// A degreewise map between presented modules, given on generators.
#[derive(Debug, Clone)]
pub struct ModuleMorphism {
    maps: Vec<ExactMatrix>,
}

impl ModuleMorphism {
    /// The map induced by the identity of R between two subquotients whose
    /// underlying lattices are nested: each source generator is expressed in
    /// the target's basis.  Faults when the lattices are not nested.
    pub fn from_embeds(source: &GradedModule, target: &GradedModule) -> ModuleMorphism {
        let degree_max = source.degree_max().min(target.degree_max());
        let maps: Vec<ExactMatrix> = (0..=degree_max)
            .map(|d| {
                let src = &source.piece(d).embed;
                let tgt = &target.piece(d).embed;
                let mut m = ExactMatrix::zero(src.ring(), tgt.cols(), src.cols());
                for c in 0..src.cols() {
                    let x = tgt.solve_in_image(&src.column(c), LiftStrategy::Primary).expect(
                        "source lattice is not contained in the target lattice",
                    );
                    m.set_column(c, &x);
                }
                m
            })
            .collect();
        let f = ModuleMorphism { maps };
        f.assert_valid(source, target);
        f
    }

    pub fn map(&self, d: usize) -> &ExactMatrix {
        &self.maps[d]
    }

    pub fn degree_max(&self) -> usize {
        self.maps.len() - 1
    }

    /// Relations map into relations and the map commutes with every
    /// r_j-action modulo target relations.
    fn assert_valid(&self, source: &GradedModule, target: &GradedModule) {
        let ctx = source.ctx();
        for d in 0..=self.degree_max() {
            let moved = self.maps[d].mul(&source.piece(d).relations);
            for c in 0..moved.cols() {
                assert!(
                    vanishes_in_presented(&moved.column(c), &target.piece(d).relations),
                    "morphism {} -> {} does not preserve relations at degree {d}",
                    source.label(),
                    target.label()
                );
            }
        }
        for j in 0..ctx.nvars() {
            let e = ctx.seq_degree(j);
            for d in 0..=self.degree_max().saturating_sub(e) {
                let lhs = self.maps[d + e].mul(source.action(j, d));
                let rhs = target.action(j, d).mul(&self.maps[d]);
                let diff = lhs.sub(&rhs);
                for c in 0..diff.cols() {
                    assert!(
                        vanishes_in_presented(&diff.column(c), &target.piece(d + e).relations),
                        "morphism {} -> {} does not commute with r_{} at degree {d}",
                        source.label(),
                        target.label(),
                        j + 1
                    );
                }
            }
        }
    }
}

/// Names for the short exact sequences of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SesTag {
    /// 0 -> I^{s+1} -> I^s -> I^s/I^{s+1} -> 0
    DefSes(usize),
    /// The same sequence in its role as the top row of the pushout square.
    E(usize),
    /// 0 -> I^{s+1}/I^{s+2} -> I^s/I^{s+2} -> I^s/I^{s+1} -> 0
    F(usize),
    /// 0 -> I -> R -> R/I -> 0
    ROverI,
}

impl fmt::Display for SesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SesTag::DefSes(s) => write!(f, "DEFSES({s})"),
            SesTag::E(s) => write!(f, "E({s})"),
            SesTag::F(s) => write!(f, "F({s})"),
            SesTag::ROverI => write!(f, "R_OVER_I"),
        }
    }
}

/// A verified short exact sequence 0 -> A -> B -> C -> 0 of graded modules.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub tag: SesTag,
    pub a: GradedModule,
    pub b: GradedModule,
    pub c: GradedModule,
    pub i: ModuleMorphism,
    pub p: ModuleMorphism,
}

impl ShortExactSequence {
    pub fn degree_max(&self) -> usize {
        self.i.degree_max().min(self.p.degree_max())
    }
}

/// Builds the tagged sequence and verifies exactness degreewise; faults on
/// an exactness failure, which would be an internal consistency bug.
pub fn build_ses(ctx: &RingContext, tag: SesTag, degree_max: usize) -> ShortExactSequence {
    let (a, b, c) = match tag {
        SesTag::DefSes(s) | SesTag::E(s) => {
            let a = ideal_power(ctx, s + 1, degree_max);
            let b = ideal_power(ctx, s, degree_max);
            let c = quotient_of_powers(&b, &a, format!("I^{s}/I^{}", s + 1));
            (a, b, c)
        }
        SesTag::ROverI => {
            let a = ideal_power(ctx, 1, degree_max);
            let b = ideal_power(ctx, 0, degree_max);
            let c = quotient_of_powers(&b, &a, "R/I".to_string());
            (a, b, c)
        }
        SesTag::F(s) => {
            let top = ideal_power(ctx, s, degree_max);
            let mid = ideal_power(ctx, s + 1, degree_max);
            let bot = ideal_power(ctx, s + 2, degree_max);
            let a = quotient_of_powers(&mid, &bot, format!("I^{}/I^{}", s + 1, s + 2));
            let b = quotient_of_powers(&top, &bot, format!("I^{s}/I^{}", s + 2));
            let c = quotient_of_powers(&top, &mid, format!("I^{s}/I^{}", s + 1));
            (a, b, c)
        }
    };
    let i = ModuleMorphism::from_embeds(&a, &b);
    let p = ModuleMorphism::from_embeds(&b, &c);
    let ses = ShortExactSequence { tag, a, b, c, i, p };
    let report = verify_ses_exactness(&ses);
    assert!(
        report.is_pass(),
        "constructed sequence {} is not exact: {:?}",
        tag,
        report.witness
    );
    ses
}

/// Degreewise exactness: i injective, p surjective, ker p = im i.
pub fn verify_ses_exactness(ses: &ShortExactSequence) -> CheckReport {
    let base = ses.a.ctx().base();
    for d in 0..=ses.degree_max() {
        let (pa, pb, pc) = (ses.a.piece(d), ses.b.piece(d), ses.c.piece(d));
        let i = ses.i.map(d);
        let p = ses.p.map(d);

        // injectivity: anything i sends into the relations of B must already
        // be a relation of A
        if pa.gens > 0 {
            let ker = i.hstack(&pb.relations).kernel_basis().top_rows(pa.gens);
            for c in 0..ker.cols() {
                let v = ker.column(c);
                if !vanishes_in_presented(&v, &pa.relations) {
                    return CheckReport::fail(format!(
                        "{}: injection has a kernel class at degree {d}",
                        ses.tag
                    ));
                }
            }
        }

        // surjectivity: cokernel of p vanishes
        let coker = presented_homology(
            p,
            &ExactMatrix::zero(base, 0, pc.gens),
            &pc.relations,
            &ExactMatrix::zero(base, 0, 0),
        );
        if !coker.invariants.is_trivial() {
            return CheckReport::fail(format!(
                "{}: projection is not surjective at degree {d} (cokernel {})",
                ses.tag, coker.invariants
            ));
        }

        // exactness in the middle
        let mid = presented_homology(i, p, &pb.relations, &pc.relations);
        if !mid.invariants.is_trivial() {
            return CheckReport::fail(format!(
                "{}: homology {} at the middle term in degree {d}",
                ses.tag, mid.invariants
            ));
        }
    }
    CheckReport::pass()
}

/// For the morphism (E(s) -> F(s)) given by reducing the first two terms
/// modulo I^{s+2}: the squares commute and F(s) is the pushout, i.e.
/// A_E -> A_F (+) B_E -> B_F -> 0 is exact.
pub fn verify_pushout(e: &ShortExactSequence, f: &ShortExactSequence) -> CheckReport {
    let base = e.a.ctx().base();
    let degree_max = e.degree_max().min(f.degree_max());
    let pa = ModuleMorphism::from_embeds(&e.a, &f.a);
    let pb = ModuleMorphism::from_embeds(&e.b, &f.b);
    for d in 0..=degree_max {
        // commuting squares, modulo target relations
        let left = pb.map(d).mul(e.i.map(d)).sub(&f.i.map(d).mul(pa.map(d)));
        for c in 0..left.cols() {
            if !vanishes_in_presented(&left.column(c), &f.b.piece(d).relations) {
                return CheckReport::fail(format!("first square does not commute at degree {d}"));
            }
        }
        let right = f.p.map(d).mul(pb.map(d)).sub(e.p.map(d));
        for c in 0..right.cols() {
            if !vanishes_in_presented(&right.column(c), &f.c.piece(d).relations) {
                return CheckReport::fail(format!("second square does not commute at degree {d}"));
            }
        }

        // pushout: A_E --(p_a, -i_E)--> A_F (+) B_E --(i_F, p_b)--> B_F -> 0
        let first = pa.map(d).vstack(&e.i.map(d).neg());
        let second = f.i.map(d).hstack(pb.map(d));
        let rel_mid =
            ExactMatrix::block_diag(base, &[&f.a.piece(d).relations, &e.b.piece(d).relations]);
        let rel_out = &f.b.piece(d).relations;
        let mid = presented_homology(&first, &second, &rel_mid, rel_out);
        if !mid.invariants.is_trivial() {
            return CheckReport::fail(format!(
                "pushout square is not exact in the middle at degree {d}"
            ));
        }
        let coker = presented_homology(
            &second,
            &ExactMatrix::zero(base, 0, f.b.piece(d).gens),
            rel_out,
            &ExactMatrix::zero(base, 0, 0),
        );
        if !coker.invariants.is_trivial() {
            return CheckReport::fail(format!(
                "pushout square is not surjective onto the middle of the target at degree {d}"
            ));
        }
    }
    CheckReport::pass()
}

/// Squares of the kernel vanish in the middle term: for every pair of
/// kernel generators in degrees d + e <= bound, the product of their
/// polynomial representatives is zero in B.
pub fn check_singular(ses: &ShortExactSequence, bound: usize) -> CheckReport {
    let ctx = ses.a.ctx();
    let top = bound.min(ses.degree_max());
    let mut pairs = 0usize;
    for d in 0..=top {
        for e in d..=(top - d) {
            for ia in 0..ses.a.gens(d) {
                let pd = ses.a.rep(d, ia);
                for ib in 0..ses.a.gens(e) {
                    let qd = ses.a.rep(e, ib);
                    let prod = pd.mul(&qd);
                    pairs += 1;
                    if prod.is_zero() {
                        continue;
                    }
                    let coords = ses
                        .b
                        .coords_in_lattice(&prod, d + e)
                        .expect("kernel product left the middle lattice");
                    if !vanishes_in_presented(&coords, &ses.b.piece(d + e).relations) {
                        return CheckReport::fail(format!(
                            "kernel product ({}) * ({}) is nonzero in {}",
                            pd.render(ctx.var_names()),
                            qd.render(ctx.var_names()),
                            ses.b.label()
                        ));
                    }
                }
            }
        }
    }
    CheckReport::pass_with_notes(vec![format!("{pairs} kernel products checked")])
}

/// The direct sum over s <= s_max of the sequences F(s), bigraded by s.
/// This is the square-zero extension of the associated graded algebra.
#[derive(Debug)]
pub struct BigradedExtension {
    pub s_max: usize,
    pub blocks: Vec<ShortExactSequence>,
}

impl BigradedExtension {
    /// Kernel products across blocks: an element of block s of the kernel
    /// times one of block t lies in I^{s+t+2}, hence vanishes in the block
    /// s + t middle term.  Blocks beyond s_max are truncated to zero.
    pub fn check_singular(&self, tower: &IdealTower, bound: usize) -> CheckReport {
        let ctx = tower.ctx();
        let mut pairs = 0usize;
        for s in 0..=self.s_max {
            for t in s..=self.s_max {
                if s + t > self.s_max {
                    continue; // truncated: the product block is zero
                }
                let target = &self.blocks[s + t].b;
                let ja = &self.blocks[s].a;
                let jb = &self.blocks[t].a;
                let top = bound.min(target.degree_max());
                for d in 0..=top {
                    for e in 0..=(top - d) {
                        for ia in 0..ja.gens(d) {
                            let pd = ja.rep(d, ia);
                            for ib in 0..jb.gens(e) {
                                let qd = jb.rep(e, ib);
                                let prod = pd.mul(&qd);
                                pairs += 1;
                                if prod.is_zero() {
                                    continue;
                                }
                                let coords = target
                                    .coords_in_lattice(&prod, d + e)
                                    .expect("kernel product left the extension lattice");
                                if !vanishes_in_presented(
                                    &coords,
                                    &target.piece(d + e).relations,
                                ) {
                                    return CheckReport::fail(format!(
                                        "blocks ({s},{t}): ({}) * ({}) is nonzero in {}",
                                        pd.render(ctx.var_names()),
                                        qd.render(ctx.var_names()),
                                        target.label()
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        CheckReport::pass_with_notes(vec![format!(
            "{pairs} kernel products checked across {} blocks",
            self.s_max + 1
        )])
    }
}

pub fn build_singular_extension(
    ctx: &RingContext,
    s_max: usize,
    degree_max: usize,
) -> BigradedExtension {
    let blocks = (0..=s_max).map(|s| build_ses(ctx, SesTag::F(s), degree_max)).collect();
    BigradedExtension { s_max, blocks }
}

/// A label for a product-basis element of gr_s = I^s/I^{s+1}: the class of
/// r^mu times a lift of the sigma-th basis element of (R/I)_{sigma_degree}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrLabel {
    pub mu: Monomial,
    pub sigma_degree: usize,
    pub sigma_index: usize,
}

/// A basis of a gr_s piece by products, with its change of coordinates.
#[derive(Debug, Clone)]
pub struct LabeledBasis {
    pub labels: Vec<GrLabel>,
    /// Coordinates of the labelled elements in the generator basis of the
    /// ambient ideal-power piece; square modulo relations.
    pub coords: ExactMatrix,
}

/// Everything degreewise about the tower I^0 supseteq I^1 supseteq ...,
/// built once and shared: ideal powers, the quotient R/I with basis lifts,
/// and the product structure of the associated graded algebra.
pub struct IdealTower {
    ctx: RingContext,
    degree_max: usize,
    powers: Vec<GradedModule>,
    /// Per degree: the presentation of (R/I)_d with its generator classes.
    s_pieces: Vec<Homology>,
    /// Per degree: polynomial lifts of the free generators of (R/I)_d.
    s_lifts: Vec<Vec<Polynomial>>,
}

impl IdealTower {
    /// Builds powers I^0 .. I^{s_max + 2} up to the degree bound.
    pub fn new(ctx: &RingContext, s_max: usize, degree_max: usize) -> IdealTower {
        let powers: Vec<GradedModule> =
            (0..=s_max + 2).map(|s| ideal_power(ctx, s, degree_max)).collect();
        let base = ctx.base();
        let mut s_pieces = Vec::with_capacity(degree_max + 1);
        let mut s_lifts = Vec::with_capacity(degree_max + 1);
        for d in 0..=degree_max {
            let rank = ctx.piece_rank(d);
            let relations = powers[1].piece(d).embed.clone();
            let h = presented_homology(
                &ExactMatrix::zero(base, rank, 0),
                &ExactMatrix::zero(base, 0, rank),
                &relations,
                &ExactMatrix::zero(base, 0, 0),
            );
            let lifts: Vec<Polynomial> = (0..h.invariants.free_rank)
                .map(|i| ctx.from_coordinates(&h.cycle_basis.column(i), d))
                .collect();
            s_pieces.push(h);
            s_lifts.push(lifts);
        }
        IdealTower { ctx: ctx.clone(), degree_max, powers, s_pieces, s_lifts }
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn degree_max(&self) -> usize {
        self.degree_max
    }

    pub fn s_top(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn power(&self, s: usize) -> &GradedModule {
        &self.powers[s]
    }

    pub fn quotient(&self, s: usize, t: usize) -> GradedModule {
        assert!(t > s && t < self.powers.len());
        quotient_of_powers(&self.powers[s], &self.powers[t], format!("I^{s}/I^{t}"))
    }

    /// The tagged sequence assembled from the cached power lattices; the
    /// same presentations as `build_ses`, without rebuilding the tower.
    pub fn sequence(&self, tag: SesTag) -> ShortExactSequence {
        let (a, b, c) = match tag {
            SesTag::DefSes(s) | SesTag::E(s) => {
                (self.powers[s + 1].clone(), self.powers[s].clone(), self.quotient(s, s + 1))
            }
            SesTag::ROverI => {
                (self.powers[1].clone(), self.powers[0].clone(), self.quotient(0, 1))
            }
            SesTag::F(s) => (
                self.quotient(s + 1, s + 2),
                self.quotient(s, s + 2),
                self.quotient(s, s + 1),
            ),
        };
        let i = ModuleMorphism::from_embeds(&a, &b);
        let p = ModuleMorphism::from_embeds(&b, &c);
        let ses = ShortExactSequence { tag, a, b, c, i, p };
        let report = verify_ses_exactness(&ses);
        assert!(report.is_pass(), "sequence {tag} is not exact: {:?}", report.witness);
        ses
    }

    /// Invariants of (R/I)_d.
    pub fn s_invariants(&self, d: usize) -> &ModuleInvariants {
        &self.s_pieces[d].invariants
    }

    /// Lifted basis of the free part of (R/I)_d.
    pub fn s_lift(&self, d: usize) -> &[Polynomial] {
        &self.s_lifts[d]
    }

    /// Coordinates of a polynomial's class in the chosen basis of (R/I)_d.
    pub fn s_class(&self, p: &Polynomial, d: usize) -> Vec<Scalar> {
        self.s_pieces[d].class_of(&self.ctx.coordinates(p, d))
    }

    /// Exponent vectors of total degree s in descending lexicographic
    /// order; slot j has internal weight deg r_j.
    pub fn w_monomials(&self, s: usize) -> Vec<Monomial> {
        let n = self.ctx.nvars();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        fn rec(n: usize, pos: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if pos == n - 1 {
                exps[pos] = remaining;
                out.push(Monomial(exps.clone()));
                exps[pos] = 0;
                return;
            }
            for e in (0..=remaining).rev() {
                exps[pos] = e;
                rec(n, pos + 1, remaining - e, exps, out);
            }
            exps[pos] = 0;
        }
        if n == 0 {
            return out;
        }
        rec(n, 0, s as u32, &mut exps, &mut out);
        out
    }

    /// Internal degree of r^mu.
    pub fn w_degree(&self, mu: &Monomial) -> usize {
        mu.0.iter()
            .enumerate()
            .map(|(j, a)| (*a as usize) * self.ctx.seq_degree(j))
            .sum()
    }

    /// The product polynomial r^mu.
    pub fn w_product(&self, mu: &Monomial) -> Polynomial {
        let base = self.ctx.base();
        let mut p = Polynomial::constant(base, self.ctx.nvars(), base.one());
        for (j, a) in mu.0.iter().enumerate() {
            for _ in 0..*a {
                p = p.mul(&self.ctx.sequence()[j]);
            }
        }
        p
    }

    /// Product basis of (gr_s)_d: classes of r^mu * lift(sigma), ordered by
    /// mu then sigma.  `Err` when (R/I) has torsion in a needed degree, in
    /// which case the identification is not machine-checked.
    pub fn labeled_basis(&self, s: usize, d: usize) -> Result<LabeledBasis, String> {
        let power = &self.powers[s];
        let mut labels = Vec::new();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for mu in self.w_monomials(s) {
            let wd = self.w_degree(&mu);
            if wd > d {
                continue;
            }
            let rest = d - wd;
            if !self.s_invariants(rest).torsion.is_empty() {
                return Err(format!(
                    "(R/I)_{rest} has torsion {}; product bases need a free quotient",
                    self.s_invariants(rest)
                ));
            }
            let r_mu = self.w_product(&mu);
            for (si, sigma) in self.s_lifts[rest].iter().enumerate() {
                let p = r_mu.mul(sigma);
                let c = power
                    .coords_in_lattice(&p, d)
                    .expect("product representative left the ideal-power lattice");
                labels.push(GrLabel { mu: mu.clone(), sigma_degree: rest, sigma_index: si });
                cols.push(c);
            }
        }
        let coords =
            ExactMatrix::from_columns(self.ctx.base(), power.gens(d), &cols);
        Ok(LabeledBasis { labels, coords })
    }

    /// Whether the labelled products form a basis of (gr_s)_d: the induced
    /// map from the free module on the labels is injective and surjective.
    pub fn labeled_basis_is_iso(&self, s: usize, d: usize, lb: &LabeledBasis) -> CheckReport {
        let base = self.ctx.base();
        let power = &self.powers[s];
        let relations = &self.powers[s + 1].rebase_relations(power, d);
        // injectivity
        if !lb.labels.is_empty() {
            let ker = lb.coords.hstack(relations).kernel_basis().top_rows(lb.labels.len());
            for c in 0..ker.cols() {
                if !ker.column(c).iter().all(|x| base.is_zero(x)) {
                    return CheckReport::fail(format!(
                        "product classes are dependent in gr_{s} at degree {d}"
                    ));
                }
            }
        }
        // surjectivity
        let coker = presented_homology(
            &lb.coords.hstack(relations),
            &ExactMatrix::zero(base, 0, power.gens(d)),
            &ExactMatrix::zero(base, power.gens(d), 0),
            &ExactMatrix::zero(base, 0, 0),
        );
        if !coker.invariants.is_trivial() {
            return CheckReport::fail(format!(
                "product classes do not span gr_{s} at degree {d} (cokernel {})",
                coker.invariants
            ));
        }
        CheckReport::pass()
    }

    /// Coordinates of a gr_s piece vector (given on the ideal-power
    /// generators) in a labelled product basis.
    pub fn to_labeled_coords(
        &self,
        s: usize,
        d: usize,
        lb: &LabeledBasis,
        v: &[Scalar],
    ) -> Vec<Scalar> {
        let power = &self.powers[s];
        let relations = self.powers[s + 1].rebase_relations(power, d);
        let combined = lb.coords.hstack(&relations);
        let x = combined
            .solve_in_image(v, LiftStrategy::Primary)
            .expect("vector is not expressible in the product basis");
        x[..lb.labels.len()].to_vec()
    }
}

impl GradedModule {
    /// Relation columns this module's lattice induces on another module's
    /// generator basis at degree d (self must be contained in `ambient`).
    pub fn rebase_relations(&self, ambient: &GradedModule, d: usize) -> ExactMatrix {
        let own = &self.piece(d).embed;
        let amb = &ambient.piece(d).embed;
        let mut m = ExactMatrix::zero(own.ring(), amb.cols(), own.cols());
        for c in 0..own.cols() {
            let x = amb
                .solve_in_image(&own.column(c), LiftStrategy::Primary)
                .expect("lattice is not contained in the ambient one");
            m.set_column(c, &x);
        }
        m
    }
}

/// The associated graded algebra is the symmetric algebra on I/I^2: the
/// residue classes of the r_j freely generate, every bidegree of gr is
/// spanned by the corresponding products, and multiplication of classes
/// agrees with multiplication of the labels.
pub fn verify_gr_symmetric_algebra(
    tower: &IdealTower,
    s_max: usize,
    bound: usize,
) -> CheckReport {
    let ctx = tower.ctx();
    let base = ctx.base();
    let top = bound.min(tower.degree_max());

    // the identification needs torsion-free quotient pieces throughout
    for d in 0..=top {
        if !tower.s_invariants(d).torsion.is_empty() {
            return CheckReport::skipped(format!(
                "(R/I)_{d} has torsion {}; the symmetric-algebra identification is only \
                 machine-checked for torsion-free quotients",
                tower.s_invariants(d)
            ));
        }
    }

    // product bases in every bidegree, with cached label positions
    let mut bases: BTreeMap<(usize, usize), LabeledBasis> = BTreeMap::new();
    for s in 0..=(2 * s_max).min(tower.s_top() - 1) {
        for d in 0..=top {
            let lb = match tower.labeled_basis(s, d) {
                Ok(lb) => lb,
                Err(reason) => return CheckReport::skipped(reason),
            };
            let iso = tower.labeled_basis_is_iso(s, d, &lb);
            if !iso.is_pass() {
                return iso;
            }
            bases.insert((s, d), lb);
        }
    }

    // multiplicativity: {r^mu sigma} * {r^nu sigma'} = {r^(mu+nu) (sigma sigma')}
    let mut checked = 0usize;
    for s in 0..=s_max {
        for t in s..=s_max {
            if s + t > tower.s_top() - 1 {
                continue;
            }
            for d in 0..=top {
                for e in 0..=(top - d) {
                    let left = &bases[&(s, d)];
                    let right = &bases[&(t, e)];
                    let target = &bases[&(s + t, d + e)];
                    for (li, ll) in left.labels.iter().enumerate() {
                        let lp = tower
                            .w_product(&ll.mu)
                            .mul(&tower.s_lifts[ll.sigma_degree][ll.sigma_index]);
                        let _ = li;
                        for rl in right.labels.iter() {
                            let rp = tower
                                .w_product(&rl.mu)
                                .mul(&tower.s_lifts[rl.sigma_degree][rl.sigma_index]);
                            let prod = lp.mul(&rp);
                            let coords = tower
                                .power(s + t)
                                .coords_in_lattice(&prod, d + e)
                                .expect("gr product left its lattice");
                            let got = tower.to_labeled_coords(s + t, d + e, target, &coords);

                            // expected: decompose sigma * sigma' in the
                            // quotient basis and place at mu + nu
                            let mu_nu = ll.mu.mul(&rl.mu);
                            let sig_prod = tower.s_lifts[ll.sigma_degree][ll.sigma_index]
                                .mul(&tower.s_lifts[rl.sigma_degree][rl.sigma_index]);
                            let sig_deg = ll.sigma_degree + rl.sigma_degree;
                            let sig_coords = tower.s_class(&sig_prod, sig_deg);
                            let mut expected = vec![base.zero(); target.labels.len()];
                            for (ti, tl) in target.labels.iter().enumerate() {
                                if tl.mu == mu_nu && tl.sigma_degree == sig_deg {
                                    expected[ti] = sig_coords[tl.sigma_index].clone();
                                }
                            }
                            if got != expected {
                                return CheckReport::fail(format!(
                                    "gr product of ({}, {:?}) and ({}, {:?}) does not match \
                                     the symmetric-algebra product",
                                    s, ll.mu.0, t, rl.mu.0
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    CheckReport::pass_with_notes(vec![format!("{checked} basis products verified")])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;
    use crate::ring::BaseRing;

    fn vars2() -> RingContext {
        RingContext::variables(BaseRing::Integers, 2)
    }

    fn mixed() -> RingContext {
        let base = BaseRing::Integers;
        let x = Polynomial::variable(base, 2, 0);
        let y = Polynomial::variable(base, 2, 1);
        RingContext::new(
            base,
            vec!["x".into(), "y".into()],
            vec![1, 1],
            vec![x.mul(&x), y.mul(&y).mul(&y)],
        )
        .unwrap()
    }

    #[test]
    fn ideal_power_of_mixed_sequence_degree_three() {
        // (x^2, y^3), s = 1, degree 3: basis {x^3, x^2 y, y^3}
        let ctx = mixed();
        let m = ideal_power(&ctx, 1, 4);
        assert_eq!(m.gens(3), 3);
        let reps: Vec<String> =
            (0..3).map(|i| m.rep(3, i).render(ctx.var_names())).collect();
        assert_eq!(reps, vec!["x^3", "x^2*y", "y^3"]);
    }

    #[test]
    fn zeroth_power_is_the_whole_ring() {
        let ctx = vars2();
        let m = ideal_power(&ctx, 0, 4);
        for d in 0..=4 {
            assert_eq!(m.gens(d), ctx.piece_rank(d));
            assert_eq!(m.piece(d).embed, ExactMatrix::identity(ctx.base(), m.gens(d)));
        }
    }

    #[test]
    fn second_power_of_variables_fills_degree_two() {
        let ctx = vars2();
        let m = ideal_power(&ctx, 2, 4);
        assert_eq!(m.gens(2), 3);
        assert_eq!(m.gens(1), 0);
    }

    #[test]
    fn filtration_quotient_ranks() {
        let ctx = vars2();
        let q12 = filtration_quotient(&ctx, 1, 2, 4);
        let inv = q12.piece_invariants(1);
        assert_eq!(inv, ModuleInvariants::free(2));
        let q01 = filtration_quotient(&ctx, 0, 1, 4);
        assert_eq!(q01.piece_invariants(0), ModuleInvariants::free(1));
        let q13 = filtration_quotient(&ctx, 1, 3, 4);
        assert_eq!(q13.piece_invariants(2), ModuleInvariants::free(3));
    }

    #[test]
    fn gr_piece_ranks_match_binomials() {
        // for the variable sequence, (gr_s)_d is free of rank C(n+s-1, n-1)
        // when d = s and zero otherwise
        for n in 1..=3usize {
            let ctx = RingContext::variables(BaseRing::Integers, n);
            for s in 0..=3usize {
                let gr = filtration_quotient(&ctx, s, s + 1, 6);
                for d in 0..=6usize {
                    let inv = gr.piece_invariants(d);
                    let expected = if d == s {
                        num_integer::binomial(n + s - 1, n - 1)
                    } else {
                        0
                    };
                    assert!(inv.torsion.is_empty());
                    assert_eq!(inv.free_rank, expected, "n={n} s={s} d={d}");
                }
            }
        }
    }

    #[test]
    fn canonical_sequences_are_exact() {
        let ctx = vars2();
        for tag in [SesTag::DefSes(0), SesTag::F(0), SesTag::F(1), SesTag::ROverI] {
            let ses = build_ses(&ctx, tag, 5);
            assert!(verify_ses_exactness(&ses).is_pass(), "{tag}");
        }
        let ctx = mixed();
        for tag in [SesTag::DefSes(0), SesTag::F(0)] {
            let ses = build_ses(&ctx, tag, 7);
            assert!(verify_ses_exactness(&ses).is_pass(), "{tag} (mixed)");
        }
    }

    #[test]
    fn singular_check_accepts_f0_and_rejects_the_ideal() {
        let ctx = vars2();
        let f0 = build_ses(&ctx, SesTag::F(0), 5);
        assert_eq!(check_singular(&f0, 5).status, CheckStatus::Pass);

        let def = build_ses(&ctx, SesTag::DefSes(0), 5);
        let report = check_singular(&def, 5);
        assert_eq!(report.status, CheckStatus::Fail);
        let w = report.witness.unwrap();
        assert!(w.contains("kernel product") && w.contains("x1"), "{w}");
    }

    #[test]
    fn bigraded_extension_is_singular() {
        let ctx = vars2();
        let tower = IdealTower::new(&ctx, 2, 5);
        let ext = build_singular_extension(&ctx, 2, 5);
        assert_eq!(ext.check_singular(&tower, 5).status, CheckStatus::Pass);
    }

    #[test]
    fn pushout_square_for_the_tower() {
        let ctx = vars2();
        for s in 0..=1 {
            let e = build_ses(&ctx, SesTag::E(s), 5);
            let f = build_ses(&ctx, SesTag::F(s), 5);
            assert!(verify_pushout(&e, &f).is_pass(), "s = {s}");
        }
    }

    #[test]
    fn gr_is_the_symmetric_algebra_for_variables() {
        let ctx = vars2();
        let tower = IdealTower::new(&ctx, 2, 5);
        let report = verify_gr_symmetric_algebra(&tower, 2, 5);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn gr_is_the_symmetric_algebra_for_mixed_degrees() {
        let ctx = mixed();
        let tower = IdealTower::new(&ctx, 1, 7);
        let report = verify_gr_symmetric_algebra(&tower, 1, 7);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn torsion_quotient_is_reported() {
        // sequence (2x) over Z[x]: (R/I)_1 = Z/2
        let base = BaseRing::Integers;
        let two_x = Polynomial::variable(base, 1, 0).scale(&Scalar::Int(2.into()));
        let ctx = RingContext::new(base, vec!["x".into()], vec![1], vec![two_x]).unwrap();
        let tower = IdealTower::new(&ctx, 1, 3);
        assert_eq!(tower.s_invariants(1).torsion, vec![num_bigint::BigInt::from(2)]);
        let report = verify_gr_symmetric_algebra(&tower, 1, 3);
        assert_eq!(report.status, CheckStatus::Skipped);
    }

    #[test]
    fn w_monomials_are_descending_lex() {
        let ctx = vars2();
        let tower = IdealTower::new(&ctx, 1, 3);
        let mus: Vec<Vec<u32>> = tower.w_monomials(2).iter().map(|m| m.0.clone()).collect();
        assert_eq!(mus, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }
}
