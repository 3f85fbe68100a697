//! The named checks, their dependency-ordered execution, and the
//! machine-readable certificate produced by a run.
//!
//! A `Workspace` holds one instance (base ring, sequence, bounds, seed) and
//! shares the expensive artifacts — the ideal tower, the short exact
//! sequences, the Tor tables — across every check that needs them.  A run
//! never aborts on a mathematical failure: each check reports PASS, FAIL
//! with a witness, or SKIPPED with the prerequisite that failed.

use crate::exterior::{verify_bialgebra_identities, IndexSet};
use crate::homology::{subquotient_homology, ModuleInvariants};
use crate::matrix::{ExactMatrix, LiftStrategy};
use crate::model::{
    model_differential, sym_monomials, verify_colinearity, verify_comodule_structure,
    verify_model_exactness,
};
use crate::modules::{
    filtration_quotient, ideal_power, verify_gr_symmetric_algebra, BigradedExtension,
    GradedModule, GrLabel, IdealTower, LabeledBasis, ModuleMorphism, SesTag,
    ShortExactSequence,
};
use crate::poly::{Polynomial, RingContext};
use crate::report::{CheckReport, CheckStatus};
use crate::ring::{BaseRing, Scalar};
use crate::tor::{
    chain_cells, chain_dim, connecting_map, induced_map, snake_chain, tor_homology,
    verify_leibniz, ProductRule, TorTable, CONNECTING_SIGN,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Every check the suite knows, in the order they are run: prerequisites
/// always come before the checks that build on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckId {
    Regularity,
    Bialgebra,
    KoszulResolution,
    CorTor,
    PropGr,
    ModelExact,
    ModelColinear,
    Singular,
    Leibniz,
    Delta0,
    PropSequence,
    Factorization,
    LongSequence,
    Theorem1,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        CheckId::Regularity,
        CheckId::Bialgebra,
        CheckId::KoszulResolution,
        CheckId::CorTor,
        CheckId::PropGr,
        CheckId::ModelExact,
        CheckId::ModelColinear,
        CheckId::Singular,
        CheckId::Leibniz,
        CheckId::Delta0,
        CheckId::PropSequence,
        CheckId::Factorization,
        CheckId::LongSequence,
        CheckId::Theorem1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Regularity => "REGULARITY",
            CheckId::Bialgebra => "BIALGEBRA",
            CheckId::KoszulResolution => "KOSZUL_RESOLUTION",
            CheckId::CorTor => "COR_TOR",
            CheckId::PropGr => "PROP_GR",
            CheckId::ModelExact => "MODEL_EXACT",
            CheckId::ModelColinear => "MODEL_COLINEAR",
            CheckId::Singular => "SINGULAR",
            CheckId::Leibniz => "LEIBNIZ",
            CheckId::Delta0 => "DELTA0",
            CheckId::PropSequence => "PROP_SEQUENCE",
            CheckId::Factorization => "FACTORIZATION",
            CheckId::LongSequence => "LONG_SEQUENCE",
            CheckId::Theorem1 => "THEOREM1",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckId::Regularity => "each r_j is a nonzerodivisor modulo its predecessors",
            CheckId::Bialgebra => {
                "exterior-algebra differential, product, and coproduct identities"
            }
            CheckId::KoszulResolution => {
                "the Koszul complex resolves R/I: H_k = 0 for k >= 1, H_0 = R/I"
            }
            CheckId::CorTor => {
                "Tor(R/I, R/I) is the exterior algebra on classes e_1 .. e_n"
            }
            CheckId::PropGr => {
                "the associated graded algebra is the symmetric algebra on I/I^2"
            }
            CheckId::ModelExact => "the model complexes are exact with free kernels",
            CheckId::ModelColinear => {
                "the model differential commutes with the exterior coproduct"
            }
            CheckId::Singular => {
                "the bigraded extension is square-zero: kernel products vanish"
            }
            CheckId::Leibniz => {
                "connecting maps satisfy the Leibniz rule on Tor products"
            }
            CheckId::Delta0 => "the first connecting map sends e_j to -[r_j]",
            CheckId::PropSequence => {
                "connecting maps match the model differential in product bases"
            }
            CheckId::Factorization => {
                "each gr-connecting map factors through the ideal-power one"
            }
            CheckId::LongSequence => {
                "the spliced sequence of Tor groups over gr is exact"
            }
            CheckId::Theorem1 => {
                "0 -> Tor(S, I^s) -> Tor(S, gr_s) -> Tor(S, I^(s+1)) -> 0 degreewise"
            }
        }
    }

    /// Checks that are meaningless on a non-regular sequence and are
    /// skipped when REGULARITY fails.  The purely combinatorial checks and
    /// the resolution check itself still run.
    pub fn needs_regularity(self) -> bool {
        !matches!(
            self,
            CheckId::Regularity
                | CheckId::Bialgebra
                | CheckId::KoszulResolution
                | CheckId::ModelExact
                | CheckId::ModelColinear
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<CheckId, String> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown check id `{s}`"))
    }
}

/// Instance header of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDescription {
    pub base: String,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub sequence: Vec<String>,
    pub s_max: usize,
    pub degree_max: usize,
    pub seed: u64,
}

pub fn describe_instance(
    ctx: &RingContext,
    s_max: usize,
    degree_max: usize,
    seed: u64,
) -> InstanceDescription {
    InstanceDescription {
        base: render_base(ctx.base()),
        vars: ctx.var_names().to_vec(),
        weights: ctx.weights().to_vec(),
        sequence: ctx.sequence().iter().map(|p| p.render(ctx.var_names())).collect(),
        s_max,
        degree_max,
        seed,
    }
}

pub fn render_base(base: BaseRing) -> String {
    match base {
        BaseRing::Integers => "Z".to_string(),
        BaseRing::Rationals => "Q".to_string(),
        BaseRing::PrimeField(p) => format!("Fp {p}"),
    }
}

/// One check's outcome inside a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckFragment {
    pub id: String,
    pub status: CheckStatus,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub payload: Option<Value>,
}

/// The full machine-readable result of a run.  With timings disabled the
/// serialized form is byte-identical across runs on equal inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub instance: InstanceDescription,
    pub checks: Vec<CheckFragment>,
    pub overall: String,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.overall == "PASS"
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let i = &self.instance;
        out.push_str(&format!(
            "instance {}[{}] sequence ({}) s_max {} degree_max {} seed {}\n",
            i.base,
            i.vars.join(", "),
            i.sequence.join(", "),
            i.s_max,
            i.degree_max,
            i.seed
        ));
        for c in &self.checks {
            out.push_str(&format!("{:<18} {}", c.id, c.status));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  ({w})"));
            }
            out.push('\n');
        }
        out.push_str(&format!("overall {}\n", self.overall));
        out
    }
}

/// Knobs that do not change what is verified.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Compute independent Tor pieces across threads.
    pub parallel: bool,
    /// Record wall-clock times; off by default so certificates are
    /// reproducible byte for byte.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { parallel: true, timings: false }
    }
}

/// Whether the sequence is exactly the sequence of variables.  Structural
/// statements about bases are pinned to signed permutations only here.
pub fn is_variable_sequence(ctx: &RingContext) -> bool {
    let n = ctx.nvars();
    ctx.sequence()
        .iter()
        .enumerate()
        .all(|(j, r)| *r == Polynomial::variable(ctx.base(), n, j))
}

fn binom(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    num_integer::binomial(a as u64, b as u64) as usize
}

fn sha_hex(s: &str) -> String {
    let mut h = Sha256::new();
    h.update(s.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn try_inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let ring = m.ring();
    let mut out = ExactMatrix::zero(ring, m.rows(), m.cols());
    for j in 0..m.cols() {
        let mut e = vec![ring.zero(); m.rows()];
        e[j] = ring.one();
        let col = m.solve_in_image(&e, LiftStrategy::Primary)?;
        out.set_column(j, &col);
    }
    Some(out)
}

fn is_signed_permutation(m: &ExactMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let base = m.ring();
    let mut row_used = vec![false; m.rows()];
    for j in 0..m.cols() {
        let col = m.column(j);
        let nz: Vec<usize> = col
            .iter()
            .enumerate()
            .filter(|(_, v)| !base.is_zero(v))
            .map(|(i, _)| i)
            .collect();
        if nz.len() != 1 || row_used[nz[0]] {
            return false;
        }
        let v = &col[nz[0]];
        if !(base.is_one(v) || base.is_one(&base.neg(v))) {
            return false;
        }
        row_used[nz[0]] = true;
    }
    true
}

/// The chain e_T tensor 1 at (|T|, deg T): the unit coordinate of the
/// degree-zero piece under the cell T.
fn unit_chain(m: &GradedModule, k: usize, d: usize, t: &IndexSet) -> Vec<Scalar> {
    let cells = chain_cells(m, k, d);
    let mut v = vec![m.ctx().base().zero(); chain_dim(m, k, d)];
    let cell = cells.iter().find(|c| &c.set == t).expect("cell for the subset exists");
    assert_eq!(cell.piece_degree, Some(0), "unit chains live over the degree-zero piece");
    assert!(cell.gens >= 1);
    v[cell.offset] = m.ctx().base().one();
    v
}

/// Shared state for one instance.  Everything downstream of the tower is
/// built once, on first use, and only when the sequence is regular.
pub struct Workspace {
    ctx: RingContext,
    s_max: usize,
    degree_max: usize,
    seed: u64,
    parallel: bool,
    regularity: Option<CheckReport>,
    singular: Option<CheckReport>,
    tower: Option<IdealTower>,
    e_seq: BTreeMap<usize, ShortExactSequence>,
    f_seq: BTreeMap<usize, ShortExactSequence>,
    gr_tables: BTreeMap<usize, TorTable>,
    power_tables: BTreeMap<usize, TorTable>,
    proj: BTreeMap<usize, ModuleMorphism>,
    deltas: BTreeMap<(usize, usize, usize), ExactMatrix>,
}

impl Workspace {
    pub fn new(
        ctx: &RingContext,
        s_max: usize,
        degree_max: usize,
        seed: u64,
        parallel: bool,
    ) -> Workspace {
        assert!(s_max >= 1, "the tower needs at least one stage");
        assert!(
            degree_max >= ctx.max_seq_degree(),
            "degree bound below the top sequence degree sees no generators"
        );
        Workspace {
            ctx: ctx.clone(),
            s_max,
            degree_max,
            seed,
            parallel,
            regularity: None,
            singular: None,
            tower: None,
            e_seq: BTreeMap::new(),
            f_seq: BTreeMap::new(),
            gr_tables: BTreeMap::new(),
            power_tables: BTreeMap::new(),
            proj: BTreeMap::new(),
            deltas: BTreeMap::new(),
        }
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    fn regularity(&mut self) -> &CheckReport {
        if self.regularity.is_none() {
            self.regularity = Some(self.ctx.check_regular_sequence(self.degree_max));
        }
        self.regularity.as_ref().unwrap()
    }

    fn is_regular(&mut self) -> bool {
        self.regularity().is_pass()
    }

    /// Builds the tower, the E- and F-sequences, the projections onto the
    /// graded quotients, and fully populated Tor tables.
    fn ensure(&mut self) {
        if self.tower.is_some() {
            return;
        }
        assert!(self.is_regular(), "tower artifacts are only built over regular sequences");
        let n = self.ctx.nvars();
        let tower = IdealTower::new(&self.ctx, self.s_max, self.degree_max);
        for s in 0..=self.s_max {
            self.e_seq.insert(s, tower.sequence(SesTag::E(s)));
            self.f_seq.insert(s, tower.sequence(SesTag::F(s)));
        }
        for s in 0..=self.s_max + 1 {
            let mut gt = TorTable::new(tower.quotient(s, s + 1));
            gt.populate(n, self.degree_max, self.parallel);
            let proj = ModuleMorphism::from_embeds(tower.power(s), gt.module());
            let mut pt = TorTable::new(tower.power(s).clone());
            pt.populate(n, self.degree_max, self.parallel);
            self.gr_tables.insert(s, gt);
            self.power_tables.insert(s, pt);
            self.proj.insert(s, proj);
        }
        self.tower = Some(tower);
    }

    /// The map on Tor induced by the projection I^s -> I^s/I^(s+1).
    fn p_star(&self, s: usize, k: usize, d: usize) -> ExactMatrix {
        let src = &self.power_tables[&s];
        let tgt = &self.gr_tables[&s];
        induced_map(&self.proj[&s], src.module(), tgt.module(), src.at(k, d), tgt.at(k, d), k, d)
    }

    /// The connecting map of E(s): Tor_k(S, gr_s) -> Tor_{k-1}(S, I^(s+1)).
    fn eps_e(&self, s: usize, k: usize, d: usize) -> ExactMatrix {
        connecting_map(
            &self.e_seq[&s],
            self.gr_tables[&s].at(k, d),
            self.power_tables[&(s + 1)].at(k - 1, d),
            k,
            d,
            LiftStrategy::Primary,
        )
    }

    /// The connecting map of F(s): Tor_k(S, gr_s) -> Tor_{k-1}(S, gr_{s+1}),
    /// cached because three different checks walk the same bidegrees.
    fn delta_f(&mut self, s: usize, k: usize, d: usize) -> ExactMatrix {
        if let Some(m) = self.deltas.get(&(s, k, d)) {
            return m.clone();
        }
        let m = connecting_map(
            &self.f_seq[&s],
            self.gr_tables[&s].at(k, d),
            self.gr_tables[&(s + 1)].at(k - 1, d),
            k,
            d,
            LiftStrategy::Primary,
        );
        self.deltas.insert((s, k, d), m.clone());
        m
    }

    fn singular_report(&mut self) -> &CheckReport {
        if self.singular.is_none() {
            self.ensure();
            let ext = BigradedExtension {
                s_max: self.s_max,
                blocks: (0..=self.s_max).map(|s| self.f_seq[&s].clone()).collect(),
            };
            let rep = ext.check_singular(self.tower.as_ref().unwrap(), self.degree_max);
            self.singular = Some(rep);
        }
        self.singular.as_ref().unwrap()
    }

    /// Runs one check.  Checks whose hypotheses include regularity are
    /// skipped with a reason when REGULARITY fails.
    pub fn run(&mut self, id: CheckId) -> (CheckReport, Option<Value>) {
        if id.needs_regularity() && !self.is_regular() {
            let witness = self
                .regularity()
                .witness
                .clone()
                .unwrap_or_else(|| "sequence is not regular".to_string());
            return (
                CheckReport::skipped(format!("prerequisite REGULARITY failed: {witness}")),
                None,
            );
        }
        match id {
            CheckId::Regularity => (self.regularity().clone(), None),
            CheckId::Bialgebra => (verify_bialgebra_identities(&self.ctx, self.seed, 100), None),
            CheckId::KoszulResolution => self.check_koszul_resolution(),
            CheckId::CorTor => self.check_cor_tor(),
            CheckId::PropGr => {
                self.ensure();
                let rep = verify_gr_symmetric_algebra(
                    self.tower.as_ref().unwrap(),
                    self.s_max,
                    self.degree_max,
                );
                (rep, None)
            }
            CheckId::ModelExact => {
                (verify_model_exactness(self.ctx.nvars(), self.s_max, self.ctx.base()), None)
            }
            CheckId::ModelColinear => {
                let a = verify_colinearity(self.ctx.nvars(), self.s_max, self.ctx.base());
                let b = verify_comodule_structure(self.ctx.nvars(), self.ctx.base());
                (a.merge(b), None)
            }
            CheckId::Singular => (self.singular_report().clone(), None),
            CheckId::Leibniz => self.check_leibniz(),
            CheckId::Delta0 => self.check_delta0(),
            CheckId::PropSequence => self.check_prop_sequence(),
            CheckId::Factorization => self.check_factorization(),
            CheckId::LongSequence => self.check_long_sequence(),
            CheckId::Theorem1 => self.check_theorem1(),
        }
    }

    fn check_koszul_resolution(&mut self) -> (CheckReport, Option<Value>) {
        let n = self.ctx.nvars();
        let top = self.degree_max;
        let r_mod = ideal_power(&self.ctx, 0, top);
        let s_mod = filtration_quotient(&self.ctx, 0, 1, top);
        let mut h0 = Vec::new();
        for d in 0..=top {
            let h = tor_homology(&r_mod, 0, d);
            let expected = s_mod.piece_invariants(d);
            if h.invariants != expected {
                return (
                    CheckReport::fail(format!(
                        "H_0 in degree {d} is {} but R/I is {expected}",
                        h.invariants
                    )),
                    None,
                );
            }
            h0.push(h.invariants.free_rank);
            for k in 1..=n {
                let h = tor_homology(&r_mod, k, d);
                if !h.is_trivial() {
                    return (
                        CheckReport::fail(format!(
                            "H_{k} in degree {d} is {}, the complex is not a resolution",
                            h.invariants
                        )),
                        None,
                    );
                }
            }
        }
        (
            CheckReport::pass_with_notes(vec![format!(
                "H_k = 0 for 1 <= k <= {n} through degree {top}; H_0 matches R/I degreewise"
            )]),
            Some(json!({ "h0_ranks": h0 })),
        )
    }

    fn check_cor_tor(&mut self) -> (CheckReport, Option<Value>) {
        self.ensure();
        let ctx = self.ctx.clone();
        let base = ctx.base();
        let n = ctx.nvars();
        let top = self.degree_max;
        let set_degree =
            |t: &IndexSet| -> usize { t.iter().map(|j| ctx.seq_degree(j as usize)).sum() };
        let table = &self.gr_tables[&0];
        let module = table.module();

        // ranks, freeness, and the classes e_T as a basis in each bidegree
        let mut classes: BTreeMap<IndexSet, (usize, usize, Vec<Scalar>)> = BTreeMap::new();
        let mut ranks = vec![0usize; n + 1];
        for k in 0..=n {
            for d in 0..=top {
                let h = table.at(k, d);
                let subsets: Vec<IndexSet> = IndexSet::all_of_size(n, k)
                    .into_iter()
                    .filter(|t| set_degree(t) == d)
                    .collect();
                if !h.invariants.torsion.is_empty() {
                    return (
                        CheckReport::fail(format!(
                            "Tor_{k}(S, S) in degree {d} has torsion {}",
                            h.invariants
                        )),
                        None,
                    );
                }
                if h.invariants.free_rank != subsets.len() {
                    return (
                        CheckReport::fail(format!(
                            "Tor_{k}(S, S) in degree {d} has rank {} but {} subsets land there",
                            h.invariants.free_rank,
                            subsets.len()
                        )),
                        None,
                    );
                }
                ranks[k] += subsets.len();
                if subsets.is_empty() {
                    continue;
                }
                let mut cols = Vec::new();
                for t in &subsets {
                    let chain = unit_chain(module, k, d, t);
                    cols.push(h.class_of(&chain));
                }
                let b = ExactMatrix::from_columns(base, h.generator_count(), &cols);
                if try_inverse(&b).is_none() {
                    return (
                        CheckReport::fail(format!(
                            "the classes e_T do not form a basis of Tor_{k}(S, S) in degree {d}"
                        )),
                        None,
                    );
                }
                for (t, c) in subsets.into_iter().zip(cols) {
                    classes.insert(t, (k, d, c));
                }
            }
        }
        for (k, r) in ranks.iter().enumerate() {
            if *r != binom(n, k) {
                return (
                    CheckReport::fail(format!(
                        "total rank of Tor_{k}(S, S) is {r}, expected C({n}, {k}) = {}",
                        binom(n, k)
                    )),
                    None,
                );
            }
        }

        // multiplication matches the wedge, including vanishing squares
        let rule = ProductRule { left: module, right: module, target: module };
        let mut products = 0usize;
        for (t1, (k1, d1, _)) in &classes {
            for (t2, (k2, d2, _)) in &classes {
                if k1 + k2 > n || d1 + d2 > top {
                    continue;
                }
                let u = unit_chain(module, *k1, *d1, t1);
                let v = unit_chain(module, *k2, *d2, t2);
                let prod = rule.chain_product(*k1, *d1, &u, *k2, *d2, &v);
                let h = table.at(k1 + k2, d1 + d2);
                let got = h.class_of(&prod);
                let expected: Vec<Scalar> = match t1.merge(t2) {
                    None => vec![base.zero(); h.generator_count()],
                    Some((union, negate)) => {
                        let (_, _, c) = &classes[&union];
                        if negate {
                            c.iter().map(|x| base.neg(x)).collect()
                        } else {
                            c.clone()
                        }
                    }
                };
                if got != expected {
                    return (
                        CheckReport::fail(format!(
                            "product of e_{} and e_{} does not match the wedge",
                            t1.render(),
                            t2.render()
                        )),
                        None,
                    );
                }
                products += 1;
            }
        }
        (
            CheckReport::pass_with_notes(vec![format!(
                "ranks C({n}, k) confirmed; {products} products match the exterior algebra"
            )]),
            Some(json!({ "ranks": ranks, "products_checked": products })),
        )
    }

    fn check_leibniz(&mut self) -> (CheckReport, Option<Value>) {
        let singular = self.singular_report().clone();
        if !singular.is_pass() {
            return (
                CheckReport::skipped(format!(
                    "prerequisite SINGULAR failed: {}",
                    singular.witness.unwrap_or_default()
                )),
                None,
            );
        }
        (verify_leibniz(&self.ctx, self.s_max, self.degree_max), None)
    }

    fn check_delta0(&mut self) -> (CheckReport, Option<Value>) {
        self.ensure();
        let ctx = self.ctx.clone();
        let base = ctx.base();
        let n = ctx.nvars();
        let sign = base.from_i64(CONNECTING_SIGN);
        let mut images = Vec::new();
        for j in 0..n {
            let dj = ctx.seq_degree(j);
            let ses = &self.f_seq[&0];
            let z = unit_chain(&ses.c, 1, dj, &IndexSet::singleton(j as u8));
            let raw = snake_chain(ses, 1, dj, &z, LiftStrategy::Primary);
            let h = self.gr_tables[&1].at(0, dj);
            let pinned: Vec<Scalar> = raw.iter().map(|v| base.mul(&sign, v)).collect();
            let lhs = h.class_of(&pinned);
            let rj = &ctx.sequence()[j];
            let coords = self.gr_tables[&1]
                .module()
                .coords_in_lattice(rj, dj)
                .expect("r_j lies in the ideal lattice");
            let minus: Vec<Scalar> = coords.iter().map(|v| base.neg(v)).collect();
            let rhs = h.class_of(&minus);
            if lhs != rhs {
                return (
                    CheckReport::fail(format!(
                        "delta0(e_{}) is not -[{}]",
                        j + 1,
                        rj.render(ctx.var_names())
                    )),
                    None,
                );
            }
            images.push(format!("delta0(e_{}) = -[{}]", j + 1, rj.render(ctx.var_names())));
        }
        (CheckReport::pass_with_notes(images.clone()), Some(json!({ "images": images })))
    }

    fn check_theorem1(&mut self) -> (CheckReport, Option<Value>) {
        self.ensure();
        let base = self.ctx.base();
        let n = self.ctx.nvars();
        let top = self.degree_max;
        let variable = is_variable_sequence(&self.ctx);
        let mut gr_ranks: BTreeMap<String, usize> = BTreeMap::new();
        let mut cells = 0usize;
        for s in 0..=self.s_max {
            for k in 0..=n {
                let mut total_mid = 0usize;
                for d in 0..=top {
                    let a_inv = self.power_tables[&s].at(k, d).invariants.clone();
                    let m_inv = self.gr_tables[&s].at(k, d).invariants.clone();
                    let c_inv = if k >= 1 {
                        self.power_tables[&(s + 1)].at(k - 1, d).invariants.clone()
                    } else {
                        ModuleInvariants::free(0)
                    };
                    for (name, inv) in [
                        ("Tor_k(S, I^s)", &a_inv),
                        ("Tor_k(S, gr_s)", &m_inv),
                        ("Tor_{k-1}(S, I^(s+1))", &c_inv),
                    ] {
                        if !inv.torsion.is_empty() {
                            return (
                                CheckReport::fail(format!(
                                    "{name} at (s={s}, k={k}, d={d}) has torsion: {inv}"
                                )),
                                None,
                            );
                        }
                    }
                    let inj = self.p_star(s, k, d);
                    let eps = if k >= 1 {
                        self.eps_e(s, k, d)
                    } else {
                        ExactMatrix::zero(base, 0, m_inv.free_rank)
                    };
                    if inj.kernel_basis().cols() != 0 {
                        return (
                            CheckReport::fail(format!(
                                "Tor_k(S, I^s) -> Tor_k(S, gr_s) is not injective at (s={s}, k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    if !eps.mul(&inj).is_zero_matrix() {
                        return (
                            CheckReport::fail(format!(
                                "composite through Tor_k(S, gr_s) is nonzero at (s={s}, k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    if !subquotient_homology(&inj, &eps).is_trivial() {
                        return (
                            CheckReport::fail(format!(
                                "sequence is not exact at Tor_k(S, gr_s) for (s={s}, k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    let coker =
                        subquotient_homology(&eps, &ExactMatrix::zero(base, 0, eps.rows()));
                    if !coker.is_trivial() {
                        return (
                            CheckReport::fail(format!(
                                "connecting map is not surjective at (s={s}, k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    if a_inv.free_rank + c_inv.free_rank != m_inv.free_rank {
                        return (
                            CheckReport::fail(format!(
                                "rank bookkeeping fails at (s={s}, k={k}, d={d}): {} + {} != {}",
                                a_inv.free_rank, c_inv.free_rank, m_inv.free_rank
                            )),
                            None,
                        );
                    }
                    if variable {
                        let expected = if d == s + k {
                            binom(n, k) * binom(n + s - 1, n - 1)
                        } else {
                            0
                        };
                        if m_inv.free_rank != expected {
                            return (
                                CheckReport::fail(format!(
                                    "rank of Tor_{k}(S, gr_{s}) in degree {d} is {}, expected {expected}",
                                    m_inv.free_rank
                                )),
                                None,
                            );
                        }
                    }
                    total_mid += m_inv.free_rank;
                    cells += 1;
                }
                gr_ranks.insert(format!("s{s}k{k}"), total_mid);
            }
        }
        (
            CheckReport::pass_with_notes(vec![format!(
                "{cells} bidegree cells exact with free terms through s = {}",
                self.s_max
            )]),
            Some(json!({ "gr_ranks": gr_ranks })),
        )
    }

    fn check_factorization(&mut self) -> (CheckReport, Option<Value>) {
        self.ensure();
        let n = self.ctx.nvars();
        let top = self.degree_max;
        let mut identities = 0usize;
        for s in 0..=self.s_max {
            for k in 1..=n {
                for d in 0..=top {
                    let delta = self.delta_f(s, k, d);
                    let eps = self.eps_e(s, k, d);
                    let p1 = self.p_star(s + 1, k - 1, d);
                    if delta != p1.mul(&eps) {
                        return (
                            CheckReport::fail(format!(
                                "delta_{s} does not factor through the ideal-power connecting map at (k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    identities += 1;
                }
            }
        }
        (
            CheckReport::pass_with_notes(vec![format!(
                "{identities} factorizations delta = p_* o eps verified"
            )]),
            Some(json!({ "identities_checked": identities })),
        )
    }

    fn check_long_sequence(&mut self) -> (CheckReport, Option<Value>) {
        self.ensure();
        let base = self.ctx.base();
        let n = self.ctx.nvars();
        let top = self.degree_max;
        let mut nodes = 0usize;
        for k in 0..=n {
            for d in 0..=top {
                let last = k.min(self.s_max);
                for node in 0..=last {
                    let inv = self.gr_tables[&node].at(k - node, d).invariants.clone();
                    if !inv.torsion.is_empty() {
                        return (
                            CheckReport::fail(format!(
                                "Tor_{}(S, gr_{node}) in degree {d} has torsion: {inv}",
                                k - node
                            )),
                            None,
                        );
                    }
                    let gens = inv.free_rank;
                    let d_in = if node == 0 {
                        if k == 0 {
                            self.p_star(0, 0, d)
                        } else {
                            ExactMatrix::zero(base, gens, 0)
                        }
                    } else {
                        self.delta_f(node - 1, k - node + 1, d)
                    };
                    let d_out = if k > node {
                        self.delta_f(node, k - node, d)
                    } else {
                        ExactMatrix::zero(base, 0, gens)
                    };
                    if k == 0 && node == 0 && d_in.kernel_basis().cols() != 0 {
                        return (
                            CheckReport::fail(format!(
                                "the unit map S -> Tor_0(S, S) is not injective in degree {d}"
                            )),
                            None,
                        );
                    }
                    if !d_out.mul(&d_in).is_zero_matrix() {
                        return (
                            CheckReport::fail(format!(
                                "consecutive maps do not compose to zero at node {node} (k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    if !subquotient_homology(&d_in, &d_out).is_trivial() {
                        return (
                            CheckReport::fail(format!(
                                "long sequence is not exact at Tor_{}(S, gr_{node}) in degree {d}",
                                k - node
                            )),
                            None,
                        );
                    }
                    nodes += 1;
                }
            }
        }
        (
            CheckReport::pass_with_notes(vec![format!(
                "exact at {nodes} nodes through stage {}",
                self.s_max
            )]),
            Some(json!({ "nodes_checked": nodes })),
        )
    }

    /// Coordinates of each Tor generator in the labelled product bases,
    /// cell by cell; the row layout is subsets in order, then labels.
    fn label_matrix(
        &self,
        s: usize,
        k: usize,
        d: usize,
        labeled: &BTreeMap<(usize, usize), LabeledBasis>,
    ) -> (Vec<(IndexSet, GrLabel)>, ExactMatrix) {
        let tower = self.tower.as_ref().unwrap();
        let table = &self.gr_tables[&s];
        let module = table.module();
        let h = table.at(k, d);
        let cells = chain_cells(module, k, d);
        let mut rows: Vec<(IndexSet, GrLabel)> = Vec::new();
        for cell in &cells {
            if let Some(pd) = cell.piece_degree {
                for lab in &labeled[&(s, pd)].labels {
                    rows.push((cell.set.clone(), lab.clone()));
                }
            }
        }
        let base = self.ctx.base();
        let mut m = ExactMatrix::zero(base, rows.len(), h.generator_count());
        for g in 0..h.generator_count() {
            let col = h.cycle_basis.column(g);
            let mut out = Vec::with_capacity(rows.len());
            for cell in &cells {
                if let Some(pd) = cell.piece_degree {
                    let lb = &labeled[&(s, pd)];
                    let block = &col[cell.offset..cell.offset + cell.gens];
                    out.extend(tower.to_labeled_coords(s, pd, lb, block));
                }
            }
            m.set_column(g, &out);
        }
        (rows, m)
    }

    fn check_prop_sequence(&mut self) -> (CheckReport, Option<Value>) {
        self.ensure();
        let ctx = self.ctx.clone();
        let base = ctx.base();
        let n = ctx.nvars();
        let top = self.degree_max;

        // the gr-level identification: labelled product bases per bidegree
        let mut labeled: BTreeMap<(usize, usize), LabeledBasis> = BTreeMap::new();
        {
            let tower = self.tower.as_ref().unwrap();
            for s in 0..=self.s_max + 1 {
                for d in 0..=top {
                    match tower.labeled_basis(s, d) {
                        Ok(lb) => {
                            let iso = tower.labeled_basis_is_iso(s, d, &lb);
                            if !iso.is_pass() {
                                return (iso, None);
                            }
                            labeled.insert((s, d), lb);
                        }
                        Err(reason) => return (CheckReport::skipped(reason), None),
                    }
                }
            }
        }

        let variable = is_variable_sequence(&ctx);
        let mut signed = true;
        let mut digests: BTreeMap<String, String> = BTreeMap::new();
        let mut blocks = 0usize;
        for s in 0..=self.s_max {
            for k in 1..=n {
                for d in 0..=top {
                    let (src_rows, l_src) = self.label_matrix(s, k, d, &labeled);
                    let (tgt_rows, l_tgt) = self.label_matrix(s + 1, k - 1, d, &labeled);
                    if src_rows.is_empty() && tgt_rows.is_empty() {
                        continue;
                    }
                    if l_src.rows() != l_src.cols() || l_tgt.rows() != l_tgt.cols() {
                        return (
                            CheckReport::fail(format!(
                                "label count differs from the Tor rank at (s={s}, k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    let inv = match try_inverse(&l_src) {
                        Some(m) => m,
                        None => {
                            return (
                                CheckReport::fail(format!(
                                    "labelled classes are not a basis change at (s={s}, k={k}, d={d})"
                                )),
                                None,
                            )
                        }
                    };
                    let delta = self.delta_f(s, k, d);
                    // psi_s = (-1)^s (label extraction), so conjugation by
                    // psi flips the sign of every odd-to-even stage map once
                    let conj = l_tgt.mul(&delta).mul(&inv).neg();
                    let expected = expected_model_block(n, s, k, base, &tgt_rows, &src_rows);
                    if conj != expected {
                        return (
                            CheckReport::fail(format!(
                                "conjugated connecting map differs from the model differential \
                                 at (s={s}, k={k}, d={d})"
                            )),
                            None,
                        );
                    }
                    if variable {
                        signed = signed
                            && is_signed_permutation(&l_src)
                            && is_signed_permutation(&l_tgt);
                    }
                    digests.insert(
                        format!("s{s}k{k}d{d}"),
                        sha_hex(&l_src.canonical_string()),
                    );
                    blocks += 1;
                }
            }
        }
        if variable && !signed {
            return (
                CheckReport::fail(
                    "the change of basis is not a signed permutation for the variable sequence"
                        .to_string(),
                ),
                None,
            );
        }
        let basis_kind = if variable { "signed permutation" } else { "recorded" };
        (
            CheckReport::pass_with_notes(vec![format!(
                "{blocks} blocks match the model differential; change of basis: {basis_kind}"
            )]),
            Some(json!({
                "blocks_compared": blocks,
                "change_of_basis": basis_kind,
                "basis_digests": digests,
            })),
        )
    }
}

/// The model differential in the labelled coordinates: rows and columns are
/// (subset, mu, sigma) triples; the entry is the model entry at
/// ((subset', mu'), (subset, mu)) when the sigma labels agree, else zero.
fn expected_model_block(
    n: usize,
    s: usize,
    k: usize,
    base: BaseRing,
    tgt_rows: &[(IndexSet, GrLabel)],
    src_rows: &[(IndexSet, GrLabel)],
) -> ExactMatrix {
    let md = model_differential(n, s, k, base);
    let sets_k = IndexSet::all_of_size(n, k);
    let sets_km1 = IndexSet::all_of_size(n, k - 1);
    let monos_s = sym_monomials(n, s);
    let monos_s1 = sym_monomials(n, s + 1);
    let set_idx = |sets: &[IndexSet], t: &IndexSet| -> usize {
        sets.iter().position(|x| x == t).expect("subset enumerations agree")
    };
    let mono_idx = |monos: &[Vec<u32>], m: &[u32]| -> usize {
        monos.iter().position(|x| x[..] == *m).expect("monomial enumerations agree")
    };
    let mut out = ExactMatrix::zero(base, tgt_rows.len(), src_rows.len());
    for (j, (ts, ls)) in src_rows.iter().enumerate() {
        let cj = set_idx(&sets_k, ts) * monos_s.len() + mono_idx(&monos_s, &ls.mu.0);
        for (i, (tt, lt)) in tgt_rows.iter().enumerate() {
            if lt.sigma_degree != ls.sigma_degree || lt.sigma_index != ls.sigma_index {
                continue;
            }
            let ri = set_idx(&sets_km1, tt) * monos_s1.len() + mono_idx(&monos_s1, &lt.mu.0);
            let v = md.get(ri, cj);
            if !base.is_zero(&v) {
                out.set(i, j, v);
            }
        }
    }
    out
}

fn fragment(
    id: CheckId,
    report: CheckReport,
    payload: Option<Value>,
    elapsed_ms: u64,
) -> CheckFragment {
    let mut pl = payload.unwrap_or(Value::Null);
    if !report.notes.is_empty() {
        let mut map = match pl {
            Value::Object(m) => m,
            Value::Null => serde_json::Map::new(),
            other => {
                let mut m = serde_json::Map::new();
                m.insert("data".to_string(), other);
                m
            }
        };
        map.insert("notes".to_string(), json!(report.notes));
        pl = Value::Object(map);
    }
    CheckFragment {
        id: id.name().to_string(),
        status: report.status,
        elapsed_ms,
        witness: report.witness,
        payload: if pl == Value::Null { None } else { Some(pl) },
    }
}

/// Runs the selected checks in dependency order and assembles the
/// certificate.  `overall` is PASS exactly when every selected check
/// passes; a SKIPPED check therefore never counts as verified.
pub fn run_all(
    ctx: &RingContext,
    s_max: usize,
    degree_max: usize,
    seed: u64,
    selection: &[CheckId],
    opts: &RunOptions,
) -> Certificate {
    let mut ws = Workspace::new(ctx, s_max, degree_max, seed, opts.parallel);
    let mut checks = Vec::new();
    for id in CheckId::ALL {
        if !selection.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let (report, payload) = ws.run(id);
        let elapsed = if opts.timings { t0.elapsed().as_millis() as u64 } else { 0 };
        checks.push(fragment(id, report, payload, elapsed));
    }
    let overall =
        if checks.iter().all(|c| c.status == CheckStatus::Pass) { "PASS" } else { "FAIL" };
    Certificate {
        instance: describe_instance(ctx, s_max, degree_max, seed),
        checks,
        overall: overall.to_string(),
    }
}

/// One-check convenience wrapper around a throwaway workspace.
pub fn run_check(
    ctx: &RingContext,
    id: CheckId,
    s_max: usize,
    degree_max: usize,
    seed: u64,
    opts: &RunOptions,
) -> CheckFragment {
    let mut ws = Workspace::new(ctx, s_max, degree_max, seed, opts.parallel);
    let t0 = Instant::now();
    let (report, payload) = ws.run(id);
    let elapsed = if opts.timings { t0.elapsed().as_millis() as u64 } else { 0 };
    fragment(id, report, payload, elapsed)
}
