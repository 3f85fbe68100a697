//! Exterior algebra over a polynomial ring, its Koszul differential, and
//! the shuffle coproduct, together with the identity suite that pins down
//! the differential-graded bialgebra structure.
//!
//! Elements live in Lambda = R<e_1, ..., e_n> with e_i e_j = -e_j e_i and
//! are stored as maps from index sets to polynomial coefficients.  All sign
//! conventions flow from two primitives: the merge sign of a wedge and the
//! position sign of the differential
//!
//!   d(e_S) = sum_{j in S} (-1)^{pos(j, S)} r_j e_{S \ j},
//!
//! where pos(j, S) counts the elements of S below j.

use crate::poly::{Polynomial, RingContext};
use crate::report::CheckReport;
use crate::ring::{BaseRing, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A strictly increasing set of generator indices (0-based internally,
/// rendered 1-based).  Lexicographic `Ord` on the underlying vector is the
/// basis order used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<u8>);

impl IndexSet {
    pub fn new(mut indices: Vec<u8>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn singleton(j: u8) -> Self {
        IndexSet(vec![j])
    }

    pub fn full(n: usize) -> Self {
        IndexSet((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: u8) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    /// Position of `j` inside the set: the number of smaller members.
    pub fn position(&self, j: u8) -> usize {
        self.0.binary_search(&j).expect("index not in set")
    }

    pub fn without(&self, j: u8) -> IndexSet {
        let mut v = self.0.clone();
        let p = v.binary_search(&j).expect("index not in set");
        v.remove(p);
        IndexSet(v)
    }

    /// Disjoint union with the sign of the permutation sorting
    /// `self ++ other`; `None` when the sets overlap.
    pub fn merge(&self, other: &IndexSet) -> Option<(IndexSet, bool)> {
        let mut inversions = 0usize;
        for a in &self.0 {
            for b in &other.0 {
                if a == b {
                    return None;
                }
                if a > b {
                    inversions += 1;
                }
            }
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        Some((IndexSet(v), inversions % 2 == 1))
    }

    /// All k-subsets of {0, ..., n-1} in lexicographic order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<IndexSet> {
        use itertools::Itertools;
        (0..n as u8).combinations(k).map(IndexSet).collect()
    }

    /// Every subset of {0, ..., n-1}, smallest cardinality first, lex within.
    pub fn all_subsets(n: usize) -> Vec<IndexSet> {
        (0..=n).flat_map(|k| Self::all_of_size(n, k)).collect()
    }

    /// All ordered splittings self = A ⊔ B with the shuffle sign of the
    /// permutation moving A-then-B back into sorted order.
    pub fn splittings(&self) -> Vec<(IndexSet, IndexSet, bool)> {
        let k = self.0.len();
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0..(1u32 << k) {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &j) in self.0.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(j);
                } else {
                    b.push(j);
                }
            }
            let a = IndexSet(a);
            let b = IndexSet(b);
            let (_, neg) = a.merge(&b).expect("splitting parts are disjoint");
            out.push((a, b, neg));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            "1".to_string()
        } else {
            let parts: Vec<String> = self.0.iter().map(|j| (j + 1).to_string()).collect();
            format!("e{{{}}}", parts.join(","))
        }
    }
}

/// An element of the exterior algebra with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    base: BaseRing,
    nvars: usize,
    terms: BTreeMap<IndexSet, Polynomial>,
}

impl ExteriorElement {
    pub fn zero(base: BaseRing, nvars: usize) -> Self {
        ExteriorElement { base, nvars, terms: BTreeMap::new() }
    }

    pub fn one(base: BaseRing, nvars: usize) -> Self {
        let mut x = Self::zero(base, nvars);
        x.add_term(IndexSet::empty(), Polynomial::constant(base, nvars, base.one()));
        x
    }

    pub fn generator(base: BaseRing, nvars: usize, j: u8) -> Self {
        let mut x = Self::zero(base, nvars);
        x.add_term(IndexSet::singleton(j), Polynomial::constant(base, nvars, base.one()));
        x
    }

    pub fn basis(base: BaseRing, nvars: usize, s: IndexSet) -> Self {
        let mut x = Self::zero(base, nvars);
        x.add_term(s, Polynomial::constant(base, nvars, base.one()));
        x
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &IndexSet) -> Polynomial {
        self.terms.get(s).cloned().unwrap_or_else(|| Polynomial::zero(self.base, self.nvars))
    }

    pub fn add_term(&mut self, s: IndexSet, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let next = match self.terms.remove(&s) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !next.is_zero() {
            self.terms.insert(s, next);
        }
    }

    pub fn add(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut out = self.clone();
        for (s, p) in other.terms() {
            out.add_term(s.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> ExteriorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (s, p) in self.terms() {
            out.add_term(s.clone(), p.neg());
        }
        out
    }

    pub fn sub(&self, other: &ExteriorElement) -> ExteriorElement {
        self.add(&other.neg())
    }

    pub fn scale_poly(&self, p: &Polynomial) -> ExteriorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (s, q) in self.terms() {
            out.add_term(s.clone(), q.mul(p));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> ExteriorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (s, q) in self.terms() {
            out.add_term(s.clone(), q.scale(c));
        }
        out
    }

    /// `Some(k)` when every term sits in exterior degree k.
    pub fn homological_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let first = it.next()?.len();
        if it.all(|s| s.len() == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn wedge(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (s, p) in self.terms() {
            for (t, q) in other.terms() {
                if let Some((st, neg)) = s.merge(t) {
                    let pq = p.mul(q);
                    out.add_term(st, if neg { pq.neg() } else { pq });
                }
            }
        }
        out
    }

    /// The Koszul differential for the sequence carried by `ctx`.
    pub fn koszul_diff(&self, ctx: &RingContext) -> ExteriorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (s, p) in self.terms() {
            for j in s.iter() {
                let coeff = p.mul(&ctx.sequence()[j as usize]);
                let signed = if s.position(j) % 2 == 1 { coeff.neg() } else { coeff };
                out.add_term(s.without(j), signed);
            }
        }
        out
    }

    /// The shuffle coproduct Lambda -> Lambda (x) Lambda, taking e_S to the
    /// signed sum over all splittings S = A ⊔ B of e_A (x) e_B.
    pub fn coproduct(&self) -> TensorElement {
        let mut out = TensorElement::zero(self.base, self.nvars);
        for (s, p) in self.terms() {
            for (a, b, neg) in s.splittings() {
                out.add_term((a, b), if neg { p.neg() } else { p.clone() });
            }
        }
        out
    }

    pub fn render(&self, ctx: &RingContext) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, p)| format!("({})*{}", p.render(ctx.var_names()), s.render()))
            .collect();
        parts.join(" + ")
    }
}

/// An element of Lambda (x)_R Lambda, keyed by pairs of index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    base: BaseRing,
    nvars: usize,
    terms: BTreeMap<(IndexSet, IndexSet), Polynomial>,
}

impl TensorElement {
    pub fn zero(base: BaseRing, nvars: usize) -> Self {
        TensorElement { base, nvars, terms: BTreeMap::new() }
    }

    pub fn of(a: &ExteriorElement, b: &ExteriorElement) -> Self {
        assert_eq!(a.base, b.base);
        let mut out = Self::zero(a.base, a.nvars);
        for (s, p) in a.terms() {
            for (t, q) in b.terms() {
                out.add_term((s.clone(), t.clone()), p.mul(q));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(IndexSet, IndexSet), &Polynomial)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: (IndexSet, IndexSet), p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let next = match self.terms.remove(&key) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !next.is_zero() {
            self.terms.insert(key, next);
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for (k, p) in other.terms() {
            out.add_term(k.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> TensorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (k, p) in self.terms() {
            out.add_term(k.clone(), p.neg());
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for (k, p) in self.terms() {
            out.add_term(k.clone(), p.scale(c));
        }
        out
    }

    /// The graded flip: e (x) f goes to (-1)^{|e| |f|} f (x) e, where the
    /// exponent uses exterior degrees only.
    pub fn twist(&self) -> TensorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for ((s, t), p) in self.terms() {
            let neg = (s.len() * t.len()) % 2 == 1;
            out.add_term((t.clone(), s.clone()), if neg { p.neg() } else { p.clone() });
        }
        out
    }

    /// The differential of the tensor complex,
    /// d(a (x) b) = d(a) (x) b + (-1)^{|a|} a (x) d(b).
    pub fn diff(&self, ctx: &RingContext) -> TensorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for ((s, t), p) in self.terms() {
            for j in s.iter() {
                let coeff = p.mul(&ctx.sequence()[j as usize]);
                let signed = if s.position(j) % 2 == 1 { coeff.neg() } else { coeff };
                out.add_term((s.without(j), t.clone()), signed);
            }
            for j in t.iter() {
                let coeff = p.mul(&ctx.sequence()[j as usize]);
                let mut neg = t.position(j) % 2 == 1;
                if s.len() % 2 == 1 {
                    neg = !neg;
                }
                out.add_term((s.clone(), t.without(j)), if neg { coeff.neg() } else { coeff });
            }
        }
        out
    }

    /// The differential acting on the left factor only (no signs).
    pub fn diff_on_first(&self, ctx: &RingContext) -> TensorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for ((s, t), p) in self.terms() {
            for j in s.iter() {
                let coeff = p.mul(&ctx.sequence()[j as usize]);
                let signed = if s.position(j) % 2 == 1 { coeff.neg() } else { coeff };
                out.add_term((s.without(j), t.clone()), signed);
            }
        }
        out
    }

    /// Multiplication in the twisted tensor-square algebra:
    /// (a (x) b)(c (x) d) = (-1)^{|b| |c|} (a c) (x) (b d).
    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        let mut out = Self::zero(self.base, self.nvars);
        for ((s1, t1), p1) in self.terms() {
            for ((s2, t2), p2) in other.terms() {
                let (left, lneg) = match s1.merge(s2) {
                    Some(x) => x,
                    None => continue,
                };
                let (right, rneg) = match t1.merge(t2) {
                    Some(x) => x,
                    None => continue,
                };
                let mut neg = lneg ^ rneg;
                if (t1.len() * s2.len()) % 2 == 1 {
                    neg = !neg;
                }
                let pq = p1.mul(p2);
                out.add_term((left, right), if neg { pq.neg() } else { pq });
            }
        }
        out
    }

    pub fn render(&self, ctx: &RingContext) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((s, t), p)| {
                format!("({})*{}(x){}", p.render(ctx.var_names()), s.render(), t.render())
            })
            .collect();
        parts.join(" + ")
    }
}

fn random_polynomial(ctx: &RingContext, rng: &mut ChaCha8Rng, max_degree: usize) -> Polynomial {
    let base = ctx.base();
    let n = ctx.nvars();
    let mut p = Polynomial::zero(base, n);
    let terms = rng.gen_range(1..=3);
    for _ in 0..terms {
        loop {
            let exps: Vec<u32> =
                (0..n).map(|i| rng.gen_range(0..=(max_degree as u32 / ctx.weights()[i]))).collect();
            let m = crate::poly::Monomial(exps);
            if m.weighted_degree(ctx.weights()) <= max_degree {
                let c = base.from_i64(rng.gen_range(-5..=5));
                p.add_term(m, c);
                break;
            }
        }
    }
    p
}

fn random_element(ctx: &RingContext, rng: &mut ChaCha8Rng) -> ExteriorElement {
    let base = ctx.base();
    let n = ctx.nvars();
    let subsets = IndexSet::all_subsets(n);
    let mut x = ExteriorElement::zero(base, n);
    let picks = rng.gen_range(1..=3.min(subsets.len()));
    for _ in 0..picks {
        let s = subsets[rng.gen_range(0..subsets.len())].clone();
        x.add_term(s, random_polynomial(ctx, rng, 4));
    }
    x
}

fn random_homogeneous_element(ctx: &RingContext, rng: &mut ChaCha8Rng, k: usize) -> ExteriorElement {
    let base = ctx.base();
    let n = ctx.nvars();
    let subsets = IndexSet::all_of_size(n, k);
    let mut x = ExteriorElement::zero(base, n);
    for s in &subsets {
        if rng.gen_bool(0.6) {
            x.add_term(s.clone(), random_polynomial(ctx, rng, 4));
        }
    }
    if x.is_zero() && !subsets.is_empty() {
        x.add_term(subsets[0].clone(), Polynomial::constant(base, n, base.one()));
    }
    x
}

/// Checks the full differential-graded bialgebra identity suite for the
/// Koszul complex of `ctx`: the differential squares to zero and is a
/// derivation for the wedge, the coproduct is cocommutative, multiplicative
/// and satisfies both comultiplication/differential exchange laws, and the
/// tensor differential decomposes through the twist.  Runs on every basis
/// element and on `samples` seeded random elements.
pub fn verify_bialgebra_identities(ctx: &RingContext, seed: u64, samples: usize) -> CheckReport {
    let base = ctx.base();
    let n = ctx.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut elements: Vec<ExteriorElement> = IndexSet::all_subsets(n)
        .into_iter()
        .map(|s| ExteriorElement::basis(base, n, s))
        .collect();
    for _ in 0..samples {
        elements.push(random_element(ctx, &mut rng));
    }

    // d o d = 0
    for x in &elements {
        if !x.koszul_diff(ctx).koszul_diff(ctx).is_zero() {
            return CheckReport::fail(format!(
                "d(d(x)) != 0 for x = {}",
                x.render(ctx)
            ));
        }
    }

    // d(a ^ b) = d(a) ^ b + (-1)^{|a|} a ^ d(b) for a of pure exterior degree
    let mut homogeneous: Vec<ExteriorElement> = Vec::new();
    for k in 0..=n {
        for s in IndexSet::all_of_size(n, k) {
            homogeneous.push(ExteriorElement::basis(base, n, s));
        }
        homogeneous.push(random_homogeneous_element(ctx, &mut rng, k));
    }
    for a in &homogeneous {
        let k = a.homological_degree().expect("built homogeneous");
        for b in &elements {
            let lhs = a.wedge(b).koszul_diff(ctx);
            let mut rhs = a.koszul_diff(ctx).wedge(b);
            let second = a.wedge(&b.koszul_diff(ctx));
            rhs = if k % 2 == 1 { rhs.sub(&second) } else { rhs.add(&second) };
            if lhs != rhs {
                return CheckReport::fail(format!(
                    "derivation rule broken for a = {}, b = {}",
                    a.render(ctx),
                    b.render(ctx)
                ));
            }
        }
    }

    // coproduct is cocommutative: twist o coproduct = coproduct
    for x in &elements {
        let delta = x.coproduct();
        if delta.twist() != delta {
            return CheckReport::fail(format!(
                "coproduct not cocommutative on x = {}",
                x.render(ctx)
            ));
        }
    }

    // coproduct o d = (d (x) 1) o coproduct
    for x in &elements {
        let lhs = x.koszul_diff(ctx).coproduct();
        let rhs = x.coproduct().diff_on_first(ctx);
        if lhs != rhs {
            return CheckReport::fail(format!(
                "coproduct/differential exchange broken on x = {}",
                x.render(ctx)
            ));
        }
    }

    // tensor differential = d (x) 1 + twist o (d (x) 1) o twist
    let mut tensors: Vec<TensorElement> = Vec::new();
    for s in IndexSet::all_subsets(n) {
        for t in IndexSet::all_subsets(n) {
            tensors.push(TensorElement::of(
                &ExteriorElement::basis(base, n, s.clone()),
                &ExteriorElement::basis(base, n, t),
            ));
        }
    }
    for _ in 0..samples {
        tensors.push(TensorElement::of(
            &random_element(ctx, &mut rng),
            &random_element(ctx, &mut rng),
        ));
    }
    for t in &tensors {
        let lhs = t.diff(ctx);
        let rhs = t.diff_on_first(ctx).add(&t.twist().diff_on_first(ctx).twist());
        if lhs != rhs {
            return CheckReport::fail(format!(
                "tensor differential does not split through the twist on {}",
                t.render(ctx)
            ));
        }
    }

    // tensor differential o coproduct = 2 (coproduct o d), verbatim in the
    // base ring (both sides vanish in characteristic 2)
    let two = base.from_i64(2);
    for x in &elements {
        let lhs = x.coproduct().diff(ctx);
        let rhs = x.koszul_diff(ctx).coproduct().scale(&two);
        if lhs != rhs {
            return CheckReport::fail(format!(
                "doubling identity broken on x = {}",
                x.render(ctx)
            ));
        }
    }

    // coproduct is an algebra map into the twisted tensor square
    for a in &homogeneous {
        for b in &homogeneous {
            let lhs = a.wedge(b).coproduct();
            let rhs = a.coproduct().mul(&b.coproduct());
            if lhs != rhs {
                return CheckReport::fail(format!(
                    "coproduct not multiplicative on a = {}, b = {}",
                    a.render(ctx),
                    b.render(ctx)
                ));
            }
        }
    }

    CheckReport::pass_with_notes(vec![format!(
        "identities checked on {} elements, {} tensor elements ({} random samples)",
        elements.len(),
        tensors.len(),
        samples
    )])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;

    fn ctx2() -> RingContext {
        RingContext::variables(BaseRing::Integers, 2)
    }

    #[test]
    fn wedge_anticommutes_and_squares_to_zero() {
        let ctx = ctx2();
        let e1 = ExteriorElement::generator(ctx.base(), 2, 0);
        let e2 = ExteriorElement::generator(ctx.base(), 2, 1);
        assert_eq!(e1.wedge(&e2), e2.wedge(&e1).neg());
        assert!(e1.wedge(&e1).is_zero());
    }

    #[test]
    fn differential_signs_on_top_class() {
        // d(e{1,2}) = x1 e{2} - x2 e{1} for the variable sequence
        let ctx = ctx2();
        let top = ExteriorElement::basis(ctx.base(), 2, IndexSet::full(2));
        let d = top.koszul_diff(&ctx);
        let x1 = Polynomial::variable(ctx.base(), 2, 0);
        let x2 = Polynomial::variable(ctx.base(), 2, 1);
        assert_eq!(d.coefficient(&IndexSet::singleton(1)), x1);
        assert_eq!(d.coefficient(&IndexSet::singleton(0)), x2.neg());
    }

    #[test]
    fn coproduct_of_top_class_has_four_shuffles() {
        let ctx = ctx2();
        let top = ExteriorElement::basis(ctx.base(), 2, IndexSet::full(2));
        let delta = top.coproduct();
        let one = Polynomial::constant(ctx.base(), 2, ctx.base().one());
        let expect = |a: &[u8], b: &[u8], neg: bool| {
            let key = (IndexSet::new(a.to_vec()), IndexSet::new(b.to_vec()));
            let got = delta.terms.get(&key).cloned().unwrap();
            assert_eq!(got, if neg { one.neg() } else { one.clone() }, "{key:?}");
        };
        expect(&[], &[0, 1], false);
        expect(&[0], &[1], false);
        expect(&[1], &[0], true);
        expect(&[0, 1], &[], false);
        assert_eq!(delta.terms.len(), 4);
    }

    #[test]
    fn twist_squares_to_identity() {
        let ctx = ctx2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let t = TensorElement::of(
                &random_element(&ctx, &mut rng),
                &random_element(&ctx, &mut rng),
            );
            assert_eq!(t.twist().twist(), t);
        }
    }

    #[test]
    fn identity_suite_over_integers() {
        for n in 1..=3 {
            let ctx = RingContext::variables(BaseRing::Integers, n);
            let report = verify_bialgebra_identities(&ctx, 42, 8);
            assert_eq!(report.status, CheckStatus::Pass, "n = {n}: {:?}", report.witness);
        }
    }

    #[test]
    fn identity_suite_over_f2_and_f5() {
        for p in [2u32, 5] {
            let base = BaseRing::prime_field(p).unwrap();
            let ctx = RingContext::variables(base, 2);
            let report = verify_bialgebra_identities(&ctx, 42, 8);
            assert_eq!(report.status, CheckStatus::Pass, "p = {p}: {:?}", report.witness);
        }
    }

    #[test]
    fn identity_suite_with_mixed_degrees() {
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
        let report = verify_bialgebra_identities(&ctx, 7, 8);
        assert_eq!(report.status, CheckStatus::Pass, "{:?}", report.witness);
    }

    #[test]
    fn subset_enumeration_is_lexicographic() {
        let sets = IndexSet::all_of_size(3, 2);
        let raw: Vec<Vec<u8>> = sets.iter().map(|s| s.0.clone()).collect();
        assert_eq!(raw, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
