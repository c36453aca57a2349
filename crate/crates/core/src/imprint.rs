//! Least fixpoint engines computing optimal imprints for the star-free
//! closure of a finite class or of a class of group languages.
//!
//! Downward-closed sets are kept as antichains of maximal elements. All
//! rules (products, `r ↦ r^ω + r^(ω+1)`, the C-operation) are monotone, so
//! closing the maximal elements and then taking the downward closure gives
//! the same set as closing everything.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::{Dfa, Word};
use crate::baseclass::{BaseClass, ClassId, FiniteBase};
use crate::error::Result;
use crate::semiring::{AntichainSemiring, IdemSemiring, ImprintSet, PowersetSemiring, RatingMap};

/// Why an element entered a fixpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Origin {
    /// `(⌜w⌝, ρ(w))` for a letter or the empty word.
    Trivial { word: Word },
    /// Product of two earlier nodes.
    Mult { left: usize, right: usize },
    /// `r^ω + r^(ω+1)` of an earlier node.
    Closure { of: usize },
    /// Member of `ι_C[η_S]`, witnessed by a word whose `η_S` value contains it.
    COperation { word: Word },
    /// Carried over from an earlier fixpoint.
    Given,
}

#[derive(Debug, Clone)]
pub struct Node<E> {
    pub class: ClassId,
    pub value: E,
    pub origin: Origin,
}

/// Order in which pending elements are processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    Fifo,
    Shuffled(u64),
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub schedule: Schedule,
    /// Bound on the number of distinct values of `η_S`.
    pub eta_limit: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            schedule: Schedule::Fifo,
            eta_limit: 100_000,
        }
    }
}

/// Result of a saturation: every derived node plus, per class, the indices
/// of the maximal ones.
#[derive(Debug, Clone)]
pub struct Fixpoint<E> {
    pub nodes: Vec<Node<E>>,
    pub max: Vec<Vec<usize>>,
    pub iterations: usize,
    pub oracle_calls: usize,
}

impl<E: Clone + Ord> Fixpoint<E> {
    pub fn num_classes(&self) -> usize {
        self.max.len()
    }

    /// Sorted maximal values of class `c`.
    pub fn maximal(&self, c: ClassId) -> Vec<E> {
        let mut v: Vec<E> = self.max[c].iter().map(|&i| self.nodes[i].value.clone()).collect();
        v.sort();
        v
    }

    /// `(class, maximal values)` for every class; two fixpoints denote the
    /// same set iff these agree.
    pub fn canonical(&self) -> Vec<Vec<E>> {
        (0..self.max.len()).map(|c| self.maximal(c)).collect()
    }

    /// Node indices needed to derive `root`, in derivation order.
    pub fn derivation(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let mut done = vec![false; self.nodes.len()];
        let mut stack = vec![(root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if done[n] {
                continue;
            }
            if expanded {
                done[n] = true;
                order.push(n);
                continue;
            }
            stack.push((n, true));
            match self.nodes[n].origin {
                Origin::Mult { left, right } => {
                    stack.push((right, false));
                    stack.push((left, false));
                }
                Origin::Closure { of } => stack.push((of, false)),
                _ => {}
            }
        }
        order
    }

    /// One line per node of the derivation of `root`.
    pub fn render_derivation(&self, root: usize, render: impl Fn(ClassId, &E) -> String) -> Vec<String> {
        self.derivation(root)
            .into_iter()
            .map(|n| {
                let node = &self.nodes[n];
                let why = match &node.origin {
                    Origin::Trivial { word } => format!("trivial element of word {}", show_word(word)),
                    Origin::Mult { left, right } => format!("product of #{left} and #{right}"),
                    Origin::Closure { of } => format!("omega closure of #{of}"),
                    Origin::COperation { word } => format!("C-operation, eta value of word {}", show_word(word)),
                    Origin::Given => "given".to_string(),
                };
                format!("#{n} = {} by {why}", render(node.class, &node.value))
            })
            .collect()
    }
}

fn show_word(w: &Word) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Worklist over antichains indexed by class.
struct Worklist<'s, S: IdemSemiring> {
    semiring: &'s S,
    nodes: Vec<Node<S::Elem>>,
    max: Vec<Vec<usize>>,
    pending: VecDeque<usize>,
    rng: Option<ChaCha8Rng>,
    iterations: usize,
}

impl<'s, S: IdemSemiring> Worklist<'s, S> {
    fn new(semiring: &'s S, classes: usize, schedule: Schedule) -> Self {
        Worklist {
            semiring,
            nodes: Vec::new(),
            max: vec![Vec::new(); classes],
            pending: VecDeque::new(),
            rng: match schedule {
                Schedule::Fifo => None,
                Schedule::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
            iterations: 0,
        }
    }

    fn contains(&self, class: ClassId, value: &S::Elem) -> bool {
        self.max[class]
            .iter()
            .any(|&i| self.semiring.leq(value, &self.nodes[i].value))
    }

    fn insert(&mut self, class: ClassId, value: S::Elem, origin: Origin) -> bool {
        if self.contains(class, &value) {
            return false;
        }
        let id = self.nodes.len();
        let (nodes, semiring) = (&self.nodes, self.semiring);
        self.max[class].retain(|&i| !semiring.leq(&nodes[i].value, &value));
        self.max[class].push(id);
        self.nodes.push(Node { class, value, origin });
        self.pending.push_back(id);
        true
    }

    fn is_active(&self, n: usize) -> bool {
        self.max[self.nodes[n].class].contains(&n)
    }

    fn next(&mut self) -> Option<usize> {
        loop {
            let n = match &mut self.rng {
                None => self.pending.pop_front()?,
                Some(rng) => {
                    if self.pending.is_empty() {
                        return None;
                    }
                    let i = rng.gen_range(0..self.pending.len());
                    self.pending.swap_remove_back(i)?
                }
            };
            if self.is_active(n) {
                self.iterations += 1;
                return Some(n);
            }
        }
    }

    /// Active nodes, in a schedule-dependent order.
    fn active(&mut self) -> Vec<usize> {
        let mut all: Vec<usize> = self.max.iter().flatten().copied().collect();
        if let Some(rng) = &mut self.rng {
            all.shuffle(rng);
        }
        all
    }

    /// Closes under the product rule and, on classes accepted by
    /// `closure_on`, the omega rule.
    fn run(&mut self, class_mul: impl Fn(ClassId, ClassId) -> ClassId, closure_on: impl Fn(ClassId) -> bool) {
        while let Some(n) = self.next() {
            let (c, q) = (self.nodes[n].class, self.nodes[n].value.clone());
            for m in self.active() {
                let (d, r) = (self.nodes[m].class, self.nodes[m].value.clone());
                self.insert(class_mul(c, d), self.semiring.mul(&q, &r), Origin::Mult { left: n, right: m });
                self.insert(class_mul(d, c), self.semiring.mul(&r, &q), Origin::Mult { left: m, right: n });
            }
            if closure_on(c) {
                self.insert(c, self.semiring.omega_sum(&q), Origin::Closure { of: n });
            }
        }
    }

    fn finish(self, oracle_calls: usize) -> Fixpoint<S::Elem> {
        Fixpoint {
            nodes: self.nodes,
            max: self.max,
            iterations: self.iterations,
            oracle_calls,
        }
    }
}

/// Least set of pairs `(C, r)` containing the trivial elements and closed
/// under downset, multiplication and omega closure on idempotent classes.
pub fn saturate_finite<S: IdemSemiring>(
    rho: &RatingMap<S>,
    base: &FiniteBase,
    opts: &EngineOptions,
) -> Result<Fixpoint<S::Elem>> {
    saturate_finite_from(rho, base, opts, &[])
}

/// As [`saturate_finite`], additionally seeded with `start`.
pub fn saturate_finite_from<S: IdemSemiring>(
    rho: &RatingMap<S>,
    base: &FiniteBase,
    opts: &EngineOptions,
    start: &[(ClassId, S::Elem)],
) -> Result<Fixpoint<S::Elem>> {
    rho.alphabet().ensure_same(base.alphabet())?;
    let sr = rho.semiring();
    let mut wl = Worklist::new(sr, base.num_classes(), opts.schedule);
    wl.insert(base.epsilon_class(), sr.one(), Origin::Trivial { word: vec![] });
    for a in 0..rho.alphabet().len() {
        wl.insert(base.class_of_letter(a), rho.letter(a).clone(), Origin::Trivial { word: vec![a] });
    }
    for (c, r) in start {
        wl.insert(*c, r.clone(), Origin::Given);
    }
    wl.run(|c, d| base.mul(c, d), |c| base.is_idempotent(c));
    Ok(wl.finish(0))
}

/// `ι_C[τ]`: the sum of all values `q` of `τ*` such that `{ε}` is not
/// separable from `τ*⁻¹(q)`. Returns the value together with, for each
/// contributing `q`, a word mapped to it.
pub fn iota_eps<S: IdemSemiring>(
    tau: &RatingMap<S>,
    base: &BaseClass,
    limit: usize,
) -> Result<(S::Elem, Vec<(Word, S::Elem)>)> {
    let mut cache = HashMap::new();
    let mut calls = 0;
    iota_eps_cached(tau, base, limit, &mut cache, &mut calls, |_| true)
}

fn iota_eps_cached<S: IdemSemiring>(
    tau: &RatingMap<S>,
    base: &BaseClass,
    limit: usize,
    cache: &mut HashMap<Dfa, bool>,
    calls: &mut usize,
    relevant: impl Fn(&S::Elem) -> bool,
) -> Result<(S::Elem, Vec<(Word, S::Elem)>)> {
    let graph = tau.explore(limit)?;
    let sr = tau.semiring();
    let mut total = sr.zero();
    let mut parts = Vec::new();
    for i in 0..graph.len() {
        let q = &graph.values[i];
        if !relevant(q) {
            continue;
        }
        let pre = graph.preimage(tau.alphabet(), |j| j == i);
        let separable = match cache.get(&pre) {
            Some(&b) => b,
            None => {
                *calls += 1;
                let b = base.eps_separable(&pre)?;
                cache.insert(pre, b);
                b
            }
        };
        if !separable {
            total = sr.add(&total, q);
            parts.push((graph.witness[i].clone(), q.clone()));
        }
    }
    Ok((total, parts))
}

/// Least downward-closed `S ⊆ R` closed under multiplication, omega closure
/// and `ι_C[η_S] ⊆ S`, where `η_S(a) = S·{ρ(a)}·S`.
pub fn saturate_group<S: IdemSemiring>(
    rho: &RatingMap<S>,
    base: &BaseClass,
    opts: &EngineOptions,
) -> Result<Fixpoint<S::Elem>> {
    saturate_group_from(rho, base, opts, &[])
}

pub fn saturate_group_from<S: IdemSemiring>(
    rho: &RatingMap<S>,
    base: &BaseClass,
    opts: &EngineOptions,
    start: &[S::Elem],
) -> Result<Fixpoint<S::Elem>> {
    let sr = rho.semiring();
    let anti = AntichainSemiring::new(sr);
    let mut wl = Worklist::new(sr, 1, opts.schedule);
    for r in start {
        wl.insert(0, r.clone(), Origin::Given);
    }
    let mut cache = HashMap::new();
    let mut calls = 0;
    loop {
        wl.run(|_, _| 0, |_| true);
        let s_max: Vec<S::Elem> = wl.max[0].iter().map(|&i| wl.nodes[i].value.clone()).collect();
        let eta_letters = (0..rho.alphabet().len())
            .map(|a| {
                let left = anti.mul(&s_max, &vec![rho.letter(a).clone()]);
                anti.mul(&left, &s_max)
            })
            .collect();
        let eta = RatingMap::new(rho.alphabet().clone(), anti.clone(), eta_letters);
        let (iota, parts) = iota_eps_cached(&eta, base, opts.eta_limit, &mut cache, &mut calls, |q| {
            q.iter().any(|r| !wl.contains(0, r))
        })?;
        let mut grew = false;
        for (word, q) in parts {
            for r in q {
                grew |= wl.insert(0, r, Origin::COperation { word: word.clone() });
            }
        }
        debug_assert!(iota.iter().all(|r| wl.contains(0, r)));
        if !grew {
            break;
        }
    }
    Ok(wl.finish(calls))
}

/// Optimal imprint on `A*` from a finite-engine fixpoint: the union of the
/// per-class sets.
pub fn full_imprint_finite(fix: &Fixpoint<fixedbitset::FixedBitSet>, universe: usize) -> ImprintSet {
    ImprintSet::downclose(universe, fix.max.iter().flatten().map(|&i| fix.nodes[i].value.clone()))
}

/// Optimal imprint on `A*` from a group-engine fixpoint: the least set
/// containing it and every `ρ(a)`, closed under downset and multiplication.
pub fn full_imprint_group<S: IdemSemiring>(rho: &RatingMap<S>, iota: &Fixpoint<S::Elem>) -> Fixpoint<S::Elem> {
    let sr = rho.semiring();
    let mut wl = Worklist::new(sr, 1, Schedule::Fifo);
    for &i in &iota.max[0] {
        wl.insert(0, iota.nodes[i].value.clone(), Origin::Given);
    }
    for a in 0..rho.alphabet().len() {
        wl.insert(0, rho.letter(a).clone(), Origin::Trivial { word: vec![a] });
    }
    wl.run(|_, _| 0, |_| false);
    wl.finish(0)
}

/// Optimal imprint of `A*` for the star-free closure of `base`, with the
/// fixpoint that produced it (for derivations).
#[derive(Debug, Clone)]
pub struct Imprint {
    pub imprint: ImprintSet,
    pub fixpoint: Fixpoint<fixedbitset::FixedBitSet>,
    /// For the group engine, the complete set before closing with letters.
    pub iota: Option<Fixpoint<fixedbitset::FixedBitSet>>,
}

impl Imprint {
    /// A node of the fixpoint carrying a maximal element above `r`.
    pub fn node_above(&self, r: &fixedbitset::FixedBitSet) -> Option<usize> {
        self.fixpoint
            .max
            .iter()
            .flatten()
            .copied()
            .find(|&i| r.is_subset(&self.fixpoint.nodes[i].value))
    }
}

pub fn optimal_imprint(
    rho: &RatingMap<PowersetSemiring>,
    base: &BaseClass,
    opts: &EngineOptions,
) -> Result<Imprint> {
    let universe = rho.semiring().universe();
    match base {
        BaseClass::Finite(fb) => {
            let fix = saturate_finite(rho, fb, opts)?;
            Ok(Imprint {
                imprint: full_imprint_finite(&fix, universe),
                fixpoint: fix,
                iota: None,
            })
        }
        BaseClass::Group(_) => {
            let iota = saturate_group(rho, base, opts)?;
            let full = full_imprint_group(rho, &iota);
            let imprint = ImprintSet::downclose(universe, full.maximal(0));
            Ok(Imprint {
                imprint,
                fixpoint: full,
                iota: Some(iota),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::transition_monoid;
    use crate::automata::{compile, parse_regex, Alphabet};
    use crate::semiring::{canonical_rating_map, CanonicalRating, DEFAULT_BUDGET};

    fn parity_rating() -> (Alphabet, CanonicalRating) {
        let a = Alphabet::parse("a").unwrap();
        let even = compile(&parse_regex("(aa)*", &a).unwrap(), &a);
        let c = canonical_rating_map(&[transition_monoid(&even)], DEFAULT_BUDGET).unwrap();
        (a, c)
    }

    #[test]
    fn finite_triv_on_parity() {
        let (a, c) = parity_rating();
        let sr = c.rho.semiring();
        let (e0, e1) = (c.morphism.eval(&[]), c.morphism.eval(&[0]));
        let base = BaseClass::triv(&a);
        let fix = saturate_finite(&c.rho, base.as_finite().unwrap(), &EngineOptions::default()).unwrap();
        assert_eq!(fix.maximal(0), vec![sr.set([e0, e1])]);
        let full = full_imprint_finite(&fix, 2);
        assert_eq!(full.expand().len(), 4);
        let lines = fix.render_derivation(fix.max[0][0], |_, r| format!("{r}"));
        assert!(lines.last().unwrap().contains("omega closure"));
    }

    #[test]
    fn finite_parity_class_on_parity() {
        let (a, c) = parity_rating();
        let sr = c.rho.semiring();
        let (e0, e1) = (c.morphism.eval(&[]), c.morphism.eval(&[0]));
        let base = BaseClass::length_mod(&a, 2);
        let fb = base.as_finite().unwrap();
        let fix = saturate_finite(&c.rho, fb, &EngineOptions::default()).unwrap();
        let even = fb.epsilon_class();
        let odd = fb.class_of(&[0]);
        assert_eq!(fix.maximal(even), vec![sr.singleton(e0)]);
        assert_eq!(fix.maximal(odd), vec![sr.singleton(e1)]);
    }

    #[test]
    fn group_mod_on_parity() {
        let (_, c) = parity_rating();
        let sr = c.rho.semiring();
        let (e0, e1) = (c.morphism.eval(&[]), c.morphism.eval(&[0]));
        let imp = optimal_imprint(&c.rho, &BaseClass::mod_class(), &EngineOptions::default()).unwrap();
        assert_eq!(imp.iota.as_ref().unwrap().maximal(0), vec![sr.singleton(e0)]);
        let mut expected = vec![sr.singleton(e0), sr.singleton(e1)];
        expected.sort();
        assert_eq!(imp.imprint.maximal(), &expected[..]);
    }

    #[test]
    fn trivial_monoid_imprint() {
        let a = Alphabet::parse("ab").unwrap();
        let u = Dfa::universal(&a);
        let c = canonical_rating_map(&[transition_monoid(&u)], DEFAULT_BUDGET).unwrap();
        for base in [BaseClass::triv(&a), BaseClass::mod_class()] {
            let imp = optimal_imprint(&c.rho, &base, &EngineOptions::default()).unwrap();
            assert_eq!(imp.imprint.expand().len(), 2);
        }
    }

    #[test]
    fn iota_of_empty_eta() {
        let (a, c) = parity_rating();
        let sr = c.rho.semiring();
        let anti = AntichainSemiring::new(sr);
        let tau = RatingMap::new(a.clone(), anti.clone(), vec![anti.zero()]);
        let (iota, parts) = iota_eps(&tau, &BaseClass::mod_class(), 100).unwrap();
        assert_eq!(iota, anti.one());
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn shuffled_schedules_agree() {
        let a = Alphabet::parse("ab").unwrap();
        let l = compile(&parse_regex("(ab)*+b(a+b)*a", &a).unwrap(), &a);
        let c = canonical_rating_map(&[transition_monoid(&l)], 64).unwrap();
        let base = BaseClass::triv(&a);
        let fb = base.as_finite().unwrap();
        let reference = saturate_finite(&c.rho, fb, &EngineOptions::default()).unwrap();
        for seed in 0..5 {
            let opts = EngineOptions {
                schedule: Schedule::Shuffled(seed),
                ..Default::default()
            };
            assert_eq!(saturate_finite(&c.rho, fb, &opts).unwrap().canonical(), reference.canonical());
        }
    }
}
