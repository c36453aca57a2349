//! Finite idempotent semirings and nice multiplicative rating maps.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::algebra::{product_morphism, CayleyGraph, Element, FiniteMonoid, MonoidMorphism, RecognizedLanguage};
use crate::automata::{Alphabet, Dfa, Letter};
use crate::error::{Error, Result};

/// Default bound on `|M|` for powerset semirings `2^M`.
pub const DEFAULT_BUDGET: usize = 24;

/// A finite semiring whose addition is idempotent. The canonical order is
/// `r ≤ s` iff `r + s = s`.
pub trait IdemSemiring {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        &self.add(a, b) == b
    }

    /// `(r^ω, r^(ω+1))` by power iteration.
    fn omega(&self, r: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let mut p = r.clone();
        loop {
            let sq = self.mul(&p, &p);
            if sq == p {
                let next = self.mul(&p, r);
                return (p, next);
            }
            p = self.mul(&p, r);
        }
    }

    /// `r^ω + r^(ω+1)`.
    fn omega_sum(&self, r: &Self::Elem) -> Self::Elem {
        let (e, f) = self.omega(r);
        self.add(&e, &f)
    }

    fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// `2^M` for a finite monoid `M`: union and the lifted product.
#[derive(Debug, Clone)]
pub struct PowersetSemiring {
    monoid: Arc<FiniteMonoid>,
}

impl PowersetSemiring {
    pub fn new(monoid: FiniteMonoid, budget: usize) -> Result<Self> {
        if monoid.size() > budget {
            return Err(Error::Budget {
                what: "powerset semiring carrier",
                size: monoid.size(),
                budget,
            });
        }
        Ok(PowersetSemiring {
            monoid: Arc::new(monoid),
        })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn universe(&self) -> usize {
        self.monoid.size()
    }

    pub fn set(&self, elems: impl IntoIterator<Item = Element>) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.universe());
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn singleton(&self, e: Element) -> FixedBitSet {
        self.set([e])
    }

    /// Every element of `2^M`, for exhaustive checks on tiny monoids.
    pub fn all_elements(&self) -> Vec<FixedBitSet> {
        let n = self.universe();
        assert!(n < 20, "carrier too large to enumerate");
        (0u64..1 << n)
            .map(|mask| self.set((0..n).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }
}

impl IdemSemiring for PowersetSemiring {
    type Elem = FixedBitSet;

    fn zero(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.universe())
    }

    fn one(&self) -> FixedBitSet {
        self.singleton(self.monoid.identity())
    }

    fn add(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut s = a.clone();
        s.union_with(b);
        s
    }

    fn mul(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut s = self.zero();
        for x in a.ones() {
            for y in b.ones() {
                s.insert(self.monoid.mul(x, y));
            }
        }
        s
    }

    fn leq(&self, a: &FixedBitSet, b: &FixedBitSet) -> bool {
        a.is_subset(b)
    }
}

/// Inserts `e` into an antichain of maximal elements. Returns false when `e`
/// is already below some member.
pub fn antichain_insert<E>(max: &mut Vec<E>, e: E, leq: impl Fn(&E, &E) -> bool) -> bool {
    if max.iter().any(|m| leq(&e, m)) {
        return false;
    }
    max.retain(|m| !leq(m, &e));
    max.push(e);
    true
}

/// Downward-closed subsets of a semiring `R`, each stored as the antichain
/// of its maximal elements. Union and the downclosed product make this an
/// idempotent semiring, the image of `2^R` under downward closure.
#[derive(Debug)]
pub struct AntichainSemiring<'a, S: IdemSemiring> {
    base: &'a S,
}

impl<S: IdemSemiring> Clone for AntichainSemiring<'_, S> {
    fn clone(&self) -> Self {
        AntichainSemiring { base: self.base }
    }
}

impl<'a, S: IdemSemiring> AntichainSemiring<'a, S> {
    pub fn new(base: &'a S) -> Self {
        AntichainSemiring { base }
    }

    pub fn base(&self) -> &S {
        self.base
    }

    pub fn from_elems(&self, elems: impl IntoIterator<Item = S::Elem>) -> Vec<S::Elem> {
        let mut max = Vec::new();
        for e in elems {
            antichain_insert(&mut max, e, |a, b| self.base.leq(a, b));
        }
        max.sort();
        max
    }

    pub fn contains(&self, set: &[S::Elem], r: &S::Elem) -> bool {
        set.iter().any(|m| self.base.leq(r, m))
    }
}

impl<S: IdemSemiring> IdemSemiring for AntichainSemiring<'_, S> {
    type Elem = Vec<S::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }

    fn one(&self) -> Self::Elem {
        vec![self.base.one()]
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.from_elems(a.iter().chain(b).cloned())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.from_elems(a.iter().flat_map(|x| b.iter().map(move |y| self.base.mul(x, y))))
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a.iter().all(|x| self.contains(b, x))
    }
}

/// Checks the idempotent semiring laws on every triple from `sample`.
pub fn check_semiring_laws<S: IdemSemiring>(s: &S, sample: &[S::Elem]) -> Result<()> {
    let bad = |law: &str| Err(Error::Validation {
        rule: "semiring",
        detail: law.to_string(),
    });
    let (zero, one) = (s.zero(), s.one());
    for a in sample {
        if s.add(a, a) != *a {
            return bad("idempotent addition");
        }
        if s.add(a, &zero) != *a || s.mul(a, &one) != *a || s.mul(&one, a) != *a {
            return bad("neutral elements");
        }
        if s.mul(a, &zero) != zero || s.mul(&zero, a) != zero {
            return bad("zero annihilates");
        }
        for b in sample {
            if s.add(a, b) != s.add(b, a) {
                return bad("commutative addition");
            }
            for c in sample {
                if s.mul(&s.mul(a, b), c) != s.mul(a, &s.mul(b, c)) {
                    return bad("associative product");
                }
                if s.add(&s.add(a, b), c) != s.add(a, &s.add(b, c)) {
                    return bad("associative addition");
                }
                if s.mul(a, &s.add(b, c)) != s.add(&s.mul(a, b), &s.mul(a, c))
                    || s.mul(&s.add(a, b), c) != s.add(&s.mul(a, c), &s.mul(b, c))
                {
                    return bad("distributivity");
                }
            }
        }
    }
    Ok(())
}

/// A nice multiplicative rating map, determined by the values of letters:
/// `ρ*(ε) = 1_R`, `ρ*(uv) = ρ*(u)ρ*(v)` and `ρ(K) = Σ_{w∈K} ρ*(w)`.
#[derive(Debug, Clone)]
pub struct RatingMap<S: IdemSemiring> {
    alphabet: Alphabet,
    semiring: S,
    letters: Vec<S::Elem>,
}

impl<S: IdemSemiring> RatingMap<S> {
    pub fn new(alphabet: Alphabet, semiring: S, letters: Vec<S::Elem>) -> Self {
        assert_eq!(alphabet.len(), letters.len());
        RatingMap {
            alphabet,
            semiring,
            letters,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn letter(&self, a: Letter) -> &S::Elem {
        &self.letters[a]
    }

    pub fn letters(&self) -> &[S::Elem] {
        &self.letters
    }

    pub fn star(&self, w: &[Letter]) -> S::Elem {
        w.iter()
            .fold(self.semiring.one(), |r, &a| self.semiring.mul(&r, &self.letters[a]))
    }

    /// Values `ρ*(w)` over all words, with the right Cayley graph.
    pub fn explore(&self, limit: usize) -> Result<CayleyGraph<S::Elem>> {
        CayleyGraph::explore(self.semiring.one(), &self.letters, |x, y| self.semiring.mul(x, y), limit)
    }

    /// `ρ(K)`: the sum of the finitely many values `ρ*(w)` for `w ∈ K`,
    /// collected on the product of `K` with the Cayley graph of `ρ*`.
    pub fn evaluate(&self, k: &Dfa) -> Result<S::Elem> {
        self.alphabet.ensure_same(k.alphabet())?;
        let graph = self.explore(usize::MAX)?;
        let n = graph.len();
        let mut seen = vec![false; k.num_states() * n];
        seen[k.initial() * n] = true;
        let mut stack = vec![(k.initial(), 0usize)];
        let mut total = self.semiring.zero();
        while let Some((q, v)) = stack.pop() {
            if k.is_accepting(q) {
                total = self.semiring.add(&total, &graph.values[v]);
            }
            for a in 0..self.alphabet.len() {
                let (nq, nv) = (k.step(q, a), graph.next[v][a]);
                if !seen[nq * n + nv] {
                    seen[nq * n + nv] = true;
                    stack.push((nq, nv));
                }
            }
        }
        Ok(total)
    }
}

/// The rating map `ρ*(w) = {α(w)}` into `2^M` for the product morphism `α`
/// recognizing every input language, with the accepting sets `F_i`.
#[derive(Debug, Clone)]
pub struct CanonicalRating {
    pub rho: RatingMap<PowersetSemiring>,
    pub morphism: MonoidMorphism,
    pub accepting: Vec<FixedBitSet>,
}

pub fn canonical_rating_map(parts: &[RecognizedLanguage], budget: usize) -> Result<CanonicalRating> {
    let morphisms: Vec<MonoidMorphism> = parts.iter().map(|p| p.morphism.clone()).collect();
    let prod = product_morphism(&morphisms)?;
    let alpha = prod.morphism;
    let semiring = PowersetSemiring::new(alpha.monoid().clone(), budget)?;
    let accepting = parts
        .iter()
        .zip(&prod.projections)
        .map(|(p, proj)| semiring.set((0..proj.len()).filter(|&s| p.accepting[proj[s]])))
        .collect();
    let letters = (0..alpha.alphabet().len())
        .map(|a| semiring.singleton(alpha.letter_image(a)))
        .collect();
    Ok(CanonicalRating {
        rho: RatingMap::new(alpha.alphabet().clone(), semiring, letters),
        morphism: alpha,
        accepting,
    })
}

/// A downward-closed subset of `2^M`, stored as its maximal elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImprintSet {
    universe: usize,
    max: Vec<FixedBitSet>,
}

impl ImprintSet {
    pub fn empty(universe: usize) -> Self {
        ImprintSet {
            universe,
            max: Vec::new(),
        }
    }

    pub fn downclose(universe: usize, elems: impl IntoIterator<Item = FixedBitSet>) -> Self {
        let mut max = Vec::new();
        for e in elems {
            assert_eq!(e.len(), universe);
            antichain_insert(&mut max, e, |a, b| a.is_subset(b));
        }
        max.sort();
        ImprintSet { universe, max }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn maximal(&self) -> &[FixedBitSet] {
        &self.max
    }

    pub fn is_empty(&self) -> bool {
        self.max.is_empty()
    }

    pub fn contains(&self, r: &FixedBitSet) -> bool {
        self.max.iter().any(|m| r.is_subset(m))
    }

    pub fn is_subset(&self, other: &ImprintSet) -> bool {
        self.max.iter().all(|m| other.contains(m))
    }

    pub fn union(&self, other: &ImprintSet) -> ImprintSet {
        Self::downclose(self.universe, self.max.iter().chain(&other.max).cloned())
    }

    /// Every member, listed explicitly.
    pub fn expand(&self) -> Vec<FixedBitSet> {
        let mut out = std::collections::BTreeSet::new();
        for m in &self.max {
            let ones: Vec<usize> = m.ones().collect();
            assert!(ones.len() < 20, "imprint element too large to expand");
            for mask in 0u64..1 << ones.len() {
                let mut s = FixedBitSet::with_capacity(self.universe);
                for (i, &e) in ones.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s.insert(e);
                    }
                }
                out.insert(s);
            }
        }
        out.into_iter().collect()
    }
}

/// Imprint of a concrete cover: the downward closure of the values `ρ(K)`.
pub fn imprint_of_cover(cover: &[Dfa], rho: &RatingMap<PowersetSemiring>) -> Result<ImprintSet> {
    let values = cover.iter().map(|k| rho.evaluate(k)).collect::<Result<Vec<_>>>()?;
    Ok(ImprintSet::downclose(rho.semiring().universe(), values))
}

/// Renders a subset of `M` using element names of `alpha`.
pub fn render_set(set: &FixedBitSet, alpha: &MonoidMorphism) -> String {
    let names: Vec<String> = set.ones().map(|e| alpha.name(e)).collect();
    format!("{{{}}}", names.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::transition_monoid;
    use crate::automata::{compile, parse_regex};

    fn lang(re: &str, a: &Alphabet) -> Dfa {
        compile(&parse_regex(re, a).unwrap(), a)
    }

    #[test]
    fn powerset_of_small_monoids() {
        let t = PowersetSemiring::new(FiniteMonoid::trivial(), DEFAULT_BUDGET).unwrap();
        assert_eq!(t.all_elements().len(), 2);
        let z2 = PowersetSemiring::new(FiniteMonoid::cyclic(2), DEFAULT_BUDGET).unwrap();
        let all = z2.all_elements();
        assert_eq!(all.len(), 4);
        assert_eq!(z2.mul(&z2.singleton(1), &z2.singleton(1)), z2.singleton(0));
        for x in &all {
            assert_eq!(z2.mul(&z2.zero(), x), z2.zero());
        }
        check_semiring_laws(&z2, &all).unwrap();
        assert!(PowersetSemiring::new(FiniteMonoid::cyclic(30), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn antichain_semiring_laws() {
        let z3 = PowersetSemiring::new(FiniteMonoid::cyclic(3), DEFAULT_BUDGET).unwrap();
        let anti = AntichainSemiring::new(&z3);
        let all = z3.all_elements();
        let sample: Vec<_> = vec![
            anti.zero(),
            anti.one(),
            anti.from_elems([all[3].clone(), all[4].clone()]),
            anti.from_elems([all[6].clone()]),
            anti.from_elems([all[2].clone(), all[5].clone()]),
        ];
        check_semiring_laws(&anti, &sample).unwrap();
    }

    #[test]
    fn omega_in_powerset() {
        let z2 = PowersetSemiring::new(FiniteMonoid::cyclic(2), DEFAULT_BUDGET).unwrap();
        let (e, f) = z2.omega(&z2.singleton(1));
        assert_eq!((e, f), (z2.singleton(0), z2.singleton(1)));
        assert_eq!(z2.omega_sum(&z2.singleton(1)), z2.set([0, 1]));
    }

    #[test]
    fn canonical_parity() {
        let a = Alphabet::parse("a").unwrap();
        let even = transition_monoid(&lang("(aa)*", &a));
        let odd = transition_monoid(&lang("a(aa)*", &a));
        let c = canonical_rating_map(&[even, odd], DEFAULT_BUDGET).unwrap();
        let sr = c.rho.semiring();
        assert_eq!(sr.universe(), 2);
        let zero = c.morphism.eval(&[]);
        let one = c.morphism.eval(&[0]);
        assert_eq!(c.accepting, vec![sr.singleton(zero), sr.singleton(one)]);
        assert_eq!(c.rho.evaluate(&lang("(aa)*", &a)).unwrap(), sr.singleton(zero));
        assert_eq!(c.rho.evaluate(&lang("1", &a)).unwrap(), sr.one());
        assert_eq!(c.rho.evaluate(&lang("0", &a)).unwrap(), sr.zero());

        let whole = imprint_of_cover(&[lang("~0", &a)], &c.rho).unwrap();
        assert_eq!(whole.expand().len(), 4);
        let split = imprint_of_cover(&[lang("(aa)*", &a), lang("a(aa)*", &a)], &c.rho).unwrap();
        assert_eq!(split.expand().len(), 3);
        assert!(split.is_subset(&whole) && !whole.is_subset(&split));
        assert!(ImprintSet::downclose(2, []).is_empty());
    }

    #[test]
    fn canonical_trivial() {
        let a = Alphabet::parse("ab").unwrap();
        let c = canonical_rating_map(&[transition_monoid(&lang("~0", &a))], DEFAULT_BUDGET).unwrap();
        assert_eq!(c.rho.semiring().universe(), 1);
        assert_eq!(c.rho.evaluate(&lang("ab*", &a)).unwrap(), c.rho.semiring().one());
    }
}
