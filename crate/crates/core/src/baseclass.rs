//! The base class `C`: either a finite quotient-closed Boolean algebra given
//! by its canonical congruence morphism, or a class of group languages given
//! by an ε-separability oracle.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Element, MonoidMorphism};
use crate::automata::{Alphabet, Dfa, Letter};
use crate::error::{Error, Result};

/// A `~C`-class, i.e. an element of `A*/~C`.
pub type ClassId = Element;

/// Decides whether `{ε}` is separable from the argument by a language of the
/// class.
pub type EpsOracle = Arc<dyn Fn(&Dfa) -> Result<bool> + Send + Sync>;

#[derive(Clone)]
pub enum BaseClass {
    Finite(FiniteBase),
    Group(GroupBase),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteBase {
    name: String,
    canon: MonoidMorphism,
}

#[derive(Clone)]
pub struct GroupBase {
    name: String,
    oracle: EpsOracle,
}

impl fmt::Debug for GroupBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupBase").field("name", &self.name).finish()
    }
}

impl fmt::Debug for BaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseClass::Finite(b) => b.fmt(f),
            BaseClass::Group(b) => b.fmt(f),
        }
    }
}

impl BaseClass {
    /// `{∅, A*}`.
    pub fn triv(alphabet: &Alphabet) -> Self {
        BaseClass::Finite(FiniteBase {
            name: "triv".into(),
            canon: MonoidMorphism::trivial(alphabet),
        })
    }

    /// The finite class whose languages are the unions of classes of
    /// `canon`. Only the image of `canon` is kept.
    pub fn finite_from_morphism(canon: &MonoidMorphism) -> Self {
        Self::named_finite("finite", canon)
    }

    pub fn named_finite(name: &str, canon: &MonoidMorphism) -> Self {
        let canon = canon.restrict_to_image();
        let name = if canon.monoid().size() == 1 { "triv" } else { name };
        BaseClass::Finite(FiniteBase {
            name: name.into(),
            canon,
        })
    }

    /// Boolean combinations of `{w | |w| ≡ k mod m}` for fixed `m`.
    pub fn length_mod(alphabet: &Alphabet, modulus: usize) -> Self {
        Self::named_finite(&format!("mod{modulus}"), &MonoidMorphism::length_mod(alphabet, modulus))
    }

    /// All length-modulo languages, for every modulus.
    pub fn mod_class() -> Self {
        Self::group("mod", Arc::new(|l: &Dfa| Ok(mod_eps_separable(l))))
    }

    pub fn group(name: &str, oracle: EpsOracle) -> Self {
        BaseClass::Group(GroupBase {
            name: name.into(),
            oracle,
        })
    }

    pub fn name(&self) -> &str {
        match self {
            BaseClass::Finite(b) => &b.name,
            BaseClass::Group(b) => &b.name,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteBase> {
        match self {
            BaseClass::Finite(b) => Some(b),
            BaseClass::Group(_) => None,
        }
    }

    pub fn as_group(&self) -> Option<&GroupBase> {
        match self {
            BaseClass::Group(b) => Some(b),
            BaseClass::Finite(_) => None,
        }
    }

    pub fn require_finite(&self) -> Result<&FiniteBase> {
        self.as_finite()
            .ok_or_else(|| Error::UnsupportedBase(format!("'{}' is not a finite class", self.name())))
    }

    /// Whether `{ε}` is separable from `L` by a language of the class.
    pub fn eps_separable(&self, l: &Dfa) -> Result<bool> {
        match self {
            BaseClass::Finite(b) => b.eps_separable(l),
            BaseClass::Group(b) => b.eps_separable(l),
        }
    }
}

impl FiniteBase {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn canon(&self) -> &MonoidMorphism {
        &self.canon
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.canon.alphabet()
    }

    pub fn num_classes(&self) -> usize {
        self.canon.monoid().size()
    }

    pub fn class_of(&self, w: &[Letter]) -> ClassId {
        self.canon.eval(w)
    }

    pub fn class_of_letter(&self, a: Letter) -> ClassId {
        self.canon.letter_image(a)
    }

    pub fn epsilon_class(&self) -> ClassId {
        self.canon.monoid().identity()
    }

    /// `C • D`.
    pub fn mul(&self, c: ClassId, d: ClassId) -> ClassId {
        self.canon.monoid().mul(c, d)
    }

    pub fn is_idempotent(&self, c: ClassId) -> bool {
        self.canon.monoid().is_idempotent(c)
    }

    pub fn idempotent_classes(&self) -> Vec<ClassId> {
        self.canon.monoid().idempotents()
    }

    /// DFA of the union of the given classes.
    pub fn class_language(&self, classes: &[ClassId]) -> Dfa {
        self.canon.preimage(|c| classes.contains(&c))
    }

    /// Shortest word of a class.
    pub fn class_name(&self, c: ClassId) -> String {
        self.canon.name(c)
    }

    pub fn eps_separable(&self, l: &Dfa) -> Result<bool> {
        self.alphabet().ensure_same(l.alphabet())?;
        Ok(l.intersect(&self.class_language(&[self.epsilon_class()]))?.is_empty())
    }
}

impl GroupBase {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eps_separable(&self, l: &Dfa) -> Result<bool> {
        if l.accepts(&[]) {
            return Ok(false);
        }
        (self.oracle)(l)
    }
}

/// Eventually periodic structure of the set of lengths of a language:
/// a length `n < tail` is accepted iff it lies in `finite`, and a length
/// `n ≥ tail` iff `n mod cycle` lies in `residues`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthLasso {
    pub tail: usize,
    pub cycle: usize,
    pub finite: Vec<usize>,
    pub residues: Vec<usize>,
}

impl LengthLasso {
    pub fn of(l: &Dfa) -> Self {
        let n = l.num_states();
        let mut seen: std::collections::HashMap<Vec<bool>, usize> = std::collections::HashMap::new();
        let mut sets: Vec<Vec<bool>> = Vec::new();
        let mut cur = vec![false; n];
        cur[l.initial()] = true;
        let start_of_cycle = loop {
            if let Some(&i) = seen.get(&cur) {
                break i;
            }
            seen.insert(cur.clone(), sets.len());
            let mut nxt = vec![false; n];
            for q in (0..n).filter(|&q| cur[q]) {
                for a in 0..l.alphabet().len() {
                    nxt[l.step(q, a)] = true;
                }
            }
            sets.push(std::mem::replace(&mut cur, nxt));
        };
        let accepts = |s: &Vec<bool>| (0..n).any(|q| s[q] && l.is_accepting(q));
        let tail = start_of_cycle;
        let cycle = sets.len() - tail;
        LengthLasso {
            tail,
            cycle,
            finite: (0..tail).filter(|&k| accepts(&sets[k])).collect(),
            residues: (tail..tail + cycle)
                .filter(|&k| accepts(&sets[k]))
                .map(|k| k % cycle)
                .collect(),
        }
    }

    pub fn contains(&self, len: usize) -> bool {
        if len < self.tail {
            self.finite.contains(&len)
        } else {
            self.residues.contains(&(len % self.cycle))
        }
    }
}

/// A modulus `m` such that no word of `L` has length divisible by `m`, if
/// one exists. Then `(A^m)*` is a length-modulo language containing `ε` and
/// disjoint from `L`.
pub fn mod_eps_witness(l: &Dfa) -> Option<usize> {
    let lasso = LengthLasso::of(l);
    if lasso.contains(0) {
        return None;
    }
    let beyond = lasso.finite.iter().max().map_or(1, |&m| m + 1);
    if lasso.residues.is_empty() {
        return Some(beyond);
    }
    let c = lasso.cycle;
    let g = (1..=c)
        .filter(|g| c % g == 0)
        .find(|g| lasso.residues.iter().all(|r| r % g != 0))?;
    // any multiple of g with gcd(m, c) = g avoids every residue; exceeding
    // the sporadic lengths avoids the rest
    let m = (1..)
        .map(|k| g * k)
        .find(|&m| m >= beyond && gcd(m, c) == g)
        .unwrap();
    Some(m)
}

pub fn mod_eps_separable(l: &Dfa) -> bool {
    mod_eps_witness(l).is_some()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
