//! Finite monoids and morphisms `A* → M`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write;
use std::hash::Hash;
use std::sync::Arc;

use crate::automata::{Alphabet, Dfa, Letter, Word};
use crate::error::{Error, Result};

/// Index of a monoid element.
pub type Element = usize;

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<Element>,
    identity: Element,
}

/// Result of [`FiniteMonoid::omega`]: the least `k ≥ 1` such that `s^k` is
/// idempotent, together with `s^ω` and `s^(ω+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaPower {
    pub exponent: usize,
    pub idempotent: Element,
    pub next: Element,
}

impl OmegaPower {
    /// Whether `s^ω = s^(ω+1)`.
    pub fn is_aperiodic(&self) -> bool {
        self.idempotent == self.next
    }
}

impl FiniteMonoid {
    /// Builds a monoid from a multiplication table, checking closure, the
    /// identity laws and associativity.
    pub fn new(table: Vec<Vec<Element>>, identity: Element) -> Result<Self> {
        let size = table.len();
        if size == 0 {
            return Err(Error::InvalidMonoid("empty carrier".into()));
        }
        if identity >= size {
            return Err(Error::InvalidMonoid(format!("identity {identity} out of range")));
        }
        if table.iter().any(|row| row.len() != size || row.iter().any(|&x| x >= size)) {
            return Err(Error::InvalidMonoid("table is not a closed square".into()));
        }
        let m = Self::from_table_unchecked(table, identity);
        for s in 0..size {
            if m.mul(identity, s) != s || m.mul(s, identity) != s {
                return Err(Error::InvalidMonoid(format!("{identity} is not neutral for {s}")));
            }
        }
        for a in 0..size {
            for b in 0..size {
                let ab = m.mul(a, b);
                for c in 0..size {
                    if m.mul(ab, c) != m.mul(a, m.mul(b, c)) {
                        return Err(Error::InvalidMonoid(format!(
                            "not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn from_table_unchecked(table: Vec<Vec<Element>>, identity: Element) -> Self {
        let size = table.len();
        FiniteMonoid {
            size,
            table: table.into_iter().flatten().collect(),
            identity,
        }
    }

    pub fn trivial() -> Self {
        Self::from_table_unchecked(vec![vec![0]], 0)
    }

    /// The cyclic group `Z/mZ`, element `k` standing for `k mod m`.
    pub fn cyclic(modulus: usize) -> Self {
        assert!(modulus > 0);
        let table = (0..modulus)
            .map(|i| (0..modulus).map(|j| (i + j) % modulus).collect())
            .collect();
        Self::from_table_unchecked(table, 0)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.size + b]
    }

    pub fn is_idempotent(&self, s: Element) -> bool {
        self.mul(s, s) == s
    }

    pub fn pow(&self, s: Element, k: usize) -> Element {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, s))
    }

    pub fn omega(&self, s: Element) -> OmegaPower {
        let mut p = s;
        let mut k = 1;
        while !self.is_idempotent(p) {
            p = self.mul(p, s);
            k += 1;
        }
        OmegaPower {
            exponent: k,
            idempotent: p,
            next: self.mul(p, s),
        }
    }

    pub fn idempotents(&self) -> Vec<Element> {
        (0..self.size).filter(|&s| self.is_idempotent(s)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }
}

/// Right Cayley graph of the image of a morphism into an arbitrary value
/// monoid: the reachable values together with right multiplication by letter
/// values. Index 0 is the value of `ε`.
#[derive(Debug, Clone)]
pub struct CayleyGraph<T> {
    pub values: Vec<T>,
    pub next: Vec<Vec<usize>>,
    pub witness: Vec<Word>,
}

impl<T: Clone + Eq + Hash> CayleyGraph<T> {
    /// Explores the values `ρ(w)` in breadth-first order, so `witness[i]` is
    /// the length-lexicographically least word reaching value `i`.
    pub fn explore(one: T, letters: &[T], mul: impl Fn(&T, &T) -> T, limit: usize) -> Result<Self> {
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(one.clone(), 0);
        let mut values = vec![one];
        let mut witness = vec![Vec::new()];
        let mut next = Vec::new();
        let mut i = 0;
        while i < values.len() {
            let mut row = Vec::with_capacity(letters.len());
            for (a, la) in letters.iter().enumerate() {
                let v = mul(&values[i], la);
                let id = match index.get(&v) {
                    Some(&id) => id,
                    None => {
                        let id = values.len();
                        if id >= limit {
                            return Err(Error::Budget {
                                what: "monoid image",
                                size: id + 1,
                                budget: limit,
                            });
                        }
                        index.insert(v.clone(), id);
                        values.push(v);
                        let mut w = witness[i].clone();
                        w.push(a);
                        witness.push(w);
                        id
                    }
                };
                row.push(id);
            }
            next.push(row);
            i += 1;
        }
        Ok(CayleyGraph { values, next, witness })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// DFA over the graph accepting words whose value lies in `accept`.
    pub fn preimage(&self, alphabet: &Alphabet, accept: impl Fn(usize) -> bool) -> Dfa {
        let accepting = (0..self.len()).map(accept).collect();
        Dfa::from_parts_unchecked(alphabet.clone(), self.next.clone(), 0, accepting).minimize()
    }

    /// Turns the explored image into a finite monoid by multiplying every
    /// pair of values.
    pub fn into_monoid(self, mul: impl Fn(&T, &T) -> T) -> (FiniteMonoid, Vec<T>, Vec<Word>) {
        let index: HashMap<&T, usize> = self.values.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let table = self
            .values
            .iter()
            .map(|x| {
                self.values
                    .iter()
                    .map(|y| index[&mul(x, y)])
                    .collect()
            })
            .collect();
        drop(index);
        (FiniteMonoid::from_table_unchecked(table, 0), self.values, self.witness)
    }
}

/// A morphism `α: A* → M` given by the images of the letters.
#[derive(Debug, Clone)]
pub struct MonoidMorphism {
    alphabet: Alphabet,
    monoid: Arc<FiniteMonoid>,
    letter_images: Vec<Element>,
    image: Vec<Element>,
    witness: Vec<Option<Word>>,
}

impl PartialEq for MonoidMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.monoid == other.monoid
            && self.letter_images == other.letter_images
    }
}

impl Eq for MonoidMorphism {}

impl MonoidMorphism {
    pub fn new(alphabet: Alphabet, monoid: FiniteMonoid, letter_images: Vec<Element>) -> Result<Self> {
        if letter_images.len() != alphabet.len() {
            return Err(Error::InvalidMonoid(format!(
                "{} letter images for an alphabet of size {}",
                letter_images.len(),
                alphabet.len()
            )));
        }
        if let Some(&s) = letter_images.iter().find(|&&s| s >= monoid.size()) {
            return Err(Error::InvalidMonoid(format!("letter image {s} out of range")));
        }
        Ok(Self::build(alphabet, Arc::new(monoid), letter_images))
    }

    fn build(alphabet: Alphabet, monoid: Arc<FiniteMonoid>, letter_images: Vec<Element>) -> Self {
        let mut witness: Vec<Option<Word>> = vec![None; monoid.size()];
        let mut image = vec![monoid.identity()];
        witness[monoid.identity()] = Some(Vec::new());
        let mut queue = VecDeque::from([monoid.identity()]);
        while let Some(s) = queue.pop_front() {
            for (a, &img) in letter_images.iter().enumerate() {
                let t = monoid.mul(s, img);
                if witness[t].is_none() {
                    let mut w = witness[s].clone().unwrap();
                    w.push(a);
                    witness[t] = Some(w);
                    image.push(t);
                    queue.push_back(t);
                }
            }
        }
        MonoidMorphism {
            alphabet,
            monoid,
            letter_images,
            image,
            witness,
        }
    }

    /// The morphism onto the trivial monoid.
    pub fn trivial(alphabet: &Alphabet) -> Self {
        Self::build(alphabet.clone(), Arc::new(FiniteMonoid::trivial()), vec![0; alphabet.len()])
    }

    /// Length modulo `m`: every letter maps to the generator of `Z/mZ`.
    pub fn length_mod(alphabet: &Alphabet, modulus: usize) -> Self {
        let gen = 1 % modulus;
        Self::build(
            alphabet.clone(),
            Arc::new(FiniteMonoid::cyclic(modulus)),
            vec![gen; alphabet.len()],
        )
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn letter_image(&self, a: Letter) -> Element {
        self.letter_images[a]
    }

    pub fn letter_images(&self) -> &[Element] {
        &self.letter_images
    }

    pub fn eval(&self, w: &[Letter]) -> Element {
        w.iter()
            .fold(self.monoid.identity(), |s, &a| self.monoid.mul(s, self.letter_images[a]))
    }

    /// Elements reachable as `α(w)`, in breadth-first order from `1_M`.
    pub fn image(&self) -> &[Element] {
        &self.image
    }

    pub fn in_image(&self, s: Element) -> bool {
        self.witness[s].is_some()
    }

    /// Length-lexicographically least word mapped to `s`, if any.
    pub fn witness(&self, s: Element) -> Option<&Word> {
        self.witness[s].as_ref()
    }

    /// Human-readable element name: its least witness word, or `#k` when the
    /// element is outside the image.
    pub fn name(&self, s: Element) -> String {
        match &self.witness[s] {
            Some(w) => self.alphabet.render(w),
            None => format!("#{s}"),
        }
    }

    /// DFA of `α⁻¹(F)`.
    pub fn preimage(&self, accept: impl Fn(Element) -> bool) -> Dfa {
        let m = &self.monoid;
        let delta = (0..m.size())
            .map(|s| self.letter_images.iter().map(|&x| m.mul(s, x)).collect())
            .collect();
        let accepting = (0..m.size()).map(accept).collect();
        Dfa::from_parts_unchecked(self.alphabet.clone(), delta, m.identity(), accepting).minimize()
    }

    pub fn preimage_of(&self, s: Element) -> Dfa {
        self.preimage(|t| t == s)
    }

    /// `prefix · α(K)` as a sorted element list, computed by exploring the
    /// product of the DFA of `K` with the right Cayley graph of `α`.
    pub fn image_of_language_from(&self, prefix: Element, k: &Dfa) -> Result<Vec<Element>> {
        self.alphabet.ensure_same(k.alphabet())?;
        let m = &self.monoid;
        let n = k.num_states();
        let mut seen = vec![false; n * m.size()];
        let start = (k.initial(), prefix);
        seen[start.0 * m.size() + start.1] = true;
        let mut stack = vec![start];
        let mut hit = vec![false; m.size()];
        while let Some((q, s)) = stack.pop() {
            if k.is_accepting(q) {
                hit[s] = true;
            }
            for (a, &img) in self.letter_images.iter().enumerate() {
                let nq = k.step(q, a);
                let ns = m.mul(s, img);
                let key = nq * m.size() + ns;
                if !seen[key] {
                    seen[key] = true;
                    stack.push((nq, ns));
                }
            }
        }
        Ok((0..m.size()).filter(|&s| hit[s]).collect())
    }

    /// `α(K)`.
    pub fn image_of_language(&self, k: &Dfa) -> Result<Vec<Element>> {
        self.image_of_language_from(self.monoid.identity(), k)
    }

    /// Restriction to the image submonoid, renumbered in BFS order.
    pub fn restrict_to_image(&self) -> MonoidMorphism {
        let mut local = vec![usize::MAX; self.monoid.size()];
        for (i, &s) in self.image.iter().enumerate() {
            local[s] = i;
        }
        let table = self
            .image
            .iter()
            .map(|&x| self.image.iter().map(|&y| local[self.monoid.mul(x, y)]).collect())
            .collect();
        let letters = self.letter_images.iter().map(|&s| local[s]).collect();
        Self::build(
            self.alphabet.clone(),
            Arc::new(FiniteMonoid::from_table_unchecked(table, 0)),
            letters,
        )
    }

    /// Parses a morphism description:
    ///
    /// ```text
    /// classes: 2
    /// identity: 0
    /// letter a -> 1
    /// mult 0 0 -> 0
    /// ...
    /// ```
    ///
    /// The alphabet is the set of letters with a `letter` line. Every product
    /// must be listed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut size = None;
        let mut identity = None;
        let mut letters: Vec<(char, Element)> = Vec::new();
        let mut mults: Vec<(Element, Element, Element)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Format(format!("line {}: {msg}", lineno + 1));
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| bad(format!("expected a number, got '{s}'")))
            };
            if let Some(rest) = line.strip_prefix("classes:") {
                size = Some(num(rest.trim())?);
            } else if let Some(rest) = line.strip_prefix("identity:") {
                identity = Some(num(rest.trim())?);
            } else if let Some(rest) = line.strip_prefix("letter") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 || toks[1] != "->" || toks[0].chars().count() != 1 {
                    return Err(bad("expected 'letter <a> -> <i>'".into()));
                }
                letters.push((toks[0].chars().next().unwrap(), num(toks[2])?));
            } else if let Some(rest) = line.strip_prefix("mult") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 4 || toks[2] != "->" {
                    return Err(bad("expected 'mult <i> <j> -> <k>'".into()));
                }
                mults.push((num(toks[0])?, num(toks[1])?, num(toks[3])?));
            } else {
                return Err(bad(format!("unrecognized line '{line}'")));
            }
        }
        let size = size.ok_or_else(|| Error::Format("missing 'classes:' line".into()))?;
        let identity = identity.ok_or_else(|| Error::Format("missing 'identity:' line".into()))?;
        let mut table = vec![vec![usize::MAX; size]; size];
        for (i, j, k) in mults {
            if i >= size || j >= size || k >= size {
                return Err(Error::Format(format!("mult {i} {j} -> {k} out of range")));
            }
            table[i][j] = k;
        }
        for (i, row) in table.iter().enumerate() {
            if let Some(j) = row.iter().position(|&k| k == usize::MAX) {
                return Err(Error::Format(format!("missing product 'mult {i} {j}'")));
            }
        }
        let monoid = FiniteMonoid::new(table, identity)?;
        let alphabet = Alphabet::new(letters.iter().map(|&(c, _)| c))?;
        if alphabet.len() != letters.len() {
            return Err(Error::Format("duplicate letter line".into()));
        }
        let mut images = vec![0; alphabet.len()];
        for (c, s) in letters {
            images[alphabet.index_of(c).unwrap()] = s;
        }
        Self::new(alphabet, monoid, images)
    }

    /// Inverse of [`MonoidMorphism::parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        let m = &self.monoid;
        writeln!(out, "classes: {}", m.size()).unwrap();
        writeln!(out, "identity: {}", m.identity()).unwrap();
        for (a, &s) in self.letter_images.iter().enumerate() {
            writeln!(out, "letter {} -> {s}", self.alphabet.symbol(a)).unwrap();
        }
        for i in 0..m.size() {
            for j in 0..m.size() {
                writeln!(out, "mult {i} {j} -> {}", m.mul(i, j)).unwrap();
            }
        }
        out
    }

    /// Multiplication table as an integer grid, headed by element names.
    pub fn dump_table(&self) -> String {
        let m = &self.monoid;
        let mut out = String::new();
        for s in 0..m.size() {
            writeln!(out, "{s}: {}", self.name(s)).unwrap();
        }
        for row in m.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        out
    }
}

/// A language `α⁻¹(F)` together with its recognizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedLanguage {
    pub morphism: MonoidMorphism,
    pub accepting: Vec<bool>,
}

impl RecognizedLanguage {
    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.accepting[self.morphism.eval(w)]
    }

    pub fn accepting_elements(&self) -> Vec<Element> {
        (0..self.accepting.len()).filter(|&s| self.accepting[s]).collect()
    }

    pub fn to_dfa(&self) -> Dfa {
        self.morphism.preimage(|s| self.accepting[s])
    }
}

/// Transition monoid of a complete DFA. Elements are the state
/// transformations induced by words, numbered in BFS order from the
/// identity; the accepting elements send the initial state into an
/// accepting state. For a minimal DFA this is the syntactic morphism.
pub fn transition_monoid(d: &Dfa) -> RecognizedLanguage {
    let n = d.num_states();
    let letters: Vec<Vec<usize>> = (0..d.alphabet().len())
        .map(|a| (0..n).map(|q| d.step(q, a)).collect())
        .collect();
    let compose = |f: &Vec<usize>, g: &Vec<usize>| f.iter().map(|&q| g[q]).collect::<Vec<usize>>();
    let graph = CayleyGraph::explore((0..n).collect(), &letters, compose, usize::MAX)
        .expect("unbounded exploration");
    let (monoid, values, _) = graph.into_monoid(compose);
    let letter_images = letters
        .iter()
        .map(|t| values.iter().position(|v| v == t).unwrap())
        .collect();
    let accepting = values.iter().map(|t| d.is_accepting(t[d.initial()])).collect();
    let morphism = MonoidMorphism::build(d.alphabet().clone(), Arc::new(monoid), letter_images);
    RecognizedLanguage { morphism, accepting }
}

/// Syntactic morphism of the language of `d` (transition monoid of its
/// minimal DFA).
pub fn syntactic_morphism(d: &Dfa) -> RecognizedLanguage {
    transition_monoid(&d.minimize())
}

/// Product of several morphisms restricted to its image, with projections
/// back onto each component.
#[derive(Debug, Clone)]
pub struct ProductMorphism {
    pub morphism: MonoidMorphism,
    pub projections: Vec<Vec<Element>>,
}

pub fn product_morphism(parts: &[MonoidMorphism]) -> Result<ProductMorphism> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Precondition("product of an empty list of morphisms".into()))?;
    for p in parts {
        first.alphabet.ensure_same(&p.alphabet)?;
    }
    let one: Vec<Element> = parts.iter().map(|p| p.monoid.identity()).collect();
    let letters: Vec<Vec<Element>> = (0..first.alphabet.len())
        .map(|a| parts.iter().map(|p| p.letter_images[a]).collect())
        .collect();
    let mul = |x: &Vec<Element>, y: &Vec<Element>| {
        parts
            .iter()
            .enumerate()
            .map(|(i, p)| p.monoid.mul(x[i], y[i]))
            .collect::<Vec<Element>>()
    };
    let graph = CayleyGraph::explore(one, &letters, mul, usize::MAX)?;
    let (monoid, values, _) = graph.into_monoid(mul);
    let letter_images = letters
        .iter()
        .map(|t| values.iter().position(|v| v == t).unwrap())
        .collect();
    let projections = (0..parts.len())
        .map(|i| values.iter().map(|v| v[i]).collect())
        .collect();
    Ok(ProductMorphism {
        morphism: MonoidMorphism::build(first.alphabet.clone(), Arc::new(monoid), letter_images),
        projections,
    })
}
