//! Synthesis of expressions for the preimages of a C-aperiodic morphism.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Element, MonoidMorphism};
use crate::automata::Dfa;
use crate::baseclass::{BaseClass, FiniteBase};
use crate::error::{Error, Result};
use crate::stutter::is_c_aperiodic;

use super::delay::min_sync_delay;
use super::expr::{sd_inter, sd_letter, sd_product, sd_star, sd_union_all, validate_rec, Sd};

/// One block of a partition: an expression, its language, and the value
/// `s·α(u)` shared by every word `u` in it.
#[derive(Debug, Clone)]
pub struct Part {
    pub expr: Sd,
    pub dfa: Dfa,
    pub value: Element,
}

/// A partition of `P*` into `s`-safe parts.
#[derive(Debug, Clone)]
pub struct PartitionCertificate {
    pub p: Dfa,
    pub s: Element,
    pub parts: Vec<Part>,
}

impl PartitionCertificate {
    /// Checks disjointness, coverage of `P*` and `s`-safety of every part.
    pub fn verify(&self, alpha: &MonoidMorphism) -> Result<()> {
        let fail = |msg: String| Err(Error::Precondition(format!("partition certificate: {msg}")));
        let target = self.p.star();
        let mut covered = Dfa::empty(target.alphabet());
        for (i, part) in self.parts.iter().enumerate() {
            if let Some(w) = covered.intersect(&part.dfa)?.shortest_word() {
                return fail(format!(
                    "part {i} overlaps an earlier part on \"{}\"",
                    target.alphabet().render(&w)
                ));
            }
            covered = covered.union(&part.dfa)?;
            let img = alpha.image_of_language_from(self.s, &part.dfa)?;
            if img != [part.value] {
                return fail(format!("part {i} is not safe: values {img:?}, expected {}", part.value));
            }
        }
        if let Some(w) = covered.symmetric_difference(&target)?.shortest_word() {
            return fail(format!(
                "union differs from P* on \"{}\"",
                target.alphabet().render(&w)
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Base,
    SubCase1,
    SubCase2,
}

/// `(|α(P⁺)|, |H|, |s·α(P*)|)`.
pub type Measure = (usize, usize, usize);

#[derive(Debug, Clone, Serialize)]
pub struct MeasureStep {
    pub depth: usize,
    pub measure: Measure,
    pub case: Option<Case>,
    pub memo_hit: bool,
}

impl fmt::Display for MeasureStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let case = match self.case {
            Some(Case::Base) => "base",
            Some(Case::SubCase1) => "sub-case 1",
            Some(Case::SubCase2) => "sub-case 2",
            None => "memo",
        };
        let (a, b, c) = self.measure;
        write!(f, "{:indent$}({a}, {b}, {c}) {case}", "", indent = 2 * self.depth)
    }
}

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub dmax: usize,
    /// Check every intermediate certificate.
    pub verify: bool,
    /// Run the validator on every emitted part.
    pub validate: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            dmax: 8,
            verify: true,
            validate: true,
        }
    }
}

/// A partition of `A*` whose parts determine `α`.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub partition: PartitionCertificate,
    pub measures: Vec<MeasureStep>,
    pub max_delay: usize,
}

impl Synthesis {
    /// Disjoint union of the parts with value `t`, or `0`.
    pub fn expression_for(&self, t: Element) -> Sd {
        self.expression_for_set(&[t])
    }

    /// Expression for `α⁻¹(ts)`.
    pub fn expression_for_set(&self, ts: &[Element]) -> Sd {
        let parts: Vec<Sd> = self
            .partition
            .parts
            .iter()
            .filter(|p| ts.contains(&p.value))
            .map(|p| p.expr.clone())
            .collect();
        sd_union_all(&parts)
    }

    pub fn language_for(&self, t: Element) -> Result<Dfa> {
        let mut d = Dfa::empty(self.partition.p.alphabet());
        for p in self.partition.parts.iter().filter(|p| p.value == t) {
            d = d.union(&p.dfa)?;
        }
        Ok(d)
    }

    /// Whether every recorded measure is strictly below its caller's.
    pub fn measure_decreases(&self) -> bool {
        let mut stack: Vec<Measure> = Vec::new();
        for step in &self.measures {
            stack.truncate(step.depth);
            if stack.last().is_some_and(|&parent| step.measure >= parent) {
                return false;
            }
            stack.push(step.measure);
        }
        true
    }
}

type MemoKey = (Dfa, Vec<Dfa>, Element);

struct Synth<'a> {
    alpha: &'a MonoidMorphism,
    base: &'a FiniteBase,
    opts: &'a SynthOptions,
    memo: HashMap<MemoKey, Vec<Part>>,
    log: Vec<MeasureStep>,
    max_delay: usize,
}

impl Synth<'_> {
    fn image(&self, s: Element, d: &Dfa) -> Result<Vec<Element>> {
        self.alpha.image_of_language_from(s, d)
    }

    fn single_value(&self, s: Element, d: &Dfa) -> Result<Element> {
        match self.image(s, d)?.as_slice() {
            [v] => Ok(*v),
            other => Err(Error::Precondition(format!(
                "synthesized part is not safe: values {other:?}"
            ))),
        }
    }

    /// Unambiguous product, dropping factors that denote `{ε}`.
    fn product(&self, l: (&Sd, &Dfa), r: (&Sd, &Dfa)) -> Result<(Sd, Dfa)> {
        let eps = Dfa::epsilon(self.alpha.alphabet());
        if *l.1 == eps {
            return Ok((r.0.clone(), r.1.clone()));
        }
        if *r.1 == eps {
            return Ok((l.0.clone(), l.1.clone()));
        }
        Ok((sd_product(l.0, r.0), l.1.concat(r.1)?))
    }

    fn union_of(&self, parts: &[Part]) -> Result<Dfa> {
        let mut d = Dfa::empty(self.alpha.alphabet());
        for p in parts {
            d = d.union(&p.dfa)?;
        }
        Ok(d)
    }

    /// Joins parts with equal value into one disjoint union.
    fn merge_by_value(&self, parts: Vec<Part>) -> Result<Vec<Part>> {
        let mut groups: Vec<(Element, Vec<Part>)> = Vec::new();
        for part in parts {
            match groups.iter_mut().find(|(v, _)| *v == part.value) {
                Some((_, g)) => g.push(part),
                None => groups.push((part.value, vec![part])),
            }
        }
        groups
            .into_iter()
            .map(|(value, g)| {
                if g.len() == 1 {
                    return Ok(g.into_iter().next().unwrap());
                }
                let exprs: Vec<Sd> = g.iter().map(|p| p.expr.clone()).collect();
                Ok(Part {
                    expr: sd_union_all(&exprs),
                    dfa: self.union_of(&g)?,
                    value,
                })
            })
            .collect()
    }

    /// An `s`-safe partition of `P*`, where `hparts` is a `1`-safe partition
    /// of the prefix code `P` with delay at most `bound`.
    fn run(
        &mut self,
        p: &Dfa,
        hparts: &[Part],
        bound: usize,
        s: Element,
        parent: Option<Measure>,
        depth: usize,
    ) -> Result<Vec<Part>> {
        let m = self.alpha.monoid();
        let pstar = p.star();
        let measure = (
            self.image(m.identity(), &p.plus())?.len(),
            hparts.len(),
            self.image(s, &pstar)?.len(),
        );
        if let Some(parent) = parent {
            if measure >= parent {
                return Err(Error::Precondition(format!(
                    "recursion measure {measure:?} does not decrease below {parent:?}"
                )));
            }
        }
        let key = (p.clone(), hparts.iter().map(|h| h.dfa.clone()).collect(), s);
        if let Some(parts) = self.memo.get(&key) {
            self.log.push(MeasureStep {
                depth,
                measure,
                case: None,
                memo_hit: true,
            });
            return Ok(parts.clone());
        }
        let step = self.log.len();
        self.log.push(MeasureStep {
            depth,
            measure,
            case: None,
            memo_hit: false,
        });

        let d = if p.is_empty() {
            0
        } else {
            min_sync_delay(p, bound)?.ok_or_else(|| {
                Error::Precondition(format!("prefix code has no synchronization delay within {bound}"))
            })?
        };
        if d > self.opts.dmax {
            return Err(Error::Budget {
                what: "synchronization delay",
                size: d,
                budget: self.opts.dmax,
            });
        }
        self.max_delay = self.max_delay.max(d);
        let pexpr = sd_union_all(&hparts.iter().map(|h| h.expr.clone()).collect::<Vec<_>>());
        let star_expr = sd_star(&pexpr, d);

        let sp = self.image(s, &pstar)?;
        let mut violating = None;
        for (i, h) in hparts.iter().enumerate() {
            if self.image(s, &pstar.concat(&h.dfa)?)? != sp {
                violating = Some(i);
                break;
            }
        }

        let (case, parts) = match violating {
            None => {
                let classes = self.base.canon().image_of_language(&pstar)?;
                let mut parts = Vec::new();
                if classes.len() == 1 {
                    let value = self.single_value(s, &pstar)?;
                    parts.push(Part {
                        expr: star_expr,
                        dfa: pstar.clone(),
                        value,
                    });
                } else {
                    for c in classes {
                        let dfa = pstar.intersect(&self.base.class_language(&[c]))?;
                        let value = self.single_value(s, &dfa)?;
                        parts.push(Part {
                            expr: sd_inter(&star_expr, vec![c]),
                            dfa,
                            value,
                        });
                    }
                }
                (Case::Base, parts)
            }
            Some(i) => {
                let h = &hparts[i];
                let rest: Vec<Part> = hparts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, x)| x.clone())
                    .collect();
                let prest = self.union_of(&rest)?;
                let us = self.run(&prest, &rest, d, m.identity(), Some(measure), depth + 1)?;
                let t = h.value;
                let ph = self.image(m.identity(), &pstar.concat(&h.dfa)?)?;
                let pplus = self.image(m.identity(), &p.plus())?;
                let mut parts = Vec::new();
                if ph == pplus {
                    for u in &us {
                        parts.push(Part {
                            expr: u.expr.clone(),
                            dfa: u.dfa.clone(),
                            value: m.mul(s, u.value),
                        });
                        let (uh_expr, uh_dfa) = self.product((&u.expr, &u.dfa), (&h.expr, &h.dfa))?;
                        let s2 = m.mul(m.mul(s, u.value), t);
                        let ws = self.run(p, hparts, d, s2, Some(measure), depth + 1)?;
                        for w in ws {
                            let (expr, dfa) = self.product((&uh_expr, &uh_dfa), (&w.expr, &w.dfa))?;
                            parts.push(Part {
                                expr,
                                dfa,
                                value: w.value,
                            });
                        }
                    }
                    (Case::SubCase1, parts)
                } else {
                    let mut fparts = Vec::new();
                    for u in &us {
                        let (expr, dfa) = self.product((&u.expr, &u.dfa), (&h.expr, &h.dfa))?;
                        fparts.push(Part {
                            expr,
                            dfa,
                            value: m.mul(u.value, t),
                        });
                    }
                    let q = prest.star().concat(&h.dfa)?;
                    let vs = self.run(&q, &fparts, d + 1, m.identity(), Some(measure), depth + 1)?;
                    for v in &vs {
                        for u in &us {
                            let (expr, dfa) = self.product((&v.expr, &v.dfa), (&u.expr, &u.dfa))?;
                            parts.push(Part {
                                expr,
                                dfa,
                                value: m.mul(s, m.mul(v.value, u.value)),
                            });
                        }
                    }
                    (Case::SubCase2, parts)
                }
            }
        };
        let parts = self.merge_by_value(parts)?;
        self.log[step].case = Some(case);
        if self.opts.verify {
            PartitionCertificate {
                p: p.clone(),
                s,
                parts: parts.clone(),
            }
            .verify(self.alpha)?;
        }
        self.memo.insert(key, parts.clone());
        Ok(parts)
    }
}

fn check_inputs<'a>(alpha: &MonoidMorphism, base: &'a BaseClass) -> Result<&'a FiniteBase> {
    let fb = base.as_finite().ok_or_else(|| {
        Error::UnsupportedBase(format!("synthesis needs a finite base, got {}", base.name()))
    })?;
    alpha.alphabet().ensure_same(fb.alphabet())?;
    if let Some(v) = is_c_aperiodic(alpha, base)? {
        return Err(Error::NotAperiodic {
            element: alpha.name(v.element),
        });
    }
    Ok(fb)
}

/// An `s`-safe partition of `P*` from a `1`-safe partition `hparts` of the
/// prefix code `P`.
pub fn synthesize_partition(
    p: &Dfa,
    hparts: &[Part],
    s: Element,
    alpha: &MonoidMorphism,
    base: &BaseClass,
    opts: &SynthOptions,
) -> Result<(PartitionCertificate, Vec<MeasureStep>)> {
    let fb = check_inputs(alpha, base)?;
    let mut synth = Synth {
        alpha,
        base: fb,
        opts,
        memo: HashMap::new(),
        log: Vec::new(),
        max_delay: 0,
    };
    let parts = synth.run(p, hparts, opts.dmax, s, None, 0)?;
    let cert = PartitionCertificate { p: p.clone(), s, parts };
    cert.verify(alpha)?;
    Ok((cert, synth.log))
}

/// A `1`-safe partition of `A*` from which every `α⁻¹(t)` is read off.
pub fn synthesize(alpha: &MonoidMorphism, base: &BaseClass, opts: &SynthOptions) -> Result<Synthesis> {
    let fb = check_inputs(alpha, base)?;
    let sigma = alpha.alphabet();
    let m = alpha.monoid();
    let letters: Vec<Part> = (0..sigma.len())
        .map(|a| Part {
            expr: sd_letter(a),
            dfa: Dfa::letter(sigma, a),
            value: alpha.letter_image(a),
        })
        .collect();
    let p = Dfa::any_letter(sigma);
    let mut synth = Synth {
        alpha,
        base: fb,
        opts,
        memo: HashMap::new(),
        log: Vec::new(),
        max_delay: 0,
    };
    let parts = synth.run(&p, &letters, 1, m.identity(), None, 0)?;
    let partition = PartitionCertificate {
        p,
        s: m.identity(),
        parts,
    };
    partition.verify(alpha)?;
    if opts.validate {
        let mut memo = HashMap::new();
        for (i, part) in partition.parts.iter().enumerate() {
            let d = validate_rec(&part.expr, sigma, Some(fb), opts.dmax, &mut memo)?;
            if d != part.dfa {
                return Err(Error::Precondition(format!(
                    "part {i} denotes a different language than recorded"
                )));
            }
        }
    }
    Ok(Synthesis {
        partition,
        measures: synth.log,
        max_delay: synth.max_delay,
    })
}

/// An expression for `α⁻¹(t)`.
pub fn synthesize_language(alpha: &MonoidMorphism, t: Element, base: &BaseClass, dmax: usize) -> Result<Sd> {
    let opts = SynthOptions {
        dmax,
        ..SynthOptions::default()
    };
    Ok(synthesize(alpha, base, &opts)?.expression_for(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::syntactic_morphism;
    use crate::automata::{compile, parse_regex, Alphabet};
    use crate::sdlang::validate;

    fn check_all(alpha: &MonoidMorphism, base: &BaseClass) -> Synthesis {
        let syn = synthesize(alpha, base, &SynthOptions::default()).unwrap();
        assert!(syn.measure_decreases());
        let fb = base.as_finite().unwrap();
        for &t in alpha.image() {
            let e = syn.expression_for(t);
            let d = validate(&e, alpha.alphabet(), Some(fb), 8).unwrap();
            assert_eq!(d, alpha.preimage_of(t), "value {t}");
        }
        syn
    }

    #[test]
    fn trivial_morphism_gives_universal() {
        let sigma = Alphabet::parse("ab").unwrap();
        let alpha = MonoidMorphism::trivial(&sigma);
        let e = synthesize_language(&alpha, 0, &BaseClass::triv(&sigma), 8).unwrap();
        assert!(validate(&e, &sigma, None, 8).unwrap().is_universal());
        assert_eq!(e.display(&sigma), "(a | b)*1");
    }

    #[test]
    fn parity_under_parity_class() {
        let sigma = Alphabet::parse("a").unwrap();
        let alpha = MonoidMorphism::length_mod(&sigma, 2);
        let base = BaseClass::length_mod(&sigma, 2);
        let syn = check_all(&alpha, &base);
        assert_eq!(syn.partition.parts.len(), 2);
        assert_eq!(syn.measures.len(), 1);
        assert_eq!(syn.measures[0].case, Some(Case::Base));
        let even = compile(&parse_regex("(aa)*", &sigma).unwrap(), &sigma);
        assert_eq!(syn.language_for(0).unwrap(), even);
    }

    #[test]
    fn parity_under_triv_is_rejected() {
        let sigma = Alphabet::parse("a").unwrap();
        let alpha = MonoidMorphism::length_mod(&sigma, 2);
        let err = synthesize(&alpha, &BaseClass::triv(&sigma), &SynthOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotAperiodic { .. }));
    }

    #[test]
    fn ab_star_round_trip() {
        let sigma = Alphabet::parse("ab").unwrap();
        let l = compile(&parse_regex("(ab)*", &sigma).unwrap(), &sigma);
        let syn = syntactic_morphism(&l);
        let alpha = &syn.morphism;
        let base = BaseClass::triv(&sigma);
        let s = check_all(alpha, &base);
        let one = alpha.monoid().identity();
        let e = synthesize_language(alpha, one, &base, 8).unwrap();
        assert_eq!(validate(&e, &sigma, None, 8).unwrap(), Dfa::epsilon(&sigma));
        let e = s.expression_for_set(&syn.accepting_elements());
        assert_eq!(validate(&e, &sigma, None, 8).unwrap(), l);
        assert!(s.max_delay >= 1);
    }

    #[test]
    fn group_base_is_unsupported() {
        let sigma = Alphabet::parse("a").unwrap();
        let alpha = MonoidMorphism::trivial(&sigma);
        let err = synthesize(&alpha, &BaseClass::mod_class(), &SynthOptions::default()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBase(_)));
    }
}
