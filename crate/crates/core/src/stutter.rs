//! Stutters, C-aperiodicity and membership in the star-free closure.

use serde::Serialize;

use crate::algebra::{syntactic_morphism, Element, MonoidMorphism, OmegaPower};
use crate::automata::{Dfa, Word};
use crate::baseclass::{BaseClass, ClassId, FiniteBase, GroupBase};
use crate::error::{Error, Result};

/// Why an element was reported as a stutter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StutterWitness {
    /// An idempotent class `E` together with a word of `E ∩ α⁻¹(s)`.
    Class { class: ClassId, word: Word },
    /// The oracle found `{ε}` not separable from `α⁻¹(s)`.
    Oracle,
}

#[derive(Debug, Clone)]
pub struct StutterReport {
    pub morphism: MonoidMorphism,
    pub witnesses: Vec<Option<StutterWitness>>,
}

impl StutterReport {
    pub fn is_stutter(&self, s: Element) -> bool {
        self.witnesses[s].is_some()
    }

    pub fn stutters(&self) -> Vec<Element> {
        (0..self.witnesses.len()).filter(|&s| self.is_stutter(s)).collect()
    }

    /// Re-checks the report with automata operations. Each reported stutter
    /// must come with an idempotent class meeting its preimage; each other
    /// element of a finite-kind report must be covered by its class
    /// partition `K_D = α⁻¹(s) ∩ D` with `K_D ∩ K_D K_D = ∅`.
    pub fn verify(&self, base: &BaseClass) -> Result<()> {
        let fail = |detail: String| Error::Validation {
            rule: "stutter",
            detail,
        };
        let Some(fb) = base.as_finite() else {
            return Ok(());
        };
        for s in 0..self.witnesses.len() {
            let pre = self.morphism.preimage_of(s);
            match &self.witnesses[s] {
                Some(StutterWitness::Class { class, word }) => {
                    if !fb.is_idempotent(*class) {
                        return Err(fail(format!("witness class {class} of {s} is not idempotent")));
                    }
                    if fb.class_of(word) != *class || self.morphism.eval(word) != s {
                        return Err(fail(format!("witness word of {s} is wrong")));
                    }
                }
                Some(StutterWitness::Oracle) => {
                    return Err(fail("oracle witness in a finite-kind report".into()));
                }
                None => {
                    for d in 0..fb.num_classes() {
                        let k = pre.intersect(&fb.class_language(&[d]))?;
                        if k.is_empty() {
                            continue;
                        }
                        if !k.intersect(&k.concat(&k)?)?.is_empty() {
                            return Err(fail(format!("cover element for class {d} of {s} meets its square")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn stutters(alpha: &MonoidMorphism, base: &BaseClass) -> Result<StutterReport> {
    match base {
        BaseClass::Finite(b) => stutters_finite(alpha, b),
        BaseClass::Group(b) => stutters_group(alpha, b),
    }
}

/// `s` is a stutter iff some idempotent `~C`-class meets `α⁻¹(s)`. The pairs
/// `(α(w), [w])` are explored by breadth-first search, which is the
/// emptiness test for every product `α⁻¹(s) ∩ E` at once.
pub fn stutters_finite(alpha: &MonoidMorphism, base: &FiniteBase) -> Result<StutterReport> {
    alpha.alphabet().ensure_same(base.alphabet())?;
    let m = alpha.monoid();
    let n = base.num_classes();
    let mut words: Vec<Option<Word>> = vec![None; m.size() * n];
    let start = (m.identity(), base.epsilon_class());
    words[start.0 * n + start.1] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([start]);
    let mut witnesses = vec![None; m.size()];
    while let Some((s, c)) = queue.pop_front() {
        let w = words[s * n + c].clone().unwrap();
        if witnesses[s].is_none() && base.is_idempotent(c) {
            witnesses[s] = Some(StutterWitness::Class {
                class: c,
                word: w.clone(),
            });
        }
        for a in 0..alpha.alphabet().len() {
            let ns = m.mul(s, alpha.letter_image(a));
            let nc = base.mul(c, base.class_of_letter(a));
            if words[ns * n + nc].is_none() {
                let mut nw = w.clone();
                nw.push(a);
                words[ns * n + nc] = Some(nw);
                queue.push_back((ns, nc));
            }
        }
    }
    Ok(StutterReport {
        morphism: alpha.clone(),
        witnesses,
    })
}

/// `s` is a stutter iff `{ε}` is not separable from `α⁻¹(s)`.
pub fn stutters_group(alpha: &MonoidMorphism, base: &GroupBase) -> Result<StutterReport> {
    let mut witnesses = vec![None; alpha.monoid().size()];
    for &s in alpha.image() {
        if !base.eps_separable(&alpha.preimage_of(s))? {
            witnesses[s] = Some(StutterWitness::Oracle);
        }
    }
    Ok(StutterReport {
        morphism: alpha.clone(),
        witnesses,
    })
}

/// A stutter `s` with `s^ω ≠ s^(ω+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub element: Element,
    pub omega: OmegaPower,
}

/// `None` when every stutter satisfies `s^ω = s^(ω+1)`, else the first
/// violating stutter in image order.
pub fn aperiodicity_violation(report: &StutterReport) -> Option<Violation> {
    let m = report.morphism.monoid();
    report
        .morphism
        .image()
        .iter()
        .copied()
        .filter(|&s| report.is_stutter(s))
        .map(|s| Violation {
            element: s,
            omega: m.omega(s),
        })
        .find(|v| !v.omega.is_aperiodic())
}

pub fn is_c_aperiodic(alpha: &MonoidMorphism, base: &BaseClass) -> Result<Option<Violation>> {
    Ok(aperiodicity_violation(&stutters(alpha, base)?))
}

/// Whether `L ∈ SF(C)`, via C-aperiodicity of its syntactic morphism.
pub fn membership(l: &Dfa, base: &BaseClass) -> Result<bool> {
    let syn = syntactic_morphism(l);
    Ok(is_c_aperiodic(&syn.morphism, base)?.is_none())
}
