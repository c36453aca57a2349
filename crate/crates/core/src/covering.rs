//! Covering, separation and membership through optimal imprints.
//!
//! With the canonical rating map `ρ*(w) = {α(w)}` for a morphism `α`
//! recognizing `L1` through `F_0` and each `L2_i` through `F_i`, the pair
//! `(L1, {L2_i})` is coverable iff the optimal imprint on `A*` contains no
//! bad element: a set `T` meeting `F_0` and every `F_i`.

use serde::Serialize;

use crate::algebra::{transition_monoid, MonoidMorphism};
use crate::automata::{Alphabet, Dfa};
use crate::baseclass::{mod_eps_witness, BaseClass, LengthLasso};
use crate::error::{Error, Result};
use crate::imprint::{optimal_imprint, EngineOptions, Imprint};
use crate::semiring::{canonical_rating_map, render_set, DEFAULT_BUDGET};

#[derive(Debug, Clone)]
pub struct CoverInstance {
    pub l1: Dfa,
    pub l2s: Vec<Dfa>,
    pub base: BaseClass,
}

#[derive(Debug, Clone)]
pub struct CoverOptions {
    pub budget: usize,
    pub engine: EngineOptions,
    /// Record a derivation for every maximal imprint element.
    pub trace: bool,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            budget: DEFAULT_BUDGET,
            engine: EngineOptions::default(),
            trace: false,
        }
    }
}

/// A set `T ⊆ M` of the imprint meeting every accepting set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadElement {
    pub elements: Vec<usize>,
    pub names: Vec<String>,
    pub derivation: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub coverable: bool,
    pub base: String,
    pub monoid_size: usize,
    pub imprint_maximal: Vec<Vec<String>>,
    pub bad_element: Option<BadElement>,
    pub separator_hint: Option<String>,
    pub iterations: usize,
    pub oracle_calls: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    #[serde(skip)]
    pub separator: Option<Dfa>,
}

pub fn decide_cover(inst: &CoverInstance, opts: &CoverOptions) -> Result<Verdict> {
    if inst.l2s.is_empty() {
        return Err(Error::Precondition("covering needs at least one language to avoid".into()));
    }
    let alphabet = inst.l1.alphabet();
    for l in &inst.l2s {
        alphabet.ensure_same(l.alphabet())?;
    }
    if let Some(fb) = inst.base.as_finite() {
        alphabet.ensure_same(fb.alphabet())?;
    }
    let parts: Vec<_> = std::iter::once(&inst.l1)
        .chain(&inst.l2s)
        .map(|d| transition_monoid(&d.minimize()))
        .collect();
    let canon = canonical_rating_map(&parts, opts.budget)?;
    let imp = optimal_imprint(&canon.rho, &inst.base, &opts.engine)?;
    let alpha = &canon.morphism;

    let bad = imp.imprint.maximal().iter().find_map(|m| {
        let picks: Option<Vec<usize>> = canon
            .accepting
            .iter()
            .map(|f| m.ones().find(|&x| f.contains(x)))
            .collect();
        picks
    });
    let bad_element = bad.map(|mut elements| {
        elements.sort();
        elements.dedup();
        bad_certificate(&imp, alpha, elements)
    });
    let coverable = bad_element.is_none();
    let (separator, separator_hint) = if coverable {
        find_separator(inst).map_or((None, None), |(d, h)| (Some(d), Some(h)))
    } else {
        (None, None)
    };
    let fix = imp.iota.as_ref().unwrap_or(&imp.fixpoint);
    let trace = if opts.trace {
        imp.imprint
            .maximal()
            .iter()
            .flat_map(|m| {
                let mut lines = vec![format!("{}:", render_set(m, alpha))];
                if let Some(node) = imp.node_above(m) {
                    lines.extend(
                        imp.fixpoint
                            .render_derivation(node, |c, r| derivation_label(&imp, alpha, c, r))
                            .into_iter()
                            .map(|l| format!("  {l}")),
                    );
                }
                lines
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(Verdict {
        coverable,
        base: inst.base.name().to_string(),
        monoid_size: alpha.monoid().size(),
        imprint_maximal: imp
            .imprint
            .maximal()
            .iter()
            .map(|m| m.ones().map(|e| alpha.name(e)).collect())
            .collect(),
        bad_element,
        separator_hint,
        iterations: imp.fixpoint.iterations + imp.iota.as_ref().map_or(0, |f| f.iterations),
        oracle_calls: fix.oracle_calls,
        trace,
        separator,
    })
}

fn bad_certificate(imp: &Imprint, alpha: &MonoidMorphism, elements: Vec<usize>) -> BadElement {
    let mut t = fixedbitset::FixedBitSet::with_capacity(alpha.monoid().size());
    for &e in &elements {
        t.insert(e);
    }
    let node = imp.node_above(&t).expect("bad element lies in the imprint");
    let derivation = imp
        .fixpoint
        .render_derivation(node, |c, r| derivation_label(imp, alpha, c, r));
    let mut lines = derivation;
    if let Some(iota) = &imp.iota {
        lines.push("complete set:".into());
        for &root in &iota.max[0] {
            let sub = iota.render_derivation(root, |_, r| render_set(r, alpha));
            lines.extend(sub.into_iter().map(|l| format!("  {l}")));
        }
    }
    BadElement {
        names: elements.iter().map(|&e| alpha.name(e)).collect(),
        elements,
        derivation: lines,
    }
}

fn derivation_label(imp: &Imprint, alpha: &MonoidMorphism, c: usize, r: &fixedbitset::FixedBitSet) -> String {
    if imp.fixpoint.num_classes() > 1 {
        format!("(class {c}, {})", render_set(r, alpha))
    } else {
        render_set(r, alpha)
    }
}

/// Best-effort concrete separator from the base class itself: a union of
/// classes for a finite base, a length-modulo language for `mod`.
fn find_separator(inst: &CoverInstance) -> Option<(Dfa, String)> {
    let avoid = inst
        .l2s
        .iter()
        .skip(1)
        .try_fold(inst.l2s[0].clone(), |acc, l| acc.union(l))
        .ok()?;
    match &inst.base {
        BaseClass::Finite(fb) => {
            let classes = fb.canon().image_of_language(&inst.l1).ok()?;
            let k = fb.class_language(&classes);
            if k.intersect(&avoid).ok()?.is_empty() {
                let names: Vec<String> = classes.iter().map(|&c| fb.class_name(c)).collect();
                return Some((k, format!("union of classes [{}]", names.join(", "))));
            }
            None
        }
        BaseClass::Group(g) if g.name() == "mod" => {
            let a = inst.l1.alphabet();
            let lasso = LengthLasso::of(&inst.l1);
            let mut moduli: Vec<usize> = (1..=2 * (lasso.tail + lasso.cycle).max(6)).collect();
            if let Some(m) = mod_eps_witness(&avoid) {
                moduli.push(m);
            }
            moduli.into_iter().find_map(|m| {
                let k = length_residues(a, m, &inst.l1)?;
                k.0.intersect(&avoid).ok()?.is_empty().then(|| {
                    (k.0, format!("lengths ≡ {:?} mod {m}", k.1))
                })
            })
        }
        BaseClass::Group(_) => None,
    }
}

fn length_residues(a: &Alphabet, m: usize, l: &Dfa) -> Option<(Dfa, Vec<usize>)> {
    let lasso = LengthLasso::of(l);
    let horizon = lasso.tail + lasso.cycle * m;
    let mut res: Vec<usize> = (0..horizon).filter(|&n| lasso.contains(n)).map(|n| n % m).collect();
    res.sort();
    res.dedup();
    let mut k = Dfa::empty(a);
    for &r in &res {
        k = k.union(&Dfa::length_mod(a, m, r)).ok()?;
    }
    Some((k, res))
}

pub fn decide_separation(l1: &Dfa, l2: &Dfa, base: &BaseClass, opts: &CoverOptions) -> Result<Verdict> {
    decide_cover(
        &CoverInstance {
            l1: l1.clone(),
            l2s: vec![l2.clone()],
            base: base.clone(),
        },
        opts,
    )
}

/// `L ∈ SF(C)` iff `L` is separable from its complement.
pub fn membership_via_covering(l: &Dfa, base: &BaseClass, opts: &CoverOptions) -> Result<bool> {
    Ok(decide_separation(l, &l.complement(), base, opts)?.coverable)
}
