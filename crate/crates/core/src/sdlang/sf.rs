//! Star-free expressions over a finite base class, and star elimination.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{Alphabet, Dfa, Letter};
use crate::baseclass::{ClassId, FiniteBase};
use crate::error::{Error, Result};

use super::delay::{prefix_code_violation, sync_delay_witness};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SfExpr {
    Empty,
    Letter(Letter),
    /// Union of `~C`-classes.
    ClassLang(Vec<ClassId>),
    Union(Arc<SfExpr>, Arc<SfExpr>),
    Complement(Arc<SfExpr>),
    Concat(Arc<SfExpr>, Arc<SfExpr>),
}

pub type Sf = Arc<SfExpr>;

pub fn sf_empty() -> Sf {
    Arc::new(SfExpr::Empty)
}

pub fn sf_letter(a: Letter) -> Sf {
    Arc::new(SfExpr::Letter(a))
}

pub fn sf_union(l: &Sf, r: &Sf) -> Sf {
    Arc::new(SfExpr::Union(l.clone(), r.clone()))
}

pub fn sf_complement(e: &Sf) -> Sf {
    Arc::new(SfExpr::Complement(e.clone()))
}

pub fn sf_concat(l: &Sf, r: &Sf) -> Sf {
    Arc::new(SfExpr::Concat(l.clone(), r.clone()))
}

/// `l ∩ r` as `~(~l + ~r)`.
pub fn sf_intersect(l: &Sf, r: &Sf) -> Sf {
    sf_complement(&sf_union(&sf_complement(l), &sf_complement(r)))
}

pub fn sf_universal() -> Sf {
    sf_complement(&sf_empty())
}

pub fn sf_letters(alphabet: &Alphabet) -> Sf {
    (1..alphabet.len()).fold(sf_letter(0), |acc, a| sf_union(&acc, &sf_letter(a)))
}

/// `{ε}` as the complement of `A·A*`.
pub fn sf_epsilon(alphabet: &Alphabet) -> Sf {
    sf_complement(&sf_concat(&sf_letters(alphabet), &sf_universal()))
}

/// `K^h`, with `K^0 = {ε}`.
pub fn sf_power(k: &Sf, h: usize, alphabet: &Alphabet) -> Sf {
    if h == 0 {
        return sf_epsilon(alphabet);
    }
    (1..h).fold(k.clone(), |acc, _| sf_concat(&acc, k))
}

fn union_all(items: Vec<Sf>) -> Sf {
    items
        .into_iter()
        .reduce(|acc, x| sf_union(&acc, &x))
        .unwrap_or_else(sf_empty)
}

impl SfExpr {
    /// Compiles to a minimal DFA. Class languages need a finite base.
    pub fn compile(self: &Arc<Self>, alphabet: &Alphabet, base: Option<&FiniteBase>) -> Result<Dfa> {
        let mut memo = HashMap::new();
        compile_rec(self, alphabet, base, &mut memo)
    }

    pub fn size(self: &Arc<Self>) -> usize {
        let mut seen = std::collections::HashSet::new();
        count(self, &mut seen)
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        write_sf(self, alphabet, 0, &mut out);
        out
    }
}

fn count(e: &Sf, seen: &mut std::collections::HashSet<usize>) -> usize {
    if !seen.insert(Arc::as_ptr(e) as usize) {
        return 0;
    }
    1 + match &**e {
        SfExpr::Union(l, r) | SfExpr::Concat(l, r) => count(l, seen) + count(r, seen),
        SfExpr::Complement(x) => count(x, seen),
        _ => 0,
    }
}

fn compile_rec(e: &Sf, alphabet: &Alphabet, base: Option<&FiniteBase>, memo: &mut HashMap<usize, Dfa>) -> Result<Dfa> {
    let key = Arc::as_ptr(e) as usize;
    if let Some(d) = memo.get(&key) {
        return Ok(d.clone());
    }
    let d = match &**e {
        SfExpr::Empty => Dfa::empty(alphabet),
        SfExpr::Letter(a) => Dfa::letter(alphabet, *a),
        SfExpr::ClassLang(ids) => {
            let fb = base.ok_or_else(|| Error::UnsupportedBase("class languages need a finite base".into()))?;
            if let Some(c) = ids.iter().find(|&&c| c >= fb.num_classes()) {
                return Err(Error::Validation {
                    rule: "class",
                    detail: format!("unknown class {c}"),
                });
            }
            fb.class_language(ids)
        }
        SfExpr::Union(l, r) => compile_rec(l, alphabet, base, memo)?.union(&compile_rec(r, alphabet, base, memo)?)?,
        SfExpr::Complement(x) => compile_rec(x, alphabet, base, memo)?.complement(),
        SfExpr::Concat(l, r) => compile_rec(l, alphabet, base, memo)?.concat(&compile_rec(r, alphabet, base, memo)?)?,
    };
    memo.insert(key, d.clone());
    Ok(d)
}

fn write_sf(e: &SfExpr, alphabet: &Alphabet, prec: u8, out: &mut String) {
    let (mine, open) = match e {
        SfExpr::Union(..) => (1, prec > 1),
        SfExpr::Concat(..) => (2, prec > 2),
        _ => (3, false),
    };
    if open {
        out.push('(');
    }
    match e {
        SfExpr::Empty => out.push('0'),
        SfExpr::Letter(a) => out.push(alphabet.symbol(*a)),
        SfExpr::ClassLang(ids) => {
            let ids: Vec<String> = ids.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("[{}]", ids.join(",")));
        }
        SfExpr::Union(l, r) => {
            write_sf(l, alphabet, mine, out);
            out.push_str(" + ");
            write_sf(r, alphabet, mine, out);
        }
        SfExpr::Concat(l, r) => {
            write_sf(l, alphabet, mine, out);
            out.push('.');
            write_sf(r, alphabet, mine + 1, out);
        }
        SfExpr::Complement(x) => {
            out.push('~');
            write_sf(x, alphabet, 3, out);
        }
    }
    if open {
        out.push(')');
    }
}

/// Star-free expression for `K*` when `K` is a prefix code with
/// synchronization delay `d`:
///
/// `H = (A*K^d ∩ ~(A*K^(d+1) ∪ ⋃_{h≤d} K^h))·A*` and
/// `G = ⋃_{h<d} K^h ∪ (A*K^d ∩ ~H)`.
pub fn star_eliminate(k: &Sf, d: usize, alphabet: &Alphabet, base: Option<&FiniteBase>) -> Result<Sf> {
    let kd = k.compile(alphabet, base)?;
    if let Some(w) = prefix_code_violation(&kd)? {
        return Err(Error::Precondition(format!(
            "star elimination needs a prefix code (witness {})",
            alphabet.render(&w)
        )));
    }
    if let Some(wit) = sync_delay_witness(&kd, d)? {
        return Err(Error::Precondition(format!(
            "no synchronization delay {d}: u={} v={} w={}",
            alphabet.render(&wit.u),
            alphabet.render(&wit.v),
            alphabet.render(&wit.w)
        )));
    }
    let d = d.max(1);
    let all = sf_universal();
    let powers: Vec<Sf> = (0..=d + 1).map(|h| sf_power(k, h, alphabet)).collect();
    let ends_kd = sf_concat(&all, &powers[d]);
    let ends_kd1 = sf_concat(&all, &powers[d + 1]);
    let short = union_all(powers[..=d].to_vec());
    let h = sf_concat(&sf_intersect(&ends_kd, &sf_complement(&sf_union(&ends_kd1, &short))), &all);
    let below = union_all(powers[..d].to_vec());
    Ok(sf_union(&below, &sf_intersect(&ends_kd, &sf_complement(&h))))
}
