//! Brute-force enumeration of fan words and independent checks of the exact
//! winding and validity computations.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupcore::{det2, LatticeVector};
use crate::toricfan::{fulton_reduce, geometric_winding, validate_toric_geometric, word_to_fan, FanWord, ToricFan};

pub const SEARCH_LIMIT: u128 = 100_000_000;

/// All words of length `d` with entries in `[-bound, bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSpec {
    pub d: usize,
    pub bound: i64,
}

impl EnumerationSpec {
    pub fn new(d: usize, bound: i64) -> Result<Self> {
        if d == 0 || bound < 0 {
            return Err(Error::Domain(format!("need d >= 1 and bound >= 0, got d={d}, bound={bound}")));
        }
        Ok(Self { d, bound })
    }

    pub fn size(&self) -> u128 {
        (2 * self.bound as u128 + 1).checked_pow(self.d as u32).unwrap_or(u128::MAX)
    }

    fn check_size(&self) -> Result<()> {
        match self.size() {
            n if n > SEARCH_LIMIT => Err(Error::SearchSpaceTooLarge(n)),
            _ => Ok(()),
        }
    }
}

type M = (i64, i64, i64, i64);

/// `m * S * T^a` with `S = [[0,-1],[1,0]]`, `T = [[1,1],[0,1]]`.
fn mul_st(m: M, a: i64) -> M {
    let (p, q, r, s) = m;
    // S T^a = [[0, -1], [1, a]]
    (q, -p + q * a, s, -r + s * a)
}

/// Calls `visit` with every word in the box (first entry fixed to `first`) whose
/// product `S T^{a_0} ... S T^{a_{d-1}}` is the identity matrix.
fn walk_kernel(spec: EnumerationSpec, first: i64, visit: &mut impl FnMut(&[i64])) {
    fn go(spec: EnumerationSpec, word: &mut Vec<i64>, m: M, visit: &mut impl FnMut(&[i64])) {
        if word.len() == spec.d {
            if m == (1, 0, 0, 1) {
                visit(word);
            }
            return;
        }
        for a in -spec.bound..=spec.bound {
            word.push(a);
            go(spec, word, mul_st(m, a), visit);
            word.pop();
        }
    }
    let mut word = vec![first];
    go(spec, &mut word, mul_st((1, 0, 0, 1), first), visit);
}

fn kernel_words(spec: EnumerationSpec) -> Result<Vec<FanWord>> {
    spec.check_size()?;
    let mut words: Vec<FanWord> = (-spec.bound..=spec.bound)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            walk_kernel(spec, first, &mut |w| out.push(FanWord(w.to_vec())));
            out
        })
        .collect();
    words.sort();
    Ok(words)
}

/// Words in the box whose lift is `(I, 12)`, in lexicographic order.
pub fn enumerate_solutions(spec: EnumerationSpec) -> Result<Vec<FanWord>> {
    Ok(kernel_words(spec)?.into_iter().filter(|w| w.weight() == 12).collect())
}

/// Outcome of comparing the algebraic and geometric descriptions of toric fans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    pub spec: EnumerationSpec,
    pub words_searched: u128,
    /// Words whose product is the identity matrix.
    pub kernel_words: usize,
    /// Kernel words with lift `(I, 12)`.
    pub algebraic_valid: usize,
    /// Kernel words whose generated vectors pass the geometric check.
    pub geometric_valid: usize,
    pub counterexamples: Vec<FanWord>,
    /// Kernel words where `weight / 12`, the ray-crossing winding and the
    /// floating-point winding do not all agree.
    pub winding_mismatches: Vec<FanWord>,
}

/// For each kernel word in the box: lift `(I, 12)` iff the vectors from seed
/// `(1,0), (0,1)` form a valid fan, and `weight / 12` equals both windings.
pub fn geometric_equiv_check(spec: EnumerationSpec) -> Result<EquivReport> {
    let words = kernel_words(spec)?;
    let seed = (LatticeVector::new(1, 0), LatticeVector::new(0, 1));
    let checked: Vec<(bool, bool, bool)> = words
        .par_iter()
        .map(|w| {
            let fan = word_to_fan(w, seed.0, seed.1).expect("unit seed");
            debug_assert!(fan.closes);
            let algebraic = w.weight() == 12;
            let geometric = validate_toric_geometric(&fan.vectors).valid;
            let exact = geometric_winding(&fan.vectors).expect("adjacent determinants are 1");
            let float = float_winding_crosscheck(&fan.vectors);
            let windings_agree = w.weight() % 12 == 0 && w.weight() / 12 == exact && float.agree;
            (algebraic, geometric, windings_agree)
        })
        .collect();
    let pick = |f: &dyn Fn(&(bool, bool, bool)) -> bool| -> Vec<FanWord> {
        words.iter().zip(&checked).filter(|(_, c)| f(c)).map(|(w, _)| w.clone()).collect()
    };
    Ok(EquivReport {
        spec,
        words_searched: spec.size(),
        kernel_words: words.len(),
        algebraic_valid: checked.iter().filter(|c| c.0).count(),
        geometric_valid: checked.iter().filter(|c| c.1).count(),
        counterexamples: pick(&|c| c.0 != c.1),
        winding_mismatches: pick(&|c| !c.2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatWindingReport {
    pub exact: Option<i64>,
    /// Sum of the turning angles divided by `2π`.
    pub turns: f64,
    pub float: i64,
    pub agree: bool,
}

/// Winding number from a floating-point angle sum, compared with the exact count.
pub fn float_winding_crosscheck(vectors: &[LatticeVector]) -> FloatWindingReport {
    let d = vectors.len();
    let turns: f64 = (0..d)
        .map(|i| {
            let (v, w) = (vectors[i], vectors[(i + 1) % d]);
            let dot = (v.x * w.x + v.y * w.y) as f64;
            (det2(v, w) as f64).atan2(dot)
        })
        .sum::<f64>()
        / TAU;
    let float = turns.round() as i64;
    let exact = geometric_winding(vectors).ok();
    FloatWindingReport { exact, turns, float, agree: exact == Some(float) }
}

/// One solution word with its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub word: String,
    pub d: usize,
    pub weight: i64,
    pub winding: i64,
    pub minimal_model: String,
}

pub fn census(spec: EnumerationSpec) -> Result<Vec<CensusRow>> {
    let seed = (LatticeVector::new(1, 0), LatticeVector::new(0, 1));
    enumerate_solutions(spec)?
        .into_iter()
        .map(|w| {
            let vectors = word_to_fan(&w, seed.0, seed.1)?.vectors;
            let winding = geometric_winding(&vectors)?;
            let model = fulton_reduce(&ToricFan::new(vectors)?)?.model;
            Ok(CensusRow {
                word: w.to_string(),
                d: w.len(),
                weight: w.weight(),
                winding,
                minimal_model: model.to_string(),
            })
        })
        .collect()
}

pub fn write_census_csv(rows: &[CensusRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}
