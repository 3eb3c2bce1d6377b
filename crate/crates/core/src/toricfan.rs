//! Smooth complete toric fans in the plane, their words, corner chops and
//! reduction to minimal models.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupcore::{det2, lift_word, winding_number, GeneratorWord, LatticeVector, UniModMatrix};

/// Integers `a_i` with `v_{i+2} = -v_i + a_i v_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FanWord(pub Vec<i64>);

impl FanWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generator_word(&self) -> GeneratorWord {
        GeneratorWord::from_fan_word(&self.0)
    }

    /// `3d - sum(a)`, the weight of `S T^{a_0} ... S T^{a_{d-1}}`.
    pub fn weight(&self) -> i64 {
        3 * self.0.len() as i64 - self.0.iter().sum::<i64>()
    }

    pub fn rotated(&self, r: usize) -> FanWord {
        let d = self.0.len();
        FanWord((0..d).map(|k| self.0[(k + r) % d]).collect())
    }

    /// Lexicographically smallest cyclic rotation.
    pub fn canonical_rotation(&self) -> FanWord {
        (0..self.0.len().max(1)).map(|r| self.rotated(r)).min().unwrap_or_else(|| self.clone())
    }
}

impl fmt::Display for FanWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum MinimalModel {
    Triangle,
    Rectangle,
    Hirzebruch { k: u32 },
}

impl MinimalModel {
    pub fn hirzebruch(k: i64) -> Self {
        if k == 0 {
            MinimalModel::Rectangle
        } else {
            MinimalModel::Hirzebruch { k: k.unsigned_abs() as u32 }
        }
    }

    pub fn word(&self) -> FanWord {
        match *self {
            MinimalModel::Triangle => FanWord(vec![-1, -1, -1]),
            MinimalModel::Rectangle => FanWord(vec![0, 0, 0, 0]),
            MinimalModel::Hirzebruch { k } => FanWord(vec![0, k as i64, 0, -(k as i64)]),
        }
    }

    pub fn fan(&self) -> ToricFan {
        let v = LatticeVector::new;
        let vectors = match *self {
            MinimalModel::Triangle => vec![v(1, 0), v(0, 1), v(-1, -1)],
            MinimalModel::Rectangle => vec![v(0, 1), v(-1, 0), v(0, -1), v(1, 0)],
            MinimalModel::Hirzebruch { k } => vec![v(0, 1), v(-1, -(k as i64)), v(0, -1), v(1, 0)],
        };
        ToricFan { vectors }
    }
}

impl fmt::Display for MinimalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalModel::Triangle => write!(f, "Triangle"),
            MinimalModel::Rectangle => write!(f, "Rectangle"),
            MinimalModel::Hirzebruch { k } => write!(f, "Hirzebruch({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ToricFailure {
    TooShort { d: usize },
    Determinant { i: usize, j: usize, det: i64 },
    Winding { winding: i64 },
}

impl fmt::Display for ToricFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricFailure::TooShort { d } => write!(f, "d={d} < 3"),
            ToricFailure::Determinant { i, j, det } => write!(f, "det(v{i},v{j})={det}"),
            ToricFailure::Winding { winding } => write!(f, "winding={winding}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricReport {
    pub valid: bool,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ToricFailure>,
}

/// Checks `d >= 3`, unit adjacent determinants and that the word lifts to `(I, 12)`.
pub fn validate_toric(vectors: &[LatticeVector]) -> ToricReport {
    let d = vectors.len();
    let fail = |failure| ToricReport { valid: false, d, failure: Some(failure) };
    if d < 3 {
        return fail(ToricFailure::TooShort { d });
    }
    if let Some((i, j, det)) = first_bad_det(vectors, |det| det == 1) {
        return fail(ToricFailure::Determinant { i, j, det });
    }
    let word = word_of(vectors);
    let lift = lift_word(&word.generator_word());
    // unit determinants force the projection to be the identity
    debug_assert!(lift.matrix.is_identity());
    match winding_number(&lift) {
        Ok(1) => ToricReport { valid: true, d, failure: None },
        Ok(w) => fail(ToricFailure::Winding { winding: w }),
        Err(_) => fail(ToricFailure::Winding { winding: 0 }),
    }
}

/// Geometric counterpart of [`validate_toric`]: unit determinants and ray-crossing winding 1.
pub fn validate_toric_geometric(vectors: &[LatticeVector]) -> ToricReport {
    let d = vectors.len();
    let fail = |failure| ToricReport { valid: false, d, failure: Some(failure) };
    if d < 3 {
        return fail(ToricFailure::TooShort { d });
    }
    if let Some((i, j, det)) = first_bad_det(vectors, |det| det == 1) {
        return fail(ToricFailure::Determinant { i, j, det });
    }
    match geometric_winding(vectors) {
        Ok(1) => ToricReport { valid: true, d, failure: None },
        Ok(w) => fail(ToricFailure::Winding { winding: w }),
        Err(_) => unreachable!("determinants already checked"),
    }
}

fn first_bad_det(vectors: &[LatticeVector], ok: impl Fn(i64) -> bool) -> Option<(usize, usize, i64)> {
    let d = vectors.len();
    (0..d).find_map(|i| {
        let j = (i + 1) % d;
        let det = det2(vectors[i], vectors[j]);
        (!ok(det)).then_some((i, j, det))
    })
}

/// Winding number of the closed path `v_0 -> v_1 -> ... -> v_0` about the origin,
/// counted exactly via signed crossings of the positive x-axis.
pub fn geometric_winding(vectors: &[LatticeVector]) -> Result<i64> {
    let d = vectors.len();
    if let Some((i, j, det)) = first_bad_det(vectors, |det| det > 0) {
        return Err(Error::NonPositiveDeterminant { i, j, det });
    }
    let mut w = 0;
    for i in 0..d {
        let (p, q) = (vectors[i], vectors[(i + 1) % d]);
        let cross = det2(p, q);
        if p.y <= 0 && q.y > 0 && cross > 0 {
            w += 1;
        } else if p.y > 0 && q.y <= 0 && cross < 0 {
            w -= 1;
        }
    }
    Ok(w)
}

fn word_of(vectors: &[LatticeVector]) -> FanWord {
    let d = vectors.len();
    FanWord((0..d).map(|i| det2(vectors[i], vectors[(i + 2) % d])).collect())
}

/// Vectors produced from a word and a seed, together with the closure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFan {
    pub vectors: Vec<LatticeVector>,
    pub closes: bool,
}

pub fn word_to_fan(w: &FanWord, v0: LatticeVector, v1: LatticeVector) -> Result<WordFan> {
    let det = det2(v0, v1);
    if det != 1 {
        return Err(Error::BadSeed(det));
    }
    let d = w.len();
    let mut vs = vec![v0, v1];
    for i in 0..d {
        let next = -vs[i] + vs[i + 1].scale(w.0[i]);
        vs.push(next);
    }
    let closes = d >= 1 && vs[d] == v0 && vs[d + 1] == v1;
    vs.truncate(d);
    Ok(WordFan { vectors: vs, closes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum ToricMove {
    Chop { index: usize },
    Unchop { index: usize },
}

/// A valid toric fan. Serialized as `{"vectors": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ToricFan {
    vectors: Vec<LatticeVector>,
}

#[derive(Deserialize)]
struct RawToricFan {
    vectors: Vec<LatticeVector>,
}

impl<'de> Deserialize<'de> for ToricFan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawToricFan::deserialize(d)?;
        ToricFan::new(raw.vectors).map_err(serde::de::Error::custom)
    }
}

impl ToricFan {
    pub fn new(vectors: Vec<LatticeVector>) -> Result<Self> {
        let report = validate_toric(&vectors);
        match report.failure {
            None => Ok(Self { vectors }),
            Some(f) => Err(Error::InvalidToricFan(f.to_string())),
        }
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn word(&self) -> FanWord {
        fan_to_word(self)
    }

    pub fn apply_matrix(&self, m: &UniModMatrix) -> ToricFan {
        ToricFan { vectors: self.vectors.iter().map(|&v| m.apply(v)).collect() }
    }

    pub fn rotated(&self, r: usize) -> ToricFan {
        let d = self.len();
        ToricFan { vectors: (0..d).map(|k| self.vectors[(k + r) % d]).collect() }
    }

    /// Equal up to SL2(Z) and cyclic relabeling; decided on words.
    pub fn sl2_equivalent(&self, other: &ToricFan) -> bool {
        self.len() == other.len() && self.word().canonical_rotation() == other.word().canonical_rotation()
    }
}

pub fn fan_to_word(f: &ToricFan) -> FanWord {
    word_of(&f.vectors)
}

pub fn corner_chop(f: &ToricFan, i: usize) -> Result<ToricFan> {
    let d = f.len();
    if i >= d {
        return Err(Error::IndexOutOfRange { index: i, len: d });
    }
    let mut vectors = f.vectors.clone();
    vectors.insert(i + 1, f.vectors[i] + f.vectors[(i + 1) % d]);
    Ok(ToricFan { vectors })
}

pub fn reverse_corner_chop(f: &ToricFan, i: usize) -> Result<ToricFan> {
    let d = f.len();
    if i >= d {
        return Err(Error::IndexOutOfRange { index: i, len: d });
    }
    if !is_sum_of_neighbors(&f.vectors, i) {
        return Err(Error::InvalidToricFan(format!("v{i} is not the sum of its neighbours")));
    }
    if d <= 3 {
        return Err(Error::InvalidToricFan("cannot remove a vector from a 3-vector fan".into()));
    }
    let mut vectors = f.vectors.clone();
    vectors.remove(i);
    Ok(ToricFan { vectors })
}

pub(crate) fn is_sum_of_neighbors(vs: &[LatticeVector], i: usize) -> bool {
    let d = vs.len();
    vs[i] == vs[(i + d - 1) % d] + vs[(i + 1) % d]
}

/// Smallest index `i` with `v_i = v_{i-1} + v_{i+1}`.
pub fn find_reducible(f: &ToricFan) -> Option<usize> {
    (0..f.len()).find(|&i| is_sum_of_neighbors(&f.vectors, i))
}

pub fn classify_minimal(f: &ToricFan) -> Option<MinimalModel> {
    let w = f.word();
    match f.len() {
        3 => Some(MinimalModel::Triangle),
        4 => (0..4).find_map(|r| {
            let a = w.rotated(r).0;
            (a[0] == 0 && a[2] == 0 && a[1] == -a[3]).then(|| MinimalModel::hirzebruch(a[1]))
        }),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub model: MinimalModel,
    /// Reverse chops applied to the input, in order.
    pub trace: Vec<ToricMove>,
    pub reduced: ToricFan,
    /// Left neighbour of each removed vector, used to rebuild the input.
    #[serde(skip)]
    left_neighbors: Vec<LatticeVector>,
}

impl Reduction {
    /// Chops that rebuild the input from `reduced`. The result is the input
    /// up to a cyclic relabeling, since a chop never inserts at index 0.
    pub fn forward_trace(&self) -> Vec<ToricMove> {
        let mut cur = self.reduced.clone();
        let mut out = Vec::with_capacity(self.trace.len());
        for left in self.left_neighbors.iter().rev() {
            let at = cur
                .vectors
                .iter()
                .position(|v| v == left)
                .expect("left neighbour survives later reductions");
            out.push(ToricMove::Chop { index: at });
            cur = corner_chop(&cur, at).expect("index in range");
        }
        out
    }
}

pub fn fulton_reduce(f: &ToricFan) -> Result<Reduction> {
    let mut cur = f.clone();
    let mut trace = Vec::new();
    let mut left_neighbors = Vec::new();
    loop {
        if cur.len() <= 4 {
            if let Some(model) = classify_minimal(&cur) {
                return Ok(Reduction { model, trace, reduced: cur, left_neighbors });
            }
        }
        let Some(i) = find_reducible(&cur) else {
            return Err(Error::InvalidToricFan(format!(
                "no reducible vector in fan with word {}",
                cur.word()
            )));
        };
        let before = cur.len();
        left_neighbors.push(cur.vectors[(i + before - 1) % before]);
        cur = reverse_corner_chop(&cur, i)?;
        assert!(cur.len() < before, "reduction must shrink the fan");
        trace.push(ToricMove::Unchop { index: i });
    }
}

/// Applies toric moves in order, validating each intermediate fan.
pub fn replay_toric(f: &ToricFan, trace: &[ToricMove]) -> Result<ToricFan> {
    let mut cur = f.clone();
    for (step, mv) in trace.iter().enumerate() {
        let next = match *mv {
            ToricMove::Chop { index } => corner_chop(&cur, index),
            ToricMove::Unchop { index } => reverse_corner_chop(&cur, index),
        };
        cur = next.map_err(|e| Error::MoveNotApplicable {
            step,
            mv: format!("{mv:?}"),
            reason: e.to_string(),
        })?;
        ToricFan::new(cur.vectors.clone())?;
    }
    Ok(cur)
}
