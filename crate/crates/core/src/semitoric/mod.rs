//! Labeled semitoric fans, the fan transformations, and normalization to the
//! standard fan of a given complexity.

mod normalize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupcore::{det2, LatticeVector, UniModMatrix};
use crate::toricfan::{geometric_winding, is_sum_of_neighbors};

pub use normalize::{ensure_right_angle, normalize, normalize_by_refinement, shift_loop, Normalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerLabel {
    Delzant,
    Fake,
    Hidden,
}

impl CornerLabel {
    pub fn is_delzant(self) -> bool {
        self == CornerLabel::Delzant
    }
}

/// `T w`.
pub fn t_apply(w: LatticeVector) -> LatticeVector {
    LatticeVector::new(w.x + w.y, w.y)
}

fn on_top(v: LatticeVector, w: LatticeVector) -> bool {
    v.in_lower_half() && w.in_lower_half()
}

pub fn is_delzant_pair(v: LatticeVector, w: LatticeVector) -> bool {
    det2(v, w) == 1
}

pub fn is_hidden_pair(v: LatticeVector, w: LatticeVector) -> bool {
    on_top(v, w) && det2(v, t_apply(w)) == 1
}

pub fn is_fake_pair(v: LatticeVector, w: LatticeVector) -> bool {
    on_top(v, w) && det2(v, t_apply(w)) == 0
}

/// Label of a corner on a marker line: hidden, fake, or `None` if neither holds.
pub fn marked_corner_label(v: LatticeVector, w: LatticeVector) -> Option<CornerLabel> {
    if is_hidden_pair(v, w) {
        Some(CornerLabel::Hidden)
    } else if is_fake_pair(v, w) {
        Some(CornerLabel::Fake)
    } else {
        None
    }
}

fn label_holds(label: CornerLabel, v: LatticeVector, w: LatticeVector) -> bool {
    match label {
        CornerLabel::Delzant => is_delzant_pair(v, w),
        CornerLabel::Hidden => is_hidden_pair(v, w),
        CornerLabel::Fake => is_fake_pair(v, w),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SemitoricFailure {
    TooShort { d: usize },
    LabelCount { vectors: usize, labels: usize },
    NotPrimitive { index: usize },
    Determinant { i: usize, j: usize, det: i64 },
    Label { index: usize, label: CornerLabel },
    Winding { winding: i64 },
}

impl fmt::Display for SemitoricFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooShort { d } => write!(f, "d={d} < 3"),
            Self::LabelCount { vectors, labels } => write!(f, "{vectors} vectors but {labels} labels"),
            Self::NotPrimitive { index } => write!(f, "v{index} is not primitive"),
            Self::Determinant { i, j, det } => write!(f, "det(v{i},v{j})={det}"),
            Self::Label { index, label } => {
                write!(f, "corner {index} does not satisfy the {label:?} condition")
            }
            Self::Winding { winding } => write!(f, "winding={winding}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemitoricReport {
    pub valid: bool,
    pub complexity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<SemitoricFailure>,
}

pub fn validate_semitoric(vectors: &[LatticeVector], labels: &[CornerLabel]) -> SemitoricReport {
    let d = vectors.len();
    let complexity = labels.iter().filter(|l| !l.is_delzant()).count();
    let fail = |failure| SemitoricReport { valid: false, complexity, failure: Some(failure) };
    if d < 3 {
        return fail(SemitoricFailure::TooShort { d });
    }
    if labels.len() != d {
        return fail(SemitoricFailure::LabelCount { vectors: d, labels: labels.len() });
    }
    if let Some(index) = vectors.iter().position(|v| !v.is_primitive()) {
        return fail(SemitoricFailure::NotPrimitive { index });
    }
    for i in 0..d {
        let j = (i + 1) % d;
        let det = det2(vectors[i], vectors[j]);
        if det <= 0 {
            return fail(SemitoricFailure::Determinant { i, j, det });
        }
        if !label_holds(labels[i], vectors[i], vectors[j]) {
            return fail(SemitoricFailure::Label { index: i, label: labels[i] });
        }
    }
    match geometric_winding(vectors) {
        Ok(1) => SemitoricReport { valid: true, complexity, failure: None },
        Ok(w) => fail(SemitoricFailure::Winding { winding: w }),
        Err(_) => unreachable!("determinants checked above"),
    }
}

/// A valid semitoric fan; `labels[i]` describes the corner `(v_i, v_{i+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SemitoricFan {
    vectors: Vec<LatticeVector>,
    labels: Vec<CornerLabel>,
}

#[derive(Deserialize)]
struct RawSemitoricFan {
    vectors: Vec<LatticeVector>,
    labels: Vec<CornerLabel>,
}

impl<'de> Deserialize<'de> for SemitoricFan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSemitoricFan::deserialize(d)?;
        SemitoricFan::new(raw.vectors, raw.labels).map_err(serde::de::Error::custom)
    }
}

impl SemitoricFan {
    pub fn new(vectors: Vec<LatticeVector>, labels: Vec<CornerLabel>) -> Result<Self> {
        match validate_semitoric(&vectors, &labels).failure {
            None => Ok(Self { vectors, labels }),
            Some(f) => Err(Error::InvalidSemitoricFan(f.to_string())),
        }
    }

    /// All corners labeled Delzant.
    pub fn toric(vectors: Vec<LatticeVector>) -> Result<Self> {
        let labels = vec![CornerLabel::Delzant; vectors.len()];
        Self::new(vectors, labels)
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[CornerLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Number of fake and hidden corners.
    pub fn complexity(&self) -> usize {
        self.labels.iter().filter(|l| !l.is_delzant()).count()
    }

    pub fn rotated(&self, r: usize) -> SemitoricFan {
        let d = self.len();
        SemitoricFan {
            vectors: (0..d).map(|k| self.vectors[(k + r) % d]).collect(),
            labels: (0..d).map(|k| self.labels[(k + r) % d]).collect(),
        }
    }

    /// Some `r` with `self.rotated(r) == *other`.
    pub fn rotation_to(&self, other: &SemitoricFan) -> Option<usize> {
        if self.len() != other.len() {
            return None;
        }
        (0..self.len()).find(|&r| self.rotated(r) == *other)
    }

    pub fn same_up_to_rotation(&self, other: &SemitoricFan) -> bool {
        self.rotation_to(other).is_some()
    }

    fn act_t(&self, k: i64) -> SemitoricFan {
        let m = UniModMatrix::t_pow(k);
        SemitoricFan {
            vectors: self.vectors.iter().map(|&v| m.apply(v)).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// `(0,-1), (1,0), (c,1), (-1,0), (-c,-1), (-c+1,-1), ..., (-1,-1)`: four Delzant
/// corners followed by `c` fake ones.
pub fn standard_fan(c: usize) -> SemitoricFan {
    let c = c as i64;
    let v = LatticeVector::new;
    let mut vectors = vec![v(0, -1), v(1, 0), v(c, 1), v(-1, 0)];
    vectors.extend((0..c).map(|n| v(-c + n, -1)));
    let mut labels = vec![CornerLabel::Delzant; 4];
    labels.extend(std::iter::repeat_n(CornerLabel::Fake, c as usize));
    SemitoricFan { vectors, labels }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum FanMove {
    Chop { index: usize },
    Unchop { index: usize },
    RemoveHidden { index: usize },
    CommuteFakeDelzant { index: usize },
    ActT { k: i64 },
}

impl FanMove {
    /// The same move for the fan `f.rotated(r)`, where `f` has `d` vectors.
    pub fn for_rotation(self, r: usize, d: usize) -> FanMove {
        let i = |index: usize| (index + d - r % d) % d;
        match self {
            FanMove::Chop { index } => FanMove::Chop { index: i(index) },
            FanMove::Unchop { index } => FanMove::Unchop { index: i(index) },
            FanMove::RemoveHidden { index } => FanMove::RemoveHidden { index: i(index) },
            FanMove::CommuteFakeDelzant { index } => FanMove::CommuteFakeDelzant { index: i(index) },
            FanMove::ActT { k } => FanMove::ActT { k },
        }
    }
}

impl fmt::Display for FanMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanMove::Chop { index } => write!(f, "chop({index})"),
            FanMove::Unchop { index } => write!(f, "unchop({index})"),
            FanMove::RemoveHidden { index } => write!(f, "remove_hidden({index})"),
            FanMove::CommuteFakeDelzant { index } => write!(f, "commute_fake_delzant({index})"),
            FanMove::ActT { k } => write!(f, "act_t({k})"),
        }
    }
}

fn try_apply(f: &SemitoricFan, m: FanMove) -> std::result::Result<SemitoricFan, String> {
    use CornerLabel::*;
    let d = f.len();
    let check_index = |i: usize| {
        if i < d {
            Ok(())
        } else {
            Err(format!("index {i} out of range for {d} vectors"))
        }
    };
    let vs = &f.vectors;
    let ls = &f.labels;
    let out = match m {
        FanMove::Chop { index: i } => {
            check_index(i)?;
            if ls[i] != Delzant {
                return Err(format!("corner {i} is {:?}, not Delzant", ls[i]));
            }
            let mut out = f.clone();
            out.vectors.insert(i + 1, vs[i] + vs[(i + 1) % d]);
            out.labels.insert(i + 1, Delzant);
            out
        }
        FanMove::Unchop { index: i } => {
            check_index(i)?;
            if !is_sum_of_neighbors(vs, i) {
                return Err(format!("v{i} is not the sum of its neighbours"));
            }
            let prev = (i + d - 1) % d;
            if ls[prev] != Delzant || ls[i] != Delzant {
                return Err(format!("corners around v{i} are not both Delzant"));
            }
            if d <= 3 {
                return Err("unchop would leave fewer than 3 vectors".into());
            }
            let mut out = f.clone();
            out.vectors.remove(i);
            out.labels.remove(i);
            // the merged corner (v_{i-1}, v_{i+1}) keeps the label slot of v_{i-1}
            out
        }
        FanMove::RemoveHidden { index: i } => {
            check_index(i)?;
            if ls[i] != Hidden {
                return Err(format!("corner {i} is {:?}, not Hidden", ls[i]));
            }
            let mut out = f.clone();
            out.vectors.insert(i + 1, t_apply(vs[(i + 1) % d]));
            out.labels[i] = Delzant;
            out.labels.insert(i + 1, Fake);
            out
        }
        FanMove::CommuteFakeDelzant { index: i } => {
            check_index(i)?;
            let (j, k) = ((i + 1) % d, (i + 2) % d);
            if ls[i] != Fake {
                return Err(format!("corner {i} is {:?}, not Fake", ls[i]));
            }
            if ls[j] != Delzant || !on_top(vs[j], vs[k]) {
                return Err(format!("corner {j} is not a Delzant corner on the top boundary"));
            }
            let mut out = f.clone();
            out.vectors[j] = t_apply(vs[k]);
            out.labels[i] = Delzant;
            out.labels[j] = Fake;
            out
        }
        FanMove::ActT { k } => f.act_t(k),
    };
    match validate_semitoric(&out.vectors, &out.labels).failure {
        None => Ok(out),
        Some(e) => Err(format!("result is not a semitoric fan: {e}")),
    }
}

pub fn apply_move(f: &SemitoricFan, m: FanMove) -> Result<SemitoricFan> {
    try_apply(f, m).map_err(|reason| Error::MoveNotApplicable { step: 0, mv: m.to_string(), reason })
}

/// Applies `trace` move by move; the error names the first failing step.
pub fn replay_trace(f: &SemitoricFan, trace: &[FanMove]) -> Result<SemitoricFan> {
    let mut cur = f.clone();
    for (step, &m) in trace.iter().enumerate() {
        cur = try_apply(&cur, m).map_err(|reason| Error::MoveNotApplicable {
            step,
            mv: m.to_string(),
            reason,
        })?;
    }
    Ok(cur)
}
