use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::UniModMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gen {
    S,
    T,
}

impl Gen {
    /// Image under the weight homomorphism: w(S) = 3, w(T) = -1.
    pub fn weight(self) -> i64 {
        match self {
            Gen::S => 3,
            Gen::T => -1,
        }
    }

    fn matrix_pow(self, k: i64) -> UniModMatrix {
        match self {
            Gen::S => UniModMatrix::s_pow(k),
            Gen::T => UniModMatrix::t_pow(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenPower {
    pub gen: Gen,
    pub pow: i64,
}

/// A word in the free group on S and T. Adjacent powers of the same
/// generator are merged and zero powers dropped, so the stored letters
/// alternate between S and T.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<GenPower>", into = "Vec<GenPower>")]
pub struct GeneratorWord {
    letters: Vec<GenPower>,
}

impl GeneratorWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_powers<I: IntoIterator<Item = GenPower>>(powers: I) -> Self {
        let mut w = Self::default();
        for p in powers {
            w.push(p.gen, p.pow);
        }
        w
    }

    pub fn s(pow: i64) -> Self {
        Self::from_powers([GenPower { gen: Gen::S, pow }])
    }

    pub fn t(pow: i64) -> Self {
        Self::from_powers([GenPower { gen: Gen::T, pow }])
    }

    /// The word `S T^{a_0} S T^{a_1} ... S T^{a_{d-1}}` attached to a fan word.
    pub fn from_fan_word(a: &[i64]) -> Self {
        let mut w = Self::default();
        for &ai in a {
            w.push(Gen::S, 1);
            w.push(Gen::T, ai);
        }
        w
    }

    pub fn push(&mut self, gen: Gen, pow: i64) {
        if pow == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == gen {
                last.pow += pow;
                if last.pow == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(GenPower { gen, pow });
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for p in &other.letters {
            w.push(p.gen, p.pow);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        Self::from_powers(self.letters.iter().rev().map(|p| GenPower { gen: p.gen, pow: -p.pow }))
    }

    pub fn letters(&self) -> &[GenPower] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Image of the word in SL2(Z).
    pub fn evaluate(&self) -> UniModMatrix {
        self.letters
            .iter()
            .fold(UniModMatrix::IDENTITY, |m, p| m.mul(&p.gen.matrix_pow(p.pow)))
    }
}

impl From<Vec<GenPower>> for GeneratorWord {
    fn from(v: Vec<GenPower>) -> Self {
        Self::from_powers(v)
    }
}

impl From<GeneratorWord> for Vec<GenPower> {
    fn from(w: GeneratorWord) -> Self {
        w.letters
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for p in &self.letters {
            let g = match p.gen {
                Gen::S => "S",
                Gen::T => "T",
            };
            if p.pow == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{}", p.pow)?;
            }
        }
        Ok(())
    }
}

/// `3 * (sum of S exponents) - (sum of T exponents)`.
pub fn word_weight(word: &GeneratorWord) -> i64 {
    word.letters.iter().map(|p| p.gen.weight() * p.pow).sum()
}

/// An element of G, represented as a pair in SL2(Z) x Z whose components agree mod 12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftedElement {
    pub matrix: UniModMatrix,
    pub weight: i64,
}

impl LiftedElement {
    pub fn new(matrix: UniModMatrix, weight: i64) -> Result<Self> {
        let expected = sl2_weight_mod12(&matrix);
        if (weight - expected).rem_euclid(12) != 0 {
            return Err(Error::WeightMismatch { weight, expected });
        }
        Ok(Self { matrix, weight })
    }

    pub fn identity() -> Self {
        Self { matrix: UniModMatrix::IDENTITY, weight: 0 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { matrix: self.matrix.mul(&o.matrix), weight: self.weight + o.weight }
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.inverse(), weight: -self.weight }
    }
}

pub fn lift_word(word: &GeneratorWord) -> LiftedElement {
    LiftedElement { matrix: word.evaluate(), weight: word_weight(word) }
}

/// Decomposes `m` into S and T powers by Euclidean elimination on the first column.
///
/// Left-multiplying by `T^{-q}` and `S` reduces `(a, c)` to `(+-1, 0)`; what is left is
/// `+-T^b`, and the recorded operations are inverted to spell out `m`.
pub fn sl2_decompose(m: &UniModMatrix) -> GeneratorWord {
    let (mut a, mut b, mut c, mut d) = m.entries();
    // prefix collects the inverses of the applied operations, in order.
    let mut prefix = GeneratorWord::identity();
    while c != 0 {
        let q = a.div_euclid(c);
        a -= q * c;
        b -= q * d;
        prefix.push(Gen::T, q);
        // S * [[a, b], [c, d]] = [[-c, -d], [a, b]]
        let (na, nb, nc, nd) = (-c, -d, a, b);
        a = na;
        b = nb;
        c = nc;
        d = nd;
        prefix.push(Gen::S, -1);
    }
    if a == -1 {
        b = -b;
        prefix.push(Gen::S, 2);
    }
    prefix.push(Gen::T, b);
    prefix
}

/// `w_{SL2}(m) mod 12`, via any decomposition.
pub fn sl2_weight_mod12(m: &UniModMatrix) -> i64 {
    word_weight(&sl2_decompose(m)).rem_euclid(12)
}

/// Winding number `weight / 12` of an element of the kernel of the projection.
pub fn winding_number(g: &LiftedElement) -> Result<i64> {
    if !g.matrix.is_identity() {
        return Err(Error::NotInKernel(format!("matrix {} is not the identity", g.matrix)));
    }
    if g.weight % 12 != 0 {
        return Err(Error::NotInKernel(format!("weight {} not divisible by 12", g.weight)));
    }
    Ok(g.weight / 12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s() -> GeneratorWord {
        GeneratorWord::s(1)
    }
    fn t(k: i64) -> GeneratorWord {
        GeneratorWord::t(k)
    }

    const FIG2: [i64; 6] = [-1, -1, -2, -1, -1, 0];

    #[test]
    fn canonical_storage_merges() {
        let w = GeneratorWord::from_powers([
            GenPower { gen: Gen::S, pow: 1 },
            GenPower { gen: Gen::S, pow: 2 },
            GenPower { gen: Gen::T, pow: 0 },
            GenPower { gen: Gen::T, pow: 4 },
            GenPower { gen: Gen::T, pow: -4 },
            GenPower { gen: Gen::S, pow: 1 },
        ]);
        assert_eq!(w, GeneratorWord::s(4));
    }

    #[test]
    fn weights() {
        assert_eq!(word_weight(&GeneratorWord::s(4)), 12);
        assert_eq!(word_weight(&GeneratorWord::from_fan_word(&[-1, -1, -1])), 12);
        assert_eq!(word_weight(&GeneratorWord::from_fan_word(&FIG2)), 24);
    }

    #[test]
    fn defining_relation() {
        let sts = s().concat(&t(1)).concat(&s());
        let tst = t(-1).concat(&s()).concat(&t(-1));
        assert_eq!(lift_word(&sts), lift_word(&tst));
    }

    #[test]
    fn s4_and_s8() {
        let l4 = lift_word(&GeneratorWord::s(4));
        assert_eq!(l4, LiftedElement { matrix: UniModMatrix::IDENTITY, weight: 12 });
        let l8 = lift_word(&GeneratorWord::s(8));
        assert_eq!(l8, LiftedElement { matrix: UniModMatrix::IDENTITY, weight: 24 });
        assert_eq!(winding_number(&l4).unwrap(), 1);
        assert_eq!(winding_number(&l8).unwrap(), 2);
    }

    #[test]
    fn fig2_winding() {
        let l = lift_word(&GeneratorWord::from_fan_word(&FIG2));
        assert!(l.matrix.is_identity());
        assert_eq!(winding_number(&l).unwrap(), 2);
    }

    #[test]
    fn winding_rejects_non_kernel() {
        assert!(winding_number(&lift_word(&t(1))).is_err());
        assert!(winding_number(&lift_word(&GeneratorWord::s(2))).is_err());
    }

    #[test]
    fn decompose_examples() {
        assert!(sl2_decompose(&UniModMatrix::IDENTITY).is_empty());
        assert_eq!(sl2_decompose(&UniModMatrix::t_pow(5)), t(5));
    }

    #[test]
    fn lifted_element_validates_weight() {
        assert!(LiftedElement::new(UniModMatrix::IDENTITY, 24).is_ok());
        assert!(LiftedElement::new(UniModMatrix::IDENTITY, 5).is_err());
        assert!(LiftedElement::new(UniModMatrix::S, 3).is_ok());
        assert!(LiftedElement::new(UniModMatrix::S, 15).is_ok());
        assert!(LiftedElement::new(UniModMatrix::S, 4).is_err());
    }

    #[test]
    fn json_shape() {
        let w = s().concat(&t(-2));
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(js, r#"[{"gen":"S","pow":1},{"gen":"T","pow":-2}]"#);
        let back: GeneratorWord = serde_json::from_str(&js).unwrap();
        assert_eq!(back, w);
    }

    fn arb_letters() -> impl Strategy<Value = Vec<(bool, i64)>> {
        prop::collection::vec((any::<bool>(), -4i64..=4), 0..12)
    }

    fn to_word(v: &[(bool, i64)]) -> GeneratorWord {
        GeneratorWord::from_powers(
            v.iter().map(|&(is_s, pow)| GenPower { gen: if is_s { Gen::S } else { Gen::T }, pow }),
        )
    }

    proptest! {
        #[test]
        fn weight_is_homomorphism(u in arb_letters(), v in arb_letters()) {
            let (u, v) = (to_word(&u), to_word(&v));
            prop_assert_eq!(word_weight(&u.concat(&v)), word_weight(&u) + word_weight(&v));
        }

        #[test]
        fn relation_rewrite_preserves_lift(u in arb_letters(), v in arb_letters(), forward in any::<bool>()) {
            let (u, v) = (to_word(&u), to_word(&v));
            let sts = s().concat(&t(1)).concat(&s());
            let tst = t(-1).concat(&s()).concat(&t(-1));
            let (from, to) = if forward { (sts, tst) } else { (tst, sts) };
            let lhs = u.concat(&from).concat(&v);
            let rhs = u.concat(&to).concat(&v);
            prop_assert_eq!(lift_word(&lhs), lift_word(&rhs));
        }

        #[test]
        fn decompose_reproduces_matrix(letters in arb_letters()) {
            let w = to_word(&letters);
            let m = w.evaluate();
            let dec = sl2_decompose(&m);
            prop_assert_eq!(lift_word(&dec).matrix, m);
            // two decompositions of the same matrix agree in weight mod 12
            prop_assert_eq!((word_weight(&dec) - word_weight(&w)).rem_euclid(12), 0);
        }
    }
}
