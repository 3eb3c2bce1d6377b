//! Lattice vectors, SL2(Z), words in S and T, and the lifted group G.
//!
//! Elements of G are stored as `(matrix, weight)` pairs, which makes equality
//! a componentwise comparison.

mod lattice;
mod matrix;
mod projective;
mod word;

pub use lattice::{det2, LatticeVector};
pub use matrix::UniModMatrix;
pub use projective::{psl2_act, ProjectivePoint};
pub use word::{
    lift_word, sl2_decompose, sl2_weight_mod12, winding_number, word_weight, Gen, GenPower,
    GeneratorWord, LiftedElement,
};

use crate::error::{Error, Result};

/// For `S T^{a_0} ... S T^{a_{d-1}} = +-I`, returns two cyclically nonadjacent
/// indices `i < j` with `a_i, a_j` in `{-1, 0, 1}`; for `d = 3` returns `(0, 1)`.
///
/// `None` means no such pair was found (or `d < 3`), which contradicts the
/// existence lemma and therefore flags a bad input.
pub fn psltz_witness(a: &[i64]) -> Result<Option<(usize, usize)>> {
    if !GeneratorWord::from_fan_word(a).evaluate().is_plus_minus_identity() {
        return Err(Error::NotPlusMinusIdentity);
    }
    let d = a.len();
    if d < 3 {
        return Ok(None);
    }
    if d == 3 {
        return Ok(Some((0, 1)));
    }
    let small = |k: usize| (-1..=1).contains(&a[k]);
    for i in 0..d {
        for j in (i + 2)..d {
            if (i, j) != (0, d - 1) && small(i) && small(j) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_examples() {
        assert_eq!(psltz_witness(&[1, 1, 1]).unwrap(), Some((0, 1)));
        assert_eq!(psltz_witness(&[0, 5, 0, -5]).unwrap(), Some((0, 2)));
        assert_eq!(psltz_witness(&[-1, -1, -2, -1, -1, 0]).unwrap(), Some((0, 3)));
        assert!(psltz_witness(&[1, 2, 3]).is_err());
    }

    /// Independent scan over all pairs for small words projecting to +-I.
    #[test]
    fn witness_exists_for_small_words() {
        for d in 4..=6usize {
            let n = 5i64.pow(d as u32);
            for code in 0..n {
                let a: Vec<i64> = (0..d).map(|k| (code / 5i64.pow(k as u32)) % 5 - 2).collect();
                if !GeneratorWord::from_fan_word(&a).evaluate().is_plus_minus_identity() {
                    continue;
                }
                let (i, j) = psltz_witness(&a).unwrap().expect("lemma guarantees a witness");
                assert!(i + 1 < j && !(i == 0 && j == d - 1));
                assert!(a[i].abs() <= 1 && a[j].abs() <= 1);
            }
        }
    }
}
