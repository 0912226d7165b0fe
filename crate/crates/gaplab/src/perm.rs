//! Permutations of {1, ..., n} with O(1) forward and inverse application.
//!
//! All public interfaces speak 1-based vertex labels; storage is 0-based.
//! The one-line notation ("word") of a permutation is the vector
//! (pi(1), pi(2), ..., pi(n)).

use crate::error::{Error, Result};
use crate::rng::Seed;
use rand::Rng;

/// A bijection on {1, ..., n}, stored together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    fwd: Vec<u32>, // fwd[i0] = pi(i0+1) - 1
    inv: Vec<u32>, // inv[j0] = pi^{-1}(j0+1) - 1
}

impl Permutation {
    /// The identity on {1, ..., n}.
    pub fn identity(n: usize) -> Self {
        let fwd: Vec<u32> = (0..n as u32).collect();
        Permutation {
            inv: fwd.clone(),
            fwd,
        }
    }

    /// Builds a permutation from its 1-based word (pi(1), ..., pi(n)),
    /// validating that it is a bijection on {1, ..., n}.
    pub fn from_word(word: &[u32]) -> Result<Self> {
        let n = word.len();
        if n > u32::MAX as usize {
            return Err(Error::invalid_input("permutation too large"));
        }
        let mut fwd = Vec::with_capacity(n);
        let mut inv = vec![u32::MAX; n];
        for (i0, &img) in word.iter().enumerate() {
            if img < 1 || img as usize > n {
                return Err(Error::invalid_input(format!(
                    "word entry {} out of range 1..={}",
                    img, n
                )));
            }
            let j0 = img - 1;
            if inv[j0 as usize] != u32::MAX {
                return Err(Error::invalid_input(format!("word repeats image {}", img)));
            }
            inv[j0 as usize] = i0 as u32;
            fwd.push(j0);
        }
        Ok(Permutation { fwd, inv })
    }

    /// Builds from an internal 0-based image vector without re-validation.
    /// Debug builds still assert bijectivity.
    pub(crate) fn from_images_unchecked(fwd: Vec<u32>) -> Self {
        let n = fwd.len();
        let mut inv = vec![u32::MAX; n];
        for (i0, &j0) in fwd.iter().enumerate() {
            debug_assert!((j0 as usize) < n);
            debug_assert!(inv[j0 as usize] == u32::MAX, "image repeated");
            inv[j0 as usize] = i0 as u32;
        }
        debug_assert!(inv.iter().all(|&x| x != u32::MAX));
        Permutation { fwd, inv }
    }

    /// A uniformly random permutation (Fisher-Yates) from the given stream.
    pub fn random(n: usize, seed: &Seed) -> Self {
        let mut rng = seed.rng();
        let mut fwd: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            fwd.swap(i, j);
        }
        Permutation::from_images_unchecked(fwd)
    }

    /// Number of elements.
    pub fn n(&self) -> usize {
        self.fwd.len()
    }

    /// pi(i) for a 1-based i.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.fwd[i - 1] as usize + 1
    }

    /// pi^{-1}(j) for a 1-based j.
    #[inline]
    pub fn apply_inv(&self, j: usize) -> usize {
        self.inv[j - 1] as usize + 1
    }

    /// 0-based image, for internal hot loops.
    #[inline]
    pub(crate) fn img0(&self, i0: usize) -> usize {
        self.fwd[i0] as usize
    }

    /// Internal 0-based image slice.
    #[inline]
    pub(crate) fn images0(&self) -> &[u32] {
        &self.fwd
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        Permutation {
            fwd: self.inv.clone(),
            inv: self.fwd.clone(),
        }
    }

    /// Composition `self ∘ inner`: i -> self(inner(i)).
    pub fn compose(&self, inner: &Permutation) -> Result<Permutation> {
        if self.n() != inner.n() {
            return Err(Error::size_mismatch(format!(
                "compose: {} vs {}",
                self.n(),
                inner.n()
            )));
        }
        let fwd: Vec<u32> = inner.fwd.iter().map(|&j0| self.fwd[j0 as usize]).collect();
        Ok(Permutation::from_images_unchecked(fwd))
    }

    /// The 1-based word (pi(1), ..., pi(n)).
    pub fn word(&self) -> Vec<u32> {
        self.fwd.iter().map(|&j0| j0 + 1).collect()
    }

    /// F(pi): the number of fixed points.
    pub fn fixed_points(&self) -> usize {
        self.fwd
            .iter()
            .enumerate()
            .filter(|&(i0, &j0)| i0 == j0 as usize)
            .count()
    }

    /// T(pi): the number of 2-cycles (transpositions) in the cycle
    /// decomposition, i.e. pairs i < j with pi(i) = j and pi(j) = i.
    pub fn transposition_pairs(&self) -> usize {
        let mut count = 0usize;
        for (i0, &j0) in self.fwd.iter().enumerate() {
            let j0 = j0 as usize;
            if j0 > i0 && self.fwd[j0] as usize == i0 {
                count += 1;
            }
        }
        count
    }
}

/// overlap(pi1, pi2) = #{i : pi1(i) = pi2(i)}, the number of common images.
pub fn permutation_overlap(pi1: &Permutation, pi2: &Permutation) -> Result<usize> {
    if pi1.n() != pi2.n() {
        return Err(Error::size_mismatch(format!(
            "overlap: {} vs {}",
            pi1.n(),
            pi2.n()
        )));
    }
    Ok(pi1
        .fwd
        .iter()
        .zip(pi2.fwd.iter())
        .filter(|(a, b)| a == b)
        .count())
}

/// Hamming distance d(pi1, pi2) = n - overlap(pi1, pi2).
pub fn permutation_distance(pi1: &Permutation, pi2: &Permutation) -> Result<usize> {
    Ok(pi1.n() - permutation_overlap(pi1, pi2)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_round_trip_and_inverse() {
        let p = Permutation::from_word(&[3, 1, 4, 2]).unwrap();
        assert_eq!(p.word(), vec![3, 1, 4, 2]);
        assert_eq!(p.apply(1), 3);
        assert_eq!(p.apply_inv(3), 1);
        let inv = p.inverse();
        assert_eq!(inv.word(), vec![2, 4, 1, 3]);
        let id = p.compose(&inv).unwrap();
        assert_eq!(id, Permutation::identity(4));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_word(&[1, 1, 3]).is_err());
        assert!(Permutation::from_word(&[0, 1]).is_err());
        assert!(Permutation::from_word(&[1, 4, 2]).is_err());
    }

    #[test]
    fn fixed_points_and_transpositions() {
        // (1)(2 3)(4 5 6) in cycle notation.
        let p = Permutation::from_word(&[1, 3, 2, 5, 6, 4]).unwrap();
        assert_eq!(p.fixed_points(), 1);
        assert_eq!(p.transposition_pairs(), 1);
        let id = Permutation::identity(5);
        assert_eq!(id.fixed_points(), 5);
        assert_eq!(id.transposition_pairs(), 0);
    }

    #[test]
    fn overlap_and_distance() {
        let p = Permutation::from_word(&[1, 2, 4, 3]).unwrap();
        let q = Permutation::identity(4);
        assert_eq!(permutation_overlap(&p, &q).unwrap(), 2);
        assert_eq!(permutation_distance(&p, &q).unwrap(), 2);
        // overlap(p, q) equals F(p^{-1} ∘ q).
        let comp = p.inverse().compose(&q).unwrap();
        assert_eq!(comp.fixed_points(), 2);
    }

    #[test]
    fn compose_order_convention() {
        // self ∘ inner applies inner first.
        let a = Permutation::from_word(&[2, 3, 1]).unwrap();
        let b = Permutation::from_word(&[1, 3, 2]).unwrap();
        let ab = a.compose(&b).unwrap(); // i -> a(b(i))
        assert_eq!(ab.apply(2), a.apply(b.apply(2)));
        assert_eq!(ab.word(), vec![2, 1, 3]);
    }

    #[test]
    fn random_is_reproducible() {
        let s = crate::rng::Seed::new(5).child_tag("perm");
        let p = Permutation::random(50, &s);
        let q = Permutation::random(50, &s);
        assert_eq!(p, q);
        let r = Permutation::random(50, &s.child(1));
        assert_ne!(p, r);
    }
}
