//! The intersection lattice: an abstract `H₂(M;ℤ)` with its integer pairing,
//! a distinguished canonical class, and the numerical invariants of a class.
//!
//! Whether a class is actually represented by a subvariety is an analytic
//! question that is not decidable at this level; every class handled here is
//! treated as effective by assumption. The graph-level theorems verified by
//! this crate only ever use the lattice data below.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{cadd, cmul, is_even, Coeff, OverflowError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix must be square: row {row} has length {len}, expected {rank}")]
    RaggedGram { row: usize, len: usize, rank: usize },
    #[error("gram matrix must be symmetric: entries ({i},{j}) and ({j},{i}) differ")]
    AsymmetricGram { i: usize, j: usize },
    #[error("lattice rank must be positive")]
    EmptyLattice,
    #[error("canonical class is not characteristic: K·b ≢ b·b (mod 2) for basis vector {index}")]
    NotCharacteristic { index: usize },
    #[error(transparent)]
    Overflow(#[from] OverflowError),
}

/// A homology class in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> HomologyClass<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        HomologyClass { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        HomologyClass {
            coeffs: vec![C::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, OverflowError> {
        debug_assert_eq!(self.rank(), other.rank());
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| cadd(a, b))
            .collect::<Result<_, _>>()?;
        Ok(HomologyClass { coeffs })
    }

    pub fn checked_scaled(&self, m: C) -> Result<Self, OverflowError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| cmul(a, m))
            .collect::<Result<_, _>>()?;
        Ok(HomologyClass { coeffs })
    }

    /// `self + m · other`, checked.
    pub fn checked_add_scaled(&self, m: C, other: &Self) -> Result<Self, OverflowError> {
        self.checked_add(&other.checked_scaled(m)?)
    }

    /// Zero-pads the coordinate vector up to `rank`; the embedding of an old
    /// class into a blown-up lattice.
    pub fn extended(&self, rank: usize) -> Self {
        debug_assert!(rank >= self.rank());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(rank, C::zero());
        HomologyClass { coeffs }
    }
}

impl<C: fmt::Display> fmt::Display for HomologyClass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The J-dimension `ι` of a class and its clamp `l = max(ι, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JDimension<C> {
    pub iota: C,
    pub l: C,
}

/// Inertia of the intersection form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
}

/// Rank, symmetric integer Gram matrix, and characteristic canonical class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionLattice<C> {
    rank: usize,
    gram: Vec<Vec<C>>,
    canonical: HomologyClass<C>,
}

impl<C: Coeff> IntersectionLattice<C> {
    /// Validates shape, symmetry and the characteristic property
    /// `K·b ≡ b·b (mod 2)` on every basis vector (which suffices by
    /// linearity over ℤ).
    pub fn new(gram: Vec<Vec<C>>, canonical: HomologyClass<C>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::EmptyLattice);
        }
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(LatticeError::RaggedGram {
                    row,
                    len: r.len(),
                    rank,
                });
            }
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::AsymmetricGram { i, j });
                }
            }
        }
        if canonical.rank() != rank {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                got: canonical.rank(),
            });
        }
        let lattice = IntersectionLattice {
            rank,
            gram,
            canonical,
        };
        for index in 0..rank {
            let mut k_dot_b = C::zero();
            for j in 0..rank {
                k_dot_b = cadd(k_dot_b, cmul(lattice.canonical.coeffs[j], lattice.gram[j][index])?)?;
            }
            if is_even(k_dot_b) != is_even(lattice.gram[index][index]) {
                return Err(LatticeError::NotCharacteristic { index });
            }
        }
        Ok(lattice)
    }

    /// `CP² # k·CP²‾`: basis `(H, E₁..E_k)`, Gram `diag(1, −1, …, −1)`,
    /// `K = −3H + ΣEᵢ`.
    pub fn cp2_blowup(k: usize) -> Self {
        let rank = k + 1;
        let mut gram = vec![vec![C::zero(); rank]; rank];
        gram[0][0] = C::one();
        for i in 1..rank {
            gram[i][i] = -C::one();
        }
        let mut canonical = vec![C::one(); rank];
        canonical[0] = -(C::one() + C::one() + C::one());
        IntersectionLattice::new(gram, HomologyClass::new(canonical))
            .expect("preset lattice is well formed")
    }

    /// Blow-up of a ruled surface: basis `(B, F, E₁..E_k)` with
    /// `B·B = F·F = 0`, `B·F = 1`, `Eᵢ·Eᵢ = −1`, and `K = −2B − 2F + ΣEᵢ`.
    pub fn ruled_blowup(k: usize) -> Self {
        let rank = k + 2;
        let mut gram = vec![vec![C::zero(); rank]; rank];
        gram[0][1] = C::one();
        gram[1][0] = C::one();
        for i in 2..rank {
            gram[i][i] = -C::one();
        }
        let minus_two = -(C::one() + C::one());
        let mut canonical = vec![C::one(); rank];
        canonical[0] = minus_two;
        canonical[1] = minus_two;
        IntersectionLattice::new(gram, HomologyClass::new(canonical))
            .expect("preset lattice is well formed")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<C>] {
        &self.gram
    }

    pub fn canonical(&self) -> &HomologyClass<C> {
        &self.canonical
    }

    fn check_rank(&self, e: &HomologyClass<C>) -> Result<(), LatticeError> {
        if e.rank() != self.rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank,
                got: e.rank(),
            });
        }
        Ok(())
    }

    /// The intersection pairing `a·b = aᵀ·Q·b`.
    pub fn pair(&self, a: &HomologyClass<C>, b: &HomologyClass<C>) -> Result<C, LatticeError> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut acc = C::zero();
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                let g = self.gram[i][j];
                if bj.is_zero() || g.is_zero() {
                    continue;
                }
                acc = cadd(acc, cmul(cmul(ai, g)?, bj)?)?;
            }
        }
        Ok(acc)
    }

    pub fn self_pairing(&self, e: &HomologyClass<C>) -> Result<C, LatticeError> {
        self.pair(e, e)
    }

    /// Adjunction number `adj(e) = e·e + K·e = 2g(e) − 2`.
    pub fn adjunction(&self, e: &HomologyClass<C>) -> Result<C, LatticeError> {
        let sq = self.pair(e, e)?;
        let ke = self.pair(&self.canonical, e)?;
        Ok(cadd(sq, ke)?)
    }

    /// J-genus `g(e) = (e·e + K·e)/2 + 1`. The sum is even because `K` is
    /// characteristic.
    pub fn genus(&self, e: &HomologyClass<C>) -> Result<C, LatticeError> {
        let adj = self.adjunction(e)?;
        debug_assert!(is_even(adj), "adjunction parity violated");
        let two = C::one() + C::one();
        Ok(cadd(adj / two, C::one())?)
    }

    /// J-dimension `ι = (e·e − K·e)/2` and its clamp `l = max(ι, 0)`.
    pub fn j_dimension(&self, e: &HomologyClass<C>) -> Result<JDimension<C>, LatticeError> {
        let sq = self.pair(e, e)?;
        let ke = self.pair(&self.canonical, e)?;
        let diff = cadd(sq, ke.checked_neg().ok_or(OverflowError)?)?;
        debug_assert!(is_even(diff), "J-dimension parity violated");
        let two = C::one() + C::one();
        let iota = diff / two;
        let l = if iota.is_negative() { C::zero() } else { iota };
        Ok(JDimension { iota, l })
    }

    /// Inertia `(b⁺, b⁻, b⁰)` of the Gram matrix, computed by exact rational
    /// symmetric elimination. Never floating point: `b⁺ = 1` is a hard
    /// hypothesis of the classification and must not depend on rounding.
    pub fn signature(&self) -> Signature {
        let n = self.rank;
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| BigRational::from(x.to_bigint()))
                    .collect()
            })
            .collect();
        let mut alive = vec![true; n];
        let mut b_plus = 0;
        let mut b_minus = 0;
        let mut b_zero = 0;
        loop {
            let live: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
            if live.is_empty() {
                break;
            }
            if let Some(&p) = live.iter().find(|&&i| !a[i][i].is_zero()) {
                if a[p][p].is_positive() {
                    b_plus += 1;
                } else {
                    b_minus += 1;
                }
                alive[p] = false;
                let pivot = a[p][p].clone();
                let prow: Vec<BigRational> = a[p].clone();
                for &i in &live {
                    if i == p {
                        continue;
                    }
                    let factor = &a[i][p] / &pivot;
                    for &j in &live {
                        if j == p {
                            continue;
                        }
                        let delta = &factor * &prow[j];
                        a[i][j] -= delta;
                    }
                }
            } else if let Some((i, j)) = first_nonzero_pair(&a, &live) {
                // All live diagonal entries vanish; the congruence
                // e_i ← e_i + e_j makes a[i][i] = 2·a[i][j] ≠ 0.
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += t;
                }
                for k in 0..n {
                    let t = a[k][j].clone();
                    a[k][i] += t;
                }
            } else {
                b_zero += live.len();
                break;
            }
        }
        Signature {
            b_plus,
            b_minus,
            b_zero,
        }
    }

    /// Extends the lattice by one exceptional class: square `−1`, orthogonal
    /// to the old basis, with `K` gaining `+Eₙ`. Returns the new lattice; the
    /// new basis index is `rank()` of the old one.
    pub fn blow_up(&self) -> Self {
        let rank = self.rank + 1;
        let mut gram = vec![vec![C::zero(); rank]; rank];
        for i in 0..self.rank {
            for j in 0..self.rank {
                gram[i][j] = self.gram[i][j];
            }
        }
        gram[rank - 1][rank - 1] = -C::one();
        let mut canonical = self.canonical.coeffs.clone();
        canonical.push(C::one());
        IntersectionLattice::new(gram, HomologyClass::new(canonical))
            .expect("blow-up of a valid lattice is valid")
    }
}

fn first_nonzero_pair(a: &[Vec<BigRational>], live: &[usize]) -> Option<(usize, usize)> {
    for (s, &i) in live.iter().enumerate() {
        for &j in &live[s + 1..] {
            if !a[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Parses a class like `3H - 2E2` over a `cp2_blowup` basis, or `B + 2F - E1`
/// over a `ruled_blowup` basis. Test and example helper.
pub fn class_from_coeffs<C: Coeff>(coeffs: &[i64]) -> HomologyClass<C> {
    HomologyClass::new(
        coeffs
            .iter()
            .map(|&c| C::from(c).expect("coefficient fits the scalar type"))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = IntersectionLattice<i64>;

    fn cls(coeffs: &[i64]) -> HomologyClass<i64> {
        class_from_coeffs(coeffs)
    }

    #[test]
    fn cp2_pairing_of_hyperplane() {
        let l = L::cp2_blowup(0);
        let h = cls(&[1]);
        assert_eq!(l.pair(&h, &h).unwrap(), 1);
    }

    #[test]
    fn cp2_two_blowup_pairing() {
        // 3H−2E₂ against E₁−E₂, by hand: 0 + 0 − 2 = −2.
        let l = L::cp2_blowup(2);
        let a = cls(&[3, 0, -2]);
        let b = cls(&[0, 1, -1]);
        assert_eq!(l.pair(&a, &b).unwrap(), -2);
        assert_eq!(l.pair(&b, &a).unwrap(), -2);
    }

    #[test]
    fn canonical_square_on_ten_blowups() {
        let l = L::cp2_blowup(10);
        let k = l.canonical().clone();
        assert_eq!(l.pair(&k, &k).unwrap(), -1);
    }

    #[test]
    fn genus_of_anticanonical_classes() {
        let l = L::cp2_blowup(10);
        let minus_k = cls(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]);
        let minus_2k = minus_k.checked_scaled(2).unwrap();
        assert_eq!(l.genus(&minus_k).unwrap(), 1);
        assert_eq!(l.genus(&minus_2k).unwrap(), 0);
    }

    #[test]
    fn genus_of_degree_five_class() {
        let l = L::cp2_blowup(3);
        assert_eq!(l.genus(&cls(&[5, -1, -2, -2])).unwrap(), 4);
    }

    #[test]
    fn adjunction_examples() {
        assert_eq!(
            L::cp2_blowup(1).adjunction(&cls(&[0, 1])).unwrap(),
            -2,
            "exceptional class"
        );
        let cp2 = L::cp2_blowup(0);
        assert_eq!(cp2.adjunction(&cls(&[1])).unwrap(), -2);
        assert_eq!(cp2.adjunction(&cls(&[2])).unwrap(), -2);
    }

    #[test]
    fn j_dimension_examples() {
        let cp2 = L::cp2_blowup(0);
        let d = cp2.j_dimension(&cls(&[2])).unwrap();
        assert_eq!((d.iota, d.l), (5, 5));

        let one = L::cp2_blowup(1);
        let d = one.j_dimension(&cls(&[0, 1])).unwrap();
        assert_eq!((d.iota, d.l), (0, 0));

        let two = L::cp2_blowup(2);
        let d = two.j_dimension(&cls(&[0, 1, -1])).unwrap();
        assert_eq!((d.iota, d.l), (-1, 0));
    }

    #[test]
    fn presets_are_well_formed() {
        let base = L::cp2_blowup(0);
        assert_eq!(base.rank(), 1);
        assert_eq!(base.gram(), &[vec![1]]);
        assert_eq!(base.canonical(), &cls(&[-3]));

        // Characteristic check is part of construction.
        let _two = L::cp2_blowup(2);

        let ruled = L::ruled_blowup(0);
        let fiber = cls(&[0, 1]);
        assert_eq!(ruled.pair(&fiber, &fiber).unwrap(), 0);
        assert_eq!(ruled.pair(ruled.canonical(), &fiber).unwrap(), -2);
        assert_eq!(ruled.genus(&fiber).unwrap(), 0);
    }

    #[test]
    fn signatures() {
        let s = L::cp2_blowup(5).signature();
        assert_eq!((s.b_plus, s.b_minus, s.b_zero), (1, 5, 0));

        let s = L::ruled_blowup(2).signature();
        assert_eq!((s.b_plus, s.b_minus, s.b_zero), (1, 3, 0));

        let zero = L::new(
            vec![vec![0, 0], vec![0, 0]],
            HomologyClass::new(vec![0, 0]),
        )
        .unwrap();
        let s = zero.signature();
        assert_eq!((s.b_plus, s.b_minus, s.b_zero), (0, 0, 2));
    }

    #[test]
    fn rejects_malformed_lattices() {
        assert!(matches!(
            L::new(vec![vec![1, 2], vec![0, 1]], HomologyClass::new(vec![1, 0])),
            Err(LatticeError::AsymmetricGram { i: 0, j: 1 })
        ));
        // K = 2H on CP²: 2H·H = 2 ≢ 1 = H·H (mod 2).
        assert!(matches!(
            L::new(vec![vec![1]], HomologyClass::new(vec![2])),
            Err(LatticeError::NotCharacteristic { index: 0 })
        ));
        assert!(matches!(
            L::new(Vec::new(), HomologyClass::new(Vec::<i64>::new())),
            Err(LatticeError::EmptyLattice)
        ));
    }

    #[test]
    fn pair_rejects_dimension_mismatch() {
        let l = L::cp2_blowup(1);
        let short = cls(&[1]);
        let ok = cls(&[1, 0]);
        assert!(matches!(
            l.pair(&short, &ok),
            Err(LatticeError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn blow_up_extends_lattice() {
        let l = L::cp2_blowup(1);
        let up = l.blow_up();
        assert_eq!(up.rank(), 3);
        let e2 = cls(&[0, 0, 1]);
        assert_eq!(up.pair(&e2, &e2).unwrap(), -1);
        assert_eq!(up.pair(up.canonical(), &e2).unwrap(), -1);
        let old = cls(&[1, -1]).extended(3);
        assert_eq!(up.pair(&old, &e2).unwrap(), 0);
        // Genus of embedded classes is preserved.
        assert_eq!(up.genus(&old).unwrap(), l.genus(&cls(&[1, -1])).unwrap());
    }

    #[test]
    fn overflow_is_a_hard_error() {
        let l = IntersectionLattice::<i8>::cp2_blowup(0);
        let big = HomologyClass::new(vec![100i8]);
        assert!(matches!(
            l.pair(&big, &big),
            Err(LatticeError::Overflow(OverflowError))
        ));
    }
}
