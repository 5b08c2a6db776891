use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exterior::blade::{check_dim, BladeIndex};

/// Element of the exterior algebra of `R^n`: a graded coefficient table over
/// canonical basis blades. Absent keys are zero coefficients.
///
/// A multivector is *homogeneous of grade p* when every stored blade has
/// grade `p`; operations that require homogeneity say so explicitly.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: BTreeMap<BladeIndex, f64>,
}

impl Multivector {
    /// The zero multivector.
    ///
    /// Panics if `dim` is outside `1..=16`; fallible call sites validate the
    /// dimension before constructing algebra elements.
    pub fn zero(dim: usize) -> Self {
        check_dim(dim).expect("ambient dimension in 1..=16");
        Multivector {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// A grade-0 element.
    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut mv = Self::zero(dim);
        mv.set(BladeIndex::SCALAR, value);
        mv
    }

    /// The basis vector `e_{index+1}`.
    pub fn basis_vector(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut mv = Self::zero(dim);
        mv.set(BladeIndex::new(dim, &[index])?, 1.0);
        Ok(mv)
    }

    /// A single canonical basis blade with unit coefficient.
    pub fn basis_blade(dim: usize, indices: &[usize]) -> Result<Self> {
        let blade = BladeIndex::new(dim, indices)?;
        let mut mv = Self::zero(dim);
        mv.set(blade, 1.0);
        Ok(mv)
    }

    /// Grade-1 element with the given coordinates (`dim` = length).
    pub fn from_vector(components: &[f64]) -> Self {
        let mut mv = Self::zero(components.len());
        for (i, &c) in components.iter().enumerate() {
            mv.set(BladeIndex::from_bits(1 << i), c);
        }
        mv
    }

    /// Coordinates of a grade-1 (or zero) multivector.
    pub fn try_to_vector(&self) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        for (blade, &c) in &self.coeffs {
            if blade.grade() != 1 {
                return Err(Error::NotAVector);
            }
            let i = blade.indices().next().expect("grade-1 blade has an index");
            out[i] = c;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, blade: BladeIndex) -> f64 {
        self.coeffs.get(&blade).copied().unwrap_or(0.0)
    }

    /// Sets one blade coefficient; exact zeros are not stored.
    pub fn set(&mut self, blade: BladeIndex, value: f64) {
        debug_assert!(blade.indices().all(|i| i < self.dim));
        if value == 0.0 {
            self.coeffs.remove(&blade);
        } else {
            self.coeffs.insert(blade, value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored (blade, coefficient) pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeIndex, f64)> + '_ {
        self.coeffs.iter().map(|(b, &c)| (*b, c))
    }

    /// The common grade of all stored blades, or `None` when the element is
    /// zero or mixes grades.
    pub fn grade(&self) -> Option<usize> {
        let mut grade = None;
        for blade in self.coeffs.keys() {
            match grade {
                None => grade = Some(blade.grade()),
                Some(g) if g != blade.grade() => return None,
                _ => {}
            }
        }
        grade
    }

    /// True when every stored blade has grade `p` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, p: usize) -> bool {
        self.coeffs.keys().all(|b| b.grade() == p)
    }

    /// Wedge (exterior) product. Bilinear, associative, and
    /// graded-anticommutative; blades sharing an index annihilate.
    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = Multivector::zero(self.dim);
        for (&a_blade, &a_coeff) in &self.coeffs {
            for (&b_blade, &b_coeff) in &other.coeffs {
                if !a_blade.disjoint(b_blade) {
                    continue;
                }
                let sign = a_blade.merge_sign(b_blade);
                let target = a_blade.union(b_blade);
                let updated = out.get(target) + sign * a_coeff * b_coeff;
                out.set(target, updated);
            }
        }
        Ok(out)
    }

    /// Wedge of a sequence of factors; the empty product is the scalar 1.
    pub fn wedge_all(dim: usize, factors: &[Multivector]) -> Result<Multivector> {
        let mut acc = Multivector::scalar(dim, 1.0);
        for f in factors {
            acc = acc.wedge(f)?;
        }
        Ok(acc)
    }

    /// Largest absolute coefficient (0 for the zero element).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn coeff_distance(&self, other: &Multivector) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut dist: f64 = 0.0;
        for (blade, &c) in &self.coeffs {
            dist = dist.max((c - other.get(*blade)).abs());
        }
        for (blade, &c) in &other.coeffs {
            dist = dist.max((c - self.get(*blade)).abs());
        }
        dist
    }
}

impl Add for &Multivector {
    type Output = Multivector;

    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (&blade, &c) in &rhs.coeffs {
            let updated = out.get(blade) + c;
            out.set(blade, updated);
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;

    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &-rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -*c;
        }
        out
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;

    fn mul(self, scalar: f64) -> Multivector {
        let mut out = Multivector::zero(self.dim);
        for (&blade, &c) in &self.coeffs {
            out.set(blade, c * scalar);
        }
        out
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (blade, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            if blade.grade() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} {blade}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[dim {}]({self})", self.dim)
    }
}
