//! Smooth projective curves, with divisor classes recorded by degree.
//!
//! The flag is `C ⊇ {x}` with `x` general. A class of degree 0 is taken to be
//! trivial, which is the case for the canonical class of an elliptic curve.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{q, QVec, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    pub genus: u32,
}

impl CurveModel {
    pub fn new(genus: u32) -> Self {
        CurveModel { genus }
    }

    pub fn check_class(d: &[Q]) -> Result<()> {
        if d.len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: d.len(),
            });
        }
        Ok(())
    }

    pub fn canonical_class(&self) -> Vec<Q> {
        vec![q(2 * i64::from(self.genus) - 2)]
    }

    /// `[0, deg D]`.
    pub fn okounkov_body(&self, d: &[Q]) -> Result<Polytope> {
        Self::check_class(d)?;
        let deg = &d[0];
        if deg.is_negative() {
            return Err(Error::NoSections);
        }
        Polytope::hull(&[QVec(vec![Q::zero()]), QVec(vec![deg.clone()])])
    }

    pub fn volume(&self, d: &[Q]) -> Result<Q> {
        Self::check_class(d)?;
        Ok(if d[0].is_positive() {
            d[0].clone()
        } else {
            Q::zero()
        })
    }

    /// Iitaka dimension, `None` for negative degree.
    pub fn kappa(&self, d: &[Q]) -> Result<Option<usize>> {
        Self::check_class(d)?;
        Ok(match d[0].cmp(&Q::zero()) {
            std::cmp::Ordering::Less => None,
            std::cmp::Ordering::Equal => Some(0),
            std::cmp::Ordering::Greater => Some(1),
        })
    }
}
