//! Weight vectors `w = (q_0, …, q_n)` and the structure of `P_w`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factor_magnitude, lcm_u64};

/// Weights of a weighted projective space, with `m = lcm` and `d = gcd`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct WeightVector {
    q: Vec<u64>,
    m: u64,
    d: u64,
    reduced: bool,
    well_formed: bool,
}

impl WeightVector {
    pub fn classify(q: &[u64]) -> Result<Self> {
        if q.len() < 2 {
            return Err(Error::InvalidWeights(format!(
                "need at least two weights, got {}",
                q.len()
            )));
        }
        if q.contains(&0) {
            return Err(Error::InvalidWeights("weights must be positive".into()));
        }
        let d = q.iter().fold(0u64, |g, &x| g.gcd(&x));
        let m = q.iter().try_fold(1u64, |l, &x| lcm_u64(l, x)).ok_or_else(|| {
            Error::InvalidWeights("lcm of the weights overflows 64 bits".into())
        })?;
        let well_formed = (0..q.len()).all(|i| {
            q.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0u64, |g, (_, &x)| g.gcd(&x))
                == 1
        });
        Ok(WeightVector {
            q: q.to_vec(),
            m,
            d,
            reduced: d == 1,
            well_formed,
        })
    }

    /// The classical projective space `P^n`: all weights 1.
    pub fn classical(n: usize) -> Self {
        WeightVector::classify(&vec![1; n + 1]).expect("valid weights")
    }

    pub fn weights(&self) -> &[u64] {
        &self.q
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.q[i]
    }

    /// Number of coordinates, `n + 1`.
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.q.len() - 1
    }

    pub fn lcm(&self) -> u64 {
        self.m
    }

    pub fn gcd(&self) -> u64 {
        self.d
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_well_formed(&self) -> bool {
        self.well_formed
    }

    /// Divide by the common gcd. Coordinates are unchanged by this
    /// isomorphism; logarithmic heights scale by `1/d`.
    pub fn reduce_weights(&self) -> (WeightVector, u64) {
        let q: Vec<u64> = self.q.iter().map(|x| x / self.d).collect();
        (WeightVector::classify(&q).expect("valid weights"), self.d)
    }

    /// Normal form of a reduced weight vector as a well-formed one.
    pub fn well_formalize(&self) -> Result<WellFormalization> {
        if !self.reduced {
            return Err(Error::InvalidWeights(format!(
                "{self} is not reduced; apply reduce_weights first"
            )));
        }
        let mut q = self.q.clone();
        let mut steps = Vec::new();
        loop {
            let step = (0..q.len()).find_map(|i| {
                let g = q
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(0u64, |g, (_, &x)| g.gcd(&x));
                (g > 1 && g.gcd(&q[i]) == 1).then_some((i, g))
            });
            let Some((i, g)) = step else { break };
            for (j, x) in q.iter_mut().enumerate() {
                if j != i {
                    *x /= g;
                }
            }
            steps.push(WellFormStep { index: i, divisor: g });
        }
        Ok(WellFormalization {
            weights: WeightVector::classify(&q)?,
            steps,
        })
    }

    /// Primes dividing `m`.
    pub fn singular_primes(&self) -> Vec<u64> {
        factor_magnitude(&BigUint::from(self.m))
            .into_keys()
            .map(|p| p.to_u64().unwrap())
            .collect()
    }

    /// Membership in the singular locus of a well-formed space: some prime
    /// dividing `m` divides every weight on the support of `x`.
    pub fn is_singular(&self, coords: &[BigInt]) -> Result<bool> {
        if !self.well_formed {
            return Err(Error::NotWellFormed(self.to_string()));
        }
        self.check_len(coords.len())?;
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::AllZeroPoint);
        }
        Ok(self.singular_primes().into_iter().any(|p| {
            coords
                .iter()
                .zip(&self.q)
                .all(|(x, q)| x.is_zero() || q % p == 0)
        }))
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<()> {
        if got == self.q.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.q.len(),
                got,
            })
        }
    }
}

impl TryFrom<Vec<u64>> for WeightVector {
    type Error = Error;
    fn try_from(q: Vec<u64>) -> Result<Self> {
        WeightVector::classify(&q)
    }
}

impl From<WeightVector> for Vec<u64> {
    fn from(w: WeightVector) -> Vec<u64> {
        w.q
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.q.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for WeightVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let q = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad weight `{t}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        WeightVector::classify(&q)
    }
}

/// One well-formalization step: weights other than `index` are divided by
/// `divisor`, and the point map raises `x_index` to the power `divisor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellFormStep {
    pub index: usize,
    pub divisor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellFormalization {
    pub weights: WeightVector,
    pub steps: Vec<WellFormStep>,
}

impl WellFormalization {
    /// Maps coordinates of the source space to the well-formed one.
    pub fn transform_point(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut x = coords.to_vec();
        for s in &self.steps {
            x[s.index] = num_traits::pow(x[s.index].clone(), s.divisor as usize);
        }
        x
    }
}
