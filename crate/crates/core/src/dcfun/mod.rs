//! Piecewise-linear d.c. functions `f = g - h` with `g`, `h` max-affine.

mod aura;
mod regularity;
mod subdiff;

pub use aura::{aura_from_sublevel, combine_auras, halfspace_aura, nondegeneracy_sq, polytope_aura, touches};
pub use regularity::{is_weakly_regular, RegularityCertificate, Witness, DEFAULT_ARRANGEMENT_CAP};
pub use subdiff::{clarke_subdifferential, SubdifferentialHull};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{add, dot, to_f64_vec, Rat};

/// One affine piece `x -> gradient·x + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePiece {
    pub gradient: Vec<Rat>,
    pub offset: Rat,
}

impl AffinePiece {
    pub fn new(gradient: Vec<Rat>, offset: Rat) -> Self {
        AffinePiece { gradient, offset }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.gradient, x) + &self.offset
    }
}

/// Convex piecewise-linear function `x -> max_i (a_i·x + b_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxAffine {
    dim: usize,
    pieces: Vec<AffinePiece>,
}

impl MaxAffine {
    pub fn new(mut pieces: Vec<AffinePiece>) -> Result<Self> {
        let dim = pieces.first().ok_or(Error::InvalidArgument("max-affine needs a piece".into()))?.gradient.len();
        for p in &pieces {
            if p.gradient.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.gradient.len() });
            }
        }
        pieces.sort();
        pieces.dedup();
        // a piece sharing its gradient with a higher piece is never maximal
        pieces.dedup_by(|later, earlier| {
            if later.gradient == earlier.gradient {
                if later.offset > earlier.offset {
                    std::mem::swap(later, earlier);
                }
                true
            } else {
                false
            }
        });
        Ok(MaxAffine { dim, pieces })
    }

    pub fn zero(dim: usize) -> Self {
        MaxAffine { dim, pieces: vec![AffinePiece::new(vec![Rat::zero(); dim], Rat::zero())] }
    }

    pub fn affine(gradient: Vec<Rat>, offset: Rat) -> Self {
        MaxAffine { dim: gradient.len(), pieces: vec![AffinePiece::new(gradient, offset)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.pieces.iter().map(|p| p.eval(x)).max().expect("nonempty")
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.pieces_f64()
            .iter()
            .map(|(a, b)| a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn pieces_f64(&self) -> Vec<(Vec<f64>, f64)> {
        self.pieces.iter().map(|p| (to_f64_vec(&p.gradient), crate::rational::to_f64(&p.offset))).collect()
    }

    /// Indices of pieces attaining the maximum at `x`.
    pub fn active(&self, x: &[Rat]) -> Vec<usize> {
        let vals: Vec<Rat> = self.pieces.iter().map(|p| p.eval(x)).collect();
        let m = vals.iter().max().expect("nonempty").clone();
        (0..vals.len()).filter(|&i| vals[i] == m).collect()
    }

    /// Pointwise sum, again max-affine.
    pub fn sum(&self, other: &MaxAffine) -> Result<MaxAffine> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.push(AffinePiece::new(add(&p.gradient, &q.gradient), &p.offset + &q.offset));
            }
        }
        MaxAffine::new(pieces)
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &MaxAffine) -> Result<MaxAffine> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        MaxAffine::new(self.pieces.iter().chain(&other.pieces).cloned().collect())
    }

    pub fn shifted(&self, c: &Rat) -> MaxAffine {
        MaxAffine {
            dim: self.dim,
            pieces: self.pieces.iter().map(|p| AffinePiece::new(p.gradient.clone(), &p.offset + c)).collect(),
        }
    }

    pub fn scaled(&self, s: &Rat) -> MaxAffine {
        assert!(*s >= Rat::zero(), "max-affine functions scale by nonnegative factors only");
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(p.gradient.iter().map(|v| v * s).collect(), &p.offset * s))
            .collect();
        MaxAffine::new(pieces).expect("nonempty")
    }

    pub fn max_gradient_norm(&self) -> f64 {
        self.pieces_f64().iter().map(|(a, _)| a.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }
}

/// `f = g - h` with `g` (plus) and `h` (minus) convex and max-affine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DCFunction {
    pub plus: MaxAffine,
    pub minus: MaxAffine,
}

impl DCFunction {
    pub fn new(plus: MaxAffine, minus: MaxAffine) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(Error::DimensionMismatch { expected: plus.dim(), found: minus.dim() });
        }
        Ok(DCFunction { plus, minus })
    }

    pub fn convex(g: MaxAffine) -> Self {
        let d = g.dim();
        DCFunction { plus: g, minus: MaxAffine::zero(d) }
    }

    pub fn zero(dim: usize) -> Self {
        DCFunction::convex(MaxAffine::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.plus.max_gradient_norm() + self.minus.max_gradient_norm()
    }

    pub fn add(&self, other: &DCFunction) -> Result<DCFunction> {
        DCFunction::new(self.plus.sum(&other.plus)?, self.minus.sum(&other.minus)?)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.plus.eval_f64(x) - self.minus.eval_f64(x)
    }
}

/// `f(x) = g(x) - h(x)`, exact.
pub fn eval(f: &DCFunction, x: &[Rat]) -> Result<Rat> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x.len() });
    }
    Ok(f.plus.eval(x) - f.minus.eval(x))
}

/// `|x_i|` as a max-affine function in `dim` variables.
pub fn abs_coordinate(dim: usize, i: usize) -> MaxAffine {
    let mut e = vec![Rat::zero(); dim];
    e[i] = Rat::from_integer(1.into());
    let neg: Vec<Rat> = e.iter().map(|v| -v).collect();
    MaxAffine::new(vec![AffinePiece::new(e, Rat::zero()), AffinePiece::new(neg, Rat::zero())]).expect("pieces")
}
