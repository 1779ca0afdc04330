//! Cost scalars for the dynamic programs.
//!
//! The solvers run either on [`Cost`] (arbitrary precision) or, when every
//! value that can arise fits comfortably, on a saturating `i128`. The fast
//! path matters: the DP tables hold millions of cells and hard instances are
//! solved repeatedly by the verification pipelines.

use crate::cost::Cost;
use crate::model::CostModel;
use crate::tree::Label;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub trait Scalar: Clone + Ord {
    fn zero() -> Self;
    fn inf() -> Self;
    fn is_inf(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn to_cost(&self) -> Cost;
}

impl Scalar for Cost {
    fn zero() -> Self {
        Cost::zero()
    }
    fn inf() -> Self {
        Cost::Infinity
    }
    fn is_inf(&self) -> bool {
        self.is_infinite()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn to_cost(&self) -> Cost {
        self.clone()
    }
}

/// `i128` with `i128::MAX` as the formal infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Sat(pub i128);

impl Scalar for Sat {
    fn zero() -> Self {
        Sat(0)
    }
    fn inf() -> Self {
        Sat(i128::MAX)
    }
    fn is_inf(&self) -> bool {
        self.0 == i128::MAX
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_inf() || other.is_inf() {
            Sat::inf()
        } else {
            Sat(self.0.checked_add(other.0).expect("scalar overflow"))
        }
    }
    fn to_cost(&self) -> Cost {
        if self.is_inf() {
            Cost::Infinity
        } else {
            Cost::finite(self.0)
        }
    }
}

/// Finite match costs of a model, laid out as a dense (F-label, G-label)
/// matrix. `inf()` marks absent pairs.
pub struct LabelCosts<S> {
    alphabet: usize,
    cells: Vec<S>,
}

impl<S: Scalar> LabelCosts<S> {
    pub fn get(&self, a: Label, b: Label) -> &S {
        &self.cells[a.0 as usize * self.alphabet + b.0 as usize]
    }
}

impl LabelCosts<Cost> {
    pub fn from_model(model: &CostModel) -> Self {
        let alphabet = model.alphabet_size() as usize;
        let mut cells = vec![Cost::Infinity; alphabet * alphabet];
        for ((a, b), c) in model.iter_finite() {
            cells[a.0 as usize * alphabet + b.0 as usize] = c.clone();
        }
        LabelCosts { alphabet, cells }
    }
}

impl LabelCosts<Sat> {
    /// `None` when some finite cost scaled by `headroom` would not fit.
    pub fn try_from_model(model: &CostModel, headroom: u64) -> Option<Self> {
        let bound = BigInt::from(i128::MAX / 2) / BigInt::from(headroom.max(1));
        let alphabet = model.alphabet_size() as usize;
        let mut cells = vec![Sat::inf(); alphabet * alphabet];
        for ((a, b), c) in model.iter_finite() {
            let v = c.expect_finite();
            if v.abs() > bound {
                return None;
            }
            cells[a.0 as usize * alphabet + b.0 as usize] = Sat(v.to_i128()?);
        }
        Some(LabelCosts { alphabet, cells })
    }
}
