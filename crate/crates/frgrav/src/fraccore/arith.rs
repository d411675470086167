//! Nodewise arithmetic on fields sharing a grid.
//!
//! The binary operators panic when the grids differ; [`SampledField::zip_with`]
//! is the checked form. Division follows IEEE semantics, so callers screen zeros.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::SampledField;

macro_rules! field_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&SampledField> for &SampledField {
            type Output = SampledField;
            fn $m(self, rhs: &SampledField) -> SampledField {
                assert!(self.same_grid(rhs), "nodewise op on fields with different grids");
                SampledField::from_parts(
                    self.axes().to_vec(),
                    self.values().iter().zip(rhs.values()).map(|(a, b)| a $op b).collect(),
                )
            }
        }
        impl $tr<SampledField> for SampledField {
            type Output = SampledField;
            fn $m(self, rhs: SampledField) -> SampledField {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SampledField> for SampledField {
            type Output = SampledField;
            fn $m(self, rhs: &SampledField) -> SampledField {
                (&self).$m(rhs)
            }
        }
        impl $tr<SampledField> for &SampledField {
            type Output = SampledField;
            fn $m(self, rhs: SampledField) -> SampledField {
                self.$m(&rhs)
            }
        }
        impl $tr<f64> for &SampledField {
            type Output = SampledField;
            fn $m(self, rhs: f64) -> SampledField {
                self.map(|a| a $op rhs)
            }
        }
        impl $tr<f64> for SampledField {
            type Output = SampledField;
            fn $m(self, rhs: f64) -> SampledField {
                self.map(|a| a $op rhs)
            }
        }
        impl $tr<&SampledField> for f64 {
            type Output = SampledField;
            fn $m(self, rhs: &SampledField) -> SampledField {
                rhs.map(|b| self $op b)
            }
        }
        impl $tr<SampledField> for f64 {
            type Output = SampledField;
            fn $m(self, rhs: SampledField) -> SampledField {
                rhs.map(|b| self $op b)
            }
        }
    };
}

field_op!(Add, add, +);
field_op!(Sub, sub, -);
field_op!(Mul, mul, *);
field_op!(Div, div, /);

impl Neg for &SampledField {
    type Output = SampledField;
    fn neg(self) -> SampledField {
        self.map(|a| -a)
    }
}

impl Neg for SampledField {
    type Output = SampledField;
    fn neg(self) -> SampledField {
        self.map(|a| -a)
    }
}
