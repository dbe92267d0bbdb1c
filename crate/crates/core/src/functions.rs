//! Built-in target functions, selectable by name.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{CompactDomain, ComplexPoint, Shape};
use crate::error::{LejaError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// `1 / (z² + 0.1²)`, poles at `±0.1i`.
    RungeComplex,
    Exp,
    /// `|z|`; only offered on subsets of the real axis.
    Abs,
    /// The constant 1.
    Constant,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] =
        [TestFunction::RungeComplex, TestFunction::Exp, TestFunction::Abs, TestFunction::Constant];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::RungeComplex => "runge_complex",
            TestFunction::Exp => "exp",
            TestFunction::Abs => "abs",
            TestFunction::Constant => "constant",
        }
    }

    #[inline]
    pub fn eval(self, z: ComplexPoint) -> ComplexPoint {
        match self {
            TestFunction::RungeComplex => (z * z + Complex64::new(0.01, 0.0)).inv(),
            TestFunction::Exp => z.exp(),
            TestFunction::Abs => Complex64::new(z.norm(), 0.0),
            TestFunction::Constant => Complex64::new(1.0, 0.0),
        }
    }

    pub fn poles(self) -> &'static [(f64, f64)] {
        match self {
            TestFunction::RungeComplex => &[(0.0, 0.1), (0.0, -0.1)],
            _ => &[],
        }
    }

    /// Rejects combinations that are not meaningful on `domain`, including a
    /// pole lying on it.
    pub fn check_domain(self, domain: &CompactDomain) -> Result<()> {
        for &(re, im) in self.poles() {
            if domain.contains(Complex64::new(re, im)) {
                return Err(LejaError::NonFiniteFunction { name: self.name().into(), re, im });
            }
        }
        if self == TestFunction::Abs {
            let real = match domain.shape() {
                Shape::Segment { a, b } => a[1] == 0.0 && b[1] == 0.0,
                Shape::IntervalUnion { .. } => true,
                _ => false,
            };
            if !real {
                return Err(LejaError::Unsupported {
                    kind: domain.kind_name(),
                    what: "`abs` is only available on subsets of the real axis",
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = LejaError;

    fn from_str(s: &str) -> Result<Self> {
        TestFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| LejaError::InvalidConfig(format!("unknown function `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let z = Complex64::new(0.0, 0.0);
        assert!((TestFunction::RungeComplex.eval(z).re - 100.0).abs() < 1e-12);
        assert!(TestFunction::RungeComplex.eval(Complex64::new(0.0, 0.1)).norm() > 1e15);
        assert_eq!(TestFunction::Abs.eval(Complex64::new(-0.5, 0.0)), Complex64::new(0.5, 0.0));
        assert_eq!(TestFunction::Constant.eval(z), Complex64::new(1.0, 0.0));
        for f in TestFunction::ALL {
            assert_eq!(f.name().parse::<TestFunction>().unwrap(), f);
        }
    }

    #[test]
    fn abs_only_on_real_sets() {
        assert!(TestFunction::Abs.check_domain(&CompactDomain::unit_interval()).is_ok());
        assert!(TestFunction::Abs.check_domain(&CompactDomain::unit_disk()).is_err());
        assert!(TestFunction::Exp.check_domain(&CompactDomain::unit_disk()).is_ok());
        assert!(TestFunction::RungeComplex.check_domain(&CompactDomain::unit_interval()).is_ok());
        assert!(matches!(
            TestFunction::RungeComplex.check_domain(&CompactDomain::unit_disk()),
            Err(LejaError::NonFiniteFunction { .. })
        ));
    }
}
