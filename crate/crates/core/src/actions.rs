//! Circle actions fixing the canonical diagonal, represented by their
//! integer-valued classifying functions.

use num_rational::BigRational;

use crate::cohomology::{LocallyConstantFunction, OrderUnit, Positivity, Ring, Vanishing};
use crate::error::{Error, Result};
use crate::sft::{EventuallyPeriodicPoint, Presentation, Symbol};

/// The action `rho^f` with `rho_t(S_i) = exp(2 pi i t f) S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleAction {
    classifier: LocallyConstantFunction,
}

impl CircleAction {
    pub fn new(classifier: LocallyConstantFunction) -> Result<Self> {
        if !classifier.is_integer_valued() {
            return Err(Error::InvalidFunction(
                "classifier of a circle action must be integer valued".into(),
            ));
        }
        Ok(CircleAction {
            classifier: classifier.with_ring(Ring::Integer)?,
        })
    }

    /// The gauge action, classifier `1`.
    pub fn gauge(p: &Presentation) -> Self {
        CircleAction {
            classifier: LocallyConstantFunction::one(p),
        }
    }

    /// The trivial action, classifier `0`.
    pub fn identity(p: &Presentation) -> Self {
        CircleAction {
            classifier: LocallyConstantFunction::zero(p),
        }
    }

    pub fn classifier(&self) -> &LocallyConstantFunction {
        &self.classifier
    }

    pub fn presentation(&self) -> &Presentation {
        self.classifier.presentation()
    }

    /// `(alpha beta)_t = alpha_t o beta_t`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(CircleAction {
            classifier: self.classifier.add(&other.classifier)?,
        })
    }

    pub fn inverse(&self) -> Self {
        CircleAction {
            classifier: self.classifier.negate(),
        }
    }

    /// Cocycle conjugacy; the coboundary witness `b` satisfies
    /// `g - f = b - b o sigma` for classifiers `f` of `self` and `g` of
    /// `other`, and gives the unitary cocycle `u_t = exp(2 pi i t b)`.
    pub fn equivalent(&self, other: &Self) -> Result<Vanishing> {
        other.classifier.class_equal(&self.classifier)
    }

    pub fn class_nonnegative(&self) -> Result<Positivity> {
        self.classifier.class_is_nonnegative()
    }

    pub fn order_unit_check(&self) -> Result<OrderUnit> {
        self.classifier.order_unit_check()
    }

    /// `rho_t(S_mu) = exp(2 pi i t f^{|mu|}) S_mu`.
    pub fn phase_on_word(&self, mu: &[Symbol]) -> Result<PhaseExponent> {
        let p = self.presentation();
        if mu.is_empty() || !p.is_admissible(mu) {
            return Err(Error::Inadmissible(format!("word `{}`", p.render(mu))));
        }
        Ok(PhaseExponent {
            word: mu.to_vec(),
            exponent: self.classifier.partial_sum(mu.len())?,
        })
    }

    /// `t f^{|mu|}(mu x)` reduced into `[0, 1)`.
    pub fn evaluate(
        &self,
        mu: &[Symbol],
        t: &BigRational,
        x: &EventuallyPeriodicPoint,
    ) -> Result<BigRational> {
        let phase = self.phase_on_word(mu)?;
        let value = phase.exponent_at(x)?;
        let v = t * BigRational::from_integer(value.to_integer());
        Ok(&v - v.floor())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseExponent {
    word: Vec<Symbol>,
    exponent: LocallyConstantFunction,
}

impl PhaseExponent {
    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    /// `f^{|mu|}` as a function on the whole space.
    pub fn exponent(&self) -> &LocallyConstantFunction {
        &self.exponent
    }

    /// `f^{|mu|}(mu x)` for `x` in the follower set of `mu`.
    pub fn exponent_at(&self, x: &EventuallyPeriodicPoint) -> Result<BigRational> {
        let p = self.exponent.presentation();
        let last = *self.word.last().expect("nonempty word");
        if !p.follows(last, x.symbol_at(0)) {
            return Err(Error::Inadmissible(format!(
                "{} followed by the given point",
                p.render(&self.word)
            )));
        }
        Ok(self.exponent.evaluate(&x.prepend(&self.word)))
    }
}

impl std::ops::Neg for &CircleAction {
    type Output = CircleAction;
    fn neg(self) -> CircleAction {
        self.inverse()
    }
}

/// `t = 1/q`, convenience for tests and the CLI.
pub fn unit_fraction(q: i64) -> BigRational {
    BigRational::new(1.into(), q.into())
}
