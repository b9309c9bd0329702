use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;

use super::ResidueError;
use crate::poly::{LinearForm, MPoly, Monomial, Rational};

/// Truncated Laurent expansion in a single variable; coefficients are
/// polynomials in the remaining variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    pub variable: usize,
    pub terms: BTreeMap<i32, MPoly>,
    pub lower_cutoff: i32,
}

impl LaurentSeries {
    pub fn coefficient(&self, exponent: i32) -> Option<&MPoly> {
        self.terms.get(&exponent)
    }

    /// Highest stored exponent.
    pub fn top_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Folds the series back into a single Laurent polynomial.
    pub fn to_poly(&self) -> Option<MPoly> {
        let mut it = self.terms.iter();
        let (e0, c0) = it.next()?;
        let mut acc = c0.shift(&Monomial::var(self.variable, *e0));
        for (e, c) in it {
            acc = &acc + &c.shift(&Monomial::var(self.variable, *e));
        }
        Some(acc)
    }
}

/// Expands `1/f^m` at infinity in its leading variable `var`:
///
/// `1/(a·t + R)^m = Σⱼ C(m+j-1, j) (-R)ʲ / (a·t)^(m+j)`
///
/// keeping exponents `-m-j ≥ lower_cutoff`.
pub fn expand_inverse_at_infinity(
    f: &LinearForm,
    var: usize,
    lower_cutoff: i32,
) -> Result<LaurentSeries, ResidueError> {
    if f.leading_variable() != Some(var) {
        return Err(ResidueError::NotLeadingVariable {
            form: f.to_string(),
            var: f.ctx().name(var).to_string(),
        });
    }
    let ctx = f.ctx();
    let a = f.leading_coeff().expect("leading variable implies coefficient").clone();
    let m = f.multiplicity() as i32;
    let neg_rest = -f.lower_part();
    let inv_a = Rational::one() / &a;

    let mut terms = BTreeMap::new();
    let mut rest_pow = MPoly::one(ctx);
    let mut inv_a_pow = Rational::one();
    for _ in 0..m {
        inv_a_pow *= &inv_a;
    }
    let mut j: i32 = 0;
    while -m - j >= lower_cutoff {
        let c = Rational::from_integer(binomial(BigInt::from(m + j - 1), BigInt::from(j)));
        let coeff = rest_pow.scale(&(c * &inv_a_pow));
        if !coeff.is_zero() {
            terms.insert(-m - j, coeff);
        }
        if neg_rest.is_zero() {
            break;
        }
        rest_pow = &rest_pow * &neg_rest;
        inv_a_pow *= &inv_a;
        j += 1;
    }
    Ok(LaurentSeries {
        variable: var,
        terms,
        lower_cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableContext;

    #[test]
    fn inverse_of_variable() {
        let ctx = VariableContext::builder().residue("z").build().unwrap();
        let f = LinearForm::parse(&ctx, "z", 1).unwrap();
        let s = expand_inverse_at_infinity(&f, 0, -1).unwrap();
        assert_eq!(s.to_poly().unwrap().to_string(), "z^-1");
    }

    #[test]
    fn non_leading_variable_is_rejected() {
        let ctx = VariableContext::builder().residue("z1").residue("z2").build().unwrap();
        let f = LinearForm::parse(&ctx, "z2 - z1", 1).unwrap();
        assert!(matches!(
            expand_inverse_at_infinity(&f, 0, -3),
            Err(ResidueError::NotLeadingVariable { .. })
        ));
    }

    #[test]
    fn multiplicity_uses_binomial_series() {
        // 1/(z - 1)^2 = z^-2 + 2 z^-3 + 3 z^-4 + ...
        let ctx = VariableContext::builder().residue("z").build().unwrap();
        let f = LinearForm::parse(&ctx, "z - 1", 2).unwrap();
        let s = expand_inverse_at_infinity(&f, 0, -4).unwrap();
        assert_eq!(s.to_poly().unwrap().to_string(), "z^-2 + 2*z^-3 + 3*z^-4");
        assert_eq!(s.top_exponent(), Some(-2));
    }
}
