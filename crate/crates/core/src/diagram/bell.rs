use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::poly::{MPoly, Rational, VariableContext};

/// Context with symbols `a1..a{r}`, one per connected coefficient.
pub fn coefficient_context(r: usize) -> Arc<VariableContext> {
    let mut b = VariableContext::builder();
    for q in 1..=r {
        b = b.geometry(format!("a{q}"), 0);
    }
    b.build().expect("distinct generated names")
}

/// Symbolic `a1..a{r}` on [`coefficient_context`].
pub fn symbolic_coefficients(r: usize) -> Vec<MPoly> {
    let ctx = coefficient_context(r);
    (0..r).map(|i| MPoly::var(&ctx, i)).collect()
}

/// Exponential transform: `Σ P_r tʳ/r! = exp(Σ a_q t^q/q!)`.
///
/// Returns `P_1..P_r` for `a = (a_1..a_r)`, via
/// `P_{n+1} = Σ_k C(n,k) a_{k+1} P_{n−k}`. All entries of `a` must share a
/// context.
pub fn bell_transform(a: &[MPoly]) -> Vec<MPoly> {
    let Some(first) = a.first() else {
        return Vec::new();
    };
    let ctx = first.ctx().clone();
    let mut p = vec![MPoly::one(&ctx)];
    for n in 0..a.len() {
        let mut next = MPoly::zero(&ctx);
        for k in 0..=n {
            let c = Rational::from_integer(binomial(BigInt::from(n), BigInt::from(k)));
            next = &next + &(&a[k] * &p[n - k]).scale(&c);
        }
        p.push(next);
    }
    p.remove(0);
    p
}

/// Inverse of [`bell_transform`]: recovers `a_1..a_r` from `P_1..P_r`.
pub fn log_transform(p: &[MPoly]) -> Vec<MPoly> {
    let Some(first) = p.first() else {
        return Vec::new();
    };
    let ctx = first.ctx().clone();
    let pk = |i: usize| if i == 0 { MPoly::one(&ctx) } else { p[i - 1].clone() };
    let mut a: Vec<MPoly> = Vec::with_capacity(p.len());
    for n in 0..p.len() {
        // P_{n+1} = a_{n+1} + Σ_{k<n} C(n,k) a_{k+1} P_{n−k}
        let mut rest = MPoly::zero(&ctx);
        for (k, ak) in a.iter().enumerate() {
            let c = Rational::from_integer(binomial(BigInt::from(n), BigInt::from(k)));
            rest = &rest + &(ak * &pk(n - k)).scale(&c);
        }
        a.push(&pk(n + 1) - &rest);
    }
    a
}

/// `N_r = P_r / r!`.
pub fn severi_count(p_r: &MPoly, r: usize) -> MPoly {
    let mut f = BigInt::from(1);
    for i in 2..=r {
        f *= i;
    }
    p_r.scale(&Rational::new(BigInt::from(1), f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::set_partitions;

    #[test]
    fn low_order_bell_polynomials() {
        let p = bell_transform(&symbolic_coefficients(3));
        assert_eq!(p[0].to_string(), "a1");
        assert_eq!(p[1].to_string(), "a1^2 + a2");
        assert_eq!(p[2].to_string(), "a1^3 + 3*a1*a2 + a3");
    }

    #[test]
    fn unit_coefficients_give_bell_numbers() {
        let ctx = coefficient_context(0);
        let ones = vec![MPoly::one(&ctx); 6];
        let p = bell_transform(&ones);
        for (r, pr) in p.iter().enumerate() {
            assert_eq!(pr.as_constant().unwrap(), Rational::from_integer(set_partitions(r + 1).len().into()));
        }
    }

    #[test]
    fn log_inverts_exp() {
        let a = symbolic_coefficients(5);
        assert_eq!(log_transform(&bell_transform(&a)), a);
    }

    #[test]
    fn counts_divide_by_factorial() {
        let ctx = coefficient_context(1);
        let x = MPoly::var(&ctx, 0);
        assert_eq!(severi_count(&x.scale(&Rational::from_integer(6.into())), 3), x);
        assert_eq!(severi_count(&x, 1), x);
    }
}
