//! Fixed-point sums over Grassmannians and their residue counterparts.
//!
//! For a homogeneous α in d variables,
//!
//! ```text
//! Σ_σ α(λ_σ(1..d)) / Π_{m∈σ} Π_{i∉σ} (λ_i − λ_m)
//!   = Res_{z=∞} Π_{m≠l}(z_m − z_l) α(z) dz / Π_l Π_i (λ_i − z_l)
//! ```
//!
//! The left side is computed here by exact common-denominator arithmetic,
//! independently of the residue engine, and serves as its oracle.

use std::sync::Arc;

use super::{ResidueError, ResidueProblem};
use crate::poly::{LinearForm, MPoly, Monomial, Rational, VariableContext};

/// Context holding the torus weights `lambda1..lambda{n}`.
pub fn lambda_context(n: usize) -> Arc<VariableContext> {
    let mut b = VariableContext::builder();
    for i in 1..=n {
        b = b.geometry(format!("lambda{i}"), 1);
    }
    b.build().expect("generated names are distinct")
}

/// Context with residue variables `z1..z{d}` and weights `lambda1..lambda{n}`.
pub fn flag_context(n: usize, d: usize) -> Arc<VariableContext> {
    let mut b = VariableContext::builder();
    for i in 1..=d {
        b = b.residue(format!("z{i}"));
    }
    for i in 1..=n {
        b = b.geometry(format!("lambda{i}"), 1);
    }
    b.build().expect("generated names are distinct")
}

fn d_subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < d - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Sum over torus fixed points of `Grass_d(ℂⁿ)`, simplified to a
/// polynomial in `lambda1..lambda{n}`. `alpha` must be a polynomial in the
/// first `d` residue variables of its context.
///
/// Each fixed point σ is weighted by `α` summed over every ordering of σ,
/// so non-symmetric `α` is allowed; for symmetric `α` this is `d!` times the
/// plain fixed-point sum.
pub fn grassmann_fixed_point_sum(n: usize, d: usize, alpha: &MPoly) -> Result<MPoly, ResidueError> {
    if d == 0 || d > n {
        return Err(ResidueError::InvalidGrassmannian { n, d });
    }
    let actx = alpha.ctx();
    if actx.num_residue() < d {
        return Err(ResidueError::InvalidGrassmannian { n, d });
    }
    let target = lambda_context(n);
    let lambda = |i: usize| MPoly::var(&target, i);
    let diff = |i: usize, j: usize| &lambda(i) - &lambda(j);

    // Common denominator V = Π_{i<j} (λ_i − λ_j). For a subset σ,
    // V / den_σ = ± Π_{i<j, same side} (λ_i − λ_j).
    let mut numerator = MPoly::zero(&target);
    for sigma in d_subsets(n, d) {
        let inside = |i: usize| sigma.contains(&i);
        let mut term = MPoly::zero(&target);
        for ordering in permutations(&sigma) {
            let mut images: Vec<Option<MPoly>> = vec![None; actx.num_vars()];
            for (l, &s) in ordering.iter().enumerate() {
                images[l] = Some(lambda(s));
            }
            term = &term + &alpha.substitute(&target, &images).map_err(ResidueError::Poly)?;
        }
        let mut negate = false;
        for i in 0..n {
            for j in i + 1..n {
                if inside(i) == inside(j) {
                    term = &term * &diff(i, j);
                } else if inside(i) {
                    // den_σ holds (λ_j − λ_i) where V holds (λ_i − λ_j).
                    negate = !negate;
                }
            }
        }
        numerator = if negate { &numerator - &term } else { &numerator + &term };
    }
    let one = Rational::from_integer(1.into());
    let minus_one = -one.clone();
    let mut q = numerator;
    for i in 0..n {
        for j in i + 1..n {
            if q.is_zero() {
                return Ok(q);
            }
            // (λ_i − λ_j) viewed as −λ_j + λ_i
            q = q
                .div_exact_linear(j, &minus_one, &lambda(i))
                .map_err(ResidueError::Poly)?;
        }
    }
    Ok(q)
}

/// Residue side of the identity: numerator `Π_{m≠l}(z_m − z_l)·α(z)` over
/// `Π_l Π_i (λ_i − z_l)`, on [`flag_context`]`(n, d)`.
pub fn grassmann_residue_problem(n: usize, d: usize, alpha: &MPoly) -> Result<ResidueProblem, ResidueError> {
    if d == 0 || d > n {
        return Err(ResidueError::InvalidGrassmannian { n, d });
    }
    let ctx = flag_context(n, d);
    let alpha = alpha.embed_by_name(&ctx).map_err(ResidueError::Poly)?;
    let z = |i: usize| MPoly::var(&ctx, i);
    let mut num = alpha;
    for m in 0..d {
        for l in 0..d {
            if m != l {
                num = &num * &(&z(m) - &z(l));
            }
        }
    }
    let mut p = ResidueProblem::new(&ctx, num);
    for l in 0..d {
        for i in 0..n {
            let lam = MPoly::var(&ctx, d + i);
            let form = LinearForm::new(
                [(l, -Rational::from_integer(1.into()))].into_iter().collect(),
                lam,
                1,
            )
            .map_err(ResidueError::Poly)?;
            p.denominator.push(form);
        }
    }
    Ok(p)
}

/// Monomial `z1^e1 ⋯ zd^ed` on [`VariableContext::block`]`(d)`.
pub fn block_monomial(exps: &[i32]) -> MPoly {
    let ctx = VariableContext::block(exps.len());
    let m = Monomial::from_pairs(exps.iter().enumerate().map(|(i, &e)| (i, e)));
    MPoly::monomial(&ctx, m, Rational::from_integer(1.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_in_plane_examples() {
        assert_eq!(
            grassmann_fixed_point_sum(2, 1, &block_monomial(&[1])).unwrap().to_string(),
            "-1"
        );
        assert!(grassmann_fixed_point_sum(2, 1, &block_monomial(&[0])).unwrap().is_zero());
        assert_eq!(
            grassmann_fixed_point_sum(3, 1, &block_monomial(&[2])).unwrap().to_string(),
            "1"
        );
    }

    #[test]
    fn rejects_d_above_n() {
        assert!(matches!(
            grassmann_fixed_point_sum(2, 3, &block_monomial(&[0, 0, 0])),
            Err(ResidueError::InvalidGrassmannian { n: 2, d: 3 })
        ));
    }

    #[test]
    fn subsets_are_complete() {
        assert_eq!(d_subsets(4, 2).len(), 6);
        assert_eq!(d_subsets(5, 5).len(), 1);
    }
}
