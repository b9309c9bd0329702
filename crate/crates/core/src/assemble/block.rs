use std::sync::Arc;

use num_traits::One;

use super::{AssembleError, Assembled};
use crate::chern::{add_geometry, copy_name, segre_factor, twisted_roots, BundleModel, ChernPoly, SurfaceModel};
use crate::poly::{LinearForm, MPoly, Monomial, Rational, VariableContext};
use crate::residue::ResidueProblem;

/// One factor `R^{α_l}` of a residue integrand: a set of residue variables
/// with weights, sitting over one copy of `X`.
#[derive(Debug, Clone)]
pub(crate) struct BlockShape {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
    pub copy: usize,
    pub prefactor: Rational,
    /// Polynomials in `z1..z{m}` multiplied into the numerator (ePDs,
    /// block polynomials).
    pub numerator_extras: Vec<MPoly>,
    /// Exponent of `(z1⋯zm)` in the denominator.
    pub monomial_power: i32,
    /// Monomial duals in `z1..z{m}` divided out.
    pub denominator_monomials: Vec<MPoly>,
}

impl BlockShape {
    pub fn new(names: Vec<String>, weights: Vec<u32>, copy: usize, monomial_power: i32) -> Self {
        BlockShape {
            names,
            weights,
            copy,
            prefactor: Rational::one(),
            numerator_extras: Vec::new(),
            monomial_power,
            denominator_monomials: Vec::new(),
        }
    }
}

/// Maps a polynomial written in `z1..z{m}` onto a block's variables; other
/// symbols are matched by name.
pub(crate) fn embed_block_poly(
    p: &MPoly,
    target: &Arc<VariableContext>,
    block_vars: &[usize],
) -> Result<MPoly, AssembleError> {
    let src = p.ctx();
    let mut map = Vec::with_capacity(src.num_vars());
    for v in 0..src.num_vars() {
        let name = src.name(v);
        let local = name
            .strip_prefix('z')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= block_vars.len());
        let t = match local {
            Some(i) => block_vars[i - 1],
            None => match target.index_of(name) {
                Some(t) => t,
                None if p.involves(v) => {
                    return Err(AssembleError::InvalidSpec(format!(
                        "'{name}' in {p} is not a variable of the block"
                    )))
                }
                None => 0,
            },
        };
        map.push(t);
    }
    Ok(p.embed(target, &map))
}

/// Builds `prefactor · Φ(⊕ F(z^{α_l})) · Π_l [pairs · extras / (sums ·
/// monomials · duals) · Segre]` over `copies` copies of `X`.
pub(crate) fn build_problem(
    blocks: &[BlockShape],
    bundle: &BundleModel,
    surface: &SurfaceModel,
    phi: &ChernPoly,
    copies: usize,
    context_weights: bool,
) -> Result<Assembled, AssembleError> {
    let mut b = VariableContext::builder();
    for blk in blocks {
        for (n, &w) in blk.names.iter().zip(&blk.weights) {
            b = if context_weights { b.weighted(n.clone(), w) } else { b.residue(n.clone()) };
        }
    }
    let ctx = add_geometry(b, bundle, surface, copies).build()?;
    let one = Rational::one();

    let mut numerator = MPoly::one(&ctx);
    let mut prefactor = Rational::one();
    let mut denominator = Vec::new();
    let mut laurent = Vec::new();
    let mut all_roots = Vec::new();
    for blk in blocks {
        let vars: Vec<usize> = blk.names.iter().map(|n| ctx.require(n)).collect::<Result<_, _>>()?;
        let z = |i: usize| MPoly::var(&ctx, vars[i]);
        let w = &blk.weights;
        let m = vars.len();
        prefactor *= &blk.prefactor;

        // Π over ordered pairs i ≠ j with w(i) ≤ w(j).
        for i in 0..m {
            for j in 0..m {
                if i != j && w[i] <= w[j] {
                    numerator = &numerator * &(&z(i) - &z(j));
                }
            }
        }
        for extra in &blk.numerator_extras {
            numerator = &numerator * &embed_block_poly(extra, &ctx, &vars)?;
        }
        // Π over i ≤ j, and m with w(i) + w(j) ≤ w(m).
        for i in 0..m {
            for j in i..m {
                for l in 0..m {
                    if w[i] + w[j] <= w[l] {
                        let form = &(&z(i) + &z(j)) - &z(l);
                        denominator.push(LinearForm::from_poly(&form, 1)?);
                    }
                }
            }
        }
        if blk.monomial_power != 0 && m > 0 {
            let mono = Monomial::from_pairs(vars.iter().map(|&v| (v, -blk.monomial_power)));
            laurent.push(MPoly::monomial(&ctx, mono, one.clone()));
        }
        for dual in &blk.denominator_monomials {
            let d = embed_block_poly(dual, &ctx, &vars)?;
            let terms: Vec<_> = d.terms().collect();
            match terms.as_slice() {
                [(mono, c)] => {
                    prefactor /= *c;
                    if !mono.is_one() {
                        laurent.push(MPoly::monomial(&ctx, mono.pow(-1), one.clone()));
                    }
                }
                _ => return Err(AssembleError::NonMonomialDual(dual.to_string())),
            }
        }
        for &v in &vars {
            laurent.push(segre_factor(&ctx, v, surface, blk.copy, copies)?);
        }
        let theta: Vec<MPoly> = bundle
            .roots
            .iter()
            .map(|r| ctx.require(&copy_name(r, blk.copy, copies)).map(|i| MPoly::var(&ctx, i)))
            .collect::<Result<_, _>>()?;
        let offsets: Vec<MPoly> = (0..m).map(z).collect();
        all_roots.extend(twisted_roots(&theta, &offsets));
    }
    numerator = &numerator * &phi.evaluate(&ctx, &all_roots)?;

    let mut problem = ResidueProblem::new(&ctx, numerator);
    problem.prefactor = prefactor;
    problem.denominator = denominator;
    problem.laurent_prefactors = laurent;
    Ok(Assembled {
        problem,
        copies,
        blocks: blocks.iter().map(|b| b.names.clone()).collect(),
        line: bundle.roots.first().cloned(),
        warnings: Vec::new(),
    })
}

/// Shape of a problem with the numerator left out: what the structural
/// comparisons look at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralSummary {
    pub num_vars: usize,
    /// Sorted canonical strings of the affine denominator factors.
    pub denominators: Vec<String>,
    /// Power of each residue variable in the monomial denominator.
    pub monomial_denominator: Vec<i32>,
    /// Number of multi-term Laurent prefactors (Segre factors).
    pub segre_factors: usize,
}

pub fn structural_summary(p: &ResidueProblem) -> StructuralSummary {
    let mut denominators: Vec<String> = p.denominator.iter().map(|f| f.to_string()).collect();
    denominators.sort();
    StructuralSummary {
        num_vars: p.num_vars(),
        denominators,
        monomial_denominator: p.monomial_denominator(),
        segre_factors: p.laurent_prefactors.iter().filter(|l| l.len() > 1).count(),
    }
}
