use std::sync::Arc;

use num_traits::{One, Zero};

use super::laurent::expand_inverse_at_infinity;
use super::ResidueError;
use crate::poly::{LinearForm, MPoly, Monomial, Rational, VariableContext};

pub const DEFAULT_TERM_BUDGET: usize = 10_000_000;

/// The integrand of an iterated residue at infinity:
///
/// `prefactor · numerator · Π laurent_prefactors / Π denominator`
///
/// over the residue variables of `context`, taken on the contour
/// `|z₁| ≪ … ≪ |z_k|` (context order).
#[derive(Debug, Clone)]
pub struct ResidueProblem {
    pub context: Arc<VariableContext>,
    pub prefactor: Rational,
    pub numerator: MPoly,
    pub denominator: Vec<LinearForm>,
    /// Factors with only non-positive residue exponents: Segre factors and
    /// monomial denominators written as `z^-n`.
    pub laurent_prefactors: Vec<MPoly>,
}

#[derive(Debug, Clone, Copy)]
pub struct ResidueOptions {
    /// Largest intermediate polynomial (in terms) the engine may build.
    pub term_budget: usize,
}

impl Default for ResidueOptions {
    fn default() -> Self {
        ResidueOptions {
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

/// Bookkeeping from one evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResidueStats {
    pub peak_terms: usize,
    /// Series length used per eliminated variable, outermost first.
    pub expansions: Vec<(String, usize)>,
}

impl ResidueProblem {
    pub fn new(context: &Arc<VariableContext>, numerator: MPoly) -> Self {
        ResidueProblem {
            context: context.clone(),
            prefactor: Rational::one(),
            numerator,
            denominator: Vec::new(),
            laurent_prefactors: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.context.num_residue()
    }

    /// Residue-variable exponents of single-term Laurent prefactors, i.e.
    /// the folded monomial denominator, as a map var → power.
    pub fn monomial_denominator(&self) -> Vec<i32> {
        let mut powers = vec![0; self.num_vars()];
        for p in &self.laurent_prefactors {
            if let [(m, _)] = p.terms().collect::<Vec<_>>().as_slice() {
                for (v, e) in m.iter() {
                    if v < powers.len() {
                        powers[v] -= e;
                    }
                }
            }
        }
        powers
    }

    /// Checks the structural invariants and folds monomial or constant
    /// denominator factors into the Laurent prefactors / prefactor.
    pub fn normalized(&self) -> Result<ResidueProblem, ResidueError> {
        let ctx = &self.context;
        let same = |p: &MPoly| Arc::ptr_eq(p.ctx(), ctx) || **p.ctx() == **ctx;
        if !same(&self.numerator) {
            return Err(ResidueError::ContextMismatch("numerator".into()));
        }
        let mut out = ResidueProblem {
            context: ctx.clone(),
            prefactor: self.prefactor.clone(),
            numerator: self.numerator.clone(),
            denominator: Vec::new(),
            laurent_prefactors: Vec::new(),
        };
        for (i, p) in self.laurent_prefactors.iter().enumerate() {
            if !same(p) {
                return Err(ResidueError::ContextMismatch(format!("laurent prefactor {i}")));
            }
            let positive = p
                .terms()
                .any(|(m, _)| m.iter().any(|(v, e)| ctx.is_residue(v) && e > 0));
            if positive {
                return Err(ResidueError::PositiveLaurentExponent(p.to_string()));
            }
            out.laurent_prefactors.push(p.clone());
        }
        for f in &self.denominator {
            if !(Arc::ptr_eq(f.ctx(), ctx) || **f.ctx() == **ctx) {
                return Err(ResidueError::ContextMismatch(format!("denominator {f}")));
            }
            let m = f.multiplicity() as i32;
            match f.leading_variable() {
                Some(v) if f.is_monomial() => {
                    let a = f.leading_coeff().unwrap();
                    let c = Rational::one() / a.pow(m);
                    out.laurent_prefactors
                        .push(MPoly::monomial(ctx, Monomial::var(v, -m), c));
                }
                Some(_) => out.denominator.push(f.clone()),
                None => match f.const_part().as_constant() {
                    Some(c) if !c.is_zero() => out.prefactor /= c.pow(m),
                    Some(_) => return Err(ResidueError::Malformed(f.to_string())),
                    None => return Err(ResidueError::NonInvertibleConstant(f.to_string())),
                },
            }
        }
        Ok(out)
    }
}

/// Iterated residue at infinity with default options.
pub fn iterated_residue(p: &ResidueProblem) -> Result<MPoly, ResidueError> {
    iterated_residue_with(p, &ResidueOptions::default()).map(|(r, _)| r)
}

/// Iterated residue at infinity: `(-1)^k` times the coefficient of
/// `(z₁⋯z_k)⁻¹` in the expansion on `|z₁| ≪ … ≪ |z_k|`.
///
/// Variables are eliminated from the outermost inward. Eliminating `t`
/// expands exactly the denominator factors led by `t`; every other factor
/// is free of `t` at that point.
pub fn iterated_residue_with(
    p: &ResidueProblem,
    opts: &ResidueOptions,
) -> Result<(MPoly, ResidueStats), ResidueError> {
    let p = p.normalized()?;
    let ctx = &p.context;
    let k = ctx.num_residue();
    let mut stats = ResidueStats::default();
    let budget = |n: usize, stats: &mut ResidueStats| {
        stats.peak_terms = stats.peak_terms.max(n);
        if n > opts.term_budget {
            Err(ResidueError::TermBudgetExceeded {
                terms: n,
                budget: opts.term_budget,
            })
        } else {
            Ok(())
        }
    };

    let mut work = p.numerator.scale(&p.prefactor);
    budget(work.len(), &mut stats)?;
    for lp in &p.laurent_prefactors {
        if work.is_zero() {
            break;
        }
        work = &work * lp;
        budget(work.len(), &mut stats)?;
    }

    let mut pending = p.denominator;
    for t in (0..k).rev() {
        if work.is_zero() {
            return Ok((MPoly::zero(ctx), stats));
        }
        let (led, rest): (Vec<_>, Vec<_>) = pending
            .into_iter()
            .partition(|f| f.leading_variable() == Some(t));
        pending = rest;

        let top = work.max_exponent(t).unwrap_or(0);
        let total_mult: i32 = led.iter().map(|f| f.multiplicity() as i32).sum();
        // Every t-led factor contributes at most -mult to the t-exponent.
        work = work.filter_terms(|m| m.exponent(t) >= total_mult - 1);
        let mut still_to_come = total_mult;
        let mut used = 0;
        for f in &led {
            let mult = f.multiplicity() as i32;
            still_to_come -= mult;
            let cutoff = -1 - top - (total_mult - mult);
            let series = expand_inverse_at_infinity(f, t, cutoff)?;
            // Dropped tail starts at cutoff - 1; even paired with the top
            // numerator exponent and the largest contributions of the other
            // factors it stays below -1.
            debug_assert!(top + (cutoff - 1) - (total_mult - mult) < -1);
            used += series.terms.len();
            let Some(sp) = series.to_poly() else {
                work = MPoly::zero(ctx);
                break;
            };
            let floor = still_to_come - 1;
            work = work.mul_filtered(&sp, |m| m.exponent(t) >= floor);
            budget(work.len(), &mut stats)?;
            if work.is_zero() {
                break;
            }
        }
        stats.expansions.push((ctx.name(t).to_string(), used));
        work = work.coefficient_of(t, -1);
    }
    if !pending.is_empty() {
        return Err(ResidueError::Malformed(pending[0].to_string()));
    }
    if k % 2 == 1 {
        work = -work;
    }
    Ok((work, stats))
}
