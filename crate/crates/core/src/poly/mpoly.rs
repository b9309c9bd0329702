use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::context::{VarInfo, VariableContext};
use super::monomial::Monomial;
use super::{PolyError, Rational};

/// Sparse Laurent polynomial with exact rational coefficients.
///
/// Terms are kept sorted in canonical order (see [`Monomial::canonical_cmp`])
/// and never hold a zero coefficient. When the context carries a grading
/// spec, products drop terms whose geometry degree exceeds the cap.
#[derive(Clone)]
pub struct MPoly {
    ctx: Arc<VariableContext>,
    terms: Vec<(Monomial, Rational)>,
}

impl VariableContext {
    /// True if the monomial is killed by the context's truncation rule.
    pub fn exceeds_grading(&self, m: &Monomial) -> bool {
        let Some(spec) = self.grading() else {
            return false;
        };
        let mut by_group: SmallVec<[i64; 4]> = SmallVec::new();
        for (v, e) in m.iter() {
            if let VarInfo::Geometry { degree, group } = self.var_info(v) {
                let g = group as usize;
                if by_group.len() <= g {
                    by_group.resize(g + 1, 0);
                }
                by_group[g] += degree as i64 * e as i64;
                if by_group[g] > spec.max_degree as i64 {
                    return true;
                }
            }
        }
        false
    }

    /// Weighted degree of the geometry part of a monomial.
    pub fn geometry_degree(&self, m: &Monomial) -> i64 {
        m.iter()
            .map(|(v, e)| match self.var_info(v) {
                VarInfo::Geometry { degree, .. } => degree as i64 * e as i64,
                VarInfo::Residue => 0,
            })
            .sum()
    }
}

impl MPoly {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        MPoly {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: Rational) -> Self {
        Self::from_terms(ctx, [(Monomial::one(), c)])
    }

    pub fn integer(ctx: &Arc<VariableContext>, c: i64) -> Self {
        Self::constant(ctx, Rational::from_integer(c.into()))
    }

    pub fn var(ctx: &Arc<VariableContext>, var: usize) -> Self {
        Self::monomial(ctx, Monomial::var(var, 1), Rational::one())
    }

    /// Variable by name; panics if absent. Use [`VariableContext::require`]
    /// for fallible lookup.
    pub fn named(ctx: &Arc<VariableContext>, name: &str) -> Self {
        let i = ctx
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::var(ctx, i)
    }

    pub fn monomial(ctx: &Arc<VariableContext>, m: Monomial, c: Rational) -> Self {
        Self::from_terms(ctx, [(m, c)])
    }

    /// Collects terms, merging duplicates, dropping zeros and anything the
    /// grading rule kills.
    pub fn from_terms<I>(ctx: &Arc<VariableContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() || ctx.exceeds_grading(&m) {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::finish(ctx, acc)
    }

    fn finish(ctx: &Arc<VariableContext>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        MPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`MPoly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a rational constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of an exact monomial.
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn same_context(&self, other: &MPoly) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    fn check(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check(other)?;
        Ok(MPoly::from_terms(
            &self.ctx,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        ))
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check(other)?;
        Ok(MPoly::from_terms(
            &self.ctx,
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(m, c)| (m.clone(), -c))),
        ))
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    /// Product keeping only monomials accepted by `keep` (and the grading
    /// rule). Used to prune terms that provably cannot reach a target
    /// exponent.
    pub fn mul_filtered(&self, other: &MPoly, keep: impl Fn(&Monomial) -> bool) -> MPoly {
        debug_assert!(self.same_context(other));
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len().max(other.terms.len()));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !keep(&m) || self.ctx.exceeds_grading(&m) {
                    continue;
                }
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::finish(&self.ctx, acc)
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> MPoly {
        if q.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Multiplies by a monomial (exponents may be negative).
    pub fn shift(&self, m: &Monomial) -> MPoly {
        MPoly::from_terms(&self.ctx, self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())))
    }

    /// Power with non-negative exponent; negative exponents are allowed
    /// only for single-term polynomials.
    pub fn pow(&self, n: i32) -> Result<MPoly, PolyError> {
        if n < 0 {
            return match self.terms.as_slice() {
                [(m, c)] => Ok(MPoly::monomial(
                    &self.ctx,
                    m.pow(n),
                    Rational::one() / c.pow(-n),
                )),
                _ => Err(PolyError::NonInvertible(self.to_string())),
            };
        }
        let mut base = self.clone();
        let mut acc = MPoly::one(&self.ctx);
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Coefficient of `var^exponent`, as a polynomial in the other variables.
    pub fn coefficient_of(&self, var: usize, exponent: i32) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == exponent)
                .map(|(m, c)| (m.without(var), c.clone()))
                .collect(),
        }
    }

    /// Groups terms by their exponent in `var`.
    pub fn split_by(&self, var: usize) -> BTreeMap<i32, MPoly> {
        let mut buckets: BTreeMap<i32, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets
                .entry(m.exponent(var))
                .or_default()
                .push((m.without(var), c.clone()));
        }
        buckets
            .into_iter()
            .map(|(e, terms)| {
                (
                    e,
                    MPoly {
                        ctx: self.ctx.clone(),
                        terms,
                    },
                )
            })
            .collect()
    }

    pub fn max_exponent(&self, var: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max()
    }

    pub fn min_exponent(&self, var: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).min()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) != 0)
    }

    /// True when no residue variable appears.
    pub fn is_geometry_only(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| m.iter().all(|(v, _)| !self.ctx.is_residue(v)))
    }

    /// True when every term has the same total degree in residue variables.
    pub fn is_residue_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| {
            m.iter()
                .filter(|(v, _)| self.ctx.is_residue(*v))
                .map(|(_, e)| e as i64)
                .sum::<i64>()
        });
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Total degree in residue variables when homogeneous.
    pub fn residue_degree(&self) -> Option<i64> {
        if !self.is_residue_homogeneous() {
            return None;
        }
        Some(
            self.terms
                .first()
                .map(|(m, _)| {
                    m.iter()
                        .filter(|(v, _)| self.ctx.is_residue(*v))
                        .map(|(_, e)| e as i64)
                        .sum()
                })
                .unwrap_or(0),
        )
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// `map[i]`. Target grading applies.
    pub fn embed(&self, target: &Arc<VariableContext>, map: &[usize]) -> MPoly {
        MPoly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| (m.remap(map), c.clone())),
        )
    }

    /// Embeds by matching variable names; every variable used must exist in
    /// the target.
    pub fn embed_by_name(&self, target: &Arc<VariableContext>) -> Result<MPoly, PolyError> {
        let map = (0..self.ctx.num_vars())
            .map(|i| {
                let name = self.ctx.name(i);
                Ok(target.index_of(name).unwrap_or(usize::MAX))
            })
            .collect::<Result<Vec<_>, PolyError>>()?;
        for (m, _) in &self.terms {
            for (v, _) in m.iter() {
                if map[v] == usize::MAX {
                    return Err(PolyError::UnknownVariable(self.ctx.name(v).to_string()));
                }
            }
        }
        Ok(self.embed(target, &map))
    }

    /// Substitutes `images[i]` (a polynomial in `target`) for variable `i`.
    /// A `None` image keeps the variable, mapped by name into `target`.
    pub fn substitute(
        &self,
        target: &Arc<VariableContext>,
        images: &[Option<MPoly>],
    ) -> Result<MPoly, PolyError> {
        let mut cache: HashMap<(usize, i32), MPoly> = HashMap::new();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (v, e) in m.iter() {
                let factor = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let base = match images.get(v).and_then(|x| x.as_ref()) {
                            Some(img) => img.clone(),
                            None => {
                                let t = target.require(self.ctx.name(v))?;
                                MPoly::var(target, t)
                            }
                        };
                        let p = base.pow(e)?;
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                term = term.checked_mul(&factor)?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Exact division by `lead_coeff * var + rest` where `rest` does not
    /// involve `var`. Fails when the division leaves a remainder.
    pub fn div_exact_linear(
        &self,
        var: usize,
        lead_coeff: &Rational,
        rest: &MPoly,
    ) -> Result<MPoly, PolyError> {
        if lead_coeff.is_zero() || rest.involves(var) {
            return Err(PolyError::NonExactDivision);
        }
        if self.min_exponent(var).is_some_and(|e| e < 0) {
            return Err(PolyError::NonExactDivision);
        }
        // Long division in `var`, top degree down.
        let mut rem = self.split_by(var);
        let mut quotient = MPoly::zero(&self.ctx);
        let inv = Rational::one() / lead_coeff;
        while let Some((&deg, _)) = rem.iter().next_back() {
            let top = rem.remove(&deg).unwrap();
            if top.is_zero() {
                continue;
            }
            if deg == 0 {
                return Err(PolyError::NonExactDivision);
            }
            let q = top.scale(&inv);
            let mono = Monomial::var(var, deg - 1);
            quotient = &quotient + &q.shift(&mono);
            let sub = &q * rest;
            let slot = rem
                .entry(deg - 1)
                .or_insert_with(|| MPoly::zero(&self.ctx));
            *slot = &*slot - &sub;
            if slot.is_zero() {
                rem.remove(&(deg - 1));
            }
        }
        Ok(quotient)
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ctx: &VariableContext, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, e) in m.iter() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(ctx.name(v))?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Formats a monomial with the names of `ctx`.
pub fn monomial_string(ctx: &VariableContext, m: &Monomial) -> String {
    struct D<'a>(&'a VariableContext, &'a Monomial);
    impl fmt::Display for D<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.1.is_one() {
                f.write_str("1")
            } else {
                write_monomial(f, self.0, self.1)
            }
        }
    }
    D(ctx, m).to_string()
}

/// Canonical text: `3*L^2 + 2*L*c1 + c2`, rationals as `p/q`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.ctx, m)?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            /// Panics if the operands live in different contexts.
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$checked(rhs).expect("polynomial context mismatch")
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ctx() -> Arc<VariableContext> {
        VariableContext::builder()
            .residue("z1")
            .residue("z2")
            .geometry("L", 1)
            .geometry("c1", 1)
            .geometry("c2", 2)
            .build()
            .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx();
        let z = MPoly::named(&c, "z1");
        let one = MPoly::one(&c);
        let p = &(&z + &one) * &(&z - &one);
        assert_eq!(p.to_string(), "z1^2 - 1");
    }

    #[test]
    fn adding_zero_is_identity() {
        let c = ctx();
        let p = MPoly::named(&c, "z1") + MPoly::integer(&c, 3);
        assert_eq!(&p + &MPoly::zero(&c), p);
    }

    #[test]
    fn rational_coefficients_are_exact() {
        let c = ctx();
        let a = MPoly::named(&c, "z1").scale(&rat(1, 2));
        let b = MPoly::named(&c, "z2").scale(&rat(2, 3));
        assert_eq!((&a * &b).to_string(), "1/3*z1*z2");
    }

    #[test]
    fn mismatched_contexts_are_rejected() {
        let a = MPoly::named(&ctx(), "z1");
        let other = VariableContext::block(1);
        let b = MPoly::named(&other, "z1");
        assert_eq!(a.checked_add(&b).unwrap_err(), PolyError::ContextMismatch);
        assert_eq!(a.checked_mul(&b).unwrap_err(), PolyError::ContextMismatch);
    }

    #[test]
    fn coefficient_extraction() {
        let c = ctx();
        let z1 = c.index_of("z1").unwrap();
        let p: MPoly = "z1^2*z2 + z2".parse_in(&c);
        assert_eq!(p.coefficient_of(z1, 2).to_string(), "z2");
        let q: MPoly = "z1^-1*L".parse_in(&c);
        assert_eq!(q.coefficient_of(z1, -1).to_string(), "L");
        let r: MPoly = "z1".parse_in(&c);
        assert!(r.coefficient_of(z1, 5).is_zero());
    }

    #[test]
    fn grading_truncates_products() {
        let c = ctx().with_grading(Some(crate::poly::GradingSpec { max_degree: 2 }));
        let l = MPoly::named(&c, "L");
        let c2 = MPoly::named(&c, "c2");
        assert!((&l * &c2).is_zero());
        assert_eq!((&l * &l).to_string(), "L^2");
    }

    #[test]
    fn exact_linear_division() {
        let c = ctx();
        let z1 = c.index_of("z1").unwrap();
        let p: MPoly = "z1^2 - z2^2".parse_in(&c);
        let rest: MPoly = "-z2".parse_in(&c);
        let q = p.div_exact_linear(z1, &rat(1, 1), &rest).unwrap();
        assert_eq!(q.to_string(), "z1 + z2");
        let bad: MPoly = "z1^2 + 1".parse_in(&c);
        assert!(bad.div_exact_linear(z1, &rat(1, 1), &rest).is_err());
    }

    trait ParseIn {
        fn parse_in(self, ctx: &Arc<VariableContext>) -> MPoly;
    }
    impl ParseIn for &str {
        fn parse_in(self, ctx: &Arc<VariableContext>) -> MPoly {
            MPoly::parse(ctx, self).unwrap()
        }
    }
}
