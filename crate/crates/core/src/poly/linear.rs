use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::monomial::Monomial;
use super::mpoly::MPoly;
use super::{PolyError, Rational, VariableContext};

/// Affine linear form `Σ aᵢ zᵢ + const` raised to a positive multiplicity,
/// as it appears in a residue denominator. The constant part may involve
/// geometry symbols (equivariant weights λᵢ, Chern roots).
#[derive(Clone, PartialEq, Eq)]
pub struct LinearForm {
    z_coeffs: BTreeMap<usize, Rational>,
    const_part: MPoly,
    multiplicity: u32,
}

impl LinearForm {
    pub fn new(
        z_coeffs: BTreeMap<usize, Rational>,
        const_part: MPoly,
        multiplicity: u32,
    ) -> Result<Self, PolyError> {
        let ctx = const_part.ctx().clone();
        if multiplicity == 0 {
            return Err(PolyError::ZeroMultiplicity);
        }
        if !const_part.is_geometry_only() {
            return Err(PolyError::NotLinear(const_part.to_string()));
        }
        if let Some(&v) = z_coeffs.keys().find(|&&v| v >= ctx.num_vars() || !ctx.is_residue(v)) {
            return Err(PolyError::NotLinear(format!("variable index {v} is not a residue variable")));
        }
        let z_coeffs: BTreeMap<_, _> = z_coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if z_coeffs.is_empty() && const_part.is_zero() {
            return Err(PolyError::ZeroForm);
        }
        Ok(LinearForm {
            z_coeffs,
            const_part,
            multiplicity,
        })
    }

    /// Reads a linear form off a polynomial: degree ≤ 1 in residue
    /// variables with rational residue coefficients.
    pub fn from_poly(p: &MPoly, multiplicity: u32) -> Result<Self, PolyError> {
        let ctx = p.ctx();
        let mut z = BTreeMap::new();
        let mut konst = Vec::new();
        for (m, c) in p.terms() {
            let res: Vec<_> = m.iter().filter(|(v, _)| ctx.is_residue(*v)).collect();
            match res.as_slice() {
                [] => konst.push((m.clone(), c.clone())),
                [(v, 1)] if m.iter().count() == 1 => {
                    z.insert(*v, c.clone());
                }
                _ => return Err(PolyError::NotLinear(p.to_string())),
            }
        }
        Self::new(z, MPoly::from_terms(ctx, konst), multiplicity)
    }

    pub fn parse(ctx: &Arc<VariableContext>, src: &str, multiplicity: u32) -> Result<Self, PolyError> {
        Self::from_poly(&MPoly::parse(ctx, src)?, multiplicity)
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        self.const_part.ctx()
    }

    pub fn z_coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.z_coeffs
    }

    pub fn const_part(&self) -> &MPoly {
        &self.const_part
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn with_multiplicity(&self, multiplicity: u32) -> Self {
        LinearForm {
            multiplicity: multiplicity.max(1),
            ..self.clone()
        }
    }

    /// Largest-ordered residue variable with a nonzero coefficient.
    pub fn leading_variable(&self) -> Option<usize> {
        self.z_coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.z_coeffs.values().next_back()
    }

    /// The form minus its leading term (the part expanded as a geometric
    /// series).
    pub fn lower_part(&self) -> MPoly {
        let lead = self.leading_variable();
        let ctx = self.ctx();
        let mut p = self.const_part.clone();
        for (&v, c) in &self.z_coeffs {
            if Some(v) != lead {
                p = &p + &MPoly::monomial(ctx, Monomial::var(v, 1), c.clone());
            }
        }
        p
    }

    /// A form with one residue term and no constant is just a scaled
    /// monomial.
    pub fn is_monomial(&self) -> bool {
        self.z_coeffs.len() == 1 && self.const_part.is_zero()
    }

    /// The form itself (multiplicity ignored) as a polynomial.
    pub fn to_poly(&self) -> MPoly {
        let ctx = self.ctx();
        self.z_coeffs.iter().fold(self.const_part.clone(), |acc, (&v, c)| {
            &acc + &MPoly::monomial(ctx, Monomial::var(v, 1), c.clone())
        })
    }

    /// Re-expresses the form in `target` (variable `i` goes to `map[i]`).
    pub fn embed(&self, target: &Arc<VariableContext>, map: &[usize]) -> Result<Self, PolyError> {
        Self::new(
            self.z_coeffs.iter().map(|(&v, c)| (map[v], c.clone())).collect(),
            self.const_part.embed(target, map),
            self.multiplicity,
        )
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_poly())?;
        if self.multiplicity != 1 {
            write!(f, "^{}", self.multiplicity)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm{self}")
    }
}
