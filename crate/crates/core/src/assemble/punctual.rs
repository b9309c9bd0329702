use num_traits::One;

use super::block::{build_problem, BlockShape};
use super::{AssembleError, Assembled};
use crate::chern::{BundleModel, ChernPoly, SurfaceModel};
use crate::diagram::{DiagramND, DimensionVector};
use crate::poly::{MPoly, Rational};

/// A local algebra `A` of dimension `k` with a filtration on its nilpotent
/// part and the dual `ePD[Q(A) ⊂ Alg_d(N_•)]` as a polynomial in
/// `z1..z{k−1}` (1 when absent).
#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub k: usize,
    pub filtration: DimensionVector,
    pub epd: Option<MPoly>,
    pub diagram: Option<DiagramND>,
    /// Residue variable names; `z1..z{k−1}` when absent.
    pub var_names: Option<Vec<String>>,
    /// Rational factor in front of the integrand.
    pub prefactor: Rational,
}

impl AlgebraSpec {
    pub fn new(k: usize, filtration: DimensionVector) -> Self {
        AlgebraSpec {
            k,
            filtration,
            epd: None,
            diagram: None,
            var_names: None,
            prefactor: Rational::one(),
        }
    }

    /// `ℂ` itself: one point, no residue variables.
    pub fn trivial(dim: usize) -> Self {
        let mut a = Self::new(1, DimensionVector::new(vec![]));
        a.diagram = Some(DiagramND::point(dim.max(1)));
        a
    }

    /// Monomial algebra of a diagram with its canonical filtration
    /// `N_i = 𝔪ⁱ/I`. Two-dimensional diagrams name their variables after
    /// the boxes (`z10`, `z01`, …) in filtration order.
    pub fn from_diagram(diagram: &DiagramND) -> Self {
        let mut a = Self::new(diagram.len(), DimensionVector::canonical(diagram));
        let boxes = diagram.nilpotent_boxes();
        if diagram.dim() == 2 && boxes.iter().all(|b| b[0] < 10 && b[1] < 10) {
            a.var_names = Some(boxes.iter().map(|b| format!("z{}{}", b[0], b[1])).collect());
        }
        a.diagram = Some(diagram.clone());
        a
    }

    pub fn with_epd(mut self, epd: MPoly) -> Self {
        self.epd = Some(epd);
        self
    }

    pub fn with_prefactor(mut self, q: Rational) -> Self {
        self.prefactor = q;
        self
    }

    pub fn with_filtration(mut self, d: DimensionVector) -> Self {
        self.filtration = d;
        self
    }

    pub fn names(&self) -> Vec<String> {
        match &self.var_names {
            Some(n) => n.clone(),
            None => (1..self.k).map(|i| format!("z{i}")).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 1
    }

    /// Morin algebras `ℂ[t]/tᵏ`: a single row, or `k ≤ 2`.
    pub fn is_morin(&self) -> bool {
        if self.k <= 2 {
            return true;
        }
        match &self.diagram {
            Some(d) => {
                let r = d.lengths();
                r.iter().filter(|&&x| x > 0).count() == 1
            }
            None => false,
        }
    }

    pub fn validate(&self) -> Result<(), AssembleError> {
        if self.k == 0 || self.filtration.total() + 1 != self.k {
            return Err(AssembleError::WeightInconsistency {
                total: self.filtration.total(),
                k: self.k,
            });
        }
        if let Some(n) = &self.var_names {
            if n.len() + 1 != self.k {
                return Err(AssembleError::InvalidSpec(format!(
                    "{} variable names for an algebra of dimension {}",
                    n.len(),
                    self.k
                )));
            }
        }
        if let Some(e) = &self.epd {
            if !e.is_residue_homogeneous() {
                return Err(AssembleError::InhomogeneousEpd(e.to_string()));
            }
        }
        Ok(())
    }

    pub(crate) fn block_shape(&self, names: Vec<String>, copy: usize, power: i32) -> BlockShape {
        let mut b = BlockShape::new(names, self.filtration.weight_map(), copy, power);
        b.prefactor = self.prefactor.clone();
        b.numerator_extras.extend(self.epd.clone());
        b
    }
}

/// Integrand over `Hilb^A(X)`:
///
/// `Π_{w(i)≤w(j), i≠j}(z_i − z_j) · ePD · Φ(F(z)) / (Π_{w(i)+w(j)≤w(m)}(z_i+z_j−z_m) · (z_1⋯z_{k−1})ⁿ) · Π s_X(1/z_i)`
///
/// with `k − 1` variables in filtration order.
pub fn assemble_punctual(
    a: &AlgebraSpec,
    bundle: &BundleModel,
    surface: &SurfaceModel,
    phi: &ChernPoly,
) -> Result<Assembled, AssembleError> {
    a.validate()?;
    let shape = a.block_shape(a.names(), 0, surface.dim() as i32);
    let mut out = build_problem(&[shape], bundle, surface, phi, 1, true)?;
    if phi.degree().is_none() {
        out.warnings.push(format!("Chern polynomial {phi} is not homogeneous"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::structural_summary;

    fn surface_line() -> (BundleModel, SurfaceModel) {
        (BundleModel::line("L"), SurfaceModel::generic_surface())
    }

    #[test]
    fn one_variable_has_no_pair_sums() {
        let (f, x) = surface_line();
        let a = AlgebraSpec::new(2, DimensionVector::new(vec![1]));
        let p = assemble_punctual(&a, &f, &x, &ChernPoly::class(2)).unwrap();
        let s = structural_summary(&p.problem);
        assert_eq!(s.num_vars, 1);
        assert!(s.denominators.is_empty());
        assert_eq!(s.monomial_denominator, vec![2]);
        assert_eq!(s.segre_factors, 1);
    }

    #[test]
    fn pair_sum_factors_for_unit_weights() {
        let (f, x) = surface_line();
        let a = AlgebraSpec::new(4, DimensionVector::ones(3));
        let p = assemble_punctual(&a, &f, &x, &ChernPoly::class(2)).unwrap();
        let s = structural_summary(&p.problem);
        let mut expect = vec!["(2*z1 - z2)", "(2*z1 - z3)", "(z1 + z2 - z3)"];
        expect.sort();
        let got: Vec<&str> = s.denominators.iter().map(|x| x.as_str()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn inconsistent_filtration_is_rejected() {
        let (f, x) = surface_line();
        let a = AlgebraSpec::new(4, DimensionVector::new(vec![1, 1]));
        assert!(matches!(
            assemble_punctual(&a, &f, &x, &ChernPoly::class(2)),
            Err(AssembleError::WeightInconsistency { total: 2, k: 4 })
        ));
    }

    #[test]
    fn goettsche_algebra_gives_the_one_node_problem() {
        let (f, x) = surface_line();
        let g = DiagramND::from_partition(&[2, 1]).unwrap();
        let a = AlgebraSpec::from_diagram(&g).with_prefactor(crate::poly::rat(1, 2));
        let p = assemble_punctual(&a, &f, &x, &ChernPoly::class(2)).unwrap();
        assert_eq!(p.blocks, vec![vec!["z10".to_string(), "z01".to_string()]]);
        let s = structural_summary(&p.problem);
        assert!(s.denominators.is_empty());
        assert_eq!(s.monomial_denominator, vec![2, 2]);
        assert_eq!(s.segre_factors, 2);
    }
}
