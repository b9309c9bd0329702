use std::collections::HashMap;
use std::sync::Arc;

use super::PolyError;

/// Graded symbol attached to the geometry side of a context (Chern roots,
/// Chern classes of the base, equivariant weights).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometrySymbol {
    pub name: String,
    pub degree: u32,
    /// Which copy of the base variety the symbol lives on. Truncation is
    /// applied per group.
    pub group: u32,
}

/// Eager truncation rule for geometry symbols: a term whose degree in any
/// group exceeds `max_degree` is dropped during multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradingSpec {
    pub max_degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarInfo {
    Residue,
    Geometry { degree: u32, group: u32 },
}

/// Ordered set of residue variables (outermost last) plus graded geometry
/// symbols. Every polynomial carries the context it was built in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableContext {
    residue_vars: Vec<String>,
    weights: Option<Vec<u32>>,
    geometry: Vec<GeometrySymbol>,
    grading: Option<GradingSpec>,
    info: Vec<VarInfo>,
    index: HashMap<String, usize>,
}

impl VariableContext {
    pub fn builder() -> ContextBuilder {
        ContextBuilder::default()
    }

    /// Context with residue variables `z1..z{m}` and nothing else.
    pub fn block(m: usize) -> Arc<Self> {
        let mut b = Self::builder();
        for i in 1..=m {
            b = b.residue(format!("z{i}"));
        }
        b.build().expect("distinct generated names")
    }

    pub fn num_residue(&self) -> usize {
        self.residue_vars.len()
    }

    pub fn num_vars(&self) -> usize {
        self.info.len()
    }

    pub fn residue_vars(&self) -> &[String] {
        &self.residue_vars
    }

    pub fn geometry_symbols(&self) -> &[GeometrySymbol] {
        &self.geometry
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn grading(&self) -> Option<GradingSpec> {
        self.grading
    }

    pub fn is_residue(&self, var: usize) -> bool {
        matches!(self.info[var], VarInfo::Residue)
    }

    pub(crate) fn var_info(&self, var: usize) -> VarInfo {
        self.info[var]
    }

    /// Position-independent variable name; residue variables come first.
    pub fn name(&self, var: usize) -> &str {
        if var < self.residue_vars.len() {
            &self.residue_vars[var]
        } else {
            &self.geometry[var - self.residue_vars.len()].name
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// Index of a geometry symbol by name.
    pub fn geometry_index(&self, name: &str) -> Option<usize> {
        self.index_of(name).filter(|&i| !self.is_residue(i))
    }

    /// Truncation group of a geometry symbol; `None` for residue variables.
    pub fn group_of(&self, var: usize) -> Option<u32> {
        match self.info[var] {
            VarInfo::Geometry { group, .. } => Some(group),
            VarInfo::Residue => None,
        }
    }

    /// Grading degree of a geometry symbol; 0 for residue variables.
    pub fn degree_of(&self, var: usize) -> u32 {
        match self.info[var] {
            VarInfo::Geometry { degree, .. } => degree,
            VarInfo::Residue => 0,
        }
    }

    pub fn num_groups(&self) -> u32 {
        self.geometry.iter().map(|g| g.group + 1).max().unwrap_or(0)
    }

    /// Copy of this context with a different truncation rule.
    pub fn with_grading(&self, grading: Option<GradingSpec>) -> Arc<Self> {
        let mut c = self.clone();
        c.grading = grading;
        Arc::new(c)
    }
}

#[derive(Debug, Default)]
pub struct ContextBuilder {
    residue: Vec<(String, Option<u32>)>,
    geometry: Vec<GeometrySymbol>,
    grading: Option<GradingSpec>,
}

impl ContextBuilder {
    pub fn residue(mut self, name: impl Into<String>) -> Self {
        self.residue.push((name.into(), None));
        self
    }

    pub fn weighted(mut self, name: impl Into<String>, weight: u32) -> Self {
        self.residue.push((name.into(), Some(weight)));
        self
    }

    pub fn geometry(self, name: impl Into<String>, degree: u32) -> Self {
        self.geometry_in_group(name, degree, 0)
    }

    pub fn geometry_in_group(mut self, name: impl Into<String>, degree: u32, group: u32) -> Self {
        self.geometry.push(GeometrySymbol {
            name: name.into(),
            degree,
            group,
        });
        self
    }

    pub fn grading(mut self, max_degree: u32) -> Self {
        self.grading = Some(GradingSpec { max_degree });
        self
    }

    pub fn build(self) -> Result<Arc<VariableContext>, PolyError> {
        let mut index = HashMap::new();
        let mut info = Vec::new();
        let mut names = Vec::new();
        for (name, _) in &self.residue {
            names.push(name.clone());
            info.push(VarInfo::Residue);
        }
        for g in &self.geometry {
            names.push(g.name.clone());
            info.push(VarInfo::Geometry {
                degree: g.degree,
                group: g.group,
            });
        }
        if names.len() > u16::MAX as usize {
            return Err(PolyError::TooManyVariables(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(PolyError::InvalidName(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        let any_weight = self.residue.iter().any(|(_, w)| w.is_some());
        let weights = if any_weight {
            let ws: Option<Vec<u32>> = self.residue.iter().map(|(_, w)| *w).collect();
            let ws = ws.ok_or(PolyError::PartialWeights)?;
            if let Some(pos) = ws.windows(2).position(|p| p[0] > p[1]) {
                return Err(PolyError::NonMonotoneWeights {
                    position: pos + 1,
                });
            }
            Some(ws)
        } else {
            None
        };
        Ok(Arc::new(VariableContext {
            residue_vars: self.residue.into_iter().map(|(n, _)| n).collect(),
            weights,
            geometry: self.geometry,
            grading: self.grading,
            info,
            index,
        }))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
