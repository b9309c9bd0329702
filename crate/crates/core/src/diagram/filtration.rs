use super::{DiagramError, DiagramND};

/// Dimension vector `(d_1..d_m)` of a filtration on the nilpotent part of
/// an algebra; `Σ d_j = k − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimensionVector {
    entries: Vec<u32>,
}

impl DimensionVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimensionVector { entries }
    }

    /// `(1,…,1)` of length `len`: every variable its own weight.
    pub fn ones(len: usize) -> Self {
        DimensionVector { entries: vec![1; len] }
    }

    /// The canonical filtration `N_i = 𝔪ⁱ/I` of a monomial algebra:
    /// `d_j` counts the boxes of total degree `j`.
    pub fn canonical(diagram: &DiagramND) -> Self {
        let mut entries: Vec<u32> = Vec::new();
        for b in diagram.boxes() {
            let deg: u32 = b.iter().sum();
            if deg == 0 {
                continue;
            }
            if entries.len() < deg as usize {
                entries.resize(deg as usize, 0);
            }
            entries[deg as usize - 1] += 1;
        }
        DimensionVector { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `k − 1`, the number of residue variables.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|&d| d as usize).sum()
    }

    /// `w(i) = j` for `d_1+…+d_{j−1} < i ≤ d_1+…+d_j`, listed for
    /// `i = 1..k−1`.
    pub fn weight_map(&self) -> Vec<u32> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(j, &d)| std::iter::repeat_n(j as u32 + 1, d as usize))
            .collect()
    }

    pub fn check_total(&self, k: usize) -> Result<(), DiagramError> {
        if self.total() + 1 != k {
            return Err(DiagramError::FiltrationMismatch {
                total: self.total(),
                k,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(DimensionVector::new(vec![1, 1, 1]).weight_map(), vec![1, 2, 3]);
        assert_eq!(DimensionVector::new(vec![2, 1]).weight_map(), vec![1, 1, 2]);
        assert_eq!(DimensionVector::new(vec![]).weight_map(), Vec::<u32>::new());
    }

    #[test]
    fn canonical_filtrations() {
        let g = DiagramND::from_partition(&[2, 1]).unwrap();
        assert_eq!(DimensionVector::canonical(&g).entries(), &[2]);
        let g2 = DiagramND::from_partition(&[4, 2]).unwrap();
        assert_eq!(DimensionVector::canonical(&g2).entries(), &[2, 2, 1]);
        let row = DiagramND::row(2, 4).unwrap();
        assert_eq!(DimensionVector::canonical(&row), DimensionVector::ones(3));
        assert!(DimensionVector::canonical(&g2).check_total(6).is_ok());
        assert!(DimensionVector::canonical(&g2).check_total(5).is_err());
    }
}
