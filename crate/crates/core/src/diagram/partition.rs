use std::fmt;

use num_bigint::BigInt;

use super::DiagramError;

/// Partition of `{1..s}` into non-empty blocks. Blocks are sorted
/// internally and ordered by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self, DiagramError> {
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(DiagramError::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &x)| x != i + 1) {
            return Err(DiagramError::InvalidPartition(format!(
                "blocks {blocks:?} do not cover 1..{} exactly once",
                all.len()
            )));
        }
        Ok(SetPartition { blocks })
    }

    pub fn discrete(s: usize) -> Self {
        SetPartition {
            blocks: (1..=s).map(|i| vec![i]).collect(),
        }
    }

    pub fn single_block(s: usize) -> Self {
        SetPartition {
            blocks: if s == 0 { vec![] } else { vec![(1..=s).collect()] },
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Size of the underlying set.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block sizes in block order.
    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bs: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let xs: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", xs.join(","))
            })
            .collect();
        write!(f, "{{{}}}", bs.join(","))
    }
}

/// All partitions of `{1..s}`, in lexicographic order of their restricted
/// growth strings (so the single block comes first, the discrete
/// partition last).
pub fn set_partitions(s: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if s == 0 {
        out.push(SetPartition { blocks: vec![] });
        return out;
    }
    let mut rgs = vec![0usize; s];
    loop {
        let nb = rgs.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nb];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        out.push(SetPartition { blocks });
        // Next restricted growth string: bump the last position that may
        // grow, reset everything after it.
        let mut i = s;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = *rgs[..i].iter().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in rgs[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// `(−1)^{|β|−1} (|β|−1)!`, the Möbius coefficient of the partition lattice.
pub fn sieve_coefficient(beta: &SetPartition) -> BigInt {
    let n = beta.num_blocks();
    assert!(n > 0, "sieve coefficient of the empty partition");
    let mut f = BigInt::from(1);
    for i in 1..n {
        f *= i;
    }
    if n.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

/// `μ|α`: block `i` of the result is the union of the `μ`-blocks indexed by
/// `α`'s block `i`.
pub fn merge_partition(mu: &SetPartition, alpha: &SetPartition) -> Result<SetPartition, DiagramError> {
    if mu.num_blocks() != alpha.size() {
        return Err(DiagramError::BlockCountMismatch {
            blocks: mu.num_blocks(),
            expected: alpha.size(),
        });
    }
    let merged = alpha
        .blocks()
        .iter()
        .map(|b| b.iter().flat_map(|&j| mu.blocks[j - 1].iter().copied()).collect())
        .collect();
    SetPartition::new(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(blocks: &[&[usize]]) -> SetPartition {
        SetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=7).map(|s| set_partitions(s).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn enumeration_order_and_distinctness() {
        let ps = set_partitions(3);
        assert_eq!(ps[0], SetPartition::single_block(3));
        assert_eq!(*ps.last().unwrap(), SetPartition::discrete(3));
        let mut sorted = ps.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
        assert_eq!(ps[1].to_string(), "{{1,2},{3}}");
    }

    #[test]
    fn sieve_values() {
        assert_eq!(sieve_coefficient(&SetPartition::single_block(4)), BigInt::from(1));
        assert_eq!(sieve_coefficient(&SetPartition::discrete(2)), BigInt::from(-1));
        assert_eq!(sieve_coefficient(&SetPartition::discrete(3)), BigInt::from(2));
    }

    #[test]
    fn merging() {
        let mu = sp(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(
            merge_partition(&mu, &SetPartition::single_block(2)).unwrap(),
            SetPartition::single_block(6)
        );
        assert_eq!(merge_partition(&mu, &SetPartition::discrete(2)).unwrap(), mu);
        let d3 = SetPartition::discrete(3);
        assert_eq!(merge_partition(&d3, &sp(&[&[1, 3], &[2]])).unwrap(), sp(&[&[1, 3], &[2]]));
        assert!(merge_partition(&d3, &SetPartition::discrete(2)).is_err());
    }

    #[test]
    fn invalid_partitions() {
        assert!(SetPartition::new(vec![vec![1], vec![1, 2]]).is_err());
        assert!(SetPartition::new(vec![vec![1], vec![3]]).is_err());
        assert!(SetPartition::new(vec![vec![], vec![1]]).is_err());
    }
}
