//! Chamber decomposition of the lattice N^d by ordered set partitions.
//!
//! A chamber is an ordered set partition (B_1, ..., B_s) of the variable set:
//! the region where all variables in one block are equal and block values
//! strictly increase. Substituting the block value `v_q = m_1 + ... + m_q`
//! with gaps `m_p >= 1` covers N^d exactly once over all chambers.

/// One chamber: the ordered blocks of equal variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    blocks: Vec<Vec<usize>>,
}

impl Chamber {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of gap variables.
    pub fn gap_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of a variable.
    pub fn block_of(&self, var: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&var))
    }

    /// The substitution `n_var = m_1 + ... + m_{block(var)+1}` as the list of
    /// gap indices entering the sum.
    pub fn substitution(&self, var: usize) -> Vec<usize> {
        match self.block_of(var) {
            Some(b) => (0..=b).collect(),
            None => Vec::new(),
        }
    }

    /// Does the lattice point lie in this chamber?
    pub fn contains(&self, point: &[i64]) -> bool {
        let mut last: Option<i64> = None;
        for block in &self.blocks {
            let v = point[block[0]];
            if block.iter().any(|&i| point[i] != v) {
                return false;
            }
            if let Some(prev) = last {
                if v <= prev {
                    return false;
                }
            }
            last = Some(v);
        }
        true
    }
}

/// All ordered set partitions of {0, ..., d-1}.
pub fn chamber_decompose(d: usize) -> Vec<Chamber> {
    assert!(d >= 1);
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    place(0, d, &mut blocks, &mut out);
    out
}

fn place(k: usize, d: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Chamber>) {
    if k == d {
        out.push(Chamber {
            blocks: blocks.clone(),
        });
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(k);
        place(k + 1, d, blocks, out);
        blocks[b].pop();
    }
    for pos in 0..=blocks.len() {
        blocks.insert(pos, vec![k]);
        place(k + 1, d, blocks, out);
        blocks.remove(pos);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fubini_counts() {
        assert_eq!(chamber_decompose(1).len(), 1);
        assert_eq!(chamber_decompose(2).len(), 3);
        assert_eq!(chamber_decompose(3).len(), 13);
        assert_eq!(chamber_decompose(4).len(), 75);
    }

    #[test]
    fn partition_of_lattice() {
        // Every point in [1..6]^3 lies in exactly one chamber.
        let chambers = chamber_decompose(3);
        for a in 1..=6i64 {
            for b in 1..=6i64 {
                for c in 1..=6i64 {
                    let p = [a, b, c];
                    let hits = chambers.iter().filter(|ch| ch.contains(&p)).count();
                    assert_eq!(hits, 1, "point {:?}", p);
                }
            }
        }
    }

    #[test]
    fn substitution_prefix_sums() {
        let chambers = chamber_decompose(2);
        // the tie chamber has one block, both vars -> m_1
        let tie = chambers
            .iter()
            .find(|c| c.blocks().len() == 1)
            .unwrap();
        assert_eq!(tie.substitution(0), vec![0]);
        assert_eq!(tie.substitution(1), vec![0]);
    }
}
