//! Block decomposition of sparse Gram matrices: rows and columns joined by
//! a nonzero entry lie in the same block.

/// A square-or-not block: row and column indices, each sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Block {
    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the bipartite support graph of an `n × n`
/// matrix, ordered by smallest row index (column-only blocks last).
pub fn components(n: usize, nonzero: impl Fn(usize, usize) -> bool) -> Vec<Block> {
    let mut parent: Vec<usize> = (0..2 * n).collect();
    for i in 0..n {
        for j in 0..n {
            if nonzero(i, j) {
                let a = find(&mut parent, i);
                let b = find(&mut parent, n + j);
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut slot = vec![usize::MAX; 2 * n];
    for x in 0..2 * n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            order.push(r);
            blocks.push(Block {
                rows: Vec::new(),
                cols: Vec::new(),
            });
        }
        let b = &mut blocks[slot[r]];
        if x < n {
            b.rows.push(x);
        } else {
            b.cols.push(x - n);
        }
    }
    blocks
}

/// Sign of the permutation listing `0..n` in the given order.
pub fn permutation_sign(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Whether `det M = -Π det(blocks)` for the given (all square) blocks,
/// each taken with rows and columns in increasing order.
pub fn block_sign(blocks: &[Block]) -> bool {
    let rows: Vec<usize> = blocks.iter().flat_map(|b| b.rows.iter().copied()).collect();
    let cols: Vec<usize> = blocks.iter().flat_map(|b| b.cols.iter().copied()).collect();
    permutation_sign(&rows) != permutation_sign(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_permuted_diagonal() {
        // [[0, a, 0], [b, 0, 0], [0, 0, c]]
        let nz = |i: usize, j: usize| matches!((i, j), (0, 1) | (1, 0) | (2, 2));
        let b = components(3, nz);
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(Block::is_square));
        // det = -abc
        assert!(block_sign(&b));
    }

    #[test]
    fn non_square_component() {
        let nz = |i: usize, j: usize| j == 0 && i < 2;
        let b = components(2, nz);
        assert!(b.iter().any(|b| !b.is_square()));
    }

    #[test]
    fn transposition_sign() {
        assert!(permutation_sign(&[1, 0, 2]));
        assert!(!permutation_sign(&[1, 2, 0]));
        assert!(!permutation_sign(&[0, 1, 2]));
    }
}
