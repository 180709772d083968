//! Bitset adjacency shared by the clique, clustering and scan code.

#[derive(Debug, Clone)]
pub(crate) struct BitAdjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitAdjacency {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = Self::new(n);
        for (i, j) in edges {
            adj.insert(i, j);
        }
        adj
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of common neighbours of `i` and `j`.
    pub fn common_count(&self, i: usize, j: usize) -> usize {
        self.row(i).iter().zip(self.row(j)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Calls `f` with every common neighbour of `i` and `j`.
    pub fn for_each_common(&self, i: usize, j: usize, mut f: impl FnMut(usize)) {
        for (w, (a, b)) in self.row(i).iter().zip(self.row(j)).enumerate() {
            let mut m = a & b;
            while m != 0 {
                f(w * 64 + m.trailing_zeros() as usize);
                m &= m - 1;
            }
        }
    }

    /// Number of edges among the neighbours of `i`.
    pub fn neighbour_links(&self, i: usize) -> usize {
        let mut twice = 0;
        for_each_bit(self.row(i), |j| twice += self.common_count(i, j));
        twice / 2
    }
}

pub(crate) fn for_each_bit(set: &[u64], mut f: impl FnMut(usize)) {
    for (w, &word) in set.iter().enumerate() {
        let mut m = word;
        while m != 0 {
            f(w * 64 + m.trailing_zeros() as usize);
            m &= m - 1;
        }
    }
}

/// Local clustering coefficient of a node with `degree` neighbours and
/// `links` edges among them. Degree-1 nodes contribute zero.
pub(crate) fn local_clustering(degree: usize, links: usize) -> f64 {
    if degree < 2 {
        0.0
    } else {
        (2 * links) as f64 / (degree * (degree - 1)) as f64
    }
}
