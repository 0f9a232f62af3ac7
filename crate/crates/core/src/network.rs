//! Single-calculus constraint networks as dense relation matrices.

use crate::algebra::{Calculus, Relation};
use crate::error::Error;

/// An n-variable constraint network over one calculus. The diagonal is the
/// identity relation and off-diagonal pairs stay converse-consistent
/// through [`Network::set`].
#[derive(Clone)]
pub struct Network {
    calc: &'static Calculus,
    n: usize,
    rels: Vec<Relation>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.calc, other.calc) && self.n == other.n && self.rels == other.rels
    }
}

impl Eq for Network {}

impl Network {
    /// All off-diagonal constraints universal.
    pub fn universal(calc: &'static Calculus, n: usize) -> Network {
        assert!(n > 0);
        let mut rels = vec![calc.universal(); n * n];
        for i in 0..n {
            rels[i * n + i] = calc.identity();
        }
        Network { calc, n, rels }
    }

    pub fn calculus(&self) -> &'static Calculus {
        self.calc
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Relation {
        self.rels[i * self.n + j]
    }

    /// Set a pair and its converse. Diagonal writes are rejected.
    pub fn set(&mut self, i: usize, j: usize, rel: Relation) {
        assert_ne!(i, j, "diagonal is fixed to the identity");
        self.rels[i * self.n + j] = rel;
        self.rels[j * self.n + i] = rel.converse();
    }

    pub fn is_basic(&self) -> bool {
        self.pairs().all(|(i, j)| self.get(i, j).is_basic())
    }

    pub fn has_empty_entry(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(i, j)| self.get(i, j).is_empty())
    }

    /// Ordered pairs (i, j) with i < j.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
    }

    /// Wraps an externally built matrix; checks shape, diagonal, and
    /// converse consistency.
    pub fn from_matrix(calc: &'static Calculus, n: usize, rels: Vec<Relation>) -> Result<Network, Error> {
        if rels.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: rels.len() });
        }
        let net = Network { calc, n, rels };
        for i in 0..n {
            if net.get(i, i) != calc.identity() {
                return Err(Error::EmptyRelation("diagonal must be the identity"));
            }
            for j in 0..n {
                if net.get(j, i) != net.get(i, j).converse() {
                    return Err(Error::EmptyRelation("matrix is not converse-consistent"));
                }
            }
        }
        Ok(net)
    }
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Network({}, n={})", self.calc.name(), self.n)?;
        for (i, j) in self.pairs() {
            writeln!(f, "  ({i},{j}): {}", self.get(i, j).token_string())?;
        }
        Ok(())
    }
}
