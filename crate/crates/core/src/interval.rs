//! Interval Algebra over rational intervals.
//!
//! The composition table is not hand-written: it is derived by exhaustively
//! enumerating endpoint order types on a small integer grid, which realizes
//! every possible configuration of two chained interval pairs. Also houses
//! the 3- and 7-atom coarsenings, the relaxation map used by the approximate
//! solver, the canonical solution of basic networks, and the endpoint-shift
//! construction that turns a canonical solution into an arbitrarily precise
//! approximate one.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::algebra::{Calculus, Relation};
use crate::bits::Bits;
use crate::error::{Error, Inconsistent};
use crate::Rat;

/// Closed rational interval with strictly ordered endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Interval, Error> {
        if lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::DegenerateInterval)
        }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Interval {
        Interval::new(Rat::from_integer(lo.into()), Rat::from_integer(hi.into())).unwrap()
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn len(&self) -> Rat {
        &self.hi - &self.lo
    }
}

/// The 13 basic interval relations.
///
/// Variant order pairs converses symmetrically: converse(i) = 12 - i.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum IaBasic {
    B,
    M,
    O,
    S,
    D,
    F,
    Eq,
    Fi,
    Di,
    Si,
    Oi,
    Mi,
    Bi,
}

pub const IA_BASICS: [IaBasic; 13] = [
    IaBasic::B,
    IaBasic::M,
    IaBasic::O,
    IaBasic::S,
    IaBasic::D,
    IaBasic::F,
    IaBasic::Eq,
    IaBasic::Fi,
    IaBasic::Di,
    IaBasic::Si,
    IaBasic::Oi,
    IaBasic::Mi,
    IaBasic::Bi,
];

pub const IA_TOKENS: [&str; 13] = [
    "b", "m", "o", "s", "d", "f", "eq", "fi", "di", "si", "oi", "mi", "bi",
];

impl IaBasic {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> IaBasic {
        IA_BASICS[i]
    }

    pub fn token(self) -> &'static str {
        IA_TOKENS[self.index()]
    }

    pub fn from_token(tok: &str) -> Option<IaBasic> {
        IA_TOKENS.iter().position(|t| *t == tok).map(IaBasic::from_index)
    }

    pub fn converse(self) -> IaBasic {
        IaBasic::from_index(12 - self.index())
    }

    /// Collapse boundary-touching relations onto their open-overlap
    /// neighbors: m -> o, {s,f} -> d, {si,fi} -> di, mi -> oi; the seven
    /// remaining relations are fixed points.
    pub fn relax(self) -> IaBasic {
        match self {
            IaBasic::M => IaBasic::O,
            IaBasic::S | IaBasic::F => IaBasic::D,
            IaBasic::Si | IaBasic::Fi => IaBasic::Di,
            IaBasic::Mi => IaBasic::Oi,
            other => other,
        }
    }

    pub fn is_relax_fixed(self) -> bool {
        self.relax() == self
    }
}

/// The unique basic relation holding between two intervals (JEPD).
pub fn relation_of(x: &Interval, y: &Interval) -> IaBasic {
    relation_of_parts(&x.lo, &x.hi, &y.lo, &y.hi)
}

fn relation_of_parts<T: Ord>(xlo: &T, xhi: &T, ylo: &T, yhi: &T) -> IaBasic {
    use std::cmp::Ordering::*;
    match (xlo.cmp(ylo), xhi.cmp(yhi)) {
        (Equal, Equal) => IaBasic::Eq,
        (Equal, Less) => IaBasic::S,
        (Equal, Greater) => IaBasic::Si,
        (Less, Equal) => IaBasic::Fi,
        (Greater, Equal) => IaBasic::F,
        (Less, Less) => match xhi.cmp(ylo) {
            Less => IaBasic::B,
            Equal => IaBasic::M,
            Greater => IaBasic::O,
        },
        (Greater, Greater) => match xlo.cmp(yhi) {
            Greater => IaBasic::Bi,
            Equal => IaBasic::Mi,
            Less => IaBasic::Oi,
        },
        (Less, Greater) => IaBasic::Di,
        (Greater, Less) => IaBasic::D,
    }
}

fn relation_of_ints(x: (i32, i32), y: (i32, i32)) -> IaBasic {
    relation_of_parts(&x.0, &x.1, &y.0, &y.1)
}

/// Derived composition table: `table[a*13+b]` is the set of basic relations
/// observable between I and K when I a J and J b K. Computed once by
/// enumerating all interval triples on an 8-value grid, which covers every
/// order type of the six endpoints.
fn oracle_table() -> &'static [Bits; 169] {
    static TABLE: OnceLock<[Bits; 169]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [Bits::EMPTY; 169];
        let mut intervals = Vec::new();
        for lo in 0..8 {
            for hi in (lo + 1)..8 {
                intervals.push((lo, hi));
            }
        }
        for &i in &intervals {
            for &j in &intervals {
                let a = relation_of_ints(i, j).index();
                for &k in &intervals {
                    let b = relation_of_ints(j, k).index();
                    let c = relation_of_ints(i, k).index();
                    table[a * 13 + b].insert(c);
                }
            }
        }
        table
    })
}

/// The set of basic relations c admitting intervals I a J, J b K, I c K.
pub fn compose_oracle(a: IaBasic, b: IaBasic) -> Relation {
    ia_calculus().relation(oracle_table()[a.index() * 13 + b.index()])
}

/// The Interval Algebra calculus, built from the derived table.
pub fn ia_calculus() -> &'static Calculus {
    static IA: OnceLock<Calculus> = OnceLock::new();
    IA.get_or_init(|| {
        let converse: Vec<u16> = (0..13u16).map(|i| 12 - i).collect();
        let composition = oracle_table().to_vec();
        Calculus::new(
            "IA",
            IA_TOKENS.to_vec(),
            converse,
            composition,
            Bits::singleton(IaBasic::Eq.index()),
        )
    })
}

/// Coarsening granularity for the partitioned views of the basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Granularity {
    Three,
    Seven,
}

/// The atom of the 3- or 7-element partition containing `a`.
///
/// Three atoms: {b}, the 11 middle relations, {bi}. Seven atoms: {b},
/// {m,o}, {s,f,d}, {eq}, {si,fi,di}, {mi,oi}, {bi}.
pub fn coarsen(a: IaBasic, granularity: Granularity) -> Relation {
    let ia = ia_calculus();
    let indices: Vec<usize> = match granularity {
        Granularity::Three => match a {
            IaBasic::B => vec![IaBasic::B.index()],
            IaBasic::Bi => vec![IaBasic::Bi.index()],
            _ => (1..12).collect(),
        },
        Granularity::Seven => match a {
            IaBasic::B => vec![IaBasic::B.index()],
            IaBasic::Bi => vec![IaBasic::Bi.index()],
            IaBasic::Eq => vec![IaBasic::Eq.index()],
            IaBasic::M | IaBasic::O => vec![IaBasic::M.index(), IaBasic::O.index()],
            IaBasic::S | IaBasic::F | IaBasic::D => {
                vec![IaBasic::S.index(), IaBasic::D.index(), IaBasic::F.index()]
            }
            IaBasic::Si | IaBasic::Fi | IaBasic::Di => {
                vec![IaBasic::Si.index(), IaBasic::Fi.index(), IaBasic::Di.index()]
            }
            IaBasic::Mi | IaBasic::Oi => vec![IaBasic::Mi.index(), IaBasic::Oi.index()],
        },
    };
    ia.relation_of_indices(indices)
}

/// A basic (atomic) interval network: full matrix, identity diagonal,
/// converse-consistent by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicIaNetwork {
    n: usize,
    rels: Vec<IaBasic>,
}

impl BasicIaNetwork {
    pub fn new(n: usize) -> BasicIaNetwork {
        assert!(n > 0);
        let mut rels = vec![IaBasic::Eq; n * n];
        for i in 0..n {
            rels[i * n + i] = IaBasic::Eq;
        }
        // off-diagonal defaults are meaningless until set; keep Eq, callers
        // overwrite every pair or accept merged variables
        BasicIaNetwork { n, rels }
    }

    pub fn from_witness(intervals: &[Interval]) -> BasicIaNetwork {
        let n = intervals.len();
        let mut net = BasicIaNetwork::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                net.set(i, j, relation_of(&intervals[i], &intervals[j]));
            }
        }
        net
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> IaBasic {
        self.rels[i * self.n + j]
    }

    /// Sets the pair and its converse.
    pub fn set(&mut self, i: usize, j: usize, rel: IaBasic) {
        self.rels[i * self.n + j] = rel;
        self.rels[j * self.n + i] = rel.converse();
    }

    pub fn relaxed(&self) -> BasicIaNetwork {
        let mut out = self.clone();
        for r in out.rels.iter_mut() {
            *r = r.relax();
        }
        out
    }

    /// Triangle check: complete satisfiability test for atomic networks.
    fn check_triangles(&self) -> Result<(), Inconsistent> {
        let table = oracle_table();
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    let a = self.get(i, k).index();
                    let b = self.get(k, j).index();
                    let c = self.get(i, j).index();
                    if !table[a * 13 + b].contains(c) {
                        return Err(Inconsistent { i, j });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Representative instance of each basic relation with integer endpoints,
/// used to read endpoint orderings off the defining semantics.
const ENDPOINT_REPS: [((i32, i32), (i32, i32)); 13] = [
    ((0, 1), (2, 3)), // b
    ((0, 1), (1, 2)), // m
    ((0, 2), (1, 3)), // o
    ((0, 1), (0, 2)), // s
    ((1, 2), (0, 3)), // d
    ((1, 2), (0, 2)), // f
    ((0, 1), (0, 1)), // eq
    ((0, 2), (1, 2)), // fi
    ((0, 3), (1, 2)), // di
    ((0, 2), (0, 1)), // si
    ((1, 3), (0, 2)), // oi
    ((1, 2), (0, 1)), // mi
    ((2, 3), (0, 1)), // bi
];

#[cfg(test)]
fn endpoint_reps_are_exact() -> bool {
    IA_BASICS
        .iter()
        .enumerate()
        .all(|(i, &b)| relation_of_ints(ENDPOINT_REPS[i].0, ENDPOINT_REPS[i].1) == b)
}

/// Orderings of the four cross-interval endpoint pairs under a basic
/// relation: (lo-lo, lo-hi, hi-lo, hi-hi).
fn endpoint_orders(rel: IaBasic) -> [std::cmp::Ordering; 4] {
    let ((xl, xh), (yl, yh)) = ENDPOINT_REPS[rel.index()];
    [xl.cmp(&yl), xl.cmp(&yh), xh.cmp(&yl), xh.cmp(&yh)]
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Classes after merging variables related by eq, plus the class-level
/// network (which has no off-diagonal eq).
struct MergedNet {
    class_of: Vec<usize>,
    classes: BasicIaNetwork,
}

fn merge_eq(net: &BasicIaNetwork) -> Result<MergedNet, Inconsistent> {
    let n = net.num_vars();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if net.get(i, j) == IaBasic::Eq {
                uf.union(i, j);
            }
        }
    }
    let mut reps = Vec::new();
    let mut class_of = vec![0usize; n];
    for v in 0..n {
        let r = uf.find(v);
        let idx = match reps.iter().position(|&x| x == r) {
            Some(idx) => idx,
            None => {
                reps.push(r);
                reps.len() - 1
            }
        };
        class_of[v] = idx;
    }
    let k = reps.len();
    let mut classes = BasicIaNetwork::new(k);
    let mut fixed = vec![false; k * k];
    for i in 0..n {
        for j in 0..n {
            let (ci, cj) = (class_of[i], class_of[j]);
            if ci == cj {
                // members of one class must be pairwise eq
                if net.get(i, j) != IaBasic::Eq {
                    return Err(Inconsistent { i, j });
                }
                continue;
            }
            let rel = net.get(i, j);
            if fixed[ci * k + cj] {
                if classes.get(ci, cj) != rel {
                    return Err(Inconsistent { i, j });
                }
            } else {
                classes.set(ci, cj, rel);
                fixed[ci * k + cj] = true;
                fixed[cj * k + ci] = true;
            }
        }
    }
    Ok(MergedNet { class_of, classes })
}

/// Endpoint symbols of a k-class network: 2i = lo of class i, 2i+1 = hi.
fn endpoint_cmp(classes: &BasicIaNetwork, p: usize, q: usize) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let (ci, pi) = (p / 2, p % 2);
    let (cj, qj) = (q / 2, q % 2);
    if ci == cj {
        return match (pi, qj) {
            (0, 0) | (1, 1) => Equal,
            (0, 1) => Less,
            _ => Greater,
        };
    }
    let orders = endpoint_orders(classes.get(ci, cj));
    orders[pi * 2 + qj]
}

fn levels_of(classes: &BasicIaNetwork) -> Vec<i64> {
    let k = classes.num_vars();
    let mut symbols: Vec<usize> = (0..2 * k).collect();
    symbols.sort_by(|&p, &q| endpoint_cmp(classes, p, q));
    let mut level = vec![0i64; 2 * k];
    let mut current = 0i64;
    for t in 1..symbols.len() {
        if endpoint_cmp(classes, symbols[t - 1], symbols[t]) == std::cmp::Ordering::Less {
            current += 1;
        }
        level[symbols[t]] = current;
    }
    level
}

/// The unique canonical solution of a satisfiable basic network: integer
/// endpoints, gap-free from 0, order-isomorphic to every solution.
/// Variables related by eq are merged first and share one interval.
pub fn canonical_solution(net: &BasicIaNetwork) -> Result<Vec<Interval>, Inconsistent> {
    let merged = merge_eq(net)?;
    merged.classes.check_triangles()?;
    let level = levels_of(&merged.classes);
    let k = merged.classes.num_vars();
    let mut class_intervals = Vec::with_capacity(k);
    for c in 0..k {
        let lo = Rat::from_integer(level[2 * c].into());
        let hi = Rat::from_integer(level[2 * c + 1].into());
        class_intervals.push(Interval::new(lo, hi).map_err(|_| Inconsistent { i: c, j: c })?);
    }
    // re-derive and confirm the class network
    for i in 0..k {
        for j in 0..k {
            if relation_of(&class_intervals[i], &class_intervals[j]) != merged.classes.get(i, j) {
                return Err(Inconsistent { i, j });
            }
        }
    }
    Ok(merged.class_of.iter().map(|&c| class_intervals[c].clone()).collect())
}

/// Normalized deviation of a relaxed-relation instance from the exact
/// relation `target`: zero iff the pair is (or is forced to be treated as)
/// an exact instance; errors when (I, J) does not instantiate the relaxed
/// relation of `target`.
pub fn deviation(target: IaBasic, x: &Interval, y: &Interval) -> Result<Rat, Error> {
    if relation_of(x, y) != target.relax() {
        return Err(Error::NotAnInstance(target.token()));
    }
    let value = match target {
        IaBasic::M => {
            let overlap = x.hi() - y.lo();
            let min_len = x.len().min(y.len());
            overlap / min_len
        }
        IaBasic::S => (x.lo() - y.lo()) / x.len(),
        IaBasic::F => (y.hi() - x.hi()) / x.len(),
        IaBasic::Mi | IaBasic::Si | IaBasic::Fi => deviation(target.converse(), y, x)?,
        _ => Rat::zero(),
    };
    Ok(value)
}

/// Interval assignment solving the relaxed version of `net` exactly while
/// every pair deviates from its exact relation by less than `eps`.
///
/// Built from the two canonical solutions: the exact network's levels give
/// the base endpoints, the relaxed network's levels give the tie-breaking
/// shifts `level * eps / 4k`.
pub fn approximate_solution(net: &BasicIaNetwork, eps: &Rat) -> Result<Vec<Interval>, Error> {
    if !(eps > &Rat::zero() && eps < &Rat::from_integer(1.into())) {
        return Err(Error::EpsilonRange);
    }
    let merged = merge_eq(net).map_err(|_| Error::UnsatisfiableAt { stage: "exact network" })?;
    merged
        .classes
        .check_triangles()
        .map_err(|_| Error::UnsatisfiableAt { stage: "exact network" })?;
    let relaxed = merged.classes.relaxed();
    relaxed
        .check_triangles()
        .map_err(|_| Error::UnsatisfiableAt { stage: "relaxed network" })?;
    let k = merged.classes.num_vars();
    let t = levels_of(&merged.classes);
    let s = levels_of(&relaxed);
    let scale = eps / Rat::from_integer((4 * k as i64).into());
    let mut class_intervals = Vec::with_capacity(k);
    for c in 0..k {
        let lo = Rat::from_integer(t[2 * c].into()) + Rat::from_integer(s[2 * c].into()) * &scale;
        let hi =
            Rat::from_integer(t[2 * c + 1].into()) + Rat::from_integer(s[2 * c + 1].into()) * &scale;
        let iv = Interval::new(lo, hi).map_err(|_| Error::UnsatisfiableAt { stage: "shift" })?;
        class_intervals.push(iv);
    }
    // the shifted endpoints realize the relaxed network exactly
    for i in 0..k {
        for j in 0..k {
            debug_assert_eq!(
                relation_of(&class_intervals[i], &class_intervals[j]),
                relaxed.get(i, j)
            );
        }
    }
    Ok(merged.class_of.iter().map(|&c| class_intervals[c].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn representatives_realize_their_relations() {
        assert!(endpoint_reps_are_exact());
    }

    #[test]
    fn relation_of_table_rows() {
        let m = relation_of(&Interval::from_ints(0, 2), &Interval::from_ints(2, 5));
        assert_eq!(m, IaBasic::M);
        let eq = relation_of(&Interval::from_ints(0, 1), &Interval::from_ints(0, 1));
        assert_eq!(eq, IaBasic::Eq);
        let di = relation_of(&Interval::from_ints(0, 3), &Interval::from_ints(1, 2));
        assert_eq!(di, IaBasic::Di);
    }

    #[test]
    fn oracle_spot_values() {
        let ia = ia_calculus();
        // identity law
        assert_eq!(
            compose_oracle(IaBasic::Eq, IaBasic::O),
            ia.basic(IaBasic::O.index())
        );
        // meets chained twice leaves a gap
        assert_eq!(
            compose_oracle(IaBasic::M, IaBasic::M),
            ia.basic(IaBasic::B.index())
        );
        // b then bi is unconstrained
        assert_eq!(compose_oracle(IaBasic::B, IaBasic::Bi), ia.universal());
        // o then oi gives the nine "sharing an inner point" relations
        let expect = ia.relation_of_indices(
            [
                IaBasic::O,
                IaBasic::Oi,
                IaBasic::S,
                IaBasic::Si,
                IaBasic::D,
                IaBasic::Di,
                IaBasic::F,
                IaBasic::Fi,
                IaBasic::Eq,
            ]
            .iter()
            .map(|b| b.index()),
        );
        assert_eq!(compose_oracle(IaBasic::O, IaBasic::Oi), expect);
    }

    #[test]
    fn converse_composition_law_all_pairs() {
        for &a in &IA_BASICS {
            for &b in &IA_BASICS {
                let lhs = compose_oracle(a, b).converse();
                let rhs = compose_oracle(b.converse(), a.converse());
                assert_eq!(lhs, rhs, "law failed at ({a:?}, {b:?})");
            }
        }
    }

    #[test]
    fn coarsen_atoms() {
        let ia = ia_calculus();
        let mo = coarsen(IaBasic::M, Granularity::Seven);
        assert_eq!(mo, ia.relation_of_indices([IaBasic::M.index(), IaBasic::O.index()]));
        assert_eq!(coarsen(IaBasic::B, Granularity::Seven), ia.basic(IaBasic::B.index()));
        let middle = coarsen(IaBasic::D, Granularity::Three);
        assert_eq!(middle.count(), 11);
        assert!(!middle.contains_basic(IaBasic::B.index()));
        assert!(!middle.contains_basic(IaBasic::Bi.index()));
    }

    #[test]
    fn relax_map() {
        assert_eq!(IaBasic::M.relax(), IaBasic::O);
        assert_eq!(IaBasic::Eq.relax(), IaBasic::Eq);
        assert_eq!(IaBasic::Si.relax(), IaBasic::Di);
        assert_eq!(IaBasic::F.relax(), IaBasic::D);
        assert_eq!(IaBasic::Mi.relax(), IaBasic::Oi);
        let fixed: Vec<_> = IA_BASICS.iter().filter(|b| b.is_relax_fixed()).collect();
        assert_eq!(fixed.len(), 7);
    }

    #[test]
    fn canonical_two_vars() {
        let mut net = BasicIaNetwork::new(2);
        net.set(0, 1, IaBasic::B);
        let sol = canonical_solution(&net).unwrap();
        assert_eq!(sol[0], Interval::from_ints(0, 1));
        assert_eq!(sol[1], Interval::from_ints(2, 3));

        let mut net = BasicIaNetwork::new(2);
        net.set(0, 1, IaBasic::O);
        let sol = canonical_solution(&net).unwrap();
        assert_eq!(sol[0], Interval::from_ints(0, 2));
        assert_eq!(sol[1], Interval::from_ints(1, 3));

        let mut net = BasicIaNetwork::new(2);
        net.set(0, 1, IaBasic::Eq);
        let sol = canonical_solution(&net).unwrap();
        assert_eq!(sol[0], Interval::from_ints(0, 1));
        assert_eq!(sol[1], Interval::from_ints(0, 1));
    }

    #[test]
    fn canonical_rejects_inconsistent_triangle() {
        let mut net = BasicIaNetwork::new(3);
        net.set(0, 1, IaBasic::B);
        net.set(1, 2, IaBasic::B);
        net.set(0, 2, IaBasic::Bi);
        assert!(canonical_solution(&net).is_err());
    }

    #[test]
    fn deviation_values() {
        let half = deviation(
            IaBasic::M,
            &Interval::from_ints(0, 2),
            &Interval::from_ints(1, 3),
        )
        .unwrap();
        assert_eq!(half, rat(1, 2));

        let zero = deviation(
            IaBasic::B,
            &Interval::from_ints(0, 1),
            &Interval::from_ints(2, 3),
        )
        .unwrap();
        assert_eq!(zero, rat(0, 1));

        let s = deviation(
            IaBasic::S,
            &Interval::new(rat(1, 1), rat(2, 1)).unwrap(),
            &Interval::new(rat(9, 10), rat(3, 1)).unwrap(),
        )
        .unwrap();
        assert_eq!(s, rat(1, 10));

        // not an instance of the relaxed relation
        assert!(deviation(
            IaBasic::M,
            &Interval::from_ints(0, 1),
            &Interval::from_ints(5, 6)
        )
        .is_err());
    }

    #[test]
    fn approximate_solution_worked_example() {
        let mut net = BasicIaNetwork::new(2);
        net.set(0, 1, IaBasic::M);
        let eps = rat(8, 100);
        let sol = approximate_solution(&net, &eps).unwrap();
        assert_eq!(sol[0], Interval::new(rat(0, 1), rat(102, 100)).unwrap());
        assert_eq!(sol[1], Interval::new(rat(101, 100), rat(203, 100)).unwrap());
        let chi = deviation(IaBasic::M, &sol[0], &sol[1]).unwrap();
        assert!(chi < eps);
        assert_eq!(chi, rat(1, 102));
    }

    #[test]
    fn approximate_solution_relax_fixed_is_exact() {
        let mut net = BasicIaNetwork::new(2);
        net.set(0, 1, IaBasic::B);
        let sol = approximate_solution(&net, &rat(1, 2)).unwrap();
        assert_eq!(relation_of(&sol[0], &sol[1]), IaBasic::B);
        assert_eq!(deviation(IaBasic::B, &sol[0], &sol[1]).unwrap(), rat(0, 1));
    }

    #[test]
    fn approximate_solution_chain() {
        let mut net = BasicIaNetwork::new(3);
        net.set(0, 1, IaBasic::M);
        net.set(1, 2, IaBasic::M);
        net.set(0, 2, IaBasic::B);
        let eps = rat(1, 100);
        let sol = approximate_solution(&net, &eps).unwrap();
        for (i, j, rel) in [(0, 1, IaBasic::M), (1, 2, IaBasic::M), (0, 2, IaBasic::B)] {
            let chi = deviation(rel, &sol[i], &sol[j]).unwrap();
            assert!(chi < eps, "pair ({i},{j}) deviates by {chi}");
        }
    }

    #[test]
    fn approximate_solution_rejects_bad_eps() {
        let mut net = BasicIaNetwork::new(2);
        net.set(0, 1, IaBasic::B);
        assert!(approximate_solution(&net, &rat(0, 1)).is_err());
        assert!(approximate_solution(&net, &rat(1, 1)).is_err());
        assert!(approximate_solution(&net, &rat(3, 2)).is_err());
    }

    #[test]
    fn approximate_solution_rejects_unsat() {
        let mut net = BasicIaNetwork::new(3);
        net.set(0, 1, IaBasic::B);
        net.set(1, 2, IaBasic::B);
        net.set(0, 2, IaBasic::Bi);
        assert!(matches!(
            approximate_solution(&net, &rat(1, 10)),
            Err(Error::UnsatisfiableAt { .. })
        ));
    }
}
