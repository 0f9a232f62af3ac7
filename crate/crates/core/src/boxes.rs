//! Rectangle Algebra: 169 product relations over axis projections, their
//! classification by the topological relation of bounding rectangles, the
//! four cardinal directions, the 49-atom directional coarsening, and
//! rectangle solutions of basic networks.

use std::sync::OnceLock;

use crate::algebra::{Calculus, Relation};
use crate::bits::Bits;
use crate::error::{Error, Inconsistent};
use crate::interval::{
    canonical_solution, coarsen, ia_calculus, relation_of, BasicIaNetwork, Granularity, IaBasic,
    Interval, IA_BASICS,
};
use crate::Rat;

/// Axis-aligned rational rectangle: the product of two intervals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rectangle {
    ix: Interval,
    iy: Interval,
}

impl Rectangle {
    pub fn new(ix: Interval, iy: Interval) -> Rectangle {
        Rectangle { ix, iy }
    }

    pub fn from_bounds(xlo: Rat, xhi: Rat, ylo: Rat, yhi: Rat) -> Result<Rectangle, Error> {
        Ok(Rectangle {
            ix: Interval::new(xlo, xhi)?,
            iy: Interval::new(ylo, yhi)?,
        })
    }

    pub fn from_ints(x0: i64, x1: i64, y0: i64, y1: i64) -> Rectangle {
        Rectangle {
            ix: Interval::from_ints(x0, x1),
            iy: Interval::from_ints(y0, y1),
        }
    }

    pub fn ix(&self) -> &Interval {
        &self.ix
    }

    pub fn iy(&self) -> &Interval {
        &self.iy
    }

    pub fn contains_point(&self, x: &Rat, y: &Rat) -> bool {
        x >= self.ix.lo() && x <= self.ix.hi() && y >= self.iy.lo() && y <= self.iy.hi()
    }

    /// The closed intersection, if it has nonempty interior.
    pub fn open_intersection(&self, other: &Rectangle) -> Option<Rectangle> {
        let xlo = self.ix.lo().max(other.ix.lo()).clone();
        let xhi = self.ix.hi().min(other.ix.hi()).clone();
        let ylo = self.iy.lo().max(other.iy.lo()).clone();
        let yhi = self.iy.hi().min(other.iy.hi()).clone();
        if xlo < xhi && ylo < yhi {
            Some(Rectangle::from_bounds(xlo, xhi, ylo, yhi).unwrap())
        } else {
            None
        }
    }
}

/// A basic rectangle relation: one interval relation per axis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RaBasic {
    pub x: IaBasic,
    pub y: IaBasic,
}

impl RaBasic {
    pub fn new(x: IaBasic, y: IaBasic) -> RaBasic {
        RaBasic { x, y }
    }

    /// Dense index: x-component major.
    pub fn index(self) -> usize {
        self.x.index() * 13 + self.y.index()
    }

    pub fn from_index(i: usize) -> RaBasic {
        RaBasic {
            x: IaBasic::from_index(i / 13),
            y: IaBasic::from_index(i % 13),
        }
    }

    pub fn converse(self) -> RaBasic {
        RaBasic { x: self.x.converse(), y: self.y.converse() }
    }

    pub fn relax(self) -> RaBasic {
        RaBasic { x: self.x.relax(), y: self.y.relax() }
    }

    pub fn token(self) -> String {
        format!("{}*{}", self.x.token(), self.y.token())
    }
}

fn ra_tokens() -> &'static Vec<&'static str> {
    static TOKENS: OnceLock<Vec<&'static str>> = OnceLock::new();
    TOKENS.get_or_init(|| {
        (0..169)
            .map(|i| {
                let b = RaBasic::from_index(i);
                Box::leak(format!("{}*{}", b.x.token(), b.y.token()).into_boxed_str()) as &'static str
            })
            .collect()
    })
}

/// The Rectangle Algebra calculus. The composition table is the
/// componentwise product of the derived interval table, expanded to a dense
/// 169x169 array; its soundness is checked against a geometric oracle in
/// the test suite rather than assumed.
pub fn ra_calculus() -> &'static Calculus {
    static RA: OnceLock<Calculus> = OnceLock::new();
    RA.get_or_init(|| {
        let ia = ia_calculus();
        let converse: Vec<u16> = (0..169).map(|i| RaBasic::from_index(i).converse().index() as u16).collect();
        let mut composition = vec![Bits::EMPTY; 169 * 169];
        for a in 0..169 {
            let ra = RaBasic::from_index(a);
            for b in 0..169 {
                let rb = RaBasic::from_index(b);
                let cx = ia.compose_basics(ra.x.index(), rb.x.index());
                let cy = ia.compose_basics(ra.y.index(), rb.y.index());
                let mut bits = Bits::EMPTY;
                for x in cx.iter() {
                    for y in cy.iter() {
                        bits.insert(x * 13 + y);
                    }
                }
                composition[a * 169 + b] = bits;
            }
        }
        let identity = Bits::singleton(RaBasic::new(IaBasic::Eq, IaBasic::Eq).index());
        Calculus::new("RA", ra_tokens().clone(), converse, composition, identity)
    })
}

/// The unique basic rectangle relation between two rectangles.
pub fn ra_relation_of(r1: &Rectangle, r2: &Rectangle) -> RaBasic {
    RaBasic {
        x: relation_of(r1.ix(), r2.ix()),
        y: relation_of(r1.iy(), r2.iy()),
    }
}

/// Classification of a basic rectangle relation by the topological relation
/// between bounding rectangles.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MbrClass {
    Mdc,
    Mec,
    Mpo,
    Mtpp,
    Mntpp,
    Mtppi,
    Mntppi,
    Meq,
}

pub const MBR_CLASSES: [MbrClass; 8] = [
    MbrClass::Mdc,
    MbrClass::Mec,
    MbrClass::Mpo,
    MbrClass::Mtpp,
    MbrClass::Mntpp,
    MbrClass::Mtppi,
    MbrClass::Mntppi,
    MbrClass::Meq,
];

impl MbrClass {
    pub fn token(self) -> &'static str {
        match self {
            MbrClass::Mdc => "MDC",
            MbrClass::Mec => "MEC",
            MbrClass::Mpo => "MPO",
            MbrClass::Mtpp => "MTPP",
            MbrClass::Mntpp => "MNTPP",
            MbrClass::Mtppi => "MTPPi",
            MbrClass::Mntppi => "MNTPPi",
            MbrClass::Meq => "MEQ",
        }
    }
}

/// The unique class of a basic rectangle relation, by first-match cascade.
pub fn mbr_class(r: RaBasic) -> MbrClass {
    use IaBasic::*;
    let part = |a: IaBasic| matches!(a, S | D | F | Eq);
    let part_inv = |a: IaBasic| matches!(a, Si | Di | Fi | Eq);
    let far = |a: IaBasic| matches!(a, B | Bi);
    let touch = |a: IaBasic| matches!(a, M | Mi);
    if r.x == Eq && r.y == Eq {
        MbrClass::Meq
    } else if r.x == D && r.y == D {
        MbrClass::Mntpp
    } else if r.x == Di && r.y == Di {
        MbrClass::Mntppi
    } else if part(r.x) && part(r.y) {
        MbrClass::Mtpp
    } else if part_inv(r.x) && part_inv(r.y) {
        MbrClass::Mtppi
    } else if far(r.x) || far(r.y) {
        MbrClass::Mdc
    } else if touch(r.x) || touch(r.y) {
        MbrClass::Mec
    } else {
        MbrClass::Mpo
    }
}

/// Cardinal direction names.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cardinal {
    West,
    East,
    North,
    South,
}

/// A cardinal direction as a rectangle relation: one axis pinned to b or
/// bi, the other free.
pub fn cardinal(name: Cardinal) -> Relation {
    let ra = ra_calculus();
    let mut bits = Bits::EMPTY;
    for &beta in &IA_BASICS {
        let basic = match name {
            Cardinal::West => RaBasic::new(IaBasic::B, beta),
            Cardinal::East => RaBasic::new(IaBasic::Bi, beta),
            Cardinal::South => RaBasic::new(beta, IaBasic::B),
            Cardinal::North => RaBasic::new(beta, IaBasic::Bi),
        };
        bits.insert(basic.index());
    }
    ra.relation(bits)
}

/// Smallest DIR49 relation containing `delta`: per basic pair, the full
/// product of the 7-atom coarsenings of the components. A relation is in
/// DIR49 exactly when this hull leaves it unchanged.
pub fn dir49_hull(delta: &Relation) -> Result<Relation, Error> {
    if delta.is_empty() {
        return Err(Error::EmptyRelation("directional relation"));
    }
    let ra = ra_calculus();
    let mut bits = Bits::EMPTY;
    for i in delta.basics() {
        let b = RaBasic::from_index(i);
        let cx = coarsen(b.x, Granularity::Seven);
        let cy = coarsen(b.y, Granularity::Seven);
        for x in cx.basics() {
            for y in cy.basics() {
                bits.insert(x * 13 + y);
            }
        }
    }
    Ok(ra.relation(bits))
}

pub fn in_dir49(delta: &Relation) -> bool {
    !delta.is_empty() && dir49_hull(delta).map(|h| h == *delta).unwrap_or(false)
}

/// A basic rectangle network as two per-axis interval networks.
#[derive(Clone, Debug)]
pub struct BasicRaNetwork {
    pub x: BasicIaNetwork,
    pub y: BasicIaNetwork,
}

impl BasicRaNetwork {
    pub fn new(n: usize) -> BasicRaNetwork {
        BasicRaNetwork { x: BasicIaNetwork::new(n), y: BasicIaNetwork::new(n) }
    }

    pub fn num_vars(&self) -> usize {
        self.x.num_vars()
    }

    pub fn set(&mut self, i: usize, j: usize, rel: RaBasic) {
        self.x.set(i, j, rel.x);
        self.y.set(i, j, rel.y);
    }

    pub fn get(&self, i: usize, j: usize) -> RaBasic {
        RaBasic { x: self.x.get(i, j), y: self.y.get(i, j) }
    }
}

/// Split an atomic rectangle-relation matrix into its per-axis interval
/// networks.
pub fn basic_ra_network(net: &crate::network::Network) -> Result<BasicRaNetwork, Error> {
    let n = net.num_vars();
    let mut out = BasicRaNetwork::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let b = net
                .get(i, j)
                .single()
                .map(RaBasic::from_index)
                .ok_or(Error::NonBasicConstraint { i, j })?;
            out.set(i, j, b);
        }
    }
    Ok(out)
}

/// Canonical rectangle solution of a basic rectangle network: the per-axis
/// canonical interval solutions combined. Inconsistent exactly when one of
/// the axis networks is.
pub fn rectangle_solution(net: &BasicRaNetwork) -> Result<Vec<Rectangle>, Inconsistent> {
    let xs = canonical_solution(&net.x)?;
    let ys = canonical_solution(&net.y)?;
    Ok(xs
        .into_iter()
        .zip(ys)
        .map(|(ix, iy)| Rectangle::new(ix, iy))
        .collect())
}
