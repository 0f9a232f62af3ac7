//! Constructive model building: regions with prescribed bounding
//! rectangles realizing a basic topological network, exact verification of
//! the result, and SVG export.
//!
//! A region is assembled from small disk pieces anchored at carefully
//! spaced rational points: one private half-disk per bounding-rectangle
//! edge (pinning the bounding rectangle exactly), a shared seam or overlap
//! disk per touching/overlapping pair, copies of the pieces of contained
//! regions, and concentric cover disks that pull non-tangential parts into
//! the interior. All point spacing is certified through rational
//! lower bounds, so the verification predicates are exact.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::boxes::{ra_relation_of, RaBasic, Rectangle};
use crate::error::Error;
use crate::geom::{Convex, Disk, HalfPlane, Point};
use crate::interval::IaBasic;
use crate::network::Network;
use crate::topology::{rcc8_calculus, rcc8_of_regions, Rcc8Basic, RectUnionRegion};
use crate::Rat;

/// Kept half of a half-disk, named by the side of the cut line it lies on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
    Down,
    Up,
}

/// Geometric primitives closed under the exact pairwise predicates.
#[derive(Clone, PartialEq, Debug)]
pub enum Primitive {
    Rect(Rectangle),
    Disk { center: Point, radius: Rat },
    HalfDisk { center: Point, radius: Rat, side: Side },
    /// Disk clipped to a rectangle containing its center.
    ClippedDisk { center: Point, radius: Rat, clip: Rectangle },
}

impl Primitive {
    pub fn to_convex(&self) -> Convex {
        match self {
            Primitive::Rect(r) => Convex { disk: None, halves: rect_halves(r) },
            Primitive::Disk { center, radius } => Convex {
                disk: Some(Disk { center: center.clone(), radius: radius.clone() }),
                halves: vec![],
            },
            Primitive::HalfDisk { center, radius, side } => Convex {
                disk: Some(Disk { center: center.clone(), radius: radius.clone() }),
                halves: vec![match side {
                    Side::Left => HalfPlane::XLe(center.x.clone()),
                    Side::Right => HalfPlane::XGe(center.x.clone()),
                    Side::Down => HalfPlane::YLe(center.y.clone()),
                    Side::Up => HalfPlane::YGe(center.y.clone()),
                }],
            },
            Primitive::ClippedDisk { center, radius, clip } => Convex {
                disk: Some(Disk { center: center.clone(), radius: radius.clone() }),
                halves: rect_halves(clip),
            },
        }
    }

    /// Tight bounding rectangle. For clipped disks this relies on the
    /// center-inside-clip invariant.
    pub fn extent(&self) -> Rectangle {
        match self {
            Primitive::Rect(r) => r.clone(),
            Primitive::Disk { center, radius } => Rectangle::from_bounds(
                &center.x - radius,
                &center.x + radius,
                &center.y - radius,
                &center.y + radius,
            )
            .unwrap(),
            Primitive::HalfDisk { center, radius, side } => {
                let (xlo, xhi, ylo, yhi) = match side {
                    Side::Left => (&center.x - radius, center.x.clone(), &center.y - radius, &center.y + radius),
                    Side::Right => (center.x.clone(), &center.x + radius, &center.y - radius, &center.y + radius),
                    Side::Down => (&center.x - radius, &center.x + radius, &center.y - radius, center.y.clone()),
                    Side::Up => (&center.x - radius, &center.x + radius, center.y.clone(), &center.y + radius),
                };
                Rectangle::from_bounds(xlo, xhi, ylo, yhi).unwrap()
            }
            Primitive::ClippedDisk { center, radius, clip } => Rectangle::from_bounds(
                (&center.x - radius).max(clip.ix().lo().clone()),
                (&center.x + radius).min(clip.ix().hi().clone()),
                (&center.y - radius).max(clip.iy().lo().clone()),
                (&center.y + radius).min(clip.iy().hi().clone()),
            )
            .unwrap(),
        }
    }

    fn center(&self) -> Option<&Point> {
        match self {
            Primitive::Rect(_) => None,
            Primitive::Disk { center, .. }
            | Primitive::HalfDisk { center, .. }
            | Primitive::ClippedDisk { center, .. } => Some(center),
        }
    }

    fn radius(&self) -> Option<&Rat> {
        match self {
            Primitive::Rect(_) => None,
            Primitive::Disk { radius, .. }
            | Primitive::HalfDisk { radius, .. }
            | Primitive::ClippedDisk { radius, .. } => Some(radius),
        }
    }
}

fn rect_halves(r: &Rectangle) -> Vec<HalfPlane> {
    vec![
        HalfPlane::XGe(r.ix().lo().clone()),
        HalfPlane::XLe(r.ix().hi().clone()),
        HalfPlane::YGe(r.iy().lo().clone()),
        HalfPlane::YLe(r.iy().hi().clone()),
    ]
}

/// A symbolic region: primitive union plus the metadata the verifier uses
/// for containment chains and tangency cross-checks.
#[derive(Clone, Debug)]
pub struct SymbolicRegion {
    pub owner: String,
    pub mbr: Rectangle,
    pub primitives: Vec<Primitive>,
    pub tangencies: Vec<(String, Point)>,
    pub contains: Vec<String>,
}

impl SymbolicRegion {
    /// Exact bounding rectangle of the primitive union; None when the
    /// region has no primitives (regions must be nonempty).
    pub fn try_computed_mbr(&self) -> Option<Rectangle> {
        let mut it = self.primitives.iter();
        let first = it.next()?.extent();
        let mut xlo = first.ix().lo().clone();
        let mut xhi = first.ix().hi().clone();
        let mut ylo = first.iy().lo().clone();
        let mut yhi = first.iy().hi().clone();
        for p in it {
            let e = p.extent();
            xlo = xlo.min(e.ix().lo().clone());
            xhi = xhi.max(e.ix().hi().clone());
            ylo = ylo.min(e.iy().lo().clone());
            yhi = yhi.max(e.iy().hi().clone());
        }
        Some(Rectangle::from_bounds(xlo, xhi, ylo, yhi).unwrap())
    }

    /// Exact bounding rectangle of the primitive union.
    pub fn computed_mbr(&self) -> Rectangle {
        self.try_computed_mbr().expect("region has at least one primitive")
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.primitives.iter().any(|prim| prim.to_convex().contains(p, false))
    }
}

/// Spacing parameters certifying the construction: minimum separation
/// between anchor points, clearance from anchor points to non-incident
/// rectangle edges (both rational lower bounds on the true Euclidean
/// distances), the chosen working distance, the radius ladder, and the
/// nesting level of each variable.
#[derive(Clone, Debug)]
pub struct RealizationParams {
    pub separation: Rat,
    pub clearance: Rat,
    pub delta: Rat,
    pub radii: Vec<Rat>,
    pub ntp_levels: Vec<usize>,
}

/// One failed compatibility clause.
#[derive(Clone, Debug)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub clause: String,
}

fn basic_at(net: &Network, i: usize, j: usize) -> Result<Rcc8Basic, Error> {
    net.get(i, j)
        .single()
        .map(Rcc8Basic::from_index)
        .ok_or(Error::NonBasicConstraint { i, j })
}

/// Per-pair conditions under which rectangles admit a region model with
/// those exact bounding rectangles: non-disconnected pairs need
/// overlapping rectangle interiors, proper parts need per-axis containment
/// without boundary contact on the strict axes, equality needs identical
/// rectangles.
pub fn compatible(rects: &[Rectangle], net: &Network) -> Result<Vec<Violation>, Error> {
    let n = net.num_vars();
    if rects.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: rects.len() });
    }
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let theta = basic_at(net, i, j)?;
            if theta != Rcc8Basic::Dc && rects[i].open_intersection(&rects[j]).is_none() {
                violations.push(Violation {
                    i,
                    j,
                    clause: "rectangle interiors must overlap".into(),
                });
            }
            let rel = ra_relation_of(&rects[i], &rects[j]);
            match theta {
                Rcc8Basic::Tpp => {
                    let ok = matches!(
                        (rel.x, rel.y),
                        (IaBasic::D, IaBasic::Eq)
                            | (IaBasic::D, IaBasic::D)
                            | (IaBasic::Eq, IaBasic::D)
                            | (IaBasic::Eq, IaBasic::Eq)
                    );
                    if !ok {
                        violations.push(Violation {
                            i,
                            j,
                            clause: "tangential part needs d/eq projections".into(),
                        });
                    }
                }
                Rcc8Basic::Ntpp => {
                    if !(rel.x == IaBasic::D && rel.y == IaBasic::D) {
                        violations.push(Violation {
                            i,
                            j,
                            clause: "non-tangential part needs d*d projections".into(),
                        });
                    }
                }
                Rcc8Basic::Eq => {
                    if rects[i] != rects[j] {
                        violations.push(Violation { i, j, clause: "equal regions need equal rectangles".into() });
                    }
                }
                _ => {}
            }
        }
    }
    Ok(violations)
}

/// Nesting depth induced by the non-tangential-part order: 1 for minimal
/// variables, otherwise one more than the deepest predecessor.
pub fn ntp_levels(net: &Network) -> Result<Vec<usize>, Error> {
    let n = net.num_vars();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && basic_at(net, j, i)? == Rcc8Basic::Ntpp {
                preds[i].push(j);
            }
        }
    }
    let mut level = vec![0usize; n];
    for _ in 0..=n {
        let mut changed = false;
        for i in 0..n {
            let want = 1 + preds[i].iter().map(|&j| level[j]).max().unwrap_or(0);
            if level[i] != want {
                level[i] = want;
                changed = true;
            }
        }
        if !changed {
            return Ok(level);
        }
    }
    // one extra sweep left the levels unstable: containment cycle
    Err(Error::UnsatisfiableAt { stage: "nesting levels" })
}

/// Atomic-network satisfiability: every composition triangle must admit
/// the direct relation.
fn triangle_check(net: &Network) -> Result<(), Error> {
    let n = net.num_vars();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let direct = net.get(i, j);
                let composed = net.get(i, k).try_compose(&net.get(k, j))?;
                if !direct.intersect(&composed).eq(&direct) {
                    return Err(Error::UnsatisfiableAt { stage: "topological network" });
                }
            }
        }
    }
    Ok(())
}

struct FreshCoords {
    used_x: BTreeSet<Rat>,
    used_y: BTreeSet<Rat>,
}

impl FreshCoords {
    fn pick(used: &mut BTreeSet<Rat>, lo: &Rat, hi: &Rat) -> Rat {
        let span = hi - lo;
        for den in 2u64.. {
            for num in 1..den {
                let cand = lo + &span * Rat::new(num.into(), den.into());
                if !used.contains(&cand) {
                    used.insert(cand.clone());
                    return cand;
                }
            }
        }
        unreachable!()
    }

    fn fresh_x(&mut self, lo: &Rat, hi: &Rat) -> Rat {
        Self::pick(&mut self.used_x, lo, hi)
    }

    fn fresh_y(&mut self, lo: &Rat, hi: &Rat) -> Rat {
        Self::pick(&mut self.used_y, lo, hi)
    }
}

fn linf(p: &Point, q: &Point) -> Rat {
    let dx = (&p.x - &q.x).abs();
    let dy = (&p.y - &q.y).abs();
    dx.max(dy)
}

/// Lower bound on the distance from a point to an axis-parallel segment,
/// exact when the perpendicular projection lands on the segment.
fn edge_distance_lb(p: &Point, vertical: bool, at: &Rat, lo: &Rat, hi: &Rat) -> Rat {
    let (coord, other) = if vertical { (&p.x, &p.y) } else { (&p.y, &p.x) };
    let across = (coord - at).abs();
    let along = if other < lo {
        lo - other
    } else if other > hi {
        other - hi
    } else {
        Rat::from_integer(0.into())
    };
    across.max(along)
}

struct Edge {
    vertical: bool,
    at: Rat,
    lo: Rat,
    hi: Rat,
}

fn rect_edges(r: &Rectangle) -> [Edge; 4] {
    [
        Edge { vertical: true, at: r.ix().lo().clone(), lo: r.iy().lo().clone(), hi: r.iy().hi().clone() },
        Edge { vertical: true, at: r.ix().hi().clone(), lo: r.iy().lo().clone(), hi: r.iy().hi().clone() },
        Edge { vertical: false, at: r.iy().lo().clone(), lo: r.ix().lo().clone(), hi: r.ix().hi().clone() },
        Edge { vertical: false, at: r.iy().hi().clone(), lo: r.ix().lo().clone(), hi: r.ix().hi().clone() },
    ]
}

fn point_on_edge(p: &Point, e: &Edge) -> bool {
    if e.vertical {
        p.x == e.at && p.y >= e.lo && p.y <= e.hi
    } else {
        p.y == e.at && p.x >= e.lo && p.x <= e.hi
    }
}

/// Classes of variables identified by equality constraints.
struct EqClasses {
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

fn eq_classes(net: &Network) -> Result<EqClasses, Error> {
    let n = net.num_vars();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let mut assigned = None;
        for c in 0..members.len() {
            let rep = members[c][0];
            if basic_at(net, rep, v)? == Rcc8Basic::Eq {
                assigned = Some(c);
                break;
            }
        }
        match assigned {
            Some(c) => {
                class_of[v] = c;
                members[c].push(v);
            }
            None => {
                class_of[v] = members.len();
                members.push(vec![v]);
            }
        }
    }
    Ok(EqClasses { class_of, members })
}

/// Builds regions realizing the network with the exact prescribed bounding
/// rectangles. The network must be basic and satisfiable, and the
/// rectangles compatible with it.
pub fn realize_regions(
    net: &Network,
    rects: &[Rectangle],
    names: &[String],
) -> Result<Vec<SymbolicRegion>, Error> {
    realize_with_params(net, rects, names).map(|(regions, _)| regions)
}

/// [`realize_regions`] together with the spacing certificate it derived.
pub fn realize_with_params(
    net: &Network,
    rects: &[Rectangle],
    names: &[String],
) -> Result<(Vec<SymbolicRegion>, RealizationParams), Error> {
    let n = net.num_vars();
    if rects.len() != n || names.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: rects.len().min(names.len()) });
    }
    if !net.is_basic() {
        let (i, j) = net
            .pairs()
            .find(|&(i, j)| !net.get(i, j).is_basic())
            .unwrap_or((0, 0));
        return Err(Error::NonBasicConstraint { i, j });
    }
    triangle_check(net)?;
    let violations = compatible(rects, net)?;
    if !violations.is_empty() {
        return Err(Error::IncompatibleRectangles(violations.len()));
    }

    // merge equality classes; all class members share one rectangle
    let classes = eq_classes(net)?;
    let k = classes.members.len();
    let reps: Vec<usize> = classes.members.iter().map(|m| m[0]).collect();
    let crects: Vec<Rectangle> = reps.iter().map(|&v| rects[v].clone()).collect();
    let mut cnet = Network::universal(rcc8_calculus(), k.max(1));
    if k > 1 {
        for a in 0..k {
            for b in (a + 1)..k {
                cnet.set(a, b, net.get(reps[a], reps[b]));
            }
        }
    }
    let cbasic = |a: usize, b: usize| -> Rcc8Basic {
        Rcc8Basic::from_index(cnet.get(a, b).single().expect("class network is basic"))
    };

    let levels = ntp_levels(&cnet)?;

    // anchor points: private edge points per class rectangle, one shared
    // point per touching/overlapping pair, rectangle corners for spacing
    let mut fresh = FreshCoords { used_x: BTreeSet::new(), used_y: BTreeSet::new() };
    for r in &crects {
        fresh.used_x.insert(r.ix().lo().clone());
        fresh.used_x.insert(r.ix().hi().clone());
        fresh.used_y.insert(r.iy().lo().clone());
        fresh.used_y.insert(r.iy().hi().clone());
    }

    // (class, edge side) -> point; the kept half faces into the rectangle
    let mut edge_points: Vec<[(Point, Side); 4]> = Vec::with_capacity(k);
    for r in &crects {
        let bottom = Point::new(fresh.fresh_x(r.ix().lo(), r.ix().hi()), r.iy().lo().clone());
        let top = Point::new(fresh.fresh_x(r.ix().lo(), r.ix().hi()), r.iy().hi().clone());
        let left = Point::new(r.ix().lo().clone(), fresh.fresh_y(r.iy().lo(), r.iy().hi()));
        let right = Point::new(r.ix().hi().clone(), fresh.fresh_y(r.iy().lo(), r.iy().hi()));
        edge_points.push([(bottom, Side::Up), (top, Side::Down), (left, Side::Right), (right, Side::Left)]);
    }

    let mut seam_points: Vec<((usize, usize), Point, Rcc8Basic)> = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            let theta = cbasic(a, b);
            if theta == Rcc8Basic::Ec || theta == Rcc8Basic::Po {
                let inter = crects[a]
                    .open_intersection(&crects[b])
                    .expect("compatible rectangles overlap for non-disconnected pairs");
                let q = Point::new(
                    fresh.fresh_x(inter.ix().lo(), inter.ix().hi()),
                    fresh.fresh_y(inter.iy().lo(), inter.iy().hi()),
                );
                seam_points.push(((a, b), q, theta));
            }
        }
    }

    // gather all anchors and derive the spacing certificate
    let mut anchors: Vec<Point> = Vec::new();
    for r in &crects {
        for (x, y) in [
            (r.ix().lo(), r.iy().lo()),
            (r.ix().lo(), r.iy().hi()),
            (r.ix().hi(), r.iy().lo()),
            (r.ix().hi(), r.iy().hi()),
        ] {
            let p = Point::new(x.clone(), y.clone());
            if !anchors.contains(&p) {
                anchors.push(p);
            }
        }
    }
    for pts in &edge_points {
        for (p, _) in pts {
            anchors.push(p.clone());
        }
    }
    for (_, q, _) in &seam_points {
        anchors.push(q.clone());
    }

    let mut separation: Option<Rat> = None;
    for i in 0..anchors.len() {
        for j in (i + 1)..anchors.len() {
            let d = linf(&anchors[i], &anchors[j]);
            debug_assert!(d.is_positive(), "anchor points must be distinct");
            separation = Some(match separation {
                None => d,
                Some(s) => s.min(d),
            });
        }
    }
    let mut clearance: Option<Rat> = None;
    for p in &anchors {
        for r in &crects {
            for e in rect_edges(r) {
                if point_on_edge(p, &e) {
                    continue;
                }
                let d = edge_distance_lb(p, e.vertical, &e.at, &e.lo, &e.hi);
                debug_assert!(d.is_positive());
                clearance = Some(match clearance.take() {
                    None => d,
                    Some(c) => c.min(d),
                });
            }
        }
    }
    let separation = separation.unwrap_or_else(|| Rat::from_integer(1.into()));
    let clearance = clearance.unwrap_or_else(|| Rat::from_integer(1.into()));
    let delta = separation.clone().min(clearance.clone()) / Rat::from_integer(2.into());
    let radii: Vec<Rat> = (1..=k)
        .map(|t| &delta * Rat::new((t as i64).into(), (4 * (k as i64 + 1)).into()))
        .collect();
    let mut params = RealizationParams {
        separation,
        clearance,
        delta,
        radii,
        ntp_levels: levels.clone(),
    };

    // boundary-anchored pieces plus seam pieces per class
    let r1 = params.radii[0].clone();
    let mut own_pieces: Vec<Vec<Primitive>> = vec![Vec::new(); k];
    let mut tangencies: Vec<Vec<(usize, Point)>> = vec![Vec::new(); k];
    for c in 0..k {
        for (p, side) in &edge_points[c] {
            own_pieces[c].push(Primitive::HalfDisk {
                center: p.clone(),
                radius: r1.clone(),
                side: *side,
            });
        }
    }
    for ((a, b), q, theta) in &seam_points {
        match theta {
            Rcc8Basic::Ec => {
                own_pieces[*a].push(Primitive::HalfDisk {
                    center: q.clone(),
                    radius: r1.clone(),
                    side: Side::Left,
                });
                own_pieces[*b].push(Primitive::HalfDisk {
                    center: q.clone(),
                    radius: r1.clone(),
                    side: Side::Right,
                });
                tangencies[*a].push((*b, q.clone()));
                tangencies[*b].push((*a, q.clone()));
            }
            Rcc8Basic::Po => {
                own_pieces[*a].push(Primitive::Disk { center: q.clone(), radius: r1.clone() });
                own_pieces[*b].push(Primitive::Disk { center: q.clone(), radius: r1.clone() });
            }
            _ => unreachable!(),
        }
    }

    // contained parts: copies of the own pieces of every proper part
    let contained: Vec<Vec<usize>> = (0..k)
        .map(|c| {
            (0..k)
                .filter(|&m| m != c && matches!(cbasic(m, c), Rcc8Basic::Tpp | Rcc8Basic::Ntpp))
                .collect()
        })
        .collect();
    let mut shared_pieces: Vec<Vec<Primitive>> = vec![Vec::new(); k];
    for c in 0..k {
        for &m in &contained[c] {
            shared_pieces[c].extend(own_pieces[m].iter().cloned());
        }
    }

    // cover disks: every anchor carrying a piece of a non-tangential part
    // gets the class's level radius, swallowing the part into the interior
    let mut cover_pieces: Vec<Vec<Primitive>> = vec![Vec::new(); k];
    for c in 0..k {
        let mut centers: Vec<Point> = Vec::new();
        for m in 0..k {
            if m != c && cbasic(m, c) == Rcc8Basic::Ntpp {
                for piece in own_pieces[m].iter().chain(
                    contained[m].iter().flat_map(|&mm| own_pieces[mm].iter()),
                ) {
                    let p = piece.center().expect("anchored pieces have centers").clone();
                    if !centers.contains(&p) {
                        centers.push(p);
                    }
                }
            }
        }
        let radius = params.radii[levels[c] - 1].clone();
        for p in centers {
            cover_pieces[c].push(Primitive::Disk { center: p, radius: radius.clone() });
        }
    }

    // assemble regions per class, then expand to the original variables
    let mut class_regions: Vec<SymbolicRegion> = Vec::with_capacity(k);
    for c in 0..k {
        let mut primitives = own_pieces[c].clone();
        primitives.extend(shared_pieces[c].iter().cloned());
        primitives.extend(cover_pieces[c].iter().cloned());
        let region = SymbolicRegion {
            owner: names[reps[c]].clone(),
            mbr: crects[c].clone(),
            primitives,
            tangencies: Vec::new(),
            contains: Vec::new(),
        };
        debug_assert_eq!(region.computed_mbr(), crects[c], "bounding rectangle must be exact");
        class_regions.push(region);
    }

    let mut out: Vec<SymbolicRegion> = Vec::with_capacity(n);
    for v in 0..n {
        let c = classes.class_of[v];
        let mut region = class_regions[c].clone();
        region.owner = names[v].clone();
        region.tangencies = tangencies[c]
            .iter()
            .flat_map(|(other, q)| {
                classes.members[*other].iter().map(move |&m| (names[m].clone(), q.clone()))
            })
            .collect();
        region.contains = contained[c]
            .iter()
            .flat_map(|&m| classes.members[m].iter().map(|&v2| names[v2].clone()))
            .collect();
        out.push(region);
    }
    // report levels per variable, not per merged class
    params.ntp_levels = (0..n).map(|v| levels[classes.class_of[v]]).collect();
    Ok((out, params))
}

/// Is `p` included in `q`? Exact for identical pieces, pieces against
/// rectangles, and concentric or nested disk cores; unprovable cases
/// report false and surface as verification mismatches.
fn piece_subset(p: &Primitive, q: &Primitive, strict: bool) -> bool {
    if p == q {
        return !strict;
    }
    let pe = p.extent();
    let extent_in = |r: &Rectangle| {
        if strict {
            pe.ix().lo() > r.ix().lo()
                && pe.ix().hi() < r.ix().hi()
                && pe.iy().lo() > r.iy().lo()
                && pe.iy().hi() < r.iy().hi()
        } else {
            pe.ix().lo() >= r.ix().lo()
                && pe.ix().hi() <= r.ix().hi()
                && pe.iy().lo() >= r.iy().lo()
                && pe.iy().hi() <= r.iy().hi()
        }
    };
    let half_ok = |h: &HalfPlane| match h {
        HalfPlane::XLe(a) => if strict { pe.ix().hi() < a } else { pe.ix().hi() <= a },
        HalfPlane::XGe(a) => if strict { pe.ix().lo() > a } else { pe.ix().lo() >= a },
        HalfPlane::YLe(a) => if strict { pe.iy().hi() < a } else { pe.iy().hi() <= a },
        HalfPlane::YGe(a) => if strict { pe.iy().lo() > a } else { pe.iy().lo() >= a },
    };
    match q {
        Primitive::Rect(r) => extent_in(r),
        Primitive::Disk { center: qc, radius: qr } => match (p.center(), p.radius()) {
            (Some(pc), Some(pr)) => {
                let gap = qr - pr;
                if gap.is_negative() || (strict && !gap.is_positive()) {
                    return false;
                }
                let d2 = crate::geom::dist2(pc, qc);
                let g2 = &gap * &gap;
                if strict {
                    d2 < g2
                } else {
                    d2 <= g2
                }
            }
            _ => {
                // rectangle inside a disk: farthest corner decides
                let qr2 = qr * qr;
                let corners = [
                    Point::new(pe.ix().lo().clone(), pe.iy().lo().clone()),
                    Point::new(pe.ix().lo().clone(), pe.iy().hi().clone()),
                    Point::new(pe.ix().hi().clone(), pe.iy().lo().clone()),
                    Point::new(pe.ix().hi().clone(), pe.iy().hi().clone()),
                ];
                corners.iter().all(|cpt| {
                    let d2 = crate::geom::dist2(cpt, qc);
                    if strict {
                        d2 < qr2
                    } else {
                        d2 <= qr2
                    }
                })
            }
        },
        Primitive::HalfDisk { center, radius, side } => {
            let core = Primitive::Disk { center: center.clone(), radius: radius.clone() };
            let h = match side {
                Side::Left => HalfPlane::XLe(center.x.clone()),
                Side::Right => HalfPlane::XGe(center.x.clone()),
                Side::Down => HalfPlane::YLe(center.y.clone()),
                Side::Up => HalfPlane::YGe(center.y.clone()),
            };
            piece_subset(p, &core, strict) && half_ok(&h)
        }
        Primitive::ClippedDisk { center, radius, clip } => {
            let core = Primitive::Disk { center: center.clone(), radius: radius.clone() };
            piece_subset(p, &core, strict) && extent_in(clip)
        }
    }
}

/// One verified pair.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub expected: Rcc8Basic,
    pub computed: Rcc8Basic,
    pub mbr_relation: RaBasic,
    pub matched: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub pairs: Vec<PairCheck>,
    pub mbr_issues: Vec<String>,
    pub tangency_issues: Vec<String>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.pairs.iter().all(|p| p.matched)
            && self.mbr_issues.is_empty()
            && self.tangency_issues.is_empty()
    }
}

fn all_rect(region: &SymbolicRegion) -> Option<RectUnionRegion> {
    let mut rects = Vec::new();
    for p in &region.primitives {
        match p {
            Primitive::Rect(r) => rects.push(r.clone()),
            _ => return None,
        }
    }
    RectUnionRegion::new(rects).ok()
}

/// Exact basic relation between two symbolic regions: structural equality,
/// then the rectangle-union oracle when both regions are rectilinear, then
/// containment chains with per-piece inclusion and the convex-pair
/// predicates for overlap and contact.
pub fn region_relation(a: &SymbolicRegion, b: &SymbolicRegion) -> Rcc8Basic {
    if a.primitives.len() == b.primitives.len()
        && a.primitives.iter().all(|p| b.primitives.contains(p))
        && b.primitives.iter().all(|p| a.primitives.contains(p))
    {
        return Rcc8Basic::Eq;
    }
    if let (Some(ra), Some(rb)) = (all_rect(a), all_rect(b)) {
        return rcc8_of_regions(&ra, &rb);
    }
    let cover = |inner: &SymbolicRegion, outer: &SymbolicRegion, strict: bool| {
        outer.contains.contains(&inner.owner)
            && inner.primitives.iter().all(|p| {
                outer.primitives.iter().any(|q| piece_subset(p, q, strict))
            })
    };
    if cover(a, b, false) {
        return if cover(a, b, true) { Rcc8Basic::Ntpp } else { Rcc8Basic::Tpp };
    }
    if cover(b, a, false) {
        return if cover(b, a, true) { Rcc8Basic::Ntppi } else { Rcc8Basic::Tppi };
    }
    let convs_a: Vec<Convex> = a.primitives.iter().map(|p| p.to_convex()).collect();
    let convs_b: Vec<Convex> = b.primitives.iter().map(|p| p.to_convex()).collect();
    let mut closed = false;
    let mut open = false;
    for ca in &convs_a {
        for cb in &convs_b {
            if crate::geom::convex_pair_intersects(ca, cb, true) {
                open = true;
                closed = true;
                break;
            }
            if crate::geom::convex_pair_intersects(ca, cb, false) {
                closed = true;
            }
        }
        if open {
            break;
        }
    }
    if open {
        Rcc8Basic::Po
    } else if closed {
        Rcc8Basic::Ec
    } else {
        Rcc8Basic::Dc
    }
}

/// Recompute every pairwise relation and compare against the network;
/// validate stored bounding rectangles and tangency records.
pub fn verify_regions(regions: &[SymbolicRegion], net: &Network) -> Result<VerifyReport, Error> {
    let n = net.num_vars();
    if regions.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: regions.len() });
    }
    let mut report = VerifyReport { pairs: Vec::new(), mbr_issues: Vec::new(), tangency_issues: Vec::new() };
    for (idx, region) in regions.iter().enumerate() {
        match region.try_computed_mbr() {
            Some(mbr) if mbr == region.mbr => {}
            Some(_) => report.mbr_issues.push(format!(
                "region {} ({}): stored bounding rectangle differs from the primitive union's",
                idx, region.owner
            )),
            None => report.mbr_issues.push(format!(
                "region {} ({}): no primitives",
                idx, region.owner
            )),
        }
        for (other, point) in &region.tangencies {
            if !region.contains_point(point) {
                report
                    .tangency_issues
                    .push(format!("region {}: tangency point not on the region", region.owner));
            }
            if let Some(o) = regions.iter().find(|r| &r.owner == other) {
                if !o.contains_point(point) {
                    report.tangency_issues.push(format!(
                        "regions {} / {}: tangency point not shared",
                        region.owner, other
                    ));
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let expected = basic_at(net, i, j)?;
            let computed = region_relation(&regions[i], &regions[j]);
            let mbr_relation = ra_relation_of(&regions[i].mbr, &regions[j].mbr);
            report.pairs.push(PairCheck {
                i,
                j,
                expected,
                computed,
                mbr_relation,
                matched: expected == computed,
            });
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// SVG export

fn fmt_rat(r: &Rat) -> String {
    let scaled = (r * Rat::from_integer(1_000_000.into())).round();
    let v = scaled.to_integer();
    let neg = v.is_negative();
    let abs = if neg { -v } else { v };
    let million = num_bigint::BigInt::from(1_000_000);
    let int = &abs / &million;
    let frac = &abs % &million;
    let mut frac_s = frac.to_string();
    while frac_s.len() < 6 {
        frac_s.insert(0, '0');
    }
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac_s)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct SvgMap {
    scale: Rat,
    min_x: Rat,
    max_y: Rat,
    margin: Rat,
}

impl SvgMap {
    fn x(&self, wx: &Rat) -> String {
        fmt_rat(&((wx - &self.min_x) * &self.scale + &self.margin))
    }

    fn y(&self, wy: &Rat) -> String {
        fmt_rat(&((&self.max_y - wy) * &self.scale + &self.margin))
    }

    fn len(&self, w: &Rat) -> String {
        fmt_rat(&(w * &self.scale))
    }
}

/// Deterministic SVG rendering: regions as translucent primitive groups,
/// optional dashed bounding rectangles, tangency points as markers. Byte
/// stable for fixed input.
pub fn to_svg(regions: &[SymbolicRegion], rects: Option<&[Rectangle]>) -> String {
    use std::fmt::Write;
    let mut bounds: Option<(Rat, Rat, Rat, Rat)> = None;
    let mut extend = |r: &Rectangle| {
        let (xlo, xhi, ylo, yhi) = (
            r.ix().lo().clone(),
            r.ix().hi().clone(),
            r.iy().lo().clone(),
            r.iy().hi().clone(),
        );
        bounds = Some(match bounds.take() {
            None => (xlo, xhi, ylo, yhi),
            Some((a, b, c, d)) => (a.min(xlo), b.max(xhi), c.min(ylo), d.max(yhi)),
        });
    };
    for region in regions {
        if let Some(mbr) = region.try_computed_mbr() {
            extend(&mbr);
        }
        extend(&region.mbr);
    }
    if let Some(rs) = rects {
        for r in rs {
            extend(r);
        }
    }
    let (min_x, max_x, min_y, max_y) = bounds.unwrap_or((
        Rat::from_integer(0.into()),
        Rat::from_integer(1.into()),
        Rat::from_integer(0.into()),
        Rat::from_integer(1.into()),
    ));
    let scale = Rat::from_integer(120.into());
    let margin = Rat::from_integer(24.into());
    let two = Rat::from_integer(2.into());
    let width = (&max_x - &min_x) * &scale + &margin * &two;
    let height = (&max_y - &min_y) * &scale + &margin * &two;
    let map = SvgMap { scale, min_x, max_y, margin };

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt_rat(&width),
        h = fmt_rat(&height)
    )
    .unwrap();

    if let Some(rs) = rects {
        writeln!(svg, r##"  <g id="rects" fill="none" stroke="#555555" stroke-dasharray="6,4">"##).unwrap();
        for r in rs {
            writeln!(
                svg,
                r#"    <rect x="{}" y="{}" width="{}" height="{}"/>"#,
                map.x(r.ix().lo()),
                map.y(r.iy().hi()),
                map.len(&r.ix().len()),
                map.len(&r.iy().len())
            )
            .unwrap();
        }
        writeln!(svg, "  </g>").unwrap();
    }

    for (ri, region) in regions.iter().enumerate() {
        let color = PALETTE[ri % PALETTE.len()];
        writeln!(
            svg,
            r#"  <g id="region-{ri}" data-name="{}" fill="{color}" fill-opacity="0.55" stroke="{color}" stroke-width="0.8">"#,
            xml_escape(&region.owner)
        )
        .unwrap();
        writeln!(
            svg,
            r#"    <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke-dasharray="3,3" stroke-width="0.6"/>"#,
            map.x(region.mbr.ix().lo()),
            map.y(region.mbr.iy().hi()),
            map.len(&region.mbr.ix().len()),
            map.len(&region.mbr.iy().len())
        )
        .unwrap();
        for (pi, prim) in region.primitives.iter().enumerate() {
            match prim {
                Primitive::Rect(r) => {
                    writeln!(
                        svg,
                        r#"    <rect x="{}" y="{}" width="{}" height="{}"/>"#,
                        map.x(r.ix().lo()),
                        map.y(r.iy().hi()),
                        map.len(&r.ix().len()),
                        map.len(&r.iy().len())
                    )
                    .unwrap();
                }
                Primitive::Disk { center, radius } => {
                    writeln!(
                        svg,
                        r#"    <circle cx="{}" cy="{}" r="{}"/>"#,
                        map.x(&center.x),
                        map.y(&center.y),
                        map.len(radius)
                    )
                    .unwrap();
                }
                Primitive::HalfDisk { center, radius, side } => {
                    let (p1, p2, sweep) = match side {
                        // endpoints ordered so the screen arc bulges into the kept half
                        Side::Left => (
                            Point::new(center.x.clone(), &center.y + radius),
                            Point::new(center.x.clone(), &center.y - radius),
                            0,
                        ),
                        Side::Right => (
                            Point::new(center.x.clone(), &center.y + radius),
                            Point::new(center.x.clone(), &center.y - radius),
                            1,
                        ),
                        Side::Up => (
                            Point::new(&center.x - radius, center.y.clone()),
                            Point::new(&center.x + radius, center.y.clone()),
                            1,
                        ),
                        Side::Down => (
                            Point::new(&center.x - radius, center.y.clone()),
                            Point::new(&center.x + radius, center.y.clone()),
                            0,
                        ),
                    };
                    writeln!(
                        svg,
                        r#"    <path d="M {} {} A {} {} 0 0 {} {} {} Z"/>"#,
                        map.x(&p1.x),
                        map.y(&p1.y),
                        map.len(radius),
                        map.len(radius),
                        sweep,
                        map.x(&p2.x),
                        map.y(&p2.y)
                    )
                    .unwrap();
                }
                Primitive::ClippedDisk { center, radius, clip } => {
                    writeln!(
                        svg,
                        r#"    <clipPath id="clip-{ri}-{pi}"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
                        map.x(clip.ix().lo()),
                        map.y(clip.iy().hi()),
                        map.len(&clip.ix().len()),
                        map.len(&clip.iy().len())
                    )
                    .unwrap();
                    writeln!(
                        svg,
                        r#"    <circle cx="{}" cy="{}" r="{}" clip-path="url(#clip-{ri}-{pi})"/>"#,
                        map.x(&center.x),
                        map.y(&center.y),
                        map.len(radius)
                    )
                    .unwrap();
                }
            }
        }
        writeln!(svg, "  </g>").unwrap();
    }

    let mut seen: Vec<&Point> = Vec::new();
    let mut tangency_lines: Vec<String> = Vec::new();
    for region in regions {
        for (_, p) in &region.tangencies {
            if seen.contains(&p) {
                continue;
            }
            seen.push(p);
            tangency_lines.push(format!(
                r##"    <circle cx="{}" cy="{}" r="2.5" fill="#000000"/>"##,
                map.x(&p.x),
                map.y(&p.y)
            ));
        }
    }
    if !tangency_lines.is_empty() {
        writeln!(svg, r#"  <g id="tangencies">"#).unwrap();
        for line in tangency_lines {
            writeln!(svg, "{line}").unwrap();
        }
        writeln!(svg, "  </g>").unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::rat;

    fn basic_net(n: usize, entries: &[(usize, usize, Rcc8Basic)]) -> Network {
        let rcc = rcc8_calculus();
        let mut net = Network::universal(rcc, n);
        for &(i, j, b) in entries {
            net.set(i, j, rcc.basic(b.index()));
        }
        net
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn compatible_examples() {
        let net = basic_net(2, &[(0, 1, Rcc8Basic::Ntpp)]);
        let inner = Rectangle::new(
            Interval::new(rat(1, 5), rat(4, 5)).unwrap(),
            Interval::new(rat(1, 5), rat(4, 5)).unwrap(),
        );
        let outer = Rectangle::from_ints(0, 1, 0, 1);
        assert!(compatible(&[inner, outer.clone()], &net).unwrap().is_empty());

        let net_ec = basic_net(2, &[(0, 1, Rcc8Basic::Ec)]);
        let left = Rectangle::from_ints(0, 1, 0, 1);
        let right = Rectangle::from_ints(1, 2, 0, 1);
        let violations = compatible(&[left, right], &net_ec).unwrap();
        assert_eq!(violations.len(), 2); // both directions report the degenerate overlap

        let net_eq = basic_net(2, &[(0, 1, Rcc8Basic::Eq)]);
        assert!(compatible(&[outer.clone(), outer.clone()], &net_eq).unwrap().is_empty());
    }

    #[test]
    fn levels_follow_nesting() {
        let net = basic_net(
            3,
            &[(0, 1, Rcc8Basic::Ntpp), (1, 2, Rcc8Basic::Ntpp), (0, 2, Rcc8Basic::Ntpp)],
        );
        assert_eq!(ntp_levels(&net).unwrap(), vec![1, 2, 3]);
        let flat = basic_net(2, &[(0, 1, Rcc8Basic::Dc)]);
        assert_eq!(ntp_levels(&flat).unwrap(), vec![1, 1]);
    }

    #[test]
    fn single_variable_realization() {
        let net = basic_net(1, &[]);
        let r = Rectangle::from_ints(0, 2, 0, 1);
        let regions = realize_regions(&net, &[r.clone()], &names(1)).unwrap();
        assert_eq!(regions[0].computed_mbr(), r);
        let report = verify_regions(&regions, &net).unwrap();
        assert!(report.all_match());
    }

    #[test]
    fn ec_pair_realization_roundtrip() {
        let net = basic_net(2, &[(0, 1, Rcc8Basic::Ec)]);
        let r1 = Rectangle::from_ints(0, 2, 0, 1);
        let r2 = Rectangle::from_ints(1, 3, 0, 1);
        let regions = realize_regions(&net, &[r1.clone(), r2.clone()], &names(2)).unwrap();
        assert_eq!(regions[0].computed_mbr(), r1);
        assert_eq!(regions[1].computed_mbr(), r2);
        assert_eq!(regions[0].tangencies.len(), 1);
        let report = verify_regions(&regions, &net).unwrap();
        assert!(report.all_match(), "report: {report:?}");
    }

    #[test]
    fn ntpp_pair_realization_roundtrip() {
        let net = basic_net(2, &[(0, 1, Rcc8Basic::Ntpp)]);
        let inner = Rectangle::new(
            Interval::new(rat(1, 4), rat(3, 4)).unwrap(),
            Interval::new(rat(1, 4), rat(3, 4)).unwrap(),
        );
        let outer = Rectangle::from_ints(0, 1, 0, 1);
        let regions = realize_regions(&net, &[inner, outer], &names(2)).unwrap();
        let report = verify_regions(&regions, &net).unwrap();
        assert!(report.all_match(), "report: {report:?}");
    }

    #[test]
    fn po_with_identical_rectangles() {
        let net = basic_net(2, &[(0, 1, Rcc8Basic::Po)]);
        let r = Rectangle::from_ints(0, 1, 0, 1);
        let regions = realize_regions(&net, &[r.clone(), r], &names(2)).unwrap();
        let report = verify_regions(&regions, &net).unwrap();
        assert!(report.all_match(), "report: {report:?}");
    }

    #[test]
    fn eq_pair_shares_one_region() {
        let net = basic_net(2, &[(0, 1, Rcc8Basic::Eq)]);
        let r = Rectangle::from_ints(0, 1, 0, 1);
        let regions = realize_regions(&net, &[r.clone(), r], &names(2)).unwrap();
        let report = verify_regions(&regions, &net).unwrap();
        assert!(report.all_match(), "report: {report:?}");
    }

    #[test]
    fn rect_union_regions_verify_via_grid() {
        // a rectangle with a notch keeps the full bounding rectangle but
        // is a tangential part of the solid rectangle
        let solid = SymbolicRegion {
            owner: "r".into(),
            mbr: Rectangle::from_ints(0, 3, 0, 2),
            primitives: vec![Primitive::Rect(Rectangle::from_ints(0, 3, 0, 2))],
            tangencies: vec![],
            contains: vec!["q".into()],
        };
        let notched = SymbolicRegion {
            owner: "q".into(),
            mbr: Rectangle::from_ints(0, 3, 0, 2),
            primitives: vec![
                Primitive::Rect(Rectangle::from_ints(0, 1, 0, 2)),
                Primitive::Rect(Rectangle::from_ints(0, 3, 0, 1)),
                Primitive::Rect(Rectangle::from_ints(2, 3, 0, 2)),
            ],
            tangencies: vec![],
            contains: vec![],
        };
        assert_eq!(region_relation(&notched, &solid), Rcc8Basic::Tpp);
        assert_eq!(
            ra_relation_of(&notched.mbr, &solid.mbr),
            RaBasic::new(IaBasic::Eq, IaBasic::Eq)
        );
        let same = region_relation(&solid, &solid.clone());
        assert_eq!(same, Rcc8Basic::Eq);
    }

    #[test]
    fn svg_deterministic_and_structured() {
        let net = basic_net(2, &[(0, 1, Rcc8Basic::Ec)]);
        let r1 = Rectangle::from_ints(0, 2, 0, 1);
        let r2 = Rectangle::from_ints(1, 3, 0, 1);
        let rects = vec![r1, r2];
        let regions = realize_regions(&net, &rects, &names(2)).unwrap();
        let svg1 = to_svg(&regions, Some(&rects));
        let svg2 = to_svg(&regions, Some(&rects));
        assert_eq!(svg1, svg2);
        assert_eq!(svg1.matches(r#"<g id="region-"#).count(), 2);
        assert_eq!(svg1.matches(r#"<g id="tangencies">"#).count(), 1);
        assert_eq!(svg1.matches(r#"r="2.5""#).count(), 1);
        let empty = to_svg(&[], None);
        assert!(empty.contains("<svg"));
        assert!(empty.ends_with("</svg>\n"));
    }
}
