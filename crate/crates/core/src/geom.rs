//! Exact rational predicates on convex sets bounded by circles and
//! axis-parallel lines.
//!
//! Everything is decided over arbitrary-precision rationals; no floating
//! point, no sampling. Nonemptiness of an intersection of several convex
//! constraints reduces by Helly's theorem in the plane to triple checks,
//! and the only nontrivial triple (two disks and a halfplane) reduces to a
//! sign analysis of a rational quadratic.

use num_traits::{Signed, Zero};

use crate::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::new(Rat::from_integer(x.into()), Rat::from_integer(y.into()))
    }
}

pub fn dist2(p: &Point, q: &Point) -> Rat {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    &dx * &dx + &dy * &dy
}

/// Axis-parallel halfplane constraint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HalfPlane {
    XLe(Rat),
    XGe(Rat),
    YLe(Rat),
    YGe(Rat),
}

impl HalfPlane {
    fn holds(&self, p: &Point, strict: bool) -> bool {
        match self {
            HalfPlane::XLe(a) => if strict { p.x < *a } else { p.x <= *a },
            HalfPlane::XGe(a) => if strict { p.x > *a } else { p.x >= *a },
            HalfPlane::YLe(a) => if strict { p.y < *a } else { p.y <= *a },
            HalfPlane::YGe(a) => if strict { p.y > *a } else { p.y >= *a },
        }
    }
}

#[derive(Clone, Debug)]
pub struct Disk {
    pub center: Point,
    pub radius: Rat,
}

impl Disk {
    fn holds(&self, p: &Point, strict: bool) -> bool {
        let d2 = dist2(&self.center, p);
        let r2 = &self.radius * &self.radius;
        if strict {
            d2 < r2
        } else {
            d2 <= r2
        }
    }
}

/// A convex region: at most one disk constraint plus axis-parallel
/// halfplane constraints.
#[derive(Clone, Debug, Default)]
pub struct Convex {
    pub disk: Option<Disk>,
    pub halves: Vec<HalfPlane>,
}

impl Convex {
    pub fn contains(&self, p: &Point, strict: bool) -> bool {
        self.disk.as_ref().map_or(true, |d| d.holds(p, strict))
            && self.halves.iter().all(|h| h.holds(p, strict))
    }
}

/// Possibly unbounded axis-aligned box accumulated from halfplanes.
#[derive(Clone, Debug)]
struct BoxBounds {
    xlo: Option<Rat>,
    xhi: Option<Rat>,
    ylo: Option<Rat>,
    yhi: Option<Rat>,
}

impl BoxBounds {
    fn from_halves(halves: &[&HalfPlane]) -> BoxBounds {
        let mut b = BoxBounds { xlo: None, xhi: None, ylo: None, yhi: None };
        for h in halves {
            match h {
                HalfPlane::XLe(a) => {
                    b.xhi = Some(b.xhi.map_or(a.clone(), |v: Rat| v.min(a.clone())));
                }
                HalfPlane::XGe(a) => {
                    b.xlo = Some(b.xlo.map_or(a.clone(), |v: Rat| v.max(a.clone())));
                }
                HalfPlane::YLe(a) => {
                    b.yhi = Some(b.yhi.map_or(a.clone(), |v: Rat| v.min(a.clone())));
                }
                HalfPlane::YGe(a) => {
                    b.ylo = Some(b.ylo.map_or(a.clone(), |v: Rat| v.max(a.clone())));
                }
            }
        }
        b
    }

    fn feasible(&self, strict: bool) -> bool {
        let ok = |lo: &Option<Rat>, hi: &Option<Rat>| match (lo, hi) {
            (Some(l), Some(h)) => {
                if strict {
                    l < h
                } else {
                    l <= h
                }
            }
            _ => true,
        };
        ok(&self.xlo, &self.xhi) && ok(&self.ylo, &self.yhi)
    }

    fn clamp(&self, p: &Point) -> Point {
        let clamp1 = |v: &Rat, lo: &Option<Rat>, hi: &Option<Rat>| {
            let mut out = v.clone();
            if let Some(l) = lo {
                if out < *l {
                    out = l.clone();
                }
            }
            if let Some(h) = hi {
                if out > *h {
                    out = h.clone();
                }
            }
            out
        };
        Point::new(clamp1(&p.x, &self.xlo, &self.xhi), clamp1(&p.y, &self.ylo, &self.yhi))
    }
}

/// Disk together with up to a box of halfplanes.
fn disk_box_feasible(disk: &Disk, halves: &[&HalfPlane], strict: bool) -> bool {
    let b = BoxBounds::from_halves(halves);
    if !b.feasible(strict) {
        return false;
    }
    if strict && disk.radius.is_zero() {
        return false;
    }
    let nearest = b.clamp(&disk.center);
    let d2 = dist2(&disk.center, &nearest);
    let r2 = &disk.radius * &disk.radius;
    if strict {
        // open box is nonempty; the infimum of the distance over the open
        // box equals the distance to the closed box
        d2 < r2
    } else {
        d2 <= r2
    }
}

/// Sign analysis of A x^2 + B x + C with A > 0 and real roots:
/// does the smaller root compare below `at`?
fn quadratic_min_root_below(a2: &Rat, b1: &Rat, c0: &Rat, at: &Rat, strict: bool) -> bool {
    let q = a2 * at * at + b1 * at + c0;
    let slope = Rat::from_integer(2.into()) * a2 * at + b1;
    if strict {
        q.is_negative() || slope.is_positive()
    } else {
        !q.is_positive() || slope.is_positive()
    }
}

/// Does the lens of two disks (known nonempty, distinct centers, neither
/// west pole inside the other disk) have min x below `at`? The extreme is
/// then a circle-circle crossing point, whose x solves a rational
/// quadratic.
fn lens_crossing_min_x_below(d1: &Disk, d2: &Disk, at: &Rat, strict: bool) -> bool {
    let (c1, c2) = (&d1.center, &d2.center);
    let two = Rat::from_integer(2.into());
    // radical line: 2(c2x-c1x) x + 2(c2y-c1y) y = K
    let dx = &two * (&c2.x - &c1.x);
    let dy = &two * (&c2.y - &c1.y);
    let k = &d1.radius * &d1.radius - &d2.radius * &d2.radius - &c1.x * &c1.x - &c1.y * &c1.y
        + &c2.x * &c2.x
        + &c2.y * &c2.y;
    if dy.is_zero() {
        // vertical radical line: both crossings share one rational x
        debug_assert!(!dx.is_zero());
        let x_star = &k / &dx;
        return if strict { x_star < *at } else { x_star <= *at };
    }
    // substitute y = (K - dx*x)/dy into circle 1 and multiply by dy^2:
    // dy^2 (x - c1x)^2 + (m - dx*x)^2 - r1^2 dy^2 = 0, m = K - c1y*dy
    let dy2 = &dy * &dy;
    let m = &k - &(&c1.y * &dy);
    let a2 = &dy2 + &(&dx * &dx);
    let b1 = -(&two * &(&dy2 * &c1.x + &m * &dx));
    let c0 = &dy2 * &(&c1.x * &c1.x) + &m * &m - &(&d1.radius * &d1.radius) * &dy2;
    debug_assert!(a2.is_positive());
    debug_assert!({
        let four = Rat::from_integer(4.into());
        &b1 * &b1 - four * &a2 * &c0 >= Rat::zero()
    });
    quadratic_min_root_below(&a2, &b1, &c0, at, strict)
}

fn mirror_x(d: &Disk) -> Disk {
    Disk { center: Point::new(-d.center.x.clone(), d.center.y.clone()), radius: d.radius.clone() }
}

fn swap_xy(d: &Disk) -> Disk {
    Disk { center: Point::new(d.center.y.clone(), d.center.x.clone()), radius: d.radius.clone() }
}

/// min_x of the lens of two disks compares below `at`. Assumes the closed
/// lens is nonempty.
fn lens_min_x_below(d1: &Disk, d2: &Disk, at: &Rat, strict: bool) -> bool {
    // pole shortcuts: the global min-x point of either disk, if inside the
    // other disk, is the lens minimum
    let w1 = Point::new(&d1.center.x - &d1.radius, d1.center.y.clone());
    if d2.holds(&w1, false) {
        return if strict { w1.x < *at } else { w1.x <= *at };
    }
    let w2 = Point::new(&d2.center.x - &d2.radius, d2.center.y.clone());
    if d1.holds(&w2, false) {
        return if strict { w2.x < *at } else { w2.x <= *at };
    }
    lens_crossing_min_x_below(d1, d2, at, strict)
}

/// Two disks plus at most one halfplane.
fn lens_halfplane_feasible(d1: &Disk, d2: &Disk, half: Option<&HalfPlane>, strict: bool) -> bool {
    let sum = &d1.radius + &d2.radius;
    let cc = dist2(&d1.center, &d2.center);
    let sum2 = &sum * &sum;
    let lens_ok = if strict {
        cc < sum2 && !d1.radius.is_zero() && !d2.radius.is_zero()
    } else {
        cc <= sum2
    };
    if !lens_ok {
        return false;
    }
    if d1.center == d2.center {
        // lens is the smaller disk
        let small = if d1.radius <= d2.radius { d1 } else { d2 };
        let halves: Vec<&HalfPlane> = half.into_iter().collect();
        return disk_box_feasible(small, &halves, strict);
    }
    let Some(h) = half else { return true };
    // for the strict variant the open lens is nonempty here and dense in
    // the closed lens, so extreme-point comparisons carry over
    match h {
        HalfPlane::XLe(a) => lens_min_x_below(d1, d2, a, strict),
        HalfPlane::XGe(a) => lens_min_x_below(&mirror_x(d1), &mirror_x(d2), &-a.clone(), strict),
        HalfPlane::YLe(a) => lens_min_x_below(&swap_xy(d1), &swap_xy(d2), a, strict),
        HalfPlane::YGe(a) => lens_min_x_below(
            &mirror_x(&swap_xy(d1)),
            &mirror_x(&swap_xy(d2)),
            &-a.clone(),
            strict,
        ),
    }
}

enum Constraint<'a> {
    D(&'a Disk),
    H(&'a HalfPlane),
}

fn group_feasible(cs: &[&Constraint<'_>], strict: bool) -> bool {
    let mut disks: Vec<&Disk> = Vec::new();
    let mut halves: Vec<&HalfPlane> = Vec::new();
    for c in cs {
        match c {
            Constraint::D(d) => disks.push(d),
            Constraint::H(h) => halves.push(h),
        }
    }
    match disks.len() {
        0 => BoxBounds::from_halves(&halves).feasible(strict),
        1 => disk_box_feasible(disks[0], &halves, strict),
        2 => lens_halfplane_feasible(disks[0], disks[1], halves.first().copied(), strict),
        _ => unreachable!("at most two disk constraints arise from a primitive pair"),
    }
}

/// Nonemptiness of the intersection of two convex sets, each at most one
/// disk with axis-parallel halfplanes. Every triple of atomic constraints
/// must be feasible (Helly in the plane); triples never contain more than
/// two disks here, and every triple shape is decidable exactly.
pub fn convex_pair_intersects(a: &Convex, b: &Convex, strict: bool) -> bool {
    let mut cs: Vec<Constraint<'_>> = Vec::new();
    if let Some(d) = &a.disk {
        cs.push(Constraint::D(d));
    }
    for h in &a.halves {
        cs.push(Constraint::H(h));
    }
    if let Some(d) = &b.disk {
        cs.push(Constraint::D(d));
    }
    for h in &b.halves {
        cs.push(Constraint::H(h));
    }
    let n = cs.len();
    match n {
        0 => true,
        1 => group_feasible(&[&cs[0]], strict),
        2 => group_feasible(&[&cs[0], &cs[1]], strict),
        _ => {
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        if !group_feasible(&[&cs[i], &cs[j], &cs[k]], strict) {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn disk(cx: i64, cy: i64, rnum: i64, rden: i64) -> Convex {
        Convex {
            disk: Some(Disk { center: Point::from_ints(cx, cy), radius: rat(rnum, rden) }),
            halves: vec![],
        }
    }

    fn halfdisk_left(cx: i64, cy: i64, rnum: i64, rden: i64) -> Convex {
        let mut c = disk(cx, cy, rnum, rden);
        c.halves.push(HalfPlane::XLe(rat(cx, 1)));
        c
    }

    fn halfdisk_right(cx: i64, cy: i64, rnum: i64, rden: i64) -> Convex {
        let mut c = disk(cx, cy, rnum, rden);
        c.halves.push(HalfPlane::XGe(rat(cx, 1)));
        c
    }

    fn rect(x0: i64, x1: i64, y0: i64, y1: i64) -> Convex {
        Convex {
            disk: None,
            halves: vec![
                HalfPlane::XGe(rat(x0, 1)),
                HalfPlane::XLe(rat(x1, 1)),
                HalfPlane::YGe(rat(y0, 1)),
                HalfPlane::YLe(rat(y1, 1)),
            ],
        }
    }

    #[test]
    fn disjoint_and_touching_disks() {
        let a = disk(0, 0, 1, 1);
        let far = disk(5, 0, 1, 1);
        assert!(!convex_pair_intersects(&a, &far, false));
        let tangent = disk(2, 0, 1, 1);
        assert!(convex_pair_intersects(&a, &tangent, false));
        assert!(!convex_pair_intersects(&a, &tangent, true));
        let overlap = disk(1, 0, 1, 1);
        assert!(convex_pair_intersects(&a, &overlap, true));
    }

    #[test]
    fn pythagorean_tangency_is_exact() {
        // centers (0,0) and (3,4): distance exactly 5
        let a = disk(0, 0, 2, 1);
        let b = disk(3, 4, 3, 1);
        assert!(convex_pair_intersects(&a, &b, false));
        assert!(!convex_pair_intersects(&a, &b, true));
        let b_shrunk = disk(3, 4, 29, 10);
        assert!(!convex_pair_intersects(&a, &b_shrunk, false));
    }

    #[test]
    fn half_disk_seam() {
        // left and right halves of one disk share only the diameter
        let l = halfdisk_left(0, 0, 1, 1);
        let r = halfdisk_right(0, 0, 1, 1);
        assert!(convex_pair_intersects(&l, &r, false));
        assert!(!convex_pair_intersects(&l, &r, true));
    }

    #[test]
    fn half_disk_against_crossing_disk() {
        let l = halfdisk_left(0, 0, 1, 1);
        // neighbor whose west pole is the cut-line center: closed sets meet
        // at exactly that point, interiors do not
        let neighbor = disk(1, 0, 1, 1);
        assert!(convex_pair_intersects(&l, &neighbor, false));
        assert!(!convex_pair_intersects(&l, &neighbor, true));
        // pushed past the cut line entirely
        let past = disk(2, 0, 1, 1);
        assert!(!convex_pair_intersects(&l, &past, false));
        // widen the neighbor: crossings move left of the cut
        let wide = Convex {
            disk: Some(Disk { center: Point::from_ints(1, 0), radius: rat(7, 4) }),
            halves: vec![],
        };
        assert!(convex_pair_intersects(&l, &wide, true));
        // off-axis variant exercising the quadratic branch
        let tilted = Convex {
            disk: Some(Disk { center: Point::from_ints(1, 1), radius: rat(3, 2) }),
            halves: vec![],
        };
        assert!(convex_pair_intersects(&l, &tilted, true));
        // crossings at x = (39 - sqrt(527))/64 > 0: lens stays right of the cut
        let tilted_small = Convex {
            disk: Some(Disk { center: Point::from_ints(1, 1), radius: rat(3, 4) }),
            halves: vec![],
        };
        assert!(!convex_pair_intersects(&l, &tilted_small, false));
    }

    #[test]
    fn rect_rect_and_disk_rect() {
        let a = rect(0, 2, 0, 2);
        let b = rect(2, 4, 0, 2);
        assert!(convex_pair_intersects(&a, &b, false));
        assert!(!convex_pair_intersects(&a, &b, true));
        let c = rect(3, 5, 3, 5);
        assert!(!convex_pair_intersects(&a, &c, false));
        let d = disk(3, 1, 1, 1);
        assert!(convex_pair_intersects(&d, &a, false));
        assert!(!convex_pair_intersects(&d, &a, true));
        let d2 = disk(3, 1, 3, 2);
        assert!(convex_pair_intersects(&d2, &a, true));
        // corner probe: distance from (3,3) to corner (2,2) is sqrt(2) > 1
        let corner = disk(3, 3, 1, 1);
        assert!(!convex_pair_intersects(&corner, &a, false));
    }

    #[test]
    fn sampling_never_contradicts_the_predicate() {
        // dense rational sampling can only under-approximate; any sampled
        // hit must be confirmed by the exact predicate
        let shapes = vec![
            disk(0, 0, 1, 1),
            halfdisk_left(0, 0, 1, 1),
            halfdisk_right(1, 0, 1, 1),
            rect(-1, 1, -1, 1),
            disk(1, 1, 1, 2),
        ];
        for a in &shapes {
            for b in &shapes {
                let closed = convex_pair_intersects(a, b, false);
                let open = convex_pair_intersects(a, b, true);
                assert!(!open || closed);
                let mut hit_closed = false;
                let mut hit_open = false;
                for xi in -12..=12 {
                    for yi in -12..=12 {
                        let p = Point::new(rat(xi, 4), rat(yi, 4));
                        if a.contains(&p, false) && b.contains(&p, false) {
                            hit_closed = true;
                        }
                        if a.contains(&p, true) && b.contains(&p, true) {
                            hit_open = true;
                        }
                    }
                }
                assert!(!hit_closed || closed);
                assert!(!hit_open || open);
            }
        }
    }
}
