//! Propagation and decision procedures: path consistency, the combined
//! fixpoint interleaving pairwise restriction with per-calculus
//! propagation, scenario extraction, the complete decision for networks
//! whose directional side lives in the 49-atom fragment, a sound check for
//! general directional constraints, and the approximate solving pipeline.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::algebra::Relation;
use crate::bits::Bits;
use crate::boxes::{
    basic_ra_network, dir49_hull, in_dir49, ra_calculus, rectangle_solution, RaBasic, Rectangle,
};
use crate::error::{Error, Inconsistent};
use crate::interaction::{biclose, JointNetwork};
use crate::interval::{approximate_solution, deviation, relation_of, IaBasic};
use crate::network::Network;
use crate::realize::{compatible, realize_regions, SymbolicRegion};
use crate::topology::{refine_basic, H8Membership};
use crate::Rat;

/// Solver outcome.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
}

impl Status {
    pub fn token(self) -> &'static str {
        match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::Unknown => "unknown",
        }
    }
}

/// Which fragment the input was recognized to lie in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fragment {
    /// None when membership data cannot certify the topological side.
    pub top_in_h8: Option<bool>,
    pub dir_in_dir49: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn token(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Per-pair, per-axis deviation of the approximate solution from the exact
/// directional constraint.
#[derive(Clone, Debug)]
pub struct ChiEntry {
    pub i: usize,
    pub j: usize,
    pub axis: Axis,
    pub basic: IaBasic,
    pub chi: Rat,
}

/// Constructive evidence for a sat verdict.
#[derive(Clone, Debug)]
pub struct Witness {
    pub scenario_top: Network,
    pub scenario_dir: Network,
    pub rectangles: Vec<Rectangle>,
    pub regions: Vec<SymbolicRegion>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub fragment: Fragment,
    pub witness: Option<Witness>,
    pub chi_report: Option<Vec<ChiEntry>>,
    pub trace: Vec<String>,
}

impl Verdict {
    fn new(status: Status, fragment: Fragment) -> Verdict {
        Verdict { status, fragment, witness: None, chi_report: None, trace: Vec::new() }
    }
}

/// Queue-driven path consistency: refine every pair against all
/// compositions through a third variable until stable. Complete for
/// atomic networks of the registered calculi and for the tractable
/// topological fragment.
pub fn path_consistency(net: &Network) -> Result<Network, Inconsistent> {
    let mut m = net.clone();
    if let Some((i, j)) = m.has_empty_entry() {
        return Err(Inconsistent { i, j });
    }
    let n = m.num_vars();
    let mut queue: VecDeque<(usize, usize)> = m.pairs().collect();
    let mut queued = vec![true; n * n];
    let revise = |m: &mut Network,
                      queue: &mut VecDeque<(usize, usize)>,
                      queued: &mut Vec<bool>,
                      i: usize,
                      j: usize,
                      k: usize|
     -> Result<(), Inconsistent> {
        // refine (i,k) through j
        let old = m.get(i, k);
        let refined = old.intersect(&m.get(i, j).compose(&m.get(j, k)));
        if refined != old {
            if refined.is_empty() {
                return Err(Inconsistent { i, j: k });
            }
            m.set(i, k, refined);
            let (a, b) = if i < k { (i, k) } else { (k, i) };
            if !queued[a * n + b] {
                queued[a * n + b] = true;
                queue.push_back((a, b));
            }
        }
        Ok(())
    };
    while let Some((i, j)) = queue.pop_front() {
        queued[i * n + j] = false;
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            revise(&mut m, &mut queue, &mut queued, i, j, k)?;
            revise(&mut m, &mut queue, &mut queued, k, i, j)?;
        }
    }
    Ok(m)
}

/// Reference implementation: sweep all triples until a full pass changes
/// nothing. Same fixpoint as [`path_consistency`]; kept for cross-checks.
pub fn path_consistency_naive(net: &Network) -> Result<Network, Inconsistent> {
    let mut m = net.clone();
    if let Some((i, j)) = m.has_empty_entry() {
        return Err(Inconsistent { i, j });
    }
    let n = m.num_vars();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let old = m.get(i, j);
                    let refined = old.intersect(&m.get(i, k).compose(&m.get(k, j)));
                    if refined != old {
                        if refined.is_empty() {
                            return Err(Inconsistent { i, j });
                        }
                        m.set(i, j, refined);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Ok(m);
        }
    }
}

/// Fixpoint of pairwise mutual restriction interleaved with per-calculus
/// path consistency. The output is restriction-stable with both component
/// networks path-consistent, and equivalent to the input.
pub fn bipath_consistency(net: &JointNetwork) -> Result<JointNetwork, Inconsistent> {
    let mut current = net.clone();
    loop {
        let closed = biclose(&current)?;
        let top = path_consistency(&closed.top)?;
        let dir = path_consistency(&closed.dir)?;
        let next = JointNetwork { vars: closed.vars, top, dir };
        if next == current {
            return Ok(next);
        }
        current = next;
    }
}

/// Entrywise canonical basic refinement of a path-consistent topological
/// network drawn from the tractable subclass.
pub fn extract_scenario(net: &Network) -> Result<Network, Error> {
    let mut out = Network::universal(net.calculus(), net.num_vars());
    for (i, j) in net.pairs() {
        let basic = refine_basic(&net.get(i, j))?;
        out.set(i, j, net.calculus().basic(basic.index()));
    }
    Ok(out)
}

/// The 49 basic rectangle relations whose components are fixed points of
/// the relaxation map.
fn relax_image_mask() -> Bits {
    let mut bits = Bits::EMPTY;
    for i in 0..169 {
        let b = RaBasic::from_index(i);
        if b.x.is_relax_fixed() && b.y.is_relax_fixed() {
            bits.insert(i);
        }
    }
    bits
}

/// Search a basic scenario of a rectangle network, restricted to
/// relax-fixed components. Sound and complete for relaxation-closed
/// entries; a propagation-surviving atomic assignment is satisfiable.
fn ra_scenario(net: &Network) -> Option<Network> {
    let ra = ra_calculus();
    let mask = ra.relation(relax_image_mask());
    let mut restricted = net.clone();
    for (i, j) in net.pairs().collect::<Vec<_>>() {
        let cut = restricted.get(i, j).intersect(&mask);
        if cut.is_empty() {
            debug_assert!(
                false,
                "relaxation-closed entries always meet the relax-fixed image"
            );
            return None;
        }
        restricted.set(i, j, cut);
    }
    fn search(net: Network) -> Option<Network> {
        let pc = path_consistency(&net).ok()?;
        let split = pc
            .pairs()
            .filter(|&(i, j)| !pc.get(i, j).is_basic())
            .min_by_key(|&(i, j)| pc.get(i, j).count());
        let Some((i, j)) = split else {
            return Some(pc);
        };
        let entry = pc.get(i, j);
        for b in entry.basics() {
            let mut next = pc.clone();
            next.set(i, j, pc.calculus().basic(b));
            if let Some(found) = search(next) {
                return Some(found);
            }
        }
        None
    }
    search(restricted)
}

fn record_diff(before: &Network, after: &Network, vars: &[String], side: &str, trace: &mut Vec<String>) {
    for (i, j) in before.pairs() {
        let (b, a) = (before.get(i, j), after.get(i, j));
        if b != a {
            trace.push(format!(
                "{side} ({},{}): {} -> {}",
                vars[i],
                vars[j],
                b.token_string(),
                a.token_string()
            ));
        }
    }
}

fn fragment_of(net: &JointNetwork, h8: &H8Membership) -> Fragment {
    let top_known = net.top.pairs().all(|(i, j)| h8.contains(&net.top.get(i, j)));
    let dir_ok = net.dir.pairs().all(|(i, j)| in_dir49(&net.dir.get(i, j)));
    Fragment { top_in_h8: if top_known { Some(true) } else { None }, dir_in_dir49: dir_ok }
}

/// Complete decision path for a joint network whose topological side is
/// certified inside the tractable subclass: run the combined fixpoint,
/// then decide the directional side independently. At the fixpoint, joint
/// satisfiability reduces to the two independent per-calculus checks.
fn decide_separable(
    net: &JointNetwork,
    fragment: Fragment,
    constructive: bool,
) -> Result<Verdict, Error> {
    let mut verdict = Verdict::new(Status::Unknown, fragment);
    let fixed = match bipath_consistency(net) {
        Err(inc) => {
            verdict.status = Status::Unsat;
            verdict.trace.push(format!("fixpoint emptied pair ({}, {})", net.vars[inc.i], net.vars[inc.j]));
            return Ok(verdict);
        }
        Ok(f) => f,
    };
    record_diff(&net.top, &fixed.top, &net.vars, "top", &mut verdict.trace);
    record_diff(&net.dir, &fixed.dir, &net.vars, "dir", &mut verdict.trace);

    // the topological side of the fixpoint is path-consistent over the
    // tractable subclass, hence satisfiable; satisfiability of the
    // directional side settles the joint question
    let Some(scenario_dir) = ra_scenario(&fixed.dir) else {
        verdict.status = Status::Unsat;
        verdict.trace.push("directional side has no scenario".into());
        return Ok(verdict);
    };
    verdict.status = Status::Sat;
    if !constructive {
        return Ok(verdict);
    }

    let scenario_top = extract_scenario(&fixed.top)?;
    for (i, j) in scenario_top.pairs() {
        debug_assert!(scenario_top.get(i, j).is_subset(&fixed.top.get(i, j)));
        debug_assert!(scenario_dir.get(i, j).is_subset(&fixed.dir.get(i, j)));
    }
    let rects = rectangle_solution(&basic_ra_network(&scenario_dir)?)
        .map_err(|_| Error::UnsatisfiableAt { stage: "rectangle scenario" })?;
    let violations = compatible(&rects, &scenario_top)?;
    if !violations.is_empty() {
        return Err(Error::IncompatibleRectangles(violations.len()));
    }
    let regions = realize_regions(&scenario_top, &rects, &net.vars)?;
    verdict.witness = Some(Witness { scenario_top, scenario_dir, rectangles: rects, regions });
    Ok(verdict)
}

/// The 49-atom block containing a basic rectangle relation.
fn atom_block_of(basic: usize) -> Relation {
    let ra = ra_calculus();
    dir49_hull(&ra.basic(basic)).expect("single basic has a hull")
}

/// Does the relation touch two or more of the 49 atom blocks?
fn spans_multiple_blocks(rel: &Relation) -> bool {
    let mut first: Option<Relation> = None;
    for b in rel.basics() {
        let block = atom_block_of(b);
        match &first {
            None => first = Some(block),
            Some(f) => {
                if *f != block {
                    return true;
                }
            }
        }
    }
    false
}

/// Backtracking over basic topological refinements and directional atom
/// blocks; each leaf is separable because basic relations are in every
/// maximal tractable subclass.
fn decide_by_backtracking(
    net: &JointNetwork,
    fragment: Fragment,
    constructive: bool,
) -> Result<Verdict, Error> {
    fn search(
        net: JointNetwork,
        fragment: Fragment,
        constructive: bool,
    ) -> Result<Option<Verdict>, Error> {
        let fixed = match bipath_consistency(&net) {
            Err(_) => return Ok(None),
            Ok(f) => f,
        };
        // split a non-basic topological entry first
        if let Some((i, j)) = fixed
            .top
            .pairs()
            .filter(|&(i, j)| !fixed.top.get(i, j).is_basic())
            .min_by_key(|&(i, j)| fixed.top.get(i, j).count())
        {
            let entry = fixed.top.get(i, j);
            for b in entry.basics() {
                let mut next = fixed.clone();
                next.top.set(i, j, next.top.calculus().basic(b));
                if let Some(v) = search(next, fragment, constructive)? {
                    return Ok(Some(v));
                }
            }
            return Ok(None);
        }
        // then a directional entry spanning more than one atom block; an
        // entry inside a single block stays relaxation-closed and is
        // decided at the leaf
        if let Some((i, j)) = fixed
            .dir
            .pairs()
            .filter(|&(i, j)| spans_multiple_blocks(&fixed.dir.get(i, j)))
            .min_by_key(|&(i, j)| fixed.dir.get(i, j).count())
        {
            let entry = fixed.dir.get(i, j);
            let mut blocks: Vec<Relation> = Vec::new();
            for b in entry.basics() {
                let block = atom_block_of(b).intersect(&entry);
                if !blocks.contains(&block) {
                    blocks.push(block);
                }
            }
            for block in blocks {
                let mut next = fixed.clone();
                next.dir.set(i, j, block);
                if let Some(v) = search(next, fragment, constructive)? {
                    return Ok(Some(v));
                }
            }
            return Ok(None);
        }
        // leaf: the topological side is atomic, hence inside the subclass
        let verdict = decide_separable(&fixed, fragment, constructive)?;
        Ok(if verdict.status == Status::Sat { Some(verdict) } else { None })
    }
    match search(net.clone(), fragment, constructive)? {
        Some(v) => Ok(v),
        None => {
            let mut v = Verdict::new(Status::Unsat, fragment);
            v.trace.push("all refinements exhausted".into());
            Ok(v)
        }
    }
}

/// Complete decision for joint networks whose directional constraints are
/// unions of the 49 atom blocks. The topological side may be any
/// relations; membership data unlocks the no-backtracking path, otherwise
/// the decision backtracks over basic refinements.
pub fn decide_dir49(
    net: &JointNetwork,
    h8: &H8Membership,
    constructive: bool,
) -> Result<Verdict, Error> {
    for (i, j) in net.dir.pairs() {
        if !in_dir49(&net.dir.get(i, j)) {
            return Err(Error::OutsideDir49 { i, j });
        }
    }
    let fragment = fragment_of(net, h8);
    if fragment.top_in_h8 == Some(true) {
        decide_separable(net, fragment, constructive)
    } else {
        decide_by_backtracking(net, fragment, constructive)
    }
}

/// Sound, incomplete check for arbitrary directional constraints: an
/// emptied fixpoint or an unsatisfiable 49-atom generalization refutes the
/// network; otherwise the answer is unknown unless the directional side
/// was already inside the fragment.
pub fn check_general(net: &JointNetwork, h8: &H8Membership) -> Result<Verdict, Error> {
    let fragment = fragment_of(net, h8);
    if fragment.dir_in_dir49 {
        return decide_dir49(net, h8, true);
    }
    let mut verdict = Verdict::new(Status::Unknown, fragment);
    let fixed = match bipath_consistency(net) {
        Err(inc) => {
            verdict.status = Status::Unsat;
            verdict.trace.push(format!("fixpoint emptied pair ({}, {})", net.vars[inc.i], net.vars[inc.j]));
            return Ok(verdict);
        }
        Ok(f) => f,
    };
    let mut generalized = fixed.clone();
    for (i, j) in fixed.dir.pairs().collect::<Vec<_>>() {
        generalized.dir.set(i, j, dir49_hull(&fixed.dir.get(i, j)).map_err(|_| Error::EmptyRelation("hull"))?);
    }
    let inner = decide_dir49(&generalized, h8, false)?;
    verdict.trace = inner.trace;
    verdict.status = match inner.status {
        Status::Unsat => Status::Unsat,
        _ => Status::Unknown,
    };
    verdict.trace.push(match verdict.status {
        Status::Unsat => "generalization is unsatisfiable".into(),
        _ => "generalization is satisfiable; exact status open".into(),
    });
    Ok(verdict)
}

/// Approximate solving of a basic joint network: regions satisfy the
/// topological side exactly and each directional constraint up to a
/// deviation below `eps` per axis. Requires both sides independently
/// satisfiable and the 49-atom generalization jointly satisfiable.
pub fn epsilon_solve(net: &JointNetwork, eps: &Rat) -> Result<Verdict, Error> {
    if !(eps > &Rat::zero() && eps < &Rat::from_integer(1.into())) {
        return Err(Error::EpsilonRange);
    }
    if let Some((i, j)) = net.top.pairs().find(|&(i, j)| !net.top.get(i, j).is_basic()) {
        return Err(Error::NonBasicConstraint { i, j });
    }
    if let Some((i, j)) = net.dir.pairs().find(|&(i, j)| !net.dir.get(i, j).is_basic()) {
        return Err(Error::NonBasicConstraint { i, j });
    }
    let closed = biclose(net).map_err(|_| Error::UnsatisfiableAt { stage: "pairwise restriction" })?;
    debug_assert_eq!(&closed, net, "restriction of an atomic pair keeps or empties it");

    path_consistency(&closed.top).map_err(|_| Error::UnsatisfiableAt { stage: "topological network" })?;
    let axes = basic_ra_network(&closed.dir)?;
    let mut generalized = closed.clone();
    for (i, j) in closed.dir.pairs().collect::<Vec<_>>() {
        generalized.dir.set(i, j, dir49_hull(&closed.dir.get(i, j)).unwrap());
    }
    let gen_verdict = decide_dir49(&generalized, &H8Membership::builtin(), false)?;
    if gen_verdict.status != Status::Sat {
        return Err(Error::UnsatisfiableAt { stage: "generalized joint network" });
    }

    let xs = approximate_solution(&axes.x, eps).map_err(|e| match e {
        Error::UnsatisfiableAt { .. } => Error::UnsatisfiableAt { stage: "directional network (x axis)" },
        other => other,
    })?;
    let ys = approximate_solution(&axes.y, eps).map_err(|e| match e {
        Error::UnsatisfiableAt { .. } => Error::UnsatisfiableAt { stage: "directional network (y axis)" },
        other => other,
    })?;
    let rects: Vec<Rectangle> = xs
        .iter()
        .cloned()
        .zip(ys.iter().cloned())
        .map(|(ix, iy)| Rectangle::new(ix, iy))
        .collect();

    let violations = compatible(&rects, &closed.top)?;
    if !violations.is_empty() {
        return Err(Error::IncompatibleRectangles(violations.len()));
    }
    let regions = realize_regions(&closed.top, &rects, &net.vars)?;

    let n = net.num_vars();
    let mut chi_report = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let basic = RaBasic::from_index(closed.dir.get(i, j).single().unwrap());
            let chi_x = deviation(basic.x, &xs[i], &xs[j])?;
            let chi_y = deviation(basic.y, &ys[i], &ys[j])?;
            debug_assert!(&chi_x < eps && &chi_y < eps);
            chi_report.push(ChiEntry { i, j, axis: Axis::X, basic: basic.x, chi: chi_x });
            chi_report.push(ChiEntry { i, j, axis: Axis::Y, basic: basic.y, chi: chi_y });
        }
    }

    // the rectangles realize the relaxed directional scenario exactly
    let ra = ra_calculus();
    let mut scenario_dir = Network::universal(ra, n);
    for (i, j) in closed.dir.pairs() {
        let relaxed = RaBasic::from_index(closed.dir.get(i, j).single().unwrap()).relax();
        debug_assert_eq!(ra_relation_of_pair(&rects[i], &rects[j]), relaxed);
        scenario_dir.set(i, j, ra.basic(relaxed.index()));
    }

    let fragment = fragment_of(net, &H8Membership::builtin());
    let mut verdict = Verdict::new(Status::Sat, fragment);
    verdict.witness = Some(Witness {
        scenario_top: closed.top.clone(),
        scenario_dir,
        rectangles: rects,
        regions,
    });
    verdict.chi_report = Some(chi_report);
    verdict.trace.push(format!("deviation bound {eps}"));
    Ok(verdict)
}

fn ra_relation_of_pair(a: &Rectangle, b: &Rectangle) -> RaBasic {
    RaBasic { x: relation_of(a.ix(), b.ix()), y: relation_of(a.iy(), b.iy()) }
}

/// Verify a constructive witness against the *original* network: the
/// scenarios must refine it, the rectangles must solve the directional
/// scenario, and the regions must reproduce the topological scenario with
/// exact bounding rectangles.
pub fn verify_witness(net: &JointNetwork, witness: &Witness) -> Result<(), String> {
    for (i, j) in net.top.pairs() {
        if !witness.scenario_top.get(i, j).is_subset(&net.top.get(i, j)) {
            return Err(format!("topological scenario escapes the input at ({i},{j})"));
        }
        if !witness.scenario_dir.get(i, j).is_subset(&net.dir.get(i, j)) {
            return Err(format!("directional scenario escapes the input at ({i},{j})"));
        }
    }
    for (i, j) in net.dir.pairs() {
        let got = ra_relation_of_pair(&witness.rectangles[i], &witness.rectangles[j]);
        let want = witness.scenario_dir.get(i, j);
        if !want.contains_basic(got.index()) {
            return Err(format!("rectangles violate the directional scenario at ({i},{j})"));
        }
    }
    let report = crate::realize::verify_regions(&witness.regions, &witness.scenario_top)
        .map_err(|e| e.to_string())?;
    if !report.all_match() {
        return Err("regions do not reproduce the topological scenario".into());
    }
    for (idx, region) in witness.regions.iter().enumerate() {
        if region.computed_mbr() != witness.rectangles[idx] {
            return Err(format!("region {idx} bounding rectangle differs from its rectangle"));
        }
    }
    Ok(())
}
