//! Pairwise interaction between the topological and directional sides:
//! induced relations in each direction, mutual restriction of a constraint
//! pair, and network-level bi-closure.
//!
//! The two induced-relation tables are precomputed per basic relation at
//! startup so restriction inside propagation loops is a few bit operations.

use std::sync::OnceLock;

use crate::algebra::Relation;
use crate::bits::Bits;
use crate::boxes::{mbr_class, ra_calculus, MbrClass, RaBasic};
use crate::error::{Error, Inconsistent};
use crate::interval::IaBasic;
use crate::network::Network;
use crate::topology::{rcc8_calculus, Rcc8Basic};

/// Joint network: one topological and one directional constraint matrix
/// over the same variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JointNetwork {
    pub vars: Vec<String>,
    pub top: Network,
    pub dir: Network,
}

impl JointNetwork {
    pub fn universal(vars: Vec<String>) -> JointNetwork {
        assert!(!vars.is_empty());
        let n = vars.len();
        JointNetwork {
            vars,
            top: Network::universal(rcc8_calculus(), n),
            dir: Network::universal(ra_calculus(), n),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }
}

/// Rectangle relations consistent with a basic topological relation.
fn induced_ra_of_basic(theta: Rcc8Basic) -> Bits {
    use IaBasic::*;
    let block = |xs: &[IaBasic], ys: &[IaBasic]| {
        let mut bits = Bits::EMPTY;
        for &x in xs {
            for &y in ys {
                bits.insert(RaBasic::new(x, y).index());
            }
        }
        bits
    };
    match theta {
        Rcc8Basic::Eq => block(&[Eq], &[Eq]),
        Rcc8Basic::Ntpp => block(&[D], &[D]),
        Rcc8Basic::Ntppi => block(&[Di], &[Di]),
        Rcc8Basic::Tpp => block(&[S, D, F, Eq], &[S, D, F, Eq]),
        Rcc8Basic::Tppi => block(&[Si, Di, Fi, Eq], &[Si, Di, Fi, Eq]),
        Rcc8Basic::Dc => Bits::all_below(169),
        Rcc8Basic::Ec => {
            let mut bits = Bits::EMPTY;
            for i in 0..169 {
                if mbr_class(RaBasic::from_index(i)) != MbrClass::Mdc {
                    bits.insert(i);
                }
            }
            bits
        }
        Rcc8Basic::Po => {
            let mut bits = Bits::EMPTY;
            for i in 0..169 {
                let class = mbr_class(RaBasic::from_index(i));
                if class != MbrClass::Mdc && class != MbrClass::Mec {
                    bits.insert(i);
                }
            }
            bits
        }
    }
}

/// Topological relations consistent with a given bounding-rectangle class.
pub(crate) fn induced_rcc8_of_class(class: MbrClass) -> Relation {
    let rcc = rcc8_calculus();
    use Rcc8Basic::*;
    let basics: &[Rcc8Basic] = match class {
        MbrClass::Mdc => &[Dc],
        MbrClass::Mec => &[Dc, Ec],
        MbrClass::Mpo => &[Dc, Ec, Po],
        MbrClass::Mtpp => &[Dc, Ec, Po, Tpp],
        MbrClass::Mntpp => &[Dc, Ec, Po, Tpp, Ntpp],
        MbrClass::Mtppi => &[Dc, Ec, Po, Tppi],
        MbrClass::Mntppi => &[Dc, Ec, Po, Tppi, Ntppi],
        MbrClass::Meq => &[Dc, Ec, Po, Eq, Tpp, Tppi],
    };
    rcc.relation_of_indices(basics.iter().map(|b| b.index()))
}

struct InducedTables {
    /// Per basic topological relation: the induced rectangle relation.
    ra_of_top: [Bits; 8],
    /// Per basic rectangle relation: the induced topological relation.
    rcc_of_ra: [Bits; 169],
}

fn tables() -> &'static InducedTables {
    static TABLES: OnceLock<InducedTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut ra_of_top = [Bits::EMPTY; 8];
        for (i, slot) in ra_of_top.iter_mut().enumerate() {
            *slot = induced_ra_of_basic(Rcc8Basic::from_index(i));
        }
        let mut rcc_of_ra = [Bits::EMPTY; 169];
        for (i, slot) in rcc_of_ra.iter_mut().enumerate() {
            *slot = induced_rcc8_of_class(mbr_class(RaBasic::from_index(i))).bits();
        }
        InducedTables { ra_of_top, rcc_of_ra }
    })
}

/// Smallest rectangle relation containing a topological relation: union of
/// the per-basic induced relations.
pub fn induced_ra(theta: &Relation) -> Result<Relation, Error> {
    if theta.is_empty() {
        return Err(Error::EmptyRelation("topological relation"));
    }
    let t = tables();
    let mut bits = Bits::EMPTY;
    for b in theta.basics() {
        bits = bits.union(&t.ra_of_top[b]);
    }
    Ok(ra_calculus().relation(bits))
}

/// Smallest topological relation containing a rectangle relation: union of
/// the class-keyed induced relations.
pub fn induced_rcc8(delta: &Relation) -> Result<Relation, Error> {
    if delta.is_empty() {
        return Err(Error::EmptyRelation("directional relation"));
    }
    let t = tables();
    let mut bits = Bits::EMPTY;
    for b in delta.basics() {
        bits = bits.union(&t.rcc_of_ra[b]);
    }
    Ok(rcc8_calculus().relation(bits))
}

/// Mutual restriction of a constraint pair. Either side may come back
/// empty; that signals joint inconsistency of the pair, not an error.
pub fn restrict_pair(theta: &Relation, delta: &Relation) -> Result<(Relation, Relation), Error> {
    let theta_r = theta.intersect(&induced_rcc8(delta)?);
    let delta_r = delta.intersect(&induced_ra(theta)?);
    Ok((theta_r, delta_r))
}

/// Apply mutual restriction to every pair of the joint network. The result
/// is a fixed point of restriction (one pass suffices) and equivalent to
/// the input; an emptied entry makes the whole network inconsistent.
pub fn biclose(net: &JointNetwork) -> Result<JointNetwork, Inconsistent> {
    let mut out = net.clone();
    for (i, j) in net.top.pairs().collect::<Vec<_>>() {
        let theta = out.top.get(i, j);
        let delta = out.dir.get(i, j);
        let (theta_r, delta_r) =
            restrict_pair(&theta, &delta).map_err(|_| Inconsistent { i, j })?;
        if theta_r.is_empty() || delta_r.is_empty() {
            return Err(Inconsistent { i, j });
        }
        out.top.set(i, j, theta_r);
        out.dir.set(i, j, delta_r);
    }
    Ok(out)
}
