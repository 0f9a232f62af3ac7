//! Generic finite qualitative-calculus engine.
//!
//! A [`Calculus`] holds a universe of named basic relations together with a
//! converse map and a dense weak-composition table. A [`Relation`] is a
//! bitset of basic relations tied to its calculus. Everything is immutable
//! after construction, so values are freely shared across threads.

use crate::bits::Bits;
use crate::error::Error;

/// Descriptor of a finite qualitative calculus.
///
/// Invariants checked at construction: the converse map is an involution,
/// every composition entry is nonempty, and the identity is nonempty. No
/// structural assumptions beyond that (the basis need not contain the
/// identity relation or be closed under converse).
pub struct Calculus {
    name: &'static str,
    basic_names: Vec<&'static str>,
    converse: Vec<u16>,
    /// Dense `basis_size * basis_size` table, row-major.
    composition: Vec<Bits>,
    identity: Bits,
    universe: Bits,
}

impl Calculus {
    pub fn new(
        name: &'static str,
        basic_names: Vec<&'static str>,
        converse: Vec<u16>,
        composition: Vec<Bits>,
        identity: Bits,
    ) -> Calculus {
        let n = basic_names.len();
        assert!(n > 0 && n <= crate::bits::MAX_WIDTH);
        assert_eq!(converse.len(), n);
        assert_eq!(composition.len(), n * n);
        for (i, &c) in converse.iter().enumerate() {
            let c = c as usize;
            assert!(c < n, "{name}: converse index out of range");
            assert_eq!(converse[c] as usize, i, "{name}: converse is not an involution");
        }
        for entry in &composition {
            assert!(!entry.is_empty(), "{name}: empty composition entry");
        }
        assert!(!identity.is_empty(), "{name}: empty identity");
        let universe = Bits::all_below(n);
        assert!(identity.is_subset(&universe));
        Calculus {
            name,
            basic_names,
            converse,
            composition,
            identity,
            universe,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn basis_size(&self) -> usize {
        self.basic_names.len()
    }

    pub fn basic_name(&self, index: usize) -> &'static str {
        self.basic_names[index]
    }

    pub fn basic_index(&self, token: &str) -> Option<usize> {
        self.basic_names.iter().position(|t| *t == token)
    }

    pub fn converse_of_basic(&self, index: usize) -> usize {
        self.converse[index] as usize
    }

    pub fn compose_basics(&self, a: usize, b: usize) -> Bits {
        self.composition[a * self.basis_size() + b]
    }

    pub fn empty(&'static self) -> Relation {
        Relation { calc: self, bits: Bits::EMPTY }
    }

    pub fn universal(&'static self) -> Relation {
        Relation { calc: self, bits: self.universe }
    }

    pub fn identity(&'static self) -> Relation {
        Relation { calc: self, bits: self.identity }
    }

    pub fn basic(&'static self, index: usize) -> Relation {
        assert!(index < self.basis_size());
        Relation { calc: self, bits: Bits::singleton(index) }
    }

    pub fn relation(&'static self, bits: Bits) -> Relation {
        assert!(bits.is_subset(&self.universe));
        Relation { calc: self, bits }
    }

    pub fn relation_of_indices<I: IntoIterator<Item = usize>>(&'static self, indices: I) -> Relation {
        let mut bits = Bits::EMPTY;
        for i in indices {
            assert!(i < self.basis_size());
            bits.insert(i);
        }
        Relation { calc: self, bits }
    }
}

impl std::fmt::Debug for Calculus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Calculus({}, |B|={})", self.name, self.basis_size())
    }
}

/// A relation of some calculus: a set of basic relations.
#[derive(Clone, Copy)]
pub struct Relation {
    calc: &'static Calculus,
    bits: Bits,
}

impl Relation {
    pub fn calculus(&self) -> &'static Calculus {
        self.calc
    }

    pub fn bits(&self) -> Bits {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_basic(&self) -> bool {
        self.bits.count() == 1
    }

    pub fn is_universal(&self) -> bool {
        self.bits == self.calc.universe
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn contains_basic(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    /// Index of the single basic relation, if basic.
    pub fn single(&self) -> Option<usize> {
        if self.is_basic() {
            self.bits.iter().next()
        } else {
            None
        }
    }

    pub fn basics(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    fn same_calculus(&self, other: &Relation) -> Result<(), Error> {
        if std::ptr::eq(self.calc, other.calc) {
            Ok(())
        } else {
            Err(Error::CalculusMismatch(self.calc.name, other.calc.name))
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        self.same_calculus(other).expect("relation set op across calculi");
        Relation { calc: self.calc, bits: self.bits.union(&other.bits) }
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        self.same_calculus(other).expect("relation set op across calculi");
        Relation { calc: self.calc, bits: self.bits.intersect(&other.bits) }
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        self.same_calculus(other).expect("relation set op across calculi");
        Relation { calc: self.calc, bits: self.bits.difference(&other.bits) }
    }

    pub fn complement(&self) -> Relation {
        Relation { calc: self.calc, bits: self.calc.universe.difference(&self.bits) }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.same_calculus(other).expect("relation set op across calculi");
        self.bits.is_subset(&other.bits)
    }

    /// Converse: bit `i` is set iff the converse of basic `i` is set in `self`.
    /// Total and union-distributive.
    pub fn converse(&self) -> Relation {
        let mut bits = Bits::EMPTY;
        for i in self.bits.iter() {
            bits.insert(self.calc.converse_of_basic(i));
        }
        Relation { calc: self.calc, bits }
    }

    /// Weak composition: union of the table entries over all basic pairs.
    /// Empty if either side is empty.
    pub fn compose(&self, other: &Relation) -> Relation {
        self.try_compose(other).expect("weak composition across calculi")
    }

    /// Checked variant of [`Relation::compose`] for API boundaries.
    pub fn try_compose(&self, other: &Relation) -> Result<Relation, Error> {
        self.same_calculus(other)?;
        let mut bits = Bits::EMPTY;
        for a in self.bits.iter() {
            for b in other.bits.iter() {
                bits = bits.union(&self.calc.compose_basics(a, b));
            }
        }
        Ok(Relation { calc: self.calc, bits })
    }

    /// Render as comma-joined basic tokens (`∅` when empty).
    pub fn token_string(&self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        self.bits
            .iter()
            .map(|i| self.calc.basic_name(i))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.calc, other.calc) && self.bits == other.bits
    }
}

impl Eq for Relation {}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{}]", self.calc.name, self.token_string())
    }
}

#[cfg(test)]
mod tests {
    use crate::interval::{ia_calculus, IaBasic};

    #[test]
    fn converse_is_involution_on_singletons() {
        let ia = ia_calculus();
        for i in 0..ia.basis_size() {
            let r = ia.basic(i);
            assert_eq!(r.converse().converse(), r);
        }
    }

    #[test]
    fn converse_distributes_over_union() {
        let ia = ia_calculus();
        let r = ia.relation_of_indices([IaBasic::M.index(), IaBasic::O.index()]);
        let conv = r.converse();
        let expect = ia.relation_of_indices([IaBasic::Mi.index(), IaBasic::Oi.index()]);
        assert_eq!(conv, expect);
    }

    #[test]
    fn compose_with_empty_is_empty() {
        let ia = ia_calculus();
        let r = ia.universal();
        assert!(r.compose(&ia.empty()).is_empty());
        assert!(ia.empty().compose(&r).is_empty());
    }

    #[test]
    fn identity_absorbs_basics() {
        let ia = ia_calculus();
        for i in 0..ia.basis_size() {
            let r = ia.basic(i);
            assert_eq!(ia.identity().compose(&r), r);
            assert_eq!(r.compose(&ia.identity()), r);
        }
    }

    #[test]
    fn composition_monotone_and_union_distributive() {
        let ia = ia_calculus();
        let a = ia.relation_of_indices([0, 3, 7]);
        let b = ia.relation_of_indices([2, 5]);
        let c = ia.relation_of_indices([1, 10, 12]);
        // distribution over union in the left argument
        let lhs = a.union(&b).compose(&c);
        let rhs = a.compose(&c).union(&b.compose(&c));
        assert_eq!(lhs, rhs);
        // monotone
        assert!(a.compose(&c).is_subset(&a.union(&b).compose(&c)));
    }

    #[test]
    fn cross_calculus_compose_is_an_error() {
        let ia = ia_calculus();
        let rcc = crate::topology::rcc8_calculus();
        assert!(ia.universal().try_compose(&rcc.universal()).is_err());
    }
}
