//! Clopen subsets of the Cantor space as canonical disjoint cone unions,
//! their Boolean algebra, and the type invariant mod n - 1.
//!
//! The canonical form is: cones pairwise non-nested, no complete sibling
//! family left unmerged, sorted by (root, word).  Equality of clopen sets is
//! structural equality of canonical forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Address, RationalPoint, Space};

/// A clopen set, stored as its canonical list of disjoint cones.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ClopenSet {
    space: Space,
    cones: Vec<Address>,
}

/// The residue class of the cone count mod n - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TypeResidue {
    modulus: u32,
    value: u32,
}

impl TypeResidue {
    pub fn new(space: Space, value: u64) -> Self {
        let modulus = space.modulus();
        TypeResidue {
            modulus,
            value: (value % modulus as u64) as u32,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn add(&self, other: TypeResidue) -> TypeResidue {
        debug_assert_eq!(self.modulus, other.modulus);
        TypeResidue {
            modulus: self.modulus,
            value: (self.value + other.value) % self.modulus,
        }
    }

    pub fn sub(&self, other: TypeResidue) -> TypeResidue {
        debug_assert_eq!(self.modulus, other.modulus);
        TypeResidue {
            modulus: self.modulus,
            value: (self.modulus + self.value - other.value) % self.modulus,
        }
    }
}

// Internal trie form of a clopen set; `Split` children are indexed by letter
// minus one and are never all-Full or all-Empty.
#[derive(Clone, PartialEq, Eq, Debug)]
enum Node {
    Empty,
    Full,
    Split(Vec<Node>),
}

impl Node {
    fn split(children: Vec<Node>) -> Node {
        if children.iter().all(|c| matches!(c, Node::Full)) {
            Node::Full
        } else if children.iter().all(|c| matches!(c, Node::Empty)) {
            Node::Empty
        } else {
            Node::Split(children)
        }
    }

    fn insert(&mut self, word: &[u32], n: u32) {
        if matches!(self, Node::Full) {
            return;
        }
        match word.split_first() {
            None => *self = Node::Full,
            Some((&letter, rest)) => {
                if matches!(self, Node::Empty) {
                    *self = Node::Split(vec![Node::Empty; n as usize]);
                }
                let Node::Split(children) = self else {
                    unreachable!()
                };
                children[(letter - 1) as usize].insert(rest, n);
                let children = std::mem::take(children);
                *self = Node::split(children);
            }
        }
    }

    fn union(&self, other: &Node, n: u32) -> Node {
        match (self, other) {
            (Node::Full, _) | (_, Node::Full) => Node::Full,
            (Node::Empty, x) | (x, Node::Empty) => x.clone(),
            (Node::Split(a), Node::Split(b)) => {
                Node::split((0..n as usize).map(|i| a[i].union(&b[i], n)).collect())
            }
        }
    }

    fn intersection(&self, other: &Node, n: u32) -> Node {
        match (self, other) {
            (Node::Empty, _) | (_, Node::Empty) => Node::Empty,
            (Node::Full, x) | (x, Node::Full) => x.clone(),
            (Node::Split(a), Node::Split(b)) => Node::split(
                (0..n as usize)
                    .map(|i| a[i].intersection(&b[i], n))
                    .collect(),
            ),
        }
    }

    fn complement(&self, n: u32) -> Node {
        match self {
            Node::Empty => Node::Full,
            Node::Full => Node::Empty,
            Node::Split(children) => {
                Node::split(children.iter().map(|c| c.complement(n)).collect())
            }
        }
    }

    fn collect_cones(&self, prefix: &Address, out: &mut Vec<Address>) {
        match self {
            Node::Empty => {}
            Node::Full => out.push(prefix.clone()),
            Node::Split(children) => {
                for (i, child) in children.iter().enumerate() {
                    let next = prefix.child(i as u32 + 1).expect("letter in range");
                    child.collect_cones(&next, out);
                }
            }
        }
    }
}

struct Forest {
    space: Space,
    roots: Vec<Node>,
}

impl Forest {
    fn empty(space: Space) -> Forest {
        Forest {
            space,
            roots: vec![Node::Empty; space.r() as usize],
        }
    }

    fn from_cones<'a>(space: Space, cones: impl IntoIterator<Item = &'a Address>) -> Forest {
        let mut forest = Forest::empty(space);
        for cone in cones {
            forest.roots[(cone.root() - 1) as usize].insert(cone.word(), space.n());
        }
        forest
    }

    fn zip(&self, other: &Forest, op: impl Fn(&Node, &Node, u32) -> Node) -> Forest {
        Forest {
            space: self.space,
            roots: (0..self.roots.len())
                .map(|i| op(&self.roots[i], &other.roots[i], self.space.n()))
                .collect(),
        }
    }

    fn into_set(self) -> ClopenSet {
        let mut cones = Vec::new();
        for (i, node) in self.roots.iter().enumerate() {
            let root = Address::root_cone(self.space, i as u32 + 1).expect("root in range");
            node.collect_cones(&root, &mut cones);
        }
        cones.sort();
        ClopenSet {
            space: self.space,
            cones,
        }
    }
}

impl ClopenSet {
    /// Canonicalize an arbitrary cone list: absorb nested cones, merge
    /// complete sibling families, sort.
    pub fn normalize(space: Space, raw_cones: &[Address]) -> Result<ClopenSet> {
        for cone in raw_cones {
            space.check_same(&cone.space())?;
        }
        Ok(Forest::from_cones(space, raw_cones).into_set())
    }

    pub fn empty(space: Space) -> ClopenSet {
        ClopenSet {
            space,
            cones: Vec::new(),
        }
    }

    pub fn whole(space: Space) -> ClopenSet {
        let cones = space
            .roots()
            .map(|root| Address::root_cone(space, root).expect("root in range"))
            .collect();
        ClopenSet { space, cones }
    }

    pub fn cone(address: &Address) -> ClopenSet {
        ClopenSet {
            space: address.space(),
            cones: vec![address.clone()],
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn cones(&self) -> &[Address] {
        &self.cones
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        *self == ClopenSet::whole(self.space)
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.space.check_same(&other.space)?;
        Ok(self.forest().zip(&other.forest(), Node::union).into_set())
    }

    pub fn intersection(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.space.check_same(&other.space)?;
        Ok(self
            .forest()
            .zip(&other.forest(), Node::intersection)
            .into_set())
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.intersection(&other.complement())
    }

    pub fn complement(&self) -> ClopenSet {
        let forest = self.forest();
        Forest {
            space: self.space,
            roots: forest
                .roots
                .iter()
                .map(|node| node.complement(self.space.n()))
                .collect(),
        }
        .into_set()
    }

    pub fn contains_point(&self, p: &RationalPoint) -> bool {
        self.cones.iter().any(|cone| cone.contains(p))
    }

    /// True iff `other` is a subset of `self`.
    pub fn contains_set(&self, other: &ClopenSet) -> bool {
        match other.difference(self) {
            Ok(diff) => diff.is_empty(),
            Err(_) => false,
        }
    }

    /// The number of cones in canonical form, mod n - 1.
    pub fn type_of(&self) -> TypeResidue {
        TypeResidue::new(self.space, self.cones.len() as u64)
    }

    /// Split into exactly `m` disjoint cones by repeatedly expanding the
    /// lexicographically last cone into its n children.
    pub fn split_into(&self, m: usize) -> Result<Vec<Address>> {
        let count = self.cones.len();
        let modulus = self.space.modulus();
        if self.is_empty() {
            return Err(Error::EmptyClopen);
        }
        if m < count || (m - count) % modulus as usize != 0 {
            return Err(Error::BadSplit {
                cones: count,
                requested: m,
                modulus,
            });
        }
        let mut cones = self.cones.clone();
        while cones.len() < m {
            let last = cones.pop().expect("nonempty");
            for letter in self.space.letters() {
                cones.push(last.child(letter).expect("letter in range"));
            }
        }
        Ok(cones)
    }

    fn forest(&self) -> Forest {
        Forest::from_cones(self.space, &self.cones)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, cone) in self.cones.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{cone}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: u32, r: u32) -> Space {
        Space::new(n, r).unwrap()
    }

    fn addr(sp: Space, root: u32, word: &[u32]) -> Address {
        Address::new(sp, root, word.to_vec()).unwrap()
    }

    fn set(sp: Space, cones: &[(u32, &[u32])]) -> ClopenSet {
        let addrs: Vec<_> = cones.iter().map(|(r, w)| addr(sp, *r, w)).collect();
        ClopenSet::normalize(sp, &addrs).unwrap()
    }

    #[test]
    fn normalize_absorbs_nested() {
        let sp = space(2, 1);
        assert_eq!(
            set(sp, &[(1, &[1]), (1, &[1, 2])]),
            set(sp, &[(1, &[1])])
        );
    }

    #[test]
    fn normalize_merges_siblings() {
        let sp = space(2, 1);
        assert_eq!(set(sp, &[(1, &[1]), (1, &[2])]), ClopenSet::whole(sp));
        // Two-level merge.
        assert_eq!(
            set(sp, &[(1, &[1, 1]), (1, &[1, 2]), (1, &[2])]),
            ClopenSet::whole(sp)
        );
    }

    #[test]
    fn two_level_merge_membership_sampled() {
        // The merged form and the raw form contain the same points.
        let sp = space(2, 1);
        let raw = [(1, &[1u32, 1][..]), (1, &[1, 2]), (1, &[2])];
        let merged = set(sp, &raw);
        for seed in 0..100u64 {
            let pre: Vec<u32> = (0..(seed % 5)).map(|i| (seed >> i) as u32 % 2 + 1).collect();
            let per = vec![(seed % 2) as u32 + 1];
            let p = RationalPoint::new(sp, 1, pre, per).unwrap();
            let in_raw = raw
                .iter()
                .any(|(r, w)| addr(sp, *r, w).contains(&p));
            assert_eq!(merged.contains_point(&p), in_raw);
        }
    }

    #[test]
    fn boolean_ops_examples() {
        let sp = space(2, 1);
        let e = set(sp, &[(1, &[1])]);
        assert_eq!(e.union(&e.complement()).unwrap(), ClopenSet::whole(sp));

        let nested = set(sp, &[(1, &[1, 2])]);
        assert_eq!(e.intersection(&nested).unwrap(), nested);

        let sp3 = space(3, 1);
        let whole = ClopenSet::whole(sp3);
        let middle = set(sp3, &[(1, &[2])]);
        assert_eq!(
            whole.difference(&middle).unwrap(),
            set(sp3, &[(1, &[1]), (1, &[3])])
        );
    }

    #[test]
    fn type_examples() {
        let sp = space(3, 2);
        assert_eq!(set(sp, &[(1, &[2])]).type_of().value(), 1);
        assert_eq!(ClopenSet::whole(sp).type_of().value(), 0); // r = 2 mod 2
        let sp4 = space(4, 2);
        assert_eq!(ClopenSet::whole(sp4).type_of().value(), 2);
        // n = 2: everything has type 0.
        let sp2 = space(2, 3);
        assert_eq!(ClopenSet::whole(sp2).type_of().value(), 0);
        assert_eq!(ClopenSet::whole(sp2).type_of().modulus(), 1);
    }

    #[test]
    fn split_into_examples() {
        let sp = space(2, 1);
        let e = set(sp, &[(1, &[1])]);
        assert_eq!(e.split_into(1).unwrap(), vec![addr(sp, 1, &[1])]);

        let whole = ClopenSet::whole(sp);
        assert_eq!(
            whole.split_into(3).unwrap(),
            vec![addr(sp, 1, &[1]), addr(sp, 1, &[2, 1]), addr(sp, 1, &[2, 2])]
        );

        let two = set(sp, &[(1, &[1, 1]), (1, &[2, 1])]);
        assert!(two.split_into(1).is_err());
    }

    #[test]
    fn split_into_respects_congruence() {
        let sp = space(3, 1);
        let whole = ClopenSet::whole(sp);
        assert!(whole.split_into(2).is_err()); // 2 != 1 mod 2
        let parts = whole.split_into(5).unwrap();
        assert_eq!(parts.len(), 5);
        // Disjoint cover: normalizing the parts gives back the whole space.
        assert_eq!(ClopenSet::normalize(sp, &parts).unwrap(), whole);
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                assert!(!a.is_prefix_of(b) && !b.is_prefix_of(a));
            }
        }
    }

    #[test]
    fn display_is_canonical_order() {
        let sp = space(2, 2);
        let e = set(sp, &[(2, &[1]), (1, &[2, 1])]);
        assert_eq!(e.to_string(), "{1:2.1, 2:1}");
        assert_eq!(ClopenSet::empty(sp).to_string(), "{}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_cones(n: u32, r: u32) -> impl Strategy<Value = Vec<(u32, Vec<u32>)>> {
            proptest::collection::vec(
                (1..=r, proptest::collection::vec(1..=n, 0..=4)),
                0..=5,
            )
        }

        fn build(sp: Space, raw: &[(u32, Vec<u32>)]) -> ClopenSet {
            let addrs: Vec<_> = raw
                .iter()
                .map(|(root, w)| Address::new(sp, *root, w.clone()).unwrap())
                .collect();
            ClopenSet::normalize(sp, &addrs).unwrap()
        }

        proptest! {
            #[test]
            fn inclusion_exclusion(
                a in arb_cones(3, 2),
                b in arb_cones(3, 2),
            ) {
                let sp = Space::new(3, 2).unwrap();
                let e = build(sp, &a);
                let f = build(sp, &b);
                let lhs = e.union(&f).unwrap().type_of().add(
                    e.intersection(&f).unwrap().type_of());
                let rhs = e.type_of().add(f.type_of());
                prop_assert_eq!(lhs, rhs);
                // Difference rule.
                prop_assert_eq!(
                    e.difference(&f).unwrap().type_of(),
                    e.type_of().sub(e.intersection(&f).unwrap().type_of())
                );
            }

            #[test]
            fn type_is_presentation_independent(
                a in arb_cones(3, 2),
                picks in proptest::collection::vec(0usize..100, 5),
            ) {
                let sp = Space::new(3, 2).unwrap();
                let e = build(sp, &a);
                prop_assume!(!e.is_empty());
                // Re-subdivide: replace a cone by its children, five times.
                let mut cones: Vec<Address> = e.cones().to_vec();
                for pick in picks {
                    let i = pick % cones.len();
                    let cone = cones.swap_remove(i);
                    for letter in sp.letters() {
                        cones.push(cone.child(letter).unwrap());
                    }
                }
                // Count of the raw presentation agrees mod n - 1 ...
                prop_assert_eq!(
                    TypeResidue::new(sp, cones.len() as u64),
                    e.type_of()
                );
                // ... and normalization recovers the same set.
                prop_assert_eq!(ClopenSet::normalize(sp, &cones).unwrap(), e);
            }
        }
    }
}
