//! Elements of V_{n,r} and Thompson-like partial homeomorphisms.
//!
//! An element is a finite table of prefix replacements `dom -> ran` whose
//! domain and range columns are each a complete prefix code.  The table is
//! kept in canonical form (full sibling families merged, sorted by domain),
//! so group equality is structural equality.
//!
//! Composition convention: `g.compose(&h)` applies `h` first, then `g`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::clopen::ClopenSet;
use crate::error::{Error, Result};
use crate::words::{Address, RationalPoint, Space};

/// An element of V_{n,r}: a canonical table of cone-to-cone prefix
/// replacements covering the whole space on both sides.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Element {
    space: Space,
    table: Vec<(Address, Address)>,
}

/// A Thompson-like homeomorphism between clopen sets, possibly across spaces
/// with different root counts (same arity n).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PartialMap {
    dom_space: Space,
    ran_space: Space,
    table: Vec<(Address, Address)>,
}

/// Image under Higman's parity map; always 0 when n is even.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Parity(u8);

impl Parity {
    pub const EVEN: Parity = Parity(0);
    pub const ODD: Parity = Parity(1);

    pub fn value(&self) -> u8 {
        self.0
    }

    pub fn add(&self, other: Parity) -> Parity {
        Parity((self.0 + other.0) % 2)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Prefix-code validation trie.
#[derive(Clone)]
enum CodeNode {
    Free,
    Taken,
    Split(Vec<CodeNode>),
}

fn insert_code(node: &mut CodeNode, addr: &Address, word: &[u32], n: u32) -> Result<()> {
    match word.split_first() {
        None => match node {
            CodeNode::Free => {
                *node = CodeNode::Taken;
                Ok(())
            }
            _ => Err(Error::OverlappingAddresses {
                first: addr.to_string(),
                second: addr.to_string(),
            }),
        },
        Some((&letter, rest)) => match node {
            CodeNode::Taken => Err(Error::OverlappingAddresses {
                first: addr.to_string(),
                second: addr.to_string(),
            }),
            CodeNode::Free => {
                *node = CodeNode::Split(vec![CodeNode::Free; n as usize]);
                let CodeNode::Split(children) = node else {
                    unreachable!()
                };
                insert_code(&mut children[(letter - 1) as usize], addr, rest, n)
            }
            CodeNode::Split(children) => {
                insert_code(&mut children[(letter - 1) as usize], addr, rest, n)
            }
        },
    }
}

fn find_uncovered(node: &CodeNode, prefix: &Address) -> Option<Address> {
    match node {
        CodeNode::Taken => None,
        CodeNode::Free => Some(prefix.clone()),
        CodeNode::Split(children) => children.iter().enumerate().find_map(|(i, child)| {
            let next = prefix.child(i as u32 + 1).expect("letter in range");
            find_uncovered(child, &next)
        }),
    }
}

/// Check that the addresses are pairwise non-nested; with `complete` also
/// check that they cover the whole space.
pub(crate) fn validate_prefix_code(
    space: Space,
    addrs: impl Iterator<Item = impl std::ops::Deref<Target = Address>> + Clone,
    complete: bool,
) -> Result<()> {
    let mut roots = vec![CodeNode::Free; space.r() as usize];
    for addr in addrs.clone() {
        space.check_same(&addr.space())?;
        insert_code(
            &mut roots[(addr.root() - 1) as usize],
            &addr,
            addr.word(),
            space.n(),
        )
        .map_err(|_| {
            // Name both members of the offending pair.
            let other = addrs
                .clone()
                .find(|b| (b.is_prefix_of(&addr) || addr.is_prefix_of(b)) && **b != *addr)
                .map(|b| b.to_string())
                .unwrap_or_else(|| addr.to_string());
            Error::OverlappingAddresses {
                first: other,
                second: addr.to_string(),
            }
        })?;
    }
    if complete {
        for (i, node) in roots.iter().enumerate() {
            let root = Address::root_cone(space, i as u32 + 1).expect("root in range");
            if let Some(hole) = find_uncovered(node, &root) {
                return Err(Error::IncompletePrefixCode {
                    address: hole.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Merge full sibling families (u.c -> v.c for every letter c) to a fixed
/// point and sort by domain.  Confluent, but re-run to a fixed point anyway.
fn canonicalize(n: u32, mut table: Vec<(Address, Address)>) -> Vec<(Address, Address)> {
    loop {
        let mut families: HashMap<(Address, Address), Vec<Option<usize>>> = HashMap::new();
        for (i, (dom, ran)) in table.iter().enumerate() {
            let (Some(dp), Some(rp)) = (dom.parent(), ran.parent()) else {
                continue;
            };
            let (dl, rl) = (*dom.word().last().unwrap(), *ran.word().last().unwrap());
            if dl != rl {
                continue;
            }
            families.entry((dp, rp)).or_insert_with(|| vec![None; n as usize])[(dl - 1) as usize] =
                Some(i);
        }
        let full: Vec<_> = families
            .into_iter()
            .filter(|(_, slots)| slots.iter().all(Option::is_some))
            .collect();
        if full.is_empty() {
            break;
        }
        let mut drop: Vec<usize> = Vec::new();
        let mut add: Vec<(Address, Address)> = Vec::new();
        for ((dp, rp), slots) in full {
            drop.extend(slots.into_iter().flatten());
            add.push((dp, rp));
        }
        drop.sort_unstable();
        drop.dedup();
        for &i in drop.iter().rev() {
            table.swap_remove(i);
        }
        table.extend(add);
    }
    table.sort();
    table
}

// Refinement core shared by compose/image/restrict: for a cone `a` carried to
// `b` by the inner map, and a pair `(c, d)` of the outer map, emit the spliced
// pair on the overlap of C_b and C_c (if any).
fn splice(
    a: &Address,
    b: &Address,
    c: &Address,
    d: &Address,
) -> Option<(Address, Address)> {
    if c.is_prefix_of(b) {
        let tail = &b.word()[c.depth()..];
        Some((a.clone(), d.extended(tail).expect("letters validated")))
    } else if b.is_strict_prefix_of(c) {
        let tail = &c.word()[b.depth()..];
        Some((a.extended(tail).expect("letters validated"), d.clone()))
    } else {
        None
    }
}

impl Element {
    /// Validate and canonically reduce a raw table.
    pub fn new(space: Space, pairs: Vec<(Address, Address)>) -> Result<Element> {
        validate_prefix_code(space, pairs.iter().map(|(d, _)| d), true)?;
        validate_prefix_code(space, pairs.iter().map(|(_, r)| r), true)?;
        Ok(Element {
            space,
            table: canonicalize(space.n(), pairs),
        })
    }

    pub fn identity(space: Space) -> Element {
        let table = space
            .roots()
            .map(|root| {
                let a = Address::root_cone(space, root).expect("root in range");
                (a.clone(), a)
            })
            .collect();
        Element { space, table }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().all(|(d, r)| d == r)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn table(&self) -> &[(Address, Address)] {
        &self.table
    }

    /// `self` after `other` (right factor acts first).
    pub fn compose(&self, other: &Element) -> Result<Element> {
        self.space.check_same(&other.space)?;
        let mut pairs = Vec::new();
        for (a, b) in &other.table {
            for (c, d) in &self.table {
                if let Some(pair) = splice(a, b, c, d) {
                    pairs.push(pair);
                }
            }
        }
        Element::new(self.space, pairs)
    }

    pub fn invert(&self) -> Element {
        let table = self.table.iter().map(|(d, r)| (r.clone(), d.clone())).collect();
        Element {
            space: self.space,
            table: canonicalize(self.space.n(), table),
        }
    }

    pub fn pow(&self, k: i64) -> Element {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Element::identity(self.space);
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base).expect("same space");
        }
        out
    }

    pub fn evaluate(&self, p: &RationalPoint) -> Result<RationalPoint> {
        self.space.check_same(&p.space())?;
        let (dom, ran) = self
            .table
            .iter()
            .find(|(dom, _)| dom.contains(p))
            .expect("domain table is complete");
        p.replace_prefix(dom, ran)
    }

    /// Canonical clopen image of `set` under this element.
    pub fn image(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.space.check_same(&set.space())?;
        let mut cones = Vec::new();
        for a in set.cones() {
            for (c, d) in &self.table {
                if let Some((_, image)) = splice(a, a, c, d) {
                    cones.push(image);
                }
            }
        }
        ClopenSet::normalize(self.space, &cones)
    }

    pub fn preimage(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.invert().image(set)
    }

    /// The maximal clopen set on which this element is the identity: the
    /// union of canonical-table cones with dom = ran.  (A prefix replacement
    /// u -> v with u != v is the identity on no subcone.)
    pub fn identity_locus(&self) -> ClopenSet {
        let cones: Vec<Address> = self
            .table
            .iter()
            .filter(|(d, r)| d == r)
            .map(|(d, _)| d.clone())
            .collect();
        ClopenSet::normalize(self.space, &cones).expect("cones are in this space")
    }

    /// Sign of the permutation pairing the lex-ordered domain leaves with the
    /// lex-ordered range leaves; always even for n even, where the
    /// abelianization of V_{n,r} is trivial.
    pub fn parity(&self) -> Parity {
        if self.space.n() % 2 == 0 {
            return Parity::EVEN;
        }
        // Table is sorted by dom; rank each ran address.
        let mut ranks: Vec<usize> = (0..self.table.len()).collect();
        ranks.sort_by(|&i, &j| self.table[i].1.cmp(&self.table[j].1));
        let mut sigma = vec![0usize; self.table.len()];
        for (rank, &i) in ranks.iter().enumerate() {
            sigma[i] = rank;
        }
        let mut swaps = 0u8;
        let mut seen = vec![false; sigma.len()];
        for start in 0..sigma.len() {
            if seen[start] {
                continue;
            }
            let mut i = start;
            let mut len = 0usize;
            while !seen[i] {
                seen[i] = true;
                i = sigma[i];
                len += 1;
            }
            swaps = (swaps + ((len - 1) % 2) as u8) % 2;
        }
        Parity(swaps)
    }

    /// Refine this element's table to the clopen set `set`.
    pub fn restrict(&self, set: &ClopenSet) -> Result<PartialMap> {
        self.space.check_same(&set.space())?;
        let mut pairs = Vec::new();
        for a in set.cones() {
            for (c, d) in &self.table {
                if let Some(pair) = splice(a, a, c, d) {
                    pairs.push(pair);
                }
            }
        }
        PartialMap::new(self.space, self.space, pairs)
    }

    /// Glue piecewise maps back into a group element.  The piece domains must
    /// partition the space, and likewise the piece ranges.
    pub fn assemble(space: Space, pieces: &[PartialMap]) -> Result<Element> {
        let mut pairs = Vec::new();
        for piece in pieces {
            space.check_same(&piece.dom_space)?;
            space.check_same(&piece.ran_space)?;
            pairs.extend(piece.table.iter().cloned());
        }
        Element::new(space, pairs)
    }
}

impl PartialMap {
    pub fn new(
        dom_space: Space,
        ran_space: Space,
        pairs: Vec<(Address, Address)>,
    ) -> Result<PartialMap> {
        dom_space.check_same_arity(&ran_space)?;
        validate_prefix_code(dom_space, pairs.iter().map(|(d, _)| d), false)?;
        validate_prefix_code(ran_space, pairs.iter().map(|(_, r)| r), false)?;
        Ok(PartialMap {
            dom_space,
            ran_space,
            table: canonicalize(dom_space.n(), pairs),
        })
    }

    pub fn identity_on(set: &ClopenSet) -> PartialMap {
        let table = set.cones().iter().map(|c| (c.clone(), c.clone())).collect();
        PartialMap {
            dom_space: set.space(),
            ran_space: set.space(),
            table,
        }
    }

    pub fn dom_space(&self) -> Space {
        self.dom_space
    }

    pub fn ran_space(&self) -> Space {
        self.ran_space
    }

    pub fn table(&self) -> &[(Address, Address)] {
        &self.table
    }

    pub fn domain(&self) -> ClopenSet {
        let cones: Vec<Address> = self.table.iter().map(|(d, _)| d.clone()).collect();
        ClopenSet::normalize(self.dom_space, &cones).expect("validated")
    }

    pub fn range(&self) -> ClopenSet {
        let cones: Vec<Address> = self.table.iter().map(|(_, r)| r.clone()).collect();
        ClopenSet::normalize(self.ran_space, &cones).expect("validated")
    }

    pub fn inverse(&self) -> PartialMap {
        let table = self.table.iter().map(|(d, r)| (r.clone(), d.clone())).collect();
        PartialMap {
            dom_space: self.ran_space,
            ran_space: self.dom_space,
            table: canonicalize(self.dom_space.n(), table),
        }
    }

    /// `self` after `inner`, defined on the part of `inner`'s domain whose
    /// image meets `self`'s domain.
    pub fn compose(&self, inner: &PartialMap) -> Result<PartialMap> {
        inner.ran_space.check_same(&self.dom_space)?;
        let mut pairs = Vec::new();
        for (a, b) in &inner.table {
            for (c, d) in &self.table {
                if let Some(pair) = splice(a, b, c, d) {
                    pairs.push(pair);
                }
            }
        }
        PartialMap::new(inner.dom_space, self.ran_space, pairs)
    }

    /// Refine to the part of the domain inside `set`.
    pub fn restrict_to(&self, set: &ClopenSet) -> Result<PartialMap> {
        self.dom_space.check_same(&set.space())?;
        let mut pairs = Vec::new();
        for a in set.cones() {
            for (c, d) in &self.table {
                if let Some(pair) = splice(a, a, c, d) {
                    pairs.push(pair);
                }
            }
        }
        PartialMap::new(self.dom_space, self.ran_space, pairs)
    }

    /// Concatenate disjoint pieces into one partial map.
    pub fn union(pieces: &[PartialMap]) -> Result<PartialMap> {
        let first = pieces.first().expect("at least one piece");
        let mut pairs = Vec::new();
        for piece in pieces {
            first.dom_space.check_same(&piece.dom_space)?;
            first.ran_space.check_same(&piece.ran_space)?;
            pairs.extend(piece.table.iter().cloned());
        }
        PartialMap::new(first.dom_space, first.ran_space, pairs)
    }

    pub fn evaluate(&self, p: &RationalPoint) -> Result<RationalPoint> {
        self.dom_space.check_same(&p.space())?;
        let Some((dom, ran)) = self.table.iter().find(|(dom, _)| dom.contains(p)) else {
            return Err(Error::ConeDoesNotContain {
                address: self.domain().to_string(),
                point: p.to_string(),
            });
        };
        p.replace_prefix(dom, ran)
    }

    /// Turn a partial map whose two sides are the same full space into a
    /// group element.
    pub fn into_element(self) -> Result<Element> {
        self.dom_space.check_same(&self.ran_space)?;
        Element::new(self.dom_space, self.table)
    }
}

/// A seed-deterministic random element: two complete prefix codes grown by
/// the same number of leaf splits (so they have equal size), paired by a
/// random bijection and canonicalized.  `depth_budget` bounds the depth of
/// every code leaf; a zero budget leaves only the root code, which pairs to
/// the identity.
pub fn random_element(space: Space, depth_budget: usize, seed: u64) -> Element {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_element_with(space, depth_budget, &mut rng)
}

/// As [`random_element`], drawing from a caller-supplied generator.
pub fn random_element_with<R: Rng>(space: Space, depth_budget: usize, rng: &mut R) -> Element {
    let roots: Vec<Address> = space
        .roots()
        .map(|root| Address::root_cone(space, root).expect("root in range"))
        .collect();
    if depth_budget == 0 {
        return Element::identity(space);
    }
    let splits = rng.gen_range(0..=2 * depth_budget);
    let mut dom = roots.clone();
    let mut ran = roots;
    for code in [&mut dom, &mut ran] {
        for _ in 0..splits {
            let open: Vec<usize> = code
                .iter()
                .enumerate()
                .filter(|(_, a)| a.depth() < depth_budget)
                .map(|(i, _)| i)
                .collect();
            let Some(&pick) = open.get(rng.gen_range(0..open.len().max(1))) else {
                break;
            };
            let leaf = code.swap_remove(pick);
            for letter in space.letters() {
                code.push(leaf.child(letter).expect("letter in range"));
            }
        }
    }
    // Equal split counts can still diverge if one code saturates its budget
    // first; retry with a fresh draw in that unlikely case.
    if dom.len() != ran.len() {
        return random_element_with(space, depth_budget, rng);
    }
    for i in (1..ran.len()).rev() {
        ran.swap(i, rng.gen_range(0..=i));
    }
    Element::new(space, dom.into_iter().zip(ran).collect()).expect("codes are complete")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V {} {}", self.space.n(), self.space.r())?;
        for (dom, ran) in &self.table {
            write!(f, "\n{dom} -> {ran}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P {} {} {}",
            self.dom_space.n(),
            self.dom_space.r(),
            self.ran_space.r()
        )?;
        for (dom, ran) in &self.table {
            write!(f, "\n{dom} -> {ran}")?;
        }
        Ok(())
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

    fn elem(sp: Space, pairs: &[((u32, &[u32]), (u32, &[u32]))]) -> Element {
        let table = pairs
            .iter()
            .map(|((dr, dw), (rr, rw))| (addr(sp, *dr, dw), addr(sp, *rr, rw)))
            .collect();
        Element::new(sp, table).unwrap()
    }

    fn point(sp: Space, root: u32, pre: &[u32], per: &[u32]) -> RationalPoint {
        RationalPoint::new(sp, root, pre.to_vec(), per.to_vec()).unwrap()
    }

    /// The recurring example: 1 -> 1.1, 2.1 -> 1.2, 2.2 -> 2 in V_{2,1}.
    pub(crate) fn g0() -> Element {
        let sp = space(2, 1);
        elem(
            sp,
            &[
                ((1, &[1]), (1, &[1, 1])),
                ((1, &[2, 1]), (1, &[1, 2])),
                ((1, &[2, 2]), (1, &[2])),
            ],
        )
    }

    #[test]
    fn make_element_merges_siblings() {
        let sp = space(2, 1);
        let e = elem(sp, &[((1, &[1]), (1, &[1])), ((1, &[2]), (1, &[2]))]);
        assert_eq!(e, Element::identity(sp));
    }

    #[test]
    fn make_element_keeps_swap() {
        let sp = space(2, 1);
        let swap = elem(sp, &[((1, &[1]), (1, &[2])), ((1, &[2]), (1, &[1]))]);
        assert_eq!(swap.table().len(), 2);
    }

    #[test]
    fn g0_is_reduced() {
        assert_eq!(g0().table().len(), 3);
    }

    #[test]
    fn make_element_rejects_bad_codes() {
        let sp = space(2, 1);
        // Incomplete domain.
        let err = Element::new(sp, vec![(addr(sp, 1, &[1]), addr(sp, 1, &[1]))]).unwrap_err();
        assert!(matches!(err, Error::IncompletePrefixCode { .. }));
        // Overlapping domain.
        let err = Element::new(
            sp,
            vec![
                (addr(sp, 1, &[]), addr(sp, 1, &[1])),
                (addr(sp, 1, &[2]), addr(sp, 1, &[2])),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::OverlappingAddresses { .. }));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let g = g0();
        assert_eq!(g.compose(&g.invert()).unwrap(), Element::identity(g.space()));
        assert_eq!(g.invert().compose(&g).unwrap(), Element::identity(g.space()));
        assert_eq!(Element::identity(g.space()).compose(&g).unwrap(), g);
    }

    #[test]
    fn compose_g0_squared() {
        let sp = space(2, 1);
        let expected = elem(
            sp,
            &[
                ((1, &[1]), (1, &[1, 1, 1])),
                ((1, &[2, 1]), (1, &[1, 1, 2])),
                ((1, &[2, 2, 1]), (1, &[1, 2])),
                ((1, &[2, 2, 2]), (1, &[2])),
            ],
        );
        let g = g0();
        assert_eq!(g.compose(&g).unwrap(), expected);
    }

    #[test]
    fn evaluate_fixed_points_of_g0() {
        let sp = space(2, 1);
        let g = g0();
        let two_bar = point(sp, 1, &[], &[2]);
        let one_bar = point(sp, 1, &[], &[1]);
        assert_eq!(g.evaluate(&two_bar).unwrap(), two_bar);
        assert_eq!(g.evaluate(&one_bar).unwrap(), one_bar);
        let p = point(sp, 1, &[2, 1], &[1]);
        assert_eq!(g.evaluate(&p).unwrap(), point(sp, 1, &[1, 2], &[1]));
        assert_eq!(
            Element::identity(sp).evaluate(&p).unwrap(),
            p
        );
    }

    #[test]
    fn image_examples() {
        let sp = space(2, 1);
        let g = g0();
        let whole = ClopenSet::whole(sp);
        assert_eq!(g.image(&whole).unwrap(), whole);
        let e = ClopenSet::cone(&addr(sp, 1, &[2, 2]));
        assert_eq!(g.image(&e).unwrap(), ClopenSet::cone(&addr(sp, 1, &[2])));
        assert_eq!(
            Element::identity(sp).image(&e).unwrap(),
            e
        );
    }

    #[test]
    fn identity_locus_examples() {
        let sp = space(2, 1);
        assert_eq!(
            Element::identity(sp).identity_locus(),
            ClopenSet::whole(sp)
        );
        assert!(g0().identity_locus().is_empty());

        let sp3 = space(3, 1);
        let swap = elem(
            sp3,
            &[
                ((1, &[1]), (1, &[2])),
                ((1, &[2]), (1, &[1])),
                ((1, &[3]), (1, &[3])),
            ],
        );
        assert_eq!(
            swap.identity_locus(),
            ClopenSet::cone(&addr(sp3, 1, &[3]))
        );
    }

    #[test]
    fn parity_examples() {
        let sp3 = space(3, 1);
        assert_eq!(Element::identity(sp3).parity(), Parity::EVEN);
        let swap = elem(
            sp3,
            &[
                ((1, &[1]), (1, &[2])),
                ((1, &[2]), (1, &[1])),
                ((1, &[3]), (1, &[3])),
            ],
        );
        assert_eq!(swap.parity(), Parity::ODD);
        let cycle = elem(
            sp3,
            &[
                ((1, &[1]), (1, &[2])),
                ((1, &[2]), (1, &[3])),
                ((1, &[3]), (1, &[1])),
            ],
        );
        assert_eq!(cycle.parity(), Parity::EVEN);
        // Multiplicativity: a 3-cycle is a product of two swaps.
        let swap2 = elem(
            sp3,
            &[
                ((1, &[1]), (1, &[1])),
                ((1, &[2]), (1, &[3])),
                ((1, &[3]), (1, &[2])),
            ],
        );
        let product = swap2.compose(&swap).unwrap();
        assert_eq!(product.parity(), swap.parity().add(swap2.parity()));
    }

    #[test]
    fn parity_trivial_for_even_n() {
        let sp = space(2, 1);
        let swap = elem(sp, &[((1, &[1]), (1, &[2])), ((1, &[2]), (1, &[1]))]);
        assert_eq!(swap.parity(), Parity::EVEN);
    }

    #[test]
    fn restrict_and_assemble_round_trip() {
        let sp = space(2, 1);
        let g = g0();
        let e = ClopenSet::cone(&addr(sp, 1, &[2]));
        let inside = g.restrict(&e).unwrap();
        let outside = g.restrict(&e.complement()).unwrap();
        assert_eq!(Element::assemble(sp, &[inside, outside]).unwrap(), g);
    }

    #[test]
    fn assemble_swap_pieces() {
        let sp = space(2, 1);
        let a = addr(sp, 1, &[1]);
        let b = addr(sp, 1, &[2]);
        let to_b = PartialMap::new(sp, sp, vec![(a.clone(), b.clone())]).unwrap();
        let to_a = PartialMap::new(sp, sp, vec![(b, a)]).unwrap();
        let swap = Element::assemble(sp, &[to_b, to_a]).unwrap();
        assert_eq!(
            swap.compose(&swap).unwrap(),
            Element::identity(sp)
        );
        assert!(!swap.is_identity());
    }

    #[test]
    fn assemble_rejects_non_partition() {
        let sp = space(2, 1);
        let a = addr(sp, 1, &[1]);
        let piece = PartialMap::new(sp, sp, vec![(a.clone(), a)]).unwrap();
        assert!(Element::assemble(sp, &[piece]).is_err());
    }

    #[test]
    fn restrict_identity_gives_identity_piece() {
        let sp = space(2, 1);
        let e = ClopenSet::cone(&addr(sp, 1, &[1, 2]));
        let piece = Element::identity(sp).restrict(&e).unwrap();
        assert_eq!(piece, PartialMap::identity_on(&e));
    }

    #[test]
    fn partial_map_compose_and_inverse() {
        let sp = space(2, 1);
        let g = g0();
        let e = ClopenSet::cone(&addr(sp, 1, &[2]));
        let pm = g.restrict(&e).unwrap();
        let back = pm.inverse().compose(&pm).unwrap();
        assert_eq!(back, PartialMap::identity_on(&e));
    }

    #[test]
    fn display_format() {
        let sp = space(2, 1);
        assert_eq!(Element::identity(sp).to_string(), "V 2 1\n1: -> 1:");
        assert_eq!(
            g0().to_string(),
            "V 2 1\n1:1 -> 1:1.1\n1:2.1 -> 1:1.2\n1:2.2 -> 1:2"
        );
    }
}
