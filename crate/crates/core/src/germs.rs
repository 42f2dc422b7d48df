//! Germ exponents at rational fixed points and membership in Fix(S) and
//! Fix_0(S).
//!
//! The germ group at a rational point is infinite cyclic, generated by the
//! attracting replacement that deepens the periodic part by one period.  An
//! element fixing the point agrees with the k-th power of that generator
//! near the point; `germ_exponent` reads off k from the canonical table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::{RationalPoint, Space};

/// Exponent of the attracting generator; positive means attracting (the
/// image cone is deeper).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GermExponent(pub i64);

impl GermExponent {
    pub fn value(&self) -> i64 {
        self.0
    }
}

impl fmt::Display for GermExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > 0 {
            write!(f, "+{}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A finite set of rational points, sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RationalSet {
    space: Space,
    points: Vec<RationalPoint>,
}

impl RationalSet {
    pub fn new(space: Space, mut points: Vec<RationalPoint>) -> Result<RationalSet> {
        for p in &points {
            space.check_same(&p.space())?;
        }
        points.sort();
        points.dedup();
        Ok(RationalSet { space, points })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn without(&self, p: &RationalPoint) -> RationalSet {
        RationalSet {
            space: self.space,
            points: self.points.iter().filter(|q| *q != p).cloned().collect(),
        }
    }
}

impl fmt::Display for RationalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// The exponent k such that `g` agrees with the k-th power of the attracting
/// generator near `s`.  Requires that `g` fixes `s`.
pub fn germ_exponent(g: &Element, s: &RationalPoint) -> Result<GermExponent> {
    g.space().check_same(&s.space())?;
    if g.evaluate(s)? != *s {
        return Err(Error::PointNotFixed {
            point: s.to_string(),
        });
    }
    let (dom, ran) = g
        .table()
        .iter()
        .find(|(dom, _)| dom.contains(s))
        .expect("domain table is complete");
    // g fixes s, so both the domain cone and its image are prefixes of s.
    debug_assert!(ran.contains(s));
    let gap = ran.depth() as i64 - dom.depth() as i64;
    let period = s.period().len() as i64;
    // Divisibility is forced (Fine and Wilf on the periodic tail); a failure
    // here is a library bug, not a user error.
    assert_eq!(
        gap.rem_euclid(period),
        0,
        "depth gap {gap} not divisible by period length {period}"
    );
    Ok(GermExponent(gap / period))
}

/// Germ exponents at every point of `S`, in canonical point order.  This is
/// the homomorphism from Fix(S) to the product of the germ groups.
pub fn germ_tuple(g: &Element, set: &RationalSet) -> Result<Vec<GermExponent>> {
    set.points().iter().map(|s| germ_exponent(g, s)).collect()
}

/// Does `g` fix every point of `S`?
pub fn in_fix(g: &Element, set: &RationalSet) -> bool {
    if g.space() != set.space() {
        return false;
    }
    set.points()
        .iter()
        .all(|s| g.evaluate(s).map(|q| q == *s).unwrap_or(false))
}

/// Is `g` the identity on a neighborhood of `S`?  Equivalent to fixing every
/// point with germ exponent zero; cross-checked against the identity locus.
pub fn in_fix0(g: &Element, set: &RationalSet) -> bool {
    if !in_fix(g, set) {
        return false;
    }
    let by_germs = set
        .points()
        .iter()
        .all(|s| germ_exponent(g, s).map(|e| e.value() == 0).unwrap_or(false));
    let locus = g.identity_locus();
    let by_locus = set.points().iter().all(|s| locus.contains_point(s));
    debug_assert_eq!(by_germs, by_locus, "germ and locus characterizations differ");
    by_germs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Address;

    fn space(n: u32, r: u32) -> Space {
        Space::new(n, r).unwrap()
    }

    fn point(sp: Space, root: u32, pre: &[u32], per: &[u32]) -> RationalPoint {
        RationalPoint::new(sp, root, pre.to_vec(), per.to_vec()).unwrap()
    }

    fn addr(sp: Space, root: u32, word: &[u32]) -> Address {
        Address::new(sp, root, word.to_vec()).unwrap()
    }

    fn g0() -> Element {
        let sp = space(2, 1);
        Element::new(
            sp,
            vec![
                (addr(sp, 1, &[1]), addr(sp, 1, &[1, 1])),
                (addr(sp, 1, &[2, 1]), addr(sp, 1, &[1, 2])),
                (addr(sp, 1, &[2, 2]), addr(sp, 1, &[2])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn germ_of_identity_is_zero() {
        let sp = space(2, 1);
        let s = point(sp, 1, &[], &[2]);
        assert_eq!(
            germ_exponent(&Element::identity(sp), &s).unwrap().value(),
            0
        );
    }

    #[test]
    fn germs_of_g0() {
        let sp = space(2, 1);
        let g = g0();
        let one_bar = point(sp, 1, &[], &[1]);
        let two_bar = point(sp, 1, &[], &[2]);
        assert_eq!(germ_exponent(&g, &one_bar).unwrap().value(), 1);
        assert_eq!(germ_exponent(&g, &two_bar).unwrap().value(), -1);

        let set = RationalSet::new(sp, vec![one_bar, two_bar]).unwrap();
        let tuple: Vec<i64> = germ_tuple(&g, &set).unwrap().iter().map(|e| e.value()).collect();
        assert_eq!(tuple, vec![1, -1]);
    }

    #[test]
    fn germ_requires_fixed_point() {
        let sp = space(2, 1);
        let g = g0();
        let moved = point(sp, 1, &[2, 1], &[1]);
        assert!(matches!(
            germ_exponent(&g, &moved),
            Err(Error::PointNotFixed { .. })
        ));
    }

    #[test]
    fn fix_and_fix0_membership() {
        let sp = space(2, 1);
        let g = g0();
        let set = RationalSet::new(
            sp,
            vec![point(sp, 1, &[], &[1]), point(sp, 1, &[], &[2])],
        )
        .unwrap();
        assert!(in_fix(&g, &set));
        assert!(!in_fix0(&g, &set));
        assert!(in_fix(&Element::identity(sp), &set));
        assert!(in_fix0(&Element::identity(sp), &set));
    }

    #[test]
    fn fix0_for_supported_swap() {
        let sp = space(3, 1);
        let swap = Element::new(
            sp,
            vec![
                (addr(sp, 1, &[1]), addr(sp, 1, &[2])),
                (addr(sp, 1, &[2]), addr(sp, 1, &[1])),
                (addr(sp, 1, &[3]), addr(sp, 1, &[3])),
            ],
        )
        .unwrap();
        let set = RationalSet::new(sp, vec![point(sp, 1, &[], &[3])]).unwrap();
        assert!(in_fix(&swap, &set));
        assert!(in_fix0(&swap, &set));
    }

    #[test]
    fn germ_additivity_and_inverse() {
        let sp = space(2, 1);
        let g = g0();
        let s = point(sp, 1, &[], &[1]);
        let g2 = g.compose(&g).unwrap();
        assert_eq!(germ_exponent(&g2, &s).unwrap().value(), 2);
        assert_eq!(germ_exponent(&g.invert(), &s).unwrap().value(), -1);
        let mixed = g.invert().compose(&g2).unwrap();
        assert_eq!(germ_exponent(&mixed, &s).unwrap().value(), 1);
    }

    #[test]
    fn rational_set_dedups_and_sorts() {
        let sp = space(2, 1);
        let a = point(sp, 1, &[], &[2]);
        let b = point(sp, 1, &[2], &[2]); // same point, canonicalized
        let set = RationalSet::new(sp, vec![a.clone(), b]).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&a));
    }
}
