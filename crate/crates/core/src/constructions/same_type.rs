//! Thompson-like homeomorphisms between clopen sets of equal type, and the
//! induced identification of Fix of a clopen complement with a smaller
//! Higman-Thompson group.

use crate::clopen::ClopenSet;
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::words::Space;

/// A Thompson-like bijection between two nonempty clopen sets, which exists
/// exactly when their types agree mod n - 1.
///
/// Both sides are split into the same number m of cones (m is the larger cone
/// count, lifted to the common residue class) and paired in lex order, so the
/// output is deterministic.
pub fn same_type_homeo(left: &ClopenSet, right: &ClopenSet) -> Result<PartialMap> {
    left.space().check_same_arity(&right.space())?;
    if left.is_empty() || right.is_empty() {
        return Err(Error::EmptyClopen);
    }
    let modulus = left.space().modulus();
    if left.type_of().value() != right.type_of().value() {
        return Err(Error::TypeMismatch {
            left: left.type_of().value(),
            right: right.type_of().value(),
            modulus,
        });
    }
    let c_left = left.cones().len();
    let c_right = right.cones().len();
    let mut m = c_left.max(c_right);
    m += (c_left as i64 - m as i64).rem_euclid(modulus as i64) as usize;
    let dom = left.split_into(m)?;
    let ran = right.split_into(m)?;
    PartialMap::new(
        left.space(),
        right.space(),
        dom.into_iter().zip(ran).collect(),
    )
}

/// The identification of the elements supported on a proper nonempty clopen
/// set E with the group V_{n,q}, where q is the type of E (represented in
/// 1..=n-1).
#[derive(Clone, Debug)]
pub struct FixClopenIso {
    support: ClopenSet,
    inner_space: Space,
    chart: PartialMap,
}

/// Build the identification for a proper nonempty clopen set.
pub fn fix_clopen_iso(support: &ClopenSet) -> Result<FixClopenIso> {
    if support.is_empty() {
        return Err(Error::EmptyClopen);
    }
    if support.is_whole() {
        return Err(Error::ImproperClopen);
    }
    let n = support.space().n();
    let t = support.type_of().value();
    // Types are residues mod n - 1 but V_{n,q} needs q >= 1, so 0 is
    // represented by n - 1.
    let q = if t == 0 { n.saturating_sub(1).max(1) } else { t };
    let inner_space = Space::new(n, q)?;
    let chart = same_type_homeo(support, &ClopenSet::whole(inner_space))?;
    Ok(FixClopenIso {
        support: support.clone(),
        inner_space,
        chart,
    })
}

impl FixClopenIso {
    pub fn support(&self) -> &ClopenSet {
        &self.support
    }

    pub fn inner_space(&self) -> Space {
        self.inner_space
    }

    pub fn chart(&self) -> &PartialMap {
        &self.chart
    }

    /// Conjugate an element supported on E through the chart, yielding an
    /// element of V_{n,q}.  A group homomorphism on its domain of definition.
    pub fn apply(&self, g: &Element) -> Result<Element> {
        let outside = self.support.complement();
        if !g.identity_locus().contains_set(&outside) {
            let moved = outside
                .cones()
                .iter()
                .find(|c| !g.identity_locus().contains_set(&ClopenSet::cone(c)))
                .map(|c| c.to_string())
                .unwrap_or_default();
            return Err(Error::NotSupported { address: moved });
        }
        let restricted = g.restrict(&self.support)?;
        self.chart
            .compose(&restricted.compose(&self.chart.inverse())?)?
            .into_element()
    }

    /// Pull an element of V_{n,q} back to an element supported on E.
    pub fn unapply(&self, inner: &Element) -> Result<Element> {
        self.inner_space.check_same(&inner.space())?;
        let whole = ClopenSet::whole(self.inner_space);
        let piece = self
            .chart
            .inverse()
            .compose(&inner.restrict(&whole)?.compose(&self.chart)?)?;
        let outside = self.support.complement();
        if outside.is_empty() {
            piece.into_element()
        } else {
            Element::assemble(
                self.support.space(),
                &[piece, PartialMap::identity_on(&outside)],
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_address, parse_clopen};

    fn space(n: u32, r: u32) -> Space {
        Space::new(n, r).unwrap()
    }

    #[test]
    fn single_cone_to_itself() {
        let sp = space(2, 1);
        let e = parse_clopen(sp, "{1:1}").unwrap();
        let pm = same_type_homeo(&e, &e).unwrap();
        assert_eq!(pm.table().len(), 1);
        assert_eq!(pm, PartialMap::identity_on(&e));
    }

    #[test]
    fn cone_to_whole_space_for_n_two() {
        let sp = space(2, 1);
        let e = parse_clopen(sp, "{1:1}").unwrap();
        let whole = ClopenSet::whole(sp);
        let pm = same_type_homeo(&e, &whole).unwrap();
        assert_eq!(pm.domain(), e);
        assert_eq!(pm.range(), whole);
        // Bijectivity via membership sampling: the inverse undoes the map.
        for seed in 0..50u32 {
            let pre: Vec<u32> = (0..(seed % 4)).map(|i| (seed >> i) % 2 + 1).collect();
            let p = crate::words::RationalPoint::new(sp, 1, [vec![1], pre].concat(), vec![1 + seed % 2])
                .unwrap();
            let q = pm.evaluate(&p).unwrap();
            assert_eq!(pm.inverse().evaluate(&q).unwrap(), p);
        }
    }

    #[test]
    fn type_mismatch_is_an_error() {
        let sp = space(3, 1);
        let one = parse_clopen(sp, "{1:1}").unwrap(); // type 1
        let two = parse_clopen(sp, "{1:1, 1:2}").unwrap(); // type 2
        assert!(matches!(
            same_type_homeo(&one, &two),
            Err(Error::TypeMismatch { .. })
        ));
        assert!(same_type_homeo(&one, &ClopenSet::empty(sp)).is_err());
    }

    #[test]
    fn cross_space_homeo() {
        let sp31 = space(3, 1);
        let sp32 = space(3, 2);
        // type 2 on both sides.
        let left = parse_clopen(sp31, "{1:1, 1:2}").unwrap();
        let right = ClopenSet::whole(sp32);
        let pm = same_type_homeo(&left, &right).unwrap();
        assert_eq!(pm.domain(), left);
        assert_eq!(pm.range(), right);
    }

    #[test]
    fn fix_clopen_iso_round_trip() {
        let sp = space(2, 1);
        let e = parse_clopen(sp, "{1:1}").unwrap();
        let iso = fix_clopen_iso(&e).unwrap();
        assert_eq!(iso.inner_space(), space(2, 1));

        assert_eq!(
            iso.apply(&Element::identity(sp)).unwrap(),
            Element::identity(iso.inner_space())
        );

        // An element supported on C_1: swap its two halves.
        let a = parse_address(sp, "1:1.1").unwrap();
        let b = parse_address(sp, "1:1.2").unwrap();
        let c = parse_address(sp, "1:2").unwrap();
        let g = Element::new(
            sp,
            vec![(a.clone(), b.clone()), (b, a), (c.clone(), c)],
        )
        .unwrap();
        let inner = iso.apply(&g).unwrap();
        assert_eq!(iso.unapply(&inner).unwrap(), g);
        // Homomorphism: the image of g squared is the image squared.
        let g2 = g.compose(&g).unwrap();
        assert_eq!(
            iso.apply(&g2).unwrap(),
            inner.compose(&inner).unwrap()
        );
    }

    #[test]
    fn apply_rejects_unsupported_elements() {
        let sp = space(2, 1);
        let e = parse_clopen(sp, "{1:1}").unwrap();
        let iso = fix_clopen_iso(&e).unwrap();
        let a = parse_address(sp, "1:1").unwrap();
        let b = parse_address(sp, "1:2").unwrap();
        let swap = Element::new(sp, vec![(a.clone(), b.clone()), (b, a)]).unwrap();
        assert!(matches!(
            iso.apply(&swap),
            Err(Error::NotSupported { .. })
        ));
    }

    #[test]
    fn fix_clopen_iso_rejects_degenerate_inputs() {
        let sp = space(2, 1);
        assert!(fix_clopen_iso(&ClopenSet::empty(sp)).is_err());
        assert!(fix_clopen_iso(&ClopenSet::whole(sp)).is_err());
    }

    #[test]
    fn zero_type_uses_q_equals_n_minus_one() {
        let sp = space(3, 1);
        // Two cones: type 2 = n - 1, represented as q = 2.
        let e = parse_clopen(sp, "{1:1, 1:2}").unwrap();
        let iso = fix_clopen_iso(&e).unwrap();
        assert_eq!(iso.inner_space().r(), 2);
        let sp4 = space(4, 1);
        let e = parse_clopen(sp4, "{1:1, 1:2, 1:3, 1:4.1}").unwrap(); // 4 cones, type 1
        let iso = fix_clopen_iso(&e).unwrap();
        assert_eq!(iso.inner_space().r(), 1);
    }
}
