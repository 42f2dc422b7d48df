//! Elements of Fix(S) with prescribed attracting behavior at one point or at
//! every point of S.

use crate::clopen::ClopenSet;
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::germs::{germ_exponent, germ_tuple, in_fix, in_fix0, RationalSet};
use crate::words::{common_prefix_len, Address, RationalPoint};

use super::same_type::same_type_homeo;

/// An attracting element together with the cone data realizing it: the
/// element maps the cone at `alpha` by appending one copy of `beta` (the
/// primitive period of the distinguished point).
#[derive(Clone, Debug)]
pub(crate) struct AttractingWitness {
    pub element: Element,
    pub alpha: Address,
    pub beta: Vec<u32>,
}

/// A depth at which length-`depth` prefixes separate all points of the set
/// from each other.
pub(crate) fn separation_depth(set: &RationalSet) -> usize {
    let mut depth = 1;
    let points = set.points();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if let Some(l) = common_prefix_len(&points[i], &points[j]) {
                depth = depth.max(l + 1);
            }
        }
    }
    depth
}

pub(crate) fn attracting_witness(
    set: &RationalSet,
    s: &RationalPoint,
) -> Result<AttractingWitness> {
    let space = set.space();
    space.check_same(&s.space())?;
    if !set.contains(s) {
        return Err(Error::PointNotInSet {
            point: s.to_string(),
        });
    }
    let others = set.without(s);
    let depth = separation_depth(set);
    let fixed = if others.is_empty() {
        ClopenSet::empty(space)
    } else {
        let cones: Vec<Address> = others.points().iter().map(|p| p.prefix(depth)).collect();
        ClopenSet::normalize(space, &cones)?
    };

    // Deepen the cone around s by whole periods until it avoids the fixed
    // cones and leaves room for the bridging piece.
    let beta = s.period().to_vec();
    let mut alpha = Address::new(space, s.root(), s.preperiod().to_vec())?;
    loop {
        let cone = ClopenSet::cone(&alpha);
        let covered = fixed.union(&cone)?;
        if fixed.intersection(&cone)?.is_empty() && !covered.is_whole() {
            break;
        }
        alpha = alpha.extended(&beta)?;
    }
    let alpha_beta = alpha.extended(&beta)?;

    let rest_dom = fixed.union(&ClopenSet::cone(&alpha))?.complement();
    let rest_ran = fixed.union(&ClopenSet::cone(&alpha_beta))?.complement();
    let mut pieces = vec![PartialMap::new(
        space,
        space,
        vec![(alpha.clone(), alpha_beta)],
    )?];
    if !fixed.is_empty() {
        pieces.push(PartialMap::identity_on(&fixed));
    }
    pieces.push(same_type_homeo(&rest_dom, &rest_ran)?);
    let element = Element::assemble(space, &pieces)?;

    assert!(in_fix(&element, set), "attracting element must fix the set");
    assert!(
        others.is_empty() || in_fix0(&element, &others),
        "attracting element must be the identity near the other points"
    );
    assert_eq!(
        germ_exponent(&element, s)?.value(),
        1,
        "attracting element must have germ exponent +1 at its point"
    );
    Ok(AttractingWitness {
        element,
        alpha,
        beta,
    })
}

/// An element of Fix(S) that is the identity on a neighborhood of every
/// point of S except `s`, where it has germ exponent +1.
pub fn attracting_element(set: &RationalSet, s: &RationalPoint) -> Result<Element> {
    Ok(attracting_witness(set, s)?.element)
}

/// An element of Fix(S) with germ exponent +1 at every point of S, built as
/// the product of the single-point attracting elements.
pub fn attracting_all(set: &RationalSet) -> Result<Element> {
    if set.is_empty() {
        return Err(Error::EmptyClopen);
    }
    let mut product = Element::identity(set.space());
    for s in set.points() {
        product = product.compose(&attracting_element(set, s)?)?;
    }
    assert!(
        germ_tuple(&product, set)?.iter().all(|e| e.value() == 1),
        "product must have germ exponent +1 everywhere on the set"
    );
    Ok(product)
}
