//! Executable witnesses for the structure of the stabilizer groups Fix(S):
//! same-type homeomorphisms, attracting elements, ascending HNN layers, the
//! abelianization map with its order-two witness, commutator membership, and
//! the conjugator realizing Fix(S) ≅ Fix(S') for equal-size sets.

mod attracting;
mod conjugator;
mod hnn;
mod same_type;

pub use attracting::{attracting_all, attracting_element};
pub(crate) use attracting::separation_depth;
pub use conjugator::{conjugate, conjugator, ConjugatorData};
pub use hnn::{hnn_data, hnn_decompose, verify_hnn_criterion, ConditionReport, HnnData, HnnReport};
pub use same_type::{fix_clopen_iso, same_type_homeo, FixClopenIso};

use serde::{Deserialize, Serialize};

use crate::clopen::ClopenSet;
use crate::element::{Element, Parity, PartialMap};
use crate::error::Result;
use crate::germs::{germ_tuple, in_fix0, RationalSet};
use crate::words::{common_prefix_len, Address};

/// Value of the abelianization map on Fix(S): the germ exponent tuple over S
/// together with the parity class (always even when n is even).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AbelImage {
    pub germ_part: Vec<i64>,
    pub parity_part: Parity,
}

impl AbelImage {
    pub fn is_zero(&self) -> bool {
        self.germ_part.iter().all(|k| *k == 0) && self.parity_part == Parity::EVEN
    }

    /// Componentwise sum; the abelianization is a homomorphism into this
    /// addition.
    pub fn add(&self, other: &AbelImage) -> AbelImage {
        assert_eq!(self.germ_part.len(), other.germ_part.len());
        AbelImage {
            germ_part: self
                .germ_part
                .iter()
                .zip(&other.germ_part)
                .map(|(a, b)| a + b)
                .collect(),
            parity_part: self.parity_part.add(other.parity_part),
        }
    }
}

/// The abelianization map on Fix(S): germ tuple crossed with parity.
pub fn abelianize(set: &RationalSet, g: &Element) -> Result<AbelImage> {
    let germ_part = germ_tuple(g, set)?.iter().map(|e| e.value()).collect();
    Ok(AbelImage {
        germ_part,
        parity_part: g.parity(),
    })
}

/// Membership in the commutator subgroup of Fix(S): the identity germ
/// condition together with even parity.
pub fn in_commutator(set: &RationalSet, g: &Element) -> bool {
    in_fix0(g, set) && g.parity() == Parity::EVEN
}

/// An involution in Fix₀(S), swapping two disjoint cones away from S.  For n
/// odd it has odd parity, witnessing the order-two class of the
/// abelianization.
pub fn order_two_element(set: &RationalSet) -> Result<Element> {
    let space = set.space();
    let mut depth = 1;
    let points = set.points();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if let Some(l) = common_prefix_len(&points[i], &points[j]) {
                depth = depth.max(l + 1);
            }
        }
    }
    let (a, b) = loop {
        let cones: Vec<Address> = points.iter().map(|p| p.prefix(depth)).collect();
        let away = ClopenSet::normalize(space, &cones)?.complement();
        match away.cones() {
            [] => {
                depth += 1;
                continue;
            }
            [only] => break (only.child(1)?, only.child(2)?),
            [a, b, ..] => break (a.clone(), b.clone()),
        }
    };
    let swap = PartialMap::new(
        space,
        space,
        vec![(a.clone(), b.clone()), (b.clone(), a.clone())],
    )?;
    let rest = ClopenSet::cone(&a).union(&ClopenSet::cone(&b))?.complement();
    let element = Element::assemble(space, &[swap, PartialMap::identity_on(&rest)])?;

    assert!(
        element.compose(&element)?.is_identity(),
        "swap must square to the identity"
    );
    assert!(
        in_fix0(&element, set),
        "swap must be the identity near every point of S"
    );
    if space.n() % 2 == 1 {
        assert_eq!(element.parity(), Parity::ODD, "transposition must be odd");
    }
    Ok(element)
}
