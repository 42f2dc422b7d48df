//! Deterministic generators and independent brute-force oracles for the test
//! suites.  Nothing in the main library depends on the oracles; the
//! generators are shared with the CLI's `random` verb.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clopen::ClopenSet;
use crate::constructions::{
    attracting_element, fix_clopen_iso, separation_depth, HnnData,
};
use crate::element::{random_element_with, Element};
use crate::error::{Error, Result};
use crate::germs::RationalSet;
use crate::words::{Address, RationalPoint, Space};

/// Configuration for the sampling oracles.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    /// How many random points to sample when comparing elements.
    pub sample_points: usize,
    /// How many letters to expand when comparing points; must dominate twice
    /// the deepest table address plus the longest period involved so prefix
    /// comparisons are conclusive.
    pub expansion_depth: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            sample_points: 64,
            expansion_depth: 96,
        }
    }
}

impl Oracle {
    fn effective_depth(&self, elements: &[&Element]) -> usize {
        let deepest = elements
            .iter()
            .flat_map(|g| g.table().iter())
            .flat_map(|(d, r)| [d.depth(), r.depth()])
            .max()
            .unwrap_or(0);
        self.expansion_depth.max(2 * (deepest + 8))
    }
}

/// A seed-deterministic random rational point with preperiod and period drawn
/// up to `depth` letters.
pub fn random_point<R: Rng>(space: Space, depth: usize, rng: &mut R) -> RationalPoint {
    let root = rng.gen_range(1..=space.r());
    let pre_len = rng.gen_range(0..=depth);
    let per_len = rng.gen_range(1..=depth.max(1));
    let pre: Vec<u32> = (0..pre_len).map(|_| rng.gen_range(1..=space.n())).collect();
    let per: Vec<u32> = (0..per_len).map(|_| rng.gen_range(1..=space.n())).collect();
    RationalPoint::new(space, root, pre, per).expect("letters are in range")
}

/// A random clopen set: leaves of a random complete code kept independently
/// with probability one half.
pub fn random_clopen<R: Rng>(space: Space, depth: usize, rng: &mut R) -> ClopenSet {
    let code = random_element_with(space, depth, rng);
    let kept: Vec<Address> = code
        .table()
        .iter()
        .map(|(d, _)| d.clone())
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    ClopenSet::normalize(space, &kept).expect("code leaves are disjoint")
}

/// A random set of distinct rational points.
pub fn random_set<R: Rng>(space: Space, count: usize, depth: usize, rng: &mut R) -> RationalSet {
    let mut points = Vec::new();
    while points.len() < count {
        let p = random_point(space, depth, rng);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    RationalSet::new(space, points).expect("points share the space")
}

/// A random element supported on a proper nonempty clopen set (the identity
/// elsewhere).
pub fn random_supported_element<R: Rng>(
    support: &ClopenSet,
    depth: usize,
    rng: &mut R,
) -> Element {
    let iso = fix_clopen_iso(support).expect("support is proper and nonempty");
    let inner = random_element_with(iso.inner_space(), depth, rng);
    iso.unapply(&inner).expect("inner element matches the chart")
}

/// A random element of Fix₀(S): supported away from a neighborhood of every
/// point of the set.
pub fn random_fix0_element<R: Rng>(set: &RationalSet, rng: &mut R) -> Element {
    assert!(!set.is_empty(), "need at least one point");
    let space = set.space();
    let mut depth = separation_depth(set);
    let support = loop {
        let cones: Vec<Address> = set.points().iter().map(|p| p.prefix(depth)).collect();
        let away = ClopenSet::normalize(space, &cones)
            .expect("prefixes are addresses")
            .complement();
        if !away.is_empty() {
            break away;
        }
        depth += 1;
    };
    random_supported_element(&support, 3, rng)
}

/// A random element of Fix(S): a product of powers of attracting elements
/// with a Fix₀ factor, covering all germ profiles.
pub fn random_fix_element<R: Rng>(set: &RationalSet, rng: &mut R) -> Element {
    assert!(!set.is_empty(), "need at least one point");
    let mut g = random_fix0_element(set, rng);
    for s in set.points() {
        if rng.gen_bool(0.6) {
            let k = rng.gen_range(-2i64..=2);
            let a = attracting_element(set, s).expect("point is in the set");
            g = g.compose(&a.pow(k)).expect("same space");
        }
    }
    g
}

/// A random element of the HNN base subgroup H = Fix(S) ∩ Fix₀(T): supported
/// off the plateau and off a neighborhood of the other points.
pub fn random_base_element<R: Rng>(data: &HnnData, rng: &mut R) -> Element {
    let set = data.set();
    let space = set.space();
    let mut blocked = data.plateau().clone();
    let others = set.without(data.point());
    if !others.is_empty() {
        let depth = separation_depth(set);
        let cones: Vec<Address> = others.points().iter().map(|p| p.prefix(depth)).collect();
        blocked = blocked
            .union(&ClopenSet::normalize(space, &cones).expect("prefixes are addresses"))
            .expect("same space");
    }
    let support = blocked.complement();
    random_supported_element(&support, 3, rng)
}

/// Do two elements agree on every sampled point?  Independent of structural
/// equality: points are compared by expanding their letter sequences.
pub fn pointwise_equal(g: &Element, h: &Element, oracle: &Oracle) -> bool {
    if g.space() != h.space() {
        return false;
    }
    let space = g.space();
    let depth = oracle.effective_depth(&[g, h]);
    let mut points = Vec::new();
    // Directed search over both domain partitions: a structural disagreement
    // must show up on some cone of one of the tables.
    for (dom, _) in g.table().iter().chain(h.table()) {
        points.push(dom.sample_point(&[1]).expect("1 is a letter"));
        points.push(dom.sample_point(&[space.n()]).expect("n is a letter"));
        points.push(dom.sample_point(&[1, space.n()]).expect("letters in range"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f696e7473);
    for _ in 0..oracle.sample_points {
        points.push(random_point(space, 6, &mut rng));
    }
    points.iter().all(|p| {
        let a = g.evaluate(p).expect("complete table");
        let b = h.evaluate(p).expect("complete table");
        a.root() == b.root() && a.expand(depth) == b.expand(depth)
    })
}

/// Germ exponent computed the slow way: compare g near s against powers of
/// an independently built attracting generator until one matches on a
/// neighborhood.
pub fn germ_by_iteration(g: &Element, s: &RationalPoint, oracle: &Oracle) -> Result<i64> {
    if g.evaluate(s)? != *s {
        return Err(Error::PointNotFixed {
            point: s.to_string(),
        });
    }
    let set = RationalSet::new(g.space(), vec![s.clone()])?;
    let a = attracting_element(&set, s)?;
    let bound = oracle.effective_depth(&[g, &a]) as i64;
    for magnitude in 0..=bound {
        for k in [magnitude, -magnitude] {
            let candidate = a.pow(-k).compose(g)?;
            if candidate.identity_locus().contains_point(s) {
                return Ok(k);
            }
        }
    }
    Err(Error::OracleBoundExceeded { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::random_element;
    use crate::germs::{germ_exponent, in_fix, in_fix0};

    fn space(n: u32, r: u32) -> Space {
        Space::new(n, r).unwrap()
    }

    fn point(sp: Space, root: u32, pre: &[u32], per: &[u32]) -> RationalPoint {
        RationalPoint::new(sp, root, pre.to_vec(), per.to_vec()).unwrap()
    }

    fn g0() -> Element {
        let sp = space(2, 1);
        let addr = |w: &[u32]| Address::new(sp, 1, w.to_vec()).unwrap();
        Element::new(
            sp,
            vec![
                (addr(&[1]), addr(&[1, 1])),
                (addr(&[2, 1]), addr(&[1, 2])),
                (addr(&[2, 2]), addr(&[2])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn random_element_is_deterministic() {
        let sp = space(3, 2);
        assert_eq!(random_element(sp, 3, 42), random_element(sp, 3, 42));
        assert_eq!(random_element(sp, 0, 42), Element::identity(sp));
    }

    #[test]
    fn random_elements_satisfy_inverse_law() {
        let sp = space(2, 1);
        for seed in 0..100 {
            let g = random_element(sp, 4, seed);
            assert!(g.compose(&g.invert()).unwrap().is_identity());
        }
    }

    #[test]
    fn pointwise_equal_on_equal_and_unequal() {
        let oracle = Oracle::default();
        let g = g0();
        assert!(pointwise_equal(&g, &g, &oracle));
        let id = Element::identity(g.space());
        assert!(!pointwise_equal(&g, &id, &oracle));
    }

    #[test]
    fn pointwise_agrees_with_structural_equality() {
        let sp = space(2, 1);
        let oracle = Oracle::default();
        for seed in 0..100u64 {
            let g = random_element(sp, 3, seed);
            let h = random_element(sp, 3, seed + 1000);
            assert_eq!(g == h, pointwise_equal(&g, &h, &oracle));
        }
    }

    #[test]
    fn germ_by_iteration_matches_direct_computation() {
        let sp = space(2, 1);
        let oracle = Oracle::default();
        let g = g0();
        let one_bar = point(sp, 1, &[], &[1]);
        let two_bar = point(sp, 1, &[], &[2]);
        assert_eq!(germ_by_iteration(&g, &one_bar, &oracle).unwrap(), 1);
        assert_eq!(germ_by_iteration(&g, &two_bar, &oracle).unwrap(), -1);
        assert_eq!(
            germ_by_iteration(&Element::identity(sp), &one_bar, &oracle).unwrap(),
            0
        );
    }

    #[test]
    fn germ_by_iteration_on_powers() {
        let sp = space(2, 1);
        let oracle = Oracle::default();
        let s = point(sp, 1, &[], &[2]);
        let set = RationalSet::new(sp, vec![s.clone()]).unwrap();
        let a = attracting_element(&set, &s).unwrap();
        assert_eq!(germ_by_iteration(&a.pow(5), &s, &oracle).unwrap(), 5);
        assert_eq!(
            germ_by_iteration(&a.pow(5), &s, &oracle).unwrap(),
            germ_exponent(&a.pow(5), &s).unwrap().value()
        );
    }

    #[test]
    fn generated_fix_elements_land_in_fix() {
        let sp = space(3, 1);
        let set = RationalSet::new(
            sp,
            vec![point(sp, 1, &[], &[1]), point(sp, 1, &[2], &[3])],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            assert!(in_fix(&random_fix_element(&set, &mut rng), &set));
            assert!(in_fix0(&random_fix0_element(&set, &mut rng), &set));
        }
    }

    #[test]
    fn random_clopen_and_set_are_well_formed() {
        let sp = space(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let e = random_clopen(sp, 3, &mut rng);
            assert_eq!(e.space(), sp);
            let s = random_set(sp, 3, 3, &mut rng);
            assert_eq!(s.len(), 3);
        }
    }
}
