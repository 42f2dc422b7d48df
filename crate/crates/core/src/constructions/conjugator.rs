//! The explicit conjugator realizing Fix(S) ≅ Fix(S') for equal-size sets of
//! rational points, possibly across different root counts.
//!
//! The conjugating homeomorphism h is determined by finite data: a base
//! piece h₀ on E and a first-layer piece h₁, extended to the k-th layer by
//! conjugation with the attracting elements.  h itself has infinitely many
//! layers, but any element of Fix(S) only sees finitely many of them, so
//! conjugation is computed with exact tables layer by layer.

use serde::{Deserialize, Serialize};

use crate::clopen::ClopenSet;
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::germs::{germ_exponent, in_fix, RationalSet};
use crate::words::Address;

use super::attracting::attracting_all;
use super::same_type::same_type_homeo;

const SCHEMA_VERSION: u32 = 1;
const DEFAULT_LAYER_CAP: usize = 64;
const EXHAUSTION_CHECK_DEPTH: i64 = 3;

/// Finite data determining the conjugator between Fix(S) and Fix(S').
///
/// `cones` records, for each point s of S, the cone C_u on which the
/// attracting element f acts by appending the word w; the k-th layer around
/// s is C_{u w^{k-1}} minus C_{u w^k}.  On the target side the base set was
/// possibly enlarged by `extra`, a union of sibling cones inside the first
/// target point's cone, to make the types match.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugatorData {
    source: RationalSet,
    target: RationalSet,
    phi: Vec<usize>,
    f: Element,
    f2: Element,
    cones: Vec<(Address, Vec<u32>)>,
    cones2: Vec<(Address, Vec<u32>)>,
    extra: ClopenSet,
    base: ClopenSet,
    base2: ClopenSet,
    h0: PartialMap,
    h1: Vec<PartialMap>,
    layer_cap: usize,
}

#[derive(Serialize, Deserialize)]
struct Bundle<T> {
    schema: u32,
    data: T,
}

/// Per-point attracting cones: for each point of the set, the table pair of
/// `f` whose domain cone contains the point, recorded as (cone, appended
/// word).
fn per_point_cones(f: &Element, set: &RationalSet) -> Vec<(Address, Vec<u32>)> {
    set.points()
        .iter()
        .map(|s| {
            let (dom, ran) = f
                .table()
                .iter()
                .find(|(dom, _)| dom.contains(s))
                .expect("domain table is complete");
            assert!(
                dom.is_strict_prefix_of(ran),
                "attracting table pair must deepen its cone"
            );
            let w = ran.word()[dom.depth()..].to_vec();
            assert_eq!(w.len(), s.period().len(), "germ exponent must be +1");
            for t in 0..2 * w.len() {
                assert_eq!(
                    s.letter_at(dom.depth() + t),
                    w[t % w.len()],
                    "appended word must follow the period of the point"
                );
            }
            (dom.clone(), w)
        })
        .collect()
}

fn deepen(cones: &mut [(Address, Vec<u32>)]) {
    for (u, w) in cones.iter_mut() {
        *u = u.extended(w).expect("deepening stays in the alphabet");
    }
}

fn complement_of_cones(
    space: crate::words::Space,
    cones: &[(Address, Vec<u32>)],
) -> Result<ClopenSet> {
    let addrs: Vec<Address> = cones.iter().map(|(u, _)| u.clone()).collect();
    Ok(ClopenSet::normalize(space, &addrs)?.complement())
}

impl ConjugatorData {
    pub fn source(&self) -> &RationalSet {
        &self.source
    }

    pub fn target(&self) -> &RationalSet {
        &self.target
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn f(&self) -> &Element {
        &self.f
    }

    pub fn f_target(&self) -> &Element {
        &self.f2
    }

    pub fn base(&self) -> &ClopenSet {
        &self.base
    }

    pub fn base_target(&self) -> &ClopenSet {
        &self.base2
    }

    pub fn with_layer_cap(mut self, cap: usize) -> Self {
        self.layer_cap = cap.max(1);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Bundle {
            schema: SCHEMA_VERSION,
            data: self,
        })
        .expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<ConjugatorData> {
        let bundle: Bundle<ConjugatorData> = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        if bundle.schema != SCHEMA_VERSION {
            return Err(Error::parse(
                1,
                1,
                format!("unsupported schema version {}", bundle.schema),
            ));
        }
        bundle.data.validate()?;
        Ok(bundle.data)
    }

    /// Cone word of `cones[i]` deepened by k periods.
    fn deep_cone(cones: &[(Address, Vec<u32>)], i: usize, k: usize) -> Address {
        let (u, w) = &cones[i];
        let mut addr = u.clone();
        for _ in 0..k {
            addr = addr.extended(w).expect("deepening stays in the alphabet");
        }
        addr
    }

    /// The enlargement set shifted k layers down the first target point's
    /// cone: each cone keeps its tail but the prefix u gains k copies of w.
    fn shifted_extra(&self, k: usize) -> ClopenSet {
        if self.extra.is_empty() {
            return self.extra.clone();
        }
        let (u, w) = &self.cones2[0];
        let shifted: Vec<Address> = self
            .extra
            .cones()
            .iter()
            .map(|c| {
                let tail = &c.word()[u.depth()..];
                let mut word = u.word().to_vec();
                for _ in 0..k {
                    word.extend_from_slice(w);
                }
                word.extend_from_slice(tail);
                Address::new(c.space(), c.root(), word).expect("shifted cone is valid")
            })
            .collect();
        ClopenSet::normalize(self.extra.space(), &shifted).expect("shifted cones are disjoint")
    }

    /// k-th residual set around target point t: the k-deep cone minus the
    /// shifted enlargement.
    fn target_residual(&self, k: usize, t: usize) -> ClopenSet {
        let cone = ClopenSet::cone(&Self::deep_cone(&self.cones2, t, k));
        if t == 0 {
            cone.difference(&self.shifted_extra(k)).expect("same space")
        } else {
            cone
        }
    }

    /// Complement of the k-deep source cones: the part of the source space
    /// already swept out by k iterates of f.
    fn source_swept(&self, k: usize) -> ClopenSet {
        let addrs: Vec<Address> = (0..self.cones.len())
            .map(|i| Self::deep_cone(&self.cones, i, k))
            .collect();
        ClopenSet::normalize(self.source.space(), &addrs)
            .expect("deep cones are disjoint")
            .complement()
    }

    fn target_swept(&self, k: usize) -> ClopenSet {
        let mut result = ClopenSet::whole(self.target.space());
        for t in 0..self.cones2.len() {
            result = result
                .difference(&self.target_residual(k, t))
                .expect("same space");
        }
        result
    }

    /// k-th source layer component around point i (k >= 1).
    fn source_layer(&self, k: usize, i: usize) -> ClopenSet {
        let outer = ClopenSet::cone(&Self::deep_cone(&self.cones, i, k - 1));
        let inner = ClopenSet::cone(&Self::deep_cone(&self.cones, i, k));
        outer.difference(&inner).expect("same space")
    }

    /// k-th target layer component around point t (k >= 1).
    fn target_layer(&self, k: usize, t: usize) -> ClopenSet {
        self.target_residual(k - 1, t)
            .difference(&self.target_residual(k, t))
            .expect("same space")
    }

    /// The restriction of the conjugating homeomorphism to the first `depth`
    /// layers: h₀ on the base, and the h₁ pieces transported by the
    /// attracting elements on each deeper layer.
    fn chart(&self, depth: usize) -> Result<PartialMap> {
        let whole_target = ClopenSet::whole(self.target.space());
        let mut pieces = vec![self.h0.clone()];
        for k in 1..=depth {
            let down = self.f.pow(1 - k as i64);
            let up = self.f2.pow(k as i64 - 1).restrict(&whole_target)?;
            for i in 0..self.cones.len() {
                let layer = self.source_layer(k, i);
                let mid = self.h1[i].compose(&down.restrict(&layer)?)?;
                pieces.push(up.compose(&mid)?);
            }
        }
        PartialMap::union(&pieces)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let sq = self.source.space();
        let sr = self.target.space();
        sq.check_same_arity(&sr)?;
        let m = self.source.len();
        if m != self.target.len() || m == 0 {
            return Err(Error::SizeMismatch {
                left: m,
                right: self.target.len(),
            });
        }
        let mut seen = vec![false; m];
        for &t in &self.phi {
            if t >= m || seen[t] {
                return Err(Error::InvalidBijection);
            }
            seen[t] = true;
        }
        if self.phi.len() != m {
            return Err(Error::InvalidBijection);
        }

        let fail = |message: &str| Error::InvalidData {
            message: message.to_string(),
        };
        for (set, f, cones) in [
            (&self.source, &self.f, &self.cones),
            (&self.target, &self.f2, &self.cones2),
        ] {
            if !in_fix(f, set) {
                return Err(fail("attracting element must fix its point set"));
            }
            for (s, (u, w)) in set.points().iter().zip(cones.iter()) {
                if germ_exponent(f, s)?.value() != 1 {
                    return Err(fail("attracting element must have germ +1 everywhere"));
                }
                let expected =
                    PartialMap::new(f.space(), f.space(), vec![(u.clone(), u.extended(w)?)])?;
                if f.restrict(&ClopenSet::cone(u))? != expected {
                    return Err(fail("recorded cone must be an appending cone of f"));
                }
            }
        }

        if self.base != complement_of_cones(sq, &self.cones)? {
            return Err(fail("source base must be the complement of the cones"));
        }
        if self.base2 != self.target_swept(0) {
            return Err(fail("target base must be the complement of the residual sets"));
        }
        if self.base.is_empty() || self.base2.is_empty() {
            return Err(Error::EmptyClopen);
        }
        if !self.extra.is_empty() {
            let (u, w) = &self.cones2[0];
            let band = ClopenSet::cone(u)
                .difference(&ClopenSet::cone(&u.extended(w)?))
                .expect("same space");
            if !band.contains_set(&self.extra) {
                return Err(fail("enlargement must sit inside the first target band"));
            }
        }
        if self.base.type_of().value() != self.base2.type_of().value() {
            return Err(fail("base sets must have equal types"));
        }
        if self.h0.domain() != self.base || self.h0.range() != self.base2 {
            return Err(fail("h0 must map base to target base"));
        }
        if self.h1.len() != m {
            return Err(fail("one first-layer piece per point is required"));
        }
        for i in 0..m {
            if self.h1[i].domain() != self.source_layer(1, i)
                || self.h1[i].range() != self.target_layer(1, self.phi[i])
            {
                return Err(fail("first-layer piece must map layer to matched layer"));
            }
        }

        // The iterates of f must sweep out exactly the recorded cone
        // residuals; checked to a fixed depth, this pins the whole layer
        // bookkeeping to the actual dynamics.
        for k in 1..=EXHAUSTION_CHECK_DEPTH {
            if self.f.pow(k).image(&self.base)? != self.source_swept(k as usize) {
                return Err(fail("f-iterates must sweep the recorded source layers"));
            }
            if self.f2.pow(k).image(&self.base2)? != self.target_swept(k as usize) {
                return Err(fail("f'-iterates must sweep the recorded target layers"));
            }
        }
        if !self.f.image(&self.base)?.contains_set(&self.base)
            || self.f.image(&self.base)? == self.base
        {
            return Err(fail("base must be strictly expanded by f"));
        }
        Ok(())
    }
}

/// Build the conjugator data for two point sets of equal size, with `phi`
/// giving the matching as indices into the canonical point orders.
pub fn conjugator(
    source: &RationalSet,
    target: &RationalSet,
    phi: &[usize],
) -> Result<ConjugatorData> {
    let sq = source.space();
    let sr = target.space();
    sq.check_same_arity(&sr)?;
    let m = source.len();
    if m != target.len() || phi.len() != m {
        return Err(Error::SizeMismatch {
            left: m,
            right: target.len(),
        });
    }
    if m == 0 {
        return Err(Error::EmptyClopen);
    }
    let mut seen = vec![false; m];
    for &t in phi {
        if t >= m || seen[t] {
            return Err(Error::InvalidBijection);
        }
        seen[t] = true;
    }

    let f = attracting_all(source)?;
    let f2 = attracting_all(target)?;
    let mut cones = per_point_cones(&f, source);
    let mut cones2 = per_point_cones(&f2, target);

    // Both bases must be nonempty; deepening the cones by one period each
    // shrinks them and frees room.
    while complement_of_cones(sq, &cones)?.is_empty() {
        deepen(&mut cones);
    }
    while complement_of_cones(sr, &cones2)?.is_empty() {
        deepen(&mut cones2);
    }
    let base = complement_of_cones(sq, &cones)?;

    // Enlarge the target base inside the first point's band until the types
    // agree; each added sibling cone raises the type by one.
    let modulus = sq.modulus() as i64;
    let plain_base2 = complement_of_cones(sr, &cones2)?;
    let delta = (base.type_of().value() as i64 - plain_base2.type_of().value() as i64)
        .rem_euclid(modulus) as usize;
    let extra = if delta == 0 {
        ClopenSet::empty(sr)
    } else {
        let (u, w) = &cones2[0];
        let mut candidates = Vec::new();
        for i in 0..w.len() {
            let stem = u.extended(&w[..i])?;
            for c in sr.letters() {
                if c != w[i] {
                    candidates.push(stem.child(c)?);
                }
            }
        }
        candidates.sort();
        ClopenSet::normalize(sr, &candidates[..delta])?
    };
    let base2 = plain_base2.union(&extra)?;

    let h0 = same_type_homeo(&base, &base2)?;

    let mut data = ConjugatorData {
        source: source.clone(),
        target: target.clone(),
        phi: phi.to_vec(),
        f,
        f2,
        cones,
        cones2,
        extra,
        base,
        base2,
        h0,
        h1: Vec::new(),
        layer_cap: DEFAULT_LAYER_CAP,
    };
    data.h1 = (0..m)
        .map(|i| {
            let left = data.source_layer(1, i);
            let right = data.target_layer(1, data.phi[i]);
            assert_eq!(left.type_of().value(), 0, "layers have type zero");
            assert_eq!(right.type_of().value(), 0, "layers have type zero");
            same_type_homeo(&left, &right)
        })
        .collect::<Result<Vec<_>>>()?;
    data.validate().expect("constructed data must validate");
    Ok(data)
}

/// Conjugate g ∈ Fix(S) to an element of Fix(S') through the stored
/// homeomorphism.  A group isomorphism Fix(S) → Fix(S').
pub fn conjugate(data: &ConjugatorData, g: &Element) -> Result<Element> {
    data.source.space().check_same(&g.space())?;
    if !in_fix(g, &data.source) {
        let moved = data
            .source
            .points()
            .iter()
            .find(|p| g.evaluate(p).map(|q| q != **p).unwrap_or(true))
            .expect("some point is not fixed");
        return Err(Error::PointNotFixed {
            point: moved.to_string(),
        });
    }
    let m = data.source.len();

    // Depth at which g acts as a pure power of f around every source point:
    // past the identity cone of f^{-k} g at each point.
    let mut exponents = Vec::with_capacity(m);
    let mut depth = 1usize;
    for (i, s) in data.source.points().iter().enumerate() {
        let k = germ_exponent(g, s)?.value();
        let d = data.f.pow(-k).compose(g)?;
        let locus = d.identity_locus();
        let witness = locus
            .cones()
            .iter()
            .find(|c| c.contains(s))
            .expect("germ exponent zero forces an identity cone")
            .clone();
        let (u, w) = &data.cones[i];
        let mut need = k.unsigned_abs() as usize;
        while u.depth() + need * w.len() < witness.depth() {
            need += 1;
        }
        depth = depth.max(need);
        exponents.push(k);
    }
    if depth > data.layer_cap {
        return Err(Error::LayerCapExceeded {
            cap: data.layer_cap,
        });
    }

    // Outer depth: enough layers to contain the g-image of the inner region.
    let inner_region = data.source_swept(depth);
    let g_image = g.image(&inner_region)?;
    let mut outer = depth;
    while !data.source_swept(outer).contains_set(&g_image) {
        outer += 1;
        if outer > data.layer_cap {
            return Err(Error::LayerCapExceeded {
                cap: data.layer_cap,
            });
        }
    }

    let chart_in = data.chart(depth)?;
    let chart_out = data.chart(outer)?;
    let core = chart_out
        .compose(&g.restrict(&inner_region)?)?
        .compose(&chart_in.inverse())?;

    let mut pieces = vec![core];
    for i in 0..m {
        let residual = data.target_residual(depth, data.phi[i]);
        pieces.push(data.f2.pow(exponents[i]).restrict(&residual)?);
    }
    let result = Element::assemble(data.target.space(), &pieces)?;

    assert!(
        in_fix(&result, &data.target),
        "conjugated element must fix the target set"
    );
    for i in 0..m {
        let t = &data.target.points()[data.phi[i]];
        assert_eq!(
            germ_exponent(&result, t)?.value(),
            exponents[i],
            "conjugation must preserve germ exponents through the matching"
        );
    }
    Ok(result)
}
