//! Bit-exact text formats and a JSON mirror for machine use.
//!
//! Formats:
//! - address: `root:w1.w2` (empty word renders as `root:`)
//! - rational point: `root:pre(per)`, e.g. `1:2.1(1.2)`, `1:(2)`
//! - clopen set / rational set: `{item, item}` in canonical order
//! - element: header `V n r`, then one `dom -> ran` line per table pair
//! - partial map: header `P n q r` (q domain roots, r range roots)
//!
//! Formatting always emits canonical form, and `parse(format(x)) == x`.

use serde::{Deserialize, Serialize};

use crate::clopen::ClopenSet;
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::germs::RationalSet;
use crate::words::{Address, RationalPoint, Space};

fn parse_u32(text: &str, line: usize, col: usize, what: &str) -> Result<u32> {
    text.trim()
        .parse::<u32>()
        .map_err(|_| Error::parse(line, col, format!("expected {what}, found {text:?}")))
}

fn parse_word(text: &str, line: usize, col: usize) -> Result<Vec<u32>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('.')
        .map(|part| parse_u32(part, line, col, "a letter"))
        .collect()
}

/// Parse `root:w1.w2` as an address of `space`.
pub fn parse_address(space: Space, text: &str) -> Result<Address> {
    parse_address_at(space, text, 1, 1)
}

fn parse_address_at(space: Space, text: &str, line: usize, col: usize) -> Result<Address> {
    let text = text.trim();
    let Some((root, word)) = text.split_once(':') else {
        return Err(Error::parse(
            line,
            col,
            format!("expected `root:word` address, found {text:?}"),
        ));
    };
    let root = parse_u32(root, line, col, "a root digit")?;
    let word = parse_word(word, line, col + root.to_string().len() + 1)?;
    Address::new(space, root, word)
}

/// Parse `root:pre(per)` as a rational point of `space`.
pub fn parse_point(space: Space, text: &str) -> Result<RationalPoint> {
    let text = text.trim();
    let bad = |msg: String| Error::parse(1, 1, msg);
    let (root, rest) = text
        .split_once(':')
        .ok_or_else(|| bad(format!("expected `root:pre(per)` point, found {text:?}")))?;
    let root = parse_u32(root, 1, 1, "a root digit")?;
    let (pre, rest) = rest
        .split_once('(')
        .ok_or_else(|| bad(format!("missing `(` in point {text:?}")))?;
    let per = rest
        .strip_suffix(')')
        .ok_or_else(|| bad(format!("missing trailing `)` in point {text:?}")))?;
    let pre = parse_word(pre, 1, 1)?;
    let per = parse_word(per, 1, 1)?;
    if per.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    RationalPoint::new(space, root, pre, per)
}

fn parse_braced(text: &str) -> Result<Vec<&str>> {
    let text = text.trim();
    let inner = text
        .strip_prefix('{')
        .and_then(|rest| rest.strip_suffix('}'))
        .ok_or_else(|| Error::parse(1, 1, format!("expected `{{...}}`, found {text:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').collect())
}

/// Parse `{addr, addr}` as a clopen set of `space` (normalized).
pub fn parse_clopen(space: Space, text: &str) -> Result<ClopenSet> {
    let cones = parse_braced(text)?
        .into_iter()
        .map(|part| parse_address_at(space, part, 1, 1))
        .collect::<Result<Vec<_>>>()?;
    ClopenSet::normalize(space, &cones)
}

/// Parse `{point, point}` as a rational set of `space`.
pub fn parse_set(space: Space, text: &str) -> Result<RationalSet> {
    let points = parse_braced(text)?
        .into_iter()
        .map(|part| parse_point(space, part))
        .collect::<Result<Vec<_>>>()?;
    RationalSet::new(space, points)
}

fn parse_table_lines<'a>(
    space: Space,
    ran_space: Space,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Vec<(Address, Address)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((dom, ran)) = line.split_once("->") else {
            return Err(Error::parse(
                lineno,
                1,
                format!("expected `dom -> ran`, found {line:?}"),
            ));
        };
        pairs.push((
            parse_address_at(space, dom, lineno, 1)?,
            parse_address_at(ran_space, ran, lineno, dom.len() + 3)?,
        ));
    }
    Ok(pairs)
}

/// Parse the element text format (`V n r` header plus table lines).
pub fn parse_element(text: &str) -> Result<Element> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next() else {
        return Err(Error::parse(1, 1, "empty input"));
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [tag, n, r] = parts[..] else {
        return Err(Error::parse(1, 1, format!("expected `V n r` header, found {header:?}")));
    };
    if tag != "V" {
        return Err(Error::parse(1, 1, format!("expected `V` header, found {tag:?}")));
    }
    let space = Space::new(parse_u32(n, 1, 3, "n")?, parse_u32(r, 1, 5, "r")?)?;
    Element::new(space, parse_table_lines(space, space, lines)?)
}

/// Parse the partial-map text format (`P n q r` header plus table lines).
pub fn parse_partial_map(text: &str) -> Result<PartialMap> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next() else {
        return Err(Error::parse(1, 1, "empty input"));
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [tag, n, q, r] = parts[..] else {
        return Err(Error::parse(1, 1, format!("expected `P n q r` header, found {header:?}")));
    };
    if tag != "P" {
        return Err(Error::parse(1, 1, format!("expected `P` header, found {tag:?}")));
    }
    let n = parse_u32(n, 1, 3, "n")?;
    let dom_space = Space::new(n, parse_u32(q, 1, 5, "q")?)?;
    let ran_space = Space::new(n, parse_u32(r, 1, 7, "r")?)?;
    PartialMap::new(dom_space, ran_space, parse_table_lines(dom_space, ran_space, lines)?)
}

/// JSON mirror of the element format: `{n, r, pairs: [[dom, ran], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct ElementRepr {
    pub n: u32,
    pub r: u32,
    pub pairs: Vec<(String, String)>,
}

impl From<&Element> for ElementRepr {
    fn from(g: &Element) -> Self {
        ElementRepr {
            n: g.space().n(),
            r: g.space().r(),
            pairs: g
                .table()
                .iter()
                .map(|(d, r)| (d.to_string(), r.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<&ElementRepr> for Element {
    type Error = Error;

    fn try_from(repr: &ElementRepr) -> Result<Element> {
        let space = Space::new(repr.n, repr.r)?;
        let pairs = repr
            .pairs
            .iter()
            .map(|(d, r)| Ok((parse_address(space, d)?, parse_address(space, r)?)))
            .collect::<Result<Vec<_>>>()?;
        Element::new(space, pairs)
    }
}
