//! Rewriting of flow orbits by veelike rules. In single mode every
//! separator tile anchors a piece consisting of the separator and the block
//! of content after it: short blocks are replaced through the short table,
//! long blocks have only their depth-length prefix substituted. In pair mode
//! the anchor is the midpoint of the inner-separator tile and the two sides
//! are rewritten independently. Every rewritten piece keeps its total length
//! (the image tiles share one uniform scale factor), so the circumference is
//! preserved exactly.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;

use crate::subshift::HullSpec;
use crate::thompson::{TwoVElement, VElement};
use crate::veelike::{target_language, PairVeelikeRule, VeelikeRule};

use super::{FlowError, FlowOrbit, OrbitPoint, Rat, Tile};

pub(crate) struct SingleMap {
    pub(crate) rule: VeelikeRule,
    pub(crate) zero: String,
    pub(crate) one: String,
    pub(crate) sep: String,
    allowed: BTreeSet<(String, String)>,
}

struct PairMap {
    rule: PairVeelikeRule,
    left: [String; 2],
    right: [String; 2],
    at: String,
    sep: String,
    allowed: BTreeSet<(String, String)>,
}

enum Mode {
    Single(SingleMap),
    Pair(Box<PairMap>),
}

/// A mapping-class representative acting on flow orbits by local rewriting.
pub struct InducedMap {
    mode: Mode,
}

fn shift_bigrams(shift: &crate::subshift::VertexShift) -> BTreeSet<(String, String)> {
    let a = shift.alphabet();
    let mut out = BTreeSet::new();
    for i in 0..shift.dim() {
        for j in 0..shift.dim() {
            if shift.allows(i, j) {
                out.insert((a.symbol(i).to_string(), a.symbol(j).to_string()));
            }
        }
    }
    out
}

impl InducedMap {
    /// Single-mode map over the standard symbols `0`, `1`, `#`.
    pub fn single(rule: VeelikeRule) -> InducedMap {
        InducedMap::single_with_symbols(rule, "0", "1", "#")
            .expect("standard symbols are distinct")
    }

    /// Single-mode map with custom content and separator symbols.
    pub fn single_with_symbols(
        rule: VeelikeRule,
        zero: &str,
        one: &str,
        sep: &str,
    ) -> Result<InducedMap, FlowError> {
        let lang = target_language()
            .relabel(|s| if s == "0" { zero.to_string() } else { one.to_string() })
            .map_err(|_| FlowError::MarkerShape("content symbols must be distinct".into()))?;
        let spec = HullSpec::single(lang, sep)
            .map_err(|e| FlowError::MarkerShape(e.to_string()))?;
        let shift = spec
            .vertex_shift()
            .expect("the target language is locally 2-testable");
        Ok(InducedMap {
            mode: Mode::Single(SingleMap {
                rule,
                zero: zero.to_string(),
                one: one.to_string(),
                sep: sep.to_string(),
                allowed: shift_bigrams(&shift),
            }),
        })
    }

    /// Pair-mode map over the standard symbols `0_A 1_A @ 0_B 1_B #`.
    pub fn pair(rule: PairVeelikeRule) -> InducedMap {
        let left = target_language().relabel(|s| format!("{s}_A")).unwrap();
        let right = target_language().relabel(|s| format!("{s}_B")).unwrap();
        let spec = HullSpec::pair(left, right, "@", "#", true).expect("symbols are disjoint");
        let shift = spec
            .vertex_shift()
            .expect("the target language is locally 2-testable");
        InducedMap {
            mode: Mode::Pair(Box::new(PairMap {
                rule,
                left: ["0_A".into(), "1_A".into()],
                right: ["0_B".into(), "1_B".into()],
                at: "@".into(),
                sep: "#".into(),
                allowed: shift_bigrams(&shift),
            })),
        }
    }

    pub fn from_v_element(g: &VElement) -> InducedMap {
        InducedMap::single(VeelikeRule::from_element(g))
    }

    pub fn from_tv_element(g: &TwoVElement) -> InducedMap {
        InducedMap::pair(PairVeelikeRule::from_element(g))
    }

    pub fn is_pair(&self) -> bool {
        matches!(self.mode, Mode::Pair(_))
    }

    /// The outer separator symbol.
    pub fn separator(&self) -> &str {
        match &self.mode {
            Mode::Single(m) => &m.sep,
            Mode::Pair(m) => &m.sep,
        }
    }

    pub(crate) fn single_parts(&self) -> Option<&SingleMap> {
        match &self.mode {
            Mode::Single(m) => Some(m),
            Mode::Pair(_) => None,
        }
    }

    fn allowed(&self) -> &BTreeSet<(String, String)> {
        match &self.mode {
            Mode::Single(m) => &m.allowed,
            Mode::Pair(m) => &m.allowed,
        }
    }

    /// Checks that every circular bigram of the orbit is admissible for the
    /// hull shift of the rule's language.
    pub fn check_admissible(&self, o: &FlowOrbit) -> Result<(), FlowError> {
        let n = o.len();
        let allowed = self.allowed();
        for i in 0..n {
            let from = o.tiles()[i].symbol();
            let to = o.tiles()[(i + 1) % n].symbol();
            if !allowed.contains(&(from.to_string(), to.to_string())) {
                return Err(FlowError::Inadmissible {
                    position: i,
                    from: from.to_string(),
                    to: to.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Anchor positions: left endpoints of separator tiles in single mode,
    /// midpoints of inner-separator tiles in pair mode.
    pub fn anchors(&self, o: &FlowOrbit) -> Vec<OrbitPoint> {
        match &self.mode {
            Mode::Single(m) => o
                .tiles()
                .iter()
                .enumerate()
                .filter(|(_, t)| t.symbol() == m.sep)
                .map(|(i, _)| OrbitPoint::start_of(i))
                .collect(),
            Mode::Pair(m) => o
                .tiles()
                .iter()
                .enumerate()
                .filter(|(_, t)| t.symbol() == m.at)
                .map(|(i, t)| OrbitPoint {
                    tile: i,
                    offset: t.length() / rat_int(2),
                })
                .collect(),
        }
    }

    /// Rewrites an admissible orbit. Orbits without anchors are returned
    /// unchanged.
    pub fn apply(&self, o: &FlowOrbit) -> Result<FlowOrbit, FlowError> {
        self.check_admissible(o)?;
        match &self.mode {
            Mode::Single(m) => apply_single(m, o),
            Mode::Pair(m) => apply_pair(m, o),
        }
    }
}

fn rat_int(n: usize) -> Rat {
    Rat::from_integer(num_bigint::BigInt::from(n))
}

/// Tile index and in-tile offset of coordinate `r` within a tile list.
pub(crate) fn locate_in_tiles(tiles: &[Tile], mut r: Rat) -> (usize, Rat) {
    for (i, t) in tiles.iter().enumerate() {
        if r < *t.length() {
            return (i, r);
        }
        r -= t.length();
    }
    // r lands exactly on the end; wrap to the start of the span
    (0, Rat::zero())
}

fn decode_single(m: &SingleMap, symbol: &str) -> Result<char, FlowError> {
    if symbol == m.zero {
        Ok('0')
    } else if symbol == m.one {
        Ok('1')
    } else {
        Err(FlowError::UnknownSymbol(symbol.to_string()))
    }
}

fn encode_single(m: &SingleMap, c: char) -> String {
    if c == '0' {
        m.zero.clone()
    } else {
        m.one.clone()
    }
}

pub(crate) fn apply_single(m: &SingleMap, o: &FlowOrbit) -> Result<FlowOrbit, FlowError> {
    let n = o.len();
    let seps: Vec<usize> = (0..n)
        .filter(|&i| o.tiles()[i].symbol() == m.sep)
        .collect();
    if seps.is_empty() {
        return Ok(o.clone());
    }
    let depth = m.rule.depth();

    struct Piece {
        rewritten: Vec<usize>, // the separator tile plus consumed content, orbit order
        new_tiles: Vec<Tile>,
        kept: Vec<usize>, // untouched content after the rewritten prefix
    }

    let mut pieces: Vec<Piece> = Vec::with_capacity(seps.len());
    for &s in &seps {
        let mut content = Vec::new();
        let mut i = (s + 1) % n;
        while o.tiles()[i].symbol() != m.sep {
            content.push(i);
            i = (i + 1) % n;
        }
        let block: String = content
            .iter()
            .map(|&c| decode_single(m, o.tiles()[c].symbol()))
            .collect::<Result<_, _>>()?;
        let (consumed, kept, image) = if block.len() < depth {
            let image = m
                .rule
                .apply(&block)
                .map_err(|_| FlowError::RuleDomain(block.clone()))?;
            (content.clone(), Vec::new(), image)
        } else {
            let key = &block[..depth];
            let image = m
                .rule
                .long_table()
                .get(key)
                .cloned()
                .ok_or_else(|| FlowError::RuleDomain(key.to_string()))?;
            (content[..depth].to_vec(), content[depth..].to_vec(), image)
        };
        let mut rewritten = vec![s];
        rewritten.extend(&consumed);
        let piece_len: Rat = rewritten
            .iter()
            .map(|&i| o.tiles()[i].length().clone())
            .sum();
        let each = piece_len / rat_int(1 + image.len());
        let mut new_tiles = vec![Tile::new(m.sep.clone(), each.clone())?];
        for c in image.chars() {
            new_tiles.push(Tile::new(encode_single(m, c), each.clone())?);
        }
        pieces.push(Piece {
            rewritten,
            new_tiles,
            kept,
        });
    }

    // assemble, starting from the first separator
    enum Placement {
        Kept(usize),
        InPiece(usize),
    }
    let mut placement: Vec<Option<Placement>> = (0..n).map(|_| None).collect();
    let mut piece_start: Vec<usize> = Vec::with_capacity(pieces.len());
    let mut out: Vec<Tile> = Vec::new();
    for (pid, piece) in pieces.iter().enumerate() {
        piece_start.push(out.len());
        for &idx in &piece.rewritten {
            placement[idx] = Some(Placement::InPiece(pid));
        }
        out.extend(piece.new_tiles.iter().cloned());
        for &idx in &piece.kept {
            placement[idx] = Some(Placement::Kept(out.len()));
            out.push(o.tiles()[idx].clone());
        }
    }

    let base = o.base();
    let new_base = match placement[base.tile]
        .as_ref()
        .expect("every tile is placed")
    {
        Placement::Kept(out_idx) => OrbitPoint {
            tile: *out_idx,
            offset: base.offset.clone(),
        },
        Placement::InPiece(pid) => {
            let piece = &pieces[*pid];
            let mut r = Rat::zero();
            for &idx in &piece.rewritten {
                if idx == base.tile {
                    r += &base.offset;
                    break;
                }
                r += o.tiles()[idx].length();
            }
            let (local, offset) = locate_in_tiles(&piece.new_tiles, r);
            OrbitPoint {
                tile: piece_start[*pid] + local,
                offset,
            }
        }
    };
    FlowOrbit::new(out, new_base)
}

fn apply_pair(m: &PairMap, o: &FlowOrbit) -> Result<FlowOrbit, FlowError> {
    let n = o.len();
    if !(0..n).any(|i| o.tiles()[i].symbol() == m.at) {
        return Ok(o.clone());
    }
    // admissible pair orbits with an anchor contain an outer separator, and
    // no read ever crosses one, so rotating a separator to the front keeps
    // every span contiguous
    let first_sep = (0..n)
        .find(|&i| o.tiles()[i].symbol() == m.sep)
        .ok_or_else(|| FlowError::UnknownSymbol(m.at.clone()))?;
    let o = o.rotated(first_sep);
    let tiles = o.tiles();
    let depth = m.rule.depth();
    let is_left = |s: &str| s == m.left[0] || s == m.left[1];
    let is_right = |s: &str| s == m.right[0] || s == m.right[1];
    let decode_left = |s: &str| if s == m.left[0] { '0' } else { '1' };
    let decode_right = |s: &str| if s == m.right[0] { '0' } else { '1' };
    let half = |r: &Rat| r / rat_int(2);

    struct Replacement {
        at_index: usize,
        left_span: Vec<usize>,  // orbit order, ends at at_index - 1
        right_span: Vec<usize>, // orbit order, starts at at_index + 1
        new_left: Vec<Tile>,
        new_at: Tile,
        new_right: Vec<Tile>,
        factor_l: Rat,
        factor_r: Rat,
        old_half: Rat,
    }

    let mut replacements: Vec<Replacement> = Vec::new();
    for a in 0..n {
        if tiles[a].symbol() != m.at {
            continue;
        }
        // read left for up to `depth` content symbols, spelling the left
        // rule word in its natural order
        let mut w1 = String::new();
        let mut left_span = Vec::new();
        let mut i = (a + n - 1) % n;
        while is_left(tiles[i].symbol()) && w1.len() < depth {
            w1.push(decode_left(tiles[i].symbol()));
            left_span.push(i);
            i = (i + n - 1) % n;
        }
        left_span.reverse();
        let mut w2 = String::new();
        let mut right_span = Vec::new();
        let mut i = (a + 1) % n;
        while is_right(tiles[i].symbol()) && w2.len() < depth {
            w2.push(decode_right(tiles[i].symbol()));
            right_span.push(i);
            i = (i + 1) % n;
        }
        let (v1, v2) = m
            .rule
            .table()
            .get(&(w1.clone(), w2.clone()))
            .ok_or_else(|| FlowError::RuleDomain(format!("({w1},{w2})")))?;

        let old_half = half(tiles[a].length());
        let len_l: Rat = left_span
            .iter()
            .map(|&i| tiles[i].length().clone())
            .sum::<Rat>()
            + old_half.clone();
        let len_r: Rat = old_half.clone()
            + right_span
                .iter()
                .map(|&i| tiles[i].length().clone())
                .sum::<Rat>();
        // content tiles weigh 1, the separator half weighs 1/2
        let factor_l = len_l * rat_int(2) / rat_int(2 * v1.len() + 1);
        let factor_r = len_r * rat_int(2) / rat_int(2 * v2.len() + 1);

        let encode_left = |c: char| if c == '0' { m.left[0].clone() } else { m.left[1].clone() };
        let encode_right = |c: char| if c == '0' { m.right[0].clone() } else { m.right[1].clone() };
        let new_left: Vec<Tile> = v1
            .chars()
            .rev()
            .map(|c| Tile::new(encode_left(c), factor_l.clone()))
            .collect::<Result<_, _>>()?;
        let new_right: Vec<Tile> = v2
            .chars()
            .map(|c| Tile::new(encode_right(c), factor_r.clone()))
            .collect::<Result<_, _>>()?;
        let new_at = Tile::new(m.at.clone(), half(&factor_l) + half(&factor_r))?;
        replacements.push(Replacement {
            at_index: a,
            left_span,
            right_span,
            new_left,
            new_at,
            new_right,
            factor_l,
            factor_r,
            old_half,
        });
    }

    enum Placement {
        Left(usize), // replacement id
        At(usize),
        Right(usize),
    }
    let mut placement: Vec<Option<Placement>> = (0..n).map(|_| None).collect();
    for (rid, r) in replacements.iter().enumerate() {
        for &i in &r.left_span {
            placement[i] = Some(Placement::Left(rid));
        }
        placement[r.at_index] = Some(Placement::At(rid));
        for &i in &r.right_span {
            placement[i] = Some(Placement::Right(rid));
        }
    }

    let mut out: Vec<Tile> = Vec::new();
    let mut kept_out: Vec<Option<usize>> = (0..n).map(|_| None).collect();
    let mut left_start = vec![0usize; replacements.len()];
    let mut at_out = vec![0usize; replacements.len()];
    for i in 0..n {
        match &placement[i] {
            None => {
                kept_out[i] = Some(out.len());
                out.push(tiles[i].clone());
            }
            Some(Placement::At(rid)) => {
                let r = &replacements[*rid];
                left_start[*rid] = out.len();
                out.extend(r.new_left.iter().cloned());
                at_out[*rid] = out.len();
                out.push(r.new_at.clone());
                out.extend(r.new_right.iter().cloned());
            }
            Some(_) => {} // consumed by a replacement, emitted at its anchor
        }
    }

    // basepoint transport: piece-relative coordinate on the matching side
    let base = o.base();
    let new_base = match &placement[base.tile] {
        None => OrbitPoint {
            tile: kept_out[base.tile].expect("kept tiles are placed"),
            offset: base.offset.clone(),
        },
        Some(Placement::Left(rid)) | Some(Placement::At(rid)) | Some(Placement::Right(rid)) => {
            let r = &replacements[*rid];
            let on_left = match &placement[base.tile] {
                Some(Placement::Left(_)) => true,
                Some(Placement::Right(_)) => false,
                _ => base.offset < r.old_half,
            };
            if on_left {
                let coord = match &placement[base.tile] {
                    Some(Placement::At(_)) => {
                        let span: Rat = r
                            .left_span
                            .iter()
                            .map(|&i| tiles[i].length().clone())
                            .sum();
                        span + base.offset.clone()
                    }
                    _ => {
                        let before: Rat = r
                            .left_span
                            .iter()
                            .take_while(|&&i| i != base.tile)
                            .map(|&i| tiles[i].length().clone())
                            .sum();
                        before + base.offset.clone()
                    }
                };
                let content_total = r.factor_l.clone() * rat_int(r.new_left.len());
                if coord < content_total {
                    let (local, offset) = locate_in_tiles(&r.new_left, coord);
                    OrbitPoint {
                        tile: left_start[*rid] + local,
                        offset,
                    }
                } else {
                    OrbitPoint {
                        tile: at_out[*rid],
                        offset: coord - content_total,
                    }
                }
            } else {
                // coordinate measured from the anchor midpoint
                let coord = match &placement[base.tile] {
                    Some(Placement::At(_)) => base.offset.clone() - r.old_half.clone(),
                    _ => {
                        let before: Rat = r
                            .right_span
                            .iter()
                            .take_while(|&&i| i != base.tile)
                            .map(|&i| tiles[i].length().clone())
                            .sum();
                        r.old_half.clone() + before + base.offset.clone()
                    }
                };
                let new_half_r = r.factor_r.clone() / rat_int(2);
                if coord < new_half_r {
                    OrbitPoint {
                        tile: at_out[*rid],
                        offset: r.factor_l.clone() / rat_int(2) + coord,
                    }
                } else {
                    let (local, offset) = locate_in_tiles(&r.new_right, coord - new_half_r);
                    OrbitPoint {
                        tile: at_out[*rid] + 1 + local,
                        offset,
                    }
                }
            }
        }
    };
    FlowOrbit::new(out, new_base)
}

/// Builds the orbit with one separator and the given word, applies the
/// induced map of the element's rule, and reads the content back. The
/// result must agree with applying the rule to the word directly.
pub fn simulate_embedding(g: &VElement, word: &str) -> Result<String, FlowError> {
    let map = InducedMap::from_v_element(g);
    let orbit = FlowOrbit::separator_and_word("#", word)?;
    let image = map.apply(&orbit)?;
    let seq = image.symbol_sequence();
    debug_assert_eq!(seq[0], "#", "single separator leads the canonical rotation");
    Ok(seq[1..].concat())
}

/// Why an orbit check failed.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitDefect {
    SequenceChanged {
        before: Vec<String>,
        after: Vec<String>,
    },
    AnchorCountChanged {
        before: usize,
        after: usize,
    },
    CircumferenceChanged {
        before: String,
        after: String,
    },
}

/// Outcome of [`orbit_fixed_check`]: a counterexample if some orbit moved,
/// plus the indices of orbits whose tile geometry was distorted even though
/// their symbol sequence (and so their orbit) is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCheck {
    pub counterexample: Option<(usize, OrbitDefect)>,
    pub distorted: Vec<usize>,
}

impl OrbitCheck {
    pub fn is_pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Applies the maps right-to-left (the last map acts first, matching
/// composition order) to every orbit and checks that symbol sequences,
/// anchor counts, and circumferences are all preserved. Tile-length
/// distortion does not fail the check; it is reported separately.
pub fn orbit_fixed_check(
    maps: &[InducedMap],
    orbits: &[FlowOrbit],
) -> Result<OrbitCheck, FlowError> {
    let mut distorted = Vec::new();
    for (idx, orbit) in orbits.iter().enumerate() {
        let mut current = orbit.clone();
        for map in maps.iter().rev() {
            current = map.apply(&current)?;
        }
        let before_seq = orbit.symbol_sequence();
        let after_seq = current.symbol_sequence();
        if before_seq != after_seq {
            return Ok(OrbitCheck {
                counterexample: Some((
                    idx,
                    OrbitDefect::SequenceChanged {
                        before: before_seq,
                        after: after_seq,
                    },
                )),
                distorted,
            });
        }
        if let Some(map) = maps.first() {
            let before_anchors = map.anchors(orbit).len();
            let after_anchors = map.anchors(&current).len();
            if before_anchors != after_anchors {
                return Ok(OrbitCheck {
                    counterexample: Some((
                        idx,
                        OrbitDefect::AnchorCountChanged {
                            before: before_anchors,
                            after: after_anchors,
                        },
                    )),
                    distorted,
                });
            }
        }
        let before_len = orbit.circumference();
        let after_len = current.circumference();
        if before_len != after_len {
            return Ok(OrbitCheck {
                counterexample: Some((
                    idx,
                    OrbitDefect::CircumferenceChanged {
                        before: super::rat_to_string(&before_len),
                        after: super::rat_to_string(&after_len),
                    },
                )),
                distorted,
            });
        }
        let mut before_lengths: Vec<Rat> =
            orbit.tiles().iter().map(|t| t.length().clone()).collect();
        let mut after_lengths: Vec<Rat> =
            current.tiles().iter().map(|t| t.length().clone()).collect();
        before_lengths.sort();
        after_lengths.sort();
        if before_lengths != after_lengths {
            distorted.push(idx);
        }
    }
    Ok(OrbitCheck {
        counterexample: None,
        distorted,
    })
}

/// A random admissible orbit over `0`, `1`, `#` with unit tile lengths and
/// at most `max_tiles` tiles: either separator-free binary content or one or
/// two separated language words.
pub fn random_admissible_orbit<R: Rng>(rng: &mut R, max_tiles: usize) -> FlowOrbit {
    assert!(max_tiles >= 1);
    if rng.gen_bool(0.25) {
        let len = rng.gen_range(1..=max_tiles);
        let symbols: Vec<String> = (0..len)
            .map(|_| if rng.gen::<bool>() { "1" } else { "0" }.to_string())
            .collect();
        return FlowOrbit::unit(symbols).expect("non-empty by construction");
    }
    let segments = rng.gen_range(1..=2.min(max_tiles));
    let mut budget = max_tiles - segments;
    let mut symbols = Vec::new();
    for _ in 0..segments {
        symbols.push("#".to_string());
        let word_len = if budget == 0 { 0 } else { rng.gen_range(0..=budget) };
        budget -= word_len;
        if word_len > 0 {
            for _ in 0..word_len - 1 {
                symbols.push(if rng.gen::<bool>() { "1" } else { "0" }.to_string());
            }
            symbols.push("1".to_string());
        }
    }
    FlowOrbit::unit(symbols).expect("non-empty by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn swap_map() -> InducedMap {
        InducedMap::from_v_element(&VElement::swap())
    }

    fn elem_a() -> VElement {
        VElement::new([("0", "00"), ("10", "01"), ("11", "1")]).unwrap()
    }

    #[test]
    fn anchors_examples() {
        let m = swap_map();
        let o = FlowOrbit::unit(["#", "1"]).unwrap();
        assert_eq!(m.anchors(&o), vec![OrbitPoint::start_of(0)]);
        let o = FlowOrbit::unit(["1", "1"]).unwrap();
        assert!(m.anchors(&o).is_empty());

        let pm = InducedMap::from_tv_element(&TwoVElement::baker());
        let o = FlowOrbit::unit(["1_A", "@", "1_B", "#"]).unwrap();
        let anchors = pm.anchors(&o);
        assert_eq!(anchors.len(), 1);
        assert_eq!(anchors[0], OrbitPoint { tile: 1, offset: rat(1, 2) });
    }

    #[test]
    fn swap_collapses_and_restores() {
        let m = swap_map();
        let o = FlowOrbit::unit(["#", "1"]).unwrap();
        let once = m.apply(&o).unwrap();
        assert_eq!(once.symbols(), vec!["#"]);
        assert_eq!(*once.tiles()[0].length(), rat(2, 1));
        let twice = m.apply(&once).unwrap();
        assert_eq!(twice, o); // exact: symbols, unit lengths, basepoint
    }

    #[test]
    fn swap_rewrites_long_blocks_in_place() {
        let m = swap_map();
        let o = FlowOrbit::unit(["#", "0", "1"]).unwrap();
        let image = m.apply(&o).unwrap();
        assert_eq!(image.symbol_sequence(), vec!["#", "1", "1"]);
        assert_eq!(image.circumference(), rat(3, 1));
    }

    #[test]
    fn identity_map_fixes_everything() {
        let m = InducedMap::from_v_element(&VElement::identity());
        for symbols in [vec!["#", "1"], vec!["#", "0", "1", "#", "1"], vec!["0", "1"]] {
            let o = FlowOrbit::unit(symbols).unwrap();
            let image = m.apply(&o).unwrap();
            assert_eq!(image.symbol_sequence(), o.symbol_sequence());
            assert_eq!(image.circumference(), o.circumference());
        }
    }

    #[test]
    fn inadmissible_orbits_are_rejected() {
        let m = swap_map();
        // content 0 directly before a separator is forbidden
        let o = FlowOrbit::unit(["#", "0"]).unwrap();
        assert!(matches!(
            m.apply(&o),
            Err(FlowError::Inadmissible { .. })
        ));
    }

    #[test]
    fn simulation_matches_rule_application() {
        assert_eq!(simulate_embedding(&VElement::swap(), "1").unwrap(), "");
        assert_eq!(simulate_embedding(&VElement::swap(), "01").unwrap(), "11");
        assert_eq!(simulate_embedding(&elem_a(), "11").unwrap(), "1");
        let lang = target_language();
        let alphabet = lang.alphabet().clone();
        for (_, g) in crate::thompson::generators() {
            let rule = VeelikeRule::from_element(&g);
            for w in lang.enumerate(6) {
                let s = alphabet.format(&w);
                assert_eq!(
                    simulate_embedding(&g, &s).unwrap(),
                    rule.apply(&s).unwrap(),
                    "simulation differs at {s:?}"
                );
            }
        }
    }

    #[test]
    fn involution_round_trip_is_exact() {
        let m = swap_map();
        for symbols in [vec!["#", "0", "1"], vec!["#", "1", "#", "1", "1"]] {
            let o = FlowOrbit::unit(symbols).unwrap();
            let back = m.apply(&m.apply(&o).unwrap()).unwrap();
            assert_eq!(back, o);
        }
    }

    #[test]
    fn relator_check_passes_and_non_identity_fails() {
        let swap2 = vec![swap_map(), swap_map()];
        let orbit = FlowOrbit::unit(["#", "0", "1"]).unwrap();
        let check = orbit_fixed_check(&swap2, &[orbit.clone()]).unwrap();
        assert!(check.is_pass());

        let a = elem_a();
        let pair = vec![
            InducedMap::from_v_element(&a),
            InducedMap::from_v_element(&a.inverse()),
        ];
        let lang = target_language();
        let alphabet = lang.alphabet().clone();
        let orbits: Vec<FlowOrbit> = lang
            .enumerate(5)
            .iter()
            .map(|w| FlowOrbit::separator_and_word("#", &alphabet.format(w)).unwrap())
            .collect();
        assert!(orbit_fixed_check(&pair, &orbits).unwrap().is_pass());

        let alone = vec![swap_map()];
        let check = orbit_fixed_check(&alone, &[FlowOrbit::unit(["#", "1"]).unwrap()]).unwrap();
        match check.counterexample {
            Some((0, OrbitDefect::SequenceChanged { .. })) => {}
            other => panic!("expected a sequence change, got {other:?}"),
        }
    }

    #[test]
    fn faithfulness_every_generator_moves_an_orbit() {
        let lang = target_language();
        let alphabet = lang.alphabet().clone();
        for (name, g) in crate::thompson::generators() {
            let m = InducedMap::from_v_element(&g);
            let moved = lang.enumerate(6).iter().any(|w| {
                let orbit =
                    FlowOrbit::separator_and_word("#", &alphabet.format(w)).unwrap();
                m.apply(&orbit).unwrap().symbol_sequence() != orbit.symbol_sequence()
            });
            assert!(moved, "generator {name} fixes all short orbits");
        }
    }

    #[test]
    fn pair_baker_moves_content_across() {
        let m = InducedMap::from_tv_element(&TwoVElement::baker());
        let o = FlowOrbit::unit(["1_A", "@", "1_B", "#"]).unwrap();
        let image = m.apply(&o).unwrap();
        assert_eq!(image.symbol_sequence(), vec!["#", "@", "1_B", "1_B"]);
        assert_eq!(image.circumference(), rat(4, 1));

        let fixed = FlowOrbit::unit(["@", "#"]).unwrap();
        let image = m.apply(&fixed).unwrap();
        assert_eq!(image.symbol_sequence(), fixed.symbol_sequence());
        assert_eq!(image, fixed.rotated(1)); // output starts at the separator

        let id = InducedMap::from_tv_element(&TwoVElement::identity());
        let o = FlowOrbit::unit(["1_A", "@", "0_B", "1_B", "#"]).unwrap();
        assert_eq!(id.apply(&o).unwrap().symbol_sequence(), o.symbol_sequence());
    }

    #[test]
    fn custom_symbols_follow_the_same_hull() {
        let rule = VeelikeRule::from_element(&VElement::swap());
        let m = InducedMap::single_with_symbols(rule, "a", "b", "2").unwrap();
        let o = FlowOrbit::unit(["2", "b"]).unwrap();
        let image = m.apply(&o).unwrap();
        assert_eq!(image.symbols(), vec!["2"]);
        // content "a" directly before the separator is forbidden
        let bad = FlowOrbit::unit(["2", "a"]).unwrap();
        assert!(matches!(m.apply(&bad), Err(FlowError::Inadmissible { .. })));
        // clashing names are refused
        let rule = VeelikeRule::from_element(&VElement::swap());
        assert!(InducedMap::single_with_symbols(rule, "x", "x", "#").is_err());
    }

    #[test]
    fn pair_relators_fix_orbits() {
        let b = TwoVElement::baker();
        let maps = vec![
            InducedMap::from_tv_element(&b),
            InducedMap::from_tv_element(&b.inverse()),
        ];
        let orbits = vec![
            FlowOrbit::unit(["1_A", "@", "1_B", "#"]).unwrap(),
            FlowOrbit::unit(["@", "#"]).unwrap(),
            FlowOrbit::unit(["1_A", "0_A", "1_A", "@", "0_B", "1_B", "#"]).unwrap(),
            FlowOrbit::unit(["#", "1_A", "@", "#", "@", "1_B"]).unwrap(),
        ];
        let check = orbit_fixed_check(&maps, &orbits).unwrap();
        assert!(check.is_pass(), "{:?}", check.counterexample);
    }

    #[test]
    fn pair_round_trip_preserves_circumference() {
        let b = TwoVElement::baker();
        let forward = InducedMap::from_tv_element(&b);
        let backward = InducedMap::from_tv_element(&b.inverse());
        let orbits = [
            FlowOrbit::unit(["1_A", "@", "1_B", "#"]).unwrap(),
            FlowOrbit::unit(["@", "#"]).unwrap(),
            FlowOrbit::unit(["1_A", "0_A", "1_A", "@", "#"]).unwrap(),
        ];
        for o in &orbits {
            let there = forward.apply(o).unwrap();
            assert_eq!(there.circumference(), o.circumference());
            let back = backward.apply(&there).unwrap();
            assert_eq!(back.symbol_sequence(), o.symbol_sequence());
            assert_eq!(back.circumference(), o.circumference());
        }
    }

    #[test]
    fn outputs_remain_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let maps: Vec<InducedMap> = crate::thompson::generators()
            .into_iter()
            .map(|(_, g)| InducedMap::from_v_element(&g))
            .collect();
        for _ in 0..50 {
            let orbit = random_admissible_orbit(&mut rng, 8);
            for m in &maps {
                let image = m.apply(&orbit).unwrap();
                assert!(m.check_admissible(&image).is_ok());
                assert_eq!(image.circumference(), orbit.circumference());
            }
        }
    }
}
