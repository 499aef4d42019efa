//! Marker-coded rewriting: abstract symbols are represented inside a host
//! shift by equal-length, mutually unbordered marker words. Maximal runs of
//! marker occurrences are decoded, rewritten with the single-mode rules, and
//! re-encoded with uniform rescaling. Content where the coding breaks on the
//! left is left untouched; a break on the right is treated as the start of
//! another separator marker.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::lang::{find_marker_words, Dfa};

use super::induced::SingleMap;
use super::{FlowError, FlowOrbit, InducedMap, OrbitPoint, Rat, Tile};

/// Marker words for a set of abstract symbols, all of one length over the
/// host alphabet, pairwise mutually unbordered (including each against
/// itself) so that occurrences can never overlap and runs parse uniquely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedAlphabet {
    markers: BTreeMap<String, Vec<String>>,
    length: usize,
}

fn has_cross_border(u: &[String], v: &[String]) -> bool {
    (1..u.len()).any(|k| k <= v.len() && u[..k] == v[v.len() - k..])
}

impl CodedAlphabet {
    pub fn new<I, S>(markers: I) -> Result<Self, FlowError>
    where
        I: IntoIterator<Item = (S, Vec<String>)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (sym, word) in markers {
            let sym = sym.into();
            if map.insert(sym.clone(), word).is_some() {
                return Err(FlowError::MarkerShape(format!(
                    "duplicate marker for symbol {sym:?}"
                )));
            }
        }
        if map.is_empty() {
            return Err(FlowError::MarkerShape("no markers given".into()));
        }
        let length = map.values().next().expect("non-empty").len();
        if length == 0 {
            return Err(FlowError::MarkerShape("markers must be non-empty".into()));
        }
        for w in map.values() {
            if w.len() != length {
                return Err(FlowError::MarkerShape(
                    "markers must all have the same length".into(),
                ));
            }
        }
        let words: Vec<&Vec<String>> = map.values().collect();
        for u in &words {
            for v in &words {
                if has_cross_border(u, v) {
                    return Err(FlowError::MarkerShape(format!(
                        "markers {u:?} and {v:?} are not mutually unbordered"
                    )));
                }
            }
        }
        Ok(CodedAlphabet { markers: map, length })
    }

    /// Runs the marker-word search over the host language and assigns the
    /// words found to the abstract symbols in order.
    pub fn from_search(
        host: &Dfa,
        symbols: &[&str],
        max_len: usize,
    ) -> Result<Self, FlowError> {
        let words = find_marker_words(host, symbols.len(), max_len)
            .map_err(|e| FlowError::MarkerShape(e.to_string()))?;
        let alphabet = host.alphabet();
        CodedAlphabet::new(symbols.iter().zip(words).map(|(sym, w)| {
            (
                sym.to_string(),
                w.symbols()
                    .iter()
                    .map(|&id| alphabet.symbol(id).to_string())
                    .collect::<Vec<String>>(),
            )
        }))
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn marker(&self, symbol: &str) -> Option<&[String]> {
        self.markers.get(symbol).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.markers.iter().map(|(s, w)| (s.as_str(), w.as_slice()))
    }

    /// Encodes an abstract orbit into the host: every abstract tile becomes
    /// its marker word, with the tile length spread evenly.
    pub fn encode_orbit(&self, orbit: &FlowOrbit) -> Result<FlowOrbit, FlowError> {
        let mut tiles = Vec::with_capacity(orbit.len() * self.length);
        for t in orbit.tiles() {
            let marker = self
                .marker(t.symbol())
                .ok_or_else(|| FlowError::MissingMarker(t.symbol().to_string()))?;
            let each = t.length() / Rat::from_integer(num_bigint::BigInt::from(self.length));
            for s in marker {
                tiles.push(Tile::new(s.clone(), each.clone())?);
            }
        }
        let coordinate = orbit.base_coordinate();
        let encoded = FlowOrbit::new(tiles, OrbitPoint::start_of(0))?;
        let base = encoded.locate(&coordinate);
        FlowOrbit::new(encoded.tiles().to_vec(), base)
    }
}

impl InducedMap {
    /// Applies the single-mode rewriting through a marker coding: decode
    /// maximal marker runs, rewrite the decoded pieces, re-encode with
    /// uniform rescaling. Unparseable content is never modified.
    pub fn apply_coded(
        &self,
        code: &CodedAlphabet,
        orbit: &FlowOrbit,
    ) -> Result<FlowOrbit, FlowError> {
        let m = self.single_parts().ok_or(FlowError::WrongMode)?;
        for sym in [&m.zero, &m.one, &m.sep] {
            if code.marker(sym).is_none() {
                return Err(FlowError::MissingMarker(sym.clone()));
            }
        }
        let n = orbit.len();
        let ell = code.length();
        if n < ell {
            return Ok(orbit.clone());
        }

        let symbols: Vec<&str> = orbit.tiles().iter().map(Tile::symbol).collect();
        let mut occurrences: BTreeMap<usize, String> = BTreeMap::new();
        for p in 0..n {
            for (sym, marker) in code.iter() {
                if (0..ell).all(|k| symbols[(p + k) % n] == marker[k]) {
                    occurrences.insert(p, sym.to_string());
                    break;
                }
            }
        }
        if occurrences.is_empty() {
            return Ok(orbit.clone());
        }

        if occurrences.len() * ell == n {
            return self.coded_full_circle(m, code, orbit, &occurrences);
        }
        self.coded_partial(m, code, orbit, &occurrences)
    }

    fn coded_full_circle(
        &self,
        _m: &SingleMap,
        code: &CodedAlphabet,
        orbit: &FlowOrbit,
        occurrences: &BTreeMap<usize, String>,
    ) -> Result<FlowOrbit, FlowError> {
        let n = orbit.len();
        let ell = code.length();
        let &start = occurrences.keys().next().expect("non-empty");
        let rotated = orbit.rotated(start);
        let count = n / ell;
        let mut abstract_tiles = Vec::with_capacity(count);
        for i in 0..count {
            let original_pos = (start + i * ell) % n;
            let sym = occurrences
                .get(&original_pos)
                .expect("occurrences tile the circle");
            let length: Rat = rotated.tiles()[i * ell..(i + 1) * ell]
                .iter()
                .map(|t| t.length().clone())
                .sum();
            abstract_tiles.push(Tile::new(sym.clone(), length)?);
        }
        let coordinate = rotated.base_coordinate();
        let decoded = FlowOrbit::new(abstract_tiles, OrbitPoint::start_of(0))?;
        let base = decoded.locate(&coordinate);
        let decoded = FlowOrbit::new(decoded.tiles().to_vec(), base)?;
        match self.apply(&decoded) {
            Ok(image) => code.encode_orbit(&image),
            // content the rule cannot rewrite is fixed by definition
            Err(_) => Ok(orbit.clone()),
        }
    }

    fn coded_partial(
        &self,
        m: &SingleMap,
        code: &CodedAlphabet,
        orbit: &FlowOrbit,
        occurrences: &BTreeMap<usize, String>,
    ) -> Result<FlowOrbit, FlowError> {
        let n = orbit.len();
        let ell = code.length();

        // rotate a free tile to the front so no span or run wraps the seam
        let mut covered = vec![false; n];
        for &p in occurrences.keys() {
            for k in 0..ell {
                covered[(p + k) % n] = true;
            }
        }
        let origin = (0..n)
            .position(|i| !covered[i])
            .expect("partial coding leaves an uncovered tile");
        let rotated = orbit.rotated(origin);
        let tiles = rotated.tiles();
        let occ: BTreeMap<usize, String> = occurrences
            .iter()
            .map(|(&p, s)| ((p + n - origin) % n, s.clone()))
            .collect();

        // maximal runs of back-to-back occurrences
        let mut runs: Vec<(usize, Vec<String>)> = Vec::new();
        for (&p, sym) in &occ {
            match runs.last_mut() {
                Some((start, syms)) if *start + syms.len() * ell == p => {
                    syms.push(sym.clone());
                }
                _ => runs.push((p, vec![sym.clone()])),
            }
        }

        struct Splice {
            host_from: usize,
            host_count: usize,
            new_tiles: Vec<Tile>,
        }
        // assembled below; when no piece is rewritten the input is returned
        // as is, without the internal rotation
        let depth = m.rule.depth();
        let decode = |sym: &str| if sym == m.zero { '0' } else { '1' };
        let mut splices: Vec<Splice> = Vec::new();
        for (start, syms) in &runs {
            let k = syms.len();
            let mut i = 0;
            while i < k && syms[i] != m.sep {
                i += 1; // coding breaks on the left: leading content is fixed
            }
            while i < k {
                let mut j = i + 1;
                let mut block = String::new();
                while j < k && syms[j] != m.sep {
                    block.push(decode(&syms[j]));
                    j += 1;
                }
                // a run end acts as the start of another separator marker
                let (consumed, image) = if block.len() < depth {
                    (block.len(), m.rule.apply(&block).ok())
                } else {
                    (depth, m.rule.long_table().get(&block[..depth]).cloned())
                };
                if let Some(image) = image {
                    let host_from = start + i * ell;
                    let host_count = (1 + consumed) * ell;
                    let piece_len: Rat = tiles[host_from..host_from + host_count]
                        .iter()
                        .map(|t| t.length().clone())
                        .sum();
                    let mut new_symbols: Vec<String> =
                        code.marker(&m.sep).expect("checked").to_vec();
                    for c in image.chars() {
                        let sym = if c == '0' { &m.zero } else { &m.one };
                        new_symbols.extend(code.marker(sym).expect("checked").iter().cloned());
                    }
                    let each =
                        piece_len / Rat::from_integer(num_bigint::BigInt::from(new_symbols.len()));
                    let new_tiles = new_symbols
                        .into_iter()
                        .map(|s| Tile::new(s, each.clone()))
                        .collect::<Result<Vec<_>, _>>()?;
                    splices.push(Splice {
                        host_from,
                        host_count,
                        new_tiles,
                    });
                }
                i = j;
            }
        }

        if splices.is_empty() {
            return Ok(orbit.clone());
        }

        // assemble
        let mut spliced_at: Vec<Option<usize>> = (0..n).map(|_| None).collect();
        for (sid, s) in splices.iter().enumerate() {
            for k in 0..s.host_count {
                spliced_at[s.host_from + k] = Some(sid);
            }
        }
        let mut out: Vec<Tile> = Vec::new();
        let mut kept_out: Vec<Option<usize>> = (0..n).map(|_| None).collect();
        let mut splice_start: Vec<usize> = vec![0; splices.len()];
        let mut i = 0;
        while i < n {
            match spliced_at[i] {
                None => {
                    kept_out[i] = Some(out.len());
                    out.push(tiles[i].clone());
                    i += 1;
                }
                Some(sid) => {
                    splice_start[sid] = out.len();
                    out.extend(splices[sid].new_tiles.iter().cloned());
                    i += splices[sid].host_count;
                }
            }
        }

        let base = rotated.base();
        let new_base = match spliced_at[base.tile] {
            None => OrbitPoint {
                tile: kept_out[base.tile].expect("kept tiles are placed"),
                offset: base.offset.clone(),
            },
            Some(sid) => {
                let s = &splices[sid];
                let mut r = Rat::zero();
                for idx in s.host_from..base.tile {
                    r += tiles[idx].length();
                }
                r += &base.offset;
                let (local, offset) = super::induced::locate_in_tiles(&s.new_tiles, r);
                OrbitPoint {
                    tile: splice_start[sid] + local,
                    offset,
                }
            }
        };
        FlowOrbit::new(out, new_base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Alphabet;
    use crate::thompson::VElement;

    fn chars(w: &str) -> Vec<String> {
        w.chars().map(|c| c.to_string()).collect()
    }

    /// Three mutually unbordered length-6 marker words over {0,1}. No
    /// shorter length admits three such words over a binary alphabet.
    fn fixture_code() -> CodedAlphabet {
        CodedAlphabet::new([
            ("#", chars("000111")),
            ("0", chars("001011")),
            ("1", chars("010011")),
        ])
        .unwrap()
    }

    #[test]
    fn marker_validation() {
        assert!(CodedAlphabet::new([("a", chars("01"))]).is_ok());
        // self-bordered word
        assert!(matches!(
            CodedAlphabet::new([("a", chars("010"))]),
            Err(FlowError::MarkerShape(_))
        ));
        // unequal lengths
        assert!(matches!(
            CodedAlphabet::new([("a", chars("01")), ("b", chars("1"))]),
            Err(FlowError::MarkerShape(_))
        ));
        // cross border: prefix "1" of b is a suffix of a
        assert!(matches!(
            CodedAlphabet::new([("a", chars("001")), ("b", chars("110"))]),
            Err(FlowError::MarkerShape(_))
        ));
        // no pair of length-3 binary words is mutually unbordered
        assert!(matches!(
            CodedAlphabet::new([("a", chars("001")), ("b", chars("011"))]),
            Err(FlowError::MarkerShape(_))
        ));
    }

    #[test]
    fn fixture_markers_parse_uniquely() {
        let code = fixture_code();
        assert_eq!(code.length(), 6);
        assert_eq!(code.marker("#"), Some(&chars("000111")[..]));
    }

    #[test]
    fn search_based_markers_over_full_shift() {
        let host = Dfa::full_language(Alphabet::binary());
        let code = CodedAlphabet::from_search(&host, &["0", "1", "#"], 6).unwrap();
        assert_eq!(code.length(), 6);
    }

    #[test]
    fn encoded_swap_orbit_matches_decoded_action() {
        let code = fixture_code();
        let map = InducedMap::from_v_element(&VElement::swap());
        let decoded = FlowOrbit::unit(["#", "1"]).unwrap();
        let encoded = code.encode_orbit(&decoded).unwrap();
        assert_eq!(encoded.len(), 12);
        assert_eq!(encoded.circumference(), crate::flow::rat(2, 1));

        let image = map.apply_coded(&code, &encoded).unwrap();
        let expected = code.encode_orbit(&map.apply(&decoded).unwrap()).unwrap();
        assert_eq!(image.symbol_sequence(), expected.symbol_sequence());
        assert_eq!(image.circumference(), encoded.circumference());
        // spelled markers of the single separator, stretched over the circle
        assert_eq!(image.len(), 6);
    }

    #[test]
    fn orbit_without_markers_is_fixed() {
        let code = fixture_code();
        let map = InducedMap::from_v_element(&VElement::swap());
        let orbit = FlowOrbit::unit(["1", "1", "1", "0"]).unwrap();
        assert_eq!(map.apply_coded(&code, &orbit).unwrap(), orbit);
    }

    #[test]
    fn coding_break_on_the_right_starts_a_virtual_separator() {
        let code = fixture_code();
        let map = InducedMap::from_v_element(&VElement::swap());
        // marker(#) marker(1) then raw content that is not a marker start:
        // the run is cut on the right after the decoded block "1"
        let mut symbols: Vec<String> = Vec::new();
        symbols.extend(code.marker("#").unwrap().iter().cloned());
        symbols.extend(code.marker("1").unwrap().iter().cloned());
        symbols.extend(["1".to_string(), "1".to_string()]);
        let orbit = FlowOrbit::unit(symbols).unwrap();
        let image = map.apply_coded(&code, &orbit).unwrap();
        // swap sends the short block "1" to ε, so the piece re-encodes to a
        // single stretched separator marker; the raw tail is untouched
        let mut expected: Vec<String> = code.marker("#").unwrap().to_vec();
        expected.extend(["1".to_string(), "1".to_string()]);
        assert_eq!(
            image.symbol_sequence(),
            FlowOrbit::unit(expected).unwrap().symbol_sequence()
        );
        assert_eq!(image.circumference(), orbit.circumference());
    }

    #[test]
    fn coding_break_on_the_left_fixes_content() {
        let code = fixture_code();
        let map = InducedMap::from_v_element(&VElement::swap());
        // a lone content marker with no separator anywhere: parsed, but no
        // anchor reaches it
        let mut symbols: Vec<String> = code.marker("1").unwrap().to_vec();
        symbols.extend(["1".to_string(), "0".to_string()]);
        let orbit = FlowOrbit::unit(symbols).unwrap();
        assert_eq!(map.apply_coded(&code, &orbit).unwrap(), orbit);
    }

    #[test]
    fn pair_maps_cannot_be_coded() {
        let code = fixture_code();
        let map = InducedMap::from_tv_element(&crate::thompson::TwoVElement::baker());
        let orbit = FlowOrbit::unit(["1", "0"]).unwrap();
        assert_eq!(
            map.apply_coded(&code, &orbit).unwrap_err(),
            FlowError::WrongMode
        );
    }

    #[test]
    fn full_circle_round_trip_through_rule() {
        // an identity rule leaves any fully coded orbit unchanged up to
        // rotation and regrouping of lengths
        let code = fixture_code();
        let map = InducedMap::from_v_element(&VElement::identity());
        let decoded = FlowOrbit::unit(["#", "1", "#", "0", "1"]).unwrap();
        let encoded = code.encode_orbit(&decoded).unwrap();
        let image = map.apply_coded(&code, &encoded).unwrap();
        assert_eq!(image.symbol_sequence(), encoded.symbol_sequence());
        assert_eq!(image.circumference(), encoded.circumference());
    }
}
