//! Discretized mapping-torus machinery: periodic flow orbits as circular
//! sequences of symbol-labeled tiles with exact rational lengths, and the
//! induced rewriting of those orbits by veelike rules. Anchors (separator
//! tiles) stay fixed; rewritten pieces are uniformly rescaled so the total
//! circumference is preserved exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod coded;
mod induced;

pub use coded::CodedAlphabet;
pub use induced::{
    random_admissible_orbit, simulate_embedding, orbit_fixed_check, InducedMap, OrbitCheck,
    OrbitDefect,
};

/// Exact rational length.
pub type Rat = BigRational;

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rat_from_string(s: &str) -> Result<Rat, FlowError> {
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| FlowError::BadRational(s.to_string()))
    };
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let den = parse(d)?;
            if den.is_zero() {
                return Err(FlowError::BadRational(s.to_string()));
            }
            Rat::new(parse(n)?, den)
        }
        None => Rat::from_integer(parse(s)?),
    };
    Ok(r)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("an orbit needs at least one tile")]
    EmptyOrbit,
    #[error("tile length {0} is not positive")]
    NonPositiveLength(String),
    #[error("basepoint tile {tile} out of range 0..{tiles}")]
    BadBasePoint { tile: usize, tiles: usize },
    #[error("basepoint offset lies outside its tile")]
    OffsetOutOfRange,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("orbit is inadmissible: bigram {from:?}{to:?} at tile {position}")]
    Inadmissible {
        position: usize,
        from: String,
        to: String,
    },
    #[error("orbit symbol {0:?} is not handled by this map")]
    UnknownSymbol(String),
    #[error("rule has no image for block {0:?}")]
    RuleDomain(String),
    #[error("operation requires a single-mode induced map")]
    WrongMode,
    #[error("invalid marker set: {0}")]
    MarkerShape(String),
    #[error("no marker word for symbol {0:?}")]
    MissingMarker(String),
}

/// One labeled interval of a flow orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    symbol: String,
    length: Rat,
}

impl Tile {
    pub fn new(symbol: impl Into<String>, length: Rat) -> Result<Self, FlowError> {
        if !length.is_positive() {
            return Err(FlowError::NonPositiveLength(rat_to_string(&length)));
        }
        Ok(Tile {
            symbol: symbol.into(),
            length,
        })
    }

    pub fn unit(symbol: impl Into<String>) -> Self {
        Tile {
            symbol: symbol.into(),
            length: Rat::one(),
        }
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn length(&self) -> &Rat {
        &self.length
    }
}

/// A point on an orbit: a tile index and an offset within that tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub tile: usize,
    pub offset: Rat,
}

impl OrbitPoint {
    pub fn start_of(tile: usize) -> Self {
        OrbitPoint {
            tile,
            offset: Rat::zero(),
        }
    }
}

/// A periodic point of the mapping torus: a non-empty circular sequence of
/// tiles together with a basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowOrbit {
    tiles: Vec<Tile>,
    base: OrbitPoint,
}

#[derive(Serialize, Deserialize)]
struct TileRepr {
    s: String,
    len: String,
}

#[derive(Serialize, Deserialize)]
struct BaseRepr {
    tile: usize,
    off: String,
}

#[derive(Serialize, Deserialize)]
struct FlowOrbitRepr {
    tiles: Vec<TileRepr>,
    base: BaseRepr,
}

impl Serialize for FlowOrbit {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        FlowOrbitRepr {
            tiles: self
                .tiles
                .iter()
                .map(|t| TileRepr {
                    s: t.symbol.clone(),
                    len: rat_to_string(&t.length),
                })
                .collect(),
            base: BaseRepr {
                tile: self.base.tile,
                off: rat_to_string(&self.base.offset),
            },
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FlowOrbit {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = FlowOrbitRepr::deserialize(de)?;
        let tiles = repr
            .tiles
            .into_iter()
            .map(|t| {
                let len = rat_from_string(&t.len).map_err(D::Error::custom)?;
                Tile::new(t.s, len).map_err(D::Error::custom)
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        let base = OrbitPoint {
            tile: repr.base.tile,
            offset: rat_from_string(&repr.base.off).map_err(D::Error::custom)?,
        };
        FlowOrbit::new(tiles, base).map_err(D::Error::custom)
    }
}

impl FlowOrbit {
    pub fn new(tiles: Vec<Tile>, base: OrbitPoint) -> Result<Self, FlowError> {
        if tiles.is_empty() {
            return Err(FlowError::EmptyOrbit);
        }
        if base.tile >= tiles.len() {
            return Err(FlowError::BadBasePoint {
                tile: base.tile,
                tiles: tiles.len(),
            });
        }
        if base.offset.is_negative() || base.offset >= tiles[base.tile].length {
            return Err(FlowError::OffsetOutOfRange);
        }
        Ok(FlowOrbit { tiles, base })
    }

    /// Unit-length tiles with the basepoint at the start of the first tile.
    pub fn unit<I, S>(symbols: I) -> Result<Self, FlowError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tiles: Vec<Tile> = symbols.into_iter().map(Tile::unit).collect();
        FlowOrbit::new(tiles, OrbitPoint::start_of(0))
    }

    /// Unit-length orbit of a separator followed by the characters of a
    /// binary word.
    pub fn separator_and_word(sep: &str, word: &str) -> Result<Self, FlowError> {
        let mut symbols = vec![sep.to_string()];
        symbols.extend(word.chars().map(|c| c.to_string()));
        FlowOrbit::unit(symbols)
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn base(&self) -> &OrbitPoint {
        &self.base
    }

    pub fn circumference(&self) -> Rat {
        self.tiles.iter().map(|t| t.length.clone()).sum()
    }

    /// The raw symbol sequence in tile order.
    pub fn symbols(&self) -> Vec<String> {
        self.tiles.iter().map(|t| t.symbol.clone()).collect()
    }

    /// The circular symbol word in its canonical rotation (the
    /// lexicographically least one); lengths are discarded.
    pub fn symbol_sequence(&self) -> Vec<String> {
        let raw = self.symbols();
        let n = raw.len();
        let mut best: Option<Vec<String>> = None;
        for k in 0..n {
            let rotation: Vec<String> = (0..n).map(|i| raw[(k + i) % n].clone()).collect();
            if best.as_ref().map_or(true, |b| rotation < *b) {
                best = Some(rotation);
            }
        }
        best.expect("orbit is non-empty")
    }

    /// Coordinate of the basepoint measured from the start of tile 0.
    pub fn base_coordinate(&self) -> Rat {
        let before: Rat = self.tiles[..self.base.tile]
            .iter()
            .map(|t| t.length.clone())
            .sum();
        before + self.base.offset.clone()
    }

    /// The tile and offset at a given coordinate (taken modulo the
    /// circumference).
    pub fn locate(&self, coordinate: &Rat) -> OrbitPoint {
        let total = self.circumference();
        let mut r = coordinate % &total;
        if r.is_negative() {
            r += &total;
        }
        for (i, t) in self.tiles.iter().enumerate() {
            if r < t.length {
                return OrbitPoint { tile: i, offset: r };
            }
            r -= &t.length;
        }
        OrbitPoint::start_of(0)
    }

    /// Rotates the representation so the tile at `k` becomes tile 0. Purely
    /// a re-indexing: the underlying circle and basepoint are unchanged.
    pub fn rotated(&self, k: usize) -> FlowOrbit {
        let n = self.tiles.len();
        let k = k % n;
        let tiles: Vec<Tile> = (0..n).map(|i| self.tiles[(k + i) % n].clone()).collect();
        let base = OrbitPoint {
            tile: (self.base.tile + n - k) % n,
            offset: self.base.offset.clone(),
        };
        FlowOrbit { tiles, base }
    }
}

impl fmt::Display for FlowOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tiles
            .iter()
            .map(|t| format!("{}:{}", t.symbol, rat_to_string(&t.length)))
            .collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_validation() {
        assert_eq!(FlowOrbit::unit(Vec::<String>::new()).unwrap_err(), FlowError::EmptyOrbit);
        assert_eq!(
            Tile::new("0", rat(0, 1)).unwrap_err(),
            FlowError::NonPositiveLength("0/1".into())
        );
        let tiles = vec![Tile::unit("#"), Tile::unit("1")];
        assert!(matches!(
            FlowOrbit::new(tiles.clone(), OrbitPoint::start_of(5)),
            Err(FlowError::BadBasePoint { .. })
        ));
        assert!(matches!(
            FlowOrbit::new(
                tiles,
                OrbitPoint {
                    tile: 0,
                    offset: rat(3, 2)
                }
            ),
            Err(FlowError::OffsetOutOfRange)
        ));
    }

    #[test]
    fn canonical_rotation_is_lexicographically_least() {
        let o = FlowOrbit::unit(["1", "#"]).unwrap();
        assert_eq!(o.symbol_sequence(), vec!["#", "1"]);
        // lengths do not matter for the sequence
        let o2 = FlowOrbit::new(
            vec![
                Tile::new("1", rat(7, 2)).unwrap(),
                Tile::new("#", rat(1, 3)).unwrap(),
            ],
            OrbitPoint::start_of(0),
        )
        .unwrap();
        assert_eq!(o.symbol_sequence(), o2.symbol_sequence());
    }

    #[test]
    fn locate_walks_the_circle() {
        let o = FlowOrbit::new(
            vec![
                Tile::new("#", rat(1, 2)).unwrap(),
                Tile::new("1", rat(3, 2)).unwrap(),
            ],
            OrbitPoint::start_of(0),
        )
        .unwrap();
        assert_eq!(o.circumference(), rat(2, 1));
        assert_eq!(o.locate(&rat(1, 4)), OrbitPoint { tile: 0, offset: rat(1, 4) });
        assert_eq!(o.locate(&rat(1, 1)), OrbitPoint { tile: 1, offset: rat(1, 2) });
        assert_eq!(o.locate(&rat(9, 4)), OrbitPoint { tile: 0, offset: rat(1, 4) });
        assert_eq!(o.locate(&rat(-1, 4)), OrbitPoint { tile: 1, offset: rat(5, 4) });
    }

    #[test]
    fn rotation_preserves_the_basepoint() {
        let o = FlowOrbit::new(
            vec![Tile::unit("#"), Tile::unit("0"), Tile::unit("1")],
            OrbitPoint {
                tile: 1,
                offset: rat(1, 2),
            },
        )
        .unwrap();
        let r = o.rotated(1);
        assert_eq!(r.symbols(), vec!["0", "1", "#"]);
        assert_eq!(r.base().tile, 0);
        // same physical point: coordinates differ by the rotation amount
        assert_eq!(r.base_coordinate(), rat(1, 2));
        assert_eq!(o.base_coordinate(), rat(3, 2));
    }

    #[test]
    fn orbit_json_round_trip() {
        let o = FlowOrbit::new(
            vec![
                Tile::new("#", rat(2, 1)).unwrap(),
                Tile::new("1", rat(1, 3)).unwrap(),
            ],
            OrbitPoint::start_of(0),
        )
        .unwrap();
        let json = serde_json::to_string(&o).unwrap();
        assert_eq!(
            json,
            r##"{"tiles":[{"s":"#","len":"2/1"},{"s":"1","len":"1/3"}],"base":{"tile":0,"off":"0/1"}}"##
        );
        let back: FlowOrbit = serde_json::from_str(&json).unwrap();
        assert_eq!(back, o);
        assert!(serde_json::from_str::<FlowOrbit>(r#"{"tiles":[],"base":{"tile":0,"off":"0"}}"#).is_err());
    }
}
